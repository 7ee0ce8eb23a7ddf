use std::cmp::Ordering;
use std::fmt;

use super::poly::Monomial;
use super::table::VariableTable;

/// The two supported graded orders. Both refine weighted total degree; they
/// differ in how ties are broken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderKind {
    /// Graded reverse lexicographic: among equal degrees, the monomial with
    /// the smaller exponent at the last differing priority position wins.
    DegRevLex,
    /// Graded lexicographic: among equal degrees, the monomial with the
    /// larger exponent at the first differing priority position wins.
    DegLex,
}

/// A weighted graded term order with an explicit variable priority list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermOrder {
    kind: OrderKind,
    /// `priority[j]` is the variable index at priority position `j`.
    priority: Vec<usize>,
}

impl TermOrder {
    pub fn degrevlex(num_vars: usize) -> Self {
        TermOrder {
            kind: OrderKind::DegRevLex,
            priority: (0..num_vars).collect(),
        }
    }

    pub fn deglex(num_vars: usize) -> Self {
        TermOrder {
            kind: OrderKind::DegLex,
            priority: (0..num_vars).collect(),
        }
    }

    /// A graded order with a caller-chosen variable priority. `priority[0]`
    /// is the most significant variable; the list must be a permutation of
    /// `0..n`.
    pub fn with_priority(kind: OrderKind, priority: Vec<usize>) -> crate::Result<Self> {
        let mut seen = priority.clone();
        seen.sort_unstable();
        if seen != (0..priority.len()).collect::<Vec<_>>() {
            return Err(crate::Error::argument(
                "term-order priority must be a permutation of the variable indices",
            ));
        }
        Ok(TermOrder { kind, priority })
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn num_vars(&self) -> usize {
        self.priority.len()
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            OrderKind::DegRevLex => "degrevlex",
            OrderKind::DegLex => "deglex",
        }
    }

    /// Compares two monomials; `Greater` means `a` is the larger term.
    pub fn compare(&self, a: &Monomial, b: &Monomial, table: &VariableTable) -> Ordering {
        let da = a.weighted_degree(table);
        let db = b.weighted_degree(table);
        match da.cmp(&db) {
            Ordering::Equal => {}
            other => return other,
        }
        match self.kind {
            OrderKind::DegRevLex => {
                for &v in self.priority.iter().rev() {
                    let ea = a.exponent(v);
                    let eb = b.exponent(v);
                    match ea.cmp(&eb) {
                        Ordering::Equal => continue,
                        // Smaller exponent late in the priority list wins.
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                    }
                }
                Ordering::Equal
            }
            OrderKind::DegLex => {
                for &v in &self.priority {
                    let ea = a.exponent(v);
                    let eb = b.exponent(v);
                    match ea.cmp(&eb) {
                        Ordering::Equal => continue,
                        other => return other,
                    }
                }
                Ordering::Equal
            }
        }
    }

    /// A sort key vector: `key(a) > key(b)` (lexicographically) exactly when
    /// `a` is the larger monomial. Used to keep reduction frontiers in order.
    pub fn sort_key(&self, m: &Monomial, table: &VariableTable) -> Vec<i64> {
        let mut key = Vec::with_capacity(self.priority.len() + 1);
        key.push(m.weighted_degree(table) as i64);
        match self.kind {
            OrderKind::DegRevLex => {
                for &v in self.priority.iter().rev() {
                    key.push(-(m.exponent(v) as i64));
                }
            }
            OrderKind::DegLex => {
                for &v in &self.priority {
                    key.push(m.exponent(v) as i64);
                }
            }
        }
        key
    }
}

impl fmt::Display for TermOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}
