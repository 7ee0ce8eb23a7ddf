use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::{BigInt, BigRational, One, Signed, Zero};
use serde_json::{json, Value};

use super::order::TermOrder;
use super::table::{require_same_table, VariableTable};
use crate::error::{Error, Result};

/// A sparse monomial: (variable index, exponent) pairs sorted by index, with
/// no zero exponents stored. The empty list is the monomial 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    exps: Vec<(usize, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn variable(index: usize) -> Self {
        Monomial {
            exps: vec![(index, 1)],
        }
    }

    /// Builds a monomial from (index, exponent) pairs; zero exponents are
    /// dropped and duplicate indices merged.
    pub fn from_exps(pairs: &[(usize, u32)]) -> Self {
        let mut merged: BTreeMap<usize, u32> = BTreeMap::new();
        for &(i, e) in pairs {
            if e > 0 {
                *merged.entry(i).or_insert(0) += e;
            }
        }
        Monomial {
            exps: merged.into_iter().collect(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exps(&self) -> &[(usize, u32)] {
        &self.exps
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.exps
            .binary_search_by_key(&var, |&(i, _)| i)
            .map(|pos| self.exps[pos].1)
            .unwrap_or(0)
    }

    /// Support restricted to a single variable, i.e. a pure power.
    pub fn is_pure_power_of(&self, var: usize) -> bool {
        self.exps.len() == 1 && self.exps[0].0 == var
    }

    pub fn weighted_degree(&self, table: &VariableTable) -> u64 {
        self.exps
            .iter()
            .map(|&(i, e)| table.degree(i) * e as u64)
            .sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut merged: BTreeMap<usize, u32> = self.exps.iter().copied().collect();
        for &(i, e) in &other.exps {
            *merged.entry(i).or_insert(0) += e;
        }
        Monomial {
            exps: merged.into_iter().collect(),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().all(|&(i, e)| other.exponent(i) >= e)
    }

    /// `other / self`, when divisible.
    pub fn divide_into(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(other.exps.len());
        for &(i, e) in &other.exps {
            let d = self.exponent(i);
            if d > e {
                return None;
            }
            if e - d > 0 {
                out.push((i, e - d));
            }
        }
        // Every exponent of self must be matched in other.
        if self.exps.iter().any(|&(i, e)| other.exponent(i) < e) {
            return None;
        }
        Some(Monomial { exps: out })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut merged: BTreeMap<usize, u32> = self.exps.iter().copied().collect();
        for &(i, e) in &other.exps {
            let entry = merged.entry(i).or_insert(0);
            *entry = (*entry).max(e);
        }
        Monomial {
            exps: merged.into_iter().collect(),
        }
    }

    pub fn is_coprime_with(&self, other: &Monomial) -> bool {
        self.exps.iter().all(|&(i, _)| other.exponent(i) == 0)
    }

    fn render(&self, table: &VariableTable) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        let mut parts = Vec::with_capacity(self.exps.len());
        for &(i, e) in &self.exps {
            if e == 1 {
                parts.push(table.name(i).to_string());
            } else {
                parts.push(format!("{}^{}", table.name(i), e));
            }
        }
        parts.join("*")
    }
}

/// A sparse polynomial with exact rational coefficients over a shared
/// variable table. No zero coefficients are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    table: Arc<VariableTable>,
    terms: BTreeMap<Monomial, BigRational>,
}

impl Polynomial {
    pub fn zero(table: &Arc<VariableTable>) -> Self {
        Polynomial {
            table: Arc::clone(table),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(table: &Arc<VariableTable>) -> Self {
        Polynomial::constant(table, BigRational::one())
    }

    pub fn constant(table: &Arc<VariableTable>, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Polynomial {
            table: Arc::clone(table),
            terms,
        }
    }

    pub fn integer(table: &Arc<VariableTable>, c: i64) -> Self {
        Polynomial::constant(table, BigRational::from(BigInt::from(c)))
    }

    pub fn variable(table: &Arc<VariableTable>, index: usize) -> Result<Self> {
        if index >= table.len() {
            return Err(Error::argument(format!(
                "variable index {index} out of range"
            )));
        }
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::variable(index), BigRational::one());
        Ok(Polynomial {
            table: Arc::clone(table),
            terms,
        })
    }

    pub fn from_terms(
        table: &Arc<VariableTable>,
        terms: Vec<(Monomial, BigRational)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (m, c) in terms {
            if let Some(&(i, _)) = m.exps().iter().find(|&&(i, _)| i >= table.len()) {
                return Err(Error::argument(format!(
                    "variable index {i} out of range"
                )));
            }
            let entry = map.entry(m).or_insert_with(BigRational::zero);
            *entry += c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Polynomial {
            table: Arc::clone(table),
            terms: map,
        })
    }

    pub fn table(&self) -> &Arc<VariableTable> {
        &self.table
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        require_same_table(&self.table, &other.table)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let entry = terms.entry(m.clone()).or_insert_with(BigRational::zero);
            *entry += c;
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(Polynomial {
            table: Arc::clone(&self.table),
            terms,
        })
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            table: Arc::clone(&self.table),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.table);
        }
        Polynomial {
            table: Arc::clone(&self.table),
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k * c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        require_same_table(&self.table, &other.table)?;
        let mut terms: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let entry = terms.entry(m).or_insert_with(BigRational::zero);
                *entry += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(Polynomial {
            table: Arc::clone(&self.table),
            terms,
        })
    }

    /// Multiplies by a bare monomial (no table consistency concerns beyond
    /// index range, which the monomial inherited from this table).
    pub fn mul_monomial(&self, m: &Monomial, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.table);
        }
        Polynomial {
            table: Arc::clone(&self.table),
            terms: self
                .terms
                .iter()
                .map(|(mm, cc)| (mm.mul(m), cc * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Result<Polynomial> {
        let mut acc = Polynomial::one(&self.table);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Whether every term has the same weighted degree; returns it if so.
    pub fn homogeneous_degree(&self) -> Option<u64> {
        let mut it = self.terms.keys();
        let first = it.next()?.weighted_degree(&self.table);
        for m in it {
            if m.weighted_degree(&self.table) != first {
                return None;
            }
        }
        Some(first)
    }

    /// The maximal term under `order`, if nonzero.
    pub fn leading_term(&self, order: &TermOrder) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().max_by(|(a, _), (b, _)| {
            order.compare(a, b, &self.table)
        })
    }

    /// Scales so the leading coefficient under `order` is 1.
    pub fn monic(&self, order: &TermOrder) -> Polynomial {
        match self.leading_term(order) {
            None => self.clone(),
            Some((_, c)) => {
                let inv = BigRational::one() / c.clone();
                self.scale(&inv)
            }
        }
    }

    /// Transports this polynomial into `target` by variable name, requiring
    /// every used variable to exist there with the same degree.
    pub fn embed_into(&self, target: &Arc<VariableTable>) -> Result<Polynomial> {
        let mut map: BTreeMap<usize, usize> = BTreeMap::new();
        for m in self.terms.keys() {
            for &(i, _) in m.exps() {
                if !map.contains_key(&i) {
                    let name = self.table.name(i);
                    let j = target.index_of(name).ok_or_else(|| {
                        Error::argument(format!("target table lacks variable {name}"))
                    })?;
                    if target.degree(j) != self.table.degree(i) {
                        return Err(Error::argument(format!(
                            "variable {name} changes degree between tables"
                        )));
                    }
                    map.insert(i, j);
                }
            }
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let exps: Vec<(usize, u32)> =
                    m.exps().iter().map(|&(i, e)| (map[&i], e)).collect();
                (Monomial::from_exps(&exps), c.clone())
            })
            .collect();
        Polynomial::from_terms(target, terms)
    }

    /// Renames variables within the same table via `map[old] = new`, which
    /// must be a degree-preserving bijection of indices.
    pub fn rename_variables(&self, map: &[usize]) -> Result<Polynomial> {
        if map.len() != self.table.len() {
            return Err(Error::argument("rename map has wrong length"));
        }
        for (old, &new) in map.iter().enumerate() {
            if new >= self.table.len() || self.table.degree(old) != self.table.degree(new) {
                return Err(Error::argument("rename map must preserve degrees"));
            }
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let exps: Vec<(usize, u32)> =
                    m.exps().iter().map(|&(i, e)| (map[i], e)).collect();
                (Monomial::from_exps(&exps), c.clone())
            })
            .collect();
        Polynomial::from_terms(&self.table, terms)
    }

    /// Substitutes polynomials for variables. `values[i]` replaces variable
    /// `i`; all values must live on the same table as each other.
    pub fn substitute(&self, values: &[Polynomial]) -> Result<Polynomial> {
        if values.len() != self.table.len() {
            return Err(Error::argument("substitution needs one value per variable"));
        }
        let target = values
            .first()
            .map(|p| Arc::clone(p.table()))
            .unwrap_or_else(|| Arc::clone(&self.table));
        let mut acc = Polynomial::zero(&target);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(&target, c.clone());
            for &(i, e) in m.exps() {
                term = term.mul(&values[i].pow(e)?)?;
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// Terms in descending order under `order` (canonical rendering order).
    pub fn sorted_terms(&self, order: &TermOrder) -> Vec<(&Monomial, &BigRational)> {
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| order.compare(b, a, &self.table));
        terms
    }

    /// Canonical text rendering under `order`.
    pub fn render(&self, order: &TermOrder) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.sorted_terms(order).into_iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if negative {
                    out.push('-');
                }
            } else if negative {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let coeff_is_one = abs.is_one();
            if m.is_one() {
                out.push_str(&abs.to_string());
            } else if coeff_is_one {
                out.push_str(&m.render(&self.table));
            } else {
                out.push_str(&format!("{}*{}", abs, m.render(&self.table)));
            }
        }
        out
    }

    /// JSON encoding: an array of `{coeff, exps}` objects in descending
    /// canonical order, with coefficients as exact rational strings.
    pub fn to_json(&self, order: &TermOrder) -> Value {
        let mut arr = Vec::with_capacity(self.terms.len());
        for (m, c) in self.sorted_terms(order) {
            let mut exps = serde_json::Map::new();
            for &(i, e) in m.exps() {
                exps.insert(self.table.name(i).to_string(), json!(e));
            }
            arr.push(json!({ "coeff": c.to_string(), "exps": Value::Object(exps) }));
        }
        Value::Array(arr)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&TermOrder::degrevlex(self.table.len())))
    }
}
