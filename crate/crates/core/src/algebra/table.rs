use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};

/// An ordered list of named variables with positive integer degrees.
///
/// The listed order fixes both the default term-order priority and the
/// canonical rendering order; two tables are interchangeable exactly when
/// they agree as lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableTable {
    names: Vec<String>,
    degrees: Vec<u64>,
    index: BTreeMap<String, usize>,
}

impl VariableTable {
    /// Builds a table, rejecting duplicate names, empty names, and degree 0.
    pub fn try_new(vars: Vec<(String, u64)>) -> Result<Arc<Self>> {
        let mut names = Vec::with_capacity(vars.len());
        let mut degrees = Vec::with_capacity(vars.len());
        let mut index = BTreeMap::new();
        for (pos, (name, degree)) in vars.into_iter().enumerate() {
            if name.is_empty() {
                return Err(Error::argument("variable name must be nonempty"));
            }
            if degree == 0 {
                return Err(Error::argument(format!(
                    "variable {name} must have positive degree"
                )));
            }
            if index.insert(name.clone(), pos).is_some() {
                return Err(Error::argument(format!("duplicate variable name {name}")));
            }
            names.push(name);
            degrees.push(degree);
        }
        Ok(Arc::new(VariableTable {
            names,
            degrees,
            index,
        }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn degree(&self, i: usize) -> u64 {
        self.degrees[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.names
            .iter()
            .map(|s| s.as_str())
            .zip(self.degrees.iter().copied())
    }
}

/// Checks that two polynomials' tables are interchangeable.
pub(crate) fn require_same_table(a: &Arc<VariableTable>, b: &Arc<VariableTable>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::argument(
            "operands belong to different variable tables",
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_zero_degree() {
        assert!(VariableTable::try_new(vec![("h1".into(), 1), ("h1".into(), 1)]).is_err());
        assert!(VariableTable::try_new(vec![("h1".into(), 0)]).is_err());
        let t = VariableTable::try_new(vec![("h1".into(), 1), ("x{1,2}".into(), 2)]).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.index_of("x{1,2}"), Some(1));
        assert_eq!(t.degree(1), 2);
    }
}
