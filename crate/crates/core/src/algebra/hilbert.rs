use std::collections::BTreeSet;

use serde::Serialize;

use super::groebner::GroebnerBasis;
use super::poly::Monomial;
use crate::error::{Error, Result};

/// Ranks by weighted degree, trailing zeros trimmed. Index `d` is the rank
/// in degree `d`; degrees beyond the stored length have rank zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankVector(Vec<u64>);

impl RankVector {
    pub fn new(mut ranks: Vec<u64>) -> Self {
        while ranks.last() == Some(&0) {
            ranks.pop();
        }
        RankVector(ranks)
    }

    /// The rank vector of a point: rank 1 in degree 0.
    pub fn point() -> Self {
        RankVector(vec![1])
    }

    /// The rank vector `(1, 1, .., 1)` with `dim + 1` entries — projective
    /// space of the given dimension.
    pub fn projective_space(dim: u64) -> Self {
        RankVector(vec![1; dim as usize + 1])
    }

    pub fn ranks(&self) -> &[u64] {
        &self.0
    }

    pub fn get(&self, degree: usize) -> u64 {
        self.0.get(degree).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree of the last nonzero rank, if any.
    pub fn top_degree(&self) -> Option<usize> {
        if self.0.is_empty() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn is_palindromic(&self) -> bool {
        let n = self.0.len();
        (0..n / 2).all(|i| self.0[i] == self.0[n - 1 - i])
    }

    pub fn top_rank_is_one(&self) -> bool {
        self.0.last() == Some(&1)
    }

    /// Degreewise sum.
    pub fn add(&self, other: &RankVector) -> RankVector {
        let len = self.0.len().max(other.0.len());
        let mut out = vec![0u64; len];
        for (d, slot) in out.iter_mut().enumerate() {
            *slot = self.get(d) + other.get(d);
        }
        RankVector::new(out)
    }

    /// Shift up by `k` degrees (a Tate-twist style shift of the grading).
    pub fn shift(&self, k: u64) -> RankVector {
        if self.0.is_empty() {
            return self.clone();
        }
        let mut out = vec![0u64; self.0.len() + k as usize];
        for (d, &r) in self.0.iter().enumerate() {
            out[d + k as usize] = r;
        }
        RankVector::new(out)
    }

    /// Convolution: ranks of a product of spaces (Künneth).
    pub fn convolve(&self, other: &RankVector) -> RankVector {
        if self.0.is_empty() || other.0.is_empty() {
            return RankVector::new(Vec::new());
        }
        let mut out = vec![0u64; self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RankVector::new(out)
    }

    /// `self` convolved with itself `k` times total (`k = 0` gives a point).
    pub fn convolve_power(&self, k: u64) -> RankVector {
        let mut acc = RankVector::point();
        for _ in 0..k {
            acc = acc.convolve(self);
        }
        acc
    }
}

/// Ranks by weighted degree of the quotient by a Groebner basis ideal,
/// counted via standard monomials (monomials divisible by no leading
/// monomial), for degrees `0 ..= top`.
///
/// Requires the quotient to be Artinian: every variable must have a pure
/// power among the leading monomials. Otherwise some variable is not
/// nilpotent in the quotient and the count would not terminate.
pub fn hilbert_function(basis: &GroebnerBasis, top: u64) -> Result<RankVector> {
    let table = basis.table();
    let leads = basis.leading_monomials();

    if basis.is_unit_ideal() {
        return Ok(RankVector::new(Vec::new()));
    }
    for v in 0..table.len() {
        if !leads.iter().any(|m| m.is_pure_power_of(v)) {
            return Err(Error::non_artinian(format!(
                "variable {} has no pure power among the leading monomials",
                table.name(v)
            )));
        }
    }

    let is_standard = |m: &Monomial| -> bool { !leads.iter().any(|lm| lm.divides(m)) };

    // Standard monomials are closed under division, so each one of positive
    // degree arises from a smaller one by a single variable; build levels by
    // weighted degree.
    let mut levels: Vec<BTreeSet<Monomial>> = Vec::with_capacity(top as usize + 1);
    let mut level0 = BTreeSet::new();
    level0.insert(Monomial::one());
    levels.push(level0);
    for d in 1..=top {
        let mut level = BTreeSet::new();
        for v in 0..table.len() {
            let w = table.degree(v);
            if w > d {
                continue;
            }
            let below = &levels[(d - w) as usize];
            let step = Monomial::variable(v);
            for m in below {
                let candidate = m.mul(&step);
                if is_standard(&candidate) {
                    level.insert(candidate);
                }
            }
        }
        levels.push(level);
    }
    Ok(RankVector::new(
        levels.iter().map(|l| l.len() as u64).collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{buchberger, Polynomial, TermOrder, VariableTable};
    use std::sync::Arc;

    fn vars(names: &[&str]) -> Arc<VariableTable> {
        VariableTable::try_new(names.iter().map(|n| (n.to_string(), 1)).collect()).unwrap()
    }

    #[test]
    fn rank_vector_operations() {
        let p2 = RankVector::projective_space(2);
        let square = p2.convolve(&p2);
        assert_eq!(square.ranks(), &[1, 2, 3, 2, 1]);
        assert_eq!(p2.convolve_power(3).ranks(), &[1, 3, 6, 7, 6, 3, 1]);
        assert_eq!(square.shift(1).ranks(), &[0, 1, 2, 3, 2, 1]);
        assert!(square.is_palindromic());
        assert!(square.top_rank_is_one());
        assert!(!RankVector::new(vec![1, 2]).is_palindromic());
        assert_eq!(RankVector::new(vec![1, 0, 0]).ranks(), &[1]);
        assert_eq!(
            RankVector::new(vec![1, 1]).add(&RankVector::new(vec![0, 1]).shift(1)).ranks(),
            &[1, 1, 1]
        );
    }

    #[test]
    fn truncated_polynomial_ring_ranks() {
        // Q[h1,h2]/(h1^3, h2^3) has ranks (1,2,3,2,1).
        let t = vars(&["h1", "h2"]);
        let h1 = Polynomial::variable(&t, 0).unwrap();
        let h2 = Polynomial::variable(&t, 1).unwrap();
        let gb = buchberger(
            &[h1.pow(3).unwrap(), h2.pow(3).unwrap()],
            TermOrder::degrevlex(2),
        )
        .unwrap();
        let ranks = hilbert_function(&gb, 4).unwrap();
        assert_eq!(ranks.ranks(), &[1, 2, 3, 2, 1]);
    }

    #[test]
    fn two_point_bracket_ring_of_the_plane() {
        // Q[h1,h2,x]/(h1^3, h2^3, h1^2 x, h2^2 x, x^2-(h1+h2)x+h1h2)
        // has ranks (1,3,5,3,1).
        let t = vars(&["h1", "h2", "x{1,2}"]);
        let h1 = Polynomial::variable(&t, 0).unwrap();
        let h2 = Polynomial::variable(&t, 1).unwrap();
        let x = Polynomial::variable(&t, 2).unwrap();
        let chern = x
            .pow(2)
            .unwrap()
            .sub(&h1.add(&h2).unwrap().mul(&x).unwrap())
            .unwrap()
            .add(&h1.mul(&h2).unwrap())
            .unwrap();
        let gens = vec![
            h1.pow(3).unwrap(),
            h2.pow(3).unwrap(),
            h1.pow(2).unwrap().mul(&x).unwrap(),
            h2.pow(2).unwrap().mul(&x).unwrap(),
            chern,
        ];
        for order in [TermOrder::degrevlex(3), TermOrder::deglex(3)] {
            let gb = buchberger(&gens, order).unwrap();
            let ranks = hilbert_function(&gb, 4).unwrap();
            assert_eq!(ranks.ranks(), &[1, 3, 5, 3, 1]);
        }
    }

    #[test]
    fn non_artinian_is_detected() {
        let t = vars(&["h1", "h2"]);
        let h1 = Polynomial::variable(&t, 0).unwrap();
        let h2 = Polynomial::variable(&t, 1).unwrap();
        let gb = buchberger(&[h1.mul(&h2).unwrap()], TermOrder::degrevlex(2)).unwrap();
        assert!(matches!(
            hilbert_function(&gb, 3),
            Err(crate::error::Error::NonArtinian(_))
        ));
    }

    #[test]
    fn unit_ideal_has_zero_ranks() {
        let t = vars(&["h1"]);
        let one = Polynomial::one(&t);
        let gb = buchberger(&[one], TermOrder::degrevlex(1)).unwrap();
        let ranks = hilbert_function(&gb, 3).unwrap();
        assert!(ranks.is_empty());
    }

    #[test]
    fn weighted_degrees_count_correctly() {
        // Q[a,b]/(a^2, b^2) with deg b = 2: ranks 1,1,1,1 in degrees 0..3.
        let t = VariableTable::try_new(vec![("a".into(), 1), ("b".into(), 2)]).unwrap();
        let a = Polynomial::variable(&t, 0).unwrap();
        let b = Polynomial::variable(&t, 1).unwrap();
        let gb = buchberger(
            &[a.pow(2).unwrap(), b.pow(2).unwrap()],
            TermOrder::degrevlex(2),
        )
        .unwrap();
        let ranks = hilbert_function(&gb, 3).unwrap();
        assert_eq!(ranks.ranks(), &[1, 1, 1, 1]);
    }
}
