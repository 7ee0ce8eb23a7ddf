//! The toy geometric family: `X = P^m` with a linear subspace `D` of
//! codimension `c` (empty when `c = 0`), together with the subvarieties of
//! `X^n` the compactifications blow up — the loci `D_S` where coordinates in
//! `S` land on `D`, and the polydiagonals `Δ_I`.
//!
//! The module supplies the three geometric ingredients the ring builders
//! consume (restriction kernels, Chern polynomials, diagonal classes) and
//! the rank vectors of strata the additive decomposition sums over.

use std::fmt;
use std::sync::Arc;

use num::{BigInt, BigRational, One};
use serde::Serialize;

use crate::algebra::{Polynomial, RankVector, VariableTable};
use crate::combinatorics::{
    chain_multiplicities, enumerate_chains_bounded, forest_stats, Nest, SubsetLabel,
};
use crate::error::{Error, Result};

/// Which compactification of the configuration family is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    /// Points may collide with each other but are separated from `D`.
    Brackets,
    /// Points are separated from `D` and from each other.
    Distinct,
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::Brackets => write!(f, "brackets"),
            Space::Distinct => write!(f, "distinct"),
        }
    }
}

/// Numeric shape of an instance: ambient dimension `m`, number of points
/// `n`, codimension `codim` of the linear subspace (`0` encodes `D = ∅`),
/// and which space to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GeometrySpec {
    pub m: u64,
    pub n: usize,
    pub codim: u64,
    pub space: Space,
}

impl GeometrySpec {
    pub fn try_new(m: u64, n: usize, codim: u64, space: Space) -> Result<Self> {
        if m < 1 {
            return Err(Error::argument("ambient dimension m must be at least 1"));
        }
        if n < 1 {
            return Err(Error::argument("number of points n must be at least 1"));
        }
        if codim > m {
            return Err(Error::argument(format!(
                "codimension {codim} exceeds ambient dimension {m}"
            )));
        }
        Ok(GeometrySpec { m, n, codim, space })
    }

    /// Top nonzero degree of the compactification's Chow ring: `n·m`.
    pub fn top_degree(&self) -> u64 {
        self.n as u64 * self.m
    }

    /// Whether `D` is empty (plain configuration-space degeneration).
    pub fn d_is_empty(&self) -> bool {
        self.codim == 0
    }
}

/// A stratum whose Chow ranks the decomposition route needs: a power of the
/// ambient space, a `D_S` locus inside it, the closure of a polydiagonal, or
/// a `D_S` locus on the component set of a nest.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StratumLabel {
    /// `X^copies`.
    Ambient { copies: usize },
    /// `D_S ⊆ X^n` with `n` the label's ground set size.
    Ds { label: SubsetLabel },
    /// The (iterated closure of the) polydiagonal a nest cuts out; its Chow
    /// ranks are those of the brackets compactification on the nest's
    /// components.
    NestClosure { nest: Nest },
    /// `D_S` on the component ground set `{1, .., c(N)}` of a nest.
    DsInNest { nest: Nest, label: SubsetLabel },
}

impl StratumLabel {
    /// The stratum's product type as (D-power, X-power), when it is a
    /// product of copies of `D` and `X`.
    pub fn product_type(&self) -> Option<(usize, usize)> {
        match self {
            StratumLabel::Ambient { copies } => Some((0, *copies)),
            StratumLabel::Ds { label } => Some((label.size(), label.ground() - label.size())),
            StratumLabel::DsInNest { nest, label } => {
                let c = forest_stats(nest).components();
                Some((label.size(), c - label.size()))
            }
            StratumLabel::NestClosure { .. } => None,
        }
    }
}

impl fmt::Display for StratumLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StratumLabel::Ambient { copies } => {
                if *copies == 1 {
                    write!(f, "X")
                } else {
                    write!(f, "X^{copies}")
                }
            }
            StratumLabel::Ds { label } => write!(f, "D{label}"),
            StratumLabel::NestClosure { nest } => write!(f, "Delta{nest}"),
            StratumLabel::DsInNest { nest, label } => write!(f, "D{label} in Delta{nest}"),
        }
    }
}

/// The variable table of `A^*(X^n)`: `h1, .., hn`, all of degree 1.
pub fn ambient_table(spec: &GeometrySpec) -> Result<Arc<VariableTable>> {
    VariableTable::try_new(
        (1..=spec.n)
            .map(|i| (format!("h{i}"), 1))
            .collect(),
    )
}

fn lookup_h(table: &Arc<VariableTable>, i: usize) -> Result<Polynomial> {
    let idx = table
        .index_of(&format!("h{i}"))
        .ok_or_else(|| Error::argument(format!("table lacks variable h{i}")))?;
    Polynomial::variable(table, idx)
}

/// Defining relations of `A^*(X^n)` inside `table`: `h_i^{m+1}` for each i.
pub fn ambient_relations(
    spec: &GeometrySpec,
    table: &Arc<VariableTable>,
) -> Result<Vec<Polynomial>> {
    (1..=spec.n)
        .map(|i| lookup_h(table, i)?.pow(spec.m as u32 + 1))
        .collect()
}

/// `A^*(X^n)` as (table, relations).
pub fn ambient_presentation(
    spec: &GeometrySpec,
) -> Result<(Arc<VariableTable>, Vec<Polynomial>)> {
    let table = ambient_table(spec)?;
    let relations = ambient_relations(spec, &table)?;
    Ok((table, relations))
}

/// Generators of the kernel of restriction `A^*(X^n) → A^*(Δ_I)`:
/// differences `h_i − h_j` along consecutive members of `I`.
pub fn diagonal_differences(
    label: &SubsetLabel,
    table: &Arc<VariableTable>,
) -> Result<Vec<Polynomial>> {
    let mut out = Vec::new();
    for pair in label.members().windows(2) {
        let hi = lookup_h(table, pair[0])?;
        let hj = lookup_h(table, pair[1])?;
        out.push(hi.sub(&hj)?);
    }
    Ok(out)
}

/// Generators of the kernel of restriction `A^*(X^n) → A^*(D_S)`:
/// `h_i^m` for each `i ∈ S`. Ring-side `D_S` data requires `codim = 1`.
pub fn ds_kernel(
    spec: &GeometrySpec,
    label: &SubsetLabel,
    table: &Arc<VariableTable>,
) -> Result<Vec<Polynomial>> {
    if spec.codim == 0 {
        return Err(Error::argument(
            "D is empty at codimension 0; no D_S kernel exists",
        ));
    }
    if spec.codim > 1 {
        return Err(Error::unsupported(
            "ring-side D_S data is implemented for codimension 1 only",
        ));
    }
    label
        .members()
        .iter()
        .map(|&i| lookup_h(table, i)?.pow(spec.m as u32))
        .collect()
}

/// Kernel of the restriction map onto the subvariety a stratum label names.
pub fn subvariety_kernel(
    spec: &GeometrySpec,
    label: &StratumLabel,
    table: &Arc<VariableTable>,
) -> Result<Vec<Polynomial>> {
    match label {
        StratumLabel::Ambient { .. } => Ok(Vec::new()),
        StratumLabel::Ds { label } => ds_kernel(spec, label, table),
        StratumLabel::NestClosure { nest } => {
            let mut out = Vec::new();
            for member in nest.non_singletons() {
                out.extend(diagonal_differences(member, table)?);
            }
            Ok(out)
        }
        StratumLabel::DsInNest { .. } => Err(Error::unsupported(
            "no ring-side kernel for component-set strata",
        )),
    }
}

/// Coefficient list (by power of `t`) of the Chern polynomial of the normal
/// data of `D_S` in `X^n` at codimension 1: `Π_{i∈S} (t + h_i)`.
pub fn chern_polynomial_ds(
    spec: &GeometrySpec,
    label: &SubsetLabel,
    table: &Arc<VariableTable>,
) -> Result<Vec<Polynomial>> {
    if spec.codim != 1 {
        return Err(Error::unsupported(
            "ring-side Chern data for D_S is implemented for codimension 1 only",
        ));
    }
    let mut coeffs = vec![Polynomial::one(table)];
    for &i in label.members() {
        let hi = lookup_h(table, i)?;
        let mut next = vec![Polynomial::zero(table); coeffs.len() + 1];
        for (j, c) in coeffs.iter().enumerate() {
            // (t + h_i): old t^j feeds t^{j+1} and h_i·t^j.
            next[j + 1] = next[j + 1].add(c)?;
            next[j] = next[j].add(&c.mul(&hi)?)?;
        }
        coeffs = next;
    }
    Ok(coeffs)
}

fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// Coefficient list (by power of `t`) of the pair polynomial
/// `c_{a,b}(t) = Σ_{i=1}^m (−1)^i (pullback along point a of c_{m−i}(TX)) t^i + [Δ_{a,b}]`,
/// with `c_j(TX) = binom(m+1, j) h^j` and the diagonal class
/// `[Δ_{a,b}] = Σ_{i=0}^m h_a^i h_b^{m−i}`. Homogeneous of degree `m` once
/// `t` is given degree 1.
pub fn cab_polynomial(
    spec: &GeometrySpec,
    a: usize,
    b: usize,
    table: &Arc<VariableTable>,
) -> Result<Vec<Polynomial>> {
    if a == b || a < 1 || b < 1 || a > spec.n || b > spec.n {
        return Err(Error::argument(format!(
            "pair indices must be distinct points in 1..={}, got ({a}, {b})",
            spec.n
        )));
    }
    let m = spec.m;
    let ha = lookup_h(table, a)?;
    let hb = lookup_h(table, b)?;
    let mut coeffs = Vec::with_capacity(m as usize + 1);
    // t^0: the diagonal class.
    let mut diag = Polynomial::zero(table);
    for i in 0..=m {
        diag = diag.add(&ha.pow(i as u32)?.mul(&hb.pow((m - i) as u32)?)?)?;
    }
    coeffs.push(diag);
    for i in 1..=m {
        let mut c = ha.pow((m - i) as u32)?.scale(&BigRational::from_integer(
            binomial(m + 1, m - i),
        ));
        if i % 2 == 1 {
            c = c.neg();
        }
        coeffs.push(c);
    }
    Ok(coeffs)
}

/// Coefficient list (by power of `t`) of the pair polynomial for the
/// strict transform of the pairwise diagonal after the `D_S` blow-ups;
/// codimension 1 only.
///
/// Blowing up `D_{a,b}`-type loci modifies the diagonal's normal data by an
/// elementary transformation that removes one Chern root `h`, so the `t^i`
/// coefficient is `(−1)^i binom(m, m−i) h_a^{m−i}` (against
/// `binom(m+1, m−i)` for the ambient diagonal). The `t^0` term is the
/// degree-`m` class of the strict transform itself: the ambient diagonal
/// class minus `(Σ_{i+j=m−1} h_a^i h_b^j)` times the total boundary class
/// through the pair, which the caller supplies as `x_sum`.
pub fn cab_polynomial_strict(
    spec: &GeometrySpec,
    a: usize,
    b: usize,
    x_sum: &Polynomial,
    table: &Arc<VariableTable>,
) -> Result<Vec<Polynomial>> {
    if spec.codim != 1 {
        return Err(Error::unsupported(
            "the strict-transform pair polynomial is implemented for codimension 1 only",
        ));
    }
    if a == b || a < 1 || b < 1 || a > spec.n || b > spec.n {
        return Err(Error::argument(format!(
            "pair indices must be distinct points in 1..={}, got ({a}, {b})",
            spec.n
        )));
    }
    let m = spec.m;
    let ha = lookup_h(table, a)?;
    let hb = lookup_h(table, b)?;
    let mut diag = Polynomial::zero(table);
    for i in 0..=m {
        diag = diag.add(&ha.pow(i as u32)?.mul(&hb.pow((m - i) as u32)?)?)?;
    }
    // The class the boundary sum restricts to on the diagonal: the full
    // symmetric polynomial one degree below the diagonal class.
    let mut trace = Polynomial::zero(table);
    for i in 0..m {
        trace = trace.add(&ha.pow(i as u32)?.mul(&hb.pow((m - 1 - i) as u32)?)?)?;
    }
    let mut coeffs = Vec::with_capacity(m as usize + 1);
    coeffs.push(diag.sub(&trace.mul(&x_sum.embed_into(table)?)?)?);
    for i in 1..=m {
        let mut c = ha
            .pow((m - i) as u32)?
            .scale(&BigRational::from_integer(binomial(m, m - i)));
        if i % 2 == 1 {
            c = c.neg();
        }
        coeffs.push(c);
    }
    Ok(coeffs)
}

/// Evaluates a coefficient list at a ring element: `Σ coeffs[j]·at^j`.
pub fn evaluate_chern(coeffs: &[Polynomial], at: &Polynomial) -> Result<Polynomial> {
    let table = at.table();
    let mut acc = Polynomial::zero(table);
    let mut power = Polynomial::one(table);
    for c in coeffs {
        acc = acc.add(&c.embed_into(table)?.mul(&power)?)?;
        power = power.mul(at)?;
    }
    Ok(acc)
}

/// Chow ranks of `X = P^m`.
pub fn ranks_of_x(spec: &GeometrySpec) -> RankVector {
    RankVector::projective_space(spec.m)
}

/// Chow ranks of `D = P^{m−codim}`; requires `D` nonempty.
pub fn ranks_of_d(spec: &GeometrySpec) -> Result<RankVector> {
    if spec.d_is_empty() {
        return Err(Error::argument("D is empty at codimension 0"));
    }
    Ok(RankVector::projective_space(spec.m - spec.codim))
}

/// Chow ranks of the subvariety a stratum label names, by the Künneth
/// product structure; nest closures recurse through the chain-indexed sum
/// for the brackets compactification on the component set.
pub fn poincare_of(spec: &GeometrySpec, label: &StratumLabel) -> Result<RankVector> {
    match label {
        StratumLabel::Ambient { copies } => Ok(ranks_of_x(spec).convolve_power(*copies as u64)),
        StratumLabel::Ds { label } => product_ranks(spec, label.size(), label.ground()),
        StratumLabel::DsInNest { nest, label } => {
            let components = forest_stats(nest).components();
            if label.ground() != components {
                return Err(Error::argument(format!(
                    "component label ground {} does not match component count {}",
                    label.ground(),
                    components
                )));
            }
            product_ranks(spec, label.size(), components)
        }
        StratumLabel::NestClosure { nest } => {
            let components = forest_stats(nest).components();
            brackets_ranks_on(spec, components)
        }
    }
}

/// Ranks of `D^{d_power} × X^{copies − d_power}`.
fn product_ranks(spec: &GeometrySpec, d_power: usize, copies: usize) -> Result<RankVector> {
    if d_power > copies {
        return Err(Error::argument("more D factors than total factors"));
    }
    let d = ranks_of_d(spec)?;
    Ok(d.convolve_power(d_power as u64)
        .convolve(&ranks_of_x(spec).convolve_power((copies - d_power) as u64)))
}

/// Ranks of the brackets compactification of `k` points of `(X, D)`, summed
/// over chains on `{1, .., k}` with their multiplicity vectors.
fn brackets_ranks_on(spec: &GeometrySpec, k: usize) -> Result<RankVector> {
    let ambient = ranks_of_x(spec).convolve_power(k as u64);
    if spec.d_is_empty() {
        return Ok(ambient);
    }
    let mut total = ambient;
    let allow_singletons = spec.codim >= 2;
    for chain in enumerate_chains_bounded(k, allow_singletons, k.max(1))? {
        if chain.is_empty() {
            continue; // counted as the ambient summand above
        }
        let top = chain.maximal().expect("nonempty chain");
        let stratum = product_ranks(spec, top.size(), k)?;
        for mu in chain_multiplicities(&chain, spec.codim)? {
            total = total.add(&stratum.shift(mu.norm()));
        }
    }
    Ok(total)
}
