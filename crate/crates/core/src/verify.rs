//! Cross-checks between the two independent routes to the Chow ranks: the
//! Gröbner/Hilbert route through the relation ideals and the additive
//! route through the chain/nest decompositions. Also hosts the symmetry
//! audit and the empirical discrimination of the overlap semantics.

use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use crate::algebra::{
    buchberger_with, hilbert_function, normal_form, GroebnerConfig, OrderKind, Polynomial,
    RankVector, TermOrder, VariableTable,
};
use crate::combinatorics::all_permutations;
use crate::decomposition::{
    brackets_summands, distinct_summands, poincare_from_summands, Summand,
};
use crate::error::{Error, Result};
use crate::geometry::{GeometrySpec, Space};
use crate::presentation::{
    apply_permutation, build_brackets, build_distinct, build_intermediate,
    stage_poly_in_distinct_table, OverlapSemantics, RingPresentation,
};

/// Resource policy for the Gröbner phase.
///
/// Without `force`, only instances inside the default ceiling are accepted:
/// `n ≤ 3` for `m ≤ 2`, plus `n = 4` at `m = 1` on the brackets space.
/// Beyond that the cost is unbounded by contract and must be requested
/// explicitly.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    pub pair_limit: usize,
    pub force: bool,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            pair_limit: GroebnerConfig::default().pair_budget,
            force: false,
        }
    }
}

impl Budget {
    /// An explicit pair limit always implies permission to run.
    pub fn with_limit(pair_limit: usize) -> Self {
        Budget {
            pair_limit,
            force: true,
        }
    }

    pub fn config(&self) -> GroebnerConfig {
        GroebnerConfig {
            pair_budget: self.pair_limit,
        }
    }

    pub fn admits(&self, spec: &GeometrySpec) -> bool {
        if self.force {
            return true;
        }
        (spec.n <= 3 && spec.m <= 2)
            || (spec.m == 1 && spec.n <= 4 && spec.space == Space::Brackets)
    }

    /// Errors with a resource message when the instance is outside the
    /// ceiling and no explicit budget was given.
    pub fn ensure_admits(&self, spec: &GeometrySpec) -> Result<()> {
        if self.admits(spec) {
            return Ok(());
        }
        Err(Error::resource(format!(
            "instance m={}, n={}, {} exceeds the default verification ceiling \
             (n <= 3 for m <= 2; n <= 4 brackets for m = 1); set an explicit budget to force it",
            spec.m, spec.n, spec.space
        )))
    }
}

/// Wall-clock milliseconds of each verification phase.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct PhaseTimings {
    pub groebner: u64,
    pub hilbert: u64,
    pub decomposition: u64,
}

/// The outcome of one cross-method verification.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub spec: GeometrySpec,
    pub semantics: OverlapSemantics,
    pub ranks_presentation: RankVector,
    pub ranks_decomposition: RankVector,
    pub equal: bool,
    pub palindromic: bool,
    pub top_rank_one: bool,
    pub runtime_ms: PhaseTimings,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.equal && self.palindromic && self.top_rank_one
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serialization cannot fail")
    }
}

fn build_for(spec: &GeometrySpec, sem: OverlapSemantics) -> Result<RingPresentation> {
    match spec.space {
        Space::Brackets => build_brackets(spec, sem),
        Space::Distinct => build_distinct(spec, sem),
    }
}

fn summands_for(spec: &GeometrySpec) -> Result<Vec<Summand>> {
    match spec.space {
        Space::Brackets => brackets_summands(spec),
        Space::Distinct => distinct_summands(spec, false),
    }
}

/// Rank vector of a presentation through the Gröbner/Hilbert route.
///
/// The Hilbert scan runs one degree past the expected top so that any rank
/// leaking beyond the dimension of the space shows up as a mismatch rather
/// than being silently cut off (variables all have degree 1, so an empty
/// level implies every higher level is empty).
pub fn presentation_ranks(
    pres: &RingPresentation,
    kind: OrderKind,
    budget: &Budget,
) -> Result<RankVector> {
    let order = pres.order(kind);
    let gb = buchberger_with(&pres.generators(), order, &budget.config())?;
    hilbert_function(&gb, pres.spec().top_degree() + 1)
}

/// Builds the presentation and the decomposition for `spec` and compares
/// their rank vectors.
pub fn verify_space(
    spec: &GeometrySpec,
    sem: OverlapSemantics,
    budget: &Budget,
) -> Result<VerifyReport> {
    budget.ensure_admits(spec)?;
    let pres = build_for(spec, sem)?;

    let started = Instant::now();
    let order = pres.order(OrderKind::DegRevLex);
    let gb = buchberger_with(&pres.generators(), order, &budget.config())?;
    let groebner_ms = started.elapsed().as_millis() as u64;

    let started = Instant::now();
    let ranks_presentation = hilbert_function(&gb, spec.top_degree() + 1)?;
    let hilbert_ms = started.elapsed().as_millis() as u64;

    let started = Instant::now();
    let summands = summands_for(spec)?;
    let ranks_decomposition = poincare_from_summands(spec, &summands)?;
    let decomposition_ms = started.elapsed().as_millis() as u64;

    let equal = ranks_presentation == ranks_decomposition;
    let palindromic = ranks_presentation.is_palindromic();
    let top_rank_one = ranks_presentation.top_degree() == Some(spec.top_degree() as usize)
        && ranks_presentation.top_rank_is_one()
        && ranks_presentation.get(0) == 1;

    Ok(VerifyReport {
        schema: 1,
        spec: *spec,
        semantics: sem,
        ranks_presentation,
        ranks_decomposition,
        equal,
        palindromic,
        top_rank_one,
        runtime_ms: PhaseTimings {
            groebner: groebner_ms,
            hilbert: hilbert_ms,
            decomposition: decomposition_ms,
        },
    })
}

/// The degenerate check with `D = ∅`: the distinct presentation loses its
/// `x` families and must match the nest-only decomposition.
pub fn fm_degeneration(spec: &GeometrySpec, budget: &Budget) -> Result<VerifyReport> {
    if !spec.d_is_empty() {
        return Err(Error::argument(
            "the degeneration check requires codimension 0",
        ));
    }
    let mut spec = *spec;
    spec.space = Space::Distinct;
    verify_space(&spec, OverlapSemantics::default(), budget)
}

/// Ideal-level symmetry of a presentation under every point permutation:
/// each permuted ideal must equal the original (mutual normal-form
/// membership of generators), and the rank vectors must agree whenever
/// they are computable.
pub fn presentation_symmetry_holds(
    pres: &RingPresentation,
    budget: &Budget,
) -> Result<bool> {
    let order = pres.order(OrderKind::DegRevLex);
    let config = budget.config();
    let top = pres.spec().top_degree() + 1;
    let base_gb = buchberger_with(&pres.generators(), order.clone(), &config)?;
    let base_ranks = hilbert_function(&base_gb, top).ok();
    for sigma in all_permutations(pres.spec().n) {
        let moved = apply_permutation(pres, &sigma)?;
        let moved_gb = buchberger_with(&moved.generators(), order.clone(), &config)?;
        for g in moved.generators() {
            if !normal_form(&g, &base_gb)?.is_zero() {
                return Ok(false);
            }
        }
        for g in pres.generators() {
            if !normal_form(&g, &moved_gb)?.is_zero() {
                return Ok(false);
            }
        }
        if let (Some(base), Ok(moved_ranks)) = (&base_ranks, hilbert_function(&moved_gb, top)) {
            if base != &moved_ranks {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Permutation invariance of the decomposition summand multiset.
///
/// Strata are relabeled through the permutation (subset labels on the
/// brackets side, nests on the distinct side; component-ground labels
/// inside a nest are identification-independent and stay put) and the
/// resulting (stratum, shift) multiset must be unchanged.
pub fn decomposition_symmetry_holds(spec: &GeometrySpec) -> Result<bool> {
    use crate::geometry::StratumLabel;

    let summands = summands_for(spec)?;
    let mut base: Vec<String> = summands
        .iter()
        .map(|s| format!("{}|{}", s.stratum, s.shift))
        .collect();
    base.sort();

    for sigma in all_permutations(spec.n) {
        let mut moved: Vec<String> = Vec::with_capacity(summands.len());
        for s in &summands {
            let stratum = match &s.stratum {
                StratumLabel::Ds { label } => StratumLabel::Ds {
                    label: sigma.apply_label(label)?,
                },
                StratumLabel::NestClosure { nest } => StratumLabel::NestClosure {
                    nest: sigma.apply_nest(nest)?,
                },
                StratumLabel::DsInNest { nest, label } => StratumLabel::DsInNest {
                    nest: sigma.apply_nest(nest)?,
                    label: label.clone(),
                },
                other => other.clone(),
            };
            moved.push(format!("{}|{}", stratum, s.shift));
        }
        moved.sort();
        if moved != base {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Full symmetry audit: ideal-level presentation symmetry plus summand
/// multiset invariance.
pub fn symmetry_audit(
    spec: &GeometrySpec,
    sem: OverlapSemantics,
    budget: &Budget,
) -> Result<bool> {
    if spec.n > 4 {
        return Err(Error::argument(
            "the symmetry audit is budgeted for n <= 4",
        ));
    }
    let pres = build_for(spec, sem)?;
    if !presentation_symmetry_holds(&pres, budget)? {
        return Ok(false);
    }
    decomposition_symmetry_holds(spec)
}

/// Whether two generator lists over name-compatible tables generate the
/// same ideal, by mutual normal-form membership against both Gröbner bases.
fn ideals_equal(
    a: &[Polynomial],
    b: &[Polynomial],
    table: &Arc<VariableTable>,
    config: &GroebnerConfig,
) -> Result<bool> {
    let order = TermOrder::degrevlex(table.len());
    let a: Vec<Polynomial> = a.iter().map(|p| p.embed_into(table)).collect::<Result<_>>()?;
    let b: Vec<Polynomial> = b.iter().map(|p| p.embed_into(table)).collect::<Result<_>>()?;
    let gb_a = buchberger_with(&a, order.clone(), config)?;
    let gb_b = buchberger_with(&b, order, config)?;
    for p in &b {
        if !normal_form(p, &gb_a)?.is_zero() {
            return Ok(false);
        }
    }
    for p in &a {
        if !normal_form(p, &gb_b)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Consistency of the interpolating stage tower with its endpoints:
///
/// * stage `(1, 0)` must present the brackets ring relation-for-relation;
/// * stages `(i, i)` and `(i+1, 0)` describe the same space and must
///   generate the same ideal on the same variables;
/// * stage `(n−1, n−1)` must generate the distinct ring's ideal once its
///   stage classes are renamed to diagonal classes.
///
/// Budgeted like the other ideal-level checks (`n ≤ 3` by default).
pub fn stage_tower_consistent(
    spec: &GeometrySpec,
    sem: OverlapSemantics,
    budget: &Budget,
) -> Result<bool> {
    if !budget.force && !(spec.n <= 3 && spec.m <= 2) {
        return Err(Error::resource(format!(
            "stage-tower check for m={}, n={} exceeds the default ceiling (n <= 3, m <= 2); \
             set an explicit budget to force it",
            spec.m, spec.n
        )));
    }
    let config = budget.config();
    let rendered = |p: &RingPresentation| -> Vec<String> {
        let ord = p.order(OrderKind::DegRevLex);
        p.relations().iter().map(|r| r.poly.render(&ord)).collect()
    };

    let brackets = build_brackets(spec, sem)?;
    let first = build_intermediate(spec, 1, 0, sem)?;
    if rendered(&brackets) != rendered(&first) {
        return Ok(false);
    }

    for i in 1..spec.n.saturating_sub(1) {
        let a = build_intermediate(spec, i, i, sem)?;
        let b = build_intermediate(spec, i + 1, 0, sem)?;
        let names = |p: &RingPresentation| -> Vec<String> {
            (0..p.table().len())
                .map(|j| p.table().name(j).to_string())
                .collect()
        };
        if names(&a) != names(&b) {
            return Ok(false);
        }
        if !ideals_equal(&a.generators(), &b.generators(), a.table(), &config)? {
            return Ok(false);
        }
    }

    let distinct = build_distinct(spec, sem)?;
    let last = build_intermediate(spec, spec.n - 1, spec.n - 1, sem)?;
    if last.table().len() != distinct.table().len() {
        return Ok(false);
    }
    let stage_order = last.order(OrderKind::DegRevLex);
    let mapped: Vec<Polynomial> = last
        .generators()
        .iter()
        .map(|p| stage_poly_in_distinct_table(p, &stage_order, distinct.table()))
        .collect::<Result<_>>()?;
    ideals_equal(&mapped, &distinct.generators(), distinct.table(), &config)
}

/// Outcome of the empirical overlap-semantics discrimination at the first
/// instance where the two conventions differ (four points, disjoint pairs).
#[derive(Debug, Clone, Serialize)]
pub struct DiscriminateReport {
    pub schema: u32,
    pub spec: GeometrySpec,
    pub decomposition: RankVector,
    pub incomparable: RankVector,
    pub standard: RankVector,
    pub matching: Vec<String>,
    pub consistent: bool,
    pub degree_two_excess: i64,
}

impl DiscriminateReport {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serialization cannot fail")
    }
}

/// Runs the brackets verification at `n = 4` under both overlap semantics
/// and reports which one matches the decomposition ranks. The instance is
/// fixed at `m = 1`, the smallest discriminating case within budget.
pub fn semantics_discriminate(m: u64, budget: &Budget) -> Result<DiscriminateReport> {
    if m != 1 {
        return Err(Error::argument(
            "semantics discrimination runs at m = 1 (larger m exceeds the n = 4 budget)",
        ));
    }
    let spec = GeometrySpec::try_new(1, 4, 1, Space::Brackets)?;
    let summands = brackets_summands(&spec)?;
    let decomposition = poincare_from_summands(&spec, &summands)?;

    let mut vectors = Vec::new();
    for sem in [OverlapSemantics::Incomparable, OverlapSemantics::Standard] {
        let pres = build_brackets(&spec, sem)?;
        vectors.push(presentation_ranks(&pres, OrderKind::DegRevLex, budget)?);
    }
    let incomparable = vectors.remove(0);
    let standard = vectors.remove(0);

    let mut matching = Vec::new();
    if incomparable == decomposition {
        matching.push("incomparable".to_string());
    }
    if standard == decomposition {
        matching.push("standard".to_string());
    }
    let consistent = matching.len() == 1;
    let degree_two_excess = standard.get(2) as i64 - incomparable.get(2) as i64;

    Ok(DiscriminateReport {
        schema: 1,
        spec,
        decomposition,
        incomparable,
        standard,
        matching,
        consistent,
        degree_two_excess,
    })
}
