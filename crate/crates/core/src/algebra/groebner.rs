use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num::{BigRational, One, Zero};

use super::order::TermOrder;
use super::poly::{Monomial, Polynomial};
use super::table::{require_same_table, VariableTable};
use crate::error::{Error, Result};

/// Resource ceilings for Buchberger completion.
#[derive(Debug, Clone)]
pub struct GroebnerConfig {
    /// Maximum number of S-pairs that may be examined before giving up.
    pub pair_budget: usize,
}

impl Default for GroebnerConfig {
    fn default() -> Self {
        GroebnerConfig {
            pair_budget: 500_000,
        }
    }
}

/// A reduced Groebner basis: monic generators, no generator's term divisible
/// by another generator's leading monomial, sorted ascending by leading
/// monomial. For fixed input and order the representation is unique, and the
/// computation is deterministic down to the bit level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis {
    table: Arc<VariableTable>,
    order: TermOrder,
    generators: Vec<Polynomial>,
    leads: Vec<Monomial>,
}

impl GroebnerBasis {
    pub fn table(&self) -> &Arc<VariableTable> {
        &self.table
    }

    pub fn order(&self) -> &TermOrder {
        &self.order
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn leading_monomials(&self) -> &[Monomial] {
        &self.leads
    }

    /// Whether the ideal is the whole ring (contains a nonzero constant).
    pub fn is_unit_ideal(&self) -> bool {
        self.leads.iter().any(|m| m.is_one())
    }
}

fn ordered_pair(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Full multivariate division: rewrites `f` against `gens` (monic, with
/// cached leading monomials `leads`) until no term of the remainder is
/// divisible by any leading monomial. The reducer for a term is always the
/// first generator in list order whose lead divides it.
fn reduce_full(
    f: &Polynomial,
    gens: &[Polynomial],
    leads: &[Monomial],
    order: &TermOrder,
    table: &Arc<VariableTable>,
) -> Result<Polynomial> {
    let mut work: BTreeMap<Vec<i64>, (Monomial, BigRational)> = BTreeMap::new();
    for (m, c) in f.terms() {
        work.insert(order.sort_key(m, table), (m.clone(), c.clone()));
    }
    let mut remainder: Vec<(Monomial, BigRational)> = Vec::new();
    while let Some((_, (mono, coeff))) = work.pop_last() {
        if coeff.is_zero() {
            continue;
        }
        let reducer = leads.iter().position(|lm| lm.divides(&mono));
        match reducer {
            None => remainder.push((mono, coeff)),
            Some(i) => {
                let quot = leads[i]
                    .divide_into(&mono)
                    .expect("checked divisibility");
                // gens[i] is monic: the popped term cancels exactly; fold the
                // scaled tail back into the working map.
                for (gm, gc) in gens[i].terms() {
                    if gm == &leads[i] {
                        continue;
                    }
                    let target = gm.mul(&quot);
                    let key = order.sort_key(&target, table);
                    let delta = -(gc * &coeff);
                    match work.get_mut(&key) {
                        Some((_, existing)) => {
                            *existing += delta;
                            if existing.is_zero() {
                                work.remove(&key);
                            }
                        }
                        None => {
                            if !delta.is_zero() {
                                work.insert(key, (target, delta));
                            }
                        }
                    }
                }
            }
        }
    }
    Polynomial::from_terms(table, remainder)
}

/// Buchberger completion with the default resource configuration.
pub fn buchberger(generators: &[Polynomial], order: TermOrder) -> Result<GroebnerBasis> {
    buchberger_with(generators, order, &GroebnerConfig::default())
}

/// Buchberger completion to a reduced Groebner basis.
///
/// Pair selection follows the normal strategy: the pending pair whose lcm is
/// smallest under the term order (hence of minimal weighted degree) is
/// treated first, with generator indices as the final tie-break. Pairs are
/// pruned by the coprimality criterion and by the chain criterion (a pair is
/// dropped when a third generator divides its lcm and both side pairs have
/// already been treated).
pub fn buchberger_with(
    generators: &[Polynomial],
    order: TermOrder,
    config: &GroebnerConfig,
) -> Result<GroebnerBasis> {
    let mut iter = generators.iter().filter(|g| !g.is_zero());
    let first = match iter.next() {
        None => {
            return Err(Error::argument(
                "cannot build a basis without a variable table: no nonzero generators",
            ))
        }
        Some(g) => g,
    };
    let table = Arc::clone(first.table());
    if order.num_vars() != table.len() {
        return Err(Error::argument(
            "term order arity does not match the variable table",
        ));
    }
    for g in generators {
        require_same_table(&table, g.table())?;
    }

    let mut basis: Vec<Polynomial> = Vec::new();
    let mut leads: Vec<Monomial> = Vec::new();
    for g in generators.iter().filter(|g| !g.is_zero()) {
        let monic = g.monic(&order);
        let lm = monic
            .leading_term(&order)
            .expect("nonzero polynomial has a lead")
            .0
            .clone();
        basis.push(monic);
        leads.push(lm);
    }

    let mut queue: BTreeSet<(Vec<i64>, usize, usize)> = BTreeSet::new();
    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();
    let push_pair = |queue: &mut BTreeSet<(Vec<i64>, usize, usize)>,
                         pending: &mut BTreeSet<(usize, usize)>,
                         leads: &[Monomial],
                         i: usize,
                         j: usize| {
        let (i, j) = ordered_pair(i, j);
        let key = order.sort_key(&leads[i].lcm(&leads[j]), &table);
        queue.insert((key, i, j));
        pending.insert((i, j));
    };

    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            push_pair(&mut queue, &mut pending, &leads, i, j);
        }
    }

    let mut treated = 0usize;
    while let Some(entry) = queue.pop_first() {
        let (_, i, j) = entry;
        pending.remove(&(i, j));
        treated += 1;
        if treated > config.pair_budget {
            return Err(Error::resource(format!(
                "Groebner pair budget of {} exceeded",
                config.pair_budget
            )));
        }

        // Coprimality criterion: such S-pairs always reduce to zero.
        if leads[i].is_coprime_with(&leads[j]) {
            continue;
        }
        let lcm = leads[i].lcm(&leads[j]);
        // Chain criterion: a mediator whose lead divides the lcm, with both
        // side pairs already treated, makes this pair redundant.
        let redundant = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && leads[k].divides(&lcm)
                && !pending.contains(&ordered_pair(i, k))
                && !pending.contains(&ordered_pair(j, k))
        });
        if redundant {
            continue;
        }

        let qi = leads[i].divide_into(&lcm).expect("lcm divisible by lead");
        let qj = leads[j].divide_into(&lcm).expect("lcm divisible by lead");
        let one = BigRational::one();
        let s = basis[i]
            .mul_monomial(&qi, &one)
            .sub(&basis[j].mul_monomial(&qj, &one))?;
        let remainder = reduce_full(&s, &basis, &leads, &order, &table)?;
        if remainder.is_zero() {
            continue;
        }
        let monic = remainder.monic(&order);
        let lm = monic
            .leading_term(&order)
            .expect("nonzero remainder")
            .0
            .clone();
        let new_index = basis.len();
        basis.push(monic);
        leads.push(lm);
        for k in 0..new_index {
            push_pair(&mut queue, &mut pending, &leads, k, new_index);
        }
    }

    let (generators, leads) = reduce_basis(basis, leads, &order, &table)?;
    Ok(GroebnerBasis {
        table,
        order,
        generators,
        leads,
    })
}

/// Minimalizes and fully inter-reduces a completed basis, returning monic
/// generators sorted ascending by leading monomial.
fn reduce_basis(
    gens: Vec<Polynomial>,
    leads: Vec<Monomial>,
    order: &TermOrder,
    table: &Arc<VariableTable>,
) -> Result<(Vec<Polynomial>, Vec<Monomial>)> {
    let mut idx: Vec<usize> = (0..gens.len()).collect();
    idx.sort_by(|&a, &b| {
        order
            .compare(&leads[a], &leads[b], table)
            .then(a.cmp(&b))
    });
    // Keep only generators whose lead is not divisible by a smaller kept
    // lead (divisibility implies order-smaller, so one ascending sweep works).
    let mut kept: Vec<usize> = Vec::new();
    for &i in &idx {
        if !kept
            .iter()
            .any(|&k| leads[k] == leads[i] || leads[k].divides(&leads[i]))
        {
            kept.push(i);
        }
    }
    let mut polys: Vec<Polynomial> = kept.iter().map(|&i| gens[i].clone()).collect();
    let lead_list: Vec<Monomial> = kept.iter().map(|&i| leads[i].clone()).collect();
    // Tail-reduce each generator against all the others; leads are pairwise
    // non-divisible so they survive, and the result is the unique reduced
    // basis of the ideal.
    for i in 0..polys.len() {
        let mut other_gens: Vec<Polynomial> = Vec::with_capacity(polys.len() - 1);
        let mut other_leads: Vec<Monomial> = Vec::with_capacity(polys.len() - 1);
        for j in 0..polys.len() {
            if j != i {
                other_gens.push(polys[j].clone());
                other_leads.push(lead_list[j].clone());
            }
        }
        let reduced = reduce_full(&polys[i], &other_gens, &other_leads, order, table)?;
        polys[i] = reduced.monic(order);
    }
    Ok((polys, lead_list))
}

/// The unique normal form of `f` modulo the ideal of `basis`: the remainder
/// of full division, whose support avoids every leading monomial.
pub fn normal_form(f: &Polynomial, basis: &GroebnerBasis) -> Result<Polynomial> {
    require_same_table(f.table(), &basis.table)?;
    reduce_full(f, &basis.generators, &basis.leads, &basis.order, &basis.table)
}

/// Whether two ring elements agree in the quotient by the basis ideal.
pub fn quotient_equal(a: &Polynomial, b: &Polynomial, basis: &GroebnerBasis) -> Result<bool> {
    let diff = a.sub(b)?;
    Ok(normal_form(&diff, basis)?.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::VariableTable;

    fn vars(names: &[&str]) -> Arc<VariableTable> {
        VariableTable::try_new(names.iter().map(|n| (n.to_string(), 1)).collect()).unwrap()
    }

    fn var(t: &Arc<VariableTable>, i: usize) -> Polynomial {
        Polynomial::variable(t, i).unwrap()
    }

    #[test]
    fn monomial_ideal_is_its_own_basis() {
        let t = vars(&["h1", "h2"]);
        let h1 = var(&t, 0);
        let h2 = var(&t, 1);
        let gens = vec![h1.pow(2).unwrap(), h2.pow(2).unwrap()];
        let gb = buchberger(&gens, TermOrder::degrevlex(2)).unwrap();
        // Same set, listed ascending by leading monomial (h2^2 < h1^2).
        assert_eq!(gb.generators(), &[gens[1].clone(), gens[0].clone()]);
    }

    #[test]
    fn linear_plus_power_is_already_reduced() {
        let t = vars(&["h1", "h2"]);
        let h1 = var(&t, 0);
        let h2 = var(&t, 1);
        let gens = vec![h1.sub(&h2).unwrap(), h2.pow(2).unwrap()];
        let gb = buchberger(&gens, TermOrder::degrevlex(2)).unwrap();
        assert_eq!(gb.generators().len(), 2);
        assert_eq!(gb.generators()[0], gens[0]);
        assert_eq!(gb.generators()[1], gens[1]);
    }

    #[test]
    fn normal_form_kills_generators_and_is_idempotent() {
        // The two-point bracket ring of the projective plane.
        let t = vars(&["h1", "h2", "x{1,2}"]);
        let h1 = var(&t, 0);
        let h2 = var(&t, 1);
        let x = var(&t, 2);
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
        let gb = buchberger(&gens, TermOrder::degrevlex(3)).unwrap();
        let probe = h1.pow(2).unwrap().mul(&x).unwrap();
        assert!(normal_form(&probe, &gb).unwrap().is_zero());
        let f = x.pow(2).unwrap();
        let nf1 = normal_form(&f, &gb).unwrap();
        let nf2 = normal_form(&nf1, &gb).unwrap();
        assert_eq!(nf1, nf2);
        assert!(!nf1.is_zero());
    }

    #[test]
    fn quotient_equality_through_linear_relation() {
        let t = vars(&["h1", "h2", "y{1,2}"]);
        let h1 = var(&t, 0);
        let h2 = var(&t, 1);
        let y = var(&t, 2);
        let gens = vec![
            h1.pow(2).unwrap(),
            h2.pow(2).unwrap(),
            h1.sub(&h2).unwrap().mul(&y).unwrap(),
        ];
        let gb = buchberger(&gens, TermOrder::degrevlex(3)).unwrap();
        let a = h1.mul(&y).unwrap();
        let b = h2.mul(&y).unwrap();
        assert!(quotient_equal(&a, &b, &gb).unwrap());
        assert!(!quotient_equal(&a, &Polynomial::zero(&t), &gb).unwrap());
    }

    #[test]
    fn unit_ideal_collapses() {
        let t = vars(&["h1"]);
        let h1 = var(&t, 0);
        let one_minus = Polynomial::one(&t).sub(&h1).unwrap();
        let gb = buchberger(&[h1.clone(), one_minus], TermOrder::degrevlex(1)).unwrap();
        assert!(gb.is_unit_ideal());
        assert_eq!(gb.generators().len(), 1);
        assert_eq!(gb.generators()[0], Polynomial::one(&t));
    }

    #[test]
    fn pair_budget_is_enforced() {
        let t = vars(&["h1", "h2", "x{1,2}"]);
        let h1 = var(&t, 0);
        let h2 = var(&t, 1);
        let x = var(&t, 2);
        let gens = vec![
            h1.pow(3).unwrap().add(&x.pow(2).unwrap()).unwrap(),
            h2.pow(3).unwrap().add(&h1.mul(&x).unwrap()).unwrap(),
            x.pow(3).unwrap().add(&h1.mul(&h2).unwrap()).unwrap(),
        ];
        let tiny = GroebnerConfig { pair_budget: 1 };
        let result = buchberger_with(&gens, TermOrder::degrevlex(3), &tiny);
        assert!(matches!(result, Err(Error::Resource(_))));
    }

    #[test]
    fn determinism_bit_for_bit() {
        let t = vars(&["h1", "h2", "x{1,2}"]);
        let h1 = var(&t, 0);
        let h2 = var(&t, 1);
        let x = var(&t, 2);
        let gens = vec![
            x.pow(2)
                .unwrap()
                .sub(&h1.mul(&h2).unwrap())
                .unwrap(),
            h1.pow(3).unwrap(),
            h2.pow(3).unwrap(),
        ];
        let a = buchberger(&gens, TermOrder::degrevlex(3)).unwrap();
        let b = buchberger(&gens, TermOrder::degrevlex(3)).unwrap();
        assert_eq!(a, b);
    }
}
