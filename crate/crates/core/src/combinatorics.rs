//! Ground-set combinatorics: subset labels, chains, nests, forest statistics,
//! and the multiplicity vectors that index additive decompositions.
//!
//! Conventions used throughout the crate:
//! - ground sets are `{1, .., n}` with 1-based members;
//! - labels are canonically ordered by (size, lexicographic member list);
//! - chains are stored largest subset first;
//! - a nest always contains every singleton of its ground set.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest ground-set size the enumeration routines accept without an
/// explicit override; beyond it the counts grow too fast for casual use.
pub const DEFAULT_ENUMERATION_BOUND: usize = 6;

/// A nonempty subset of the ground set `{1, .., n}`.
///
/// Members are stored sorted ascending. The canonical order on labels is by
/// (size, lexicographic member list), which is the order used everywhere a
/// deterministic listing is required.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubsetLabel {
    ground: usize,
    members: Vec<usize>,
}

impl SubsetLabel {
    /// Builds a label after validating membership in `{1, .., ground}`,
    /// non-emptiness, and absence of duplicates.
    pub fn try_new(ground: usize, mut members: Vec<usize>) -> Result<Self> {
        if ground == 0 {
            return Err(Error::argument("ground set must be nonempty"));
        }
        if members.is_empty() {
            return Err(Error::argument("subset label must be nonempty"));
        }
        members.sort_unstable();
        members.dedup();
        if let Some(&bad) = members.iter().find(|&&x| x == 0 || x > ground) {
            return Err(Error::argument(format!(
                "member {bad} outside ground set {{1, .., {ground}}}"
            )));
        }
        Ok(SubsetLabel { ground, members })
    }

    /// The singleton `{i}`.
    pub fn singleton(ground: usize, i: usize) -> Result<Self> {
        SubsetLabel::try_new(ground, vec![i])
    }

    /// The full ground set `{1, .., n}` as a label.
    pub fn full(ground: usize) -> Result<Self> {
        SubsetLabel::try_new(ground, (1..=ground).collect())
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn is_singleton(&self) -> bool {
        self.members.len() == 1
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn is_subset_of(&self, other: &SubsetLabel) -> bool {
        self.members.iter().all(|i| other.contains(*i))
    }

    pub fn is_proper_subset_of(&self, other: &SubsetLabel) -> bool {
        self.size() < other.size() && self.is_subset_of(other)
    }

    pub fn intersects(&self, other: &SubsetLabel) -> bool {
        self.members.iter().any(|i| other.contains(*i))
    }
}

impl PartialOrd for SubsetLabel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SubsetLabel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.ground, self.members.len(), &self.members).cmp(&(
            other.ground,
            other.members.len(),
            &other.members,
        ))
    }
}

impl fmt::Display for SubsetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.members.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for SubsetLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Whether two labels cross: nonempty intersection with neither containing
/// the other. Disjoint or nested pairs do not overlap.
pub fn overlaps(a: &SubsetLabel, b: &SubsetLabel) -> Result<bool> {
    if a.ground() != b.ground() {
        return Err(Error::argument(format!(
            "labels live on different ground sets ({} vs {})",
            a.ground(),
            b.ground()
        )));
    }
    Ok(a.intersects(b) && !a.is_subset_of(b) && !b.is_subset_of(a))
}

/// A strictly nested sequence `S_1 ⊋ S_2 ⊋ .. ⊋ S_k`, stored largest first.
/// The empty chain is valid and denotes the ambient stratum.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Chain {
    ground: usize,
    elements: Vec<SubsetLabel>,
}

impl Chain {
    /// The empty chain on `{1, .., ground}`.
    pub fn empty(ground: usize) -> Self {
        Chain {
            ground,
            elements: Vec::new(),
        }
    }

    /// Validates strict nesting (largest first) and a shared ground set.
    pub fn try_new(ground: usize, elements: Vec<SubsetLabel>) -> Result<Self> {
        for el in &elements {
            if el.ground() != ground {
                return Err(Error::argument("chain element on wrong ground set"));
            }
        }
        for w in elements.windows(2) {
            if !w[1].is_proper_subset_of(&w[0]) {
                return Err(Error::argument(format!(
                    "chain elements must strictly decrease: {} does not strictly contain {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(Chain { ground, elements })
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn elements(&self) -> &[SubsetLabel] {
        &self.elements
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    /// The maximal (first-stored) element, if the chain is nonempty.
    pub fn maximal(&self) -> Option<&SubsetLabel> {
        self.elements.first()
    }

    /// The minimal (last-stored) element, if the chain is nonempty.
    pub fn minimal(&self) -> Option<&SubsetLabel> {
        self.elements.last()
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.elements.is_empty() {
            return write!(f, "∅");
        }
        for (k, el) in self.elements.iter().enumerate() {
            if k > 0 {
                write!(f, ">")?;
            }
            write!(f, "{el}")?;
        }
        Ok(())
    }
}

impl Serialize for Chain {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A nest: a family of subsets containing every singleton of the ground set,
/// with no two members crossing (any two are nested or disjoint).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Nest {
    ground: usize,
    members: Vec<SubsetLabel>,
}

impl Nest {
    /// Validates the nest conditions: all singletons present, pairwise
    /// non-crossing members, shared ground set.
    pub fn try_new(ground: usize, members: Vec<SubsetLabel>) -> Result<Self> {
        if ground == 0 {
            return Err(Error::argument("ground set must be nonempty"));
        }
        let mut set: BTreeSet<SubsetLabel> = BTreeSet::new();
        for m in members {
            if m.ground() != ground {
                return Err(Error::argument("nest member on wrong ground set"));
            }
            set.insert(m);
        }
        for i in 1..=ground {
            let s = SubsetLabel::singleton(ground, i)?;
            if !set.contains(&s) {
                return Err(Error::argument(format!(
                    "nest must contain every singleton; missing {s}"
                )));
            }
        }
        let members: Vec<SubsetLabel> = set.into_iter().collect();
        for (i, a) in members.iter().enumerate() {
            for b in members.iter().skip(i + 1) {
                if overlaps(a, b)? {
                    return Err(Error::argument(format!(
                        "nest members may not cross: {a} and {b}"
                    )));
                }
            }
        }
        Ok(Nest { ground, members })
    }

    /// The minimal nest consisting of the singletons only.
    pub fn trivial(ground: usize) -> Result<Self> {
        let members = (1..=ground)
            .map(|i| SubsetLabel::singleton(ground, i))
            .collect::<Result<Vec<_>>>()?;
        Nest::try_new(ground, members)
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    /// Members in canonical order (singletons first).
    pub fn members(&self) -> &[SubsetLabel] {
        &self.members
    }

    pub fn contains(&self, label: &SubsetLabel) -> bool {
        self.members.binary_search(label).is_ok()
    }

    /// The non-singleton members, in canonical order.
    pub fn non_singletons(&self) -> impl Iterator<Item = &SubsetLabel> {
        self.members.iter().filter(|m| !m.is_singleton())
    }
}

impl fmt::Display for Nest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, m) in self.members.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "]")
    }
}

impl Serialize for Nest {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl PartialOrd for Nest {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Nest {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.ground, &self.members).cmp(&(other.ground, &other.members))
    }
}

/// Forest view of a nest: its inclusion-maximal members (roots) and, for each
/// member, the number of inclusion-maximal members strictly below it (sons).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForestStats {
    roots: Vec<SubsetLabel>,
    sons: BTreeMap<SubsetLabel, usize>,
}

impl ForestStats {
    /// Number of connected components of the forest (maximal members).
    pub fn components(&self) -> usize {
        self.roots.len()
    }

    pub fn roots(&self) -> &[SubsetLabel] {
        &self.roots
    }

    /// Number of sons of `label`, or `None` if it is not a member.
    pub fn sons(&self, label: &SubsetLabel) -> Option<usize> {
        self.sons.get(label).copied()
    }
}

/// Computes roots and son counts of the forest a nest spans.
pub fn forest_stats(nest: &Nest) -> ForestStats {
    let members = nest.members();
    let is_maximal_within = |candidate: &SubsetLabel, pool: &[&SubsetLabel]| -> bool {
        !pool
            .iter()
            .any(|other| candidate.is_proper_subset_of(other))
    };
    let all: Vec<&SubsetLabel> = members.iter().collect();
    let roots: Vec<SubsetLabel> = members
        .iter()
        .filter(|m| is_maximal_within(m, &all))
        .cloned()
        .collect();
    let mut sons = BTreeMap::new();
    for m in members {
        let below: Vec<&SubsetLabel> = members
            .iter()
            .filter(|j| j.is_proper_subset_of(m))
            .collect();
        let count = below
            .iter()
            .filter(|j| !below.iter().any(|k| j.is_proper_subset_of(k)))
            .count();
        sons.insert(m.clone(), count);
    }
    ForestStats { roots, sons }
}

/// A multiplicity vector: positive integers indexed by subset labels, with
/// total weight `‖μ‖`. The zero vector is the empty assignment.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MultiplicityVector {
    entries: BTreeMap<SubsetLabel, u64>,
}

impl MultiplicityVector {
    pub fn zero() -> Self {
        MultiplicityVector {
            entries: BTreeMap::new(),
        }
    }

    fn from_entries(entries: BTreeMap<SubsetLabel, u64>) -> Self {
        debug_assert!(entries.values().all(|&v| v > 0));
        MultiplicityVector { entries }
    }

    /// Total weight `‖μ‖`.
    pub fn norm(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn get(&self, label: &SubsetLabel) -> u64 {
        self.entries.get(label).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&SubsetLabel, u64)> {
        self.entries.iter().map(|(k, &v)| (k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
}

impl Serialize for MultiplicityVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(self.entries.len()))?;
        for (k, v) in &self.entries {
            map.serialize_entry(&k.to_string(), v)?;
        }
        map.end()
    }
}

fn check_enumeration_bound(n: usize, bound: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::argument("ground set must be nonempty"));
    }
    if n > bound {
        return Err(Error::resource(format!(
            "enumeration over {{1, .., {n}}} exceeds the configured bound {bound}"
        )));
    }
    Ok(())
}

/// All nonempty subsets of `{1, .., n}` in canonical label order.
pub fn all_labels(n: usize) -> Result<Vec<SubsetLabel>> {
    if n == 0 {
        return Err(Error::argument("ground set must be nonempty"));
    }
    if n > 16 {
        return Err(Error::resource("subset listing capped at n = 16"));
    }
    let mut out = Vec::with_capacity((1usize << n) - 1);
    for mask in 1u32..(1u32 << n) {
        let members: Vec<usize> = (1..=n).filter(|i| mask & (1 << (i - 1)) != 0).collect();
        out.push(SubsetLabel::try_new(n, members)?);
    }
    out.sort();
    Ok(out)
}

/// Enumerates every chain on `{1, .., n}` (including the empty chain) under
/// the default bound. Singleton minima are included only when requested.
pub fn enumerate_chains(n: usize, allow_singleton_min: bool) -> Result<Vec<Chain>> {
    enumerate_chains_bounded(n, allow_singleton_min, DEFAULT_ENUMERATION_BOUND)
}

/// [`enumerate_chains`] with an explicit ground-set bound.
pub fn enumerate_chains_bounded(
    n: usize,
    allow_singleton_min: bool,
    bound: usize,
) -> Result<Vec<Chain>> {
    check_enumeration_bound(n, bound)?;
    let min_size = if allow_singleton_min { 1 } else { 2 };
    let candidates: Vec<SubsetLabel> = all_labels(n)?
        .into_iter()
        .filter(|s| s.size() >= min_size)
        .collect();
    let mut out = vec![Chain::empty(n)];
    let mut stack: Vec<SubsetLabel> = Vec::new();
    fn extend(
        n: usize,
        candidates: &[SubsetLabel],
        stack: &mut Vec<SubsetLabel>,
        out: &mut Vec<Chain>,
    ) {
        for c in candidates {
            let fits = match stack.last() {
                None => true,
                Some(last) => c.is_proper_subset_of(last),
            };
            if !fits {
                continue;
            }
            stack.push(c.clone());
            out.push(Chain {
                ground: n,
                elements: stack.clone(),
            });
            extend(n, candidates, stack, out);
            stack.pop();
        }
    }
    extend(n, &candidates, &mut stack, &mut out);
    out.sort();
    Ok(out)
}

/// Enumerates every nest on `{1, .., n}` under the default bound.
pub fn enumerate_nests(n: usize) -> Result<Vec<Nest>> {
    enumerate_nests_bounded(n, DEFAULT_ENUMERATION_BOUND)
}

/// [`enumerate_nests`] with an explicit ground-set bound.
pub fn enumerate_nests_bounded(n: usize, bound: usize) -> Result<Vec<Nest>> {
    check_enumeration_bound(n, bound)?;
    let everything: Vec<usize> = (1..=n).collect();
    let mut out = Vec::new();
    for partition in partitions_of(&everything) {
        let mut pools: Vec<Vec<Vec<SubsetLabel>>> = Vec::new();
        for block in &partition {
            pools.push(hierarchies(n, block)?);
        }
        for choice in cartesian(&pools) {
            let members: Vec<SubsetLabel> = choice.into_iter().flatten().collect();
            out.push(Nest::try_new(n, members)?);
        }
    }
    out.sort();
    Ok(out)
}

/// All laminar families on `block` that contain `block` itself and every
/// singleton of `block`, returned as flat member lists.
fn hierarchies(ground: usize, block: &[usize]) -> Result<Vec<Vec<SubsetLabel>>> {
    let own = SubsetLabel::try_new(ground, block.to_vec())?;
    if block.len() == 1 {
        return Ok(vec![vec![own]]);
    }
    let mut out = Vec::new();
    for partition in partitions_of(block) {
        if partition.len() < 2 {
            continue;
        }
        let mut pools: Vec<Vec<Vec<SubsetLabel>>> = Vec::new();
        for sub in &partition {
            pools.push(hierarchies(ground, sub)?);
        }
        for choice in cartesian(&pools) {
            let mut members: Vec<SubsetLabel> = choice.into_iter().flatten().collect();
            members.push(own.clone());
            out.push(members);
        }
    }
    Ok(out)
}

/// All set partitions of a sorted slice, blocks sorted internally.
fn partitions_of(elems: &[usize]) -> Vec<Vec<Vec<usize>>> {
    if elems.is_empty() {
        return vec![Vec::new()];
    }
    let first = elems[0];
    let rest = partitions_of(&elems[1..]);
    let mut out = Vec::new();
    for p in rest {
        for i in 0..p.len() {
            let mut q = p.clone();
            q[i].insert(0, first);
            out.push(q);
        }
        let mut q = p;
        q.insert(0, vec![first]);
        out.push(q);
    }
    out
}

/// Cartesian product of choice pools, cloned elementwise.
fn cartesian<T: Clone>(pools: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = vec![Vec::new()];
    for pool in pools {
        let mut next = Vec::with_capacity(out.len() * pool.len());
        for partial in &out {
            for item in pool {
                let mut extended = partial.clone();
                extended.push(item.clone());
                next.push(extended);
            }
        }
        out = next;
    }
    out
}

/// Enumerates the cartesian product of ranges `1..=hi` per key. An empty key
/// list yields the single zero vector; any empty range yields no vectors.
fn multiplicity_product(keys: &[(SubsetLabel, u64)]) -> Vec<MultiplicityVector> {
    if keys.iter().any(|(_, hi)| *hi < 1) {
        return Vec::new();
    }
    let mut out: Vec<BTreeMap<SubsetLabel, u64>> = vec![BTreeMap::new()];
    for (label, hi) in keys {
        let mut next = Vec::with_capacity(out.len() * (*hi as usize));
        for partial in &out {
            for v in 1..=*hi {
                let mut extended = partial.clone();
                extended.insert(label.clone(), v);
                next.push(extended);
            }
        }
        out = next;
    }
    out.into_iter()
        .map(MultiplicityVector::from_entries)
        .collect()
}

/// Multiplicity vectors attached to a chain: each element `S_i` ranges over
/// `1 ..= codim·(|S_i| − |S_{i+1}|) − 1`, where `S_{k+1} = ∅`. The empty
/// chain carries exactly the zero vector. A size gap of 1 at codimension 1
/// empties the range and therefore the whole product.
pub fn chain_multiplicities(chain: &Chain, codim: u64) -> Result<Vec<MultiplicityVector>> {
    if codim == 0 {
        return Err(Error::argument("codimension must be at least 1"));
    }
    if let Some(min) = chain.minimal() {
        if min.is_singleton() && codim < 2 {
            return Err(Error::argument(
                "singleton chain minima require codimension at least 2",
            ));
        }
    }
    let mut keys = Vec::with_capacity(chain.len());
    for (i, s) in chain.elements().iter().enumerate() {
        let inner = chain.elements().get(i + 1).map_or(0, |t| t.size());
        let gap = (s.size() - inner) as u64;
        let hi = codim * gap - 1;
        keys.push((s.clone(), hi));
    }
    Ok(multiplicity_product(&keys))
}

/// Multiplicity vectors attached to a nest: each non-singleton member `I`
/// ranges over `1 ..= m·(c_I − 1) − 1` where `c_I` is its son count and `m`
/// the ambient dimension. The all-singleton nest carries the zero vector.
pub fn nest_multiplicities(nest: &Nest, m: u64) -> Result<Vec<MultiplicityVector>> {
    if m == 0 {
        return Err(Error::argument("ambient dimension must be at least 1"));
    }
    let stats = forest_stats(nest);
    let mut keys = Vec::new();
    for label in nest.non_singletons() {
        let sons = stats.sons(label).expect("member has son count") as u64;
        let hi = m * (sons - 1) - 1;
        keys.push((label.clone(), hi));
    }
    Ok(multiplicity_product(&keys))
}

/// A permutation of `{1, .., n}`, stored as the image list `i ↦ map[i-1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            map: (1..=n).collect(),
        }
    }

    /// Validates that `map` is a bijection of `{1, .., map.len()}`.
    pub fn try_new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n + 1];
        for &v in &map {
            if v == 0 || v > n || seen[v] {
                return Err(Error::argument("not a permutation"));
            }
            seen[v] = true;
        }
        Ok(Permutation { map })
    }

    pub fn degree(&self) -> usize {
        self.map.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i - 1]
    }

    pub fn apply_label(&self, label: &SubsetLabel) -> Result<SubsetLabel> {
        if label.ground() != self.degree() {
            return Err(Error::argument("permutation degree mismatch"));
        }
        SubsetLabel::try_new(
            label.ground(),
            label.members().iter().map(|&i| self.apply(i)).collect(),
        )
    }

    pub fn apply_chain(&self, chain: &Chain) -> Result<Chain> {
        let elements = chain
            .elements()
            .iter()
            .map(|el| self.apply_label(el))
            .collect::<Result<Vec<_>>>()?;
        Chain::try_new(chain.ground(), elements)
    }

    pub fn apply_nest(&self, nest: &Nest) -> Result<Nest> {
        let members = nest
            .members()
            .iter()
            .map(|mem| self.apply_label(mem))
            .collect::<Result<Vec<_>>>()?;
        Nest::try_new(nest.ground(), members)
    }
}

/// All permutations of `{1, .., n}` in a deterministic order.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    fn build(prefix: &mut Vec<usize>, remaining: &mut Vec<usize>, out: &mut Vec<Permutation>) {
        if remaining.is_empty() {
            out.push(Permutation {
                map: prefix.clone(),
            });
            return;
        }
        for idx in 0..remaining.len() {
            let v = remaining.remove(idx);
            prefix.push(v);
            build(prefix, remaining, out);
            prefix.pop();
            remaining.insert(idx, v);
        }
    }
    let mut out = Vec::new();
    build(&mut Vec::new(), &mut (1..=n).collect(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lab(n: usize, m: &[usize]) -> SubsetLabel {
        SubsetLabel::try_new(n, m.to_vec()).unwrap()
    }

    #[test]
    fn label_canonical_order_and_text() {
        let a = lab(3, &[1, 2]);
        let b = lab(3, &[3]);
        let c = lab(3, &[1, 3]);
        assert!(b < a, "smaller sets come first");
        assert!(a < c, "lexicographic members break size ties");
        assert_eq!(a.to_string(), "{1,2}");
        assert_eq!(Chain::empty(2).to_string(), "∅");
        let ch = Chain::try_new(3, vec![lab(3, &[1, 2, 3]), lab(3, &[1, 2])]).unwrap();
        assert_eq!(ch.to_string(), "{1,2,3}>{1,2}");
    }

    #[test]
    fn label_rejects_bad_members() {
        assert!(SubsetLabel::try_new(3, vec![]).is_err());
        assert!(SubsetLabel::try_new(3, vec![0]).is_err());
        assert!(SubsetLabel::try_new(3, vec![4]).is_err());
        assert_eq!(lab(3, &[2, 1, 2]).members(), &[1, 2]);
    }

    #[test]
    fn overlap_is_crossing_only() {
        let n = 4;
        assert!(overlaps(&lab(n, &[1, 2]), &lab(n, &[2, 3])).unwrap());
        assert!(!overlaps(&lab(n, &[1, 2]), &lab(n, &[1, 2, 3])).unwrap());
        assert!(!overlaps(&lab(n, &[1, 2]), &lab(n, &[3, 4])).unwrap());
        assert!(!overlaps(&lab(n, &[1]), &lab(n, &[1, 2])).unwrap());
        assert!(overlaps(&lab(3, &[1]), &lab(4, &[1])).is_err());
    }

    #[test]
    fn chain_validation() {
        assert!(Chain::try_new(3, vec![lab(3, &[1, 2]), lab(3, &[1, 2, 3])]).is_err());
        assert!(Chain::try_new(3, vec![lab(3, &[1, 2]), lab(3, &[1, 3])]).is_err());
        assert!(Chain::try_new(3, vec![lab(3, &[1, 2, 3]), lab(3, &[2])]).is_ok());
    }

    #[test]
    fn nest_validation() {
        // Missing singletons is rejected.
        assert!(Nest::try_new(2, vec![lab(2, &[1, 2])]).is_err());
        // Crossing members are rejected.
        let bad = Nest::try_new(
            3,
            vec![
                lab(3, &[1]),
                lab(3, &[2]),
                lab(3, &[3]),
                lab(3, &[1, 2]),
                lab(3, &[2, 3]),
            ],
        );
        assert!(bad.is_err());
        assert!(Nest::trivial(3).is_ok());
    }

    #[test]
    fn nest_counts_small() {
        assert_eq!(enumerate_nests(1).unwrap().len(), 1);
        assert_eq!(enumerate_nests(2).unwrap().len(), 2);
        assert_eq!(enumerate_nests(3).unwrap().len(), 8);
    }

    #[test]
    fn chain_counts_small() {
        assert_eq!(enumerate_chains(2, false).unwrap().len(), 2);
        assert_eq!(enumerate_chains(3, false).unwrap().len(), 8);
        // With singleton minima: ∅; {1}; {2}; {1,2}; {1,2}>{1}; {1,2}>{2}.
        assert_eq!(enumerate_chains(2, true).unwrap().len(), 6);
    }

    #[test]
    fn enumeration_bound_enforced() {
        assert!(matches!(
            enumerate_nests(DEFAULT_ENUMERATION_BOUND + 1),
            Err(Error::Resource(_))
        ));
        assert!(enumerate_nests_bounded(1, 1).is_ok());
        assert!(matches!(enumerate_chains(0, false), Err(Error::Argument(_))));
    }

    #[test]
    fn forest_stats_examples() {
        let trivial = Nest::trivial(3).unwrap();
        let stats = forest_stats(&trivial);
        assert_eq!(stats.components(), 3);
        assert!(trivial.members().iter().all(|m| stats.sons(m) == Some(0)));

        let with_pair = Nest::try_new(
            3,
            vec![lab(3, &[1]), lab(3, &[2]), lab(3, &[3]), lab(3, &[1, 2])],
        )
        .unwrap();
        let stats = forest_stats(&with_pair);
        assert_eq!(stats.components(), 2);
        assert_eq!(stats.sons(&lab(3, &[1, 2])), Some(2));

        let tower = Nest::try_new(
            3,
            vec![
                lab(3, &[1]),
                lab(3, &[2]),
                lab(3, &[3]),
                lab(3, &[1, 2]),
                lab(3, &[1, 2, 3]),
            ],
        )
        .unwrap();
        let stats = forest_stats(&tower);
        assert_eq!(stats.components(), 1);
        assert_eq!(stats.sons(&lab(3, &[1, 2, 3])), Some(2));
        assert_eq!(stats.sons(&lab(3, &[1, 2])), Some(2));
    }

    #[test]
    fn chain_multiplicity_ranges() {
        // Single full element at codim 1: range 1..=2.
        let ch = Chain::try_new(3, vec![lab(3, &[1, 2, 3])]).unwrap();
        let ms = chain_multiplicities(&ch, 1).unwrap();
        assert_eq!(ms.len(), 2);
        assert_eq!(ms[0].norm(), 1);
        assert_eq!(ms[1].norm(), 2);

        // A size gap of 1 kills the outer range.
        let ch = Chain::try_new(3, vec![lab(3, &[1, 2, 3]), lab(3, &[1, 2])]).unwrap();
        assert!(chain_multiplicities(&ch, 1).unwrap().is_empty());

        // Empty chain carries exactly the zero vector.
        let ms = chain_multiplicities(&Chain::empty(3), 1).unwrap();
        assert_eq!(ms.len(), 1);
        assert!(ms[0].is_zero());

        // Singleton minima need codim >= 2; then {1} has range 1..=1.
        let ch = Chain::try_new(2, vec![lab(2, &[1])]).unwrap();
        assert!(chain_multiplicities(&ch, 1).is_err());
        let ms = chain_multiplicities(&ch, 2).unwrap();
        assert_eq!(ms.len(), 1);
        assert_eq!(ms[0].norm(), 1);
    }

    #[test]
    fn nest_multiplicity_ranges() {
        let pair = Nest::try_new(2, vec![lab(2, &[1]), lab(2, &[2]), lab(2, &[1, 2])]).unwrap();
        // m = 2: range 1..=m(c_I - 1)-1 = 1..=1.
        let ms = nest_multiplicities(&pair, 2).unwrap();
        assert_eq!(ms.len(), 1);
        assert_eq!(ms[0].norm(), 1);
        // m = 1 empties the range.
        assert!(nest_multiplicities(&pair, 1).unwrap().is_empty());
        // All-singleton nest carries the zero vector.
        let ms = nest_multiplicities(&Nest::trivial(4).unwrap(), 1).unwrap();
        assert_eq!(ms.len(), 1);
        assert!(ms[0].is_zero());
    }

    #[test]
    fn permutations_act_on_structures() {
        let sigma = Permutation::try_new(vec![2, 3, 1]).unwrap();
        let ch = Chain::try_new(3, vec![lab(3, &[1, 2, 3]), lab(3, &[1, 2])]).unwrap();
        let image = sigma.apply_chain(&ch).unwrap();
        assert_eq!(image.to_string(), "{1,2,3}>{2,3}");
        let nest = Nest::try_new(
            3,
            vec![lab(3, &[1]), lab(3, &[2]), lab(3, &[3]), lab(3, &[1, 2])],
        )
        .unwrap();
        let image = sigma.apply_nest(&nest).unwrap();
        assert!(image.contains(&lab(3, &[2, 3])));
        assert_eq!(all_permutations(4).len(), 24);
        assert!(Permutation::try_new(vec![1, 1]).is_err());
    }
}
