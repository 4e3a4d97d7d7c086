//! Strict partial orders, cyclic orders and convenient relations.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Debug;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("element {0} is not in the carrier")]
    NotInCarrier(String),
    #[error("carrier has {0} elements, at least 3 are needed")]
    TooSmallCarrier(usize),
    #[error("element {0} of the subset is not in the carrier")]
    NotASubset(String),
    #[error("relation is not convenient at {0}")]
    NotConvenient(String),
    #[error("element {0} occurs twice")]
    DuplicateElement(String),
}

/// Strict partial order on `0..n`, stored as a dense matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StrictPartialOrder {
    n: usize,
    less: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Comparability {
    /// `u < v` or `v < u`.
    C1,
    /// Incomparable.
    C2,
}

impl StrictPartialOrder {
    pub fn empty(n: usize) -> Self {
        StrictPartialOrder { n, less: vec![false; n * n] }
    }

    /// Transitive closure of the generating pairs `(a, b)`, read as `a < b`.
    /// On failure returns a cycle `v0 < v1 < ... < v0` of the generators.
    pub fn from_generators(n: usize, pairs: &[(usize, usize)]) -> Result<Self, Vec<usize>> {
        let mut succ = vec![Vec::new(); n];
        for &(a, b) in pairs {
            assert!(a < n && b < n, "order pair out of range");
            if a == b {
                return Err(vec![a]);
            }
            succ[a].push(b);
        }
        let mut less = vec![false; n * n];
        for s in 0..n {
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &y in &succ[x] {
                    if y == s {
                        return Err(Self::cycle_through(&succ, s));
                    }
                    if !less[s * n + y] {
                        less[s * n + y] = true;
                        queue.push_back(y);
                    }
                }
            }
        }
        Ok(StrictPartialOrder { n, less })
    }

    fn cycle_through(succ: &[Vec<usize>], s: usize) -> Vec<usize> {
        let mut parent = BTreeMap::new();
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &y in &succ[x] {
                if y == s {
                    let mut path = vec![x];
                    let mut z = x;
                    while z != s {
                        z = parent[&z];
                        path.push(z);
                    }
                    path.reverse();
                    return path;
                }
                if let std::collections::btree_map::Entry::Vacant(e) = parent.entry(y) {
                    e.insert(x);
                    queue.push_back(y);
                }
            }
        }
        unreachable!("no cycle through {s}")
    }

    /// Order given by a numeric assignment: `u < v` iff `value[u] < value[v]`.
    pub fn from_values(values: &[f64]) -> Self {
        let n = values.len();
        let mut less = vec![false; n * n];
        for u in 0..n {
            for v in 0..n {
                less[u * n + v] = values[u] < values[v];
            }
        }
        StrictPartialOrder { n, less }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn less(&self, u: usize, v: usize) -> bool {
        self.less[u * self.n + v]
    }

    pub fn comparable(&self, u: usize, v: usize) -> bool {
        self.less(u, v) || self.less(v, u)
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|&(u, v)| self.less(u, v)).collect()
    }

    /// Cover relation (Hasse diagram edges).
    pub fn covers(&self) -> Vec<(usize, usize)> {
        self.pairs().into_iter().filter(|&(u, v)| !(0..self.n).any(|w| self.less(u, w) && self.less(w, v))).collect()
    }

    /// Every pair of `self` is a pair of `other`.
    pub fn is_subset_of(&self, other: &StrictPartialOrder) -> bool {
        self.n == other.n && self.less.iter().zip(&other.less).all(|(&a, &b)| !a || b)
    }

    pub fn minimal(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| !(0..self.n).any(|u| self.less(u, v))).collect()
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| !(0..self.n).any(|u| self.less(v, u))).collect()
    }

    /// Length of the longest chain ending at each element (minimal = 0).
    pub fn rank(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&v| (0..self.n).filter(|&u| self.less(u, v)).count());
        let mut rank = vec![0; self.n];
        for &v in &order {
            rank[v] = (0..self.n).filter(|&u| self.less(u, v)).map(|u| rank[u] + 1).max().unwrap_or(0);
        }
        rank
    }

    /// Incomparability classes, valid as a partition when A4 holds.
    /// Falls back to connected components of the incomparability graph.
    pub fn incomparability_classes(&self) -> Vec<Vec<usize>> {
        let mut class = vec![usize::MAX; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if class[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            class[s] = id;
            let mut i = 0;
            while i < members.len() {
                let x = members[i];
                for y in 0..self.n {
                    if y != x && class[y] == usize::MAX && !self.comparable(x, y) {
                        class[y] = id;
                        members.push(y);
                    }
                }
                i += 1;
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Same order after renaming element `v` to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let mut out = Self::empty(self.n);
        for (u, v) in self.pairs() {
            out.less[perm[u] * self.n + perm[v]] = true;
        }
        out
    }
}

pub fn comparability(order: &StrictPartialOrder, u: usize, v: usize) -> Result<Comparability, OrderError> {
    for x in [u, v] {
        if x >= order.len() {
            return Err(OrderError::NotInCarrier(x.to_string()));
        }
    }
    Ok(if order.comparable(u, v) { Comparability::C1 } else { Comparability::C2 })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct A4Verdict {
    pub holds: bool,
    /// `(v, v', v'')` with `v'`, `v''` incomparable and `v` relating to them differently.
    pub witness: Option<(usize, usize, usize)>,
}

/// Incomparable elements relate identically to every other element,
/// from above and from below.
pub fn check_a4(order: &StrictPartialOrder) -> A4Verdict {
    let n = order.len();
    for a in 0..n {
        for b in 0..n {
            if a == b || order.comparable(a, b) {
                continue;
            }
            for v in 0..n {
                if order.less(a, v) != order.less(b, v) || order.less(v, a) != order.less(v, b) {
                    return A4Verdict { holds: false, witness: Some((v, a, b)) };
                }
            }
        }
    }
    A4Verdict { holds: true, witness: None }
}

/// A complete cyclic order, stored as a circular sequence rotated so that
/// the smallest element comes first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CyclicOrder<T> {
    seq: Vec<T>,
}

impl<T: Ord + Clone + Debug> CyclicOrder<T> {
    pub fn new(seq: Vec<T>) -> Result<Self, OrderError> {
        let distinct: BTreeSet<&T> = seq.iter().collect();
        if distinct.len() != seq.len() {
            let mut seen = BTreeSet::new();
            let dup = seq.iter().find(|x| !seen.insert(*x)).unwrap();
            return Err(OrderError::DuplicateElement(format!("{dup:?}")));
        }
        let mut seq = seq;
        if let Some(start) = seq.iter().enumerate().min_by(|a, b| a.1.cmp(b.1)).map(|(i, _)| i) {
            seq.rotate_left(start);
        }
        Ok(CyclicOrder { seq })
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    /// Canonical sequence (rotated to start at the minimum).
    pub fn as_slice(&self) -> &[T] {
        &self.seq
    }

    pub fn contains(&self, a: &T) -> bool {
        self.seq.contains(a)
    }

    pub fn position(&self, a: &T) -> Option<usize> {
        self.seq.iter().position(|x| x == a)
    }

    /// `(predecessor, successor)` of `a`.
    pub fn adjacent(&self, a: &T) -> Result<(T, T), OrderError> {
        if self.len() < 3 {
            return Err(OrderError::TooSmallCarrier(self.len()));
        }
        let i = self.position(a).ok_or_else(|| OrderError::NotInCarrier(format!("{a:?}")))?;
        let n = self.len();
        Ok((self.seq[(i + n - 1) % n].clone(), self.seq[(i + 1) % n].clone()))
    }

    /// Pairs of circularly consecutive elements `(x, next(x))`. A two-element
    /// carrier gives its pair twice, once per direction; smaller carriers
    /// give none.
    pub fn adjacent_pairs(&self) -> Vec<(T, T)> {
        let n = self.len();
        if n < 2 {
            return Vec::new();
        }
        (0..n).map(|i| (self.seq[i].clone(), self.seq[(i + 1) % n].clone())).collect()
    }

    pub fn induce(&self, subset: &[T]) -> Result<CyclicOrder<T>, OrderError> {
        if let Some(x) = subset.iter().find(|x| !self.contains(x)) {
            return Err(OrderError::NotASubset(format!("{x:?}")));
        }
        let keep: BTreeSet<&T> = subset.iter().collect();
        CyclicOrder::new(self.seq.iter().filter(|x| keep.contains(x)).cloned().collect())
    }

    pub fn reversed(&self) -> CyclicOrder<T> {
        CyclicOrder::new(self.seq.iter().rev().cloned().collect()).expect("distinct")
    }

    pub fn eq_oriented(&self, other: &CyclicOrder<T>) -> bool {
        self == other
    }

    pub fn eq_up_to_reflection(&self, other: &CyclicOrder<T>) -> bool {
        self == other || *self == other.reversed()
    }

    /// The ternary relation: `b` lies strictly between `a` and `c` going
    /// forward from `a`.
    pub fn between(&self, a: &T, b: &T, c: &T) -> bool {
        let (Some(i), Some(j), Some(k)) = (self.position(a), self.position(b), self.position(c)) else {
            return false;
        };
        if i == j || j == k || i == k {
            return false;
        }
        let n = self.len();
        (j + n - i) % n < (k + n - i) % n
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryRelation<T> {
    pub carrier: Vec<T>,
    pub pairs: Vec<(T, T)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RhoKind {
    Chain,
    Cycle,
}

/// A maximal chain `b0 -> ... -> bn` or a cycle of a convenient relation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhoComponent<T> {
    pub kind: RhoKind,
    pub elements: Vec<T>,
}

impl<T> RhoComponent<T> {
    /// Number of relation pairs in the component.
    pub fn length(&self) -> usize {
        match self.kind {
            RhoKind::Chain => self.elements.len() - 1,
            RhoKind::Cycle => self.elements.len(),
        }
    }
}

impl<T: Ord + Clone + Debug> BinaryRelation<T> {
    pub fn new(carrier: Vec<T>, pairs: Vec<(T, T)>) -> Self {
        BinaryRelation { carrier, pairs }
    }

    fn violation(&self) -> Option<T> {
        let mut out_deg: BTreeMap<&T, usize> = BTreeMap::new();
        let mut in_deg: BTreeMap<&T, usize> = BTreeMap::new();
        for (a, b) in &self.pairs {
            if a == b {
                return Some(a.clone());
            }
            *out_deg.entry(a).or_default() += 1;
            *in_deg.entry(b).or_default() += 1;
        }
        out_deg.into_iter().chain(in_deg).find(|&(_, d)| d > 1).map(|(x, _)| x.clone())
    }

    pub fn is_convenient(&self) -> bool {
        self.violation().is_none()
    }

    /// Splits a convenient relation into maximal chains and cycles. Every
    /// carrier element lands in exactly one component.
    pub fn rho_components(&self) -> Result<Vec<RhoComponent<T>>, OrderError> {
        if let Some(x) = self.violation() {
            return Err(OrderError::NotConvenient(format!("{x:?}")));
        }
        let mut elems: BTreeSet<T> = self.carrier.iter().cloned().collect();
        for (a, b) in &self.pairs {
            elems.insert(a.clone());
            elems.insert(b.clone());
        }
        let next: BTreeMap<&T, &T> = self.pairs.iter().map(|(a, b)| (a, b)).collect();
        let has_pred: BTreeSet<&T> = self.pairs.iter().map(|(_, b)| b).collect();
        let mut done: BTreeSet<T> = BTreeSet::new();
        let mut out = Vec::new();
        for start in elems.iter().filter(|x| !has_pred.contains(x)) {
            let mut chain = vec![start.clone()];
            let mut x = start;
            while let Some(&y) = next.get(x) {
                chain.push(y.clone());
                x = y;
            }
            done.extend(chain.iter().cloned());
            out.push(RhoComponent { kind: RhoKind::Chain, elements: chain });
        }
        for start in &elems {
            if done.contains(start) {
                continue;
            }
            let mut cycle = vec![start.clone()];
            let mut x = next[start];
            while x != start {
                cycle.push(x.clone());
                x = next[x];
            }
            done.extend(cycle.iter().cloned());
            out.push(RhoComponent { kind: RhoKind::Cycle, elements: cycle });
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn closure_and_cycles() {
        let o = StrictPartialOrder::from_generators(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        assert!(o.less(0, 3));
        assert!(!o.comparable(1, 2));
        assert_eq!(o.covers().len(), 4);
        assert_eq!(o.rank(), vec![0, 1, 1, 2]);
        assert_eq!(StrictPartialOrder::from_generators(2, &[(0, 1), (1, 0)]).unwrap_err(), vec![0, 1]);
        let cyc = StrictPartialOrder::from_generators(3, &[(0, 1), (1, 2), (2, 0)]).unwrap_err();
        assert_eq!(cyc.len(), 3);
    }

    #[test]
    fn comparability_classes() {
        let o = StrictPartialOrder::from_generators(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(comparability(&o, 0, 3).unwrap(), Comparability::C1);
        assert_eq!(comparability(&o, 1, 2).unwrap(), Comparability::C2);
        assert!(comparability(&o, 0, 7).is_err());
    }

    #[test]
    fn a4_examples() {
        let g1 = StrictPartialOrder::from_generators(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        assert!(check_a4(&g1).holds);
        // x=0, y=1, z=2 with x<z
        let o = StrictPartialOrder::from_generators(3, &[(0, 2)]).unwrap();
        assert_eq!(check_a4(&o), A4Verdict { holds: false, witness: Some((2, 0, 1)) });
        assert!(check_a4(&StrictPartialOrder::empty(5)).holds);
    }

    #[test]
    fn cyclic_adjacency() {
        let co = CyclicOrder::new(vec!["w1", "w2", "w3", "w4"]).unwrap();
        assert_eq!(co.adjacent(&"w2").unwrap(), ("w1", "w3"));
        assert_eq!(co.adjacent(&"w4").unwrap(), ("w3", "w1"));
        let xyz = CyclicOrder::new(vec!["x", "y", "z"]).unwrap();
        assert_eq!(xyz.adjacent(&"x").unwrap(), ("z", "y"));
        let pair = CyclicOrder::new(vec![1, 2]).unwrap();
        assert_eq!(pair.adjacent(&1), Err(OrderError::TooSmallCarrier(2)));
        assert!(matches!(co.adjacent(&"q"), Err(OrderError::NotInCarrier(_))));
        assert!(CyclicOrder::new(vec![1, 1]).is_err());
    }

    #[test]
    fn cyclic_induce() {
        let oct = CyclicOrder::new(vec!["w1", "M1", "w2", "m1", "w3", "M2", "w4", "m2"]).unwrap();
        let sub = oct.induce(&["w3", "w1", "w4", "w2"]).unwrap();
        assert_eq!(sub, CyclicOrder::new(vec!["w1", "w2", "w3", "w4"]).unwrap());
        assert_eq!(oct.induce(&["M1", "m2"]).unwrap().len(), 2);
        assert_eq!(oct.induce(oct.as_slice()).unwrap(), oct);
        assert!(matches!(oct.induce(&["zz"]), Err(OrderError::NotASubset(_))));
    }

    #[test]
    fn cyclic_reflection_and_between() {
        let a = CyclicOrder::new(vec![1, 2, 3, 4]).unwrap();
        let b = CyclicOrder::new(vec![3, 2, 1, 4]).unwrap();
        assert!(!a.eq_oriented(&b));
        assert!(a.eq_up_to_reflection(&b));
        assert!(a.between(&1, &2, &3));
        assert!(a.between(&3, &4, &1));
        assert!(!a.between(&1, &3, &2));
    }

    #[test]
    fn convenient_relations() {
        let chain = BinaryRelation::new(vec!['a', 'b', 'c'], vec![('a', 'b'), ('b', 'c')]);
        assert!(chain.is_convenient());
        assert_eq!(
            chain.rho_components().unwrap(),
            vec![RhoComponent { kind: RhoKind::Chain, elements: vec!['a', 'b', 'c'] }]
        );
        assert!(!BinaryRelation::new(vec!['a', 'b', 'c'], vec![('a', 'b'), ('a', 'c')]).is_convenient());
        assert!(!BinaryRelation::new(vec!['a'], vec![('a', 'a')]).is_convenient());
        let cyc = BinaryRelation::new(vec!['a', 'b'], vec![('a', 'b'), ('b', 'a')]);
        let comps = cyc.rho_components().unwrap();
        assert_eq!(comps, vec![RhoComponent { kind: RhoKind::Cycle, elements: vec!['a', 'b'] }]);
        assert_eq!(comps[0].length(), 2);
        let single = BinaryRelation::new(vec!['a'], vec![]).rho_components().unwrap();
        assert_eq!(single[0].length(), 0);
        assert!(BinaryRelation::new(vec![1, 2, 3], vec![(1, 2), (1, 3)]).rho_components().is_err());
    }

    fn random_order() -> impl Strategy<Value = StrictPartialOrder> {
        (1usize..7).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..10).prop_map(move |raw| {
                // orient by index so the generators are acyclic
                let pairs: Vec<_> =
                    raw.into_iter().filter(|(a, b)| a != b).map(|(a, b)| (a.min(b), a.max(b))).collect();
                StrictPartialOrder::from_generators(n, &pairs).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn adjacency_is_inverse(seq in proptest::sample::subsequence((0..12).collect::<Vec<_>>(), 3..12).prop_shuffle()) {
            let co = CyclicOrder::new(seq.clone()).unwrap();
            for a in &seq {
                let (p, s) = co.adjacent(a).unwrap();
                prop_assert_ne!(p, s);
                prop_assert_eq!(co.adjacent(&p).unwrap().1, *a);
                prop_assert_eq!(co.adjacent(&s).unwrap().0, *a);
            }
        }

        #[test]
        fn induce_is_functorial(seq in Just((0..10).collect::<Vec<_>>()).prop_shuffle(), k1 in 2usize..10, k2 in 0usize..10) {
            let co = CyclicOrder::new(seq.clone()).unwrap();
            let big: Vec<_> = seq[..k1].to_vec();
            let small: Vec<_> = big[..k2.min(k1)].to_vec();
            let twice = co.induce(&big).unwrap().induce(&small).unwrap();
            prop_assert_eq!(twice, co.induce(&small).unwrap());
        }

        #[test]
        fn a4_relabel_invariant(o in random_order(), seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut perm: Vec<usize> = (0..o.len()).collect();
            perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            prop_assert_eq!(check_a4(&o).holds, check_a4(&o.relabel(&perm)).holds);
        }

        #[test]
        fn rho_partition(perm in Just((0..8).collect::<Vec<usize>>()).prop_shuffle(), mask in proptest::collection::vec(any::<bool>(), 8)) {
            // a permutation with some arrows removed is always convenient
            let pairs: Vec<_> = (0..8).filter(|&i| mask[i]).map(|i| (i, perm[i])).filter(|(a, b)| a != b).collect();
            let rel = BinaryRelation::new((0..8).collect(), pairs.clone());
            let comps = rel.rho_components().unwrap();
            let covered: usize = comps.iter().map(|c| c.length()).sum();
            prop_assert_eq!(covered, pairs.len());
            let mut all: Vec<usize> = comps.iter().flat_map(|c| c.elements.clone()).collect();
            all.sort_unstable();
            prop_assert_eq!(all, (0..8).collect::<Vec<_>>());
        }
    }
}
