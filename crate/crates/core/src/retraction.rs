//! Retractions (idempotent endomorphisms), retracts, retraction congruences
//! and the poset of retracts.

use std::collections::BTreeSet;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::congruence::{all_congruences, is_congruence, Partition};
use crate::error::{check_cap, Error, Result};
use crate::limits::Limits;
use crate::order::{Lattice, SubsetMask};

/// A total self-map of a lattice, `x ↦ image_of[x]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EndoMap {
    image_of: Vec<usize>,
}

impl EndoMap {
    pub fn new(image_of: Vec<usize>) -> EndoMap {
        EndoMap { image_of }
    }

    pub fn identity(n: usize) -> EndoMap {
        EndoMap { image_of: (0..n).collect() }
    }

    pub fn constant(n: usize, value: usize) -> EndoMap {
        EndoMap { image_of: vec![value; n] }
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.image_of[x]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.image_of
    }

    pub fn universe(&self) -> usize {
        self.image_of.len()
    }

    pub fn image(&self) -> SubsetMask {
        SubsetMask::from_indices(self.universe(), self.image_of.iter().copied())
    }

    pub fn fixed_points(&self) -> SubsetMask {
        SubsetMask::from_indices(self.universe(), (0..self.universe()).filter(|&x| self.image_of[x] == x))
    }

    /// `ker f = {(x, y) : f(x) = f(y)}`.
    pub fn kernel(&self) -> Partition {
        Partition::from_labels(&self.image_of)
    }

    pub fn is_idempotent(&self) -> bool {
        self.image_of.iter().all(|&y| self.image_of.get(y) == Some(&y))
    }

    pub fn is_homomorphism(&self, lattice: &Lattice) -> bool {
        let n = lattice.size();
        if self.universe() != n || self.image_of.iter().any(|&y| y >= n) {
            return false;
        }
        let f = &self.image_of;
        (0..n).all(|x| {
            (x + 1..n).all(|y| {
                f[lattice.meet(x, y)] == lattice.meet(f[x], f[y])
                    && f[lattice.join(x, y)] == lattice.join(f[x], f[y])
            })
        })
    }
}

impl fmt::Debug for EndoMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.image_of)
    }
}

pub fn is_retraction(lattice: &Lattice, f: &EndoMap) -> bool {
    f.is_homomorphism(lattice) && f.is_idempotent()
}

struct RetractionSearch<'a> {
    lattice: &'a Lattice,
    order: Vec<usize>,
    lower_covers: Vec<Vec<usize>>,
    /// Incomparable pairs `(u, w)` with `u ∨ w = v`, per `v`.
    join_pairs: Vec<Vec<(usize, usize)>>,
    image: Vec<Option<usize>>,
    /// How many assigned elements map onto each element.
    hits: Vec<usize>,
    found: Vec<EndoMap>,
}

impl RetractionSearch<'_> {
    fn consistent(&self, v: usize, c: usize, depth: usize) -> bool {
        let l = self.lattice;
        // Anything already hit must be a fixed point.
        if self.hits[v] > 0 && c != v {
            return false;
        }
        if let Some(fc) = self.image[c] {
            if fc != c && c != v {
                return false;
            }
        }
        let image = |x: usize| self.image[x].expect("assigned");
        self.join_pairs[v].iter().all(|&(u, w)| l.join(image(u), image(w)) == c)
            && self.order[..depth].iter().all(|&u| image(l.meet(u, v)) == l.meet(image(u), c))
    }

    fn extend(&mut self, depth: usize) {
        let l = self.lattice;
        let n = l.size();
        if depth == n {
            let map = EndoMap::new(self.image.iter().map(|x| x.expect("total")).collect());
            debug_assert!(is_retraction(l, &map));
            self.found.push(map);
            return;
        }
        let v = self.order[depth];
        let below: Vec<usize> =
            self.lower_covers[v].iter().map(|&u| self.image[u].expect("assigned")).collect();
        let candidates: Vec<usize> = if below.len() >= 2 {
            // v is the join of its lower covers, so its image is forced.
            vec![below.iter().fold(l.bottom(), |acc, &x| l.join(acc, x))]
        } else {
            let floor = below.first().copied().unwrap_or(l.bottom());
            l.up_set(floor).ones().collect()
        };
        for c in candidates {
            if !self.consistent(v, c, depth) {
                continue;
            }
            self.image[v] = Some(c);
            self.hits[c] += 1;
            self.extend(depth + 1);
            self.hits[c] -= 1;
            self.image[v] = None;
        }
    }
}

/// All idempotent endomorphisms, sorted by their image arrays.
///
/// Elements are assigned along a linear extension. Join-reducible elements
/// get the forced image `f(u1) ∨ f(u2) ∨ ...` of their lower covers; the
/// rest range over the up-set of their lower cover's image. Meets with every
/// earlier element and joins of earlier incomparable pairs are checked on
/// assignment, and any element already in the partial image must map to
/// itself.
pub fn all_retractions(lattice: &Lattice, limits: &Limits) -> Result<Vec<EndoMap>> {
    let n = lattice.size();
    check_cap("retraction enumeration", n, limits.retractions)?;
    let mut search = RetractionSearch {
        lattice,
        order: lattice.linear_extension(),
        lower_covers: (0..n).map(|x| lattice.lower_covers(x).collect()).collect(),
        join_pairs: (0..n)
            .map(|v| {
                (0..n)
                    .flat_map(|u| (u + 1..n).map(move |w| (u, w)))
                    .filter(|&(u, w)| !lattice.comparable(u, w) && lattice.join(u, w) == v)
                    .collect()
            })
            .collect(),
        image: vec![None; n],
        hits: vec![0; n],
        found: Vec::new(),
    };
    search.extend(0);
    let mut found = search.found;
    found.sort();
    Ok(found)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RetractMode {
    /// Images of all retractions.
    BruteForce,
    /// Sublattices that pick exactly one element from each block of some
    /// congruence.
    Transversal,
}

/// All retracts (never `∅`), sorted.
pub fn retracts(lattice: &Lattice, mode: RetractMode, limits: &Limits) -> Result<Vec<SubsetMask>> {
    let set: BTreeSet<SubsetMask> = match mode {
        RetractMode::BruteForce => all_retractions(lattice, limits)?.iter().map(EndoMap::image).collect(),
        RetractMode::Transversal => {
            check_cap("retract enumeration", lattice.size(), limits.retractions)?;
            let mut set = BTreeSet::new();
            for theta in all_congruences(lattice, limits)? {
                TransversalSearch::new(lattice, &theta).run(false, &mut |s| {
                    set.insert(s);
                });
            }
            set
        }
    };
    Ok(set.into_iter().collect())
}

struct TransversalSearch<'a> {
    lattice: &'a Lattice,
    theta: &'a Partition,
    blocks: Vec<Vec<usize>>,
    /// Representative chosen for each block id.
    chosen: Vec<Option<usize>>,
    /// Representatives forced by closure of the current choice.
    forced: Vec<Option<usize>>,
    picked: Vec<usize>,
}

impl<'a> TransversalSearch<'a> {
    fn new(lattice: &'a Lattice, theta: &'a Partition) -> Self {
        let mut blocks = theta.blocks();
        blocks.sort_by_key(|b| (b.len(), b[0]));
        let k = theta.num_blocks();
        TransversalSearch {
            lattice,
            theta,
            blocks,
            chosen: vec![None; k],
            forced: vec![None; k],
            picked: Vec::new(),
        }
    }

    /// Calls `emit` on every sublattice transversal; stops after the first
    /// when `first_only`. Returns whether anything was emitted.
    fn run(&mut self, first_only: bool, emit: &mut dyn FnMut(SubsetMask)) -> bool {
        self.step(0, first_only, emit)
    }

    fn step(&mut self, depth: usize, first_only: bool, emit: &mut dyn FnMut(SubsetMask)) -> bool {
        if depth == self.blocks.len() {
            emit(SubsetMask::from_indices(self.lattice.size(), self.picked.iter().copied()));
            return true;
        }
        let block_id = self.theta.block_of(self.blocks[depth][0]);
        let candidates: Vec<usize> = match self.forced[block_id] {
            Some(x) => vec![x],
            None => self.blocks[depth].clone(),
        };
        let mut any = false;
        for r in candidates {
            let mut undo = Vec::new();
            if self.choose(block_id, r, &mut undo) {
                any |= self.step(depth + 1, first_only, emit);
            }
            self.chosen[block_id] = None;
            self.picked.pop();
            for b in undo {
                self.forced[b] = None;
            }
            if any && first_only {
                return true;
            }
        }
        any
    }

    /// Records `r` and propagates closure; false on conflict.
    fn choose(&mut self, block_id: usize, r: usize, undo: &mut Vec<usize>) -> bool {
        self.chosen[block_id] = Some(r);
        self.picked.push(r);
        let l = self.lattice;
        for &s in &self.picked {
            for m in [l.meet(r, s), l.join(r, s)] {
                let b = self.theta.block_of(m);
                let expected = self.chosen[b].or(self.forced[b]);
                match expected {
                    Some(e) if e != m => return false,
                    Some(_) => {}
                    None => {
                        self.forced[b] = Some(m);
                        undo.push(b);
                    }
                }
            }
        }
        true
    }
}

/// All sublattices meeting every block of `theta` in exactly one element.
pub fn sublattice_transversals(lattice: &Lattice, theta: &Partition) -> Result<Vec<SubsetMask>> {
    if !is_congruence(lattice, theta) {
        return Err(Error::NotACongruence);
    }
    let mut out = Vec::new();
    TransversalSearch::new(lattice, theta).run(false, &mut |s| out.push(s));
    out.sort();
    Ok(out)
}

/// Whether `theta` is the kernel of some retraction, with a sublattice
/// transversal as witness.
pub fn is_retraction_congruence(lattice: &Lattice, theta: &Partition) -> Result<Option<SubsetMask>> {
    if !is_congruence(lattice, theta) {
        return Err(Error::NotACongruence);
    }
    let mut witness = None;
    TransversalSearch::new(lattice, theta).run(true, &mut |s| witness = Some(s));
    Ok(witness)
}

/// The retraction with kernel `theta` and image `transversal`:
/// `f(x)` is the unique member of `transversal` in the block of `x`.
pub fn retraction_from_transversal(
    lattice: &Lattice,
    theta: &Partition,
    transversal: &SubsetMask,
) -> Result<EndoMap> {
    let mut rep = vec![None; theta.num_blocks()];
    for x in transversal.iter() {
        let b = theta.block_of(x);
        if rep[b].replace(x).is_some() {
            return Err(Error::Malformed("two representatives in one block".into()));
        }
    }
    let image_of = (0..lattice.size())
        .map(|x| rep[theta.block_of(x)].ok_or(Error::Malformed("block without representative".into())))
        .collect::<Result<Vec<_>>>()?;
    let f = EndoMap::new(image_of);
    if !is_retraction(lattice, &f) {
        return Err(Error::NotARetraction);
    }
    Ok(f)
}

/// Kernels of all retractions, sorted.
pub fn rcon(lattice: &Lattice, limits: &Limits) -> Result<Vec<Partition>> {
    let set: BTreeSet<Partition> = all_retractions(lattice, limits)?.iter().map(EndoMap::kernel).collect();
    Ok(set.into_iter().collect())
}

/// Retraction congruences found through sublattice transversals instead of
/// enumerating retractions; reaches lattices far beyond the retraction cap.
pub fn rcon_by_transversals(lattice: &Lattice, limits: &Limits) -> Result<Vec<Partition>> {
    let mut out = Vec::new();
    for theta in all_congruences(lattice, limits)? {
        if is_retraction_congruence(lattice, &theta)?.is_some() {
            out.push(theta);
        }
    }
    Ok(out)
}

/// `(x1, x2) ↦ (f1(x1), f2(x2))` on `L1 × L2`.
pub fn product_retraction(first: (&Lattice, &EndoMap), second: (&Lattice, &EndoMap)) -> Result<EndoMap> {
    let ((l1, f1), (l2, f2)) = (first, second);
    if !is_retraction(l1, f1) || !is_retraction(l2, f2) {
        return Err(Error::NotARetraction);
    }
    let n2 = l2.size();
    Ok(EndoMap::new((0..l1.size() * n2).map(|i| f1.apply(i / n2) * n2 + f2.apply(i % n2)).collect()))
}

/// The retracts of a lattice together with `∅`, ordered by inclusion.
#[derive(Debug, Clone)]
pub struct RetPoset {
    elements: Vec<SubsetMask>,
    /// `below[i]` = indices of members contained in member `i`.
    below: Vec<FixedBitSet>,
    above: Vec<FixedBitSet>,
    witness: Option<(usize, usize)>,
}

#[derive(Serialize)]
struct RetPosetJson<'a> {
    elements: &'a [SubsetMask],
    covers: Vec<[usize; 2]>,
    is_lattice: bool,
    witness: Option<[&'a SubsetMask; 2]>,
}

impl RetPoset {
    /// Builds the poset from a family of retracts; `∅` is adjoined.
    pub fn from_retracts(universe: usize, retracts: impl IntoIterator<Item = SubsetMask>) -> RetPoset {
        let mut set: BTreeSet<SubsetMask> = retracts.into_iter().collect();
        set.insert(SubsetMask::empty(universe));
        let mut elements: Vec<SubsetMask> = set.into_iter().collect();
        // size first: a linear extension of inclusion
        elements.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let k = elements.len();
        let mut below = vec![FixedBitSet::with_capacity(k); k];
        let mut above = vec![FixedBitSet::with_capacity(k); k];
        for i in 0..k {
            for j in i..k {
                if elements[i].is_subset(&elements[j]) {
                    below[j].insert(i);
                    above[i].insert(j);
                }
            }
        }
        let mut poset = RetPoset { elements, below, above, witness: None };
        poset.witness = poset.first_failing_pair();
        poset
    }

    pub fn elements(&self) -> &[SubsetMask] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, mask: &SubsetMask) -> Option<usize> {
        self.elements.iter().position(|e| e == mask)
    }

    pub fn contains(&self, mask: &SubsetMask) -> bool {
        self.index_of(mask).is_some()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.below[j].contains(i)
    }

    pub fn is_lattice(&self) -> bool {
        self.witness.is_none()
    }

    /// Least pair (in element order) lacking a meet or a join.
    pub fn witness(&self) -> Option<(&SubsetMask, &SubsetMask)> {
        self.witness.map(|(i, j)| (&self.elements[i], &self.elements[j]))
    }

    pub fn lower_bounds(&self, i: usize, j: usize) -> Vec<usize> {
        let mut lb = self.below[i].clone();
        lb.intersect_with(&self.below[j]);
        lb.ones().collect()
    }

    /// Greatest lower bound inside the poset, if any.
    pub fn meet_of(&self, i: usize, j: usize) -> Option<usize> {
        let mut lb = self.below[i].clone();
        lb.intersect_with(&self.below[j]);
        lb.maximum().filter(|&m| self.below[m] == lb)
    }

    pub fn join_of(&self, i: usize, j: usize) -> Option<usize> {
        let mut ub = self.above[i].clone();
        ub.intersect_with(&self.above[j]);
        ub.minimum().filter(|&m| self.above[m] == ub)
    }

    fn first_failing_pair(&self) -> Option<(usize, usize)> {
        let k = self.len();
        (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .find(|&(i, j)| self.meet_of(i, j).is_none() || self.join_of(i, j).is_none())
    }

    /// Whether `chain` (in any order) is a maximal chain: it contains `∅`
    /// and the top, is totally ordered, and no member fits strictly between
    /// two consecutive members.
    pub fn is_maximal_chain(&self, chain: &[SubsetMask]) -> bool {
        let Some(mut idx) = chain.iter().map(|m| self.index_of(m)).collect::<Option<Vec<_>>>() else {
            return false;
        };
        idx.sort_unstable();
        idx.dedup();
        if idx.len() != chain.len() || idx.first() != Some(&0) || idx.last() != Some(&(self.len() - 1)) {
            return false;
        }
        idx.windows(2).all(|w| {
            let (lo, hi) = (w[0], w[1]);
            self.leq(lo, hi)
                && !(0..self.len()).any(|z| z != lo && z != hi && self.leq(lo, z) && self.leq(z, hi))
        })
    }

    /// Inclusion order as a lattice, when it is one.
    pub fn as_lattice(&self) -> Option<Lattice> {
        if !self.is_lattice() {
            return None;
        }
        Lattice::from_order(self.len(), |i, j| self.leq(i, j)).ok()
    }

    pub fn covers(&self) -> Vec<[usize; 2]> {
        let k = self.len();
        let mut covers = Vec::new();
        for j in 0..k {
            for i in self.below[j].ones().filter(|&i| i != j) {
                let between = self.below[j].ones().any(|z| z != i && z != j && self.leq(i, z));
                if !between {
                    covers.push([i, j]);
                }
            }
        }
        covers.sort_unstable();
        covers
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(RetPosetJson {
            elements: &self.elements,
            covers: self.covers(),
            is_lattice: self.is_lattice(),
            witness: self.witness().map(|(a, b)| [a, b]),
        })
        .expect("plain data serializes")
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph ret {\n  rankdir=BT;\n");
        for (i, e) in self.elements.iter().enumerate() {
            out.push_str(&format!("  {i} [label=\"{e:?}\"];\n"));
        }
        for [lo, hi] in self.covers() {
            out.push_str(&format!("  {lo} -> {hi};\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// `Ret L`: all retracts plus `∅` under inclusion, with the lattice verdict.
pub fn ret_poset(lattice: &Lattice, limits: &Limits) -> Result<RetPoset> {
    let found = retracts(lattice, RetractMode::BruteForce, limits)?;
    Ok(RetPoset::from_retracts(lattice.size(), found))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Lattice {
        Lattice::boolean(2).unwrap()
    }

    #[test]
    fn basic_retractions() {
        let l = square();
        assert!(is_retraction(&l, &EndoMap::identity(4)));
        assert!(is_retraction(&l, &EndoMap::constant(4, 0)));
        // boolean(2): bit 0 is the first coordinate, so (x, y) ↦ (x, x)
        // sends 1 -> 3 and 2 -> 0.
        assert!(is_retraction(&l, &EndoMap::new(vec![0, 3, 0, 3])));
        assert!(!is_retraction(&l, &EndoMap::new(vec![0, 2, 1, 3])));
        assert!(!is_retraction(&l, &EndoMap::new(vec![0, 0, 0, 4])));
    }

    #[test]
    fn chain_two_has_three_retractions() {
        let c2 = Lattice::chain(2).unwrap();
        let all = all_retractions(&c2, &Limits::DEFAULT).unwrap();
        assert_eq!(all, vec![EndoMap::new(vec![0, 0]), EndoMap::new(vec![0, 1]), EndoMap::new(vec![1, 1])]);
    }

    #[test]
    fn delta_is_a_retraction_congruence_with_full_witness() {
        let l = square();
        let w = is_retraction_congruence(&l, &Partition::discrete(4)).unwrap();
        assert_eq!(w, Some(SubsetMask::full(4)));
        let not_con = Partition::from_blocks(4, &[vec![0, 3], vec![1], vec![2]]).unwrap();
        assert!(matches!(is_retraction_congruence(&l, &not_con), Err(Error::NotACongruence)));
    }

    #[test]
    fn transversal_builds_the_retraction() {
        let l = square();
        // kernel of (x, y) ↦ (x, x): blocks {0,2}, {1,3}
        let theta = Partition::from_blocks(4, &[vec![0, 2], vec![1, 3]]).unwrap();
        let diag = SubsetMask::from_indices(4, [0, 3]);
        let f = retraction_from_transversal(&l, &theta, &diag).unwrap();
        assert_eq!(f.as_slice(), &[0, 3, 0, 3]);
        assert!(sublattice_transversals(&l, &theta).unwrap().contains(&diag));
    }

    #[test]
    fn product_of_retractions() {
        let c2 = Lattice::chain(2).unwrap();
        let lim = Limits::DEFAULT;
        let sq = c2.product(&c2, &lim).unwrap();
        let id = EndoMap::identity(2);
        let zero = EndoMap::constant(2, 0);
        assert_eq!(product_retraction((&c2, &id), (&c2, &id)).unwrap(), EndoMap::identity(4));
        assert_eq!(product_retraction((&c2, &zero), (&c2, &zero)).unwrap(), EndoMap::constant(4, 0));
        let left = product_retraction((&c2, &zero), (&c2, &id)).unwrap();
        assert!(is_retraction(&sq, &left));
        // image {(0,0), (0,1)}
        assert_eq!(left.image(), SubsetMask::from_indices(4, [0, 1]));
        let bad = EndoMap::new(vec![1, 0]);
        assert!(matches!(product_retraction((&c2, &bad), (&c2, &id)), Err(Error::NotARetraction)));
    }

    #[test]
    fn ret_poset_of_two_chain() {
        let p = ret_poset(&Lattice::chain(2).unwrap(), &Limits::DEFAULT).unwrap();
        assert_eq!(p.len(), 4);
        assert!(p.is_lattice());
        assert!(p.as_lattice().unwrap().structural_flags().is_distributive);
        let json = p.to_json();
        assert_eq!(json["elements"], serde_json::json!([[], [0], [1], [0, 1]]));
        assert!(p.to_dot().contains("0 -> 1;"));
    }

    #[test]
    fn endomap_serializes_as_array() {
        let f = EndoMap::new(vec![0, 3, 0, 3]);
        assert_eq!(serde_json::to_string(&f).unwrap(), "[0,3,0,3]");
        assert_eq!(serde_json::from_str::<EndoMap>("[0,3,0,3]").unwrap(), f);
        assert_eq!(f.kernel(), Partition::from_blocks(4, &[vec![0, 2], vec![1, 3]]).unwrap());
    }
}
