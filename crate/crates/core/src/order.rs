//! Finite lattices: construction from a cover relation, precomputed order
//! and operation tables, structural predicates, products and duals.

use std::cmp::Ordering;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{check_cap, Error, Result};
use crate::limits::Limits;

/// A subset of the elements of a host lattice.
///
/// Masks order by their sorted element lists, so `{0} < {0,1} < {1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SubsetMask(FixedBitSet);

impl SubsetMask {
    pub fn empty(n: usize) -> Self {
        SubsetMask(FixedBitSet::with_capacity(n))
    }

    pub fn full(n: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(n);
        bits.insert_range(..);
        SubsetMask(bits)
    }

    /// Panics if an index is `>= n`.
    pub fn from_indices<I: IntoIterator<Item = usize>>(n: usize, indices: I) -> Self {
        let mut mask = Self::empty(n);
        for i in indices {
            mask.insert(i);
        }
        mask
    }

    pub fn from_bitset(bits: FixedBitSet) -> Self {
        SubsetMask(bits)
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.0
    }

    /// Size of the host lattice.
    pub fn universe(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(i)
    }

    pub fn insert(&mut self, i: usize) {
        self.0.insert(i)
    }

    pub fn remove(&mut self, i: usize) {
        self.0.remove(i)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.0.ones().collect()
    }

    pub fn is_subset(&self, other: &SubsetMask) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn intersection(&self, other: &SubsetMask) -> SubsetMask {
        let mut bits = self.0.clone();
        bits.intersect_with(&other.0);
        SubsetMask(bits)
    }

    pub fn union(&self, other: &SubsetMask) -> SubsetMask {
        let mut bits = self.0.clone();
        bits.union_with(&other.0);
        SubsetMask(bits)
    }
}

impl Ord for SubsetMask {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.ones().cmp(other.0.ones())
    }
}

impl PartialOrd for SubsetMask {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.ones()).finish()
    }
}

impl Serialize for SubsetMask {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.ones())
    }
}

/// Exact answers to the standard structural questions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StructuralFlags {
    pub is_chain: bool,
    pub is_distributive: bool,
    pub is_modular: bool,
}

/// On-disk lattice format: `{"n": 5, "covers": [[0,1], ...], "labels": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeJson {
    pub n: usize,
    pub covers: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

/// A finite lattice on the elements `0..n`.
///
/// The order, the cover relation and both operation tables are computed once
/// at construction; every later query is a table lookup.
#[derive(Clone, PartialEq, Eq)]
pub struct Lattice {
    n: usize,
    covers: Vec<(usize, usize)>,
    /// `down[x]` = elements `<= x`.
    down: Vec<FixedBitSet>,
    /// `up[x]` = elements `>= x`.
    up: Vec<FixedBitSet>,
    meet: Vec<u32>,
    join: Vec<u32>,
    bottom: usize,
    top: usize,
    labels: Option<Vec<String>>,
    coords: Option<Vec<(usize, usize)>>,
    factors: Option<(usize, usize)>,
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Lattice")
            .field("n", &self.n)
            .field("covers", &self.covers)
            .field("labels", &self.labels)
            .finish()
    }
}

impl Lattice {
    /// Builds and validates a lattice from a cover relation.
    ///
    /// Pairs that are not genuine covers (transitive edges) are accepted and
    /// dropped; the stored cover relation is always the transitive reduction.
    pub fn from_covers(n: usize, covers: &[(usize, usize)]) -> Result<Lattice> {
        if n == 0 {
            return Err(Error::Malformed("a lattice needs at least one element".into()));
        }
        for &(lo, hi) in covers {
            for index in [lo, hi] {
                if index >= n {
                    return Err(Error::IndexOutOfRange { index, n });
                }
            }
            if lo == hi {
                return Err(Error::NotAPoset(lo));
            }
        }

        let mut succ = vec![Vec::new(); n];
        let mut indegree = vec![0usize; n];
        for &(lo, hi) in covers {
            succ[lo].push(hi);
            indegree[hi] += 1;
        }
        // Kahn, always taking the least ready index.
        let mut ready: std::collections::BTreeSet<usize> = (0..n).filter(|&x| indegree[x] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(x) = ready.pop_first() {
            order.push(x);
            for &y in &succ[x] {
                indegree[y] -= 1;
                if indegree[y] == 0 {
                    ready.insert(y);
                }
            }
        }
        if order.len() < n {
            let stuck = (0..n).find(|&x| indegree[x] > 0).unwrap_or(0);
            return Err(Error::NotAPoset(stuck));
        }

        let mut pred = vec![Vec::new(); n];
        for &(lo, hi) in covers {
            pred[hi].push(lo);
        }
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for &x in &order {
            let mut set = FixedBitSet::with_capacity(n);
            set.insert(x);
            for &p in &pred[x] {
                set.union_with(&down[p]);
            }
            down[x] = set;
        }
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for (x, set) in down.iter().enumerate() {
            for y in set.ones() {
                up[y].insert(x);
            }
        }

        // Positions in the linear extension: the greatest lower bound of a
        // pair, if it exists, is the lower bound with the highest position.
        let mut pos = vec![0usize; n];
        for (p, &x) in order.iter().enumerate() {
            pos[x] = p;
        }
        let reindex = |set: &FixedBitSet| {
            let mut out = FixedBitSet::with_capacity(n);
            for x in set.ones() {
                out.insert(pos[x]);
            }
            out
        };
        let down_pos: Vec<FixedBitSet> = down.iter().map(reindex).collect();
        let up_pos: Vec<FixedBitSet> = up.iter().map(reindex).collect();

        let mut meet = vec![0u32; n * n];
        let mut join = vec![0u32; n * n];
        for a in 0..n {
            meet[a * n + a] = a as u32;
            join[a * n + a] = a as u32;
            for b in a + 1..n {
                let mut lower = down_pos[a].clone();
                lower.intersect_with(&down_pos[b]);
                let m = lower
                    .maximum()
                    .map(|p| order[p])
                    .filter(|&m| down_pos[m] == lower)
                    .ok_or(Error::NotALattice(a, b, "meet"))?;
                let mut upper = up_pos[a].clone();
                upper.intersect_with(&up_pos[b]);
                let j = upper
                    .minimum()
                    .map(|p| order[p])
                    .filter(|&j| up_pos[j] == upper)
                    .ok_or(Error::NotALattice(a, b, "join"))?;
                meet[a * n + b] = m as u32;
                meet[b * n + a] = m as u32;
                join[a * n + b] = j as u32;
                join[b * n + a] = j as u32;
            }
        }

        let bottom = order[0];
        let top = order[n - 1];
        let mut reduced = Vec::new();
        for (lo, ups) in up.iter().enumerate() {
            for hi in ups.ones() {
                if hi != lo && up[lo].intersection_count(&down[hi]) == 2 {
                    reduced.push((lo, hi));
                }
            }
        }
        reduced.sort_unstable();

        Ok(Lattice {
            n,
            covers: reduced,
            down,
            up,
            meet,
            join,
            bottom,
            top,
            labels: None,
            coords: None,
            factors: None,
        })
    }

    /// Builds the lattice of a partial order given as a predicate `leq(i, j)`.
    ///
    /// The predicate must be reflexive and transitive; antisymmetry is checked.
    pub fn from_order<F: Fn(usize, usize) -> bool>(n: usize, leq: F) -> Result<Lattice> {
        let mut below = vec![FixedBitSet::with_capacity(n); n];
        for i in 0..n {
            for (j, b) in below.iter_mut().enumerate() {
                if i != j && leq(i, j) {
                    if leq(j, i) {
                        return Err(Error::NotAPoset(i));
                    }
                    b.insert(i);
                }
            }
        }
        let mut covers = Vec::new();
        for j in 0..n {
            for i in below[j].ones() {
                // i < j is a cover unless some k strictly between exists.
                let between = below[j].ones().any(|k| k != i && below[k].contains(i));
                if !between {
                    covers.push((i, j));
                }
            }
        }
        Lattice::from_covers(n, &covers)
    }

    pub fn from_json(json: &LatticeJson) -> Result<Lattice> {
        let covers: Vec<(usize, usize)> = json.covers.iter().map(|c| (c[0], c[1])).collect();
        let lattice = Lattice::from_covers(json.n, &covers)?;
        match &json.labels {
            Some(labels) => lattice.with_labels(labels.clone()),
            None => Ok(lattice),
        }
    }

    pub fn from_json_str(text: &str) -> Result<Lattice> {
        Lattice::from_json(&serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> LatticeJson {
        LatticeJson {
            n: self.n,
            covers: self.covers.iter().map(|&(a, b)| [a, b]).collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Lattice> {
        if labels.len() != self.n {
            return Err(Error::Malformed(format!("{} labels for {} elements", labels.len(), self.n)));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// The `k`-element chain `0 < 1 < ... < k-1`.
    pub fn chain(k: usize) -> Result<Lattice> {
        let covers: Vec<_> = (1..k).map(|i| (i - 1, i)).collect();
        Lattice::from_covers(k, &covers)
    }

    /// The boolean lattice of all subsets of a `k`-element set; element `i`
    /// is the subset whose bits are set in `i`.
    pub fn boolean(k: usize) -> Result<Lattice> {
        if k >= usize::BITS as usize - 1 {
            return Err(Error::SizeLimit {
                what: "boolean lattice exponent",
                size: k,
                cap: usize::BITS as usize - 2,
            });
        }
        let n = 1usize << k;
        let covers: Vec<_> = (0..n)
            .flat_map(|s| (0..k).filter(move |b| s & (1 << b) == 0).map(move |b| (s, s | (1 << b))))
            .collect();
        Lattice::from_covers(n, &covers)
    }

    /// Direct product with componentwise order. Element `(a, b)` gets index
    /// `a * |other| + b`, so the product of two linear extensions is again one.
    pub fn product(&self, other: &Lattice, limits: &Limits) -> Result<Lattice> {
        let (n1, n2) = (self.n, other.n);
        check_cap("direct product", n1.saturating_mul(n2), limits.max_elements)?;
        let idx = |a: usize, b: usize| a * n2 + b;
        let mut covers = Vec::new();
        for &(lo, hi) in &self.covers {
            for b in 0..n2 {
                covers.push((idx(lo, b), idx(hi, b)));
            }
        }
        for &(lo, hi) in &other.covers {
            for a in 0..n1 {
                covers.push((idx(a, lo), idx(a, hi)));
            }
        }
        let mut lattice = Lattice::from_covers(n1 * n2, &covers)?;
        lattice.coords = Some((0..n1).flat_map(|a| (0..n2).map(move |b| (a, b))).collect());
        lattice.factors = Some((n1, n2));
        if self.labels.is_some() || other.labels.is_some() {
            lattice.labels = Some(
                (0..n1)
                    .flat_map(|a| (0..n2).map(move |b| (a, b)))
                    .map(|(a, b)| format!("({},{})", self.label(a), other.label(b)))
                    .collect(),
            );
        }
        Ok(lattice)
    }

    /// The order dual: same elements, reversed order.
    pub fn dual(&self) -> Lattice {
        let covers: Vec<_> = self.covers.iter().map(|&(a, b)| (b, a)).collect();
        let mut dual = Lattice::from_covers(self.n, &covers).expect("dual of a lattice is a lattice");
        dual.labels = self.labels.clone();
        dual
    }

    /// Renames element `x` to `perm[x]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Lattice> {
        if perm.len() != self.n {
            return Err(Error::Malformed("permutation length mismatch".into()));
        }
        let covers: Vec<_> = self.covers.iter().map(|&(a, b)| (perm[a], perm[b])).collect();
        let mut lattice = Lattice::from_covers(self.n, &covers)?;
        if let Some(labels) = &self.labels {
            let mut renamed = vec![String::new(); self.n];
            for (x, label) in labels.iter().enumerate() {
                renamed[perm[x]] = label.clone();
            }
            lattice.labels = Some(renamed);
        }
        Ok(lattice)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.down[b].contains(a)
    }

    #[inline]
    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    #[inline]
    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.n + b] as usize
    }

    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.n + b] as usize
    }

    /// Checked `(a ∧ b, a ∨ b)`.
    pub fn meet_join(&self, a: usize, b: usize) -> Result<(usize, usize)> {
        for index in [a, b] {
            if index >= self.n {
                return Err(Error::IndexOutOfRange { index, n: self.n });
            }
        }
        Ok((self.meet(a, b), self.join(a, b)))
    }

    pub fn down_set(&self, x: usize) -> &FixedBitSet {
        &self.down[x]
    }

    pub fn up_set(&self, x: usize) -> &FixedBitSet {
        &self.up[x]
    }

    pub fn lower_covers(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.covers.iter().filter(move |c| c.1 == x).map(|c| c.0)
    }

    pub fn upper_covers(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.covers.iter().filter(move |c| c.0 == x).map(|c| c.1)
    }

    /// The interval `[a, b]`; empty unless `a <= b`.
    pub fn interval(&self, a: usize, b: usize) -> SubsetMask {
        let mut bits = self.up[a].clone();
        bits.intersect_with(&self.down[b]);
        SubsetMask(bits)
    }

    /// Indices sorted so that smaller elements come first.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&x| (self.down[x].count_ones(..), x));
        order
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, x: usize) -> String {
        match &self.labels {
            Some(labels) => labels[x].clone(),
            None => x.to_string(),
        }
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.as_ref()?.iter().position(|l| l == label)
    }

    /// `(i, j)` coordinates when built as a direct product.
    pub fn coords(&self) -> Option<&[(usize, usize)]> {
        self.coords.as_deref()
    }

    /// Factor sizes when built as a direct product.
    pub fn factor_sizes(&self) -> Option<(usize, usize)> {
        self.factors
    }

    pub fn is_chain(&self) -> bool {
        (0..self.n).all(|a| (a + 1..self.n).all(|b| self.comparable(a, b)))
    }

    pub fn is_distributive(&self) -> bool {
        let n = self.n;
        (0..n).all(|x| {
            (0..n).all(|y| {
                (0..n).all(|z| self.meet(x, self.join(y, z)) == self.join(self.meet(x, y), self.meet(x, z)))
            })
        })
    }

    pub fn is_modular(&self) -> bool {
        let n = self.n;
        (0..n).all(|x| {
            self.up[x]
                .ones()
                .all(|z| (0..n).all(|y| self.join(x, self.meet(y, z)) == self.meet(self.join(x, y), z)))
        })
    }

    pub fn structural_flags(&self) -> StructuralFlags {
        StructuralFlags {
            is_chain: self.is_chain(),
            is_distributive: self.is_distributive(),
            is_modular: self.is_modular(),
        }
    }

    /// Whether `s` is nonempty and closed under both operations.
    pub fn is_sublattice(&self, s: &SubsetMask) -> bool {
        if s.is_empty() {
            return false;
        }
        let members = s.to_vec();
        members.iter().enumerate().all(|(i, &a)| {
            members[i + 1..].iter().all(|&b| s.contains(self.meet(a, b)) && s.contains(self.join(a, b)))
        })
    }

    /// A narrows is a non-extreme element comparable with every element.
    pub fn is_narrows(&self, x: usize) -> bool {
        x != self.bottom && x != self.top && (0..self.n).all(|y| self.comparable(x, y))
    }

    /// `(x ∨ y) ∧ (x ∨ z) ∧ (y ∨ z)`.
    pub fn majority(&self, x: usize, y: usize, z: usize) -> usize {
        self.meet(self.meet(self.join(x, y), self.join(x, z)), self.join(y, z))
    }

    /// Exhaustive check of the lattice identities on the stored tables.
    pub fn satisfies_lattice_axioms(&self) -> bool {
        let n = self.n;
        for x in 0..n {
            if self.meet(x, x) != x || self.join(x, x) != x {
                return false;
            }
            for y in 0..n {
                let (m, j) = (self.meet(x, y), self.join(x, y));
                if m != self.meet(y, x) || j != self.join(y, x) {
                    return false;
                }
                if self.join(x, m) != x || self.meet(x, j) != x {
                    return false;
                }
                if !(self.leq(m, x) && self.leq(x, j)) {
                    return false;
                }
                for z in 0..n {
                    if self.meet(m, z) != self.meet(x, self.meet(y, z))
                        || self.join(j, z) != self.join(x, self.join(y, z))
                    {
                        return false;
                    }
                }
            }
        }
        self.down[self.top].is_full() && self.up[self.bottom].is_full()
    }

    /// Hasse diagram in Graphviz DOT: one node per element, one edge per
    /// cover with the lower element at the tail.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph lattice {\n  rankdir=BT;\n");
        for x in 0..self.n {
            out.push_str(&format!("  {x} [label=\"{}\"];\n", self.label(x).replace('"', "\\\"")));
        }
        for &(lo, hi) in &self.covers {
            out.push_str(&format!("  {lo} -> {hi};\n"));
        }
        out.push_str("}\n");
        out
    }
}
