//! Congruences and compatible quasiorders of a finite lattice, and their
//! factorization over direct products.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{check_cap, Error, Result};
use crate::limits::Limits;
use crate::order::Lattice;

/// An equivalence relation stored as a block id per element.
///
/// Block ids are numbered in order of their least element, so equal
/// partitions have equal encodings and plain `==` is set equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    block_of: Vec<usize>,
}

impl Partition {
    /// Canonicalizes an arbitrary block labelling.
    pub fn from_labels<T: Eq + std::hash::Hash + Copy>(labels: &[T]) -> Partition {
        let mut ids = std::collections::HashMap::new();
        let block_of = labels
            .iter()
            .map(|l| {
                let next = ids.len();
                *ids.entry(*l).or_insert(next)
            })
            .collect();
        Partition { block_of }
    }

    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Partition> {
        let mut labels = vec![usize::MAX; n];
        for (id, block) in blocks.iter().enumerate() {
            for &x in block {
                if x >= n {
                    return Err(Error::IndexOutOfRange { index: x, n });
                }
                if labels[x] != usize::MAX {
                    return Err(Error::Malformed(format!("element {x} lies in two blocks")));
                }
                labels[x] = id;
            }
        }
        if let Some(x) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::Malformed(format!("element {x} lies in no block")));
        }
        Ok(Partition::from_labels(&labels))
    }

    /// Δ: all blocks singletons.
    pub fn discrete(n: usize) -> Partition {
        Partition { block_of: (0..n).collect() }
    }

    /// ∇: a single block.
    pub fn indiscrete(n: usize) -> Partition {
        Partition { block_of: vec![0; n] }
    }

    pub fn universe(&self) -> usize {
        self.block_of.len()
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block_of[x]
    }

    pub fn block_ids(&self) -> &[usize] {
        &self.block_of
    }

    pub fn num_blocks(&self) -> usize {
        self.block_of.iter().max().map_or(0, |m| m + 1)
    }

    pub fn same_block(&self, x: usize, y: usize) -> bool {
        self.block_of[x] == self.block_of[y]
    }

    /// Blocks sorted by least element, members ascending.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.num_blocks()];
        for (x, &b) in self.block_of.iter().enumerate() {
            blocks[b].push(x);
        }
        blocks
    }

    pub fn non_singleton_blocks(&self) -> Vec<Vec<usize>> {
        self.blocks().into_iter().filter(|b| b.len() > 1).collect()
    }

    pub fn is_discrete(&self) -> bool {
        self.num_blocks() == self.universe()
    }

    /// Whether every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        let mut image = vec![usize::MAX; self.num_blocks()];
        self.block_of.iter().zip(&other.block_of).all(|(&mine, &theirs)| {
            if image[mine] == usize::MAX {
                image[mine] = theirs;
            }
            image[mine] == theirs
        })
    }

    /// Finest partition refined by both.
    pub fn join(&self, other: &Partition) -> Partition {
        let mut uf = UnionFind::new(self.universe());
        for part in [self, other] {
            let mut first = vec![usize::MAX; part.num_blocks()];
            for (x, &b) in part.block_of.iter().enumerate() {
                if first[b] == usize::MAX {
                    first[b] = x;
                } else {
                    uf.union(first[b], x);
                }
            }
        }
        uf.into_partition()
    }

    /// Common refinement.
    pub fn meet(&self, other: &Partition) -> Partition {
        let pairs: Vec<(usize, usize)> =
            self.block_of.iter().copied().zip(other.block_of.iter().copied()).collect();
        Partition::from_labels(&pairs)
    }

    /// `Θ1 × Θ2` on the product indexed `a * n2 + b`.
    pub fn product(first: &Partition, second: &Partition) -> Partition {
        let n2 = second.universe();
        let labels: Vec<(usize, usize)> =
            (0..first.universe() * n2).map(|i| (first.block_of[i / n2], second.block_of[i % n2])).collect();
        Partition::from_labels(&labels)
    }

    pub fn to_relation(&self) -> Relation {
        let n = self.universe();
        let mut rel = Relation::empty(n);
        for x in 0..n {
            for y in 0..n {
                if self.same_block(x, y) {
                    rel.insert(x, y);
                }
            }
        }
        rel
    }

    /// The relation must be an equivalence.
    pub fn from_relation(rel: &Relation) -> Result<Partition> {
        if !(rel.is_reflexive() && rel.is_symmetric() && rel.is_transitive()) {
            return Err(Error::Malformed("relation is not an equivalence".into()));
        }
        let labels: Vec<usize> = (0..rel.universe()).map(|x| rel.row(x).minimum().unwrap_or(x)).collect();
        Ok(Partition::from_labels(&labels))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.blocks())
    }
}

impl Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.blocks().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let blocks = Vec::<Vec<usize>>::deserialize(d)?;
        let n = blocks.iter().map(Vec::len).sum();
        Partition::from_blocks(n, &blocks).map_err(serde::de::Error::custom)
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when already merged.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        // keep the smaller root so labels stay stable
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    fn into_partition(mut self) -> Partition {
        let labels: Vec<usize> = (0..self.parent.len()).map(|x| self.find(x)).collect();
        Partition::from_labels(&labels)
    }
}

/// A binary relation on `0..n` as a row-major `n × n` bit matrix.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    n: usize,
    bits: FixedBitSet,
}

impl Relation {
    pub fn empty(n: usize) -> Relation {
        Relation { n, bits: FixedBitSet::with_capacity(n * n) }
    }

    pub fn identity(n: usize) -> Relation {
        let mut rel = Relation::empty(n);
        for x in 0..n {
            rel.insert(x, x);
        }
        rel
    }

    pub fn full(n: usize) -> Relation {
        let mut rel = Relation::empty(n);
        rel.bits.insert_range(..);
        rel
    }

    /// The order relation `≤` of a lattice.
    pub fn order_of(lattice: &Lattice) -> Relation {
        let n = lattice.size();
        let mut rel = Relation::empty(n);
        for x in 0..n {
            for y in lattice.up_set(x).ones() {
                rel.insert(x, y);
            }
        }
        rel
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.bits.contains(x * self.n + y)
    }

    #[inline]
    pub fn insert(&mut self, x: usize, y: usize) {
        self.bits.insert(x * self.n + y)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    /// Row `x` as a set of `y` with `(x, y)` in the relation.
    pub fn row(&self, x: usize) -> FixedBitSet {
        let mut row = FixedBitSet::with_capacity(self.n);
        for y in 0..self.n {
            if self.contains(x, y) {
                row.insert(y);
            }
        }
        row
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.bits.ones().map(move |i| (i / self.n, i % self.n))
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n).all(|x| self.contains(x, x))
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs().all(|(x, y)| self.contains(y, x))
    }

    pub fn is_transitive(&self) -> bool {
        self.pairs().all(|(x, y)| (0..self.n).all(|z| !self.contains(y, z) || self.contains(x, z)))
    }

    /// Closed under the lattice operations componentwise.
    pub fn is_compatible(&self, lattice: &Lattice) -> bool {
        let pairs: Vec<_> = self.pairs().collect();
        pairs.iter().all(|&(x, y)| {
            pairs.iter().all(|&(u, v)| {
                self.contains(lattice.meet(x, u), lattice.meet(y, v))
                    && self.contains(lattice.join(x, u), lattice.join(y, v))
            })
        })
    }

    pub fn is_compatible_quasiorder(&self, lattice: &Lattice) -> bool {
        self.n == lattice.size() && self.is_reflexive() && self.is_transitive() && self.is_compatible(lattice)
    }

    /// Reflexive-transitive closure of the union.
    pub fn join(&self, other: &Relation) -> Relation {
        let mut out = self.clone();
        out.bits.union_with(&other.bits);
        out.close_transitively();
        out
    }

    fn close_transitively(&mut self) {
        let n = self.n;
        for k in 0..n {
            for i in 0..n {
                if self.contains(i, k) {
                    for j in 0..n {
                        if self.contains(k, j) {
                            self.insert(i, j);
                        }
                    }
                }
            }
        }
    }

    /// `ρ1 × ρ2` on the product indexed `a * n2 + b`.
    pub fn product(first: &Relation, second: &Relation) -> Relation {
        let (n1, n2) = (first.n, second.n);
        let mut rel = Relation::empty(n1 * n2);
        for (x1, y1) in first.pairs() {
            for (x2, y2) in second.pairs() {
                rel.insert(x1 * n2 + x2, y1 * n2 + y2);
            }
        }
        rel
    }

    /// One `0`/`1` string per row.
    pub fn to_bitstrings(&self) -> Vec<String> {
        (0..self.n)
            .map(|x| (0..self.n).map(|y| if self.contains(x, y) { '1' } else { '0' }).collect())
            .collect()
    }

    pub fn from_bitstrings<S: AsRef<str>>(rows: &[S]) -> Result<Relation> {
        let n = rows.len();
        let mut rel = Relation::empty(n);
        for (x, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::Malformed(format!("row {x} has length {} not {n}", row.len())));
            }
            for (y, c) in row.chars().enumerate() {
                match c {
                    '1' => rel.insert(x, y),
                    '0' => {}
                    _ => return Err(Error::Malformed(format!("bad character {c:?} in row {x}"))),
                }
            }
        }
        Ok(rel)
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_bitstrings())
    }
}

impl Serialize for Relation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_bitstrings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Relation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<String>::deserialize(d)?;
        Relation::from_bitstrings(&rows).map_err(serde::de::Error::custom)
    }
}

pub fn is_congruence(lattice: &Lattice, partition: &Partition) -> bool {
    let n = lattice.size();
    if partition.universe() != n {
        return false;
    }
    for x in 0..n {
        for y in x + 1..n {
            if !partition.same_block(x, y) {
                continue;
            }
            for z in 0..n {
                if !partition.same_block(lattice.meet(x, z), lattice.meet(y, z))
                    || !partition.same_block(lattice.join(x, z), lattice.join(y, z))
                {
                    return false;
                }
            }
        }
    }
    true
}

/// Smallest congruence collapsing every given pair.
///
/// Translations of the generating pairs are pushed as they are merged; the
/// equivalence closure of a translation-closed set is a congruence.
pub fn congruence_generated_by(lattice: &Lattice, pairs: &[(usize, usize)]) -> Partition {
    let n = lattice.size();
    let mut uf = UnionFind::new(n);
    let mut work: Vec<(usize, usize)> = pairs.to_vec();
    while let Some((x, y)) = work.pop() {
        if !uf.union(x, y) {
            continue;
        }
        for z in 0..n {
            work.push((lattice.meet(x, z), lattice.meet(y, z)));
            work.push((lattice.join(x, z), lattice.join(y, z)));
        }
    }
    uf.into_partition()
}

/// `con(a, b)`.
pub fn principal_congruence(lattice: &Lattice, a: usize, b: usize) -> Partition {
    congruence_generated_by(lattice, &[(a, b)])
}

/// Every congruence is the join of the principal congruences of the covering
/// pairs it collapses, so closing `{Δ}` under joins with those generators
/// reaches all of `Con L`.
pub fn all_congruences(lattice: &Lattice, limits: &Limits) -> Result<Vec<Partition>> {
    let n = lattice.size();
    check_cap("congruence enumeration", n, limits.congruences)?;
    let generators: BTreeSet<Partition> =
        lattice.covers().iter().map(|&(a, b)| principal_congruence(lattice, a, b)).collect();
    let generators: Vec<Partition> = generators.into_iter().collect();
    let bottom = Partition::discrete(n);
    let mut seen: HashSet<Partition> = HashSet::from([bottom.clone()]);
    let mut queue = vec![bottom];
    while let Some(theta) = queue.pop() {
        for g in &generators {
            if g.refines(&theta) {
                continue;
            }
            let next = theta.join(g);
            if seen.insert(next.clone()) {
                queue.push(next);
            }
        }
    }
    let mut all: Vec<Partition> = seen.into_iter().collect();
    all.sort();
    Ok(all)
}

/// Builds the lattice of a family of sets-like values under a given order.
/// Element `i` of the result is `items[i]`.
pub(crate) fn order_lattice<T, F>(items: &[T], leq: F) -> Result<Lattice>
where
    F: Fn(&T, &T) -> bool,
{
    Lattice::from_order(items.len(), |i, j| leq(&items[i], &items[j]))
}

/// `Con L` ordered by refinement; element `i` is `all_congruences(L)[i]` and
/// carries the block notation as its label.
pub fn congruence_lattice(lattice: &Lattice, limits: &Limits) -> Result<Lattice> {
    let cons = all_congruences(lattice, limits)?;
    let labels = cons.iter().map(|c| format!("{c:?}")).collect();
    order_lattice(&cons, Partition::refines)?.with_labels(labels)
}

/// Smallest compatible quasiorder containing every given pair.
pub fn quasiorder_generated_by(lattice: &Lattice, pairs: &[(usize, usize)]) -> Relation {
    let n = lattice.size();
    let mut rel = Relation::identity(n);
    let mut work: Vec<(usize, usize)> = pairs.to_vec();
    while let Some((x, y)) = work.pop() {
        if rel.contains(x, y) {
            continue;
        }
        rel.insert(x, y);
        for z in 0..n {
            work.push((lattice.meet(x, z), lattice.meet(y, z)));
            work.push((lattice.join(x, z), lattice.join(y, z)));
            if rel.contains(z, x) {
                work.push((z, y));
            }
            if rel.contains(y, z) {
                work.push((x, z));
            }
        }
    }
    rel
}

pub fn principal_quasiorder(lattice: &Lattice, a: usize, b: usize) -> Relation {
    quasiorder_generated_by(lattice, &[(a, b)])
}

/// All compatible quasiorders, sorted.
///
/// Every member is the join of the principal quasiorders of its pairs; the
/// join of compatible quasiorders is the transitive closure of their union.
pub fn all_compatible_quasiorders(lattice: &Lattice, limits: &Limits) -> Result<Vec<Relation>> {
    let n = lattice.size();
    check_cap("quasiorder enumeration", n, limits.quasiorders)?;
    let mut generators = BTreeSet::new();
    for a in 0..n {
        for b in 0..n {
            if a != b {
                generators.insert(principal_quasiorder(lattice, a, b));
            }
        }
    }
    let generators: Vec<Relation> = generators.into_iter().collect();
    let bottom = Relation::identity(n);
    let mut seen: HashSet<Relation> = HashSet::from([bottom.clone()]);
    let mut queue = vec![bottom];
    while let Some(rho) = queue.pop() {
        for g in &generators {
            if g.is_subset(&rho) {
                continue;
            }
            let next = rho.join(g);
            if seen.insert(next.clone()) {
                queue.push(next);
            }
        }
    }
    let mut all: Vec<Relation> = seen.into_iter().collect();
    all.sort();
    Ok(all)
}

/// Splits a compatible quasiorder of `L1 × L2` into `(ρ1, ρ2)` with
/// `ρ = ρ1 × ρ2`.
///
/// `ρ1` collects the pairs `(x, y)` for which some `z` gives
/// `((x, z), (y, z)) ∈ ρ`, and symmetrically for `ρ2`. The product is then
/// recomputed and compared, so a non-compatible input is reported rather
/// than silently mis-split.
pub fn factorize_product_relation(product: &Lattice, rel: &Relation) -> Result<(Relation, Relation)> {
    let (n1, n2) = product
        .factor_sizes()
        .ok_or_else(|| Error::Malformed("lattice was not built as a direct product".into()))?;
    if rel.universe() != n1 * n2 {
        return Err(Error::Malformed("relation size does not match the lattice".into()));
    }
    let idx = |a: usize, b: usize| a * n2 + b;
    let mut first = Relation::empty(n1);
    for x in 0..n1 {
        for y in 0..n1 {
            if (0..n2).any(|z| rel.contains(idx(x, z), idx(y, z))) {
                first.insert(x, y);
            }
        }
    }
    let mut second = Relation::empty(n2);
    for x in 0..n2 {
        for y in 0..n2 {
            if (0..n1).any(|z| rel.contains(idx(z, x), idx(z, y))) {
                second.insert(x, y);
            }
        }
    }
    if Relation::product(&first, &second) != *rel {
        return Err(Error::NotFactorizable);
    }
    Ok((first, second))
}

/// [`factorize_product_relation`] for congruences.
pub fn factorize_product_partition(
    product: &Lattice,
    partition: &Partition,
) -> Result<(Partition, Partition)> {
    let (first, second) = factorize_product_relation(product, &partition.to_relation())?;
    Ok((Partition::from_relation(&first)?, Partition::from_relation(&second)?))
}
