//! Isomorph-free generation of small lattices.
//!
//! A lattice with `n ≥ 2` elements is its bounds plus an arbitrary poset on
//! the remaining `n - 2` elements, and isomorphism classes correspond. Posets
//! are grown one maximal element at a time; after each step only one
//! canonical representative per class is kept.

use std::collections::BTreeSet;

use itertools::Itertools;

use crate::error::{check_cap, Error, Result};
use crate::limits::Limits;
use crate::order::Lattice;

/// Largest order handled by the `u128` canonical code.
pub const MAX_CANONICAL: usize = 11;

/// A finite poset as strict down-sets: `below[x]` has bit `y` set iff `y < x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Poset {
    below: Vec<u32>,
}

impl Poset {
    fn size(&self) -> usize {
        self.below.len()
    }

    fn lt(&self, x: usize, y: usize) -> bool {
        self.below[y] >> x & 1 == 1
    }

    fn above(&self, x: usize) -> u32 {
        (0..self.size()).filter(|&y| self.lt(x, y)).fold(0, |acc, y| acc | 1 << y)
    }

    fn permuted(&self, order: &[usize]) -> Poset {
        // order[new] = old
        let mut inv = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            inv[old] = new;
        }
        let below =
            order.iter().map(|&old| bits(self.below[old]).fold(0u32, |acc, y| acc | 1 << inv[y])).collect();
        Poset { below }
    }

    fn code(&self) -> u128 {
        let n = self.size();
        let mut code = 0u128;
        for x in 0..n {
            for y in 0..n {
                code = code << 1 | u128::from(self.lt(x, y));
            }
        }
        code
    }

    /// Down-closed subsets, each usable as the strict down-set of a new
    /// maximal element.
    fn ideals(&self) -> Vec<u32> {
        let n = self.size();
        (0..1u32 << n).filter(|&s| bits(s).all(|x| self.below[x] & !s == 0)).collect()
    }

    fn with_top_over(&self, ideal: u32) -> Poset {
        let mut below = self.below.clone();
        below.push(ideal);
        Poset { below }
    }
}

fn bits(mut s: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if s == 0 {
            None
        } else {
            let x = s.trailing_zeros() as usize;
            s &= s - 1;
            Some(x)
        }
    })
}

/// Iterated colour refinement by the colours of strict down- and up-sets.
fn refined_cells(p: &Poset) -> Vec<Vec<usize>> {
    let n = p.size();
    let ups: Vec<u32> = (0..n).map(|x| p.above(x)).collect();
    let mut colour: Vec<usize> = vec![0; n];
    let mut classes = 1;
    loop {
        let sig: Vec<(usize, Vec<usize>, Vec<usize>)> = (0..n)
            .map(|x| {
                let mut d: Vec<usize> = bits(p.below[x]).map(|y| colour[y]).collect();
                let mut u: Vec<usize> = bits(ups[x]).map(|y| colour[y]).collect();
                d.sort_unstable();
                u.sort_unstable();
                (colour[x], d, u)
            })
            .collect();
        let distinct: Vec<_> = sig.iter().collect::<BTreeSet<_>>().into_iter().collect();
        colour = sig.iter().map(|s| distinct.binary_search(&s).expect("present")).collect();
        if distinct.len() == classes {
            break;
        }
        classes = distinct.len();
    }
    let mut cells = vec![Vec::new(); classes];
    for x in 0..n {
        cells[colour[x]].push(x);
    }
    cells
}

/// Canonical relabelling: the least adjacency code over all orderings that
/// respect the refined colour classes.
fn canonical(p: &Poset) -> Poset {
    let cells = refined_cells(p);
    let mut best: Option<(u128, Poset)> = None;
    let per_cell = cells.iter().map(|c| c.iter().copied().permutations(c.len()).collect::<Vec<_>>());
    for choice in per_cell.multi_cartesian_product() {
        let order: Vec<usize> = choice.concat();
        let q = p.permuted(&order);
        let code = q.code();
        if best.as_ref().is_none_or(|(b, _)| code < *b) {
            best = Some((code, q));
        }
    }
    match best {
        Some((_, q)) => q,
        // no cells at all: the empty poset
        None => p.clone(),
    }
}

/// One representative of every unlabeled poset on `k` elements.
fn posets(k: usize) -> Vec<Poset> {
    let mut layer = vec![Poset { below: Vec::new() }];
    for _ in 0..k {
        let next: BTreeSet<Poset> = layer
            .iter()
            .flat_map(|p| p.ideals().into_iter().map(move |i| canonical(&p.with_top_over(i))))
            .collect();
        layer = next.into_iter().collect();
    }
    layer
}

fn poset_of(lattice: &Lattice) -> Poset {
    let n = lattice.size();
    let below = (0..n)
        .map(|x| lattice.down_set(x).ones().filter(|&y| y != x).fold(0u32, |a, y| a | 1 << y))
        .collect();
    Poset { below }
}

/// Isomorphism-invariant code; equal codes (with equal sizes) mean
/// isomorphic lattices.
pub fn canonical_code(lattice: &Lattice) -> Result<u128> {
    check_cap("canonical form", lattice.size(), MAX_CANONICAL)?;
    Ok(canonical(&poset_of(lattice)).code())
}

pub fn is_isomorphic(a: &Lattice, b: &Lattice) -> Result<bool> {
    Ok(a.size() == b.size() && canonical_code(a)? == canonical_code(b)?)
}

/// Bounds around `inner`, with indices renumbered along a linear extension.
fn bounded(inner: &Poset) -> Result<Lattice> {
    let k = inner.size();
    let n = k + 2;
    let leq = |x: usize, y: usize| -> bool {
        x == y || x == 0 || y == n - 1 || (x > 0 && y > 0 && x < n - 1 && y < n - 1 && inner.lt(x - 1, y - 1))
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| (0..n).filter(|&y| leq(y, x)).count());
    Lattice::from_order(n, |i, j| leq(order[i], order[j]))
}

/// One lattice per isomorphism class of size `n`, in canonical order.
pub fn enumerate_lattices(n: usize, limits: &Limits) -> Result<Vec<Lattice>> {
    check_cap("lattice enumeration", n, limits.enumeration)?;
    check_cap("lattice enumeration", n, MAX_CANONICAL)?;
    match n {
        0 => Ok(Vec::new()),
        1 => Ok(vec![Lattice::chain(1)?]),
        _ => {
            let mut out = Vec::new();
            for inner in posets(n - 2) {
                match bounded(&inner) {
                    Ok(l) => out.push(l),
                    Err(Error::NotALattice(..)) => {}
                    Err(e) => return Err(e),
                }
            }
            Ok(out)
        }
    }
}

/// Number of unlabeled posets on `k` elements (diagnostic).
pub fn count_posets(k: usize, limits: &Limits) -> Result<usize> {
    check_cap("poset enumeration", k + 2, limits.enumeration)?;
    Ok(posets(k).len())
}
