//! Slow, obviously-correct reference implementations shared by the
//! integration tests. Nothing here reuses the library's search code.
#![allow(dead_code)]

use std::collections::BTreeSet;

use itertools::Itertools;
use retractlab::{Lattice, SubsetMask};

pub fn is_hom(l: &Lattice, f: &[usize]) -> bool {
    let n = l.size();
    (0..n).all(|x| {
        (0..n).all(|y| f[l.meet(x, y)] == l.meet(f[x], f[y]) && f[l.join(x, y)] == l.join(f[x], f[y]))
    })
}

/// Every idempotent endomorphism, by running through all `n^n` self-maps.
pub fn naive_retractions(l: &Lattice) -> Vec<Vec<usize>> {
    let n = l.size();
    (0..n)
        .map(|_| 0..n)
        .multi_cartesian_product()
        .filter(|f| (0..n).all(|x| f[f[x]] == f[x]) && is_hom(l, f))
        .collect()
}

pub fn image(n: usize, f: &[usize]) -> SubsetMask {
    SubsetMask::from_indices(n, f.iter().copied())
}

/// All set partitions of `0..n` as block-label vectors (restricted growth
/// strings).
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max.min(cur.len()) {
            cur.push(b);
            go(n, cur, if b == max { max + 1 } else { max }, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
    } else {
        go(n, &mut Vec::new(), 0, &mut out);
    }
    out
}

/// Congruences as block-label vectors, by testing every partition.
pub fn naive_congruences(l: &Lattice) -> Vec<Vec<usize>> {
    let n = l.size();
    set_partitions(n)
        .into_iter()
        .filter(|p| {
            (0..n).all(|x| {
                (0..n).all(|y| {
                    p[x] != p[y]
                        || (0..n)
                            .all(|z| p[l.meet(x, z)] == p[l.meet(y, z)] && p[l.join(x, z)] == p[l.join(y, z)])
                })
            })
        })
        .collect()
}

/// Retracts (without ∅) as images of maps sending each block of a
/// congruence to the unique chosen element inside it; each candidate map is
/// checked directly for being an idempotent homomorphism.
pub fn retracts_by_kernels(l: &Lattice) -> BTreeSet<SubsetMask> {
    let n = l.size();
    let mut out = BTreeSet::new();
    for p in naive_congruences(l) {
        let blocks = p.iter().max().map_or(0, |m| m + 1);
        let members: Vec<Vec<usize>> = (0..blocks).map(|b| (0..n).filter(|&x| p[x] == b).collect()).collect();
        for reps in members.iter().map(|m| m.iter().copied()).multi_cartesian_product() {
            let f: Vec<usize> = (0..n).map(|x| reps[p[x]]).collect();
            if is_hom(l, &f) {
                out.insert(image(n, &f));
            }
        }
    }
    out
}

/// Number of isomorphism classes of `n`-element lattices, from labelled
/// strict orders on the `n - 2` inner elements.
pub fn labelled_lattice_classes(n: usize) -> usize {
    if n <= 2 {
        return usize::from(n > 0);
    }
    let k = n - 2;
    let pairs: Vec<(usize, usize)> =
        (0..k).flat_map(|a| (0..k).map(move |b| (a, b))).filter(|(a, b)| a != b).collect();
    let mut classes: BTreeSet<Vec<bool>> = BTreeSet::new();
    for bits in 0u64..1 << pairs.len() {
        let mut lt = vec![vec![false; k]; k];
        for (i, &(a, b)) in pairs.iter().enumerate() {
            lt[a][b] = bits >> i & 1 == 1;
        }
        let strict_order = (0..k).all(|a| {
            (0..k).all(|b| !(lt[a][b] && lt[b][a]) && (0..k).all(|c| !(lt[a][b] && lt[b][c]) || lt[a][c]))
        });
        if !strict_order {
            continue;
        }
        // 0 is the bottom, k + 1 the top
        let leq = |x: usize, y: usize| {
            x == y || x == 0 || y == k + 1 || (x <= k && y <= k && y > 0 && x > 0 && lt[x - 1][y - 1])
        };
        let has_joins = (0..n).all(|x| {
            (0..n).all(|y| {
                let ub: Vec<usize> = (0..n).filter(|&z| leq(x, z) && leq(y, z)).collect();
                ub.iter().filter(|&&z| ub.iter().all(|&w| leq(z, w))).count() == 1
            })
        });
        if !has_joins {
            continue;
        }
        let code = (0..k)
            .permutations(k)
            .map(|p| {
                (0..k)
                    .flat_map(|a| (0..k).map(move |b| (a, b)))
                    .map(|(a, b)| lt[p[a]][p[b]])
                    .collect::<Vec<_>>()
            })
            .min()
            .expect("at least one permutation");
        classes.insert(code);
    }
    classes.len()
}

/// Catalog fixtures small enough for brute force.
pub fn small_fixtures() -> Vec<(String, Lattice)> {
    let names = [
        "chain(1)",
        "chain(2)",
        "chain(3)",
        "chain(4)",
        "chain(5)",
        "chain(6)",
        "boolean(2)",
        "boolean(3)",
        "m3",
        "n5",
        "glued_squares_k7",
        "grid(2,2)",
        "grid(2,3)",
        "grid(3,3)",
        "grid(2,4)",
        "grid(3,4)",
        "l12",
    ];
    names.iter().map(|&s| (s.to_string(), retractlab::catalog(s).expect("fixture").lattice)).collect()
}
