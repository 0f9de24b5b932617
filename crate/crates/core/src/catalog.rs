//! Named fixture lattices.

use serde::Serialize;

use crate::absorption::glued_squares;
use crate::error::{Error, Result};
use crate::grid::{make_grid, GridShape};
use crate::limits::Limits;
use crate::order::{Lattice, SubsetMask};

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub lattice: Lattice,
    pub notes: &'static str,
}

pub const FIXTURE_NAMES: [&str; 7] =
    ["chain(k)", "boolean(k)", "m3", "n5", "glued_squares_k7", "grid(m,n)", "l12"];

fn labelled(n: usize, covers: &[(usize, usize)], labels: &[&str]) -> Lattice {
    Lattice::from_covers(n, covers)
        .and_then(|l| l.with_labels(labels.iter().map(|s| s.to_string()).collect()))
        .expect("fixture is a lattice")
}

pub fn m3() -> Lattice {
    labelled(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)], &["0", "a", "b", "c", "1"])
}

pub fn n5() -> Lattice {
    labelled(5, &[(0, 1), (0, 2), (1, 3), (3, 4), (2, 4)], &["0", "a", "b", "c", "1"])
}

/// Twelve-element modular lattice whose retracts do not form a lattice.
///
/// `[b,p]` and `[q,1]` are diamonds; `[0,p]` and `[0,a] ∪ [q,1]` are
/// retracts with the same kernel but have no greatest common lower bound
/// in the retract poset.
pub fn l12() -> Lattice {
    let labels = ["0", "a", "b", "c1", "c2", "c3", "q", "p", "d1", "d2", "d3", "1"];
    let at = |s: &str| labels.iter().position(|&l| l == s).expect("known label");
    let edges = [
        ("0", "a"),
        ("0", "b"),
        ("a", "c1"),
        ("b", "c1"),
        ("b", "c2"),
        ("b", "c3"),
        ("b", "q"),
        ("c1", "p"),
        ("c2", "p"),
        ("c3", "p"),
        ("c1", "d1"),
        ("c2", "d2"),
        ("c3", "d3"),
        ("q", "d1"),
        ("q", "d2"),
        ("q", "d3"),
        ("p", "1"),
        ("d1", "1"),
        ("d2", "1"),
        ("d3", "1"),
    ];
    let covers: Vec<_> = edges.iter().map(|&(x, y)| (at(x), at(y))).collect();
    labelled(12, &covers, &labels)
}

fn parse_args(name: &str, head: &str) -> Option<Vec<usize>> {
    let body = name.strip_prefix(head)?.strip_prefix('(')?.strip_suffix(')')?;
    body.split(',').map(|t| t.trim().parse().ok()).collect()
}

/// Looks up a fixture: `chain(k)`, `boolean(k)`, `m3`, `n5`,
/// `glued_squares_k7`, `grid(m,n)` or `l12`.
pub fn catalog(name: &str) -> Result<CatalogEntry> {
    catalog_with(name, &Limits::DEFAULT)
}

pub fn catalog_with(name: &str, limits: &Limits) -> Result<CatalogEntry> {
    let key: String = name.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_ascii_lowercase();
    let unknown = || Error::UnknownName(name.to_string());
    let (lattice, notes) = match key.as_str() {
        "m3" | "diamond" => (m3(), "diamond: simple, modular, not distributive"),
        "n5" | "pentagon" => (n5(), "pentagon: not modular"),
        "glued_squares_k7" | "k7" => (glued_squares(), "two squares glued at the middle element y"),
        "l12" => (l12(), "modular, [b,p] and [q,1] are diamonds; retract poset is not a lattice"),
        _ => {
            if let Some(args) = parse_args(&key, "chain") {
                let [k] = args[..] else { return Err(unknown()) };
                crate::error::check_cap("chain", k, limits.max_elements)?;
                (Lattice::chain(k)?, "chain 0 < 1 < … < k-1")
            } else if let Some(args) = parse_args(&key, "boolean") {
                let [k] = args[..] else { return Err(unknown()) };
                if k >= usize::BITS as usize || (1usize << k) > limits.max_elements {
                    return Err(Error::SizeLimit {
                        what: "boolean lattice",
                        size: k,
                        cap: limits.max_elements,
                    });
                }
                (Lattice::boolean(k)?, "subsets of a k-set; element i is the bitmask i")
            } else if let Some(args) = parse_args(&key, "grid") {
                let [m, n] = args[..] else { return Err(unknown()) };
                (make_grid(GridShape::new(m, n)?, limits)?, "product of two chains; (i,j) has index i*n+j")
            } else {
                return Err(unknown());
            }
        }
    };
    Ok(CatalogEntry { name: key, lattice, notes })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Removal {
    Atom,
    Coatom,
}

impl std::str::FromStr for Removal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "atom" => Ok(Removal::Atom),
            "coatom" => Ok(Removal::Coatom),
            _ => Err(Error::UnknownName(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BooleanMinusReport {
    pub k: usize,
    pub which: Removal,
    /// The removed subset, as a bitmask.
    pub removed: usize,
    pub size: usize,
    pub is_lattice: bool,
    pub is_distributive: Option<bool>,
}

/// Removes the atom/coatom picked by `choice` (0-based among the k
/// candidates) from `B_k` and tests the remaining inclusion order.
pub fn boolean_minus_element(k: usize, which: Removal, choice: usize) -> Result<BooleanMinusReport> {
    if !(2..=10).contains(&k) {
        return Err(Error::SizeLimit { what: "boolean exponent", size: k, cap: 10 });
    }
    if choice >= k {
        return Err(Error::IndexOutOfRange { index: choice, n: k });
    }
    let full = (1usize << k) - 1;
    let removed = match which {
        Removal::Atom => 1 << choice,
        Removal::Coatom => full ^ (1 << choice),
    };
    let kept: Vec<usize> = (0..=full).filter(|&x| x != removed).collect();
    let poset = Lattice::from_order(kept.len(), |i, j| kept[i] & !kept[j] == 0);
    Ok(BooleanMinusReport {
        k,
        which,
        removed,
        size: kept.len(),
        is_lattice: poset.is_ok(),
        is_distributive: poset.ok().map(|l| l.is_distributive()),
    })
}

pub fn boolean_minus_element_check(k: usize, which: Removal) -> Result<BooleanMinusReport> {
    boolean_minus_element(k, which, 0)
}

/// Mask of the elements carrying the given labels.
pub fn mask_of_labels(lattice: &Lattice, names: &[&str]) -> Result<SubsetMask> {
    let idx = names
        .iter()
        .map(|s| lattice.index_of(s).ok_or_else(|| Error::UnknownName(s.to_string())))
        .collect::<Result<Vec<_>>>()?;
    Ok(SubsetMask::from_indices(lattice.size(), idx))
}
