//! Search of the eight-element lattices for one whose retraction
//! congruences miss exactly one congruence and form a non-distributive
//! lattice.

use serde::Serialize;

use crate::congruence::{all_congruences, order_lattice, principal_congruence, Partition};
use crate::enumerate::enumerate_lattices;
use crate::error::Result;
use crate::limits::Limits;
use crate::order::{Lattice, LatticeJson, SubsetMask};
use crate::retraction::rcon;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Constraints {
    /// `con(c, d)` has `{c, d}` as its only non-singleton block.
    pub principal_block: bool,
    /// Neither `L ∖ {c}` nor `L ∖ {d}` is a sublattice.
    pub not_sublattice: bool,
    /// `Con L` is boolean with 32 elements.
    pub con_boolean_32: bool,
    /// `RCon L = Con L ∖ {con(c, d)}`.
    pub rcon_is_con_minus_pair: bool,
    /// `RCon L` under inclusion is a lattice but not distributive.
    pub rcon_nondistributive_lattice: bool,
}

impl Constraints {
    pub const TOTAL: usize = 5;

    pub fn satisfied(&self) -> usize {
        [
            self.principal_block,
            self.not_sublattice,
            self.con_boolean_32,
            self.rcon_is_con_minus_pair,
            self.rcon_nondistributive_lattice,
        ]
        .into_iter()
        .filter(|&b| b)
        .count()
    }

    pub fn all(&self) -> bool {
        self.satisfied() == Self::TOTAL
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CandidateReport {
    /// Position in the enumeration order.
    pub index: usize,
    pub lattice: LatticeJson,
    /// The cover pair `(c, d)` scoring best for this lattice.
    pub pair: [usize; 2],
    pub constraints: Constraints,
    pub satisfied: usize,
    pub con_size: usize,
    pub rcon_size: usize,
    /// `con(c, d)` is not a retraction congruence.
    pub pair_congruence_outside_rcon: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchReport {
    pub size: usize,
    pub lattices_scanned: usize,
    pub full_matches: Vec<CandidateReport>,
    /// Best partial matches, most constraints first; filled only when there
    /// is no full match.
    pub ranked: Vec<CandidateReport>,
}

fn is_boolean(con: &Lattice) -> bool {
    let atoms = con.upper_covers(con.bottom()).count();
    con.is_distributive() && atoms < usize::BITS as usize && con.size() == 1 << atoms
}

fn without(l: &Lattice, x: usize) -> SubsetMask {
    let mut s = SubsetMask::full(l.size());
    s.remove(x);
    s
}

fn examine(index: usize, l: &Lattice, limits: &Limits) -> Result<Option<CandidateReport>> {
    let cons = all_congruences(l, limits)?;
    let rcons = rcon(l, limits)?;
    let con_boolean_32 = cons.len() == 32 && is_boolean(&order_lattice(&cons, Partition::refines)?);
    let rcon_nondistributive_lattice = match order_lattice(&rcons, Partition::refines) {
        Ok(r) => !r.is_distributive(),
        Err(_) => false,
    };
    let mut best: Option<CandidateReport> = None;
    for &(c, d) in l.covers() {
        let theta = principal_congruence(l, c, d);
        let principal_block = theta.non_singleton_blocks() == vec![vec![c, d]];
        let not_sublattice = !l.is_sublattice(&without(l, c)) && !l.is_sublattice(&without(l, d));
        let expected: Vec<&Partition> = cons.iter().filter(|&t| *t != theta).collect();
        let rcon_is_con_minus_pair = rcons.iter().collect::<Vec<_>>() == expected;
        let constraints = Constraints {
            principal_block,
            not_sublattice,
            con_boolean_32,
            rcon_is_con_minus_pair,
            rcon_nondistributive_lattice,
        };
        let report = CandidateReport {
            index,
            lattice: l.to_json(),
            pair: [c, d],
            satisfied: constraints.satisfied(),
            constraints,
            con_size: cons.len(),
            rcon_size: rcons.len(),
            pair_congruence_outside_rcon: !rcons.contains(&theta),
        };
        if best.as_ref().is_none_or(|b| report.satisfied > b.satisfied) {
            best = Some(report);
        }
    }
    // a one-element lattice has no cover pair to test
    Ok(best)
}

/// Scans all lattices of the given size (8 for the intended search).
pub fn search_lattices(size: usize, keep: usize, limits: &Limits) -> Result<SearchReport> {
    let lattices = enumerate_lattices(size, limits)?;
    let mut reports = Vec::with_capacity(lattices.len());
    for (i, l) in lattices.iter().enumerate() {
        reports.extend(examine(i, l, limits)?);
    }
    let full_matches: Vec<CandidateReport> =
        reports.iter().filter(|r| r.constraints.all()).cloned().collect();
    let ranked = if full_matches.is_empty() {
        // stable: ties stay in enumeration order
        reports.sort_by_key(|r| std::cmp::Reverse(r.satisfied));
        reports.into_iter().take(keep).collect()
    } else {
        Vec::new()
    };
    Ok(SearchReport { size, lattices_scanned: lattices.len(), full_matches, ranked })
}

pub fn search_l8(limits: &Limits) -> Result<SearchReport> {
    search_lattices(8, 10, limits)
}
