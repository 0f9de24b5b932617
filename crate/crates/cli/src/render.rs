//! Plain-text rendering with element labels.

use retractlab::congruence::Partition;
use retractlab::search::SearchReport;
use retractlab::{Lattice, SubsetMask};

/// Label if the lattice has one, grid coordinates for grids, else the index.
pub fn name(l: &Lattice, x: usize) -> String {
    match (l.labels(), l.coords()) {
        (None, Some(coords)) => format!("({},{})", coords[x].0, coords[x].1),
        _ => l.label(x),
    }
}

pub fn show_set(l: &Lattice, s: &SubsetMask) -> String {
    let names: Vec<String> = s.iter().map(|x| name(l, x)).collect();
    format!("{{{}}}", names.join(", "))
}

pub fn show_partition(l: &Lattice, p: &Partition) -> String {
    let blocks = p.non_singleton_blocks();
    if blocks.is_empty() {
        return "Δ (discrete)".into();
    }
    let parts: Vec<String> = blocks
        .iter()
        .map(|b| b.iter().map(|&x| name(l, x)).collect::<Vec<_>>().join(" "))
        .map(|b| format!("{{{b}}}"))
        .collect();
    parts.join(" ")
}

pub fn search_report(r: &SearchReport) -> String {
    let mut out = format!("scanned {} lattices with {} elements\n", r.lattices_scanned, r.size);
    let (title, list) = if r.full_matches.is_empty() {
        ("no full match; best partial matches", &r.ranked)
    } else {
        ("full matches", &r.full_matches)
    };
    out.push_str(&format!("{title}:\n"));
    for c in list {
        let covers: Vec<String> = c.lattice.covers.iter().map(|[a, b]| format!("{a}<{b}")).collect();
        let k = &c.constraints;
        out.push_str(&format!(
            "  #{} ({}/5) pair ({}, {}) |Con| = {} |RCon| = {} covers: {}\n",
            c.index,
            c.satisfied,
            c.pair[0],
            c.pair[1],
            c.con_size,
            c.rcon_size,
            covers.join(" ")
        ));
        out.push_str(&format!(
            "    principal block {} | not sublattice {} | Con boolean 32 {} | RCon = Con - con(c,d) {} | RCon non-distributive lattice {}\n",
            k.principal_block, k.not_sublattice, k.con_boolean_32, k.rcon_is_con_minus_pair, k.rcon_nondistributive_lattice
        ));
        if c.pair_congruence_outside_rcon {
            out.push_str("    con(c,d) is not a retraction congruence\n");
        }
    }
    out
}
