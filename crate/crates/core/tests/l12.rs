use std::collections::BTreeSet;

use retractlab::catalog::{l12, m3, mask_of_labels};
use retractlab::enumerate::is_isomorphic;
use retractlab::*;

fn at(l: &Lattice, name: &str) -> usize {
    l.index_of(name).unwrap()
}

fn sublattice_of(l: &Lattice, s: &SubsetMask) -> Lattice {
    let xs = s.to_vec();
    Lattice::from_order(xs.len(), |i, j| l.leq(xs[i], xs[j])).unwrap()
}

#[test]
fn shape() {
    let l = l12();
    assert_eq!(l.size(), 12);
    assert!(l.satisfies_lattice_axioms());
    let flags = l.structural_flags();
    assert!(flags.is_modular && !flags.is_distributive && !flags.is_chain);
}

#[test]
fn diamonds_and_the_short_interval() {
    let l = l12();
    let bp = l.interval(at(&l, "b"), at(&l, "p"));
    assert_eq!(bp, mask_of_labels(&l, &["b", "c1", "c2", "c3", "p"]).unwrap());
    let q1 = l.interval(at(&l, "q"), at(&l, "1"));
    assert_eq!(q1, mask_of_labels(&l, &["q", "d1", "d2", "d3", "1"]).unwrap());
    for s in [bp, q1] {
        assert!(is_isomorphic(&sublattice_of(&l, &s), &m3()).unwrap());
    }
    assert_eq!(l.interval(at(&l, "0"), at(&l, "a")), mask_of_labels(&l, &["0", "a"]).unwrap());
}

#[test]
fn retracts_and_their_shared_kernel() {
    let l = l12();
    let limits = Limits::DEFAULT;
    let s1 = l.interval(at(&l, "0"), at(&l, "p"));
    let s2 = l.interval(at(&l, "0"), at(&l, "a")).union(&l.interval(at(&l, "q"), at(&l, "1")));
    let maps = all_retractions(&l, &limits).unwrap();
    let kernels = |s: &SubsetMask| -> BTreeSet<Partition> {
        maps.iter().filter(|f| f.image() == *s).map(EndoMap::kernel).collect()
    };
    let shared: Vec<Partition> = kernels(&s1).intersection(&kernels(&s2)).cloned().collect();
    assert_eq!(shared, vec![principal_congruence(&l, at(&l, "b"), at(&l, "q"))]);

    let rets = retracts(&l, RetractMode::BruteForce, &limits).unwrap();
    assert!(rets.contains(&s1) && rets.contains(&s2));
    assert!(!rets.contains(&mask_of_labels(&l, &["0", "a"]).unwrap()));
}

#[test]
fn retract_poset_is_not_a_lattice() {
    let l = l12();
    let poset = ret_poset(&l, &Limits::DEFAULT).unwrap();
    assert!(!poset.is_lattice());
    assert!(poset.witness().is_some());
    let s1 = l.interval(at(&l, "0"), at(&l, "p"));
    let s2 = l.interval(at(&l, "0"), at(&l, "a")).union(&l.interval(at(&l, "q"), at(&l, "1")));
    let (i, j) = (poset.index_of(&s1).unwrap(), poset.index_of(&s2).unwrap());
    assert_eq!(poset.meet_of(i, j), None);
    let lower: BTreeSet<SubsetMask> =
        poset.lower_bounds(i, j).into_iter().map(|k| poset.elements()[k].clone()).collect();
    let expected: BTreeSet<SubsetMask> =
        [SubsetMask::empty(12), mask_of_labels(&l, &["0"]).unwrap(), mask_of_labels(&l, &["a"]).unwrap()]
            .into();
    assert_eq!(lower, expected);
}

#[test]
fn congruences() {
    let l = l12();
    let limits = Limits::DEFAULT;
    let cons = all_congruences(&l, &limits).unwrap();
    assert_eq!(cons.len(), 8);
    let con_lattice = congruence_lattice(&l, &limits).unwrap();
    let atoms: BTreeSet<Partition> =
        con_lattice.upper_covers(con_lattice.bottom()).map(|x| cons[x].clone()).collect();
    assert!(con_lattice.is_distributive() && atoms.len() == 3);
    let expected: BTreeSet<Partition> = [("0", "a"), ("0", "b"), ("b", "q")]
        .iter()
        .map(|&(x, y)| principal_congruence(&l, at(&l, x), at(&l, y)))
        .collect();
    assert_eq!(atoms, expected);
    assert_eq!(rcon(&l, &limits).unwrap(), cons);
}
