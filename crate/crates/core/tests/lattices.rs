mod oracles;

use std::collections::BTreeSet;

use dlab_core::lattice::{enumerate_lattices, enumerate_lattices_at_scale, f_op, v_op, GenBraid, IsoLattice};
use oracles::{ladder_coords, lattice_ladder};

type Point = (Vec<Vec<u64>>, Vec<Vec<u64>>, i64);

fn enumerated(gb: &GenBraid, scale: u32) -> BTreeSet<Point> {
    enumerate_lattices_at_scale(gb, scale)
        .unwrap()
        .into_iter()
        .map(|rec| {
            let (w0, w1) = ladder_coords(gb.p, rec.lattice.scale(), [rec.lattice.basis(0), rec.lattice.basis(1)]);
            (w0, w1, rec.lambda)
        })
        .collect()
}

#[test]
fn enumeration_matches_subgroup_ladder() {
    for p in [3, 5] {
        for (m, l, a) in [(1, 1, 0), (2, 0, 1), (2, 1, 0)] {
            let gb = GenBraid::new(p, m, l, a).unwrap();
            let oracle: BTreeSet<Point> = lattice_ladder(&gb).into_iter().collect();
            assert!(!oracle.is_empty());
            assert_eq!(enumerated(&gb, l + 3), oracle, "p = {p}, (m, l, a) = ({m}, {l}, {a})");
        }
    }
}

#[test]
fn enumeration_is_scale_independent() {
    for (m, l, a) in [(1, 1, 0), (2, 1, 0)] {
        let gb = GenBraid::new(3, m, l, a).unwrap();
        assert_eq!(enumerated(&gb, l + 3), enumerated(&gb, l + 5));
    }
}

#[test]
fn exponent_identity() {
    for (m, l, a) in [(1, 1, 0), (2, 0, 1), (2, 1, 0), (1, 2, 0), (3, 0, 2), (2, 1, 1)] {
        let gb = GenBraid::new(3, m, l, a).unwrap();
        for rec in enumerate_lattices(&gb).unwrap() {
            let lhs = (rec.alpha + rec.beta) as i64;
            assert_eq!(lhs, m as i64 * (l as i64 - rec.lambda) + a as i64, "(m, l, a) = ({m}, {l}, {a})");
        }
    }
}

#[test]
fn operators_are_monotone_and_commute() {
    let gb = GenBraid::new(5, 2, 1, 1).unwrap();
    let mut x = IsoLattice::base(&gb, 6);
    for step in 0..3 {
        let f = f_op(&gb, &x).unwrap();
        let v = v_op(&gb, &x).unwrap();
        assert!(f.contains_lattice(&x) && v.contains_lattice(&x));
        assert_eq!(f.length(), x.length() + 2);
        assert_eq!(f_op(&gb, &v).unwrap(), v_op(&gb, &f).unwrap());
        x = if step % 2 == 0 { f } else { v };
    }
}
