mod oracles;

use dlab_core::coweights::{dominance_leq, frob_type_check, inv_lattice_pair, is_sigma_stable, norm_mu, sigma_act, Coweight};
use dlab_core::Error;
use oracles::{in_convex_hull, permutations};
use proptest::prelude::*;

/// Coweights of rank `n` with every coordinate in `{0, 1, 2}`.
fn grid(n: usize) -> Vec<Coweight> {
    let mut out = Vec::new();
    for c in 0..=4 {
        for idx in 0..3u32.pow(n as u32) {
            let mut x = idx;
            let half: Vec<i64> = (0..n)
                .map(|_| {
                    let d = (x % 3) as i64;
                    x /= 3;
                    d
                })
                .collect();
            if half.iter().all(|&h| (0..=2).contains(&(c - h))) {
                out.push(Coweight::from_half(&half, c));
            }
        }
    }
    out
}

fn hull_oracle(a: &Coweight, b: &Coweight) -> bool {
    let orbit: Vec<Vec<i64>> =
        permutations(b.first_half()).iter().map(|h| Coweight::from_half(h, b.constant()).coords().to_vec()).collect();
    in_convex_hull(a.coords(), &orbit)
}

#[test]
fn dominance_matches_convex_hull_on_grid() {
    let pts = grid(3);
    assert_eq!(pts.len(), 45);
    let mut compared = 0;
    for a in &pts {
        for b in &pts {
            match dominance_leq(a, b) {
                Ok(got) => {
                    assert_eq!(got, hull_oracle(a, b), "{a} vs {b}");
                    compared += 1;
                }
                Err(Error::IncomparableConstants(_, _)) => assert_ne!(a.constant(), b.constant()),
                Err(e) => panic!("{e}"),
            }
        }
    }
    assert!(compared > 0);
}

#[test]
fn dominance_is_a_partial_order_on_dominant_grid() {
    let dom: Vec<Coweight> = grid(3).into_iter().filter(Coweight::is_dominant).collect();
    let leq = |a: &Coweight, b: &Coweight| a.constant() == b.constant() && dominance_leq(a, b).unwrap();
    for a in &dom {
        assert!(leq(a, a));
        for b in &dom {
            if leq(a, b) && leq(b, a) {
                assert_eq!(a, b);
            }
            for c in &dom {
                if leq(a, b) && leq(b, c) {
                    assert!(leq(a, c));
                }
            }
        }
    }
}

#[test]
fn frobenius_type_for_small_ranks() {
    for n in [2, 4, 6] {
        for p in [3, 5] {
            let t = frob_type_check(n, p, 8).unwrap();
            assert!(t.ok, "n = {n}, p = {p}: {}", t.coweight);
            let mut half = vec![2];
            half.extend(std::iter::repeat_n(1, n - 2));
            half.push(0);
            assert_eq!(t.coweight, Coweight::from_half(&half, 2));
        }
    }
}

proptest! {
    #[test]
    fn sigma_is_an_involution(half in prop::collection::vec(-5i64..6, 1..6), c in -3i64..4) {
        let x = Coweight::from_half(&half, c);
        prop_assert_eq!(sigma_act(&sigma_act(&x)), x.clone());
        prop_assert_eq!(sigma_act(&x).constant(), c);
        prop_assert!(x.dominant().is_dominant());
        prop_assert!(dominance_leq(&x, &x.dominant()).unwrap());
    }

    #[test]
    fn inv_recovers_divisor_pairs(half in prop::collection::vec(0u32..5, 1..6), c in 4u32..8) {
        let g1: Vec<u32> = half.iter().map(|h| c - h).collect();
        let x = inv_lattice_pair(&half, &g1).unwrap();
        prop_assert_eq!(x.constant(), c as i64);
        prop_assert!(x.is_dominant());
        prop_assert!(is_sigma_stable(&x) == is_sigma_stable(&x.dominant()));
    }

    #[test]
    fn norm_of_mu_is_sigma_fixed(n in 2usize..12) {
        let nm = norm_mu(n).unwrap();
        prop_assert_eq!(sigma_act(&nm), nm.clone());
        prop_assert_eq!(nm.constant(), 2);
    }
}
