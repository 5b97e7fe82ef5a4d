mod oracles;

use dlab_core::automorphisms::{
    braid_aut_extract, braid_aut_from_params, braid_root_order, dim_aut_formula, find_gd_isomorphism, hom_gd_count, isom_count,
    random_braid_params, unitary_isomorphisms, verify_automorphism,
};
use dlab_core::classify::classify;
use dlab_core::dieudonne::{braid, braid_plus_superspecial, superspecial};
use dlab_core::json::{module_from_json, module_to_json};
use dlab_core::lattice::GenBraid;
use dlab_core::orbits::count_superspecial_isogeny_orbits;
use dlab_core::slopes::{isoclinic_slope, mu_ordinary_decomposition, newton_slopes};
use dlab_core::strata::{dim_supersingular, eo_to_polygon, strata_table, NewtonPolygon, Q};
use dlab_core::Ring;
use num_integer::gcd;
use oracles::unitary_group_order;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn q(a: i64, b: i64) -> Q {
    Q::new(a, b)
}

/// Slopes of `B(n)`: all `1/2` for odd `n`, else `1/2 ± 1/n`, each with multiplicity `n`.
fn braid_slopes(n: usize) -> NewtonPolygon {
    let n_ = n as i64;
    if n % 2 == 1 {
        NewtonPolygon::new([(q(1, 2), 2 * n)])
    } else {
        NewtonPolygon::new([(q(n_ / 2 - 1, n_), n), (q(n_ / 2 + 1, n_), n)])
    }
}

#[test]
fn braid_newton_slopes() {
    for p in [3, 5] {
        for n in 1..=8 {
            let w = Ring::witt(p, 2, n as u32 + 8).unwrap();
            assert_eq!(newton_slopes(&braid(&w, n).unwrap()).unwrap(), braid_slopes(n), "p = {p}, n = {n}");
        }
    }
}

#[test]
fn mixed_modules_follow_their_stratum() {
    let w = Ring::witt(3, 2, 14).unwrap();
    for n in 1..=5 {
        for rho in 1..=n {
            let m = braid_plus_superspecial(&w, rho, n).unwrap();
            assert_eq!(newton_slopes(&m).unwrap(), eo_to_polygon(rho, n).unwrap(), "rho = {rho}, n = {n}");
        }
    }
}

#[test]
fn mu_ordinary_parts_are_isoclinic() {
    let w = Ring::witt(5, 2, 12).unwrap();
    for n in 2..=4 {
        let m = braid_plus_superspecial(&w, 2, n).unwrap();
        let dec = mu_ordinary_decomposition(&m).unwrap();
        let want = [(q(0, 1), 1), (q(1, 2), n - 2), (q(1, 1), 1)];
        for (i, (s, mult)) in want.into_iter().enumerate() {
            let part = dec.part(&m, i).unwrap();
            assert_eq!(part.n(), mult);
            if mult > 0 {
                assert_eq!(isoclinic_slope(&part.graded).unwrap(), s);
            }
        }
    }
}

#[test]
fn classification_under_random_base_change() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for p in [3, 5] {
        let k = Ring::field(p, 2).unwrap();
        for n in 2..=4 {
            for rho in 1..=n {
                let reference = braid_plus_superspecial(&k, rho, n).unwrap();
                for trial in 0..8 {
                    let sp = reference.random_symplectic_base_change(&mut rng).unwrap();
                    sp.validate(true).unwrap();
                    assert_eq!(classify(&sp).unwrap(), rho, "p = {p}, n = {n}, rho = {rho}");
                    if trial == 0 {
                        let iso = find_gd_isomorphism(&sp.graded, &reference.graded, 2, &mut rng, 400).unwrap();
                        assert!(iso.is_some(), "no isomorphism found for rho = {rho}, n = {n}");
                    }
                }
            }
        }
    }
}

#[test]
fn superspecial_automorphisms_are_unitary_groups() {
    let k = Ring::field(3, 2).unwrap();
    for m in 1..=2 {
        let want = unitary_group_order(3, m) as u128;
        assert_eq!(want, [4, 96][m - 1]);
        let s = superspecial(&k, m).unwrap();
        for kk in 1..=3 {
            assert_eq!(isom_count(&s, &s, kk).unwrap(), want, "m = {m}, k = {kk}");
        }
    }
}

#[test]
fn homs_from_superspecial_into_braids() {
    let k = Ring::field(3, 2).unwrap();
    let s = superspecial(&k, 1).unwrap();
    for kk in 1..=2usize {
        let qq = 9u128.pow(kk as u32);
        for r in 1..=4 {
            let want = if r % 2 == 1 { qq } else { 1 };
            assert_eq!(hom_gd_count(&s.graded, &braid(&k, r).unwrap().graded, kk).unwrap(), want, "r = {r}, q = {qq}");
        }
    }
}

#[test]
fn braid_automorphism_counts() {
    let k = Ring::field(3, 2).unwrap();
    for n in 1..=4 {
        let b = braid(&k, n).unwrap();
        let d = dim_aut_formula(n, n).unwrap() as u32;
        for kk in 1..=2usize {
            let qk = 3u64.pow(2 * kk as u32);
            let auts = unitary_isomorphisms(&b, &b, kk).unwrap();
            let ext = b.extend_to_degree(2 * kk).unwrap();
            let one = ext.ring().one();
            let identity_part = auts.iter().filter(|(a, _)| a[(0, 0)] == one).count() as u64;
            assert_eq!(identity_part, qk.pow(d), "n = {n}, k = {kk}");
            assert_eq!(auts.len() as u64, gcd(braid_root_order(n, 3), qk - 1) * qk.pow(d), "n = {n}, k = {kk}");
        }
    }
}

#[test]
fn braid_automorphism_parametrization_roundtrip() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let fields = [Ring::field(3, 2).unwrap(), Ring::field(3, 4).unwrap(), Ring::field(5, 2).unwrap()];
    for i in 0..200 {
        let k = &fields[i % 3];
        let n = 1 + i % 5;
        let params = random_braid_params(k, n, &mut rng);
        let (a, b) = braid_aut_from_params(k, n, &params).unwrap();
        verify_automorphism(&braid(k, n).unwrap(), &a, &b).unwrap();
        assert_eq!(braid_aut_extract(k, n, &a, &b).unwrap(), params);
    }
}

#[test]
fn strata_tables() {
    for n in 2..=10 {
        let rows = strata_table(n).unwrap();
        assert_eq!(rows.len(), n);
        assert_eq!(dim_supersingular(n).unwrap(), (n - 1) / 2);
        for row in rows {
            assert_eq!(row.codim, dim_aut_formula(row.rho, n).unwrap());
            assert_eq!(row.supersingular, row.rho % 2 == 1);
        }
    }
}

#[test]
fn superspecial_orbits() {
    for c in [1, 3] {
        assert_eq!(count_superspecial_isogeny_orbits(3, c, c + 2).unwrap().orbits, 0);
    }
    for c in [0, 2] {
        let a = count_superspecial_isogeny_orbits(3, c, c + 2).unwrap();
        let b = count_superspecial_isogeny_orbits(3, c, c + 3).unwrap();
        assert!(a.orbits > 0);
        assert_eq!(a.orbits, b.orbits);
    }
}

fn base_ring() -> impl Strategy<Value = Ring> {
    prop_oneof![Just(Ring::field(3, 2).unwrap()), Just(Ring::field(5, 2).unwrap()), Just(Ring::witt(3, 2, 4).unwrap())]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn constructed_modules_satisfy_invariants(r in base_ring(), n in 1usize..6, rho_seed in any::<usize>(), seed in any::<u64>()) {
        let rho = 1 + rho_seed % n;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = braid_plus_superspecial(&r, rho, n).unwrap();
        m.validate(true).unwrap();
        let moved = m.random_symplectic_base_change(&mut rng).unwrap();
        moved.validate(true).unwrap();
        prop_assert_eq!(moved.signature(), m.signature());
        prop_assert_eq!(module_from_json(&module_to_json(&moved)).unwrap(), moved);
    }

    #[test]
    fn generalized_braids_satisfy_invariants(m in 1usize..4, l in 0u32..3, a_seed in any::<usize>()) {
        let a = a_seed % m;
        let gb = GenBraid::new(3, m, l, a).unwrap();
        let w = Ring::witt(3, 1, 8).unwrap();
        let module = gb.to_module(&w).unwrap();
        module.validate(false).unwrap();
        prop_assert_eq!(gb.dual_length(), 4 * (m as u32 * l + a as u32));
    }
}
