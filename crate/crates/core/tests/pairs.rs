mod oracles;

use dlab_core::dieudonne::random_invertible;
use dlab_core::pairs::{
    component_counts, component_structure, d_dim, field_of_order, growth_slope, incidence_count, normal_form, normal_pair,
    pair_aut_count, projective_size, xi, Component, PairModule,
};
use dlab_core::Mat;
use oracles::{incidence_direct, incidence_tally};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn xi_set(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..=n).flat_map(move |m| (0..=n - m).map(move |l| (m, l)))
}

fn random_pair(q: u64, n: usize, m: usize, l: usize, rng: &mut ChaCha8Rng) -> (PairModule, Mat, Mat) {
    let k = field_of_order(q).unwrap();
    let normal = normal_pair(&k, n, m, l, 1).unwrap();
    let psi = random_invertible(&k, n, rng);
    let psi_p = random_invertible(&k, n, rng);
    let pm = normal.transport(&psi.inverse(&k).unwrap(), &psi_p.inverse(&k).unwrap()).unwrap();
    (pm, psi, psi_p)
}

#[test]
fn normal_form_roundtrips() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut done = 0;
    for trial in 0..500 {
        let q = [3, 5, 9, 25][trial % 4];
        let n = 1 + trial % 5;
        let cases: Vec<(usize, usize)> = xi_set(n).collect();
        let (m, l) = cases[trial % cases.len()];
        let k = field_of_order(q).unwrap();
        let (pm, _, _) = random_pair(q, n, m, l, &mut rng);
        assert_eq!((xi(&pm).m, xi(&pm).l), (m, l));
        let nf = normal_form(&pm).unwrap();
        let target = normal_pair(&k, n, m, l, 1).unwrap();
        assert_eq!((&nf.u, &nf.v), (&target.u, &target.v));
        let moved = pm.transport(&nf.psi, &nf.psi_prime).unwrap();
        assert_eq!((moved.u, moved.v), (target.u, target.v));
        done += 1;
    }
    assert_eq!(done, 500);
}

#[test]
fn incidence_matches_union_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for q in [3, 5] {
        for n in 1..=3 {
            for (m, l) in xi_set(n) {
                let (pm, _, _) = random_pair(q, n, m, l, &mut rng);
                let tally = incidence_tally(&pm);
                let got = incidence_count(&pm).unwrap();
                assert_eq!(got, tally.union, "q = {q}, n = {n}, (m, l) = ({m}, {l})");
                assert_eq!(got, incidence_direct(&pm));
                // inclusion-exclusion
                let [ab, ac, bc, abc] = tally.overlaps;
                assert_eq!(tally.union, tally.z + tally.z_prime + tally.z_double_prime - ab - ac - bc + abc);
                // per-component counts, for the components that are kept
                for (comp, c) in component_counts(&pm).unwrap() {
                    let want = match comp {
                        Component::Z => tally.z,
                        Component::ZPrime => tally.z_prime,
                        Component::ZDoublePrime => tally.z_double_prime,
                    };
                    assert_eq!(c, want, "{comp:?}");
                }
            }
        }
    }
}

#[test]
fn z_count_formula() {
    let k = field_of_order(5).unwrap();
    for n in 1..=3usize {
        for (m, l) in xi_set(n).filter(|&(m, _)| m >= 1) {
            let pm = normal_pair(&k, n, m, l, 1).unwrap();
            let z = component_counts(&pm).unwrap()[0].1;
            let (n, m) = (n as i64, m as i64);
            let want = projective_size(5, n - 1) - projective_size(5, n - m - 1)
                + projective_size(5, n - m - 1) * projective_size(5, m - 1);
            assert_eq!(z, want);
        }
    }
}

#[test]
fn component_structure_labels() {
    assert_eq!(component_structure(1, 1, 3).unwrap().label(), "three");
    assert_eq!(component_structure(1, 1, 2).unwrap().label(), "two");
    assert_eq!(component_structure(0, 0, 2).unwrap().components, vec![Component::ZDoublePrime]);
    assert!(component_structure(2, 2, 3).is_err());
}

#[test]
fn aut_growth_matches_dimension() {
    for n in 1..=2usize {
        for (m, l) in xi_set(n) {
            let counts: Vec<u128> = [7u64, 9]
                .iter()
                .map(|&q| pair_aut_count(&normal_pair(&field_of_order(q).unwrap(), n, m, l, 1).unwrap(), q).unwrap())
                .collect();
            let slope = growth_slope(7, counts[0], 9, counts[1]);
            let d = d_dim(m, l, n).unwrap() as f64;
            assert!((slope - d).abs() < 0.5, "n = {n}, (m, l) = ({m}, {l}): slope {slope}, d {d}");
        }
    }
}

#[test]
fn aut_count_is_conjugation_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (m, l) in [(1, 0), (1, 1), (0, 2)] {
        let (pm, _, _) = random_pair(3, 2, m, l, &mut rng);
        let k = field_of_order(3).unwrap();
        assert_eq!(pair_aut_count(&pm, 3).unwrap(), pair_aut_count(&normal_pair(&k, 2, m, l, 1).unwrap(), 3).unwrap());
    }
}
