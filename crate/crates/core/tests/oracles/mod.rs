//! Brute-force references shared by the integration tests. None of these
//! call into the routine they are compared against.
#![allow(dead_code)]

use std::collections::BTreeSet;

use dlab_core::lattice::GenBraid;
use dlab_core::pairs::PairModule;
use dlab_core::strata::Q;
use dlab_core::{Elem, Mat, Ring};

// ---------------------------------------------------------------------------
// F_p linear algebra on plain vectors

pub fn rref_fp(rows: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let mut a: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|x| x % p).collect()).collect();
    let ncols = a.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut row = 0;
    for c in 0..ncols {
        let Some(piv) = (row..a.len()).find(|&i| a[i][c] != 0) else { continue };
        a.swap(row, piv);
        let inv = (1..p).find(|x| x * a[row][c] % p == 1).unwrap();
        for x in a[row].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..a.len() {
            if i != row && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..ncols {
                    a[i][j] = (a[i][j] + p * p - f * a[row][j] % p) % p;
                }
            }
        }
        row += 1;
    }
    for r in a.into_iter().take(row) {
        out.push(r);
    }
    out
}

fn in_span(basis: &[Vec<u64>], x: &[u64], p: u64) -> bool {
    let mut rows = basis.to_vec();
    rows.push(x.to_vec());
    rref_fp(&rows, p).len() == rref_fp(basis, p).len()
}

/// Every subspace of `F_p^n` supported on `support`, in reduced echelon form.
pub fn subspaces(p: u64, n: usize, support: &[usize]) -> Vec<Vec<Vec<u64>>> {
    let k = support.len();
    let mut out = Vec::new();
    for mask in 0u32..(1 << k) {
        let pivots: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).collect();
        // free slots: (row, col) with col > pivot, col not a pivot
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &pc)| (pc + 1..k).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
            .collect();
        let total = p.pow(free.len() as u32);
        for idx in 0..total {
            let mut rows = vec![vec![0u64; n]; pivots.len()];
            for (r, &pc) in pivots.iter().enumerate() {
                rows[r][support[pc]] = 1;
            }
            let mut x = idx;
            for &(r, c) in &free {
                rows[r][support[c]] = x % p;
                x /= p;
            }
            out.push(rows);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Lattices between N and N^t, by exhaustive search over subgroups

fn det_val(p: i128, m: &[Vec<i128>]) -> Option<u32> {
    // Bareiss
    let n = m.len();
    let mut a = m.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(s) = (k + 1..n).find(|&i| a[i][k] != 0) else { return None };
            a.swap(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    let mut d = sign * a[n - 1][n - 1];
    let mut v = 0;
    while d % p == 0 {
        d /= p;
        v += 1;
    }
    Some(v)
}

fn min_val(p: i128, m: &[Vec<i128>]) -> u32 {
    m.iter()
        .flatten()
        .filter(|&&x| x != 0)
        .map(|&x| {
            let (mut y, mut v) = (x, 0);
            while y % p == 0 {
                y /= p;
                v += 1;
            }
            v
        })
        .min()
        .unwrap()
}

fn reduce_map(a: &[Vec<i128>], p: u64) -> Vec<Vec<u64>> {
    a.iter().map(|r| r.iter().map(|&x| x.rem_euclid(p as i128) as u64).collect()).collect()
}

fn apply_fp(a: &[Vec<u64>], x: &[u64], p: u64) -> Vec<u64> {
    a.iter().map(|r| r.iter().zip(x).map(|(u, v)| u * v).sum::<u64>() % p).collect()
}

/// Columns (as `p * basis`) of the lattice `N + p^{-1} W`.
fn lattice_basis(w: &[Vec<u64>], n: usize, p: u64) -> Vec<Vec<i128>> {
    let pivots: Vec<usize> = w.iter().map(|r| r.iter().position(|&x| x != 0).unwrap()).collect();
    let mut cols: Vec<Vec<i128>> = w.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    for j in (0..n).filter(|j| !pivots.contains(j)) {
        let mut e = vec![0i128; n];
        e[j] = p as i128;
        cols.push(e);
    }
    cols
}

/// Graded subspace pair `(W_0, W_1)` in echelon form, and `λ`.
pub type LadderPoint = (Vec<Vec<u64>>, Vec<Vec<u64>>, i64);

/// All graded `N ⊆ L ⊆ N^t` that are F- and V-stable, of signature
/// `(2m-1, 1)`, with Gram matrix `p^λ` times a unimodular one. Requires
/// `N^t ⊆ p^{-1} N`.
pub fn lattice_ladder(gb: &GenBraid) -> Vec<LadderPoint> {
    let p = gb.p;
    let pi = p as i128;
    let n = gb.rank();
    let e = gb.gram_exponents();
    assert!(e.iter().all(|&x| x <= 1), "oracle handles N^t inside p^-1 N only");
    let support: Vec<usize> = (0..n).filter(|&i| e[i] == 1).collect();
    let (f01, f10) = gb.f_blocks();
    let (v01, v10) = gb.v_blocks();
    let (f01r, f10r, v01r, v10r) = (reduce_map(f01, p), reduce_map(f10, p), reduce_map(v01, p), reduce_map(v10, p));
    let nv10 = det_val(pi, v10).unwrap() as i64;
    let nv01 = det_val(pi, v01).unwrap() as i64;
    let g = gb.gram_diag();
    let subs = subspaces(p, n, &support);
    let maps_into = |a: &[Vec<u64>], src: &[Vec<u64>], dst: &[Vec<u64>]| src.iter().all(|w| in_span(dst, &apply_fp(a, w, p), p));
    let mut out = Vec::new();
    for w0 in &subs {
        for w1 in &subs {
            if !(maps_into(&f01r, w0, w1) && maps_into(&v01r, w0, w1) && maps_into(&f10r, w1, w0) && maps_into(&v10r, w1, w0)) {
                continue;
            }
            let (d0, d1) = (w0.len() as i64, w1.len() as i64);
            // len L_0/V L_1 = len L_0/N_0 + len N_0/V N_1 - len V L_1/V N_1
            let sig = (d0 + nv10 - d1, d1 + nv01 - d0);
            if sig != (n as i64 - 1, 1) {
                continue;
            }
            let (b0, b1) = (lattice_basis(w0, n, p), lattice_basis(w1, n, p));
            let gram: Vec<Vec<i128>> =
                (0..n).map(|i| (0..n).map(|j| (0..n).map(|t| b0[i][t] * g[t] * b1[j][t]).sum()).collect()).collect();
            let mu = min_val(pi, &gram);
            if det_val(pi, &gram) == Some(n as u32 * mu) {
                out.push((w0.clone(), w1.clone(), mu as i64 - 2));
            }
        }
    }
    out
}

/// `(W_0, W_1)` of a library lattice at scale `S`, assuming `L ⊆ p^{-1} N`.
pub fn ladder_coords(p: u64, scale: u32, basis: [&Vec<Vec<i128>>; 2]) -> (Vec<Vec<u64>>, Vec<Vec<u64>>) {
    let conv = |b: &Vec<Vec<i128>>| {
        let div = (p as i128).pow(scale - 1);
        let rows: Vec<Vec<u64>> = b
            .iter()
            .map(|c| {
                c.iter()
                    .map(|&x| {
                        assert_eq!(x % div, 0, "lattice leaves p^-1 N");
                        (x / div).rem_euclid(p as i128) as u64
                    })
                    .collect()
            })
            .collect();
        rref_fp(&rows, p)
    };
    (conv(basis[0]), conv(basis[1]))
}

// ---------------------------------------------------------------------------
// Convex hulls over Q, via Caratheodory

fn solve_q(a: Vec<Vec<Q>>, b: Vec<Q>) -> Option<Vec<Q>> {
    // a: rows x k, full column rank required
    let rows = a.len();
    let k = a[0].len();
    let mut m: Vec<Vec<Q>> = a.into_iter().zip(b).map(|(mut r, x)| {
        r.push(x);
        r
    }).collect();
    let mut piv_row = 0;
    let zero = Q::from_integer(0);
    for c in 0..k {
        let s = (piv_row..rows).find(|&i| m[i][c] != zero)?;
        m.swap(piv_row, s);
        let pv = m[piv_row][c];
        for x in m[piv_row].iter_mut() {
            *x /= pv;
        }
        for i in 0..rows {
            if i != piv_row && m[i][c] != zero {
                let f = m[i][c];
                for j in 0..=k {
                    let t = m[piv_row][j] * f;
                    m[i][j] -= t;
                }
            }
        }
        piv_row += 1;
    }
    if m[piv_row..].iter().any(|r| r[k] != zero) {
        return None;
    }
    Some((0..k).map(|i| m[i][k]).collect())
}

/// Whether `x` is a convex combination of `pts` (exact).
pub fn in_convex_hull(x: &[i64], pts: &[Vec<i64>]) -> bool {
    let dim = x.len();
    let uniq: Vec<Vec<i64>> = pts.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let zero = Q::from_integer(0);
    let mut idx: Vec<Vec<usize>> = vec![vec![]];
    for size in 1..=(dim + 1).min(uniq.len()) {
        idx = if size == 1 {
            (0..uniq.len()).map(|i| vec![i]).collect()
        } else {
            idx.iter().flat_map(|s| (s[s.len() - 1] + 1..uniq.len()).map(move |j| [s.clone(), vec![j]].concat())).collect()
        };
        for s in &idx {
            // [pts; 1] t = [x; 1], solved only for affinely independent subsets
            let a: Vec<Vec<Q>> = (0..=dim)
                .map(|r| s.iter().map(|&i| Q::from_integer(if r < dim { uniq[i][r] } else { 1 })).collect())
                .collect();
            let b: Vec<Q> = (0..=dim).map(|r| Q::from_integer(if r < dim { x[r] } else { 1 })).collect();
            if let Some(t) = solve_q(a, b) {
                if t.iter().all(|v| *v >= zero) {
                    return true;
                }
            }
        }
    }
    false
}

/// All permutations of `v`.
pub fn permutations(v: &[i64]) -> Vec<Vec<i64>> {
    if v.len() <= 1 {
        return vec![v.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..v.len() {
        let mut rest = v.to_vec();
        let x = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, x);
            out.push(tail);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Unitary groups

/// `#{g in GL_m(F_{p^2}) : sigma(g)^T g = 1}` by enumeration.
pub fn unitary_group_order(p: u64, m: usize) -> u64 {
    let k = Ring::field(p, 2).unwrap();
    let q = k.residue_size();
    let total = q.pow((m * m) as u32);
    let id = Mat::identity(&k, m);
    let mut count = 0;
    for idx in 0..total {
        let mut x = idx;
        let g = Mat::from_fn(m, m, |_, _| {
            let e = k.element(x % q);
            x /= q;
            e
        });
        if g.frobenius(&k, 1).transpose().mul(&k, &g) == id {
            count += 1;
        }
    }
    count
}

// ---------------------------------------------------------------------------
// Incidence model

/// Normalized points of `P^{n-1}(k)`.
pub fn projective_points(k: &Ring, n: usize) -> Vec<Vec<Elem>> {
    let q = k.residue_size();
    let mut out = Vec::new();
    for idx in 1..q.pow(n as u32) {
        let mut x = idx;
        let v: Vec<Elem> = (0..n)
            .map(|_| {
                let e = k.element(x % q);
                x /= q;
                e
            })
            .collect();
        if v.iter().find(|e| !k.is_zero(**e)) == Some(&k.one()) {
            out.push(v);
        }
    }
    out
}

fn rank_of(k: &Ring, cols: &[Vec<Elem>]) -> usize {
    if cols.is_empty() {
        return 0;
    }
    Mat::from_cols(cols[0].len(), cols).rank(k)
}

fn spans_same_line(k: &Ring, y: &[Elem], h: &[Elem]) -> bool {
    rank_of(k, &[y.to_vec(), h.to_vec()]) == 1
}

fn in_image(k: &Ring, a: &Mat, h: &[Elem]) -> bool {
    let cols = a.columns();
    let mut with = cols.clone();
    with.push(h.to_vec());
    rank_of(k, &with) == rank_of(k, &cols)
}

#[derive(Debug, Default, PartialEq, Eq)]
pub struct IncidenceTally {
    pub z: u64,
    pub z_prime: u64,
    pub z_double_prime: u64,
    pub union: u64,
    /// `|Z ∩ Z'|`, `|Z ∩ Z''|`, `|Z' ∩ Z''|`, `|Z ∩ Z' ∩ Z''|`.
    pub overlaps: [u64; 4],
}

/// Point counts of the three closures and of their union.
pub fn incidence_tally(pm: &PairModule) -> IncidenceTally {
    let k = &pm.ring;
    let pts = projective_points(k, pm.n);
    let zero = |v: &[Elem]| v.iter().all(|e| k.is_zero(*e));
    let mut t = IncidenceTally::default();
    for h in &pts {
        let uh = pm.u.apply(k, h);
        for hp in &pts {
            let vh = pm.v.apply(k, hp);
            let z = if zero(&uh) { in_image(k, &pm.u, hp) } else { spans_same_line(k, &uh, hp) };
            let zp = if zero(&vh) { in_image(k, &pm.v, h) } else { spans_same_line(k, &vh, h) };
            let zpp = zero(&uh) && zero(&vh);
            t.z += u64::from(z);
            t.z_prime += u64::from(zp);
            t.z_double_prime += u64::from(zpp);
            t.union += u64::from(z || zp || zpp);
            t.overlaps[0] += u64::from(z && zp);
            t.overlaps[1] += u64::from(z && zpp);
            t.overlaps[2] += u64::from(zp && zpp);
            t.overlaps[3] += u64::from(z && zp && zpp);
        }
    }
    t
}

/// Direct count of `(H, H')` with `u(H) ⊆ H'` and `v(H') ⊆ H`.
pub fn incidence_direct(pm: &PairModule) -> u64 {
    let k = &pm.ring;
    let pts = projective_points(k, pm.n);
    let mut c = 0;
    for h in &pts {
        let uh = pm.u.apply(k, h);
        for hp in &pts {
            let vh = pm.v.apply(k, hp);
            let ok_u = rank_of(k, &[uh.clone(), hp.clone()]) == 1;
            let ok_v = rank_of(k, &[vh.clone(), h.clone()]) == 1;
            c += u64::from(ok_u && ok_v);
        }
    }
    c
}
