//! Generalized braids and the lattice operators `𝓕`, `𝓥`.
//!
//! Everything here lives over `Z_p`: the structure constants of a generalized
//! braid are integers and `sigma` is trivial on them, so lattices of the form
//! `𝓕^α 𝓥^β N` are already defined over `Z_p`.
//!
//! A lattice `N ⊆ L ⊆ p^{-S} N` is stored per degree as the canonical Hermite
//! form of `p^S L` in the basis of `N`: lower triangular, diagonal `p^{v_i}`,
//! entries below the diagonal reduced modulo the pivot of their row.

use std::collections::{HashSet, VecDeque};

use crate::dieudonne::{GradedDieudonne, UnitaryDModule};
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::ring::Ring;
use crate::smith::smith_over_witt;

pub type IntMat = Vec<Vec<i128>>;

fn ipow(p: i128, e: u32) -> i128 {
    p.pow(e)
}

fn val(p: i128, mut x: i128) -> u32 {
    debug_assert!(x != 0);
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

fn mod_inv(a: i128, m: i128) -> i128 {
    let (mut r0, mut r1) = (a.rem_euclid(m), m);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1, "not a unit");
    s0.rem_euclid(m)
}

fn mat_vec(a: &IntMat, x: &[i128]) -> Vec<i128> {
    a.iter().map(|row| row.iter().zip(x).map(|(u, v)| u * v).sum()).collect()
}

fn mat_mul(a: &IntMat, b: &IntMat) -> IntMat {
    let (n, k, m) = (a.len(), b.len(), b.first().map_or(0, Vec::len));
    (0..n).map(|i| (0..m).map(|j| (0..k).map(|t| a[i][t] * b[t][j]).sum()).collect()).collect()
}

/// Generalized braid with half-length `m`, defect `l` and jump `a`, on
/// `e_1..e_{2m}` (degree 0) and `f_1..f_{2m}` (degree 1), indices mod `2m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenBraid {
    pub p: u64,
    pub m: usize,
    pub l: u32,
    pub a: usize,
    f01: IntMat,
    f10: IntMat,
    v01: IntMat,
    v10: IntMat,
    gram_exp: Vec<u32>,
}

impl GenBraid {
    pub fn new(p: u64, m: usize, l: u32, a: usize) -> Result<GenBraid> {
        if m == 0 || a >= m {
            return Err(Error::InvalidParams(format!("need m >= 1 and 0 <= a <= m - 1, got m = {m}, a = {a}")));
        }
        if p < 2 || p > 1 << 20 {
            return Err(Error::InvalidParams(format!("unsupported prime {p}")));
        }
        let n = 2 * m;
        let pi = p as i128;
        // 1-based index i sits in slot i - 1; index 0 means 2m.
        let slot = |i: usize| (i + n - 1) % n;
        let (mut f01, mut f10, mut v01, mut v10) =
            (vec![vec![0; n]; n], vec![vec![0; n]; n], vec![vec![0; n]; n], vec![vec![0; n]; n]);
        for i in 1..=n {
            // F e_i = p^{[i=1]} f_{i-1},  F f_i = p^{1-[i=2a+1]} e_{i-1}
            f01[slot(i - 1)][slot(i)] = if i == 1 { pi } else { 1 };
            f10[slot(i - 1)][slot(i)] = if i == 2 * a + 1 { 1 } else { pi };
            // V e_i = p^{[i+1=2a+1]} f_{i+1},  V f_i = p^{1-[i+1=1]} e_{i+1}
            v01[slot(i + 1)][slot(i)] = if (i + 1) % n == (2 * a + 1) % n { pi } else { 1 };
            v10[slot(i + 1)][slot(i)] = if (i + 1) % n == 1 % n { 1 } else { pi };
        }
        let gram_exp = (1..=n).map(|i| l + u32::from(i <= 2 * a)).collect();
        let gb = GenBraid { p, m, l, a, f01, f10, v01, v10, gram_exp };
        gb.check()?;
        Ok(gb)
    }

    /// Rank `2m` of each graded piece.
    pub fn rank(&self) -> usize {
        2 * self.m
    }

    pub fn gram_exponents(&self) -> &[u32] {
        &self.gram_exp
    }

    /// Diagonal of the Gram block `<e_i, f_i>`.
    pub fn gram_diag(&self) -> Vec<i128> {
        let p = self.p as i128;
        self.gram_exp.iter().enumerate().map(|(i, &e)| if i % 2 == 0 { ipow(p, e) } else { -ipow(p, e) }).collect()
    }

    /// `(F: deg 0 -> deg 1, F: deg 1 -> deg 0)`.
    pub fn f_blocks(&self) -> (&IntMat, &IntMat) {
        (&self.f01, &self.f10)
    }

    pub fn v_blocks(&self) -> (&IntMat, &IntMat) {
        (&self.v01, &self.v10)
    }

    /// Length of `N^t / N`.
    pub fn dual_length(&self) -> u32 {
        2 * self.gram_exp.iter().sum::<u32>()
    }

    pub fn is_quasi_braid(&self) -> bool {
        self.a == 0
    }

    pub fn is_braid(&self) -> bool {
        self.a == 0 && self.l == 0
    }

    fn check(&self) -> Result<()> {
        let n = self.rank();
        let pid: IntMat = (0..n).map(|i| (0..n).map(|j| if i == j { self.p as i128 } else { 0 }).collect()).collect();
        for prod in [
            mat_mul(&self.f10, &self.v01),
            mat_mul(&self.f01, &self.v10),
            mat_mul(&self.v10, &self.f01),
            mat_mul(&self.v01, &self.f10),
        ] {
            if prod != pid {
                return Err(Error::InvariantViolation("FV = VF = p fails on the generalized braid".into()));
            }
        }
        // -(G F01)^T = G V01 and F10^T G = -G V10 with G diagonal
        let g = self.gram_diag();
        for i in 0..n {
            for j in 0..n {
                let ok0 = -(g[j] * self.f01[j][i]) == g[i] * self.v01[i][j];
                let ok1 = self.f10[j][i] * g[j] == -(g[i] * self.v10[i][j]);
                if !ok0 || !ok1 {
                    return Err(Error::InvariantViolation("pairing is incompatible with F and V".into()));
                }
            }
        }
        Ok(())
    }

    /// The module over a Witt ring; its Gram block is perfect only for a braid.
    pub fn to_module(&self, r: &Ring) -> Result<UnitaryDModule> {
        if r.p() != self.p {
            return Err(Error::InvalidParams("ring has a different residue characteristic".into()));
        }
        let n = self.rank();
        let conv = |a: &IntMat| Mat::from_fn(a.len(), a[0].len(), |i, j| r.from_int(a[i][j] as i64));
        let g = self.gram_diag();
        let gram = Mat::from_fn(n, n, |i, j| if i == j { r.from_int(g[i] as i64) } else { r.zero() });
        let graded = GradedDieudonne::new(r, conv(&self.f01), conv(&self.f10), conv(&self.v01), conv(&self.v10))?;
        UnitaryDModule::new(graded, gram)
    }
}

/// A graded lattice `N ⊆ L ⊆ p^{-S} N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IsoLattice {
    p: u64,
    scale: u32,
    basis: [IntMat; 2],
    vals: [Vec<u32>; 2],
}

fn hermite(p: i128, s: u32, n: usize, gens: &[Vec<i128>]) -> (IntMat, Vec<u32>) {
    let pm = ipow(p, s);
    let reduce = |c: &mut Vec<i128>| c.iter_mut().for_each(|x| *x = x.rem_euclid(pm));
    let mut pool: Vec<Vec<i128>> = gens
        .iter()
        .map(|g| {
            let mut c = g.clone();
            reduce(&mut c);
            c
        })
        .filter(|c| c.iter().any(|&x| x != 0))
        .collect();
    let mut cols = Vec::with_capacity(n);
    let mut vals = Vec::with_capacity(n);
    for i in 0..n {
        let best = pool.iter().enumerate().filter(|(_, c)| c[i] != 0).min_by_key(|(_, c)| val(p, c[i])).map(|(k, _)| k);
        let Some(k) = best else {
            let mut c = vec![0; n];
            c[i] = pm;
            cols.push(c);
            vals.push(s);
            continue;
        };
        let mut c = pool.swap_remove(k);
        let v = val(p, c[i]);
        let pv = ipow(p, v);
        let uinv = mod_inv(c[i] / pv, pm);
        c.iter_mut().for_each(|x| *x = (*x * uinv).rem_euclid(pm));
        for o in pool.iter_mut() {
            if o[i] != 0 {
                let q = o[i] / pv;
                for (x, y) in o.iter_mut().zip(&c) {
                    *x = (*x - q * y).rem_euclid(pm);
                }
            }
        }
        let extra: Vec<i128> = c.iter().map(|x| (x * ipow(p, s - v)).rem_euclid(pm)).collect();
        pool.push(extra);
        pool.retain(|c| c.iter().any(|&x| x != 0));
        cols.push(c);
        vals.push(v);
    }
    // reduce below-diagonal entries modulo the pivot of their row
    for i in 0..n {
        for r in i + 1..n {
            let q = cols[i][r].div_euclid(ipow(p, vals[r]));
            if q != 0 {
                let cr = cols[r].clone();
                for (t, y) in cr.iter().enumerate().skip(r) {
                    cols[i][t] -= q * y;
                }
                for t in r + 1..n {
                    cols[i][t] = cols[i][t].rem_euclid(pm);
                }
            }
        }
    }
    (cols, vals)
}

impl IsoLattice {
    /// The lattice spanned by `p^{-S}` times the given integer generators and `N`.
    pub fn from_generators(p: u64, scale: u32, n: usize, gens: [&[Vec<i128>]; 2]) -> IsoLattice {
        let pi = p as i128;
        let base: Vec<Vec<i128>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { ipow(pi, scale) } else { 0 }).collect()).collect();
        let mk = |g: &[Vec<i128>]| {
            let all: Vec<Vec<i128>> = g.iter().cloned().chain(base.iter().cloned()).collect();
            hermite(pi, scale, n, &all)
        };
        let (b0, v0) = mk(gens[0]);
        let (b1, v1) = mk(gens[1]);
        IsoLattice { p, scale, basis: [b0, b1], vals: [v0, v1] }
    }

    /// `N` itself, inside `p^{-S} N`.
    pub fn base(gb: &GenBraid, scale: u32) -> IsoLattice {
        IsoLattice::from_generators(gb.p, scale, gb.rank(), [&[], &[]])
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn rank(&self) -> usize {
        self.vals[0].len()
    }

    /// Basis columns of `p^S L_d` in the basis of `N_d`.
    pub fn basis(&self, d: usize) -> &IntMat {
        &self.basis[d]
    }

    /// Length of `L_d / N_d`.
    pub fn index(&self, d: usize) -> u32 {
        self.vals[d].iter().map(|v| self.scale - v).sum()
    }

    /// Length of `L / N`.
    pub fn length(&self) -> u32 {
        self.index(0) + self.index(1)
    }

    /// Whether `p^{-S} x` lies in `L_d`.
    pub fn contains(&self, d: usize, x: &[i128]) -> bool {
        let p = self.p as i128;
        let pm = ipow(p, self.scale);
        let mut y: Vec<i128> = x.iter().map(|v| v.rem_euclid(pm)).collect();
        for (i, col) in self.basis[d].iter().enumerate() {
            let pv = ipow(p, self.vals[d][i]);
            if y[i] % pv != 0 {
                return false;
            }
            let q = y[i] / pv;
            for (t, c) in col.iter().enumerate().skip(i) {
                y[t] = (y[t] - q * c).rem_euclid(pm);
            }
        }
        true
    }

    pub fn contains_lattice(&self, other: &IsoLattice) -> bool {
        assert_eq!(self.scale, other.scale, "lattices at different scales");
        (0..2).all(|d| other.basis[d].iter().all(|c| self.contains(d, c)))
    }

    /// The same lattice inside `p^{-S'} N`.
    pub fn rescale(&self, scale: u32) -> IsoLattice {
        let n = self.rank();
        let p = self.p as i128;
        let lift = |d: usize| -> Vec<Vec<i128>> {
            self.basis[d]
                .iter()
                .map(|c| {
                    c.iter()
                        .map(|&x| if scale >= self.scale { x * ipow(p, scale - self.scale) } else { x / ipow(p, self.scale - scale) })
                        .collect()
                })
                .collect()
        };
        assert!(scale >= self.scale || self.vals.iter().flatten().all(|&v| v >= self.scale - scale), "lattice does not fit");
        let (g0, g1) = (lift(0), lift(1));
        IsoLattice::from_generators(self.p, scale, n, [&g0, &g1])
    }
}

fn div_p(p: i128, v: Vec<i128>) -> Result<Vec<i128>> {
    if v.iter().any(|x| x % p != 0) {
        return Err(Error::InsufficientPrecision("lattice leaves p^-S N; raise the scale".into()));
    }
    Ok(v.into_iter().map(|x| x / p).collect())
}

fn enlarge(gb: &GenBraid, l: &IsoLattice, a10: &IntMat, a01: &IntMat) -> Result<IsoLattice> {
    let p = gb.p as i128;
    let sq = mat_mul(a01, a10);
    let mut g0 = l.basis[0].clone();
    let mut g1 = l.basis[1].clone();
    for c in &l.basis[1] {
        g0.push(div_p(p, mat_vec(a10, c))?);
        g1.push(div_p(p, mat_vec(&sq, c))?);
    }
    Ok(IsoLattice::from_generators(gb.p, l.scale, gb.rank(), [&g0, &g1]))
}

/// `𝓕(L) = L + F^{-1} L_1 + V F^{-1} L_1`, with `F^{-1} = p^{-1} V`.
pub fn f_op(gb: &GenBraid, l: &IsoLattice) -> Result<IsoLattice> {
    enlarge(gb, l, &gb.v10, &gb.v01)
}

/// `𝓥(L) = L + V^{-1} L_1 + F V^{-1} L_1`, with `V^{-1} = p^{-1} F`.
pub fn v_op(gb: &GenBraid, l: &IsoLattice) -> Result<IsoLattice> {
    enlarge(gb, l, &gb.f10, &gb.f01)
}

pub fn is_stable(gb: &GenBraid, l: &IsoLattice) -> bool {
    let maps = [(&gb.f01, 0, 1), (&gb.v01, 0, 1), (&gb.f10, 1, 0), (&gb.v10, 1, 0)];
    maps.iter().all(|(a, src, dst)| l.basis[*src].iter().all(|c| l.contains(*dst, &mat_vec(a, c))))
}

/// `L ⊆ N^t`.
pub fn within_dual(gb: &GenBraid, l: &IsoLattice) -> bool {
    let p = gb.p as i128;
    let e = gb.gram_exponents();
    (0..2).all(|d| {
        l.basis[d].iter().all(|c| c.iter().zip(e).all(|(&x, &ei)| ei >= l.scale || x % ipow(p, l.scale - ei) == 0))
    })
}

/// Signature of a V-stable lattice: `(len L_0 / V L_1, len L_1 / V L_0)`.
pub fn signature(gb: &GenBraid, l: &IsoLattice) -> (usize, usize) {
    let (i0, i1) = (l.index(0) as usize, l.index(1) as usize);
    (gb.rank() - 1 + i0 - i1, 1 + i1 - i0)
}

/// `λ` with `L^t = p^{-λ} L`, if the Gram matrix of `L` is a scalar
/// multiple of a unimodular one.
pub fn duality_exponent(gb: &GenBraid, l: &IsoLattice) -> Result<Option<i64>> {
    let n = gb.rank();
    let k = 2 * l.scale + gb.l + 2;
    let ring = Ring::witt(gb.p, 1, k).map_err(|_| Error::CapExceeded(format!("p^{k} exceeds the integer range")))?;
    let g = gb.gram_diag();
    let pk = ring.pn() as i128;
    let (x0, x1) = (&l.basis[0], &l.basis[1]);
    let gm = Mat::from_fn(n, n, |i, j| {
        let s: i128 = (0..n).map(|t| x0[i][t] * g[t] * x1[j][t]).sum();
        ring.from_int(s.rem_euclid(pk) as i64)
    });
    let ed = smith_over_witt(&ring, &gm)?;
    if ed.iter().all(|&e| e == ed[0]) { Ok(Some(ed[0] as i64 - 2 * l.scale as i64)) } else { Ok(None) }
}

/// Membership in `𝓜`: stable, signature `(2m-1, 1)`, self-dual up to
/// scaling. Returns `λ`.
pub fn membership(gb: &GenBraid, l: &IsoLattice) -> Result<Option<i64>> {
    if !is_stable(gb, l) || signature(gb, l) != (gb.rank() - 1, 1) {
        return Ok(None);
    }
    duality_exponent(gb, l)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeRecord {
    pub lattice: IsoLattice,
    pub alpha: usize,
    pub beta: usize,
    pub lambda: i64,
}

/// Reduction of `L` as a graded Dieudonné space over `F_p`, in the basis of `L`.
pub fn reduction_space(gb: &GenBraid, l: &IsoLattice) -> Result<GradedDieudonne> {
    let p = gb.p as i128;
    let k = Ring::field(gb.p, 1)?;
    let n = gb.rank();
    // coordinates of A * (basis of src) in the basis of dst, by triangular solve
    let coords = |a: &IntMat, src: usize, dst: usize| -> Result<Mat> {
        let mut out = Mat::zeros(n, n);
        for (j, c) in l.basis[src].iter().enumerate() {
            let mut y = mat_vec(a, c);
            for (i, col) in l.basis[dst].iter().enumerate() {
                let piv = col[i];
                if y[i] % piv != 0 {
                    return Err(Error::InvariantViolation("lattice is not F/V-stable".into()));
                }
                let q = y[i] / piv;
                for (t, x) in col.iter().enumerate().skip(i) {
                    y[t] -= q * x;
                }
                out[(i, j)] = k.from_int(q.rem_euclid(p) as i64);
            }
        }
        Ok(out)
    };
    GradedDieudonne::new(&k, coords(&gb.f01, 0, 1)?, coords(&gb.f10, 1, 0)?, coords(&gb.v01, 0, 1)?, coords(&gb.v10, 1, 0)?)
}

/// Every lattice of `𝓜` between `N` and `N^t` reachable as `𝓕^α 𝓥^β N`,
/// in breadth-first order of `α + β`.
pub fn enumerate_lattices(gb: &GenBraid) -> Result<Vec<LatticeRecord>> {
    enumerate_lattices_at_scale(gb, gb.l + 3)
}

pub fn enumerate_lattices_at_scale(gb: &GenBraid, scale: u32) -> Result<Vec<LatticeRecord>> {
    if scale < gb.l + 2 {
        return Err(Error::InsufficientPrecision(format!("scale {scale} is below l + 2")));
    }
    let start = IsoLattice::base(gb, scale);
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([(start, 0usize, 0usize)]);
    let mut out = Vec::new();
    while let Some((l, alpha, beta)) = queue.pop_front() {
        // 𝓕 and 𝓥 only enlarge, so nothing beyond N^t comes back
        if !within_dual(gb, &l) {
            continue;
        }
        if let Some(lambda) = membership(gb, &l)? {
            out.push(LatticeRecord { lattice: l.clone(), alpha, beta, lambda });
        }
        for (next, a, b) in [(f_op(gb, &l)?, alpha + 1, beta), (v_op(gb, &l)?, alpha, beta + 1)] {
            if seen.insert(next.clone()) {
                queue.push_back((next, a, b));
            }
        }
    }
    Ok(out)
}
