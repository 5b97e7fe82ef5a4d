//! Pairs `(u, v)` of maps `N -> N'`, `N' -> N` with `uv = vu = 0`: rank
//! invariants, the normal form, automorphism counts and the incidence model.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::limits;
use crate::matrix::Mat;
use crate::ring::{Elem, Ring};
use crate::semilinear::{SemilinearSystem, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairModule {
    pub ring: Ring,
    pub n: usize,
    pub u: Mat,
    pub v: Mat,
    /// Multiplicator; only recorded, since `p^c = 0` in characteristic p.
    pub c: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct XiInvariant {
    pub m: usize,
    pub l: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    pub psi: Mat,
    pub psi_prime: Mat,
    pub u: Mat,
    pub v: Mat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidencePoint {
    pub h: Vec<Elem>,
    pub h_prime: Vec<Elem>,
}

/// Which of `Z`, `Z'`, `Z''` are nonempty.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Component {
    Z,
    ZPrime,
    ZDoublePrime,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentStructure {
    pub components: Vec<Component>,
}

impl ComponentStructure {
    pub fn label(&self) -> &'static str {
        ["none", "one", "two", "three"][self.components.len()]
    }
}

/// `F_q` for a prime power `q`.
pub fn field_of_order(q: u64) -> Result<Ring> {
    let p = (2..=q).find(|d| q % d == 0).ok_or_else(|| Error::InvalidParams(format!("q = {q} is not a prime power")))?;
    let (mut x, mut k) = (q, 0);
    while x % p == 0 {
        x /= p;
        k += 1;
    }
    if x != 1 {
        return Err(Error::InvalidParams(format!("q = {q} is not a prime power")));
    }
    Ring::field(p, k)
}

impl PairModule {
    pub fn new(ring: &Ring, u: Mat, v: Mat, c: u32) -> Result<PairModule> {
        if !ring.is_field() {
            return Err(Error::InvalidParams("pairs live over a finite field".into()));
        }
        let n = u.rows();
        if !u.is_square() || (v.rows(), v.cols()) != (n, n) {
            return Err(Error::Schema("u and v must be square of the same size".into()));
        }
        if c == 0 {
            return Err(Error::InvalidParams("the multiplicator must be positive".into()));
        }
        if !u.mul(ring, &v).is_zero() || !v.mul(ring, &u).is_zero() {
            return Err(Error::InvariantViolation("uv and vu must vanish".into()));
        }
        Ok(PairModule { ring: ring.clone(), n, u, v, c })
    }

    /// Transport along `psi: N -> N`, `psi': N' -> N'`:
    /// `(psi' u psi^{-1}, psi v psi'^{-1})`.
    pub fn transport(&self, psi: &Mat, psi_prime: &Mat) -> Result<PairModule> {
        let r = &self.ring;
        let u = psi_prime.mul(r, &self.u).mul(r, &psi.inverse(r)?);
        let v = psi.mul(r, &self.v).mul(r, &psi_prime.inverse(r)?);
        PairModule::new(r, u, v, self.c)
    }
}

pub fn xi(pm: &PairModule) -> XiInvariant {
    XiInvariant { m: pm.u.rank(&pm.ring), l: pm.v.rank(&pm.ring) }
}

pub fn in_xi_set(m: usize, l: usize, n: usize) -> bool {
    m + l <= n
}

/// `U = diag(I_m, 0)`, `V` the identity on coordinates `m..m+l`.
pub fn normal_pair(r: &Ring, n: usize, m: usize, l: usize, c: u32) -> Result<PairModule> {
    if !in_xi_set(m, l, n) {
        return Err(Error::InvalidParams(format!("(m, l) = ({m}, {l}) needs m + l <= n = {n}")));
    }
    let u = Mat::from_fn(n, n, |i, j| if i == j && i < m { r.one() } else { r.zero() });
    let v = Mat::from_fn(n, n, |i, j| if i == j && (m..m + l).contains(&i) { r.one() } else { r.zero() });
    PairModule::new(r, u, v, c)
}

pub fn d_dim(m: usize, l: usize, n: usize) -> Result<usize> {
    if !in_xi_set(m, l, n) {
        return Err(Error::InvalidParams(format!("(m, l) = ({m}, {l}) needs m + l <= n = {n}")));
    }
    Ok(n * n + (n - m - l) * (n - m - l))
}

/// Greedily extends `basis` by candidates that keep it independent.
fn extend_greedy(r: &Ring, basis: &mut Vec<Vec<Elem>>, candidates: impl IntoIterator<Item = Vec<Elem>>, want: usize) {
    for c in candidates {
        if basis.len() >= want {
            break;
        }
        let mut trial = basis.clone();
        trial.push(c.clone());
        let dim = c.len();
        if Mat::from_cols(dim, &trial).rank(r) == trial.len() {
            basis.push(c);
        }
    }
}

fn unit_vectors(r: &Ring, n: usize) -> impl Iterator<Item = Vec<Elem>> + '_ {
    (0..n).map(move |j| (0..n).map(|i| if i == j { r.one() } else { r.zero() }).collect())
}

/// `psi`, `psi'` with `psi' u psi^{-1} = U` and `psi v psi'^{-1} = V`.
pub fn normal_form(pm: &PairModule) -> Result<NormalForm> {
    let r = &pm.ring;
    let n = pm.n;
    if !pm.u.mul(r, &pm.v).is_zero() || !pm.v.mul(r, &pm.u).is_zero() {
        return Err(Error::InvariantViolation("uv and vu must vanish".into()));
    }
    let XiInvariant { m, l } = xi(pm);
    // b_1..b_m: unit vectors with independent u-images; c_i = u(b_i)
    let mut bs: Vec<Vec<Elem>> = Vec::new();
    let mut us: Vec<Vec<Elem>> = Vec::new();
    for e in unit_vectors(r, n) {
        if bs.len() == m {
            break;
        }
        let ue = pm.u.apply(r, &e);
        let mut trial = us.clone();
        trial.push(ue.clone());
        if Mat::from_cols(n, &trial).rank(r) == trial.len() {
            bs.push(e);
            us = trial;
        }
    }
    let mut cs = us;
    // c_{m+1..m+l}: unit vectors with independent v-images; b = v(c)
    let mut vs: Vec<Vec<Elem>> = Vec::new();
    for e in unit_vectors(r, n) {
        if vs.len() == l {
            break;
        }
        let ve = pm.v.apply(r, &e);
        let mut trial = vs.clone();
        trial.push(ve.clone());
        if Mat::from_cols(n, &trial).rank(r) == trial.len() {
            cs.push(e);
            vs = trial;
        }
    }
    bs.extend(vs);
    // complete b inside ker u, and c inside ker v
    extend_greedy(r, &mut bs, pm.u.kernel(r).columns(), n);
    extend_greedy(r, &mut cs, pm.v.kernel(r).columns(), n);
    if bs.len() != n || cs.len() != n {
        return Err(Error::InvariantViolation("normal form bases are incomplete".into()));
    }
    let b = Mat::from_cols(n, &bs);
    let c = Mat::from_cols(n, &cs);
    let psi = b.inverse(r)?;
    let psi_prime = c.inverse(r)?;
    let u = psi_prime.mul(r, &pm.u).mul(r, &b);
    let v = psi.mul(r, &pm.v).mul(r, &c);
    let target = normal_pair(r, n, m, l, pm.c)?;
    if u != target.u || v != target.v {
        return Err(Error::InvariantViolation("normal form does not reproduce U and V".into()));
    }
    Ok(NormalForm { psi, psi_prime, u, v })
}

/// Addition and multiplication tables of a small field, on canonical indices.
struct Tables {
    q: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
}

impl Tables {
    fn new(r: &Ring) -> Result<Tables> {
        let q = r.residue_size() as usize;
        if q > 256 {
            return Err(Error::CapExceeded(format!("field of size {q} is too large for table arithmetic")));
        }
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            for b in 0..q {
                let (x, y) = (r.element(a as u64), r.element(b as u64));
                add[a * q + b] = r.index_of(r.add(x, y)) as u8;
                mul[a * q + b] = r.index_of(r.mul(x, y)) as u8;
            }
        }
        Ok(Tables { q, add, mul })
    }

    fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q + b as usize]
    }

    fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q + b as usize]
    }

    fn neg(&self, a: u8) -> u8 {
        (0..self.q as u8).find(|&b| self.add(a, b) == 0).expect("additive inverse")
    }

    /// Nonzero determinant test for `n <= 3`, on a row-major slice.
    fn invertible(&self, m: &[u8], n: usize, negs: &[u8]) -> bool {
        let (a, s) = (|x: u8, y: u8| self.add(x, y), |x: u8, y: u8| self.mul(x, y));
        match n {
            1 => m[0] != 0,
            2 => a(s(m[0], m[3]), negs[s(m[1], m[2]) as usize]) != 0,
            3 => {
                let minor = |i: usize, j: usize, k: usize, l: usize| a(s(m[i], m[l]), negs[s(m[j], m[k]) as usize]);
                let t0 = s(m[0], minor(4, 5, 7, 8));
                let t1 = negs[s(m[1], minor(3, 5, 6, 8)) as usize];
                let t2 = s(m[2], minor(3, 4, 6, 7));
                a(a(t0, t1), t2) != 0
            }
            _ => unreachable!("table determinants are limited to n <= 3"),
        }
    }
}

/// Number of `(psi, psi') in GL_n(F_q)^2` with `psi' u = u psi` and
/// `psi v = v psi'`, by exhaustive enumeration of the linear solution space.
pub fn pair_aut_count(pm: &PairModule, q: u64) -> Result<u128> {
    let k = field_of_order(q)?;
    let pm = if k == pm.ring {
        pm.clone()
    } else {
        let emb = pm.ring.embedding_into(&k)?;
        let app = |a: &Mat| a.map(|e| emb.apply(e));
        PairModule::new(&k, app(&pm.u), app(&pm.v), pm.c)?
    };
    let n = pm.n;
    if n > 3 {
        return Err(Error::CapExceeded(format!("pair automorphism counts are limited to n <= 3, got {n}")));
    }
    let id = Mat::identity(&k, n);
    let mut sys = SemilinearSystem::new(&k);
    let psi = sys.unknown(n, n);
    let psi_p = sys.unknown(n, n);
    let term = |left: &Mat, unknown: usize, right: &Mat| Term { left: left.clone(), unknown, twist: 0, right: right.clone() };
    // psi' u - u psi = 0
    sys.equation((n, n), vec![term(&id, psi_p, &pm.u), term(&pm.u.neg(&k), psi, &id)]);
    // psi v - v psi' = 0
    sys.equation((n, n), vec![term(&id, psi, &pm.v), term(&pm.v.neg(&k), psi_p, &id)]);
    let sol = sys.solve()?;
    let p = k.p() as usize;
    limits::checked_space_size(p as u64, sol.dim(), "pair automorphism candidates")?;
    let t = Tables::new(&k)?;
    let negs: Vec<u8> = (0..t.q as u8).map(|a| t.neg(a)).collect();
    let len = 2 * n * n;
    let basis: Vec<Vec<u8>> = sol
        .basis
        .iter()
        .map(|b| {
            let mut flat = Vec::with_capacity(len);
            for m in b {
                flat.extend((0..n * n).map(|i| k.index_of(m[(i / n, i % n)]) as u8));
            }
            flat
        })
        .collect();
    let mut cur = vec![0u8; len];
    let mut digits = vec![0usize; basis.len()];
    let mut count: u128 = 0;
    loop {
        if t.invertible(&cur[..n * n], n, &negs) && t.invertible(&cur[n * n..], n, &negs) {
            count += 1;
        }
        // odometer over F_p coordinates; each increment adds one basis vector
        let mut i = 0;
        loop {
            if i == basis.len() {
                return Ok(count);
            }
            for (c, b) in cur.iter_mut().zip(&basis[i]) {
                *c = t.add(*c, *b);
            }
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Normalized representatives (first nonzero coordinate 1) of `P^{n-1}(F_q)`.
fn projective_points(t: &Tables, n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    for lead in 0..n {
        let free = n - lead - 1;
        let total = t.q.pow(free as u32);
        for idx in 0..total {
            let mut v = vec![0u8; n];
            v[lead] = 1;
            let mut x = idx;
            for c in v.iter_mut().skip(lead + 1) {
                *c = (x % t.q) as u8;
                x /= t.q;
            }
            out.push(v);
        }
    }
    out
}

fn apply_idx(t: &Tables, a: &[Vec<u8>], x: &[u8]) -> Vec<u8> {
    a.iter().map(|row| row.iter().zip(x).fold(0u8, |acc, (&r, &s)| t.add(acc, t.mul(r, s)))).collect()
}

/// `y` lies on the line spanned by the nonzero vector `h`.
fn on_line(t: &Tables, y: &[u8], h: &[u8]) -> bool {
    let lead = h.iter().position(|&c| c != 0).expect("nonzero");
    // h is normalized, so y = y[lead] h
    let s = y[lead];
    y.iter().zip(h).all(|(&a, &b)| a == t.mul(s, b))
}

fn incidence_idx(pm: &PairModule) -> Result<(Tables, Vec<(Vec<u8>, Vec<u8>)>)> {
    let k = &pm.ring;
    let n = pm.n;
    let t = Tables::new(k)?;
    let npts = (t.q as u64).pow(n as u32);
    limits::checked_space_size(npts, 2, "incidence candidates")?;
    let pts = projective_points(&t, n);
    let idx = |a: &Mat| -> Vec<Vec<u8>> { (0..n).map(|i| (0..n).map(|j| k.index_of(a[(i, j)]) as u8).collect()).collect() };
    let (u, v) = (idx(&pm.u), idx(&pm.v));
    let uh: Vec<Vec<u8>> = pts.iter().map(|h| apply_idx(&t, &u, h)).collect();
    let vh: Vec<Vec<u8>> = pts.iter().map(|h| apply_idx(&t, &v, h)).collect();
    let mut out = Vec::new();
    for (i, h) in pts.iter().enumerate() {
        for (j, hp) in pts.iter().enumerate() {
            if on_line(&t, &uh[i], hp) && on_line(&t, &vh[j], h) {
                out.push((h.clone(), hp.clone()));
            }
        }
    }
    Ok((t, out))
}

/// All `(H, H')` in `P(N) x P(N')` with `u(H) ⊆ H'` and `v(H') ⊆ H`.
pub fn incidence_points(pm: &PairModule) -> Result<Vec<IncidencePoint>> {
    let k = &pm.ring;
    let (_, pts) = incidence_idx(pm)?;
    let conv = |v: &[u8]| v.iter().map(|&i| k.element(i as u64)).collect();
    Ok(pts.iter().map(|(h, hp)| IncidencePoint { h: conv(h), h_prime: conv(hp) }).collect())
}

pub fn incidence_count(pm: &PairModule) -> Result<u64> {
    Ok(incidence_idx(pm)?.1.len() as u64)
}

/// Nonempty components of the incidence set for `(m, l)`: `Z` (closure of
/// the graph of `u`), `Z'` (of `v`) and `Z'' = P(ker u) x P(ker v)`, the
/// latter only when it is not contained in the others.
pub fn component_structure(m: usize, l: usize, n: usize) -> Result<ComponentStructure> {
    if !in_xi_set(m, l, n) || n == 0 {
        return Err(Error::InvalidParams(format!("(m, l) = ({m}, {l}) is not admissible for n = {n}")));
    }
    let mut components = Vec::new();
    if m >= 1 {
        components.push(Component::Z);
    }
    if l >= 1 {
        components.push(Component::ZPrime);
    }
    if m + l < n {
        components.push(Component::ZDoublePrime);
    }
    Ok(ComponentStructure { components })
}

/// Points of each component: `(H, H') ∈ Z` iff `H' = u(H)`, or
/// `H ⊆ ker u` and `H' ⊆ im u`; `Z'` likewise with `v`.
pub fn component_counts(pm: &PairModule) -> Result<Vec<(Component, u64)>> {
    let k = &pm.ring;
    let n = pm.n;
    let t = Tables::new(k)?;
    limits::checked_space_size((t.q as u64).pow(n as u32), 2, "incidence candidates")?;
    let pts = projective_points(&t, n);
    let idx = |a: &Mat| -> Vec<Vec<u8>> { (0..n).map(|i| (0..n).map(|j| k.index_of(a[(i, j)]) as u8).collect()).collect() };
    let (u, v) = (idx(&pm.u), idx(&pm.v));
    let im = |a: &Mat| a.column_space(k);
    let (im_u, im_v) = (im(&pm.u), im(&pm.v));
    let in_image = |basis: &Mat, h: &[u8]| {
        let x: Vec<Elem> = h.iter().map(|&i| k.element(i as u64)).collect();
        basis.cols() > 0 && basis.solve(k, &x).is_some()
    };
    let zero = |x: &[u8]| x.iter().all(|&c| c == 0);
    let uh: Vec<Vec<u8>> = pts.iter().map(|h| apply_idx(&t, &u, h)).collect();
    let vh: Vec<Vec<u8>> = pts.iter().map(|h| apply_idx(&t, &v, h)).collect();
    let in_im_u: Vec<bool> = pts.iter().map(|h| in_image(&im_u, h)).collect();
    let in_im_v: Vec<bool> = pts.iter().map(|h| in_image(&im_v, h)).collect();
    let XiInvariant { m, l } = xi(pm);
    let structure = component_structure(m, l, n)?;
    let mut out = Vec::new();
    for comp in structure.components {
        let mut cnt = 0;
        for i in 0..pts.len() {
            for j in 0..pts.len() {
                let hit = match comp {
                    Component::Z => {
                        if zero(&uh[i]) { in_im_u[j] } else { on_line(&t, &uh[i], &pts[j]) }
                    }
                    Component::ZPrime => {
                        if zero(&vh[j]) { in_im_v[i] } else { on_line(&t, &vh[j], &pts[i]) }
                    }
                    Component::ZDoublePrime => zero(&uh[i]) && zero(&vh[j]),
                };
                cnt += u64::from(hit);
            }
        }
        out.push((comp, cnt));
    }
    Ok(out)
}

/// `|P^{d}(F_q)|`, zero for `d < 0`.
pub fn projective_size(q: u64, d: i64) -> u64 {
    if d < 0 { 0 } else { (0..=d as u32).map(|i| q.pow(i)).sum() }
}

/// Growth exponent from counts at two field sizes: `log(c2/c1) / log(q2/q1)`.
pub fn growth_slope(q1: u64, c1: u128, q2: u64, c2: u128) -> f64 {
    ((c2 as f64) / (c1 as f64)).ln() / ((q2 as f64) / (q1 as f64)).ln()
}
