//! Hom and Aut point counts, gD-isomorphism search, and the explicit
//! parametrization of braid automorphisms.



use crate::dieudonne::{braid, GradedDieudonne, UnitaryDSpace};
use crate::error::{Error, Result};
use crate::limits;
use crate::matrix::Mat;
use crate::ring::{Elem, Ring};
use crate::semilinear::{SemilinearSystem, SolutionSpace, Term};

/// `rho/2 - 1` for even `rho`, `n - (rho+1)/2` for odd `rho`.
pub fn dim_aut_formula(rho: usize, n: usize) -> Result<usize> {
    if rho == 0 || rho > n {
        return Err(Error::InvalidParams(format!("need 1 <= rho <= n, got rho = {rho}, n = {n}")));
    }
    Ok(if rho % 2 == 0 { rho / 2 - 1 } else { n - (rho + 1) / 2 })
}

fn extend_graded(g: &GradedDieudonne, degree: usize) -> Result<GradedDieudonne> {
    let r = &g.ring;
    if !r.is_field() {
        return Err(Error::InvalidParams("point counts are taken on spaces over a field".into()));
    }
    if r.degree() == degree {
        return Ok(g.clone());
    }
    let target = Ring::field(r.p(), degree)?;
    Ok(g.extend(&r.embedding_into(&target)?))
}

/// Graded maps `src -> dst` commuting with F and V, as an `F_p`-space.
/// Unknown 0 is the degree-0 block, unknown 1 the degree-1 block.
pub fn hom_gd_space(src: &GradedDieudonne, dst: &GradedDieudonne) -> Result<SolutionSpace> {
    if src.ring != dst.ring {
        return Err(Error::InvalidParams("spaces live over different fields".into()));
    }
    let r = &src.ring;
    let mut sys = SemilinearSystem::new(r);
    let phi0 = sys.unknown(dst.dim0, src.dim0);
    let phi1 = sys.unknown(dst.dim1, src.dim1);
    let id = |n| Mat::identity(r, n);
    // phi1 F01 = F01' sigma(phi0), phi0 F10 = F10' sigma(phi1), and likewise for V with sigma^{-1}.
    let blocks = [
        (phi1, &src.f01, &dst.f01, phi0, 1i64, dst.dim1, src.dim0),
        (phi0, &src.f10, &dst.f10, phi1, 1, dst.dim0, src.dim1),
        (phi1, &src.v01, &dst.v01, phi0, -1, dst.dim1, src.dim0),
        (phi0, &src.v10, &dst.v10, phi1, -1, dst.dim0, src.dim1),
    ];
    for (lhs, a_src, a_dst, rhs, t, rows, cols) in blocks {
        sys.equation(
            (rows, cols),
            vec![
                Term { left: id(rows), unknown: lhs, twist: 0, right: a_src.clone() },
                Term { left: a_dst.neg(r), unknown: rhs, twist: t, right: id(cols) },
            ],
        );
    }
    sys.solve()
}

fn pow_u128(base: u64, exp: usize) -> Result<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base as u128).ok_or_else(|| Error::CapExceeded("count overflows 128 bits".into()))?;
    }
    Ok(acc)
}

/// Number of graded Dieudonné homomorphisms over `F_{p^{2k}}`.
pub fn hom_gd_count(src: &GradedDieudonne, dst: &GradedDieudonne, k: usize) -> Result<u128> {
    let (a, b) = (extend_graded(src, 2 * k)?, extend_graded(dst, 2 * k)?);
    let sol = hom_gd_space(&a, &b)?;
    pow_u128(a.ring.p(), sol.dim())
}

/// Odometer over all `F_p` combinations of a solution basis, maintaining the
/// running sum of each unknown incrementally.
struct Odometer<'a> {
    ring: &'a Ring,
    basis: &'a [Vec<Mat>],
    digits: Vec<u64>,
    current: Vec<Mat>,
    started: bool,
}

impl<'a> Odometer<'a> {
    fn new(sol: &'a SolutionSpace) -> Odometer<'a> {
        Odometer {
            ring: &sol.ring,
            basis: &sol.basis,
            digits: vec![0; sol.dim()],
            current: sol.shapes.iter().map(|&(a, b)| Mat::zeros(a, b)).collect(),
            started: false,
        }
    }

    fn advance(&mut self) -> Option<&[Mat]> {
        if !self.started {
            self.started = true;
            return Some(&self.current);
        }
        let p = self.ring.p();
        for j in 0..self.digits.len() {
            for (c, b) in self.current.iter_mut().zip(&self.basis[j]) {
                *c = c.add(self.ring, b);
            }
            self.digits[j] += 1;
            if self.digits[j] < p {
                return Some(&self.current);
            }
            self.digits[j] = 0;
        }
        None
    }
}

fn is_isometry(r: &Ring, phi0: &Mat, g2_phi1: &Mat, g1: &Mat) -> bool {
    // phi0^T (G2 phi1) == G1, checked entry by entry with early exit.
    for i in 0..g1.rows() {
        for j in 0..g1.cols() {
            let mut acc = r.zero();
            for k in 0..phi0.rows() {
                acc = r.add(acc, r.mul(phi0[(k, i)], g2_phi1[(k, j)]));
            }
            if acc != g1[(i, j)] {
                return false;
            }
        }
    }
    true
}

/// All unitary isomorphisms `sp1 -> sp2` over `F_{p^{2k}}`, as `(phi0, phi1)`.
pub fn unitary_isomorphisms(sp1: &UnitaryDSpace, sp2: &UnitaryDSpace, k: usize) -> Result<Vec<(Mat, Mat)>> {
    let mut out = Vec::new();
    visit_isometries(sp1, sp2, k, |a, b| out.push((a.clone(), b.clone())))?;
    Ok(out)
}

/// Number of unitary isomorphisms `sp1 -> sp2` over `F_{p^{2k}}`.
pub fn isom_count(sp1: &UnitaryDSpace, sp2: &UnitaryDSpace, k: usize) -> Result<u128> {
    if sp1.n() != sp2.n() || sp1.signature() != sp2.signature() {
        return Ok(0);
    }
    let mut count = 0u128;
    visit_isometries(sp1, sp2, k, |_, _| count += 1)?;
    Ok(count)
}

fn visit_isometries(sp1: &UnitaryDSpace, sp2: &UnitaryDSpace, k: usize, mut f: impl FnMut(&Mat, &Mat)) -> Result<()> {
    let a = sp1.extend_to_degree(2 * k)?;
    let b = sp2.extend_to_degree(2 * k)?;
    let r = a.ring().clone();
    let sol = hom_gd_space(&a.graded, &b.graded)?;
    limits::checked_space_size(r.p(), sol.dim(), "isomorphism enumeration")?;
    // Enumerate (phi0, G2 phi1) so the isometry test is a single product.
    let twisted = SolutionSpace {
        ring: r.clone(),
        shapes: vec![sol.shapes[0], (b.gram.rows(), sol.shapes[1].1), sol.shapes[1]],
        basis: sol.basis.iter().map(|v| vec![v[0].clone(), b.gram.mul(&r, &v[1]), v[1].clone()]).collect(),
    };
    if r.residue_size() <= TABLE_FIELD_LIMIT {
        visit_isometries_tabled(&twisted, &a.gram, f);
        return Ok(());
    }
    let mut odo = Odometer::new(&twisted);
    while let Some(cur) = odo.advance() {
        if is_isometry(&r, &cur[0], &cur[1], &a.gram) {
            f(&cur[0], &cur[2]);
        }
    }
    Ok(())
}

/// Fields up to this size use index tables for the isometry search.
const TABLE_FIELD_LIMIT: u64 = 1024;

/// Same search as the generic odometer, on element indices with addition and
/// multiplication tables. Matrices are flattened row-major.
fn visit_isometries_tabled(sol: &SolutionSpace, g1: &Mat, mut f: impl FnMut(&Mat, &Mat)) {
    let r = &sol.ring;
    let q = r.residue_size() as usize;
    let elems: Vec<Elem> = (0..q as u64).map(|i| r.element(i)).collect();
    let mut add = vec![0u16; q * q];
    let mut mul = vec![0u16; q * q];
    for i in 0..q {
        for j in 0..q {
            add[i * q + j] = r.index_of(r.add(elems[i], elems[j])) as u16;
            mul[i * q + j] = r.index_of(r.mul(elems[i], elems[j])) as u16;
        }
    }
    let flat = |m: &Mat| -> Vec<u16> { (0..m.rows() * m.cols()).map(|t| r.index_of(m[(t / m.cols(), t % m.cols())]) as u16).collect() };
    let basis: Vec<Vec<u16>> = sol.basis.iter().map(|b| b.iter().flat_map(flat).collect()).collect();
    let n = g1.rows();
    let (s0, s1) = (n * n, 2 * n * n);
    let target = flat(g1);
    let p = r.p();
    let mut cur = vec![0u16; basis.first().map_or(0, Vec::len)];
    let mut digits = vec![0u64; basis.len()];
    let unflat = |v: &[u16]| Mat::from_fn(n, n, |i, j| elems[v[i * n + j] as usize]);
    loop {
        // phi0^T (G2 phi1) == G1, entry by entry
        let ok = (0..n * n).all(|t| {
            let (i, j) = (t / n, t % n);
            let mut acc = 0u16;
            for k in 0..n {
                let x = mul[cur[k * n + i] as usize * q + cur[s0 + k * n + j] as usize];
                acc = add[acc as usize * q + x as usize];
            }
            acc == target[t]
        });
        if ok {
            f(&unflat(&cur[..s0]), &unflat(&cur[s1..]));
        }
        let mut j = 0;
        loop {
            if j == basis.len() {
                return;
            }
            for (c, b) in cur.iter_mut().zip(&basis[j]) {
                *c = add[*c as usize * q + *b as usize];
            }
            digits[j] += 1;
            if digits[j] < p {
                break;
            }
            digits[j] = 0;
            j += 1;
        }
    }
}

/// Searches for an invertible graded F/V-compatible map `sp1 -> sp2` over
/// `F_{p^{degree}}`, ignoring the pairing. Random sampling, then exhaustive
/// when the space is small.
pub fn find_gd_isomorphism<R: rand::Rng>(
    sp1: &GradedDieudonne,
    sp2: &GradedDieudonne,
    degree: usize,
    rng: &mut R,
    tries: usize,
) -> Result<Option<(Mat, Mat)>> {
    if (sp1.dim0, sp1.dim1) != (sp2.dim0, sp2.dim1) {
        return Ok(None);
    }
    let (a, b) = (extend_graded(sp1, degree)?, extend_graded(sp2, degree)?);
    let r = a.ring.clone();
    let sol = hom_gd_space(&a, &b)?;
    if sol.dim() == 0 {
        return Ok(None);
    }
    let p = r.p();
    for _ in 0..tries {
        let coords: Vec<u64> = (0..sol.dim()).map(|_| rng.gen_range(0..p)).collect();
        let m = sol.combination(&coords);
        if m[0].is_invertible(&r) && m[1].is_invertible(&r) {
            return Ok(Some((m[0].clone(), m[1].clone())));
        }
    }
    if limits::checked_space_size(p, sol.dim(), "gD isomorphism search").is_ok() {
        let mut odo = Odometer::new(&sol);
        while let Some(cur) = odo.advance() {
            if cur[0].is_invertible(&r) && cur[1].is_invertible(&r) {
                return Ok(Some((cur[0].clone(), cur[1].clone())));
            }
        }
    }
    Ok(None)
}

/// Dimension of `Hom_gD(src, dst)` over `F_q` as an `F_q`-space, where the
/// spaces are defined over `F_q`.
pub fn hom_gd_dim(src: &GradedDieudonne, dst: &GradedDieudonne) -> Result<usize> {
    let sol = hom_gd_space(src, dst)?;
    Ok(sol.dim() / src.ring.degree())
}

// ---------------------------------------------------------------------------
// Braid automorphisms

/// `p^n - 1` for even `n`, `p^n + 1` for odd `n`.
pub fn braid_root_order(n: usize, p: u64) -> u64 {
    let pn = p.pow(n as u32);
    if n % 2 == 0 { pn - 1 } else { pn + 1 }
}

/// Indices (1-based) of the `f_j` generating the free part of `m_phi`.
pub fn braid_m_generators(n: usize) -> Vec<usize> {
    let start = if n % 2 == 1 { 2 } else { 3 };
    (start..n).step_by(2).collect()
}

/// Parameters of a braid automorphism: `phi(e_1) = alpha e_1` and
/// `phi(f_1) = alpha^{-1} (f_1 + m)` with `m = sum m_coeffs[i] f_{g_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraidAutParams {
    pub alpha: Elem,
    pub m_coeffs: Vec<Elem>,
}

/// Rebuilds the automorphism of `B(n)` over the field `k` from its parameters.
pub fn braid_aut_from_params(k: &Ring, n: usize, params: &BraidAutParams) -> Result<(Mat, Mat)> {
    if !k.is_field() {
        return Err(Error::InvalidParams("braid automorphisms are built over a field".into()));
    }
    let order = braid_root_order(n, k.p());
    let q = k.residue_size();
    // alpha^order = 1 iff alpha^gcd(order, q-1) = 1; avoid huge exponents.
    let g = num_integer::gcd(order, q - 1);
    if k.is_zero(params.alpha) || k.pow(params.alpha, g) != k.one() {
        return Err(Error::InvalidParams(format!("alpha is not a root of unity of order dividing {order}")));
    }
    let gens = braid_m_generators(n);
    if params.m_coeffs.len() != gens.len() {
        return Err(Error::InvalidParams(format!("expected {} coefficients for m, got {}", gens.len(), params.m_coeffs.len())));
    }
    let sp = braid(k, n)?;
    let gd = &sp.graded;
    let mut phi0 = Mat::zeros(n, n);
    let mut phi1 = Mat::zeros(n, n);
    let alpha_inv = k.inv(params.alpha)?;
    phi0[(0, 0)] = params.alpha;
    let mut f1 = vec![k.zero(); n];
    f1[0] = k.one();
    for (&j, &c) in gens.iter().zip(&params.m_coeffs) {
        f1[j - 1] = c;
    }
    for (i, v) in f1.iter().enumerate() {
        phi1[(i, 0)] = k.mul(alpha_inv, *v);
    }
    let g_phi_f1: Vec<Elem> = sp.gram.apply(k, &phi1.col(0)).iter().map(|&e| k.frobenius(e, 1)).collect();
    for i in 0..n - 1 {
        // phi(f_{i+2}) = V phi(e_{i+1})
        let e_i: Vec<Elem> = phi0.col(i).iter().map(|&e| k.frobenius(e, -1)).collect();
        let img = gd.v01.apply(k, &e_i);
        for (row, v) in img.into_iter().enumerate() {
            phi1[(row, i + 1)] = v;
        }
        // phi(e_{i+2}): F01 z = phi(f_{i+1}) and z^T sigma(G phi(f_1)) = 0, with z = sigma(x).
        let mut a = gd.f01.clone();
        a = a.vstack(&Mat::from_cols(n, &[g_phi_f1.clone()]).transpose());
        let mut rhs = phi1.col(i);
        rhs.push(k.zero());
        if a.rank(k) != n {
            return Err(Error::InvariantViolation("recursion system for phi(e) is not uniquely solvable".into()));
        }
        let z = a.solve(k, &rhs).ok_or_else(|| Error::InvalidParams("parameters admit no automorphism".into()))?;
        for (row, v) in z.into_iter().enumerate() {
            phi0[(row, i + 1)] = k.frobenius(v, -1);
        }
    }
    verify_automorphism(&sp, &phi0, &phi1)?;
    Ok((phi0, phi1))
}

/// Checks that `(phi0, phi1)` is a unitary automorphism of `sp`.
pub fn verify_automorphism(sp: &UnitaryDSpace, phi0: &Mat, phi1: &Mat) -> Result<()> {
    let r = sp.ring();
    let g = &sp.graded;
    let commutes = phi1.mul(r, &g.f01) == g.f01.mul(r, &phi0.frobenius(r, 1))
        && phi0.mul(r, &g.f10) == g.f10.mul(r, &phi1.frobenius(r, 1))
        && phi1.mul(r, &g.v01) == g.v01.mul(r, &phi0.frobenius(r, -1))
        && phi0.mul(r, &g.v10) == g.v10.mul(r, &phi1.frobenius(r, -1));
    if !commutes {
        return Err(Error::InvalidParams("map does not commute with F and V".into()));
    }
    if phi0.transpose().mul(r, &sp.gram).mul(r, phi1) != sp.gram {
        return Err(Error::InvalidParams("map does not preserve the pairing".into()));
    }
    Ok(())
}

/// Reads `(alpha, m)` off an automorphism of `B(n)`.
pub fn braid_aut_extract(k: &Ring, n: usize, phi0: &Mat, phi1: &Mat) -> Result<BraidAutParams> {
    let alpha = phi0[(0, 0)];
    if k.is_zero(alpha) || (1..n).any(|i| !k.is_zero(phi0[(i, 0)])) {
        return Err(Error::InvalidParams("phi(e_1) is not a multiple of e_1".into()));
    }
    let gens = braid_m_generators(n);
    let mut m: Vec<Elem> = phi1.col(0).iter().map(|&e| k.mul(alpha, e)).collect();
    m[0] = k.sub(m[0], k.one());
    for (i, &v) in m.iter().enumerate() {
        if !k.is_zero(v) && !gens.contains(&(i + 1)) {
            return Err(Error::InvalidParams(format!("m has a component on f_{} outside the free part", i + 1)));
        }
    }
    Ok(BraidAutParams { alpha, m_coeffs: gens.iter().map(|&j| m[j - 1]).collect() })
}

/// Random valid parameters over `k`.
pub fn random_braid_params<R: rand::Rng>(k: &Ring, n: usize, rng: &mut R) -> BraidAutParams {
    let g = num_integer::gcd(braid_root_order(n, k.p()), k.residue_size() - 1);
    let alpha = loop {
        let a = k.random(rng);
        if !k.is_zero(a) && k.pow(a, g) == k.one() {
            break a;
        }
    };
    BraidAutParams { alpha, m_coeffs: braid_m_generators(n).iter().map(|_| k.random(rng)).collect() }
}

/// All `alpha` in `k` with `alpha^r = 1`.
pub fn roots_of_unity(k: &Ring, order: u64) -> Vec<Elem> {
    let g = num_integer::gcd(order, k.residue_size() - 1);
    (1..k.residue_size()).map(|i| k.element(i)).filter(|&a| k.pow(a, g) == k.one()).collect()
}
