//! Newton slopes and the V^2 type of unitary Dieudonné modules over `W_N`.
//!
//! Slopes are read off V-divisibility: `v(j)` is the largest `k` with
//! `V^j M ⊂ p^k M`.

use crate::classify::classify;
use crate::dieudonne::{GradedDieudonne, UnitaryDModule};
use crate::error::{Error, Result};
use crate::matrix::{Mat, TwistedMap};
use crate::ring::Ring;
use crate::smith::smith_over_witt;
use crate::strata::{admissible_first_slopes, polygon_of_isoindex, NewtonPolygon, Q};

fn require_witt(r: &Ring) -> Result<()> {
    if r.is_field() {
        return Err(Error::InvalidParams("slopes need a module over a Witt ring of precision >= 2".into()));
    }
    Ok(())
}

fn power(r: &Ring, t: &TwistedMap, j: usize) -> TwistedMap {
    let mut acc = TwistedMap::new(Mat::identity(r, t.mat.rows()), 0);
    for _ in 0..j {
        acc = t.compose(r, &acc);
    }
    acc
}

/// `v(1), ..., v(jmax)`. Fails when some `V^j` vanishes modulo `p^N`, since
/// then `v(j)` is not certified.
pub fn v_divisibility(gd: &GradedDieudonne, jmax: usize) -> Result<Vec<u32>> {
    let r = &gd.ring;
    require_witt(r)?;
    let v = gd.v_full();
    let mut acc = TwistedMap::new(Mat::identity(r, gd.dim0 + gd.dim1), 0);
    let mut out = Vec::with_capacity(jmax);
    for j in 1..=jmax {
        acc = v.compose(r, &acc);
        let k = acc.mat.min_valuation(r);
        if k >= r.precision() {
            return Err(Error::InsufficientPrecision(format!("V^{j} vanishes modulo p^{}", r.precision())));
        }
        out.push(k);
    }
    Ok(out)
}

/// `max_j v(j)/j` over `j = 1..=jmax`.
pub fn max_divisibility_ratio(gd: &GradedDieudonne, jmax: usize) -> Result<Q> {
    let v = v_divisibility(gd, jmax)?;
    Ok(v.iter().enumerate().map(|(i, &k)| Q::new(k as i64, i as i64 + 1)).max().expect("jmax >= 1"))
}

/// Snaps `x` to the nearest admissible first slope for rank `n`; returns the
/// isocrystal index.
pub fn snap_first_slope(x: Q, n: usize) -> Result<usize> {
    let mut cands: Vec<(Q, usize, Q)> =
        admissible_first_slopes(n).into_iter().map(|(r, s)| (if x >= s { x - s } else { s - x }, r, s)).collect();
    cands.sort();
    if cands.len() > 1 && cands[0].0 == cands[1].0 {
        return Err(Error::SnapAmbiguity(cands[0].2.to_string(), cands[1].2.to_string()));
    }
    Ok(cands[0].1)
}

/// Newton polygon of a unitary Dieudonné module of signature `(n-1, 1)`.
pub fn newton_slopes(m: &UnitaryDModule) -> Result<NewtonPolygon> {
    let n = m.n();
    let x = max_divisibility_ratio(&m.graded, 2 * n)?;
    polygon_of_isoindex(snap_first_slope(x, n)?, n)
}

/// Elementary divisor exponents of V^2 on degree 0 and on degree 1, each
/// sorted descending.
pub fn v_square_type(m: &UnitaryDModule) -> Result<(Vec<u32>, Vec<u32>)> {
    let r = m.ring();
    require_witt(r)?;
    let g = &m.graded;
    let v2_0 = g.v10.mul(r, &g.v01.frobenius(r, -1));
    let v2_1 = g.v01.mul(r, &g.v10.frobenius(r, -1));
    Ok((smith_over_witt(r, &v2_0)?, smith_over_witt(r, &v2_1)?))
}

/// Bases (degree 0, degree 1) of the three slope parts, indexed by
/// V-slope 0, 1/2 and 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeDecomposition {
    pub parts: [(Mat, Mat); 3],
}

impl SlopeDecomposition {
    pub fn part(&self, m: &UnitaryDModule, i: usize) -> Result<UnitaryDModule> {
        let (b0, b1) = &self.parts[i];
        m.restrict(b0, b1)
    }
}

/// Basis of the image of `a`, which must be a free direct summand.
fn summand_image(r: &Ring, a: &Mat) -> Result<Mat> {
    let (e, piv) = a.transpose().rref(r);
    let rest = e.block(piv.len(), 0, e.rows() - piv.len(), e.cols());
    if !rest.is_zero() {
        return Err(Error::InsufficientPrecision("stable image is not yet a direct summand".into()));
    }
    Ok(e.block(0, 0, piv.len(), e.cols()).transpose())
}

/// `M = M(0) + M(1/2) + M(1)` for a module whose reduction is mu-ordinary.
/// `M(0)` is the stable image of V, `M(1)` that of F, and `M(1/2)` their
/// orthogonal complement.
pub fn mu_ordinary_decomposition(m: &UnitaryDModule) -> Result<SlopeDecomposition> {
    let r = m.ring();
    require_witt(r)?;
    let n = m.n();
    let rho = classify(&m.reduce())?;
    if rho != 2 {
        return Err(Error::NotMuOrdinary(rho));
    }
    let k = 2 * (r.precision() as usize + n);
    let stable = |t: &TwistedMap| -> Result<(Mat, Mat)> {
        let a = power(r, t, k).mat;
        Ok((summand_image(r, &a.block(0, 0, n, n))?, summand_image(r, &a.block(n, n, n, n))?))
    };
    let (z0, z1) = stable(&m.graded.v_full())?;
    let (o0, o1) = stable(&m.graded.f_full())?;
    if [&z0, &z1, &o0, &o1].iter().any(|b| b.cols() != 1) {
        return Err(Error::InvariantViolation("extreme slope parts are not of rank one".into()));
    }
    let g = &m.gram;
    let c1 = g.mul(r, &z1.hstack(&o1)).transpose();
    let c0 = z0.hstack(&o0).transpose().mul(r, g);
    let h0 = c1.kernel_of_surjection(r).ok_or_else(|| Error::InvariantViolation("extreme parts pair degenerately".into()))?;
    let h1 = c0.kernel_of_surjection(r).ok_or_else(|| Error::InvariantViolation("extreme parts pair degenerately".into()))?;
    let dec = SlopeDecomposition { parts: [(z0, z1), (h0, h1), (o0, o1)] };
    for i in 0..3 {
        dec.part(m, i)?;
    }
    let span0 = dec.parts[0].0.hstack(&dec.parts[1].0).hstack(&dec.parts[2].0);
    let span1 = dec.parts[0].1.hstack(&dec.parts[1].1).hstack(&dec.parts[2].1);
    if !span0.is_invertible(r) || !span1.is_invertible(r) {
        return Err(Error::InvariantViolation("slope parts do not span the module".into()));
    }
    Ok(dec)
}

/// Slope of an isoclinic graded module: `v(J)/J` with `J` twice the rank.
pub fn isoclinic_slope(gd: &GradedDieudonne) -> Result<Q> {
    let j = 2 * (gd.dim0 + gd.dim1);
    let v = v_divisibility(gd, j)?;
    Ok(Q::new(v[j - 1] as i64, j as i64))
}
