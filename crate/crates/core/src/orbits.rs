//! Superspecial isogeny orbits in rank one, by exhaustive enumeration over
//! `W_prec(F_{p^2})`.

use crate::error::{Error, Result};
use crate::limits;
use crate::ring::{Elem, Ring};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitCount {
    /// `#X_c`: elements with `sigma(f) f = p^c`.
    pub points: u64,
    /// `#J`: elements with `sigma(g) g = 1`.
    pub group: u64,
    pub orbits: u64,
}

fn norm(r: &Ring, f: Elem) -> Elem {
    r.mul(r.frobenius(f, 1), f)
}

/// Orbits of `J = {g : sigma(g) g = 1}` on `X_c = {f : sigma(f) f = p^c}` in
/// `W_prec(F_{p^2})`.
pub fn count_superspecial_isogeny_orbits(p: u64, c: u32, prec: u32) -> Result<OrbitCount> {
    // p^c must survive the truncation
    if prec <= c {
        return Err(Error::InsufficientPrecision(format!("need prec > c, got c = {c}, prec = {prec}")));
    }
    let size = limits::checked_space_size(p, 2 * prec as usize, "W_prec(F_{p^2})")?;
    let r = Ring::witt(p, 2, prec)?;
    let target = r.mul_p_pow(r.one(), c);
    let (mut xs, mut js) = (Vec::new(), Vec::new());
    for idx in 0..size {
        let f = r.element(idx);
        let nf = norm(&r, f);
        if nf == target {
            xs.push(idx);
        }
        if nf == r.one() {
            js.push(f);
        }
    }
    let mut seen = vec![false; size as usize];
    let mut orbits = 0;
    for &x in &xs {
        if seen[x as usize] {
            continue;
        }
        orbits += 1;
        let f = r.element(x);
        for &g in &js {
            seen[r.index_of(r.mul(g, f)) as usize] = true;
        }
    }
    Ok(OrbitCount { points: xs.len() as u64, group: js.len() as u64, orbits })
}
