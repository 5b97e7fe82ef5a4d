//! Coweights `x ∈ Z^{2n}` with `x_i + x_{2n+1-i}` constant, the Weyl group
//! action on the first half, the Frobenius swap and the dominance order.

use std::fmt;

use serde::Serialize;

use crate::dieudonne::braid_plus_superspecial;
use crate::error::{Error, Result};
use crate::ring::Ring;
use crate::slopes::v_square_type;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Coweight(Vec<i64>);

impl Coweight {
    pub fn new(x: Vec<i64>) -> Result<Coweight> {
        if x.is_empty() || x.len() % 2 != 0 {
            return Err(Error::InvalidParams(format!("a coweight has even positive length, got {}", x.len())));
        }
        let len = x.len();
        let c = x[0] + x[len - 1];
        if (0..len).any(|i| x[i] + x[len - 1 - i] != c) {
            return Err(Error::InvalidParams(format!("x_i + x_(2n+1-i) is not constant in {x:?}")));
        }
        Ok(Coweight(x))
    }

    /// From the first half and the similitude constant.
    pub fn from_half(first: &[i64], c: i64) -> Coweight {
        let mut x = first.to_vec();
        x.extend(first.iter().rev().map(|v| c - v));
        Coweight(x)
    }

    pub fn n(&self) -> usize {
        self.0.len() / 2
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn first_half(&self) -> &[i64] {
        &self.0[..self.n()]
    }

    pub fn constant(&self) -> i64 {
        self.0[0] + self.0[self.0.len() - 1]
    }

    /// Dominant representative of the Weyl orbit: first half descending.
    pub fn dominant(&self) -> Coweight {
        let mut h = self.first_half().to_vec();
        h.sort_unstable_by(|a, b| b.cmp(a));
        Coweight::from_half(&h, self.constant())
    }

    pub fn is_dominant(&self) -> bool {
        self.first_half().windows(2).all(|w| w[0] >= w[1])
    }
}

impl fmt::Display for Coweight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Swap of the two halves.
pub fn sigma_act(x: &Coweight) -> Coweight {
    let n = x.n();
    let mut y = x.0[n..].to_vec();
    y.extend_from_slice(&x.0[..n]);
    Coweight(y)
}

/// `(1, 0^{n-1}, 1^{n-1}, 0)`.
pub fn mu(n: usize) -> Result<Coweight> {
    if n < 2 {
        return Err(Error::InvalidParams("mu needs n >= 2".into()));
    }
    let mut x = vec![0; 2 * n];
    x[0] = 1;
    x[n..2 * n - 1].iter_mut().for_each(|v| *v = 1);
    Ok(Coweight(x))
}

/// `mu + sigma(mu)`, dominant.
pub fn norm_mu(n: usize) -> Result<Coweight> {
    let m = mu(n)?;
    let s = sigma_act(&m);
    Ok(Coweight(m.0.iter().zip(&s.0).map(|(a, b)| a + b).collect()).dominant())
}

/// Whether `a` lies in the convex hull of the Weyl orbit of `b`, decided by
/// majorization of the dominant first halves.
pub fn dominance_leq(a: &Coweight, b: &Coweight) -> Result<bool> {
    if a.n() != b.n() {
        return Err(Error::InvalidParams("coweights of different rank".into()));
    }
    if a.constant() != b.constant() {
        return Err(Error::IncomparableConstants(a.constant(), b.constant()));
    }
    let (da, db) = (a.dominant(), b.dominant());
    let (mut sa, mut sb) = (0, 0);
    let mut ok = true;
    for (x, y) in da.first_half().iter().zip(db.first_half()) {
        sa += x;
        sb += y;
        ok &= sa <= sb;
    }
    Ok(ok && sa == sb)
}

/// Coweight of a graded lattice pair from its two divisor vectors.
pub fn inv_lattice_pair(g0: &[u32], g1: &[u32]) -> Result<Coweight> {
    if g0.len() != g1.len() || g0.is_empty() {
        return Err(Error::DualityViolation(format!("divisor vectors of lengths {} and {}", g0.len(), g1.len())));
    }
    let sorted = |g: &[u32]| {
        let mut v: Vec<i64> = g.iter().map(|&x| x as i64).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    };
    let (s0, s1) = (sorted(g0), sorted(g1));
    let n = s0.len();
    let c = s1[0] + s0[n - 1];
    if (0..n).any(|i| s1[i] != c - s0[n - 1 - i]) {
        return Err(Error::DualityViolation(format!("{s1:?} is not a constant minus the reverse of {s0:?}")));
    }
    Ok(Coweight::from_half(&s0, c))
}

/// Weyl orbit of `x` is stable under the Frobenius swap.
pub fn is_sigma_stable(x: &Coweight) -> bool {
    sigma_act(&x.dominant()).dominant() == x.dominant()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrobType {
    pub coweight: Coweight,
    pub expected: Coweight,
    pub multiplicator: i64,
    pub ok: bool,
}

/// Compares the V^2-type of `B(2) + S^{n-2}` over `W_prec(F_{p^2})` with `N(mu)`.
pub fn frob_type_check(n: usize, p: u64, prec: u32) -> Result<FrobType> {
    if n < 2 {
        return Err(Error::InvalidParams("frobenius type needs n >= 2".into()));
    }
    let w = Ring::witt(p, 2, prec)?;
    let m = braid_plus_superspecial(&w, 2, n)?;
    let (g0, g1) = v_square_type(&m)?;
    let coweight = inv_lattice_pair(&g0, &g1)?;
    let expected = norm_mu(n)?;
    let multiplicator = coweight.constant();
    let ok = coweight == expected && multiplicator == 2 && is_sigma_stable(&coweight);
    Ok(FrobType { coweight, expected, multiplicator, ok })
}

/// Representative modulo permutations of positions `2..n-1`.
pub fn levi_orbit(x: &Coweight) -> Coweight {
    let n = x.n();
    let mut h = x.first_half().to_vec();
    if n > 2 {
        h[1..n - 1].sort_unstable_by(|a, b| b.cmp(a));
    }
    Coweight::from_half(&h, x.constant())
}
