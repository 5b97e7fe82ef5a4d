//! Elementary divisors over `W_N(F_q)`.

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::ring::Ring;

/// Elementary divisor exponents of a square matrix, sorted descending.
///
/// Fails when some divisor is not certifiably below `p^N`, i.e. when the
/// remaining block vanishes modulo `p^N`.
pub fn smith_over_witt(r: &Ring, m: &Mat) -> Result<Vec<u32>> {
    if !m.is_square() {
        return Err(Error::InvalidParams(format!("smith form needs a square matrix, got {}x{}", m.rows(), m.cols())));
    }
    let mut exps = elementary_divisors(r, m);
    let n = m.rows();
    if exps.len() < n {
        return Err(Error::InsufficientPrecision(format!(
            "{} of {n} elementary divisors vanish modulo p^{}",
            n - exps.len(),
            r.precision()
        )));
    }
    exps.sort_unstable_by(|a, b| b.cmp(a));
    Ok(exps)
}

/// Exponents of the nonzero elementary divisors of any matrix, in pivot
/// order (ascending). Divisors that vanish modulo `p^N` are omitted.
pub fn elementary_divisors(r: &Ring, m: &Mat) -> Vec<u32> {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut exps = Vec::new();
    for k in 0..rows.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                let v = r.valuation(a[(i, j)]);
                if v < r.precision() && best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((v, pi, pj)) = best else { break };
        a.swap_rows(k, pi);
        a.swap_cols(k, pj);
        let unit = r.div_p_pow(a[(k, k)], v);
        let unit_inv = r.inv(unit).expect("pivot quotient is a unit");
        for i in k + 1..rows {
            let b = a[(i, k)];
            if !r.is_zero(b) {
                let c = r.neg(r.mul(r.div_p_pow(b, v), unit_inv));
                a.add_row_multiple(r, i, k, c);
            }
        }
        for j in k + 1..cols {
            let b = a[(k, j)];
            if !r.is_zero(b) {
                let c = r.neg(r.mul(r.div_p_pow(b, v), unit_inv));
                a.add_col_multiple(r, j, k, c);
            }
        }
        exps.push(v);
    }
    exps
}
