//! Solving systems of twisted linear matrix equations over `F_q` by
//! restriction of scalars to `F_p`.
//!
//! A system has unknown matrices `X_0, X_1, ...` and equations of the form
//! `sum_k L_k sigma^{t_k}(X_{u_k}) R_k = 0`. Each is `F_p`-linear in the
//! coefficients of the unknowns.

use crate::error::{Error, Result};
use crate::fp;
use crate::limits;
use crate::matrix::Mat;
use crate::ring::Ring;

#[derive(Clone, Debug)]
pub struct Term {
    pub left: Mat,
    pub unknown: usize,
    pub twist: i64,
    pub right: Mat,
}

#[derive(Clone, Debug)]
pub struct SemilinearSystem {
    ring: Ring,
    shapes: Vec<(usize, usize)>,
    equations: Vec<((usize, usize), Vec<Term>)>,
}

/// An `F_p`-basis of the solution space. Each basis element assigns a
/// matrix to every unknown.
#[derive(Clone, Debug)]
pub struct SolutionSpace {
    pub ring: Ring,
    pub shapes: Vec<(usize, usize)>,
    pub basis: Vec<Vec<Mat>>,
}

impl SolutionSpace {
    /// Dimension over `F_p`.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The solution with the given `F_p` coordinates.
    pub fn combination(&self, coords: &[u64]) -> Vec<Mat> {
        let r = &self.ring;
        let mut out: Vec<Mat> = self.shapes.iter().map(|&(a, b)| Mat::zeros(a, b)).collect();
        for (c, sol) in coords.iter().zip(&self.basis) {
            if *c == 0 {
                continue;
            }
            for (o, s) in out.iter_mut().zip(sol) {
                *o = o.add(r, &s.scale_int(r, *c as i64));
            }
        }
        out
    }
}

impl SemilinearSystem {
    pub fn new(ring: &Ring) -> SemilinearSystem {
        assert!(ring.is_field(), "semilinear systems are solved over a field");
        SemilinearSystem { ring: ring.clone(), shapes: Vec::new(), equations: Vec::new() }
    }

    /// Register an unknown matrix; returns its index.
    pub fn unknown(&mut self, rows: usize, cols: usize) -> usize {
        self.shapes.push((rows, cols));
        self.shapes.len() - 1
    }

    /// Add the equation `sum terms = 0`, each term an `out_rows x out_cols` matrix.
    pub fn equation(&mut self, out_shape: (usize, usize), terms: Vec<Term>) {
        for t in &terms {
            let (ur, uc) = self.shapes[t.unknown];
            assert_eq!(t.left.cols(), ur, "left factor does not match unknown");
            assert_eq!(t.right.rows(), uc, "right factor does not match unknown");
            assert_eq!((t.left.rows(), t.right.cols()), out_shape, "term shape mismatch");
        }
        self.equations.push((out_shape, terms));
    }

    /// Convenience: `A sigma^t(X) = X B`.
    pub fn twisted_commute(&mut self, x: usize, a: &Mat, t: i64, b: &Mat) {
        let (xr, xc) = self.shapes[x];
        let r = self.ring.clone();
        self.equation(
            (xr, xc),
            vec![
                Term { left: a.clone(), unknown: x, twist: t, right: Mat::identity(&r, xc) },
                Term { left: Mat::identity(&r, xr).neg(&r), unknown: x, twist: 0, right: b.clone() },
            ],
        );
    }

    pub fn num_prime_unknowns(&self) -> usize {
        self.ring.degree() * self.shapes.iter().map(|&(a, b)| a * b).sum::<usize>()
    }

    pub fn solve(&self) -> Result<SolutionSpace> {
        let r = &self.ring;
        let d = r.degree();
        let p = r.p();
        let nvars = self.num_prime_unknowns();
        let cap = limits::max_linear_unknowns();
        if nvars > cap {
            return Err(Error::CapExceeded(format!("{nvars} prime-field unknowns exceed the cap of {cap}")));
        }
        let nrows: usize = self.equations.iter().map(|((a, b), _)| a * b * d).sum();
        let mut rows = vec![vec![0u64; nvars]; nrows];
        // variable offsets
        let mut offsets = Vec::with_capacity(self.shapes.len());
        let mut acc = 0;
        for &(a, b) in &self.shapes {
            offsets.push(acc);
            acc += a * b * d;
        }
        for (u, &(ur, uc)) in self.shapes.iter().enumerate() {
            for i in 0..ur {
                for j in 0..uc {
                    for k in 0..d {
                        let var = offsets[u] + (i * uc + j) * d + k;
                        let mut coeffs = [0u64; crate::ring::MAX_DEGREE];
                        coeffs[k] = 1;
                        let e = r.from_coeffs(&coeffs[..d]).expect("basis element");
                        let mut row_base = 0;
                        for ((er, ec), terms) in &self.equations {
                            let mut out = Mat::zeros(*er, *ec);
                            for t in terms.iter().filter(|t| t.unknown == u) {
                                let se = r.frobenius(e, t.twist);
                                // L[:, i] * se * R[j, :]
                                for a in 0..*er {
                                    let la = r.mul(t.left[(a, i)], se);
                                    if r.is_zero(la) {
                                        continue;
                                    }
                                    for b in 0..*ec {
                                        let v = r.mul(la, t.right[(j, b)]);
                                        out[(a, b)] = r.add(out[(a, b)], v);
                                    }
                                }
                            }
                            for a in 0..*er {
                                for b in 0..*ec {
                                    let cs = r.coeffs(out[(a, b)]);
                                    for (kk, &c) in cs.iter().enumerate() {
                                        rows[row_base + (a * ec + b) * d + kk][var] = c;
                                    }
                                }
                            }
                            row_base += er * ec * d;
                        }
                    }
                }
            }
        }
        let null = fp::nullspace(rows, nvars, p);
        let basis = null
            .into_iter()
            .map(|v| {
                self.shapes
                    .iter()
                    .enumerate()
                    .map(|(u, &(ur, uc))| {
                        Mat::from_fn(ur, uc, |i, j| {
                            let base = offsets[u] + (i * uc + j) * d;
                            r.from_coeffs(&v[base..base + d]).expect("reduced coordinates")
                        })
                    })
                    .collect()
            })
            .collect();
        Ok(SolutionSpace { ring: r.clone(), shapes: self.shapes.clone(), basis })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_constraint_has_full_space() {
        let f9 = Ring::field(3, 2).unwrap();
        let mut sys = SemilinearSystem::new(&f9);
        let x = sys.unknown(1, 1);
        let id = Mat::identity(&f9, 1);
        sys.twisted_commute(x, &id, 0, &id);
        assert_eq!(sys.solve().unwrap().dim(), 2);
    }

    #[test]
    fn frobenius_fixed_points_form_prime_field() {
        let f9 = Ring::field(3, 2).unwrap();
        let mut sys = SemilinearSystem::new(&f9);
        let x = sys.unknown(1, 1);
        let id = Mat::identity(&f9, 1);
        sys.twisted_commute(x, &id, 1, &id);
        let sol = sys.solve().unwrap();
        assert_eq!(sol.dim(), 1);
        assert_eq!(sol.basis[0][0], id);
    }

    #[test]
    fn coupled_frobenius_pair() {
        // A^(p) = B and B^(p) = A over F_9: solutions (a, a^p).
        let f9 = Ring::field(3, 2).unwrap();
        let id = Mat::identity(&f9, 1);
        let mut sys = SemilinearSystem::new(&f9);
        let a = sys.unknown(1, 1);
        let b = sys.unknown(1, 1);
        sys.equation(
            (1, 1),
            vec![
                Term { left: id.clone(), unknown: a, twist: 1, right: id.clone() },
                Term { left: id.neg(&f9), unknown: b, twist: 0, right: id.clone() },
            ],
        );
        sys.equation(
            (1, 1),
            vec![
                Term { left: id.clone(), unknown: b, twist: 1, right: id.clone() },
                Term { left: id.neg(&f9), unknown: a, twist: 0, right: id.clone() },
            ],
        );
        let sol = sys.solve().unwrap();
        assert_eq!(sol.dim(), 2);
        for v in &sol.basis {
            assert_eq!(v[1][(0, 0)], f9.frobenius(v[0][(0, 0)], 1));
        }
    }
}
