//! Graded Dieudonné spaces (over `F_q`) and modules (over `W_N(F_q)`) with
//! an alternating pairing for which both graded pieces are isotropic.
//!
//! Conventions: `F(x) = A sigma(x)` and `V(x) = B sigma^{-1}(x)`, split into
//! blocks by degree. The pairing is `<x0, y1> = x0^T G y1` for `x0` in degree
//! 0 and `y1` in degree 1; the opposite block is `-G^T`.

use crate::error::{Error, Result};
use crate::matrix::{Mat, TwistedMap};
use crate::ring::{Elem, Embedding, Ring};

/// Graded Dieudonné object: F and V homogeneous of degree one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedDieudonne {
    pub ring: Ring,
    pub dim0: usize,
    pub dim1: usize,
    /// F on degree 0, landing in degree 1 (`dim1 x dim0`).
    pub f01: Mat,
    /// F on degree 1, landing in degree 0 (`dim0 x dim1`).
    pub f10: Mat,
    /// V on degree 0 (`dim1 x dim0`).
    pub v01: Mat,
    /// V on degree 1 (`dim0 x dim1`).
    pub v10: Mat,
}

/// Graded object plus the degree-0 x degree-1 Gram block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitaryDieudonne {
    pub graded: GradedDieudonne,
    pub gram: Mat,
}

pub type GradedDSpace = GradedDieudonne;
pub type UnitaryDSpace = UnitaryDieudonne;
pub type UnitaryDModule = UnitaryDieudonne;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    pub r: usize,
    pub s: usize,
}

impl GradedDieudonne {
    pub fn new(ring: &Ring, f01: Mat, f10: Mat, v01: Mat, v10: Mat) -> Result<GradedDieudonne> {
        let (dim0, dim1) = (f01.cols(), f01.rows());
        let ok = (f10.rows(), f10.cols()) == (dim0, dim1)
            && (v01.rows(), v01.cols()) == (dim1, dim0)
            && (v10.rows(), v10.cols()) == (dim0, dim1);
        if !ok {
            return Err(Error::Schema("F/V block shapes are inconsistent".into()));
        }
        Ok(GradedDieudonne { ring: ring.clone(), dim0, dim1, f01, f10, v01, v10 })
    }

    /// `F^a V^b`-type compositions: returns (FV on deg 0, FV on deg 1, VF on deg 0, VF on deg 1).
    pub fn fv_blocks(&self) -> [Mat; 4] {
        let r = &self.ring;
        [
            self.f10.mul(r, &self.v01.frobenius(r, 1)),
            self.f01.mul(r, &self.v10.frobenius(r, 1)),
            self.v10.mul(r, &self.f01.frobenius(r, -1)),
            self.v01.mul(r, &self.f10.frobenius(r, -1)),
        ]
    }

    /// Checks `FV = VF = p` (which is zero over a field).
    pub fn check_fv(&self) -> Result<()> {
        let r = &self.ring;
        let dims = [self.dim0, self.dim1, self.dim0, self.dim1];
        for (k, (b, &n)) in self.fv_blocks().iter().zip(&dims).enumerate() {
            let target = Mat::identity(r, n).scale_int(r, r.p() as i64);
            if *b != target {
                let name = ["FV on degree 0", "FV on degree 1", "VF on degree 0", "VF on degree 1"][k];
                return Err(Error::InvariantViolation(format!("{name} is not p")));
            }
        }
        Ok(())
    }

    /// `(dim M_0 / V M_1, dim M_1 / V M_0)`, computed on the reduction.
    pub fn signature(&self) -> Signature {
        let k = self.ring.residue_field();
        let v10 = self.v10.reduce(&self.ring);
        let v01 = self.v01.reduce(&self.ring);
        Signature { r: self.dim0 - v10.rank(&k), s: self.dim1 - v01.rank(&k) }
    }

    /// Full F as a twisted map on `M_0 + M_1`.
    pub fn f_full(&self) -> TwistedMap {
        TwistedMap::new(self.full(&self.f01, &self.f10), 1)
    }

    /// Full V as a twisted map on `M_0 + M_1`.
    pub fn v_full(&self) -> TwistedMap {
        TwistedMap::new(self.full(&self.v01, &self.v10), -1)
    }

    fn full(&self, b01: &Mat, b10: &Mat) -> Mat {
        let n = self.dim0 + self.dim1;
        let mut m = Mat::zeros(n, n);
        m.set_block(self.dim0, 0, b01);
        m.set_block(0, self.dim0, b10);
        m
    }

    pub fn direct_sum(&self, other: &GradedDieudonne) -> GradedDieudonne {
        assert!(self.ring == other.ring, "direct sum over different rings");
        GradedDieudonne {
            ring: self.ring.clone(),
            dim0: self.dim0 + other.dim0,
            dim1: self.dim1 + other.dim1,
            f01: self.f01.block_diag(&other.f01),
            f10: self.f10.block_diag(&other.f10),
            v01: self.v01.block_diag(&other.v01),
            v10: self.v10.block_diag(&other.v10),
        }
    }

    /// Change of basis: the new basis vectors are the columns of `p0`, `p1`.
    pub fn base_change(&self, p0: &Mat, p1: &Mat) -> Result<GradedDieudonne> {
        let r = &self.ring;
        let (i0, i1) = (p0.inverse(r)?, p1.inverse(r)?);
        Ok(GradedDieudonne {
            ring: r.clone(),
            dim0: self.dim0,
            dim1: self.dim1,
            f01: i1.mul(r, &self.f01).mul(r, &p0.frobenius(r, 1)),
            f10: i0.mul(r, &self.f10).mul(r, &p1.frobenius(r, 1)),
            v01: i1.mul(r, &self.v01).mul(r, &p0.frobenius(r, -1)),
            v10: i0.mul(r, &self.v10).mul(r, &p1.frobenius(r, -1)),
        })
    }

    /// Restriction to the graded sub-object spanned by the columns of `b0`,
    /// `b1` (a direct summand when over a Witt ring). Fails if it is not F-
    /// and V-stable.
    pub fn restrict(&self, b0: &Mat, b1: &Mat) -> Result<GradedDieudonne> {
        let r = &self.ring;
        let coords = |basis: &Mat, images: &Mat| -> Result<Mat> {
            let cols: Option<Vec<Vec<Elem>>> = images.columns().iter().map(|c| basis.solve(r, c)).collect();
            let cols = cols.ok_or_else(|| Error::InvariantViolation("subspace is not F/V-stable".into()))?;
            Ok(Mat::from_cols(basis.cols(), &cols))
        };
        Ok(GradedDieudonne {
            ring: r.clone(),
            dim0: b0.cols(),
            dim1: b1.cols(),
            f01: coords(b1, &self.f01.mul(r, &b0.frobenius(r, 1)))?,
            f10: coords(b0, &self.f10.mul(r, &b1.frobenius(r, 1)))?,
            v01: coords(b1, &self.v01.mul(r, &b0.frobenius(r, -1)))?,
            v10: coords(b0, &self.v10.mul(r, &b1.frobenius(r, -1)))?,
        })
    }

    /// Reduction modulo p.
    pub fn reduce(&self) -> GradedDieudonne {
        let r = &self.ring;
        GradedDieudonne {
            ring: r.residue_field(),
            dim0: self.dim0,
            dim1: self.dim1,
            f01: self.f01.reduce(r),
            f10: self.f10.reduce(r),
            v01: self.v01.reduce(r),
            v10: self.v10.reduce(r),
        }
    }

    /// Scalar extension along a field embedding.
    pub fn extend(&self, emb: &Embedding) -> GradedDieudonne {
        let app = |m: &Mat| m.map(|e| emb.apply(e));
        GradedDieudonne {
            ring: emb.target().clone(),
            dim0: self.dim0,
            dim1: self.dim1,
            f01: app(&self.f01),
            f10: app(&self.f10),
            v01: app(&self.v01),
            v10: app(&self.v10),
        }
    }
}

impl UnitaryDieudonne {
    pub fn new(graded: GradedDieudonne, gram: Mat) -> Result<UnitaryDieudonne> {
        if (gram.rows(), gram.cols()) != (graded.dim0, graded.dim1) {
            return Err(Error::Schema("gram block has the wrong shape".into()));
        }
        Ok(UnitaryDieudonne { graded, gram })
    }

    pub fn ring(&self) -> &Ring {
        &self.graded.ring
    }

    /// Rank `n` of each graded piece.
    pub fn n(&self) -> usize {
        self.graded.dim0
    }

    pub fn signature(&self) -> Signature {
        self.graded.signature()
    }

    /// Checks `<Fx, y> = sigma(<x, Vy>)` on all basis pairs of both degrees.
    pub fn check_pairing(&self) -> Result<()> {
        let r = self.ring();
        let g = &self.gram;
        let gd = &self.graded;
        // degree 0 x degree 0: -(G F01)^T = sigma(G V01)
        let lhs0 = g.mul(r, &gd.f01).transpose().neg(r);
        let rhs0 = g.mul(r, &gd.v01).frobenius(r, 1);
        // degree 1 x degree 1: F10^T G = -sigma(G^T V10)
        let lhs1 = gd.f10.transpose().mul(r, g);
        let rhs1 = g.transpose().mul(r, &gd.v10).frobenius(r, 1).neg(r);
        if lhs0 != rhs0 || lhs1 != rhs1 {
            return Err(Error::InvariantViolation("pairing is not compatible with F and V".into()));
        }
        Ok(())
    }

    /// Full validation: shapes, `FV = VF = p`, pairing compatibility, and a
    /// perfect Gram block when `perfect` is set.
    pub fn validate(&self, perfect: bool) -> Result<()> {
        if self.graded.dim0 != self.graded.dim1 {
            return Err(Error::InvariantViolation("graded pieces differ in rank".into()));
        }
        self.graded.check_fv()?;
        self.check_pairing()?;
        if perfect && !self.gram.is_invertible(self.ring()) {
            return Err(Error::InvariantViolation("pairing is not perfect".into()));
        }
        Ok(())
    }

    pub fn direct_sum(&self, other: &UnitaryDieudonne) -> UnitaryDieudonne {
        UnitaryDieudonne { graded: self.graded.direct_sum(&other.graded), gram: self.gram.block_diag(&other.gram) }
    }

    pub fn base_change(&self, p0: &Mat, p1: &Mat) -> Result<UnitaryDieudonne> {
        let r = self.ring();
        Ok(UnitaryDieudonne {
            graded: self.graded.base_change(p0, p1)?,
            gram: p0.transpose().mul(r, &self.gram).mul(r, p1),
        })
    }

    /// Random graded base change preserving the Gram block:
    /// `P1 = G^{-1} P0^{-T} G` for a random invertible `P0`.
    pub fn random_symplectic_base_change<R: rand::Rng>(&self, rng: &mut R) -> Result<UnitaryDieudonne> {
        let r = self.ring();
        let n = self.n();
        let p0 = random_invertible(r, n, rng);
        let g_inv = self.gram.inverse(r)?;
        let p1 = g_inv.mul(r, &p0.inverse(r)?.transpose()).mul(r, &self.gram);
        self.base_change(&p0, &p1)
    }

    pub fn restrict(&self, b0: &Mat, b1: &Mat) -> Result<UnitaryDieudonne> {
        let r = self.ring();
        Ok(UnitaryDieudonne { graded: self.graded.restrict(b0, b1)?, gram: b0.transpose().mul(r, &self.gram).mul(r, b1) })
    }

    pub fn reduce(&self) -> UnitaryDieudonne {
        UnitaryDieudonne { graded: self.graded.reduce(), gram: self.gram.reduce(self.ring()) }
    }

    pub fn extend(&self, emb: &Embedding) -> UnitaryDieudonne {
        UnitaryDieudonne { graded: self.graded.extend(emb), gram: self.gram.map(|e| emb.apply(e)) }
    }

    /// Extend scalars to `F_{p^d}` (fields only; `d` must be a multiple of the current degree).
    pub fn extend_to_degree(&self, d: usize) -> Result<UnitaryDieudonne> {
        let r = self.ring();
        if r.degree() == d {
            return Ok(self.clone());
        }
        let target = Ring::field(r.p(), d)?;
        Ok(self.extend(&r.embedding_into(&target)?))
    }
}

pub fn random_invertible<R: rand::Rng>(r: &Ring, n: usize, rng: &mut R) -> Mat {
    loop {
        let m = Mat::from_fn(n, n, |_, _| r.random(rng));
        if m.is_invertible(r) {
            return m;
        }
    }
}

/// `m` copies of the superspecial object: `Fg = -h`, `Vg = h`, `Fh = pg`,
/// `Vh = -pg`, `<g, h> = 1`.
pub fn superspecial(r: &Ring, m: usize) -> Result<UnitaryDieudonne> {
    if m == 0 {
        return Err(Error::InvalidParams("superspecial multiplicity must be at least 1".into()));
    }
    let id = Mat::identity(r, m);
    let p = r.p() as i64;
    let graded = GradedDieudonne::new(r, id.neg(r), id.scale_int(r, p), id.clone(), id.scale_int(r, -p))?;
    UnitaryDieudonne::new(graded, id)
}

/// The braid of length `n` on bases `e_1..e_n` (degree 0), `f_1..f_n` (degree 1).
pub fn braid(r: &Ring, n: usize) -> Result<UnitaryDieudonne> {
    if n == 0 {
        return Err(Error::InvalidParams("braid length must be at least 1".into()));
    }
    let p = r.p() as i64;
    let sign = if n % 2 == 0 { 1 } else { -1 };
    let (mut f01, mut f10, mut v01, mut v10) = (Mat::zeros(n, n), Mat::zeros(n, n), Mat::zeros(n, n), Mat::zeros(n, n));
    // 0-based: e_i -> column i-1.
    for i in 1..n {
        v01[(i, i - 1)] = r.one(); // V e_i = f_{i+1}
        v10[(i, i - 1)] = r.from_int(p); // V f_i = p e_{i+1}
        f01[(i - 1, i)] = r.one(); // F e_{i+1} = f_i
        f10[(i - 1, i)] = r.from_int(p); // F f_{i+1} = p e_i
    }
    v01[(0, n - 1)] = r.from_int(sign * p); // V e_n = (-1)^n p f_1
    v10[(0, n - 1)] = r.one(); // V f_n = e_1
    f01[(n - 1, 0)] = r.from_int(p); // F e_1 = p f_n
    f10[(n - 1, 0)] = r.from_int(sign); // F f_1 = (-1)^n e_n
    let gram = Mat::diag(r, &(0..n).map(|i| r.from_int(if i % 2 == 0 { 1 } else { -1 })).collect::<Vec<_>>());
    UnitaryDieudonne::new(GradedDieudonne::new(r, f01, f10, v01, v10)?, gram)
}

/// `B(rho) + S^(n - rho)`.
pub fn braid_plus_superspecial(r: &Ring, rho: usize, n: usize) -> Result<UnitaryDieudonne> {
    if rho == 0 || rho > n {
        return Err(Error::InvalidParams(format!("need 1 <= rho <= n, got rho = {rho}, n = {n}")));
    }
    let b = braid(r, rho)?;
    if rho == n { Ok(b) } else { Ok(b.direct_sum(&superspecial(r, n - rho)?)) }
}

/// Over `F_q`: the mod-p space. Over `W_N`: the module.
pub fn make_superspecial(r: &Ring, m: usize) -> Result<UnitaryDieudonne> {
    superspecial(r, m)
}

pub fn make_braid(r: &Ring, n: usize) -> Result<UnitaryDieudonne> {
    braid(r, n)
}
