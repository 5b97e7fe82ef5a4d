//! Classification of unitary Dieudonné spaces of signature `(n-1, 1)`.
//!
//! Every such space is isomorphic to `B(rho) + S^(n-rho)` for a unique
//! `rho`. The fingerprint is the dimension profile of the smallest family of
//! graded subspaces containing `0` and the whole space and closed under `F`,
//! `V^{-1}`, sums and intersections.

use std::collections::{BTreeSet, HashSet, VecDeque};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::automorphisms;
use crate::dieudonne::{braid_plus_superspecial, UnitaryDSpace};
use crate::error::{Error, Result};
use crate::limits;
use crate::matrix::Mat;
use crate::ring::{Elem, Ring};
use crate::semilinear::{SemilinearSystem, Term};

/// Field degree bound (as a multiple of 2) for extension searches.
pub const DEFAULT_EXTENSION_BOUND: usize = 6;

/// Closure size beyond which the fingerprint computation gives up.
const MAX_CLOSURE: usize = 4096;

/// Subspace of `K^dim` stored as a reduced row echelon basis (rows).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct Subspace {
    dim: usize,
    rows: Mat,
}

impl Subspace {
    fn from_rows(r: &Ring, dim: usize, rows: &Mat) -> Subspace {
        let (m, piv) = rows.rref(r);
        Subspace { dim, rows: m.block(0, 0, piv.len(), dim) }
    }

    fn from_cols(r: &Ring, dim: usize, cols: &Mat) -> Subspace {
        Subspace::from_rows(r, dim, &cols.transpose())
    }

    fn zero(dim: usize) -> Subspace {
        Subspace { dim, rows: Mat::zeros(0, dim) }
    }

    fn full(r: &Ring, dim: usize) -> Subspace {
        Subspace { dim, rows: Mat::identity(r, dim) }
    }

    fn rank(&self) -> usize {
        self.rows.rows()
    }

    /// Rows spanning the annihilator in the dual space.
    fn annihilator(&self, r: &Ring) -> Mat {
        if self.rank() == 0 {
            return Mat::identity(r, self.dim);
        }
        self.rows.kernel(r).transpose()
    }

    fn sum(&self, r: &Ring, other: &Subspace) -> Subspace {
        Subspace::from_rows(r, self.dim, &self.rows.vstack(&other.rows))
    }

    fn intersect(&self, r: &Ring, other: &Subspace) -> Subspace {
        let ann = self.annihilator(r).vstack(&other.annihilator(r));
        Subspace::from_rows(r, self.dim, &ann.kernel(r).transpose())
    }

    /// Image under `x -> A sigma^t(x)`.
    fn image(&self, r: &Ring, a: &Mat, t: i64) -> Subspace {
        let cols = a.mul(r, &self.rows.frobenius(r, t).transpose());
        Subspace::from_cols(r, a.rows(), &cols)
    }

    /// Preimage under `x -> A sigma^t(x)`.
    fn preimage(&self, r: &Ring, a: &Mat, t: i64) -> Subspace {
        let cond = self.annihilator(r).mul(r, a);
        let z = if cond.rows() == 0 { Mat::identity(r, a.cols()) } else { cond.kernel(r) };
        Subspace::from_cols(r, a.cols(), &z.frobenius(r, -t))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct GradedSub(Subspace, Subspace);

/// For each closure member `X`: the graded dimensions of `X`, `F(X)` and
/// `V^{-1}(X)`. Sorted, so it is an isomorphism invariant.
pub type Fingerprint = Vec<[(usize, usize); 3]>;

pub fn canonical_fingerprint(sp: &UnitaryDSpace) -> Result<Fingerprint> {
    let g = &sp.graded;
    let r = &g.ring;
    if !r.is_field() {
        return Err(Error::InvalidParams("fingerprints are computed on spaces over a field".into()));
    }
    let start = [
        GradedSub(Subspace::zero(g.dim0), Subspace::zero(g.dim1)),
        GradedSub(Subspace::full(r, g.dim0), Subspace::full(r, g.dim1)),
    ];
    let mut seen: Vec<GradedSub> = Vec::new();
    let mut profile: Fingerprint = Vec::new();
    let mut index: HashSet<GradedSub> = HashSet::new();
    let mut queue: VecDeque<GradedSub> = VecDeque::new();
    for s in start {
        if index.insert(s.clone()) {
            queue.push_back(s);
        }
    }
    while let Some(x) = queue.pop_front() {
        let mut new = vec![
            // F(X) = (F10 X1, F01 X0)
            GradedSub(x.1.image(r, &g.f10, 1), x.0.image(r, &g.f01, 1)),
            // V^{-1}(X) = (preimage of X1 under V01, preimage of X0 under V10)
            GradedSub(x.1.preimage(r, &g.v01, -1), x.0.preimage(r, &g.v10, -1)),
        ];
        let dims = |s: &GradedSub| (s.0.rank(), s.1.rank());
        profile.push([dims(&x), dims(&new[0]), dims(&new[1])]);
        for y in &seen {
            new.push(GradedSub(x.0.sum(r, &y.0), x.1.sum(r, &y.1)));
            new.push(GradedSub(x.0.intersect(r, &y.0), x.1.intersect(r, &y.1)));
        }
        seen.push(x);
        for s in new {
            if index.insert(s.clone()) {
                queue.push_back(s);
            }
        }
        if index.len() > MAX_CLOSURE {
            return Err(Error::CapExceeded(format!("subspace closure exceeds {MAX_CLOSURE} members")));
        }
    }
    profile.sort_unstable();
    Ok(profile)
}

/// Fingerprints of `B(rho) + S^(n-rho)` for `rho = 1..=n` over `r`.
pub fn reference_fingerprints(r: &Ring, n: usize) -> Result<Vec<Fingerprint>> {
    (1..=n).map(|rho| canonical_fingerprint(&braid_plus_superspecial(r, rho, n)?)).collect()
}

fn check_signature(sp: &UnitaryDSpace) -> Result<usize> {
    let n = sp.n();
    let sig = sp.signature();
    if n == 0 || sig.r + 1 != n || sig.s != 1 {
        return Err(Error::InvalidParams(format!("signature ({}, {}) is not ({}, 1)", sig.r, sig.s, n.saturating_sub(1))));
    }
    Ok(n)
}

/// The unique `rho` with `sp` isomorphic to `B(rho) + S^(n-rho)`.
pub fn classify(sp: &UnitaryDSpace) -> Result<usize> {
    let n = check_signature(sp)?;
    let r = sp.ring();
    let fp = canonical_fingerprint(sp)?;
    let refs = reference_fingerprints(r, n)?;
    let matches: Vec<usize> = (1..=n).filter(|&rho| refs[rho - 1] == fp).collect();
    if matches.len() == 1 {
        return Ok(matches[0]);
    }
    // Fallback: unitary isomorphism search over small extensions.
    let candidates: Vec<usize> = if matches.is_empty() { (1..=n).collect() } else { matches };
    let mut found = Vec::new();
    for &rho in &candidates {
        let reference = braid_plus_superspecial(r, rho, n)?;
        for k in 1..=DEFAULT_EXTENSION_BOUND {
            if 2 * k % r.degree() != 0 {
                continue;
            }
            match automorphisms::isom_count(sp, &reference, k) {
                Ok(c) if c > 0 => {
                    found.push(rho);
                    break;
                }
                Ok(_) => {}
                Err(Error::CapExceeded(_)) => break,
                Err(e) => return Err(e),
            }
        }
    }
    match found.as_slice() {
        [rho] => Ok(*rho),
        _ => Err(Error::UnclassifiableInput(format!("fingerprint {fp:?} matches no unique reference"))),
    }
}

pub fn is_supersingular(sp: &UnitaryDSpace) -> Result<bool> {
    Ok(classify(sp)? % 2 == 1)
}

/// Splits off superspecial summands. Returns the braid core and the number
/// of summands removed.
pub fn split_superspecial(sp: &UnitaryDSpace) -> Result<(UnitaryDSpace, usize)> {
    split_superspecial_with_bound(sp, DEFAULT_EXTENSION_BOUND)
}

pub fn split_superspecial_with_bound(sp: &UnitaryDSpace, bound: usize) -> Result<(UnitaryDSpace, usize)> {
    check_signature(sp)?;
    let expected = sp.n() - classify(sp)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut core = sp.clone();
    let mut removed = 0;
    while removed < expected {
        let mut split = None;
        let base_degree = core.ring().degree();
        let mut degree = base_degree;
        while degree <= 2 * bound && degree <= crate::ring::MAX_DEGREE {
            let current = core.extend_to_degree(degree)?;
            if let Some(x) = splitting_vector(&current, &mut rng)? {
                split = Some(split_off(&current, &x)?);
                break;
            }
            degree = next_degree(degree, base_degree);
        }
        match split {
            Some(c) => {
                core = c;
                removed += 1;
            }
            None => return Err(Error::ExtensionBoundExceeded(2 * bound)),
        }
    }
    if classify(&core)? != core.n() {
        return Err(Error::InvariantViolation("core after splitting is not a braid".into()));
    }
    Ok((core, removed))
}

fn next_degree(d: usize, base: usize) -> usize {
    let mut e = d + 1;
    while e % base != 0 || e % 2 != 0 {
        e += 1;
    }
    e
}

/// A degree-0 vector `x` with `Fx = -Vx` and `<x, Vx> != 0`.
fn splitting_vector(sp: &UnitaryDSpace, rng: &mut ChaCha8Rng) -> Result<Option<Vec<Elem>>> {
    let g = &sp.graded;
    let r = &g.ring;
    let n = g.dim0;
    let mut sys = SemilinearSystem::new(r);
    let x = sys.unknown(n, 1);
    let one = Mat::identity(r, 1);
    sys.equation(
        (g.dim1, 1),
        vec![
            Term { left: g.f01.clone(), unknown: x, twist: 1, right: one.clone() },
            Term { left: g.v01.clone(), unknown: x, twist: -1, right: one },
        ],
    );
    let sol = sys.solve()?;
    if sol.dim() == 0 {
        return Ok(None);
    }
    let form = |v: &Mat| -> Elem {
        let col = v.col(0);
        let vx = g.v01.apply(r, &col.iter().map(|&e| r.frobenius(e, -1)).collect::<Vec<_>>());
        let gvx = sp.gram.apply(r, &vx);
        col.iter().zip(&gvx).fold(r.zero(), |acc, (&a, &b)| r.add(acc, r.mul(a, b)))
    };
    let p = r.p();
    for _ in 0..256 {
        let coords: Vec<u64> = (0..sol.dim()).map(|_| rand::Rng::gen_range(rng, 0..p)).collect();
        let v = &sol.combination(&coords)[0];
        if !r.is_zero(form(v)) {
            return Ok(Some(v.col(0)));
        }
    }
    // Exhaustive fallback on small solution spaces.
    if limits::checked_space_size(p, sol.dim(), "splitting vector search").is_ok() {
        let mut coords = vec![0u64; sol.dim()];
        loop {
            let mut j = 0;
            while j < coords.len() {
                coords[j] += 1;
                if coords[j] < p {
                    break;
                }
                coords[j] = 0;
                j += 1;
            }
            if j == coords.len() {
                break;
            }
            let v = &sol.combination(&coords)[0];
            if !r.is_zero(form(v)) {
                return Ok(Some(v.col(0)));
            }
        }
    }
    Ok(None)
}

/// Restrict to the orthogonal complement of `span(x) + span(Vx)`.
fn split_off(sp: &UnitaryDSpace, x: &[Elem]) -> Result<UnitaryDSpace> {
    let g = &sp.graded;
    let r = &g.ring;
    let sx: Vec<Elem> = x.iter().map(|&e| r.frobenius(e, -1)).collect();
    let vx = g.v01.apply(r, &sx);
    // degree 0: <y, Vx> = 0 ; degree 1: <x, y> = 0
    let row0 = Mat::from_cols(g.dim0, &[sp.gram.apply(r, &vx)]).transpose();
    let row1 = Mat::from_cols(g.dim0, &[x.to_vec()]).transpose().mul(r, &sp.gram);
    let b0 = row0.kernel(r);
    let b1 = row1.kernel(r);
    let core = sp.restrict(&b0, &b1)?;
    core.validate(true)?;
    Ok(core)
}

/// Distinct fingerprints for all reference classes (sanity helper).
pub fn fingerprints_distinct(r: &Ring, n: usize) -> Result<bool> {
    let refs = reference_fingerprints(r, n)?;
    Ok(refs.iter().collect::<BTreeSet<_>>().len() == refs.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dieudonne::braid;

    #[test]
    fn references_classify_to_themselves() {
        for p in [3, 5] {
            let k = Ring::field(p, 2).unwrap();
            for n in 1..=4 {
                assert!(fingerprints_distinct(&k, n).unwrap(), "n = {n}, p = {p}");
                for rho in 1..=n {
                    let sp = braid_plus_superspecial(&k, rho, n).unwrap();
                    assert_eq!(classify(&sp).unwrap(), rho);
                }
            }
        }
    }

    #[test]
    fn supersingular_iff_odd() {
        let k = Ring::field(3, 2).unwrap();
        assert!(is_supersingular(&braid_plus_superspecial(&k, 3, 4).unwrap()).unwrap());
        assert!(!is_supersingular(&braid_plus_superspecial(&k, 2, 4).unwrap()).unwrap());
        assert!(is_supersingular(&braid_plus_superspecial(&k, 1, 4).unwrap()).unwrap());
    }

    #[test]
    fn braid_chain_appears_in_fingerprint() {
        // (V^* F)^r on the braid basis cuts degree 0 down to dimension n - r.
        let k = Ring::field(3, 2).unwrap();
        for n in 2..=5 {
            let fp = canonical_fingerprint(&braid(&k, n).unwrap()).unwrap();
            for r in 0..=n / 2 {
                assert!(fp.iter().any(|m| m[0].0 == n - r), "n = {n}, r = {r}: {fp:?}");
            }
        }
    }

    #[test]
    fn split_braid_with_superspecial() {
        let k = Ring::field(3, 2).unwrap();
        let sp = braid_plus_superspecial(&k, 2, 4).unwrap();
        let (core, m) = split_superspecial(&sp).unwrap();
        assert_eq!(m, 2);
        assert_eq!(classify(&core).unwrap(), 2);
        let (core, m) = split_superspecial(&braid(&k, 3).unwrap()).unwrap();
        assert_eq!((core.n(), m), (3, 0));
    }
}
