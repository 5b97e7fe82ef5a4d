//! Newton polygons of signature `(n-1, 1)` and the Ekedahl-Oort table.

use std::fmt;

use num_rational::Ratio;
use serde::Serialize;

use crate::automorphisms::dim_aut_formula;
use crate::error::{Error, Result};

pub type Q = Ratio<i64>;

/// Slope multiset, sorted ascending with merged multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NewtonPolygon {
    slopes: Vec<(Q, usize)>,
}

impl NewtonPolygon {
    pub fn new(parts: impl IntoIterator<Item = (Q, usize)>) -> NewtonPolygon {
        let mut v: Vec<(Q, usize)> = parts.into_iter().filter(|&(_, m)| m > 0).collect();
        v.sort();
        let mut merged: Vec<(Q, usize)> = Vec::new();
        for (s, m) in v {
            match merged.last_mut() {
                Some((ls, lm)) if *ls == s => *lm += m,
                _ => merged.push((s, m)),
            }
        }
        NewtonPolygon { slopes: merged }
    }

    pub fn slopes(&self) -> &[(Q, usize)] {
        &self.slopes
    }

    /// Total multiplicity (the height).
    pub fn height(&self) -> usize {
        self.slopes.iter().map(|&(_, m)| m).sum()
    }

    /// Total rise of the polygon.
    pub fn mass(&self) -> Q {
        self.slopes.iter().map(|&(s, m)| s * Q::from(m as i64)).sum()
    }

    /// Heights of the lower convex graph at `x = 0..=height`.
    pub fn graph(&self) -> Vec<Q> {
        let mut out = vec![Q::from(0)];
        let mut y = Q::from(0);
        for &(s, m) in &self.slopes {
            for _ in 0..m {
                y += s;
                out.push(y);
            }
        }
        out
    }

    /// Invariant under `s -> 1 - s`.
    pub fn is_symmetric(&self) -> bool {
        let mirrored = NewtonPolygon::new(self.slopes.iter().map(|&(s, m)| (Q::from(1) - s, m)));
        mirrored == *self
    }

    /// Breakpoints lie on integer lattice points.
    pub fn has_integral_breakpoints(&self) -> bool {
        let mut y = Q::from(0);
        self.slopes.iter().all(|&(s, m)| {
            y += s * Q::from(m as i64);
            y.is_integer()
        })
    }

    /// Formats as `slope:mult,...`.
    pub fn to_compact(&self) -> String {
        self.slopes.iter().map(|(s, m)| format!("{s}:{m}")).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for NewtonPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_compact())
    }
}

/// Polygon of `N(r) + N_{1/2}^{n-2r}`. For odd `r` the two simple pieces
/// appear squared, which gives the same slope multiset.
pub fn polygon_of_isoindex(r: usize, n: usize) -> Result<NewtonPolygon> {
    if r > n / 2 {
        return Err(Error::InvalidParams(format!("isocrystal index {r} exceeds n/2 for n = {n}")));
    }
    if r == 0 {
        return Ok(NewtonPolygon::new([(Q::new(1, 2), 2 * n)]));
    }
    let ri = r as i64;
    Ok(NewtonPolygon::new([
        (Q::new(ri - 1, 2 * ri), 2 * r),
        (Q::new(ri + 1, 2 * ri), 2 * r),
        (Q::new(1, 2), 2 * (n - 2 * r)),
    ]))
}

/// Admissible first slopes `1/2 - 1/(2r)` for `1 <= r <= n/2`, and `1/2` for `r = 0`.
pub fn admissible_first_slopes(n: usize) -> Vec<(usize, Q)> {
    let mut v = vec![(0, Q::new(1, 2))];
    for r in 1..=n / 2 {
        v.push((r, Q::new(1, 2) - Q::new(1, 2 * r as i64)));
    }
    v
}

fn check_rho(rho: usize, n: usize) -> Result<()> {
    if rho == 0 || rho > n {
        return Err(Error::InvalidParams(format!("need 1 <= rho <= n, got rho = {rho}, n = {n}")));
    }
    Ok(())
}

/// Newton polygon of the EO stratum `rho`: supersingular for odd `rho`,
/// index `rho/2` otherwise.
pub fn eo_to_polygon(rho: usize, n: usize) -> Result<NewtonPolygon> {
    check_rho(rho, n)?;
    if rho % 2 == 1 { polygon_of_isoindex(0, n) } else { polygon_of_isoindex(rho / 2, n) }
}

pub fn codim_eo(rho: usize, n: usize) -> Result<usize> {
    dim_aut_formula(rho, n)
}

pub fn dim_supersingular(n: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::InvalidParams("n must be at least 1".into()));
    }
    Ok((n - 1) / 2)
}

/// True iff `a` lies weakly above `b` at every integer abscissa.
pub fn polygon_leq(a: &NewtonPolygon, b: &NewtonPolygon) -> Result<bool> {
    if a.height() != b.height() || a.mass() != b.mass() {
        return Err(Error::IncomparableEndpoints(format!(
            "({}, {}) vs ({}, {})",
            a.height(),
            a.mass(),
            b.height(),
            b.mass()
        )));
    }
    Ok(a.graph().iter().zip(b.graph()).all(|(ya, yb)| *ya >= yb))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratumRow {
    pub rho: usize,
    pub codim: usize,
    #[serde(serialize_with = "ser_polygon")]
    pub polygon: NewtonPolygon,
    pub supersingular: bool,
}

fn ser_polygon<S: serde::Serializer>(p: &NewtonPolygon, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_compact())
}

/// One row per EO stratum, with consistency checks between codimensions and
/// the polygon order.
pub fn strata_table(n: usize) -> Result<Vec<StratumRow>> {
    if n < 2 {
        return Err(Error::InvalidParams("strata tables need n >= 2".into()));
    }
    let rows: Vec<StratumRow> = (1..=n)
        .map(|rho| {
            Ok(StratumRow {
                rho,
                codim: codim_eo(rho, n)?,
                polygon: eo_to_polygon(rho, n)?,
                supersingular: rho % 2 == 1,
            })
        })
        .collect::<Result<_>>()?;
    let min_odd = rows.iter().filter(|r| r.supersingular).map(|r| r.codim).min().expect("rho = 1 is odd");
    if min_odd != (n - 1) - dim_supersingular(n)? {
        return Err(Error::InvariantViolation("supersingular codimension disagrees with its dimension".into()));
    }
    for a in &rows {
        for b in &rows {
            // strictly more special polygon => strictly larger codimension
            if polygon_leq(&a.polygon, &b.polygon)? && a.polygon != b.polygon && a.codim <= b.codim {
                return Err(Error::InvariantViolation(format!("codimensions of rho = {} and {} are out of order", a.rho, b.rho)));
            }
        }
    }
    Ok(rows)
}
