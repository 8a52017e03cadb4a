//! The bilinear grid-interpolation operator on the uniform m x m partition
//! of the unit square, and checkerboard copulas built from any evaluable
//! base function (model copula, empirical copula, weighted empirical
//! copula).

use std::io::{BufRead, Write};

use crate::empirical::PseudoSample;
use crate::error::{Error, Result};

/// Cell membership of a point: one-based cell indices and local coordinates.
/// Cells are half-open to the left, `((i-1)/m, i/m]`, except cell 1 which
/// also contains 0; at u = 1 the convention is i = m, mu_u = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellLocation {
    pub i: usize,
    pub j: usize,
    pub mu_u: f64,
    pub mu_v: f64,
}

/// Locate the grid cell containing (u, v). Arguments are clamped to [0, 1].
pub fn locate_cell(u: f64, v: f64, m: usize) -> CellLocation {
    assert!(m >= 1, "resolution must be positive");
    let (i, mu_u) = locate_axis(u, m);
    let (j, mu_v) = locate_axis(v, m);
    CellLocation { i, j, mu_u, mu_v }
}

fn locate_axis(u: f64, m: usize) -> (usize, f64) {
    let mf = m as f64;
    let t = mf * u.clamp(0.0, 1.0);
    let i = (t.floor() as usize + 1).min(m);
    let mu = (t - (i - 1) as f64).clamp(0.0, 1.0);
    (i, mu)
}

impl CellLocation {
    /// Convex corner weights in the order (i-1,j-1), (i,j-1), (i-1,j), (i,j).
    /// All four are nonnegative and their left-to-right sum is exactly 1.0:
    /// the first three partial products never exceed 1 and the last weight is
    /// their complement (within 4 ulp of mu_u * mu_v).
    pub fn corner_weights(&self) -> [f64; 4] {
        let (a, b) = (self.mu_u, self.mu_v);
        let (ac, bc) = (1.0 - a, 1.0 - b);
        let w00 = ac * bc;
        let w10 = a * bc;
        let w01 = ac * b;
        let partial = (w00 + w10) + w01;
        debug_assert!(partial <= 1.0);
        [w00, w10, w01, 1.0 - partial]
    }
}

fn combine(w: [f64; 4], c00: f64, c10: f64, c01: f64, c11: f64) -> f64 {
    (w[0] * c00 + w[1] * c10) + (w[2] * c01 + w[3] * c11)
}

/// Base-function values on the (m+1) x (m+1) corner lattice, row-major in
/// the u index: `corners[a * (m + 1) + b] = base(a/m, b/m)`. Immutable after
/// construction, so shared concurrent evaluation is safe.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckerboardGrid {
    m: usize,
    corners: Vec<f64>,
}

impl CheckerboardGrid {
    /// Evaluate `base` once per lattice corner.
    pub fn from_fn(m: usize, mut base: impl FnMut(f64, f64) -> f64) -> Result<Self> {
        Self::try_from_fn(m, |u, v| Ok(base(u, v)))
    }

    /// Like [`from_fn`](Self::from_fn) for fallible bases; the first base
    /// error aborts the build.
    pub fn try_from_fn(
        m: usize,
        mut base: impl FnMut(f64, f64) -> Result<f64>,
    ) -> Result<Self> {
        check_resolution(m)?;
        let mf = m as f64;
        let mut corners = Vec::with_capacity((m + 1) * (m + 1));
        for a in 0..=m {
            let u = a as f64 / mf;
            for b in 0..=m {
                corners.push(base(u, b as f64 / mf)?);
            }
        }
        Self::from_corners(m, corners)
    }

    /// Adopt precomputed corner values (row-major in the u index).
    pub fn from_corners(m: usize, corners: Vec<f64>) -> Result<Self> {
        check_resolution(m)?;
        if corners.len() != (m + 1) * (m + 1) {
            return Err(Error::InvalidParameter(format!(
                "expected {} corner values for resolution {m}, got {}",
                (m + 1) * (m + 1),
                corners.len()
            )));
        }
        if let Some(bad) = corners.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "non-finite corner value {bad}"
            )));
        }
        Ok(Self { m, corners })
    }

    /// Corner lattice of the empirical copula, built by a 2-D rank histogram
    /// in O(n + m^2) instead of O(n m^2) pointwise scans. Agrees bit-for-bit
    /// with `from_fn(m, |u, v| pseudo.eval(u, v))`: each observation is
    /// binned at the smallest lattice index whose coordinate is >= its
    /// pseudo-observation under the same f64 comparisons the scan performs.
    pub fn from_empirical(m: usize, pseudo: &PseudoSample) -> Result<Self> {
        check_resolution(m)?;
        let n = pseudo.n();
        let mp = m + 1;
        let mf = m as f64;
        let mut hist = vec![0u64; mp * mp];
        for (&u, &v) in pseudo.us().iter().zip(pseudo.vs()) {
            let a = first_index_at_or_above(u, m, mf);
            let b = first_index_at_or_above(v, m, mf);
            hist[a * mp + b] += 1;
        }
        for a in 0..mp {
            for b in 1..mp {
                hist[a * mp + b] += hist[a * mp + b - 1];
            }
        }
        for a in 1..mp {
            for b in 0..mp {
                hist[a * mp + b] += hist[(a - 1) * mp + b];
            }
        }
        let nf = n as f64;
        let corners = hist.into_iter().map(|c| c as f64 / nf).collect();
        Self::from_corners(m, corners)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn corners(&self) -> &[f64] {
        &self.corners
    }

    /// Value at lattice corner (a/m, b/m).
    pub fn corner(&self, a: usize, b: usize) -> f64 {
        assert!(a <= self.m && b <= self.m, "corner index out of range");
        self.corners[a * (self.m + 1) + b]
    }

    /// Bilinear interpolation at (u, v); arguments are clamped to [0, 1].
    pub fn eval(&self, u: f64, v: f64) -> f64 {
        let cell = locate_cell(u, v, self.m);
        let mp = self.m + 1;
        let base = (cell.i - 1) * mp + (cell.j - 1);
        combine(
            cell.corner_weights(),
            self.corners[base],
            self.corners[base + mp],
            self.corners[base + 1],
            self.corners[base + mp + 1],
        )
    }

    /// Text dump: header line, resolution, free-text base description, then
    /// one row of corners per line. Floats are printed in shortest
    /// round-trip form, so load reproduces the grid exactly.
    pub fn write_text(&self, description: &str, mut w: impl Write) -> Result<()> {
        writeln!(w, "checkerboard-grid v1")?;
        writeln!(w, "{}", self.m)?;
        writeln!(w, "{}", description.replace('\n', " "))?;
        let mp = self.m + 1;
        for a in 0..mp {
            let row: Vec<String> = (0..mp)
                .map(|b| format!("{}", self.corners[a * mp + b]))
                .collect();
            writeln!(w, "{}", row.join(" "))?;
        }
        Ok(())
    }

    /// Parse a [`write_text`](Self::write_text) dump; returns the grid and
    /// its stored description.
    pub fn read_text(r: impl BufRead) -> Result<(Self, String)> {
        let mut lines = r.lines();
        let mut next = |what: &str| -> Result<String> {
            lines
                .next()
                .transpose()?
                .ok_or_else(|| Error::Parse(format!("missing {what} line")))
        };
        let header = next("header")?;
        if header.trim() != "checkerboard-grid v1" {
            return Err(Error::Parse(format!("unrecognized header {header:?}")));
        }
        let m: usize = next("resolution")?
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("bad resolution: {e}")))?;
        check_resolution(m)?;
        let description = next("description")?;
        let mp = m + 1;
        let mut corners = Vec::with_capacity(mp * mp);
        for a in 0..mp {
            let row = next("corner row")?;
            let values: Vec<f64> = row
                .split_whitespace()
                .map(|s| {
                    s.parse()
                        .map_err(|e| Error::Parse(format!("bad corner value {s:?}: {e}")))
                })
                .collect::<Result<_>>()?;
            if values.len() != mp {
                return Err(Error::Parse(format!(
                    "corner row {a} has {} values, expected {mp}",
                    values.len()
                )));
            }
            corners.extend_from_slice(&values);
        }
        Ok((Self::from_corners(m, corners)?, description))
    }
}

fn check_resolution(m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidParameter(
            "checkerboard resolution must be at least 1".into(),
        ));
    }
    Ok(())
}

/// Smallest lattice index a with u <= a/m under f64 comparison. The float
/// seed from ceil is corrected by direct comparison so binning matches the
/// scan path exactly even when u*m rounds across an integer.
fn first_index_at_or_above(u: f64, m: usize, mf: f64) -> usize {
    let mut a = ((u * mf).ceil() as usize).min(m);
    while a > 0 && u <= (a - 1) as f64 / mf {
        a -= 1;
    }
    while u > a as f64 / mf {
        a += 1;
    }
    a
}

/// Lazy single-point checkerboard evaluation: calls `base` at the four cell
/// corners only. Bit-identical to building the full grid and interpolating,
/// for the same base values.
pub fn checkerboard_eval_fn(
    m: usize,
    base: &mut impl FnMut(f64, f64) -> f64,
    u: f64,
    v: f64,
) -> f64 {
    let cell = locate_cell(u, v, m);
    let mf = m as f64;
    let (u0, u1) = ((cell.i - 1) as f64 / mf, cell.i as f64 / mf);
    let (v0, v1) = ((cell.j - 1) as f64 / mf, cell.j as f64 / mf);
    combine(
        cell.corner_weights(),
        base(u0, v0),
        base(u1, v0),
        base(u0, v1),
        base(u1, v1),
    )
}
