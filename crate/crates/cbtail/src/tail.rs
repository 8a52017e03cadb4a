//! Rank-based estimators of the lower and upper tail copulas and the tail
//! dependence coefficients, in a raw variant and a checkerboard-smoothed
//! variant.

use std::fmt;
use std::str::FromStr;

use crate::checkerboard::checkerboard_eval_fn;
use crate::empirical::PseudoSample;
use crate::error::{Error, Result};

/// Which corner of the unit square the estimator targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Lower,
    Upper,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Lower => "lower",
            Side::Upper => "upper",
        })
    }
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lower" => Ok(Side::Lower),
            "upper" => Ok(Side::Upper),
            other => Err(Error::Parse(format!(
                "unknown tail side {other:?}; expected \"lower\" or \"upper\""
            ))),
        }
    }
}

/// Whether the empirical copula is used directly or through its
/// checkerboard smoothing at resolution m.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Smoothing {
    Raw,
    Checkerboard,
}

impl fmt::Display for Smoothing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Smoothing::Raw => "raw",
            Smoothing::Checkerboard => "checkerboard",
        })
    }
}

impl FromStr for Smoothing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "raw" => Ok(Smoothing::Raw),
            "checkerboard" => Ok(Smoothing::Checkerboard),
            other => Err(Error::Parse(format!(
                "unknown smoothing {other:?}; expected \"raw\" or \"checkerboard\""
            ))),
        }
    }
}

/// One tail-copula evaluation. `clamped` records whether a rescaled
/// argument exceeded 1 and was pulled back to the unit square.
///
/// Values are reported unclipped. Lower-tail values are nonnegative by
/// construction; upper-tail values can undershoot zero by at most 2/k_n
/// (plus 8n/(k_n m) under smoothing) because the survival form uses the
/// exact arguments where the empirical margins are step functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailEstimate {
    pub value: f64,
    pub clamped: bool,
}

/// Tail copula estimator at sample size n with k_n tail order statistics:
/// the lower estimate at (x, y) is `(n/k_n) C*(k_n x/n, k_n y/n)` and the
/// upper estimate is the survival form
/// `(n/k_n) [k_n x/n + k_n y/n - 1 + C*(1 - k_n x/n, 1 - k_n y/n)]`,
/// where C* is the empirical copula or its checkerboard smoothing.
#[derive(Debug, Clone)]
pub struct TailEstimator {
    pseudo: PseudoSample,
    k_n: usize,
    m: usize,
    side: Side,
    smoothing: Smoothing,
    clamp: bool,
}

impl TailEstimator {
    /// Requires 1 <= k_n <= n and m >= 1. Argument clamping is on by
    /// default; see [`with_clamping`](Self::with_clamping).
    pub fn new(
        pseudo: PseudoSample,
        k_n: usize,
        m: usize,
        side: Side,
        smoothing: Smoothing,
    ) -> Result<Self> {
        let n = pseudo.n();
        if k_n == 0 || k_n > n {
            return Err(Error::InvalidParameter(format!(
                "k_n must satisfy 1 <= k_n <= n = {n}, got {k_n}"
            )));
        }
        if m == 0 {
            return Err(Error::InvalidParameter(
                "checkerboard resolution m must be at least 1".into(),
            ));
        }
        Ok(Self {
            pseudo,
            k_n,
            m,
            side,
            smoothing,
            clamp: true,
        })
    }

    /// With clamping on, rescaled arguments beyond 1 are pulled back to 1
    /// and flagged in the estimate; with it off they are an error. Values
    /// beyond the unit square would be extrapolation either way.
    pub fn with_clamping(mut self, clamp: bool) -> Self {
        self.clamp = clamp;
        self
    }

    pub fn pseudo(&self) -> &PseudoSample {
        &self.pseudo
    }

    pub fn k_n(&self) -> usize {
        self.k_n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn smoothing(&self) -> Smoothing {
        self.smoothing
    }

    fn rescale(&self, coord: f64, name: &str) -> Result<(f64, bool)> {
        if !coord.is_finite() || coord < 0.0 {
            return Err(Error::ArgumentOutOfRange(format!(
                "tail argument {name} must be finite and >= 0, got {coord}"
            )));
        }
        let n = self.pseudo.n() as f64;
        let u = self.k_n as f64 * coord / n;
        if u > 1.0 {
            if self.clamp {
                Ok((1.0, true))
            } else {
                Err(Error::ArgumentOutOfRange(format!(
                    "rescaled argument k_n {name}/n = {u} exceeds 1 and clamping is disabled"
                )))
            }
        } else {
            Ok((u, false))
        }
    }

    fn base_copula(&self, u: f64, v: f64) -> f64 {
        match self.smoothing {
            Smoothing::Raw => self.pseudo.eval(u, v),
            Smoothing::Checkerboard => {
                checkerboard_eval_fn(self.m, &mut |a, b| self.pseudo.eval(a, b), u, v)
            }
        }
    }

    /// Tail copula estimate at (x, y) with x, y >= 0 and rescaled
    /// arguments inside the unit square (subject to the clamp policy).
    pub fn estimate(&self, x: f64, y: f64) -> Result<TailEstimate> {
        let (u, cu) = self.rescale(x, "x")?;
        let (v, cv) = self.rescale(y, "y")?;
        let rate = self.pseudo.n() as f64 / self.k_n as f64;
        let value = match self.side {
            Side::Lower => rate * self.base_copula(u, v),
            Side::Upper => rate * (((u + v) - 1.0) + self.base_copula(1.0 - u, 1.0 - v)),
        };
        Ok(TailEstimate {
            value,
            clamped: cu || cv,
        })
    }

    /// Tail dependence coefficient estimate: the tail copula at (1, 1).
    pub fn lambda_hat(&self) -> Result<TailEstimate> {
        self.estimate(1.0, 1.0)
    }
}
