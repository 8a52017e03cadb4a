//! Parametric bivariate copula families used as data generators and as
//! ground-truth references for the tail estimators.

use crate::empirical::BivariateSample;
use crate::error::{Error, Result};
use crate::numeric;
use rand::Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};

/// Bivariate copula family with known tail behaviour.
#[derive(Debug, Clone, PartialEq)]
pub enum CopulaModel {
    /// Product copula `uv`; no tail dependence.
    Independence,
    /// Upper Frechet bound `min(u, v)`; full tail dependence.
    Comonotone,
    /// Clayton copula `(u^-theta + v^-theta - 1)^(-1/theta)`, `theta > 0`.
    Clayton { theta: f64 },
    /// Gaussian copula with latent correlation `rho` in (-1, 1).
    Gaussian { rho: f64 },
    /// Student t copula with latent correlation `rho` in (-1, 1) and
    /// degrees of freedom `nu > 0`.
    StudentT { rho: f64, nu: f64 },
}

/// Limiting tail quantities of a model at the corner, plus the asymptotic
/// variance of the rescaled coefficient estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailOracle {
    /// Tail dependence coefficient, the tail copula at (1, 1).
    pub lambda: f64,
    /// Partial derivative of the tail copula in x at (1, 1).
    pub partial_x: f64,
    /// Partial derivative of the tail copula in y at (1, 1).
    pub partial_y: f64,
    /// Asymptotic variance of `sqrt(k_n) (lambda_hat - lambda)`.
    pub sigma2: f64,
}

/// Asymptotic variance of the rescaled coefficient estimator expressed
/// through the tail copula value and its corner partials `a` and `b`:
/// `lambda + a^2 + b^2 + 2 lambda ((a - 1)(b - 1) - 1)`.
pub fn sigma2_from_corner(lambda: f64, a: f64, b: f64) -> f64 {
    lambda + a * a + b * b + 2.0 * lambda * ((a - 1.0) * (b - 1.0) - 1.0)
}

/// Which corner of the square a tail quantity refers to.
pub use crate::tail::Side as TailSide;

impl CopulaModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            CopulaModel::Independence | CopulaModel::Comonotone => Ok(()),
            CopulaModel::Clayton { theta } => {
                if theta.is_finite() && theta > 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter(format!(
                        "clayton theta must be finite and > 0, got {theta}"
                    )))
                }
            }
            CopulaModel::Gaussian { rho } => {
                if rho.is_finite() && rho.abs() < 1.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter(format!(
                        "gaussian rho must lie in (-1, 1), got {rho}"
                    )))
                }
            }
            CopulaModel::StudentT { rho, nu } => {
                if !(rho.is_finite() && rho.abs() < 1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "student_t rho must lie in (-1, 1), got {rho}"
                    )));
                }
                if !(nu.is_finite() && nu > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "student_t nu must be finite and > 0, got {nu}"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Copula distribution function C(u, v) on the unit square.
    pub fn cdf(&self, u: f64, v: f64) -> Result<f64> {
        self.validate()?;
        if !(0.0..=1.0).contains(&u) || !(0.0..=1.0).contains(&v) {
            return Err(Error::ArgumentOutOfRange(format!(
                "copula arguments must lie in [0,1], got ({u}, {v})"
            )));
        }
        Ok(match *self {
            CopulaModel::Independence => u * v,
            CopulaModel::Comonotone => u.min(v),
            CopulaModel::Clayton { theta } => {
                if u == 0.0 || v == 0.0 {
                    0.0
                } else {
                    (u.powf(-theta) + v.powf(-theta) - 1.0).powf(-1.0 / theta)
                }
            }
            CopulaModel::Gaussian { rho } => {
                if u == 0.0 || v == 0.0 {
                    0.0
                } else if u == 1.0 {
                    v
                } else if v == 1.0 {
                    u
                } else {
                    numeric::bivariate_normal_cdf(
                        numeric::normal_quantile(u),
                        numeric::normal_quantile(v),
                        rho,
                    )
                }
            }
            CopulaModel::StudentT { rho, nu } => {
                if u == 0.0 || v == 0.0 {
                    0.0
                } else if u == 1.0 {
                    v
                } else if v == 1.0 {
                    u
                } else {
                    numeric::bivariate_t_cdf(
                        numeric::student_t_quantile(u, nu),
                        numeric::student_t_quantile(v, nu),
                        rho,
                        nu,
                    )
                }
            }
        })
    }

    /// Draw `n` pairs from the copula (uniform margins).
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<BivariateSample> {
        self.validate()?;
        if n == 0 {
            return Err(Error::InvalidParameter("sample size must be >= 1".into()));
        }
        let mut xs = Vec::with_capacity(n);
        let mut ys = Vec::with_capacity(n);
        // (0, 1] uniforms; the zero endpoint would break inversion formulas.
        let unit = |rng: &mut R| 1.0 - rng.random::<f64>();
        match *self {
            CopulaModel::Independence => {
                for _ in 0..n {
                    xs.push(unit(rng));
                    ys.push(unit(rng));
                }
            }
            CopulaModel::Comonotone => {
                for _ in 0..n {
                    let u = unit(rng);
                    xs.push(u);
                    ys.push(u);
                }
            }
            CopulaModel::Clayton { theta } => {
                // Conditional inversion: given U = u and W uniform,
                // V = (u^-theta (W^(-theta/(1+theta)) - 1) + 1)^(-1/theta).
                for _ in 0..n {
                    let u = unit(rng);
                    let w = unit(rng);
                    let v = (u.powf(-theta) * (w.powf(-theta / (1.0 + theta)) - 1.0) + 1.0)
                        .powf(-1.0 / theta);
                    xs.push(u);
                    ys.push(v);
                }
            }
            CopulaModel::Gaussian { rho } => {
                let cross = (1.0 - rho * rho).sqrt();
                for _ in 0..n {
                    let z1: f64 = rng.sample(StandardNormal);
                    let z2: f64 = rng.sample(StandardNormal);
                    xs.push(numeric::normal_cdf(z1));
                    ys.push(numeric::normal_cdf(rho * z1 + cross * z2));
                }
            }
            CopulaModel::StudentT { rho, nu } => {
                let cross = (1.0 - rho * rho).sqrt();
                let chi2 = ChiSquared::new(nu)
                    .map_err(|e| Error::InvalidParameter(format!("chi-squared({nu}): {e}")))?;
                for _ in 0..n {
                    let z1: f64 = rng.sample(StandardNormal);
                    let z2: f64 = rng.sample(StandardNormal);
                    let w: f64 = chi2.sample(rng);
                    let scale = (nu / w).sqrt();
                    xs.push(numeric::student_t_cdf(z1 * scale, nu));
                    ys.push(numeric::student_t_cdf((rho * z1 + cross * z2) * scale, nu));
                }
            }
        }
        BivariateSample::new(xs, ys)
    }

    /// Lower tail copula `Lambda_L(x, y) = lim_{t -> 0} C(t x, t y) / t`.
    ///
    /// Closed form for Independence, Comonotone and Clayton; a staged
    /// numerical limit for the elliptical families.
    pub fn lower_tail_copula(&self, x: f64, y: f64) -> Result<f64> {
        self.validate()?;
        check_tail_args(x, y)?;
        match *self {
            CopulaModel::Independence => Ok(0.0),
            CopulaModel::Comonotone => Ok(x.min(y)),
            CopulaModel::Clayton { theta } => Ok(clayton_tail(theta, x, y)),
            CopulaModel::Gaussian { .. } | CopulaModel::StudentT { .. } => {
                self.tail_limit_numeric(x, y, TailSide::Lower)
            }
        }
    }

    /// Upper tail copula
    /// `Lambda_U(x, y) = lim_{t -> 0} (t x + t y - 1 + C(1 - t x, 1 - t y)) / t`.
    pub fn upper_tail_copula(&self, x: f64, y: f64) -> Result<f64> {
        self.validate()?;
        check_tail_args(x, y)?;
        match *self {
            CopulaModel::Independence => Ok(0.0),
            CopulaModel::Comonotone => Ok(x.min(y)),
            // The Clayton upper corner is asymptotically independent:
            // t x + t y - 1 + C(1 - t x, 1 - t y) = (1 + theta) t^2 x y + o(t^2).
            CopulaModel::Clayton { .. } => Ok(0.0),
            // Elliptical copulas are radially symmetric, so the upper tail
            // copula coincides with the lower one.
            CopulaModel::Gaussian { .. } | CopulaModel::StudentT { .. } => {
                self.tail_limit_numeric(x, y, TailSide::Lower)
            }
        }
    }

    /// Evaluate the defining limit numerically at t = 1e-3, 1e-4, 1e-5 and
    /// extrapolate the geometric tail with Aitken's delta-squared step.
    /// Errors when the stage values do not contract.
    pub fn tail_limit_numeric(&self, x: f64, y: f64, side: TailSide) -> Result<f64> {
        check_tail_args(x, y)?;
        if x == 0.0 || y == 0.0 {
            return Ok(0.0);
        }
        let scale = x.max(y);
        if scale * 1e-3 > 1.0 {
            return Err(Error::ArgumentOutOfRange(format!(
                "tail arguments ({x}, {y}) too large for the numerical limit"
            )));
        }
        let mut stage = [0.0; 3];
        for (idx, t) in [1e-3, 1e-4, 1e-5].into_iter().enumerate() {
            stage[idx] = match side {
                TailSide::Lower => self.cdf(t * x, t * y)? / t,
                TailSide::Upper => (t * x + t * y - 1.0 + self.cdf(1.0 - t * x, 1.0 - t * y)?) / t,
            };
        }
        aitken_extrapolate(stage[0], stage[1], stage[2])
    }

    /// Tail quantities at the requested corner: coefficient, corner partials
    /// of the tail copula and the asymptotic variance of the rescaled
    /// coefficient estimator.
    ///
    /// Supported where the corner limit is known or numerically stable:
    /// Independence and Comonotone (both corners), Clayton (both corners),
    /// Student t (both corners, numerical). The Gaussian corner limit is
    /// degenerate with a slowly varying rate, so no oracle is offered.
    pub fn tail_oracle(&self, side: TailSide) -> Result<TailOracle> {
        self.validate()?;
        match (self, side) {
            (CopulaModel::Independence, _) => Ok(oracle_from(0.0, 0.0, 0.0)),
            // min(x, y) has no corner gradient; the symmetric subgradient
            // (1/2, 1/2) is the convention and yields the degenerate variance.
            (CopulaModel::Comonotone, _) => Ok(oracle_from(1.0, 0.5, 0.5)),
            (CopulaModel::Clayton { theta }, TailSide::Lower) => {
                let lambda = 2f64.powf(-1.0 / theta);
                // d/dx (x^-t + y^-t)^(-1/t) at (1,1) = 2^(-1/t - 1).
                Ok(oracle_from(lambda, 0.5 * lambda, 0.5 * lambda))
            }
            (CopulaModel::Clayton { .. }, TailSide::Upper) => Ok(oracle_from(0.0, 0.0, 0.0)),
            (CopulaModel::StudentT { .. }, _) => {
                // Radial symmetry: both corners share the lower-corner limit.
                let lambda = self.tail_limit_numeric(1.0, 1.0, TailSide::Lower)?;
                let h = 0.05;
                let px = (self.tail_limit_numeric(1.0 + h, 1.0, TailSide::Lower)?
                    - self.tail_limit_numeric(1.0 - h, 1.0, TailSide::Lower)?)
                    / (2.0 * h);
                let py = (self.tail_limit_numeric(1.0, 1.0 + h, TailSide::Lower)?
                    - self.tail_limit_numeric(1.0, 1.0 - h, TailSide::Lower)?)
                    / (2.0 * h);
                Ok(oracle_from(lambda, px, py))
            }
            (CopulaModel::Gaussian { .. }, _) => {
                Err(Error::OracleUnavailable(self.label()))
            }
        }
    }

    /// Short display label, also used in result tables (comma-free).
    pub fn label(&self) -> String {
        match *self {
            CopulaModel::Independence => "independence".into(),
            CopulaModel::Comonotone => "comonotone".into(),
            CopulaModel::Clayton { theta } => format!("clayton(theta={theta})"),
            CopulaModel::Gaussian { rho } => format!("gaussian(rho={rho})"),
            CopulaModel::StudentT { rho, nu } => format!("student_t(rho={rho};nu={nu})"),
        }
    }
}

fn check_tail_args(x: f64, y: f64) -> Result<()> {
    if x.is_finite() && y.is_finite() && x >= 0.0 && y >= 0.0 {
        Ok(())
    } else {
        Err(Error::ArgumentOutOfRange(format!(
            "tail copula arguments must be finite and >= 0, got ({x}, {y})"
        )))
    }
}

fn clayton_tail(theta: f64, x: f64, y: f64) -> f64 {
    if x == 0.0 || y == 0.0 {
        0.0
    } else {
        (x.powf(-theta) + y.powf(-theta)).powf(-1.0 / theta)
    }
}

fn oracle_from(lambda: f64, a: f64, b: f64) -> TailOracle {
    TailOracle {
        lambda,
        partial_x: a,
        partial_y: b,
        sigma2: sigma2_from_corner(lambda, a, b),
    }
}

/// Aitken delta-squared extrapolation of a geometrically converging
/// sequence f1, f2, f3 (successive refinements). Errors when the increments
/// fail to contract, which signals a divergent or too-slow limit.
fn aitken_extrapolate(f1: f64, f2: f64, f3: f64) -> Result<f64> {
    let d1 = f2 - f1;
    let d2 = f3 - f2;
    let scale = 1.0 + f3.abs();
    if d2.abs() <= 1e-12 * scale {
        return Ok(f3);
    }
    if d2.abs() >= d1.abs() {
        return Err(Error::LimitDiverged(format!(
            "stage values {f1}, {f2}, {f3} do not contract"
        )));
    }
    let limit = f3 - d2 * d2 / (d2 - d1);
    if limit.is_finite() {
        Ok(limit)
    } else {
        Err(Error::LimitDiverged(format!(
            "extrapolation from {f1}, {f2}, {f3} is not finite"
        )))
    }
}
