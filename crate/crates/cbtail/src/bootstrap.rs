//! Direct multiplier bootstrap for the checkerboard tail estimators:
//! positive i.i.d. multiplier draws reweight both margins and the joint
//! distribution, the reweighted checkerboard tail value is recomputed, and
//! the scaled differences form the reference distribution for quantile
//! confidence intervals.

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;

use crate::checkerboard::checkerboard_eval_fn;
use crate::empirical::{ranks, BivariateSample, PreparedSample, WeightedEvaluator};
use crate::error::{Error, Result};
use crate::seed::{stream_rng, STREAM_BOOT};
use crate::tail::{Side, Smoothing, TailEstimator};

/// Positive multiplier law with known mean and standard deviation. The
/// scaling of bootstrap replicates uses the analytic mu and tau, not sample
/// estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MultiplierLaw {
    /// Standard exponential: mu = 1, tau = 1.
    StdExponential,
    /// Uniform on [center - halfwidth, center + halfwidth]; requires
    /// 0 < halfwidth < center so the support stays positive and tau > 0.
    /// Small halfwidths probe the near-degenerate limit.
    Uniform { center: f64, halfwidth: f64 },
}

impl MultiplierLaw {
    pub fn validate(&self) -> Result<()> {
        match *self {
            MultiplierLaw::StdExponential => Ok(()),
            MultiplierLaw::Uniform { center, halfwidth } => {
                if center.is_finite()
                    && halfwidth.is_finite()
                    && halfwidth > 0.0
                    && center > halfwidth
                {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter(format!(
                        "uniform multiplier law needs 0 < halfwidth < center, \
                         got center {center}, halfwidth {halfwidth}"
                    )))
                }
            }
        }
    }

    /// Analytic mean.
    pub fn mu(&self) -> f64 {
        match *self {
            MultiplierLaw::StdExponential => 1.0,
            MultiplierLaw::Uniform { center, .. } => center,
        }
    }

    /// Analytic standard deviation.
    pub fn tau(&self) -> f64 {
        match *self {
            MultiplierLaw::StdExponential => 1.0,
            MultiplierLaw::Uniform { halfwidth, .. } => halfwidth / 3f64.sqrt(),
        }
    }
}

/// One vector of positive multipliers with its sample mean. The induced
/// weights xi_i / (n xi_bar) sum to 1 by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierDraw {
    xi: Vec<f64>,
    xi_bar: f64,
}

impl MultiplierDraw {
    pub fn from_values(xi: Vec<f64>) -> Result<Self> {
        if xi.is_empty() {
            return Err(Error::InvalidParameter(
                "multiplier draw must be nonempty".into(),
            ));
        }
        for (index, &value) in xi.iter().enumerate() {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::InvalidMultiplier { index, value });
            }
        }
        let xi_bar = xi.iter().sum::<f64>() / xi.len() as f64;
        Ok(Self { xi, xi_bar })
    }

    pub fn values(&self) -> &[f64] {
        &self.xi
    }

    pub fn mean(&self) -> f64 {
        self.xi_bar
    }

    pub fn len(&self) -> usize {
        self.xi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xi.is_empty()
    }

    /// Largest normalized weight, `max_i xi_i / (n xi_bar)`: the maximal
    /// jump of the reweighted margins.
    pub fn delta_n(&self) -> f64 {
        let max = self.xi.iter().fold(0.0f64, |m, &x| m.max(x));
        max / (self.xi.len() as f64 * self.xi_bar)
    }
}

/// Draw n i.i.d. multipliers from `law`.
pub fn draw_multipliers<R: Rng + ?Sized>(
    law: &MultiplierLaw,
    n: usize,
    rng: &mut R,
) -> Result<MultiplierDraw> {
    law.validate()?;
    if n == 0 {
        return Err(Error::InvalidParameter(
            "multiplier draw needs n >= 1".into(),
        ));
    }
    let xi = match *law {
        MultiplierLaw::StdExponential => {
            (0..n).map(|_| Exp1.sample(rng)).collect::<Vec<f64>>()
        }
        MultiplierLaw::Uniform { center, halfwidth } => (0..n)
            .map(|_| center + halfwidth * (2.0 * rng.random::<f64>() - 1.0))
            .collect(),
    };
    MultiplierDraw::from_values(xi)
}

/// Reweighted checkerboard tail value at (x, y): the tail rescaling of the
/// checkerboard smoothing of the multiplier-weighted empirical copula.
/// Rescaled arguments beyond 1 are clamped to 1, mirroring the default
/// estimator policy.
fn weighted_tail_value(
    eval: &WeightedEvaluator<'_>,
    n: usize,
    k_n: usize,
    m: usize,
    side: Side,
    x: f64,
    y: f64,
) -> Result<f64> {
    if !x.is_finite() || x < 0.0 || !y.is_finite() || y < 0.0 {
        return Err(Error::ArgumentOutOfRange(format!(
            "tail arguments must be finite and >= 0, got ({x}, {y})"
        )));
    }
    let nf = n as f64;
    let kf = k_n as f64;
    let u = (kf * x / nf).min(1.0);
    let v = (kf * y / nf).min(1.0);
    let rate = nf / kf;
    let mut base = |a: f64, b: f64| eval.eval(a, b);
    let value = match side {
        Side::Lower => rate * checkerboard_eval_fn(m, &mut base, u, v),
        Side::Upper => {
            rate * (((u + v) - 1.0) + checkerboard_eval_fn(m, &mut base, 1.0 - u, 1.0 - v))
        }
    };
    Ok(value)
}

/// One bootstrap replicate of the tail copula at (x, y) under a given
/// multiplier draw. Convenience one-shot; the distribution builder reuses
/// its rank preparation across replicates.
pub fn bootstrap_tail_replicate(
    sample: &BivariateSample,
    draw: &MultiplierDraw,
    k_n: usize,
    m: usize,
    side: Side,
    x: f64,
    y: f64,
) -> Result<f64> {
    let pseudo = ranks(sample)?;
    check_tail_parameters(pseudo.n(), k_n, m)?;
    let prep = PreparedSample::new(&pseudo);
    let mut eval = WeightedEvaluator::new(&prep);
    eval.load(draw)?;
    weighted_tail_value(&eval, pseudo.n(), k_n, m, side, x, y)
}

fn check_tail_parameters(n: usize, k_n: usize, m: usize) -> Result<()> {
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
    Ok(())
}

/// Sorted scaled bootstrap replicates
/// `(mu/tau) sqrt(k_n) (lambda_reweighted - lambda_hat)` together with the
/// centering value they were computed against.
#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapDistribution {
    replicates: Vec<f64>,
    center: f64,
}

impl BootstrapDistribution {
    pub fn new(mut replicates: Vec<f64>, center: f64) -> Result<Self> {
        if replicates.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "bootstrap distribution needs at least 2 replicates, got {}",
                replicates.len()
            )));
        }
        if let Some(bad) = replicates.iter().find(|r| !r.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "non-finite bootstrap replicate {bad}"
            )));
        }
        replicates.sort_by(f64::total_cmp);
        Ok(Self { replicates, center })
    }

    /// Replicates in ascending order.
    pub fn replicates(&self) -> &[f64] {
        &self.replicates
    }

    pub fn len(&self) -> usize {
        self.replicates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.replicates.is_empty()
    }

    /// Checkerboard tail dependence estimate the replicates were centered
    /// on.
    pub fn center(&self) -> f64 {
        self.center
    }

    /// Lower-nearest-order-statistic empirical quantile: the order
    /// statistic at index max(ceil(p B), 1), computed in f64. This frozen
    /// convention makes quantiles reproducible without interpolation.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::ArgumentOutOfRange(format!(
                "quantile level must lie in [0,1], got {p}"
            )));
        }
        let b = self.replicates.len();
        let rank = ((p * b as f64).ceil() as usize).clamp(1, b);
        Ok(self.replicates[rank - 1])
    }
}

/// Full bootstrap distribution of the tail dependence coefficient at
/// (1, 1): B independent multiplier draws on fixed data, each yielding one
/// scaled replicate. Replicate b draws its multipliers from a dedicated
/// stream derived from `master_seed` and the replicate index, so any
/// parallel schedule produces the identical distribution.
pub fn bootstrap_distribution(
    sample: &BivariateSample,
    law: &MultiplierLaw,
    k_n: usize,
    m: usize,
    side: Side,
    b_count: usize,
    master_seed: u64,
) -> Result<BootstrapDistribution> {
    law.validate()?;
    if b_count < 2 {
        return Err(Error::InvalidParameter(format!(
            "bootstrap needs at least 2 replicates, got {b_count}"
        )));
    }
    let pseudo = ranks(sample)?;
    let n = pseudo.n();
    check_tail_parameters(n, k_n, m)?;
    let center = TailEstimator::new(pseudo.clone(), k_n, m, side, Smoothing::Checkerboard)?
        .lambda_hat()?
        .value;
    let prep = PreparedSample::new(&pseudo);
    let scale = law.mu() / law.tau() * (k_n as f64).sqrt();
    let replicates: Vec<f64> = (0..b_count)
        .into_par_iter()
        .map_init(
            || WeightedEvaluator::new(&prep),
            |eval, b| -> Result<f64> {
                let mut rng = stream_rng(master_seed, &[STREAM_BOOT, b as u64]);
                let draw = draw_multipliers(law, n, &mut rng)?;
                eval.load(&draw)?;
                let value = weighted_tail_value(eval, n, k_n, m, side, 1.0, 1.0)?;
                Ok(scale * (value - center))
            },
        )
        .collect::<Result<_>>()?;
    BootstrapDistribution::new(replicates, center)
}

/// Two-sided quantile-inversion confidence interval. `lo`/`hi` are clamped
/// to [0, 1] for coefficient reporting; the unclamped endpoints are kept
/// alongside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfidenceInterval {
    pub lo: f64,
    pub hi: f64,
    pub raw_lo: f64,
    pub raw_hi: f64,
    pub level: f64,
    pub clamped: bool,
}

/// Invert the bootstrap distribution around `lambda_hat`: with gamma =
/// 1 - level, lo = lambda_hat - q_{1-gamma/2}/sqrt(k_n) and
/// hi = lambda_hat - q_{gamma/2}/sqrt(k_n).
pub fn confidence_interval(
    dist: &BootstrapDistribution,
    lambda_hat: f64,
    k_n: usize,
    level: f64,
) -> Result<ConfidenceInterval> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "confidence level must lie in (0,1), got {level}"
        )));
    }
    if k_n == 0 {
        return Err(Error::InvalidParameter("k_n must be positive".into()));
    }
    if !lambda_hat.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "lambda_hat must be finite, got {lambda_hat}"
        )));
    }
    let gamma = 1.0 - level;
    let root_k = (k_n as f64).sqrt();
    let raw_lo = lambda_hat - dist.quantile(1.0 - gamma / 2.0)? / root_k;
    let raw_hi = lambda_hat - dist.quantile(gamma / 2.0)? / root_k;
    let lo = raw_lo.clamp(0.0, 1.0);
    let hi = raw_hi.clamp(0.0, 1.0);
    Ok(ConfidenceInterval {
        lo,
        hi,
        raw_lo,
        raw_hi,
        level,
        clamped: lo != raw_lo || hi != raw_hi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::CopulaModel;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    fn random_sample(n: usize, seed: u64) -> BivariateSample {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        BivariateSample::new(
            (0..n).map(|_| rng.random::<f64>()).collect(),
            (0..n).map(|_| rng.random::<f64>()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn law_validation_and_moments() {
        assert!(MultiplierLaw::StdExponential.validate().is_ok());
        assert_eq!(MultiplierLaw::StdExponential.mu(), 1.0);
        assert_eq!(MultiplierLaw::StdExponential.tau(), 1.0);
        let uni = MultiplierLaw::Uniform {
            center: 2.0,
            halfwidth: 0.5,
        };
        assert!(uni.validate().is_ok());
        assert_eq!(uni.mu(), 2.0);
        close(uni.tau(), 0.5 / 3f64.sqrt(), 1e-15);
        for bad in [
            MultiplierLaw::Uniform {
                center: 1.0,
                halfwidth: 1.0,
            },
            MultiplierLaw::Uniform {
                center: 1.0,
                halfwidth: 0.0,
            },
            MultiplierLaw::Uniform {
                center: f64::NAN,
                halfwidth: 0.1,
            },
        ] {
            assert!(bad.validate().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn exponential_draws_match_their_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = 1_000_000;
        let draw = draw_multipliers(&MultiplierLaw::StdExponential, n, &mut rng).unwrap();
        close(draw.mean(), 1.0, 0.01);
        let var = draw
            .values()
            .iter()
            .map(|&x| (x - draw.mean()).powi(2))
            .sum::<f64>()
            / (n - 1) as f64;
        close(var.sqrt(), 1.0, 0.01);
        // Normalized weights sum to one by the defining identity.
        let weight_sum: f64 = draw.values().iter().map(|&x| x / draw.mean()).sum();
        close(weight_sum, n as f64, 1e-9 * n as f64);
    }

    #[test]
    fn maximal_weight_grows_at_most_logarithmically() {
        let n = 10_000;
        let bound = 3.0 * (n as f64).ln() / n as f64;
        for seed in 0..200 {
            let mut rng = ChaCha8Rng::seed_from_u64(5000 + seed);
            let draw = draw_multipliers(&MultiplierLaw::StdExponential, n, &mut rng).unwrap();
            assert!(draw.delta_n() < bound, "seed {seed}: {}", draw.delta_n());
        }
    }

    #[test]
    fn draw_validation_rejects_bad_input() {
        assert!(MultiplierDraw::from_values(vec![]).is_err());
        assert!(MultiplierDraw::from_values(vec![1.0, 0.0]).is_err());
        assert!(MultiplierDraw::from_values(vec![1.0, -2.0]).is_err());
        assert!(MultiplierDraw::from_values(vec![1.0, f64::INFINITY]).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(draw_multipliers(&MultiplierLaw::StdExponential, 0, &mut rng).is_err());
    }

    #[test]
    fn equal_multipliers_collapse_to_the_unweighted_value() {
        let (n, k, m) = (200usize, 20usize, 16usize);
        let sample = random_sample(n, 8);
        let draw = MultiplierDraw::from_values(vec![3.7; n]).unwrap();
        // The sum of n copies of 3.7 rounds, so delta_n is 1/n only to dust.
        close(draw.delta_n(), 1.0 / n as f64, 1e-15);
        let pseudo = ranks(&sample).unwrap();
        for side in [Side::Lower, Side::Upper] {
            let center = TailEstimator::new(pseudo.clone(), k, m, side, Smoothing::Checkerboard)
                .unwrap()
                .lambda_hat()
                .unwrap()
                .value;
            let replicate =
                bootstrap_tail_replicate(&sample, &draw, k, m, side, 1.0, 1.0).unwrap();
            // The composed inverses land on the rank at or above each grid
            // corner, so the collapse holds up to a 2 Delta_n rank offset
            // rescaled by n/k.
            let slack = (n as f64 / k as f64) * 2.0 * draw.delta_n();
            close(replicate, center, slack + 1e-12);
        }
    }

    #[test]
    fn near_degenerate_multipliers_match_the_constant_path() {
        let (n, k, m) = (100usize, 10usize, 8usize);
        let sample = random_sample(n, 9);
        let constant = MultiplierDraw::from_values(vec![1.0; n]).unwrap();
        let reference =
            bootstrap_tail_replicate(&sample, &constant, k, m, Side::Lower, 1.0, 1.0).unwrap();
        let law = MultiplierLaw::Uniform {
            center: 1.0,
            halfwidth: 1e-12,
        };
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(700 + seed);
            let draw = draw_multipliers(&law, n, &mut rng).unwrap();
            let value =
                bootstrap_tail_replicate(&sample, &draw, k, m, Side::Lower, 1.0, 1.0).unwrap();
            close(value, reference, 1e-9);
        }
    }

    #[test]
    fn comonotone_replicates_stay_within_one_weight_jump_of_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 256;
        let xs: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| 2.0 * x - 1.0).collect();
        let sample = BivariateSample::new(xs, ys).unwrap();
        let (k, m) = (32usize, 64usize);
        for seed in 0..25 {
            let mut rng = ChaCha8Rng::seed_from_u64(900 + seed);
            let draw = draw_multipliers(&MultiplierLaw::StdExponential, n, &mut rng).unwrap();
            let cap = 1.0 + n as f64 / k as f64 * draw.delta_n();
            for side in [Side::Lower, Side::Upper] {
                let value =
                    bootstrap_tail_replicate(&sample, &draw, k, m, side, 1.0, 1.0).unwrap();
                assert!(
                    (1.0 - 1e-12..=cap + 1e-12).contains(&value),
                    "{side}: {value} cap {cap}"
                );
            }
        }
    }

    #[test]
    fn zero_argument_grounds_replicates() {
        let sample = random_sample(64, 12);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let draw = draw_multipliers(&MultiplierLaw::StdExponential, 64, &mut rng).unwrap();
        let value = bootstrap_tail_replicate(&sample, &draw, 8, 16, Side::Lower, 0.0, 1.0)
            .unwrap();
        assert_eq!(value, 0.0);
        let value = bootstrap_tail_replicate(&sample, &draw, 8, 16, Side::Lower, 1.0, 0.0)
            .unwrap();
        assert_eq!(value, 0.0);
    }

    /// Pathwise gap between the weighted copula and its checkerboard: each
    /// corner is at most one cell pitch away in each coordinate plus two
    /// maximal weight jumps.
    #[test]
    fn weighted_checkerboard_gap_is_bounded_per_draw() {
        let (n, m) = (150usize, 12usize);
        let sample = random_sample(n, 14);
        let pseudo = ranks(&sample).unwrap();
        let prep = PreparedSample::new(&pseudo);
        let mut probe_rng = ChaCha8Rng::seed_from_u64(15);
        for seed in 0..10 {
            let mut rng = ChaCha8Rng::seed_from_u64(1500 + seed);
            let draw = draw_multipliers(&MultiplierLaw::StdExponential, n, &mut rng).unwrap();
            let mut eval = WeightedEvaluator::new(&prep);
            eval.load(&draw).unwrap();
            let bound = 4.0 / m as f64 + 2.0 * eval.delta_n();
            for _ in 0..400 {
                let (u, v) = (probe_rng.random::<f64>(), probe_rng.random::<f64>());
                let smooth =
                    checkerboard_eval_fn(m, &mut |a, b| eval.eval(a, b), u, v);
                let gap = (smooth - eval.eval(u, v)).abs();
                assert!(gap <= bound, "gap {gap} bound {bound}");
            }
        }
    }

    #[test]
    fn distribution_is_deterministic_and_schedule_independent() {
        let sample = CopulaModel::Clayton { theta: 1.0 }
            .sample(300, &mut ChaCha8Rng::seed_from_u64(16))
            .unwrap();
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            pool.install(|| {
                bootstrap_distribution(
                    &sample,
                    &MultiplierLaw::StdExponential,
                    30,
                    64,
                    Side::Lower,
                    64,
                    0xfeed_beef,
                )
                .unwrap()
            })
        };
        let single = run(1);
        let multi = run(8);
        assert_eq!(single, multi);
        assert_eq!(single, run(3));
        assert_eq!(single.len(), 64);
        assert!(single.replicates().windows(2).all(|w| w[0] <= w[1]));
        assert!(single.replicates().iter().all(|r| r.is_finite()));
    }

    #[test]
    fn independence_replicates_are_roughly_centered() {
        let sample = random_sample(500, 17);
        let dist = bootstrap_distribution(
            &sample,
            &MultiplierLaw::StdExponential,
            22,
            144,
            Side::Lower,
            400,
            0xabcd,
        )
        .unwrap();
        let mean = dist.replicates().iter().sum::<f64>() / dist.len() as f64;
        assert!(mean.abs() <= 0.3, "mean {mean}");
    }

    /// The bootstrap spread tracks the sampling standard deviation of the
    /// estimator: for this model the corner-partial expression gives
    /// sigma^2 = 0.1875.
    #[test]
    fn clayton_bootstrap_spread_matches_asymptotic_sigma() {
        let sigma = 0.1875f64.sqrt();
        let mut sds = Vec::new();
        for seed in 0..5u64 {
            let sample = CopulaModel::Clayton { theta: 1.0 }
                .sample(2000, &mut ChaCha8Rng::seed_from_u64(2000 + seed))
                .unwrap();
            let dist = bootstrap_distribution(
                &sample,
                &MultiplierLaw::StdExponential,
                44,
                437,
                Side::Lower,
                500,
                9000 + seed,
            )
            .unwrap();
            let mean = dist.replicates().iter().sum::<f64>() / dist.len() as f64;
            let var = dist
                .replicates()
                .iter()
                .map(|&r| (r - mean).powi(2))
                .sum::<f64>()
                / (dist.len() - 1) as f64;
            sds.push(var.sqrt());
        }
        let avg_sd = sds.iter().sum::<f64>() / sds.len() as f64;
        assert!(
            (avg_sd - sigma).abs() <= 0.25 * sigma,
            "avg sd {avg_sd} vs sigma {sigma} ({sds:?})"
        );
    }

    #[test]
    fn quantile_uses_lower_nearest_order_statistic() {
        let dist = BootstrapDistribution::new(vec![3.0, 1.0, 2.0], 0.5).unwrap();
        assert_eq!(dist.replicates(), &[1.0, 2.0, 3.0]);
        assert_eq!(dist.quantile(0.0).unwrap(), 1.0);
        assert_eq!(dist.quantile(1.0 / 3.0).unwrap(), 1.0);
        assert_eq!(dist.quantile(0.34).unwrap(), 2.0);
        assert_eq!(dist.quantile(1.0).unwrap(), 3.0);
        assert!(dist.quantile(1.2).is_err());
        assert!(BootstrapDistribution::new(vec![0.0], 0.0).is_err());
        assert!(BootstrapDistribution::new(vec![0.0, f64::NAN], 0.0).is_err());
    }

    #[test]
    fn interval_reference_constructions() {
        // All replicates zero: the interval degenerates to the estimate.
        let dist = BootstrapDistribution::new(vec![0.0; 10], 0.4).unwrap();
        let ci = confidence_interval(&dist, 0.4, 25, 0.9).unwrap();
        assert_eq!((ci.lo, ci.hi), (0.4, 0.4));
        assert!(!ci.clamped);

        // Symmetric two-point replicates under the frozen quantile rule:
        // q_{0.25} = -1, q_{0.75} = +1 for {-1, +1}.
        let dist = BootstrapDistribution::new(vec![-1.0, 1.0], 0.4).unwrap();
        let ci = confidence_interval(&dist, 0.5, 4, 0.5).unwrap();
        close(ci.raw_lo, 0.5 - 1.0 / 2.0, 1e-15);
        close(ci.raw_hi, 0.5 + 1.0 / 2.0, 1e-15);
        // Endpoints land exactly on [0, 1]; touching the boundary is not
        // clamping.
        assert_eq!((ci.lo, ci.hi), (0.0, 1.0));
        assert!(!ci.clamped);

        assert!(confidence_interval(&dist, 0.5, 4, 1.0).is_err());
        assert!(confidence_interval(&dist, 0.5, 0, 0.9).is_err());
        assert!(confidence_interval(&dist, f64::NAN, 4, 0.9).is_err());
    }

    #[test]
    fn clamping_preserves_raw_endpoints() {
        let dist = BootstrapDistribution::new(vec![-8.0, -7.5, 7.5, 8.0], 0.9).unwrap();
        let ci = confidence_interval(&dist, 0.9, 4, 0.9).unwrap();
        assert!(ci.clamped);
        assert_eq!(ci.lo, 0.0);
        assert_eq!(ci.hi, 1.0);
        assert!(ci.raw_lo < 0.0 && ci.raw_hi > 1.0);
    }
}
