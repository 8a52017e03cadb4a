//! Built-in verification suite behind the `selftest` subcommand: fast,
//! deterministic renditions of the invariants the test suite checks at
//! larger scale. Every check is seeded, so a pass is reproducible anywhere.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bootstrap::{bootstrap_distribution, draw_multipliers, MultiplierLaw};
use crate::checkerboard::{locate_cell, CheckerboardGrid};
use crate::empirical::{ranks, weighted_empirical_copula_eval, BivariateSample};
use crate::models::CopulaModel;
use crate::seed::{stream_rng, STREAM_DATA};
use crate::tail::{Side, Smoothing, TailEstimator};
use crate::tuning::{self, TuningWarning};

type Check = fn() -> Result<(), String>;

/// Outcome of the suite: one line per check plus the failure count.
#[derive(Debug, Clone)]
pub struct SelftestReport {
    pub lines: Vec<String>,
    pub failures: usize,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Run every check and collect a printable report.
pub fn run_selftest() -> SelftestReport {
    let checks: [(&str, Check); 8] = [
        ("checkerboard operator: weights, contraction, exactness", check_operator),
        ("empirical copula: Lipschitz bound", check_lipschitz),
        ("checkerboard smoothing: deviation bounds", check_deviation),
        ("degenerate anchors: comonotone and independence", check_anchors),
        ("weighted copula: marginal modulus and atom size", check_weighted_modulus),
        ("tuning: frozen plans, hard errors, warnings", check_tuning),
        ("bootstrap: identical replicates across thread counts", check_bootstrap_determinism),
        ("seeding: streams separate by path", check_streams),
    ];
    let mut lines = Vec::with_capacity(checks.len());
    let mut failures = 0;
    for (name, check) in checks {
        match check() {
            Ok(()) => lines.push(format!("ok   {name}")),
            Err(msg) => {
                failures += 1;
                lines.push(format!("FAIL {name}: {msg}"));
            }
        }
    }
    SelftestReport { lines, failures }
}

fn fail_if(condition: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if condition {
        Err(msg())
    } else {
        Ok(())
    }
}

fn random_sample(n: usize, seed: u64) -> BivariateSample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    BivariateSample::new(
        (0..n).map(|_| rng.random::<f64>()).collect(),
        (0..n).map(|_| rng.random::<f64>()).collect(),
    )
    .expect("uniform draws form a valid sample")
}

fn check_operator() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for trial in 0..20 {
        let m = rng.random_range(1..=40);
        let corners: Vec<f64> = (0..(m + 1) * (m + 1)).map(|_| rng.random::<f64>()).collect();
        let sup = corners.iter().fold(0.0f64, |a, &c| a.max(c.abs()));
        let grid = CheckerboardGrid::from_corners(m, corners.clone())
            .map_err(|e| format!("grid build failed: {e}"))?;
        for _ in 0..500 {
            let (u, v) = (rng.random::<f64>(), rng.random::<f64>());
            let cell = locate_cell(u, v, m);
            let w = cell.corner_weights();
            fail_if(
                w.iter().any(|&x| x < 0.0) || w.iter().sum::<f64>() != 1.0,
                || format!("trial {trial}: weights {w:?} not a convex combination"),
            )?;
            fail_if(grid.eval(u, v).abs() > sup, || {
                format!("trial {trial}: value escapes the corner bound at ({u}, {v})")
            })?;
        }
        // Bilinear functions are reproduced exactly up to float dust.
        let (a, b, c, d) = (rng.random::<f64>(), rng.random::<f64>(), rng.random::<f64>(), rng.random::<f64>());
        let bilinear = |u: f64, v: f64| a + b * u + c * v + d * u * v;
        let lifted = CheckerboardGrid::from_fn(m, &bilinear).map_err(|e| e.to_string())?;
        for _ in 0..200 {
            let (u, v) = (rng.random::<f64>(), rng.random::<f64>());
            fail_if((lifted.eval(u, v) - bilinear(u, v)).abs() > 1e-12, || {
                format!("trial {trial}: bilinear reproduction broke at ({u}, {v})")
            })?;
        }
    }
    Ok(())
}

fn check_lipschitz() -> Result<(), String> {
    // The factor-2 constant absorbs rank discreteness only for per-axis
    // gaps of at least one rank spacing: a smaller gap can straddle a 1/n
    // jump and exceed any multiple of its own width. Pairs are therefore
    // drawn with both gaps at least 1/n, where the bound holds surely.
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for &n in &[50usize, 333, 1000] {
        let pseudo = ranks(&random_sample(n, 7_000 + n as u64)).map_err(|e| e.to_string())?;
        let floor = 1.0 / n as f64;
        let spaced_pair = |rng: &mut ChaCha8Rng| {
            let gap = floor + (1.0 - floor) * rng.random::<f64>();
            let lo = (1.0 - gap) * rng.random::<f64>();
            (lo, lo + gap)
        };
        for _ in 0..2000 {
            let (u1, u2) = spaced_pair(&mut rng);
            let (v1, v2) = spaced_pair(&mut rng);
            let jump = (pseudo.eval(u2, v2) - pseudo.eval(u1, v1)).abs();
            let bound = 2.0 * ((u2 - u1).abs() + (v2 - v1).abs());
            fail_if(jump > bound + 1e-12, || {
                format!("n={n}: |dC|={jump} exceeds 2(|du|+|dv|)={bound}")
            })?;
        }
    }
    Ok(())
}

fn check_deviation() -> Result<(), String> {
    let n = 400;
    let sample = random_sample(n, 11);
    let pseudo = ranks(&sample).map_err(|e| e.to_string())?;
    for &m in &[8usize, 32] {
        let bound = 4.0 / m as f64;
        let grid = CheckerboardGrid::from_empirical(m, &pseudo).map_err(|e| e.to_string())?;
        for i in 0..=100 {
            for j in 0..=100 {
                let (u, v) = (i as f64 / 100.0, j as f64 / 100.0);
                let gap = (grid.eval(u, v) - pseudo.eval(u, v)).abs();
                fail_if(gap > bound, || {
                    format!("m={m}: smoothing gap {gap} > {bound} at ({u}, {v})")
                })?;
            }
        }
    }
    // Tail-rescaled version of the same bound.
    let (k, m) = (20usize, 16usize);
    let raw = TailEstimator::new(pseudo.clone(), k, m, Side::Lower, Smoothing::Raw)
        .map_err(|e| e.to_string())?;
    let smooth = TailEstimator::new(pseudo, k, m, Side::Lower, Smoothing::Checkerboard)
        .map_err(|e| e.to_string())?;
    let tail_bound = 4.0 * n as f64 / (k as f64 * m as f64);
    for i in 0..=50 {
        for j in 0..=50 {
            let (x, y) = (2.0 * i as f64 / 50.0, 2.0 * j as f64 / 50.0);
            let a = raw.estimate(x, y).map_err(|e| e.to_string())?.value;
            let b = smooth.estimate(x, y).map_err(|e| e.to_string())?.value;
            fail_if((a - b).abs() > tail_bound, || {
                format!("tail smoothing gap {} > {tail_bound} at ({x}, {y})", (a - b).abs())
            })?;
        }
    }
    Ok(())
}

fn check_anchors() -> Result<(), String> {
    // Comonotone data with k/n on the rank grid estimates exactly 1.
    let mut rng = stream_rng(5, &[STREAM_DATA, 0]);
    let sample = CopulaModel::Comonotone
        .sample(256, &mut rng)
        .map_err(|e| e.to_string())?;
    let pseudo = ranks(&sample).map_err(|e| e.to_string())?;
    for smoothing in [Smoothing::Raw, Smoothing::Checkerboard] {
        let est = TailEstimator::new(pseudo.clone(), 16, 64, Side::Lower, smoothing)
            .map_err(|e| e.to_string())?;
        let value = est.lambda_hat().map_err(|e| e.to_string())?.value;
        fail_if(value != 1.0, || {
            format!("comonotone {smoothing} estimate {value} != 1")
        })?;
    }
    // Independence keeps the coefficient near zero.
    let mut rng = stream_rng(5, &[STREAM_DATA, 1]);
    let sample = CopulaModel::Independence
        .sample(10_000, &mut rng)
        .map_err(|e| e.to_string())?;
    let pseudo = ranks(&sample).map_err(|e| e.to_string())?;
    let est = TailEstimator::new(pseudo, 100, 316, Side::Lower, Smoothing::Checkerboard)
        .map_err(|e| e.to_string())?;
    let value = est.lambda_hat().map_err(|e| e.to_string())?.value;
    fail_if(value > 0.1, || format!("independence estimate {value} > 0.1"))?;
    Ok(())
}

fn check_weighted_modulus() -> Result<(), String> {
    let n = 500;
    let sample = random_sample(n, 13);
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let atom_bound = 3.0 * (n as f64).ln() / n as f64;
    for draw_idx in 0..20 {
        let draw = draw_multipliers(&MultiplierLaw::StdExponential, n, &mut rng)
            .map_err(|e| e.to_string())?;
        let delta_n = draw.delta_n();
        fail_if(delta_n >= atom_bound, || {
            format!("draw {draw_idx}: atom {delta_n} >= {atom_bound}")
        })?;
        for _ in 0..500 {
            let (u1, u2) = (rng.random::<f64>(), rng.random::<f64>());
            let c1 = weighted_empirical_copula_eval(&sample, &draw, u1, 1.0)
                .map_err(|e| e.to_string())?;
            let c2 = weighted_empirical_copula_eval(&sample, &draw, u2, 1.0)
                .map_err(|e| e.to_string())?;
            let gap = ((c2 - c1) - (u2 - u1)).abs();
            fail_if(gap > delta_n + 1e-12, || {
                format!("draw {draw_idx}: modulus {gap} > atom {delta_n}")
            })?;
        }
    }
    Ok(())
}

fn check_tuning() -> Result<(), String> {
    let plan = tuning::plan(10_000, 0.5, 0.8, 1.0).map_err(|e| e.to_string())?;
    fail_if((plan.k_n, plan.m_n) != (100, 1584), || {
        format!("plan gave (k, m) = ({}, {})", plan.k_n, plan.m_n)
    })?;
    fail_if(!plan.warnings.is_empty(), || {
        format!("unexpected warnings: {:?}", plan.warnings)
    })?;
    fail_if(tuning::plan(10_000, 0.7, 0.8, 1.0).is_ok(), || {
        "alpha = 0.7 must be rejected at rho = 1".into()
    })?;
    fail_if(tuning::plan(10_000, 0.5, 0.5, 1.0).is_ok(), || {
        "beta = 0.5 must be rejected under alpha = 0.5".into()
    })?;
    let warned = tuning::plan(30, 0.5, 0.76, 1.0).map_err(|e| e.to_string())?;
    let expected = [
        TuningWarning::ResolutionBelowTailRate {
            m_n: warned.m_n,
            required: 30.0 / (warned.k_n as f64).sqrt(),
        },
        TuningWarning::TailBelowLogSquared {
            k_n: warned.k_n,
            required: (30f64).ln().powi(2),
        },
    ];
    fail_if(warned.warnings != expected, || {
        format!("warning set {:?}", warned.warnings)
    })?;
    Ok(())
}

fn check_bootstrap_determinism() -> Result<(), String> {
    let mut rng = stream_rng(17, &[STREAM_DATA, 0]);
    let sample = CopulaModel::Clayton { theta: 1.0 }
        .sample(100, &mut rng)
        .map_err(|e| e.to_string())?;
    let run = |threads: usize| -> Result<Vec<f64>, String> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| e.to_string())?;
        let dist = pool
            .install(|| {
                bootstrap_distribution(
                    &sample,
                    &MultiplierLaw::StdExponential,
                    10,
                    8,
                    Side::Lower,
                    32,
                    2024,
                )
            })
            .map_err(|e| e.to_string())?;
        Ok(dist.replicates().to_vec())
    };
    let sequential = run(1)?;
    let parallel = run(4)?;
    fail_if(
        sequential
            .iter()
            .zip(&parallel)
            .any(|(a, b)| a.to_bits() != b.to_bits()),
        || "replicates differ between 1 and 4 threads".into(),
    )?;
    Ok(())
}

fn check_streams() -> Result<(), String> {
    use rand::RngCore;
    let mut seen = std::collections::HashSet::new();
    for cell in 0..8u64 {
        for rep in 0..8u64 {
            let draw = stream_rng(42, &[STREAM_DATA, cell, rep]).next_u64();
            fail_if(!seen.insert(draw), || {
                format!("first draw collides at cell {cell}, rep {rep}")
            })?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_check_passes() {
        let report = run_selftest();
        assert!(
            report.passed(),
            "selftest failures:\n{}",
            report.lines.join("\n")
        );
        assert_eq!(report.lines.len(), 8);
        assert!(report.lines.iter().all(|l| l.starts_with("ok   ")));
    }
}
