//! Pseudo-observations, the empirical copula, weighted empirical
//! distributions and their generalized inverses, and the multiplier-weighted
//! empirical copula.

use crate::bootstrap::MultiplierDraw;
use crate::error::{Error, Result};

/// Raw bivariate observations. Margins are arbitrary; only ranks matter
/// downstream.
#[derive(Debug, Clone, PartialEq)]
pub struct BivariateSample {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

impl BivariateSample {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.is_empty() || xs.len() != ys.len() {
            return Err(Error::InvalidParameter(format!(
                "sample axes must be nonempty and of equal length, got {} and {}",
                xs.len(),
                ys.len()
            )));
        }
        for (i, &x) in xs.iter().chain(ys.iter()).enumerate() {
            if !x.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "non-finite observation {x} at flat index {i}"
                )));
            }
        }
        Ok(Self { xs, ys })
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Apply strictly increasing transforms to each margin. Ranks, and hence
    /// everything computed from them, are invariant under this map.
    pub fn map_marginals(
        &self,
        fx: impl Fn(f64) -> f64,
        fy: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        Self::new(
            self.xs.iter().map(|&x| fx(x)).collect(),
            self.ys.iter().map(|&y| fy(y)).collect(),
        )
    }
}

/// Rank-transformed sample: `U_i = rank(X_i)/n`, `V_i = rank(Y_i)/n`.
/// Each margin is exactly a permutation of {1/n, 2/n, ..., 1}.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoSample {
    n: usize,
    x_rank: Vec<u32>,
    y_rank: Vec<u32>,
    us: Vec<f64>,
    vs: Vec<f64>,
}

/// Compute ranks per margin. Ties are a hard error: ranks, and with them the
/// whole estimator, are undefined when observations coincide.
pub fn ranks(sample: &BivariateSample) -> Result<PseudoSample> {
    let n = sample.len();
    let x_rank = rank_axis(&sample.xs, "x")?;
    let y_rank = rank_axis(&sample.ys, "y")?;
    // Direct division: r/n must agree bit-for-bit with grid coordinates
    // computed the same way elsewhere (a premultiplied 1/n differs in the
    // last ulp for non-dyadic n).
    let us = x_rank.iter().map(|&r| r as f64 / n as f64).collect();
    let vs = y_rank.iter().map(|&r| r as f64 / n as f64).collect();
    Ok(PseudoSample {
        n,
        x_rank,
        y_rank,
        us,
        vs,
    })
}

fn rank_axis(values: &[f64], axis: &'static str) -> Result<Vec<u32>> {
    let n = values.len();
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_by(|&a, &b| values[a as usize].total_cmp(&values[b as usize]));
    for w in order.windows(2) {
        let (a, b) = (w[0] as usize, w[1] as usize);
        if values[a] == values[b] {
            return Err(Error::TiesDetected {
                axis,
                value: values[a],
                first: a,
                second: b,
            });
        }
    }
    let mut rank = vec![0u32; n];
    for (pos, &idx) in order.iter().enumerate() {
        rank[idx as usize] = pos as u32 + 1;
    }
    Ok(rank)
}

impl PseudoSample {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn us(&self) -> &[f64] {
        &self.us
    }

    pub fn vs(&self) -> &[f64] {
        &self.vs
    }

    pub fn x_ranks(&self) -> &[u32] {
        &self.x_rank
    }

    pub fn y_ranks(&self) -> &[u32] {
        &self.y_rank
    }

    /// Empirical copula `(1/n) sum 1{U_i <= u, V_i <= v}`.
    pub fn eval(&self, u: f64, v: f64) -> f64 {
        let count = self
            .us
            .iter()
            .zip(&self.vs)
            .filter(|&(&ui, &vi)| ui <= u && vi <= v)
            .count();
        count as f64 / self.n as f64
    }
}

/// A discrete distribution function: atoms at sorted locations with positive
/// masses summing to one. This is the weighted empirical distribution of one
/// margin under multiplier weights.
#[derive(Debug, Clone)]
pub struct WeightedStepFunction {
    locations: Vec<f64>,
    cumulative: Vec<f64>,
}

impl WeightedStepFunction {
    /// Build from (location, mass) atoms. Masses must be strictly positive
    /// and total 1 within 1e-9; locations are sorted internally.
    pub fn new(points: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut atoms: Vec<(f64, f64)> = points.into_iter().collect();
        if atoms.is_empty() {
            return Err(Error::InvalidParameter(
                "step function needs at least one atom".into(),
            ));
        }
        for (index, &(loc, mass)) in atoms.iter().enumerate() {
            if !loc.is_finite() || !mass.is_finite() || mass <= 0.0 {
                return Err(Error::InvalidMultiplier { index, value: mass });
            }
        }
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut cumulative = Vec::with_capacity(atoms.len());
        let mut acc = 0.0;
        for &(_, mass) in &atoms {
            acc += mass;
            cumulative.push(acc);
        }
        if (acc - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "atom masses must sum to 1, got {acc}"
            )));
        }
        Ok(Self {
            locations: atoms.into_iter().map(|(loc, _)| loc).collect(),
            cumulative,
        })
    }

    /// K(x): total mass at locations <= x.
    pub fn eval(&self, x: f64) -> f64 {
        let idx = self.locations.partition_point(|&loc| loc <= x);
        if idx == 0 {
            0.0
        } else {
            self.cumulative[idx - 1]
        }
    }

    /// Generalized inverse: `inf {x : K(x) >= p}` for p in (0, 1], and the
    /// smallest atom for p = 0 (the supremum of the zero set of K).
    pub fn generalized_inverse(&self, p: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::ArgumentOutOfRange(format!(
                "generalized inverse expects p in [0,1], got {p}"
            )));
        }
        if p == 0.0 {
            return Ok(self.locations[0]);
        }
        let idx = self.cumulative.partition_point(|&c| c < p);
        // Rounding may leave the final cumulative mass a hair under 1.
        Ok(self.locations[idx.min(self.locations.len() - 1)])
    }
}

/// Rank-space view of a pseudo-sample, precomputed once so that repeated
/// weighted-copula evaluations only touch small per-draw buffers.
#[derive(Debug, Clone)]
pub struct PreparedSample {
    n: usize,
    /// Original index of the observation with x-rank r (at slot r-1).
    idx_by_x_rank: Vec<u32>,
    idx_by_y_rank: Vec<u32>,
    /// y-rank of the observation with x-rank r (at slot r-1).
    y_rank_by_x_rank: Vec<u32>,
}

impl PreparedSample {
    pub fn new(pseudo: &PseudoSample) -> Self {
        let n = pseudo.n;
        let mut idx_by_x_rank = vec![0u32; n];
        let mut idx_by_y_rank = vec![0u32; n];
        let mut y_rank_by_x_rank = vec![0u32; n];
        for i in 0..n {
            idx_by_x_rank[pseudo.x_rank[i] as usize - 1] = i as u32;
            idx_by_y_rank[pseudo.y_rank[i] as usize - 1] = i as u32;
        }
        for r in 0..n {
            y_rank_by_x_rank[r] = pseudo.y_rank[idx_by_x_rank[r] as usize];
        }
        Self {
            n,
            idx_by_x_rank,
            idx_by_y_rank,
            y_rank_by_x_rank,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Per-draw evaluator of the multiplier-weighted empirical copula
/// `C^w(u, v) = H^w(F^w^-(u), G^w^-(v))`, where F^w, G^w, H^w are the
/// weighted marginal and joint empirical distributions with weights
/// `xi_i / (n xi_bar)`.
///
/// Works in rank space: the generalized inverse of a weighted margin at p
/// is the observation whose rank is the first index where the cumulative
/// weight (in rank order) reaches p, so the joint evaluation reduces to a
/// weight sum over a rank rectangle.
#[derive(Debug)]
pub struct WeightedEvaluator<'a> {
    prep: &'a PreparedSample,
    w_by_x_rank: Vec<f64>,
    cum_x: Vec<f64>,
    cum_y: Vec<f64>,
    delta_n: f64,
}

impl<'a> WeightedEvaluator<'a> {
    pub fn new(prep: &'a PreparedSample) -> Self {
        let n = prep.n;
        Self {
            prep,
            w_by_x_rank: vec![0.0; n],
            cum_x: vec![0.0; n],
            cum_y: vec![0.0; n],
            delta_n: 0.0,
        }
    }

    /// Load a multiplier draw, refreshing the rank-ordered weights and their
    /// cumulative sums.
    pub fn load(&mut self, draw: &MultiplierDraw) -> Result<()> {
        let n = self.prep.n;
        if draw.len() != n {
            return Err(Error::InvalidParameter(format!(
                "multiplier draw length {} does not match sample size {n}",
                draw.len()
            )));
        }
        let inv = 1.0 / (n as f64 * draw.mean());
        let xi = draw.values();
        let mut acc = 0.0;
        for r in 0..n {
            let w = xi[self.prep.idx_by_x_rank[r] as usize] * inv;
            self.w_by_x_rank[r] = w;
            acc += w;
            self.cum_x[r] = acc;
        }
        acc = 0.0;
        for s in 0..n {
            acc += xi[self.prep.idx_by_y_rank[s] as usize] * inv;
            self.cum_y[s] = acc;
        }
        self.delta_n = xi.iter().fold(0.0f64, |m, &x| m.max(x)) * inv;
        Ok(())
    }

    /// Largest jump of the weighted margins, `max_i xi_i / (n xi_bar)`.
    pub fn delta_n(&self) -> f64 {
        self.delta_n
    }

    /// Number of leading ranks selected by the generalized inverse of a
    /// weighted margin at `p`: the observation rank of the inverse for
    /// p > 0, and zero for p <= 0 so the copula stays grounded (the
    /// composed-inverse form only applies on (0, 1]).
    fn inverse_rank(cum: &[f64], p: f64) -> usize {
        if p <= 0.0 {
            return 0;
        }
        let idx = cum.partition_point(|&c| c < p);
        idx.min(cum.len() - 1) + 1
    }

    /// Weighted empirical copula at (u, v) in [0, 1]^2.
    pub fn eval(&self, u: f64, v: f64) -> f64 {
        let r_star = Self::inverse_rank(&self.cum_x, u);
        let s_star = Self::inverse_rank(&self.cum_y, v) as u32;
        if r_star == 0 || s_star == 0 {
            return 0.0;
        }
        let mut acc = 0.0;
        for r in 0..r_star {
            if self.prep.y_rank_by_x_rank[r] <= s_star {
                acc += self.w_by_x_rank[r];
            }
        }
        acc
    }
}

/// Multiplier-weighted empirical copula of a raw sample at one point.
/// Convenience wrapper; repeated evaluation should go through
/// [`PreparedSample`] and [`WeightedEvaluator`].
pub fn weighted_empirical_copula_eval(
    sample: &BivariateSample,
    draw: &MultiplierDraw,
    u: f64,
    v: f64,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&u) || !(0.0..=1.0).contains(&v) {
        return Err(Error::ArgumentOutOfRange(format!(
            "weighted copula arguments must lie in [0,1], got ({u}, {v})"
        )));
    }
    let pseudo = ranks(sample)?;
    let prep = PreparedSample::new(&pseudo);
    let mut eval = WeightedEvaluator::new(&prep);
    eval.load(draw)?;
    Ok(eval.eval(u, v))
}
