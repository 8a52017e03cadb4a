//! Shared numerical routines: univariate normal/t wrappers, Gauss-Legendre
//! quadrature and bivariate normal/t distribution functions.

use statrs::distribution::{Continuous, ContinuousCDF, Normal, StudentsT};

/// 20-point Gauss-Legendre abscissas on [-1, 1], positive half.
const GL20_X: [f64; 10] = [
    0.076_526_521_133_497_33,
    0.227_785_851_141_645_08,
    0.373_706_088_715_419_56,
    0.510_867_001_950_827_1,
    0.636_053_680_726_515,
    0.746_331_906_460_150_8,
    0.839_116_971_822_218_8,
    0.912_234_428_251_326,
    0.963_971_927_277_913_8,
    0.993_128_599_185_094_9,
];

/// 20-point Gauss-Legendre weights matching `GL20_X`.
const GL20_W: [f64; 10] = [
    0.152_753_387_130_725_85,
    0.149_172_986_472_603_75,
    0.142_096_109_318_382_05,
    0.131_688_638_449_176_63,
    0.118_194_531_961_518_42,
    0.101_930_119_817_240_44,
    0.083_276_741_576_704_75,
    0.062_672_048_334_109_06,
    0.040_601_429_800_386_94,
    0.017_614_007_139_152_118,
];

/// 20-point Gauss-Legendre approximation of the integral of `f` over [a, b].
/// The result is signed: swapping `a` and `b` flips the sign.
pub fn gauss_legendre_20(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (&x, &w) in GL20_X.iter().zip(GL20_W.iter()) {
        acc += w * (f(mid + half * x) + f(mid - half * x));
    }
    acc * half
}

/// Composite Gauss-Legendre over `panels` equal subintervals of [a, b].
pub fn gauss_legendre_panels(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let step = (b - a) / panels as f64;
    let mut acc = 0.0;
    for p in 0..panels {
        let lo = a + step * p as f64;
        acc += gauss_legendre_20(f, lo, lo + step);
    }
    acc
}

/// Standard normal distribution function.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(-x / std::f64::consts::SQRT_2)
}

/// Standard normal quantile function.
pub fn normal_quantile(p: f64) -> f64 {
    Normal::new(0.0, 1.0).unwrap().inverse_cdf(p)
}

/// Density of the standard Student t with `nu` degrees of freedom.
pub fn student_t_pdf(x: f64, nu: f64) -> f64 {
    StudentsT::new(0.0, 1.0, nu).unwrap().pdf(x)
}

/// Distribution function of the standard Student t with `nu` degrees of freedom.
pub fn student_t_cdf(x: f64, nu: f64) -> f64 {
    StudentsT::new(0.0, 1.0, nu).unwrap().cdf(x)
}

/// Quantile function of the standard Student t with `nu` degrees of freedom.
pub fn student_t_quantile(p: f64, nu: f64) -> f64 {
    StudentsT::new(0.0, 1.0, nu).unwrap().inverse_cdf(p)
}

/// Standard bivariate normal distribution function P(X <= h, Y <= k) with
/// correlation `rho`, via the single integral
/// `Phi(h) Phi(k) + (1/2pi) int_0^{asin rho} exp(-(h^2 + k^2 - 2 h k sin t) / (2 cos^2 t)) dt`.
///
/// Requires |rho| < 1. The integrand sharpens as |rho| -> 1, so panels are
/// refined geometrically toward the upper limit for |rho| > 0.9.
pub fn bivariate_normal_cdf(h: f64, k: f64, rho: f64) -> f64 {
    debug_assert!(rho.abs() < 1.0);
    if h == f64::NEG_INFINITY || k == f64::NEG_INFINITY {
        return 0.0;
    }
    if h == f64::INFINITY {
        return normal_cdf(k);
    }
    if k == f64::INFINITY {
        return normal_cdf(h);
    }
    let asr = rho.asin();
    let hk2 = h * h + k * k;
    let mut integrand = |t: f64| {
        let s = t.sin();
        let c2 = 1.0 - s * s;
        (-(hk2 - 2.0 * h * k * s) / (2.0 * c2)).exp()
    };
    let integral = if rho.abs() <= 0.9 {
        gauss_legendre_panels(&mut integrand, 0.0, asr, 4)
    } else {
        // Geometric refinement toward asr where cos^2 t vanishes.
        let mut acc = gauss_legendre_20(&mut integrand, 0.0, 0.5 * asr);
        let mut lo = 0.5;
        for _ in 0..48 {
            let hi = lo + 0.5 * (1.0 - lo);
            acc += gauss_legendre_20(&mut integrand, lo * asr, hi * asr);
            lo = hi;
        }
        acc += gauss_legendre_20(&mut integrand, lo * asr, asr);
        acc
    };
    let p = normal_cdf(h) * normal_cdf(k) + integral / (2.0 * std::f64::consts::PI);
    p.clamp(0.0, 1.0)
}

/// Standard bivariate Student t distribution function P(X <= x, Y <= y) with
/// correlation `rho` and `nu` degrees of freedom.
///
/// Integrates the exact conditional law over the first coordinate in the
/// probability domain: with w = F_nu(s), the target is
/// `int_0^{F_nu(x)} F_{nu+1}(cond(s(w))) dw` where, given X = s, Y is t with
/// nu+1 degrees of freedom, location `rho s` and scale
/// `sqrt((1 - rho^2)(nu + s^2) / (nu + 1))`. The substitution keeps the
/// integrand bounded by 1 regardless of how far out `x` sits; dyadic panel
/// refinement toward w = 0 resolves the heavy-tailed endpoint.
pub fn bivariate_t_cdf(x: f64, y: f64, rho: f64, nu: f64) -> f64 {
    debug_assert!(rho.abs() < 1.0 && nu > 0.0);
    if x == f64::NEG_INFINITY || y == f64::NEG_INFINITY {
        return 0.0;
    }
    if x == f64::INFINITY {
        return student_t_cdf(y, nu);
    }
    if y == f64::INFINITY {
        return student_t_cdf(x, nu);
    }
    let marginal = StudentsT::new(0.0, 1.0, nu).unwrap();
    let conditional = StudentsT::new(0.0, 1.0, nu + 1.0).unwrap();
    let w_top = marginal.cdf(x);
    if w_top <= 0.0 {
        return 0.0;
    }
    let cond_scale_factor = ((nu + 1.0) / (1.0 - rho * rho)).sqrt();
    let mut integrand = |w: f64| {
        let s = marginal.inverse_cdf(w);
        let cond = (y - rho * s) * cond_scale_factor / (nu + s * s).sqrt();
        conditional.cdf(cond)
    };
    // The quantile diverges at both w = 0 and w = 1, so refine dyadically
    // toward each end of [0, w_top]. Refinement stops 1e-14 short of the
    // endpoints, where the inverse-beta machinery loses its footing; the
    // skipped sliver carries at most 1e-14 of mass.
    let mut acc = 0.0;
    let mid = 0.5 * w_top;
    let mut hi = mid;
    while hi > 1e-14 {
        let lo = 0.5 * hi;
        acc += gauss_legendre_20(&mut integrand, lo, hi);
        hi = lo;
    }
    let mut gap = mid;
    while gap > 1e-14 {
        let next = 0.5 * gap;
        acc += gauss_legendre_20(&mut integrand, w_top - gap, w_top - next);
        gap = next;
    }
    acc.clamp(0.0, 1.0)
}
