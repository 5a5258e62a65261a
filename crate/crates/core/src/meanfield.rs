//! Fixed points of the mean-field threshold game.
//!
//! With reward `r` and cost `c`, the mixed equilibria of the infinite
//! well-mixed population are the roots of
//! `g(x) = r·C(N−1, M−1)·x^(M−1)·(1−x)^(N−M) − c`, which exist only while
//! `α = c/r` stays below the maximum of the Bernstein kernel, attained at
//! `x* = (M−1)/(N−1)`. Every power uses the convention `0^0 = 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance on root locations.
pub const ROOT_TOLERANCE: f64 = 1e-12;
const MAX_BISECTIONS: usize = 200;
/// Binomial coefficients up to this `n` are computed exactly.
const EXACT_BINOMIAL_LIMIT: u32 = 30;

fn check_game(n: u32, m: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::invalid("N", format!("need N >= 2, got {n}")));
    }
    if m < 1 || m > n {
        return Err(Error::invalid("M", format!("need 1 <= M <= N, got M={m}, N={n}")));
    }
    Ok(())
}

fn binomial_exact(n: u32, k: u32) -> u64 {
    let k = k.min(n - k) as u64;
    let n = n as u64;
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

fn ln_binomial(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    (0..k).map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln()).sum()
}

/// `C(n, k)·x^k·(1−x)^(n−k)`.
pub fn bernstein(n: u32, k: u32, x: f64) -> f64 {
    debug_assert!(k <= n);
    if n <= EXACT_BINOMIAL_LIMIT {
        return binomial_exact(n, k) as f64 * x.powi(k as i32) * (1.0 - x).powi((n - k) as i32);
    }
    let y = 1.0 - x;
    if (k > 0 && x == 0.0) || (n > k && y == 0.0) {
        return 0.0;
    }
    let mut ln = ln_binomial(n, k);
    if k > 0 {
        ln += k as f64 * x.ln();
    }
    if n > k {
        ln += (n - k) as f64 * y.ln();
    }
    ln.exp()
}

/// Net mean-field gain of cooperating, `g(x)`.
pub fn g_of_x(x: f64, n: u32, m: u32, reward: f64, cost: f64) -> f64 {
    reward * bernstein(n - 1, m - 1, x) - cost
}

/// Position of the kernel maximum, `(M−1)/(N−1)`.
pub fn kernel_argmax(n: u32, m: u32) -> f64 {
    (m - 1) as f64 / (n - 1) as f64
}

/// Largest α for which mixed equilibria exist.
pub fn alpha_max(n: u32, m: u32) -> Result<f64> {
    check_game(n, m)?;
    Ok(bernstein(n - 1, m - 1, kernel_argmax(n, m)))
}

/// Plain bisection on a sign-changing bracket.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut f_lo = f(lo);
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Roots of `g` for `r = 1`, `c = α`, in ascending order.
///
/// Empty above `alpha_max`; a single root at the kernel maximum when α
/// touches `alpha_max`; a single root for `M = 1` or `M = N`, where the kernel
/// is monotone.
pub fn mixed_roots(n: u32, m: u32, alpha: f64) -> Result<Vec<f64>> {
    check_game(n, m)?;
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::invalid("alpha", format!("must be positive, got {alpha}")));
    }
    let amax = alpha_max(n, m)?;
    let peak = kernel_argmax(n, m);
    if alpha > amax + ROOT_TOLERANCE {
        return Ok(Vec::new());
    }
    if (alpha - amax).abs() <= ROOT_TOLERANCE {
        return Ok(vec![peak]);
    }
    let g = |x: f64| g_of_x(x, n, m, 1.0, alpha);
    let mut roots = Vec::with_capacity(2);
    if peak > 0.0 {
        roots.push(bisect(g, 0.0, peak, ROOT_TOLERANCE));
    }
    if peak < 1.0 {
        roots.push(bisect(g, peak, 1.0, ROOT_TOLERANCE));
    }
    roots.dedup_by(|a, b| (*a - *b).abs() <= ROOT_TOLERANCE);
    Ok(roots)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Attractor,
    Repeller,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPoint {
    pub x: f64,
    pub stability: Stability,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanFieldSolution {
    pub n: u32,
    pub m: u32,
    pub alpha: f64,
    /// Interior root where `g` rises through zero (repelling).
    pub lower: Option<f64>,
    /// Interior root where `g` falls through zero (attracting mixed state).
    pub upper: Option<f64>,
    /// `0`, the interior roots and `1`, in ascending order.
    pub fixed_points: Vec<FixedPoint>,
    pub alpha_max: f64,
}

/// Roots of `g` together with the stability of every fixed point.
///
/// The boundary states follow the classical picture: full defection attracts
/// and full cooperation repels. Interior roots are classified by the sign of
/// `g` on either side. At the tangency `α = alpha_max` the double root is
/// reported as both lower and upper.
pub fn solve(n: u32, m: u32, alpha: f64) -> Result<MeanFieldSolution> {
    let roots = mixed_roots(n, m, alpha)?;
    let amax = alpha_max(n, m)?;
    let g = |x: f64| g_of_x(x, n, m, 1.0, alpha);
    let (mut lower, mut upper) = (None, None);
    match roots.as_slice() {
        [lo, hi] => {
            lower = Some(*lo);
            upper = Some(*hi);
        }
        [only] => {
            let step = 1e-6;
            let left = if *only > step { g(only - step) } else { g(0.0) };
            let right = if *only < 1.0 - step { g(only + step) } else { g(1.0) };
            if (alpha - amax).abs() <= ROOT_TOLERANCE {
                lower = Some(*only);
                upper = Some(*only);
            } else if left > 0.0 && right <= 0.0 {
                upper = Some(*only);
            } else {
                lower = Some(*only);
            }
        }
        _ => {}
    }
    let mut fixed_points = vec![FixedPoint {
        x: 0.0,
        stability: Stability::Attractor,
    }];
    if let Some(x) = lower {
        fixed_points.push(FixedPoint {
            x,
            stability: Stability::Repeller,
        });
    }
    if let Some(x) = upper.filter(|u| Some(*u) != lower) {
        fixed_points.push(FixedPoint {
            x,
            stability: Stability::Attractor,
        });
    }
    fixed_points.push(FixedPoint {
        x: 1.0,
        stability: Stability::Repeller,
    });
    Ok(MeanFieldSolution {
        n,
        m,
        alpha,
        lower,
        upper,
        fixed_points,
        alpha_max: amax,
    })
}

/// Probability that fewer than `M` of `N` players cooperate when each does so
/// independently with probability `x_mean`.
pub fn insufficient_prob(x_mean: f64, n: u32, m: u32) -> Result<f64> {
    if m > n {
        return Err(Error::invalid("M", format!("need M <= N, got M={m}, N={n}")));
    }
    if !(0.0..=1.0).contains(&x_mean) {
        return Err(Error::invalid("x_mean", format!("must lie in [0, 1], got {x_mean}")));
    }
    let p: f64 = (0..m).map(|k| bernstein(n, k, x_mean)).sum();
    Ok(p.clamp(0.0, 1.0))
}

/// One point of the mean-field prediction curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PredictionPoint {
    pub alpha: f64,
    /// Attracting mixed state, or 0 once only defection survives.
    pub upper_root: f64,
    pub lower_root: Option<f64>,
    pub insufficient_prob: f64,
    pub alpha_max: f64,
}

/// Mean-field cooperation level and threshold-failure probability along
/// `alphas`. Above `alpha_max` the population sits in the defecting state,
/// where the threshold is never met.
pub fn mf_prediction_curve(n: u32, m: u32, alphas: &[f64]) -> Result<Vec<PredictionPoint>> {
    let amax = alpha_max(n, m)?;
    alphas
        .iter()
        .map(|&alpha| {
            let sol = solve(n, m, alpha)?;
            let upper = sol.upper.unwrap_or(0.0);
            Ok(PredictionPoint {
                alpha,
                upper_root: upper,
                lower_root: sol.lower.filter(|_| sol.upper.is_some()),
                insufficient_prob: insufficient_prob(upper, n, m)?,
                alpha_max: amax,
            })
        })
        .collect()
}
