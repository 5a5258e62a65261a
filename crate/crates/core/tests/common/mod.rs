//! Independent reference implementations used by the integration tests.

#![allow(dead_code)]

/// Exact binomial coefficient.
pub fn choose(n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `r·C(N−1, M−1)·x^(M−1)·(1−x)^(N−M) − c`, with `0^0 = 1`.
pub fn gain_gap(x: f64, n: u32, m: u32, r: f64, c: f64) -> f64 {
    r * choose(n - 1, m - 1) as f64 * x.powi(m as i32 - 1) * (1.0 - x).powi((n - m) as i32) - c
}

/// Kernel maximum at `x = (M−1)/(N−1)`.
pub fn alpha_max(n: u32, m: u32) -> f64 {
    if n == 1 {
        return 1.0;
    }
    let x = (m - 1) as f64 / (n - 1) as f64;
    gain_gap(x, n, m, 1.0, 0.0)
}

/// Root of `f` on `[lo, hi]` given a sign change, by plain bisection.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Upper mixed root of the mean-field gap, or `None` above `alpha_max`.
pub fn upper_root(n: u32, m: u32, alpha: f64) -> Option<f64> {
    let peak = (m - 1) as f64 / (n - 1) as f64;
    if gain_gap(peak, n, m, 1.0, alpha) < 0.0 {
        return None;
    }
    if peak >= 1.0 {
        return Some(1.0);
    }
    Some(bisect(|x| gain_gap(x, n, m, 1.0, alpha), peak, 1.0))
}

/// `P(fewer than M of N cooperate)` by summing over all `2^N` action
/// profiles.
pub fn insufficient_by_enumeration(x: f64, n: u32, m: u32) -> f64 {
    (0u32..1 << n)
        .filter(|profile| profile.count_ones() < m)
        .map(|profile| {
            let c = profile.count_ones() as i32;
            x.powi(c) * (1.0 - x).powi(n as i32 - c)
        })
        .sum()
}

/// Sample Pearson correlation.
pub fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let cov: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let vx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let vy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}
