//! Numeric helpers shared by the learners and the evaluation code.

use statrs::function::beta::{beta_reg, ln_beta};

/// Shannon entropy in bits of a count vector. Zero for empty or pure counts.
pub fn entropy(counts: &[usize]) -> f64 {
    let total: usize = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let n = total as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum()
}

/// Inverse of the regularized incomplete beta function: the `x` with
/// `I_x(a, b) = p`. Newton steps, falling back to bisection whenever a
/// step leaves the current bracket.
pub fn beta_quantile(p: f64, a: f64, b: f64) -> f64 {
    assert!(a > 0.0 && b > 0.0, "beta shape parameters must be positive");
    if p <= 0.0 {
        return 0.0;
    }
    if p >= 1.0 {
        return 1.0;
    }
    let ln_norm = ln_beta(a, b);
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    let mut x = a / (a + b);
    for _ in 0..200 {
        let f = beta_reg(a, b, x) - p;
        if f == 0.0 {
            return x;
        }
        if f < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        if hi - lo < 1e-15 {
            break;
        }
        let ln_density = (a - 1.0) * x.ln() + (b - 1.0) * (1.0 - x).ln() - ln_norm;
        let step = f / ln_density.exp();
        let next = x - step;
        x = if step.is_finite() && next > lo && next < hi {
            next
        } else {
            0.5 * (lo + hi)
        };
    }
    x
}

/// One-sided upper confidence bound on a binomial rate after observing
/// `errors` in `n` trials: the `p` with `P(X <= errors | n, p) = confidence`.
/// `confidence` is the tail probability, e.g. 0.25 for C4.5's default.
pub fn binomial_upper_bound(errors: usize, n: usize, confidence: f64) -> f64 {
    assert!(errors <= n);
    if n == 0 || errors == n {
        return 1.0;
    }
    // P(X <= e | n, p) = 1 - I_p(e + 1, n - e)
    beta_quantile(1.0 - confidence, (errors + 1) as f64, (n - errors) as f64)
}

/// Two-sided Clopper-Pearson interval for `successes` out of `n`, as
/// proportions in `[0, 1]`.
pub fn clopper_pearson(successes: usize, n: usize, level: f64) -> (f64, f64) {
    assert!(n > 0 && successes <= n);
    let alpha = 1.0 - level;
    let (x, n_f) = (successes as f64, n as f64);
    let lower = if successes == 0 {
        0.0
    } else {
        beta_quantile(alpha / 2.0, x, n_f - x + 1.0)
    };
    let upper = if successes == n {
        1.0
    } else {
        beta_quantile(1.0 - alpha / 2.0, x + 1.0, n_f - x)
    };
    (lower, upper)
}
