use crate::error::{Error, Result};

const REL_TOL: f64 = 1e-12;

fn check_alpha(alpha: f64) {
    assert!(alpha > 1.0 && alpha <= 2.0, "alpha must lie in (1, 2], got {alpha}");
}

/// Largest fixed point of `x = b + C·x^{1/α}`.
///
/// Any `x` with `x ≤ b + C·x^{1/α}` satisfies `x ≤ x*`, so the returned value
/// is the sound resolution of an implicit upper bound. Panics if `b` or `C`
/// is negative or not finite, or if α is outside (1, 2].
pub fn solve_relative(b: f64, c: f64, alpha: f64) -> f64 {
    check_alpha(alpha);
    assert!(b >= 0.0 && b.is_finite(), "b must be finite and nonnegative, got {b}");
    assert!(c >= 0.0 && c.is_finite(), "C must be finite and nonnegative, got {c}");
    if c == 0.0 {
        return b;
    }
    let f = |x: f64| b + c * x.powf(1.0 / alpha) - x;
    // f is concave with f(0) = b ≥ 0, and f ≥ 0 at both b and C^{α/(α−1)}.
    let lo0 = b.max(c.powf(alpha / (alpha - 1.0)));
    let mut lo = lo0;
    let mut hi = b + c * lo0.powf(1.0 / alpha);
    if hi <= lo {
        return lo;
    }
    while f(hi) >= 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..400 {
        if hi - lo <= REL_TOL * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if f(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Closed-form relaxation `z + 2y·z^{1/α} + (2y)^{α/(α−1)}` of `x ≤ z + y·x^{1/α}`.
pub fn explicit_lemma_d1(z: f64, y: f64, alpha: f64) -> f64 {
    check_alpha(alpha);
    assert!(z >= 0.0 && y >= 0.0, "z and y must be nonnegative, got z={z}, y={y}");
    if y == 0.0 {
        return z;
    }
    z + 2.0 * y * z.powf(1.0 / alpha) + (2.0 * y).powf(alpha / (alpha - 1.0))
}

/// The multiplier Γ_τ(α, ε) turning a tail-probability deviation into a
/// deviation of the expected loss.
pub fn gamma_factor(alpha: f64, eps: f64, tau: f64) -> Result<f64> {
    if !(alpha > 1.0 && alpha <= 2.0) {
        return Err(Error::input(format!("alpha must lie in (1, 2], got {alpha}")));
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::input(format!("eps must lie in (0, 1], got {eps}")));
    }
    if !(tau >= 0.0 && tau.is_finite()) {
        return Err(Error::input(format!("tau must be finite and nonnegative, got {tau}")));
    }
    let q = (alpha - 1.0) / alpha;
    let k = (alpha / (alpha - 1.0)).powf(alpha - 1.0);
    let first = q * (1.0 + tau).powf(1.0 / alpha);
    let second = k / alpha
        * (1.0 + q.powf(alpha) * tau.powf(1.0 / alpha)).powf(1.0 / alpha)
        * (1.0 + (1.0 / eps).ln() / k).powf(q);
    Ok(first + second)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn solve_examples() {
        assert_eq!(solve_relative(0.3, 0.0, 2.0), 0.3);
        assert_eq!(solve_relative(0.0, 0.0, 1.5), 0.0);
        assert!((solve_relative(0.0, 1.0, 2.0) - 1.0).abs() < 1e-12);
        // mpmath: s² with s = (0.2 + √0.44)/2
        let x = solve_relative(0.1, 0.2, 2.0);
        assert!((x - 0.186_332_495_807_108).abs() < 1e-12);
    }

    #[test]
    fn d1_examples() {
        assert_eq!(explicit_lemma_d1(0.4, 0.0, 1.7), 0.4);
        assert!((explicit_lemma_d1(1.0, 1.0, 2.0) - 7.0).abs() < 1e-15);
        let v = explicit_lemma_d1(0.1, 0.2, 2.0);
        assert!((v - 0.386_491_106_406_735_2).abs() < 1e-14);
        assert!(v >= solve_relative(0.1, 0.2, 2.0));
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma_factor(2.0, 1.0, 0.0).unwrap(), 1.5);
        let g = gamma_factor(2.0, (-2.0f64).exp(), 0.0).unwrap();
        assert!((g - (0.5 + 2f64.sqrt())).abs() < 1e-14);
        assert!(matches!(gamma_factor(2.0, 1.5, 0.0), Err(Error::Input(_))));
        assert!(matches!(gamma_factor(2.0, 0.0, 0.0), Err(Error::Input(_))));
        assert!(matches!(gamma_factor(1.0, 0.5, 0.0), Err(Error::Input(_))));
    }

    #[test]
    fn gamma_is_continuous_as_tau_vanishes() {
        for alpha in [1.1, 1.5, 2.0] {
            for eps in [1e-6, 0.01, 0.5, 1.0] {
                let g0 = gamma_factor(alpha, eps, 0.0).unwrap();
                let mut prev = f64::INFINITY;
                for tau in [1e-2, 1e-4, 1e-8, 1e-16, 1e-32] {
                    let gap = (gamma_factor(alpha, eps, tau).unwrap() - g0).abs();
                    assert!(gap <= prev);
                    prev = gap;
                }
                assert!(prev < 1e-6, "alpha={alpha} eps={eps} gap={prev}");
            }
        }
    }

    #[test]
    fn gamma_decreases_in_eps() {
        for alpha in [1.05, 1.5, 2.0] {
            let mut prev = f64::INFINITY;
            for i in 1..=200 {
                let g = gamma_factor(alpha, f64::from(i) / 200.0, 0.0).unwrap();
                assert!(g < prev);
                prev = g;
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn fixed_point_residual_and_d1_slack(b in 0.0f64..10.0, c in 0.0f64..10.0, alpha in 1.01f64..=2.0) {
            let x = solve_relative(b, c, alpha);
            let resid = (b + c * x.powf(1.0 / alpha) - x).abs();
            prop_assert!(resid <= 1e-10 * x.max(1e-300));
            prop_assert!(explicit_lemma_d1(b, c, alpha) >= x * (1.0 - 1e-12));
        }

        #[test]
        fn feasible_points_lie_below_the_root(b in 0.0f64..5.0, c in 0.0f64..5.0, alpha in 1.01f64..=2.0, t in 0.0f64..1.0) {
            let x = solve_relative(b, c, alpha);
            // points past the root violate the inequality
            let y = x * (1.0 + 1e-6 + t);
            prop_assert!(y > b + c * y.powf(1.0 / alpha));
            // points below the root but above b satisfy it
            let z = b + t * (x - b);
            prop_assert!(z <= b + c * z.powf(1.0 / alpha) + 1e-12);
        }
    }
}
