//! Real Mittag-Leffler function `E_a(z) = sum_k z^k / Gamma(1 + a k)`.
//!
//! Positive arguments are summed in log space, so `ln E_a(z)` is available
//! far beyond the point where `E_a(z)` itself overflows (`E_a(z)` grows like
//! `exp(z^(1/a))/a`). Negative arguments use the alternating series and are
//! rejected once cancellation would cost more than `1e-10` relative accuracy.

use std::cell::RefCell;

use crate::{Error, Result};

/// Largest `ln E` accepted by [`mittag_leffler`] before reporting overflow.
pub const LN_OVERFLOW_THRESHOLD: f64 = 709.0;

/// Upper bound on the number of series terms.
pub const MAX_TERMS: usize = 50_000_000;

const RELATIVE_CUTOFF: f64 = 1e-17;

/// Evaluator with a cache of `ln Gamma(1 + a k)` for a fixed order.
#[derive(Debug)]
pub struct MittagLeffler {
    alpha: f64,
    lgammas: RefCell<Vec<f64>>,
}

impl MittagLeffler {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "Mittag-Leffler order must lie in (0, 1], got {alpha}"
            )));
        }
        Ok(MittagLeffler {
            alpha,
            lgammas: RefCell::new(vec![0.0]),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    fn ensure_terms(&self, count: usize) {
        let mut cache = self.lgammas.borrow_mut();
        let start = cache.len();
        if count > start {
            cache.reserve(count - start);
            for k in start..count {
                cache.push(libm::lgamma(1.0 + self.alpha * k as f64));
            }
        }
    }

    /// Index beyond which the terms of the series decrease for `z > 1`.
    fn peak_index(&self, z: f64) -> f64 {
        (z.ln() / self.alpha).exp() / self.alpha
    }

    /// `ln E_a(z)` for `z >= 0`.
    pub fn ln_eval(&self, z: f64) -> Result<f64> {
        if !z.is_finite() {
            return Err(Error::Domain(format!("Mittag-Leffler argument must be finite, got {z}")));
        }
        if z < 0.0 {
            let value = self.eval(z)?;
            return Ok(value.ln());
        }
        if z == 0.0 {
            return Ok(0.0);
        }
        let ln_z = z.ln();
        let peak = if z > 1.0 { self.peak_index(z) } else { 0.0 };
        if peak > MAX_TERMS as f64 / 2.0 {
            return Err(Error::Range {
                value: z,
                threshold: (self.alpha * MAX_TERMS as f64 / 2.0).powf(self.alpha),
                context: format!("Mittag-Leffler series with order {} needs too many terms", self.alpha),
            });
        }
        // Running log-sum-exp: sum = exp(m) * s.
        let mut m = 0.0f64;
        let mut s = 1.0f64;
        let mut k = 1usize;
        let mut block = 256usize;
        loop {
            self.ensure_terms(k + block);
            let cache = self.lgammas.borrow();
            let end = k + block;
            while k < end {
                let lt = k as f64 * ln_z - cache[k];
                if lt > m {
                    s = s * (m - lt).exp() + 1.0;
                    m = lt;
                } else {
                    s += (lt - m).exp();
                }
                if k as f64 > peak && lt - m - s.ln() < RELATIVE_CUTOFF.ln() {
                    return Ok(m + s.ln());
                }
                k += 1;
            }
            drop(cache);
            if k > MAX_TERMS {
                return Err(Error::Range {
                    value: z,
                    threshold: 0.0,
                    context: "Mittag-Leffler series failed to converge".into(),
                });
            }
            block = (block * 2).min(1 << 20);
        }
    }

    /// `E_a(z)`; errors when the value would overflow or, for negative `z`,
    /// when cancellation in the alternating series is too severe.
    pub fn eval(&self, z: f64) -> Result<f64> {
        if !z.is_finite() {
            return Err(Error::Domain(format!("Mittag-Leffler argument must be finite, got {z}")));
        }
        if z >= 0.0 {
            let ln_value = self.ln_eval(z)?;
            if ln_value > LN_OVERFLOW_THRESHOLD {
                return Err(Error::Range {
                    value: z,
                    threshold: LN_OVERFLOW_THRESHOLD,
                    context: format!(
                        "E_{}(z) overflows: ln E = {ln_value:.3} exceeds the supported threshold",
                        self.alpha
                    ),
                });
            }
            return Ok(ln_value.exp());
        }
        // Alternating series; the magnitude of the largest term bounds the
        // absolute rounding error.
        let abs_ln = self.ln_eval(-z)?;
        let ln_z = (-z).ln();
        let peak = if -z > 1.0 { self.peak_index(-z) } else { 0.0 };
        let mut sum = 1.0f64;
        let mut k = 1usize;
        loop {
            self.ensure_terms(k + 1);
            let lt = k as f64 * ln_z - self.lgammas.borrow()[k];
            let term = lt.exp();
            sum += if k % 2 == 1 { -term } else { term };
            if k as f64 > peak && term < RELATIVE_CUTOFF * sum.abs().max(f64::MIN_POSITIVE) {
                break;
            }
            k += 1;
            if k > MAX_TERMS {
                break;
            }
        }
        let magnitude = abs_ln.exp();
        if !(magnitude * 1e-16 <= 1e-10 * sum.abs()) {
            return Err(Error::Range {
                value: z,
                threshold: 0.0,
                context: format!(
                    "E_{}(z) for negative z loses accuracy to cancellation (term scale {magnitude:.3e})",
                    self.alpha
                ),
            });
        }
        Ok(sum)
    }
}

/// `E_a(z)`; see [`MittagLeffler::eval`].
pub fn mittag_leffler(alpha: f64, z: f64) -> Result<f64> {
    MittagLeffler::new(alpha)?.eval(z)
}

/// `ln E_a(z)`; see [`MittagLeffler::ln_eval`].
pub fn ln_mittag_leffler(alpha: f64, z: f64) -> Result<f64> {
    MittagLeffler::new(alpha)?.ln_eval(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_at_zero() {
        for &a in &[0.1, 0.5, 0.9, 1.0] {
            assert_eq!(mittag_leffler(a, 0.0).unwrap(), 1.0);
        }
    }

    #[test]
    fn order_one_is_exponential() {
        for i in 0..=40 {
            let z = i as f64 * 0.25;
            let v = mittag_leffler(1.0, z).unwrap();
            assert!((v - z.exp()).abs() <= 1e-13 * z.exp(), "z = {z}");
        }
        let v = mittag_leffler(1.0, -2.0).unwrap();
        assert!((v - (-2f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn half_order_reference_value() {
        // e * erfc(-1)
        let v = mittag_leffler(0.5, 1.0).unwrap();
        assert!((v - 5.00898).abs() < 1e-5);
    }

    #[test]
    fn overflow_is_reported_with_threshold() {
        let err = mittag_leffler(0.3, 50.0).unwrap_err();
        match err {
            Error::Range { threshold, .. } => assert_eq!(threshold, LN_OVERFLOW_THRESHOLD),
            other => panic!("unexpected error {other:?}"),
        }
        // ln E_0.3(50) ~ 50^(1/0.3) - ln 0.3
        let ln_v = ln_mittag_leffler(0.3, 50.0).unwrap();
        let asymptotic = 50f64.powf(1.0 / 0.3) - 0.3f64.ln();
        assert!((ln_v - asymptotic).abs() < 1e-6 * asymptotic);
    }

    #[test]
    fn rejects_bad_order() {
        assert!(mittag_leffler(0.0, 1.0).is_err());
        assert!(mittag_leffler(1.5, 1.0).is_err());
    }

    #[test]
    fn cached_evaluator_is_increasing() {
        let ml = MittagLeffler::new(0.1).unwrap();
        let mut prev = 0.0;
        for i in 0..50 {
            let z = i as f64 * 0.05;
            let v = ml.ln_eval(z).unwrap();
            assert!(v >= prev);
            prev = v;
        }
    }
}
