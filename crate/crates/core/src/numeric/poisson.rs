use thiserror::Error;

use super::SeededStream;

#[derive(Debug, Error, PartialEq)]
pub enum PoissonError {
    #[error("poisson rate must be positive and finite, got {0}")]
    InvalidLambda(f64),
}

/// One draw from Poisson(lambda).
///
/// Inversion by sequential search for `lambda <= 30`; for larger rates the
/// Cauchy-envelope rejection sampler (Numerical Recipes / Press et al.),
/// which is exact up to the accuracy of `ln_gamma`. Advances `stream`.
pub fn poisson_sample(lambda: f64, stream: &mut SeededStream) -> Result<u64, PoissonError> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(PoissonError::InvalidLambda(lambda));
    }
    if lambda <= 30.0 {
        Ok(sample_inversion(lambda, stream))
    } else {
        Ok(sample_rejection(lambda, stream))
    }
}

fn sample_inversion(lambda: f64, stream: &mut SeededStream) -> u64 {
    let u = stream.next_f64();
    let mut k = 0u64;
    let mut pmf = (-lambda).exp();
    let mut cdf = pmf;
    while u > cdf {
        k += 1;
        pmf *= lambda / k as f64;
        cdf += pmf;
        if pmf < f64::MIN_POSITIVE {
            // tail mass below representable resolution
            break;
        }
    }
    k
}

fn sample_rejection(lambda: f64, stream: &mut SeededStream) -> u64 {
    let log_lambda = lambda.ln();
    let sqrt_2lambda = (2.0 * lambda).sqrt();
    let magic = lambda * log_lambda - ln_gamma(lambda + 1.0);
    loop {
        let mut candidate;
        let mut cauchy;
        loop {
            cauchy = (std::f64::consts::PI * stream.next_f64()).tan();
            candidate = sqrt_2lambda * cauchy + lambda;
            if candidate >= 0.0 {
                break;
            }
        }
        candidate = candidate.floor();
        let accept = 0.9
            * (1.0 + cauchy * cauchy)
            * (candidate * log_lambda - ln_gamma(candidate + 1.0) - magic).exp();
        if stream.next_f64() <= accept {
            return candidate as u64;
        }
    }
}

/// Smallest `s` with `P(X <= s) >= 1 - epsilon` for `X ~ Poisson(lambda)`.
///
/// Term-by-term accumulation of the pmf starting from `e^-lambda`; the terms
/// are positive and the running sum is monotone, so there is no cancellation.
/// Stops early if the terms fall below representable resolution.
pub fn poisson_cdf_cutoff(lambda: f64, epsilon: f64) -> u64 {
    assert!(lambda > 0.0 && lambda.is_finite(), "lambda must be positive");
    assert!(epsilon > 0.0 && epsilon < 1.0, "epsilon must be in (0, 1)");
    let target = 1.0 - epsilon;
    let mut s = 0u64;
    let mut pmf = (-lambda).exp();
    let mut cdf = pmf;
    while cdf < target {
        s += 1;
        pmf *= lambda / s as f64;
        cdf += pmf;
        if pmf < f64::MIN_POSITIVE && s as f64 > lambda {
            break;
        }
    }
    s
}

/// Natural log of the gamma function for positive arguments, Lanczos g=7.
///
/// Relative error around 1e-13; only used inside the rejection sampler,
/// whose 0.9 envelope factor absorbs the approximation error.
fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    const COEFFS: [f64; 8] = [
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    let x = x - 1.0;
    let mut acc = 0.999_999_999_999_809_93;
    for (i, c) in COEFFS.iter().enumerate() {
        acc += c / (x + (i + 1) as f64);
    }
    let t = x + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}
