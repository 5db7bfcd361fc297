use super::sum::CompensatedSum;
use crate::error::{Error, Result};

/// Maximum number of terms summed for a non-terminating series.
pub const SERIES_TERM_CAP: usize = 1_000_000;

const REL_STOP: f64 = 1e-16;
const STOP_RUN: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypSeriesResult {
    pub value: f64,
    pub terms_used: usize,
    /// The series ended exactly because a numerator parameter is a
    /// non-positive integer.
    pub terminated: bool,
    /// False only when the term cap was hit.
    pub converged: bool,
    pub residual_estimate: f64,
}

fn non_positive_integer(x: f64) -> Option<usize> {
    (x <= 0.0 && x.fract() == 0.0).then(|| (-x) as usize)
}

/// Generalized hypergeometric series pFq(numerators; denominators; z).
///
/// A numerator equal to `-n` truncates the sum after the `z^n` term. A
/// denominator equal to `-d` is tolerated only if the series has already
/// terminated by then, i.e. `d >= n`.
pub fn hyp_series(numerators: &[f64], denominators: &[f64], z: f64) -> Result<HypSeriesResult> {
    let stop_at = numerators
        .iter()
        .filter_map(|&a| non_positive_integer(a))
        .min();

    for &b in denominators {
        if let Some(d) = non_positive_integer(b) {
            let reached = match stop_at {
                Some(n) => d < n,
                None => true,
            };
            if reached {
                return Err(Error::DegenerateSeries(format!(
                    "denominator parameter {b} reached at k = {} before termination",
                    d + 1
                )));
            }
        }
    }

    let ratio = |k: usize| -> f64 {
        let kf = k as f64;
        let num: f64 = numerators.iter().map(|a| a + kf).product();
        let den: f64 = denominators.iter().map(|b| b + kf).product();
        num / den * z / (kf + 1.0)
    };

    let mut acc = CompensatedSum::new();
    let mut term = 1.0;
    acc.add(term);

    if let Some(n) = stop_at {
        for k in 0..n {
            term *= ratio(k);
            acc.add(term);
        }
        let value = acc.value();
        if !value.is_finite() {
            return Err(Error::Numerical(format!(
                "terminating series overflowed (z = {z})"
            )));
        }
        return Ok(HypSeriesResult {
            value,
            terms_used: n + 1,
            terminated: true,
            converged: true,
            residual_estimate: 0.0,
        });
    }

    let mut small_run = 0;
    let mut terms = 1;
    while terms < SERIES_TERM_CAP {
        term *= ratio(terms - 1);
        acc.add(term);
        terms += 1;
        if !term.is_finite() {
            return Err(Error::Numerical(format!(
                "series term overflowed at k = {terms}"
            )));
        }
        if term.abs() < REL_STOP * acc.value().abs() || term == 0.0 {
            small_run += 1;
            if small_run >= STOP_RUN {
                return Ok(HypSeriesResult {
                    value: acc.value(),
                    terms_used: terms,
                    terminated: false,
                    converged: true,
                    residual_estimate: term.abs(),
                });
            }
        } else {
            small_run = 0;
        }
    }
    Ok(HypSeriesResult {
        value: acc.value(),
        terms_used: terms,
        terminated: false,
        converged: false,
        residual_estimate: term.abs(),
    })
}

/// Laguerre polynomial L_m(x) as the terminating series 1F1(-m; 1; x).
pub fn laguerre(m: u32, x: f64) -> f64 {
    hyp_series(&[-f64::from(m)], &[1.0], x)
        .map(|r| r.value)
        .unwrap_or(f64::NAN)
}
