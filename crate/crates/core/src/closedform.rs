//! Analytic d(l) expressions for each intermediate state, and a
//! cross-check harness that compares them with d(l) summed directly over the
//! photon-number distribution.
//!
//! The binomial, generalized binomial and hypergeometric expressions are
//! built from normal-ordered factorial moments and agree with the direct
//! sum. The reciprocal binomial, negative binomial, geometric and
//! photon-added coherent expressions are evaluated exactly as written; they
//! do not reduce to the normal-ordered sum in general, and the cross-check
//! reports by how much rather than asserting agreement.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criteria::{d_criterion, default_zero_tol};
use crate::error::{Error, Result};
use crate::format::fmt_f64;
use crate::numerics::{
    falling_factorial, falling_factorial_log, hyp_series, ln_factorial, pochhammer_log,
    CompensatedSum, HypSeriesResult, LogReal,
};
use crate::states::{hs_min_size, StateSpec, DEFAULT_TAIL_TOL};

fn need_order(l: u32) -> Result<()> {
    if l == 0 {
        Err(Error::Constraint("criterion order l must be >= 1".into()))
    } else {
        Ok(())
    }
}

fn need_photons(have: u32, l: u32, sym: &str) -> Result<()> {
    if have < l + 1 {
        Err(Error::Constraint(format!(
            "closed form needs {sym} >= l + 1, got {sym} = {have}, l = {l}"
        )))
    } else {
        Ok(())
    }
}

/// Binomial state: M!/(M−l−1)! p^(l+1) − (Mp)^(l+1).
pub fn d_bs_closed(p: f64, max_photons: u32, l: u32) -> Result<f64> {
    need_order(l)?;
    StateSpec::Binomial { p, max_photons }.validate()?;
    need_photons(max_photons, l, "M")?;
    let k = l as i32 + 1;
    let m = f64::from(max_photons);
    let first = falling_factorial_log(m, u64::from(l) + 1) * LogReal::from(p).powi(k);
    let second = LogReal::from(m * p).powi(k);
    Ok(first.to_f64() - second.to_f64())
}

/// Generalized binomial state, product form:
/// [N(N−1)...(N−l)][(α+1)...(α+l+1)] / [(α+β+2)...(α+β+l+2)] − {N(α+1)/(α+β+2)}^(l+1).
///
/// Valid for real α, β.
pub fn d_gbs_closed(max_photons: u32, alpha: f64, beta: f64, l: u32) -> Result<f64> {
    need_order(l)?;
    StateSpec::GeneralizedBinomial {
        max_photons,
        alpha,
        beta,
    }
    .validate()?;
    need_photons(max_photons, l, "N")?;
    let n = f64::from(max_photons);
    let k = u64::from(l) + 1;
    let first = falling_factorial_log(n, k) * pochhammer_log(alpha + 1.0, k)
        / pochhammer_log(alpha + beta + 2.0, k);
    let second = LogReal::from(n * (alpha + 1.0) / (alpha + beta + 2.0)).powi(k as i32);
    Ok(first.to_f64() - second.to_f64())
}

/// Reciprocal binomial state, finite-sum form:
/// Σ_{i=0}^{l+1} (−1)^i [(l+1)!]² / [((l+1−i)!)² i!] · (N+l+1−i)!/N! − N^(l+1).
///
/// The integer-argument sum is used throughout; the equivalent
/// Gamma-function form is singular at integer N and is never evaluated.
pub fn d_rbs_closed(max_photons: u32, l: u32) -> Result<f64> {
    need_order(l)?;
    let k = u64::from(l) + 1;
    let n = u64::from(max_photons);
    let ln_k_fact = ln_factorial(k);
    let mut acc = CompensatedSum::new();
    for i in 0..=k {
        let ln_mag = 2.0 * ln_k_fact - 2.0 * ln_factorial(k - i) - ln_factorial(i)
            + (ln_factorial(n + k - i) - ln_factorial(n));
        let sign = if i % 2 == 0 { 1 } else { -1 };
        acc.add(LogReal::new(sign, ln_mag).to_f64());
    }
    let value = acc.value() - (n as f64).powi(k as i32);
    finite(value, "reciprocal binomial closed form")
}

fn finite(x: f64, what: &str) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::Numerical(format!("{what} is not finite")))
    }
}

fn converged(r: HypSeriesResult, what: &str) -> Result<f64> {
    if !r.converged {
        return Err(Error::Numerical(format!(
            "{what} did not converge in {} terms",
            r.terms_used
        )));
    }
    finite(r.value, what)
}

/// Negative binomial state:
/// η^(−l) [ (l+M+1)! ₂F₁(−l−1, −l−1; −l−M−1; η) / M! − (M+1)^(l+1)/η ].
///
/// The ₂F₁ terminates after `l + 2` terms through its numerator
/// parameters, before the negative-integer denominator is reached.
pub fn d_nbs_closed(eta: f64, min_photons: u32, l: u32) -> Result<f64> {
    need_order(l)?;
    StateSpec::NegativeBinomial { eta, min_photons }.validate()?;
    let a = -(f64::from(l) + 1.0);
    let c = -(f64::from(l) + f64::from(min_photons) + 1.0);
    let f = converged(hyp_series(&[a, a], &[c], eta)?, "2F1")?;
    let k = u64::from(l) + 1;
    let m = f64::from(min_photons);
    // (l+M+1)!/M! = (M+1)(M+2)...(M+l+1)
    let first = pochhammer_log(m + 1.0, k) * LogReal::from(f);
    let second = LogReal::from(m + 1.0).powi(k as i32) / LogReal::from(eta);
    let scale = LogReal::from(eta).powi(-(l as i32));
    finite(
        (scale * first).to_f64() - (scale * second).to_f64(),
        "negative binomial closed form",
    )
}

/// Geometric state: η^(−(l+1)) ((1−η)^(l+1) η (l+1)! − 1).
///
/// Singular at η = 0.
pub fn d_gs_closed(eta: f64, l: u32) -> Result<f64> {
    need_order(l)?;
    if eta == 0.0 {
        return Err(Error::Domain(
            "geometric closed form is singular at eta = 0".into(),
        ));
    }
    StateSpec::Geometric { eta }.validate()?;
    let k = l as i32 + 1;
    let inner = (1.0 - eta).powi(k) * eta * crate::numerics::factorial(u64::from(l) + 1) - 1.0;
    finite(inner / eta.powi(k), "geometric closed form")
}

/// Photon-added coherent state:
///
/// e^(−α²) α^(2l+2) ((l+m+1)!)² ₃F₃({1, l+m+2, l+m+2}; {l+2, l+2, m+1}; α²)
/// / ((m!(l+1)!)² ₁F₁(−m; 1; −α²))
/// − ( e^(−α²) [−m + m ₁F₁(m+1; 1; α²) + (m+1) α² ₁F₁(m+2; 2; α²)] / ₁F₁(−m; 1; −α²) )^(l+1).
pub fn d_pacs_closed(alpha: f64, added_photons: u32, l: u32) -> Result<f64> {
    need_order(l)?;
    StateSpec::PhotonAddedCoherent {
        alpha,
        added_photons,
    }
    .validate()?;
    let x = alpha * alpha;
    let m = f64::from(added_photons);
    let lf = f64::from(l);
    let norm = converged(hyp_series(&[-m], &[1.0], -x)?, "1F1(-m; 1; -x)")?;

    let bracket = if x == 0.0 {
        0.0
    } else {
        let f1 = converged(hyp_series(&[m + 1.0], &[1.0], x)?, "1F1(m+1; 1; x)")?;
        let f2 = converged(hyp_series(&[m + 2.0], &[2.0], x)?, "1F1(m+2; 2; x)")?;
        (-x).exp() * (-m + m * f1 + (m + 1.0) * x * f2) / norm
    };

    let first = if x == 0.0 {
        0.0
    } else {
        let top = lf + m + 2.0;
        let f33 = converged(
            hyp_series(&[1.0, top, top], &[lf + 2.0, lf + 2.0, m + 1.0], x)?,
            "3F3",
        )?;
        let k = u64::from(l) + 1;
        let mm = u64::from(added_photons);
        let ln_pref = 2.0 * ln_factorial(k + mm) - 2.0 * (ln_factorial(mm) + ln_factorial(k));
        (ln_pref - x + (lf + 1.0) * x.ln()).exp() * f33 / norm
    };

    finite(
        first - bracket.powi(l as i32 + 1),
        "photon-added coherent closed form",
    )
}

/// Hypergeometric state:
/// −(Mη)^(l+1) + (L−l−1)! M! (Lη)! / (L! (M−l−1)! (Lη−1−l)!),
/// where the real-argument factorial ratios are the falling products
/// (Lη)!/(Lη−1−l)! = Π_{j=0}^{l} (Lη − j) and L!/(L−l−1)! = Π_{j=0}^{l} (L − j).
pub fn d_hs_closed(size: f64, max_photons: u32, eta: f64, l: u32) -> Result<f64> {
    need_order(l)?;
    StateSpec::Hypergeometric {
        size,
        max_photons,
        eta,
    }
    .validate()?;
    need_photons(max_photons, l, "M")?;
    let k = u64::from(l) + 1;
    let m = f64::from(max_photons);
    let first = falling_factorial_log(m, k) * falling_factorial_log(size * eta, k)
        / falling_factorial_log(size, k);
    let second = LogReal::from(m * eta).powi(k as i32);
    Ok(first.to_f64() - second.to_f64())
}

/// Closed-form d(l) for any state.
pub fn d_closed(spec: &StateSpec, l: u32) -> Result<f64> {
    match *spec {
        StateSpec::Binomial { p, max_photons } => d_bs_closed(p, max_photons, l),
        StateSpec::GeneralizedBinomial {
            max_photons,
            alpha,
            beta,
        } => d_gbs_closed(max_photons, alpha, beta, l),
        StateSpec::ReciprocalBinomial { max_photons, .. } => d_rbs_closed(max_photons, l),
        StateSpec::NegativeBinomial { eta, min_photons } => d_nbs_closed(eta, min_photons, l),
        StateSpec::Geometric { eta } => d_gs_closed(eta, l),
        StateSpec::PhotonAddedCoherent {
            alpha,
            added_photons,
        } => d_pacs_closed(alpha, added_photons, l),
        StateSpec::Hypergeometric {
            size,
            max_photons,
            eta,
        } => d_hs_closed(size, max_photons, eta, l),
    }
}

/// Whether the closed form for `spec` is expected to equal the
/// normal-ordered direct sum.
pub fn is_normal_ordered(spec: &StateSpec) -> bool {
    matches!(
        spec,
        StateSpec::Binomial { .. }
            | StateSpec::GeneralizedBinomial { .. }
            | StateSpec::Hypergeometric { .. }
    )
}

/// d(l) summed over the photon-number distribution, with the support
/// extended far enough that the (l+1)-th factorial moment is accurate.
pub fn d_oracle(spec: &StateSpec, l: u32, tail_tol: f64) -> Result<f64> {
    need_order(l)?;
    let pnd = spec.build_for_moments(tail_tol, l + 1)?;
    Ok(d_criterion(&pnd, l))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyRow {
    pub state: StateSpec,
    pub l: u32,
    pub d_oracle: f64,
    pub d_closed: f64,
    pub abs_dev: f64,
    pub rel_dev: f64,
    pub agreement: bool,
    /// Relative tolerance the row was judged at.
    pub tol: f64,
    /// Absolute band under which both values count as zero.
    pub zero_tol: f64,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedPoint {
    pub state: StateSpec,
    pub l: u32,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    pub rows: Vec<DiscrepancyRow>,
    /// Orders outside a closed form's domain (for example l ≥ M).
    pub skipped: Vec<SkippedPoint>,
}

impl DiscrepancyReport {
    pub fn agree_count(&self) -> usize {
        self.rows.iter().filter(|r| r.agreement).count()
    }

    pub fn disagree_count(&self) -> usize {
        self.rows.len() - self.agree_count()
    }

    pub fn rows_for<'a>(
        &'a self,
        family: &'a str,
    ) -> impl Iterator<Item = &'a DiscrepancyRow> + 'a {
        self.rows.iter().filter(move |r| r.state.family() == family)
    }

    pub fn merge(&mut self, other: DiscrepancyReport) {
        self.rows.extend(other.rows);
        self.skipped.extend(other.skipped);
    }

    pub fn summary(&self) -> String {
        format!(
            "{} rows: {} agree, {} disagree, {} skipped",
            self.rows.len(),
            self.agree_count(),
            self.disagree_count(),
            self.skipped.len()
        )
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// CSV columns `state,params,l,d_oracle,d_closed,abs_dev,rel_dev,agree,note`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(w);
        out.write_record([
            "state", "params", "l", "d_oracle", "d_closed", "abs_dev", "rel_dev", "agree", "note",
        ])?;
        for r in &self.rows {
            out.write_record([
                r.state.family().to_string(),
                params_label(&r.state),
                r.l.to_string(),
                fmt_f64(r.d_oracle),
                fmt_f64(r.d_closed),
                fmt_f64(r.abs_dev),
                fmt_f64(r.rel_dev),
                r.agreement.to_string(),
                r.note.clone(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// `name=value` pairs joined with `;`.
pub fn params_label(spec: &StateSpec) -> String {
    spec.param_names()
        .iter()
        .map(|n| format!("{n}={}", spec.param(n).unwrap_or(f64::NAN)))
        .collect::<Vec<_>>()
        .join(";")
}

fn discrepancy_note(spec: &StateSpec, agree: bool) -> String {
    let base = "normal-ordered oracle";
    if agree {
        return base.to_string();
    }
    let why = match spec {
        StateSpec::ReciprocalBinomial { .. } => {
            "closed form was derived with antinormal ordering and its trailing N^(l+1) may denote the normalization constant"
        }
        StateSpec::NegativeBinomial { .. } => {
            "ordering of the closed form is unstated; its (M+1)^(l+1)/eta term matches <a a^dag>^(l+1)"
        }
        StateSpec::Geometric { .. } => {
            "ordering ambiguity: the closed form matches neither the normal- nor the antinormal-ordered direct sum"
        }
        StateSpec::PhotonAddedCoherent { .. } => {
            "closed-form mean bracket differs from the exact mean (m+1)L_(m+1)(-alpha^2)/L_m(-alpha^2) - 1 and vanishes at alpha = 0 where the state is |m>"
        }
        _ => "unexpected disagreement for a normal-ordered closed form",
    };
    format!("{base}; DISAGREE: {why}")
}

/// Compares the closed form with the direct sum for `l = 1..=l_max`.
///
/// Orders outside the closed form's domain are listed in
/// [`DiscrepancyReport::skipped`]. A row agrees when the relative deviation
/// is at most `tol`, or when the absolute deviation is inside the default
/// coherence band.
pub fn crosscheck(spec: &StateSpec, l_max: u32, tol: f64) -> Result<DiscrepancyReport> {
    spec.validate()?;
    if l_max == 0 {
        return Err(Error::Constraint("l_max must be >= 1".into()));
    }
    let pnd = spec.build_for_moments(DEFAULT_TAIL_TOL, l_max + 1)?;
    let mean = pnd.mean();
    let mut report = DiscrepancyReport::default();
    for l in 1..=l_max {
        let d_closed = match d_closed(spec, l) {
            Ok(v) => v,
            Err(Error::Constraint(reason)) => {
                report.skipped.push(SkippedPoint {
                    state: *spec,
                    l,
                    reason,
                });
                continue;
            }
            Err(e) => return Err(e),
        };
        let d_oracle = d_criterion(&pnd, l);
        let abs_dev = (d_oracle - d_closed).abs();
        let scale = d_oracle.abs().max(d_closed.abs());
        let rel_dev = if scale == 0.0 { 0.0 } else { abs_dev / scale };
        let zero_tol = default_zero_tol(mean, l);
        let agreement = rel_dev <= tol || abs_dev <= zero_tol;
        report.rows.push(DiscrepancyRow {
            state: *spec,
            l,
            d_oracle,
            d_closed,
            abs_dev,
            rel_dev,
            agreement,
            tol,
            zero_tol,
            note: discrepancy_note(spec, agreement),
        });
    }
    Ok(report)
}

/// Default parameter grid for a state family.
pub fn default_grid(family: &str) -> Result<Vec<StateSpec>> {
    let mut out = Vec::new();
    match family {
        "binomial" => {
            for p in [0.1, 0.25, 0.5, 0.75, 0.9] {
                for max_photons in [2, 5, 10, 20] {
                    out.push(StateSpec::Binomial { p, max_photons });
                }
            }
        }
        "gbs" => {
            for max_photons in [3, 6, 10, 20] {
                for alpha in [-0.5, 0.0, 1.0, 2.0, 10.0] {
                    for beta in [-0.5, 0.0, 1.0, 5.0] {
                        out.push(StateSpec::GeneralizedBinomial {
                            max_photons,
                            alpha,
                            beta,
                        });
                    }
                }
            }
        }
        "rbs" => {
            for max_photons in [0, 1, 2, 5, 10] {
                out.push(StateSpec::ReciprocalBinomial {
                    max_photons,
                    theta: 0.0,
                });
            }
        }
        "nbs" => {
            for eta in [0.25, 0.5, 0.75, 1.0] {
                for min_photons in [0, 1, 3, 10] {
                    out.push(StateSpec::NegativeBinomial { eta, min_photons });
                }
            }
        }
        "geometric" => {
            for eta in [0.25, 0.5, 0.75, 1.0] {
                out.push(StateSpec::Geometric { eta });
            }
        }
        "pacs" => {
            for alpha in [0.5, 1.0, 2.0] {
                for added_photons in [0, 1, 3] {
                    out.push(StateSpec::PhotonAddedCoherent {
                        alpha,
                        added_photons,
                    });
                }
            }
        }
        "hs" => {
            for max_photons in [2, 4, 6, 10] {
                for eta in [0.2, 0.5, 0.8] {
                    let min = hs_min_size(max_photons, eta);
                    for size in [min, 10.0 * min] {
                        out.push(StateSpec::Hypergeometric {
                            size,
                            max_photons,
                            eta,
                        });
                    }
                }
            }
        }
        other => return Err(Error::Config(format!("unknown state family {other:?}"))),
    }
    Ok(out)
}

/// Cross-checks every point of a family's default grid, in grid order.
pub fn crosscheck_family(family: &str, l_max: u32, tol: f64) -> Result<DiscrepancyReport> {
    let grid = default_grid(family)?;
    let parts: Vec<Result<DiscrepancyReport>> =
        grid.par_iter().map(|s| crosscheck(s, l_max, tol)).collect();
    let mut report = DiscrepancyReport::default();
    for part in parts {
        report.merge(part?);
    }
    Ok(report)
}

/// Cross-checks all seven families.
pub fn crosscheck_all(l_max: u32, tol: f64) -> Result<DiscrepancyReport> {
    let mut report = DiscrepancyReport::default();
    for family in crate::states::FAMILIES {
        report.merge(crosscheck_family(family, l_max, tol)?);
    }
    Ok(report)
}

/// Exact mean photon number of the hypergeometric state, `Mη`.
pub fn hs_mean(max_photons: u32, eta: f64) -> f64 {
    f64::from(max_photons) * eta
}

/// (M)_fall(l) (Lη)_fall(l) / (L)_fall(l), the l-th factorial moment of the
/// hypergeometric state.
pub fn hs_factorial_moment(size: f64, max_photons: u32, eta: f64, l: u32) -> f64 {
    let k = u64::from(l);
    falling_factorial(f64::from(max_photons), k) * falling_factorial(size * eta, k)
        / falling_factorial(size, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn near(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn bs_examples() {
        near(d_bs_closed(0.5, 10, 1).unwrap(), -2.5, 1e-12);
        assert_eq!(d_bs_closed(0.0, 10, 2).unwrap(), 0.0);
        near(d_bs_closed(1.0, 2, 1).unwrap(), -2.0, 1e-14);
        assert!(matches!(d_bs_closed(0.5, 2, 2), Err(Error::Constraint(_))));
    }

    #[test]
    fn gbs_examples() {
        near(d_gbs_closed(2, 0.0, 0.0, 1).unwrap(), -1.0 / 3.0, 1e-15);
        assert!(d_gbs_closed(10, 2.0, 1.0, 8).unwrap() < 0.0);
        let pnd = crate::states::build_gbs(12, 0.0, 0.0).unwrap();
        near(
            d_gbs_closed(12, 0.0, 0.0, 1).unwrap(),
            d_criterion(&pnd, 1),
            1e-10,
        );
        assert!(matches!(
            d_gbs_closed(3, 0.0, 0.0, 3),
            Err(Error::Constraint(_))
        ));
    }

    #[test]
    fn rbs_examples() {
        near(d_rbs_closed(2, 1).unwrap(), -2.0, 1e-12);
        near(d_rbs_closed(0, 1).unwrap(), 0.0, 1e-12);
        assert!(d_rbs_closed(10, 8).unwrap().is_finite());
        assert!(d_rbs_closed(10, 9).unwrap().is_finite());
    }

    #[test]
    fn rbs_matches_exact_integer_sum() {
        // Integer arithmetic reference for a few (N, l).
        fn exact(n: u128, l: u128) -> i128 {
            let f = |k: u128| (1..=k).product::<u128>();
            let k = l + 1;
            let mut s: i128 = 0;
            for i in 0..=k {
                let t = f(k) * f(k) / (f(k - i) * f(k - i) * f(i)) * (f(n + k - i) / f(n));
                s += if i % 2 == 0 { t as i128 } else { -(t as i128) };
            }
            s - (n.pow(k as u32) as i128)
        }
        for &(n, l) in &[(2u32, 1u32), (5, 3), (10, 8), (11, 9), (20, 4)] {
            let want = exact(n.into(), l.into()) as f64;
            let got = d_rbs_closed(n, l).unwrap();
            assert!(
                ((got - want) / want).abs() < 1e-12,
                "N={n} l={l}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn nbs_examples() {
        near(d_nbs_closed(0.5, 0, 1).unwrap(), -3.0, 1e-12);
        near(d_nbs_closed(1.0, 0, 1).unwrap(), -1.0, 1e-12);
        assert!(d_nbs_closed(0.5, 10, 8).unwrap().is_finite());
        assert!(matches!(d_nbs_closed(0.0, 1, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn gs_examples() {
        for l in 1..=10 {
            near(d_gs_closed(1.0, l).unwrap(), -1.0, 1e-15);
        }
        near(d_gs_closed(0.5, 2).unwrap(), -5.0, 1e-12);
        assert!(matches!(d_gs_closed(0.0, 3), Err(Error::Domain(_))));
        assert!(d_gs_closed(1e-3, 3).unwrap() < -1e6);
    }

    #[test]
    fn gs_is_the_zero_floor_negative_binomial() {
        for &eta in &[0.2, 0.5, 0.9] {
            for l in 1..=5 {
                let a = d_gs_closed(eta, l).unwrap();
                let b = d_nbs_closed(eta, 0, l).unwrap();
                assert!(((a - b) / a).abs() < 1e-12, "eta={eta} l={l}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn pacs_examples() {
        assert!(d_pacs_closed(1.7, 0, 3).unwrap().abs() <= 1e-9 * 1.7f64.powi(8));
        assert_eq!(d_pacs_closed(0.0, 5, 2).unwrap(), 0.0);
        for i in 1..=30 {
            let alpha = 0.1 * f64::from(i);
            let d3 = d_pacs_closed(alpha, 15, 3).unwrap();
            let d4 = d_pacs_closed(alpha, 15, 4).unwrap();
            assert!(d3 < 0.0 && d4 < 0.0 && d4.abs() > d3.abs(), "alpha={alpha}");
        }
    }

    #[test]
    fn hs_examples() {
        near(d_hs_closed(4.0, 2, 0.5, 1).unwrap(), -2.0 / 3.0, 1e-15);
        near(d_hs_closed(1e8, 10, 0.5, 1).unwrap(), -2.5, 1e-5);
        for m in 9..=12 {
            let eta = 0.3;
            assert!(d_hs_closed(hs_min_size(m, eta), m, eta, 8).unwrap() < 0.0);
        }
        assert!(matches!(
            d_hs_closed(3.0, 2, 0.5, 1),
            Err(Error::Constraint(_))
        ));
        assert!(matches!(
            d_hs_closed(4.0, 2, 0.5, 2),
            Err(Error::Constraint(_))
        ));
    }

    #[test]
    fn crosscheck_examples() {
        let r = crosscheck(
            &StateSpec::Binomial {
                p: 0.5,
                max_photons: 10,
            },
            5,
            1e-10,
        )
        .unwrap();
        assert_eq!(r.rows.len(), 5);
        assert!(r.rows.iter().all(|x| x.agreement));

        let r = crosscheck(
            &StateSpec::Hypergeometric {
                size: 4.0,
                max_photons: 2,
                eta: 0.5,
            },
            1,
            1e-10,
        )
        .unwrap();
        assert_eq!(r.rows.len(), 1);
        near(r.rows[0].d_oracle, -2.0 / 3.0, 1e-15);
        assert!(r.rows[0].agreement);

        let r = crosscheck(&StateSpec::Geometric { eta: 0.5 }, 2, 1e-10).unwrap();
        let row = &r.rows[1];
        assert!(row.d_oracle >= 0.0 && row.d_closed < 0.0 && !row.agreement);
        assert!(row.note.contains("ordering"));
    }

    #[test]
    fn crosscheck_skips_orders_outside_domain() {
        let r = crosscheck(
            &StateSpec::Binomial {
                p: 0.5,
                max_photons: 2,
            },
            3,
            1e-10,
        )
        .unwrap();
        assert_eq!(r.rows.len(), 1);
        assert_eq!(
            r.skipped.iter().map(|s| s.l).collect::<Vec<_>>(),
            vec![2, 3]
        );
    }

    #[test]
    fn report_csv_header() {
        let r = crosscheck(
            &StateSpec::Binomial {
                p: 0.5,
                max_photons: 10,
            },
            1,
            1e-10,
        )
        .unwrap();
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "state,params,l,d_oracle,d_closed,abs_dev,rel_dev,agree,note"
        );
        assert!(lines.next().unwrap().starts_with("binomial,p=0.5;M=10,1,"));
    }
}
