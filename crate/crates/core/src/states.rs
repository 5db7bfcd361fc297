//! Photon-number distributions of the intermediate states.
//!
//! Every builder returns a [`Pnd`]: a probability sequence over a contiguous
//! photon-number range. Finite-support states (binomial, generalized
//! binomial, reciprocal binomial, hypergeometric) are exact and normalized.
//! The negative binomial, geometric and photon-added coherent states have
//! infinite support and are cut where a ratio-test bound on the omitted
//! mass drops below the requested tolerance.
//!
//! All weights are accumulated as logarithms and exponentiated at the end,
//! so parameters such as `L = 1e6` in the hypergeometric state do not
//! overflow.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::fmt_f64;
use crate::numerics::{compensated_sum, laguerre, ln_factorial};

/// Default bound on the probability mass dropped by truncation.
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

/// Hard limit on the length of a truncated support.
pub const MAX_SUPPORT: usize = 20_000_000;

const HS_CONSTRAINT_SLACK: f64 = 1e-12;

/// One intermediate state and its parameters.
///
/// The serialized form uses the conventional symbols as parameter names,
/// e.g. `{"state": "binomial", "params": {"p": 0.5, "M": 10}}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "state", content = "params", rename_all = "snake_case")]
pub enum StateSpec {
    Binomial {
        p: f64,
        #[serde(rename = "M")]
        max_photons: u32,
    },
    #[serde(rename = "gbs")]
    GeneralizedBinomial {
        #[serde(rename = "N")]
        max_photons: u32,
        alpha: f64,
        beta: f64,
    },
    #[serde(rename = "rbs")]
    ReciprocalBinomial {
        #[serde(rename = "N")]
        max_photons: u32,
        /// Phase parameter. It only enters the amplitudes' phases and has no
        /// effect on any photon-number statistic.
        theta: f64,
    },
    #[serde(rename = "nbs")]
    NegativeBinomial {
        eta: f64,
        #[serde(rename = "M")]
        min_photons: u32,
    },
    Geometric {
        eta: f64,
    },
    #[serde(rename = "pacs")]
    PhotonAddedCoherent {
        alpha: f64,
        #[serde(rename = "m")]
        added_photons: u32,
    },
    #[serde(rename = "hs")]
    Hypergeometric {
        #[serde(rename = "L")]
        size: f64,
        #[serde(rename = "M")]
        max_photons: u32,
        eta: f64,
    },
}

/// State family identifiers, in the order used by reports.
pub const FAMILIES: [&str; 7] = ["binomial", "gbs", "rbs", "nbs", "geometric", "pacs", "hs"];

impl StateSpec {
    pub fn family(&self) -> &'static str {
        match self {
            StateSpec::Binomial { .. } => "binomial",
            StateSpec::GeneralizedBinomial { .. } => "gbs",
            StateSpec::ReciprocalBinomial { .. } => "rbs",
            StateSpec::NegativeBinomial { .. } => "nbs",
            StateSpec::Geometric { .. } => "geometric",
            StateSpec::PhotonAddedCoherent { .. } => "pacs",
            StateSpec::Hypergeometric { .. } => "hs",
        }
    }

    /// Parameter names in serialization order.
    pub fn param_names(&self) -> &'static [&'static str] {
        match self {
            StateSpec::Binomial { .. } => &["p", "M"],
            StateSpec::GeneralizedBinomial { .. } => &["N", "alpha", "beta"],
            StateSpec::ReciprocalBinomial { .. } => &["N", "theta"],
            StateSpec::NegativeBinomial { .. } => &["eta", "M"],
            StateSpec::Geometric { .. } => &["eta"],
            StateSpec::PhotonAddedCoherent { .. } => &["alpha", "m"],
            StateSpec::Hypergeometric { .. } => &["L", "M", "eta"],
        }
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        use StateSpec::*;
        let v = match (self, name) {
            (Binomial { p, .. }, "p") => *p,
            (Binomial { max_photons, .. }, "M") => f64::from(*max_photons),
            (GeneralizedBinomial { max_photons, .. }, "N") => f64::from(*max_photons),
            (GeneralizedBinomial { alpha, .. }, "alpha") => *alpha,
            (GeneralizedBinomial { beta, .. }, "beta") => *beta,
            (ReciprocalBinomial { max_photons, .. }, "N") => f64::from(*max_photons),
            (ReciprocalBinomial { theta, .. }, "theta") => *theta,
            (NegativeBinomial { eta, .. }, "eta") => *eta,
            (NegativeBinomial { min_photons, .. }, "M") => f64::from(*min_photons),
            (Geometric { eta }, "eta") => *eta,
            (PhotonAddedCoherent { alpha, .. }, "alpha") => *alpha,
            (PhotonAddedCoherent { added_photons, .. }, "m") => f64::from(*added_photons),
            (Hypergeometric { size, .. }, "L") => *size,
            (Hypergeometric { max_photons, .. }, "M") => f64::from(*max_photons),
            (Hypergeometric { eta, .. }, "eta") => *eta,
            _ => return None,
        };
        Some(v)
    }

    /// Returns a copy with one parameter replaced. Integer parameters are
    /// rounded to the nearest non-negative integer.
    pub fn with_param(&self, name: &str, value: f64) -> Result<StateSpec> {
        use StateSpec::*;
        let int = || -> Result<u32> {
            let r = value.round();
            if !(0.0..=f64::from(u32::MAX)).contains(&r) {
                return Err(Error::Domain(format!(
                    "{name} must be a non-negative integer, got {value}"
                )));
            }
            Ok(r as u32)
        };
        let mut out = *self;
        match (&mut out, name) {
            (Binomial { p, .. }, "p") => *p = value,
            (Binomial { max_photons, .. }, "M") => *max_photons = int()?,
            (GeneralizedBinomial { max_photons, .. }, "N") => *max_photons = int()?,
            (GeneralizedBinomial { alpha, .. }, "alpha") => *alpha = value,
            (GeneralizedBinomial { beta, .. }, "beta") => *beta = value,
            (ReciprocalBinomial { max_photons, .. }, "N") => *max_photons = int()?,
            (ReciprocalBinomial { theta, .. }, "theta") => *theta = value,
            (NegativeBinomial { eta, .. }, "eta") => *eta = value,
            (NegativeBinomial { min_photons, .. }, "M") => *min_photons = int()?,
            (Geometric { eta }, "eta") => *eta = value,
            (PhotonAddedCoherent { alpha, .. }, "alpha") => *alpha = value,
            (PhotonAddedCoherent { added_photons, .. }, "m") => *added_photons = int()?,
            (Hypergeometric { size, .. }, "L") => *size = value,
            (Hypergeometric { max_photons, .. }, "M") => *max_photons = int()?,
            (Hypergeometric { eta, .. }, "eta") => *eta = value,
            _ => {
                return Err(Error::Config(format!(
                    "state {} has no parameter {name:?}",
                    self.family()
                )))
            }
        }
        Ok(out)
    }

    /// Checks the parameter constraints of the state.
    pub fn validate(&self) -> Result<()> {
        match *self {
            StateSpec::Binomial { p, .. } => check_probability("p", p, true, true),
            StateSpec::GeneralizedBinomial { alpha, beta, .. } => {
                if !(alpha > -1.0 && alpha.is_finite()) || !(beta > -1.0 && beta.is_finite()) {
                    return Err(Error::Domain(format!(
                        "generalized binomial state needs alpha, beta > -1 (got {alpha}, {beta})"
                    )));
                }
                Ok(())
            }
            StateSpec::ReciprocalBinomial { theta, .. } => {
                if theta.is_finite() {
                    Ok(())
                } else {
                    Err(Error::Domain(format!("theta must be finite, got {theta}")))
                }
            }
            StateSpec::NegativeBinomial { eta, .. } | StateSpec::Geometric { eta } => {
                check_probability("eta", eta, false, true)
            }
            StateSpec::PhotonAddedCoherent { alpha, .. } => {
                if alpha >= 0.0 && alpha.is_finite() {
                    Ok(())
                } else {
                    Err(Error::Domain(format!(
                        "alpha must be a finite value >= 0, got {alpha}"
                    )))
                }
            }
            StateSpec::Hypergeometric {
                size,
                max_photons,
                eta,
            } => {
                check_probability("eta", eta, false, false)?;
                let min = hs_min_size(max_photons, eta);
                if !(size > 0.0 && size.is_finite()) || size < min * (1.0 - HS_CONSTRAINT_SLACK) {
                    return Err(Error::Constraint(format!(
                        "hypergeometric state needs L >= max(M/eta, M/(1-eta)) = {min}, got L = {size}"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Builds the photon-number distribution with the given tail tolerance.
    pub fn build(&self, tail_tol: f64) -> Result<Pnd> {
        self.build_for_moments(tail_tol, 0)
    }

    /// Builds the distribution, extending truncated supports until the
    /// omitted contribution to the factorial moment of order `moment_order`
    /// is also below `tail_tol` relative to the accumulated moment.
    pub fn build_for_moments(&self, tail_tol: f64, moment_order: u32) -> Result<Pnd> {
        let cut = Truncation {
            tail_tol,
            moment_order,
        };
        match *self {
            StateSpec::Binomial { p, max_photons } => build_binomial(p, max_photons),
            StateSpec::GeneralizedBinomial {
                max_photons,
                alpha,
                beta,
            } => build_gbs(max_photons, alpha, beta),
            StateSpec::ReciprocalBinomial { max_photons, theta } => build_rbs(max_photons, theta),
            StateSpec::NegativeBinomial { eta, min_photons } => {
                negative_binomial(eta, min_photons, cut, *self)
            }
            StateSpec::Geometric { eta } => negative_binomial(eta, 0, cut, *self),
            StateSpec::PhotonAddedCoherent {
                alpha,
                added_photons,
            } => photon_added(alpha, added_photons, cut),
            StateSpec::Hypergeometric {
                size,
                max_photons,
                eta,
            } => build_hs(size, max_photons, eta),
        }
    }
}

/// Smallest allowed `L` for a hypergeometric state.
pub fn hs_min_size(max_photons: u32, eta: f64) -> f64 {
    let m = f64::from(max_photons);
    (m / eta).max(m / (1.0 - eta))
}

fn check_probability(name: &str, x: f64, allow_zero: bool, allow_one: bool) -> Result<()> {
    let lo_ok = if allow_zero { x >= 0.0 } else { x > 0.0 };
    let hi_ok = if allow_one { x <= 1.0 } else { x < 1.0 };
    if lo_ok && hi_ok {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{name} = {x} is outside its allowed range"
        )))
    }
}

/// Photon-number distribution over `n_min ..= n_min + probs.len() - 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pnd {
    #[serde(flatten)]
    pub source: StateSpec,
    pub n_min: u32,
    pub probs: Vec<f64>,
    pub truncated: bool,
    /// Upper bound on the probability mass beyond the last entry.
    pub tail_bound: f64,
}

impl Pnd {
    pub fn n_max(&self) -> u32 {
        self.n_min + self.probs.len() as u32 - 1
    }

    /// `(n, P(n))` pairs in ascending `n`.
    pub fn iter(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.probs
            .iter()
            .enumerate()
            .map(move |(i, &p)| (self.n_min + i as u32, p))
    }

    /// P(n), zero outside the stored support.
    pub fn prob(&self, n: u32) -> f64 {
        n.checked_sub(self.n_min)
            .and_then(|i| self.probs.get(i as usize))
            .copied()
            .unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        compensated_sum(self.probs.iter().copied())
    }

    pub fn mean(&self) -> f64 {
        compensated_sum(self.iter().map(|(n, p)| f64::from(n) * p))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Pnd> {
        Ok(serde_json::from_str(s)?)
    }

    /// Writes `n,probability` rows with 17 significant digits.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(w);
        out.write_record(["n", "probability"])?;
        for (n, p) in self.iter() {
            out.write_record([n.to_string(), fmt_f64(p)])?;
        }
        out.flush()?;
        Ok(())
    }

    /// Reads a CSV written by [`Pnd::write_csv`], returning `(n_min, probs)`.
    pub fn read_csv<R: Read>(r: R) -> Result<(u32, Vec<f64>)> {
        let mut rdr = csv::Reader::from_reader(r);
        let mut n_min = None;
        let mut probs = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let n: u32 = rec[0]
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad n {:?}", &rec[0])))?;
            let p: f64 = rec[1]
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad probability {:?}", &rec[1])))?;
            let first = *n_min.get_or_insert(n);
            if n != first + i as u32 {
                return Err(Error::Config(format!("non-contiguous photon number {n}")));
            }
            probs.push(p);
        }
        Ok((n_min.unwrap_or(0), probs))
    }
}

/// Exponentiates log-weights and divides by their compensated sum.
fn normalized_from_logs(log_w: &[f64]) -> Vec<f64> {
    let peak = log_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = log_w.iter().map(|&l| (l - peak).exp()).collect();
    let total = compensated_sum(w.iter().copied());
    w.into_iter().map(|x| x / total).collect()
}

fn exact(source: StateSpec, n_min: u32, probs: Vec<f64>) -> Pnd {
    Pnd {
        source,
        n_min,
        probs,
        truncated: false,
        tail_bound: 0.0,
    }
}

fn ln_factorials(n: u32) -> Vec<f64> {
    let mut out = Vec::with_capacity(n as usize + 1);
    out.push(0.0);
    for k in 1..=n as usize {
        if k <= 170 {
            out.push(ln_factorial(k as u64));
        } else {
            out.push(out[k - 1] + (k as f64).ln());
        }
    }
    out
}

/// Binomial distribution C(M,n) p^n (1-p)^(M-n).
pub fn build_binomial(p: f64, max_photons: u32) -> Result<Pnd> {
    let spec = StateSpec::Binomial { p, max_photons };
    spec.validate()?;
    let m = max_photons as usize;
    let mut probs = vec![0.0; m + 1];
    if p == 0.0 {
        probs[0] = 1.0;
    } else if p == 1.0 {
        probs[m] = 1.0;
    } else {
        let lf = ln_factorials(max_photons);
        let (lp, lq) = (p.ln(), (-p).ln_1p());
        let logs: Vec<f64> = (0..=m)
            .map(|n| lf[m] - lf[n] - lf[m - n] + n as f64 * lp + (m - n) as f64 * lq)
            .collect();
        probs = normalized_from_logs(&logs);
    }
    Ok(exact(spec, 0, probs))
}

/// Generalized binomial distribution built from Pochhammer symbols:
/// N!/(α+β+2)_N · (α+1)_n (β+1)_{N-n} / (n!(N-n)!).
pub fn build_gbs(max_photons: u32, alpha: f64, beta: f64) -> Result<Pnd> {
    let spec = StateSpec::GeneralizedBinomial {
        max_photons,
        alpha,
        beta,
    };
    spec.validate()?;
    let n_cap = max_photons as usize;
    let rising = |a: f64| -> Vec<f64> {
        let mut acc = Vec::with_capacity(n_cap + 1);
        acc.push(0.0);
        for j in 0..n_cap {
            acc.push(acc[j] + (a + j as f64).ln());
        }
        acc
    };
    let ra = rising(alpha + 1.0);
    let rb = rising(beta + 1.0);
    let lf = ln_factorials(max_photons);
    let logs: Vec<f64> = (0..=n_cap)
        .map(|n| ra[n] + rb[n_cap - n] - lf[n] - lf[n_cap - n])
        .collect();
    Ok(exact(spec, 0, normalized_from_logs(&logs)))
}

/// Reciprocal binomial distribution, P(k) ∝ 1/C(N,k).
pub fn build_rbs(max_photons: u32, theta: f64) -> Result<Pnd> {
    let spec = StateSpec::ReciprocalBinomial { max_photons, theta };
    spec.validate()?;
    let n = max_photons as usize;
    let lf = ln_factorials(max_photons);
    let logs: Vec<f64> = (0..=n).map(|k| -(lf[n] - lf[k] - lf[n - k])).collect();
    Ok(exact(spec, 0, normalized_from_logs(&logs)))
}

/// Hypergeometric distribution C(Lη,n) C(L(1-η),M-n) / C(L,M) with real `L`.
pub fn build_hs(size: f64, max_photons: u32, eta: f64) -> Result<Pnd> {
    let spec = StateSpec::Hypergeometric {
        size,
        max_photons,
        eta,
    };
    spec.validate()?;
    let m = max_photons as usize;
    let falling = |a: f64| -> Vec<f64> {
        let mut acc = Vec::with_capacity(m + 1);
        acc.push(0.0);
        for j in 0..m {
            // Clamped at the minimal L, where a - j can round just below 1.
            acc.push(acc[j] + (a - j as f64).max(f64::MIN_POSITIVE).ln());
        }
        acc
    };
    let up = falling(size * eta);
    let down = falling(size * (1.0 - eta));
    let lf = ln_factorials(max_photons);
    let logs: Vec<f64> = (0..=m)
        .map(|n| lf[m] - lf[n] - lf[m - n] + up[n] + down[m - n])
        .collect();
    Ok(exact(spec, 0, normalized_from_logs(&logs)))
}

#[derive(Debug, Clone, Copy)]
struct Truncation {
    tail_tol: f64,
    moment_order: u32,
}

impl Truncation {
    fn check(&self) -> Result<()> {
        if self.tail_tol > 0.0 && self.tail_tol.is_finite() {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "tail_tol must be positive, got {}",
                self.tail_tol
            )))
        }
    }
}

/// Walks an infinite support from `n_start`, given ln P(n_start) and a
/// function returning P(n+1)/P(n). The ratio must be eventually decreasing.
fn truncate_walk(
    n_start: u32,
    ln_first: f64,
    ln_ratio: impl Fn(u32) -> f64,
    cut: Truncation,
) -> Result<(Vec<f64>, f64)> {
    let order = cut.moment_order;
    let mut logs = vec![ln_first];
    let mut moment = 0.0;
    let mut n = n_start;
    loop {
        let ln_p = *logs.last().unwrap();
        let p = ln_p.exp();
        let weight = crate::numerics::falling_factorial(f64::from(n), u64::from(order));
        moment += p * weight;
        let r = ln_ratio(n).exp();
        if r == 0.0 {
            return Ok((logs, 0.0));
        }
        if r < 1.0 {
            let mass = p * r / (1.0 - r);
            let moment_ok = if order == 0 {
                true
            } else if n >= order {
                let rho = r * f64::from(n + 1) / f64::from(n + 1 - order);
                rho < 1.0 && p * weight * rho / (1.0 - rho) <= cut.tail_tol * moment
            } else {
                false
            };
            if mass <= cut.tail_tol && moment_ok {
                return Ok((logs, mass));
            }
        }
        if logs.len() >= MAX_SUPPORT {
            return Err(Error::Numerical(format!(
                "truncated support exceeds {MAX_SUPPORT} photon numbers"
            )));
        }
        logs.push(ln_p + ln_ratio(n));
        n += 1;
    }
}

/// Negative binomial distribution C(n,M) η^(M+1) (1-η)^(n-M), n ≥ M.
pub fn build_nbs(eta: f64, min_photons: u32, tail_tol: f64) -> Result<Pnd> {
    let spec = StateSpec::NegativeBinomial { eta, min_photons };
    negative_binomial(
        eta,
        min_photons,
        Truncation {
            tail_tol,
            moment_order: 0,
        },
        spec,
    )
}

/// Geometric distribution η(1-η)^n: the negative binomial state with M = 0.
pub fn build_geometric(eta: f64, tail_tol: f64) -> Result<Pnd> {
    let spec = StateSpec::Geometric { eta };
    negative_binomial(
        eta,
        0,
        Truncation {
            tail_tol,
            moment_order: 0,
        },
        spec,
    )
}

fn negative_binomial(
    eta: f64,
    min_photons: u32,
    cut: Truncation,
    source: StateSpec,
) -> Result<Pnd> {
    source.validate()?;
    cut.check()?;
    if eta == 1.0 {
        return Ok(exact(source, min_photons, vec![1.0]));
    }
    let ln_q = (-eta).ln_1p();
    let m = f64::from(min_photons);
    let ln_first = (m + 1.0) * eta.ln();
    let ratio = |n: u32| {
        let n = f64::from(n);
        (n + 1.0).ln() - (n + 1.0 - m).ln() + ln_q
    };
    let (logs, tail) = truncate_walk(min_photons, ln_first, ratio, cut)?;
    Ok(Pnd {
        source,
        n_min: min_photons,
        probs: logs.into_iter().map(f64::exp).collect(),
        truncated: true,
        tail_bound: tail,
    })
}

/// Photon-added coherent state distribution
/// P(n+m) = e^(-α²) α^(2n) (m+n)! / (n!² m! L_m(-α²)).
pub fn build_pacs(alpha: f64, added_photons: u32, tail_tol: f64) -> Result<Pnd> {
    photon_added(
        alpha,
        added_photons,
        Truncation {
            tail_tol,
            moment_order: 0,
        },
    )
}

fn photon_added(alpha: f64, added_photons: u32, cut: Truncation) -> Result<Pnd> {
    let source = StateSpec::PhotonAddedCoherent {
        alpha,
        added_photons,
    };
    source.validate()?;
    cut.check()?;
    let x = alpha * alpha;
    if x == 0.0 {
        return Ok(exact(source, added_photons, vec![1.0]));
    }
    let norm = laguerre(added_photons, -x);
    if !(norm.is_finite() && norm > 0.0) {
        return Err(Error::Numerical(format!(
            "Laguerre normalization failed at alpha = {alpha}"
        )));
    }
    let ln_first = -x - norm.ln();
    let m = f64::from(added_photons);
    let ln_x = x.ln();
    // n here counts photons beyond the added ones.
    let ratio = |k: u32| {
        let j = f64::from(k - added_photons);
        ln_x + (m + j + 1.0).ln() - 2.0 * (j + 1.0).ln()
    };
    let (logs, tail) = truncate_walk(added_photons, ln_first, ratio, cut)?;
    Ok(Pnd {
        source,
        n_min: added_photons,
        probs: logs.into_iter().map(f64::exp).collect(),
        truncated: true,
        tail_bound: tail,
    })
}

/// Broad parameter grid over all seven families (513 specs), used for
/// normalization and moment-identity checks.
pub fn standard_grid() -> Vec<StateSpec> {
    let mut out = Vec::new();
    let steps = |k: u32| (0..=k).map(move |i| f64::from(i) / f64::from(k));
    for p in steps(20) {
        for max_photons in [0, 1, 2, 5, 10, 25, 50, 100] {
            out.push(StateSpec::Binomial { p, max_photons });
        }
    }
    for max_photons in [1, 3, 6, 10, 20, 40] {
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
    for max_photons in 0..=30 {
        out.push(StateSpec::ReciprocalBinomial {
            max_photons,
            theta: 0.0,
        });
    }
    for eta in [0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0] {
        for min_photons in [0, 1, 3, 10, 30] {
            out.push(StateSpec::NegativeBinomial { eta, min_photons });
        }
    }
    for eta in steps(20).skip(1) {
        out.push(StateSpec::Geometric { eta });
    }
    for alpha in [0.0, 0.25, 0.5, 1.0, 2.0, 3.0, 5.0] {
        for added_photons in [0, 1, 2, 5, 10, 15, 20] {
            out.push(StateSpec::PhotonAddedCoherent {
                alpha,
                added_photons,
            });
        }
    }
    for max_photons in [1, 2, 4, 6, 10, 20] {
        for eta in [0.1, 0.2, 0.5, 0.8, 0.9] {
            let min = hs_min_size(max_photons, eta);
            for factor in [1.0, 2.0, 10.0] {
                out.push(StateSpec::Hypergeometric {
                    size: factor * min,
                    max_photons,
                    eta,
                });
            }
        }
    }
    out
}
