//! Higher-order antibunching criteria evaluated from factorial moments.
//!
//! * `d(l) = ⟨N^(l+1)⟩ − ⟨N⟩^(l+1)`, negative for antibunching of order l;
//! * `A_l = ⟨N^(l+1)⟩ / (⟨N^(l)⟩⟨N⟩) − 1`;
//! * `R(l, m) = ⟨N^(l+1)⟩⟨N^(m−1)⟩ / (⟨N^(l)⟩⟨N^(m)⟩) − 1` with `1 ≤ m ≤ l`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::{factorial_moment, moment_vector, truncation_warning};
use crate::states::Pnd;

/// Relative scale of the default coherence band.
pub const ZERO_TOL_REL: f64 = 1e-10;

/// Relative tolerance under which a hierarchy link counts as an equality.
pub const LINK_EQ_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Antibunched,
    Coherent,
    Bunched,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Classification::Antibunched => "antibunched",
            Classification::Coherent => "coherent",
            Classification::Bunched => "bunched",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub l: u32,
    pub d: f64,
    /// `None` when ⟨N^(l)⟩ or ⟨N⟩ vanishes.
    #[serde(rename = "A")]
    pub a: Option<f64>,
    #[serde(rename = "R")]
    pub r: Option<f64>,
    /// The `(l, m)` pair `R` was evaluated at.
    pub lm: Option<(u32, u32)>,
    pub classification: Classification,
    pub zero_tol: f64,
    pub truncation_warning: bool,
}

/// Three-way classification of a `d(l)` value.
pub fn classify(d_value: f64, zero_tol: f64) -> Classification {
    if d_value < -zero_tol {
        Classification::Antibunched
    } else if d_value > zero_tol {
        Classification::Bunched
    } else {
        Classification::Coherent
    }
}

/// Default coherence band, `1e-10 · max(1, ⟨N⟩^(l+1))`, since `d(l)` scales
/// like the (l+1)-th power of the mean.
pub fn default_zero_tol(mean: f64, l: u32) -> f64 {
    ZERO_TOL_REL * mean.powi(l as i32 + 1).max(1.0)
}

/// d(l) from normal-ordered factorial moments.
pub fn d_criterion(pnd: &Pnd, l: u32) -> f64 {
    let mean = factorial_moment(pnd, 1);
    factorial_moment(pnd, l + 1) - mean.powi(l as i32 + 1)
}

fn ratio_minus_one(num: f64, den: f64, what: &str) -> Result<f64> {
    if den == 0.0 {
        return Err(Error::UndefinedCriterion(format!(
            "{what}: zero denominator"
        )));
    }
    Ok(num / den - 1.0)
}

/// A_l; undefined when ⟨N^(l)⟩ or ⟨N⟩ is zero.
pub fn ba_an_a(pnd: &Pnd, l: u32) -> Result<f64> {
    lee_r(pnd, l, 1)
}

/// R(l, m) with `1 ≤ m ≤ l`. `R(l, 1)` is `A_l`.
pub fn lee_r(pnd: &Pnd, l: u32, m: u32) -> Result<f64> {
    if l < 1 || m < 1 || m > l {
        return Err(Error::Constraint(format!(
            "R(l, m) needs 1 <= m <= l, got l = {l}, m = {m}"
        )));
    }
    let num = factorial_moment(pnd, l + 1) * factorial_moment(pnd, m - 1);
    let den = factorial_moment(pnd, l) * factorial_moment(pnd, m);
    ratio_minus_one(num, den, &format!("R({l}, {m})"))
}

/// Evaluates `d`, `A` and optionally `R(l, m)` and classifies `d`.
///
/// `zero_tol = None` selects [`default_zero_tol`].
pub fn evaluate(
    pnd: &Pnd,
    l: u32,
    r_m: Option<u32>,
    zero_tol: Option<f64>,
) -> Result<CriterionResult> {
    if l < 1 {
        return Err(Error::Constraint("criterion order l must be >= 1".into()));
    }
    let mv = moment_vector(pnd, l + 1);
    let mean = mv.normal[1];
    let d = mv.normal[l as usize + 1] - mean.powi(l as i32 + 1);
    let a = ba_an_a(pnd, l).ok();
    let (r, lm) = match r_m {
        Some(m) => (Some(lee_r(pnd, l, m)?), Some((l, m))),
        None => (None, None),
    };
    let zero_tol = zero_tol.unwrap_or_else(|| default_zero_tol(mean, l));
    Ok(CriterionResult {
        l,
        d,
        a,
        r,
        lm,
        classification: classify(d, zero_tol),
        zero_tol,
        truncation_warning: truncation_warning(pnd, l + 1, mv.normal[l as usize + 1]),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HierarchyLink {
    pub k: u32,
    /// ⟨N^(k+1)⟩ ⟨N⟩^(l−k)
    pub lhs: f64,
    /// ⟨N^(k)⟩ ⟨N⟩^(l−k+1)
    pub rhs: f64,
    /// Strict `lhs < rhs` outside the equality band.
    pub holds: bool,
    /// `|lhs − rhs|` within the equality band.
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HierarchyReport {
    pub l: u32,
    /// Links for `k = l, l−1, ..., 1`.
    pub links: Vec<HierarchyLink>,
    pub full_chain: bool,
}

/// Evaluates each link of the chain
/// `⟨N^(l+1)⟩ < ⟨N^(l)⟩⟨N⟩ < ⟨N^(l−1)⟩⟨N⟩² < ... < ⟨N⟩^(l+1)`.
pub fn hierarchy_check(pnd: &Pnd, l: u32) -> HierarchyReport {
    let mv = moment_vector(pnd, l.max(1) + 1);
    let mean = mv.normal[1];
    let links: Vec<HierarchyLink> = (1..=l)
        .rev()
        .map(|k| {
            let lhs = mv.normal[k as usize + 1] * mean.powi((l - k) as i32);
            let rhs = mv.normal[k as usize] * mean.powi((l - k + 1) as i32);
            let band = LINK_EQ_TOL * lhs.abs().max(rhs.abs());
            let equal = (lhs - rhs).abs() <= band;
            HierarchyLink {
                k,
                lhs,
                rhs,
                holds: !equal && lhs < rhs,
                equal,
            }
        })
        .collect();
    let full_chain = !links.is_empty() && links.iter().all(|x| x.holds);
    HierarchyReport {
        l,
        links,
        full_chain,
    }
}
