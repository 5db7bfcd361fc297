//! Normal-ordered (factorial) and antinormal-ordered photon-number moments.
//!
//! Moments are taken over the photon-number distribution only; amplitude
//! phases never enter.

use serde::{Deserialize, Serialize};

use crate::numerics::CompensatedSum;
use crate::states::Pnd;

/// Relative size of the truncated tail, weighted by `n_max^l`, above which a
/// moment is flagged as possibly biased.
pub const TRUNCATION_WARN_REL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentVector {
    pub max_order: u32,
    /// ⟨N(N-1)...(N-l+1)⟩ for l = 0..=max_order.
    pub normal: Vec<f64>,
    /// ⟨(N+1)(N+2)...(N+l)⟩ = ⟨a^l a†^l⟩ for l = 0..=max_order.
    pub antinormal: Vec<f64>,
    pub truncation_warning: bool,
}

/// ⟨N^(l)⟩ = Σ P(n) n(n-1)...(n-l+1).
pub fn factorial_moment(pnd: &Pnd, l: u32) -> f64 {
    let mut acc = CompensatedSum::new();
    for (n, p) in pnd.iter() {
        if n < l || p == 0.0 {
            continue;
        }
        let w = (0..l).fold(1.0, |w, j| w * f64::from(n - j));
        acc.add(p * w);
    }
    acc.value()
}

/// ⟨a^l a†^l⟩ = Σ P(n) (n+1)(n+2)...(n+l).
pub fn antinormal_moment(pnd: &Pnd, l: u32) -> f64 {
    let mut acc = CompensatedSum::new();
    for (n, p) in pnd.iter() {
        if p == 0.0 {
            continue;
        }
        let w = (1..=l).fold(1.0, |w, j| w * f64::from(n + j));
        acc.add(p * w);
    }
    acc.value()
}

/// True when a truncated distribution's omitted mass could bias a moment of
/// order `l` with value `value` beyond the warning threshold.
pub fn truncation_warning(pnd: &Pnd, l: u32, value: f64) -> bool {
    pnd.truncated
        && pnd.tail_bound * f64::from(pnd.n_max()).powi(l as i32)
            > TRUNCATION_WARN_REL * value.abs()
}

/// Both moment families for orders `0..=max_order` in a single pass.
pub fn moment_vector(pnd: &Pnd, max_order: u32) -> MomentVector {
    assert!(max_order >= 1, "moment_vector needs max_order >= 1");
    let k = max_order as usize;
    let mut normal = vec![CompensatedSum::new(); k + 1];
    let mut anti = vec![CompensatedSum::new(); k + 1];
    for (n, p) in pnd.iter() {
        if p == 0.0 {
            continue;
        }
        let nf = f64::from(n);
        let mut falling = p;
        let mut rising = p;
        normal[0].add(p);
        anti[0].add(p);
        for l in 1..=k {
            falling *= nf - (l - 1) as f64;
            rising *= nf + l as f64;
            normal[l].add(falling);
            anti[l].add(rising);
        }
    }
    let normal: Vec<f64> = normal.iter().map(CompensatedSum::value).collect();
    let antinormal: Vec<f64> = anti.iter().map(CompensatedSum::value).collect();
    let truncation_warning = normal
        .iter()
        .enumerate()
        .chain(antinormal.iter().enumerate())
        .any(|(l, &v)| truncation_warning(pnd, l as u32, v));
    MomentVector {
        max_order,
        normal,
        antinormal,
        truncation_warning,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{build_binomial, build_gbs, build_geometric, StateSpec};

    fn number_state(n: u32) -> Pnd {
        Pnd {
            source: StateSpec::Binomial {
                p: 1.0,
                max_photons: n,
            },
            n_min: n,
            probs: vec![1.0],
            truncated: false,
            tail_bound: 0.0,
        }
    }

    #[test]
    fn factorial_moment_examples() {
        let bs = build_binomial(0.5, 10).unwrap();
        assert!((factorial_moment(&bs, 0) - 1.0).abs() < 1e-15);
        assert!((factorial_moment(&bs, 2) - 22.5).abs() < 1e-12);
        assert_eq!(factorial_moment(&number_state(3), 2), 6.0);
        assert_eq!(factorial_moment(&number_state(3), 4), 0.0);
    }

    #[test]
    fn antinormal_moment_examples() {
        let vac = number_state(0);
        assert_eq!(antinormal_moment(&vac, 4), 24.0);
        let bs = build_binomial(0.3, 7).unwrap();
        assert!((antinormal_moment(&bs, 1) - (bs.mean() + 1.0)).abs() < 1e-13);
        let g = build_geometric(0.5, 1e-15).unwrap();
        assert!((antinormal_moment(&g, 2) - 8.0).abs() < 1e-10);
    }

    #[test]
    fn moment_vector_examples() {
        let mv = moment_vector(&build_binomial(0.5, 2).unwrap(), 2);
        assert_eq!(mv.normal, vec![1.0, 1.0, 0.5]);
        // 0.25·2 + 0.5·6 + 0.25·12, consistent with a²a†² = N(N-1) + 4N + 2.
        assert_eq!(mv.antinormal, vec![1.0, 2.0, 6.5]);
        assert!(!mv.truncation_warning);

        let mv = moment_vector(&number_state(0), 3);
        assert_eq!(mv.normal, vec![1.0, 0.0, 0.0, 0.0]);

        let mv = moment_vector(&build_gbs(2, 0.0, 0.0).unwrap(), 2);
        assert!((mv.normal[1] - 1.0).abs() < 1e-15);
        assert!((mv.normal[2] - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn single_pass_matches_individual_moments() {
        let p = build_gbs(15, 1.5, 0.25).unwrap();
        let mv = moment_vector(&p, 6);
        for l in 0..=6 {
            assert!(
                (mv.normal[l as usize] - factorial_moment(&p, l)).abs()
                    <= 1e-12 * mv.normal[l as usize]
            );
            assert!(
                (mv.antinormal[l as usize] - antinormal_moment(&p, l)).abs()
                    <= 1e-12 * mv.antinormal[l as usize]
            );
        }
    }

    #[test]
    fn coarse_truncation_is_flagged() {
        let g = build_geometric(0.1, 1e-3).unwrap();
        let m4 = factorial_moment(&g, 4);
        assert!(truncation_warning(&g, 4, m4));
        assert!(moment_vector(&g, 4).truncation_warning);
    }
}
