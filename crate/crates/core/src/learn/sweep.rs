use serde::Serialize;

use super::{LearnError, Result};

/// Accuracy sweep over the enrichment grid against the unenriched baseline.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepStats {
    pub gamma0: f64,
    /// (p, Γ₊(p)) in ascending p.
    pub gamma_plus: Vec<(f64, f64)>,
    /// Largest Γ₊ among improving cases; `None` when nothing improves.
    pub max_gamma_plus: Option<f64>,
    /// Mean of Γ₊ − Γ₀ over improving cases.
    pub mean_abs_improvement: Option<f64>,
    /// Mean of Γ₊ / Γ₀ over improving cases; `None` also when Γ₀ = 0.
    pub mean_rel_improvement: Option<f64>,
    pub n_plus: usize,
}

impl SweepStats {
    /// Stats for a run whose grid holds only the baseline.
    pub fn baseline_only(gamma0: f64) -> Self {
        Self {
            gamma0,
            gamma_plus: Vec::new(),
            max_gamma_plus: None,
            mean_abs_improvement: None,
            mean_rel_improvement: None,
            n_plus: 0,
        }
    }
}

fn check_accuracy(v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(LearnError::InvalidAccuracy(v))
    }
}

pub fn sweep_stats(gamma0: f64, gamma_by_p: &[(f64, f64)]) -> Result<SweepStats> {
    if gamma_by_p.is_empty() {
        return Err(LearnError::EmptyGrid);
    }
    check_accuracy(gamma0)?;
    let mut gamma_plus = gamma_by_p.to_vec();
    gamma_plus.sort_by(|a, b| a.0.total_cmp(&b.0));
    for w in gamma_plus.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(LearnError::DuplicateP(w[0].0));
        }
    }
    for &(p, g) in &gamma_plus {
        check_accuracy(g)?;
        if p == 0.0 && g != gamma0 {
            return Err(LearnError::BaselineMismatch { gamma0, at_zero: g });
        }
    }
    let improving: Vec<f64> = gamma_plus.iter().map(|&(_, g)| g).filter(|&g| g > gamma0).collect();
    let n_plus = improving.len();
    let mean = |f: &dyn Fn(f64) -> f64| {
        (n_plus > 0).then(|| improving.iter().map(|&g| f(g)).sum::<f64>() / n_plus as f64)
    };
    Ok(SweepStats {
        gamma0,
        max_gamma_plus: improving.iter().copied().reduce(f64::max),
        mean_abs_improvement: mean(&|g| g - gamma0),
        mean_rel_improvement: if gamma0 > 0.0 { mean(&|g| g / gamma0) } else { None },
        n_plus,
        gamma_plus,
    })
}

/// Relative gain (best − baseline) / baseline in percent; `None` for a zero baseline.
pub fn gain_percent(best: f64, baseline: f64) -> Option<f64> {
    (baseline != 0.0).then(|| (best - baseline) / baseline * 100.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let s = sweep_stats(0.20, &[(1.0, 0.25), (2.0, 0.15)]).unwrap();
        assert_eq!(s.n_plus, 1);
        assert!((s.mean_rel_improvement.unwrap() - 1.25).abs() < 1e-12);
        assert!((s.mean_abs_improvement.unwrap() - 0.05).abs() < 1e-12);

        let flat = sweep_stats(0.5, &[(1.0, 0.5), (2.0, 0.5)]).unwrap();
        assert_eq!(flat.n_plus, 0);
        assert_eq!(flat.max_gamma_plus, None);
        assert_eq!(flat.mean_rel_improvement, None);

        assert_eq!(sweep_stats(0.5, &[]), Err(LearnError::EmptyGrid));
        assert_eq!(sweep_stats(1.5, &[(1.0, 0.5)]), Err(LearnError::InvalidAccuracy(1.5)));
        assert_eq!(sweep_stats(0.5, &[(1.0, 0.5), (1.0, 0.6)]), Err(LearnError::DuplicateP(1.0)));
        assert!(matches!(
            sweep_stats(0.5, &[(0.0, 0.6)]),
            Err(LearnError::BaselineMismatch { .. })
        ));
    }

    #[test]
    fn baseline_in_grid_never_counts() {
        let s = sweep_stats(0.3, &[(5.0, 0.4), (0.0, 0.3)]).unwrap();
        assert_eq!(s.gamma_plus, vec![(0.0, 0.3), (5.0, 0.4)]);
        assert_eq!(s.n_plus, 1);
    }

    #[test]
    fn gain() {
        assert_eq!(gain_percent(0.5, 0.0), None);
        assert!((gain_percent(0.6, 0.5).unwrap() - 20.0).abs() < 1e-12);
    }
}
