//! Best and alternate regression model selection under significance,
//! top-term and outlier screens.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Result, StatsError};
use crate::regress::{classify_significance, RegressionModel, Significance};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SamConfig {
    pub alpha: f64,
    pub omega_fraction: f64,
    /// Round the outlier allowance up (default) or down.
    pub omega_ceil: bool,
}

impl Default for SamConfig {
    fn default() -> Self {
        Self { alpha: 0.05, omega_fraction: 0.10, omega_ceil: true }
    }
}

impl SamConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(StatsError::InvalidArgument(format!("alpha {} outside (0, 1)", self.alpha)));
        }
        if !(self.omega_fraction > 0.0 && self.omega_fraction <= 1.0) {
            return Err(StatsError::InvalidArgument(format!("omega fraction {} outside (0, 1]", self.omega_fraction)));
        }
        Ok(())
    }

    /// Largest tolerated outlier count for `n_obs` observations.
    pub fn omega(&self, n_obs: usize) -> usize {
        let raw = self.omega_fraction * n_obs as f64;
        // Guard against 0.1 * 30 = 3.0000000000000004 and friends.
        let snapped = if (raw - raw.round()).abs() < 1e-9 { raw.round() } else { raw };
        if self.omega_ceil {
            snapped.ceil() as usize
        } else {
            snapped.floor() as usize
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectReason {
    /// Model p-value above α.
    Significance,
    /// Highest-order coefficient p-value above α on a polynomial model.
    HigherOrderTerm,
    /// More outliers than Ω.
    Outliers,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rejection {
    pub model: RegressionModel,
    pub reason: RejectReason,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamVerdict {
    pub brm: Option<RegressionModel>,
    pub arm: Option<RegressionModel>,
    pub rejected: Vec<Rejection>,
    pub survivor_count: usize,
    pub omega: usize,
}

/// First screen `model` fails, if any.
pub fn screen(model: &RegressionModel, alpha: f64, omega: usize) -> Option<RejectReason> {
    if model.model_p_value.is_nan() || model.model_p_value > alpha {
        Some(RejectReason::Significance)
    } else if model.degree >= 2 && (model.top_term_p_value().is_nan() || model.top_term_p_value() > alpha) {
        Some(RejectReason::HigherOrderTerm)
    } else if model.outlier_count > omega {
        Some(RejectReason::Outliers)
    } else {
        None
    }
}

fn cmp_slices(a: &[f64], b: &[f64]) -> Ordering {
    a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or_else(|| a.len().cmp(&b.len()))
}

/// Ranking: best first. Bitwise-equal models compare equal.
fn rank(a: &RegressionModel, b: &RegressionModel) -> Ordering {
    b.adj_r_squared
        .total_cmp(&a.adj_r_squared)
        .then(a.degree.cmp(&b.degree))
        .then(a.outlier_count.cmp(&b.outlier_count))
        .then(a.model_p_value.total_cmp(&b.model_p_value))
        .then_with(|| b.r_squared.total_cmp(&a.r_squared))
        .then_with(|| cmp_slices(&a.coeff_p_values, &b.coeff_p_values))
        .then_with(|| cmp_slices(&a.coefficients, &b.coefficients))
        .then_with(|| {
            let (x, y) = (a.pearson_cc.unwrap_or(f64::NAN), b.pearson_cc.unwrap_or(f64::NAN));
            x.total_cmp(&y)
        })
}

pub fn sam_select(models: &[RegressionModel], cfg: &SamConfig) -> Result<SamVerdict> {
    cfg.validate()?;
    let first = models.first().ok_or_else(|| StatsError::InvalidArgument("no candidate models".into()))?;
    if models.iter().any(|m| m.n_obs != first.n_obs) {
        return Err(StatsError::InvalidArgument("models fitted on different observation counts".into()));
    }
    let omega = cfg.omega(first.n_obs);
    let mut survivors = Vec::new();
    let mut rejected = Vec::new();
    for m in models {
        match screen(m, cfg.alpha, omega) {
            Some(reason) => rejected.push(Rejection { model: m.clone(), reason }),
            None => survivors.push(m),
        }
    }
    survivors.sort_by(|a, b| rank(a, b));
    Ok(SamVerdict {
        brm: survivors.first().map(|m| (*m).clone()),
        arm: survivors.get(1).map(|m| (*m).clone()),
        rejected,
        survivor_count: survivors.len(),
        omega,
    })
}

pub fn relationship_label(verdict: &SamVerdict) -> Significance {
    verdict
        .brm
        .as_ref()
        .and_then(|m| classify_significance(m.model_p_value).ok())
        .unwrap_or(Significance::NotSignificant)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(degree: usize, p: f64, top: f64, out: usize, adj: f64) -> RegressionModel {
        let mut coeff_p = vec![0.5; degree];
        coeff_p.push(top);
        RegressionModel {
            degree,
            coefficients: vec![1.0; degree + 1],
            coeff_p_values: coeff_p,
            model_p_value: p,
            r_squared: adj.max(0.0),
            adj_r_squared: adj,
            outlier_count: out,
            pearson_cc: None,
            n_obs: 100,
            std_errors: vec![],
            t_statistics: vec![],
            f_statistic: 0.0,
        }
    }

    #[test]
    fn hand_traced_selection() {
        let a = model(1, 0.2, 0.2, 0, 0.3);
        let b = model(1, 0.01, 0.01, 3, 0.80);
        let c = model(2, 0.002, 0.03, 2, 0.90);
        let v = sam_select(&[a.clone(), b.clone(), c.clone()], &SamConfig::default()).unwrap();
        assert_eq!(v.omega, 10);
        assert_eq!(v.brm.as_ref(), Some(&c));
        assert_eq!(v.arm.as_ref(), Some(&b));
        assert_eq!(v.rejected, vec![Rejection { model: a, reason: RejectReason::Significance }]);
        assert_eq!(v.survivor_count, 2);
    }

    #[test]
    fn total_rejection() {
        let v = sam_select(&[model(1, 0.2, 0.2, 0, 0.1), model(2, 0.07, 0.01, 0, 0.2)], &SamConfig::default()).unwrap();
        assert!(v.brm.is_none() && v.arm.is_none());
        assert_eq!(v.survivor_count, 0);
        assert_eq!(relationship_label(&v), Significance::NotSignificant);
    }

    #[test]
    fn top_term_screen() {
        let quad = model(2, 0.001, 0.30, 0, 0.95);
        let lin = model(1, 0.01, 0.01, 5, 0.70);
        let v = sam_select(&[quad, lin.clone()], &SamConfig::default()).unwrap();
        assert_eq!(v.brm, Some(lin));
        assert!(v.arm.is_none());
        assert_eq!(v.rejected[0].reason, RejectReason::HigherOrderTerm);
    }

    #[test]
    fn outlier_screen_is_strict() {
        let at = model(1, 0.01, 0.01, 10, 0.5);
        let over = model(1, 0.01, 0.01, 11, 0.6);
        let v = sam_select(&[at.clone(), over], &SamConfig::default()).unwrap();
        assert_eq!(v.brm, Some(at));
        assert_eq!(v.rejected[0].reason, RejectReason::Outliers);
    }

    #[test]
    fn ties_prefer_simpler_models() {
        let lin = model(1, 0.01, 0.01, 1, 0.8);
        let quad = model(2, 0.001, 0.001, 0, 0.8);
        let v = sam_select(&[quad.clone(), lin.clone()], &SamConfig::default()).unwrap();
        assert_eq!(v.brm, Some(lin));
        assert_eq!(v.arm, Some(quad));
    }

    #[test]
    fn labels() {
        let v = sam_select(&[model(1, 0.0003, 0.0003, 0, 0.5)], &SamConfig::default()).unwrap();
        assert_eq!(relationship_label(&v), Significance::Highly);
        let v = sam_select(&[model(1, 0.02, 0.02, 0, 0.5)], &SamConfig::default()).unwrap();
        assert_eq!(relationship_label(&v), Significance::Significant);
    }

    #[test]
    fn omega_rounding() {
        let c = SamConfig::default();
        assert_eq!(c.omega(100), 10);
        assert_eq!(c.omega(30), 3);
        assert_eq!(c.omega(25), 3);
        assert_eq!(SamConfig { omega_ceil: false, ..c }.omega(25), 2);
    }

    #[test]
    fn bad_inputs() {
        assert!(sam_select(&[], &SamConfig::default()).is_err());
        let mut other = model(1, 0.01, 0.01, 0, 0.5);
        other.n_obs = 50;
        assert!(sam_select(&[model(1, 0.01, 0.01, 0, 0.5), other], &SamConfig::default()).is_err());
        let bad = SamConfig { alpha: 1.0, ..SamConfig::default() };
        assert!(sam_select(&[model(1, 0.01, 0.01, 0, 0.5)], &bad).is_err());
        assert!(SamConfig { omega_fraction: 0.0, ..SamConfig::default() }.validate().is_err());
    }
}
