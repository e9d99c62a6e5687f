//! Ordinary least squares for polynomial models and the statistics model
//! selection consumes.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Result, StatsError};
use crate::special::{f_upper_p, t_two_sided_p};

/// Internally standardized residuals above this magnitude are outliers.
pub const DEFAULT_OUTLIER_THRESHOLD: f64 = 2.0;

/// Residual sums below this fraction of the total sum of squares are exact fits.
const PERFECT_FIT_RATIO: f64 = 1e-20;

/// Which quantity plays the predictor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    /// Interference on x, throughput on y.
    IxTy,
    /// Throughput on x, interference on y.
    TxIy,
}

impl Direction {
    pub fn name(self) -> &'static str {
        match self {
            Direction::IxTy => "IxTy",
            Direction::TxIy => "TxIy",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    x: Vec<f64>,
    y: Vec<f64>,
    direction: Direction,
}

impl Dataset {
    pub fn new(x: Vec<f64>, y: Vec<f64>, direction: Direction) -> Result<Self> {
        if x.len() != y.len() {
            return Err(StatsError::InvalidArgument(format!("{} x values, {} y values", x.len(), y.len())));
        }
        if x.len() < 3 {
            return Err(StatsError::InvalidArgument(format!("{} points; need at least 3", x.len())));
        }
        if x.iter().chain(&y).any(|v| !v.is_finite()) {
            return Err(StatsError::InvalidArgument("non-finite observation".into()));
        }
        Ok(Self { x, y, direction })
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionModel {
    pub degree: usize,
    /// β_0..β_degree in the original x basis.
    pub coefficients: Vec<f64>,
    #[serde(rename = "coeff_p")]
    pub coeff_p_values: Vec<f64>,
    #[serde(rename = "model_p")]
    pub model_p_value: f64,
    #[serde(rename = "r2")]
    pub r_squared: f64,
    #[serde(rename = "adj_r2")]
    pub adj_r_squared: f64,
    #[serde(rename = "outliers")]
    pub outlier_count: usize,
    #[serde(rename = "cc")]
    pub pearson_cc: Option<f64>,
    #[serde(rename = "n")]
    pub n_obs: usize,
    #[serde(skip)]
    pub std_errors: Vec<f64>,
    #[serde(skip)]
    pub t_statistics: Vec<f64>,
    #[serde(skip)]
    pub f_statistic: f64,
}

impl RegressionModel {
    /// p-value of the highest-order coefficient.
    pub fn top_term_p_value(&self) -> f64 {
        *self.coeff_p_values.last().expect("at least one coefficient")
    }

    pub fn predict(&self, x: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, b| acc * x + b)
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Fits y = Σ β_k x^k for k = 0..=degree with the default outlier rule.
pub fn fit_ols(data: &Dataset, degree: usize) -> Result<RegressionModel> {
    fit_ols_with(data, degree, DEFAULT_OUTLIER_THRESHOLD)
}

/// As [`fit_ols`], counting outliers whose standardized residual exceeds
/// `outlier_threshold`.
///
/// The design is built on the centered, scaled predictor and solved by QR;
/// coefficients and their covariance are mapped back to the raw powers of x.
pub fn fit_ols_with(data: &Dataset, degree: usize, outlier_threshold: f64) -> Result<RegressionModel> {
    if degree == 0 {
        return Err(StatsError::InvalidArgument("degree must be at least 1".into()));
    }
    let n = data.len();
    let p = degree + 1;
    if n < degree + 2 {
        return Err(StatsError::InvalidArgument(format!("{n} points cannot fit degree {degree}")));
    }
    let (x, y) = (data.x(), data.y());
    let mean_x = x.iter().sum::<f64>() / n as f64;
    let spread = (x.iter().map(|v| (v - mean_x).powi(2)).sum::<f64>() / n as f64).sqrt();
    if spread.is_nan() || spread <= 0.0 || x.iter().all(|&v| v == x[0]) {
        return Err(StatsError::DegenerateFit("constant predictor".into()));
    }
    let design = DMatrix::from_fn(n, p, |i, k| ((x[i] - mean_x) / spread).powi(k as i32));
    let yv = DVector::from_column_slice(y);
    let qr = design.clone().qr();
    let (q, r) = (qr.q(), qr.r());
    let diag_max = (0..p).map(|k| r[(k, k)].abs()).fold(0.0, f64::max);
    if (0..p).any(|k| r[(k, k)].abs() <= diag_max * 1e-12) {
        return Err(StatsError::DegenerateFit("singular design".into()));
    }
    let qty = q.transpose() * &yv;
    let gamma = r.solve_upper_triangular(&qty).ok_or_else(|| StatsError::DegenerateFit("singular design".into()))?;

    let fitted = &design * &gamma;
    let mut residuals: Vec<f64> = (0..n).map(|i| y[i] - fitted[i]).collect();
    let mean_y = y.iter().sum::<f64>() / n as f64;
    let sst: f64 = y.iter().map(|v| (v - mean_y).powi(2)).sum();
    let mut sse: f64 = residuals.iter().map(|e| e * e).sum();
    if sse <= sst * PERFECT_FIT_RATIO || sst == 0.0 && sse <= f64::EPSILON * mean_y.abs().max(1.0) {
        sse = 0.0;
        residuals.iter_mut().for_each(|e| *e = 0.0);
    }
    let dof = (n - p) as f64;
    let s2 = sse / dof;

    // β = T γ with T[j][k] = C(k, j) (−mean)^(k−j) / spread^k.
    let t = DMatrix::from_fn(p, p, |j, k| {
        if j > k {
            0.0
        } else {
            binomial(k, j) * (-mean_x).powi((k - j) as i32) / spread.powi(k as i32)
        }
    });
    let beta = &t * &gamma;
    let r_inv = r.clone().try_inverse().ok_or_else(|| StatsError::DegenerateFit("singular design".into()))?;
    let cov_gamma = &r_inv * r_inv.transpose() * s2;
    let cov_beta = &t * cov_gamma * t.transpose();

    let coefficients: Vec<f64> = beta.iter().copied().collect();
    let std_errors: Vec<f64> = (0..p).map(|k| cov_beta[(k, k)].max(0.0).sqrt()).collect();
    // Top-term statistic straight from γ.
    let t_statistics: Vec<f64> = (0..p)
        .map(|k| {
            let (b, se) = if k == degree {
                (gamma[k], (r_inv.row(k).norm_squared() * s2).sqrt())
            } else {
                (coefficients[k], std_errors[k])
            };
            if se > 0.0 {
                b / se
            } else if b == 0.0 {
                0.0
            } else {
                b.signum() * f64::INFINITY
            }
        })
        .collect();
    let coeff_p_values = t_statistics.iter().map(|&t| t_two_sided_p(t, dof)).collect();

    let (r_squared, f_statistic, model_p_value) = if sst == 0.0 {
        (0.0, 0.0, 1.0)
    } else {
        let r2 = (1.0 - sse / sst).clamp(0.0, 1.0);
        let ssr = (sst - sse).max(0.0);
        let f = if sse == 0.0 { f64::INFINITY } else { (ssr / degree as f64) / s2 };
        (r2, f, f_upper_p(f, degree as f64, dof))
    };
    let adj_r_squared = 1.0 - (1.0 - r_squared) * (n - 1) as f64 / dof;

    let leverages: Vec<f64> = (0..n).map(|i| q.row(i).norm_squared()).collect();
    let outlier_count = count_outliers_with(&residuals, &leverages, p, outlier_threshold)?;
    let pearson = if degree == 1 { pearson_cc(x, y).ok() } else { None };

    Ok(RegressionModel {
        degree,
        coefficients,
        coeff_p_values,
        model_p_value,
        r_squared,
        adj_r_squared,
        outlier_count,
        pearson_cc: pearson,
        n_obs: n,
        std_errors,
        t_statistics,
        f_statistic,
    })
}

/// Internally standardized residuals e_i / (s √(1 − h_ii)) for a fit with
/// `params` coefficients. Points with h_ii = 1 map to infinity, zero
/// residuals on a zero-variance fit to zero.
pub fn standardized_residuals(residuals: &[f64], leverages: &[f64], params: usize) -> Result<Vec<f64>> {
    if residuals.len() != leverages.len() {
        return Err(StatsError::InvalidArgument("residuals and leverages differ in length".into()));
    }
    if residuals.len() <= params {
        return Err(StatsError::InvalidArgument("no residual degrees of freedom".into()));
    }
    let s2 = residuals.iter().map(|e| e * e).sum::<f64>() / (residuals.len() - params) as f64;
    let s = s2.sqrt();
    Ok(residuals
        .iter()
        .zip(leverages)
        .map(|(&e, &h)| {
            let room = 1.0 - h;
            if room <= 1e-12 {
                f64::INFINITY
            } else if e == 0.0 {
                0.0
            } else {
                e / (s * room.sqrt())
            }
        })
        .collect())
}

/// Points whose standardized residual magnitude is strictly above 2.
pub fn count_outliers(residuals: &[f64], leverages: &[f64], params: usize) -> Result<usize> {
    count_outliers_with(residuals, leverages, params, DEFAULT_OUTLIER_THRESHOLD)
}

pub fn count_outliers_with(residuals: &[f64], leverages: &[f64], params: usize, threshold: f64) -> Result<usize> {
    Ok(standardized_residuals(residuals, leverages, params)?.iter().filter(|z| z.abs() > threshold).count())
}

pub fn pearson_cc(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(StatsError::InvalidArgument("need two equal-length series of at least 2".into()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(StatsError::UndefinedCc);
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Significance {
    /// p < 0.001
    #[serde(rename = "HSS")]
    Highly,
    /// 0.001 ≤ p < 0.05
    #[serde(rename = "SS")]
    Significant,
    /// p ≥ 0.05
    #[serde(rename = "NSS")]
    NotSignificant,
}

impl Significance {
    pub fn code(self) -> &'static str {
        match self {
            Significance::Highly => "HSS",
            Significance::Significant => "SS",
            Significance::NotSignificant => "NSS",
        }
    }
}

impl fmt::Display for Significance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Significance {
    type Err = StatsError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "HSS" => Ok(Significance::Highly),
            "SS" => Ok(Significance::Significant),
            "NSS" => Ok(Significance::NotSignificant),
            _ => Err(StatsError::InvalidArgument(format!("unknown significance band {s}"))),
        }
    }
}

pub fn classify_significance(p: f64) -> Result<Significance> {
    if !(0.0..=1.0).contains(&p) {
        return Err(StatsError::InvalidArgument(format!("p-value {p} outside [0, 1]")));
    }
    Ok(if p < 0.001 {
        Significance::Highly
    } else if p < 0.05 {
        Significance::Significant
    } else {
        Significance::NotSignificant
    })
}
