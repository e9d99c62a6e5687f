//! Tail probabilities of the t and F distributions through the regularized
//! incomplete beta function.

use statrs::function::beta::beta_reg;

/// Two-sided p-value of a t statistic with `dof` degrees of freedom.
pub fn t_two_sided_p(t: f64, dof: f64) -> f64 {
    if t.is_nan() || dof.is_nan() || dof <= 0.0 {
        return f64::NAN;
    }
    if t.is_infinite() {
        return 0.0;
    }
    let x = dof / (dof + t * t);
    if x >= 1.0 {
        return 1.0;
    }
    beta_reg(dof / 2.0, 0.5, x).clamp(0.0, 1.0)
}

/// Upper-tail probability P(F > f) for an F distribution with `d1`, `d2`
/// degrees of freedom.
pub fn f_upper_p(f: f64, d1: f64, d2: f64) -> f64 {
    if f.is_nan() || !(d1 > 0.0 && d2 > 0.0) {
        return f64::NAN;
    }
    if f <= 0.0 {
        return 1.0;
    }
    if f.is_infinite() {
        return 0.0;
    }
    let x = d2 / (d2 + d1 * f);
    beta_reg(d2 / 2.0, d1 / 2.0, x).clamp(0.0, 1.0)
}
