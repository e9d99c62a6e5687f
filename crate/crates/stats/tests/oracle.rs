use cir_stats::special::{f_upper_p, t_two_sided_p};
use cir_stats::{fit_ols, pearson_cc, Dataset, Direction};
use serde::Deserialize;

#[derive(Deserialize)]
struct Fixture {
    datasets: Vec<Case>,
    t_grid: Vec<(f64, f64, f64)>,
    f_grid: Vec<(f64, f64, f64, f64)>,
}

#[derive(Deserialize)]
struct Case {
    name: String,
    x: Vec<f64>,
    y: Vec<f64>,
    pearson_cc: f64,
    fits: Vec<Fit>,
}

#[derive(Deserialize)]
struct Fit {
    degree: usize,
    coefficients: Vec<f64>,
    std_errors: Vec<f64>,
    t_statistics: Vec<f64>,
    coeff_p: Vec<f64>,
    f_statistic: f64,
    model_p: f64,
    r2: f64,
    adj_r2: f64,
    outliers: usize,
}

fn fixture() -> Fixture {
    serde_json::from_str(include_str!("fixtures/oracle.json")).unwrap()
}

fn close(got: f64, want: f64, tol: f64) -> bool {
    (got - want).abs() <= tol * want.abs().max(1.0)
}

#[test]
fn fits_match_high_precision_normal_equations() {
    for case in fixture().datasets {
        let data = Dataset::new(case.x.clone(), case.y.clone(), Direction::IxTy).unwrap();
        for want in &case.fits {
            let got = fit_ols(&data, want.degree).unwrap();
            let ctx = format!("{} degree {}", case.name, want.degree);
            for k in 0..=want.degree {
                assert!(close(got.coefficients[k], want.coefficients[k], 1e-9), "{ctx} beta{k}");
                assert!(close(got.std_errors[k], want.std_errors[k], 1e-8), "{ctx} se{k}");
                assert!(close(got.t_statistics[k], want.t_statistics[k], 1e-8), "{ctx} t{k}");
                assert!((got.coeff_p_values[k] - want.coeff_p[k]).abs() <= 1e-6, "{ctx} p{k}");
            }
            assert!(close(got.f_statistic, want.f_statistic, 1e-8), "{ctx} F");
            assert!((got.model_p_value - want.model_p).abs() <= 1e-6, "{ctx} model p");
            assert!((got.r_squared - want.r2).abs() <= 1e-10, "{ctx} r2");
            assert!((got.adj_r_squared - want.adj_r2).abs() <= 1e-10, "{ctx} adj r2");
            assert_eq!(got.outlier_count, want.outliers, "{ctx} outliers");
        }
    }
}

#[test]
fn pearson_matches_direct_formula() {
    for case in fixture().datasets {
        let cc = pearson_cc(&case.x, &case.y).unwrap();
        assert!((cc - case.pearson_cc).abs() <= 1e-12, "{}", case.name);
    }
}

#[test]
fn tail_probabilities_match_incomplete_beta() {
    let f = fixture();
    for (t, dof, want) in f.t_grid {
        let got = t_two_sided_p(t, dof);
        assert!((got - want).abs() <= 1e-10 * want.max(1e-300).max(1e-6), "t={t} dof={dof}: {got} vs {want}");
    }
    for (x, d1, d2, want) in f.f_grid {
        let got = f_upper_p(x, d1, d2);
        assert!((got - want).abs() <= 1e-10 * want.max(1e-6), "F={x} ({d1},{d2}): {got} vs {want}");
    }
}
