use approx::assert_relative_eq;
use gkcs_core::coherent::normalization_derivative;
use gkcs_core::geometry::{fubini_metric, metric_components};
use gkcs_core::statistics::mean_n;
use gkcs_core::ModelParams;

fn params(nu: f64, s: f64) -> ModelParams {
    ModelParams::new(nu, 0.0, s, 1.0).unwrap()
}

#[test]
fn value_and_slope_at_origin() {
    for &nu in &[0.0, 1.0, 2.5] {
        for &s in &[0.5, 1.0, 2.0] {
            let p = params(nu, s);
            let a = 2.0 * nu + 3.0;
            let w0 = fubini_metric(&p, 0.0).unwrap();
            assert!((w0 - 1.0 / (s * a)).abs() <= 1e-9);
            let x = 1e-4;
            let deficit = 1.0 - fubini_metric(&p, x).unwrap() / w0;
            let want = 2.0 * x / (s * a * (a + 1.0));
            assert!(((deficit - want) / want).abs() <= 0.01, "{deficit} vs {want}");
        }
    }
}

#[test]
fn metric_is_derivative_of_mean_number() {
    let p = params(0.5, 1.0);
    let h = 1e-5;
    for &x in &[0.1, 1.0, 5.0, 20.0] {
        let fd = (mean_n(&p, x + h).unwrap() - mean_n(&p, x - h).unwrap()) / (2.0 * h);
        assert!((fd - fubini_metric(&p, x).unwrap()).abs() <= 1e-6, "x = {x}");
    }
}

#[test]
fn metric_is_positive_on_the_scan_range() {
    for &nu in &[0.0, 1.0, 3.0] {
        let p = params(nu, 1.0);
        for i in 0..=500 {
            let x = 0.1 * i as f64;
            assert!(fubini_metric(&p, x).unwrap() > 0.0, "nu = {nu}, x = {x}");
        }
    }
}

#[test]
fn components_from_independent_sums() {
    // || d|z> ||^2 = sum n^2 x^{n-1}/rho_n / N and |<z|d|z>|^2 = x (sum n x^{n-1}/rho_n)^2 / N^2
    let p = params(1.2, 0.8);
    for &x in &[0.3, 2.0, 9.0] {
        let mut t = 1.0;
        let (mut a, mut b) = (0.0, 0.0);
        for n in 1..200 {
            t *= x / gkcs_core::spectrum::excitation(&p, n);
            let nf = n as f64;
            a += nf * nf * t / x;
            b += nf * t / x;
        }
        let nn = normalization_derivative(&p, x, 0).unwrap();
        let c = metric_components(&p, x).unwrap();
        assert_relative_eq!(c.tangent_norm, a / nn, max_relative = 1e-12);
        assert_relative_eq!(c.projection, x * b * b / (nn * nn), max_relative = 1e-12);
        assert!((c.tangent_norm - c.projection - fubini_metric(&p, x).unwrap()).abs() <= 1e-10);
    }
}
