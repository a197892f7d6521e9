//! Verification reports and the identity suite behind `gkcs validate`.

use std::fmt;

use crate::coherent::{
    label_distance_sq, make_state, measure_density, moment_with, normalization_n, normalization_n_bessel, overlap,
    printed_normalization_discrepancy, verify_resolution_of_identity, DEFAULT_TAIL_TOL,
};
use crate::error::{invalid, Error, Result};
use crate::geometry::fubini_metric;
use crate::quadrature::{integrate_finite_with, QuadratureOptions, DEFAULT_BUDGET};
use crate::quantize::{op_monomial, op_radial, op_z, op_zbar, verify_quantize_expectations, DEFAULT_NMAX};
use crate::spectrum::{
    apply_ladder, eigenfunction, energy, ground_normalization_prefactor, normalization_k, partner_potential, potential,
    rho, verify_operator_products, Direction, ModelParams, UniformGrid, LADDER_TOL,
};
use crate::statistics::{g2, mandel_q, quadrature_variances, verify_quadrature_variances};
use crate::C64;

/// Outcome of checking one identity numerically.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Informational reports document a known discrepancy and never fail.
    pub informational: bool,
    pub detail: String,
}

impl VerificationReport {
    /// Passes iff `residual <= tolerance` (a NaN residual fails).
    pub fn check(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            residual,
            tolerance,
            passed: residual <= tolerance,
            informational: false,
            detail: String::new(),
        }
    }

    pub fn informational(name: impl Into<String>, residual: f64, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            residual,
            tolerance: f64::INFINITY,
            passed: true,
            informational: true,
            detail: detail.into(),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    pub fn status(&self) -> &'static str {
        match (self.informational, self.passed) {
            (true, _) => "info",
            (false, true) => "pass",
            (false, false) => "FAIL",
        }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}: residual {:.3e}", self.status(), self.name, self.residual)?;
        if !self.informational {
            write!(f, " (tolerance {:.1e})", self.tolerance)?;
        }
        if !self.detail.is_empty() {
            write!(f, " {}", self.detail)?;
        }
        Ok(())
    }
}

/// Relative difference `|a - b| / |b|`, or `|a - b|` when `b = 0`.
pub fn relative_error(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        (a - b).abs()
    } else {
        ((a - b) / b).abs()
    }
}

/// Worst of `values`, NaN-propagating.
fn worst(values: impl IntoIterator<Item = f64>) -> f64 {
    values
        .into_iter()
        .fold(0.0, |acc: f64, v| if v.is_nan() || acc.is_nan() { f64::NAN } else { acc.max(v) })
}

fn label(p: &ModelParams) -> String {
    format!("nu={}, beta={}, s={}, L={}", p.nu(), p.beta(), p.scale_s(), p.box_l())
}

/// Parameter sets and quadrature budget for [`run_suite`].
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    /// Used by the eigenfunction, normalization, ladder and operator-product checks.
    pub spectrum: Vec<ModelParams>,
    /// Used by the moment, coherent-state, statistics and quantization checks.
    pub coherent: Vec<ModelParams>,
    pub budget: usize,
}

impl SuiteConfig {
    /// The fixed acceptance grids: `nu in {0.5, 1, 2.3} x beta in {0, 0.7, 2}`
    /// for the spectrum and four `(nu, s)` pairs for everything else.
    pub fn acceptance() -> Result<Self> {
        let mut spectrum = Vec::new();
        for &nu in &[0.5, 1.0, 2.3] {
            for &beta in &[0.0, 0.7, 2.0] {
                spectrum.push(ModelParams::unit(nu, beta)?);
            }
        }
        let coherent = [(0.0, 1.0), (0.3, 0.5), (1.0, 1.0), (2.5, 2.0)]
            .iter()
            .map(|&(nu, s)| ModelParams::new(nu, 0.0, s, 1.0))
            .collect::<Result<_>>()?;
        Ok(Self {
            spectrum,
            coherent,
            budget: DEFAULT_BUDGET,
        })
    }

    /// Every check at the single model `p`.
    pub fn for_model(p: &ModelParams) -> Self {
        Self {
            spectrum: vec![*p],
            coherent: vec![*p],
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    fn opts(&self, tol: f64) -> QuadratureOptions {
        QuadratureOptions::new(tol).with_budget(self.budget)
    }
}

/// Outcome of one numbered acceptance criterion.
#[derive(Debug, Clone, PartialEq)]
pub struct CriterionOutcome {
    pub id: usize,
    pub title: &'static str,
    pub reports: Vec<VerificationReport>,
    /// Set when the computation itself failed (budget, truncation, domain).
    pub error: Option<Error>,
}

impl CriterionOutcome {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.reports.iter().all(|r| r.passed)
    }

    /// The enforced report with the largest `residual / tolerance`.
    pub fn tightest(&self) -> Option<&VerificationReport> {
        self.reports
            .iter()
            .filter(|r| !r.informational)
            .max_by(|a, b| (a.residual / a.tolerance).total_cmp(&(b.residual / b.tolerance)))
    }
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "criterion {:>2} {status}: {}", self.id, self.title)?;
        if let Some(e) = &self.error {
            return write!(f, " (error: {e})");
        }
        let failed = self.reports.iter().filter(|r| !r.passed).count();
        let enforced = self.reports.iter().filter(|r| !r.informational).count();
        write!(f, " ({}/{enforced} checks", enforced - failed)?;
        if let Some(r) = self.tightest() {
            write!(f, ", worst residual {:.2e} vs {:.0e}", r.residual, r.tolerance)?;
        }
        write!(f, ")")
    }
}

pub const CRITERIA: [(usize, &str); 10] = [
    (1, "eigenfunction orthonormality"),
    (2, "closed-form eigenfunction normalization"),
    (3, "ladder operators and shape invariance"),
    (4, "operator products"),
    (5, "moment problem and resolution of identity"),
    (6, "coherent-state axioms"),
    (7, "small-x expansions"),
    (8, "quadrature variances"),
    (9, "Toeplitz quantization"),
    (10, "normalization series vs Bessel form"),
];

pub fn run_criterion(id: usize, cfg: &SuiteConfig) -> Result<CriterionOutcome> {
    let title = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .map(|c| c.1)
        .ok_or_else(|| invalid("criterion", format!("no criterion {id}")))?;
    let result = match id {
        1 => orthonormality(cfg),
        2 => normalization_constants(cfg),
        3 => ladders(cfg),
        4 => operator_products(cfg),
        5 => moments(cfg),
        6 => coherent_axioms(cfg),
        7 => small_x(cfg),
        8 => variances(cfg),
        9 => quantization(cfg),
        _ => series_forms(cfg),
    };
    let (reports, error) = match result {
        Ok(r) => (r, None),
        Err(e) => (Vec::new(), Some(e)),
    };
    Ok(CriterionOutcome {
        id,
        title,
        reports,
        error,
    })
}

pub fn run_suite(cfg: &SuiteConfig) -> Vec<CriterionOutcome> {
    CRITERIA
        .iter()
        .map(|&(id, _)| run_criterion(id, cfg).expect("listed criterion"))
        .collect()
}

const LEVELS: usize = 8;
const LADDER_GRID: usize = 2000;

fn orthonormality(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let opts = cfg.opts(1e-12);
    cfg.spectrum
        .iter()
        .map(|p| {
            let phis = (0..=LEVELS).map(|n| eigenfunction(p, n)).collect::<Result<Vec<_>>>()?;
            let mut residuals = Vec::new();
            for (n, a) in phis.iter().enumerate() {
                for (m, b) in phis.iter().enumerate().skip(n) {
                    let ip = integrate_finite_with(
                        |x| a.evaluate_complex(x).conj() * b.evaluate_complex(x),
                        0.0,
                        p.box_l(),
                        &opts,
                    )?
                    .value;
                    let delta = if n == m { 1.0 } else { 0.0 };
                    residuals.push((ip - delta).norm());
                }
            }
            Ok(VerificationReport::check(
                format!("<phi_n|phi_m> = delta_nm, n, m <= {LEVELS} ({})", label(p)),
                worst(residuals),
                1e-8,
            ))
        })
        .collect()
}

fn normalization_constants(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let opts = cfg.opts(1e-13);
    let mut reports = Vec::new();
    for p in &cfg.spectrum {
        let mut residuals = Vec::new();
        for n in 0..=LEVELS {
            let phi = eigenfunction(p, n)?;
            let q = integrate_finite_with(|x| phi.profile(x).norm_sqr(), 0.0, p.box_l(), &opts)?.value;
            let k = normalization_k(p, n)?;
            residuals.push(relative_error(1.0 / (k * k), q));
        }
        reports.push(VerificationReport::check(
            format!("1/K_n^2 = quadrature norm, n <= {LEVELS} ({})", label(p)),
            worst(residuals),
            1e-8,
        ));
        let printed = ground_normalization_prefactor(p)?;
        reports.push(VerificationReport::informational(
            format!("printed K_0 prefactor vs K_0 ({})", label(p)),
            relative_error(printed, normalization_k(p, 0)?),
            "the prefactor omits |Gamma(nu+2+i beta/(nu+1))|",
        ));
    }
    Ok(reports)
}

fn ladders(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let mut reports = Vec::new();
    for p in &cfg.spectrum {
        let grid = UniformGrid::interior(p.box_l(), LADDER_GRID)?;
        let phi0 = eigenfunction(p, 0)?;
        let f = grid.sample(|x| phi0.evaluate(x));
        let a = apply_ladder(p, Direction::Lower, &f)?;
        reports.push(VerificationReport::check(
            format!("A phi_0 = 0 ({})", label(p)),
            a.sup_norm() / f.sup_norm(),
            LADDER_TOL,
        ));

        let partner_family = p.shifted(1);
        let mut down = Vec::new();
        let mut up = Vec::new();
        for n in 0..4 {
            let upper = eigenfunction(p, n + 1)?;
            let partner = eigenfunction(&partner_family, n)?;
            let coeff = (p.scale_s() * (energy(p, n + 1) - energy(p, 0))).sqrt();
            let lowered = apply_ladder(p, Direction::Lower, &grid.sample(|x| upper.evaluate(x)))?;
            let want = lowered.resample(|x| coeff * partner.evaluate(x));
            down.push(lowered.sup_distance(&want)? / want.sup_norm());
            let raised = apply_ladder(p, Direction::Raise, &grid.sample(|x| partner.evaluate(x)))?;
            let want = raised.resample(|x| coeff * upper.evaluate(x));
            up.push(raised.sup_distance(&want)? / want.sup_norm());
        }
        reports.push(VerificationReport::check(
            format!("A phi_(n+1) = sqrt(s(E_(n+1)-E_0)) phi_n(nu+1), n < 4 ({})", label(p)),
            worst(down),
            LADDER_TOL,
        ));
        reports.push(VerificationReport::check(
            format!("A^dag phi_n(nu+1) = sqrt(s(E_(n+1)-E_0)) phi_(n+1), n < 4 ({})", label(p)),
            worst(up),
            LADDER_TOL,
        ));

        let mut shape = Vec::new();
        for i in 1..=LADDER_GRID {
            let x = p.box_l() * i as f64 / (LADDER_GRID + 1) as f64;
            let v = potential(&partner_family, x)?;
            shape.push((partner_potential(p, x)? - v).abs() / v.abs().max(1.0));
        }
        reports.push(VerificationReport::check(
            format!("V_+(nu) = V(nu+1) + E_0(nu+1) ({})", label(p)),
            worst(shape),
            1e-8,
        ));
    }
    Ok(reports)
}

fn operator_products(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let mut reports = Vec::new();
    for p in &cfg.spectrum {
        let grid = UniformGrid::interior(p.box_l(), LADDER_GRID)?;
        for n in 0..=3 {
            for r in verify_operator_products(p, n, n + 1, &grid)? {
                let name = format!("{} ({})", r.name, label(p));
                reports.push(VerificationReport { name, ..r });
            }
        }
    }
    Ok(reports)
}

fn moments(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let opts = cfg.opts(1e-11);
    let mut reports = Vec::new();
    for p in &cfg.coherent {
        let mut residuals = Vec::new();
        for n in 0..=12 {
            residuals.push(relative_error(moment_with(p, n, &opts)?.value, rho(p, n)));
        }
        reports.push(VerificationReport::check(
            format!("∫ x^n w dx = rho_n, n <= 12 ({})", label(p)),
            worst(residuals),
            1e-8,
        ));
        for &(n, m) in &[(0, 0), (3, 3), (7, 7), (2, 5)] {
            let r = verify_resolution_of_identity(p, n, m, 1e-8)?;
            let name = format!("{} ({})", r.name, label(p));
            reports.push(VerificationReport { name, ..r });
        }
    }
    Ok(reports)
}

const PROBE_LABELS: [(f64, f64, f64); 4] = [(0.5, 0.2, 0.0), (1.3, -0.8, 0.4), (-2.0, 1.5, 1.1), (3.0, 1.0, 2.7)];

fn coherent_axioms(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let mut reports = Vec::new();
    for p in &cfg.coherent {
        let mut norms = Vec::new();
        let mut actions = Vec::new();
        let mut stability = Vec::new();
        for &(re, im, g) in &PROBE_LABELS {
            let z = C64::new(re, im);
            let st = make_state(p, z, g, DEFAULT_TAIL_TOL)?;
            norms.push((overlap(&st, &st)? - 1.0).norm());
            actions.push(relative_error(st.action(), st.x()));
            let t = 0.9;
            let evolved = st.evolve(t);
            let direct = make_state(p, z, g + t, DEFAULT_TAIL_TOL)?;
            let coefficients = (0..=st.n_max()).map(|n| (evolved.coefficient(n) - direct.coefficient(n)).norm());
            let structural = if evolved.gamma() == g + t && evolved.n_max() == direct.n_max() && st.evolve(0.0) == st {
                0.0
            } else {
                1.0
            };
            stability.push(worst(coefficients).max(structural));
        }
        reports.push(VerificationReport::check(format!("<z|z> = 1 ({})", label(p)), worst(norms), 1e-12));
        reports.push(VerificationReport::check(format!("<H> = |z|^2 ({})", label(p)), worst(actions), 1e-9));
        reports.push(
            VerificationReport::check(format!("e^(-iHt)|z, g> = |z, g+t> ({})", label(p)), worst(stability), 1e-13)
                .with_detail("coefficient identity; residual is phase round-off"),
        );

        let z = C64::new(1.3, -0.8);
        let a = make_state(p, z, 0.0, DEFAULT_TAIL_TOL)?;
        let mut last = f64::INFINITY;
        let mut monotone = true;
        for k in 0..6 {
            let dz = 10f64.powi(-k) * z / z.norm();
            let d = label_distance_sq(&a, &make_state(p, z + dz, 0.0, DEFAULT_TAIL_TOL)?)?;
            monotone &= d >= 0.0 && d < last;
            last = d;
        }
        reports.push(
            VerificationReport::check(
                format!("|| |z> - |z'> ||^2 decreases as z' -> z ({})", label(p)),
                if monotone { 0.0 } else { 1.0 },
                0.0,
            )
            .with_detail(format!("distance at |z'-z| = 1e-5: {last:.2e}")),
        );
    }
    Ok(reports)
}

fn small_x(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let mut reports = Vec::new();
    let x = 1e-3;
    for p in &cfg.coherent {
        let s = p.scale_s();
        let a = 2.0 * p.nu() + 3.0;
        let q = mandel_q(p, x)? / x;
        reports.push(VerificationReport::check(
            format!("Q(x)/x -> -1/(s(2nu+3)(2nu+4)) ({})", label(p)),
            relative_error(q, -1.0 / (s * a * (a + 1.0))),
            0.01,
        ));
        let lead = a / (a + 1.0);
        let g = g2(p, x)?;
        reports.push(VerificationReport::check(
            format!("g2(x) -> (2nu+3)/(2nu+4) ({})", label(p)),
            relative_error(g, lead * (1.0 + 2.0 * x / (s * a * (a + 1.0) * (a + 2.0)))),
            0.01,
        ));
        reports.push(VerificationReport::check(
            format!("g2 first-order coefficient 2/(s(2nu+3)(2nu+4)(2nu+5)) ({})", label(p)),
            relative_error((g / lead - 1.0) / x, 2.0 / (s * a * (a + 1.0) * (a + 2.0))),
            0.01,
        ));
        let w0 = 1.0 / (s * a);
        reports.push(VerificationReport::check(
            format!("W(0) = 1/(s(2nu+3)) ({})", label(p)),
            relative_error(fubini_metric(p, 0.0)?, w0),
            1e-9,
        ));
        let deficit = (1.0 - fubini_metric(p, x)? / w0) / x;
        reports.push(VerificationReport::check(
            format!("W(x)/W(0) - 1 -> -2x/(s(2nu+3)(2nu+4)) ({})", label(p)),
            relative_error(deficit, 2.0 / (s * a * (a + 1.0))),
            0.01,
        ));
    }
    Ok(reports)
}

/// `k`-th point of a deterministic low-discrepancy sequence in the square
/// `[-3, 3]^2` with a phase in `[0, pi)`.
fn probe_point(k: usize) -> (C64, f64) {
    const G1: f64 = 0.754_877_666_246_692_8;
    const G2: f64 = 0.569_840_290_998_053_2;
    let kf = k as f64 + 1.0;
    let u = (0.5 + G1 * kf).fract();
    let v = (0.5 + G2 * kf).fract();
    let w = (0.5 + (G1 + G2) * kf).fract();
    (C64::new(6.0 * u - 3.0, 6.0 * v - 3.0), std::f64::consts::PI * w)
}

fn variances(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let mut reports = Vec::new();
    for p in &cfg.coherent {
        for &(re, im, g) in &PROBE_LABELS {
            let st = make_state(p, C64::new(re, im), g, 1e-14)?;
            let r = verify_quadrature_variances(&st, 1e-8)?;
            let name = format!("{} at z = {re}{im:+}i, gamma = {g} ({})", r.name, label(p));
            reports.push(VerificationReport { name, ..r });
        }
        let mut residuals = Vec::new();
        for k in 0..20 {
            let (z, g) = probe_point(k);
            let a = quadrature_variances(&make_state(p, z, g, 1e-12)?)?;
            let b = quadrature_variances(&make_state(p, C64::new(0.0, 1.0) * z, g, 1e-12)?)?;
            residuals.push((a.sigma_p - b.sigma_x).abs() / a.sigma_p.abs().max(1.0));
        }
        reports.push(VerificationReport::check(
            format!("sigma_P(z) = sigma_X(iz), 20 points ({})", label(p)),
            worst(residuals),
            1e-12,
        ));
    }
    Ok(reports)
}

fn quantization(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let opts = cfg.opts(1e-11);
    let mut reports = Vec::new();
    for p in &cfg.coherent {
        let n_max = 30;
        let one = op_radial(p, |_| 1.0, n_max, &opts)?;
        let mut residuals = Vec::new();
        for i in 0..=n_max {
            for j in 0..=n_max {
                let delta = if i == j { 1.0 } else { 0.0 };
                residuals.push((one.get(i, j) - delta).norm());
            }
        }
        reports.push(VerificationReport::check(
            format!("op_radial(1) = identity, n_max = {n_max} ({})", label(p)),
            worst(residuals),
            1e-8,
        ));

        let gamma = 0.7;
        let n_max = DEFAULT_NMAX;
        let az = op_z(p, gamma, n_max);
        let mono = op_monomial(p, 1, 0, gamma, n_max)?;
        let mut residuals = Vec::new();
        for i in 0..=n_max {
            for j in 0..=n_max {
                let want = az.get(i, j);
                residuals.push((mono.get(i, j) - want).norm() / want.norm().max(1.0));
            }
        }
        reports.push(VerificationReport::check(
            format!("op_monomial(1, 0) = op_z, n_max = {n_max} ({})", label(p)),
            worst(residuals),
            1e-10,
        ));

        let c = az.commutator(&op_zbar(p, gamma, n_max))?;
        let residuals = (0..=n_max - 2).map(|n| {
            relative_error(c.get(n, n).re, p.scale_s() * (2.0 * n as f64 + 2.0 * p.nu() + 3.0))
                .max(c.get(n, n).im.abs())
        });
        reports.push(VerificationReport::check(
            format!("[A_z, A_zbar]_nn = s(2n+2nu+3), n <= {} ({})", n_max - 2, label(p)),
            worst(residuals),
            1e-9,
        ));

        for &(re, im, g) in &PROBE_LABELS[..2] {
            for r in verify_quantize_expectations(p, C64::new(re, im), g, 1e-9)? {
                let name = format!("{} at z = {re}{im:+}i ({})", r.name, label(p));
                reports.push(VerificationReport { name, ..r });
            }
        }
    }
    Ok(reports)
}

fn series_forms(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let xs: Vec<f64> = (0..=250).map(|i| 0.1 * i as f64).collect();
    let mut reports = Vec::new();
    for p in &cfg.coherent {
        let residuals = xs
            .iter()
            .map(|&x| Ok(relative_error(normalization_n_bessel(p, x)?, normalization_n(p, x)?)))
            .collect::<Result<Vec<_>>>()?;
        reports.push(VerificationReport::check(
            format!("N(x) series = Gamma(2nu+3) y^-(nu+1) I(2 sqrt y), x in [0, 25] ({})", label(p)),
            worst(residuals),
            1e-12,
        ));
        let r = printed_normalization_discrepancy(p, &xs)?;
        let name = format!("{} ({})", r.name, label(p));
        reports.push(VerificationReport { name, ..r });

        let m = measure_density(p)?;
        let mut deviation = Vec::new();
        for &x in &xs[1..] {
            deviation.push(relative_error(m.printed_radial_density(x)?, m.radial_density(x)?));
        }
        reports.push(VerificationReport::informational(
            format!("printed measure density vs (1/pi) w N ({})", label(p)),
            worst(deviation),
            "the printed form uses I(2x/s) and x^-(nu+1) in place of I(2 sqrt(x/s))",
        ));
    }
    Ok(reports)
}
