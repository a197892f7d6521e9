//! Number statistics and quadrature variances of the coherent states.
//!
//! Everything is expressed through `N(x)` and its derivatives, summed term by
//! term from the series, and through the kernels
//!
//! `S^{(s,r)}(x) = (1/N) sum_m e^{i gamma (E(m+s) - E(m+r))} sqrt((m+r)!(m+s)!/(rho_{m+s} rho_{m+r})) x^m/m!`,
//!
//! which give `<(a^†)^s a^r> = conj(z)^s z^r S^{(s,r)}(|z|^2)` for the
//! rescaled boson operators `a|n> = sqrt(n)|n-1>`.

use crate::coherent::{normalization_derivative, CoherentState};
use crate::error::{invalid, Error, Result};
use crate::quantize::rescaled_boson;
use crate::spectrum::{excitation, ln_rho, ModelParams};
use crate::verify::VerificationReport;
use crate::C64;

const SERIES_CUTOFF: f64 = 1e-17;
const MAX_TERMS: usize = 1_000_000;
/// Largest `s`, `r` accepted by [`s_kernel`].
pub const MAX_KERNEL_INDEX: usize = 6;

/// `N(x)` and its first three derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NDerivatives {
    pub x: f64,
    pub n0: f64,
    pub n1: f64,
    pub n2: f64,
    pub n3: f64,
}

pub fn n_derivatives(p: &ModelParams, x: f64) -> Result<NDerivatives> {
    Ok(NDerivatives {
        x,
        n0: normalization_derivative(p, x, 0)?,
        n1: normalization_derivative(p, x, 1)?,
        n2: normalization_derivative(p, x, 2)?,
        n3: normalization_derivative(p, x, 3)?,
    })
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `S^{(s,r)}(x)` by direct summation.
pub fn s_kernel(p: &ModelParams, s: usize, r: usize, x: f64, gamma: f64) -> Result<C64> {
    if s > MAX_KERNEL_INDEX || r > MAX_KERNEL_INDEX {
        return Err(invalid("s, r", format!("kernel indices must be <= {MAX_KERNEL_INDEX}")));
    }
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Domain {
            function: "s_kernel",
            detail: format!("x = {x}"),
        });
    }
    let nn = normalization_derivative(p, x, 0)?;
    let a = 2.0 * p.nu() + 3.0;
    let sc = p.scale_s();
    let phase = |m: usize| C64::from_polar(1.0, gamma * (excitation(p, m + s) - excitation(p, m + r)));
    let mut term = (0.5 * (ln_factorial(r) + ln_factorial(s) - ln_rho(p, s) - ln_rho(p, r))).exp();
    let mut sum = phase(0) * term;
    let mut abs_sum = term;
    for m in 0..MAX_TERMS {
        let mf = m as f64;
        let ratio = x / ((mf + 1.0) * sc * ((a + mf + s as f64) * (a + mf + r as f64)).sqrt());
        term *= ratio;
        sum += phase(m + 1) * term;
        abs_sum += term;
        if ratio < 1.0 && term <= SERIES_CUTOFF * abs_sum {
            return Ok(sum / nn);
        }
        if !term.is_finite() {
            return Err(Error::Overflow("s_kernel"));
        }
    }
    Err(Error::LossOfSignificance {
        what: "s_kernel",
        detail: format!("no convergence after {MAX_TERMS} terms"),
    })
}

/// `<N> = x N'/N`.
pub fn mean_n(p: &ModelParams, x: f64) -> Result<f64> {
    let d = n_derivatives(p, x)?;
    Ok(x * d.n1 / d.n0)
}

/// `<N^2> = x^2 N''/N + x N'/N`.
pub fn second_moment_n(p: &ModelParams, x: f64) -> Result<f64> {
    let d = n_derivatives(p, x)?;
    Ok((x * x * d.n2 + x * d.n1) / d.n0)
}

/// `P(x, n) = x^n / (rho_n N(x))`.
pub fn photon_pdf(p: &ModelParams, x: f64, n: usize) -> Result<f64> {
    let nn = normalization_derivative(p, x, 0)?;
    if x == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    Ok((n as f64 * x.ln() - ln_rho(p, n)).exp() / nn)
}

/// `Q = x (N''/N' - N'/N)`; `Q(0) = 0` by continuity.
pub fn mandel_q(p: &ModelParams, x: f64) -> Result<f64> {
    let d = n_derivatives(p, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok(x * (d.n2 / d.n1 - d.n1 / d.n0))
}

/// `F = Q + 1`.
pub fn fano(p: &ModelParams, x: f64) -> Result<f64> {
    Ok(mandel_q(p, x)? + 1.0)
}

/// `g2 = N'' N / N'^2`, finite at `x = 0`.
pub fn g2(p: &ModelParams, x: f64) -> Result<f64> {
    let d = n_derivatives(p, x)?;
    Ok(d.n2 * d.n0 / (d.n1 * d.n1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NumberStatistics {
    SubPoissonian,
    Poissonian,
    SuperPoissonian,
}

/// Classification by the sign of `Q`.
pub fn classify(q: f64) -> NumberStatistics {
    if q < 0.0 {
        NumberStatistics::SubPoissonian
    } else if q > 0.0 {
        NumberStatistics::SuperPoissonian
    } else {
        NumberStatistics::Poissonian
    }
}

/// Variances of `X = (a^† + a)/sqrt 2` and `P = i(a^† - a)/sqrt 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureVariances {
    pub sigma_x: f64,
    pub sigma_p: f64,
}

/// `sigma_X = Re[conj(z)^2 (S20 - S10^2)] + |z|^2 (S11 - |S10|^2) + 1/2`,
/// `sigma_P` the same with the first term negated.
pub fn quadrature_variances(state: &CoherentState) -> Result<QuadratureVariances> {
    let p = state.params();
    let (z, x, g) = (state.z(), state.x(), state.gamma());
    let s20 = s_kernel(p, 2, 0, x, g)?;
    let s10 = s_kernel(p, 1, 0, x, g)?;
    let s11 = s_kernel(p, 1, 1, x, g)?;
    let zb = z.conj();
    let first = (zb * zb * (s20 - s10 * s10)).re;
    let second = x * (s11.re - s10.norm_sqr());
    Ok(QuadratureVariances {
        sigma_x: first + second + 0.5,
        sigma_p: -first + second + 0.5,
    })
}

/// Variances and `<[X, P]>` from truncated matrices of `a`, `a^†` applied to
/// the state's coefficients; two spare levels make the action exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixVariances {
    pub sigma_x: f64,
    pub sigma_p: f64,
    pub commutator: C64,
}

pub fn quadrature_variances_matrix(state: &CoherentState) -> Result<MatrixVariances> {
    let (a, adag) = rescaled_boson(state.n_max() + 2);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let one = C64::new(r, 0.0);
    let i = C64::new(0.0, r);
    let xm = adag.combine(one, &a, one)?;
    let pm = adag.combine(i, &a, -i)?;
    let c = state.coefficients();
    let variance = |m: &crate::quantize::OperatorMatrix| -> Result<f64> {
        let mc = m.apply(c)?;
        let mean = m.expectation(c)?.re;
        Ok(mc.iter().map(|v| v.norm_sqr()).sum::<f64>() - mean * mean)
    };
    Ok(MatrixVariances {
        sigma_x: variance(&xm)?,
        sigma_p: variance(&pm)?,
        commutator: xm.commutator(&pm)?.expectation(c)?,
    })
}

/// Compares the kernel formulas with the matrix oracle. Disagreement beyond
/// `1e-6` points at a wrong formula and is an error; otherwise the report
/// passes iff the disagreement is within `tol`.
pub fn verify_quadrature_variances(state: &CoherentState, tol: f64) -> Result<VerificationReport> {
    let f = quadrature_variances(state)?;
    let m = quadrature_variances_matrix(state)?;
    let r = (f.sigma_x - m.sigma_x).abs().max((f.sigma_p - m.sigma_p).abs());
    if !(r <= 1e-6) {
        return Err(Error::Verification {
            name: "quadrature variances vs matrix oracle".into(),
            residual: r,
            tolerance: 1e-6,
        });
    }
    Ok(VerificationReport::check(format!("variances vs matrices at z = {}", state.z()), r, tol))
}

/// `Delta_H = sqrt(<H^2> - <H>^2)` with `H |n> = E(n) |n>`.
pub fn energy_spread(state: &CoherentState) -> f64 {
    let p = state.params();
    let (m1, m2) = state
        .coefficients()
        .iter()
        .enumerate()
        .fold((0.0, 0.0), |(a, b), (n, c)| {
            let e = excitation(p, n);
            let w = c.norm_sqr();
            (a + e * w, b + e * e * w)
        });
    (m2 - m1 * m1).max(0.0).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Squeezing {
    /// `sigma_X < Delta_H < sigma_P`
    XSqueezed,
    /// `sigma_P < Delta_H < sigma_X`
    PSqueezed,
    Neither,
}

/// `sigma_X`, `sigma_P`, `Delta_H` and the label they imply. The label is a
/// pure function of the three numbers; no threshold beyond the ordering is
/// applied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezingReport {
    pub sigma_x: f64,
    pub sigma_p: f64,
    pub delta_h: f64,
    pub label: Squeezing,
}

pub fn squeezing_label(sigma_x: f64, sigma_p: f64, delta_h: f64) -> Squeezing {
    if sigma_x < delta_h && delta_h < sigma_p {
        Squeezing::XSqueezed
    } else if sigma_p < delta_h && delta_h < sigma_x {
        Squeezing::PSqueezed
    } else {
        Squeezing::Neither
    }
}

pub fn squeezing(state: &CoherentState) -> Result<SqueezingReport> {
    let v = quadrature_variances(state)?;
    let delta_h = energy_spread(state);
    Ok(SqueezingReport {
        sigma_x: v.sigma_x,
        sigma_p: v.sigma_p,
        delta_h,
        label: squeezing_label(v.sigma_x, v.sigma_p, delta_h),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn kernel_at_origin() {
        let p = ModelParams::unit(0.0, 0.0).unwrap();
        assert_eq!(s_kernel(&p, 0, 0, 0.0, 0.4).unwrap(), C64::new(1.0, 0.0));
        let v = s_kernel(&p, 1, 0, 0.0, 0.0).unwrap();
        assert_relative_eq!(v.re, 1.0 / 3f64.sqrt(), max_relative = 1e-15);
        assert!(s_kernel(&p, 7, 0, 1.0, 0.0).is_err());
    }

    #[test]
    fn labels() {
        assert_eq!(squeezing_label(0.4, 0.6, 0.5), Squeezing::XSqueezed);
        assert_eq!(squeezing_label(0.6, 0.4, 0.5), Squeezing::PSqueezed);
        assert_eq!(squeezing_label(0.5, 0.5, 0.5), Squeezing::Neither);
        assert_eq!(classify(-1e-3), NumberStatistics::SubPoissonian);
        assert_eq!(classify(0.0), NumberStatistics::Poissonian);
    }

    #[test]
    fn statistics_examples() {
        let p = ModelParams::unit(0.0, 0.0).unwrap();
        assert_eq!(mean_n(&p, 0.0).unwrap(), 0.0);
        assert_relative_eq!(mean_n(&p, 1.0).unwrap(), 0.30878937306624, max_relative = 1e-12);
        assert_relative_eq!(photon_pdf(&p, 1.0, 1).unwrap(), (1.0 / 3.0) / 1.377896895397476, max_relative = 1e-13);
        assert_eq!(photon_pdf(&p, 0.0, 2).unwrap(), 0.0);
        assert_eq!(mandel_q(&p, 0.0).unwrap(), 0.0);
        assert_relative_eq!(g2(&p, 0.0).unwrap(), 0.75, max_relative = 1e-15);
    }
}
