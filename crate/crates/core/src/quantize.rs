//! Coherent-state (anti-Wick, Berezin-Klauder-Toeplitz) quantization on the
//! truncated Fock basis `{|0>, ..., |n_max>}`:
//!
//! `f -> A_f = ∫ f(z, conj z) |z, gamma><z, gamma| dmu`,
//! `(A_f)_{n n'} = e^{-i gamma (E(n) - E(n'))} / sqrt(rho_n rho_n') ∫ f z^n conj(z)^{n'} dmu / N`.
//!
//! The phase sign follows from the state coefficients `c_n ∝ e^{-i gamma E(n)}`
//! and is the one for which `A_z |z, gamma> = z |z, gamma>`. After the angular
//! integration every radial integral is a moment of the weight `w`, so symbols
//! built from `z`, `conj z` and `arg z` have closed forms
//! `∫ x^mu w = s^mu Gamma(2nu+3+mu) Gamma(1+mu) / Gamma(2nu+3)`; only generic
//! radial profiles need quadrature.

use ndarray::Array2;

use crate::coherent::{ln_mellin_moment, make_state, normalized_moment_with};
use crate::error::{invalid, Result};
use crate::quadrature::{fourier_coefficient, QuadratureOptions};
use crate::spectrum::{excitation, ln_rho, ModelParams};
use crate::statistics::n_derivatives;
use crate::verify::VerificationReport;
use crate::C64;

pub const DEFAULT_NMAX: usize = 64;

/// Which symbol produced a matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SymbolKind {
    /// `f(|z|^2)`
    Radial,
    /// `F(arg z)`
    Angular,
    /// `z^alpha conj(z)^sigma`
    Monomial { alpha: usize, sigma: usize },
    /// `A_z` (lowering) or `A_conj(z)` (raising)
    Ladder { raising: bool },
    /// The rescaled boson operators `a`, `a^†` with `a|n> = sqrt(n)|n-1>`.
    Boson { creation: bool },
    /// Products, sums and commutators of the above.
    Derived,
}

/// A dense complex matrix on `{|0>, ..., |n_max>}`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    entries: Array2<C64>,
    symbol: SymbolKind,
    gamma: f64,
}

impl OperatorMatrix {
    pub fn from_entries(entries: Array2<C64>, symbol: SymbolKind, gamma: f64) -> Result<Self> {
        if entries.nrows() != entries.ncols() || entries.nrows() == 0 {
            return Err(invalid("entries", "operator matrix must be square and nonempty"));
        }
        Ok(Self { entries, symbol, gamma })
    }

    fn zeros(n_max: usize, symbol: SymbolKind, gamma: f64) -> Self {
        Self {
            entries: Array2::zeros((n_max + 1, n_max + 1)),
            symbol,
            gamma,
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn n_max(&self) -> usize {
        self.dim() - 1
    }

    pub fn entries(&self) -> &Array2<C64> {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[[row, col]]
    }

    pub fn symbol(&self) -> SymbolKind {
        self.symbol
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn adjoint(&self) -> Self {
        Self {
            entries: self.entries.t().mapv(|c| c.conj()),
            symbol: SymbolKind::Derived,
            gamma: self.gamma,
        }
    }

    /// Matrix product `self * other`.
    pub fn product(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self {
            entries: self.entries.dot(&other.entries),
            symbol: SymbolKind::Derived,
            gamma: self.gamma,
        })
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self {
            entries: self.entries.dot(&other.entries) - other.entries.dot(&self.entries),
            symbol: SymbolKind::Derived,
            gamma: self.gamma,
        })
    }

    /// `a self + b other`.
    pub fn combine(&self, a: C64, other: &Self, b: C64) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self {
            entries: self.entries.mapv(|v| v * a) + other.entries.mapv(|v| v * b),
            symbol: SymbolKind::Derived,
            gamma: self.gamma,
        })
    }

    /// `A v`; `v` is zero-padded or must fit in the basis.
    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() > self.dim() {
            return Err(invalid(
                "vector",
                format!("length {} exceeds matrix dimension {}", v.len(), self.dim()),
            ));
        }
        Ok((0..self.dim())
            .map(|i| v.iter().enumerate().map(|(j, c)| self.entries[[i, j]] * c).sum())
            .collect())
    }

    /// `<v| A |v>`.
    pub fn expectation(&self, v: &[C64]) -> Result<C64> {
        let av = self.apply(v)?;
        Ok(v.iter().zip(&av).map(|(a, b)| a.conj() * b).sum())
    }

    /// `max |A - A^†|` over all entries.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.entries[[i, j]] - self.entries[[j, i]].conj()).norm());
            }
        }
        worst
    }

    /// `max |A - B|` over all entries.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.same_shape(other)?;
        Ok(self
            .entries
            .iter()
            .zip(other.entries.iter())
            .fold(0.0, |m, (a, b)| m.max((a - b).norm())))
    }

    /// `D A D^†` with `D = diag(e^{-i t E(n)})`: the same symbol at `gamma + t`.
    pub fn shift_gamma(&self, p: &ModelParams, t: f64) -> Self {
        let phases: Vec<C64> = (0..self.dim()).map(|n| C64::from_polar(1.0, -t * excitation(p, n))).collect();
        let mut entries = self.entries.clone();
        for ((i, j), v) in entries.indexed_iter_mut() {
            *v *= phases[i] * phases[j].conj();
        }
        Self {
            entries,
            symbol: self.symbol,
            gamma: self.gamma + t,
        }
    }
}

impl OperatorMatrix {
    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(invalid(
                "matrix",
                format!("dimension mismatch {} vs {}", self.dim(), other.dim()),
            ));
        }
        Ok(())
    }
}

/// `e^{-i gamma (E(n) - E(n'))}`.
fn toeplitz_phase(p: &ModelParams, gamma: f64, n: usize, n2: usize) -> C64 {
    C64::from_polar(1.0, -gamma * (excitation(p, n) - excitation(p, n2)))
}

/// Diagonal matrix of `(1/rho_n) ∫ f(x) x^n w(x) dx` for a radial symbol
/// `f(|z|^2)`, by quadrature. The phase is trivial on the diagonal.
pub fn op_radial<F>(p: &ModelParams, f: F, n_max: usize, opts: &QuadratureOptions) -> Result<OperatorMatrix>
where
    F: Fn(f64) -> f64,
{
    let mut m = OperatorMatrix::zeros(n_max, SymbolKind::Radial, 0.0);
    for n in 0..=n_max {
        m.entries[[n, n]] = C64::new(normalized_moment_with(p, n, &f, opts)?.value, 0.0);
    }
    Ok(m)
}

/// Angular symbol `F(theta)` given by its Fourier coefficients `c_k(F)`:
/// `(A_F)_{n n'} = c_{n'-n}(F) phase M((n+n')/2) / sqrt(rho_n rho_n')` with
/// `M(mu) = ∫ x^mu w(x) dx`.
pub fn op_angular<C>(p: &ModelParams, coeff: C, gamma: f64, n_max: usize) -> Result<OperatorMatrix>
where
    C: Fn(i64) -> C64,
{
    let ln_rhos: Vec<f64> = (0..=n_max).map(|n| ln_rho(p, n)).collect();
    let mut m = OperatorMatrix::zeros(n_max, SymbolKind::Angular, gamma);
    for n in 0..=n_max {
        for n2 in 0..=n_max {
            let c = coeff(n2 as i64 - n as i64);
            if c == C64::default() {
                continue;
            }
            let mu = 0.5 * (n + n2) as f64;
            let mag = (ln_mellin_moment(p, mu)? - 0.5 * (ln_rhos[n] + ln_rhos[n2])).exp();
            m.entries[[n, n2]] = c * mag * toeplitz_phase(p, gamma, n, n2);
        }
    }
    Ok(m)
}

/// [`op_angular`] with the Fourier coefficients of `f` computed by the
/// trapezoid rule on the circle.
pub fn op_angular_from_function<F>(p: &ModelParams, f: F, gamma: f64, n_max: usize, tol: f64) -> Result<OperatorMatrix>
where
    F: Fn(f64) -> C64,
{
    let coeffs = (-(n_max as i64)..=n_max as i64)
        .map(|k| Ok(fourier_coefficient(&f, k, tol)?.value))
        .collect::<Result<Vec<C64>>>()?;
    op_angular(p, |k| coeffs[(k + n_max as i64) as usize], gamma, n_max)
}

/// `z^alpha conj(z)^sigma`: nonzero only where `n + alpha = n' + sigma`, with
/// entry `phase rho_{n+alpha} / sqrt(rho_n rho_n')`.
pub fn op_monomial(p: &ModelParams, alpha: usize, sigma: usize, gamma: f64, n_max: usize) -> Result<OperatorMatrix> {
    let ln_rhos: Vec<f64> = (0..=n_max).map(|n| ln_rho(p, n)).collect();
    let mut m = OperatorMatrix::zeros(n_max, SymbolKind::Monomial { alpha, sigma }, gamma);
    for n in 0..=n_max {
        let Some(n2) = (n + alpha).checked_sub(sigma) else {
            continue;
        };
        if n2 > n_max {
            continue;
        }
        let mu = 0.5 * (n + n2 + alpha + sigma) as f64;
        let mag = (ln_mellin_moment(p, mu)? - 0.5 * (ln_rhos[n] + ln_rhos[n2])).exp();
        m.entries[[n, n2]] = mag * toeplitz_phase(p, gamma, n, n2);
    }
    Ok(m)
}

/// `A_z`: `A_z |n> = sqrt(E(n)) e^{i gamma (E(n) - E(n-1))} |n-1>`.
pub fn op_z(p: &ModelParams, gamma: f64, n_max: usize) -> OperatorMatrix {
    let mut m = OperatorMatrix::zeros(n_max, SymbolKind::Ladder { raising: false }, gamma);
    for n in 1..=n_max {
        m.entries[[n - 1, n]] = excitation(p, n).sqrt() * toeplitz_phase(p, gamma, n - 1, n);
    }
    m
}

/// `A_conj(z) = A_z^†`.
pub fn op_zbar(p: &ModelParams, gamma: f64, n_max: usize) -> OperatorMatrix {
    OperatorMatrix {
        symbol: SymbolKind::Ladder { raising: true },
        ..op_z(p, gamma, n_max).adjoint()
    }
}

/// `(a, a^†)` with `a|n> = sqrt(n)|n-1>`, no gamma phases.
pub fn rescaled_boson(n_max: usize) -> (OperatorMatrix, OperatorMatrix) {
    let mut a = OperatorMatrix::zeros(n_max, SymbolKind::Boson { creation: false }, 0.0);
    for n in 1..=n_max {
        a.entries[[n - 1, n]] = C64::new((n as f64).sqrt(), 0.0);
    }
    let adag = OperatorMatrix {
        symbol: SymbolKind::Boson { creation: true },
        ..a.adjoint()
    };
    (a, adag)
}

/// Relative residual `|a - b| / max(1, |b|)`.
fn residual(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

/// Expectations of the quantized `z`, `conj z` in `|z, gamma>`:
/// `<A_z> = z`, `<A_conj z> = conj z`, `<A_z^2> = z^2`, `<A_conj z^2> = conj z^2`,
/// `<A_conj z A_z> = |z|^2`, and `<A_z A_conj z>` two ways: through the
/// commutator `[A_z, A_conj z] = s(2N + 2nu + 3)` and through the closed form
/// `|z|^2 (1 + 2s N'/N) + s(2nu+3)`.
pub fn verify_quantize_expectations(p: &ModelParams, z: C64, gamma: f64, tol: f64) -> Result<Vec<VerificationReport>> {
    let state = make_state(p, z, gamma, 1e-15)?;
    // two spare levels so A and A^† act exactly on the truncated state
    let dim_max = state.n_max() + 2;
    let c = state.coefficients();
    let az = op_z(p, gamma, dim_max);
    let azb = op_zbar(p, gamma, dim_max);
    let az2 = az.product(&az)?;
    let azb2 = azb.product(&azb)?;
    let azb_az = azb.product(&az)?;
    let az_azb = az.product(&azb)?;
    let x = z.norm_sqr();
    let s = p.scale_s();
    let nu = p.nu();
    let f_of_n: f64 = c
        .iter()
        .enumerate()
        .map(|(n, v)| s * (2.0 * n as f64 + 2.0 * nu + 3.0) * v.norm_sqr())
        .sum();
    let nd = n_derivatives(p, x)?;
    let printed = x * (1.0 + 2.0 * s * nd.n1 / nd.n0) + s * (2.0 * nu + 3.0);
    let lhs = az_azb.expectation(c)?;
    let commutator_route = C64::new(x + f_of_n, 0.0);
    Ok(vec![
        VerificationReport::check("<A_z> = z", residual(az.expectation(c)?, z), tol),
        VerificationReport::check("<A_zbar> = conj z", residual(azb.expectation(c)?, z.conj()), tol),
        VerificationReport::check("<A_z^2> = z^2", residual(az2.expectation(c)?, z * z), tol),
        VerificationReport::check(
            "<A_zbar^2> = conj z^2",
            residual(azb2.expectation(c)?, (z * z).conj()),
            tol,
        ),
        VerificationReport::check("<A_zbar A_z> = |z|^2", residual(azb_az.expectation(c)?, C64::new(x, 0.0)), tol),
        VerificationReport::check(
            "<A_z A_zbar> = |z|^2 + <s(2N+2nu+3)>",
            residual(lhs, commutator_route),
            tol,
        ),
        VerificationReport::check(
            "<A_z A_zbar> = |z|^2 (1 + 2s N'/N) + s(2nu+3)",
            residual(lhs, C64::new(printed, 0.0)),
            tol,
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ladder_examples() {
        let p = ModelParams::unit(0.0, 0.0).unwrap();
        let a = op_z(&p, 0.0, 5);
        assert_relative_eq!(a.get(0, 1).re, 3f64.sqrt(), max_relative = 1e-15);
        for i in 0..=5 {
            assert_eq!(a.get(i, 0), C64::default());
        }
        let (b, bd) = rescaled_boson(6);
        assert_eq!(b.get(0, 1), C64::new(1.0, 0.0));
        let n = bd.product(&b).unwrap();
        for k in 0..=6 {
            assert_relative_eq!(n.get(k, k).re, k as f64, epsilon = 1e-14);
        }
    }

    #[test]
    fn matrix_algebra() {
        let p = ModelParams::unit(0.5, 0.0).unwrap();
        let a = op_z(&p, 0.3, 4);
        let ad = op_zbar(&p, 0.3, 4);
        assert_eq!(a.adjoint().entries(), ad.entries());
        let sum = a.combine(C64::new(1.0, 0.0), &ad, C64::new(1.0, 0.0)).unwrap();
        assert!(sum.hermiticity_defect() < 1e-15);
        assert!(a.product(&op_z(&p, 0.3, 5)).is_err());
        assert!(a.apply(&[C64::default(); 6]).is_err());
        assert!(OperatorMatrix::from_entries(Array2::zeros((2, 3)), SymbolKind::Derived, 0.0).is_err());
    }
}
