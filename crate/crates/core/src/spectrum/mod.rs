//! The trigonometric Pöschl-Teller problem on `(0, L)`:
//!
//! `H = -(hbar^2/2M) d^2/dx^2 + eps0 [nu(nu+1)/sin^2(pi x/L) - 2 beta cot(pi x/L)]`
//!
//! Units: energies are measured in `eps0`, the ground-state energy of the
//! infinite well, so `eps0 = hbar^2 pi^2 / (2 M L^2)`. The only free energy
//! scale is `s = 2 M eps0 = (pi hbar / L)^2`; together with the box length
//! `L` it fixes `hbar = sqrt(s) L / pi`. Multiplying the Hamiltonian by `2M`
//! gives `2M H = -hbar^2 d^2/dx^2 + s V(x)`, which is the form used by every
//! finite-difference routine here.

mod eigen;
mod ladder;
mod products;

pub use eigen::{
    eigenfunction, fock_state, ground_gamma_factor, ground_normalization_prefactor, normalization_k, normalization_overlap,
    Eigenfunction,
};
pub use ladder::{
    apply_hamiltonian, apply_ladder, derivative, partner_potential, potential, second_derivative,
    superpotential, Direction, SampledFunction, UniformGrid, STENCIL_HALF_WIDTH,
};
pub use products::{
    lambda_mean_printed, product_m, product_t, theta_mean_printed, verify_operator_products, LADDER_TOL,
};

use crate::error::{invalid, Result};
use crate::specfun::ln_gamma_real;

/// Below this level `rho_n` is a direct product; above it, log-Gamma.
pub const RHO_DIRECT_MAX: usize = 30;

/// One Pöschl-Teller problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    nu: f64,
    beta: f64,
    scale_s: f64,
    box_l: f64,
}

impl ModelParams {
    /// `nu >= 0`, `beta >= 0`, `scale_s = 2 M eps0 > 0`, `box_l > 0`.
    ///
    /// Dirichlet conditions at both walls are imposed for every `nu`; for
    /// `nu < 1/2` this is one of several self-adjoint choices.
    pub fn new(nu: f64, beta: f64, scale_s: f64, box_l: f64) -> Result<Self> {
        if !nu.is_finite() || nu < 0.0 {
            return Err(invalid("nu", format!("must be finite and >= 0, got {nu}")));
        }
        if !beta.is_finite() || beta < 0.0 {
            return Err(invalid("beta", format!("must be finite and >= 0, got {beta}")));
        }
        if !scale_s.is_finite() || scale_s <= 0.0 {
            return Err(invalid("s", format!("must be finite and > 0, got {scale_s}")));
        }
        if !box_l.is_finite() || box_l <= 0.0 {
            return Err(invalid("L", format!("must be finite and > 0, got {box_l}")));
        }
        Ok(Self {
            nu,
            beta,
            scale_s,
            box_l,
        })
    }

    /// `s = 1`, `L = 1`.
    pub fn unit(nu: f64, beta: f64) -> Result<Self> {
        Self::new(nu, beta, 1.0, 1.0)
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn scale_s(&self) -> f64 {
        self.scale_s
    }

    pub fn box_l(&self) -> f64 {
        self.box_l
    }

    /// `c0 = pi hbar / L = sqrt(s)`.
    pub fn c0(&self) -> f64 {
        self.scale_s.sqrt()
    }

    pub fn hbar(&self) -> f64 {
        self.c0() * self.box_l / std::f64::consts::PI
    }

    /// The same problem with `nu -> nu + k`.
    pub fn shifted(&self, k: usize) -> Self {
        Self {
            nu: self.nu + k as f64,
            ..*self
        }
    }

    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        Self::new(self.nu, beta, self.scale_s, self.box_l)
    }

    pub fn with_nu(&self, nu: f64) -> Result<Self> {
        Self::new(nu, self.beta, self.scale_s, self.box_l)
    }
}

/// `(n, E_n, excitation(n), rho_n)` for one level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    pub n: usize,
    pub energy: f64,
    pub excitation: f64,
    pub rho: f64,
}

/// `E_n = (n+nu+1)^2 - beta^2/(n+nu+1)^2`, in units of `eps0`.
pub fn energy(p: &ModelParams, n: usize) -> f64 {
    let k = n as f64 + p.nu + 1.0;
    k * k - (p.beta * p.beta) / (k * k)
}

/// `s n (n + 2nu + 2)`: the `beta = 0` excitation energy `2M eps0 (E_n - E_0)`.
pub fn excitation(p: &ModelParams, n: usize) -> f64 {
    let nf = n as f64;
    p.scale_s * nf * (nf + 2.0 * p.nu + 2.0)
}

/// `ln rho_n`, `rho_n = prod_{k=1}^n excitation(k)`.
pub fn ln_rho(p: &ModelParams, n: usize) -> f64 {
    if n <= RHO_DIRECT_MAX {
        (1..=n).map(|k| excitation(p, k).ln()).sum()
    } else {
        ln_rho_gamma(p, n)
    }
}

// rho_n = s^n n! (2nu+3)_n
fn ln_rho_gamma(p: &ModelParams, n: usize) -> f64 {
    let nf = n as f64;
    let a = 2.0 * p.nu + 3.0;
    // arguments are >= 1, where ln_gamma_real cannot fail
    nf * p.scale_s.ln() + ln_gamma_real(nf + 1.0).unwrap_or(f64::NAN) + ln_gamma_real(a + nf).unwrap_or(f64::NAN)
        - ln_gamma_real(a).unwrap_or(f64::NAN)
}

/// `rho_n`; `+inf` once it leaves the f64 range (use [`ln_rho`] there).
pub fn rho(p: &ModelParams, n: usize) -> f64 {
    if n <= RHO_DIRECT_MAX {
        (1..=n).map(|k| excitation(p, k)).product()
    } else {
        ln_rho_gamma(p, n).exp()
    }
}

pub fn spectral_point(p: &ModelParams, n: usize) -> SpectralPoint {
    SpectralPoint {
        n,
        energy: energy(p, n),
        excitation: excitation(p, n),
        rho: rho(p, n),
    }
}

/// Levels `0..levels`.
pub fn spectrum(p: &ModelParams, levels: usize) -> Vec<SpectralPoint> {
    (0..levels).map(|n| spectral_point(p, n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn params_validation() {
        assert!(ModelParams::new(-0.1, 0.0, 1.0, 1.0).is_err());
        assert!(ModelParams::new(0.5, -1.0, 1.0, 1.0).is_err());
        assert!(ModelParams::new(0.5, 0.0, 0.0, 1.0).is_err());
        assert!(ModelParams::new(0.5, 0.0, 1.0, f64::NAN).is_err());
        let p = ModelParams::new(0.0, 0.0, 4.0, 2.0).unwrap();
        assert_relative_eq!(p.c0(), 2.0);
        assert_relative_eq!(p.hbar(), 4.0 / std::f64::consts::PI);
        assert_eq!(p.shifted(2).nu(), 2.0);
    }

    #[test]
    fn energies() {
        let p = ModelParams::unit(0.0, 0.0).unwrap();
        assert_eq!(energy(&p, 0), 1.0);
        let p = ModelParams::unit(0.0, 1.0).unwrap();
        assert_eq!(energy(&p, 0), 0.0);
        for &(nu, beta) in &[(0.0, 0.0), (0.5, 0.7), (2.3, 2.0), (0.0, 5.0)] {
            let p = ModelParams::unit(nu, beta).unwrap();
            for n in 0..50 {
                assert!(energy(&p, n + 1) > energy(&p, n));
            }
        }
    }

    #[test]
    fn excitations_and_rho() {
        let p = ModelParams::unit(0.0, 0.0).unwrap();
        assert_eq!(excitation(&p, 0), 0.0);
        assert_eq!(rho(&p, 0), 1.0);
        assert_eq!(excitation(&p, 1), 3.0);
        assert_eq!(excitation(&p, 2), 8.0);
        assert_eq!(rho(&p, 2), 24.0);
        let p = ModelParams::unit(0.5, 0.0).unwrap();
        assert_eq!(rho(&p, 1), 4.0);
        // excitation is E_n - E_0 at beta = 0, times s
        let p = ModelParams::new(1.3, 0.0, 2.5, 1.0).unwrap();
        for n in 0..10 {
            assert_relative_eq!(
                excitation(&p, n),
                p.scale_s() * (energy(&p, n) - energy(&p, 0)),
                max_relative = 1e-14
            );
        }
    }

    #[test]
    fn rho_log_and_linear_paths_agree() {
        for &(nu, s) in &[(0.0, 1.0), (0.3, 0.5), (2.5, 2.0)] {
            let p = ModelParams::new(nu, 0.0, s, 1.0).unwrap();
            for n in 0..=RHO_DIRECT_MAX {
                let direct = rho(&p, n);
                let viag = ln_rho_gamma(&p, n).exp();
                assert_relative_eq!(direct, viag, max_relative = 1e-12);
                assert_relative_eq!(ln_rho(&p, n), direct.ln(), epsilon = 1e-12);
            }
            let n = 40;
            assert_relative_eq!(rho(&p, n), rho(&p, n - 1) * excitation(&p, n), max_relative = 1e-12);
        }
    }

    #[test]
    fn spectrum_rows() {
        let p = ModelParams::unit(0.5, 0.7).unwrap();
        let rows = spectrum(&p, 5);
        assert_eq!(rows.len(), 5);
        assert_eq!(rows[3].n, 3);
        assert_eq!(rows[0].rho, 1.0);
    }
}
