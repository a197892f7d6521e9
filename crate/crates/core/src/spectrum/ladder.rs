//! Superpotential, ladder operators `A = hbar d/dx + W`, `A^† = -hbar d/dx + W`
//! and the Hamiltonian, applied to functions sampled on a uniform grid with
//! centered 8th-order finite differences.

use std::f64::consts::PI;

use super::eigen::angle;
use super::{energy, ModelParams};
use crate::error::{invalid, Error, Result};

/// Points lost at each end of the grid per differentiation.
pub const STENCIL_HALF_WIDTH: usize = 4;

const D1: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
const D2_CENTER: f64 = -205.0 / 72.0;
const D2: [f64; 4] = [8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0];

fn outside(function: &'static str, p: &ModelParams, x: f64) -> Error {
    Error::Domain {
        function,
        detail: format!("x = {x} not in (0, {})", p.box_l()),
    }
}

/// `W(x) = -c0 ((nu+1) cot(pi x/L) - beta/(nu+1))`, so that `W = -hbar phi_0'/phi_0`.
pub fn superpotential(p: &ModelParams, x: f64) -> Result<f64> {
    let (s, c) = angle(p, x).ok_or_else(|| outside("superpotential", p, x))?;
    let lam = p.nu() + 1.0;
    Ok(-p.c0() * (lam * c / s - p.beta() / lam))
}

fn superpotential_derivative(p: &ModelParams, s: f64) -> f64 {
    p.c0() * (p.nu() + 1.0) * (PI / p.box_l()) / (s * s)
}

/// `V(x) = nu(nu+1)/sin^2(pi x/L) - 2 beta cot(pi x/L)` in units of `eps0`.
pub fn potential(p: &ModelParams, x: f64) -> Result<f64> {
    let (s, c) = angle(p, x).ok_or_else(|| outside("potential", p, x))?;
    let nu = p.nu();
    Ok(nu * (nu + 1.0) / (s * s) - 2.0 * p.beta() * c / s)
}

/// `(W^2 + hbar W')/(2M eps0) + E_0`, the potential of the partner Hamiltonian
/// `A A^†/2M + E_0`, in units of `eps0`. Shape invariance says it equals the
/// potential at `nu + 1`.
pub fn partner_potential(p: &ModelParams, x: f64) -> Result<f64> {
    let (s, _) = angle(p, x).ok_or_else(|| outside("partner_potential", p, x))?;
    let w = superpotential(p, x)?;
    let wp = superpotential_derivative(p, s);
    Ok((w * w + p.hbar() * wp) / p.scale_s() + energy(p, 0))
}

/// `n` interior points `x_i = (i+1) L/(n+1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    box_l: f64,
    points: usize,
}

impl UniformGrid {
    pub fn interior(box_l: f64, points: usize) -> Result<Self> {
        if !(box_l > 0.0) || points < 2 * STENCIL_HALF_WIDTH + 1 {
            return Err(invalid(
                "grid",
                format!("need L > 0 and at least {} points", 2 * STENCIL_HALF_WIDTH + 1),
            ));
        }
        Ok(Self { box_l, points })
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn spacing(&self) -> f64 {
        self.box_l / (self.points as f64 + 1.0)
    }

    pub fn sample<F: Fn(f64) -> f64>(&self, f: F) -> SampledFunction {
        let dx = self.spacing();
        SampledFunction {
            first: 1,
            dx,
            values: (0..self.points).map(|i| f((i + 1) as f64 * dx)).collect(),
        }
    }
}

/// Values `f(x_i)` at `x_i = (first + i) dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    first: usize,
    dx: f64,
    values: Vec<f64>,
}

impl SampledFunction {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.dx
    }

    pub fn x(&self, i: usize) -> f64 {
        (self.first + i) as f64 * self.dx
    }

    pub fn xs(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|i| self.x(i))
    }

    /// `g` sampled at the same points.
    pub fn resample<F: Fn(f64) -> f64>(&self, g: F) -> Self {
        Self {
            first: self.first,
            dx: self.dx,
            values: self.xs().map(g).collect(),
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| v * c).collect(),
            ..self.clone()
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `max_i |f_i - g_i|`; both must live on the same points.
    pub fn sup_distance(&self, other: &Self) -> Result<f64> {
        if self.first != other.first || self.len() != other.len() || self.dx != other.dx {
            return Err(invalid("grid", "sampled functions live on different points"));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }

    /// `dx sum_i f_i^2`: the trapezoid rule for `∫ f^2`, spectrally accurate
    /// when `f` vanishes to high order at both ends of the sample.
    pub fn norm_sq(&self) -> f64 {
        self.dx * self.values.iter().map(|v| v * v).sum::<f64>()
    }

    fn trimmed(&self, values: Vec<f64>) -> Self {
        Self {
            first: self.first + STENCIL_HALF_WIDTH,
            dx: self.dx,
            values,
        }
    }

    fn check_stencil(&self) -> Result<()> {
        if self.len() < 2 * STENCIL_HALF_WIDTH + 1 {
            return Err(invalid("grid", "too few points left for the difference stencil"));
        }
        Ok(())
    }
}

/// `f'` at the interior points.
pub fn derivative(f: &SampledFunction) -> Result<SampledFunction> {
    f.check_stencil()?;
    let v = &f.values;
    let h = STENCIL_HALF_WIDTH;
    let out = (h..v.len() - h)
        .map(|i| {
            D1.iter()
                .enumerate()
                .map(|(j, c)| c * (v[i + j + 1] - v[i - j - 1]))
                .sum::<f64>()
                / f.dx
        })
        .collect();
    Ok(f.trimmed(out))
}

/// `f''` at the interior points.
pub fn second_derivative(f: &SampledFunction) -> Result<SampledFunction> {
    f.check_stencil()?;
    let v = &f.values;
    let h = STENCIL_HALF_WIDTH;
    let dx2 = f.dx * f.dx;
    let out = (h..v.len() - h)
        .map(|i| {
            (D2_CENTER * v[i]
                + D2
                    .iter()
                    .enumerate()
                    .map(|(j, c)| c * (v[i + j + 1] + v[i - j - 1]))
                    .sum::<f64>())
                / dx2
        })
        .collect();
    Ok(f.trimmed(out))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `A = hbar d/dx + W`
    Lower,
    /// `A^† = -hbar d/dx + W`
    Raise,
}

/// `(±hbar d/dx + W) f` on the interior points of `f`.
pub fn apply_ladder(p: &ModelParams, direction: Direction, f: &SampledFunction) -> Result<SampledFunction> {
    let df = derivative(f)?;
    let sign = match direction {
        Direction::Lower => 1.0,
        Direction::Raise => -1.0,
    };
    let hbar = p.hbar();
    let values = df
        .xs()
        .zip(&df.values)
        .zip(&f.values[STENCIL_HALF_WIDTH..])
        .map(|((x, d), v)| Ok(sign * hbar * d + superpotential(p, x)? * v))
        .collect::<Result<_>>()?;
    Ok(f.trimmed(values))
}

/// `H f` in units of `eps0`: `(-hbar^2 f'' + s V f)/s`.
pub fn apply_hamiltonian(p: &ModelParams, f: &SampledFunction) -> Result<SampledFunction> {
    let d2 = second_derivative(f)?;
    let h2 = p.hbar() * p.hbar();
    let s = p.scale_s();
    let values = d2
        .xs()
        .zip(&d2.values)
        .zip(&f.values[STENCIL_HALF_WIDTH..])
        .map(|((x, d), v)| Ok((-h2 * d + s * potential(p, x)? * v) / s))
        .collect::<Result<_>>()?;
    Ok(f.trimmed(values))
}
