//! Fubini-Study metric of the coherent-state surface `z -> |z, gamma>`.
//!
//! `dsigma^2 = || d|z> ||^2 - |<z|d|z>|^2 = W(x) dzbar dz`, `x = |z|^2`,
//! with `W = d<N>/dx`. The metric is reported in the `dzbar dz` convention;
//! the line element in real coordinates is `W (du^2 + dv^2)`.

use crate::error::Result;
use crate::spectrum::ModelParams;
use crate::statistics::n_derivatives;

/// `W(x)` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricSample {
    pub x: f64,
    pub w: f64,
}

/// The two terms of the metric before subtraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricComponents {
    /// `|| d|z> ||^2 / (dzbar dz) = (N' + x N'')/N`
    pub tangent_norm: f64,
    /// `|<z|d|z>|^2 / (dzbar dz) = x (N'/N)^2`
    pub projection: f64,
}

pub fn metric_components(p: &ModelParams, x: f64) -> Result<MetricComponents> {
    let d = n_derivatives(p, x)?;
    let r = d.n1 / d.n0;
    Ok(MetricComponents {
        tangent_norm: (d.n1 + x * d.n2) / d.n0,
        projection: x * r * r,
    })
}

/// `W(x) = (N' + x N'')/N - x (N'/N)^2`.
pub fn fubini_metric(p: &ModelParams, x: f64) -> Result<f64> {
    let c = metric_components(p, x)?;
    Ok(c.tangent_norm - c.projection)
}

pub fn metric_sample(p: &ModelParams, x: f64) -> Result<MetricSample> {
    Ok(MetricSample {
        x,
        w: fubini_metric(p, x)?,
    })
}
