//! Fits that are linear in their parameters, solved in closed form.

use super::{Estimate, XYSeries};
use crate::error::{Error, Result};
use crate::math;

/// Result of fitting y = ½·a·x².
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct HalfQuadraticFit {
    pub a: Estimate,
    pub residual_rms: f64,
}

impl HalfQuadraticFit {
    pub fn eval(&self, x: f64) -> f64 {
        0.5 * self.a.value * x * x
    }
}

/// Result of fitting y = a·x² + b.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct QuadraticOffsetFit {
    pub a: Estimate,
    pub b: Estimate,
    pub covariance_ab: f64,
    pub residual_rms: f64,
}

impl QuadraticOffsetFit {
    pub fn eval(&self, x: f64) -> f64 {
        self.a.value * x * x + self.b.value
    }
}

fn weight(sigma: Option<f64>) -> f64 {
    sigma.map_or(1.0, |s| 1.0 / (s * s))
}

fn rms(sum_sq: f64, n: usize) -> f64 {
    math::sqrt(sum_sq / n as f64)
}

/// Weighted least squares for y = ½·a·x² through the origin.
///
/// With per-point sigmas the uncertainty is absolute; without them it is
/// scaled by the residual variance.
pub fn fit_half_quadratic(data: &XYSeries) -> Result<HalfQuadraticFit> {
    data.require(3, "need at least three points")?;
    let (mut szz, mut szy) = (0.0, 0.0);
    for p in data.points() {
        let z = 0.5 * p.x * p.x;
        let w = weight(p.sigma);
        szz += w * z * z;
        szy += w * z * p.y;
    }
    if !(szz > 0.0) {
        return Err(Error::DegenerateFit("all x are zero"));
    }
    let a = szy / szz;
    let ss: f64 = data
        .points()
        .iter()
        .map(|p| {
            let r = p.y - 0.5 * a * p.x * p.x;
            r * r
        })
        .sum();
    let sigma = if data.has_sigma() {
        math::sqrt(1.0 / szz)
    } else {
        math::sqrt(ss / (data.len() - 1) as f64 / szz)
    };
    Ok(HalfQuadraticFit {
        a: Estimate { value: a, sigma },
        residual_rms: rms(ss, data.len()),
    })
}

/// Weighted least squares for y = a·x² + b, solved about the weighted mean
/// of x² to avoid cancellation.
pub fn fit_quadratic_offset(data: &XYSeries) -> Result<QuadraticOffsetFit> {
    data.require(4, "need at least four points")?;
    let (mut sw, mut swz, mut swy) = (0.0, 0.0, 0.0);
    for p in data.points() {
        let w = weight(p.sigma);
        sw += w;
        swz += w * p.x * p.x;
        swy += w * p.y;
    }
    let zbar = swz / sw;
    let ybar = swy / sw;
    let (mut szz, mut szy) = (0.0, 0.0);
    let mut zscale: f64 = 0.0;
    for p in data.points() {
        let w = weight(p.sigma);
        let dz = p.x * p.x - zbar;
        szz += w * dz * dz;
        szy += w * dz * (p.y - ybar);
        zscale = zscale.max(p.x * p.x);
    }
    if !(szz > 1e-24 * sw * zscale * zscale) {
        return Err(Error::DegenerateFit(
            "x² does not vary; a and b are not separable",
        ));
    }
    let a = szy / szz;
    let b = ybar - a * zbar;
    let ss: f64 = data
        .points()
        .iter()
        .map(|p| {
            let r = p.y - (a * p.x * p.x + b);
            r * r
        })
        .sum();
    let scale = if data.has_sigma() {
        1.0
    } else {
        let wss: f64 = ss;
        wss / (data.len() - 2) as f64
    };
    let var_a = scale / szz;
    let var_b = scale * (1.0 / sw + zbar * zbar / szz);
    Ok(QuadraticOffsetFit {
        a: Estimate {
            value: a,
            sigma: math::sqrt(var_a),
        },
        b: Estimate {
            value: b,
            sigma: math::sqrt(var_b),
        },
        covariance_ab: -zbar * var_a,
        residual_rms: rms(ss, data.len()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;
    use approx::assert_relative_eq;

    fn mw_grid(n: usize, lo: f64, hi: f64) -> Vec<f64> {
        (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect()
    }

    #[test]
    fn half_quadratic_noiseless_is_exact() {
        let x = mw_grid(9, 1e-3, 9e-3);
        let y: Vec<f64> = x.iter().map(|x| 0.5 * 0.090 * x * x).collect();
        let fit = fit_half_quadratic(&XYSeries::from_xy(&x, &y).unwrap()).unwrap();
        assert_relative_eq!(fit.a.value, 0.090, max_relative = 1e-14);
        assert!(fit.a.sigma < 1e-15);
    }

    #[test]
    fn half_quadratic_zero_data() {
        let x = mw_grid(5, 1e-3, 9e-3);
        let fit = fit_half_quadratic(&XYSeries::from_xy(&x, &[0.0; 5]).unwrap()).unwrap();
        assert_eq!(fit.a.value, 0.0);
    }

    #[test]
    fn half_quadratic_needs_three_points() {
        let s = XYSeries::from_xy(&[1.0, 2.0], &[1.0, 4.0]).unwrap();
        assert!(fit_half_quadratic(&s).is_err());
    }

    #[test]
    fn half_quadratic_with_known_noise() {
        // Deterministic ±σ pattern; the estimate must stay within a few σ_a.
        let x = mw_grid(9, 1e-3, 9e-3);
        let y: Vec<f64> = x
            .iter()
            .enumerate()
            .map(|(i, x)| 0.5 * 0.020 * x * x + if i % 2 == 0 { 1e-9 } else { -1e-9 })
            .collect();
        let s: Vec<f64> = alloc::vec![1e-9; 9];
        let fit = fit_half_quadratic(&XYSeries::from_xy_sigma(&x, &y, &s).unwrap()).unwrap();
        assert!((fit.a.value - 0.020).abs() < 3.0 * fit.a.sigma, "{fit:?}");
        assert!(fit.a.sigma < 3e-4);
    }

    #[test]
    fn quadratic_offset_noiseless_is_exact() {
        let x = mw_grid(12, 0.5e-3, 8.7e-3);
        let y: Vec<f64> = x.iter().map(|x| 1.5e7 * x * x + 23.0).collect();
        let fit = fit_quadratic_offset(&XYSeries::from_xy(&x, &y).unwrap()).unwrap();
        assert_relative_eq!(fit.a.value, 1.5e7, max_relative = 1e-12);
        assert_relative_eq!(fit.b.value, 23.0, max_relative = 1e-11);
        assert_relative_eq!(fit.eval(8.7e-3), 1158.35, max_relative = 1e-9);
    }

    #[test]
    fn quadratic_offset_constant_data() {
        let x = mw_grid(6, 1e-3, 6e-3);
        let fit = fit_quadratic_offset(&XYSeries::from_xy(&x, &[23.0; 6]).unwrap()).unwrap();
        assert!(fit.a.value.abs() < 1e-6);
        assert_relative_eq!(fit.b.value, 23.0, max_relative = 1e-12);
    }

    #[test]
    fn quadratic_offset_degenerate_design() {
        // x = ±1, ±1e-9-separated copies: x² is effectively constant.
        let s = XYSeries::from_xy(
            &[-1.0, -0.999_999_999_999, 0.999_999_999_999, 1.0],
            &[1.0, 2.0, 3.0, 4.0],
        )
        .unwrap();
        assert!(matches!(
            fit_quadratic_offset(&s),
            Err(Error::DegenerateFit(_))
        ));
    }
}
