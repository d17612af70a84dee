//! Levenberg–Marquardt with Nielsen's damping update and Marquardt's
//! diagonal scaling. Jacobians are central differences.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::Matrix;
use crate::math;

#[derive(Debug, Clone, Copy)]
pub(crate) struct LmSettings {
    pub max_iterations: usize,
    /// Stop when ‖h‖ ≤ xtol·(‖x‖ + xtol).
    pub xtol: f64,
    /// Stop when an accepted step lowers the cost by less than this fraction.
    pub ftol: f64,
}

impl Default for LmSettings {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            xtol: 1e-10,
            ftol: 1e-15,
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct LmOutcome {
    pub params: Vec<f64>,
    /// ½·Σr².
    pub cost: f64,
    pub iterations: usize,
    pub converged: bool,
    /// JᵀJ at `params`.
    pub normal: Matrix,
}

/// Residual callback: fills `out` and returns `false` if `p` is outside the
/// model's domain.
pub(crate) trait Residuals {
    fn len(&self) -> usize;
    fn eval(&self, p: &[f64], out: &mut [f64]) -> bool;
}

fn half_sum_sq(r: &[f64]) -> f64 {
    0.5 * r.iter().map(|v| v * v).sum::<f64>()
}

fn norm(v: &[f64]) -> f64 {
    math::sqrt(v.iter().map(|x| x * x).sum())
}

fn jacobian<R: Residuals>(
    model: &R,
    p: &[f64],
    jac: &mut [Vec<f64>],
    scratch: &mut [Vec<f64>; 2],
) -> bool {
    let mut q = p.to_vec();
    for (j, col) in jac.iter_mut().enumerate() {
        let h = 1e-6 * (1.0 + p[j].abs());
        q[j] = p[j] + h;
        let ok_hi = model.eval(&q, &mut scratch[0]);
        q[j] = p[j] - h;
        let ok_lo = model.eval(&q, &mut scratch[1]);
        q[j] = p[j];
        if !(ok_hi && ok_lo) {
            return false;
        }
        for (c, (a, b)) in col.iter_mut().zip(scratch[0].iter().zip(&scratch[1])) {
            *c = (a - b) / (2.0 * h);
        }
    }
    true
}

fn normal_equations(jac: &[Vec<f64>], r: &[f64]) -> (Matrix, Vec<f64>) {
    let n = jac.len();
    let mut a = Matrix::zeros(n);
    let mut g = vec![0.0; n];
    for i in 0..n {
        g[i] = jac[i].iter().zip(r).map(|(j, r)| j * r).sum();
        for k in 0..=i {
            let v: f64 = jac[i].iter().zip(&jac[k]).map(|(a, b)| a * b).sum();
            a.set(i, k, v);
            a.set(k, i, v);
        }
    }
    (a, g)
}

/// Minimises ½·Σr(p)² from `start`. Returns `None` if the residuals cannot
/// be evaluated at the starting point.
pub(crate) fn minimize<R: Residuals>(
    model: &R,
    start: &[f64],
    settings: LmSettings,
) -> Option<LmOutcome> {
    let n = start.len();
    let m = model.len();
    let mut x = start.to_vec();
    let mut r = vec![0.0; m];
    if !model.eval(&x, &mut r) {
        return None;
    }
    let mut cost = half_sum_sq(&r);
    let mut jac = vec![vec![0.0; m]; n];
    let mut scratch = [vec![0.0; m], vec![0.0; m]];
    let mut r_new = vec![0.0; m];

    if !jacobian(model, &x, &mut jac, &mut scratch) {
        return None;
    }
    let (mut a, mut g) = normal_equations(&jac, &r);
    let scaling = |a: &Matrix| -> Vec<f64> {
        let max = (0..n).map(|i| a.get(i, i)).fold(0.0, f64::max);
        (0..n)
            .map(|i| a.get(i, i).max(1e-30 * max).max(f64::MIN_POSITIVE))
            .collect()
    };
    let mut mu = 1e-3;
    let mut nu = 2.0;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < settings.max_iterations {
        iterations += 1;
        let d = scaling(&a);
        let mut damped = a.clone();
        for (i, di) in d.iter().enumerate() {
            damped.add(i, i, mu * di);
        }
        let neg_g: Vec<f64> = g.iter().map(|v| -v).collect();
        let Some(h) = damped.solve_spd(&neg_g) else {
            mu *= nu;
            nu *= 2.0;
            continue;
        };
        if norm(&h) <= settings.xtol * (norm(&x) + settings.xtol) {
            converged = true;
            break;
        }
        let trial: Vec<f64> = x.iter().zip(&h).map(|(x, h)| x + h).collect();
        let predicted: f64 = 0.5
            * (0..n)
                .map(|i| h[i] * (mu * d[i] * h[i] - g[i]))
                .sum::<f64>();
        let accepted = model.eval(&trial, &mut r_new) && {
            let c = half_sum_sq(&r_new);
            c.is_finite() && c < cost
        };
        if accepted {
            let new_cost = half_sum_sq(&r_new);
            let rho = (cost - new_cost) / predicted.max(f64::MIN_POSITIVE);
            let small_gain = cost - new_cost <= settings.ftol * cost;
            x = trial;
            core::mem::swap(&mut r, &mut r_new);
            cost = new_cost;
            if !jacobian(model, &x, &mut jac, &mut scratch) {
                return None;
            }
            (a, g) = normal_equations(&jac, &r);
            let t = 2.0 * rho - 1.0;
            mu *= (1.0 - t * t * t).max(1.0 / 3.0);
            nu = 2.0;
            if small_gain || cost == 0.0 {
                converged = true;
                break;
            }
        } else {
            mu *= nu;
            nu *= 2.0;
            if mu > 1e30 {
                // No descent direction left at working precision.
                converged = true;
                break;
            }
        }
    }
    Some(LmOutcome {
        params: x,
        cost,
        iterations,
        converged,
        normal: a,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Exponential {
        t: Vec<f64>,
        y: Vec<f64>,
    }

    impl Residuals for Exponential {
        fn len(&self) -> usize {
            self.t.len()
        }
        fn eval(&self, p: &[f64], out: &mut [f64]) -> bool {
            for ((o, t), y) in out.iter_mut().zip(&self.t).zip(&self.y) {
                *o = p[0] * math::exp(-p[1] * t) - y;
            }
            true
        }
    }

    #[test]
    fn recovers_exponential_decay() {
        let t: Vec<f64> = (0..40).map(|i| i as f64 * 0.1).collect();
        let y = t.iter().map(|t| 2.5 * math::exp(-1.3 * t)).collect();
        let out = minimize(&Exponential { t, y }, &[1.0, 0.2], LmSettings::default()).unwrap();
        assert!(out.converged);
        assert!((out.params[0] - 2.5).abs() < 1e-8, "{:?}", out.params);
        assert!((out.params[1] - 1.3).abs() < 1e-8);
        assert!(out.cost < 1e-20);
    }

    struct Rosenbrock;

    impl Residuals for Rosenbrock {
        fn len(&self) -> usize {
            2
        }
        fn eval(&self, p: &[f64], out: &mut [f64]) -> bool {
            out[0] = 10.0 * (p[1] - p[0] * p[0]);
            out[1] = 1.0 - p[0];
            true
        }
    }

    #[test]
    fn rosenbrock_valley() {
        let out = minimize(&Rosenbrock, &[-1.2, 1.0], LmSettings::default()).unwrap();
        assert!((out.params[0] - 1.0).abs() < 1e-6, "{out:?}");
        assert!((out.params[1] - 1.0).abs() < 1e-6);
    }
}
