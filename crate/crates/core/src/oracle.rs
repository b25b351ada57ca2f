//! Tensor Gauss-Hermite quadrature in velocity space.
//!
//! Everything here is computed from point values of distributions, never
//! from the coefficient recurrences in [`crate::moment`], so it serves as an
//! independent reference for them.

use nalgebra::Matrix3;

use crate::moment::hermite::{gauss_hermite_rule, hermite_eval};
use crate::moment::{Expansion, MomentBasis, MultiIndex};

/// Discrete measure sum_k w_k delta(xi - xi_k) approximating f(xi) dxi.
#[derive(Debug, Clone)]
pub struct VelocityMeasure {
    nodes: Vec<[f64; 3]>,
    weights: Vec<f64>,
}

fn tensor_rule(nq: usize) -> Vec<([f64; 3], f64)> {
    let (x, w) = gauss_hermite_rule(nq);
    let mut out = Vec::with_capacity(nq * nq * nq);
    for i in 0..nq {
        for j in 0..nq {
            for k in 0..nq {
                out.push(([x[i], x[j], x[k]], w[i] * w[j] * w[k]));
            }
        }
    }
    out
}

fn standard_gaussian(y: [f64; 3]) -> f64 {
    let r2 = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
    (-0.5 * r2).exp() / (2.0 * std::f64::consts::PI).powf(1.5)
}

impl VelocityMeasure {
    /// The truncated series `e`, integrated exactly for polynomial test
    /// functions of degree < 2 nq - order.
    pub fn from_expansion(e: &Expansion, nq: usize) -> Self {
        let basis = e.basis();
        let st = e.theta.sqrt();
        let order = basis.order();
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for (y, w) in tensor_rule(nq) {
            let he: Vec<Vec<f64>> = (0..3)
                .map(|d| (0..=order).map(|n| hermite_eval(n, y[d])).collect())
                .collect();
            let mut density = 0.0;
            for (i, a) in basis.indices().iter().enumerate() {
                let c = e.coeffs[i];
                if c == 0.0 {
                    continue;
                }
                density += c * st.powi(-(a.degree() as i32)) * he[0][a.0[0]] * he[1][a.0[1]] * he[2][a.0[2]];
            }
            nodes.push([e.u[0] + st * y[0], e.u[1] + st * y[1], e.u[2] + st * y[2]]);
            weights.push(w * density);
        }
        VelocityMeasure { nodes, weights }
    }

    /// rho times the Gaussian with mean `u` and covariance `lambda` (SPD).
    pub fn anisotropic_gaussian(rho: f64, u: [f64; 3], lambda: Matrix3<f64>, nq: usize) -> Self {
        let l = lambda
            .cholesky()
            .expect("covariance must be positive definite")
            .l();
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for (y, w) in tensor_rule(nq) {
            let mut xi = u;
            for r in 0..3 {
                for c in 0..3 {
                    xi[r] += l[(r, c)] * y[c];
                }
            }
            nodes.push(xi);
            weights.push(rho * w);
        }
        VelocityMeasure { nodes, weights }
    }

    /// An arbitrary density, sampled on nodes adapted to the Gaussian with
    /// centre `u0` and temperature `theta0`.
    pub fn from_function(f: impl Fn([f64; 3]) -> f64, u0: [f64; 3], theta0: f64, nq: usize) -> Self {
        let st = theta0.sqrt();
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for (y, w) in tensor_rule(nq) {
            let xi = [u0[0] + st * y[0], u0[1] + st * y[1], u0[2] + st * y[2]];
            // omega_{u0,theta0}(xi) = standard_gaussian(y) / theta0^{3/2}
            let omega = standard_gaussian(y) / theta0.powf(1.5);
            nodes.push(xi);
            weights.push(w * f(xi) / omega);
        }
        VelocityMeasure { nodes, weights }
    }

    /// The measure g(xi) f(xi) dxi.
    pub fn times(&self, g: impl Fn([f64; 3]) -> f64) -> Self {
        VelocityMeasure {
            nodes: self.nodes.clone(),
            weights: self.nodes.iter().zip(&self.weights).map(|(x, w)| w * g(*x)).collect(),
        }
    }

    /// int g(xi) f(xi) dxi.
    pub fn integrate(&self, g: impl Fn([f64; 3]) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * g(*x)).sum()
    }

    /// int xi^beta f dxi.
    pub fn moment(&self, beta: MultiIndex) -> f64 {
        self.integrate(|x| (0..3).map(|d| x[d].powi(beta.0[d] as i32)).product())
    }

    /// Density, momentum and total energy.
    pub fn conserved_moments(&self) -> [f64; 5] {
        [
            self.integrate(|_| 1.0),
            self.integrate(|x| x[0]),
            self.integrate(|x| x[1]),
            self.integrate(|x| x[2]),
            self.integrate(|x| 0.5 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2])),
        ]
    }

    /// Coefficients in H^{[u, theta]}: theta^{|alpha|/2} / alpha! int f He_alpha(v) dxi.
    pub fn coefficients(&self, order: usize, u: [f64; 3], theta: f64) -> Vec<f64> {
        let basis = MomentBasis::of(order);
        let st = theta.sqrt();
        let mut acc = vec![0.0; basis.len()];
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let he: Vec<Vec<f64>> = (0..3)
                .map(|d| {
                    let v = (x[d] - u[d]) / st;
                    (0..=order).map(|n| hermite_eval(n, v)).collect()
                })
                .collect();
            for (i, a) in basis.indices().iter().enumerate() {
                acc[i] += w * he[0][a.0[0]] * he[1][a.0[1]] * he[2][a.0[2]];
            }
        }
        for (i, a) in basis.indices().iter().enumerate() {
            acc[i] *= st.powi(a.degree() as i32) / a.factorial();
        }
        acc
    }
}

/// Hermite coefficients of an arbitrary velocity distribution in the basis
/// [u, theta], by tensor Gauss-Hermite quadrature with `nq` nodes per
/// direction centred on that basis.
pub fn quadrature_oracle(f: impl Fn([f64; 3]) -> f64, order: usize, u: [f64; 3], theta: f64, nq: usize) -> Vec<f64> {
    VelocityMeasure::from_function(f, u, theta, nq).coefficients(order, u, theta)
}

/// Point value of the Maxwellian rho (2 pi theta)^{-3/2} exp(-|xi-u|^2 / 2 theta).
pub fn maxwellian_density(rho: f64, u: [f64; 3], theta: f64, xi: [f64; 3]) -> f64 {
    let c2: f64 = (0..3).map(|d| (xi[d] - u[d]).powi(2)).sum();
    rho * (-0.5 * c2 / theta).exp() / (2.0 * std::f64::consts::PI * theta).powf(1.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maxwellian_has_only_density() {
        let u = [0.2, -0.4, 0.1];
        let c = quadrature_oracle(|x| maxwellian_density(2.0, u, 1.3, x), 4, u, 1.3, 10);
        assert!((c[0] - 2.0).abs() < 1e-13);
        assert!(c[1..].iter().all(|x| x.abs() < 1e-13));
    }

    #[test]
    fn first_moment_is_orthogonal() {
        let c = quadrature_oracle(
            |x| x[0] * maxwellian_density(1.0, [0.0; 3], 1.0, x),
            3,
            [0.0; 3],
            1.0,
            10,
        );
        for (i, v) in c.iter().enumerate() {
            if i == 1 {
                assert!((v - 1.0).abs() < 1e-13);
            } else {
                assert!(v.abs() < 1e-13, "slot {i}: {v}");
            }
        }
    }
}
