use serde::{Deserialize, Serialize};

use super::basis::{basis_size, slots, MomentBasis};
use crate::error::{Error, Result};

/// A truncated Hermite series sum_{|alpha| <= order} c_alpha H_alpha^{[u, theta]}.
///
/// No sign constraints: fluxes, residuals and right-hand sides use this type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Expansion {
    pub u: [f64; 3],
    pub theta: f64,
    pub coeffs: Vec<f64>,
}

impl Expansion {
    pub fn new(u: [f64; 3], theta: f64, coeffs: Vec<f64>) -> Self {
        debug_assert!(
            (0..=super::basis::MAX_ORDER).any(|m| basis_size(m) == coeffs.len()),
            "coefficient count {} is not a basis size",
            coeffs.len()
        );
        Expansion { u, theta, coeffs }
    }

    pub fn zeros(order: usize, u: [f64; 3], theta: f64) -> Self {
        Expansion {
            u,
            theta,
            coeffs: vec![0.0; basis_size(order)],
        }
    }

    /// Maxwellian with density `rho` expressed in its own basis.
    pub fn maxwellian(order: usize, rho: f64, u: [f64; 3], theta: f64) -> Self {
        let mut e = Self::zeros(order, u, theta);
        e.coeffs[0] = rho;
        e
    }

    pub fn order(&self) -> usize {
        let n = self.coeffs.len();
        let mut m = 0;
        while basis_size(m) < n {
            m += 1;
        }
        m
    }

    pub fn basis(&self) -> &'static MomentBasis {
        MomentBasis::of(self.order())
    }

    pub fn same_params(&self, u: [f64; 3], theta: f64) -> bool {
        self.u == u && self.theta == theta
    }

    /// Keep only |alpha| <= m.
    pub fn truncated(&self, m: usize) -> Expansion {
        let n = basis_size(m).min(self.coeffs.len());
        Expansion {
            u: self.u,
            theta: self.theta,
            coeffs: self.coeffs[..n].to_vec(),
        }
    }

    /// Density, momentum and total energy (1/2 int |xi|^2 f) of the series.
    pub fn conserved_moments(&self) -> [f64; 5] {
        let c = &self.coeffs;
        let rho = c[0];
        let (fe, f2) = low_order(c);
        let mom = [
            self.u[0] * rho + fe[0],
            self.u[1] * rho + fe[1],
            self.u[2] * rho + fe[2],
        ];
        let u2: f64 = self.u.iter().map(|x| x * x).sum();
        let ufe: f64 = (0..3).map(|d| self.u[d] * fe[d]).sum();
        let energy = 0.5 * (u2 * rho + 2.0 * ufe + 2.0 * f2 + 3.0 * self.theta * rho);
        [rho, mom[0], mom[1], mom[2], energy]
    }
}

fn low_order(c: &[f64]) -> ([f64; 3], f64) {
    let fe = if c.len() > 3 {
        [c[slots::e(0)], c[slots::e(1)], c[slots::e(2)]]
    } else {
        [0.0; 3]
    };
    let f2 = if c.len() >= basis_size(2) {
        (0..3).map(|d| c[slots::pair(d, d)]).sum()
    } else {
        0.0
    };
    (fe, f2)
}

/// Per-cell unknowns: expansion centre (u, theta) and coefficients f_alpha.
///
/// Construction enforces rho = f_0 > 0 and theta > 0. States produced by
/// [`super::adapt`] are additionally in adapted form (f_{e_i} = 0 and
/// sum_d f_{2e_d} = 0).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentState {
    inner: Expansion,
}

impl MomentState {
    pub fn new(u: [f64; 3], theta: f64, coeffs: Vec<f64>) -> Result<Self> {
        Self::from_expansion(Expansion::new(u, theta, coeffs))
    }

    pub fn from_expansion(e: Expansion) -> Result<Self> {
        let rho = e.coeffs.first().copied().unwrap_or(f64::NAN);
        if !(rho > 0.0 && e.theta > 0.0) || !rho.is_finite() || !e.theta.is_finite() {
            return Err(Error::realizability(rho, e.theta));
        }
        Ok(MomentState { inner: e })
    }

    pub fn maxwellian(order: usize, rho: f64, u: [f64; 3], theta: f64) -> Result<Self> {
        Self::from_expansion(Expansion::maxwellian(order, rho, u, theta))
    }

    pub fn order(&self) -> usize {
        self.inner.order()
    }

    pub fn u(&self) -> [f64; 3] {
        self.inner.u
    }

    pub fn theta(&self) -> f64 {
        self.inner.theta
    }

    pub fn rho(&self) -> f64 {
        self.inner.coeffs[0]
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.inner.coeffs
    }

    pub fn expansion(&self) -> &Expansion {
        &self.inner
    }

    pub fn into_expansion(self) -> Expansion {
        self.inner
    }

    /// Multiply the whole distribution by `factor` (> 0).
    pub fn scaled(&self, factor: f64) -> MomentState {
        let mut e = self.inner.clone();
        e.coeffs.iter_mut().for_each(|c| *c *= factor);
        MomentState { inner: e }
    }

    /// True when f_{e_i} and sum_d f_{2e_d} vanish to `tol` relative size.
    pub fn is_adapted(&self, tol: f64) -> bool {
        let (fe, f2) = low_order(&self.inner.coeffs);
        let rho = self.rho();
        fe.iter().all(|x| x.abs() <= tol * rho) && f2.abs() <= tol * rho * self.theta()
    }
}

/// Macroscopic quantities of an adapted state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MacroQuantities {
    pub rho: f64,
    pub u: [f64; 3],
    pub theta: f64,
    pub sigma: [[f64; 3]; 3],
    pub q: [f64; 3],
}

impl MacroQuantities {
    pub fn equilibrium(rho: f64, u: [f64; 3], theta: f64) -> Self {
        MacroQuantities {
            rho,
            u,
            theta,
            sigma: [[0.0; 3]; 3],
            q: [0.0; 3],
        }
    }
}

/// sigma_ij = (1 + delta_ij) f_{e_i+e_j}, q_i = 2 f_{3e_i} + sum_d f_{2e_d+e_i}.
/// Coefficients beyond the state's order count as zero.
pub fn extract_macros(state: &MomentState) -> MacroQuantities {
    let c = state.coeffs();
    let mut sigma = [[0.0; 3]; 3];
    if c.len() >= basis_size(2) {
        for i in 0..3 {
            for j in 0..3 {
                let factor = if i == j { 2.0 } else { 1.0 };
                sigma[i][j] = factor * c[slots::pair(i, j)];
            }
        }
    }
    let mut q = [0.0; 3];
    if c.len() >= basis_size(3) {
        for (i, qi) in q.iter_mut().enumerate() {
            *qi = 2.0 * c[slots::triple(i, i, i)]
                + (0..3).map(|d| c[slots::triple(d, d, i)]).sum::<f64>();
        }
    }
    MacroQuantities {
        rho: state.rho(),
        u: state.u(),
        theta: state.theta(),
        sigma,
        q,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moment::MultiIndex;

    #[test]
    fn maxwellian_has_no_stress_or_heat_flux() {
        let s = MomentState::maxwellian(4, 1.0, [0.0; 3], 1.0).unwrap();
        let m = extract_macros(&s);
        assert_eq!(m.sigma, [[0.0; 3]; 3]);
        assert_eq!(m.q, [0.0; 3]);
        assert_eq!(m.rho, 1.0);
    }

    #[test]
    fn off_diagonal_stress_is_the_raw_coefficient() {
        let mut c = vec![0.0; basis_size(3)];
        c[0] = 1.0;
        c[MomentBasis::of(3).index_of(MultiIndex::new(1, 1, 0)).unwrap()] = 0.3;
        let s = MomentState::new([0.0; 3], 1.0, c).unwrap();
        let m = extract_macros(&s);
        assert_eq!(m.sigma[0][1], 0.3);
        assert_eq!(m.sigma[1][0], 0.3);
        assert_eq!(m.sigma[0][0], 0.0);
    }

    #[test]
    fn construction_rejects_non_positive_density() {
        let mut c = vec![0.0; basis_size(2)];
        c[0] = -0.1;
        assert!(matches!(
            MomentState::new([0.0; 3], 1.0, c),
            Err(Error::Realizability { .. })
        ));
        assert!(MomentState::maxwellian(2, 1.0, [0.0; 3], 0.0).is_err());
    }

    #[test]
    fn conserved_moments_of_a_drifting_maxwellian() {
        let e = Expansion::maxwellian(3, 2.0, [0.5, -1.0, 0.0], 1.5);
        let [rho, m1, m2, m3, en] = e.conserved_moments();
        assert_eq!(rho, 2.0);
        assert_eq!([m1, m2, m3], [1.0, -2.0, 0.0]);
        assert!((en - 0.5 * (2.0 * 1.25 + 3.0 * 2.0 * 1.5)).abs() < 1e-15);
    }
}
