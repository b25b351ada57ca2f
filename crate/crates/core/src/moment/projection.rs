//! Change of expansion centre between Hermite bases.
//!
//! With H_alpha^{[u,theta]} = (-d/dxi)^alpha of the Maxwellian with
//! parameters (u, theta), moving the centre by (du, dtheta) acts on the
//! coefficient vector as exp(-sum_d (du_d S_d + dtheta/2 S_d^2)), where S_d
//! maps f_alpha to f_{alpha-e_d}. The operator only lowers indices, so the
//! map is triangular in |alpha|: truncating at any order preserves every
//! velocity moment up to that order. The exponential factorises over the
//! three velocity directions, giving one 1D convolution per direction.

use super::basis::{basis_size, MomentBasis, MAX_ORDER};
use super::state::{Expansion, MomentState};
use crate::error::{Error, Result};

/// Taylor coefficients of exp(-(a t + b t^2)) up to t^n.
pub(crate) fn shift_series(a: f64, b: f64, n: usize) -> Vec<f64> {
    let mut c = Vec::with_capacity(n + 1);
    c.push(1.0);
    if n >= 1 {
        c.push(-a);
    }
    for k in 1..n {
        let next = (-a * c[k] - 2.0 * b * c[k - 1]) / (k as f64 + 1.0);
        c.push(next);
    }
    c
}

/// In-place convolution along direction `d`:
/// g_alpha = sum_k series[k] f_{alpha - k e_d}.
pub(crate) fn convolve_direction(coeffs: &mut [f64], basis: &MomentBasis, d: usize, series: &[f64]) {
    let lines = basis.lines(d);
    let mut buf = [0.0; MAX_ORDER + 1];
    for w in lines.start.windows(2) {
        let line = &lines.idx[w[0]..w[1]];
        let len = line.len();
        if len < 2 {
            continue;
        }
        let b = &mut buf[..len];
        for (x, &i) in b.iter_mut().zip(line) {
            *x = coeffs[i];
        }
        let tail = &series[1..len];
        for (n, &i) in line.iter().enumerate().skip(1) {
            let acc = tail[..n]
                .iter()
                .zip(b[..n].iter().rev())
                .fold(b[n], |a, (s, f)| a + s * f);
            coeffs[i] = acc;
        }
    }
}

/// Re-express coefficients given in basis [u_old, theta_old] in basis
/// [u_new, theta_new], in place. `coeffs.len()` must be a basis size.
pub(crate) fn transform_in_place(
    coeffs: &mut [f64],
    order: usize,
    u_old: [f64; 3],
    theta_old: f64,
    u_new: [f64; 3],
    theta_new: f64,
) {
    let basis = MomentBasis::of(order);
    debug_assert_eq!(coeffs.len(), basis.len());
    let half_dtheta = 0.5 * (theta_new - theta_old);
    for d in 0..3 {
        let du = u_new[d] - u_old[d];
        if du == 0.0 && half_dtheta == 0.0 {
            continue;
        }
        let series = shift_series(du, half_dtheta, order);
        convolve_direction(coeffs, basis, d, &series);
    }
}

/// Coefficients of `src` in basis [u_new, theta_new], truncated at `m_out`.
pub fn project_expansion(src: &Expansion, u_new: [f64; 3], theta_new: f64, m_out: usize) -> Result<Expansion> {
    if !(theta_new > 0.0) {
        return Err(Error::Domain(format!(
            "target temperature must be positive, got {theta_new}"
        )));
    }
    let m_in = src.order();
    if m_out > m_in {
        return Err(Error::Domain(format!(
            "cannot project order {m_in} up to order {m_out}"
        )));
    }
    let mut coeffs = src.coeffs[..basis_size(m_out)].to_vec();
    transform_in_place(&mut coeffs, m_out, src.u, src.theta, u_new, theta_new);
    Ok(Expansion::new(u_new, theta_new, coeffs))
}

/// Moment-preserving transformation of `state` into F_{m_out}^{[u_new, theta_new]}.
pub fn project_to_params(state: &MomentState, u_new: [f64; 3], theta_new: f64, m_out: usize) -> Result<MomentState> {
    let e = project_expansion(state.expansion(), u_new, theta_new, m_out)?;
    MomentState::from_expansion(e)
}

/// Mean velocity and temperature of a series, computed from its own
/// density, first- and second-order coefficients.
pub(crate) fn own_parameters(e: &Expansion) -> Result<(f64, [f64; 3], f64)> {
    let c = &e.coeffs;
    let rho = c[0];
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::realizability(rho, f64::NAN));
    }
    if c.len() < basis_size(2) {
        return Err(Error::Domain("adaptation needs order >= 2".into()));
    }
    let basis = MomentBasis::of(2);
    let mut du = [0.0; 3];
    for (d, x) in du.iter_mut().enumerate() {
        *x = c[1 + d] / rho;
    }
    let trace: f64 = (0..3)
        .map(|d| c[basis.index_of(super::MultiIndex(two_e(d))).unwrap()])
        .sum();
    let du2: f64 = du.iter().map(|x| x * x).sum();
    let theta = e.theta + 2.0 * trace / (3.0 * rho) - du2 / 3.0;
    if !(theta > 0.0) || !theta.is_finite() {
        return Err(Error::realizability(rho, theta));
    }
    let u = [e.u[0] + du[0], e.u[1] + du[1], e.u[2] + du[2]];
    Ok((rho, u, theta))
}

fn two_e(d: usize) -> [usize; 3] {
    let mut a = [0; 3];
    a[d] = 2;
    a
}

/// Move a series into the basis centred at its own mean velocity and
/// temperature, so that f_{e_i} = 0 and sum_d f_{2e_d} = 0 afterwards.
pub fn adapt(raw: &Expansion) -> Result<MomentState> {
    let (_, u, theta) = own_parameters(raw)?;
    let order = raw.order();
    let mut coeffs = raw.coeffs.clone();
    transform_in_place(&mut coeffs, order, raw.u, raw.theta, u, theta);
    // remove roundoff left in the constrained slots
    let basis = MomentBasis::of(2);
    for c in coeffs.iter_mut().skip(1).take(3) {
        *c = 0.0;
    }
    let diag: Vec<usize> = (0..3)
        .map(|d| basis.index_of(super::MultiIndex(two_e(d))).unwrap())
        .collect();
    let mean = diag.iter().map(|&i| coeffs[i]).sum::<f64>() / 3.0;
    for &i in &diag {
        coeffs[i] -= mean;
    }
    MomentState::from_expansion(Expansion::new(u, theta, coeffs))
}
