//! Hermite coefficients of a series restricted to a half space in xi_1.
//!
//! Needed for kinetic wall fluxes: the distribution at a Maxwell wall is the
//! gas distribution for molecules flying into the wall and the wall
//! Maxwellian for re-emitted ones. Only the xi_1 direction is split, so the
//! other two directions use the ordinary full-space transform and the xi_1
//! direction uses a dense one-dimensional matrix built from half-line
//! integrals of products of normalised Hermite polynomials.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moment::hermite::normalized_hermite_table;
use crate::moment::projection::{convolve_direction, shift_series};
use crate::moment::{Expansion, MomentBasis, MultiIndex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HalfSpace {
    /// xi_1 > 0
    Positive,
    /// xi_1 < 0
    Negative,
}

fn std_normal_cdf(a: f64) -> f64 {
    0.5 * libm::erfc(-a / std::f64::consts::SQRT_2)
}

/// T[n][m] = theta_o^{n/2}/n! int_half p(xi) He_n(v_o) h_m(xi) dxi, where h_m is
/// the 1D basis function of degree m for (u_in, th_in) and p = xi or 1.
#[allow(clippy::too_many_arguments)]
fn line_matrix(
    u_in: f64,
    th_in: f64,
    u_out: f64,
    th_out: f64,
    n_max: usize,
    m_max: usize,
    side: HalfSpace,
    with_xi: bool,
) -> Vec<Vec<f64>> {
    let st_in = th_in.sqrt();
    let a = -u_in / st_in;
    let k_max = n_max + usize::from(with_xi);
    let he_a = normalized_hermite_table(k_max.max(m_max) + 1, a);
    let phi = (-0.5 * a * a).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let (s, k00) = match side {
        HalfSpace::Negative => (-1.0, std_normal_cdf(a)),
        HalfSpace::Positive => (1.0, std_normal_cdf(-a)),
    };

    // K[k][m] = int_half He^_k He^_m phi dv
    let mut kmat = vec![vec![0.0; m_max + 1]; k_max + 1];
    kmat[0][0] = k00;
    for m in 1..=m_max {
        kmat[0][m] = s * he_a[m - 1] * phi / (m as f64).sqrt();
    }
    for k in 1..=k_max {
        let rk = 1.0 / (k as f64).sqrt();
        for m in 0..=m_max {
            let mut v = s * he_a[k - 1] * he_a[m] * phi;
            if m >= 1 {
                v += (m as f64).sqrt() * kmat[k - 1][m - 1];
            }
            kmat[k][m] = rk * v;
        }
    }

    // Q_n = He^_n(c + sc v) in the He^_k(v) basis
    let c = (u_in - u_out) / th_out.sqrt();
    let sc = (th_in / th_out).sqrt();
    let times_v = |p: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; p.len() + 1];
        for (k, &pk) in p.iter().enumerate() {
            if pk == 0.0 {
                continue;
            }
            out[k + 1] += (k as f64 + 1.0).sqrt() * pk;
            if k >= 1 {
                out[k - 1] += (k as f64).sqrt() * pk;
            }
        }
        out
    };
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(n_max + 1);
    q.push(vec![1.0]);
    for n in 0..n_max {
        let vq = times_v(&q[n]);
        let mut next: Vec<f64> = vq.iter().map(|x| sc * x).collect();
        for (k, x) in q[n].iter().enumerate() {
            next[k] += c * x;
        }
        if n >= 1 {
            let rn = (n as f64).sqrt();
            for (k, x) in q[n - 1].iter().enumerate() {
                next[k] -= rn * x;
            }
        }
        let norm = 1.0 / (n as f64 + 1.0).sqrt();
        next.iter_mut().for_each(|x| *x *= norm);
        q.push(next);
    }

    let mut out = vec![vec![0.0; m_max + 1]; n_max + 1];
    let mut fact_n = 1.0_f64;
    for n in 0..=n_max {
        if n > 0 {
            fact_n *= n as f64;
        }
        let p: Vec<f64> = if with_xi {
            let vq = times_v(&q[n]);
            let mut p: Vec<f64> = vq.iter().map(|x| st_in * x).collect();
            for (k, x) in q[n].iter().enumerate() {
                p[k] += u_in * x;
            }
            p
        } else {
            q[n].clone()
        };
        let scale_n = th_out.powf(0.5 * n as f64) / fact_n.sqrt();
        let mut fact_m = 1.0_f64;
        for m in 0..=m_max {
            if m > 0 {
                fact_m *= m as f64;
            }
            let integral: f64 = p.iter().enumerate().map(|(k, pk)| pk * kmat[k][m]).sum();
            out[n][m] = scale_n * th_in.powf(-0.5 * m as f64) * fact_m.sqrt() * integral;
        }
    }
    out
}

/// Coefficients in F_{m_out}^{[u_out, theta_out]} of p(xi) 1{xi in side} e(xi),
/// with p = xi_1 when `with_xi` and p = 1 otherwise.
pub fn half_space_transform(
    e: &Expansion,
    side: HalfSpace,
    with_xi: bool,
    u_out: [f64; 3],
    theta_out: f64,
    m_out: usize,
) -> Result<Expansion> {
    if !(theta_out > 0.0) {
        return Err(Error::Domain(format!(
            "target temperature must be positive, got {theta_out}"
        )));
    }
    let m_in = e.order();
    let b_in = MomentBasis::of(m_in);
    let b_out = MomentBasis::of(m_out);
    let t = line_matrix(e.u[0], e.theta, u_out[0], theta_out, m_out, m_in, side, with_xi);

    let mut coeffs = vec![0.0; b_out.len()];
    for (j, b) in b_out.indices().iter().enumerate() {
        let [n, a2, a3] = b.0;
        if a2 + a3 > m_in {
            continue;
        }
        let row = &t[n];
        let mut acc = 0.0;
        for a1 in 0..=(m_in - a2 - a3) {
            let i = b_in.index_of(MultiIndex::new(a1, a2, a3)).unwrap();
            acc += row[a1] * e.coeffs[i];
        }
        coeffs[j] = acc;
    }
    let half_dtheta = 0.5 * (theta_out - e.theta);
    for d in 1..3 {
        let du = u_out[d] - e.u[d];
        if du == 0.0 && half_dtheta == 0.0 {
            continue;
        }
        let series = shift_series(du, half_dtheta, m_out);
        convolve_direction(&mut coeffs, b_out, d, &series);
    }
    Ok(Expansion::new(u_out, theta_out, coeffs))
}
