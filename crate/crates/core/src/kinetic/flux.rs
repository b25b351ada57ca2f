use crate::error::Result;
use crate::moment::hermite::characteristic_speed;
use crate::moment::projection::project_expansion;
use crate::moment::{basis_size, MultiIndex};
use crate::moment::{Expansion, MomentState};

/// Coefficients of xi_1 f truncated at the series' own order:
/// (F f)_alpha = theta f_{alpha-e1} + u_1 f_alpha + (alpha_1 + 1) f_{alpha+e1}.
pub fn physical_flux(e: &Expansion) -> Expansion {
    let mut out = e.clone();
    transport_into(e, &mut out.coeffs);
    out
}

/// Same as [`physical_flux`], overwriting `e` with its flux.
pub fn transport_in_place(e: &mut Expansion) {
    let src = e.coeffs.clone();
    let tmp = Expansion {
        u: e.u,
        theta: e.theta,
        coeffs: src,
    };
    transport_into(&tmp, &mut e.coeffs);
}

fn transport_into(e: &Expansion, out: &mut [f64]) {
    let basis = e.basis();
    let lower = basis.lower_raw(0);
    let upper = basis.upper_raw(0);
    let c = &e.coeffs;
    let (u1, theta) = (e.u[0], e.theta);
    for i in 0..c.len() {
        let mut v = u1 * c[i];
        let lo = lower[i];
        if lo != usize::MAX {
            v += theta * c[lo];
        }
        let up = upper[i];
        if up != usize::MAX {
            v += (basis.multi_index(i).0[0] + 1) as f64 * c[up];
        }
        out[i] = v;
    }
}

/// Order-M terms that the conservative flux difference carries but the
/// hyperbolic moment model drops, for |alpha| = M:
/// (alpha_1 + 1) [sum_d f_{alpha-e_d+e_1} du_d + theta'/2 sum_d f_{alpha-2e_d+e_1}].
/// Subtracting them from the cell residual restores global hyperbolicity.
/// Models of order below 3 are left alone so every conserved moment stays in
/// divergence form.
pub fn regularization_into(e: &Expansion, grad_u: [f64; 3], grad_theta: f64, out: &mut [f64]) {
    let basis = e.basis();
    let order = basis.order();
    if order < 3 {
        return;
    }
    let start = basis_size(order - 1);
    for (i, o) in out.iter_mut().enumerate().skip(start) {
        let a = basis.multi_index(i).0;
        let mut v = 0.0;
        for d in 0..3 {
            let mut b = a;
            b[0] += 1;
            if b[d] >= 1 {
                b[d] -= 1;
                v += grad_u[d] * e.coeffs[basis.index_of(MultiIndex(b)).unwrap()];
            }
            let mut b = a;
            b[0] += 1;
            if b[d] >= 2 {
                b[d] -= 2;
                v += 0.5 * grad_theta * e.coeffs[basis.index_of(MultiIndex(b)).unwrap()];
            }
        }
        *o = (a[0] + 1) as f64 * v;
    }
}

/// |u_1| + c_{M+1} sqrt(theta), with c_{M+1} the largest root of He_{M+1}.
pub fn max_wave_speed(state: &MomentState) -> f64 {
    state.u()[0].abs() + characteristic_speed(state.order()) * state.theta().sqrt()
}

fn wave_bounds(e: &Expansion, order: usize) -> (f64, f64) {
    let c = characteristic_speed(order) * e.theta.sqrt();
    (e.u[0] - c, e.u[0] + c)
}

/// HLL flux between two edge states of order `order`, expressed in the basis
/// whose velocity and temperature are the arithmetic means of the two states'.
pub fn numerical_flux(left: &Expansion, right: &Expansion, order: usize) -> Result<Expansion> {
    let u = [
        0.5 * (left.u[0] + right.u[0]),
        0.5 * (left.u[1] + right.u[1]),
        0.5 * (left.u[2] + right.u[2]),
    ];
    let theta = 0.5 * (left.theta + right.theta);
    let (ll, lr) = wave_bounds(left, order);
    let (rl, rr) = wave_bounds(right, order);
    let lam_l = ll.min(rl);
    let lam_r = lr.max(rr);

    let fl = project_expansion(left, u, theta, order)?;
    if lam_l >= 0.0 {
        return Ok(physical_flux(&fl));
    }
    let fr = project_expansion(right, u, theta, order)?;
    if lam_r <= 0.0 || fl.coeffs == fr.coeffs {
        return Ok(physical_flux(&fr));
    }
    // F_hll = A (lam_r f_l - lam_l f_r)/(lam_r - lam_l) + lam_l lam_r (f_r - f_l)/(lam_r - lam_l),
    // with A the (linear) transport map in the common basis
    let inv = 1.0 / (lam_r - lam_l);
    let mut mix = fl.clone();
    for (m, (a, b)) in mix.coeffs.iter_mut().zip(fl.coeffs.iter().zip(&fr.coeffs)) {
        *m = (lam_r * a - lam_l * b) * inv;
    }
    let mut flux = physical_flux(&mix);
    let diss = lam_l * lam_r * inv;
    for (f, (a, b)) in flux.coeffs.iter_mut().zip(fl.coeffs.iter().zip(&fr.coeffs)) {
        *f += diss * (b - a);
    }
    Ok(flux)
}
