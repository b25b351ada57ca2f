//! Quadrature-oracle self check of the closed-form velocity-space routines.
//!
//! The routines under test are reached through [`Subject`], so a caller can
//! substitute a deliberately broken implementation and confirm the suite
//! notices.

use nalgebra::Matrix3;

use crate::error::Result;
use crate::kinetic::numerical_flux;
use crate::moment::projection::project_expansion;
use crate::moment::{
    adapt, equilibrium_coeffs, CollisionKind, CollisionModel, Expansion, MacroQuantities, MomentBasis,
    MomentState,
};
use crate::oracle::{maxwellian_density, VelocityMeasure};

/// The implementation being checked.
pub trait Subject: Sync {
    fn project(&self, e: &Expansion, u: [f64; 3], theta: f64, order: usize) -> Result<Expansion> {
        project_expansion(e, u, theta, order)
    }

    fn adapt(&self, e: &Expansion) -> Result<MomentState> {
        adapt(e)
    }

    fn equilibrium(&self, macros: &MacroQuantities, model: &CollisionModel, order: usize) -> Result<Vec<f64>> {
        equilibrium_coeffs(macros, model, order)
    }

    fn flux(&self, left: &Expansion, right: &Expansion, order: usize) -> Result<Expansion> {
        numerical_flux(left, right, order)
    }
}

/// This crate's routines.
pub struct Library;

impl Subject for Library {}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub order: usize,
    pub cases: usize,
    pub max_error: f64,
    pub tolerance: f64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.max_error <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }
}

pub const ORACLE_TOLERANCE: f64 = 1e-10;

/// Deterministic points in [0, 1) (additive recurrence on the golden ratio).
#[derive(Debug, Clone)]
pub struct Weyl {
    x: f64,
}

impl Weyl {
    pub fn new(seed: u32) -> Self {
        Weyl {
            x: (f64::from(seed) * std::f64::consts::SQRT_2).fract(),
        }
    }

    pub fn next_unit(&mut self) -> f64 {
        self.x = (self.x + 0.618_033_988_749_894_8).fract();
        self.x
    }

    /// Uniform in [lo, hi).
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_unit()
    }
}

/// A state in adapted form with coefficients decaying like `scale^{|alpha|}`.
pub fn sample_adapted_state(order: usize, g: &mut Weyl) -> MomentState {
    let rho = g.range(0.5, 1.5);
    let u = [g.range(-0.5, 0.5), g.range(-0.5, 0.5), g.range(-0.5, 0.5)];
    let theta = g.range(0.5, 1.5);
    let basis = MomentBasis::of(order);
    let mut c = vec![0.0; basis.len()];
    c[0] = rho;
    for (i, a) in basis.indices().iter().enumerate().skip(4) {
        c[i] = rho * g.range(-0.05, 0.05) * theta.powf(0.5 * a.degree() as f64) * 0.5_f64.powi(a.degree() as i32 - 2);
    }
    if order >= 2 {
        let diag = [4, 7, 9];
        let mean = diag.iter().map(|&i| c[i]).sum::<f64>() / 3.0;
        diag.iter().for_each(|&i| c[i] -= mean);
    }
    MomentState::new(u, theta, c).expect("sampled state is realizable")
}

/// Macroscopic state with small stress and heat flux (Lambda stays SPD).
pub fn sample_macros(g: &mut Weyl) -> MacroQuantities {
    let rho = g.range(0.5, 1.5);
    let theta = g.range(0.5, 1.5);
    let mut s = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in i..3 {
            let v = g.range(-0.15, 0.15) * rho * theta;
            s[i][j] = v;
            s[j][i] = v;
        }
    }
    let tr = (s[0][0] + s[1][1] + s[2][2]) / 3.0;
    (0..3).for_each(|i| s[i][i] -= tr);
    MacroQuantities {
        rho,
        u: [g.range(-0.5, 0.5), g.range(-0.5, 0.5), g.range(-0.5, 0.5)],
        theta,
        sigma: s,
        q: [g.range(-0.3, 0.3), g.range(-0.3, 0.3), g.range(-0.3, 0.3)],
    }
}

/// Point value of the Shakhov equilibrium
/// f_M [1 + (1 - Pr) q.c / (5 rho theta^2) (|c|^2/theta - 5)], c = xi - u.
pub fn shakhov_density(m: &MacroQuantities, pr: f64, xi: [f64; 3]) -> f64 {
    let c = [xi[0] - m.u[0], xi[1] - m.u[1], xi[2] - m.u[2]];
    let qc: f64 = (0..3).map(|d| m.q[d] * c[d]).sum();
    let c2: f64 = c.iter().map(|x| x * x).sum();
    maxwellian_density(m.rho, m.u, m.theta, xi)
        * (1.0 + (1.0 - pr) * qc / (5.0 * m.rho * m.theta * m.theta) * (c2 / m.theta - 5.0))
}

/// Covariance of the ES-BGK Gaussian: theta I + (1 - 1/Pr) sigma / rho.
pub fn es_covariance(m: &MacroQuantities, pr: f64) -> Matrix3<f64> {
    Matrix3::from_fn(|i, j| {
        let d = if i == j { m.theta } else { 0.0 };
        d + (1.0 - 1.0 / pr) * m.sigma[i][j] / m.rho
    })
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

struct Tally {
    name: &'static str,
    order: usize,
    cases: usize,
    err: f64,
}

impl Tally {
    fn new(name: &'static str, order: usize) -> Self {
        Tally {
            name,
            order,
            cases: 0,
            err: 0.0,
        }
    }

    fn add(&mut self, e: f64) {
        self.cases += 1;
        self.err = if e.is_nan() { f64::INFINITY } else { self.err.max(e) };
    }

    fn fail(&mut self) {
        self.add(f64::INFINITY);
    }

    fn done(self) -> CheckResult {
        CheckResult {
            name: self.name.to_string(),
            order: self.order,
            cases: self.cases,
            max_error: self.err,
            tolerance: ORACLE_TOLERANCE,
        }
    }
}

/// Checks at one order on `cases` deterministic samples.
pub fn check_order(subject: &dyn Subject, order: usize, cases: usize) -> Vec<CheckResult> {
    let nq = order + 6;
    let mut g = Weyl::new(order as u32 + 1);
    let mut proj = Tally::new("projection", order);
    let mut moments = Tally::new("projection conserved moments", order);
    let mut adapt_t = Tally::new("adapt", order);
    let mut flux = Tally::new("flux consistency", order);
    let mut bgk = Tally::new("equilibrium BGK", order);
    let mut shakhov = Tally::new("equilibrium Shakhov", order);
    let mut es = Tally::new("equilibrium ES-BGK", order);

    for _ in 0..cases {
        let s = sample_adapted_state(order, &mut g);
        let e = s.expansion();
        let measure = VelocityMeasure::from_expansion(e, nq);
        let u2 = [e.u[0] + g.range(-0.3, 0.3), e.u[1] + g.range(-0.3, 0.3), e.u[2] + g.range(-0.3, 0.3)];
        let th2 = e.theta * g.range(0.8, 1.25);

        let expected = measure.coefficients(order, u2, th2);
        match subject.project(e, u2, th2, order) {
            Ok(p) => proj.add(max_diff(&p.coeffs, &expected)),
            Err(_) => proj.fail(),
        }
        match subject.project(e, u2, th2, 2) {
            Ok(p) => moments.add(max_diff(&p.conserved_moments(), &measure.conserved_moments())),
            Err(_) => moments.fail(),
        }

        // adapt a series the library never produced: oracle coefficients off-centre
        let raw = Expansion::new(u2, th2, expected);
        match subject.adapt(&raw) {
            Ok(a) => {
                let mut err = max_diff(a.coeffs(), s.coeffs());
                err = err.max(max_diff(&a.u(), &s.u())).max((a.theta() - s.theta()).abs());
                adapt_t.add(err);
            }
            Err(_) => adapt_t.fail(),
        }

        match subject.flux(e, e, order) {
            Ok(f) => {
                let oracle = measure.times(|x| x[0]).coefficients(order, f.u, f.theta);
                flux.add(max_diff(&f.coeffs, &oracle));
            }
            Err(_) => flux.fail(),
        }

        let m = sample_macros(&mut g);
        let pr = 2.0 / 3.0;
        let gauss = VelocityMeasure::from_function(|x| maxwellian_density(m.rho, m.u, m.theta, x), m.u, m.theta, nq);
        match subject.equilibrium(&m, &CollisionModel::bgk(), order) {
            Ok(c) => bgk.add(max_diff(&c, &gauss.coefficients(order, m.u, m.theta))),
            Err(_) => bgk.fail(),
        }
        if order >= 3 {
            let model = CollisionModel::new(CollisionKind::Shakhov, pr).unwrap();
            let oracle = VelocityMeasure::from_function(|x| shakhov_density(&m, pr, x), m.u, m.theta, nq)
                .coefficients(order, m.u, m.theta);
            match subject.equilibrium(&m, &model, order) {
                Ok(c) => shakhov.add(max_diff(&c, &oracle)),
                Err(_) => shakhov.fail(),
            }
        }
        let model = CollisionModel::new(CollisionKind::EsBgk, pr).unwrap();
        let oracle = VelocityMeasure::anisotropic_gaussian(m.rho, m.u, es_covariance(&m, pr), nq)
            .coefficients(order, m.u, m.theta);
        match subject.equilibrium(&m, &model, order) {
            Ok(c) => es.add(max_diff(&c, &oracle)),
            Err(_) => es.fail(),
        }
    }
    let mut out = vec![proj.done(), moments.done(), adapt_t.done(), flux.done(), bgk.done()];
    if order >= 3 {
        out.push(shakhov.done());
    }
    out.push(es.done());
    debug_assert!(out.iter().all(|c| c.cases == cases));
    out
}

/// The full suite over `orders`.
pub fn run_oracle_suite(subject: &dyn Subject, orders: &[usize], cases: usize) -> VerifyReport {
    VerifyReport {
        checks: orders.iter().flat_map(|&m| check_order(subject, m, cases)).collect(),
    }
}
