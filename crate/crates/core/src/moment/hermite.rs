//! Probabilists' Hermite polynomials and related one-dimensional helpers.

use std::sync::OnceLock;

use nalgebra::{DMatrix, SymmetricEigen};

use super::basis::MAX_ORDER;

/// He_n(x) by the three-term recurrence He_{n+1} = x He_n - n He_{n-1}.
pub fn hermite_eval(n: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = x;
    for k in 1..n {
        let next = x * cur - k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Normalised values He_k(x)/sqrt(k!) for k = 0..=n.
pub fn normalized_hermite_table(n: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n >= 1 {
        out.push(x);
    }
    for k in 1..n {
        let kf = k as f64;
        let next = (x * out[k] - kf.sqrt() * out[k - 1]) / (kf + 1.0).sqrt();
        out.push(next);
    }
    out
}

/// Largest root of He_n, n >= 1.
///
/// Newton's method started above the largest root converges monotonically
/// because all roots are real and simple.
pub fn largest_root(n: usize) -> f64 {
    assert!(n >= 1, "He_0 has no roots");
    if n == 1 {
        return 0.0;
    }
    let mut x = 2.0 * (n as f64).sqrt() + 1.0;
    for _ in 0..200 {
        let p = hermite_eval(n, x);
        let dp = n as f64 * hermite_eval(n - 1, x);
        let step = p / dp;
        x -= step;
        if step.abs() <= 1e-15 * x.abs() {
            break;
        }
    }
    x
}

/// Cached largest root of He_{order+1}, the dimensionless characteristic
/// speed bound of the order-`order` moment model.
pub fn characteristic_speed(order: usize) -> f64 {
    static CACHE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = CACHE.get_or_init(|| (0..=MAX_ORDER).map(|m| largest_root(m + 1)).collect());
    table[order]
}

/// Gauss quadrature rule for the standard normal weight
/// exp(-x^2/2)/sqrt(2 pi), computed by Golub-Welsch. Weights sum to one.
pub fn gauss_hermite_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let b = (k as f64).sqrt();
        jacobi[(k, k - 1)] = b;
        jacobi[(k - 1, k)] = b;
    }
    let eig = SymmetricEigen::new(jacobi);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    // one Newton polish per node keeps nodes accurate to roundoff
    for p in pairs.iter_mut() {
        let x = p.0;
        let step = hermite_eval(n, x) / (n as f64 * hermite_eval(n - 1, x));
        if step.is_finite() {
            p.0 = x - step;
        }
    }
    // symmetrise so that odd moments vanish exactly
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let x = 0.5 * (pairs[j].0 - pairs[i].0);
        let w = 0.5 * (pairs[j].1 + pairs[i].1);
        pairs[i] = (-x, w);
        pairs[j] = (x, w);
    }
    if n % 2 == 1 {
        pairs[n / 2].0 = 0.0;
    }
    let total: f64 = pairs.iter().map(|p| p.1).sum();
    pairs.into_iter().map(|(x, w)| (x, w / total)).unzip()
}
