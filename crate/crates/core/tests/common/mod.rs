//! Central finite differences on plain `f64` functions, used as an oracle
//! for the jet arithmetic.

#![allow(dead_code)]

use lbcv::jets::Jet2;

pub const FD_STEP: f64 = 1e-4;
pub const FD_REL_TOL: f64 = 1e-6;

fn shifted(c: [f64; 3], moves: &[(usize, f64)]) -> [f64; 3] {
    let mut out = c;
    for &(axis, h) in moves {
        out[axis] += h;
    }
    out
}

pub fn fd_gradient(f: &dyn Fn([f64; 3]) -> f64, c: [f64; 3], h: f64) -> [f64; 3] {
    std::array::from_fn(|a| (f(shifted(c, &[(a, h)])) - f(shifted(c, &[(a, -h)]))) / (2.0 * h))
}

pub fn fd_hessian(f: &dyn Fn([f64; 3]) -> f64, c: [f64; 3], h: f64) -> [[f64; 3]; 3] {
    std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            if a == b {
                (f(shifted(c, &[(a, h)])) - 2.0 * f(c) + f(shifted(c, &[(a, -h)]))) / (h * h)
            } else {
                (f(shifted(c, &[(a, h), (b, h)])) - f(shifted(c, &[(a, h), (b, -h)]))
                    - f(shifted(c, &[(a, -h), (b, h)]))
                    + f(shifted(c, &[(a, -h), (b, -h)])))
                    / (4.0 * h * h)
            }
        })
    })
}

/// Largest relative discrepancy between the jet and the finite differences,
/// each entry scaled by `max(1, |value|, |entry|)`.
pub fn jet_vs_fd(jet: &Jet2, f: &dyn Fn([f64; 3]) -> f64, c: [f64; 3]) -> f64 {
    let value = f(c);
    let scale = |e: f64| 1f64.max(value.abs()).max(e.abs());
    let mut worst = (jet.value() - value).abs() / scale(value);
    let g = fd_gradient(f, c, FD_STEP);
    let h = fd_hessian(f, c, FD_STEP);
    for a in 0..3 {
        worst = worst.max((jet.grad()[a] - g[a]).abs() / scale(g[a]));
        for b in 0..3 {
            worst = worst.max((jet.hess()[a][b] - h[a][b]).abs() / scale(h[a][b]));
        }
    }
    worst
}
