//! Seeded generators for parameters, coefficients and test fields.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catalog::CoefficientSet;
use crate::geometry::{FramePoint, SpaceParams};
use crate::jets::{Jet2, ScalarField};
use crate::soliton::VectorField;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform `(λ, μ)` in `[lo, hi]²`.
pub fn random_params(rng: &mut impl Rng, lo: f64, hi: f64) -> SpaceParams {
    SpaceParams::new(rng.gen_range(lo..=hi), rng.gen_range(lo..=hi)).expect("finite")
}

/// Six coefficients uniform in `[-scale, scale]`.
pub fn random_coefficients(rng: &mut impl Rng, scale: f64) -> CoefficientSet {
    CoefficientSet(std::array::from_fn(|_| rng.gen_range(-scale..=scale)))
}

/// Exponents of the monomials in three variables of total degree at most `degree`,
/// in graded lexicographic order.
pub fn monomials(degree: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for total in 0..=degree {
        for i in (0..=total).rev() {
            for j in (0..=(total - i)).rev() {
                out.push([i, j, total - i - j]);
            }
        }
    }
    out
}

/// `x^i y^j z^k` as a jet.
pub fn monomial_jet(exp: [u32; 3], p: &FramePoint) -> Jet2 {
    let vars = Jet2::variables(p);
    let mut out = Jet2::constant(1.0);
    for (v, &e) in vars.iter().zip(exp.iter()) {
        for _ in 0..e {
            out = out * *v;
        }
    }
    out
}

/// A polynomial plus a plane wave:
/// `Σ c_m x^i y^j z^k + amp · sin(k·(x, y, z) + phase)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyTrig {
    pub terms: Vec<([u32; 3], f64)>,
    pub amplitude: f64,
    pub wave: [f64; 3],
    pub phase: f64,
}

impl PolyTrig {
    pub fn polynomial(terms: Vec<([u32; 3], f64)>) -> Self {
        PolyTrig {
            terms,
            amplitude: 0.0,
            wave: [0.0; 3],
            phase: 0.0,
        }
    }

    /// Degree ≤ 2 polynomial with coefficients in `[-1, 1]` and a wave with
    /// amplitude in `[-1, 1]` and wave numbers in `[-2, 2]`.
    pub fn random(rng: &mut impl Rng) -> Self {
        PolyTrig {
            terms: monomials(2)
                .into_iter()
                .map(|m| (m, rng.gen_range(-1.0..=1.0)))
                .collect(),
            amplitude: rng.gen_range(-1.0..=1.0),
            wave: std::array::from_fn(|_| rng.gen_range(-2.0..=2.0)),
            phase: rng.gen_range(0.0..std::f64::consts::TAU),
        }
    }

    /// Plain evaluation, independent of the jet machinery.
    pub fn value_at(&self, c: [f64; 3]) -> f64 {
        let poly: f64 = self
            .terms
            .iter()
            .map(|(e, a)| a * c[0].powi(e[0] as i32) * c[1].powi(e[1] as i32) * c[2].powi(e[2] as i32))
            .sum();
        let arg = self.wave[0] * c[0] + self.wave[1] * c[1] + self.wave[2] * c[2] + self.phase;
        poly + self.amplitude * arg.sin()
    }
}

impl ScalarField for PolyTrig {
    fn eval(&self, p: &FramePoint) -> Jet2 {
        let poly: Jet2 = self
            .terms
            .iter()
            .map(|&(e, a)| monomial_jet(e, p) * a)
            .sum();
        if self.amplitude == 0.0 {
            return poly;
        }
        let [x, y, z] = Jet2::variables(p);
        let arg = x * self.wave[0] + y * self.wave[1] + z * self.wave[2] + self.phase;
        poly + arg.sin() * self.amplitude
    }
}

/// A random polynomial-plus-wave vector field.
pub fn random_field(rng: &mut impl Rng) -> VectorField {
    let comps: [Arc<dyn ScalarField>; 3] = std::array::from_fn(|_| {
        Arc::new(PolyTrig::random(rng)) as Arc<dyn ScalarField>
    });
    VectorField::from_arcs(comps)
}

/// Random expression trees for exercising the jet arithmetic.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Var(usize),
    Const(f64),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// `a / (1 + b²)`, bounded away from a zero denominator.
    DivSafe(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
}

impl Expr {
    pub fn random(rng: &mut impl Rng, depth: u32) -> Expr {
        if depth == 0 || rng.gen_bool(0.2) {
            return if rng.gen_bool(0.7) {
                Expr::Var(rng.gen_range(0..3))
            } else {
                Expr::Const(rng.gen_range(-2.0..=2.0))
            };
        }
        let op = rng.gen_range(0..7);
        let mut sub = || Box::new(Expr::random(rng, depth - 1));
        match op {
            0 => Expr::Add(sub(), sub()),
            1 => Expr::Sub(sub(), sub()),
            2 => Expr::Mul(sub(), sub()),
            3 => Expr::DivSafe(sub(), sub()),
            4 => Expr::Neg(sub()),
            5 => Expr::Sin(sub()),
            _ => Expr::Cos(sub()),
        }
    }

    pub fn value_at(&self, c: [f64; 3]) -> f64 {
        match self {
            Expr::Var(i) => c[*i],
            Expr::Const(v) => *v,
            Expr::Add(a, b) => a.value_at(c) + b.value_at(c),
            Expr::Sub(a, b) => a.value_at(c) - b.value_at(c),
            Expr::Mul(a, b) => a.value_at(c) * b.value_at(c),
            Expr::DivSafe(a, b) => {
                let d = b.value_at(c);
                a.value_at(c) / (1.0 + d * d)
            }
            Expr::Neg(a) => -a.value_at(c),
            Expr::Sin(a) => a.value_at(c).sin(),
            Expr::Cos(a) => a.value_at(c).cos(),
        }
    }

    pub fn jet(&self, p: &FramePoint) -> Jet2 {
        match self {
            Expr::Var(i) => Jet2::variables(p)[*i],
            Expr::Const(v) => Jet2::constant(*v),
            Expr::Add(a, b) => a.jet(p) + b.jet(p),
            Expr::Sub(a, b) => a.jet(p) - b.jet(p),
            Expr::Mul(a, b) => a.jet(p) * b.jet(p),
            Expr::DivSafe(a, b) => {
                let d = b.jet(p);
                a.jet(p) / (d * d + 1.0)
            }
            Expr::Neg(a) => -a.jet(p),
            Expr::Sin(a) => a.jet(p).sin(),
            Expr::Cos(a) => a.jet(p).cos(),
        }
    }
}

impl ScalarField for Expr {
    fn eval(&self, p: &FramePoint) -> Jet2 {
        self.jet(p)
    }
}
