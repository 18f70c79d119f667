//! Truncated Taylor jets in the three coordinates `(x, y, z)`.
//!
//! [`Jet2`] carries a value, its gradient and its (symmetric) Hessian, and
//! propagates them exactly through arithmetic and `sin`/`cos`. [`Jet1`] is
//! the first-order counterpart; it is what remains after differentiating a
//! `Jet2` once, and the frame geometry uses it for structure functions and
//! connection coefficients whose own derivatives enter the curvature.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};
use crate::geometry::FramePoint;

/// Coordinate axis of the ambient `R^3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    #[inline]
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

/// Binary arithmetic selector for [`jet_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    /// Negates the first operand; the second is ignored.
    Neg,
}

/// Elementary function selector for [`jet_elementary`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Elementary {
    Sin,
    Cos,
}

/// First-order jet: value and gradient.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Jet1 {
    pub value: f64,
    pub grad: [f64; 3],
}

impl Jet1 {
    pub fn constant(value: f64) -> Self {
        Jet1 {
            value,
            grad: [0.0; 3],
        }
    }

    pub fn recip(self) -> Self {
        let inv = 1.0 / self.value;
        let d = -inv * inv;
        Jet1 {
            value: inv,
            grad: self.grad.map(|g| d * g),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite() && self.grad.iter().all(|g| g.is_finite())
    }
}

/// Second-order jet: value, gradient `(∂x, ∂y, ∂z)` and symmetric Hessian.
///
/// The Hessian is symmetrized on construction and every operation preserves
/// exact symmetry, so `hess()[i][j] == hess()[j][i]` bit for bit.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Jet2 {
    value: f64,
    grad: [f64; 3],
    hess: [[f64; 3]; 3],
}

impl Jet2 {
    /// Builds a jet, averaging the off-diagonal Hessian pairs.
    pub fn new(value: f64, grad: [f64; 3], hess: [[f64; 3]; 3]) -> Self {
        let mut h = hess;
        for i in 0..3 {
            for j in (i + 1)..3 {
                let s = 0.5 * (hess[i][j] + hess[j][i]);
                h[i][j] = s;
                h[j][i] = s;
            }
        }
        Jet2 {
            value,
            grad,
            hess: h,
        }
    }

    pub fn constant(value: f64) -> Self {
        Jet2 {
            value,
            ..Default::default()
        }
    }

    /// The coordinate function for `axis`, seeded at `p`.
    pub fn coordinate(axis: Axis, p: &FramePoint) -> Self {
        let mut grad = [0.0; 3];
        grad[axis.index()] = 1.0;
        Jet2 {
            value: p.coords()[axis.index()],
            grad,
            hess: [[0.0; 3]; 3],
        }
    }

    /// The three coordinate jets `(x, y, z)` at `p`.
    pub fn variables(p: &FramePoint) -> [Jet2; 3] {
        Axis::ALL.map(|a| Jet2::coordinate(a, p))
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.value
    }

    #[inline]
    pub fn grad(&self) -> [f64; 3] {
        self.grad
    }

    #[inline]
    pub fn hess(&self) -> [[f64; 3]; 3] {
        self.hess
    }

    #[inline]
    pub fn d(&self, axis: Axis) -> f64 {
        self.grad[axis.index()]
    }

    #[inline]
    pub fn d2(&self, a: Axis, b: Axis) -> f64 {
        self.hess[a.index()][b.index()]
    }

    /// Drops the Hessian.
    pub fn lower(&self) -> Jet1 {
        Jet1 {
            value: self.value,
            grad: self.grad,
        }
    }

    /// `∂f/∂axis` as a first-order jet (its gradient is the Hessian row).
    pub fn partial(&self, axis: Axis) -> Jet1 {
        let i = axis.index();
        Jet1 {
            value: self.grad[i],
            grad: self.hess[i],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
            && self.grad.iter().all(|g| g.is_finite())
            && self.hess.iter().flatten().all(|h| h.is_finite())
    }

    /// Pushes the jet through a scalar function given its first two derivatives.
    fn chain(&self, f: f64, df: f64, d2f: f64) -> Self {
        let g = self.grad;
        let mut hess = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in i..3 {
                let h = d2f * g[i] * g[j] + df * self.hess[i][j];
                hess[i][j] = h;
                hess[j][i] = h;
            }
        }
        Jet2 {
            value: f,
            grad: g.map(|gi| df * gi),
            hess,
        }
    }

    pub fn sin(&self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.chain(s, c, -s)
    }

    pub fn cos(&self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.chain(c, -s, -c)
    }

    pub fn square(&self) -> Self {
        *self * *self
    }

    /// `1/f`. Produces non-finite entries when the value is zero; see
    /// [`Jet2::checked_div`] for the fallible form.
    pub fn recip(&self) -> Self {
        let inv = 1.0 / self.value;
        self.chain(inv, -inv * inv, 2.0 * inv * inv * inv)
    }

    pub fn checked_div(&self, rhs: &Jet2) -> Result<Jet2> {
        if rhs.value == 0.0 || !rhs.value.is_finite() {
            return Err(Error::ZeroDenominator { denominator: *rhs });
        }
        Ok(*self * rhs.recip())
    }
}

impl fmt::Display for Jet2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Jet2(value={}, grad={:?}, hess={:?})",
            self.value, self.grad, self.hess
        )
    }
}

/// `a op b` on 2-jets. Division by a jet whose value is zero is an error.
pub fn jet_arith(op: ArithOp, a: Jet2, b: Jet2) -> Result<Jet2> {
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.checked_div(&b)?,
        ArithOp::Neg => -a,
    })
}

pub fn jet_elementary(fun: Elementary, a: Jet2) -> Jet2 {
    match fun {
        Elementary::Sin => a.sin(),
        Elementary::Cos => a.cos(),
    }
}

pub fn jet_coordinate(axis: Axis, p: &FramePoint) -> Jet2 {
    Jet2::coordinate(axis, p)
}

/// A smooth function on the domain, evaluated together with its partials.
pub trait ScalarField: Send + Sync {
    fn eval(&self, p: &FramePoint) -> Jet2;
}

impl<F> ScalarField for F
where
    F: Fn(&FramePoint) -> Jet2 + Send + Sync,
{
    fn eval(&self, p: &FramePoint) -> Jet2 {
        self(p)
    }
}

macro_rules! impl_jet_ops {
    ($jet:ident, $add:expr, $mul:expr) => {
        impl Add for $jet {
            type Output = $jet;
            fn add(self, rhs: $jet) -> $jet {
                $add(self, rhs, 1.0)
            }
        }

        impl Sub for $jet {
            type Output = $jet;
            fn sub(self, rhs: $jet) -> $jet {
                $add(self, rhs, -1.0)
            }
        }

        impl Mul for $jet {
            type Output = $jet;
            fn mul(self, rhs: $jet) -> $jet {
                $mul(self, rhs)
            }
        }

        impl Div for $jet {
            type Output = $jet;
            fn div(self, rhs: $jet) -> $jet {
                self * rhs.recip()
            }
        }

        impl AddAssign for $jet {
            fn add_assign(&mut self, rhs: $jet) {
                *self = *self + rhs;
            }
        }

        impl SubAssign for $jet {
            fn sub_assign(&mut self, rhs: $jet) {
                *self = *self - rhs;
            }
        }

        impl Add<f64> for $jet {
            type Output = $jet;
            fn add(mut self, rhs: f64) -> $jet {
                self.value += rhs;
                self
            }
        }

        impl Sub<f64> for $jet {
            type Output = $jet;
            fn sub(mut self, rhs: f64) -> $jet {
                self.value -= rhs;
                self
            }
        }

        impl Add<$jet> for f64 {
            type Output = $jet;
            fn add(self, rhs: $jet) -> $jet {
                rhs + self
            }
        }

        impl Sub<$jet> for f64 {
            type Output = $jet;
            fn sub(self, rhs: $jet) -> $jet {
                -rhs + self
            }
        }

        impl Mul<$jet> for f64 {
            type Output = $jet;
            fn mul(self, rhs: $jet) -> $jet {
                rhs * self
            }
        }

        impl Div<f64> for $jet {
            type Output = $jet;
            fn div(self, rhs: f64) -> $jet {
                self * (1.0 / rhs)
            }
        }

        impl std::iter::Sum for $jet {
            fn sum<I: Iterator<Item = $jet>>(iter: I) -> $jet {
                iter.fold($jet::constant(0.0), |acc, j| acc + j)
            }
        }
    };
}

impl_jet_ops!(
    Jet1,
    |a: Jet1, b: Jet1, s: f64| Jet1 {
        value: a.value + s * b.value,
        grad: std::array::from_fn(|i| a.grad[i] + s * b.grad[i]),
    },
    |a: Jet1, b: Jet1| Jet1 {
        value: a.value * b.value,
        grad: std::array::from_fn(|i| a.grad[i] * b.value + a.value * b.grad[i]),
    }
);

impl_jet_ops!(
    Jet2,
    |a: Jet2, b: Jet2, s: f64| Jet2 {
        value: a.value + s * b.value,
        grad: std::array::from_fn(|i| a.grad[i] + s * b.grad[i]),
        hess: std::array::from_fn(|i| std::array::from_fn(|j| a.hess[i][j] + s * b.hess[i][j])),
    },
    |a: Jet2, b: Jet2| {
        let mut hess = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in i..3 {
                let h = a.hess[i][j] * b.value
                    + a.value * b.hess[i][j]
                    + a.grad[i] * b.grad[j]
                    + a.grad[j] * b.grad[i];
                hess[i][j] = h;
                hess[j][i] = h;
            }
        }
        Jet2 {
            value: a.value * b.value,
            grad: std::array::from_fn(|i| a.grad[i] * b.value + a.value * b.grad[i]),
            hess,
        }
    }
);

impl Neg for Jet1 {
    type Output = Jet1;
    fn neg(self) -> Jet1 {
        Jet1 {
            value: -self.value,
            grad: self.grad.map(|g| -g),
        }
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        Jet2 {
            value: -self.value,
            grad: self.grad.map(|g| -g),
            hess: self.hess.map(|row| row.map(|h| -h)),
        }
    }
}

impl Mul<f64> for Jet1 {
    type Output = Jet1;
    fn mul(self, rhs: f64) -> Jet1 {
        Jet1 {
            value: self.value * rhs,
            grad: self.grad.map(|g| g * rhs),
        }
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: f64) -> Jet2 {
        Jet2 {
            value: self.value * rhs,
            grad: self.grad.map(|g| g * rhs),
            hess: self.hess.map(|row| row.map(|h| h * rhs)),
        }
    }
}
