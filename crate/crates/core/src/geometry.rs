//! The Lorentzian Bianchi-Cartan-Vranceanu family `M(λ, μ)`.
//!
//! On `D = {(x, y, z) : δ = 1 + μ(x² + y²) > 0}` the metric
//!
//! ```text
//! g = (dx² + dy²)/δ² − (dz + (λ/2)(y dx − x dy)/δ)²
//! ```
//!
//! has the orthonormal frame
//!
//! ```text
//! E1 = δ ∂x − (λy/2) ∂z,   E2 = δ ∂y + (λx/2) ∂z,   E3 = ∂z
//! ```
//!
//! with `g(Ei, Ej) = diag(1, 1, −1)`. Everything below is computed from the
//! frame coefficient functions with jets: structure functions from the
//! coordinate bracket, the Levi-Civita connection from the Koszul formula in
//! the anholonomic frame, and the curvature from the connection. The
//! [`tables`] module holds the closed forms these are checked against.
//!
//! # Curvature conventions
//!
//! The curvature operator is `R(X,Y)Z = ∇X∇Y Z − ∇Y∇X Z − ∇[X,Y] Z`. Components
//! are reported as `R_ijkl = g(R(Ei,Ej)El, Ek)`, i.e. the negative of
//! `g(R(Ei,Ej)Ek, El)`; with this single sign the nonzero components are
//! `R1212 = 4μ + 3λ²/4` and `R1313 = R2323 = λ²/4`.
//!
//! The normative Ricci tensor is `ρ = diag(4μ + λ², 4μ + λ², 0)` ([`ricci`]).
//! Contracting the curvature with unit weights, `ρ_ab = Σ_k R_akbk`
//! ([`ContractionWeights::Unit`]), reproduces `ρ11`, `ρ22` and the vanishing
//! off-diagonal entries, but yields `ρ33 = λ²/2`. No placement of signature
//! weights gives `ρ33 = 0` while keeping `ρ11 = ρ22` for `λ ≠ 0`. The metric
//! trace ([`ContractionWeights::Signature`]) gives the Ricci tensor of the
//! metric itself, `diag(4μ + λ²/2, 4μ + λ²/2, λ²/2)`.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::jets::{Jet1, Jet2, ScalarField};

/// Frame metric `η = diag(1, 1, −1)`.
pub const ETA: [f64; 3] = [1.0, 1.0, -1.0];

/// The constant frame metric `g(Ei, Ej) = εi δij`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricSignature;

impl MetricSignature {
    pub fn eps(self, i: usize) -> f64 {
        ETA[i]
    }

    pub fn inner(self, a: &FrameVector, b: &FrameVector) -> f64 {
        (0..3).map(|i| ETA[i] * a.0[i] * b.0[i]).sum()
    }
}

/// Parameters `(λ, μ)` of the family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpaceParams {
    lambda: f64,
    mu: f64,
}

impl SpaceParams {
    pub fn new(lambda: f64, mu: f64) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(Error::NonFinite {
                name: "lambda",
                value: lambda,
            });
        }
        if !mu.is_finite() {
            return Err(Error::NonFinite {
                name: "mu",
                value: mu,
            });
        }
        Ok(SpaceParams { lambda, mu })
    }

    #[inline]
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    #[inline]
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// `1 + μ(x² + y²)`, without any domain check.
    #[inline]
    pub fn delta_at(&self, x: f64, y: f64) -> f64 {
        1.0 + self.mu * (x * x + y * y)
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        self.delta_at(x, y) > 0.0
    }
}

impl fmt::Display for SpaceParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(lambda={}, mu={})", self.lambda, self.mu)
    }
}

/// A point of the domain `D` of some `M(λ, μ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FramePoint {
    coords: [f64; 3],
}

impl FramePoint {
    pub fn new(params: &SpaceParams, x: f64, y: f64, z: f64) -> Result<Self> {
        let delta = params.delta_at(x, y);
        if !(x.is_finite() && y.is_finite() && z.is_finite()) || !(delta > 0.0) {
            return Err(Error::OutsideDomain { x, y, z, delta });
        }
        Ok(FramePoint { coords: [x, y, z] })
    }

    #[inline]
    pub fn coords(&self) -> [f64; 3] {
        self.coords
    }

    #[inline]
    pub fn x(&self) -> f64 {
        self.coords[0]
    }

    #[inline]
    pub fn y(&self) -> f64 {
        self.coords[1]
    }

    #[inline]
    pub fn z(&self) -> f64 {
        self.coords[2]
    }

    /// Lexicographic order on `(x, y, z)`, used for deterministic tie-breaks.
    pub fn lex_cmp(&self, other: &FramePoint) -> std::cmp::Ordering {
        self.coords
            .iter()
            .zip(other.coords.iter())
            .map(|(a, b)| a.total_cmp(b))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    }
}

impl fmt::Display for FramePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x(), self.y(), self.z())
    }
}

/// Frame index `E1`, `E2`, `E3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FrameIndex {
    E1,
    E2,
    E3,
}

impl FrameIndex {
    pub const ALL: [FrameIndex; 3] = [FrameIndex::E1, FrameIndex::E2, FrameIndex::E3];

    pub fn from_one_based(i: usize) -> Result<Self> {
        match i {
            1 => Ok(FrameIndex::E1),
            2 => Ok(FrameIndex::E2),
            3 => Ok(FrameIndex::E3),
            other => Err(Error::FrameIndex(other)),
        }
    }

    /// Zero-based position.
    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }
}

/// Components of a tangent vector in the frame `(E1, E2, E3)`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FrameVector(pub [f64; 3]);

impl FrameVector {
    pub const ZERO: FrameVector = FrameVector([0.0; 3]);

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

impl Index<usize> for FrameVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for FrameVector {
    type Output = FrameVector;
    fn add(self, rhs: FrameVector) -> FrameVector {
        FrameVector(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl Sub for FrameVector {
    type Output = FrameVector;
    fn sub(self, rhs: FrameVector) -> FrameVector {
        FrameVector(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl Neg for FrameVector {
    type Output = FrameVector;
    fn neg(self) -> FrameVector {
        FrameVector(self.0.map(|c| -c))
    }
}

impl Mul<FrameVector> for f64 {
    type Output = FrameVector;
    fn mul(self, rhs: FrameVector) -> FrameVector {
        FrameVector(rhs.0.map(|c| self * c))
    }
}

pub type Tensor2 = [[f64; 3]; 3];
pub type Tensor4 = [[[[f64; 3]; 3]; 3]; 3];

/// `δ = 1 + μ(x² + y²)` at a domain point.
pub fn delta(params: &SpaceParams, p: &FramePoint) -> f64 {
    params.delta_at(p.x(), p.y())
}

/// Jets of the frame coefficient functions: `Ei = Σ_a coeff[i][a] ∂_a`.
pub fn frame_coefficients(params: &SpaceParams, p: &FramePoint) -> [[Jet2; 3]; 3] {
    let [x, y, _] = Jet2::variables(p);
    let l = params.lambda();
    let delta = 1.0 + params.mu() * (x * x + y * y);
    let zero = Jet2::constant(0.0);
    [
        [delta, zero, y * (-0.5 * l)],
        [zero, delta, x * (0.5 * l)],
        [zero, zero, Jet2::constant(1.0)],
    ]
}

/// `Ei(f)` at `p`.
pub fn frame_derivative(
    i: FrameIndex,
    f: &dyn ScalarField,
    params: &SpaceParams,
    p: &FramePoint,
) -> f64 {
    FrameGeometry::new(params, p).derivative(i, &f.eval(p))
}

/// Frame data at one point: coefficients, structure functions and connection,
/// each carried as jets so that their frame derivatives are available.
#[derive(Clone, Debug)]
pub struct FrameGeometry {
    coeffs: [[Jet2; 3]; 3],
    /// `structure[i][j][k]`: `[Ei, Ej] = Σ_k structure[i][j][k] Ek`.
    structure: [[[Jet1; 3]; 3]; 3],
    /// `connection[i][j][k]`: `∇_Ei Ej = Σ_k connection[i][j][k] Ek`.
    connection: [[[Jet1; 3]; 3]; 3],
}

impl FrameGeometry {
    pub fn new(params: &SpaceParams, p: &FramePoint) -> Self {
        let coeffs = frame_coefficients(params, p);
        let lowered = coeffs.map(|row| row.map(|c| c.lower()));
        let inverse = inverse3(&lowered);

        let mut structure = [[[Jet1::default(); 3]; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                // coordinate components of [Ei, Ej]
                let v: [Jet1; 3] = std::array::from_fn(|a| {
                    (0..3)
                        .map(|b| {
                            lowered[i][b] * coeffs[j][a].partial(crate::jets::Axis::ALL[b])
                                - lowered[j][b] * coeffs[i][a].partial(crate::jets::Axis::ALL[b])
                        })
                        .sum()
                });
                // frame components: v^a = Σ_k c_k coeff[k][a]
                structure[i][j] =
                    std::array::from_fn(|k| (0..3).map(|a| v[a] * inverse[a][k]).sum());
            }
        }

        // Koszul with constant η: 2 g(∇_Ei Ej, Ek) = C_ijk − C_jki + C_kij,
        // where C_ijk = g([Ei, Ej], Ek).
        let lowered_c = |i: usize, j: usize, k: usize| structure[i][j][k] * ETA[k];
        let mut connection = [[[Jet1::default(); 3]; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let g = (lowered_c(i, j, k) - lowered_c(j, k, i) + lowered_c(k, i, j)) * 0.5;
                    connection[i][j][k] = g * ETA[k];
                }
            }
        }

        FrameGeometry {
            coeffs,
            structure,
            connection,
        }
    }

    pub fn coefficients(&self) -> &[[Jet2; 3]; 3] {
        &self.coeffs
    }

    /// `Ei(f)` from the gradient of `f`.
    pub fn derivative(&self, i: FrameIndex, f: &Jet2) -> f64 {
        self.derivative_grad(i.index(), &f.grad())
    }

    fn derivative_grad(&self, i: usize, grad: &[f64; 3]) -> f64 {
        (0..3).map(|a| self.coeffs[i][a].value() * grad[a]).sum()
    }

    pub fn bracket(&self, i: FrameIndex, j: FrameIndex) -> FrameVector {
        FrameVector(self.structure[i.index()][j.index()].map(|c| c.value))
    }

    pub fn connection(&self, i: FrameIndex, j: FrameIndex) -> FrameVector {
        FrameVector(self.connection[i.index()][j.index()].map(|c| c.value))
    }

    /// `∇_Ei W` for `W = Σ_m w[m] Em` given as jets.
    fn covariant(&self, i: usize, w: &[Jet1; 3]) -> [f64; 3] {
        std::array::from_fn(|k| {
            self.derivative_grad(i, &w[k].grad)
                + (0..3)
                    .map(|m| w[m].value * self.connection[i][m][k].value)
                    .sum::<f64>()
        })
    }

    /// `R(Ei, Ej)Ek` in frame components.
    pub fn curvature_operator(&self, i: FrameIndex, j: FrameIndex, k: FrameIndex) -> FrameVector {
        let (i, j, k) = (i.index(), j.index(), k.index());
        let a = self.covariant(i, &self.connection[j][k]);
        let b = self.covariant(j, &self.connection[i][k]);
        FrameVector(std::array::from_fn(|l| {
            a[l] - b[l]
                - (0..3)
                    .map(|m| self.structure[i][j][m].value * self.connection[m][k][l].value)
                    .sum::<f64>()
        }))
    }

    /// `R_ijkl = g(R(Ei,Ej)El, Ek)`; see the module docs for the convention.
    pub fn curvature(&self, i: FrameIndex, j: FrameIndex, k: FrameIndex, l: FrameIndex) -> f64 {
        -ETA[l.index()] * self.curvature_operator(i, j, k)[l.index()]
    }

    pub fn curvature_tensor(&self) -> Tensor4 {
        let f = FrameIndex::ALL;
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                std::array::from_fn(|k| {
                    std::array::from_fn(|l| self.curvature(f[i], f[j], f[k], f[l]))
                })
            })
        })
    }
}

/// Inverse of a 3×3 matrix of jets through the adjugate.
fn inverse3(m: &[[Jet1; 3]; 3]) -> [[Jet1; 3]; 3] {
    let cof = |r: usize, c: usize| {
        let (r0, r1) = ((r + 1) % 3, (r + 2) % 3);
        let (c0, c1) = ((c + 1) % 3, (c + 2) % 3);
        m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]
    };
    let det = m[0][0] * cof(0, 0) + m[0][1] * cof(0, 1) + m[0][2] * cof(0, 2);
    let inv_det = det.recip();
    std::array::from_fn(|r| std::array::from_fn(|c| cof(c, r) * inv_det))
}

pub fn lie_bracket(
    i: FrameIndex,
    j: FrameIndex,
    params: &SpaceParams,
    p: &FramePoint,
) -> FrameVector {
    FrameGeometry::new(params, p).bracket(i, j)
}

pub fn connection_coeffs(
    i: FrameIndex,
    j: FrameIndex,
    params: &SpaceParams,
    p: &FramePoint,
) -> FrameVector {
    FrameGeometry::new(params, p).connection(i, j)
}

pub fn curvature_component(
    i: FrameIndex,
    j: FrameIndex,
    k: FrameIndex,
    l: FrameIndex,
    params: &SpaceParams,
    p: &FramePoint,
) -> f64 {
    FrameGeometry::new(params, p).curvature(i, j, k, l)
}

/// The Ricci tensor used by the soliton equations, `diag(4μ+λ², 4μ+λ², 0)`.
pub fn ricci(params: &SpaceParams) -> Tensor2 {
    let r = 4.0 * params.mu() + params.lambda() * params.lambda();
    [[r, 0.0, 0.0], [0.0, r, 0.0], [0.0, 0.0, 0.0]]
}

/// How the curvature is contracted into a Ricci tensor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContractionWeights {
    /// `ρ_ab = Σ_k R_akbk`: the documented convention matching `ρ11`, `ρ22`.
    Unit,
    /// `ρ_ab = Σ_k εk R_akbk`: the metric trace.
    Signature,
}

pub fn ricci_contraction(
    params: &SpaceParams,
    p: &FramePoint,
    weights: ContractionWeights,
) -> Tensor2 {
    let r = FrameGeometry::new(params, p).curvature_tensor();
    let w = match weights {
        ContractionWeights::Unit => [1.0; 3],
        ContractionWeights::Signature => ETA,
    };
    std::array::from_fn(|a| std::array::from_fn(|b| (0..3).map(|k| w[k] * r[a][k][b][k]).sum()))
}

/// Self-test of the curvature sign and contraction conventions.
///
/// Checks, at a fixed non-degenerate parameter pair and point, that the
/// computed components match `R1212`, `R1313`, `R2323`, and that the
/// unit-weight contraction matches [`ricci`] on every entry except `ρ33`
/// (which the contraction cannot reproduce, see the module docs).
pub fn check_conventions() -> Result<()> {
    use FrameIndex::*;
    let params = SpaceParams::new(1.5, 0.3)?;
    let p = FramePoint::new(&params, 0.4, -0.7, 0.2)?;
    let g = FrameGeometry::new(&params, &p);
    let tol = 1e-12;
    let expected = [
        ((E1, E2), tables::r1212(&params)),
        ((E1, E3), tables::r1313(&params)),
        ((E2, E3), tables::r1313(&params)),
    ];
    for ((a, b), want) in expected {
        let got = g.curvature(a, b, a, b);
        if (got - want).abs() > tol {
            return Err(Error::Convention(format!(
                "R{}{}{}{} = {got}, expected {want}",
                a.index() + 1,
                b.index() + 1,
                a.index() + 1,
                b.index() + 1
            )));
        }
    }
    let contracted = ricci_contraction(&params, &p, ContractionWeights::Unit);
    let normative = ricci(&params);
    for a in 0..3 {
        for b in 0..3 {
            if (a, b) == (2, 2) {
                continue;
            }
            if (contracted[a][b] - normative[a][b]).abs() > tol {
                return Err(Error::Convention(format!(
                    "contracted rho[{a}][{b}] = {}, normative {}",
                    contracted[a][b], normative[a][b]
                )));
            }
        }
    }
    Ok(())
}

/// Closed-form frame tables of `M(λ, μ)`.
pub mod tables {
    use super::{FrameIndex, FramePoint, FrameVector, SpaceParams};

    /// `[E1, E2] = −2μy E1 + 2μx E2 + λ E3`, `[E1, E3] = [E2, E3] = 0`.
    pub fn bracket(i: FrameIndex, j: FrameIndex, params: &SpaceParams, p: &FramePoint) -> FrameVector {
        let (l, m) = (params.lambda(), params.mu());
        let e12 = FrameVector([-2.0 * m * p.y(), 2.0 * m * p.x(), l]);
        match (i, j) {
            (FrameIndex::E1, FrameIndex::E2) => e12,
            (FrameIndex::E2, FrameIndex::E1) => -e12,
            _ => FrameVector::ZERO,
        }
    }

    /// The nine covariant derivatives `∇_Ei Ej`.
    pub fn connection(
        i: FrameIndex,
        j: FrameIndex,
        params: &SpaceParams,
        p: &FramePoint,
    ) -> FrameVector {
        use FrameIndex::*;
        let (h, m) = (0.5 * params.lambda(), params.mu());
        let (x, y) = (p.x(), p.y());
        FrameVector(match (i, j) {
            (E1, E1) => [0.0, 2.0 * m * y, 0.0],
            (E1, E2) => [-2.0 * m * y, 0.0, h],
            (E1, E3) => [0.0, h, 0.0],
            (E2, E1) => [0.0, -2.0 * m * x, -h],
            (E2, E2) => [2.0 * m * x, 0.0, 0.0],
            (E2, E3) => [-h, 0.0, 0.0],
            (E3, E1) => [0.0, h, 0.0],
            (E3, E2) => [-h, 0.0, 0.0],
            (E3, E3) => [0.0, 0.0, 0.0],
        })
    }

    pub fn r1212(params: &SpaceParams) -> f64 {
        let l = params.lambda();
        4.0 * params.mu() + 0.75 * l * l
    }

    /// Also `R2323`.
    pub fn r1313(params: &SpaceParams) -> f64 {
        0.25 * params.lambda() * params.lambda()
    }

    /// Any `R_ijkl`, expanded from the three listed values by the pair
    /// antisymmetries; components not related to them vanish.
    pub fn curvature(
        i: FrameIndex,
        j: FrameIndex,
        k: FrameIndex,
        l: FrameIndex,
        params: &SpaceParams,
    ) -> f64 {
        let (i, j, k, l) = (i.index(), j.index(), k.index(), l.index());
        if i == j || k == l {
            return 0.0;
        }
        let pair = |a: usize, b: usize| if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
        let (a, b, s1) = pair(i, j);
        let (c, d, s2) = pair(k, l);
        if (a, b) != (c, d) {
            return 0.0;
        }
        let value = match (a, b) {
            (0, 1) => r1212(params),
            _ => r1313(params),
        };
        s1 * s2 * value
    }
}
