//! Lie derivative of the metric, soliton residuals and the integrability
//! constraints on the potential-like function `A(x, y)`.
//!
//! A field `X = X1 E1 + X2 E2 + X3 E3` with constant `γ` is a Ricci soliton
//! when `L_X g + ρ = γ g`. Two evaluations of the residual are provided: the
//! frame form ([`soliton_residual_frame`], a symmetric 3×3 matrix) and the
//! coordinate PDE form ([`system36_residual`], six scalar equations). They
//! are related entry by entry:
//!
//! | PDE line | frame entry        |
//! |----------|--------------------|
//! | 1        | `−F11 / 2`         |
//! | 2        | `F12`              |
//! | 3        | `F13`              |
//! | 4        | `−F22 / 2`         |
//! | 5        | `F23`              |
//! | 6        | `−(F33 − ρ33) / 2` |
//!
//! and [`equivalence_check`] measures the discrepancy for any field.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{
    delta, ricci, FrameGeometry, FrameIndex, FramePoint, SpaceParams, Tensor2, ETA,
};
use crate::grid::SampleGrid;
use crate::jets::{Axis, Jet2, ScalarField};

/// Frame components `(X1, X2, X3)` of a vector field.
#[derive(Clone)]
pub struct VectorField {
    components: [Arc<dyn ScalarField>; 3],
}

impl VectorField {
    pub fn new<A, B, C>(x1: A, x2: B, x3: C) -> Self
    where
        A: ScalarField + 'static,
        B: ScalarField + 'static,
        C: ScalarField + 'static,
    {
        VectorField {
            components: [Arc::new(x1), Arc::new(x2), Arc::new(x3)],
        }
    }

    pub fn from_arcs(components: [Arc<dyn ScalarField>; 3]) -> Self {
        VectorField { components }
    }

    pub fn zero() -> Self {
        let zero = |_: &FramePoint| Jet2::constant(0.0);
        VectorField::new(zero, zero, zero)
    }

    /// Constant frame components.
    pub fn constant(c: [f64; 3]) -> Self {
        VectorField::new(
            move |_: &FramePoint| Jet2::constant(c[0]),
            move |_: &FramePoint| Jet2::constant(c[1]),
            move |_: &FramePoint| Jet2::constant(c[2]),
        )
    }

    pub fn component(&self, i: FrameIndex) -> &Arc<dyn ScalarField> {
        &self.components[i.index()]
    }

    pub fn eval(&self, p: &FramePoint) -> [Jet2; 3] {
        [
            self.components[0].eval(p),
            self.components[1].eval(p),
            self.components[2].eval(p),
        ]
    }

    /// `a·X + b·Y`, componentwise.
    pub fn linear_combination(a: f64, x: &VectorField, b: f64, y: &VectorField) -> VectorField {
        let comp = |i: usize| -> Arc<dyn ScalarField> {
            let (f, g) = (x.components[i].clone(), y.components[i].clone());
            Arc::new(move |p: &FramePoint| f.eval(p) * a + g.eval(p) * b)
        };
        VectorField {
            components: [comp(0), comp(1), comp(2)],
        }
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("VectorField { .. }")
    }
}

/// A vector field together with the soliton constant `γ`.
#[derive(Clone, Debug)]
pub struct SolitonCandidate {
    pub field: VectorField,
    pub gamma: f64,
}

impl SolitonCandidate {
    pub fn new(field: VectorField, gamma: f64) -> Self {
        SolitonCandidate { field, gamma }
    }
}

/// Maximum absolute residual over a sample set.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualReport {
    pub max_abs: f64,
    /// Per-equation maxima, in the order produced by the residual function.
    pub per_equation: Vec<f64>,
    pub points_evaluated: usize,
    /// `None` only when no point was evaluated.
    pub worst_point: Option<FramePoint>,
}

impl ResidualReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_abs <= tol
    }

    /// Evaluates `residual` at every point and reduces to maxima.
    ///
    /// Evaluation runs in parallel; the reduction walks points in input order
    /// and breaks ties in the maximum by lexicographic point order, so the
    /// result does not depend on scheduling. NaN residuals count as infinite.
    pub fn collect<F>(points: &[FramePoint], residual: F) -> ResidualReport
    where
        F: Fn(&FramePoint) -> Vec<f64> + Sync,
    {
        let values: Vec<Vec<f64>> = points
            .par_iter()
            .map(|p| {
                residual(p)
                    .into_iter()
                    .map(|r| if r.is_nan() { f64::INFINITY } else { r.abs() })
                    .collect()
            })
            .collect();

        let width = values.first().map_or(0, Vec::len);
        let mut per_equation = vec![0.0; width];
        let mut max_abs = 0.0;
        let mut worst: Option<FramePoint> = None;
        for (p, row) in points.iter().zip(&values) {
            let local = row.iter().fold(0.0_f64, |m, &r| m.max(r));
            for (acc, &r) in per_equation.iter_mut().zip(row) {
                *acc = f64::max(*acc, r);
            }
            let better = match worst {
                None => true,
                Some(w) => local > max_abs || (local == max_abs && p.lex_cmp(&w).is_lt()),
            };
            if better {
                max_abs = local;
                worst = Some(*p);
            }
        }
        ResidualReport {
            max_abs,
            per_equation,
            points_evaluated: points.len(),
            worst_point: worst,
        }
    }
}

/// Which `(E1, E2)` entry of the Lie derivative formula to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LieForm {
    /// `2μx X2 + 2μy X1 + E1(X2) + E2(X1)`.
    Symmetric,
    /// `2μx X2 + 2μy X1 + E1(X2) + E2(X2)`, kept only to show it is wrong.
    AsPrinted,
}

/// `(L_X g)(Ei, Ej)` from the closed frame formulas.
pub fn lie_derivative_metric(x: &VectorField, params: &SpaceParams, p: &FramePoint) -> Tensor2 {
    lie_derivative_metric_with(x, params, p, LieForm::Symmetric)
}

pub fn lie_derivative_metric_with(
    x: &VectorField,
    params: &SpaceParams,
    p: &FramePoint,
    form: LieForm,
) -> Tensor2 {
    use FrameIndex::*;
    let geo = FrameGeometry::new(params, p);
    let [x1, x2, x3] = x.eval(p);
    let (l, m) = (params.lambda(), params.mu());
    let (px, py) = (p.x(), p.y());
    let (v1, v2) = (x1.value(), x2.value());
    let e = |i: FrameIndex, f: &Jet2| geo.derivative(i, f);

    let l11 = 2.0 * (e(E1, &x1) - 2.0 * m * py * v2);
    let l12 = 2.0 * m * px * v2
        + 2.0 * m * py * v1
        + e(E1, &x2)
        + match form {
            LieForm::Symmetric => e(E2, &x1),
            LieForm::AsPrinted => e(E2, &x2),
        };
    let l13 = e(E3, &x1) - e(E1, &x3) - l * v2;
    let l22 = 2.0 * (e(E2, &x2) - 2.0 * m * px * v1);
    let l23 = l * v1 - e(E2, &x3) + e(E3, &x2);
    let l33 = -2.0 * e(E3, &x3);
    [[l11, l12, l13], [l12, l22, l23], [l13, l23, l33]]
}

/// `(L_X g)(Ei, Ej) = g(∇_Ei X, Ej) + g(Ei, ∇_Ej X)` using the computed
/// connection rather than the closed formulas.
pub fn lie_derivative_metric_covariant(
    x: &VectorField,
    params: &SpaceParams,
    p: &FramePoint,
) -> Tensor2 {
    let geo = FrameGeometry::new(params, p);
    let comps = x.eval(p);
    // nabla[i][k]: k-th component of ∇_Ei X
    let nabla: [[f64; 3]; 3] = std::array::from_fn(|i| {
        let ei = FrameIndex::ALL[i];
        std::array::from_fn(|k| {
            geo.derivative(ei, &comps[k])
                + FrameIndex::ALL
                    .iter()
                    .map(|&m| comps[m.index()].value() * geo.connection(ei, m)[k])
                    .sum::<f64>()
        })
    });
    std::array::from_fn(|i| std::array::from_fn(|j| ETA[j] * nabla[i][j] + ETA[i] * nabla[j][i]))
}

/// `L_X g + ρ − γ η` at `p`.
pub fn soliton_residual_frame(c: &SolitonCandidate, params: &SpaceParams, p: &FramePoint) -> Tensor2 {
    soliton_residual_frame_with(c, params, p, LieForm::Symmetric)
}

pub fn soliton_residual_frame_with(
    c: &SolitonCandidate,
    params: &SpaceParams,
    p: &FramePoint,
    form: LieForm,
) -> Tensor2 {
    let lie = lie_derivative_metric_with(&c.field, params, p, form);
    let rho = ricci(params);
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let eta = if i == j { ETA[i] } else { 0.0 };
            lie[i][j] + rho[i][j] - c.gamma * eta
        })
    })
}

/// Left-minus-right residuals of the six coordinate equations.
pub fn system36_residual(c: &SolitonCandidate, params: &SpaceParams, p: &FramePoint) -> [f64; 6] {
    use Axis::*;
    let [x1, x2, x3] = c.field.eval(p);
    let (l, m) = (params.lambda(), params.mu());
    let (x, y) = (p.x(), p.y());
    let d = delta(params, p);
    let rho11 = ricci(params)[0][0];
    let g = c.gamma;
    let h = 0.5 * l;
    [
        2.0 * m * y * x2.value() - d * x1.d(X) + h * y * x1.d(Z) - 0.5 * (rho11 - g),
        2.0 * m * x * x2.value()
            + 2.0 * m * y * x1.value()
            + d * x2.d(X)
            - h * y * x2.d(Z)
            + d * x1.d(Y)
            + h * x * x1.d(Z),
        -l * x2.value() - d * x3.d(X) + h * y * x3.d(Z) + x1.d(Z),
        2.0 * m * x * x1.value() - d * x2.d(Y) - h * x * x2.d(Z) - 0.5 * (rho11 - g),
        l * x1.value() - d * x3.d(Y) - h * x * x3.d(Z) + x2.d(Z),
        x3.d(Z) - 0.5 * g,
    ]
}

/// Maps the frame residual onto the six PDE lines (see the module table).
pub fn frame_to_system36(frame: &Tensor2, params: &SpaceParams) -> [f64; 6] {
    let rho33 = ricci(params)[2][2];
    [
        -0.5 * frame[0][0],
        frame[0][1],
        frame[0][2],
        -0.5 * frame[1][1],
        frame[1][2],
        -0.5 * (frame[2][2] - rho33),
    ]
}

/// Largest discrepancy between the two residual formulations at `p`.
pub fn equivalence_check(c: &SolitonCandidate, params: &SpaceParams, p: &FramePoint) -> f64 {
    equivalence_check_with(c, params, p, LieForm::Symmetric)
}

pub fn equivalence_check_with(
    c: &SolitonCandidate,
    params: &SpaceParams,
    p: &FramePoint,
    form: LieForm,
) -> f64 {
    let mapped = frame_to_system36(&soliton_residual_frame_with(c, params, p, form), params);
    let direct = system36_residual(c, params, p);
    mapped
        .iter()
        .zip(direct.iter())
        .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
}

/// Form of the integrability constraints on `A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstraintForm {
    /// The two constraints written directly in `A`.
    Direct,
    /// The same constraints after substituting `f = δA`:
    /// `∂x∂y f − Δ(y² − x²)/δ` and `∂x²f − ∂y²f − 4Δxy/δ`.
    /// These equal the direct residuals times `1/δ` and `−1/δ` respectively.
    Substituted,
}

/// Residuals of the two constraints on `A(x, y)` at `p`.
///
/// `A` must not depend on `z`; this is checked on its jet.
pub fn constraint_a_residual(
    a: &dyn ScalarField,
    params: &SpaceParams,
    p: &FramePoint,
    form: ConstraintForm,
) -> Result<[f64; 2]> {
    use Axis::*;
    let big_delta = obstruction_delta(params)?;
    let jet = a.eval(p);
    let z_free = jet.d(Z) == 0.0 && jet.hess()[2].iter().all(|&h| h == 0.0);
    if !z_free {
        return Err(Error::Precondition(format!(
            "A must not depend on z, but its jet at {p} has dA/dz = {} and z-Hessian row {:?}",
            jet.d(Z),
            jet.hess()[2]
        )));
    }
    let (l, m) = (params.lambda(), params.mu());
    let (x, y) = (p.x(), p.y());
    let d = delta(params, p);
    Ok(match form {
        ConstraintForm::Direct => [
            l * m * (2.0 * m + 0.5 * l * l) * (x * x - y * y)
                + d * (2.0 * m * (x * jet.d(Y) + y * jet.d(X)) + d * jet.d2(X, Y)),
            2.0 * l * m * (4.0 * m + l * l) * x * y
                + d * (4.0 * m * (y * jet.d(Y) - x * jet.d(X))
                    + d * (jet.d2(Y, Y) - jet.d2(X, X))),
        ],
        ConstraintForm::Substituted => {
            let [xj, yj, _] = Jet2::variables(p);
            let f = (1.0 + m * (xj * xj + yj * yj)) * jet;
            [
                f.d2(X, Y) - big_delta * (y * y - x * x) / d,
                f.d2(X, X) - f.d2(Y, Y) - 4.0 * big_delta * x * y / d,
            ]
        }
    })
}

/// `Δ = λμ(2μ + λ²/2)`; solutions with `λ ≠ 0` require `Δ = 0`.
pub fn obstruction_delta(params: &SpaceParams) -> Result<f64> {
    let (l, m) = (params.lambda(), params.mu());
    if l == 0.0 {
        return Err(Error::WrongCase {
            case: "1",
            reason: "the obstruction constant is defined for lambda != 0".into(),
        });
    }
    Ok(l * m * (2.0 * m + 0.5 * l * l))
}

/// Six-equation PDE residual maxima over the grid.
pub fn verify_system36(
    c: &SolitonCandidate,
    params: &SpaceParams,
    grid: &SampleGrid,
) -> ResidualReport {
    ResidualReport::collect(&grid.points(params), |p| {
        system36_residual(c, params, p).to_vec()
    })
}

/// Frame residual maxima over the grid, entries ordered 11, 12, 13, 22, 23, 33.
pub fn verify_frame(c: &SolitonCandidate, params: &SpaceParams, grid: &SampleGrid) -> ResidualReport {
    ResidualReport::collect(&grid.points(params), |p| {
        upper_triangle(&soliton_residual_frame(c, params, p)).to_vec()
    })
}

pub fn upper_triangle(t: &Tensor2) -> [f64; 6] {
    [t[0][0], t[0][1], t[0][2], t[1][1], t[1][2], t[2][2]]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(l: f64, m: f64) -> SpaceParams {
        SpaceParams::new(l, m).unwrap()
    }

    fn max_abs(t: &Tensor2) -> f64 {
        t.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }

    #[test]
    fn e3_is_killing() {
        let pr = params(1.3, -0.2);
        let p = FramePoint::new(&pr, 0.5, 0.1, -0.4).unwrap();
        assert_eq!(max_abs(&lie_derivative_metric(&VectorField::constant([0.0, 0.0, 1.0]), &pr, &p)), 0.0);
        assert_eq!(max_abs(&lie_derivative_metric(&VectorField::zero(), &pr, &p)), 0.0);
    }

    #[test]
    fn lie_derivative_of_z_along_e3() {
        let pr = params(2.0, 0.0);
        let p = FramePoint::new(&pr, 0.0, 1.0, 0.0).unwrap();
        let x = VectorField::new(
            |_: &FramePoint| Jet2::constant(0.0),
            |_: &FramePoint| Jet2::constant(0.0),
            |p: &FramePoint| Jet2::coordinate(Axis::Z, p),
        );
        let lie = lie_derivative_metric(&x, &pr, &p);
        assert_eq!(lie[2][2], -2.0);
        assert_eq!(lie[0][2], 1.0);
    }

    #[test]
    fn residual_of_zero_field_is_ricci() {
        let pr = params(2.0, 1.0);
        let p = FramePoint::new(&pr, 0.3, 0.3, 0.3).unwrap();
        let c = SolitonCandidate::new(VectorField::zero(), 0.0);
        assert_eq!(
            soliton_residual_frame(&c, &pr, &p),
            [[8.0, 0.0, 0.0], [0.0, 8.0, 0.0], [0.0; 3]]
        );
        let flat = params(0.0, 0.0);
        assert_eq!(max_abs(&soliton_residual_frame(&c, &flat, &p)), 0.0);
    }

    #[test]
    fn line_six_of_zero_field() {
        let pr = params(0.7, 0.2);
        let p = FramePoint::new(&pr, 0.1, 0.2, 0.3).unwrap();
        let c = SolitonCandidate::new(VectorField::zero(), 2.0);
        assert_eq!(system36_residual(&c, &pr, &p)[5], -1.0);
        assert_eq!(equivalence_check(&c, &pr, &p), 0.0);
    }

    #[test]
    fn constraint_rejects_z_dependence() {
        let pr = params(1.0, 0.0);
        let p = FramePoint::new(&pr, 0.1, 0.2, 0.3).unwrap();
        let a = |p: &FramePoint| Jet2::coordinate(Axis::Z, p);
        assert!(matches!(
            constraint_a_residual(&a, &pr, &p, ConstraintForm::Direct),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn constraint_constant_a_flat_base() {
        let pr = params(1.0, 0.0);
        let p = FramePoint::new(&pr, 0.4, -0.2, 0.0).unwrap();
        let a = |_: &FramePoint| Jet2::constant(3.0);
        assert_eq!(
            constraint_a_residual(&a, &pr, &p, ConstraintForm::Direct).unwrap(),
            [0.0, 0.0]
        );
    }

    #[test]
    fn constraint_xy_is_nonzero() {
        // (43) at λ = μ = 1, p = (1, 1): Δ(x² − y²) = 0, δ = 3,
        // 3·(2·(1 + 1) + 3·1) = 21.
        let pr = params(1.0, 1.0);
        let p = FramePoint::new(&pr, 1.0, 1.0, 0.0).unwrap();
        let a = |p: &FramePoint| {
            let [x, y, _] = Jet2::variables(p);
            x * y
        };
        let r = constraint_a_residual(&a, &pr, &p, ConstraintForm::Direct).unwrap();
        assert!((r[0] - 21.0).abs() < 1e-12, "{r:?}");
    }

    #[test]
    fn constraint_requires_nonzero_lambda() {
        let pr = params(0.0, 1.0);
        let p = FramePoint::new(&pr, 0.0, 0.0, 0.0).unwrap();
        let a = |_: &FramePoint| Jet2::constant(0.0);
        assert!(constraint_a_residual(&a, &pr, &p, ConstraintForm::Direct).is_err());
    }

    #[test]
    fn obstruction_values() {
        assert_eq!(obstruction_delta(&params(2.0, -1.0)).unwrap(), 0.0);
        assert_eq!(obstruction_delta(&params(1.0, 0.0)).unwrap(), 0.0);
        assert_eq!(obstruction_delta(&params(2.0, 1.0)).unwrap(), 8.0);
        assert!(matches!(
            obstruction_delta(&params(0.0, 1.0)),
            Err(Error::WrongCase { .. })
        ));
    }

    #[test]
    fn report_tie_break_is_lexicographic() {
        let pr = params(0.0, 0.0);
        let pts = vec![
            FramePoint::new(&pr, 1.0, 0.0, 0.0).unwrap(),
            FramePoint::new(&pr, 0.0, 0.0, 0.0).unwrap(),
            FramePoint::new(&pr, 0.5, 0.0, 0.0).unwrap(),
        ];
        let report = ResidualReport::collect(&pts, |_| vec![1.0, -2.0]);
        assert_eq!(report.max_abs, 2.0);
        assert_eq!(report.per_equation, vec![1.0, 2.0]);
        assert_eq!(report.worst_point.unwrap().coords(), [0.0, 0.0, 0.0]);
        assert_eq!(report.points_evaluated, 3);
    }

    #[test]
    fn report_treats_nan_as_failure() {
        let pr = params(0.0, 0.0);
        let pts = vec![FramePoint::new(&pr, 0.0, 0.0, 0.0).unwrap()];
        let report = ResidualReport::collect(&pts, |_| vec![f64::NAN]);
        assert!(!report.passes(1e300));
    }
}
