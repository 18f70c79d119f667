//! Closed-form Ricci soliton families of `M(λ, μ)` and the classification
//! of which parameters admit them.
//!
//! | branch                    | field                                   | γ     |
//! |---------------------------|-----------------------------------------|-------|
//! | 1a: `λ ≠ 0, μ = 0`        | [`soliton_case1a`], coefficients a1..a4 | 2λ²   |
//! | 1b: `λ ≠ 0, μ = −λ²/4`    | [`soliton_case1b`], coefficients a1..a6 | 0     |
//! | 2: `λ = 0, μ ≠ 0`         | [`soliton_case2`], `X3 = 2μz + a`       | 4μ    |
//! | 3: `λ = μ = 0`            | [`soliton_case3`], affine fields        | any   |
//!
//! Case dispatch treats `λ`, `μ` and `μ + λ²/4` as zero when their absolute
//! value is at most [`CASE_TOLERANCE`].

use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::{FramePoint, SpaceParams};
use crate::grid::SampleGrid;
use crate::jets::{Jet2, ScalarField};
use crate::soliton::{lie_derivative_metric, upper_triangle, ResidualReport, SolitonCandidate, VectorField};

pub const CASE_TOLERANCE: f64 = 1e-12;

const CAVEAT_III: &str = "for lambda != 0 and mu < 0, steady solitons are only known at \
mu = -lambda^2/4 (obstruction constant zero); no soliton family is known for these parameters";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolitonKind {
    Shrinking,
    Steady,
    Expanding,
    None,
    /// Minkowski space: solitons exist for every `γ`.
    FlatAnyGamma,
}

impl SolitonKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SolitonKind::Shrinking => "shrinking",
            SolitonKind::Steady => "steady",
            SolitonKind::Expanding => "expanding",
            SolitonKind::None => "none",
            SolitonKind::FlatAnyGamma => "flat-any-gamma",
        }
    }
}

impl fmt::Display for SolitonKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Label of the classification branch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TheoremCase {
    I,
    II,
    III,
    IV,
    V,
    /// `λ = μ = 0`.
    Flat,
}

impl TheoremCase {
    pub fn as_str(self) -> &'static str {
        match self {
            TheoremCase::I => "(i)",
            TheoremCase::II => "(ii)",
            TheoremCase::III => "(iii)",
            TheoremCase::IV => "(iv)",
            TheoremCase::V => "(v)",
            TheoremCase::Flat => "Case 3",
        }
    }
}

impl fmt::Display for TheoremCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Result of [`classify`].
#[derive(Clone, Debug, PartialEq)]
pub struct SolitonClass {
    pub kind: SolitonKind,
    /// `None` when no soliton exists or `γ` is unconstrained.
    pub gamma: Option<f64>,
    pub theorem_case: TheoremCase,
    pub caveat: Option<String>,
}

impl SolitonClass {
    /// `shrinking ⇒ γ > 0`, `steady ⇒ γ = 0`, `expanding ⇒ γ < 0`.
    pub fn sign_law_holds(&self) -> bool {
        match (self.kind, self.gamma) {
            (SolitonKind::Shrinking, Some(g)) => g > 0.0,
            (SolitonKind::Steady, Some(g)) => g == 0.0,
            (SolitonKind::Expanding, Some(g)) => g < 0.0,
            (SolitonKind::None | SolitonKind::FlatAnyGamma, None) => true,
            _ => false,
        }
    }
}

/// The branch of the case structure a parameter pair falls in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Case1a,
    Case1b,
    /// `λ ≠ 0` with nonzero obstruction.
    Case1Obstructed,
    Case2,
    Case3,
}

impl Branch {
    pub fn of(params: &SpaceParams) -> Branch {
        let (l, m) = (params.lambda(), params.mu());
        let lambda_zero = l.abs() <= CASE_TOLERANCE;
        let mu_zero = m.abs() <= CASE_TOLERANCE;
        match (lambda_zero, mu_zero) {
            (true, true) => Branch::Case3,
            (true, false) => Branch::Case2,
            (false, true) => Branch::Case1a,
            (false, false) if (m + 0.25 * l * l).abs() <= CASE_TOLERANCE => Branch::Case1b,
            (false, false) => Branch::Case1Obstructed,
        }
    }
}

/// Family coefficients `a1..a6` (1-based in the docs, 0-based in the array).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CoefficientSet(pub [f64; 6]);

impl CoefficientSet {
    pub fn from_slice(values: &[f64]) -> Result<Self> {
        if values.len() > 6 {
            return Err(Error::Precondition(format!(
                "at most 6 coefficients are accepted, got {}",
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                name: "coefficient",
                value: *v,
            });
        }
        let mut a = [0.0; 6];
        a[..values.len()].copy_from_slice(values);
        Ok(CoefficientSet(a))
    }

    /// `a_k` with 1-based `k`.
    pub fn a(&self, k: usize) -> f64 {
        self.0[k - 1]
    }
}

pub fn classify(params: &SpaceParams) -> SolitonClass {
    let (l, m) = (params.lambda(), params.mu());
    let class = |kind, gamma, theorem_case| SolitonClass {
        kind,
        gamma,
        theorem_case,
        caveat: None,
    };
    match Branch::of(params) {
        Branch::Case3 => class(SolitonKind::FlatAnyGamma, None, TheoremCase::Flat),
        Branch::Case2 => {
            let gamma = case2_gamma(params);
            if m > 0.0 {
                class(SolitonKind::Shrinking, Some(gamma), TheoremCase::IV)
            } else {
                class(SolitonKind::Expanding, Some(gamma), TheoremCase::V)
            }
        }
        Branch::Case1a => class(SolitonKind::Shrinking, Some(case1a_gamma(params)), TheoremCase::II),
        Branch::Case1b => class(SolitonKind::Steady, Some(0.0), TheoremCase::III),
        Branch::Case1Obstructed if m > 0.0 => class(SolitonKind::None, None, TheoremCase::I),
        Branch::Case1Obstructed => {
            debug_assert!(l != 0.0 && m < 0.0);
            SolitonClass {
                caveat: Some(CAVEAT_III.to_string()),
                ..class(SolitonKind::None, None, TheoremCase::III)
            }
        }
    }
}

fn case1a_gamma(params: &SpaceParams) -> f64 {
    2.0 * params.lambda() * params.lambda()
}

fn case2_gamma(params: &SpaceParams) -> f64 {
    4.0 * params.mu()
}

fn require(params: &SpaceParams, want: Branch, case: &'static str, reason: &str) -> Result<()> {
    if Branch::of(params) == want {
        Ok(())
    } else {
        Err(Error::WrongCase {
            case,
            reason: format!("{reason}; got {params}"),
        })
    }
}

/// Case 1a: `λ ≠ 0, μ = 0`, `γ = 2λ²`.
///
/// ```text
/// X1 = (2a1 y + a3)/λ + (λ²/2) x
/// X2 = −(2a1 x + a2)/λ + (λ²/2) y
/// X3 = λ² z + a1(x² + y²) + a2 x + a3 y + a4
/// ```
pub fn soliton_case1a(params: &SpaceParams, coeffs: &CoefficientSet) -> Result<SolitonCandidate> {
    require(params, Branch::Case1a, "1a", "requires lambda != 0 and mu = 0")?;
    let l = params.lambda();
    let [a1, a2, a3, a4, _, _] = coeffs.0;
    let half_l2 = 0.5 * l * l;
    let field = VectorField::new(
        move |p: &FramePoint| {
            let [x, y, _] = Jet2::variables(p);
            (y * (2.0 * a1) + a3) * (1.0 / l) + x * half_l2
        },
        move |p: &FramePoint| {
            let [x, y, _] = Jet2::variables(p);
            (x * (2.0 * a1) + a2) * (-1.0 / l) + y * half_l2
        },
        move |p: &FramePoint| {
            let [x, y, z] = Jet2::variables(p);
            z * (l * l) + (x * x + y * y) * a1 + x * a2 + y * a3 + a4
        },
    );
    Ok(SolitonCandidate::new(field, case1a_gamma(params)))
}

/// Numerator of `X3` in case 1b.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Case1bX3 {
    /// `a1(x² + y²) + a2 x + a3 y + a4`: the solution.
    SumOfSquares,
    /// `a1(x² − y²) + ...`: fails the equations whenever `a1 ≠ 0`.
    DifferenceOfSquares,
}

/// Sign of the constant in the `a2` term of `X2` in case 1b.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Case1bX2 {
    /// `a2(μ(x² − y²) − 1)`, which equals `−(δ/λ)∂x A` expanded.
    Derived,
    /// `a2(μ(x² − y²) + 1)`: fails the equations whenever `a2 ≠ 0`.
    PlusOne,
}

/// Case 1b: `λ ≠ 0, μ = −λ²/4`, `γ = 0`. With `A = f/δ`,
/// `f = a1(x² + y²) + a2 x + a3 y + a4`:
///
/// ```text
/// X1 = (δ/λ) ∂y A + a5 sin(λz) − a6 cos(λz)
/// X2 = −(δ/λ) ∂x A + a5 cos(λz) + a6 sin(λz)
/// X3 = A
/// ```
///
/// with the derivatives expanded in closed form. These fields are Killing.
pub fn soliton_case1b(params: &SpaceParams, coeffs: &CoefficientSet) -> Result<SolitonCandidate> {
    soliton_case1b_variant(params, coeffs, Case1bX2::Derived, Case1bX3::SumOfSquares)
}

/// [`soliton_case1b`] with alternative `X2`/`X3` numerators, for regression
/// tests showing which forms satisfy the equations.
pub fn soliton_case1b_variant(
    params: &SpaceParams,
    coeffs: &CoefficientSet,
    x2_form: Case1bX2,
    x3_form: Case1bX3,
) -> Result<SolitonCandidate> {
    require(params, Branch::Case1b, "1b", "requires lambda != 0 and mu = -lambda^2/4")?;
    let (l, m) = (params.lambda(), params.mu());
    let [a1, a2, a3, a4, a5, a6] = coeffs.0;
    let x2_const = match x2_form {
        Case1bX2::Derived => -1.0,
        Case1bX2::PlusOne => 1.0,
    };
    let y2_sign = match x3_form {
        Case1bX3::SumOfSquares => 1.0,
        Case1bX3::DifferenceOfSquares => -1.0,
    };
    let parts = move |p: &FramePoint| {
        let [x, y, z] = Jet2::variables(p);
        let delta = 1.0 + m * (x * x + y * y);
        let lz = z * l;
        (x, y, delta, lz.sin(), lz.cos())
    };
    let field = VectorField::new(
        move |p: &FramePoint| {
            let (x, y, delta, s, c) = parts(p);
            let num = x * y * (-2.0 * a2 * m)
                + (m * (x * x - y * y) + 1.0) * a3
                + y * (-2.0 * a4 * m)
                + y * (2.0 * a1);
            num / (delta * l) + s * a5 - c * a6
        },
        move |p: &FramePoint| {
            let (x, y, delta, s, c) = parts(p);
            let num = x * (y * a3 + a4) * (2.0 * m)
                + (m * (x * x - y * y) + x2_const) * a2
                - x * (2.0 * a1);
            num / (delta * l) + c * a5 + s * a6
        },
        move |p: &FramePoint| {
            let (x, y, delta, _, _) = parts(p);
            ((x * x + y * y * y2_sign) * a1 + x * a2 + y * a3 + a4) / delta
        },
    );
    Ok(SolitonCandidate::new(field, 0.0))
}

/// The catalog's family for the function `A(x, y)` of case 1,
/// `(a1(x² + y²) + a2 x + a3 y + a4)/δ`. It satisfies both constraints on `A`
/// exactly when the obstruction constant vanishes.
pub fn potential_family(params: &SpaceParams, coeffs: &CoefficientSet) -> impl ScalarField {
    let m = params.mu();
    let [a1, a2, a3, a4, _, _] = coeffs.0;
    move |p: &FramePoint| {
        let [x, y, _] = Jet2::variables(p);
        let r2 = x * x + y * y;
        (r2 * a1 + x * a2 + y * a3 + a4) / (r2 * m + 1.0)
    }
}

/// Case 2: `λ = 0, μ ≠ 0`, field `(0, 0, 2μz + a)` with `γ = 4μ`.
pub fn soliton_case2(params: &SpaceParams, shift: f64) -> Result<SolitonCandidate> {
    require(params, Branch::Case2, "2", "requires lambda = 0 and mu != 0")?;
    let m = params.mu();
    let zero = |_: &FramePoint| Jet2::constant(0.0);
    let field = VectorField::new(zero, zero, move |p: &FramePoint| {
        Jet2::coordinate(crate::jets::Axis::Z, p) * (2.0 * m) + shift
    });
    Ok(SolitonCandidate::new(field, case2_gamma(params)))
}

/// Case 3 (Minkowski space), any `γ`:
///
/// ```text
/// X1 = (γ/2) x − a1 y + a2 z + a3
/// X2 = a1 x + (γ/2) y + a4 z + a5
/// X3 = a2 x + a4 y + (γ/2) z + a6
/// ```
pub fn soliton_case3(gamma: f64, coeffs: &CoefficientSet) -> Result<SolitonCandidate> {
    if !gamma.is_finite() {
        return Err(Error::NonFinite {
            name: "gamma",
            value: gamma,
        });
    }
    let [a1, a2, a3, a4, a5, a6] = coeffs.0;
    let h = 0.5 * gamma;
    let field = VectorField::new(
        move |p: &FramePoint| {
            let [x, y, z] = Jet2::variables(p);
            x * h - y * a1 + z * a2 + a3
        },
        move |p: &FramePoint| {
            let [x, y, z] = Jet2::variables(p);
            x * a1 + y * h + z * a4 + a5
        },
        move |p: &FramePoint| {
            let [x, y, z] = Jet2::variables(p);
            x * a2 + y * a4 + z * h + a6
        },
    );
    Ok(SolitonCandidate::new(field, gamma))
}

/// [`soliton_case3`] after checking that `params` is Minkowski space.
pub fn soliton_case3_on(
    params: &SpaceParams,
    gamma: f64,
    coeffs: &CoefficientSet,
) -> Result<SolitonCandidate> {
    require(params, Branch::Case3, "3", "requires lambda = mu = 0")?;
    soliton_case3(gamma, coeffs)
}

/// Maximum of `|L_X g|` over the grid (zero iff `X` is Killing on the samples).
pub fn killing_check(
    c: &SolitonCandidate,
    params: &SpaceParams,
    grid: &SampleGrid,
) -> ResidualReport {
    ResidualReport::collect(&grid.points(params), |p| {
        upper_triangle(&lie_derivative_metric(&c.field, params, p)).to_vec()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::soliton::{verify_frame, verify_system36};

    fn params(l: f64, m: f64) -> SpaceParams {
        SpaceParams::new(l, m).unwrap()
    }

    fn coeffs(v: &[f64]) -> CoefficientSet {
        CoefficientSet::from_slice(v).unwrap()
    }

    fn eval(c: &SolitonCandidate, pr: &SpaceParams, xyz: [f64; 3]) -> [f64; 3] {
        let p = FramePoint::new(pr, xyz[0], xyz[1], xyz[2]).unwrap();
        c.field.eval(&p).map(|j| j.value())
    }

    fn assert_verified(c: &SolitonCandidate, pr: &SpaceParams) {
        let grid = SampleGrid::default();
        let a = verify_system36(c, pr, &grid);
        let b = verify_frame(c, pr, &grid);
        assert!(a.max_abs <= 1e-9, "system residual {a:?}");
        assert!(b.max_abs <= 1e-9, "frame residual {b:?}");
    }

    #[test]
    fn case1a_examples() {
        let pr = params(1.0, 0.0);
        let c = soliton_case1a(&pr, &CoefficientSet::default()).unwrap();
        assert_eq!(c.gamma, 2.0);
        assert_eq!(eval(&c, &pr, [0.4, -0.6, 0.8]), [0.2, -0.3, 0.8]);
        assert_verified(&c, &pr);

        let pr = params(2.0, 0.0);
        let c = soliton_case1a(&pr, &coeffs(&[1.0])).unwrap();
        let v = eval(&c, &pr, [0.5, 0.25, 1.0]);
        assert_eq!(v[2], 4.0 + 0.25 + 0.0625);
        assert_verified(&c, &pr);
    }

    #[test]
    fn case1a_wrong_case() {
        assert!(matches!(
            soliton_case1a(&params(1.0, 1.0), &CoefficientSet::default()),
            Err(Error::WrongCase { .. })
        ));
        assert!(soliton_case1a(&params(0.0, 0.0), &CoefficientSet::default()).is_err());
    }

    #[test]
    fn case1b_trig_only() {
        let pr = params(2.0, -1.0);
        let c = soliton_case1b(&pr, &coeffs(&[0.0, 0.0, 0.0, 0.0, 1.0])).unwrap();
        assert_eq!(c.gamma, 0.0);
        let z: f64 = 0.3;
        let v = eval(&c, &pr, [0.1, 0.2, z]);
        assert!((v[0] - (2.0 * z).sin()).abs() < 1e-15);
        assert!((v[1] - (2.0 * z).cos()).abs() < 1e-15);
        assert_eq!(v[2], 0.0);
        assert_verified(&c, &pr);
    }

    #[test]
    fn case1b_shift_coefficient() {
        let pr = params(2.0, -1.0);
        let c = soliton_case1b(&pr, &coeffs(&[0.0, 0.0, 0.0, 1.0])).unwrap();
        let (x, y) = (0.3, 0.4);
        let delta = 1.0 - (x * x + y * y);
        let v = eval(&c, &pr, [x, y, 0.0]);
        assert!((v[0] - y / delta).abs() < 1e-15);
        assert_verified(&c, &pr);
    }

    #[test]
    fn case1b_x3_numerator() {
        let pr = params(2.0, -1.0);
        let good = soliton_case1b(&pr, &coeffs(&[1.0])).unwrap();
        assert_verified(&good, &pr);
        let bad = soliton_case1b_variant(
            &pr,
            &coeffs(&[1.0]),
            Case1bX2::Derived,
            Case1bX3::DifferenceOfSquares,
        )
        .unwrap();
        assert!(verify_system36(&bad, &pr, &SampleGrid::default()).max_abs > 1e-3);
    }

    #[test]
    fn case1b_x2_sign() {
        let pr = params(2.0, -1.0);
        let bad = soliton_case1b_variant(
            &pr,
            &coeffs(&[0.0, 1.0]),
            Case1bX2::PlusOne,
            Case1bX3::SumOfSquares,
        )
        .unwrap();
        assert!(verify_system36(&bad, &pr, &SampleGrid::default()).max_abs > 1e-3);
        assert_verified(&soliton_case1b(&pr, &coeffs(&[0.0, 1.0])).unwrap(), &pr);
    }

    #[test]
    fn case2_examples() {
        let pr = params(0.0, 1.0);
        let c = soliton_case2(&pr, 0.0).unwrap();
        assert_eq!(c.gamma, 4.0);
        assert_eq!(eval(&c, &pr, [0.1, 0.1, 0.5]), [0.0, 0.0, 1.0]);
        assert_verified(&c, &pr);

        let pr = params(0.0, -1.0);
        let c = soliton_case2(&pr, 3.0).unwrap();
        assert_eq!(c.gamma, -4.0);
        assert_eq!(eval(&c, &pr, [0.1, 0.1, 0.5]), [0.0, 0.0, 2.0]);
        assert_verified(&c, &pr);
        assert!(soliton_case2(&params(1.0, 1.0), 0.0).is_err());
    }

    #[test]
    fn case3_examples() {
        let flat = params(0.0, 0.0);
        let rot = soliton_case3(0.0, &coeffs(&[1.0])).unwrap();
        assert_eq!(eval(&rot, &flat, [0.2, 0.3, 0.4]), [-0.3, 0.2, 0.0]);
        assert_eq!(killing_check(&rot, &flat, &SampleGrid::default()).max_abs, 0.0);

        let dil = soliton_case3(2.0, &CoefficientSet::default()).unwrap();
        assert_eq!(eval(&dil, &flat, [0.2, 0.3, 0.4]), [0.2, 0.3, 0.4]);
        assert_verified(&dil, &flat);

        let boost = soliton_case3(0.0, &coeffs(&[0.0, 1.0])).unwrap();
        assert_eq!(eval(&boost, &flat, [0.2, 0.3, 0.4]), [0.4, 0.0, 0.2]);
        assert_eq!(killing_check(&boost, &flat, &SampleGrid::default()).max_abs, 0.0);
        assert!(soliton_case3_on(&params(0.0, 1.0), 0.0, &CoefficientSet::default()).is_err());
    }

    #[test]
    fn classify_examples() {
        let c = classify(&params(1.0, 1.0));
        assert_eq!((c.kind, c.theorem_case, c.gamma), (SolitonKind::None, TheoremCase::I, None));

        let c = classify(&params(2.0, -1.0));
        assert_eq!((c.kind, c.gamma), (SolitonKind::Steady, Some(0.0)));
        assert_eq!(c.theorem_case, TheoremCase::III);
        assert!(c.caveat.is_none());

        let c = classify(&params(0.0, 0.5));
        assert_eq!((c.kind, c.gamma, c.theorem_case), (SolitonKind::Shrinking, Some(2.0), TheoremCase::IV));

        let c = classify(&params(1.0, 0.0));
        assert_eq!((c.kind, c.gamma, c.theorem_case), (SolitonKind::Shrinking, Some(2.0), TheoremCase::II));

        let c = classify(&params(0.0, -1.0));
        assert_eq!((c.kind, c.gamma, c.theorem_case), (SolitonKind::Expanding, Some(-4.0), TheoremCase::V));

        let c = classify(&params(0.0, 0.0));
        assert_eq!((c.kind, c.gamma, c.theorem_case), (SolitonKind::FlatAnyGamma, None, TheoremCase::Flat));
    }

    #[test]
    fn classify_generic_negative_mu_has_caveat() {
        let c = classify(&params(1.0, -0.5));
        assert_eq!(c.kind, SolitonKind::None);
        assert_eq!(c.theorem_case, TheoremCase::III);
        assert!(c.caveat.as_deref().unwrap().contains("mu = -lambda^2/4"));
    }

    #[test]
    fn near_miss_parameters_are_generic() {
        assert_eq!(Branch::of(&params(2.0, -1.0 + 1e-9)), Branch::Case1Obstructed);
        assert_eq!(Branch::of(&params(2.0, -1.0 + 1e-13)), Branch::Case1b);
        assert_eq!(Branch::of(&params(1e-13, 0.5)), Branch::Case2);
    }

    #[test]
    fn killing_check_examples() {
        let pr = params(2.0, -1.0);
        let c = soliton_case1b(&pr, &coeffs(&[0.3, -0.2, 0.5, 1.0, 0.7, -0.4])).unwrap();
        assert!(killing_check(&c, &pr, &SampleGrid::default()).max_abs <= 1e-9);

        let pr = params(1.0, 0.0);
        let c = soliton_case1a(&pr, &CoefficientSet::default()).unwrap();
        assert!(killing_check(&c, &pr, &SampleGrid::default()).max_abs > 1e-3);

        let zero = SolitonCandidate::new(VectorField::zero(), 0.0);
        assert_eq!(killing_check(&zero, &pr, &SampleGrid::default()).max_abs, 0.0);
    }

    #[test]
    fn coefficient_set_bounds() {
        assert!(CoefficientSet::from_slice(&[0.0; 7]).is_err());
        assert!(CoefficientSet::from_slice(&[f64::NAN]).is_err());
        assert_eq!(coeffs(&[1.0, 2.0]).a(2), 2.0);
    }
}
