//! Least-squares search for polynomial soliton fields.
//!
//! The PDE residual is affine in the field and in `γ`, so the best
//! polynomial candidate of bounded degree over a sample set is a linear
//! least-squares problem. A large remaining residual is evidence (not proof)
//! that no soliton exists for the given parameters.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::geometry::{FramePoint, SpaceParams};
use crate::grid::SampleGrid;
use crate::jets::{Jet2, ScalarField};
use crate::sampling::{monomial_jet, monomials, PolyTrig};
use crate::soliton::{system36_residual, verify_system36, ResidualReport, SolitonCandidate, VectorField};

#[derive(Clone, Debug)]
pub struct ProbeReport {
    pub params: SpaceParams,
    pub degree: u32,
    pub unknowns: usize,
    pub gamma: f64,
    /// Root mean square of the fitted residual over all equations and points.
    pub rms_residual: f64,
    pub residual: ResidualReport,
}

fn polynomial_field(exps: &[[u32; 3]], coeffs: &[f64]) -> VectorField {
    let n = exps.len();
    let comps: [Arc<dyn ScalarField>; 3] = std::array::from_fn(|c| {
        let terms = exps
            .iter()
            .zip(&coeffs[c * n..(c + 1) * n])
            .map(|(&e, &a)| (e, a))
            .collect();
        Arc::new(PolyTrig::polynomial(terms)) as Arc<dyn ScalarField>
    });
    VectorField::from_arcs(comps)
}

/// The field whose component `component` is one monomial and the rest zero.
fn basis_field(component: usize, exp: [u32; 3]) -> VectorField {
    let zero: Arc<dyn ScalarField> = Arc::new(|_: &FramePoint| Jet2::constant(0.0));
    let mut comps = [zero.clone(), zero.clone(), zero];
    comps[component] = Arc::new(move |p: &FramePoint| monomial_jet(exp, p));
    VectorField::from_arcs(comps)
}

/// Fits `(X1, X2, X3)` with polynomials of total degree `≤ degree` and a
/// free `γ` to the six PDE equations on `grid`, and reports the residual of
/// the fitted candidate.
pub fn polynomial_probe(params: &SpaceParams, degree: u32, grid: &SampleGrid) -> ProbeReport {
    let exps = monomials(degree);
    let n = exps.len();
    let unknowns = 3 * n + 1;
    let points = grid.points(params);
    let rows = 6 * points.len();

    let residual_at = |field: &VectorField, gamma: f64, p: &FramePoint| {
        system36_residual(&SolitonCandidate::new(field.clone(), gamma), params, p)
    };
    let zero = VectorField::zero();
    let offset: Vec<[f64; 6]> = points.iter().map(|p| residual_at(&zero, 0.0, p)).collect();

    let mut design = DMatrix::<f64>::zeros(rows, unknowns);
    for col in 0..unknowns {
        let (field, gamma) = if col < 3 * n {
            (basis_field(col / n, exps[col % n]), 0.0)
        } else {
            (zero.clone(), 1.0)
        };
        for (k, p) in points.iter().enumerate() {
            let r = residual_at(&field, gamma, p);
            for e in 0..6 {
                design[(6 * k + e, col)] = r[e] - offset[k][e];
            }
        }
    }
    let rhs = DVector::from_iterator(rows, offset.iter().flat_map(|r| r.iter().map(|v| -v)));

    let svd = design.clone().svd(true, true);
    let solution = svd
        .solve(&rhs, 1e-12)
        .expect("SVD computed with both singular vector sets");

    let coeffs: Vec<f64> = solution.iter().copied().collect();
    let gamma = coeffs[3 * n];
    let candidate = SolitonCandidate::new(polynomial_field(&exps, &coeffs[..3 * n]), gamma);
    let residual = verify_system36(&candidate, params, grid);
    let fitted = &design * &solution - &rhs;
    let rms_residual = (fitted.norm_squared() / rows.max(1) as f64).sqrt();

    ProbeReport {
        params: *params,
        degree,
        unknowns,
        gamma,
        rms_residual,
        residual,
    }
}
