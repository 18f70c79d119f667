use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use lbcv::catalog::{
    classify as classify_params, soliton_case1a, soliton_case1b, soliton_case2, soliton_case3_on,
    Branch, CoefficientSet, SolitonClass,
};
use lbcv::geometry::{
    delta, ricci, ricci_contraction, tables, ContractionWeights, FrameGeometry, FrameIndex,
    FramePoint, SpaceParams,
};
use lbcv::grid::{AxisRange, SampleGrid};
use lbcv::jets::{Jet2, ScalarField};
use lbcv::sampling;
use lbcv::soliton::{verify_frame, verify_system36, ResidualReport, SolitonCandidate, VectorField};

use crate::report::{render, OutputFormat, Record, Value};
use crate::CaseArg;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Lib(#[from] lbcv::Error),
}

type Result<T> = std::result::Result<T, CliError>;

pub struct Outcome {
    pub text: String,
    pub code: u8,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub grid: SampleGrid,
    pub grid_spec: String,
    pub seed: u64,
    pub tolerance: f64,
    pub format: OutputFormat,
}

impl RunConfig {
    pub fn from_args(
        grid: &str,
        random_points: usize,
        seed: u64,
        tolerance: f64,
        format: OutputFormat,
    ) -> Result<Self> {
        if !(tolerance > 0.0) || !tolerance.is_finite() {
            return Err(CliError::Usage(format!(
                "tolerance must be positive and finite, got {tolerance}"
            )));
        }
        let axes = parse_grid(grid)?;
        Ok(RunConfig {
            grid: SampleGrid {
                axes,
                random_points,
                seed,
                ..SampleGrid::default()
            },
            grid_spec: grid.to_string(),
            seed,
            tolerance,
            format,
        })
    }
}

fn parse_range(spec: &str, min_n: usize) -> Result<(f64, f64, usize)> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || CliError::Usage(format!("expected min:max:n, got '{spec}'"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let min: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let max: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if !(min.is_finite() && max.is_finite()) || min > max || n < min_n {
        return Err(bad());
    }
    Ok((min, max, n))
}

/// `xmin:xmax:n` for all three axes or three comma-separated triples.
pub fn parse_grid(spec: &str) -> Result<[AxisRange; 3]> {
    let triples: Vec<&str> = spec.split(',').collect();
    let axis = |s: &str| -> Result<AxisRange> {
        let (min, max, n) = parse_range(s, 2)?;
        Ok(AxisRange::new(min, max, n)?)
    };
    match triples.as_slice() {
        [one] => {
            let a = axis(one)?;
            Ok([a; 3])
        }
        [x, y, z] => Ok([axis(x)?, axis(y)?, axis(z)?]),
        _ => Err(CliError::Usage(format!(
            "grid needs one or three min:max:n triples, got '{spec}'"
        ))),
    }
}

fn space(lambda: f64, mu: f64) -> Result<SpaceParams> {
    SpaceParams::new(lambda, mu).map_err(|e| CliError::Usage(e.to_string()))
}

fn class_fields(r: &mut Record, params: &SpaceParams, class: &SolitonClass, gamma: Option<f64>) {
    r.push("lambda", params.lambda())
        .push("mu", params.mu())
        .push("kind", class.kind.as_str())
        .push("gamma", gamma)
        .push("case", class.theorem_case.as_str())
        .push("caveat", class.caveat.clone());
}

pub fn classify(lambda: f64, mu: f64, format: OutputFormat) -> Result<Outcome> {
    let params = space(lambda, mu)?;
    let class = classify_params(&params);
    let mut r = Record::default();
    class_fields(&mut r, &params, &class, class.gamma);
    r.push("max_residual", None::<f64>)
        .push("worst_point", None::<f64>)
        .push("grid", None::<String>)
        .push("seed", None::<String>)
        .push("tool_version", TOOL_VERSION);
    Ok(Outcome {
        text: render(&[r], true, format),
        code: 0,
    })
}

pub struct VerifyRequest {
    pub lambda: f64,
    pub mu: f64,
    pub case: CaseArg,
    pub coeffs: Option<Vec<f64>>,
    pub shift: Option<f64>,
    pub gamma: Option<f64>,
}

fn case_name(case: CaseArg) -> &'static str {
    match case {
        CaseArg::Case1a => "1a",
        CaseArg::Case1b => "1b",
        CaseArg::Case2 => "2",
        CaseArg::Case3 => "3",
        CaseArg::Custom => "custom",
    }
}

fn coefficients(given: &Option<Vec<f64>>, count: usize, seed: u64) -> Result<Vec<f64>> {
    match given {
        Some(v) if v.len() > count => Err(CliError::Usage(format!(
            "this case takes at most {count} coefficients, got {}",
            v.len()
        ))),
        Some(v) => Ok(v.clone()),
        None => {
            let drawn = sampling::random_coefficients(&mut sampling::rng(seed), 1.0);
            Ok(drawn.0[..count].to_vec())
        }
    }
}

/// A scalar in `[-2, 2]`, drawn after the six coefficients of the same seed.
fn seeded_scalar(seed: u64) -> f64 {
    let mut rng = sampling::rng(seed);
    let _ = sampling::random_coefficients(&mut rng, 1.0);
    2.0 * sampling::random_coefficients(&mut rng, 1.0).0[0]
}

fn affine_field(c: &[f64]) -> VectorField {
    let comp = |k: usize| -> Arc<dyn ScalarField> {
        let a: [f64; 4] = [c[4 * k], c[4 * k + 1], c[4 * k + 2], c[4 * k + 3]];
        Arc::new(move |p: &FramePoint| {
            let [x, y, z] = Jet2::variables(p);
            x * a[1] + y * a[2] + z * a[3] + a[0]
        })
    };
    VectorField::from_arcs([comp(0), comp(1), comp(2)])
}

/// Builds the candidate for `case`, returning it with the coefficients used.
pub fn build_candidate(
    params: &SpaceParams,
    case: CaseArg,
    coeffs: &Option<Vec<f64>>,
    shift: Option<f64>,
    gamma: Option<f64>,
    seed: u64,
) -> Result<(SolitonCandidate, Vec<f64>)> {
    Ok(match case {
        CaseArg::Case1a => {
            let a = coefficients(coeffs, 4, seed)?;
            (soliton_case1a(params, &CoefficientSet::from_slice(&a)?)?, a)
        }
        CaseArg::Case1b => {
            let a = coefficients(coeffs, 6, seed)?;
            (soliton_case1b(params, &CoefficientSet::from_slice(&a)?)?, a)
        }
        CaseArg::Case2 => {
            let a = shift.unwrap_or(0.0);
            (soliton_case2(params, a)?, vec![a])
        }
        CaseArg::Case3 => {
            let a = coefficients(coeffs, 6, seed)?;
            let g = gamma.unwrap_or_else(|| seeded_scalar(seed));
            (soliton_case3_on(params, g, &CoefficientSet::from_slice(&a)?)?, a)
        }
        CaseArg::Custom => {
            let c = coeffs.clone().unwrap_or_default();
            if c.len() != 12 {
                return Err(CliError::Usage(format!(
                    "custom fields take exactly 12 coefficients (c0,cx,cy,cz per component), got {}",
                    c.len()
                )));
            }
            let g = gamma.ok_or_else(|| CliError::Usage("custom fields need --gamma".into()))?;
            if !g.is_finite() || c.iter().any(|v| !v.is_finite()) {
                return Err(CliError::Usage("custom field inputs must be finite".into()));
            }
            (SolitonCandidate::new(affine_field(&c), g), c)
        }
    })
}

fn worst(a: &ResidualReport, b: &ResidualReport) -> Option<Vec<f64>> {
    let r = if b.max_abs > a.max_abs { b } else { a };
    r.worst_point.map(|p| p.coords().to_vec())
}

pub fn verify(req: VerifyRequest, config: RunConfig) -> Result<Outcome> {
    let params = space(req.lambda, req.mu)?;
    let (candidate, used) = build_candidate(
        &params,
        req.case,
        &req.coeffs,
        req.shift,
        req.gamma,
        config.seed,
    )?;
    let system = verify_system36(&candidate, &params, &config.grid);
    let frame = verify_frame(&candidate, &params, &config.grid);
    let max = system.max_abs.max(frame.max_abs);
    let verified = max <= config.tolerance;

    let class = classify_params(&params);
    let mut r = Record::default();
    class_fields(&mut r, &params, &class, Some(candidate.gamma));
    r.push("max_residual", max)
        .push("worst_point", worst(&system, &frame))
        .push("grid", config.grid_spec.clone())
        .push("seed", config.seed)
        .push("tool_version", TOOL_VERSION)
        .push("candidate", case_name(req.case))
        .push("coefficients", used)
        .push("tolerance", config.tolerance)
        .push("verified", verified)
        .push("points_evaluated", system.points_evaluated as u64)
        .push("system_max_residual", system.max_abs)
        .push("frame_max_residual", frame.max_abs)
        .push("per_equation_max", system.per_equation.clone())
        .push("frame_entry_max", frame.per_equation.clone());
    Ok(Outcome {
        text: render(&[r], true, config.format),
        code: if verified { 0 } else { 1 },
    })
}

pub fn geometry(lambda: f64, mu: f64, point: &[f64], format: OutputFormat) -> Result<Outcome> {
    use FrameIndex::*;
    let params = space(lambda, mu)?;
    if point.len() != 3 {
        return Err(CliError::Usage(format!(
            "--point needs three coordinates, got {}",
            point.len()
        )));
    }
    let p = FramePoint::new(&params, point[0], point[1], point[2])?;
    let geo = FrameGeometry::new(&params, &p);
    let diag = |t: [[f64; 3]; 3]| vec![t[0][0], t[1][1], t[2][2]];

    let mut r = Record::default();
    r.push("lambda", lambda)
        .push("mu", mu)
        .push("reference_point", p.coords().to_vec())
        .push("delta", delta(&params, &p))
        .push("ricci_diagonal", diag(ricci(&params)))
        .push(
            "ricci_contracted_diagonal",
            diag(ricci_contraction(&params, &p, ContractionWeights::Unit)),
        )
        .push(
            "ricci_metric_trace_diagonal",
            diag(ricci_contraction(&params, &p, ContractionWeights::Signature)),
        )
        .push("R1212", geo.curvature(E1, E2, E1, E2))
        .push("R1313", geo.curvature(E1, E3, E1, E3))
        .push("R2323", geo.curvature(E2, E3, E2, E3))
        .push("R1212_closed_form", tables::r1212(&params))
        .push("R1313_closed_form", tables::r1313(&params))
        .push("bracket_12", geo.bracket(E1, E2).0.to_vec())
        .push("bracket_13", geo.bracket(E1, E3).0.to_vec())
        .push("bracket_23", geo.bracket(E2, E3).0.to_vec())
        .push("tool_version", TOOL_VERSION);
    Ok(Outcome {
        text: render(&[r], true, format),
        code: 0,
    })
}

fn nodes(spec: &str) -> Result<Vec<f64>> {
    let (min, max, n) = parse_range(spec, 0)?;
    Ok(match n {
        0 => Vec::new(),
        1 => vec![min],
        _ => AxisRange::new(min, max, n)?.nodes().collect(),
    })
}

struct Cell {
    record: Record,
    failed: bool,
}

fn sweep_cell(params: SpaceParams, seed: u64, config: &RunConfig) -> Result<Cell> {
    let class = classify_params(&params);
    let case = match Branch::of(&params) {
        Branch::Case1a => Some(CaseArg::Case1a),
        Branch::Case1b => Some(CaseArg::Case1b),
        Branch::Case2 => Some(CaseArg::Case2),
        Branch::Case3 => Some(CaseArg::Case3),
        Branch::Case1Obstructed => None,
    };
    let grid = config.grid.clone().with_seed(seed);
    let mut r = Record::default();
    let mut failed = false;
    match case {
        Some(case) => {
            let shift = Some(seeded_scalar(seed));
            let (candidate, _) = build_candidate(&params, case, &None, shift, None, seed)?;
            let system = verify_system36(&candidate, &params, &grid);
            let frame = verify_frame(&candidate, &params, &grid);
            let max = system.max_abs.max(frame.max_abs);
            failed = max > config.tolerance;
            class_fields(&mut r, &params, &class, Some(candidate.gamma));
            r.push("max_residual", max)
                .push("worst_point", worst(&system, &frame));
        }
        None => {
            class_fields(&mut r, &params, &class, class.gamma);
            r.push("max_residual", None::<f64>)
                .push("worst_point", Value::Null);
        }
    }
    r.push("grid", config.grid_spec.clone())
        .push("seed", seed)
        .push("tool_version", TOOL_VERSION)
        .push("verified", case.map_or(Value::Null, |_| Value::Bool(!failed)));
    Ok(Cell { record: r, failed })
}

pub fn sweep(lambda_range: &str, mu_range: &str, config: RunConfig) -> Result<Outcome> {
    let lambdas = nodes(lambda_range)?;
    let mus = nodes(mu_range)?;
    let mut cells: Vec<SpaceParams> = Vec::new();
    for &l in &lambdas {
        for &m in &mus {
            cells.push(space(l, m)?);
        }
    }
    cells.sort_by(|a, b| {
        a.lambda()
            .total_cmp(&b.lambda())
            .then(a.mu().total_cmp(&b.mu()))
    });
    let results: Vec<Result<Cell>> = cells
        .par_iter()
        .enumerate()
        .map(|(i, params)| sweep_cell(*params, config.seed.wrapping_add(i as u64), &config))
        .collect();
    let mut records = Vec::with_capacity(results.len());
    let mut any_failed = false;
    for cell in results {
        let cell = cell?;
        any_failed |= cell.failed;
        records.push(cell.record);
    }
    Ok(Outcome {
        text: render(&records, false, config.format),
        code: if any_failed { 1 } else { 0 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g = parse_grid("-1:1:3").unwrap();
        assert_eq!(g[2], AxisRange::new(-1.0, 1.0, 3).unwrap());
        let g = parse_grid("-1:1:3,0:2:4,-0.5:0.5:2").unwrap();
        assert_eq!(g[1].n, 4);
        assert!(parse_grid("-1:1").is_err());
        assert!(parse_grid("-1:1:1").is_err());
        assert!(parse_grid("-1:1:3,0:1:2").is_err());
    }

    #[test]
    fn sweep_nodes_allow_empty() {
        assert!(nodes("0:1:0").unwrap().is_empty());
        assert_eq!(nodes("0:2:3").unwrap(), vec![0.0, 1.0, 2.0]);
    }

    #[test]
    fn custom_field_needs_twelve_coefficients() {
        let params = SpaceParams::new(0.0, 0.0).unwrap();
        let err = build_candidate(&params, CaseArg::Custom, &Some(vec![1.0; 3]), None, Some(0.0), 0);
        assert!(matches!(err, Err(CliError::Usage(_))));
    }
}
