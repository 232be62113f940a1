//! Multi-point driver: each singular point `c` and cohomology degree `k`
//! of the direct image is an independent local computation over
//! user-supplied branch data.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::branch::{ramification_order, Branch, BranchError, ValidationReport};
use crate::cyclotomic::{self, CycloNum, CycloPoly, RatFunc};
use crate::decomposition::{decompose, ExponentialFactor, FormalDecomposition};
use crate::newton::{to_svg, NewtonPolygon};
use crate::resolution::{
    build_resolution, chi_psi, plane_branches, verify_corollary_with, zeta_psi, ResolutionError,
};

pub const DEFAULT_TRUNCATION: u32 = 8;

/// Exit status for success, input errors and oracle disagreement.
pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INCONSISTENT: i32 = 3;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{line}:{column}: {message}")]
    Parse { path: String, line: usize, column: usize, message: String },
    #[error("{location}: {message}")]
    Validation { location: String, message: String },
    #[error("{location}: cyclotomic order {order} exceeds the cap {cap}")]
    OrderCap { location: String, order: u32, cap: u32 },
}

impl PipelineError {
    pub fn exit_code(&self) -> i32 {
        EXIT_INPUT
    }

    pub fn parse(path: &str, e: &serde_json::Error) -> Self {
        PipelineError::Parse { path: path.into(), line: e.line(), column: e.column(), message: e.to_string() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileOptions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_order: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<bool>,
    /// Write one SVG per point; `{c}` and `{k}` in the path are replaced.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub svg: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointInput {
    pub c: String,
    #[serde(default)]
    pub k: i64,
    #[serde(default)]
    pub branches: Vec<Branch>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemFile {
    pub points: Vec<PointInput>,
    #[serde(default)]
    pub options: Option<FileOptions>,
}

/// Effective options after merging flags over the file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Options {
    pub truncation: u32,
    pub max_order: u32,
    pub oracle: bool,
    pub svg: Option<String>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            truncation: DEFAULT_TRUNCATION,
            max_order: cyclotomic::DEFAULT_MAX_ORDER,
            oracle: true,
            svg: None,
        }
    }
}

impl Options {
    /// Flags take precedence over file options, which take precedence over defaults.
    pub fn merge(flags: &FileOptions, file: Option<&FileOptions>) -> Options {
        let d = Options::default();
        let pick = |f: &dyn Fn(&FileOptions) -> Option<u32>, dflt: u32| {
            f(flags).or_else(|| file.and_then(f)).unwrap_or(dflt)
        };
        Options {
            truncation: pick(&|o| o.truncation, d.truncation),
            max_order: pick(&|o| o.max_order, d.max_order),
            oracle: flags.oracle.or_else(|| file.and_then(|o| o.oracle)).unwrap_or(d.oracle),
            svg: flags.svg.clone().or_else(|| file.and_then(|o| o.svg.clone())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Consistent,
    Inconsistent,
}

/// Blow-up cross-check of one exponential factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorCheck {
    pub alpha: crate::laurent::LaurentPoly,
    /// Unramified copies grouped under `alpha`, as plane branch labels.
    pub members: Vec<String>,
    /// Copies whose strict transform meets the last exceptional curve.
    pub by_transform: Vec<String>,
    pub membership_agrees: bool,
    pub star_agrees: bool,
    /// Intersection points on the last exceptional curve, by label.
    pub ed_points: Vec<(String, CycloNum)>,
    /// Euler characteristic of the nearby cycles at rank 1.
    pub chi: i64,
    pub chi_expected: i64,
    pub chi_rank_independent: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta: Option<RatFunc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta_expected: Option<RatFunc>,
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum OracleOutcome {
    Checked { factors: Vec<FactorCheck> },
    /// The oracle could not decide, e.g. the holomorphic parts are too short.
    Inconclusive { reason: String },
    /// The blow-up chain itself broke down.
    Failed { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointReport {
    pub c: String,
    pub k: i64,
    pub status: Status,
    pub validation: Vec<ValidationReport>,
    pub polygon: NewtonPolygon,
    pub vertices: Vec<(String, String)>,
    pub slopes: Vec<String>,
    pub irregularity: String,
    pub regular: bool,
    pub decomposition: FormalDecomposition,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleOutcome>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub status: Status,
    pub points: Vec<PointReport>,
}

impl Document {
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Consistent => EXIT_OK,
            Status::Inconsistent => EXIT_INCONSISTENT,
        }
    }
}

fn invalid(location: String, e: impl std::fmt::Display) -> PipelineError {
    PipelineError::Validation { location, message: e.to_string() }
}

/// Validate every branch of one point and bound the cyclotomic orders the
/// computation will reach.
pub fn validate_point(
    location: &str,
    branches: &[Branch],
    opts: &Options,
) -> Result<Vec<ValidationReport>, PipelineError> {
    let mut reports = Vec::with_capacity(branches.len());
    for (j, b) in branches.iter().enumerate() {
        let loc = format!("{location}.branches[{j}] ({:?})", b.label);
        let report = b.validate(opts.truncation).map_err(|e| match e {
            BranchError::Invalid { violation, .. } => invalid(loc.clone(), violation),
            e => invalid(loc.clone(), e),
        })?;
        reports.push(report);
        if let Some(i) = branches[..j].iter().position(|o| o.label == b.label) {
            return Err(invalid(loc, format!("label repeats branches[{i}]")));
        }
    }
    if branches.is_empty() {
        return Ok(reports);
    }
    let p = ramification_order(branches).map_err(|e| invalid(location.into(), e))?;
    let mut order = p;
    for b in branches {
        for c in b.alpha.terms().values().chain(b.delta.terms().values()) {
            order = cyclotomic::lcm(order, c.order());
        }
        order = cyclotomic::lcm(order, b.zeta.order());
    }
    // the zeta functions of the oracle are computed over the same field
    if order > opts.max_order {
        return Err(PipelineError::OrderCap { location: location.into(), order, cap: opts.max_order });
    }
    Ok(reports)
}

fn plane_label(label: &str, root: u32, p_l: u32) -> String {
    if p_l == 1 {
        label.to_string()
    } else {
        format!("{label}#{root}")
    }
}

fn check_factor(
    factor: &ExponentialFactor,
    planes: &[(Branch, u32)],
    source: &[Branch],
) -> Result<FactorCheck, ResolutionError> {
    let rep = verify_corollary_with(planes, &factor.alpha)?;
    let p_of = |label: &str| source.iter().find(|b| b.label == label).map_or(1, |b| b.p);
    let mut members: Vec<String> =
        factor.members.iter().map(|m| plane_label(&m.label, m.root, p_of(&m.label))).collect();
    members.sort();
    let tree = build_resolution(&factor.alpha)?;
    let chi = chi_psi(&tree, &rep.results, 1);
    let chi_rank_independent = (2..=6).all(|r| chi_psi(&tree, &rep.results, r) == chi);
    let chi_expected = -rep
        .results
        .iter()
        .filter(|r| members.contains(&r.label))
        .map(|r| r.m as i64)
        .sum::<i64>();
    let (zeta, zeta_expected) = if rep.points_distinct {
        let zr = CycloPoly::from_ints(&[-1, 1]);
        let z = zeta_psi(&tree, &rep.results, &zr)?;
        let mut want = RatFunc::one();
        for r in rep.results.iter().filter(|r| members.contains(&r.label)) {
            want = want.mul(&RatFunc::from_poly(r.zeta.clone()).pow(-1)?);
        }
        (Some(z), Some(want))
    } else {
        (None, None)
    };
    let ed_points = rep
        .results
        .iter()
        .filter_map(|r| r.point_on_ed.clone().map(|p| (r.label.clone(), p)))
        .collect();
    let consistent = rep.agrees()
        && members == rep.by_transform
        && chi == chi_expected
        && chi_rank_independent
        && zeta == zeta_expected;
    Ok(FactorCheck {
        alpha: factor.alpha.clone(),
        members,
        by_transform: rep.by_transform,
        membership_agrees: rep.membership_agrees,
        star_agrees: rep.star_agrees,
        ed_points,
        chi,
        chi_expected,
        chi_rank_independent,
        zeta,
        zeta_expected,
        consistent,
    })
}

/// Blow-up cross-check of every factor, on the unramified copies.
pub fn oracle_check(branches: &[Branch], decomposition: &FormalDecomposition, truncation: u32) -> OracleOutcome {
    let planes = match plane_branches(branches, decomposition.p, truncation) {
        Ok(p) => p,
        Err(e) => return OracleOutcome::Failed { reason: e.to_string() },
    };
    let mut factors = Vec::with_capacity(decomposition.factors.len());
    for f in &decomposition.factors {
        match check_factor(f, &planes, branches) {
            Ok(c) => factors.push(c),
            Err(e @ ResolutionError::Truncation { .. }) => {
                return OracleOutcome::Inconclusive { reason: e.to_string() }
            }
            Err(e) => return OracleOutcome::Failed { reason: e.to_string() },
        }
    }
    OracleOutcome::Checked { factors }
}

/// Invariants of one point; `branches` must already be validated.
pub fn run_point(c: &str, k: i64, branches: &[Branch], opts: &Options) -> Result<PointReport, PipelineError> {
    let location = format!("point (c = {c:?}, k = {k})");
    let validation = validate_point(&location, branches, opts)?;
    let polygon = NewtonPolygon::from_branches(branches);
    let decomposition = decompose(branches).map_err(|e| invalid(location.clone(), e))?;
    let oracle = opts.oracle.then(|| oracle_check(branches, &decomposition, opts.truncation));
    let status = match &oracle {
        None | Some(OracleOutcome::Inconclusive { .. }) => Status::Consistent,
        Some(OracleOutcome::Failed { .. }) => Status::Inconsistent,
        Some(OracleOutcome::Checked { factors }) => {
            if factors.iter().all(|f| f.consistent) {
                Status::Consistent
            } else {
                Status::Inconsistent
            }
        }
    };
    Ok(PointReport {
        c: c.to_string(),
        k,
        status,
        validation,
        vertices: polygon.vertices().iter().map(|(x, y)| (x.to_string(), y.to_string())).collect(),
        slopes: polygon.slopes().iter().map(ToString::to_string).collect(),
        irregularity: polygon.irregularity().to_string(),
        regular: polygon.is_empty(),
        polygon,
        decomposition,
        oracle,
    })
}

/// Parse a JSON document, reporting the location of syntax and schema errors.
pub fn parse_json<T: serde::de::DeserializeOwned>(path: &str, text: &str) -> Result<T, PipelineError> {
    serde_json::from_str(text).map_err(|e| PipelineError::parse(path, &e))
}

pub fn read_input(path: &Path) -> Result<String, PipelineError> {
    std::fs::read_to_string(path).map_err(|source| PipelineError::Io { path: path.into(), source })
}

pub fn write_output(path: &Path, text: &str) -> Result<(), PipelineError> {
    std::fs::write(path, text).map_err(|source| PipelineError::Io { path: path.into(), source })
}

pub fn svg_path(template: &str, c: &str, k: i64) -> PathBuf {
    let safe: String = c.chars().map(|ch| if ch.is_ascii_alphanumeric() || ch == '-' { ch } else { '_' }).collect();
    PathBuf::from(template.replace("{c}", &safe).replace("{k}", &k.to_string()))
}

pub fn emit_svg(polygon: &NewtonPolygon, path: &Path) -> Result<(), PipelineError> {
    write_output(path, &to_svg(polygon))
}

/// Points sorted by `(c, k)`; duplicates are rejected.
pub fn sorted_points(file: &ProblemFile) -> Result<Vec<&PointInput>, PipelineError> {
    let mut points: Vec<&PointInput> = file.points.iter().collect();
    points.sort_by(|a, b| (&a.c, a.k).cmp(&(&b.c, b.k)));
    for w in points.windows(2) {
        if (&w[0].c, w[0].k) == (&w[1].c, w[1].k) {
            return Err(invalid(format!("point (c = {:?}, k = {})", w[1].c, w[1].k), "duplicate point"));
        }
    }
    Ok(points)
}

/// Parse the problem text with the cyclotomic order cap in force.
pub fn load_problem(path: &str, text: &str, flags: &FileOptions) -> Result<(ProblemFile, Options), PipelineError> {
    // the cap must be active while coefficients are parsed
    if let Some(m) = flags.max_order {
        cyclotomic::set_max_order(m);
    }
    let file: ProblemFile = parse_json(path, text)?;
    let opts = Options::merge(flags, file.options.as_ref());
    cyclotomic::set_max_order(opts.max_order);
    Ok((file, opts))
}

/// Run every point of a parsed problem; SVGs are written when requested.
pub fn run_problem(file: &ProblemFile, opts: &Options) -> Result<Document, PipelineError> {
    let mut reports = Vec::with_capacity(file.points.len());
    for pt in sorted_points(file)? {
        let report = run_point(&pt.c, pt.k, &pt.branches, opts)?;
        if let Some(t) = &opts.svg {
            emit_svg(&report.polygon, &svg_path(t, &pt.c, pt.k))?;
        }
        reports.push(report);
    }
    let status = if reports.iter().all(|r| r.status == Status::Consistent) {
        Status::Consistent
    } else {
        Status::Inconsistent
    };
    Ok(Document { status, points: reports })
}

/// Read, parse and run a problem file.
pub fn run_file(path: &Path, flags: &FileOptions) -> Result<Document, PipelineError> {
    let text = read_input(path)?;
    let (file, opts) = load_problem(&path.display().to_string(), &text, flags)?;
    run_problem(&file, &opts)
}
