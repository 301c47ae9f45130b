//! Scenario files: the single JSON input describing one computation.

use std::path::{Path, PathBuf};

use fio_nuclear::{
    Complex64, Decomposition, Exponents, FactorPair, Grid, PhaseFn, PhasePolynomial, Profile, Regime, Side, Symbol,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Smallest grid a scenario may ask for.
pub const MIN_GRID_SIZE: usize = 16;

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default)]
    pub name: Option<String>,
    /// Base seed for `random_packet` profiles.
    #[serde(default)]
    pub seed: u64,
    pub grid: GridSpec,
    pub phase: FamilySpec,
    pub symbol: SymbolSpec,
    #[serde(default)]
    pub decomposition: Option<DecompositionSpec>,
    #[serde(default)]
    pub exponents: ExponentSpec,
    /// Input function for `apply`; the unit Gaussian when absent.
    #[serde(default)]
    pub input: Option<FamilySpec>,
    #[serde(default)]
    pub eigen: EigenSpec,
    #[serde(default)]
    pub outputs: OutputSpec,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(rename = "L")]
    pub half_width: f64,
    #[serde(rename = "N")]
    pub size: i64,
}

/// `{family, params}`, used for phases and profiles alike.
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub family: String,
    #[serde(default)]
    pub params: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FactorSpec {
    pub h: FamilySpec,
    pub g: FamilySpec,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Perturbation {
    pub i: usize,
    pub j: usize,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

/// `kind` is one of `zero`, `constant` (`params = [re, im]`), `product`
/// (`spatial`, `frequency`) or `separable` (`factors`, optional `phase`: the
/// symbol is `exp(-i phase) sum h g`, zero phase when absent).
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolSpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spatial: Option<FamilySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frequency: Option<FamilySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<FactorSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<FamilySpec>,
    /// Adds a value to one node of the tabulated symbol.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturb: Option<Perturbation>,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum DecompositionSpec {
    /// Explicit factor pairs.
    Factors(Vec<FactorSpec>),
    /// Best rank-`K` factorization of the amplitude kernel.
    Extract(usize),
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ExponentSpec {
    pub p1: f64,
    pub p2: f64,
    pub r: f64,
    pub regime: String,
}

impl Default for ExponentSpec {
    fn default() -> Self {
        ExponentSpec { p1: 2.0, p2: 2.0, r: 1.0, regime: "low".into() }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct EigenSpec {
    #[serde(default)]
    pub max_iterations: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub plots: bool,
    #[serde(default = "default_plot_dir")]
    pub plot_dir: PathBuf,
}

fn default_plot_dir() -> PathBuf {
    PathBuf::from("plots")
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec { format: Format::Json, plots: false, plot_dir: default_plot_dir() }
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub grid_n: Option<i64>,
    pub tolerance: Option<f64>,
    pub format: Option<Format>,
    pub plots: bool,
}

/// How `verify` and `report` obtain a decomposition.
#[derive(Debug, Clone, PartialEq)]
pub enum DecompositionSource {
    Given(Decomposition),
    Extract(usize),
}

/// A validated scenario with every family resolved on its grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub seed: u64,
    pub grid: Grid,
    pub phase: PhaseFn,
    pub symbol: Symbol,
    pub decomposition: Option<DecompositionSource>,
    pub exponents: Exponents,
    pub input: Profile,
    pub max_iterations: Option<usize>,
    pub tolerance: f64,
    pub outputs: OutputSpec,
}

impl Scenario {
    /// Number of separable terms of the symbol, or of the given decomposition.
    pub fn rank(&self) -> Option<usize> {
        match (&self.symbol, &self.decomposition) {
            (Symbol::Separable(s), _) => Some(s.decomposition.rank()),
            (_, Some(DecompositionSource::Given(d))) => Some(d.rank()),
            (_, Some(DecompositionSource::Extract(k))) => Some(*k),
            _ => None,
        }
    }
}

pub fn load_scenario(path: &Path) -> Result<Scenario, CliError> {
    load_scenario_with(path, &Overrides::default())
}

pub fn load_scenario_with(path: &Path, overrides: &Overrides) -> Result<Scenario, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::validation("scenario", format!("cannot read {}: {e}", path.display())))?;
    parse_scenario(&text, overrides)
}

/// Parses and validates scenario text. Syntax and schema errors carry the
/// line and column reported by the parser.
pub fn parse_scenario(text: &str, overrides: &Overrides) -> Result<Scenario, CliError> {
    let file: ScenarioFile = serde_json::from_str(text).map_err(|e| CliError::validation("scenario", e.to_string()))?;
    resolve(&file, overrides)
}

pub fn resolve(file: &ScenarioFile, overrides: &Overrides) -> Result<Scenario, CliError> {
    let seed = overrides.seed.unwrap_or(file.seed);
    let grid = resolve_grid(&file.grid, overrides.grid_n)?;
    let phase = resolve_phase(&file.phase, "phase")?;
    let exponents = resolve_exponents(&file.exponents)?;
    let symbol = resolve_symbol(&file.symbol, &grid, seed, exponents)?;
    let decomposition = match &file.decomposition {
        None => None,
        Some(DecompositionSpec::Factors(f)) => {
            Some(DecompositionSource::Given(resolve_factors(f, "decomposition.factors", &grid, seed, exponents)?))
        }
        Some(DecompositionSpec::Extract(k)) => {
            if *k == 0 || *k > grid.size() {
                return Err(CliError::validation(
                    "decomposition.extract",
                    format!("rank must lie in 1..={}, got {k}", grid.size()),
                ));
            }
            Some(DecompositionSource::Extract(*k))
        }
    };
    let input = match &file.input {
        Some(spec) => resolve_profile(spec, "input", seed)?,
        None => Profile::unit_gaussian(),
    };
    let tolerance = overrides.tolerance.unwrap_or(fio_nuclear::DEFAULT_CERTIFICATION_TOLERANCE);
    if !(tolerance.is_finite() && tolerance >= 0.0) {
        return Err(CliError::validation("tolerance", format!("must be finite and nonnegative, got {tolerance}")));
    }
    if file.eigen.max_iterations == Some(0) {
        return Err(CliError::validation("eigen.max_iterations", "must be positive"));
    }
    let mut outputs = file.outputs.clone();
    if let Some(format) = overrides.format {
        outputs.format = format;
    }
    outputs.plots |= overrides.plots;
    Ok(Scenario {
        name: file.name.clone().unwrap_or_else(|| "scenario".into()),
        seed,
        grid,
        phase,
        symbol,
        decomposition,
        exponents,
        input,
        max_iterations: file.eigen.max_iterations,
        tolerance,
        outputs,
    })
}

fn resolve_grid(spec: &GridSpec, n_override: Option<i64>) -> Result<Grid, CliError> {
    let n = n_override.unwrap_or(spec.size);
    if n < MIN_GRID_SIZE as i64 || n % 2 != 0 {
        return Err(CliError::validation("grid.N", format!("must be even and at least {MIN_GRID_SIZE}, got {n}")));
    }
    if !(spec.half_width > 0.0 && spec.half_width.is_finite()) {
        return Err(CliError::validation("grid.L", format!("must be positive and finite, got {}", spec.half_width)));
    }
    Grid::new(spec.half_width, n as usize).map_err(|e| CliError::at("grid", e))
}

fn resolve_exponents(spec: &ExponentSpec) -> Result<Exponents, CliError> {
    let regime = match spec.regime.as_str() {
        "low" => Regime::Low,
        "high" => Regime::High,
        other => {
            return Err(CliError::validation(
                "exponents.regime",
                format!("expected \"low\" or \"high\", got {other:?}"),
            ))
        }
    };
    Exponents::new(spec.r, spec.p1, spec.p2, regime).map_err(|e| {
        let field = match &e {
            fio_nuclear::Error::Regime(_) => "exponents.p1",
            _ => "exponents",
        };
        CliError::at(field, e)
    })
}

fn arity(field: &str, params: &[f64], allowed: &[usize]) -> Result<(), CliError> {
    if allowed.contains(&params.len()) {
        Ok(())
    } else {
        let want: Vec<String> = allowed.iter().map(|n| n.to_string()).collect();
        Err(CliError::validation(
            format!("{field}.params"),
            format!("expected {} parameters, got {}", want.join(" or "), params.len()),
        ))
    }
}

fn nonnegative_integer(field: &str, v: f64) -> Result<usize, CliError> {
    if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
        Ok(v as usize)
    } else {
        Err(CliError::validation(format!("{field}.params"), format!("expected a nonnegative integer, got {v}")))
    }
}

pub fn resolve_phase(spec: &FamilySpec, field: &str) -> Result<PhaseFn, CliError> {
    let p = &spec.params;
    let phase = match spec.family.as_str() {
        "zero" => {
            arity(field, p, &[0])?;
            PhaseFn::zero()
        }
        "kohn_nirenberg" => {
            arity(field, p, &[0])?;
            PhaseFn::KohnNirenberg
        }
        "constant" => {
            arity(field, p, &[1])?;
            PhaseFn::LinearShifted { shift: 0.0, offset: p[0] }
        }
        "linear_shifted" => {
            arity(field, p, &[2])?;
            PhaseFn::LinearShifted { shift: p[0], offset: p[1] }
        }
        "polynomial" => {
            if !p.len().is_multiple_of(3) {
                return Err(CliError::validation(
                    format!("{field}.params"),
                    format!("expected (m, q, c) triples, got {} values", p.len()),
                ));
            }
            let terms = p
                .chunks(3)
                .map(|t| Ok((nonnegative_integer(field, t[0])?, nonnegative_integer(field, t[1])?, t[2])))
                .collect::<Result<Vec<_>, CliError>>()?;
            PhaseFn::Polynomial(
                PhasePolynomial::from_terms(&terms).map_err(|e| CliError::at(format!("{field}.params"), e))?,
            )
        }
        other => {
            return Err(CliError::validation(format!("{field}.family"), format!("unknown phase family {other:?}")))
        }
    };
    phase.validate().map_err(|e| CliError::at(field, e))?;
    Ok(phase)
}

pub fn resolve_profile(spec: &FamilySpec, field: &str, seed: u64) -> Result<Profile, CliError> {
    let p = &spec.params;
    let profile = match spec.family.as_str() {
        "zero" => {
            arity(field, p, &[0])?;
            Profile::Zero
        }
        "constant" => {
            arity(field, p, &[1, 2])?;
            Profile::Constant(Complex64::new(p[0], p.get(1).copied().unwrap_or(0.0)))
        }
        "unit_gaussian" => {
            arity(field, p, &[0])?;
            Profile::unit_gaussian()
        }
        "gaussian" => {
            arity(field, p, &[3, 4])?;
            Profile::Gaussian {
                amplitude: Complex64::new(p[0], 0.0),
                center: p[1],
                width: p[2],
                frequency: p.get(3).copied().unwrap_or(0.0),
            }
        }
        "indicator" => {
            arity(field, p, &[2, 3])?;
            Profile::Indicator { amplitude: Complex64::new(p.get(2).copied().unwrap_or(1.0), 0.0), lo: p[0], hi: p[1] }
        }
        "hermite_gaussian" => {
            arity(field, p, &[1])?;
            Profile::hermite_gaussian(nonnegative_integer(field, p[0])?)
        }
        "poly_gaussian" => {
            if p.len() < 3 || p.len().is_multiple_of(2) {
                return Err(CliError::validation(
                    format!("{field}.params"),
                    "expected a width followed by (re, im) coefficient pairs",
                ));
            }
            Profile::PolyGaussian {
                coeffs: p[1..].chunks(2).map(|c| Complex64::new(c[0], c[1])).collect(),
                width: p[0],
            }
        }
        "random_packet" => {
            arity(field, p, &[1, 2])?;
            let terms = nonnegative_integer(field, p[0])?;
            let offset = p.get(1).map(|v| nonnegative_integer(field, *v)).transpose()?.unwrap_or(0);
            Profile::random_packet(seed.wrapping_add(offset as u64), terms)
        }
        other => {
            return Err(CliError::validation(format!("{field}.family"), format!("unknown profile family {other:?}")))
        }
    };
    profile.validate().map_err(|e| CliError::at(field, e))?;
    Ok(profile)
}

fn resolve_factors(
    specs: &[FactorSpec],
    field: &str,
    grid: &Grid,
    seed: u64,
    exponents: Exponents,
) -> Result<Decomposition, CliError> {
    if specs.is_empty() {
        return Err(CliError::validation(field, "needs at least one factor pair"));
    }
    let factors = specs
        .iter()
        .enumerate()
        .map(|(k, f)| {
            let h = resolve_profile(&f.h, &format!("{field}[{k}].h"), seed)?;
            let g = resolve_profile(&f.g, &format!("{field}[{k}].g"), seed)?;
            Ok(FactorPair {
                h: h.sample(grid, Side::Spatial).map_err(|e| CliError::at(format!("{field}[{k}].h"), e))?,
                g: g.sample(grid, Side::Frequency).map_err(|e| CliError::at(format!("{field}[{k}].g"), e))?,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Decomposition::new(factors, exponents).map_err(|e| CliError::at(field, e))
}

fn resolve_symbol(spec: &SymbolSpec, grid: &Grid, seed: u64, exponents: Exponents) -> Result<Symbol, CliError> {
    fn required<'a, T>(v: &'a Option<T>, field: &str, kind: &str) -> Result<&'a T, CliError> {
        v.as_ref().ok_or_else(|| CliError::validation(field, format!("required for kind {kind:?}")))
    }
    let allowed: &[&str] = match spec.kind.as_str() {
        "zero" => &[],
        "constant" => &["params"],
        "product" => &["spatial", "frequency"],
        "separable" => &["factors", "phase"],
        other => return Err(CliError::validation("symbol.kind", format!("unknown symbol kind {other:?}"))),
    };
    let present = [
        ("params", spec.params.is_some()),
        ("spatial", spec.spatial.is_some()),
        ("frequency", spec.frequency.is_some()),
        ("factors", spec.factors.is_some()),
        ("phase", spec.phase.is_some()),
    ];
    if let Some((name, _)) = present.iter().find(|(name, set)| *set && !allowed.contains(name)) {
        return Err(CliError::validation(format!("symbol.{name}"), format!("not allowed for kind {:?}", spec.kind)));
    }
    let symbol = match spec.kind.as_str() {
        "zero" => Symbol::zero(),
        "constant" => {
            let params = required(&spec.params, "symbol.params", "constant")?;
            arity("symbol", params, &[1, 2])?;
            Symbol::constant(Complex64::new(params[0], params.get(1).copied().unwrap_or(0.0)))
        }
        "product" => Symbol::product(
            resolve_profile(required(&spec.spatial, "symbol.spatial", "product")?, "symbol.spatial", seed)?,
            resolve_profile(required(&spec.frequency, "symbol.frequency", "product")?, "symbol.frequency", seed)?,
        ),
        _ => {
            let factors = required(&spec.factors, "symbol.factors", "separable")?;
            let d = resolve_factors(factors, "symbol.factors", grid, seed, exponents)?;
            let phase = match &spec.phase {
                Some(p) => resolve_phase(p, "symbol.phase")?,
                None => PhaseFn::zero(),
            };
            Symbol::separable(d, phase).map_err(|e| CliError::at("symbol", e))?
        }
    };
    match &spec.perturb {
        None => Ok(symbol),
        Some(p) => {
            let n = grid.size();
            if p.i >= n || p.j >= n {
                return Err(CliError::validation(
                    "symbol.perturb",
                    format!("node ({}, {}) outside a {n}-point grid", p.i, p.j),
                ));
            }
            let table = symbol
                .tabulate(grid)
                .and_then(|t| t.perturbed(p.i, p.j, Complex64::new(p.re, p.im)))
                .map_err(|e| CliError::at("symbol.perturb", e))?;
            Ok(Symbol::Tabulated(table))
        }
    }
}
