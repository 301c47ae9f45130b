use fio_nuclear::{
    amplitude_matrix, apply_fio_with, discretize, extract_decomposition, spectral_trace_with, trace_report,
    verify_decomposition, ApplyPath, CancelToken, Decomposition, Pairing, SampledFunction, Side, SolverOptions, Symbol,
};

use crate::error::CliError;
use crate::output::{
    self, ApplyRecord, ExtractionRecord, KernelRecord, ReportRecord, SpectrumRecord, TraceRecord, VerifyRecord,
};
use crate::plot;
use crate::scenario::{DecompositionSource, Format, Scenario};

/// Singular values and residuals kept in reports.
const REPORT_PROFILE_LEN: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Apply,
    Kernel,
    Trace,
    Spectrum,
    Verify,
    Report,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Apply => "apply",
            Command::Kernel => "kernel",
            Command::Trace => "trace",
            Command::Spectrum => "spectrum",
            Command::Verify => "verify",
            Command::Report => "report",
        }
    }
}

/// A file to write, relative to the output directory.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub path: std::path::PathBuf,
    pub bytes: Vec<u8>,
}

#[derive(Debug, Clone, Default)]
pub struct RunContext {
    pub cancel: Option<CancelToken>,
}

impl RunContext {
    fn solver(&self, s: &Scenario) -> SolverOptions {
        SolverOptions { max_iterations: s.max_iterations, cancel: self.cancel.clone() }
    }
}

/// Runs one command. The first artifact is the primary result; `report`
/// appends plots when enabled.
pub fn run_command(cmd: Command, s: &Scenario, ctx: &RunContext) -> Result<Vec<Artifact>, CliError> {
    let ext = match s.outputs.format {
        Format::Json => "json",
        Format::Csv => "csv",
    };
    let primary = |bytes: Vec<u8>| Artifact { path: format!("{}.{ext}", cmd.name()).into(), bytes };
    let csv = s.outputs.format == Format::Csv;
    match cmd {
        Command::Apply => {
            let (out, path) = apply(s)?;
            Ok(vec![primary(if csv {
                output::apply_csv(&out)
            } else {
                output::to_json(&ApplyRecord::new(&s.name, &out, path))
            })])
        }
        Command::Kernel => {
            let m = discretize(&s.phase, &s.symbol, &s.grid)?;
            Ok(vec![primary(if csv {
                output::kernel_csv(&m)
            } else {
                output::to_json(&KernelRecord::new(&s.name, &m))
            })])
        }
        Command::Trace => {
            let r = trace_report(&s.phase, &s.symbol, &s.grid, &s.exponents, &ctx.solver(s))?;
            Ok(vec![primary(if csv {
                output::trace_csv(&r)
            } else {
                output::to_json(&TraceRecord::new(&s.name, &s.grid, &r))
            })])
        }
        Command::Spectrum => {
            let m = discretize(&s.phase, &s.symbol, &s.grid)?;
            let sp = spectral_trace_with(&m, &ctx.solver(s))?;
            Ok(vec![primary(if csv {
                output::eigenvalue_csv(&sp.eigenvalues)
            } else {
                output::to_json(&SpectrumRecord::new(&s.name, &s.grid, &sp))
            })])
        }
        Command::Verify => {
            let v = verify(s)?;
            Ok(vec![primary(if csv { output::verify_csv(&v) } else { output::to_json(&v) })])
        }
        // A report nests several records, so it is JSON whatever the format.
        Command::Report => report(s, ctx),
    }
}

fn input(s: &Scenario) -> Result<SampledFunction, CliError> {
    s.input.sample(&s.grid, Side::Spatial).map_err(|e| CliError::at("input", e))
}

fn apply(s: &Scenario) -> Result<(SampledFunction, &'static str), CliError> {
    let f = input(s)?;
    let fast = matches!(&s.symbol, Symbol::Separable(sep) if Pairing::of(&s.phase, &sep.phase).is_some());
    let (path, name) = if fast { (ApplyPath::Fast, "fast") } else { (ApplyPath::Dense, "dense") };
    Ok((apply_fio_with(&s.phase, &s.symbol, &f, path)?, name))
}

fn extraction_rank(s: &Scenario) -> usize {
    s.rank().unwrap_or(1).clamp(1, s.grid.size())
}

/// The decomposition to check: given factors, an extraction, or the
/// symbol's own factors. It is checked against `exp(i phi) a` with the
/// operator phase.
fn verify(s: &Scenario) -> Result<VerifyRecord, CliError> {
    let (d, source): (Decomposition, &'static str) = match (&s.decomposition, &s.symbol) {
        (Some(DecompositionSource::Given(d)), _) => (d.clone(), "given"),
        (Some(DecompositionSource::Extract(k)), _) => {
            let m = amplitude_matrix(&s.phase, &s.symbol, &s.grid)?;
            (extract_decomposition(&m, *k, s.exponents)?.decomposition, "extracted")
        }
        (None, Symbol::Separable(sep)) => (sep.decomposition.with_exponents(s.exponents), "symbol"),
        (None, _) => {
            return Err(CliError::validation(
                "decomposition",
                "verify needs explicit factors, an extraction rank, or a separable symbol",
            ))
        }
    };
    let v = verify_decomposition(&s.symbol, &d, &s.phase, s.tolerance)?;
    Ok(VerifyRecord::new(&s.name, &s.grid, source, d.rank(), s.tolerance, &v))
}

fn report(s: &Scenario, ctx: &RunContext) -> Result<Vec<Artifact>, CliError> {
    let (out, path) = apply(s)?;
    let trace = trace_report(&s.phase, &s.symbol, &s.grid, &s.exponents, &ctx.solver(s))?;
    let verify = match (&s.decomposition, &s.symbol) {
        (None, sym) if sym.as_separable().is_none() => None,
        _ => Some(verify(s)?),
    };
    let m = amplitude_matrix(&s.phase, &s.symbol, &s.grid)?;
    let extraction = extract_decomposition(&m, extraction_rank(s), s.exponents)?;
    let extraction = ExtractionRecord::new(&extraction, REPORT_PROFILE_LEN);

    let mut plots = Vec::new();
    if s.outputs.plots {
        let dir = &s.outputs.plot_dir;
        let x = s.grid.spatial_nodes();
        let modulus: Vec<f64> = out.values().iter().map(|v| v.norm()).collect();
        plots.push(Artifact {
            path: dir.join("apply_modulus.svg"),
            bytes: plot::line_plot(&format!("|F f| ({})", s.name), "x", "|F f(x)|", &x, &modulus).into_bytes(),
        });
        let re: Vec<f64> = trace.eigenvalues.iter().map(|v| v.re).collect();
        let im: Vec<f64> = trace.eigenvalues.iter().map(|v| v.im).collect();
        plots.push(Artifact {
            path: dir.join("eigenvalues.svg"),
            bytes: plot::scatter_plot(&format!("eigenvalues ({})", s.name), "Re", "Im", &re, &im).into_bytes(),
        });
        let ranks: Vec<f64> = (1..=extraction.residual_by_rank.len()).map(|k| k as f64).collect();
        let log_residual: Vec<f64> = extraction.residual_by_rank.iter().map(|r| r.max(1e-300).log10()).collect();
        plots.push(Artifact {
            path: dir.join("residual_by_rank.svg"),
            bytes: plot::line_plot(
                &format!("decomposition residual ({})", s.name),
                "rank K",
                "log10 residual",
                &ranks,
                &log_residual,
            )
            .into_bytes(),
        });
    }
    let record = ReportRecord {
        command: "report",
        scenario: s.name.clone(),
        apply: ApplyRecord::new(&s.name, &out, path),
        trace: TraceRecord::new(&s.name, &s.grid, &trace),
        verify,
        extraction,
        plots: plots.iter().map(|p| p.path.to_string_lossy().replace('\\', "/")).collect(),
    };
    let mut artifacts = vec![Artifact { path: "report.json".into(), bytes: output::to_json(&record) }];
    artifacts.extend(plots);
    Ok(artifacts)
}
