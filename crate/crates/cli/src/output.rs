//! Serialized forms of command results.
//!
//! Floats are written with 17 significant digits in exponent form, so the
//! bytes depend only on the values and runs are byte-for-byte comparable.

use std::io;

use fio_nuclear::{Complex64, Extraction, KernelMatrix, SampledFunction, Spectrum, TraceReport, Verdict, Verification};
use serde::Serialize;

/// Complex numbers as `{re, im}` records.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cx {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Cx {
    fn from(z: Complex64) -> Self {
        Cx { re: z.re, im: z.im }
    }
}

fn cx_all(v: &[Complex64]) -> Vec<Cx> {
    v.iter().copied().map(Cx::from).collect()
}

struct SeventeenDigits;

impl serde_json::ser::Formatter for SeventeenDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{}", float(value))
    }
}

/// `value` with 17 significant digits, e.g. `1.0000000000000000e0`.
pub fn float(value: f64) -> String {
    format!("{value:.16e}")
}

/// Compact JSON with fixed float formatting and a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SeventeenDigits);
    value.serialize(&mut ser).expect("in-memory serialization cannot fail");
    out.push(b'\n');
    out
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GridRecord {
    #[serde(rename = "L")]
    pub half_width: f64,
    #[serde(rename = "N")]
    pub size: usize,
}

impl From<&fio_nuclear::Grid> for GridRecord {
    fn from(g: &fio_nuclear::Grid) -> Self {
        GridRecord { half_width: g.half_width(), size: g.size() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ApplyRecord {
    pub command: &'static str,
    pub scenario: String,
    pub grid: GridRecord,
    /// `fast` or `dense`.
    pub path: &'static str,
    pub x: Vec<f64>,
    pub values: Vec<Cx>,
}

impl ApplyRecord {
    pub fn new(scenario: &str, out: &SampledFunction, path: &'static str) -> Self {
        let g = out.grid();
        ApplyRecord {
            command: "apply",
            scenario: scenario.into(),
            grid: g.into(),
            path,
            x: g.spatial_nodes(),
            values: cx_all(out.values()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelRecord {
    pub command: &'static str,
    pub scenario: String,
    pub grid: GridRecord,
    /// Row-major `K(x_i, y_j)` without the `dy` weight.
    pub entries: Vec<Cx>,
}

impl KernelRecord {
    pub fn new(scenario: &str, m: &KernelMatrix) -> Self {
        KernelRecord {
            command: "kernel",
            scenario: scenario.into(),
            grid: m.grid().into(),
            entries: cx_all(m.entries()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DiscrepancyRecord {
    pub first: &'static str,
    pub second: &'static str,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ApplicabilityRecord {
    pub p: f64,
    pub r: f64,
    pub spectral_formula_applies: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceRecord {
    pub command: &'static str,
    pub scenario: String,
    pub grid: GridRecord,
    pub formula_trace: Cx,
    pub kernel_trace: Cx,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factored_trace: Option<Cx>,
    pub matrix_trace: Cx,
    pub eigen_sum: Cx,
    pub eigenvalues: Vec<Cx>,
    pub pairwise_discrepancies: Vec<DiscrepancyRecord>,
    pub max_discrepancy: f64,
    pub applicability: ApplicabilityRecord,
}

impl TraceRecord {
    pub fn new(scenario: &str, grid: &fio_nuclear::Grid, r: &TraceReport) -> Self {
        TraceRecord {
            command: "trace",
            scenario: scenario.into(),
            grid: grid.into(),
            formula_trace: r.formula_trace.into(),
            kernel_trace: r.kernel_trace.into(),
            factored_trace: r.factored_trace.map(Cx::from),
            matrix_trace: r.matrix_trace.into(),
            eigen_sum: r.eigen_sum.into(),
            eigenvalues: cx_all(&r.eigenvalues),
            pairwise_discrepancies: r
                .pairwise_discrepancies
                .iter()
                .map(|d| DiscrepancyRecord { first: d.first, second: d.second, value: d.value })
                .collect(),
            max_discrepancy: r.max_discrepancy(),
            applicability: ApplicabilityRecord {
                p: r.applicability.p,
                r: r.applicability.r,
                spectral_formula_applies: r.applicability.spectral_formula_applies,
            },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumRecord {
    pub command: &'static str,
    pub scenario: String,
    pub grid: GridRecord,
    pub eigen_sum: Cx,
    /// Descending modulus.
    pub eigenvalues: Vec<Cx>,
}

impl SpectrumRecord {
    pub fn new(scenario: &str, grid: &fio_nuclear::Grid, s: &Spectrum) -> Self {
        SpectrumRecord {
            command: "spectrum",
            scenario: scenario.into(),
            grid: grid.into(),
            eigen_sum: s.eigen_sum.into(),
            eigenvalues: cx_all(&s.eigenvalues),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyRecord {
    pub command: &'static str,
    pub scenario: String,
    pub grid: GridRecord,
    /// `given` or `extracted`.
    pub source: &'static str,
    pub rank: usize,
    pub max_residual: f64,
    pub e_r_value: f64,
    pub tolerance: f64,
    /// `certified_nuclear` or `rejected`.
    pub verdict: &'static str,
}

impl VerifyRecord {
    pub fn new(
        scenario: &str,
        grid: &fio_nuclear::Grid,
        source: &'static str,
        rank: usize,
        tolerance: f64,
        v: &Verification,
    ) -> Self {
        VerifyRecord {
            command: "verify",
            scenario: scenario.into(),
            grid: grid.into(),
            source,
            rank,
            max_residual: v.max_residual,
            e_r_value: v.e_r_value,
            tolerance,
            verdict: match v.verdict {
                Verdict::CertifiedNuclear => "certified_nuclear",
                Verdict::Rejected => "rejected",
            },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtractionRecord {
    pub rank: usize,
    pub residual_l2: f64,
    pub residual_max: f64,
    pub singular_values: Vec<f64>,
    /// Optimal `L^2` residual at ranks `1, 2, ...`.
    pub residual_by_rank: Vec<f64>,
}

impl ExtractionRecord {
    pub fn new(e: &Extraction, keep: usize) -> Self {
        let keep = keep.min(e.singular_values.len());
        ExtractionRecord {
            rank: e.decomposition.rank(),
            residual_l2: e.residual_l2,
            residual_max: e.residual_max,
            singular_values: e.singular_values[..keep].to_vec(),
            residual_by_rank: e.residual_profile()[..keep].to_vec(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportRecord {
    pub command: &'static str,
    pub scenario: String,
    pub apply: ApplyRecord,
    pub trace: TraceRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyRecord>,
    pub extraction: ExtractionRecord,
    pub plots: Vec<String>,
}

fn csv_bytes(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv");
    for row in rows {
        w.write_record(&row).expect("in-memory csv");
    }
    w.into_inner().expect("in-memory csv")
}

/// `i,x,re,im` rows of a sampled function.
pub fn apply_csv(out: &SampledFunction) -> Vec<u8> {
    let g = *out.grid();
    csv_bytes(
        &["i", "x", "re", "im"],
        out.values().iter().enumerate().map(|(i, v)| vec![i.to_string(), float(g.x(i)), float(v.re), float(v.im)]),
    )
}

/// `i,j,re,im` rows, row-major.
pub fn kernel_csv(m: &KernelMatrix) -> Vec<u8> {
    let n = m.size();
    csv_bytes(
        &["i", "j", "re", "im"],
        m.entries()
            .iter()
            .enumerate()
            .map(|(ij, v)| vec![(ij / n).to_string(), (ij % n).to_string(), float(v.re), float(v.im)]),
    )
}

/// `k,re,im` rows in the reported order.
pub fn eigenvalue_csv(values: &[Complex64]) -> Vec<u8> {
    csv_bytes(&["k", "re", "im"], values.iter().enumerate().map(|(k, v)| vec![k.to_string(), float(v.re), float(v.im)]))
}

/// `name,re,im` rows for the trace values, then the discrepancies.
pub fn trace_csv(r: &TraceReport) -> Vec<u8> {
    let mut rows = vec![("formula_trace", r.formula_trace), ("kernel_trace", r.kernel_trace)];
    if let Some(t) = r.factored_trace {
        rows.push(("factored_trace", t));
    }
    rows.push(("matrix_trace", r.matrix_trace));
    rows.push(("eigen_sum", r.eigen_sum));
    let values = rows.into_iter().map(|(name, v)| vec![name.to_string(), float(v.re), float(v.im)]);
    let gaps =
        r.pairwise_discrepancies.iter().map(|d| vec![format!("{}-{}", d.first, d.second), float(d.value), float(0.0)]);
    csv_bytes(&["quantity", "re", "im"], values.chain(gaps))
}

/// `quantity,value` rows of a verification.
pub fn verify_csv(v: &VerifyRecord) -> Vec<u8> {
    let rows = vec![
        vec!["rank".to_string(), v.rank.to_string()],
        vec!["max_residual".into(), float(v.max_residual)],
        vec!["e_r_value".into(), float(v.e_r_value)],
        vec!["tolerance".into(), float(v.tolerance)],
        vec!["verdict".into(), v.verdict.to_string()],
    ];
    csv_bytes(&["quantity", "value"], rows.into_iter())
}
