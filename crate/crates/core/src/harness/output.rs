//! Versioned CSV tables, JSON metadata sidecars and atomic writes.
//!
//! Every CSV starts with `# levelcorr-csv v1 kind=<kind>`; readers reject any
//! other version. The sidecar of `name.csv` is `name.json`.

use std::io::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::correlator::CorrelatorGrid;
use crate::error::{Error, Result};
use crate::kernel::AnalyticGrid;

pub const CSV_VERSION: &str = "v1";
const CSV_MAGIC: &str = "# levelcorr-csv";

pub fn header_line(kind: &str) -> String {
    format!("{CSV_MAGIC} {CSV_VERSION} kind={kind}")
}

/// Writes `bytes` to a temporary file in the target directory and renames it
/// into place, so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// CSV text with the version comment, a header row and `rows`.
pub fn csv_bytes<I>(kind: &str, header: &[&str], rows: I) -> Result<Vec<u8>>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut out = Vec::new();
    writeln!(out, "{}", header_line(kind))?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header).map_err(csv_error)?;
    for row in rows {
        w.write_record(&row).map_err(csv_error)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Structure(format!("CSV: {other:?}")),
    }
}

pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

/// Contents of a sidecar.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub kind: String,
    /// Full effective configuration.
    pub config: serde_json::Value,
    pub seed: u64,
    pub version: String,
    pub timestamp: String,
    pub host: String,
    pub rng: String,
    pub gaussian: String,
    /// Smoothing of the tabulated values in units of `d`.
    pub eta_over_d: Option<f64>,
    /// Run-specific details (grid metadata, warnings, checks).
    pub details: serde_json::Value,
}

impl Metadata {
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Structure(format!("{}: {e}", path.display())))
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut v = serde_json::to_vec_pretty(self).expect("metadata serializes");
        v.push(b'\n');
        v
    }
}

/// RFC 3339 time of the run; `SOURCE_DATE_EPOCH` pins it for reproducible
/// builds of output trees.
pub fn timestamp() -> String {
    if let Some(epoch) = std::env::var("SOURCE_DATE_EPOCH").ok().and_then(|s| s.parse::<i64>().ok()) {
        if let Some(t) = chrono::DateTime::from_timestamp(epoch, 0) {
            return t.to_rfc3339();
        }
    }
    chrono::Utc::now().to_rfc3339()
}

pub fn host() -> String {
    std::env::var("HOSTNAME")
        .ok()
        .filter(|h| !h.is_empty())
        .or_else(|| std::fs::read_to_string("/proc/sys/kernel/hostname").ok().map(|h| h.trim().to_string()))
        .or_else(|| std::env::var("COMPUTERNAME").ok())
        .unwrap_or_else(|| "unknown".into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableKind {
    Correlator,
    Analytic,
}

impl TableKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TableKind::Correlator => "correlator",
            TableKind::Analytic => "analytic",
        }
    }
}

/// One grid point. `error` is the bootstrap standard error for Monte Carlo
/// tables and the quadrature error for analytic ones.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub epsilon_over_d: f64,
    pub gamma_over_d: f64,
    pub value: Complex64,
    pub error: f64,
    pub samples: Option<usize>,
    pub converged: Option<bool>,
}

/// Shared `(ε/d, Γ↓/d)` schema of correlator and analytic tables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridTable {
    pub kind: TableKind,
    pub rows: Vec<GridRow>,
}

const CORRELATOR_COLUMNS: [&str; 6] = ["epsilon_over_d", "gamma_over_d", "re_k", "im_k", "std_err", "samples"];
const ANALYTIC_COLUMNS: [&str; 6] = ["epsilon_over_d", "gamma_over_d", "re_k", "im_k", "quad_error", "converged"];

impl GridTable {
    pub fn from_correlator(g: &CorrelatorGrid) -> Self {
        let mut rows = Vec::with_capacity(g.values.len());
        for (e, &eps) in g.epsilon_over_d.iter().enumerate() {
            for (k, &gamma) in g.gamma_over_d.iter().enumerate() {
                rows.push(GridRow {
                    epsilon_over_d: eps,
                    gamma_over_d: gamma,
                    value: g.value(e, k),
                    error: g.error(e, k),
                    samples: Some(g.meta.samples),
                    converged: None,
                });
            }
        }
        GridTable { kind: TableKind::Correlator, rows }
    }

    pub fn from_analytic(g: &AnalyticGrid) -> Self {
        let mut rows = Vec::with_capacity(g.values.len());
        for (e, &eps) in g.epsilon_over_d.iter().enumerate() {
            for (k, &gamma) in g.gamma_over_d.iter().enumerate() {
                let i = g.index(e, k);
                rows.push(GridRow {
                    epsilon_over_d: eps,
                    gamma_over_d: gamma,
                    value: g.values[i],
                    error: g.errors[i],
                    samples: None,
                    converged: Some(g.converged[i]),
                });
            }
        }
        GridTable { kind: TableKind::Analytic, rows }
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let rows = self.rows.iter().map(|r| {
            let last = match self.kind {
                TableKind::Correlator => r.samples.map_or(String::new(), |s| s.to_string()),
                TableKind::Analytic => r.converged.map_or(String::new(), |c| c.to_string()),
            };
            vec![
                r.epsilon_over_d.to_string(),
                r.gamma_over_d.to_string(),
                r.value.re.to_string(),
                r.value.im.to_string(),
                r.error.to_string(),
                last,
            ]
        });
        let header = match self.kind {
            TableKind::Correlator => CORRELATOR_COLUMNS,
            TableKind::Analytic => ANALYTIC_COLUMNS,
        };
        csv_bytes(self.kind.as_str(), &header, rows)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text).map_err(|e| match e {
            Error::Structure(msg) => Error::Structure(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (first, body) = text.split_once('\n').unwrap_or((text, ""));
        let rest = first
            .strip_prefix(CSV_MAGIC)
            .ok_or_else(|| Error::Structure("missing levelcorr-csv header comment".into()))?;
        let mut parts = rest.split_whitespace();
        let version = parts.next().unwrap_or("");
        if version != CSV_VERSION {
            return Err(Error::Structure(format!("unsupported CSV version {version:?} (expected {CSV_VERSION})")));
        }
        let kind = match parts.next().and_then(|k| k.strip_prefix("kind=")) {
            Some("correlator") => TableKind::Correlator,
            Some("analytic") => TableKind::Analytic,
            other => return Err(Error::Structure(format!("not a grid table: kind {other:?}"))),
        };
        let expected = match kind {
            TableKind::Correlator => CORRELATOR_COLUMNS,
            TableKind::Analytic => ANALYTIC_COLUMNS,
        };
        let mut reader = csv::Reader::from_reader(body.as_bytes());
        let header = reader.headers().map_err(csv_error)?.clone();
        if header.iter().collect::<Vec<_>>() != expected {
            return Err(Error::Structure(format!("unexpected columns {header:?}")));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|e| Error::Structure(format!("bad number {s:?}: {e}")));
        let mut rows = Vec::new();
        for rec in reader.records() {
            let rec = rec.map_err(csv_error)?;
            let last = rec.get(5).unwrap_or("");
            let (samples, converged) = match kind {
                TableKind::Correlator => (
                    Some(last.parse::<usize>().map_err(|e| Error::Structure(format!("bad sample count {last:?}: {e}")))?),
                    None,
                ),
                TableKind::Analytic => (
                    None,
                    Some(last.parse::<bool>().map_err(|e| Error::Structure(format!("bad flag {last:?}: {e}")))?),
                ),
            };
            rows.push(GridRow {
                epsilon_over_d: num(&rec[0])?,
                gamma_over_d: num(&rec[1])?,
                value: Complex64::new(num(&rec[2])?, num(&rec[3])?),
                error: num(&rec[4])?,
                samples,
                converged,
            });
        }
        Ok(GridTable { kind, rows })
    }
}
