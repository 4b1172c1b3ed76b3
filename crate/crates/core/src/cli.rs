//! Command implementations behind the `cdp` binary.
//!
//! A run writes a fixed directory layout:
//!
//! ```text
//! points.csv        working cloud (standardized if enabled, giant component only)
//! projected.csv     projected coordinates
//! certificates.csv  one row per admissible pair
//! report.txt        metrics report (TOML)
//! scatter.svg       projection colored by the cloud's color field
//! edges.csv         mutual k-NN edge list (only with --emit-edges)
//! ```

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use crate::baselines::{evaluate_baseline, pca_fit};
use crate::certificates::{sandwich_holds, write_certificates_csv, CERTIFICATE_HEADER};
use crate::datasets::{generate, load_csv, save_csv, write_csv, DatasetSpec, PointCloud};
use crate::error::{CdpError, Result};
use crate::metrics::{certificate_coverage, nearest_rank, percent, quantile_line, MetricsReport};
use crate::pipeline::{CdpConfig, CdpState, Method};
use crate::svg::scatter;

pub const POINTS_FILE: &str = "points.csv";
pub const PROJECTED_FILE: &str = "projected.csv";
pub const CERTIFICATES_FILE: &str = "certificates.csv";
pub const REPORT_FILE: &str = "report.txt";
pub const SCATTER_FILE: &str = "scatter.svg";
pub const EDGES_FILE: &str = "edges.csv";

#[derive(Debug, Clone, PartialEq)]
pub enum InputSource {
    Csv(PathBuf),
    Generate(DatasetSpec),
}

impl InputSource {
    pub fn load(&self) -> Result<PointCloud> {
        match self {
            InputSource::Csv(path) => load_csv(path),
            InputSource::Generate(spec) => generate(spec),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: InputSource,
    pub k_nn: usize,
    pub tau: f64,
    pub k: usize,
    pub standardize: bool,
    pub method: Method,
    pub out_dir: PathBuf,
    pub emit_edges: bool,
}

impl RunConfig {
    pub fn new(input: InputSource, out_dir: impl Into<PathBuf>) -> Self {
        let defaults = CdpConfig::default();
        Self {
            input,
            k_nn: defaults.k_nn,
            tau: defaults.tau,
            k: defaults.k,
            standardize: defaults.standardize,
            method: Method::Cdp,
            out_dir: out_dir.into(),
            emit_edges: false,
        }
    }

    /// Checks `0 < tau < 1`, `1 <= k < d` and `1 <= k_nn < N`.
    pub fn validate(&self, cloud: &PointCloud) -> Result<()> {
        if !(self.tau > 0.0 && self.tau < 1.0) {
            return Err(CdpError::InvalidParameter(format!(
                "--tau must lie in (0, 1), got {}",
                self.tau
            )));
        }
        if self.k == 0 || self.k >= cloud.dim() {
            return Err(CdpError::InvalidParameter(format!(
                "--k must satisfy 1 <= k < d (k = {}, d = {})",
                self.k,
                cloud.dim()
            )));
        }
        if self.k_nn == 0 || self.k_nn >= cloud.len() {
            return Err(CdpError::InvalidParameter(format!(
                "--knn must satisfy 1 <= knn < N (knn = {}, N = {})",
                self.k_nn,
                cloud.len()
            )));
        }
        Ok(())
    }

    pub fn cdp_config(&self) -> CdpConfig {
        CdpConfig {
            k_nn: self.k_nn,
            tau: self.tau,
            k: self.k,
            standardize: self.standardize,
            ..CdpConfig::default()
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub report: MetricsReport,
    pub timings: Vec<(&'static str, Duration)>,
    pub files: Vec<PathBuf>,
}

/// Writes the generated cloud as CSV to `out`.
pub fn cmd_generate(spec: &DatasetSpec, out: &mut impl Write) -> Result<()> {
    let cloud = generate(spec)?;
    write_csv(&cloud, out)
}

fn write_file(path: &Path, body: impl FnOnce(&mut BufWriter<File>) -> Result<()>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    body(&mut w)?;
    w.flush()?;
    Ok(())
}

/// Runs the pipeline and writes every artifact into `config.out_dir`.
pub fn cmd_run(config: &RunConfig) -> Result<RunSummary> {
    let mut timings = Vec::new();
    let clock = Instant::now();
    let cloud = config.input.load()?;
    config.validate(&cloud)?;
    timings.push(("load", clock.elapsed()));

    let clock = Instant::now();
    let state = CdpState::prepare(&cloud, &config.cdp_config())?;
    timings.push(("prepare", clock.elapsed()));

    let clock = Instant::now();
    let eval = match config.method {
        Method::Cdp => state.evaluate(&state.cdp_projection()?, Method::Cdp)?,
        Method::Pca => evaluate_baseline(&pca_fit(&state.cloud, config.k)?, &state)?,
    };
    timings.push(("evaluate", clock.elapsed()));

    let clock = Instant::now();
    let dir = &config.out_dir;
    fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    let mut out = |name: &str| {
        let p = dir.join(name);
        files.push(p.clone());
        p
    };
    save_csv(&state.cloud, out(POINTS_FILE))?;
    save_csv(&eval.projected, out(PROJECTED_FILE))?;
    write_file(&out(CERTIFICATES_FILE), |w| {
        write_certificates_csv(&eval.certificates, &state.cloud, &eval.projected_distances, w)
    })?;
    fs::write(out(REPORT_FILE), eval.report.to_text())?;
    let title = format!("{} projection (k = {})", config.method, config.k);
    fs::write(out(SCATTER_FILE), scatter(&eval.projected, &title))?;
    if config.emit_edges {
        write_file(&out(EDGES_FILE), |w| state.graph.write_edges_csv(w))?;
    }
    timings.push(("write", clock.elapsed()));

    Ok(RunSummary {
        report: eval.report,
        timings,
        files,
    })
}

struct CertRow {
    psi: f64,
    inv_phi_star: f64,
    r: f64,
    r_tilde: f64,
    ratio: f64,
}

fn read_certificates(path: &Path) -> Result<Vec<CertRow>> {
    let malformed = |message: String| CdpError::MalformedArtifact {
        path: path.to_path_buf(),
        message,
    };
    let mut reader = csv::Reader::from_path(path)?;
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header.join(",") != CERTIFICATE_HEADER {
        return Err(malformed(format!("unexpected header `{}`", header.join(","))));
    }
    let mut rows = Vec::new();
    for (idx, rec) in reader.records().enumerate() {
        let rec = rec?;
        let num = |col: usize| -> Result<f64> {
            rec.get(col)
                .and_then(|s| s.parse::<f64>().ok())
                .ok_or_else(|| malformed(format!("row {}: bad value in column {}", idx + 2, col + 1)))
        };
        rows.push(CertRow {
            psi: num(2)?,
            inv_phi_star: num(4)?,
            r: num(5)?,
            r_tilde: num(6)?,
            ratio: num(7)?,
        });
    }
    if rows.is_empty() {
        return Err(malformed("no certificate rows".into()));
    }
    Ok(rows)
}

/// Summarizes the certificates of an existing run directory without
/// recomputing anything upstream.
pub fn cmd_certify(dir: &Path) -> Result<String> {
    if !dir.is_dir() {
        return Err(CdpError::MissingArtifact(dir.to_path_buf()));
    }
    let path = dir.join(CERTIFICATES_FILE);
    if !path.is_file() {
        return Err(CdpError::MissingArtifact(path));
    }
    let rows = read_certificates(&path)?;
    let n = rows.len();

    let psi: Vec<f64> = rows.iter().map(|r| r.psi).collect();
    let inv: Vec<f64> = rows.iter().map(|r| r.inv_phi_star).collect();
    let ratios: Vec<f64> = rows.iter().map(|r| r.ratio).collect();
    let q10 = nearest_rank(&psi, 0.10).expect("non-empty");
    let q90 = nearest_rank(&inv, 0.90).expect("non-empty");
    let coverage = certificate_coverage(&ratios, q10, q90);
    let holding = rows
        .iter()
        .filter(|r| sandwich_holds(r.psi, r.ratio, 1.0 / r.inv_phi_star))
        .count();
    let c_sp = rows.iter().map(|r| r.r).sum::<f64>() / n as f64;
    let c_sp_prime = rows.iter().map(|r| r.r_tilde).sum::<f64>() / n as f64;
    let fixed = (c_sp - c_sp_prime).abs() / c_sp;

    let mut out = String::new();
    out.push_str(&format!("pairs: {n}\n"));
    out.push_str(&format!("certificates holding: {holding}/{n}\n"));
    out.push_str(&format!(
        "C_sp={c_sp:.4} C_sp'={c_sp_prime:.4} fixed-pairs error={}%\n",
        percent(fixed)
    ));
    out.push_str(&quantile_line(q10, q90));
    out.push('\n');
    out.push_str(&format!(
        "coverage: lower={}% upper={}% joint={}%\n",
        percent(coverage.lower),
        percent(coverage.upper),
        percent(coverage.joint)
    ));
    Ok(out)
}
