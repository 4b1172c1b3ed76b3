use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cdp::cli::{cmd_certify, cmd_generate, cmd_run, InputSource, RunConfig};
use cdp::datasets::{DatasetKind, DatasetSpec, Shape};
use cdp::pipeline::Method;
use cdp::CdpError;

#[derive(Parser)]
#[command(name = "cdp", version, about = "Convexity-driven projection of point clouds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic point cloud as CSV.
    Generate {
        #[command(flatten)]
        data: DataArgs,
        /// Output file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the projection and write points, certificates, report and plot.
    Run(RunArgs),
    /// Summarize the certificates of an existing run directory.
    Certify {
        /// Directory written by `cdp run`.
        dir: PathBuf,
    },
}

#[derive(Args)]
struct DataArgs {
    /// swiss_roll, torus, s_curve, helix, mobius, klein, annulus_obstacle or toy5.
    #[arg(long, value_parser = parse_kind)]
    kind: Option<DatasetKind>,
    /// Number of points to generate.
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    /// Generator seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Shape parameter override, e.g. `--param height=10`.
    #[arg(long = "param", value_parser = parse_param)]
    params: Vec<(String, f64)>,
}

impl DataArgs {
    fn spec(&self, kind: DatasetKind) -> Result<DatasetSpec, CdpError> {
        let mut shape = Shape::default_for(kind);
        for (name, value) in &self.params {
            shape.set_param(name, *value)?;
        }
        Ok(DatasetSpec {
            shape,
            n_points: self.n as usize,
            seed: self.seed,
        })
    }
}

#[derive(Args)]
struct RunArgs {
    /// CSV point file; mutually exclusive with --kind.
    #[arg(long, conflicts_with = "kind")]
    input: Option<PathBuf>,
    #[command(flatten)]
    data: DataArgs,
    /// Neighbors per point in the mutual k-NN graph.
    #[arg(long, default_value_t = 10)]
    knn: usize,
    /// Admissibility threshold on the detour ratio, in (0, 1).
    #[arg(long, default_value_t = 0.8, value_parser = parse_tau)]
    tau: f64,
    /// Output dimension.
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Standardize coordinates before building the graph (default).
    #[arg(long, overrides_with = "no_standardize")]
    standardize: bool,
    /// Use raw coordinates.
    #[arg(long)]
    no_standardize: bool,
    /// Projection: cdp or pca.
    #[arg(long, default_value = "cdp", value_parser = parse_method)]
    method: Method,
    /// Output directory.
    #[arg(long, default_value = "cdp-out")]
    out: PathBuf,
    /// Also write the mutual k-NN edge list.
    #[arg(long)]
    emit_edges: bool,
}

fn parse_kind(s: &str) -> Result<DatasetKind, String> {
    s.parse().map_err(|e: CdpError| e.to_string())
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: CdpError| e.to_string())
}

fn parse_tau(s: &str) -> Result<f64, String> {
    let tau: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if tau > 0.0 && tau < 1.0 {
        Ok(tau)
    } else {
        Err(format!("tau must lie in (0, 1), got {tau}"))
    }
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, got `{s}`"))?;
    let value = value
        .parse()
        .map_err(|_| format!("`{value}` is not a number"))?;
    Ok((name.trim().to_string(), value))
}

fn execute(cli: Cli) -> Result<(), CdpError> {
    match cli.command {
        Command::Generate { data, out } => {
            let kind = data
                .kind
                .ok_or_else(|| CdpError::InvalidParameter("--kind is required".into()))?;
            let spec = data.spec(kind)?;
            match out {
                Some(path) => {
                    let mut w = io::BufWriter::new(std::fs::File::create(path)?);
                    cmd_generate(&spec, &mut w)?;
                    w.flush()?;
                }
                None => cmd_generate(&spec, &mut io::stdout().lock())?,
            }
        }
        Command::Run(args) => {
            let input = match (&args.input, args.data.kind) {
                (Some(path), _) => InputSource::Csv(path.clone()),
                (None, Some(kind)) => InputSource::Generate(args.data.spec(kind)?),
                (None, None) => {
                    return Err(CdpError::InvalidParameter(
                        "either --input or --kind is required".into(),
                    ))
                }
            };
            let mut config = RunConfig::new(input, &args.out);
            config.k_nn = args.knn;
            config.tau = args.tau;
            config.k = args.k;
            config.standardize = !args.no_standardize;
            config.method = args.method;
            config.emit_edges = args.emit_edges;

            let summary = cmd_run(&config)?;
            let r = &summary.report;
            println!("{}", r.quantile_line());
            println!(
                "C_sp={:.4} mu_k={:.4} fixed error={}% reselected error={}",
                r.c_sp,
                r.mu_k,
                r.fixed_error_percent,
                r.reselected_error_percent
                    .as_ref()
                    .map_or("undefined".to_string(), |p| format!("{p}%"))
            );
            println!("certificates holding: {}/{}", r.n_holding, r.n_certified);
            for w in &r.warnings {
                eprintln!("warning: {w}");
            }
            for (stage, t) in &summary.timings {
                eprintln!("{stage}: {:.3}s", t.as_secs_f64());
            }
        }
        Command::Certify { dir } => print!("{}", cmd_certify(&dir)?),
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
