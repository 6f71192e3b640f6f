use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use octoqkd::channel::transmit;
use octoqkd::config::RunConfig;
use octoqkd::estimation::{confidence_bounds, disclose_indices, estimate};
use octoqkd::figures::{self, linear_grid, FigureParams, Table};
use octoqkd::keyrate::{evaluate, optimize_modulation, FiniteSize, RateInputs};
use octoqkd::modulation::{sample_blocks, ZSeries};
use octoqkd::pipeline::{recon_bench, simulate, ReconBenchRow};
use octoqkd::reconciliation::CodeSpec;
use octoqkd::{Error, Execution};

const EXIT_USAGE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser)]
#[command(name = "octoqkd", version, about = "CV-QKD with 8-dimensional spherical modulation")]
struct Cli {
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; 1 runs sequentially.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Output directory; results go to stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full protocol run: writes both keys and the report.
    Simulate,
    /// Figure data as CSV.
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        which: u8,
        #[command(flatten)]
        overrides: FigureOverrides,
    },
    /// Frame error rate and efficiency against SNR.
    ReconBench,
    /// Key rate at the configured operating point.
    Keyrate {
        /// Optimise the modulation variance.
        #[arg(long)]
        optimize: bool,
        /// Finite-size rate for `8·blocks` coordinates.
        #[arg(long)]
        finite: bool,
    },
    /// Parameter estimation from a CSV of `x,y` pairs, or from a simulated
    /// quantum phase when no input is given.
    Estimate {
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct FigureOverrides {
    #[arg(long)]
    xi: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    v_el: Option<f64>,
    #[arg(long)]
    untrusted: bool,
    #[arg(long)]
    distance: Option<f64>,
    #[arg(long, value_enum)]
    series: Option<SeriesArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeriesArg {
    FockShell,
    LiteralVa,
}

impl FigureOverrides {
    fn apply(&self, mut p: FigureParams) -> FigureParams {
        p.excess_noise = self.xi.unwrap_or(p.excess_noise);
        p.eta = self.eta.unwrap_or(p.eta);
        p.v_el = self.v_el.unwrap_or(p.v_el);
        p.trusted &= !self.untrusted;
        p.distance_km = self.distance.unwrap_or(p.distance_km);
        p.series = match self.series {
            Some(SeriesArg::FockShell) => ZSeries::FockShell,
            Some(SeriesArg::LiteralVa) => ZSeries::LiteralVa,
            None => p.series,
        };
        p
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if let Some(e) = err.downcast_ref::<Error>() {
        return match e.root() {
            Error::Usage(_) | Error::Parse(_) => EXIT_USAGE,
            Error::Io(_) => EXIT_IO,
            _ => EXIT_NUMERIC,
        };
    }
    if err.downcast_ref::<io::Error>().is_some() || err.downcast_ref::<csv::Error>().is_some() {
        return EXIT_IO;
    }
    EXIT_USAGE
}

struct Output {
    dir: Option<PathBuf>,
}

impl Output {
    fn new(dir: Option<PathBuf>) -> anyhow::Result<Self> {
        if let Some(d) = &dir {
            fs::create_dir_all(d).map_err(Error::from).with_context(|| format!("creating {}", d.display()))?;
        }
        Ok(Output { dir })
    }

    fn write(&self, name: &str, bytes: &[u8]) -> anyhow::Result<()> {
        match &self.dir {
            Some(d) => {
                let path = d.join(name);
                fs::write(&path, bytes).map_err(Error::from).with_context(|| format!("writing {}", path.display()))
            }
            None => io::stdout().write_all(bytes).map_err(|e| Error::from(e).into()),
        }
    }

    fn json<T: Serialize>(&self, name: &str, value: &T) -> anyhow::Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write(name, text.as_bytes())
    }

    fn table(&self, name: &str, table: &Table) -> anyhow::Result<()> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&table.headers)?;
        for row in &table.rows {
            w.write_record(row.iter().map(|v| v.to_string()))?;
        }
        self.write(name, &w.into_inner()?)
    }

    fn rows<T: Serialize>(&self, name: &str, rows: &[T]) -> anyhow::Result<()> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in rows {
            w.serialize(r)?;
        }
        self.write(name, &w.into_inner()?)
    }
}

fn key_text(bits: &[bool]) -> String {
    let mut s: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
    s.push('\n');
    s
}

fn read_pairs(path: &Path) -> anyhow::Result<(Vec<f64>, Vec<f64>)> {
    let mut rd = csv::Reader::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => anyhow::Error::from(Error::from(io)),
        other => anyhow::Error::from(Error::Parse(format!("{other:?}"))),
    })?;
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for rec in rd.records() {
        let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
        if rec.len() != 2 {
            bail!(Error::Parse(format!("expected 2 columns, found {}", rec.len())));
        }
        let parse = |i: usize| rec[i].trim().parse::<f64>().map_err(|e| Error::Parse(format!("{e}: {:?}", &rec[i])));
        xs.push(parse(0)?);
        ys.push(parse(1)?);
    }
    Ok((xs, ys))
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p).with_context(|| format!("loading {}", p.display()))?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    let exec = match cli.workers {
        Some(0) => bail!(Error::Usage("--workers must be >= 1".into())),
        Some(1) => Execution::Sequential,
        Some(n) => {
            #[cfg(feature = "parallel")]
            rayon::ThreadPoolBuilder::new().num_threads(n).build_global().ok();
            #[cfg(not(feature = "parallel"))]
            let _ = n;
            Execution::Parallel
        }
        None => Execution::Parallel,
    };
    let out = Output::new(cli.out)?;

    match cli.command {
        Command::Simulate => {
            let run = simulate(&cfg, exec).context("simulate")?;
            if let Some(notice) = &run.report.notice {
                eprintln!("{notice}");
            }
            if out.dir.is_some() {
                out.write("alice.key", key_text(&run.alice_key).as_bytes())?;
                out.write("bob.key", key_text(&run.bob_key).as_bytes())?;
            }
            out.json("report.json", &run.report)?;
        }
        Command::Figure { which, overrides } => {
            let params = |p: FigureParams| overrides.apply(FigureParams { series: cfg.series, ..p });
            let table = match which {
                1 => figures::figure1(&linear_grid(0.1, 5.0, 0.1), params(FigureParams::figure2()).series)?,
                2 => figures::figure2(
                    &linear_grid(0.25, 4.0, 0.05),
                    &figures::FIGURE2_BETAS,
                    &params(FigureParams::figure2()),
                    exec,
                )?,
                _ => figures::figure3(
                    &linear_grid(0.0, 100.0, 5.0),
                    &figures::FIGURE3_BLOCK_LENGTHS,
                    &params(FigureParams::figure3()),
                    exec,
                )?,
            };
            out.table(&format!("figure{which}.csv"), &table)?;
        }
        Command::ReconBench => {
            let r = &cfg.reconciliation;
            let mut code = CodeSpec::load(&r.code, r.repetition).context("loading code")?;
            code.max_iterations = r.max_iterations;
            let rows: Vec<ReconBenchRow> = recon_bench(&code, &r.bench_snr, r.bench_frames, cfg.seed, exec)?;
            out.rows("recon_bench.csv", &rows)?;
        }
        Command::Keyrate { optimize, finite } => {
            let det = cfg.detector.model()?;
            let mut inputs = RateInputs::asymptotic(
                cfg.v_a,
                cfg.channel.transmission(),
                cfg.channel.excess_noise,
                det,
                cfg.reconciliation.beta,
            );
            inputs.series = cfg.series;
            inputs.loss_db_per_km = cfg.channel.loss_db_per_km;
            if finite {
                inputs.finite = Some(FiniteSize {
                    n_total: 8 * cfg.blocks as u64,
                    key_fraction: 1.0 - cfg.disclosed_fraction,
                    epsilon_pe: cfg.epsilon.pe,
                    epsilon_bar: cfg.epsilon.bar,
                    epsilon_pa: cfg.epsilon.pa,
                    constants: cfg.delta_constants,
                });
            }
            let report = if optimize { optimize_modulation(&inputs)? } else { evaluate(&inputs)? };
            out.json("keyrate.json", &report)?;
        }
        Command::Estimate { input } => {
            let det = cfg.detector.model()?;
            let (xs, ys) = match input {
                Some(p) => read_pairs(&p)?,
                None => {
                    let ch = cfg.channel.model()?;
                    let points = sample_blocks(cfg.v_a, cfg.blocks, cfg.seed, exec)?;
                    let records = transmit(&points, &ch, &det, cfg.seed, exec)?;
                    let disclosed = (cfg.blocks as f64 * cfg.disclosed_fraction).round() as usize;
                    let (idx, _) = disclose_indices(cfg.blocks, disclosed, cfg.seed)?;
                    (
                        idx.iter().flat_map(|&i| points[i].q).collect(),
                        idx.iter().flat_map(|&i| records[i].y).collect(),
                    )
                }
            };
            let sample = estimate(&xs, &ys, exec)?;
            out.json("estimate.json", &confidence_bounds(&sample, cfg.epsilon.pe, &det)?)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
