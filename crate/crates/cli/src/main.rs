use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use kova_core::analysis::{AnalyzeOptions, SystemAnalysis};
use kova_core::blowup::{
    chart_by_name, hamiltonian_chart, integrate_chart, project_to_v0, v0_equations, FixedPointSearch,
    IntegrateOptions,
};
use kova_core::exprio::catalog_ids;
use kova_core::kovalevskaya::{autonomous_field, autonomous_hamiltonians, find_balances};
use kova_core::newton::DEFAULT_SEED;
use kova_core::Error;

use kova_cli::commands::{self, Loaded, SeriesRequest, Usage};
use kova_cli::report::{Report, SystemRef};

#[derive(Parser)]
#[command(
    name = "kova",
    version,
    about = "Integrability analysis of quasihomogeneous Hamiltonian systems"
)]
struct Cli {
    /// Seed for the randomized searches.
    #[arg(long, env = "KOVA_SEED", global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List regular weights with their polynomial χ(T).
    EnumerateWeights {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=3))]
        n: u64,
        #[arg(long, default_value_t = 40)]
        h_max: i64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Validate a system, find its balances and exponents, and run the Painlevé test.
    Analyze {
        #[command(flatten)]
        source: AnalyzeSource,
        /// Also expand the series of every exact principal balance to this order.
        #[arg(long)]
        order: Option<usize>,
        #[arg(long, value_enum, default_value_t = AnalyzeFormat::Table)]
        format: AnalyzeFormat,
    },
    /// Weighted blow-up charts, their divisor fixed points and invariant equations.
    Blowup {
        #[command(flatten)]
        source: Source,
        /// Variable whose chart to build; all charts when omitted.
        #[arg(long)]
        chart: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Laurent series around a balance.
    Series {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        balance: usize,
        #[arg(long, default_value_t = 8)]
        order: usize,
        /// Pole position: a rational value or `symbolic`.
        #[arg(long, default_value = "symbolic")]
        z0: String,
        /// Fix another symbol, `NAME=VALUE`.
        #[arg(long = "set", value_name = "NAME=VALUE")]
        set: Vec<String>,
        /// Which Hamiltonian generates the flow.
        #[arg(long, default_value_t = 1)]
        flow: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Integrate the field of a blow-up chart and export the trajectory as CSV.
    Integrate {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        chart: String,
        /// Chart coordinates `r,X..`; complex entries as `re:im`.
        #[arg(long)]
        start: String,
        /// Move the start point onto the divisor equations first.
        #[arg(long)]
        project: bool,
        #[arg(long, default_value_t = 5.0)]
        t_end: f64,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        #[arg(long, default_value_t = 100)]
        sample_every: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// List the built-in systems.
    List,
}

#[derive(Args)]
#[command(group(ArgGroup::new("src").required(true).args(["system", "file"])))]
struct Source {
    #[arg(long)]
    system: Option<String>,
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("src").required(true).args(["system", "file", "all"])))]
struct AnalyzeSource {
    #[arg(long)]
    system: Option<String>,
    #[arg(long)]
    file: Option<PathBuf>,
    /// Every built-in system.
    #[arg(long)]
    all: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AnalyzeFormat {
    Table,
    Json,
    Table4,
}

fn exit_status(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<Usage>().is_some() {
        return 2;
    }
    match e.downcast_ref::<Error>() {
        Some(
            Error::UnknownSystem { .. }
            | Error::UnknownVariable(_)
            | Error::Syntax { .. }
            | Error::InvalidSystem(_)
            | Error::InvalidWeight(_)
            | Error::UnsupportedRank(_)
            | Error::AboveDeclaredDegree { .. }
            | Error::IndexOutOfRange { .. }
            | Error::NonpositiveWeight(_)
            | Error::Io(_),
        ) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    match run(&cli, &argv) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_status(&e))
        }
    }
}

fn emit(text: &str) -> Result<()> {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn json<T: serde::Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

/// Returns `false` when an invariant check failed.
fn run(cli: &Cli, argv: &[String]) -> Result<bool> {
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    match &cli.command {
        Command::EnumerateWeights { n, h_max, format } => {
            let rows = commands::weight_rows(*n as usize, *h_max)?;
            match format {
                Format::Table => emit(&commands::weight_table(&rows))?,
                Format::Json => emit(&json(&rows)?)?,
            }
            Ok(true)
        }
        Command::Analyze {
            source,
            order,
            format,
        } => {
            let opts = AnalyzeOptions::with_seed(seed);
            let systems: Vec<Loaded> = if source.all {
                catalog_ids()
                    .into_iter()
                    .map(|id| commands::load(Some(id), None))
                    .collect::<Result<_>>()?
            } else {
                vec![commands::load(source.system.as_deref(), source.file.as_deref())?]
            };
            let results = analyze_all(&systems, &opts, *order, seed, argv);
            let mut reports = Vec::new();
            for (loaded, r) in systems.iter().zip(results) {
                let r = r.with_context(|| format!("analyzing {}", loaded.def.id))?;
                reports.push(r);
            }
            let ok = reports.iter().all(report_ok);
            let text = match format {
                AnalyzeFormat::Json if source.all => json(&reports)?,
                AnalyzeFormat::Json => json(&reports[0])?,
                AnalyzeFormat::Table => reports.iter().map(analysis_text).collect::<Vec<_>>().join("\n"),
                AnalyzeFormat::Table4 => reports
                    .iter()
                    .map(|r| {
                        let a = r.analysis.as_ref().expect("analysis present");
                        format!("{:<14} {}\n", a.system, a.table4_row())
                    })
                    .collect(),
            };
            emit(&text)?;
            Ok(ok)
        }
        Command::Blowup {
            source,
            chart,
            format,
        } => {
            let loaded = commands::load(source.system.as_deref(), source.file.as_deref())?;
            let charts = commands::chart_indices(&loaded, chart.as_deref())?;
            let field = autonomous_field(&loaded.sys)?;
            let bopts = AnalyzeOptions::with_seed(seed).balances;
            let balances = find_balances(&field, &bopts)?.balances;
            let search = FixedPointSearch {
                seed,
                ..FixedPointSearch::default()
            };
            let reports = charts
                .iter()
                .map(|&j| commands::chart_report(&loaded, j, &balances, &search))
                .collect::<Result<Vec<_>>>()?;
            let ok = reports.iter().all(|c| {
                c.v0_invariant.iter().all(|&b| b)
                    && c.newton_matches_balances
                    && c.fixed_points.iter().all(|f| f.ratio_check.holds)
            });
            match format {
                Format::Table => {
                    let mut text = format!("system {}\n", loaded.def.id);
                    for c in &reports {
                        text.push_str(&commands::chart_table(c));
                    }
                    emit(&text)?;
                }
                Format::Json => {
                    let mut r = Report::new(argv, seed, Some(SystemRef::of(&loaded.def)));
                    r.blowup = Some(reports);
                    emit(&json(&r)?)?;
                }
            }
            Ok(ok)
        }
        Command::Series {
            source,
            balance,
            order,
            z0,
            set,
            flow,
            format,
        } => {
            let loaded = commands::load(source.system.as_deref(), source.file.as_deref())?;
            let mut fixed = BTreeMap::new();
            if let Some(v) = commands::parse_z0(z0)? {
                fixed.insert("z0".to_string(), v);
            }
            for s in set {
                let (k, v) = commands::parse_assignment(s)?;
                fixed.insert(k, v);
            }
            let problem = commands::problem_for(&loaded.sys, *flow)?;
            let bopts = AnalyzeOptions::with_seed(seed).balances;
            let balances = commands::series_balances(&problem, &bopts)?;
            let req = SeriesRequest {
                flow: *flow,
                order: *order,
                fixed,
            };
            let s = commands::series_report(&problem, &balances, *balance, &req)?;
            let ok = s.consistent;
            match format {
                Format::Table => emit(&commands::series_table(&s))?,
                Format::Json => {
                    let mut r = Report::new(argv, seed, Some(SystemRef::of(&loaded.def)));
                    r.series = Some(vec![s]);
                    emit(&json(&r)?)?;
                }
            }
            Ok(ok)
        }
        Command::Integrate {
            source,
            chart,
            start,
            project,
            t_end,
            step,
            sample_every,
            output,
        } => {
            let loaded = commands::load(source.system.as_deref(), source.file.as_deref())?;
            let sys = &loaded.sys;
            let ch = hamiltonian_chart(sys, chart_by_name(sys, chart)?)?;
            let mut x0 = commands::parse_point(start)?;
            if x0.len() != ch.dim() {
                return Err(Usage(format!(
                    "--start needs {} coordinates ({})",
                    ch.dim(),
                    ch.vars.names().join(",")
                ))
                .into());
            }
            if *project {
                let v0 = v0_equations(&ch, sys)?;
                x0 = project_to_v0(&ch, &v0, &x0)?.ok_or_else(|| {
                    anyhow::anyhow!("projection onto the divisor equations did not converge")
                })?;
            }
            let (_, hams) = autonomous_hamiltonians(sys)?;
            let invariants = hams
                .iter()
                .map(|h| ch.pullback(h))
                .collect::<kova_core::Result<Vec<_>>>()?;
            let opts = IntegrateOptions {
                t_end: *t_end,
                step: *step,
                sample_every: *sample_every,
                ..IntegrateOptions::default()
            };
            let traj = integrate_chart(&ch, &x0, &invariants, &opts)?;
            match output {
                Some(path) => {
                    let f = File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                    traj.write_csv(&ch, BufWriter::new(f))?;
                }
                None => traj.write_csv(&ch, io::stdout().lock())?,
            }
            eprintln!("invariant drift {:.3e}", traj.drift);
            Ok(true)
        }
        Command::List => {
            let mut text = String::new();
            for id in catalog_ids() {
                text.push_str(id);
                text.push('\n');
            }
            emit(&text)?;
            Ok(true)
        }
    }
}

fn report_ok(r: &Report) -> bool {
    r.analysis
        .as_ref()
        .is_some_and(|a| a.invariant_failures.is_empty())
        && r.series.iter().flatten().all(|s| s.consistent)
}

fn analysis_text(r: &Report) -> String {
    let mut text = commands::analysis_table(r.analysis.as_ref().expect("analysis present"));
    for s in r.series.iter().flatten() {
        text.push('\n');
        text.push_str(&commands::series_table(s));
    }
    text
}

fn analyze_one(
    loaded: &Loaded,
    opts: &AnalyzeOptions,
    order: Option<usize>,
    seed: u64,
    argv: &[String],
) -> Result<Report> {
    let a: SystemAnalysis = commands::analyze_system(loaded, opts)?;
    let mut r = Report::new(argv, seed, Some(SystemRef::of(&loaded.def)));
    if let Some(n) = order {
        let problem = commands::problem_for(&loaded.sys, 1)?;
        let balances: Vec<_> = a.balances.iter().map(|b| b.balance.clone()).collect();
        let req = SeriesRequest {
            flow: 1,
            order: n,
            fixed: BTreeMap::new(),
        };
        let mut series = Vec::new();
        for b in a.balances.iter().filter(|b| b.principal && b.balance.is_exact()) {
            series.push(commands::series_report(&problem, &balances, b.index, &req)?);
        }
        r.series = Some(series);
    }
    r.analysis = Some(a);
    Ok(r)
}

/// One thread per system; results come back in input order.
fn analyze_all(
    systems: &[Loaded],
    opts: &AnalyzeOptions,
    order: Option<usize>,
    seed: u64,
    argv: &[String],
) -> Vec<Result<Report>> {
    std::thread::scope(|s| {
        let handles: Vec<_> = systems
            .iter()
            .map(|l| s.spawn(move || analyze_one(l, opts, order, seed, argv)))
            .collect();
        handles
            .into_iter()
            .map(|h| {
                h.join()
                    .unwrap_or_else(|_| Err(anyhow::anyhow!("analysis thread panicked")))
            })
            .collect()
    })
}
