use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use mindist::compare::{bench, bench_table, compare, guard, Algorithm, BenchConfig, Comparison};
use mindist::diameter::{approx_diameter_tradeoff, top_partition};
use mindist::ecc::{approx_min_ecc, parse_mode};
use mindist::generate::{gen_random, Model};
use mindist::oracle::exact_parameters;
use mindist::radius::approx_min_radius;
use mindist::report::{Envelope, PartitionDump};
use mindist::{dimacs, seed, Counters, Error};

#[derive(Parser)]
#[command(name = "mindist", version, about = "Min-distance parameters of directed graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = seed::DEFAULT_SEED)]
    seed: u64,
    /// Run the exact oracle above the size guard.
    #[arg(long)]
    force: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Exact min-diameter, min-radius and eccentricities.
    Exact {
        graph: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Approximate min-diameter.
    Diam {
        graph: PathBuf,
        #[arg(long, default_value_t = 1)]
        levels: usize,
        /// Check the estimate against the exact oracle.
        #[arg(long)]
        compare: bool,
        /// Include the top-level partition in the report.
        #[arg(long)]
        dump_partition: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Approximate min-radius.
    Radius {
        graph: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        #[arg(long)]
        compare: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Approximate per-vertex min-eccentricities.
    Ecc {
        graph: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        /// Unit weights; tighter guarantee.
        #[arg(long)]
        unweighted: bool,
        #[arg(long)]
        compare: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Random graph generator.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        min_weight: u64,
        #[arg(long, default_value_t = 1)]
        max_weight: u64,
        #[arg(long, value_enum, default_value_t = Model::StronglyConnected)]
        model: Model,
        #[arg(long, default_value_t = seed::DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Every approximation against the oracle.
    Compare {
        graph: PathBuf,
        #[arg(long, default_value_t = 1)]
        levels: usize,
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        #[arg(long)]
        unweighted: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Relaxation counts of the approximations and the oracle on a ladder.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [64, 256, 1024])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 8)]
        degree: usize,
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        #[command(flatten)]
        common: Common,
    },
}

enum Failure {
    Input(Error),
    Bound,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Input(e.into())),
        None => match writeln!(std::io::stdout().lock(), "{text}") {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::Input(e.into())),
            _ => Ok(()),
        },
    }
}

fn write_report<T: Serialize>(
    common: &Common,
    command: &str,
    start: Instant,
    counters: &Counters,
    result: T,
    text: impl FnOnce(&T) -> String,
) -> Result<(), Failure> {
    let envelope = Envelope::new(command, common.seed, start.elapsed(), counters.snapshot(), result);
    let body = match common.format {
        Format::Json => envelope.to_json().map_err(|e| Failure::Input(e.into()))?,
        Format::Text => format!(
            "{}\nwall_ms {:.1}  dijkstra_runs {}  relaxations {}",
            text(&envelope.result),
            envelope.wall_time_ms,
            envelope.counters.dijkstra_runs,
            envelope.counters.relaxations
        ),
    };
    emit(common.out.as_deref(), &body)
}

fn comparison_text(c: &Comparison) -> String {
    let ratio = c.ratio.map_or("undefined".to_string(), |r| format!("{r:.4}"));
    format!(
        "compare {:?}: ratio {ratio} bound {:.4} violations {} {}",
        c.algorithm,
        c.bound,
        c.violations.len(),
        if c.pass { "PASS" } else { "FAIL" }
    )
}

#[derive(Serialize)]
struct WithComparison<T> {
    #[serde(flatten)]
    report: T,
    #[serde(skip_serializing_if = "Option::is_none")]
    comparison: Option<Comparison>,
    #[serde(skip_serializing_if = "Option::is_none")]
    partition: Option<PartitionDump>,
}

fn run(cli: Cli) -> Result<(), Failure> {
    let start = Instant::now();
    let counters = Counters::new();
    match cli.command {
        Command::Exact { graph, common } => {
            let g = dimacs::read_graph(&graph)?;
            guard(&g, common.force)?;
            let exact = exact_parameters(&g, &counters);
            write_report(&common, "exact", start, &counters, exact, |e| {
                format!("min_diameter {}\nmin_radius {}", e.min_diameter, e.min_radius)
            })
        }
        Command::Diam { graph, levels, compare: check, dump_partition, common } => {
            let g = dimacs::read_graph(&graph)?;
            let report = approx_diameter_tradeoff(&g, levels, common.seed, &counters)?;
            let partition = if dump_partition && g.vertex_count() >= 2 {
                Some(PartitionDump::of(&top_partition(&g, levels, common.seed, &Counters::new())?))
            } else {
                None
            };
            let comparison = check
                .then(|| compare(&g, Algorithm::Diam { levels }, common.seed, common.force, &Counters::new()))
                .transpose()?;
            finish(&common, "diam", start, &counters, report, comparison, partition, |r| {
                format!("min_diameter_estimate {} (levels {}, D' {})", r.estimate, r.effective_level, r.d_prime)
            })
        }
        Command::Radius { graph, delta, compare: check, common } => {
            let g = dimacs::read_graph(&graph)?;
            let report = approx_min_radius(&g, delta, common.seed, &counters)?;
            let comparison = check
                .then(|| compare(&g, Algorithm::Radius { delta }, common.seed, common.force, &Counters::new()))
                .transpose()?;
            finish(&common, "radius", start, &counters, report, comparison, None, |r| {
                let w = r.witness.map_or("none".to_string(), |w| (w + 1).to_string());
                format!("min_radius_estimate {} (witness {w})", r.estimate)
            })
        }
        Command::Ecc { graph, delta, unweighted, compare: check, common } => {
            let g = dimacs::read_graph(&graph)?;
            let mode = parse_mode(unweighted);
            let report = approx_min_ecc(&g, delta, mode, common.seed, &counters)?;
            let comparison = check
                .then(|| compare(&g, Algorithm::Ecc { delta, mode }, common.seed, common.force, &Counters::new()))
                .transpose()?;
            finish(&common, "ecc", start, &counters, report, comparison, None, |r| {
                r.eps_prime
                    .iter()
                    .enumerate()
                    .map(|(v, e)| format!("{} {e}", v + 1))
                    .collect::<Vec<_>>()
                    .join("\n")
            })
        }
        Command::Gen { n, m, min_weight, max_weight, model, seed, out } => {
            let g = gen_random(n, m, (min_weight, max_weight), model, seed)?;
            emit(out.as_deref(), dimacs::to_string(&g).trim_end())
        }
        Command::Compare { graph, levels, delta, unweighted, common } => {
            let g = dimacs::read_graph(&graph)?;
            guard(&g, common.force)?;
            let algorithms = [
                Algorithm::Diam { levels },
                Algorithm::Radius { delta },
                Algorithm::Ecc { delta, mode: parse_mode(unweighted) },
            ];
            let results = algorithms
                .into_iter()
                .map(|a| compare(&g, a, common.seed, common.force, &counters))
                .collect::<mindist::Result<Vec<_>>>()?;
            let pass = results.iter().all(|c| c.pass);
            write_report(&common, "compare", start, &counters, results, |rs| {
                rs.iter().map(comparison_text).collect::<Vec<_>>().join("\n")
            })?;
            if pass {
                Ok(())
            } else {
                Err(Failure::Bound)
            }
        }
        Command::Bench { sizes, degree, delta, common } => {
            let config = BenchConfig {
                sizes,
                degree,
                delta,
                seed: common.seed,
                ..BenchConfig::default()
            };
            let rows = bench(&config)?;
            write_report(&common, "bench", start, &counters, rows, |rs| bench_table(rs).trim_end().to_string())
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn finish<T: Serialize>(
    common: &Common,
    command: &str,
    start: Instant,
    counters: &Counters,
    report: T,
    comparison: Option<Comparison>,
    partition: Option<PartitionDump>,
    text: impl FnOnce(&T) -> String,
) -> Result<(), Failure> {
    let pass = comparison.as_ref().is_none_or(|c| c.pass);
    let result = WithComparison {
        report,
        comparison,
        partition,
    };
    write_report(common, command, start, counters, result, |r| {
        let mut s = text(&r.report);
        if let Some(c) = &r.comparison {
            s.push('\n');
            s.push_str(&comparison_text(c));
        }
        if let Some(p) = &r.partition {
            s.push_str(&format!("\nsamples {:?}\npart_sizes {:?}", p.samples, p.part_sizes));
        }
        s
    })?;
    if pass {
        Ok(())
    } else {
        Err(Failure::Bound)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    mindist::init_threads();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Bound) => {
            eprintln!("bound violation detected");
            ExitCode::from(2)
        }
    }
}
