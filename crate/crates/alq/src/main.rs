use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use alq::analysis::{MMode, ReportKind, ScanConfig};
use alq::dimensions::{breakdown, dim_plus_minus, dim_sign_pattern, SignPattern};
use alq::report::{Cell, Table};
use alq::traces::{full_trace, new_trace, TraceQuery};
use alq::{Error, Result};

/// Exact Atkin-Lehner traces and refined newform dimensions for squarefree
/// level.
///
/// Sign patterns are written as strings over '+'/'-' indexed by the primes
/// of M in ascending order: for M = 35, "+-" means eigenvalue +1 at 5 and
/// -1 at 7.
#[derive(Parser)]
#[command(name = "alq", version, about, long_about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Space {
    Full,
    New,
}

#[derive(Clone, Copy, ValueEnum)]
enum Report {
    Dims,
    Bias,
    Equidist,
    Orbits,
}

#[derive(Subcommand)]
enum Command {
    /// Dimensions of S_k^new(N): total and plus/minus split, or the full
    /// sign-pattern breakdown for a modulus M | N.
    Dim {
        #[arg(long)]
        level: i64,
        #[arg(long)]
        weight: i64,
        /// Sign modulus M | N; emits one row per sign pattern.
        #[arg(long)]
        m: Option<i64>,
        /// A single sign pattern over the primes of M (defaults to M = N).
        #[arg(long)]
        pattern: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Render rationals as decimals with the given precision.
        #[arg(long, value_name = "PREC", num_args = 0..=1, default_missing_value = "6")]
        float: Option<usize>,
    },
    /// Trace of the Atkin-Lehner operator W_M on S_k(N) or S_k^new(N).
    Trace {
        #[arg(long)]
        level: i64,
        #[arg(long)]
        weight: i64,
        #[arg(long)]
        m: i64,
        #[arg(long, value_enum, default_value_t = Space::New)]
        space: Space,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long, value_name = "PREC", num_args = 0..=1, default_missing_value = "6")]
        float: Option<usize>,
    },
    /// Scan level and weight ranges, streaming one of the report tables.
    Scan {
        /// Inclusive level range, e.g. 2..200 (non-squarefree levels are
        /// skipped).
        #[arg(long, value_parser = parse_range)]
        levels: (i64, i64),
        /// Inclusive weight range, e.g. 2..20 (odd weights are skipped).
        #[arg(long, value_parser = parse_range)]
        weights: (i64, i64),
        /// "full" (M = N) or "fixed:M".
        #[arg(long, default_value = "full", value_parser = parse_m_mode)]
        m_mode: MMode,
        #[arg(long, value_enum)]
        report: Report,
        /// Worker threads (default: all cores). Output is identical for
        /// any value.
        #[arg(long)]
        jobs: Option<usize>,
        /// Class-number cache file: loaded if present, rewritten after the
        /// scan. ALQ_CACHE sets a default path.
        #[arg(long)]
        cache: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long, value_name = "PREC", num_args = 0..=1, default_missing_value = "6")]
        float: Option<usize>,
    },
    /// Run the dual-route identity suites and exit 0 iff all hold.
    Verify {
        #[arg(long, default_value_t = 500)]
        max_level: i64,
        #[arg(long, default_value_t = 20)]
        max_weight: i64,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

fn parse_range(s: &str) -> std::result::Result<(i64, i64), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected A..B, got {s:?}"))?;
    let lo: i64 = a.trim().parse().map_err(|_| format!("bad range start {a:?}"))?;
    let hi: i64 = b.trim().parse().map_err(|_| format!("bad range end {b:?}"))?;
    Ok((lo, hi))
}

fn parse_m_mode(s: &str) -> std::result::Result<MMode, String> {
    if s == "full" {
        return Ok(MMode::Full);
    }
    if let Some(m) = s.strip_prefix("fixed:") {
        let m: i64 = m.parse().map_err(|_| format!("bad modulus in {s:?}"))?;
        if m <= 1 {
            return Err(format!("fixed modulus must be > 1, got {m}"));
        }
        return Ok(MMode::Fixed(m));
    }
    Err(format!("expected \"full\" or \"fixed:M\", got {s:?}"))
}

fn emit(table: &Table, format: Format, float: Option<usize>) {
    match format {
        Format::Csv => print!("{}", table.to_csv(float)),
        Format::Json => println!("{}", table.to_json(float)),
    }
}

fn cache_path(flag: Option<PathBuf>) -> Option<PathBuf> {
    flag.or_else(|| std::env::var_os("ALQ_CACHE").map(PathBuf::from))
}

fn with_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| Error::InvalidInput(format!("cannot build worker pool: {e}")))?
            .install(f),
        None => f(),
    }
}

fn cmd_dim(
    level: i64,
    weight: i64,
    m: Option<i64>,
    pattern: Option<String>,
) -> Result<Table> {
    if let Some(pattern) = pattern {
        let m = m.unwrap_or(level);
        let eps = SignPattern::parse(&pattern, m)?;
        let dim = dim_sign_pattern(level, weight, &eps)?;
        return Ok(Table {
            headers: vec!["level", "weight", "m", "pattern", "dim"],
            rows: vec![vec![
                Cell::Int(level),
                Cell::Int(weight),
                Cell::Int(m),
                Cell::Str(pattern),
                Cell::Int(dim),
            ]],
        });
    }
    if let Some(m) = m {
        let b = breakdown(level, weight, m)?;
        let rows = b
            .entries
            .iter()
            .map(|(eps, dim)| {
                vec![
                    Cell::Int(level),
                    Cell::Int(weight),
                    Cell::Int(m),
                    Cell::Str(eps.to_string()),
                    Cell::Int(*dim),
                ]
            })
            .collect();
        return Ok(Table {
            headers: vec!["level", "weight", "m", "pattern", "dim"],
            rows,
        });
    }
    let (plus, minus) = dim_plus_minus(level, weight)?;
    Ok(Table {
        headers: vec!["level", "weight", "total", "plus", "minus"],
        rows: vec![vec![
            Cell::Int(level),
            Cell::Int(weight),
            Cell::Int(plus + minus),
            Cell::Int(plus),
            Cell::Int(minus),
        ]],
    })
}

fn cmd_trace(level: i64, weight: i64, m: i64, space: Space) -> Result<Table> {
    let q = TraceQuery::new(level, m, weight)?;
    let (name, value) = match space {
        Space::Full => ("full", full_trace(&q)?),
        Space::New => ("new", new_trace(&q)?),
    };
    Ok(Table {
        headers: vec!["level", "weight", "m", "space", "trace"],
        rows: vec![vec![
            Cell::Int(level),
            Cell::Int(weight),
            Cell::Int(m),
            Cell::Str(name.to_string()),
            Cell::Int(value),
        ]],
    })
}

fn run() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Dim {
            level,
            weight,
            m,
            pattern,
            format,
            float,
        } => {
            let table = cmd_dim(level, weight, m, pattern)?;
            emit(&table, format, float);
        }
        Command::Trace {
            level,
            weight,
            m,
            space,
            format,
            float,
        } => {
            let table = cmd_trace(level, weight, m, space)?;
            emit(&table, format, float);
        }
        Command::Scan {
            levels,
            weights,
            m_mode,
            report,
            jobs,
            cache,
            format,
            float,
        } => {
            let cache = cache_path(cache);
            if let Some(path) = &cache {
                if path.exists() {
                    alq::quadratic::load_class_number_cache(path)?;
                }
            }
            let cfg = ScanConfig {
                levels,
                weights,
                m_mode,
                report: match report {
                    Report::Dims => ReportKind::Dims,
                    Report::Bias => ReportKind::Bias,
                    Report::Equidist => ReportKind::Equidist,
                    Report::Orbits => ReportKind::Orbits,
                },
            };
            let table = with_pool(jobs, || alq::analysis::scan(&cfg))?;
            emit(&table, format, float);
            if let Some(path) = &cache {
                alq::quadratic::save_class_number_cache(path)?;
            }
        }
        Command::Verify {
            max_level,
            max_weight,
            jobs,
        } => {
            let results = with_pool(jobs, || alq::verify::run(max_level, max_weight))?;
            for r in &results {
                println!("ok: {} ({} instances)", r.name, r.checked);
            }
            println!("all identities hold up to N={max_level}, k={max_weight}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ Error::Internal(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
