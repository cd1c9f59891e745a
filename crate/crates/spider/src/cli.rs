//! Command-line entry points. Exit codes: 0 success, 1 verification
//! failure, 2 parse or validation error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use spider_core::cobweb::{evaluate, reduce_oracle, OracleStep};
use spider_core::statesum::{evaluate_comb, map_web};
use spider_core::web::relation_instances;

use crate::format::{self, cobweb_comb_to_json, serialize, web_comb_to_json, ParseError};
use crate::harness::{self, CheckJson, RelationFilter, ReportJson};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "spider", about = "Map SL_n webs to cobwebs and check the web relations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Map a web to its combination of cobwebs for the given boundary sets.
    Map {
        web: PathBuf,
        boundary: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Print the value of a cobweb.
    Eval { cobweb: PathBuf },
    /// Reduce a cobweb with the rewrite oracle.
    Reduce {
        cobweb: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Check the web relations over all boundary data.
    Verify {
        /// A single rank or an inclusive range such as `2..4`.
        #[arg(long, default_value = "2..4")]
        n: String,
        /// `all`, a relation name, or a name with `_reversed`.
        #[arg(long, default_value = "all")]
        relation: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Allow rank 5.
        #[arg(long)]
        include_n5: bool,
    },
    /// Random rewrites and oracle reductions of random closed cobwebs.
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        iters: usize,
        #[arg(long, default_value = "2..4")]
        n: String,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print the relation catalog at rank `n` as JSON.
    Catalog {
        #[arg(long)]
        n: u8,
    },
    /// Parse a diagram and print its canonical form.
    Canon { file: PathBuf },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{0}")]
    Invalid(String),
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn parse_with<T>(path: &Path, f: impl FnOnce(&str) -> Result<T, ParseError>) -> Result<T, CliError> {
    let text = read(path)?;
    f(&text).map_err(|source| CliError::Parse {
        path: path.display().to_string(),
        source,
    })
}

/// `3` or `2..4` (inclusive).
pub fn parse_ranks(s: &str, include_n5: bool) -> Result<Vec<u8>, CliError> {
    let bad = || CliError::Invalid(format!("--n expects a rank or a range like 2..4, got `{s}`"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a.trim().parse::<u8>().map_err(|_| bad())?, b.trim().parse::<u8>().map_err(|_| bad())?),
        None => {
            let n = s.trim().parse::<u8>().map_err(|_| bad())?;
            (n, n)
        }
    };
    let max = if include_n5 { 5 } else { 4 };
    if lo < 2 || hi < lo || hi > max {
        return Err(CliError::Invalid(format!(
            "--n must lie in 2..{max}{}",
            if include_n5 { "" } else { " (pass --include-n5 for rank 5)" }
        )));
    }
    Ok((lo..=hi).collect())
}

fn json<T: Serialize>(out: &mut dyn Write, value: &T) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)
}

#[derive(Serialize)]
struct ReduceJson {
    factor: Vec<[i64; 3]>,
    value: String,
    steps: usize,
    fully_reduced: bool,
    normal_form: format::DocDto<[u8; 2], format::CobwebLayerDto>,
}

#[derive(Serialize)]
struct VerifyJson {
    passed: bool,
    relations: Vec<ReportJson>,
    consequences: Vec<CheckJson>,
}

#[derive(Serialize)]
struct FuzzJson {
    n: u8,
    trials: usize,
    failures: Vec<String>,
}

#[derive(Serialize)]
struct CatalogEntry {
    name: String,
    params: Vec<u8>,
    lhs: Vec<format::TermDto<format::DocDto<u8, format::WebLayerDto>>>,
    rhs: Vec<format::TermDto<format::DocDto<u8, format::WebLayerDto>>>,
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<i32, CliError> {
    let io = |e: std::io::Error| CliError::Io {
        path: "<stdout>".into(),
        source: e,
    };
    match cmd {
        Command::Map { web, boundary, format } => {
            let w = parse_with(&web, format::parse_web)?;
            let data = parse_with(&boundary, |t| format::parse_boundary(t, w.n()))?;
            let image = map_web(&w, &data).map_err(|e| CliError::Invalid(e.to_string()))?;
            match format {
                Format::Json => json(out, &cobweb_comb_to_json(&image)).map_err(io)?,
                Format::Text => {
                    writeln!(out, "{} terms, total {}", image.len(), evaluate_comb(&image)).map_err(io)?;
                    for (k, d) in image.iter() {
                        writeln!(out, "{k} * [{} layers] value {}", d.layers().len(), evaluate(d)).map_err(io)?;
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Command::Eval { cobweb } => {
            let d = parse_with(&cobweb, format::parse_cobweb)?;
            writeln!(out, "{}", evaluate(&d)).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Reduce { cobweb, budget, format } => {
            let d = parse_with(&cobweb, format::parse_cobweb)?;
            let r = reduce_oracle(&d, budget).map_err(|e| CliError::Invalid(e.to_string()))?;
            match format {
                Format::Json => json(
                    out,
                    &ReduceJson {
                        factor: format::scalar_to_json(&r.factor),
                        value: r.factor.to_string(),
                        steps: r.steps.len(),
                        fully_reduced: r.fully_reduced,
                        normal_form: format::cobweb_to_dto(&r.normal_form),
                    },
                )
                .map_err(io)?,
                Format::Text => {
                    for s in &r.steps {
                        match s {
                            OracleStep::Rewrite(rw) => writeln!(out, "{rw:?}"),
                            OracleStep::Extract { root, ccw } => writeln!(out, "extract {root} ccw={ccw}"),
                        }
                        .map_err(io)?;
                    }
                    writeln!(
                        out,
                        "factor {} after {} steps; {} layers left{}",
                        r.factor,
                        r.steps.len(),
                        r.normal_form.layers().len(),
                        if r.fully_reduced { "" } else { " (not fully reduced)" }
                    )
                    .map_err(io)?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Verify {
            n,
            relation,
            format,
            include_n5,
        } => {
            let ns = parse_ranks(&n, include_n5)?;
            let filter = RelationFilter::parse(&relation)
                .ok_or_else(|| CliError::Invalid(format!("unknown relation `{relation}`")))?;
            let instances = harness::selected_instances(&ns, &filter);
            let reports = harness::run_relations(&instances).map_err(|e| CliError::Invalid(e.to_string()))?;
            let checks = if filter == RelationFilter::All {
                harness::run_consequences(&ns).map_err(|e| CliError::Invalid(e.to_string()))?
            } else {
                Vec::new()
            };
            let passed = reports.iter().all(|r| r.passed()) && checks.iter().all(|c| c.passed);
            match format {
                Format::Json => json(
                    out,
                    &VerifyJson {
                        passed,
                        relations: reports.iter().map(ReportJson::from).collect(),
                        consequences: checks.iter().map(CheckJson::from).collect(),
                    },
                )
                .map_err(io)?,
                Format::Text => {
                    for r in &reports {
                        writeln!(
                            out,
                            "{} {} n={} params={:?} checked={} skipped={}",
                            if r.passed() { "PASS" } else { "FAIL" },
                            r.relation,
                            r.n,
                            r.params,
                            r.checked,
                            r.skipped
                        )
                        .map_err(io)?;
                        for f in &r.failures {
                            writeln!(out, "  {:?}: lhs {} rhs {}", format::boundary_to_dto(&f.data), f.lhs, f.rhs)
                                .map_err(io)?;
                        }
                    }
                    for c in &checks {
                        writeln!(out, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)
                            .map_err(io)?;
                    }
                    let total = reports.len() + checks.len();
                    let ok = reports.iter().filter(|r| r.passed()).count() + checks.iter().filter(|c| c.passed).count();
                    writeln!(out, "{ok}/{total} passed").map_err(io)?;
                }
            }
            Ok(if passed { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Fuzz {
            seed,
            iters,
            n,
            budget,
            format,
        } => {
            let ns = parse_ranks(&n, false)?;
            let runs = harness::run_fuzz(&ns, seed, iters, 20, budget);
            let passed = runs.iter().all(|(_, r)| r.failures.is_empty());
            match format {
                Format::Json => {
                    let rows: Vec<FuzzJson> = runs
                        .iter()
                        .map(|(n, r)| FuzzJson {
                            n: *n,
                            trials: r.trials,
                            failures: r.failures.iter().map(|f| format!("trial {}: {}", f.trial, f.reason)).collect(),
                        })
                        .collect();
                    json(out, &rows).map_err(io)?;
                }
                Format::Text => {
                    for (n, r) in &runs {
                        writeln!(out, "n={n}: {} trials, {} failures", r.trials, r.failures.len()).map_err(io)?;
                        for f in &r.failures {
                            writeln!(out, "  trial {}: {}", f.trial, f.reason).map_err(io)?;
                        }
                    }
                }
            }
            Ok(if passed { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Catalog { n } => {
            if !(2..=5).contains(&n) {
                return Err(CliError::Invalid("--n must lie in 2..5".into()));
            }
            let entries: Vec<CatalogEntry> = relation_instances(n)
                .into_iter()
                .flat_map(|i| {
                    let r = i.reverse();
                    [i, r]
                })
                .map(|i| CatalogEntry {
                    name: i.name(),
                    params: i.params.clone(),
                    lhs: web_comb_to_json(&i.lhs),
                    rhs: web_comb_to_json(&i.rhs),
                })
                .collect();
            json(out, &entries).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Canon { file } => {
            let d = parse_with(&file, format::parse)?;
            write!(out, "{}", serialize(&d)).map_err(io)?;
            Ok(EXIT_OK)
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INVALID
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks() {
        assert_eq!(parse_ranks("2..4", false).unwrap(), vec![2, 3, 4]);
        assert_eq!(parse_ranks("3", false).unwrap(), vec![3]);
        assert!(parse_ranks("5", false).is_err());
        assert_eq!(parse_ranks("5", true).unwrap(), vec![5]);
        assert!(parse_ranks("1..3", false).is_err());
        assert!(parse_ranks("x", false).is_err());
    }

    #[test]
    fn bad_flags_exit_two() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(run(["spider", "verify", "--relation", "nope"], &mut o, &mut e), EXIT_INVALID);
        assert_eq!(run(["spider", "verify", "--bogus"], &mut o, &mut e), EXIT_INVALID);
        assert_eq!(run(["spider", "verify", "--n", "5"], &mut o, &mut e), EXIT_INVALID);
    }
}
