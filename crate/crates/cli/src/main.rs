use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pglcount::{CaseTag, Instance};
use pglcount_cli::checks::SelftestConfig;
use pglcount_cli::commands::{self, NumericArgs, NumericSource};
use pglcount_cli::RunReport;

/// Count and compute PGL(2) transforms making two subspaces of binary forms
/// span a small space.
#[derive(Parser)]
#[command(name = "pglcount", version)]
struct Cli {
    /// print the full run report as JSON
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Params {
    a: usize,
    b: usize,
    c: usize,
    d: usize,
}

#[derive(Args, Clone)]
struct Roots {
    /// comma-separated roots of g_a, e.g. `--roots-a=-1,0,1/2`
    #[arg(long, allow_hyphen_values = true, requires = "roots_b")]
    roots_a: Option<String>,
    #[arg(long, allow_hyphen_values = true, requires = "roots_a")]
    roots_b: Option<String>,
}

impl Roots {
    fn pair(&self) -> Option<(&str, &str)> {
        Some((self.roots_a.as_deref()?, self.roots_b.as_deref()?))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseArg {
    A,
    B,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// closed-form number of solutions
    Count {
        #[command(flatten)]
        params: Params,
    },
    /// exact solutions of a structured instance (c = a+b, d = a+b+3)
    SolveStructured {
        a: usize,
        b: usize,
        #[command(flatten)]
        roots: Roots,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// homotopy continuation on a random, structured or given instance
    SolveNumeric {
        #[command(flatten)]
        params: Params,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        repeats: usize,
        #[arg(long)]
        tol_residual: Option<f64>,
        #[arg(long)]
        tol_dedup: Option<f64>,
        /// include per-path tracking data
        #[arg(long)]
        paths_report: bool,
        /// keep only solutions found by at least two randomizations (implies --repeats >= 2)
        #[arg(long)]
        confirm: bool,
        /// seeded random instance (the default)
        #[arg(long, conflicts_with_all = ["structured", "instance"])]
        random: bool,
        /// use a structured instance and compare with its exact solutions
        #[arg(long, conflicts_with = "instance")]
        structured: bool,
        #[command(flatten)]
        roots: Roots,
        /// instance JSON file (`-` for stdin); its parameters must match
        #[arg(long)]
        instance: Option<String>,
    },
    /// localization degree against the closed form on a grid
    BottVerify {
        #[arg(long, default_value_t = 10)]
        amax: usize,
        #[arg(long, default_value_t = 10)]
        bmax: usize,
        #[arg(long, value_enum, default_value = "both")]
        case: CaseArg,
    },
    /// Wronskians of an instance (JSON file or stdin), or of random samples
    Wronskian {
        input: Option<String>,
        /// sample random subspaces of dimension b+1 in degree d instead
        #[arg(long, num_args = 2, value_names = ["B", "D"])]
        sample: Option<Vec<usize>>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// coefficient bound for the sampled subspaces
        #[arg(long, default_value_t = 1000)]
        bound: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// dual parameters, dual instance and the solution maps onto it
    Dual {
        #[command(flatten)]
        params: Params,
        #[arg(long)]
        structured: bool,
        #[command(flatten)]
        roots: Roots,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// seeded random instance as JSON
    Generate {
        #[command(flatten)]
        params: Params,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// run the verification matrix
    Selftest {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        repeats: usize,
    },
}

fn read_instance(path: &str) -> Result<Instance, String> {
    let mut text = String::new();
    if path == "-" {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| e.to_string())?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
    }
    serde_json::from_str(&text).map_err(|e| format!("{path}: {e}"))
}

fn summary(r: &RunReport) -> String {
    if r.command == "count" {
        return r.counts["closed_form"].to_string();
    }
    let mut lines: Vec<String> = r.counts.iter().map(|(k, v)| format!("{k}: {v}")).collect();
    for c in &r.criteria {
        lines.push(format!(
            "[{}] {} {}: {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            c.detail
        ));
    }
    lines.extend(
        r.agreement
            .iter()
            .filter(|(k, _)| !k.starts_with("criterion_"))
            .map(|(k, v)| format!("{k}: {}", if *v { "ok" } else { "FAILED" })),
    );
    lines.join("\n")
}

fn run(cli: &Cli) -> Result<RunReport, String> {
    let err = |e: pglcount::Error| e.to_string();
    match &cli.command {
        Command::Count { params: p } => commands::count(p.a, p.b, p.c, p.d).map_err(err),
        Command::SolveStructured { a, b, roots, seed } => {
            commands::solve_structured(*a, *b, roots.pair(), *seed).map_err(err)
        }
        Command::SolveNumeric {
            params: p,
            seed,
            repeats,
            tol_residual,
            tol_dedup,
            paths_report,
            confirm,
            structured,
            roots,
            instance,
            ..
        } => {
            let source = match instance {
                Some(path) => {
                    let inst = read_instance(path)?;
                    if inst.params() != (p.a, p.b, p.c, p.d) {
                        return Err(format!("instance has parameters {:?}", inst.params()));
                    }
                    NumericSource::Given(Box::new(inst))
                }
                None if *structured => NumericSource::Structured(
                    roots.pair().map(|(x, y)| (x.to_string(), y.to_string())),
                ),
                None => NumericSource::Random,
            };
            commands::solve_numeric_cmd(&NumericArgs {
                params: (p.a, p.b, p.c, p.d),
                source,
                seed: *seed,
                repeats: *repeats,
                tol_residual: *tol_residual,
                tol_dedup: *tol_dedup,
                paths_report: *paths_report,
                confirm: *confirm,
            })
            .map_err(err)
        }
        Command::BottVerify { amax, bmax, case } => {
            let cases = match case {
                CaseArg::A => vec![CaseTag::A],
                CaseArg::B => vec![CaseTag::B],
                CaseArg::Both => vec![CaseTag::A, CaseTag::B],
            };
            commands::bott_verify_cmd(*amax, *bmax, &cases).map_err(err)
        }
        Command::Wronskian {
            input,
            sample,
            samples,
            bound,
            seed,
        } => match sample {
            Some(bd) => {
                commands::wronskian_sample(bd[0], bd[1], *samples, *bound, *seed).map_err(err)
            }
            None => commands::wronskian_instance(&read_instance(input.as_deref().unwrap_or("-"))?)
                .map_err(err),
        },
        Command::Dual {
            params: p,
            structured,
            roots,
            seed,
        } => commands::dual(p.a, p.b, p.c, p.d, *structured, roots.pair(), *seed).map_err(err),
        Command::Generate { .. } | Command::Selftest { .. } => unreachable!(),
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match &cli.command {
        Command::Generate { params: p, seed } => {
            return match commands::generate(p.a, p.b, p.c, p.d, *seed) {
                Ok(inst) => {
                    emit(&serde_json::to_string_pretty(&inst).expect("plain data"));
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            };
        }
        Command::Selftest { seed, repeats } => {
            let cfg = SelftestConfig {
                seed: *seed,
                repeats: *repeats,
            };
            Ok(commands::selftest(&cfg, &pglcount::pairing::pair))
        }
        _ => run(&cli),
    };
    match report {
        Ok(r) => {
            if cli.json {
                emit(&serde_json::to_string_pretty(&r).expect("plain data"));
            } else {
                emit(&summary(&r));
            }
            eprintln!("{} finished in {:.2}s", r.command, r.wall_time);
            if r.all_agree() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
