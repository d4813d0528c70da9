//! Command-line front end.
//!
//! Exit status: 0 for a positive outcome (injection found, verification
//! passed, axioms hold, ...), 1 for a negative mathematical outcome (kernel
//! witness, failed verification, axiom violation), 2 for usage and input
//! errors, 3 if an internal consistency check trips.

pub mod format;

use std::fs;
use std::io::{Read, Write};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::exchange::{self, ExchangeError, InjectionMap};
use crate::field::FieldSpec;
use crate::linalg::{self, SparseMatrix};
use crate::matroid::{self, AxiomViolation, Matroid, MatroidError, MAX_AXIOM_CAP};
use crate::solver::{self, SolveError, SolveOutcome};
use format::{InputError, MatroidSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "matroid-hall",
    version,
    about = "Exact matroid and matching toolkit"
)]
pub struct CliConfig {
    /// Output format; JSON is the stable machine-readable form.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: OutputFormat,
    /// Reinterpret matrix values in this field (`Q` or `GF(p)`).
    #[arg(long, global = true, value_parser = parse_field)]
    pub field: Option<FieldSpec>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Kernel witness, or an injection from columns to rows along nonzero entries.
    Solve { matrix: String },
    /// Check an injection (bare map or `solve` output) against a matrix.
    Verify { matrix: String, map: String },
    /// Exact rank.
    Rank { matrix: String },
    /// Kernel witness, if any.
    Kernel { matrix: String },
    /// Base exchange bijection via the exchange graph.
    Exchange {
        matroid: String,
        /// JSON array of element ids.
        #[arg(long)]
        b0: String,
        #[arg(long)]
        b1: String,
    },
    /// Base exchange bijection via contraction, deletion and duality.
    DualExchange {
        matroid: String,
        #[arg(long)]
        b0: String,
        #[arg(long)]
        b1: String,
    },
    /// Exhaustively check the independence axioms.
    Axioms {
        matroid: String,
        #[arg(long, default_value_t = matroid::DEFAULT_AXIOM_CAP)]
        cap: usize,
    },
    /// Generate a random matrix with trivial kernel (requires --field).
    Gen {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(long)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_field(s: &str) -> Result<FieldSpec, String> {
    s.parse()
        .map_err(|e: crate::field::FieldError| e.to_string())
}

/// Outcome of one command before it is written out.
struct Report {
    code: i32,
    json: Value,
    text: String,
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Usage(e.0)
    }
}

impl From<MatroidError> for Failure {
    fn from(e: MatroidError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<ExchangeError> for Failure {
    fn from(e: ExchangeError) -> Self {
        match e {
            ExchangeError::InternalContractViolation { .. } => Failure::Internal(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::Parameter(msg) => Failure::Usage(msg),
            SolveError::InternalContractViolation(msg) => Failure::Internal(msg),
        }
    }
}

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match CliConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(&config, stdin) {
        Ok(report) => {
            let out = match config.format {
                OutputFormat::Json => format!("{}\n", report.json),
                OutputFormat::Text => report.text,
            };
            let _ = stdout.write_all(out.as_bytes());
            report.code
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Internal(msg)) => {
            let _ = writeln!(stderr, "internal error: {msg}");
            EXIT_INTERNAL
        }
    }
}

struct Inputs<'a> {
    stdin: &'a mut dyn Read,
    stdin_used: bool,
}

impl Inputs<'_> {
    fn read(&mut self, path: &str) -> Result<String, Failure> {
        if path == "-" {
            if self.stdin_used {
                return Err(Failure::Usage(
                    "stdin (\"-\") can be used for only one input".into(),
                ));
            }
            self.stdin_used = true;
            let mut text = String::new();
            self.stdin
                .read_to_string(&mut text)
                .map_err(|e| Failure::Usage(format!("<stdin>: {e}")))?;
            return Ok(text);
        }
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))
    }

    fn matrix(&mut self, path: &str, field: Option<FieldSpec>) -> Result<SparseMatrix, Failure> {
        let text = self.read(path)?;
        format::parse_matrix(&text, field).map_err(|e| Failure::Usage(format!("{path}: {e}")))
    }

    fn matroid(&mut self, path: &str, field: Option<FieldSpec>) -> Result<Matroid, Failure> {
        let text = self.read(path)?;
        let spec: MatroidSpec = format::parse_matroid(&text, field)
            .map_err(|e| Failure::Usage(format!("{path}: {e}")))?;
        Ok(spec.to_matroid()?)
    }
}

fn execute(config: &CliConfig, stdin: &mut dyn Read) -> Result<Report, Failure> {
    let mut inputs = Inputs {
        stdin,
        stdin_used: false,
    };
    let field = config.field;
    match &config.command {
        Command::Solve { matrix } => {
            let m = inputs.matrix(matrix, field)?;
            Ok(match solver::solve_variable_equation_matching(&m)? {
                SolveOutcome::Injection(phi) => {
                    injection_report("injection", &phi, ("column", "row"))
                }
                SolveOutcome::Witness(w) => witness_report(&w),
            })
        }
        Command::Verify { matrix, map } => {
            let m = inputs.matrix(matrix, field)?;
            let text = inputs.read(map)?;
            let pairs = format::parse_injection(&text)
                .map_err(|e| Failure::Usage(format!("{map}: {e}")))?;
            let reason = match InjectionMap::new(pairs) {
                Err(e) => Some(e.to_string()),
                Ok(phi) if solver::verify_injection(&m, &phi) => None,
                Ok(phi) => Some(verification_failure(&m, &phi)),
            };
            Ok(match reason {
                None => Report {
                    code: EXIT_OK,
                    json: json!({"result": "verified"}),
                    text: "result: verified\n".into(),
                },
                Some(reason) => Report {
                    code: EXIT_NEGATIVE,
                    text: format!("result: verification_failed\nreason: {reason}\n"),
                    json: json!({"result": "verification_failed", "reason": reason}),
                },
            })
        }
        Command::Rank { matrix } => {
            let m = inputs.matrix(matrix, field)?;
            let r = linalg::rank(&m);
            Ok(Report {
                code: EXIT_OK,
                json: json!({"result": "rank", "rank": r, "rows": m.n_rows(), "cols": m.n_cols()}),
                text: format!(
                    "result: rank\nrank: {r}\nshape: {} x {}\n",
                    m.n_rows(),
                    m.n_cols()
                ),
            })
        }
        Command::Kernel { matrix } => {
            let m = inputs.matrix(matrix, field)?;
            Ok(match linalg::kernel_witness(&m) {
                None => Report {
                    code: EXIT_OK,
                    json: json!({"result": "trivial_kernel"}),
                    text: "result: trivial_kernel\n".into(),
                },
                Some(w) => witness_report(&w),
            })
        }
        Command::Exchange { matroid, b0, b1 } | Command::DualExchange { matroid, b0, b1 } => {
            let b0 = format::parse_id_list(b0).map_err(|e| Failure::Usage(format!("--b0: {e}")))?;
            let b1 = format::parse_id_list(b1).map_err(|e| Failure::Usage(format!("--b1: {e}")))?;
            let m = inputs.matroid(matroid, field)?;
            let (s0, s1) = (m.subset(&b0)?, m.subset(&b1)?);
            let f = if matches!(config.command, Command::Exchange { .. }) {
                exchange::base_exchange_bijection(&m, &s0, &s1)?
            } else {
                exchange::dual_base_exchange(&m, &s0, &s1)?
            };
            Ok(injection_report("bijection", &f, ("b0", "b1")))
        }
        Command::Axioms { matroid, cap } => {
            if *cap > MAX_AXIOM_CAP {
                return Err(Failure::Usage(format!(
                    "--cap {cap} exceeds the maximum {MAX_AXIOM_CAP}"
                )));
            }
            let m = inputs.matroid(matroid, field)?;
            let report = matroid::check_axioms_with_cap(&m, *cap)?;
            Ok(axioms_report(&m, &report))
        }
        Command::Gen {
            rows,
            cols,
            density,
            seed,
        } => {
            let field = field.ok_or_else(|| Failure::Usage("gen requires --field".into()))?;
            let m = solver::generate_instance(field, *rows, *cols, *density, *seed)?;
            let rendered = format::render_matrix(&m);
            Ok(Report {
                code: EXIT_OK,
                json: serde_json::from_str(&rendered).expect("rendered JSON parses"),
                text: rendered,
            })
        }
    }
}

fn table(header: [&str; 2], rows: impl IntoIterator<Item = (String, String)>) -> String {
    let rows: Vec<(String, String)> = rows.into_iter().collect();
    let width = rows
        .iter()
        .map(|(a, _)| a.chars().count())
        .chain([header[0].len()])
        .max()
        .unwrap_or(0);
    let mut out = format!("{:<width$}  {}\n", header[0], header[1]);
    for (a, b) in rows {
        out.push_str(&format!("{a:<width$}  {b}\n"));
    }
    out
}

fn injection_report(kind: &str, f: &InjectionMap, header: (&str, &str)) -> Report {
    Report {
        code: EXIT_OK,
        json: json!({"result": kind, "map": f}),
        text: format!(
            "result: {kind}\n{}",
            table(
                [header.0, header.1],
                f.iter().map(|(a, b)| (a.to_string(), b.to_string()))
            )
        ),
    }
}

fn witness_report(w: &linalg::KernelWitness) -> Report {
    let values: serde_json::Map<String, Value> = w
        .assignment()
        .iter()
        .map(|(c, v)| (c.clone(), Value::String(v.to_string())))
        .collect();
    Report {
        code: EXIT_NEGATIVE,
        json: json!({"result": "kernel_witness", "witness": values}),
        text: format!(
            "result: kernel_witness\n{}",
            table(
                ["column", "value"],
                w.assignment()
                    .iter()
                    .map(|(c, v)| (c.clone(), v.to_string()))
            )
        ),
    }
}

fn verification_failure(m: &SparseMatrix, phi: &InjectionMap) -> String {
    for c in m.col_ids() {
        match phi.get(c) {
            None => return format!("column {c:?} is not mapped"),
            Some(r) if m.row_index(r).is_none() => {
                return format!("column {c:?} maps to unknown row {r:?}")
            }
            Some(r) if m.get(r, c).is_none() => return format!("entry ({r:?}, {c:?}) is zero"),
            Some(_) => {}
        }
    }
    let extra: Vec<&str> = phi
        .iter()
        .map(|(c, _)| c)
        .filter(|c| m.col_index(c).is_none())
        .collect();
    format!("unknown columns {extra:?}")
}

fn axioms_report(m: &Matroid, report: &matroid::AxiomReport) -> Report {
    if report.holds() {
        return Report {
            code: EXIT_OK,
            json: json!({"result": "axioms_hold", "ground_size": report.ground_size}),
            text: format!("result: axioms_hold\nground_size: {}\n", report.ground_size),
        };
    }
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| {
            let axiom = v.axiom().to_string();
            match v {
                AxiomViolation::EmptySetDependent => json!({"axiom": axiom}),
                AxiomViolation::SubsetClosure {
                    independent,
                    subset,
                } => {
                    json!({"axiom": axiom, "set": m.ids(independent), "subset": m.ids(subset)})
                }
                AxiomViolation::Augmentation {
                    maximal,
                    non_maximal,
                } => {
                    json!({"axiom": axiom, "J": m.ids(maximal), "I": m.ids(non_maximal)})
                }
                AxiomViolation::Maximality {
                    within,
                    independent,
                } => {
                    json!({"axiom": axiom, "X": m.ids(within), "I": m.ids(independent)})
                }
            }
        })
        .collect();
    let lines: Vec<(String, String)> = violations
        .iter()
        .map(|v| {
            let mut detail = v.as_object().expect("object").clone();
            let axiom = detail.remove("axiom").expect("axiom key");
            let rest: Vec<String> = detail.iter().map(|(k, v)| format!("{k}={v}")).collect();
            (
                axiom.as_str().unwrap_or_default().to_string(),
                rest.join(" "),
            )
        })
        .collect();
    Report {
        code: EXIT_NEGATIVE,
        json: json!({"result": "axiom_violation", "violations": violations}),
        text: format!(
            "result: axiom_violation\n{}",
            table(["axiom", "witness"], lines)
        ),
    }
}
