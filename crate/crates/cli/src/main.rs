//! `zetaps` command-line interface.

mod format;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use zetaps::chi::{brute_force_chi, construct_chi, domination_check, orientation, verify_pattern};
use zetaps::complexzeros::{phi_hat, ScanConfig};
use zetaps::dioph::{search_solutions, smooth_triple_scan, weierstrass_map, QuadSystem};
use zetaps::dirichlet::{PrecisionPolicy, DEFAULT_PRECISION, DEFAULT_PRECISION_CAP};
use zetaps::realroots::{rho, rho_table, scaled_value, KSpec, RootConfig, Verdict};
use zetaps::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_INCOMPLETE: u8 = 2;
const EXIT_NO_WITNESS: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "zetaps", version, about = "Zeros and sign patterns of partial sums of the zeta function")]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct RunConfig {
    /// Working precision in bits.
    #[arg(long, global = true, env = "ZETAPS_PREC_BITS", default_value_t = DEFAULT_PRECISION)]
    precision_bits: u32,
    /// Largest precision tried when a sign cannot be certified.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION_CAP)]
    precision_cap: u32,
    /// Absolute tolerance on real parts.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Significant digits of numeric output.
    #[arg(long, global = true, default_value_t = 12)]
    digits: usize,
    /// Write output to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<std::path::PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Leftmost real zero of zeta_{n,k}.
    Rho {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
    },
    /// rho_{n,k} and rho_{n,k}/n over a range of n.
    RhoTable {
        /// A fixed k, or `full` for k = n - 1.
        #[arg(long, value_parser = parse_kspec)]
        k: KSpec,
        #[arg(long)]
        n_from: u64,
        #[arg(long)]
        n_to: u64,
        #[arg(long, default_value_t = 1)]
        step: u64,
    },
    /// Complex zeros of zeta_n up to height tau-max (JSON).
    Phi {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        tau_max: f64,
        #[arg(long, default_value_t = 1.0)]
        sigma_pad: f64,
        /// Boxes examined per unit rectangle before giving up.
        #[arg(long, default_value_t = ScanConfig::default().max_boxes)]
        max_boxes: usize,
    },
    /// Sign-pattern witness for the window n-k..n (JSON).
    Chi {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
        /// Cross-check against the exhaustive search.
        #[arg(long)]
        brute_force: bool,
    },
    /// n^{-cn} zeta_{n,k}(-cn) against (e^c - 2)/(e^c - 1).
    LimitCheck {
        #[arg(long)]
        c: f64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        n: u64,
    },
    /// Squarefree kernels of n, n-1, ..., n-k.
    Kernels {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
    },
    /// n <= n-max whose window of k+1 kernels has three k-smooth members.
    SmoothScan {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        n_max: u64,
    },
    /// Solutions of u1 x^2 + k1 = u2 y^2 + k2 = u3 z^2 + k3 and their curve points.
    Dioph {
        #[arg(long, value_parser = parse_triple)]
        u: [u64; 3],
        #[arg(long, value_parser = parse_triple)]
        kk: [u64; 3],
        #[arg(long)]
        bound: u64,
    },
}

fn parse_kspec(s: &str) -> Result<KSpec, String> {
    if s == "full" {
        return Ok(KSpec::Full);
    }
    s.parse().map(KSpec::Fixed).map_err(|_| format!("expected a positive integer or `full`, got `{s}`"))
}

fn parse_triple(s: &str) -> Result<[u64; 3], String> {
    let parts: Vec<u64> = s
        .split(',')
        .map(|p| p.trim().parse::<u64>())
        .collect::<Result<_, _>>()
        .map_err(|e| format!("`{s}`: {e}"))?;
    parts.try_into().map_err(|_| format!("expected three comma-separated integers, got `{s}`"))
}

#[derive(Debug, Clone)]
enum Cell {
    Num(f64),
    Int(i128),
    Text(String),
    Bool(bool),
    Empty,
}

struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Self { header: header.to_vec(), rows: Vec::new() }
    }

    fn render(&self, fmt: OutputFormat, digits: usize) -> String {
        match fmt {
            OutputFormat::Csv => {
                let mut out = self.header.join(",");
                out.push('\n');
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(|c| csv_cell(c, digits)).collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
                out
            }
            OutputFormat::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> = self
                            .header
                            .iter()
                            .zip(row)
                            .map(|(h, c)| (h.to_string(), json_cell(c, digits)))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                pretty(&Value::Array(rows))
            }
        }
    }
}

fn csv_cell(c: &Cell, digits: usize) -> String {
    match c {
        Cell::Num(x) => format::num(*x, digits),
        Cell::Int(i) => i.to_string(),
        Cell::Text(s) => s.clone(),
        Cell::Bool(b) => b.to_string(),
        Cell::Empty => String::new(),
    }
}

fn json_cell(c: &Cell, digits: usize) -> Value {
    match c {
        Cell::Num(x) => format::json_num(*x, digits),
        Cell::Int(i) => i64::try_from(*i).map(Value::from).unwrap_or_else(|_| Value::String(i.to_string())),
        Cell::Text(s) => Value::String(s.clone()),
        Cell::Bool(b) => Value::Bool(*b),
        Cell::Empty => Value::Null,
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Output text plus exit code.
struct Report {
    text: String,
    code: u8,
}

impl Report {
    fn ok(text: String) -> Self {
        Self { text, code: 0 }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidArgument(_) | Error::Overflow(_) | Error::OverflowRisk { .. } => EXIT_USAGE,
        Error::NoWitness { .. } => EXIT_NO_WITNESS,
        _ => EXIT_INCOMPLETE,
    }
}

impl RunConfig {
    fn validate(&self) -> Result<(), String> {
        if self.precision_bits > self.precision_cap {
            return Err(format!(
                "--precision-bits {} exceeds --precision-cap {}",
                self.precision_bits, self.precision_cap
            ));
        }
        if !(self.tolerance > 0.0) || !self.tolerance.is_finite() {
            return Err("--tolerance must be positive".into());
        }
        if self.workers == Some(0) {
            return Err("--workers must be positive".into());
        }
        if self.digits == 0 || self.digits > 17 {
            return Err("--digits must be between 1 and 17".into());
        }
        Ok(())
    }

    fn root_config(&self) -> Result<RootConfig, Error> {
        Ok(RootConfig {
            policy: PrecisionPolicy::new(self.precision_bits, self.precision_cap)?,
            tolerance: self.tolerance,
            scan_step: None,
        })
    }

    fn scan_config(&self) -> ScanConfig {
        ScanConfig { precision_bits: self.precision_bits, tolerance: self.tolerance, ..ScanConfig::default() }
    }
}

fn run(cmd: &Command, cfg: &RunConfig) -> Result<Report, Error> {
    let d = cfg.digits;
    match *cmd {
        Command::Rho { n, k } => {
            let r = rho(n, k, &cfg.root_config()?)?;
            let mut t = Table::new(&["n", "k", "verdict", "rho", "lo", "hi", "precision_bits"]);
            let (verdict, lo, hi) = match r.verdict {
                Verdict::Root { lo, hi, .. } => ("Root", Cell::Num(lo), Cell::Num(hi)),
                Verdict::NoRealZero { .. } => ("NoRealZero", Cell::Empty, Cell::Empty),
            };
            t.rows.push(vec![
                Cell::Int(n.into()),
                Cell::Int(k.into()),
                Cell::Text(verdict.into()),
                Cell::Num(r.rho()),
                lo,
                hi,
                Cell::Int(r.precision_bits.into()),
            ]);
            Ok(Report::ok(t.render(cfg.format, d)))
        }
        Command::RhoTable { k, n_from, n_to, step } => {
            let rows = rho_table(k, n_from, n_to, step, &cfg.root_config()?)?;
            let mut t = Table::new(&["n", "k", "rho", "rho_over_n"]);
            let mut code = 0;
            for row in &rows {
                if let Err(e) = &row.result {
                    eprintln!("n = {}, k = {}: {e}", row.n, row.k);
                    code = EXIT_INCOMPLETE;
                }
                t.rows.push(vec![
                    Cell::Int(row.n.into()),
                    Cell::Int(row.k.into()),
                    Cell::Num(row.rho()),
                    Cell::Num(row.rho_over_n()),
                ]);
            }
            Ok(Report { text: t.render(cfg.format, d), code })
        }
        Command::Phi { n, tau_max, sigma_pad, max_boxes } => {
            let scan = ScanConfig { max_boxes, ..cfg.scan_config() };
            let est = phi_hat(n, tau_max, sigma_pad, &scan)?;
            for issue in &est.issues {
                eprintln!("{issue}");
            }
            let zeros: Vec<Value> = est
                .zeros
                .iter()
                .map(|z| {
                    json!({
                        "sigma": format::json_num(z.sigma, d),
                        "tau": format::json_num(z.tau, d),
                        "residual": format::json_num(z.residual, d),
                    })
                })
                .collect();
            let out = json!({
                "n": n,
                "tau_max": format::json_num(tau_max, d),
                "phi_hat": format::json_num(est.phi_hat, d),
                "rho_full": format::json_num(est.rho_full, d),
                "zeros": zeros,
                "complete": est.complete,
            });
            let code = if est.complete { 0 } else { EXIT_INCOMPLETE };
            Ok(Report { text: pretty(&out), code })
        }
        Command::Chi { n, k, brute_force } => {
            let chi = construct_chi(n, k)?;
            let overrides: Map<String, Value> =
                chi.overrides().iter().map(|(p, v)| (p.to_string(), Value::from(*v))).collect();
            let mut out = json!({
                "n": n,
                "k": k,
                "orientation": orientation(&chi, n),
                "overrides": overrides,
                "provenance": chi.provenance().name(),
                "verified": verify_pattern(&chi, n, k) && domination_check(&chi, n, k),
            });
            if brute_force {
                let agrees = match brute_force_chi(n, k) {
                    Ok(b) => verify_pattern(&b, n, k),
                    Err(Error::NoWitness { .. }) => false,
                    Err(e) => return Err(e),
                };
                out["oracle_agrees"] = Value::Bool(agrees);
            }
            Ok(Report::ok(pretty(&out)))
        }
        Command::LimitCheck { c, k, n } => {
            let v = scaled_value(n, k, c, cfg.precision_bits)?;
            let mut t = Table::new(&["n", "k", "c", "scaled_value", "limit", "abs_err"]);
            t.rows.push(vec![
                Cell::Int(n.into()),
                Cell::Int(k.into()),
                Cell::Num(c),
                Cell::Num(v.value),
                Cell::Num(v.limit),
                Cell::Num(v.abs_err),
            ]);
            Ok(Report::ok(t.render(cfg.format, d)))
        }
        Command::Kernels { n, k } => {
            let w = zetaps::arith::window_report(n, k)?;
            let mut t = Table::new(&["m", "kernel"]);
            for (j, r) in w.kernels.iter().enumerate() {
                t.rows.push(vec![Cell::Int((n - j as u64).into()), Cell::Int((*r).into())]);
            }
            Ok(Report::ok(t.render(cfg.format, d)))
        }
        Command::SmoothScan { k, n_max } => {
            let scan = smooth_triple_scan(k, n_max)?;
            let mut t = Table::new(&["n"]);
            t.rows.extend(scan.into_iter().map(|n| vec![Cell::Int(n.into())]));
            Ok(Report::ok(t.render(cfg.format, d)))
        }
        Command::Dioph { u, kk, bound } => {
            let sys = QuadSystem::new(u, kk)?;
            let mut t = Table::new(&["x", "y", "z", "X", "Y", "alpha", "beta", "on_curve"]);
            for s in search_solutions(&sys, bound) {
                let p = weierstrass_map(&sys, s)?;
                let big = |v: &dyn std::fmt::Display| Cell::Text(v.to_string());
                t.rows.push(vec![
                    Cell::Int(s.0.into()),
                    Cell::Int(s.1.into()),
                    Cell::Int(s.2.into()),
                    big(&p.x),
                    big(&p.y),
                    big(&p.alpha),
                    big(&p.beta),
                    Cell::Bool(p.on_curve()),
                ]);
            }
            Ok(Report::ok(t.render(cfg.format, d)))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(msg) = cli.run.validate() {
        eprintln!("error: {msg}");
        return ExitCode::from(EXIT_USAGE);
    }
    if let Some(w) = cli.run.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    let report = match run(&cli.command, &cli.run) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let written = match &cli.run.out {
        Some(path) => fs::write(path, &report.text),
        None => std::io::stdout().lock().write_all(report.text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    ExitCode::from(report.code)
}
