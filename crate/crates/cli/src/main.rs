//! `pff`: search, verify and certify PFF elements from the command line.

mod golden;
mod report;

use std::collections::BTreeMap;
use std::io::Write;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use pff_core::charsum::{CharacterTable, ComplexVal};
use pff_core::fpoly::{format_poly, parse_poly};
use pff_core::pff::{self, verify_pff_polynomial, ElementTable};
use pff_core::sieve::{certify, certify_many};
use pff_core::{BaseField, Certificate, CertifyConfig, Error, PffContext, SearchConfig, SearchMode, Status};

use golden::Section;
use report::{Budgets, RunReport};

const EXIT_NOT_PFF: u8 = 3;
const EXIT_UNDECIDED: u8 = 4;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 5;

/// Default field-size cap for the golden suite, large enough for GF(3^16).
const GOLDEN_FIRST_BUDGET: u128 = 100_000_000;

#[derive(Parser, Debug)]
#[command(name = "pff", version, about = "Primitive free elements with free inverses over finite fields")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct GlobalOpts {
    /// Largest field size GF(q^n) an element enumeration may walk.
    #[arg(long, global = true)]
    budget: Option<u128>,
    /// Pollard rho effort when factoring q^n - 1.
    #[arg(long, global = true, default_value_t = pff_core::arith::DEFAULT_FACTOR_EFFORT)]
    factor_effort: u64,
    /// Print the JSON run report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized checks (recorded in the report)
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Also write the JSON run report to this file.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    /// Record wall-clock time in the report.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether (q, n) is a PFF pair and print the certificate.
    Certify { q: u64, n: u64 },
    /// Certify every pair in a range, in parallel.
    CertifyRange {
        #[arg(long, default_value_t = 2)]
        q_min: u64,
        #[arg(long)]
        q_max: u64,
        #[arg(long, default_value_t = 3)]
        n_min: u64,
        #[arg(long)]
        n_max: u64,
    },
    /// Search GF(q^n) for PFF polynomials.
    Search {
        q: u64,
        n: usize,
        #[command(flatten)]
        mode: ModeFlags,
    },
    /// Test whether the root of a monic irreducible polynomial is PFF.
    Verify { q: u64, n: usize, poly: String },
    /// Run the golden checks for the published tables, bounds, exceptions
    /// and character-sum identities.
    VerifyPaper {
        #[arg(long, value_enum)]
        section: Vec<Section>,
    },
    /// Evaluate N(m, g, h) by characters and by counting.
    Charsum {
        q: u64,
        n: usize,
        /// Divisor of q^n - 1 (default q^n - 1).
        #[arg(long)]
        m: Option<u128>,
        /// Divisor of x^n - 1 (default x^n - 1).
        #[arg(long)]
        g: Option<String>,
        /// Divisor of x^n - 1 for the inverse (default x^n - 1)
        #[arg(long)]
        h: Option<String>,
    },
}

#[derive(Args, Debug, Clone, Copy)]
#[group(multiple = false)]
struct ModeFlags {
    /// Stop at the first PFF polynomial (default)
    #[arg(long)]
    first: bool,
    /// List every PFF polynomial
    #[arg(long)]
    all: bool,
    /// Count PFF polynomials without listing them
    #[arg(long)]
    count: bool,
}

impl ModeFlags {
    fn mode(self) -> SearchMode {
        if self.all {
            SearchMode::All
        } else if self.count {
            SearchMode::Count
        } else {
            SearchMode::First
        }
    }
}

/// What a command produced: JSON results, human text and the exit code.
struct Outcome {
    parameters: BTreeMap<String, Value>,
    results: Value,
    text: String,
    code: u8,
}

fn status_code(s: Status) -> u8 {
    match s {
        Status::Pff => 0,
        Status::NotPff => EXIT_NOT_PFF,
        Status::Undecided => EXIT_UNDECIDED,
    }
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        Error::NotPrime(_) | Error::NotPrimePower(_) | Error::InvalidArgument(_) | Error::Parse { .. } => EXIT_USAGE,
        Error::WrongDegree { .. } | Error::NotMonic | Error::NotIrreducible(_) | Error::NotADivisor(_) => EXIT_USAGE,
        _ => 1,
    }
}

fn params(pairs: &[(&str, Value)]) -> BTreeMap<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn search_config(g: &GlobalOpts, first_default: u128) -> SearchConfig {
    let mut c = SearchConfig { factor_effort: g.factor_effort, first_budget: first_default, ..SearchConfig::default() };
    if let Some(b) = g.budget {
        c.first_budget = b;
        c.exhaustive_budget = b;
    }
    c
}

fn certificate_text(c: &Certificate) -> String {
    let status = serde_json::to_value(c.status).expect("status");
    let method = serde_json::to_value(c.method).expect("method");
    let mut s = format!("({}, {}): {} via {}", c.q, c.n, status.as_str().unwrap_or("?"), method.as_str().unwrap_or("?"));
    if c.external_axiom {
        s += " [uses the prime-degree trace theorem]";
    }
    if let Some(x) = c.cross_checked {
        s += &format!(" [exhaustive search agrees: {x}]");
    }
    if let Some(w) = &c.witness {
        s += &format!("\n  witness {w}");
    }
    for num in &c.numerics {
        s += &format!("\n  {} = {}", num.name, num.decimal);
        if let Some(r) = num.rational.as_ref().filter(|r| **r != num.decimal) {
            s += &format!(" ({r})");
        }
    }
    s
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let g = &cli.global;
    match &cli.command {
        Command::Certify { q, n } => {
            let config = CertifyConfig { search: search_config(g, pff::DEFAULT_FIRST_BUDGET), ..CertifyConfig::default() };
            let c = certify(*q, *n, &config)?;
            Ok(Outcome {
                parameters: params(&[("q", json!(q)), ("n", json!(n))]),
                results: serde_json::to_value(&c).expect("certificate"),
                text: certificate_text(&c),
                code: status_code(c.status),
            })
        }
        Command::CertifyRange { q_min, q_max, n_min, n_max } => {
            let config = CertifyConfig { search: search_config(g, pff::DEFAULT_FIRST_BUDGET), ..CertifyConfig::default() };
            let pairs: Vec<(u64, u64)> = (*q_min..=*q_max)
                .filter(|&q| pff_core::arith::prime_power(q).is_ok())
                .flat_map(|q| (*n_min..=*n_max).map(move |n| (q, n)))
                .collect();
            let mut results = Vec::new();
            let mut text = Vec::new();
            let mut code = 0;
            for ((q, n), r) in pairs.iter().zip(certify_many(&pairs, &config)) {
                match r {
                    Ok(c) => {
                        if c.status == Status::Undecided {
                            code = EXIT_UNDECIDED;
                        }
                        text.push(certificate_text(&c));
                        results.push(serde_json::to_value(&c).expect("certificate"));
                    }
                    Err(e) => {
                        code = code.max(1);
                        text.push(format!("({q}, {n}): error: {e}"));
                        results.push(json!({ "q": q, "n": n, "error": e.to_string() }));
                    }
                }
            }
            Ok(Outcome {
                parameters: params(&[
                    ("q_min", json!(q_min)),
                    ("q_max", json!(q_max)),
                    ("n_min", json!(n_min)),
                    ("n_max", json!(n_max)),
                ]),
                results: Value::Array(results),
                text: text.join("\n"),
                code,
            })
        }
        Command::Search { q, n, mode } => {
            let mode = mode.mode();
            let out = pff::search_pff(*q, *n, mode, &search_config(g, pff::DEFAULT_FIRST_BUDGET))?;
            let base = BaseField::new(*q)?;
            let polys: Vec<String> = out.polynomials.iter().map(|f| format_poly(&base, f)).collect();
            let text = match mode {
                SearchMode::Count => format!("{} PFF polynomials of degree {n} over GF({q})", out.count),
                _ if polys.is_empty() => format!("no PFF polynomial of degree {n} over GF({q})"),
                _ => polys.join("\n"),
            };
            Ok(Outcome {
                parameters: params(&[("q", json!(q)), ("n", json!(n)), ("mode", serde_json::to_value(mode).expect("mode"))]),
                results: json!({ "polynomials": polys, "count": out.count }),
                text,
                code: 0,
            })
        }
        Command::Verify { q, n, poly } => {
            let base = Arc::new(BaseField::new(*q)?);
            let f = parse_poly(&base, poly)?;
            let v = verify_pff_polynomial(base, *n, &f)?;
            let mut text = format!(
                "{}: primitive={} free={} inverse_free={} => {}",
                v.polynomial.as_deref().unwrap_or(poly),
                v.is_primitive,
                v.is_free,
                v.inverse_free,
                if v.is_pff() { "PFF" } else { "not PFF" }
            );
            if let Some(l) = v.primitive_witness {
                text += &format!("\n  root is an {l}-th power");
            }
            if let Some(w) = &v.free_witness {
                text += &format!("\n  root is not ({w})-free");
            }
            if let Some(w) = &v.inverse_free_witness {
                text += &format!("\n  inverse is not ({w})-free");
            }
            Ok(Outcome {
                parameters: params(&[("q", json!(q)), ("n", json!(n)), ("poly", json!(poly))]),
                code: if v.is_pff() { 0 } else { EXIT_NOT_PFF },
                results: serde_json::to_value(&v).expect("verdict"),
                text,
            })
        }
        Command::VerifyPaper { section } => {
            let mut sections = if section.is_empty() {
                vec![Section::Tables, Section::Bounds, Section::Exceptions, Section::Charsum]
            } else {
                section.clone()
            };
            sections.sort();
            sections.dedup();
            let checks = golden::run(&sections, &search_config(g, GOLDEN_FIRST_BUDGET), g.seed);
            let failed = checks.iter().filter(|c| !c.pass).count();
            let mut text: Vec<String> = checks
                .iter()
                .map(|c| {
                    let tag = if c.pass { "PASS" } else { "FAIL" };
                    format!("{tag} [{}] {}: {}", serde_json::to_value(c.section).expect("section").as_str().unwrap_or(""), c.name, c.detail)
                })
                .collect();
            text.push(format!("{} checks, {} passed, {failed} failed", checks.len(), checks.len() - failed));
            Ok(Outcome {
                parameters: params(&[("sections", serde_json::to_value(&sections).expect("sections"))]),
                results: json!({ "checks": checks, "passed": checks.len() - failed, "failed": failed }),
                text: text.join("\n"),
                code: u8::from(failed > 0),
            })
        }
        Command::Charsum { q, n, m, g: gpoly, h } => {
            let ctx = PffContext::for_pair(*q, *n)?;
            let budget = g.budget.unwrap_or(pff_core::charsum::DEFAULT_CHARSUM_BUDGET);
            let table = ElementTable::build(&ctx, budget)?;
            let tb = CharacterTable::build(ctx, budget)?;
            let ctx = tb.ctx();
            let base = ctx.tower().base();
            let m = m.unwrap_or(tb.group_order());
            let parse = |s: &Option<String>| match s {
                Some(s) => parse_poly(base, s),
                None => Ok(ctx.freeness().xn_minus_1().clone()),
            };
            let (gp, hp) = (parse(gpoly)?, parse(h)?);
            let grouped = ComplexVal::from(tb.n_formula(m, &gp, &hp)?);
            let expanded = ComplexVal::from(tb.n_formula_expanded(m, &gp, &hp)?);
            let brute = table.brute_n(ctx, m, &gp, &hp)?;
            let agree = grouped.nearest_integer() == brute as i128 && expanded.nearest_integer() == brute as i128;
            // keep "-0.000000" out of the text for round-off residue
            let snap = |x: f64| if x.abs() < 5e-7 { 0.0 } else { x };
            let text = format!(
                "N({m}, {}, {}) over GF({q}^{n}): characters {:.6}{:+.2e}i, expanded {:.6}{:+.2e}i, count {brute}",
                format_poly(base, &gp),
                format_poly(base, &hp),
                snap(grouped.re),
                grouped.im,
                snap(expanded.re),
                expanded.im
            );
            Ok(Outcome {
                parameters: params(&[
                    ("q", json!(q)),
                    ("n", json!(n)),
                    ("m", json!(m.to_string())),
                    ("g", json!(format_poly(base, &gp))),
                    ("h", json!(format_poly(base, &hp))),
                ]),
                results: json!({
                    "formula": { "re": grouped.re, "im": grouped.im },
                    "expanded": { "re": expanded.re, "im": expanded.im },
                    "count": brute.to_string(),
                    "agree": agree,
                }),
                text,
                code: u8::from(!agree),
            })
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Certify { .. } => "certify",
        Command::CertifyRange { .. } => "certify-range",
        Command::Search { .. } => "search",
        Command::Verify { .. } => "verify",
        Command::VerifyPaper { .. } => "verify-paper",
        Command::Charsum { .. } => "charsum",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(error_code(&e));
        }
    };
    let first_default = match cli.command {
        Command::VerifyPaper { .. } => GOLDEN_FIRST_BUDGET,
        _ => pff::DEFAULT_FIRST_BUDGET,
    };
    let report = RunReport {
        command: command_name(&cli.command).to_string(),
        parameters: outcome.parameters,
        results: outcome.results,
        timing_ms: cli.global.timing.then(|| started.elapsed().as_millis() as u64),
        budgets: Budgets::from(&search_config(&cli.global, first_default)),
        seed: cli.global.seed,
    };
    let json = report.to_json();
    if let Some(path) = &cli.global.out {
        if let Err(e) = std::fs::write(path, format!("{json}\n")) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    let body = if cli.global.json { json } else { outcome.text };
    // a closed pipe (e.g. `| head`) is not an error worth a panic
    let _ = writeln!(std::io::stdout().lock(), "{body}");
    ExitCode::from(outcome.code)
}
