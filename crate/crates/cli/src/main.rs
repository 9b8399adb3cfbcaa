//! Command-line driver for the exact verification suites and the small
//! symbolic calculators that back them.
//!
//! Exit codes: `0` success, `1` gating check failures (or an internal
//! error), `2` argument or parse errors, `3` exhausted step budget.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use threepoint_core::algebra::{bracket_gauge, parse_basis_label, FormConfig};
use threepoint_core::fock::{HeisenbergParams, OrderingMode};
use threepoint_core::formal_dist::{mode_bracket, relation_library, WeightRegistry};
use threepoint_core::kahler::{d3_character, d3_character_by_class, mu, reduce};
use threepoint_core::parallel::Parallelism;
use threepoint_core::ring_r::RElem;
use threepoint_core::scalar::{int, parse_scalar, render_scalar, Scalar};
use threepoint_core::verify::{run_verify, SuiteConfig, SuiteName};

#[derive(Parser)]
#[command(
    name = "threepoint",
    version,
    about = "Exact verification of a three-point current algebra and its free-field realization"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the verification suites and report every check.
    Verify(VerifyArgs),
    /// Reduce the differential form `F d(G)` to its class.
    Reduce {
        /// Ring element, e.g. `t^2` or `3/2*t^-1*u - 2`.
        #[arg(allow_hyphen_values = true)]
        f: String,
        /// Ring element whose differential is taken.
        #[arg(allow_hyphen_values = true)]
        g: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the cocycle coefficient table `mu(k, l)` on `[-K, K]^2`.
    MuTable {
        /// Half-width of the exponent grid.
        k: i64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bracket two basis elements of the full algebra.
    Bracket {
        /// Left element, e.g. `e@t^2`, `f'@t^-1`, `d@3`, `dbar1@-2`, `w0`.
        a: String,
        /// Right element.
        b: String,
        /// Invariant-form scale (default 1).
        #[arg(long, default_value = "1")]
        form_scale: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the automorphism-group character on the form space.
    Char {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Expand one library relation at a mode pair.
    Relation {
        /// Relation name, e.g. `currentalgebra2` or `ddzw`.
        name: String,
        #[arg(allow_negative_numbers = true)]
        m: i64,
        #[arg(allow_negative_numbers = true)]
        n: i64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Normal-ordering convention to exercise (0 or 1; default both).
    #[arg(long)]
    r: Option<u8>,
    /// Heisenberg level (must be nonzero).
    #[arg(long, default_value = "1")]
    kappa0: String,
    /// Zero-mode scalar of the first Heisenberg field.
    #[arg(long, default_value = "0")]
    b0: String,
    /// Zero-mode matrix of the second Heisenberg field: diag,upper,lower.
    #[arg(long, default_value = "0,0,0")]
    b1: String,
    /// Image of the second central class on the module.
    #[arg(long, default_value = "0")]
    chi1: String,
    /// Half-width of the mode window.
    #[arg(long, default_value_t = 4)]
    modes: i64,
    /// Maximal degree of monomial test vectors in the Heisenberg suite.
    #[arg(long, default_value_t = 3)]
    degree: u32,
    /// Number of seeded random test vectors.
    #[arg(long, default_value_t = 8)]
    vectors: usize,
    /// Seed for the random test vectors.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Comma-separated suite names (default: all).
    #[arg(long)]
    suite: Option<String>,
    /// Invariant-form scale; omitted means calibrate from a probe.
    #[arg(long)]
    form_scale: Option<String>,
    /// Process checks on the calling thread instead of the thread pool.
    #[arg(long)]
    sequential: bool,
    /// Write the report here instead of stdout (a summary still prints).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

fn parse_exit(what: &str, err: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {}: {}", what, err);
    ExitCode::from(2)
}

fn scalar_arg(name: &str, s: &str) -> Result<Scalar, ExitCode> {
    parse_scalar(s).map_err(|e| parse_exit(&format!("--{}", name), e))
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), ExitCode> {
    match out {
        None => {
            println!("{}", text.trim_end());
            Ok(())
        }
        Some(path) => std::fs::write(path, text).map_err(|e| {
            eprintln!("error: writing {}: {}", path.display(), e);
            ExitCode::from(1)
        }),
    }
}

/// Renders a list of weighted targets as a signed sum, `0` when empty.
fn render_combo(parts: &[(String, Scalar)]) -> String {
    use num::Signed;
    if parts.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (name, c)) in parts.iter().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        if mag == int(1) {
            out.push_str(name);
        } else {
            out.push_str(&format!("{}*{}", render_scalar(&mag), name));
        }
    }
    out
}

fn cmd_verify(args: &VerifyArgs) -> Result<ExitCode, ExitCode> {
    let kappa0 = scalar_arg("kappa0", &args.kappa0)?;
    if kappa0 == int(0) {
        return Err(parse_exit("--kappa0", "must be nonzero"));
    }
    let b0 = scalar_arg("b0", &args.b0)?;
    let chi1 = scalar_arg("chi1", &args.chi1)?;
    let b1_parts: Vec<&str> = args.b1.split(',').collect();
    if b1_parts.len() != 3 {
        return Err(parse_exit(
            "--b1",
            "expected three comma-separated rationals",
        ));
    }
    let b1_diag = scalar_arg("b1", b1_parts[0])?;
    let b1_01 = scalar_arg("b1", b1_parts[1])?;
    let b1_10 = scalar_arg("b1", b1_parts[2])?;
    let orderings = match args.r {
        None => vec![OrderingMode::R0, OrderingMode::R1],
        Some(tag) => match OrderingMode::from_tag(tag) {
            Some(r) => vec![r],
            None => return Err(parse_exit("--r", "must be 0 or 1")),
        },
    };
    let suites = match &args.suite {
        None => SuiteName::all().to_vec(),
        Some(list) => {
            let mut suites = Vec::new();
            for part in list.split(',') {
                let name = SuiteName::from_str(part).map_err(|e| parse_exit("--suite", e))?;
                if !suites.contains(&name) {
                    suites.push(name);
                }
            }
            suites
        }
    };
    let form_scale = match &args.form_scale {
        None => None,
        Some(s) => Some(scalar_arg("form-scale", s)?),
    };
    let cfg = SuiteConfig {
        modes: args.modes,
        heis_degree: args.degree,
        vectors: args.vectors,
        seed: args.seed,
        suites,
        orderings,
        heis: HeisenbergParams {
            b0,
            b1_diag,
            b1_01,
            b1_10,
            kappa0,
            chi1,
        },
        form_scale,
        parallelism: if args.sequential {
            Parallelism::Sequential
        } else {
            Parallelism::Rayon
        },
        ..SuiteConfig::default()
    };
    let report = match run_verify(&cfg) {
        Ok(report) => report,
        Err(e) if e.is_budget() => {
            eprintln!("error: {}", e);
            return Ok(ExitCode::from(3));
        }
        Err(e) => {
            eprintln!("error: {}", e);
            return Ok(ExitCode::from(1));
        }
    };
    let rendered = match args.format {
        Format::Text => report.render_text(),
        Format::Json => report.to_json(),
    };
    emit(&rendered, &args.out)?;
    if args.out.is_some() {
        println!("{}", report.summary());
    }
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn run() -> Result<ExitCode, ExitCode> {
    let cli = Cli::parse();
    match &cli.cmd {
        Cmd::Verify(args) => cmd_verify(args),
        Cmd::Reduce { f, g, format, out } => {
            let f: RElem = f.parse().map_err(|e| parse_exit("F", e))?;
            let g: RElem = g.parse().map_err(|e| parse_exit("G", e))?;
            let class = reduce(&f, &g);
            let text = match format {
                Format::Text => format!("{}\n", class),
                Format::Json => {
                    let v = serde_json::json!({
                        "class": format!("{}", class),
                        "c0": render_scalar(&class.c0),
                        "c1": render_scalar(&class.c1),
                    });
                    format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
                }
            };
            emit(&text, out)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::MuTable { k, format, out } => {
            let range = *k;
            let text = match format {
                Format::Json => {
                    let rows: Vec<serde_json::Value> = (-range..=range)
                        .flat_map(|k| {
                            (-range..=range).map(move |l| {
                                let v = mu(k, l);
                                serde_json::json!({
                                    "k": k,
                                    "l": l,
                                    "num": v.numer().to_string(),
                                    "den": v.denom().to_string(),
                                })
                            })
                        })
                        .collect();
                    format!("{}\n", serde_json::to_string_pretty(&rows).expect("json"))
                }
                Format::Text => {
                    let mut s = String::new();
                    for k in -range..=range {
                        for l in -range..=range {
                            s.push_str(&format!(
                                "mu({}, {}) = {}\n",
                                k,
                                l,
                                render_scalar(&mu(k, l))
                            ));
                        }
                    }
                    s
                }
            };
            emit(&text, out)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Bracket {
            a,
            b,
            form_scale,
            format,
            out,
        } => {
            let a = parse_basis_label(a).map_err(|e| parse_exit("A", e))?;
            let b = parse_basis_label(b).map_err(|e| parse_exit("B", e))?;
            let scale = scalar_arg("form-scale", form_scale)?;
            let result = bracket_gauge(&a, &b, &FormConfig::with_scale(scale));
            let text = match format {
                Format::Text => format!("{}\n", result),
                Format::Json => {
                    let v = serde_json::json!({ "display": format!("{}", result) });
                    format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
                }
            };
            emit(&text, out)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Char { format, out } => {
            let by_class = d3_character_by_class();
            let text = match format {
                Format::Text => {
                    let mut s = String::new();
                    for (label, chi) in d3_character() {
                        s.push_str(&format!("{}: {}\n", label.name(), render_scalar(&chi)));
                    }
                    s.push_str("classes: ");
                    let parts: Vec<String> = by_class
                        .iter()
                        .map(|(c, v)| format!("{} = {}", c, render_scalar(v)))
                        .collect();
                    s.push_str(&parts.join(", "));
                    s.push('\n');
                    s
                }
                Format::Json => {
                    let mut obj = serde_json::Map::new();
                    for (label, chi) in d3_character() {
                        obj.insert(
                            label.name().to_string(),
                            serde_json::Value::String(render_scalar(&chi)),
                        );
                    }
                    format!(
                        "{}\n",
                        serde_json::to_string_pretty(&serde_json::Value::Object(obj))
                            .expect("json")
                    )
                }
            };
            emit(&text, out)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Relation {
            name,
            m,
            n,
            format,
            out,
        } => {
            let lib = relation_library();
            let rel = lib.get(name.as_str()).ok_or_else(|| {
                let names: Vec<&str> = lib.keys().copied().collect();
                parse_exit(
                    "NAME",
                    format!("unknown relation `{}`; known: {}", name, names.join(", ")),
                )
            })?;
            let combo = mode_bracket(rel, *m, *n, &WeightRegistry::default())
                .map_err(|e| parse_exit("relation", e))?;
            let parts: Vec<(String, Scalar)> = combo
                .iter()
                .map(|(t, c)| (format!("{}", t), c.clone()))
                .collect();
            let text = match format {
                Format::Text => format!("{}\n", render_combo(&parts)),
                Format::Json => {
                    let rows: Vec<serde_json::Value> = parts
                        .iter()
                        .map(|(t, c)| serde_json::json!({ "target": t, "coef": render_scalar(c) }))
                        .collect();
                    format!("{}\n", serde_json::to_string_pretty(&rows).expect("json"))
                }
            };
            emit(&text, out)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(code) => code,
    }
}
