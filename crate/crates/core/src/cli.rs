//! Command line front end. Exit codes: 0 success, 1 a check came out
//! negative, 2 bad usage or unreadable input.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::decompose::{greedy_decompose, DecomposeError};
use crate::diagram::{
    codimension, hk_residuals, normalize, pure_diagram, window_of, BettiDiagram, DegreeSequence,
    Rational,
};
use crate::functionals::{
    ambient_window, boundary_facets, boundary_inequalities, expand_in_chain, membership_by_inequalities, verify_fan_convexity, verify_fan_convexity_parallel,
    FunctionalError, Membership, DEFAULT_CONVEXITY_LIMIT,
};
use crate::hilbert::{expand_series, hilbert_series, multiplicity, multiplicity_bounds};
use crate::io::{
    chain_json, decomposition_json, emit_diagram, emit_report, emit_table, facet_json,
    inequality_json, parse_diagram, parse_diagram_auto, parse_tableau, DiagramDocument, Format,
};
use crate::poset::{chain_from_tableau, count_maximal_chains, maximal_chains, tableau_from_chain, Window};

#[derive(Parser, Debug)]
#[command(name = "bs-decomp", version, about = "Decompose Betti diagrams into pure diagrams")]
struct Cli {
    /// Output format; json when stdout is a pipe, table on a terminal.
    #[arg(long, global = true)]
    format: Option<Format>,
    /// Worker threads for parallel checks.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct WindowArgs {
    #[arg(long)]
    n: usize,
    #[arg(long = "M", allow_negative_numbers = true)]
    low: i64,
    #[arg(long = "N", allow_negative_numbers = true)]
    high: i64,
    #[arg(long = "s", default_value_t = 0)]
    min_codim: usize,
}

impl WindowArgs {
    fn window(&self) -> Result<Window, Failure> {
        Window::new(self.n, self.low, self.high, self.min_codim).map_err(|e| Failure::usage(e.to_string()))
    }
}

#[derive(Args, Debug)]
struct DiagramInput {
    /// Diagram file, `-` or absent for stdin.
    diagram: Option<PathBuf>,
    /// Input format; guessed from the contents when absent.
    #[arg(long)]
    input_format: Option<Format>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the pure diagram of a degree sequence.
    Pure {
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        degrees: Vec<i64>,
        #[arg(long)]
        n: Option<usize>,
        /// Scale so that the entry at (0, 0) is 1.
        #[arg(long)]
        normalized: bool,
    },
    /// Greedy decomposition into pure diagrams.
    Decompose {
        #[command(flatten)]
        input: DiagramInput,
    },
    /// Coordinates of a diagram in the basis of a maximal chain.
    Expand {
        #[command(flatten)]
        input: DiagramInput,
        #[arg(long)]
        tableau: PathBuf,
        /// Bottom row of the window, when the tableau file does not set it.
        #[arg(long = "M", allow_negative_numbers = true)]
        low: Option<i64>,
        #[arg(long = "s")]
        min_codim: Option<usize>,
    },
    /// Enumerate or count maximal chains of a window.
    Chains {
        #[command(flatten)]
        window: WindowArgs,
        #[arg(long)]
        count_only: bool,
    },
    /// Boundary facets with kinds and functionals.
    Facets {
        #[command(flatten)]
        window: WindowArgs,
        /// List every boundary facet of every maximal cone instead of the
        /// distinct inequalities.
        #[arg(long)]
        all: bool,
    },
    /// Check every boundary inequality against every pure diagram.
    VerifyFan {
        #[command(flatten)]
        window: WindowArgs,
        #[arg(long, default_value_t = DEFAULT_CONVEXITY_LIMIT)]
        limit: u128,
    },
    /// Hilbert series coefficients.
    Hilbert {
        #[command(flatten)]
        input: DiagramInput,
        #[arg(long)]
        truncate: Option<usize>,
    },
    /// Shift bounds on the Hilbert series and multiplicity.
    Bounds {
        #[command(flatten)]
        input: DiagramInput,
        #[arg(long)]
        truncate: Option<usize>,
    },
    /// Herzog-Kuhl residuals.
    CheckHk {
        #[command(flatten)]
        input: DiagramInput,
        #[arg(long = "s")]
        s: Option<usize>,
    },
    /// Cone membership with a violated inequality as certificate.
    Membership {
        #[command(flatten)]
        input: DiagramInput,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<FunctionalError> for Failure {
    fn from(e: FunctionalError) -> Self {
        Failure::usage(e.to_string())
    }
}

/// Result of a subcommand: rendered text and exit code.
struct Output {
    text: String,
    code: i32,
}

impl Output {
    fn ok(text: String) -> Self {
        Self { text, code: 0 }
    }

    fn with_code(text: String, negative: bool) -> Self {
        Self {
            text,
            code: i32::from(negative),
        }
    }
}

/// Runs the command line with explicit streams. `tty` selects the default
/// output format.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write, tty: bool) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(rendered.as_bytes())
            } else {
                stderr.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let format = cli.format.unwrap_or(if tty { Format::Table } else { Format::Json });
    match dispatch(&cli, format, stdin) {
        Ok(out) => {
            let _ = stdout.write_all(out.text.as_bytes());
            out.code
        }
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn read_diagram(input: &DiagramInput, stdin: &mut dyn Read) -> Result<BettiDiagram, Failure> {
    let text = match &input.diagram {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p)
            .map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?,
        _ => {
            let mut s = String::new();
            stdin
                .read_to_string(&mut s)
                .map_err(|e| Failure::usage(format!("stdin: {e}")))?;
            s
        }
    };
    let parsed = match input.input_format {
        Some(f) => parse_diagram(&text, f),
        None => parse_diagram_auto(&text),
    };
    parsed.map_err(|e| Failure::usage(e.to_string()))
}

fn rationals(v: &[Rational]) -> Value {
    json!(v.iter().map(|x| x.to_string()).collect::<Vec<_>>())
}

fn default_truncation(b: &BettiDiagram) -> usize {
    let high = window_of(b).map(|(_, hi)| hi).unwrap_or(0);
    usize::try_from(high + b.n() as i64 + 10).unwrap_or(10)
}

fn grid_text(grid: &[Vec<Value>]) -> String {
    let cells: Vec<Vec<String>> = grid
        .iter()
        .map(|row| row.iter().map(|v| v.to_string().trim_matches('"').to_string()).collect())
        .collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    let mut out = String::new();
    for row in cells {
        out.push(' ');
        for c in row {
            let _ = write!(out, " {c:>width$}");
        }
        out.push('\n');
    }
    out
}

fn dispatch(cli: &Cli, format: Format, stdin: &mut dyn Read) -> Result<Output, Failure> {
    match &cli.command {
        Command::Pure { degrees, n, normalized } => {
            let d = DegreeSequence::new(degrees.clone()).map_err(|e| Failure::usage(e.to_string()))?;
            let n = n.unwrap_or(d.codim());
            let p = pure_diagram(&d, n).map_err(|e| Failure::usage(e.to_string()))?;
            let b = if *normalized {
                normalize(&p).map_err(|e| Failure::usage(e.to_string()))?.diagram().clone()
            } else {
                p.into_diagram()
            };
            Ok(Output::ok(emit_diagram(&b, format)))
        }

        Command::Decompose { input } => {
            let b = read_diagram(input, stdin)?;
            match greedy_decompose(&b) {
                Ok(dec) => {
                    let text = match format {
                        Format::Json => emit_report(&decomposition_json(&dec)),
                        Format::Table => dec
                            .terms()
                            .iter()
                            .map(|(c, p)| format!("{c} * pi{}\n", p.degrees()))
                            .collect(),
                    };
                    Ok(Output::ok(text))
                }
                Err(DecomposeError::InvalidDiagram(m)) => Err(Failure::usage(m)),
                Err(DecomposeError::NotInCone { reason, partial, residual }) => {
                    let certificate = ambient_window(&b)
                        .ok()
                        .and_then(|w| membership_by_inequalities(&b, &w).ok().map(|m| (w, m)));
                    let cert = match &certificate {
                        Some((_, Membership::NonMember { certificate, value })) => {
                            let mut v = inequality_json(certificate);
                            v["value"] = json!(value.to_string());
                            v
                        }
                        _ => {
                            let s = codimension(&b).map(|s| s.min(b.n())).unwrap_or(b.n());
                            json!({ "herzog_kuhl_residuals": rationals(&hk_residuals(&b, s)) })
                        }
                    };
                    let text = match format {
                        Format::Json => emit_report(&json!({
                            "error": "not_in_cone",
                            "reason": reason,
                            "partial": decomposition_json(&partial),
                            "residual": serde_json::to_value(DiagramDocument::from_diagram(&residual)).expect("serializable"),
                            "certificate": cert,
                        })),
                        Format::Table => {
                            let mut t = format!("not in the cone: {reason:?}\npartial:\n");
                            for (c, p) in partial.terms() {
                                let _ = writeln!(t, "  {c} * pi{}", p.degrees());
                            }
                            let _ = write!(t, "residual:\n{}certificate: {cert}\n", emit_table(&residual));
                            t
                        }
                    };
                    Ok(Output::with_code(text, true))
                }
            }
        }

        Command::Expand { input, tableau, low, min_codim } => {
            let b = read_diagram(input, stdin)?;
            let text = std::fs::read_to_string(tableau)
                .map_err(|e| Failure::usage(format!("{}: {e}", tableau.display())))?;
            let doc = parse_tableau(&text).map_err(|e| Failure::usage(e.to_string()))?;
            let low = low.or(doc.low).unwrap_or_else(|| window_of(&b).map(|(lo, _)| lo).unwrap_or(0));
            let s = min_codim.or(doc.min_codim).unwrap_or(0);
            let n = doc.tableau.width() - 1;
            let high = low + doc.tableau.height() as i64 - 1;
            let w = Window::new(n, low, high, s).map_err(|e| Failure::usage(e.to_string()))?;
            let chain = chain_from_tableau(&doc.tableau, &w).map_err(|e| Failure::usage(e.to_string()))?;
            match expand_in_chain(&b, &chain) {
                Ok(coords) => {
                    let text = match format {
                        Format::Json => emit_report(&json!({
                            "window": w,
                            "chain": chain_json(&chain),
                            "coordinates": rationals(&coords),
                        })),
                        Format::Table => chain
                            .elements()
                            .iter()
                            .zip(&coords)
                            .map(|(d, c)| format!("{d} {c}\n"))
                            .collect(),
                    };
                    Ok(Output::ok(text))
                }
                Err(FunctionalError::NotInSubspace(res)) => {
                    let text = match format {
                        Format::Json => emit_report(&json!({ "error": "not_in_subspace", "residuals": res })),
                        Format::Table => format!("diagram violates the Herzog-Kuhl equations: {res:?}\n"),
                    };
                    Ok(Output::with_code(text, true))
                }
                Err(e) => Err(e.into()),
            }
        }

        Command::Chains { window, count_only } => {
            let w = window.window()?;
            if *count_only {
                let n = count_maximal_chains(&w);
                return Ok(Output::ok(match format {
                    Format::Json => emit_report(&u64::try_from(n).map_or_else(|_| json!(n.to_string()), Value::from)),
                    Format::Table => format!("{n}\n"),
                }));
            }
            let chains = maximal_chains(&w).map_err(|e| Failure::usage(e.to_string()))?;
            let mut items = Vec::new();
            let mut table = String::new();
            for chain in chains {
                let t = tableau_from_chain(&chain).expect("enumerated chains are maximal");
                match format {
                    Format::Json => items.push(json!({ "tableau": t, "chain": chain_json(&chain) })),
                    Format::Table => {
                        let elements: Vec<String> = chain.elements().iter().map(|d| d.to_string()).collect();
                        let _ = write!(table, "{t}{}\n\n", elements.join(" < "));
                    }
                }
            }
            Ok(Output::ok(match format {
                Format::Json => emit_report(&items),
                Format::Table => table,
            }))
        }

        Command::Facets { window, all } => {
            let w = window.window()?;
            let entries: Vec<Value> = if *all {
                boundary_facets(&w)?.iter().map(facet_json).collect()
            } else {
                boundary_inequalities(&w).iter().map(inequality_json).collect()
            };
            Ok(Output::ok(match format {
                Format::Json => emit_report(&entries),
                Format::Table => {
                    let mut t = String::new();
                    for e in &entries {
                        let grid: Vec<Vec<Value>> = serde_json::from_value(e["grid"].clone()).expect("grid");
                        let _ = writeln!(
                            t,
                            "{} : {} < {} < {} ({})",
                            e["kind"].as_str().unwrap_or(""),
                            e["lower"],
                            e["removed"],
                            e["upper"],
                            e["case"].as_str().unwrap_or("")
                        );
                        t.push_str(&grid_text(&grid));
                    }
                    t
                }
            }))
        }

        Command::VerifyFan { window, limit } => {
            let w = window.window()?;
            let report = if cli.jobs > 1 {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(cli.jobs)
                    .build()
                    .map_err(|e| Failure::usage(e.to_string()))?;
                pool.install(|| verify_fan_convexity_parallel(&w, *limit))?
            } else {
                verify_fan_convexity(&w, *limit)?
            };
            let text = match format {
                Format::Json => emit_report(&report),
                Format::Table => {
                    let mut t = format!(
                        "window {w}: {} inequalities, {} pure diagrams: {}\n",
                        report.facets,
                        report.diagrams,
                        if report.pass { "pass" } else { "FAIL" }
                    );
                    if let Some(c) = &report.counterexample {
                        let _ = writeln!(
                            t,
                            "{:?} inequality at {} < {} < {} is {} on pi{}",
                            c.kind, c.lower, c.removed, c.upper, c.value, c.diagram
                        );
                    }
                    t
                }
            };
            Ok(Output::with_code(text, !report.pass))
        }

        Command::Hilbert { input, truncate } => {
            let b = read_diagram(input, stdin)?;
            let degree = truncate.unwrap_or_else(|| default_truncation(&b));
            let h = hilbert_series(&b);
            let coeffs = expand_series(&h, degree);
            let e = multiplicity(&b).ok();
            let text = match format {
                Format::Json => {
                    let reduced = h.reduced();
                    let terms = |p: &crate::poly::LaurentPolynomial| -> Value {
                        json!(p.terms().map(|(k, c)| json!([k, c.to_string()])).collect::<Vec<_>>())
                    };
                    emit_report(&json!({
                        "numerator": terms(h.numerator()),
                        "denominator_exponent": h.n(),
                        "reduced_numerator": terms(reduced.numerator()),
                        "reduced_denominator_exponent": reduced.n(),
                        "multiplicity": e.map(|v| v.to_string()),
                        "truncation": degree,
                        "coefficients": rationals(&coeffs),
                    }))
                }
                Format::Table => {
                    let list: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
                    format!("H(t) = ({}) / (1-t)^{}\n{}\n", h.numerator(), h.n(), list.join(", "))
                }
            };
            Ok(Output::ok(text))
        }

        Command::Bounds { input, truncate } => {
            let b = read_diagram(input, stdin)?;
            let degree = truncate.unwrap_or_else(|| default_truncation(&b));
            let report = multiplicity_bounds(&b, degree).map_err(|e| Failure::usage(e.to_string()))?;
            let negative = report.not_applicable.is_none() && !report.pass();
            let text = match format {
                Format::Json => emit_report(&report),
                Format::Table => {
                    let mut t = format!(
                        "minimal shifts {:?}, maximal shifts {:?}\n",
                        report.shifts.minimal, report.shifts.maximal
                    );
                    if let Some(why) = &report.not_applicable {
                        let _ = writeln!(t, "not applicable: {why}");
                    }
                    if let Some(v) = &report.lower_series {
                        let _ = writeln!(t, "lower series bound: {}", if v.holds { "holds" } else { "VIOLATED" });
                    }
                    if let Some(v) = &report.upper_series {
                        let _ = writeln!(t, "upper series bound: {}", if v.holds { "holds" } else { "VIOLATED" });
                    }
                    if let Some(m) = &report.multiplicity {
                        let rel = if m.equal { "=" } else if m.holds { "<" } else { ">" };
                        let _ = writeln!(t, "e = {} {rel} {}", m.multiplicity, m.bound);
                    }
                    t
                }
            };
            Ok(Output::with_code(text, negative))
        }

        Command::CheckHk { input, s } => {
            let b = read_diagram(input, stdin)?;
            let s = s.unwrap_or(b.n());
            let res = hk_residuals(&b, s);
            let satisfied = res.iter().all(|r| num_traits::Zero::is_zero(r));
            let text = match format {
                Format::Json => emit_report(&json!({ "s": s, "residuals": rationals(&res), "satisfied": satisfied })),
                Format::Table => {
                    let list: Vec<String> = res.iter().map(|r| r.to_string()).collect();
                    format!("[{}]\n", list.join(", "))
                }
            };
            Ok(Output::with_code(text, !satisfied))
        }

        Command::Membership { input } => {
            let b = read_diagram(input, stdin)?;
            if b.is_zero() {
                return Ok(Output::ok(match format {
                    Format::Json => emit_report(&json!({ "member": true })),
                    Format::Table => "member\n".to_string(),
                }));
            }
            let w = ambient_window(&b)?;
            match membership_by_inequalities(&b, &w) {
                Ok(Membership::Member) => Ok(Output::ok(match format {
                    Format::Json => emit_report(&json!({ "member": true, "window": w })),
                    Format::Table => format!("member of the cone over {w}\n"),
                })),
                Ok(Membership::NonMember { certificate, value }) => {
                    let mut cert = inequality_json(&certificate);
                    cert["value"] = json!(value.to_string());
                    let text = match format {
                        Format::Json => emit_report(&json!({ "member": false, "window": w, "certificate": cert })),
                        Format::Table => format!(
                            "not a member: {:?} inequality at {} < {} < {} takes value {value}\n{}",
                            certificate.kind,
                            certificate.lower,
                            certificate.removed,
                            certificate.upper,
                            grid_text(&serde_json::from_value::<Vec<Vec<Value>>>(cert["grid"].clone()).expect("grid"))
                        ),
                    };
                    Ok(Output::with_code(text, true))
                }
                Err(FunctionalError::NotInSubspace(res)) => {
                    let text = match format {
                        Format::Json => emit_report(&json!({
                            "member": false,
                            "window": w,
                            "certificate": { "herzog_kuhl_residuals": res },
                        })),
                        Format::Table => format!("not a member: Herzog-Kuhl residuals {res:?}\n"),
                    };
                    Ok(Output::with_code(text, true))
                }
                Err(e) => Err(e.into()),
            }
        }
    }
}
