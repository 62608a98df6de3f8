//! The `weave` command line: parse, build matrices, reduce, compare.
//!
//! Exit codes: 0 success, 1 violation or a negative comparison, 2 usage or
//! input error, 3 undetermined (search cap exhausted).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use weave_core::diagram::{fixture_sigma, fixture_tau, gen_alpha, gen_beta, parse_multistring, random_multistring};
use weave_core::fuzz::fuzz_invariance;
use weave_core::homology::{
    classify, intersection_orbit, orbit_size, reduce_to_primitive, ExtensionKind, DEFAULT_CAP,
};
use weave_core::iso::{distinguish, homologous_primitive_equiv, homologous_primitive_equiv_by_search, woven_iso};
use weave_core::pairing::multistring_based_matrix;
use weave_core::{
    Equivalence, InvariantReport, MatrixError, MoveCertificate, Multistring, ReduceOptions, Search, Verdict,
    WovenBasedMatrix, WovenIsomorphism,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNDETERMINED: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "weave", version, about = "Woven based matrices of virtual multistrings")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// State limit for breadth-first orbit search.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP as u64, value_parser = clap::value_parser!(u64).range(1..))]
    cap: u64,
    /// Seed for `gen random` and `fuzz`.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Orbit search used by reduction and equivalence.
    #[arg(long, global = true, value_enum, default_value_t = SearchMode::Exact)]
    search: SearchMode,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SearchMode {
    /// Orbit coordinates; never truncates.
    Exact,
    /// Literal breadth-first enumeration bounded by `--cap`.
    Bfs,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the woven based matrix of a diagram (`-` reads stdin).
    Matrix { file: String },
    /// List distinguished elements and applicable intersection moves.
    Classify { file: String },
    /// Reduce to a primitive matrix and print the certificate.
    Reduce {
        file: String,
        /// Inverse-extension priority, e.g. `m1,m2,m3,m4`.
        #[arg(long, value_delimiter = ',', value_parser = parse_kind)]
        priority: Option<Vec<ExtensionKind>>,
    },
    /// Enumerate the intersection orbit up to `--cap` states.
    Orbit { file: String },
    /// Invariants of the primitive matrix.
    Invariants { file: String },
    /// Decide isomorphism of the two woven based matrices.
    Iso { file1: String, file2: String },
    /// Decide equivalence of the two primitive matrices.
    Equiv { file1: String, file2: String },
    /// Compare two diagrams by every implemented invariant.
    Distinguish { file1: String, file2: String },
    /// Print a generated diagram.
    Gen {
        #[command(subcommand)]
        which: Generator,
    },
    /// Apply random homotopy moves and check that nothing changes.
    Fuzz {
        file: String,
        #[arg(long, default_value_t = 10)]
        moves: usize,
    },
    /// Re-apply a certificate (text or JSON) to a diagram's matrix.
    Replay { file: String, certificate: String },
}

#[derive(Subcommand, Debug)]
enum Generator {
    Alpha { p: u32, q: u32 },
    Beta { p1: u32, q1: u32, p2: u32, q2: u32, r: u32, s: u32 },
    Sigma,
    Tau,
    /// `n` circles, `m` arrows, drawn with `--seed`.
    Random { n: usize, m: usize },
}

fn parse_kind(s: &str) -> Result<ExtensionKind, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "m1" => Ok(ExtensionKind::M1),
        "m2" => Ok(ExtensionKind::M2),
        "m3" => Ok(ExtensionKind::M3),
        "m4" => Ok(ExtensionKind::M4),
        other => Err(format!("unknown extension kind `{other}`")),
    }
}

/// An error carrying its exit code.
#[derive(Debug)]
struct Coded(i32, String);

impl std::fmt::Display for Coded {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.1)
    }
}

impl std::error::Error for Coded {}

struct Ctx<'a> {
    cli: &'a Cli,
    stdin: &'a mut dyn Read,
    stdin_used: bool,
}

impl Ctx<'_> {
    fn read(&mut self, path: &str) -> anyhow::Result<String> {
        if path == "-" {
            if std::mem::replace(&mut self.stdin_used, true) {
                bail!("standard input can only be read once");
            }
            let mut s = String::new();
            self.stdin.read_to_string(&mut s).context("reading standard input")?;
            Ok(s)
        } else {
            std::fs::read_to_string(path).with_context(|| format!("reading {path}"))
        }
    }

    fn diagram(&mut self, path: &str) -> anyhow::Result<Multistring> {
        let text = self.read(path)?;
        let name = if path == "-" { "<stdin>" } else { path };
        parse_multistring(&text).with_context(|| name.to_string())
    }

    fn matrix(&mut self, path: &str) -> anyhow::Result<WovenBasedMatrix> {
        let ms = self.diagram(path)?;
        Ok(multistring_based_matrix(&ms)?)
    }

    fn opts(&self, priority: Option<Vec<ExtensionKind>>) -> ReduceOptions {
        let mut o = ReduceOptions::default();
        if let Some(p) = priority {
            o.priority = p;
        }
        if self.cli.search == SearchMode::Bfs {
            o.search = Search::Breadth { cap: self.cli.cap as usize };
        }
        o
    }

    fn json(&self) -> bool {
        self.cli.format == Format::Json
    }
}

fn undetermined(e: MatrixError) -> anyhow::Error {
    match e {
        MatrixError::Undetermined { cap, partial } => anyhow::Error::new(Coded(
            EXIT_UNDETERMINED,
            format!("undetermined: orbit search exceeded {cap} states after {} certified moves", partial.steps.len()),
        )),
        e => e.into(),
    }
}

fn reduce(ctx: &Ctx<'_>, t: &WovenBasedMatrix, opts: &ReduceOptions) -> anyhow::Result<(WovenBasedMatrix, MoveCertificate)> {
    let _ = ctx;
    reduce_to_primitive(t, opts).map_err(undetermined)
}

fn iso_json(iso: &WovenIsomorphism) -> Value {
    serde_json::to_value(iso).expect("witness serializes")
}

fn iso_text(iso: &WovenIsomorphism) -> String {
    let sigma: Vec<String> = iso.sigma.iter().map(|j| (j + 1).to_string()).collect();
    let mut out = format!("sigma: [{}]\nphi:\n", sigma.join(", "));
    for (a, b) in &iso.phi {
        let _ = writeln!(out, "  {a} -> {b}");
    }
    out
}

/// Runs one invocation. Output goes to `stdout`; diagnostics to `stderr`.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    let mut ctx = Ctx { cli: &cli, stdin, stdin_used: false };
    let mut out = String::new();
    let result = dispatch(&mut ctx, &mut out);
    let _ = stdout.write_all(out.as_bytes());
    match result {
        Ok(code) => code,
        Err(e) => {
            let code = e.downcast_ref::<Coded>().map_or(EXIT_USAGE, |c| c.0);
            let _ = writeln!(stderr, "error: {e:#}");
            code
        }
    }
}

fn emit(ctx: &Ctx<'_>, out: &mut String, text: String, doc: Value) {
    if ctx.json() {
        out.push_str(&serde_json::to_string_pretty(&doc).expect("json"));
        out.push('\n');
    } else {
        out.push_str(&text);
    }
}

fn dispatch(ctx: &mut Ctx<'_>, out: &mut String) -> anyhow::Result<i32> {
    let cli = ctx.cli;
    match &cli.command {
        Command::Matrix { file } => {
            let t = ctx.matrix(file)?;
            emit(ctx, out, t.to_table(), t.to_json());
            Ok(EXIT_OK)
        }
        Command::Classify { file } => {
            let t = ctx.matrix(file)?;
            let c = classify(&t);
            let doc = c.to_json(&t);
            let mut text = String::new();
            for key in ["annihilating", "core", "complementary", "sum_annihilating", "g_annihilating", "g_unequal"] {
                let items: Vec<String> = doc[key]
                    .as_array()
                    .expect("array")
                    .iter()
                    .map(|v| match v {
                        Value::String(s) => s.clone(),
                        Value::Array(a) => format!("({})", a.iter().map(|x| x.as_str().unwrap_or("")).collect::<Vec<_>>().join(",")),
                        Value::Object(o) => format!(
                            "{}:({},{})",
                            o["g"].as_str().unwrap_or(""),
                            o["pair"][0].as_str().unwrap_or(""),
                            o["pair"][1].as_str().unwrap_or("")
                        ),
                        _ => String::new(),
                    })
                    .collect();
                let _ = writeln!(text, "{key}:{}", items.iter().map(|i| format!(" {i}")).collect::<String>());
            }
            emit(ctx, out, text, doc);
            Ok(EXIT_OK)
        }
        Command::Reduce { file, priority } => {
            let t = ctx.matrix(file)?;
            let opts = ctx.opts(priority.clone());
            let (p, cert) = reduce(ctx, &t, &opts)?;
            let text = format!("primitive:\n{}certificate:\n{}", p.to_table(), cert.to_text());
            emit(ctx, out, text, json!({ "primitive": p.to_json(), "certificate": cert.to_json() }));
            Ok(EXIT_OK)
        }
        Command::Orbit { file } => {
            let t = ctx.matrix(file)?;
            let orbit = intersection_orbit(&t, cli.cap as usize);
            let exact = orbit_size(&t);
            let text = format!(
                "states: {}\ntruncated: {}\norbit_size: {}\n",
                orbit.states.len(),
                orbit.truncated,
                exact
            );
            let doc = json!({ "states": orbit.states.len(), "truncated": orbit.truncated, "orbit_size": exact.to_string() });
            emit(ctx, out, text, doc);
            Ok(if orbit.truncated { EXIT_UNDETERMINED } else { EXIT_OK })
        }
        Command::Invariants { file } => {
            let t = ctx.matrix(file)?;
            let (p, _) = reduce(ctx, &t, &ctx.opts(None))?;
            let r = InvariantReport::of_primitive(&p)?;
            emit(ctx, out, r.to_text(), serde_json::to_value(&r)?);
            Ok(EXIT_OK)
        }
        Command::Iso { file1, file2 } => {
            let (a, b) = (ctx.matrix(file1)?, ctx.matrix(file2)?);
            match woven_iso(&a, &b) {
                Some(iso) => {
                    emit(ctx, out, format!("isomorphic\n{}", iso_text(&iso)), json!({ "isomorphic": true, "witness": iso_json(&iso) }));
                    Ok(EXIT_OK)
                }
                None => {
                    emit(ctx, out, "not isomorphic\n".into(), json!({ "isomorphic": false }));
                    Ok(EXIT_FAIL)
                }
            }
        }
        Command::Equiv { file1, file2 } => {
            let (a, b) = (ctx.matrix(file1)?, ctx.matrix(file2)?);
            let opts = ctx.opts(None);
            let (p1, _) = reduce(ctx, &a, &opts)?;
            let (p2, _) = reduce(ctx, &b, &opts)?;
            let eq = match opts.search {
                Search::Exact => homologous_primitive_equiv(&p1, &p2)?,
                Search::Breadth { cap } => homologous_primitive_equiv_by_search(&p1, &p2, cap)?,
            };
            let (text, code) = match &eq {
                Equivalence::Equivalent { moves, iso } => {
                    let lines: String = moves.iter().map(|m| format!("  {m}\n")).collect();
                    (format!("equivalent\nmoves:\n{lines}{}", iso_text(iso)), EXIT_OK)
                }
                Equivalence::Inequivalent => ("inequivalent\n".to_string(), EXIT_FAIL),
                Equivalence::Undetermined => ("undetermined\n".to_string(), EXIT_UNDETERMINED),
            };
            emit(ctx, out, text, serde_json::to_value(&eq)?);
            Ok(code)
        }
        Command::Distinguish { file1, file2 } => {
            let (a, b) = (ctx.diagram(file1)?, ctx.diagram(file2)?);
            let d = distinguish(&a, &b, &ctx.opts(None))?;
            let verdict = match d.verdict {
                Verdict::Distinct => "distinct",
                Verdict::NotDistinguished => "not-distinguished",
                Verdict::Undetermined => "undetermined",
            };
            let evidence: String = d.evidence.iter().map(|e| format!("  {e}\n")).collect();
            emit(ctx, out, format!("verdict: {verdict}\nevidence:\n{evidence}"), serde_json::to_value(&d)?);
            Ok(match d.verdict {
                Verdict::Distinct => EXIT_FAIL,
                Verdict::NotDistinguished => EXIT_OK,
                Verdict::Undetermined => EXIT_UNDETERMINED,
            })
        }
        Command::Gen { which } => {
            let ms = match which {
                Generator::Alpha { p, q } => gen_alpha(*p, *q),
                Generator::Beta { p1, q1, p2, q2, r, s } => gen_beta(*p1, *q1, *p2, *q2, *r, *s),
                Generator::Sigma => fixture_sigma(),
                Generator::Tau => fixture_tau(),
                Generator::Random { n, m } => random_multistring(*n, *m, cli.seed)?,
            };
            let text = ms.to_text();
            emit(ctx, out, text.clone(), json!({ "diagram": text }));
            Ok(EXIT_OK)
        }
        Command::Fuzz { file, moves } => {
            let ms = ctx.diagram(file)?;
            let report = fuzz_invariance(&ms, *moves, cli.seed, &ctx.opts(None))?;
            let mut text = String::new();
            for s in &report.steps {
                let _ = writeln!(
                    text,
                    "step {}: {} arrows={} primitive=({},{}) {}",
                    s.step,
                    s.mv,
                    s.arrows,
                    s.primitive_size.0,
                    s.primitive_size.1,
                    if s.ok { "ok" } else { "VIOLATION" }
                );
            }
            for v in &report.violations {
                let _ = writeln!(text, "violation: {v}");
            }
            let status = if !report.violations.is_empty() {
                "failed"
            } else if report.undetermined {
                "undetermined"
            } else {
                "passed"
            };
            let _ = writeln!(text, "{status}");
            emit(ctx, out, text, serde_json::to_value(&report)?);
            Ok(match status {
                "failed" => EXIT_FAIL,
                "undetermined" => EXIT_UNDETERMINED,
                _ => EXIT_OK,
            })
        }
        Command::Replay { file, certificate } => {
            let t = ctx.matrix(file)?;
            let raw = ctx.read(certificate)?;
            let cert = if raw.trim_start().starts_with('{') {
                let v: Value = serde_json::from_str(&raw).with_context(|| certificate.clone())?;
                let v = v.get("certificate").cloned().unwrap_or(v);
                serde_json::from_value::<MoveCertificate>(v).with_context(|| certificate.clone())?
            } else {
                MoveCertificate::from_text(&raw).with_context(|| certificate.clone())?
            };
            match cert.replay(&t) {
                Ok(m) => {
                    emit(ctx, out, m.to_table(), json!({ "result": m.to_json(), "steps": cert.steps.len() }));
                    Ok(EXIT_OK)
                }
                Err(e) => Err(Coded(EXIT_FAIL, format!("replay failed: {e}")).into()),
            }
        }
    }
}
