//! The `bav` command line: generate, verify, classify and round-trip Billiard
//! Arrays, and build the sl₂ / U_q(sl₂) modules they carry.
//!
//! Exit codes: 0 success, 1 a verification or round-trip check failed,
//! 2 a usage or input error.

use std::ffi::OsString;
use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use billiard::billiard::Violation;
use billiard::families;
use billiard::json;
use billiard::random;
use billiard::rep::{self, Flavor};
use billiard::{BilliardArray, EdgeLabelling, Error, FieldContext, Scalar, ValueFunction};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "bav", version, about = "Exact Billiard Array toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Io {
    /// Read the input document from this file instead of stdin.
    #[arg(long = "in", value_name = "PATH")]
    input: Option<PathBuf>,
    /// Write the output document to this file instead of stdout.
    #[arg(long = "out", value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Random Concrete Billiard Array from a seeded random value function.
    Gen {
        #[arg(long)]
        n: usize,
        /// q (rationals), gfP (prime field), fq (rational functions in q)
        #[arg(long, default_value = "q")]
        field: FieldContext,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Keep the standard boundary basis instead of rescaling and changing basis.
        #[arg(long)]
        plain: bool,
        /// Emit the abstract array (one generator per line) instead of vectors.
        #[arg(long)]
        abstract_array: bool,
        #[command(flatten)]
        io: Io,
    },
    /// Check the axioms of an array document.
    Verify {
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[command(flatten)]
        io: Io,
    },
    /// Value function of an array or labelling document.
    Values {
        #[command(flatten)]
        io: Io,
    },
    /// Array (or labelling) with a given value function.
    FromValues {
        /// Emit the edge-labelling instead of the array.
        #[arg(long)]
        labelling: bool,
        #[command(flatten)]
        io: Io,
    },
    /// Flag triple of an array, or with --reverse the array of a flag triple.
    Flags {
        #[arg(long)]
        reverse: bool,
        #[command(flatten)]
        io: Io,
    },
    /// Check the flag and classification round-trips of an array.
    Roundtrip {
        #[command(flatten)]
        io: Io,
    },
    /// Equitable operators of an array; generates one unless --in is given.
    Module {
        #[arg(long, value_enum)]
        flavor: FlavorArg,
        /// Diameter of the generated array (ignored with --in).
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        field: Option<FieldContext>,
        /// The parameter q: `q` for the variable of ℚ(q), otherwise a rational `a/b`.
        #[arg(long)]
        q: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Run every relation, local identity and ν-flag check; exit 1 on failure.
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        io: Io,
    },
    /// The two polynomial families.
    Examples {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        field: Option<FieldContext>,
        /// The parameter q for the q-family (`q` or a rational).
        #[arg(long)]
        q: Option<String>,
        #[arg(long)]
        xbar: Option<String>,
        #[arg(long)]
        ybar: Option<String>,
        #[arg(long)]
        zbar: Option<String>,
        #[command(flatten)]
        io: Io,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FlavorArg {
    Sl2,
    Uq,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FamilyArg {
    Poly,
    Q,
}

/// Failure of a command: `Check` maps to exit code 1, `Usage` to 2.
#[derive(Debug)]
enum Failure {
    Check(Value),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = std::result::Result<Value, Failure>;

/// Runs the command line; everything meant for stdout goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{}", e) } else { write!(out, "{}", e) };
            return code;
        }
    };
    let io = match &cli.command {
        Command::Gen { io, .. }
        | Command::Verify { io, .. }
        | Command::Values { io }
        | Command::FromValues { io, .. }
        | Command::Flags { io, .. }
        | Command::Roundtrip { io }
        | Command::Module { io, .. }
        | Command::Examples { io, .. } => io.clone(),
    };
    let result = dispatch(cli.command, &io, stdin);
    let (doc, code) = match result {
        Ok(v) => (v, 0),
        Err(Failure::Check(v)) => (v, 1),
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {}", msg);
            return 2;
        }
    };
    let text = serde_json::to_string_pretty(&doc).expect("JSON values serialize") + "\n";
    let written = match &io.output {
        Some(p) => fs::write(p, &text).map_err(|e| e.to_string()),
        None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: {}", e);
        return 2;
    }
    code
}

fn read_input(io: &Io, stdin: &mut dyn Read) -> std::result::Result<Value, Failure> {
    let text = match &io.input {
        Some(p) => fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {}", p.display(), e)))?,
        None => {
            let mut s = String::new();
            stdin.read_to_string(&mut s).map_err(|e| Failure::Usage(e.to_string()))?;
            s
        }
    };
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("malformed JSON: {}", e)))
}

fn parse_param(ctx: FieldContext, s: &str) -> std::result::Result<Scalar, Failure> {
    if s == "q" {
        return Ok(ctx.q()?);
    }
    Ok(ctx.from_rational(&billiard::field::parse_rational(s)?)?)
}

fn violation_json(v: &Violation) -> Value {
    let locs: Vec<String> = v.locations().iter().map(|l| l.key()).collect();
    match v {
        Violation::Shape { detail, .. } => json!({"kind": "shape", "locations": locs, "detail": detail}),
        Violation::ZeroVector(_) => json!({"kind": "zero-vector", "locations": locs}),
        Violation::DependentLine { eta, .. } => json!({"kind": "dependent-line", "eta": eta, "locations": locs}),
        Violation::IndependentClique { base } => {
            json!({"kind": "independent-clique", "base": base.key(), "locations": locs})
        }
    }
}

/// The value function of any array or labelling document.
fn values_of(doc: &Value) -> std::result::Result<ValueFunction, Failure> {
    if doc.get("labels").is_some() {
        return Ok(json::labelling_from_json(doc)?.value_function()?);
    }
    if doc.get("vectors").is_some() {
        let cba = json::cba_from_json(doc)?;
        if !cba.verify().is_ok() {
            return Err(Failure::Usage("input array fails the axioms".into()));
        }
        return Ok(cba.value_function()?);
    }
    Ok(json::ba_from_json(doc)?.value_function()?)
}

fn dispatch(cmd: Command, io: &Io, stdin: &mut dyn Read) -> Outcome {
    match cmd {
        Command::Gen { n, field, seed, plain, abstract_array, .. } => {
            let mut rng = random::rng(seed);
            let cba = random::concrete_array(n, field, !plain, &mut rng)?;
            let doc = if abstract_array { json::ba_to_json(&cba.to_billiard()?) } else { json::cba_to_json(&cba) };
            Ok(json::with_seed(doc, seed))
        }
        Command::Verify { threads, .. } => {
            let doc = read_input(io, stdin)?;
            let verdict = if doc.get("vectors").is_some() {
                json::cba_from_json(&doc)?.verify_parallel(threads.max(1))
            } else {
                json::ba_from_json(&doc)?.verify()
            };
            let report = json!({
                "bav": json::VERSION,
                "ok": verdict.is_ok(),
                "violations": verdict.violations.iter().map(violation_json).collect::<Vec<_>>(),
            });
            if verdict.is_ok() {
                Ok(report)
            } else {
                Err(Failure::Check(report))
            }
        }
        Command::Values { .. } => Ok(json::values_to_json(&values_of(&read_input(io, stdin)?)?)),
        Command::FromValues { labelling, .. } => {
            let psi = json::values_from_json(&read_input(io, stdin)?)?;
            let el = EdgeLabelling::from_values_canonical(&psi)?;
            if labelling {
                Ok(json::labelling_to_json(&el))
            } else {
                Ok(json::cba_to_json(&el.reconstruct_standard()?))
            }
        }
        Command::Flags { reverse, .. } => {
            let doc = read_input(io, stdin)?;
            if reverse {
                Ok(json::ba_to_json(&json::triple_from_json(&doc)?.to_billiard()?))
            } else {
                Ok(json::triple_to_json(&json::any_array_from_json(&doc)?.flags()?))
            }
        }
        Command::Roundtrip { .. } => roundtrip(&json::any_array_from_json(&read_input(io, stdin)?)?),
        Command::Module { flavor, n, field, q, seed, check, .. } => {
            let ba = match &io.input {
                Some(_) => json::any_array_from_json(&read_input(io, stdin)?)?,
                None => module_array(flavor, n, field, q.as_deref(), seed)?,
            };
            let flav = match flavor {
                FlavorArg::Sl2 => Flavor::Sl2,
                FlavorArg::Uq => {
                    let ctx = ba.ctx();
                    let qs = q.as_deref().unwrap_or(if ctx == FieldContext::RationalFunctions { "q" } else { "" });
                    if qs.is_empty() {
                        return Err(Failure::Usage("--q is required for uq over this field".into()));
                    }
                    Flavor::Uq(parse_param(ctx, qs)?)
                }
            };
            let ops = rep::build_operators(&ba, flav)?;
            let mut doc = json::operators_to_json(&ops);
            if check {
                let relations = rep::check_relations(&ops)?;
                let local = rep::local_action_check(&ops, &ba)?;
                let flags_ok = rep::nu_flags(&ops).map(|t| ba.flags().map(|f| f == t)).unwrap_or(Ok(false))?;
                let nilpotent = rep::nu_nilpotent(&ops)?;
                let ok = relations.is_ok() && local.is_ok() && flags_ok && nilpotent;
                let report = json!({
                    "ok": ok,
                    "relations": relations.residuals.iter().map(|r| r.relation.clone()).collect::<Vec<_>>(),
                    "local": local.failures.iter().map(|f| json!({"identity": f.identity, "location": f.location.key()})).collect::<Vec<_>>(),
                    "nu_flags_equal_b_flags": flags_ok,
                    "nu_nilpotent": nilpotent,
                });
                doc.as_object_mut().expect("object").insert("check".into(), report);
                if !ok {
                    return Err(Failure::Check(doc));
                }
            }
            if io.input.is_none() {
                doc = json::with_seed(doc, seed);
            }
            Ok(doc)
        }
        Command::Examples { family, n, field, q, xbar, ybar, zbar, .. } => {
            let cba = match family {
                FamilyArg::Poly => families::poly_cba(n, field.unwrap_or(FieldContext::Rationals))?,
                FamilyArg::Q => {
                    let ctx = field.unwrap_or(FieldContext::RationalFunctions);
                    let qv = parse_param(ctx, q.as_deref().unwrap_or("q"))?;
                    let get = |s: &Option<String>, default: Scalar| -> std::result::Result<Scalar, Failure> {
                        s.as_deref().map(|s| parse_param(ctx, s)).unwrap_or(Ok(default))
                    };
                    let xb = get(&xbar, ctx.one())?;
                    let yb = get(&ybar, ctx.one())?;
                    let default_z = qv.pow(n as i64 - 1)?.div(&(&xb * &yb))?;
                    let zb = get(&zbar, default_z)?;
                    families::q_cba(n, &qv, &xb, &yb, &zb)?
                }
            };
            Ok(json::cba_to_json(&cba))
        }
    }
}

/// A standard array with value function ≡ 1 (sl₂) or ≡ q⁻² (U_q).
fn module_array(
    flavor: FlavorArg,
    n: usize,
    field: Option<FieldContext>,
    q: Option<&str>,
    seed: u64,
) -> std::result::Result<BilliardArray, Failure> {
    let ctx = field.unwrap_or(match flavor {
        FlavorArg::Sl2 => FieldContext::Rationals,
        FlavorArg::Uq => FieldContext::RationalFunctions,
    });
    let psi = match flavor {
        FlavorArg::Sl2 => ctx.one(),
        FlavorArg::Uq => {
            let qs = q.unwrap_or(if ctx == FieldContext::RationalFunctions { "q" } else { "" });
            if qs.is_empty() {
                return Err(Failure::Usage("--q is required for uq over this field".into()));
            }
            parse_param(ctx, qs)?.pow(-2)?
        }
    };
    let el = if n >= 2 {
        EdgeLabelling::from_values_canonical(&ValueFunction::constant(n, &psi)?)?
    } else {
        EdgeLabelling::all_ones(n, ctx)
    };
    let mut rng = random::rng(seed);
    let m = random::invertible_matrix(ctx, n + 1, &mut rng)?;
    Ok(el.reconstruct_standard()?.map(&m)?.to_billiard()?)
}

fn roundtrip(ba: &BilliardArray) -> Outcome {
    let verdict = ba.verify();
    if !verdict.is_ok() {
        return Err(Failure::Usage("input array fails the axioms".into()));
    }
    let triple = ba.flags()?;
    let back = triple.to_billiard()?;
    let flags_ok = &back == ba && back.flags()? == triple;
    let (classification_ok, isomorphic) = if ba.diameter() >= 2 {
        let psi = ba.value_function()?;
        let rebuilt = EdgeLabelling::from_values_canonical(&psi)?.reconstruct_standard()?.to_billiard()?;
        (rebuilt.value_function()? == psi, ba.isomorphism_to(&rebuilt)?.is_some())
    } else {
        (true, true)
    };
    let ok = flags_ok && classification_ok && isomorphic;
    let report = json!({
        "bav": json::VERSION,
        "ok": ok,
        "flags": flags_ok,
        "classification": classification_ok,
        "isomorphic_to_rebuilt": isomorphic,
    });
    if ok {
        Ok(report)
    } else {
        Err(Failure::Check(report))
    }
}
