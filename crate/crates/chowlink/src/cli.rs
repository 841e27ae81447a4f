//! The `chowlink` command line: eval, normalize, classify, verify, info.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{Map, Value};

use crate::chow_core::DivisorClass;
use crate::compactify::{classify_quadric, normalize, Descriptor, P2Compactification, Verdict};
use crate::error::Error;
use crate::models::anticanonical_cube;
use crate::verify::{build_target, run_corpus, Target};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_DEGREE: i32 = 3;
pub const EXIT_NOT_A3: i32 = 4;
pub const EXIT_UNDETERMINED: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "chowlink", version, about = "Intersection numbers, elementary links and normalization certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a divisor expression on a model.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        expr: String,
        #[arg(long)]
        json: bool,
    },
    /// Run the normalization pipeline and write a certificate.
    Normalize {
        #[arg(long)]
        descriptor: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify a descriptor.
    Classify {
        #[arg(long)]
        descriptor: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run the identity corpus.
    Verify {
        #[arg(long)]
        filter: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Print generators, form entries and the anticanonical class of a model.
    Info {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Io<'_> {
    fn fail(&mut self, code: i32, msg: impl std::fmt::Display) -> i32 {
        let _ = writeln!(self.err, "error: {msg}");
        code
    }
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::DegreeMismatch { .. } => EXIT_DEGREE,
        Error::NotA3(_) => EXIT_NOT_A3,
        Error::Undetermined(_) => EXIT_UNDETERMINED,
        Error::Syntax { .. } | Error::UnknownName(_) | Error::UnknownGenerator(_) | Error::Descriptor(_) => EXIT_PARSE,
        _ => EXIT_FAILURE,
    }
}

fn read_json(path: &Path) -> Result<Value, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut io = Io { out, err };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(io.err, "{text}") } else { write!(io.out, "{text}") };
            return code;
        }
    };
    match cli.command {
        Command::Eval { model, expr, json } => cmd_eval(&mut io, &model, &expr, json),
        Command::Normalize { descriptor, out } => cmd_normalize(&mut io, &descriptor, out.as_deref()),
        Command::Classify { descriptor, json } => cmd_classify(&mut io, &descriptor, json),
        Command::Verify { filter, json } => cmd_verify(&mut io, filter.as_deref(), json),
        Command::Info { model, json } => cmd_info(&mut io, &model, json),
    }
}

fn load_model(io: &mut Io, path: &Path) -> Result<Target, i32> {
    let v = read_json(path).map_err(|m| io.fail(EXIT_PARSE, m))?;
    build_target(&v).map_err(|e| io.fail(error_code(&e), e))
}

fn cmd_eval(io: &mut Io, model: &Path, expr: &str, json: bool) -> i32 {
    let t = match load_model(io, model) {
        Ok(t) => t,
        Err(c) => return c,
    };
    match t.eval(expr) {
        Ok(v) => {
            if json {
                let _ = writeln!(io.out, "{}", serde_json::json!({ "expr": expr, "value": v.to_string() }));
            } else {
                let _ = writeln!(io.out, "{v}");
            }
            EXIT_OK
        }
        Err(e) => io.fail(error_code(&e), e),
    }
}

fn load_descriptor(io: &mut Io, path: &Path) -> Result<Descriptor, i32> {
    let v = read_json(path).map_err(|m| io.fail(EXIT_PARSE, m))?;
    Descriptor::from_json(&v).map_err(|e| io.fail(EXIT_PARSE, e))
}

fn verdict_of(d: &Descriptor) -> Verdict {
    match d {
        Descriptor::Quadric(q) => classify_quadric(q),
        Descriptor::P2(p) => match P2Compactification::new(p.delta.clone(), p.e.clone(), p.d) {
            Ok(_) => Verdict::IsA3,
            Err(e) => Verdict::NotA3(vec![e.to_string()]),
        },
    }
}

fn cmd_normalize(io: &mut Io, descriptor: &Path, out: Option<&Path>) -> i32 {
    let d = match load_descriptor(io, descriptor) {
        Ok(d) => d,
        Err(c) => return c,
    };
    if let Err(e) = verdict_of(&d).into_result() {
        return io.fail(error_code(&e), e);
    }
    let cert = match normalize(&d) {
        Ok(c) => c,
        Err(e) => return io.fail(error_code(&e), e),
    };
    let text = cert.to_canonical_string();
    match out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &text) {
                return io.fail(EXIT_FAILURE, format!("{}: {e}", p.display()));
            }
        }
        None => {
            let _ = write!(io.out, "{text}");
        }
    }
    if cert.all_checks_pass() {
        EXIT_OK
    } else {
        for (i, c) in cert.failing_checks() {
            let _ = writeln!(io.err, "step {i}: {} expected {}, got {}", c.name, c.expected, c.computed);
        }
        EXIT_FAILURE
    }
}

fn cmd_classify(io: &mut Io, descriptor: &Path, json: bool) -> i32 {
    let d = match load_descriptor(io, descriptor) {
        Ok(d) => d,
        Err(c) => return c,
    };
    let (name, reasons, code) = match verdict_of(&d) {
        Verdict::IsA3 => ("IsA3", Vec::new(), EXIT_OK),
        Verdict::NotA3(r) => ("NotA3", r, EXIT_NOT_A3),
        Verdict::Undetermined(m) => ("Undetermined", m, EXIT_UNDETERMINED),
    };
    if json {
        let _ = writeln!(io.out, "{}", serde_json::json!({ "verdict": name, "reasons": reasons }));
    } else {
        let _ = writeln!(io.out, "{name}");
        for r in &reasons {
            let _ = writeln!(io.out, "  {r}");
        }
    }
    code
}

fn cmd_verify(io: &mut Io, filter: Option<&str>, json: bool) -> i32 {
    let report = run_corpus(filter);
    if json {
        let _ = writeln!(io.out, "{}", serde_json::to_string_pretty(&report.to_json()).expect("serializable"));
    } else {
        let _ = write!(io.out, "{}", report.to_text());
    }
    if report.passed() {
        EXIT_OK
    } else {
        EXIT_FAILURE
    }
}

/// "F*xi^2" for the entry (F, xi, xi).
fn monomial(names: &[String]) -> String {
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < names.len() {
        let n = names[i..].iter().take_while(|x| **x == names[i]).count();
        parts.push(if n == 1 { names[i].clone() } else { format!("{}^{n}", names[i]) });
        i += n;
    }
    parts.join("*")
}

fn cmd_info(io: &mut Io, model: &Path, json: bool) -> i32 {
    let t = match load_model(io, model) {
        Ok(t) => t,
        Err(c) => return c,
    };
    let gens: Vec<String>;
    let mut entries = Vec::new();
    let mut tracked = Vec::new();
    let (minus_k, power): (DivisorClass, (&str, String)) = match &t {
        Target::Threefold(m) => {
            gens = m.form.gen_names();
            for (k, v) in m.form.entries() {
                entries.push((monomial(k), v.to_string()));
            }
            tracked = m.tracked.iter().map(|(n, d)| (n.clone(), d.to_string())).collect();
            let cube = match anticanonical_cube(m) {
                Ok(c) => c.to_string(),
                Err(e) => return io.fail(EXIT_FAILURE, e),
            };
            (m.anticanonical(), ("(-K)^3", cube))
        }
        Target::Surface(s) => {
            gens = s.pairing.gens().to_vec();
            for (i, a) in gens.iter().enumerate() {
                for b in &gens[i..] {
                    let v = s.pairing.entry(a, b);
                    if !num_traits::Zero::is_zero(&v) {
                        entries.push((monomial(&[a.clone(), b.clone()]), v.to_string()));
                    }
                }
            }
            (-s.canonical.clone(), ("K^2", s.canonical_square().to_string()))
        }
    };
    if json {
        let mut m = Map::new();
        m.insert("generators".into(), gens.iter().cloned().map(Value::String).collect());
        m.insert("form".into(), Value::Object(entries.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect()));
        m.insert("tracked".into(), Value::Object(tracked.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect()));
        m.insert("-K".into(), minus_k.to_string().into());
        m.insert(power.0.into(), power.1.into());
        let _ = writeln!(io.out, "{}", serde_json::to_string_pretty(&Value::Object(m)).expect("serializable"));
    } else {
        let _ = writeln!(io.out, "generators: {}", gens.join(", "));
        for (k, v) in &entries {
            let _ = writeln!(io.out, "{k} = {v}");
        }
        for (k, v) in &tracked {
            let _ = writeln!(io.out, "{k} ~ {v}");
        }
        let _ = writeln!(io.out, "-K = {minus_k}");
        let _ = writeln!(io.out, "{} = {}", power.0, power.1);
    }
    EXIT_OK
}
