//! Command-line front end over problem documents.

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::changevar::{push_poisson, pushforward, structure_constants};
use crate::deform::DeformOptions;
use crate::document::{Document, Report, Session};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::lift::{complete_lift, tangent_lift_poisson, vertical_lift};
use crate::multivec::MultiVector;
use crate::poisson::PoissonTensor;
use crate::symexpr::{Verdict, ZeroTest};

#[derive(Parser, Debug)]
#[command(name = "poisson-lift", version, about = "Tangent lifts and deformations of Poisson tensors")]
pub struct Cli {
    /// Problem document; standard input when omitted or `-`.
    #[arg(short = 'f', long = "doc", global = true)]
    pub doc: Option<PathBuf>,
    /// Seed of the randomized zero test.
    #[arg(long, global = true, default_value_t = 0x5eed)]
    pub seed: u64,
    /// Sample points of the randomized zero test.
    #[arg(long, global = true, default_value_t = 32)]
    pub samples: usize,
    /// Relative tolerance of the randomized zero test.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Skip hypothesis checks of the deformation constructors.
    #[arg(long, global = true)]
    pub debug_force: bool,
    /// Emit a JSON verdict object.
    #[arg(long, global = true)]
    pub json: bool,
    /// Print bivectors as component listings instead of matrices.
    #[arg(long, global = true)]
    pub listing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Jacobi check `[P, P] = 0`.
    CheckJacobi { tensor: String },
    /// Whether a field preserves a tensor.
    PoissonVf { tensor: String, field: String },
    /// Lift a field or tensor to the tangent chart.
    Lift {
        name: String,
        #[arg(long, conflicts_with = "vertical")]
        complete: bool,
        #[arg(long)]
        vertical: bool,
    },
    /// Build a named deformation.
    Deform { spec: String },
    /// Schouten bracket of two named multivectors.
    Schouten { a: String, b: String },
    /// Whether a function (name or expression) is a Casimir.
    Casimir { tensor: String, function: String },
    /// Rewrite a tensor in new linear coordinates.
    Push { tensor: String, map: String },
    /// Structure constants of a linear tensor.
    Constants {
        tensor: String,
        #[arg(long)]
        map: Option<String>,
    },
    /// Check every expectation in the document.
    Verify,
    /// Run a bundled example: 1..5, or `base`.
    Example { which: String },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::CheckJacobi { .. } => "check-jacobi",
            Command::PoissonVf { .. } => "poisson-vf",
            Command::Lift { .. } => "lift",
            Command::Deform { .. } => "deform",
            Command::Schouten { .. } => "schouten",
            Command::Casimir { .. } => "casimir",
            Command::Push { .. } => "push",
            Command::Constants { .. } => "constants",
            Command::Verify => "verify",
            Command::Example { .. } => "example",
        }
    }
}

fn show(r: &mut Report, m: &MultiVector, listing: bool) -> Result<()> {
    if m.degree() == 2 && !listing {
        r.say(m.matrix_string()?.trim_end().to_string());
    } else {
        r.say(m.to_string().trim_end().to_string());
    }
    Ok(())
}

fn verdict(r: &mut Report, label: String, v: &Verdict) {
    r.record(v);
    r.say(format!("{label}: {v}"));
}

fn execute(cli: &Cli, doc: Option<&Document>) -> Result<Report> {
    let zt = ZeroTest {
        seed: cli.seed,
        samples: cli.samples,
        tol: cli.tol,
    };
    let opts = DeformOptions {
        debug_force: cli.debug_force,
    };
    if let Command::Example { which } = &cli.command {
        let d = fixtures::document(which)?;
        return Session::new(&d, zt, opts).verify();
    }
    let doc = doc.expect("document loaded for non-example commands");
    let s = Session::new(doc, zt, opts);
    let mut r = Report::default();
    match &cli.command {
        Command::CheckJacobi { tensor } => {
            let p = s.poisson(tensor)?;
            verdict(&mut r, format!("Jacobi {tensor}"), p.jacobi());
        }
        Command::PoissonVf { tensor, field } => {
            let p = s.poisson(tensor)?;
            let v = p.is_poisson_vf(&s.multivector(field)?, &s.zt)?;
            verdict(&mut r, format!("L_{field} {tensor}"), &v);
        }
        Command::Lift {
            name,
            complete,
            vertical,
        } => {
            let m = s.multivector(name)?;
            let lifted = if *vertical {
                vertical_lift(&m)?
            } else if *complete || m.degree() != 2 {
                complete_lift(&m)?
            } else {
                let t = tangent_lift_poisson(&PoissonTensor::check(m, &s.zt)?, &s.zt)?;
                verdict(&mut r, format!("Jacobi lift({name})"), t.jacobi());
                t.bivector().clone()
            };
            show(&mut r, &lifted, cli.listing)?;
        }
        Command::Deform { spec } => {
            let d = s.deformation(spec)?;
            r.say(format!("{spec}: {}", d.route));
            show(&mut r, d.tensor.bivector(), cli.listing)?;
            verdict(&mut r, format!("Jacobi {spec}"), d.tensor.jacobi());
        }
        Command::Schouten { a, b } => {
            let m = s.multivector(a)?.schouten(&s.multivector(b)?)?;
            r.say(format!("[{a}, {b}] (degree {}):", m.degree()));
            show(&mut r, &m, true)?;
        }
        Command::Casimir { tensor, function } => {
            let p = s.poisson(tensor)?;
            let f = s.expr(function)?;
            let v = p.is_casimir(&f, &s.zt)?;
            verdict(&mut r, format!("Casimir {function} of {tensor}"), &v);
        }
        Command::Push { tensor, map } => {
            let m = s.multivector(tensor)?;
            let a = s.map(map)?;
            if m.degree() == 2 {
                let p = push_poisson(&PoissonTensor::check(m, &s.zt)?, a, &s.zt)?;
                show(&mut r, p.bivector(), cli.listing)?;
                verdict(&mut r, format!("Jacobi {map}({tensor})"), p.jacobi());
            } else {
                show(&mut r, &pushforward(&m, a)?, true)?;
            }
        }
        Command::Constants { tensor, map } => {
            let mut p = s.poisson(tensor)?;
            if let Some(m) = map {
                p = push_poisson(&p, s.map(m)?, &s.zt)?;
            }
            let c = structure_constants(&p)?;
            if c.is_abelian() {
                r.say("(abelian)");
            } else {
                r.say(c.to_string().trim_end().to_string());
            }
        }
        Command::Verify => r = s.verify()?,
        Command::Example { .. } => unreachable!(),
    }
    Ok(r)
}

fn json_report(op: &str, r: &Report) -> Value {
    let mut obj = Map::new();
    obj.insert("operation".into(), json!(op));
    let kind = r.verdict.as_ref().map(Verdict::kind);
    obj.insert("verdict".into(), json!(kind));
    if let Some(Verdict::ProbablyZero { samples }) = &r.verdict {
        obj.insert("samples".into(), json!(samples));
    }
    let witness = r.verdict.as_ref().and_then(Verdict::witness).map(|w| {
        w.into_iter()
            .map(|(k, v)| (k.to_string(), json!(v.to_string())))
            .collect::<Map<_, _>>()
    });
    obj.insert("witness".into(), json!(witness));
    if let Some(Verdict::NonZero { value, .. }) = &r.verdict {
        obj.insert("value".into(), json!(value));
    }
    obj.insert("verified".into(), json!(r.all_verified()));
    obj.insert("failures".into(), json!(r.failures));
    obj.insert("output".into(), json!(r.lines));
    Value::Object(obj)
}

/// Runs a parsed command line. Returns the exit status: 0 when everything
/// verified, 1 on a NonZero verdict or failed expectation, 2 on input or
/// precondition errors.
pub fn run(cli: &Cli, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let op = cli.command.name();
    let result = (|| -> Result<Report> {
        let doc = match &cli.command {
            Command::Example { .. } => None,
            _ => Some(match &cli.doc {
                Some(p) if p.as_os_str() != "-" => Document::from_path(p)?,
                _ => {
                    let mut text = String::new();
                    stdin.read_to_string(&mut text).map_err(|e| Error::Document {
                        line: 0,
                        message: format!("cannot read standard input: {e}"),
                    })?;
                    Document::parse(&text)?
                }
            }),
        };
        execute(cli, doc.as_ref())
    })();
    match result {
        Ok(r) => {
            if cli.json {
                let _ = writeln!(out, "{}", json_report(op, &r));
            } else {
                let _ = write!(out, "{}", r.text());
            }
            r.exit_code()
        }
        Err(e) => {
            if cli.json {
                let _ = writeln!(out, "{}", json!({"operation": op, "verdict": null, "error": e.to_string()}));
            }
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

/// Parses `args` (including the program name) and runs.
pub fn run_args<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, stdin, out, err),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            if code == 0 {
                let _ = write!(out, "{e}");
            } else {
                let _ = write!(err, "{e}");
            }
            code
        }
    }
}

pub fn main_from_env() -> i32 {
    run_args(
        std::env::args_os(),
        &mut std::io::stdin(),
        &mut std::io::stdout(),
        &mut std::io::stderr(),
    )
}
