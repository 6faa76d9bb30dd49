//! Command-line front end.
//!
//! `run` parses argv, executes one subcommand and returns the exit code with
//! whatever should go to stdout and stderr, so tests can drive it directly.

use std::fs;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::bounds;
use crate::brute;
use crate::construct::{self, AmbientForm, VeroneseFrame};
use crate::error::{Error, Result};
use crate::generators::{find_generating_system, GeneratorRequest, DEFAULT_MAX_ATTEMPTS};
use crate::polyring::{parse_form, GradedForm};
use crate::scalar::Field;
use crate::schubert;
use crate::smoothness::{self, CertifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INTERNAL: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(
    name = "fano",
    version,
    about = "Fano schemes of linear spaces and Veronese varieties in hypersurfaces"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for parallel enumeration and elimination.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dimension counts and degree thresholds.
    Bounds {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = 1)]
        e: u32,
        #[arg(long)]
        n: Option<u32>,
    },
    /// Explicit hypersurfaces with verified certificates.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Smoothness certificate for a form read from a file.
    Certify {
        #[command(flatten)]
        input: FormInput,
        #[arg(long, default_value_t = 1)]
        e: u32,
        /// Override the Macaulay bound for the c-scan.
        #[arg(long)]
        c_max: Option<u32>,
        /// Certify even when the characteristic is at most d*e.
        #[arg(long)]
        allow_small_char: bool,
    },
    /// Tangent dimension of the Fano scheme at the plane y = 0.
    Tangent {
        #[command(flatten)]
        input: FormInput,
    },
    /// Grassmannian degree computations.
    #[command(subcommand)]
    Schubert(SchubertCmd),
    /// Brute-force enumeration over F_q.
    #[command(subcommand)]
    Enumerate(EnumerateCmd),
    /// Seeded search for c-generating systems.
    #[command(subcommand)]
    Generators(GeneratorsCmd),
}

#[derive(Args, Debug)]
struct Common {
    /// Q, or a prime p (also written F_p).
    #[arg(long, default_value = "Q")]
    field: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct FormInput {
    #[arg(long)]
    r: u32,
    #[arg(long)]
    n: u32,
    /// File holding the form in the text grammar (x0.., y1..).
    #[arg(long)]
    poly: PathBuf,
    /// Index of the first y-coordinate in the file (0 for pencils).
    #[arg(long, default_value_t = 1)]
    y_base: usize,
    #[arg(long, default_value = "Q")]
    field: String,
}

#[derive(Subcommand, Debug)]
enum ConstructCmd {
    Waldron {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        common: Common,
    },
    Nenashev {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        e: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        common: Common,
    },
    Pencil {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
        #[command(flatten)]
        common: Common,
    },
    QuadricVeronese {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        e: u32,
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand, Debug)]
enum SchubertCmd {
    /// Number of r-planes on a general hypersurface when f_1 = 0.
    Count {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
    },
    /// Plucker degree of the Fano scheme.
    Degree {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
    },
    /// Expanded top Chern class of Sym^d of the quotient.
    Poly {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        d: u32,
        /// Exponent cap; defaults to no pruning.
        #[arg(long)]
        cap: Option<u32>,
    },
}

#[derive(Subcommand, Debug)]
enum EnumerateCmd {
    /// r-planes over F_q inside Zero(G).
    Fano {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        poly: PathBuf,
        /// Ambient dimension; required when the file uses y-variables.
        #[arg(long)]
        n: Option<u32>,
    },
    /// All r-planes of P^n(F_q).
    Planes {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        q: u64,
    },
    /// The two families of r-planes on the split quadric in P^(2r+1).
    QuadricFamilies {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        q: u64,
    },
}

#[derive(Subcommand, Debug)]
enum GeneratorsCmd {
    Find {
        #[arg(long)]
        r: u32,
        /// Degree of the members.
        #[arg(long)]
        b: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        c: u32,
        #[arg(long, default_value_t = DEFAULT_MAX_ATTEMPTS)]
        max_attempts: u32,
        #[command(flatten)]
        common: Common,
    },
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn parse_field(spec: &str) -> Result<Field> {
    let s = spec.trim();
    if s.eq_ignore_ascii_case("q") {
        return Ok(Field::Rational);
    }
    let digits = s.strip_prefix("F_").or_else(|| s.strip_prefix('F')).unwrap_or(s);
    let p: u64 = digits
        .parse()
        .map_err(|_| Error::Parse(format!("field must be Q or a prime, got {spec:?}")))?;
    Field::prime(p)
}

fn read_text(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn read_ambient(input: &FormInput, e: u32) -> Result<AmbientForm> {
    let field = parse_field(&input.field)?;
    let frame = VeroneseFrame::new(input.r, e, input.n)?.with_y_base(input.y_base);
    AmbientForm::parse(frame, &read_text(&input.poly)?, field)
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn bounds_cmd(r: u32, d: u32, e: u32, n: Option<u32>) -> Result<Value> {
    let report = bounds::bounds_report(r, d, e, n)?;
    let mut v = to_value(&report);
    if let (Some(n), 1) = (n, e) {
        v["flag_fiber"] = to_value(&bounds::flag_fiber_report(n, r, d)?);
    }
    Ok(v)
}

fn certified(g: AmbientForm, field: Field) -> Result<Value> {
    let cert = smoothness::certify_smooth_point(&g)?;
    if !cert.e_generating {
        return Err(Error::Internal(format!(
            "constructed form {} fails its certificate",
            g.text()
        )));
    }
    let mut v = json!({
        "field": field.to_string(),
        "form": to_value(&g),
        "system": cert.partials_system.to_texts(),
        "certificate": to_value(&cert),
    });
    if g.frame().e() == 1 {
        let f = g.frame();
        let tangent = smoothness::tangent_dim_linear(&g)?;
        let f1 = bounds::expected_dim(f.n(), f.r(), g.degree(), 1);
        if tangent as i64 != f1 {
            return Err(Error::Internal(format!(
                "tangent dimension {tangent} differs from f_1 = {f1}"
            )));
        }
        v["tangent_dim"] = json!(tangent);
        v["f1"] = json!(f1);
    }
    Ok(v)
}

fn construct_cmd(cmd: ConstructCmd) -> Result<Value> {
    match cmd {
        ConstructCmd::Waldron { r, d, n, common } => {
            let field = parse_field(&common.field)?;
            certified(construct::waldron_form(r, d, n, common.seed, field)?, field)
        }
        ConstructCmd::Nenashev { r, e, d, n, common } => {
            let field = parse_field(&common.field)?;
            certified(construct::nenashev_form(r, e, d, n, common.seed, field)?, field)
        }
        ConstructCmd::Pencil { r, d, n, a, b, common } => {
            let field = parse_field(&common.field)?;
            let mut v = certified(construct::pencil_form(r, d, n, a, b, common.seed, field)?, field)?;
            v["a"] = json!(a);
            v["b"] = json!(b);
            Ok(v)
        }
        ConstructCmd::QuadricVeronese { r, e, n, common } => {
            let field = parse_field(&common.field)?;
            let q = construct::quadric_through_veronese(r, e, n, common.seed, field)?;
            let pullback = construct::veronese_pullback(q.frame(), q.poly())?;
            let gram_rank = construct::gram_matrix(q.poly())?.rank()?;
            if !pullback.is_zero() || gram_rank != q.frame().nvars() {
                return Err(Error::Internal(format!("quadric {} fails re-verification", q.text())));
            }
            Ok(json!({
                "field": field.to_string(),
                "form": to_value(&q),
                "gram_rank": gram_rank,
                "smooth": true,
            }))
        }
    }
}

fn schubert_cmd(cmd: SchubertCmd) -> Result<Value> {
    match cmd {
        SchubertCmd::Count { r, n, d } => Ok(to_value(&schubert::count_linear_spaces(r, n, d)?)),
        SchubertCmd::Degree { r, n, d } => {
            let degree = schubert::fano_degree(r, n, d)?;
            Ok(json!({
                "r": r, "n": n, "d": d,
                "f1": bounds::expected_dim(n, r, d, 1),
                "degree": degree.to_string(),
            }))
        }
        SchubertCmd::Poly { r, d, cap } => {
            let cap = cap.unwrap_or(u32::MAX);
            let p = schubert::chern_top_poly(r, d, cap);
            let terms: Vec<Value> = p
                .terms()
                .rev()
                .map(|(e, c)| json!({ "exps": e, "coeff": c.to_string() }))
                .collect();
            let mut v = json!({ "r": r, "d": d, "terms": terms });
            if cap != u32::MAX {
                v["cap"] = json!(cap);
            }
            Ok(v)
        }
    }
}

fn fano_form(text: &str, q: u64, r: u32, n: Option<u32>) -> Result<GradedForm> {
    let field = Field::prime(q)?;
    if text.contains('y') {
        let n = n.ok_or_else(|| Error::Domain("forms with y-variables need --n".into()))?;
        let frame = VeroneseFrame::new(r, 1, n)?;
        return Ok(AmbientForm::parse(frame, text, field)?.poly().clone());
    }
    parse_form(text, field, n.map(|n| n as usize + 1))
}

fn enumerate_cmd(cmd: EnumerateCmd) -> Result<Value> {
    match cmd {
        EnumerateCmd::Fano { q, r, poly, n } => {
            let g = fano_form(&read_text(&poly)?, q, r, n)?;
            let count = brute::count_fano_points(&g, r as usize, q)?;
            Ok(to_value(&brute::FanoCount {
                q,
                r: r as usize,
                n: g.nvars() - 1,
                count,
            }))
        }
        EnumerateCmd::Planes { n, r, q } => {
            let (n, r) = (n as usize, r as usize);
            let count = brute::count_planes(n, r, q, |_| true)?;
            let expected = brute::gaussian_binomial(n as u32 + 1, r as u32 + 1, q);
            if expected != count.into() {
                return Err(Error::Internal(format!(
                    "enumerated {count} planes, expected {expected}"
                )));
            }
            Ok(json!({ "q": q, "r": r, "n": n, "count": count, "gaussian_binomial": expected.to_string() }))
        }
        EnumerateCmd::QuadricFamilies { r, q } => Ok(to_value(&brute::quadric_families(r as usize, q)?)),
    }
}

fn generators_cmd(cmd: GeneratorsCmd) -> Result<Value> {
    let GeneratorsCmd::Find {
        r,
        b,
        m,
        c,
        max_attempts,
        common,
    } = cmd;
    let field = parse_field(&common.field)?;
    let req = GeneratorRequest::new(r, b, m, c)
        .with_field(field)
        .with_seed(common.seed)
        .with_max_attempts(max_attempts);
    let sys = find_generating_system(&req)?;
    Ok(json!({
        "r": r, "b": b, "m": m, "c": c,
        "field": field.to_string(),
        "seed": common.seed,
        "members": sys.to_texts(),
        "c_generating": true,
    }))
}

fn execute(cmd: Command) -> Result<Value> {
    match cmd {
        Command::Bounds { r, d, e, n } => bounds_cmd(r, d, e, n),
        Command::Construct(c) => construct_cmd(c),
        Command::Certify {
            input,
            e,
            c_max,
            allow_small_char,
        } => {
            let g = read_ambient(&input, e)?;
            let opts = CertifyOptions {
                c_max,
                allow_small_characteristic: allow_small_char,
                ..Default::default()
            };
            let cert = smoothness::certify_smooth_point_with(&g, &opts)?;
            let mut v = to_value(&cert);
            v["system"] = json!(cert.partials_system.to_texts());
            Ok(v)
        }
        Command::Tangent { input } => {
            let g = read_ambient(&input, 1)?;
            let tangent = smoothness::tangent_dim_linear(&g)?;
            let f = g.frame();
            Ok(json!({
                "tangent_dim": tangent,
                "f1": bounds::expected_dim(f.n(), f.r(), g.degree(), 1),
            }))
        }
        Command::Schubert(c) => schubert_cmd(c),
        Command::Enumerate(c) => enumerate_cmd(c),
        Command::Generators(c) => generators_cmd(c),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                flatten(&key(k), x, out);
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), x, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(v).expect("json");
            s.push('\n');
            s
        }
        Format::Tsv => {
            let mut rows = Vec::new();
            flatten("", v, &mut rows);
            rows.into_iter().map(|(k, x)| format!("{k}\t{x}\n")).collect()
        }
    }
}

fn failure(e: &Error) -> Outcome {
    let code = if e.is_internal() { EXIT_INTERNAL } else { EXIT_FAILURE };
    Outcome {
        code,
        stdout: String::new(),
        stderr: format!("error: {e}\n"),
    }
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let Cli {
        format,
        out,
        threads,
        command,
    } = cli;
    let result = match threads {
        Some(0) => Err(Error::Domain("--threads must be positive".into())),
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Error::Internal(format!("thread pool: {e}")))
            .and_then(|pool| pool.install(|| execute(command))),
        None => execute(command),
    };
    let value = match result {
        Ok(v) => v,
        Err(e) => return failure(&e),
    };
    let text = render(&value, format);
    match out {
        Some(path) => match fs::write(&path, &text) {
            Ok(()) => Outcome {
                code: EXIT_OK,
                stdout: String::new(),
                stderr: String::new(),
            },
            Err(e) => failure(&Error::Io(format!("{}: {e}", path.display()))),
        },
        None => Outcome {
            code: EXIT_OK,
            stdout: text,
            stderr: String::new(),
        },
    }
}
