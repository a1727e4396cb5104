//! Command-line front end. Every verb prints `key=value` lines, or one flat
//! JSON object with `--json`. Exit codes: 0 success, 1 a check failed,
//! 2 usage, parse or I/O error.

use std::fmt::Display;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::algebra::{fmt_rational, Series};
use crate::inversion::{default_cap, fixed_point_inverse, polynomial_inverse_degree, verify_inverse};
use crate::jacobian::analyze;
use crate::numeric::{default_sample_points, theorem1_check, DEFAULT_RHO, DEFAULT_TOLERANCE};
use crate::partition::partition_report;
use crate::tensor::{lookup, parse_map, serialize_map, PolyMap, CATALOG_NAMES};
use crate::trees::{enumerate_trees, tree_count, tree_sum_inverse, TreeError, DEFAULT_TREE_BUDGET};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const SAMPLE_SEED: u64 = 0x7431;

#[derive(Debug, Parser)]
#[command(name = "finv", about = "Exact formal inverses of polynomial maps x - H(x)", version)]
struct Cli {
    /// Emit one flat JSON object instead of key=value lines.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the truncated inverse G.
    Invert {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        degree: u32,
        #[arg(long, value_enum, default_value_t = Method::Fixedpoint)]
        method: Method,
    },
    /// Jacobian verdicts, degree bound and polynomial inverse degree.
    Check {
        #[arg(long)]
        map: PathBuf,
    },
    /// Count (and optionally enumerate) labeled trees.
    Trees {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        internal: usize,
        #[arg(long)]
        enumerate: bool,
    },
    /// log Z, Z and the identities they satisfy.
    Zfun {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        degree: u32,
    },
    /// Floating-point check of convergence inside the radius.
    #[command(name = "verify-theorem1")]
    VerifyTheorem1 {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        degree: u32,
        #[arg(long, default_value_t = 6)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_RHO)]
        rho: f64,
    },
    /// List the built-in fixtures or print one in map-file format.
    Catalog {
        #[arg(long)]
        name: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Fixedpoint,
    Trees,
    Both,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CliOutput {
    fn usage(message: impl Display) -> Self {
        CliOutput { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {message}\n") }
    }
}

/// Ordered report fields, rendered as text or JSON.
struct Report {
    fields: Vec<(String, Value)>,
    table: Vec<String>,
    /// Replaces the text rendering when set.
    raw: Option<String>,
}

impl Report {
    fn new(verb: &str) -> Self {
        Report { fields: vec![("verb".into(), Value::from(verb))], table: Vec::new(), raw: None }
    }

    fn put(&mut self, key: impl Into<String>, value: impl Into<Value>) {
        self.fields.push((key.into(), value.into()));
    }

    fn render(self, as_json: bool, code: i32) -> CliOutput {
        let stdout = if as_json {
            let map: Map<String, Value> = self.fields.into_iter().collect();
            format!("{}\n", Value::Object(map))
        } else if let Some(raw) = self.raw {
            raw
        } else {
            let mut out = String::new();
            for (k, v) in self.fields.iter().skip(1) {
                let text = match v {
                    Value::String(s) => s.clone(),
                    Value::Null => "none".into(),
                    other => other.to_string(),
                };
                out.push_str(&format!("{k}={text}\n"));
            }
            for line in &self.table {
                out.push_str(line);
                out.push('\n');
            }
            out
        };
        CliOutput { code, stdout, stderr: String::new() }
    }
}

/// Runs one command. `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                CliOutput { code, stdout: String::new(), stderr: text }
            } else {
                CliOutput { code, stdout: text, stderr: String::new() }
            };
        }
    };
    let result = match cli.command {
        Command::Invert { map, degree, method } => invert(&map, degree, method),
        Command::Check { map } => check(&map),
        Command::Trees { d, internal, enumerate } => trees(d, internal, enumerate),
        Command::Zfun { map, degree } => zfun(&map, degree),
        Command::VerifyTheorem1 { map, degree, samples, tol, rho } => verify_theorem1(&map, degree, samples, tol, rho),
        Command::Catalog { name } => catalog(name.as_deref()),
    };
    match result {
        Ok((report, code)) => report.render(cli.json, code),
        Err(message) => CliOutput::usage(message),
    }
}

type Outcome = Result<(Report, i32), String>;

fn load_map(path: &Path) -> Result<PolyMap, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_map(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn exit_for(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

fn put_map_header(report: &mut Report, map: &PolyMap) {
    report.put("map", map.name().map(Value::from).unwrap_or(Value::Null));
    report.put("n", map.n());
    report.put("d", map.d());
}

fn put_series(report: &mut Report, prefix: &str, g: &[Series]) {
    for (i, s) in g.iter().enumerate() {
        report.put(format!("{prefix}{}", i + 1), s.body().render("y"));
    }
}

fn invert(path: &Path, degree: u32, method: Method) -> Outcome {
    let map = load_map(path)?;
    let mut report = Report::new("invert");
    put_map_header(&mut report, &map);
    report.put("degree", degree);
    report.put("method", format!("{method:?}").to_lowercase());

    let fixed = match method {
        Method::Fixedpoint | Method::Both => Some(fixed_point_inverse(&map, degree).map_err(|e| e.to_string())?),
        Method::Trees => None,
    };
    let trees = match method {
        Method::Trees | Method::Both => Some(tree_sum_inverse(&map, degree).map_err(|e| e.to_string())?),
        Method::Fixedpoint => None,
    };
    let g = fixed.as_ref().or(trees.as_ref()).expect("one method always runs");
    let verified = verify_inverse(&map, g, degree).map_err(|e| e.to_string())?;
    let mut ok = verified;
    if let (Some(a), Some(b)) = (&fixed, &trees) {
        let agree = a == b;
        report.put("agree", agree);
        ok &= agree;
    }
    report.put("verified", verified);
    put_series(&mut report, "G", g);
    Ok((report, exit_for(ok)))
}

fn check(path: &Path) -> Outcome {
    let map = load_map(path)?;
    let verdict = analyze(&map).map_err(|e| e.to_string())?;
    let poly_degree = polynomial_inverse_degree(&map, default_cap(&map)).map_err(|e| e.to_string())?;
    let mut report = Report::new("check");
    put_map_header(&mut report, &map);
    report.put("unit_jacobian", verdict.unit_jacobian);
    report.put("nilpotency", verdict.nilpotency_order.map(Value::from).unwrap_or(Value::Null));
    report.put("traces_vanish", verdict.traces_vanish);
    report.put("gabber", map.gabber_bound());
    report.put("poly_inverse_degree", poly_degree.map(Value::from).unwrap_or(Value::Null));
    report.put("consistent", verdict.is_consistent());
    Ok((report, exit_for(verdict.is_consistent())))
}

fn trees(d: usize, internal: usize, enumerate: bool) -> Outcome {
    if d < 2 {
        return Err(TreeError::InvalidDegree(d).to_string());
    }
    let count = tree_count(internal, d);
    let mut report = Report::new("trees");
    report.put("d", d);
    report.put("internal", internal);
    report.put("leaves", (d - 1) * internal + 1);
    report.put("count", count.to_string());
    let mut ok = true;
    if enumerate {
        let mut seen = std::collections::BTreeSet::new();
        let mut walked = 0u64;
        for tree in enumerate_trees(internal, d, DEFAULT_TREE_BUDGET).map_err(|e| e.to_string())? {
            walked += 1;
            seen.insert(tree.shape_code());
        }
        let matches = count == walked.into();
        report.put("enumerated", walked);
        report.put("shapes", seen.len());
        report.put("matches", matches);
        ok = matches;
    }
    Ok((report, exit_for(ok)))
}

fn zfun(path: &Path, degree: u32) -> Outcome {
    let map = load_map(path)?;
    let unit = analyze(&map).map_err(|e| e.to_string())?.unit_jacobian;
    let r = partition_report(&map, degree).map_err(|e| e.to_string())?;
    let mut report = Report::new("zfun");
    put_map_header(&mut report, &map);
    report.put("degree", degree);
    report.put("log_z", r.log_z.body().render("y"));
    report.put("z", r.z.body().render("y"));
    report.put("z_identity", r.z_identity);
    report.put("unit_jacobian", unit);
    report.put("self_normalized", r.self_normalized);
    let ok = r.z_identity && (!unit || r.self_normalized);
    Ok((report, exit_for(ok)))
}

fn verify_theorem1(path: &Path, degree: u32, samples: usize, tol: f64, rho: f64) -> Outcome {
    let map = load_map(path)?;
    let mut points = default_sample_points(&map, samples, SAMPLE_SEED);
    if rho != DEFAULT_RHO && rho > 0.0 {
        // keep the outermost shell at rho * R
        let shrink = rho / DEFAULT_RHO;
        points.iter_mut().flatten().for_each(|x| *x *= shrink * (1.0 - f64::EPSILON));
    }
    let r = theorem1_check(&map, degree, &points, rho, tol).map_err(|e| e.to_string())?;
    let mut report = Report::new("verify-theorem1");
    put_map_header(&mut report, &map);
    report.put("degree", degree);
    report.put("norm_w", fmt_rational(&map.norm_w()));
    report.put("radius", if r.radius.is_finite() { json!(r.radius) } else { json!("inf") });
    report.put("samples", r.samples.len());
    report.put("tol", tol);
    report.put("max_residual", r.samples.iter().fold(0.0f64, |m, s| m.max(s.residual)));
    report.put("all_ok", r.all_ok());
    report.table.push("#  |y|  |G(y)|  bound  residual  ok".into());
    for (k, s) in r.samples.iter().enumerate() {
        let gn = crate::numeric::sup_norm(&s.value);
        report.table.push(format!(
            "{k}  {:.6}  {:.6}  {:.6}  {:.3e}  {}",
            crate::numeric::sup_norm(&s.point),
            gn,
            s.bound,
            s.residual,
            s.residual_ok && s.bound_ok
        ));
    }
    Ok((report, exit_for(r.all_ok())))
}

fn catalog(name: Option<&str>) -> Outcome {
    let mut report = Report::new("catalog");
    match name {
        None => {
            report.put("count", CATALOG_NAMES.len());
            report.put("names", CATALOG_NAMES.join(","));
        }
        Some(name) => {
            let map = lookup(name).map_err(|e| e.to_string())?;
            report.put("name", name);
            let text = serialize_map(&map);
            report.put("map_file", text.clone());
            report.raw = Some(text);
        }
    }
    Ok((report, EXIT_OK))
}
