//! Command-line front end. Every subcommand prints one canonical JSON
//! document (see [`crate::json::to_canonical_string`]).
//!
//! Exit codes: 0 on success, including reports whose checks come out
//! false; 2 when input is rejected by a validation step; 1 on usage, parse
//! and I/O errors.

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::centrality::{
    central_check, centralize_table, character_moment_closed, character_moment_direct, torus_gaussian,
    CentralParams, CharacterPattern, MomentTable,
};
use crate::convolution::{conv_exp, convolve, drift_bracket, WordFunctional};
use crate::error::Error;
use crate::gaussian::{
    coboundary, cook, cook_matrix, eval_eta, eval_phi, from_free_group_data, from_wh, gram, is_driftless, to_wh,
    validate, CookedFunctional, GaussianSpec,
};
use crate::json::{
    checks_to, complex_to, free_group_from_value, matrix_from, matrix_to, spec_from_str, spec_to_value, tensor_to,
    to_canonical_string, vector_to, wh_from_value, wh_to_value,
};
use crate::kernel::{
    apply_cp_map, choi_form, flip, kraus_extract, max_abs_diff, mult_map, psd_check, ComplexMatrix, TensorOperator,
};
use crate::sample;
use crate::targets::{ideal_vanishing_check, matrix_conditions, relation_set, GroupTarget};
use crate::wordlang::{parse, print};
use crate::words::{Alphabet, Element, DEFAULT_GUARD};

/// Subcommands and the library operations each one exposes.
pub const COMMANDS: &[(&str, &[&str])] = &[
    ("validate", &["validate", "cook"]),
    ("eval", &["eval_phi"]),
    ("cocycle", &["eval_eta", "gram"]),
    ("coboundary", &["coboundary"]),
    ("decompose", &["to_wh", "is_driftless", "apply_cp_map"]),
    (
        "compose",
        &["from_wh", "torus_gaussian", "from_free_group_data", "mult_map", "flip", "choi_form", "psd_check", "kraus_extract"],
    ),
    ("check-group", &["matrix_conditions", "relation_set", "ideal_vanishing_check"]),
    ("central", &["central_check"]),
    ("centralize", &["centralize_table"]),
    ("moments", &["character_moment_direct", "character_moment_closed", "central_params"]),
    ("bracket", &["drift_bracket"]),
    ("conv-exp", &["conv_exp", "convolve"]),
    ("parse", &["parse", "print", "counit", "star", "coproduct", "antipode"]),
];

#[derive(Parser, Debug)]
#[command(name = "qgauss", version, about = "Gaussian generating functionals on compact matrix quantum groups")]
struct Cli {
    /// Residual tolerance for every check.
    #[arg(long, global = true, env = "QG_TOL", default_value_t = 1e-9)]
    tol: f64,
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct SpecArg {
    /// Gaussian spec JSON file.
    #[arg(long)]
    spec: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a spec and list its first-order values.
    Validate(SpecArg),
    /// Evaluate the functional on an expression.
    Eval {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        expr: String,
    },
    /// Cocycle values of expressions, optionally with their Gram matrix.
    Cocycle {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, required = true)]
        expr: Vec<String>,
        /// Also compute the Gram matrix (inputs must have zero counit).
        #[arg(long)]
        gram: bool,
    },
    /// Coboundary of the functional on two expressions.
    Coboundary {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, num_args = 2, required = true)]
        expr: Vec<String>,
    },
    /// Convert a spec to (W, H) and report its drift and Ψ_W(Z).
    Decompose {
        #[command(flatten)]
        spec: SpecArg,
        /// Matrix JSON file for Z (identity when absent).
        #[arg(long)]
        z: Option<PathBuf>,
    },
    /// Build a spec from (W, H), torus parameters or free-group data.
    Compose {
        /// (W, H) JSON file.
        #[arg(long, group = "source")]
        wh: Option<PathBuf>,
        /// Build the torus Gaussian with --n, --nu and --mu.
        #[arg(long, group = "source")]
        torus: bool,
        /// Free-group data JSON file {"n", "v", "alpha"}.
        #[arg(long, group = "source")]
        free_group: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        nu: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        mu: f64,
    },
    /// Compare the matrix conditions of a target with ideal vanishing.
    CheckGroup {
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        target: String,
        /// Size for the random sweep.
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Number of random specs to sweep.
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Decide centrality by the degree-two test and a commutator sweep.
    Central {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, default_value_t = 2)]
        cutoff: usize,
    },
    /// Character-moment table on o_plus or sp_plus.
    Centralize {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        target: Option<String>,
        #[arg(long, default_value_t = 3)]
        pmax: usize,
    },
    /// Character moments by direct summation and closed form.
    Moments {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, default_value_t = 2)]
        pmax: usize,
        /// Restrict to these patterns, e.g. "uu*".
        #[arg(long)]
        pattern: Vec<String>,
    },
    /// Lie bracket of two drifts through convolution.
    Bracket {
        /// JSON file {"H": matrix, "K": matrix}.
        #[arg(long)]
        pair: PathBuf,
    },
    /// Truncated convolution exponential.
    ConvExp {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        expr: String,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        t: f64,
        #[arg(long, default_value_t = 2)]
        order: usize,
    },
    /// Parse an expression and show its Hopf-algebra data.
    Parse {
        #[arg(long)]
        expr: String,
        #[arg(long, default_value = "u_plus")]
        target: String,
        #[arg(long)]
        n: usize,
    },
}

enum Failure {
    Usage(String),
    Rejected(String),
    /// Rejection that still produces a JSON report.
    RejectedReport(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_)
            | Error::Invalid(_)
            | Error::Shape { .. }
            | Error::GuardExceeded { .. }
            | Error::ForeignLetter { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Rejected(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<Value, Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn read_json(path: &Path) -> std::result::Result<Value, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_spec(arg: &SpecArg) -> std::result::Result<GaussianSpec, Failure> {
    Ok(spec_from_str(&read(&arg.spec)?)?)
}


fn element(f: &CookedFunctional, text: &str) -> std::result::Result<Element, Failure> {
    Ok(parse(text, f.alphabet()).map_err(Error::from)?)
}

fn target_of(name: &str, spec: Option<&GaussianSpec>, n: usize) -> std::result::Result<GroupTarget, Failure> {
    let size = spec.map(GaussianSpec::size);
    let n = match (name, size) {
        ("sp_plus", Some(m)) if m % 2 == 1 => {
            return Err(Failure::Usage(format!("sp_plus needs an even matrix size, spec has {m}")));
        }
        ("sp_plus", Some(m)) => m / 2,
        (_, Some(m)) => m,
        (_, None) => n,
    };
    Ok(GroupTarget::from_name(name, n)?)
}

fn moment_table_json(t: &MomentTable) -> Value {
    json!({
        "rows": t.rows.iter().map(|r| json!({"pattern": r.pattern.to_string(), "value": complex_to(r.value)})).collect::<Vec<_>>(),
        "c": t.c.map(complex_to),
        "reference": t.reference,
        "max_relative_deviation": t.max_relative_deviation,
    })
}

fn w_diagnostics(w: &TensorOperator, tol: f64) -> std::result::Result<Value, Failure> {
    let q = choi_form(w);
    let psd = psd_check(&q, tol)?;
    let kraus = if psd.is_psd { Some(kraus_extract(w, tol)?) } else { None };
    Ok(json!({
        "M_W": matrix_to(&mult_map(w)),
        "M_flip_W": matrix_to(&mult_map(&flip(w))),
        "flip_residual": w.max_abs_diff(&flip(w)),
        "choi": matrix_to(&q),
        "choi_min_eig": psd.min_eig,
        "psd": psd.is_psd,
        "kraus": kraus.map(|ls| ls.iter().map(matrix_to).collect::<Vec<_>>()),
    }))
}

fn execute(command: Command, tol: f64) -> Outcome {
    match command {
        Command::Validate(arg) => {
            let spec = load_spec(&arg)?;
            let report = validate(&spec, tol);
            if !report.passed() {
                return Err(Failure::RejectedReport(json!({
                    "valid": false,
                    "checks": checks_to(&report.checks),
                })));
            }
            let f = cook(&spec, tol)?;
            let first: serde_json::Map<String, Value> = f
                .alphabet()
                .letters()
                .into_iter()
                .map(|l| (l.to_string(), complex_to(f.phi_letter(l).expect("own letter"))))
                .collect();
            Ok(json!({
                "valid": true,
                "checks": checks_to(&report.checks),
                "dim": f.dim(),
                "first_order": first,
            }))
        }
        Command::Eval { spec, expr } => {
            let f = cook(&load_spec(&spec)?, tol)?;
            Ok(json!({"value": complex_to(eval_phi(&f, &element(&f, &expr)?)?)}))
        }
        Command::Cocycle { spec, expr, gram: want_gram } => {
            let f = cook(&load_spec(&spec)?, tol)?;
            let elems = expr.iter().map(|e| element(&f, e)).collect::<std::result::Result<Vec<_>, _>>()?;
            let etas = elems
                .iter()
                .map(|x| eval_eta(&f, x).map(|v| vector_to(&v)))
                .collect::<crate::Result<Vec<_>>>()?;
            let g = if want_gram { Some(matrix_to(&gram(&f, &elems, tol)?)) } else { None };
            Ok(json!({"eta": etas, "gram": g}))
        }
        Command::Coboundary { spec, expr } => {
            let f = cook(&load_spec(&spec)?, tol)?;
            let (a, b) = (element(&f, &expr[0])?, element(&f, &expr[1])?);
            Ok(json!({"value": complex_to(coboundary(&f, &a, &b)?)}))
        }
        Command::Decompose { spec, z } => {
            let spec = load_spec(&spec)?;
            validate(&spec, tol).into_result()?;
            let (w, h) = to_wh(&spec);
            let m = spec.size();
            let z = match z {
                Some(p) => matrix_from(&read_json(&p)?, "Z")?,
                None => ComplexMatrix::identity(m, m),
            };
            Ok(json!({
                "wh": wh_to_value(spec.target, &w, &h),
                "driftless": is_driftless(&spec, tol),
                "psi_z": matrix_to(&apply_cp_map(&w, &z)?),
            }))
        }
        Command::Compose { wh, torus, free_group, n, nu, mu } => {
            let spec = if let Some(p) = wh {
                let (target, w, h) = wh_from_value(&read_json(&p)?)?;
                from_wh(&w, &h, target, tol)?
            } else if let Some(p) = free_group {
                let (n, v, alpha) = free_group_from_value(&read_json(&p)?)?;
                from_free_group_data(n, &v, &alpha, tol)?
            } else if torus {
                let n = n.ok_or_else(|| Failure::Usage("--torus needs --n".into()))?;
                torus_gaussian(n, nu, mu)?
            } else {
                return Err(Failure::Usage("compose needs one of --wh, --torus, --free-group".into()));
            };
            let w = spec.w();
            Ok(json!({
                "spec": spec_to_value(&spec),
                "valid": validate(&spec, tol).passed(),
                "w": tensor_to(&w),
                "diagnostics": w_diagnostics(&w, tol)?,
            }))
        }
        Command::CheckGroup { spec, target, n, samples, seed } => {
            let spec = spec.map(|p| spec_from_str(&read(&p)?).map_err(Failure::from)).transpose()?;
            let target = target_of(&target, spec.as_ref(), n)?;
            let rel = relation_set(target);
            let mut out = json!({
                "target": target.to_string(),
                "relations": rel.y.iter().map(print).collect::<Vec<_>>(),
            });
            if let Some(spec) = &spec {
                let mc = matrix_conditions(spec, target, tol);
                let f = cook_matrix(spec, tol)?;
                let ideal = ideal_vanishing_check(&f, target, tol)?;
                out["matrix_conditions"] = checks_to(&mc.checks);
                out["matrix_pass"] = json!(mc.passed());
                out["ideal_pass"] = json!(ideal.pass);
                out["ideal_evaluations"] = json!(ideal.evaluations);
                out["ideal_max_residual"] = json!(ideal.max_residual);
                out["ideal_witness"] = json!(ideal.worst.as_ref().map(print));
                out["agree"] = json!(mc.passed() == ideal.pass);
            }
            if samples > 0 {
                let mut rng = sample::rng(seed);
                let (mut agree, mut passing) = (0, 0);
                for k in 0..samples {
                    let d = k % 3;
                    let s = match k % 3 {
                        0 => sample::target_valid(&mut rng, target, d + 1),
                        1 => {
                            let v = sample::target_valid(&mut rng, target, d);
                            sample::perturbed(&mut rng, &v, 0.3)
                        }
                        _ => sample::base_valid(&mut rng, target, d + 1),
                    };
                    let s = GaussianSpec { target: GroupTarget::UPlus(target.matrix_size()), ..s };
                    let mc = matrix_conditions(&s, target, tol).passed();
                    let iv = ideal_vanishing_check(&cook_matrix(&s, tol)?, target, tol)?.pass;
                    agree += usize::from(mc == iv);
                    passing += usize::from(mc);
                }
                out["sweep"] = json!({"samples": samples, "seed": seed, "agree": agree, "matrix_pass": passing});
            }
            Ok(out)
        }
        Command::Central { spec, cutoff } => {
            let f = cook(&load_spec(&spec)?, tol)?;
            let r = central_check(&WordFunctional::Gaussian(&f), f.alphabet(), cutoff, tol, DEFAULT_GUARD)?;
            Ok(json!({
                "central": r.central,
                "scalar_first_order": r.scalar_first_order,
                "max_commutator": r.max_commutator,
                "witness": r.witness.map(|(w, v)| json!({"word": w.to_string(), "v": v.to_string()})),
            }))
        }
        Command::Centralize { spec, target, pmax } => {
            let spec = load_spec(&spec)?;
            let name = target.unwrap_or_else(|| spec.target.name().to_string());
            let target = target_of(&name, Some(&spec), 0)?;
            Ok(moment_table_json(&centralize_table(&spec, target, pmax, tol)?))
        }
        Command::Moments { spec, pmax, pattern } => {
            let spec = load_spec(&spec)?;
            let f = cook(&spec, tol)?;
            let patterns: Vec<CharacterPattern> = if pattern.is_empty() {
                (1..=pmax).flat_map(CharacterPattern::all).collect()
            } else {
                pattern.iter().map(|p| p.parse()).collect::<crate::Result<_>>()?
            };
            let params = CentralParams::from_spec(&spec);
            let n = f.alphabet().size();
            let rows = patterns
                .iter()
                .map(|p| {
                    Ok(json!({
                        "pattern": p.to_string(),
                        "direct": complex_to(character_moment_direct(&f, p, DEFAULT_GUARD)?),
                        "closed": complex_to(character_moment_closed(&params, n, p)),
                    }))
                })
                .collect::<crate::Result<Vec<_>>>()?;
            Ok(json!({
                "params": {"trH": complex_to(params.tr_h), "trMW": params.tr_mw, "trtrW": params.trtr_w},
                "moments": rows,
            }))
        }
        Command::Bracket { pair } => {
            let v = read_json(&pair)?;
            let h = matrix_from(v.get("H").unwrap_or(&Value::Null), "H")?;
            let k = matrix_from(v.get("K").unwrap_or(&Value::Null), "K")?;
            if h.shape() != k.shape() {
                return Err(Error::shape("K", format!("{}x{}", h.nrows(), h.ncols()), format!("{}x{}", k.nrows(), k.ncols())).into());
            }
            let b = drift_bracket(&h, &k, tol, DEFAULT_GUARD)?;
            let comm = &h * &k - &k * &h;
            Ok(json!({
                "bracket": matrix_to(&b),
                "commutator": matrix_to(&comm),
                "max_deviation": max_abs_diff(&b, &comm),
            }))
        }
        Command::ConvExp { spec, expr, t, order } => {
            let f = cook(&load_spec(&spec)?, tol)?;
            let x = element(&f, &expr)?;
            let wf = WordFunctional::Gaussian(&f);
            let square = convolve(&wf, &wf, &x, f.coproduct_size(), DEFAULT_GUARD)?;
            Ok(json!({
                "value": complex_to(conv_exp(&f, &x, t, order, DEFAULT_GUARD)?),
                "phi_conv_phi": complex_to(square),
                "order": order,
                "t": t,
            }))
        }
        Command::Parse { expr, target, n } => {
            let target = GroupTarget::from_name(&target, n)?;
            let alphabet: Alphabet = target.alphabet();
            let x = parse(&expr, alphabet).map_err(Error::from)?;
            let cop = x.coproduct(alphabet.size(), DEFAULT_GUARD)?;
            Ok(json!({
                "element": print(&x),
                "counit": complex_to(x.counit()),
                "star": print(&x.star()),
                "antipode": print(&x.antipode()),
                "coproduct": cop.iter().map(|(l, r, c)| json!({"left": l.to_string(), "right": r.to_string(), "coeff": complex_to(*c)})).collect::<Vec<_>>(),
            }))
        }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let out_path = cli.out.clone();
    let (code, doc) = match execute(cli.command, cli.tol) {
        Ok(v) => (0, to_canonical_string(&v)),
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            return 1;
        }
        Err(Failure::Rejected(msg)) => {
            let _ = writeln!(stderr, "rejected: {msg}");
            return 2;
        }
        Err(Failure::RejectedReport(v)) => {
            let _ = writeln!(stderr, "rejected: validation failed");
            (2, to_canonical_string(&v))
        }
    };
    match out_path {
        Some(p) => {
            if let Err(e) = std::fs::write(&p, doc) {
                let _ = writeln!(stderr, "error: {}: {e}", p.display());
                return 1;
            }
        }
        None => {
            let _ = stdout.write_all(doc.as_bytes());
        }
    }
    code
}
