use std::str::FromStr;

use clap::Args;
use nilbohr::dynsim::{
    default_grid, multi_return_set, return_set, vandermonde_lambda, BoxNbhd, TorusState, TorusSystem,
};
use nilbohr::gp::{bohr_window, gp_simplify, BohrConstraint, BohrSpec};
use nilbohr::nilmatrix::{default_arith, nil_return_set, z1d_sequence};
use nilbohr::serial::{
    bigint_to_json, gp_to_json, lambda_to_json, nbhd_from_json, parse_expr_arg, parse_gapseq_arg, star_to_json,
    system_from_json,
};
use nilbohr::setfamilies::{
    banach_upper_density, common_diff_set, find_star_pattern, fs, intersective_witness, is_syndetic_window,
    ramsey_sg2_partition, sg_d, StarOrder,
};
use nilbohr::verify::Suite;
use nilbohr::{Arith, Rational, Scalar};
use serde_json::{json, Map, Value};

use crate::input::{parse_json, parse_scalars, parse_set, read_arg};
use crate::output::{diag, Sink};
use crate::{Command, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] nilbohr::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Input(String),
}

type Res<T> = Result<T, CliError>;

const DEFAULT_WINDOW: (i64, i64) = (0, 100);

#[derive(Args, Debug)]
pub struct GpEvalArgs {
    /// `lin:a`, `binom2:a`, `key:a1,..,ad`, a JSON tree, or `@file`.
    #[arg(long)]
    expr: String,
    /// Apply the one-step lemma rewrites first and print the result.
    #[arg(long)]
    simplify: bool,
}

#[derive(Args, Debug)]
pub struct BohrArgs {
    /// One expression per constraint.
    #[arg(long, required = true)]
    expr: Vec<String>,
    /// Radii: one per expression, or a single one shared by all.
    #[arg(long, required = true, num_args = 1..)]
    eps: Vec<String>,
}

#[derive(Args, Debug)]
pub struct NilReturnArgs {
    /// Superdiagonal entries α₁..α_d.
    #[arg(long, required = true, num_args = 1.., allow_negative_numbers = true)]
    alpha: Vec<String>,
    /// Box radius, at most 1/2.
    #[arg(long)]
    eta: String,
}

#[derive(Args, Debug)]
pub struct Z1dArgs {
    #[arg(long, required = true, num_args = 1.., allow_negative_numbers = true)]
    alpha: Vec<String>,
}

#[derive(Args, Debug)]
pub struct SgdArgs {
    /// Comma-separated integers or `pow:b,m`.
    #[arg(long)]
    seq: String,
    /// Gaps between chosen indices are shorter than d.
    #[arg(long, default_value_t = 1)]
    d: usize,
}

#[derive(Args, Debug)]
pub struct FsArgs {
    #[arg(long)]
    seq: String,
}

#[derive(Args, Debug)]
pub struct CdiffArgs {
    /// Window set as JSON, `@file`, `-`, or a member list within --window.
    #[arg(long)]
    set: String,
    #[arg(long, default_value_t = 1)]
    d: usize,
}

#[derive(Args, Debug)]
pub struct SyndeticArgs {
    #[arg(long)]
    set: String,
    /// Every run of this many consecutive integers must meet the set.
    #[arg(long)]
    gap: u64,
}

#[derive(Args, Debug)]
pub struct DensityArgs {
    #[arg(long)]
    set: String,
    /// Interval length used for the sup.
    #[arg(long)]
    len: u64,
}

#[derive(Args, Debug)]
pub struct IntersectArgs {
    #[arg(long)]
    p: String,
    #[arg(long)]
    f: String,
    #[arg(long, default_value_t = 1)]
    d: usize,
    /// Largest |n_i| searched.
    #[arg(long, default_value_t = 20)]
    bound: u64,
}

#[derive(Args, Debug)]
pub struct RamseyArgs {
    #[arg(long, default_value = "pow:3,8")]
    seq: String,
    /// Require a₁ < a₂ < a₃ instead of a₁ ≤ a₂ ≤ a₃.
    #[arg(long)]
    strict: bool,
}

#[derive(Args, Debug)]
pub struct TorusReturnArgs {
    /// System as JSON `{"d":..,"alpha":..}`; overrides --d and --alpha.
    #[arg(long)]
    system: Option<String>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<String>,
    /// Starting point, comma-separated (origin by default).
    #[arg(long)]
    x0: Option<String>,
    /// Box radii around the origin: one per coordinate or a single one.
    #[arg(long, num_args = 1..)]
    eps: Vec<String>,
    /// Neighborhood as JSON `{"center":[..],"radii":[..]}`; overrides --eps.
    #[arg(long)]
    nbhd: Option<String>,
}

#[derive(Args, Debug)]
pub struct MultiReturnArgs {
    #[arg(long)]
    d: usize,
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    /// Half-width of the cube around the origin.
    #[arg(long)]
    eps: f64,
    /// Number of returns required (n, 2n, ..).
    #[arg(long, default_value_t = 2)]
    rec: usize,
    /// Grid points per dimension (512 for d ≤ 2, 64 above, by default).
    #[arg(long)]
    grid: Option<usize>,
    /// Also print one witness point per member.
    #[arg(long)]
    witnesses: bool,
}

#[derive(Args, Debug)]
pub struct LambdaArgs {
    #[arg(long)]
    d: usize,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Suite name or number, or `all`.
    suite: String,
}

pub fn run(cmd: &Command, cfg: &RunConfig) -> Res<bool> {
    let mut sink = Sink::new(cfg.format);
    let ok = match cmd {
        Command::GpEval(a) => dispatch(cfg, Arith::Exact, |s| gp_eval_cmd::<Rational>(a, cfg, s), |s| gp_eval_cmd::<f64>(a, cfg, s), &mut sink)?,
        Command::Bohr(a) => dispatch(cfg, Arith::Exact, |s| bohr_cmd::<Rational>(a, cfg, s), |s| bohr_cmd::<f64>(a, cfg, s), &mut sink)?,
        Command::NilReturn(a) => {
            let (lo, hi) = cfg.window_or(DEFAULT_WINDOW.0, DEFAULT_WINDOW.1);
            let d = parse_scalars::<f64>(&a.alpha)?.len();
            dispatch(cfg, default_arith(d, lo, hi), |s| nil_return_cmd::<Rational>(a, cfg, s), |s| nil_return_cmd::<f64>(a, cfg, s), &mut sink)?
        }
        Command::Z1d(a) => {
            let (lo, hi) = cfg.window_or(DEFAULT_WINDOW.0, DEFAULT_WINDOW.1);
            let d = parse_scalars::<f64>(&a.alpha)?.len();
            dispatch(cfg, default_arith(d, lo, hi), |s| z1d_cmd::<Rational>(a, cfg, s), |s| z1d_cmd::<f64>(a, cfg, s), &mut sink)?
        }
        Command::Sgd(a) => {
            let values = sg_d(&parse_gapseq_arg(&read_arg(&a.seq)?)?, a.d)?;
            let mut head = Map::new();
            head.insert("d".into(), json!(a.d));
            head.insert("count".into(), json!(values.len()));
            sink.list(head, "values", values.iter().map(bigint_to_json).collect())?;
            true
        }
        Command::Fs(a) => {
            let values = fs(&parse_gapseq_arg(&read_arg(&a.seq)?)?)?;
            let mut head = Map::new();
            head.insert("count".into(), json!(values.len()));
            sink.list(head, "values", values.iter().map(bigint_to_json).collect())?;
            true
        }
        Command::Cdiff(a) => {
            let s = parse_set(&a.set, cfg.window)?;
            sink.set(&common_diff_set(&s, a.d)?)?;
            true
        }
        Command::Syndetic(a) => {
            let s = parse_set(&a.set, cfg.window)?;
            let syndetic = is_syndetic_window(&s, a.gap)?;
            sink.record(json!({ "gap": a.gap, "syndetic": syndetic }))?;
            true
        }
        Command::Density(a) => {
            let s = parse_set(&a.set, cfg.window)?;
            let density = banach_upper_density(&s, a.len)?;
            sink.record(json!({ "len": a.len, "density": density }))?;
            true
        }
        Command::Intersect(a) => {
            let p = parse_set(&a.p, cfg.window)?;
            let f = parse_set(&a.f, cfg.window)?;
            let rec = match intersective_witness(&p, &f, a.d, a.bound)? {
                Some(w) => json!({ "found": true, "a": w.a, "ns": w.ns }),
                None => json!({ "found": false, "a": null, "ns": null }),
            };
            sink.record(rec)?;
            true
        }
        Command::RamseyCheck(a) => {
            let p = parse_gapseq_arg(&read_arg(&a.seq)?)?;
            let order = if a.strict { StarOrder::Strict } else { StarOrder::Weak };
            let part = ramsey_sg2_partition(&p)?;
            let blocks = [&part.b0, &part.b1, &part.b2];
            let in_blocks: Vec<Value> = blocks.iter().map(|b| star_to_json(&find_star_pattern(b, order))).collect();
            let whole = find_star_pattern(&sg_d(&p, 2)?, order);
            sink.record(json!({
                "lacunary": true,
                "sizes": blocks.iter().map(|b| b.len()).collect::<Vec<_>>(),
                "star_in_blocks": in_blocks,
                "star_in_sg2": star_to_json(&whole),
            }))?;
            true
        }
        Command::TorusReturn(a) => dispatch(cfg, Arith::Exact, |s| torus_return_cmd::<Rational>(a, cfg, s), |s| torus_return_cmd::<f64>(a, cfg, s), &mut sink)?,
        Command::MultiReturn(a) => {
            multi_return_cmd(a, cfg, &mut sink)?;
            true
        }
        Command::Lambda(a) => {
            sink.record(lambda_to_json(&vandermonde_lambda(a.d)?))?;
            true
        }
        Command::Verify(a) => verify_cmd(a, cfg, &mut sink)?,
    };
    sink.finish()?;
    Ok(ok)
}

fn dispatch(
    cfg: &RunConfig,
    default: Arith,
    exact: impl FnOnce(&mut Sink) -> Res<()>,
    float: impl FnOnce(&mut Sink) -> Res<()>,
    sink: &mut Sink,
) -> Res<bool> {
    match cfg.arith_or(default) {
        Arith::Exact => exact(sink)?,
        Arith::Float => float(sink)?,
    }
    Ok(true)
}

fn gp_eval_cmd<S: Scalar>(a: &GpEvalArgs, cfg: &RunConfig, sink: &mut Sink) -> Res<()> {
    let mut e = parse_expr_arg::<S>(&read_arg(&a.expr)?)?;
    if a.simplify {
        e = gp_simplify(&e);
        sink.record(json!({ "simplified": gp_to_json(&e) }))?;
    }
    let (lo, hi) = cfg.window_or(DEFAULT_WINDOW.0, DEFAULT_WINDOW.1);
    for n in lo..=hi {
        let r = e.eval(n, cfg.guard)?;
        if r.ambiguous {
            diag(&format!("boundary-ambiguous n={n}"));
        }
        sink.record(json!({ "n": n, "value": r.value.to_json() }))?;
    }
    Ok(())
}

fn bohr_cmd<S: Scalar>(a: &BohrArgs, cfg: &RunConfig, sink: &mut Sink) -> Res<()> {
    let exprs = a
        .expr
        .iter()
        .map(|e| Ok(parse_expr_arg::<S>(&read_arg(e)?)?))
        .collect::<Res<Vec<_>>>()?;
    let eps = parse_scalars::<S>(&a.eps)?;
    let eps = match eps.len() {
        1 => vec![eps[0].clone(); exprs.len()],
        n if n == exprs.len() => eps,
        n => return Err(CliError::Input(format!("{n} radii for {} expressions", exprs.len()))),
    };
    let constraints = exprs
        .into_iter()
        .zip(eps)
        .map(|(expr, eps)| BohrConstraint { expr, eps })
        .collect();
    let (lo, hi) = cfg.window_or(DEFAULT_WINDOW.0, DEFAULT_WINDOW.1);
    sink.set(&bohr_window(&BohrSpec::new(constraints, lo, hi)?, cfg.guard)?)?;
    Ok(())
}

fn nil_return_cmd<S: Scalar>(a: &NilReturnArgs, cfg: &RunConfig, sink: &mut Sink) -> Res<()> {
    let alphas = parse_scalars::<S>(&a.alpha)?;
    let eta = S::parse(&a.eta)?;
    let (lo, hi) = cfg.window_or(DEFAULT_WINDOW.0, DEFAULT_WINDOW.1);
    sink.set(&nil_return_set(&alphas, &eta, lo, hi, cfg.guard)?)?;
    Ok(())
}

fn z1d_cmd<S: Scalar>(a: &Z1dArgs, cfg: &RunConfig, sink: &mut Sink) -> Res<()> {
    let alphas = parse_scalars::<S>(&a.alpha)?;
    let (lo, hi) = cfg.window_or(DEFAULT_WINDOW.0, DEFAULT_WINDOW.1);
    for p in z1d_sequence(&alphas, lo, hi, cfg.guard)? {
        if p.ambiguous {
            diag(&format!("boundary-ambiguous n={}", p.n));
        }
        sink.record(json!({ "n": p.n, "value": p.value.to_json() }))?;
    }
    Ok(())
}

fn torus_return_cmd<S: Scalar>(a: &TorusReturnArgs, cfg: &RunConfig, sink: &mut Sink) -> Res<()> {
    let sys: TorusSystem<S> = match &a.system {
        Some(text) => system_from_json(&parse_json(text, "system")?)?,
        None => {
            let d = a.d.ok_or_else(|| CliError::Input("--d or --system required".into()))?;
            let alpha = a.alpha.as_deref().ok_or_else(|| CliError::Input("--alpha or --system required".into()))?;
            TorusSystem::new(d, S::parse(alpha)?)?
        }
    };
    let d = sys.dim();
    let x0 = match &a.x0 {
        Some(text) => TorusState::new(parse_scalars::<S>(std::slice::from_ref(text))?)?,
        None => TorusState::origin(d),
    };
    let u: BoxNbhd<S> = match &a.nbhd {
        Some(text) => nbhd_from_json(&parse_json(text, "neighborhood")?)?,
        None => {
            let eps = parse_scalars::<S>(&a.eps)?;
            let radii = match eps.len() {
                0 => return Err(CliError::Input("--eps or --nbhd required".into())),
                1 => vec![eps[0].clone(); d],
                _ => eps,
            };
            BoxNbhd::new(TorusState::origin(d), radii)?
        }
    };
    let (lo, hi) = cfg.window_or(DEFAULT_WINDOW.0, DEFAULT_WINDOW.1);
    sink.set(&return_set(&sys, &x0, &u, lo, hi)?)?;
    Ok(())
}

fn multi_return_cmd(a: &MultiReturnArgs, cfg: &RunConfig, sink: &mut Sink) -> Res<()> {
    if cfg.arith == Some(Arith::Exact) {
        return Err(CliError::Input("multi-return runs in float arithmetic only".into()));
    }
    let sys = TorusSystem::new(a.d, a.alpha)?;
    let u = BoxNbhd::cube(a.d, a.eps)?;
    let (lo, hi) = cfg.window_or(DEFAULT_WINDOW.0, DEFAULT_WINDOW.1);
    let grid = a.grid.unwrap_or_else(|| default_grid(a.d));
    let mr = multi_return_set(&sys, &u, a.rec, lo, hi, grid)?;
    sink.set(&mr.set)?;
    if a.witnesses {
        for (n, w) in &mr.witnesses {
            sink.record(json!({ "n": n, "witness": w.coords() }))?;
        }
    }
    Ok(())
}

fn verify_cmd(a: &VerifyArgs, cfg: &RunConfig, sink: &mut Sink) -> Res<bool> {
    let suites: Vec<Suite> = if a.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![Suite::from_str(&a.suite)?]
    };
    let mut all = true;
    for suite in suites {
        let r = suite.run(cfg.seed);
        diag(&r.to_string());
        all &= r.passed;
        sink.record(json!({
            "suite": suite.name(),
            "number": suite.number(),
            "passed": r.passed,
            "detail": r.detail,
        }))?;
    }
    Ok(all)
}
