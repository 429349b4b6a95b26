use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::Value;

use radon_core::arithmetic::{
    build_denominator_set, build_un, decompose_o_property, o_property_check, partition_bound, partition_family,
    RATIONAL_BUDGET,
};
use radon_core::expsums::{
    approx_error, gauss_decay_table, gauss_sum, multiplier_for_mapping, multiplier_m, phi, weyl_log_decay_experiment,
    weyl_sum, ApproxWindow, FixedQuadratic, MinorArcQuadratic, PhaseBuilder, RationalPoint, WeylPhase, ZeroPhase,
};
use radon_core::geometry::{boundary_near_count, davenport_residual, lattice_points, ConvexBody};
use radon_core::kernels::{dyadic_decompose_kernel, kernel_by_name, CzKernel, DyadicKernelPiece};
use radon_core::lattice::{FunctionFamily, LatticeFunction, MappingSpec, MultiIndexSet, PolynomialMapping};
use radon_core::maximal::{dyadic_interval_decomposition, rm_audit};
use radon_core::operators::{dyadic_grid, maximal, norm_ratio_experiment, delta_family, Operator};
use radon_core::table::{emit_table, write_atomic, Cell, Table, TableFormat};
use radon_core::verify::run_suite;
use radon_core::Error;

#[derive(Parser, Debug)]
#[command(
    name = "radon",
    version,
    about = "Discrete Radon operators, exponential sums and maximal estimates",
    args_conflicts_with_subcommands = true
)]
struct Cli {
    /// Run from a JSON config `{"experiment": ..., "params": {...}, "output": ..., "format": ...}`.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Apply one operator at one scale.
    Apply(ApplyArgs),
    /// Pointwise maximal function over a grid of scales.
    Maximal(MaximalArgs),
    /// ℓ^p(ℓ²) norm ratio of the maximal function for a family.
    Normratio(NormRatioArgs),
    /// Weyl sum over a lattice region.
    Weyl(WeylArgs),
    /// Gauss sums, or the decay table of their maxima.
    Gauss(GaussArgs),
    /// The discrete multiplier m_N.
    Multiplier(MultiplierArgs),
    /// The continuous multiplier Φ_N.
    Phi(PhiArgs),
    /// Major-arc approximation error.
    Approx(ApproxArgs),
    /// Logarithmic decay of Weyl sums along a grid.
    WeylDecay(WeylDecayArgs),
    /// Ionescu–Wainger denominator and rational sets.
    Un(UnArgs),
    /// Covering partition family.
    Partition(PartitionArgs),
    /// O-property decomposition of Π(V).
    Odecomp(OdecompArgs),
    /// Rademacher–Menshov audit or a dyadic interval decomposition.
    Rm(RmArgs),
    /// Lattice-point and boundary counts for a convex body.
    Lattice(LatticeArgs),
    /// Run the acceptance suite.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct Out {
    /// Output file; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: TableFormat,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Kind {
    #[value(alias = "average")]
    Avg,
    #[value(alias = "truncated")]
    Trunc,
    #[value(alias = "dyadic-sum")]
    Dyadic,
}

#[derive(Args, Debug)]
struct OpArgs {
    #[arg(long, value_enum, default_value = "avg")]
    kind: Kind,
    /// JSON file, inline JSON, `moment:<d>` or `identity:<k>`.
    #[arg(long, default_value = "moment:2")]
    mapping: String,
    /// `hilbert` or `riesz-<i>`.
    #[arg(long, default_value = "hilbert")]
    kernel: String,
}

#[derive(Args, Debug)]
struct ApplyArgs {
    #[command(flatten)]
    op: OpArgs,
    /// Scale `N`, or the top dyadic index for `--kind dyadic`.
    #[arg(long = "N")]
    n: u64,
    /// Lattice function as JSON file, or `delta:<x1>,<x2>,…`.
    #[arg(long)]
    input: String,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MaximalArgs {
    #[command(flatten)]
    op: OpArgs,
    /// `dyadic:<nmax>` or a comma list.
    #[arg(long, default_value = "dyadic:6")]
    grid: String,
    #[arg(long)]
    input: String,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct NormRatioArgs {
    #[command(flatten)]
    op: OpArgs,
    /// Exponents, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "2")]
    p: Vec<f64>,
    #[arg(long, default_value = "dyadic:8")]
    grid: String,
    /// `deltas:<count>` or a JSON family file.
    #[arg(long, default_value = "deltas:1")]
    family: String,
    #[command(flatten)]
    out: Out,
}

#[derive(Args, Debug)]
struct WeylArgs {
    #[arg(long, default_value = "1")]
    k: usize,
    /// Terms `e1;e2=value`; values are numerators when `--q` is given.
    #[arg(long = "term", required = true)]
    terms: Vec<String>,
    #[arg(long)]
    q: Option<u64>,
    /// Region, e.g. `box:lo=1,hi=1000` or `ball:r=50,k=2`.
    #[arg(long)]
    body: String,
    #[command(flatten)]
    out: Out,
}

#[derive(Args, Debug)]
struct GaussArgs {
    /// Degree of the moment curve when `--gamma` is absent.
    #[arg(long, default_value = "2")]
    d: u32,
    /// `k,N0` for the canonical mapping.
    #[arg(long)]
    gamma: Option<String>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    a: Vec<u64>,
    /// Emit `max_a |G(a/q)|` for `q ≤ qmax` on the moment curve.
    #[arg(long)]
    table: bool,
    #[arg(long, default_value = "100")]
    qmax: u64,
    #[arg(long, default_value = "0.05")]
    slack: f64,
    #[command(flatten)]
    out: Out,
}

#[derive(Args, Debug)]
struct MultiplierArgs {
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    xi: Vec<f64>,
    #[arg(long = "N")]
    n: u64,
    #[arg(long, default_value = "1,2")]
    gamma: String,
    /// Use a general mapping instead of the canonical one.
    #[arg(long)]
    mapping: Option<String>,
    #[command(flatten)]
    out: Out,
}

#[derive(Args, Debug)]
struct PhiArgs {
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    xi: Vec<f64>,
    #[arg(long = "N")]
    n: f64,
    #[arg(long, default_value = "1,2")]
    gamma: String,
    #[command(flatten)]
    out: Out,
}

#[derive(Args, Debug)]
struct ApproxArgs {
    #[arg(long, value_delimiter = ',')]
    a: Vec<u64>,
    #[arg(long)]
    q: u64,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    xi: Vec<f64>,
    #[arg(long = "N")]
    n: u64,
    #[arg(long, default_value = "1,1")]
    gamma: String,
    #[arg(long)]
    l1: Option<f64>,
    #[arg(long, default_value = "1")]
    l2: f64,
    #[arg(long)]
    l3: Option<f64>,
    #[command(flatten)]
    out: Out,
}

#[derive(Args, Debug)]
struct WeylDecayArgs {
    /// `minor:<beta>`, `fixed:<a>/<q>` or `zero`.
    #[arg(long, default_value = "minor:2")]
    builder: String,
    #[arg(long, default_value = "1")]
    alpha: f64,
    #[arg(long, default_value = "1024,4096,16384,65536")]
    grid: String,
    #[command(flatten)]
    out: Out,
}

#[derive(Args, Debug)]
struct UnArgs {
    #[arg(long = "N")]
    n: u64,
    #[arg(long)]
    rho: f64,
    /// List every member of `P_N`.
    #[arg(long)]
    list: bool,
    /// Also build `U_N` for the canonical mapping `k,N0`.
    #[arg(long)]
    gamma: Option<String>,
    #[command(flatten)]
    out: Out,
}

#[derive(Args, Debug)]
struct PartitionArgs {
    #[arg(long = "N")]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value = "0")]
    seed: u64,
    #[command(flatten)]
    out: Out,
}

#[derive(Args, Debug)]
struct OdecompArgs {
    #[arg(long, value_delimiter = ',')]
    primes: Vec<u64>,
    #[arg(long = "D")]
    d: u32,
    #[arg(long, default_value = "0")]
    seed: u64,
    #[command(flatten)]
    out: Out,
}

#[derive(Args, Debug)]
struct RmArgs {
    /// Audit the inequality on random sequences.
    #[arg(long)]
    check: bool,
    #[arg(long, default_value = "8")]
    s: u32,
    #[arg(long, default_value = "1000")]
    trials: usize,
    #[arg(long, default_value = "0")]
    seed: u64,
    /// Decompose `[m, n)` instead.
    #[arg(long, value_delimiter = ',')]
    interval: Option<Vec<u64>>,
    #[command(flatten)]
    out: Out,
}

#[derive(Args, Debug)]
struct LatticeArgs {
    #[arg(long)]
    body: String,
    #[arg(long, default_value = "1")]
    s: f64,
    #[arg(long, default_value = "0")]
    sigma: f64,
    #[command(flatten)]
    out: Out,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// `all` or a comma list of criterion ids.
    #[arg(long, value_delimiter = ',', default_value = "all")]
    suite: Vec<String>,
    #[arg(long, default_value = "7")]
    seed: u64,
    #[arg(long, default_value = "radon_summary.json")]
    output: PathBuf,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExperimentConfig {
    experiment: String,
    #[serde(default)]
    params: BTreeMap<String, Value>,
    #[serde(default)]
    output: Option<String>,
    #[serde(default)]
    format: Option<String>,
}

/// Failure modes mapped onto exit codes.
enum Fail {
    /// Bad configuration or input (exit 2).
    Config(String),
    /// A checked property did not hold (exit 1).
    Check(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::Quadrature { .. } | Error::RetryLimit(_) | Error::Evaluation(_) => Fail::Check(e.to_string()),
            _ => Fail::Config(e.to_string()),
        }
    }
}

type Res<T> = std::result::Result<T, Fail>;

fn cfg<T>(r: std::result::Result<T, impl std::fmt::Display>) -> Res<T> {
    r.map_err(|e| Fail::Config(e.to_string()))
}

fn config_argv(path: &Path) -> Res<Vec<String>> {
    let text = cfg(std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display())))?;
    let c: ExperimentConfig = cfg(serde_json::from_str(&text))?;
    let mut argv = vec!["radon".to_string(), c.experiment];
    let mut push = |key: &str, v: &Value| -> Res<()> {
        let flag = format!("--{key}");
        match v {
            Value::Bool(true) => argv.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::Array(items) => {
                let parts: Vec<String> = items.iter().map(scalar).collect::<Res<_>>()?;
                argv.push(flag);
                argv.push(parts.join(","));
            }
            other => {
                argv.push(flag);
                argv.push(scalar(other)?);
            }
        }
        Ok(())
    };
    for (k, v) in &c.params {
        push(k, v)?;
    }
    if let Some(o) = c.output {
        push("output", &Value::String(o))?;
    }
    if let Some(f) = c.format {
        push("format", &Value::String(f))?;
    }
    Ok(argv)
}

fn scalar(v: &Value) -> Res<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        Value::Bool(b) => Ok(b.to_string()),
        _ => Err(Fail::Config(format!("unsupported config value {v}"))),
    }
}

fn load_mapping(spec: &str) -> Res<PolynomialMapping> {
    if let Some(d) = spec.strip_prefix("moment:") {
        return Ok(PolynomialMapping::moment_curve(cfg(d.parse())?)?);
    }
    if let Some(k) = spec.strip_prefix("identity:") {
        return Ok(PolynomialMapping::identity(cfg(k.parse())?)?);
    }
    let text = if spec.trim_start().starts_with('{') {
        spec.to_string()
    } else {
        cfg(std::fs::read_to_string(spec).map_err(|e| format!("{spec}: {e}")))?
    };
    let m: MappingSpec = cfg(serde_json::from_str(&text))?;
    Ok(PolynomialMapping::from_spec(&m)?)
}

fn load_function(spec: &str) -> Res<LatticeFunction> {
    if let Some(x) = spec.strip_prefix("delta:") {
        let at: Vec<i64> = cfg(x.split(',').map(|v| v.trim().parse::<i64>()).collect())?;
        return Ok(LatticeFunction::delta(at));
    }
    let text = cfg(std::fs::read_to_string(spec).map_err(|e| format!("{spec}: {e}")))?;
    Ok(LatticeFunction::from_json(&text)?)
}

fn parse_gamma(s: &str) -> Res<MultiIndexSet> {
    let v: Vec<u32> = cfg(s.split(',').map(|x| x.trim().parse::<u32>()).collect())?;
    match v.as_slice() {
        [k, n0] => Ok(MultiIndexSet::new(*k as usize, *n0)?),
        _ => Err(Fail::Config(format!("expected `k,N0`, got {s:?}"))),
    }
}

fn parse_grid(s: &str) -> Res<Vec<u64>> {
    if let Some(n) = s.strip_prefix("dyadic:") {
        return Ok(dyadic_grid(cfg(n.parse())?));
    }
    cfg(s.split(',').map(|x| x.trim().parse::<u64>()).collect())
}

/// Kernel and, for dyadic sums, its pieces up to `jmax`.
struct OpSetup {
    kernel: Arc<dyn CzKernel>,
    pieces: Vec<DyadicKernelPiece>,
}

impl OpSetup {
    fn new(op: &OpArgs, p: &PolynomialMapping, jmax: u64) -> Res<Self> {
        let kernel = kernel_by_name(&op.kernel, p.k())?;
        let pieces = match op.kind {
            Kind::Dyadic => dyadic_decompose_kernel(kernel.clone(), jmax.max(1) as u32)?,
            _ => Vec::new(),
        };
        Ok(Self { kernel, pieces })
    }

    fn operator(&self, kind: Kind) -> Operator<'_> {
        match kind {
            Kind::Avg => Operator::Average,
            Kind::Trunc => Operator::Truncated(self.kernel.as_ref()),
            Kind::Dyadic => Operator::DyadicSum(&self.pieces),
        }
    }
}

fn write_text(path: Option<&Path>, text: &str) -> Res<()> {
    match path {
        Some(p) => Ok(write_atomic(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit(t: &Table, out: &Out) -> Res<()> {
    match &out.output {
        Some(p) => Ok(emit_table(t, out.format, p)?),
        None => write_text(None, &t.render(out.format)?),
    }
}

fn complex_row(z: Complex64) -> Vec<Cell> {
    vec![z.re.into(), z.im.into(), z.norm().into()]
}

fn run(cmd: Command) -> Res<()> {
    match cmd {
        Command::Apply(a) => {
            let p = load_mapping(&a.op.mapping)?;
            let f = load_function(&a.input)?;
            let setup = OpSetup::new(&a.op, &p, a.n)?;
            let g = setup.operator(a.op.kind).apply(&f, &p, a.n)?.function;
            write_text(a.output.as_deref(), &(g.to_json_pretty() + "\n"))
        }
        Command::Maximal(a) => {
            let p = load_mapping(&a.op.mapping)?;
            let f = load_function(&a.input)?;
            let grid = parse_grid(&a.grid)?;
            let setup = OpSetup::new(&a.op, &p, grid.last().copied().unwrap_or(1))?;
            let g = maximal(&f, &p, setup.operator(a.op.kind), &grid)?;
            write_text(a.output.as_deref(), &(g.to_json_pretty() + "\n"))
        }
        Command::Normratio(a) => {
            let p = load_mapping(&a.op.mapping)?;
            let grid = parse_grid(&a.grid)?;
            let family = match a.family.strip_prefix("deltas:") {
                Some(c) => delta_family(p.d0(), cfg(c.parse())?)?,
                None => FunctionFamily::from_json(&cfg(std::fs::read_to_string(&a.family))?)?,
            };
            let setup = OpSetup::new(&a.op, &p, grid.last().copied().unwrap_or(1))?;
            let mut t = Table::new(&["kind", "p", "family_size", "n_max", "numerator", "denominator", "ratio"]);
            for &exponent in &a.p {
                let rep = norm_ratio_experiment(&family, &p, setup.operator(a.op.kind), exponent, &grid)?;
                let last = rep.per_n.last().map(|r| (r.n, r.numerator)).unwrap_or((0, 0.0));
                t.push(vec![
                    rep.kind.to_string().into(),
                    exponent.into(),
                    rep.family_size.into(),
                    last.0.into(),
                    last.1.into(),
                    rep.denominator.into(),
                    rep.ratio.into(),
                ])?;
            }
            emit(&t, &a.out)
        }
        Command::Weyl(a) => {
            let mut real = Vec::new();
            let mut rational = Vec::new();
            for term in &a.terms {
                let (e, v) = term.split_once('=').ok_or_else(|| Fail::Config(format!("term {term:?} needs `=`")))?;
                let exp: Vec<u32> = cfg(e.split(';').map(|x| x.trim().parse::<u32>()).collect())?;
                match a.q {
                    Some(_) => rational.push((exp, cfg(v.trim().parse::<i64>())?)),
                    None => real.push((exp, cfg(v.trim().parse::<f64>())?)),
                }
            }
            let phase = match a.q {
                Some(q) => WeylPhase::rational(a.k, rational, q)?,
                None => WeylPhase::real(a.k, real)?,
            };
            let body = ConvexBody::parse(&a.body)?;
            let s = weyl_sum(&phase, &body, None)?;
            let count = lattice_points(&body, false)?.count;
            let mut t = Table::new(&["re", "im", "abs", "points", "normalized"]);
            let mut row = complex_row(s);
            row.push(count.into());
            row.push((s.norm() / count.max(1) as f64).into());
            t.push(row)?;
            emit(&t, &a.out)
        }
        Command::Gauss(a) => {
            if a.table {
                let mut t = Table::new(&["q", "max_abs", "surrogate", "scaled", "within"]);
                for r in gauss_decay_table(a.qmax, a.d, a.slack)? {
                    let ok = r.max_abs <= r.surrogate + 1e-12;
                    t.push(vec![r.q.into(), r.max_abs.into(), r.surrogate.into(), r.scaled.into(), ok.into()])?;
                }
                return emit(&t, &a.out);
            }
            let gamma = match &a.gamma {
                Some(g) => parse_gamma(g)?,
                None => MultiIndexSet::new(1, a.d)?,
            };
            let q = a.q.ok_or_else(|| Fail::Config("--q is required unless --table".into()))?;
            let g = gauss_sum(&RationalPoint::new(a.a.clone(), q)?, &gamma)?;
            let mut t = Table::new(&["q", "re", "im", "abs"]);
            let mut row = vec![q.into()];
            row.extend(complex_row(g));
            t.push(row)?;
            emit(&t, &a.out)
        }
        Command::Multiplier(a) => {
            let m = match &a.mapping {
                Some(spec) => multiplier_for_mapping(&a.xi, a.n, &load_mapping(spec)?)?,
                None => multiplier_m(&a.xi, a.n, &parse_gamma(&a.gamma)?)?,
            };
            let mut t = Table::new(&["re", "im", "abs"]);
            t.push(complex_row(m))?;
            emit(&t, &a.out)
        }
        Command::Phi(a) => {
            let v = phi(&a.xi, a.n, &parse_gamma(&a.gamma)?)?;
            let mut t = Table::new(&["re", "im", "abs"]);
            t.push(complex_row(v))?;
            emit(&t, &a.out)
        }
        Command::Approx(a) => {
            let gamma = parse_gamma(&a.gamma)?;
            let w = ApproxWindow { l1: a.l1.unwrap_or(a.n as f64), l2: a.l2, l3: a.l3.unwrap_or(a.q as f64) };
            let r = approx_error(&RationalPoint::new(a.a.clone(), a.q)?, &a.xi, a.n, &gamma, &w)?;
            let mut t = Table::new(&["n", "q", "error", "bound_shape", "gauss_abs", "multiplier_abs", "phi_abs"]);
            t.push(vec![
                r.n.into(),
                r.q.into(),
                r.error.into(),
                r.bound_shape.into(),
                r.gauss.norm().into(),
                r.multiplier.norm().into(),
                r.phi.norm().into(),
            ])?;
            emit(&t, &a.out)
        }
        Command::WeylDecay(a) => {
            let builder: Box<dyn PhaseBuilder> = if let Some(b) = a.builder.strip_prefix("minor:") {
                Box::new(MinorArcQuadratic { beta: cfg(b.parse())? })
            } else if let Some(f) = a.builder.strip_prefix("fixed:") {
                let (num, den) = f.split_once('/').ok_or_else(|| Fail::Config("fixed:<a>/<q>".into()))?;
                Box::new(FixedQuadratic { a: cfg(num.parse())?, q: cfg(den.parse())? })
            } else if a.builder == "zero" {
                Box::new(ZeroPhase { k: 1 })
            } else {
                return Err(Fail::Config(format!("unknown builder {:?}", a.builder)));
            };
            let grid = parse_grid(&a.grid)?;
            let rows = weyl_log_decay_experiment(&[2], a.alpha, &grid, builder.as_ref())?;
            let mut t = Table::new(&[
                "n",
                "q",
                "a",
                "abs_sum",
                "normalized",
                "bound",
                "beta_alpha",
                "alpha_window_nonempty",
                "builder_window_ok",
            ]);
            for r in rows {
                t.push(vec![
                    r.n.into(),
                    r.q.into(),
                    r.a.into(),
                    r.abs_sum.into(),
                    r.normalized.into(),
                    r.bound.into(),
                    r.beta_alpha.into(),
                    r.alpha_window_nonempty.into(),
                    r.builder_window_ok.into(),
                ])?;
            }
            emit(&t, &a.out)
        }
        Command::Un(a) => {
            let set = build_denominator_set(a.n, a.rho)?;
            if a.list {
                let mut t = Table::new(&["q", "big_q", "w"]);
                let mut members: Vec<_> = set.members().collect();
                members.sort();
                for q in members {
                    let (bq, w) = set.unique_factorization(&q)?;
                    t.push(vec![q.to_string().into(), bq.to_string().into(), w.to_string().into()])?;
                }
                return emit(&t, &a.out);
            }
            let rationals = match &a.gamma {
                Some(g) => Some(build_un(&set, &parse_gamma(g)?, RATIONAL_BUDGET)?.len()),
                None => None,
            };
            let mut t = Table::new(&["n", "rho", "n0", "d", "q0", "primes_window", "members", "rationals"]);
            let window: Vec<String> = set.primes_window().iter().map(u64::to_string).collect();
            t.push(vec![
                a.n.into(),
                a.rho.into(),
                set.n0().into(),
                (set.d() as u64).into(),
                set.q0().to_string().into(),
                window.join(";").into(),
                set.len().to_string().into(),
                rationals.map_or(Cell::Text(String::new()), Cell::from),
            ])?;
            emit(&t, &a.out)
        }
        Command::Partition(a) => {
            let fam = partition_family(a.n, a.k, a.seed)?;
            if !fam.verify()? {
                return Err(Fail::Check("the family does not have the covering property".into()));
            }
            let bound = partition_bound(a.n, a.k);
            let mut t = Table::new(&["index", "labels", "size", "bound"]);
            for i in 0..fam.len() {
                let labels: Vec<String> = fam.parts(i).iter().map(|p| format!("{p:?}")).collect();
                t.push(vec![i.into(), labels.join(" | ").into(), fam.len().into(), bound.into()])?;
            }
            emit(&t, &a.out)?;
            if fam.len() > bound {
                return Err(Fail::Check(format!("family size {} exceeds {bound}", fam.len())));
            }
            Ok(())
        }
        Command::Odecomp(a) => {
            let dec = decompose_o_property(&a.primes, a.d, a.seed)?;
            let mut t = Table::new(&["index", "k", "exponents", "lambda", "o_property"]);
            let mut all = true;
            for (i, s) in dec.sets.iter().enumerate() {
                let ok = s.verify(a.d) && o_property_check(&s.lambda, a.d)?.holds;
                all &= ok;
                let ex: Vec<String> = s.exponents.iter().map(u32::to_string).collect();
                let la: Vec<String> = s.lambda.iter().map(u64::to_string).collect();
                t.push(vec![i.into(), s.k.into(), ex.join(";").into(), la.join(";").into(), ok.into()])?;
            }
            emit(&t, &a.out)?;
            if !all {
                return Err(Fail::Check("an emitted set fails the O property".into()));
            }
            Ok(())
        }
        Command::Rm(a) => {
            if let Some(iv) = &a.interval {
                if iv.len() != 2 {
                    return Err(Fail::Config("--interval takes m,n".into()));
                }
                let parts = dyadic_interval_decomposition(iv[0], iv[1], a.s)?;
                let mut t = Table::new(&["scale", "index", "start", "end"]);
                for p in parts {
                    t.push(vec![(p.scale as u64).into(), p.index.into(), p.start().into(), p.end().into()])?;
                }
                return emit(&t, &a.out);
            }
            if !a.check {
                return Err(Fail::Config("pass --check or --interval m,n".into()));
            }
            let r = rm_audit(a.trials, a.s, a.seed)?;
            let mut t = Table::new(&["trials", "max_s", "violations", "worst_ratio"]);
            t.push(vec![r.trials.into(), (r.max_s as u64).into(), r.violations.into(), r.worst_ratio.into()])?;
            emit(&t, &a.out)?;
            if r.violations > 0 {
                return Err(Fail::Check(format!("{} sequences violate the inequality", r.violations)));
            }
            Ok(())
        }
        Command::Lattice(a) => {
            let body = ConvexBody::parse(&a.body)?;
            let b = boundary_near_count(&body, a.s, a.sigma)?;
            let res = davenport_residual(&body)?;
            let mut t = Table::new(&[
                "total",
                "volume",
                "residual",
                "s",
                "r",
                "sigma",
                "near_boundary",
                "inner_scale",
                "outer_scale",
            ]);
            t.push(vec![
                b.total.into(),
                body.volume().into(),
                res.into(),
                b.s.into(),
                b.r.into(),
                b.sigma.into(),
                b.count.into(),
                b.inner_scale.into(),
                b.outer_scale.into(),
            ])?;
            emit(&t, &a.out)
        }
        Command::Verify(a) => {
            let summary = run_suite(&a.suite, a.seed)?;
            for c in &summary.criteria {
                println!("criterion {:>3}: {} ({})", c.id, if c.passed { "PASS" } else { "FAIL" }, c.name);
            }
            let text = cfg(serde_json::to_string_pretty(&summary))? + "\n";
            write_atomic(&a.output, &text)?;
            println!("{} passed, {} failed; summary in {}", summary.passed, summary.failed, a.output.display());
            if !summary.all_passed() {
                return Err(Fail::Check(format!("{} criteria failed", summary.failed)));
            }
            Ok(())
        }
    }
}

fn configure_threads() -> Res<()> {
    if let Ok(v) = std::env::var("RADON_THREADS") {
        let n: usize = cfg(v.parse().map_err(|_| format!("RADON_THREADS must be a positive integer, got {v:?}")))?;
        if n == 0 {
            return Err(Fail::Config("RADON_THREADS must be positive".into()));
        }
        cfg(rayon::ThreadPoolBuilder::new().num_threads(n).build_global())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let outcome = (|| -> Res<()> {
        let cli = Cli::try_parse().map_err(|e| {
            if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) {
                let _ = e.print();
                std::process::exit(0);
            }
            Fail::Config(e.to_string())
        })?;
        configure_threads()?;
        let cmd = match (cli.config, cli.command) {
            (Some(path), _) => {
                let argv = config_argv(&path)?;
                Cli::try_parse_from(argv).map_err(|e| Fail::Config(e.to_string()))?.command
            }
            (None, c) => c,
        };
        run(cmd.ok_or_else(|| Fail::Config("no subcommand given; see --help".into()))?)
    })();
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Check(msg)) => {
            eprintln!("radon: check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Fail::Config(msg)) => {
            eprintln!("radon: {}", msg.trim_end());
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_definition_is_consistent() {
        Cli::command().debug_assert();
    }
}
