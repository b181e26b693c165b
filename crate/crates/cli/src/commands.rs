//! One function per subcommand, each returning a [`RunReport`] or raw bytes.

use crate::input::{
    invalid, parse_point, parse_rational, point_json, points_json, read_points, read_text, Input,
    SpecArgs,
};
use crate::render;
use crate::report::RunReport;
use anyhow::Result;
use clap::{Args, ValueEnum};
use corrdyn_core::bimodule::{
    fock_build, fock_relation_check, vanishing_hypothesis_witness, vanishing_lemma_check,
    FiniteBimodule, PathFunction, PathGrid, SampleGrid, DEFAULT_GRID,
};
use corrdyn_core::dynamics::CircleFamily;
use corrdyn_core::dynamics::{
    expansive_decide, expansive_oracle, free_decide, gp_enumerate, gp_sample, invariant_check,
    limit_set_sample, path_space, propagate_arcs, ArcSet, JSampler, OrbitDirection, SampleOptions,
};
use corrdyn_core::ktheory::{
    kgroup_table, monomial_family_input, pimsner_solve, product_family_input, KGroups,
};
use corrdyn_core::polyalg::{gq, GaussianRational};
use corrdyn_core::{BranchedSets, Restriction, WeightedFiber};
use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::path::PathBuf;

/// Tolerances shared by every command.
#[derive(Clone, Copy, Debug, Args, Serialize)]
pub struct TolArgs {
    /// Root clustering radius (chordal)
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub tol: f64,
    /// Bound on |p(z, w)| for points on the correspondence
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub curve_tol: f64,
}

impl TolArgs {
    fn check(&self) -> Result<()> {
        for (name, v) in [("--tol", self.tol), ("--curve-tol", self.curve_tol)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(invalid(format!("{name} must lie in (0, 1)")));
            }
        }
        Ok(())
    }
}

/// Loads the polynomial with the requested tolerances and fills the report header.
fn load(spec: &SpecArgs, tol: &TolArgs, report: &mut RunReport) -> Result<Input> {
    tol.check()?;
    let mut inp = spec.load()?;
    let mut t = inp.corr.tolerances();
    t.cluster = tol.tol;
    t.on_curve = tol.curve_tol;
    inp.corr = inp.corr.with_tolerances(t);
    report.input = inp.describe();
    report.tolerances = serde_json::to_value(t)?;
    Ok(inp)
}

fn echo<T: Serialize>(args: &T) -> Value {
    serde_json::to_value(args).expect("flags serialize")
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FiberDirection {
    Forward,
    Backward,
    #[default]
    Both,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct FibersArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Base point: `re,im`, a real number, or `inf`
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
    #[arg(long, value_enum, default_value_t)]
    pub direction: FiberDirection,
}

fn fiber_json(f: &WeightedFiber) -> Value {
    json!({
        "base": point_json(&f.base),
        "total_multiplicity": f.total_multiplicity(),
        "points": f.points.iter().map(|p| json!({
            "point": point_json(&p.point),
            "multiplicity": p.multiplicity,
            "radius": p.radius,
        })).collect::<Vec<_>>(),
    })
}

pub fn fibers(args: &FibersArgs, tol: &TolArgs) -> Result<RunReport> {
    let mut r = RunReport::new("fibers", echo(args));
    let inp = load(&args.spec, tol, &mut r)?;
    let p = parse_point(&args.point)?;
    let mut out = serde_json::Map::new();
    if args.direction != FiberDirection::Backward {
        out.insert(
            "forward".into(),
            fiber_json(&inp.corr.forward_fiber(&p, tol.tol)?),
        );
    }
    if args.direction != FiberDirection::Forward {
        out.insert(
            "backward".into(),
            fiber_json(&inp.corr.backward_fiber(&p, tol.tol)?),
        );
    }
    r.result = Value::Object(out);
    r.notes.push(
        "forward: solutions w of p(point, w) = 0; backward: solutions z of p(z, point) = 0".into(),
    );
    Ok(r)
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct BranchArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// `circle`, or a JSON file with a finite point set
    #[arg(long)]
    pub restrict: Option<String>,
}

pub fn branch(args: &BranchArgs, tol: &TolArgs) -> Result<RunReport> {
    let mut r = RunReport::new("branch", echo(args));
    let inp = load(&args.spec, tol, &mut r)?;
    let restrict = match args.restrict.as_deref() {
        None => Restriction::None,
        Some("circle") => Restriction::UnitCircle,
        Some(path) => Restriction::Points(read_points(path.as_ref())?),
    };
    let sets = inp.corr.branched_sets(&restrict)?;
    let (m, n) = (inp.corr.deg_z(), inp.corr.deg_w());
    let [b, c, bt, ct] = sets.cardinalities();
    let bounds = BranchedSets::bounds(m, n);
    r.result = json!({
        "B": points_json(&sets.b),
        "C": points_json(&sets.c),
        "B_tilde": points_json(&sets.b_tilde),
        "C_tilde": points_json(&sets.c_tilde),
        "cardinalities": {"B": b, "C": c, "B_tilde": bt, "C_tilde": ct},
        "bounds": {"B": bounds[0], "C": bounds[1], "B_tilde": bounds[2], "C_tilde": bounds[3]},
        "within_bounds": sets.within_bounds(m, n),
    });
    r.notes.push("B: points z with a multiple solution w; C: those w; B_tilde, C_tilde: the same for p(w, z)".into());
    Ok(r)
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct PathsArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// JSON file with the starting points
    #[arg(long)]
    pub start: PathBuf,
    /// Path length (`--n` already names the monomial exponent)
    #[arg(long)]
    pub len: usize,
}

pub fn paths(args: &PathsArgs, tol: &TolArgs) -> Result<RunReport> {
    let mut r = RunReport::new("paths", echo(args));
    let inp = load(&args.spec, tol, &mut r)?;
    let start = read_points(&args.start)?;
    let paths = path_space(&inp.corr, &start, args.len, tol.tol)?;
    let total: u64 = paths.iter().map(|p| p.weight).sum();
    r.result = json!({
        "count": paths.len(),
        "total_weight": total,
        "paths": paths.iter().map(|p| json!({
            "points": points_json(&p.points),
            "weight": p.weight,
        })).collect::<Vec<_>>(),
    });
    r.notes
        .push("weight: product of the branch indices along the path".into());
    Ok(r)
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct InvariantArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// JSON file with the candidate set
    #[arg(long)]
    pub set: PathBuf,
}

pub fn invariant(args: &InvariantArgs, tol: &TolArgs) -> Result<RunReport> {
    let mut r = RunReport::new("invariant", echo(args));
    let inp = load(&args.spec, tol, &mut r)?;
    let set = read_points(&args.set)?;
    let rep = invariant_check(&inp.corr, &set, tol.tol)?;
    r.result = json!({
        "invariant": rep.invariant,
        "witness": rep.witness.map(|v| json!({
            "base": point_json(&v.base),
            "escaped": point_json(&v.escaped),
            "direction": v.direction,
        })),
    });
    Ok(r)
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct ExpansiveArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Seed arc `a/b,c/d` in turns (angle / 2 pi)
    #[arg(long, default_value = "0,1/16")]
    pub oracle: String,
    #[arg(long, default_value_t = 64)]
    pub max_steps: usize,
    /// Also print the arcs of U^(k) for k = 1..=steps
    #[arg(long)]
    pub steps: Option<usize>,
}

fn parse_arc(s: &str) -> Result<ArcSet> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| invalid(format!("seed arc {s:?} must look like a/b,c/d")))?;
    Ok(ArcSet::from_arc(parse_rational(a)?, parse_rational(b)?)?)
}

fn ratio_str(q: &BigRational) -> String {
    q.to_string()
}

pub fn expansive(args: &ExpansiveArgs, tol: &TolArgs) -> Result<RunReport> {
    let mut r = RunReport::new("expansive", echo(args));
    let inp = load(&args.spec, tol, &mut r)?;
    let cc = inp.circle()?;
    let decision = expansive_decide(cc)?;
    let seed = parse_arc(&args.oracle)?;
    let oracle = expansive_oracle(cc, &seed, args.max_steps)?;
    let mut result = json!({
        "expansive": decision,
        "oracle": oracle,
        "concurrence": oracle.expansive == decision,
    });
    if let Some(k) = args.steps {
        let mut arcs = Vec::with_capacity(k);
        for step in 1..=k {
            let u = propagate_arcs(cc, &seed, step)?;
            arcs.push(json!({
                "step": step,
                "measure": ratio_str(&u.measure()),
                "arcs": u.quads().iter().map(|q| q.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            }));
        }
        result["propagation"] = Value::Array(arcs);
    }
    r.result = result;
    r.notes.push(
        "decision: m does not divide n; oracle: exact covering of T by U^(k) from the seed arc"
            .into(),
    );
    if args.steps.is_some() {
        r.notes
            .push("arcs are [num_a, den_a, num_b, den_b] for [a, b] in turns".into());
    }
    Ok(r)
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct FreeArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Enumerate GP(N) exactly (monomial family)
    #[arg(long)]
    pub gp: Option<usize>,
    /// Estimate GP(N) from this many sampled points of T
    #[arg(long)]
    pub sample: Option<usize>,
}

pub fn free(args: &FreeArgs, tol: &TolArgs) -> Result<RunReport> {
    let mut r = RunReport::new("free", echo(args));
    let inp = load(&args.spec, tol, &mut r)?;
    let cc = inp.circle()?;
    let decision = free_decide(cc)?;
    let mut result = json!({ "free": decision.free, "certificate": decision.certificate });
    if let Some(n) = args.gp {
        let rep = gp_enumerate(cc, n)?;
        result["gp"] = json!({
            "n": rep.n,
            "finite": rep.finite,
            "count": rep.points.len(),
            "points": points_json(&rep.points),
            "angles": rep.angles.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
            "certificate": rep.certificate,
        });
    }
    if let Some(k) = args.sample {
        let n = args.gp.unwrap_or(2);
        let rep = gp_sample(&inp.corr, &JSampler::Circle(k), n, tol.tol)?;
        result["sample"] = json!({
            "n": rep.n,
            "density": rep.density,
            "count": rep.points.len(),
            "points": points_json(&rep.points),
            "certificate": rep.certificate,
        });
        r.notes
            .push("the sampled estimate is heuristic and never proves finiteness".into());
    }
    r.result = result;
    Ok(r)
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct InnerArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// JSON `{"terms": [[i, j, re, im], ...]}` for f = sum c z^i w^j (default 1)
    #[arg(long)]
    pub f: Option<PathBuf>,
    /// Same format for g (default 1)
    #[arg(long)]
    pub g: Option<PathBuf>,
    /// Number of sample points w
    #[arg(long, default_value_t = DEFAULT_GRID)]
    pub grid: usize,
    /// Sample w over the sphere instead of the unit circle
    #[arg(long)]
    pub sphere: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Terms {
    terms: Vec<(i32, i32, f64, f64)>,
}

/// A Laurent polynomial in `(z, w)` on `C_p`.
fn edge_function(path: Option<&PathBuf>) -> Result<PathFunction> {
    let Some(path) = path else {
        return Ok(PathFunction::constant(1, Complex64::new(1.0, 0.0)));
    };
    let t: Terms = serde_json::from_str(&read_text(path)?)
        .map_err(|e| invalid(format!("malformed function {}: {e}", path.display())))?;
    if t.terms
        .iter()
        .any(|&(_, _, a, b)| !a.is_finite() || !b.is_finite())
    {
        return Err(invalid("function coefficients must be finite"));
    }
    let terms = t.terms;
    Ok(PathFunction::on_edges(move |z, w| {
        terms
            .iter()
            .map(|&(i, j, a, b)| Complex64::new(a, b) * z.powi(i) * w.powi(j))
            .sum()
    }))
}

pub fn inner(args: &InnerArgs, tol: &TolArgs) -> Result<RunReport> {
    let mut r = RunReport::new("inner", echo(args));
    let inp = load(&args.spec, tol, &mut r)?;
    if args.grid == 0 {
        return Err(invalid("--grid must be at least 1"));
    }
    let grid = if args.sphere {
        SampleGrid::Sphere(args.grid)
    } else {
        SampleGrid::Circle(args.grid)
    };
    let ws = grid.points();
    let pg = PathGrid::new(&inp.corr, &ws, 1, tol.tol)?;
    let f = pg.sample(&edge_function(args.f.as_ref())?)?;
    let g = pg.sample(&edge_function(args.g.as_ref())?)?;
    let values = pg.inner(&f, &g)?;
    let m = inp.corr.deg_z() as f64;
    let (inf, two) = (f.norm_inf(), pg.norm2(&f)?);
    r.result = json!({
        "samples": ws.iter().zip(&values).map(|(w, v)| json!({
            "w": point_json(w),
            "value": [v.re, v.im],
        })).collect::<Vec<_>>(),
        "f_norm_inf": inf,
        "f_norm2": two,
        "sqrt_m_norm_inf": m.sqrt() * inf,
    });
    r.notes.push(
        "value: (f|g)_A(w) = sum over z with p(z, w) = 0 of e(z, w) conj(f(z, w)) g(z, w)".into(),
    );
    Ok(r)
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct FockArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// JSON file with the finite invariant set J
    #[arg(long)]
    pub set: PathBuf,
    /// Truncation level
    #[arg(long, default_value_t = 3)]
    pub k: usize,
}

fn ones(n: usize) -> Vec<GaussianRational> {
    vec![gq(1, 0); n]
}

pub fn fock(args: &FockArgs, tol: &TolArgs) -> Result<RunReport> {
    let mut r = RunReport::new("fock", echo(args));
    let inp = load(&args.spec, tol, &mut r)?;
    let set = read_points(&args.set)?;
    let fb = FiniteBimodule::new(&inp.corr, &set, tol.tol)?;
    let ft = fock_build(&fb, args.k)?;
    let rel = fock_relation_check(&ft)?;
    let dims = ft.dims();
    let mut checks = Vec::new();
    for x in 0..set.len() {
        let mut a = vec![gq(0, 0); set.len()];
        a[x] = gq(1, 0);
        for i in 1..=args.k {
            for j in (1..=args.k).filter(|&j| j != i) {
                if vanishing_hypothesis_witness(&ft, &a, i, j)?.is_some() {
                    continue;
                }
                let rep = vanishing_lemma_check(&ft, &a, i, &ones(dims[i]), j, &ones(dims[j]))?;
                checks.push(json!({
                    "a_support": point_json(&set[x]),
                    "i": i,
                    "j": j,
                    "zero": rep.zero,
                    "max_entry": rep.max_entry,
                    "levels_checked": rep.levels_checked,
                }));
            }
        }
    }
    let all_zero = checks.iter().all(|c| c["zero"] == true);
    r.result = json!({
        "dims": dims,
        "total_dim": ft.total_dim(),
        "relation": rel,
        "vanishing": { "checks": checks, "all_zero": all_zero },
    });
    r.notes
        .push("relation: T_xi^* T_eta = i((xi|eta)_A) on basis pairs, levels below K".into());
    r.notes.push("vanishing: a T_x T_y^* a^* with a the indicator of one point, x and y all ones, for every i != j whose hypothesis holds".into());
    Ok(r)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TableFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct KgroupsArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Table of the monomial family for 1 <= m <= M, 1 <= n <= N
    #[arg(long, num_args = 2, value_names = ["M", "N"], conflicts_with_all = ["spec", "family"])]
    pub table: Option<Vec<usize>>,
    #[arg(long, value_enum, default_value_t)]
    pub format: TableFormat,
}

pub enum Output {
    Report(RunReport),
    Raw(Vec<u8>),
}

fn groups_json(k: &KGroups) -> Value {
    json!({ "k0": k.k0, "k1": k.k1 })
}

pub fn kgroups(args: &KgroupsArgs, tol: &TolArgs) -> Result<Output> {
    let mut r = RunReport::new("kgroups", echo(args));
    if let Some(t) = &args.table {
        let rows = kgroup_table(t[0], t[1])?;
        if args.format == TableFormat::Csv {
            let mut out = String::from("m,n,k0,k1\n");
            for row in &rows {
                out.push_str(&format!("{},{},{},{}\n", row.m, row.n, row.k0, row.k1));
            }
            return Ok(Output::Raw(out.into_bytes()));
        }
        r.result = json!({ "rows": rows });
    } else {
        if args.format == TableFormat::Csv {
            return Err(invalid("--format csv needs --table"));
        }
        let inp = load(&args.spec, tol, &mut r)?;
        let input = match &inp.circle()?.family {
            CircleFamily::Monomial { m, n } => monomial_family_input(*m, *n)?,
            CircleFamily::Product { exponents } => product_family_input(exponents)?,
            CircleFamily::Relations { .. } => {
                return Err(invalid(
                    "K-groups are available for the monomial and product families",
                ))
            }
        };
        r.result = groups_json(&pimsner_solve(&input)?);
        r.result["k_ix"] = json!({ "k0": input.k0_ix, "k1": input.k1_ix });
    }
    r.notes.push(
        "groups from the six-term exact sequence of the Cuntz-Pimsner extension over C(T)".into(),
    );
    Ok(Output::Report(r))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RenderFormat {
    #[default]
    Csv,
    Ppm,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RenderDirection {
    Forward,
    #[default]
    Backward,
    Mixed,
}

impl From<RenderDirection> for OrbitDirection {
    fn from(d: RenderDirection) -> Self {
        match d {
            RenderDirection::Forward => OrbitDirection::Forward,
            RenderDirection::Backward => OrbitDirection::Backward,
            RenderDirection::Mixed => OrbitDirection::Mixed,
        }
    }
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct RenderArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Number of orbit points
    #[arg(long, default_value_t = 100_000)]
    pub iters: usize,
    /// RNG seed; CORRDYN_SEED overrides it
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// `csv` or `ppm` to write that format to stdout, or an output file
    #[arg(long)]
    pub out: Option<String>,
    /// Output format when --out is a file (default: from its extension, else csv)
    #[arg(long, value_enum)]
    pub format: Option<RenderFormat>,
    /// Image side in pixels
    #[arg(long, default_value_t = 800)]
    pub px: usize,
    /// Half-width of the square window in the z plane
    #[arg(long, default_value_t = 2.0)]
    pub extent: f64,
    #[arg(long, value_enum, default_value_t)]
    pub direction: RenderDirection,
    /// Independent orbits run in parallel
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Pick fiber points uniformly instead of by branch index
    #[arg(long)]
    pub unweighted: bool,
    #[arg(long, default_value_t = 100)]
    pub burn_in: usize,
}

/// Seed from `CORRDYN_SEED` when set.
fn effective_seed(flag: u64) -> Result<u64> {
    match std::env::var("CORRDYN_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| invalid(format!("CORRDYN_SEED={s:?} is not an unsigned integer"))),
        Err(_) => Ok(flag),
    }
}

pub fn render(args: &RenderArgs, tol: &TolArgs) -> Result<Output> {
    let mut r = RunReport::new("render", echo(args));
    let inp = load(&args.spec, tol, &mut r)?;
    if args.px == 0 || args.px > 8192 {
        return Err(invalid("--px must lie in 1..=8192"));
    }
    if !(args.extent > 0.0 && args.extent.is_finite()) {
        return Err(invalid("--extent must be positive"));
    }
    let (format, file) = match args.out.as_deref() {
        None | Some("csv") => (args.format.unwrap_or(RenderFormat::Csv), None),
        Some("ppm") => (RenderFormat::Ppm, None),
        Some(path) => {
            let by_ext = path
                .rsplit_once('.')
                .and_then(|(_, e)| RenderFormat::from_str(e, true).ok());
            (
                args.format.or(by_ext).unwrap_or_default(),
                Some(PathBuf::from(path)),
            )
        }
    };
    let seed = effective_seed(args.seed)?;
    let opts = SampleOptions {
        weighted: !args.unweighted,
        workers: args.workers,
        burn_in: args.burn_in,
        tol: tol.tol,
        ..SampleOptions::default()
    };
    let pts = limit_set_sample(&inp.corr, args.iters, seed, args.direction.into(), &opts)?;
    let (bytes, drawn) = match format {
        RenderFormat::Csv => (render::csv(&pts).into_bytes(), pts.len()),
        RenderFormat::Ppm => render::ppm(&pts, args.px, args.extent),
    };
    let Some(file) = file else {
        return Ok(Output::Raw(bytes));
    };
    std::fs::write(&file, &bytes)
        .map_err(|e| anyhow::Error::from(e).context(format!("writing {}", file.display())))?;
    r.result = json!({
        "out": file,
        "format": format,
        "points": pts.len(),
        "drawn": drawn,
        "bytes": bytes.len(),
        "seed": seed,
    });
    if format == RenderFormat::Csv {
        r.notes.push(
            "CSV columns: re, im, chart; chart z gives z itself (|z| <= 1), chart u gives u = 1/z"
                .into(),
        );
    }
    Ok(Output::Report(r))
}
