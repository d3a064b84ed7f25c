//! The `verify` driver: builds the lift once, picks symbolic or sampled
//! evaluation, runs the selected checks and collects a report.

use std::time::Instant;

use spantree_core::algebra::{MultiPoly, Rational, Ring, VarRegistry};
use spantree_core::arborescence::{matrix_forest_check, tau};
use spantree_core::graph::{Digraph, VertexSet};
use spantree_core::lift::{build_lift, count_walk_lifts, predicted_lift_size, swap_root, LiftGraph};
use spantree_core::policy::{CheckConfig, Sampler};
use spantree_core::theorem::{
    exploration_check, lift_minors, linear_coefficient_check, m_condition_check, m_prime,
    overcount_identity_check, lift_trace_check, phi_report, phi_via_lift, r_factorization_check,
    r_polynomial, schrodinger_identity_check, sp_formula_check, tau_from_zeta_derivative,
    tree_weight_stationarity_check, vertex_weighted_zeta_check, zeta_truncated_check, EdgeOrdering,
    MPrimeTable,
};
use spantree_core::walks::closed_walk_support_sums;
use spantree_core::Error;

use crate::format::GraphFile;
use crate::report::{CheckRecord, Status, VerificationReport};

/// Every check in run order, with the identity it exercises.
pub const CHECKS: &[(&str, &str)] = &[
    ("matrix-tree", "Laplacian minor determinants equal spanning forest weight sums for every root set"),
    ("walk-trace", "closed walk weights grouped by support sum to the traces of matrix powers"),
    ("m-prime", "the exponents m' solve k(W) - 1 = sum of m' over proper strongly connected supersets"),
    ("exploration", "exploration outputs count m', superset counts give k(W), canonical trees are injective"),
    ("lift", "spanning tree graph: one vertex per arborescence, root swap edges, strongly connected"),
    ("walk-lifts", "each closed walk has as many lifts as there are forests rooted at its support"),
    ("phi", "tau(lift)/tau(G) equals the forest product and every lift minor over its tree weight"),
    ("r-polynomial", "det(I - s P_lift) is divisible by det(I - s P)"),
    ("r-factorization", "R(s) equals the product of restricted determinants det(I - s P_W)^m'(W)"),
    ("r-linear", "R(0) = 1 and the s coefficient of R is trace P - trace P_lift"),
    ("r-at-one", "for stochastic weights R(1) equals tau(lift)/tau(G)"),
    ("stationarity", "for stochastic weights the tree weights are invariant under the lifted chain"),
    ("zeta-derivative", "for stochastic weights d/ds det(I - sP) at s = 1 equals -tau(G)"),
    ("zeta-series", "exp of the closed walk generating series equals 1/det(I - sP)"),
    ("vertex-zeta", "the vertex-weighted closed walk series equals 1/det(I - uSP)"),
    ("overcount", "walks weighted by k(support) - 1 match the m' sums; lift traces count forests"),
    ("schrodinger", "det of the lifted Schrodinger matrix equals the product of det(H_W)^m'(W)"),
    ("sp-formula", "det(I - S_lift P_lift) equals det(I - SP) times the product of det((I - SP)_W)^m'(W)"),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyError {
    /// Bad input or a cap that stops the run before any check.
    Input(String),
    /// An identity failed while preparing the shared data.
    Violation(String),
}

impl VerifyError {
    pub fn exit_code(&self) -> u8 {
        match self {
            VerifyError::Input(_) => 2,
            VerifyError::Violation(_) => 1,
        }
    }
}

impl std::fmt::Display for VerifyError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VerifyError::Input(m) | VerifyError::Violation(m) => f.write_str(m),
        }
    }
}

impl From<Error> for VerifyError {
    fn from(e: Error) -> Self {
        if e.is_violation() {
            VerifyError::Violation(e.to_string())
        } else {
            VerifyError::Input(e.to_string())
        }
    }
}

/// Render a ring element with variable names where there are any.
pub trait Render {
    fn render(&self, reg: &VarRegistry) -> String;
}

impl Render for Rational {
    fn render(&self, _: &VarRegistry) -> String {
        self.to_string()
    }
}

impl Render for MultiPoly {
    fn render(&self, reg: &VarRegistry) -> String {
        self.display(reg).to_string()
    }
}

/// One weighting of the graph with its lift, vertex weights `y` for the
/// Schrodinger checks and scalings `s` for the vertex-weighted ones.
pub struct Instance<R> {
    pub g: Digraph<R>,
    pub lift: LiftGraph<R>,
    pub y: Vec<R>,
    pub s: Vec<R>,
}

pub struct Context {
    pub config: CheckConfig,
    pub table: MPrimeTable,
    pub registry: VarRegistry,
    /// Weights as polynomials in the file's variables, `y_v` and `s_v`.
    pub symbolic: Instance<MultiPoly>,
    /// Random rational points; used by every check when not symbolic.
    pub points: Vec<Instance<Rational>>,
    pub use_symbolic: bool,
    sampler: Sampler,
}

enum Outcome {
    Pass(String),
    Skip(String),
}

type CheckResult = Result<Outcome, Error>;

fn parse_input(text: &str) -> Result<GraphFile, VerifyError> {
    GraphFile::parse(text).map_err(|e| VerifyError::Input(format!("graph file: {e}")))
}

impl Context {
    pub fn new(file: &GraphFile, config: CheckConfig) -> Result<Context, VerifyError> {
        let sym = file.to_symbolic()?;
        let g = sym.graph;
        let mut registry = sym.registry;
        g.require_strongly_connected()
            .map_err(|_| VerifyError::Input("precondition failed: graph is not strongly connected".into()))?;
        let predicted = predicted_lift_size(&g);
        if predicted > config.lift_cap.into() {
            return Err(VerifyError::Input(format!(
                "predicted lift size {predicted} exceeds the lift cap {}",
                config.lift_cap
            )));
        }
        let lift = build_lift(&g, config.lift_cap)?;
        let table = m_prime(&g)?;
        let n = g.vertex_count();
        let y = sym
            .vweights
            .unwrap_or_else(|| (0..n).map(|v| registry.var(&format!("y_{v}"))).collect());
        let s = (0..n).map(|v| registry.var(&format!("s_{v}"))).collect();
        let symbolic = Instance { g, lift, y, s };
        let use_symbolic = config.use_symbolic(symbolic.lift.vertex_count());
        let mut sampler = Sampler::new(config.seed);
        let mut points = Vec::with_capacity(config.eval_points);
        for _ in 0..config.eval_points.max(1) {
            let values = sampler.rationals(registry.len());
            let eval = |p: &MultiPoly| p.evaluate(&values);
            let g = symbolic.g.evaluate(&values)?;
            points.push(Instance {
                lift: symbolic.lift.reweight(&g)?,
                g,
                y: symbolic.y.iter().map(eval).collect::<Result<_, _>>()?,
                s: symbolic.s.iter().map(eval).collect::<Result<_, _>>()?,
            });
        }
        Ok(Context {
            config,
            table,
            registry,
            symbolic,
            points,
            use_symbolic,
            sampler,
        })
    }

    pub fn mode(&self) -> String {
        let size = self.symbolic.lift.vertex_count();
        let cap = self.config.symbolic_cap;
        if self.use_symbolic {
            format!(
                "symbolic, lift has {size} vertices (cap {cap}), variables {}",
                self.registry.names().join(" ")
            )
        } else {
            format!(
                "{} random rational points, lift has {size} vertices (cap {cap})",
                self.points.len()
            )
        }
    }

    /// Run a ring-generic check on the symbolic instance or on every point.
    fn generic(
        &self,
        sym: fn(&Instance<MultiPoly>, &Context) -> CheckResult,
        rat: fn(&Instance<Rational>, &Context) -> CheckResult,
    ) -> CheckResult {
        if self.use_symbolic {
            return sym(&self.symbolic, self);
        }
        self.at_points(rat)
    }

    fn at_points(&self, rat: fn(&Instance<Rational>, &Context) -> CheckResult) -> CheckResult {
        let mut first = None;
        for (k, inst) in self.points.iter().enumerate() {
            let outcome = rat(inst, self).map_err(|e| match e {
                Error::Violation { check, witness } => Error::Violation {
                    check,
                    witness: format!("at random point {k}: {witness}"),
                },
                other => other,
            })?;
            if let Outcome::Skip(_) = outcome {
                return Ok(outcome);
            }
            first.get_or_insert(outcome);
        }
        let points = self.points.len();
        Ok(match first.expect("at least one point") {
            Outcome::Pass(d) if points > 1 => Outcome::Pass(format!("{d} (first of {points} points)")),
            other => other,
        })
    }
}

/// Longest rendered value kept in a report line.
const SHOW_LIMIT: usize = 120;

fn show<R: Render>(x: &R, ctx: &Context) -> String {
    let text = x.render(&ctx.registry);
    if text.len() <= SHOW_LIMIT {
        return text;
    }
    let cut = (0..=SHOW_LIMIT).rev().find(|&i| text.is_char_boundary(i)).unwrap_or(0);
    format!("{} ... ({} chars)", &text[..cut], text.len())
}

fn matrix_tree<R: Ring + Render>(inst: &Instance<R>, ctx: &Context) -> CheckResult {
    let n = inst.g.vertex_count();
    let sets = (1u64..1 << n).map(|bits| (0..n).filter(|v| bits >> v & 1 == 1).collect::<VertexSet>());
    let mut count = 0;
    for w in sets {
        matrix_forest_check(&inst.g, w)?;
        count += 1;
    }
    Ok(Outcome::Pass(format!("{count} root sets, tau(G) = {}", show(&tau(&inst.g), ctx))))
}

fn walk_trace<R: Ring + Render>(inst: &Instance<R>, ctx: &Context) -> CheckResult {
    let len = ctx.config.walk_len;
    let walks = closed_walk_support_sums(&inst.g, len)?;
    let p = inst.g.weight_matrix();
    let mut power = p.clone();
    for n in 1..=len {
        if n > 1 {
            power = power.mul(&p)?;
        }
        if walks.total(n) != power.trace() {
            return Err(Error::Violation {
                check: "walk-trace",
                witness: format!(
                    "length {n}: walks {}, trace {}",
                    show(&walks.total(n), ctx),
                    show(&power.trace(), ctx)
                ),
            });
        }
    }
    Ok(Outcome::Pass(format!("lengths 1..={len}")))
}

fn m_prime_check(ctx: &Context) -> CheckResult {
    let checked = m_condition_check(&ctx.table)?;
    let negative = ctx.table.negative_entries();
    let sign = if negative.is_empty() {
        "all m' >= 0".to_string()
    } else {
        let list: Vec<String> = negative.iter().map(|(w, m)| format!("{w}: {m}")).collect();
        format!("finding: negative m' at {}", list.join(", "))
    };
    let exps: Vec<String> = ctx.table.proper().map(|(w, m)| format!("{w}:{m}")).collect();
    Ok(Outcome::Pass(format!(
        "{} strongly connected sets, {checked} conditions, {sign}; m' = [{}]",
        ctx.table.entries().len(),
        exps.join(" ")
    )))
}

fn exploration(ctx: &mut Context) -> CheckResult {
    let g = &ctx.symbolic.g;
    let m = g.edges().len();
    let mut orderings = vec![EdgeOrdering::lexicographic(m)];
    for _ in 0..ctx.config.orderings {
        orderings.push(EdgeOrdering::from_permutation(ctx.sampler.permutation(m))?);
    }
    let mut trees = 0;
    for ord in &orderings {
        trees = exploration_check(g, &ctx.table, ord)?.trees;
    }
    Ok(Outcome::Pass(format!("{} edge orderings, {trees} trees each", orderings.len())))
}

fn lift_structure(ctx: &Context) -> CheckResult {
    let (g, lift) = (&ctx.symbolic.g, &ctx.symbolic.lift);
    let lg = lift.graph();
    let fail = |witness: String| Err(Error::Violation { check: "lift", witness });
    let predicted = predicted_lift_size(g);
    if predicted != lift.vertex_count().into() {
        return fail(format!("{} lift vertices, matrix-tree count {predicted}", lift.vertex_count()));
    }
    if !lg.is_strongly_connected() {
        return fail("lift is not strongly connected".into());
    }
    for t in 0..lift.vertex_count() {
        let i = lift.root_of(t);
        if lg.out_edges(t).len() != g.out_edges(i).len() {
            return fail(format!("{} has out-degree {}, root has {}", lift.tree(t), lg.out_edges(t).len(), g.out_edges(i).len()));
        }
        if lg.diagonal()[t] != g.diagonal()[i] {
            return fail(format!("{}: diagonal differs from its root's", lift.tree(t)));
        }
        for &k in lg.out_edges(t) {
            let e = lg.edge(k);
            let j = lift.root_of(e.target);
            if lift.index_of(&swap_root(lift.tree(t), j)) != Some(e.target) || g.weight(i, j) != Some(&e.weight) {
                return fail(format!("edge {} -> {} breaks the swap rule", lift.tree(t), lift.tree(e.target)));
            }
        }
    }
    Ok(Outcome::Pass(format!("{} vertices, {} edges", lift.vertex_count(), lg.edges().len())))
}

fn walk_lifts(ctx: &Context) -> CheckResult {
    let records = count_walk_lifts(&ctx.symbolic.g, &ctx.symbolic.lift, ctx.config.walk_len)?;
    Ok(Outcome::Pass(format!("{} closed walks up to length {}", records.len(), ctx.config.walk_len)))
}

fn phi<R: Ring + Render>(inst: &Instance<R>, ctx: &Context) -> CheckResult {
    let r = phi_report(&inst.g, &inst.lift, &ctx.table)?;
    r.check()?;
    Ok(Outcome::Pass(format!(
        "Phi = {}, tau(G) = {}, tau(lift) = {}",
        show(r.phi(), ctx),
        show(&r.tau_graph, ctx),
        show(&r.tau_lift, ctx)
    )))
}

fn r_poly<R: Ring + Render>(inst: &Instance<R>, _: &Context) -> CheckResult {
    let r = r_polynomial(&inst.g, &inst.lift)?;
    Ok(Outcome::Pass(format!("R(s) has degree {}", r.degree().unwrap_or(0))))
}

fn r_factorization<R: Ring + Render>(inst: &Instance<R>, ctx: &Context) -> CheckResult {
    let r = r_polynomial(&inst.g, &inst.lift)?;
    r_factorization_check(&inst.g, &ctx.table, &r)?;
    let factors = ctx.table.proper().filter(|(_, m)| *m != 0).count();
    Ok(Outcome::Pass(format!("{factors} factors")))
}

fn r_linear<R: Ring + Render>(inst: &Instance<R>, ctx: &Context) -> CheckResult {
    let r = r_polynomial(&inst.g, &inst.lift)?;
    linear_coefficient_check(&inst.g, &inst.lift, &r)?;
    Ok(Outcome::Pass(format!("s coefficient {}", show(&r.coeff(1), ctx))))
}

const NOT_STOCHASTIC: &str = "weights are not row-stochastic";

fn r_at_one<R: Ring + Render>(inst: &Instance<R>, ctx: &Context) -> CheckResult {
    if !inst.g.rows_sum_to_one() {
        return Ok(Outcome::Skip(NOT_STOCHASTIC.into()));
    }
    let r = r_polynomial(&inst.g, &inst.lift)?;
    let (_, _, phi) = phi_via_lift(&inst.g, &lift_minors(&inst.lift))?;
    let at_one = r.eval(&R::one());
    if at_one != phi {
        return Err(Error::Violation {
            check: "r-at-one",
            witness: format!("R(1) = {}, Phi = {}", show(&at_one, ctx), show(&phi, ctx)),
        });
    }
    Ok(Outcome::Pass(format!("R(1) = {}", show(&at_one, ctx))))
}

fn stationarity<R: Ring + Render>(inst: &Instance<R>, ctx: &Context) -> CheckResult {
    if !inst.g.rows_sum_to_one() {
        return Ok(Outcome::Skip(NOT_STOCHASTIC.into()));
    }
    let w = tree_weight_stationarity_check(&inst.g, &inst.lift)?;
    let total = R::sum(&w);
    Ok(Outcome::Pass(format!("{} tree weights, total {}", w.len(), show(&total, ctx))))
}

fn zeta_derivative<R: Ring + Render>(inst: &Instance<R>, ctx: &Context) -> CheckResult {
    if !inst.g.rows_sum_to_one() {
        return Ok(Outcome::Skip(NOT_STOCHASTIC.into()));
    }
    let t = tau_from_zeta_derivative(&inst.g)?;
    Ok(Outcome::Pass(format!("tau(G) = {}", show(&t, ctx))))
}

fn zeta_series(inst: &Instance<Rational>, ctx: &Context) -> CheckResult {
    let series = zeta_truncated_check(&inst.g, ctx.config.series_order)?;
    let head: Vec<String> = series.coeffs().iter().take(4).map(|c| c.to_string()).collect();
    Ok(Outcome::Pass(format!("order {}, coefficients {} ...", ctx.config.series_order, head.join(", "))))
}

fn vertex_zeta(inst: &Instance<Rational>, ctx: &Context) -> CheckResult {
    vertex_weighted_zeta_check(&inst.g, &inst.s, ctx.config.series_order)?;
    Ok(Outcome::Pass(format!("order {}", ctx.config.series_order)))
}

fn overcount<R: Ring + Render>(inst: &Instance<R>, ctx: &Context) -> CheckResult {
    let len = ctx.config.walk_len;
    overcount_identity_check(&inst.g, &ctx.table, len)?;
    lift_trace_check(&inst.g, &inst.lift, &ctx.table, len)?;
    Ok(Outcome::Pass(format!("lengths 1..={len}")))
}

fn schrodinger<R: Ring + Render>(inst: &Instance<R>, ctx: &Context) -> CheckResult {
    let id = schrodinger_identity_check(&inst.g, &inst.y, &inst.lift, &ctx.table)?;
    Ok(Outcome::Pass(format!("{} factors, det = {}", id.factors.len(), show(&id.lhs, ctx))))
}

fn sp_formula<R: Ring + Render>(inst: &Instance<R>, ctx: &Context) -> CheckResult {
    let id = sp_formula_check(&inst.g, &inst.s, &inst.lift, &ctx.table)?;
    Ok(Outcome::Pass(format!("{} factors", id.factors.len())))
}

fn run_check(name: &str, ctx: &mut Context) -> CheckResult {
    match name {
        "matrix-tree" => ctx.generic(matrix_tree, matrix_tree),
        "walk-trace" => ctx.generic(walk_trace, walk_trace),
        "m-prime" => m_prime_check(ctx),
        "exploration" => exploration(ctx),
        "lift" => lift_structure(ctx),
        "walk-lifts" => walk_lifts(ctx),
        "phi" => ctx.generic(phi, phi),
        "r-polynomial" => ctx.generic(r_poly, r_poly),
        "r-factorization" => ctx.generic(r_factorization, r_factorization),
        "r-linear" => ctx.generic(r_linear, r_linear),
        "r-at-one" => ctx.generic(r_at_one, r_at_one),
        "stationarity" => ctx.generic(stationarity, stationarity),
        "zeta-derivative" => ctx.generic(zeta_derivative, zeta_derivative),
        "zeta-series" => ctx.at_points(zeta_series),
        "vertex-zeta" => ctx.at_points(vertex_zeta),
        "overcount" => ctx.generic(overcount, overcount),
        "schrodinger" => ctx.generic(schrodinger, schrodinger),
        "sp-formula" => ctx.generic(sp_formula, sp_formula),
        other => unreachable!("unknown check {other}"),
    }
}

/// Resolve a comma-separated check list; `None` selects everything.
pub fn select_checks(list: Option<&str>) -> Result<Vec<(&'static str, &'static str)>, VerifyError> {
    let Some(list) = list else {
        return Ok(CHECKS.to_vec());
    };
    let wanted: Vec<&str> = list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if let Some(bad) = wanted.iter().find(|w| !CHECKS.iter().any(|(n, _)| n == *w)) {
        let known: Vec<&str> = CHECKS.iter().map(|c| c.0).collect();
        return Err(VerifyError::Input(format!("unknown check '{bad}'; known: {}", known.join(", "))));
    }
    Ok(CHECKS.iter().copied().filter(|(n, _)| wanted.contains(n)).collect())
}

pub struct VerifyOptions {
    pub config: CheckConfig,
    pub checks: Option<String>,
    pub timings: bool,
}

/// Parse `text`, run the selected checks and report. Input problems and caps
/// come back as errors; identity failures are recorded in the report.
pub fn verify(text: &str, opts: &VerifyOptions) -> Result<VerificationReport, VerifyError> {
    let selected = select_checks(opts.checks.as_deref())?;
    let file = parse_input(text)?;
    let mut ctx = Context::new(&file, opts.config.clone())?;
    let mut report = VerificationReport::new(text, opts.config.seed, ctx.mode());
    for (name, anchor) in selected {
        let start = Instant::now();
        let result = run_check(name, &mut ctx);
        let millis = opts.timings.then(|| start.elapsed().as_millis());
        let (status, detail, witness) = match result {
            Ok(Outcome::Pass(d)) => (Status::Pass, d, None),
            Ok(Outcome::Skip(d)) => (Status::Skip, d, None),
            Err(e) if e.is_violation() => (Status::Fail, "identity violated".to_string(), Some(e.to_string())),
            Err(e) => return Err(VerifyError::Input(format!("{name}: {e}"))),
        };
        report.push(CheckRecord {
            name,
            anchor,
            status,
            detail,
            witness,
            millis,
        });
    }
    Ok(report)
}

/// Shared setup for the single-purpose subcommands.
pub fn context_for(text: &str, config: CheckConfig) -> Result<Context, VerifyError> {
    Context::new(&parse_input(text)?, config)
}
