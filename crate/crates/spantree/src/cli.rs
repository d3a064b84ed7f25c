//! Command-line interface. [`run`] returns the process exit code:
//! 0 when every check passes, 1 on an identity violation, 2 on bad input.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use spantree_core::algebra::VarRegistry;
use spantree_core::arborescence::{enumerate_forests, enumerate_trees, k_count};
use spantree_core::graph::VertexSet;
use spantree_core::lift::{build_lift, predicted_lift_size};
use spantree_core::policy::{CheckConfig, DEFAULT_SEED};
use spantree_core::theorem::{m_prime, phi_report, schrodinger_identity_check, zeta_truncated_check};

use crate::format::GraphFile;
use crate::lift_io::{compare_lift, labels_text, lift_graph_file, parse_labels};
use crate::verify::{context_for, verify, Context, Render, VerifyError, VerifyOptions};

#[derive(Parser, Debug)]
#[command(name = "spantree", version, about = "Spanning tree graphs of weighted digraphs and their determinant identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Limits {
    /// Seed for random evaluation points and edge orderings.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Lift sizes up to this are checked with symbolic determinants.
    #[arg(long, default_value_t = 12)]
    symbolic_cap: usize,
    /// Random rational points used above the symbolic cap.
    #[arg(long, default_value_t = 3)]
    eval_points: usize,
    /// Refuse graphs whose lift has more vertices than this.
    #[arg(long, default_value_t = spantree_core::lift::DEFAULT_LIFT_CAP)]
    lift_cap: usize,
    #[arg(long, default_value_t = 8)]
    series_order: usize,
    /// Longest closed walk used by the walk checks.
    #[arg(long, default_value_t = 6)]
    walk_len: usize,
    /// Random edge orderings for the exploration check.
    #[arg(long, default_value_t = 20)]
    orderings: usize,
}

impl Limits {
    fn config(&self) -> CheckConfig {
        CheckConfig {
            symbolic_cap: self.symbolic_cap,
            eval_points: self.eval_points,
            series_order: self.series_order,
            lift_cap: self.lift_cap,
            walk_len: self.walk_len,
            orderings: self.orderings,
            seed: self.seed,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Structured,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the identity checks on a graph file.
    Verify {
        graph: PathBuf,
        /// Comma-separated subset of checks.
        #[arg(long)]
        checks: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Record wall time per check (makes output run-dependent).
        #[arg(long)]
        timings: bool,
        #[command(flatten)]
        limits: Limits,
    },
    /// List spanning trees, forests or strongly connected subsets.
    Enumerate {
        graph: PathBuf,
        #[arg(value_enum)]
        what: Listing,
        /// Root of the trees to list; all roots when absent.
        #[arg(long)]
        root: Option<usize>,
        /// Comma-separated root set for forests.
        #[arg(long)]
        roots: Option<String>,
    },
    /// Write the spanning tree graph and its label sidecar.
    Lift {
        graph: PathBuf,
        /// Output path; labels go to `<out>.labels`. Prints to stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = spantree_core::lift::DEFAULT_LIFT_CAP)]
        lift_cap: usize,
    },
    /// Compare a lift file with the lift computed from the base graph.
    CheckLift {
        graph: PathBuf,
        lift: PathBuf,
        /// Label sidecar; defaults to `<lift>.labels`.
        #[arg(long)]
        labels: Option<PathBuf>,
        #[arg(long, default_value_t = spantree_core::lift::DEFAULT_LIFT_CAP)]
        lift_cap: usize,
    },
    /// Tree count ratio of the lift computed three ways.
    Phi {
        graph: PathBuf,
        #[command(flatten)]
        limits: Limits,
    },
    /// Series coefficients of 1/det(I - sP), checked against closed walks.
    Zeta {
        graph: PathBuf,
        #[arg(long, default_value_t = 8)]
        order: usize,
    },
    /// Determinant of the lifted Schrodinger matrix and its factorization.
    Schrodinger {
        graph: PathBuf,
        #[command(flatten)]
        limits: Limits,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Listing {
    Trees,
    Forests,
    Subsets,
}

enum Failure {
    Input(String),
    Violation(String),
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Input(m) => Failure::Input(m),
            VerifyError::Violation(m) => Failure::Violation(m),
        }
    }
}

impl From<spantree_core::Error> for Failure {
    fn from(e: spantree_core::Error) -> Self {
        VerifyError::from(e).into()
    }
}

type Outcome = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<(String, GraphFile), Failure> {
    let text = read(path)?;
    let file = GraphFile::parse(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok((text, file))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// Parse `args` (program name first), run, and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(Failure::Input(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
        Err(Failure::Violation(m)) => {
            let _ = writeln!(err, "violation: {m}");
            1
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::Input(format!("writing output: {e}")))
}

fn dispatch(command: Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Verify {
            graph,
            checks,
            format,
            timings,
            limits,
        } => {
            let text = read(&graph)?;
            let opts = VerifyOptions {
                config: limits.config(),
                checks,
                timings,
            };
            let report = verify(&text, &opts)?;
            let rendered = match format {
                Format::Text => report.to_text(),
                Format::Structured => report.to_json(),
            };
            emit(out, &rendered)?;
            Ok(if report.all_passed() { 0 } else { 1 })
        }
        Command::Enumerate { graph, what, root, roots } => enumerate(&graph, what, root, roots.as_deref(), out),
        Command::Lift { graph, out: path, lift_cap } => {
            let (_, file) = read_graph(&graph)?;
            let g = file.to_symbolic()?.graph;
            let lift = build_lift(&g, lift_cap)?;
            let lifted = lift_graph_file(&file, &lift).serialize();
            let labels = labels_text(&lift);
            match path {
                Some(path) => {
                    write_file(&path, &lifted)?;
                    write_file(&labels_path(&path), &labels)?;
                    emit(out, &format!("wrote {} lift vertices to {}\n", lift.vertex_count(), path.display()))?;
                }
                None => {
                    emit(out, &lifted)?;
                    for line in labels.lines() {
                        emit(out, &format!("# {line}\n"))?;
                    }
                }
            }
            Ok(0)
        }
        Command::CheckLift {
            graph,
            lift,
            labels,
            lift_cap,
        } => {
            let (_, base) = read_graph(&graph)?;
            let (_, lifted) = read_graph(&lift)?;
            let labels_file = labels.unwrap_or_else(|| labels_path(&lift));
            let labels = parse_labels(&read(&labels_file)?)
                .map_err(|e| Failure::Input(format!("{}: {e}", labels_file.display())))?;
            let g = base.to_symbolic()?.graph;
            let computed = build_lift(&g, lift_cap)?;
            compare_lift(&base, &computed, &lifted, &labels).map_err(Failure::Violation)?;
            emit(out, &format!("lift matches: {} vertices\n", computed.vertex_count()))?;
            Ok(0)
        }
        Command::Phi { graph, limits } => {
            let text = read(&graph)?;
            let ctx = context_for(&text, limits.config())?;
            let lines = if ctx.use_symbolic {
                phi_lines(&ctx.symbolic, &ctx)?
            } else {
                let mut lines = format!("# evaluated at random point 0 of {}\n", ctx.points.len());
                lines += &phi_lines(&ctx.points[0], &ctx)?;
                lines
            };
            emit(out, &lines)?;
            Ok(0)
        }
        Command::Zeta { graph, order } => {
            let (_, file) = read_graph(&graph)?;
            if file.is_symbolic() {
                return Err(Failure::Input("zeta needs numeric weights".into()));
            }
            let g = file.to_symbolic()?.graph.evaluate(&[])?;
            let series = zeta_truncated_check(&g, order)?;
            let mut text = String::new();
            for (k, c) in series.coeffs().iter().enumerate() {
                text += &format!("s^{k} {c}\n");
            }
            emit(out, &text)?;
            Ok(0)
        }
        Command::Schrodinger { graph, limits } => {
            let text = read(&graph)?;
            let ctx = context_for(&text, limits.config())?;
            let record = if ctx.use_symbolic {
                schrodinger_lines(&ctx.symbolic, &ctx)?
            } else {
                format!("# evaluated at random point 0 of {}\n", ctx.points.len())
                    + &schrodinger_lines(&ctx.points[0], &ctx)?
            };
            emit(out, &record)?;
            Ok(0)
        }
    }
}

fn labels_path(lift: &Path) -> PathBuf {
    let mut name = lift.as_os_str().to_owned();
    name.push(".labels");
    PathBuf::from(name)
}

fn phi_lines<R>(inst: &crate::verify::Instance<R>, ctx: &Context) -> Result<String, Failure>
where
    R: spantree_core::algebra::Ring + Render,
{
    let reg = &ctx.registry;
    let r = phi_report(&inst.g, &inst.lift, &ctx.table)?;
    r.check()?;
    let mut text = format!(
        "tau(G) {}\ntau(lift) {}\nphi via lift {}\nphi via product {}\n",
        r.tau_graph.render(reg),
        r.tau_lift.render(reg),
        r.phi_lift.render(reg),
        r.phi_product.render(reg)
    );
    text += &format!("phi via minors agrees at all {} lift vertices\n", r.phi_minor.len());
    Ok(text)
}

fn schrodinger_lines<R>(inst: &crate::verify::Instance<R>, ctx: &Context) -> Result<String, Failure>
where
    R: spantree_core::algebra::Ring + Render,
{
    let reg = &ctx.registry;
    let id = schrodinger_identity_check(&inst.g, &inst.y, &inst.lift, &ctx.table)?;
    let mut text = format!("det H_lift {}\n", id.lhs.render(reg));
    for (w, base, m) in &id.factors {
        text += &format!("factor {w} ^ {m}: {}\n", base.render(reg));
    }
    text += "identity holds\n";
    Ok(text)
}

fn parse_roots(list: &str, n: usize) -> Result<VertexSet, Failure> {
    let mut set = VertexSet::default();
    for tok in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let v: usize = tok
            .parse()
            .map_err(|_| Failure::Input(format!("bad root '{tok}'")))?;
        if v >= n {
            return Err(Failure::Input(format!("root {v} out of range for {n} vertices")));
        }
        set.insert(v);
    }
    if set.is_empty() {
        return Err(Failure::Input("the root set is empty".into()));
    }
    Ok(set)
}

fn enumerate(graph: &Path, what: Listing, root: Option<usize>, roots: Option<&str>, out: &mut dyn Write) -> Outcome {
    let (_, file) = read_graph(graph)?;
    let sym = file.to_symbolic()?;
    let (g, reg): (_, &VarRegistry) = (&sym.graph, &sym.registry);
    let n = g.vertex_count();
    let mut text = String::new();
    match what {
        Listing::Trees => {
            let roots: Vec<usize> = match root {
                Some(r) if r >= n => return Err(Failure::Input(format!("root {r} out of range for {n} vertices"))),
                Some(r) => vec![r],
                None => (0..n).collect(),
            };
            let count = predicted_lift_size(g);
            if count > spantree_core::lift::DEFAULT_LIFT_CAP.into() {
                return Err(Failure::Input(format!("{count} trees exceed the listing cap")));
            }
            for r in roots {
                let mut trees = enumerate_trees(g, r);
                trees.sort_by_key(|t| t.encoding());
                for t in trees {
                    text += &format!("root {r} tree {} weight {}\n", t.encoding(), t.weight(g).render(reg));
                }
            }
        }
        Listing::Forests => {
            let list = roots.ok_or_else(|| Failure::Input("forests need --roots".into()))?;
            let set = parse_roots(list, n)?;
            let mut forests = enumerate_forests(g, set)?;
            forests.sort_by_key(|f| f.encoding());
            for f in forests {
                text += &format!("roots {set} forest {} weight {}\n", f.encoding(), f.weight(g).render(reg));
            }
        }
        Listing::Subsets => {
            let sets = g.strongly_connected_subsets()?;
            let table = g.is_strongly_connected().then(|| m_prime(g)).transpose()?;
            for w in sets {
                let k = k_count(g, w)?;
                match table.as_ref().and_then(|t| t.m_prime(w)) {
                    Some(m) => text += &format!("{w} k {k} m' {m}\n"),
                    None => text += &format!("{w} k {k}\n"),
                }
            }
        }
    }
    emit(out, &text)?;
    Ok(0)
}
