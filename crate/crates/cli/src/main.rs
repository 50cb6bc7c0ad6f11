use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mpdag_core::oracle::{enumerate_dags, eval_id_formula, gformula_eval, nonid_witness, Assignment, DiscreteModel};
use mpdag_core::{
    close, find_adjustment_set, gaussian_effect, identify, truncated_factorization, Adjustment, BackgroundKnowledge,
    Dataset, Identification, NoAdjustmentReason, NodeId, NodeSet, Pdag, Style,
};
use serde_json::json;

/// Random models drawn by `verify` for an identifiable effect.
const VERIFY_MODELS: u64 = 20;

#[derive(Parser, Debug)]
#[command(name = "mpdag", version, about = "Causal effect identification in MPDAGs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Apply background knowledge and close under the orientation rules.
    Close(GraphArgs),
    /// Decide identifiability of f(y | do(x)) and print the formula.
    Identify(EffectArgs),
    /// Print the truncated factorization f(v | do(x)).
    Factorize(FactorizeArgs),
    /// Search for a covariate adjustment set.
    Adjust(EffectArgs),
    /// List every DAG the graph represents.
    Enumerate(GraphArgs),
    /// Check an identification result against brute-force oracles.
    Verify(EffectArgs),
    /// Estimate linear total effects from data.
    Estimate(EstimateArgs),
}

#[derive(Args, Debug)]
struct GraphArgs {
    /// Graph in edge-list format.
    #[arg(short = 'g', long = "graph")]
    graph: PathBuf,
    /// Background knowledge: one `A -> B` per line. The graph is closed under it.
    #[arg(short = 'b', long = "bk")]
    bk: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EffectArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Comma-separated treatment nodes.
    #[arg(short = 'X', value_name = "NODES")]
    x: String,
    /// Comma-separated response nodes.
    #[arg(short = 'Y', value_name = "NODES")]
    y: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct FactorizeArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(short = 'X', value_name = "NODES", default_value = "")]
    x: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct EstimateArgs {
    #[command(flatten)]
    effect: EffectArgs,
    /// CSV with a header row of node names.
    #[arg(long)]
    data: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Latex,
    Json,
}

impl From<Format> for Style {
    fn from(f: Format) -> Style {
        match f {
            Format::Text => Style::Text,
            Format::Latex => Style::Latex,
            Format::Json => Style::Json,
        }
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(PathBuf, io::Error),
    Core(mpdag_core::Error),
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "{m}"),
            Failure::Io(path, e) => write!(f, "{}: {e}", path.display()),
            Failure::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<mpdag_core::Error> for Failure {
    fn from(e: mpdag_core::Error) -> Self {
        Failure::Core(e)
    }
}

/// A valid answer that is negative: not identifiable, not truncatable, or no
/// adjustment set.
struct Negative;

type Outcome = Result<Result<(), Negative>, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn load(args: &GraphArgs) -> Result<Pdag, Failure> {
    let g = Pdag::parse(&read(&args.graph)?)?;
    match &args.bk {
        Some(path) => Ok(close(&g, &BackgroundKnowledge::parse(&read(path)?)?)?),
        None => Ok(g),
    }
}

fn node_list(flag: &str, text: &str) -> Result<Vec<NodeId>, Failure> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| NodeId::new(s).map_err(|e| Failure::Usage(format!("-{flag}: {e}"))))
        .collect()
}

fn as_set(nodes: &[NodeId]) -> NodeSet {
    nodes.iter().cloned().collect()
}

/// Treatments and responses, validated as nonempty, known, and disjoint.
fn effect_sets(g: &Pdag, args: &EffectArgs) -> Result<(Vec<NodeId>, Vec<NodeId>), Failure> {
    let xs = node_list("X", &args.x)?;
    let ys = node_list("Y", &args.y)?;
    if xs.is_empty() || ys.is_empty() {
        return Err(Failure::Usage("-X and -Y need at least one node each".into()));
    }
    for v in xs.iter().chain(&ys) {
        if !g.contains(v) {
            return Err(Failure::Usage(format!("unknown node {v}")));
        }
    }
    if let Some(v) = xs.iter().find(|v| ys.contains(v)) {
        return Err(Failure::Usage(format!("{v} is in both -X and -Y")));
    }
    Ok((xs, ys))
}

fn names(set: &NodeSet) -> Vec<&str> {
    set.iter().map(NodeId::as_str).collect()
}

fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let io = |e: io::Error| Failure::Io(PathBuf::from("<stdout>"), e);
    match cli.command {
        Command::Close(args) => {
            let g = load(&args)?;
            let closed = close(&g, &BackgroundKnowledge::default())?;
            write!(out, "{}", closed.to_edge_list()).map_err(io)?;
            Ok(Ok(()))
        }
        Command::Identify(args) => {
            let g = load(&args.graph)?;
            let (xs, ys) = effect_sets(&g, &args)?;
            match identify(&g, &as_set(&xs), &as_set(&ys))? {
                Identification::Identifiable(f) => {
                    writeln!(out, "{}", f.render(args.format.into())).map_err(io)?;
                    Ok(Ok(()))
                }
                Identification::NotIdentifiable(path) => {
                    let rendered = path.render(&g)?;
                    if args.format == Format::Json {
                        writeln!(out, "{}", json!({ "identifiable": false, "witness": rendered })).map_err(io)?;
                    } else {
                        writeln!(out, "not identifiable").map_err(io)?;
                    }
                    writeln!(err, "{rendered}").map_err(io)?;
                    Ok(Err(Negative))
                }
            }
        }
        Command::Factorize(args) => {
            let g = load(&args.graph)?;
            let xs = as_set(&node_list("X", &args.x)?);
            match truncated_factorization(&g, &xs) {
                Ok(f) => {
                    writeln!(out, "{}", f.render(args.format.into())).map_err(io)?;
                    Ok(Ok(()))
                }
                Err(e @ mpdag_core::Error::NotTruncatable(..)) => {
                    writeln!(err, "{e}").map_err(io)?;
                    Ok(Err(Negative))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Adjust(args) => {
            let g = load(&args.graph)?;
            let (xs, ys) = effect_sets(&g, &args)?;
            let json = args.format == Format::Json;
            let found = find_adjustment_set(&g, &as_set(&xs), &as_set(&ys))?;
            let line = match (&found, json) {
                (Adjustment::SetFound(z), false) => format!("{{{}}}", names(z).join(",")),
                (Adjustment::SetFound(z), true) => json!({ "adjustment_set": names(z) }).to_string(),
                (Adjustment::ZeroEffect, false) => "zero effect".to_string(),
                (Adjustment::ZeroEffect, true) => json!({ "zero_effect": true }).to_string(),
                (Adjustment::NoneExists(reason), _) => {
                    let reason = match reason {
                        NoAdjustmentReason::NotAmenable => "not_amenable",
                        NoAdjustmentReason::BlockedPathUnachievable => "blocked_path_unachievable",
                    };
                    if json {
                        json!({ "none_exists": reason }).to_string()
                    } else {
                        format!("none_exists: {reason}")
                    }
                }
            };
            writeln!(out, "{line}").map_err(io)?;
            Ok(if matches!(found, Adjustment::NoneExists(_)) { Err(Negative) } else { Ok(()) })
        }
        Command::Enumerate(args) => {
            let g = load(&args)?;
            let dags = enumerate_dags(&g)?;
            writeln!(out, "{}", dags.len()).map_err(io)?;
            for d in &dags {
                write!(out, "\n{}", d.to_edge_list()).map_err(io)?;
            }
            Ok(Ok(()))
        }
        Command::Verify(args) => verify(&args, out, err),
        Command::Estimate(args) => {
            let g = load(&args.effect.graph)?;
            let (xs, ys) = effect_sets(&g, &args.effect)?;
            let [y] = ys.as_slice() else {
                return Err(Failure::Usage("estimate takes exactly one response in -Y".into()));
            };
            let file = fs::File::open(&args.data).map_err(|e| Failure::Io(args.data.clone(), e))?;
            let data = Dataset::from_csv(file)?;
            match identify(&g, &as_set(&xs), &as_set(&ys))? {
                Identification::Identifiable(f) => {
                    let effects = gaussian_effect(&f, &data, &xs, y)?;
                    let body = json!({
                        "treatments": xs.iter().map(NodeId::as_str).collect::<Vec<_>>(),
                        "response": y.as_str(),
                        "effects": effects,
                    });
                    writeln!(out, "{body}").map_err(io)?;
                    Ok(Ok(()))
                }
                Identification::NotIdentifiable(path) => {
                    writeln!(err, "not identifiable: {}", path.render(&g)?).map_err(io)?;
                    Ok(Err(Negative))
                }
            }
        }
    }
}

/// Identifiable: the largest disagreement of `f(y | do(x))` between member
/// DAGs, and between the formula and the truth, over random binary models
/// that all share one observational distribution. Not identifiable: the
/// witness pair of linear models and the gap between their effects.
fn verify(args: &EffectArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let io = |e: io::Error| Failure::Io(PathBuf::from("<stdout>"), e);
    let g = load(&args.graph)?;
    let (xs, ys) = effect_sets(&g, args)?;
    let (xs, ys) = (as_set(&xs), as_set(&ys));
    let json = args.format == Format::Json;
    match identify(&g, &xs, &ys)? {
        Identification::Identifiable(f) => {
            let dags = enumerate_dags(&g)?;
            let mut cross = 0.0f64;
            let mut formula = 0.0f64;
            for k in 0..VERIFY_MODELS {
                let seed = args.seed.wrapping_add(k);
                let model = DiscreteModel::random_binary(&dags[(k as usize) % dags.len()], seed)?;
                let joint = model.joint()?;
                let members =
                    dags.iter().map(|d| DiscreteModel::from_joint(d, &joint)).collect::<Result<Vec<_>, _>>()?;
                let treated: Vec<&NodeId> = xs.iter().collect();
                for mask in 0u32..1 << treated.len() {
                    let x: Assignment =
                        treated.iter().enumerate().map(|(i, v)| ((*v).clone(), (mask >> i & 1) as usize)).collect();
                    let truth = gformula_eval(&model, &x, &ys)?;
                    for m in &members {
                        cross = cross.max(gformula_eval(m, &x, &ys)?.total_variation(&truth)?);
                    }
                    formula = formula.max(eval_id_formula(&f, &model, &x)?.total_variation(&truth)?);
                }
            }
            let report = if json {
                json!({
                    "identifiable": true,
                    "member_dags": dags.len(),
                    "models": VERIFY_MODELS,
                    "max_cross_dag_deviation": cross,
                    "max_formula_deviation": formula,
                })
                .to_string()
            } else {
                format!(
                    "identifiable\nmember DAGs: {}\nmodels: {VERIFY_MODELS}\nmax cross-DAG deviation: {cross:e}\n\
                     max formula deviation: {formula:e}",
                    dags.len()
                )
            };
            writeln!(out, "{report}").map_err(io)?;
            Ok(Ok(()))
        }
        Identification::NotIdentifiable(_) => {
            let w = nonid_witness(&g, &xs, &ys)?;
            let rendered = w.path.render(&g)?;
            let gap = (w.forward.covariance() - w.reversed.covariance()).abs().max();
            let report = if json {
                json!({
                    "identifiable": false,
                    "witness": rendered,
                    "delta": w.delta,
                    "max_covariance_difference": gap,
                })
                .to_string()
            } else {
                format!("not identifiable\nwitness: {rendered}\ndelta: {}\nmax covariance difference: {gap:e}", w.delta)
            };
            writeln!(out, "{report}").map_err(io)?;
            writeln!(err, "{rendered}").map_err(io)?;
            Ok(Err(Negative))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let stdout = io::stdout();
    let stderr = io::stderr();
    match run(cli, &mut stdout.lock(), &mut stderr.lock()) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(Negative)) => ExitCode::from(2),
        Err(e) => {
            eprintln!("mpdag: {e}");
            ExitCode::from(1)
        }
    }
}
