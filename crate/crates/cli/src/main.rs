//! `mvmodal`: command-line front end for the many-valued modal workbench.
//!
//! Exit codes: 0 holds or succeeded, 1 fails (a witness is printed),
//! 2 usage or input error, 3 resource guard tripped.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mvmodal::bridges::{self, TranslationMode};
use mvmodal::decision;
use mvmodal::io;
use mvmodal::kripke::{KripkeModel, Verdict};
use mvmodal::necessitation;
use mvmodal::pcp::{self, ChainAlgebra};
use mvmodal::syntax::{parse, parse_list};
use mvmodal::{Algebra, Formula};
use serde_json::{json, Value as Json};

#[derive(Parser)]
#[command(name = "mvmodal", version, about = "Many-valued modal logic workbench")]
struct Cli {
    /// Worker threads for parallel searches.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    plain: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Consequence {
    /// Premises: `;`-separated formulas, or `@FILE` with one per line.
    #[arg(long, default_value = "")]
    premises: String,
    #[arg(long)]
    conclusion: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum Chain {
    StdMv,
    ExpChain,
}

impl From<Chain> for ChainAlgebra {
    fn from(c: Chain) -> Self {
        match c {
            Chain::StdMv => ChainAlgebra::StdMv,
            Chain::ExpChain => ChainAlgebra::ExpChain,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Strict,
    Homomorphic,
}

#[derive(Subcommand)]
enum Command {
    /// Value of a formula at every world (or one world) of a model.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        formula: String,
        #[arg(long)]
        world: Option<String>,
    },
    /// Decide `premises ⊢ conclusion` on a model, a frame, all frames of a
    /// cardinality, or propositionally when none is given.
    Check {
        #[arg(long, conflicts_with_all = ["frame", "cardinality"])]
        model: Option<PathBuf>,
        #[arg(long, conflicts_with = "cardinality")]
        frame: Option<PathBuf>,
        #[arg(long)]
        cardinality: Option<usize>,
        #[arg(long)]
        algebra: Option<String>,
        #[command(flatten)]
        pair: Consequence,
    },
    /// Print the premises and conclusion encoding a PCP instance.
    PcpEncode {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Chain countermodel for a solution of a PCP instance.
    PcpModel {
        #[arg(long)]
        instance: PathBuf,
        /// 1-based indices, comma separated.
        #[arg(long)]
        solution: String,
        #[arg(long, value_enum, default_value = "std-mv")]
        algebra: Chain,
    },
    /// Read a solution off a countermodel to the encoding.
    PcpExtract {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        model: PathBuf,
        /// Top world; defaults to the last world of the model.
        #[arg(long)]
        world: Option<String>,
    },
    /// Reduce finite-model consequence to global consequence, optionally
    /// extending a countermodel refuted at `--world`.
    ReduceFin2glob {
        #[command(flatten)]
        pair: Consequence,
        #[arg(long, default_value = "p")]
        p: String,
        #[arg(long, default_value = "q")]
        q: String,
        #[arg(long, requires = "world")]
        model: Option<PathBuf>,
        #[arg(long)]
        world: Option<String>,
    },
    /// Translate Łukasiewicz formulas and/or a model to the power chain.
    L2p {
        #[arg(long)]
        premises: Option<String>,
        #[arg(long)]
        conclusion: Option<String>,
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long, default_value = "x")]
        x: String,
        #[arg(long, value_enum, default_value = "strict")]
        mode: Mode,
    },
    /// Standard first-order translation.
    Mod2fo {
        #[arg(long)]
        formula: String,
        /// Index of the free world variable.
        #[arg(long, default_value_t = 0)]
        var: usize,
    },
    /// Chain model separating global consequence from local consequence
    /// with necessitation.
    NecDemo {
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value = "std-mv")]
        algebra: Chain,
    },
    /// Emit the non-consequences found among a list of pairs.
    Coenum {
        /// JSON array of `{"premises": [...], "conclusion": ...}`.
        #[arg(long)]
        pairs: PathBuf,
        #[arg(long)]
        budget: usize,
        #[arg(long, default_value = "std-mv")]
        algebra: String,
    },
}

enum Failure {
    Input(String),
    Resource(String),
}

impl From<mvmodal::Error> for Failure {
    fn from(e: mvmodal::Error) -> Self {
        if e.is_resource() {
            Failure::Resource(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

type Run = Result<(Json, String, bool), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_json(path: &Path) -> Result<Json, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn formula_list(arg: &str) -> Result<Vec<Formula>, Failure> {
    match arg.strip_prefix('@') {
        Some(path) => Ok(parse_list(&read(Path::new(path))?)?),
        None => Ok(parse_list(arg)?),
    }
}

fn rendered(fs: &[Formula]) -> Vec<String> {
    fs.iter().map(Formula::render).collect()
}

fn world_index(m: &KripkeModel, name: Option<&str>) -> Result<usize, Failure> {
    match name {
        Some(n) => Ok(m.frame().index_of(n)?),
        None if m.frame().is_empty() => Err(Failure::Input("model has no worlds".into())),
        None => Ok(m.frame().len() - 1),
    }
}

fn model_plain(m: &KripkeModel) -> String {
    let mut out = String::new();
    let edges: Vec<String> = m
        .frame()
        .edges()
        .iter()
        .map(|(a, b)| format!("{}->{}", m.frame().name(*a), m.frame().name(*b)))
        .collect();
    let _ = writeln!(out, "algebra {}; edges: {}", m.algebra().name(), edges.join(" "));
    for w in m.frame().worlds() {
        let cells: Vec<String> = m
            .vars()
            .iter()
            .zip(m.row(w))
            .map(|(v, x)| format!("{v}={x}"))
            .collect();
        let _ = writeln!(out, "  {}: {}", m.frame().name(w), cells.join(" "));
    }
    out
}

fn verdict_plain(v: &Verdict) -> String {
    match &v.witness {
        None => "holds\n".into(),
        Some(w) => {
            let mut out = format!("fails: {} = {} at {}\n", w.formula, w.value, w.world);
            if let Some(m) = &w.model {
                out.push_str(&model_plain(m));
            }
            out
        }
    }
}

fn verdict_out(v: Verdict, alg: &Algebra) -> Run {
    Ok((io::verdict_to_json(&v, alg), verdict_plain(&v), v.holds))
}

fn eval(model: &Path, formula: &str, world: Option<&str>) -> Run {
    let m = io::model_from_json(&read_json(model)?)?;
    let f = parse(formula)?;
    let values = m.evaluate_all(&f)?;
    let worlds: Vec<usize> = match world {
        Some(name) => vec![m.frame().index_of(name)?],
        None => m.frame().worlds().collect(),
    };
    let mut map = serde_json::Map::new();
    let mut plain = String::new();
    for w in worlds {
        let name = m.frame().name(w);
        map.insert(name.into(), io::value_to_json(m.algebra(), &values[w]));
        let _ = writeln!(plain, "{name}: {}", values[w]);
    }
    let out = json!({ "formula": f.render(), "values": map });
    Ok((out, plain, true))
}

fn check(
    model: Option<&Path>,
    frame: Option<&Path>,
    cardinality: Option<usize>,
    algebra: Option<&str>,
    pair: &Consequence,
) -> Run {
    let gamma = formula_list(&pair.premises)?;
    let phi = parse(&pair.conclusion)?;
    if let Some(path) = model {
        let m = io::model_from_json(&read_json(path)?)?;
        if let Some(name) = algebra {
            if Algebra::from_name(name)? != *m.algebra() {
                return Err(Failure::Input(format!("model is over {}, not {name}", m.algebra().name())));
            }
        }
        let v = m.consequence_witness(&gamma, &phi)?;
        let v = match v.witness {
            Some(w) => Verdict::fails(w.with_model(m.clone())),
            None => v,
        };
        return verdict_out(v, m.algebra());
    }
    let alg = Algebra::from_name(algebra.ok_or_else(|| Failure::Input("--algebra is required".into()))?)?;
    let v = if let Some(path) = frame {
        let fr = io::frame_from_json(&read_json(path)?)?;
        decision::decide_on_frame(&fr, &gamma, &phi, &alg)?
    } else if let Some(j) = cardinality {
        decision::decide_cardinality(j, &gamma, &phi, &alg)?
    } else if alg == Algebra::StdMv {
        decision::luk_consequence(&gamma, &phi)?
    } else {
        decision::finite_consequence(&alg, &gamma, &phi)?
    };
    verdict_out(v, &alg)
}

fn instance(path: &Path) -> Result<pcp::PcpInstance, Failure> {
    Ok(io::instance_from_json(&read_json(path)?)?)
}

fn pcp_encode(path: &Path) -> Run {
    let enc = pcp::encode(&instance(path)?)?;
    let mut plain = String::new();
    for g in &enc.premises {
        let _ = writeln!(plain, "{g}");
    }
    let _ = writeln!(plain, "|- {}", enc.conclusion);
    let out = json!({ "premises": rendered(&enc.premises), "conclusion": enc.conclusion.render() });
    Ok((out, plain, true))
}

fn parse_solution(s: &str) -> Result<Vec<usize>, Failure> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Failure::Input(format!("bad index {t:?} in --solution")))
        })
        .collect()
}

fn pcp_model(path: &Path, solution: &str, alg: Chain) -> Run {
    let p = instance(path)?;
    let m = pcp::build_countermodel(&p, &parse_solution(solution)?, alg.into())?;
    Ok((io::model_to_json(&m), model_plain(&m), true))
}

fn pcp_extract(path: &Path, model: &Path, world: Option<&str>) -> Run {
    let p = instance(path)?;
    let m = io::model_from_json(&read_json(model)?)?;
    let top = world_index(&m, world)?;
    let sol = pcp::extract_solution(&p, &m, top)?;
    let plain = sol.iter().map(usize::to_string).collect::<Vec<_>>().join(",") + "\n";
    Ok((json!({ "solution": sol }), plain, true))
}

fn reduce(pair: &Consequence, p: &str, q: &str, model: Option<&Path>, world: Option<&str>) -> Run {
    let gamma = formula_list(&pair.premises)?;
    let phi = parse(&pair.conclusion)?;
    let (gamma2, phi2) = bridges::finite_to_global(&gamma, &phi, p, q)?;
    let mut out = json!({ "premises": rendered(&gamma2), "conclusion": phi2.render() });
    let mut plain = String::new();
    for g in &gamma2 {
        let _ = writeln!(plain, "{g}");
    }
    let _ = writeln!(plain, "|- {phi2}");
    if let Some(path) = model {
        let m = io::model_from_json(&read_json(path)?)?;
        let w = world_index(&m, world)?;
        let e = bridges::extend_model_pq(&m, w, p, q)?;
        out["model"] = io::model_to_json(&e);
        plain.push_str(&model_plain(&e));
    }
    Ok((out, plain, true))
}

fn l2p(premises: Option<&str>, conclusion: Option<&str>, model: Option<&Path>, x: &str, mode: Mode) -> Run {
    let mode = match mode {
        Mode::Strict => TranslationMode::Strict,
        Mode::Homomorphic => TranslationMode::Homomorphic,
    };
    if premises.is_none() && conclusion.is_none() && model.is_none() {
        return Err(Failure::Input("nothing to translate".into()));
    }
    let mut out = json!({});
    let mut plain = String::new();
    if premises.is_some() || conclusion.is_some() {
        let gamma = formula_list(premises.unwrap_or(""))?;
        let phi = conclusion.map(parse).transpose()?.unwrap_or(Formula::Const1);
        let (gamma2, phi2) = bridges::luk2prod(&gamma, &phi, x, mode)?;
        out["premises"] = json!(rendered(&gamma2));
        out["conclusion"] = json!(phi2.render());
        for g in &gamma2 {
            let _ = writeln!(plain, "{g}");
        }
        let _ = writeln!(plain, "|- {phi2}");
    }
    if let Some(path) = model {
        let m = bridges::model_l2p(&io::model_from_json(&read_json(path)?)?, x)?;
        out["model"] = io::model_to_json(&m);
        plain.push_str(&model_plain(&m));
    }
    Ok((out, plain, true))
}

fn mod2fo(formula: &str, var: usize) -> Run {
    let fo = bridges::modal_to_fo(&parse(formula)?, var);
    let out = json!({ "fo": fo.render(false), "ascii": fo.render(true) });
    Ok((out, format!("{fo}\n"), true))
}

fn nec_demo(n: u64, alg: Chain) -> Run {
    let m = necessitation::build_nec_model(n, alg.into())?;
    let rep = necessitation::check_separation(&m, n)?;
    let alg = m.algebra();
    let rows: Vec<Json> = m
        .frame()
        .worlds()
        .map(|w| {
            json!({
                "world": m.frame().name(w),
                "x": io::value_to_json(alg, m.value(w, "x").expect("x")),
                "y": io::value_to_json(alg, m.value(w, "y").expect("y")),
            })
        })
        .collect();
    let checks: Vec<Json> = rep
        .checks
        .iter()
        .map(|c| json!({ "depth": c.depth, "formula": c.formula.render(), "value": io::value_to_json(alg, &c.value) }))
        .collect();
    let out = json!({
        "n": rep.n,
        "algebra": rep.algebra,
        "checks": checks,
        "conclusion_value": io::value_to_json(alg, &rep.conclusion_value),
        "passed": rep.passed,
        "table": rows,
    });
    let mut plain = format!("{:<6} {:<16} {:<16}\n", "world", "e(i,x)", "e(i,y)");
    for w in m.frame().worlds() {
        let _ = writeln!(
            plain,
            "{:<6} {:<16} {:<16}",
            m.frame().name(w),
            m.value(w, "x").expect("x").to_string(),
            m.value(w, "y").expect("y").to_string()
        );
    }
    let _ = writeln!(
        plain,
        "{} premise checks at 1; x -> x*y = {} at 0: {}",
        rep.checks.len(),
        rep.conclusion_value,
        if rep.passed { "pass" } else { "FAIL" }
    );
    Ok((out, plain, rep.passed))
}

fn coenum(path: &Path, budget: usize, algebra: &str) -> Run {
    let alg = Algebra::from_name(algebra)?;
    let items = read_json(path)?;
    let items = items
        .as_array()
        .ok_or_else(|| Failure::Input("pairs file must hold a JSON array".into()))?;
    let mut pairs = Vec::with_capacity(items.len());
    for item in items {
        let premises = item["premises"]
            .as_array()
            .map(|a| a.iter().map(|s| s.as_str().map(parse)).collect::<Option<Result<Vec<_>, _>>>())
            .unwrap_or(Some(Ok(Vec::new())))
            .ok_or_else(|| Failure::Input("premises must be strings".into()))??;
        let conclusion = item["conclusion"]
            .as_str()
            .ok_or_else(|| Failure::Input("each pair needs a conclusion string".into()))?;
        pairs.push((premises, parse(conclusion)?));
    }
    let emitted = decision::coenumerate_nonconsequences(&pairs, budget, &alg)?;
    let mut plain = String::new();
    let list: Vec<Json> = emitted
        .iter()
        .map(|e| {
            let _ = writeln!(
                plain,
                "pair {} refuted at cardinality {}: {} = {} at {}",
                e.index, e.cardinality, e.witness.formula, e.witness.value, e.witness.world
            );
            json!({
                "index": e.index,
                "stage": e.stage,
                "cardinality": e.cardinality,
                "witness": io::witness_to_json(&e.witness, &alg),
            })
        })
        .collect();
    Ok((json!({ "emitted": list }), plain, true))
}

fn run(cli: &Cli) -> Run {
    match &cli.command {
        Command::Eval { model, formula, world } => eval(model, formula, world.as_deref()),
        Command::Check { model, frame, cardinality, algebra, pair } => check(
            model.as_deref(),
            frame.as_deref(),
            *cardinality,
            algebra.as_deref(),
            pair,
        ),
        Command::PcpEncode { instance } => pcp_encode(instance),
        Command::PcpModel { instance, solution, algebra } => pcp_model(instance, solution, *algebra),
        Command::PcpExtract { instance, model, world } => pcp_extract(instance, model, world.as_deref()),
        Command::ReduceFin2glob { pair, p, q, model, world } => {
            reduce(pair, p, q, model.as_deref(), world.as_deref())
        }
        Command::L2p { premises, conclusion, model, x, mode } => {
            l2p(premises.as_deref(), conclusion.as_deref(), model.as_deref(), x, *mode)
        }
        Command::Mod2fo { formula, var } => mod2fo(formula, *var),
        Command::NecDemo { n, algebra } => nec_demo(*n, *algebra),
        Command::Coenum { pairs, budget, algebra } => coenum(pairs, *budget, algebra),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok((out, plain, ok)) => {
            if cli.plain {
                print!("{plain}");
            } else {
                println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
            }
            ExitCode::from(if ok { 0 } else { 1 })
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Resource(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solutions_parse() {
        assert!(matches!(parse_solution("1, 2,1").as_deref(), Ok([1, 2, 1])));
        assert!(parse_solution("1,,2").is_err());
        assert!(parse_solution("x").is_err());
    }

    #[test]
    fn inline_premises() {
        assert_eq!(formula_list("p; []q").ok().map(|v| v.len()), Some(2));
        assert_eq!(formula_list("").ok().map(|v| v.len()), Some(0));
        assert!(formula_list("@/nonexistent").is_err());
    }

    #[test]
    fn cli_shape() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
