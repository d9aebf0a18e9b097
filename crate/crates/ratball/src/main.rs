use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use ratball::config::{self, RunConfig};
use ratball::dot::plumbing_to_dot;
use ratball::formats::{self, GraphInput, TreeFile, WitnessFile};
use ratball::sweep;
use ratball_core::cabling::{
    closed_form_two_iter, raw_plumbing, reduced_plumbing, CableTower, Plumbing, ReducedError, SurgerySpec,
};
use ratball_core::classify::ClassifyOptions;
use ratball_core::hjcf::{dual_point_rule, eval_neg_cf, expand_neg_cf, CoeffSeq, PositiveRational};
use ratball_core::lattice::{
    enumerate_embeddings_with, find_embedding_with, verify_embedding, SearchOptions, SearchOutcome,
};
use ratball_core::plumbing::{det_exact, gram_matrix, inertia, is_negative_definite, WeightedTree};
use serde::Serialize;

mod exit {
    pub const ERROR: u8 = 1;
    pub const NO_DEFINITE_FORM: u8 = 2;
    pub const NO_EMBEDDING: u8 = 3;
    pub const INDETERMINATE: u8 = 4;
}

/// Negative-definite plumbings of surgeries on iterated torus knots and
/// their lattice embeddings.
#[derive(Parser)]
#[command(name = "ratball", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand a fraction p/q > 1 as a negative continued fraction, or
    /// evaluate a coefficient list.
    Contfrac(ContfracArgs),
    /// Build the plumbing of a surgery.
    Graph(GraphArgs),
    /// Search for an embedding of a plumbing into (Zʳ, −Id).
    Embed(EmbedArgs),
    /// Classify every tuple of a parameter box.
    Sweep(SweepArgs),
    /// Sweep, then compare the verdicts with the predicted families.
    Audit(SweepArgs),
}

#[derive(Args)]
struct ContfracArgs {
    /// p/q, or a bare integer.
    fraction: Option<String>,
    /// Evaluate a comma separated coefficient list instead.
    #[arg(long, value_name = "COEFFS", conflicts_with = "fraction")]
    eval: Option<String>,
    /// Replace the sequence by its Riemenschneider dual.
    #[arg(long)]
    dual: bool,
    /// Reverse the sequence.
    #[arg(long)]
    reverse: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SpecArgs {
    /// Cable pairs p1,a1,p2,a2,...
    #[arg(long, allow_hyphen_values = true)]
    pairs: Option<String>,
    /// Surgery coefficient.
    #[arg(long, allow_hyphen_values = true)]
    n: Option<i64>,
}

impl SpecArgs {
    fn spec(&self) -> Result<Option<SurgerySpec>> {
        match (&self.pairs, self.n) {
            (None, None) => Ok(None),
            (Some(p), Some(n)) => {
                let knot = CableTower::new(formats::parse_pairs(p)?).map_err(|e| anyhow!("invalid cable: {}", e))?;
                Ok(Some(SurgerySpec::new(knot, n).map_err(|e| anyhow!("invalid surgery: {}", e))?))
            }
            _ => bail!("--pairs and --n go together"),
        }
    }
}

#[derive(Args)]
struct GraphArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// The plumbing read off the cable, before any moves.
    #[arg(long, group = "stage")]
    raw: bool,
    /// The normal form after blow-downs and absorptions (default).
    #[arg(long, group = "stage")]
    reduced: bool,
    /// The normal form written down directly (two iterations only).
    #[arg(long, group = "stage")]
    closed_form: bool,
    /// Write Graphviz; to stdout without a path.
    #[arg(long, value_name = "PATH", num_args = 0..=1, default_missing_value = "-")]
    dot: Option<PathBuf>,
    /// Write the tree as JSON; to stdout without a path.
    #[arg(long, value_name = "PATH", num_args = 0..=1, default_missing_value = "-")]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct EmbedArgs {
    /// A tree or spec JSON file.
    graph: Option<PathBuf>,
    #[command(flatten)]
    spec: SpecArgs,
    /// Target rank; defaults to the number of vertices.
    #[arg(long)]
    rank: Option<usize>,
    /// List every embedding up to signed permutations of the target.
    #[arg(long)]
    enumerate: bool,
    /// With --enumerate, keep only locally minimal embeddings.
    #[arg(long, requires = "enumerate")]
    locally_minimal: bool,
    /// Node limit, or `unlimited`.
    #[arg(long)]
    budget: Option<String>,
    /// Where the witness goes; defaults to witness.json in the output
    /// directory.
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Flat `key = value` file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Lists like 2,3 or ranges like 1-25.
    #[arg(long, allow_hyphen_values = true)]
    p1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    k1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    p2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    k2: Option<String>,
    /// N = n − p₂α₂.
    #[arg(long = "big-n", allow_hyphen_values = true)]
    big_n: Option<String>,
    /// both, minus or plus: α₂ ≡ ∓1 (mod p₂).
    #[arg(long)]
    congruence: Option<String>,
    #[arg(long)]
    budget: Option<String>,
    #[arg(long)]
    workers: Option<String>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// printed or derived.
    #[arg(long)]
    family_form: Option<String>,
    /// CSV path; defaults to sweep.csv in the output directory.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Fill the ms column.
    #[arg(long)]
    timing: bool,
}

impl SweepArgs {
    fn config(&self) -> Result<RunConfig> {
        let file = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        let mut flags = RunConfig::default();
        let pairs = [
            ("p1", &self.p1),
            ("k1", &self.k1),
            ("p2", &self.p2),
            ("k2", &self.k2),
            ("N", &self.big_n),
            ("congruence", &self.congruence),
            ("budget", &self.budget),
            ("workers", &self.workers),
            ("family_form", &self.family_form),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                flags.set(key, v).with_context(|| format!("--{}", key))?;
            }
        }
        flags.out_dir = self.out_dir.clone();
        if self.timing {
            flags.timing = Some(true);
        }
        Ok(file.overlay(flags))
    }
}

fn emit(path: &std::path::Path, text: &str) -> Result<()> {
    if path.as_os_str() == "-" {
        print!("{}", text);
        Ok(())
    } else {
        sweep::write_text(path, text)
    }
}

#[derive(Serialize)]
struct ContfracJson {
    coefficients: Vec<String>,
    value: String,
}

fn cmd_contfrac(a: ContfracArgs) -> Result<u8> {
    let mut seq = match (&a.fraction, &a.eval) {
        (Some(f), None) => {
            let x: PositiveRational = f.parse().map_err(|e| anyhow!("{}", e))?;
            expand_neg_cf(&x).map_err(|e| anyhow!("{}: {}", f, e))?
        }
        (None, Some(c)) => c.parse::<CoeffSeq>().map_err(|e| anyhow!("{}", e))?,
        _ => bail!("give a fraction or --eval COEFFS"),
    };
    if a.dual {
        seq = dual_point_rule(&seq);
    }
    if a.reverse {
        seq = seq.reversed();
    }
    let value = eval_neg_cf(&seq);
    if a.json {
        let j = ContfracJson {
            coefficients: seq.as_slice().iter().map(|c| c.to_string()).collect(),
            value: value.to_string(),
        };
        print!("{}", formats::to_json_string(&j));
    } else if a.eval.is_some() {
        println!("{}", value);
    } else {
        println!("{}", seq);
    }
    Ok(0)
}

fn describe(t: &WeightedTree) -> String {
    let g = gram_matrix(t);
    let i = inertia(&g);
    format!(
        "rank {}\ndet {}\nnegative definite {}\ninertia +{} -{} 0:{}\n",
        t.len(),
        det_exact(&g).magnitude(),
        if is_negative_definite(&g) { "yes" } else { "no" },
        i.positive,
        i.negative,
        i.zero
    )
}

fn cmd_graph(a: GraphArgs) -> Result<u8> {
    let s = a.spec.spec()?.context("graph needs --pairs and --n")?;
    if !s.knot().is_algebraic() {
        eprintln!("error: {} is not algebraic", s.knot());
        return Ok(exit::ERROR);
    }
    let p: Plumbing = if a.raw {
        raw_plumbing(&s).map_err(|e| anyhow!("{}", e))?
    } else {
        let r = if a.closed_form {
            if s.big_n() < 0 {
                Err(ReducedError::NoNegativeDefiniteForm { big_n: s.big_n() })
            } else {
                closed_form_two_iter(&s).map_err(ReducedError::from)
            }
        } else {
            reduced_plumbing(&s).map(|r| r.plumbing)
        };
        match r {
            Ok(p) => p,
            Err(ReducedError::NoNegativeDefiniteForm { big_n }) => {
                eprintln!("error: no negative definite form (N = {})", big_n);
                return Ok(exit::NO_DEFINITE_FORM);
            }
            Err(e) => bail!("{}", e),
        }
    };
    let summary = describe(&p.tree);
    let to_stdout = [&a.dot, &a.json].iter().any(|o| o.as_ref().is_some_and(|p| p.as_os_str() == "-"));
    if to_stdout {
        eprint!("{}", summary);
    } else {
        print!("{}", summary);
    }
    if let Some(path) = &a.json {
        emit(path, &formats::to_json_string(&TreeFile::from_plumbing(&p)))?;
    }
    if let Some(path) = &a.dot {
        emit(path, &plumbing_to_dot(&p))?;
    }
    Ok(0)
}

fn cmd_embed(a: EmbedArgs) -> Result<u8> {
    let tree = match (&a.graph, a.spec.spec()?) {
        (Some(path), None) => match formats::read_json::<GraphInput>(path)? {
            GraphInput::Tree(t) => t.to_tree()?,
            GraphInput::Spec(s) => spec_tree(&s.to_spec()?)?,
        },
        (None, Some(s)) => spec_tree(&s)?,
        (Some(_), Some(_)) => bail!("give a graph file or --pairs/--n, not both"),
        (None, None) => bail!("embed needs a graph file or --pairs and --n"),
    };
    let g = gram_matrix(&tree);
    if !is_negative_definite(&g) {
        eprintln!("error: the intersection form is not negative definite");
        return Ok(exit::ERROR);
    }
    let rank = a.rank.unwrap_or(g.dim());
    if rank == 0 {
        bail!("rank must be positive");
    }
    let budget = match &a.budget {
        Some(b) => config::parse_budget(b)?,
        None => ClassifyOptions::default().search.budget,
    };
    let opts = SearchOptions { budget, ..SearchOptions::default() };
    if a.enumerate {
        let e = enumerate_embeddings_with(&g, rank, a.locally_minimal, &opts).map_err(|e| anyhow!("{}", e))?;
        println!("classes {}", e.classes.len());
        println!("up to automorphisms {}", e.up_to_automorphisms);
        for (i, m) in e.classes.iter().enumerate() {
            println!("class {}:\n{}", i + 1, m.render());
        }
        return Ok(if e.classes.is_empty() { exit::NO_EMBEDDING } else { 0 });
    }
    let rep = find_embedding_with(&g, rank, &opts).map_err(|e| anyhow!("{}", e))?;
    match rep.outcome {
        SearchOutcome::Found(m) => {
            assert_eq!(verify_embedding(&g, &m), Ok(true));
            let out = match a.out {
                Some(p) => p,
                None => {
                    let cfg = RunConfig { out_dir: a.out_dir, ..RunConfig::default() };
                    cfg.out_dir().join("witness.json")
                }
            };
            formats::write_json(&out, &WitnessFile::from_matrix(&m))?;
            println!("found rank {} nodes {}", rank, rep.nodes);
            print!("{}", m.render());
            println!("witness {}", out.display());
            Ok(0)
        }
        SearchOutcome::None => {
            println!("none rank {} nodes {}", rank, rep.nodes);
            Ok(exit::NO_EMBEDDING)
        }
        SearchOutcome::Indeterminate => {
            println!("indeterminate rank {} nodes {}", rank, rep.nodes);
            Ok(exit::INDETERMINATE)
        }
    }
}

fn spec_tree(s: &SurgerySpec) -> Result<WeightedTree> {
    match reduced_plumbing(s) {
        Ok(r) => Ok(r.plumbing.tree),
        Err(ReducedError::NotNegativeDefinite(t)) => Ok(t),
        Err(e) => bail!("{}", e),
    }
}

fn cmd_sweep(a: SweepArgs, audit: bool) -> Result<u8> {
    let cfg = a.config()?;
    let range = cfg.range()?;
    let opts = ClassifyOptions::with_budget(cfg.budget());
    let rows = sweep::parallel_sweep(&range, &opts, cfg.workers())?;
    let dir = cfg.out_dir();
    let csv_path = a.csv.clone().unwrap_or_else(|| dir.join("sweep.csv"));
    let csv = sweep::rows_to_csv(&rows, cfg.timing())?;
    let witness_root = csv_path.parent().map(PathBuf::from).unwrap_or_default();
    emit(&csv_path, &csv)?;
    sweep::write_witnesses(&witness_root, &rows)?;
    let passes = rows.iter().filter(|r| r.row.verdict.passes()).count();
    let indeterminate = rows.iter().filter(|r| r.row.verdict.label() == "indeterminate").count();
    let log: &mut dyn std::io::Write =
        if csv_path.as_os_str() == "-" { &mut std::io::stderr() } else { &mut std::io::stdout() };
    writeln!(log, "rows {} passes {} indeterminate {}", rows.len(), passes, indeterminate)?;
    if !audit {
        return Ok(0);
    }
    let (rep, json) = sweep::audit(&rows, cfg.family_form());
    let audit_path = dir.join("audit.json");
    formats::write_json(&audit_path, &json)?;
    writeln!(
        log,
        "audit {} agreements {} disagreements {} indeterminate {} skipped {}",
        cfg.family_form(),
        rep.agreements,
        rep.disagreements.len(),
        rep.indeterminate.len(),
        rep.skipped
    )?;
    for d in &json.disagreements {
        let t = &d.tuple;
        writeln!(log, "  ({},{};{},{};{}) predicted {} got {}", t.p1, t.a1, t.p2, t.a2, t.n, d.predicted, d.verdict)?;
    }
    writeln!(log, "report {}", audit_path.display())?;
    Ok(if rep.is_perfect() { 0 } else { exit::ERROR })
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Contfrac(a) => cmd_contfrac(a),
        Command::Graph(a) => cmd_graph(a),
        Command::Embed(a) => cmd_embed(a),
        Command::Sweep(a) => cmd_sweep(a, false),
        Command::Audit(a) => cmd_sweep(a, true),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::ERROR } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(exit::ERROR)
        }
    }
}
