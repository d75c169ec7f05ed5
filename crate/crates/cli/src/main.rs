use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use isogeny_lab::galmod::{
    fixed_subspace, graph_order, is_semisimple_with_cap, theorem2_construct, GalmodError, ModuleRecord, CLOSURE_CAP,
};
use isogeny_lab::verify::{
    self, ClaimStatus, SuiteOptions, VerificationReport, VerifyError, VerifyOptions, Witness, TOOL, VERSION,
};

const THREADS_ENV: &str = "ISOGENY_LAB_THREADS";

#[derive(Parser, Debug)]
#[command(name = "isogeny-lab", version, about = "Pointed isogeny graphs and fixed points of Galois modules mod ℓ")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Worker threads; falls back to ISOGENY_LAB_THREADS, then to the number of CPUs.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Largest field size accepted by the curve subcommands.
    #[arg(long, default_value_t = 100_000, global = true)]
    max_q: u64,
    /// Largest number of source curves scanned per field.
    #[arg(long, global = true)]
    max_curves: Option<usize>,
    /// Largest group closure enumerated by the semisimplicity test.
    #[arg(long, default_value_t = CLOSURE_CAP, global = true)]
    closure_cap: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that targets of order-2 pointed graphs over F_q have full rational ℓ-torsion.
    Theorem1 {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        ell: u64,
    },
    /// Run the fixed-vector construction on product configurations of order n.
    Theorem2 {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        n: usize,
    },
    /// Reproduce the example over ℚ, or the abstract non-semisimple module.
    Counterexample {
        #[arg(long, conflicts_with = "abstract_")]
        paper: bool,
        #[arg(long = "abstract")]
        abstract_: bool,
    },
    /// Check distinct dual kernels and the lattice dimensions on one field.
    Lemmas {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        ell: u64,
    },
    /// Evaluate a query on a module read from JSON.
    Module {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        op: ModuleOp,
    },
    /// Sweep all primes 5 ≤ q < q-max for each ℓ.
    Sweep {
        #[arg(long, value_delimiter = ',', required = true)]
        ell_list: Vec<u64>,
        #[arg(long)]
        q_max: u64,
    },
    /// Run one of the randomized module suites.
    Suite {
        #[arg(long, value_enum)]
        kind: SuiteKind,
        #[arg(long, default_value_t = 1000)]
        instances: usize,
    },
    /// Re-run the check recorded in a witness file (a witness or a whole report).
    Replay { file: PathBuf },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ModuleOp {
    Fixed,
    Semisimple,
    Order,
    Construct,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SuiteKind {
    Lattice,
    Construction,
    Cyclic,
}

/// Exit 1 for bad input and exceeded caps.
struct Failure(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.into())
    }
}

enum Output {
    Report(Box<VerificationReport>),
    Value { value: Value, text: String, violated: bool },
}

fn resolve_threads(flag: Option<usize>) -> anyhow::Result<usize> {
    let n = match flag {
        Some(n) => n,
        None => match std::env::var(THREADS_ENV) {
            Ok(s) => s.trim().parse().with_context(|| format!("{THREADS_ENV}={s:?} is not a thread count"))?,
            Err(_) => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
        },
    };
    if n == 0 {
        bail!("the thread count must be positive");
    }
    Ok(n)
}

fn check_q(g: &Global, q: u64) -> Result<(), Failure> {
    if q > g.max_q {
        return Err(anyhow!("capability exceeded: q = {q} is above --max-q {}", g.max_q).into());
    }
    Ok(())
}

fn verify_options(g: &Global, threads: usize) -> VerifyOptions {
    let mut o = VerifyOptions::with_seed(g.seed);
    if let Some(c) = g.max_curves {
        o.graph.curve_limit = c;
    }
    o.threads = Some(threads);
    o
}

fn read_json(path: &PathBuf) -> anyhow::Result<Value> {
    let s = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&s).with_context(|| format!("{} is not valid JSON", path.display()))
}

fn module_op(g: &Global, input: &PathBuf, op: ModuleOp) -> Result<Output, Failure> {
    let record: ModuleRecord = serde_json::from_value(read_json(input)?)
        .with_context(|| format!("{} is not a module record", input.display()))?;
    let module = record.module()?;
    let (result, text) = match op {
        ModuleOp::Fixed => {
            let f = fixed_subspace(&module);
            let text = format!("fixed subspace of dimension {}: {:?}", f.dim(), f.basis());
            (json!({ "dimension": f.dim(), "basis": f.basis() }), text)
        }
        ModuleOp::Semisimple => {
            let s = is_semisimple_with_cap(&module, g.closure_cap)?;
            (json!({ "semisimple": s }), format!("semisimple: {s}"))
        }
        ModuleOp::Order => {
            let cfg = record.configuration()?;
            let n = graph_order(&cfg.hyperplanes);
            (json!({ "order": n }), format!("order: {n}"))
        }
        ModuleOp::Construct => {
            let cfg = record.configuration()?;
            if !is_semisimple_with_cap(&cfg.module, g.closure_cap)? {
                return Err(anyhow!("the module is not semisimple, so the construction does not apply").into());
            }
            let vs = theorem2_construct(&cfg)?;
            let text = format!("{} independent fixed vectors: {vs:?}", vs.len());
            (json!({ "order": cfg.order(), "vectors": vs }), text)
        }
    };
    let op_name = format!("{op:?}").to_lowercase();
    let value = json!({
        "tool": TOOL,
        "version": VERSION,
        "kind": "module",
        "parameters": { "op": op_name, "closure_cap": g.closure_cap, "module": record },
        "result": result,
    });
    Ok(Output::Value { value, text: format!("{TOOL} {VERSION}: module {op_name}\n{text}\n"), violated: false })
}

/// Accepts a bare witness, a violation, or a report; reports replay their
/// first violation.
fn load_witness(path: &PathBuf) -> anyhow::Result<Witness> {
    let v = read_json(path)?;
    let w = if v.get("kind").and_then(Value::as_str).is_some() && v.get("violations").is_some() {
        v["violations"].get(0).map(|x| x["witness"].clone()).ok_or_else(|| anyhow!("the report has no violations"))?
    } else if let Some(w) = v.get("witness") {
        w.clone()
    } else {
        v
    };
    serde_json::from_value(w).map_err(|e| anyhow!("malformed witness: {e}"))
}

fn replay(path: &PathBuf) -> Result<Output, Failure> {
    let w = load_witness(path)?;
    let out = verify::replay(&w)?;
    let violated = out.status == ClaimStatus::Violated;
    let text = format!("{TOOL} {VERSION}: replay\n  {}: {}\n  {}\n", out.claim, out.status.as_str(), out.detail);
    let value = json!({ "tool": TOOL, "version": VERSION, "kind": "replay", "witness": w, "outcome": out });
    Ok(Output::Value { value, text, violated })
}

fn run(cli: &Cli, threads: usize) -> Result<Output, Failure> {
    let g = &cli.global;
    let opts = verify_options(g, threads);
    let suite = SuiteOptions { instances: 0, seed: g.seed, threads: Some(threads) };
    let report = match &cli.command {
        Command::Theorem1 { q, ell } => {
            check_q(g, *q)?;
            verify::verify_theorem1(*q, *ell, &opts)?
        }
        Command::Theorem2 { q, ell, n } => {
            check_q(g, *q)?;
            verify::verify_theorem2_products(*q, *ell, *n, &opts)?
        }
        Command::Lemmas { q, ell } => {
            check_q(g, *q)?;
            verify::lemma_sweep(*q, *ell, &opts)?
        }
        Command::Sweep { ell_list, q_max } => {
            check_q(g, q_max.saturating_sub(1))?;
            verify::sweep(ell_list, *q_max, &opts)?
        }
        Command::Counterexample { abstract_: true, .. } => verify::abstract_necessity_witness(),
        Command::Counterexample { .. } => verify::reproduce_paper_counterexample(),
        Command::Suite { kind, instances } => {
            if *instances == 0 {
                return Err(anyhow!("--instances must be positive").into());
            }
            let s = SuiteOptions { instances: *instances, ..suite };
            match kind {
                SuiteKind::Lattice => verify::lattice_suite(&s)?,
                SuiteKind::Construction => verify::construction_suite(&s)?,
                SuiteKind::Cyclic => verify::cyclic_suite(&s)?,
            }
        }
        Command::Module { input, op } => return module_op(g, input, *op),
        Command::Replay { file } => return replay(file),
    };
    Ok(Output::Report(Box::new(report)))
}

fn emit(g: &Global, out: &Output) -> anyhow::Result<()> {
    let body = match (out, g.format) {
        (Output::Report(r), Format::Json) => r.to_json() + "\n",
        (Output::Report(r), Format::Text) => r.to_text(),
        (Output::Value { value, .. }, Format::Json) => serde_json::to_string_pretty(value)? + "\n",
        (Output::Value { text, .. }, Format::Text) => text.clone(),
    };
    match &g.output {
        Some(p) => fs::write(p, body).with_context(|| format!("cannot write {}", p.display())),
        None => std::io::stdout().write_all(body.as_bytes()).context("cannot write to stdout"),
    }
}

fn describe(e: &anyhow::Error) -> String {
    match e.downcast_ref::<VerifyError>() {
        Some(v) if v.is_capability() => format!("capability exceeded: {v}"),
        _ => match e.downcast_ref::<GalmodError>() {
            Some(GalmodError::Capability(m)) => format!("capability exceeded: {m}"),
            _ => format!("{e:#}"),
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // exit 2 is reserved for violations
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let threads = match resolve_threads(cli.global.threads) {
        Ok(n) => n,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start {threads} worker threads: {e}");
            return ExitCode::from(1);
        }
    };
    let out = match pool.install(|| run(&cli, threads)) {
        Ok(o) => o,
        Err(Failure(e)) => {
            eprintln!("error: {}", describe(&e));
            return ExitCode::from(1);
        }
    };
    if let Err(e) = emit(&cli.global, &out) {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    let violated = match &out {
        Output::Report(r) => !r.is_clean(),
        Output::Value { violated, .. } => *violated,
    };
    ExitCode::from(if violated { 2 } else { 0 })
}
