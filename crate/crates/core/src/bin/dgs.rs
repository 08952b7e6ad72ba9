use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use dgs_core::arith::Budget;
use dgs_core::criterion::{Analysis, DgsVerdict, FailedClause, VerdictKind};
use dgs_core::graph::encode_graph6;
use dgs_core::input::{read_graphs, Diagnostic, GraphRecord};
use dgs_core::oracle::{format_oracle_report, gm_mates, oracle_summary, Mate, MAX_ENUMERATION_ORDER};
use dgs_core::report::SCHEMA_VERSION;
use dgs_core::survey::{run_survey, SurveyRow, CSV_HEADER};
use dgs_core::{walk, Graph, SquarefreeStatus};

const EXIT_FAILURE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_UNKNOWN: u8 = 3;

#[derive(Parser)]
#[command(name = "dgs", version, about = "Walk-matrix certificates for graphs determined by their generalized spectrum")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Graph file (graph6 or adjacency text); repeatable. Reads stdin when absent.
    #[arg(long, global = true)]
    input: Vec<PathBuf>,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    /// Graphs sampled per order (survey).
    #[arg(long, global = true, default_value_t = 1000)]
    samples: usize,

    /// Comma-separated graph orders (survey, oracle).
    #[arg(long, global = true, value_delimiter = ',')]
    sizes: Vec<usize>,

    /// Trial-division bound for square-free certification.
    #[arg(long, global = true, env = "DGS_TRIAL_BOUND", default_value_t = Budget::default().trial_bound,
          value_parser = clap::value_parser!(u64).range(1..))]
    trial_bound: u64,

    /// Pollard rho iteration budget.
    #[arg(long, global = true, env = "DGS_RHO_BUDGET", default_value_t = Budget::default().rho_iterations,
          value_parser = clap::value_parser!(u64).range(1..))]
    rho_budget: u64,

    /// Elliptic-curve budget (number of curves) after rho gives up.
    #[arg(long, global = true, env = "DGS_ECM_CURVES", default_value_t = Budget::default().ecm_curves)]
    ecm_curves: u64,

    #[arg(long, global = true, env = "DGS_WORKERS", default_value_t = 1)]
    workers: usize,

    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Certify each input graph.
    Check,
    /// Fraction of random graphs certified by the F_n test.
    Survey,
    /// Exhaustive cospectral-class cross-check at small order.
    Oracle,
    /// Godsil-McKay mates of each input graph with Q forensics.
    Mate,
    /// Smith normal form of the walk matrix.
    Snf,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Human,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<dgs_core::Error> for Failure {
    fn from(e: dgs_core::Error) -> Self {
        Failure::new(EXIT_FAILURE, e.to_string())
    }
}

/// Report text plus the exit code it implies.
struct Outcome {
    text: String,
    code: u8,
}

struct Source {
    name: String,
    record: Result<GraphRecord, Diagnostic>,
}

impl Source {
    fn location(&self) -> String {
        let line = match &self.record {
            Ok(r) => r.line,
            Err(d) => d.line,
        };
        format!("{}:{}", self.name, line)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if let Err(e) = emit(&cli, &out.text) {
                eprintln!("dgs: {e}");
                return ExitCode::from(EXIT_FAILURE);
            }
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("dgs: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn emit(cli: &Cli, text: &str) -> io::Result<()> {
    match &cli.output {
        Some(path) => fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn budget(cli: &Cli) -> Budget {
    Budget {
        trial_bound: cli.trial_bound,
        rho_iterations: cli.rho_budget,
        ecm_curves: cli.ecm_curves,
    }
}

fn pool(cli: &Cli) -> Result<rayon::ThreadPool, Failure> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.workers.max(1))
        .build()
        .map_err(|e| Failure::new(EXIT_FAILURE, format!("thread pool: {e}")))
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let format = |default: Format, allowed: &[Format]| -> Result<Format, Failure> {
        let f = cli.format.unwrap_or(default);
        if allowed.contains(&f) {
            Ok(f)
        } else {
            Err(Failure::new(EXIT_FAILURE, "this subcommand does not support the requested format"))
        }
    };
    match cli.command {
        Command::Check => cmd_check(cli, format(Format::Json, &[Format::Json, Format::Human])?),
        Command::Survey => cmd_survey(cli, format(Format::Csv, &[Format::Csv, Format::Json, Format::Human])?),
        Command::Oracle => cmd_oracle(cli, format(Format::Human, &[Format::Json, Format::Human])?),
        Command::Mate => cmd_mate(cli, format(Format::Human, &[Format::Json, Format::Human])?),
        Command::Snf => cmd_snf(cli, format(Format::Human, &[Format::Json, Format::Human])?),
    }
}

/// Reads every input in order. Unreadable files are fatal (exit 2).
fn load_sources(cli: &Cli) -> Result<Vec<Source>, Failure> {
    let mut texts = Vec::new();
    if cli.input.is_empty() {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::new(EXIT_PARSE, format!("<stdin>: {e}")))?;
        texts.push(("<stdin>".to_string(), s));
    }
    for path in &cli.input {
        let name = path.display().to_string();
        let s = fs::read_to_string(path).map_err(|e| Failure::new(EXIT_PARSE, format!("{name}: {e}")))?;
        texts.push((name, s));
    }
    Ok(texts
        .into_iter()
        .flat_map(|(name, text)| {
            read_graphs(&text).into_iter().map(move |record| Source {
                name: name.clone(),
                record,
            })
        })
        .collect())
}

/// Prints parse diagnostics to stderr; returns whether there were any.
fn report_diagnostics(sources: &[Source]) -> bool {
    let mut any = false;
    for s in sources {
        if let Err(d) = &s.record {
            eprintln!("{}: {}", s.location(), d.message);
            any = true;
        }
    }
    any
}

fn to_json_line(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("report values serialize");
    s.push('\n');
    s
}

fn cmd_check(cli: &Cli, format: Format) -> Result<Outcome, Failure> {
    let sources = load_sources(cli)?;
    let parse_error = report_diagnostics(&sources);
    let budget = budget(cli);
    let graphs: Vec<(&Source, &Graph)> = sources
        .iter()
        .filter_map(|s| s.record.as_ref().ok().map(|r| (s, &r.graph)))
        .collect();
    let verdicts: Vec<Result<DgsVerdict, dgs_core::Error>> = pool(cli)?.install(|| {
        graphs
            .par_iter()
            .map(|(_, g)| Analysis::new(g, &budget).map(|mut a| a.certify()))
            .collect()
    });

    let mut text = String::new();
    let mut unknown = false;
    for ((source, g), verdict) in graphs.iter().zip(verdicts) {
        let verdict = verdict?;
        unknown |= verdict.kind == VerdictKind::FactorizationUnknown;
        match format {
            Format::Json => {
                let mut v = serde_json::to_value(&verdict).expect("verdict serializes");
                let obj = v.as_object_mut().expect("verdict is an object");
                obj.insert("source".into(), json!(source.location()));
                obj.insert("graph6".into(), json!(encode_graph6(g)));
                obj.insert("seed".into(), json!(cli.seed));
                text.push_str(&to_json_line(&v));
            }
            _ => text.push_str(&human_verdict(&source.location(), g, &verdict, cli.seed)),
        }
    }
    let code = if parse_error {
        EXIT_PARSE
    } else if unknown {
        EXIT_UNKNOWN
    } else {
        0
    };
    Ok(Outcome { text, code })
}

fn human_verdict(location: &str, g: &Graph, v: &DgsVerdict, seed: u64) -> String {
    let e = &v.evidence;
    let n = e.order;
    let mut out = String::new();
    let mut line = |s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    line(format!("source    {location}"));
    line(format!("graph6    {}", encode_graph6(g)));
    line(format!("order     {n}"));
    line(format!("det W     {}", e.det_w));
    if let Some(val) = &e.valuation {
        line(format!(
            "2-adic    det W = {}2^{} * {}   (floor(n/2) = {})",
            if val.negative { "-" } else { "" },
            val.alpha,
            val.odd_part,
            n / 2
        ));
    }
    if let Some(sf) = &e.squarefree {
        let mut factors: Vec<String> = sf
            .found_factors
            .iter()
            .map(|p| {
                if p.exponent == 1 {
                    p.prime.to_string()
                } else {
                    format!("{}^{}", p.prime, p.exponent)
                }
            })
            .collect();
        if sf.residual != 1u32.into() {
            factors.push(format!("{} [{:?}]", sf.residual, sf.residual_class));
        }
        let status = match sf.status {
            SquarefreeStatus::SquareFree => "square-free".to_string(),
            SquarefreeStatus::NotSquareFree => format!(
                "not square-free, {}^2 divides b",
                sf.repeated_prime.as_ref().map(|p| p.to_string()).unwrap_or_default()
            ),
            SquarefreeStatus::Unknown => "unknown within budget".to_string(),
        };
        let shown = if factors.is_empty() { "1".to_string() } else { factors.join(" * ") };
        line(format!("b         {shown}   ({status})"));
    }
    if let Some(diag) = &e.snf_diag {
        let snf = dgs_core::SnfResult {
            diag: diag.clone(),
            u: None,
            v: None,
        };
        let (shape, b) = snf.shape();
        line(format!("SNF       {shape}   (b = {b})"));
    }
    line(format!("rank2 W   {}   (ceil(n/2) = {})", e.rank2_w, n.div_ceil(2)));
    if let Some(ws) = &e.kernel_witness {
        if ws.is_empty() {
            line("kernel    trivial".to_string());
        }
        for w in ws {
            line(format!(
                "kernel    v = {}   W v = {}",
                w.v.to_bit_string(),
                w.w_times_v.to_bit_string()
            ));
        }
    }
    for c in &v.failed {
        line(format!("failed    {}", describe_clause(c)));
    }
    line(format!("verdict   {:?}", v.kind));
    line(format!("seed      {seed}"));
    out.push('\n');
    out
}

fn describe_clause(c: &FailedClause) -> String {
    match c {
        FailedClause::FnValuation { alpha, required } => {
            format!("2-adic valuation of det W is {alpha}, F_n needs {required}")
        }
        FailedClause::OddPartNotSquareFree => "odd part of det W is not square-free".to_string(),
        FailedClause::Rank2 { rank, required } => format!("rank of W over GF(2) is {rank}, needs {required}"),
        FailedClause::SnfShape { reason } => format!("Smith form shape: {reason}"),
        FailedClause::KernelContainment { index } => {
            format!("kernel vector {index} of W^T W1 / 2 is not killed by W mod 2")
        }
    }
}

fn cmd_survey(cli: &Cli, format: Format) -> Result<Outcome, Failure> {
    if cli.sizes.is_empty() {
        return Err(Failure::new(EXIT_FAILURE, "survey needs --sizes"));
    }
    let rows = run_survey(&cli.sizes, cli.samples, cli.seed, &budget(cli), cli.workers)?;
    let text = match format {
        Format::Csv => {
            let mut s = format!("{CSV_HEADER}\n");
            for r in &rows {
                s.push_str(&r.to_csv());
                s.push('\n');
            }
            s
        }
        Format::Json => to_json_line(&json!({
            "schema": SCHEMA_VERSION,
            "seed": cli.seed,
            "rows": rows,
        })),
        Format::Human => human_survey(&rows, cli.seed),
    };
    let code = if rows.iter().any(|r| r.count_unknown > 0) {
        EXIT_UNKNOWN
    } else {
        0
    };
    Ok(Outcome { text, code })
}

fn human_survey(rows: &[SurveyRow], seed: u64) -> String {
    let mut s = format!("seed {seed}\n{:>4} {:>8} {:>8} {:>8} {:>9} {:>10}\n", "n", "samples", "in F_n", "unknown", "fraction", "ms");
    for r in rows {
        s.push_str(&format!(
            "{:>4} {:>8} {:>8} {:>8} {:>9.3} {:>10}\n",
            r.n, r.samples, r.count_fn, r.count_unknown, r.fraction, r.elapsed_ms
        ));
    }
    s
}

fn cmd_oracle(cli: &Cli, format: Format) -> Result<Outcome, Failure> {
    let sizes = if cli.sizes.is_empty() {
        (1..=MAX_ENUMERATION_ORDER).collect()
    } else {
        cli.sizes.clone()
    };
    let budget = budget(cli);
    let rows = sizes
        .iter()
        .map(|&n| oracle_summary(n, &budget))
        .collect::<Result<Vec<_>, _>>()?;
    let text = match format {
        Format::Json => to_json_line(&json!({
            "schema": SCHEMA_VERSION,
            "seed": cli.seed,
            "rows": rows,
        })),
        _ => format_oracle_report(&rows, cli.seed),
    };
    let code = if rows.iter().any(|r| r.violations > 0) {
        EXIT_FAILURE
    } else {
        0
    };
    Ok(Outcome { text, code })
}

fn cmd_mate(cli: &Cli, format: Format) -> Result<Outcome, Failure> {
    let sources = load_sources(cli)?;
    let parse_error = report_diagnostics(&sources);
    let budget = budget(cli);
    let mut text = String::new();
    for source in &sources {
        let Ok(rec) = &source.record else { continue };
        let g = &rec.graph;
        let mates = gm_mates(g, &budget)?;
        match format {
            Format::Json => text.push_str(&to_json_line(&json!({
                "schema": SCHEMA_VERSION,
                "seed": cli.seed,
                "source": source.location(),
                "graph6": encode_graph6(g),
                "mates": mates,
            }))),
            _ => text.push_str(&human_mates(&source.location(), g, &mates, cli.seed)),
        }
    }
    Ok(Outcome {
        text,
        code: if parse_error { EXIT_PARSE } else { 0 },
    })
}

fn human_mates(location: &str, g: &Graph, mates: &[Mate], seed: u64) -> String {
    let mut s = format!("source    {location}\ngraph6    {}\nmates     {}\n", encode_graph6(g), mates.len());
    for m in mates {
        let cell: Vec<String> = m.partition.cell.iter().map(|v| v.to_string()).collect();
        s.push_str(&format!(
            "mate      {}   cell {{{}}}   same key {}\n",
            m.graph6,
            cell.join(","),
            m.same_spectrum_key
        ));
        match &m.q {
            Some(q) => s.push_str(&format!(
                "  Q       level {}   primes {}   QtQ=I {}   Qe=e {}   QtAQ=A' {}   level | d_n {}\n",
                q.level,
                q.level_primes
                    .as_ref()
                    .map(|p| format!("{{{}}}", p.join(",")))
                    .unwrap_or_else(|| "unknown".into()),
                q.orthogonal,
                q.fixes_all_ones,
                q.conjugates_adjacency,
                q.level_divides_dn
            )),
            None => s.push_str("  Q       not reconstructed (graph not controllable)\n"),
        }
    }
    s.push_str(&format!("seed      {seed}\n\n"));
    s
}

fn cmd_snf(cli: &Cli, format: Format) -> Result<Outcome, Failure> {
    let sources = load_sources(cli)?;
    let parse_error = report_diagnostics(&sources);
    let mut text = String::new();
    for source in &sources {
        let Ok(rec) = &source.record else { continue };
        let w = walk::build_walk_bundle(&rec.graph)?.w;
        let snf = match dgs_core::linalg::smith_normal_form(&w, false) {
            Ok(snf) => Some(snf),
            Err(dgs_core::Error::RankDeficient { .. }) => None,
            Err(e) => return Err(e.into()),
        };
        match (format, &snf) {
            (Format::Json, _) => {
                let (shape, b) = snf.as_ref().map(|s| s.shape()).unzip();
                text.push_str(&to_json_line(&json!({
                    "schema": SCHEMA_VERSION,
                    "seed": cli.seed,
                    "source": source.location(),
                    "controllable": snf.is_some(),
                    "diagonal": snf.as_ref().map(|s| s.diag.iter().map(|d| d.to_string()).collect::<Vec<_>>()),
                    "shape": shape,
                    "b": b.map(|b| b.to_string()),
                })));
            }
            (_, Some(snf)) => {
                let (shape, b) = snf.shape();
                text.push_str(&format!("{}\t{shape}\tb = {b}\tseed {}\n", source.location(), cli.seed));
            }
            (_, None) => {
                text.push_str(&format!("{}\tsingular (not controllable)\tseed {}\n", source.location(), cli.seed));
            }
        }
    }
    Ok(Outcome {
        text,
        code: if parse_error { EXIT_PARSE } else { 0 },
    })
}
