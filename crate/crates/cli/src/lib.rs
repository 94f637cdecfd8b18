//! Command-line front end: verify, search, table, identities, count-theta, k-set.
//!
//! Exit codes: 0 success, 1 verification failure, 2 budget exhausted, 3 input error.

use std::fs::OpenOptions;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use sumfree_core::oracle::{self, Budget, FnSpec, OracleError};
use sumfree_core::theta;
use sumfree_core::witness::{self, Criterion, Provenance, SearchKind, Status, Strategy, Verdict, WitnessRecord};
use sumfree_core::FieldCtx;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_EXHAUSTED: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "sumfree", version, about = "Sum-freedom of x -> 1/x^(q-1) on finite fields")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Re-verify every witness record in JSONL files.
    Verify(VerifyArgs),
    /// Search for or construct a witness.
    Search(SearchArgs),
    /// Render the "is it kth order sum-free?" grid for a range of n.
    Table(TableArgs),
    /// Check the polynomial identities and lemmas.
    Identities(IdentitiesArgs),
    /// Count zeros of Θ_4 on F_{2^n}^4.
    CountTheta(CountThetaArgs),
    /// Compute the set of orders k that are not sum-free.
    KSet(KSetArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
}

#[derive(Debug, Args, Clone)]
pub struct FieldArgs {
    #[arg(long, default_value_t = 2)]
    pub q: u32,
    #[arg(long)]
    pub n: usize,
    /// Defining polynomial, e.g. "X^13 + X^12 + X^11 + X^8 + 1" (default: smallest irreducible).
    #[arg(long)]
    pub modulus: Option<String>,
}

impl FieldArgs {
    fn context(&self) -> Result<FieldCtx, CliError> {
        let ctx = match &self.modulus {
            Some(m) => FieldCtx::from_modulus_text(self.q, m),
            None => FieldCtx::new(self.q, self.n, None),
        }
        .map_err(|e| CliError::Input(e.to_string()))?;
        if ctx.n() != self.n {
            return Err(CliError::Input(format!("modulus has degree {} but --n is {}", ctx.n(), self.n)));
        }
        Ok(ctx)
    }
}

fn parse_budget(s: &str) -> Result<u128, String> {
    oracle::parse_count(s).ok_or_else(|| format!("not a count: {s:?}"))
}

#[derive(Debug, Args, Clone)]
pub struct BudgetArgs {
    /// Field-operation cap for exhaustive scans.
    #[arg(long, env = oracle::BUDGET_ENV, default_value = "1e9", value_parser = parse_budget)]
    pub budget: u128,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SearchStrategy {
    Random,
    Kernel,
    Factor,
    Tower,
    Compose,
    Exhaustive,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum, default_value_t = SearchStrategy::Kernel)]
    pub strategy: SearchStrategy,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub budget: BudgetArgs,
    /// Outer samples for random/kernel search (default 200000 random, 20000 kernel).
    #[arg(long)]
    pub samples: Option<u64>,
    /// Independently seeded search shards.
    #[arg(long, default_value_t = 8)]
    pub shards: u64,
    /// Input witness files for tower (one record) and compose (two records).
    #[arg(long = "from")]
    pub from: Vec<PathBuf>,
    /// Subfield degree for the tower lift.
    #[arg(long, default_value_t = 2)]
    pub l: usize,
    /// Number of tower lifts.
    #[arg(long, default_value_t = 1)]
    pub lifts: usize,
    /// Append records here instead of printing them.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KStrategy {
    /// Rules, constructions, search, then exhaustive scans.
    Full,
    /// Every order by its own exhaustive scan.
    Exhaustive,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long, default_value_t = 2)]
    pub q: u32,
    /// A single n or a range such as 7..9 (inclusive).
    #[arg(long)]
    pub n: String,
    #[arg(long, value_enum, default_value_t = KStrategy::Full)]
    pub strategy: KStrategy,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub budget: BudgetArgs,
    #[arg(long)]
    pub samples: Option<u64>,
    /// Write verdicts as JSONL.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct KSetArgs {
    #[arg(long, default_value_t = 2)]
    pub q: u32,
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = KStrategy::Full)]
    pub strategy: KStrategy,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub budget: BudgetArgs,
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Appendix,
    Lemmas,
    All,
}

#[derive(Debug, Args)]
pub struct IdentitiesArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    #[arg(long, default_value = "8")]
    pub n: String,
    #[arg(long, default_value_t = 1000)]
    pub points: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct CountThetaArgs {
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub budget: BudgetArgs,
    /// Fall back to this many random points when the full count exceeds the budget.
    #[arg(long)]
    pub samples: Option<u128>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Io(io::Error),
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(s) => write!(f, "input error: {s}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

/// Parses `7`, `7..9` or `7..=9` as an inclusive range.
pub fn parse_n_range(s: &str) -> Result<Vec<usize>, CliError> {
    let bad = || CliError::Input(format!("bad n range {s:?}"));
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
        None => (num(s)?, num(s)?),
    };
    if lo < 2 || hi < lo {
        return Err(bad());
    }
    Ok((lo..=hi).collect())
}

/// One persisted verdict, self-describing.
#[derive(Debug, Serialize)]
pub struct VerdictLine<'a> {
    pub p: u32,
    pub modulus: String,
    pub version: &'static str,
    pub seed: u64,
    #[serde(flatten)]
    pub verdict: &'a Verdict,
}

fn open_append(path: &Path) -> Result<std::fs::File, CliError> {
    Ok(OpenOptions::new().create(true).append(true).open(path)?)
}

fn emit_records(records: &[WitnessRecord], out: &Option<PathBuf>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let mut f = open_append(path)?;
            for r in records {
                writeln!(f, "{}", r.to_json_line())?;
            }
            writeln!(stdout, "wrote {} record(s) to {}", records.len(), path.display())?;
        }
        None => {
            for r in records {
                writeln!(stdout, "{}", r.to_json_line())?;
            }
        }
    }
    Ok(())
}

fn read_records(path: &Path) -> Result<Vec<WitnessRecord>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let r = WitnessRecord::from_json_line(line)
            .map_err(|e| CliError::Input(format!("{}:{}: {e}", path.display(), i + 1)))?;
        out.push(r);
    }
    Ok(out)
}

pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let mut failed = 0;
    let mut total = 0;
    for path in &args.files {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let r = WitnessRecord::from_json_line(line)
                .map_err(|e| CliError::Input(format!("parse error at {}:{}: {e}", path.display(), i + 1)))?;
            total += 1;
            match r.verify() {
                Ok(c) => writeln!(
                    out,
                    "PASS {}:{} q={} n={} k={} criterion={} cross_check={}",
                    path.display(),
                    i + 1,
                    r.q,
                    r.n,
                    r.k,
                    serde_json::to_string(&r.criterion).expect("tag serializes").trim_matches('"'),
                    match c.span_sum_zero {
                        Some(true) => "zero",
                        Some(false) => "nonzero",
                        None => "skipped",
                    }
                )?,
                Err(e) => {
                    failed += 1;
                    writeln!(out, "FAIL {}:{} q={} n={} k={}: {e}", path.display(), i + 1, r.q, r.n, r.k)?;
                }
            }
        }
    }
    writeln!(out, "{} record(s), {} failed", total, failed)?;
    Ok(if failed > 0 { EXIT_FAIL } else { EXIT_OK })
}

fn need_k(k: Option<usize>) -> Result<usize, CliError> {
    k.ok_or_else(|| CliError::Input("--k is required for this strategy".into()))
}

pub fn cmd_search(args: &SearchArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let ctx = args.field.context()?;
    let budget = Budget::new(args.budget.budget);
    let input = |e: witness::WitnessError| CliError::Input(e.to_string());
    let records: Vec<WitnessRecord> = match args.strategy {
        SearchStrategy::Random | SearchStrategy::Kernel => {
            let k = need_k(args.k)?;
            if k < 2 || k >= ctx.n() {
                return Err(CliError::Input(format!("search needs 2 <= k < n, got k = {k}")));
            }
            let (kind, default) = match args.strategy {
                SearchStrategy::Random => (SearchKind::Random, 200_000),
                _ => (SearchKind::Kernel, 20_000),
            };
            let samples = args.samples.unwrap_or(default);
            match witness::search_sharded(&ctx, k, kind, samples, args.seed, args.shards) {
                Ok(r) => vec![r],
                Err(e) => {
                    writeln!(out, "EXHAUSTED {e}")?;
                    return Ok(EXIT_EXHAUSTED);
                }
            }
        }
        SearchStrategy::Factor => {
            let k = need_k(args.k)?;
            match witness::witness_from_factor(&ctx, k, args.seed).map_err(input)? {
                Some((r, _)) => vec![r],
                None => {
                    writeln!(out, "EXHAUSTED no degree-{k} factor of X^{} - 1 with zero X coefficient", ctx.n())?;
                    return Ok(EXIT_EXHAUSTED);
                }
            }
        }
        SearchStrategy::Exhaustive => {
            let k = need_k(args.k)?;
            match oracle::is_kth_order_sumfree_exhaustive(&ctx, &FnSpec::GS(ctx.q() as u128 - 1), k, budget) {
                Ok(r) => match r.counterexample {
                    Some(b) => vec![WitnessRecord::new(&ctx, &b, Criterion::Delta1, Provenance::Exhaustive, None).map_err(input)?],
                    None => {
                        writeln!(out, "SUMFREE_PROVED exhaustive scan of {} subspaces", r.scope)?;
                        return Ok(EXIT_OK);
                    }
                },
                Err(OracleError::BudgetExceeded { needed, limit }) => {
                    writeln!(out, "EXHAUSTED exhaustive scan needs {needed} operations, budget {limit}")?;
                    return Ok(EXIT_EXHAUSTED);
                }
                Err(e) => return Err(CliError::Input(e.to_string())),
            }
        }
        SearchStrategy::Tower => {
            let [path] = args.from.as_slice() else {
                return Err(CliError::Input("tower needs exactly one --from file".into()));
            };
            let rec = read_records(path)?.into_iter().next().ok_or_else(|| CliError::Input("empty --from file".into()))?;
            let rctx = rec.context().map_err(input)?;
            let mut f = rec.elements(&rctx).map_err(input)?;
            let mut recs = Vec::new();
            for _ in 0..args.lifts {
                f = witness::lift_tower(&rctx, &f, args.l).map_err(input)?;
                recs.push(WitnessRecord::new(&rctx, &f, Criterion::Delta1, Provenance::Tower, None).map_err(input)?);
            }
            recs
        }
        SearchStrategy::Compose => {
            let mut recs = Vec::new();
            for p in &args.from {
                recs.extend(read_records(p)?);
            }
            if recs.len() != 2 {
                return Err(CliError::Input(format!("compose needs two records, got {}", recs.len())));
            }
            let rctx = recs[0].context().map_err(input)?;
            if recs[1].modulus != recs[0].modulus || recs[1].p != recs[0].p {
                return Err(CliError::Input("records live in different fields".into()));
            }
            let e = recs[0].elements(&rctx).map_err(input)?;
            let f = recs[1].elements(&rctx).map_err(input)?;
            vec![witness::compose_witnesses(&rctx, &e, &f).map_err(input)?]
        }
    };
    emit_records(&records, &args.out, out)?;
    Ok(EXIT_OK)
}

fn strategy_for(kind: KStrategy, seed: u64, samples: Option<u64>) -> Strategy {
    match kind {
        KStrategy::Full => {
            let mut s = Strategy::full(seed);
            if let Some(n) = samples {
                s.search_samples = n;
            }
            s
        }
        KStrategy::Exhaustive => Strategy::exhaustive_only(),
    }
}

fn status_note(s: &Status) -> String {
    match s {
        Status::NotSumfree { witness } => format!("{:?}", witness.provenance).to_uppercase(),
        Status::SumfreeProved { method } => serde_json::to_string(method).unwrap().trim_matches('"').to_string(),
        Status::Unknown { effort } => format!(
            "UNKNOWN after {} search samples; exhaustive cost {} vs budget {}",
            effort.search_samples,
            effort.exhaustive_cost.map(|c| c.to_string()).unwrap_or_else(|| "n/a".into()),
            effort.budget
        ),
    }
}

fn write_verdicts(path: &Path, ctxs: &[(FieldCtx, Vec<Verdict>)], seed: u64) -> Result<(), CliError> {
    let mut f = std::fs::File::create(path)?;
    for (ctx, vs) in ctxs {
        for v in vs {
            let line = VerdictLine { p: ctx.p(), modulus: ctx.modulus_text(), version: witness::VERSION, seed, verdict: v };
            writeln!(f, "{}", serde_json::to_string(&line).expect("verdict serializes"))?;
        }
    }
    Ok(())
}

fn compute(q: u32, n: usize, strategy: &Strategy, budget: Budget) -> Result<(FieldCtx, Vec<Verdict>), CliError> {
    let ctx = FieldCtx::new(q, n, None).map_err(|e| CliError::Input(e.to_string()))?;
    let v = witness::compute_k(q, n, strategy, budget).map_err(|e| CliError::Input(e.to_string()))?;
    Ok((ctx, v))
}

/// Renders rows `n`, columns `k = 1..max(n)-1`.
pub fn render_table(q: u32, rows: &[(usize, Vec<Verdict>)]) -> String {
    let width = rows.iter().map(|(n, _)| n - 1).max().unwrap_or(0);
    let mut s = format!("q = {q}: is g_(q-1) kth order sum-free? (✓ yes, ✗ no, ? undecided)\n\n");
    s.push_str("| n \\ k |");
    for k in 1..=width {
        s.push_str(&format!(" {k} |"));
    }
    s.push_str("\n|---|");
    for _ in 1..=width {
        s.push_str("---|");
    }
    s.push('\n');
    for (n, vs) in rows {
        s.push_str(&format!("| {n} |"));
        for k in 1..=width {
            let cell = vs.iter().find(|v| v.k == k).map(|v| v.status.symbol()).unwrap_or(" ");
            s.push_str(&format!(" {cell} |"));
        }
        s.push('\n');
    }
    let notes: Vec<String> = rows
        .iter()
        .flat_map(|(_, vs)| vs.iter())
        .filter(|v| matches!(v.status, Status::Unknown { .. }))
        .map(|v| format!("- n={}, k={}: {}", v.n, v.k, status_note(&v.status)))
        .collect();
    if !notes.is_empty() {
        s.push('\n');
        s.push_str(&notes.join("\n"));
        s.push('\n');
    }
    s
}

pub fn cmd_table(args: &TableArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let ns = parse_n_range(&args.n)?;
    let strategy = strategy_for(args.strategy, args.seed, args.samples);
    let budget = Budget::new(args.budget.budget);
    let mut all = Vec::new();
    for n in ns {
        all.push(compute(args.q, n, &strategy, budget)?);
    }
    let rows: Vec<(usize, Vec<Verdict>)> = all.iter().map(|(c, v)| (c.n(), v.clone())).collect();
    write!(out, "{}", render_table(args.q, &rows))?;
    if let Some(path) = &args.out {
        write_verdicts(path, &all, args.seed)?;
    }
    Ok(EXIT_OK)
}

pub fn cmd_kset(args: &KSetArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let strategy = strategy_for(args.strategy, args.seed, args.samples);
    let (ctx, vs) = compute(args.q, args.n, &strategy, Budget::new(args.budget.budget))?;
    let set: Vec<String> = witness::k_set(&vs).iter().map(|k| k.to_string()).collect();
    let unknown = vs.iter().filter(|v| matches!(v.status, Status::Unknown { .. })).count();
    writeln!(out, "K_(n={},q={}) = {{{}}}", args.n, args.q, set.join(", "))?;
    for v in &vs {
        writeln!(out, "k={} {} {}", v.k, v.status.symbol(), status_note(&v.status))?;
    }
    if let Some(path) = &args.out {
        write_verdicts(path, &[(ctx, vs)], args.seed)?;
    }
    Ok(if unknown > 0 { EXIT_EXHAUSTED } else { EXIT_OK })
}

#[derive(Serialize)]
struct IdentityLine {
    result: &'static str,
    identity: String,
    n: usize,
    checked: usize,
    violations: usize,
}

pub fn cmd_identities(args: &IdentitiesArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let ns = parse_n_range(&args.n)?;
    let mut lines = Vec::new();
    let verdict = |ok: bool| if ok { "PASS" } else { "FAIL" };
    for &n in &ns {
        if matches!(args.suite, Suite::Appendix | Suite::All) {
            let ctx = FieldCtx::new(2, n, None).map_err(|e| CliError::Input(e.to_string()))?;
            let r = theta::verify_theta4_identities(&ctx, args.points, args.seed).map_err(|e| CliError::Input(e.to_string()))?;
            for (name, checked) in &r.checks {
                let bad = r.violations.iter().filter(|v| &v.identity == name).count();
                lines.push(IdentityLine { result: verdict(bad == 0), identity: name.clone(), n, checked: *checked, violations: bad });
            }
        }
        if matches!(args.suite, Suite::Lemmas | Suite::All) {
            let w = theta::weight_lemma_counterexample(n as u32);
            lines.push(IdentityLine {
                result: verdict(w.is_none()),
                identity: "binary_weight_of_1_plus_l_times_2n_minus_1".into(),
                n,
                checked: (1 << n) - 1,
                violations: w.is_some() as usize,
            });
            let bad = (1..=n.min(5)).filter(|&k| theta::congruence_lemma_counterexample(n as u32, k).is_some()).count();
            lines.push(IdentityLine {
                result: verdict(bad == 0),
                identity: "powers_of_two_summing_to_1_mod_2n_minus_1".into(),
                n,
                checked: n.min(5),
                violations: bad,
            });
        }
    }
    let mut failed = false;
    for l in &lines {
        failed |= l.result == "FAIL";
        writeln!(out, "{}", serde_json::to_string(l).expect("line serializes"))?;
    }
    Ok(if failed { EXIT_FAIL } else { EXIT_OK })
}

pub fn cmd_count_theta(args: &CountThetaArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let ctx = FieldCtx::new(2, args.n, None).map_err(|e| CliError::Input(e.to_string()))?;
    let counts = match theta::count_theta4_zeros(&ctx, Budget::new(args.budget.budget)) {
        Ok(c) => c,
        Err(theta::ThetaError::Budget(e)) => match args.samples {
            Some(s) => theta::count_theta4_zeros_sampled(&ctx, s, args.seed).map_err(|e| CliError::Input(e.to_string()))?,
            None => {
                writeln!(out, "EXHAUSTED {e}")?;
                return Ok(EXIT_EXHAUSTED);
            }
        },
        Err(e) => return Err(CliError::Input(e.to_string())),
    };
    writeln!(out, "{}", serde_json::to_string(&counts).expect("counts serialize"))?;
    Ok(EXIT_OK)
}

/// Runs a parsed command, writing the report to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    if let Some(j) = cli.jobs {
        // a second initialization (tests) keeps the existing pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global();
    }
    match &cli.command {
        Command::Verify(a) => cmd_verify(a, out),
        Command::Search(a) => cmd_search(a, out),
        Command::Table(a) => cmd_table(a, out),
        Command::Identities(a) => cmd_identities(a, out),
        Command::CountTheta(a) => cmd_count_theta(a, out),
        Command::KSet(a) => cmd_kset(a, out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_n_range("7..9").unwrap(), vec![7, 8, 9]);
        assert_eq!(parse_n_range("7..=9").unwrap(), vec![7, 8, 9]);
        assert_eq!(parse_n_range("5").unwrap(), vec![5]);
        assert!(parse_n_range("9..7").is_err());
        assert!(parse_n_range("x").is_err());
    }

    #[test]
    fn cli_parses() {
        let c = Cli::try_parse_from(["sumfree", "search", "--q", "3", "--n", "8", "--k", "4", "--strategy", "kernel"]).unwrap();
        assert!(matches!(c.command, Command::Search(_)));
        assert!(Cli::try_parse_from(["sumfree", "search", "--n", "8", "--strategy", "bogus"]).is_err());
    }
}
