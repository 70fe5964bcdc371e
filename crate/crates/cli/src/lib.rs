//! Command-line front end: parses election and source documents, runs
//! solvers, generators and oracles, and prints human or JSON output.
//!
//! Exit codes: 0 success, 1 verification failure, 2 parse or validation
//! error, 3 unsupported rule/solver combination, 4 limit or budget exceeded.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use frugal_core::format::{
    certificate_json, parse_cm, parse_election, parse_partition, parse_x3c, write_partition, write_reduction_instance,
};
use frugal_core::oracles::{solve_partition, solve_x3c, verify_reduction};
use frugal_core::reductions::{
    gen_kapproval_x3c, gen_kveto_x3c, gen_scoring_x3c, gen_wcopeland_partition, generate, partition_to_quarter,
    PartitionInstance, PartitionVariant, ReductionKind, ReductionOutput, Source, SourceKind,
};
use frugal_core::solvers::{explain_table, select_algorithm, solve, AlgorithmChoice, Limits, Solution, DEFAULT_BUDGET_CAP};
use frugal_core::{build_instance, classify_vulnerable, compute_winner, Election, Error, Rule, Variant};
use num_rational::Ratio;
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;
pub const EXIT_LIMIT: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "frugal", version, about = "Frugal bribery in elections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the winner of an election.
    Winner {
        file: PathBuf,
        #[arg(long, value_parser = parse_rule)]
        rule: Rule,
        #[arg(long)]
        json: bool,
    },
    /// Label every vote as vulnerable or not for a target candidate.
    Vulnerable {
        file: PathBuf,
        #[arg(long, value_parser = parse_rule)]
        rule: Rule,
        #[arg(long)]
        target: String,
        #[arg(long)]
        json: bool,
    },
    /// Decide a bribery instance.
    Solve(SolveArgs),
    /// Generate a bribery instance from a source instance.
    Gen {
        reduction: String,
        source: PathBuf,
        #[command(flatten)]
        params: GenParams,
        /// Write the instance here and the certificate next to it.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Generate an instance and check it against its certificate and the source.
    Verify {
        reduction: String,
        source: PathBuf,
        #[command(flatten)]
        params: GenParams,
        #[command(flatten)]
        limits: LimitArgs,
        #[arg(long)]
        json: bool,
    },
    /// Decide a source instance by brute force.
    Oracle {
        problem: OracleProblem,
        file: PathBuf,
        /// Read a half-partition file and map it to the quarter problem first.
        #[arg(long)]
        from_half: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
struct SolveArgs {
    file: Option<PathBuf>,
    #[arg(long, value_parser = parse_rule)]
    rule: Option<Rule>,
    #[arg(long)]
    target: Option<String>,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, default_value = "frugal", value_parser = parse_variant)]
    variant: Variant,
    #[arg(long, default_value = "auto", value_parser = parse_algorithm)]
    algorithm: AlgorithmChoice,
    #[command(flatten)]
    limits: LimitArgs,
    /// Largest budget the constant-budget solver accepts.
    #[arg(long, default_value_t = DEFAULT_BUDGET_CAP)]
    budget_cap: u64,
    /// Print the algorithm-selection table (and the pick for FILE, if given).
    #[arg(long)]
    explain: bool,
    /// Report wall-clock time in the output.
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug, Clone, Copy)]
struct LimitArgs {
    /// Most candidates exhaustive search will take on.
    #[arg(long)]
    max_m: Option<usize>,
    /// Most changeable votes exhaustive search will take on.
    #[arg(long)]
    max_votes: Option<usize>,
}

impl LimitArgs {
    fn limits(self) -> Limits {
        let d = Limits::default();
        Limits {
            max_candidates: self.max_m.unwrap_or(d.max_candidates),
            max_changeable: self.max_votes.unwrap_or(d.max_changeable),
        }
    }
}

#[derive(Args, Debug, Clone, Default)]
struct GenParams {
    /// Approval or veto width for kapproval-x3c and kveto-x3c.
    #[arg(long)]
    k: Option<usize>,
    /// Score vector for scoring-x3c, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    vector: Option<Vec<i64>>,
    /// 1-based position of the displaced leader for scoring-x3c.
    #[arg(long)]
    position: Option<usize>,
    /// Copeland tie reward for wcopeland-partition, as NUM/DEN.
    #[arg(long, value_parser = parse_alpha)]
    alpha: Option<Ratio<u64>>,
    /// Treat a partition source as a half-partition and map it to the quarter problem.
    #[arg(long)]
    from_half: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum OracleProblem {
    X3c,
    Partition,
    Quarter,
}

fn parse_rule(s: &str) -> Result<Rule, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse().map_err(|_| format!("unknown variant `{s}` (expected frugal, uniform or nonuniform)"))
}

fn parse_algorithm(s: &str) -> Result<AlgorithmChoice, String> {
    s.parse().map_err(|_| format!("unknown algorithm `{s}` (expected exact, poly or auto)"))
}

fn parse_alpha(s: &str) -> Result<Ratio<u64>, String> {
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: u64 = n.trim().parse().map_err(|_| format!("bad alpha `{s}`"))?;
    let d: u64 = d.trim().parse().map_err(|_| format!("bad alpha `{s}`"))?;
    if d == 0 {
        return Err(format!("bad alpha `{s}`"));
    }
    Ok(Ratio::new(n, d))
}

#[derive(Debug)]
enum Failure {
    Core(Error),
    Io(PathBuf, std::io::Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Core(Error::Unsupported(_)) => EXIT_UNSUPPORTED,
            Failure::Core(Error::LimitExceeded(_) | Error::BudgetTooLarge { .. }) => EXIT_LIMIT,
            _ => EXIT_INVALID,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core(e) => e.to_string(),
            Failure::Io(p, e) => format!("{}: {e}", p.display()),
            Failure::Usage(m) => m.clone(),
        }
    }
}

type Outcome = Result<i32, Failure>;

/// Runs one command. `args` includes the program name. Normal output goes to
/// `out`, diagnostics to `err`; the return value is the exit code.
pub fn run_command<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Winner { file, rule, json } => winner(&file, &rule, json, out),
        Command::Vulnerable {
            file,
            rule,
            target,
            json,
        } => vulnerable(&file, &rule, &target, json, out),
        Command::Solve(args) => solve_cmd(args, out),
        Command::Gen {
            reduction,
            source,
            params,
            out: path,
            json,
        } => gen_cmd(&reduction, &source, &params, path.as_deref(), json, out),
        Command::Verify {
            reduction,
            source,
            params,
            limits,
            json,
        } => verify_cmd(&reduction, &source, &params, limits.limits(), json, out),
        Command::Oracle {
            problem,
            file,
            from_half,
            json,
        } => oracle_cmd(problem, &file, from_half, json, out),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn emit(out: &mut dyn Write, text: &str) -> Outcome {
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::Io(PathBuf::from("<output>"), e))?;
    Ok(EXIT_OK)
}

fn emit_json(out: &mut dyn Write, value: &Value) -> Outcome {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    text.push('\n');
    emit(out, &text)
}

fn load_election(path: &Path) -> Result<Election, Failure> {
    Ok(parse_election(&read(path)?)?)
}

fn target_of(e: &Election, name: &str) -> Result<usize, Failure> {
    e.candidate(name).ok_or_else(|| Error::UnknownTarget(name.to_string()).into())
}

fn winner(file: &Path, rule: &Rule, json: bool, out: &mut dyn Write) -> Outcome {
    let e = load_election(file)?;
    let w = compute_winner(&e, rule)?;
    if json {
        emit_json(out, &json!({ "rule": rule.to_string(), "winner": e.name(w) }))
    } else {
        emit(out, &format!("{}\n", e.name(w)))
    }
}

fn vulnerable(file: &Path, rule: &Rule, target: &str, json: bool, out: &mut dyn Write) -> Outcome {
    let e = load_election(file)?;
    let t = target_of(&e, target)?;
    let w = compute_winner(&e, rule)?;
    let labels = classify_vulnerable(&e, rule, t)?;
    let indices: Vec<usize> = labels
        .iter()
        .enumerate()
        .filter(|(_, l)| **l == frugal_core::VulnerabilityLabel::Vulnerable)
        .map(|(i, _)| i)
        .collect();
    if json {
        return emit_json(
            out,
            &json!({
                "rule": rule.to_string(),
                "target": target,
                "winner": e.name(w),
                "labels": labels,
                "vulnerable": indices,
            }),
        );
    }
    let mut s = format!("winner: {}\n", e.name(w));
    for (i, v) in e.votes().iter().enumerate() {
        let mark = if indices.contains(&i) { "vulnerable" } else { "-" };
        s.push_str(&format!("vote {i}: {} {mark}\n", e.ranking_names(&v.ranking).join(">")));
    }
    emit(out, &s)
}

fn solution_json(e: &Election, sol: &Solution, elapsed: Option<f64>) -> Value {
    let witness: Vec<Value> = sol
        .witness
        .iter()
        .map(|(i, r)| json!({ "vote": i, "ranking": e.ranking_names(r).join(">") }))
        .collect();
    let mut v = json!({
        "decision": sol.decision.to_string(),
        "witness": witness,
        "cost": sol.cost,
        "algorithm": sol.algorithm.to_string(),
    });
    if let Some(t) = elapsed {
        v["elapsed"] = json!(t);
    }
    v
}

fn solve_cmd(args: SolveArgs, out: &mut dyn Write) -> Outcome {
    let Some(file) = &args.file else {
        if args.explain {
            return emit(out, explain_table());
        }
        return Err(Failure::Usage("solve needs an election file".into()));
    };
    let rule = args.rule.clone().ok_or_else(|| Failure::Usage("solve needs --rule".into()))?;
    let target = args.target.as_deref().ok_or_else(|| Failure::Usage("solve needs --target".into()))?;
    let e = load_election(file)?;
    let t = target_of(&e, target)?;
    let inst = build_instance(e, rule, t, args.budget, args.variant)?;
    if args.explain {
        let picked = select_algorithm(&inst, args.budget_cap);
        return emit(out, &format!("{}selected: {picked}\n", explain_table()));
    }
    let start = Instant::now();
    let sol = solve(&inst, args.algorithm, args.limits.limits(), args.budget_cap)?;
    let elapsed = args.timing.then(|| start.elapsed().as_secs_f64());
    let e = inst.election();
    if args.json {
        return emit_json(out, &solution_json(e, &sol, elapsed));
    }
    let mut s = format!("decision: {}\nalgorithm: {}\ncost: {}\n", sol.decision, sol.algorithm, sol.cost);
    if sol.is_yes() {
        s.push_str("witness:\n");
        for (i, r) in &sol.witness {
            s.push_str(&format!("  vote {i}: {}\n", e.ranking_names(r).join(">")));
        }
    }
    if let Some(t) = elapsed {
        s.push_str(&format!("elapsed: {t:.6}s\n"));
    }
    emit(out, &s)
}

fn load_source(kind: ReductionKind, path: &Path, from_half: bool) -> Result<Source, Failure> {
    let text = read(path)?;
    Ok(match kind.source_kind() {
        SourceKind::X3c => Source::X3c(parse_x3c(&text)?),
        SourceKind::Cm => Source::Cm(parse_cm(&text)?),
        SourceKind::Half => Source::Partition(parse_partition(&text, PartitionVariant::Half)?),
        SourceKind::Quarter if from_half => {
            Source::Partition(partition_to_quarter(&parse_partition(&text, PartitionVariant::Half)?)?)
        }
        SourceKind::Quarter => Source::Partition(parse_partition(&text, PartitionVariant::Quarter)?),
    })
}

fn build(kind: ReductionKind, source: &Source, p: &GenParams) -> Result<ReductionOutput, Failure> {
    let out = match (kind, source) {
        (ReductionKind::KapprovalX3c, Source::X3c(s)) if p.k.is_some() => gen_kapproval_x3c(s, p.k.unwrap())?,
        (ReductionKind::KvetoX3c, Source::X3c(s)) if p.k.is_some() => gen_kveto_x3c(s, p.k.unwrap())?,
        (ReductionKind::ScoringX3c, Source::X3c(s)) if p.vector.is_some() || p.position.is_some() => {
            let vector = p
                .vector
                .clone()
                .unwrap_or_else(|| frugal_core::reductions::borda_vector(2 * s.universe().len()));
            gen_scoring_x3c(s, &vector, p.position)?
        }
        (ReductionKind::WcopelandPartition, Source::Partition(s)) if p.alpha.is_some() => {
            gen_wcopeland_partition(s, p.alpha.unwrap())?
        }
        _ => generate(kind, source)?,
    };
    Ok(out)
}

fn reduction_kind(name: &str) -> Result<ReductionKind, Failure> {
    Ok(name.parse()?)
}

fn gen_cmd(name: &str, source: &Path, p: &GenParams, path: Option<&Path>, json: bool, out: &mut dyn Write) -> Outcome {
    let kind = reduction_kind(name)?;
    let src = load_source(kind, source, p.from_half)?;
    let output = build(kind, &src, p)?;
    let instance = write_reduction_instance(&output);
    let certificate = certificate_json(&output);
    match path {
        Some(path) => {
            let sidecar = sidecar_path(path);
            let mut cert_text = serde_json::to_string_pretty(&certificate).expect("JSON values serialize");
            cert_text.push('\n');
            std::fs::write(path, &instance).map_err(|e| Failure::Io(path.to_path_buf(), e))?;
            std::fs::write(&sidecar, cert_text).map_err(|e| Failure::Io(sidecar.clone(), e))?;
            let n = output.instance.election().num_candidates();
            let v = output.instance.election().votes().len();
            if json {
                emit_json(
                    out,
                    &json!({
                        "instance": path.display().to_string(),
                        "certificate": sidecar.display().to_string(),
                        "candidates": n,
                        "votes": v,
                    }),
                )
            } else {
                emit(
                    out,
                    &format!("wrote {} ({n} candidates, {v} votes) and {}\n", path.display(), sidecar.display()),
                )
            }
        }
        None if json => emit_json(out, &json!({ "instance": instance, "certificate": certificate })),
        None => emit(out, &instance),
    }
}

/// `x.elec` becomes `x.elec.cert.json`.
pub fn sidecar_path(instance: &Path) -> PathBuf {
    let mut s = instance.as_os_str().to_owned();
    s.push(".cert.json");
    PathBuf::from(s)
}

fn verify_cmd(name: &str, source: &Path, p: &GenParams, limits: Limits, json: bool, out: &mut dyn Write) -> Outcome {
    let kind = reduction_kind(name)?;
    let src = load_source(kind, source, p.from_half)?;
    let output = build(kind, &src, p)?;
    let report = verify_reduction(&output, &src, limits);
    let code = if report.passed() { EXIT_OK } else { EXIT_VERIFY_FAILED };
    let overall = if report.passed() { "PASS" } else { "FAIL" };
    if json {
        let mut v = serde_json::to_value(&report).expect("reports serialize");
        v["reduction"] = json!(kind.name());
        v["overall"] = json!(overall);
        emit_json(out, &v)?;
    } else {
        let mut s = format!("reduction: {kind}\n");
        s.push_str(&format!(
            "source: {}\n",
            match report.source_yes {
                Some(true) => "YES",
                Some(false) => "NO",
                None => "unknown",
            }
        ));
        for c in &report.checks {
            s.push_str(&format!("{c}\n"));
        }
        s.push_str(&format!("overall: {overall}\n"));
        emit(out, &s)?;
    }
    Ok(code)
}

fn oracle_cmd(problem: OracleProblem, file: &Path, from_half: bool, json: bool, out: &mut dyn Write) -> Outcome {
    let text = read(file)?;
    let (decision, solution, label, mapped): (bool, Option<Vec<usize>>, &str, Option<PartitionInstance>) = match problem {
        OracleProblem::X3c => {
            let src = parse_x3c(&text)?;
            let sol = solve_x3c(&src);
            (sol.is_some(), sol, "sets", None)
        }
        OracleProblem::Partition => {
            let sol = solve_partition(&parse_partition(&text, PartitionVariant::Half)?);
            (sol.is_some(), sol, "weights", None)
        }
        OracleProblem::Quarter => {
            let src = if from_half {
                match partition_to_quarter(&parse_partition(&text, PartitionVariant::Half)?) {
                    Ok(q) => q,
                    // The half instance contains the whole goal twice over: never solvable.
                    Err(Error::TriviallyNo) => {
                        return oracle_report(out, json, false, None, "weights", None);
                    }
                    Err(e) => return Err(e.into()),
                }
            } else {
                parse_partition(&text, PartitionVariant::Quarter)?
            };
            let sol = solve_partition(&src);
            (sol.is_some(), sol, "weights", from_half.then_some(src))
        }
    };
    oracle_report(out, json, decision, solution, label, mapped.as_ref())
}

fn oracle_report(
    out: &mut dyn Write,
    json: bool,
    yes: bool,
    solution: Option<Vec<usize>>,
    label: &str,
    mapped: Option<&PartitionInstance>,
) -> Outcome {
    let decision = if yes { "YES" } else { "NO" };
    if json {
        let mut v = json!({ "decision": decision, "solution": solution });
        if let Some(m) = mapped {
            v["mapped_weights"] = json!(m.weights());
        }
        return emit_json(out, &v);
    }
    let mut s = String::new();
    if let Some(m) = mapped {
        s.push_str(&format!("mapped {}", write_partition(m)));
    }
    s.push_str(&format!("decision: {decision}\n"));
    if let Some(sol) = solution {
        let parts: Vec<String> = sol.iter().map(usize::to_string).collect();
        s.push_str(&format!("{label}: {}\n", parts.join(",")));
    }
    emit(out, &s)
}
