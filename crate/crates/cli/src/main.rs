use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Value};

use surfmmp_core::dot::export_dot;
use surfmmp_core::dual_graph::{build_dual_graph, contracted_graph};
use surfmmp_core::experiments::{search_canonical_starts, verify_smooth_starts, SearchConfig, StartKind};
use surfmmp_core::mmp::{run, BoundaryDegree, MmpRun, Outcome, Strategy};
use surfmmp_core::scenario::{parse_rational, parse_scenario, Scenario};
use surfmmp_core::singularities::SingularityClass;
use surfmmp_core::{classify, log_discrepancies, pullback, QDivisor};

#[derive(Parser)]
#[command(name = "surfmmp", version, about = "Exact discrepancies and log MMP runs on blow-ups of the plane")]
struct Cli {
    /// Print a machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a scenario and print its curve table.
    Build { scenario: PathBuf },
    /// Total and minimal-resolution discrepancies of (X, Δ).
    Classify {
        scenario: PathBuf,
        /// Overrides the scenario's epsilon.
        #[arg(long)]
        epsilon: Option<String>,
    },
    /// Discrepancies of the contracted curves, for X and for (X, Δ).
    Discrepancies { scenario: PathBuf },
    /// Coefficients of the pullback of a tracked curve.
    Pullback {
        scenario: PathBuf,
        #[arg(long)]
        divisor: String,
    },
    /// Run the log MMP on tracked curves and audit every step.
    Run {
        scenario: PathBuf,
        /// `most-negative-first` or `named:A,B,...`; overrides the scenario.
        #[arg(long)]
        strategy: Option<String>,
        #[arg(long)]
        epsilon: Option<String>,
    },
    /// Random smooth starts with coefficients at most 1 - ε: every surface
    /// of every run must be ε-log terminal.
    #[command(name = "verify-smooth-starts", visible_alias = "verify-thm31")]
    VerifySmoothStarts {
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        epsilon: String,
        #[arg(long, default_value_t = 10)]
        max_blowups: usize,
    },
    /// Dual graph in Graphviz format.
    Dot {
        scenario: PathBuf,
        #[arg(long, value_enum, default_value_t = CurveSet::Contracted)]
        set: CurveSet,
    },
    /// Random canonical starts: count intermediate surfaces that are not log
    /// canonical.
    #[command(name = "search-canonical-starts", visible_alias = "search-q44")]
    SearchCanonicalStarts {
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "canonical")]
        start: String,
        #[arg(long, default_value_t = 10)]
        max_blowups: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CurveSet {
    Contracted,
    All,
}

/// Input could not be read, parsed or validated (exit 2), or an audit or
/// verification failed (exit 1).
enum Failure {
    Input(String),
    Check(String),
}

type CmdResult = Result<Report, Failure>;

/// What a command prints, and whether its checks passed.
struct Report {
    text: String,
    json: Value,
    passed: bool,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report { text, json, passed: true }
    }
}

fn input<E: ToString>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

fn load(path: &Path) -> Result<Scenario, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    parse_scenario(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn epsilon_arg(arg: Option<&str>, default: &BigRational) -> Result<BigRational, Failure> {
    let Some(s) = arg else { return Ok(default.clone()) };
    let e = parse_rational(s).ok_or_else(|| Failure::Input(format!("--epsilon: malformed rational `{s}`")))?;
    if e < BigRational::from_integer(0.into()) || e > BigRational::from_integer(1.into()) {
        return Err(Failure::Input(format!("--epsilon: {e} is outside [0, 1]")));
    }
    Ok(e)
}

fn class_json(c: &SingularityClass) -> Value {
    json!({
        "epsilon": c.epsilon.to_string(),
        "total_discrepancy": c.total_discrepancy.to_string(),
        "classification": c.classification.label(),
        "mr_total_discrepancy": c.mr_total_discrepancy.to_string(),
        "mr_classification": c.mr_classification.label(),
        "exceptional_discrepancies": c.exceptional_discrepancies.iter()
            .map(|(n, a)| (n.clone(), json!(a.to_string()))).collect::<serde_json::Map<_, _>>(),
    })
}

fn divisor_json(d: &QDivisor) -> Value {
    Value::Object(d.iter().map(|(n, q)| (n.to_string(), json!(q.to_string()))).collect())
}

fn cmd_build(path: &Path) -> CmdResult {
    let s = load(path)?;
    let state = s.build();
    let y = &state.surface;
    let mut text = format!("{:<10} {:>6} {:>6} {:>6}  {}\n", "curve", "self²", "K·C", "genus", "status");
    let mut rows = Vec::new();
    for (name, class) in y.curves() {
        let si = y.self_intersection(name).map_err(input)?;
        let kc = y.canonical_degree(name).map_err(input)?;
        let g = y.arithmetic_genus(class).map_err(input)?;
        let status = if y.is_contracted(name) { "contracted" } else { "surviving" };
        writeln!(text, "{name:<10} {si:>6} {kc:>6} {g:>6}  {status}").unwrap();
        rows.push(json!({
            "name": name, "self_intersection": si.to_string(), "canonical_degree": kc.to_string(),
            "genus": g.to_string(), "contracted": y.is_contracted(name),
        }));
    }
    writeln!(text, "rho(Y) = {}, rho(X) = {}", y.active_rank(), y.picard_number()).unwrap();
    let json = json!({
        "curves": rows, "rho_resolution": y.active_rank(), "rho": y.picard_number(), "scenario": s.to_json(),
    });
    Ok(Report::ok(text, json))
}

fn cmd_classify(path: &Path, epsilon: Option<&str>) -> CmdResult {
    let s = load(path)?;
    let eps = epsilon_arg(epsilon, &s.epsilon)?;
    let state = s.build();
    let c = classify(&state.surface, &state.boundary, &eps).map_err(input)?;
    let mut text = String::new();
    writeln!(text, "epsilon: {eps}").unwrap();
    writeln!(text, "total discrepancy: {} ({})", c.total_discrepancy, c.classification).unwrap();
    writeln!(text, "MR total discrepancy: {} ({})", c.mr_total_discrepancy, c.mr_classification).unwrap();
    for (n, a) in &c.exceptional_discrepancies {
        writeln!(text, "  a({n}) = {a}").unwrap();
    }
    Ok(Report::ok(text, class_json(&c)))
}

fn cmd_discrepancies(path: &Path) -> CmdResult {
    let s = load(path)?;
    let state = s.build();
    let y = &state.surface;
    let plain = log_discrepancies(y, &QDivisor::new()).map_err(input)?;
    let pair = log_discrepancies(y, &state.boundary).map_err(input)?;
    let mut text = format!("{:<10} {:>6} {:>12} {:>12}\n", "curve", "self²", "a(X)", "a(X,Δ)");
    let mut rows = Vec::new();
    for (n, a) in &plain.discrepancies {
        let si = y.self_intersection(n).map_err(input)?;
        let b = &pair.discrepancies[n];
        writeln!(text, "{n:<10} {si:>6} {:>12} {:>12}", a.to_string(), b.to_string()).unwrap();
        rows.push(json!({ "name": n, "self_intersection": si.to_string(), "a": a.to_string(), "a_log": b.to_string() }));
    }
    Ok(Report::ok(text, json!({ "discrepancies": rows, "boundary": divisor_json(&state.boundary) })))
}

fn cmd_pullback(path: &Path, divisor: &str) -> CmdResult {
    let s = load(path)?;
    let state = s.build();
    let y = &state.surface;
    if !y.contains(divisor) {
        return Err(Failure::Input(format!("--divisor: unknown curve `{divisor}`")));
    }
    if y.is_contracted(divisor) {
        return Err(Failure::Input(format!("--divisor: `{divisor}` is contracted")));
    }
    let one = BigRational::from_integer(1.into());
    let c = pullback(y, &QDivisor::from_pairs([(divisor, one)])).map_err(input)?;
    let mut text = format!("f*{divisor} = {divisor} + Σ c_i E_i\n");
    let mut rows = serde_json::Map::new();
    for e in y.contracted() {
        let ci = c.get(e);
        writeln!(text, "  c({e}) = {ci}").unwrap();
        rows.insert(e.clone(), json!(ci.to_string()));
    }
    Ok(Report::ok(text, json!({ "divisor": divisor, "coefficients": rows })))
}

fn outcome_json(o: &Outcome) -> Value {
    match o {
        Outcome::MinimalOverTracked => json!({ "kind": "minimal-over-tracked" }),
        Outcome::MoriFiberSignal { curve, self_intersection, base } => json!({
            "kind": "mori-fiber-signal", "curve": curve, "self_intersection": self_intersection.to_string(),
            "base": format!("{base:?}").to_lowercase(),
        }),
        Outcome::Exhausted => json!({ "kind": "exhausted" }),
    }
}

fn run_report(r: &MmpRun) -> Report {
    let mut text = String::new();
    let a = &r.audit;
    if let Some(c) = &a.initial_class {
        writeln!(text, "X_0: {} (total {}, MR {})", c.classification, c.total_discrepancy, c.mr_total_discrepancy)
            .unwrap();
    }
    let mut steps = Vec::new();
    for (s, sa) in r.steps.iter().zip(a.steps.iter().map(Some).chain(std::iter::repeat(None))) {
        write!(
            text,
            "step {}: contract {} ({}), (K+Δ)·C = {}, C² = {}, rho {} -> {}",
            s.index, s.contracted_curve, s.kind, s.extremal_value, s.self_intersection, s.rho_before, s.rho_after
        )
        .unwrap();
        match &s.surface_class {
            Some(c) => writeln!(
                text,
                "\n  X_{}: {} (total {}, MR {})",
                s.index + 1,
                c.classification,
                c.total_discrepancy,
                c.mr_total_discrepancy
            ),
            None => writeln!(text, "\n  X_{}: unclassified (not a simple normal crossing resolution)", s.index + 1),
        }
        .unwrap();
        let degree = sa.map(|sa| match &sa.boundary_degree {
            BoundaryDegree::NotApplicable => "n/a".to_string(),
            BoundaryDegree::Checked(v) => v.to_string(),
        });
        if let Some(sa) = sa {
            writeln!(text, "  correction {} ({}), Δ·C = {}", sa.correction, if sa.effective { "effective" } else { "NOT effective" }, degree.clone().unwrap_or_default()).unwrap();
        }
        steps.push(json!({
            "index": s.index,
            "curve": s.contracted_curve,
            "kind": s.kind.to_string(),
            "extremal_value": s.extremal_value.to_string(),
            "self_intersection": s.self_intersection.to_string(),
            "rho_before": s.rho_before,
            "rho_after": s.rho_after,
            "surface_class": s.surface_class.as_ref().map(class_json),
            "pair_class": s.pair_class.as_ref().map(class_json),
            "correction": sa.map(|sa| divisor_json(&sa.correction)),
            "boundary_degree": degree,
        }));
    }
    writeln!(text, "outcome: {}", r.outcome).unwrap();
    let rho: Vec<String> = a.rho_sequence.iter().map(|r| r.to_string()).collect();
    writeln!(text, "rho: {}", rho.join(" -> ")).unwrap();
    if !a.non_log_canonical.is_empty() {
        let xs: Vec<String> = a.non_log_canonical.iter().map(|i| format!("X_{i}")).collect();
        writeln!(text, "not log canonical: {}", xs.join(", ")).unwrap();
    }
    if a.smooth_start_bound_applies {
        writeln!(text, "smooth start with coefficients <= 1 - {}: every X_i must be eps-log terminal", a.epsilon).unwrap();
    }
    if a.passed() {
        writeln!(text, "audit: passed").unwrap();
    } else {
        writeln!(text, "audit: {} violation(s)", a.violations.len()).unwrap();
        for v in &a.violations {
            writeln!(text, "  {v}").unwrap();
        }
    }
    let json = json!({
        "strategy": r.strategy.to_string(),
        "initial_class": a.initial_class.as_ref().map(class_json),
        "steps": steps,
        "outcome": outcome_json(&r.outcome),
        "audit": {
            "epsilon": a.epsilon.to_string(),
            "smooth_start": a.smooth_start,
            "smooth_start_bound_applies": a.smooth_start_bound_applies,
            "rho_sequence": a.rho_sequence,
            "non_log_canonical": a.non_log_canonical,
            "violations": a.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "passed": a.passed(),
        },
    });
    Report { text, json, passed: a.passed() }
}

fn cmd_run(path: &Path, strategy: Option<&str>, epsilon: Option<&str>) -> CmdResult {
    let s = load(path)?;
    let eps = epsilon_arg(epsilon, &s.epsilon)?;
    let strategy: Strategy = match strategy {
        Some(st) => st.parse().map_err(|e| Failure::Input(format!("--strategy: {e}")))?,
        None => s.strategy.clone(),
    };
    let r = run(&s.build(), &strategy, &eps).map_err(|e| Failure::Check(e.to_string()))?;
    Ok(run_report(&r))
}

fn cmd_verify(trials: u64, seed: u64, epsilon: &str, max_blowups: usize) -> CmdResult {
    let eps = epsilon_arg(Some(epsilon), &BigRational::from_integer(0.into()))?;
    if max_blowups == 0 {
        return Err(Failure::Input("--max-blowups must be at least 1".into()));
    }
    let r = verify_smooth_starts(trials, seed, &eps, max_blowups).map_err(input)?;
    let mut text = format!(
        "{} trials (seed {seed}, epsilon {eps}, up to {max_blowups} blow-ups): {} steps, longest run {}\n",
        r.trials, r.total_steps, r.max_steps
    );
    writeln!(
        text,
        "outcomes: {} minimal over tracked, {} Mori fibre signals, {} exhausted",
        r.outcomes[0], r.outcomes[1], r.outcomes[2]
    )
    .unwrap();
    if r.passed() {
        writeln!(text, "violations: 0").unwrap();
    } else {
        writeln!(text, "violations in {} trial(s):", r.failures.len()).unwrap();
        for f in &r.failures {
            writeln!(text, "  trial {}: {}", f.trial, f.problems.join("; ")).unwrap();
            writeln!(text, "    {}", serde_json::to_string(&f.scenario.to_json()).unwrap()).unwrap();
        }
    }
    let json = json!({
        "trials": r.trials, "seed": seed, "epsilon": eps.to_string(), "max_blowups": max_blowups,
        "total_steps": r.total_steps, "max_steps": r.max_steps,
        "outcomes": { "minimal_over_tracked": r.outcomes[0], "mori_fiber_signal": r.outcomes[1], "exhausted": r.outcomes[2] },
        "failures": r.failures.iter().map(|f| json!({
            "trial": f.trial, "problems": f.problems, "scenario": f.scenario.to_json(),
        })).collect::<Vec<_>>(),
        "passed": r.passed(),
    });
    Ok(Report { text, json, passed: r.passed() })
}

fn cmd_dot(path: &Path, set: CurveSet) -> CmdResult {
    let s = load(path)?;
    let y = s.build().surface;
    let g = match set {
        CurveSet::Contracted => contracted_graph(&y),
        CurveSet::All => build_dual_graph(&y, y.curves().keys().map(String::as_str)).map_err(input)?,
    };
    let dot = export_dot(&g);
    Ok(Report::ok(dot.clone(), json!({ "dot": dot })))
}

fn cmd_search(trials: u64, seed: u64, start: &str, max_blowups: usize) -> CmdResult {
    let start: StartKind = start.parse().map_err(|e| Failure::Input(format!("--start: {e}")))?;
    if max_blowups == 0 {
        return Err(Failure::Input("--max-blowups must be at least 1".into()));
    }
    let config = SearchConfig { start, max_blowups };
    let r = search_canonical_starts(&config, trials, seed).map_err(input)?;
    let mut text = format!(
        "{} trials (seed {seed}, {start} starts, up to {max_blowups} blow-ups): {} usable starts, {} skipped, {} steps\n",
        r.trials, r.starts, r.skipped, r.steps
    );
    writeln!(text, "intermediate surfaces not log canonical: {}", r.witnesses.len()).unwrap();
    for w in &r.witnesses {
        writeln!(text, "  trial {} X_{} (total {})", w.trial, w.surface, w.total_discrepancy).unwrap();
    }
    for (t, e) in &r.errors {
        writeln!(text, "  trial {t}: error: {e}").unwrap();
    }
    let json = json!({
        "trials": r.trials, "seed": seed, "start": start.to_string(), "max_blowups": max_blowups,
        "starts": r.starts, "skipped": r.skipped, "steps": r.steps,
        "non_log_canonical": r.witnesses.iter().map(|w| json!({
            "trial": w.trial, "surface": w.surface, "total_discrepancy": w.total_discrepancy.to_string(),
            "scenario": w.scenario.to_json(),
        })).collect::<Vec<_>>(),
        "errors": r.errors.iter().map(|(t, e)| json!({ "trial": t, "error": e })).collect::<Vec<_>>(),
    });
    Ok(Report::ok(text, json))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Build { scenario } => cmd_build(scenario),
        Command::Classify { scenario, epsilon } => cmd_classify(scenario, epsilon.as_deref()),
        Command::Discrepancies { scenario } => cmd_discrepancies(scenario),
        Command::Pullback { scenario, divisor } => cmd_pullback(scenario, divisor),
        Command::Run { scenario, strategy, epsilon } => cmd_run(scenario, strategy.as_deref(), epsilon.as_deref()),
        Command::VerifySmoothStarts { trials, seed, epsilon, max_blowups } => {
            cmd_verify(*trials, *seed, epsilon, *max_blowups)
        }
        Command::Dot { scenario, set } => cmd_dot(scenario, *set),
        Command::SearchCanonicalStarts { trials, seed, start, max_blowups } => {
            cmd_search(*trials, *seed, start, *max_blowups)
        }
    };
    match result {
        Ok(report) => {
            let out = if cli.json {
                let mut s = serde_json::to_string_pretty(&report.json).expect("json values serialize");
                s.push('\n');
                s
            } else {
                report.text
            };
            // a closed pipe is not an error for a report printer
            let _ = std::io::stdout().lock().write_all(out.as_bytes());
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(failure) => {
            let (code, msg) = match failure {
                Failure::Input(m) => (2, m),
                Failure::Check(m) => (1, m),
            };
            if cli.json {
                println!("{}", json!({ "error": msg, "exit_code": code }));
            } else {
                eprintln!("error: {msg}");
            }
            ExitCode::from(code)
        }
    }
}
