//! Command-line front end: parsing, schema instantiation, proof checking,
//! translation, finite model checking, bounded saturation, and replay of
//! the bundled scenarios.
//!
//! Exit codes are stable API: 0 success/accepted, 1 rejected (proof
//! failed, contradiction found, axiom check failed beyond expectation, or
//! a golden mismatch), 2 usage error, 3 input parse error.

use clap::{Args, Parser, Subcommand};
use setfun::kernel::check_proof;
use setfun::modelcheck::{brute_force_sum_f, check_axioms, enumerate_universe};
use setfun::parser::{
    parse_formula, parse_formula_file, parse_proof_script, pretty_print, FormulaError,
};
use setfun::saturate::{find_contradiction, saturate, Stage, DEFAULT_CAP};
use setfun::syntax::{alpha_equivalent, unfold_nonstandard, Formula, LanguageId, Term};
use setfun::theories::{
    gamma_axioms, instantiate_replacement, instantiate_separation, instantiate_smt_schema,
    sum_f_instance, TheoryId,
};
use setfun::translator::translate;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_REJECTED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_PARSE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "setfun",
    about = "Workbench for a nonclassical theory of sets and functions",
    disable_help_subcommand = true
)]
struct Cli {
    /// Optional `key = value` configuration file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse formula files and report diagnostics.
    Parse(ParseArgs),
    /// Instantiate an axiom schema and print the result.
    Instantiate(InstantiateArgs),
    /// Check a proof script against a theory.
    Check(CheckArgs),
    /// Translate standard set/function formulas into the matrix language.
    Translate(TranslateArgs),
    /// Evaluate a theory's axioms in a finite structure.
    ModelCheck(ModelCheckArgs),
    /// Close a seed under inference rules and search for contradictions.
    Saturate(SaturateArgs),
    /// Re-run a bundled scenario and compare against its golden output.
    Replay(ReplayArgs),
}

#[derive(Args)]
struct ParseArgs {
    /// Language to check formulas against.
    #[arg(long)]
    language: Option<String>,
    /// Print the canonical form of each formula.
    #[arg(long)]
    pretty: bool,
    files: Vec<PathBuf>,
}

#[derive(Args)]
struct InstantiateArgs {
    /// separation | replacement | sum-f | gamma | set-matrix | omission |
    /// division | epsilon | matrix-ext | set-of-set-matrices
    schema: String,
    /// Hole formula over `alpha` (separation).
    #[arg(long)]
    phi: Option<String>,
    /// Hole formula over `alpha`, `beta` (replacement).
    #[arg(long)]
    psi: Option<String>,
    /// Comma-separated element terms (sum-f).
    #[arg(long)]
    elements: Option<String>,
    /// Separation holes for the schema collection (gamma).
    #[arg(long)]
    sep: Vec<String>,
    /// Replacement holes for the schema collection (gamma).
    #[arg(long)]
    rep: Vec<String>,
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long)]
    cols: Option<usize>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    theory: Option<String>,
    script: PathBuf,
    /// Write the per-step report to a file as well.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct TranslateArgs {
    /// Input formula file (standard set/function fragment).
    #[arg(long = "in")]
    input: PathBuf,
    /// Compare the translations against this file up to alpha-equivalence.
    #[arg(long)]
    expect: Option<PathBuf>,
    /// Write a clause-log audit (one line per input node).
    #[arg(long)]
    audit: Option<PathBuf>,
}

#[derive(Args)]
struct ModelCheckArgs {
    #[arg(long)]
    theory: Option<String>,
    #[arg(long)]
    rank: Option<usize>,
    /// Comma-separated axiom names allowed to fail.
    #[arg(long)]
    expect_fail: Option<String>,
    /// Separation holes to instantiate and include in the check.
    #[arg(long)]
    sep: Vec<String>,
    /// Replacement holes to instantiate and include in the check.
    #[arg(long)]
    rep: Vec<String>,
    /// Also brute-force the sum-function principle over every admissible
    /// carrier set.
    #[arg(long)]
    sum_f: bool,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct SaturateArgs {
    /// Seed formula file.
    #[arg(long)]
    seed: PathBuf,
    /// Term pool file, one term per line.
    #[arg(long)]
    pool: Option<PathBuf>,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long)]
    cap: Option<usize>,
    /// sigma | upsilon | phi | omega (rule-set schedule).
    #[arg(long)]
    stage: Option<String>,
    /// Comma-separated rule names overriding the stage rule set.
    #[arg(long)]
    rules: Option<String>,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct ReplayArgs {
    fixture: String,
}

struct Config(BTreeMap<String, String>);

impl Config {
    fn load(path: Option<&Path>) -> Result<Config, String> {
        let mut map = BTreeMap::new();
        if let Some(path) = path {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
            for line in text.lines() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (k, v) = line
                    .split_once('=')
                    .ok_or_else(|| format!("config line without `=`: {line}"))?;
                map.insert(k.trim().to_string(), v.trim().to_string());
            }
        }
        Ok(Config(map))
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(|s| s.as_str())
    }
}

enum Failure {
    Usage(String),
    Parse(String),
    Io(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match Config::load(cli.config.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("usage error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let code = match cli.command {
        Command::Parse(args) => cmd_parse(args, &config),
        Command::Instantiate(args) => cmd_instantiate(args),
        Command::Check(args) => cmd_check(args, &config),
        Command::Translate(args) => cmd_translate(args),
        Command::ModelCheck(args) => cmd_model_check(args, &config),
        Command::Saturate(args) => cmd_saturate(args, &config),
        Command::Replay(args) => cmd_replay(args),
    };
    match code {
        Ok(c) => ExitCode::from(c),
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Parse(msg)) => {
            eprintln!("parse error: {msg}");
            ExitCode::from(EXIT_PARSE)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))
}

fn write_report(path: Option<&Path>, content: &str) -> Result<(), Failure> {
    if let Some(path) = path {
        std::fs::write(path, content)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn language_of(flag: Option<&str>, config: &Config) -> Result<LanguageId, Failure> {
    let name = flag.or_else(|| config.get("language")).unwrap_or("LT");
    LanguageId::parse(name).ok_or_else(|| Failure::Usage(format!("unknown language `{name}`")))
}

fn theory_of(flag: Option<&str>, config: &Config) -> Result<TheoryId, Failure> {
    let name = flag
        .or_else(|| config.get("theory"))
        .ok_or_else(|| Failure::Usage("no theory given (flag --theory or config)".into()))?;
    TheoryId::parse(name).ok_or_else(|| Failure::Usage(format!("unknown theory `{name}`")))
}

fn cmd_parse(args: ParseArgs, config: &Config) -> Result<u8, Failure> {
    if args.files.is_empty() {
        return Err(Failure::Usage("parse needs at least one file".into()));
    }
    let lang = language_of(args.language.as_deref(), config)?;
    for path in &args.files {
        let text = read_file(path)?;
        let parsed = parse_formula_file(&text, lang)
            .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
        for (line, _, formula) in &parsed {
            if args.pretty {
                println!("{}", pretty_print(formula));
            } else {
                println!("{}:{line}: ok", path.display());
            }
        }
    }
    Ok(EXIT_OK)
}

fn parse_one(text: &str, lang: LanguageId) -> Result<Formula, Failure> {
    parse_formula(text, lang).map(|p| p.formula).map_err(|e| match e {
        FormulaError::Syntax(e) => Failure::Parse(e.to_string()),
        other => Failure::Parse(other.to_string()),
    })
}

fn parse_term(text: &str) -> Result<Term, Failure> {
    match parse_one(&format!("{text} = 0"), LanguageId::Lt)? {
        Formula::Eq(t, _) => Ok(t),
        _ => unreachable!(),
    }
}

fn cmd_instantiate(args: InstantiateArgs) -> Result<u8, Failure> {
    match args.schema.as_str() {
        "separation" => {
            let phi =
                args.phi.ok_or_else(|| Failure::Usage("separation needs --phi".into()))?;
            let phi = parse_one(&phi, LanguageId::LtStandard)?;
            let inst = instantiate_separation(&phi).map_err(|e| Failure::Usage(e.to_string()))?;
            println!("{}", pretty_print(&inst));
        }
        "replacement" => {
            let psi =
                args.psi.ok_or_else(|| Failure::Usage("replacement needs --psi".into()))?;
            let psi = parse_one(&psi, LanguageId::LtStandard)?;
            let inst = instantiate_replacement(&psi).map_err(|e| Failure::Usage(e.to_string()))?;
            println!("{}", pretty_print(&inst));
        }
        "sum-f" => {
            let elements =
                args.elements.ok_or_else(|| Failure::Usage("sum-f needs --elements".into()))?;
            let mut terms = Vec::new();
            for part in elements.split(',') {
                terms.push(parse_term(part.trim())?);
            }
            let inst = sum_f_instance(&terms).map_err(|e| Failure::Usage(e.to_string()))?;
            println!("folded: {}", pretty_print(&inst.folded));
            println!("standard: {}", pretty_print(&inst.standard));
        }
        "gamma" => {
            let mut seps = Vec::new();
            for s in &args.sep {
                seps.push(parse_one(s, LanguageId::LtStandard)?);
            }
            let mut reps = Vec::new();
            for s in &args.rep {
                reps.push(parse_one(s, LanguageId::LtStandard)?);
            }
            let out = gamma_axioms(&seps, &reps).map_err(|e| Failure::Usage(e.to_string()))?;
            for f in &out {
                println!("{}", pretty_print(f));
            }
        }
        name => {
            let rows = args.rows.ok_or_else(|| Failure::Usage("schema needs --rows".into()))?;
            let cols = args.cols.ok_or_else(|| Failure::Usage("schema needs --cols".into()))?;
            let inst = instantiate_smt_schema(name, rows, cols)
                .map_err(|e| Failure::Usage(e.to_string()))?;
            println!("{}", pretty_print(&inst));
        }
    }
    Ok(EXIT_OK)
}

fn cmd_check(args: CheckArgs, config: &Config) -> Result<u8, Failure> {
    let text = read_file(&args.script)?;
    let mut script = parse_proof_script(&text).map_err(|e| Failure::Parse(e.to_string()))?;
    if let Some(name) = args.theory.as_deref().or_else(|| config.get("theory")) {
        script.theory = TheoryId::parse(name)
            .ok_or_else(|| Failure::Usage(format!("unknown theory `{name}`")))?;
    }
    let verdict = check_proof(&script);
    let report = verdict.report();
    print!("{report}");
    write_report(args.report.as_deref(), &report)?;
    Ok(if verdict.accepted { EXIT_OK } else { EXIT_REJECTED })
}

fn cmd_translate(args: TranslateArgs) -> Result<u8, Failure> {
    let text = read_file(&args.input)?;
    let inputs = parse_formula_file(&text, LanguageId::LtStandard)
        .map_err(|e| Failure::Parse(e.to_string()))?;
    let mut outputs = Vec::new();
    let mut audit = String::new();
    for (line, _, formula) in &inputs {
        let trace =
            translate(formula).map_err(|e| Failure::Parse(format!("line {line}: {e}")))?;
        for entry in &trace.clause_log {
            let path: Vec<String> = entry.path.iter().map(|i| i.to_string()).collect();
            audit.push_str(&format!("{line}\t{}\t{}\n", path.join("."), entry.clause));
        }
        outputs.push((*line, trace.output));
    }
    for (_, f) in &outputs {
        println!("{}", pretty_print(f));
    }
    write_report(args.audit.as_deref(), &audit)?;
    if let Some(expect) = &args.expect {
        let expect_text = read_file(expect)?;
        let expected = parse_formula_file(&expect_text, LanguageId::Lsmt1x2Plus4)
            .map_err(|e| Failure::Parse(e.to_string()))?;
        if expected.len() != outputs.len() {
            eprintln!("expected {} formulas, produced {}", expected.len(), outputs.len());
            return Ok(EXIT_REJECTED);
        }
        for ((line, got), (_, _, want)) in outputs.iter().zip(&expected) {
            if !alpha_equivalent(got, want) {
                eprintln!("line {line}: translation does not match the expectation");
                return Ok(EXIT_REJECTED);
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_model_check(args: ModelCheckArgs, config: &Config) -> Result<u8, Failure> {
    let theory = theory_of(args.theory.as_deref(), config)?;
    let rank = match (args.rank, config.get("rank")) {
        (Some(r), _) => r,
        (None, Some(r)) => r.parse().map_err(|_| Failure::Usage("bad rank".into()))?,
        (None, None) => 3,
    };
    let expect_fail_raw = args
        .expect_fail
        .or_else(|| config.get("expect-fail").map(|s| s.to_string()))
        .unwrap_or_default();
    let expect_fail: Vec<&str> =
        expect_fail_raw.split(',').map(|s| s.trim()).filter(|s| !s.is_empty()).collect();
    let s = enumerate_universe(rank).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut extra = Vec::new();
    for (i, hole) in args.sep.iter().enumerate() {
        let phi = parse_one(hole, LanguageId::LtStandard)?;
        let inst = instantiate_separation(&phi).map_err(|e| Failure::Usage(e.to_string()))?;
        extra.push((format!("SEP-{}", i + 1), inst));
    }
    for (i, hole) in args.rep.iter().enumerate() {
        let psi = parse_one(hole, LanguageId::LtStandard)?;
        let inst = instantiate_replacement(&psi).map_err(|e| Failure::Usage(e.to_string()))?;
        extra.push((format!("REP-{}", i + 1), inst));
    }
    let report = check_axioms(theory, &s, &expect_fail, &extra)
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let mut text = report.render();
    let mut ok = report.accepted;
    if args.sum_f {
        for x in &s.sets {
            if x.is_empty() {
                continue;
            }
            let holds = brute_force_sum_f(&s, x).map_err(|e| Failure::Usage(e.to_string()))?;
            text.push_str(&format!("SUM-F-AT {x:?} {}\n", if holds { "PASS" } else { "FAIL" }));
            ok &= holds;
        }
    }
    print!("{text}");
    write_report(args.report.as_deref(), &text)?;
    Ok(if ok { EXIT_OK } else { EXIT_REJECTED })
}

fn cmd_saturate(args: SaturateArgs, config: &Config) -> Result<u8, Failure> {
    let text = read_file(&args.seed)?;
    let seed: Vec<Formula> = parse_formula_file(&text, LanguageId::Lt)
        .map_err(|e| Failure::Parse(e.to_string()))?
        .into_iter()
        .map(|(_, _, f)| f)
        .collect();
    let pool: Vec<Term> = match &args.pool {
        Some(path) => {
            let text = read_file(path)?;
            let mut out = Vec::new();
            for line in text.lines() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                out.push(parse_term(line)?);
            }
            out
        }
        None => vec![Term::EmptySet, Term::succ(Term::EmptySet)],
    };
    let depth = match (args.depth, config.get("depth")) {
        (Some(d), _) => d,
        (None, Some(d)) => d.parse().map_err(|_| Failure::Usage("bad depth".into()))?,
        (None, None) => 2,
    };
    let cap = match (args.cap, config.get("cap")) {
        (Some(c), _) => c,
        (None, Some(c)) => c.parse().map_err(|_| Failure::Usage("bad cap".into()))?,
        (None, None) => DEFAULT_CAP,
    };
    let stage = match args.stage.as_deref().or_else(|| config.get("stage")) {
        None | Some("omega") => Stage::Omega,
        Some("sigma") => Stage::Sigma,
        Some("upsilon") => Stage::Upsilon,
        Some("phi") => Stage::Phi,
        Some(other) => return Err(Failure::Usage(format!("unknown stage `{other}`"))),
    };
    let rules = match &args.rules {
        Some(names) => {
            let mut out = Vec::new();
            for name in names.split(',') {
                let name = name.trim();
                out.push(
                    setfun::kernel::RuleId::parse(name)
                        .ok_or_else(|| Failure::Usage(format!("unknown rule `{name}`")))?,
                );
            }
            out
        }
        None => stage.rules(),
    };
    let state = saturate(&seed, &rules, &pool, depth, cap, stage)
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let mut text = String::new();
    for (depth, count) in state.per_depth_counts.iter().enumerate() {
        text.push_str(&format!("depth {depth}: {count} formulas\n"));
    }
    if state.truncated {
        text.push_str("TRUNCATED at the formula cap\n");
    }
    let contradiction = find_contradiction(&state);
    match &contradiction {
        Some(w) => {
            text.push_str("CONTRADICTION\n");
            text.push_str(&w.render());
        }
        None => text.push_str("consistent at this depth\n"),
    }
    print!("{text}");
    write_report(args.report.as_deref(), &text)?;
    Ok(if contradiction.is_some() || state.truncated { EXIT_REJECTED } else { EXIT_OK })
}

// ---- replay ----

struct Bundled {
    fixture: &'static str,
    content: &'static str,
    golden: &'static str,
}

const BUNDLED: &[Bundled] = &[
    Bundled {
        fixture: "eq42-derivation",
        content: include_str!("../../../fixtures/eq42-derivation.prf"),
        golden: include_str!("../../../fixtures/goldens/eq42-derivation.out"),
    },
    Bundled {
        fixture: "prop6-derivation",
        content: include_str!("../../../fixtures/prop6-derivation.prf"),
        golden: include_str!("../../../fixtures/goldens/prop6-derivation.out"),
    },
    Bundled {
        fixture: "sumf-unfold-3",
        content: "",
        golden: include_str!("../../../fixtures/goldens/sumf-unfold-3.out"),
    },
];

/// Fixture lookup honoring the data-directory override.
fn fixture_text(name: &str, bundled: &'static str) -> Result<String, Failure> {
    match std::env::var_os("NONCLASSICAL_KERNEL_DATA") {
        Some(dir) => {
            let path = Path::new(&dir).join(name);
            read_file(&path)
        }
        None => Ok(bundled.to_string()),
    }
}

fn cmd_replay(args: ReplayArgs) -> Result<u8, Failure> {
    let Some(bundle) = BUNDLED.iter().find(|b| b.fixture == args.fixture) else {
        return Err(Failure::Usage(format!(
            "unknown fixture `{}`; bundled: {}",
            args.fixture,
            BUNDLED.iter().map(|b| b.fixture).collect::<Vec<_>>().join(", ")
        )));
    };
    let golden = fixture_text(&format!("goldens/{}.out", bundle.fixture), bundle.golden)?;
    let produced = match bundle.fixture {
        "sumf-unfold-3" => {
            let elements: Vec<Term> =
                ["alpha", "beta", "gamma"].iter().map(|s| Term::thing_var(s)).collect();
            let inst = sum_f_instance(&elements).map_err(|e| Failure::Usage(e.to_string()))?;
            let unfolded =
                unfold_nonstandard(&inst.folded).map_err(|e| Failure::Usage(e.to_string()))?;
            format!(
                "folded: {}\nstandard: {}\nunfolded: {}\nalpha-equivalent: {}\n",
                pretty_print(&inst.folded),
                pretty_print(&inst.standard),
                pretty_print(&unfolded),
                alpha_equivalent(&unfolded, &inst.standard)
            )
        }
        name => {
            let text = fixture_text(&format!("{name}.prf"), bundle.content)?;
            let script = parse_proof_script(&text).map_err(|e| Failure::Parse(e.to_string()))?;
            check_proof(&script).report()
        }
    };
    print!("{produced}");
    if produced == golden {
        Ok(EXIT_OK)
    } else {
        eprintln!("replay output differs from the golden file");
        Ok(EXIT_REJECTED)
    }
}
