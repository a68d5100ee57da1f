mod output;

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use cnlasp_core::asp::{print_program, print_rule, AspProgram, Term};
use cnlasp_core::bundled::{self, parse_facts};
use cnlasp_core::cnl::{check_syntax, parse_cnl, split_sentences, SyntaxVerdict};
use cnlasp_core::codegen::compile;
use cnlasp_core::config::Config;
use cnlasp_core::dataset::{
    audit_manifest, generate_balanced_with, parse_targets, parse_templates, read_records,
    rephrase_expand_from, write_records, BagOfWords, DatasetManifest, DatasetRecord,
    ExternalProvider, IdentityProvider, ParaphraseProvider, SynonymProvider, Targets, TemplatePair,
};
use cnlasp_core::metrics::{evaluate, render_table, EvalPair};
use cnlasp_core::pipeline::{
    run_pipeline, serve_echo, translate, EquivalenceOutcome, EquivalenceSetup, PipelineInputs,
    PluginConfig, TranslatorSpec,
};
use cnlasp_core::solver::{
    check_uniform_equivalence_with, solve, EquivalenceOptions, Sample, Signature,
};

use output::{table, Format, Out};

/// Controlled natural language to ASP toolkit.
#[derive(Parser)]
#[command(name = "cnlasp", version)]
struct Cli {
    /// Config file; defaults to $CNLASP_CONFIG, then built-in defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "table")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Translate NL sentences (one per line) into CNL candidates.
    Translate(TranslateArgs),
    /// Compile a CNL document to an ASP program.
    Compile {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Translate, check, compile and optionally compare with a gold program.
    Run(RunArgs),
    /// Score hypotheses against references, one sentence per line.
    Eval(EvalArgs),
    /// Enumerate the answer sets of an ASP program.
    Solve(SolveArgs),
    /// Bounded uniform equivalence of two ASP programs.
    Equiv(EquivArgs),
    /// Generate a category-balanced dataset from templates.
    GenDataset(GenArgs),
    /// Expand a dataset with k paraphrases per record.
    Rephrase(RephraseArgs),
    /// Check the arithmetic of a dataset manifest.
    Audit(AuditArgs),
    /// Check CNL sentences against the grammar.
    CheckSyntax { input: PathBuf },
    /// List the bundled problems.
    Problems,
    #[command(hide = true)]
    PluginEcho,
}

#[derive(Args)]
struct TranslatorArgs {
    /// Template file for the retrieval translator.
    #[arg(long)]
    templates: Option<PathBuf>,
    /// External plugin command line; overrides the configured translator.
    #[arg(long, allow_hyphen_values = true)]
    plugin: Option<String>,
}

#[derive(Args)]
struct TranslateArgs {
    input: PathBuf,
    #[command(flatten)]
    translator: TranslatorArgs,
}

#[derive(Args)]
struct RunArgs {
    /// Bundled problem to run.
    #[arg(long, conflicts_with = "input")]
    problem: Option<String>,
    /// NL sentences, one per line.
    #[arg(long, required_unless_present = "problem")]
    input: Option<PathBuf>,
    #[arg(long)]
    gold: Option<PathBuf>,
    /// Reference CNL, one per input sentence.
    #[arg(long)]
    references: Option<PathBuf>,
    /// Input predicates for the equivalence check, e.g. node/1,edge/2.
    #[arg(long, value_delimiter = ',')]
    signature: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    universe: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    project: Vec<String>,
    /// Write the full run as JSON.
    #[arg(long)]
    save: Option<PathBuf>,
    #[command(flatten)]
    translator: TranslatorArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum MeteorStage {
    Exact,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    hyp: PathBuf,
    #[arg(long = "ref")]
    reference: PathBuf,
    /// Also report syntactic accuracy of the hypotheses.
    #[arg(long)]
    cnl_syntax: bool,
    #[arg(long, value_enum, default_value = "exact")]
    meteor_stage: MeteorStage,
}

#[derive(Args)]
struct SolveArgs {
    program: PathBuf,
    #[arg(long)]
    facts: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    project: Vec<String>,
    /// Keep only optimal answer sets.
    #[arg(long)]
    optimal: bool,
}

#[derive(Args)]
struct EquivArgs {
    left: PathBuf,
    right: PathBuf,
    #[arg(long, value_delimiter = ',', required = true)]
    signature: Vec<String>,
    #[arg(long, value_delimiter = ',', required = true)]
    universe: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    project: Vec<String>,
    /// Test this many random fact sets instead of all of them.
    #[arg(long)]
    random: Option<usize>,
    #[arg(long)]
    optimal: bool,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    templates: Option<PathBuf>,
    /// Directory with pids.txt, nouns.txt, verbs.txt and colors.txt.
    #[arg(long)]
    bow: Option<PathBuf>,
    /// TOML table of category label to record count.
    #[arg(long)]
    targets: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(short, long)]
    out: PathBuf,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProviderKind {
    Identity,
    Synonym,
    External,
}

#[derive(Args)]
struct RephraseArgs {
    input: PathBuf,
    #[arg(short, long)]
    out: PathBuf,
    #[arg(short)]
    k: Option<usize>,
    #[arg(long, value_enum, default_value = "synonym")]
    provider: ProviderKind,
    /// Plugin command line for the external provider.
    #[arg(long, allow_hyphen_values = true)]
    plugin: Option<String>,
    /// Rephrased records from an interrupted run.
    #[arg(long, requires = "resume_from")]
    resume: Option<PathBuf>,
    #[arg(long)]
    resume_from: Option<usize>,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct AuditArgs {
    /// A manifest (JSON) or, with --records, a dataset (JSONL).
    input: PathBuf,
    #[arg(long)]
    records: bool,
    /// Expected paraphrases per record when auditing records.
    #[arg(short)]
    k: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let out = Out { format: cli.format };
    if let Command::PluginEcho = cli.command {
        serve_echo(io::stdin().lock(), io::stdout().lock())?;
        return Ok(ExitCode::SUCCESS);
    }
    let config = Config::resolve(cli.config.as_deref())?;
    match cli.command {
        Command::Translate(a) => cmd_translate(&out, &config, a),
        Command::Compile { input, output } => cmd_compile(&out, &input, output.as_deref()),
        Command::Run(a) => cmd_run(&out, &config, a),
        Command::Eval(a) => cmd_eval(&out, &config, a),
        Command::Solve(a) => cmd_solve(&out, &config, a),
        Command::Equiv(a) => cmd_equiv(&out, &config, a),
        Command::GenDataset(a) => cmd_gen(&out, &config, a),
        Command::Rephrase(a) => cmd_rephrase(&out, &config, a),
        Command::Audit(a) => cmd_audit(&out, a),
        Command::CheckSyntax { input } => cmd_check(&out, &input),
        Command::Problems => cmd_problems(&out),
        Command::PluginEcho => unreachable!(),
    }
}

fn read_text(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Non-empty lines that are not `#` comments.
fn read_lines(path: &Path) -> Result<Vec<String>> {
    Ok(read_text(path)?
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect())
}

fn read_program(path: &Path) -> Result<AspProgram> {
    read_text(path)?
        .parse()
        .with_context(|| format!("parsing {}", path.display()))
}

fn signatures(list: &[String]) -> Result<Vec<Signature>> {
    list.iter()
        .map(|s| {
            s.parse()
                .map_err(|e: String| anyhow::anyhow!("signature '{s}': {e}"))
        })
        .collect()
}

fn terms(list: &[String]) -> Vec<Term> {
    list.iter()
        .map(|s| {
            s.parse::<i64>()
                .map_or_else(|_| Term::constant(s.as_str()), Term::Int)
        })
        .collect()
}

fn load_templates(path: Option<&Path>) -> Result<Vec<TemplatePair>> {
    match path {
        Some(p) => Ok(parse_templates(&read_text(p)?)?),
        None => Ok(bundled::templates()),
    }
}

fn translator_spec(config: &Config, args: &TranslatorArgs) -> TranslatorSpec {
    match &args.plugin {
        Some(cmd) => TranslatorSpec::ExternalProcess {
            command: cmd.split_whitespace().map(String::from).collect(),
            timeout_ms: PluginConfig::default().timeout_ms,
            window: PluginConfig::default().window,
        },
        None => config.translator.clone(),
    }
}

fn verdict_cells(v: &SyntaxVerdict) -> (String, String) {
    match v {
        SyntaxVerdict::Accepted { category } => ("ok".into(), category.to_string()),
        SyntaxVerdict::Rejected { reason } => ("rejected".into(), reason.clone()),
    }
}

fn cmd_translate(out: &Out, config: &Config, a: TranslateArgs) -> Result<ExitCode> {
    let sentences = read_lines(&a.input)?;
    let templates = load_templates(a.translator.templates.as_deref())?;
    let candidates = translate(
        &sentences,
        &translator_spec(config, &a.translator),
        &templates,
    )?;
    let mut rows = Vec::new();
    for (i, (nl, c)) in sentences.iter().zip(&candidates).enumerate() {
        out.record(&json!({ "index": i, "nl": nl, "candidate": c }));
        let status = serde_json::to_value(c)?["status"]
            .as_str()
            .unwrap_or("")
            .to_string();
        rows.push(vec![
            i.to_string(),
            status,
            c.cnl().unwrap_or("").to_string(),
        ]);
    }
    out.text(&table(&["#", "status", "cnl"], &rows));
    Ok(ExitCode::SUCCESS)
}

fn cmd_compile(out: &Out, input: &Path, output: Option<&Path>) -> Result<ExitCode> {
    let text = read_text(input)?;
    let program = match parse_cnl(&text)
        .map_err(|e| e.to_string())
        .and_then(|d| compile(&d).map_err(|e| e.to_string()))
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(ExitCode::from(2));
        }
    };
    let printed = print_program(&program);
    if let Some(path) = output {
        std::fs::write(path, &printed).with_context(|| format!("writing {}", path.display()))?;
    }
    for r in &program.rules {
        out.record(&json!({ "rule": print_rule(r) }));
    }
    if output.is_none() {
        out.text(&printed);
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_run(out: &Out, config: &Config, a: RunArgs) -> Result<ExitCode> {
    let mut inputs = PipelineInputs {
        metrics: config.metrics,
        ..PipelineInputs::default()
    };
    if let Some(name) = &a.problem {
        let p = bundled::problem(name).with_context(|| format!("no bundled problem '{name}'"))?;
        inputs.sentences = p.nl.clone();
        inputs.references = Some(p.cnl.clone());
        inputs.gold = Some(p.gold_program()?);
        let mut setup = p.equivalence_setup()?;
        setup.options.solver.atom_bound = config.solver.atom_bound;
        setup.options.solver.grounding_limit = config.solver.grounding_limit;
        inputs.equivalence = Some(setup);
    } else if let Some(input) = &a.input {
        inputs.sentences = read_lines(input)?;
    }
    if let Some(r) = &a.references {
        inputs.references = Some(read_lines(r)?);
    }
    if let Some(g) = &a.gold {
        inputs.gold = Some(read_program(g)?);
    }
    if !a.signature.is_empty() {
        inputs.equivalence = Some(EquivalenceSetup {
            signature: signatures(&a.signature)?,
            universe: terms(&a.universe),
            options: EquivalenceOptions {
                project: (!a.project.is_empty())
                    .then(|| signatures(&a.project))
                    .transpose()?,
                solver: config.solver,
                ..EquivalenceOptions::default()
            },
        });
    }
    let templates = load_templates(a.translator.templates.as_deref())?;
    let run = run_pipeline(&inputs, &translator_spec(config, &a.translator), &templates)?;
    if let Some(path) = &a.save {
        run.save(path)
            .with_context(|| format!("writing {}", path.display()))?;
    }

    for o in &run.cnl_outputs {
        out.record(o);
    }
    for e in &run.errors {
        out.record(&json!({ "error": e }));
    }
    out.record(&json!({ "asp_program": run.asp_program, "report": run.report }));

    let rows: Vec<Vec<String>> = run
        .cnl_outputs
        .iter()
        .map(|o| {
            let (status, detail) = verdict_cells(&o.verdict);
            vec![
                o.index.to_string(),
                status,
                detail,
                o.candidate.cnl().unwrap_or("").to_string(),
            ]
        })
        .collect();
    let mut text = table(&["#", "syntax", "category", "cnl"], &rows);
    for e in &run.errors {
        text += &format!("sentence {} ({:?}): {}\n", e.index, e.stage, e.message);
    }
    text += &format!(
        "\nSA: {:.2}% ({}/{})\n",
        run.report.syntactic_accuracy * 100.0,
        run.report.accepted,
        run.report.total
    );
    if let Some(m) = &run.report.metrics {
        text += &render_table(m);
    }
    match &run.report.equivalence {
        Some(EquivalenceOutcome::Checked { verdict }) => {
            text += &format!(
                "equivalence: {} ({} fact sets)\n",
                if verdict.equivalent {
                    "equivalent"
                } else {
                    "NOT equivalent"
                },
                verdict.tested
            );
            if let Some(c) = &verdict.counterexample {
                text += &format!("counterexample facts: {}\n", join(&c.facts));
            }
        }
        Some(EquivalenceOutcome::Skipped { reason }) => {
            text += &format!("equivalence: skipped ({reason})\n")
        }
        Some(EquivalenceOutcome::Failed { error }) => {
            text += &format!("equivalence: failed ({error})\n")
        }
        None => {}
    }
    if let Some(p) = &run.asp_program {
        text += &format!("\n{p}");
    }
    for n in &run.report.notes {
        text += &format!("note: {n}\n");
    }
    out.text(&text);
    let ok = matches!(
        run.report.equivalence,
        None | Some(EquivalenceOutcome::Checked {
            verdict: cnlasp_core::solver::EquivalenceVerdict {
                equivalent: true,
                ..
            }
        })
    );
    Ok(if ok && run.errors.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn cmd_eval(out: &Out, config: &Config, a: EvalArgs) -> Result<ExitCode> {
    let MeteorStage::Exact = a.meteor_stage;
    let hyps = read_text(&a.hyp)?;
    let refs = read_text(&a.reference)?;
    let (hyps, refs): (Vec<&str>, Vec<&str>) = (hyps.lines().collect(), refs.lines().collect());
    if hyps.len() != refs.len() {
        bail!("{} hypotheses but {} references", hyps.len(), refs.len());
    }
    let pairs: Vec<EvalPair> = hyps
        .iter()
        .zip(&refs)
        .map(|(h, r)| EvalPair::new(*h, *r))
        .collect();
    let report = evaluate(&pairs, &config.metrics, a.cnl_syntax)?;
    out.record(&report);
    out.text(&render_table(&report));
    Ok(ExitCode::SUCCESS)
}

fn cmd_solve(out: &Out, config: &Config, a: SolveArgs) -> Result<ExitCode> {
    let program = read_program(&a.program)?;
    let facts = match &a.facts {
        Some(f) => {
            parse_facts(&read_text(f)?).map_err(|e| anyhow::anyhow!("{}: {e}", f.display()))?
        }
        None => Vec::new(),
    };
    let mut solver = config.solver;
    solver.optimal_only |= a.optimal;
    let sets = solve(&program, &facts, &solver)?;
    let project = signatures(&a.project)?;
    let mut text = String::new();
    for (i, s) in sets.iter().enumerate() {
        let atoms: Vec<_> = if project.is_empty() {
            s.atoms.iter().cloned().collect()
        } else {
            s.project(&project).into_iter().collect()
        };
        out.record(&json!({
            "index": i + 1,
            "atoms": atoms.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
            "cost": s.cost,
        }));
        text += &format!("Answer {}: {}\n", i + 1, join(&atoms));
        if !s.cost.is_empty() {
            let cost: Vec<String> = s
                .cost
                .iter()
                .rev()
                .map(|(l, w)| format!("{w}@{l}"))
                .collect();
            text += &format!("Cost: {}\n", cost.join(" "));
        }
    }
    text += &format!("{} answer set(s)\n", sets.len());
    out.text(&text);
    Ok(ExitCode::SUCCESS)
}

fn cmd_equiv(out: &Out, config: &Config, a: EquivArgs) -> Result<ExitCode> {
    let left = read_program(&a.left)?;
    let right = read_program(&a.right)?;
    let mut options = EquivalenceOptions {
        project: (!a.project.is_empty())
            .then(|| signatures(&a.project))
            .transpose()?,
        solver: config.solver,
        ..EquivalenceOptions::default()
    };
    options.solver.optimal_only |= a.optimal;
    if let Some(n) = a.random {
        options.sample = Sample::Random {
            n,
            seed: config.seeds.sampling,
        };
    }
    let verdict = check_uniform_equivalence_with(
        &left,
        &right,
        &signatures(&a.signature)?,
        &terms(&a.universe),
        &options,
    )?;
    out.record(&verdict);
    let mut text = format!(
        "{} after {} fact set(s)\n",
        if verdict.equivalent {
            "equivalent"
        } else {
            "NOT equivalent"
        },
        verdict.tested
    );
    if let Some(c) = &verdict.counterexample {
        text += &format!("facts: {}\n", join(&c.facts));
        for (side, sets) in [("left", &c.left), ("right", &c.right)] {
            text += &format!("{side}: {} answer set(s)\n", sets.len());
            for s in sets {
                text += &format!(
                    "  {{{}}}\n",
                    s.iter()
                        .map(|a| a.to_string())
                        .collect::<Vec<_>>()
                        .join(", ")
                );
            }
        }
    }
    out.text(&text);
    Ok(if verdict.equivalent {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn manifest_text(m: &DatasetManifest) -> String {
    m.to_string()
}

fn write_jsonl(path: &Path, records: &[DatasetRecord]) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    write_records(&mut w, records)?;
    w.flush()?;
    Ok(())
}

fn read_jsonl(path: &Path) -> Result<Vec<DatasetRecord>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(read_records(BufReader::new(file))?)
}

fn write_manifest(path: &Path, m: &DatasetManifest) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(m)? + "\n")
        .with_context(|| format!("writing {}", path.display()))
}

fn cmd_gen(out: &Out, config: &Config, a: GenArgs) -> Result<ExitCode> {
    let templates = load_templates(a.templates.as_deref())?;
    let bow = match &a.bow {
        Some(dir) => BagOfWords::load(dir)?,
        None => bundled::bag_of_words(),
    };
    let targets: Targets = match &a.targets {
        Some(p) => parse_targets(&read_text(p)?)?,
        None => bundled::targets(),
    };
    let seed = a.seed.unwrap_or(config.seeds.generation);
    let (records, manifest) =
        generate_balanced_with(&templates, &bow, &targets, seed, config.dataset.retry_cap)?;
    write_jsonl(&a.out, &records)?;
    if let Some(p) = &a.manifest {
        write_manifest(p, &manifest)?;
    }
    out.record(&manifest);
    out.text(&manifest_text(&manifest));
    Ok(ExitCode::SUCCESS)
}

fn cmd_rephrase(out: &Out, config: &Config, a: RephraseArgs) -> Result<ExitCode> {
    let records = read_jsonl(&a.input)?;
    let k = a.k.unwrap_or(config.dataset.rephrase_k);
    let mut provider: Box<dyn ParaphraseProvider> = match a.provider {
        ProviderKind::Identity => Box::new(IdentityProvider),
        ProviderKind::Synonym => Box::new(SynonymProvider::default()),
        ProviderKind::External => {
            let cmd = a
                .plugin
                .as_deref()
                .context("--provider external needs --plugin")?;
            Box::new(ExternalProvider::spawn(&PluginConfig {
                command: cmd.split_whitespace().map(String::from).collect(),
                ..PluginConfig::default()
            })?)
        }
    };
    let completed = match &a.resume {
        Some(p) => read_jsonl(p)?,
        None => Vec::new(),
    };
    match rephrase_expand_from(
        &records,
        provider.as_mut(),
        k,
        completed,
        a.resume_from.unwrap_or(0),
    ) {
        Ok(all) => {
            write_jsonl(&a.out, &all)?;
            let manifest = DatasetManifest::from_records(&all, Some(k));
            if let Some(p) = &a.manifest {
                write_manifest(p, &manifest)?;
            }
            out.record(&manifest);
            out.text(&manifest_text(&manifest));
            Ok(ExitCode::SUCCESS)
        }
        Err(f) => {
            let partial = a.out.with_extension("partial.jsonl");
            write_jsonl(&partial, &f.completed)?;
            eprintln!(
                "error: {f}\npartial output in {}; continue with --resume {} --resume-from {}",
                partial.display(),
                partial.display(),
                f.resume_from
            );
            Ok(ExitCode::FAILURE)
        }
    }
}

fn cmd_audit(out: &Out, a: AuditArgs) -> Result<ExitCode> {
    let manifest = if a.records {
        DatasetManifest::from_records(&read_jsonl(&a.input)?, a.k)
    } else {
        let mut m: DatasetManifest = serde_json::from_str(&read_text(&a.input)?)
            .with_context(|| format!("parsing {}", a.input.display()))?;
        if a.k.is_some() {
            m.rephrase_k = a.k;
        }
        m
    };
    let mut text = manifest_text(&manifest);
    let code = match audit_manifest(&manifest) {
        Ok(()) => {
            out.record(&json!({ "ok": true }));
            text += "audit: ok\n";
            ExitCode::SUCCESS
        }
        Err(violations) => {
            for v in &violations {
                out.record(v);
                text += &format!("violation: {v}\n");
            }
            ExitCode::FAILURE
        }
    };
    out.text(&text);
    Ok(code)
}

fn cmd_check(out: &Out, input: &Path) -> Result<ExitCode> {
    let text = read_text(input)?;
    let mut rows = Vec::new();
    let mut accepted = 0;
    let spans = split_sentences(&text);
    for (i, span) in spans.iter().enumerate() {
        let sentence = span.text.trim();
        let verdict = check_syntax(sentence, None);
        accepted += verdict.is_accepted() as usize;
        out.record(&json!({ "index": i, "sentence": sentence, "verdict": verdict }));
        let (status, detail) = verdict_cells(&verdict);
        rows.push(vec![i.to_string(), status, detail, sentence.to_string()]);
    }
    let mut t = table(&["#", "status", "category/reason", "sentence"], &rows);
    if !spans.is_empty() {
        t += &format!(
            "\nSA: {:.2}% ({accepted}/{})\n",
            100.0 * accepted as f64 / spans.len() as f64,
            spans.len()
        );
    }
    out.text(&t);
    Ok(if accepted == spans.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn cmd_problems(out: &Out) -> Result<ExitCode> {
    let mut rows = Vec::new();
    for p in bundled::problems() {
        out.record(&json!({ "name": p.name, "title": p.title, "sentences": p.nl.len(), "universe": p.universe }));
        rows.push(vec![
            p.name.clone(),
            p.nl.len().to_string(),
            p.universe.join(","),
            p.title.clone(),
        ]);
    }
    out.text(&table(&["name", "sentences", "universe", "title"], &rows));
    Ok(ExitCode::SUCCESS)
}
