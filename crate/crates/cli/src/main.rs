//! `geez`: generate, inspect and evaluate Ge'ez verb forms.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use geez_core::eval::{self, audit, parse_published, EvalReport, PublishedFigures, PUBLISHED_TABLE};
use geez_core::orthography::{check_package_rules, DiagnosticKind};
use geez_core::stemgen::classify_verb;
use geez_core::synthesizer::{resolve_verb, ObjectFilter, SynthError};
use geez_core::{
    batch_generate, generate_paradigm, load_lexicon, synthesize, FeatureBundle, Lexicon, Paradigm, ParadigmFilter,
    Png, RulePackage, StemClass, TamForm, VerbEntry,
};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "geez", version, about = "Rule-based Ge'ez verb synthesizer")]
struct Cli {
    #[command(flatten)]
    data: DataArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct DataArgs {
    /// Rule package directory
    #[arg(long, global = true, env = "GEEZ_RULES")]
    rules: Option<PathBuf>,
    /// Verb lexicon TSV
    #[arg(long, global = true, env = "GEEZ_LEXICON")]
    lexicon: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Tsv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Generate one surface form
    Synthesize {
        verb: String,
        #[arg(long, default_value = "perfective", value_parser = parse_tam)]
        tam: TamForm,
        #[arg(long, default_value = "basic")]
        class: String,
        #[arg(long, value_parser = parse_png)]
        subject: Png,
        #[arg(long, value_parser = parse_png)]
        object: Option<Png>,
        /// Print the lexical string and each rule firing
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Generate a full or filtered paradigm
    Paradigm {
        verb: String,
        #[arg(long, value_parser = parse_tam)]
        tam: Option<TamForm>,
        #[arg(long)]
        class: Option<String>,
        #[arg(long, value_parser = parse_png)]
        subject: Option<Png>,
        #[arg(long, value_parser = parse_png, conflicts_with = "no_object")]
        object: Option<Png>,
        /// Only forms without an object suffix
        #[arg(long)]
        no_object: bool,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Print the regularity flags of a lexicon verb
    Classify { verb: String },
    /// Load a rule package and report rule diagnostics
    Validate {
        /// Package directory (defaults to --rules)
        dir: Option<PathBuf>,
    },
    /// Score generated paradigms against gold files
    Eval {
        /// Directory of gold TSV files
        #[arg(long)]
        gold: Option<PathBuf>,
        /// Recompute the published per-verb table and list inconsistencies
        #[arg(long)]
        audit: bool,
        /// Write the report as JSON
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Generate paradigms for every lexicon verb
    Batch {
        #[arg(long, value_enum, default_value = "tsv")]
        format: Format,
    },
}

fn parse_tam(s: &str) -> Result<TamForm, String> {
    s.parse()
}

fn parse_png(s: &str) -> Result<Png, String> {
    s.parse()
}

/// An error line and its exit status.
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn new(code: u8, kind: &'static str, message: impl Into<String>) -> Failure {
        Failure { code, kind, message: message.into() }
    }

    fn usage(message: impl Into<String>) -> Failure {
        Failure::new(1, "usage", message)
    }

    fn load(message: impl ToString) -> Failure {
        Failure::new(4, "data-load", message.to_string())
    }

    fn unknown_verb(verb: &str) -> Failure {
        Failure::new(2, "unknown-verb", format!("{verb} is not in the lexicon"))
    }
}

impl From<SynthError> for Failure {
    fn from(e: SynthError) -> Failure {
        match e {
            SynthError::Ortho(_) => Failure::new(4, "rule-conflict", e.to_string()),
            _ => Failure::new(3, "invalid-combination", e.to_string()),
        }
    }
}

type Out = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let first = e.to_string();
            let first = first.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("error[usage]: {first}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error[{}]: {}", f.kind, f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Out {
    let data = &cli.data;
    match cli.command {
        Command::Synthesize { verb, tam, class, subject, object, trace, format } => {
            let (pkg, lex) = data.load()?;
            let entry = find(&lex, &verb, &pkg)?;
            let mut features = FeatureBundle::new(tam, class, subject);
            features.object = object;
            let form = synthesize(entry, &features, &pkg)?;
            if format == Format::Json {
                return Ok(json(&form));
            }
            let mut out = format!("{}\n", form.text);
            if trace {
                let _ = writeln!(out, "lexical: {}", form.trace.input);
                for step in &form.trace.applied {
                    let _ = writeln!(out, "  {} at {}", step.rule, step.position);
                }
            }
            Ok(out)
        }
        Command::Paradigm { verb, tam, class, subject, object, no_object, format } => {
            let (pkg, lex) = data.load()?;
            let entry = find(&lex, &verb, &pkg)?;
            let class = class.map(StemClass::new);
            if let Some(c) = &class {
                if pkg.class_def(c).is_none() {
                    return Err(Failure::new(3, "invalid-combination", format!("unknown stem class {c}")));
                }
            }
            let filter = ParadigmFilter {
                tam,
                class,
                subject,
                object: match (object, no_object) {
                    (Some(o), _) => ObjectFilter::Only(o),
                    (None, true) => ObjectFilter::None,
                    (None, false) => ObjectFilter::Any,
                },
            };
            let p = generate_paradigm(entry, &pkg, Some(&filter));
            for d in &p.diagnostics {
                eprintln!("warning: {}/{}: {}", d.tam, d.class, d.message);
            }
            Ok(match format {
                Format::Json => json(&p),
                Format::Tsv => paradigm_tsv(&p),
                Format::Table => paradigm_table(&p),
            })
        }
        Command::Classify { verb } => {
            let lex = data.lexicon()?;
            let entry = lex.get(&verb).ok_or_else(|| Failure::unknown_verb(&verb))?;
            let flags = classify_verb(entry);
            if flags.is_empty() {
                Ok("regular\n".into())
            } else {
                let names: Vec<&str> = flags.iter().map(|f| f.name()).collect();
                Ok(format!("irregular: {}\n", names.join(", ")))
            }
        }
        Command::Validate { dir } => {
            let dir = dir.or_else(|| data.rules.clone()).ok_or_else(|| Failure::usage("no rule package given"))?;
            let pkg = RulePackage::load(&dir).map_err(Failure::load)?;
            let diags = check_package_rules(&pkg.rules);
            let mut out = String::new();
            for d in &diags {
                let _ = writeln!(out, "{:?}: {}", d.kind, d.message);
            }
            let conflicts = diags
                .iter()
                .filter(|d| matches!(d.kind, DiagnosticKind::Conflict | DiagnosticKind::DuplicatePriority))
                .count();
            let _ = writeln!(
                out,
                "{}: version {}, {} affixes, {} rules, {} stem patterns, {} conflicts",
                dir.display(),
                pkg.version,
                pkg.affixes.len(),
                pkg.rules.len(),
                pkg.patterns.len(),
                conflicts
            );
            if conflicts > 0 {
                print!("{out}");
                return Err(Failure::new(4, "rule-conflict", format!("{conflicts} conflicting rule pairs")));
            }
            Ok(out)
        }
        Command::Eval { gold, audit: with_audit, out, format } => cmd_eval(data, gold.as_deref(), with_audit, out.as_deref(), format),
        Command::Batch { format } => {
            let (pkg, lex) = data.load()?;
            let batch = batch_generate(lex.entries(), &pkg);
            if format == Format::Json {
                #[derive(Serialize)]
                struct Row<'a> {
                    verb: &'a str,
                    forms: usize,
                }
                #[derive(Serialize)]
                struct Summary<'a> {
                    verbs: Vec<Row<'a>>,
                    total_forms: usize,
                }
                let verbs = batch.per_verb.iter().map(|(v, n)| Row { verb: v, forms: *n }).collect();
                return Ok(json(&Summary { verbs, total_forms: batch.total_forms }));
            }
            let mut s = String::from("verb\tforms\n");
            for (v, n) in &batch.per_verb {
                let _ = writeln!(s, "{v}\t{n}");
            }
            let _ = writeln!(s, "total\t{}", batch.total_forms);
            Ok(s)
        }
    }
}

impl DataArgs {
    fn package(&self) -> Result<RulePackage, Failure> {
        let dir = self.rules.as_ref().ok_or_else(|| Failure::usage("no rule package: pass --rules or set GEEZ_RULES"))?;
        RulePackage::load(dir).map_err(Failure::load)
    }

    fn lexicon(&self) -> Result<Lexicon, Failure> {
        let path = self.lexicon.as_ref().ok_or_else(|| Failure::usage("no lexicon: pass --lexicon or set GEEZ_LEXICON"))?;
        load_lexicon(path).map_err(Failure::load)
    }

    fn load(&self) -> Result<(RulePackage, Lexicon), Failure> {
        Ok((self.package()?, self.lexicon()?))
    }
}

fn find<'a>(lex: &'a Lexicon, verb: &str, pkg: &RulePackage) -> Result<&'a VerbEntry, Failure> {
    resolve_verb(lex, verb, pkg).ok_or_else(|| Failure::unknown_verb(verb))
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn paradigm_tsv(p: &Paradigm) -> String {
    let mut s = String::from("tam\tclass\tsubject\tobject\tsurface\tlexical\n");
    for (f, form) in &p.forms {
        let obj = f.object.map_or("-", Png::code);
        let _ = writeln!(s, "{}\t{}\t{}\t{}\t{}\t{}", f.tam, f.stem_class, f.subject, obj, form.text, form.segmentation.lexical());
    }
    s
}

type Block<'a> = (StemClass, BTreeMap<(Png, Option<Png>), &'a str>);

/// One block per TAM form and class: subject pronouns down, objects across.
fn paradigm_table(p: &Paradigm) -> String {
    let mut blocks: BTreeMap<(TamForm, usize), Block> = BTreeMap::new();
    let mut class_order: Vec<&StemClass> = Vec::new();
    for (f, form) in &p.forms {
        let ci = match class_order.iter().position(|c| **c == f.stem_class) {
            Some(i) => i,
            None => {
                class_order.push(&f.stem_class);
                class_order.len() - 1
            }
        };
        blocks
            .entry((f.tam, ci))
            .or_insert_with(|| (f.stem_class.clone(), BTreeMap::new()))
            .1
            .insert((f.subject, f.object), form.text.as_str());
    }
    let mut s = String::new();
    for ((tam, _), (class, cells)) in &blocks {
        let objects: Vec<Option<Png>> = std::iter::once(None)
            .chain(Png::ALL.into_iter().map(Some))
            .filter(|o| cells.keys().any(|(_, co)| co == o))
            .collect();
        let subjects: Vec<Png> = Png::ALL.into_iter().filter(|p| cells.keys().any(|(sp, _)| sp == p)).collect();
        let mut rows: Vec<Vec<String>> = Vec::new();
        let mut header = vec![String::new()];
        header.extend(objects.iter().map(|o| o.map_or("-".to_string(), |p| p.code().to_string())));
        rows.push(header);
        for subj in &subjects {
            let mut row = vec![format!("{} ({})", subj.pronoun(), subj.code())];
            row.extend(objects.iter().map(|o| cells.get(&(*subj, *o)).map_or(String::new(), |t| t.to_string())));
            rows.push(row);
        }
        let widths: Vec<usize> = (0..rows[0].len())
            .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
            .collect();
        let _ = writeln!(s, "{} {tam} {class}", p.verb.infinitive);
        for row in rows {
            let line: Vec<String> =
                row.iter().zip(&widths).map(|(cell, w)| format!("{cell}{}", " ".repeat(w - cell.chars().count()))).collect();
            let _ = writeln!(s, "{}", line.join("  ").trim_end());
        }
        s.push('\n');
    }
    s
}

#[derive(Serialize)]
struct EvalOutput {
    #[serde(skip_serializing_if = "Vec::is_empty")]
    verbs: Vec<(String, EvalReport)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    total: Option<EvalReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    audit: Option<eval::AuditReport>,
}

fn cmd_eval(data: &DataArgs, gold: Option<&Path>, with_audit: bool, out: Option<&Path>, format: Format) -> Out {
    if gold.is_none() && !with_audit {
        return Err(Failure::usage("eval needs --gold, --audit or both"));
    }
    let mut result = EvalOutput { verbs: Vec::new(), total: None, audit: None };
    if let Some(dir) = gold {
        let (pkg, lex) = data.load()?;
        let sets = eval::load_gold_dir(dir).map_err(Failure::load)?;
        for set in &sets {
            let entry = lex.get(&set.verb).ok_or_else(|| Failure::unknown_verb(&set.verb))?;
            let p = generate_paradigm(entry, &pkg, None);
            let report = eval::score(&p, set).map_err(|e| Failure::new(3, "invalid-combination", e.to_string()))?;
            result.verbs.push((set.verb.clone(), report));
        }
        let reports: Vec<EvalReport> = result.verbs.iter().map(|(_, r)| r.clone()).collect();
        result.total = Some(eval::aggregate(&reports));
    }
    if with_audit {
        let rows = parse_published(PUBLISHED_TABLE).map_err(Failure::load)?;
        result.audit = Some(audit(&rows, &PublishedFigures::REPORTED).map_err(Failure::load)?);
    }
    if let Some(path) = out {
        std::fs::write(path, json(&result)).map_err(|e| Failure::load(format!("cannot write {}: {e}", path.display())))?;
    }
    if format == Format::Json {
        return Ok(json(&result));
    }
    let mut s = String::new();
    for (verb, r) in &result.verbs {
        let _ = writeln!(s, "{verb}\t{}/{} correct\t{:.2}%", r.correct, r.generated, r.accuracy_percent());
    }
    if let Some(t) = &result.total {
        let _ = writeln!(s, "total\t{}/{} correct\t{:.2}%", t.correct, t.generated, t.accuracy_percent());
        for (cat, n) in &t.per_category {
            let _ = writeln!(s, "  {}\t{n}", serde_json::to_value(cat).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default());
        }
        for m in &t.mismatches {
            let _ = writeln!(s, "  mismatch {} {}: got {} expected {}", m.verb, m.features, m.got, m.expected);
        }
    }
    if let Some(a) = &result.audit {
        let t = &a.totals;
        let _ = writeln!(
            s,
            "published table: {} generated, {} correct, {} wrong, {:.2}%",
            t.generated,
            t.correct,
            t.wrong,
            t.accuracy_percent()
        );
        let _ = writeln!(s, "  regular rows: {} generated, {} wrong", a.regular.generated, a.regular.wrong);
        let _ = writeln!(s, "  irregular rows: {} generated, {} wrong", a.irregular.generated, a.irregular.wrong);
        for f in &a.findings {
            let _ = writeln!(s, "audit[{}]: {}", f.code, f.message);
        }
    }
    Ok(s)
}
