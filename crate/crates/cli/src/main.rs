mod output;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use titlekit::composer::{allocate_groups, assign_respondents, compose_bank, load_bank, ComposedTitle};
use titlekit::corpus::{compare_corpora, default_rates, synthetic_corpus, tag_frequency, write_frequency_csv};
use titlekit::headline::{BehaviorClue, HeadlineTagger};
use titlekit::survey::synth::{generate_responses, reference_target};
use titlekit::survey::{full_report, write_percentages_csv, write_report_csv, PatternAxis, SurveyResponse};
use titlekit::{LexiconFile, MarkerLexicon, OrderTemplate, TaggedTitle, TitleParser};

use output::{emit, jsonl, read_input};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable inputs, invalid lexicon or template.
    Config(String),
    /// Input records that could not be processed.
    Data(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Data(_) => 1,
            CliError::Config(_) | CliError::Io(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) | CliError::Data(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

/// Outcome of a command that ran to completion.
enum Status {
    Clean,
    /// Output was written, but this many input records were rejected.
    Rejected(usize),
}

#[derive(Parser)]
#[command(name = "titlekit", version, about = "Tag, compose and analyse technical titles and headlines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tag titles (one per line) by template-driven parsing; emits JSONL.
    Parse(TagArgs),
    /// Tag headlines (one per line) by behavior clues; emits JSONL.
    TagHeadline(TagArgs),
    /// Compose the twelve pattern titles of every phrase-bank entry; emits JSONL.
    Compose(ComposeArgs),
    /// Split composed titles into survey groups, or deal respondents into groups.
    Allocate(AllocateArgs),
    /// Tag frequencies of a tagged corpus, optionally contrasted with headlines; emits CSV.
    CorpusStats(CorpusArgs),
    /// Chi-square tests and impression percentages from survey responses; emits CSV.
    Survey(SurveyArgs),
    /// Generate reproducible synthetic data.
    Synth(SynthArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Language {
    En,
    Ja,
}

#[derive(Args)]
struct LexiconArgs {
    /// Lexicon JSON file; defaults to the bundled lexicon for --language.
    #[arg(long)]
    lexicon: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "en")]
    language: Language,
    /// Template id (built-in or defined in the lexicon file).
    #[arg(long)]
    template: Option<String>,
}

impl LexiconArgs {
    fn load(&self) -> Result<(MarkerLexicon, OrderTemplate), CliError> {
        let file = match &self.lexicon {
            Some(path) => LexiconFile::from_path(path).map_err(|e| CliError::Config(e.to_string()))?,
            None => LexiconFile {
                lexicon: match self.language {
                    Language::En => MarkerLexicon::english(),
                    Language::Ja => MarkerLexicon::japanese(),
                },
                templates: Vec::new(),
            },
        };
        let id = self.template.clone().unwrap_or_else(|| {
            match self.language {
                Language::En => "en-paper",
                Language::Ja => "ja-paper",
            }
            .to_string()
        });
        let template = file.template(&id).map_err(|e| CliError::Config(e.to_string()))?;
        Ok((file.lexicon, template))
    }
}

#[derive(Args)]
struct TagArgs {
    #[command(flatten)]
    lexicon: LexiconArgs,
    /// Input file, one string per line; standard input when absent or `-`.
    input: Option<PathBuf>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ComposeArgs {
    /// Phrase bank JSON (array of entries).
    #[arg(long)]
    bank: PathBuf,
    #[command(flatten)]
    lexicon: LexiconArgs,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["bank", "respondents"]))]
struct AllocateArgs {
    /// Phrase bank JSON; every field must yield 36 titles.
    #[arg(long)]
    bank: Option<PathBuf>,
    /// Respondent ids, one per line.
    #[arg(long, requires = "seed")]
    respondents: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 4)]
    groups: usize,
    #[command(flatten)]
    lexicon: LexiconArgs,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CorpusArgs {
    /// Tagged titles as JSONL (parse output).
    #[arg(long)]
    titles: PathBuf,
    /// Tagged headlines as JSONL, for the title/headline contrast.
    #[arg(long)]
    headlines: Option<PathBuf>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Axis {
    Obligatory,
    Optional,
}

#[derive(Args)]
struct SurveyArgs {
    /// Responses as JSONL.
    #[arg(long)]
    responses: PathBuf,
    /// Test report CSV; standard output when absent.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Percentage matrix CSV.
    #[arg(long)]
    percentages: Option<PathBuf>,
    /// Pattern family forming the table rows.
    #[arg(long, value_enum, default_value = "obligatory")]
    axis: Axis,
}

#[derive(Clone, Copy, ValueEnum)]
enum SynthKind {
    /// Responses tuned to the reference effect sizes.
    Survey,
    /// Tagged corpus with default planted tag rates.
    Corpus,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long, value_enum)]
    kind: SynthKind,
    /// Corpus size (documents).
    #[arg(long, default_value_t = 100)]
    size: usize,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

fn report_failures(failures: &[(usize, String)]) {
    for (line, msg) in failures {
        eprintln!("line {line}: {msg}");
    }
}

fn non_empty_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty())
}

fn status_of(rejected: usize) -> Status {
    if rejected == 0 {
        Status::Clean
    } else {
        Status::Rejected(rejected)
    }
}

fn run_parse(args: &TagArgs) -> Result<Status, CliError> {
    let (lexicon, template) = args.lexicon.load()?;
    let text = read_input(args.input.as_deref())?;
    let parser = TitleParser::new(&lexicon, &template);
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for (line, title) in non_empty_lines(&text) {
        match parser.parse(title) {
            Ok(t) => records.push(t),
            Err(e) => failures.push((line, format!("{}: {e}", e.name()))),
        }
    }
    emit(args.output.as_ref(), &jsonl(&records))?;
    report_failures(&failures);
    Ok(status_of(failures.len()))
}

#[derive(Serialize)]
struct HeadlineRecord<'a> {
    #[serde(flatten)]
    title: &'a TaggedTitle,
    mode: &'static str,
    behavior_clue: Option<BehaviorClue>,
}

fn run_tag_headline(args: &TagArgs) -> Result<Status, CliError> {
    let (lexicon, template) = args.lexicon.load()?;
    let text = read_input(args.input.as_deref())?;
    let tagger = HeadlineTagger::new(&lexicon, &template);
    let mut tagged = Vec::new();
    let mut failures = Vec::new();
    for (line, headline) in non_empty_lines(&text) {
        match tagger.tag(headline) {
            Ok(t) => tagged.push(t),
            Err(e) => failures.push((line, format!("{}: {e}", e.name()))),
        }
    }
    let records = tagged.iter().map(|t| HeadlineRecord {
        title: &t.title,
        mode: "headline",
        behavior_clue: t.behavior_clue,
    });
    emit(args.output.as_ref(), &jsonl(records))?;
    report_failures(&failures);
    Ok(status_of(failures.len()))
}

fn composed(bank: &Path, lexicon: &LexiconArgs) -> Result<Vec<ComposedTitle>, CliError> {
    let (_, template) = lexicon.load()?;
    let text = read_input(Some(bank))?;
    let entries = load_bank(&text).map_err(|e| CliError::Config(format!("{}: {e}", bank.display())))?;
    compose_bank(&entries, &template).map_err(|e| CliError::Data(e.to_string()))
}

fn run_compose(args: &ComposeArgs) -> Result<Status, CliError> {
    let titles = composed(&args.bank, &args.lexicon)?;
    emit(args.output.as_ref(), &jsonl(&titles))?;
    Ok(Status::Clean)
}

#[derive(Serialize)]
struct Assignment<'a> {
    respondent_id: &'a str,
    group: usize,
}

fn run_allocate(args: &AllocateArgs) -> Result<Status, CliError> {
    if args.groups == 0 {
        return Err(CliError::Config("--groups must be at least 1".into()));
    }
    if let Some(bank) = &args.bank {
        let titles = composed(bank, &args.lexicon)?;
        let mut fields: BTreeMap<&str, Vec<ComposedTitle>> = BTreeMap::new();
        for t in &titles {
            fields.entry(t.field_id.as_str()).or_default().push(t.clone());
        }
        let mut out = Vec::new();
        for (field, titles) in fields {
            let allocated =
                allocate_groups(&titles, args.groups).map_err(|e| CliError::Data(format!("field {field}: {e}")))?;
            out.extend(allocated);
        }
        emit(args.output.as_ref(), &jsonl(&out))?;
        return Ok(Status::Clean);
    }
    let path = args.respondents.as_ref().expect("clap enforces one source");
    let seed = args.seed.expect("clap requires --seed with --respondents");
    let text = read_input(Some(path))?;
    let ids: Vec<&str> = non_empty_lines(&text).map(|(_, l)| l.trim()).collect();
    let groups = assign_respondents(&ids, args.groups, seed);
    let records = ids.iter().map(|id| Assignment {
        respondent_id: id,
        group: groups[*id],
    });
    emit(args.output.as_ref(), &jsonl(records))?;
    Ok(Status::Clean)
}

fn read_tagged(path: &Path, failures: &mut Vec<(usize, String)>) -> Result<Vec<TaggedTitle>, CliError> {
    let text = read_input(Some(path))?;
    let mut out = Vec::new();
    for (line, record) in non_empty_lines(&text) {
        match serde_json::from_str::<TaggedTitle>(record) {
            Ok(t) => out.push(t),
            Err(e) => failures.push((line, format!("{}: {e}", path.display()))),
        }
    }
    Ok(out)
}

fn run_corpus_stats(args: &CorpusArgs) -> Result<Status, CliError> {
    let mut failures = Vec::new();
    let titles = read_tagged(&args.titles, &mut failures)?;
    let headlines = args.headlines.as_ref().map(|p| read_tagged(p, &mut failures)).transpose()?;
    report_failures(&failures);
    let data = |e: titlekit::corpus::CorpusError| CliError::Data(e.to_string());
    let title_report = tag_frequency(&titles).map_err(data)?;
    let comparison = headlines.map(|h| compare_corpora(&titles, &h)).transpose().map_err(data)?;
    let mut buf = Vec::new();
    write_frequency_csv(&mut buf, &title_report, comparison.as_ref()).map_err(|e| CliError::Io(e.to_string()))?;
    emit(args.output.as_ref(), &buf)?;
    Ok(status_of(failures.len()))
}

fn run_survey(args: &SurveyArgs) -> Result<Status, CliError> {
    let text = read_input(Some(&args.responses))?;
    let mut responses = Vec::new();
    let mut failures = Vec::new();
    for (line, record) in non_empty_lines(&text) {
        match serde_json::from_str::<SurveyResponse>(record) {
            Ok(r) => responses.push(r),
            Err(e) => failures.push((line, e.to_string())),
        }
    }
    report_failures(&failures);
    let axis = match args.axis {
        Axis::Obligatory => PatternAxis::Obligatory,
        Axis::Optional => PatternAxis::Optional,
    };
    let report = full_report(&responses, axis).map_err(|e| CliError::Data(e.to_string()))?;
    let mut tests = Vec::new();
    write_report_csv(&mut tests, &report).map_err(|e| CliError::Io(e.to_string()))?;
    let percentages = match &args.percentages {
        Some(_) => {
            let mut buf = Vec::new();
            write_percentages_csv(&mut buf, &report).map_err(|e| CliError::Io(e.to_string()))?;
            Some(buf)
        }
        None => None,
    };
    emit(args.report.as_ref(), &tests)?;
    if let (Some(path), Some(buf)) = (&args.percentages, percentages) {
        emit(Some(path), &buf)?;
    }
    Ok(status_of(failures.len()))
}

fn run_synth(args: &SynthArgs) -> Result<Status, CliError> {
    let bytes = match args.kind {
        SynthKind::Survey => {
            let responses = generate_responses(&reference_target(), args.seed).map_err(|e| CliError::Data(e.to_string()))?;
            jsonl(&responses)
        }
        SynthKind::Corpus => {
            if args.size == 0 {
                return Err(CliError::Config("--size must be at least 1".into()));
            }
            let corpus = synthetic_corpus(&default_rates(), args.size, args.seed, true)
                .map_err(|e| CliError::Config(e.to_string()))?;
            jsonl(&corpus)
        }
    };
    emit(args.output.as_ref(), &bytes)?;
    Ok(Status::Clean)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Parse(a) => run_parse(a),
        Command::TagHeadline(a) => run_tag_headline(a),
        Command::Compose(a) => run_compose(a),
        Command::Allocate(a) => run_allocate(a),
        Command::CorpusStats(a) => run_corpus_stats(a),
        Command::Survey(a) => run_survey(a),
        Command::Synth(a) => run_synth(a),
    };
    match result {
        Ok(Status::Clean) => ExitCode::SUCCESS,
        Ok(Status::Rejected(n)) => {
            eprintln!("titlekit: {n} input record(s) rejected");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("titlekit: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
