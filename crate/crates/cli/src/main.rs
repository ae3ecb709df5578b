use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use halqa_core::eval::{self, DEFAULT_SWEEP};
use halqa_core::{load_corpus, AskOutcome, Config, Engine, Error, Index, Resources, Settings, Technique};

/// Yes/no question answering over a directory of Arabic text files.
#[derive(Debug, Parser)]
#[command(name = "halqa", version)]
struct Cli {
    /// TOML configuration file; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the index for a corpus and save it.
    Index {
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Snapshot path, defaults to `<corpus>/.halqa-index.json`.
        #[arg(long)]
        index: Option<PathBuf>,
    },
    /// Answer one question.
    Ask {
        #[command(flatten)]
        run: RunArgs,
        /// Load this snapshot instead of indexing the corpus.
        #[arg(long)]
        index: Option<PathBuf>,
        /// Print the parsed question, representations, paragraphs and candidates.
        #[arg(long)]
        verbose: bool,
        #[arg(long)]
        json: bool,
        question: String,
    },
    /// Score a labeled question file.
    Eval {
        #[command(flatten)]
        run: RunArgs,
        /// TSV file of `question<TAB>yes|no` lines.
        #[arg(long)]
        questions: PathBuf,
        /// Evaluate all 8 technique/thesaurus/advanced combinations.
        #[arg(long)]
        matrix: bool,
        /// Repeat the evaluation on growing corpus prefixes.
        #[arg(long, value_delimiter = ',', num_args = 0.., default_missing_value = "5,10,15,20")]
        sweep: Option<Vec<usize>>,
        /// With --sweep, ask every question at every corpus size.
        #[arg(long)]
        all_questions: bool,
        /// Print per-question records for each report.
        #[arg(long)]
        verbose: bool,
        /// Emit JSON lines instead of a table.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

impl From<Switch> for bool {
    fn from(s: Switch) -> bool {
        s == Switch::On
    }
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long, value_parser = parse_technique)]
    technique: Option<Technique>,
    /// Paragraphs handed to answer selection.
    #[arg(long)]
    k: Option<usize>,
    /// Documents kept by the document technique.
    #[arg(long)]
    k_docs: Option<usize>,
    #[arg(long, value_enum)]
    thesaurus: Option<Switch>,
    #[arg(long, value_enum)]
    advanced: Option<Switch>,
}

fn parse_technique(s: &str) -> Result<Technique, String> {
    s.parse()
}

impl RunArgs {
    fn apply(&self, config: &mut Config) {
        if let Some(c) = &self.corpus {
            config.corpus = Some(c.clone());
        }
        config.technique = self.technique.or(config.technique);
        config.k = self.k.or(config.k);
        config.k_docs = self.k_docs.or(config.k_docs);
        config.thesaurus = self.thesaurus.map(bool::from).or(config.thesaurus);
        config.advanced = self.advanced.map(bool::from).or(config.advanced);
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Malformed(_) => 1,
        _ => 2,
    }
}

fn load_config(path: Option<&Path>) -> halqa_core::Result<Config> {
    match path {
        Some(p) => Config::load(p),
        None => Ok(Config::default()),
    }
}

fn corpus_dir(config: &Config) -> halqa_core::Result<PathBuf> {
    config
        .corpus
        .clone()
        .ok_or_else(|| Error::Config("no corpus given (use --corpus or set corpus in the config file)".into()))
}

fn default_snapshot(corpus: &Path) -> PathBuf {
    corpus.join(".halqa-index.json")
}

fn run(cli: Cli) -> halqa_core::Result<String> {
    let mut config = load_config(cli.config.as_deref())?;
    match cli.command {
        Command::Index { corpus, index } => {
            if corpus.is_some() {
                config.corpus = corpus;
            }
            config.check_paths()?;
            let corpus = corpus_dir(&config)?;
            let resources = Resources::load(&config.lexicon)?;
            let idx = resources.build_index(&load_corpus(&corpus)?)?;
            let target = index.or(config.index).unwrap_or_else(|| default_snapshot(&corpus));
            idx.save(&target)?;
            Ok(format!(
                "documents: {}\nparagraphs: {}\nvocabulary: {}\nsnapshot: {}\n",
                idx.document_count(),
                idx.paragraph_count(),
                idx.vocabulary_size(),
                target.display()
            ))
        }
        Command::Ask {
            run,
            index,
            verbose,
            json,
            question,
        } => {
            run.apply(&mut config);
            config.check_paths()?;
            let settings = config.settings()?;
            let resources = Arc::new(Resources::load(&config.lexicon)?);
            let idx = match index.or(config.index.clone()) {
                Some(path) => Index::load(&path)?,
                None => resources.build_index(&load_corpus(&corpus_dir(&config)?)?)?,
            };
            let engine = Engine::new(resources, idx, settings)?;
            let outcome = engine.ask(&question)?;
            if json {
                let text = if verbose {
                    serde_json::to_string_pretty(&outcome)
                } else {
                    serde_json::to_string(&outcome.verdict)
                };
                Ok(text.map_err(|e| Error::Snapshot(e.to_string()))? + "\n")
            } else {
                Ok(render_outcome(&outcome, verbose))
            }
        }
        Command::Eval {
            run,
            questions,
            matrix,
            sweep,
            all_questions,
            verbose,
            json,
        } => {
            run.apply(&mut config);
            config.check_paths()?;
            let base = config.settings()?;
            let resources = Arc::new(Resources::load(&config.lexicon)?);
            let corpus = load_corpus(&corpus_dir(&config)?)?;
            let questions = eval::load_questions(&questions)?;

            let rows: Vec<Settings> = if matrix {
                eval::settings_matrix(base)
            } else {
                vec![base]
            };
            let mut reports = Vec::new();
            match &sweep {
                Some(sizes) => {
                    let sizes: &[usize] = if sizes.is_empty() { &DEFAULT_SWEEP } else { sizes };
                    for settings in rows {
                        reports.extend(eval::corpus_sweep(
                            resources.clone(),
                            &corpus,
                            &questions,
                            settings,
                            sizes,
                            all_questions,
                        )?);
                    }
                }
                None => {
                    let index = resources.build_index(&corpus)?;
                    for settings in rows {
                        let engine = Engine::new(resources.clone(), index.clone(), settings)?;
                        reports.push(eval::evaluate(&engine, &questions, eval::settings_label(&settings))?);
                    }
                }
            }
            if json {
                eval::render_json_lines(&reports)
            } else {
                let mut out = eval::render_table(&reports);
                if verbose {
                    for r in &reports {
                        let _ = writeln!(out, "\n[{}, {} documents]", r.label, r.documents_used);
                        for rec in &r.records {
                            let mark = if rec.correct { "ok " } else { "BAD" };
                            let _ = writeln!(
                                out,
                                "{mark} {:>3} gold={:<3} got={:<7} {}",
                                rec.index, rec.gold, rec.predicted, rec.question
                            );
                        }
                    }
                }
                Ok(out)
            }
        }
    }
}

fn render_outcome(outcome: &AskOutcome, verbose: bool) -> String {
    let mut out = String::new();
    if verbose {
        let q = &outcome.repset.source;
        let _ = writeln!(out, "question: {}", outcome.question);
        let _ = writeln!(
            out,
            "parsed: kind={} head={} relation={} remaining=[{}] negated={}",
            q.kind.symbol(),
            q.head,
            q.relation,
            q.remaining.join(" "),
            q.negated
        );
        let _ = writeln!(out, "query terms: {}", outcome.repset.query_terms.join(" "));
        let _ = writeln!(out, "representations:");
        for rep in &outcome.repset.reps {
            let provenance = format!("{:?}", rep.provenance).to_lowercase();
            let _ = writeln!(out, "  {provenance:<8} {rep}");
        }
        if !outcome.documents.is_empty() {
            let _ = writeln!(out, "documents:");
            for d in &outcome.documents {
                let _ = writeln!(out, "  {:>10.4}  {}", d.score, d.doc_id);
            }
        }
        let _ = writeln!(out, "paragraphs:");
        for p in &outcome.retrieved {
            let _ = writeln!(
                out,
                "  {:>10.4}  {}#{}  {}",
                p.score,
                p.doc_id,
                p.para_id,
                p.text.replace('\n', " ")
            );
        }
        let _ = writeln!(out, "candidates:");
        if outcome.verdict.trace.is_empty() {
            let _ = writeln!(out, "  (none)");
        }
        for t in &outcome.verdict.trace {
            let _ = writeln!(
                out,
                "  span={} {}#{} sentence {}{}  {}",
                t.span_rank,
                t.doc_id,
                t.para_id,
                t.sentence_index,
                if t.via_advanced_search {
                    " (preceding sentence)"
                } else {
                    ""
                },
                t.rep
            );
        }
        if let Some(s) = &outcome.verdict.supporting {
            let _ = writeln!(out, "supporting: {}", s.text);
        }
    }
    let _ = writeln!(out, "{}", outcome.verdict.answer);
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("halqa: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
