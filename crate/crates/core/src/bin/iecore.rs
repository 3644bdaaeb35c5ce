use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use ie_core::kb::{load_kb, KnowledgeBase, PipelineConfig};
use ie_core::morphology::MorphConfig;
use ie_core::pipeline::{emit_html_document, emit_json, run_documents, train_tagger, Document, RunResult};
use ie_core::scanner::{expand_abbreviations, Scanner};
use ie_core::tagger::{render_rules, tag_tokens};

#[derive(Parser)]
#[command(name = "iecore", version, about = "Shallow information extraction over German text")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Json,
    Html,
}

impl Emit {
    fn extension(self) -> &'static str {
        match self {
            Emit::Json => "json",
            Emit::Html => "html",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the pipeline over documents (files, or stdin when none are given).
    Run {
        #[arg(long)]
        kb: PathBuf,
        #[arg(long)]
        pipeline: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        emit: Emit,
        /// Output file; a directory when several inputs are given.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (0 = one per core).
        #[arg(long, default_value_t = 0)]
        workers: usize,
        inputs: Vec<PathBuf>,
    },
    /// Learn tagger filter rules from the `*.txt` files of a corpus directory.
    TrainTagger {
        #[arg(long)]
        kb: PathBuf,
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value_t = 100)]
        max_rules: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Load a knowledge base (and optionally a pipeline) and report problems.
    ValidateKb {
        #[arg(long)]
        kb: PathBuf,
        #[arg(long)]
        pipeline: Option<PathBuf>,
    },
    /// Measure scanning and morphological analysis throughput.
    Bench {
        #[arg(long)]
        kb: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 5)]
        repetitions: usize,
    },
}

/// A failure that has already been reported on stderr.
struct Failed;

fn kb_or_report(dir: &Path) -> Result<KnowledgeBase, Failed> {
    load_kb(dir).map_err(|e| {
        for d in e.diagnostics() {
            eprintln!("{}: {d}", dir.display());
        }
        Failed
    })
}

fn config_or_report(path: &Path, kb: &KnowledgeBase) -> Result<PipelineConfig, Failed> {
    let config = PipelineConfig::load(path).map_err(|e| {
        eprintln!("{e}");
        Failed
    })?;
    config.validate(kb).map_err(|e| {
        eprintln!("{e}");
        Failed
    })?;
    Ok(config)
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<(), Failed> {
    let result = match path {
        Some(p) => std::fs::write(p, bytes),
        None => std::io::stdout().lock().write_all(bytes),
    };
    result.map_err(|e| {
        eprintln!("cannot write output: {e}");
        Failed
    })
}

fn render(result: &RunResult, emit: Emit) -> Vec<u8> {
    match emit {
        Emit::Json => emit_json(result),
        Emit::Html => emit_html_document(result).into_bytes(),
    }
}

fn read_documents(inputs: &[PathBuf]) -> Result<Vec<Document>, Failed> {
    if inputs.is_empty() {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text).map_err(|e| {
            eprintln!("cannot read stdin: {e}");
            Failed
        })?;
        return Ok(vec![Document::new("stdin", text)]);
    }
    inputs
        .iter()
        .map(|p| {
            std::fs::read_to_string(p).map(|t| Document::new(p.display().to_string(), t)).map_err(|e| {
                eprintln!("{}: {e}", p.display());
                Failed
            })
        })
        .collect()
}

fn output_name(input: &Path, emit: Emit) -> PathBuf {
    let stem = input.file_stem().map_or_else(|| "stdin".into(), |s| s.to_string_lossy().into_owned());
    PathBuf::from(format!("{stem}.{}", emit.extension()))
}

fn run(
    kb: &Path,
    pipeline: &Path,
    emit: Emit,
    out: Option<&Path>,
    workers: usize,
    inputs: &[PathBuf],
) -> Result<bool, Failed> {
    let kb = kb_or_report(kb)?;
    let config = config_or_report(pipeline, &kb)?;
    let docs = read_documents(inputs)?;
    let results = run_documents(&docs, &kb, &config, workers).map_err(|e| {
        eprintln!("{e}");
        Failed
    })?;
    let many = docs.len() > 1;
    if let (true, Some(dir)) = (many, out) {
        std::fs::create_dir_all(dir).map_err(|e| {
            eprintln!("{}: {e}", dir.display());
            Failed
        })?;
    }
    let mut ok = true;
    for (i, result) in results.into_iter().enumerate() {
        match result {
            Ok(r) => {
                let bytes = render(&r, emit);
                let target = match (many, out) {
                    (true, Some(dir)) => Some(dir.join(output_name(&inputs[i], emit))),
                    (false, Some(file)) => Some(file.to_path_buf()),
                    (_, None) => None,
                };
                write_output(target.as_deref(), &bytes)?;
            }
            Err(e) => {
                eprintln!("{e}");
                ok = false;
            }
        }
    }
    Ok(ok)
}

fn train(kb: &Path, corpus: &Path, max_rules: usize, out: Option<&Path>) -> Result<bool, Failed> {
    let kb = kb_or_report(kb)?;
    let mut files: Vec<PathBuf> = std::fs::read_dir(corpus)
        .map_err(|e| {
            eprintln!("{}: {e}", corpus.display());
            Failed
        })?
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "txt"))
        .collect();
    files.sort();
    if files.is_empty() {
        eprintln!("{}: no .txt files", corpus.display());
        return Err(Failed);
    }
    let texts: Vec<String> = read_documents(&files)?.into_iter().map(|d| d.text).collect();
    let rules = train_tagger(&texts, &kb, max_rules);
    eprintln!("learned {} rules from {} files", rules.len(), files.len());
    write_output(out, render_rules(&rules).as_bytes())?;
    Ok(true)
}

fn validate(kb_dir: &Path, pipeline: Option<&Path>) -> Result<bool, Failed> {
    let kb = kb_or_report(kb_dir)?;
    if let Some(p) = pipeline {
        config_or_report(p, &kb)?;
    }
    println!(
        "{}: ok ({} grammars, {} combination patterns)",
        kb_dir.display(),
        kb.grammars.len(),
        kb.fcps.len()
    );
    Ok(true)
}

fn bench(kb: &Path, input: &Path, repetitions: usize) -> Result<bool, Failed> {
    let kb = kb_or_report(kb)?;
    let text = std::fs::read_to_string(input).map_err(|e| {
        eprintln!("{}: {e}", input.display());
        Failed
    })?;
    let scanner = Scanner::with_abbreviations(&kb.abbreviations);
    let reps = repetitions.max(1);
    for (label, compounds) in [("compounds", true), ("simplex", false)] {
        let morph = kb.with_morph_config(MorphConfig {
            compounds,
            ..MorphConfig::default()
        });
        let start = Instant::now();
        let mut tokens = 0usize;
        for _ in 0..reps {
            let scanned = expand_abbreviations(scanner.scan(&text), &kb.abbreviations);
            tokens += tag_tokens(&scanned, &morph).len();
        }
        let secs = start.elapsed().as_secs_f64();
        println!(
            "{label}: {tokens} tokens in {secs:.3} s ({:.0} tokens/s)",
            tokens as f64 / secs.max(1e-9)
        );
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Run {
            kb,
            pipeline,
            emit,
            out,
            workers,
            inputs,
        } => run(kb, pipeline, *emit, out.as_deref(), *workers, inputs),
        Command::TrainTagger {
            kb,
            corpus,
            max_rules,
            out,
        } => train(kb, corpus, *max_rules, out.as_deref()),
        Command::ValidateKb { kb, pipeline } => validate(kb, pipeline.as_deref()),
        Command::Bench { kb, input, repetitions } => bench(kb, input, *repetitions),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) | Err(Failed) => ExitCode::from(1),
    }
}
