use std::collections::BTreeMap;
use std::fs;
use std::io::{self, BufRead, BufWriter, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use annotext::bench::{render, run_bench, BenchOptions};
use annotext::build::{build_from_files, write_output, BuildOptions};
use annotext::corpus::{expand_paths, read_corpus_file, write_corpus};
use annotext::evaluation::{predict, score};
use annotext::service::{parse_selection, run_request, serve, AnnotateRequest, SystemClock};
use annotext::store::{self, load_resources, write_profile};
use annotext::synth::{synth_corpus, SynthOptions, World};
use annotext::wire::{debug_dump, Response};
use annotext::{config, load_pipeline};
use annotext_core::doc::Selection;
use annotext_core::edl::{generate_training_examples, train_model, LogisticHyper, TreeHyper};
use annotext_core::text::train_language_profiles;

#[derive(Parser)]
#[command(name = "annotext", version, about = "Entity linking and text annotation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Engine {
    /// Resource manifest.
    #[arg(long)]
    resources: PathBuf,
    /// Trained EDL model (JSON).
    #[arg(long)]
    model: PathBuf,
    /// Pipeline configuration (TOML or JSON).
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Serve the HTTP API.
    Serve {
        #[command(flatten)]
        engine: Engine,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
    },
    /// Annotate one text per input line, printing one JSON object per line.
    Annotate {
        #[command(flatten)]
        engine: Engine,
        /// Input file, or `-` for stdin.
        #[arg(long = "in", default_value = "-")]
        input: String,
        /// Comma-separated kinds: entity, topic, hashtag, sentiment.
        #[arg(long, value_delimiter = ',')]
        select: Option<Vec<String>>,
        #[arg(long)]
        language: Option<String>,
        /// Print the whole internal document (pretty JSON) instead of the response.
        #[arg(long)]
        debug: bool,
    },
    /// Score predicted entity links against a gold corpus.
    Eval {
        #[arg(long)]
        gold: PathBuf,
        /// Predictions in corpus format; computed with --resources/--model when absent.
        #[arg(long)]
        pred: Option<PathBuf>,
        #[arg(long)]
        resources: Option<PathBuf>,
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Write the pipeline's entity links for a corpus, in corpus format.
    Predict {
        #[command(flatten)]
        engine: Engine,
        #[arg(long)]
        gold: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Time each stage over synthetic inputs of several sizes.
    Bench {
        #[command(flatten)]
        engine: Engine,
        #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 20)]
        reps: usize,
        #[arg(long, default_value = "en")]
        language: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Write the report as JSON here as well.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Build mention and co-occurrence dictionaries from annotated corpora.
    Build {
        /// Corpus files (glob patterns allowed).
        #[arg(long, required = true, num_args = 1..)]
        corpus: Vec<String>,
        /// Language code, or `all`.
        #[arg(long, default_value = "all")]
        lang: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 10)]
        min_count: u64,
        #[arg(long, default_value_t = 30)]
        top_k: usize,
        #[arg(long, default_value_t = 50)]
        window: usize,
    },
    /// Train the EDL classifier from a gold corpus.
    TrainEdl {
        #[arg(long)]
        gold: PathBuf,
        #[arg(long)]
        resources: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        lr: Option<f64>,
        #[arg(long)]
        epochs: Option<usize>,
        #[arg(long)]
        l2: Option<f64>,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        min_leaf: Option<usize>,
    },
    /// Train language profiles from `<lang>.txt` sample files (one text per line).
    TrainLang {
        #[arg(long)]
        samples: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a synthetic annotated corpus.
    Synth {
        /// `lang \t surface \t entity \t weight` alias list.
        #[arg(long)]
        aliases: PathBuf,
        /// Directory of `<lang>.txt` files supplying filler words.
        #[arg(long)]
        samples: PathBuf,
        /// Directory with `topics.tsv`, `topic_parents.tsv` and
        /// `entity_topics.tsv`; entity topics define document themes.
        #[arg(long)]
        kb: PathBuf,
        #[arg(long, default_value_t = 1000)]
        docs: usize,
        #[arg(long, value_delimiter = ',', default_value = "en")]
        langs: Vec<String>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "doc")]
        prefix: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the default configuration.
    Config,
}

fn main() -> Result<()> {
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()),
        )
        .with_writer(io::stderr)
        .init();
    match Cli::parse().command {
        Command::Serve { engine, port, host } => {
            let pipeline = Arc::new(engine.load()?);
            let addr: SocketAddr = format!("{host}:{port}").parse().context("bad host or port")?;
            tokio::runtime::Runtime::new()?.block_on(serve(pipeline, addr))?;
        }
        Command::Annotate {
            engine,
            input,
            select,
            language,
            debug,
        } => annotate(&engine, &input, select, language, debug)?,
        Command::Eval {
            gold,
            pred,
            resources,
            model,
            config,
        } => {
            let gold_docs = read_clean(&gold)?;
            let predicted = match (pred, resources, model) {
                (Some(p), _, _) => read_clean(&p)?,
                (None, Some(r), Some(m)) => predict(&load_pipeline(&r, &m, config.as_deref())?, &gold_docs)?,
                _ => bail!("eval needs --pred, or --resources and --model"),
            };
            let result = score(&gold_docs, &predicted)?;
            println!("{}", serde_json::to_string_pretty(&result)?);
        }
        Command::Predict { engine, gold, out } => {
            let predicted = predict(&engine.load()?, &read_clean(&gold)?)?;
            write_corpus(&predicted, BufWriter::new(fs::File::create(&out)?))?;
        }
        Command::Bench {
            engine,
            sizes,
            reps,
            language,
            seed,
            json,
        } => {
            let pipeline = engine.load()?;
            let opts = BenchOptions {
                sizes_kb: sizes,
                reps,
                language,
                seed,
                selection: Selection::all(),
                ..Default::default()
            };
            let report = run_bench(&pipeline, &opts)?;
            print!("{}", render(&report));
            if let Some(p) = json {
                fs::write(p, serde_json::to_string_pretty(&report)? + "\n")?;
            }
        }
        Command::Build {
            corpus,
            lang,
            out,
            min_count,
            top_k,
            window,
        } => {
            let opts = BuildOptions {
                lang: (lang != "all").then_some(lang),
                min_count,
                top_k,
                window,
            };
            let built = build_from_files(&expand_paths(&corpus)?, &opts)?;
            write_output(&built, &out)?;
            eprintln!("{}", serde_json::to_string_pretty(&built.report)?);
        }
        Command::TrainEdl {
            gold,
            resources,
            out,
            config: config_path,
            lr,
            epochs,
            l2,
            depth,
            min_leaf,
        } => {
            let res = load_resources(&resources)?;
            let cfg = match config_path {
                Some(p) => config::load_config(&p)?,
                None => Default::default(),
            };
            let defaults = LogisticHyper::default();
            let logistic = LogisticHyper {
                learning_rate: lr.unwrap_or(defaults.learning_rate),
                epochs: epochs.unwrap_or(defaults.epochs),
                l2: l2.unwrap_or(defaults.l2),
            };
            let t = TreeHyper::default();
            let tree = TreeHyper {
                max_depth: depth.unwrap_or(t.max_depth),
                min_leaf: min_leaf.unwrap_or(t.min_leaf),
            };
            let (examples, report) = generate_training_examples(&read_clean(&gold)?, &res, &cfg.edl);
            eprintln!("{}", serde_json::to_string_pretty(&report)?);
            let model = train_model(&examples, &logistic, &tree)?;
            fs::write(&out, serde_json::to_string_pretty(&model)? + "\n")?;
        }
        Command::TrainLang { samples, out } => train_lang(&samples, &out)?,
        Command::Synth {
            aliases,
            samples,
            kb,
            docs,
            langs,
            seed,
            prefix,
            out,
        } => {
            let onto = store::read_ontology(&kb.join("topics.tsv"), &kb.join("topic_parents.tsv"))?;
            let topics = store::read_entity_topic_file(&kb.join("entity_topics.tsv"), &onto)?;
            let world = World::load(&aliases, &samples, topics)?;
            let opts = SynthOptions {
                docs,
                langs,
                id_prefix: prefix,
                ..Default::default()
            };
            let corpus = synth_corpus(&world, &opts, seed);
            write_corpus(&corpus, BufWriter::new(fs::File::create(&out)?))?;
        }
        Command::Config => print!("{}", config::default_toml()),
    }
    Ok(())
}

impl Engine {
    fn load(&self) -> Result<annotext_core::pipeline::Pipeline> {
        load_pipeline(&self.resources, &self.model, self.config.as_deref())
    }
}

/// Reads a corpus, warning about (and skipping) malformed lines.
fn read_clean(path: &Path) -> Result<Vec<annotext_core::builder::AnnotatedDoc>> {
    let c = read_corpus_file(path).with_context(|| format!("reading {}", path.display()))?;
    for b in &c.bad {
        tracing::warn!("{}:{}: skipped: {}", path.display(), b.line, b.message);
    }
    Ok(c.docs)
}

fn annotate(engine: &Engine, input: &str, select: Option<Vec<String>>, language: Option<String>, debug: bool) -> Result<()> {
    let pipeline = engine.load()?;
    if let Some(names) = &select {
        parse_selection(names).map_err(|e| anyhow::anyhow!(e.message))?;
    }
    let reader: Box<dyn BufRead> = match input {
        "-" => Box::new(io::stdin().lock()),
        path => Box::new(io::BufReader::new(fs::File::open(path).with_context(|| format!("opening {path}"))?)),
    };
    let clock = SystemClock::new();
    let mut out = BufWriter::new(io::stdout().lock());
    for line in reader.lines() {
        let req = AnnotateRequest {
            text: line?,
            language: language.clone(),
            select: select.clone(),
        };
        let rendered = match run_request(&pipeline, &req, &clock) {
            Ok((doc, _)) if debug => debug_dump(&doc),
            Ok((doc, selection)) => serde_json::to_string(&Response::from_document(&doc, selection))?,
            Err(e) => e.body().to_string(),
        };
        writeln!(out, "{rendered}")?;
    }
    out.flush()?;
    Ok(())
}

fn train_lang(samples: &Path, out: &Path) -> Result<()> {
    let mut texts: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for entry in fs::read_dir(samples).with_context(|| format!("reading {}", samples.display()))? {
        let path = entry?.path();
        if path.extension().is_some_and(|e| e == "txt") {
            let lang = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            let body = fs::read_to_string(&path)?;
            texts.insert(lang, body.lines().filter(|l| !l.trim().is_empty()).map(str::to_string).collect());
        }
    }
    let profiles = train_language_profiles(&texts)?;
    fs::create_dir_all(out)?;
    for p in &profiles {
        write_profile(p, &out.join(format!("profile.{}.tsv", p.lang)))?;
    }
    eprintln!("wrote {} profiles to {}", profiles.len(), out.display());
    Ok(())
}
