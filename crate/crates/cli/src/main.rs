use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use discorel::cq::{contains, entails, eval, Answers, Query, RelStructure};
use discorel::diagram::{apply_l, lambda_translate, Lexicon};
use discorel::pregroup::{enumerate_parses, grammatical, parse, tokenize, Grammar, ParseDiagram, PregroupType};
use discorel::qa::{answer, answer_query, compile, graph_pattern, graph_to_corpus, CompiledDatabase, Corpus, EntityLinking};
use serde_json::json;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Relational semantics for pregroup grammars: parse, translate to
/// conjunctive queries, compile corpora and answer questions.
///
/// Arguments holding a sentence or a query may be given as `@path` to read
/// them from a file.
#[derive(Debug, Parser)]
#[command(name = "discorel", version)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Seed for randomized utilities; every command here is deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a sentence and print its reduction diagram.
    Parse {
        #[arg(long)]
        grammar: PathBuf,
        #[arg(long, default_value = "s")]
        target: String,
        /// Print every parse in canonical order.
        #[arg(long)]
        all: bool,
        /// Maximum number of parses printed with `--all`.
        #[arg(long, default_value_t = 100)]
        limit: usize,
        sentence: String,
    },
    /// Decide whether a sentence reduces to the target type.
    Grammatical {
        #[arg(long)]
        grammar: PathBuf,
        #[arg(long, default_value = "s")]
        target: String,
        sentence: String,
    },
    /// Print the conjunctive query of the first parse of a sentence.
    Translate {
        #[arg(long)]
        grammar: PathBuf,
        #[arg(long)]
        lexicon: PathBuf,
        #[arg(long, default_value = "s")]
        target: String,
        sentence: String,
    },
    /// Evaluate a query on a database.
    Eval {
        #[arg(long)]
        database: PathBuf,
        query: String,
    },
    /// Decide whether the answers of the first query are always answers of
    /// the second.
    Contain { left: String, right: String },
    /// Decide whether the first sentence entails the second.
    Entail {
        #[arg(long)]
        grammar: PathBuf,
        #[arg(long)]
        lexicon: PathBuf,
        #[arg(long, default_value = "s")]
        target: String,
        premise: String,
        conclusion: String,
    },
    /// Compile a corpus and an entity linking into a database.
    BuildDb {
        #[arg(long)]
        grammar: PathBuf,
        #[arg(long)]
        lexicon: PathBuf,
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        linking: PathBuf,
        #[arg(long, default_value = "s")]
        target: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Answer a question, or a query given with `--query`, on a compiled
    /// database.
    Ask {
        #[arg(long)]
        grammar: Option<PathBuf>,
        #[arg(long)]
        lexicon: Option<PathBuf>,
        #[arg(long)]
        database: PathBuf,
        #[arg(long, default_value = "q")]
        target: String,
        #[arg(long, conflicts_with = "question")]
        query: Option<String>,
        #[arg(required_unless_present = "query")]
        question: Option<String>,
    },
    /// Encode a graph as a corpus; with `--pattern`, also write the pattern
    /// graph as a query.
    EncodeGraph {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        pattern: Option<PathBuf>,
        #[arg(long)]
        out_dir: PathBuf,
        /// Treat edges as undirected.
        #[arg(long)]
        symmetric: bool,
    },
}

/// Outcome of a command that ran to completion.
enum Outcome {
    Yes,
    No,
}

impl Outcome {
    fn from_bool(b: bool) -> Self {
        if b {
            Outcome::Yes
        } else {
            Outcome::No
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Yes) => ExitCode::SUCCESS,
        Ok(Outcome::No) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn argument(text: &str) -> Result<String> {
    match text.strip_prefix('@') {
        Some(path) => Ok(read(Path::new(path))?.trim().to_owned()),
        None => Ok(text.to_owned()),
    }
}

fn load_grammar(path: &Path) -> Result<Grammar> {
    Grammar::from_json(&read(path)?).with_context(|| format!("invalid grammar {}", path.display()))
}

fn load_lexicon(path: &Path) -> Result<Lexicon> {
    Lexicon::from_json(&read(path)?).with_context(|| format!("invalid lexicon {}", path.display()))
}

fn load_query(text: &str) -> Result<Query> {
    let text = argument(text)?;
    text.parse().with_context(|| format!("invalid query `{text}`"))
}

fn target_type(g: &Grammar, text: &str) -> Result<PregroupType> {
    let ty: PregroupType = text.parse()?;
    g.check_type(&ty)?;
    Ok(ty)
}

fn first_parse(g: &Grammar, sentence: &str, target: &PregroupType) -> Result<ParseDiagram> {
    let text = argument(sentence)?;
    match parse(g, &tokenize(&text), target)? {
        Some(d) => Ok(d),
        None => bail!("`{text}` is not grammatical at type {target}"),
    }
}

fn print_yes_no(format: Format, b: bool) {
    match format {
        Format::Text => println!("{}", if b { "yes" } else { "no" }),
        Format::Json => println!("{b}"),
    }
}

fn print_answers(format: Format, a: &Answers, bare: bool) {
    match format {
        Format::Json => {
            let v = json!({ "columns": a.columns, "rows": a.rows });
            println!("{}", serde_json::to_string_pretty(&v).expect("answers serialize"));
        }
        Format::Text if bare => {
            for row in &a.rows {
                println!("{}", if row.is_empty() { "true".to_owned() } else { row.join(" ") });
            }
        }
        Format::Text => print!("{a}"),
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    let format = cli.format;
    match &cli.command {
        Command::Parse {
            grammar,
            target,
            all,
            limit,
            sentence,
        } => {
            let g = load_grammar(grammar)?;
            let target = target_type(&g, target)?;
            let words = tokenize(&argument(sentence)?);
            let found = if *all {
                enumerate_parses(&g, &words, &target, *limit)?
            } else {
                parse(&g, &words, &target)?.into_iter().collect()
            };
            match (format, *all) {
                (Format::Json, true) => println!("{}", serde_json::to_string_pretty(&found)?),
                (Format::Json, false) => println!("{}", serde_json::to_string_pretty(&found.first())?),
                (Format::Text, _) if found.is_empty() => println!("not grammatical"),
                (Format::Text, _) => {
                    let shown: Vec<String> = found.iter().map(ToString::to_string).collect();
                    println!("{}", shown.join("\n\n"));
                }
            }
            Ok(Outcome::from_bool(!found.is_empty()))
        }
        Command::Grammatical {
            grammar,
            target,
            sentence,
        } => {
            let g = load_grammar(grammar)?;
            let target = target_type(&g, target)?;
            let yes = grammatical(&g, &tokenize(&argument(sentence)?), &target)?;
            print_yes_no(format, yes);
            Ok(Outcome::from_bool(yes))
        }
        Command::Translate {
            grammar,
            lexicon,
            target,
            sentence,
        } => {
            let g = load_grammar(grammar)?;
            let lex = load_lexicon(lexicon)?;
            let target = target_type(&g, target)?;
            let q = lambda_translate(&apply_l(&lex, &first_parse(&g, sentence, &target)?)?);
            match format {
                Format::Text => println!("{q}"),
                Format::Json => {
                    let v = json!({ "query": q.to_string(), "free": q.free_names() });
                    println!("{}", serde_json::to_string_pretty(&v)?);
                }
            }
            Ok(Outcome::Yes)
        }
        Command::Eval { database, query } => {
            let k = RelStructure::from_json(&read(database)?)
                .with_context(|| format!("invalid database {}", database.display()))?;
            let a = eval(&load_query(query)?, &k)?;
            print_answers(format, &a, false);
            Ok(Outcome::from_bool(!a.is_empty()))
        }
        Command::Contain { left, right } => {
            let yes = contains(&load_query(left)?, &load_query(right)?)?;
            print_yes_no(format, yes);
            Ok(Outcome::from_bool(yes))
        }
        Command::Entail {
            grammar,
            lexicon,
            target,
            premise,
            conclusion,
        } => {
            let g = load_grammar(grammar)?;
            let lex = load_lexicon(lexicon)?;
            let target = target_type(&g, target)?;
            let r = first_parse(&g, premise, &target)?;
            let r_prime = first_parse(&g, conclusion, &target)?;
            let yes = entails(&r, &r_prime, &lex)?;
            print_yes_no(format, yes);
            Ok(Outcome::from_bool(yes))
        }
        Command::BuildDb {
            grammar,
            lexicon,
            corpus,
            linking,
            target,
            out,
        } => {
            let g = load_grammar(grammar)?;
            let lex = load_lexicon(lexicon)?;
            let target = target_type(&g, target)?;
            let c = Corpus::parse_text(&g, &read(corpus)?, &target)?;
            let mu = EntityLinking::from_json(&read(linking)?)
                .with_context(|| format!("invalid linking {}", linking.display()))?;
            let db = compile(&c, &lex, &mu)?;
            fs::write(out, db.to_json() + "\n").with_context(|| format!("cannot write {}", out.display()))?;
            let (entities, tuples) = (db.structure.universe().len(), db.structure.tuple_count());
            match format {
                Format::Text => println!("{} sentences, {entities} entities, {tuples} tuples", c.len()),
                Format::Json => {
                    let v = json!({ "sentences": c.len(), "entities": entities, "tuples": tuples });
                    println!("{}", serde_json::to_string_pretty(&v)?);
                }
            }
            Ok(Outcome::Yes)
        }
        Command::Ask {
            grammar,
            lexicon,
            database,
            target,
            query,
            question,
        } => {
            let db = CompiledDatabase::from_json(&read(database)?)
                .with_context(|| format!("invalid database {}", database.display()))?;
            let a = match (query, question) {
                (Some(q), _) => answer_query(&db, &load_query(q)?)?,
                (None, Some(question)) => {
                    let (Some(grammar), Some(lexicon)) = (grammar, lexicon) else {
                        bail!("asking a question needs --grammar and --lexicon");
                    };
                    let g = load_grammar(grammar)?;
                    let lex = load_lexicon(lexicon)?;
                    let target = target_type(&g, target)?;
                    answer(&db, &first_parse(&g, question, &target)?, &lex)?
                }
                (None, None) => bail!("nothing to ask"),
            };
            print_answers(format, &a, true);
            Ok(Outcome::from_bool(!a.is_empty()))
        }
        Command::EncodeGraph {
            graph,
            pattern,
            out_dir,
            symmetric,
        } => {
            let g = RelStructure::from_json(&read(graph)?)
                .with_context(|| format!("invalid graph {}", graph.display()))?;
            let enc = graph_to_corpus(&g, *symmetric)?;
            let pattern_query = match pattern {
                Some(p) => {
                    let p = RelStructure::from_json(&read(p)?)
                        .with_context(|| format!("invalid graph {}", p.display()))?;
                    Some(graph_pattern(&p, *symmetric)?)
                }
                None => None,
            };
            fs::create_dir_all(out_dir).with_context(|| format!("cannot create {}", out_dir.display()))?;
            let mut files = vec![
                ("grammar.json", enc.grammar.to_json() + "\n"),
                ("lexicon.json", enc.lexicon.to_json() + "\n"),
                ("corpus.txt", enc.corpus.to_text()),
                ("linking.json", enc.linking.to_json() + "\n"),
            ];
            if let Some(q) = pattern_query {
                files.push(("pattern.query", format!("{q}\n")));
            }
            for (name, body) in &files {
                let path = out_dir.join(name);
                fs::write(&path, body).with_context(|| format!("cannot write {}", path.display()))?;
            }
            let names: Vec<&str> = files.iter().map(|(n, _)| *n).collect();
            match format {
                Format::Text => println!("{}", names.join("\n")),
                Format::Json => println!("{}", serde_json::to_string_pretty(&names)?),
            }
            Ok(Outcome::Yes)
        }
    }
}
