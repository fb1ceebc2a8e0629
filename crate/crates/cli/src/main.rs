use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use mdlcomp::builtin::{builtin_grammar, demo_corpus, BUILTIN_GRAMMARS, DEMO_CORPORA};
use mdlcomp::dl::{grammar_dl, total_dl, DEFAULT_PENALTY};
use mdlcomp::generator::{enumerate_language, DEFAULT_LIMIT};
use mdlcomp::grammar::{sentence_to_string, Corpus, Grammar};
use mdlcomp::induction::{induce, InductionConfig, Variant};
use mdlcomp::io::{parse_corpus, parse_grammar, serialize_corpus, serialize_grammar, serialize_trace};
use mdlcomp::semantics::{
    check_compositional, compositionality_score, extract_semantics, idiom_items, lambda_encoding_report,
    maximal_extension, FORM_WIDTH,
};

/// Corpus and grammar arguments take a file path or the name of a built-in
/// corpus or grammar.
#[derive(Parser)]
#[command(name = "mdlcomp", version, about = "MDL grammar induction and compositional semantics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a built-in demonstration corpus.
    Demo {
        #[arg(long)]
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Induce a grammar from a corpus.
    Induce {
        #[arg(long)]
        corpus: String,
        #[arg(long, default_value = "very-greedy")]
        variant: Variant,
        #[arg(long, default_value_t = DEFAULT_PENALTY)]
        penalty: usize,
        #[arg(long, default_value_t = DEFAULT_LIMIT)]
        limit: usize,
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the description length of a grammar, and the penalized total
    /// against a corpus.
    Dl {
        #[arg(long)]
        grammar: String,
        #[arg(long)]
        corpus: Option<String>,
        #[arg(long, default_value_t = DEFAULT_PENALTY)]
        penalty: usize,
        #[arg(long, default_value_t = DEFAULT_LIMIT)]
        limit: usize,
    },
    /// Print the language of a grammar, one sentence per line.
    Generate {
        #[arg(long)]
        grammar: String,
        #[arg(long, default_value_t = DEFAULT_LIMIT)]
        limit: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extract meaning functions and report idioms and compositionality.
    Analyze {
        #[arg(long)]
        grammar: String,
        #[arg(long)]
        corpus: String,
        #[arg(long, default_value_t = FORM_WIDTH)]
        form_width: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failures of the input files themselves, as opposed to what they contain.
#[derive(Debug)]
struct InputError(String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| InputError(format!("cannot read {}: {e}", path.display())).into())
}

fn load_corpus(arg: &str) -> Result<Corpus> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = read(path)?;
        return parse_corpus(&text).with_context(|| format!("in {arg}"));
    }
    if DEMO_CORPORA.contains(&arg) {
        return Ok(demo_corpus(arg)?);
    }
    Err(InputError(format!("{arg}: no such file or demo corpus ({})", DEMO_CORPORA.join(", "))).into())
}

fn load_grammar(arg: &str) -> Result<Grammar> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = read(path)?;
        return parse_grammar(&text).with_context(|| format!("in {arg}"));
    }
    if BUILTIN_GRAMMARS.contains(&arg) {
        return Ok(builtin_grammar(arg)?);
    }
    Err(InputError(format!("{arg}: no such file or built-in grammar ({})", BUILTIN_GRAMMARS.join(", "))).into())
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| InputError(format!("cannot write {}: {e}", p.display())).into()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Demo { name, out } => {
            let corpus = demo_corpus(&name)?;
            emit(out.as_deref(), &serialize_corpus(&corpus))
        }
        Command::Induce { corpus, variant, penalty, limit, trace, out } => {
            let corpus = load_corpus(&corpus)?;
            let config = InductionConfig { penalty, limit, ..InductionConfig::new(variant) };
            let (grammar, record) = induce(&corpus, &config)?;
            if let Some(t) = trace {
                emit(Some(&t), &serialize_trace(&record))?;
            }
            let report = total_dl(&grammar, &corpus, penalty, limit)?;
            emit(out.as_deref(), &serialize_grammar(&grammar))?;
            println!("# variant\t{variant}");
            println!("# steps\t{}", record.records.len());
            println!("# grammar_dl\t{}", report.grammar_dl);
            println!("# overgen_count\t{}", report.overgen_count);
            println!("# total\t{}", report.total);
            Ok(())
        }
        Command::Dl { grammar, corpus, penalty, limit } => {
            let grammar = load_grammar(&grammar)?;
            match corpus {
                None => println!("grammar_dl\t{}", grammar_dl(&grammar)?),
                Some(c) => {
                    let report = total_dl(&grammar, &load_corpus(&c)?, penalty, limit)?;
                    println!("grammar_dl\t{}", report.grammar_dl);
                    println!("overgen_count\t{}", report.overgen_count);
                    println!("penalty\t{}", report.penalty);
                    println!("total\t{}", report.total);
                }
            }
            Ok(())
        }
        Command::Generate { grammar, limit, out } => {
            let grammar = load_grammar(&grammar)?;
            let mut text = String::new();
            for s in enumerate_language(&grammar, limit)? {
                let _ = writeln!(text, "{}", sentence_to_string(&s));
            }
            emit(out.as_deref(), &text)
        }
        Command::Analyze { grammar, corpus, form_width, out } => {
            let grammar = load_grammar(&grammar)?;
            let corpus = load_corpus(&corpus)?;
            emit(out.as_deref(), &analyze(&grammar, &corpus, form_width)?)
        }
    }
}

fn analyze(grammar: &Grammar, corpus: &Corpus, form_width: usize) -> Result<String> {
    let (mu, oplus) = extract_semantics(grammar, form_width)?;
    let check = check_compositional(&mu, &oplus, corpus);
    let (max_mu, max_oplus) = maximal_extension(&mu, &oplus, corpus);
    let max_check = check_compositional(&max_mu, &max_oplus, corpus);
    let idioms = idiom_items(grammar, corpus, form_width)?;
    let lambda = lambda_encoding_report(&mu, &oplus)?;

    let mut t = String::new();
    let _ = writeln!(t, "# mu\n{mu}");
    let _ = writeln!(t, "# oplus\n{}", oplus.render(&mu));
    let _ = writeln!(
        t,
        "# check\nin_domain {} of {}, violations {}\n",
        check.in_domain,
        check.sentences,
        check.violations.len()
    );
    let _ = writeln!(t, "# maximal mu\n{max_mu}");
    let _ = writeln!(t, "# maximal oplus\n{}", max_oplus.render(&max_mu));
    let _ = writeln!(
        t,
        "# maximal check\nin_domain {} of {}, violations {}\n",
        max_check.in_domain,
        max_check.sentences,
        max_check.violations.len()
    );
    let _ = writeln!(t, "# idioms\n{idioms}");
    let _ = writeln!(
        t,
        "# score\nextracted {}\nmaximal {}\n",
        compositionality_score(&mu, &oplus),
        compositionality_score(&max_mu, &max_oplus)
    );
    let _ = write!(t, "# lambda\n{lambda}");
    Ok(t)
}

/// 1 for grammars or corpora that fail validation or coverage, 2 for input
/// that cannot be read or parsed.
fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<InputError>().is_some() {
        return 2;
    }
    match err.downcast_ref::<mdlcomp::Error>() {
        Some(mdlcomp::Error::Parse { .. } | mdlcomp::Error::UnknownName(_)) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mdlcomp: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
