//! The `mclex` command line. [`run`] does all the work and returns the exit
//! status with the text destined for stdout and stderr, so the binary is a
//! thin wrapper and tests can call it in-process.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use crate::decision::{check_tableau, implies, LexTableau, MatrixSet, ShortCircuit};
use crate::format::{matrices_to_text, matrix_to_text, parse_matrices};
use crate::linkage::{triviality, TrivialityVerdict, TrivialityWitness};
use crate::matrix::Matrix;
use crate::poset::{
    enumerate, poset_from_json, poset_to_dot, poset_to_json, ClassPoset, Classifier,
    DecisionCache, EnumerationFilter, CACHE_ENV,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Parser)]
#[command(name = "mclex", version, about = "Decide implications between matrix properties of left exact categories")]
pub struct Cli {
    /// Output serialization.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Decision cache file used by poset, count and intersect.
    #[arg(long, global = true, env = CACHE_ENV)]
    pub cache: Option<PathBuf>,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// Keep the preorder and all-lex classes in poset output.
    #[arg(long, global = true)]
    pub include_degenerate: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether the premise matrices imply every goal matrix.
    Decide {
        #[arg(long)]
        premise: PathBuf,
        #[arg(long)]
        goal: PathBuf,
        /// Replace the premise set by the product of its members.
        #[arg(long)]
        conjoin: bool,
    },
    /// Decide and write a lex-tableau certificate.
    Prove {
        #[arg(long)]
        premise: PathBuf,
        #[arg(long)]
        goal: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        conjoin: bool,
    },
    /// Check a lex-tableau file.
    Verify { path: PathBuf },
    /// Print the normal form of each matrix in a file.
    Canon { file: PathBuf },
    /// Report whether each matrix in a file is trivial.
    Triviality { file: PathBuf },
    /// Print the product of all matrices in the given files.
    Product {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Compute the class poset of the box matr(n, m, k).
    Poset {
        n: usize,
        m: usize,
        k: usize,
        /// Also write the poset as JSON to this file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the poset as DOT to this file.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Print class counts of matr(n, m, k) for m = 1..=m_max.
    Count { n: usize, k: usize, m_max: usize },
    /// Intersect posets previously written as JSON.
    Intersect {
        #[arg(required = true)]
        posets: Vec<PathBuf>,
    },
}

/// Exit status and captured output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    fn with_code(code: i32, stdout: String) -> Outcome {
        Outcome {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn error(msg: impl std::fmt::Display) -> Outcome {
        Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

type CmdResult = Result<Outcome, String>;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome::ok(text)
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    execute(&cli).unwrap_or_else(Outcome::error)
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_matrices(path: &Path) -> Result<Vec<Matrix>, String> {
    parse_matrices(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<(), String> {
    fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn render_matrices(format: Format, ms: &[Matrix]) -> String {
    match format {
        Format::Json if ms.len() == 1 => format!("{}\n", serde_json::to_string(&ms[0]).unwrap()),
        Format::Json => format!("{}\n", serde_json::to_string(ms).unwrap()),
        _ => matrices_to_text(ms),
    }
}

fn premise_set(path: &Path, conjoin: bool) -> Result<MatrixSet, String> {
    let ms = read_matrices(path)?;
    Ok(if conjoin {
        MatrixSet::from(Matrix::product(&ms))
    } else {
        ms.into()
    })
}

fn classifier(cli: &Cli) -> Result<Classifier, String> {
    let mut c = Classifier::new().with_jobs(cli.jobs);
    if let Some(path) = &cli.cache {
        let cache = DecisionCache::open(path).map_err(|e| format!("{}: {e}", path.display()))?;
        c = c.with_cache(Arc::new(cache));
    }
    Ok(c)
}

fn save_cache(cli: &Cli, c: &Classifier) -> Result<(), String> {
    if let Some(cache) = c.cache() {
        cache.save().map_err(|e| {
            format!("saving cache {}: {e}", cli.cache.as_deref().unwrap_or(Path::new("?")).display())
        })?;
    }
    Ok(())
}

fn render_poset(format: Format, p: &ClassPoset) -> String {
    match format {
        Format::Json => format!("{}\n", poset_to_json(p)),
        Format::Dot => poset_to_dot(p),
        Format::Text => {
            let mut out = format!("{} classes, {} covering pairs\n", p.len(), p.hasse.len());
            for (i, c) in p.classes.iter().enumerate() {
                let tag = c.degenerate.map(|t| format!(" ({t:?})")).unwrap_or_default();
                out.push_str(&format!("\nclass {i}{tag}\n{}\n", matrix_to_text(&c.canonical)));
            }
            if !p.hasse.is_empty() {
                out.push('\n');
                for (i, j) in &p.hasse {
                    out.push_str(&format!("{i} -> {j}\n"));
                }
            }
            out
        }
    }
}

fn execute(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Decide {
            premise,
            goal,
            conjoin,
        } => {
            let s = premise_set(premise, *conjoin)?;
            let u: MatrixSet = read_matrices(goal)?.into();
            let v = implies(&s, &u);
            let out = match cli.format {
                Format::Json => format!("{}\n", serde_json::to_string(&v).unwrap()),
                _ => format!("{}\n", if v.holds { "holds" } else { "fails" }),
            };
            Ok(Outcome::with_code(if v.holds { 0 } else { 1 }, out))
        }
        Command::Prove {
            premise,
            goal,
            out,
            conjoin,
        } => {
            let s = premise_set(premise, *conjoin)?;
            let u: MatrixSet = read_matrices(goal)?.into();
            let v = implies(&s, &u);
            if !v.holds {
                return Ok(Outcome::with_code(1, "fails\n".into()));
            }
            if let Some(sc) = v.short_circuit {
                let why = match sc {
                    ShortCircuit::EmptyInS => "the premise contains an empty matrix",
                    ShortCircuit::TrivialInS => "the premise contains a trivial matrix",
                };
                return Err(format!("implication holds because {why}; there is no lex-tableau to write"));
            }
            for t in &v.certificates {
                check_tableau(t).map_err(|e| format!("internal error, certificate rejected: {e}"))?;
            }
            let text = if v.certificates.len() == 1 {
                serde_json::to_string_pretty(&v.certificates[0])
            } else {
                serde_json::to_string_pretty(&v.certificates)
            }
            .unwrap();
            write(out, &(text + "\n"))?;
            Ok(Outcome::ok("holds\n".into()))
        }
        Command::Verify { path } => {
            let text = read(path)?;
            let tableaux: Vec<LexTableau> = if text.trim_start().starts_with('[') {
                serde_json::from_str(&text)
            } else {
                serde_json::from_str(&text).map(|t| vec![t])
            }
            .map_err(|e| format!("{}: {e}", path.display()))?;
            for (i, t) in tableaux.iter().enumerate() {
                if let Err(defect) = check_tableau(t) {
                    let which = if tableaux.len() > 1 { format!("tableau {i}: ") } else { String::new() };
                    return Ok(Outcome::with_code(1, format!("invalid: {which}{defect}\n")));
                }
            }
            Ok(Outcome::ok("valid\n".into()))
        }
        Command::Canon { file } => {
            let normal: Vec<Matrix> = read_matrices(file)?
                .iter()
                .map(Matrix::normalize)
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            Ok(Outcome::ok(render_matrices(cli.format, &normal)))
        }
        Command::Triviality { file } => {
            let reports: Vec<_> = read_matrices(file)?.iter().map(triviality).collect();
            let out = match cli.format {
                Format::Json => format!("{}\n", serde_json::to_string(&reports).unwrap()),
                _ => reports
                    .iter()
                    .map(|r| {
                        let line = match (r.verdict, r.witness) {
                            (TrivialityVerdict::NonTrivial, _) => "non-trivial".to_string(),
                            (TrivialityVerdict::Empty, _) => "empty".to_string(),
                            (_, Some(TrivialityWitness::RowWithoutZero { row })) => {
                                format!("trivial: row {} has no 0", row + 1)
                            }
                            (_, Some(TrivialityWitness::DisconnectedZeros { first, second })) => format!(
                                "trivial: the 0s of rows {} and {} are not linked",
                                first + 1,
                                second + 1
                            ),
                            (_, None) => "trivial".to_string(),
                        };
                        line + "\n"
                    })
                    .collect(),
            };
            Ok(Outcome::ok(out))
        }
        Command::Product { files } => {
            let mut factors = Vec::new();
            for f in files {
                factors.extend(read_matrices(f)?);
            }
            let p = Matrix::product(&factors);
            if p.is_empty() && cli.format != Format::Json {
                return Err("the product is an empty matrix, which only --format json can show".into());
            }
            Ok(Outcome::ok(render_matrices(cli.format, &[p])))
        }
        Command::Poset { n, m, k, out, dot } => {
            if *n == 0 || *k == 0 {
                return Err("n and k must be positive".into());
            }
            let c = classifier(cli)?;
            let filter = if cli.include_degenerate {
                EnumerationFilter::with_degenerates(*n, *m, *k)
            } else {
                EnumerationFilter::canonical(*n, *m, *k)
            };
            let p = c.classify(enumerate(&filter)).map_err(|e| e.to_string())?;
            save_cache(cli, &c)?;
            if let Some(path) = out {
                write(path, &(poset_to_json(&p) + "\n"))?;
            }
            if let Some(path) = dot {
                write(path, &poset_to_dot(&p))?;
            }
            // the full listing already went to the file
            if out.is_some() && cli.format == Format::Text {
                return Ok(Outcome::ok(format!("{} classes, {} covering pairs\n", p.len(), p.hasse.len())));
            }
            Ok(Outcome::ok(render_poset(cli.format, &p)))
        }
        Command::Count { n, k, m_max } => {
            if *n == 0 || *k == 0 || *m_max == 0 {
                return Err("n, k and m_max must be positive".into());
            }
            let c = classifier(cli)?;
            let counts = c.count_table(*n, *k, *m_max);
            save_cache(cli, &c)?;
            let out = match cli.format {
                Format::Json => format!("{}\n", serde_json::to_string(&counts).unwrap()),
                _ => {
                    let row: Vec<String> = counts.iter().map(usize::to_string).collect();
                    format!("{}\n", row.join(" "))
                }
            };
            Ok(Outcome::ok(out))
        }
        Command::Intersect { posets } => {
            let mut loaded = Vec::new();
            for path in posets {
                loaded.push(poset_from_json(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?);
            }
            let c = classifier(cli)?;
            let mut acc = loaded.remove(0);
            for p in &loaded {
                acc = c.intersect(&acc, p).map_err(|e| e.to_string())?;
            }
            save_cache(cli, &c)?;
            Ok(Outcome::ok(render_poset(cli.format, &acc)))
        }
    }
}
