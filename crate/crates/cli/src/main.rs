use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ealc::encode::{self, EncodeError};
use ealc::eval::{self, EvalError};
use ealc::extract::{self, ExtractError, LstarOptions, SemanticOptions};
use ealc::regcompile::{self, Dfa, MonoidPresentation};
use ealc::semantics::{ForallPolicy, SemConfig, SemError};
use ealc::syntax::{parse_term, parse_type, print_term, Term};
use ealc::truncate;
use ealc::typing::{format_path, typecheck, Context, Mode};

#[derive(Parser)]
#[command(name = "eal", version, about = "Elementary affine lambda-calculus toolkit")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// Typing mode; `mueal` enables recursive types.
    #[arg(long, global = true, default_value = "eal")]
    mode: Mode,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Reduction budget per normalization.
    #[arg(long, global = true, default_value_t = eval::DEFAULT_FUEL)]
    fuel: u64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Typecheck a term and print its type.
    Check {
        file: PathBuf,
        /// Expected type, compared up to renaming of bound variables.
        #[arg(long = "type")]
        ty: Option<String>,
    },
    /// Print the normal form of a term.
    Norm {
        file: PathBuf,
        /// Print the path of each contracted redex.
        #[arg(long)]
        show_steps: bool,
        /// Contract a random redex at each step.
        #[arg(long)]
        random: bool,
    },
    /// Print the encoding of a datum.
    Encode {
        #[arg(long, group = "what")]
        string: Option<String>,
        #[arg(long, group = "what")]
        nat: Option<usize>,
        #[arg(long, group = "what")]
        scott: Option<String>,
        #[arg(long, group = "what")]
        bool: Option<bool>,
        /// Monoid element `i` of `M<size>`, 1-indexed.
        #[arg(long, group = "what", requires = "size")]
        monoid: Option<usize>,
        #[arg(long)]
        size: Option<usize>,
        /// The string conversion term.
        #[arg(long, group = "what")]
        cast: bool,
    },
    /// Lift a closed term of `n` arguments through `k` boxes.
    Promote {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        args: usize,
        #[arg(long, default_value_t = 1)]
        times: usize,
    },
    /// Print the string conversion term, or run it on a word.
    Cast {
        /// Number of letters to read.
        #[arg(long, requires = "word")]
        n: Option<usize>,
        #[arg(long)]
        word: Option<String>,
    },
    /// Compile a regular language to a recognizer of type `Str -o !Bool`.
    Compile {
        #[command(flatten)]
        source: LangSource,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Depth-0 truncation of a term, followed by its truncated type.
    Truncate { file: PathBuf },
    /// Recover an automaton from a deciding term.
    Extract {
        file: PathBuf,
        #[arg(long, default_value = "lstar", value_parser = ["lstar", "semantic"])]
        method: String,
        #[arg(long, default_value_t = 10)]
        max_len: usize,
        #[arg(long, default_value_t = ealc::semantics::DEFAULT_BASE)]
        base: usize,
        #[arg(long, default_value = "error")]
        forall_policy: ForallPolicy,
        #[arg(long, default_value_t = ealc::semantics::DEFAULT_CAP)]
        cap: usize,
        /// Exhaustively compare the result with the term up to this length.
        #[arg(long)]
        verify: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compare an automaton with a deciding term on all short words.
    Verify {
        #[arg(long)]
        dfa: PathBuf,
        file: PathBuf,
        #[arg(long, default_value_t = 10)]
        max_len: usize,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct LangSource {
    #[arg(long)]
    dfa: Option<PathBuf>,
    #[arg(long)]
    regex: Option<String>,
    #[arg(long)]
    monoid: Option<PathBuf>,
}

/// Message and exit code.
struct Failure(String, u8);

const PARSE_OR_TYPE: u8 = 1;
const UNSUPPORTED: u8 = 2;
const RESOURCE: u8 = 3;
const MISMATCH: u8 = 4;

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Self {
        let code = if matches!(e, EvalError::FuelExhausted { .. }) { RESOURCE } else { UNSUPPORTED };
        Failure(e.to_string(), code)
    }
}

impl From<SemError> for Failure {
    fn from(e: SemError) -> Self {
        let code = if matches!(e, SemError::CapExceeded { .. }) { RESOURCE } else { UNSUPPORTED };
        Failure(e.to_string(), code)
    }
}

impl From<EncodeError> for Failure {
    fn from(e: EncodeError) -> Self {
        let code = if matches!(e, EncodeError::Type { .. }) { PARSE_OR_TYPE } else { UNSUPPORTED };
        Failure(e.to_string(), code)
    }
}

impl From<ExtractError> for Failure {
    fn from(e: ExtractError) -> Self {
        match e {
            ExtractError::Type(err) => Failure(err.to_string(), PARSE_OR_TYPE),
            ExtractError::Eval(err) => err.into(),
            ExtractError::Sem(err) => err.into(),
            ExtractError::Verification(_) => Failure(e.to_string(), MISMATCH),
            other => Failure(other.to_string(), UNSUPPORTED),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display()), PARSE_OR_TYPE))
}

fn read_term(path: &Path) -> Result<Term, Failure> {
    parse_term(&read(path)?).map_err(|e| Failure(format!("{}:{e}", path.display()), PARSE_OR_TYPE))
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(p) => fs::write(p, format!("{text}\n")).map_err(|e| Failure(format!("{}: {e}", p.display()), PARSE_OR_TYPE)),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn read_dfa(path: &Path) -> Result<Dfa, Failure> {
    Dfa::from_json(&read(path)?).map_err(|e| Failure(format!("{}: {e}", path.display()), PARSE_OR_TYPE))
}

fn run(cli: Cli) -> Result<(), Failure> {
    let g = cli.global;
    match cli.cmd {
        Cmd::Check { file, ty } => {
            let t = read_term(&file)?;
            let found = typecheck(g.mode, &Context::new(), &t).map_err(|e| Failure(e.to_string(), PARSE_OR_TYPE))?;
            if let Some(src) = ty {
                let want = parse_type(&src).map_err(|e| Failure(format!("--type:{e}"), PARSE_OR_TYPE))?;
                if !found.alpha_eq(&want) {
                    return Err(Failure(format!("root: mismatch: expected `{want}`, found `{found}`"), PARSE_OR_TYPE));
                }
            }
            println!("{found}");
        }
        Cmd::Norm { file, show_steps, random } => {
            let t = read_term(&file)?;
            let nf = if random {
                eval::normalize_random(&t, g.seed, g.fuel)?
            } else if show_steps {
                eval::normalize_stepwise(&t, g.fuel, |path, _| println!("-- step at {}", format_path(path)))?
            } else {
                eval::normalize(&t, g.fuel)?
            };
            println!("{}", print_term(&nf));
        }
        Cmd::Encode { string, nat, scott, bool, monoid, size, cast } => {
            let t = if let Some(w) = string {
                encode::church_string(&w)?
            } else if let Some(n) = nat {
                encode::church_nat(n)
            } else if let Some(w) = scott {
                encode::scott_string(&w)?
            } else if let Some(b) = bool {
                encode::bool_term(b)
            } else if let (Some(i), Some(k)) = (monoid, size) {
                encode::monoid_elem(i, k)?
            } else if cast {
                encode::cast_term()
            } else {
                return Err(Failure("nothing to encode (see --help)".into(), UNSUPPORTED));
            };
            println!("{}", print_term(&t));
        }
        Cmd::Promote { file, args, times } => {
            let t = read_term(&file)?;
            println!("{}", print_term(&encode::promote(&t, args, times)?));
        }
        Cmd::Cast { n, word } => match (n, word) {
            (Some(n), Some(w)) => {
                let app = Term::apps(
                    encode::cast_term(),
                    [encode::church_nat(n), Term::bang(encode::scott_string(&w)?)],
                );
                let nf = eval::normalize(&app, g.fuel)?;
                println!("{}", eval::decode_church_string(&nf, g.fuel)?);
            }
            _ => println!("{}", print_term(&encode::cast_term())),
        },
        Cmd::Compile { source, output } => {
            let t = if let Some(p) = source.dfa {
                regcompile::compile_dfa(&read_dfa(&p)?)
            } else if let Some(re) = source.regex {
                let d = regcompile::regex_to_dfa(&re).map_err(|e| Failure(e.to_string(), PARSE_OR_TYPE))?;
                regcompile::compile_dfa(&d)
            } else {
                let p = source.monoid.expect("one source is required");
                let m = MonoidPresentation::from_json(&read(&p)?)
                    .map_err(|e| Failure(format!("{}: {e}", p.display()), PARSE_OR_TYPE))?;
                regcompile::compile(&m).map_err(|e| Failure(e.to_string(), PARSE_OR_TYPE))?
            };
            emit(&print_term(&t), output.as_deref())?;
        }
        Cmd::Truncate { file } => {
            let t = read_term(&file)?;
            let ty = typecheck(g.mode, &Context::new(), &t).map_err(|e| Failure(e.to_string(), PARSE_OR_TYPE))?;
            let tty = truncate::truncate_type(&ty).map_err(|e| Failure(e.to_string(), UNSUPPORTED))?;
            println!("{}", print_term(&truncate::truncate_term(&t)));
            println!("-- : {tty}");
        }
        Cmd::Extract { file, method, max_len, base, forall_policy, cap, verify, output } => {
            let t = read_term(&file)?;
            let dfa = if method == "semantic" {
                let opts = SemanticOptions {
                    sem: SemConfig { base, policy: forall_policy, cap },
                    fuel: g.fuel,
                    verify: None,
                };
                extract::extract_semantic(&t, &opts)?.dfa
            } else {
                let opts = LstarOptions { max_len, seed: g.seed, fuel: g.fuel, ..LstarOptions::default() };
                extract::extract_lstar(&t, &opts)?
            };
            if let Some(len) = verify {
                let decider = extract::Decider::new(&t, g.fuel)?;
                let report = extract::verify_with(&dfa, &decider, len)?;
                if !report.passed() {
                    return Err(ExtractError::Verification(report).into());
                }
            }
            let json = serde_json::to_string_pretty(&dfa.to_json()).expect("serializable");
            emit(&json, output.as_deref())?;
        }
        Cmd::Verify { dfa, file, max_len } => {
            let d = read_dfa(&dfa)?;
            let t = read_term(&file)?;
            let decider = extract::Decider::new(&t, g.fuel)?;
            let report = extract::verify_with(&d, &decider, max_len)?;
            for m in &report.mismatches {
                eprintln!("mismatch on {:?}: automaton {}, term {}", m.word, m.dfa, m.term);
            }
            if !report.passed() {
                return Err(Failure(format!("{} of {} words disagree", report.mismatches.len(), report.checked), MISMATCH));
            }
            println!("ok: {} words agree", report.checked);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // deep terms recurse deeply in the checker and the normalizer
    let worker = std::thread::Builder::new().stack_size(1 << 28).spawn(move || run(cli));
    match worker.expect("spawn worker").join() {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(Failure(msg, code))) => {
            eprintln!("{msg}");
            ExitCode::from(code)
        }
        Err(_) => ExitCode::from(UNSUPPORTED),
    }
}
