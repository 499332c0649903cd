use clap::{Args, Parser, Subcommand, ValueEnum};
use deg2spa::decoder::{spa_run, DEFAULT_EPSILON, DEFAULT_MAX_ITER};
use deg2spa::graph::io::{parse_bg, parse_odds_file, parse_odds_inline, parse_ug, write_ug};
use deg2spa::graph::{generate, to_bipartite, to_undirected, validate, BipartiteGraph, Generator, UndirectedGraph};
use deg2spa::report::{self, Format};
use deg2spa::sim::{self, SimConfig, SnrConvention};
use deg2spa::spectral::{build_structural, full_spectrum, perron, predict, DEFAULT_TOLERANCE};
use deg2spa::verify::{self, SuiteReport};
use deg2spa::Error;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "deg2spa", version, about = "Sum-product decoding and spectral analysis on degree-2 check graphs")]
struct Cli {
    #[arg(long, value_enum, global = true, default_value_t = OutFormat::Text)]
    format: OutFormat,
    /// Worker threads for parallel sections (results do not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Text,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Write a named fixture as a `.ug` file.
    Gen {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Perron data, imprimitivity and influence vector.
    Analyze { graph: String },
    /// Run the sum-product decoder.
    Decode {
        graph: String,
        #[command(flatten)]
        odds: OddsArgs,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        eps: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
    },
    /// Predicted decoder outcome from the Perron data.
    Predict {
        graph: String,
        #[command(flatten)]
        odds: OddsArgs,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
    },
    /// All eigenvalues of the flow matrix.
    Spectrum { graph: String },
    /// BPSK/AWGN Monte Carlo decoding.
    Simulate {
        #[arg(long)]
        graph: String,
        #[arg(long, value_delimiter = ',', default_values_t = vec![1e-2, 1e-4, 1e-8])]
        eps: Vec<f64>,
        /// `a:step:b` (inclusive) or a single value, in dB.
        #[arg(long, default_value = "0:0.5:8")]
        snr: String,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
        /// Interpret `--snr` as Eb/N0 for the repetition-code rate.
        #[arg(long)]
        ebn0: bool,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Property suites; exit 0 when every check passes, 1 otherwise.
    Verify {
        #[command(subcommand)]
        kind: VerifyKind,
        /// Write the CSV here instead of stdout.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct OddsArgs {
    /// Comma-separated odds `p(1)/p(0)`, one per bit.
    #[arg(short = 'u', long = "odds", allow_hyphen_values = true)]
    inline: Option<String>,
    /// File with one odds value per line.
    #[arg(long)]
    odds_file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum VerifyKind {
    /// Admissible cycle counts against flow-graph enumeration.
    Cycles {
        #[arg(long)]
        graph: String,
        #[arg(long, default_value_t = 10)]
        maxlen: usize,
    },
    /// Effective-input law on an augmented trapping-set core.
    Trapset {
        core: String,
        #[arg(long)]
        genuine: Option<usize>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Messages against the exponent recursion and its closed form.
    Oracle {
        #[arg(long)]
        graph: String,
        #[arg(long, default_value_t = 8)]
        t: usize,
        #[arg(long, default_value_t = 20)]
        exact: usize,
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Structural identity, Perron residuals and block relations.
    Structural {
        #[arg(long)]
        graph: String,
    },
    /// Prediction against the decoder on random inputs.
    Predict {
        #[arg(long)]
        graph: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.05)]
        margin: f64,
        #[arg(long, default_value_t = 500)]
        max_iter: usize,
    },
    /// Known decoder outcomes on named fixtures.
    Decoder,
}

/// Exit 2: invalid input.
struct Invalid(String);

impl From<Error> for Invalid {
    fn from(e: Error) -> Self {
        Invalid(e.to_string())
    }
}

type CmdResult = Result<ExitCode, Invalid>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let format = match cli.format {
        OutFormat::Text => Format::Text,
        OutFormat::Csv => Format::Csv,
    };
    match run(cli.command, format) {
        Ok(code) => code,
        Err(Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String, Invalid> {
    std::fs::read_to_string(path).map_err(|e| Invalid(format!("{}: {e}", path.display())))
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<(), Invalid> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Invalid(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// A path to a `.ug`/`.bg` file, or a generator name.
fn load(arg: &str) -> Result<BipartiteGraph, Invalid> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = read(path)?;
        return Ok(if path.extension().is_some_and(|e| e == "bg") { parse_bg(&text)? } else { to_bipartite(&parse_ug(&text)?) });
    }
    Ok(to_bipartite(&load_generator(arg)?))
}

fn load_generator(name: &str) -> Result<UndirectedGraph, Invalid> {
    let gen: Generator = name.parse()?;
    Ok(generate(&gen)?)
}

fn load_undirected(arg: &str) -> Result<UndirectedGraph, Invalid> {
    Ok(to_undirected(&load(arg)?)?)
}

fn odds(args: &OddsArgs) -> Result<Vec<f64>, Invalid> {
    match (&args.inline, &args.odds_file) {
        (Some(s), _) => Ok(parse_odds_inline(s)?),
        (None, Some(p)) => Ok(parse_odds_file(&read(p)?)?),
        (None, None) => Err(Invalid("odds required".into())),
    }
}

fn hypotheses(b: &BipartiteGraph) -> Result<(), Invalid> {
    let v = validate(b);
    if v.spa_theory_applicable {
        Ok(())
    } else {
        Err(Invalid(v.failures().join("; ")))
    }
}

fn run(command: Command, format: Format) -> CmdResult {
    match command {
        Command::Gen { name, out } => {
            write_or_print(out.as_deref(), &write_ug(&load_generator(&name)?))?;
        }
        Command::Analyze { graph } => {
            let b = load(&graph)?;
            hypotheses(&b)?;
            let m = build_structural(&b)?;
            let s = perron(&m)?;
            print!("{}", report::analysis(&s, m.flow().is_strongly_connected(), format));
        }
        Command::Decode { graph, odds: o, eps, max_iter } => {
            let b = load(&graph)?;
            println!("{}", report::decode_line(&spa_run(&b, &odds(&o)?, eps, max_iter)?));
        }
        Command::Predict { graph, odds: o, tol } => {
            let b = load(&graph)?;
            hypotheses(&b)?;
            let p = predict(&perron(&build_structural(&b)?)?, &odds(&o)?, tol)?;
            match format {
                Format::Text => println!("{}", p.verdict),
                Format::Csv => println!("verdict,margin\n{},{}", p.verdict, deg2spa::fmt_g(p.margin)),
            }
        }
        Command::Spectrum { graph } => {
            let m = build_structural(&load(&graph)?)?;
            print!("{}", report::spectrum_lines(&full_spectrum(&m.k_f64())?, format));
        }
        Command::Simulate { graph, eps, snr, trials, seed, max_iter, ebn0, svg, out } => {
            let b = load(&graph)?;
            let grid = report::parse_grid(&snr).ok_or_else(|| Invalid(format!("bad SNR grid `{snr}`")))?;
            let mut cfg = SimConfig::new(eps, grid, trials, seed);
            cfg.max_iter = max_iter;
            if ebn0 {
                cfg.convention = SnrConvention::EbN0 { rate: sim::repetition_rate(&b) };
            }
            let records = sim::run_trials(&b, &graph, &cfg)?;
            write_or_print(out.as_deref(), &sim::summarize(&records)?)?;
            if let Some(p) = svg {
                write_or_print(Some(&p), &sim::render_svg(&records))?;
            }
        }
        Command::Verify { kind, out } => {
            let r = run_verify(kind)?;
            match format {
                Format::Csv => {
                    write_or_print(out.as_deref(), &r.csv)?;
                    eprint!("{}", r.to_text());
                }
                Format::Text => {
                    if let Some(p) = out.as_deref() {
                        write_or_print(Some(p), &r.csv)?;
                    }
                    print!("{}", r.to_text());
                }
            }
            return Ok(if r.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_verify(kind: VerifyKind) -> Result<SuiteReport, Invalid> {
    Ok(match kind {
        VerifyKind::Cycles { graph, maxlen } => verify::verify_cycles(&load_undirected(&graph)?, maxlen)?,
        VerifyKind::Trapset { core, genuine, trials, seed } => {
            let g = load_undirected(&core)?;
            let n = g.vertex_count();
            verify::verify_trapset(&g, genuine.unwrap_or(n), trials, seed)?
        }
        VerifyKind::Oracle { graph, t, exact, samples, seed } => verify::verify_oracle(&load(&graph)?, t, exact, samples, seed)?,
        VerifyKind::Structural { graph } => verify::verify_structural(&load(&graph)?)?,
        VerifyKind::Predict { graph, trials, seed, margin, max_iter } => {
            let b = load(&graph)?;
            hypotheses(&b)?;
            verify::verify_predict(&b, trials, seed, margin, max_iter)?
        }
        VerifyKind::Decoder => verify::verify_decoder()?,
    })
}
