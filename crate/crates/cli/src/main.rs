use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ncprob::boxed::{boxed_inverse, boxed_mul, moeb, r_transform};
use ncprob::dualconv::{boxtimes_v_inverse, convolve, group_law, DualGroupSpec};
use ncprob::flowlog::{log_map, GroupHandle};
use ncprob::ncpart::{enumerate_nc, kreweras};
use ncprob::verify::{run_all, VerifyConfig};
use ncprob::{Alphabet, ProductKind, Rational, Series, Word};

#[derive(Parser, Debug)]
#[command(name = "ncprob", version, about = "Exact convolutions, cumulants and identity checks for noncommutative moment series")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Flavor {
    Add,
    Mul,
}

impl Flavor {
    fn spec(self) -> DualGroupSpec {
        match self {
            Flavor::Add => DualGroupSpec::Additive,
            Flavor::Mul => DualGroupSpec::Multiplicative,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum InverseOp {
    #[value(name = "boxtimesV", alias = "boxtimesv")]
    BoxtimesV,
    Boxed,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Non-crossing partitions.
    Nc {
        #[command(subcommand)]
        action: NcAction,
    },
    /// Labelled convolution of two series.
    Conv {
        #[arg(long, value_enum)]
        flavor: Flavor,
        #[arg(long, value_parser = parse_kind)]
        product: ProductKind,
        f: PathBuf,
        g: PathBuf,
    },
    /// Boxed convolution of two series.
    Boxed { f: PathBuf, g: PathBuf },
    /// The Moebius series, the boxed inverse of Zeta.
    Moeb {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        max_deg: usize,
        /// Comma-separated letter weights (default all 1).
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<u32>>,
    },
    /// Free cumulants `f ⊠ Moeb`.
    Rtransform { f: PathBuf },
    /// Group inverse.
    Inverse {
        #[arg(long, value_enum)]
        op: InverseOp,
        f: PathBuf,
    },
    /// Cumulant coordinates `LOG(f)` through the convolution flow.
    Cumulants {
        #[arg(long, value_parser = parse_kind)]
        product: ProductKind,
        #[arg(long, value_enum, default_value_t = Flavor::Add)]
        flavor: Flavor,
        f: PathBuf,
    },
    /// Universal group-law polynomial at one word.
    Grouplaw {
        #[arg(long, value_parser = parse_kind)]
        product: ProductKind,
        #[arg(long, value_enum)]
        flavor: Flavor,
        /// Comma-separated letters, e.g. 1,2,1.
        #[arg(long)]
        word: String,
        /// Alphabet size (default: the largest letter of the word).
        #[arg(long)]
        s: Option<usize>,
    },
    /// Identity checks on seeded random input.
    Verify {
        #[command(subcommand)]
        suite: VerifySuite,
    },
}

#[derive(Subcommand, Debug)]
enum NcAction {
    /// Every partition of NC(n) with its Kreweras complement.
    List {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand, Debug)]
enum VerifySuite {
    /// Every check.
    All {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        max_deg: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_kind(s: &str) -> Result<ProductKind, String> {
    s.parse().map_err(|e: ncprob::Error| e.to_string())
}

fn read_series(path: &PathBuf) -> anyhow::Result<Series<Rational>> {
    let text = if path.as_os_str() == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf).context("reading stdin")?;
        buf
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    Series::from_json_str(&text).with_context(|| format!("in {}", path.display()))
}

fn series_text(s: &Series<Rational>) -> String {
    let mut out = format!(
        "s = {}, weights = {:?}, max_deg = {}, constant = {}\n",
        s.alphabet().size(),
        s.alphabet().weights(),
        s.max_deg(),
        s.coefficient(&Word::empty()).expect("empty word")
    );
    for (w, c) in s.nonzero() {
        out.push_str(&format!("({w})\t{c}\n"));
    }
    out
}

fn emit_series(format: Format, s: &Series<Rational>) {
    match format {
        Format::Json => println!("{}", s.to_json_string()),
        Format::Text => print!("{}", series_text(s)),
    }
}

fn emit_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json"));
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let format = cli.format;
    match cli.command {
        Command::Nc {
            action: NcAction::List { n },
        } => {
            let parts = enumerate_nc(n)?;
            let rows: Vec<(String, String, usize)> = parts
                .iter()
                .map(|p| {
                    let k = kreweras(p);
                    (p.to_string(), k.to_string(), p.num_blocks() + k.num_blocks())
                })
                .collect();
            match format {
                Format::Json => emit_json(&json!({
                    "n": n,
                    "count": rows.len(),
                    "partitions": rows
                        .iter()
                        .map(|(p, k, t)| json!({"partition": p, "kreweras": k, "total_blocks": t}))
                        .collect::<Vec<_>>(),
                })),
                Format::Text => {
                    println!("NC({n}): {} partitions", rows.len());
                    for (p, k, t) in &rows {
                        println!("{p}\t{k}\t{t}");
                    }
                }
            }
        }
        Command::Conv { flavor, product, f, g } => {
            let (f, g) = (read_series(&f)?, read_series(&g)?);
            emit_series(format, &convolve(product, &flavor.spec(), &f, &g)?);
        }
        Command::Boxed { f, g } => {
            let (f, g) = (read_series(&f)?, read_series(&g)?);
            emit_series(format, &boxed_mul(&f, &g)?);
        }
        Command::Moeb { s, max_deg, weights } => {
            let alphabet = match weights {
                Some(w) => {
                    if w.len() != s {
                        bail!(ncprob::Error::Mismatch(format!("s = {s} but {} weights given", w.len())));
                    }
                    Alphabet::with_weights(w)?
                }
                None => Alphabet::new(s)?,
            };
            emit_series(format, &moeb(&alphabet, max_deg));
        }
        Command::Rtransform { f } => emit_series(format, &r_transform(&read_series(&f)?)?),
        Command::Inverse { op, f } => {
            let f = read_series(&f)?;
            let inv = match op {
                InverseOp::BoxtimesV => boxtimes_v_inverse(&f)?,
                InverseOp::Boxed => boxed_inverse(&f)?,
            };
            emit_series(format, &inv);
        }
        Command::Cumulants { product, flavor, f } => {
            let group = GroupHandle::labelled(product, flavor.spec())?;
            let cumulants = log_map(&group, &read_series(&f)?)?;
            emit_series(format, cumulants.as_series());
        }
        Command::Grouplaw {
            product,
            flavor,
            word,
            s,
        } => {
            let w: Word = word.parse()?;
            let s = s.unwrap_or_else(|| w.letters().iter().copied().max().unwrap_or(1) as usize);
            let law = group_law(product, &flavor.spec(), &Alphabet::new(s)?, &w)?;
            match format {
                Format::Json => emit_json(&json!({
                    "product": product.name(),
                    "flavor": flavor.spec().name(),
                    "word": w.to_string(),
                    "law": law.to_string(),
                })),
                Format::Text => println!("{law}"),
            }
        }
        Command::Verify {
            suite: VerifySuite::All { s, max_deg, seed },
        } => {
            let reports = run_all(&VerifyConfig::new(s, max_deg, seed)?);
            match format {
                Format::Json => emit_json(&serde_json::to_value(&reports)?),
                Format::Text => {
                    for r in &reports {
                        if r.detail.is_empty() {
                            println!("{}\t{}", r.status, r.check);
                        } else {
                            println!("{}\t{}\t{}", r.status, r.check, r.detail);
                        }
                    }
                }
            }
            if reports.iter().any(|r| !r.passed()) {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
