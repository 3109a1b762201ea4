//! `midylab` command-line front end.
//!
//! Every subcommand prints its result on stdout, diagnostics on stderr, and
//! maps failures onto exit codes: 1 for domain or precondition errors, 2 for
//! usage errors, 3 when a bounded search runs out of candidates.

pub mod cache;
mod output;
mod scan;

use std::io::Write;
use std::path::PathBuf;

use clap::builder::PossibleValuesParser;
use clap::{Parser, Subcommand, ValueEnum};

use midylab::jenkins::{builtin_routes, JenkinsInstance};
use midylab::midy::{builtin_deciders, midy_set_factored, MidyQuery};
use midylab::order::{order_mod_naive, order_record_factored};
use midylab::progression::{prime_progression_within, DEFAULT_SEARCH_BOUND};
use midylab::{blocks_and_sum, period_digits, MidyError, Natural};

use cache::FactorCache;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SEARCH: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "midylab", version, about = "Midy's property, multiplicative orders and primes ≡ 1 mod q^v")]
pub struct Cli {
    /// Output format (`csv` is only available for `scan`).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Append-only factorization cache file.
    #[arg(long, global = true, env = "MIDYLAB_CACHE")]
    pub cache: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

fn base_arg() -> clap::builder::RangedU64ValueParser<u64> {
    clap::value_parser!(u64).range(2..=62)
}

fn decider_names() -> PossibleValuesParser {
    let mut names: Vec<&'static str> = builtin_deciders().names().to_vec();
    names.push("all");
    PossibleValuesParser::new(names)
}

fn route_names() -> PossibleValuesParser {
    let mut names: Vec<&'static str> = builtin_routes().names().to_vec();
    names.push("both");
    PossibleValuesParser::new(names)
}

fn parse_prime_power(s: &str) -> Result<(Natural, u32), String> {
    let (p, h) = s
        .split_once(':')
        .ok_or_else(|| format!("expected P:H, got `{s}`"))?;
    let p = p.parse().map_err(|e| format!("bad prime `{p}`: {e}"))?;
    let h = h.parse().map_err(|e| format!("bad exponent `{h}`: {e}"))?;
    Ok((p, h))
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Multiplicative order |b|_N.
    Order {
        #[arg(long, value_parser = base_arg())]
        base: u64,
        n: Natural,
        /// Cross-check against successive multiplication.
        #[arg(long)]
        naive_check: bool,
    },
    /// Period of X/N in base B, optionally split into blocks.
    Expand {
        #[arg(long, value_parser = base_arg())]
        base: u64,
        x: Natural,
        n: Natural,
        #[arg(long)]
        blocks: Option<usize>,
    },
    /// Decide whether D is in the Midy set of N.
    MidyCheck {
        #[arg(long, value_parser = base_arg())]
        base: u64,
        n: Natural,
        d: Natural,
        #[arg(long, default_value = "ppl2", value_parser = decider_names())]
        method: String,
    },
    /// Enumerate the Midy set of N.
    MidySet {
        #[arg(long, value_parser = base_arg())]
        base: u64,
        n: Natural,
    },
    /// Midy's property for a product of prime powers.
    Jenkins {
        #[arg(long, value_parser = base_arg())]
        base: u64,
        #[arg(long)]
        d: Natural,
        #[arg(long = "prime", value_name = "P:H", required = true, value_parser = parse_prime_power)]
        primes: Vec<(Natural, u32)>,
        #[arg(long, default_value = "both", value_parser = route_names())]
        route: String,
    },
    /// Primes congruent to 1 modulo q^v built from smallest Midy witnesses.
    Primes {
        #[arg(long, value_parser = base_arg())]
        base: u64,
        #[arg(long)]
        q: Natural,
        #[arg(long)]
        v: u32,
        #[arg(long)]
        count: usize,
        /// Candidates examined per search step.
        #[arg(long, default_value_t = DEFAULT_SEARCH_BOUND)]
        bound: Natural,
    },
    /// Midy sets for every N in a range coprime to the base.
    Scan {
        #[arg(long, value_parser = base_arg())]
        base: u64,
        #[arg(long)]
        from: Natural,
        #[arg(long)]
        to: Natural,
        /// Worker threads; output does not depend on it.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..=1024))]
        jobs: u64,
    },
}

#[derive(Debug)]
pub(crate) enum Failure {
    Midy(MidyError),
    Usage(String),
    /// Independent routes disagreed.
    Inconsistent(String),
    Io(std::io::Error),
}

impl From<MidyError> for Failure {
    fn from(e: MidyError) -> Self {
        Failure::Midy(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Midy(MidyError::SearchExhausted { .. }) => EXIT_SEARCH,
            Failure::Midy(MidyError::UnknownStrategy { .. }) | Failure::Usage(_) => EXIT_USAGE,
            _ => EXIT_DOMAIN,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Midy(e) => e.to_string(),
            Failure::Usage(s) => format!("usage error: {s}"),
            Failure::Inconsistent(s) => format!("inconsistent results: {s}"),
            Failure::Io(e) => format!("i/o error: {e}"),
        }
    }
}

pub(crate) type CliResult = Result<(), Failure>;

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli, out, err) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "midylab: {}", f.message());
            f.exit_code()
        }
    }
}

fn open_cache(cli: &Cli) -> Result<FactorCache, Failure> {
    match &cli.cache {
        Some(path) => Ok(FactorCache::open(path)?),
        None => Ok(FactorCache::in_memory()),
    }
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let format = cli.format;
    let is_scan = matches!(cli.command, Command::Scan { .. });
    if format == Some(Format::Csv) && !is_scan {
        return Err(Failure::Usage("--format csv is only supported by scan".into()));
    }
    let json = format == Some(Format::Json);
    let cache = open_cache(cli)?;
    match cli.command {
        Command::Order { base, n, naive_check } => {
            let b = base as Natural;
            if n == 0 {
                return Err(MidyError::Domain("order modulo 0".into()).into());
            }
            let factors = cache.factor(n)?;
            warn_unproven(&factors, err);
            let record = order_record_factored(b, &factors)?;
            let naive = if naive_check {
                let naive = order_mod_naive(b, n)?;
                if naive != record.order {
                    return Err(Failure::Inconsistent(format!(
                        "lifted order {} but naive order {naive}",
                        record.order
                    )));
                }
                Some(naive)
            } else {
                None
            };
            output::order(out, json, &record, naive)?;
        }
        Command::Expand { base, x, n, blocks } => {
            let e = period_digits(x, n, base as Natural)?;
            let split = blocks.map(|d| blocks_and_sum(&e, d)).transpose()?;
            output::expansion(out, json, &e, split.as_ref())?;
        }
        Command::MidyCheck { base, n, d, ref method } => {
            let b = base as Natural;
            if n == 0 {
                return Err(MidyError::Domain("modulus 0".into()).into());
            }
            let registry = builtin_deciders();
            let deciders = if method == "all" {
                registry.iter().collect::<Vec<_>>()
            } else {
                vec![registry.get(method)?]
            };
            let factors = cache.factor(n)?;
            warn_unproven(&factors, err);
            let query = MidyQuery::factored(b, factors, d)?;
            let mut verdicts = Vec::new();
            for decider in deciders {
                verdicts.push(decider.decide_query(&query)?);
            }
            output::verdicts(out, json, &query, &verdicts)?;
            if verdicts.windows(2).any(|w| w[0].holds != w[1].holds) {
                return Err(Failure::Inconsistent(format!("deciders disagree on d = {d}")));
            }
        }
        Command::MidySet { base, n } => {
            let b = base as Natural;
            if n == 0 {
                return Err(MidyError::Domain("modulus 0".into()).into());
            }
            let factors = cache.factor(n)?;
            warn_unproven(&factors, err);
            let set = midy_set_factored(b, &factors)?;
            output::midy_set(out, json, &set)?;
        }
        Command::Jenkins { base, d, ref primes, ref route } => {
            let inst = JenkinsInstance::new(base as Natural, d, primes)?;
            let registry = builtin_routes();
            let routes = if route == "both" {
                registry.iter().collect::<Vec<_>>()
            } else {
                vec![registry.get(route)?]
            };
            let mut results = Vec::new();
            for r in routes {
                results.push((r.name(), r.check(&inst)?));
            }
            output::jenkins(out, json, &inst, &results)?;
            if results.windows(2).any(|w| w[0].1 != w[1].1) {
                return Err(Failure::Inconsistent("jenkins routes disagree".into()));
            }
        }
        Command::Primes { base, q, v, count, bound } => {
            let trace = prime_progression_within(base as Natural, q, v, count, bound)?;
            output::progression(out, json, &trace)?;
        }
        Command::Scan { base, from, to, jobs } => {
            let format = format.unwrap_or(Format::Csv);
            if format == Format::Human {
                return Err(Failure::Usage("scan supports --format csv or json".into()));
            }
            scan::run_scan(out, &cache, base as Natural, from, to, jobs as usize, format)?;
        }
    }
    Ok(())
}

fn warn_unproven(f: &midylab::Factorization, err: &mut dyn Write) {
    if !f.is_proven() {
        let _ = writeln!(
            err,
            "midylab: warning: factorization {f} contains a probable prime (not proven)"
        );
    }
}
