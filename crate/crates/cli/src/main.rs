//! `cfprime`: expansions, prime scans and family checks from the command line.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use cfprime::continuants;
use cfprime::experiments::{self, LogBase};
use cfprime::families::{self, FamilyId};
use cfprime::primes::{PrimeRange, SieveConfig};
use cfprime::report::{self, Mark};
use cfprime::surd::{self, DEFAULT_PERIOD_BUDGET};
use cfprime::DigitTuple;

#[derive(Parser, Debug)]
#[command(name = "cfprime", version, about = "Continued fractions of square roots of primes")]
struct Cli {
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    workers: Option<u32>,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format for tables.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Largest period expanded before giving up.
    #[arg(long, global = true, default_value_t = DEFAULT_PERIOD_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Args, Debug, Clone, Copy)]
struct PrimeArgs {
    /// Number of primes to scan, starting from 2.
    #[arg(long = "primes", default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    count: u64,

    /// Index of the first prime scanned (p_1 = 2).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    start: u64,
}

impl PrimeArgs {
    fn range(self) -> Result<PrimeRange> {
        Ok(PrimeRange::new(self.start, self.count)?)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full periodic expansion of sqrt(D).
    Expand { radicand: BigUint },
    /// First K period digits of sqrt(D).
    Prefix {
        radicand: BigUint,
        #[arg(default_value_t = 20)]
        k: usize,
    },
    /// Smallest prime and count for each number k of leading ones.
    ScanAk {
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..=64))]
        kmax: u32,
        #[command(flatten)]
        primes: PrimeArgs,
    },
    /// Primes whose period has no digit 1, by period length.
    ScanL0 {
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
        prefix_len: u64,
        #[command(flatten)]
        primes: PrimeArgs,
    },
    /// Primes by number of ones in the period, and coverage of the ratio ones/T.
    ScanL1 {
        /// Width of the covering grid is 1/buckets.
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        buckets: u64,
        #[command(flatten)]
        primes: PrimeArgs,
    },
    /// Period lengths T of sqrt(p_m) against sqrt(m) log m.
    ScanPeriods {
        /// Logarithm base of the bound: 2 or e.
        #[arg(long, default_value = "2")]
        log_base: LogBase,
        /// Emit the period-length histogram instead of the series.
        #[arg(long)]
        histogram: bool,
        #[command(flatten)]
        primes: PrimeArgs,
    },
    /// Predicted share of primes whose period starts with a pattern.
    Density {
        /// Comma-separated leading digits, e.g. 1,1,2.
        #[arg(long, conflicts_with = "ak", required_unless_present = "ak")]
        pattern: Option<String>,
        /// Exactly k leading ones.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        ak: Option<u64>,
    },
    /// Frequency of each digit value at one period position.
    DigitFreq {
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        position: u64,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        max_digit: u64,
        #[command(flatten)]
        primes: PrimeArgs,
    },
    /// Parametric radicand families.
    Family {
        #[command(subcommand)]
        action: FamilyAction,
    },
    /// Checks the two continuant identities over all short digit tuples.
    CassiniSelftest {
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..=8))]
        max_len: u32,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..=20))]
        max_digit: u64,
    },
}

#[derive(Subcommand, Debug)]
enum FamilyAction {
    /// Expand every point of a family and check its pattern. For MAIN_D this
    /// runs the full grid check.
    Verify {
        #[arg(long, value_parser = parse_family)]
        family: FamilyId,
        #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
        grid: u64,
    },
    /// List the prime values of a family with their expansions.
    Search {
        #[arg(long, value_parser = parse_family)]
        family: FamilyId,
        #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
        grid: u64,
    },
    /// Count prime values of a family over a parameter box.
    Census {
        #[arg(long, value_parser = parse_family)]
        family: FamilyId,
        #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
        grid: u64,
    },
}

fn parse_family(s: &str) -> std::result::Result<FamilyId, String> {
    s.parse().map_err(|_| {
        let names: Vec<&str> = FamilyId::ALL.iter().map(|f| f.name()).collect();
        format!("expected one of {}", names.join(", "))
    })
}

fn parse_pattern(s: &str) -> Result<DigitTuple<u64>> {
    let digits = s
        .split(',')
        .map(|d| d.trim().parse::<u64>().with_context(|| format!("bad digit {d:?} in pattern")))
        .collect::<Result<Vec<_>>>()?;
    Ok(DigitTuple::new(digits)?)
}

/// Where results go, with the chosen format.
struct Sink {
    format: Format,
    out: Box<dyn Write>,
}

impl Sink {
    fn table<R: serde::Serialize>(&mut self, header: &str, rows: &[R], plot: impl FnOnce() -> String) -> Result<()> {
        match self.format {
            Format::Csv => report::write_csv_with_header(&mut self.out, header, rows)?,
            Format::Json => report::write_json(&mut self.out, rows)?,
            Format::Svg => self.out.write_all(plot().as_bytes())?,
        }
        Ok(())
    }

    fn json_or_text<T: serde::Serialize>(&mut self, value: &T, text: impl FnOnce() -> String) -> Result<()> {
        match self.format {
            Format::Json => report::write_json(&mut self.out, value)?,
            _ => writeln!(self.out, "{}", text())?,
        }
        Ok(())
    }
}

#[derive(serde::Serialize)]
struct HistRow {
    #[serde(rename = "T")]
    period: u64,
    count: u64,
}

#[derive(serde::Serialize)]
struct SearchRow {
    family: FamilyId,
    params: String,
    #[serde(rename = "D")]
    radicand: u64,
    #[serde(rename = "T")]
    period: usize,
    expansion: String,
}

fn run(cli: Cli) -> Result<()> {
    if let Some(w) = cli.workers {
        rayon::ThreadPoolBuilder::new().num_threads(w as usize).build_global().context("configuring worker pool")?;
    }
    let out: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let mut sink = Sink { format: cli.format, out };
    let sieve = SieveConfig::from_env()?;
    let budget = cli.budget;

    match cli.command {
        Command::Expand { radicand } => {
            let e = surd::expand_full(radicand.clone(), budget)?;
            #[derive(serde::Serialize)]
            struct Out {
                radicand: String,
                a0: String,
                period: Vec<String>,
                #[serde(rename = "T")]
                t: usize,
            }
            let value = Out {
                radicand: radicand.to_string(),
                a0: e.a0().to_string(),
                period: e.period().iter().map(ToString::to_string).collect(),
                t: e.period_len(),
            };
            sink.json_or_text(&value, || format!("sqrt({radicand}) = {e}, T={}", e.period_len()))?;
        }
        Command::Prefix { radicand, k } => {
            let p = surd::expand_prefix(radicand.clone(), k)?;
            let digits: Vec<String> = p.digits.iter().map(ToString::to_string).collect();
            #[derive(serde::Serialize)]
            struct Out<'a> {
                radicand: String,
                a0: String,
                digits: &'a [String],
                complete: bool,
            }
            let value = Out { radicand: radicand.to_string(), a0: p.a0.to_string(), digits: &digits, complete: p.complete };
            sink.json_or_text(&value, || {
                format!("sqrt({radicand}) = [{}; ({}{})], complete={}", p.a0, digits.join(","), if p.complete { "" } else { ",..." }, p.complete)
            })?;
        }
        Command::ScanAk { kmax, primes } => {
            let scan = experiments::scan_ak(kmax, primes.range()?, &sieve, budget)?;
            eprintln!(
                "{} primes: {} do not start with 1, {} have more than {kmax} leading ones",
                scan.primes, scan.not_starting_with_one, scan.beyond_kmax
            );
            sink.table("k,smallest_prime,period,count", &scan.rows, || {
                let pts: Vec<(f64, f64)> = scan.rows.iter().filter(|r| r.count > 0).map(|r| (r.k as f64, (r.count as f64).log10())).collect();
                report::svg_plot("primes with exactly k leading ones", "k", "log10 count", &pts, Mark::Line)
            })?;
        }
        Command::ScanL0 { prefix_len, primes } => {
            let rows = experiments::scan_l0(primes.range()?, &sieve, prefix_len as usize, budget)?;
            sink.table("i,count,smallest", &rows, || {
                let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.i as f64, r.count as f64)).collect();
                report::svg_plot("primes without digit 1 in the period", "period length", "count", &pts, Mark::Dots)
            })?;
        }
        Command::ScanL1 { buckets, primes } => {
            let keep = cli.format == Format::Svg;
            let scan = experiments::scan_l1(primes.range()?, &sieve, budget, buckets as usize, keep)?;
            eprintln!("ratio ones/T covers {:.4} of {buckets} buckets of [0,1]", scan.covered_fraction());
            sink.table("i,count,smallest", &scan.rows, || {
                let pts: Vec<(f64, f64)> = scan.samples.iter().map(|s| (s.m as f64, s.ones as f64 / s.period as f64)).collect();
                report::svg_plot("ones per period over period length", "m", "ones / T", &pts, Mark::Dots)
            })?;
        }
        Command::ScanPeriods { log_base, histogram, primes } => {
            let keep = !histogram;
            let scan = experiments::scan_periods(primes.range()?, &sieve, budget, log_base, keep)?;
            eprintln!("m with T >= sqrt(m) log m: {:?}", scan.exceedances);
            if histogram {
                let rows: Vec<HistRow> = scan.histogram.iter().map(|(&period, &count)| HistRow { period, count }).collect();
                sink.table("T,count", &rows, || {
                    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.period as f64, r.count as f64)).collect();
                    report::svg_plot("primes by period length", "T", "count", &pts, Mark::Dots)
                })?;
            } else {
                sink.table("m,p,T,ratio", &scan.series, || {
                    let pts: Vec<(f64, f64)> = scan.series.iter().map(|s| (s.m as f64, s.period as f64)).collect();
                    report::svg_plot("period length of sqrt(p_m)", "m", "T", &pts, Mark::Dots)
                })?;
            }
        }
        Command::Density { pattern, ak } => {
            let (label, value) = match (pattern, ak) {
                (Some(p), _) => {
                    let t = parse_pattern(&p)?;
                    (format!("pattern ({p})"), experiments::density_predict(&t))
                }
                (None, Some(k)) => (format!("exactly {k} leading ones"), experiments::density_ak(k)),
                (None, None) => bail!("give --pattern or --ak"),
            };
            #[derive(serde::Serialize)]
            struct Out {
                what: String,
                numerator: String,
                denominator: String,
                approx: f64,
            }
            let text = report::format_rational(&value);
            let out = Out {
                what: label,
                numerator: value.numer().to_string(),
                denominator: value.denom().to_string(),
                approx: text.rsplit(' ').next().and_then(|d| d.parse().ok()).unwrap_or(f64::NAN),
            };
            sink.json_or_text(&out, || text)?;
        }
        Command::DigitFreq { position, max_digit, primes } => {
            let rows = experiments::digit_frequency(position, primes.range()?, &sieve, max_digit)?;
            sink.table("position,digit,empirical,gauss_kuzmin", &rows, || {
                let pts: Vec<(f64, f64)> = rows.iter().enumerate().map(|(i, r)| ((i + 1) as f64, r.empirical)).collect();
                report::svg_plot(&format!("digit frequency at position {position}"), "digit", "share", &pts, Mark::Line)
            })?;
        }
        Command::Family { action } => family(action, budget, &mut sink)?,
        Command::CassiniSelftest { max_len, max_digit } => {
            let mut checked = 0u64;
            let mut failures = Vec::new();
            for n in 1..=max_len {
                for code in 0..max_digit.pow(n) {
                    let xs: Vec<u64> = (0..n).map(|i| code / max_digit.pow(i) % max_digit + 1).collect();
                    let t = DigitTuple::new(xs.clone())?;
                    checked += 1;
                    let (even, odd) = (continuants::cassini_even(&t), continuants::cassini_odd(&t));
                    if even != 1.into() || odd != (-1).into() {
                        failures.push(format!("{xs:?}: {even}, {odd}"));
                    }
                }
            }
            writeln!(sink.out, "{checked} tuples checked, {} failures", failures.len())?;
            for f in &failures {
                writeln!(sink.out, "{f}")?;
            }
            if !failures.is_empty() {
                bail!("continuant identities failed");
            }
        }
    }
    sink.out.flush()?;
    Ok(())
}

fn family(action: FamilyAction, budget: u64, sink: &mut Sink) -> Result<()> {
    match action {
        FamilyAction::Verify { family: FamilyId::MainD, grid } => {
            let r = families::verify_main_grid(grid, budget)?;
            sink.json_or_text(&r, || {
                let mut s = format!(
                    "{} points, {} violations, T=7 at {:?}, {} with four leading ones, {} period-8 points, {} outside the (x,u) parametrisation",
                    r.points,
                    r.violations.len(),
                    r.period7,
                    r.four_ones,
                    r.period8.len(),
                    r.period8_unparametrised.len()
                );
                for v in &r.violations {
                    s.push_str(&format!("\n{v}"));
                }
                s
            })?;
            if !r.is_clean() {
                bail!("{} violations", r.violations.len());
            }
        }
        FamilyAction::Verify { family, grid } => {
            let points = families::family_points(family, grid);
            let failures: Vec<String> = points
                .iter()
                .filter_map(|p| p.verify(budget).err().map(|e| format!("{}: {e}", p.params_string())))
                .collect();
            writeln!(sink.out, "{family}: {} points, {} failures", points.len(), failures.len())?;
            for f in &failures {
                writeln!(sink.out, "{f}")?;
            }
            if !failures.is_empty() {
                bail!("{} points break the {family} pattern", failures.len());
            }
        }
        FamilyAction::Search { family, grid } => {
            let mut rows = Vec::new();
            for p in families::family_points(family, grid) {
                let Some(v) = p.radicand_u64() else { continue };
                if !cfprime::primes::is_prime(v) {
                    continue;
                }
                let e = surd::expand_full(v, budget)?;
                rows.push(SearchRow { family, params: p.params_string(), radicand: v, period: e.period_len(), expansion: e.to_string() });
            }
            rows.sort_by_key(|r| r.radicand);
            rows.dedup_by_key(|r| r.radicand);
            sink.table("family,params,D,T,expansion", &rows, || {
                let pts: Vec<(f64, f64)> = rows.iter().map(|r| ((r.radicand as f64).log10(), r.period as f64)).collect();
                report::svg_plot(&format!("prime values of {family}"), "log10 D", "T", &pts, Mark::Dots)
            })?;
        }
        FamilyAction::Census { family, grid } => {
            let c = experiments::family_prime_census(family, grid, budget)?;
            sink.json_or_text(&c, || {
                let mut s = format!(
                    "{family} over 1..={grid}: {} points, {} prime points, {} distinct primes, smallest {}, {} pattern mismatches, {} with four leading ones",
                    c.points,
                    c.prime_points,
                    c.distinct_primes,
                    c.smallest_prime.map_or_else(|| "none".to_string(), |p| p.to_string()),
                    c.mismatches.len(),
                    c.four_ones.len()
                );
                if let (Some(n), Some(r)) = (&c.largest_value, c.reference) {
                    s.push_str(&format!("\nN = {n}, N / ln^1.5 N = {}", report::decimal12(r)));
                }
                if c.untested > 0 {
                    s.push_str(&format!("\n{} values above 64 bits not tested", c.untested));
                }
                s
            })?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
