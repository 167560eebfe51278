mod cache;

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use dellac::wire::{
    config_from_json, polynomial_to_json, write_config_line, write_enumeration, EnumerationKind,
};
use dellac::{
    poincare_polynomial, poincare_report, reference_sequence, run_verification,
    DellacConfiguration, Family, Histogram, Method, PoincarePolynomial, VarietyFamily,
    VerifyBounds, MAX_COLUMNS,
};

use cache::{Cache, Tee};

#[derive(Parser)]
#[command(
    name = "dellac",
    version,
    about = "Dellac configurations and Poincaré polynomials of degenerate flag varieties"
)]
struct Cli {
    /// Worker threads.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,
    /// Directory for cached results.
    #[arg(long, global = true, env = "DELLAC_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List every configuration of a family, one per line.
    Enumerate {
        #[arg(long, value_parser = parse_kind)]
        family: EnumerationKind,
        #[arg(long, value_parser = clap::value_parser!(u16).range(1..=MAX_COLUMNS as i64))]
        n: u16,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Histogram of an inversion statistic over a configuration file.
    Stats {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        statistic: Statistic,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Poincaré polynomial of a degenerate flag variety.
    Poincare {
        #[arg(long, value_parser = parse_family)]
        variety: Family,
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_method, default_value = "both")]
        method: Method,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run every cross-check up to the given sizes.
    Verify {
        #[arg(long, default_value_t = 8)]
        max_even: usize,
        #[arg(long, default_value_t = 9)]
        max_odd: usize,
        /// Defaults to the larger of the two other bounds, at most 9.
        #[arg(long)]
        max_type_a: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print a published counting sequence.
    Sequence {
        #[arg(long)]
        name: String,
        /// Also recount the terms by enumeration and compare.
        #[arg(long)]
        check: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Statistic {
    Inv,
    InvTilde,
    InvPrime,
}

fn parse_kind(s: &str) -> Result<EnumerationKind, String> {
    s.parse()
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: dellac::FlagError| e.to_string())
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: dellac::PoincareError| e.to_string())
}

/// A run that completed but whose checks did not all hold.
struct Failed;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t as usize)
            .build_global()
            .expect("thread pool is configured once");
    }
    match run(cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(Failed)) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<Option<Failed>> {
    let cache = cli
        .cache_dir
        .as_deref()
        .map(Cache::open)
        .transpose()
        .context("cannot open cache directory")?;
    match cli.command {
        Command::Enumerate {
            family,
            n,
            out,
            format,
        } => enumerate(cache.as_ref(), family, n as usize, out.as_deref(), format).map(|_| None),
        Command::Stats {
            input,
            statistic,
            format,
        } => stats(&input, statistic, format).map(|_| None),
        Command::Poincare {
            variety,
            n,
            method,
            format,
        } => poincare(cache.as_ref(), variety, n, method, format),
        Command::Verify {
            max_even,
            max_odd,
            max_type_a,
            format,
        } => verify(max_even, max_odd, max_type_a, format),
        Command::Sequence { name, check } => sequence(&name, check),
    }
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot write {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn csv_line(out: &mut Vec<u8>, _n: usize, rows: &[u8]) -> io::Result<()> {
    for (i, c) in rows.iter().enumerate() {
        if i > 0 {
            out.push(b',');
        }
        write!(out, "{c}")?;
    }
    out.push(b'\n');
    Ok(())
}

fn csv_header(n: usize) -> String {
    let names: Vec<String> = (1..=2 * n).map(|i| format!("row_{i}")).collect();
    format!("{}\n", names.join(","))
}

fn enumerate(
    cache: Option<&Cache>,
    kind: EnumerationKind,
    n: usize,
    out: Option<&Path>,
    format: Format,
) -> Result<()> {
    let format_tag = match format {
        Format::Json => "json",
        Format::Csv => "csv",
        Format::Text => bail!("enumerate writes json or csv"),
    };
    let mut sink = open_output(out)?;
    let key = Cache::key("enumerate", &kind.to_string(), n, format_tag);
    if let Some(c) = cache {
        if c.replay(&key, &mut sink)? {
            sink.flush()?;
            eprintln!("replayed {kind} N={n} from cache");
            return Ok(());
        }
    }
    let mut entry = cache.map(|c| c.begin(&key)).transpose()?;
    let mut null = io::sink();
    let count = {
        let mut tee = match entry.as_mut() {
            Some(e) => Tee {
                first: &mut sink,
                second: e as &mut dyn Write,
            },
            None => Tee {
                first: &mut sink,
                second: &mut null as &mut dyn Write,
            },
        };
        if format == Format::Csv {
            tee.write_all(csv_header(n).as_bytes())?;
            write_enumeration(&mut tee, kind, n, csv_line)?
        } else {
            write_enumeration(&mut tee, kind, n, write_config_line)?
        }
    };
    sink.flush()?;
    if let Some(e) = entry {
        e.commit()?;
    }
    eprintln!("{count} {kind} configurations of size {n}");
    Ok(())
}

fn read_input(path: &Path) -> Result<Vec<(usize, DellacConfiguration)>> {
    let mut reader = BufReader::new(
        File::open(path).with_context(|| format!("cannot read {}", path.display()))?,
    );
    let first = reader
        .fill_buf()?
        .iter()
        .copied()
        .find(|b| !b.is_ascii_whitespace());
    if first == Some(b'{') {
        let mut out = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let cfg = config_from_json(&line).map_err(|mut e| {
                e.line = i + 1;
                anyhow!("{}: {e}", path.display())
            })?;
            out.push((i + 1, cfg));
        }
        return Ok(out);
    }
    let mut csv = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut out = Vec::new();
    for record in csv.records() {
        let record = record.with_context(|| format!("{}", path.display()))?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let rows = record
            .iter()
            .enumerate()
            .map(|(i, f)| {
                f.parse::<usize>().map_err(|_| {
                    anyhow!(
                        "{}: line {line}, field {}: {f:?} is not a column",
                        path.display(),
                        i + 1
                    )
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let cfg = DellacConfiguration::new(rows.len() / 2, &rows)
            .map_err(|e| anyhow!("{}: line {line}: {e}", path.display()))?;
        out.push((line, cfg));
    }
    Ok(out)
}

fn stats(input: &Path, statistic: Statistic, format: Format) -> Result<()> {
    let mut h = Histogram::new();
    for (line, cfg) in read_input(input)? {
        let value = match statistic {
            Statistic::Inv => Ok(cfg.inv()),
            Statistic::InvTilde => cfg.inv_tilde(),
            Statistic::InvPrime => cfg.inv_prime(),
        }
        .map_err(|e| anyhow!("{}: line {line}: {e}", input.display()))?;
        h.add(value as u32);
    }
    let mut out = open_output(None)?;
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["value", "count"])?;
            for (v, c) in h.iter() {
                w.write_record([v.to_string(), c.to_string()])?;
            }
            w.flush()?;
        }
        Format::Json => {
            let counts: serde_json::Map<String, serde_json::Value> =
                h.iter().map(|(v, c)| (v.to_string(), c.into())).collect();
            writeln!(
                out,
                "{}",
                serde_json::json!({ "total": h.total(), "histogram": counts })
            )?;
        }
        Format::Text => {
            for (v, c) in h.iter() {
                writeln!(out, "{v}\t{c}")?;
            }
            let p: PoincarePolynomial = h.to_polynomial();
            writeln!(out, "total {}, generating polynomial {p}", h.total())?;
        }
    }
    out.flush()?;
    Ok(())
}

fn render(variety: VarietyFamily, p: &PoincarePolynomial, format: Format) -> String {
    match format {
        Format::Json => polynomial_to_json(variety, p),
        _ => p.to_string(),
    }
}

fn cached_polynomial(
    cache: Option<&Cache>,
    variety: VarietyFamily,
    method: Method,
) -> Result<PoincarePolynomial> {
    let key = Cache::key(
        "poincare",
        variety.family().tag(),
        variety.ambient(),
        &method.to_string(),
    );
    if let Some(path) = cache.and_then(|c| c.lookup(&key)) {
        let text = std::fs::read_to_string(path)?;
        if let Ok(p) = text.trim().parse() {
            return Ok(p);
        }
    }
    let p = poincare_polynomial(variety, method)?;
    if let Some(c) = cache {
        c.store(&key, p.to_string().as_bytes())?;
    }
    Ok(p)
}

fn poincare(
    cache: Option<&Cache>,
    family: Family,
    n: usize,
    method: Method,
    format: Format,
) -> Result<Option<Failed>> {
    if format == Format::Csv {
        bail!("poincare writes text or json");
    }
    let variety = VarietyFamily::new(family, n)?;
    let mut out = open_output(None)?;
    if method != Method::Both {
        let p = cached_polynomial(cache, variety, method)?;
        writeln!(out, "{}", render(variety, &p, format))?;
        out.flush()?;
        return Ok(None);
    }
    let report = match cache {
        Some(_) => dellac::PoincareReport {
            variety,
            statistic: cached_polynomial(cache, variety, Method::Statistic)?,
            cells: cached_polynomial(cache, variety, Method::Cells)?,
        },
        None => poincare_report(variety)?,
    };
    if format == Format::Json {
        if report.agree() {
            writeln!(out, "{}", render(variety, &report.statistic, format))?;
        } else {
            writeln!(out, "{}", render(variety, &report.statistic, format))?;
            writeln!(out, "{}", render(variety, &report.cells, format))?;
        }
    } else {
        writeln!(out, "{}", report.statistic)?;
        writeln!(out, "statistic: {}", report.statistic)?;
        writeln!(out, "cells:     {}", report.cells)?;
        writeln!(out, "agree:     {}", report.agree())?;
    }
    out.flush()?;
    if report.agree() {
        Ok(None)
    } else {
        eprintln!("the two methods disagree for {variety}");
        Ok(Some(Failed))
    }
}

fn verify(
    max_even: usize,
    max_odd: usize,
    max_type_a: Option<usize>,
    format: Format,
) -> Result<Option<Failed>> {
    let bounds = VerifyBounds {
        max_even,
        max_odd,
        max_type_a: max_type_a.unwrap_or(max_even.max(max_odd).min(9)),
    };
    let report = run_verification(bounds)?;
    let mut out = open_output(None)?;
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string(&report)?)?,
        Format::Csv => bail!("verify writes text or json"),
        Format::Text => writeln!(out, "{report}")?,
    }
    out.flush()?;
    Ok((!report.passed()).then_some(Failed))
}

fn sequence(name: &str, check: bool) -> Result<Option<Failed>> {
    let terms = reference_sequence(name)?;
    let listed: Vec<String> = terms.iter().map(u64::to_string).collect();
    println!("{}", listed.join(","));
    if !check {
        return Ok(None);
    }
    let mut ok = true;
    for (i, &want) in terms.iter().enumerate() {
        let (kind, n) = match name {
            "r" => (EnumerationKind::Symmetric, 2 * i),
            "l" => (EnumerationKind::Symmetric, 2 * i + 1),
            _ => (EnumerationKind::Dellac, i + 1),
        };
        // the empty configuration is the only one of size 0
        let got = if n == 0 {
            1
        } else {
            write_enumeration(&mut io::sink(), kind, n, |_, _, _| Ok(()))?
        };
        let status = if got == want { "ok" } else { "MISMATCH" };
        ok &= got == want;
        println!("{kind} N={n}: counted {got}, published {want} {status}");
    }
    Ok((!ok).then_some(Failed))
}
