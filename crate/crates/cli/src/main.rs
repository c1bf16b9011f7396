//! Batch command-line surface: compute densities, regenerate the density
//! table, run bound reports, and execute the verification suites.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;

use repdens::bounds::report_for;
use repdens::engine::{density_of_variant, CacheRecord, EngineOptions, ExactDensity};
use repdens::numeric::Rational;
use repdens::roots::{AlgebraId, Family, VariantSpec};
use repdens::verify;

#[derive(Parser)]
#[command(
    name = "repdens",
    about = "Exact densities of irreducible representation degrees not divisible by m",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Worker threads for the enumeration (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Hard cap on lattice points enumerated per fundamental domain.
    #[arg(long, global = true, default_value_t = 100_000_000)]
    budget_points: u64,

    /// Cache directory for computed densities
    /// (default: $REPDENS_CACHE_DIR if set; caching off otherwise).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Compute exact densities for one variant and one or more moduli.
    Density(DensityArgs),
    /// Regenerate the density table for gl_n.
    Table(TableArgs),
    /// Run a named verification suite (or `all`).
    Verify(VerifyArgs),
    /// Compare an exact density against its closed-form bounds.
    Bounds(BoundsArgs),
}

#[derive(Args)]
struct DensityArgs {
    /// Variant spec: gl:3, sl:5, so:7, sp:6, so_even:8, group:pgl:4,
    /// group:so:7, group:sc:sp:4, sd:sl:6, orth:sl:6.
    #[arg(long)]
    algebra: String,

    /// Modulus, or comma-separated moduli.
    #[arg(long, short)]
    m: String,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct TableArgs {
    /// Largest gl rank to include.
    #[arg(long, default_value_t = 8)]
    nmax: usize,

    /// Comma-separated moduli rows (empty string for a header-only table).
    #[arg(long, short, default_value = "2,3")]
    m: String,

    #[arg(long, value_enum, default_value_t = Format::Markdown)]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite: fray, periods, valuations, norms, product-rule, cone,
    /// counterexample, isomorphisms, union-bound, or all.
    suite: String,

    /// Ball radius for the counterexample suite.
    #[arg(long, default_value_t = 1000)]
    r: i64,
}

#[derive(Args)]
struct BoundsArgs {
    /// Variant spec (same syntax as `density`).
    #[arg(long)]
    algebra: String,

    #[arg(long, short)]
    m: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Markdown,
    Csv,
    Json,
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<()> {
    let options = EngineOptions {
        workers: cli.workers,
        budget_points: cli.budget_points,
        cache_dir: cli
            .cache_dir
            .clone()
            .or_else(|| std::env::var_os("REPDENS_CACHE_DIR").map(PathBuf::from)),
    };
    match cli.command {
        Command::Density(args) => cmd_density(&args, &options),
        Command::Table(args) => cmd_table(&args, &options),
        Command::Verify(args) => cmd_verify(&args, &options),
        Command::Bounds(args) => cmd_bounds(&args, &options),
    }
}

/// Parse a variant spec like `gl:3`, `group:pgl:4` or `sd:sl:6`.
fn parse_variant(spec: &str) -> Result<VariantSpec> {
    Ok(VariantSpec::parse(spec)?)
}

fn parse_moduli(s: &str) -> Result<Vec<u64>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .with_context(|| format!("bad modulus '{t}'"))
        })
        .collect()
}

fn rational_from(n: impl Into<num_bigint::BigInt>, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Six significant digits; a rendering only, the fraction is authoritative.
fn decimal6(r: &Rational) -> String {
    let f = r.to_f64().unwrap_or(f64::NAN);
    if f == 0.0 {
        return "0".into();
    }
    let exp = f.abs().log10().floor() as i32;
    if (-4..6).contains(&exp) {
        let prec = (5 - exp).max(0) as usize;
        format!("{f:.prec$}")
    } else {
        format!("{f:.5e}")
    }
}

fn family_and_rank(variant: &VariantSpec) -> (String, usize) {
    let fam = match variant.algebra.family {
        Family::Gl => "gl",
        Family::Sl => "sl",
        Family::SoOdd | Family::SoEven => "so",
        Family::Sp => "sp",
    };
    (fam.to_string(), variant.algebra.matrix_size())
}

fn print_record(d: &ExactDensity, format: Format) -> Result<()> {
    match format {
        Format::Json => {
            println!("{}", serde_json::to_string(&CacheRecord::from_density(d))?);
        }
        Format::Csv => {
            println!(
                "{},{},{},{}",
                d.variant,
                d.m,
                d.value.numer(),
                d.value.denom()
            );
        }
        _ => {
            println!(
                "{} m={}: {} (~{})",
                d.variant,
                d.m,
                d.value,
                decimal6(&d.value)
            );
            for pp in &d.per_prime_power {
                println!(
                    "  q={}: period {}, {} of {} points non-divisible ({})",
                    pp.modulus,
                    pp.period,
                    pp.nondivisible,
                    pp.points,
                    decimal6(&pp.density)
                );
            }
            if !d.per_prime_power.is_empty() {
                println!("  wall time: {} ms", d.wall_ms);
            }
        }
    }
    Ok(())
}

fn cmd_density(args: &DensityArgs, options: &EngineOptions) -> Result<()> {
    let variant = parse_variant(&args.algebra)?;
    let moduli = parse_moduli(&args.m)?;
    if moduli.is_empty() {
        bail!("no moduli given");
    }
    let mut json_records = Vec::new();
    for m in moduli {
        let d = density_of_variant(&variant, m, options)?;
        if args.format == Format::Json {
            json_records.push(CacheRecord::from_density(&d));
        } else {
            print_record(&d, args.format)?;
        }
    }
    if args.format == Format::Json {
        println!("{}", serde_json::to_string_pretty(&json_records)?);
    }
    Ok(())
}

fn cmd_table(args: &TableArgs, options: &EngineOptions) -> Result<()> {
    let moduli = parse_moduli(&args.m)?;
    let mut rows: Vec<(u64, Vec<ExactDensity>)> = Vec::new();
    for &m in &moduli {
        let mut row = Vec::new();
        for n in 1..=args.nmax {
            let id = AlgebraId::new(Family::Gl, n)?;
            let variant = VariantSpec::algebra(id)?;
            row.push(density_of_variant(&variant, m, options)?);
        }
        rows.push((m, row));
    }
    match args.format {
        Format::Markdown | Format::Text => {
            let mut header = String::from("| m \\ n |");
            let mut rule = String::from("|---|");
            for n in 1..=args.nmax {
                header.push_str(&format!(" {n} |"));
                rule.push_str("---|");
            }
            println!("{header}");
            println!("{rule}");
            for (m, row) in &rows {
                let mut line = format!("| {m} |");
                for d in row {
                    line.push_str(&format!(" {} |", d.value));
                }
                println!("{line}");
            }
        }
        Format::Csv => {
            println!("family,rank,m,numerator,denominator,decimal");
            for (m, row) in &rows {
                for (i, d) in row.iter().enumerate() {
                    println!(
                        "gl,{},{},{},{},{}",
                        i + 1,
                        m,
                        d.value.numer(),
                        d.value.denom(),
                        decimal6(&d.value)
                    );
                }
            }
        }
        Format::Json => {
            let records: Vec<CacheRecord> = rows
                .iter()
                .flat_map(|(_, row)| row.iter().map(CacheRecord::from_density))
                .collect();
            println!("{}", serde_json::to_string_pretty(&records)?);
        }
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs, options: &EngineOptions) -> Result<()> {
    let reports = match args.suite.as_str() {
        "all" => verify::verify_all(options),
        "counterexample" => vec![verify::verify_counterexample(args.r, options.budget_points)],
        name => vec![verify::suite_by_name(name, options)?],
    };
    let mut failed = false;
    for report in &reports {
        let status = if report.passed() { "PASS" } else { "FAIL" };
        println!("suite {}: {status}", report.name);
        for line in &report.checks {
            println!("  ok: {line}");
        }
        for line in &report.failures {
            println!("  FAILED: {line}");
            failed = true;
        }
    }
    if failed {
        bail!("verification failed");
    }
    Ok(())
}

fn cmd_bounds(args: &BoundsArgs, options: &EngineOptions) -> Result<()> {
    let variant = parse_variant(&args.algebra)?;
    let d = density_of_variant(&variant, args.m, options)?;
    let report = report_for(&variant, args.m, &d.value)?;
    let (fam, rank) = family_and_rank(&variant);
    println!(
        "{} (family {fam}, size {rank}), m = {}:",
        report.variant, report.m
    );
    println!("  exact density: {} (~{})", d.value, decimal6(&d.value));
    match &report.lower {
        Some(lo) => println!("  lower bound:   {} (~{})", lo, decimal6(lo)),
        None => println!("  lower bound:   (none applicable)"),
    }
    match &report.upper {
        Some(up) => {
            // certified rational upper bound, ceiled to 6 decimals so it
            // stays a true upper bound but prints short
            let cert = up.upper_rational(40);
            let million = rational_from(1_000_000, 1);
            let ceiled = rational_from((cert * million.clone()).ceil().to_integer(), 1) / million;
            println!(
                "  upper bound:   {} * exp(-{}) <= {} (~{})",
                up.coefficient,
                up.exponent,
                ceiled,
                decimal6(&ceiled)
            );
        }
        None => println!("  upper bound:   (none applicable)"),
    }
    println!(
        "  satisfied:     {}",
        if report.satisfied { "yes" } else { "NO (engine bug?)" }
    );
    if !report.satisfied {
        bail!("bound violated");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variant_parsing() {
        for (spec, label) in [
            ("gl:3", "gl3"),
            ("sl:5", "sl5"),
            ("so:7", "so7"),
            ("so:8", "so8"),
            ("so_even:8", "so8"),
            ("sp:6", "sp6"),
            ("group:pgl:4", "group:PGL4"),
            ("group:so:7", "group:SO7"),
            ("sd:sl:6", "sd:sl6"),
            ("orth:sl:6", "orth:sl6"),
        ] {
            assert_eq!(parse_variant(spec).unwrap().label(), label, "{spec}");
        }
        for bad in ["so:4", "sp:5", "gl", "xx:3", "sd:gl:3", "group:pgl:zz"] {
            assert!(parse_variant(bad).is_err(), "{bad} should not parse");
        }
    }

    #[test]
    fn decimal_rendering() {
        use repdens::numeric::rational;
        assert_eq!(decimal6(&rational(3, 8)), "0.375000");
        assert_eq!(decimal6(&rational(315, 131072)), "0.00240326");
        assert_eq!(decimal6(&rational(0, 1)), "0");
        assert_eq!(decimal6(&rational(1, 1)), "1.00000");
    }

    #[test]
    fn moduli_parsing() {
        assert_eq!(parse_moduli("2,3").unwrap(), vec![2, 3]);
        assert_eq!(parse_moduli("").unwrap(), Vec::<u64>::new());
        assert!(parse_moduli("2,x").is_err());
    }
}
