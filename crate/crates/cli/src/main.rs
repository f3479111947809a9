use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use exotic_core::bicomb::{bipartitions_of, fiber_dim_d, hasse_covers, orbit_dim};
use exotic_core::classify::classify_pair;
use exotic_core::ffield::check_modulus;
use exotic_core::hyperoct::restrict_branching;
use exotic_core::springer::springer_table;
use exotic_core::symplectic::normal_form_pair;
use exotic_core::{Bipartition, CharacterTable, ExoticPair, SymplecticSpace};
use serde::Serialize;

mod suites;

#[derive(Parser, Debug)]
#[command(name = "exotic", version, about = "Exotic nilpotent cone orbits and the exotic Springer correspondence")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
    Dot,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Restriction,
    DDiff,
    SumSquares,
    Determine,
    Census,
    Klyachko,
    Parabolic,
    Log,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FlavorArg {
    Lie,
    Group,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List orbit labels with orbit dimension and fiber dimension.
    Orbits {
        #[arg(long, value_parser = parse_rank)]
        n: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Closure order covers.
    Hasse {
        #[arg(long, value_parser = parse_rank)]
        n: usize,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
    },
    /// Character table of the hyperoctahedral group.
    Chartable {
        #[arg(long, value_parser = parse_rank)]
        n: usize,
        #[arg(long, value_enum, default_value = "tsv")]
        format: Format,
    },
    /// Orbits paired with irreducible characters.
    Springer {
        #[arg(long, value_parser = parse_rank)]
        n: usize,
        #[arg(long, value_enum, default_value = "tsv")]
        format: Format,
    },
    /// Branching matrix from rank n to rank n - 1.
    Branch {
        #[arg(long, value_parser = parse_rank)]
        n: usize,
        #[arg(long, value_enum, default_value = "tsv")]
        format: Format,
    },
    /// Classify an exotic pair given as JSON (file or `-` for stdin).
    Classify {
        #[arg(long, default_value = "-")]
        input: PathBuf,
    },
    /// Normal form pair for a label.
    Repr {
        #[arg(long, value_parser = parse_rank)]
        n: usize,
        #[arg(long, value_parser = parse_prime)]
        p: u64,
        #[arg(long, value_parser = parse_label, allow_hyphen_values = true)]
        label: Bipartition,
        #[arg(long, value_enum, default_value = "group")]
        flavor: FlavorArg,
    },
    /// Run a verification suite; exit 1 on any mismatch.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, value_parser = parse_rank)]
        n: usize,
        #[arg(long, value_parser = parse_prime, default_value = "3")]
        p: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        jobs: Option<u64>,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Conjugate the census by a seeded random symplectic matrix.
        #[arg(long)]
        seed: Option<u64>,
        /// Only check the line-stabilizer formula where its hypothesis holds.
        #[arg(long)]
        domain_only: bool,
        #[arg(long, hide = true)]
        inject_mismatch: bool,
    },
}

fn parse_rank(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if (1..=64).contains(&n) => Ok(n),
        _ => Err(format!("rank must be an integer in 1..=64, got {s:?}")),
    }
}

fn parse_prime(s: &str) -> Result<u64, String> {
    let p: u64 = s.parse().map_err(|_| format!("not an integer: {s:?}"))?;
    check_modulus(p).map(|_| p).map_err(|e| e.to_string())
}

fn parse_label(s: &str) -> Result<Bipartition, String> {
    s.parse().map_err(|e: exotic_core::Error| e.to_string())
}

fn json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn unsupported(command: &str, format: Format) -> anyhow::Error {
    anyhow::anyhow!("{command} does not support --format {format:?}")
}

#[derive(Serialize)]
struct OrbitRow {
    label: Bipartition,
    dim: usize,
    d: usize,
}

fn orbits(n: usize, format: Format) -> anyhow::Result<String> {
    let rows = bipartitions_of(n)
        .into_iter()
        .map(|label| {
            Ok(OrbitRow {
                dim: orbit_dim(&label, n)?,
                d: fiber_dim_d(&label, n)?,
                label,
            })
        })
        .collect::<exotic_core::Result<Vec<_>>>()?;
    Ok(match format {
        Format::Json => json(&rows)?,
        Format::Tsv => {
            let mut out = String::from("label\tdim\td\n");
            for r in &rows {
                out += &format!("{}\t{}\t{}\n", r.label, r.dim, r.d);
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            for r in &rows {
                out += &format!("{:<16} dim {:>4}  d {:>3}\n", r.label.to_string(), r.dim, r.d);
            }
            out
        }
        Format::Dot => return Err(unsupported("orbits", format)),
    })
}

fn hasse(n: usize, format: Format) -> anyhow::Result<String> {
    let covers = hasse_covers(n);
    Ok(match format {
        Format::Dot => {
            let mut by_dim: std::collections::BTreeMap<usize, Vec<Bipartition>> = Default::default();
            for l in bipartitions_of(n) {
                by_dim.entry(orbit_dim(&l, n)?).or_default().push(l);
            }
            let mut out = format!("digraph closure_{n} {{\n  rankdir=BT;\n");
            for (dim, labels) in by_dim.iter().rev() {
                let nodes: Vec<String> = labels.iter().map(|l| format!("\"{l}\"")).collect();
                out += &format!("  {{ rank=same; {}; }} // dim {dim}\n", nodes.join("; "));
            }
            for (hi, lo) in &covers {
                out += &format!("  \"{lo}\" -> \"{hi}\";\n");
            }
            out + "}\n"
        }
        Format::Json => {
            let pairs: Vec<[String; 2]> = covers.iter().map(|(h, l)| [h.to_string(), l.to_string()]).collect();
            json(&pairs)?
        }
        Format::Tsv | Format::Text => {
            let mut out = String::from("upper\tlower\n");
            for (hi, lo) in &covers {
                out += &format!("{hi}\t{lo}\n");
            }
            out
        }
    })
}

fn chartable(n: usize, format: Format) -> anyhow::Result<String> {
    let t = CharacterTable::build(n);
    match format {
        Format::Json => json(&t),
        Format::Tsv | Format::Text => Ok(t.to_tsv()),
        Format::Dot => Err(unsupported("chartable", format)),
    }
}

fn springer(n: usize, format: Format) -> anyhow::Result<String> {
    let t = springer_table(n)?;
    match format {
        Format::Json => json(&t),
        Format::Tsv | Format::Text => Ok(t.to_tsv()),
        Format::Dot => Err(unsupported("springer", format)),
    }
}

fn branch(n: usize, format: Format) -> anyhow::Result<String> {
    if n < 2 {
        bail!("branch needs --n >= 2");
    }
    let b = restrict_branching(n)?;
    match format {
        Format::Json => json(&b),
        Format::Tsv | Format::Text => {
            let cols: Vec<String> = b.cols.iter().map(ToString::to_string).collect();
            let mut out = format!("irrep\t{}\n", cols.join("\t"));
            for (r, row) in b.rows.iter().zip(&b.entries) {
                let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
                out += &format!("{r}\t{}\n", cells.join("\t"));
            }
            Ok(out)
        }
        Format::Dot => Err(unsupported("branch", format)),
    }
}

fn classify(input: &PathBuf) -> anyhow::Result<String> {
    let text = if input.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?
    };
    let pair: ExoticPair = serde_json::from_str(&text).context("parsing exotic pair")?;
    json(&classify_pair(&pair)?)
}

fn repr(n: usize, p: u64, label: &Bipartition, flavor: FlavorArg) -> anyhow::Result<String> {
    if label.size() != n {
        bail!("label {label} has size {}, expected {n}", label.size());
    }
    let space = SymplecticSpace::new(n, p)?;
    let pair = normal_form_pair(label, &space)?.pair;
    let pair = match flavor {
        FlavorArg::Group => pair,
        FlavorArg::Lie => pair.to_lie(),
    };
    json(&pair)
}

fn dispatch(cli: Cli) -> anyhow::Result<(String, bool)> {
    let ok = |s: String| Ok((s, true));
    match cli.command {
        Command::Orbits { n, format } => ok(orbits(n, format)?),
        Command::Hasse { n, format } => ok(hasse(n, format)?),
        Command::Chartable { n, format } => ok(chartable(n, format)?),
        Command::Springer { n, format } => ok(springer(n, format)?),
        Command::Branch { n, format } => ok(branch(n, format)?),
        Command::Classify { input } => ok(classify(&input)?),
        Command::Repr { n, p, label, flavor } => ok(repr(n, p, &label, flavor)?),
        Command::Verify {
            suite,
            n,
            p,
            jobs,
            checkpoint,
            seed,
            domain_only,
            inject_mismatch,
        } => suites::run(&suites::SuiteConfig {
            suite,
            n,
            p,
            jobs: jobs.map(|j| j as usize),
            checkpoint,
            seed,
            domain_only,
            inject_mismatch,
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok((out, passed)) => {
            print!("{out}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
