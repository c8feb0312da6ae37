use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use maniplex::bicolour::bicolouring_consistent;
use maniplex::construct::{construct_two_orbit, ConstructOptions, Procedure};
use maniplex::pregraph::normalise_set;
use maniplex::symmetry::{classify_from_orbits, flag_orbits_with, stg_from_orbits};
use maniplex::twohat::{
    build_eta_with, build_mn, find_s0, trivial_extension, two_hat, verify_eta, S0Search,
    DEFAULT_FLAG_CAP, DEFAULT_SEED,
};
use maniplex::voltage::{cover_maniplex, VoltageAssignment, DEFAULT_GROUP_CAP};
use maniplex::{Exec, Maniplex, Pregraph};

/// Maniplexes, symmetry type graphs, voltage covers and two-orbit constructions.
#[derive(Parser, Debug)]
#[command(name = "maniplex", version, about)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Worker threads; 1 runs everything on the main thread.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Largest flag count any command may materialise.
    #[arg(long, global = true, default_value_t = DEFAULT_FLAG_CAP, value_parser = positive)]
    flag_cap: usize,
    /// Largest voltage group any command may enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_GROUP_CAP, value_parser = positive)]
    group_cap: usize,
    /// Seed for randomised searches.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Args, Debug)]
struct Output {
    /// Write the result here instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a `.mnx` maniplex or `.pgr` pregraph and list every violation.
    Validate { file: PathBuf },
    /// Symmetry type graph of a maniplex, as a `.pgr` pregraph.
    Stg {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Number of flag orbits, automorphism group order and orbit sizes.
    Orbits { file: PathBuf },
    /// Orbit count and symmetry type, e.g. `k=2 type=chiral:2_{}^3`.
    Classify { file: PathBuf },
    /// Dual maniplex.
    Dual {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Schläfli type.
    Schlafli { file: PathBuf },
    /// Bi-colouring consistent with a colour set, as a `W`/`B` string.
    Bicolour {
        file: PathBuf,
        /// Comma-separated colours, e.g. `0,2`; empty for none.
        #[arg(long, default_value = "")]
        set: String,
    },
    /// The extension `2^M`.
    TwoHat {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// The trivial extension: two copies joined by a new top colour.
    TrivialExt {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// The family member `M_n`.
    Mn {
        #[arg(long)]
        rank: usize,
        #[command(flatten)]
        out: Output,
    },
    /// A facet set fixed by no non-trivial automorphism.
    FindS0 { file: PathBuf },
    /// The separating involution built on a rigid facet set, one hex vector per flag.
    Eta {
        file: PathBuf,
        /// Only verify it and print `pass` or `fail`.
        #[arg(long)]
        check: bool,
    },
    /// Materialise the derived cover of a `.vlt` voltage assignment.
    Cover {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Two-orbit maniplex of type `2_I^rank`, with its certificate.
    Construct {
        #[arg(long)]
        rank: usize,
        /// Comma-separated colours `I`; empty for the chiral type.
        #[arg(long, default_value = "")]
        set: String,
        /// Layer parameter; below the proven bound runs are reported uncertified.
        #[arg(long)]
        k: Option<usize>,
        /// Largest voltage group to materialise; 0 keeps only the certificate.
        #[arg(long, default_value_t = 0)]
        materialize_cap: usize,
        /// Write the certificate, or the maniplex when the path ends in `.mnx`.
        #[arg(long)]
        emit: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ProcedureArg::Auto)]
        procedure: ProcedureArg,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ProcedureArg {
    Auto,
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
}

fn positive(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_maniplex(path: &Path, cap: usize) -> Result<Maniplex> {
    let m = Maniplex::from_mnx_str(&read(path)?)
        .with_context(|| format!("parsing {}", path.display()))?;
    if m.flag_count() > cap {
        return Err(maniplex::Error::CapExceeded {
            which: "flags",
            limit: cap,
        }
        .into());
    }
    Ok(m)
}

fn emit(out: &Output, text: &str) -> Result<()> {
    match &out.output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_set(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .with_context(|| format!("bad colour `{t}`"))
        })
        .collect()
}

fn join(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

fn run(cli: Cli) -> Result<()> {
    let g = &cli.global;
    let exec = if g.threads == Some(1) {
        Exec::Sequential
    } else {
        Exec::default()
    };
    #[cfg(feature = "parallel")]
    if let Some(n) = g.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    let s0_opts = S0Search {
        exec,
        seed: g.seed,
        ..S0Search::default()
    };

    match cli.command {
        Command::Validate { file } => {
            let text = read(&file)?;
            let first = text.split_whitespace().next().unwrap_or("");
            let problems: Vec<String> = if first == "pregraph" {
                Pregraph::from_pgr_str(&text)?
                    .validate()
                    .iter()
                    .map(ToString::to_string)
                    .collect()
            } else {
                Maniplex::from_mnx_str(&text)?
                    .validate()
                    .iter()
                    .map(ToString::to_string)
                    .collect()
            };
            if !problems.is_empty() {
                bail!("{}", problems.join("; "));
            }
            println!("valid");
        }
        Command::Stg { file, out } => {
            let m = read_maniplex(&file, g.flag_cap)?;
            let orbits = flag_orbits_with(&m, exec);
            emit(
                &out,
                &stg_from_orbits(&m, &orbits.partition).graph.to_pgr_string(),
            )?;
        }
        Command::Orbits { file } => {
            let m = read_maniplex(&file, g.flag_cap)?;
            let o = flag_orbits_with(&m, exec);
            let sizes: Vec<usize> = o.partition.members().iter().map(Vec::len).collect();
            println!("k={}\naut={}\nsizes={}", o.k, o.group_order, join(&sizes));
        }
        Command::Classify { file } => {
            let m = read_maniplex(&file, g.flag_cap)?;
            let o = flag_orbits_with(&m, exec);
            let class = classify_from_orbits(&m, &o.partition);
            println!("k={} type={}", o.k, class.descriptor(m.rank()));
        }
        Command::Dual { file, out } => {
            emit(
                &out,
                &read_maniplex(&file, g.flag_cap)?.dual().to_mnx_string(),
            )?;
        }
        Command::Schlafli { file } => {
            let s = read_maniplex(&file, g.flag_cap)?.schlafli_type();
            println!(
                "{{{}}}",
                s.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
            );
        }
        Command::Bicolour { file, set } => {
            let m = read_maniplex(&file, g.flag_cap)?;
            let set = normalise_set(m.rank(), &parse_set(&set)?)?;
            match bicolouring_consistent(&m, &set)? {
                Some(c) => println!("{}", c.to_wb_string()),
                None => println!("none"),
            }
        }
        Command::TwoHat { file, out } => {
            emit(
                &out,
                &two_hat(&read_maniplex(&file, g.flag_cap)?, g.flag_cap)?.to_mnx_string(),
            )?;
        }
        Command::TrivialExt { file, out } => {
            let m = read_maniplex(&file, g.flag_cap / 2)?;
            emit(&out, &trivial_extension(&m).to_mnx_string())?;
        }
        Command::Mn { rank, out } => {
            emit(&out, &build_mn(rank, g.flag_cap)?.to_mnx_string())?;
        }
        Command::FindS0 { file } => {
            let m = read_maniplex(&file, g.flag_cap)?;
            match find_s0(&m, s0_opts)? {
                Some(s) => println!("{}", join(&s)),
                None => println!("none"),
            }
        }
        Command::Eta { file, check } => {
            let m = read_maniplex(&file, g.flag_cap)?;
            let Some(s0) = find_s0(&m, s0_opts)? else {
                bail!("no rigid facet set");
            };
            let f0 = s0[0];
            let phi0 = m.facets().first_flags()[f0];
            let eta = build_eta_with(&m, &s0, f0, phi0, exec)?;
            if check {
                let ok = verify_eta(&m, &eta);
                println!("{}", if ok { "pass" } else { "fail" });
                if !ok {
                    bail!("eta does not separate the flags of some facet");
                }
            } else {
                print!("{}", eta.to_hex_lines());
            }
        }
        Command::Cover { file, out } => {
            let zeta = VoltageAssignment::from_vlt_str(&read(&file)?)
                .with_context(|| format!("parsing {}", file.display()))?;
            let cap = g.group_cap.min(g.flag_cap / zeta.base.vertex_count.max(1));
            let (m, _) = cover_maniplex(&zeta, cap)?;
            emit(&out, &m.to_mnx_string())?;
        }
        Command::Construct {
            rank,
            set,
            k,
            materialize_cap,
            emit: target,
            procedure,
        } => {
            let opts = ConstructOptions {
                k,
                flag_cap: g.flag_cap,
                group_cap: g.group_cap,
                materialize_cap,
                procedure: match procedure {
                    ProcedureArg::Auto => Procedure::Auto,
                    ProcedureArg::One => Procedure::One,
                    ProcedureArg::Two => Procedure::Two,
                },
                exec,
                seed: g.seed,
            };
            let c = construct_two_orbit(rank, &parse_set(&set)?, &opts)?;
            let cert = c.certificate.to_text();
            print!("{cert}");
            if let Some(path) = target {
                let text = if path.extension().is_some_and(|e| e == "mnx") {
                    match &c.maniplex {
                        Some(m) => m.to_mnx_string(),
                        None => bail!("the maniplex was not materialised; raise --materialize-cap or emit the certificate"),
                    }
                } else {
                    cert
                };
                fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
            }
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
