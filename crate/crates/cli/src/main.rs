use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use pdaforge::coloring::ColoringStrategy;
use pdaforge::combinatorics::decimal;
use pdaforge::construct::{construct_pda, PartitionKind};
use pdaforge::pda::{parse, serialize};
use pdaforge::qvec::CellCap;
use pdaforge::report::{compare_to_mn, reproduce_table, ComparisonRow, TableName};
use pdaforge::sim::{deliver, demand_sequence, run_roundtrip, DemandPolicy, Library, RoundtripConfig};
use pdaforge::PdaArray;

/// Build, check and exercise placement delivery arrays.
#[derive(Parser, Debug)]
#[command(name = "pdaforge", version, about)]
struct Cli {
    /// Largest number of cells any array may have [env: PDAFORGE_CELL_CAP]
    #[arg(long, global = true)]
    cell_cap: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate the full-space array for (q, m, omega) and label it.
    Construct {
        #[arg(long)]
        q: u8,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        omega: usize,
        #[arg(long, value_enum, default_value_t = Partition::Primary)]
        partition: Partition,
        /// Coloring used by the improved partition.
        #[arg(long, value_enum, default_value_t = Coloring::Auto)]
        coloring: Coloring,
        /// Write here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check both array conditions; exits 1 on the first violation.
    Verify {
        file: PathBuf,
        /// Also list useless stars.
        #[arg(long)]
        useless: bool,
    },
    /// Print the caching-scheme parameters of an array.
    Analyze {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run placement, delivery and decoding for seeded demand vectors.
    Simulate {
        file: PathBuf,
        /// Number of files N; defaults to K+1.
        #[arg(long)]
        files: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Demands::Random)]
        demands: Demands,
        /// How many demand vectors to run.
        #[arg(long, default_value_t = 100)]
        rounds: usize,
        #[arg(long, default_value_t = 64)]
        packet_size: usize,
        /// Write the first delivery's transcript as JSON.
        #[arg(long)]
        transcript: Option<PathBuf>,
    },
    /// Compare the binary construction with the MN scheme.
    Compare {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        omega: usize,
        #[arg(long)]
        json: bool,
    },
    /// Rebuild a published comparison table.
    Table {
        #[arg(value_enum)]
        name: Table,
        #[arg(long)]
        csv: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Partition {
    Trivial,
    Primary,
    Improved,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Coloring {
    Auto,
    Greedy,
    Complement,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Demands {
    Random,
    Roundrobin,
}

#[allow(clippy::upper_case_acronyms)]
#[derive(Clone, Copy, Debug, ValueEnum)]
enum Table {
    #[value(name = "III")]
    III,
    #[value(name = "IV")]
    IV,
    #[value(name = "V")]
    V,
}

/// `println!` that hands write errors (a closed pipe) back to the caller.
macro_rules! out {
    ($($arg:tt)*) => {
        writeln!(io::stdout().lock(), $($arg)*)?
    };
}

/// Command failed on its own terms (bad array, failed decode): exit 1.
struct Failed;

type Outcome = anyhow::Result<Result<(), Failed>>;

fn cell_cap(flag: Option<u64>) -> CellCap {
    flag.map(CellCap).unwrap_or_else(CellCap::from_env)
}

fn read_pda(path: &Path) -> anyhow::Result<PdaArray> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => Ok(io::stdout().write_all(text.as_bytes())?),
    }
}

fn construct(q: u8, m: usize, omega: usize, partition: Partition, coloring: Coloring, out: Option<&Path>, cap: CellCap) -> Outcome {
    let strategy = match coloring {
        Coloring::Auto => ColoringStrategy::Auto,
        Coloring::Greedy => ColoringStrategy::Greedy,
        Coloring::Complement => ColoringStrategy::Complement,
    };
    let kind = match partition {
        Partition::Trivial => PartitionKind::Trivial,
        Partition::Primary => PartitionKind::Primary,
        Partition::Improved => PartitionKind::Improved(strategy),
    };
    let pda = construct_pda(q, m, omega, kind, cap)?;
    emit(out, &serialize(&pda))?;
    if out.is_some() {
        eprintln!(
            "wrote ({},{},{},{}) array",
            pda.k(),
            pda.f(),
            pda.column_star_counts()[0],
            pda.symbol_count()
        );
    }
    Ok(Ok(()))
}

fn verify(file: &Path, useless: bool) -> Outcome {
    let pda = read_pda(file)?;
    let name = |r: usize, c: usize| format!("({},{})", pda.rows()[r], pda.cols()[c]);
    if let Err(v) = pda.verify_c1() {
        let (a, b) = v.cells();
        out!("FAIL {v}");
        out!("  cells {} and {}", name(a.0, a.1), name(b.0, b.1));
        return Ok(Err(Failed));
    }
    out!("C1 ok");
    let z = match pda.verify_c2() {
        Ok(z) => z,
        Err(m) => {
            out!("FAIL {m}");
            return Ok(Err(Failed));
        }
    };
    out!("C2 ok (Z={z})");
    out!("({},{},{},{}) PDA", pda.k(), pda.f(), z, pda.symbol_count());
    if useless {
        let scan = pda.find_useless_stars()?;
        match scan.uniform() {
            Some(zp) => out!("useless stars per column: {zp}"),
            None => out!("useless stars per column: {:?}", scan.per_column()),
        }
        for (r, c) in scan.cells() {
            out!("  {}", name(r, c));
        }
    }
    Ok(Ok(()))
}

fn analyze(file: &Path, json: bool) -> Outcome {
    let pda = read_pda(file)?;
    let params = pda.scheme_params()?;
    if json {
        out!("{}", serde_json::to_string_pretty(&params.to_json())?);
    } else {
        write!(io::stdout().lock(), "{}", params.summary())?;
    }
    Ok(Ok(()))
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    file: &Path,
    files: Option<usize>,
    seed: u64,
    demands: Demands,
    rounds: usize,
    packet_size: usize,
    transcript: Option<&Path>,
) -> Outcome {
    let pda = read_pda(file)?;
    let cfg = RoundtripConfig {
        files: files.unwrap_or(pda.k() + 1),
        demands: rounds,
        policy: match demands {
            Demands::Random => DemandPolicy::Random,
            Demands::Roundrobin => DemandPolicy::RoundRobin,
        },
        packet_size,
        seed,
    };
    if cfg.files <= pda.k() {
        eprintln!("note: N={} does not exceed K={}", cfg.files, pda.k());
    }
    let report = run_roundtrip(&pda, &cfg)?;
    if let Some(path) = transcript {
        let lib = Library::random(cfg.files, pda.f(), cfg.packet_size, cfg.seed)?;
        let first = demand_sequence(pda.k(), &RoundtripConfig { demands: 1, ..cfg.clone() })?;
        let t = deliver(&pda, &lib, &first[0])?;
        fs::write(path, serde_json::to_string_pretty(&t.to_json())? + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
    }
    out!("{}", serde_json::to_string_pretty(&report.to_json())?);
    if report.decoded_ok {
        Ok(Ok(()))
    } else {
        for (round, user) in &report.failures {
            eprintln!("decode mismatch: demand {round}, user {user}");
        }
        Ok(Err(Failed))
    }
}

fn compare(m: usize, omega: usize, json: bool) -> Outcome {
    let c = compare_to_mn(m, omega)?;
    if json {
        out!("{}", serde_json::to_string_pretty(&c.to_json())?);
        return Ok(Ok(()));
    }
    out!("K = {}, M/N = {} ({})", c.k, c.memory_fraction, decimal(&c.memory_fraction, 4));
    out!("F1 = {}, R1 = {}", c.f1, decimal(&c.r1, 4));
    match &c.mn.exact {
        Some((t, _, r)) => out!("MN: t = {t} (integral), R = {}", decimal(r, 4)),
        None => out!(
            "MN: t = {:.4} not integral; nearest t = {} gives R = {:.4}, real t gives R = {:.4}",
            c.mn.real.t, c.mn.nearest.t, c.mn.nearest.rate, c.mn.real.rate
        ),
    }
    out!("log10(F1/F_MN) = {:.4}", c.log10_f_ratio);
    out!("R1/R_MN = {}", decimal(&c.rate_ratio, 4));
    if let Some(b) = &c.balanced {
        out!("balanced approximations:");
        out!("  R1/R_MN ~ {:.4} (asymptotic {:.4})", b.rate_ratio, b.rate_ratio_asymptotic);
        for (name, v) in b.f_ratio_paths() {
            out!("  log10(F1/F_MN) {name:<12} {v:.4}");
        }
    }
    Ok(Ok(()))
}

fn table(name: Table, csv_out: bool) -> Outcome {
    let name = match name {
        Table::III => TableName::III,
        Table::IV => TableName::IV,
        Table::V => TableName::V,
    };
    let report = reproduce_table(name);
    if csv_out {
        let mut w = csv::Writer::from_writer(io::stdout());
        w.write_record(ComparisonRow::CSV_HEADER)?;
        for row in &report.rows {
            w.write_record(row.csv_record())?;
        }
        w.flush()?;
    } else {
        for row in &report.rows {
            let [scheme, params, k, f, mf, r, flags] = row.csv_record();
            out!("{scheme:<14} {params:<14} {k:>15} {f:>15} {mf:>8} {r:>20}  {flags}");
        }
    }
    Ok(Ok(()))
}

fn run(cli: Cli) -> Outcome {
    let cap = cell_cap(cli.cell_cap);
    match cli.command {
        Command::Construct {
            q,
            m,
            omega,
            partition,
            coloring,
            out,
        } => construct(q, m, omega, partition, coloring, out.as_deref(), cap),
        Command::Verify { file, useless } => verify(&file, useless),
        Command::Analyze { file, json } => analyze(&file, json),
        Command::Simulate {
            file,
            files,
            seed,
            demands,
            rounds,
            packet_size,
            transcript,
        } => simulate(&file, files, seed, demands, rounds, packet_size, transcript.as_deref()),
        Command::Compare { m, omega, json } => compare(m, omega, json),
        Command::Table { name, csv } => table(name, csv),
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<io::Error>().map(io::Error::kind) == Some(io::ErrorKind::BrokenPipe)
            || matches!(c.downcast_ref::<csv::Error>().map(csv::Error::kind), Some(csv::ErrorKind::Io(io)) if io.kind() == io::ErrorKind::BrokenPipe)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(Failed)) => ExitCode::from(1),
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

