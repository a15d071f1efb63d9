use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;
use wheelermin::automaton::Wdfa;
use wheelermin::border::{build_border_graph, mark_base_cases, mark_reachable, Mark};
use wheelermin::dbg::{ingest, KmerSetBuilder, NPolicy};
use wheelermin::format::{border_to_string, parse_wdfa, write_wdfa};
use wheelermin::oracle::{isomorphic, random_wdfa, reference_min_wdfa, RandomWdfaParams, MAX_ORACLE_STATES};
use wheelermin::report::{linear_fit, power_law_exponent, timed_minimize, RunReport};
use wheelermin::synth::genome_wdfa;
use wheelermin::wheeler::{self, verify_axioms, WheelerOrder};
use wheelermin::{minimize_sorted, seqio};

#[derive(Parser)]
#[command(name = "wheelermin", version, about = "Wheeler DFA minimization and de Bruijn WDFA construction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the de Bruijn WDFA of FASTA/FASTQ files.
    BuildDbg(BuildArgs),
    /// Minimize a WDFA (or the de Bruijn WDFA of a FASTA/FASTQ file).
    Minimize(MinimizeArgs),
    /// Check structural assumptions and the Wheeler axioms.
    Verify(InputArg),
    /// Renumber states by their Wheeler order.
    Sort(SortArgs),
    /// Print size and border-graph statistics.
    Stats(StatsArgs),
    /// Time minimization on synthetic de Bruijn WDFAs of growing size.
    Bench(BenchArgs),
    /// Compare the minimizer against the brute-force oracle.
    Check(CheckArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Split,
    Skip,
}

impl From<PolicyArg> for NPolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::Split => NPolicy::Split,
            PolicyArg::Skip => NPolicy::Skip,
        }
    }
}

#[derive(Args)]
struct DbgOpts {
    /// Order of the de Bruijn graph.
    #[arg(short, default_value_t = 28)]
    k: usize,
    /// Handling of characters other than ACGT.
    #[arg(long, value_enum, default_value = "split")]
    n_policy: PolicyArg,
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    dbg: DbgOpts,
    /// Output file (default: stdout).
    #[arg(short)]
    o: Option<PathBuf>,
    /// FASTA/FASTQ inputs, optionally gzipped.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
}

#[derive(Args)]
struct InputArg {
    /// WDFA file or FASTA/FASTQ; `-` or nothing reads stdin.
    input: Option<PathBuf>,
    #[command(flatten)]
    dbg: DbgOpts,
}

#[derive(Args)]
struct MinimizeArgs {
    #[command(flatten)]
    input: InputArg,
    /// Output file (default: stdout, with the report on stderr).
    #[arg(short)]
    o: Option<PathBuf>,
    /// Print the report as one tab-separated line.
    #[arg(long)]
    tsv: bool,
    /// Write the border graph and its marks to this file.
    #[arg(long, value_name = "FILE")]
    dump_border: Option<PathBuf>,
    /// Also compare the result with the brute-force oracle.
    #[arg(long)]
    check: bool,
}

#[derive(Args)]
struct SortArgs {
    #[command(flatten)]
    input: InputArg,
    #[arg(short)]
    o: Option<PathBuf>,
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    input: InputArg,
    /// One tab-separated line: dataset, states, edges, sigma, finals,
    /// border_nodes, border_edges, base_marked, propagated, unmarked.
    #[arg(long)]
    tsv: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated node counts.
    #[arg(long, value_delimiter = ',', default_values_t = [1usize << 20, 1 << 21, 1 << 22])]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    reps: usize,
    #[arg(short, default_value_t = 28)]
    k: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    tsv: bool,
}

#[derive(Args)]
struct CheckArgs {
    /// WDFA file to check.
    input: Option<PathBuf>,
    /// Check this many random de Bruijn-derived WDFAs instead.
    #[arg(long, conflicts_with = "input")]
    random: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 40)]
    max_states: usize,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Differential(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Differential(_) => 4,
        }
    }
}

fn input_err(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

type Result<T> = std::result::Result<T, CliError>;

fn threads() -> usize {
    std::env::var("WHEELERMIN_THREADS")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&t| t > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn is_stdin(p: &Option<PathBuf>) -> bool {
    p.as_deref().is_none_or(|p| p == Path::new("-"))
}

fn read_bytes(p: &Option<PathBuf>) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    if is_stdin(p) {
        io::stdin().read_to_end(&mut buf).map_err(input_err)?;
    } else {
        let path = p.as_ref().unwrap();
        File::open(path)
            .and_then(|mut f| f.read_to_end(&mut buf))
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    }
    Ok(buf)
}

fn looks_like_sequences(bytes: &[u8]) -> bool {
    bytes.starts_with(&[0x1f, 0x8b])
        || matches!(bytes.iter().find(|b| !b.is_ascii_whitespace()), Some(b'>' | b'@'))
}

/// An input automaton, its name for reports, and whether its ids are Wheeler
/// positions.
struct Loaded {
    automaton: Wdfa,
    name: String,
    sorted: bool,
}

fn load(arg: &InputArg) -> Result<Loaded> {
    let name = match &arg.input {
        Some(p) if !is_stdin(&arg.input) => p.display().to_string(),
        _ => "stdin".to_string(),
    };
    let bytes = read_bytes(&arg.input)?;
    if looks_like_sequences(&bytes) {
        let policy = arg.dbg.n_policy.into();
        let ks = if is_stdin(&arg.input) {
            let mut b = KmerSetBuilder::new(arg.dbg.k, policy).map_err(input_err)?;
            seqio::read_sequences(bytes.as_slice(), &name, |s| b.add_sequence(s)).map_err(input_err)?;
            b.finish()
        } else {
            ingest(std::slice::from_ref(arg.input.as_ref().unwrap()), arg.dbg.k, policy, threads())
                .map_err(input_err)?
        };
        return Ok(Loaded {
            automaton: ks.build_wdfa(),
            name,
            sorted: true,
        });
    }
    let text = String::from_utf8(bytes).map_err(|_| CliError::Input(format!("{name}: not UTF-8 text")))?;
    let f = parse_wdfa(&text).map_err(|e| CliError::Input(format!("{name}: {e}")))?;
    Ok(Loaded {
        automaton: f.automaton,
        name,
        sorted: f.sorted,
    })
}

/// Validates `l` and returns it renumbered by its Wheeler order.
fn sorted_automaton(l: Loaded) -> Result<Wdfa> {
    let a = l.automaton;
    let violations = a.validate();
    if let Some(v) = violations.first() {
        return Err(CliError::Validation(format!(
            "{}: {} structural violation(s), first: {v}",
            l.name,
            violations.len()
        )));
    }
    if l.sorted {
        let found = verify_axioms(&a, &WheelerOrder::identity(a.num_states())).expect("lengths match");
        if let Some(v) = found.first() {
            return Err(CliError::Validation(format!(
                "{}: declared sorted but breaks the Wheeler axioms: {v}",
                l.name
            )));
        }
        return Ok(a);
    }
    wheeler::sorted(&a)
        .map(|(s, _)| s)
        .map_err(|e| CliError::Validation(format!("{}: {e}", l.name)))
}

fn open_output(o: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match o {
        Some(p) if p != Path::new("-") => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?,
        )),
        _ => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_automaton(o: &Option<PathBuf>, a: &Wdfa) -> Result<()> {
    let mut w = open_output(o)?;
    write_wdfa(&mut w, a, true).and_then(|_| w.flush()).map_err(input_err)
}

fn oracle_check(a: &Wdfa, m: &Wdfa) -> Result<()> {
    if a.num_states() > MAX_ORACLE_STATES {
        return Err(CliError::Input(format!(
            "{} states; the oracle refuses more than {MAX_ORACLE_STATES}",
            a.num_states()
        )));
    }
    let r = reference_min_wdfa(a).map_err(input_err)?;
    if !isomorphic(m, &r) {
        return Err(CliError::Differential(format!(
            "minimizer gives {} states, oracle gives {}",
            m.num_states(),
            r.num_states()
        )));
    }
    Ok(())
}

fn cmd_build_dbg(args: BuildArgs) -> Result<()> {
    let ks = ingest(&args.inputs, args.dbg.k, args.dbg.n_policy.into(), threads()).map_err(input_err)?;
    let a = ks.build_wdfa();
    write_automaton(&args.o, &a)?;
    let s = ks.stats();
    eprintln!(
        "k={} kmers={} dummies={} nodes={} edges={}",
        s.k, s.kmers, s.dummies, s.nodes, s.edges
    );
    Ok(())
}

fn cmd_minimize(args: MinimizeArgs) -> Result<()> {
    let loaded = load(&args.input)?;
    let name = loaded.name.clone();
    let a = sorted_automaton(loaded)?;
    let (m, report) = timed_minimize(&a, &name).map_err(|e| CliError::Validation(e.to_string()))?;
    if args.check {
        oracle_check(&a, &m.automaton)?;
    }
    if let Some(path) = &args.dump_border {
        std::fs::write(path, border_to_string(&m.border))
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    }
    write_automaton(&args.o, &m.automaton)?;
    let line = if args.tsv { report.tsv() } else { report.to_string() };
    if args.o.as_deref().is_some_and(|p| p != Path::new("-")) {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
    Ok(())
}

fn cmd_verify(arg: InputArg) -> Result<()> {
    let loaded = load(&arg)?;
    let (n, m, sigma) = (
        loaded.automaton.num_states(),
        loaded.automaton.num_edges(),
        loaded.automaton.alphabet().len(),
    );
    let name = loaded.name.clone();
    let declared = loaded.sorted;
    sorted_automaton(loaded)?;
    let how = if declared { "state ids are a Wheeler order" } else { "Wheeler order found" };
    println!("{name}: ok, {n} states, {m} edges, sigma {sigma}; {how}");
    Ok(())
}

fn cmd_sort(args: SortArgs) -> Result<()> {
    let a = sorted_automaton(load(&args.input)?)?;
    write_automaton(&args.o, &a)
}

fn cmd_stats(args: StatsArgs) -> Result<()> {
    let loaded = load(&args.input)?;
    let name = loaded.name.clone();
    let a = sorted_automaton(loaded)?;
    let mut g = build_border_graph(&a).expect("sorted input");
    mark_base_cases(&a, &mut g);
    let base = g.count_marks(Mark::Base);
    mark_reachable(&mut g);
    let fields = [
        ("dataset", name),
        ("states", a.num_states().to_string()),
        ("edges", a.num_edges().to_string()),
        ("sigma", a.alphabet().len().to_string()),
        ("finals", a.num_finals().to_string()),
        ("border_nodes", g.num_nodes().to_string()),
        ("border_edges", g.num_edges().to_string()),
        ("base_marked", base.to_string()),
        ("propagated", g.count_marks(Mark::Propagated).to_string()),
        ("unmarked", g.count_marks(Mark::Unmarked).to_string()),
    ];
    if args.tsv {
        let values: Vec<&str> = fields.iter().map(|(_, v)| v.as_str()).collect();
        println!("{}", values.join("\t"));
    } else {
        for (k, v) in &fields {
            println!("{k:<13} {v}");
        }
    }
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    if args.reps == 0 {
        return Err(CliError::Input("--reps must be positive".into()));
    }
    let inputs: Vec<Wdfa> = args
        .sizes
        .iter()
        .map(|&n| genome_wdfa(n.max(1), args.k, args.seed ^ n as u64).map_err(input_err))
        .collect::<Result<_>>()?;
    let mut best: Vec<Option<RunReport>> = vec![None; inputs.len()];
    for _ in 0..args.reps {
        for (slot, a) in best.iter_mut().zip(&inputs) {
            let name = format!("synthetic-{}", a.num_states());
            let (_, r) = timed_minimize(a, &name).map_err(|e| CliError::Validation(e.to_string()))?;
            if slot.as_ref().is_none_or(|b| r.time_s < b.time_s) {
                *slot = Some(r);
            }
        }
    }
    let rows: Vec<RunReport> = best.into_iter().flatten().collect();
    if args.tsv {
        println!("{}", RunReport::TSV_HEADER);
    }
    for r in &rows {
        if args.tsv {
            println!("{}", r.tsv());
        } else {
            println!("{:<20} {r}", r.dataset);
        }
    }
    let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.in_nodes as f64, r.time_s)).collect();
    if let Some((slope, _)) = linear_fit(&points) {
        let exponent = power_law_exponent(&points).unwrap_or(f64::NAN);
        let ratios: Vec<String> = rows
            .windows(2)
            .map(|w| format!("{:.2}", w[1].time_s / w[0].time_s))
            .collect();
        println!(
            "# fit: {:.3} ns/node, log-log exponent {exponent:.3}, consecutive time ratios {}",
            slope * 1e9,
            ratios.join(" ")
        );
    }
    Ok(())
}

fn cmd_check(args: CheckArgs) -> Result<()> {
    let Some(count) = args.random else {
        let arg = InputArg {
            input: args.input,
            dbg: DbgOpts {
                k: 28,
                n_policy: PolicyArg::Split,
            },
        };
        let a = sorted_automaton(load(&arg)?)?;
        if a.num_states() > MAX_ORACLE_STATES {
            return Err(CliError::Input(format!(
                "{} states; the oracle refuses more than {MAX_ORACLE_STATES}",
                a.num_states()
            )));
        }
        let m = minimize_sorted(&a).map_err(|e| CliError::Validation(e.to_string()))?;
        oracle_check(&a, &m.automaton)?;
        println!("pass: {} -> {} states, isomorphic to the oracle", a.num_states(), m.automaton.num_states());
        return Ok(());
    };
    if args.max_states > MAX_ORACLE_STATES {
        return Err(CliError::Input(format!("--max-states above {MAX_ORACLE_STATES}")));
    }
    let params = RandomWdfaParams {
        max_states: args.max_states,
        min_states: RandomWdfaParams::default().min_states.min(args.max_states),
        ..RandomWdfaParams::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    for i in 0..count {
        let a = random_wdfa(&mut rng, &params);
        let m = minimize_sorted(&a).map_err(|e| CliError::Validation(e.to_string()))?;
        oracle_check(&a, &m.automaton).map_err(|e| match e {
            CliError::Differential(msg) => CliError::Differential(format!("instance {i}: {msg}")),
            other => other,
        })?;
    }
    println!("pass: {count} random automata isomorphic to the oracle");
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::BuildDbg(a) => cmd_build_dbg(a),
        Command::Minimize(a) => cmd_minimize(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Sort(a) => cmd_sort(a),
        Command::Stats(a) => cmd_stats(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Check(a) => cmd_check(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("wheelermin: {e}");
            ExitCode::from(e.code())
        }
    }
}
