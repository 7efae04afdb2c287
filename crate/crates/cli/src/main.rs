//! Command-line surface for the contextuality library: generate point-line
//! configurations of multi-qubit observables, compute contextuality degrees,
//! and run the headline property checks.
//!
//! Exit codes: 0 success, 1 property failure, 2 usage or input error,
//! 3 I/O error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use contextuality::geometry::{
    doily, grids, perpset, quadric, read_configuration, subspaces, two_spreads,
    write_configuration,
};
use contextuality::pauli::context_sign_unchecked;
use contextuality::satbridge::{to_dimacs, ExternalSatOracle};
use contextuality::{
    build_incidence, cabello_bound, degree_exact, degree_upper_bound, degree_via_threshold,
    BranchBoundOracle, Configuration, DegreeResult, DegreeStatus, Error, IncidenceSystem, Point,
    Sign, SolveBudget,
};
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

const EXIT_PROPERTY_FAILURE: i32 = 1;
const EXIT_USAGE: i32 = 2;
const EXIT_IO: i32 = 3;

#[derive(Parser)]
#[command(name = "contextuality", version, about)]
struct Cli {
    /// Worker threads for enumeration and heuristic restarts
    /// (default: available parallelism; results do not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a configuration family and print its census.
    Generate(GenerateArgs),
    /// Compute the contextuality degree of a configuration.
    Degree(DegreeArgs),
    /// Run a property check suite.
    Check(CheckArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    /// Totally isotropic lines (subspaces with k=1).
    Lines,
    /// Totally isotropic k-subspaces (requires --k).
    Subspaces,
    /// All contexts through an anchor observable (requires --anchor).
    Perpset,
    /// Lines on a quadric; --anchor selects it, omitted means the
    /// fundamental one.
    Quadric,
    /// A doily embedded via identity padding (--embedding).
    Doily,
    /// The six two-spreads of a doily.
    TwoSpreads,
    /// The ten Mermin-Peres grids of the two-qubit space.
    Grids,
}

impl Family {
    fn name(self) -> &'static str {
        match self {
            Family::Lines => "lines",
            Family::Subspaces => "subspaces",
            Family::Perpset => "perpset",
            Family::Quadric => "quadric",
            Family::Doily => "doily",
            Family::TwoSpreads => "two-spreads",
            Family::Grids => "grids",
        }
    }
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long, default_value_t = 2)]
    qubits: usize,
    /// Projective dimension for --family subspaces.
    #[arg(long)]
    k: Option<usize>,
    /// Anchor observable (e.g. XYZ) for perpsets and quadrics.
    #[arg(long)]
    anchor: Option<String>,
    /// Comma-separated 1-based qubit slots holding the identity when a
    /// doily is padded into more qubits (default: slots 1..N-2).
    #[arg(long, value_delimiter = ',')]
    embedding: Option<Vec<usize>>,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Stream and count without materializing configurations.
    #[arg(long)]
    count_only: bool,
    /// Write the configuration text here (multi-configuration families get
    /// a .0, .1, ... suffix per configuration).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Also write the incidence system (matrix text format).
    #[arg(long)]
    incidence_out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Gaussian check, then coset search if p <= 40, else heuristic
    /// (external solver instead when one is configured).
    Auto,
    /// Decide contextuality only; degree reported exactly only when 0.
    Gauss,
    /// Exact minimum-weight coset search.
    Exact,
    /// Iterative-threshold loop over internal branch and bound.
    BranchBound,
    /// Randomized restart local search (upper bound).
    Heuristic,
    /// Iterative-threshold loop over an external SAT solver.
    Sat,
}

#[derive(Args)]
struct DegreeArgs {
    /// Configuration text or incidence matrix text to read; alternative to
    /// the family flags.
    #[arg(long, conflicts_with = "family")]
    input: Option<PathBuf>,
    #[command(flatten)]
    family: Option<FamilyArgs>,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    method: Method,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Iteration budget: enumerated candidates for exact search, nodes for
    /// branch and bound, restarts for the heuristic.
    #[arg(long)]
    iters: Option<u64>,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    /// External SAT solver command (overrides $CONTEXT_SAT_SOLVER).
    #[arg(long)]
    solver_cmd: Option<String>,
    /// Write the unsatisfied contexts of the witness here.
    #[arg(long)]
    unsat_out: Option<PathBuf>,
    /// Write the DIMACS instance that would certify the reported degree as
    /// exact (UNSAT means no assignment violates fewer contexts).
    #[arg(long)]
    dimacs_out: Option<PathBuf>,
    /// Write the manifest (the same key=value lines printed to stdout).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[command(subcommand)]
    suite: CheckSuite,
}

#[derive(Subcommand)]
enum CheckSuite {
    /// Every perpset is non-contextual (degree 0).
    Perpsets {
        #[arg(long, default_value_t = 5)]
        max_qubits: usize,
    },
    /// Every k-subspace census has zero negative contexts.
    Positivity {
        #[arg(long)]
        qubits: usize,
        #[arg(long)]
        k: usize,
    },
    /// Every two-spread of every padded doily has degree 1.
    TwoSpreads {
        #[arg(long, default_value_t = 5)]
        max_qubits: usize,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            fail(EXIT_USAGE, &format!("cannot configure {threads} threads: {e}"));
        }
    }
    let outcome = match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Degree(args) => cmd_degree(args),
        Command::Check(args) => cmd_check(args),
    };
    if let Err(code) = outcome {
        std::process::exit(code);
    }
}

fn fail(code: i32, message: &str) -> ! {
    eprintln!("error: {message}");
    std::process::exit(code);
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => EXIT_IO,
        _ => EXIT_USAGE,
    }
}

fn report(e: Error) -> i32 {
    eprintln!("error: {e}");
    error_code(&e)
}

fn parse_anchor(args: &FamilyArgs) -> Result<Point, i32> {
    let raw = args
        .anchor
        .as_deref()
        .unwrap_or_else(|| fail(EXIT_USAGE, "--anchor is required for this family"));
    let p = Point::encode(raw).map_err(report)?;
    if p.qubits() != args.qubits {
        fail(
            EXIT_USAGE,
            &format!("anchor {raw} has {} qubits, expected {}", p.qubits(), args.qubits),
        );
    }
    Ok(p)
}

fn default_embedding(n: usize) -> Vec<usize> {
    (1..n.saturating_sub(1)).collect()
}

fn build_family(args: &FamilyArgs) -> Result<Vec<Configuration>, i32> {
    let n = args.qubits;
    let built = match args.family {
        Family::Lines => lines_configuration(n).map(|c| vec![c]),
        Family::Subspaces => {
            let k = args
                .k
                .unwrap_or_else(|| fail(EXIT_USAGE, "--k is required for --family subspaces"));
            subspaces_configuration(n, k).map(|c| vec![c])
        }
        Family::Perpset => perpset(n, parse_anchor(args)?).map(|c| vec![c]),
        Family::Quadric => {
            let bits = match &args.anchor {
                None => 0,
                Some(_) => parse_anchor(args)?.bits(),
            };
            quadric(n, bits).map(|(c, _)| vec![c])
        }
        Family::Doily => {
            let slots = args.embedding.clone().unwrap_or_else(|| default_embedding(n));
            doily(n, &slots).map(|c| vec![c])
        }
        Family::TwoSpreads => {
            let slots = args.embedding.clone().unwrap_or_else(|| default_embedding(n));
            doily(n, &slots).and_then(|d| two_spreads(&d))
        }
        Family::Grids => {
            if n != 2 {
                fail(EXIT_USAGE, "--family grids is defined for --qubits 2");
            }
            Ok(grids())
        }
    };
    built.map_err(report)
}

fn lines_configuration(n: usize) -> Result<Configuration, Error> {
    subspaces_configuration_named(n, 1, "lines")
}

fn subspaces_configuration(n: usize, k: usize) -> Result<Configuration, Error> {
    subspaces_configuration_named(n, k, &format!("subspaces-k{k}"))
}

fn subspaces_configuration_named(n: usize, k: usize, name: &str) -> Result<Configuration, Error> {
    let contexts: Vec<Vec<Point>> = subspaces(n, k)?
        .iter()
        .map(|s| s.points().to_vec())
        .collect();
    Configuration::from_contexts(n, name, contexts)
}

fn suffixed(path: &Path, index: usize, many: bool) -> PathBuf {
    if many {
        let mut name = path.as_os_str().to_owned();
        name.push(format!(".{index}"));
        PathBuf::from(name)
    } else {
        path.to_path_buf()
    }
}

fn cmd_generate(args: GenerateArgs) -> Result<(), i32> {
    if args.count_only {
        return generate_count_only(&args);
    }
    let configs = build_family(&args.family)?;
    let many = configs.len() > 1;
    println!("command=generate");
    println!("family={}", args.family.family.name());
    println!("qubits={}", args.family.qubits);
    println!("configurations={}", configs.len());
    for (i, cfg) in configs.iter().enumerate() {
        let prefix = if many { format!("config{i}.") } else { String::new() };
        println!("{prefix}contexts={}", cfg.contexts().len());
        println!("{prefix}observables={}", cfg.points().len());
        println!("{prefix}negative={}", cfg.negative_contexts());
        if let Some(path) = &args.output {
            let target = suffixed(path, i, many);
            let file = File::create(&target).map_err(|e| report(e.into()))?;
            write_configuration(cfg, BufWriter::new(file)).map_err(report)?;
        }
        if let Some(path) = &args.incidence_out {
            let target = suffixed(path, i, many);
            let file = File::create(&target).map_err(|e| report(e.into()))?;
            build_incidence(cfg)
                .write_text(BufWriter::new(file))
                .map_err(report)?;
        }
    }
    Ok(())
}

fn generate_count_only(args: &GenerateArgs) -> Result<(), i32> {
    let n = args.family.qubits;
    let k = match args.family.family {
        Family::Lines => 1,
        Family::Subspaces => args
            .k_or_usage(),
        _ => fail(
            EXIT_USAGE,
            "--count-only streams subspace families only (lines, subspaces)",
        ),
    };
    let (total, negative) = contextuality::geometry::par_fold_subspaces(
        n,
        k,
        || (0u64, 0u64),
        |acc, raw| {
            acc.0 += 1;
            let pts: Vec<Point> = raw
                .iter()
                .map(|&b| Point::new(b, n).expect("enumerated point"))
                .collect();
            if context_sign_unchecked(&pts) == Sign::Minus {
                acc.1 += 1;
            }
        },
        |a, b| (a.0 + b.0, a.1 + b.1),
    )
    .map_err(report)?;
    println!("command=generate");
    println!("family={}", args.family.family.name());
    println!("qubits={n}");
    println!("k={k}");
    println!("contexts={total}");
    println!("negative={negative}");
    Ok(())
}

impl GenerateArgs {
    fn k_or_usage(&self) -> usize {
        self.family
            .k
            .unwrap_or_else(|| fail(EXIT_USAGE, "--k is required for --family subspaces"))
    }
}

enum LoadedInput {
    Config(Configuration),
    System(IncidenceSystem),
}

fn load_input(path: &Path) -> Result<LoadedInput, i32> {
    let mut text = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|e| report(e.into()))?;
    if text.trim_start().starts_with("qubits=") {
        read_configuration(BufReader::new(text.as_bytes()))
            .map(LoadedInput::Config)
            .map_err(report)
    } else {
        IncidenceSystem::read_text(BufReader::new(text.as_bytes()))
            .map(LoadedInput::System)
            .map_err(report)
    }
}

fn budget_for(args: &DegreeArgs, default_iters: u64) -> SolveBudget {
    SolveBudget {
        time_limit: args.time_limit.map(Duration::from_secs_f64),
        iteration_limit: args.iters.unwrap_or(default_iters),
        seed: args.seed,
    }
}

fn solver_command(args: &DegreeArgs) -> Option<Vec<String>> {
    if let Some(raw) = &args.solver_cmd {
        let cmd: Vec<String> = raw.split_whitespace().map(str::to_owned).collect();
        return (!cmd.is_empty()).then_some(cmd);
    }
    ExternalSatOracle::from_env().map(|o| o.command)
}

fn run_method(
    system: &IncidenceSystem,
    args: &DegreeArgs,
) -> Result<(DegreeResult, &'static str), i32> {
    let run_sat = |cmd: Vec<String>| {
        let mut oracle = ExternalSatOracle::new(cmd);
        degree_via_threshold(system, &mut oracle).map_err(report)
    };
    match args.method {
        Method::Gauss => {
            let budget = SolveBudget {
                iteration_limit: 0,
                ..budget_for(args, 0)
            };
            Ok((degree_exact(system, &budget), "gauss"))
        }
        Method::Exact => Ok((degree_exact(system, &budget_for(args, 200_000_000)), "exact")),
        Method::BranchBound => {
            let budget = budget_for(args, 500_000_000);
            let mut oracle = BranchBoundOracle::from_budget(&budget);
            degree_via_threshold(system, &mut oracle)
                .map(|r| (r, "branch_bound"))
                .map_err(report)
        }
        Method::Heuristic => Ok((
            degree_upper_bound(system, &budget_for(args, 500)),
            "heuristic",
        )),
        Method::Sat => match solver_command(args) {
            Some(cmd) => run_sat(cmd).map(|r| (r, "external_sat")),
            None => fail(
                EXIT_USAGE,
                "--method sat needs --solver-cmd or $CONTEXT_SAT_SOLVER",
            ),
        },
        Method::Auto => {
            if system.observables() <= 40 {
                let r = degree_exact(system, &budget_for(args, 200_000_000));
                return Ok((r, "exact"));
            }
            if let Some(cmd) = solver_command(args) {
                // decide contextuality cheaply, then hand thresholds to the
                // external solver
                let quick = degree_exact(
                    system,
                    &SolveBudget {
                        iteration_limit: 0,
                        ..budget_for(args, 0)
                    },
                );
                if quick.status == DegreeStatus::NonContextual {
                    return Ok((quick, "gauss"));
                }
                return run_sat(cmd).map(|r| (r, "external_sat"));
            }
            Ok((
                degree_upper_bound(system, &budget_for(args, 500)),
                "heuristic",
            ))
        }
    }
}

fn cmd_degree(args: DegreeArgs) -> Result<(), i32> {
    let (system, config) = match (&args.input, &args.family) {
        (Some(path), _) => match load_input(path)? {
            LoadedInput::Config(cfg) => (build_incidence(&cfg), Some(cfg)),
            LoadedInput::System(sys) => (sys, None),
        },
        (None, Some(family)) => {
            let mut configs = build_family(family)?;
            if configs.len() != 1 {
                fail(
                    EXIT_USAGE,
                    "degree needs a single configuration; this family builds several \
                     (generate them to files and pass --input)",
                );
            }
            let cfg = configs.remove(0);
            (build_incidence(&cfg), Some(cfg))
        }
        (None, None) => fail(EXIT_USAGE, "degree needs --input or family flags"),
    };

    let started = Instant::now();
    let (result, method) = run_method(&system, &args)?;
    let elapsed = started.elapsed();

    let l = system.contexts();
    let status = match result.status {
        DegreeStatus::NonContextual => "non_contextual",
        DegreeStatus::Exact => "exact",
        DegreeStatus::UpperBound => "upper_bound",
    };
    let mut manifest = String::new();
    manifest.push_str("command=degree\n");
    if let Some(f) = &args.family {
        manifest.push_str(&format!("family={}\nqubits={}\n", f.family.name(), f.qubits));
    }
    if let Some(path) = &args.input {
        manifest.push_str(&format!("input={}\n", path.display()));
    }
    manifest.push_str(&format!("method={method}\n"));
    manifest.push_str(&format!("seed={}\n", args.seed));
    manifest.push_str(&format!("contexts={l}\n"));
    manifest.push_str(&format!("observables={}\n", system.observables()));
    manifest.push_str(&format!("negative={}\n", system.negative_contexts()));
    manifest.push_str(&format!("status={status}\n"));
    manifest.push_str(&format!("d={}\n", result.d));
    manifest.push_str(&format!(
        "b={}\n",
        cabello_bound(l, result.d).map_err(report)?
    ));
    manifest.push_str(&format!("elapsed_ms={}\n", elapsed.as_millis()));
    print!("{manifest}");
    if let Some(path) = &args.output {
        std::fs::write(path, &manifest).map_err(|e| report(e.into()))?;
    }

    if let Some(path) = &args.unsat_out {
        let file = File::create(path).map_err(|e| report(e.into()))?;
        let mut out = BufWriter::new(file);
        for &i in &result.unsatisfied {
            let line = match &config {
                Some(cfg) => {
                    let ctx = &cfg.contexts()[i];
                    let obs: Vec<String> = ctx
                        .points
                        .iter()
                        .map(|&j| cfg.points()[j].decode())
                        .collect();
                    format!("{i} {} {}", obs.join(" "), ctx.sign)
                }
                None => format!("{i}"),
            };
            writeln!(out, "{line}").map_err(|e| report(e.into()))?;
        }
    }

    if let Some(path) = &args.dimacs_out {
        // certification instance: satisfying more than l-d contexts is
        // impossible iff the reported degree is exact
        let enc = to_dimacs(&system, l - result.d + 1, l);
        std::fs::write(path, &enc.cnf).map_err(|e| report(e.into()))?;
    }
    Ok(())
}

fn cmd_check(args: CheckArgs) -> Result<(), i32> {
    let mut failures = 0usize;
    match args.suite {
        CheckSuite::Perpsets { max_qubits } => {
            for n in 2..=max_qubits {
                for bits in 1..(1u64 << (2 * n)) {
                    let cfg = perpset(n, Point::new(bits, n).map_err(report)?).map_err(report)?;
                    let r = degree_exact(&build_incidence(&cfg), &SolveBudget::default());
                    if r.status != DegreeStatus::NonContextual {
                        println!(
                            "check perpsets: FAIL qubits={n} anchor={}",
                            Point::new(bits, n).unwrap().decode()
                        );
                        failures += 1;
                    }
                }
                println!("check perpsets qubits={n}: pass");
            }
        }
        CheckSuite::Positivity { qubits, k } => {
            let (total, negative) = contextuality::geometry::par_fold_subspaces(
                qubits,
                k,
                || (0u64, 0u64),
                |acc, raw| {
                    acc.0 += 1;
                    let pts: Vec<Point> = raw
                        .iter()
                        .map(|&b| Point::new(b, qubits).expect("enumerated point"))
                        .collect();
                    if context_sign_unchecked(&pts) == Sign::Minus {
                        acc.1 += 1;
                    }
                },
                |a, b| (a.0 + b.0, a.1 + b.1),
            )
            .map_err(report)?;
            if negative == 0 {
                println!("check positivity qubits={qubits} k={k}: pass (0 negative of {total})");
            } else {
                println!(
                    "check positivity qubits={qubits} k={k}: FAIL ({negative} negative of {total})"
                );
                failures += 1;
            }
        }
        CheckSuite::TwoSpreads { max_qubits } => {
            for n in 2..=max_qubits {
                let d = doily(n, &default_embedding(n)).map_err(report)?;
                for (i, t) in two_spreads(&d).map_err(report)?.iter().enumerate() {
                    let r = degree_exact(&build_incidence(t), &SolveBudget::default());
                    if (r.status, r.d) != (DegreeStatus::Exact, 1) {
                        println!("check two-spreads: FAIL qubits={n} spread={i}");
                        failures += 1;
                    }
                }
                println!("check two-spreads qubits={n}: pass");
            }
        }
    }
    if failures > 0 {
        Err(EXIT_PROPERTY_FAILURE)
    } else {
        Ok(())
    }
}
