use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use recoupler_core::analysis::{
    c_table, c_table_csv, coverage, epsilon_for, paley_reachability_scan, prime_in_interval,
    rosser_scan, summarize, LITERATURE_COVERAGE,
};
use recoupler_core::hadamard::{RecipeKind, DEFAULT_REGISTRY_BOUND};
use recoupler_core::io;
use recoupler_core::numtheory::Sieve;
use recoupler_core::system::DEFAULT_HETERONUCLEAR_RATIO;
use recoupler_core::verify::{random_trials, verify_program, VerifyOptions, DEFAULT_TOLERANCE};
use recoupler_core::{compile, Error, OrderRegistry, Purpose, Target};

const BOUND_VAR: &str = "RECOUPLER_REGISTRY_BOUND";

#[derive(Parser)]
#[command(name = "recoupler", version, about = "Hadamard-based decoupling and recoupling pulse programs")]
struct Cli {
    /// Extra Hadamard matrix files to add to the order registry.
    #[arg(long = "hadamard-file", global = true, value_name = "FILE")]
    hadamard_files: Vec<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate, check and look up Hadamard matrices.
    #[command(subcommand)]
    Hadamard(HadamardCmd),
    /// Compile a decoupling or recoupling pulse program.
    Compile(CompileArgs),
    /// Check a pulse program against a spin system.
    Verify(VerifyArgs),
    /// Order gaps and prime-counting scans.
    #[command(subcommand)]
    Analysis(AnalysisCmd),
}

#[derive(Subcommand)]
enum HadamardCmd {
    Gen {
        #[arg(long)]
        order: usize,
        #[arg(long, default_value = "auto")]
        recipe: RecipeKind,
        /// Write here instead of stdout.
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    Check { file: PathBuf },
    Nbar {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    Decouple,
    Recouple,
}

#[derive(Args)]
struct CompileArgs {
    #[arg(long)]
    system: PathBuf,
    #[arg(long, value_enum)]
    op: Op,
    #[arg(long)]
    i: Option<usize>,
    #[arg(long)]
    j: Option<usize>,
    /// Interval duration in seconds (decoupling only).
    #[arg(long)]
    t: Option<f64>,
    /// Restrict to a chain where only spins within distance K couple.
    #[arg(long)]
    knn: Option<usize>,
    /// Also cancel the Zeeman term when decoupling.
    #[arg(long)]
    zeeman_free: bool,
    #[arg(short = 'o', long)]
    output: PathBuf,
    /// Also write the sign matrix.
    #[arg(long, value_name = "FILE")]
    sign_matrix: Option<PathBuf>,
    /// Print the pulse timeline to stdout.
    #[arg(long)]
    timeline: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    system: PathBuf,
    #[arg(long)]
    program: PathBuf,
    /// identity or zz:I,J; defaults to the program's own target.
    #[arg(long)]
    target: Option<Target>,
    /// Also run the brute-force simulation.
    #[arg(long)]
    oracle: bool,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
    /// Repeat on this many randomly perturbed systems.
    #[arg(long, default_value_t = 0)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Summary,
}

#[derive(Clone, Copy, ValueEnum)]
enum PrimeCheck {
    Rosser,
    Interval,
    Paley,
}

#[derive(Subcommand)]
enum AnalysisCmd {
    CTable {
        #[arg(long)]
        max: usize,
        #[arg(short = 'o', long = "format", value_enum, default_value = "csv")]
        format: TableFormat,
    },
    Primes {
        #[arg(long, value_enum)]
        check: PrimeCheck,
        /// Inclusive range A:B.
        #[arg(long, value_parser = parse_range)]
        range: (u64, u64),
        /// Window exponent for the paley check; all of 1..=3 when omitted.
        #[arg(long)]
        r: Option<u32>,
    },
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s.split_once(':').ok_or("expected A:B")?;
    let a: u64 = a.trim().parse().map_err(|_| format!("bad start `{a}`"))?;
    let b: u64 = b.trim().parse().map_err(|_| format!("bad end `{b}`"))?;
    if a > b {
        return Err(format!("empty range {a}:{b}"));
    }
    Ok((a, b))
}

/// Failures map to exit codes: input problems give 1, failed checks give 2.
enum Failure {
    Input(String),
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn input(msg: impl Into<String>) -> Failure {
    Failure::Input(msg.into())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn in_file<T>(path: &Path, r: recoupler_core::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| input(format!("{}: {e}", path.display())))
}

fn registry(files: &[PathBuf]) -> Result<OrderRegistry, Failure> {
    let bound = match std::env::var(BOUND_VAR) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&b| b >= 2)
            .ok_or_else(|| input(format!("{BOUND_VAR}: expected an integer >= 2, got `{v}`")))?,
        Err(_) => DEFAULT_REGISTRY_BOUND,
    };
    let mut external = Vec::with_capacity(files.len());
    for f in files {
        let text = read(f)?;
        external.push(in_file(f, io::read_hadamard(&text, &f.display().to_string()))?);
    }
    Ok(OrderRegistry::with_external(bound, external))
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Hadamard(cmd) => hadamard(cmd, &cli.hadamard_files),
        Command::Compile(args) => compile_cmd(args, &cli.hadamard_files),
        Command::Verify(args) => verify_cmd(args),
        Command::Analysis(cmd) => analysis(cmd, &cli.hadamard_files),
    }
}

fn hadamard(cmd: HadamardCmd, files: &[PathBuf]) -> Outcome {
    match cmd {
        HadamardCmd::Gen {
            order,
            recipe,
            output,
        } => {
            let h = registry(files)?.build_with(order, recipe)?;
            let text = io::write_hadamard(&h);
            match output {
                Some(path) => write(&path, &text)?,
                None => print!("{text}"),
            }
            eprintln!("order {order} via {}", h.provenance());
        }
        HadamardCmd::Check { file } => {
            let text = read(&file)?;
            match io::read_hadamard(&text, &file.display().to_string()) {
                Ok(h) => println!("ok: Hadamard matrix of order {}", h.order()),
                Err(e @ Error::NotHadamard(..)) => {
                    println!("fail: {e}");
                    return Err(Failure::Check);
                }
                Err(e) => return Err(input(format!("{}: {e}", file.display()))),
            }
        }
        HadamardCmd::Nbar { n } => {
            let reg = registry(files)?;
            let n_bar = reg.n_bar(n)?;
            println!("n = {n}");
            println!("n_bar = {n_bar}");
            println!("n_under = {}", reg.n_under(n));
            println!("gap = {}", reg.gap(n)?);
            println!("c = {:.6}", reg.c(n)?);
            if let Some(r) = reg.recipe(n_bar) {
                println!("recipe = {r}");
            }
        }
    }
    Ok(())
}

fn purpose_for(args: &CompileArgs) -> Result<Purpose, Failure> {
    let pair = || match (args.i, args.j) {
        (Some(i), Some(j)) => Ok((i, j)),
        _ => Err(input("recouple needs --i and --j")),
    };
    Ok(match (args.op, args.knn) {
        (Op::Decouple, None) if args.zeeman_free => Purpose::DecoupleZeemanFree,
        (Op::Decouple, None) => Purpose::Decouple,
        (Op::Decouple, Some(k)) => {
            if args.zeeman_free {
                return Err(input("--zeeman-free is not available with --knn"));
            }
            Purpose::KnnDecouple { k }
        }
        (Op::Recouple, knn) => {
            if args.zeeman_free {
                return Err(input("--zeeman-free only applies to decouple"));
            }
            let (i, j) = pair()?;
            match knn {
                None => Purpose::Recouple { i, j },
                Some(k) => Purpose::KnnRecouple { k, i, j },
            }
        }
    })
}

fn compile_cmd(args: CompileArgs, files: &[PathBuf]) -> Outcome {
    let doc = in_file(&args.system, io::read_system(&read(&args.system)?))?;
    for w in doc.system.heteronuclear_warnings(DEFAULT_HETERONUCLEAR_RATIO) {
        eprintln!("warning: {w}");
    }
    let purpose = purpose_for(&args)?;
    let reg = registry(files)?;
    let compiled = compile(&doc.system, purpose, &reg, args.t)?;
    let p = &compiled.program;
    write(&args.output, &io::write_program(p))?;
    if let Some(path) = &args.sign_matrix {
        write(path, &io::write_sign_matrix(&compiled.sign_matrix))?;
    }
    eprintln!(
        "{}: n = {}, m = {}, {} pulses, t = {:.6e} s, total {:.6e} s",
        p.target(),
        p.n(),
        p.m(),
        p.pulse_count(),
        p.interval_duration(),
        p.total_duration()
    );
    if args.timeline {
        print!("{}", p.timeline());
    }
    Ok(())
}

fn verify_cmd(args: VerifyArgs) -> Outcome {
    let doc = in_file(&args.system, io::read_system(&read(&args.system)?))?;
    let program = in_file(&args.program, io::read_program(&read(&args.program)?))?;
    if program.n() != doc.system.n() {
        return Err(input(format!(
            "program is for {} spins but the system has {}",
            program.n(),
            doc.system.n()
        )));
    }
    let options = VerifyOptions {
        target: args.target,
        oracle: args.oracle,
        tolerance: args.tolerance,
        ..VerifyOptions::default()
    };
    let report = verify_program(&doc.system, &program, &options)?;
    print!("{report}");
    let mut passed = report.passed();
    if args.trials > 0 {
        let trials = random_trials(&doc.system, &program, &options, args.trials, args.seed)?;
        let failed: Vec<usize> = (0..trials.len()).filter(|&k| !trials[k].passed()).collect();
        println!();
        println!("[random_trials]");
        println!("seed = {}", args.seed);
        println!("trials = {}", trials.len());
        println!("failed = {}", failed.len());
        if let Some(worst) = trials
            .iter()
            .filter_map(|r| r.oracle.as_ref())
            .map(|o| o.coupling_phase_dev.max(o.zeeman_phase_dev))
            .max_by(f64::total_cmp)
        {
            println!("worst_oracle_dev_rad = {worst:.6e}");
        }
        passed &= failed.is_empty();
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn analysis(cmd: AnalysisCmd, files: &[PathBuf]) -> Outcome {
    match cmd {
        AnalysisCmd::CTable { max, format } => {
            let reg = registry(files)?;
            let rows = c_table(max, &reg)?;
            match format {
                TableFormat::Csv => print!("{}", c_table_csv(&rows)),
                TableFormat::Summary => {
                    let s = summarize(&rows);
                    println!("max_n = {}", s.max_n);
                    println!("max_c = {:.6} at n = {}", s.max_c, s.argmax_c);
                    println!("median_c = {:.6}", s.median_c);
                    println!("count_c_above_1.1 = {}", s.above_1_1);
                    if let Some(c) = s.max_c_above_100 {
                        println!("max_c_for_n_above_100 = {c:.6}");
                    }
                    for (limit, unknown, gap) in LITERATURE_COVERAGE {
                        if limit <= max {
                            let ours = coverage(limit, &reg)?;
                            println!(
                                "coverage_{limit}: registry misses {} multiples of 4 (max gap {}); literature: {unknown} unknown (max gap {gap})",
                                ours.missing.len(),
                                ours.max_gap
                            );
                        }
                    }
                }
            }
            Ok(())
        }
        AnalysisCmd::Primes { check, range, r } => primes(check, range, r, files),
    }
}

fn primes(check: PrimeCheck, (lo, hi): (u64, u64), r: Option<u32>, files: &[PathBuf]) -> Outcome {
    let ok = match check {
        PrimeCheck::Rosser => {
            let scan = rosser_scan(lo..=hi, &Sieve::new(hi))?;
            println!("checked = {}", scan.checked);
            println!("skipped_below_domain = {}", scan.skipped);
            println!("lower_failures = {}", list(&scan.lower_failures));
            println!("upper_failures = {}", list(&scan.upper_failures));
            scan.all_hold()
        }
        PrimeCheck::Interval => {
            let lo = lo.max(2);
            let limit = (hi as f64 * (1.0 + epsilon_for(lo))).ceil() as u64;
            let sieve = Sieve::new(limit);
            let mut missing = Vec::new();
            for n in lo..=hi {
                if prime_in_interval(n, epsilon_for(n), &sieve)?.is_none() {
                    missing.push(n);
                }
            }
            println!("checked = {}", (lo..=hi).count());
            println!("without_prime = {}", list(&missing));
            missing.is_empty()
        }
        PrimeCheck::Paley => {
            let lo = lo.max(3);
            let rs: Vec<u32> = match r {
                Some(0) => return Err(input("--r must be at least 1")),
                Some(r) => vec![r],
                None => vec![1, 2, 3],
            };
            let r_max = *rs.iter().max().unwrap_or(&1);
            let limit = (hi as f64 * (1.0 + epsilon_for(lo)).powi(r_max as i32)).ceil() as u64 + 1;
            let sieve = Sieve::new(limit);
            let reg = registry(files)?;
            let mut ok = true;
            for r in rs {
                let scan = paley_reachability_scan(lo..=hi, r, &sieve, &reg)?;
                let holds = scan.fraction() >= scan.expected_min() && scan.bound_failures == 0;
                println!(
                    "r = {r}: fraction_with_3mod4 = {:.6} (expected >= {:.6}), short_windows = {}, bound_failures = {}, {}",
                    scan.fraction(),
                    scan.expected_min(),
                    scan.short_windows,
                    scan.bound_failures,
                    if holds { "pass" } else { "fail" }
                );
                ok &= holds;
            }
            ok
        }
    };
    println!("verdict = {}", if ok { "pass" } else { "fail" });
    if ok {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn list(xs: &[u64]) -> String {
    const SHOWN: usize = 20;
    let head: Vec<String> = xs.iter().take(SHOWN).map(u64::to_string).collect();
    let more = if xs.len() > SHOWN {
        format!(" ... ({} total)", xs.len())
    } else {
        String::new()
    };
    format!("[{}]{more}", head.join(", "))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(2),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
