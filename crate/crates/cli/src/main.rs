//! Command-line front end: analyze presentations, compute element orders in
//! finite quotients, and verify the Euler identity on the orbihedral cover.
//!
//! Exit codes: 0 success, 1 violation or refuted order hypothesis (including
//! a failed Euler identity), 2 inconclusive (enumeration capped with nothing
//! certified), 3 parse or input error.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use orbicert::certify::{
    apply_theorems, verify_orders, Certificate, Conclusion, GroupSize, OrderStatus, WitnessQuotient,
};
use orbicert::complex::{approx_decimal, euler_identity_check, BuildError, EulerReport};
use orbicert::coset::{enumerate, CosetTable, Enumeration, EnumerationLimits, Strategy};
use orbicert::presentation::{parse_presentation, parse_word, Presentation};

use report::{CosetStats, Report, TableDump, Timings};

const EXIT_VIOLATION: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_PARSE: u8 = 3;

#[derive(Parser)]
#[command(name = "orbicert", version, about = "Exact certificates for group presentations with relator orders")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Hlt,
    Felsch,
}

#[derive(Args)]
struct CommonOpts {
    /// Abort enumeration after defining this many cosets
    #[arg(long, default_value_t = 1_000_000)]
    max_cosets: usize,
    /// Coset enumeration strategy
    #[arg(long, value_enum, default_value_t = StrategyArg::Hlt)]
    strategy: StrategyArg,
    /// Refuse to build complexes above this many total cells
    #[arg(long, default_value_t = 200_000)]
    max_cells: usize,
    /// Zero out timings for byte-stable output
    #[arg(long)]
    deterministic: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Parse, enumerate, verify relator orders and emit a certificate
    Analyze {
        /// Presentation file, e.g. `< x, y | x^2, y^3, (x*y)^5 >`
        file: PathBuf,
        /// Also verify the Euler identity (needs a closed table)
        #[arg(long)]
        euler: bool,
        /// Write the JSON report here
        #[arg(long)]
        json: Option<PathBuf>,
        /// Permutation witness file certifying relator orders
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Skip coset enumeration entirely
        #[arg(long)]
        no_enum: bool,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Print the order of a word in the presented (finite) group
    Order {
        file: PathBuf,
        /// Word over the presentation's generators, e.g. `x*y^-1`
        word: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Print Betti numbers and both sides of the Euler identity
    Euler {
        file: PathBuf,
        /// Write the JSON report here
        #[arg(long)]
        json: Option<PathBuf>,
        #[command(flatten)]
        common: CommonOpts,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Analyze { file, euler, json, witness, no_enum, common } => {
            run_analyze(&file, euler, json.as_deref(), witness.as_deref(), no_enum, &common)
        }
        Command::Order { file, word, common } => run_order(&file, &word, &common),
        Command::Euler { file, json, common } => run_euler(&file, json.as_deref(), &common),
    };
    ExitCode::from(code)
}

/// Render build errors with 1-based relator numbers, matching the verdict
/// lines.
fn describe_build_error(e: &BuildError) -> String {
    match e {
        BuildError::OrderMismatch { relator, actual, declared } => format!(
            "relator {} has order {actual} instead of the declared {declared}",
            relator + 1
        ),
        other => other.to_string(),
    }
}

fn limits(common: &CommonOpts) -> EnumerationLimits {
    EnumerationLimits {
        max_cosets: common.max_cosets,
        strategy: match common.strategy {
            StrategyArg::Hlt => Strategy::Hlt,
            StrategyArg::Felsch => Strategy::Felsch,
        },
    }
}

fn load_presentation(path: &Path) -> Result<(String, Presentation), u8> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return Err(EXIT_PARSE);
        }
    };
    match parse_presentation(&text) {
        Ok(p) => Ok((text, p)),
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            Err(EXIT_PARSE)
        }
    }
}

fn warn_proper_powers(p: &Presentation) {
    for i in p.proper_power_relators() {
        eprintln!(
            "warning: relator {} base `{}` is a proper power in the free group; \
             the declared exponent {} is taken as given",
            i + 1,
            p.word_string(&p.relators()[i].base),
            p.relators()[i].exponent
        );
    }
}

struct EnumOutcome {
    table: Option<CosetTable>,
    stats: CosetStats,
}

fn run_enumeration(p: &Presentation, common: &CommonOpts) -> EnumOutcome {
    match enumerate(p, &limits(common)) {
        Ok(Enumeration { table, cosets_defined, max_live }) => EnumOutcome {
            stats: CosetStats { cosets_defined, max_live, closed: true },
            table: Some(table),
        },
        Err(nt) => EnumOutcome {
            stats: CosetStats {
                cosets_defined: nt.cosets_defined,
                max_live: nt.live_at_abort,
                closed: false,
            },
            table: None,
        },
    }
}

fn print_certificate(p: &Presentation, cert: &Certificate, stats: &CosetStats) {
    println!("presentation: {}", cert.presentation);
    println!("generators: {}   relators: {}", cert.generator_count, cert.relator_count);
    println!(
        "sum 1/m_i = {}   chi_orb = {} (approx {})",
        cert.sum_inv_m,
        cert.chi_orb,
        approx_decimal(&cert.chi_orb, 6)
    );
    match cert.group_size {
        GroupSize::Finite(n) => println!(
            "enumeration: closed, |G| = {n} (defined {}, max live {})",
            stats.cosets_defined, stats.max_live
        ),
        GroupSize::Unknown => {
            if stats.cosets_defined > 0 {
                println!(
                    "enumeration: inconclusive after {} cosets (cap hit)",
                    stats.cosets_defined
                );
            } else {
                println!("enumeration: skipped");
            }
        }
    }
    for v in &cert.order_verdicts {
        let base = p.word_string(&p.relators()[v.relator].base);
        let line = match &v.status {
            OrderStatus::Verified => format!(
                "VERIFIED via {}",
                v.method.map(|m| m.to_string()).unwrap_or_default()
            ),
            OrderStatus::Refuted { actual } => format!("REFUTED: actual order {actual}"),
            OrderStatus::Inconclusive => "INCONCLUSIVE".to_string(),
        };
        println!("relator {}: ({})^{} — {}", v.relator + 1, base, v.claimed, line);
    }
    if cert.conclusions.is_empty() {
        println!("conclusions: none (nothing certified)");
    } else {
        println!("conclusions:");
        for c in &cert.conclusions {
            match c {
                Conclusion::FiniteBoundOk { bound } => {
                    println!("  FINITE_BOUND_OK: |G| >= {bound} = ceil(1/chi_orb)")
                }
                Conclusion::Infinite => println!("  INFINITE: chi_orb <= 0 with verified orders"),
                Conclusion::NotKazhdanT => println!("  NOT_KAZHDAN_T"),
                Conclusion::NoInfiniteAmenableNormal => println!("  NO_INFINITE_AMENABLE_NORMAL"),
                Conclusion::Betti1LowerBound(q) => println!("  BETTI1_LOWER_BOUND: {q}"),
                Conclusion::HypothesisUnverified => println!("  HYPOTHESIS_UNVERIFIED"),
                Conclusion::Violation(d) => println!("  VIOLATION: {d}"),
            }
        }
    }
    if cert.abelian_rank > 0 {
        println!(
            "cross-check (not from the certificate logic): abelianization has rank {}, so the group is infinite",
            cert.abelian_rank
        );
    }
}

fn print_euler(r: &EulerReport) {
    println!(
        "euler: b = ({}, {}, {}), |G| = {}",
        r.betti.0, r.betti.1, r.betti.2, r.group_order
    );
    println!(
        "euler: (b0 - b1 + b2)/|G| = {} vs chi_orb = {} (approx {}) -> {}",
        r.lhs,
        r.chi_orb,
        approx_decimal(&r.chi_orb, 6),
        if r.identity_holds { "identity holds" } else { "IDENTITY FAILS" }
    );
    println!("euler: predicted b2 = |G|*chi_orb - 1 = {}", r.b2_predicted);
}

#[allow(clippy::too_many_arguments)]
fn write_json(
    path: &Path,
    input_path: &Path,
    text: &str,
    p: &Presentation,
    cert: &Certificate,
    stats: &CosetStats,
    table: Option<&CosetTable>,
    euler: Option<&EulerReport>,
    timings: Timings,
) -> Result<(), u8> {
    let report = Report {
        version: env!("CARGO_PKG_VERSION").to_string(),
        input: report::InputEcho {
            path: input_path.display().to_string(),
            text: text.to_string(),
        },
        certificate: report::certificate_dto(p, cert),
        coset_stats: CosetStats { ..*stats },
        coset_table: table.map(|t| {
            let std = t.standardize();
            TableDump { size: std.size(), action: std.rows() }
        }),
        euler: euler.map(report::euler_dto),
        timings,
    };
    let body = serde_json::to_string_pretty(&report).expect("report serializes");
    fs::write(path, body + "\n").map_err(|e| {
        eprintln!("error: cannot write {}: {e}", path.display());
        EXIT_PARSE
    })
}

fn analyze_exit_code(cert: &Certificate, euler_failed: bool) -> u8 {
    let refuted = cert
        .order_verdicts
        .iter()
        .any(|v| matches!(v.status, OrderStatus::Refuted { .. }));
    let violation = cert
        .conclusions
        .iter()
        .any(|c| matches!(c, Conclusion::Violation(_)));
    if refuted || violation || euler_failed {
        return EXIT_VIOLATION;
    }
    let certified = cert
        .conclusions
        .iter()
        .any(|c| !matches!(c, Conclusion::HypothesisUnverified));
    if certified {
        0
    } else {
        EXIT_INCONCLUSIVE
    }
}

fn run_analyze(
    file: &Path,
    euler: bool,
    json: Option<&Path>,
    witness_path: Option<&Path>,
    no_enum: bool,
    common: &CommonOpts,
) -> u8 {
    let started = Instant::now();
    let t0 = Instant::now();
    let (text, p) = match load_presentation(file) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let parse_ms = t0.elapsed().as_millis() as u64;
    warn_proper_powers(&p);

    let witness = match witness_path {
        None => None,
        Some(path) => {
            let text = match fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", path.display());
                    return EXIT_PARSE;
                }
            };
            match WitnessQuotient::parse(&text, &p) {
                Ok(w) => Some(w),
                Err(e) => {
                    eprintln!("error: {}: {e}", path.display());
                    return EXIT_PARSE;
                }
            }
        }
    };

    let t0 = Instant::now();
    let outcome = if no_enum {
        EnumOutcome {
            table: None,
            stats: CosetStats { cosets_defined: 0, max_live: 0, closed: false },
        }
    } else {
        run_enumeration(&p, common)
    };
    let enumerate_ms = t0.elapsed().as_millis() as u64;

    let t0 = Instant::now();
    let verdicts = match verify_orders(&p, outcome.table.as_ref(), witness.as_ref()) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_PARSE;
        }
    };
    let size = match &outcome.table {
        Some(t) => GroupSize::Finite(t.size()),
        None => GroupSize::Unknown,
    };
    let mut cert = apply_theorems(&p, verdicts, size);
    let verify_ms = t0.elapsed().as_millis() as u64;

    let t0 = Instant::now();
    let mut euler_failed = false;
    if euler {
        match &outcome.table {
            Some(table) => match euler_identity_check(&p, table, common.max_cells) {
                Ok(report) => {
                    euler_failed = !report.identity_holds;
                    cert.euler = Some(report);
                }
                Err(e @ BuildError::OrderMismatch { .. }) => {
                    eprintln!("euler: {}", describe_build_error(&e));
                    euler_failed = true;
                }
                Err(e @ BuildError::CellLimitExceeded { .. }) => {
                    eprintln!("euler: {e}");
                }
            },
            None => eprintln!("euler: skipped, no closed coset table"),
        }
    }
    let euler_ms = t0.elapsed().as_millis() as u64;

    print_certificate(&p, &cert, &outcome.stats);
    if let Some(r) = &cert.euler {
        print_euler(r);
    }

    if let Some(json_path) = json {
        let timings = if common.deterministic {
            Timings::zeroed()
        } else {
            Timings {
                parse_ms,
                enumerate_ms,
                verify_ms,
                euler_ms,
                total_ms: started.elapsed().as_millis() as u64,
            }
        };
        if let Err(code) = write_json(
            json_path,
            file,
            &text,
            &p,
            &cert,
            &outcome.stats,
            outcome.table.as_ref(),
            cert.euler.as_ref(),
            timings,
        ) {
            return code;
        }
    }
    analyze_exit_code(&cert, euler_failed)
}

fn run_order(file: &Path, word_text: &str, common: &CommonOpts) -> u8 {
    let (_, p) = match load_presentation(file) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let word = match parse_word(word_text, &p) {
        Ok(w) => w,
        Err(e) => {
            eprintln!("error: word `{word_text}`: {e}");
            return EXIT_PARSE;
        }
    };
    match enumerate(&p, &limits(common)) {
        Ok(e) => {
            println!("{}", e.table.element_order(&word));
            0
        }
        Err(nt) => {
            eprintln!("error: {nt}");
            EXIT_INCONCLUSIVE
        }
    }
}

fn run_euler(file: &Path, json: Option<&Path>, common: &CommonOpts) -> u8 {
    let started = Instant::now();
    let t0 = Instant::now();
    let (text, p) = match load_presentation(file) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let parse_ms = t0.elapsed().as_millis() as u64;
    warn_proper_powers(&p);

    let t0 = Instant::now();
    let outcome = run_enumeration(&p, common);
    let enumerate_ms = t0.elapsed().as_millis() as u64;
    let Some(table) = &outcome.table else {
        eprintln!(
            "error: enumeration did not close within {} cosets; the Euler check needs a finite group",
            outcome.stats.cosets_defined
        );
        return EXIT_INCONCLUSIVE;
    };

    let t0 = Instant::now();
    let verdicts = verify_orders(&p, Some(table), None).expect("no witness involved");
    let mut cert = apply_theorems(&p, verdicts, GroupSize::Finite(table.size()));
    let verify_ms = t0.elapsed().as_millis() as u64;

    let t0 = Instant::now();
    let result = euler_identity_check(&p, table, common.max_cells);
    let euler_ms = t0.elapsed().as_millis() as u64;
    let (code, euler_report) = match result {
        Ok(report) => {
            print_euler(&report);
            let code = if report.identity_holds { 0 } else { EXIT_VIOLATION };
            (code, Some(report))
        }
        Err(e @ BuildError::OrderMismatch { .. }) => {
            eprintln!("error: {}", describe_build_error(&e));
            (EXIT_VIOLATION, None)
        }
        Err(e @ BuildError::CellLimitExceeded { .. }) => {
            eprintln!("error: {e}");
            (EXIT_INCONCLUSIVE, None)
        }
    };
    cert.euler = euler_report;

    if let Some(json_path) = json {
        let timings = if common.deterministic {
            Timings::zeroed()
        } else {
            Timings {
                parse_ms,
                enumerate_ms,
                verify_ms,
                euler_ms,
                total_ms: started.elapsed().as_millis() as u64,
            }
        };
        if let Err(write_code) = write_json(
            json_path,
            file,
            &text,
            &p,
            &cert,
            &outcome.stats,
            outcome.table.as_ref(),
            cert.euler.as_ref(),
            timings,
        ) {
            return write_code;
        }
    }
    code
}
