//! Batch front door over space documents: classify, census, soberify,
//! stoneify, monad-laws, limit-check.
//!
//! Exit codes: 0 all checks passed, 1 a mathematical check failed (a
//! disproof; should never happen), 2 usage or parse error, 3 budget or cap
//! exceeded. Timings go to the log stream (stderr, RUST_LOG=info), never
//! into the deterministic output.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use fintop::census::{run_census, CensusError, CensusOptions};
use fintop::classify::{classify, Classification};
use fintop::codensity::{
    stabilization_scan, CodensityError, GeneratorKind, LimitReport, DEFAULT_OBJECT_BUDGET,
};
use fintop::doc::{DocError, SpaceDocument};
use fintop::laws::{default_probe_panel, verify_monad_laws, LawReport, SoberMonad, StoneMonad};
use fintop::sober::fpo_object;
use fintop::space::FiniteSpace;
use fintop::stone::sc_object;

#[derive(Parser)]
#[command(name = "fintop", version, about = "Finite-space monad toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Text,
    Machine,
}

#[derive(Clone, Copy, ValueEnum)]
enum Generator {
    Finset,
    Sierpinski,
}

impl Generator {
    fn kind(self) -> GeneratorKind {
        match self {
            Generator::Finset => GeneratorKind::FinSet,
            Generator::Sierpinski => GeneratorKind::Sierpinski,
        }
    }
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum MonadChoice {
    Stone,
    Sober,
    #[default]
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a space and report the carriers of both monads.
    Classify {
        /// Space document file.
        file: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Enumerate every labeled topology on n points; always emits CSV.
    Census {
        /// Number of points.
        n: usize,
        /// Largest n the census will attempt.
        #[arg(long, default_value_t = 4)]
        cap: usize,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
        /// Run a limit comparison per row with this generator family.
        #[arg(long, value_enum)]
        generator: Option<Generator>,
        /// Bound for the per-row comparison; repeatable.
        #[arg(long = "bound", requires = "generator")]
        bounds: Vec<usize>,
    },
    /// Compute the filter-point carrier and the unit map into it.
    Soberify {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Compute the ultrafilter carrier and the unit map into it.
    Stoneify {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Check unit, multiplication, and naturality laws at the given space.
    MonadLaws {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        monad: MonadChoice,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Compare the monad carrier against truncated limits across bounds.
    LimitCheck {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Generator::Finset)]
        generator: Generator,
        /// Diagram bound; repeatable. Defaults to 1..=3 (finset) or
        /// 0..=2 (sierpinski).
        #[arg(long = "bound")]
        bounds: Vec<usize>,
        /// Cap on comma-diagram objects before giving up.
        #[arg(long, default_value_t = DEFAULT_OBJECT_BUDGET)]
        budget: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

enum Failure {
    Usage(String),
    Budget(String),
}

impl Failure {
    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Budget(m) => m,
        }
    }

    fn code(&self) -> ExitCode {
        match self {
            Failure::Usage(_) => ExitCode::from(2),
            Failure::Budget(_) => ExitCode::from(3),
        }
    }
}

impl From<DocError> for Failure {
    fn from(e: DocError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<CensusError> for Failure {
    fn from(e: CensusError) -> Self {
        match e {
            CensusError::CapExceeded { .. } => Failure::Budget(e.to_string()),
            CensusError::Codensity(inner) => inner.into(),
        }
    }
}

impl From<CodensityError> for Failure {
    fn from(e: CodensityError) -> Self {
        match e {
            CodensityError::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message());
            f.code()
        }
    }
}

fn read_document(path: &PathBuf) -> Result<(SpaceDocument, FiniteSpace), Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let doc = SpaceDocument::from_json(&text)?;
    let space = doc.to_space()?;
    Ok((doc, space))
}

fn validate_bounds(kind: GeneratorKind, bounds: &[usize]) -> Result<(), Failure> {
    let ok = match kind {
        GeneratorKind::FinSet => 1..=6,
        GeneratorKind::Sierpinski => 0..=5,
    };
    for &b in bounds {
        if !ok.contains(&b) {
            return Err(Failure::Usage(format!(
                "bound {b} out of range {}..={} for the {} family",
                ok.start(),
                ok.end(),
                kind.label()
            )));
        }
    }
    Ok(())
}

fn run(command: Command) -> Result<ExitCode, Failure> {
    match command {
        Command::Classify { file, format } => cmd_classify(&file, format),
        Command::Census { n, cap, jobs, generator, bounds } => {
            cmd_census(n, cap, jobs, generator, &bounds)
        }
        Command::Soberify { file, format } => cmd_reflect(&file, format, Reflection::Sober),
        Command::Stoneify { file, format } => cmd_reflect(&file, format, Reflection::Stone),
        Command::MonadLaws { file, monad, format } => cmd_monad_laws(&file, monad, format),
        Command::LimitCheck { file, generator, bounds, budget, format } => {
            cmd_limit_check(&file, generator.kind(), &bounds, budget, format)
        }
    }
}

#[derive(Serialize)]
struct ClassifyReport {
    document: String,
    points: usize,
    opens: usize,
    #[serde(flatten)]
    classification: Classification,
    sc_points: usize,
    fpo_points: usize,
}

fn cmd_classify(file: &PathBuf, format: Format) -> Result<ExitCode, Failure> {
    let (doc, x) = read_document(file)?;
    let report = ClassifyReport {
        document: SpaceDocument::canonicalize(&doc.name, &x),
        points: x.point_count(),
        opens: x.open_count(),
        classification: classify(&x),
        sc_points: sc_object(&x).carrier.point_count(),
        fpo_points: fpo_object(&x).carrier.point_count(),
    };
    match format {
        Format::Machine => println!("{}", serde_json::to_string(&report).unwrap()),
        Format::Text => {
            println!("document: {}", report.document);
            println!("points: {}", report.points);
            println!("opens: {}", report.opens);
            println!("is_t0: {}", report.classification.is_t0);
            println!("is_discrete: {}", report.classification.is_discrete);
            println!("is_sober: {}", report.classification.is_sober);
            println!("is_stone: {}", report.classification.is_stone);
            println!("sc_points: {}", report.sc_points);
            println!("fpo_points: {}", report.fpo_points);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_census(
    n: usize,
    cap: usize,
    jobs: Option<usize>,
    generator: Option<Generator>,
    bounds: &[usize],
) -> Result<ExitCode, Failure> {
    let mut limit_checks = Vec::new();
    if let Some(g) = generator {
        let kind = g.kind();
        let chosen: Vec<usize> = if bounds.is_empty() {
            match kind {
                GeneratorKind::FinSet => vec![3],
                GeneratorKind::Sierpinski => vec![2],
            }
        } else {
            bounds.to_vec()
        };
        validate_bounds(kind, &chosen)?;
        limit_checks.extend(chosen.into_iter().map(|b| (kind, b)));
    }
    let opts = CensusOptions { cap, jobs, limit_checks: limit_checks.clone(), ..Default::default() };
    let rows = run_census(n, &opts)?;

    let mut header = vec![
        "points".to_string(),
        "open_count".to_string(),
        "opens".to_string(),
        "is_t0".to_string(),
        "is_discrete".to_string(),
        "is_sober".to_string(),
        "is_stone".to_string(),
        "quasi_component_count".to_string(),
        "sc_points".to_string(),
        "fpo_points".to_string(),
        "laws_ok".to_string(),
    ];
    for (kind, bound) in &limit_checks {
        header.push(format!("{}_bound{}_iso", kind.label(), bound));
    }

    let mut writer = csv::Writer::from_writer(std::io::stdout());
    writer.write_record(&header).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut all_laws_ok = true;
    for row in &rows {
        all_laws_ok &= row.laws_ok;
        let opens = row
            .opens
            .iter()
            .map(|open| {
                let inner: Vec<String> = open.iter().map(|p| p.to_string()).collect();
                format!("[{}]", inner.join(" "))
            })
            .collect::<Vec<_>>()
            .join("|");
        let mut record = vec![
            row.points.to_string(),
            row.open_count.to_string(),
            opens,
            row.classification.is_t0.to_string(),
            row.classification.is_discrete.to_string(),
            row.classification.is_sober.to_string(),
            row.classification.is_stone.to_string(),
            row.quasi_component_count.to_string(),
            row.sc_points.to_string(),
            row.fpo_points.to_string(),
            row.laws_ok.to_string(),
        ];
        for check in &row.limit_checks {
            record.push(check.is_iso.to_string());
        }
        writer.write_record(&record).map_err(|e| Failure::Usage(e.to_string()))?;
    }
    writer.flush().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(if all_laws_ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

enum Reflection {
    Sober,
    Stone,
}

#[derive(Serialize)]
struct ReflectionReport {
    carrier: String,
    unit: Vec<usize>,
}

fn cmd_reflect(file: &PathBuf, format: Format, which: Reflection) -> Result<ExitCode, Failure> {
    let (doc, x) = read_document(file)?;
    let (carrier, unit) = match which {
        Reflection::Sober => {
            let t = fpo_object(&x);
            (t.carrier, t.unit)
        }
        Reflection::Stone => {
            let t = sc_object(&x);
            (t.carrier, t.unit)
        }
    };
    let report = ReflectionReport {
        carrier: SpaceDocument::canonicalize(&doc.name, &carrier),
        unit: unit.mapping().to_vec(),
    };
    match format {
        Format::Machine => println!("{}", serde_json::to_string(&report).unwrap()),
        Format::Text => {
            println!("carrier: {}", report.carrier);
            for (p, q) in report.unit.iter().enumerate() {
                println!("unit: {p} -> {q}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_monad_laws(file: &PathBuf, monad: MonadChoice, format: Format) -> Result<ExitCode, Failure> {
    let (_, x) = read_document(file)?;
    let probes = default_probe_panel();
    let mut reports: Vec<LawReport> = Vec::new();
    if matches!(monad, MonadChoice::Stone | MonadChoice::Both) {
        reports.push(verify_monad_laws(&StoneMonad, &x, &probes));
    }
    if matches!(monad, MonadChoice::Sober | MonadChoice::Both) {
        reports.push(verify_monad_laws(&SoberMonad, &x, &probes));
    }
    let all_ok = reports.iter().all(|r| r.all_passed());
    match format {
        Format::Machine => println!("{}", serde_json::to_string(&reports).unwrap()),
        Format::Text => {
            for report in &reports {
                let passed = report.checks.iter().filter(|c| c.passed).count();
                println!(
                    "{} on {}: {passed}/{} checks passed",
                    report.monad,
                    report.space,
                    report.checks.len()
                );
                for check in report.checks.iter().filter(|c| !c.passed) {
                    println!("FAIL {}: {}", check.law, check.detail);
                }
            }
        }
    }
    Ok(if all_ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn cmd_limit_check(
    file: &PathBuf,
    kind: GeneratorKind,
    bounds: &[usize],
    budget: usize,
    format: Format,
) -> Result<ExitCode, Failure> {
    let (_, x) = read_document(file)?;
    let chosen: Vec<usize> = if bounds.is_empty() {
        match kind {
            GeneratorKind::FinSet => (1..=3).collect(),
            GeneratorKind::Sierpinski => (0..=2).collect(),
        }
    } else {
        bounds.to_vec()
    };
    validate_bounds(kind, &chosen)?;
    let report: LimitReport = stabilization_scan(&x, kind, &chosen, budget)?;
    match format {
        Format::Machine => println!("{}", serde_json::to_string(&report).unwrap()),
        Format::Text => {
            println!("generator: {}", report.generator);
            println!("apex_points: {}", report.apex_points);
            println!("monad_points: {}", report.monad_points);
            for row in &report.rows {
                println!(
                    "bound {}: objects {}, arrows {}, limit_points {}, iso {}",
                    row.bound, row.objects, row.arrows, row.limit_points, row.is_iso
                );
            }
            match report.first_iso_bound {
                Some(b) => println!("first_iso_bound: {b}"),
                None => println!("first_iso_bound: none"),
            }
            println!("stable_after_first: {}", report.stable_after_first);
        }
    }
    // A comparison that becomes an iso and then stops being one would
    // contradict the stabilization argument; that is the only disproof this
    // command can detect.
    let disproof = report.first_iso_bound.is_some() && !report.stable_after_first;
    Ok(if disproof { ExitCode::FAILURE } else { ExitCode::SUCCESS })
}
