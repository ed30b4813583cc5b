mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use graphjac::graph::{Graph, GraphSpec, Modulus};
use graphjac::morphisms::GraphMorphism;
use graphjac::random::{random_covers, random_instances, RandomConfig, MAX_VERTICES};
use graphjac::report::CheckReport;
use graphjac::suites::{group_records, run_functoriality, run_suite, Suite};
use graphjac::Error;
use rayon::prelude::*;

use report::{Instance, Report, Verdict};

#[derive(Parser)]
#[command(
    name = "graphjac",
    version,
    about = "Jacobians, ray class and Picard groups of graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Print the JSON report instead of text.
    #[arg(long)]
    json: bool,
    /// List every check, not only failures.
    #[arg(long, short)]
    verbose: bool,
    /// Print elapsed wall time to stderr.
    #[arg(long)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Print the class groups, Jacobians and Picard groups of a graph.
    Groups {
        input: PathBuf,
        /// Comma-separated modulus points; repetition allowed.
        #[arg(long)]
        modulus: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Run a verification suite on a graph (or a morphism).
    Verify {
        input: PathBuf,
        /// Morphism JSON, required by the functoriality suite.
        morphism: Option<PathBuf>,
        #[arg(long, value_parser = parse_suite)]
        suite: Suite,
        #[arg(long)]
        modulus: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Run a suite on seeded random instances.
    Random {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "max-v", default_value_t = 6,
              value_parser = clap::value_parser!(u64).range(1..=MAX_VERTICES as u64))]
        max_v: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, value_parser = parse_suite)]
        suite: Suite,
        /// Directory for the failing-instance dump.
        #[arg(long, default_value = ".")]
        dump_dir: PathBuf,
        #[command(flatten)]
        out: Output,
    },
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Input(String),
    Disconnected,
    Violation,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotConnected => Failure::Disconnected,
            Error::TheoremViolation { check, witness } => {
                eprintln!("violation in {check}: {witness}");
                Failure::Violation
            }
            other => Failure::Input(other.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path, modulus: Option<&str>) -> Result<(Graph, Option<Modulus>), Failure> {
    let (g, embedded) = GraphSpec::from_json(&read(path)?)?.build()?;
    let m = match modulus {
        Some(list) => {
            let points: Vec<&str> = list.split(',').map(str::trim).collect();
            Some(Modulus::new(&g, &points)?)
        }
        None => embedded,
    };
    Ok((g, m))
}

fn verdict(suite: Suite, instance: Option<Instance>, checks: CheckReport) -> Verdict {
    Verdict {
        suite: suite.name().to_string(),
        instance,
        passed: checks.passed(),
        checks,
    }
}

fn emit(report: &Report, out: &Output, started: Instant) {
    if out.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text(out.verbose));
    }
    if out.timing {
        eprintln!("elapsed: {:.3}s", started.elapsed().as_secs_f64());
    }
}

fn dump_failures(report: &Report) {
    for v in report.verdicts.iter().filter(|v| !v.passed) {
        for c in v.checks.failures() {
            eprintln!(
                "witness {}: {}",
                c.name,
                c.detail.as_deref().unwrap_or("(none)")
            );
        }
    }
}

fn groups(
    input: &Path,
    modulus: Option<&str>,
    out: &Output,
    argv: Vec<String>,
) -> Result<(), Failure> {
    let started = Instant::now();
    let (g, m) = load_graph(input, modulus)?;
    let mut report = Report::new(argv);
    report.groups = group_records(&g, m.as_ref())?;
    emit(&report, out, started);
    Ok(())
}

fn verify(
    input: &Path,
    morphism: Option<&Path>,
    suite: Suite,
    modulus: Option<&str>,
    out: &Output,
    argv: Vec<String>,
) -> Result<(), Failure> {
    let started = Instant::now();
    let (g, m) = load_graph(input, modulus)?;
    let checks = if suite == Suite::Functoriality {
        let path = morphism
            .ok_or_else(|| Failure::Input("suite `functoriality` needs a morphism file".into()))?;
        let (f, m2) = GraphMorphism::from_json(&g, &read(path)?)?;
        run_functoriality(&f, m.as_ref(), m2.as_ref())?
    } else {
        run_suite(suite, &g, m.as_ref())?
    };
    let mut report = Report::new(argv);
    report.push(verdict(suite, None, checks));
    emit(&report, out, started);
    if report.passed {
        Ok(())
    } else {
        dump_failures(&report);
        Err(Failure::Violation)
    }
}

/// One sign must serve every instance that determines it.
fn global_sign(report: &Report) -> CheckReport {
    let mut signs: Vec<&str> = report
        .verdicts
        .iter()
        .filter_map(|v| v.checks.get("ext.sign").and_then(|c| c.detail.as_deref()))
        .filter(|d| *d == "1" || *d == "-1")
        .collect();
    signs.sort_unstable();
    signs.dedup();
    let mut r = CheckReport::new();
    match signs.as_slice() {
        [] => r.skip("global_sign", "no instance determines the sign"),
        [s] => r.note("global_sign", *s),
        _ => r.fail("global_sign", format!("signs {signs:?} across instances")),
    }
    r
}

struct RandomArgs<'a> {
    seed: u64,
    max_v: usize,
    count: usize,
    suite: Suite,
    dump_dir: &'a Path,
}

fn random(args: RandomArgs<'_>, out: &Output, argv: Vec<String>) -> Result<(), Failure> {
    let started = Instant::now();
    let config = RandomConfig::with_max_vertices(args.max_v)?;
    let suite = args.suite;
    let results: Vec<Result<Verdict, Error>> = if suite == Suite::Functoriality {
        random_covers(args.seed, args.count, &config)?
            .into_par_iter()
            .map(|c| {
                let checks = run_functoriality(
                    &c.morphism,
                    Some(&c.source_modulus),
                    Some(&c.target_modulus),
                )?;
                let instance = Instance {
                    index: c.index,
                    graph: GraphSpec::from_graph(c.morphism.source(), Some(&c.source_modulus)),
                    morphism: Some(c.morphism.to_spec(Some(&c.target_modulus))),
                };
                Ok(verdict(suite, Some(instance), checks))
            })
            .collect()
    } else {
        random_instances(args.seed, args.count, &config)?
            .into_par_iter()
            .map(|inst| {
                let checks = run_suite(suite, &inst.graph, Some(&inst.modulus))?;
                let instance = Instance {
                    index: inst.index,
                    graph: GraphSpec::from_graph(&inst.graph, Some(&inst.modulus)),
                    morphism: None,
                };
                Ok(verdict(suite, Some(instance), checks))
            })
            .collect()
    };
    let mut report = Report::new(argv);
    for r in results {
        report.push(r?);
    }
    if suite == Suite::ExtDuality && !report.verdicts.is_empty() {
        let mut v = verdict(suite, None, global_sign(&report));
        v.suite = format!("{suite} (global sign)");
        report.push(v);
    }
    emit(&report, out, started);
    if let Some(bad) = report.verdicts.iter().find(|v| !v.passed) {
        let inst = bad
            .instance
            .as_ref()
            .expect("random verdicts carry instances");
        dump_failures(&report);
        let base = args.dump_dir.join(format!(
            "failing-{}-seed{}-{}",
            suite.name(),
            args.seed,
            inst.index
        ));
        let graph_path = base.with_extension("graph.json");
        let write = |p: &Path, text: String| {
            fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))
        };
        write(
            &graph_path,
            serde_json::to_string_pretty(&inst.graph).expect("json"),
        )?;
        eprintln!("failing instance written to {}", graph_path.display());
        if let Some(m) = &inst.morphism {
            let map_path = base.with_extension("map.json");
            write(&map_path, serde_json::to_string_pretty(m).expect("json"))?;
            eprintln!("failing morphism written to {}", map_path.display());
        }
        return Err(Failure::Violation);
    }
    Ok(())
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Groups {
            input,
            modulus,
            out,
        } => groups(input, modulus.as_deref(), out, argv),
        Command::Verify {
            input,
            morphism,
            suite,
            modulus,
            out,
        } => verify(
            input,
            morphism.as_deref(),
            *suite,
            modulus.as_deref(),
            out,
            argv,
        ),
        Command::Random {
            seed,
            max_v,
            count,
            suite,
            dump_dir,
            out,
        } => random(
            RandomArgs {
                seed: *seed,
                max_v: *max_v as usize,
                count: *count,
                suite: *suite,
                dump_dir,
            },
            out,
            argv,
        ),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Disconnected) => {
            eprintln!("error: graph is not connected");
            ExitCode::from(3)
        }
        Err(Failure::Violation) => ExitCode::from(4),
    }
}
