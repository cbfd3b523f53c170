use std::fs;
use std::path::PathBuf;
use std::thread;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use slitsim::analysis::{contextual_report, AnalysisReport, AnalysisThresholds};
use slitsim::config::{apply_config_str, RunConfig};
use slitsim::error::Result;
use slitsim::experiment::run;
use slitsim::model::{ExperimentContext, RunRecord};
use slitsim::numerics::{solve_displacement, SolverSettings};
use slitsim::output::{read_json, render_plot, write_csv, write_json, PlotFormat};

#[derive(Parser)]
#[command(
    name = "slitsim",
    version,
    about = "Seed-reproducible double-slit scattering simulator with contextual statistics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one context and optionally persist CSV/JSON/SVG/ASCII outputs.
    Run(RunArgs),
    /// Solve y + sin y = x and print the root and residual.
    Solve {
        /// Right-hand side; must be finite and nonnegative.
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
    },
    /// Compare three persisted runs (s1, s2, both) and print the verdicts.
    Analyze(AnalyzeArgs),
    /// Run all four contexts at shared settings and write a figure set.
    Demo(DemoArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Config file of key=value lines (# comments). Flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Context: s1 | s2 | both | sequential.
    #[arg(long)]
    context: Option<String>,
    /// Number of particles to emit (positive).
    #[arg(long)]
    particles: Option<u64>,
    /// PRNG seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Atom radius.
    #[arg(long)]
    radius: Option<f64>,
    /// Number of equidistant orbits.
    #[arg(long)]
    orbits: Option<usize>,
    /// Initial spins: alternating | all1 | all2.
    #[arg(long)]
    spin_pattern: Option<String>,
    /// Write the histogram CSV here.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write the full run record as JSON here.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write an SVG plot here.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Write an ASCII plot here.
    #[arg(long)]
    ascii: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// JSON record of the slit-1-only run.
    #[arg(long)]
    s1: PathBuf,
    /// JSON record of the slit-2-only run.
    #[arg(long)]
    s2: PathBuf,
    /// JSON record of the both-slits run.
    #[arg(long)]
    s12: PathBuf,
}

#[derive(Args)]
struct DemoArgs {
    /// Directory for the demo figure set (created if absent).
    #[arg(long, default_value = "demo_out")]
    out_dir: PathBuf,
    /// Particles per context.
    #[arg(long, default_value_t = 200_000)]
    particles: u64,
    /// Shared seed for all four contexts.
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Solve { x } => cmd_solve(x),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Demo(args) => cmd_demo(args),
    };
    match outcome {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(1);
        }
    }
}

fn assemble_config(args: &RunArgs) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &args.config {
        apply_config_str(&mut cfg, &fs::read_to_string(path)?)?;
    }
    if let Some(v) = &args.context {
        cfg.set("context", v)?;
    }
    if let Some(v) = args.particles {
        cfg.set("particles", &v.to_string())?;
    }
    if let Some(v) = args.seed {
        cfg.set("seed", &v.to_string())?;
    }
    if let Some(v) = args.radius {
        cfg.set("radius", &v.to_string())?;
    }
    if let Some(v) = args.orbits {
        cfg.set("orbits", &v.to_string())?;
    }
    if let Some(v) = &args.spin_pattern {
        cfg.set("spin_pattern", v)?;
    }
    if let Some(p) = &args.csv {
        cfg.csv_path = Some(p.clone());
    }
    if let Some(p) = &args.json {
        cfg.json_path = Some(p.clone());
    }
    if let Some(p) = &args.svg {
        cfg.svg_path = Some(p.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn print_summary(record: &RunRecord) {
    println!("context     {}", record.context);
    println!("seed        {}", record.seed);
    println!("emitted     {}", record.n_emitted);
    println!("blocked     {}", record.n_blocked);
    println!("registered  {}", record.n_registered);
    println!(
        "displaced   {} (fraction {:.5})",
        record.n_displaced,
        record.displaced_fraction()
    );
    println!("rng         {}", record.rng_algorithm);
}

fn cmd_run(args: RunArgs) -> Result<i32> {
    let cfg = assemble_config(&args)?;
    let started = Instant::now();
    let record = run(&cfg.params, cfg.context, cfg.particles, cfg.seed)?;
    let elapsed = started.elapsed();
    print_summary(&record);
    println!("elapsed     {:.1} ms", elapsed.as_secs_f64() * 1e3);
    if let Some(path) = &cfg.csv_path {
        write_csv(&record, path)?;
        println!("wrote {}", path.display());
    }
    if let Some(path) = &cfg.json_path {
        write_json(&record, None, path)?;
        println!("wrote {}", path.display());
    }
    if let Some(path) = &cfg.svg_path {
        render_plot(&record, path, PlotFormat::Svg)?;
        println!("wrote {}", path.display());
    }
    if let Some(path) = &args.ascii {
        render_plot(&record, path, PlotFormat::Ascii)?;
        println!("wrote {}", path.display());
    }
    Ok(0)
}

fn cmd_solve(x: f64) -> Result<i32> {
    let y = solve_displacement(x, &SolverSettings::default())?;
    println!("y = {y}");
    println!("residual = {:e}", y + y.sin() - x);
    Ok(0)
}

fn print_report(report: &AnalysisReport) {
    let f = &report.fringe_scores;
    let s = &report.symmetry_defects;
    let d = &report.displaced_fractions;
    println!("fringe scores      s1={:.5}  s2={:.5}  s12={:.5}", f.s1, f.s2, f.s12);
    println!("symmetry defects   s1={:.5}  s2={:.5}  s12={:.5}", s.s1, s.s2, s.s12);
    println!("displaced fraction s1={:.5}  s2={:.5}  s12={:.5}", d.s1, d.s2, d.s12);
    println!(
        "tv shift           slit1-in-s12 vs s1-total   = {:.5}",
        report.tv_distances.s12_slit1_vs_s1_total
    );
    println!(
        "tv baseline        slit1-in-s12 vs slit2-in-s12 = {:.5}",
        report.tv_distances.s12_slit1_vs_s12_slit2
    );
    let verdicts = [
        ("additivity_exact", report.verdicts.additivity_exact),
        ("single_slit_smooth", report.verdicts.single_slit_smooth),
        ("interference_present", report.verdicts.interference_present),
        ("per_slit_match", report.verdicts.per_slit_match),
        ("prop_b_violated", report.verdicts.prop_b_violated),
        ("symmetric", report.verdicts.symmetric),
        ("displaced_fraction_half", report.verdicts.displaced_fraction_half),
    ];
    for (name, ok) in verdicts {
        println!("verdict {name:<24} {}", if ok { "PASS" } else { "FAIL" });
    }
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<i32> {
    let s1 = read_json(&args.s1)?;
    let s2 = read_json(&args.s2)?;
    let s12 = read_json(&args.s12)?;
    let report = contextual_report(
        &s1.record,
        &s2.record,
        &s12.record,
        &AnalysisThresholds::default(),
    )?;
    print_report(&report);
    if report.verdicts.all_pass() {
        println!("overall PASS");
        Ok(0)
    } else {
        println!("overall FAIL");
        Ok(2)
    }
}

fn cmd_demo(args: DemoArgs) -> Result<i32> {
    fs::create_dir_all(&args.out_dir)?;
    let cfg = RunConfig::default();
    let jobs = [
        ("s1", ExperimentContext::S1Only),
        ("s2", ExperimentContext::S2Only),
        ("both", ExperimentContext::BothRandom),
        ("sequential", ExperimentContext::SequentialHalves),
    ];
    // The four contexts are independent runs over separate records, so they
    // can execute in parallel; each thread writes only its own files.
    let records: Vec<(&str, RunRecord)> = thread::scope(|scope| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|&(name, context)| {
                let params = &cfg.params;
                let out_dir = &args.out_dir;
                scope.spawn(move || -> Result<(&str, RunRecord)> {
                    let record = run(params, context, args.particles, args.seed)?;
                    write_csv(&record, &out_dir.join(format!("{name}.csv")))?;
                    write_json(&record, None, &out_dir.join(format!("{name}.json")))?;
                    render_plot(&record, &out_dir.join(format!("{name}.svg")), PlotFormat::Svg)?;
                    Ok((name, record))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("demo worker panicked"))
            .collect::<Result<Vec<_>>>()
    })?;

    for (name, record) in &records {
        println!("--- {name} ---");
        print_summary(record);
    }
    println!("figure set written to {}", args.out_dir.display());
    Ok(0)
}
