use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;
use serde_json::json;

use weylcorr::dsl;
use weylcorr::sweep::{
    self, csv_string, figure_preset, json_string, oracle_check, run_figure, run_sweep,
    FigureOptions, OracleReport, BIPARTITE_OMEGAS, TRIPARTITE_OMEGAS,
};
use weylcorr::{
    correlator, default_charge, drive_lambda, CoherentNorm, DriveParams, Error, FigureId,
    StateSpec, SweepConfig, TimeGrid,
};

#[derive(Parser)]
#[command(
    name = "weylcorr",
    version,
    about = "Weyl-function correlators of entangled photon states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Joint Weyl function at one time.
    Weyl(PointArgs),
    /// Joint and marginal Weyl functions and the correlator at one time.
    Correlator(PointArgs),
    /// Correlator over a grid of scaled time.
    Sweep(SweepArgs),
    /// Series for one of the figure presets (2..6).
    Figure(FigureArgs),
    /// Compare the closed-form engine against the truncated-space oracle.
    OracleCheck(OracleArgs),
    /// Validate a state expression and print its canonical form.
    Parse {
        #[arg(long)]
        state: String,
    },
}

#[derive(Args, Clone)]
struct DriveArgs {
    /// Built-in family with parameters (`ent_number2:1,0`) or DSL text.
    #[arg(long)]
    state: String,
    /// Comma-separated mode frequencies. Defaults to the preset values for 2 or 3 modes.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    omega: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1.0)]
    xi: f64,
    /// Electron charge in natural units; defaults to (4 pi / 137)^(1/2).
    #[arg(long)]
    charge: Option<f64>,
    /// Normalization of the entangled three-mode coherent family.
    #[arg(long, value_enum, default_value_t = TriNorm::Overlap)]
    tri_norm: TriNorm,
}

#[derive(Args)]
struct PointArgs {
    #[command(flatten)]
    drive: DriveArgs,
    /// Physical time.
    #[arg(long, allow_negative_numbers = true)]
    t: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct GridArgs {
    /// Scaled-time range `start,end`.
    #[arg(
        long,
        value_delimiter = ',',
        num_args = 1,
        allow_negative_numbers = true
    )]
    t_range: Option<Vec<f64>>,
    #[arg(long)]
    points: Option<usize>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    drive: DriveArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// Frequency dividing scaled time into t; derived from the state when absent.
    #[arg(long)]
    axis_frequency: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct PresetArgs {
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, value_enum, default_value_t = TriNorm::Overlap)]
    tri_norm: TriNorm,
    /// Amplitudes `A1,A2` of the two-mode curve in figure 6.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    fig6_bi_amps: Option<Vec<String>>,
    /// Frequencies `w1,w2` of the two-mode curve in figure 6.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    fig6_bi_omega: Option<Vec<f64>>,
}

#[derive(Args)]
struct FigureArgs {
    id: u32,
    #[command(flatten)]
    preset: PresetArgs,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    /// Check every series of a figure preset.
    #[arg(long, conflicts_with = "state")]
    figure: Option<u32>,
    #[arg(long)]
    state: Option<String>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    omega: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1.0)]
    xi: f64,
    #[arg(long)]
    charge: Option<f64>,
    #[command(flatten)]
    preset: PresetArgs,
    #[arg(long, default_value_t = 10)]
    samples: usize,
    #[arg(long, default_value_t = 40)]
    cutoff: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TriNorm {
    /// Unit trace from the ket overlaps.
    Overlap,
    /// Pairwise-sum constant as printed for the three-mode entangled family.
    Printed,
}

impl From<TriNorm> for CoherentNorm {
    fn from(n: TriNorm) -> Self {
        match n {
            TriNorm::Overlap => CoherentNorm::Overlap,
            TriNorm::Printed => CoherentNorm::PrintedPairwiseSum,
        }
    }
}

enum Failure {
    Config(String),
    Parse(String),
    Oracle(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(p) => Failure::Parse(p.to_string()),
            other => Failure::Config(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Oracle(m)) => {
            eprintln!("oracle check failed: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Parse(m)) => {
            eprintln!("parse error: {m}");
            ExitCode::from(4)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Weyl(a) => point(a, false),
        Command::Correlator(a) => point(a, true),
        Command::Sweep(a) => {
            let mut cfg = sweep_config(&a.drive)?;
            apply_grid(&mut cfg.grid, &a.grid)?;
            cfg.axis_frequency = a.axis_frequency;
            let series = run_sweep(&cfg)?;
            for (k, v) in &series.metadata {
                if k == "warning" {
                    eprintln!("warning: {v}");
                }
            }
            let text = match a.format {
                Format::Csv => csv_string(std::slice::from_ref(&series), &[]),
                Format::Json => json_string(std::slice::from_ref(&series), &[]),
            };
            emit(&text, a.output.as_ref())
        }
        Command::Figure(a) => {
            let id = FigureId::from_number(a.id)?;
            let run = run_figure(&figure_preset(id, &figure_options(&a.preset)?))?;
            let text = match a.format {
                Format::Csv => run.to_csv(),
                Format::Json => run.to_json(),
            };
            emit(&text, a.output.as_ref())
        }
        Command::OracleCheck(a) => oracle(a),
        Command::Parse { state } => {
            let spec = StateSpec::parse(&state)?;
            let rho = spec.build()?;
            let canonical = dsl::render(&rho)
                .unwrap_or_else(|_| "(not expressible as a single DSL term)".into());
            println!("ok: {} modes, {} dyads", rho.n_modes(), rho.terms().len());
            println!("{canonical}");
            Ok(())
        }
    }
}

fn parse_state(drive: &DriveArgs) -> Result<StateSpec, Failure> {
    Ok(StateSpec::parse(&drive.state)?.with_norm(drive.tri_norm.into()))
}

fn default_omegas(modes: usize) -> Result<Vec<f64>, Failure> {
    match modes {
        2 => Ok(BIPARTITE_OMEGAS.to_vec()),
        3 => Ok(TRIPARTITE_OMEGAS.to_vec()),
        n => Err(Failure::Config(format!(
            "--omega is required for a {n}-mode state"
        ))),
    }
}

fn drive_params(
    spec: &StateSpec,
    omega: &Option<Vec<f64>>,
    xi: f64,
    charge: Option<f64>,
) -> Result<DriveParams, Failure> {
    let omegas = match omega {
        Some(w) => w.clone(),
        None => default_omegas(spec.build()?.n_modes())?,
    };
    let mut d = DriveParams::with_omegas(omegas);
    d.xi = xi;
    d.e_charge = charge.unwrap_or_else(default_charge);
    Ok(d)
}

fn sweep_config(drive: &DriveArgs) -> Result<SweepConfig, Failure> {
    let state = parse_state(drive)?;
    let params = drive_params(&state, &drive.omega, drive.xi, drive.charge)?;
    Ok(SweepConfig {
        state,
        drive: params,
        grid: TimeGrid::default(),
        axis_frequency: None,
    })
}

fn apply_grid(grid: &mut TimeGrid, args: &GridArgs) -> Result<(), Failure> {
    if let Some(r) = &args.t_range {
        let [start, end] = r[..] else {
            return Err(Failure::Config(format!(
                "--t-range takes two values, got {}",
                r.len()
            )));
        };
        grid.start = start;
        grid.end = end;
    }
    if let Some(p) = args.points {
        grid.points = p;
    }
    Ok(())
}

fn figure_options(args: &PresetArgs) -> Result<FigureOptions, Failure> {
    let mut opts = FigureOptions {
        tri_norm: args.tri_norm.into(),
        ..FigureOptions::default()
    };
    apply_grid(&mut opts.grid, &args.grid)?;
    if let Some(amps) = &args.fig6_bi_amps {
        let parsed: Vec<C64> = amps
            .iter()
            .map(|a| parse_amplitude(a))
            .collect::<Result<_, _>>()?;
        opts.fig6_bi_amplitudes = parsed
            .try_into()
            .map_err(|_| Failure::Config("--fig6-bi-amps takes two amplitudes".into()))?;
    }
    if let Some(w) = &args.fig6_bi_omega {
        opts.fig6_bi_omegas = w
            .clone()
            .try_into()
            .map_err(|_| Failure::Config("--fig6-bi-omega takes two frequencies".into()))?;
    }
    Ok(opts)
}

fn parse_amplitude(text: &str) -> Result<C64, Failure> {
    let expr =
        dsl::parse(&format!("|c:{}>", text.trim())).map_err(|e| Failure::Parse(e.to_string()))?;
    match expr.first_ket().slot(0) {
        weylcorr::ModeSlot::Coherent(a) => Ok(a),
        weylcorr::ModeSlot::Fock(_) => unreachable!("coherent slot syntax"),
    }
}

fn point(a: PointArgs, full: bool) -> Result<(), Failure> {
    let cfg = sweep_config(&a.drive)?;
    cfg.drive.validate()?;
    let rho = cfg.state.build()?;
    if rho.n_modes() != cfg.drive.n_modes() {
        return Err(Failure::Config(format!(
            "state has {} modes but {} frequencies were given",
            rho.n_modes(),
            cfg.drive.n_modes()
        )));
    }
    let cv = correlator(&rho, &drive_lambda(&cfg.drive, a.t))?;
    let mut names = vec!["t".to_string()];
    let mut values = vec![a.t];
    if full {
        for (i, m) in cv.marginals.iter().enumerate() {
            names.extend([format!("reW_{}", i + 1), format!("imW_{}", i + 1)]);
            values.extend([m.re, m.im]);
        }
    }
    names.extend(["reW_joint".into(), "imW_joint".into()]);
    values.extend([cv.joint.re, cv.joint.im]);
    if full {
        names.extend(["reC".into(), "imC".into(), "absC".into()]);
        values.extend([cv.c.re, cv.c.im, cv.c.norm()]);
    }
    let text = match a.format {
        Format::Csv => {
            let row: Vec<String> = values.iter().map(|&v| sweep::format_float(v)).collect();
            format!(
                "# state: {}\n{}\n{}\n",
                cfg.state.describe(),
                names.join(","),
                row.join(",")
            )
        }
        Format::Json => {
            let obj: serde_json::Map<String, serde_json::Value> = names
                .into_iter()
                .zip(values)
                .map(|(k, v)| (k, json!(v)))
                .collect();
            serde_json::to_string_pretty(&obj).expect("JSON values serialize") + "\n"
        }
    };
    emit(&text, a.output.as_ref())
}

fn oracle(a: OracleArgs) -> Result<(), Failure> {
    let configs: Vec<(String, SweepConfig)> = match (&a.figure, &a.state) {
        (Some(n), _) => {
            let id = FigureId::from_number(*n)?;
            figure_preset(id, &figure_options(&a.preset)?)
                .series
                .into_iter()
                .map(|(name, cfg)| (format!("fig{n}/{name}"), cfg))
                .collect()
        }
        (None, Some(state)) => {
            let spec = StateSpec::parse(state)?.with_norm(a.preset.tri_norm.into());
            let drive = drive_params(&spec, &a.omega, a.xi, a.charge)?;
            let mut cfg = SweepConfig {
                state: spec,
                drive,
                grid: TimeGrid::default(),
                axis_frequency: None,
            };
            apply_grid(&mut cfg.grid, &a.preset.grid)?;
            vec![("state".to_string(), cfg)]
        }
        (None, None) => {
            return Err(Failure::Config(
                "oracle-check needs --figure or --state".into(),
            ))
        }
    };
    let mut reports: Vec<(String, OracleReport)> = Vec::new();
    for (name, cfg) in configs {
        reports.push((name, oracle_check(&cfg, a.samples, a.cutoff, a.seed)?));
    }
    let text = match a.format {
        Format::Csv => {
            let mut s = format!("# cutoff: {}\n# seed: {}\nseries,grid_index,t,joint_deviation,marginal_deviation\n", a.cutoff, a.seed);
            for (name, r) in &reports {
                for p in &r.samples {
                    s.push_str(&format!(
                        "{name},{},{},{},{}\n",
                        p.grid_index,
                        sweep::format_float(p.t),
                        sweep::format_float(p.joint_deviation),
                        sweep::format_float(p.marginal_deviation)
                    ));
                }
            }
            s
        }
        Format::Json => {
            let v: Vec<_> = reports
                .iter()
                .map(|(name, r)| {
                    json!({
                        "series": name,
                        "cutoff": r.cutoff,
                        "max_deviation": r.max_deviation,
                        "passed": r.passed(),
                        "samples": r.samples.iter().map(|p| json!({
                            "grid_index": p.grid_index,
                            "t": p.t,
                            "joint_deviation": p.joint_deviation,
                            "marginal_deviation": p.marginal_deviation,
                        })).collect::<Vec<_>>(),
                    })
                })
                .collect();
            serde_json::to_string_pretty(&v).expect("JSON values serialize") + "\n"
        }
    };
    emit(&text, a.output.as_ref())?;
    let worst = reports
        .iter()
        .map(|(_, r)| r.max_deviation)
        .fold(0.0, f64::max);
    eprintln!(
        "max deviation {worst:e} (tolerance {:e})",
        sweep::ORACLE_TOLERANCE
    );
    if reports.iter().all(|(_, r)| r.passed()) {
        Ok(())
    } else {
        Err(Failure::Oracle(format!(
            "max deviation {worst:e} exceeds {:e}",
            sweep::ORACLE_TOLERANCE
        )))
    }
}

fn emit(text: &str, output: Option<&PathBuf>) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text)?,
        None => match io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() == io::ErrorKind::BrokenPipe => {}
            other => other?,
        },
    }
    Ok(())
}
