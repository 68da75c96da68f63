//! Time sweeps of the correlator, figure presets and engine/oracle checks.
//!
//! A sweep evaluates the joint and marginal Weyl functions on a uniform grid
//! of scaled time `Omega t` (or `Omega' t` for three modes) and emits a fixed
//! set of columns as CSV or JSON. Output is a pure function of the config.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::{self, Write};

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::drive::{drive_lambda, DriveParams};
use crate::dsl;
use crate::error::{Error, Result};
use crate::oracle::{self, oracle_weyl};
use crate::states::{
    build_family_state_with, CoherentNorm, ModeSlot, OperatorEnsemble, StateFamily,
};
use crate::weyl::{beat_frequency_from_means, correlator};

/// Largest engine/oracle deviation accepted by [`oracle_check`].
pub const ORACLE_TOLERANCE: f64 = 1e-8;

/// How a sweep's state is specified.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Family {
        family: StateFamily,
        slots: Vec<ModeSlot>,
        norm: CoherentNorm,
    },
    Dsl(String),
}

impl StateSpec {
    pub fn family(family: StateFamily, slots: Vec<ModeSlot>) -> Self {
        StateSpec::Family {
            family,
            slots,
            norm: CoherentNorm::Overlap,
        }
    }

    /// Accepts `family:p1,p2,..` (e.g. `ent_number2:1,0`,
    /// `sep_coherent3:0,1,1.4142+0i`) or falls back to the state DSL.
    pub fn parse(text: &str) -> Result<Self> {
        let trimmed = text.trim();
        if let Some((name, params)) = trimmed.split_once(':') {
            if let Some(family) = StateFamily::from_name(name.trim()) {
                let slots = parse_family_params(family, params)?;
                return Ok(StateSpec::family(family, slots));
            }
        }
        dsl::parse(trimmed)?;
        Ok(StateSpec::Dsl(trimmed.to_string()))
    }

    pub fn with_norm(self, norm: CoherentNorm) -> Self {
        match self {
            StateSpec::Family { family, slots, .. } => StateSpec::Family {
                family,
                slots,
                norm,
            },
            other => other,
        }
    }

    pub fn build(&self) -> Result<OperatorEnsemble> {
        match self {
            StateSpec::Family {
                family,
                slots,
                norm,
            } => build_family_state_with(*family, slots, *norm),
            StateSpec::Dsl(text) => dsl::parse_state(text),
        }
    }

    /// Mean photon numbers of the reference ket: the family parameters, or
    /// the first ket written in a DSL expression.
    pub fn reference_photons(&self) -> Result<Vec<f64>> {
        match self {
            StateSpec::Family { slots, .. } => {
                Ok(slots.iter().map(ModeSlot::mean_photons).collect())
            }
            StateSpec::Dsl(text) => {
                let expr = dsl::parse(text)?;
                Ok(expr
                    .first_ket()
                    .modes()
                    .iter()
                    .map(ModeSlot::mean_photons)
                    .collect())
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            StateSpec::Family {
                family,
                slots,
                norm,
            } => {
                let params: Vec<String> = slots
                    .iter()
                    .map(|s| match s {
                        ModeSlot::Fock(n) => n.to_string(),
                        ModeSlot::Coherent(a) => dsl::format_complex(*a),
                    })
                    .collect();
                let suffix = match norm {
                    CoherentNorm::Overlap => "",
                    CoherentNorm::PrintedPairwiseSum => " (printed pairwise-sum normalization)",
                };
                format!("{family}:{}{suffix}", params.join(","))
            }
            StateSpec::Dsl(text) => text.clone(),
        }
    }
}

fn parse_family_params(family: StateFamily, params: &str) -> Result<Vec<ModeSlot>> {
    let coherent = family.slot_kind() == Some(crate::states::KetKind::Coherent);
    params
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            let p = p.strip_prefix("c:").unwrap_or(p);
            if coherent {
                let expr = dsl::parse(&format!("|c:{p}>")).map_err(|e| {
                    Error::config("E-STATE", format!("bad coherent amplitude '{p}': {e}"))
                })?;
                Ok(expr.first_ket().slot(0))
            } else if family == StateFamily::Factorizable && p.parse::<u32>().is_err() {
                let expr = dsl::parse(&format!("|c:{p}>"))
                    .map_err(|e| Error::config("E-STATE", format!("bad slot '{p}': {e}")))?;
                Ok(expr.first_ket().slot(0))
            } else {
                p.parse::<u32>()
                    .map(ModeSlot::Fock)
                    .map_err(|_| Error::config("E-STATE", format!("bad occupation '{p}'")))
            }
        })
        .collect()
}

/// Uniform grid on the scaled-time axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub start: f64,
    pub end: f64,
    pub points: usize,
}

impl Default for TimeGrid {
    fn default() -> Self {
        Self {
            start: 0.0,
            end: 4.0 * PI,
            points: 1000,
        }
    }
}

impl TimeGrid {
    pub fn value(&self, k: usize) -> f64 {
        self.start + (self.end - self.start) * k as f64 / (self.points - 1) as f64
    }

    pub fn step(&self) -> f64 {
        (self.end - self.start) / (self.points - 1) as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub state: StateSpec,
    pub drive: DriveParams,
    pub grid: TimeGrid,
    /// Overrides the beat frequency used to convert scaled time into `t`.
    pub axis_frequency: Option<f64>,
}

impl SweepConfig {
    pub fn new(state: StateSpec, omegas: Vec<f64>) -> Self {
        Self {
            state,
            drive: DriveParams::with_omegas(omegas),
            grid: TimeGrid::default(),
            axis_frequency: None,
        }
    }
}

/// Conversion between the grid variable and physical time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Axis {
    /// Grid values are `Omega t`; `t = s / Omega`.
    Scaled { frequency: f64 },
    /// Degenerate beat frequency: `t = s / rate` and the scaled-time column
    /// holds `t` itself.
    RawTime { rate: f64 },
}

impl Axis {
    pub fn time(&self, s: f64) -> f64 {
        match *self {
            Axis::Scaled { frequency } => s / frequency,
            Axis::RawTime { rate } => s / rate,
        }
    }

    pub fn scaled_time(&self, s: f64) -> f64 {
        match self {
            Axis::Scaled { .. } => s,
            Axis::RawTime { .. } => self.time(s),
        }
    }
}

/// A validated sweep: built state plus resolved axis.
#[derive(Debug, Clone)]
pub struct PreparedSweep {
    pub config: SweepConfig,
    pub rho: OperatorEnsemble,
    pub axis: Axis,
    pub warnings: Vec<String>,
}

pub fn prepare(cfg: &SweepConfig) -> Result<PreparedSweep> {
    let g = cfg.grid;
    if g.points < 2 {
        return Err(Error::config(
            "E-POINTS",
            format!("need at least 2 grid points, got {}", g.points),
        ));
    }
    if !(g.start.is_finite() && g.end.is_finite()) || g.start >= g.end {
        return Err(Error::config(
            "E-RANGE",
            format!(
                "time range must satisfy start < end, got [{}, {}]",
                g.start, g.end
            ),
        ));
    }
    cfg.drive
        .validate()
        .map_err(|e| Error::config("E-DRIVE", e.to_string()))?;
    let rho = cfg.state.build().map_err(|e| match e {
        Error::Parse(p) => Error::Parse(p),
        other => Error::config("E-STATE", other.to_string()),
    })?;
    if rho.n_modes() != cfg.drive.n_modes() {
        return Err(Error::config(
            "E-OMEGA",
            format!(
                "state has {} modes but {} frequencies were given",
                rho.n_modes(),
                cfg.drive.n_modes()
            ),
        ));
    }
    let (axis, warnings) = resolve_axis(cfg)?;
    Ok(PreparedSweep {
        config: cfg.clone(),
        rho,
        axis,
        warnings,
    })
}

fn resolve_axis(cfg: &SweepConfig) -> Result<(Axis, Vec<String>)> {
    let omegas = &cfg.drive.omegas;
    let max_omega = omegas.iter().fold(0.0f64, |m, w| m.max(w.abs()));
    if let Some(f) = cfg.axis_frequency {
        if !f.is_finite() || f == 0.0 {
            return Err(Error::config(
                "E-AXIS",
                format!("axis frequency must be finite and nonzero, got {f}"),
            ));
        }
        return Ok((Axis::Scaled { frequency: f.abs() }, Vec::new()));
    }
    let beat = cfg
        .state
        .reference_photons()
        .ok()
        .and_then(|p| beat_frequency_from_means(&p, omegas).ok())
        .unwrap_or(0.0);
    if beat.abs() > 1e-12 * max_omega {
        return Ok((
            Axis::Scaled {
                frequency: beat.abs(),
            },
            Vec::new(),
        ));
    }
    let spread = omegas
        .iter()
        .flat_map(|a| omegas.iter().map(move |b| (a - b).abs()))
        .fold(0.0f64, f64::max);
    let rate = if spread > 0.0 { spread } else { max_omega };
    if rate == 0.0 {
        return Err(Error::config(
            "E-AXIS",
            "all frequencies are zero; no time axis can be derived",
        ));
    }
    let warning = format!(
        "beat frequency is zero; scaled_time holds raw t and the grid is divided by {rate:?}"
    );
    Ok((Axis::RawTime { rate }, vec![warning]))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub t: f64,
    pub scaled_time: f64,
    pub marginals: Vec<C64>,
    pub joint: C64,
    pub c: C64,
}

/// One evaluated series with its configuration echo.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSeries {
    pub name: String,
    pub n_modes: usize,
    pub metadata: Vec<(String, String)>,
    pub rows: Vec<SweepRow>,
}

impl SweepSeries {
    pub fn columns(&self) -> Vec<String> {
        let mut cols = vec!["t".to_string(), "scaled_time".to_string()];
        for i in 1..=self.n_modes {
            cols.push(format!("reW_{i}"));
            cols.push(format!("imW_{i}"));
        }
        cols.extend(["reW_joint", "imW_joint", "reC", "imC", "absC"].map(String::from));
        cols
    }

    fn row_values(row: &SweepRow) -> Vec<f64> {
        let mut v = vec![row.t, row.scaled_time];
        for m in &row.marginals {
            v.push(m.re);
            v.push(m.im);
        }
        v.extend([row.joint.re, row.joint.im, row.c.re, row.c.im, row.c.norm()]);
        v
    }

    pub fn c_values(&self) -> Vec<C64> {
        self.rows.iter().map(|r| r.c).collect()
    }
}

fn echo(prepared: &PreparedSweep) -> Vec<(String, String)> {
    let cfg = &prepared.config;
    let omegas: Vec<String> = cfg.drive.omegas.iter().map(|w| format!("{w:?}")).collect();
    let mut meta = vec![
        ("state".to_string(), cfg.state.describe()),
        ("xi".to_string(), format!("{:?}", cfg.drive.xi)),
        ("charge".to_string(), format!("{:?}", cfg.drive.e_charge)),
        ("q".to_string(), format!("{:?}", cfg.drive.q())),
        ("omega".to_string(), omegas.join(",")),
        (
            "grid".to_string(),
            format!(
                "{:?},{:?},{}",
                cfg.grid.start, cfg.grid.end, cfg.grid.points
            ),
        ),
    ];
    meta.push(match prepared.axis {
        Axis::Scaled { frequency } => (
            "axis".to_string(),
            format!("scaled frequency={frequency:?}"),
        ),
        Axis::RawTime { rate } => ("axis".to_string(), format!("raw_t rate={rate:?}")),
    });
    for w in &prepared.warnings {
        meta.push(("warning".to_string(), w.clone()));
    }
    meta
}

/// Evaluates the correlator at every grid point.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepSeries> {
    run_named_sweep("sweep", cfg)
}

pub fn run_named_sweep(name: &str, cfg: &SweepConfig) -> Result<SweepSeries> {
    let prepared = prepare(cfg)?;
    let rows = (0..cfg.grid.points)
        .map(|k| {
            let s = cfg.grid.value(k);
            let t = prepared.axis.time(s);
            let cv = correlator(&prepared.rho, &drive_lambda(&cfg.drive, t))?;
            Ok(SweepRow {
                t,
                scaled_time: prepared.axis.scaled_time(s),
                marginals: cv.marginals,
                joint: cv.joint,
                c: cv.c,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepSeries {
        name: name.to_string(),
        n_modes: prepared.rho.n_modes(),
        metadata: echo(&prepared),
        rows,
    })
}

/// 17 significant digits, scientific notation.
pub fn format_float(x: f64) -> String {
    format!("{:.16e}", x + 0.0)
}

pub fn write_csv<W: Write>(series: &SweepSeries, out: &mut W) -> io::Result<()> {
    writeln!(out, "# series: {}", series.name)?;
    for (k, v) in &series.metadata {
        writeln!(out, "# {k}: {v}")?;
    }
    writeln!(out, "{}", series.columns().join(","))?;
    let mut line = String::new();
    for row in &series.rows {
        line.clear();
        for (i, v) in SweepSeries::row_values(row).into_iter().enumerate() {
            if i > 0 {
                line.push(',');
            }
            let _ = write!(line, "{}", format_float(v));
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

pub fn csv_string(series: &[SweepSeries], summary: &[(String, String)]) -> String {
    let mut buf = Vec::new();
    for (k, v) in summary {
        let _ = writeln!(buf, "# {k}: {v}");
    }
    for (i, s) in series.iter().enumerate() {
        if i > 0 || !summary.is_empty() {
            buf.push(b'\n');
        }
        write_csv(s, &mut buf).expect("writing to a Vec cannot fail");
    }
    String::from_utf8(buf).expect("CSV output is ASCII")
}

pub fn series_json(series: &SweepSeries) -> serde_json::Value {
    let metadata: serde_json::Map<String, serde_json::Value> = series
        .metadata
        .iter()
        .map(|(k, v)| (k.clone(), json!(v)))
        .collect();
    let rows: Vec<Vec<f64>> = series.rows.iter().map(SweepSeries::row_values).collect();
    json!({
        "series": series.name,
        "metadata": metadata,
        "columns": series.columns(),
        "rows": rows,
    })
}

pub fn json_string(series: &[SweepSeries], summary: &[(String, String)]) -> String {
    let summary: serde_json::Map<String, serde_json::Value> =
        summary.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
    let doc = json!({
        "summary": summary,
        "series": series.iter().map(series_json).collect::<Vec<_>>(),
    });
    serde_json::to_string_pretty(&doc).expect("JSON values serialize")
}

/// `max_k |C_b(t_k) - C_a(t_k)|` over two series on the same grid.
pub fn max_abs_difference(a: &SweepSeries, b: &SweepSeries) -> f64 {
    a.rows
        .iter()
        .zip(&b.rows)
        .map(|(x, y)| (y.c - x.c).norm())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
}

impl FigureId {
    pub fn from_number(n: u32) -> Result<Self> {
        match n {
            2 => Ok(FigureId::Fig2),
            3 => Ok(FigureId::Fig3),
            4 => Ok(FigureId::Fig4),
            5 => Ok(FigureId::Fig5),
            6 => Ok(FigureId::Fig6),
            _ => Err(Error::config(
                "E-FIGURE",
                format!("unknown figure {n}; expected 2..6"),
            )),
        }
    }

    pub fn number(&self) -> u32 {
        match self {
            FigureId::Fig2 => 2,
            FigureId::Fig3 => 3,
            FigureId::Fig4 => 4,
            FigureId::Fig5 => 5,
            FigureId::Fig6 => 6,
        }
    }
}

pub const BIPARTITE_OMEGAS: [f64; 2] = [1.2e-4, 1.0e-4];
pub const TRIPARTITE_OMEGAS: [f64; 3] = [1.2e-4, 1.1e-4, 1.0e-4];

/// Knobs for the figure presets.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureOptions {
    pub grid: TimeGrid,
    pub tri_norm: CoherentNorm,
    pub fig6_bi_amplitudes: [C64; 2],
    pub fig6_bi_omegas: [f64; 2],
}

impl Default for FigureOptions {
    fn default() -> Self {
        Self {
            grid: TimeGrid::default(),
            tri_norm: CoherentNorm::Overlap,
            fig6_bi_amplitudes: [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
            fig6_bi_omegas: BIPARTITE_OMEGAS,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigurePreset {
    pub id: FigureId,
    pub series: Vec<(String, SweepConfig)>,
}

fn coherent(a: &[C64]) -> Vec<ModeSlot> {
    a.iter().map(|&x| ModeSlot::Coherent(x)).collect()
}

fn fock(n: &[u32]) -> Vec<ModeSlot> {
    n.iter().map(|&x| ModeSlot::Fock(x)).collect()
}

fn pair(
    prefix: &str,
    sep: StateFamily,
    ent: StateFamily,
    slots: Vec<ModeSlot>,
    omegas: &[f64],
    opts: &FigureOptions,
) -> Vec<(String, SweepConfig)> {
    [("sep", sep), ("ent", ent)]
        .into_iter()
        .map(|(tag, family)| {
            let mut cfg = SweepConfig::new(
                StateSpec::family(family, slots.clone()).with_norm(opts.tri_norm),
                omegas.to_vec(),
            );
            cfg.grid = opts.grid;
            (format!("{prefix}{tag}"), cfg)
        })
        .collect()
}

/// States, frequencies and axis of each figure preset.
pub fn figure_preset(id: FigureId, opts: &FigureOptions) -> FigurePreset {
    let r2 = C64::new(2f64.sqrt(), 0.0);
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let series = match id {
        FigureId::Fig2 => pair(
            "",
            StateFamily::SepNumber2,
            StateFamily::EntNumber2,
            fock(&[1, 0]),
            &BIPARTITE_OMEGAS,
            opts,
        ),
        FigureId::Fig3 => pair(
            "",
            StateFamily::SepCoherent2,
            StateFamily::EntCoherent2,
            coherent(&[one, zero]),
            &BIPARTITE_OMEGAS,
            opts,
        ),
        FigureId::Fig4 => pair(
            "",
            StateFamily::SepNumber3,
            StateFamily::EntNumber3,
            fock(&[0, 1, 2]),
            &TRIPARTITE_OMEGAS,
            opts,
        ),
        FigureId::Fig5 => pair(
            "",
            StateFamily::SepCoherent3,
            StateFamily::EntCoherent3,
            coherent(&[zero, one, r2]),
            &TRIPARTITE_OMEGAS,
            opts,
        ),
        FigureId::Fig6 => {
            let tri_slots = coherent(&[zero, one, r2]);
            let photons: Vec<f64> = tri_slots.iter().map(ModeSlot::mean_photons).collect();
            let shared = beat_frequency_from_means(&photons, &TRIPARTITE_OMEGAS)
                .expect("three photon numbers and three frequencies");
            let mut out = pair(
                "tri/",
                StateFamily::SepCoherent3,
                StateFamily::EntCoherent3,
                tri_slots,
                &TRIPARTITE_OMEGAS,
                opts,
            );
            out.extend(pair(
                "bi/",
                StateFamily::SepCoherent2,
                StateFamily::EntCoherent2,
                coherent(&opts.fig6_bi_amplitudes),
                &opts.fig6_bi_omegas,
                opts,
            ));
            for (_, cfg) in &mut out {
                cfg.axis_frequency = Some(shared);
            }
            out
        }
    };
    FigurePreset { id, series }
}

/// Evaluated figure: every series plus summary lines.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureRun {
    pub id: FigureId,
    pub series: Vec<SweepSeries>,
    pub summary: Vec<(String, String)>,
}

impl FigureRun {
    pub fn get(&self, name: &str) -> Option<&SweepSeries> {
        self.series.iter().find(|s| s.name == name)
    }

    pub fn to_csv(&self) -> String {
        csv_string(&self.series, &self.summary)
    }

    pub fn to_json(&self) -> String {
        json_string(&self.series, &self.summary)
    }
}

pub fn run_figure(preset: &FigurePreset) -> Result<FigureRun> {
    let series = preset
        .series
        .iter()
        .map(|(name, cfg)| run_named_sweep(&format!("fig{}/{name}", preset.id.number()), cfg))
        .collect::<Result<Vec<_>>>()?;
    let mut summary = vec![("figure".to_string(), preset.id.number().to_string())];
    let n = preset.id.number();
    let diff = |prefix: &str| {
        let sep = series
            .iter()
            .find(|s| s.name == format!("fig{n}/{prefix}sep"))?;
        let ent = series
            .iter()
            .find(|s| s.name == format!("fig{n}/{prefix}ent"))?;
        Some(max_abs_difference(sep, ent))
    };
    if preset.id == FigureId::Fig6 {
        if let (Some(tri), Some(bi)) = (diff("tri/"), diff("bi/")) {
            summary.push(("max_abs_c_diff_tripartite".into(), format_float(tri)));
            summary.push(("max_abs_c_diff_bipartite".into(), format_float(bi)));
            summary.push((
                "ratio_tripartite_over_bipartite".into(),
                format_float(tri / bi),
            ));
        }
    } else if let Some(d) = diff("") {
        summary.push(("max_abs_c_diff".into(), format_float(d)));
    }
    Ok(FigureRun {
        id: preset.id,
        series,
        summary,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSample {
    pub grid_index: usize,
    pub t: f64,
    pub joint_deviation: f64,
    pub marginal_deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub cutoff: usize,
    pub samples: Vec<OracleSample>,
    pub max_deviation: f64,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.max_deviation <= ORACLE_TOLERANCE
    }
}

/// Compares engine and truncated-space oracle at `samples` grid points drawn
/// from a seeded generator.
pub fn oracle_check(
    cfg: &SweepConfig,
    samples: usize,
    cutoff: usize,
    seed: u64,
) -> Result<OracleReport> {
    let prepared = prepare(cfg)?;
    // guard failures surface before any sampling
    oracle::TruncatedSpace::new(cutoff, prepared.rho.n_modes())?;
    for d in prepared.rho.terms() {
        for s in d.ket.modes().iter().chain(d.bra.modes()) {
            oracle::embed_slot(*s, cutoff)?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(samples);
    for _ in 0..samples {
        let k = rng.gen_range(0..cfg.grid.points);
        let t = prepared.axis.time(cfg.grid.value(k));
        let at = drive_lambda(&cfg.drive, t);
        let engine = correlator(&prepared.rho, &at)?;
        let joint = oracle_weyl(&prepared.rho, &at, cutoff)?;
        let mut marginal_deviation = 0.0f64;
        for (i, m) in engine.marginals.iter().enumerate() {
            let o = oracle_weyl(&prepared.rho, &at.only(i), cutoff)?;
            marginal_deviation = marginal_deviation.max((o - m).norm());
        }
        out.push(OracleSample {
            grid_index: k,
            t,
            joint_deviation: (joint - engine.joint).norm(),
            marginal_deviation,
        });
    }
    let max_deviation = out
        .iter()
        .map(|s| s.joint_deviation.max(s.marginal_deviation))
        .fold(0.0, f64::max);
    Ok(OracleReport {
        cutoff,
        samples: out,
        max_deviation,
    })
}
