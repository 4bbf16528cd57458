//! Point evaluation pipeline, 1D/2D grid sweeps and deterministic CSV/JSON
//! emission.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::dynamics::{
    assess_stability, build_diffusion, build_drift, solve_lyapunov_assessed, DiffusionMatrix, DriftMatrix,
    LyapunovSolution, StabilityReport,
};
use crate::error::{Error, Result};
use crate::feedback::{effective_cavity, EffectiveCavity, EtaPoint, FeedbackLoop};
use crate::measures::{log_negativity, physicality, squeezing_degrees, EntanglementResult, PhysicalityReport, SqueezingResult};
use crate::params::{PhysicalParams, ThermalEnvironment};
use crate::steady_state::{solve_mean_field, EffectiveModel, MeanFieldOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    /// Detuning in units of ω_m, read per the detuning mode.
    Delta,
    G2OverG1,
    RB,
    Theta,
    PowerMw,
    TemperatureMk,
}

impl SweepParameter {
    pub const ALL: [SweepParameter; 6] = [
        SweepParameter::Delta,
        SweepParameter::G2OverG1,
        SweepParameter::RB,
        SweepParameter::Theta,
        SweepParameter::PowerMw,
        SweepParameter::TemperatureMk,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::Delta => "delta",
            SweepParameter::G2OverG1 => "g2_over_g1",
            SweepParameter::RB => "r_b",
            SweepParameter::Theta => "theta",
            SweepParameter::PowerMw => "power_mw",
            SweepParameter::TemperatureMk => "temperature_mk",
        }
    }

    pub fn apply(self, p: &mut PhysicalParams, value: f64) {
        match self {
            SweepParameter::Delta => p.detuning = value * p.omega_m,
            SweepParameter::G2OverG1 => p.g_2 = value * p.g_1,
            SweepParameter::RB => p.r_b = value,
            SweepParameter::Theta => p.theta = value,
            SweepParameter::PowerMw => p.drive_power = value * 1e-3,
            SweepParameter::TemperatureMk => p.temperature = value * 1e-3,
        }
    }

    /// Current value in the same units as [`SweepParameter::apply`] takes.
    pub fn read(self, p: &PhysicalParams) -> f64 {
        match self {
            SweepParameter::Delta => p.detuning / p.omega_m,
            SweepParameter::G2OverG1 => {
                if p.g_1 != 0.0 {
                    p.g_2 / p.g_1
                } else {
                    0.0
                }
            }
            SweepParameter::RB => p.r_b,
            SweepParameter::Theta => p.theta,
            SweepParameter::PowerMw => p.drive_power * 1e3,
            SweepParameter::TemperatureMk => p.temperature * 1e3,
        }
    }
}

impl std::str::FromStr for SweepParameter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SweepParameter::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown sweep parameter `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Axis {
    pub parameter: SweepParameter,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(parameter: SweepParameter, start: f64, stop: f64, count: usize) -> Self {
        Self { parameter, start, stop, count }
    }

    /// At least two points, except that a degenerate axis (start = stop)
    /// may hold a single point.
    pub fn validate(&self) -> Result<()> {
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(Error::Config(format!("axis `{}` bounds must be finite", self.parameter.name())));
        }
        if self.count >= 2 || (self.count == 1 && self.start == self.stop) {
            Ok(())
        } else {
            Err(Error::Config(format!("axis `{}` needs count >= 2", self.parameter.name())))
        }
    }

    /// Evenly spaced values with both endpoints hit exactly.
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let n = self.count - 1;
        (0..=n)
            .map(|i| {
                if i == n {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * (i as f64 / n as f64)
                }
            })
            .collect()
    }
}

impl std::str::FromStr for Axis {
    type Err = Error;
    /// `name:start:stop:count`
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::Config(format!("axis `{s}` must look like name:start:stop:count"));
        if parts.len() != 4 {
            return Err(bad());
        }
        let axis = Axis {
            parameter: parts[0].parse()?,
            start: parts[1].parse().map_err(|_| bad())?,
            stop: parts[2].parse().map_err(|_| bad())?,
            count: parts[3].parse().map_err(|_| bad())?,
        };
        axis.validate()?;
        Ok(axis)
    }
}

/// How much of the pipeline a sweep runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputSet {
    /// Closed-form decay ratio only.
    Eta,
    /// Mean field, effective cavity and stability; no covariance.
    MeanField,
    /// Everything through entanglement and squeezing.
    #[default]
    Full,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub base: PhysicalParams,
    pub axis1: Axis,
    pub axis2: Option<Axis>,
    pub options: MeanFieldOptions,
    pub outputs: OutputSet,
}

impl SweepSpec {
    pub fn axes(&self) -> Vec<Axis> {
        std::iter::once(self.axis1).chain(self.axis2).collect()
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        for a in self.axes() {
            a.validate()?;
        }
        if let Some(a2) = self.axis2 {
            if a2.parameter == self.axis1.parameter {
                return Err(Error::Config("both axes sweep the same parameter".into()));
            }
        }
        Ok(())
    }

    /// Parameter sets in row-major order (axis1 outer).
    pub fn grid(&self) -> Vec<(Vec<f64>, PhysicalParams)> {
        let v1 = self.axis1.values();
        let v2 = self.axis2.map(|a| a.values());
        let mut out = Vec::new();
        for &x in &v1 {
            let mut p = self.base;
            self.axis1.parameter.apply(&mut p, x);
            match (&v2, self.axis2) {
                (Some(ys), Some(a2)) => {
                    for &y in ys {
                        let mut q = p;
                        a2.parameter.apply(&mut q, y);
                        out.push((vec![x, y], q));
                    }
                }
                _ => out.push((vec![x], p)),
            }
        }
        out
    }
}

/// Every stage of the pipeline for a single parameter set.
#[derive(Debug, Clone, PartialEq)]
pub struct PointDetail {
    pub model: EffectiveModel,
    pub cavity: EffectiveCavity,
    pub thermal: ThermalEnvironment,
    pub drift: DriftMatrix,
    pub diffusion: DiffusionMatrix,
    pub stability: StabilityReport,
    pub lyapunov: Option<LyapunovSolution>,
    pub entanglement: Option<EntanglementResult>,
    pub squeezing: Option<SqueezingResult>,
    pub physicality: Option<PhysicalityReport>,
}

impl PointDetail {
    pub fn to_json(&self, with_matrices: bool) -> Value {
        let mut m = Map::new();
        m.insert("model".into(), serde_json::to_value(&self.model).expect("serializable"));
        m.insert("cavity".into(), serde_json::to_value(self.cavity).expect("serializable"));
        m.insert("thermal".into(), serde_json::to_value(self.thermal).expect("serializable"));
        m.insert("stability".into(), serde_json::to_value(self.stability).expect("serializable"));
        m.insert("entanglement".into(), serde_json::to_value(self.entanglement).expect("serializable"));
        m.insert("squeezing".into(), serde_json::to_value(self.squeezing).expect("serializable"));
        m.insert("physicality".into(), serde_json::to_value(self.physicality).expect("serializable"));
        if let Some(l) = &self.lyapunov {
            m.insert("lyapunov_residual".into(), Value::from(l.residual));
            m.insert("lyapunov_condition".into(), Value::from(l.condition));
            m.insert("warning".into(), serde_json::to_value(&l.warning).expect("serializable"));
        }
        if with_matrices {
            m.insert("drift".into(), serde_json::to_value(self.drift.rows()).expect("serializable"));
            m.insert("diffusion".into(), serde_json::to_value(self.diffusion.rows()).expect("serializable"));
            let v = self.lyapunov.as_ref().map(|l| l.v.rows());
            m.insert("covariance".into(), serde_json::to_value(v).expect("serializable"));
        }
        Value::Object(m)
    }
}

/// Steady state → feedback → drift/diffusion → stability, and for stable
/// drifts Lyapunov → measures. Unstable points return `Ok` with empty
/// covariance fields.
pub fn evaluate_point(params: &PhysicalParams, opts: &MeanFieldOptions) -> Result<PointDetail> {
    evaluate(params, opts, true)
}

fn evaluate(params: &PhysicalParams, opts: &MeanFieldOptions, covariance: bool) -> Result<PointDetail> {
    let model = solve_mean_field(params, opts)?;
    let fb = FeedbackLoop::new(params.r_b, params.theta)?;
    let cavity = effective_cavity(params.kappa_1, params.kappa_2, &fb, model.delta_bar);
    let thermal = params.thermal()?;
    let drift = build_drift(&model, &cavity, params.gamma_m, params.omega_m);
    let diffusion = build_diffusion(params.gamma_m, thermal.n_m, cavity.kappa_tilde);
    let stability = assess_stability(&drift)?;
    let mut detail = PointDetail {
        model,
        cavity,
        thermal,
        drift,
        diffusion,
        stability,
        lyapunov: None,
        entanglement: None,
        squeezing: None,
        physicality: None,
    };
    if covariance && stability.stable {
        let sol = solve_lyapunov_assessed(&drift, &diffusion, &stability)?;
        detail.entanglement = Some(log_negativity(&sol.v)?);
        detail.squeezing = Some(squeezing_degrees(&sol.v)?);
        detail.physicality = Some(physicality(&sol.v));
        detail.lyapunov = Some(sol);
    }
    Ok(detail)
}

/// One sweep row. Measure fields are `None` for unstable points, failed
/// points, and stages not requested.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultRecord {
    pub inputs: Vec<f64>,
    pub eta: Option<f64>,
    pub stable: Option<bool>,
    pub e_n: Option<f64>,
    pub s_q: Option<f64>,
    pub s_p: Option<f64>,
    pub nu_minus: Option<f64>,
    pub nu_tilde_min: Option<f64>,
    pub sigma_q: Option<f64>,
    pub sigma_p: Option<f64>,
    pub omega_eff_over_omega_m: Option<f64>,
    pub photon_number: Option<f64>,
    pub delta_bar_over_omega_m: Option<f64>,
    pub branch_count: Option<usize>,
    pub margin_over_omega_m: Option<f64>,
    pub lyapunov_residual: Option<f64>,
    pub error: Option<String>,
    /// The error came from a failed numerical self-check.
    pub internal_error: bool,
}

/// Fixed output columns following the swept inputs.
pub const RECORD_COLUMNS: [&str; 17] = [
    "eta",
    "stable",
    "e_n",
    "s_q",
    "s_p",
    "nu_minus",
    "nu_tilde_min",
    "sigma_q",
    "sigma_p",
    "omega_eff_over_omega_m",
    "photon_number",
    "delta_bar_over_omega_m",
    "branch_count",
    "margin_over_omega_m",
    "lyapunov_residual",
    "error",
    "internal_error",
];

#[derive(Debug, Clone, PartialEq)]
enum Cell<'a> {
    Float(Option<f64>),
    Bool(Option<bool>),
    Int(Option<usize>),
    Text(Option<&'a str>),
}

impl ResultRecord {
    fn cells(&self) -> [Cell<'_>; 17] {
        [
            Cell::Float(self.eta),
            Cell::Bool(self.stable),
            Cell::Float(self.e_n),
            Cell::Float(self.s_q),
            Cell::Float(self.s_p),
            Cell::Float(self.nu_minus),
            Cell::Float(self.nu_tilde_min),
            Cell::Float(self.sigma_q),
            Cell::Float(self.sigma_p),
            Cell::Float(self.omega_eff_over_omega_m),
            Cell::Float(self.photon_number),
            Cell::Float(self.delta_bar_over_omega_m),
            Cell::Int(self.branch_count),
            Cell::Float(self.margin_over_omega_m),
            Cell::Float(self.lyapunov_residual),
            Cell::Text(self.error.as_deref()),
            Cell::Bool(Some(self.internal_error)),
        ]
    }

    /// Numeric value of a fixed output column, if present.
    pub fn value(&self, column: &str) -> Option<f64> {
        let i = RECORD_COLUMNS.iter().position(|c| *c == column)?;
        match self.cells()[i] {
            Cell::Float(v) => v,
            Cell::Int(v) => v.map(|x| x as f64),
            Cell::Bool(v) => v.map(|b| if b { 1.0 } else { 0.0 }),
            Cell::Text(_) => None,
        }
    }

    fn failed(inputs: Vec<f64>, err: &Error) -> Self {
        ResultRecord {
            inputs,
            error: Some(err.to_string()),
            internal_error: err.is_internal(),
            ..Default::default()
        }
    }
}

fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Lyapunov residual above which a solution counts as numerically failed.
pub const RESIDUAL_LIMIT: f64 = 1e-10;

/// Runs the pipeline at one point. Never fails; errors land in the row.
pub fn run_point(params: &PhysicalParams, opts: &MeanFieldOptions, outputs: OutputSet) -> ResultRecord {
    run_point_with_inputs(Vec::new(), params, opts, outputs)
}

fn run_point_with_inputs(inputs: Vec<f64>, params: &PhysicalParams, opts: &MeanFieldOptions, outputs: OutputSet) -> ResultRecord {
    if outputs == OutputSet::Eta {
        return match FeedbackLoop::new(params.r_b, params.theta) {
            Ok(fb) => ResultRecord {
                inputs,
                eta: Some(effective_cavity(params.kappa_1, params.kappa_2, &fb, 0.0).eta),
                ..Default::default()
            },
            Err(e) => ResultRecord::failed(inputs, &e),
        };
    }
    let detail = match evaluate(params, opts, outputs == OutputSet::Full) {
        Ok(d) => d,
        Err(e) => return ResultRecord::failed(inputs, &e),
    };
    let wm = params.omega_m;
    let mut rec = ResultRecord {
        inputs,
        eta: Some(detail.cavity.eta),
        stable: Some(detail.stability.stable),
        omega_eff_over_omega_m: Some(detail.model.omega_eff / wm),
        photon_number: Some(detail.model.photon_number),
        delta_bar_over_omega_m: Some(detail.model.delta_bar / wm),
        branch_count: Some(detail.model.branch_count),
        margin_over_omega_m: Some(detail.stability.margin / wm),
        ..Default::default()
    };
    if let (Some(l), Some(e), Some(s), Some(ph)) = (&detail.lyapunov, detail.entanglement, detail.squeezing, detail.physicality) {
        rec.lyapunov_residual = Some(l.residual);
        rec.nu_tilde_min = Some(ph.nu_tilde_min);
        let numerically_sound = l.residual <= RESIDUAL_LIMIT && ph.cross_check_ok;
        if ph.physical && numerically_sound {
            rec.e_n = Some(e.e_n);
            rec.nu_minus = Some(e.nu_minus);
            rec.s_q = Some(s.s_q);
            rec.s_p = Some(s.s_p);
            rec.sigma_q = Some(s.sigma_q);
            rec.sigma_p = Some(s.sigma_p);
        } else if numerically_sound {
            // An accurate solution that breaks the Heisenberg bound: the
            // linearized noise model itself is outside its validity range
            // (typically Ω_m far from ω_m), not a numerical failure.
            rec.error = Some(format!(
                "unphysical steady state: min symplectic eigenvalue {:.6e} < 1/2",
                ph.nu_tilde_min
            ));
        } else {
            rec.error = Some(format!(
                "covariance failed a self-check (residual {:.3e}, symplectic routes {:.6e} vs {:.6e})",
                l.residual, ph.nu_tilde_min, ph.nu_tilde_min_invariant
            ));
            rec.internal_error = true;
        }
    }
    rec
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    /// Names of the swept inputs, in axis order.
    pub inputs: Vec<String>,
    pub rows: Vec<ResultRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Config(format!("unknown output format `{other}`"))),
        }
    }
}

impl SweepTable {
    pub fn header(&self) -> Vec<String> {
        self.inputs.iter().cloned().chain(RECORD_COLUMNS.iter().map(|s| s.to_string())).collect()
    }

    pub fn has_internal_error(&self) -> bool {
        self.rows.iter().any(|r| r.internal_error)
    }

    /// Values of an input or output column; `None` where the cell is empty.
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        if let Some(i) = self.inputs.iter().position(|c| c == name) {
            return Some(self.rows.iter().map(|r| Some(r.inputs[i])).collect());
        }
        RECORD_COLUMNS
            .contains(&name)
            .then(|| self.rows.iter().map(|r| r.value(name)).collect())
    }

    /// Row with the largest value in `column` (first one on ties).
    pub fn argmax(&self, column: &str) -> Option<usize> {
        grid_argmax(&self.column(column)?)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(self.header()).map_err(csv_error)?;
        for r in &self.rows {
            let mut fields: Vec<String> = r.inputs.iter().map(|&x| format_float(x)).collect();
            for c in r.cells() {
                fields.push(match c {
                    Cell::Float(v) => v.map(format_float).unwrap_or_default(),
                    Cell::Bool(v) => v.map(|b| b.to_string()).unwrap_or_default(),
                    Cell::Int(v) => v.map(|x| x.to_string()).unwrap_or_default(),
                    Cell::Text(v) => v.unwrap_or_default().to_string(),
                });
            }
            wr.write_record(&fields).map_err(csv_error)?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    pub fn to_json(&self) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut m = Map::new();
                for (name, &x) in self.inputs.iter().zip(&r.inputs) {
                    m.insert(name.clone(), Value::from(x));
                }
                for (name, c) in RECORD_COLUMNS.iter().zip(r.cells()) {
                    let v = match c {
                        Cell::Float(v) => v.filter(|x| x.is_finite()).map(Value::from).unwrap_or(Value::Null),
                        Cell::Bool(v) => v.map(Value::from).unwrap_or(Value::Null),
                        Cell::Int(v) => v.map(Value::from).unwrap_or(Value::Null),
                        Cell::Text(v) => v.map(Value::from).unwrap_or(Value::Null),
                    };
                    m.insert(name.to_string(), v);
                }
                Value::Object(m)
            })
            .collect();
        Value::Array(rows)
    }

    pub fn write<W: Write>(&self, format: OutputFormat, mut w: W) -> Result<()> {
        match format {
            OutputFormat::Csv => self.write_csv(w),
            OutputFormat::Json => {
                serde_json::to_writer_pretty(&mut w, &self.to_json()).map_err(|e| Error::Io(e.into()))?;
                writeln!(w)?;
                Ok(())
            }
        }
    }

    pub fn emit(&self, format: OutputFormat, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)?;
        let mut w = std::io::BufWriter::new(file);
        self.write(format, &mut w)?;
        w.flush()?;
        Ok(())
    }
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Io(std::io::Error::other(format!("{other:?}"))),
    }
}

/// Decay-ratio surface as CSV with columns r_b, theta, eta.
pub fn write_eta_grid<W: Write>(points: &[EtaPoint], w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["r_b", "theta", "eta"]).map_err(csv_error)?;
    for p in points {
        wr.write_record([format_float(p.r_b), format_float(p.theta), format_float(p.eta)])
            .map_err(csv_error)?;
    }
    wr.flush()?;
    Ok(())
}

/// Index of the largest present value (first one on ties).
pub fn grid_argmax(values: &[Option<f64>]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in values.iter().enumerate() {
        if let Some(x) = v.filter(|x| !x.is_nan()) {
            if best.map_or(true, |(_, b)| x > b) {
                best = Some((i, x));
            }
        }
    }
    best.map(|(i, _)| i)
}

fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if workers == 0 {
        return Err(Error::Config("workers must be >= 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(f))
}

/// Evaluates the grid with at most `workers` threads. Row order is the
/// row-major grid order whatever the parallelism.
pub fn run_sweep(spec: &SweepSpec, workers: usize) -> Result<SweepTable> {
    spec.validate()?;
    let grid = spec.grid();
    let eval = |(inputs, p): (Vec<f64>, PhysicalParams)| run_point_with_inputs(inputs, &p, &spec.options, spec.outputs);
    let rows = if workers == 1 {
        grid.into_iter().map(eval).collect()
    } else {
        with_workers(workers, || grid.into_par_iter().map(eval).collect())?
    };
    Ok(SweepTable {
        inputs: spec.axes().iter().map(|a| a.parameter.name().to_string()).collect(),
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Peak {
    /// Location and value of the plain grid maximum.
    pub grid_x: f64,
    pub grid_value: f64,
    /// After local zooming.
    pub x: f64,
    pub value: f64,
}

/// Grid maximum of `f` on [lo, hi] with `count` points, followed by
/// `levels` rounds of zooming onto the bracket around the current best
/// point. `f` returns `None` where it is undefined (e.g. unstable).
pub fn refine_peak<F>(f: F, lo: f64, hi: f64, count: usize, levels: usize) -> Option<Peak>
where
    F: Fn(f64) -> Option<f64> + Sync,
{
    let scan = |a: f64, b: f64| -> (Vec<f64>, Vec<Option<f64>>) {
        let xs = Axis::new(SweepParameter::Delta, a, b, count.max(3)).values();
        let ys = xs.par_iter().map(|&x| f(x)).collect();
        (xs, ys)
    };
    let (xs, ys) = scan(lo, hi);
    let i = grid_argmax(&ys)?;
    let mut peak = Peak {
        grid_x: xs[i],
        grid_value: ys[i].unwrap(),
        x: xs[i],
        value: ys[i].unwrap(),
    };
    let mut step = xs[1] - xs[0];
    for _ in 0..levels {
        let a = (peak.x - step).max(lo);
        let b = (peak.x + step).min(hi);
        let (xs, ys) = scan(a, b);
        if let Some(j) = grid_argmax(&ys) {
            if ys[j].unwrap() > peak.value {
                peak.x = xs[j];
                peak.value = ys[j].unwrap();
            }
        }
        step = xs[1] - xs[0];
    }
    Some(peak)
}
