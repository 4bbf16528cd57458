use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use comtool::feedback::{delay_validity, effective_cavity, eta_grid, noise_normalization_residual, FeedbackLoop};
use comtool::membrane::MembraneGeometry;
use comtool::presets::{self, PresetId, R_B_MAX, SURFACE_POINTS};
use comtool::steady_state::solve_mean_field;
use comtool::sweep::{evaluate_point, refine_peak, write_eta_grid, Axis, SweepParameter};
use comtool::{
    run_point, run_sweep, BranchRule, Config, DetuningMode, Error, G1Convention, MeanFieldOptions, OutputFormat,
    OutputSet, SweepSpec, SweepTable,
};

const EXIT_CONFIG: u8 = 1;
const EXIT_IO: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(name = "comtool", version, about = "Optomechanical entanglement and squeezing with quadratic coupling and coherent feedback")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand a membrane geometry into (omega_c, g1, g2, sigma).
    Couplings {
        /// JSON file with reflectivity, equilibrium_position, half_length, mode_number.
        #[arg(long)]
        config: PathBuf,
        /// Mechanical frequency (Hz) for the adiabatic-following check.
        #[arg(long)]
        omega_m_hz: Option<f64>,
    },
    /// Mean-field steady state with every admissible branch.
    Steady {
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Feedback-modified cavity decay and detuning.
    Feedback {
        #[command(flatten)]
        model: ModelArgs,
        /// Emit the decay ratio over an (r_b, theta) grid as CSV instead.
        #[arg(long)]
        eta_grid: bool,
        /// Feedback loop length (m) for the delay check.
        #[arg(long)]
        loop_length: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        refractive_index: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Full pipeline at a single parameter point.
    Point {
        #[command(flatten)]
        model: ModelArgs,
        /// Include drift, diffusion and covariance matrices.
        #[arg(long)]
        dump_matrices: bool,
    },
    /// Sweep one or two parameters of a configuration.
    Sweep {
        #[command(flatten)]
        model: ModelArgs,
        /// name:start:stop:count, given once or twice.
        #[arg(long = "axis", required = true)]
        axes: Vec<String>,
        /// full | mean_field | eta
        #[arg(long, default_value = "full")]
        outputs: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run a reference parameter study.
    Preset {
        /// fig2a | fig2b | fig3a ... fig3f | fig4a ... fig4f
        id: String,
        #[arg(long)]
        detuning_mode: Option<String>,
        #[arg(long)]
        g1_convention: Option<String>,
        /// Replace the preset axes (name:start:stop:count).
        #[arg(long = "axis")]
        axes: Vec<String>,
        /// Override a fixed parameter, e.g. --fix delta=0.3.
        #[arg(long = "fix")]
        fixes: Vec<String>,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args)]
struct ModelArgs {
    /// Flat JSON configuration.
    #[arg(long)]
    config: PathBuf,
    /// delta_c | delta_bar | delta_tilde (overrides the config).
    #[arg(long)]
    detuning_mode: Option<String>,
    /// hz_times_2pi | rad_per_s (overrides the config).
    #[arg(long)]
    g1_convention: Option<String>,
    /// lowest | highest | index:k
    #[arg(long, default_value = "lowest")]
    branch: String,
    #[arg(long)]
    feedback_in_mean_field: bool,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv | json
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long)]
    workers: Option<usize>,
    /// Report the row maximizing this column.
    #[arg(long)]
    argmax: Option<String>,
    /// With --argmax on a 1D sweep, zoom onto the maximum this many times.
    #[arg(long, default_value_t = 0)]
    refine: usize,
}

enum Failure {
    Config(String),
    Io(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match &e {
            Error::Io(_) => Failure::Io(e.to_string()),
            _ if e.is_internal() => Failure::Internal(e.to_string()),
            _ => Failure::Config(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Io(m)) => {
            eprintln!("I/O error: {m}");
            ExitCode::from(EXIT_IO)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("internal consistency failure: {m}");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

struct Model {
    config: Config,
    params: comtool::PhysicalParams,
    options: MeanFieldOptions,
}

fn load_model(args: &ModelArgs) -> Result<Model, Failure> {
    let mut config = Config::from_json(&read_text(&args.config)?)?;
    if let Some(m) = &args.detuning_mode {
        config.detuning_mode = m.parse::<DetuningMode>()?;
    }
    if let Some(c) = &args.g1_convention {
        config.g1_convention = c.parse::<G1Convention>()?;
    }
    let params = config.to_params()?;
    let options = MeanFieldOptions {
        detuning_mode: config.detuning_mode,
        branch: args.branch.parse::<BranchRule>()?,
        feedback_in_mean_field: args.feedback_in_mean_field,
    };
    Ok(Model { config, params, options })
}

fn print_json(v: &Value) -> Result<(), Failure> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v).map_err(|e| Failure::Io(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Couplings { config, omega_m_hz } => {
            let geom: MembraneGeometry =
                serde_json::from_str(&read_text(&config)?).map_err(|e| Failure::Config(e.to_string()))?;
            let exp = geom.expand_couplings()?;
            let warnings = geom.warnings(omega_m_hz.map(|f| 2.0 * std::f64::consts::PI * f));
            for w in &warnings {
                eprintln!("warning: {w}");
            }
            print_json(&json!({
                "omega_c": exp.omega_c,
                "g_1": exp.g_1,
                "g_2": exp.g_2,
                "sigma": exp.sigma,
                "warnings": warnings,
            }))
        }
        Command::Steady { model } => {
            let m = load_model(&model)?;
            let em = solve_mean_field(&m.params, &m.options)?;
            let mut v = serde_json::to_value(&em).map_err(|e| Failure::Internal(e.to_string()))?;
            v["detuning_mode"] = json!(m.config.detuning_mode.as_str());
            v["omega_eff_over_omega_m"] = json!(em.omega_eff / m.params.omega_m);
            print_json(&v)
        }
        Command::Feedback { model, eta_grid: grid, loop_length, refractive_index, out } => {
            let m = load_model(&model)?;
            let p = m.params;
            if grid {
                let rs = Axis::new(SweepParameter::RB, 0.0, R_B_MAX, SURFACE_POINTS).values();
                let ths = Axis::new(SweepParameter::Theta, 0.0, 2.0 * std::f64::consts::PI, SURFACE_POINTS).values();
                let points = eta_grid(p.kappa_1, p.kappa_2, &rs, &ths)?;
                return match out {
                    Some(path) => {
                        let f = std::fs::File::create(&path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
                        Ok(write_eta_grid(&points, std::io::BufWriter::new(f))?)
                    }
                    None => Ok(write_eta_grid(&points, std::io::stdout().lock())?),
                };
            }
            let fb = FeedbackLoop::new(p.r_b, p.theta)?;
            let em = solve_mean_field(&p, &m.options)?;
            let cav = effective_cavity(p.kappa_1, p.kappa_2, &fb, em.delta_bar);
            let mut v = serde_json::to_value(cav).map_err(|e| Failure::Internal(e.to_string()))?;
            v["delta_bar"] = json!(em.delta_bar);
            v["noise_normalization_residual"] = json!(noise_normalization_residual(p.kappa_1, p.kappa_2, &fb));
            if let Some(len) = loop_length {
                let report = delay_validity(len, refractive_index, cav.kappa_tilde);
                if !report.valid {
                    eprintln!("warning: feedback delay {:.3e} s is not negligible against the cavity lifetime {:.3e} s", report.delay, report.lifetime);
                }
                v["delay"] = serde_json::to_value(report).map_err(|e| Failure::Internal(e.to_string()))?;
            }
            print_json(&v)
        }
        Command::Point { model, dump_matrices } => {
            let m = load_model(&model)?;
            let detail = evaluate_point(&m.params, &m.options)?;
            if let Some(w) = detail.lyapunov.as_ref().and_then(|l| l.warning.as_ref()) {
                eprintln!("warning: {w}");
            }
            let mut v = detail.to_json(dump_matrices);
            let rec = run_point(&m.params, &m.options, OutputSet::Full);
            v["stable"] = json!(rec.stable);
            print_json(&v)
        }
        Command::Sweep { model, axes, outputs, run } => {
            let m = load_model(&model)?;
            let spec = SweepSpec {
                base: m.params,
                axis1: axes[0].parse::<Axis>()?,
                axis2: axes.get(1).map(|a| a.parse::<Axis>()).transpose()?,
                options: m.options,
                outputs: parse_outputs(&outputs)?,
            };
            if axes.len() > 2 {
                return Err(Failure::Config("at most two --axis options".into()));
            }
            execute(&spec, &run)
        }
        Command::Preset { id, detuning_mode, g1_convention, axes, fixes, run } => {
            let id: PresetId = id.parse()?;
            let mode = match detuning_mode {
                Some(s) => s.parse()?,
                None => presets::CALIBRATED_DETUNING_MODE,
            };
            let conv = match g1_convention {
                Some(s) => s.parse()?,
                None => presets::CALIBRATED_G1_CONVENTION,
            };
            let mut spec = presets::preset_with(id, conv, mode);
            if let Some(note) = id.notes() {
                eprintln!("note: {note}");
            }
            for f in &fixes {
                let (name, value) = f
                    .split_once('=')
                    .ok_or_else(|| Failure::Config(format!("--fix `{f}` must look like name=value")))?;
                let param: SweepParameter = name.parse()?;
                let value: f64 = value.parse().map_err(|_| Failure::Config(format!("bad value in --fix `{f}`")))?;
                param.apply(&mut spec.base, value);
            }
            if !axes.is_empty() {
                if axes.len() > 2 {
                    return Err(Failure::Config("at most two --axis options".into()));
                }
                spec.axis1 = axes[0].parse::<Axis>()?;
                spec.axis2 = axes.get(1).map(|a| a.parse::<Axis>()).transpose()?;
            }
            execute(&spec, &run)
        }
    }
}

fn parse_outputs(s: &str) -> Result<OutputSet, Failure> {
    match s {
        "full" => Ok(OutputSet::Full),
        "mean_field" => Ok(OutputSet::MeanField),
        "eta" => Ok(OutputSet::Eta),
        other => Err(Failure::Config(format!("unknown output set `{other}`"))),
    }
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn execute(spec: &SweepSpec, run: &RunArgs) -> Result<(), Failure> {
    let format: OutputFormat = run.format.parse()?;
    let workers = run.workers.unwrap_or_else(default_workers);
    let table = run_sweep(spec, workers)?;
    match &run.out {
        Some(path) => table
            .emit(format, path)
            .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?,
        None => table.write(format, std::io::stdout().lock())?,
    }
    if let Some(col) = &run.argmax {
        report_argmax(spec, &table, col, run)?;
    }
    let failures = table.rows.iter().filter(|r| r.internal_error).count();
    if failures > 0 {
        return Err(Failure::Internal(format!("{failures} row(s) failed a numerical self-check")));
    }
    Ok(())
}

fn report_argmax(spec: &SweepSpec, table: &SweepTable, column: &str, run: &RunArgs) -> Result<(), Failure> {
    let values = table
        .column(column)
        .ok_or_else(|| Failure::Config(format!("unknown column `{column}`")))?;
    let Some(i) = comtool::sweep::grid_argmax(&values) else {
        eprintln!("argmax: column `{column}` has no values");
        return Ok(());
    };
    let row = &table.rows[i];
    let mut v = json!({ "column": column, "row": i, "value": values[i] });
    for (name, x) in table.inputs.iter().zip(&row.inputs) {
        v[name] = json!(x);
    }
    if run.refine > 0 && spec.axis2.is_none() {
        let axis = spec.axis1;
        let step = (axis.stop - axis.start) / (axis.count.max(2) - 1) as f64;
        let probe = |x: f64| {
            let mut p = spec.base;
            axis.parameter.apply(&mut p, x);
            run_point(&p, &spec.options, spec.outputs).value(column)
        };
        let lo = row.inputs[0] - step;
        let hi = row.inputs[0] + step;
        if let Some(peak) = refine_peak(probe, lo.min(hi), lo.max(hi), 41, run.refine) {
            v["refined"] = json!({ "x": peak.x, "value": peak.value });
        }
    }
    // Keep stdout clean for the table when it goes there.
    let text = serde_json::to_string_pretty(&v).map_err(|e| Failure::Internal(e.to_string()))?;
    if run.out.is_some() {
        println!("{text}");
    } else {
        eprintln!("{text}");
    }
    Ok(())
}
