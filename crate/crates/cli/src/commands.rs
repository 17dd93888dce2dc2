use std::fs;
use std::path::Path;

use emwave_core::appendix::{self, Fault, Status, VerificationReport};
use emwave_core::causal::{
    earliest_observation_set, observation_set, CausalError, FanResolution, ObservationSet,
    ObserverRegion, TraceOptions, WarpedMetric,
};
use emwave_core::io::{
    covector_strings, parse_config, to_json, ConfigFile, SymbolReport, APPENDIX_SCHEMA,
    OBSERVE_SCHEMA, SEARCH_SCHEMA, SIMULATE_SCHEMA,
};
use emwave_core::scalar::{parse_rational, GaussRational};
use emwave_core::symbol::symbol_breakdown;
use emwave_core::tensor::Covector4;
use emwave_core::variety::{search_nondegenerate, SamplingBox, VarietyError, VarietyPoint};
use emwave_core::weakfield::{
    run_simulation, ConormalSourceSpec, Diagnostics, SimulationConfig, WeakfieldError,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::output::Outputs;
use crate::{Cli, Command, SearchArgs, SimulateArgs};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}: {1}")]
    Io(String, #[source] std::io::Error),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(..) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<WeakfieldError> for CliError {
    fn from(e: WeakfieldError) -> Self {
        match e {
            WeakfieldError::NonFinite { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<CausalError> for CliError {
    fn from(e: CausalError) -> Self {
        match e {
            CausalError::StepUnderflow(_)
            | CausalError::Metric { .. }
            | CausalError::ChartInvalid { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    serde_json::from_str(&read_text(path)?)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn say(cli: &Cli, msg: impl AsRef<str>) {
    if !cli.quiet {
        println!("{}", msg.as_ref());
    }
}

/// Runs the selected subcommand and returns its exit status.
pub fn run(cli: &Cli) -> Result<u8, CliError> {
    match &cli.command {
        Command::VerifyAppendix { inject_fault } => verify_appendix(cli, inject_fault.as_deref()),
        Command::Symbol => symbol(cli),
        Command::Search(args) => search(cli, args),
        Command::Simulate(args) => simulate(cli, args),
        Command::Observe => observe(cli),
    }
}

#[derive(Serialize)]
struct AppendixOutput<'a> {
    schema: &'static str,
    all_match: bool,
    fault: Option<&'static str>,
    report: &'a VerificationReport,
}

fn verify_appendix(cli: &Cli, fault: Option<&str>) -> Result<u8, CliError> {
    let fault = match fault {
        Some(name) => Some(Fault::from_name(name).ok_or_else(|| {
            let known: Vec<&str> = Fault::ALL.iter().map(|f| f.name()).collect();
            CliError::Usage(format!(
                "unknown fault {name:?}; expected one of {}",
                known.join(", ")
            ))
        })?),
        None => None,
    };
    let report = appendix::verify(fault).map_err(|e| CliError::Usage(e.to_string()))?;
    for item in &report.items {
        let status = if item.status == Status::Match {
            "MATCH"
        } else {
            "MISMATCH"
        };
        say(
            cli,
            format!("{status:8} {:12} {}", item.category, item.name),
        );
    }
    let all_match = report.all_match();
    let mut out = Outputs::create(&cli.out)?;
    let body = AppendixOutput {
        schema: APPENDIX_SCHEMA,
        all_match,
        fault: fault.map(Fault::name),
        report: &report,
    };
    out.write("appendix_report.json", to_json(&body).as_bytes())?;
    let config = serde_json::json!({ "schema": APPENDIX_SCHEMA, "fault": fault.map(Fault::name) });
    out.finish(
        "verify-appendix",
        cli.config.as_deref(),
        cli.seed,
        &to_json(&config),
    )?;
    if let Some(first) = report.first_mismatch() {
        eprintln!(
            "mismatch: {} {}: {}",
            first.category,
            first.name,
            first.first_mismatch.as_deref().unwrap_or("differs")
        );
        return Ok(1);
    }
    say(cli, format!("all {} items match", report.items.len()));
    Ok(0)
}

fn symbol(cli: &Cli) -> Result<u8, CliError> {
    let path = cli
        .config
        .as_deref()
        .ok_or_else(|| CliError::Usage("symbol requires --config".into()))?;
    let cfg = parse_config(&read_text(path)?)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let breakdown = symbol_breakdown(&cfg).map_err(|e| CliError::Usage(e.to_string()))?;
    let report = SymbolReport::new(&breakdown);
    let t: Vec<&str> = report.t_vector.iter().map(|v| v.decimal.as_str()).collect();
    say(cli, format!("T = c_π({})", t.join(", ")));
    let mut out = Outputs::create(&cli.out)?;
    out.write("symbol.json", to_json(&report).as_bytes())?;
    let mut file = ConfigFile::from_config(&cfg);
    file.schema = Some(emwave_core::io::SYMBOL_SCHEMA.into());
    out.finish("symbol", Some(path), cli.seed, &to_json(&file))?;
    Ok(0)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SearchConfig {
    /// Target covector as exact strings; the reference sum when absent.
    #[serde(default)]
    target: Option<Vec<String>>,
    #[serde(default = "default_half_width")]
    half_width: String,
    #[serde(default = "default_max_iter")]
    max_iter: usize,
    /// Candidate 0 is the reference configuration itself.
    #[serde(default)]
    include_center: bool,
}

fn default_half_width() -> String {
    "1/3".into()
}

fn default_max_iter() -> usize {
    50
}

#[derive(Serialize)]
struct SearchOutput<'a> {
    schema: &'static str,
    seed: u64,
    target: Vec<String>,
    found: bool,
    iterations: usize,
    determinant_nonzero: bool,
    point: Option<&'a VarietyPoint>,
    best_abs_determinant: Option<String>,
}

fn search(cli: &Cli, args: &SearchArgs) -> Result<u8, CliError> {
    let mut cfg: SearchConfig = match &cli.config {
        Some(p) => read_json(p)?,
        None => SearchConfig {
            target: None,
            half_width: default_half_width(),
            max_iter: default_max_iter(),
            include_center: false,
        },
    };
    if let Some(m) = args.max_iter {
        cfg.max_iter = m;
    }
    let target = match &cfg.target {
        None => appendix::reference_target(),
        Some(parts) if parts.len() == 4 => {
            let mut c = Covector4::zero();
            for (k, s) in parts.iter().enumerate() {
                c.0[k] = GaussRational::parse(s)
                    .map_err(|e| CliError::Usage(format!("target[{k}]: {e}")))?;
            }
            c
        }
        Some(parts) => {
            return Err(CliError::Usage(format!(
                "target: expected 4 components, found {}",
                parts.len()
            )))
        }
    };
    cfg.target = Some(covector_strings(&target));
    let half_width =
        parse_rational(&cfg.half_width).map_err(|e| CliError::Usage(format!("half_width: {e}")))?;
    let bx = SamplingBox::around_reference(half_width, cfg.include_center);
    let result = search_nondegenerate(&target, &bx, cli.seed, cfg.max_iter);
    let mut out = Outputs::create(&cli.out)?;
    let (body, code) = match &result {
        Ok(point) => {
            say(
                cli,
                format!(
                    "nondegenerate configuration at candidate {}: D = {}",
                    point.iteration, point.determinant
                ),
            );
            (
                SearchOutput {
                    schema: SEARCH_SCHEMA,
                    seed: cli.seed,
                    target: covector_strings(&target),
                    found: true,
                    iterations: point.iteration + 1,
                    determinant_nonzero: !point.determinant.is_zero(),
                    point: Some(point),
                    best_abs_determinant: None,
                },
                0,
            )
        }
        Err(VarietyError::Exhausted {
            iterations,
            best_abs_determinant,
            best,
        }) => {
            eprintln!("no nondegenerate configuration in {iterations} candidates");
            (
                SearchOutput {
                    schema: SEARCH_SCHEMA,
                    seed: cli.seed,
                    target: covector_strings(&target),
                    found: false,
                    iterations: *iterations,
                    determinant_nonzero: false,
                    point: best.as_deref(),
                    best_abs_determinant: Some(best_abs_determinant.clone()),
                },
                1,
            )
        }
        Err(e) => return Err(CliError::Usage(e.to_string())),
    };
    out.write("variety_point.json", to_json(&body).as_bytes())?;
    out.finish("search", cli.config.as_deref(), cli.seed, &to_json(&cfg))?;
    Ok(code)
}

#[derive(Serialize)]
struct SimulateOutput<'a> {
    schema: &'static str,
    diagnostics: &'a Diagnostics,
}

fn simulate(cli: &Cli, args: &SimulateArgs) -> Result<u8, CliError> {
    let mut cfg: SimulationConfig = match &cli.config {
        Some(p) => read_json(p)?,
        None => SimulationConfig::default(),
    };
    if let Some(points) = args.points {
        let lambda = cfg.response_lambda;
        cfg = SimulationConfig::standard(points, args.cfl)?;
        cfg.response_lambda = lambda;
    }
    if let Some(p) = &args.source {
        cfg.source = read_json::<ConormalSourceSpec>(p)?;
    }
    if args.no_response {
        cfg.response_lambda = None;
    }
    say(
        cli,
        format!("simulating {}³ × {} steps", cfg.grid.points, cfg.grid.steps),
    );
    let output = run_simulation(&cfg)?;
    let d = &output.diagnostics;
    say(
        cli,
        format!(
            "tube ratio {:.4}, max Ĥ₂,₀₀ violation {:e}",
            d.tube.ratio, d.h2_00_max_violation
        ),
    );
    if let Some(r) = d.response_ratio {
        say(cli, format!("quadratic response ratio {r:.6}"));
    }
    let mut out = Outputs::create(&cli.out)?;
    out.write(
        "diagnostics.json",
        to_json(&SimulateOutput {
            schema: SIMULATE_SCHEMA,
            diagnostics: d,
        })
        .as_bytes(),
    )?;
    out.write("slice.csv", output.slice_csv().as_bytes())?;
    out.write("timeline.csv", output.timeline_csv().as_bytes())?;
    out.write("g1_slice.pgm", &output.g1_pgm())?;
    out.write("h2_00_slice.pgm", &output.h2_00_pgm())?;
    out.finish("simulate", cli.config.as_deref(), cli.seed, &to_json(&cfg))?;
    Ok(0)
}

/// Observation-set run: metric family, source point, observer tubes and fan.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObserveConfig {
    pub metric: WarpedMetric,
    pub source: [f64; 4],
    pub region: ObserverRegion,
    pub fan: FanResolution,
    #[serde(default)]
    pub options: TraceOptions,
}

impl Default for ObserveConfig {
    fn default() -> Self {
        let r = 1.0;
        ObserveConfig {
            metric: WarpedMetric::Minkowski,
            source: [0.0; 4],
            region: ObserverRegion {
                centers: vec![
                    [r, 0.0, 0.0],
                    [-r, 0.0, 0.0],
                    [0.0, r, 0.0],
                    [0.0, -r, 0.0],
                    [0.0, 0.0, r],
                    [0.0, 0.0, -r],
                ],
                radius: 0.15,
                t_range: [0.0, 3.0],
            },
            fan: FanResolution {
                polar: 24,
                azimuth: 48,
            },
            options: TraceOptions::default(),
        }
    }
}

#[derive(Serialize)]
struct ObserveOutput<'a> {
    schema: &'static str,
    samples: usize,
    earliest: &'a ObservationSet,
}

fn observe(cli: &Cli) -> Result<u8, CliError> {
    let cfg: ObserveConfig = match &cli.config {
        Some(p) => read_json(p)?,
        None => ObserveConfig::default(),
    };
    let obs = observation_set(&cfg.metric, cfg.source, &cfg.region, cfg.fan, &cfg.options)?;
    let earliest = earliest_observation_set(&obs);
    say(
        cli,
        format!(
            "{} samples, {} earliest",
            obs.samples.len(),
            earliest.samples.len()
        ),
    );
    let mut out = Outputs::create(&cli.out)?;
    out.write("observation.csv", obs.to_csv().as_bytes())?;
    let body = ObserveOutput {
        schema: OBSERVE_SCHEMA,
        samples: obs.samples.len(),
        earliest: &earliest,
    };
    out.write("earliest.json", to_json(&body).as_bytes())?;
    out.finish("observe", cli.config.as_deref(), cli.seed, &to_json(&cfg))?;
    Ok(0)
}
