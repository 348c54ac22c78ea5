use bosonbell::figures::FigurePreset;
use bosonbell::inequalities::{evaluate, MeasurementSettings};
use bosonbell::localization::{
    delta_cube, scaling_factor, LocalizationParams, ELECTRON_COMPTON_REDUCED, MUON_COMPTON_REDUCED,
};
use bosonbell::optimizer::{self, x_grid, OptimizerConfig, RNG_ALGORITHM};
use bosonbell::probabilities::{prob_table_trace, SUM_TOL};
use bosonbell::{ComState, Direction, InequalityKind, ProbabilityTable};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::args::{
    Engine, FigureArgs, Format, GridArgs, IneqArgs, LocalizeArgs, OptimizeArgs, Particle,
    ProbsArgs, ScanArgs, StateSel,
};
use crate::output::{csv_line, direction, fmt_num, num, pretty, table};

/// Largest allowed deviation from unit sum before a table is rejected.
pub const NORMALIZATION_TOL: f64 = 1e-8;
/// Largest allowed elementwise difference between engines under `--check`.
pub const ENGINE_AGREEMENT_TOL: f64 = SUM_TOL;

const DIRECTION_NAMES: [&str; 4] = ["a", "b", "c", "d"];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numerical(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<bosonbell::Error> for CliError {
    fn from(e: bosonbell::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

/// Rendered output plus optional settings record for tabular output.
#[derive(Debug)]
pub struct Rendered {
    pub text: String,
    pub sidecar: Option<Value>,
}

impl Rendered {
    fn text(text: String) -> Self {
        Self {
            text,
            sidecar: None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct OutputOpts {
    pub format: Format,
    pub digits: u32,
}

fn state_json(sel: StateSel, state: &ComState, d: u32) -> Value {
    json!({
        "name": sel.label(),
        "c": num(state.c, d),
        "x": num(state.x, d),
        "n": direction(&state.n, d),
    })
}

fn settings_json(settings: &MeasurementSettings, d: u32) -> Value {
    let mut m = Map::new();
    for (name, dir) in DIRECTION_NAMES.iter().zip(settings.directions()) {
        m.insert((*name).into(), direction(&dir, d));
    }
    Value::Object(m)
}

fn checked(t: ProbabilityTable) -> Result<ProbabilityTable, CliError> {
    t.check_normalized(NORMALIZATION_TOL)?;
    Ok(t)
}

pub fn probs(args: &ProbsArgs, o: OutputOpts) -> Result<Rendered, CliError> {
    let sel = args.state.selection();
    let state = ComState::new(sel.c(), args.state.x, args.state.n)?;
    let mut engines: Vec<Engine> = Vec::new();
    for e in &args.engine {
        if !engines.contains(e) {
            engines.push(*e);
        }
    }
    if args.check && engines.len() < 2 {
        engines = vec![Engine::Closed, Engine::Trace];
    }
    if engines.is_empty() {
        engines.push(Engine::Closed);
    }

    let mut tables = Vec::with_capacity(engines.len());
    for e in &engines {
        let t = match e {
            Engine::Closed => state.table(&args.a, &args.b)?,
            Engine::Trace => prob_table_trace(&state.spec(1.0)?, &args.a, &args.b)?,
        };
        tables.push(checked(t)?);
    }
    let deviation = args.check.then(|| tables[0].max_abs_diff(&tables[1]));

    let d = o.digits;
    let text = match o.format {
        Format::Json => {
            let mut v = json!({
                "command": "probs",
                "state": state_json(sel, &state, d),
                "a": direction(&args.a, d),
                "b": direction(&args.b, d),
                "engine": engines[0].name(),
                "p": table(&tables[0], d),
                "sum": num(tables[0].sum(), d),
                "correlation": num(tables[0].correlation(), d),
            });
            if engines.len() > 1 {
                let mut all = Map::new();
                for (e, t) in engines.iter().zip(&tables) {
                    all.insert(
                        e.name().into(),
                        json!({
                            "p": table(t, d),
                            "sum": num(t.sum(), d),
                            "correlation": num(t.correlation(), d),
                        }),
                    );
                }
                v["engines"] = Value::Object(all);
            }
            if let Some(dev) = deviation {
                v["max_deviation"] = json!(dev);
            }
            pretty(&v)
        }
        Format::Csv => {
            let mut s = csv_line(["engine", "alice", "bob", "probability"]);
            for (e, t) in engines.iter().zip(&tables) {
                for a in bosonbell::Outcome::ALL {
                    for b in bosonbell::Outcome::ALL {
                        s.push_str(&csv_line([
                            e.name(),
                            a.label(),
                            b.label(),
                            &fmt_num(t.get(a, b), d),
                        ]));
                    }
                }
            }
            s
        }
    };
    if let Some(dev) = deviation {
        if dev > ENGINE_AGREEMENT_TOL {
            return Err(CliError::Numerical(format!(
                "engines disagree: max elementwise deviation {dev:e}"
            )));
        }
    }
    Ok(Rendered::text(text))
}

fn preset(id: u8) -> Result<FigurePreset, CliError> {
    FigurePreset::by_id(id).map_err(|e| CliError::Usage(e.to_string()))
}

fn settings_for(kind: InequalityKind, dirs: &[Direction]) -> Result<MeasurementSettings, CliError> {
    let need = kind.direction_count();
    if dirs.len() != need {
        return Err(CliError::Usage(format!(
            "{kind} needs {need} directions, got {}",
            dirs.len()
        )));
    }
    Ok(MeasurementSettings::from_slice(dirs)?)
}

pub fn ineq(args: &IneqArgs, o: OutputOpts) -> Result<Rendered, CliError> {
    let dirs = match args.fig {
        Some(id) => preset(id)?.directions(),
        None => {
            let given = [args.a, args.b, args.c, args.d];
            let count = given.iter().take_while(|d| d.is_some()).count();
            if given[count..].iter().any(Option::is_some) {
                return Err(CliError::Usage(
                    "directions must be given in order a, b, c, d".into(),
                ));
            }
            given[..count].iter().flatten().copied().collect()
        }
    };
    let settings = settings_for(args.kind, &dirs)?;
    let state = ComState::new(args.state.c(), args.x, args.n)?;
    let r = evaluate(args.kind, &state, &settings)?;

    let d = o.digits;
    let text = match o.format {
        Format::Json => pretty(&json!({
            "command": "ineq",
            "kind": r.kind.name(),
            "value": num(r.value, d),
            "bound": num(r.classical_bound, d),
            "violated": r.violated,
            "state": state_json(args.state, &state, d),
            "directions": settings_json(&settings, d),
            "figure": args.fig,
        })),
        Format::Csv => {
            csv_line(["kind", "state", "c", "x", "value", "bound", "violated"])
                + &csv_line([
                    r.kind.name().to_string(),
                    args.state.label(),
                    fmt_num(state.c, d),
                    fmt_num(state.x, d),
                    fmt_num(r.value, d),
                    fmt_num(r.classical_bound, d),
                    r.violated.to_string(),
                ])
        }
    };
    Ok(Rendered::text(text))
}

struct ScanJob {
    command: &'static str,
    kind: InequalityKind,
    figure: Option<u8>,
    settings: MeasurementSettings,
    n: Direction,
    states: Vec<StateSel>,
}

fn run_scan(job: ScanJob, grid: &GridArgs, o: OutputOpts) -> Result<Rendered, CliError> {
    let xs = x_grid(grid.xmin, grid.xmax, grid.step)?;
    let cs: Vec<f64> = job.states.iter().map(|s| s.c()).collect();
    let rows = optimizer::scan(job.kind, &job.settings, job.n, &cs, &xs)?;
    let bound = job.kind.classical_bound();
    let d = o.digits;

    let mut columns = vec!["x".to_string()];
    columns.extend(job.states.iter().map(|s| s.column()));
    columns.push("bound".into());

    let meta = json!({
        "command": job.command,
        "kind": job.kind.name(),
        "figure": job.figure,
        "bound": num(bound, d),
        "n": direction(&job.n, d),
        "directions": settings_json(&job.settings, d),
        "states": job.states.iter().map(|s| json!({
            "column": s.column(),
            "name": s.label(),
            "c": num(s.c(), d),
        })).collect::<Vec<_>>(),
        "grid": {
            "x_min": num(grid.xmin, d),
            "x_max": num(grid.xmax, d),
            "step": num(grid.step, d),
            "points": xs.len(),
        },
        "precision": d,
    });

    match o.format {
        Format::Csv => {
            let mut s = csv_line(&columns);
            for r in &rows {
                let mut fields = vec![fmt_num(r.x, d)];
                fields.extend(r.values.iter().map(|v| fmt_num(*v, d)));
                fields.push(fmt_num(bound, d));
                s.push_str(&csv_line(fields));
            }
            Ok(Rendered {
                text: s,
                sidecar: Some(meta),
            })
        }
        Format::Json => {
            let mut v = meta;
            v["columns"] = json!(columns);
            v["rows"] = rows
                .iter()
                .map(|r| {
                    let mut row = vec![num(r.x, d)];
                    row.extend(r.values.iter().map(|x| num(*x, d)));
                    row.push(num(bound, d));
                    Value::Array(row)
                })
                .collect();
            Ok(Rendered::text(pretty(&v)))
        }
    }
}

pub fn scan(args: &ScanArgs, o: OutputOpts) -> Result<Rendered, CliError> {
    let fig = args.fig.map(preset).transpose()?;
    let kind = match (args.ineq, fig) {
        (Some(k), _) => k,
        (None, Some(f)) => f.kind,
        (None, None) => {
            return Err(CliError::Usage("scan needs --ineq or --fig".into()));
        }
    };
    let dirs = match fig {
        Some(f) => f.directions(),
        None => args.dir.clone(),
    };
    let settings = settings_for(kind, &dirs)?;
    let mut states = args.state.clone();
    states.extend(args.c.iter().map(|&c| StateSel::C(c)));
    if states.is_empty() {
        states = vec![StateSel::Psi, StateSel::Xi];
    }
    let job = ScanJob {
        command: "scan",
        kind,
        figure: args.fig,
        settings,
        n: args.n,
        states,
    };
    run_scan(job, &args.grid, o)
}

pub fn figure(args: &FigureArgs, o: OutputOpts) -> Result<Rendered, CliError> {
    let f = preset(args.id)?;
    let job = ScanJob {
        command: "figure",
        kind: f.kind,
        figure: Some(f.id),
        settings: f.settings(),
        n: f.n(),
        states: vec![StateSel::Psi, StateSel::Xi],
    };
    run_scan(job, &args.grid, o)
}

pub fn optimize(args: &OptimizeArgs, o: OutputOpts) -> Result<Rendered, CliError> {
    let sel = args.state.selection();
    let cfg = OptimizerConfig {
        restarts: args.restarts,
        max_iters: args.max_iters,
        simplex_tolerance: args.tol,
        seed: args.seed,
        ..OptimizerConfig::default()
    };
    cfg.validate()?;
    let report = optimizer::optimize(args.ineq, sel.c(), args.state.x, args.state.n, &cfg)?;
    let best = &report.best;
    let d = o.digits;
    let text = match o.format {
        Format::Json => pretty(&json!({
            "command": "optimize",
            "kind": best.kind.name(),
            "value": num(best.value, d),
            "bound": num(best.classical_bound, d),
            "violated": best.violated,
            "state": state_json(sel, &best.state, d),
            "directions": settings_json(&best.settings, d),
            "restarts": report.restarts,
            "best_restart": report.best_restart,
            "evaluations": report.evaluations,
            "best_initial": num(report.best_initial, d),
            "seed": report.seed,
            "max_iters": cfg.max_iters,
            "tol": cfg.simplex_tolerance,
            "rng": RNG_ALGORITHM,
        })),
        Format::Csv => {
            let mut header: Vec<String> = [
                "kind", "state", "c", "x", "seed", "restarts", "value", "bound", "violated",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect();
            let mut fields = vec![
                best.kind.name().to_string(),
                sel.label(),
                fmt_num(best.state.c, d),
                fmt_num(best.state.x, d),
                report.seed.to_string(),
                report.restarts.to_string(),
                fmt_num(best.value, d),
                fmt_num(best.classical_bound, d),
                best.violated.to_string(),
            ];
            for (name, dir) in DIRECTION_NAMES.iter().zip(best.settings.directions()) {
                header.push(format!("theta_{name}"));
                header.push(format!("phi_{name}"));
                fields.push(fmt_num(dir.theta(), d));
                fields.push(fmt_num(dir.phi(), d));
            }
            csv_line(header) + &csv_line(fields)
        }
    };
    Ok(Rendered::text(text))
}

pub fn localize(args: &LocalizeArgs, o: OutputOpts) -> Result<Rendered, CliError> {
    let lambda = match (args.particle, args.lambda) {
        (Particle::Custom, Some(l)) => l,
        (Particle::Custom, None) => {
            return Err(CliError::Usage(
                "--particle custom requires --lambda".into(),
            ));
        }
        (_, Some(_)) => {
            return Err(CliError::Usage(
                "--lambda is only accepted with --particle custom".into(),
            ));
        }
        (Particle::Muon, None) => MUON_COMPTON_REDUCED,
        (Particle::Electron, None) => ELECTRON_COMPTON_REDUCED,
    };
    let params = LocalizationParams::new(args.l, lambda, args.gamma)?;
    let tau = scaling_factor(&params);
    let origin = delta_cube([0.0; 3], &params);
    let particle = match args.particle {
        Particle::Muon => "muon",
        Particle::Electron => "electron",
        Particle::Custom => "custom",
    };
    let d = o.digits;
    let text = match o.format {
        Format::Json => pretty(&json!({
            "command": "localize",
            "particle": particle,
            "l": num(params.edge_length(), d),
            "lambda": num(params.compton_reduced(), d),
            "gamma": num(params.gamma(), d),
            "lambda_eff": num(params.effective_compton(), d),
            "tau": num(tau, d),
            "shape0": num(origin.shape, d),
            "prefactor": num(origin.prefactor, d),
        })),
        Format::Csv => {
            csv_line(["particle", "l", "lambda", "gamma", "tau", "shape0"])
                + &csv_line([
                    particle.to_string(),
                    fmt_num(params.edge_length(), d),
                    fmt_num(params.compton_reduced(), d),
                    fmt_num(params.gamma(), d),
                    fmt_num(tau, d),
                    fmt_num(origin.shape, d),
                ])
        }
    };
    Ok(Rendered::text(text))
}
