//! Command-line surface and dispatch.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use regpow_core::asymptotics::{
    bound_report_with, conjecture_sampler_with, epsilon_containment_with, power_table_with, BoundHypotheses,
    EpsilonReport, PowerOptions, Route, StabilityStatus, DEFAULT_WINDOW,
};
use regpow_core::geometry::{
    max_fiber_regularity, twovars_verify_with, FiberSearchOptions, MaxFiberReport, ProjectionSpec,
    DEFAULT_EXTENSION_BOUND, DEFAULT_POINT_BUDGET,
};
use regpow_core::groebner::{DEFAULT_DEGREE_CEILING, GbConfig};
use regpow_core::resolution::{minimal_free_resolution_with, regularity_with, RegularityOf};
use regpow_core::{Ideal, Polynomial};

use crate::parse::{parse_session, Session};
use crate::report::{opt, table, CliError, Exit, Outcome, Report, VERSION};

const DEFAULT_TMAX: u32 = 6;
/// Maximizing fibers listed in text output.
const TEXT_ARGMAX_LINES: usize = 8;

#[derive(Debug, Parser)]
#[command(name = "regpow", version, about = "Regularity of powers of ideals over finite fields")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, Args)]
pub struct GlobalOpts {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized commands.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Largest degree a Gröbner basis computation may reach.
    #[arg(long, global = true, default_value_t = DEFAULT_DEGREE_CEILING)]
    pub degree_ceiling: u32,
    /// Worker threads for the parallel parts (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Number of equal trailing values taken as stabilization.
    #[arg(long, global = true, default_value_t = DEFAULT_WINDOW)]
    pub window: usize,
}

#[derive(Clone, Debug, Args)]
pub struct IdealArg {
    /// Session file.
    pub file: PathBuf,
    /// Name of an ideal in the session.
    #[arg(short = 'i', long = "ideal")]
    pub ideal: String,
}

#[derive(Clone, Debug, Args)]
pub struct ProjectionArg {
    pub file: PathBuf,
    /// Name of a projection in the session.
    #[arg(short = 's', long = "spec")]
    pub spec: String,
    #[arg(long, default_value_t = DEFAULT_TMAX)]
    pub tmax: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    Resolution,
    Hilbert,
    Both,
}

impl From<RouteArg> for Route {
    fn from(r: RouteArg) -> Route {
        match r {
            RouteArg::Resolution => Route::Resolution,
            RouteArg::Hilbert => Route::Hilbert,
            RouteArg::Both => Route::Both,
        }
    }
}

#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    /// Reduced Gröbner basis.
    Gb(IdealArg),
    /// Castelnuovo-Mumford regularity.
    Reg {
        #[command(flatten)]
        target: IdealArg,
        /// Report reg S/I instead of reg I.
        #[arg(long)]
        quotient: bool,
    },
    /// Minimal free resolution of S/I.
    Res(IdealArg),
    /// Graded Betti numbers of S/I.
    Betti(IdealArg),
    /// Regularity of I^t for t = 1..tmax and the asymptotic fit.
    Powers {
        #[command(flatten)]
        target: IdealArg,
        #[arg(long, default_value_t = DEFAULT_TMAX)]
        tmax: u32,
        #[arg(long, value_enum, default_value_t = RouteArg::Resolution)]
        route: RouteArg,
    },
    /// ε from the containments m^(dt+ε_t) ⊆ (V)^t + I_X.
    Epsilon(ProjectionArg),
    /// ε against reg R - 1, deg X - codim X and the complete-intersection value.
    Bounds {
        #[command(flatten)]
        target: ProjectionArg,
        /// Assert that X is reduced and connected in codimension 1.
        #[arg(long)]
        reduced_connected: bool,
        /// Assert that V is a regular sequence on R.
        #[arg(long)]
        regular_sequence: bool,
        /// Include the deg X - codim X comparison.
        #[arg(long)]
        degcodim: bool,
    },
    /// Maximum regularity of the fibers of a projection.
    Fibers {
        #[command(flatten)]
        target: ProjectionArg,
        /// Enumerate closed points over GF(p^k) for k up to this bound.
        #[arg(long, default_value_t = DEFAULT_EXTENSION_BOUND)]
        ext_bound: u32,
        /// Maximum number of points scanned.
        #[arg(long, default_value_t = DEFAULT_POINT_BUDGET)]
        budget: u64,
    },
    /// The gcd invariant r of binary forms, checked against reg I^t.
    Twovars {
        file: PathBuf,
        /// Name of a form list in the session.
        #[arg(short = 'v', long = "forms")]
        forms: String,
        #[arg(long, default_value_t = DEFAULT_TMAX)]
        tmax: u32,
        #[arg(long, default_value_t = DEFAULT_EXTENSION_BOUND)]
        ext_bound: u32,
    },
    /// ε for random linear forms.
    Sample {
        #[command(flatten)]
        target: IdealArg,
        /// Codimension parameter: n + 1 + c forms are drawn.
        #[arg(short = 'c', default_value_t = 1)]
        c: u32,
        #[arg(long, default_value_t = 20)]
        trials: u32,
        #[arg(long, default_value_t = DEFAULT_TMAX)]
        tmax: u32,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Gb(_) => "gb",
            Command::Reg { .. } => "reg",
            Command::Res(_) => "res",
            Command::Betti(_) => "betti",
            Command::Powers { .. } => "powers",
            Command::Epsilon(_) => "epsilon",
            Command::Bounds { .. } => "bounds",
            Command::Fibers { .. } => "fibers",
            Command::Twovars { .. } => "twovars",
            Command::Sample { .. } => "sample",
        }
    }

    pub fn file(&self) -> &Path {
        match self {
            Command::Gb(t) | Command::Res(t) | Command::Betti(t) => &t.file,
            Command::Reg { target, .. } | Command::Powers { target, .. } | Command::Sample { target, .. } => {
                &target.file
            }
            Command::Epsilon(t) => &t.file,
            Command::Bounds { target, .. } | Command::Fibers { target, .. } => &target.file,
            Command::Twovars { file, .. } => file,
        }
    }
}

pub fn load_session(path: &Path) -> Result<Session, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })?;
    Ok(parse_session(&text)?)
}

/// Parses the session named by the command and runs it.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let session = load_session(cli.command.file())?;
    execute(&session, &cli.command, &cli.global)
}

fn ideal<'a>(s: &'a Session, name: &str) -> Result<&'a Ideal, CliError> {
    s.ideal(name).ok_or_else(|| CliError::Usage(format!("no ideal named {name}")))
}

fn projection(s: &Session, name: &str) -> Result<(Ideal, Vec<Polynomial>), CliError> {
    let decl = s.projection(name).ok_or_else(|| CliError::Usage(format!("no projection named {name}")))?;
    Ok((ideal(s, &decl.ideal)?.clone(), s.form_list(&decl.forms).expect("checked by the parser").to_vec()))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn with_name(key: &str, name: &str, body: Value) -> Value {
    let mut obj = serde_json::Map::new();
    obj.insert(key.into(), name.into());
    match body {
        Value::Object(m) => obj.extend(m),
        other => {
            obj.insert("value".into(), other);
        }
    }
    Value::Object(obj)
}

struct Done {
    result: Value,
    text: String,
    warnings: Vec<String>,
    seed: Option<u64>,
    exit: Exit,
}

impl Done {
    fn ok(result: Value, text: String, warnings: Vec<String>) -> Self {
        Done { result, text, warnings, seed: None, exit: Exit::Success }
    }
}

pub fn execute(session: &Session, command: &Command, global: &GlobalOpts) -> Result<Outcome, CliError> {
    if global.window == 0 {
        return Err(CliError::Usage("--window must be at least 1".into()));
    }
    let config = GbConfig { degree_ceiling: global.degree_ceiling };
    let popts = PowerOptions { window: global.window, config };
    let done = match command {
        Command::Gb(t) => gb(session, &t.ideal, &config)?,
        Command::Reg { target, quotient } => {
            let of = if *quotient { RegularityOf::Quotient } else { RegularityOf::Ideal };
            let r = regularity_with(ideal(session, &target.ideal)?, of, &config)?;
            let convention = if *quotient { "quotient" } else { "ideal" };
            let label = if *quotient { format!("reg S/{}", target.ideal) } else { format!("reg {}", target.ideal) };
            Done::ok(
                json!({ "ideal": target.ideal, "convention": convention, "regularity": r }),
                format!("{label} = {r}\n"),
                Vec::new(),
            )
        }
        Command::Res(t) | Command::Betti(t) => resolution(session, &t.ideal, &config, matches!(command, Command::Res(_)))?,
        Command::Powers { target, tmax, route } => {
            let rep = power_table_with(ideal(session, &target.ideal)?, *tmax, (*route).into(), &popts)?;
            let rows: Vec<Vec<String>> = rep
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.t.to_string(),
                        opt(r.reg_power),
                        opt(r.reg_quotient),
                        opt(r.e_t),
                        opt(r.f_t),
                    ]
                })
                .collect();
            let mut text = format!("powers of {} (d = {})\n", target.ideal, rep.d);
            text += &table(&["t", "reg I^t", "reg S/I^t", "e_t", "f_t"], &rows);
            writeln!(text, "epsilon: {}", opt(rep.epsilon_estimate)).unwrap();
            writeln!(text, "stable from t: {}", opt(rep.stable_from_t)).unwrap();
            writeln!(text, "status: {}", status(rep.status)).unwrap();
            let warnings = rep.warnings.clone();
            Done::ok(with_name("ideal", &target.ideal, to_value(&rep)), text, warnings)
        }
        Command::Epsilon(t) => {
            let (ix, forms) = projection(session, &t.spec)?;
            let rep = epsilon_containment_with(&ix, &forms, t.tmax, &popts)?;
            let text = format!("epsilon for {}\n{}", t.spec, epsilon_text(&rep));
            let warnings = rep.warnings.clone();
            Done::ok(with_name("projection", &t.spec, to_value(&rep)), text, warnings)
        }
        Command::Bounds { target, reduced_connected, regular_sequence, degcodim } => {
            let (ix, forms) = projection(session, &target.spec)?;
            let hyps =
                BoundHypotheses { reduced_connected_codim1: *reduced_connected, regular_sequence: *regular_sequence };
            let rep = bound_report_with(&ix, &forms, target.tmax, hyps, *degcodim, &popts)?;
            let mut text = format!("bounds for {}\n", target.spec);
            writeln!(text, "epsilon: {}", opt(rep.epsilon_computed)).unwrap();
            writeln!(text, "reg R: {}", rep.reg_r).unwrap();
            writeln!(text, "deg X: {}", rep.degree).unwrap();
            writeln!(text, "codim X: {}", rep.codim).unwrap();
            let rows: Vec<Vec<String>> = rep
                .comparisons
                .iter()
                .map(|c| {
                    vec![
                        c.name.clone(),
                        c.bound.to_string(),
                        c.holds.to_string(),
                        c.tight.to_string(),
                        c.hypotheses_asserted.to_string(),
                    ]
                })
                .collect();
            text += &table(&["bound", "value", "holds", "tight", "asserted"], &rows);
            let violated = rep.comparisons.iter().any(|c| c.hypotheses_asserted && !c.holds);
            let warnings = rep.warnings.clone();
            let mut done = Done::ok(with_name("projection", &target.spec, to_value(&rep)), text, warnings);
            if violated {
                done.exit = Exit::Hypothesis;
            }
            done
        }
        Command::Fibers { target, ext_bound, budget } => fibers(session, target, *ext_bound, *budget, &popts)?,
        Command::Twovars { forms, tmax, ext_bound, .. } => {
            let v = session.form_list(forms).ok_or_else(|| CliError::Usage(format!("no forms named {forms}")))?;
            let verdict = twovars_verify_with(v, *tmax, *ext_bound, &popts)?;
            let tv = &verdict.twovars;
            let mut text = format!("two-variable invariant for {forms}\n");
            writeln!(text, "d: {}", tv.d).unwrap();
            writeln!(text, "dim V: {}", tv.dim_v).unwrap();
            writeln!(text, "r: {}", tv.r).unwrap();
            writeln!(text, "witness subspace (k = {}): {}", tv.witness_hyperplane.k, tv.witness_basis.join(", ")).unwrap();
            writeln!(text, "witness gcd: {}", tv.witness_gcd).unwrap();
            let rows: Vec<Vec<String>> = verdict
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.t.to_string(),
                        r.reg_power.to_string(),
                        r.predicted.to_string(),
                        r.stabilized.to_string(),
                        r.lower_bound_holds.to_string(),
                    ]
                })
                .collect();
            text += &table(&["t", "reg I^t", "dt+r-1", "stabilized", "lower bound"], &rows);
            writeln!(text, "violations: {}", verdict.violations).unwrap();
            writeln!(text, "equality on stabilized rows: {}", opt(verdict.equality_on_stable_rows)).unwrap();
            let mut warnings = tv.warnings.clone();
            warnings.extend(verdict.powers.warnings.iter().cloned());
            let mut done = Done::ok(with_name("forms", forms, to_value(&verdict)), text, warnings);
            if verdict.violations > 0 {
                done.exit = Exit::Hypothesis;
            }
            done
        }
        Command::Sample { target, c, trials, tmax } => {
            let seed = global.seed.unwrap_or(0);
            let summary = conjecture_sampler_with(ideal(session, &target.ideal)?, *c, *trials, seed, *tmax, &popts)?;
            let mut text = format!("sampler on {} (seed {seed}, c = {c})\n", target.ideal);
            writeln!(text, "conjectured bound: epsilon <= {}", summary.conjectured_epsilon).unwrap();
            let rows: Vec<Vec<String>> = summary
                .trials
                .iter()
                .map(|t| {
                    vec![
                        t.trial.to_string(),
                        if t.skipped { "skipped".into() } else { opt(t.epsilon) },
                        opt(t.last_epsilon_t),
                        opt(t.within_bound),
                    ]
                })
                .collect();
            text += &table(&["trial", "epsilon", "last eps_t", "within"], &rows);
            writeln!(text, "successful: {}", summary.successful).unwrap();
            writeln!(text, "skipped: {}", summary.skipped).unwrap();
            writeln!(text, "exceeding: {}", summary.exceeding).unwrap();
            let warnings = summary.warnings.clone();
            let mut done = Done::ok(with_name("ideal", &target.ideal, to_value(&summary)), text, warnings);
            done.seed = Some(seed);
            done
        }
    };
    Ok(Outcome {
        report: Report {
            command: command.name().to_string(),
            version: VERSION,
            seed: done.seed,
            warnings: done.warnings,
            result: done.result,
        },
        text: done.text,
        exit: done.exit,
    })
}

fn status(s: StabilityStatus) -> &'static str {
    match s {
        StabilityStatus::HeuristicallyStable => "stable",
        StabilityStatus::NotStabilized => "not stabilized",
    }
}

fn gb(session: &Session, name: &str, config: &GbConfig) -> Result<Done, CliError> {
    let gb = ideal(session, name)?.groebner_with(config)?;
    let ring = gb.ring().clone();
    let elements: Vec<String> = gb.elements().iter().map(|g| g.to_string()).collect();
    let leads: Vec<String> = gb.lead_monomials().iter().map(|m| ring.format_monomial(m)).collect();
    let mut text = format!("Gröbner basis of {name} ({}, {} elements)\n", ring.order().kind(), elements.len());
    for e in &elements {
        writeln!(text, "  {e}").unwrap();
    }
    writeln!(text, "finite length: {}", gb.is_finite_length()).unwrap();
    let result = json!({
        "ideal": name,
        "order": ring.order().kind().to_string(),
        "generators": elements,
        "lead_monomials": leads,
        "is_unit": gb.is_unit(),
        "finite_length": gb.is_finite_length(),
    });
    Ok(Done::ok(result, text, Vec::new()))
}

fn resolution(session: &Session, name: &str, config: &GbConfig, full: bool) -> Result<Done, CliError> {
    let (res, betti) = minimal_free_resolution_with(ideal(session, name)?, config)?;
    let reg_quotient = betti.regularity();
    let mut text = format!("Betti table of S/{name}\n{betti}");
    writeln!(text, "reg S/{name}: {}", opt(reg_quotient)).unwrap();
    writeln!(text, "projective dimension: {}", opt(betti.projective_dimension())).unwrap();
    let mut result = json!({
        "ideal": name,
        "betti": betti,
        "regularity_quotient": reg_quotient,
        "projective_dimension": betti.projective_dimension(),
    });
    if full {
        let ranks: Vec<usize> = res.modules().iter().map(|m| m.rank()).collect();
        let twists: Vec<Vec<u32>> = res.modules().iter().map(|m| m.twists().to_vec()).collect();
        let shown: Vec<String> = ranks.iter().map(|r| format!("S^{r}")).collect();
        text = format!("minimal resolution of S/{name}: {}\n{text}", shown.join(" <- "));
        result["ranks"] = json!(ranks);
        result["twists"] = json!(twists);
        result["length"] = json!(res.length());
    }
    Ok(Done::ok(result, text, Vec::new()))
}

fn epsilon_text(rep: &EpsilonReport) -> String {
    let rows: Vec<Vec<String>> =
        rep.rows.iter().map(|r| vec![r.t.to_string(), r.top_degree.to_string(), r.epsilon_t.to_string()]).collect();
    let mut text = table(&["t", "top degree", "eps_t"], &rows);
    writeln!(text, "epsilon: {}", opt(rep.epsilon)).unwrap();
    writeln!(text, "stable from t: {}", opt(rep.stable_from_t)).unwrap();
    writeln!(text, "status: {}", status(rep.status)).unwrap();
    text
}

fn fibers(
    session: &Session,
    target: &ProjectionArg,
    ext_bound: u32,
    budget: u64,
    popts: &PowerOptions,
) -> Result<Done, CliError> {
    let (ix, forms) = projection(session, &target.spec)?;
    let eps = epsilon_containment_with(&ix, &forms, target.tmax, popts)?;
    let spec = ProjectionSpec::new(ix, forms)?;
    let opts = FiberSearchOptions { ext_bound, point_budget: budget, epsilon: eps.epsilon, config: popts.config };
    let rep = max_fiber_regularity(&spec, &opts)?;
    let text = fibers_text(&target.spec, &eps, &rep);
    let mut warnings = eps.warnings.clone();
    warnings.extend(rep.warnings.iter().cloned());
    // a maximum above ε + 1 contradicts the identity; below it only means K was too small
    let exit = if rep.budget_exceeded {
        Exit::Resource
    } else if rep.equals_epsilon_plus_one == Some(false) && !rep.k_possibly_insufficient {
        Exit::Hypothesis
    } else {
        Exit::Success
    };
    let result = json!({ "projection": target.spec, "epsilon": eps, "search": rep });
    Ok(Done { result, text, warnings, seed: None, exit })
}

fn fibers_text(name: &str, eps: &EpsilonReport, rep: &MaxFiberReport) -> String {
    let mut text = format!("fibers of {name} (extension bound K = {})\n", rep.ext_bound);
    let rows: Vec<Vec<String>> = rep
        .levels
        .iter()
        .map(|l| vec![l.k.to_string(), l.points.to_string(), l.empty_fibers.to_string(), opt(l.max_regularity)])
        .collect();
    text += &table(&["k", "points", "empty", "max reg"], &rows);
    writeln!(text, "max regularity: {}", opt(rep.max_regularity)).unwrap();
    writeln!(text, "argmax points: {}", rep.argmax_count).unwrap();
    for f in rep.argmax.iter().take(TEXT_ARGMAX_LINES) {
        writeln!(text, "  ({}) over k = {}: degree {}, regularity {}", f.point.coords.join(" : "), f.point.k, f.degree, f.regularity)
            .unwrap();
    }
    let shown = rep.argmax.len().min(TEXT_ARGMAX_LINES) as u64;
    if rep.argmax_count > shown {
        writeln!(text, "  ... {} more", rep.argmax_count - shown).unwrap();
    }
    writeln!(text, "epsilon: {}", opt(eps.epsilon)).unwrap();
    writeln!(text, "equals ε+1: {}", opt(rep.equals_epsilon_plus_one)).unwrap();
    if rep.budget_exceeded {
        writeln!(text, "budget exceeded: the maximum is a lower bound").unwrap();
    }
    text
}
