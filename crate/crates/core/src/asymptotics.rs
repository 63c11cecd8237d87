//! Regularity of powers: the sequences e_t and f_t, their stabilization,
//! containment exponents for projections, bound reports and the random
//! sampler for the linear-forms conjecture.
//!
//! For an ideal I generated in degree d write reg I^t = dt + e_t and
//! reg S/I^t = dt + f_t - 1. When S/I has finite length both sequences are
//! nonincreasing, nonnegative and equal; every report checks this.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groebner::{
    hilbert_series, ideal_combine, ideal_power, random_linear_form, top_degree_finite, CombineOp, GbConfig, Ideal,
};
use crate::poly::Polynomial;
use crate::resolution::{regularity_with, RegularityOf};

pub const DEFAULT_WINDOW: usize = 3;

pub const STABILIZATION_WARNING: &str =
    "stabilization is heuristic: a constant tail up to t_max does not prove the value persists for all larger t";
pub const NOT_STABILIZED_WARNING: &str = "not stabilized within t_max: no asymptotic value is claimed";
pub const MONOTONICITY_SUPPRESSED_WARNING: &str =
    "monotonicity checks suppressed: S/I does not have finite length, so e_t need not be nonincreasing";
pub const EMPIRICAL_WARNING: &str = "empirical, not a proof";
pub const SMALL_FIELD_WARNING: &str = "characteristic below 101: random linear forms may fail to be general";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Resolution,
    Hilbert,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityStatus {
    HeuristicallyStable,
    NotStabilized,
}

#[derive(Clone, Copy, Debug)]
pub struct PowerOptions {
    pub window: usize,
    pub config: GbConfig,
}

impl Default for PowerOptions {
    fn default() -> Self {
        PowerOptions { window: DEFAULT_WINDOW, config: GbConfig::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerRegRow {
    pub t: u32,
    /// reg I^t, from a free resolution.
    pub reg_power: Option<i64>,
    /// reg S/I^t; from the resolution or as the top nonzero degree.
    pub reg_quotient: Option<i64>,
    pub e_t: Option<i64>,
    pub f_t: Option<i64>,
}

impl PowerRegRow {
    pub fn new(t: u32, d: u32, reg_power: Option<i64>, reg_quotient: Option<i64>) -> Self {
        let dt = d as i64 * t as i64;
        PowerRegRow { t, reg_power, reg_quotient, e_t: reg_power.map(|r| r - dt), f_t: reg_quotient.map(|r| r - dt + 1) }
    }

    /// The value tracked for stabilization: e_t, or f_t when no resolution was computed.
    pub fn tail_value(&self) -> Option<i64> {
        self.e_t.or(self.f_t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerRegReport {
    pub d: u32,
    pub route: Route,
    pub finite_length: bool,
    pub window: usize,
    pub rows: Vec<PowerRegRow>,
    pub epsilon_estimate: Option<i64>,
    pub stable_from_t: Option<u32>,
    pub status: StabilityStatus,
    pub monotonicity_checked: bool,
    pub warnings: Vec<String>,
}

/// Outcome of reading the tail of a sequence indexed by t = 1, 2, ...
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AsymptoticFit {
    pub d: u32,
    pub epsilon: Option<i64>,
    pub stable_from_t: Option<u32>,
    pub status: StabilityStatus,
}

/// Stabilization of `(t, value)` pairs: stable iff there are at least
/// `window + 1` values and the last `window` agree; `stable_from_t` is the
/// first t from which the value is constant.
pub fn fit_tail(values: &[(u32, i64)], window: usize) -> (Option<i64>, Option<u32>, StabilityStatus) {
    let window = window.max(1);
    if values.len() < window + 1 {
        return (None, None, StabilityStatus::NotStabilized);
    }
    let last = values[values.len() - 1].1;
    if values[values.len() - window..].iter().any(|v| v.1 != last) {
        return (None, None, StabilityStatus::NotStabilized);
    }
    let mut from = values.len() - 1;
    while from > 0 && values[from - 1].1 == last {
        from -= 1;
    }
    (Some(last), Some(values[from].0), StabilityStatus::HeuristicallyStable)
}

impl PowerRegReport {
    /// Assembles a report from finished rows, running the stabilization
    /// heuristic and, when S/I has finite length, the monotonicity checks.
    pub fn from_rows(
        d: u32,
        route: Route,
        finite_length: bool,
        window: usize,
        rows: Vec<PowerRegRow>,
    ) -> Result<Self> {
        let mut warnings = Vec::new();
        if finite_length {
            check_power_rows(&rows)?;
        } else {
            warnings.push(MONOTONICITY_SUPPRESSED_WARNING.to_string());
        }
        let values: Vec<(u32, i64)> = rows.iter().filter_map(|r| r.tail_value().map(|v| (r.t, v))).collect();
        let (epsilon_estimate, stable_from_t, status) = fit_tail(&values, window);
        warnings.push(
            match status {
                StabilityStatus::HeuristicallyStable => STABILIZATION_WARNING,
                StabilityStatus::NotStabilized => NOT_STABILIZED_WARNING,
            }
            .to_string(),
        );
        Ok(PowerRegReport {
            d,
            route,
            finite_length,
            window,
            rows,
            epsilon_estimate,
            stable_from_t,
            status,
            monotonicity_checked: finite_length,
            warnings,
        })
    }
}

fn check_nonincreasing(name: &str, seq: &[(u32, i64)]) -> Result<()> {
    for w in seq.windows(2) {
        if w[1].1 > w[0].1 {
            return Err(Error::SelfCheck(format!(
                "{name} increased from {} at t = {} to {} at t = {}",
                w[0].1, w[0].0, w[1].1, w[1].0
            )));
        }
    }
    if let Some(&(t, v)) = seq.iter().find(|x| x.1 < 0) {
        return Err(Error::SelfCheck(format!("{name} = {v} < 0 at t = {t}")));
    }
    Ok(())
}

fn check_power_rows(rows: &[PowerRegRow]) -> Result<()> {
    let es: Vec<(u32, i64)> = rows.iter().filter_map(|r| r.e_t.map(|e| (r.t, e))).collect();
    let fs: Vec<(u32, i64)> = rows.iter().filter_map(|r| r.f_t.map(|f| (r.t, f))).collect();
    check_nonincreasing("e_t", &es)?;
    check_nonincreasing("f_t", &fs)?;
    for r in rows {
        if let (Some(e), Some(f)) = (r.e_t, r.f_t) {
            if e != f {
                return Err(Error::SelfCheck(format!("e_t = {e} differs from f_t = {f} at t = {}", r.t)));
            }
        }
    }
    Ok(())
}

/// The asymptotic pair (d, ε) read from a report.
pub fn fit_asymptotic(report: &PowerRegReport) -> AsymptoticFit {
    let values: Vec<(u32, i64)> = report.rows.iter().filter_map(|r| r.tail_value().map(|v| (r.t, v))).collect();
    let (epsilon, stable_from_t, status) = fit_tail(&values, report.window);
    AsymptoticFit { d: report.d, epsilon, stable_from_t, status }
}

fn common_degree(gens: &[Polynomial], what: &str) -> Result<u32> {
    let mut d = None;
    for g in gens {
        let e = g.homogeneous_degree().ok_or_else(|| Error::usage(format!("{g} is not homogeneous")))?;
        match d {
            None => d = Some(e),
            Some(x) if x != e => {
                return Err(Error::usage(format!("{what} has generators of degrees {x} and {e}; d is undefined")))
            }
            _ => {}
        }
    }
    d.ok_or_else(|| Error::usage(format!("{what} has no nonzero generators")))
}

/// reg I^t and reg S/I^t for t = 1..=t_max.
pub fn power_table(ideal: &Ideal, t_max: u32, route: Route) -> Result<PowerRegReport> {
    power_table_with(ideal, t_max, route, &PowerOptions::default())
}

pub fn power_table_with(ideal: &Ideal, t_max: u32, route: Route, opts: &PowerOptions) -> Result<PowerRegReport> {
    let d = common_degree(ideal.generators(), "the ideal")?;
    if t_max == 0 {
        return Err(Error::usage("t_max must be at least 1"));
    }
    let gb = ideal.groebner_with(&opts.config)?;
    let witness = gb.finite_length_witness();
    let finite_length = witness.is_none();
    if route != Route::Resolution {
        if let Some(v) = witness {
            return Err(Error::not_finite_length(&ideal.ring().vars()[v]));
        }
    }
    let rows: Result<Vec<PowerRegRow>> = (1..=t_max)
        .into_par_iter()
        .map(|t| {
            let power = ideal_power(ideal, t)?;
            let reg_power = match route {
                Route::Hilbert => None,
                _ => Some(regularity_with(&power, RegularityOf::Ideal, &opts.config)?),
            };
            let top = match route {
                Route::Resolution => None,
                _ => Some(top_degree_finite(&power)?),
            };
            if let (Some(r), Some(top)) = (reg_power, top) {
                if r != top + 1 {
                    return Err(Error::SelfCheck(format!(
                        "reg I^{t} = {r} from the resolution but the quotient's top degree is {top}"
                    )));
                }
            }
            let reg_quotient = top.or(reg_power.map(|r| r - 1));
            Ok(PowerRegRow::new(t, d, reg_power, reg_quotient))
        })
        .collect();
    PowerRegReport::from_rows(d, route, finite_length, opts.window, rows?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EpsilonRow {
    pub t: u32,
    /// Top nonzero degree of S/((V)^t + I_X).
    pub top_degree: i64,
    /// Least ε with m^{dt+ε} ⊆ (V)^t + I_X.
    pub epsilon_t: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EpsilonReport {
    pub d: u32,
    pub window: usize,
    pub rows: Vec<EpsilonRow>,
    pub epsilon: Option<i64>,
    pub stable_from_t: Option<u32>,
    pub status: StabilityStatus,
    pub warnings: Vec<String>,
}

/// Fails with a geometry error unless I_X + (V) has finite colength.
pub fn check_center_disjoint(ix: &Ideal, forms: &[Polynomial], config: &GbConfig) -> Result<()> {
    let sum = ideal_combine(ix, &Ideal::new(ix.ring(), forms.to_vec())?, CombineOp::Sum)?;
    let gb = sum.groebner_with(config)?;
    if let Some(v) = gb.finite_length_witness() {
        let name = &ix.ring().vars()[v];
        return Err(Error::Geometry {
            message: format!(
                "the center of the projection meets X: no pure power of {name} in the lead-term ideal of I_X + (V)"
            ),
            witness: Some(name.clone()),
        });
    }
    Ok(())
}

/// The least ε_t with m^{dt+ε_t} ⊆ (V)^t + I_X for t = 1..=t_max.
pub fn epsilon_containment(ix: &Ideal, forms: &[Polynomial], t_max: u32) -> Result<EpsilonReport> {
    epsilon_containment_with(ix, forms, t_max, &PowerOptions::default())
}

pub fn epsilon_containment_with(
    ix: &Ideal,
    forms: &[Polynomial],
    t_max: u32,
    opts: &PowerOptions,
) -> Result<EpsilonReport> {
    for f in forms {
        crate::poly::Ring::check_same(ix.ring(), f.ring())?;
    }
    let d = common_degree(forms, "V")?;
    if t_max == 0 {
        return Err(Error::usage("t_max must be at least 1"));
    }
    check_center_disjoint(ix, forms, &opts.config)?;
    let v = Ideal::new(ix.ring(), forms.to_vec())?;
    let rows: Result<Vec<EpsilonRow>> = (1..=t_max)
        .into_par_iter()
        .map(|t| {
            let sum = ideal_combine(&ideal_power(&v, t)?, ix, CombineOp::Sum)?;
            let gb = sum.groebner_with(&opts.config)?;
            let top = crate::groebner::top_degree_of_basis(&gb)?;
            Ok(EpsilonRow { t, top_degree: top, epsilon_t: top - d as i64 * t as i64 + 1 })
        })
        .collect();
    let rows = rows?;
    let seq: Vec<(u32, i64)> = rows.iter().map(|r| (r.t, r.epsilon_t)).collect();
    for w in seq.windows(2) {
        if w[1].1 > w[0].1 {
            return Err(Error::SelfCheck(format!(
                "ε_t increased from {} at t = {} to {} at t = {}",
                w[0].1, w[0].0, w[1].1, w[1].0
            )));
        }
    }
    let (epsilon, stable_from_t, status) = fit_tail(&seq, opts.window);
    let warnings = vec![match status {
        StabilityStatus::HeuristicallyStable => STABILIZATION_WARNING,
        StabilityStatus::NotStabilized => NOT_STABILIZED_WARNING,
    }
    .to_string()];
    Ok(EpsilonReport { d, window: opts.window, rows, epsilon, stable_from_t, status, warnings })
}

/// td + (n - 1)(d - 1) - 1: the top degree of S/I^t for I generated by a
/// regular sequence of n forms of degree d in n variables, and an upper bound
/// for any ideal of finite colength generated in degree d.
pub fn ci_formula_check(d: u32, t: u32, nvars: u32) -> i64 {
    t as i64 * d as i64 + (nvars as i64 - 1) * (d as i64 - 1) - 1
}

/// Hypotheses the caller asserts; they are echoed in the report, not verified.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BoundHypotheses {
    /// X is geometrically reduced and connected in codimension 1.
    pub reduced_connected_codim1: bool,
    /// The forms of V are a regular sequence on R.
    pub regular_sequence: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundComparison {
    pub name: String,
    pub bound: i64,
    pub holds: bool,
    pub tight: bool,
    pub hypotheses_asserted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub epsilon_computed: Option<i64>,
    pub epsilon_trace: EpsilonReport,
    /// reg I_X, with the convention reg P^n = 1.
    pub reg_r: i64,
    pub bound_easy: i64,
    pub degree: i64,
    pub codim: i64,
    pub bound_degcodim: Option<i64>,
    pub bound_ci: i64,
    pub hypotheses: BoundHypotheses,
    pub comparisons: Vec<BoundComparison>,
    pub warnings: Vec<String>,
}

/// Computes ε for R = S/I_X and V, and compares it with reg R - 1, deg X - codim X
/// and the complete-intersection value.
pub fn bound_report(
    ix: &Ideal,
    forms: &[Polynomial],
    t_max: u32,
    hypotheses: BoundHypotheses,
    include_degcodim: bool,
) -> Result<BoundReport> {
    bound_report_with(ix, forms, t_max, hypotheses, include_degcodim, &PowerOptions::default())
}

pub fn bound_report_with(
    ix: &Ideal,
    forms: &[Polynomial],
    t_max: u32,
    hypotheses: BoundHypotheses,
    include_degcodim: bool,
    opts: &PowerOptions,
) -> Result<BoundReport> {
    let trace = match epsilon_containment_with(ix, forms, t_max, opts) {
        Err(Error::Geometry { message, witness }) => return Err(Error::Dimension { message, witness }),
        other => other?,
    };
    let d = trace.d;
    let reg_r = regularity_with(ix, RegularityOf::Ideal, &opts.config)?;
    let series = hilbert_series(ix)?;
    let dim = series.dimension() as i64;
    let degree = series.degree();
    let nvars = ix.ring().nvars() as i64;
    let codim = nvars - dim;
    let bound_easy = reg_r - 1;
    let reg_module = if ix.is_zero() { 0 } else { reg_r - 1 };
    let bound_ci = reg_module + (dim - 1).max(0) * (d as i64 - 1);
    let bound_degcodim = include_degcodim.then_some(degree - codim);
    // ε_t is nonincreasing, so the last row is the sharpest available value.
    let observed = trace.rows.last().map(|r| r.epsilon_t).unwrap();
    let compare = |name: &str, bound: i64, asserted: bool| BoundComparison {
        name: name.to_string(),
        bound,
        holds: observed <= bound,
        tight: observed == bound,
        hypotheses_asserted: asserted,
    };
    let mut comparisons = vec![compare("reg_r_minus_1", bound_easy, true)];
    if d == 1 && observed > bound_easy {
        return Err(Error::SelfCheck(format!("ε_t = {observed} exceeds reg R - 1 = {bound_easy}")));
    }
    if let Some(b) = bound_degcodim {
        comparisons.push(compare("deg_minus_codim", b, hypotheses.reduced_connected_codim1));
    }
    comparisons.push(compare("complete_intersection", bound_ci, hypotheses.regular_sequence));
    let mut warnings = trace.warnings.clone();
    if include_degcodim && !hypotheses.reduced_connected_codim1 {
        warnings.push("deg X - codim X is reported without its hypotheses being asserted".to_string());
    }
    Ok(BoundReport {
        epsilon_computed: trace.epsilon,
        epsilon_trace: trace,
        reg_r,
        bound_easy,
        degree,
        codim,
        bound_degcodim,
        bound_ci,
        hypotheses,
        comparisons,
        warnings,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleTrial {
    pub trial: u32,
    /// The drawn forms, printed.
    pub forms: Vec<String>,
    pub epsilon: Option<i64>,
    pub last_epsilon_t: Option<i64>,
    pub status: Option<StabilityStatus>,
    pub skipped: bool,
    pub within_bound: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SamplerSummary {
    pub seed: u64,
    pub c: u32,
    /// n where dim R = n + 1.
    pub n: u32,
    pub conjectured_epsilon: i64,
    pub trials: Vec<SampleTrial>,
    pub successful: u32,
    pub skipped: u32,
    pub max_epsilon: Option<i64>,
    pub exceeding: u32,
    pub warnings: Vec<String>,
}

/// Draws n + 1 + c random linear forms per trial and computes ε for each,
/// tabulating against ⌊n / c⌋. Trial i uses stream i of a ChaCha8 generator
/// seeded with `seed`.
pub fn conjecture_sampler(ix: &Ideal, c: u32, trials: u32, seed: u64, t_max: u32) -> Result<SamplerSummary> {
    conjecture_sampler_with(ix, c, trials, seed, t_max, &PowerOptions::default())
}

pub fn conjecture_sampler_with(
    ix: &Ideal,
    c: u32,
    trials: u32,
    seed: u64,
    t_max: u32,
    opts: &PowerOptions,
) -> Result<SamplerSummary> {
    if c == 0 {
        return Err(Error::usage("c must be at least 1"));
    }
    let ring = ix.ring();
    let dim = hilbert_series(ix)?.dimension() as u32;
    if dim == 0 {
        return Err(Error::usage("R has dimension 0"));
    }
    let n = dim - 1;
    let conjectured = (n / c) as i64;
    let count = (n + 1 + c) as usize;
    let results: Result<Vec<SampleTrial>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial as u64);
            let forms: Vec<Polynomial> =
                (0..count).map(|_| random_linear_form(ring, &mut rng)).filter(|f| !f.is_zero()).collect();
            let printed = forms.iter().map(|f| f.to_string()).collect();
            let outcome = if forms.is_empty() {
                Err(Error::Geometry { message: "all drawn forms vanish".into(), witness: None })
            } else {
                epsilon_containment_with(ix, &forms, t_max, opts)
            };
            match outcome {
                Ok(rep) => Ok(SampleTrial {
                    trial,
                    forms: printed,
                    epsilon: rep.epsilon,
                    last_epsilon_t: rep.rows.last().map(|r| r.epsilon_t),
                    status: Some(rep.status),
                    skipped: false,
                    within_bound: rep.rows.last().map(|r| r.epsilon_t <= conjectured),
                }),
                Err(Error::Geometry { .. }) | Err(Error::Dimension { .. }) => Ok(SampleTrial {
                    trial,
                    forms: printed,
                    epsilon: None,
                    last_epsilon_t: None,
                    status: None,
                    skipped: true,
                    within_bound: None,
                }),
                Err(e) => Err(e),
            }
        })
        .collect();
    let trials_out = results?;
    let successful = trials_out.iter().filter(|t| !t.skipped).count() as u32;
    let skipped = trials_out.len() as u32 - successful;
    let max_epsilon = trials_out.iter().filter_map(|t| t.last_epsilon_t).max();
    let exceeding = trials_out.iter().filter(|t| t.within_bound == Some(false)).count() as u32;
    let mut warnings = vec![EMPIRICAL_WARNING.to_string()];
    if ring.field().characteristic() < 101 {
        warnings.push(SMALL_FIELD_WARNING.to_string());
    }
    Ok(SamplerSummary {
        seed,
        c,
        n,
        conjectured_epsilon: conjectured,
        trials: trials_out,
        successful,
        skipped,
        max_epsilon,
        exceeding,
        warnings,
    })
}
