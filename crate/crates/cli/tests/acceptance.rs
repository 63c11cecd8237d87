//! Acceptance run: one PASS/FAIL line per criterion. All comparisons are exact
//! integer equalities or inequalities (tolerance 0); each criterion also has a
//! wall-clock limit.

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command as Process;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use regpow::commands::{execute, Command, GlobalOpts, IdealArg};
use regpow::{parse_polynomial, parse_session, Session};
use regpow_core::asymptotics::{
    bound_report, ci_formula_check, conjecture_sampler, epsilon_containment, power_table, BoundHypotheses, Route,
    StabilityStatus, EMPIRICAL_WARNING,
};
use regpow_core::field::Fe;
use regpow_core::geometry::{max_fiber_regularity, twovars_r, twovars_verify, FiberSearchOptions, ProjectionSpec};
use regpow_core::groebner::{hilbert_function, ideal_power, top_degree_finite};
use regpow_core::linalg;
use regpow_core::monomial::monomials_of_degree;
use regpow_core::resolution::{minimal_free_resolution, regularity, schreyer_resolution, RegularityOf};
use regpow_core::{Field, Ideal, Monomial, MonomialOrder, Polynomial, Ring};

const TOLERANCE: i64 = 0;

fn fixture_path(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    p.to_str().unwrap().to_string()
}

fn session(name: &str) -> Session {
    parse_session(&std::fs::read_to_string(fixture_path(name)).unwrap()).unwrap()
}

fn projection(s: &Session, name: &str) -> (Ideal, Vec<Polynomial>) {
    let decl = s.projection(name).unwrap();
    (s.ideal(&decl.ideal).unwrap().clone(), s.form_list(&decl.forms).unwrap().to_vec())
}

fn exact(got: i64, want: i64) -> bool {
    (got - want).abs() <= TOLERANCE
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_coeff(ring: &Arc<Ring>, r: &mut ChaCha8Rng) -> Fe {
    ring.field().from_i64(r.gen_range(1..ring.field().characteristic() as i64))
}

fn random_form(ring: &Arc<Ring>, d: u32, terms: usize, r: &mut ChaCha8Rng) -> Polynomial {
    let monos = monomials_of_degree(ring.nvars(), d);
    let picked =
        monos.choose_multiple(r, terms.min(monos.len())).map(|m| (m.clone(), random_coeff(ring, r))).collect();
    Polynomial::from_terms(ring, picked)
}

fn random_ideal(ring: &Arc<Ring>, r: &mut ChaCha8Rng) -> Ideal {
    loop {
        let k = r.gen_range(2..=4);
        let gens = (0..k).map(|_| random_form(ring, r.gen_range(1..=3), r.gen_range(1..=3), r)).collect();
        let ideal = Ideal::new(ring, gens).unwrap();
        if !ideal.is_zero() {
            return ideal;
        }
    }
}

// 1
fn sturmfels() -> Result<String, String> {
    let s = session("rp2_sixvertex.reg");
    let i = s.ideal("I").unwrap();
    let r1 = regularity(i, RegularityOf::Ideal).map_err(|e| e.to_string())?;
    let r2 = regularity(&ideal_power(i, 2).unwrap(), RegularityOf::Ideal).map_err(|e| e.to_string())?;
    let msg = format!("reg I = {r1} (want 3), reg I^2 = {r2} (want 7)");
    if exact(r1, 3) && exact(r2, 7) {
        Ok(msg)
    } else {
        Err(msg)
    }
}

// 2
fn complete_intersection() -> Result<String, String> {
    let mut cases = 0;
    for n in [2usize, 3] {
        let ring = Ring::indexed(32003, n).unwrap();
        for d in [2u32, 3] {
            let gens =
                (0..n).map(|i| Polynomial::term(&ring, Monomial::var(n, i).checked_pow(d).unwrap(), ring.field().one()));
            let ci = Ideal::new(&ring, gens.collect()).unwrap();
            for t in 1..=4u32 {
                let top = top_degree_finite(&ideal_power(&ci, t).unwrap()).unwrap();
                let formula = (t * d) as i64 + (n as i64 - 1) * (d as i64 - 1) - 1;
                if !exact(top, formula) || ci_formula_check(d, t, n as u32) != formula {
                    return Err(format!("n = {n}, d = {d}, t = {t}: top degree {top}, formula {formula}"));
                }
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} (n, d, t) cases exact"))
}

fn random_m_primary(ring: &Arc<Ring>, d: u32, r: &mut ChaCha8Rng) -> Ideal {
    let n = ring.nvars();
    loop {
        let mut gens: Vec<Polynomial> = (0..n)
            .map(|i| {
                Polynomial::term(ring, Monomial::var(n, i).checked_pow(d).unwrap(), ring.field().one())
                    .add(&random_form(ring, d, 2, r))
            })
            .collect();
        let extra = r.gen_range(0..=2);
        gens.extend((0..extra).map(|_| random_form(ring, d, 3, r)));
        let ideal = Ideal::new(ring, gens).unwrap();
        if ideal.groebner().unwrap().is_finite_length() {
            return ideal;
        }
    }
}

// 3
fn monotonicity() -> Result<String, String> {
    let mut r = rng(3);
    let mut violations = Vec::new();
    for k in 0..50 {
        let n = 2 + k % 2;
        let d = 1 + (k / 2 % 3) as u32;
        let ring = Ring::indexed(32003, n).unwrap();
        let ideal = random_m_primary(&ring, d, &mut r);
        let rep = power_table(&ideal, 4, Route::Both).map_err(|e| format!("ideal {k}: {e}"))?;
        let e: Vec<i64> = rep.rows.iter().map(|row| row.e_t.unwrap()).collect();
        let f: Vec<i64> = rep.rows.iter().map(|row| row.f_t.unwrap()).collect();
        let ok = e == f && e.iter().all(|&x| x >= 0) && e.windows(2).all(|w| w[0] >= w[1]);
        if !ok {
            violations.push(format!("ideal {k}: e = {e:?}, f = {f:?}"));
        }
    }
    if violations.is_empty() {
        Ok("50 ideals, 0 violations".into())
    } else {
        Err(violations.join("; "))
    }
}

// 4
fn theorem_identity() -> Result<String, String> {
    let mut parts = Vec::new();
    for (file, name, k) in [("conic.reg", "conic", 2), ("identity.reg", "identity", 2), ("twisted_cubic.reg", "cubic", 3)] {
        let s = session(file);
        let (ix, forms) = projection(&s, name);
        let eps = epsilon_containment(&ix, &forms, 6).map_err(|e| e.to_string())?;
        let Some(e) = eps.epsilon else { return Err(format!("{name}: ε not stabilized")) };
        let spec = ProjectionSpec::new(ix, forms).map_err(|e| e.to_string())?;
        let opts = FiberSearchOptions { ext_bound: k, epsilon: Some(e), ..Default::default() };
        let rep = max_fiber_regularity(&spec, &opts).map_err(|e| e.to_string())?;
        let m = rep.max_regularity.ok_or(format!("{name}: no nonempty fibers"))?;
        parts.push(format!("{name}: max reg {m}, ε + 1 = {}", e + 1));
        if !exact(m, e + 1) || rep.budget_exceeded {
            return Err(parts.join("; "));
        }
    }
    Ok(parts.join("; "))
}

// 5
fn two_variables() -> Result<String, String> {
    let ring = Ring::simple(101, &["x", "y"]).unwrap();
    let mono = |a: u16, b: u16| Polynomial::from_int_terms(&ring, &[(1, &[a, b])]);
    let mut fixtures = vec![
        vec![mono(2, 0), mono(0, 2)],
        vec![mono(2, 0), mono(1, 1), mono(0, 2)],
        vec![mono(3, 0), mono(2, 1), mono(0, 3)],
    ];
    fixtures.extend((1..=4).map(|d| vec![mono(d, 0), mono(0, d)]));
    for v in &fixtures {
        let verdict = twovars_verify(v, 6, 2).map_err(|e| e.to_string())?;
        let stable: Vec<_> = verdict.rows.iter().filter(|r| r.stabilized).collect();
        if stable.is_empty() || !stable.iter().all(|r| exact(r.reg_power, r.predicted)) {
            return Err(format!("fixture {:?}: rows {:?}", v.iter().map(|f| f.to_string()).collect::<Vec<_>>(), verdict.rows));
        }
    }
    let mut r = rng(5);
    let mut tested = 0;
    let mut with_stable_rows = 0;
    let mut violations = 0;
    while tested < 25 {
        let d = r.gen_range(1..=5);
        let dim = r.gen_range(2..=3).min(d as usize + 1);
        let v: Vec<Polynomial> = (0..dim).map(|_| random_form(&ring, d, 3, &mut r)).collect();
        // gcd 1 and independence are checked by twovars_r; redraw otherwise
        if twovars_r(&v, 1).is_err() {
            continue;
        }
        let verdict = twovars_verify(&v, 6, 1).map_err(|e| e.to_string())?;
        violations += verdict.violations;
        if verdict.rows.iter().any(|r| r.stabilized) {
            with_stable_rows += 1;
        }
        tested += 1;
    }
    let msg = format!(
        "{} fixtures exact; 25 random V, {with_stable_rows} with stabilized rows, {violations} violations",
        fixtures.len()
    );
    if violations == 0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

// 6
fn bound_reports() -> Result<String, String> {
    let mut parts = Vec::new();
    let hyps = BoundHypotheses { reduced_connected_codim1: true, regular_sequence: false };
    let s = session("twisted_cubic.reg");
    let ix = s.ideal("X").unwrap().clone();
    let ring = ix.ring().clone();
    let mut r = rng(6);
    let mut general = Vec::new();
    // two seeded random linear forms whose center misses the curve
    while general.len() < 2 {
        let forms: Vec<Polynomial> = (0..2).map(|_| random_form(&ring, 1, 4, &mut r)).collect();
        if epsilon_containment(&ix, &forms, 1).is_ok() {
            general = forms;
        }
    }
    for (label, forms) in [("twisted cubic, fixture forms", s.form_list("V").unwrap().to_vec()), ("twisted cubic, random forms", general)] {
        let rep = bound_report(&ix, &forms, 6, hyps, true).map_err(|e| e.to_string())?;
        let e = rep.epsilon_computed.ok_or(format!("{label}: ε not stabilized"))?;
        let dc = rep.bound_degcodim.unwrap();
        parts.push(format!("{label}: ε = {e}, reg R - 1 = {}, deg - codim = {dc}", rep.bound_easy));
        if !(exact(e, 1) && exact(rep.bound_easy, 1) && exact(dc, 1)) {
            return Err(parts.join("; "));
        }
    }
    let c = session("conic.reg");
    let (ix, forms) = projection(&c, "conic");
    let rep = bound_report(&ix, &forms, 6, hyps, true).map_err(|e| e.to_string())?;
    let e = rep.epsilon_computed.ok_or("conic: ε not stabilized")?;
    let dc = rep.bound_degcodim.unwrap();
    parts.push(format!("conic: ε = {e}, deg - codim = {dc}"));
    if exact(e, 1) && exact(dc, 1) {
        Ok(parts.join("; "))
    } else {
        Err(parts.join("; "))
    }
}

fn hilbert_by_linear_algebra(ideal: &Ideal, d_max: u32) -> Vec<u64> {
    let ring = ideal.ring();
    let n = ring.nvars();
    (0..=d_max)
        .map(|d| {
            let basis = monomials_of_degree(n, d);
            let index: HashMap<Monomial, usize> = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
            let mut rows = Vec::new();
            for g in ideal.generators() {
                let e = g.homogeneous_degree().unwrap();
                for m in if e <= d { monomials_of_degree(n, d - e) } else { Vec::new() } {
                    let mut row = vec![Fe::default(); basis.len()];
                    for (mm, c) in g.mul_term(&m, ring.field().one()).terms() {
                        row[index[mm]] = *c;
                    }
                    rows.push(row);
                }
            }
            basis.len() as u64 - linalg::rank(ring.field(), rows) as u64
        })
        .collect()
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn euler(ranks: &std::collections::BTreeMap<(usize, u32), u64>, n: usize, d: i64) -> i64 {
    ranks
        .iter()
        .filter(|(&(_, j), _)| d >= j as i64)
        .map(|(&(i, j), &r)| {
            let v = (r * binom(n as u64 - 1 + (d - j as i64) as u64, n as u64 - 1)) as i64;
            if i % 2 == 0 {
                v
            } else {
                -v
            }
        })
        .sum()
}

fn run_binary(args: &[&str]) -> Vec<u8> {
    Process::new(env!("CARGO_BIN_EXE_regpow")).args(args).output().unwrap().stdout
}

// 7
fn engine_properties() -> Result<String, String> {
    let mut r = rng(7);
    let rings = [Ring::indexed(32003, 3).unwrap(), Ring::indexed(32003, 4).unwrap(), Ring::indexed(101, 3).unwrap()];
    let mut failures = Vec::new();
    let mut resolutions = 0;
    for k in 0..20 {
        let ring = &rings[k % 3];
        let n = ring.nvars();
        let ideal = random_ideal(ring, &mut r);
        let reference = ideal.groebner().unwrap();
        let mut gens: Vec<Polynomial> = ideal.generators().iter().map(|g| g.scale(random_coeff(ring, &mut r))).collect();
        gens.shuffle(&mut r);
        if reference.elements() != Ideal::new(ring, gens).unwrap().groebner().unwrap().elements() {
            failures.push(format!("GB uniqueness, ideal {k}"));
        }
        let hf = hilbert_function(&ideal, 8).unwrap().values;
        if hf[..=6] != hilbert_by_linear_algebra(&ideal, 6)[..] {
            failures.push(format!("Hilbert oracle, ideal {k}"));
        }
        let schreyer = schreyer_resolution(&ideal).unwrap();
        let (minimal, table) = minimal_free_resolution(&ideal).unwrap();
        for (label, res, ranks) in
            [("schreyer", &schreyer, schreyer.graded_ranks()), ("minimal", &minimal, table.entries().clone())]
        {
            resolutions += 1;
            if !res.is_complex() {
                failures.push(format!("d^2 != 0, {label} resolution of ideal {k}"));
            }
            if (0..=8).any(|d| euler(&ranks, n, d) != hf[d as usize] as i64) {
                failures.push(format!("Euler characteristic, {label} resolution of ideal {k}"));
            }
        }
    }
    let prime = Ring::simple(32003, &["x", "y", "z"]).unwrap();
    let ext = Ring::new(vec!["x".into(), "y".into()], Field::extension(7, 2).unwrap(), MonomialOrder::grevlex())
        .unwrap()
        .with_generator_name("a");
    for k in 0..100 {
        let ring = if k % 2 == 0 { &prime } else { &ext };
        let q = ring.field().order();
        let terms = (0..r.gen_range(0..6))
            .map(|_| {
                let exps: Vec<u16> = (0..ring.nvars()).map(|_| r.gen_range(0..5)).collect();
                (Monomial::from_exponents(&exps), ring.field().element(r.gen_range(0..q)).unwrap())
            })
            .collect();
        let f = Polynomial::from_terms(ring, terms);
        match parse_polynomial(ring, &f.to_string()) {
            Ok(g) if g.terms() == f.terms() => {}
            _ => failures.push(format!("round trip of {f}")),
        }
    }
    let s = session("cone_conic.reg");
    let global = GlobalOpts { json: true, seed: Some(42), degree_ceiling: 64, threads: None, window: 3 };
    let cmd = Command::Sample {
        target: IdealArg { file: fixture_path("cone_conic.reg").into(), ideal: "C".into() },
        c: 1,
        trials: 8,
        tmax: 5,
    };
    let a = execute(&s, &cmd, &global).unwrap().render(true);
    let b = execute(&s, &cmd, &global).unwrap().render(true);
    let args = ["sample", &fixture_path("cone_conic.reg"), "-i", "C", "--seed", "42", "--trials", "8", "--tmax", "5", "--json"];
    let (x, y) = (run_binary(&args), run_binary(&args));
    if a != b || x != y || x != a.as_bytes() {
        failures.push("byte determinism of sample reports".into());
    }
    let args = ["fibers", &fixture_path("conic.reg"), "-s", "conic", "--json"];
    if run_binary(&args) != run_binary(&args) {
        failures.push("byte determinism of fiber reports".into());
    }
    if failures.is_empty() {
        Ok(format!("20 ideals, {resolutions} resolutions, 100 round trips, reports byte-identical"))
    } else {
        Err(failures.join("; "))
    }
}

// 8
fn sampler() -> Result<String, String> {
    let s = session("cone_conic.reg");
    let c = s.ideal("C").unwrap();
    let seed = 2024;
    let summary = conjecture_sampler(c, 1, 20, seed, 6).map_err(|e| e.to_string())?;
    let bad: Vec<u32> = summary
        .trials
        .iter()
        .filter(|t| !t.skipped && !t.last_epsilon_t.is_some_and(|e| e <= 1))
        .map(|t| t.trial)
        .collect();
    let global = GlobalOpts { json: true, seed: Some(seed), degree_ceiling: 64, threads: None, window: 3 };
    let cmd = Command::Sample {
        target: IdealArg { file: fixture_path("cone_conic.reg").into(), ideal: "C".into() },
        c: 1,
        trials: 20,
        tmax: 6,
    };
    let report = execute(&s, &cmd, &global).map_err(|e| e.to_string())?.report;
    let carries = report.seed == Some(seed)
        && report.warnings.iter().any(|w| w == EMPIRICAL_WARNING)
        && summary.warnings.iter().any(|w| w == EMPIRICAL_WARNING);
    let stable = summary.trials.iter().filter(|t| t.status == Some(StabilityStatus::HeuristicallyStable)).count();
    let msg = format!(
        "n = {}, bound {}, {} successful ({stable} stabilized), {} skipped, max ε {:?}, seed and warning present: {carries}",
        summary.n, summary.conjectured_epsilon, summary.successful, summary.skipped, summary.max_epsilon
    );
    if bad.is_empty() && carries && summary.conjectured_epsilon == 1 && summary.successful > 0 {
        Ok(msg)
    } else {
        Err(format!("{msg}; trials over the bound: {bad:?}"))
    }
}

fn main() {
    type Criterion = fn() -> Result<String, String>;
    let criteria: [(&str, Criterion, u64); 8] = [
        ("1 six-vertex RP2: reg I = 3, reg I^2 = 7", sturmfels, 300),
        ("2 complete-intersection top degree formula", complete_intersection, 60),
        ("3 monotonicity of e_t and f_t", monotonicity, 600),
        ("4 max fiber regularity = ε + 1", theorem_identity, 300),
        ("5 two-variable invariant r", two_variables, 900),
        ("6 bound report", bound_reports, 300),
        ("7 engine properties", engine_properties, 600),
        ("8 conjecture sampler smoke test", sampler, 300),
    ];
    let mut failed = 0;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > Duration::from_secs(limit) => Err(format!("{msg}; over the {limit} s limit")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("PASS criterion {name}: {msg} [{:.2} s]", elapsed.as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg} [{:.2} s]", elapsed.as_secs_f64());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
