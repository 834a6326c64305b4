//! Verification suites: every check runs an exact symbolic identity or a
//! calibrated numeric comparison, names the identity it tests, and
//! reports a deterministic status line. Report bytes depend only on the
//! configuration and seed; timing goes to stderr.

use crate::output::fmt_residual;
use genus_forge_core::anomaly::{
    cocycle_law_holds, cocycle_relations_hold, string_trivialization, susy_trivialization_uniqueness,
    witten_section_equivariance, SL2Letter, SL2Word, UnitCandidate,
};
use genus_forge_core::charclass::{
    ahat_series, genus_evaluate, multiplicative_class, pontryagin_in_s, power_sum_in_p,
    witten_series_q, zagier_identity_check, ExponentConvention, GradedPoly, ManifoldData,
    SignConvention, WittenVariant,
};
use genus_forge_core::modular::{
    bernoulli, dedekind_eta_numeric, dedekind_eta_qseries, e2_star, e2_transform_residual,
    eisenstein_lattice, eisenstein_lattice_qseries, token_self_test, zeta_even, Lattice,
};
use genus_forge_core::ring::{rat, rone, Rat};
use genus_forge_core::sampling::{sample_lattice, sample_tau, SplitMix};
use genus_forge_core::series::{TruncSeries, VAR_Z};
use genus_forge_core::superalg::forms::{random_form, FormPoly};
use genus_forge_core::superalg::generators::{
    d_squared_residual_11, d_squared_residual_21, direct_action_11, direct_action_21,
    exp_action_11, exp_action_21, exp_composition_identity_holds, solve_case, susy_case_library,
};
use genus_forge_core::superalg::group::{
    group_mul_11, group_mul_21, proj_lambda_invariance_residual, proj_r_invariance_residual,
    SuperLattice, SuperPoint11, SuperPoint21,
};
use genus_forge_core::superalg::connection::{test_sections, GMatrix, Superconnection};
use genus_forge_core::superalg::even::{EvenExpr, Sym, XVARS};
use genus_forge_core::superalg::grassmann::{Grassmann, OddGen, PSI};
use genus_forge_core::zetadet::{
    detline_norm_check_11, detline_norm_check_21, eval_formal21_exponent, fredholm_oracle_11,
    kronecker_det, lattice_oracle_21, mode_trace_inverse_power, sdet_zeta_11,
    witten_star_exponent, CurvatureModel, DetValue, KineticOperator,
};
use num_complex::Complex64;
use num_traits::Zero;
use std::f64::consts::PI;

#[derive(Clone, Copy)]
pub struct SuiteConfig {
    pub cap: u32,
    pub tol: f64,
    pub seed: u64,
    pub q_order: i64,
    pub cutoff: u32,
    pub modes: u64,
}

pub struct CheckResult {
    pub suite: &'static str,
    pub name: &'static str,
    pub identity: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = (
    &'static str,
    &'static str,
    &'static str,
    Box<dyn Fn(&SuiteConfig) -> Result<String, String> + Send + Sync>,
);

fn check(
    suite: &'static str,
    name: &'static str,
    identity: &'static str,
    f: impl Fn(&SuiteConfig) -> Result<String, String> + Send + Sync + 'static,
) -> Check {
    (suite, name, identity, Box::new(f))
}

pub fn run_suites(selector: &str, config: &SuiteConfig, threads: usize) -> Result<bool, String> {
    let known = ["series", "modular", "charclass", "susy", "zeta", "anomaly"];
    let wanted: Vec<&str> = if selector == "all" {
        known.to_vec()
    } else {
        if !known.contains(&selector) {
            return Err(format!(
                "unknown suite '{}'; expected one of {} or all",
                selector,
                known.join(", ")
            ));
        }
        vec![selector]
    };
    let checks: Vec<Check> = all_checks()
        .into_iter()
        .filter(|(s, _, _, _)| wanted.contains(s))
        .collect();
    let start = std::time::Instant::now();
    let results = run_checks(&checks, config, threads);
    let mut all_passed = true;
    for r in &results {
        let status = if r.passed { "[ ok ]" } else { "[FAIL]" };
        all_passed &= r.passed;
        println!(
            "{} {}/{}  {}  | {}",
            status, r.suite, r.name, r.detail, r.identity
        );
    }
    let passed = results.iter().filter(|r| r.passed).count();
    println!("{} of {} checks passed", passed, results.len());
    eprintln!(
        "elapsed: {:.2}s over {} checks ({} thread(s))",
        start.elapsed().as_secs_f64(),
        results.len(),
        threads
    );
    Ok(all_passed)
}

fn run_checks(checks: &[Check], config: &SuiteConfig, threads: usize) -> Vec<CheckResult> {
    use std::sync::atomic::{AtomicUsize, Ordering};
    use std::sync::Mutex;
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<CheckResult>>> =
        Mutex::new((0..checks.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..threads.max(1).min(checks.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= checks.len() {
                    break;
                }
                let (suite, name, identity, f) = &checks[i];
                let outcome = f(config);
                let result = match outcome {
                    Ok(detail) => CheckResult {
                        suite,
                        name,
                        identity,
                        passed: true,
                        detail,
                    },
                    Err(detail) => CheckResult {
                        suite,
                        name,
                        identity,
                        passed: false,
                        detail,
                    },
                };
                results.lock().unwrap()[i] = Some(result);
            });
        }
    });
    results
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|r| r.unwrap())
        .collect()
}

fn random_series(rng: &mut SplitMix, order: i64) -> TruncSeries<Rat> {
    let mut s = TruncSeries::zero_in(VAR_Z, 1, order);
    for k in 0..order {
        if rng.next_range(2) == 0 {
            s.set(
                k,
                rat(rng.next_range(19) as i64 - 9, 1 + rng.next_range(6) as i64),
            );
        }
    }
    s
}

fn bool_to_exact(ok: bool, what: &str) -> Result<String, String> {
    if ok {
        Ok("exact".into())
    } else {
        Err(format!("{} violated", what))
    }
}

#[allow(clippy::too_many_lines)]
fn all_checks() -> Vec<Check> {
    vec![
        // ------------------------------------------------------- series
        check(
            "series",
            "ring-axioms",
            "(a+b)c = ac + bc and (ab)c = a(bc) on random truncated series",
            |cfg| {
                let mut rng = SplitMix::new(cfg.seed);
                for _ in 0..50 {
                    let a = random_series(&mut rng, 9);
                    let b = random_series(&mut rng, 9);
                    let c = random_series(&mut rng, 9);
                    let dist = a
                        .try_add(&b)
                        .and_then(|s| s.try_mul(&c))
                        .map_err(|e| e.to_string())?;
                    let dist2 = a
                        .try_mul(&c)
                        .and_then(|x| b.try_mul(&c).and_then(|y| x.try_add(&y)))
                        .map_err(|e| e.to_string())?;
                    if dist != dist2 {
                        return Err("distributivity failed".into());
                    }
                    let assoc = a
                        .try_mul(&b)
                        .and_then(|s| s.try_mul(&c))
                        .map_err(|e| e.to_string())?;
                    let assoc2 = b
                        .try_mul(&c)
                        .and_then(|s| a.try_mul(&s))
                        .map_err(|e| e.to_string())?;
                    if assoc != assoc2 {
                        return Err("associativity failed".into());
                    }
                }
                Ok("exact on 50 triples".into())
            },
        ),
        check(
            "series",
            "exp-log-inverse",
            "log(exp(f)) = f and exp(log(1+g)) = 1+g to truncation order",
            |cfg| {
                let mut rng = SplitMix::new(cfg.seed ^ 0x51);
                for _ in 0..100 {
                    let mut f = random_series(&mut rng, 10);
                    f.set(0, rat(0, 1));
                    let e = f.exp().map_err(|e| e.to_string())?;
                    if e.log().map_err(|e| e.to_string())? != f {
                        return Err("log(exp(f)) != f".into());
                    }
                    let mut g = random_series(&mut rng, 10);
                    g.set(0, rone());
                    if g.log()
                        .and_then(|l| l.exp())
                        .map_err(|e| e.to_string())?
                        != g
                    {
                        return Err("exp(log(g)) != g".into());
                    }
                }
                Ok("exact on 100 inputs".into())
            },
        ),
        check(
            "series",
            "csv-roundtrip",
            "exact CSV serialization reproduces the series bit for bit",
            |cfg| {
                let mut rng = SplitMix::new(cfg.seed ^ 0x52);
                let s = random_series(&mut rng, 40);
                let text = s.to_csv_exact();
                let back = TruncSeries::from_csv_exact(VAR_Z, 1, 40, &text)
                    .map_err(|e| e.to_string())?;
                bool_to_exact(back == s, "round trip")
            },
        ),
        check(
            "series",
            "sinh-reciprocal",
            "(z/2)/sinh(z/2) = 1 - z^2/24 + 7z^4/5760 - ...",
            |_| {
                let a = ahat_series(10).map_err(|e| e.to_string())?;
                let ok = a.product_form.coeff(2) == rat(-1, 24)
                    && a.product_form.coeff(4) == rat(7, 5760);
                bool_to_exact(ok, "series expansion")
            },
        ),
        // ------------------------------------------------------ modular
        check(
            "modular",
            "bernoulli",
            "B0 = 1, B1 = -1/2, B2 = 1/6, B12 = -691/2730",
            |_| {
                let ok = bernoulli(0) == rone()
                    && bernoulli(1) == rat(-1, 2)
                    && bernoulli(2) == rat(1, 6)
                    && bernoulli(12) == rat(-691, 2730);
                bool_to_exact(ok, "recurrence values")
            },
        ),
        check(
            "modular",
            "zeta-even",
            "zeta(2) = pi^2/6 and zeta(4) = pi^4/90, exactly pi-graded",
            |_| {
                let ok = zeta_even(1).coeff(2) == rat(1, 6) && zeta_even(2).coeff(4) == rat(1, 90);
                bool_to_exact(ok, "zeta values")
            },
        ),
        check(
            "modular",
            "e2-transform",
            "E2(-1/tau) = tau^2 E2(tau) - 2 pi i tau",
            |cfg| {
                let mut rng = SplitMix::new(cfg.seed ^ 0x61);
                let mut max = 0.0f64;
                for _ in 0..10 {
                    let tau = sample_tau(&mut rng);
                    let r = e2_transform_residual(tau, cfg.q_order).map_err(|e| e.to_string())?;
                    max = max.max(r);
                }
                if max < cfg.tol {
                    Ok(format!("max residual {}", fmt_residual(max)))
                } else {
                    Err(format!("residual {} exceeds tolerance", fmt_residual(max)))
                }
            },
        ),
        check(
            "modular",
            "e2star-weight2",
            "E2*(-1/tau) = tau^2 E2*(tau)",
            |cfg| {
                let mut rng = SplitMix::new(cfg.seed ^ 0x62);
                let mut max = 0.0f64;
                for _ in 0..10 {
                    let tau = sample_tau(&mut rng);
                    let lhs = e2_star(&Lattice::from_tau(-tau.inv()).map_err(|e| e.to_string())?, cfg.q_order)
                        .map_err(|e| e.to_string())?;
                    let rhs = tau
                        * tau
                        * e2_star(&Lattice::from_tau(tau).map_err(|e| e.to_string())?, cfg.q_order)
                            .map_err(|e| e.to_string())?;
                    max = max.max((lhs - rhs).norm());
                }
                if max < cfg.tol {
                    Ok(format!("max residual {}", fmt_residual(max)))
                } else {
                    Err(format!("residual {} exceeds tolerance", fmt_residual(max)))
                }
            },
        ),
        check(
            "modular",
            "eta-functional-equation",
            "|eta(-1/tau)| = |tau|^(1/2) |eta(tau)|",
            |cfg| {
                let mut rng = SplitMix::new(cfg.seed ^ 0x63);
                let mut max = 0.0f64;
                for _ in 0..10 {
                    let tau = sample_tau(&mut rng);
                    let lhs = dedekind_eta_numeric(-tau.inv()).map_err(|e| e.to_string())?.norm();
                    let rhs =
                        tau.norm().sqrt() * dedekind_eta_numeric(tau).map_err(|e| e.to_string())?.norm();
                    max = max.max((lhs - rhs).abs());
                }
                if max < 1e-10 {
                    Ok(format!("max residual {}", fmt_residual(max)))
                } else {
                    Err(format!("residual {}", fmt_residual(max)))
                }
            },
        ),
        check(
            "modular",
            "eta-pentagonal",
            "eta q-expansion supported on (6n+1)^2/24 with signs (-1)^n",
            |_| {
                let eta = dedekind_eta_qseries(200).map_err(|e| e.to_string())?;
                for (&key, c) in eta.coeffs() {
                    // key = exponent in 1/24 units; must be (6n+1)^2
                    let mut matched = false;
                    let mut n: i64 = -60;
                    while n <= 60 {
                        if (6 * n + 1) * (6 * n + 1) == key {
                            let sign = if n.rem_euclid(2) == 0 { 1 } else { -1 };
                            if *c != rat(sign, 1) {
                                return Err(format!("wrong sign at exponent {}/24", key));
                            }
                            matched = true;
                            break;
                        }
                        n += 1;
                    }
                    if !matched {
                        return Err(format!("unexpected support at exponent {}/24", key));
                    }
                }
                Ok("exact through q^200".into())
            },
        ),
        check(
            "modular",
            "eta24-integral",
            "eta^24 has integer q-coefficients",
            |_| {
                let eta = dedekind_eta_qseries(16).map_err(|e| e.to_string())?;
                let d = eta
                    .pow(24)
                    .and_then(|p| p.with_unit_den(1))
                    .map_err(|e| e.to_string())?;
                use num_traits::One;
                for (_, c) in d.coeffs() {
                    if !c.denom().is_one() {
                        return Err("non-integral coefficient".into());
                    }
                }
                bool_to_exact(d.coeff(1) == rone() && d.coeff(2) == rat(-24, 1), "leading terms")
            },
        ),
        check(
            "modular",
            "token-self-test",
            "token evaluators obey their dilation, S and T rules",
            |cfg| {
                token_self_test(cfg.tol, cfg.q_order, cfg.seed ^ 0x64)
                    .map_err(|e| e.to_string())?;
                Ok("10 lattices".into())
            },
        ),
        check(
            "modular",
            "e4-lattice-vs-qseries",
            "shell-truncated lattice sum approaches the weight-4 q-expansion",
            |cfg| {
                let lat = Lattice::from_tau(Complex64::new(0.0, 1.0)).map_err(|e| e.to_string())?;
                let sum = eisenstein_lattice(2, &lat, cfg.cutoff).map_err(|e| e.to_string())?;
                let qs = eisenstein_lattice_qseries(2, &lat, 40);
                let r = (sum - qs).norm();
                if r < 1e-6 {
                    Ok(format!("residual {}", fmt_residual(r)))
                } else {
                    Err(format!("residual {}", fmt_residual(r)))
                }
            },
        ),
        // ---------------------------------------------------- charclass
        check(
            "charclass",
            "sinh-identity",
            "(x/2)/sinh(x/2) equals its zeta-ratio exponential form through z^12",
            |_| {
                ahat_series(13).map_err(|e| e.to_string())?;
                Ok("exact".into())
            },
        ),
        check(
            "charclass",
            "product-identity",
            "sinh product expansion matches the Eisenstein exponential side",
            |_| {
                let report = zagier_identity_check(9, 11).map_err(|e| e.to_string())?;
                if !Zero::is_zero(&report.max_discrepancy) {
                    return Err("nonzero discrepancy".into());
                }
                let (conv, sign) = report.resolved;
                if conv != ExponentConvention::FullExponent || sign != SignConvention::Reciprocal {
                    return Err("unexpected resolved convention".into());
                }
                Ok(format!("resolved: {} {}", conv, sign))
            },
        ),
        check(
            "charclass",
            "newton-roundtrip",
            "power sums and elementary generators convert inversely",
            |_| {
                for k in 1..=6u32 {
                    let back = pontryagin_in_s(k, 24).substitute(&|i| power_sum_in_p(i, 24));
                    let mut expect = GradedPoly::zero(24);
                    expect.set(vec![k], rone());
                    if back != expect {
                        return Err(format!("roundtrip failed at k = {}", k));
                    }
                }
                Ok("exact for k <= 6".into())
            },
        ),
        check(
            "charclass",
            "genus-k3",
            "<-p1/24, [X]> = 2 for the p1 = -48 input",
            |_| {
                let m = ManifoldData::from_json(
                    r#"{"name":"K3-type","dim":4,"pontryagin_numbers":{"p1":-48}}"#,
                )
                .map_err(|e| e.to_string())?;
                let series = ahat_series(6).map_err(|e| e.to_string())?;
                let class = multiplicative_class(&series.series, 4);
                let g = genus_evaluate(&class, &m).map_err(|e| e.to_string())?;
                bool_to_exact(g.value == rat(2, 1), "genus value")
            },
        ),
        check(
            "charclass",
            "witten-q0-specialization",
            "the q^0 part of the weight-graded class equals the sinh class, dims <= 12",
            |cfg| {
                let w =
                    witten_series_q(WittenVariant::Holo, 14, cfg.q_order.min(12)).map_err(|e| e.to_string())?;
                let a = ahat_series(14).map_err(|e| e.to_string())?;
                for dim in [4u32, 8, 12] {
                    let wc = multiplicative_class(&w, dim).map_coeffs(|s| s.coeff(0));
                    let ac = multiplicative_class(&a.series, dim);
                    if wc != ac {
                        return Err(format!("mismatch in dimension {}", dim));
                    }
                }
                Ok("exact".into())
            },
        ),
        check(
            "charclass",
            "string-variant-z2-absent",
            "the string variant drops the weight-2 exponent term",
            |cfg| {
                let s = witten_series_q(WittenVariant::String, 8, cfg.q_order.min(12))
                    .map_err(|e| e.to_string())?;
                bool_to_exact(
                    !s.exponent_coeffs.contains_key(&1) && s.exponent_coeffs.contains_key(&2),
                    "exponent support",
                )
            },
        ),
        // --------------------------------------------------------- susy
        check(
            "susy",
            "group-associativity",
            "(g1 g2) g3 = g1 (g2 g3) in both super group laws",
            |_| {
                let a = SuperPoint11 {
                    t: Grassmann::sym(Sym::T),
                    theta: Grassmann::gen(OddGen::Theta),
                };
                let b = SuperPoint11 {
                    t: Grassmann::sym(Sym::T2),
                    theta: Grassmann::gen(OddGen::Theta2),
                };
                let c = SuperPoint11 {
                    t: Grassmann::sym(Sym::T3),
                    theta: Grassmann::gen(OddGen::Theta3),
                };
                let l = group_mul_11(&group_mul_11(&a, &b).map_err(|e| e.to_string())?, &c)
                    .map_err(|e| e.to_string())?;
                let r = group_mul_11(&a, &group_mul_11(&b, &c).map_err(|e| e.to_string())?)
                    .map_err(|e| e.to_string())?;
                if !l.eq(&r) {
                    return Err("1|1 associativity failed".into());
                }
                let a2 = SuperPoint21 {
                    z: Grassmann::sym(Sym::Z),
                    zbar: Grassmann::sym(Sym::Zbar),
                    theta: Grassmann::gen(OddGen::Theta),
                };
                let b2 = SuperPoint21 {
                    z: Grassmann::sym(Sym::Z2),
                    zbar: Grassmann::sym(Sym::Z2bar),
                    theta: Grassmann::gen(OddGen::Theta2),
                };
                let c2 = SuperPoint21 {
                    z: Grassmann::sym(Sym::U),
                    zbar: Grassmann::sym(Sym::Ubar),
                    theta: Grassmann::gen(OddGen::Theta3),
                };
                let l2 = group_mul_21(&group_mul_21(&a2, &b2).map_err(|e| e.to_string())?, &c2)
                    .map_err(|e| e.to_string())?;
                let r2 = group_mul_21(&a2, &group_mul_21(&b2, &c2).map_err(|e| e.to_string())?)
                    .map_err(|e| e.to_string())?;
                bool_to_exact(l2.eq(&r2), "2|1 associativity")
            },
        ),
        check(
            "susy",
            "projection-invariance",
            "theta - rho t/r and its torus analogue are lattice invariant",
            |_| {
                if !proj_r_invariance_residual(1).is_zero()
                    || !proj_r_invariance_residual(2).is_zero()
                {
                    return Err("circle projection residual nonzero".into());
                }
                let lat = SuperLattice::standard();
                for by_prime in [false, true] {
                    let r = proj_lambda_invariance_residual(&lat, by_prime)
                        .map_err(|e| e.to_string())?;
                    if !r.is_zero() {
                        return Err("torus projection residual nonzero".into());
                    }
                }
                Ok("exact".into())
            },
        ),
        check(
            "susy",
            "d-squared",
            "D^2 = -i d/dt for D = d/d(theta) - i theta d/dt (and the zbar analogue)",
            |cfg| {
                let mut rng = SplitMix::new(cfg.seed ^ 0x71);
                for _ in 0..50 {
                    let a = rng.next_range(5) as i16;
                    let b = rng.next_range(5) as i16;
                    let f = Grassmann::scalar(EvenExpr::sym_pow(Sym::T, 2 * a)).add(
                        &Grassmann::gen(OddGen::Theta)
                            .mul(&Grassmann::scalar(EvenExpr::sym_pow(Sym::T, 2 * b))),
                    );
                    if !d_squared_residual_11(&f).is_zero() {
                        return Err("1|1 residual nonzero".into());
                    }
                    let g = Grassmann::scalar(EvenExpr::sym_pow(Sym::Zbar, 2 * a)).add(
                        &Grassmann::gen(OddGen::Theta)
                            .mul(&Grassmann::scalar(EvenExpr::sym_pow(Sym::Zbar, 2 * b))),
                    );
                    if !d_squared_residual_21(&g).is_zero() {
                        return Err("2|1 residual nonzero".into());
                    }
                }
                Ok("exact on 50 inputs each".into())
            },
        ),
        check(
            "susy",
            "generator-lemma",
            "exp of the infinitesimal generators equals the pullback action",
            |cfg| {
                let mut rng = SplitMix::new(cfg.seed ^ 0x72);
                for _ in 0..50 {
                    let f = random_section_11(&mut rng);
                    if !exp_action_11(&f, 2).eq(&direct_action_11(&f, 2)) {
                        return Err("1|1 lemma failed".into());
                    }
                    let g = random_section_21(&mut rng);
                    if !exp_action_21(&g, 2).eq(&direct_action_21(&g, 2)) {
                        return Err("2|1 lemma failed".into());
                    }
                }
                Ok("exact on 50 inputs each".into())
            },
        ),
        check(
            "susy",
            "composition-law",
            "exp(iuQ^2+nuQ) exp(iu'Q^2+nu'Q) = exp(i(u+u'+i nu nu')Q^2+(nu+nu')Q)",
            |_| bool_to_exact(exp_composition_identity_holds(), "composition"),
        ),
        check(
            "susy",
            "connection-expansion",
            "h (pullback nabla_theta) h^{-1} = d/d(theta) + theta (dA + A A)",
            |cfg| {
                let mut rng = SplitMix::new(cfg.seed ^ 0x73);
                for _ in 0..10 {
                    let mut entries = vec![vec![Grassmann::zero(); 2]; 2];
                    for row in entries.iter_mut() {
                        for e in row.iter_mut() {
                            let mut acc = Grassmann::zero();
                            for (j, &p) in PSI.iter().enumerate().take(2) {
                                if rng.next_range(2) == 0 {
                                    let c = EvenExpr::sym(XVARS[(j + 1) % 2]);
                                    acc = acc.add(&Grassmann::scalar(c).mul(&Grassmann::gen(p)));
                                }
                            }
                            *e = acc;
                        }
                    }
                    let conn = Superconnection::new(2, GMatrix::from_entries(entries).map_err(|e| e.to_string())?)
                        .map_err(|e| e.to_string())?;
                    if !conn.expansion_identity_holds(&test_sections(2, 2, &mut rng)) {
                        return Err("expansion identity failed".into());
                    }
                }
                Ok("exact on 10 random connections".into())
            },
        ),
        check(
            "susy",
            "concordance-homotopy",
            "dQ + Qd = i1* - i0* on polynomial forms",
            |cfg| {
                let mut rng = SplitMix::new(cfg.seed ^ 0x74);
                for _ in 0..50 {
                    let alpha = random_form(3, &mut rng);
                    if !alpha.homotopy_identity_residual().is_zero() {
                        return Err("homotopy identity failed".into());
                    }
                }
                Ok("exact on 50 random forms".into())
            },
        ),
        check(
            "susy",
            "section-characterization",
            "accepted sections are exactly r^(deg/2) (resp. vol^(deg/2) token) times closed forms",
            |_| {
                let mut accepted = 0;
                let mut rejected = 0;
                for (name, expect, case) in susy_case_library() {
                    let verdict = solve_case(&case);
                    if verdict.accepted != expect {
                        return Err(format!("case '{}' misclassified", name));
                    }
                    if expect {
                        accepted += 1;
                    } else {
                        rejected += 1;
                    }
                }
                Ok(format!("{} accepts, {} rejects", accepted, rejected))
            },
        ),
        // --------------------------------------------------------- zeta
        check(
            "zeta",
            "mode-oracle-vs-closed",
            "truncated mode product approaches prod (theta r/2)/sinh(theta r/2)",
            |cfg| {
                let mut rng = SplitMix::new(cfg.seed ^ 0x81);
                let mut max_rel = 0.0f64;
                for _ in 0..3 {
                    let thetas: Vec<f64> = (0..2).map(|_| rng.uniform(0.1, 0.5)).collect();
                    let r = rng.uniform(0.5, 1.5);
                    let op = KineticOperator::circle(
                        r,
                        CurvatureModel::Numeric(block_matrix(&thetas)),
                    )
                    .map_err(|e| e.to_string())?;
                    let closed = match sdet_zeta_11(&op, true).map_err(|e| e.to_string())?.value {
                        DetValue::Numeric(v) => v.re,
                        _ => unreachable!(),
                    };
                    let oracle = fredholm_oracle_11(&op, cfg.modes).map_err(|e| e.to_string())?;
                    max_rel = max_rel.max(((oracle - closed) / closed).abs());
                }
                if max_rel < 2e-5 {
                    Ok(format!("max relative deviation {}", fmt_residual(max_rel)))
                } else {
                    Err(format!("relative deviation {}", fmt_residual(max_rel)))
                }
            },
        ),
        check(
            "zeta",
            "formal-11-class",
            "the formal relative determinant is the (x/2)/sinh(x/2) class, dim 12",
            |_| {
                let op = KineticOperator::circle(1.0, CurvatureModel::FormalBlocks { blocks: 3 })
                    .map_err(|e| e.to_string())?;
                let formal = match sdet_zeta_11(&op, true).map_err(|e| e.to_string())?.value {
                    DetValue::Formal11(c) => c,
                    _ => unreachable!(),
                };
                let ahat = multiplicative_class(&ahat_series(14).map_err(|e| e.to_string())?.series, 12);
                bool_to_exact(formal == ahat, "class equality")
            },
        ),
        check(
            "zeta",
            "odd-mode-cancellation",
            "odd inverse powers of d/dt vanish by the (n, -n) pairing",
            |cfg| {
                for p in [1u32, 3, 5] {
                    if mode_trace_inverse_power(p, cfg.modes.min(10_000), 1.3) != 0.0 {
                        return Err(format!("odd power {} does not cancel", p));
                    }
                }
                Ok("exact".into())
            },
        ),
        check(
            "zeta",
            "sdet21-oracle-match",
            "shell-truncated weight >= 4 terms match the closed form at sampled lattices",
            |cfg| {
                let mut rng = SplitMix::new(cfg.seed ^ 0x82);
                let mut max_rel = 0.0f64;
                for _ in 0..3 {
                    let lat = sample_lattice(&mut rng);
                    let m = block_matrix(&[rng.uniform(0.2, 0.8), rng.uniform(0.2, 0.8)]);
                    let op = KineticOperator::torus(lat, CurvatureModel::Numeric(m));
                    let oracle = lattice_oracle_21(&op, cfg.cutoff)
                        .map_err(|e| e.to_string())?
                        .value
                        .unwrap();
                    let s = op
                        .curvature
                        .numeric_power_sums(2)
                        .map_err(|e| e.to_string())?;
                    let closed = eval_formal21_exponent(
                        &witten_star_exponent(op.degree_cap),
                        &s,
                        &lat,
                        40,
                        |k| k >= 2,
                    )
                    .map_err(|e| e.to_string())?
                    .exp();
                    max_rel = max_rel.max((oracle - closed).norm() / closed.norm());
                }
                if max_rel < 1e-6 {
                    Ok(format!("max relative deviation {}", fmt_residual(max_rel)))
                } else {
                    Err(format!("relative deviation {}", fmt_residual(max_rel)))
                }
            },
        ),
        check(
            "zeta",
            "kronecker-invariance",
            "vol^2 |eta|^4 is invariant under both basis moves and squares with rank",
            |cfg| {
                let mut rng = SplitMix::new(cfg.seed ^ 0x83);
                let lat = sample_lattice(&mut rng);
                let v = kronecker_det(&lat, 2).map_err(|e| e.to_string())?;
                let s_lat = Lattice::new(lat.ell_prime, -lat.ell).map_err(|e| e.to_string())?;
                let t_lat =
                    Lattice::new(lat.ell, lat.ell_prime + lat.ell).map_err(|e| e.to_string())?;
                let rs = (kronecker_det(&s_lat, 2).map_err(|e| e.to_string())? - v).abs() / v;
                let rt = (kronecker_det(&t_lat, 2).map_err(|e| e.to_string())? - v).abs() / v;
                let v1 = kronecker_det(&lat, 1).map_err(|e| e.to_string())?;
                let rq = (v - v1 * v1).abs() / v;
                let max = rs.max(rt).max(rq);
                if max < cfg.tol {
                    Ok(format!("max residual {}", fmt_residual(max)))
                } else {
                    Err(format!("residual {}", fmt_residual(max)))
                }
            },
        ),
        check(
            "zeta",
            "detline-norms",
            "norm squared factors as (class) times (conjugate class), with the E2* pair rewrite",
            |_| {
                detline_norm_check_11(2).map_err(|e| e.to_string())?;
                let rep = detline_norm_check_21(2).map_err(|e| e.to_string())?;
                bool_to_exact(rep.rewritten == rep.target, "factorization")
            },
        ),
        // ------------------------------------------------------ anomaly
        check(
            "anomaly",
            "cocycle-relations",
            "S^4 and (ST)^3 S^-2 evaluate to 1 in the truncated ring",
            |cfg| {
                cocycle_relations_hold(cfg.cap.max(4)).map_err(|e| e.to_string())?;
                Ok("exact".into())
            },
        ),
        check(
            "anomaly",
            "cocycle-law",
            "alpha_{AB}(x) = alpha_A(Bx) alpha_B(x) on random word pairs",
            |cfg| {
                let mut rng = SplitMix::new(cfg.seed ^ 0x91);
                let letters = [SL2Letter::S, SL2Letter::T, SL2Letter::SInv, SL2Letter::TInv];
                for _ in 0..20 {
                    let a = SL2Word(
                        (0..rng.next_range(4) + 1)
                            .map(|_| letters[rng.next_range(4) as usize])
                            .collect(),
                    );
                    let b = SL2Word(
                        (0..rng.next_range(4) + 1)
                            .map(|_| letters[rng.next_range(4) as usize])
                            .collect(),
                    );
                    if !cocycle_law_holds(&a, &b, cfg.cap.max(4)).map_err(|e| e.to_string())? {
                        return Err(format!("law fails for {} and {}", a, b));
                    }
                }
                Ok("exact on 20 pairs".into())
            },
        ),
        check(
            "anomaly",
            "section-equivariance",
            "the E2 section transforms under S by exactly exp(P/(l l'))",
            |cfg| {
                let rep =
                    witten_section_equivariance(cfg.cap.max(4), cfg.q_order, cfg.tol, cfg.seed ^ 0x92, 10)
                        .map_err(|e| e.to_string())?;
                Ok(format!(
                    "symbolic exact; max numeric residual {}",
                    fmt_residual(rep.max_residual)
                ))
            },
        ),
        check(
            "anomaly",
            "trivialization-endpoints",
            "t=0 gives 1, t=1 gives exp on the p1 form; dH != p1 is refused",
            |cfg| {
                let dim = 4;
                let h = FormPoly::x(dim, 0)
                    .wedge(&FormPoly::dx(dim, 1))
                    .wedge(&FormPoly::dx(dim, 2))
                    .wedge(&FormPoly::dx(dim, 3));
                let p1 = h.d().at_t(&rat(0, 1));
                let lat = Lattice::from_tau(Complex64::new(0.2, 1.3)).map_err(|e| e.to_string())?;
                let v0 = string_trivialization(&h, &p1, &rat(0, 1), &lat, cfg.cap.max(4), cfg.q_order)
                    .map_err(|e| e.to_string())?;
                if !v0.exponent_form.is_zero() {
                    return Err("t = 0 endpoint is not trivial".into());
                }
                let v1 = string_trivialization(&h, &p1, &rat(1, 1), &lat, cfg.cap.max(4), cfg.q_order)
                    .map_err(|e| e.to_string())?;
                if !v1.exponent_form.eq(&p1) {
                    return Err("t = 1 endpoint is not the p1 cocycle".into());
                }
                let wrong = p1.add(
                    &FormPoly::dx(dim, 0)
                        .wedge(&FormPoly::dx(dim, 1))
                        .wedge(&FormPoly::dx(dim, 2))
                        .wedge(&FormPoly::dx(dim, 3)),
                );
                if string_trivialization(&h, &wrong, &rat(1, 1), &lat, cfg.cap.max(4), cfg.q_order).is_ok() {
                    return Err("dH != p1 was not refused".into());
                }
                Ok("endpoints exact; refusal enforced".into())
            },
        ),
        check(
            "anomaly",
            "trivialization-uniqueness",
            "unit supersymmetric trivializations differ by a constant phase",
            |cfg| {
                let a = UnitCandidate::constant(Complex64::new(1.0, 0.0));
                let b = UnitCandidate::constant(Complex64::from_polar(1.0, PI / 3.0));
                let rep = susy_trivialization_uniqueness(&b, &a, cfg.q_order, cfg.tol, cfg.seed ^ 0x93, 5)
                    .map_err(|e| e.to_string())?;
                let expected = Complex64::from_polar(1.0, PI / 3.0);
                if (rep.ratio - expected).norm() > 1e-8 {
                    return Err("constant phase not recovered".into());
                }
                // a nonconstant or nonholomorphic candidate must be rejected
                use genus_forge_core::modular::{ModExpr, Token, TokenKind};
                let bad = UnitCandidate {
                    phase: Complex64::new(1.0, 0.0),
                    expr: ModExpr::token(Token::new(TokenKind::E2Star)),
                };
                if bad.check_susy_unit().is_ok() {
                    return Err("non-unit candidate accepted".into());
                }
                Ok(format!(
                    "phase recovered; modulus deviation {}",
                    fmt_residual(rep.max_modulus_deviation)
                ))
            },
        ),
    ]
}

fn block_matrix(thetas: &[f64]) -> Vec<Vec<f64>> {
    let n = 2 * thetas.len();
    let mut m = vec![vec![0.0; n]; n];
    for (j, &t) in thetas.iter().enumerate() {
        m[2 * j][2 * j + 1] = t;
        m[2 * j + 1][2 * j] = -t;
    }
    m
}

fn random_section_11(rng: &mut SplitMix) -> Grassmann {
    random_section(rng, &[Sym::R], &[OddGen::Rho], 2)
}

fn random_section_21(rng: &mut SplitMix) -> Grassmann {
    random_section(
        rng,
        &[Sym::L, Sym::Lbar, Sym::Lp, Sym::Lpbar, Sym::Vol],
        &[OddGen::Sigma, OddGen::SigmaP],
        2,
    )
}

fn random_section(rng: &mut SplitMix, syms: &[Sym], odds: &[OddGen], m: usize) -> Grassmann {
    let mut acc = Grassmann::zero();
    for _ in 0..(1 + rng.next_range(3)) {
        let mut c = EvenExpr::int(rng.next_range(7) as i64 - 3);
        for _ in 0..rng.next_range(3) {
            let s = syms[rng.next_range(syms.len() as u64) as usize];
            let e = [-2i16, 2, 4, 1][rng.next_range(4) as usize];
            c = c.mul(&EvenExpr::sym_pow(s, e));
        }
        for xv in XVARS.iter().take(m) {
            if rng.next_range(3) == 0 {
                c = c.mul(&EvenExpr::sym(*xv));
            }
        }
        let mut g = Grassmann::scalar(c);
        if rng.next_range(3) == 0 {
            g = Grassmann::gen(odds[rng.next_range(odds.len() as u64) as usize]).mul(&g);
        }
        for &p in PSI.iter().take(m) {
            if rng.next_range(3) == 0 {
                g = g.mul(&Grassmann::gen(p));
            }
        }
        acc = acc.add(&g);
    }
    acc
}
