//! Acceptance gate: exact reproduction of two closed-form families, then
//! randomized theorem suites cross-checked against exhaustive oracles. Each
//! test prints one `criterion N (…): pass|FAIL` line (visible with
//! `--nocapture`) and fails loudly with every violated expectation.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, OnceLock};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use vnum_core::{
    analyze, ass_quotient, boxed_ass_subquotient, evaluate_family, field_witness_oracle,
    module_invariants, parse_ideal, parse_input, parse_prime, random_instance, render_input,
    verify, EvalOptions, FamilySpec, FitKind, InstanceParams, Monomial, MonomialIdeal,
    MonomialPrime, PowerPart, Ring, SubquotientComponent, SubquotientModule, Val, Verdict,
    VerdictStatus, VerifyReport,
};

const TORSION: &str = "ring X Y Z\nideal I = (X*Y, Z)\nmodule M += [0] / (X^3, Y, X*Z)\n";
const SUBQUOTIENT: &str = "\
ring X Y Z
ideal I = (X, Y^2, Z^3)
module M += [0] / (X^3, X*Y^4)
submodule N += (X^3, X*Y)
";

const SUITE_SEEDS: u64 = 120;

struct Case {
    seed: u64,
    spec: FamilySpec,
    report: VerifyReport,
}

/// The shared randomized suite: 120 seeded instances verified at the
/// horizon/window the theorem suites prescribe.
fn suite() -> &'static [Case] {
    static SUITE: OnceLock<Vec<Case>> = OnceLock::new();
    SUITE.get_or_init(|| {
        let options = EvalOptions {
            n_max: 12,
            window: 4,
            ..EvalOptions::default()
        };
        (0..SUITE_SEEDS)
            .into_par_iter()
            .map(|seed| {
                let spec = random_instance(seed, &InstanceParams::default()).unwrap();
                let report = verify(&spec, &options).unwrap();
                Case { seed, spec, report }
            })
            .collect()
    })
}

fn verdict<'a>(case: &'a Case, id: &str) -> &'a Verdict {
    case.report
        .verdicts
        .iter()
        .find(|v| v.id == id)
        .expect("known verdict id")
}

fn check(errors: &mut Vec<String>, ok: bool, msg: impl FnOnce() -> String) {
    if !ok {
        errors.push(msg());
    }
}

/// Prints the single pass/FAIL line and panics with the collected details.
fn criterion(name: &str, errors: &[String]) {
    if errors.is_empty() {
        println!("{name}: pass");
    } else {
        println!("{name}: FAIL");
        for e in errors {
            println!("  {e}");
        }
        panic!("{name}: {} violation(s)", errors.len());
    }
}

fn options(n_max: u32, window: u32) -> EvalOptions {
    EvalOptions {
        n_max,
        window,
        ..EvalOptions::default()
    }
}

fn prime(spec: &FamilySpec, text: &str) -> MonomialPrime {
    parse_prime(text, spec.ring()).unwrap()
}

fn local(
    errors: &mut Vec<String>,
    entry: &BTreeMap<MonomialPrime, vnum_core::LocalWitness>,
    p: &MonomialPrime,
    expected: i64,
    what: String,
) {
    match entry.get(p) {
        Some(w) if w.value == expected => {}
        Some(w) => errors.push(format!(
            "{what}: v_{} = {} (expected {expected})",
            p.render(),
            w.value
        )),
        None => errors.push(format!("{what}: {} is not associated", p.render())),
    }
}

#[test]
fn criterion_1_torsion_family_table() {
    let start = Instant::now();
    let mut errors = Vec::new();
    let spec = parse_input(TORSION).unwrap();
    let eval = evaluate_family(&spec, &options(10, 4)).unwrap();
    let m = prime(&spec, "(X,Y,Z)");

    let colon = &eval.records[0].colon.vnum;
    check(&mut errors, colon.global == Val::Finite(2), || {
        format!("v(0:I) = {:?} (expected 2)", colon.global)
    });
    local(&mut errors, &colon.locals, &m, 2, "(0:I)".into());

    for n in 1..=10usize {
        let quotient = &eval.records[n].quotient.vnum;
        check(&mut errors, quotient.primes() == vec![m.clone()], || {
            format!(
                "n = {n}: Ass(M/I^nM) = {:?}",
                quotient
                    .primes()
                    .iter()
                    .map(|p| p.render())
                    .collect::<Vec<_>>()
            )
        });
        let expected = if n == 2 { 1 } else { 2 };
        check(
            &mut errors,
            quotient.global == Val::Finite(expected),
            || {
                format!(
                    "n = {n}: v(M/I^nM) = {:?} (expected {expected})",
                    quotient.global
                )
            },
        );
        local(
            &mut errors,
            &quotient.locals,
            &m,
            expected,
            format!("n = {n}, M/I^nM"),
        );

        let layer = &eval.records[n].layer.as_ref().unwrap().vnum;
        let expected = if n == 1 { 2 } else { n as i64 - 1 };
        check(&mut errors, layer.global == Val::Finite(expected), || {
            format!(
                "n = {n}: v(layer) = {:?} (expected {expected})",
                layer.global
            )
        });
        local(
            &mut errors,
            &layer.locals,
            &m,
            expected,
            format!("n = {n}, layer"),
        );
    }
    check(
        &mut errors,
        start.elapsed() < Duration::from_secs(5),
        || format!("runtime {:?} exceeded the 5 s budget", start.elapsed()),
    );
    criterion(
        "criterion 1 (torsion family closed-form table, n = 1…10)",
        &errors,
    );
}

#[test]
fn criterion_2_subquotient_family_table() {
    let start = Instant::now();
    let mut errors = Vec::new();
    let spec = parse_input(SUBQUOTIENT).unwrap();
    let eval = evaluate_family(&spec, &options(10, 4)).unwrap();
    let p = prime(&spec, "(X)");
    let q = prime(&spec, "(X,Y)");
    let m = prime(&spec, "(X,Y,Z)");

    let base = &eval.records[0].base.vnum;
    check(
        &mut errors,
        base.primes() == vec![p.clone(), q.clone()],
        || {
            format!(
                "Ass(M/N) = {:?}",
                base.primes().iter().map(|p| p.render()).collect::<Vec<_>>()
            )
        },
    );

    for n in 3..=10usize {
        let quotient = &eval.records[n].quotient.vnum;
        check(
            &mut errors,
            quotient.primes() == vec![p.clone(), q.clone(), m.clone()],
            || {
                format!(
                    "n = {n}: Ass(M/I^nN) = {:?}",
                    quotient
                        .primes()
                        .iter()
                        .map(|p| p.render())
                        .collect::<Vec<_>>()
                )
            },
        );
        local(
            &mut errors,
            &quotient.locals,
            &p,
            4,
            format!("n = {n}, M/I^nN"),
        );
        local(
            &mut errors,
            &quotient.locals,
            &q,
            3 * n as i64 - 1,
            format!("n = {n}, M/I^nN"),
        );
        local(
            &mut errors,
            &quotient.locals,
            &m,
            3 * n as i64 - 2,
            format!("n = {n}, M/I^nN"),
        );
        check(&mut errors, quotient.global == Val::Finite(4), || {
            format!("n = {n}: v(M/I^nN) = {:?} (expected 4)", quotient.global)
        });

        let presented = spec.power_layer(n as u32, PowerPart::Quotient).unwrap();
        let expected = parse_ideal(
            &format!(
                "(X^3, X*Y^4, X*Y*Z^{}, X^2*Y*Z^{}, X*Y^3*Z^{}, X^2*Y^3*Z^{})",
                3 * n,
                3 * n - 3,
                3 * n - 3,
                3 * n - 6
            ),
            spec.ring(),
        )
        .unwrap();
        check(
            &mut errors,
            presented.components()[0].lower() == &expected,
            || {
                format!(
                    "n = {n}: presentation ideal {} (expected {})",
                    presented.components()[0].lower().render(),
                    expected.render()
                )
            },
        );
    }
    check(
        &mut errors,
        start.elapsed() < Duration::from_secs(30),
        || format!("runtime {:?} exceeded the 30 s budget", start.elapsed()),
    );
    criterion(
        "criterion 2 (subquotient family closed-form table, n = 3…10)",
        &errors,
    );
}

#[test]
fn criterion_3_torsion_union_suite() {
    let mut errors = Vec::new();
    let mut determinate = 0usize;
    for case in suite() {
        let v = verdict(case, "ass-torsion-union");
        match v.status {
            VerdictStatus::Fail => errors.push(format!("seed {}: {}", case.seed, v.details)),
            VerdictStatus::Pass => determinate += 1,
            _ => {}
        }
    }
    check(&mut errors, determinate >= 100, || {
        format!("only {determinate} determinate instances (need ≥ 100)")
    });
    criterion(
        &format!("criterion 3 (stable torsion-union identity, {SUITE_SEEDS} seeded instances)"),
        &errors,
    );
}

#[test]
fn criterion_4_off_vi_suite() {
    let mut errors = Vec::new();
    for case in suite() {
        let v = verdict(case, "ass-off-vi-constant");
        if v.status != VerdictStatus::Pass {
            errors.push(format!(
                "seed {}: {} — {}",
                case.seed,
                v.status.label(),
                v.details
            ));
        }
    }
    criterion(
        "criterion 4 (off-V(I) associated primes constant at every n)",
        &errors,
    );
}

#[test]
fn criterion_5_dichotomy_suite() {
    const BRANCHES: [&str; 4] = [
        "v-linear-branch",
        "v-constant-branch",
        "global-v-constant-branch",
        "global-v-linear-branch",
    ];
    let mut errors = Vec::new();
    let mut undetermined: Vec<(u64, &str)> = Vec::new();
    for case in suite() {
        for id in BRANCHES {
            let v = verdict(case, id);
            match v.status {
                VerdictStatus::Fail => {
                    errors.push(format!("seed {}: {id} — {}", case.seed, v.details))
                }
                VerdictStatus::Undetermined => undetermined.push((case.seed, id)),
                _ => {}
            }
        }
    }
    // undetermined tails get a longer horizon before they are accepted
    let deep = EvalOptions {
        n_max: 20,
        window: 4,
        ..EvalOptions::default()
    };
    let seeds: BTreeSet<u64> = undetermined.iter().map(|(s, _)| *s).collect();
    let reruns: BTreeMap<u64, VerifyReport> = seeds
        .into_par_iter()
        .map(|seed| {
            let spec = random_instance(seed, &InstanceParams::default()).unwrap();
            (seed, verify(&spec, &deep).unwrap())
        })
        .collect();
    for (seed, id) in &undetermined {
        let v = reruns[seed]
            .verdicts
            .iter()
            .find(|v| v.id == *id)
            .expect("known verdict id");
        match v.status {
            VerdictStatus::Fail => {
                errors.push(format!("seed {seed}: {id} at n_max = 20 — {}", v.details))
            }
            VerdictStatus::Undetermined => {
                println!("criterion 5 note: seed {seed} {id} still undetermined at n_max = 20")
            }
            _ => {}
        }
    }
    criterion(
        "criterion 5 (local and global v dichotomy branches)",
        &errors,
    );
}

/// A proper random monomial ideal in 2–4 standard-graded variables.
fn random_proper_ideal(rng: &mut ChaCha8Rng) -> MonomialIdeal {
    const NAMES: [&str; 4] = ["X", "Y", "Z", "W"];
    let nvars = rng.random_range(2..=NAMES.len());
    let ring = Arc::new(Ring::standard(&NAMES[..nvars]).unwrap());
    let gens = (0..rng.random_range(1..=4))
        .map(|_| {
            let mut exps: Vec<u64> = (0..nvars).map(|_| rng.random_range(0..=3)).collect();
            if exps.iter().all(|&e| e == 0) {
                exps[rng.random_range(0..nvars)] = 1;
            }
            Monomial::new(exps)
        })
        .collect();
    MonomialIdeal::new(ring, gens).unwrap()
}

#[test]
fn criterion_6_decomposition_oracle() {
    let mut errors = Vec::new();
    for seed in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ideal = random_proper_ideal(&mut rng);
        assert!(ideal.is_proper());
        let via_decomposition: BTreeSet<MonomialPrime> =
            ass_quotient(&ideal).unwrap().into_iter().collect();
        let unit = MonomialIdeal::unit(ideal.ring().clone());
        let via_box: BTreeSet<MonomialPrime> = boxed_ass_subquotient(&unit, &ideal)
            .unwrap()
            .into_iter()
            .collect();
        check(&mut errors, via_decomposition == via_box, || {
            format!(
                "seed {seed}: I = {} — decomposition gives {:?}, box search gives {:?}",
                ideal.render(),
                via_decomposition
                    .iter()
                    .map(|p| p.render())
                    .collect::<Vec<_>>(),
                via_box.iter().map(|p| p.render()).collect::<Vec<_>>()
            )
        });
    }
    criterion(
        "criterion 6 (decomposition vs boxed witness search, 200 ideals)",
        &errors,
    );
}

/// A tiny two-variable subquotient whose lower ideal is a proper multiple of
/// the upper one, so the module is nonzero and box/oracle searches stay small.
fn tiny_module(rng: &mut ChaCha8Rng, ring: &Arc<Ring>) -> SubquotientModule {
    let small_ideal = |rng: &mut ChaCha8Rng, max_gens: usize| {
        let gens = (0..rng.random_range(1..=max_gens))
            .map(|_| {
                let mut exps: Vec<u64> = (0..2).map(|_| rng.random_range(0..=2)).collect();
                if exps.iter().all(|&e| e == 0) {
                    exps[rng.random_range(0..2)] = 1;
                }
                Monomial::new(exps)
            })
            .collect();
        MonomialIdeal::new(ring.clone(), gens).unwrap()
    };
    let components = (0..rng.random_range(1..=2))
        .map(|_| {
            let upper = if rng.random_bool(0.5) {
                MonomialIdeal::unit(ring.clone())
            } else {
                small_ideal(rng, 3)
            };
            let lower = upper.product(&small_ideal(rng, 2));
            SubquotientComponent::new(0, upper, lower).unwrap()
        })
        .collect();
    SubquotientModule::new(ring.clone(), components).unwrap()
}

#[test]
fn criterion_7_field_oracle() {
    let mut errors = Vec::new();
    let ring = Arc::new(Ring::standard(&["X", "Y"]).unwrap());
    let mut compared = 0usize;
    for seed in 0..24u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let module = tiny_module(&mut rng, &ring);
        let inv = module_invariants(&module).unwrap();
        if inv.locals.is_empty() {
            continue;
        }
        compared += 1;
        for (p, w) in &inv.locals {
            match field_witness_oracle(&module, p, w.value, 20) {
                Ok(Some(d)) if d == w.value => {}
                other => errors.push(format!(
                    "seed {seed}: v_{} = {} but the oracle found {:?}",
                    p.render(),
                    w.value,
                    other
                )),
            }
        }
    }
    check(&mut errors, compared >= 20, || {
        format!("only {compared} nonzero instances (need ≥ 20)")
    });
    criterion(
        "criterion 7 (field-coefficient witness oracle, 2-variable instances)",
        &errors,
    );
}

#[test]
fn criterion_8_bounds_and_sharpness() {
    const BOUNDS: [&str; 3] = [
        "v-bound-by-colon",
        "v-monotone-off-vi",
        "v-slope-bound-off-vi",
    ];
    let mut errors = Vec::new();
    for case in suite() {
        for id in BOUNDS {
            let v = verdict(case, id);
            if v.status == VerdictStatus::Fail {
                errors.push(format!(
                    "seed {}: {id} — {} (instance: {})",
                    case.seed,
                    v.details,
                    render_input(&case.spec).replace('\n', " / ")
                ));
            }
        }
    }

    // the linear branch of the subquotient family attains its slope cap
    let spec = parse_input(SUBQUOTIENT).unwrap();
    let analysis = analyze(&spec, &options(10, 4)).unwrap();
    let q = prime(&spec, "(X,Y)");
    let fit = analysis
        .fits
        .iter()
        .find(|f| f.module == "M/I^nN" && f.prime.as_ref() == Some(&q))
        .expect("fitted series for q");
    check(
        &mut errors,
        fit.fit.kind
            == FitKind::Linear {
                slope: 3,
                intercept: -1,
            },
        || {
            format!(
                "v_q(M/I^nN) fits {:?} (expected slope 3, intercept -1)",
                fit.fit.kind
            )
        },
    );
    let slope_cap = spec
        .ideal()
        .gens()
        .iter()
        .filter(|g| !q.contains_monomial(g))
        .map(|g| spec.ring().degree(g))
        .min()
        .expect("a generator outside q");
    check(&mut errors, slope_cap == 3, || {
        format!("indeg of I outside q is {slope_cap} (expected 3)")
    });
    criterion(
        "criterion 8 (eventual bounds on every instance; slope cap attained)",
        &errors,
    );
}
