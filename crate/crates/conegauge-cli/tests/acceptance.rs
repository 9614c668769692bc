//! Acceptance suite. Each test exercises one release criterion end to end
//! at its stated tolerance and prints one pass line; run with
//! `cargo test -p conegauge-cli --test acceptance -- --nocapture` to see
//! them.

use std::fs;
use std::process::Command;
use std::time::Instant;

use conegauge::sampling::{self, rng_from_seed};
use conegauge::tolerances::BISECTION_TOL;
use conegauge::{
    audit_retraction, check_axioms, fixture_suite, gauge_by_bisection, verify_equivalence, Cone,
    Fixture, FunctionalHandle, Vector,
};

const SAMPLES: usize = 10_000;
const SEED: u64 = 42;

fn fixtures() -> Vec<Fixture> {
    fixture_suite().expect("fixture suite builds")
}

/// Stencil for a fixture: origin, axis points, apex directions, cone rows.
fn fixture_stencil(f: &Fixture) -> Vec<Vector> {
    let mut extras = vec![f.apex.clone(), f.apex.scale(-1.0)];
    extras.extend(f.cone_h.normals().iter().cloned());
    extras.extend(f.cone_v.generators().iter().cloned());
    sampling::stencil(f.dim(), &extras)
}

#[test]
fn criterion_1_triple_gauge_agreement() {
    let started = Instant::now();
    let mut points_checked = 0usize;
    for f in fixtures() {
        let gauge = f.gauge_h().expect("halfspace gauge builds");
        let cone = Cone::Halfspace(f.cone_h.clone());
        let mut rng = rng_from_seed(SEED);
        for _ in 0..SAMPLES {
            let x = sampling::sample_point(&mut rng, f.dim(), 10.0);
            let closed = gauge.eval(&x).unwrap();
            let lp = gauge.eval_oracle(&x).unwrap();
            let bisect = gauge_by_bisection(&cone, &f.apex, &x, BISECTION_TOL).unwrap();
            assert!(
                (closed - lp).abs() <= 1e-7,
                "{}: closed {closed} vs LP {lp} at {x}",
                f.name
            );
            assert!(
                (closed - lp).abs() <= 1e-8 * (1.0 + closed.abs()),
                "{}: closed {closed} vs LP {lp} beyond relative tolerance at {x}",
                f.name
            );
            assert!(
                (closed - bisect).abs() <= 1e-7,
                "{}: closed {closed} vs bisection {bisect} at {x}",
                f.name
            );
            assert!(
                (lp - bisect).abs() <= 1e-7,
                "{}: LP {lp} vs bisection {bisect} at {x}",
                f.name
            );
            points_checked += 1;
        }
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs() < 60,
        "triple agreement took {elapsed:?}, budget is 60 s"
    );
    println!(
        "criterion 1 PASS: closed-form, LP and bisection gauges agree within 1e-7 \
         on {points_checked} samples across 6 fixtures in {elapsed:?}"
    );
}

#[test]
fn criterion_2_constructive_direction() {
    for f in fixtures() {
        for gauge in [
            f.gauge_h().expect("halfspace gauge builds"),
            f.gauge_v().expect("generator gauge builds"),
        ] {
            let p = gauge.functional();
            let report = verify_equivalence(&p, gauge.apex(), SAMPLES, SEED).unwrap();
            assert!(
                report.all_pass(),
                "{} ({}): {report:?}",
                f.name,
                p.name()
            );
            assert!(report.equivalence_consistent, "{}: {report:?}", f.name);
            for (label, outcome) in [
                ("i", &report.condition_i),
                ("ii", &report.condition_ii),
                ("iii forward", &report.condition_iii_fwd),
                ("iii backward", &report.condition_iii_bwd),
            ] {
                assert!(
                    outcome.max_violation <= 1e-8,
                    "{} ({}): condition {label} violation {}",
                    f.name,
                    p.name(),
                    outcome.max_violation
                );
            }
        }
    }
    println!(
        "criterion 2 PASS: all 12 fixture gauges satisfy conditions (i)-(iii) \
         within 1e-8 on {SAMPLES} samples plus the stencil"
    );
}

#[test]
fn criterion_3_negative_control() {
    let mut cases = 0usize;
    for dim in [2usize, 3] {
        let p = FunctionalHandle::euclidean(dim);
        let ones = Vector::ones(dim);
        let apexes = [
            Vector::basis(dim, 0),
            ones.scale(1.0 / (dim as f64).sqrt()),
        ];
        for apex in apexes {
            let report = verify_equivalence(&p, &apex, SAMPLES, SEED).unwrap();
            assert!(report.all_fail(), "euclidean {dim}d at {apex}: {report:?}");
            assert!(report.equivalence_consistent);
            for (label, outcome) in [
                ("i", &report.condition_i),
                ("ii", &report.condition_ii),
                ("iii forward", &report.condition_iii_fwd),
            ] {
                assert!(
                    outcome.max_violation >= 0.1,
                    "euclidean {dim}d condition {label}: violation {} below 0.1",
                    outcome.max_violation
                );
                assert!(
                    outcome.witness.is_some(),
                    "euclidean {dim}d condition {label}: no witness recorded"
                );
            }
            cases += 1;
        }
    }
    println!(
        "criterion 3 PASS: the Euclidean norm fails conditions (i)-(iii) with \
         witnesses of violation >= 0.1 in all {cases} apex/dimension cases"
    );
}

#[test]
fn criterion_4_retraction_audit() {
    for f in fixtures() {
        let pair = f.pair_h().expect("pair builds");
        let report = audit_retraction(&pair, SAMPLES, SEED).unwrap();
        assert!(report.all_pass(), "{}: {report:?}", f.name);
        assert!(
            report.boundary_note.is_none(),
            "{}: boundary law unexpectedly skipped",
            f.name
        );
        for check in report.checks() {
            assert!(
                check.max_violation <= 1e-8,
                "{}: {} violation {}",
                f.name,
                check.name,
                check.max_violation
            );
        }
    }
    println!(
        "criterion 4 PASS: all ten retraction laws hold within 1e-8 over \
         {SAMPLES} samples for every fixture pair, boundary law included"
    );
}

#[test]
fn criterion_5_known_closed_forms() {
    let mut points = 0usize;
    for f in fixtures() {
        let Some(closed_form) = f.closed_form else {
            continue;
        };
        if !f.name.starts_with("orthant") && f.name != "wedge-2d" && f.name != "halfline-1d" {
            continue;
        }
        let gauge = f.gauge_h().unwrap();
        let cone = Cone::Halfspace(f.cone_h.clone());
        for x in fixture_stencil(&f) {
            let analytic = (closed_form.eval)(&x);
            let computed = gauge.eval(&x).unwrap();
            assert!(
                (computed - analytic).abs() <= 1e-12,
                "{}: gauge {computed} vs {} = {analytic} at {x}",
                f.name,
                closed_form.description
            );
            let bisect = gauge_by_bisection(&cone, &f.apex, &x, BISECTION_TOL).unwrap();
            assert!(
                (bisect - analytic).abs() <= 1e-8,
                "{}: bisection {bisect} vs {} = {analytic} at {x}",
                f.name,
                closed_form.description
            );
            points += 1;
        }
    }
    println!(
        "criterion 5 PASS: orthant and wedge gauges match their closed forms \
         within 1e-12 on {points} stencil points, confirmed by bisection"
    );
}

#[test]
fn criterion_6_axiom_suites() {
    for f in fixtures() {
        for gauge in [f.gauge_h().unwrap(), f.gauge_v().unwrap()] {
            let p = gauge.functional();
            let report = check_axioms(&p, SAMPLES, SEED).unwrap();
            assert!(report.all_pass(), "{}: {report:?}", p.name());
            let ps = p.symmetrize();
            let report = check_axioms(&ps, SAMPLES, SEED).unwrap();
            assert!(report.all_pass(), "{} symmetrized: {report:?}", p.name());

            // p <= p^s pointwise, and p^s is exactly symmetric.
            let mut rng = rng_from_seed(SEED);
            for _ in 0..500 {
                let x = sampling::sample_point(&mut rng, f.dim(), 10.0);
                let px = p.eval(&x).unwrap();
                let psx = ps.eval(&x).unwrap();
                assert!(px <= psx, "{}: p(x) > p^s(x) at {x}", f.name);
                assert_eq!(
                    psx.to_bits(),
                    ps.eval(&x.scale(-1.0)).unwrap().to_bits(),
                    "{}: p^s not exactly symmetric at {x}",
                    f.name
                );
            }
        }
    }

    // The linear functional x -> x1 has kernel {x1 = 0}: definiteness must
    // fail with a witness off the origin.
    let linear = FunctionalHandle::linear(Vector::from_slice(&[1.0, 0.0]).unwrap());
    let report = check_axioms(&linear, SAMPLES, SEED).unwrap();
    let definiteness = report.check("definiteness").unwrap();
    assert!(!definiteness.pass);
    assert!(definiteness
        .witnesses
        .iter()
        .any(|w| w[0].abs() <= 1e-9 && w.norm2() > 1e-3));
    assert!(report.check("positive_homogeneity").unwrap().pass);
    assert!(report.check("subadditivity").unwrap().pass);

    println!(
        "criterion 6 PASS: axiom suites pass for every fixture gauge (both \
         representations) and its symmetrization; p <= p^s holds pointwise; \
         the linear functional's definiteness failure is detected with a witness"
    );
}

#[test]
fn criterion_7_byte_identical_reruns() {
    let dir = tempfile::tempdir().unwrap();
    let cone_path = dir.path().join("wedge.json");
    fs::write(
        &cone_path,
        r#"{"dim": 2, "rep": "H", "rows": [[-1.0, -1.0], [1.0, -1.0]]}"#,
    )
    .unwrap();
    let cone = cone_path.to_str().unwrap();

    let commands: Vec<Vec<&str>> = vec![
        vec![
            "audit", "--cone", cone, "--apex", "0,1", "--samples", "2000", "--seed", "42",
        ],
        vec![
            "proper-check", "--cone", cone, "--apex", "0,1", "--samples", "2000", "--seed", "42",
        ],
        vec![
            "sphere-dump", "--cone", cone, "--apex", "0,1", "--count", "500", "--seed", "42",
        ],
    ];
    for args in &commands {
        let first = Command::new(env!("CARGO_BIN_EXE_conegauge"))
            .args(args)
            .output()
            .expect("binary runs");
        let second = Command::new(env!("CARGO_BIN_EXE_conegauge"))
            .args(args)
            .output()
            .expect("binary runs");
        assert_eq!(first.status.code(), Some(0), "command {args:?} failed");
        assert_eq!(
            first.stdout, second.stdout,
            "command {args:?} not byte-identical across reruns"
        );
    }
    println!(
        "criterion 7 PASS: audit, proper-check and sphere-dump are \
         byte-identical across seeded reruns"
    );
}
