//! Acceptance suite: one test per criterion, one pass/fail line each.
//!
//! Run with `cargo test -p defalg-cli --test acceptance -- --nocapture`.

use deformed_algebra::closure::fit_closure_coefficients;
use deformed_algebra::deformation::{solve_closure_ode, DeformationSpec};
use deformed_algebra::expansion::{
    build_expansion, expected_hermiticity, verify_expansion_relations, Epsilon,
};
use deformed_algebra::grid::{build_grid, build_theta_full_circle, BoundaryCondition};
use deformed_algebra::half::HalfInt;
use deformed_algebra::iso::{default_test_states, verify_iso_relations};
use deformed_algebra::minimal_length::{dirichlet_min_uncertainty, minimal_length_quadrature};
use deformed_algebra::oscillator::{
    build_deformed_triple, contraction_bound, contraction_deviations, oscillator_degeneracies,
    oscillator_lambda, oscillator_spectrum_matrix, MSubspace,
};
use deformed_algebra::spin::build_spin_rep;
use deformed_algebra::{C64, HermitianOperator};
use std::process::Command;

fn j(twice: i64) -> HalfInt {
    HalfInt::from_twice(twice).unwrap()
}

fn conclude(criterion: &str, failures: Vec<String>) {
    if failures.is_empty() {
        println!("[PASS] {criterion}");
    } else {
        println!("[FAIL] {criterion}");
        for f in &failures {
            println!("       - {f}");
        }
        panic!("{criterion}: {} check(s) failed", failures.len());
    }
}

#[test]
fn criterion_1_su2_algebra_and_casimir() {
    let mut failures = Vec::new();
    for twice in 1..=25 {
        let jj = j(twice);
        let rep = build_spin_rep(jj).unwrap();
        let tol = 1e-12 * rep.dim() as f64;
        let comm = rep.commutator_residual();
        if comm > tol {
            failures.push(format!("j = {jj}: commutator residual {comm:.3e} > {tol:.3e}"));
        }
        let cas_dev = rep
            .casimir()
            .sub(&HermitianOperator::identity(rep.dim()).scale(C64::new(jj.casimir(), 0.0)))
            .unwrap()
            .max_abs();
        if cas_dev > tol {
            failures.push(format!("j = {jj}: Casimir deviation {cas_dev:.3e} > {tol:.3e}"));
        }
    }
    conclude(
        "criterion 1: su(2) commutators and Casimir <= 1e-12*dim for j in 1/2..25/2",
        failures,
    );
}

#[test]
fn criterion_2_nonlinear_relation_equivalence() {
    let mut failures = Vec::new();
    for twice in [1i64, 2, 7, 20] {
        let jj = j(twice);
        for ratio in [1.0, 2.0] {
            let rep = build_spin_rep(jj).unwrap();
            let lambda2 = (ratio * ratio * jj.casimir()).powf(-0.25);
            let lambda1 = ratio * lambda2;
            let t = build_deformed_triple(rep, lambda1, lambda2).unwrap();
            let tol = 1e-10 * t.dim() as f64;
            for include_m_zero in [true, false] {
                let r = t.verify_nonlinear_relation(include_m_zero).unwrap();
                if r > tol {
                    failures.push(format!(
                        "j = {jj}, ratio {ratio}, m0 {include_m_zero}: residual {r:.3e} > {tol:.3e}"
                    ));
                }
            }
            if jj.value() >= 1.0 {
                let full = t.nonlinear_residual(MSubspace::Full).unwrap();
                if full <= 1e-3 {
                    failures.push(format!(
                        "j = {jj}, ratio {ratio}: full-space residual {full:.3e} not > 1e-3"
                    ));
                }
            }
        }
    }
    conclude(
        "criterion 2: projected nonlinear relation <= 1e-10*dim, unprojected > 1e-3",
        failures,
    );
}

#[test]
fn criterion_3_oscillator_spectrum() {
    let mut failures = Vec::new();
    for twice in [1i64, 2, 6, 20, 100] {
        let jj = j(twice);
        let rep = build_spin_rep(jj).unwrap();
        let lam = oscillator_lambda(jj);
        let t = build_deformed_triple(rep, lam, lam).unwrap();
        let report = oscillator_spectrum_matrix(&t).unwrap();
        if report.max_dev > 1e-10 {
            failures.push(format!("j = {jj}: max_dev {:.3e} > 1e-10", report.max_dev));
        }
        let got: Vec<usize> = report
            .computed_degeneracies(1e-9)
            .iter()
            .map(|&(_, c)| c)
            .collect();
        let want = oscillator_degeneracies(jj);
        if got != want {
            failures.push(format!("j = {jj}: degeneracies {got:?} != {want:?}"));
        }
    }
    conclude(
        "criterion 3: matrix vs analytic oscillator spectra <= 1e-10, degeneracy pattern exact",
        failures,
    );
}

#[test]
fn criterion_4_contraction_limit() {
    let mut failures = Vec::new();
    let j100 = j(200);
    let j1000 = j(2000);
    let d100 = contraction_deviations(j100, 3);
    let d1000 = contraction_deviations(j1000, 3);
    for n in 0..=3usize {
        for (jj, dev) in [(j100, d100[n]), (j1000, d1000[n])] {
            let bound = contraction_bound(jj, n);
            if dev > bound {
                failures.push(format!(
                    "j = {jj}, n = {n}: |E_n - (n+1/2)| = {dev:.3e} > bound {bound:.3e}"
                ));
            }
        }
        if d1000[n] >= d100[n] {
            failures.push(format!(
                "n = {n}: deviation not decreasing ({:.3e} at j=1000 vs {:.3e} at j=100)",
                d1000[n], d100[n]
            ));
        }
    }
    conclude(
        "criterion 4: |E_n-(n+1/2)| <= (2n^2+2n+1)/(2j) at j in {100,1000}, decreasing in j",
        failures,
    );
}

#[test]
fn criterion_5_discrete_position_spectra() {
    let mut failures = Vec::new();
    for lambda in [0.1, 0.25, 1.0, 2.0] {
        let spec = DeformationSpec::trig(lambda).unwrap();
        for n in [32usize, 64, 128] {
            for bc in [BoundaryCondition::Periodic, BoundaryCondition::Antiperiodic] {
                let g = build_grid(&spec, n, None, bc).unwrap();
                let report = deformed_algebra::grid::position_spectrum(&g).unwrap();
                if report.max_dev > 1e-10 {
                    failures.push(format!(
                        "lambda {lambda}, N {n}, {bc:?}: max_dev {:.3e} > 1e-10",
                        report.max_dev
                    ));
                }
                let overlap: f64 = report.context["min_overlap"].parse().unwrap();
                if overlap < 1.0 - 1e-10 {
                    failures.push(format!(
                        "lambda {lambda}, N {n}, {bc:?}: min overlap {overlap}"
                    ));
                }
                // the reference ladder really is 2nλ / (2n+1)λ
                for &l in &report.reference {
                    let steps = l / lambda;
                    let parity_ok = match bc {
                        BoundaryCondition::Periodic => {
                            (steps / 2.0 - (steps / 2.0).round()).abs() < 1e-9
                        }
                        _ => ((steps - 1.0) / 2.0 - ((steps - 1.0) / 2.0).round()).abs() < 1e-9,
                    };
                    if !parity_ok {
                        failures.push(format!(
                            "lambda {lambda}, N {n}, {bc:?}: level {l} off the ladder"
                        ));
                    }
                }
            }
        }
    }
    conclude(
        "criterion 5: position spectra 2n*lambda / (2n+1)*lambda to 1e-10, overlaps >= 1-1e-10",
        failures,
    );
}

#[test]
fn criterion_6_minimal_length_dichotomy() {
    let mut failures = Vec::new();
    for lambda in [0.1, 0.25, 1.0, 2.0] {
        let spec = DeformationSpec::trig(lambda).unwrap();
        let l0 = minimal_length_quadrature(&spec).unwrap();
        if (l0 - lambda).abs() > 1e-10 {
            failures.push(format!("trig lambda {lambda}: l0 = {l0}"));
        }
    }
    let hyper = DeformationSpec::hyper(1.0).unwrap();
    let l0 = minimal_length_quadrature(&hyper).unwrap();
    if l0 != 0.0 {
        failures.push(format!("hyper with a = inf: l0 = {l0}, want exactly 0"));
    }

    let spec = DeformationSpec::trig(0.25).unwrap();
    let at = |n: usize| {
        let r = dirichlet_min_uncertainty(&spec, n).unwrap();
        (r.min_uncertainty - 0.25).abs()
    };
    let (e100, e200, e400) = (at(100), at(200), at(400));
    if e400 > 1e-3 {
        failures.push(format!("Dirichlet bound at N = 400 off by {e400:.3e} > 1e-3"));
    }
    for (label, ratio) in [("100->200", e200 / e100), ("200->400", e400 / e200)] {
        if !(0.2..=0.3).contains(&ratio) {
            failures.push(format!("convergence ratio {label} = {ratio:.3} outside [0.2, 0.3]"));
        }
    }
    conclude(
        "criterion 6: l0 = lambda (trig) / 0 (hyper), Dirichlet bound -> lambda at O(N^-2)",
        failures,
    );
}

#[test]
fn criterion_7_closure_theorem() {
    let mut failures = Vec::new();
    // even family members: alpha, gamma vanish and the residual is tiny
    let members = [
        DeformationSpec::trig(0.25).unwrap(),
        DeformationSpec::trig(2.0).unwrap(),
        DeformationSpec::hyper(0.3).unwrap(),
        DeformationSpec::hyper(1.7).unwrap(),
        DeformationSpec::flat(),
    ];
    for spec in &members {
        let fit = fit_closure_coefficients(spec, 201).unwrap();
        if fit.alpha.abs() > 1e-8 || fit.gamma.abs() > 1e-8 {
            failures.push(format!(
                "{:?}: alpha {:.3e}, gamma {:.3e}",
                spec.family(),
                fit.alpha,
                fit.gamma
            ));
        }
        if fit.residual > 1e-10 {
            failures.push(format!(
                "{:?}: family residual {:.3e} > 1e-10",
                spec.family(),
                fit.residual
            ));
        }
    }
    // quadratic GUP lies outside the family
    let h = 0.025;
    let samples: Vec<(f64, f64)> = (0..161)
        .map(|i| {
            let p = -2.0 + h * i as f64;
            (p, 1.0 + 0.3 * p * p)
        })
        .collect();
    let gup = DeformationSpec::Tabulated { samples };
    let fit = fit_closure_coefficients(&gup, 50).unwrap();
    if fit.residual <= 1e-3 {
        failures.push(format!(
            "quadratic GUP residual {:.3e} not > 1e-3",
            fit.residual
        ));
    }
    if fit.alpha.abs() > 1e-8 || fit.gamma.abs() > 1e-8 {
        failures.push("quadratic GUP: evenness coefficients leaked".into());
    }
    // ODE round trip
    for beta in [-0.5, -0.1, 0.0, 0.3, 2.0] {
        let spec = solve_closure_ode(beta, 1.0).unwrap();
        let fit = fit_closure_coefficients(&spec, 101).unwrap();
        if (fit.beta - beta).abs() > 1e-8 {
            failures.push(format!("ODE round trip beta {beta}: fitted {}", fit.beta));
        }
    }
    conclude(
        "criterion 7: closure fit (alpha,gamma) <= 1e-8, family residual <= 1e-10, GUP > 1e-3, ODE round trip",
        failures,
    );
}

#[test]
fn criterion_8_iso_and_expansion_relations() {
    let mut failures = Vec::new();
    let theta = build_theta_full_circle(&DeformationSpec::trig(1.0).unwrap(), 256).unwrap();
    let xi = build_grid(
        &DeformationSpec::hyper(0.25).unwrap(),
        256,
        Some(10.0),
        BoundaryCondition::Periodic,
    )
    .unwrap();

    for (label, grid) in [("theta", &theta), ("xi", &xi)] {
        let states = default_test_states(grid);
        let iso = verify_iso_relations(grid, &states).unwrap();
        if !iso.pass {
            failures.push(format!(
                "{label}: iso relation residual {:.3e} > {:.1e}",
                iso.max_residual, iso.tolerance
            ));
        }
        for eps in [Epsilon::Plus, Epsilon::Minus] {
            let e = build_expansion(grid, eps).unwrap();
            let rel = verify_expansion_relations(&e, grid, &states).unwrap();
            if !rel.pass {
                failures.push(format!(
                    "{label}, eps {eps:?}: expansion residual {:.3e} > {:.1e}",
                    rel.max_residual, rel.tolerance
                ));
            }
            // hermiticity flags: all four beta/epsilon cases
            let got: Vec<_> = e.hermiticity.iter().map(|f| f.symmetry).collect();
            let want = expected_hermiticity(eps);
            if got.as_slice() != want.as_slice() {
                failures.push(format!("{label}, eps {eps:?}: flags {got:?} != {want:?}"));
            }
            // iso Casimir is the scalar 1/lambda^2
            if e.iso_casimir_defect > 1e-10 * e.iso_casimir {
                failures.push(format!(
                    "{label}, eps {eps:?}: Casimir defect {:.3e}",
                    e.iso_casimir_defect
                ));
            }
        }
    }
    conclude(
        "criterion 8: iso + expansion relations <= 1e-8, hermiticity table exact, Casimir 1/lambda^2 to 1e-10",
        failures,
    );
}

fn defalg() -> Command {
    Command::new(env!("CARGO_BIN_EXE_defalg"))
}

#[test]
fn criterion_9_cli_determinism_and_exit_codes() {
    let mut failures = Vec::new();

    // byte-identical repeated runs
    for args in [
        vec!["spectrum-oscillator", "--j", "1"],
        vec!["contraction-study", "--j-list", "10,100", "--n-max", "2"],
        vec!["minimal-length", "--family", "trig", "--lambda", "0.25", "--format", "csv"],
    ] {
        let a = defalg().args(&args).output().unwrap();
        let b = defalg().args(&args).output().unwrap();
        if a.stdout != b.stdout {
            failures.push(format!("{args:?}: repeated runs differ"));
        }
        if !a.status.success() {
            failures.push(format!("{args:?}: expected exit 0, got {:?}", a.status.code()));
        }
    }

    // injected tolerance failure: exit 2, report still emitted and marked
    let out = defalg()
        .args(["verify-algebra", "--j", "10", "--tol-scale", "1e-9"])
        .output()
        .unwrap();
    if out.status.code() != Some(2) {
        failures.push(format!(
            "tolerance failure exited {:?}, want 2",
            out.status.code()
        ));
    }
    let text = String::from_utf8_lossy(&out.stdout);
    if !text.contains("\"pass\": false") {
        failures.push("failing report does not mark failed entries".into());
    }

    // usage errors are exit 1, never 2
    for bad in [
        vec!["spectrum-oscillator", "--j", "0.3"],
        vec!["spectrum-oscillator", "--unknown-flag"],
        vec!["minimal-length", "--family", "nosuch"],
    ] {
        let out = defalg().args(&bad).output().unwrap();
        if out.status.code() != Some(1) {
            failures.push(format!("{bad:?} exited {:?}, want 1", out.status.code()));
        }
    }

    conclude(
        "criterion 9: CLI determinism and the 0/1/2 exit-code contract",
        failures,
    );
}
