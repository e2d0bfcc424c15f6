//! defalg — command-line harness for the deformed-algebra laboratory.
//!
//! Every command is deterministic: identical invocations produce
//! byte-identical reports. Data goes to stdout (or --output), diagnostics
//! to stderr. Exit codes: 0 all checks pass, 1 usage or parameter error,
//! 2 a tolerance check failed (the report is still emitted with the
//! failing entries marked).

mod report;

use clap::{Args, Parser, Subcommand};
use deformed_algebra::closure::fit_closure_coefficients;
use deformed_algebra::deformation::{DeformationSpec, Family};
use deformed_algebra::expansion::{
    build_expansion, expected_hermiticity, verify_expansion_relations, Epsilon,
};
use deformed_algebra::grid::{build_grid, build_theta_full_circle, BoundaryCondition};
use deformed_algebra::half::HalfInt;
use deformed_algebra::iso::default_test_states;
use deformed_algebra::minimal_length::{dirichlet_min_uncertainty, minimal_length_quadrature};
use deformed_algebra::oscillator::{
    build_deformed_triple, contraction_bound, contraction_deviations, oscillator_degeneracies,
    oscillator_lambda, oscillator_levels, oscillator_spectrum_matrix, MSubspace,
};
use deformed_algebra::spin::build_spin_rep;
use report::{Op, Report};
use serde_json::{json, Map, Value};
use std::io::Write;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "defalg",
    version,
    about = "Deformed Heisenberg algebra laboratory: spectra, minimal lengths, algebra checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format for the report
    #[arg(long, global = true, value_parser = ["json", "csv"], default_value = "json")]
    format: String,

    /// Write the report to a file instead of stdout
    #[arg(long, global = true)]
    output: Option<std::path::PathBuf>,

    /// Multiply every tolerance threshold by this factor (diagnostic knob)
    #[arg(long, global = true, default_value_t = 1.0)]
    tol_scale: f64,

    /// JSON object supplying command parameters; explicit flags win
    #[arg(long, global = true)]
    params_json: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Deformed harmonic oscillator: matrix spectrum vs the closed form
    SpectrumOscillator(SpectrumOscillatorArgs),
    /// Position-operator spectrum on a momentum-space grid
    SpectrumPosition(SpectrumPositionArgs),
    /// Minimal length by quadrature, optionally with the Dirichlet bound
    MinimalLength(MinimalLengthArgs),
    /// Spin-representation and deformed-triple identity checks
    VerifyAlgebra(VerifyAlgebraArgs),
    /// Least-squares closure analysis of f f' over {1, p, f}
    ClosureFit(ClosureFitArgs),
    /// Plane-group generators and their expansion into simple algebras
    ExpansionCheck(ExpansionCheckArgs),
    /// Oscillator levels against n + 1/2 as j grows
    ContractionStudy(ContractionStudyArgs),
}

#[derive(Args, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct SpectrumOscillatorArgs {
    /// Spin label, e.g. 1, 1/2, 3.5
    #[arg(long)]
    j: Option<String>,
}

#[derive(Args, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct SpectrumPositionArgs {
    /// Deformation family: trig or flat
    #[arg(long)]
    family: Option<String>,
    /// Deformation scale λ (trig)
    #[arg(long)]
    lambda: Option<f64>,
    /// Grid size (even, at least 8)
    #[arg(long)]
    n: Option<usize>,
    /// Domain half-width (flat family)
    #[arg(long)]
    l: Option<f64>,
    /// Boundary condition: periodic or antiperiodic
    #[arg(long)]
    bc: Option<String>,
}

#[derive(Args, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct MinimalLengthArgs {
    /// Deformation family: trig, hyper, flat or tabulated
    #[arg(long)]
    family: Option<String>,
    /// Deformation scale λ (trig)
    #[arg(long)]
    lambda: Option<f64>,
    /// Deformation strength β (hyper)
    #[arg(long)]
    beta: Option<f64>,
    /// Momentum cutoff a for hyper/flat (default: infinite)
    #[arg(long)]
    a: Option<f64>,
    /// Two-column (p, f) sample file for the tabulated family
    #[arg(long)]
    input: Option<String>,
    /// Also run the Dirichlet variational bound with this many intervals
    #[arg(long)]
    variational_n: Option<usize>,
}

#[derive(Args, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct VerifyAlgebraArgs {
    /// Spin label
    #[arg(long)]
    j: Option<String>,
    /// Momentum scale λ₁; give both λ's or neither (default: symmetric from j)
    #[arg(long)]
    lambda1: Option<f64>,
    /// Position scale λ₂
    #[arg(long)]
    lambda2: Option<f64>,
    /// Include the m = 0 eigenspace in the projected relation (default true)
    #[arg(long)]
    include_m_zero: Option<bool>,
}

#[derive(Args, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct ClosureFitArgs {
    /// Deformation family: trig, hyper, flat or tabulated
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Integration constant c > 0 (default 1)
    #[arg(long)]
    c: Option<f64>,
    /// Sample count (default 201)
    #[arg(long)]
    m: Option<usize>,
    /// Two-column (p, f) sample file for the tabulated family
    #[arg(long)]
    input: Option<String>,
}

#[derive(Args, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct ExpansionCheckArgs {
    /// trig (θ-grid, β < 0) or hyper (ξ-grid, β > 0)
    #[arg(long)]
    family: Option<String>,
    /// λ for trig; for hyper β = λ² (or give --beta)
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Grid size (default 256)
    #[arg(long)]
    n: Option<usize>,
    /// ξ-domain half-width (default 10)
    #[arg(long)]
    l: Option<f64>,
    /// Casimir rescaling sign: +1 or -1 (default +1)
    #[arg(long, allow_hyphen_values = true)]
    epsilon: Option<String>,
}

#[derive(Args, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct ContractionStudyArgs {
    /// Comma-separated spin labels, e.g. 10,100,1000
    #[arg(long)]
    j_list: Option<String>,
    /// Highest level index to track (default 2)
    #[arg(long)]
    n_max: Option<usize>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version requests are not usage errors
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    if !cli.tol_scale.is_finite() || cli.tol_scale <= 0.0 {
        return Err(format!(
            "--tol-scale must be positive, got {}",
            cli.tol_scale
        ));
    }
    let overlay = parse_params_json(cli.params_json.as_deref())?;
    let ts = cli.tol_scale;
    let report = match cli.command {
        Command::SpectrumOscillator(a) => spectrum_oscillator(merge(a, &overlay)?, ts)?,
        Command::SpectrumPosition(a) => spectrum_position(merge(a, &overlay)?, ts)?,
        Command::MinimalLength(a) => minimal_length(merge(a, &overlay)?, ts)?,
        Command::VerifyAlgebra(a) => verify_algebra(merge(a, &overlay)?, ts)?,
        Command::ClosureFit(a) => closure_fit(merge(a, &overlay)?, ts)?,
        Command::ExpansionCheck(a) => expansion_check(merge(a, &overlay)?, ts)?,
        Command::ContractionStudy(a) => contraction_study(merge(a, &overlay)?, ts)?,
    };

    let rendered = match cli.format.as_str() {
        "json" => report.to_json(),
        "csv" => report.to_csv(),
        other => return Err(format!("unknown format `{other}`")),
    };
    match &cli.output {
        Some(path) => {
            std::fs::write(path, rendered.as_bytes())
                .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        }
        None => {
            std::io::stdout()
                .write_all(rendered.as_bytes())
                .map_err(|e| format!("cannot write to stdout: {e}"))?;
        }
    }
    if report.pass() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!(
            "tolerance failure: {} of {} checks failed",
            report.assertions.iter().filter(|a| !a.pass).count(),
            report.assertions.len()
        );
        Ok(ExitCode::from(2))
    }
}

fn parse_params_json(raw: Option<&str>) -> Result<Map<String, Value>, String> {
    match raw {
        None => Ok(Map::new()),
        Some(text) => {
            let v: Value = serde_json::from_str(text)
                .map_err(|e| format!("--params-json is not valid JSON: {e}"))?;
            match v {
                Value::Object(map) => Ok(map),
                _ => Err("--params-json must be a JSON object".into()),
            }
        }
    }
}

/// Overlay --params-json onto the parsed flags: explicit flags win, JSON
/// fills the gaps, unknown keys are rejected.
fn merge<T: serde::Serialize + serde::de::DeserializeOwned>(
    args: T,
    overlay: &Map<String, Value>,
) -> Result<T, String> {
    if overlay.is_empty() {
        return Ok(args);
    }
    let mut v = serde_json::to_value(&args).map_err(|e| e.to_string())?;
    let map = v.as_object_mut().expect("args serialize to an object");
    for (key, value) in overlay {
        match map.get_mut(key) {
            None => return Err(format!("unknown parameter `{key}` in --params-json")),
            Some(slot) if slot.is_null() => *slot = value.clone(),
            Some(_) => {} // the explicit flag wins
        }
    }
    serde_json::from_value(v).map_err(|e| format!("invalid --params-json value: {e}"))
}

fn parse_j(raw: &Option<String>) -> Result<HalfInt, String> {
    let raw = raw.as_deref().ok_or("missing required parameter --j")?;
    raw.parse::<HalfInt>().map_err(|e| e.to_string())
}

fn family_spec(
    family: &Option<String>,
    lambda: Option<f64>,
    beta: Option<f64>,
    c: Option<f64>,
    a: Option<f64>,
    input: &Option<String>,
) -> Result<DeformationSpec, String> {
    let fam = family.as_deref().unwrap_or("trig");
    let c = c.unwrap_or(1.0);
    let spec = match fam {
        "trig" => {
            let lambda = lambda.ok_or("trig family needs --lambda")?;
            DeformationSpec::trig_with_c(lambda, c).map_err(|e| e.to_string())?
        }
        "hyper" => {
            let beta = match (beta, lambda) {
                (Some(b), _) => b,
                (None, Some(l)) => l * l,
                (None, None) => return Err("hyper family needs --beta (or --lambda)".into()),
            };
            let spec = DeformationSpec::hyper_with_c(beta, c).map_err(|e| e.to_string())?;
            match a {
                Some(a) => spec.with_bound(a).map_err(|e| e.to_string())?,
                None => spec,
            }
        }
        "flat" => {
            let spec = DeformationSpec::flat();
            match a {
                Some(a) => spec.with_bound(a).map_err(|e| e.to_string())?,
                None => spec,
            }
        }
        "tabulated" => {
            let path = input.as_deref().ok_or("tabulated family needs --input")?;
            DeformationSpec::from_table_path(std::path::Path::new(path))
                .map_err(|e| e.to_string())?
        }
        other => return Err(format!("unknown family `{other}`")),
    };
    Ok(spec)
}

fn spectrum_oscillator(args: SpectrumOscillatorArgs, ts: f64) -> Result<Report, String> {
    let j = parse_j(&args.j)?;
    let mut report = Report::new("spectrum-oscillator");
    report.param("j", j.to_string());

    let rep = build_spin_rep(j).map_err(|e| e.to_string())?;
    let lambda = oscillator_lambda(j);
    let triple = build_deformed_triple(rep, lambda, lambda).map_err(|e| e.to_string())?;
    let spectrum = oscillator_spectrum_matrix(&triple).map_err(|e| e.to_string())?;
    let analytic = oscillator_levels(j);

    let clusters = spectrum.computed_degeneracies(1e-9);
    let degeneracies: Vec<usize> = clusters.iter().map(|&(_, c)| c).collect();
    let expected = oscillator_degeneracies(j);
    let mismatches = if degeneracies == expected { 0.0 } else { 1.0 };

    report.assert_check(
        "matrix_vs_analytic_max_dev",
        spectrum.max_dev,
        Op::AtMost,
        1e-10 * ts,
    );
    report.assert_check("degeneracy_pattern_mismatch", mismatches, Op::AtMost, 0.0);
    for (i, (&c, &r)) in spectrum
        .computed
        .iter()
        .zip(&spectrum.reference)
        .enumerate()
    {
        report.csv_rows.push((i, c, r, (c - r).abs()));
    }
    report.results = json!({
        "lambda": lambda,
        "analytic_levels": analytic,
        "computed": spectrum.computed,
        "reference_multiset": spectrum.reference,
        "max_dev": spectrum.max_dev,
        "degeneracies": degeneracies,
        "expected_degeneracies": expected,
    });
    Ok(report)
}

fn spectrum_position(args: SpectrumPositionArgs, ts: f64) -> Result<Report, String> {
    let n = args.n.unwrap_or(64);
    let bc: BoundaryCondition = args
        .bc
        .as_deref()
        .unwrap_or("periodic")
        .parse()
        .map_err(|e: deformed_algebra::Error| e.to_string())?;
    let spec = family_spec(&args.family, args.lambda, None, None, None, &None)?;
    if spec.family() == Family::Hyper || spec.family() == Family::Tabulated {
        return Err("position spectra are defined for the trig and flat families".into());
    }
    let mut report = Report::new("spectrum-position");
    report.param("family", format!("{:?}", spec.family()).to_lowercase());
    if let Some(lambda) = args.lambda {
        report.param("lambda", lambda);
    }
    report.param("n", n);
    report.param("bc", args.bc.as_deref().unwrap_or("periodic"));
    if let Some(l) = args.l {
        report.param("l", l);
    }

    let grid = build_grid(&spec, n, args.l, bc).map_err(|e| e.to_string())?;
    let spectrum = deformed_algebra::grid::position_spectrum(&grid).map_err(|e| e.to_string())?;
    let min_overlap: f64 = spectrum.context["min_overlap"].parse().unwrap_or(0.0);

    report.assert_check("spectrum_max_dev", spectrum.max_dev, Op::AtMost, 1e-10 * ts);
    report.assert_check(
        "eigenvector_overlap_defect",
        1.0 - min_overlap,
        Op::AtMost,
        1e-10 * ts,
    );
    for (i, (&c, &r)) in spectrum
        .computed
        .iter()
        .zip(&spectrum.reference)
        .enumerate()
    {
        report.csv_rows.push((i, c, r, (c - r).abs()));
    }
    report.results = json!({
        "computed": spectrum.computed,
        "reference": spectrum.reference,
        "max_dev": spectrum.max_dev,
        "min_overlap": min_overlap,
        "context": spectrum.context,
    });
    Ok(report)
}

fn minimal_length(args: MinimalLengthArgs, ts: f64) -> Result<Report, String> {
    let spec = family_spec(&args.family, args.lambda, args.beta, None, args.a, &args.input)?;
    let mut report = Report::new("minimal-length");
    report.param("family", format!("{:?}", spec.family()).to_lowercase());
    if let Some(lambda) = args.lambda {
        report.param("lambda", lambda);
    }
    if let Some(beta) = args.beta {
        report.param("beta", beta);
    }
    if let Some(a) = args.a {
        report.param("a", a);
    }
    if let Some(input) = &args.input {
        report.param("input", input.as_str());
    }

    let l0 = minimal_length_quadrature(&spec).map_err(|e| e.to_string())?;
    let mut results = Map::new();
    results.insert("l0".into(), json!(l0));

    match spec.family() {
        Family::Trig => {
            let lambda = spec.lambda().unwrap();
            results.insert("reference".into(), json!(lambda));
            report.assert_check(
                "l0_equals_lambda",
                (l0 - lambda).abs(),
                Op::AtMost,
                1e-10 * ts,
            );
        }
        Family::Hyper | Family::Flat if !spec.domain_bound().is_finite() => {
            results.insert("reference".into(), json!(0.0));
            report.assert_check("l0_is_zero", l0.abs(), Op::AtMost, 0.0);
        }
        _ => {}
    }

    if let Some(n) = args.variational_n {
        report.param("variational-n", n);
        let unc = dirichlet_min_uncertainty(&spec, n).map_err(|e| e.to_string())?;
        report.assert_check(
            "dirichlet_bound_vs_lambda",
            (unc.min_uncertainty - unc.analytic_l0).abs(),
            Op::AtMost,
            1e-3 * ts,
        );
        results.insert(
            "dirichlet".into(),
            serde_json::to_value(&unc).map_err(|e| e.to_string())?,
        );
    }
    report.results = Value::Object(results);
    Ok(report)
}

fn verify_algebra(args: VerifyAlgebraArgs, ts: f64) -> Result<Report, String> {
    let j = parse_j(&args.j)?;
    let (lambda1, lambda2) = match (args.lambda1, args.lambda2) {
        (Some(a), Some(b)) => (a, b),
        (None, None) => {
            let lam = oscillator_lambda(j);
            (lam, lam)
        }
        _ => return Err("give both --lambda1 and --lambda2, or neither".into()),
    };
    let include_m_zero = args.include_m_zero.unwrap_or(true);

    let mut report = Report::new("verify-algebra");
    report.param("j", j.to_string());
    report.param("lambda1", lambda1);
    report.param("lambda2", lambda2);
    report.param("include-m-zero", include_m_zero);

    let rep = build_spin_rep(j).map_err(|e| e.to_string())?;
    let dim = rep.dim() as f64;
    let su2 = rep.commutator_residual();
    let casimir_dev = {
        let cas = rep.casimir();
        let expect = j.casimir();
        let id = deformed_algebra::HermitianOperator::identity(rep.dim());
        cas.sub(&id.scale(deformed_algebra::C64::new(expect, 0.0)))
            .map_err(|e| e.to_string())?
            .max_abs()
    };
    report.assert_check("su2_commutators", su2, Op::AtMost, 1e-12 * dim * ts);
    report.assert_check("casimir_scalar", casimir_dev, Op::AtMost, 1e-12 * dim * ts);

    let triple = build_deformed_triple(rep, lambda1, lambda2).map_err(|e| e.to_string())?;
    let linear = triple
        .linear_relation_residuals()
        .map_err(|e| e.to_string())?;
    let worst_linear = linear.iter().cloned().fold(0.0f64, f64::max);
    report.assert_check(
        "linear_triple_relations",
        worst_linear,
        Op::AtMost,
        1e-12 * dim * ts,
    );

    let projected = triple
        .verify_nonlinear_relation(include_m_zero)
        .map_err(|e| e.to_string())?;
    report.assert_check(
        "nonlinear_projected",
        projected,
        Op::AtMost,
        1e-10 * dim * ts,
    );

    let full = triple
        .nonlinear_residual(MSubspace::Full)
        .map_err(|e| e.to_string())?;
    if j.value() >= 1.0 {
        // the unprojected relation must visibly fail on the negative sector
        report.assert_check("nonlinear_full_space", full, Op::AtLeast, 1e-3 / ts);
    }

    report.results = json!({
        "su2_residual": su2,
        "casimir_deviation": casimir_dev,
        "linear_relation_residuals": linear,
        "nonlinear_projected_residual": projected,
        "nonlinear_full_space_residual": full,
        "dim": triple.dim(),
    });
    Ok(report)
}

fn closure_fit(args: ClosureFitArgs, ts: f64) -> Result<Report, String> {
    let spec = family_spec(&args.family, args.lambda, args.beta, args.c, None, &args.input)?;
    let m = args.m.unwrap_or(201);
    let mut report = Report::new("closure-fit");
    report.param("family", format!("{:?}", spec.family()).to_lowercase());
    if let Some(lambda) = args.lambda {
        report.param("lambda", lambda);
    }
    if let Some(beta) = args.beta {
        report.param("beta", beta);
    }
    if let Some(c) = args.c {
        report.param("c", c);
    }
    report.param("m", m);
    if let Some(input) = &args.input {
        report.param("input", input.as_str());
    }

    let fit = fit_closure_coefficients(&spec, m).map_err(|e| e.to_string())?;
    report.assert_check("alpha_vanishes", fit.alpha.abs(), Op::AtMost, 1e-8 * ts);
    report.assert_check("gamma_vanishes", fit.gamma.abs(), Op::AtMost, 1e-8 * ts);
    if let Some(beta) = spec.beta() {
        report.assert_check(
            "beta_recovered",
            (fit.beta - beta).abs(),
            Op::AtMost,
            1e-8 * ts,
        );
        report.assert_check("family_residual", fit.residual, Op::AtMost, 1e-10 * ts);
    }
    report.results = json!({
        "alpha": fit.alpha,
        "beta": fit.beta,
        "gamma": fit.gamma,
        "residual": fit.residual,
        "reduced_basis": fit.reduced_basis,
        "samples": fit.grid.len(),
    });
    Ok(report)
}

fn expansion_check(args: ExpansionCheckArgs, ts: f64) -> Result<Report, String> {
    let fam = args.family.as_deref().unwrap_or("trig");
    let n = args.n.unwrap_or(256);
    let epsilon: Epsilon = args
        .epsilon
        .as_deref()
        .unwrap_or("+1")
        .parse()
        .map_err(|e: deformed_algebra::Error| e.to_string())?;

    let mut report = Report::new("expansion-check");
    report.param("family", fam);
    report.param("n", n);
    report.param(
        "epsilon",
        if epsilon == Epsilon::Plus { "+1" } else { "-1" },
    );

    let grid = match fam {
        "trig" => {
            let lambda = args.lambda.ok_or("trig family needs --lambda")?;
            report.param("lambda", lambda);
            let spec = DeformationSpec::trig(lambda).map_err(|e| e.to_string())?;
            build_theta_full_circle(&spec, n).map_err(|e| e.to_string())?
        }
        "hyper" => {
            let beta = match (args.beta, args.lambda) {
                (Some(b), _) => b,
                (None, Some(l)) => l * l,
                (None, None) => return Err("hyper family needs --beta (or --lambda)".into()),
            };
            let l = args.l.unwrap_or(10.0);
            report.param("beta", beta);
            report.param("l", l);
            let spec = DeformationSpec::hyper(beta).map_err(|e| e.to_string())?;
            build_grid(&spec, n, Some(l), BoundaryCondition::Periodic)
                .map_err(|e| e.to_string())?
        }
        other => {
            return Err(format!(
                "expansion-check supports trig or hyper, not `{other}`"
            ))
        }
    };

    let expansion = build_expansion(&grid, epsilon).map_err(|e| e.to_string())?;
    let states = default_test_states(&grid);
    let residuals =
        verify_expansion_relations(&expansion, &grid, &states).map_err(|e| e.to_string())?;
    let iso_rel =
        deformed_algebra::iso::verify_iso_relations(&grid, &states).map_err(|e| e.to_string())?;

    let expected = expected_hermiticity(epsilon);
    let flag_mismatches = expansion
        .hermiticity
        .iter()
        .zip(expected.iter())
        .filter(|(f, want)| f.symmetry != **want)
        .count() as f64;

    report.assert_check(
        "iso_relation_residual",
        iso_rel.max_residual,
        Op::AtMost,
        1e-8 * ts,
    );
    report.assert_check(
        "expansion_relation_residual",
        residuals.max_residual,
        Op::AtMost,
        1e-8 * ts,
    );
    report.assert_check(
        "iso_casimir_relative_defect",
        expansion.iso_casimir_defect / expansion.iso_casimir,
        Op::AtMost,
        1e-10 * ts,
    );
    report.assert_check(
        "hermiticity_flag_mismatches",
        flag_mismatches,
        Op::AtMost,
        0.0,
    );

    report.results = json!({
        "iso_casimir": expansion.iso_casimir,
        "iso_casimir_defect": expansion.iso_casimir_defect,
        "hermiticity": expansion.hermiticity,
        "expected_hermiticity": expected,
        "iso_relations": iso_rel,
        "expansion_relations": residuals,
        "states": states.iter().map(|s| s.name.clone()).collect::<Vec<_>>(),
    });
    Ok(report)
}

fn contraction_study(args: ContractionStudyArgs, ts: f64) -> Result<Report, String> {
    let raw = args.j_list.as_deref().unwrap_or("10,100,1000");
    let n_max = args.n_max.unwrap_or(2);
    let mut js: Vec<HalfInt> = Vec::new();
    for item in raw.split(',') {
        js.push(
            item.trim()
                .parse()
                .map_err(|e: deformed_algebra::Error| e.to_string())?,
        );
    }

    let mut report = Report::new("contraction-study");
    report.param("j-list", raw);
    report.param("n-max", n_max);

    let mut rows = Vec::new();
    let mut devs: Vec<Vec<f64>> = Vec::new();
    let mut idx = 0usize;
    for &j in &js {
        let levels = oscillator_levels(j);
        if levels.len() <= n_max {
            return Err(format!("j = {j} supports only {} levels", levels.len()));
        }
        let dv = contraction_deviations(j, n_max);
        for (n, &d) in dv.iter().enumerate() {
            let bound = contraction_bound(j, n);
            report.assert_check(&format!("bound_j_{j}_n_{n}"), d, Op::AtMost, bound * ts);
            rows.push(json!({
                "j": j.to_string(),
                "n": n,
                "e_n": levels[n],
                "limit": n as f64 + 0.5,
                "deviation": d,
                "bound": bound,
            }));
            report.csv_rows.push((idx, levels[n], n as f64 + 0.5, d));
            idx += 1;
        }
        devs.push(dv);
    }
    // deviations must shrink as j grows, level by level
    if devs.len() > 1 {
        for n in 0..=n_max {
            let mut worst_increase = f64::NEG_INFINITY;
            for w in devs.windows(2) {
                worst_increase = worst_increase.max(w[1][n] - w[0][n]);
            }
            report.assert_check(
                &format!("monotone_decrease_n_{n}"),
                worst_increase,
                Op::AtMost,
                0.0,
            );
        }
    }

    report.results = json!({ "rows": rows });
    Ok(report)
}
