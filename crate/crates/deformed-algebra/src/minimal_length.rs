//! The two routes to the minimal length.
//!
//! Quadrature route: l₀ = (π/2)·(∫₀^a dp/f)⁻¹. In the transformed variable
//! the integrand of the parametric families is identically 1 (the variable
//! change removes the endpoint singularity of 1/f), so the trapezoid rule is
//! exact: l₀ = λ for the trigonometric family, l₀ = 0 when the integral
//! diverges (hyper/flat on the whole line).
//!
//! Variational route: under Dirichlet conditions φ(±1/λ) = 0 the position
//! operator has no eigenfunctions and the uncertainty is bounded below.
//! Minimizing ⟨ψ|(X − x₀)²|ψ⟩ over normalized Dirichlet states and the
//! shift x₀ gives √min → λ as N → ∞. The discretization uses second-order
//! central differences on interior θ nodes (the exact Fourier route is
//! incompatible with Dirichlet walls), so the error decays as O(N⁻²).

use crate::deformation::{DeformationSpec, Family};
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Outcome of the Dirichlet variational minimization.
#[derive(Debug, Clone, serde::Serialize)]
pub struct UncertaintyReport {
    /// √min ⟨(X − x₀)²⟩ over Dirichlet states and shifts.
    pub min_uncertainty: f64,
    /// The closed-form minimal length λ this converges to.
    pub analytic_l0: f64,
    pub optimizer: OptimizerState,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct OptimizerState {
    /// Optimal shift (zero by symmetry, up to the search tolerance).
    pub x0: f64,
    pub grid_n: usize,
    pub iterations: usize,
    /// Final golden-section bracket width on x₀.
    pub bracket_width: f64,
    /// Relative objective change over the last refinement step.
    pub objective_delta: f64,
}

/// l₀ = (π/2)·(∫₀^a dp/f)⁻¹, computed in the transformed variable for the
/// parametric families and by direct trapezoid for tabulated samples.
/// A divergent integral (unbounded momentum domain) gives exactly 0.
pub fn minimal_length_quadrature(spec: &DeformationSpec) -> Result<f64> {
    spec.validate()?;
    const M: usize = 4096;
    match spec {
        DeformationSpec::Trig { lambda, .. } => {
            // θ-integrand is the constant 1 on [0, π/(2λ)]
            let upper = PI / (2.0 * lambda);
            Ok(PI / 2.0 / trapezoid_const(upper, M))
        }
        DeformationSpec::Hyper { beta, c, bound } => match bound {
            None => Ok(0.0),
            Some(a) => {
                let lambda = beta.sqrt();
                let upper = (lambda * a / c.sqrt()).asinh() / lambda;
                Ok(PI / 2.0 / trapezoid_const(upper, M))
            }
        },
        DeformationSpec::Flat { c, bound } => match bound {
            None => Ok(0.0),
            Some(a) => {
                let upper = a / c.sqrt();
                Ok(PI / 2.0 / trapezoid_const(upper, M))
            }
        },
        DeformationSpec::Tabulated { samples } => {
            let integral = tabulated_integral(samples)?;
            if !integral.is_finite() || integral <= 0.0 {
                return Err(Error::NumericalConsistency(format!(
                    "tabulated quadrature produced a non-integrable result ({integral})"
                )));
            }
            Ok(PI / 2.0 / integral)
        }
    }
}

/// Trapezoid of the constant integrand 1 over [0, upper]. Kept as an actual
/// quadrature loop so the transformed-variable route is exercised, not just
/// its closed form.
fn trapezoid_const(upper: f64, m: usize) -> f64 {
    let h = upper / m as f64;
    let mut acc = 0.5 + 0.5; // end weights of a constant integrand
    acc += (m - 1) as f64;
    acc * h
}

fn tabulated_integral(samples: &[(f64, f64)]) -> Result<f64> {
    // integrate 1/f from 0 to max p over the p ≥ 0 samples
    let plus: Vec<(f64, f64)> = samples.iter().cloned().filter(|&(p, _)| p >= 0.0).collect();
    if plus.len() < 2 {
        return Err(Error::InvalidParameter(
            "tabulated quadrature needs at least two samples with p ≥ 0".into(),
        ));
    }
    let mut acc = 0.0;
    // leading segment when p = 0 is not itself a sample
    if plus[0].0 > 0.0 {
        let f0 = samples
            .iter()
            .min_by(|a, b| a.0.abs().partial_cmp(&b.0.abs()).unwrap())
            .map(|&(_, f)| f)
            .unwrap();
        acc += plus[0].0 * 0.5 * (1.0 / f0 + 1.0 / plus[0].1);
    }
    for w in plus.windows(2) {
        let (p0, f0) = w[0];
        let (p1, f1) = w[1];
        acc += (p1 - p0) * 0.5 * (1.0 / f0 + 1.0 / f1);
    }
    Ok(acc)
}

/// Minimize ⟨ψ|(X − x₀)²|ψ⟩ over normalized Dirichlet states ψ on the θ
/// interval and over the real shift x₀ (golden section on
/// [−0.5/λ, 0.5/λ], tolerance 1e−8, which by symmetry lands at x₀ ≈ 0).
/// Returns √min and the optimizer state. Trig family only.
pub fn dirichlet_min_uncertainty(spec: &DeformationSpec, n: usize) -> Result<UncertaintyReport> {
    if spec.family() != Family::Trig {
        return Err(Error::Unsupported(
            "the Dirichlet variational bound is defined for the trig family".into(),
        ));
    }
    if (spec.c() - 1.0).abs() > 1e-14 {
        return Err(Error::Unsupported(
            "the Dirichlet solver assumes the integration constant c = 1".into(),
        ));
    }
    if n < 32 {
        return Err(Error::InvalidParameter(format!(
            "need at least 32 grid intervals, got {n}"
        )));
    }
    let lambda = spec.lambda().unwrap();
    let ell = PI / lambda;
    let h = ell / n as f64;

    let objective = |x0: f64| lowest_dirichlet_eigenvalue(n, h, x0);

    // golden section on the symmetric bracket
    let mut a = -0.5 / lambda;
    let mut b = 0.5 / lambda;
    let inv_phi = 0.5 * (5.0f64.sqrt() - 1.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = objective(c);
    let mut fd = objective(d);
    let mut iterations = 0usize;
    let mut last = fc.min(fd);
    let mut objective_delta = f64::INFINITY;
    while b - a > 1e-8 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = objective(d);
        }
        let best = fc.min(fd);
        objective_delta = (best - last).abs() / best.abs().max(f64::MIN_POSITIVE);
        last = best;
        iterations += 1;
        if iterations > 200 {
            return Err(Error::NumericalConsistency(
                "golden-section search failed to converge".into(),
            ));
        }
    }
    if objective_delta > 1e-6 {
        return Err(Error::NumericalConsistency(format!(
            "optimizer did not settle: last relative change {objective_delta:.3e}"
        )));
    }
    let x0 = 0.5 * (a + b);
    let mu = objective(x0);
    Ok(UncertaintyReport {
        min_uncertainty: mu.max(0.0).sqrt(),
        analytic_l0: lambda,
        optimizer: OptimizerState {
            x0,
            grid_n: n,
            iterations,
            bracket_width: b - a,
            objective_delta,
        },
    })
}

/// Lowest eigenvalue of the Hermitian tridiagonal (X − x₀)² discretization
/// on the n−1 interior nodes: diagonal 2/h² + x₀², off-diagonal
/// −1/h² ∓ i·x₀/h (central stencils for −d²/dθ² and −2x₀·i d/dθ).
/// Sturm-sequence bisection; only |off-diagonal|² enters the count.
fn lowest_dirichlet_eigenvalue(n: usize, h: f64, x0: f64) -> f64 {
    let m = n - 1;
    let diag = 2.0 / (h * h) + x0 * x0;
    let off_sq = (1.0 / (h * h)).powi(2) + (x0 / h).powi(2); // |b|²

    // eigenvalue count below sigma via the LDL recurrence
    let count_below = |sigma: f64| -> usize {
        let mut count = 0usize;
        let mut d = diag - sigma;
        if d < 0.0 {
            count += 1;
        }
        for _ in 1..m {
            if d == 0.0 {
                d = 1e-300;
            }
            d = (diag - sigma) - off_sq / d;
            if d < 0.0 {
                count += 1;
            }
        }
        count
    };

    let radius = 2.0 * off_sq.sqrt();
    let mut lo = diag - radius;
    let mut hi = diag + radius;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if count_below(mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-13 * hi.abs().max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}
