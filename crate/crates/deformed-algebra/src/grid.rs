//! Discretized momentum-space representations.
//!
//! All position-operator numerics happen in the transformed variable (θ for
//! the trigonometric family via λp = sin λθ, ξ for the hyperbolic one via
//! λp = sinh λξ, p itself for the flat case), where X = i d/dvar is a pure
//! derivative and the flat measure equals the weighted momentum-space norm.
//! On a uniform periodic grid the Fourier differentiation matrix is exact on
//! every resolved mode, so the discrete spectra below are the continuum ones
//! up to roundoff rather than up to a stencil error.
//!
//! Antiperiodic boundary conditions use the half-integer mode set, which
//! keeps differentiation exact instead of falling back to an O(h²) stencil.

use crate::deformation::{DeformationSpec, Family};
use crate::error::{Error, Result};
use crate::operator::{C64, HermitianOperator};
use crate::spectrum::SpectrumReport;
use nalgebra::{DMatrix, DVector};
use std::collections::BTreeMap;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridVariable {
    /// Momentum itself (flat family).
    P,
    /// Hyperbolic variable, λp = sinh λξ.
    Xi,
    /// Angular variable, λp = sin λθ.
    Theta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryCondition {
    Periodic,
    Antiperiodic,
    Dirichlet,
}

impl std::str::FromStr for BoundaryCondition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "periodic" => Ok(BoundaryCondition::Periodic),
            "antiperiodic" => Ok(BoundaryCondition::Antiperiodic),
            "dirichlet" => Ok(BoundaryCondition::Dirichlet),
            other => Err(Error::InvalidParameter(format!(
                "unknown boundary condition `{other}`"
            ))),
        }
    }
}

/// The variable change carried by a grid, enough to pull nodes back to p.
#[derive(Debug, Clone, PartialEq)]
pub enum VariableMap {
    /// λp = sin λθ. `full_circle` widens the domain from the fundamental
    /// [−π/(2λ), π/(2λ)) to the full period [−π/λ, π/λ); the wide span is
    /// what makes cos λθ and sin λθ exact grid modes for the plane-group
    /// generator checks, at the price of a 2:1 p ↔ θ correspondence.
    SinTheta { lambda: f64, full_circle: bool },
    /// λp = sinh λξ on a truncated line [−L, L).
    SinhXi { lambda: f64 },
    /// No change of variable (flat family).
    Identity,
}

/// Uniform grid in the transformed variable with periodic trapezoid weights.
#[derive(Debug, Clone)]
pub struct GridRep {
    variable: GridVariable,
    n: usize,
    nodes: Vec<f64>,
    bc: BoundaryCondition,
    weights: Vec<f64>,
    map: VariableMap,
    spec: DeformationSpec,
    len: f64,
}

impl GridRep {
    pub fn variable(&self) -> GridVariable {
        self.variable
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn bc(&self) -> BoundaryCondition {
        self.bc
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn map(&self) -> &VariableMap {
        &self.map
    }

    pub fn spec(&self) -> &DeformationSpec {
        &self.spec
    }

    pub fn domain_len(&self) -> f64 {
        self.len
    }

    pub fn is_full_circle(&self) -> bool {
        matches!(
            self.map,
            VariableMap::SinTheta {
                full_circle: true,
                ..
            }
        )
    }

    /// λ of the variable change (√β for the hyperbolic family).
    pub fn lambda(&self) -> Option<f64> {
        match self.map {
            VariableMap::SinTheta { lambda, .. } | VariableMap::SinhXi { lambda } => Some(lambda),
            VariableMap::Identity => None,
        }
    }

    /// Pull a transformed-variable point back to momentum.
    pub fn p_of(&self, var: f64) -> f64 {
        match self.map {
            VariableMap::SinTheta { lambda, .. } => (lambda * var).sin() / lambda,
            VariableMap::SinhXi { lambda } => (lambda * var).sinh() / lambda,
            VariableMap::Identity => var,
        }
    }

    /// Momentum images of the nodes.
    pub fn p_nodes(&self) -> Vec<f64> {
        self.nodes.iter().map(|&v| self.p_of(v)).collect()
    }

    /// Quadrature weights for ∫ dp · (·) at the momentum images, i.e. the
    /// transformed weights times the Jacobian dp/dvar = f(p).
    pub fn p_weights(&self) -> Vec<f64> {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&v, &w)| {
                let jac = match self.map {
                    VariableMap::SinTheta { lambda, .. } => (lambda * v).cos(),
                    VariableMap::SinhXi { lambda } => (lambda * v).cosh(),
                    VariableMap::Identity => 1.0,
                };
                w * jac
            })
            .collect()
    }

    /// Mode numbers of the grid's Fourier basis: integers (plus a Nyquist
    /// mode that is given zero derivative weight) for periodic, half-integers
    /// for antiperiodic boundary conditions.
    pub fn mode_numbers(&self) -> Result<Vec<f64>> {
        let n = self.n as i64;
        match self.bc {
            BoundaryCondition::Periodic => Ok((0..n)
                .map(|m| if m <= n / 2 { m as f64 } else { (m - n) as f64 })
                .collect()),
            BoundaryCondition::Antiperiodic => Ok((0..n)
                .map(|m| {
                    if m < n / 2 {
                        m as f64 + 0.5
                    } else {
                        (m - n) as f64 + 0.5
                    }
                })
                .collect()),
            BoundaryCondition::Dirichlet => Err(Error::Unsupported(
                "Dirichlet grids have no Fourier mode basis".into(),
            )),
        }
    }

    /// Unitary Fourier basis Φ with Φ_{jm} = exp(iκ_m·2πθ_j/Λ)/√N.
    pub fn fourier_basis(&self) -> Result<DMatrix<C64>> {
        let modes = self.mode_numbers()?;
        let len = self.domain_len();
        let n = self.n;
        let norm = (n as f64).sqrt();
        Ok(DMatrix::from_fn(n, n, |j, m| {
            let arg = modes[m] * 2.0 * PI * self.nodes[j] / len;
            C64::new(arg.cos() / norm, arg.sin() / norm)
        }))
    }

    /// Fourier coefficients of a sampled state, paired with mode numbers.
    pub fn fourier_coefficients(&self, state: &DVector<C64>) -> Result<Vec<(f64, C64)>> {
        let modes = self.mode_numbers()?;
        let phi = self.fourier_basis()?;
        let coeffs = phi.adjoint() * state;
        Ok(modes.into_iter().zip(coeffs.iter().cloned()).collect())
    }
}

/// Build a grid for the given deformation family.
///
/// * trig: uniform θ on [−π/(2λ), π/(2λ)); `l` is ignored.
/// * hyper: uniform ξ on [−L, L); `l` is required (the ξ line is infinite
///   and the truncation error is the caller's to control).
/// * flat: uniform p on [−L, L); `l` is required unless the spec carries a
///   finite momentum bound.
pub fn build_grid(
    spec: &DeformationSpec,
    n: usize,
    l: Option<f64>,
    bc: BoundaryCondition,
) -> Result<GridRep> {
    if n < 8 || !n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "grid size must be even and at least 8, got {n}"
        )));
    }
    if bc == BoundaryCondition::Dirichlet {
        return Err(Error::Unsupported(
            "spectral grids are periodic or antiperiodic; the Dirichlet case is handled \
             by the variational minimal-length solver"
                .into(),
        ));
    }
    spec.validate()?;
    match spec.family() {
        Family::Trig => {
            require_unit_c(spec)?;
            let lambda = spec.lambda().unwrap();
            Ok(theta_grid(spec.clone(), lambda, n, bc, false))
        }
        Family::Hyper => {
            require_unit_c(spec)?;
            let l = l.ok_or_else(|| {
                Error::InvalidParameter(
                    "hyper grids need an explicit truncation half-width L".into(),
                )
            })?;
            if !(l > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "L must be positive, got {l}"
                )));
            }
            let lambda = spec.lambda().unwrap();
            let (nodes, weights) = uniform(-l, 2.0 * l, n);
            Ok(GridRep {
                variable: GridVariable::Xi,
                n,
                nodes,
                bc,
                weights,
                map: VariableMap::SinhXi { lambda },
                spec: spec.clone(),
                len: 2.0 * l,
            })
        }
        Family::Flat => {
            let bound = spec.domain_bound();
            let l = l
                .or(bound.is_finite().then_some(bound))
                .ok_or_else(|| Error::InvalidParameter("flat grids need a half-width L".into()))?;
            if !(l > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "L must be positive, got {l}"
                )));
            }
            let (nodes, weights) = uniform(-l, 2.0 * l, n);
            Ok(GridRep {
                variable: GridVariable::P,
                n,
                nodes,
                bc,
                weights,
                map: VariableMap::Identity,
                spec: spec.clone(),
                len: 2.0 * l,
            })
        }
        Family::Tabulated => Err(Error::Unsupported(
            "tabulated deformations have no transformed-variable grid".into(),
        )),
    }
}

/// θ-grid over the full period [−π/λ, π/λ), where cos λθ and sin λθ are
/// exact grid modes. This is the domain for the plane-group generator and
/// expansion checks; position spectra live on the fundamental span.
pub fn build_theta_full_circle(spec: &DeformationSpec, n: usize) -> Result<GridRep> {
    if spec.family() != Family::Trig {
        return Err(Error::InvalidParameter(
            "full-circle grids exist only for the trig family".into(),
        ));
    }
    require_unit_c(spec)?;
    if n < 8 || !n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "grid size must be even and at least 8, got {n}"
        )));
    }
    let lambda = spec.lambda().unwrap();
    Ok(theta_grid(
        spec.clone(),
        lambda,
        n,
        BoundaryCondition::Periodic,
        true,
    ))
}

fn require_unit_c(spec: &DeformationSpec) -> Result<()> {
    if (spec.c() - 1.0).abs() > 1e-14 {
        return Err(Error::Unsupported(
            "grid construction assumes the integration constant c = 1".into(),
        ));
    }
    Ok(())
}

fn theta_grid(
    spec: DeformationSpec,
    lambda: f64,
    n: usize,
    bc: BoundaryCondition,
    full_circle: bool,
) -> GridRep {
    let half = if full_circle {
        PI / lambda
    } else {
        PI / (2.0 * lambda)
    };
    let (nodes, weights) = uniform(-half, 2.0 * half, n);
    GridRep {
        variable: GridVariable::Theta,
        n,
        nodes,
        bc,
        weights,
        map: VariableMap::SinTheta {
            lambda,
            full_circle,
        },
        spec,
        len: 2.0 * half,
    }
}

fn uniform(start: f64, len: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let step = len / n as f64;
    let nodes = (0..n).map(|j| start + j as f64 * step).collect();
    let weights = vec![step; n];
    (nodes, weights)
}

/// Fourier differentiation matrix d/dvar, skew-Hermitian, exact on the
/// grid's resolved modes (the periodic Nyquist mode is differentiated to
/// zero, the standard choice that keeps the matrix skew).
pub fn derivative_matrix(g: &GridRep) -> Result<HermitianOperator> {
    match g.bc() {
        BoundaryCondition::Periodic | BoundaryCondition::Antiperiodic => {}
        BoundaryCondition::Dirichlet => {
            return Err(Error::Unsupported(
                "Dirichlet boundary conditions have no spectral derivative here; \
                 see the variational minimal-length solver"
                    .into(),
            ))
        }
    }
    let modes = g.mode_numbers()?;
    let phi = g.fourier_basis()?;
    let n = g.n();
    let len = g.domain_len();
    let nyquist = n as f64 / 2.0;
    let lam = DMatrix::<C64>::from_fn(n, n, |r, c| {
        if r == c && modes[r].abs() < nyquist {
            C64::new(0.0, modes[r] * 2.0 * PI / len)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let d = &phi * lam * phi.adjoint();
    HermitianOperator::skew_hermitian(d)
}

/// Position operator X = i·d/dvar on the transformed grid. Hermitian with
/// respect to the uniform transformed-variable inner product, which equals
/// the weighted momentum-space product of the representation.
pub fn position_operator(g: &GridRep) -> Result<HermitianOperator> {
    let d = derivative_matrix(g)?;
    HermitianOperator::hermitian(d.scale(C64::new(0.0, 1.0)).into_matrix())
}

/// Diagonalize X and compare with the analytic level ladder
/// {κ·2π/Λ : |κ| < N/4}, κ running over the grid's mode numbers. On the
/// fundamental trig grid this ladder is 2nλ (periodic) or (2n+1)λ
/// (antiperiodic). Each matched level's eigenvector is also checked against
/// the sampled analytic eigenfunction e^{−ilθ}; the worst overlap lands in
/// the report context as `min_overlap`.
pub fn position_spectrum(g: &GridRep) -> Result<SpectrumReport> {
    if g.is_full_circle() {
        return Err(Error::InvalidParameter(
            "position spectra are defined on the fundamental grid span".into(),
        ));
    }
    let x = position_operator(g)?;
    let eig = x.eigh()?;
    let n = g.n();
    let len = g.domain_len();
    let unit = 2.0 * PI / len;

    // stay clear of the Nyquist quarter, where aliasing lives
    let window = n as f64 / 4.0;
    let mut reference: Vec<f64> = g
        .mode_numbers()?
        .into_iter()
        .filter(|k| k.abs() < window)
        .map(|k| k * unit)
        .collect();
    reference.sort_by(|a, b| a.partial_cmp(b).unwrap());

    // nearest-value greedy match, both lists sorted ascending
    let computed_all = &eig.eigenvalues;
    let mut matched: Vec<f64> = Vec::with_capacity(reference.len());
    let mut cursor = 0usize;
    for &r in &reference {
        while cursor + 1 < computed_all.len()
            && (computed_all[cursor + 1] - r).abs() <= (computed_all[cursor] - r).abs()
        {
            cursor += 1;
        }
        matched.push(computed_all[cursor]);
        cursor = (cursor + 1).min(computed_all.len() - 1);
    }

    // eigenvector fidelity per reference level, degenerate-safe: project the
    // sampled eigenfunction onto the span of all eigenvectors within a
    // quarter level spacing of the target.
    let mut min_overlap = f64::INFINITY;
    let cluster_tol = 0.25 * unit;
    for &l in &reference {
        let phi = DVector::<C64>::from_fn(n, |j, _| {
            let arg = -l * g.nodes()[j];
            C64::new(arg.cos(), arg.sin())
        });
        let norm = phi.norm();
        let mut proj2 = 0.0f64;
        for (col, &ev) in eig.eigenvalues.iter().enumerate() {
            if (ev - l).abs() <= cluster_tol {
                let ip = eig.eigenvectors.column(col).dotc(&phi);
                proj2 += ip.norm_sqr();
            }
        }
        let overlap = proj2.sqrt() / norm;
        min_overlap = min_overlap.min(overlap);
    }

    let mut context = BTreeMap::new();
    context.insert("n".into(), n.to_string());
    context.insert("bc".into(), format!("{:?}", g.bc()).to_lowercase());
    context.insert("domain_len".into(), format!("{len}"));
    if let Some(lambda) = g.lambda() {
        context.insert("lambda".into(), format!("{lambda}"));
    }
    context.insert("min_overlap".into(), format!("{min_overlap}"));
    context.insert("level_unit".into(), format!("{unit}"));
    Ok(SpectrumReport::from_pairs(matched, reference, context))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::Symmetry;

    fn trig(lambda: f64) -> DeformationSpec {
        DeformationSpec::trig(lambda).unwrap()
    }

    #[test]
    fn trig_grid_nodes_and_weights() {
        // λ = 0.5 → θ ∈ [−π, π), step π/4, Σw = 2π
        let g = build_grid(&trig(0.5), 8, None, BoundaryCondition::Periodic).unwrap();
        assert_eq!(g.variable(), GridVariable::Theta);
        assert!((g.nodes()[0] + PI).abs() < 1e-15);
        assert!((g.nodes()[1] - g.nodes()[0] - PI / 4.0).abs() < 1e-15);
        let total: f64 = g.weights().iter().sum();
        assert!((total - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn flat_grid_is_plain_uniform() {
        let g = build_grid(
            &DeformationSpec::flat(),
            16,
            Some(1.0),
            BoundaryCondition::Periodic,
        )
        .unwrap();
        assert_eq!(g.variable(), GridVariable::P);
        assert!((g.nodes()[0] + 1.0).abs() < 1e-15);
        for &w in g.weights() {
            assert!((w - 2.0 / 16.0).abs() < 1e-15);
        }
    }

    #[test]
    fn bad_grid_parameters_rejected() {
        assert!(build_grid(&trig(1.0), 7, None, BoundaryCondition::Periodic).is_err());
        assert!(build_grid(&trig(1.0), 4, None, BoundaryCondition::Periodic).is_err());
        assert!(build_grid(
            &DeformationSpec::hyper(1.0).unwrap(),
            16,
            None,
            BoundaryCondition::Periodic
        )
        .is_err());
        assert!(build_grid(&trig(1.0), 16, None, BoundaryCondition::Dirichlet).is_err());
    }

    #[test]
    fn derivative_exact_on_resolved_modes() {
        // cos θ on [−π, π): derivative −sin θ, resolved well below Nyquist
        let g = build_grid(&trig(0.5), 8, None, BoundaryCondition::Periodic).unwrap();
        let d = derivative_matrix(&g).unwrap();
        assert_eq!(d.symmetry(), Symmetry::SkewHermitian);
        let f = DVector::<C64>::from_fn(8, |j, _| C64::new(g.nodes()[j].cos(), 0.0));
        let df = d.apply(&f);
        for j in 0..8 {
            assert!((df[j].re + g.nodes()[j].sin()).abs() < 1e-13);
            assert!(df[j].im.abs() < 1e-13);
        }
        // constant goes to zero
        let one = DVector::<C64>::from_element(8, C64::new(1.0, 0.0));
        assert!(d.apply(&one).norm() < 1e-13);
    }

    #[test]
    fn antiperiodic_half_mode_is_eigenvector() {
        // e^{iθ/2} on [−π, π) with antiperiodic bc: derivative (i/2)e^{iθ/2}
        let g = build_grid(&trig(0.5), 8, None, BoundaryCondition::Antiperiodic).unwrap();
        let d = derivative_matrix(&g).unwrap();
        let f = DVector::<C64>::from_fn(8, |j, _| {
            let t = g.nodes()[j] / 2.0;
            C64::new(t.cos(), t.sin())
        });
        let df = d.apply(&f);
        for j in 0..8 {
            let want = C64::new(0.0, 0.5) * f[j];
            assert!((df[j] - want).norm() < 1e-13);
        }
    }

    #[test]
    fn position_spectrum_periodic_is_even_ladder() {
        let g = build_grid(&trig(0.5), 64, None, BoundaryCondition::Periodic).unwrap();
        let report = position_spectrum(&g).unwrap();
        assert!(report.max_dev <= 1e-10, "max_dev {:.3e}", report.max_dev);
        // levels are 2nλ = n for λ = 1/2
        assert!(report.reference.iter().any(|&l| (l - 1.0).abs() < 1e-12));
        assert!(report.reference.iter().any(|&l| (l + 2.0).abs() < 1e-12));
        let overlap: f64 = report.context["min_overlap"].parse().unwrap();
        assert!(overlap >= 1.0 - 1e-10, "min overlap {overlap}");
    }

    #[test]
    fn position_spectrum_antiperiodic_is_odd_ladder() {
        let g = build_grid(&trig(0.5), 64, None, BoundaryCondition::Antiperiodic).unwrap();
        let report = position_spectrum(&g).unwrap();
        assert!(report.max_dev <= 1e-10);
        for &l in &report.reference {
            let ratio = l / 0.5; // must be an odd integer
            assert!((ratio - ratio.round()).abs() < 1e-12);
            assert_eq!((ratio.round() as i64).rem_euclid(2), 1);
        }
        let overlap: f64 = report.context["min_overlap"].parse().unwrap();
        assert!(overlap >= 1.0 - 1e-10);
    }

    #[test]
    fn flat_grid_spectrum_is_integer_ladder() {
        let g = build_grid(
            &DeformationSpec::flat(),
            32,
            Some(PI),
            BoundaryCondition::Periodic,
        )
        .unwrap();
        let report = position_spectrum(&g).unwrap();
        assert!(report.max_dev <= 1e-10);
        for &l in &report.reference {
            assert!((l - l.round()).abs() < 1e-12);
        }
    }

    #[test]
    fn full_circle_has_wide_domain_and_no_position_spectrum() {
        let g = build_theta_full_circle(&trig(1.0), 64).unwrap();
        assert!((g.domain_len() - 2.0 * PI).abs() < 1e-12);
        assert!(g.is_full_circle());
        assert!(position_spectrum(&g).is_err());
    }

    #[test]
    fn norm_equivalence_weighted_p_vs_transformed() {
        // ∑ w_p |ψ(p)|²/f(p) from the p-side pullback equals the flat
        // transformed-variable quadrature ∑ w |ψ̃|². The state vanishes at
        // the interval ends, where the 1/f measure is singular.
        let g = build_grid(&trig(0.5), 64, None, BoundaryCondition::Periodic).unwrap();
        let spec = g.spec().clone();
        let lam = g.lambda().unwrap();
        // ψ̃(θ) = cos²(λθ), i.e. ψ(p) = 1 − λ²p² in momentum form
        let theta_side: f64 = g
            .nodes()
            .iter()
            .zip(g.weights())
            .map(|(&t, &w)| {
                let v = (lam * t).cos().powi(2);
                w * v * v
            })
            .sum();
        let p_side: f64 = g
            .p_nodes()
            .iter()
            .zip(g.p_weights())
            .map(|(&p, wp)| {
                let v = 1.0 - lam * lam * p * p;
                let f = spec.f(p);
                if f == 0.0 {
                    // w_p = w·f vanishes with the same factor; the analytic
                    // limit of the product is zero because ψ does too
                    0.0
                } else {
                    wp * v * v / f
                }
            })
            .sum();
        assert!(
            (theta_side - p_side).abs() <= 1e-10 * theta_side.abs(),
            "θ {theta_side} vs p {p_side}"
        );
    }
}
