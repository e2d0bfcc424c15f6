//! The spin-j realization of the deformed algebra and its oscillator.
//!
//! Position and momentum are carried by angular-momentum matrices,
//! X = λ₂ J_x and P = λ₁ J_y, with the closure generator F = λ₁λ₂ J_z.
//! Under the constraint λ₁²λ₂²·j(j+1) = 1 the pair satisfies the deformed
//! relation `[X,P] = i√(1 − λ₁²X² − λ₂²P²)` on the subspace of non-negative
//! J_z eigenvalues, while the triple (X, P, F) closes linearly:
//!
//! `[X,P] = iF`,  `[X,F] = −iλ₂²P`,  `[P,F] = iλ₁²X`.
//!
//! The deformed harmonic oscillator H = ½(P² + X²) with λ₁ = λ₂ = λ becomes
//! (λ²/2)(J² − J_z²) and is diagonal in the J_z basis, which is what makes
//! its spectrum available in closed form.

use crate::error::{Error, Result};
use crate::half::HalfInt;
use crate::operator::{commutator, C64, HermitianOperator};
use crate::spectrum::SpectrumReport;
use crate::spin::SpinRep;
use std::collections::BTreeMap;

/// Relative tolerance on the λ₁²λ₂²j(j+1) = 1 constraint.
pub const CONSTRAINT_RTOL: f64 = 1e-10;

/// Eigenvalue clamp when taking √(I − λ₁²X² − λ₂²P²).
pub const PSD_CLAMP: f64 = 1e-10;

/// The X, P, F triple on a spin-j representation.
#[derive(Debug, Clone)]
pub struct DeformedTriple {
    rep: SpinRep,
    x: HermitianOperator,
    p: HermitianOperator,
    f: HermitianOperator,
    lambda1: f64,
    lambda2: f64,
}

/// Which J_z eigenspace the nonlinear relation is projected onto.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MSubspace {
    /// m > 0 only.
    PositiveM,
    /// m ≥ 0; the default, so the level count matches the oscillator.
    NonNegativeM,
    /// No projection. The relation fails here; the magnitude of the failure
    /// on the negative-m sector documents why the projection is needed.
    Full,
}

impl DeformedTriple {
    pub fn x(&self) -> &HermitianOperator {
        &self.x
    }

    pub fn p(&self) -> &HermitianOperator {
        &self.p
    }

    pub fn f(&self) -> &HermitianOperator {
        &self.f
    }

    pub fn rep(&self) -> &SpinRep {
        &self.rep
    }

    pub fn lambda1(&self) -> f64 {
        self.lambda1
    }

    pub fn lambda2(&self) -> f64 {
        self.lambda2
    }

    pub fn j(&self) -> HalfInt {
        self.rep.j()
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    fn projector(&self, subspace: MSubspace) -> HermitianOperator {
        let dim = self.dim();
        let diag: Vec<f64> = (0..dim)
            .map(|k| {
                let m = self.rep.m_at(k);
                let keep = match subspace {
                    MSubspace::PositiveM => m > 0.5e-9,
                    MSubspace::NonNegativeM => m > -0.5e-9,
                    MSubspace::Full => true,
                };
                if keep {
                    1.0
                } else {
                    0.0
                }
            })
            .collect();
        HermitianOperator::real_diagonal(&diag)
    }

    /// Max-abs of `Π([X,P] − i√(I − λ₁²X² − λ₂²P²))Π` on the chosen subspace.
    pub fn nonlinear_residual(&self, subspace: MSubspace) -> Result<f64> {
        let dim = self.dim();
        let id = HermitianOperator::identity(dim);
        let arg = id
            .sub(&self.x.square().scale(C64::new(self.lambda1 * self.lambda1, 0.0)))?
            .sub(&self.p.square().scale(C64::new(self.lambda2 * self.lambda2, 0.0)))?;
        let arg = HermitianOperator::hermitian(arg.into_matrix())?;
        let sqrt = arg.sqrt_psd(PSD_CLAMP)?;
        let lhs = commutator(&self.x, &self.p, false)?;
        let mismatch = lhs.sub(&sqrt.scale(C64::new(0.0, 1.0)))?;
        let proj = self.projector(subspace);
        let boxed = proj.mul(&mismatch)?.mul(&proj)?;
        Ok(boxed.max_abs())
    }

    /// Spec-shaped entry point: residual on m > 0 (or m ≥ 0) eigenstates.
    pub fn verify_nonlinear_relation(&self, include_m_zero: bool) -> Result<f64> {
        let subspace = if include_m_zero {
            MSubspace::NonNegativeM
        } else {
            MSubspace::PositiveM
        };
        self.nonlinear_residual(subspace)
    }

    /// Residuals of the three linear relations `[X,P]=iF`, `[X,F]=−iλ₂²P`,
    /// `[P,F]=iλ₁²X`, max-abs each.
    pub fn linear_relation_residuals(&self) -> Result<[f64; 3]> {
        let i = C64::new(0.0, 1.0);
        let r1 = commutator(&self.x, &self.p, false)?
            .sub(&self.f.scale(i))?
            .max_abs();
        let r2 = commutator(&self.x, &self.f, false)?
            .sub(&self.p.scale(i * C64::new(-self.lambda2 * self.lambda2, 0.0)))?
            .max_abs();
        let r3 = commutator(&self.p, &self.f, false)?
            .sub(&self.x.scale(i * C64::new(self.lambda1 * self.lambda1, 0.0)))?
            .max_abs();
        Ok([r1, r2, r3])
    }
}

/// Scale X = λ₂J_x, P = λ₁J_y, F = λ₁λ₂J_z after checking the constraint.
pub fn build_deformed_triple(rep: SpinRep, lambda1: f64, lambda2: f64) -> Result<DeformedTriple> {
    if !(lambda1 > 0.0) || !(lambda2 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "lambda1 and lambda2 must be positive, got {lambda1}, {lambda2}"
        )));
    }
    let jj = rep.j().casimir();
    let product = lambda1 * lambda1 * lambda2 * lambda2 * jj;
    let residual = (product - 1.0).abs();
    if residual > CONSTRAINT_RTOL {
        return Err(Error::Constraint {
            what: format!(
                "lambda1^2 * lambda2^2 * j(j+1) must equal 1, got {product}"
            ),
            residual,
        });
    }
    let x = rep.jx().scale(C64::new(lambda2, 0.0));
    let p = rep.jy().scale(C64::new(lambda1, 0.0));
    let f = rep.jz().scale(C64::new(lambda1 * lambda2, 0.0));
    Ok(DeformedTriple {
        rep,
        x,
        p,
        f,
        lambda1,
        lambda2,
    })
}

/// λ solving λ⁴ j(j+1) = 1, the symmetric-oscillator deformation scale.
pub fn oscillator_lambda(j: HalfInt) -> f64 {
    j.casimir().powf(-0.25)
}

/// Closed-form oscillator levels E_n = (j(j+1) − (j−n)²) / (2√(j(j+1))),
/// ascending in n; n runs 0..=j for integer j and 0..=j−1/2 otherwise.
pub fn oscillator_levels(j: HalfInt) -> Vec<f64> {
    let jj = j.casimir();
    let jv = j.value();
    let norm = 2.0 * jj.sqrt();
    let n_max = if j.is_integer() {
        j.twice() / 2
    } else {
        (j.twice() - 1) / 2
    };
    (0..=n_max)
        .map(|n| {
            let d = jv - n as f64;
            (jj - d * d) / norm
        })
        .collect()
}

/// Analytic oscillator spectrum as a report (the reference *is* the formula,
/// so deviations are identically zero; λ is recorded in the context).
pub fn oscillator_spectrum_analytic(j: HalfInt) -> SpectrumReport {
    let levels = oscillator_levels(j);
    let mut context = BTreeMap::new();
    context.insert("j".into(), j.to_string());
    context.insert("lambda".into(), format!("{}", oscillator_lambda(j)));
    context.insert("source".into(), "analytic".into());
    SpectrumReport::from_pairs(levels.clone(), levels, context)
}

/// Full-space reference multiset for the matrix oscillator: E_|m| over
/// m = −j..j, so every |m| > 0 level appears twice and m = 0 (integer j)
/// once. Sorted ascending.
pub fn oscillator_reference_multiset(j: HalfInt) -> Vec<f64> {
    let jj = j.casimir();
    let norm = 2.0 * jj.sqrt();
    let dim = j.dim();
    let mut out: Vec<f64> = (0..dim)
        .map(|k| {
            let m = j.value() - k as f64;
            (jj - m * m) / norm
        })
        .collect();
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

/// Diagonalize H = ½(P² + X²) and compare against the analytic multiset.
///
/// Only the paper's symmetric case λ₁ = λ₂ is defined; asymmetric triples
/// are rejected rather than given an invented spectrum.
pub fn oscillator_spectrum_matrix(t: &DeformedTriple) -> Result<SpectrumReport> {
    let rel = (t.lambda1() - t.lambda2()).abs() / t.lambda1().max(t.lambda2());
    if rel > 1e-12 {
        return Err(Error::Unsupported(format!(
            "oscillator spectrum requires lambda1 = lambda2 (got {} and {})",
            t.lambda1(),
            t.lambda2()
        )));
    }
    let h = t
        .p()
        .square()
        .add(&t.x().square())?
        .scale(C64::new(0.5, 0.0));
    let h = HermitianOperator::hermitian(h.into_matrix())?;
    let eig = h.eigh()?;
    let reference = oscillator_reference_multiset(t.j());
    let mut context = BTreeMap::new();
    context.insert("j".into(), t.j().to_string());
    context.insert("lambda".into(), format!("{}", t.lambda1()));
    context.insert("source".into(), "matrix".into());
    Ok(SpectrumReport::from_pairs(
        eig.eigenvalues,
        reference,
        context,
    ))
}

/// Expected degeneracy pattern of the oscillator levels, ascending:
/// 2 for every |m| > 0 pair, 1 for the m = 0 level of integer j.
pub fn oscillator_degeneracies(j: HalfInt) -> Vec<usize> {
    let n_levels = oscillator_levels(j).len();
    let mut out = vec![2usize; n_levels];
    if j.is_integer() {
        // highest level (m = 0) is simple; levels ascend as |m| descends
        *out.last_mut().unwrap() = 1;
    }
    out
}

/// |E_n − (n + ½)| for the contraction study, one row per requested n.
pub fn contraction_deviations(j: HalfInt, n_max: usize) -> Vec<f64> {
    let levels = oscillator_levels(j);
    levels
        .iter()
        .take(n_max + 1)
        .enumerate()
        .map(|(n, e)| (e - (n as f64 + 0.5)).abs())
        .collect()
}

/// The asymptotic bound (2n² + 2n + 1)/(2j) the deviations must respect.
pub fn contraction_bound(j: HalfInt, n: usize) -> f64 {
    let n = n as f64;
    (2.0 * n * n + 2.0 * n + 1.0) / (2.0 * j.value())
}
