//! Finite-dimensional angular-momentum matrices.
//!
//! The spin-j representation is built from the ladder operators in the
//! basis |j, m⟩ ordered by descending m (j, j−1, …, −j), so J_z is diagonal
//! with descending entries. Construction is deterministic: the same j always
//! yields bit-identical matrices.

use crate::error::{Error, Result};
use crate::half::HalfInt;
use crate::operator::{commutator, C64, HermitianOperator};
use nalgebra::DMatrix;

/// Default cap on j; dim = 2j+1 stays ≤ 10001 so dense work remains desk-scale.
pub const DEFAULT_SPIN_CAP: f64 = 5000.0;

/// Spin-j matrices J_x, J_y, J_z (ħ = 1).
#[derive(Debug, Clone)]
pub struct SpinRep {
    j: HalfInt,
    jx: HermitianOperator,
    jy: HermitianOperator,
    jz: HermitianOperator,
}

impl SpinRep {
    pub fn j(&self) -> HalfInt {
        self.j
    }

    pub fn dim(&self) -> usize {
        self.j.dim()
    }

    pub fn jx(&self) -> &HermitianOperator {
        &self.jx
    }

    pub fn jy(&self) -> &HermitianOperator {
        &self.jy
    }

    pub fn jz(&self) -> &HermitianOperator {
        &self.jz
    }

    /// The m value attached to basis index k (descending: m = j − k).
    pub fn m_at(&self, k: usize) -> f64 {
        self.j.value() - k as f64
    }

    /// J_x² + J_y² + J_z². Equals j(j+1)·I on a healthy representation.
    pub fn casimir(&self) -> HermitianOperator {
        casimir_spin(self)
    }

    /// Worst su(2) commutator defect, max-abs over the three relations.
    pub fn commutator_residual(&self) -> f64 {
        let i = C64::new(0.0, 1.0);
        let r1 = commutator(&self.jx, &self.jy, false)
            .unwrap()
            .sub(&self.jz.scale(i))
            .unwrap()
            .max_abs();
        let r2 = commutator(&self.jz, &self.jx, false)
            .unwrap()
            .sub(&self.jy.scale(i))
            .unwrap()
            .max_abs();
        let r3 = commutator(&self.jy, &self.jz, false)
            .unwrap()
            .sub(&self.jx.scale(i))
            .unwrap()
            .max_abs();
        r1.max(r2).max(r3)
    }
}

/// Build the spin-j representation with the default cap.
pub fn build_spin_rep(j: HalfInt) -> Result<SpinRep> {
    build_spin_rep_with_cap(j, DEFAULT_SPIN_CAP)
}

/// Build the spin-j representation, refusing j beyond `cap`.
pub fn build_spin_rep_with_cap(j: HalfInt, cap: f64) -> Result<SpinRep> {
    if j.value() > cap {
        return Err(Error::ResourceLimit(format!(
            "j = {j} exceeds the cap {cap} (dim would be {})",
            j.dim()
        )));
    }
    let dim = j.dim();
    let jv = j.value();
    let m = |k: usize| jv - k as f64;

    // J₊|j,m⟩ = √(j(j+1) − m(m+1)) |j,m+1⟩; raising moves one row up here.
    let mut jplus = DMatrix::<C64>::zeros(dim, dim);
    for k in 1..dim {
        let mk = m(k);
        let amp = (jv * (jv + 1.0) - mk * (mk + 1.0)).sqrt();
        jplus[(k - 1, k)] = C64::new(amp, 0.0);
    }
    let jminus = jplus.adjoint();

    let jx = (&jplus + &jminus).map(|z| z * C64::new(0.5, 0.0));
    let jy = (&jplus - &jminus).map(|z| z * C64::new(0.0, -0.5));
    let jz = DMatrix::<C64>::from_fn(dim, dim, |r, c| {
        if r == c {
            C64::new(m(r), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });

    Ok(SpinRep {
        j,
        jx: HermitianOperator::hermitian(jx)?,
        jy: HermitianOperator::hermitian(jy)?,
        jz: HermitianOperator::hermitian(jz)?,
    })
}

/// J² = J_x² + J_y² + J_z².
pub fn casimir_spin(rep: &SpinRep) -> HermitianOperator {
    rep.jx
        .square()
        .add(&rep.jy.square())
        .and_then(|s| s.add(&rep.jz.square()))
        .expect("same dimension by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::Symmetry;

    fn j(twice: i64) -> HalfInt {
        HalfInt::from_twice(twice).unwrap()
    }

    #[test]
    fn pauli_over_two_for_spin_half() {
        let rep = build_spin_rep(j(1)).unwrap();
        let jx = rep.jx().matrix();
        assert!((jx[(0, 1)] - C64::new(0.5, 0.0)).norm() < 1e-15);
        assert!((jx[(1, 0)] - C64::new(0.5, 0.0)).norm() < 1e-15);
        let jy = rep.jy().matrix();
        assert!((jy[(0, 1)] - C64::new(0.0, -0.5)).norm() < 1e-15);
        assert!((jy[(1, 0)] - C64::new(0.0, 0.5)).norm() < 1e-15);
        let jz = rep.jz().matrix();
        assert!((jz[(0, 0)] - C64::new(0.5, 0.0)).norm() < 1e-15);
        assert!((jz[(1, 1)] - C64::new(-0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn spin_one_ladder_entries() {
        // J_x off-diagonal entries are 1/√2 for j = 1.
        let rep = build_spin_rep(j(2)).unwrap();
        let jx = rep.jx().matrix();
        let w = 1.0 / 2.0_f64.sqrt();
        for (r, c) in [(0usize, 1usize), (1, 0), (1, 2), (2, 1)] {
            assert!((jx[(r, c)].re - w).abs() < 1e-15, "entry ({r},{c})");
        }
        let jz = rep.jz().matrix();
        for (k, want) in [(0usize, 1.0), (1, 0.0), (2, -1.0)] {
            assert!((jz[(k, k)].re - want).abs() < 1e-15);
        }
    }

    #[test]
    fn su2_relations_hold_across_j() {
        for twice in 1..=25 {
            let rep = build_spin_rep(j(twice)).unwrap();
            let tol = 1e-12 * rep.dim() as f64;
            assert!(rep.commutator_residual() <= tol, "j = {}", rep.j());
            assert_eq!(rep.jx().symmetry(), Symmetry::Hermitian);
        }
    }

    #[test]
    fn casimir_is_scalar() {
        for twice in [1i64, 2, 3, 10] {
            let rep = build_spin_rep(j(twice)).unwrap();
            let cas = rep.casimir();
            let expect = rep.j().casimir();
            let dev = cas
                .sub(&HermitianOperator::identity(rep.dim()).scale(C64::new(expect, 0.0)))
                .unwrap()
                .max_abs();
            assert!(dev <= 1e-12 * rep.dim() as f64, "j = {}", rep.j());
        }
    }

    #[test]
    fn casimir_j5_is_30() {
        let rep = build_spin_rep(j(10)).unwrap();
        let cas = rep.casimir();
        assert_eq!(rep.dim(), 11);
        for k in 0..11 {
            assert!((cas.matrix()[(k, k)].re - 30.0).abs() < 1e-12);
        }
    }

    #[test]
    fn casimir_commutes_with_components() {
        let rep = build_spin_rep(j(7)).unwrap();
        let cas = rep.casimir();
        let tol = 1e-12 * rep.dim() as f64;
        for op in [rep.jx(), rep.jy(), rep.jz()] {
            let c = commutator(&cas, op, false).unwrap();
            assert!(c.max_abs() <= tol);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let big = HalfInt::from_twice(12000).unwrap();
        assert!(matches!(
            build_spin_rep(big),
            Err(Error::ResourceLimit(_))
        ));
        assert!(build_spin_rep_with_cap(j(9), 4.0).is_err());
    }

    #[test]
    fn deterministic_construction() {
        let a = build_spin_rep(j(5)).unwrap();
        let b = build_spin_rep(j(5)).unwrap();
        assert_eq!(a.jx().matrix(), b.jx().matrix());
        assert_eq!(a.jy().matrix(), b.jy().matrix());
    }
}
