//! Dense complex operators with a declared symmetry class.
//!
//! Everything downstream (spin matrices, grid operators, expansion
//! generators) is carried by [`HermitianOperator`]: a square complex matrix
//! plus a flag recording whether it is Hermitian, skew-Hermitian or neither.
//! The flag is checked at construction and derived through the arithmetic,
//! so a commutator of two Hermitian operators comes out tagged
//! skew-Hermitian without re-measuring.

use crate::error::{Error, Result};
use nalgebra::{Complex, DMatrix, DVector};

pub type C64 = Complex<f64>;

/// Tolerance factor for flag consistency: max|A ∓ A†| ≤ FLAG_TOL · n.
pub const FLAG_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Symmetry {
    Hermitian,
    SkewHermitian,
    General,
}

/// Dense n×n complex matrix with a symmetry flag.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    mat: DMatrix<C64>,
    symmetry: Symmetry,
}

pub fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

impl HermitianOperator {
    /// Wrap a matrix that must be Hermitian to FLAG_TOL·n.
    pub fn hermitian(mat: DMatrix<C64>) -> Result<Self> {
        Self::with_symmetry(mat, Symmetry::Hermitian)
    }

    /// Wrap a matrix that must be skew-Hermitian to FLAG_TOL·n.
    pub fn skew_hermitian(mat: DMatrix<C64>) -> Result<Self> {
        Self::with_symmetry(mat, Symmetry::SkewHermitian)
    }

    /// Wrap a matrix with no symmetry claim.
    pub fn general(mat: DMatrix<C64>) -> Self {
        assert_eq!(mat.nrows(), mat.ncols(), "operator must be square");
        HermitianOperator {
            mat,
            symmetry: Symmetry::General,
        }
    }

    pub fn with_symmetry(mat: DMatrix<C64>, symmetry: Symmetry) -> Result<Self> {
        assert_eq!(mat.nrows(), mat.ncols(), "operator must be square");
        // f64::max drops NaN operands, so non-finite entries would slip
        // through the defect check and surface later as eigensolver panics
        if !mat.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::InvalidParameter(
                "operator entries must be finite".into(),
            ));
        }
        let n = mat.nrows() as f64;
        let defect = match symmetry {
            Symmetry::Hermitian => max_abs(&(&mat - mat.adjoint())),
            Symmetry::SkewHermitian => max_abs(&(&mat + mat.adjoint())),
            Symmetry::General => 0.0,
        };
        // tolerance scales with the entry magnitude so large-norm operators
        // (A₃² grows like N²/4) are not rejected over matmul roundoff
        let tol = FLAG_TOL * n * max_abs(&mat).max(1.0);
        if defect > tol {
            return Err(Error::NumericalConsistency(format!(
                "{symmetry:?} flag inconsistent: defect {defect:.3e} exceeds {tol:.3e}"
            )));
        }
        Ok(HermitianOperator { mat, symmetry })
    }

    pub fn identity(n: usize) -> Self {
        HermitianOperator {
            mat: DMatrix::identity(n, n),
            symmetry: Symmetry::Hermitian,
        }
    }

    /// Real diagonal matrix; always Hermitian.
    pub fn real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mat = DMatrix::from_fn(n, n, |r, c| {
            if r == c {
                C64::new(diag[r], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        HermitianOperator {
            mat,
            symmetry: Symmetry::Hermitian,
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.mat
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.mat)
    }

    /// max|A − A†|, zero for an exactly Hermitian matrix.
    pub fn hermiticity_defect(&self) -> f64 {
        max_abs(&(&self.mat - self.mat.adjoint()))
    }

    /// max|A + A†|, zero for an exactly skew-Hermitian matrix.
    pub fn skew_defect(&self) -> f64 {
        max_abs(&(&self.mat + self.mat.adjoint()))
    }

    /// Measure the symmetry class instead of trusting the flag.
    pub fn measured_symmetry(&self, tol: f64) -> Symmetry {
        let n = self.dim() as f64;
        if self.hermiticity_defect() <= tol * n {
            Symmetry::Hermitian
        } else if self.skew_defect() <= tol * n {
            Symmetry::SkewHermitian
        } else {
            Symmetry::General
        }
    }

    pub fn adjoint(&self) -> Self {
        HermitianOperator {
            mat: self.mat.adjoint(),
            symmetry: self.symmetry,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let symmetry = if self.symmetry == other.symmetry {
            self.symmetry
        } else {
            Symmetry::General
        };
        Ok(HermitianOperator {
            mat: &self.mat + &other.mat,
            symmetry,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let symmetry = if self.symmetry == other.symmetry {
            self.symmetry
        } else {
            Symmetry::General
        };
        Ok(HermitianOperator {
            mat: &self.mat - &other.mat,
            symmetry,
        })
    }

    /// Scale by a complex factor. A real factor preserves the class, a purely
    /// imaginary one swaps Hermitian ↔ skew-Hermitian.
    pub fn scale(&self, factor: C64) -> Self {
        let symmetry = if factor.im == 0.0 {
            self.symmetry
        } else if factor.re == 0.0 {
            match self.symmetry {
                Symmetry::Hermitian => Symmetry::SkewHermitian,
                Symmetry::SkewHermitian => Symmetry::Hermitian,
                Symmetry::General => Symmetry::General,
            }
        } else {
            Symmetry::General
        };
        HermitianOperator {
            mat: self.mat.map(|z| z * factor),
            symmetry,
        }
    }

    /// Plain product; carries no symmetry in general.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(HermitianOperator {
            mat: &self.mat * &other.mat,
            symmetry: Symmetry::General,
        })
    }

    /// A·A. Hermitian whenever A is Hermitian or skew-Hermitian.
    pub fn square(&self) -> Self {
        let symmetry = match self.symmetry {
            Symmetry::Hermitian | Symmetry::SkewHermitian => Symmetry::Hermitian,
            Symmetry::General => Symmetry::General,
        };
        HermitianOperator {
            mat: &self.mat * &self.mat,
            symmetry,
        }
    }

    pub fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        &self.mat * v
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::InvalidParameter(format!(
                "dimension mismatch: {} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(())
    }

    /// Hermitian eigendecomposition, eigenvalues ascending.
    ///
    /// Requires the Hermitian flag; the flag check at construction is what
    /// licenses handing the matrix to a symmetric solver.
    pub fn eigh(&self) -> Result<EigenDecomposition> {
        if self.symmetry != Symmetry::Hermitian {
            return Err(Error::InvalidParameter(
                "eigendecomposition requires a Hermitian operator".into(),
            ));
        }
        let se = self.mat.clone().symmetric_eigen();
        let n = self.dim();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| se.eigenvalues[a].partial_cmp(&se.eigenvalues[b]).unwrap());
        let eigenvalues: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
        let mut eigenvectors = DMatrix::<C64>::zeros(n, n);
        for (col, &i) in order.iter().enumerate() {
            eigenvectors.set_column(col, &se.eigenvectors.column(i));
        }
        Ok(EigenDecomposition {
            eigenvalues,
            eigenvectors,
        })
    }

    /// Principal square root of a positive-semidefinite Hermitian operator.
    ///
    /// Eigenvalues within ±clamp_tol of zero are treated as roundoff images
    /// of an exact zero and clamped to zero (the square root would otherwise
    /// blow a 1e−17 perturbation up to 1e−8.5); anything below −clamp_tol is
    /// a genuine consistency failure.
    pub fn sqrt_psd(&self, clamp_tol: f64) -> Result<Self> {
        let eig = self.eigh()?;
        let mut roots = Vec::with_capacity(eig.eigenvalues.len());
        for &ev in &eig.eigenvalues {
            if ev < -clamp_tol {
                return Err(Error::NumericalConsistency(format!(
                    "matrix is indefinite: eigenvalue {ev:.3e} below clamp tolerance {:.1e}",
                    -clamp_tol
                )));
            }
            roots.push(if ev <= clamp_tol { 0.0 } else { ev.sqrt() });
        }
        let v = &eig.eigenvectors;
        let lam = DMatrix::from_fn(roots.len(), roots.len(), |r, c| {
            if r == c {
                C64::new(roots[r], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let mat = v * lam * v.adjoint();
        Ok(HermitianOperator {
            mat,
            symmetry: Symmetry::Hermitian,
        })
    }

    /// Row-major dump as [re, im] pairs, for debugging output.
    pub fn to_row_major_pairs(&self) -> Vec<Vec<[f64; 2]>> {
        (0..self.dim())
            .map(|r| (0..self.dim()).map(|c| [self.mat[(r, c)].re, self.mat[(r, c)].im]).collect())
            .collect()
    }
}

/// Result of [`HermitianOperator::eigh`]: real eigenvalues ascending, with
/// matching orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<C64>,
}

/// AB − BA (or AB + BA with `anti`).
///
/// The symmetry of the result follows from the factors: a commutator of two
/// Hermitian (or two skew-Hermitian) operators is skew-Hermitian, their
/// anticommutator is Hermitian; mixing one of each swaps the rule. The
/// result is projected onto its symmetry class, which removes the matmul
/// roundoff that would otherwise leave a spurious defect of order
/// eps·n·‖A‖‖B‖.
pub fn commutator(
    a: &HermitianOperator,
    b: &HermitianOperator,
    anti: bool,
) -> Result<HermitianOperator> {
    if a.dim() != b.dim() {
        return Err(Error::InvalidParameter(format!(
            "dimension mismatch: {} vs {}",
            a.dim(),
            b.dim()
        )));
    }
    let mat = if anti {
        a.matrix() * b.matrix() + b.matrix() * a.matrix()
    } else {
        a.matrix() * b.matrix() - b.matrix() * a.matrix()
    };
    use Symmetry::*;
    let symmetry = match (a.symmetry(), b.symmetry(), anti) {
        (Hermitian, Hermitian, false) | (SkewHermitian, SkewHermitian, false) => SkewHermitian,
        (Hermitian, Hermitian, true) | (SkewHermitian, SkewHermitian, true) => Hermitian,
        (Hermitian, SkewHermitian, false) | (SkewHermitian, Hermitian, false) => Hermitian,
        (Hermitian, SkewHermitian, true) | (SkewHermitian, Hermitian, true) => SkewHermitian,
        _ => General,
    };
    let mat = match symmetry {
        Hermitian => (&mat + mat.adjoint()).map(|z| z * 0.5),
        SkewHermitian => (&mat - mat.adjoint()).map(|z| z * 0.5),
        General => mat,
    };
    HermitianOperator::with_symmetry(mat, symmetry)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pauli_over_two() -> (HermitianOperator, HermitianOperator, HermitianOperator) {
        let sx = DMatrix::from_row_slice(2, 2, &[
            C64::new(0.0, 0.0), C64::new(0.5, 0.0),
            C64::new(0.5, 0.0), C64::new(0.0, 0.0),
        ]);
        let sy = DMatrix::from_row_slice(2, 2, &[
            C64::new(0.0, 0.0), C64::new(0.0, -0.5),
            C64::new(0.0, 0.5), C64::new(0.0, 0.0),
        ]);
        let sz = DMatrix::from_row_slice(2, 2, &[
            C64::new(0.5, 0.0), C64::new(0.0, 0.0),
            C64::new(0.0, 0.0), C64::new(-0.5, 0.0),
        ]);
        (
            HermitianOperator::hermitian(sx).unwrap(),
            HermitianOperator::hermitian(sy).unwrap(),
            HermitianOperator::hermitian(sz).unwrap(),
        )
    }

    #[test]
    fn commutator_of_paulis_is_i_jz() {
        let (jx, jy, jz) = pauli_over_two();
        let c = commutator(&jx, &jy, false).unwrap();
        assert_eq!(c.symmetry(), Symmetry::SkewHermitian);
        let expected = jz.scale(C64::new(0.0, 1.0));
        assert!(c.sub(&expected).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn commutator_with_itself_vanishes() {
        let (jx, _, _) = pauli_over_two();
        let c = commutator(&jx, &jx, false).unwrap();
        assert_eq!(c.max_abs(), 0.0);
    }

    #[test]
    fn anticommutator_of_jz_is_twice_square() {
        let (_, _, jz) = pauli_over_two();
        let a = commutator(&jz, &jz, true).unwrap();
        assert_eq!(a.symmetry(), Symmetry::Hermitian);
        // 2 Jz² = diag(1/2, 1/2)
        for k in 0..2 {
            assert!((a.matrix()[(k, k)].re - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let (jx, _, _) = pauli_over_two();
        let id3 = HermitianOperator::identity(3);
        assert!(commutator(&jx, &id3, false).is_err());
    }

    #[test]
    fn flag_consistency_enforced() {
        let bad = DMatrix::from_row_slice(2, 2, &[
            C64::new(0.0, 0.0), C64::new(1.0, 0.0),
            C64::new(0.0, 0.0), C64::new(0.0, 0.0),
        ]);
        assert!(HermitianOperator::hermitian(bad.clone()).is_err());
        assert!(HermitianOperator::skew_hermitian(bad).is_err());
    }

    #[test]
    fn scale_by_i_swaps_class() {
        let (jx, _, _) = pauli_over_two();
        let s = jx.scale(C64::new(0.0, 1.0));
        assert_eq!(s.symmetry(), Symmetry::SkewHermitian);
        assert!(s.skew_defect() < 1e-15);
    }

    #[test]
    fn eigh_matches_known_spectrum() {
        let (jx, _, _) = pauli_over_two();
        let eig = jx.eigh().unwrap();
        assert!((eig.eigenvalues[0] + 0.5).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - 0.5).abs() < 1e-14);
        // reconstruction
        let n = 2;
        let lam = DMatrix::from_fn(n, n, |r, c| {
            if r == c { C64::new(eig.eigenvalues[r], 0.0) } else { C64::new(0.0, 0.0) }
        });
        let recon = &eig.eigenvectors * lam * eig.eigenvectors.adjoint();
        assert!(max_abs(&(recon - jx.matrix())) < 1e-14);
    }

    #[test]
    fn non_finite_entries_rejected() {
        let nan = DMatrix::from_element(2, 2, C64::new(f64::NAN, 0.0));
        assert!(HermitianOperator::hermitian(nan).is_err());
        let inf = DMatrix::from_element(2, 2, C64::new(0.0, f64::INFINITY));
        assert!(HermitianOperator::skew_hermitian(inf).is_err());
    }

    #[test]
    fn eigh_requires_the_hermitian_flag() {
        let (jx, _, _) = pauli_over_two();
        let skewed = jx.scale(C64::new(0.0, 1.0));
        assert!(skewed.eigh().is_err());
        assert!(HermitianOperator::general(skewed.matrix().clone())
            .eigh()
            .is_err());
    }

    #[test]
    fn sqrt_psd_clamps_roundoff_and_rejects_indefinite() {
        let m = HermitianOperator::real_diagonal(&[4.0, -5e-11, 1.0]);
        let s = m.sqrt_psd(1e-10).unwrap();
        assert!((s.matrix()[(0, 0)].re - 2.0).abs() < 1e-12);
        assert_eq!(s.matrix()[(1, 1)].re, 0.0);

        let bad = HermitianOperator::real_diagonal(&[4.0, -1e-6]);
        assert!(bad.sqrt_psd(1e-10).is_err());
    }

    #[test]
    fn row_major_dump_serializes_to_json() {
        let (jx, _, _) = pauli_over_two();
        let rows = jx.to_row_major_pairs();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0][1], [0.5, 0.0]);
        let v = serde_json::to_value(&rows).unwrap();
        assert_eq!(v[0][1][0], 0.5);
        assert_eq!(v[1][0][1], 0.0);
    }
}
