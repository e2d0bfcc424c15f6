//! Least-squares closure analysis of f f′ = α + βp + γf.
//!
//! For an even deformation function the α and γ coefficients must vanish
//! (substituting p → −p flips their sign but not β's), so fitting f f′ onto
//! span{1, p, f} over a symmetric sample grid operationalizes the evenness
//! theorem: inside the family f = √(c + βp²) the fit recovers (0, β, 0) to
//! roundoff, and any function outside the family betrays itself through the
//! residual.

use crate::deformation::{DeformationSpec, Family};
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// Fitted closure coefficients over the sample grid.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ClosureFit {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// Root-mean-square of f f′ − α − βp − γf over the grid.
    pub residual: f64,
    /// Sample abscissae the fit used.
    pub grid: Vec<f64>,
    /// Set when collinear columns were dropped (e.g. f ≡ const makes
    /// {1, f} collinear) and the minimum-norm solution was returned.
    pub reduced_basis: bool,
}

/// Relative singular-value cutoff for the rank decision.
const RANK_RTOL: f64 = 1e-12;

/// Fit f f′ onto span{1, p, f} at `m` symmetric interior samples
/// (parametric families; tabulated specs use their own samples with the
/// derivative taken by a centered 4th-order stencil, edges trimmed).
pub fn fit_closure_coefficients(spec: &DeformationSpec, m: usize) -> Result<ClosureFit> {
    if m < 50 {
        return Err(Error::InvalidParameter(format!(
            "need at least 50 sample points, got {m}"
        )));
    }
    spec.validate()?;

    let (grid, f_vals, y_vals): (Vec<f64>, Vec<f64>, Vec<f64>) = match spec.family() {
        Family::Tabulated => {
            let samples = spec.tabulated_samples().unwrap();
            if samples.len() < 54 {
                return Err(Error::InvalidParameter(format!(
                    "tabulated closure fit needs at least 54 samples (50 interior), got {}",
                    samples.len()
                )));
            }
            let h = samples[1].0 - samples[0].0;
            let n = samples.len();
            let mut grid = Vec::with_capacity(n - 4);
            let mut f_vals = Vec::with_capacity(n - 4);
            let mut y_vals = Vec::with_capacity(n - 4);
            for i in 2..n - 2 {
                let fp = (-samples[i + 2].1 + 8.0 * samples[i + 1].1 - 8.0 * samples[i - 1].1
                    + samples[i - 2].1)
                    / (12.0 * h);
                grid.push(samples[i].0);
                f_vals.push(samples[i].1);
                y_vals.push(samples[i].1 * fp);
            }
            (grid, f_vals, y_vals)
        }
        _ => {
            // symmetric window: 95% of a bounded domain, [−2, 2] otherwise
            let a = spec.domain_bound();
            let w = if a.is_finite() { 0.95 * a } else { 2.0 };
            let mut grid = Vec::with_capacity(m);
            for i in 0..m {
                // exact ± pairs: integer numerators are odd-symmetric
                let k = 2 * i as i64 - (m as i64 - 1);
                grid.push(k as f64 / (m as f64 - 1.0) * w);
            }
            let f_vals: Vec<f64> = grid.iter().map(|&p| spec.f(p)).collect();
            let y_vals: Vec<f64> = grid
                .iter()
                .map(|&p| spec.ff_prime(p).expect("parametric family"))
                .collect();
            (grid, f_vals, y_vals)
        }
    };

    for (&p, &f) in grid.iter().zip(&f_vals) {
        if !(f > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "deformation must be positive on the sample grid, f({p}) = {f}"
            )));
        }
    }

    let rows = grid.len();
    let mut design = DMatrix::<f64>::zeros(rows, 3);
    for i in 0..rows {
        design[(i, 0)] = 1.0;
        design[(i, 1)] = grid[i];
        design[(i, 2)] = f_vals[i];
    }
    let y = DVector::from_vec(y_vals);

    // column scaling, then a minimum-norm solve through the thin SVD
    let mut scales = [0.0f64; 3];
    for (c, scale) in scales.iter_mut().enumerate() {
        *scale = design.column(c).norm();
        if *scale == 0.0 {
            *scale = 1.0;
        }
    }
    let scaled = DMatrix::<f64>::from_fn(rows, 3, |r, c| design[(r, c)] / scales[c]);
    let svd = scaled.svd(true, true);
    let max_sv = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    let cutoff = RANK_RTOL * max_sv;
    let dropped = svd.singular_values.iter().filter(|&&s| s <= cutoff).count();
    let solution = svd.solve(&y, cutoff).map_err(|e| {
        Error::NumericalConsistency(format!("least-squares solve failed: {e}"))
    })?;
    let coeffs = [
        solution[0] / scales[0],
        solution[1] / scales[1],
        solution[2] / scales[2],
    ];

    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::NumericalConsistency(format!(
            "closure fit produced non-finite coefficients {coeffs:?}"
        )));
    }

    let mut ss = 0.0;
    for i in 0..rows {
        let fit = coeffs[0] + coeffs[1] * grid[i] + coeffs[2] * f_vals[i];
        let r = y[i] - fit;
        ss += r * r;
    }
    let residual = (ss / rows as f64).sqrt();

    Ok(ClosureFit {
        alpha: coeffs[0],
        beta: coeffs[1],
        gamma: coeffs[2],
        residual,
        grid,
        reduced_basis: dropped > 0,
    })
}
