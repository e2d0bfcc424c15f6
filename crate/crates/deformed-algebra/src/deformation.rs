//! Deformation functions f(p) and the family closed under linearization.
//!
//! The algebra `[X,P] = if(P)` extends to a linear three-operator algebra
//! exactly when f f′ = βp, whose even positive solutions are
//! f(p) = √(c + βp²). Three parametric families cover the sign of β:
//!
//! * trigonometric, β = −λ² < 0: f = √(c − λ²p²) on |p| < √c/λ,
//! * hyperbolic, β > 0: f = √(c + βp²) on the whole line,
//! * flat, β = 0: f ≡ √c (the undeformed algebra at c = 1).
//!
//! A tabulated variant holds measured (p, f) samples for functions outside
//! the family; those are validated for positivity and evenness on load.

use crate::error::{Error, Result};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Trig,
    Hyper,
    Flat,
    Tabulated,
}

#[derive(Debug, Clone)]
pub enum DeformationSpec {
    /// f = √(c − λ²p²), momentum bounded to |p| < √c/λ.
    Trig { lambda: f64, c: f64 },
    /// f = √(c + βp²) with β > 0; unbounded momentum unless `bound` caps it.
    Hyper { beta: f64, c: f64, bound: Option<f64> },
    /// f ≡ √c; unbounded unless `bound` caps it.
    Flat { c: f64, bound: Option<f64> },
    /// Uniformly spaced samples (p_i, f_i), symmetric about p = 0.
    Tabulated { samples: Vec<(f64, f64)> },
}

impl DeformationSpec {
    pub fn trig(lambda: f64) -> Result<Self> {
        Self::trig_with_c(lambda, 1.0)
    }

    pub fn trig_with_c(lambda: f64, c: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "trig family needs lambda > 0, got {lambda}"
            )));
        }
        if !(c > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "integration constant must be positive, got {c}"
            )));
        }
        Ok(DeformationSpec::Trig { lambda, c })
    }

    pub fn hyper(beta: f64) -> Result<Self> {
        Self::hyper_with_c(beta, 1.0)
    }

    pub fn hyper_with_c(beta: f64, c: f64) -> Result<Self> {
        if !(beta > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "hyper family needs beta > 0, got {beta}"
            )));
        }
        if !(c > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "integration constant must be positive, got {c}"
            )));
        }
        Ok(DeformationSpec::Hyper {
            beta,
            c,
            bound: None,
        })
    }

    pub fn flat() -> Self {
        DeformationSpec::Flat {
            c: 1.0,
            bound: None,
        }
    }

    /// Cap the momentum domain of an unbounded family at |p| ≤ a.
    pub fn with_bound(self, a: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "domain bound must be positive, got {a}"
            )));
        }
        match self {
            DeformationSpec::Hyper { beta, c, .. } => Ok(DeformationSpec::Hyper {
                beta,
                c,
                bound: Some(a),
            }),
            DeformationSpec::Flat { c, .. } => Ok(DeformationSpec::Flat { c, bound: Some(a) }),
            other => Err(Error::InvalidParameter(format!(
                "domain bound override only applies to hyper/flat, not {:?}",
                other.family()
            ))),
        }
    }

    pub fn family(&self) -> Family {
        match self {
            DeformationSpec::Trig { .. } => Family::Trig,
            DeformationSpec::Hyper { .. } => Family::Hyper,
            DeformationSpec::Flat { .. } => Family::Flat,
            DeformationSpec::Tabulated { .. } => Family::Tabulated,
        }
    }

    /// β of the closure equation f f′ = βp (trig: −λ², flat: 0).
    pub fn beta(&self) -> Option<f64> {
        match self {
            DeformationSpec::Trig { lambda, .. } => Some(-lambda * lambda),
            DeformationSpec::Hyper { beta, .. } => Some(*beta),
            DeformationSpec::Flat { .. } => Some(0.0),
            DeformationSpec::Tabulated { .. } => None,
        }
    }

    /// The λ scale of the variable change (trig: λ, hyper: √β).
    pub fn lambda(&self) -> Option<f64> {
        match self {
            DeformationSpec::Trig { lambda, .. } => Some(*lambda),
            DeformationSpec::Hyper { beta, .. } => Some(beta.sqrt()),
            _ => None,
        }
    }

    pub fn c(&self) -> f64 {
        match self {
            DeformationSpec::Trig { c, .. }
            | DeformationSpec::Hyper { c, .. }
            | DeformationSpec::Flat { c, .. } => *c,
            DeformationSpec::Tabulated { .. } => 1.0,
        }
    }

    /// Momentum-domain half-width a (∞ for unbounded families).
    pub fn domain_bound(&self) -> f64 {
        match self {
            DeformationSpec::Trig { lambda, c } => c.sqrt() / lambda,
            DeformationSpec::Hyper { bound, .. } | DeformationSpec::Flat { bound, .. } => {
                bound.unwrap_or(f64::INFINITY)
            }
            DeformationSpec::Tabulated { samples } => samples.last().map(|s| s.0).unwrap_or(0.0),
        }
    }

    /// Evaluate f(p). Tabulated specs interpolate linearly between samples.
    pub fn f(&self, p: f64) -> f64 {
        match self {
            DeformationSpec::Trig { lambda, c } => (c - lambda * lambda * p * p).max(0.0).sqrt(),
            DeformationSpec::Hyper { beta, c, .. } => (c + beta * p * p).sqrt(),
            DeformationSpec::Flat { c, .. } => c.sqrt(),
            DeformationSpec::Tabulated { samples } => interpolate(samples, p),
        }
    }

    /// f f′ in closed form for the parametric families.
    pub fn ff_prime(&self, p: f64) -> Option<f64> {
        self.beta().map(|b| b * p)
    }

    /// Check positivity and evenness by sampling; exact for parametric
    /// families, mirror comparison for tabulated ones.
    pub fn validate(&self) -> Result<()> {
        match self {
            DeformationSpec::Tabulated { samples } => validate_table(samples),
            _ => {
                let a = self.domain_bound();
                let probe = if a.is_finite() { 0.99 * a } else { 3.0 };
                for k in 0..=16 {
                    let p = probe * (k as f64 / 16.0);
                    let (fp, fm) = (self.f(p), self.f(-p));
                    if !(fp > 0.0) {
                        return Err(Error::InvalidParameter(format!(
                            "deformation function is not positive at p = {p}"
                        )));
                    }
                    if (fp - fm).abs() > 1e-12 * fp.abs() {
                        return Err(Error::InvalidParameter(
                            "deformation function is not even".into(),
                        ));
                    }
                }
                Ok(())
            }
        }
    }

    /// Parse the two-column text format: `p  f(p)` per line, `#` comments,
    /// strictly increasing uniformly spaced p symmetric about zero.
    pub fn from_table_str(text: &str) -> Result<Self> {
        let mut samples: Vec<(f64, f64)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut cols = line.split_whitespace();
            let p: f64 = cols
                .next()
                .ok_or(())
                .and_then(|s| s.parse().map_err(|_| ()))
                .map_err(|_| Error::Parse {
                    line: idx + 1,
                    message: format!("expected two numeric columns, got `{line}`"),
                })?;
            let f: f64 = cols
                .next()
                .ok_or(())
                .and_then(|s| s.parse().map_err(|_| ()))
                .map_err(|_| Error::Parse {
                    line: idx + 1,
                    message: format!("expected two numeric columns, got `{line}`"),
                })?;
            if cols.next().is_some() {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: "more than two columns".into(),
                });
            }
            samples.push((p, f));
        }
        validate_table(&samples)?;
        Ok(DeformationSpec::Tabulated { samples })
    }

    pub fn from_table_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_table_str(&text)
    }

    pub fn tabulated_samples(&self) -> Option<&[(f64, f64)]> {
        match self {
            DeformationSpec::Tabulated { samples } => Some(samples),
            _ => None,
        }
    }
}

fn interpolate(samples: &[(f64, f64)], p: f64) -> f64 {
    match samples.binary_search_by(|(pi, _)| pi.partial_cmp(&p).unwrap()) {
        Ok(i) => samples[i].1,
        Err(0) => samples[0].1,
        Err(i) if i >= samples.len() => samples[samples.len() - 1].1,
        Err(i) => {
            let (p0, f0) = samples[i - 1];
            let (p1, f1) = samples[i];
            f0 + (f1 - f0) * (p - p0) / (p1 - p0)
        }
    }
}

fn validate_table(samples: &[(f64, f64)]) -> Result<()> {
    if samples.len() < 5 {
        return Err(Error::InvalidParameter(format!(
            "tabulated deformation needs at least 5 samples, got {}",
            samples.len()
        )));
    }
    for w in samples.windows(2) {
        if w[1].0 <= w[0].0 {
            return Err(Error::InvalidParameter(format!(
                "tabulated p must be strictly increasing ({} then {})",
                w[0].0, w[1].0
            )));
        }
    }
    // uniform spacing, needed by the derivative stencil
    let h = samples[1].0 - samples[0].0;
    for w in samples.windows(2) {
        if ((w[1].0 - w[0].0) - h).abs() > 1e-9 * h.max(1.0) {
            return Err(Error::InvalidParameter(
                "tabulated p samples must be uniformly spaced".into(),
            ));
        }
    }
    // symmetric about zero, needed for the evenness machinery
    let n = samples.len();
    for k in 0..n {
        let (p_lo, f_lo) = samples[k];
        let (p_hi, f_hi) = samples[n - 1 - k];
        if (p_lo + p_hi).abs() > 1e-9 * h.max(1.0) {
            return Err(Error::InvalidParameter(
                "tabulated samples must be symmetric about p = 0".into(),
            ));
        }
        let scale = f_lo.abs().max(f_hi.abs()).max(1.0);
        if (f_lo - f_hi).abs() > 1e-9 * scale {
            return Err(Error::InvalidParameter(format!(
                "tabulated deformation is not even at p = ±{p_hi}"
            )));
        }
    }
    for &(p, f) in samples {
        if !(f > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tabulated deformation must be positive, f({p}) = {f}"
            )));
        }
    }
    Ok(())
}

/// Solve f f′ = βp with f(0) = √c > 0, returning the family member
/// f = √(c + βp²). The ODE residual is re-checked at sampled interior
/// points before the spec is handed back.
pub fn solve_closure_ode(beta: f64, c: f64) -> Result<DeformationSpec> {
    if !(c > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "integration constant must be positive for a positive solution, got c = {c}"
        )));
    }
    let spec = if beta < 0.0 {
        DeformationSpec::Trig {
            lambda: (-beta).sqrt(),
            c,
        }
    } else if beta > 0.0 {
        DeformationSpec::Hyper {
            beta,
            c,
            bound: None,
        }
    } else {
        DeformationSpec::Flat { c, bound: None }
    };
    // self-check: differentiate the returned f numerically and test
    // f f′ = βp. Central differences of f²/2 are exact for this family at
    // any step, so a wide step keeps the subtraction cancellation far below
    // the tolerance while anything structural still flags.
    let a = spec.domain_bound();
    let probe = if a.is_finite() { 0.9 * a } else { 3.0 };
    let h = 0.05 * probe.max(1.0);
    for k in 0..=32 {
        let p = -probe + 2.0 * probe * (k as f64 / 32.0);
        let fp = spec.f(p + h);
        let fm = spec.f(p - h);
        let ff_prime_fd = (fp * fp - fm * fm) / (4.0 * h);
        if (ff_prime_fd - beta * p).abs() > 1e-12 * (1.0 + (beta * p).abs()).max(1.0) {
            return Err(Error::NumericalConsistency(format!(
                "closure ODE residual {:.3e} too large at p = {p}",
                (ff_prime_fd - beta * p).abs()
            )));
        }
    }
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ode_solution_values() {
        let s = solve_closure_ode(0.3, 1.0).unwrap();
        assert!((s.f(1.0) - 1.3f64.sqrt()).abs() < 1e-15);
        assert!((s.f(1.0) - 1.140_175_425_099_138).abs() < 1e-12);

        let flat = solve_closure_ode(0.0, 1.0).unwrap();
        assert_eq!(flat.family(), Family::Flat);
        assert_eq!(flat.f(2.7), 1.0);

        let trig = solve_closure_ode(-0.25, 1.0).unwrap();
        assert_eq!(trig.family(), Family::Trig);
        assert!((trig.domain_bound() - 2.0).abs() < 1e-15);
        assert!((trig.f(0.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn nonpositive_c_rejected() {
        assert!(solve_closure_ode(0.3, 0.0).is_err());
        assert!(solve_closure_ode(0.3, -1.0).is_err());
    }

    #[test]
    fn evenness_and_positivity_validated() {
        DeformationSpec::trig(0.5).unwrap().validate().unwrap();
        DeformationSpec::hyper(1.0).unwrap().validate().unwrap();
        DeformationSpec::flat().validate().unwrap();
    }

    #[test]
    fn table_parsing_and_checks() {
        let text = "# quadratic gup table\n-1.0 1.3\n-0.5 1.075\n0.0 1.0 # center\n0.5 1.075\n1.0 1.3\n";
        let spec = DeformationSpec::from_table_str(text).unwrap();
        assert_eq!(spec.family(), Family::Tabulated);
        assert!((spec.f(0.25) - (1.0 + 1.075) / 2.0).abs() < 1e-12);

        // not even
        let bad = "-1.0 1.3\n-0.5 1.0\n0.0 1.0\n0.5 1.075\n1.0 1.3\n";
        assert!(DeformationSpec::from_table_str(bad).is_err());

        // non-uniform spacing
        let bad = "-1.0 1.3\n-0.4 1.075\n0.0 1.0\n0.4 1.075\n1.0 1.3\n";
        assert!(DeformationSpec::from_table_str(bad).is_err());

        // garbage column
        let bad = "-1.0 1.3\n-0.5 x\n0.0 1.0\n0.5 1.075\n1.0 1.3\n";
        assert!(matches!(
            DeformationSpec::from_table_str(bad),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn domain_bounds() {
        assert!((DeformationSpec::trig(0.5).unwrap().domain_bound() - 2.0).abs() < 1e-15);
        assert!(DeformationSpec::hyper(1.0).unwrap().domain_bound().is_infinite());
        let capped = DeformationSpec::flat().with_bound(2.0).unwrap();
        assert_eq!(capped.domain_bound(), 2.0);
    }
}
