//! Spectrum comparison reports.

use serde::Serialize;
use std::collections::BTreeMap;

/// Sorted computed eigenvalues against sorted reference values, with
/// per-pair deviations. The context map carries free-form metadata
/// (j, grid size, boundary condition, λ, …).
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub computed: Vec<f64>,
    pub reference: Vec<f64>,
    pub deviations: Vec<f64>,
    pub max_dev: f64,
    pub context: BTreeMap<String, String>,
}

impl SpectrumReport {
    /// Pair up equally long sorted lists.
    pub fn from_pairs(
        computed: Vec<f64>,
        reference: Vec<f64>,
        context: BTreeMap<String, String>,
    ) -> Self {
        assert_eq!(computed.len(), reference.len());
        debug_assert!(computed.windows(2).all(|w| w[0] <= w[1]));
        let deviations: Vec<f64> = computed
            .iter()
            .zip(&reference)
            .map(|(c, r)| (c - r).abs())
            .collect();
        let max_dev = deviations.iter().cloned().fold(0.0, f64::max);
        SpectrumReport {
            computed,
            reference,
            deviations,
            max_dev,
            context,
        }
    }

    /// Group the computed list into degenerate clusters: values closer than
    /// `tol` to their predecessor join the running cluster.
    pub fn computed_degeneracies(&self, tol: f64) -> Vec<(f64, usize)> {
        cluster(&self.computed, tol)
    }
}

pub fn cluster(sorted: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    for &v in sorted {
        match out.last_mut() {
            Some((rep, count)) if (v - *rep).abs() <= tol => *count += 1,
            _ => out.push((v, 1)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_and_max_dev() {
        let r = SpectrumReport::from_pairs(
            vec![0.0, 1.0, 2.5],
            vec![0.0, 1.0, 2.0],
            BTreeMap::new(),
        );
        assert_eq!(r.deviations, vec![0.0, 0.0, 0.5]);
        assert_eq!(r.max_dev, 0.5);
    }

    #[test]
    fn clustering_counts_degeneracies() {
        let groups = cluster(&[0.1, 0.1 + 1e-12, 0.5, 0.9, 0.9, 0.9], 1e-9);
        assert_eq!(groups.len(), 3);
        assert_eq!(groups[0].1, 2);
        assert_eq!(groups[1].1, 1);
        assert_eq!(groups[2].1, 3);
    }

    #[test]
    fn serializes_to_stable_json() {
        let r = SpectrumReport::from_pairs(vec![1.0], vec![1.0], BTreeMap::new());
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["max_dev"], 0.0);
    }

    #[test]
    fn empty_spectrum_is_a_valid_document() {
        let r = SpectrumReport::from_pairs(Vec::new(), Vec::new(), BTreeMap::new());
        assert_eq!(r.max_dev, 0.0);
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["computed"].as_array().unwrap().len(), 0);
    }
}
