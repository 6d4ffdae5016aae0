//! Numerical tolerances shared by every module.
//!
//! Each report embeds the tolerances it was computed with, so a result can
//! always be reproduced from its JSON alone.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Bound on `|m*m - 1|` accepted when constructing a unitary.
    pub unitarity: f64,
    /// Bound on `|h - h*|` accepted by Hermitian routines.
    pub hermiticity: f64,
    /// Clustering width for degenerate eigenvalues of `(w + w*)/2`.
    pub cluster: f64,
    /// Minimum distance of a spectrum from -1 for the principal logarithm.
    pub branch_margin: f64,
    /// Maximal distance to the nearest integer for an integral invariant.
    pub integer: f64,
    /// `|det(w) - 1|` below which the trace logarithm is declared integral.
    pub det_integral: f64,
    /// `|det(w) - 1|` below which the determinant path counts as a loop.
    pub loop_closure: f64,
    /// `|det|` below which a sampled determinant is considered singular.
    pub path_singular: f64,
    pub winding_initial_samples: usize,
    pub winding_max_depth: usize,
    pub exel_samples: usize,
    pub homotopy_samples: usize,
    pub projection_threshold: f64,
    pub spectral_gap: f64,
    pub max_bott_defect: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            unitarity: 1e-8,
            hermiticity: 1e-8,
            cluster: 1e-7,
            branch_margin: 1e-6,
            integer: 1e-6,
            det_integral: 1e-8,
            loop_closure: 1e-6,
            path_singular: 1e-12,
            winding_initial_samples: 64,
            winding_max_depth: 40,
            exel_samples: 257,
            homotopy_samples: 65,
            projection_threshold: 0.5,
            spectral_gap: 0.1,
            max_bott_defect: 0.125,
        }
    }
}

impl Tolerances {
    /// Flat name → value view used in reports.
    pub fn to_map(&self) -> BTreeMap<String, f64> {
        let value = serde_json::to_value(self).expect("tolerances serialize");
        value
            .as_object()
            .expect("tolerances are a JSON object")
            .iter()
            .filter_map(|(k, v)| v.as_f64().map(|x| (k.clone(), x)))
            .collect()
    }

    /// Override a single field by name, e.g. `("branch_margin", "1e-4")`.
    /// Accepts dashes in place of underscores.
    pub fn set(&mut self, name: &str, value: &str) -> Result<()> {
        let key = name.replace('-', "_");
        let mut json = serde_json::to_value(&*self)?;
        let obj = json.as_object_mut().expect("tolerances are a JSON object");
        let slot = obj
            .get_mut(&key)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown tolerance `{name}`")))?;
        let new = if slot.is_u64() {
            let v: usize = value
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("`{value}` is not a count")))?;
            serde_json::Value::from(v)
        } else {
            let v: f64 = value
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("`{value}` is not a number")))?;
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "tolerance `{name}` must be finite and non-negative"
                )));
            }
            serde_json::Value::from(v)
        };
        *slot = new;
        *self = serde_json::from_value(json)?;
        Ok(())
    }

    /// Apply `QREP_TOL_<NAME>` environment overrides (e.g. `QREP_TOL_BRANCH_MARGIN`).
    pub fn apply_env(&mut self) -> Result<()> {
        for (k, v) in std::env::vars() {
            if let Some(name) = k.strip_prefix("QREP_TOL_") {
                self.set(&name.to_ascii_lowercase(), &v)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_by_name() {
        let mut t = Tolerances::default();
        t.set("branch-margin", "1e-4").unwrap();
        assert_eq!(t.branch_margin, 1e-4);
        t.set("exel_samples", "513").unwrap();
        assert_eq!(t.exel_samples, 513);
        assert!(t.set("nope", "1").is_err());
        assert!(t.set("spectral_gap", "abc").is_err());
        assert!(t.set("exel_samples", "0.5").is_err());
    }

    #[test]
    fn map_has_every_field() {
        let m = Tolerances::default().to_map();
        assert_eq!(m.len(), 15);
        assert_eq!(m["max_bott_defect"], 0.125);
    }
}
