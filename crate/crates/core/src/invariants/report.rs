use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::tolerances::Tolerances;

/// A named real invariant with its rounding, the defects of the input it was
/// computed from, and the tolerances in force.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub name: String,
    pub value: f64,
    pub rounded: Option<i64>,
    pub is_integer: bool,
    pub defect_data: BTreeMap<String, f64>,
    pub tolerances: BTreeMap<String, f64>,
}

impl InvariantReport {
    pub fn new(name: &str, value: f64, tol: &Tolerances) -> Self {
        InvariantReport {
            name: name.to_string(),
            value,
            rounded: None,
            is_integer: false,
            defect_data: BTreeMap::new(),
            tolerances: tol.to_map(),
        }
    }

    pub fn defect(&mut self, key: &str, value: f64) -> &mut Self {
        self.defect_data.insert(key.to_string(), value);
        self
    }

    /// The rounded value when the report is integral.
    pub fn integer(&self) -> Option<i64> {
        if self.is_integer {
            self.rounded
        } else {
            None
        }
    }
}
