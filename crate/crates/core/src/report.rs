//! Evaluated closed-form bounds with their formulas and inputs echoed, so
//! every value can be recomputed from the report alone.
//!
//! Formulas use a small expression vocabulary: `+ - * / ^`, parentheses,
//! input names, and the functions `exp`, `ln`, `sqrt`. Existential
//! constants that a statement leaves unspecified enter the inputs
//! explicitly (typically as 1) and are flagged, never silently resolved.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundItem {
    pub name: String,
    pub formula: String,
    pub inputs: BTreeMap<String, f64>,
    pub value: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FlagStatus {
    Satisfied,
    Violated,
    Unknown,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RegimeFlag {
    pub name: String,
    pub status: FlagStatus,
    pub note: String,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct BoundReport {
    pub items: Vec<BoundItem>,
    pub flags: Vec<RegimeFlag>,
}

impl BoundReport {
    pub fn push_item<const N: usize>(
        &mut self,
        name: &str,
        formula: &str,
        inputs: [(&str, f64); N],
        value: f64,
    ) {
        self.items.push(BoundItem {
            name: name.to_string(),
            formula: formula.to_string(),
            inputs: inputs
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect(),
            value,
        });
    }

    pub fn push_flag(&mut self, name: &str, status: FlagStatus, note: &str) {
        self.flags.push(RegimeFlag {
            name: name.to_string(),
            status,
            note: note.to_string(),
        });
    }

    pub fn item(&self, name: &str) -> Option<&BoundItem> {
        self.items.iter().find(|i| i.name == name)
    }

    pub fn flag(&self, name: &str) -> Option<&RegimeFlag> {
        self.flags.iter().find(|f| f.name == name)
    }

    /// True when no flagged hypothesis is violated.
    pub fn hypotheses_hold(&self) -> bool {
        self.flags.iter().all(|f| f.status != FlagStatus::Violated)
    }
}
