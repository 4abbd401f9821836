//! Tabular scan output shared by the asymptotic and normality scans.

use serde::{Deserialize, Serialize};

/// One row: a key (an `ε` or an `N`) and one value per column. A row that could
/// not be computed carries `None` values and a note.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub key: String,
    pub values: Vec<Option<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub key: String,
    pub columns: Vec<String>,
    pub rows: Vec<ScanRow>,
}

impl ScanReport {
    pub fn new(key: &str, columns: &[&str]) -> Self {
        ScanReport { key: key.to_string(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, key: impl Into<String>, values: Vec<f64>) {
        debug_assert_eq!(values.len(), self.columns.len());
        self.rows.push(ScanRow { key: key.into(), values: values.into_iter().map(Some).collect(), note: None });
    }

    pub fn push_skipped(&mut self, key: impl Into<String>, note: impl Into<String>) {
        self.rows.push(ScanRow { key: key.into(), values: vec![None; self.columns.len()], note: Some(note.into()) });
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Values of one column over the computed rows.
    pub fn column(&self, name: &str) -> Vec<f64> {
        let Some(i) = self.column_index(name) else { return Vec::new() };
        self.rows.iter().filter_map(|r| r.values[i]).collect()
    }

    /// `max / min` of a column over the computed rows.
    pub fn spread(&self, name: &str) -> f64 {
        let v = self.column(name);
        let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = v.iter().copied().fold(f64::INFINITY, f64::min);
        max / min
    }
}
