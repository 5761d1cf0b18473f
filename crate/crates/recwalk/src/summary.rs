//! Per-replicate experiment summaries.

use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

/// Values of one statistic across replicates, replicate order preserved.
///
/// Serializes to CSV as one `(replicate, value)` row per replicate, or to
/// JSON as moments plus histogram buckets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalSummary {
    pub statistic: String,
    pub values: Vec<f64>,
}

impl EmpiricalSummary {
    pub fn new(statistic: impl Into<String>, values: Vec<f64>) -> Self {
        Self {
            statistic: statistic.into(),
            values,
        }
    }

    pub fn reps(&self) -> usize {
        self.values.len()
    }

    pub fn mean(&self) -> f64 {
        crate::step::kahan_sum(self.values.iter().copied()) / self.values.len() as f64
    }

    pub fn second_moment(&self) -> f64 {
        crate::step::kahan_sum(self.values.iter().map(|v| v * v)) / self.values.len() as f64
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        (self.second_moment() - m * m).max(0.0)
    }

    /// Normalization-free shape statistic `E[X^2] / E[X]^2`.
    pub fn moment_ratio(&self) -> f64 {
        let m = self.mean();
        self.second_moment() / (m * m)
    }

    /// Bucketed counts of the (rounded) values.
    pub fn histogram(&self) -> BTreeMap<i64, u64> {
        let mut hist = BTreeMap::new();
        for &v in &self.values {
            *hist.entry(v.round() as i64).or_insert(0) += 1;
        }
        hist
    }

    /// Merges replicate blocks; summaries merge associatively as long as the
    /// blocks are concatenated in replicate order.
    pub fn merge(mut self, other: EmpiricalSummary) -> EmpiricalSummary {
        self.values.extend(other.values);
        self
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "replicate,{}", self.statistic)?;
        for (i, v) in self.values.iter().enumerate() {
            writeln!(w, "{i},{v}")?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let hist: Vec<serde_json::Value> = self
            .histogram()
            .into_iter()
            .map(|(value, count)| serde_json::json!({"value": value, "count": count}))
            .collect();
        serde_json::json!({
            "statistic": self.statistic,
            "reps": self.reps(),
            "mean": self.mean(),
            "variance": self.variance(),
            "moment_ratio": self.moment_ratio(),
            "histogram": hist,
        })
    }
}
