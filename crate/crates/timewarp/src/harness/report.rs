//! Success-rate aggregation: by environment, by version, and overall.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::taskset::TaskEnv;
use crate::types::Version;

use super::episode::Trajectory;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportCell {
    pub total: usize,
    pub success: usize,
}

impl ReportCell {
    pub fn add(&mut self, reward: u8) {
        self.total += 1;
        self.success += usize::from(reward == 1);
    }

    /// Success rate in percent, one decimal.
    pub fn rate(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            (self.success as f64 * 1000.0 / self.total as f64).round() / 10.0
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SuccessReport {
    pub by_env: BTreeMap<String, ReportCell>,
    pub by_version: BTreeMap<String, ReportCell>,
    pub overall: ReportCell,
}

pub fn report(trajectories: &[Trajectory]) -> SuccessReport {
    let mut out = SuccessReport::default();
    for env in [TaskEnv::Wiki, TaskEnv::News, TaskEnv::Shop, TaskEnv::Multi] {
        out.by_env.insert(env.name().to_string(), ReportCell::default());
    }
    for version in Version::ALL {
        out.by_version.insert(version.name().to_string(), ReportCell::default());
    }
    for t in trajectories {
        out.by_env.entry(t.meta.env.name().to_string()).or_default().add(t.reward);
        out.by_version.entry(t.version.name().to_string()).or_default().add(t.reward);
        out.overall.add(t.reward);
    }
    out
}

impl SuccessReport {
    /// Fixed-width table: environments, versions, then the overall rate.
    pub fn render_text(&self) -> String {
        let mut lines = Vec::new();
        lines.push(format!("{:<10} {:>7} {:>9}", "group", "n", "success"));
        for (name, cell) in &self.by_env {
            lines.push(format!("{:<10} {:>7} {:>8.1}%", name, cell.total, cell.rate()));
        }
        for (name, cell) in &self.by_version {
            lines.push(format!("{:<10} {:>7} {:>8.1}%", name, cell.total, cell.rate()));
        }
        lines.push(format!(
            "{:<10} {:>7} {:>8.1}%",
            "overall",
            self.overall.total,
            self.overall.rate()
        ));
        lines.join("\n")
    }
}
