//! Verification reports: deterministic aggregation of scenario results,
//! fixed-width table and JSON rendering, and the directory runner.

use super::runner::{parse_scenario, run_scenario, ScenarioError};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "match")]
    Match,
    #[serde(rename = "mismatch")]
    Mismatch,
    #[serde(rename = "flagged")]
    Flagged,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Match => "match",
            Verdict::Mismatch => "mismatch",
            Verdict::Flagged => "flagged",
        };
        write!(f, "{}", s)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportEntry {
    pub id: String,
    pub kind: String,
    pub computed: String,
    pub expected: String,
    pub verdict: Verdict,
    pub provenance: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flag_note: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub entries: Vec<ReportEntry>,
    pub matches: usize,
    pub mismatches: usize,
    pub flagged: usize,
}

impl Report {
    pub fn from_entries(mut entries: Vec<ReportEntry>) -> Report {
        entries.sort_by(|a, b| a.id.cmp(&b.id));
        let matches = entries.iter().filter(|e| e.verdict == Verdict::Match).count();
        let mismatches = entries
            .iter()
            .filter(|e| e.verdict == Verdict::Mismatch)
            .count();
        let flagged = entries
            .iter()
            .filter(|e| e.verdict == Verdict::Flagged)
            .count();
        Report {
            entries,
            matches,
            mismatches,
            flagged,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.mismatches == 0 {
            0
        } else {
            1
        }
    }

    /// Fixed-width table, byte-identical across runs and thread counts.
    pub fn render_table(&self) -> String {
        let mut id_w = "scenario".len();
        let mut comp_w = "computed".len();
        let mut exp_w = "expected".len();
        for e in &self.entries {
            id_w = id_w.max(e.id.len());
            comp_w = comp_w.max(display_width(&e.computed));
            exp_w = exp_w.max(display_width(&e.expected));
        }
        comp_w = comp_w.min(44);
        exp_w = exp_w.min(44);
        let mut out = String::new();
        out.push_str(&format!(
            "{:<id$}  {:<8}  {:<cw$}  {:<ew$}  provenance\n",
            "scenario",
            "verdict",
            "computed",
            "expected",
            id = id_w,
            cw = comp_w,
            ew = exp_w
        ));
        out.push_str(&format!(
            "{}  {}  {}  {}  {}\n",
            "-".repeat(id_w),
            "-".repeat(8),
            "-".repeat(comp_w),
            "-".repeat(exp_w),
            "-".repeat(10)
        ));
        for e in &self.entries {
            out.push_str(&format!(
                "{:<id$}  {:<8}  {:<cw$}  {:<ew$}  {}\n",
                e.id,
                e.verdict.to_string(),
                clip(&e.computed, comp_w),
                clip(&e.expected, exp_w),
                e.provenance,
                id = id_w,
                cw = comp_w,
                ew = exp_w
            ));
            if let Some(note) = &e.flag_note {
                out.push_str(&format!(
                    "{:<id$}  {:<8}  source reads: {}\n",
                    "",
                    "",
                    note,
                    id = id_w
                ));
            }
        }
        out.push_str(&format!(
            "\n{} scenarios: {} match, {} flagged, {} mismatch\n",
            self.entries.len(),
            self.matches,
            self.flagged,
            self.mismatches
        ));
        out
    }

    pub fn render_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn display_width(s: &str) -> usize {
    s.chars().count().min(44)
}

fn clip(s: &str, w: usize) -> String {
    let n = s.chars().count();
    if n <= w {
        return s.to_string();
    }
    let cut: String = s.chars().take(w.saturating_sub(3)).collect();
    format!("{}...", cut)
}

/// Runs a single scenario file.
pub fn run_file(path: &Path) -> Result<ReportEntry, ScenarioError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ScenarioError::Io(path.display().to_string(), e.to_string()))?;
    let file = parse_scenario(&path.display().to_string(), &text)?;
    run_scenario(&file)
}

/// Runs every `.json` scenario in the directory, in parallel, and
/// aggregates a deterministic report ordered by scenario id.
pub fn verify_all(dir: &Path, threads: usize) -> Result<Report, ScenarioError> {
    let mut paths: Vec<std::path::PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| ScenarioError::Io(dir.display().to_string(), e.to_string()))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().map(|e| e == "json").unwrap_or(false))
        .collect();
    paths.sort();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .expect("thread pool");
    let entries: Result<Vec<ReportEntry>, ScenarioError> = pool.install(|| {
        use rayon::prelude::*;
        paths.par_iter().map(|p| run_file(p)).collect()
    });
    Ok(Report::from_entries(entries?))
}
