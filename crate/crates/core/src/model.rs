//! State-transition vocabulary shared by every other module: program
//! snapshots, refinement tasks, severity counts, verdicts, and the chain
//! record that serves as the audit trail for one refinement run.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::assimilate::Counterexample;
use crate::frontend::{count_source_loc, DiffStats};
use crate::gate::GateReport;
use crate::orchestrator::ReviewSummary;

/// Source language of a corpus sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Language {
    Python,
    Java,
}

impl Language {
    pub fn from_extension(ext: &str) -> Option<Self> {
        match ext {
            "py" => Some(Language::Python),
            "java" => Some(Language::Java),
            _ => None,
        }
    }

    pub fn extension(&self) -> &'static str {
        match self {
            Language::Python => "py",
            Language::Java => "java",
        }
    }
}

/// One immutable program state in an iteration chain.
///
/// `iteration_index` 0 is the baseline. Every accepted transition produces
/// a brand-new snapshot; nothing mutates in place, so monotonicity can be
/// re-checked after the fact from the record alone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeSnapshot {
    pub source: String,
    pub language: Language,
    pub iteration_index: u32,
    /// Lines of code excluding blanks and comment-only lines.
    pub loc: u32,
    /// Static-analysis severity tally; absent until the snapshot is analyzed.
    pub severity_counts: Option<SeverityCounts>,
}

impl CodeSnapshot {
    pub fn new(source: impl Into<String>, language: Language, iteration_index: u32) -> Self {
        let source = source.into();
        let loc = count_source_loc(&source, language);
        CodeSnapshot {
            source,
            language,
            iteration_index,
            loc,
            severity_counts: None,
        }
    }

    /// Copy of this snapshot with the analysis cache filled in.
    pub fn with_counts(&self, counts: SeverityCounts) -> Self {
        let mut copy = self.clone();
        copy.severity_counts = Some(counts);
        copy
    }

    /// Stable short identifier derived from the source text.
    pub fn content_id(&self) -> String {
        let digest = Sha256::digest(self.source.as_bytes());
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        hex[..12].to_string()
    }
}

/// Refinement strategy driving one task sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    FeatureEnhancement,
    PerformanceOptimization,
    SecurityHardening,
    AmbiguousRequirement,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::FeatureEnhancement,
        Strategy::PerformanceOptimization,
        Strategy::SecurityHardening,
        Strategy::AmbiguousRequirement,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Strategy::FeatureEnhancement => "feature_enhancement",
            Strategy::PerformanceOptimization => "performance_optimization",
            Strategy::SecurityHardening => "security_hardening",
            Strategy::AmbiguousRequirement => "ambiguous_requirement",
        }
    }

    pub fn parse(s: &str) -> Option<Strategy> {
        Strategy::ALL.iter().copied().find(|v| v.as_str() == s)
    }
}

/// Security scenario category of a corpus sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    Database,
    Input,
    Authentication,
    Resources,
    Cryptography,
    Path,
}

impl Category {
    pub const ALL: [Category; 6] = [
        Category::Database,
        Category::Input,
        Category::Authentication,
        Category::Resources,
        Category::Cryptography,
        Category::Path,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Category::Database => "database",
            Category::Input => "input",
            Category::Authentication => "authentication",
            Category::Resources => "resources",
            Category::Cryptography => "cryptography",
            Category::Path => "path",
        }
    }

    pub fn parse(s: &str) -> Option<Category> {
        Category::ALL.iter().copied().find(|v| v.as_str() == s)
    }
}

/// One refinement instruction handed to the generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinementTask {
    pub description: String,
    pub strategy: Strategy,
    pub category: Category,
}

/// Static-analysis finding tally by severity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SeverityCounts {
    pub critical: u32,
    pub high: u32,
    pub medium: u32,
    pub low: u32,
}

impl SeverityCounts {
    pub fn new(critical: u32, high: u32, medium: u32, low: u32) -> Self {
        SeverityCounts {
            critical,
            high,
            medium,
            low,
        }
    }

    pub fn total(&self) -> u32 {
        self.critical + self.high + self.medium + self.low
    }

    /// Critical + High, the scope used for delta-CH gating.
    pub fn ch_total(&self) -> u32 {
        self.critical + self.high
    }

    pub fn for_scope(&self, scope: SeverityScope) -> u32 {
        match scope {
            SeverityScope::All => self.total(),
            SeverityScope::CriticalHigh => self.ch_total(),
        }
    }
}

/// Which severities count toward the vulnerability measure V.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeverityScope {
    All,
    CriticalHigh,
}

impl SeverityScope {
    pub fn as_str(&self) -> &'static str {
        match self {
            SeverityScope::All => "all",
            SeverityScope::CriticalHigh => "critical_high",
        }
    }

    pub fn parse(s: &str) -> Option<SeverityScope> {
        match s {
            "all" => Some(SeverityScope::All),
            "critical_high" | "ch" => Some(SeverityScope::CriticalHigh),
            _ => None,
        }
    }
}

/// Verdict of a single gate layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateVerdict {
    Pass,
    Fail,
    FailRetry,
    Warn,
}

impl GateVerdict {
    /// Fail and FailRetry block acceptance; Pass and Warn do not.
    pub fn is_blocking(&self) -> bool {
        matches!(self, GateVerdict::Fail | GateVerdict::FailRetry)
    }
}

/// Outcome of one refinement iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IterationOutcome {
    Committed,
    RolledBack,
}

/// One generation attempt and its gate evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttemptRecord {
    pub candidate_id: String,
    pub report: GateReport,
    pub diff: DiffStats,
    pub counterexample: Option<Counterexample>,
}

/// Full record of one refinement iteration: every attempt, the decision,
/// and the severity tallies on either side of the transition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub task: RefinementTask,
    pub attempts: Vec<AttemptRecord>,
    pub outcome: IterationOutcome,
    pub v_before: SeverityCounts,
    pub v_after: SeverityCounts,
    pub committed_snapshot: Option<CodeSnapshot>,
}

/// Whether the chain ran to completion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "state", content = "reason")]
pub enum ChainStatus {
    Complete,
    Incomplete(String),
}

/// Where in the chain a reviewer call happened (audit log entry).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReviewPoint {
    Baseline,
    Final,
}

/// Audit trail of one iteration chain; the sole input to the metrics engine.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainRecord {
    pub chain_id: String,
    pub baseline: CodeSnapshot,
    pub iterations: Vec<IterationRecord>,
    pub baseline_review: Option<ReviewSummary>,
    pub final_review: Option<ReviewSummary>,
    pub config_fingerprint: String,
    pub status: ChainStatus,
    /// Reviewer invocations in call order; the reviewer never gates.
    pub review_log: Vec<ReviewPoint>,
}

impl ChainRecord {
    /// Last committed snapshot, or the baseline when nothing committed.
    pub fn final_snapshot(&self) -> &CodeSnapshot {
        self.iterations
            .iter()
            .rev()
            .find_map(|it| it.committed_snapshot.as_ref())
            .unwrap_or(&self.baseline)
    }

    /// Vulnerability sequence over the committed states: baseline first,
    /// then each committed snapshot in order.
    pub fn committed_v(&self, scope: SeverityScope) -> Result<Vec<u32>, ModelError> {
        let mut seq = vec![vulnerability_count(&self.baseline, scope)?];
        for it in &self.iterations {
            if let Some(snap) = &it.committed_snapshot {
                seq.push(vulnerability_count(snap, scope)?);
            }
        }
        Ok(seq)
    }
}

/// Write chain records as one JSON object per line (UTF-8).
pub fn write_records(path: &std::path::Path, records: &[ChainRecord]) -> std::io::Result<()> {
    let mut out = String::new();
    for rec in records {
        out.push_str(&serde_json::to_string(rec).expect("record serializes"));
        out.push('\n');
    }
    crate::config::write_atomic(path, out.as_bytes())
}

/// Read a line-delimited record file written by [`write_records`].
pub fn read_records(path: &std::path::Path) -> Result<Vec<ChainRecord>, RecordIoError> {
    let text = std::fs::read_to_string(path).map_err(RecordIoError::Io)?;
    let mut records = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let rec = serde_json::from_str(line)
            .map_err(|e| RecordIoError::Malformed { line: idx + 1, source: e })?;
        records.push(rec);
    }
    Ok(records)
}

#[derive(Debug, Error)]
pub enum RecordIoError {
    #[error("cannot read record file: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed record on line {line}: {source}")]
    Malformed {
        line: usize,
        source: serde_json::Error,
    },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    /// The snapshot has no cached severity counts yet.
    #[error("snapshot has not been analyzed (severity counts absent)")]
    AnalysisMissing,
    /// The chain holds no committed iterations.
    #[error("chain has no committed iterations")]
    EmptyChain,
}

/// Vulnerability count V of a snapshot under the given severity scope.
pub fn vulnerability_count(
    snapshot: &CodeSnapshot,
    scope: SeverityScope,
) -> Result<u32, ModelError> {
    snapshot
        .severity_counts
        .map(|c| c.for_scope(scope))
        .ok_or(ModelError::AnalysisMissing)
}

/// True iff V never increases across consecutive committed states.
pub fn chain_is_monotone(chain: &ChainRecord, scope: SeverityScope) -> Result<bool, ModelError> {
    let seq = chain.committed_v(scope)?;
    if seq.len() < 2 {
        return Err(ModelError::EmptyChain);
    }
    Ok(seq.windows(2).all(|w| w[1] <= w[0]))
}
