//! Audits journal classification systems against citation behavior.
//!
//! The pipeline: load a corpus of journals, categories, assignments,
//! publications, and citation edges ([`corpus`]); aggregate edges into
//! per-journal category profiles ([`aggregate`]); flag weakly related
//! assignments and strongly related non-assignments against configurable
//! thresholds ([`criteria`]); assemble statistics, sweeps, rankings, and
//! drill-downs ([`report`]); cross-check against bibliographic coupling
//! ([`coupling`]); and validate the whole stack on generated corpora with
//! planted errors ([`synth`]).
//!
//! All counting is integer-exact and deterministic: parallel aggregation
//! reduces with integer addition, threshold comparisons use exact
//! rationals, and every report row has a defined order.

pub mod aggregate;
pub mod corpus;
pub mod coupling;
pub mod criteria;
pub mod report;
pub mod synth;

pub use aggregate::{build_profiles, profiles_tsv, CitationProfile, ProfileError, ProfileSet};
pub use corpus::{
    load_corpus, resolve_assignments, validate_corpus, Assignment, Category, CategoryIdx,
    CitationEdge, Corpus, CorpusBuilder, CorpusError, CorpusPaths, Journal, JournalIdx,
    Publication, PubIdx, ReferenceRecord, ValidationReport, YearRange,
};
pub use coupling::{
    build_coupling_profiles, compare_relation_kinds, comparison_tsv, journal_coupling_weights,
    strongest_category, ComparisonRow, CouplingError, CouplingProfile, CouplingWeights,
    RelationComparison,
};
pub use criteria::{
    combined, combined_tsv, criterion_one, criterion_two, flags_tsv, journal_flag_summary,
    relatedness, sort_flags, AuditConfig, CombinedRecord, ConfigError, Criterion, FlagRecord,
    Threshold,
};
pub use report::{
    assignment_distribution, corpus_stats, field_drilldown, field_drilldown_by_id,
    rank_missing_categories, rank_problem_categories, threshold_sweep, CategoryRankRow,
    CorpusStats, DrilldownReport, MissingRankRow, ReportError, SweepRow, ThresholdSweep,
};
pub use synth::{
    brute_force_profile, evaluate_detection, generate, generate_corpus, percentile_total,
    DetectionKind, DetectionMetrics, GroundTruth, PlantedError, SynthError, SyntheticSpec,
    TruthRow,
};
