//! Report assembly over profiles and flags: corpus statistics, assignment
//! distributions, threshold sweeps, category rankings, and per-category
//! drill-downs.
//!
//! Reports consume the counts stored in profiles and flag records; they never
//! recompute relatedness through a second code path. Human-readable tables
//! round percentages for display (integer for sweeps and rankings, two
//! decimals for the criterion-two sweep); JSON output carries six decimals.
//! Row order is always deterministic, with ties broken by lexicographic id.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::aggregate::ProfileSet;
use crate::corpus::{CategoryIdx, Corpus, JournalIdx};
use crate::criteria::{criterion_one, criterion_two, relatedness, AuditConfig, Threshold};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("unknown category {id:?}")]
    UnknownCategory { id: String },
}

// ===== display rounding =====

/// Percentage of `count` in `base`, rounded half-up to the nearest integer.
pub fn pct_round(count: u64, base: u64) -> u64 {
    if base == 0 {
        return 0;
    }
    ((200 * count as u128 + base as u128) / (2 * base as u128)) as u64
}

/// Percentage with two decimals, rounded half-up, e.g. `2.14`.
pub fn pct_2dp(count: u64, base: u64) -> String {
    if base == 0 {
        return "0.00".to_owned();
    }
    let hundredths = (20_000 * count as u128 + base as u128) / (2 * base as u128);
    format!("{}.{:02}", hundredths / 100, hundredths % 100)
}

/// Ratio with one decimal, rounded half-up, e.g. `1.6`.
fn ratio_1dp(num: u64, den: u64) -> String {
    if den == 0 {
        return "0.0".to_owned();
    }
    let tenths = (20 * num as u128 + den as u128) / (2 * den as u128);
    format!("{}.{}", tenths / 10, tenths % 10)
}

/// Fraction as f64 rounded to six decimals, for machine output.
fn frac6(count: u64, base: u64) -> f64 {
    if base == 0 {
        return 0.0;
    }
    round6(count as f64 / base as f64)
}

fn pct6(count: u64, base: u64) -> f64 {
    if base == 0 {
        return 0.0;
    }
    round6(100.0 * count as f64 / base as f64)
}

fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

// ===== populations =====

/// Journals and assignments that criterion-one reporting is measured
/// against: journals above the citation cutoff with at least one eligible
/// assignment, and those eligible assignments.
pub fn c1_population(ps: &ProfileSet, corpus: &Corpus, cfg: &AuditConfig) -> (u64, u64) {
    let mut journals = 0;
    let mut assignments = 0;
    for p in ps.profiles() {
        if p.total < cfg.min_citations {
            continue;
        }
        let eligible = corpus
            .assignments(p.journal)
            .iter()
            .filter(|&&c| {
                !(cfg.exclude_multidisciplinary_from_c1 && corpus.category(c).multidisciplinary)
            })
            .count() as u64;
        if eligible > 0 {
            journals += 1;
            assignments += eligible;
        }
    }
    (journals, assignments)
}

/// Journals that criterion-two reporting is measured against: everything
/// above the citation cutoff, assigned or not.
pub fn c2_population(ps: &ProfileSet, cfg: &AuditConfig) -> u64 {
    ps.profiles().iter().filter(|p| p.total >= cfg.min_citations).count() as u64
}

// ===== corpus stats =====

/// The corpus after restricting to journals above the citation cutoff with
/// at least one eligible assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RestrictedStats {
    pub publications: u64,
    pub journals: u64,
    pub assignments: u64,
}

/// Headline corpus numbers, unrestricted and restricted. Publication counts
/// cover the analysis window only.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusStats {
    pub publications: u64,
    pub journals: u64,
    pub categories: u64,
    pub assignments: u64,
    pub max_assignments: u64,
    pub restricted: RestrictedStats,
}

impl CorpusStats {
    /// Mean assignments per journal over the unrestricted corpus.
    pub fn mean_assignments(&self) -> f64 {
        if self.journals == 0 {
            return 0.0;
        }
        self.assignments as f64 / self.journals as f64
    }
}

pub fn corpus_stats(corpus: &Corpus, ps: &ProfileSet, cfg: &AuditConfig) -> CorpusStats {
    let publications = corpus.pub_indices().filter(|&p| corpus.pub_in_window(p)).count() as u64;
    let assignments: u64 = corpus
        .journal_indices()
        .map(|j| corpus.assignments(j).len() as u64)
        .sum();
    let max_assignments = corpus
        .journal_indices()
        .map(|j| corpus.assignments(j).len() as u64)
        .max()
        .unwrap_or(0);

    let mut in_restricted = vec![false; corpus.journals().len()];
    let (journals_r, assignments_r) = {
        let mut journals = 0;
        let mut assignments = 0;
        for p in ps.profiles() {
            if p.total < cfg.min_citations {
                continue;
            }
            let eligible = corpus
                .assignments(p.journal)
                .iter()
                .filter(|&&c| {
                    !(cfg.exclude_multidisciplinary_from_c1 && corpus.category(c).multidisciplinary)
                })
                .count() as u64;
            if eligible > 0 {
                journals += 1;
                assignments += eligible;
                in_restricted[p.journal.idx()] = true;
            }
        }
        (journals, assignments)
    };
    let publications_r = corpus
        .pub_indices()
        .filter(|&p| corpus.pub_in_window(p) && in_restricted[corpus.publication(p).journal.idx()])
        .count() as u64;

    CorpusStats {
        publications,
        journals: corpus.journals().len() as u64,
        categories: corpus.categories().len() as u64,
        assignments,
        max_assignments,
        restricted: RestrictedStats {
            publications: publications_r,
            journals: journals_r,
            assignments: assignments_r,
        },
    }
}

/// Histogram of journals by number of assigned categories. Unassigned
/// journals land in bin 0.
pub fn assignment_distribution(corpus: &Corpus) -> BTreeMap<u64, u64> {
    let mut dist = BTreeMap::new();
    for j in corpus.journal_indices() {
        *dist.entry(corpus.assignments(j).len() as u64).or_insert(0) += 1;
    }
    dist
}

// ===== threshold sweeps =====

/// Flag volume at one threshold. `assignments` is present for criterion one
/// only; criterion two counts each journal once however many categories it
/// hits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRow {
    pub threshold: Threshold,
    pub journals: u64,
    pub journal_base: u64,
    pub assignments: Option<u64>,
    pub assignment_base: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdSweep {
    pub c1: Vec<SweepRow>,
    pub c2: Vec<SweepRow>,
}

/// Runs both criteria at every configured threshold. Rows keep the order of
/// the configured lists.
pub fn threshold_sweep(ps: &ProfileSet, corpus: &Corpus, cfg: &AuditConfig) -> ThresholdSweep {
    let (journal_base, assignment_base) = c1_population(ps, corpus, cfg);
    let c1 = cfg
        .alpha_list
        .iter()
        .map(|alpha| {
            let flags = criterion_one(ps, corpus, alpha, cfg);
            let (journals, assignments) = crate::criteria::journal_flag_summary(&flags);
            SweepRow {
                threshold: alpha.clone(),
                journals,
                journal_base,
                assignments: Some(assignments),
                assignment_base: Some(assignment_base),
            }
        })
        .collect();
    let c2_base = c2_population(ps, cfg);
    let c2 = cfg
        .beta_list
        .iter()
        .map(|beta| {
            let flags = criterion_two(ps, corpus, beta, cfg);
            let (journals, _) = crate::criteria::journal_flag_summary(&flags);
            SweepRow {
                threshold: beta.clone(),
                journals,
                journal_base: c2_base,
                assignments: None,
                assignment_base: None,
            }
        })
        .collect();
    ThresholdSweep { c1, c2 }
}

// ===== category rankings =====

/// A category scored by how many of its journals look misplaced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryRankRow {
    pub category: CategoryIdx,
    /// Assigned journals above the citation cutoff.
    pub journals: u64,
    /// Of those, journals whose assignment satisfies criterion one.
    pub flagged: u64,
}

impl CategoryRankRow {
    pub fn flagged_fraction(&self) -> f64 {
        if self.journals == 0 {
            0.0
        } else {
            self.flagged as f64 / self.journals as f64
        }
    }
}

/// Categories where at least `min_fraction` of at least `min_journals`
/// member journals are weakly related, sorted by flagged share descending,
/// ties by category id. The flagged counts equal the criterion-one flag list
/// filtered to each category.
pub fn rank_problem_categories(
    ps: &ProfileSet,
    corpus: &Corpus,
    alpha: &Threshold,
    min_journals: u64,
    min_fraction: &Threshold,
    cfg: &AuditConfig,
) -> Vec<CategoryRankRow> {
    let mut journals = vec![0u64; corpus.categories().len()];
    let mut flagged = vec![0u64; corpus.categories().len()];
    for p in ps.profiles() {
        if p.total < cfg.min_citations {
            continue;
        }
        for &c in corpus.assignments(p.journal) {
            if cfg.exclude_multidisciplinary_from_c1 && corpus.category(c).multidisciplinary {
                continue;
            }
            journals[c.idx()] += 1;
            if alpha.at_most(p.n(c), p.total) {
                flagged[c.idx()] += 1;
            }
        }
    }
    let mut rows: Vec<CategoryRankRow> = corpus
        .category_indices()
        .map(|c| CategoryRankRow {
            category: c,
            journals: journals[c.idx()],
            flagged: flagged[c.idx()],
        })
        .filter(|r| r.journals >= min_journals && min_fraction.at_least(r.flagged, r.journals))
        .collect();
    rows.sort_by(|a, b| {
        // flagged share descending, compared exactly by cross-multiplication
        let left = a.flagged as u128 * b.journals as u128;
        let right = b.flagged as u128 * a.journals as u128;
        right
            .cmp(&left)
            .then_with(|| corpus.category_id(a.category).cmp(corpus.category_id(b.category)))
    });
    rows
}

/// A category ranked by how many outside journals are strongly related to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MissingRankRow {
    pub category: CategoryIdx,
    /// Assigned journals above the citation cutoff, for context.
    pub journals: u64,
    /// Unassigned journals with r >= beta.
    pub flagged: u64,
}

/// Categories attracting at least `min_count` criterion-two flags, sorted by
/// flag count descending, ties by category id.
pub fn rank_missing_categories(
    ps: &ProfileSet,
    corpus: &Corpus,
    beta: &Threshold,
    min_count: u64,
    cfg: &AuditConfig,
) -> Vec<MissingRankRow> {
    let mut flagged = vec![0u64; corpus.categories().len()];
    for f in criterion_two(ps, corpus, beta, cfg) {
        flagged[f.category.idx()] += 1;
    }
    let mut journals = vec![0u64; corpus.categories().len()];
    for p in ps.profiles() {
        if p.total < cfg.min_citations {
            continue;
        }
        for &c in corpus.assignments(p.journal) {
            journals[c.idx()] += 1;
        }
    }
    let mut rows: Vec<MissingRankRow> = corpus
        .category_indices()
        .filter(|&c| !(cfg.exclude_multidisciplinary_from_c2 && corpus.category(c).multidisciplinary))
        .map(|c| MissingRankRow {
            category: c,
            journals: journals[c.idx()],
            flagged: flagged[c.idx()],
        })
        .filter(|r| r.flagged >= min_count)
        .collect();
    rows.sort_by(|a, b| {
        b.flagged
            .cmp(&a.flagged)
            .then_with(|| corpus.category_id(a.category).cmp(corpus.category_id(b.category)))
    });
    rows
}

// ===== drill-down =====

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DrillRow {
    pub journal: JournalIdx,
    pub n: u64,
    pub t: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MissingDrillRow {
    pub journal: JournalIdx,
    pub n: u64,
    pub t: u64,
    /// The journal's current assignments, sorted by category id.
    pub current: Vec<CategoryIdx>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OtherDrillRow {
    pub journal: JournalIdx,
    pub other: CategoryIdx,
    pub n: u64,
    pub t: u64,
}

/// Close-up of one category: weak members, strongly related outsiders, and
/// members whose other assignments look weak.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DrilldownReport {
    pub category: CategoryIdx,
    /// Journals assigned here with r <= alpha; equals the criterion-one flag
    /// list filtered to this category.
    pub weak_home: Vec<DrillRow>,
    /// Journals not assigned here with r >= beta.
    pub missing: Vec<MissingDrillRow>,
    /// For journals assigned here: their other assignments with r <= alpha.
    pub weak_other: Vec<OtherDrillRow>,
}

pub fn field_drilldown(
    ps: &ProfileSet,
    corpus: &Corpus,
    category: CategoryIdx,
    alpha: &Threshold,
    beta: &Threshold,
    cfg: &AuditConfig,
) -> DrilldownReport {
    let c1_ok = |c: CategoryIdx| {
        !(cfg.exclude_multidisciplinary_from_c1 && corpus.category(c).multidisciplinary)
    };
    let c2_ok = |c: CategoryIdx| {
        !(cfg.exclude_multidisciplinary_from_c2 && corpus.category(c).multidisciplinary)
    };
    let mut weak_home = Vec::new();
    let mut missing = Vec::new();
    let mut weak_other = Vec::new();
    for p in ps.profiles() {
        if p.total < cfg.min_citations {
            continue;
        }
        let j = p.journal;
        let n = p.n(category);
        if corpus.is_assigned(j, category) {
            if c1_ok(category) && alpha.at_most(n, p.total) {
                weak_home.push(DrillRow { journal: j, n, t: p.total });
            }
            for &c in corpus.assignments(j) {
                if c != category && c1_ok(c) && alpha.at_most(p.n(c), p.total) {
                    weak_other.push(OtherDrillRow { journal: j, other: c, n: p.n(c), t: p.total });
                }
            }
        } else if c2_ok(category) && beta.at_least(n, p.total) {
            let mut current: Vec<CategoryIdx> = corpus.assignments(j).to_vec();
            current.sort_by(|a, b| corpus.category_id(*a).cmp(corpus.category_id(*b)));
            missing.push(MissingDrillRow { journal: j, n, t: p.total, current });
        }
    }
    let by_journal = |corpus: &Corpus, a: JournalIdx, b: JournalIdx| {
        corpus.journal_id(a).cmp(corpus.journal_id(b))
    };
    weak_home.sort_by(|a, b| by_journal(corpus, a.journal, b.journal));
    missing.sort_by(|a, b| by_journal(corpus, a.journal, b.journal));
    weak_other.sort_by(|a, b| {
        by_journal(corpus, a.journal, b.journal)
            .then_with(|| corpus.category_id(a.other).cmp(corpus.category_id(b.other)))
    });
    DrilldownReport { category, weak_home, missing, weak_other }
}

/// [`field_drilldown`], resolving the category by id first.
pub fn field_drilldown_by_id(
    ps: &ProfileSet,
    corpus: &Corpus,
    category_id: &str,
    alpha: &Threshold,
    beta: &Threshold,
    cfg: &AuditConfig,
) -> Result<DrilldownReport, ReportError> {
    let category = corpus
        .find_category(category_id)
        .ok_or_else(|| ReportError::UnknownCategory { id: category_id.to_owned() })?;
    Ok(field_drilldown(ps, corpus, category, alpha, beta, cfg))
}

// ===== renderers =====

pub fn stats_tsv(stats: &CorpusStats) -> String {
    let mut out = String::from("metric\tvalue\n");
    let mut kv = |k: &str, v: String| out.push_str(&format!("{k}\t{v}\n"));
    kv("publications", stats.publications.to_string());
    kv("journals", stats.journals.to_string());
    kv("categories", stats.categories.to_string());
    kv("assignments", stats.assignments.to_string());
    kv("max_assignments_per_journal", stats.max_assignments.to_string());
    kv(
        "mean_assignments_per_journal",
        ratio_1dp(stats.assignments, stats.journals),
    );
    kv("restricted_publications", stats.restricted.publications.to_string());
    kv(
        "restricted_publications_pct",
        pct_round(stats.restricted.publications, stats.publications).to_string(),
    );
    kv("restricted_journals", stats.restricted.journals.to_string());
    kv(
        "restricted_journals_pct",
        pct_round(stats.restricted.journals, stats.journals).to_string(),
    );
    kv("restricted_assignments", stats.restricted.assignments.to_string());
    kv(
        "restricted_assignments_pct",
        pct_round(stats.restricted.assignments, stats.assignments).to_string(),
    );
    out
}

#[derive(Serialize)]
struct RestrictedDoc {
    publications: u64,
    publications_pct: f64,
    journals: u64,
    journals_pct: f64,
    assignments: u64,
    assignments_pct: f64,
}

#[derive(Serialize)]
struct StatsDoc {
    publications: u64,
    journals: u64,
    categories: u64,
    assignments: u64,
    max_assignments_per_journal: u64,
    mean_assignments_per_journal: f64,
    restricted: RestrictedDoc,
}

pub fn stats_json(stats: &CorpusStats) -> String {
    let doc = StatsDoc {
        publications: stats.publications,
        journals: stats.journals,
        categories: stats.categories,
        assignments: stats.assignments,
        max_assignments_per_journal: stats.max_assignments,
        mean_assignments_per_journal: round6(stats.mean_assignments()),
        restricted: RestrictedDoc {
            publications: stats.restricted.publications,
            publications_pct: pct6(stats.restricted.publications, stats.publications),
            journals: stats.restricted.journals,
            journals_pct: pct6(stats.restricted.journals, stats.journals),
            assignments: stats.restricted.assignments,
            assignments_pct: pct6(stats.restricted.assignments, stats.assignments),
        },
    };
    to_pretty(&doc)
}

/// Plot-ready histogram data, comma-separated.
pub fn distribution_csv(dist: &BTreeMap<u64, u64>) -> String {
    let mut out = String::from("assignments,journals\n");
    for (k, v) in dist {
        out.push_str(&format!("{k},{v}\n"));
    }
    out
}

pub fn sweep_c1_tsv(rows: &[SweepRow]) -> String {
    let mut out = String::from("alpha\tjournals\tjournals_pct\tassignments\tassignments_pct\n");
    for r in rows {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\n",
            r.threshold.text(),
            r.journals,
            pct_round(r.journals, r.journal_base),
            r.assignments.unwrap_or(0),
            pct_round(r.assignments.unwrap_or(0), r.assignment_base.unwrap_or(0)),
        ));
    }
    out
}

pub fn sweep_c2_tsv(rows: &[SweepRow]) -> String {
    let mut out = String::from("beta\tjournals\tjournals_pct\n");
    for r in rows {
        out.push_str(&format!(
            "{}\t{}\t{}\n",
            r.threshold.text(),
            r.journals,
            pct_2dp(r.journals, r.journal_base),
        ));
    }
    out
}

#[derive(Serialize)]
struct SweepRowDoc {
    threshold: String,
    journals: u64,
    journals_pct: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    assignments: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    assignments_pct: Option<f64>,
}

pub fn sweep_json(rows: &[SweepRow]) -> String {
    let docs: Vec<SweepRowDoc> = rows
        .iter()
        .map(|r| SweepRowDoc {
            threshold: r.threshold.text().to_owned(),
            journals: r.journals,
            journals_pct: pct6(r.journals, r.journal_base),
            assignments: r.assignments,
            assignments_pct: r
                .assignments
                .map(|a| pct6(a, r.assignment_base.unwrap_or(0))),
        })
        .collect();
    to_pretty(&docs)
}

pub fn rank_c1_tsv(rows: &[CategoryRankRow], corpus: &Corpus) -> String {
    let mut out = String::from("category_id\tjournals\tflagged\tflagged_pct\n");
    for r in rows {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            corpus.category_id(r.category),
            r.journals,
            r.flagged,
            pct_round(r.flagged, r.journals),
        ));
    }
    out
}

#[derive(Serialize)]
struct RankC1Doc {
    category: String,
    journals: u64,
    flagged: u64,
    flagged_pct: f64,
}

pub fn rank_c1_json(rows: &[CategoryRankRow], corpus: &Corpus) -> String {
    let docs: Vec<RankC1Doc> = rows
        .iter()
        .map(|r| RankC1Doc {
            category: corpus.category_id(r.category).to_owned(),
            journals: r.journals,
            flagged: r.flagged,
            flagged_pct: pct6(r.flagged, r.journals),
        })
        .collect();
    to_pretty(&docs)
}

pub fn rank_c2_tsv(rows: &[MissingRankRow], corpus: &Corpus) -> String {
    let mut out = String::from("category_id\tjournals\tflagged\n");
    for r in rows {
        out.push_str(&format!(
            "{}\t{}\t{}\n",
            corpus.category_id(r.category),
            r.journals,
            r.flagged,
        ));
    }
    out
}

#[derive(Serialize)]
struct RankC2Doc {
    category: String,
    journals: u64,
    flagged: u64,
}

pub fn rank_c2_json(rows: &[MissingRankRow], corpus: &Corpus) -> String {
    let docs: Vec<RankC2Doc> = rows
        .iter()
        .map(|r| RankC2Doc {
            category: corpus.category_id(r.category).to_owned(),
            journals: r.journals,
            flagged: r.flagged,
        })
        .collect();
    to_pretty(&docs)
}

/// Drill-down as a sectioned TSV. The `assigned_categories` column is filled
/// for `missing` rows only; relatedness is shown at two decimals, matching
/// the human tables elsewhere.
pub fn drilldown_tsv(report: &DrilldownReport, corpus: &Corpus) -> String {
    let mut out =
        String::from("section\tjournal_id\tcategory_id\tn\tt\tr\tassigned_categories\n");
    let home = corpus.category_id(report.category);
    for r in &report.weak_home {
        out.push_str(&format!(
            "weak_home\t{}\t{}\t{}\t{}\t{:.2}\t\n",
            corpus.journal_id(r.journal),
            home,
            r.n,
            r.t,
            relatedness(r.n, r.t),
        ));
    }
    for r in &report.missing {
        let current: Vec<&str> = r.current.iter().map(|&c| corpus.category_id(c)).collect();
        out.push_str(&format!(
            "missing\t{}\t{}\t{}\t{}\t{:.2}\t{}\n",
            corpus.journal_id(r.journal),
            home,
            r.n,
            r.t,
            relatedness(r.n, r.t),
            current.join(";"),
        ));
    }
    for r in &report.weak_other {
        out.push_str(&format!(
            "weak_other\t{}\t{}\t{}\t{}\t{:.2}\t\n",
            corpus.journal_id(r.journal),
            corpus.category_id(r.other),
            r.n,
            r.t,
            relatedness(r.n, r.t),
        ));
    }
    out
}

#[derive(Serialize)]
struct DrillRowDoc {
    journal: String,
    n: u64,
    t: u64,
    r: f64,
}

#[derive(Serialize)]
struct MissingDrillRowDoc {
    journal: String,
    n: u64,
    t: u64,
    r: f64,
    assigned_categories: Vec<String>,
}

#[derive(Serialize)]
struct OtherDrillRowDoc {
    journal: String,
    category: String,
    n: u64,
    t: u64,
    r: f64,
}

#[derive(Serialize)]
struct DrilldownDoc {
    category: String,
    weak_home: Vec<DrillRowDoc>,
    missing: Vec<MissingDrillRowDoc>,
    weak_other: Vec<OtherDrillRowDoc>,
}

pub fn drilldown_json(report: &DrilldownReport, corpus: &Corpus) -> String {
    let doc = DrilldownDoc {
        category: corpus.category_id(report.category).to_owned(),
        weak_home: report
            .weak_home
            .iter()
            .map(|r| DrillRowDoc {
                journal: corpus.journal_id(r.journal).to_owned(),
                n: r.n,
                t: r.t,
                r: frac6(r.n, r.t),
            })
            .collect(),
        missing: report
            .missing
            .iter()
            .map(|r| MissingDrillRowDoc {
                journal: corpus.journal_id(r.journal).to_owned(),
                n: r.n,
                t: r.t,
                r: frac6(r.n, r.t),
                assigned_categories: r
                    .current
                    .iter()
                    .map(|&c| corpus.category_id(c).to_owned())
                    .collect(),
            })
            .collect(),
        weak_other: report
            .weak_other
            .iter()
            .map(|r| OtherDrillRowDoc {
                journal: corpus.journal_id(r.journal).to_owned(),
                category: corpus.category_id(r.other).to_owned(),
                n: r.n,
                t: r.t,
                r: frac6(r.n, r.t),
            })
            .collect(),
    };
    to_pretty(&doc)
}

fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialization cannot fail");
    s.push('\n');
    s
}
