//! Flagging criteria over citation profiles.
//!
//! A journal-category pair is scored by relatedness r = n/t (0 when t = 0).
//! Criterion one flags assigned categories a journal is weakly related to
//! (r <= alpha); criterion two flags unassigned categories it is strongly
//! related to (r >= beta). Both comparisons are inclusive and evaluated with
//! exact integer arithmetic, so display rounding can never change a flag.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::aggregate::ProfileSet;
use crate::corpus::{CategoryIdx, Corpus, JournalIdx, YearRange};

/// Relatedness of a journal to a category: the share of its citation links
/// that connect it to journals of that category. Display value only; flag
/// decisions go through [`Threshold`].
pub fn relatedness(n: u64, t: u64) -> f64 {
    if t == 0 {
        0.0
    } else {
        n as f64 / t as f64
    }
}

/// A threshold in [0, 1], kept as the exact rational its decimal text denotes.
#[derive(Debug, Clone)]
pub struct Threshold {
    text: String,
    num: u64,
    den: u64,
}

impl Threshold {
    /// Parses a plain decimal such as `0.05`, `0.5`, `1`, or `1.0`.
    pub fn parse(s: &str) -> Result<Threshold, ConfigError> {
        let bad = || ConfigError::Invalid(format!("invalid threshold {s:?}: expected a decimal in [0, 1]"));
        let (int_part, frac_part) = match s.split_once('.') {
            Some((i, f)) => (i, f),
            None => (s, ""),
        };
        if int_part.is_empty()
            || !int_part.bytes().all(|b| b.is_ascii_digit())
            || !frac_part.bytes().all(|b| b.is_ascii_digit())
            || frac_part.len() > 9
        {
            return Err(bad());
        }
        let den = 10u64.pow(frac_part.len() as u32);
        let int: u64 = int_part.parse().map_err(|_| bad())?;
        let frac: u64 = if frac_part.is_empty() { 0 } else { frac_part.parse().map_err(|_| bad())? };
        let num = int
            .checked_mul(den)
            .and_then(|v| v.checked_add(frac))
            .ok_or_else(bad)?;
        if num > den {
            return Err(bad());
        }
        Ok(Threshold { text: s.to_owned(), num, den })
    }

    /// The literal text the threshold was parsed from; used in file names
    /// and table rows.
    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// Exact test for r(n, t) <= threshold.
    pub fn at_most(&self, n: u64, t: u64) -> bool {
        if t == 0 {
            return true; // r = 0 by convention
        }
        (n as u128) * (self.den as u128) <= (self.num as u128) * (t as u128)
    }

    /// Exact test for r(n, t) >= threshold.
    pub fn at_least(&self, n: u64, t: u64) -> bool {
        if t == 0 {
            return self.num == 0;
        }
        (n as u128) * (self.den as u128) >= (self.num as u128) * (t as u128)
    }
}

impl PartialEq for Threshold {
    fn eq(&self, other: &Self) -> bool {
        (self.num as u128) * (other.den as u128) == (other.num as u128) * (self.den as u128)
    }
}

impl Eq for Threshold {}

impl PartialOrd for Threshold {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Threshold {
    fn cmp(&self, other: &Self) -> Ordering {
        ((self.num as u128) * (other.den as u128)).cmp(&((other.num as u128) * (self.den as u128)))
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl Serialize for Threshold {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.text)
    }
}

fn thresholds(list: &[&str]) -> Vec<Threshold> {
    list.iter().map(|s| Threshold::parse(s).unwrap()).collect()
}

/// Run parameters shared by flagging, reporting, and the CLI.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditConfig {
    /// Inclusive publication-year window; links with either endpoint outside
    /// it are ignored.
    pub window: YearRange,
    /// Criterion-one thresholds swept by reports.
    pub alpha_list: Vec<Threshold>,
    /// Criterion-two thresholds swept by reports.
    pub beta_list: Vec<Threshold>,
    /// Journals below this citation total are kept in every computation but
    /// suppressed from flags and report populations.
    pub min_citations: u64,
    /// Leave multidisciplinary categories out of criterion one (a low r to a
    /// deliberately broad category signals nothing).
    pub exclude_multidisciplinary_from_c1: bool,
    /// Leave multidisciplinary categories out of criterion two.
    pub exclude_multidisciplinary_from_c2: bool,
    /// Alpha for the combined-criteria report and for drill-downs.
    pub combined_alpha: Threshold,
    /// Beta for the combined-criteria report and for drill-downs.
    pub combined_beta: Threshold,
    /// Score bibliographic coupling per publication pair as 0/1 instead of
    /// counting distinct shared references.
    pub coupling_binary: bool,
    /// Minimum journals a category needs to enter the problem ranking.
    pub min_category_journals: u64,
    /// Minimum flagged share for the problem ranking.
    pub min_flagged_fraction: Threshold,
    /// Minimum criterion-two flag count for the missing-assignment ranking.
    pub min_missing_count: u64,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            window: YearRange::new(2010, 2014),
            alpha_list: thresholds(&["0.05", "0.1", "0.2"]),
            beta_list: thresholds(&["0.5", "0.6", "0.7", "0.8", "0.9"]),
            min_citations: 100,
            exclude_multidisciplinary_from_c1: true,
            exclude_multidisciplinary_from_c2: false,
            combined_alpha: Threshold::parse("0.1").unwrap(),
            combined_beta: Threshold::parse("0.6").unwrap(),
            coupling_binary: false,
            min_category_journals: 10,
            min_flagged_fraction: Threshold::parse("0.5").unwrap(),
            min_missing_count: 10,
        }
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{}: {source}", path.display())]
    Io {
        path: std::path::PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("config line {line}: {reason}")]
    Line { line: u64, reason: String },
    #[error("{0}")]
    Invalid(String),
}

impl AuditConfig {
    /// Parses `key = value` lines over the defaults. `#` starts a comment;
    /// blank lines are ignored; list values are comma-separated.
    pub fn parse(text: &str) -> Result<AuditConfig, ConfigError> {
        let mut cfg = AuditConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i as u64 + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::Line {
                    line: line_no,
                    reason: format!("expected `key = value`, found {raw:?}"),
                });
            };
            cfg.apply(key.trim(), value.trim())
                .map_err(|e| ConfigError::Line { line: line_no, reason: e.to_string() })?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<AuditConfig, ConfigError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::parse(&text)
    }

    fn apply(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        fn int(v: &str) -> Result<u64, ConfigError> {
            v.parse().map_err(|_| ConfigError::Invalid(format!("invalid integer {v:?}")))
        }
        fn year(v: &str) -> Result<i32, ConfigError> {
            v.parse().map_err(|_| ConfigError::Invalid(format!("invalid year {v:?}")))
        }
        fn boolean(v: &str) -> Result<bool, ConfigError> {
            match v {
                "true" => Ok(true),
                "false" => Ok(false),
                _ => Err(ConfigError::Invalid(format!("invalid bool {v:?}: expected true or false"))),
            }
        }
        fn list(v: &str) -> Result<Vec<Threshold>, ConfigError> {
            v.split(',').map(|s| Threshold::parse(s.trim())).collect()
        }
        match key {
            "window_start" => self.window.start = year(value)?,
            "window_end" => self.window.end = year(value)?,
            "alpha_list" => self.alpha_list = list(value)?,
            "beta_list" => self.beta_list = list(value)?,
            "min_citations" => self.min_citations = int(value)?,
            "exclude_multidisciplinary_from_c1" => {
                self.exclude_multidisciplinary_from_c1 = boolean(value)?
            }
            "exclude_multidisciplinary_from_c2" => {
                self.exclude_multidisciplinary_from_c2 = boolean(value)?
            }
            "combined_alpha" => self.combined_alpha = Threshold::parse(value)?,
            "combined_beta" => self.combined_beta = Threshold::parse(value)?,
            "coupling_binary" => self.coupling_binary = boolean(value)?,
            "min_category_journals" => self.min_category_journals = int(value)?,
            "min_flagged_fraction" => self.min_flagged_fraction = Threshold::parse(value)?,
            "min_missing_count" => self.min_missing_count = int(value)?,
            _ => return Err(ConfigError::Invalid(format!("unknown config key {key:?}"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.window.start > self.window.end {
            return Err(ConfigError::Invalid(format!(
                "window start {} is after window end {}",
                self.window.start, self.window.end
            )));
        }
        if self.alpha_list.is_empty() {
            return Err(ConfigError::Invalid("alpha_list must not be empty".into()));
        }
        if self.beta_list.is_empty() {
            return Err(ConfigError::Invalid("beta_list must not be empty".into()));
        }
        if self.combined_alpha >= self.combined_beta {
            return Err(ConfigError::Invalid(format!(
                "combined_alpha {} must be below combined_beta {}",
                self.combined_alpha, self.combined_beta
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Criterion {
    /// Assigned category with weak relatedness.
    One,
    /// Unassigned category with strong relatedness.
    Two,
}

/// One flagged journal-category pair with the counts that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlagRecord {
    pub journal: JournalIdx,
    pub category: CategoryIdx,
    pub n: u64,
    pub t: u64,
    pub criterion: Criterion,
    /// Whether the journal is assigned to the category. Always true for
    /// criterion one, false for criterion two.
    pub assigned: bool,
}

impl FlagRecord {
    pub fn relatedness(&self) -> f64 {
        relatedness(self.n, self.t)
    }
}

pub fn sort_flags(flags: &mut [FlagRecord], corpus: &Corpus) {
    flags.sort_by(|a, b| {
        corpus
            .journal_id(a.journal)
            .cmp(corpus.journal_id(b.journal))
            .then_with(|| corpus.category_id(a.category).cmp(corpus.category_id(b.category)))
    });
}

fn c1_eligible(corpus: &Corpus, c: CategoryIdx, cfg: &AuditConfig) -> bool {
    !(cfg.exclude_multidisciplinary_from_c1 && corpus.category(c).multidisciplinary)
}

fn c2_eligible(corpus: &Corpus, c: CategoryIdx, cfg: &AuditConfig) -> bool {
    !(cfg.exclude_multidisciplinary_from_c2 && corpus.category(c).multidisciplinary)
}

/// Flags assigned categories with r <= alpha, over journals with at least
/// `min_citations` links. Output is sorted by journal id, then category id.
pub fn criterion_one(
    ps: &ProfileSet,
    corpus: &Corpus,
    alpha: &Threshold,
    cfg: &AuditConfig,
) -> Vec<FlagRecord> {
    let mut flags = Vec::new();
    for p in ps.profiles() {
        if p.total < cfg.min_citations {
            continue;
        }
        for &c in corpus.assignments(p.journal) {
            if !c1_eligible(corpus, c, cfg) {
                continue;
            }
            let n = p.n(c);
            if alpha.at_most(n, p.total) {
                flags.push(FlagRecord {
                    journal: p.journal,
                    category: c,
                    n,
                    t: p.total,
                    criterion: Criterion::One,
                    assigned: true,
                });
            }
        }
    }
    sort_flags(&mut flags, corpus);
    flags
}

/// Flags unassigned categories with r >= beta, over journals with at least
/// `min_citations` links. Output is sorted by journal id, then category id.
pub fn criterion_two(
    ps: &ProfileSet,
    corpus: &Corpus,
    beta: &Threshold,
    cfg: &AuditConfig,
) -> Vec<FlagRecord> {
    let mut flags = Vec::new();
    for p in ps.profiles() {
        if p.total < cfg.min_citations {
            continue;
        }
        let mut push = |c: CategoryIdx, n: u64| {
            if corpus.is_assigned(p.journal, c) || !c2_eligible(corpus, c, cfg) {
                return;
            }
            if beta.at_least(n, p.total) {
                flags.push(FlagRecord {
                    journal: p.journal,
                    category: c,
                    n,
                    t: p.total,
                    criterion: Criterion::Two,
                    assigned: false,
                });
            }
        };
        if beta.is_zero() {
            // r >= 0 holds for every pair, including those with no links.
            for c in corpus.category_indices() {
                push(c, p.n(c));
            }
        } else {
            for (&c, &n) in &p.per_category {
                push(c, n);
            }
        }
    }
    sort_flags(&mut flags, corpus);
    flags
}

/// A journal whose eligible assignments all look weak while some unassigned
/// category looks strong: the strongest signal of outright misclassification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombinedRecord {
    pub journal: JournalIdx,
    pub t: u64,
    /// Every criterion-one-eligible assigned category with its link count;
    /// each satisfies r <= alpha. Sorted by category id.
    pub weak_assignments: Vec<(CategoryIdx, u64)>,
    /// Unassigned categories with r >= beta. Non-empty, sorted by category id.
    pub missing_categories: Vec<(CategoryIdx, u64)>,
}

/// Journals satisfying both criteria at once. Journals whose eligible
/// assignment set is empty are skipped rather than passing vacuously.
///
/// Requires `alpha < beta`, which also makes the two category sets disjoint.
pub fn combined(
    ps: &ProfileSet,
    corpus: &Corpus,
    alpha: &Threshold,
    beta: &Threshold,
    cfg: &AuditConfig,
) -> Vec<CombinedRecord> {
    assert!(alpha < beta, "combined criteria need alpha < beta");
    let mut records = Vec::new();
    for p in ps.profiles() {
        if p.total < cfg.min_citations {
            continue;
        }
        let eligible: Vec<CategoryIdx> = corpus
            .assignments(p.journal)
            .iter()
            .copied()
            .filter(|&c| c1_eligible(corpus, c, cfg))
            .collect();
        if eligible.is_empty() {
            continue;
        }
        if !eligible.iter().all(|&c| alpha.at_most(p.n(c), p.total)) {
            continue;
        }
        let mut missing: Vec<(CategoryIdx, u64)> = p
            .per_category
            .iter()
            .filter(|&(&c, &n)| {
                !corpus.is_assigned(p.journal, c)
                    && c2_eligible(corpus, c, cfg)
                    && beta.at_least(n, p.total)
            })
            .map(|(&c, &n)| (c, n))
            .collect();
        if missing.is_empty() {
            continue;
        }
        let mut weak: Vec<(CategoryIdx, u64)> =
            eligible.into_iter().map(|c| (c, p.n(c))).collect();
        let by_id = |corpus: &Corpus, v: &mut Vec<(CategoryIdx, u64)>| {
            v.sort_by(|a, b| corpus.category_id(a.0).cmp(corpus.category_id(b.0)));
        };
        by_id(corpus, &mut weak);
        by_id(corpus, &mut missing);
        records.push(CombinedRecord {
            journal: p.journal,
            t: p.total,
            weak_assignments: weak,
            missing_categories: missing,
        });
    }
    records.sort_by(|a, b| corpus.journal_id(a.journal).cmp(corpus.journal_id(b.journal)));
    records
}

/// Collapses a flag list to (distinct journals, flagged pairs).
pub fn journal_flag_summary(flags: &[FlagRecord]) -> (u64, u64) {
    let journals: HashSet<JournalIdx> = flags.iter().map(|f| f.journal).collect();
    (journals.len() as u64, flags.len() as u64)
}

/// Machine-readable flag table. Relatedness is carried at six decimals purely
/// for display; the flag decision was made exactly.
pub fn flags_tsv(flags: &[FlagRecord], corpus: &Corpus) -> String {
    let mut out = String::from("journal_id\tcategory_id\tn\tt\tr\tassigned\n");
    for f in flags {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{:.6}\t{}\n",
            corpus.journal_id(f.journal),
            corpus.category_id(f.category),
            f.n,
            f.t,
            f.relatedness(),
            u8::from(f.assigned),
        ));
    }
    out
}

/// Combined-criteria table: one row per (weak assignment, missing category)
/// pairing of each qualifying journal.
pub fn combined_tsv(records: &[CombinedRecord], corpus: &Corpus) -> String {
    let mut out =
        String::from("journal_id\tassigned_category\tassigned_r\tmissing_category\tmissing_r\n");
    for rec in records {
        for &(ac, an) in &rec.weak_assignments {
            for &(mc, mn) in &rec.missing_categories {
                out.push_str(&format!(
                    "{}\t{}\t{:.6}\t{}\t{:.6}\n",
                    corpus.journal_id(rec.journal),
                    corpus.category_id(ac),
                    relatedness(an, rec.t),
                    corpus.category_id(mc),
                    relatedness(mn, rec.t),
                ));
            }
        }
    }
    out
}
