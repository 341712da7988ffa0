//! Synthetic corpus generation with planted classification errors, a
//! brute-force profile oracle, and detection scoring.
//!
//! The generator plants two error kinds. A misassigned journal keeps the
//! citation behavior of its true category but is recorded in a random other
//! one, so its recorded assignment ends up weakly related. A
//! missing-assignment journal splits its outgoing citations between its
//! recorded category and one extra category (weighted 3:1 toward the extra
//! one) and is citable through the extra category's pool, so the unrecorded
//! category ends up strongly related while the recorded one stays above
//! typical low-threshold cutoffs.
//!
//! All randomness flows from one seeded stream, except self-citation
//! injection which uses its own stream and appends edges after the regular
//! ones: enabling the knob must not change any profile, and the regular
//! edge list stays byte-identical.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::aggregate::{CitationProfile, ProfileSet};
use crate::corpus::{Corpus, CorpusBuilder, CorpusError, JournalIdx, YearRange};
use crate::criteria::FlagRecord;

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("could not read spec {path}: {source}")]
    SpecIo {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("could not parse spec {path}: {source}")]
    SpecParse {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("could not write {path}: {source}")]
    OutputIo {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("generated corpus failed validation: {0}")]
    Corpus(#[from] CorpusError),
    #[error("ground truth does not match corpus: unknown {what} {id:?}")]
    CorpusMismatch { what: &'static str, id: String },
}

fn invalid(msg: impl Into<String>) -> SynthError {
    SynthError::InvalidSpec(msg.into())
}

/// Parameters of a generated corpus. The seed fully determines the output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SyntheticSpec {
    pub category_count: usize,
    pub journals_per_category: usize,
    pub publications_per_journal: usize,
    /// Citations emitted per publication (exact, not an expectation).
    pub citations_per_publication: usize,
    /// Weight of the home category when drawing a citation target; the
    /// other categories get weight 1 each, so the home probability is
    /// affinity / (affinity + category_count - 1).
    pub affinity: f64,
    pub planted_misassignments: usize,
    pub planted_missing: usize,
    /// Fraction of same-journal edges appended on top of the regular ones,
    /// relative to the regular edge count. Default 0.
    pub self_citation_rate: f64,
    /// Reference keys drawn per publication (default 0; references.tsv is
    /// emitted either way).
    pub references_per_publication: usize,
    pub reference_pool_size: usize,
    pub seed: u64,
    pub window_start: i32,
    pub window_end: i32,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            category_count: 10,
            journals_per_category: 20,
            publications_per_journal: 20,
            citations_per_publication: 20,
            affinity: 9.0,
            planted_misassignments: 0,
            planted_missing: 0,
            self_citation_rate: 0.0,
            references_per_publication: 0,
            reference_pool_size: 500,
            seed: 0,
            window_start: 2010,
            window_end: 2014,
        }
    }
}

impl SyntheticSpec {
    pub fn from_file(path: &Path) -> Result<SyntheticSpec, SynthError> {
        let text = fs::read_to_string(path).map_err(|source| SynthError::SpecIo {
            path: path.display().to_string(),
            source,
        })?;
        let spec: SyntheticSpec =
            serde_json::from_str(&text).map_err(|source| SynthError::SpecParse {
                path: path.display().to_string(),
                source,
            })?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        if self.category_count == 0
            || self.journals_per_category == 0
            || self.publications_per_journal == 0
            || self.citations_per_publication == 0
        {
            return Err(invalid("all counts must be positive"));
        }
        if !(self.affinity.is_finite() && self.affinity >= 1.0) {
            return Err(invalid("affinity must be a finite number >= 1"));
        }
        if !(0.0..=1.0).contains(&self.self_citation_rate) {
            return Err(invalid("self_citation_rate must lie in [0, 1]"));
        }
        let journals = self.category_count * self.journals_per_category;
        if self.planted_misassignments + self.planted_missing > journals {
            return Err(invalid("planted error counts exceed the journal count"));
        }
        if (self.planted_misassignments > 0 || self.planted_missing > 0)
            && self.category_count < 2
        {
            return Err(invalid("planting errors requires at least two categories"));
        }
        if journals < 2 {
            return Err(invalid("citation targets require at least two journals"));
        }
        if self.self_citation_rate > 0.0 && self.publications_per_journal < 2 {
            return Err(invalid(
                "self-citation injection requires at least two publications per journal",
            ));
        }
        if self.references_per_publication > 0 && self.reference_pool_size == 0 {
            return Err(invalid("reference_pool_size must be positive when drawing references"));
        }
        if self.window_start > self.window_end {
            return Err(invalid("window_start must not exceed window_end"));
        }
        Ok(())
    }

    fn journal_count(&self) -> usize {
        self.category_count * self.journals_per_category
    }
}

/// Planted state of one journal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlantedError {
    Clean,
    Misassigned,
    MissingAssignment,
}

impl PlantedError {
    pub fn as_str(self) -> &'static str {
        match self {
            PlantedError::Clean => "none",
            PlantedError::Misassigned => "misassigned",
            PlantedError::MissingAssignment => "missing-assignment",
        }
    }
}

/// One ground-truth row. For misassigned journals `true_category` is the
/// category the citation behavior follows; for missing-assignment journals
/// it is the strongly related category absent from the records.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthRow {
    pub journal_id: String,
    pub true_category: String,
    pub kind: PlantedError,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroundTruth {
    pub rows: Vec<TruthRow>,
}

impl GroundTruth {
    pub fn tsv(&self) -> String {
        let mut out = String::from("journal_id\ttrue_category\terror_kind\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{}\t{}\t{}\n",
                row.journal_id,
                row.true_category,
                row.kind.as_str()
            ));
        }
        out
    }

    pub fn planted(&self, kind: PlantedError) -> impl Iterator<Item = &TruthRow> {
        self.rows.iter().filter(move |r| r.kind == kind)
    }
}

pub const GROUND_TRUTH_FILE: &str = "ground_truth.tsv";
pub const SPEC_ECHO_FILE: &str = "spec.json";

fn journal_id(i: usize) -> String {
    format!("J{i:04}")
}

fn category_id(c: usize) -> String {
    format!("C{c:02}")
}

fn pub_id(journal: usize, k: usize) -> String {
    format!("P{journal:04}_{k:03}")
}

/// Generates the corpus files plus `ground_truth.tsv` and a `spec.json`
/// echo into `out_dir`, and returns the ground truth. Identical specs yield
/// byte-identical directories.
pub fn generate(spec: &SyntheticSpec, out_dir: &Path) -> Result<GroundTruth, SynthError> {
    let (corpus, truth) = generate_corpus(spec)?;
    fs::create_dir_all(out_dir).map_err(|source| SynthError::OutputIo {
        path: out_dir.display().to_string(),
        source,
    })?;
    corpus.write_dir(out_dir).map_err(|source| SynthError::OutputIo {
        path: out_dir.display().to_string(),
        source,
    })?;
    let write = |name: &str, content: &str| -> Result<(), SynthError> {
        let path = out_dir.join(name);
        let mut f = fs::File::create(&path).map_err(|source| SynthError::OutputIo {
            path: path.display().to_string(),
            source,
        })?;
        f.write_all(content.as_bytes()).map_err(|source| SynthError::OutputIo {
            path: path.display().to_string(),
            source,
        })
    };
    write(GROUND_TRUTH_FILE, &truth.tsv())?;
    let mut echo = serde_json::to_string_pretty(spec).expect("spec serialization cannot fail");
    echo.push('\n');
    write(SPEC_ECHO_FILE, &echo)?;
    Ok(truth)
}

/// In-memory variant of [`generate`], for tests and harnesses.
pub fn generate_corpus(spec: &SyntheticSpec) -> Result<(Corpus, GroundTruth), SynthError> {
    spec.validate()?;
    let journals = spec.journal_count();
    let cats = spec.category_count;
    let jpc = spec.journals_per_category;
    let home = |j: usize| j / jpc;

    // Planted journals are spread round-robin over categories: slot k of
    // category c is journal c*jpc + k. Misassignments fill the earlier
    // slots, missing assignments the following ones.
    let mut kind = vec![PlantedError::Clean; journals];
    let slot = |index: usize| {
        let (round, cat) = (index / cats, index % cats);
        cat * jpc + round
    };
    for i in 0..spec.planted_misassignments {
        kind[slot(i)] = PlantedError::Misassigned;
    }
    for i in 0..spec.planted_missing {
        kind[slot(spec.planted_misassignments + i)] = PlantedError::MissingAssignment;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    // Recorded category, behavioral weights, and pool membership per journal.
    let mut recorded = Vec::with_capacity(journals);
    let mut extra: Vec<Option<usize>> = vec![None; journals];
    let mut pool_of = Vec::with_capacity(journals);
    for j in 0..journals {
        let h = home(j);
        match kind[j] {
            PlantedError::Clean => {
                recorded.push(h);
                pool_of.push(h);
            }
            PlantedError::Misassigned => {
                // Recorded elsewhere; behavior and pool stay at home.
                let mut r = rng.gen_range(0..cats - 1);
                if r >= h {
                    r += 1;
                }
                recorded.push(r);
                pool_of.push(h);
            }
            PlantedError::MissingAssignment => {
                // Recorded at home; behavior favors the next category over,
                // and the journal is citable through that pool.
                let m = (h + 1) % cats;
                recorded.push(h);
                extra[j] = Some(m);
                pool_of.push(m);
            }
        }
    }
    let mut pools: Vec<Vec<usize>> = vec![Vec::new(); cats];
    for j in 0..journals {
        pools[pool_of[j]].push(j);
    }

    let mut b = CorpusBuilder::new(YearRange::new(spec.window_start, spec.window_end));
    for c in 0..cats {
        b.category(&category_id(c), &format!("Category {c}"), false, None)?;
    }
    for (j, &rec) in recorded.iter().enumerate() {
        b.journal(&journal_id(j), &format!("Journal {j}"))?;
        b.assign(&journal_id(j), &category_id(rec), None)?;
    }
    let span = (spec.window_end - spec.window_start + 1) as usize;
    for j in 0..journals {
        for k in 0..spec.publications_per_journal {
            let year = spec.window_start + (k % span) as i32;
            b.publication(&pub_id(j, k), &journal_id(j), year)?;
        }
    }

    // Regular citation edges. Per journal: a category weight table (home
    // gets `affinity`, a missing journal's extra category 3x that, pools
    // with no valid target weight 0), then uniform journal within the pool
    // with self rerolled, then uniform publication.
    let mut regular_edges = 0u64;
    for j in 0..journals {
        let mut weights = vec![1.0f64; cats];
        weights[home(j)] = spec.affinity;
        if let Some(m) = extra[j] {
            weights[m] = 3.0 * spec.affinity;
        }
        for (c, w) in weights.iter_mut().enumerate() {
            let only_self = pools[c].len() == 1 && pools[c][0] == j;
            if pools[c].is_empty() || only_self {
                *w = 0.0;
            }
        }
        let dist = WeightedIndex::new(&weights)
            .map_err(|_| invalid("no citable journal outside the citing journal"))?;
        for k in 0..spec.publications_per_journal {
            for _ in 0..spec.citations_per_publication {
                let c = dist.sample(&mut rng);
                let target = loop {
                    let t = pools[c][rng.gen_range(0..pools[c].len())];
                    if t != j {
                        break t;
                    }
                };
                let tp = rng.gen_range(0..spec.publications_per_journal);
                b.cite(&pub_id(j, k), &pub_id(target, tp))?;
                regular_edges += 1;
            }
        }
    }

    // References, still on the main stream: a rate-0 and a rate-x run share
    // every regular draw.
    b.with_references();
    for j in 0..journals {
        for k in 0..spec.publications_per_journal {
            for _ in 0..spec.references_per_publication {
                let key = rng.gen_range(0..spec.reference_pool_size);
                b.reference(&pub_id(j, k), &format!("R{key:05}"))?;
            }
        }
    }

    // Self-citations ride a separate stream and are appended last.
    let self_edges = (spec.self_citation_rate * regular_edges as f64).floor() as u64;
    if self_edges > 0 {
        let mut srng = ChaCha8Rng::seed_from_u64(spec.seed ^ 0x9E37_79B9_7F4A_7C15);
        for _ in 0..self_edges {
            let j = srng.gen_range(0..journals);
            let a = srng.gen_range(0..spec.publications_per_journal);
            let bb = loop {
                let x = srng.gen_range(0..spec.publications_per_journal);
                if x != a {
                    break x;
                }
            };
            b.cite(&pub_id(j, a), &pub_id(j, bb))?;
        }
    }

    let corpus = b.build()?;
    let rows = (0..journals)
        .map(|j| TruthRow {
            journal_id: journal_id(j),
            true_category: category_id(extra[j].unwrap_or_else(|| home(j))),
            kind: kind[j],
        })
        .collect();
    Ok((corpus, GroundTruth { rows }))
}

// ===== oracle =====

/// Recomputes one journal's profile directly from the edge list: walk every
/// edge, apply the window and self-citation rules, and credit the opposite
/// endpoint's assignments. Shares no code with the parallel aggregation.
pub fn brute_force_profile(corpus: &Corpus, journal: JournalIdx) -> CitationProfile {
    let mut total = 0u64;
    let mut per_category: BTreeMap<_, u64> = BTreeMap::new();
    for e in corpus.edges() {
        let citing = corpus.publication(e.citing);
        let cited = corpus.publication(e.cited);
        if !corpus.window().contains(citing.year) || !corpus.window().contains(cited.year) {
            continue;
        }
        if citing.journal == cited.journal {
            continue;
        }
        let other = if citing.journal == journal {
            cited.journal
        } else if cited.journal == journal {
            citing.journal
        } else {
            continue;
        };
        total += 1;
        for &c in corpus.assignments(other) {
            *per_category.entry(c).or_insert(0) += 1;
        }
    }
    CitationProfile { journal, total, per_category }
}

/// Nearest-rank percentile of the citation totals, e.g. `0.1` for the 10th
/// percentile. Returns 0 for an empty profile set.
pub fn percentile_total(ps: &ProfileSet, fraction: f64) -> u64 {
    let mut totals: Vec<u64> = ps.profiles().iter().map(|p| p.total).collect();
    if totals.is_empty() {
        return 0;
    }
    totals.sort_unstable();
    let rank = (fraction * totals.len() as f64).ceil() as usize;
    totals[rank.clamp(1, totals.len()) - 1]
}

// ===== detection scoring =====

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetectionKind {
    /// Score flags against recorded-but-false categories of misassigned
    /// journals.
    Misassigned,
    /// Score flags against true-but-unrecorded categories of
    /// missing-assignment journals.
    Missing,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionMetrics {
    pub precision: f64,
    pub recall: f64,
    pub flagged: u64,
    pub planted: u64,
}

/// Precision and recall of a flag list against the planted pairs of one
/// error kind. An empty flag list scores precision 1; an empty planted set
/// scores recall 1.
pub fn evaluate_detection(
    flags: &[FlagRecord],
    truth: &GroundTruth,
    corpus: &Corpus,
    kind: DetectionKind,
) -> Result<DetectionMetrics, SynthError> {
    use std::collections::HashSet;
    let mut planted = HashSet::new();
    for row in &truth.rows {
        let j = corpus.find_journal(&row.journal_id).ok_or(SynthError::CorpusMismatch {
            what: "journal",
            id: row.journal_id.clone(),
        })?;
        let truth_cat =
            corpus.find_category(&row.true_category).ok_or(SynthError::CorpusMismatch {
                what: "category",
                id: row.true_category.clone(),
            })?;
        match (kind, row.kind) {
            (DetectionKind::Misassigned, PlantedError::Misassigned) => {
                for &c in corpus.assignments(j) {
                    if c != truth_cat {
                        planted.insert((j, c));
                    }
                }
            }
            (DetectionKind::Missing, PlantedError::MissingAssignment)
                if !corpus.is_assigned(j, truth_cat) =>
            {
                planted.insert((j, truth_cat));
            }
            _ => {}
        }
    }
    let flagged: HashSet<_> = flags.iter().map(|f| (f.journal, f.category)).collect();
    let hit = flagged.intersection(&planted).count() as u64;
    let precision =
        if flagged.is_empty() { 1.0 } else { hit as f64 / flagged.len() as f64 };
    let recall = if planted.is_empty() { 1.0 } else { hit as f64 / planted.len() as f64 };
    Ok(DetectionMetrics {
        precision,
        recall,
        flagged: flagged.len() as u64,
        planted: planted.len() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aggregate::build_profiles;
    use crate::corpus::{load_corpus, CorpusPaths};
    use crate::criteria::{criterion_one, criterion_two, relatedness, AuditConfig, Criterion, Threshold};
    use std::path::PathBuf;

    fn small_spec() -> SyntheticSpec {
        SyntheticSpec {
            category_count: 3,
            journals_per_category: 4,
            publications_per_journal: 3,
            citations_per_publication: 5,
            affinity: 4.0,
            seed: 7,
            ..SyntheticSpec::default()
        }
    }

    #[test]
    fn spec_validation_rejects_bad_fields() {
        assert!(SyntheticSpec::default().validate().is_ok());
        let bad = [
            SyntheticSpec { category_count: 0, ..SyntheticSpec::default() },
            SyntheticSpec { affinity: 0.5, ..SyntheticSpec::default() },
            SyntheticSpec {
                planted_misassignments: 1000,
                planted_missing: 1000,
                ..SyntheticSpec::default()
            },
            SyntheticSpec {
                self_citation_rate: 0.1,
                publications_per_journal: 1,
                ..SyntheticSpec::default()
            },
            SyntheticSpec { window_start: 2015, ..SyntheticSpec::default() },
            SyntheticSpec {
                category_count: 1,
                planted_misassignments: 1,
                ..SyntheticSpec::default()
            },
        ];
        for spec in bad {
            assert!(spec.validate().is_err(), "{spec:?}");
        }
    }

    #[test]
    fn spec_json_round_trip_applies_defaults() {
        let spec: SyntheticSpec = serde_json::from_str("{}").unwrap();
        assert_eq!(spec, SyntheticSpec::default());
        let spec: SyntheticSpec = serde_json::from_str(r#"{"seed": 42, "affinity": 9.0}"#).unwrap();
        assert_eq!(spec.seed, 42);
        let echoed: SyntheticSpec =
            serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(echoed, spec);
        assert!(serde_json::from_str::<SyntheticSpec>(r#"{"bogus": 1}"#).is_err());
    }

    fn read_dir_bytes(dir: &Path) -> BTreeMap<String, Vec<u8>> {
        let mut out = BTreeMap::new();
        for entry in fs::read_dir(dir).unwrap() {
            let entry = entry.unwrap();
            out.insert(
                entry.file_name().to_string_lossy().into_owned(),
                fs::read(entry.path()).unwrap(),
            );
        }
        out
    }

    #[test]
    fn generation_is_deterministic_and_complete() {
        let spec = SyntheticSpec { planted_misassignments: 2, planted_missing: 1, ..small_spec() };
        let d1 = tempfile::tempdir().unwrap();
        let d2 = tempfile::tempdir().unwrap();
        let t1 = generate(&spec, d1.path()).unwrap();
        let t2 = generate(&spec, d2.path()).unwrap();
        assert_eq!(t1, t2);
        let b1 = read_dir_bytes(d1.path());
        let b2 = read_dir_bytes(d2.path());
        assert_eq!(b1, b2);
        let names: Vec<&str> = b1.keys().map(|s| s.as_str()).collect();
        assert_eq!(
            names,
            vec![
                "assignments.tsv",
                "categories.tsv",
                "citations.tsv",
                "ground_truth.tsv",
                "journals.tsv",
                "publications.tsv",
                "references.tsv",
                "spec.json",
            ]
        );
        // The echoed spec.json parses back to the input.
        let echoed: SyntheticSpec =
            serde_json::from_str(std::str::from_utf8(&b1["spec.json"]).unwrap()).unwrap();
        assert_eq!(echoed, spec);
        // A different seed changes the corpus.
        let d3 = tempfile::tempdir().unwrap();
        generate(&SyntheticSpec { seed: 8, ..spec.clone() }, d3.path()).unwrap();
        assert_ne!(b1["citations.tsv"], read_dir_bytes(d3.path())["citations.tsv"]);
    }

    #[test]
    fn clean_spec_lists_no_errors() {
        let (corpus, truth) = generate_corpus(&small_spec()).unwrap();
        assert!(truth.rows.iter().all(|r| r.kind == PlantedError::Clean));
        assert_eq!(truth.rows.len(), corpus.journals().len());
        for row in &truth.rows {
            let j = corpus.find_journal(&row.journal_id).unwrap();
            let c = corpus.find_category(&row.true_category).unwrap();
            assert!(corpus.is_assigned(j, c), "clean journals are recorded at home");
        }
    }

    #[test]
    fn planted_rows_disagree_with_records() {
        let spec = SyntheticSpec {
            planted_misassignments: 3,
            planted_missing: 2,
            ..small_spec()
        };
        let (corpus, truth) = generate_corpus(&spec).unwrap();
        assert_eq!(truth.planted(PlantedError::Misassigned).count(), 3);
        assert_eq!(truth.planted(PlantedError::MissingAssignment).count(), 2);
        for row in truth.planted(PlantedError::Misassigned) {
            let j = corpus.find_journal(&row.journal_id).unwrap();
            let c = corpus.find_category(&row.true_category).unwrap();
            assert!(!corpus.is_assigned(j, c), "recorded away from the true category");
            assert_eq!(corpus.assignments(j).len(), 1);
        }
        for row in truth.planted(PlantedError::MissingAssignment) {
            let j = corpus.find_journal(&row.journal_id).unwrap();
            let c = corpus.find_category(&row.true_category).unwrap();
            assert!(!corpus.is_assigned(j, c), "strong category is unrecorded");
            assert_eq!(corpus.assignments(j).len(), 1, "still recorded somewhere");
        }
        let tsv = truth.tsv();
        assert!(tsv.starts_with("journal_id\ttrue_category\terror_kind\n"));
        assert!(tsv.contains("\tmisassigned\n"));
        assert!(tsv.contains("\tmissing-assignment\n"));
    }

    #[test]
    fn oracle_matches_hand_counts_on_the_micro_corpus() {
        let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/d1");
        let c = load_corpus(&CorpusPaths::from_dir(dir), &AuditConfig::default()).unwrap();
        let a = brute_force_profile(&c, c.find_journal("A").unwrap());
        assert_eq!(a.total, 3);
        assert_eq!(a.n(c.find_category("X").unwrap()), 1);
        assert_eq!(a.n(c.find_category("Y").unwrap()), 2);
    }

    #[test]
    fn oracle_is_all_zero_without_edges() {
        let mut b = CorpusBuilder::new(YearRange::new(2010, 2014));
        b.journal("J", "j").unwrap();
        let c = b.build().unwrap();
        let p = brute_force_profile(&c, c.find_journal("J").unwrap());
        assert_eq!(p.total, 0);
        assert!(p.per_category.is_empty());
    }

    #[test]
    fn oracle_agrees_with_aggregation_on_generated_corpora() {
        let specs = [
            small_spec(),
            SyntheticSpec { planted_misassignments: 2, planted_missing: 2, ..small_spec() },
            SyntheticSpec {
                self_citation_rate: 0.3,
                references_per_publication: 4,
                reference_pool_size: 10,
                seed: 11,
                ..small_spec()
            },
        ];
        for spec in specs {
            let (c, _) = generate_corpus(&spec).unwrap();
            let ps = build_profiles(&c);
            for j in c.journal_indices() {
                assert_eq!(ps.profile(j), &brute_force_profile(&c, j));
            }
        }
    }

    #[test]
    fn self_citation_stream_leaves_profiles_unchanged() {
        let base = small_spec();
        let noisy = SyntheticSpec { self_citation_rate: 0.25, ..base.clone() };
        let (c0, _) = generate_corpus(&base).unwrap();
        let (c1, _) = generate_corpus(&noisy).unwrap();
        let expected_extra = (0.25 * c0.edges().len() as f64).floor() as usize;
        assert!(expected_extra > 0);
        assert_eq!(c1.edges().len(), c0.edges().len() + expected_extra);
        let p0 = build_profiles(&c0);
        let p1 = build_profiles(&c1);
        assert_eq!(p0.profiles(), p1.profiles());
        assert_eq!(p1.self_citations_excluded, expected_extra as u64);
    }

    #[test]
    fn home_category_dominates_clean_profiles() {
        // 10x20x20 at affinity 9 with 10 misassignments, seed 42: the home
        // share sits near one half by construction (9 / (9 + 9)), so home
        // clears 0.4 comfortably and is every clean journal's strongest
        // category.
        let spec = SyntheticSpec {
            planted_misassignments: 10,
            seed: 42,
            ..SyntheticSpec::default()
        };
        let (c, truth) = generate_corpus(&spec).unwrap();
        let ps = build_profiles(&c);
        let mut sum = 0.0;
        let mut count = 0u32;
        for row in truth.planted(PlantedError::Clean) {
            let j = c.find_journal(&row.journal_id).unwrap();
            let h = c.find_category(&row.true_category).unwrap();
            let p = ps.profile(j);
            let r_home = relatedness(p.n(h), p.total);
            assert!(r_home > 0.4, "{}: home r {r_home}", row.journal_id);
            let best = p.per_category.iter().max_by_key(|(_, &n)| n).map(|(&cat, _)| cat);
            assert_eq!(best, Some(h), "{}: home is the strongest category", row.journal_id);
            sum += r_home;
            count += 1;
        }
        let mean = sum / count as f64;
        assert!((0.45..0.55).contains(&mean), "mean home r {mean}");
    }

    #[test]
    fn detection_scores_constructed_flag_sets() {
        let spec = SyntheticSpec {
            category_count: 5,
            journals_per_category: 4,
            publications_per_journal: 3,
            citations_per_publication: 6,
            affinity: 4.0,
            planted_misassignments: 10,
            seed: 3,
            ..SyntheticSpec::default()
        };
        let (c, truth) = generate_corpus(&spec).unwrap();
        let planted: Vec<_> = truth.planted(PlantedError::Misassigned).collect();
        assert_eq!(planted.len(), 10);
        // Flag 8 of the 10 planted recorded pairs plus 2 clean journals.
        let mut flags = Vec::new();
        for row in planted.iter().take(8) {
            let j = c.find_journal(&row.journal_id).unwrap();
            let cat = c.assignments(j)[0];
            flags.push(FlagRecord { journal: j, category: cat, n: 0, t: 1, criterion: Criterion::One, assigned: true });
        }
        for row in truth.planted(PlantedError::Clean).take(2) {
            let j = c.find_journal(&row.journal_id).unwrap();
            let cat = c.assignments(j)[0];
            flags.push(FlagRecord { journal: j, category: cat, n: 0, t: 1, criterion: Criterion::One, assigned: true });
        }
        let m = evaluate_detection(&flags, &truth, &c, DetectionKind::Misassigned).unwrap();
        assert_eq!((m.flagged, m.planted), (10, 10));
        assert!((m.precision - 0.8).abs() < 1e-12);
        assert!((m.recall - 0.8).abs() < 1e-12);
        // Degenerate conventions.
        let m = evaluate_detection(&[], &truth, &c, DetectionKind::Misassigned).unwrap();
        assert_eq!((m.precision, m.recall), (1.0, 0.0));
        let m = evaluate_detection(&[], &truth, &c, DetectionKind::Missing).unwrap();
        assert_eq!((m.precision, m.recall), (1.0, 1.0), "no planted missing journals");
    }

    #[test]
    fn detection_rejects_foreign_truth() {
        let (c, _) = generate_corpus(&small_spec()).unwrap();
        let truth = GroundTruth {
            rows: vec![TruthRow {
                journal_id: "GHOST".into(),
                true_category: "C00".into(),
                kind: PlantedError::Clean,
            }],
        };
        assert!(matches!(
            evaluate_detection(&[], &truth, &c, DetectionKind::Misassigned),
            Err(SynthError::CorpusMismatch { what: "journal", .. })
        ));
    }

    #[test]
    fn percentile_total_uses_nearest_rank() {
        let spec = small_spec();
        let (c, _) = generate_corpus(&spec).unwrap();
        let ps = build_profiles(&c);
        let mut totals: Vec<u64> = ps.profiles().iter().map(|p| p.total).collect();
        totals.sort_unstable();
        let p10 = percentile_total(&ps, 0.1);
        assert!(totals.contains(&p10));
        let below = totals.iter().filter(|&&t| t < p10).count();
        assert!(below as f64 <= 0.1 * totals.len() as f64);
        assert_eq!(percentile_total(&ps, 1.0), *totals.last().unwrap());
    }

    #[test]
    fn misassignment_recall_grows_with_the_cutoff() {
        // The recorded category of a misassigned journal sits near the
        // random-share level 0.5 / (C - 1), which at ten categories lands
        // between 0.05 and 0.1: the looser cutoff catches what the tighter
        // one misses.
        let spec = SyntheticSpec {
            journals_per_category: 10,
            publications_per_journal: 10,
            planted_misassignments: 10,
            seed: 1,
            ..SyntheticSpec::default()
        };
        let (c, truth) = generate_corpus(&spec).unwrap();
        let ps = build_profiles(&c);
        let cfg = AuditConfig {
            min_citations: percentile_total(&ps, 0.1),
            ..AuditConfig::default()
        };
        let recall_at = |alpha: &str| {
            let flags = criterion_one(&ps, &c, &Threshold::parse(alpha).unwrap(), &cfg);
            evaluate_detection(&flags, &truth, &c, DetectionKind::Misassigned)
                .unwrap()
                .recall
        };
        let tight = recall_at("0.05");
        let loose = recall_at("0.1");
        assert!(loose > tight, "recall {loose} at 0.1 vs {tight} at 0.05");
        assert!(loose >= 0.8);
    }

    #[test]
    fn missing_assignments_surface_at_the_strong_cutoff() {
        let spec = SyntheticSpec {
            journals_per_category: 10,
            publications_per_journal: 10,
            planted_missing: 10,
            seed: 5,
            ..SyntheticSpec::default()
        };
        let (c, truth) = generate_corpus(&spec).unwrap();
        let ps = build_profiles(&c);
        let cfg = AuditConfig {
            min_citations: percentile_total(&ps, 0.1),
            ..AuditConfig::default()
        };
        let flags = criterion_two(&ps, &c, &Threshold::parse("0.5").unwrap(), &cfg);
        let m = evaluate_detection(&flags, &truth, &c, DetectionKind::Missing).unwrap();
        assert!(m.recall >= 0.6, "recall {}", m.recall);
    }
}
