//! Citation profile aggregation: for every journal, the total number of
//! citation links it exchanges with other journals inside the analysis
//! window, and the share of those links per category.
//!
//! Counting rules:
//! * citation direction is ignored; each edge credits both endpoint journals,
//! * links between publications of the same journal are excluded,
//! * both endpoint publications must fall inside the window,
//! * duplicate edges count with their multiplicity,
//! * an edge credits category counts on each side according to the categories
//!   assigned to the *opposite* journal, so unassigned neighbors still raise
//!   the total but no category count.

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::corpus::{CategoryIdx, Corpus, JournalIdx};

/// Per-journal citation totals. `per_category` holds only nonzero counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CitationProfile {
    pub journal: JournalIdx,
    /// Total in-window, non-self citation links (both directions).
    pub total: u64,
    /// Links to journals assigned to each category. A single link raises
    /// several counts when the opposite journal has several categories, so
    /// these values can sum past `total`.
    pub per_category: BTreeMap<CategoryIdx, u64>,
}

impl CitationProfile {
    pub fn n(&self, c: CategoryIdx) -> u64 {
        self.per_category.get(&c).copied().unwrap_or(0)
    }
}

/// One profile per journal of the corpus, in journal-handle order, plus
/// accounting for the edges that were consumed or excluded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileSet {
    profiles: Vec<CitationProfile>,
    pub edges_used: u64,
    pub self_citations_excluded: u64,
    pub out_of_window_excluded: u64,
}

impl ProfileSet {
    pub fn profiles(&self) -> &[CitationProfile] {
        &self.profiles
    }

    pub fn profile(&self, j: JournalIdx) -> &CitationProfile {
        &self.profiles[j.idx()]
    }

    pub fn t(&self, j: JournalIdx) -> u64 {
        self.profiles[j.idx()].total
    }

    pub fn n(&self, j: JournalIdx, c: CategoryIdx) -> u64 {
        self.profiles[j.idx()].n(c)
    }
}

#[derive(Debug, Error)]
pub enum ProfileError {
    #[error("unknown journal {id:?}")]
    UnknownJournal { id: String },
}

struct Acc {
    t: Vec<u64>,
    n: Vec<BTreeMap<CategoryIdx, u64>>,
    used: u64,
    self_excluded: u64,
    window_excluded: u64,
}

impl Acc {
    fn new(journals: usize) -> Self {
        Acc {
            t: vec![0; journals],
            n: vec![BTreeMap::new(); journals],
            used: 0,
            self_excluded: 0,
            window_excluded: 0,
        }
    }

    fn merge(mut self, other: Acc) -> Acc {
        for (a, b) in self.t.iter_mut().zip(other.t) {
            *a += b;
        }
        for (a, b) in self.n.iter_mut().zip(other.n) {
            for (c, v) in b {
                *a.entry(c).or_insert(0) += v;
            }
        }
        self.used += other.used;
        self.self_excluded += other.self_excluded;
        self.window_excluded += other.window_excluded;
        self
    }
}

/// Builds all journal profiles in one pass over the citation edges.
///
/// Edges are sharded across worker threads and the integer counts merged by
/// addition, so the result does not depend on the thread count.
pub fn build_profiles(corpus: &Corpus) -> ProfileSet {
    let journals = corpus.journals().len();
    let acc = corpus
        .edges()
        .par_iter()
        .fold(
            || Acc::new(journals),
            |mut acc, edge| {
                if !corpus.pub_in_window(edge.citing) || !corpus.pub_in_window(edge.cited) {
                    acc.window_excluded += 1;
                    return acc;
                }
                let citing = corpus.publication(edge.citing).journal;
                let cited = corpus.publication(edge.cited).journal;
                if citing == cited {
                    acc.self_excluded += 1;
                    return acc;
                }
                acc.used += 1;
                acc.t[citing.idx()] += 1;
                acc.t[cited.idx()] += 1;
                for &c in corpus.assignments(cited) {
                    *acc.n[citing.idx()].entry(c).or_insert(0) += 1;
                }
                for &c in corpus.assignments(citing) {
                    *acc.n[cited.idx()].entry(c).or_insert(0) += 1;
                }
                acc
            },
        )
        .reduce(|| Acc::new(journals), Acc::merge);

    let profiles = acc
        .t
        .into_iter()
        .zip(acc.n)
        .enumerate()
        .map(|(j, (total, per_category))| CitationProfile {
            journal: JournalIdx(j as u32),
            total,
            per_category,
        })
        .collect();

    ProfileSet {
        profiles,
        edges_used: acc.used,
        self_citations_excluded: acc.self_excluded,
        out_of_window_excluded: acc.window_excluded,
    }
}

/// Looks up the profile for a journal by its id.
pub fn profile_of<'a>(
    ps: &'a ProfileSet,
    corpus: &Corpus,
    journal_id: &str,
) -> Result<&'a CitationProfile, ProfileError> {
    corpus
        .find_journal(journal_id)
        .map(|j| ps.profile(j))
        .ok_or_else(|| ProfileError::UnknownJournal { id: journal_id.to_owned() })
}

/// Flat dump of all nonzero (journal, category) counts, sorted by journal id
/// then category id.
pub fn profiles_tsv(ps: &ProfileSet, corpus: &Corpus) -> String {
    let mut rows: Vec<(&str, &str, u64, u64)> = Vec::new();
    for p in ps.profiles() {
        for (&c, &n) in &p.per_category {
            rows.push((corpus.journal_id(p.journal), corpus.category_id(c), p.total, n));
        }
    }
    rows.sort();
    let mut out = String::from("journal_id\tt\tcategory_id\tn\n");
    for (j, c, t, n) in rows {
        out.push_str(&format!("{j}\t{t}\t{c}\t{n}\n"));
    }
    out
}
