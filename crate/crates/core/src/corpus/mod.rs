//! Corpus model: journals, categories, assignments, publications, and the
//! citation graph, loaded from flat TSV files or assembled programmatically.
//!
//! All cross-references are resolved to dense integer handles at construction
//! time; every handle stored in a [`Corpus`] is guaranteed to be in bounds.

pub mod tsv;

pub use tsv::{load_corpus, CorpusPaths};

use std::collections::HashMap;
use std::io;
use std::path::PathBuf;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Dense handle for a journal, valid for the corpus that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JournalIdx(pub u32);

/// Dense handle for a category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CategoryIdx(pub u32);

/// Dense handle for a publication.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PubIdx(pub u32);

impl JournalIdx {
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl CategoryIdx {
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl PubIdx {
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Journal {
    pub id: String,
    pub title: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Category {
    pub id: String,
    pub label: String,
    pub multidisciplinary: bool,
    pub parent: Option<CategoryIdx>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Publication {
    pub id: String,
    pub journal: JournalIdx,
    pub year: i32,
}

/// One citation from `citing` to `cited`. Duplicates are legal and carry
/// multiplicity; a publication never cites itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CitationEdge {
    pub citing: PubIdx,
    pub cited: PubIdx,
}

/// One entry of a publication's reference list, identified by an opaque key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceRecord {
    pub publication: PubIdx,
    pub ref_key: String,
}

/// A journal-to-category assignment as it appears on disk, before snapshot
/// resolution. Keys are raw ids, not handles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub journal_id: String,
    pub category_id: String,
    pub snapshot: Option<NaiveDate>,
}

/// Inclusive year range delimiting the analysis window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct YearRange {
    pub start: i32,
    pub end: i32,
}

impl YearRange {
    pub fn new(start: i32, end: i32) -> Self {
        YearRange { start, end }
    }

    pub fn contains(&self, year: i32) -> bool {
        self.start <= year && year <= self.end
    }
}

/// Resolved assignments of one journal: the categories recorded at the most
/// recent snapshot, plus that snapshot date (None when all rows were undated).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
struct JournalAssignments {
    snapshot: Option<NaiveDate>,
    categories: Vec<CategoryIdx>,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("missing input file: {}", path.display())]
    MissingFile { path: PathBuf },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{file}:{line}: {reason}")]
    Row {
        file: String,
        line: u64,
        reason: String,
    },
    #[error("category {id:?} references unknown parent {parent:?}")]
    UnknownParent { id: String, parent: String },
    #[error("category parent chain cycles through {id:?}")]
    ParentCycle { id: String },
    #[error("{0}")]
    Invalid(String),
}

/// Keeps only each journal's most recent assignment snapshot.
///
/// Undated rows form an implicit snapshot that is older than any dated one,
/// so they survive only for journals with no dated rows at all. Row order is
/// preserved, which makes the operation idempotent.
pub fn resolve_assignments(raw: &[Assignment]) -> Vec<Assignment> {
    let mut latest: HashMap<&str, Option<NaiveDate>> = HashMap::new();
    for a in raw {
        let e = latest.entry(a.journal_id.as_str()).or_insert(None);
        // Option<NaiveDate> orders None before any date.
        if a.snapshot > *e {
            *e = a.snapshot;
        }
    }
    raw.iter()
        .filter(|a| latest[a.journal_id.as_str()] == a.snapshot)
        .cloned()
        .collect()
}

/// Diagnostics produced by [`validate_corpus`]. All entries are warnings;
/// hard violations are rejected at construction time instead.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    /// Journals with no resolved category assignment.
    pub unassigned_journals: Vec<JournalIdx>,
    /// Categories no journal is assigned to.
    pub empty_categories: Vec<CategoryIdx>,
    /// Publications whose year falls outside the analysis window.
    pub out_of_window_publications: u64,
    /// Edges whose endpoints are publications of the same journal,
    /// counted regardless of window.
    pub self_citation_edges: u64,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.unassigned_journals.is_empty()
            && self.empty_categories.is_empty()
            && self.out_of_window_publications == 0
            && self.self_citation_edges == 0
    }
}

pub fn validate_corpus(corpus: &Corpus) -> ValidationReport {
    let unassigned_journals = corpus
        .journal_indices()
        .filter(|&j| corpus.assignments(j).is_empty())
        .collect();
    let mut seen = vec![false; corpus.categories.len()];
    for j in corpus.journal_indices() {
        for &c in corpus.assignments(j) {
            seen[c.idx()] = true;
        }
    }
    let empty_categories = corpus
        .category_indices()
        .filter(|&c| !seen[c.idx()])
        .collect();
    let out_of_window_publications = corpus
        .publications
        .iter()
        .filter(|p| !corpus.window.contains(p.year))
        .count() as u64;
    let self_citation_edges = corpus
        .edges
        .iter()
        .filter(|e| {
            corpus.publications[e.citing.idx()].journal == corpus.publications[e.cited.idx()].journal
        })
        .count() as u64;
    ValidationReport {
        unassigned_journals,
        empty_categories,
        out_of_window_publications,
        self_citation_edges,
    }
}

/// Immutable corpus with all keys resolved. Construct with [`CorpusBuilder`]
/// or [`load_corpus`].
#[derive(Debug, Clone)]
pub struct Corpus {
    journals: Vec<Journal>,
    categories: Vec<Category>,
    assignments: Vec<JournalAssignments>,
    publications: Vec<Publication>,
    edges: Vec<CitationEdge>,
    references: Option<Vec<ReferenceRecord>>,
    window: YearRange,
    journal_index: HashMap<String, JournalIdx>,
    category_index: HashMap<String, CategoryIdx>,
    pub_index: HashMap<String, PubIdx>,
}

impl PartialEq for Corpus {
    fn eq(&self, other: &Self) -> bool {
        // Index maps are derived from the id lists and carry no extra state.
        self.journals == other.journals
            && self.categories == other.categories
            && self.assignments == other.assignments
            && self.publications == other.publications
            && self.edges == other.edges
            && self.references == other.references
            && self.window == other.window
    }
}

impl Corpus {
    pub fn journals(&self) -> &[Journal] {
        &self.journals
    }

    pub fn categories(&self) -> &[Category] {
        &self.categories
    }

    pub fn publications(&self) -> &[Publication] {
        &self.publications
    }

    pub fn edges(&self) -> &[CitationEdge] {
        &self.edges
    }

    pub fn references(&self) -> Option<&[ReferenceRecord]> {
        self.references.as_deref()
    }

    pub fn window(&self) -> YearRange {
        self.window
    }

    pub fn journal(&self, j: JournalIdx) -> &Journal {
        &self.journals[j.idx()]
    }

    pub fn category(&self, c: CategoryIdx) -> &Category {
        &self.categories[c.idx()]
    }

    pub fn publication(&self, p: PubIdx) -> &Publication {
        &self.publications[p.idx()]
    }

    pub fn journal_id(&self, j: JournalIdx) -> &str {
        &self.journals[j.idx()].id
    }

    pub fn category_id(&self, c: CategoryIdx) -> &str {
        &self.categories[c.idx()].id
    }

    pub fn find_journal(&self, id: &str) -> Option<JournalIdx> {
        self.journal_index.get(id).copied()
    }

    pub fn find_category(&self, id: &str) -> Option<CategoryIdx> {
        self.category_index.get(id).copied()
    }

    pub fn find_publication(&self, id: &str) -> Option<PubIdx> {
        self.pub_index.get(id).copied()
    }

    pub fn journal_indices(&self) -> impl Iterator<Item = JournalIdx> {
        (0..self.journals.len() as u32).map(JournalIdx)
    }

    pub fn category_indices(&self) -> impl Iterator<Item = CategoryIdx> {
        (0..self.categories.len() as u32).map(CategoryIdx)
    }

    pub fn pub_indices(&self) -> impl Iterator<Item = PubIdx> {
        (0..self.publications.len() as u32).map(PubIdx)
    }

    /// Resolved categories of a journal, sorted by handle.
    pub fn assignments(&self, j: JournalIdx) -> &[CategoryIdx] {
        &self.assignments[j.idx()].categories
    }

    /// Snapshot date the surviving assignments were taken from.
    pub fn assignment_snapshot(&self, j: JournalIdx) -> Option<NaiveDate> {
        self.assignments[j.idx()].snapshot
    }

    pub fn is_assigned(&self, j: JournalIdx, c: CategoryIdx) -> bool {
        self.assignments[j.idx()].categories.binary_search(&c).is_ok()
    }

    pub fn pub_in_window(&self, p: PubIdx) -> bool {
        self.window.contains(self.publications[p.idx()].year)
    }

    /// Resolved assignments flattened back to id-keyed rows, in stored order.
    pub fn resolved_assignment_rows(&self) -> Vec<Assignment> {
        let mut rows = Vec::new();
        for j in self.journal_indices() {
            let ja = &self.assignments[j.idx()];
            for &c in &ja.categories {
                rows.push(Assignment {
                    journal_id: self.journal_id(j).to_owned(),
                    category_id: self.category_id(c).to_owned(),
                    snapshot: ja.snapshot,
                });
            }
        }
        rows
    }
}

/// Incremental corpus assembly with immediate key resolution.
///
/// Entities must be added in dependency order: journals and categories before
/// assignments and publications, publications before citations and references.
#[derive(Debug)]
pub struct CorpusBuilder {
    journals: Vec<Journal>,
    categories: Vec<(String, String, bool, Option<String>)>,
    raw_assignments: Vec<Assignment>,
    assignment_keys: HashMap<(String, String), Vec<Option<NaiveDate>>>,
    publications: Vec<Publication>,
    edges: Vec<CitationEdge>,
    references: Option<Vec<ReferenceRecord>>,
    window: YearRange,
    journal_index: HashMap<String, JournalIdx>,
    category_index: HashMap<String, CategoryIdx>,
    pub_index: HashMap<String, PubIdx>,
}

fn check_field(kind: &str, s: &str) -> Result<(), CorpusError> {
    if s.contains('\t') || s.contains('\n') || s.contains('\r') {
        return Err(CorpusError::Invalid(format!(
            "{kind} contains a tab or newline: {s:?}"
        )));
    }
    Ok(())
}

impl CorpusBuilder {
    pub fn new(window: YearRange) -> Self {
        CorpusBuilder {
            journals: Vec::new(),
            categories: Vec::new(),
            raw_assignments: Vec::new(),
            assignment_keys: HashMap::new(),
            publications: Vec::new(),
            edges: Vec::new(),
            references: None,
            window,
            journal_index: HashMap::new(),
            category_index: HashMap::new(),
            pub_index: HashMap::new(),
        }
    }

    pub fn journal(&mut self, id: &str, title: &str) -> Result<(), CorpusError> {
        if id.is_empty() {
            return Err(CorpusError::Invalid("empty journal_id".into()));
        }
        check_field("journal_id", id)?;
        check_field("title", title)?;
        let idx = JournalIdx(self.journals.len() as u32);
        if self.journal_index.insert(id.to_owned(), idx).is_some() {
            return Err(CorpusError::Invalid(format!("duplicate journal_id {id:?}")));
        }
        self.journals.push(Journal {
            id: id.to_owned(),
            title: title.to_owned(),
        });
        Ok(())
    }

    pub fn category(
        &mut self,
        id: &str,
        label: &str,
        multidisciplinary: bool,
        parent: Option<&str>,
    ) -> Result<(), CorpusError> {
        if id.is_empty() {
            return Err(CorpusError::Invalid("empty category_id".into()));
        }
        check_field("category_id", id)?;
        check_field("label", label)?;
        let idx = CategoryIdx(self.categories.len() as u32);
        if self.category_index.insert(id.to_owned(), idx).is_some() {
            return Err(CorpusError::Invalid(format!("duplicate category_id {id:?}")));
        }
        self.categories.push((
            id.to_owned(),
            label.to_owned(),
            multidisciplinary,
            parent.map(str::to_owned),
        ));
        Ok(())
    }

    pub fn assign(
        &mut self,
        journal_id: &str,
        category_id: &str,
        snapshot: Option<NaiveDate>,
    ) -> Result<(), CorpusError> {
        if !self.journal_index.contains_key(journal_id) {
            return Err(CorpusError::Invalid(format!("unknown journal {journal_id:?}")));
        }
        if !self.category_index.contains_key(category_id) {
            return Err(CorpusError::Invalid(format!("unknown category {category_id:?}")));
        }
        let key = (journal_id.to_owned(), category_id.to_owned());
        let snaps = self.assignment_keys.entry(key).or_default();
        if snaps.contains(&snapshot) {
            return Err(CorpusError::Invalid(format!(
                "duplicate assignment of {journal_id:?} to {category_id:?} at the same snapshot"
            )));
        }
        snaps.push(snapshot);
        self.raw_assignments.push(Assignment {
            journal_id: journal_id.to_owned(),
            category_id: category_id.to_owned(),
            snapshot,
        });
        Ok(())
    }

    pub fn publication(&mut self, id: &str, journal_id: &str, year: i32) -> Result<(), CorpusError> {
        if id.is_empty() {
            return Err(CorpusError::Invalid("empty pub_id".into()));
        }
        check_field("pub_id", id)?;
        let Some(&journal) = self.journal_index.get(journal_id) else {
            return Err(CorpusError::Invalid(format!("unknown journal {journal_id:?}")));
        };
        let idx = PubIdx(self.publications.len() as u32);
        if self.pub_index.insert(id.to_owned(), idx).is_some() {
            return Err(CorpusError::Invalid(format!("duplicate pub_id {id:?}")));
        }
        self.publications.push(Publication {
            id: id.to_owned(),
            journal,
            year,
        });
        Ok(())
    }

    pub fn cite(&mut self, citing_id: &str, cited_id: &str) -> Result<(), CorpusError> {
        let Some(&citing) = self.pub_index.get(citing_id) else {
            return Err(CorpusError::Invalid(format!("unknown publication {citing_id:?}")));
        };
        let Some(&cited) = self.pub_index.get(cited_id) else {
            return Err(CorpusError::Invalid(format!("unknown publication {cited_id:?}")));
        };
        if citing == cited {
            return Err(CorpusError::Invalid(format!(
                "publication {citing_id:?} cites itself"
            )));
        }
        self.edges.push(CitationEdge { citing, cited });
        Ok(())
    }

    /// Declares that reference data is present, even if no record follows.
    pub fn with_references(&mut self) {
        self.references.get_or_insert_with(Vec::new);
    }

    pub fn reference(&mut self, pub_id: &str, ref_key: &str) -> Result<(), CorpusError> {
        let Some(&publication) = self.pub_index.get(pub_id) else {
            return Err(CorpusError::Invalid(format!("unknown publication {pub_id:?}")));
        };
        if ref_key.is_empty() {
            return Err(CorpusError::Invalid(format!(
                "empty ref_key for publication {pub_id:?}"
            )));
        }
        check_field("ref_key", ref_key)?;
        self.references.get_or_insert_with(Vec::new).push(ReferenceRecord {
            publication,
            ref_key: ref_key.to_owned(),
        });
        Ok(())
    }

    pub fn build(self) -> Result<Corpus, CorpusError> {
        let categories = self.resolve_categories()?;
        check_parent_cycles(&categories)?;

        let resolved = resolve_assignments(&self.raw_assignments);
        let mut assignments = vec![JournalAssignments::default(); self.journals.len()];
        for a in &resolved {
            let j = self.journal_index[&a.journal_id];
            let c = self.category_index[&a.category_id];
            let ja = &mut assignments[j.idx()];
            ja.snapshot = a.snapshot;
            ja.categories.push(c);
        }
        for ja in &mut assignments {
            ja.categories.sort_unstable();
            debug_assert!(ja.categories.windows(2).all(|w| w[0] != w[1]));
        }

        Ok(Corpus {
            journals: self.journals,
            categories,
            assignments,
            publications: self.publications,
            edges: self.edges,
            references: self.references,
            window: self.window,
            journal_index: self.journal_index,
            category_index: self.category_index,
            pub_index: self.pub_index,
        })
    }

    fn resolve_categories(&self) -> Result<Vec<Category>, CorpusError> {
        self.categories
            .iter()
            .map(|(id, label, multi, parent)| {
                let parent = match parent {
                    None => None,
                    Some(p) => match self.category_index.get(p) {
                        Some(&idx) => Some(idx),
                        None => {
                            return Err(CorpusError::UnknownParent {
                                id: id.clone(),
                                parent: p.clone(),
                            })
                        }
                    },
                };
                Ok(Category {
                    id: id.clone(),
                    label: label.clone(),
                    multidisciplinary: *multi,
                    parent,
                })
            })
            .collect()
    }
}

fn check_parent_cycles(categories: &[Category]) -> Result<(), CorpusError> {
    for start in 0..categories.len() {
        let mut cur = start;
        let mut hops = 0usize;
        while let Some(p) = categories[cur].parent {
            cur = p.idx();
            hops += 1;
            // A cycle-free chain can never be longer than the category count.
            if hops > categories.len() {
                return Err(CorpusError::ParentCycle {
                    id: categories[start].id.clone(),
                });
            }
        }
    }
    Ok(())
}
