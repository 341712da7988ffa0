//! Bibliographic coupling: journals are related when their publications cite
//! the same references. An independent relation kind used to cross-check the
//! direct-citation profiles.
//!
//! The weight of a publication pair is the number of distinct reference keys
//! both cite (or 0/1 when the binary switch is set). Pairs within one journal
//! are skipped, mirroring the self-citation exclusion, and only in-window
//! publications participate. Journal-level weight sums publication pairs and
//! is symmetric by construction.

use std::collections::{BTreeMap, HashMap, HashSet};

use thiserror::Error;

use crate::aggregate::ProfileSet;
use crate::corpus::{CategoryIdx, Corpus, JournalIdx, PubIdx};
use crate::criteria::AuditConfig;

#[derive(Debug, Error)]
pub enum CouplingError {
    #[error("bibliographic coupling requires reference data (references.tsv) which this corpus does not provide")]
    MissingReferences,
}

/// Symmetric journal-pair coupling weights; only nonzero pairs are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplingWeights {
    pairs: HashMap<(JournalIdx, JournalIdx), u64>,
}

impl CouplingWeights {
    pub fn weight(&self, a: JournalIdx, b: JournalIdx) -> u64 {
        if a == b {
            return 0;
        }
        let key = if a < b { (a, b) } else { (b, a) };
        self.pairs.get(&key).copied().unwrap_or(0)
    }

    /// Nonzero pairs with the smaller handle first.
    pub fn pairs(&self) -> impl Iterator<Item = ((JournalIdx, JournalIdx), u64)> + '_ {
        self.pairs.iter().map(|(&k, &v)| (k, v))
    }
}

/// Per-pub distinct reference keys, restricted to in-window publications.
fn deduped_references(corpus: &Corpus) -> Result<HashMap<&str, Vec<PubIdx>>, CouplingError> {
    let refs = corpus.references().ok_or(CouplingError::MissingReferences)?;
    let mut seen: HashSet<(PubIdx, &str)> = HashSet::new();
    let mut by_key: HashMap<&str, Vec<PubIdx>> = HashMap::new();
    for r in refs {
        if !corpus.pub_in_window(r.publication) {
            continue;
        }
        if seen.insert((r.publication, r.ref_key.as_str())) {
            by_key.entry(r.ref_key.as_str()).or_default().push(r.publication);
        }
    }
    Ok(by_key)
}

/// Journal-level coupling weights across all cross-journal publication pairs.
pub fn journal_coupling_weights(
    corpus: &Corpus,
    binary: bool,
) -> Result<CouplingWeights, CouplingError> {
    let by_key = deduped_references(corpus)?;
    let mut pairs: HashMap<(JournalIdx, JournalIdx), u64> = HashMap::new();

    if binary {
        // A publication pair counts once no matter how many keys it shares.
        let mut pub_pairs: HashSet<(PubIdx, PubIdx)> = HashSet::new();
        for pubs in by_key.values() {
            for (i, &p) in pubs.iter().enumerate() {
                for &q in &pubs[i + 1..] {
                    let jp = corpus.publication(p).journal;
                    let jq = corpus.publication(q).journal;
                    if jp == jq {
                        continue;
                    }
                    let key = if p < q { (p, q) } else { (q, p) };
                    pub_pairs.insert(key);
                }
            }
        }
        for (p, q) in pub_pairs {
            let jp = corpus.publication(p).journal;
            let jq = corpus.publication(q).journal;
            let key = if jp < jq { (jp, jq) } else { (jq, jp) };
            *pairs.entry(key).or_insert(0) += 1;
        }
    } else {
        // Each shared key contributes (pubs in i) * (pubs in j) to (i, j).
        for pubs in by_key.values() {
            let mut per_journal: BTreeMap<JournalIdx, u64> = BTreeMap::new();
            for &p in pubs {
                *per_journal.entry(corpus.publication(p).journal).or_insert(0) += 1;
            }
            let js: Vec<(JournalIdx, u64)> = per_journal.into_iter().collect();
            for (i, &(ji, ci)) in js.iter().enumerate() {
                for &(jj, cj) in &js[i + 1..] {
                    *pairs.entry((ji, jj)).or_insert(0) += ci * cj;
                }
            }
        }
    }

    Ok(CouplingWeights { pairs })
}

/// Per-journal coupling totals by category, the coupling analog of a
/// citation profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplingProfile {
    pub journal: JournalIdx,
    pub total: u64,
    pub per_category: BTreeMap<CategoryIdx, u64>,
}

impl CouplingProfile {
    pub fn n(&self, c: CategoryIdx) -> u64 {
        self.per_category.get(&c).copied().unwrap_or(0)
    }
}

/// Builds one coupling profile per journal. A journal coupled to a
/// multi-assigned neighbor credits each of the neighbor's categories once.
pub fn build_coupling_profiles(
    corpus: &Corpus,
    cfg: &AuditConfig,
) -> Result<Vec<CouplingProfile>, CouplingError> {
    let weights = journal_coupling_weights(corpus, cfg.coupling_binary)?;
    let mut profiles: Vec<CouplingProfile> = corpus
        .journal_indices()
        .map(|j| CouplingProfile {
            journal: j,
            total: 0,
            per_category: BTreeMap::new(),
        })
        .collect();
    for ((u, v), w) in weights.pairs() {
        profiles[u.idx()].total += w;
        profiles[v.idx()].total += w;
        for &c in corpus.assignments(v) {
            *profiles[u.idx()].per_category.entry(c).or_insert(0) += w;
        }
        for &c in corpus.assignments(u) {
            *profiles[v.idx()].per_category.entry(c).or_insert(0) += w;
        }
    }
    Ok(profiles)
}

/// The category with the highest weight, ties broken by lexicographically
/// smallest category id. None when every weight is zero or everything is
/// filtered out.
pub fn strongest_category(
    per_category: &BTreeMap<CategoryIdx, u64>,
    corpus: &Corpus,
    exclude_multidisciplinary: bool,
) -> Option<CategoryIdx> {
    let mut best: Option<(u64, &str, CategoryIdx)> = None;
    for (&c, &w) in per_category {
        if w == 0 {
            continue;
        }
        if exclude_multidisciplinary && corpus.category(c).multidisciplinary {
            continue;
        }
        let id = corpus.category_id(c);
        let better = match best {
            None => true,
            Some((bw, bid, _)) => w > bw || (w == bw && id < bid),
        };
        if better {
            best = Some((w, id, c));
        }
    }
    best.map(|(_, _, c)| c)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonRow {
    pub journal: JournalIdx,
    pub strongest_direct: Option<CategoryIdx>,
    pub strongest_coupling: Option<CategoryIdx>,
    pub agree: bool,
}

/// Side-by-side strongest categories under the two relation kinds, for every
/// journal of one category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationComparison {
    pub category: CategoryIdx,
    /// One row per journal assigned to the category with enough citations,
    /// sorted by journal id.
    pub rows: Vec<ComparisonRow>,
    /// How many of those journals have the examined category as their
    /// strongest under direct citations.
    pub home_strongest_direct: u64,
    /// Same count under bibliographic coupling.
    pub home_strongest_coupling: u64,
}

/// Compares the strongest category under direct citations against the one
/// under coupling for every journal of `category` with t >= min_citations.
/// Multidisciplinary categories never win "strongest", mirroring their
/// criterion-one exclusion.
pub fn compare_relation_kinds(
    corpus: &Corpus,
    ps: &ProfileSet,
    coupling: &[CouplingProfile],
    category: CategoryIdx,
    cfg: &AuditConfig,
) -> RelationComparison {
    let mut rows = Vec::new();
    for j in corpus.journal_indices() {
        if !corpus.is_assigned(j, category) || ps.t(j) < cfg.min_citations {
            continue;
        }
        let strongest_direct = strongest_category(&ps.profile(j).per_category, corpus, true);
        let strongest_coupling = strongest_category(&coupling[j.idx()].per_category, corpus, true);
        rows.push(ComparisonRow {
            journal: j,
            strongest_direct,
            strongest_coupling,
            agree: strongest_direct == strongest_coupling,
        });
    }
    rows.sort_by(|a, b| corpus.journal_id(a.journal).cmp(corpus.journal_id(b.journal)));
    let home_strongest_direct = rows
        .iter()
        .filter(|r| r.strongest_direct == Some(category))
        .count() as u64;
    let home_strongest_coupling = rows
        .iter()
        .filter(|r| r.strongest_coupling == Some(category))
        .count() as u64;
    RelationComparison {
        category,
        rows,
        home_strongest_direct,
        home_strongest_coupling,
    }
}

/// Comparison table in TSV form. Absent strongest categories print as `-`.
pub fn comparison_tsv(cmp: &RelationComparison, corpus: &Corpus) -> String {
    let mut out = String::from("journal_id\tstrongest_direct\tstrongest_coupling\tagree\n");
    for r in &cmp.rows {
        let name = |c: Option<CategoryIdx>| c.map(|c| corpus.category_id(c)).unwrap_or("-");
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            corpus.journal_id(r.journal),
            name(r.strongest_direct),
            name(r.strongest_coupling),
            u8::from(r.agree),
        ));
    }
    out
}
