//! Deterministic corpus fixtures shared by the pipeline benchmarks.

use jcaudit_core::{generate_corpus, Corpus, SyntheticSpec};

/// Generates a ten-category corpus with `journals` journals, ten
/// publications per journal, and ten citations per publication, so the
/// edge count is exactly `journals * 100`. A fixed seed keeps timings
/// comparable across runs.
pub fn bench_corpus(journals: usize, references_per_publication: usize) -> Corpus {
    assert_eq!(journals % 10, 0, "journal count must be a multiple of ten");
    let spec = SyntheticSpec {
        category_count: 10,
        journals_per_category: journals / 10,
        publications_per_journal: 10,
        citations_per_publication: 10,
        planted_misassignments: 5,
        planted_missing: 5,
        references_per_publication,
        reference_pool_size: 2000,
        seed: 2024,
        ..SyntheticSpec::default()
    };
    let (corpus, _) = generate_corpus(&spec).expect("benchmark spec is valid");
    corpus
}
