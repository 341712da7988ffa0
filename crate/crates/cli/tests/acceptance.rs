//! Acceptance gate for the whole pipeline: eight checks covering oracle
//! equivalence, golden fixtures, threshold semantics, exclusion rules,
//! detection power on planted errors, determinism, and report shapes.
//!
//! Each check prints one `PASS`/`FAIL` line (visible with `--nocapture`,
//! and in the captured output of a failing run). Tolerances and time
//! budgets are pinned in the bodies below.

use std::collections::BTreeSet;
use std::fs;
use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use jcaudit_core::report;
use jcaudit_core::{
    build_profiles, brute_force_profile, combined, criterion_one, criterion_two,
    evaluate_detection, generate, generate_corpus, load_corpus, percentile_total, AuditConfig,
    Corpus, CorpusBuilder, CorpusPaths, DetectionKind, SyntheticSpec, Threshold, YearRange,
};

fn check(id: u32, name: &str, body: impl FnOnce()) {
    let result = catch_unwind(AssertUnwindSafe(body));
    match &result {
        Ok(()) => println!("acceptance criterion {id} ({name}): PASS"),
        Err(_) => println!("acceptance criterion {id} ({name}): FAIL"),
    }
    if let Err(e) = result {
        resume_unwind(e);
    }
}

fn th(s: &str) -> Threshold {
    Threshold::parse(s).expect("threshold literal")
}

/// Fifty corpora of varied shape, capped at 200 journals and 20,000 edges.
/// The last one sits exactly at both caps.
fn oracle_batch() -> Vec<SyntheticSpec> {
    let mut specs = Vec::new();
    for seed in 0..49u64 {
        specs.push(SyntheticSpec {
            seed: 1000 + seed,
            category_count: 2 + (seed % 7) as usize,
            journals_per_category: 2 + (seed % 9) as usize,
            publications_per_journal: 2 + (seed % 4) as usize,
            citations_per_publication: 1 + (seed % 11) as usize,
            affinity: 1.0 + (seed % 9) as f64,
            planted_misassignments: (seed % 3) as usize,
            planted_missing: (seed % 2) as usize,
            self_citation_rate: if seed % 4 == 0 { 0.2 } else { 0.0 },
            references_per_publication: if seed % 5 == 0 { 3 } else { 0 },
            reference_pool_size: 40,
            ..SyntheticSpec::default()
        });
    }
    specs.push(SyntheticSpec {
        seed: 4242,
        category_count: 8,
        journals_per_category: 25,
        publications_per_journal: 4,
        citations_per_publication: 25,
        planted_misassignments: 3,
        planted_missing: 3,
        ..SyntheticSpec::default()
    });
    specs
}

#[test]
fn criterion_1_oracle_equivalence() {
    check(1, "oracle equivalence", || {
        let start = Instant::now();
        let specs = oracle_batch();
        assert!(specs.len() >= 50, "batch holds {} corpora", specs.len());
        for spec in &specs {
            let (corpus, _) = generate_corpus(spec).expect("spec is valid");
            let journals = corpus.journal_indices().count();
            assert!(journals <= 200, "{journals} journals exceed the cap");
            assert!(corpus.edges().len() <= 20_000, "{} edges exceed the cap", corpus.edges().len());
            let ps = build_profiles(&corpus);
            for j in corpus.journal_indices() {
                let oracle = brute_force_profile(&corpus, j);
                assert_eq!(
                    ps.profile(j),
                    &oracle,
                    "profile mismatch for {} under seed {}",
                    corpus.journal_id(j),
                    spec.seed
                );
            }
        }
        let elapsed = start.elapsed();
        assert!(elapsed < Duration::from_secs(60), "oracle batch took {elapsed:?}");
    });
}

#[test]
fn criterion_2_micro_corpus_golden_run() {
    check(2, "micro-corpus golden run", || {
        let cfg = AuditConfig { min_citations: 1, ..AuditConfig::default() };
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data/d1");
        let corpus = load_corpus(&CorpusPaths::from_dir(dir), &cfg).expect("fixture loads");
        let ps = build_profiles(&corpus);

        let a = corpus.find_journal("A").unwrap();
        let x = corpus.find_category("X").unwrap();
        let y = corpus.find_category("Y").unwrap();
        assert_eq!(ps.t(a), 3);
        assert_eq!(ps.n(a, x), 1);
        assert_eq!(ps.n(a, y), 2);

        let records = combined(&ps, &corpus, &th("0.1"), &th("0.6"), &cfg);
        assert_eq!(records.len(), 1, "exactly one journal qualifies");
        let c = corpus.find_journal("C").unwrap();
        assert_eq!(records[0].journal, c);
        assert_eq!(records[0].weak_assignments, vec![(y, 0)]);
        assert_eq!(records[0].missing_categories, vec![(x, 3)]);
    });
}

#[test]
fn criterion_3_boundary_inclusivity() {
    check(3, "boundary inclusivity", || {
        let cfg = AuditConfig { min_citations: 1, ..AuditConfig::default() };

        // Weak side: 2 of 20 links to the assigned category, exactly 0.1.
        let mut b = CorpusBuilder::new(YearRange::new(2010, 2014));
        b.category("HOME", "Home field", false, None).unwrap();
        b.category("OTHER", "Other field", false, None).unwrap();
        for (j, c) in [("edge", "HOME"), ("ph", "HOME"), ("po", "OTHER")] {
            b.journal(j, j).unwrap();
            b.assign(j, c, None).unwrap();
        }
        b.publication("e1", "edge", 2012).unwrap();
        b.publication("h1", "ph", 2012).unwrap();
        b.publication("o1", "po", 2012).unwrap();
        for _ in 0..2 {
            b.cite("e1", "h1").unwrap();
        }
        for _ in 0..18 {
            b.cite("e1", "o1").unwrap();
        }
        let corpus = b.build().unwrap();
        let ps = build_profiles(&corpus);
        let edge = corpus.find_journal("edge").unwrap();
        let home = corpus.find_category("HOME").unwrap();
        assert_eq!((ps.n(edge, home), ps.t(edge)), (2, 20));
        let pairs = |flags: &[jcaudit_core::FlagRecord]| -> BTreeSet<_> {
            flags.iter().map(|f| (f.journal, f.category)).collect()
        };
        let at_alpha = pairs(&criterion_one(&ps, &corpus, &th("0.1"), &cfg));
        assert!(at_alpha.contains(&(edge, home)), "r equal to alpha must flag");
        let below = pairs(&criterion_one(&ps, &corpus, &th("0.099"), &cfg));
        assert!(!below.contains(&(edge, home)), "r above alpha must not flag");

        // Strong side: 12 of 20 links to an unassigned category, exactly 0.6.
        let mut b = CorpusBuilder::new(YearRange::new(2010, 2014));
        b.category("HOME2", "Home field", false, None).unwrap();
        b.category("TARGET", "Unassigned field", false, None).unwrap();
        for (j, c) in [("probe", "HOME2"), ("tj", "TARGET"), ("hj", "HOME2")] {
            b.journal(j, j).unwrap();
            b.assign(j, c, None).unwrap();
        }
        b.publication("p1", "probe", 2012).unwrap();
        b.publication("t1", "tj", 2012).unwrap();
        b.publication("h1", "hj", 2012).unwrap();
        for _ in 0..12 {
            b.cite("p1", "t1").unwrap();
        }
        for _ in 0..8 {
            b.cite("p1", "h1").unwrap();
        }
        let corpus = b.build().unwrap();
        let ps = build_profiles(&corpus);
        let probe = corpus.find_journal("probe").unwrap();
        let target = corpus.find_category("TARGET").unwrap();
        assert_eq!((ps.n(probe, target), ps.t(probe)), (12, 20));
        let at_beta = pairs(&criterion_two(&ps, &corpus, &th("0.6"), &cfg));
        assert!(at_beta.contains(&(probe, target)), "r equal to beta must flag");
        let above = pairs(&criterion_two(&ps, &corpus, &th("0.601"), &cfg));
        assert!(!above.contains(&(probe, target)), "r below beta must not flag");
    });
}

#[test]
fn criterion_4_monotonicity_suite() {
    check(4, "monotonicity suite", || {
        let cfg = AuditConfig { min_citations: 0, ..AuditConfig::default() };
        let alphas = ["0.05", "0.1", "0.2"].map(th);
        let betas = ["0.5", "0.6", "0.7", "0.8", "0.9"].map(th);
        for spec in &oracle_batch() {
            let (corpus, _) = generate_corpus(spec).expect("spec is valid");
            let ps = build_profiles(&corpus);
            let c1: Vec<BTreeSet<_>> = alphas
                .iter()
                .map(|a| {
                    criterion_one(&ps, &corpus, a, &cfg)
                        .iter()
                        .map(|f| (f.journal, f.category))
                        .collect()
                })
                .collect();
            for w in c1.windows(2) {
                assert!(
                    w[0].is_subset(&w[1]),
                    "criterion-one flags not nested under seed {}",
                    spec.seed
                );
            }
            let c2: Vec<BTreeSet<_>> = betas
                .iter()
                .map(|b| {
                    criterion_two(&ps, &corpus, b, &cfg)
                        .iter()
                        .map(|f| (f.journal, f.category))
                        .collect()
                })
                .collect();
            for w in c2.windows(2) {
                assert!(
                    w[1].is_subset(&w[0]),
                    "criterion-two flags not reverse-nested under seed {}",
                    spec.seed
                );
            }
        }
    });
}

#[test]
fn criterion_5_exclusion_rules() {
    check(5, "exclusion rules", || {
        // Same-journal edges: a thousand-plus of them change nothing.
        let spec = SyntheticSpec {
            seed: 77,
            category_count: 5,
            journals_per_category: 10,
            publications_per_journal: 10,
            citations_per_publication: 10,
            planted_misassignments: 5,
            ..SyntheticSpec::default()
        };
        let (plain, _) = generate_corpus(&spec).unwrap();
        let salted = SyntheticSpec { self_citation_rate: 0.25, ..spec.clone() };
        let (with_self, _) = generate_corpus(&salted).unwrap();
        let injected = with_self.edges().len() - plain.edges().len();
        assert!(injected >= 1000, "only {injected} self-citation edges injected");
        let before = build_profiles(&plain);
        let after = build_profiles(&with_self);
        assert_eq!(before.profiles(), after.profiles(), "profiles moved");

        // Multidisciplinary marking: exactly that category's weak flags
        // disappear; strong flags stay put.
        let cfg = AuditConfig { min_citations: 0, ..AuditConfig::default() };
        let dir = tempfile::tempdir().unwrap();
        generate(&spec, dir.path()).unwrap();
        let corpus = load_corpus(&CorpusPaths::from_dir(dir.path()), &cfg).unwrap();
        let ps = build_profiles(&corpus);
        let alpha = th("0.2");
        let beta = th("0.5");
        let id_pairs = |flags: &[jcaudit_core::FlagRecord], corpus: &Corpus| -> BTreeSet<_> {
            flags
                .iter()
                .map(|f| {
                    (corpus.journal_id(f.journal).to_owned(), corpus.category_id(f.category).to_owned())
                })
                .collect()
        };
        let weak_before = id_pairs(&criterion_one(&ps, &corpus, &alpha, &cfg), &corpus);
        let strong_before = id_pairs(&criterion_two(&ps, &corpus, &beta, &cfg), &corpus);
        let marked = weak_before.iter().next().expect("planting produced weak flags").1.clone();

        let table = dir.path().join("categories.tsv");
        let patched: String = fs::read_to_string(&table)
            .unwrap()
            .lines()
            .map(|line| {
                if line.starts_with(&format!("{marked}\t")) {
                    format!("{}\n", line.replace("\t0\t", "\t1\t"))
                } else {
                    format!("{line}\n")
                }
            })
            .collect();
        fs::write(&table, patched).unwrap();

        let remarked = load_corpus(&CorpusPaths::from_dir(dir.path()), &cfg).unwrap();
        let ps2 = build_profiles(&remarked);
        let weak_after = id_pairs(&criterion_one(&ps2, &remarked, &alpha, &cfg), &remarked);
        let strong_after = id_pairs(&criterion_two(&ps2, &remarked, &beta, &cfg), &remarked);

        let removed: BTreeSet<_> = weak_before.difference(&weak_after).cloned().collect();
        assert!(!removed.is_empty(), "marking removed no weak flags");
        assert!(removed.iter().all(|(_, c)| c == &marked), "unrelated weak flags vanished");
        assert!(
            weak_after.iter().all(|(_, c)| c != &marked),
            "weak flags survived for the marked category"
        );
        assert!(weak_after.is_subset(&weak_before), "new weak flags appeared");
        assert_eq!(strong_before, strong_after, "strong flags changed");
    });
}

#[test]
fn criterion_6_detection_power() {
    check(6, "detection power", || {
        let start = Instant::now();
        let seeds = 10u64;
        let (mut p1, mut r1, mut r2) = (0.0, 0.0, 0.0);
        for seed in 0..seeds {
            let spec = SyntheticSpec {
                planted_misassignments: 10,
                planted_missing: 10,
                seed,
                ..SyntheticSpec::default()
            };
            let (corpus, truth) = generate_corpus(&spec).unwrap();
            let ps = build_profiles(&corpus);
            let cfg = AuditConfig {
                min_citations: percentile_total(&ps, 0.10),
                ..AuditConfig::default()
            };
            let weak = criterion_one(&ps, &corpus, &th("0.1"), &cfg);
            let m1 = evaluate_detection(&weak, &truth, &corpus, DetectionKind::Misassigned).unwrap();
            let strong = criterion_two(&ps, &corpus, &th("0.5"), &cfg);
            let m2 = evaluate_detection(&strong, &truth, &corpus, DetectionKind::Missing).unwrap();
            p1 += m1.precision;
            r1 += m1.recall;
            r2 += m2.recall;
        }
        let n = seeds as f64;
        let (p1, r1, r2) = (p1 / n, r1 / n, r2 / n);
        println!(
            "detection power over {seeds} seeds: weak-link recall {r1:.3} (floor 0.8), \
             precision {p1:.3} (floor 0.5); missing-link recall {r2:.3} (floor 0.6)"
        );
        assert!(r1 >= 0.8, "weak-link recall {r1:.3} under 0.8");
        assert!(p1 >= 0.5, "weak-link precision {p1:.3} under 0.5");
        assert!(r2 >= 0.6, "missing-link recall {r2:.3} under 0.6");
        let elapsed = start.elapsed();
        assert!(elapsed < Duration::from_secs(120), "detection sweep took {elapsed:?}");
    });
}

#[test]
fn criterion_7_determinism_across_threads() {
    check(7, "determinism across threads", || {
        let dir = tempfile::tempdir().unwrap();
        let corpus_dir = dir.path().join("corpus");
        let spec = SyntheticSpec {
            seed: 90,
            category_count: 4,
            journals_per_category: 6,
            publications_per_journal: 6,
            citations_per_publication: 8,
            planted_misassignments: 2,
            planted_missing: 2,
            references_per_publication: 2,
            reference_pool_size: 50,
            ..SyntheticSpec::default()
        };
        generate(&spec, &corpus_dir).unwrap();

        let run = |threads: &str, out: &Path| {
            let status = Command::new(env!("CARGO_BIN_EXE_jcaudit"))
                .arg("audit")
                .arg(&corpus_dir)
                .arg("--out")
                .arg(out)
                .args(["--min-citations", "1", "--threads", threads])
                .status()
                .unwrap();
            assert!(status.success(), "audit at --threads {threads} failed");
        };
        let t1 = dir.path().join("t1");
        let t8 = dir.path().join("t8");
        run("1", &t1);
        run("8", &t8);

        let names = |d: &Path| -> Vec<String> {
            let mut v: Vec<String> = fs::read_dir(d)
                .unwrap()
                .map(|e| e.unwrap().file_name().into_string().unwrap())
                .collect();
            v.sort();
            v
        };
        assert_eq!(names(&t1), names(&t8), "output listings differ");
        for name in names(&t1) {
            let left = fs::read(t1.join(&name)).unwrap();
            let right = fs::read(t8.join(&name)).unwrap();
            if name == "manifest.json" {
                // Timestamps are the single sanctioned difference.
                let strip = |bytes: &[u8]| -> serde_json::Value {
                    let mut v: serde_json::Value = serde_json::from_slice(bytes).unwrap();
                    let obj = v.as_object_mut().unwrap();
                    obj.remove("started_utc");
                    obj.remove("finished_utc");
                    v
                };
                assert_eq!(strip(&left), strip(&right), "manifests differ beyond timestamps");
            } else {
                assert_eq!(left, right, "{name} differs between thread counts");
            }
        }
    });
}

#[test]
fn criterion_8_report_shape_fixtures() {
    check(8, "report shape fixtures", || {
        // A journal whose single recorded category draws 7% of its links
        // while an unrecorded one draws 74%: the combined criteria must
        // surface it.
        let cfg = AuditConfig::default();
        let mut b = CorpusBuilder::new(YearRange::new(2010, 2014));
        b.category("BUS", "Business", false, None).unwrap();
        b.category("ECON", "Economics", false, None).unwrap();
        b.category("STAT", "Statistics", false, None).unwrap();
        for (j, c) in [
            ("mixed", "BUS"),
            ("peer_bus", "BUS"),
            ("peer_econ", "ECON"),
            ("peer_stat", "STAT"),
        ] {
            b.journal(j, j).unwrap();
            b.assign(j, c, None).unwrap();
        }
        b.publication("m1", "mixed", 2012).unwrap();
        b.publication("b1", "peer_bus", 2012).unwrap();
        b.publication("e1", "peer_econ", 2012).unwrap();
        b.publication("s1", "peer_stat", 2012).unwrap();
        for _ in 0..7 {
            b.cite("m1", "b1").unwrap();
        }
        for _ in 0..74 {
            b.cite("m1", "e1").unwrap();
        }
        for _ in 0..19 {
            b.cite("m1", "s1").unwrap();
        }
        let corpus = b.build().unwrap();
        let ps = build_profiles(&corpus);
        let mixed = corpus.find_journal("mixed").unwrap();
        let bus = corpus.find_category("BUS").unwrap();
        let econ = corpus.find_category("ECON").unwrap();
        let t = ps.t(mixed);
        assert_eq!(t, 100);
        let r_bus = ps.n(mixed, bus) as f64 / t as f64;
        let r_econ = ps.n(mixed, econ) as f64 / t as f64;
        assert!((r_bus - 0.07).abs() <= 0.02, "weak relatedness {r_bus} off target");
        assert!((r_econ - 0.74).abs() <= 0.02, "strong relatedness {r_econ} off target");
        let records = combined(&ps, &corpus, &cfg.combined_alpha, &cfg.combined_beta, &cfg);
        assert_eq!(records.len(), 1, "exactly the constructed journal qualifies");
        assert_eq!(records[0].journal, mixed);
        assert_eq!(records[0].weak_assignments, vec![(bus, 7)]);
        assert_eq!(records[0].missing_categories, vec![(econ, 74)]);

        // A 121-journal category with 104 weakly connected members rounds
        // to an 86% ranking row.
        assert_eq!(report::pct_round(104, 121), 86);
        let cfg = AuditConfig { min_citations: 1, ..AuditConfig::default() };
        let mut b = CorpusBuilder::new(YearRange::new(2010, 2014));
        b.category("POP", "Crowded field", false, None).unwrap();
        b.category("FAR", "Distant field", false, None).unwrap();
        b.journal("far", "far").unwrap();
        b.assign("far", "FAR", None).unwrap();
        b.publication("f1", "far", 2012).unwrap();
        for i in 0..121 {
            let j = format!("p{i:03}");
            b.journal(&j, &j).unwrap();
            b.assign(&j, "POP", None).unwrap();
            b.publication(&format!("pp{i:03}"), &j, 2012).unwrap();
        }
        // 104 members cite only the outsider; the 17 others cite around a
        // ring so every link stays inside the category.
        for i in 0..104 {
            for _ in 0..5 {
                b.cite(&format!("pp{i:03}"), "f1").unwrap();
            }
        }
        for i in 104..121 {
            let next = 104 + (i - 104 + 1) % 17;
            b.cite(&format!("pp{i:03}"), &format!("pp{next:03}")).unwrap();
        }
        let corpus = b.build().unwrap();
        let ps = build_profiles(&corpus);
        let rows = report::rank_problem_categories(
            &ps,
            &corpus,
            &th("0.1"),
            cfg.min_category_journals,
            &cfg.min_flagged_fraction,
            &cfg,
        );
        assert_eq!(rows.len(), 1, "exactly one category ranks");
        let pop = corpus.find_category("POP").unwrap();
        assert_eq!(rows[0].category, pop);
        assert_eq!((rows[0].journals, rows[0].flagged), (121, 104));
        let table = report::rank_c1_tsv(&rows, &corpus);
        assert!(table.contains("POP\t121\t104\t86\n"), "table: {table}");
    });
}
