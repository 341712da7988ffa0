//! Flat-file corpus interchange: UTF-8 TSV with one header row per file,
//! LF line endings, and no quoting. A row that cannot be parsed is reported
//! with its file and 1-based line number.

use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use chrono::NaiveDate;

use super::{Corpus, CorpusBuilder, CorpusError};
use crate::criteria::AuditConfig;

pub const JOURNALS_FILE: &str = "journals.tsv";
pub const CATEGORIES_FILE: &str = "categories.tsv";
pub const ASSIGNMENTS_FILE: &str = "assignments.tsv";
pub const PUBLICATIONS_FILE: &str = "publications.tsv";
pub const CITATIONS_FILE: &str = "citations.tsv";
pub const REFERENCES_FILE: &str = "references.tsv";

const JOURNALS_HEADER: &str = "journal_id\ttitle";
const CATEGORIES_HEADER: &str = "category_id\tlabel\tmultidisciplinary\tparent_id";
const ASSIGNMENTS_HEADER: &str = "journal_id\tcategory_id\tsnapshot";
const PUBLICATIONS_HEADER: &str = "pub_id\tjournal_id\tyear";
const CITATIONS_HEADER: &str = "citing_pub_id\tcited_pub_id";
const REFERENCES_HEADER: &str = "pub_id\tref_key";

/// Locations of the corpus input files. `references` is optional; bibliographic
/// coupling is the only computation that needs it.
#[derive(Debug, Clone)]
pub struct CorpusPaths {
    pub journals: PathBuf,
    pub categories: PathBuf,
    pub assignments: PathBuf,
    pub publications: PathBuf,
    pub citations: PathBuf,
    pub references: Option<PathBuf>,
}

impl CorpusPaths {
    /// Uses the conventional file names inside `dir`. The references file is
    /// picked up only when it exists.
    pub fn from_dir(dir: impl AsRef<Path>) -> Self {
        let dir = dir.as_ref();
        let references = dir.join(REFERENCES_FILE);
        CorpusPaths {
            journals: dir.join(JOURNALS_FILE),
            categories: dir.join(CATEGORIES_FILE),
            assignments: dir.join(ASSIGNMENTS_FILE),
            publications: dir.join(PUBLICATIONS_FILE),
            citations: dir.join(CITATIONS_FILE),
            references: references.is_file().then_some(references),
        }
    }
}

/// Reads and cross-links the corpus files. Dangling keys, duplicate ids, and
/// malformed rows are errors naming the offending file and line.
pub fn load_corpus(paths: &CorpusPaths, config: &AuditConfig) -> Result<Corpus, CorpusError> {
    let mut b = CorpusBuilder::new(config.window);

    parse_file(&paths.journals, JOURNALS_HEADER, 2, |row| {
        b.journal(row[0], row[1])
    })?;
    parse_file(&paths.categories, CATEGORIES_HEADER, 4, |row| {
        let multi = parse_flag(row[2])?;
        let parent = (!row[3].is_empty()).then_some(row[3]);
        b.category(row[0], row[1], multi, parent)
    })?;
    parse_file(&paths.assignments, ASSIGNMENTS_HEADER, 3, |row| {
        let snapshot = parse_snapshot(row[2])?;
        b.assign(row[0], row[1], snapshot)
    })?;
    parse_file(&paths.publications, PUBLICATIONS_HEADER, 3, |row| {
        let year = row[2].parse::<i32>().map_err(|_| {
            CorpusError::Invalid(format!("invalid year {:?}", row[2]))
        })?;
        b.publication(row[0], row[1], year)
    })?;
    parse_file(&paths.citations, CITATIONS_HEADER, 2, |row| {
        b.cite(row[0], row[1])
    })?;
    if let Some(refs) = &paths.references {
        b.with_references();
        parse_file(refs, REFERENCES_HEADER, 2, |row| b.reference(row[0], row[1]))?;
    }

    b.build()
}

fn parse_flag(s: &str) -> Result<bool, CorpusError> {
    match s {
        "0" => Ok(false),
        "1" => Ok(true),
        _ => Err(CorpusError::Invalid(format!(
            "invalid multidisciplinary flag {s:?}: expected 0 or 1"
        ))),
    }
}

fn parse_snapshot(s: &str) -> Result<Option<NaiveDate>, CorpusError> {
    if s.is_empty() {
        return Ok(None);
    }
    NaiveDate::parse_from_str(s, "%Y-%m-%d")
        .map(Some)
        .map_err(|_| CorpusError::Invalid(format!("invalid snapshot date {s:?}: expected YYYY-MM-DD")))
}

fn parse_file(
    path: &Path,
    header: &str,
    fields: usize,
    mut on_row: impl FnMut(&[&str]) -> Result<(), CorpusError>,
) -> Result<(), CorpusError> {
    let file = File::open(path).map_err(|e| {
        if e.kind() == io::ErrorKind::NotFound {
            CorpusError::MissingFile { path: path.to_owned() }
        } else {
            CorpusError::Io { path: path.to_owned(), source: e }
        }
    })?;
    let name = path.display().to_string();
    let at = |line: u64, reason: String| CorpusError::Row { file: name.clone(), line, reason };

    let mut line_no = 0u64;
    for line in BufReader::new(file).lines() {
        line_no += 1;
        let line = line.map_err(|e| CorpusError::Io { path: path.to_owned(), source: e })?;
        // Tolerate CRLF input; output is always LF.
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line_no == 1 {
            if line != header {
                return Err(at(
                    1,
                    format!("unexpected header {:?}: expected {:?}", line, header),
                ));
            }
            continue;
        }
        let row: Vec<&str> = line.split('\t').collect();
        if row.len() != fields {
            return Err(at(
                line_no,
                format!("expected {fields} tab-separated fields, found {}", row.len()),
            ));
        }
        on_row(&row).map_err(|e| match e {
            CorpusError::Invalid(reason) => at(line_no, reason),
            other => other,
        })?;
    }
    if line_no == 0 {
        return Err(at(1, format!("empty file: expected header {header:?}")));
    }
    Ok(())
}

impl Corpus {
    /// Serializes the corpus back to its TSV directory form. Assignments are
    /// written post-resolution, so loading the result reproduces this corpus
    /// exactly.
    pub fn write_dir(&self, dir: impl AsRef<Path>) -> io::Result<()> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir)?;

        let mut w = writer(dir.join(JOURNALS_FILE))?;
        writeln!(w, "{JOURNALS_HEADER}")?;
        for j in self.journals() {
            writeln!(w, "{}\t{}", j.id, j.title)?;
        }
        w.flush()?;

        let mut w = writer(dir.join(CATEGORIES_FILE))?;
        writeln!(w, "{CATEGORIES_HEADER}")?;
        for c in self.categories() {
            let parent = c.parent.map(|p| self.category_id(p)).unwrap_or("");
            writeln!(
                w,
                "{}\t{}\t{}\t{}",
                c.id,
                c.label,
                u8::from(c.multidisciplinary),
                parent
            )?;
        }
        w.flush()?;

        let mut w = writer(dir.join(ASSIGNMENTS_FILE))?;
        writeln!(w, "{ASSIGNMENTS_HEADER}")?;
        for a in self.resolved_assignment_rows() {
            let snap = a.snapshot.map(|d| d.to_string()).unwrap_or_default();
            writeln!(w, "{}\t{}\t{}", a.journal_id, a.category_id, snap)?;
        }
        w.flush()?;

        let mut w = writer(dir.join(PUBLICATIONS_FILE))?;
        writeln!(w, "{PUBLICATIONS_HEADER}")?;
        for p in self.publications() {
            writeln!(w, "{}\t{}\t{}", p.id, self.journal_id(p.journal), p.year)?;
        }
        w.flush()?;

        let mut w = writer(dir.join(CITATIONS_FILE))?;
        writeln!(w, "{CITATIONS_HEADER}")?;
        for e in self.edges() {
            writeln!(
                w,
                "{}\t{}",
                self.publication(e.citing).id,
                self.publication(e.cited).id
            )?;
        }
        w.flush()?;

        if let Some(refs) = self.references() {
            let mut w = writer(dir.join(REFERENCES_FILE))?;
            writeln!(w, "{REFERENCES_HEADER}")?;
            for r in refs {
                writeln!(w, "{}\t{}", self.publication(r.publication).id, r.ref_key)?;
            }
            w.flush()?;
        }
        Ok(())
    }
}

fn writer(path: PathBuf) -> io::Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}
