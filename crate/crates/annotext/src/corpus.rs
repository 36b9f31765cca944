//! JSON-lines corpora: one annotated document per line.

use std::fs;
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use annotext_core::builder::AnnotatedDoc;

/// A line that could not be read as a document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BadLine {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Corpus {
    pub docs: Vec<AnnotatedDoc>,
    pub bad: Vec<BadLine>,
}

/// Parses one line; blank lines give `Ok(None)`.
pub fn parse_line(line: &str) -> Result<Option<AnnotatedDoc>, String> {
    if line.trim().is_empty() {
        return Ok(None);
    }
    let doc: AnnotatedDoc = serde_json::from_str(line).map_err(|e| e.to_string())?;
    if !doc.is_well_formed() {
        return Err("annotation spans are empty, unordered or overlapping".into());
    }
    Ok(Some(doc))
}

/// Reads every line, keeping good documents and recording bad ones.
pub fn read_corpus(reader: impl BufRead) -> io::Result<Corpus> {
    let mut out = Corpus::default();
    for (i, line) in reader.lines().enumerate() {
        match parse_line(&line?) {
            Ok(Some(d)) => out.docs.push(d),
            Ok(None) => {}
            Err(message) => out.bad.push(BadLine { line: i + 1, message }),
        }
    }
    Ok(out)
}

pub fn read_corpus_file(path: &Path) -> io::Result<Corpus> {
    read_corpus(BufReader::new(fs::File::open(path)?))
}

pub fn write_corpus(docs: &[AnnotatedDoc], mut w: impl Write) -> io::Result<()> {
    for d in docs {
        serde_json::to_writer(&mut w, d)?;
        writeln!(w)?;
    }
    Ok(())
}

/// Expands each argument as a glob pattern; a pattern matching nothing is
/// an error. Results are sorted and deduplicated.
pub fn expand_paths(patterns: &[String]) -> io::Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in patterns {
        let matches: Vec<PathBuf> = glob::glob(p)
            .map_err(|e| io::Error::new(io::ErrorKind::InvalidInput, e))?
            .collect::<Result<_, _>>()
            .map_err(io::Error::other)?;
        if matches.is_empty() {
            return Err(io::Error::new(io::ErrorKind::NotFound, format!("no file matches {p:?}")));
        }
        out.extend(matches);
    }
    out.sort();
    out.dedup();
    Ok(out)
}
