//! FASTA / FASTQ input on top of `needletail`: format and compression are
//! detected from the first bytes, and an empty file holds no sequences.

use std::io::Read;
use std::path::Path;

use needletail::errors::{ParseError, ParseErrorKind};
use needletail::parser::FastxReader;
use thiserror::Error;

#[derive(Debug, Error)]
#[error("{path}: {source}")]
pub struct SeqError {
    pub path: String,
    #[source]
    pub source: ParseError,
}

/// Calls `f` on every sequence of the file at `path`, in file order.
pub fn for_each_sequence(path: &Path, f: impl FnMut(&[u8])) -> Result<(), SeqError> {
    let name = path.display().to_string();
    drain(needletail::parse_fastx_file(path), &name, f)
}

/// Same as [`for_each_sequence`] for an in-memory or streamed document.
pub fn read_sequences<R: Read + Send>(reader: R, name: &str, f: impl FnMut(&[u8])) -> Result<(), SeqError> {
    drain(needletail::parse_fastx_reader(reader), name, f)
}

fn drain(
    opened: Result<Box<dyn FastxReader + '_>, ParseError>,
    name: &str,
    mut f: impl FnMut(&[u8]),
) -> Result<(), SeqError> {
    let wrap = |source| SeqError {
        path: name.to_string(),
        source,
    };
    let mut reader = match opened {
        Ok(r) => r,
        Err(e) if e.kind == ParseErrorKind::EmptyFile => return Ok(()),
        Err(e) => return Err(wrap(e)),
    };
    while let Some(record) = reader.next() {
        f(&record.map_err(wrap)?.seq());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn collect(text: &str) -> Result<Vec<String>, SeqError> {
        let mut out = Vec::new();
        read_sequences(text.as_bytes(), "test", |s| out.push(String::from_utf8(s.to_vec()).unwrap()))?;
        Ok(out)
    }

    #[test]
    fn wrapped_fasta() {
        let seqs = collect(">r1 desc\nACGT\nAC\n>r2\nGG\r\n").unwrap();
        assert_eq!(seqs, vec!["ACGTAC", "GG"]);
    }

    #[test]
    fn fastq_records() {
        let seqs = collect("@a\nACGT\n+\nIIII\n@b\nGA\n+b\nII\n").unwrap();
        assert_eq!(seqs, vec!["ACGT", "GA"]);
    }

    #[test]
    fn empty_input() {
        assert!(collect("").unwrap().is_empty());
    }

    #[test]
    fn malformed_records() {
        assert!(collect("ACGT\n").is_err());
        assert!(collect("@a\nACGT\n+\nII\n").is_err());
        assert!(collect("@a\nAC\n-\nII\n").is_err());
    }
}
