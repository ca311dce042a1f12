//! One object per line, whitespace-separated tokens. Blank lines are empty
//! objects; lines starting with `#` are skipped.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::domain::RawObject;
use crate::error::{Error, Result};

pub const DEFAULT_LINE_CAP: usize = 1_000_000;

pub fn read_transactions(path: &Path) -> Result<Vec<RawObject>> {
    read_transactions_capped(path, DEFAULT_LINE_CAP)
}

pub fn read_transactions_capped(path: &Path, cap: usize) -> Result<Vec<RawObject>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_transactions(BufReader::new(file), path, cap)
}

/// `path` is only used in error messages.
pub fn parse_transactions<R: BufRead>(reader: R, path: &Path, cap: usize) -> Result<Vec<RawObject>> {
    let mut out = Vec::new();
    for (n, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.starts_with('#') {
            continue;
        }
        let tokens: Vec<String> = line.split_whitespace().map(str::to_owned).collect();
        if tokens.len() > cap {
            return Err(Error::LineTooLong {
                path: path.to_owned(),
                line: n + 1,
                tokens: tokens.len(),
                cap,
            });
        }
        out.push(tokens);
    }
    Ok(out)
}

/// Writes tokens separated by single spaces, one object per line.
pub fn write_transactions(path: &Path, objects: &[RawObject]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for o in objects {
        writeln!(w, "{}", o.join(" ")).map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn parse(text: &str, cap: usize) -> Result<Vec<RawObject>> {
        parse_transactions(Cursor::new(text), Path::new("mem"), cap)
    }

    #[test]
    fn blank_and_comment_lines() {
        let objs = parse("# header\n5 12 7 5\n\n  a\tb \n", 10).unwrap();
        assert_eq!(objs.len(), 3);
        assert_eq!(objs[0], vec!["5", "12", "7", "5"]);
        assert!(objs[1].is_empty());
        assert_eq!(objs[2], vec!["a", "b"]);
    }

    #[test]
    fn empty_input() {
        assert!(parse("", 10).unwrap().is_empty());
    }

    #[test]
    fn cap_enforced() {
        let err = parse("1 2 3\n1 2 3 4\n", 3).unwrap_err();
        assert!(matches!(err, Error::LineTooLong { line: 2, tokens: 4, .. }));
        assert!(err.to_string().contains("too long"));
    }

    #[test]
    fn missing_file_names_path() {
        let err = read_transactions(Path::new("/nonexistent/x.dat")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/x.dat"));
    }

    #[test]
    fn round_trip_is_canonical() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.dat");
        std::fs::write(&p, "b   a\n\n7 3\n").unwrap();
        let first = read_transactions(&p).unwrap();
        write_transactions(&p, &first).unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "b a\n\n7 3\n");
        assert_eq!(read_transactions(&p).unwrap(), first);
    }
}
