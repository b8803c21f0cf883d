//! Custom initial fields read from text files.
//!
//! One Fock component per line as `n,re` or `n,re,im`. Blank lines and lines
//! starting with `#` are skipped; components not listed are zero. The state is
//! normalized after reading.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::fockspace::FieldSpec;
use crate::C64;

pub fn parse_field_file(text: &str) -> Result<FieldSpec> {
    let mut entries: Vec<(usize, C64)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| Error::Parse { line, message };
        let fields: Vec<&str> = content.split(',').map(str::trim).collect();
        if !(2..=3).contains(&fields.len()) {
            return Err(parse_err(format!(
                "expected n,re[,im], got {} fields",
                fields.len()
            )));
        }
        let n: usize = fields[0]
            .parse()
            .map_err(|_| parse_err(format!("bad Fock index {:?}", fields[0])))?;
        let mut parts = [0.0; 2];
        for (slot, s) in parts.iter_mut().zip(&fields[1..]) {
            *slot = s
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| parse_err(format!("bad amplitude {s:?}")))?;
        }
        if entries.iter().any(|(k, _)| *k == n) {
            return Err(parse_err(format!("Fock index {n} listed twice")));
        }
        entries.push((n, C64::new(parts[0], parts[1])));
    }
    let len = entries
        .iter()
        .map(|(n, _)| n + 1)
        .max()
        .ok_or_else(|| Error::invalid("field file lists no amplitudes"))?;
    let mut amplitudes = vec![C64::new(0.0, 0.0); len];
    for (n, c) in entries {
        amplitudes[n] = c;
    }
    Ok(FieldSpec::Custom { amplitudes })
}

pub fn read_field_file(path: &Path) -> Result<FieldSpec> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_field_file(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sparse_components() {
        let spec = parse_field_file("# two-level superposition\n0, 1\n\n3,0.5,-0.5\n").unwrap();
        match spec {
            FieldSpec::Custom { amplitudes } => {
                assert_eq!(amplitudes.len(), 4);
                assert_eq!(amplitudes[0], C64::new(1.0, 0.0));
                assert_eq!(amplitudes[1], C64::new(0.0, 0.0));
                assert_eq!(amplitudes[3], C64::new(0.5, -0.5));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_field_file("0,1\n# ok\n2,x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse_field_file("0,1\n0,2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = parse_field_file("1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
        assert!(parse_field_file("# nothing\n").is_err());
    }
}
