//! Uniformly gridded series of named observables and their CSV form.
//!
//! File layout:
//!
//! ```text
//! # key = value          (zero or more metadata lines)
//! T,col1,col2            (axis name first)
//! 0.0000000000000000e0,...
//! ```
//!
//! Reals are written with 17 significant digits so every `f64` round-trips
//! exactly. Lines end in LF.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Relative tolerance on grid uniformity, measured against the largest
/// abscissa magnitude.
const GRID_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    axis: String,
    t: Vec<f64>,
    columns: Vec<(String, Vec<f64>)>,
    metadata: Vec<(String, String)>,
}

fn check_name(name: &str) -> Result<()> {
    if name.is_empty() || name.contains([',', '\n', '\r']) {
        return Err(Error::Series(format!("invalid column name {name:?}")));
    }
    Ok(())
}

fn check_uniform(t: &[f64]) -> Result<()> {
    if t.is_empty() {
        return Err(Error::Series("grid is empty".into()));
    }
    if t.iter().any(|x| !x.is_finite()) {
        return Err(Error::Series("grid contains non-finite values".into()));
    }
    if t.len() == 1 {
        return Ok(());
    }
    let n = t.len() - 1;
    let (first, last) = (t[0], t[n]);
    if last <= first {
        return Err(Error::Series("grid must be strictly increasing".into()));
    }
    let h = (last - first) / n as f64;
    let scale = first.abs().max(last.abs());
    for (k, w) in t.windows(2).enumerate() {
        if w[1] <= w[0] {
            return Err(Error::Series(format!(
                "grid not increasing at index {}",
                k + 1
            )));
        }
    }
    for (k, x) in t.iter().enumerate() {
        if (x - (first + k as f64 * h)).abs() > GRID_TOL * scale {
            return Err(Error::Series(format!("grid not uniform at index {k}")));
        }
    }
    Ok(())
}

impl TimeSeries {
    /// New series over `t` with axis column named `axis` (usually `T`).
    pub fn new(axis: impl Into<String>, t: Vec<f64>) -> Result<Self> {
        let axis = axis.into();
        check_name(&axis)?;
        check_uniform(&t)?;
        Ok(TimeSeries {
            axis,
            t,
            columns: Vec::new(),
            metadata: Vec::new(),
        })
    }

    pub fn axis(&self) -> &str {
        &self.axis
    }

    pub fn t(&self) -> &[f64] {
        &self.t
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Grid step; zero for a single-point series.
    pub fn step(&self) -> f64 {
        if self.t.len() < 2 {
            0.0
        } else {
            (self.t[self.t.len() - 1] - self.t[0]) / (self.t.len() - 1) as f64
        }
    }

    pub fn add_column(&mut self, name: impl Into<String>, values: Vec<f64>) -> Result<()> {
        let name = name.into();
        check_name(&name)?;
        if name == self.axis || self.column(&name).is_some() {
            return Err(Error::Series(format!("duplicate column {name:?}")));
        }
        if values.len() != self.t.len() {
            return Err(Error::Series(format!(
                "column {name:?} has {} values, grid has {}",
                values.len(),
                self.t.len()
            )));
        }
        self.columns.push((name, values));
        Ok(())
    }

    pub fn with_column(mut self, name: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        self.add_column(name, values)?;
        Ok(self)
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }

    pub fn column_names(&self) -> impl Iterator<Item = &str> {
        self.columns.iter().map(|(n, _)| n.as_str())
    }

    /// Sets a metadata entry, replacing any previous value for `key`.
    pub fn set_meta(&mut self, key: impl Into<String>, value: impl ToString) -> Result<()> {
        let key = key.into();
        let value = value.to_string();
        if key.is_empty() || key.contains(" = ") || key.contains(['\n', '\r']) {
            return Err(Error::Series(format!("invalid metadata key {key:?}")));
        }
        if value.contains(['\n', '\r']) {
            return Err(Error::Series(format!(
                "metadata value for {key:?} spans lines"
            )));
        }
        match self.metadata.iter_mut().find(|(k, _)| *k == key) {
            Some(entry) => entry.1 = value,
            None => self.metadata.push((key, value)),
        }
        Ok(())
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn metadata(&self) -> &[(String, String)] {
        &self.metadata
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        for (k, v) in &self.metadata {
            writeln!(w, "# {k} = {v}")?;
        }
        write!(w, "{}", self.axis)?;
        for (name, _) in &self.columns {
            write!(w, ",{name}")?;
        }
        w.write_all(b"\n")?;
        for (i, t) in self.t.iter().enumerate() {
            write!(w, "{t:.16e}")?;
            for (_, col) in &self.columns {
                write!(w, ",{:.16e}", col[i])?;
            }
            w.write_all(b"\n")?;
        }
        w.flush()
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let io_err = |source| Error::Io {
            path: path.to_path_buf(),
            source,
        };
        let file = File::create(path).map_err(io_err)?;
        self.write_to(BufWriter::new(file)).map_err(io_err)
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf)
            .expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    /// Parses the CSV form. Files without a metadata block are accepted.
    pub fn read_from<R: BufRead>(r: R) -> Result<Self> {
        let mut metadata = Vec::new();
        let mut header: Option<Vec<String>> = None;
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for (idx, line) in r.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.map_err(|e| Error::Parse {
                line: lineno,
                message: e.to_string(),
            })?;
            let parse_err = |message: String| Error::Parse {
                line: lineno,
                message,
            };
            if header.is_none() {
                if let Some(rest) = line.strip_prefix('#') {
                    let body = rest.strip_prefix(' ').unwrap_or(rest);
                    let (k, v) = body
                        .split_once(" = ")
                        .ok_or_else(|| parse_err(format!("malformed metadata line {line:?}")))?;
                    metadata.push((k.to_string(), v.to_string()));
                    continue;
                }
                let names: Vec<String> = line.split(',').map(str::to_string).collect();
                if names.iter().any(|n| n.is_empty()) {
                    return Err(parse_err("empty column name in header".into()));
                }
                header = Some(names);
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let width = header.as_ref().map(Vec::len).unwrap_or(0);
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != width {
                return Err(parse_err(format!(
                    "expected {width} fields, found {}",
                    fields.len()
                )));
            }
            let row = fields
                .iter()
                .map(|f| {
                    f.trim()
                        .parse::<f64>()
                        .map_err(|e| parse_err(format!("bad number {f:?}: {e}")))
                })
                .collect::<Result<Vec<f64>>>()?;
            rows.push(row);
        }
        let header = header.ok_or_else(|| Error::Parse {
            line: 0,
            message: "missing header row".into(),
        })?;
        let mut cols: Vec<Vec<f64>> = vec![Vec::with_capacity(rows.len()); header.len()];
        for row in rows {
            for (c, v) in cols.iter_mut().zip(row) {
                c.push(v);
            }
        }
        let mut cols = cols.into_iter();
        let mut names = header.into_iter();
        let mut series = TimeSeries::new(names.next().unwrap(), cols.next().unwrap())?;
        for (name, values) in names.zip(cols) {
            series.add_column(name, values)?;
        }
        series.metadata = metadata;
        Ok(series)
    }

    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::read_from(BufReader::new(file))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn axis_only_series() {
        let mut s = TimeSeries::new("T", vec![0.0, 0.5, 1.0]).unwrap();
        s.set_meta("model", "ijcm").unwrap();
        let text = s.to_csv_string();
        assert_eq!(
            text,
            "# model = ijcm\nT\n0.0000000000000000e0\n5.0000000000000000e-1\n1.0000000000000000e0\n"
        );
        assert_eq!(TimeSeries::read_from(text.as_bytes()).unwrap(), s);
    }

    #[test]
    fn three_point_round_trip_is_bit_exact() {
        let s = TimeSeries::new("T", vec![0.0, 0.1, 0.2])
            .unwrap()
            .with_column("sigma_z", vec![1.0, -1.0 / 3.0, std::f64::consts::PI])
            .unwrap();
        let back = TimeSeries::read_from(s.to_csv_string().as_bytes()).unwrap();
        assert_eq!(back, s);
        for (a, b) in back
            .column("sigma_z")
            .unwrap()
            .iter()
            .zip(s.column("sigma_z").unwrap())
        {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn missing_field_names_the_line() {
        let text = "# a = b\nT,x\n0.0,1.0\n1.0\n";
        match TimeSeries::read_from(text.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn legacy_file_without_metadata() {
        let s = TimeSeries::read_from("T,x\n0,1\n1,2\n".as_bytes()).unwrap();
        assert!(s.metadata().is_empty());
        assert_eq!(s.column("x").unwrap(), &[1.0, 2.0]);
    }

    #[test]
    fn malformed_metadata_and_numbers() {
        assert!(matches!(
            TimeSeries::read_from("# nonsense\nT\n0\n".as_bytes()),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            TimeSeries::read_from("T,x\n0,abc\n".as_bytes()),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(TimeSeries::read_from("".as_bytes()).is_err());
    }

    #[test]
    fn rejects_nonuniform_grid_and_bad_columns() {
        assert!(TimeSeries::new("T", vec![0.0, 1.0, 3.0]).is_err());
        assert!(TimeSeries::new("T", vec![0.0, 0.0]).is_err());
        assert!(TimeSeries::new("T", vec![]).is_err());
        let mut s = TimeSeries::new("T", vec![0.0, 1.0]).unwrap();
        assert!(s.add_column("x", vec![1.0]).is_err());
        assert!(s.add_column("a,b", vec![1.0, 2.0]).is_err());
        s.add_column("x", vec![1.0, 2.0]).unwrap();
        assert!(s.add_column("x", vec![1.0, 2.0]).is_err());
        assert!(s.set_meta("k", "two\nlines").is_err());
    }

    #[test]
    fn metadata_replace_keeps_order() {
        let mut s = TimeSeries::new("T", vec![0.0]).unwrap();
        s.set_meta("a", 1).unwrap();
        s.set_meta("b", 2).unwrap();
        s.set_meta("a", 3).unwrap();
        assert_eq!(s.metadata()[0], ("a".to_string(), "3".to_string()));
        assert_eq!(s.meta("b"), Some("2"));
    }

    proptest! {
        #[test]
        fn write_read_identity(
            start in -1e3f64..1e3,
            step in 1e-3f64..10.0,
            cols in prop::collection::vec(prop::collection::vec(prop::num::f64::NORMAL | prop::num::f64::ZERO, 7), 0..4),
            meta in prop::collection::vec(("[a-z_]{1,8}", "[ -~]{0,20}"), 0..4),
        ) {
            let t: Vec<f64> = (0..7).map(|k| start + step * k as f64).collect();
            let mut s = TimeSeries::new("T", t).unwrap();
            for (i, c) in cols.into_iter().enumerate() {
                s.add_column(format!("c{i}"), c).unwrap();
            }
            for (k, v) in meta {
                s.set_meta(k, v).unwrap();
            }
            let back = TimeSeries::read_from(s.to_csv_string().as_bytes()).unwrap();
            prop_assert_eq!(back, s);
        }
    }
}
