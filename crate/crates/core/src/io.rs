//! `t,re,im` CSV files for sequences.
//!
//! Indices must be strictly increasing; indices skipped between rows are
//! zero. Values are written with 17 significant digits, which round-trips
//! every finite double exactly.

use std::io::{Read, Write};

use thiserror::Error;

use crate::sequence::{FiniteSequence, C64};

#[derive(Debug, Error)]
pub enum SequenceIoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("line {line}: {message}")]
    Malformed { line: u64, message: String },
}

fn malformed(line: u64, message: impl Into<String>) -> SequenceIoError {
    SequenceIoError::Malformed {
        line,
        message: message.into(),
    }
}

pub fn read_sequence_csv<R: Read>(input: R) -> Result<FiniteSequence, SequenceIoError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let header = reader.headers().map_err(|e| malformed(1, e.to_string()))?.clone();
    if header.iter().collect::<Vec<_>>() != ["t", "re", "im"] {
        return Err(malformed(1, format!("expected header `t,re,im`, found `{}`", header.iter().collect::<Vec<_>>().join(","))));
    }
    let mut samples: Vec<(i64, C64)> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            malformed(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 3 {
            return Err(malformed(line, format!("expected 3 fields, found {}", record.len())));
        }
        let t: i64 = record[0]
            .parse()
            .map_err(|_| malformed(line, format!("bad index {:?}", &record[0])))?;
        let re: f64 = record[1]
            .parse()
            .map_err(|_| malformed(line, format!("bad real part {:?}", &record[1])))?;
        let im: f64 = record[2]
            .parse()
            .map_err(|_| malformed(line, format!("bad imaginary part {:?}", &record[2])))?;
        if !re.is_finite() || !im.is_finite() {
            return Err(malformed(line, "non-finite sample"));
        }
        if let Some(&(prev, _)) = samples.last() {
            if t <= prev {
                return Err(malformed(line, format!("index {t} does not increase past {prev}")));
            }
        }
        samples.push((t, C64::new(re, im)));
    }
    FiniteSequence::from_samples(samples).map_err(|e| malformed(0, e.to_string()))
}

/// Writes every stored sample of `x`.
pub fn write_sequence_csv<W: Write>(x: &FiniteSequence, out: W) -> Result<(), SequenceIoError> {
    write_samples_csv(x.iter(), out)
}

pub fn write_samples_csv<W, I>(samples: I, out: W) -> Result<(), SequenceIoError>
where
    W: Write,
    I: IntoIterator<Item = (i64, C64)>,
{
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "re", "im"]).map_err(std::io::Error::from)?;
    for (t, v) in samples {
        w.write_record([t.to_string(), format!("{:.16e}", v.re), format!("{:.16e}", v.im)])
            .map_err(std::io::Error::from)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_sparse_rows() {
        let text = "t,re,im\n-1,1.5,0\n2,0,-2\n";
        let x = read_sequence_csv(text.as_bytes()).unwrap();
        assert_eq!(x.start(), -1);
        assert_eq!(x.len(), 4);
        assert_eq!(x.get(2), C64::new(0.0, -2.0));
        assert_eq!(x.get(0), C64::new(0.0, 0.0));
    }

    #[test]
    fn empty_file_body_is_empty_sequence() {
        assert!(read_sequence_csv("t,re,im\n".as_bytes()).unwrap().is_empty());
    }

    #[test]
    fn malformed_rows_report_their_line() {
        let err = read_sequence_csv("t,re,im\n0,1,0\n1,abc,0\n".as_bytes()).unwrap_err();
        assert!(matches!(err, SequenceIoError::Malformed { line: 3, .. }), "{err}");
        let err = read_sequence_csv("t,re,im\n3,1,0\n3,1,0\n".as_bytes()).unwrap_err();
        assert!(matches!(err, SequenceIoError::Malformed { line: 3, .. }), "{err}");
        let err = read_sequence_csv("t,re,im\n0,nan,0\n".as_bytes()).unwrap_err();
        assert!(matches!(err, SequenceIoError::Malformed { line: 2, .. }), "{err}");
        let err = read_sequence_csv("index,value\n".as_bytes()).unwrap_err();
        assert!(matches!(err, SequenceIoError::Malformed { line: 1, .. }), "{err}");
    }
}
