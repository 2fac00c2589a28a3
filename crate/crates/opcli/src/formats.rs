//! Wire formats: sample CSV, coefficient JSON, and CSV/JSON emitters.

use std::io::{Read, Write};

use num_complex::Complex64;
use serde_json::{json, Value};

/// Sampled function rows `(x, f(x))` from CSV with header `x,re,im`.
pub fn read_samples_csv(input: impl Read) -> Result<Vec<(f64, Complex64)>, String> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = rdr.headers().map_err(|e| e.to_string())?.clone();
    if headers.iter().collect::<Vec<_>>() != ["x", "re", "im"] {
        return Err(format!(
            "expected header x,re,im, found {}",
            headers.iter().collect::<Vec<_>>().join(",")
        ));
    }
    let mut rows = Vec::new();
    for (line, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| e.to_string())?;
        let field = |i: usize| -> Result<f64, String> {
            record[i]
                .parse::<f64>()
                .map_err(|e| format!("row {}: column {}: {e}", line + 1, &headers[i]))
        };
        rows.push((field(0)?, Complex64::new(field(1)?, field(2)?)));
    }
    Ok(rows)
}

/// Coefficients from a JSON array of `[re, im]` pairs.
pub fn parse_coeffs_json(text: &str) -> Result<Vec<Complex64>, String> {
    let pairs: Vec<[f64; 2]> = serde_json::from_str(text).map_err(|e| e.to_string())?;
    Ok(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
}

pub fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn complex_array_json(zs: &[Complex64]) -> Value {
    Value::Array(zs.iter().copied().map(complex_json).collect())
}

/// Pretty JSON followed by a single LF.
pub fn write_json(out: &mut dyn Write, value: &Value) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    out.write_all(b"\n")
}

/// CSV with LF line endings.
pub fn write_csv<R, S>(out: &mut dyn Write, header: &[&str], rows: R) -> std::io::Result<()>
where
    R: IntoIterator<Item = Vec<S>>,
    S: AsRef<[u8]>,
{
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_round_trip() {
        let rows = read_samples_csv("x,re,im\n0.5,1,-2\n -1 , 0.25 ,0\n".as_bytes()).unwrap();
        assert_eq!(
            rows,
            vec![(0.5, Complex64::new(1.0, -2.0)), (-1.0, Complex64::new(0.25, 0.0))]
        );
    }

    #[test]
    fn bad_samples() {
        assert!(read_samples_csv("x,y\n1,2\n".as_bytes()).is_err());
        assert!(read_samples_csv("x,re,im\n1,oops,0\n".as_bytes())
            .unwrap_err()
            .contains("row 1"));
        assert!(read_samples_csv("x,re,im\n1,2\n".as_bytes()).is_err());
    }

    #[test]
    fn coefficient_json() {
        assert_eq!(
            parse_coeffs_json("[[1,0],[0.5,-1]]").unwrap(),
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.5, -1.0)]
        );
        assert!(parse_coeffs_json("[1,2]").is_err());
        assert!(parse_coeffs_json("[[1,2,3]]").is_err());
    }

    #[test]
    fn csv_uses_lf() {
        let mut buf = Vec::new();
        write_csv(&mut buf, &["a", "b"], vec![vec!["1", "x,y"]]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "a,b\n1,\"x,y\"\n");
    }
}
