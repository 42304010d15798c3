//! CSV and JSON encodings of Betti tables.
//!
//! CSV has a header row followed by one row per entry: `p,q,num,den` for
//! exact tables and `p,q,value` for float tables. Lines starting with `#`
//! carry metadata and are ignored when reading.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::tables::{ExactTable, FloatTable};

/// `num/den` in lowest terms, always with an explicit denominator.
pub fn format_rational(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `num/den` or a bare integer.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den == BigInt::from(0) {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// A table read from disk, in whichever mode it was written.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyTable {
    Exact(ExactTable),
    Float(FloatTable),
}

fn comment_block(meta: &[String]) -> String {
    meta.iter().flat_map(|m| m.lines()).map(|l| format!("# {l}\n")).collect()
}

pub fn exact_table_csv(table: &ExactTable, meta: &[String]) -> String {
    let mut out = comment_block(meta);
    out.push_str("p,q,num,den\n");
    for (p, q, v) in table.iter() {
        let _ = writeln!(out, "{p},{q},{},{}", v.numer(), v.denom());
    }
    out
}

pub fn float_table_csv(table: &FloatTable, meta: &[String]) -> String {
    let mut out = comment_block(meta);
    out.push_str("p,q,value\n");
    for (p, q, v) in table.iter() {
        let _ = writeln!(out, "{p},{q},{v}");
    }
    out
}

pub fn exact_table_json(table: &ExactTable) -> Value {
    let entries: Vec<_> =
        table.iter().map(|(p, q, v)| json!({ "p": p, "q": q, "value": format_rational(v) })).collect();
    json!({ "n": table.n(), "r": table.r(), "mode": "exact", "entries": entries })
}

pub fn float_table_json(table: &FloatTable) -> Value {
    let entries: Vec<_> = table.iter().map(|(p, q, v)| json!({ "p": p, "q": q, "value": v })).collect();
    json!({ "n": table.n(), "r": table.r(), "mode": "float", "entries": entries })
}

/// `n` is the largest row and `r = max p + n`.
fn infer_shape(cells: &[(usize, usize)]) -> Result<(usize, usize)> {
    let n = cells.iter().map(|c| c.1).max().ok_or_else(|| Error::Parse("table has no entries".into()))?;
    let p_max = cells.iter().map(|c| c.0).max().unwrap_or(0);
    Ok((p_max + n, n))
}

fn assemble<T: crate::tables::Entry>(
    shape: Option<(usize, usize)>,
    rows: Vec<(usize, usize, T)>,
) -> Result<crate::tables::BettiTable<T>> {
    let (r, n) = match shape {
        Some(s) => s,
        None => infer_shape(&rows.iter().map(|(p, q, _)| (*p, *q)).collect::<Vec<_>>())?,
    };
    crate::tables::BettiTable::from_entries(r, n, rows)
}

fn parse_index(s: &str, what: &str) -> Result<usize> {
    s.trim().parse().map_err(|_| Error::Parse(format!("bad {what} index {s:?}")))
}

/// Reads either CSV schema, picking the mode from the header.
pub fn read_table_csv(text: &str) -> Result<AnyTable> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(text.as_bytes());
    let header: Vec<String> =
        rdr.headers().map_err(|e| Error::Parse(e.to_string()))?.iter().map(str::to_owned).collect();
    let exact = match header.iter().map(String::as_str).collect::<Vec<_>>().as_slice() {
        ["p", "q", "num", "den"] => true,
        ["p", "q", "value"] => false,
        other => return Err(Error::Parse(format!("unrecognized table header {other:?}"))),
    };
    let mut exact_rows = Vec::new();
    let mut float_rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
        let (p, q) = (parse_index(&rec[0], "p")?, parse_index(&rec[1], "q")?);
        if exact {
            exact_rows.push((p, q, parse_rational(&format!("{}/{}", &rec[2], &rec[3]))?));
        } else {
            let v: f64 = rec[2].parse().map_err(|_| Error::Parse(format!("bad value {:?}", &rec[2])))?;
            float_rows.push((p, q, v));
        }
    }
    Ok(if exact { AnyTable::Exact(assemble(None, exact_rows)?) } else { AnyTable::Float(assemble(None, float_rows)?) })
}

/// Reads the JSON schema written by [`exact_table_json`] and [`float_table_json`].
pub fn read_table_json(text: &str) -> Result<AnyTable> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let field = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("missing field {k:?}")));
    let dim = |k: &str| -> Result<usize> {
        field(k)?.as_u64().map(|x| x as usize).ok_or_else(|| Error::Parse(format!("field {k:?} is not an integer")))
    };
    let shape = Some((dim("r")?, dim("n")?));
    let entries = field("entries")?.as_array().ok_or_else(|| Error::Parse("entries is not an array".into()))?;
    let cell = |e: &Value, k: &str| -> Result<usize> {
        e.get(k).and_then(Value::as_u64).map(|x| x as usize).ok_or_else(|| Error::Parse(format!("entry lacks {k:?}")))
    };
    match field("mode")?.as_str() {
        Some("exact") => {
            let rows = entries
                .iter()
                .map(|e| {
                    let s = e
                        .get("value")
                        .and_then(Value::as_str)
                        .ok_or_else(|| Error::Parse("exact value must be a string".into()))?;
                    Ok((cell(e, "p")?, cell(e, "q")?, parse_rational(s)?))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(AnyTable::Exact(assemble(shape, rows)?))
        }
        Some("float") => {
            let rows = entries
                .iter()
                .map(|e| {
                    let x = e
                        .get("value")
                        .and_then(Value::as_f64)
                        .ok_or_else(|| Error::Parse("float value must be a number".into()))?;
                    Ok((cell(e, "p")?, cell(e, "q")?, x))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(AnyTable::Float(assemble(shape, rows)?))
        }
        other => Err(Error::Parse(format!("unknown mode {other:?}"))),
    }
}

/// JSON when the text starts with `{`, CSV otherwise.
pub fn read_table(text: &str) -> Result<AnyTable> {
    if text.trim_start().starts_with('{') {
        read_table_json(text)
    } else {
        read_table_csv(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tables::{pure_diagram, IndexSet};

    fn golden() -> ExactTable {
        pure_diagram(7, 3, &IndexSet::new(7, 3, vec![2, 4]).unwrap()).unwrap().table
    }

    #[test]
    fn rational_round_trip() {
        let x = BigRational::new(BigInt::from(-6), BigInt::from(4));
        assert_eq!(format_rational(&x), "-3/2");
        assert_eq!(parse_rational("-3/2").unwrap(), x);
        assert_eq!(parse_rational(" 5 ").unwrap(), BigRational::from_integer(5.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a/2").is_err());
    }

    #[test]
    fn exact_csv_round_trip() {
        let t = golden();
        let text = exact_table_csv(&t, &["seed=0".into()]);
        assert!(text.starts_with("# seed=0\np,q,num,den\n0,1,1,10\n"));
        assert_eq!(read_table(&text).unwrap(), AnyTable::Exact(t));
    }

    #[test]
    fn float_csv_round_trip() {
        let t = golden().to_float();
        let text = float_table_csv(&t, &[]);
        assert!(text.contains("0,1,0.1\n"));
        assert_eq!(read_table(&text).unwrap(), AnyTable::Float(t));
    }

    #[test]
    fn json_round_trip() {
        let t = golden();
        let v = exact_table_json(&t);
        assert_eq!(v["entries"][0], json!({ "p": 0, "q": 1, "value": "1/10" }));
        assert_eq!(read_table(&v.to_string()).unwrap(), AnyTable::Exact(t.clone()));
        let f = float_table_json(&t.to_float());
        assert_eq!(read_table(&f.to_string()).unwrap(), AnyTable::Float(t.to_float()));
    }

    #[test]
    fn malformed_input() {
        assert!(read_table("a,b\n1,2\n").is_err());
        assert!(read_table("p,q,value\n0,1,-1\n").is_err());
        assert!(read_table("p,q,value\n").is_err());
        assert!(read_table("{\"mode\":\"exact\"}").is_err());
    }
}
