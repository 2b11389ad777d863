//! Text formats: generator-matrix files, spread dumps and subspace lists.
//!
//! Generator file:
//! ```text
//! field=2^4:19 base=2^1:3 k=2 n=4
//! 0 0 1 4
//! 1 4 0 0
//! ```
//! Spread dump: a header `N=<N> t=<t> q=<q> count=<c>`, then one element
//! per line as `;`-separated basis vectors with `,`-separated coordinates.

use std::collections::HashMap;
use std::fmt::Write;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{prime_power, Elem, Extension, Field};
use crate::hamming::HammingCode;
use crate::linalg::{Mat, Subspace};
use crate::rank::RankCode;
use crate::spreads::Spread;

fn header(line: &str) -> Result<HashMap<&str, &str>> {
    line.split_whitespace()
        .map(|kv| kv.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=value, got {kv:?}"))))
        .collect()
}

fn field_key<'a>(h: &HashMap<&str, &'a str>, key: &str) -> Result<&'a str> {
    h.get(key).copied().ok_or_else(|| Error::Parse(format!("missing {key}= in header")))
}

fn usize_key(h: &HashMap<&str, &str>, key: &str) -> Result<usize> {
    field_key(h, key)?.parse().map_err(|_| Error::Parse(format!("{key}= is not a number")))
}

fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'))
}

fn write_matrix(out: &mut String, field: &Field, base: &Field, g: &Mat) {
    writeln!(out, "field={} base={} k={} n={}", field.spec(), base.spec(), g.rows(), g.cols()).unwrap();
    for r in 0..g.rows() {
        let row: Vec<String> = g.row(r).iter().map(u64::to_string).collect();
        writeln!(out, "{}", row.join(" ")).unwrap();
    }
}

pub fn write_generator(code: &RankCode) -> String {
    let mut out = String::new();
    write_matrix(&mut out, code.sup(), code.base(), code.generator());
    out
}

/// Hamming generators are written over the code field itself.
pub fn write_hamming(h: &HammingCode) -> String {
    let mut out = String::new();
    let f = h.generator.field();
    write_matrix(&mut out, f, f, &h.generator);
    out
}

pub fn parse_generator(text: &str) -> Result<RankCode> {
    let mut lines = content_lines(text);
    let h = header(lines.next().ok_or_else(|| Error::Parse("empty generator file".into()))?)?;
    let sup: Field = field_key(&h, "field")?.parse()?;
    let base: Field = field_key(&h, "base")?.parse()?;
    let (k, n) = (usize_key(&h, "k")?, usize_key(&h, "n")?);
    let rows: Vec<Vec<Elem>> = lines
        .map(|l| {
            l.split_whitespace()
                .map(|x| x.parse::<Elem>().map_err(|_| Error::Parse(format!("bad element {x:?}"))))
                .collect()
        })
        .collect::<Result<_>>()?;
    if rows.len() != k || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Parse(format!("expected {k} rows of {n} elements")));
    }
    if let Some(bad) = rows.iter().flatten().find(|&&v| !sup.contains(v)) {
        return Err(Error::Parse(format!("{bad} is not an element of {}", sup.spec())));
    }
    let ext = Arc::new(Extension::new(&sup, &base)?);
    RankCode::from_rows(&rows, ext)
}

fn field_of_order(q: u64) -> Result<Field> {
    let (p, s) = prime_power(q).ok_or_else(|| Error::Parse(format!("q={q} is not a prime power")))?;
    Field::canonical(p, s)
}

fn write_vectors(out: &mut String, s: &Subspace) {
    let vs: Vec<String> = s
        .basis_rows()
        .map(|r| r.iter().map(u64::to_string).collect::<Vec<_>>().join(","))
        .collect();
    writeln!(out, "{}", vs.join(";")).unwrap();
}

fn parse_vectors(line: &str, field: &Field, ambient: usize) -> Result<Subspace> {
    let vecs: Vec<Vec<Elem>> = line
        .split(';')
        .map(|v| {
            v.split(',')
                .map(|x| {
                    let x: Elem = x.trim().parse().map_err(|_| Error::Parse(format!("bad coordinate {x:?}")))?;
                    if field.contains(x) {
                        Ok(x)
                    } else {
                        Err(Error::Parse(format!("{x} is not in F_{}", field.order())))
                    }
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    if vecs.iter().any(|v| v.len() != ambient) {
        return Err(Error::Parse(format!("vectors must have {ambient} coordinates")));
    }
    Subspace::span(field, ambient, &vecs)
}

pub fn write_spread(s: &Spread) -> String {
    let mut out = String::new();
    writeln!(out, "N={} t={} q={} count={}", s.ambient(), s.t(), s.field().order(), s.len()).unwrap();
    for e in s.elements() {
        write_vectors(&mut out, e);
    }
    out
}

/// Reads a spread dump. The `count=` header is informational; the
/// elements actually listed are returned so that truncated dumps can be
/// diagnosed by verification.
pub fn parse_spread(text: &str) -> Result<Spread> {
    let mut lines = content_lines(text);
    let h = header(lines.next().ok_or_else(|| Error::Parse("empty spread dump".into()))?)?;
    let (ambient, t) = (usize_key(&h, "N")?, usize_key(&h, "t")?);
    let field = field_of_order(field_key(&h, "q")?.parse().map_err(|_| Error::Parse("q= is not a number".into()))?)?;
    let elements = lines.map(|l| parse_vectors(l, &field, ambient)).collect::<Result<_>>()?;
    Spread::new(&field, ambient, t, elements)
}

/// A subspace file: header `N=<N> q=<q>`, then spanning vectors, either
/// one per line or `;`-separated.
pub fn parse_subspace(text: &str) -> Result<Subspace> {
    let mut lines = content_lines(text);
    let h = header(lines.next().ok_or_else(|| Error::Parse("empty subspace file".into()))?)?;
    let ambient = usize_key(&h, "N")?;
    let field = field_of_order(field_key(&h, "q")?.parse().map_err(|_| Error::Parse("q= is not a number".into()))?)?;
    let joined: Vec<&str> = lines.collect();
    if joined.is_empty() {
        return Ok(Subspace::zero(&field, ambient));
    }
    parse_vectors(&joined.join(";"), &field, ambient)
}

pub fn write_subspace(s: &Subspace) -> String {
    let mut out = String::new();
    writeln!(out, "N={} q={}", s.ambient(), s.field().order()).unwrap();
    write_vectors(&mut out, s);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spreads::desarguesian_spread;

    #[test]
    fn generator_roundtrip() {
        let text = "field=2^4:19 base=2^1:3 k=2 n=2\n1 0\n0 1\n";
        let c = parse_generator(text).unwrap();
        assert_eq!(c.m(), 4);
        assert_eq!(write_generator(&c), text);
    }

    #[test]
    fn generator_errors() {
        assert!(parse_generator("").is_err());
        assert!(parse_generator("field=2^4 base=2^1 k=2 n=2\n1 0\n").is_err());
        assert!(parse_generator("field=2^4 base=2^1 k=1 n=2\n1 16\n").is_err());
        assert!(parse_generator("field=2^4 base=3^1 k=1 n=2\n1 2\n").is_err());
    }

    #[test]
    fn spread_roundtrip() {
        let s = desarguesian_spread(2, 2, 2).unwrap();
        let text = write_spread(&s);
        assert!(text.starts_with("N=4 t=2 q=2 count=5\n"));
        let back = parse_spread(&text).unwrap();
        assert_eq!(back.len(), 5);
        assert!(back.elements().iter().zip(s.elements()).all(|(a, b)| a.equals(b)));
    }

    #[test]
    fn subspace_file() {
        let w = parse_subspace("N=4 q=2\n1,0,0,0\n0,1,1,0\n").unwrap();
        assert_eq!(w.dim(), 2);
        assert!(parse_subspace(&write_subspace(&w)).unwrap().equals(&w));
    }
}
