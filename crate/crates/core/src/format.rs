// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The derandom authors

//! Plain-text family files.
//!
//! ```text
//! derandom-family v1
//! kind=bisector
//! n=8
//! ...
//! ---
//! 0 1 1 0 1 0 1 0
//! crc32=<decimal CRC-32 of the body bytes>
//! ```
//!
//! Header values are exact: `alpha=1/2`, never a decimal float. The body is
//! one line per function, including its trailing newline.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::family::{Family, FamilyKind, Provenance, Uniformity};
use crate::function::Function;
use crate::greedy::CoverageStep;
use crate::ratio::Fraction;

pub const VERSION_LINE: &str = "derandom-family v1";
const SEPARATOR: &str = "---";

/// A family as stored on disk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyFile {
    pub family: Family,
}

impl FamilyFile {
    pub fn new(family: Family) -> Self {
        FamilyFile { family }
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Family> {
        Ok(std::fs::read_to_string(path)?.parse::<FamilyFile>()?.family)
    }

    pub fn write(family: &Family, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, serialize(family))?;
        Ok(())
    }
}

impl fmt::Display for FamilyFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize(&self.family))
    }
}

impl FromStr for FamilyFile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s).map(FamilyFile::new)
    }
}

fn escape(v: &str) -> String {
    v.replace('\\', "\\\\").replace('\n', "\\n")
}

fn unescape(v: &str) -> String {
    let mut out = String::with_capacity(v.len());
    let mut chars = v.chars();
    while let Some(c) = chars.next() {
        match (c, c == '\\') {
            (_, true) => match chars.next() {
                Some('n') => out.push('\n'),
                Some(other) => out.push(other),
                None => out.push('\\'),
            },
            (c, false) => out.push(c),
        }
    }
    out
}

fn body_of(family: &Family) -> String {
    let mut body = String::new();
    for f in family.functions() {
        let line: Vec<String> = f.images().iter().map(u32::to_string).collect();
        body.push_str(&line.join(" "));
        body.push('\n');
    }
    body
}

pub fn serialize(family: &Family) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let p = family.provenance();
    let _ = writeln!(out, "{VERSION_LINE}");
    let _ = writeln!(out, "kind={}", family.kind());
    let _ = writeln!(out, "n={}", family.n());
    let _ = writeln!(out, "k={}", family.k());
    let _ = writeln!(out, "ell={}", family.ell());
    if let Some(a) = family.alpha() {
        let _ = writeln!(out, "alpha={a}");
    }
    if let Some(b) = family.beta() {
        let _ = writeln!(out, "beta={b}");
    }
    if let (Some(k0), Some(k1)) = (family.k0(), family.k1()) {
        let _ = writeln!(out, "k0={k0}");
        let _ = writeln!(out, "k1={k1}");
    }
    let _ = writeln!(out, "uniformity={}", family.uniformity());
    let _ = writeln!(out, "count={}", family.len());
    let _ = writeln!(out, "builder={}", escape(&p.builder));
    let _ = writeln!(out, "out_of_regime={}", p.out_of_regime);
    if let Some(seed) = p.seed {
        let _ = writeln!(out, "seed={seed}");
    }
    if let Some(valid) = p.valid {
        let _ = writeln!(out, "valid={valid}");
    }
    for (key, v) in &p.notes {
        let _ = writeln!(out, "note.{}={}", escape(key).replace('=', "\\="), escape(v));
    }
    if !p.coverage.is_empty() {
        let steps: Vec<String> = p
            .coverage
            .iter()
            .map(|c| format!("{}:{}:{}", c.scanned, c.covered, c.remaining))
            .collect();
        let _ = writeln!(out, "coverage={}", steps.join(";"));
    }
    let body = body_of(family);
    let _ = writeln!(out, "{SEPARATOR}");
    out.push_str(&body);
    let _ = writeln!(out, "crc32={}", crc32fast::hash(body.as_bytes()));
    out
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn field<T: FromStr>(line: usize, key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| perr(line, format!("bad value {v:?} for {key}")))
}

/// Split `note.<key>=<value>` at the first `=` not preceded by a backslash.
fn split_note(rest: &str) -> Option<(String, &str)> {
    let bytes = rest.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'\\' => i += 2,
            b'=' => return Some((unescape(&rest[..i]), &rest[i + 1..])),
            _ => i += 1,
        }
    }
    None
}

#[derive(Default)]
struct Header {
    kind: Option<FamilyKind>,
    n: Option<usize>,
    k: Option<usize>,
    ell: Option<usize>,
    alpha: Option<Fraction>,
    beta: Option<Fraction>,
    k0: Option<usize>,
    k1: Option<usize>,
    uniformity: Option<Uniformity>,
    count: Option<usize>,
    provenance: Provenance,
}

pub fn parse(text: &str) -> Result<Family> {
    let mut lines = text.split_inclusive('\n').enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, l)) if l.trim_end_matches('\n') == VERSION_LINE => {}
        Some((i, l)) => return Err(perr(i, format!("expected {VERSION_LINE:?}, found {:?}", l.trim_end()))),
        None => return Err(perr(1, "empty file")),
    }
    let mut h = Header::default();
    let mut separator_line = 0;
    for (i, raw) in lines.by_ref() {
        let l = raw.strip_suffix('\n').ok_or_else(|| perr(i, "truncated header"))?;
        if l == SEPARATOR {
            separator_line = i;
            break;
        }
        if let Some(rest) = l.strip_prefix("note.") {
            let (key, v) = split_note(rest).ok_or_else(|| perr(i, "note without '='"))?;
            h.provenance.notes.insert(key, unescape(v));
            continue;
        }
        let (key, v) = l
            .split_once('=')
            .ok_or_else(|| perr(i, format!("expected key=value, found {l:?}")))?;
        match key {
            "kind" => h.kind = Some(field(i, key, v)?),
            "n" => h.n = Some(field(i, key, v)?),
            "k" => h.k = Some(field(i, key, v)?),
            "ell" => h.ell = Some(field(i, key, v)?),
            "alpha" => h.alpha = Some(field(i, key, v)?),
            "beta" => h.beta = Some(field(i, key, v)?),
            "k0" => h.k0 = Some(field(i, key, v)?),
            "k1" => h.k1 = Some(field(i, key, v)?),
            "uniformity" => h.uniformity = Some(field(i, key, v)?),
            "count" => h.count = Some(field(i, key, v)?),
            "builder" => h.provenance.builder = unescape(v),
            "out_of_regime" => h.provenance.out_of_regime = field(i, key, v)?,
            "seed" => h.provenance.seed = Some(field(i, key, v)?),
            "valid" => h.provenance.valid = Some(field(i, key, v)?),
            "coverage" => {
                for step in v.split(';') {
                    let parts: Vec<&str> = step.split(':').collect();
                    let [s, c, r] = parts.as_slice() else {
                        return Err(perr(i, format!("bad coverage step {step:?}")));
                    };
                    h.provenance.coverage.push(CoverageStep {
                        scanned: field(i, key, s)?,
                        covered: field(i, key, c)?,
                        remaining: field(i, key, r)?,
                    });
                }
            }
            other => return Err(perr(i, format!("unknown header key {other:?}"))),
        }
    }
    if separator_line == 0 {
        return Err(perr(text.lines().count() + 1, "missing body separator"));
    }
    let need = |v: Option<usize>, key: &str| v.ok_or_else(|| perr(separator_line, format!("missing {key}")));
    let kind = h.kind.ok_or_else(|| perr(separator_line, "missing kind"))?;
    let n = need(h.n, "n")?;
    let k = need(h.k, "k")?;
    let ell = need(h.ell, "ell")?;
    let count = need(h.count, "count")?;

    let mut body = String::new();
    let mut functions = Vec::with_capacity(count);
    let mut checksum = None;
    for (i, raw) in lines.by_ref() {
        if let Some(v) = raw.strip_prefix("crc32=") {
            let v = v
                .strip_suffix('\n')
                .ok_or_else(|| perr(i, "unterminated checksum line"))?;
            checksum = Some((i, field::<u32>(i, "crc32", v)?));
            break;
        }
        let l = raw.strip_suffix('\n').ok_or_else(|| perr(i, "truncated body"))?;
        let images = if l.is_empty() {
            Vec::new()
        } else {
            l.split(' ')
                .map(|t| field::<u32>(i, "image", t))
                .collect::<Result<Vec<_>>>()?
        };
        if images.len() != n {
            return Err(perr(i, format!("expected {n} images, found {}", images.len())));
        }
        functions.push(Function::new(ell, images).map_err(|e| perr(i, e.to_string()))?);
        body.push_str(raw);
    }
    let (crc_line, expected) = checksum.ok_or_else(|| perr(text.lines().count() + 1, "missing checksum line"))?;
    if let Some((i, _)) = lines.next() {
        return Err(perr(i, "content after checksum line"));
    }
    let found = crc32fast::hash(body.as_bytes());
    if found != expected {
        return Err(Error::ChecksumMismatch { expected, found });
    }
    if functions.len() != count {
        return Err(perr(
            crc_line,
            format!("header count {count} but {} functions", functions.len()),
        ));
    }

    let fam = match kind {
        FamilyKind::Splitter => Family::splitter(n, k, ell, functions),
        FamilyKind::Bisector | FamilyKind::Universal | FamilyKind::Mapping if ell != 2 => {
            return Err(perr(separator_line, format!("{kind} families are binary, ell = {ell}")));
        }
        FamilyKind::Bisector => Family::bisector(
            n,
            k,
            h.alpha.ok_or_else(|| perr(separator_line, "missing alpha"))?,
            functions,
        ),
        FamilyKind::Universal => Family::universal(
            n,
            k,
            h.alpha.ok_or_else(|| perr(separator_line, "missing alpha"))?,
            functions,
        ),
        FamilyKind::Mapping => {
            let k0 = need(h.k0, "k0")?;
            let k1 = need(h.k1, "k1")?;
            if k0 + k1 != k {
                return Err(perr(separator_line, format!("k0 + k1 = {} but k = {k}", k0 + k1)));
            }
            Family::mapping(
                n,
                k0,
                k1,
                h.alpha.ok_or_else(|| perr(separator_line, "missing alpha"))?,
                h.beta.ok_or_else(|| perr(separator_line, "missing beta"))?,
                functions,
            )
        }
    }
    .map_err(|e| perr(separator_line, e.to_string()))?;
    Ok(fam
        .with_uniformity(h.uniformity.unwrap_or(Uniformity::None))
        .with_provenance(h.provenance))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Family {
        let mut prov = Provenance::new("test");
        prov.seed = Some(7);
        prov.valid = Some(true);
        prov.note("odd=key", "two\nlines \\ here");
        prov.coverage = vec![CoverageStep {
            scanned: 10,
            covered: 4,
            remaining: 2,
        }];
        Family::mapping(
            4,
            1,
            1,
            Fraction::new(1, 2).unwrap(),
            Fraction::one(),
            vec![
                Function::new(2, vec![0, 1, 1, 0]).unwrap(),
                Function::new(2, vec![1, 0, 0, 1]).unwrap(),
            ],
        )
        .unwrap()
        .with_provenance(prov)
    }

    #[test]
    fn round_trip() {
        let fam = sample();
        let text = serialize(&fam);
        assert!(text.contains("alpha=1/2\n"));
        assert_eq!(parse(&text).unwrap(), fam);
        assert_eq!(serialize(&parse(&text).unwrap()), text);
    }

    #[test]
    fn empty_family_round_trips() {
        let fam = Family::splitter(3, 1, 2, Vec::new()).unwrap();
        assert_eq!(parse(&serialize(&fam)).unwrap(), fam);
    }

    #[test]
    fn corrupt_digit_fails_checksum() {
        let text = serialize(&sample()).replacen("0 1 1 0", "0 1 0 0", 1);
        assert!(matches!(parse(&text), Err(Error::ChecksumMismatch { .. })));
    }

    #[test]
    fn truncation_is_a_parse_error() {
        let text = serialize(&sample());
        for cut in [10, text.len() / 2, text.len() - 3] {
            assert!(matches!(parse(&text[..cut]), Err(Error::Parse { .. })), "cut at {cut}");
        }
    }

    #[test]
    fn out_of_range_image_is_rejected() {
        let fam = Family::splitter(2, 1, 3, vec![Function::new(3, vec![0, 2]).unwrap()]).unwrap();
        let text = serialize(&fam).replace("0 2\n", "0 3\n");
        assert!(matches!(
            parse(&text),
            Err(Error::Parse { .. }) | Err(Error::ChecksumMismatch { .. })
        ));
    }
}
