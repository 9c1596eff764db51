//! The `pgfam` text format for hyperplane families.
//!
//! ```text
//! pgfam <k> <q> <sign:+|->
//! # comment
//! 0 0 0 1
//! 1 0 2 1
//! ```
//!
//! One member per line: k+1 whitespace-separated integers in 0..q, the
//! element encodings of the canonical covector. Lines starting with `#` and
//! blank lines are ignored. Files are written with members in canonical
//! sorted order, so identical families serialize byte-identically.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use pgfam_core::{Elem, Gf, Hyperplane, HyperplaneFamily, ProjSpace, Sign};

#[derive(Debug)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

pub fn parse(text: &str) -> Result<HyperplaneFamily, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_no, header) = lines.next().ok_or_else(|| err(0, "empty family file"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 4 || fields[0] != "pgfam" {
        return Err(err(header_no, "expected header `pgfam <k> <q> <sign>`"));
    }
    let k: usize = fields[1]
        .parse()
        .map_err(|_| err(header_no, format!("bad dimension `{}`", fields[1])))?;
    if k.is_multiple_of(2) || k < 3 {
        return Err(err(header_no, format!("dimension {k} must be odd and at least 3")));
    }
    let q: u64 = fields[2]
        .parse()
        .map_err(|_| err(header_no, format!("bad field order `{}`", fields[2])))?;
    if !pgfam_core::pg::enumerable(k, q.max(2)) {
        return Err(err(
            header_no,
            format!("PG({k},{q}) is beyond the supported enumeration size"),
        ));
    }
    let field = Gf::new(q).map_err(|e| err(header_no, e.to_string()))?;
    let sign = (fields[3].len() == 1)
        .then(|| Sign::from_char(fields[3].chars().next().unwrap()))
        .flatten()
        .ok_or_else(|| err(header_no, format!("bad sign `{}`, expected + or -", fields[3])))?;

    let space = ProjSpace::new(k, field);
    let mut members: Vec<Hyperplane> = Vec::new();
    for (line_no, line) in lines {
        let mut covector: Vec<Elem> = Vec::with_capacity(k + 1);
        for token in line.split_whitespace() {
            let value: u64 = token
                .parse()
                .map_err(|_| err(line_no, format!("bad element encoding `{token}`")))?;
            let elem = space
                .field()
                .elem(value)
                .map_err(|e| err(line_no, e.to_string()))?;
            covector.push(elem);
        }
        if covector.len() != k + 1 {
            return Err(err(
                line_no,
                format!("expected {} coordinates, got {}", k + 1, covector.len()),
            ));
        }
        let h = space
            .hyperplane_from(&covector)
            .map_err(|e| err(line_no, e.to_string()))?;
        if h.covector() != covector {
            return Err(err(line_no, "covector is not canonical"));
        }
        if members.contains(&h) {
            return Err(err(line_no, "duplicate member"));
        }
        members.push(h);
    }

    HyperplaneFamily::new(space, sign, members).map_err(|e| err(0, e.to_string()))
}

pub fn render(family: &HyperplaneFamily) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "pgfam {} {} {}\n",
        family.space().k(),
        family.q(),
        family.sign()
    ));
    for member in family.members() {
        let coords: Vec<String> = member.covector().iter().map(|c| c.to_string()).collect();
        out.push_str(&coords.join(" "));
        out.push('\n');
    }
    out
}

pub fn load(path: &Path) -> Result<HyperplaneFamily, String> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

/// Write-to-temp plus atomic rename: no partial files on error.
pub fn store(path: &Path, family: &HyperplaneFamily) -> Result<(), String> {
    let text = render(family);
    let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
    let write = || -> std::io::Result<()> {
        let mut file = fs::File::create(&tmp)?;
        file.write_all(text.as_bytes())?;
        file.sync_all()?;
        fs::rename(&tmp, path)
    };
    write().map_err(|e| {
        let _ = fs::remove_file(&tmp);
        format!("cannot write {}: {e}", path.display())
    })
}
