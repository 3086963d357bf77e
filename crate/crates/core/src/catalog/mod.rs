//! Group catalog in a line-oriented text format, plus certificates and an
//! on-disk cache.
//!
//! ```text
//! # comment
//! group ASL(3,2)
//! alias AGL(3,2)
//! degree 8
//! pe 2 3
//! order 1344
//! gen (1,2)(3,4)(5,6)(7,8)
//! gen (3,4)(7,8)
//! label 2B (5,6)(7,8)
//! socle (1,2)(3,4)(5,6)(7,8)
//! end
//! ```
//!
//! `label` pins the class containing the given element to a name; `socle`
//! lines are optional generators of the translation subgroup.

pub mod cache;
pub mod certificate;

use std::path::Path;

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Perm;

const BUILTIN: &str = include_str!("../../data/catalog.txt");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub aliases: Vec<String>,
    pub degree: usize,
    pub generators: Vec<Perm>,
    pub order: u128,
    /// `(p, e)` with `degree = p^e`.
    pub pe: Option<(u64, u32)>,
    pub labels: Vec<(String, Perm)>,
    pub socle: Vec<Perm>,
}

impl CatalogEntry {
    /// The group with its pinned labels; the order is not rechecked.
    pub fn group(&self) -> Result<PermGroup> {
        Ok(PermGroup::new(self.degree, self.generators.clone())?.with_label_pins(self.labels.clone()))
    }

    pub fn matches(&self, name: &str) -> bool {
        self.name == name || self.aliases.iter().any(|a| a == name)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("group {}\n", self.name);
        for a in &self.aliases {
            s += &format!("alias {a}\n");
        }
        s += &format!("degree {}\n", self.degree);
        if let Some((p, e)) = self.pe {
            s += &format!("pe {p} {e}\n");
        }
        s += &format!("order {}\n", self.order);
        for g in &self.generators {
            s += &format!("gen {g}\n");
        }
        for (l, x) in &self.labels {
            s += &format!("label {l} {x}\n");
        }
        for g in &self.socle {
            s += &format!("socle {g}\n");
        }
        s += "end\n";
        s
    }
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Parses one permutation in cycle notation, e.g. `"(1,2)(3,4)"`.
pub fn parse_group(degree: usize, text: &str) -> Result<PermGroup> {
    let gens = text
        .split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|s| Perm::parse(degree, s.trim()))
        .collect::<Result<Vec<_>>>()?;
    PermGroup::new(degree, gens)
}

/// Parses catalog text without checking group orders.
pub fn parse_catalog(text: &str) -> Result<Vec<CatalogEntry>> {
    let mut out = Vec::new();
    let mut cur: Option<(usize, CatalogEntry)> = None;
    let mut pending: Vec<(usize, usize, &str, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim_end();
        let body = line.trim_start();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let indent = line.len() - body.len();
        let (key, rest) = match body.split_once(char::is_whitespace) {
            Some((k, r)) => (k, r.trim()),
            None => (body, ""),
        };
        let value_col = indent + key.len() + 2;
        match key {
            "group" => {
                if cur.is_some() {
                    return Err(parse_err(line_no, indent + 1, "missing `end` before `group`"));
                }
                if rest.is_empty() {
                    return Err(parse_err(line_no, value_col, "group needs a name"));
                }
                cur = Some((
                    line_no,
                    CatalogEntry {
                        name: rest.to_string(),
                        aliases: Vec::new(),
                        degree: 0,
                        generators: Vec::new(),
                        order: 0,
                        pe: None,
                        labels: Vec::new(),
                        socle: Vec::new(),
                    },
                ));
                pending.clear();
            }
            "end" => {
                let Some((start, mut e)) = cur.take() else {
                    return Err(parse_err(line_no, indent + 1, "`end` outside a group block"));
                };
                if e.degree == 0 {
                    return Err(parse_err(start, 1, format!("{}: missing degree", e.name)));
                }
                if e.order == 0 {
                    return Err(parse_err(start, 1, format!("{}: missing order", e.name)));
                }
                for (ln, col, kind, text) in pending.drain(..) {
                    let perm = |t: &str| {
                        Perm::parse(e.degree, t).map_err(|err| parse_err(ln, col, err.to_string()))
                    };
                    match kind {
                        "gen" => e.generators.push(perm(&text)?),
                        "socle" => e.socle.push(perm(&text)?),
                        _ => {
                            let (label, elem) = text
                                .split_once(char::is_whitespace)
                                .ok_or_else(|| parse_err(ln, col, "label needs a name and an element"))?;
                            e.labels.push((label.to_string(), perm(elem.trim())?));
                        }
                    }
                }
                if e.generators.is_empty() {
                    return Err(parse_err(start, 1, format!("{}: no generators", e.name)));
                }
                out.push(e);
            }
            _ => {
                let Some((_, e)) = cur.as_mut() else {
                    return Err(parse_err(line_no, indent + 1, format!("`{key}` outside a group block")));
                };
                let num = |s: &str, col: usize| -> Result<u128> {
                    s.parse::<u128>()
                        .map_err(|_| parse_err(line_no, col, format!("expected a number, got {s:?}")))
                };
                match key {
                    "alias" => e.aliases.push(rest.to_string()),
                    "degree" => {
                        let d = num(rest, value_col)? as usize;
                        if d == 0 || d > 256 {
                            return Err(parse_err(line_no, value_col, "degree must be in 1..=256"));
                        }
                        e.degree = d;
                    }
                    "order" => e.order = num(rest, value_col)?,
                    "pe" => {
                        let parts: Vec<&str> = rest.split_whitespace().collect();
                        if parts.len() != 2 {
                            return Err(parse_err(line_no, value_col, "pe needs two numbers"));
                        }
                        e.pe = Some((num(parts[0], value_col)? as u64, num(parts[1], value_col)? as u32));
                    }
                    "gen" | "socle" | "label" => {
                        let kind = match key {
                            "gen" => "gen",
                            "socle" => "socle",
                            _ => "label",
                        };
                        pending.push((line_no, value_col, kind, rest.to_string()));
                    }
                    _ => return Err(parse_err(line_no, indent + 1, format!("unknown key `{key}`"))),
                }
            }
        }
    }
    if let Some((start, e)) = cur {
        return Err(parse_err(start, 1, format!("{}: missing `end`", e.name)));
    }
    Ok(out)
}

/// Parses and validates: every entry's generators must give its order, and
/// `p^e` must equal the degree.
pub fn load_catalog_str(text: &str) -> Result<Vec<CatalogEntry>> {
    let entries = parse_catalog(text)?;
    for e in &entries {
        if let Some((p, ex)) = e.pe {
            if (p as u128).pow(ex) != e.degree as u128 {
                return Err(Error::Catalog(format!("{}: {p}^{ex} != degree {}", e.name, e.degree)));
            }
        }
        let g = PermGroup::new(e.degree, e.generators.clone())?;
        if g.order() != e.order {
            return Err(Error::OrderMismatch {
                name: e.name.clone(),
                expected: e.order,
                actual: g.order(),
            });
        }
        for x in &e.socle {
            if !g.contains(x) {
                return Err(Error::Catalog(format!("{}: socle generator outside the group", e.name)));
            }
        }
        for (l, x) in &e.labels {
            if !g.contains(x) {
                return Err(Error::Catalog(format!("{}: pinned {l} is outside the group", e.name)));
            }
        }
    }
    Ok(entries)
}

pub fn load_catalog(path: &Path) -> Result<Vec<CatalogEntry>> {
    load_catalog_str(&std::fs::read_to_string(path)?)
}

/// The catalog shipped with the library.
pub fn builtin() -> Result<Vec<CatalogEntry>> {
    load_catalog_str(BUILTIN)
}

/// Unvalidated built-in entries, for callers that only need names.
pub fn builtin_unchecked() -> Vec<CatalogEntry> {
    parse_catalog(BUILTIN).expect("built-in catalog parses")
}

pub fn find<'a>(entries: &'a [CatalogEntry], name: &str) -> Option<&'a CatalogEntry> {
    entries.iter().find(|e| e.matches(name))
}

#[cfg(test)]
mod tests {
    use super::*;

    const S4: &str = "
# the symmetric group on four points
group S4
alias 2^2:S3
degree 4
pe 2 2
order 24
gen (1,2)
gen (1,2,3,4)
label 2B (1,2)
socle (1,2)(3,4)
socle (1,3)(2,4)
end
";

    #[test]
    fn round_trip() {
        let e = load_catalog_str(S4).unwrap();
        assert_eq!(e.len(), 1);
        assert!(e[0].matches("2^2:S3"));
        let again = load_catalog_str(&e[0].to_text()).unwrap();
        assert_eq!(again, e);
        let g = e[0].group().unwrap();
        let t = g.conjugacy_classes().unwrap();
        assert_eq!(t.class(t.by_label("2B").unwrap()).representative.cycle_type(), vec![1, 1, 2]);
    }

    #[test]
    fn wrong_order_is_rejected() {
        let bad = S4.replace("order 24", "order 12");
        match load_catalog_str(&bad) {
            Err(Error::OrderMismatch { name, expected: 12, actual: 24 }) => assert_eq!(name, "S4"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_positions() {
        let bad = S4.replace("gen (1,2)\n", "gen (1,9)\n");
        match parse_catalog(&bad) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (8, 5)),
            other => panic!("{other:?}"),
        }
        match parse_catalog("degree 4\n") {
            Err(Error::Parse { line: 1, column: 1, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn double_transposition() {
        let g = parse_group(4, "(1,2)(3,4)").unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.generators()[0].cycle_type(), vec![2, 2]);
    }
}
