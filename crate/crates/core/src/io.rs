//! Text formats for drawings and rooted trees.
//!
//! A drawing file is
//!
//! ```text
//! vertices N
//! 0 x_num/x_den y_num/y_den [role]
//! ...
//! edges M
//! u v
//! ...
//! ```
//!
//! with ids `0..N` in order and every rational in lowest terms with a positive
//! denominator. A tree file is `root R` followed by one `child parent` line per edge.
//! Blank lines and lines starting with `#` are skipped.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::drawing::{Drawing, RootedTree};
use crate::error::{Error, Result};
use crate::geom::{Point, Rational};

pub fn format_rational(v: &Rational) -> String {
    format!("{}/{}", v.numer(), v.denom())
}

/// Parses `num/den` in lowest terms, or a bare integer.
pub fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| format!("bad numerator in {s:?}"))?;
    let den: BigInt = den.parse().map_err(|_| format!("bad denominator in {s:?}"))?;
    if !den.is_positive() {
        return Err(format!("denominator of {s:?} is not positive"));
    }
    let v = Rational::new(num.clone(), den.clone());
    if *v.numer() != num || *v.denom() != den {
        return Err(format!("{s:?} is not in lowest terms"));
    }
    Ok(v)
}

fn is_index(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

fn is_literal(sign: &str, var: &str) -> bool {
    (sign == "x" || sign == "nx") && is_index(var)
}

/// Whether `tag` is one of the role tags written by the constructions.
pub fn is_role_tag(tag: &str) -> bool {
    let p: Vec<&str> = tag.split(':').collect();
    match p.as_slice() {
        ["root" | "s" | "t"] => true,
        ["p" | "pprime", sign, var] => is_literal(sign, var),
        ["peak" | "terminal", i] => is_index(i),
        ["lit" | "anchor", sign, var, "c", i] => is_literal(sign, var) && is_index(i),
        ["qpt" | "sseg", i, k, sign, var] => is_index(i) && is_index(k) && is_literal(sign, var),
        _ => false,
    }
}

pub fn write_drawing(d: &Drawing) -> String {
    let mut out = String::new();
    writeln!(out, "vertices {}", d.len()).unwrap();
    for (id, p) in d.vertices().iter().enumerate() {
        write!(out, "{id} {} {}", format_rational(&p.x), format_rational(&p.y)).unwrap();
        if let Some(role) = d.label(id) {
            write!(out, " {role}").unwrap();
        }
        out.push('\n');
    }
    writeln!(out, "edges {}", d.edges().len()).unwrap();
    for (u, v) in d.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn header(lines: &mut dyn Iterator<Item = (usize, &str)>, keyword: &str, last: usize) -> Result<(usize, usize)> {
    let (no, line) = lines
        .next()
        .ok_or_else(|| parse_err(last, format!("missing `{keyword}` header")))?;
    let count = line
        .strip_prefix(keyword)
        .and_then(|rest| rest.trim().parse::<usize>().ok())
        .ok_or_else(|| parse_err(no, format!("expected `{keyword} <count>`")))?;
    Ok((no, count))
}

fn parse_id(no: usize, s: &str) -> Result<usize> {
    s.parse().map_err(|_| parse_err(no, format!("bad vertex id {s:?}")))
}

pub fn read_drawing(text: &str) -> Result<Drawing> {
    let mut lines = content_lines(text);
    let (mut last, n) = header(&mut lines, "vertices", 1)?;
    let mut d = Drawing::new();
    for id in 0..n {
        let (no, line) = lines
            .next()
            .ok_or_else(|| parse_err(last, format!("expected {n} vertices, found {id}")))?;
        last = no;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if !(3..=4).contains(&fields.len()) {
            return Err(parse_err(no, "expected `id x y [role]`"));
        }
        if parse_id(no, fields[0])? != id {
            return Err(parse_err(no, format!("vertex ids must run 0..{n} in order")));
        }
        let x = parse_rational(fields[1]).map_err(|m| parse_err(no, m))?;
        let y = parse_rational(fields[2]).map_err(|m| parse_err(no, m))?;
        let role = fields.get(3).map(|r| r.to_string());
        if let Some(r) = &role {
            if !is_role_tag(r) {
                return Err(parse_err(no, format!("unknown role tag {r:?}")));
            }
        }
        d.add_vertex(Point::new(x, y), role)
            .map_err(|e| parse_err(no, e.to_string()))?;
    }
    let (no, m) = header(&mut lines, "edges", last)?;
    last = no;
    for k in 0..m {
        let (no, line) = lines
            .next()
            .ok_or_else(|| parse_err(last, format!("expected {m} edges, found {k}")))?;
        last = no;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(parse_err(no, "expected `u v`"));
        }
        let (u, v) = (parse_id(no, fields[0])?, parse_id(no, fields[1])?);
        d.add_edge(u, v).map_err(|e| parse_err(no, e.to_string()))?;
    }
    if let Some((no, _)) = lines.next() {
        return Err(parse_err(no, "trailing content after the edge list"));
    }
    Ok(d)
}

pub fn write_tree(tree: &RootedTree) -> String {
    let mut out = format!("root {}\n", tree.root());
    for (child, parent) in tree.parents() {
        writeln!(out, "{child} {parent}").unwrap();
    }
    out
}

pub fn read_tree(text: &str) -> Result<RootedTree> {
    let mut lines = content_lines(text);
    let (no, line) = lines.next().ok_or_else(|| parse_err(1, "missing `root` line"))?;
    let root = line
        .strip_prefix("root")
        .and_then(|r| r.trim().parse::<usize>().ok())
        .ok_or_else(|| parse_err(no, "expected `root <id>`"))?;
    let mut parents = BTreeMap::new();
    for (no, line) in lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(parse_err(no, "expected `child parent`"));
        }
        let child = parse_id(no, fields[0])?;
        if parents.insert(child, parse_id(no, fields[1])?).is_some() {
            return Err(parse_err(no, format!("vertex {child} has two parents")));
        }
    }
    RootedTree::from_parents(root, parents)
}

/// Parses a comma- or space-separated list of vertex ids.
pub fn parse_id_list(s: &str) -> Result<Vec<usize>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| parse_id(1, t))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::CnfInstance;
    use crate::gadget::{build_gadget, GadgetOptions};
    use crate::geom::rat;
    use crate::reduction::build_gamma;

    #[test]
    fn rationals_are_num_over_den() {
        assert_eq!(format_rational(&rat(-3, 6)), "-1/2");
        assert_eq!(format_rational(&rat(4, 1)), "4/1");
        assert_eq!(parse_rational("-1/2").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("7").unwrap(), rat(7, 1));
        assert!(parse_rational("2/4").is_err());
        assert!(parse_rational("1/-2").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn role_grammar() {
        for tag in ["root", "s", "t", "p:x:1", "pprime:nx:2", "peak:3", "lit:x:2:c:1", "anchor:nx:1:c:4", "terminal:0", "qpt:1:2:x:3", "sseg:0:0:nx:1"] {
            assert!(is_role_tag(tag), "{tag}");
        }
        for tag in ["", "p:y:1", "peak", "lit:x:1:d:2", "qpt:1:x:3", "terminal:-1"] {
            assert!(!is_role_tag(tag), "{tag}");
        }
    }

    #[test]
    fn constructions_round_trip_byte_identical() {
        let inst = CnfInstance::from_ints(2, &[&[1, 2], &[-1]]).unwrap();
        let text = write_drawing(&build_gamma(&inst).unwrap().drawing);
        assert_eq!(write_drawing(&read_drawing(&text).unwrap()), text);
        let g = build_gadget(&inst, GadgetOptions::default()).unwrap();
        let text = write_drawing(&g.drawing);
        assert_eq!(write_drawing(&read_drawing(&text).unwrap()), text);
    }

    #[test]
    fn malformed_files_are_rejected() {
        let bad = [
            "vertices 1\n0 0/1 0/1\n",
            "vertices 2\n0 0/1 0/1\n0 1/1 0/1\nedges 0\n",
            "vertices 2\n0 0/1 0/1\n1 0/1 0/1\nedges 0\n",
            "vertices 2\n0 0/1 0/1\n1 1/1 0/1 wizard\nedges 0\n",
            "vertices 2\n0 0/1 0/1\n1 1/1 0/1\nedges 1\n0 2\n",
            "vertices 1\n0 0/1 0/1\nedges 0\nextra\n",
        ];
        for text in bad {
            assert!(matches!(read_drawing(text), Err(Error::Parse { .. })), "{text:?}");
        }
        let ok = "# a comment\nvertices 2\n0 0/1 0/1 s\n\n1 1/1 1/2 t\nedges 1\n0 1\n";
        let d = read_drawing(ok).unwrap();
        assert_eq!(d.label(1), Some("t"));
        assert_eq!(*d.vertex(1), Point::new(rat(1, 1), rat(1, 2)));
    }

    #[test]
    fn trees_round_trip() {
        let text = "root 0\n1 0\n2 1\n";
        assert_eq!(write_tree(&read_tree(text).unwrap()), text);
        assert!(read_tree("root 0\n1 0\n1 2\n").is_err());
        assert_eq!(parse_id_list("0, 3 5").unwrap(), vec![0, 3, 5]);
    }
}
