//! The algebra file format.
//!
//! A document is a JSON object with the keys `size`, `names` (optional),
//! `leq` (a 0/1 matrix), `ops` (optional: `meet`, `join`, `arrow` as index
//! matrices and `neg` as an index array) and `consts` (optional: `bottom`,
//! `top`, `center` as indices). Unknown keys are rejected.
//!
//! ```text
//! {
//!   "size": 2,
//!   "leq": [
//!     [1, 1],
//!     [0, 1]
//!   ]
//! }
//! ```

use serde::Deserialize;

use crate::congr::Congruence;
use crate::error::{Error, Result};
use crate::finord::{Elem, FiniteAlgebra, Order, Table};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    size: usize,
    names: Option<Vec<String>>,
    leq: Vec<Vec<u8>>,
    ops: Option<Ops>,
    consts: Option<Consts>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Ops {
    meet: Option<Vec<Vec<Elem>>>,
    join: Option<Vec<Vec<Elem>>>,
    arrow: Option<Vec<Vec<Elem>>>,
    neg: Option<Vec<Elem>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Consts {
    bottom: Option<Elem>,
    top: Option<Elem>,
    center: Option<Elem>,
}

fn table(name: &str, rows: Option<Vec<Vec<Elem>>>, n: usize) -> Result<Option<Table>> {
    let Some(rows) = rows else {
        return Ok(None);
    };
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Input(format!("{name} must be a {n}×{n} matrix")));
    }
    Table::from_rows(&rows)
        .map(Some)
        .map_err(|e| Error::Input(format!("{name}: {e}")))
}

/// Parses and validates a document.
pub fn parse_algebra(text: &str) -> Result<FiniteAlgebra> {
    let doc: Document = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let n = doc.size;
    if doc.leq.len() != n || doc.leq.iter().any(|r| r.len() != n) {
        return Err(Error::Input(format!("leq must be a {n}×{n} matrix")));
    }
    let mut matrix = vec![vec![false; n]; n];
    for (i, row) in doc.leq.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            matrix[i][j] = match v {
                0 => false,
                1 => true,
                _ => {
                    return Err(Error::Input(format!(
                        "leq[{i}][{j}] is {v}; entries must be 0 or 1"
                    )))
                }
            };
        }
    }
    let mut alg = FiniteAlgebra::from_order(Order::from_matrix(&matrix)?);
    alg.names = doc.names;
    if let Some(ops) = doc.ops {
        alg.meet = table("meet", ops.meet, n)?;
        alg.join = table("join", ops.join, n)?;
        alg.arrow = table("arrow", ops.arrow, n)?;
        if let Some(neg) = &ops.neg {
            if neg.len() != n {
                return Err(Error::Input(format!("neg must have {n} entries")));
            }
        }
        alg.involution = ops.neg;
    }
    if let Some(c) = doc.consts {
        alg.bottom = c.bottom;
        alg.top = c.top;
        alg.center = c.center;
    }
    alg.validate()?;
    Ok(alg)
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

fn list<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    let parts: Vec<String> = items.into_iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn matrix_block(rows: Vec<String>, indent: &str) -> String {
    let inner = format!("{indent}  ");
    let body: Vec<String> = rows.into_iter().map(|r| format!("{inner}{r}")).collect();
    format!("[\n{}\n{indent}]", body.join(",\n"))
}

fn table_block(t: &Table, indent: &str) -> String {
    matrix_block(t.rows().into_iter().map(list).collect(), indent)
}

/// The canonical text of a document: fixed key order, one matrix row per line.
pub fn serialize_algebra(alg: &FiniteAlgebra) -> String {
    let n = alg.size();
    let mut fields = vec![format!("  \"size\": {n}")];
    if let Some(names) = &alg.names {
        fields.push(format!(
            "  \"names\": {}",
            list(names.iter().map(|s| json_str(s)))
        ));
    }
    let leq_rows = (0..n)
        .map(|i| list((0..n).map(|j| u8::from(alg.leq(i, j)))))
        .collect();
    fields.push(format!("  \"leq\": {}", matrix_block(leq_rows, "  ")));
    let mut ops = Vec::new();
    for (name, t) in [("meet", &alg.meet), ("join", &alg.join), ("arrow", &alg.arrow)] {
        if let Some(t) = t {
            ops.push(format!("    \"{name}\": {}", table_block(t, "    ")));
        }
    }
    if let Some(neg) = &alg.involution {
        ops.push(format!("    \"neg\": {}", list(neg)));
    }
    if !ops.is_empty() {
        fields.push(format!("  \"ops\": {{\n{}\n  }}", ops.join(",\n")));
    }
    let consts: Vec<String> = [("bottom", alg.bottom), ("top", alg.top), ("center", alg.center)]
        .into_iter()
        .filter_map(|(k, v)| v.map(|v| format!("\"{k}\": {v}")))
        .collect();
    if !consts.is_empty() {
        fields.push(format!("  \"consts\": {{{}}}", consts.join(", ")));
    }
    format!("{{\n{}\n}}\n", fields.join(",\n"))
}

/// Element by name, falling back to a decimal index.
pub fn resolve_element(alg: &FiniteAlgebra, token: &str) -> Result<Elem> {
    if let Some(i) = alg
        .names
        .as_ref()
        .and_then(|ns| ns.iter().position(|n| n == token))
    {
        return Ok(i);
    }
    match token.parse::<Elem>() {
        Ok(i) if i < alg.size() => Ok(i),
        _ => Err(Error::Input(format!("no element {token:?}"))),
    }
}

/// A partition written as blocks separated by `|` and elements separated by
/// whitespace, e.g. `0 1 | 2 | 3`. Elements not mentioned form singletons.
pub fn parse_partition(alg: &FiniteAlgebra, spec: &str) -> Result<Congruence> {
    let mut blocks = Vec::new();
    let mut seen = vec![false; alg.size()];
    for part in spec.split('|') {
        let block = part
            .split_whitespace()
            .map(|t| resolve_element(alg, t))
            .collect::<Result<Vec<_>>>()?;
        for &x in &block {
            seen[x] = true;
        }
        if !block.is_empty() {
            blocks.push(block);
        }
    }
    blocks.extend((0..alg.size()).filter(|&x| !seen[x]).map(|x| vec![x]));
    Congruence::from_blocks(alg.size(), &blocks)
}

/// A partition in the syntax read by [`parse_partition`], using names.
pub fn format_partition(alg: &FiniteAlgebra, theta: &Congruence) -> String {
    let blocks: Vec<String> = theta
        .blocks()
        .iter()
        .map(|b| {
            let names: Vec<String> = b.iter().map(|&x| alg.name(x)).collect();
            names.join(" ")
        })
        .collect();
    blocks.join(" | ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::kalman::{kalman, KalmanLevel};

    #[test]
    fn minimal_document() {
        let alg = parse_algebra(r#"{"size": 1, "leq": [[1]]}"#).unwrap();
        assert_eq!(alg.size(), 1);
        assert!(alg.meet.is_none());
    }

    #[test]
    fn round_trips_are_byte_stable() {
        for alg in [
            chain(1),
            chain(4),
            boolean4(),
            diamond_m3(),
            pentagon_n5(),
            antichain_with_bottom(2),
            three_chain_hemi(),
            boolean4_hilbert(),
            two_chain_semi_heyting(),
            kleene_chain3(),
        ] {
            let text = serialize_algebra(&alg);
            let back = parse_algebra(&text).unwrap();
            assert_eq!(back, alg);
            assert_eq!(serialize_algebra(&back), text);
        }
    }

    #[test]
    fn pair_algebra_document() {
        let k = kalman(&boolean4(), KalmanLevel::Bdl).unwrap();
        let text = serialize_algebra(&k.algebra);
        assert!(text.starts_with("{\n  \"size\": 9,"));
        assert!(text.contains("\"(a,b)\""));
        assert_eq!(parse_algebra(&text).unwrap(), k.algebra);
    }

    #[test]
    fn three_chain_document_classifies() {
        let text = r#"{
  "size": 3,
  "names": ["0", "a", "1"],
  "leq": [[1, 1, 1], [0, 1, 1], [0, 0, 1]],
  "ops": {
    "meet": [[0, 0, 0], [0, 1, 1], [0, 1, 2]],
    "join": [[0, 1, 2], [1, 1, 2], [2, 2, 2]],
    "arrow": [[2, 1, 2], [0, 2, 2], [0, 0, 2]]
  },
  "consts": {"bottom": 0, "top": 2}
}"#;
        let alg = parse_algebra(text).unwrap();
        let labels = crate::varieties::classify(&alg).unwrap();
        assert!(labels.contains(&crate::VarietyLabel::HBDL));
        assert!(!labels.contains(&crate::VarietyLabel::SH));
        assert!(!labels.contains(&crate::VarietyLabel::Hil0));
    }

    #[test]
    fn wrong_meet_names_the_cell() {
        let text = r#"{"size": 2, "leq": [[1, 1], [0, 1]], "ops": {"meet": [[0, 0], [0, 0]]}}"#;
        match parse_algebra(text) {
            Err(Error::Consistency(msg)) => assert!(msg.contains("meet[1][1]"), "{msg}"),
            other => panic!("expected a consistency error, got {other:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_positions() {
        let text = "{\n  \"size\": 1,\n  \"leq\": [[1]],\n  \"colour\": 3\n}";
        match parse_algebra(text) {
            Err(Error::Parse { line, column, .. }) => {
                assert_eq!(line, 4);
                assert!(column > 0);
            }
            other => panic!("expected a parse error, got {other:?}"),
        }
        assert!(matches!(
            parse_algebra(r#"{"size": 2, "leq": [[1, 2], [0, 1]]}"#),
            Err(Error::Input(_))
        ));
        assert!(matches!(
            parse_algebra(r#"{"size": 2, "leq": [[1, 1]]}"#),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn names_default_to_indices() {
        let text = serialize_algebra(&chain(2));
        assert!(!text.contains("names"));
        assert_eq!(parse_algebra(&text).unwrap().name(1), "1");
    }

    #[test]
    fn partitions() {
        let alg = boolean4();
        let theta = parse_partition(&alg, "0 a | b 1").unwrap();
        assert!(theta.related(0, 1) && theta.related(2, 3) && !theta.related(0, 2));
        assert_eq!(format_partition(&alg, &theta), "0 a | b 1");
        assert!(parse_partition(&alg, "").unwrap().is_identity());
        assert!(parse_partition(&alg, "0 x").is_err());
        assert!(parse_partition(&alg, "0 1 | 1").is_err());
    }
}
