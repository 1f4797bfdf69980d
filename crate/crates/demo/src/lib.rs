//! Browser demo: draws the Hasse diagram of an algebra document, of its pair
//! algebra with the center part highlighted, and reports class membership
//! and the (CK) check.

use std::fmt::Write;

use wasm_bindgen::prelude::*;

use kalman_core::document::{parse_algebra, serialize_algebra};
use kalman_core::fixtures;
use kalman_core::kalman::{self, KalmanLevel};
use kalman_core::varieties::classify;
use kalman_core::{Elem, Error, FiniteAlgebra};

const WIDTH: f64 = 360.0;
const ROW: f64 = 70.0;
const MARGIN: f64 = 30.0;

/// Pairs `(x, y)` with `x` covered by `y`.
pub fn covers(alg: &FiniteAlgebra) -> Vec<(Elem, Elem)> {
    let n = alg.size();
    let mut out = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if x != y
                && alg.leq(x, y)
                && !(0..n).any(|z| z != x && z != y && alg.leq(x, z) && alg.leq(z, y))
            {
                out.push((x, y));
            }
        }
    }
    out
}

/// Row of each element: length of the longest chain below it.
pub fn ranks(alg: &FiniteAlgebra) -> Vec<usize> {
    let n = alg.size();
    let mut order: Vec<Elem> = (0..n).collect();
    order.sort_by_key(|&x| alg.order.down_size(x));
    let mut rank = vec![0; n];
    for &y in &order {
        rank[y] = (0..n)
            .filter(|&x| x != y && alg.leq(x, y))
            .map(|x| rank[x] + 1)
            .max()
            .unwrap_or(0);
    }
    rank
}

/// Positions in a box of width [`WIDTH`]; rows are ordered by the mean
/// position of the lower covers to keep edges short.
pub fn layout(alg: &FiniteAlgebra) -> Vec<(f64, f64)> {
    let n = alg.size();
    let rank = ranks(alg);
    let height = rank.iter().copied().max().unwrap_or(0);
    let edges = covers(alg);
    let mut pos = vec![(0.0, 0.0); n];
    for r in 0..=height {
        let mut row: Vec<Elem> = (0..n).filter(|&x| rank[x] == r).collect();
        let key = |x: Elem| {
            let below: Vec<f64> = edges
                .iter()
                .filter(|&&(_, y)| y == x)
                .map(|&(lo, _)| pos[lo].0)
                .collect();
            if below.is_empty() {
                x as f64
            } else {
                below.iter().sum::<f64>() / below.len() as f64
            }
        };
        let keys: Vec<f64> = (0..n).map(|x| if rank[x] == r { key(x) } else { 0.0 }).collect();
        row.sort_by(|&a, &b| keys[a].total_cmp(&keys[b]).then(a.cmp(&b)));
        let step = (WIDTH - 2.0 * MARGIN) / row.len() as f64;
        for (i, &x) in row.iter().enumerate() {
            let px = MARGIN + step * (i as f64 + 0.5);
            let py = MARGIN + ROW * (height - r) as f64;
            pos[x] = (px, py);
        }
    }
    pos
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// An SVG drawing; elements for which `highlight` is true are filled.
pub fn hasse_svg(alg: &FiniteAlgebra, highlight: impl Fn(Elem) -> bool) -> String {
    let pos = layout(alg);
    let height = pos.iter().map(|p| p.1).fold(0.0, f64::max) + MARGIN;
    let mut svg = String::new();
    let _ = write!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}">"#
    );
    for (x, y) in covers(alg) {
        let (a, b) = (pos[x], pos[y]);
        let _ = write!(
            svg,
            r##"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="#555"/>"##,
            a.0, a.1, b.0, b.1
        );
    }
    for (x, &(px, py)) in pos.iter().enumerate() {
        let fill = if highlight(x) { "#f0b429" } else { "#fff" };
        let _ = write!(
            svg,
            r##"<circle cx="{px:.1}" cy="{py:.1}" r="6" fill="{fill}" stroke="#222"/><text x="{:.1}" y="{:.1}" font-size="12" font-family="monospace">{}</text>"##,
            px + 9.0,
            py + 4.0,
            escape(&alg.name(x))
        );
    }
    svg.push_str("</svg>");
    svg
}

fn js(e: Error) -> JsValue {
    JsValue::from_str(&e.to_string())
}

/// A starting document: `three-chain`, `boolean4`, `two-chain` or `kleene`.
#[wasm_bindgen]
pub fn preset(name: &str) -> Result<String, JsValue> {
    let alg = match name {
        "three-chain" => fixtures::three_chain_hemi(),
        "boolean4" => fixtures::boolean4_hilbert(),
        "two-chain" => fixtures::two_chain_semi_heyting(),
        "kleene" => fixtures::kleene_chain3(),
        _ => return Err(JsValue::from_str(&format!("no preset {name:?}"))),
    };
    Ok(serialize_algebra(&alg))
}

/// Hasse diagram of the document; the center, if any, is highlighted.
#[wasm_bindgen]
pub fn draw(doc: &str) -> Result<String, JsValue> {
    let alg = parse_algebra(doc).map_err(js)?;
    Ok(hasse_svg(&alg, |x| alg.center == Some(x)))
}

/// The pair algebra at `level` as a document.
#[wasm_bindgen]
pub fn pair_algebra(doc: &str, level: &str) -> Result<String, JsValue> {
    let alg = parse_algebra(doc).map_err(js)?;
    let level: KalmanLevel = level.parse().map_err(js)?;
    let k = kalman::kalman(&alg, level).map_err(js)?;
    Ok(serialize_algebra(&k.algebra))
}

/// Hasse diagram of the pair algebra with the elements above the center
/// highlighted.
#[wasm_bindgen]
pub fn draw_pair_algebra(doc: &str, level: &str) -> Result<String, JsValue> {
    let t = parse_algebra(&pair_algebra(doc, level)?).map_err(js)?;
    let c = t.center.expect("pair algebras have a center");
    Ok(hasse_svg(&t, |x| t.leq(c, x)))
}

/// One line per class the document belongs to, then the (CK) verdict when
/// it applies.
#[wasm_bindgen]
pub fn report(doc: &str) -> Result<String, JsValue> {
    let alg = parse_algebra(doc).map_err(js)?;
    let labels: Vec<String> = classify(&alg).map_err(js)?.iter().map(|l| l.to_string()).collect();
    let mut out = format!("classes: {}\n", if labels.is_empty() { "none".into() } else { labels.join(", ") });
    if let Ok(ck) = kalman::check_ck(&alg) {
        match ck.witness {
            None => out.push_str("(CK) holds\n"),
            Some((x, y)) => {
                let _ = writeln!(out, "(CK) fails at x={}, y={}", alg.name(x), alg.name(y));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boolean4_diagram() {
        let b4 = fixtures::boolean4();
        assert_eq!(covers(&b4).len(), 4);
        assert_eq!(ranks(&b4), vec![0, 1, 1, 2]);
        let svg = hasse_svg(&b4, |_| false);
        assert_eq!(svg.matches("<line").count(), 4);
        assert_eq!(svg.matches("<circle").count(), 4);
        let pos = layout(&b4);
        assert!(pos[3].1 < pos[1].1 && pos[1].1 < pos[0].1);
        assert!(pos[1].0 != pos[2].0);
    }

    #[test]
    fn pair_algebra_drawing() {
        let doc = preset("three-chain").unwrap();
        let svg = draw_pair_algebra(&doc, "his").unwrap();
        assert_eq!(svg.matches("<circle").count(), 5);
        assert_eq!(svg.matches("#f0b429").count(), 3);
        assert!(svg.contains("(0,a)"));
    }

    #[test]
    fn report_lines() {
        let text = report(&preset("kleene").unwrap()).unwrap();
        assert!(text.contains("CenteredKleene"));
        assert!(text.ends_with("(CK) holds\n"));
        let text = report(&preset("two-chain").unwrap()).unwrap();
        assert!(text.contains("SH") && !text.contains("HA,"));
    }
}
