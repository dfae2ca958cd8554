//! CSV tables and SVG figures. Output is deterministic for identical input.

use std::fmt::Write as _;

use crate::address_space::{DiscontinuitySet, PrefixSet};
use crate::projection::coding_pi;
use crate::real::Real;
use crate::symbolic::Word;

fn csv_string(write: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    write(&mut w).expect("writing to memory");
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv is utf-8")
}

/// `level,index,point,address`, one row per interval `(points[i], points[i+1])`
/// with `point` its left end.
pub fn discontinuities_csv<T: Real>(set: &DiscontinuitySet<T>) -> String {
    csv_string(|w| {
        w.write_record(["level", "index", "point", "address"])?;
        for (i, address) in set.addresses.iter().enumerate() {
            w.write_record([
                set.level.to_string(),
                i.to_string(),
                set.points[i].display(),
                address.to_string(),
            ])?;
        }
        Ok(())
    })
}

/// `x,h` rows.
pub fn graph_csv(points: &[(f64, f64)]) -> String {
    csv_string(|w| {
        w.write_record(["x", "h"])?;
        for (x, y) in points {
            w.write_record([format!("{x:.17e}"), format!("{y:.17e}")])?;
        }
        Ok(())
    })
}

/// `word,lo,hi` rows of the dyadic cylinders `π(w)`.
pub fn cylinders_csv<'a>(words: impl IntoIterator<Item = &'a Word>) -> String {
    csv_string(|w| {
        w.write_record(["word", "lo", "hi"])?;
        for word in words {
            let c = coding_pi(word);
            w.write_record([word.to_string(), c.lo().to_string(), c.hi().to_string()])?;
        }
        Ok(())
    })
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 200.0;
const MARGIN: f64 = 20.0;

fn header(out: &mut String, height: f64, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = WIDTH + 2.0 * MARGIN,
        h = height + 2.0 * MARGIN,
    );
    let _ = writeln!(out, "<title>{title}</title>");
}

/// Bar plot of the cylinders `π(w)`, `w ∈ P_k`, on `[0, 1]`: one `<rect>` per word.
pub fn cylinders_svg(set: &PrefixSet) -> String {
    let mut out = String::new();
    header(&mut out, HEIGHT, &format!("depth {} cylinders ({} words)", set.depth, set.len()));
    let _ = writeln!(
        out,
        r##"<line x1="{m}" y1="{y}" x2="{x2}" y2="{y}" stroke="#000" stroke-width="1"/>"##,
        m = MARGIN,
        y = MARGIN + HEIGHT,
        x2 = MARGIN + WIDTH,
    );
    for w in &set.words {
        let c = coding_pi(w);
        let x = MARGIN + WIDTH * c.lo_f64();
        let width = WIDTH * (c.hi_f64() - c.lo_f64());
        let _ = writeln!(
            out,
            r##"<rect x="{x:.6}" y="{y:.6}" width="{width:.6}" height="{HEIGHT:.6}" fill="#4477aa" stroke="#ffffff" stroke-width="0.2"><title>{w}</title></rect>"##,
            y = MARGIN,
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Polyline graph of `(x, h(x))` on the unit square.
pub fn graph_svg(points: &[(f64, f64)]) -> String {
    let mut out = String::new();
    let side = WIDTH;
    header(&mut out, side, "homeomorphism graph");
    let _ = writeln!(
        out,
        r##"<rect x="{MARGIN}" y="{MARGIN}" width="{side}" height="{side}" fill="none" stroke="#000"/>"##
    );
    let path: Vec<String> = points
        .iter()
        .map(|(x, y)| format!("{:.6},{:.6}", MARGIN + side * x, MARGIN + side * (1.0 - y)))
        .collect();
    let _ = writeln!(
        out,
        r##"<polyline fill="none" stroke="#aa3377" stroke-width="1.5" points="{}"/>"##,
        path.join(" ")
    );
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::address_space::OmegaMode;

    #[test]
    fn one_rect_per_word() {
        let set = PrefixSet {
            depth: 2,
            mode: OmegaMode::Closure,
            words: ["00", "01", "11"].iter().map(|s| s.parse().unwrap()).collect(),
        };
        let svg = cylinders_svg(&set);
        assert_eq!(svg.matches("<rect").count(), 3);
        assert!(svg.starts_with("<svg"));
    }

    #[test]
    fn cylinder_rows() {
        let words: Vec<Word> = vec!["01".parse().unwrap()];
        assert_eq!(cylinders_csv(&words), "word,lo,hi\n01,1/4,1/2\n");
    }

    #[test]
    fn graph_rows() {
        let csv = graph_csv(&[(0.0, 1.0), (1.0, 0.0)]);
        assert_eq!(csv.lines().count(), 3);
    }
}
