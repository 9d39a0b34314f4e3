//! SVG rendering of an embedded instance, solution edges highlighted.
//! Inspection only: squares are terminals, filled circles are roots, dots
//! are Steiner vertices.

use crate::format::{InstanceFile, Role, SolutionFile};
use std::collections::BTreeMap;
use std::fmt::Write as _;

#[derive(Debug, thiserror::Error)]
pub enum DrawError {
    #[error("vertex {0} has no coordinates; drawing needs xy on every vertex")]
    MissingCoords(u32),
}

const UNIT: f64 = 60.0;
const PAD: f64 = 40.0;

pub fn render_svg(file: &InstanceFile, solution: Option<&SolutionFile>) -> Result<String, DrawError> {
    let mut coords: BTreeMap<u32, (f64, f64)> = BTreeMap::new();
    let (mut max_x, mut max_y) = (0f64, 0f64);
    for v in &file.vertices {
        let (x, y) = v.coords.ok_or(DrawError::MissingCoords(v.id))?;
        let (px, py) = (PAD + x as f64 * UNIT, PAD + y as f64 * UNIT);
        coords.insert(v.id, (px, py));
        max_x = max_x.max(px);
        max_y = max_y.max(py);
    }
    let chosen = |e: u32| solution.is_some_and(|s| s.edges.contains(&e));

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"##,
        w = max_x + PAD,
        h = max_y + PAD,
    );
    svg.push_str(
        r##"<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="6" markerHeight="6" orient="auto-start-reverse"><path d="M 0 0 L 10 5 L 0 10 z"/></marker><marker id="arrow-sol" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="6" markerHeight="6" orient="auto-start-reverse"><path d="M 0 0 L 10 5 L 0 10 z" fill="#c0392b"/></marker></defs>
"##,
    );
    // Edges under vertices; shorten each segment so arrowheads stay visible.
    for e in &file.edges {
        let (x1, y1) = coords[&e.tail];
        let (x2, y2) = coords[&e.head];
        let (dx, dy) = (x2 - x1, y2 - y1);
        let len = (dx * dx + dy * dy).sqrt().max(1.0);
        let trim = 10.0 / len;
        let (sx, sy) = (x1 + dx * trim, y1 + dy * trim);
        let (tx, ty) = (x2 - dx * trim, y2 - dy * trim);
        let (stroke, width, marker) = if chosen(e.id) {
            ("#c0392b", 3.0, "url(#arrow-sol)")
        } else {
            ("#95a5a6", 1.2, "url(#arrow)")
        };
        let _ = writeln!(
            svg,
            r##"<line x1="{sx:.1}" y1="{sy:.1}" x2="{tx:.1}" y2="{ty:.1}" stroke="{stroke}" stroke-width="{width}" marker-end="{marker}"/>"##,
        );
    }
    for v in &file.vertices {
        let (x, y) = coords[&v.id];
        match v.role {
            Role::Root => {
                let _ = writeln!(
                    svg,
                    r##"<circle cx="{x:.1}" cy="{y:.1}" r="9" fill="#2980b9" stroke="#1a5276"/>"##
                );
            }
            Role::Terminal => {
                let _ = writeln!(
                    svg,
                    r##"<rect x="{:.1}" y="{:.1}" width="14" height="14" fill="#e67e22" stroke="#9c640c"/>"##,
                    x - 7.0,
                    y - 7.0
                );
            }
            Role::Steiner => {
                let _ = writeln!(svg, r##"<circle cx="{x:.1}" cy="{y:.1}" r="4" fill="#7f8c8d"/>"##);
            }
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
