//! Deterministic SVG drawings of castles with optional matching and sector
//! overlays.

use std::fmt::Write as _;

use crate::castle::Castle;
use crate::matchings::{twistable_faces, Matching, Twist};
use crate::minmatch::{BorderKind, SectorMap};
use crate::tiling::{Color, LatticePoint};

/// Pixels per lattice step.
const SCALE: f64 = 40.0;
const MARGIN: f64 = 30.0;
const LEGEND_WIDTH: f64 = 170.0;
const SECTOR_FILLS: [&str; 4] = ["#fde7c8", "#d9ecf9", "#e2f3d6", "#efdcf3"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Style {
    Sector(usize),
    PositiveFace,
    NegativeFace,
    Contour,
    Edge,
    MatchedEdge,
    Staircase,
    StraightLine,
    ZeroLine,
    WhiteVertex,
    BlackVertex,
}

impl Style {
    fn class(self) -> String {
        match self {
            Style::Sector(n) => format!("sector s{n}"),
            Style::PositiveFace => "face positive".into(),
            Style::NegativeFace => "face negative".into(),
            Style::Contour => "contour".into(),
            Style::Edge => "edge".into(),
            Style::MatchedEdge => "edge matched".into(),
            Style::Staircase => "border staircase".into(),
            Style::StraightLine => "border straight".into(),
            Style::ZeroLine => "border zero".into(),
            Style::WhiteVertex => "vertex white".into(),
            Style::BlackVertex => "vertex black".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Shape {
    Polygon(Vec<LatticePoint>),
    Polyline(Vec<LatticePoint>),
    Segment(LatticePoint, LatticePoint),
    Dot(LatticePoint),
}

/// Drawables in paint order. Primitives are pushed layer by layer and, within
/// a layer, in the castle's sorted order, so equal inputs give equal output.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Scene {
    pub layers: Vec<(Style, Shape)>,
}

impl Scene {
    pub fn castle(c: &Castle, matching: Option<&Matching>, sectors: Option<&SectorMap>) -> Scene {
        let mut layers = Vec::new();
        if let Some(map) = sectors {
            for (n, f) in c.faces.iter().enumerate() {
                let s = map.face_sector.get(n).copied().unwrap_or(0);
                layers.push((Style::Sector(s), Shape::Polygon(f.id.vertices().to_vec())));
            }
        }
        if let Some(m) = matching {
            for (n, t) in twistable_faces(c, m) {
                let style = if t == Twist::Positive {
                    Style::PositiveFace
                } else {
                    Style::NegativeFace
                };
                layers.push((style, Shape::Polygon(c.faces[n].id.vertices().to_vec())));
            }
        }
        layers.push((Style::Contour, Shape::Polyline(c.contour.polyline.clone())));
        for e in 0..c.edges.len() {
            let (w, b) = c.edge_points(e);
            let style = if matching.is_some_and(|m| m.contains(e)) {
                Style::MatchedEdge
            } else {
                Style::Edge
            };
            layers.push((style, Shape::Segment(w, b)));
        }
        if let Some(map) = sectors {
            for b in &map.borders {
                let style = match b.kind {
                    BorderKind::Staircase { .. } => Style::Staircase,
                    BorderKind::StraightLine { .. } => Style::StraightLine,
                    BorderKind::ZeroLine => Style::ZeroLine,
                };
                layers.push((style, Shape::Polyline(b.path.clone())));
            }
        }
        for v in &c.vertices {
            let style = if v.color == Color::White {
                Style::WhiteVertex
            } else {
                Style::BlackVertex
            };
            layers.push((style, Shape::Dot(v.point)));
        }
        Scene { layers }
    }

    fn points(&self) -> impl Iterator<Item = LatticePoint> + '_ {
        self.layers.iter().flat_map(|(_, s)| match s {
            Shape::Polygon(p) | Shape::Polyline(p) => p.clone(),
            Shape::Segment(a, b) => vec![*a, *b],
            Shape::Dot(p) => vec![*p],
        })
    }

    pub fn to_svg(&self, title: &str) -> String {
        let (mut x0, mut y0, mut x1, mut y1) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for p in self.points() {
            let (x, y) = p.to_cartesian();
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        // y grows downward in SVG
        let map = |p: LatticePoint| {
            let (x, y) = p.to_cartesian();
            ((x - x0) * SCALE + MARGIN, (y1 - y) * SCALE + MARGIN)
        };
        let width = (x1 - x0) * SCALE + 2.0 * MARGIN + LEGEND_WIDTH;
        let height = ((y1 - y0) * SCALE + 2.0 * MARGIN).max(220.0);

        let mut s = String::new();
        let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}">"#,
            num(width),
            num(height),
            num(width),
            num(height)
        );
        let _ = writeln!(s, "<title>{}</title>", escape(title));
        s.push_str(STYLE_SHEET);
        for (style, shape) in &self.layers {
            let class = style.class();
            match shape {
                Shape::Polygon(ps) | Shape::Polyline(ps) => {
                    let tag = if matches!(shape, Shape::Polygon(_)) {
                        "polygon"
                    } else {
                        "polyline"
                    };
                    let pts: Vec<String> = ps
                        .iter()
                        .map(|&p| {
                            let (x, y) = map(p);
                            format!("{},{}", num(x), num(y))
                        })
                        .collect();
                    let _ = writeln!(s, r#"<{tag} class="{class}" points="{}"/>"#, pts.join(" "));
                }
                Shape::Segment(a, b) => {
                    let (ax, ay) = map(*a);
                    let (bx, by) = map(*b);
                    let _ = writeln!(
                        s,
                        r#"<line class="{class}" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                        num(ax),
                        num(ay),
                        num(bx),
                        num(by)
                    );
                }
                Shape::Dot(p) => {
                    let (x, y) = map(*p);
                    let _ = writeln!(
                        s,
                        r#"<circle class="{class}" cx="{}" cy="{}" r="3.50"/>"#,
                        num(x),
                        num(y)
                    );
                }
            }
        }
        legend(&mut s, width - LEGEND_WIDTH + 10.0);
        s.push_str("</svg>\n");
        s
    }
}

/// SVG of the castle, with the matching and sector map drawn above the graph
/// when given.
pub fn render_castle(
    c: &Castle,
    matching: Option<&Matching>,
    sectors: Option<&SectorMap>,
) -> String {
    let (i, j, k) = c.point;
    Scene::castle(c, matching, sectors).to_svg(&format!("C({i},{j},{k})"))
}

const STYLE_SHEET: &str = r#"<style>
.sector { stroke: none; }
.s0 { fill: #fde7c8; } .s1 { fill: #d9ecf9; } .s2 { fill: #e2f3d6; } .s3 { fill: #efdcf3; }
.face { stroke: none; fill-opacity: 0.7; }
.positive { fill: #7a3fa0; } .negative { fill: #9fc5e8; }
.contour { fill: none; stroke: #999999; stroke-width: 1; stroke-dasharray: 4 3; }
.edge { stroke: #333333; stroke-width: 1; }
.matched { stroke: #000000; stroke-width: 4; }
.border { fill: none; stroke-width: 2.5; stroke-linejoin: round; }
.staircase, .straight { stroke: #d62728; } .zero { stroke: #1f5fd6; }
.vertex { stroke: #000000; stroke-width: 1; }
.white { fill: #ffffff; } .black { fill: #000000; }
.legend { font-family: sans-serif; font-size: 12px; }
</style>
"#;

fn legend(s: &mut String, x: f64) {
    let rows: [(&str, &str); 7] = [
        (
            r#"<line class="key edge matched" x1="0" y1="0" x2="24" y2="0"/>"#,
            "matched edge",
        ),
        (
            r#"<line class="key border staircase" x1="0" y1="0" x2="24" y2="0"/>"#,
            "staircase / straight line",
        ),
        (
            r#"<line class="key border zero" x1="0" y1="0" x2="24" y2="0"/>"#,
            "zero line",
        ),
        (
            r#"<rect class="key face positive" x="0" y="-6" width="24" height="12"/>"#,
            "positive twistable",
        ),
        (
            r#"<rect class="key face negative" x="0" y="-6" width="24" height="12"/>"#,
            "negative twistable",
        ),
        (
            r#"<circle class="key vertex white" cx="12" cy="0" r="3.50"/>"#,
            "white vertex",
        ),
        (
            r#"<circle class="key vertex black" cx="12" cy="0" r="3.50"/>"#,
            "black vertex",
        ),
    ];
    let _ = writeln!(
        s,
        r#"<g class="legend" transform="translate({},{})">"#,
        num(x),
        num(MARGIN)
    );
    for (n, (glyph, text)) in rows.iter().enumerate() {
        let y = 22.0 * n as f64;
        let _ = writeln!(
            s,
            r#"<g transform="translate(0,{})">{glyph}<text x="32" y="4">{text}</text></g>"#,
            num(y)
        );
    }
    let _ = writeln!(
        s,
        r#"<g transform="translate(0,{})">"#,
        num(22.0 * rows.len() as f64)
    );
    for (n, fill) in SECTOR_FILLS.iter().enumerate() {
        let _ = write!(
            s,
            r#"<rect x="{}" y="-6" width="12" height="12" fill="{fill}"/>"#,
            num(14.0 * n as f64)
        );
    }
    let _ = writeln!(s, r#"<text x="60" y="4">sectors</text></g>"#);
    s.push_str("</g>\n");
}

/// Two decimals, never "-0.00".
fn num(x: f64) -> String {
    let s = format!("{x:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
