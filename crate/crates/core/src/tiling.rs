//! The dP3 brane tiling.
//!
//! Geometrically the tiling is a kite tiling: take a triangular lattice of
//! hexagon centers, split every lattice triangle into three kites meeting at
//! its centroid. Vertices come in three kinds:
//!
//! * hexagon centers (degree 6, white),
//! * triangle centroids (degree 3, white),
//! * lattice-edge midpoints (degree 4, black).
//!
//! Edges from a hexagon center to a midpoint are "long", edges from a centroid
//! to a midpoint are "short". Every kite has exactly one hexagon-center
//! vertex, its apex, and the six kites around a hexagon center carry the six
//! face labels.
//!
//! Coordinates are integers in the lattice basis `e1 = (1, 0)`,
//! `e2 = (1/2, sqrt(3)/2)` scaled by [`STEP`], so every vertex has integral
//! coordinates and all predicates are exact.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quiver::Quiver;

/// One lattice step (two long edges) in scaled coordinates.
pub const STEP: i64 = 6;

/// Labels of the six kites around a hexagon center, listed counterclockwise
/// starting with the kite spanning directions 0 to 60 degrees.
pub const DP3_LABELS: [u8; 6] = [5, 2, 4, 6, 1, 3];

/// Unit lattice directions, counterclockwise from `e1`, in scaled coordinates.
pub const DIRECTIONS: [LatticePoint; 6] = [
    LatticePoint::new(STEP, 0),
    LatticePoint::new(0, STEP),
    LatticePoint::new(-STEP, STEP),
    LatticePoint::new(-STEP, 0),
    LatticePoint::new(0, -STEP),
    LatticePoint::new(STEP, -STEP),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticePoint {
    pub u: i64,
    pub v: i64,
}

// by-value helpers on a Copy type; callers chain them without importing std::ops
#[allow(clippy::should_implement_trait)]
impl LatticePoint {
    pub const fn new(u: i64, v: i64) -> Self {
        LatticePoint { u, v }
    }

    pub const fn origin() -> Self {
        LatticePoint { u: 0, v: 0 }
    }

    pub fn add(self, o: LatticePoint) -> Self {
        LatticePoint::new(self.u + o.u, self.v + o.v)
    }

    pub fn sub(self, o: LatticePoint) -> Self {
        LatticePoint::new(self.u - o.u, self.v - o.v)
    }

    pub fn scale(self, k: i64) -> Self {
        LatticePoint::new(self.u * k, self.v * k)
    }

    pub fn neg(self) -> Self {
        LatticePoint::new(-self.u, -self.v)
    }

    /// Cartesian coordinates, one lattice step = 1.
    pub fn to_cartesian(self) -> (f64, f64) {
        let s = STEP as f64;
        let u = self.u as f64 / s;
        let v = self.v as f64 / s;
        (u + 0.5 * v, v * 3f64.sqrt() / 2.0)
    }

    /// Point reflection through the origin.
    pub fn rotate_180(self) -> Self {
        self.neg()
    }
}

/// 2D cross product of `b - a` and `c - a`.
pub fn orient(a: LatticePoint, b: LatticePoint, c: LatticePoint) -> i64 {
    (b.u - a.u) * (c.v - a.v) - (b.v - a.v) * (c.u - a.u)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    White,
    Black,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VertexKind {
    /// Center of a hexagon of six kites.
    HexCenter,
    /// Midpoint of a lattice edge; `0`, `1`, `2` for directions 0, 60, 120 degrees.
    Midpoint(u8),
    /// Centroid of an upward lattice triangle.
    UpCentroid,
    /// Centroid of a downward lattice triangle.
    DownCentroid,
}

impl VertexKind {
    pub fn color(self) -> Color {
        match self {
            VertexKind::Midpoint(_) => Color::Black,
            _ => Color::White,
        }
    }
}

/// Classify a scaled point as a tiling vertex, if it is one.
pub fn vertex_kind(p: LatticePoint) -> Option<VertexKind> {
    match (p.u.rem_euclid(STEP), p.v.rem_euclid(STEP)) {
        (0, 0) => Some(VertexKind::HexCenter),
        (3, 0) => Some(VertexKind::Midpoint(0)),
        (0, 3) => Some(VertexKind::Midpoint(1)),
        (3, 3) => Some(VertexKind::Midpoint(2)),
        (2, 2) => Some(VertexKind::UpCentroid),
        (4, 4) => Some(VertexKind::DownCentroid),
        _ => None,
    }
}

pub fn color_of(p: LatticePoint) -> Option<Color> {
    vertex_kind(p).map(VertexKind::color)
}

/// A kite, named by its hexagon-center apex and its angular slot `0..6`
/// (slot `p` spans directions `60p` to `60(p+1)` degrees).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FaceId {
    pub apex: LatticePoint,
    pub slot: u8,
}

impl FaceId {
    pub fn new(apex: LatticePoint, slot: u8) -> Self {
        debug_assert!(slot < 6);
        FaceId { apex, slot }
    }

    /// Vertices in counterclockwise order: apex, midpoint, centroid, midpoint.
    pub fn vertices(&self) -> [LatticePoint; 4] {
        let p = self.slot as usize;
        let d0 = DIRECTIONS[p];
        let d1 = DIRECTIONS[(p + 1) % 6];
        let h = self.apex;
        [
            h,
            h.add(LatticePoint::new(d0.u / 2, d0.v / 2)),
            h.add(LatticePoint::new((d0.u + d1.u) / 3, (d0.v + d1.v) / 3)),
            h.add(LatticePoint::new(d1.u / 2, d1.v / 2)),
        ]
    }

    /// A point strictly inside the kite (midpoint of apex and centroid).
    pub fn sample_point(&self) -> LatticePoint {
        let [h, _, t, _] = self.vertices();
        LatticePoint::new((h.u + t.u) / 2, (h.v + t.v) / 2)
    }

    /// Sample point scaled by 4 for exact comparisons with the kite centroid.
    pub fn centroid_times4(&self) -> LatticePoint {
        self.vertices()
            .iter()
            .fold(LatticePoint::origin(), |acc, p| acc.add(*p))
    }

    /// The kite obtained by the 180 degree rotation about the origin.
    pub fn rotate_180(&self) -> FaceId {
        FaceId::new(self.apex.neg(), (self.slot + 3) % 6)
    }
}

/// Undirected tiling edge, stored white endpoint first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeKey {
    pub white: LatticePoint,
    pub black: LatticePoint,
}

impl EdgeKey {
    pub fn new(a: LatticePoint, b: LatticePoint) -> Self {
        match color_of(a) {
            Some(Color::White) => EdgeKey { white: a, black: b },
            _ => EdgeKey { white: b, black: a },
        }
    }

    pub fn is_long(&self) -> bool {
        vertex_kind(self.white) == Some(VertexKind::HexCenter)
    }
}

/// Which kite is on each side of an edge, seen walking white to black.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeFaces {
    pub left: FaceId,
    pub right: FaceId,
}

/// The kites having `p` as a vertex.
pub fn faces_at_vertex(p: LatticePoint) -> Vec<FaceId> {
    let mut out = Vec::new();
    match vertex_kind(p) {
        Some(VertexKind::HexCenter) => {
            for s in 0..6 {
                out.push(FaceId::new(p, s));
            }
        }
        Some(_) => {
            let base = LatticePoint::new(p.u - p.u.rem_euclid(STEP), p.v - p.v.rem_euclid(STEP));
            for a in -1..=2 {
                for b in -1..=2 {
                    let apex = base.add(LatticePoint::new(a * STEP, b * STEP));
                    for s in 0..6 {
                        let f = FaceId::new(apex, s);
                        if f.vertices().contains(&p) {
                            out.push(f);
                        }
                    }
                }
            }
            out.sort();
        }
        None => {}
    }
    out
}

/// Faces on both sides of the edge `a`-`b`.
pub fn edge_faces(a: LatticePoint, b: LatticePoint) -> Option<EdgeFaces> {
    let key = EdgeKey::new(a, b);
    let mut left = None;
    let mut right = None;
    for f in faces_at_vertex(key.white) {
        let vs = f.vertices();
        for i in 0..4 {
            let (p, q) = (vs[i], vs[(i + 1) % 4]);
            if p == key.white && q == key.black {
                left = Some(f);
            } else if p == key.black && q == key.white {
                right = Some(f);
            }
        }
    }
    Some(EdgeFaces {
        left: left?,
        right: right?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtlasVertex {
    pub point: LatticePoint,
    pub kind: VertexKind,
    pub color: Color,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtlasFace {
    pub id: FaceId,
    pub label: u8,
    pub vertices: [LatticePoint; 4],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtlasEdge {
    pub white: LatticePoint,
    pub black: LatticePoint,
    pub long: bool,
    /// Label of the face on the left walking white to black.
    pub left_label: u8,
    pub right_label: u8,
}

/// One fundamental domain of the tiling together with its periods.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilingAtlas {
    pub labels: [u8; 6],
    pub faces: Vec<AtlasFace>,
    pub vertices: Vec<AtlasVertex>,
    pub edges: Vec<AtlasEdge>,
    pub periods: [LatticePoint; 2],
}

impl TilingAtlas {
    pub fn label(&self, f: FaceId) -> u8 {
        self.labels[f.slot as usize]
    }
}

/// The dP3 atlas: one hexagon center, three midpoints, two centroids, six
/// kites and twelve edges per period.
pub fn build_atlas() -> TilingAtlas {
    build_atlas_with_labels(DP3_LABELS)
}

pub fn build_atlas_with_labels(labels: [u8; 6]) -> TilingAtlas {
    let origin = LatticePoint::origin();
    let faces: Vec<AtlasFace> = (0..6)
        .map(|s| {
            let id = FaceId::new(origin, s);
            AtlasFace {
                id,
                label: labels[s as usize],
                vertices: id.vertices(),
            }
        })
        .collect();
    let points = [
        LatticePoint::new(0, 0),
        LatticePoint::new(3, 0),
        LatticePoint::new(0, 3),
        LatticePoint::new(3, 3),
        LatticePoint::new(2, 2),
        LatticePoint::new(4, 4),
    ];
    let vertices = points
        .iter()
        .map(|&p| {
            let kind = vertex_kind(p).unwrap();
            AtlasVertex {
                point: p,
                kind,
                color: kind.color(),
            }
        })
        .collect();
    // white vertices of the domain own their edges
    let mut keys = BTreeSet::new();
    for &w in points
        .iter()
        .filter(|p| color_of(**p) == Some(Color::White))
    {
        for f in faces_at_vertex(w) {
            let vs = f.vertices();
            for i in 0..4 {
                let (p, q) = (vs[i], vs[(i + 1) % 4]);
                if p == w || q == w {
                    keys.insert(EdgeKey::new(p, q));
                }
            }
        }
    }
    let edges = keys
        .into_iter()
        .map(|k| {
            let ef = edge_faces(k.white, k.black).expect("interior edge has two faces");
            AtlasEdge {
                white: k.white,
                black: k.black,
                long: k.is_long(),
                left_label: labels[ef.left.slot as usize],
                right_label: labels[ef.right.slot as usize],
            }
        })
        .collect();
    TilingAtlas {
        labels,
        faces,
        vertices,
        edges,
        periods: [DIRECTIONS[0], DIRECTIONS[1]],
    }
}

/// The quiver dual to the tiling: one vertex per face label, one arrow per
/// edge, from the face left of the white-to-black direction to the face on
/// its right (arrows circle white vertices clockwise).
pub fn dual_quiver(atlas: &TilingAtlas) -> Quiver {
    let arrows = atlas
        .edges
        .iter()
        .map(|e| (e.left_label as usize, e.right_label as usize));
    Quiver::from_arrows(6, 0, arrows)
}

/// Result of [`locate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    /// A hexagon center; every one of them is a valid contour start.
    ContourStart,
    Vertex(VertexKind),
    Face {
        face: FaceId,
        label: u8,
    },
}

/// Resolve a scaled point to the vertex it coincides with or the kite whose
/// interior contains it. Points on an edge but not at a vertex are rejected.
pub fn locate(atlas: &TilingAtlas, p: LatticePoint) -> Result<Location> {
    if let Some(kind) = vertex_kind(p) {
        return Ok(match kind {
            VertexKind::HexCenter => Location::ContourStart,
            k => Location::Vertex(k),
        });
    }
    let base = LatticePoint::new(p.u - p.u.rem_euclid(STEP), p.v - p.v.rem_euclid(STEP));
    for du in [0, STEP] {
        for dv in [0, STEP] {
            let apex = base.add(LatticePoint::new(du, dv));
            for s in 0..6 {
                let f = FaceId::new(apex, s);
                let vs = f.vertices();
                let signs: Vec<i64> = (0..4).map(|i| orient(vs[i], vs[(i + 1) % 4], p)).collect();
                if signs.iter().all(|&s| s > 0) {
                    return Ok(Location::Face {
                        face: f,
                        label: atlas.label(f),
                    });
                }
            }
        }
    }
    Err(Error::NotOnLattice(p))
}

/// Labels around a vertex in counterclockwise order, used for local checks.
pub fn labels_around(atlas: &TilingAtlas, p: LatticePoint) -> Vec<u8> {
    let mut fs: Vec<(f64, u8)> = faces_at_vertex(p)
        .into_iter()
        .map(|f| {
            let c = f.centroid_times4();
            let (x, y) = c.to_cartesian();
            let (px, py) = p.scale(4).to_cartesian();
            ((y - py).atan2(x - px), atlas.label(f))
        })
        .collect();
    fs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    fs.into_iter().map(|(_, l)| l).collect()
}

/// Degree of every vertex class in the infinite tiling.
pub fn vertex_degree(p: LatticePoint) -> usize {
    let mut nbrs = BTreeMap::new();
    for f in faces_at_vertex(p) {
        let vs = f.vertices();
        for i in 0..4 {
            if vs[i] == p {
                nbrs.insert(vs[(i + 1) % 4], ());
                nbrs.insert(vs[(i + 3) % 4], ());
            }
        }
    }
    nbrs.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atlas_counts() {
        let a = build_atlas();
        let mut labels: Vec<u8> = a.faces.iter().map(|f| f.label).collect();
        labels.sort();
        assert_eq!(labels, vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(
            a.vertices
                .iter()
                .filter(|v| v.color == Color::Black)
                .count(),
            3
        );
        assert_eq!(
            a.vertices
                .iter()
                .filter(|v| v.color == Color::White)
                .count(),
            3
        );
        assert_eq!(a.edges.len(), 12);
        assert_eq!(a.edges.iter().filter(|e| e.long).count(), 6);
        // Euler characteristic of the torus
        assert_eq!(
            a.vertices.len() as i64 - a.edges.len() as i64 + a.faces.len() as i64,
            0
        );
    }

    #[test]
    fn bipartite_and_quadrilateral() {
        for s in 0..6 {
            let f = FaceId::new(LatticePoint::new(12, -6), s);
            let vs = f.vertices();
            for i in 0..4 {
                assert_ne!(color_of(vs[i]), color_of(vs[(i + 1) % 4]));
                assert!(color_of(vs[i]).is_some());
            }
            // counterclockwise and convex
            for i in 0..4 {
                assert!(orient(vs[i], vs[(i + 1) % 4], vs[(i + 2) % 4]) > 0);
            }
        }
    }

    #[test]
    fn degrees() {
        assert_eq!(vertex_degree(LatticePoint::new(0, 0)), 6);
        assert_eq!(vertex_degree(LatticePoint::new(3, 0)), 4);
        assert_eq!(vertex_degree(LatticePoint::new(0, 3)), 4);
        assert_eq!(vertex_degree(LatticePoint::new(-3, 3)), 4);
        assert_eq!(vertex_degree(LatticePoint::new(2, 2)), 3);
        assert_eq!(vertex_degree(LatticePoint::new(-2, 4)), 3);
        // translated copies keep their degree
        assert_eq!(vertex_degree(LatticePoint::new(32, -28)), 3);
    }

    #[test]
    fn locate_periodic() {
        let a = build_atlas();
        assert_eq!(
            locate(&a, LatticePoint::origin()).unwrap(),
            Location::ContourStart
        );
        for s in 0..6u8 {
            let f = FaceId::new(LatticePoint::origin(), s);
            let p = f.sample_point();
            let q = p.add(DIRECTIONS[0].scale(3)).add(DIRECTIONS[1].scale(-2));
            let la = locate(&a, p).unwrap();
            let lb = locate(&a, q).unwrap();
            match (la, lb) {
                (Location::Face { label: x, .. }, Location::Face { label: y, .. }) => {
                    assert_eq!(x, y)
                }
                other => panic!("unexpected {other:?}"),
            }
        }
        assert!(locate(&a, LatticePoint::new(1, 0)).is_err());
    }
}
