//! Aztec castles: the subgraph of the kite tiling cut out by a contour.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::contour::{contour_with_start, on_segment, Contour, SIDE_A_DIRECTION};
use crate::error::{Error, Result};
use crate::tiling::{
    color_of, vertex_kind, Color, FaceId, LatticePoint, VertexKind, DP3_LABELS, STEP,
};

/// Tiling labels and contour orientation used to cut a castle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CastleConfig {
    pub labels: [u8; 6],
    pub side_a_direction: usize,
}

impl Default for CastleConfig {
    fn default() -> Self {
        CastleConfig {
            labels: DP3_LABELS,
            side_a_direction: SIDE_A_DIRECTION,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CastleVertex {
    pub point: LatticePoint,
    pub color: Color,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CastleEdge {
    /// Index of the white endpoint in `Castle::vertices`.
    pub white: usize,
    pub black: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CastleFace {
    pub id: FaceId,
    pub label: u8,
    /// `edges[n]` is the castle edge from kite vertex `n` to `n + 1`, if present.
    pub edges: [Option<usize>; 4],
    /// Kite edges matched by force while trimming.
    pub forced: u8,
}

impl CastleFace {
    pub fn present_edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().flatten().copied()
    }

    pub fn is_full(&self) -> bool {
        self.edges.iter().all(Option::is_some)
    }

    pub fn is_orphaned(&self) -> bool {
        self.edges.iter().all(Option::is_none)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Castle {
    pub point: (i64, i64, i64),
    pub contour: Contour,
    pub config: CastleConfig,
    /// Sorted by point.
    pub vertices: Vec<CastleVertex>,
    /// Sorted by `(white, black)`.
    pub edges: Vec<CastleEdge>,
    /// Every kite whose interior lies inside the contour.
    pub faces: Vec<CastleFace>,
    /// Edges removed as forced while trimming, white point first.
    pub forced: Vec<(LatticePoint, LatticePoint)>,
    pub trimmed: bool,
}

/// Cut the castle `C(i, j, k)` out of the tiling.
pub fn build_castle(i: i64, j: i64, k: i64) -> Result<Castle> {
    build_castle_with(i, j, k, CastleConfig::default())
}

pub fn build_castle_with(i: i64, j: i64, k: i64, config: CastleConfig) -> Result<Castle> {
    let contour = contour_with_start(i, j, k, config.side_a_direction);
    if contour.is_self_intersecting() {
        return Err(Error::SelfIntersecting(i, j, k));
    }
    let (mut lo, mut hi) = (contour.polyline[0], contour.polyline[0]);
    for p in &contour.polyline {
        lo = LatticePoint::new(lo.u.min(p.u), lo.v.min(p.v));
        hi = LatticePoint::new(hi.u.max(p.u), hi.v.max(p.v));
    }
    let mut kites = Vec::new();
    for u in (lo.u - STEP..=hi.u + STEP).step_by(STEP as usize) {
        for v in (lo.v - STEP..=hi.v + STEP).step_by(STEP as usize) {
            for slot in 0..6 {
                let f = FaceId::new(LatticePoint::new(u, v), slot);
                if contour.contains(f.sample_point()) == Some(true) {
                    kites.push(f);
                }
            }
        }
    }

    let mut points: BTreeSet<LatticePoint> = kites.iter().flat_map(|f| f.vertices()).collect();
    points.retain(|&p| keep_vertex(&contour, p));

    let vertices: Vec<CastleVertex> = points
        .iter()
        .map(|&p| CastleVertex {
            point: p,
            color: color_of(p).unwrap(),
        })
        .collect();
    let index: BTreeMap<LatticePoint, usize> =
        points.iter().enumerate().map(|(n, &p)| (p, n)).collect();
    let mut edge_set = BTreeSet::new();
    for f in &kites {
        let vs = f.vertices();
        for n in 0..4 {
            if let (Some(&a), Some(&b)) = (index.get(&vs[n]), index.get(&vs[(n + 1) % 4])) {
                edge_set.insert(white_first(&vertices, a, b));
            }
        }
    }
    let edges: Vec<CastleEdge> = edge_set
        .into_iter()
        .map(|(white, black)| CastleEdge { white, black })
        .collect();
    let mut castle = Castle {
        point: (i, j, k),
        contour,
        config,
        vertices,
        edges,
        faces: Vec::new(),
        forced: Vec::new(),
        trimmed: false,
    };
    castle.faces = kites
        .into_iter()
        .map(|id| CastleFace {
            id,
            label: config.labels[id.slot as usize],
            edges: castle.kite_edges(id),
            forced: 0,
        })
        .collect();
    Ok(castle)
}

fn white_first(vertices: &[CastleVertex], a: usize, b: usize) -> (usize, usize) {
    if vertices[a].color == Color::White {
        (a, b)
    } else {
        (b, a)
    }
}

/// Boundary rule: a positive side drops its black vertices, a negative side
/// its white vertices (endpoints included). The corner of a zero side stays
/// only between two strictly positive sides.
fn keep_vertex(c: &Contour, p: LatticePoint) -> bool {
    let color = color_of(p).unwrap();
    let hex = vertex_kind(p) == Some(VertexKind::HexCenter);
    for s in 0..6 {
        let (a, b) = (c.corners[s], c.corners[s + 1]);
        match c.sides[s].signum() {
            1 if color == Color::Black && on_segment(a, b, p) => return false,
            -1 if color == Color::White && on_segment(a, b, p) => return false,
            0 if hex && p == a => {
                let prev = c.sides[(s + 5) % 6];
                let next = c.sides[(s + 1) % 6];
                if prev <= 0 || next <= 0 {
                    return false;
                }
            }
            _ => {}
        }
    }
    true
}

impl Castle {
    pub fn num_white(&self) -> usize {
        self.vertices
            .iter()
            .filter(|v| v.color == Color::White)
            .count()
    }

    pub fn num_black(&self) -> usize {
        self.vertices.len() - self.num_white()
    }

    pub fn is_balanced(&self) -> bool {
        self.num_white() == self.num_black()
    }

    pub fn vertex_index(&self, p: LatticePoint) -> Option<usize> {
        self.vertices.binary_search_by(|v| v.point.cmp(&p)).ok()
    }

    pub fn edge_index(&self, a: LatticePoint, b: LatticePoint) -> Option<usize> {
        let (ia, ib) = (self.vertex_index(a)?, self.vertex_index(b)?);
        let (w, k) = white_first(&self.vertices, ia, ib);
        self.edges
            .binary_search_by(|e| (e.white, e.black).cmp(&(w, k)))
            .ok()
    }

    fn kite_edges(&self, id: FaceId) -> [Option<usize>; 4] {
        let vs = id.vertices();
        [0, 1, 2, 3].map(|n| self.edge_index(vs[n], vs[(n + 1) % 4]))
    }

    /// Adjacency lists `(edge, neighbour)`.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for (n, e) in self.edges.iter().enumerate() {
            adj[e.white].push((n, e.black));
            adj[e.black].push((n, e.white));
        }
        adj
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|e| e.white == v || e.black == v)
            .count()
    }

    /// Kites with at least one castle edge.
    pub fn graph_faces(&self) -> impl Iterator<Item = &CastleFace> {
        self.faces.iter().filter(|f| !f.is_orphaned())
    }

    pub fn edge_points(&self, e: usize) -> (LatticePoint, LatticePoint) {
        let e = self.edges[e];
        (self.vertices[e.white].point, self.vertices[e.black].point)
    }

    /// Remove degree-1 vertices together with their partner until none are
    /// left; every removed edge is matched in all perfect matchings.
    pub fn trim_dangling(&self) -> Castle {
        let adj = self.adjacency();
        let mut alive = vec![true; self.vertices.len()];
        let mut forced_edges = Vec::new();
        loop {
            let live_deg =
                |v: usize, alive: &[bool]| adj[v].iter().filter(|(_, w)| alive[*w]).count();
            let Some(v) = (0..self.vertices.len()).find(|&v| alive[v] && live_deg(v, &alive) == 1)
            else {
                break;
            };
            let &(e, w) = adj[v].iter().find(|(_, w)| alive[*w]).unwrap();
            alive[v] = false;
            alive[w] = false;
            forced_edges.push(e);
        }
        let points: Vec<LatticePoint> = (0..self.vertices.len())
            .filter(|&v| alive[v])
            .map(|v| self.vertices[v].point)
            .collect();
        let vertices: Vec<CastleVertex> = points
            .iter()
            .map(|&p| CastleVertex {
                point: p,
                color: color_of(p).unwrap(),
            })
            .collect();
        let mut out = Castle {
            point: self.point,
            contour: self.contour.clone(),
            config: self.config,
            vertices,
            edges: Vec::new(),
            faces: Vec::new(),
            forced: self.forced.clone(),
            trimmed: true,
        };
        out.edges = self
            .edges
            .iter()
            .filter(|e| alive[e.white] && alive[e.black])
            .map(|e| {
                let w = out.vertex_index(self.vertices[e.white].point).unwrap();
                let b = out.vertex_index(self.vertices[e.black].point).unwrap();
                CastleEdge { white: w, black: b }
            })
            .collect();
        out.edges.sort_by_key(|e| (e.white, e.black));
        out.forced
            .extend(forced_edges.iter().map(|&e| self.edge_points(e)));
        out.faces = self
            .faces
            .iter()
            .map(|f| {
                let vs = f.id.vertices();
                let forced_here = forced_edges
                    .iter()
                    .filter(|&&e| {
                        let (a, b) = self.edge_points(e);
                        (0..4).any(|n| {
                            let (p, q) = (vs[n], vs[(n + 1) % 4]);
                            (p == a && q == b) || (p == b && q == a)
                        })
                    })
                    .count() as u8;
                CastleFace {
                    id: f.id,
                    label: f.label,
                    edges: out.kite_edges(f.id),
                    forced: f.forced + forced_here,
                }
            })
            .collect();
        out
    }

    /// Faces of the graph split into interior (all four edges present) and
    /// boundary faces.
    pub fn face_partition(&self) -> FacePartition {
        let mut interior = Vec::new();
        let mut boundary = Vec::new();
        for f in self.graph_faces() {
            if f.is_full() {
                interior.push(f.id);
            } else {
                boundary.push(f.id);
            }
        }
        FacePartition { interior, boundary }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let fmt_point = |p: LatticePoint| [p.u, p.v];
        serde_json::json!({
            "point": [self.point.0, self.point.1, self.point.2],
            "sides": self.contour.sides,
            "signs": self.contour.signs.to_string(),
            "trimmed": self.trimmed,
            "vertices": self.vertices.iter().map(|v| serde_json::json!({
                "point": fmt_point(v.point),
                "color": if v.color == Color::White { "white" } else { "black" },
            })).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|e| [e.white, e.black]).collect::<Vec<_>>(),
            "faces": self.faces.iter().map(|f| serde_json::json!({
                "apex": fmt_point(f.id.apex),
                "slot": f.id.slot,
                "label": f.label,
                "edges": f.present_edges().collect::<Vec<_>>(),
                "forced": f.forced,
            })).collect::<Vec<_>>(),
            "forced": self.forced.iter().map(|(a, b)| [fmt_point(*a), fmt_point(*b)]).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacePartition {
    pub interior: Vec<FaceId>,
    pub boundary: Vec<FaceId>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_castle_is_a_single_short_edge() {
        let c = build_castle(0, -1, 1).unwrap();
        assert_eq!(c.faces.len(), 3);
        assert_eq!(c.vertices.len(), 2);
        assert_eq!(c.edges.len(), 1);
        let t = c.trim_dangling();
        assert!(t.vertices.is_empty());
        assert_eq!(t.forced.len(), 1);
        assert_eq!(t.faces.iter().map(|f| f.forced as usize).sum::<usize>(), 2);
    }

    #[test]
    fn worked_castle_is_balanced() {
        let c = build_castle(4, 3, 2).unwrap().trim_dangling();
        assert!(c.is_balanced());
    }
}
