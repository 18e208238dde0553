//! Constructive minimal matching: cut the castle into four sectors along two
//! straight lines, two staircases and a zero line, then cover every sector
//! with the periodic matching of its contour side.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::castle::Castle;
use crate::contour::{
    on_segment, side_direction_index, sign_assignments, Contour, RegionName, Sign, SignPattern,
};
use crate::error::{Error, Result};
use crate::matchings::{twistable_faces, Matching, Twist};
use crate::tiling::{edge_faces, orient, LatticePoint, DIRECTIONS, STEP};

/// A periodic perfect matching of the tiling, as the three label pairs of the
/// faces on either side of its edges.
pub type Covering = [(u8, u8); 3];

/// Covering of the sector at side `s`: `[positive, negative]`.
pub const COVERINGS: [[Covering; 2]; 6] = [
    [[(1, 4), (2, 5), (3, 6)], [(1, 5), (2, 4), (3, 6)]],
    [[(1, 4), (2, 6), (3, 5)], [(1, 4), (2, 5), (3, 6)]],
    [[(1, 3), (2, 6), (4, 5)], [(1, 4), (2, 6), (3, 5)]],
    [[(1, 6), (2, 3), (4, 5)], [(1, 3), (2, 6), (4, 5)]],
    [[(1, 5), (2, 3), (4, 6)], [(1, 6), (2, 3), (4, 5)]],
    [[(1, 5), (2, 4), (3, 6)], [(1, 5), (2, 3), (4, 6)]],
];

pub fn covering(side: usize, sign: Sign) -> Covering {
    COVERINGS[side % 6][if sign == Sign::Plus { 0 } else { 1 }]
}

/// The covering table's redundancy: side `s` positive equals side `s + 1`
/// negative.
pub fn coverings_are_redundant() -> bool {
    (0..6).all(|s| same_covering(&covering(s, Sign::Plus), &covering(s + 1, Sign::Minus)))
}

fn same_covering(a: &Covering, b: &Covering) -> bool {
    let norm = |c: &Covering| {
        let mut v: Vec<(u8, u8)> = c.iter().map(|&(x, y)| (x.min(y), x.max(y))).collect();
        v.sort();
        v
    };
    norm(a) == norm(b)
}

fn covers_pair(c: &Covering, x: u8, y: u8) -> bool {
    c.iter().any(|&(p, q)| (p, q) == (x, y) || (p, q) == (y, x))
}

/// Whether the covering is a perfect matching of the tiling with labels
/// `labels`: each vertex of a fundamental domain meets exactly one edge.
pub fn is_periodic_matching(c: &Covering, labels: [u8; 6]) -> bool {
    let atlas = crate::tiling::build_atlas_with_labels(labels);
    atlas.vertices.iter().all(|v| {
        let hits = neighbours(v.point)
            .into_iter()
            .filter(|&w| {
                let (a, b) = edge_labels(v.point, w, labels);
                covers_pair(c, a, b)
            })
            .count();
        hits == 1
    })
}

/// Tiling neighbours of a vertex.
fn neighbours(p: LatticePoint) -> Vec<LatticePoint> {
    let mut out = BTreeSet::new();
    for f in crate::tiling::faces_at_vertex(p) {
        let vs = f.vertices();
        for n in 0..4 {
            if vs[n] == p {
                out.insert(vs[(n + 1) % 4]);
                out.insert(vs[(n + 3) % 4]);
            }
        }
    }
    out.into_iter().collect()
}

fn edge_labels(a: LatticePoint, b: LatticePoint, labels: [u8; 6]) -> (u8, u8) {
    let ef = edge_faces(a, b).expect("tiling edge");
    (
        labels[ef.left.slot as usize],
        labels[ef.right.slot as usize],
    )
}

/// Kind of a border path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BorderKind {
    /// Drawn at the corner between sides `first` and `first + 1` of equal sign.
    StraightLine {
        first: usize,
    },
    /// Drawn at the corner from negative side `negative` to positive side
    /// `negative + 1`.
    Staircase {
        negative: usize,
    },
    ZeroLine,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Border {
    pub kind: BorderKind,
    /// Hexagon centers along the border, from the contour corner inward (for
    /// the zero line, from the first to the second intersection point).
    pub path: Vec<LatticePoint>,
}

impl Border {
    pub fn segments(&self) -> impl Iterator<Item = (LatticePoint, LatticePoint)> + '_ {
        self.path.windows(2).map(|w| (w[0], w[1]))
    }

    /// For staircases: `true` for the steps parallel to the positive side.
    pub fn is_base_step(&self, step: usize) -> bool {
        step.is_multiple_of(2)
    }

    /// Number of side steps.
    pub fn side_steps(&self) -> usize {
        (self.path.len() - 1) / 2
    }

    pub fn contains_point(&self, p: LatticePoint) -> bool {
        self.segments().any(|(a, b)| on_segment(a, b, p)) || self.path.first() == Some(&p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sector {
    /// Contour sides incident to the sector, with their signs.
    pub sides: Vec<(usize, Sign)>,
    pub covering: Covering,
    /// Indices into `Castle::faces`.
    pub faces: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectorMap {
    pub borders: Vec<Border>,
    pub sectors: Vec<Sector>,
    /// `face_sector[n]` is the sector of `Castle::faces[n]`.
    pub face_sector: Vec<usize>,
    /// Sides parallel to the zero line.
    pub zero_line_sides: Option<[usize; 2]>,
    /// Side signs the division was built from; zero sides may differ from
    /// the contour's own choice.
    pub signs: SignPattern,
}

impl SectorMap {
    pub fn staircases(&self) -> impl Iterator<Item = &Border> {
        self.borders
            .iter()
            .filter(|b| matches!(b.kind, BorderKind::Staircase { .. }))
    }

    pub fn straight_lines(&self) -> impl Iterator<Item = &Border> {
        self.borders
            .iter()
            .filter(|b| matches!(b.kind, BorderKind::StraightLine { .. }))
    }

    pub fn zero_line(&self) -> Option<&Border> {
        self.borders.iter().find(|b| b.kind == BorderKind::ZeroLine)
    }

    fn border_segments(&self) -> BTreeSet<(LatticePoint, LatticePoint)> {
        let mut out = BTreeSet::new();
        for b in &self.borders {
            for (p, q) in b.segments() {
                out.insert((p.min(q), p.max(q)));
            }
        }
        out
    }
}

fn unit(d: LatticePoint) -> LatticePoint {
    let g = gcd(d.u.abs(), d.v.abs()).max(1);
    LatticePoint::new(d.u / g, d.v / g)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Travel direction of side `s`, one lattice step.
fn travel(c: &Contour, signs: &[Sign; 6], s: usize) -> LatticePoint {
    let d = DIRECTIONS[side_direction_index(dir_a(c), s)];
    if signs[s] == Sign::Plus {
        d
    } else {
        d.neg()
    }
}

fn dir_a(c: &Contour) -> usize {
    // recover the frame from the first nonzero side
    let s = (0..6).find(|&s| c.sides[s] != 0).unwrap();
    let d = unit(c.corners[s + 1].sub(c.corners[s]));
    let d = if c.sides[s] > 0 { d } else { d.neg() };
    let d = LatticePoint::new(d.u * crate::tiling::STEP, d.v * crate::tiling::STEP);
    let idx = DIRECTIONS.iter().position(|&x| x == d).unwrap();
    (idx + s) % 6
}

/// Whether `d` is a positive multiple of `dir`.
fn same_way(d: LatticePoint, dir: LatticePoint) -> bool {
    crate::tiling::orient(LatticePoint::origin(), dir, d) == 0 && d.u * dir.u + d.v * dir.v > 0
}

fn on_ray(start: LatticePoint, dir: LatticePoint, p: LatticePoint) -> bool {
    let d = p.sub(start);
    crate::tiling::orient(LatticePoint::origin(), dir, d) == 0 && d.u * dir.u + d.v * dir.v >= 0
}

/// Step 1: straight lines, staircases, zero line and the resulting sectors.
pub fn sector_division(castle: &Castle) -> Result<SectorMap> {
    sector_division_with(castle, castle.contour.signs)
}

/// [`sector_division`] with an explicit sign choice for the zero sides.
pub fn sector_division_with(castle: &Castle, pattern: SignPattern) -> Result<SectorMap> {
    let c = &castle.contour;
    let (i, j, k) = c.point;
    if c.is_self_intersecting() {
        return Err(Error::SelfIntersecting(i, j, k));
    }
    let signs = pattern.0;
    let gap = |msg: String| Error::ConstructionGap(format!("({i},{j},{k}): {msg}"));

    // rays and staircases from the corner between side s and s + 1
    let mut lines: Vec<(usize, LatticePoint, LatticePoint)> = Vec::new();
    let mut stairs: Vec<(usize, LatticePoint, LatticePoint, LatticePoint)> = Vec::new();
    for s in 0..6 {
        let t = (s + 1) % 6;
        let corner = c.corners[s + 1];
        match (signs[s], signs[t]) {
            (Sign::Plus, Sign::Plus) => lines.push((s, corner, travel(c, &signs, t).neg())),
            (Sign::Minus, Sign::Minus) => lines.push((s, corner, travel(c, &signs, s))),
            (Sign::Minus, Sign::Plus) => {
                stairs.push((s, corner, travel(c, &signs, t), travel(c, &signs, s).neg()))
            }
            (Sign::Plus, Sign::Minus) => {}
        }
    }
    if lines.len() != 2 || stairs.len() != 2 {
        return Err(gap(format!(
            "{} straight lines and {} staircases",
            lines.len(),
            stairs.len()
        )));
    }

    let limit = 4 * c.polyline.len() + 4;
    let mut borders = Vec::new();
    let mut hits: Vec<(usize, LatticePoint)> = Vec::new();
    for &(s, start, base, side) in &stairs {
        let mut path = vec![start];
        let mut cur = start;
        // a point can lie on both rays when they are collinear; take the
        // line the other staircase has not claimed
        let free = |cur: LatticePoint, hits: &[(usize, LatticePoint)]| {
            (0..lines.len())
                .filter(|&l| on_ray(lines[l].1, lines[l].2, cur))
                .min_by_key(|&l| hits.iter().any(|&(h, _)| h == l))
        };
        let mut hit = free(cur, &hits);
        let mut step = 0;
        while hit.is_none() {
            if step > limit {
                return Err(gap(format!(
                    "staircase at corner {s} never meets a straight line"
                )));
            }
            cur = cur.add(if step % 2 == 0 { base } else { side });
            path.push(cur);
            step += 1;
            hit = free(cur, &hits);
        }
        let line = hit.unwrap();
        if hits.iter().any(|&(l, _)| l == line) {
            return Err(gap("both staircases meet the same straight line".into()));
        }
        hits.push((line, cur));
        borders.push(Border {
            kind: BorderKind::Staircase { negative: s },
            path,
        });
    }
    for (n, &(s, start, dir)) in lines.iter().enumerate() {
        let end = hits.iter().find(|&&(l, _)| l == n).unwrap().1;
        let mut path = vec![start];
        let mut cur = start;
        while cur != end {
            cur = cur.add(dir);
            path.push(cur);
        }
        borders.push(Border {
            kind: BorderKind::StraightLine { first: s },
            path,
        });
    }
    let (x1, x2) = (hits[0].1, hits[1].1);
    let mut zero = vec![x1];
    let mut zero_line_sides = None;
    if x1 != x2 {
        let d = unit(x2.sub(x1));
        let dir = LatticePoint::new(d.u * crate::tiling::STEP, d.v * crate::tiling::STEP);
        let Some(idx) = DIRECTIONS.iter().position(|&x| x == dir) else {
            return Err(gap(
                "intersection points are not on a common lattice line".into()
            ));
        };
        let mut cur = x1;
        while cur != x2 {
            cur = cur.add(dir);
            zero.push(cur);
        }
        let s = (dir_a(c) + 6 - idx) % 3;
        zero_line_sides = Some([s, s + 3]);
    }
    borders.push(Border {
        kind: BorderKind::ZeroLine,
        path: zero,
    });

    let mut map = SectorMap {
        borders,
        sectors: Vec::new(),
        face_sector: Vec::new(),
        zero_line_sides,
        signs: pattern,
    };
    flood_sectors(castle, &mut map).map_err(gap)?;
    Ok(map)
}

fn flood_sectors(castle: &Castle, map: &mut SectorMap) -> std::result::Result<(), String> {
    let c = &castle.contour;
    let blocked = map.border_segments();
    let half = |h: LatticePoint, s: LatticePoint| {
        // lattice segment through long edge h-s
        let q = h.add(s.sub(h).scale(2));
        (h.min(q), h.max(q))
    };
    let long_segment = |a: LatticePoint, b: LatticePoint| -> Option<(LatticePoint, LatticePoint)> {
        match (crate::tiling::vertex_kind(a), crate::tiling::vertex_kind(b)) {
            (
                Some(crate::tiling::VertexKind::HexCenter),
                Some(crate::tiling::VertexKind::Midpoint(_)),
            ) => Some(half(a, b)),
            (
                Some(crate::tiling::VertexKind::Midpoint(_)),
                Some(crate::tiling::VertexKind::HexCenter),
            ) => Some(half(b, a)),
            _ => None,
        }
    };
    let mut by_edge: HashMap<(LatticePoint, LatticePoint), Vec<usize>> = HashMap::new();
    for (n, f) in castle.faces.iter().enumerate() {
        let vs = f.id.vertices();
        for m in 0..4 {
            let (a, b) = (vs[m], vs[(m + 1) % 4]);
            by_edge.entry((a.min(b), a.max(b))).or_default().push(n);
        }
    }
    let nf = castle.faces.len();
    let mut comp = vec![usize::MAX; nf];
    let mut ncomp = 0;
    for start in 0..nf {
        if comp[start] != usize::MAX {
            continue;
        }
        comp[start] = ncomp;
        let mut stack = vec![start];
        while let Some(f) = stack.pop() {
            let vs = castle.faces[f].id.vertices();
            for m in 0..4 {
                let (a, b) = (vs[m], vs[(m + 1) % 4]);
                if long_segment(a, b).is_some_and(|seg| blocked.contains(&seg)) {
                    continue;
                }
                for &g in &by_edge[&(a.min(b), a.max(b))] {
                    if comp[g] == usize::MAX {
                        comp[g] = ncomp;
                        stack.push(g);
                    }
                }
            }
        }
        ncomp += 1;
    }
    // sides incident to each component: kites with a long edge on side s
    let mut sides: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); ncomp];
    for (n, f) in castle.faces.iter().enumerate() {
        let vs = f.id.vertices();
        for m in 0..4 {
            if let Some((p, q)) = long_segment(vs[m], vs[(m + 1) % 4]) {
                // a staircase's first step lies on its positive side
                if blocked.contains(&(p, q)) {
                    continue;
                }
                for s in 0..6 {
                    if c.sides[s] != 0
                        && on_segment(c.corners[s], c.corners[s + 1], p)
                        && on_segment(c.corners[s], c.corners[s + 1], q)
                    {
                        sides[comp[n]].insert(s);
                    }
                }
            }
        }
    }
    // a sector cut off at a corner between zero sides takes their covering
    for (n, ss) in sides.iter_mut().enumerate() {
        if ss.is_empty() {
            for s in (0..6).filter(|&s| c.sides[s] == 0) {
                if (0..nf)
                    .any(|f| comp[f] == n && castle.faces[f].id.vertices().contains(&c.corners[s]))
                {
                    ss.insert(s);
                }
            }
        }
    }
    let signs = map.signs.0;
    let mut sectors = Vec::new();
    for (n, ss) in sides.iter().enumerate() {
        let list: Vec<(usize, Sign)> = ss.iter().map(|&s| (s, signs[s])).collect();
        let Some(&(s0, g0)) = list.first() else {
            return Err(format!("sector {n} touches no contour side"));
        };
        let cov = covering(s0, g0);
        if list
            .iter()
            .any(|&(s, g)| !same_covering(&covering(s, g), &cov))
        {
            return Err(format!(
                "sector {n} touches sides {list:?} with different coverings"
            ));
        }
        let faces = (0..nf).filter(|&f| comp[f] == n).collect();
        sectors.push(Sector {
            sides: list,
            covering: cov,
            faces,
        });
    }
    map.sectors = sectors;
    map.face_sector = comp;
    Ok(())
}

/// Rows between each staircase's inner end and the line through whichever
/// of the opposite sides `parallel` the staircase starts next to, ascending.
/// `None` if a staircase touches neither side.
pub fn staircase_heights(
    castle: &Castle,
    map: &SectorMap,
    parallel: [usize; 2],
) -> Option<[i64; 2]> {
    let c = &castle.contour;
    let mut h = Vec::new();
    for b in map.staircases() {
        let BorderKind::Staircase { negative } = b.kind else {
            continue;
        };
        let side = [negative, (negative + 1) % 6]
            .into_iter()
            .find(|s| parallel.contains(s))?;
        let d = DIRECTIONS[side_direction_index(dir_a(c), side)];
        let end = *b.path.last()?;
        h.push(orient(c.corners[side], c.corners[side].add(d), end).abs() / (STEP * STEP));
    }
    h.sort_unstable();
    (h.len() == 2).then(|| [h[0], h[1]])
}

/// The division whose zero line runs parallel to sides `c` and `f`, the
/// setting of [`arithmetic_heights`], with its staircase heights. A point
/// zero line fits any direction.
pub fn heights_parallel_to_cf(castle: &Castle) -> Option<[i64; 2]> {
    sign_assignments(&castle.contour.sides)
        .into_iter()
        .find_map(|p| {
            let map = sector_division_with(castle, p).ok()?;
            if map.zero_line_sides.is_some_and(|s| s != [2, 5]) {
                return None;
            }
            staircase_heights(castle, &map, [2, 5])
        })
}

/// Staircase heights predicted from the side lengths for the named regions
/// of the `k >= 1` half-space, ascending.
pub fn arithmetic_heights(i: i64, j: i64, k: i64) -> Option<[i64; 2]> {
    let fl = |n: i64| n.div_euclid(2);
    let region = RegionName::all()
        .into_iter()
        .find(|r| r.contains(i, j, k))?;
    let mut h = match region {
        RegionName::R1 => [fl(i + k), fl(i + 1 - k)],
        RegionName::R1Prime | RegionName::R2Prime => [fl(1 - i - k), fl(k - i)],
        RegionName::R2 | RegionName::R3 | RegionName::R3Prime => [fl(i + k), fl(k - i)],
    };
    h.sort_unstable();
    Some(h)
}

/// The six zero-line identities, evaluated at `(i, j, k)`.
pub fn zero_line_identities(i: i64, j: i64, k: i64) -> [bool; 6] {
    let fl = |n: i64| n.div_euclid(2);
    [
        fl(i + k) + fl(i + 1 - k) == i,
        fl(j + k) + fl(j + 1 - k) == j,
        fl(-i - j - k) + fl(-i - j - 1 + k) == -i - j - 1,
        fl(1 - i - k) + fl(k - i) == -i,
        fl(1 - j - k) + fl(k - j) == -j,
        fl(i + j + k + 1) + fl(i + j - k + 2) == i + j + 1,
    ]
}

/// How a vertex got its partner in [`construct_minimal`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VertexRule {
    Sector,
    Staircase,
    StraightLine,
    ZeroLine,
}

/// Result of [`construct_minimal`]: the matching and the sector map it was
/// built from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalConstruction {
    pub matching: Matching,
    pub sectors: SectorMap,
    /// Rule used for every castle vertex, indexed like `Castle::vertices`.
    pub rules: Vec<VertexRule>,
}

/// Step 2: cover every sector by its periodic matching and the borders by
/// the staircase, straight-line and zero-line rules. Fails with
/// `ConstructionGap` if the rules do not produce a perfect matching.
pub fn construct_minimal(castle: &Castle) -> Result<MinimalConstruction> {
    let c = &castle.contour;
    let mut patterns = vec![c.signs];
    for p in sign_assignments(&c.sides) {
        if !patterns.contains(&p) {
            patterns.push(p);
        }
    }
    // zero sides carry no sign of their own, so every admissible choice is
    // tried; the contour's choice comes first
    let mut first_err = None;
    for pattern in patterns {
        match construct_with(castle, pattern) {
            Ok(m) => return Ok(m),
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    Err(first_err.unwrap())
}

fn construct_with(castle: &Castle, pattern: SignPattern) -> Result<MinimalConstruction> {
    let map = sector_division_with(castle, pattern)?;
    // the zero line admits a single consistent covering; the endpoint rule
    // names it first and the others are tried only if it fails
    let mut first_err = None;
    let mut pick = 0;
    loop {
        let (chosen, options) = plan_with(castle, &map, pick);
        match resolve_partners(castle, &chosen) {
            Ok(matching) => {
                let rules = chosen.into_iter().map(|c| c.unwrap().1).collect();
                return Ok(MinimalConstruction {
                    matching,
                    sectors: map,
                    rules,
                });
            }
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
        pick += 1;
        if pick >= options {
            return Err(first_err.unwrap());
        }
    }
}

fn resolve_partners(
    castle: &Castle,
    chosen: &[Option<(Covering, VertexRule)>],
) -> Result<Matching> {
    let (i, j, k) = castle.point;
    let gap = |msg: String| Error::ConstructionGap(format!("({i},{j},{k}): {msg}"));
    let labels = castle.config.labels;
    let nv = castle.vertices.len();
    let adj = castle.adjacency();
    let mut partner = vec![usize::MAX; nv];
    let mut edge_of = vec![usize::MAX; nv];
    for v in 0..nv {
        let Some((cov, _)) = chosen[v] else {
            return Err(gap(format!(
                "vertex {:?} has no covering",
                castle.vertices[v].point
            )));
        };
        let found: Vec<(usize, usize)> = adj[v]
            .iter()
            .copied()
            .filter(|&(_, w)| {
                let (a, b) =
                    edge_labels(castle.vertices[v].point, castle.vertices[w].point, labels);
                covers_pair(&cov, a, b)
            })
            .collect();
        let [(e, w)] = found[..] else {
            return Err(gap(format!(
                "vertex {:?}: covering edge leaves the castle",
                castle.vertices[v].point
            )));
        };
        partner[v] = w;
        edge_of[v] = e;
    }
    for v in 0..nv {
        if partner[partner[v]] != v {
            return Err(gap(format!(
                "vertex {:?} is matched to {:?}, which is matched elsewhere",
                castle.vertices[v].point, castle.vertices[partner[v]].point
            )));
        }
    }
    let edges: BTreeSet<usize> = edge_of.into_iter().collect();
    Ok(Matching::new(edges.into_iter().collect()))
}

/// Covering chosen for every castle vertex by the sector and border rules,
/// indexed like `Castle::vertices`; `None` where no rule applies.
pub fn plan_coverings(castle: &Castle, map: &SectorMap) -> Vec<Option<(Covering, VertexRule)>> {
    plan_with(castle, map, 0).0
}

/// Plan using the `pick`-th zero-line covering option; also returns how many
/// options there are.
fn plan_with(
    castle: &Castle,
    map: &SectorMap,
    pick: usize,
) -> (Vec<Option<(Covering, VertexRule)>>, usize) {
    let signs = map.signs.0;
    let labels = castle.config.labels;

    // sectors around each vertex
    let mut around: BTreeMap<LatticePoint, BTreeSet<usize>> = BTreeMap::new();
    for (n, f) in castle.faces.iter().enumerate() {
        for p in f.id.vertices() {
            around.entry(p).or_default().insert(map.face_sector[n]);
        }
    }

    let nv = castle.vertices.len();
    let mut chosen: Vec<Option<(Covering, VertexRule)>> = vec![None; nv];
    for (v, cv) in castle.vertices.iter().enumerate() {
        let secs = &around[&cv.point];
        if secs.len() == 1 {
            let s = *secs.iter().next().unwrap();
            chosen[v] = Some((map.sectors[s].covering, VertexRule::Sector));
        }
    }
    // staircases
    for b in map.staircases() {
        let BorderKind::Staircase { negative } = b.kind else {
            unreachable!()
        };
        let positive = (negative + 1) % 6;
        let m_pos = covering(positive, signs[positive]);
        let m_neg = covering(negative, signs[negative]);
        for (step, (p, q)) in b.segments().enumerate() {
            let mid = LatticePoint::new((p.u + q.u) / 2, (p.v + q.v) / 2);
            assign(castle, &mut chosen, mid, m_pos, VertexRule::Staircase);
            if !b.is_base_step(step) {
                // concave-up: the white whose arrow to the step's black runs
                // against the negative side's lattice direction
                let against =
                    DIRECTIONS[side_direction_index(dir_a(&castle.contour), negative)].neg();
                let (up, down) = if same_way(mid.sub(q), against) {
                    (q, p)
                } else {
                    (p, q)
                };
                assign(castle, &mut chosen, up, m_neg, VertexRule::Staircase);
                assign(castle, &mut chosen, down, m_pos, VertexRule::Staircase);
            }
        }
    }
    // zero line: follow the covering of whichever endpoint is covered
    let mut zero_options = 1;
    if let Some(z) = map.zero_line() {
        let zero_secs: BTreeSet<usize> = z
            .segments()
            .flat_map(|(p, q)| {
                let mid = LatticePoint::new((p.u + q.u) / 2, (p.v + q.v) / 2);
                around.get(&mid).cloned().unwrap_or_default()
            })
            .collect();
        let candidates: Vec<Covering> =
            zero_secs.iter().map(|&s| map.sectors[s].covering).collect();
        let ends = [z.path[0], *z.path.last().unwrap()];
        // an endpoint's covering need not be a sector's; follow the edge it
        // actually selects
        let adj = castle.adjacency();
        let end_cov: Vec<Covering> = ends
            .iter()
            .filter_map(|&p| castle.vertex_index(p))
            .filter_map(|v| chosen[v].map(|(cov, _)| (v, cov)))
            .flat_map(|(v, cov)| {
                adj[v]
                    .iter()
                    .map(|&(_, w)| {
                        edge_labels(castle.vertices[v].point, castle.vertices[w].point, labels)
                    })
                    .filter(|&(a, b)| covers_pair(&cov, a, b))
                    .collect::<Vec<_>>()
            })
            .filter_map(|(a, b)| candidates.iter().copied().find(|c| covers_pair(c, a, b)))
            .collect();
        let mut options: Vec<Covering> = Vec::new();
        for cov in end_cov.into_iter().chain(candidates) {
            if !options.iter().any(|o| same_covering(o, &cov)) {
                options.push(cov);
            }
        }
        zero_options = options.len().max(1);
        if let Some(&cov) = options.get(pick) {
            for (p, q) in z.segments() {
                let mid = LatticePoint::new((p.u + q.u) / 2, (p.v + q.v) / 2);
                for x in [p, mid, q] {
                    assign(castle, &mut chosen, x, cov, VertexRule::ZeroLine);
                }
            }
        }
    }

    // straight lines: blacks from the first side's covering, whites from the
    // second's; a line running into a zero side yields the shared corner to
    // the other line
    let mut lines: Vec<&Border> = map.straight_lines().collect();
    lines.sort_by_key(|b| match b.kind {
        BorderKind::StraightLine { first } => castle.contour.sides[(first + 1) % 6] == 0,
        _ => false,
    });
    for b in lines {
        let BorderKind::StraightLine { first } = b.kind else {
            unreachable!()
        };
        let second = (first + 1) % 6;
        let m_black = covering(first, signs[first]);
        let m_white = covering(second, signs[second]);
        for (p, q) in b.segments() {
            let mid = LatticePoint::new((p.u + q.u) / 2, (p.v + q.v) / 2);
            assign(castle, &mut chosen, mid, m_black, VertexRule::StraightLine);
            assign(castle, &mut chosen, p, m_white, VertexRule::StraightLine);
            assign(castle, &mut chosen, q, m_white, VertexRule::StraightLine);
        }
        if b.path.len() == 1 {
            assign(
                castle,
                &mut chosen,
                b.path[0],
                m_white,
                VertexRule::StraightLine,
            );
        }
    }
    (chosen, zero_options)
}

fn assign(
    castle: &Castle,
    chosen: &mut [Option<(Covering, VertexRule)>],
    p: LatticePoint,
    cov: Covering,
    rule: VertexRule,
) {
    if let Some(v) = castle.vertex_index(p) {
        if chosen[v].is_none() {
            chosen[v] = Some((cov, rule));
        }
    }
}

/// Outcome of the per-region checks on a constructed matching.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub perfect: bool,
    pub interior_twistable: usize,
    pub straight_line_matched_edges: usize,
    pub straight_line_twistable: usize,
    pub staircase_positive: usize,
    pub zero_line_positive: usize,
    pub positive_total: usize,
}

impl LemmaReport {
    pub fn all_hold(&self) -> bool {
        self.perfect
            && self.interior_twistable == 0
            && self.straight_line_matched_edges == 0
            && self.straight_line_twistable == 0
            && self.staircase_positive == 0
            && self.zero_line_positive == 0
            && self.positive_total == 0
    }
}

/// Check the local statements about the constructed matching: perfect
/// cover, no twistable kite inside a sector or on a straight line, no
/// matched edge along a straight line, and only negative twistable kites on
/// staircases and the zero line.
pub fn check_lemmas(castle: &Castle, built: &MinimalConstruction) -> LemmaReport {
    let m = &built.matching;
    let map = &built.sectors;
    // a kite lies along a border when one of its long edges is on it
    let touches = |f: &crate::castle::CastleFace, b: &Border| {
        let [h, m1, _, m2] = f.id.vertices();
        b.segments()
            .any(|(p, q)| on_segment(p, q, h) && (on_segment(p, q, m1) || on_segment(p, q, m2)))
    };
    let mut r = LemmaReport {
        perfect: m.is_perfect(castle),
        ..Default::default()
    };
    for (face, t) in twistable_faces(castle, m) {
        let f = &castle.faces[face];
        let positive = t == Twist::Positive;
        if positive {
            r.positive_total += 1;
        }
        let kinds: Vec<BorderKind> = map
            .borders
            .iter()
            .filter(|b| touches(f, b))
            .map(|b| b.kind)
            .collect();
        let on_border = !kinds.is_empty();
        let line_only = on_border
            && kinds
                .iter()
                .all(|k| matches!(k, BorderKind::StraightLine { .. }));
        if line_only {
            // at an intersection point the face belongs to the staircase or
            // zero line it also touches
            r.straight_line_twistable += 1;
        }
        if positive {
            for k in &kinds {
                match k {
                    BorderKind::Staircase { .. } => r.staircase_positive += 1,
                    BorderKind::ZeroLine => r.zero_line_positive += 1,
                    _ => {}
                }
            }
        }
        if !on_border {
            r.interior_twistable += 1;
        }
    }
    for b in map.straight_lines() {
        for &e in &m.edges {
            let (w, k) = castle.edge_points(e);
            if b.segments()
                .any(|(p, q)| on_segment(p, q, w) && on_segment(p, q, k))
            {
                r.straight_line_matched_edges += 1;
            }
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiling::DP3_LABELS;

    #[test]
    fn table_redundancy() {
        assert!(coverings_are_redundant());
    }

    #[test]
    fn table_rows_are_periodic_matchings() {
        for s in 0..6 {
            for g in [Sign::Plus, Sign::Minus] {
                assert!(
                    is_periodic_matching(&covering(s, g), DP3_LABELS),
                    "side {s} {g:?}"
                );
            }
        }
    }

    #[test]
    fn zero_line_choice_is_unique() {
        for (i, j, k) in [
            (4, 3, 2),
            (2, 3, 5),
            (0, 4, 4),
            (1, 1, 1),
            (-1, 2, 2),
            (2, -1, 1),
        ] {
            let c = crate::castle::build_castle(i, j, k)
                .unwrap()
                .trim_dangling();
            let map = sector_division(&c).unwrap();
            let mut found: Vec<Matching> = Vec::new();
            let mut pick = 0;
            loop {
                let (plan, options) = plan_with(&c, &map, pick);
                if let Ok(m) = resolve_partners(&c, &plan) {
                    found.push(m);
                }
                pick += 1;
                if pick >= options {
                    break;
                }
            }
            found.dedup();
            assert_eq!(found.len(), 1, "({i},{j},{k})");
        }
    }

    #[test]
    fn identities_hold() {
        for (i, j, k) in [(5, 0, 2), (-4, 1, 2), (0, 0, 0), (3, -7, 9)] {
            assert!(zero_line_identities(i, j, k).iter().all(|&b| b));
        }
    }
}
