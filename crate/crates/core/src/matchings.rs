//! Perfect matchings of castles: enumeration, weights, twists and heights.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::castle::Castle;
use crate::error::{Error, Result};
use crate::poly::{LaurentPoly, Monomial, Var};
use crate::tiling::{edge_faces, orient, FaceId, LatticePoint};

/// Default cap on the number of matchings an exhaustive routine may visit.
pub const DEFAULT_CAP: usize = 2_000_000;

/// Environment variable overriding [`DEFAULT_CAP`].
pub const CAP_ENV: &str = "AZTEC_MATCHING_CAP";

pub fn cap_from_env() -> usize {
    std::env::var(CAP_ENV)
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_CAP)
}

/// A perfect matching as a sorted list of castle edge indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Matching {
    pub edges: Vec<usize>,
}

impl Matching {
    pub fn new(mut edges: Vec<usize>) -> Matching {
        edges.sort_unstable();
        Matching { edges }
    }

    pub fn contains(&self, e: usize) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn mask(&self, num_edges: usize) -> Vec<bool> {
        let mut m = vec![false; num_edges];
        for &e in &self.edges {
            m[e] = true;
        }
        m
    }

    /// Every vertex covered exactly once.
    pub fn is_perfect(&self, c: &Castle) -> bool {
        let mut hit = vec![0u8; c.vertices.len()];
        for &e in &self.edges {
            hit[c.edges[e].white] += 1;
            hit[c.edges[e].black] += 1;
        }
        hit.iter().all(|&h| h == 1)
    }
}

/// Calls `visit` on every perfect matching; fails once more than `cap` have
/// been seen. Returns the number of matchings.
pub fn for_each_matching<F>(c: &Castle, cap: usize, mut visit: F) -> Result<usize>
where
    F: FnMut(&[usize]),
{
    if !c.is_balanced() {
        return Ok(0);
    }
    let adj = c.adjacency();
    let mut covered = vec![false; c.vertices.len()];
    let mut stack = Vec::with_capacity(c.vertices.len() / 2);
    let mut count = 0usize;
    search(&adj, &mut covered, &mut stack, &mut count, cap, &mut visit)?;
    Ok(count)
}

fn search<F>(
    adj: &[Vec<(usize, usize)>],
    covered: &mut [bool],
    stack: &mut Vec<usize>,
    count: &mut usize,
    cap: usize,
    visit: &mut F,
) -> Result<()>
where
    F: FnMut(&[usize]),
{
    // branch on the uncovered vertex with the fewest free neighbours
    let mut best: Option<(usize, usize)> = None;
    for v in 0..covered.len() {
        if covered[v] {
            continue;
        }
        let free = adj[v].iter().filter(|(_, w)| !covered[*w]).count();
        if free == 0 {
            return Ok(());
        }
        if best.is_none_or(|(_, f)| free < f) {
            best = Some((v, free));
            if free == 1 {
                break;
            }
        }
    }
    let Some((v, _)) = best else {
        *count += 1;
        if *count > cap {
            return Err(Error::TooLarge { cap });
        }
        let mut m = stack.clone();
        m.sort_unstable();
        visit(&m);
        return Ok(());
    };
    covered[v] = true;
    for &(e, w) in &adj[v] {
        if covered[w] {
            continue;
        }
        covered[w] = true;
        stack.push(e);
        search(adj, covered, stack, count, cap, visit)?;
        stack.pop();
        covered[w] = false;
    }
    covered[v] = false;
    Ok(())
}

pub fn enumerate(c: &Castle, cap: usize) -> Result<Vec<Matching>> {
    let mut out = Vec::new();
    for_each_matching(c, cap, |m| out.push(Matching { edges: m.to_vec() }))?;
    out.sort();
    Ok(out)
}

pub fn count(c: &Castle, cap: usize) -> Result<usize> {
    for_each_matching(c, cap, |_| {})
}

/// Largest matrix side [`permanent_count`] will expand.
pub const PERMANENT_MAX: usize = 24;

/// Number of perfect matchings as the permanent of the biadjacency matrix
/// (Ryser's formula); independent of the enumerator. `None` above
/// [`PERMANENT_MAX`] vertices of each color.
pub fn permanent_count(c: &Castle) -> Option<BigInt> {
    let whites: Vec<usize> = (0..c.vertices.len())
        .filter(|&v| c.vertices[v].color == crate::tiling::Color::White)
        .collect();
    let blacks: Vec<usize> = (0..c.vertices.len())
        .filter(|&v| c.vertices[v].color == crate::tiling::Color::Black)
        .collect();
    if whites.len() != blacks.len() {
        return Some(BigInt::from(0));
    }
    let n = whites.len();
    if n > PERMANENT_MAX {
        return None;
    }
    let bidx: HashMap<usize, usize> = blacks.iter().enumerate().map(|(n, &b)| (b, n)).collect();
    let widx: HashMap<usize, usize> = whites.iter().enumerate().map(|(n, &w)| (w, n)).collect();
    let mut rows = vec![0u32; n];
    for e in &c.edges {
        rows[widx[&e.white]] |= 1 << bidx[&e.black];
    }
    let mut total = BigInt::from(0);
    for subset in 1u32..(1u32 << n) {
        let mut prod = BigInt::from(1);
        for row in &rows {
            let k = (row & subset).count_ones();
            if k == 0 {
                prod = BigInt::from(0);
                break;
            }
            prod *= k;
        }
        if (n as u32 - subset.count_ones()).is_multiple_of(2) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    Some(if n == 0 { BigInt::from(1) } else { total })
}

/// `prod x_label^(1 - matched edges on the kite)` over the enclosed kites,
/// counting edges forced while trimming.
pub fn weight(c: &Castle, m: &Matching) -> Monomial {
    let mask = m.mask(c.edges.len());
    let mut exps = [0i32; crate::poly::NUM_VARS];
    for f in &c.faces {
        let matched = f.present_edges().filter(|&e| mask[e]).count() as i32 + f.forced as i32;
        exps[Var::x(f.label as usize).index()] += 1 - matched;
    }
    Monomial::from_exponents(exps)
}

pub fn weighted_sum(c: &Castle, cap: usize) -> Result<LaurentPoly> {
    let mut acc: HashMap<Monomial, u64> = HashMap::new();
    for_each_matching(c, cap, |edges| {
        let m = Matching {
            edges: edges.to_vec(),
        };
        *acc.entry(weight(c, &m)).or_insert(0) += 1;
    })?;
    Ok(LaurentPoly::from_terms(
        acc.into_iter().map(|(m, k)| (m, BigInt::from(k))),
    ))
}

/// Orientation of a twistable kite in a matching.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Twist {
    /// Matched edges are midpoint-centroid and midpoint-apex (kite edges 1, 3).
    Positive,
    /// Matched edges are apex-midpoint and centroid-midpoint (kite edges 0, 2).
    Negative,
}

/// Kites with all four edges in the castle and exactly two of them matched,
/// as `(face index, orientation)`.
pub fn twistable_faces(c: &Castle, m: &Matching) -> Vec<(usize, Twist)> {
    let mask = m.mask(c.edges.len());
    let mut out = Vec::new();
    for (n, f) in c.faces.iter().enumerate() {
        if !f.is_full() {
            continue;
        }
        let e = f.edges.map(|e| mask[e.unwrap()]);
        if e[1] && e[3] {
            out.push((n, Twist::Positive));
        } else if e[0] && e[2] {
            out.push((n, Twist::Negative));
        }
    }
    out
}

/// Swap the two matched edges of a twistable kite for the other two.
pub fn twist(c: &Castle, m: &Matching, face: usize) -> Result<Matching> {
    let f = c.faces.get(face).ok_or(Error::NotTwistable)?;
    if !f.is_full() {
        return Err(Error::NotTwistable);
    }
    let e = f.edges.map(Option::unwrap);
    let has = e.map(|x| m.contains(x));
    let (drop, add) = if has[1] && has[3] {
        ([e[1], e[3]], [e[0], e[2]])
    } else if has[0] && has[2] {
        ([e[0], e[2]], [e[1], e[3]])
    } else {
        return Err(Error::NotTwistable);
    };
    let edges = m
        .edges
        .iter()
        .copied()
        .filter(|x| !drop.contains(x))
        .chain(add)
        .collect();
    Ok(Matching::new(edges))
}

/// The minimal matching found by enumeration: the unique one without a
/// positive twistable kite.
pub fn minimal_matching_bruteforce(c: &Castle, cap: usize) -> Result<Matching> {
    let mut found = Vec::new();
    for_each_matching(c, cap, |edges| {
        let m = Matching {
            edges: edges.to_vec(),
        };
        if twistable_faces(c, &m)
            .iter()
            .all(|(_, t)| *t == Twist::Negative)
        {
            found.push(m);
        }
    })?;
    match found.len() {
        0 => Err(Error::NoMatching),
        1 => Ok(found.pop().unwrap()),
        n => Err(Error::ConstructionGap(format!(
            "{n} matchings without positive faces"
        ))),
    }
}

/// Minimal matching by repeatedly twisting a positive kite down, starting
/// from any matching. Suited to castles too large to enumerate.
pub fn minimal_matching_descent(c: &Castle) -> Result<Matching> {
    let mut start = None;
    // cap 1: stop right after the first matching
    let _ = for_each_matching(c, 1, |edges| {
        start = Some(Matching {
            edges: edges.to_vec(),
        })
    });
    let mut m = start.ok_or(Error::NoMatching)?;
    loop {
        let Some(&(face, _)) = twistable_faces(c, &m)
            .iter()
            .find(|(_, t)| *t == Twist::Positive)
        else {
            return Ok(m);
        };
        m = twist(c, &m, face)?;
    }
}

/// `prod y_label^h(face)` where `h(face)` is the winding number around the
/// kite of `m` (edges black to white) superposed with `minimal` (white to
/// black).
pub fn height(c: &Castle, m: &Matching, minimal: &Matching) -> Monomial {
    let mut oriented: Vec<(LatticePoint, LatticePoint)> = Vec::new();
    for &e in &m.edges {
        if !minimal.contains(e) {
            let (w, b) = c.edge_points(e);
            oriented.push((b, w));
        }
    }
    for &e in &minimal.edges {
        if !m.contains(e) {
            oriented.push(c.edge_points(e));
        }
    }
    let mut exps = [0i32; crate::poly::NUM_VARS];
    if oriented.is_empty() {
        return Monomial::one();
    }
    for f in &c.faces {
        let p = f.id.sample_point();
        let w = winding(&oriented, p);
        exps[Var::y(f.label as usize).index()] += w as i32;
    }
    Monomial::from_exponents(exps)
}

fn winding(segments: &[(LatticePoint, LatticePoint)], p: LatticePoint) -> i64 {
    let mut w = 0;
    for &(a, b) in segments {
        if a.v <= p.v {
            if b.v > p.v && orient(a, b, p) > 0 {
                w += 1;
            }
        } else if b.v <= p.v && orient(a, b, p) < 0 {
            w -= 1;
        }
    }
    w
}

/// Heights in one pass per matching. Crossing castle edge `e` from the kite
/// on its left (walking white to black) to the kite on its right raises the
/// winding number by `m(e) - minimal(e)`; kites outside the contour have
/// height zero. Agrees with [`height`].
#[derive(Clone, Debug)]
pub struct HeightTree {
    /// `(face, parent, edge crossed, sign)` in breadth-first order; a `None`
    /// parent is the outside.
    steps: Vec<(usize, Option<usize>, Option<usize>, i32)>,
    labels: Vec<u8>,
}

impl HeightTree {
    pub fn new(c: &Castle) -> HeightTree {
        let index: HashMap<FaceId, usize> =
            c.faces.iter().enumerate().map(|(n, f)| (f.id, n)).collect();
        // (neighbour, edge, sign of h(neighbour) - h(face))
        let neighbours = |f: usize| -> Vec<(Option<usize>, Option<usize>, i32)> {
            let vs = c.faces[f].id.vertices();
            (0..4)
                .map(|n| {
                    let (a, b) = (vs[n], vs[(n + 1) % 4]);
                    let ef = edge_faces(a, b).expect("kite edges join two kites");
                    let (other, sign) = if ef.left == c.faces[f].id {
                        (ef.right, 1)
                    } else {
                        (ef.left, -1)
                    };
                    (index.get(&other).copied(), c.edge_index(a, b), sign)
                })
                .collect()
        };
        let mut seen = vec![false; c.faces.len()];
        let mut steps = Vec::with_capacity(c.faces.len());
        let mut queue = VecDeque::new();
        #[allow(clippy::needless_range_loop)]
        for f in 0..c.faces.len() {
            if let Some((_, e, sign)) = neighbours(f).into_iter().find(|(g, _, _)| g.is_none()) {
                seen[f] = true;
                steps.push((f, None, e, -sign));
                queue.push_back(f);
            }
        }
        while let Some(f) = queue.pop_front() {
            for (g, e, sign) in neighbours(f) {
                if let Some(g) = g.filter(|&g| !seen[g]) {
                    seen[g] = true;
                    steps.push((g, Some(f), e, sign));
                    queue.push_back(g);
                }
            }
        }
        debug_assert!(
            seen.iter().all(|&s| s),
            "castle kites are connected to the outside"
        );
        HeightTree {
            steps,
            labels: c.faces.iter().map(|f| f.label).collect(),
        }
    }

    /// Same as [`height`], given both matchings as edge masks.
    pub fn height(&self, m: &[bool], minimal: &[bool]) -> Monomial {
        let mut h = vec![0i32; self.labels.len()];
        let mut exps = [0i32; crate::poly::NUM_VARS];
        for &(f, parent, e, sign) in &self.steps {
            let d = e.map_or(0, |e| m[e] as i32 - minimal[e] as i32);
            h[f] = parent.map_or(0, |p| h[p]) + sign * d;
            exps[Var::y(self.labels[f] as usize).index()] += h[f];
        }
        Monomial::from_exponents(exps)
    }
}

/// `sum x^weight * y^height` over all perfect matchings.
pub fn weighted_sum_framed(c: &Castle, cap: usize) -> Result<LaurentPoly> {
    let minimal = minimal_matching_bruteforce(c, cap).or_else(|e| match e {
        Error::NoMatching if c.vertices.is_empty() => Ok(Matching { edges: vec![] }),
        e => Err(e),
    })?;
    let tree = HeightTree::new(c);
    let min_mask = minimal.mask(c.edges.len());
    let mut acc: HashMap<Monomial, u64> = HashMap::new();
    for_each_matching(c, cap, |edges| {
        let m = Matching {
            edges: edges.to_vec(),
        };
        let mono = weight(c, &m).mul(&tree.height(&m.mask(c.edges.len()), &min_mask));
        *acc.entry(mono).or_insert(0) += 1;
    })?;
    Ok(LaurentPoly::from_terms(
        acc.into_iter().map(|(m, k)| (m, BigInt::from(k))),
    ))
}

/// Hasse diagram of the twist order; `covers` holds `(upper, lower)` pairs
/// where `lower` is `upper` with one positive kite twisted down.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistLattice {
    pub matchings: Vec<Matching>,
    pub covers: Vec<(usize, usize)>,
    pub minimum: Option<usize>,
    pub maximum: Option<usize>,
    /// Distance from the minimum in twist-ups; `None` if unreachable.
    pub rank: Vec<Option<usize>>,
}

pub fn twist_lattice(c: &Castle, cap: usize) -> Result<TwistLattice> {
    let matchings = enumerate(c, cap)?;
    let index: HashMap<&Matching, usize> =
        matchings.iter().enumerate().map(|(n, m)| (m, n)).collect();
    let mut covers = Vec::new();
    let mut minima = Vec::new();
    let mut maxima = Vec::new();
    for (n, m) in matchings.iter().enumerate() {
        let tw = twistable_faces(c, m);
        if tw.iter().all(|(_, t)| *t == Twist::Negative) {
            minima.push(n);
        }
        if tw.iter().all(|(_, t)| *t == Twist::Positive) {
            maxima.push(n);
        }
        for (face, t) in tw {
            if t == Twist::Positive {
                let lower = twist(c, m, face)?;
                covers.push((n, index[&lower]));
            }
        }
    }
    covers.sort_unstable();
    let mut up: Vec<Vec<usize>> = vec![Vec::new(); matchings.len()];
    for &(u, l) in &covers {
        up[l].push(u);
    }
    let mut rank = vec![None; matchings.len()];
    let minimum = if minima.len() == 1 {
        Some(minima[0])
    } else {
        None
    };
    let maximum = if maxima.len() == 1 {
        Some(maxima[0])
    } else {
        None
    };
    if let Some(start) = minimum {
        rank[start] = Some(0);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &u in &up[v] {
                if rank[u].is_none() {
                    rank[u] = Some(rank[v].unwrap() + 1);
                    queue.push_back(u);
                }
            }
        }
    }
    Ok(TwistLattice {
        matchings,
        covers,
        minimum,
        maximum,
        rank,
    })
}

impl TwistLattice {
    /// Unique minimum and maximum, every matching reachable, and every cover
    /// relation raises the rank by exactly one.
    pub fn is_graded_with_bounds(&self) -> bool {
        self.minimum.is_some()
            && self.maximum.is_some()
            && self.rank.iter().all(Option::is_some)
            && self
                .covers
                .iter()
                .all(|&(u, l)| self.rank[u].unwrap() == self.rank[l].unwrap() + 1)
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph twists {\n  rankdir=BT;\n");
        for (n, r) in self.rank.iter().enumerate() {
            let r = r.map_or("?".to_string(), |r| r.to_string());
            let _ = writeln!(s, "  m{n} [label=\"{n} (rank {r})\"];");
        }
        for &(u, l) in &self.covers {
            let _ = writeln!(s, "  m{l} -> m{u};");
        }
        s.push_str("}\n");
        s
    }
}
