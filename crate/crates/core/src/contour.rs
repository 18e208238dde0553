//! Six-sided contours on the triangular lattice of hexagon centers.
//!
//! The point `(i, j, k)` gives side lengths
//! `(j+k, -i-j-k, i+k, j+1-k, -i-j-1+k, i+1-k)`. Side `s` runs along lattice
//! direction `SIDE_A_DIRECTION - s` (clockwise steps of 60 degrees); a
//! negative length is walked backwards and a zero length is skipped.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::tiling::{orient, LatticePoint, DIRECTIONS};

/// Lattice direction index of side `a`.
pub const SIDE_A_DIRECTION: usize = 0;

pub const SIDE_NAMES: [char; 6] = ['a', 'b', 'c', 'd', 'e', 'f'];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn of(n: i64) -> Option<Sign> {
        match n.signum() {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignPattern(pub [Sign; 6]);

impl SignPattern {
    pub fn parse(s: &str) -> Option<SignPattern> {
        let signs: Vec<Sign> = s
            .chars()
            .filter_map(|c| match c {
                '+' => Some(Sign::Plus),
                '-' | '−' => Some(Sign::Minus),
                _ => None,
            })
            .collect();
        signs.try_into().ok().map(SignPattern)
    }

    pub fn sign_changes(&self) -> usize {
        (0..6).filter(|&s| self.0[s] != self.0[(s + 1) % 6]).count()
    }

    /// `(s1..s6) -> (s4, s5, s6, s1, s2, s3)`.
    pub fn shift3(&self) -> SignPattern {
        let s = self.0;
        SignPattern([s[3], s[4], s[5], s[0], s[1], s[2]])
    }

    /// Cyclic run lengths starting at the first run boundary, sorted so the
    /// result names the rotation orbit.
    pub fn orbit(&self) -> Option<Orbit> {
        if self.sign_changes() != 4 {
            return None;
        }
        let start = (0..6).find(|&s| self.0[s] != self.0[(s + 5) % 6]).unwrap();
        let mut runs = Vec::new();
        let mut len = 1;
        for step in 1..=6 {
            let s = (start + step) % 6;
            if step < 6 && self.0[s] == self.0[(s + 5) % 6] {
                len += 1;
            } else {
                runs.push(len);
                len = 1;
            }
        }
        if runs.contains(&3) {
            Some(Orbit::Blue)
        } else if (0..4).any(|r| runs[r] == 2 && runs[(r + 1) % 4] == 2) {
            Some(Orbit::Pink)
        } else {
            Some(Orbit::White)
        }
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (idx, s) in self.0.iter().enumerate() {
            if idx > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", s.symbol())?;
        }
        write!(f, ")")
    }
}

/// The three rotation classes of generic sign patterns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orbit {
    /// Runs of length 2,1,2,1.
    White,
    /// Runs of length 2,2,1,1.
    Pink,
    /// Runs of length 3,1,1,1.
    Blue,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contour {
    pub point: (i64, i64, i64),
    pub sides: [i64; 6],
    /// `corners[s]` is where side `s` starts; `corners[6] == corners[0]`.
    pub corners: [LatticePoint; 7],
    /// Every hexagon center visited, in order, closed (last == first).
    pub polyline: Vec<LatticePoint>,
    pub signs: SignPattern,
}

pub fn side_lengths(i: i64, j: i64, k: i64) -> [i64; 6] {
    [
        j + k,
        -i - j - k,
        i + k,
        j + 1 - k,
        -i - j - 1 + k,
        i + 1 - k,
    ]
}

pub fn side_direction(side: usize) -> LatticePoint {
    DIRECTIONS[side_direction_index(SIDE_A_DIRECTION, side)]
}

/// Lattice direction index of side `side` when side `a` runs along `dir_a`.
pub fn side_direction_index(dir_a: usize, side: usize) -> usize {
    (dir_a + 6 - side % 6) % 6
}

/// Signs for the sides; zero sides get the signs of the first assignment (in
/// side order, `+` before `-`) giving exactly four sign changes, or `+` when
/// no assignment does.
pub fn assign_signs(sides: &[i64; 6]) -> SignPattern {
    sign_assignments(sides)
        .into_iter()
        .next()
        .unwrap_or_else(|| zero_signs(sides, 0))
}

/// Every sign choice for the zero sides giving exactly four sign changes, in
/// the order [`assign_signs`] tries them.
pub fn sign_assignments(sides: &[i64; 6]) -> Vec<SignPattern> {
    let zeros = sides.iter().filter(|&&n| n == 0).count();
    (0..1u32 << zeros)
        .map(|mask| zero_signs(sides, mask))
        .filter(|p| p.sign_changes() == 4)
        .collect()
}

fn zero_signs(sides: &[i64; 6], mask: u32) -> SignPattern {
    let zeros: Vec<usize> = (0..6).filter(|&s| sides[s] == 0).collect();
    let mut out = [Sign::Plus; 6];
    for s in 0..6 {
        out[s] = Sign::of(sides[s]).unwrap_or(Sign::Plus);
    }
    for (bit, &s) in zeros.iter().enumerate() {
        // most significant bit goes to the earliest zero side so that
        // ascending masks try '+' first in side order
        if mask >> (zeros.len() - 1 - bit) & 1 == 1 {
            out[s] = Sign::Minus;
        }
    }
    SignPattern(out)
}

pub fn tuple_for_point(i: i64, j: i64, k: i64) -> Contour {
    contour_with_start(i, j, k, SIDE_A_DIRECTION)
}

/// Contour whose side `a` runs along lattice direction `dir_a`.
pub fn contour_with_start(i: i64, j: i64, k: i64, dir_a: usize) -> Contour {
    let sides = side_lengths(i, j, k);
    let mut corners = [LatticePoint::origin(); 7];
    let mut polyline = vec![LatticePoint::origin()];
    let mut cur = LatticePoint::origin();
    for s in 0..6 {
        corners[s] = cur;
        let step = DIRECTIONS[side_direction_index(dir_a, s)].scale(sides[s].signum());
        for _ in 0..sides[s].abs() {
            cur = cur.add(step);
            polyline.push(cur);
        }
    }
    corners[6] = cur;
    debug_assert_eq!(cur, LatticePoint::origin(), "contour does not close");
    Contour {
        point: (i, j, k),
        sides,
        corners,
        polyline,
        signs: assign_signs(&sides),
    }
}

impl Contour {
    pub fn closes(&self) -> bool {
        self.polyline.first() == self.polyline.last()
    }

    pub fn closure_holds(&self) -> bool {
        let [a, b, c, d, e, f] = self.sides;
        a + b == d + e && c + d == f + a
    }

    pub fn balance_holds(&self) -> bool {
        self.sides.iter().sum::<i64>() == 1
    }

    /// Twice the signed area; negative for clockwise traversal.
    pub fn signed_area2(&self) -> i64 {
        let p = &self.polyline;
        (0..p.len() - 1)
            .map(|n| p[n].u * p[n + 1].v - p[n + 1].u * p[n].v)
            .sum()
    }

    /// True when the closed polyline is not a simple polygon. Unit steps run
    /// along lattice lines, which meet only at hexagon centers, so the
    /// polygon is simple iff no center is visited twice and it encloses area.
    pub fn is_self_intersecting(&self) -> bool {
        let body = &self.polyline[..self.polyline.len() - 1];
        let mut seen = std::collections::HashSet::new();
        if !body.iter().all(|p| seen.insert(*p)) {
            return true;
        }
        self.signed_area2() == 0
    }

    /// Which side a polyline step belongs to.
    pub fn side_of_step(&self, step: usize) -> usize {
        let mut acc = 0usize;
        for s in 0..6 {
            acc += self.sides[s].unsigned_abs() as usize;
            if step < acc {
                return s;
            }
        }
        panic!("step {step} beyond contour length")
    }

    /// Exact point-in-polygon test; `None` when `p` lies on the contour.
    pub fn contains(&self, p: LatticePoint) -> Option<bool> {
        point_in_polygon(&self.polyline, p)
    }
}

/// Whether `p` lies on segment `a`-`b`.
pub fn on_segment(a: LatticePoint, b: LatticePoint, p: LatticePoint) -> bool {
    orient(a, b, p) == 0
        && p.u >= a.u.min(b.u)
        && p.u <= a.u.max(b.u)
        && p.v >= a.v.min(b.v)
        && p.v <= a.v.max(b.v)
}

/// Crossing-number test on a closed polyline (last point equals first).
/// Returns `None` for points on the boundary.
pub fn point_in_polygon(poly: &[LatticePoint], p: LatticePoint) -> Option<bool> {
    let mut inside = false;
    for n in 0..poly.len() - 1 {
        let (a, b) = (poly[n], poly[n + 1]);
        if on_segment(a, b, p) {
            return None;
        }
        if (a.v > p.v) != (b.v > p.v) {
            let o = orient(a, b, p);
            // crossing to the right of p
            if (o > 0) == (b.v > a.v) {
                inside = !inside;
            }
        }
    }
    Some(inside)
}

/// Winding number of a closed polyline around `p` (assumed off the curve).
pub fn winding_number(poly: &[LatticePoint], p: LatticePoint) -> i64 {
    let mut w = 0;
    for n in 0..poly.len() - 1 {
        let (a, b) = (poly[n], poly[n + 1]);
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

/// Named regions of the `k >= 1` half-space; `k <= 0` points are classified
/// through `(i, j, k) -> (i, j, 1 - k)`, which turns the contour by 180 degrees.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionName {
    R1,
    R1Prime,
    R2,
    R2Prime,
    R3,
    R3Prime,
}

impl RegionName {
    // bounds kept in the k - 1 form the regions are stated in
    #[allow(clippy::int_plus_one)]
    pub fn contains(self, i: i64, j: i64, k: i64) -> bool {
        if k < 1 {
            return false;
        }
        match self {
            RegionName::R1 => k - 1 <= i && k - 1 <= j,
            RegionName::R1Prime => k - 1 <= i + j && i <= -k,
            RegionName::R2 => -k <= i && i <= k - 1 && k - 1 <= j && k - 1 <= i + j,
            RegionName::R2Prime => i <= -k && -k <= i + j && i + j <= k - 1 && k - 1 <= j,
            RegionName::R3 => i <= k - 1 && j <= k - 1 && k - 1 <= i + j,
            RegionName::R3Prime => i + j <= k - 1 && k - 1 <= j && i >= -k,
        }
    }

    pub fn all() -> [RegionName; 6] {
        use RegionName::*;
        [R1, R1Prime, R2, R2Prime, R3, R3Prime]
    }
}

impl fmt::Display for RegionName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RegionName::R1 => "Region 1",
            RegionName::R1Prime => "Region 1'",
            RegionName::R2 => "Region 2",
            RegionName::R2Prime => "Region 2'",
            RegionName::R3 => "Region 3",
            RegionName::R3Prime => "Region 3'",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionInfo {
    /// Named regions containing the point (several on a shared boundary).
    pub names: Vec<RegionName>,
    /// Whether the names refer to the reflected point `(i, j, 1 - k)`.
    pub reflected: bool,
    pub orbit: Option<Orbit>,
    pub signs: SignPattern,
    pub self_intersecting: bool,
}

impl fmt::Display for RegionInfo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.self_intersecting {
            return write!(f, "self-intersecting");
        }
        if self.names.is_empty() {
            write!(f, "{:?} sibling", self.orbit)?;
        } else {
            let names: Vec<String> = self.names.iter().map(|n| n.to_string()).collect();
            write!(f, "{}", names.join(" ∩ "))?;
        }
        if self.reflected {
            write!(f, " (k <= 0)")?;
        }
        Ok(())
    }
}

pub fn classify_region(i: i64, j: i64, k: i64) -> RegionInfo {
    let c = tuple_for_point(i, j, k);
    let (kk, reflected) = if k >= 1 { (k, false) } else { (1 - k, true) };
    let names = RegionName::all()
        .into_iter()
        .filter(|r| r.contains(i, j, kk))
        .collect();
    RegionInfo {
        names,
        reflected,
        orbit: c.signs.orbit(),
        signs: c.signs,
        self_intersecting: c.is_self_intersecting(),
    }
}

pub fn is_self_intersecting(c: &Contour) -> bool {
    c.is_self_intersecting()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DragonKind {
    D,
    DPrime,
    DHalf,
    DPrimeHalf,
}

/// Castle coordinates of the Aztec dragons; the half-integer kinds give
/// order `n + 1/2`.
pub fn dragon(kind: DragonKind, n: i64) -> (i64, i64, i64) {
    match kind {
        DragonKind::D => (0, n, 1),
        DragonKind::DPrime => (0, n, 0),
        DragonKind::DHalf => (-1, n + 1, 0),
        DragonKind::DPrimeHalf => (-1, n + 1, 1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_tuples() {
        assert_eq!(tuple_for_point(-1, 3, 1).sides, [4, -3, 0, 3, -2, -1]);
        assert_eq!(tuple_for_point(4, 3, 2).sides, [5, -9, 6, 2, -6, 3]);
    }

    #[test]
    fn named_regions() {
        let r = classify_region(4, 3, 2);
        assert_eq!(r.names, vec![RegionName::R1]);
        assert_eq!(r.signs, SignPattern::parse("+-++-+").unwrap());
        assert_eq!(r.orbit, Some(Orbit::White));
        let r = classify_region(0, 4, 3);
        assert_eq!(r.names, vec![RegionName::R2]);
        assert_eq!(r.signs, SignPattern::parse("+-++--").unwrap());
        assert_eq!(r.orbit, Some(Orbit::Pink));
        let r = classify_region(2, 3, 5);
        assert_eq!(r.names, vec![RegionName::R3]);
        // the computed side signs are (8,-10,7,-1,-1,-2)
        assert_eq!(r.signs, SignPattern::parse("+-+---").unwrap());
        assert_eq!(r.orbit, Some(Orbit::Blue));
    }

    #[test]
    fn simple_contours() {
        assert!(!tuple_for_point(4, 3, 2).is_self_intersecting());
        assert!(!tuple_for_point(0, -1, 1).is_self_intersecting());
    }

    #[test]
    fn dragons() {
        assert_eq!(dragon(DragonKind::D, 5), (0, 5, 1));
        assert_eq!(dragon(DragonKind::DPrime, 5), (0, 5, 0));
        assert_eq!(dragon(DragonKind::DHalf, 4), (-1, 5, 0));
        assert_eq!(dragon(DragonKind::DPrimeHalf, 4), (-1, 5, 1));
    }

    #[test]
    fn zero_sides_get_four_changes() {
        // (0,0,1,-1,1,0): f, a, b are zero
        let p = assign_signs(&[0, 0, 1, -1, 1, 0]);
        assert_eq!(p.sign_changes(), 4);
        assert_eq!(p, SignPattern::parse("+++-+-").unwrap());
    }

    #[test]
    fn point_in_polygon_square() {
        let sq = [
            LatticePoint::new(0, 0),
            LatticePoint::new(6, 0),
            LatticePoint::new(6, 6),
            LatticePoint::new(0, 6),
            LatticePoint::new(0, 0),
        ];
        assert_eq!(point_in_polygon(&sq, LatticePoint::new(3, 3)), Some(true));
        assert_eq!(point_in_polygon(&sq, LatticePoint::new(7, 3)), Some(false));
        assert_eq!(point_in_polygon(&sq, LatticePoint::new(6, 3)), None);
        assert_eq!(winding_number(&sq, LatticePoint::new(3, 3)), 1);
        let rev: Vec<_> = sq.iter().rev().copied().collect();
        assert_eq!(winding_number(&rev, LatticePoint::new(3, 3)), -1);
    }
}
