//! Prism walk: the tau operations as reflections of a unit prism in Z^3.
//!
//! Labels 1, 2 / 3, 4 / 5, 6 always share their (x, y) position; labels
//! {1, 4, 5} and {2, 3, 6} form the two triangular ends of the prism.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::poly::LaurentPoly;
use crate::quiver::Seed;

pub type Point3 = [i64; 3];

/// Labels on each end of the prism.
pub const END_A: [usize; 3] = [1, 4, 5];
pub const END_B: [usize; 3] = [2, 3, 6];

/// Initial positions of labels 1..6.
pub const INITIAL_POSITIONS: [Point3; 6] = [
    [0, -1, 1],
    [0, -1, 0],
    [-1, 0, 0],
    [-1, 0, 1],
    [0, 0, 1],
    [0, 0, 0],
];

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrismState {
    /// `positions[l - 1]` is the point of label `l`.
    pub positions: [Point3; 6],
}

impl PrismState {
    pub fn initial() -> PrismState {
        PrismState {
            positions: INITIAL_POSITIONS,
        }
    }

    pub fn position(&self, label: usize) -> Point3 {
        self.positions[label - 1]
    }

    /// tau_1..tau_3 reflect the vertical edge {2t-1, 2t} through the center of
    /// the opposite rectangle in the (x, y) plane; tau_4 / tau_5 reflect the
    /// end {1,4,5} / {2,3,6} through the other end along z.
    pub fn apply_tau(&self, t: u8) -> PrismState {
        let mut pos = self.positions;
        match t {
            1..=3 => {
                let moving = [2 * t as usize - 1, 2 * t as usize];
                let others: Vec<usize> = (1..=6).filter(|l| !moving.contains(l)).collect();
                let sx: i64 = others.iter().map(|&l| self.position(l)[0]).sum();
                let sy: i64 = others.iter().map(|&l| self.position(l)[1]).sum();
                // 2 * center = sum / 2 over the four rectangle corners
                for l in moving {
                    let p = self.position(l);
                    pos[l - 1] = [sx / 2 - p[0], sy / 2 - p[1], p[2]];
                }
            }
            4 | 5 => {
                let (moving, fixed) = if t == 4 {
                    (END_A, END_B)
                } else {
                    (END_B, END_A)
                };
                let zf = self.position(fixed[0])[2];
                for l in moving {
                    let p = self.position(l);
                    pos[l - 1] = [p[0], p[1], 2 * zf - p[2]];
                }
            }
            _ => panic!("tau index {t} out of range"),
        }
        PrismState { positions: pos }
    }

    pub fn apply_word(&self, word: &[u8]) -> PrismState {
        word.iter().fold(self.clone(), |p, &t| p.apply_tau(t))
    }

    /// Labels placed at `target`, ascending.
    pub fn labels_at(&self, target: Point3) -> Vec<usize> {
        (1..=6).filter(|&l| self.position(l) == target).collect()
    }

    /// Sorted multiset of squared pairwise distances; invariant under isometry.
    pub fn distance_profile(&self) -> Vec<i64> {
        let mut d = Vec::new();
        for a in 0..6 {
            for b in a + 1..6 {
                let p = self.positions[a];
                let q = self.positions[b];
                d.push((0..3).map(|i| (p[i] - q[i]).pow(2)).sum());
            }
        }
        d.sort();
        d
    }
}

pub fn tau_on_prism(p: &PrismState, t: u8) -> PrismState {
    p.apply_tau(t)
}

/// Plan a tau-word carrying some label to `target`.
///
/// The (x, y) cross-section is solved by breadth-first search over tau_1..tau_3
/// (which leave z alone), the z coordinate by alternating tau_4 / tau_5.
/// Of the two labels of the pair landing on `(x, y)` exactly one has the
/// parity of `target`'s z, since each prism end only visits one parity.
pub fn tau_word_to_point(target: Point3) -> (Vec<u8>, usize) {
    let start = PrismState::initial();
    let xy = [target[0], target[1]];
    let (xy_word, pair) = plan_cross_section(&start, xy);
    let placed = start.apply_word(&xy_word);
    let mut best: Option<(Vec<u8>, usize)> = None;
    for label in pair {
        let Some(word) = plan_height(&placed, label, target[2]) else {
            continue;
        };
        let better = match &best {
            None => true,
            Some((w, l)) => word.len() < w.len() || (word.len() == w.len() && label < *l),
        };
        if better {
            best = Some((word, label));
        }
    }
    let (z_word, label) = best.unwrap();
    let mut word = xy_word;
    word.extend(z_word);
    (word, label)
}

fn xy_key(p: &PrismState) -> [[i64; 2]; 3] {
    [1usize, 3, 5].map(|l| [p.position(l)[0], p.position(l)[1]])
}

fn plan_cross_section(start: &PrismState, xy: [i64; 2]) -> (Vec<u8>, [usize; 2]) {
    let hit = |p: &PrismState| -> Option<[usize; 2]> {
        [[1usize, 2], [3, 4], [5, 6]]
            .into_iter()
            .find(|pair| [p.position(pair[0])[0], p.position(pair[0])[1]] == xy)
    };
    if let Some(pair) = hit(start) {
        return (Vec::new(), pair);
    }
    let mut seen: HashMap<[[i64; 2]; 3], (Vec<u8>, PrismState)> = HashMap::new();
    let mut queue = VecDeque::new();
    seen.insert(xy_key(start), (Vec::new(), start.clone()));
    queue.push_back(xy_key(start));
    while let Some(key) = queue.pop_front() {
        let (word, state) = seen[&key].clone();
        for t in 1..=3u8 {
            let next = state.apply_tau(t);
            let nk = xy_key(&next);
            if seen.contains_key(&nk) {
                continue;
            }
            let mut nw = word.clone();
            nw.push(t);
            if let Some(pair) = hit(&next) {
                return (nw, pair);
            }
            seen.insert(nk, (nw, next));
            queue.push_back(nk);
        }
    }
    unreachable!("every lattice point is reachable in the cross-section")
}

fn plan_height(p: &PrismState, label: usize, z: i64) -> Option<Vec<u8>> {
    let (own_tau, other_tau, other) = if END_A.contains(&label) {
        (4, 5, END_B[0])
    } else {
        (5, 4, END_A[0])
    };
    // each end only ever visits one parity of z
    if (p.position(label)[2] - z).rem_euclid(2) != 0 {
        return None;
    }
    let mut state = p.clone();
    let mut word = Vec::new();
    while state.position(label)[2] != z {
        let zl = state.position(label)[2];
        let zo = state.position(other)[2];
        let t = if (zo - zl).signum() == (z - zl).signum() {
            own_tau
        } else {
            other_tau
        };
        state = state.apply_tau(t);
        word.push(t);
    }
    Some(word)
}

/// Replays the planned word from the initial seed and returns the variable
/// at the label that lands on `target`.
pub fn cluster_var_at_point(target: Point3, framed: bool) -> Result<LaurentPoly> {
    let (word, label) = tau_word_to_point(target);
    let seed = Seed::initial(framed).apply_word(&word)?;
    debug_assert_eq!(seed.prism.position(label), target);
    Ok(seed.variable(label).clone())
}

/// Memoizing oracle for many points: seeds are cached by tau-word prefix.
#[derive(Debug)]
pub struct ClusterOracle {
    framed: bool,
    cache: HashMap<Vec<u8>, Seed>,
}

impl ClusterOracle {
    pub fn new(framed: bool) -> Self {
        let mut cache = HashMap::new();
        cache.insert(Vec::new(), Seed::initial(framed));
        ClusterOracle { framed, cache }
    }

    pub fn is_framed(&self) -> bool {
        self.framed
    }

    pub fn seed_for_word(&mut self, word: &[u8]) -> Result<Seed> {
        let mut depth = word.len();
        while !self.cache.contains_key(&word[..depth]) {
            depth -= 1;
        }
        let mut seed = self.cache[&word[..depth]].clone();
        for d in depth..word.len() {
            seed = seed.apply_tau(word[d])?;
            self.cache.insert(word[..=d].to_vec(), seed.clone());
        }
        Ok(seed)
    }

    pub fn at(&mut self, target: Point3) -> Result<LaurentPoly> {
        let (word, label) = tau_word_to_point(target);
        let seed = self.seed_for_word(&word)?;
        Ok(seed.variable(label).clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_on_prism_is_involution() {
        let p = PrismState::initial();
        for t in 1..=5 {
            assert_eq!(p.apply_tau(t).apply_tau(t), p);
        }
    }

    #[test]
    fn tau1_moves_only_edge_12() {
        let p = PrismState::initial();
        let q = p.apply_tau(1);
        for l in 3..=6 {
            assert_eq!(p.position(l), q.position(l));
        }
        assert_eq!(q.position(1), [-1, 1, 1]);
        assert_eq!(q.position(2), [-1, 1, 0]);
    }

    #[test]
    fn tau4_changes_only_z() {
        let p = PrismState::initial();
        let q = p.apply_tau(4);
        for l in 1..=6 {
            assert_eq!(p.position(l)[..2], q.position(l)[..2]);
        }
        assert_eq!(q.position(1)[2], -1);
        assert_eq!(q.position(2)[2], 0);
    }

    #[test]
    fn initial_points_need_no_word() {
        assert_eq!(tau_word_to_point([0, -1, 1]), (vec![], 1));
        assert_eq!(tau_word_to_point([0, 0, 0]), (vec![], 6));
        assert_eq!(tau_word_to_point([-1, 0, 1]), (vec![], 4));
    }

    #[test]
    fn planned_words_replay() {
        for x in -4..=4 {
            for y in -4..=4 {
                for z in -4..=4 {
                    let (w, l) = tau_word_to_point([x, y, z]);
                    let p = PrismState::initial().apply_word(&w);
                    assert_eq!(p.position(l), [x, y, z]);
                    assert!(w.len() as i64 <= 4 * (x.abs() + y.abs() + z.abs()) + 4);
                }
            }
        }
    }

    #[test]
    fn isometry_preserved() {
        let p0 = PrismState::initial();
        let p = p0.apply_word(&[1, 4, 2, 3, 5, 5, 2, 1, 4, 3]);
        assert_eq!(p.distance_profile(), p0.distance_profile());
    }
}
