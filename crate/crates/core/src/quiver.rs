//! The dP3 quiver, seed mutation and the five tau operations.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::LaurentPoly;
use crate::prism::PrismState;

/// Arrows of the dP3 quiver. Vertices `i` and `i^1` (1-2, 3-4, 5-6) are never
/// joined; every vertex has in-degree and out-degree 2.
pub const DP3_ARROWS: [(usize, usize); 12] = [
    (1, 4),
    (1, 6),
    (2, 3),
    (2, 5),
    (3, 1),
    (3, 6),
    (4, 2),
    (4, 5),
    (5, 1),
    (5, 3),
    (6, 2),
    (6, 4),
];

/// Mutation sequences of tau_1..tau_5, applied left to right.
pub const TAU_MUTATIONS: [&[usize]; 5] = [
    &[1, 2],
    &[3, 4],
    &[5, 6],
    &[1, 4, 1, 5, 1],
    &[2, 3, 2, 6, 2],
];

/// Relabeling cycles of tau_1..tau_5, applied after the mutations.
pub const TAU_CYCLES: [&[usize]; 5] = [&[1, 2], &[3, 4], &[5, 6], &[1, 4, 5], &[2, 3, 6]];

/// A quiver with mutable vertices `1..=n_mutable` followed by frozen vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Quiver {
    n_mutable: usize,
    n_frozen: usize,
    /// Arrow multiset: `(source, target) -> multiplicity`.
    arrows: BTreeMap<(usize, usize), u32>,
}

impl Quiver {
    /// Builds a quiver from an arrow list, cancelling 2-cycles.
    pub fn from_arrows<I>(n_mutable: usize, n_frozen: usize, arrows: I) -> Quiver
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut q = Quiver {
            n_mutable,
            n_frozen,
            arrows: BTreeMap::new(),
        };
        for (a, b) in arrows {
            assert!(a != b, "loop at {a}");
            assert!(
                q.contains(a) && q.contains(b),
                "arrow {a}->{b} out of range"
            );
            *q.arrows.entry((a, b)).or_insert(0) += 1;
        }
        q.cancel_two_cycles();
        q
    }

    pub fn n_mutable(&self) -> usize {
        self.n_mutable
    }

    pub fn n_frozen(&self) -> usize {
        self.n_frozen
    }

    pub fn n_vertices(&self) -> usize {
        self.n_mutable + self.n_frozen
    }

    pub fn contains(&self, v: usize) -> bool {
        (1..=self.n_vertices()).contains(&v)
    }

    pub fn is_frozen(&self, v: usize) -> bool {
        v > self.n_mutable && v <= self.n_vertices()
    }

    pub fn arrow_count(&self, a: usize, b: usize) -> u32 {
        self.arrows.get(&(a, b)).copied().unwrap_or(0)
    }

    pub fn num_arrows(&self) -> u32 {
        self.arrows.values().sum()
    }

    /// Arrows sorted, one entry per arrow (multiplicities expanded).
    pub fn arrow_list(&self) -> Vec<(usize, usize)> {
        self.arrows
            .iter()
            .flat_map(|(&k, &n)| std::iter::repeat_n(k, n as usize))
            .collect()
    }

    pub fn in_degree(&self, v: usize) -> u32 {
        self.arrows
            .iter()
            .filter(|((_, b), _)| *b == v)
            .map(|(_, n)| n)
            .sum()
    }

    pub fn out_degree(&self, v: usize) -> u32 {
        self.arrows
            .iter()
            .filter(|((a, _), _)| *a == v)
            .map(|(_, n)| n)
            .sum()
    }

    /// Skew-symmetric exchange matrix, `b[i][j] = #(i->j) - #(j->i)` (0-based).
    pub fn exchange_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.n_vertices();
        let mut b = vec![vec![0i64; n]; n];
        for (&(s, t), &m) in &self.arrows {
            b[s - 1][t - 1] += m as i64;
            b[t - 1][s - 1] -= m as i64;
        }
        b
    }

    fn cancel_two_cycles(&mut self) {
        let keys: Vec<(usize, usize)> = self.arrows.keys().copied().collect();
        for (a, b) in keys {
            let ab = self.arrow_count(a, b);
            let ba = self.arrow_count(b, a);
            let common = ab.min(ba);
            if common > 0 {
                self.set(a, b, ab - common);
                self.set(b, a, ba - common);
            }
        }
    }

    fn set(&mut self, a: usize, b: usize, n: u32) {
        if n == 0 {
            self.arrows.remove(&(a, b));
        } else {
            self.arrows.insert((a, b), n);
        }
    }

    /// Quiver mutation at `k`: complete 2-paths, reverse arrows at `k`,
    /// cancel 2-cycles. Arrows between frozen vertices are never created.
    pub fn mutate(&self, k: usize) -> Result<Quiver> {
        if !self.contains(k) {
            return Err(Error::NoSuchVertex(k));
        }
        if self.is_frozen(k) {
            return Err(Error::FrozenVertex(k));
        }
        let mut next = BTreeMap::new();
        for (&(a, b), &n) in &self.arrows {
            if a == k || b == k {
                *next.entry((b, a)).or_insert(0) += n;
            } else {
                *next.entry((a, b)).or_insert(0) += n;
            }
        }
        let ins: Vec<(usize, u32)> = self
            .arrows
            .iter()
            .filter(|((_, b), _)| *b == k)
            .map(|(&(a, _), &n)| (a, n))
            .collect();
        let outs: Vec<(usize, u32)> = self
            .arrows
            .iter()
            .filter(|((a, _), _)| *a == k)
            .map(|(&(_, b), &n)| (b, n))
            .collect();
        for &(i, ni) in &ins {
            for &(j, nj) in &outs {
                if self.is_frozen(i) && self.is_frozen(j) {
                    continue;
                }
                *next.entry((i, j)).or_insert(0) += ni * nj;
            }
        }
        let mut q = Quiver {
            n_mutable: self.n_mutable,
            n_frozen: self.n_frozen,
            arrows: next,
        };
        q.cancel_two_cycles();
        Ok(q)
    }

    /// Relabel vertices by `perm` (`perm[v] = new label of v`, index 0 unused).
    pub fn relabel(&self, perm: &[usize]) -> Quiver {
        let mut arrows = BTreeMap::new();
        for (&(a, b), &n) in &self.arrows {
            arrows.insert((perm[a], perm[b]), n);
        }
        Quiver {
            n_mutable: self.n_mutable,
            n_frozen: self.n_frozen,
            arrows,
        }
    }

    /// True when there is no loop, no 2-cycle and no frozen-frozen arrow.
    pub fn is_valid(&self) -> bool {
        self.arrows.keys().all(|&(a, b)| {
            a != b && self.arrow_count(b, a) == 0 && !(self.is_frozen(a) && self.is_frozen(b))
        })
    }

    /// The full subquiver on the mutable vertices.
    pub fn mutable_part(&self) -> Quiver {
        Quiver {
            n_mutable: self.n_mutable,
            n_frozen: 0,
            arrows: self
                .arrows
                .iter()
                .filter(|((a, b), _)| !self.is_frozen(*a) && !self.is_frozen(*b))
                .map(|(&k, &n)| (k, n))
                .collect(),
        }
    }
}

/// The dP3 quiver; the framed version adds frozen `i+6` and an arrow `i -> i+6`.
pub fn dp3_quiver(framed: bool) -> Quiver {
    if framed {
        let arrows = DP3_ARROWS
            .iter()
            .copied()
            .chain((1..=6).map(|i| (i, i + 6)));
        Quiver::from_arrows(6, 6, arrows)
    } else {
        Quiver::from_arrows(6, 0, DP3_ARROWS.iter().copied())
    }
}

/// In-degree and out-degree both equal to 2, counting every arrow at `v`.
pub fn is_toric(q: &Quiver, v: usize) -> bool {
    q.in_degree(v) == 2 && q.out_degree(v) == 2
}

/// A labeled seed: quiver, ordered cluster, frozen coefficients and the prism
/// position of every label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seed {
    pub quiver: Quiver,
    pub cluster: Vec<LaurentPoly>,
    /// `coeffs[i]` is the variable on frozen vertex `i + 7`; empty if unframed.
    pub coeffs: Vec<LaurentPoly>,
    pub prism: PrismState,
}

impl Seed {
    pub fn initial(framed: bool) -> Seed {
        Seed {
            quiver: dp3_quiver(framed),
            cluster: (1..=6).map(LaurentPoly::x).collect(),
            coeffs: if framed {
                (1..=6).map(LaurentPoly::y).collect()
            } else {
                Vec::new()
            },
            prism: PrismState::initial(),
        }
    }

    pub fn is_framed(&self) -> bool {
        self.quiver.n_frozen() > 0
    }

    /// Cluster variable at a label `1..=6`.
    pub fn variable(&self, label: usize) -> &LaurentPoly {
        &self.cluster[label - 1]
    }

    fn vertex_value(&self, v: usize) -> &LaurentPoly {
        if v <= 6 {
            &self.cluster[v - 1]
        } else {
            &self.coeffs[v - 7]
        }
    }

    /// Seed mutation at `v` with the binomial exchange relation.
    pub fn mutate(&self, v: usize) -> Result<Seed> {
        let quiver = self.quiver.mutate(v)?;
        let mut out_prod = LaurentPoly::one();
        let mut in_prod = LaurentPoly::one();
        for (&(a, b), &n) in &self.quiver.arrows {
            if a == v {
                out_prod = &out_prod * &self.vertex_value(b).pow(n);
            } else if b == v {
                in_prod = &in_prod * &self.vertex_value(a).pow(n);
            }
        }
        let new_var = (&out_prod + &in_prod).div_exact(&self.cluster[v - 1])?;
        let mut cluster = self.cluster.clone();
        cluster[v - 1] = new_var;
        Ok(Seed {
            quiver,
            cluster,
            coeffs: self.coeffs.clone(),
            prism: self.prism.clone(),
        })
    }

    /// Apply tau_t: its mutations left to right, then its relabeling cycle.
    pub fn apply_tau(&self, t: u8) -> Result<Seed> {
        self.apply_tau_inspect(t, |_, _| {})
    }

    /// As [`Seed::apply_tau`], calling `inspect(quiver, v)` right before each
    /// mutation at `v`.
    pub fn apply_tau_inspect<F>(&self, t: u8, mut inspect: F) -> Result<Seed>
    where
        F: FnMut(&Quiver, usize),
    {
        if !(1..=5).contains(&t) {
            return Err(Error::BadTau(t));
        }
        let mut s = self.clone();
        for &v in TAU_MUTATIONS[t as usize - 1] {
            inspect(&s.quiver, v);
            s = s.mutate(v)?;
        }
        // the relabeling moves mutable vertices only; frozen vertex 6 + i
        // keeps y_i
        let perm = cycle_permutation(TAU_CYCLES[t as usize - 1]);
        let full: Vec<usize> = (0..=s.quiver.n_vertices())
            .map(|v| if v <= 6 { perm[v] } else { v })
            .collect();
        let quiver = s.quiver.relabel(&full);
        let mut cluster = s.cluster.clone();
        for v in 1..=6 {
            cluster[perm[v] - 1] = s.cluster[v - 1].clone();
        }
        let prism = self.prism.apply_tau(t);
        Ok(Seed {
            quiver,
            cluster,
            coeffs: s.coeffs,
            prism,
        })
    }

    pub fn apply_word(&self, word: &[u8]) -> Result<Seed> {
        let mut s = self.clone();
        for &t in word {
            s = s.apply_tau(t)?;
        }
        Ok(s)
    }

    /// Canonical JSON form: sorted arrows, polynomials in canonical text.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n_mutable": self.quiver.n_mutable(),
            "n_frozen": self.quiver.n_frozen(),
            "arrows": self.quiver.arrow_list(),
            "cluster": self.cluster.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "coeffs": self.coeffs.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "prism": self.prism.positions,
        })
    }
}

/// `perm[v]` is the image of `v` under the cycle `c0 -> c1 -> ... -> c0`.
fn cycle_permutation(cycle: &[usize]) -> [usize; 7] {
    let mut perm = [0, 1, 2, 3, 4, 5, 6];
    for (idx, &v) in cycle.iter().enumerate() {
        perm[v] = cycle[(idx + 1) % cycle.len()];
    }
    perm
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dp3_shape() {
        let q = dp3_quiver(false);
        assert_eq!(q.n_vertices(), 6);
        assert_eq!(q.num_arrows(), 12);
        assert!(q.is_valid());
        for v in 1..=6 {
            assert!(is_toric(&q, v), "vertex {v}");
        }
        let f = dp3_quiver(true);
        assert_eq!(f.n_vertices(), 12);
        assert_eq!(f.num_arrows(), 18);
        assert!(f.is_valid());
        assert!(!is_toric(&f, 1));
    }

    #[test]
    fn quiver_mutation_is_involution() {
        let q = dp3_quiver(true);
        for v in 1..=6 {
            assert_eq!(q.mutate(v).unwrap().mutate(v).unwrap(), q);
        }
        assert_eq!(q.mutate(7), Err(Error::FrozenVertex(7)));
        assert_eq!(q.mutate(13), Err(Error::NoSuchVertex(13)));
    }

    #[test]
    fn first_exchange_relation() {
        let s = Seed::initial(false);
        let m = s.mutate(1).unwrap();
        // out-neighbours of 1 are 3, 5; in-neighbours are 4, 6
        let expected: LaurentPoly = "x1^-1*x3*x5 + x1^-1*x4*x6".parse().unwrap();
        assert_eq!(m.cluster[0], expected);
        assert_eq!(m.mutate(1).unwrap(), s);
    }

    #[test]
    fn framed_first_exchange_has_one_y_free_term() {
        let s = Seed::initial(true);
        let m = s.mutate(1).unwrap();
        assert_eq!(m.cluster[0].y_free_part().num_terms(), 1);
        assert_eq!(m.cluster[0].num_terms(), 2);
    }

    #[test]
    fn low_degree_vertex_is_not_toric() {
        let q = Quiver::from_arrows(3, 0, [(1, 2), (1, 3), (2, 3), (2, 3), (3, 1)]);
        assert!(!is_toric(&q, 1));
        assert!(!is_toric(&q, 3));
    }

    #[test]
    fn bad_tau() {
        assert_eq!(Seed::initial(false).apply_tau(6), Err(Error::BadTau(6)));
    }
}
