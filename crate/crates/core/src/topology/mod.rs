//! Simplicial sets truncated at a dimension, nerves of Boolean lattices, and
//! products.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::report::Check;

mod chains;
mod realize;
pub mod verify;

pub use chains::{homology, normalized_chains, smith_normal_form, ChainComplex, HomologyGroup, Matrix, SmithForm};
pub use realize::{realize, realize_map, realize_tensor_comparison, Point, Realization};

/// Simplices in dimensions `0..=K` with face and degeneracy tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialSet {
    dim: usize,
    counts: Vec<usize>,
    /// `faces[k][i][x] = d_i x` for `k ≥ 1`.
    faces: Vec<Vec<Vec<u32>>>,
    /// `degens[k][i][x] = s_i x` for `k < K`.
    degens: Vec<Vec<Vec<u32>>>,
}

impl SimplicialSet {
    pub fn from_fn(
        dim: usize,
        counts: Vec<usize>,
        face: impl Fn(usize, usize, usize) -> usize,
        degeneracy: impl Fn(usize, usize, usize) -> usize,
    ) -> Result<Self> {
        if counts.len() != dim + 1 {
            return Err(Error::Schema(format!("expected {} simplex counts, found {}", dim + 1, counts.len())));
        }
        let table = |k: usize, target: usize, f: &dyn Fn(usize, usize) -> usize| -> Result<Vec<Vec<u32>>> {
            (0..=k)
                .map(|i| {
                    (0..counts[k])
                        .map(|x| {
                            let y = f(i, x);
                            if y >= counts[target] {
                                return Err(Error::Schema(format!("simplex map lands outside dimension {target}")));
                            }
                            Ok(y as u32)
                        })
                        .collect()
                })
                .collect()
        };
        let mut faces = vec![Vec::new()];
        for k in 1..=dim {
            faces.push(table(k, k - 1, &|i, x| face(k, i, x))?);
        }
        let mut degens = Vec::new();
        for k in 0..dim {
            degens.push(table(k, k + 1, &|i, x| degeneracy(k, i, x))?);
        }
        Ok(SimplicialSet { dim, counts, faces, degens })
    }

    /// The truncation dimension `K`.
    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn count(&self, k: usize) -> usize {
        self.counts[k]
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn face(&self, k: usize, i: usize, x: usize) -> usize {
        self.faces[k][i][x] as usize
    }

    pub fn degeneracy(&self, k: usize, i: usize, x: usize) -> usize {
        self.degens[k][i][x] as usize
    }

    pub fn is_degenerate(&self, k: usize, x: usize) -> bool {
        (0..k).any(|i| self.degeneracy(k - 1, i, self.face(k, i, x)) == x)
    }

    pub fn nondegenerate(&self, k: usize) -> Vec<usize> {
        (0..self.count(k)).filter(|&x| !self.is_degenerate(k, x)).collect()
    }

    /// Alternating count of non-degenerate simplices up to the truncation.
    pub fn euler_characteristic(&self) -> i64 {
        (0..=self.dim).map(|k| if k % 2 == 0 { 1 } else { -1 } * self.nondegenerate(k).len() as i64).sum()
    }

    pub fn truncate(&self, dim: usize) -> SimplicialSet {
        let dim = dim.min(self.dim);
        SimplicialSet {
            dim,
            counts: self.counts[..=dim].to_vec(),
            faces: self.faces[..=dim].to_vec(),
            degens: self.degens[..dim].to_vec(),
        }
    }

    /// Records one case per simplicial identity instance.
    pub fn check_identities(&self, check: &mut Check) {
        let witness = |rule: &str, k: usize, i: usize, j: usize, x: usize| json!({"rule": rule, "dim": k, "i": i, "j": j, "simplex": x});
        for k in 2..=self.dim {
            for j in 1..=k {
                for i in 0..j {
                    for x in 0..self.count(k) {
                        let ok = self.face(k - 1, i, self.face(k, j, x)) == self.face(k - 1, j - 1, self.face(k, i, x));
                        check.record(ok, || witness("d_i d_j = d_{j-1} d_i", k, i, j, x));
                    }
                }
            }
        }
        for k in 0..self.dim {
            for j in 0..=k {
                for x in 0..self.count(k) {
                    let s = self.degeneracy(k, j, x);
                    for i in 0..=k + 1 {
                        let got = self.face(k + 1, i, s);
                        let want = if i == j || i == j + 1 {
                            x
                        } else if i < j {
                            self.degeneracy(k - 1, j - 1, self.face(k, i, x))
                        } else {
                            self.degeneracy(k - 1, j, self.face(k, i - 1, x))
                        };
                        check.record(got == want, || witness("d_i s_j", k, i, j, x));
                    }
                    if k + 1 < self.dim {
                        for i in 0..=j {
                            let ok = self.degeneracy(k + 1, i, s) == self.degeneracy(k + 1, j + 1, self.degeneracy(k, i, x));
                            check.record(ok, || witness("s_i s_j = s_{j+1} s_i", k, i, j, x));
                        }
                    }
                }
            }
        }
    }

    /// The dimensionwise product, truncated at the smaller dimension.
    pub fn product(&self, other: &SimplicialSet) -> Result<SimplicialSet> {
        let dim = self.dim.min(other.dim);
        let counts = (0..=dim).map(|k| self.count(k) * other.count(k)).collect();
        let split = |k: usize, x: usize| (x / other.count(k), x % other.count(k));
        SimplicialSet::from_fn(
            dim,
            counts,
            |k, i, x| {
                let (a, b) = split(k, x);
                self.face(k, i, a) * other.count(k - 1) + other.face(k, i, b)
            },
            |k, i, x| {
                let (a, b) = split(k, x);
                self.degeneracy(k, i, a) * other.count(k + 1) + other.degeneracy(k, i, b)
            },
        )
    }

    pub fn to_json(&self) -> Value {
        json!({
            "dimension": self.dim,
            "simplices": self.counts,
            "faces": self.faces[1..],
            "degeneracies": self.degens,
        })
    }
}

/// A dimensionwise map of simplicial sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialMap {
    pub source: Arc<SimplicialSet>,
    pub target: Arc<SimplicialSet>,
    pub cells: Vec<Vec<u32>>,
}

impl SimplicialMap {
    pub fn new(source: Arc<SimplicialSet>, target: Arc<SimplicialSet>, cells: Vec<Vec<u32>>) -> Result<Self> {
        let m = SimplicialMap { source, target, cells };
        if m.source.dimension() > m.target.dimension() {
            return Err(Error::Truncation { needed: m.source.dimension(), bound: m.target.dimension() });
        }
        if !m.is_simplicial() {
            return Err(Error::Functoriality("map does not commute with faces and degeneracies".into()));
        }
        Ok(m)
    }

    pub fn apply(&self, k: usize, x: usize) -> usize {
        self.cells[k][x] as usize
    }

    pub fn is_simplicial(&self) -> bool {
        let (s, t) = (&self.source, &self.target);
        let shapes = (0..=s.dimension())
            .all(|k| self.cells.get(k).is_some_and(|c| c.len() == s.count(k) && c.iter().all(|&y| (y as usize) < t.count(k))));
        shapes
            && (0..=s.dimension()).all(|k| {
                (0..s.count(k)).all(|x| {
                    let y = self.apply(k, x);
                    let faces = k == 0 || (0..=k).all(|i| self.apply(k - 1, s.face(k, i, x)) == t.face(k, i, y));
                    let degens =
                        k == s.dimension() || (0..=k).all(|i| self.apply(k + 1, s.degeneracy(k, i, x)) == t.degeneracy(k, i, y));
                    faces && degens
                })
            })
    }

    pub fn is_injective(&self) -> bool {
        self.cells.iter().enumerate().all(|(k, row)| {
            let mut seen = vec![false; self.target.count(k)];
            row.iter().all(|&y| !std::mem::replace(&mut seen[y as usize], true))
        })
    }

    pub fn is_bijective(&self) -> bool {
        self.is_injective() && (0..=self.source.dimension()).all(|k| self.source.count(k) == self.target.count(k))
    }
}

/// Entry times of the coordinates along a chain `S₀ ⊆ … ⊆ S_k` in `2ⁿ`: coordinate `i`
/// first appears in `S_{e_i}`, with `e_i = k+1` for coordinates never reached.
pub(crate) fn chain_masks(n: usize, k: usize, mut index: usize) -> Vec<u64> {
    let mut masks = vec![0u64; k + 1];
    for i in 0..n {
        let e = index % (k + 2);
        index /= k + 2;
        for m in masks.iter_mut().skip(e) {
            *m |= 1 << i;
        }
    }
    masks
}

pub(crate) fn chain_index(n: usize, masks: &[u64]) -> usize {
    let k = masks.len() - 1;
    (0..n).rev().fold(0, |acc, i| {
        let e = masks.iter().position(|m| m >> i & 1 == 1).unwrap_or(k + 1);
        acc * (k + 2) + e
    })
}

pub(crate) fn chain_count(n: usize, k: usize) -> usize {
    (k + 2).pow(n as u32)
}

pub(crate) fn chain_face(n: usize, k: usize, i: usize, x: usize) -> usize {
    let mut masks = chain_masks(n, k, x);
    masks.remove(i);
    chain_index(n, &masks)
}

pub(crate) fn chain_degeneracy(n: usize, k: usize, i: usize, x: usize) -> usize {
    let mut masks = chain_masks(n, k, x);
    masks.insert(i, masks[i]);
    chain_index(n, &masks)
}

/// The nerve of the Boolean lattice `2ⁿ`, truncated at dimension `dim`.
pub fn nerve_boolean(n: usize, dim: usize) -> Result<SimplicialSet> {
    if n > 16 {
        return Err(Error::Truncation { needed: n, bound: 16 });
    }
    SimplicialSet::from_fn(
        dim,
        (0..=dim).map(|k| chain_count(n, k)).collect(),
        |k, i, x| chain_face(n, k, i, x),
        |k, i, x| chain_degeneracy(n, k, i, x),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nerve_counts() {
        assert_eq!(nerve_boolean(0, 3).unwrap().counts(), &[1, 1, 1, 1]);
        assert_eq!(nerve_boolean(1, 1).unwrap().count(1), 3);
        assert_eq!(nerve_boolean(2, 1).unwrap().count(1), 9);
    }

    #[test]
    fn chain_encoding_roundtrips() {
        for n in 0..4 {
            for k in 0..4 {
                for x in 0..chain_count(n, k) {
                    let masks = chain_masks(n, k, x);
                    assert!(masks.windows(2).all(|w| w[0] & !w[1] == 0));
                    assert_eq!(chain_index(n, &masks), x);
                }
            }
        }
    }

    #[test]
    fn nerve_identities_and_euler() {
        for n in 0..4 {
            let s = nerve_boolean(n, 4).unwrap();
            let mut c = Check::new("identities");
            s.check_identities(&mut c);
            assert!(c.passed() && c.cases > 0, "{:?}", c.witness);
            assert_eq!(s.euler_characteristic(), 1);
            assert!(s.nondegenerate(n + 1).is_empty());
        }
    }

    #[test]
    fn interval_squared_is_the_square() {
        let i = nerve_boolean(1, 3).unwrap();
        let sq = i.product(&i).unwrap();
        assert_eq!(sq.counts(), nerve_boolean(2, 3).unwrap().counts());
        assert_eq!(sq.nondegenerate(2).len(), 2);
        let mut c = Check::new("identities");
        sq.check_identities(&mut c);
        assert!(c.passed());
    }
}
