//! Indexed hom-sets and composition tables for exhaustive checks.

use std::collections::HashMap;
use std::hash::Hash;

use serde_json::Value;

use crate::report::Check;

pub struct HomTables<T> {
    pub d: usize,
    pub homs: Vec<Vec<Vec<T>>>,
    pub index: Vec<Vec<HashMap<T, usize>>>,
    /// `comp[a][b][c][g * |hom(a,b)| + f]` is the index of `g∘f` in `hom(a,c)`.
    pub comp: Vec<Vec<Vec<Vec<u32>>>>,
}

impl<T: Clone + Eq + Hash> HomTables<T> {
    /// Returns the offending pair if some composite is missing from the enumeration.
    pub fn build(
        d: usize,
        homs: impl Fn(usize, usize) -> Vec<T>,
        compose: impl Fn(&T, &T) -> T,
    ) -> Result<Self, (T, T)> {
        let homs: Vec<Vec<Vec<T>>> = (0..=d).map(|a| (0..=d).map(|b| homs(a, b)).collect()).collect();
        let index: Vec<Vec<HashMap<T, usize>>> = homs
            .iter()
            .map(|row| row.iter().map(|h| h.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect()).collect())
            .collect();
        let mut comp = vec![vec![vec![Vec::new(); d + 1]; d + 1]; d + 1];
        for a in 0..=d {
            for b in 0..=d {
                for c in 0..=d {
                    let mut t = Vec::with_capacity(homs[b][c].len() * homs[a][b].len());
                    for g in &homs[b][c] {
                        for f in &homs[a][b] {
                            match index[a][c].get(&compose(g, f)) {
                                Some(&i) => t.push(i as u32),
                                None => return Err((g.clone(), f.clone())),
                            }
                        }
                    }
                    comp[a][b][c] = t;
                }
            }
        }
        Ok(HomTables { d, homs, index, comp })
    }

    pub fn hom(&self, a: usize, b: usize) -> &[T] {
        &self.homs[a][b]
    }

    pub fn compose_idx(&self, a: usize, b: usize, c: usize, g: usize, f: usize) -> usize {
        self.comp[a][b][c][g * self.homs[a][b].len() + f] as usize
    }

    pub fn check_associativity(&self, check: &mut Check, witness: impl Fn(&T, &T, &T) -> Value) {
        let d = self.d;
        for a in 0..=d {
            for b in 0..=d {
                let nab = self.homs[a][b].len();
                for c in 0..=d {
                    let nbc = self.homs[b][c].len();
                    let nac = self.homs[a][c].len();
                    let abc = &self.comp[a][b][c];
                    for z in 0..=d {
                        let bcz = &self.comp[b][c][z];
                        let acz = &self.comp[a][c][z];
                        let abz = &self.comp[a][b][z];
                        for h in 0..self.homs[c][z].len() {
                            for g in 0..nbc {
                                let hg = bcz[h * nbc + g] as usize;
                                for f in 0..nab {
                                    let lhs = acz[h * nac + abc[g * nab + f] as usize];
                                    let rhs = abz[hg * nab + f];
                                    check.record(lhs == rhs, || {
                                        witness(&self.homs[a][b][f], &self.homs[b][c][g], &self.homs[c][z][h])
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    pub fn check_units(&self, identity: impl Fn(usize) -> T, check: &mut Check, witness: impl Fn(&T) -> Value) {
        for a in 0..=self.d {
            for b in 0..=self.d {
                let ia = self.index[a][a][&identity(a)];
                let ib = self.index[b][b][&identity(b)];
                for f in 0..self.homs[a][b].len() {
                    let ok = self.compose_idx(a, b, b, ib, f) == f && self.compose_idx(a, a, b, f, ia) == f;
                    check.record(ok, || witness(&self.homs[a][b][f]));
                }
            }
        }
    }
}
