//! Subsets of `{0,…,n−1}` as bitmasks.
//!
//! A subset doubles as the distinguished injection onto it, so positions are
//! always relabelled in increasing order.

use std::fmt;

use crate::error::{Error, Result};

pub const MAX_DEGREE: usize = 63;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset {
    degree: usize,
    mask: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeOp {
    Meet,
    Join,
    Neg,
    Leq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeValue {
    Subset(Subset),
    Bool(bool),
}

fn low_bits(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl Subset {
    pub fn new(degree: usize, mask: u64) -> Result<Self> {
        if degree > MAX_DEGREE {
            return Err(Error::Truncation { needed: degree, bound: MAX_DEGREE });
        }
        if mask & !low_bits(degree) != 0 {
            return Err(Error::InvalidMorphism(format!(
                "mask {mask:#b} has bits outside degree {degree}"
            )));
        }
        Ok(Subset { degree, mask })
    }

    pub(crate) fn raw(degree: usize, mask: u64) -> Self {
        debug_assert!(mask & !low_bits(degree) == 0);
        Subset { degree, mask }
    }

    pub fn empty(n: usize) -> Self {
        Subset { degree: n, mask: 0 }
    }

    pub fn full(n: usize) -> Self {
        Subset { degree: n, mask: low_bits(n) }
    }

    pub fn singleton(n: usize, i: usize) -> Self {
        debug_assert!(i < n);
        Subset { degree: n, mask: 1 << i }
    }

    pub fn from_positions(n: usize, positions: &[usize]) -> Result<Self> {
        let mut mask = 0u64;
        for &p in positions {
            if p >= n {
                return Err(Error::InvalidMorphism(format!("position {p} outside degree {n}")));
            }
            mask |= 1 << p;
        }
        Subset::new(n, mask)
    }

    /// Every subset of `n`, ordered by mask.
    pub fn all(n: usize) -> impl Iterator<Item = Subset> {
        (0..=low_bits(n)).map(move |mask| Subset { degree: n, mask })
    }

    /// Subsets of `self`, as subsets of the same degree.
    pub fn sub_subsets(self) -> impl Iterator<Item = Subset> {
        let full = self.mask;
        let mut cur = Some(0u64);
        std::iter::from_fn(move || {
            let out = cur?;
            cur = if out == full { None } else { Some(((out | !full).wrapping_add(1)) & full) };
            Some(Subset { degree: self.degree, mask: out })
        })
    }

    pub fn degree(self) -> usize {
        self.degree
    }

    pub fn mask(self) -> u64 {
        self.mask
    }

    pub fn len(self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.mask == 0
    }

    pub fn is_full(self) -> bool {
        self.mask == low_bits(self.degree)
    }

    pub fn contains(self, i: usize) -> bool {
        i < self.degree && self.mask >> i & 1 == 1
    }

    pub fn positions(self) -> Vec<usize> {
        (0..self.degree).filter(|&i| self.contains(i)).collect()
    }

    pub fn meet(self, other: Subset) -> Subset {
        debug_assert_eq!(self.degree, other.degree);
        Subset { degree: self.degree, mask: self.mask & other.mask }
    }

    pub fn join(self, other: Subset) -> Subset {
        debug_assert_eq!(self.degree, other.degree);
        Subset { degree: self.degree, mask: self.mask | other.mask }
    }

    pub fn neg(self) -> Subset {
        Subset { degree: self.degree, mask: !self.mask & low_bits(self.degree) }
    }

    pub fn leq(self, other: Subset) -> bool {
        debug_assert_eq!(self.degree, other.degree);
        self.mask & !other.mask == 0
    }

    /// Number of elements of `self` strictly below `i`.
    pub fn rank(self, i: usize) -> usize {
        (self.mask & low_bits(i)).count_ones() as usize
    }

    /// The `k`-th element of `self` in increasing order.
    pub fn nth(self, k: usize) -> usize {
        let mut m = self.mask;
        for _ in 0..k {
            m &= m - 1;
        }
        debug_assert!(m != 0);
        m.trailing_zeros() as usize
    }

    /// `γ^∗η`: the part of `eta` inside `self`, relabelled into degree `|self|`.
    pub fn restrict(self, eta: Subset) -> Subset {
        debug_assert_eq!(self.degree, eta.degree);
        let mut mask = 0u64;
        let mut k = 0;
        for i in 0..self.degree {
            if self.contains(i) {
                if eta.contains(i) {
                    mask |= 1 << k;
                }
                k += 1;
            }
        }
        Subset { degree: k, mask }
    }

    /// `γ_∗η`: `inner` (degree `|self|`) relabelled into the positions of `self`.
    pub fn expand(self, inner: Subset) -> Subset {
        debug_assert_eq!(self.len(), inner.degree);
        let mut mask = 0u64;
        let mut k = 0;
        for i in 0..self.degree {
            if self.contains(i) {
                if inner.contains(k) {
                    mask |= 1 << i;
                }
                k += 1;
            }
        }
        Subset { degree: self.degree, mask }
    }

    /// Offset concatenation `a ⊗ b`.
    pub fn concat(self, other: Subset) -> Subset {
        Subset { degree: self.degree + other.degree, mask: self.mask | other.mask << self.degree }
    }

    /// Adds a new last coordinate, in or out of the subset.
    pub fn extend(self, included: bool) -> Subset {
        Subset {
            degree: self.degree + 1,
            mask: self.mask | if included { 1 << self.degree } else { 0 },
        }
    }
}

pub fn lattice_eval(op: LatticeOp, a: Subset, b: Option<Subset>) -> Result<LatticeValue> {
    let other = || -> Result<Subset> {
        let b = b.ok_or_else(|| Error::Usage("binary lattice operation needs two operands".into()))?;
        if b.degree != a.degree {
            return Err(Error::DegreeMismatch { expected: a.degree, found: b.degree });
        }
        Ok(b)
    };
    Ok(match op {
        LatticeOp::Meet => LatticeValue::Subset(a.meet(other()?)),
        LatticeOp::Join => LatticeValue::Subset(a.join(other()?)),
        LatticeOp::Leq => LatticeValue::Bool(a.leq(other()?)),
        LatticeOp::Neg => LatticeValue::Subset(a.neg()),
    })
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, p) in self.positions().into_iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}⊆{}", self.degree)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: usize, p: &[usize]) -> Subset {
        Subset::from_positions(n, p).unwrap()
    }

    #[test]
    fn bitwise_ops() {
        assert_eq!(s(3, &[0, 1]).meet(s(3, &[1, 2])), s(3, &[1]));
        assert_eq!(s(3, &[0, 2]).neg(), s(3, &[1]));
        for n in 0..5 {
            assert_eq!(Subset::empty(n).join(Subset::full(n)), Subset::full(n));
        }
    }

    #[test]
    fn lattice_eval_checks_degree() {
        let err = lattice_eval(LatticeOp::Meet, s(2, &[0]), Some(s(3, &[0]))).unwrap_err();
        assert_eq!(err, Error::DegreeMismatch { expected: 2, found: 3 });
        assert_eq!(
            lattice_eval(LatticeOp::Leq, s(3, &[1]), Some(s(3, &[1, 2]))).unwrap(),
            LatticeValue::Bool(true)
        );
    }

    #[test]
    fn degree_zero_lattice() {
        assert_eq!(Subset::all(0).count(), 1);
        assert!(Subset::empty(0).is_full());
        assert_eq!(Subset::full(0).neg(), Subset::empty(0));
    }

    #[test]
    fn restrict_expand_roundtrip() {
        for n in 0..6 {
            for g in Subset::all(n) {
                for e in Subset::all(g.len()) {
                    assert_eq!(g.restrict(g.expand(e)), e);
                }
                for e in Subset::all(n) {
                    assert_eq!(g.expand(g.restrict(e)), e.meet(g));
                }
            }
        }
    }

    #[test]
    fn sub_subsets_enumerates_powerset() {
        let g = s(5, &[0, 2, 3]);
        let subs: Vec<_> = g.sub_subsets().collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.iter().all(|x| x.leq(g)));
    }

    #[test]
    fn rank_and_nth() {
        let g = s(6, &[1, 3, 4]);
        assert_eq!(g.nth(0), 1);
        assert_eq!(g.nth(2), 4);
        assert_eq!(g.rank(4), 2);
    }

    #[test]
    fn rejects_stray_bits() {
        assert!(Subset::new(2, 0b100).is_err());
        assert!(Subset::from_positions(2, &[2]).is_err());
    }
}
