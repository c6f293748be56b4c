//! Normalized integral chains and Smith normal form.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::topology::SimplicialSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

fn overflow() -> Error {
    Error::Overflow("integer matrix entry exceeds 64 bits".into())
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Schema("matrix rows have different lengths".into()));
        }
        Ok(Matrix { rows: rows.len(), cols, data: rows.concat() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(<[i64]>::to_vec).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DegreeMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = a.checked_mul(other.get(k, j)).and_then(|p| p.checked_add(out.get(i, j))).ok_or_else(overflow)?;
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// `row_i += c · row_t`.
    fn add_row(&mut self, i: usize, t: usize, c: i64) -> Result<()> {
        for j in 0..self.cols {
            let v = c.checked_mul(self.get(t, j)).and_then(|p| p.checked_add(self.get(i, j))).ok_or_else(overflow)?;
            self.set(i, j, v);
        }
        Ok(())
    }

    fn add_col(&mut self, j: usize, t: usize, c: i64) -> Result<()> {
        for i in 0..self.rows {
            let v = c.checked_mul(self.get(i, t)).and_then(|p| p.checked_add(self.get(i, j))).ok_or_else(overflow)?;
            self.set(i, j, v);
        }
        Ok(())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }
}

/// `U·M·V = D` with `D` diagonal, its invariants forming a divisibility chain.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub invariants: Vec<i64>,
    pub d: Matrix,
    pub u: Matrix,
    pub u_inv: Matrix,
    pub v: Matrix,
    pub v_inv: Matrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariants.len()
    }

    /// Recomputes the products and checks shape, unimodularity and divisibility.
    pub fn certify(&self, m: &Matrix) -> Result<bool> {
        let umv = self.u.mul(m)?.mul(&self.v)?;
        let unimodular = self.u.mul(&self.u_inv)? == Matrix::identity(m.rows())
            && self.v.mul(&self.v_inv)? == Matrix::identity(m.cols());
        let diagonal = (0..m.rows()).all(|i| {
            (0..m.cols()).all(|j| {
                let v = self.d.get(i, j);
                if i == j && i < self.invariants.len() {
                    v == self.invariants[i]
                } else {
                    v == 0
                }
            })
        });
        let chain = self.invariants.iter().all(|&a| a > 0) && self.invariants.windows(2).all(|w| w[1] % w[0] == 0);
        Ok(umv == self.d && unimodular && diagonal && chain)
    }
}

struct Reducer {
    d: Matrix,
    u: Matrix,
    u_inv: Matrix,
    v: Matrix,
    v_inv: Matrix,
}

impl Reducer {
    fn add_row(&mut self, i: usize, t: usize, c: i64) -> Result<()> {
        self.d.add_row(i, t, c)?;
        self.u.add_row(i, t, c)?;
        self.u_inv.add_col(t, i, -c)
    }

    fn add_col(&mut self, j: usize, t: usize, c: i64) -> Result<()> {
        self.d.add_col(j, t, c)?;
        self.v.add_col(j, t, c)?;
        self.v_inv.add_row(t, j, -c)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    fn negate_row(&mut self, i: usize) {
        for m in [&mut self.d, &mut self.u] {
            for j in 0..m.cols() {
                m.set(i, j, -m.get(i, j));
            }
        }
        for r in 0..self.u_inv.rows() {
            self.u_inv.set(r, i, -self.u_inv.get(r, i));
        }
    }

    fn smallest_from(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.d.rows() {
            for j in t..self.d.cols() {
                let v = self.d.get(i, j).unsigned_abs();
                if v != 0 && best.is_none_or(|(a, b)| v < self.d.get(a, b).unsigned_abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }
}

pub fn smith_normal_form(m: &Matrix) -> Result<SmithForm> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut r = Reducer {
        d: m.clone(),
        u: Matrix::identity(rows),
        u_inv: Matrix::identity(rows),
        v: Matrix::identity(cols),
        v_inv: Matrix::identity(cols),
    };
    let mut invariants = Vec::new();
    let mut t = 0;
    while let Some((pi, pj)) = r.smallest_from(t) {
        r.swap_rows(t, pi);
        r.swap_cols(t, pj);
        loop {
            let p = r.d.get(t, t);
            let mut dirty = false;
            for i in t + 1..rows {
                let q = r.d.get(i, t) / p;
                if q != 0 {
                    r.add_row(i, t, -q)?;
                }
                dirty |= r.d.get(i, t) != 0;
            }
            for j in t + 1..cols {
                let q = r.d.get(t, j) / p;
                if q != 0 {
                    r.add_col(j, t, -q)?;
                }
                dirty |= r.d.get(t, j) != 0;
            }
            if !dirty {
                let stray = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| r.d.get(i, j) % p != 0));
                match stray {
                    Some(i) => r.add_row(t, i, 1)?,
                    None => break,
                }
            }
            let (pi, pj) = r.smallest_from(t).expect("pivot block is nonzero");
            if r.d.get(pi, pj).unsigned_abs() < r.d.get(t, t).unsigned_abs() || r.d.get(t, t) == 0 {
                r.swap_rows(t, pi);
                r.swap_cols(t, pj);
            }
        }
        if r.d.get(t, t) < 0 {
            r.negate_row(t);
        }
        invariants.push(r.d.get(t, t));
        t += 1;
    }
    Ok(SmithForm { invariants, d: r.d, u: r.u, u_inv: r.u_inv, v: r.v, v_inv: r.v_inv })
}

/// Chains on non-degenerate simplices; `boundaries[k]` maps `C_k → C_{k-1}`.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub ranks: Vec<usize>,
    pub boundaries: Vec<Matrix>,
}

impl ChainComplex {
    pub fn square_zero(&self) -> Result<bool> {
        for k in 2..self.boundaries.len() {
            if !self.boundaries[k - 1].mul(&self.boundaries[k])?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Homology in dimensions `0..=top`; needs `top` below the top chain degree.
    pub fn homology(&self, top: usize) -> Result<Vec<HomologyGroup>> {
        if top + 1 >= self.ranks.len() {
            return Err(Error::Truncation { needed: top + 1, bound: self.ranks.len().saturating_sub(1) });
        }
        let forms = (0..=top + 1).map(|k| smith_normal_form(&self.boundaries[k])).collect::<Result<Vec<_>>>()?;
        Ok((0..=top)
            .map(|k| HomologyGroup {
                dim: k,
                betti: self.ranks[k] - forms[k].rank() - forms[k + 1].rank(),
                torsion: forms[k + 1].invariants.iter().copied().filter(|&a| a > 1).collect(),
            })
            .collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub dim: usize,
    pub betti: usize,
    pub torsion: Vec<i64>,
}

pub fn normalized_chains(s: &SimplicialSet) -> ChainComplex {
    let basis: Vec<Vec<usize>> = (0..=s.dimension()).map(|k| s.nondegenerate(k)).collect();
    let position: Vec<Vec<Option<usize>>> = basis
        .iter()
        .enumerate()
        .map(|(k, b)| {
            let mut p = vec![None; s.count(k)];
            for (i, &x) in b.iter().enumerate() {
                p[x] = Some(i);
            }
            p
        })
        .collect();
    let mut boundaries = vec![Matrix::zeros(0, basis[0].len())];
    for k in 1..=s.dimension() {
        let mut m = Matrix::zeros(basis[k - 1].len(), basis[k].len());
        for (col, &x) in basis[k].iter().enumerate() {
            for i in 0..=k {
                if let Some(row) = position[k - 1][s.face(k, i, x)] {
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    m.set(row, col, m.get(row, col) + sign);
                }
            }
        }
        boundaries.push(m);
    }
    ChainComplex { ranks: basis.iter().map(Vec::len).collect(), boundaries }
}

pub fn homology(s: &SimplicialSet, top: usize) -> Result<Vec<HomologyGroup>> {
    normalized_chains(s).homology(top)
}
