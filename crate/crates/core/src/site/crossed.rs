//! Crossed Δ̃-groups: the built-in symmetric groups and loadable finite tables.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::site::monotone_maps;

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Index of `p` among the permutations of its length in lexicographic order.
pub fn perm_rank(p: &[usize]) -> usize {
    let n = p.len();
    let mut rank = 0;
    for i in 0..n {
        let smaller = p[i + 1..].iter().filter(|&&q| q < p[i]).count();
        rank += smaller * factorial(n - 1 - i);
    }
    rank
}

pub fn perm_unrank(n: usize, mut rank: usize) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let f = factorial(n - 1 - i);
        out.push(pool.remove(rank / f));
        rank %= f;
    }
    out
}

/// Fibre sizes of a monotone map `f: m → n`.
fn fibre_sizes(f: &[usize], n: usize) -> Vec<usize> {
    let mut c = vec![0; n];
    for &v in f {
        c[v] += 1;
    }
    c
}

/// `y·f` for a permutation `y` of `n`.
pub fn sigma_act(y: &[usize], f: &[usize]) -> Vec<usize> {
    let n = y.len();
    let c = fibre_sizes(f, n);
    let mut yinv = vec![0; n];
    for (i, &v) in y.iter().enumerate() {
        yinv[v] = i;
    }
    let mut out = Vec::with_capacity(f.len());
    for k in 0..n {
        out.extend(std::iter::repeat(k).take(c[yinv[k]]));
    }
    out
}

/// `f^∗y`: moves the block `f⁻¹{i}` onto the block of `y·f` over `y(i)`, keeping its order.
pub fn sigma_restrict(f: &[usize], y: &[usize]) -> Vec<usize> {
    let n = y.len();
    let c = fibre_sizes(f, n);
    let mut yinv = vec![0; n];
    for (i, &v) in y.iter().enumerate() {
        yinv[v] = i;
    }
    let mut start = vec![0; n];
    let mut acc = 0;
    for k in 0..n {
        start[k] = acc;
        acc += c[yinv[k]];
    }
    let mut seen = vec![0; n];
    f.iter()
        .map(|&i| {
            let p = start[y[i]] + seen[i];
            seen[i] += 1;
            p
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct CrossedTable {
    arity: usize,
    mult: Vec<Vec<Vec<usize>>>,
    inv: Vec<Vec<usize>>,
    maps: Vec<Vec<Vec<Vec<usize>>>>,
    map_index: HashMap<(usize, usize), HashMap<Vec<usize>, usize>>,
    action: Vec<Vec<Vec<Vec<usize>>>>,
    restriction: Vec<Vec<Vec<Vec<usize>>>>,
    permutations: Option<Vec<Vec<Vec<usize>>>>,
}

#[derive(Serialize, Deserialize)]
struct TableFile {
    arity_groups: Vec<Vec<Vec<usize>>>,
    action: BTreeMap<String, Vec<Vec<usize>>>,
    restriction: BTreeMap<String, Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    permutations: Option<Vec<Vec<Vec<usize>>>>,
}

fn key(m: usize, n: usize) -> String {
    format!("{m},{n}")
}

fn bad(msg: impl Into<String>) -> Error {
    Error::CrossedTable(msg.into())
}

impl CrossedTable {
    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Tabulates a crossed group up to `arity`.
    pub fn tabulate(group: &CrossedGroup, arity: usize) -> Result<Self> {
        let mut file = TableFile {
            arity_groups: Vec::new(),
            action: BTreeMap::new(),
            restriction: BTreeMap::new(),
            permutations: None,
        };
        let mut perms = Vec::new();
        for n in 0..=arity {
            let k = group.order(n)?;
            file.arity_groups
                .push((0..k).map(|a| (0..k).map(|b| group.mul(n, a, b)).collect()).collect());
            perms.push((0..k).map(|x| group.perm(n, x)).collect::<Option<Vec<_>>>());
        }
        if perms.iter().all(Option::is_some) {
            file.permutations = Some(perms.into_iter().map(Option::unwrap).collect());
        }
        for m in 0..=arity {
            for n in 0..=arity {
                let fs = monotone_maps(m, n, false);
                let idx: HashMap<&Vec<usize>, usize> =
                    fs.iter().enumerate().map(|(i, f)| (f, i)).collect();
                let act = (0..group.order(n)?)
                    .map(|y| fs.iter().map(|f| idx[&group.act(y, f, n)]).collect())
                    .collect();
                let res = fs
                    .iter()
                    .map(|f| (0..group.order(n).unwrap()).map(|y| group.restrict(f, n, y)).collect())
                    .collect();
                file.action.insert(key(m, n), act);
                file.restriction.insert(key(m, n), res);
            }
        }
        Self::from_file(file)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: TableFile =
            serde_json::from_str(text).map_err(|e| bad(format!("parse error: {e}")))?;
        Self::from_file(file)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut file = TableFile {
            arity_groups: self.mult.clone(),
            action: BTreeMap::new(),
            restriction: BTreeMap::new(),
            permutations: self.permutations.clone(),
        };
        for m in 0..=self.arity {
            for n in 0..=self.arity {
                file.action.insert(key(m, n), self.action[m][n].clone());
                file.restriction.insert(key(m, n), self.restriction[m][n].clone());
            }
        }
        serde_json::to_value(file).expect("table serializes")
    }

    fn from_file(file: TableFile) -> Result<Self> {
        if file.arity_groups.is_empty() {
            return Err(bad("no arities given"));
        }
        let arity = file.arity_groups.len() - 1;
        let mut inv = Vec::new();
        for (n, table) in file.arity_groups.iter().enumerate() {
            let k = table.len();
            if k == 0 {
                return Err(bad(format!("G({n}) is empty")));
            }
            if table.iter().any(|row| row.len() != k || row.iter().any(|&v| v >= k)) {
                return Err(bad(format!("G({n}) multiplication table is not square")));
            }
            for a in 0..k {
                if table[0][a] != a || table[a][0] != a {
                    return Err(bad(format!("element 0 of G({n}) is not the unit")));
                }
                for b in 0..k {
                    for c in 0..k {
                        if table[table[a][b]][c] != table[a][table[b][c]] {
                            return Err(bad(format!("G({n}) is not associative at ({a},{b},{c})")));
                        }
                    }
                }
            }
            let mut row = Vec::with_capacity(k);
            for a in 0..k {
                let b = (0..k)
                    .find(|&b| table[a][b] == 0)
                    .ok_or_else(|| bad(format!("element {a} of G({n}) has no inverse")))?;
                if table[b][a] != 0 {
                    return Err(bad(format!("element {a} of G({n}) has no two-sided inverse")));
                }
                row.push(b);
            }
            inv.push(row);
        }
        let mut maps = vec![vec![Vec::new(); arity + 1]; arity + 1];
        let mut map_index = HashMap::new();
        let mut action = vec![vec![Vec::new(); arity + 1]; arity + 1];
        let mut restriction = vec![vec![Vec::new(); arity + 1]; arity + 1];
        for m in 0..=arity {
            for n in 0..=arity {
                let fs = monotone_maps(m, n, false);
                let gm = file.arity_groups[m].len();
                let gn = file.arity_groups[n].len();
                let act = file
                    .action
                    .get(&key(m, n))
                    .ok_or_else(|| bad(format!("missing action for ({m},{n})")))?;
                if act.len() != gn || act.iter().any(|r| r.len() != fs.len() || r.iter().any(|&v| v >= fs.len())) {
                    return Err(bad(format!("action table ({m},{n}) has the wrong shape")));
                }
                let res = file
                    .restriction
                    .get(&key(m, n))
                    .ok_or_else(|| bad(format!("missing restriction for ({m},{n})")))?;
                if res.len() != fs.len() || res.iter().any(|r| r.len() != gn || r.iter().any(|&v| v >= gm)) {
                    return Err(bad(format!("restriction table ({m},{n}) has the wrong shape")));
                }
                map_index.insert((m, n), fs.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect());
                maps[m][n] = fs;
                action[m][n] = act.clone();
                restriction[m][n] = res.clone();
            }
        }
        if let Some(perms) = &file.permutations {
            if perms.len() != arity + 1 {
                return Err(bad("permutations must cover every arity"));
            }
            for (n, ps) in perms.iter().enumerate() {
                if ps.len() != file.arity_groups[n].len() {
                    return Err(bad(format!("permutations for G({n}) have the wrong count")));
                }
                for p in ps {
                    let mut sorted = p.clone();
                    sorted.sort_unstable();
                    if sorted != (0..n).collect::<Vec<_>>() {
                        return Err(bad(format!("{p:?} is not a permutation of {n}")));
                    }
                }
            }
        }
        Ok(CrossedTable {
            arity,
            mult: file.arity_groups,
            inv,
            maps,
            map_index,
            action,
            restriction,
            permutations: file.permutations,
        })
    }

    fn map_idx(&self, f: &[usize], n: usize) -> usize {
        self.map_index[&(f.len(), n)][f]
    }
}

#[derive(Clone, Debug)]
pub enum CrossedGroup {
    Trivial,
    Symmetric,
    Table(Arc<CrossedTable>),
}

impl CrossedGroup {
    pub fn is_trivial(&self) -> bool {
        matches!(self, CrossedGroup::Trivial)
    }

    pub fn max_arity(&self) -> Option<usize> {
        match self {
            CrossedGroup::Table(t) => Some(t.arity),
            _ => None,
        }
    }

    fn check_arity(&self, n: usize) -> Result<()> {
        match self.max_arity() {
            Some(a) if n > a => Err(Error::Truncation { needed: n, bound: a }),
            _ => Ok(()),
        }
    }

    pub fn order(&self, n: usize) -> Result<usize> {
        self.check_arity(n)?;
        Ok(match self {
            CrossedGroup::Trivial => 1,
            CrossedGroup::Symmetric => factorial(n),
            CrossedGroup::Table(t) => t.mult[n].len(),
        })
    }

    pub fn mul(&self, n: usize, a: usize, b: usize) -> usize {
        match self {
            CrossedGroup::Trivial => 0,
            CrossedGroup::Symmetric => {
                if a == 0 {
                    return b;
                }
                if b == 0 {
                    return a;
                }
                let (pa, pb) = (perm_unrank(n, a), perm_unrank(n, b));
                perm_rank(&pb.iter().map(|&i| pa[i]).collect::<Vec<_>>())
            }
            CrossedGroup::Table(t) => t.mult[n][a][b],
        }
    }

    pub fn inv(&self, n: usize, a: usize) -> usize {
        match self {
            CrossedGroup::Trivial => 0,
            CrossedGroup::Symmetric => {
                let p = perm_unrank(n, a);
                let mut q = vec![0; n];
                for (i, &v) in p.iter().enumerate() {
                    q[v] = i;
                }
                perm_rank(&q)
            }
            CrossedGroup::Table(t) => t.inv[n][a],
        }
    }

    /// `y·f` for `y ∈ G(n)` and a monotone `f: m → n`.
    pub fn act(&self, y: usize, f: &[usize], n: usize) -> Vec<usize> {
        if y == 0 {
            return f.to_vec();
        }
        match self {
            CrossedGroup::Trivial => f.to_vec(),
            CrossedGroup::Symmetric => sigma_act(&perm_unrank(n, y), f),
            CrossedGroup::Table(t) => {
                let m = f.len();
                t.maps[m][n][t.action[m][n][y][t.map_idx(f, n)]].clone()
            }
        }
    }

    /// `f^∗y ∈ G(m)` for a monotone `f: m → n` and `y ∈ G(n)`.
    pub fn restrict(&self, f: &[usize], n: usize, y: usize) -> usize {
        match self {
            CrossedGroup::Trivial => 0,
            CrossedGroup::Symmetric => {
                if y == 0 {
                    return 0;
                }
                perm_rank(&sigma_restrict(f, &perm_unrank(n, y)))
            }
            CrossedGroup::Table(t) => t.restriction[f.len()][n][t.map_idx(f, n)][y],
        }
    }

    /// The permutation of `n` underlying `x`, when known.
    pub fn perm(&self, n: usize, x: usize) -> Option<Vec<usize>> {
        match self {
            CrossedGroup::Trivial => Some((0..n).collect()),
            CrossedGroup::Symmetric => Some(perm_unrank(n, x)),
            CrossedGroup::Table(t) => t.permutations.as_ref().map(|p| p[n][x].clone()),
        }
    }

    /// `x ⊕ y ∈ G(m+n)`, the block sum used by the monoidal structure.
    pub fn block_sum(&self, m: usize, x: usize, n: usize, y: usize) -> Result<usize> {
        match self {
            CrossedGroup::Trivial => Ok(0),
            CrossedGroup::Symmetric => {
                let mut p = perm_unrank(m, x);
                p.extend(perm_unrank(n, y).into_iter().map(|v| v + m));
                Ok(perm_rank(&p))
            }
            CrossedGroup::Table(t) => {
                self.check_arity(m + n)?;
                let perms = t
                    .permutations
                    .as_ref()
                    .ok_or_else(|| Error::NotMonoidal("table has no permutation data".into()))?;
                let mut p = perms[m][x].clone();
                p.extend(perms[n][y].iter().map(|v| v + m));
                perms[m + n]
                    .iter()
                    .position(|q| *q == p)
                    .ok_or_else(|| Error::NotMonoidal(format!("block sum {p:?} not in G({})", m + n)))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lehmer_roundtrip() {
        for n in 0..6 {
            for r in 0..factorial(n) {
                assert_eq!(perm_rank(&perm_unrank(n, r)), r);
            }
            assert_eq!(perm_unrank(n, 0), (0..n).collect::<Vec<_>>());
        }
    }

    #[test]
    fn block_move_example() {
        let f = [0, 0, 1];
        let y = [1, 0];
        assert_eq!(sigma_act(&y, &f), vec![0, 1, 1]);
        assert_eq!(sigma_restrict(&f, &y), vec![1, 2, 0]);
    }

    /// The factorization `y∘f = (y·f)∘(f^∗y)` of set maps, with `f^∗y` order preserving on fibres.
    #[test]
    fn block_move_factorizes_set_composite() {
        for m in 0..5 {
            for n in 0..4 {
                for f in monotone_maps(m, n, false) {
                    for r in 0..factorial(n) {
                        let y = perm_unrank(n, r);
                        let yf = sigma_act(&y, &f);
                        let x = sigma_restrict(&f, &y);
                        assert!(yf.windows(2).all(|w| w[0] <= w[1]));
                        for j in 0..m {
                            assert_eq!(yf[x[j]], y[f[j]]);
                        }
                        for j in 1..m {
                            if f[j] == f[j - 1] {
                                assert!(x[j] > x[j - 1]);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn tabulated_sigma_roundtrips_through_json() {
        let t = CrossedTable::tabulate(&CrossedGroup::Symmetric, 3).unwrap();
        let text = t.to_json().to_string();
        let back = CrossedTable::from_json(&text).unwrap();
        assert_eq!(back.to_json(), t.to_json());
        let g = CrossedGroup::Table(Arc::new(back));
        for n in 0..=3 {
            for a in 0..factorial(n) {
                for b in 0..factorial(n) {
                    assert_eq!(g.mul(n, a, b), CrossedGroup::Symmetric.mul(n, a, b));
                }
            }
        }
        assert_eq!(g.block_sum(1, 0, 2, 1).unwrap(), CrossedGroup::Symmetric.block_sum(1, 0, 2, 1).unwrap());
    }

    #[test]
    fn malformed_tables_are_rejected() {
        assert!(CrossedTable::from_json("{}").is_err());
        let bad_group = r#"{"arity_groups":[[[0]],[[0,1],[0,1]]],"action":{},"restriction":{}}"#;
        assert!(CrossedTable::from_json(bad_group).is_err());
    }
}
