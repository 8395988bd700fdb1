//! Sparse exact linear algebra over the rationals.
//!
//! Vectors are sorted `(index, value)` lists without zeros. [`Echelon`] keeps a
//! basis in echelon form keyed by each vector's smallest index and can track,
//! for every basis vector, the combination of inserted columns it came from.
//! That is enough for rank, membership, kernels and particular solutions.
//! [`BlockSolver`] splits a column set into connected components (columns
//! sharing a row) and solves each block independently.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::algebra::{GradedPoly, Term};
use crate::Q;

pub type SparseVec = Vec<(usize, Q)>;

/// `a - f * b`.
pub fn axpy(a: &SparseVec, f: &Q, b: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, -(f * &b[j].1)));
            j += 1;
        } else {
            let v = &a[i].1 - f * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale(v: &SparseVec, f: &Q) -> SparseVec {
    if f.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, x * f)).collect()
}

/// Builds a sorted sparse vector, merging duplicate indices.
pub fn sparse_from(entries: impl IntoIterator<Item = (usize, Q)>) -> SparseVec {
    let mut m: BTreeMap<usize, Q> = BTreeMap::new();
    for (i, x) in entries {
        *m.entry(i).or_insert_with(Q::zero) += x;
    }
    m.into_iter().filter(|(_, x)| !x.is_zero()).collect()
}

#[derive(Clone, Debug)]
struct Row {
    vec: SparseVec,
    prov: SparseVec,
}

/// Incremental echelon basis. Every stored vector is scaled so that its
/// pivot (smallest index) carries coefficient 1, and pivots are distinct.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<Row>,
    pivot_of: HashMap<usize, usize>,
}

pub enum Insert {
    Independent,
    /// The inserted vector was dependent; the payload is the provenance
    /// combination that vanishes.
    Dependent(SparseVec),
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` until its smallest index is not a pivot (or it is zero).
    /// `prov` accumulates the subtracted provenance.
    fn reduce(&self, mut v: SparseVec, mut prov: SparseVec) -> (SparseVec, SparseVec) {
        while let Some((i, a)) = v.first() {
            let Some(&k) = self.pivot_of.get(i) else { break };
            let f = a.clone();
            let row = &self.rows[k];
            v = axpy(&v, &f, &row.vec);
            if !row.prov.is_empty() {
                prov = axpy(&prov, &f, &row.prov);
            }
        }
        (v, prov)
    }

    /// Inserts `v`, tagged with provenance `prov` (typically a unit vector
    /// naming the column).
    pub fn insert(&mut self, v: SparseVec, prov: SparseVec) -> Insert {
        let (v, prov) = self.reduce(v, prov);
        match v.first() {
            None => Insert::Dependent(prov),
            Some((p, lead)) => {
                let inv = Q::one() / lead;
                let vec = scale(&v, &inv);
                let prov = scale(&prov, &inv);
                let p = *p;
                self.pivot_of.insert(p, self.rows.len());
                self.rows.push(Row { vec, prov });
                Insert::Independent
            }
        }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v.clone(), Vec::new()).0.is_empty()
    }

    /// Finds `x` with `Σ x_j · prov-column_j = b`, as a provenance combination.
    pub fn solve(&self, b: &SparseVec) -> Option<SparseVec> {
        let (rest, prov) = self.reduce(b.clone(), Vec::new());
        if !rest.is_empty() {
            return None;
        }
        Some(scale(&prov, &-Q::one()))
    }

    /// Stored vectors whose pivot is at least `from`. When the coordinates
    /// below `from` were ordered first, these span the intersection of the
    /// inserted span with the coordinate subspace `[from, ∞)`.
    pub fn vectors_from(&self, from: usize) -> Vec<SparseVec> {
        let mut v: Vec<&Row> = self.rows.iter().filter(|r| r.vec[0].0 >= from).collect();
        v.sort_by_key(|r| r.vec[0].0);
        v.into_iter().map(|r| r.vec.clone()).collect()
    }
}

/// Kernel basis of the given columns, each kernel vector expressed over
/// column indices.
pub fn kernel(columns: &[SparseVec]) -> Vec<SparseVec> {
    let mut e = Echelon::new();
    let mut out = Vec::new();
    for (j, c) in columns.iter().enumerate() {
        if let Insert::Dependent(k) = e.insert(c.clone(), vec![(j, Q::one())]) {
            out.push(k);
        }
    }
    out
}

pub fn rank(vectors: &[SparseVec]) -> usize {
    let mut e = Echelon::new();
    for v in vectors {
        e.insert(v.clone(), Vec::new());
    }
    e.rank()
}

/// Groups columns into connected components of the column/row incidence
/// graph. Components are ordered by their smallest column.
pub fn connected_components(columns: &[SparseVec]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..columns.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut owner: HashMap<usize, usize> = HashMap::new();
    for (j, c) in columns.iter().enumerate() {
        for (r, _) in c {
            match owner.get(r) {
                Some(&o) => {
                    let (a, b) = (find(&mut parent, o), find(&mut parent, j));
                    if a != b {
                        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                        parent[hi] = lo;
                    }
                }
                None => {
                    owner.insert(*r, j);
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for j in 0..columns.len() {
        let root = find(&mut parent, j);
        groups.entry(root).or_default().push(j);
    }
    groups.into_values().collect()
}

/// Solves many right-hand sides against a fixed column set, one connected
/// block at a time. Block echelons are built on first use.
pub struct BlockSolver {
    columns: Vec<SparseVec>,
    blocks: Vec<Vec<usize>>,
    row_block: HashMap<usize, usize>,
    echelons: Vec<Option<Echelon>>,
}

impl BlockSolver {
    pub fn new(columns: Vec<SparseVec>) -> Self {
        let blocks = connected_components(&columns);
        let mut row_block = HashMap::new();
        for (b, cols) in blocks.iter().enumerate() {
            for &j in cols {
                for (r, _) in &columns[j] {
                    row_block.insert(*r, b);
                }
            }
        }
        let echelons = vec![None; blocks.len()];
        BlockSolver { columns, blocks, row_block, echelons }
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    fn echelon(&mut self, b: usize) -> &Echelon {
        if self.echelons[b].is_none() {
            let mut e = Echelon::new();
            for &j in &self.blocks[b] {
                e.insert(self.columns[j].clone(), vec![(j, Q::one())]);
            }
            self.echelons[b] = Some(e);
        }
        self.echelons[b].as_ref().unwrap()
    }

    /// `x` over column indices with `Σ x_j column_j = rhs`, if one exists.
    pub fn solve(&mut self, rhs: &SparseVec) -> Option<SparseVec> {
        let mut parts: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for (r, x) in rhs {
            let b = *self.row_block.get(r)?;
            parts.entry(b).or_default().push((*r, x.clone()));
        }
        let mut out = Vec::new();
        for (b, part) in parts {
            out.extend(self.echelon(b).solve(&part)?);
        }
        Some(sparse_from(out))
    }

    /// Kernel basis, block by block.
    pub fn kernel(&self) -> Vec<SparseVec> {
        let mut out = Vec::new();
        for cols in &self.blocks {
            let mut e = Echelon::new();
            for &j in cols {
                if let Insert::Dependent(k) = e.insert(self.columns[j].clone(), vec![(j, Q::one())]) {
                    out.push(k);
                }
            }
        }
        out
    }
}

/// Assigns row indices to terms, in order of first appearance.
#[derive(Clone, Debug, Default)]
pub struct TermIndex {
    map: HashMap<Term, usize>,
    terms: Vec<Term>,
}

impl TermIndex {
    pub fn new() -> Self {
        TermIndex::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = Term>) -> Self {
        let mut idx = TermIndex::new();
        for t in terms {
            idx.intern(&t);
        }
        idx
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn intern(&mut self, t: &Term) -> usize {
        if let Some(&i) = self.map.get(t) {
            return i;
        }
        let i = self.terms.len();
        self.map.insert(t.clone(), i);
        self.terms.push(t.clone());
        i
    }

    pub fn get(&self, t: &Term) -> Option<usize> {
        self.map.get(t).copied()
    }

    pub fn term(&self, i: usize) -> &Term {
        &self.terms[i]
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Sparse coordinates of `p`, interning unseen terms.
    pub fn encode(&mut self, p: &GradedPoly) -> SparseVec {
        sparse_from(p.terms().map(|(t, c)| (self.intern(t), c.clone())))
    }

    /// Sparse coordinates of `p` if every term is already indexed.
    pub fn try_encode(&self, p: &GradedPoly) -> Option<SparseVec> {
        let mut v = Vec::with_capacity(p.len());
        for (t, c) in p.terms() {
            v.push((self.get(t)?, c.clone()));
        }
        Some(sparse_from(v))
    }

    pub fn decode(&self, v: &SparseVec) -> GradedPoly {
        v.iter()
            .map(|(i, c)| (self.terms[*i].clone(), c.clone()))
            .collect()
    }
}
