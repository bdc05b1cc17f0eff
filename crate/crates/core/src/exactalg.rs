//! Exact sparse linear algebra over GF(2), Q and Z.
//!
//! The homological workloads only ever need two things: the rank of a sparse
//! differential and membership of a vector in its column span (with an optional
//! witness combination). Both are served by streaming column reducers that keep
//! reduced columns indexed by their highest nonzero row. Integer solving and
//! torsion go through dense Hermite / Smith normal forms, which only ever see
//! the small graded pieces.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CoefficientRing {
    Gf2,
    Rational,
    Integer,
}

impl std::fmt::Display for CoefficientRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CoefficientRing::Gf2 => write!(f, "gf2"),
            CoefficientRing::Rational => write!(f, "q"),
            CoefficientRing::Integer => write!(f, "z"),
        }
    }
}

/// Sparse integer matrix; no stored zeros.
#[derive(Clone, Debug, Default)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: BTreeMap<(u32, u32), BigInt>,
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn set(&mut self, r: usize, c: usize, v: impl Into<BigInt>) {
        let v = v.into();
        assert!(r < self.rows && c < self.cols);
        if v.is_zero() {
            self.entries.remove(&(r as u32, c as u32));
        } else {
            self.entries.insert((r as u32, c as u32), v);
        }
    }

    pub fn column(&self, c: usize) -> Vec<(u32, BigInt)> {
        self.entries
            .range((0u32, c as u32)..=(self.rows as u32, c as u32))
            .filter(|((_, cc), _)| *cc == c as u32)
            .map(|((r, _), v)| (*r, v.clone()))
            .collect()
    }

    /// Columns in order, each sorted by row.
    pub fn columns(&self) -> Vec<Vec<(u32, BigInt)>> {
        let mut cols = vec![Vec::new(); self.cols];
        for ((r, c), v) in &self.entries {
            cols[*c as usize].push((*r, v.clone()));
        }
        cols
    }

    pub fn mul_vec(&self, x: &SparseVector) -> SparseVector {
        let mut out: BTreeMap<u32, BigRational> = BTreeMap::new();
        for ((r, c), v) in &self.entries {
            if let Some(xv) = x.entries.get(c) {
                let e = out.entry(*r).or_insert_with(BigRational::zero);
                *e += BigRational::from(v.clone()) * xv;
            }
        }
        out.retain(|_, v| !v.is_zero());
        SparseVector { len: self.rows, entries: out }
    }
}

/// Sparse vector with rational entries (integers embed).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseVector {
    pub len: usize,
    pub entries: BTreeMap<u32, BigRational>,
}

impl SparseVector {
    pub fn new(len: usize) -> Self {
        SparseVector { len, entries: BTreeMap::new() }
    }

    pub fn set(&mut self, i: usize, v: BigRational) {
        if v.is_zero() {
            self.entries.remove(&(i as u32));
        } else {
            self.entries.insert(i as u32, v);
        }
    }

    pub fn set_int(&mut self, i: usize, v: impl Into<BigInt>) {
        self.set(i, BigRational::from(v.into()));
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.entries.values().all(|v| v.denom().is_one())
    }
}

// ---------------------------------------------------------------------------
// GF(2) streaming reducer

/// Incremental column reduction over GF(2). Columns arrive as sorted row-index
/// lists; each is reduced against the stored pivots (pivot = highest row) and
/// kept if nonzero. Deterministic: depends only on arrival order.
pub struct Gf2Reducer {
    nrows: usize,
    dense: Vec<u64>,
    pivot_of_row: Vec<u32>,
    cols: Vec<Vec<u32>>,
    // original-column combinations, tracked only when certificates are needed
    combos: Option<Vec<Vec<u32>>>,
    combo_dense: Vec<u64>,
    n_seen: usize,
    pub stored_entries: usize,
}

const NO_PIVOT: u32 = u32::MAX;

impl Gf2Reducer {
    pub fn new(nrows: usize, track_combinations: bool) -> Self {
        Gf2Reducer {
            nrows,
            dense: vec![0u64; nrows / 64 + 1],
            pivot_of_row: vec![NO_PIVOT; nrows],
            cols: Vec::new(),
            combos: if track_combinations { Some(Vec::new()) } else { None },
            combo_dense: Vec::new(),
            n_seen: 0,
            stored_entries: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.cols.len()
    }

    fn load(dense: &mut [u64], rows: &[u32]) {
        for &r in rows {
            dense[(r / 64) as usize] ^= 1u64 << (r % 64);
        }
    }

    fn top_bit(dense: &[u64], from: u32) -> Option<u32> {
        let mut w = (from / 64) as usize;
        loop {
            if dense[w] != 0 {
                return Some(w as u32 * 64 + 63 - dense[w].leading_zeros());
            }
            if w == 0 {
                return None;
            }
            w -= 1;
        }
    }

    /// Reduce `rows` against the stored pivots. Returns the residual (sorted)
    /// and, when tracking, the combination of previously added columns used.
    fn reduce(&mut self, rows: &[u32], seed_combo: Option<u32>) -> (Vec<u32>, Vec<u32>) {
        debug_assert!(rows.windows(2).all(|w| w[0] < w[1]));
        let track = self.combos.is_some();
        if track && self.combo_dense.len() * 64 <= self.n_seen {
            self.combo_dense.resize(self.n_seen / 64 + 1, 0);
        }
        let dense = &mut self.dense;
        let combo_dense = &mut self.combo_dense;
        let cols = &self.cols;
        let combos = self.combos.as_ref();
        let pivot_of_row = &self.pivot_of_row;
        Self::load(dense, rows);
        let mut combo_touched: Vec<u32> = Vec::new();
        if track {
            if let Some(ci) = seed_combo {
                combo_dense[(ci / 64) as usize] ^= 1u64 << (ci % 64);
                combo_touched.push(ci);
            }
        }
        let mut cursor = self.nrows.saturating_sub(1) as u32;
        let mut residual: Vec<u32> = Vec::new();
        while let Some(top) = Self::top_bit(dense, cursor) {
            cursor = top;
            let p = pivot_of_row[top as usize];
            if p == NO_PIVOT {
                // this bit survives; clear it and keep scanning below
                dense[(top / 64) as usize] ^= 1u64 << (top % 64);
                residual.push(top);
                if top == 0 {
                    break;
                }
                cursor = top - 1;
                continue;
            }
            Self::load(dense, &cols[p as usize]);
            if track {
                for &ci in &combos.unwrap()[p as usize] {
                    combo_dense[(ci / 64) as usize] ^= 1u64 << (ci % 64);
                    combo_touched.push(ci);
                }
            }
        }
        residual.reverse();
        let mut combo = Vec::new();
        if track {
            combo_touched.sort_unstable();
            combo_touched.dedup();
            for ci in combo_touched {
                if combo_dense[(ci / 64) as usize] >> (ci % 64) & 1 == 1 {
                    combo.push(ci);
                    combo_dense[(ci / 64) as usize] ^= 1u64 << (ci % 64);
                }
            }
        }
        (residual, combo)
    }

    /// Add the next matrix column (sorted row indices).
    pub fn add_column(&mut self, rows: &[u32]) {
        let idx = self.n_seen as u32;
        self.n_seen += 1;
        let (residual, combo) = self.reduce(rows, Some(idx));
        if let Some(&top) = residual.last() {
            self.pivot_of_row[top as usize] = self.cols.len() as u32;
            self.stored_entries += residual.len() + combo.len();
            self.cols.push(residual);
            if let Some(cs) = self.combos.as_mut() {
                cs.push(combo);
            }
        }
    }

    /// Membership of `rows` in the span of the added columns. When tracking is
    /// on and the vector is in the span, returns the witness combination of
    /// original column indices.
    pub fn solve(&mut self, rows: &[u32]) -> Option<Vec<u32>> {
        let (residual, combo) = self.reduce(rows, None);
        if residual.is_empty() {
            Some(combo)
        } else {
            None
        }
    }

    pub fn in_span(&mut self, rows: &[u32]) -> bool {
        let (residual, _) = self.reduce(rows, None);
        residual.is_empty()
    }
}

// ---------------------------------------------------------------------------
// Rational streaming reducer

/// Same scheme over Q. Stored columns are normalized so the pivot entry is 1.
pub struct RatReducer {
    work: Vec<BigRational>,
    pivot_of_row: Vec<u32>,
    cols: Vec<Vec<(u32, BigRational)>>,
    combos: Option<Vec<Vec<(u32, BigRational)>>>,
    combo_work: BTreeMap<u32, BigRational>,
    n_seen: usize,
}

impl RatReducer {
    pub fn new(nrows: usize, track_combinations: bool) -> Self {
        RatReducer {
            work: vec![BigRational::zero(); nrows],
            pivot_of_row: vec![NO_PIVOT; nrows],
            cols: Vec::new(),
            combos: if track_combinations { Some(Vec::new()) } else { None },
            combo_work: BTreeMap::new(),
            n_seen: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.cols.len()
    }

    fn reduce(
        &mut self,
        col: &[(u32, BigRational)],
        seed_combo: Option<u32>,
    ) -> (Vec<(u32, BigRational)>, Vec<(u32, BigRational)>) {
        use std::collections::BTreeSet;
        let mut active: BTreeSet<u32> = BTreeSet::new();
        for (r, v) in col {
            let nv = &self.work[*r as usize] + v;
            self.work[*r as usize] = nv;
            active.insert(*r);
        }
        let track = self.combos.is_some();
        if track {
            if let Some(ci) = seed_combo {
                self.combo_work.insert(ci, BigRational::one());
            }
        }
        // pop rows from the top; eliminating row r only fills in rows below it
        let mut residual: Vec<(u32, BigRational)> = Vec::new();
        while let Some(r) = active.pop_last() {
            if self.work[r as usize].is_zero() {
                continue;
            }
            let p = self.pivot_of_row[r as usize];
            if p == NO_PIVOT {
                residual.push((r, std::mem::replace(&mut self.work[r as usize], BigRational::zero())));
                continue;
            }
            let factor = std::mem::replace(&mut self.work[r as usize], BigRational::zero());
            let pcol = self.cols[p as usize].clone();
            for (rr, v) in &pcol {
                if *rr == r {
                    continue; // pivot entry, already cleared by taking factor
                }
                let nv = &self.work[*rr as usize] - &factor * v;
                self.work[*rr as usize] = nv;
                active.insert(*rr);
            }
            if track {
                let pc = self.combos.as_ref().unwrap()[p as usize].clone();
                for (ci, v) in &pc {
                    let e = self.combo_work.entry(*ci).or_insert_with(BigRational::zero);
                    *e -= &factor * v;
                }
            }
        }
        residual.reverse();
        let mut combo = Vec::new();
        if track {
            for (ci, v) in std::mem::take(&mut self.combo_work) {
                if !v.is_zero() {
                    combo.push((ci, v));
                }
            }
        }
        (residual, combo)
    }

    pub fn add_column(&mut self, col: &[(u32, BigRational)]) {
        let idx = self.n_seen as u32;
        self.n_seen += 1;
        let (mut residual, mut combo) = self.reduce(col, Some(idx));
        if let Some((top, pv)) = residual.last().cloned() {
            let inv = pv.recip();
            for (_, v) in residual.iter_mut() {
                *v *= &inv;
            }
            for (_, v) in combo.iter_mut() {
                *v *= &inv;
            }
            self.pivot_of_row[top as usize] = self.cols.len() as u32;
            self.cols.push(residual);
            if let Some(cs) = self.combos.as_mut() {
                cs.push(combo);
            }
        }
    }

    /// Membership with witness (negated combination solves A x = b).
    pub fn solve(&mut self, col: &[(u32, BigRational)]) -> Option<Vec<(u32, BigRational)>> {
        let (residual, combo) = self.reduce(col, None);
        if residual.is_empty() {
            // reduce() computed b - sum c_i a_i = 0, so x = c
            Some(combo.into_iter().map(|(i, v)| (i, -v)).collect())
        } else {
            None
        }
    }

    pub fn in_span(&mut self, col: &[(u32, BigRational)]) -> bool {
        let (residual, _) = self.reduce(col, None);
        residual.is_empty()
    }
}

// ---------------------------------------------------------------------------
// Spec-level operations

pub fn rank(m: &SparseMatrix, ring: CoefficientRing) -> usize {
    match ring {
        CoefficientRing::Gf2 => {
            let mut red = Gf2Reducer::new(m.rows, false);
            for col in m.columns() {
                let rows: Vec<u32> = col
                    .iter()
                    .filter(|(_, v)| v.mod_floor(&BigInt::from(2)).is_one())
                    .map(|(r, _)| *r)
                    .collect();
                red.add_column(&rows);
            }
            red.rank()
        }
        _ => {
            let mut red = RatReducer::new(m.rows, false);
            for col in m.columns() {
                let rc: Vec<(u32, BigRational)> =
                    col.into_iter().map(|(r, v)| (r, BigRational::from(v))).collect();
                red.add_column(&rc);
            }
            red.rank()
        }
    }
}

/// Solve M x = b in the given ring. Over Integer the Hermite normal form of the
/// augmented column system decides integrality. Every returned solution is
/// re-verified.
pub fn solve(m: &SparseMatrix, b: &SparseVector, ring: CoefficientRing) -> Option<SparseVector> {
    assert_eq!(m.rows, b.len);
    let sol = match ring {
        CoefficientRing::Gf2 => {
            let mut red = Gf2Reducer::new(m.rows, true);
            for col in m.columns() {
                let rows: Vec<u32> = col
                    .iter()
                    .filter(|(_, v)| v.mod_floor(&BigInt::from(2)).is_one())
                    .map(|(r, _)| *r)
                    .collect();
                red.add_column(&rows);
            }
            let brows: Vec<u32> = b
                .entries
                .iter()
                .filter(|(_, v)| {
                    v.denom().is_one() && v.numer().mod_floor(&BigInt::from(2)).is_one()
                })
                .map(|(r, _)| *r)
                .collect();
            let combo = red.solve(&brows)?;
            let mut x = SparseVector::new(m.cols);
            for ci in combo {
                x.set_int(ci as usize, 1);
            }
            Some(x)
        }
        CoefficientRing::Rational => {
            let mut red = RatReducer::new(m.rows, true);
            for col in m.columns() {
                let rc: Vec<(u32, BigRational)> =
                    col.into_iter().map(|(r, v)| (r, BigRational::from(v))).collect();
                red.add_column(&rc);
            }
            let bcol: Vec<(u32, BigRational)> =
                b.entries.iter().map(|(r, v)| (*r, v.clone())).collect();
            let combo = red.solve(&bcol)?;
            let mut x = SparseVector::new(m.cols);
            for (ci, v) in combo {
                x.set(ci as usize, v);
            }
            Some(x)
        }
        CoefficientRing::Integer => solve_integer(m, b),
    };
    // re-verify
    if let Some(x) = &sol {
        let mut bx = m.mul_vec(x);
        for (r, v) in &b.entries {
            let e = bx.entries.entry(*r).or_insert_with(BigRational::zero);
            match ring {
                CoefficientRing::Gf2 => {
                    let diff = (&*e - v).numer().mod_floor(&BigInt::from(2));
                    assert!(diff.is_zero(), "gf2 solve verification failed");
                    bx.entries.remove(r);
                }
                _ => {
                    assert_eq!(&*e, v, "solve verification failed");
                    bx.entries.remove(r);
                }
            }
        }
        for (_, v) in bx.entries {
            match ring {
                CoefficientRing::Gf2 => {
                    assert!(v.numer().mod_floor(&BigInt::from(2)).is_zero())
                }
                _ => assert!(v.is_zero()),
            }
        }
    }
    sol
}

fn solve_integer(m: &SparseMatrix, b: &SparseVector) -> Option<SparseVector> {
    if !b.is_integral() {
        return None;
    }
    // HNF of A by column operations: A U = H, H in column echelon form.
    // Forward-substitute H y = b; integral iff each pivot divides. Then x = U y.
    let nr = m.rows;
    let nc = m.cols;
    let mut h: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); nr]; nc]; // column major
    for ((r, c), v) in &m.entries {
        h[*c as usize][*r as usize] = v.clone();
    }
    let mut u: Vec<Vec<BigInt>> = (0..nc)
        .map(|c| {
            let mut col = vec![BigInt::zero(); nc];
            col[c] = BigInt::one();
            col
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut next_col = 0usize;
    for row in 0..nr {
        // gcd-combine columns next_col.. to clear row, leaving one pivot
        let mut piv: Option<usize> = None;
        for c in next_col..nc {
            if h[c][row].is_zero() {
                continue;
            }
            match piv {
                None => piv = Some(c),
                Some(p) => {
                    // combine columns p and c to (g, 0)
                    let a = h[p][row].clone();
                    let bb = h[c][row].clone();
                    let eg = a.extended_gcd(&bb);
                    let (g, s, t) = (eg.gcd, eg.x, eg.y);
                    let ag = &a / &g;
                    let bg = &bb / &g;
                    for r in 0..nr {
                        let hp = h[p][r].clone();
                        let hc = h[c][r].clone();
                        h[p][r] = &s * &hp + &t * &hc;
                        h[c][r] = -&bg * &hp + &ag * &hc;
                    }
                    for r in 0..nc {
                        let up = u[p][r].clone();
                        let uc = u[c][r].clone();
                        u[p][r] = &s * &up + &t * &uc;
                        u[c][r] = -&bg * &up + &ag * &uc;
                    }
                }
            }
        }
        if let Some(p) = piv {
            h.swap(next_col, p);
            u.swap(next_col, p);
            if h[next_col][row].is_negative() {
                for r in 0..nr {
                    h[next_col][r] = -h[next_col][r].clone();
                }
                for r in 0..nc {
                    u[next_col][r] = -u[next_col][r].clone();
                }
            }
            pivots.push((row, next_col));
            next_col += 1;
            if next_col == nc {
                break;
            }
        }
    }
    // forward substitution
    let mut bb: Vec<BigInt> = vec![BigInt::zero(); nr];
    for (r, v) in &b.entries {
        bb[*r as usize] = v.numer().clone();
    }
    let mut y: Vec<BigInt> = vec![BigInt::zero(); nc];
    for &(row, col) in &pivots {
        let rem = bb[row].clone();
        if rem.is_zero() {
            continue;
        }
        let piv = h[col][row].clone();
        let (q, r) = rem.div_rem(&piv);
        if !r.is_zero() {
            return None;
        }
        y[col] = q.clone();
        for rr in 0..nr {
            bb[rr] -= &q * &h[col][rr];
        }
    }
    if bb.iter().any(|v| !v.is_zero()) {
        return None;
    }
    let mut x = SparseVector::new(nc);
    for c in 0..nc {
        if y[c].is_zero() {
            continue;
        }
        for r in 0..nc {
            if !u[c][r].is_zero() {
                let cur = x.entries.remove(&(r as u32)).unwrap_or_else(BigRational::zero);
                x.set(r, cur + BigRational::from(&y[c] * &u[c][r]));
            }
        }
    }
    Some(x)
}

pub struct Snf {
    pub diag: Vec<BigInt>,
    pub u: Vec<Vec<BigInt>>, // rows x rows, row major
    pub v: Vec<Vec<BigInt>>, // cols x cols, row major
}

/// Smith normal form: U M V = S with unimodular U, V and d_1 | d_2 | ...
pub fn smith_normal_form(m: &SparseMatrix) -> Snf {
    let nr = m.rows;
    let nc = m.cols;
    let mut a: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); nc]; nr];
    for ((r, c), v) in &m.entries {
        a[*r as usize][*c as usize] = v.clone();
    }
    let mut u: Vec<Vec<BigInt>> = (0..nr)
        .map(|i| {
            let mut row = vec![BigInt::zero(); nr];
            row[i] = BigInt::one();
            row
        })
        .collect();
    let mut v: Vec<Vec<BigInt>> = (0..nc)
        .map(|i| {
            let mut row = vec![BigInt::zero(); nc];
            row[i] = BigInt::one();
            row
        })
        .collect();
    let t = nr.min(nc);
    let mut k = 0usize;
    while k < t {
        // find a nonzero entry in the submatrix, smallest absolute value
        let mut best: Option<(usize, usize)> = None;
        for i in k..nr {
            for j in k..nc {
                if a[i][j].is_zero() {
                    continue;
                }
                match &best {
                    None => best = Some((i, j)),
                    Some((bi, bj)) => {
                        if a[i][j].abs() < a[*bi][*bj].abs() {
                            best = Some((i, j));
                        }
                    }
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(k, pi);
        u.swap(k, pi);
        for row in a.iter_mut() {
            row.swap(k, pj);
        }
        for row in v.iter_mut() {
            row.swap(k, pj);
        }
        // clear row and column k
        let mut dirty = true;
        while dirty {
            dirty = false;
            for i in (k + 1)..nr {
                if a[i][k].is_zero() {
                    continue;
                }
                let q = a[i][k].div_floor(&a[k][k]);
                if !q.is_zero() {
                    for j in 0..nc {
                        let s = &q * &a[k][j];
                        a[i][j] -= s;
                    }
                    for j in 0..nr {
                        let s = &q * &u[k][j];
                        u[i][j] -= s;
                    }
                }
                if !a[i][k].is_zero() {
                    a.swap(k, i);
                    u.swap(k, i);
                    dirty = true;
                }
            }
            for j in (k + 1)..nc {
                if a[k][j].is_zero() {
                    continue;
                }
                let q = a[k][j].div_floor(&a[k][k]);
                if !q.is_zero() {
                    for i in 0..nr {
                        let s = &q * &a[i][k];
                        a[i][j] -= s;
                    }
                    for i in 0..nc {
                        let s = &q * &v[i][k];
                        v[i][j] -= s;
                    }
                }
                if !a[k][j].is_zero() {
                    for row in a.iter_mut() {
                        row.swap(k, j);
                    }
                    for row in v.iter_mut() {
                        row.swap(k, j);
                    }
                    dirty = true;
                }
            }
        }
        // divisibility: fold any non-divisible entry into column k
        let mut redo = false;
        'outer: for i in (k + 1)..nr {
            for j in (k + 1)..nc {
                if !(&a[i][j] % &a[k][k]).is_zero() {
                    for jj in 0..nc {
                        let s = a[i][jj].clone();
                        a[k][jj] += s;
                    }
                    for jj in 0..nr {
                        let s = u[i][jj].clone();
                        u[k][jj] += s;
                    }
                    redo = true;
                    break 'outer;
                }
            }
        }
        if redo {
            continue;
        }
        if a[k][k].is_negative() {
            for j in 0..nc {
                a[k][j] = -a[k][j].clone();
            }
            for j in 0..nr {
                u[k][j] = -u[k][j].clone();
            }
        }
        k += 1;
    }
    let diag: Vec<BigInt> = (0..t).map(|i| a[i][i].clone()).collect();
    Snf { diag, u, v }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn from_dense(rows: &[&[i64]]) -> SparseMatrix {
        let nr = rows.len();
        let nc = if nr == 0 { 0 } else { rows[0].len() };
        let mut m = SparseMatrix::new(nr, nc);
        for (r, row) in rows.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                m.set(r, c, *v);
            }
        }
        m
    }

    #[test]
    fn rank_examples() {
        let id = from_dense(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(rank(&id, CoefficientRing::Gf2), 3);
        let m = from_dense(&[&[2, 4], &[6, 8]]);
        assert_eq!(rank(&m, CoefficientRing::Rational), 2);
        let z = SparseMatrix::new(3, 3);
        assert_eq!(rank(&z, CoefficientRing::Rational), 0);
        assert_eq!(rank(&z, CoefficientRing::Gf2), 0);
    }

    #[test]
    fn solve_gf2_back_substitution() {
        let m = from_dense(&[&[1, 1], &[0, 1]]);
        let mut b = SparseVector::new(2);
        b.set_int(0, 1);
        let x = solve(&m, &b, CoefficientRing::Gf2).unwrap();
        assert_eq!(x.entries.len(), 1);
        assert!(x.entries.contains_key(&0));
    }

    #[test]
    fn solve_integrality() {
        let m = from_dense(&[&[2]]);
        let mut b = SparseVector::new(1);
        b.set_int(0, 1);
        assert!(solve(&m, &b, CoefficientRing::Integer).is_none());
        let x = solve(&m, &b, CoefficientRing::Rational).unwrap();
        assert_eq!(
            x.entries[&0],
            BigRational::new(BigInt::from(1), BigInt::from(2))
        );
    }

    #[test]
    fn solve_zero() {
        let m = SparseMatrix::new(2, 2);
        let b = SparseVector::new(2);
        for ring in [CoefficientRing::Gf2, CoefficientRing::Rational, CoefficientRing::Integer] {
            let x = solve(&m, &b, ring).unwrap();
            assert!(x.is_zero());
        }
    }

    #[test]
    fn snf_examples() {
        let m = from_dense(&[&[2, 4], &[6, 8]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.diag, vec![BigInt::from(2), BigInt::from(4)]);
        let id = from_dense(&[&[1, 0], &[0, 1]]);
        assert_eq!(smith_normal_form(&id).diag, vec![BigInt::one(), BigInt::one()]);
        let z = from_dense(&[&[0]]);
        assert_eq!(smith_normal_form(&z).diag, vec![BigInt::zero()]);
    }

    fn dense_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        let n = a.len();
        let m = b[0].len();
        let k = b.len();
        let mut out = vec![vec![BigInt::zero(); m]; n];
        for i in 0..n {
            for j in 0..m {
                let mut s = BigInt::zero();
                for t in 0..k {
                    s += &a[i][t] * &b[t][j];
                }
                out[i][j] = s;
            }
        }
        out
    }

    fn det(a: &[Vec<BigInt>]) -> BigInt {
        // fraction-free expansion, small sizes only
        let n = a.len();
        if n == 0 {
            return BigInt::one();
        }
        if n == 1 {
            return a[0][0].clone();
        }
        let mut s = BigInt::zero();
        for j in 0..n {
            if a[0][j].is_zero() {
                continue;
            }
            let minor: Vec<Vec<BigInt>> = (1..n)
                .map(|i| (0..n).filter(|&c| c != j).map(|c| a[i][c].clone()).collect())
                .collect();
            let term = &a[0][j] * det(&minor);
            if j % 2 == 0 {
                s += term;
            } else {
                s -= term;
            }
        }
        s
    }

    #[test]
    fn snf_transforms_random() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let nr = rng.gen_range(1..=5);
            let nc = rng.gen_range(1..=5);
            let mut m = SparseMatrix::new(nr, nc);
            let mut dense = vec![vec![BigInt::zero(); nc]; nr];
            for r in 0..nr {
                for c in 0..nc {
                    let v: i64 = rng.gen_range(-6..=6);
                    m.set(r, c, v);
                    dense[r][c] = BigInt::from(v);
                }
            }
            let s = smith_normal_form(&m);
            assert_eq!(det(&s.u).abs(), BigInt::one());
            assert_eq!(det(&s.v).abs(), BigInt::one());
            let prod = dense_mul(&dense_mul(&s.u, &dense), &s.v);
            for r in 0..nr {
                for c in 0..nc {
                    let want = if r == c && r < s.diag.len() {
                        s.diag[r].clone()
                    } else {
                        BigInt::zero()
                    };
                    assert_eq!(prod[r][c], want, "snf product mismatch at ({r},{c})");
                }
            }
            // divisibility chain
            for w in s.diag.windows(2) {
                if !w[1].is_zero() {
                    assert!(!w[0].is_zero());
                }
                if !w[0].is_zero() && !w[1].is_zero() {
                    assert!((&w[1] % &w[0]).is_zero());
                }
            }
            // rational rank equals nonzero diagonal count
            let nz = s.diag.iter().filter(|d| !d.is_zero()).count();
            assert_eq!(rank(&m, CoefficientRing::Rational), nz);
        }
    }

    #[test]
    fn random_solve_consistency() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let nr = rng.gen_range(1..=6);
            let nc = rng.gen_range(1..=6);
            let mut m = SparseMatrix::new(nr, nc);
            for r in 0..nr {
                for c in 0..nc {
                    if rng.gen_bool(0.6) {
                        m.set(r, c, rng.gen_range(-3i64..=3));
                    }
                }
            }
            // b = M * random integer x is always solvable over Z and Q
            let mut x0 = SparseVector::new(nc);
            for c in 0..nc {
                x0.set_int(c, rng.gen_range(-2i64..=2));
            }
            let b = m.mul_vec(&x0);
            assert!(solve(&m, &b, CoefficientRing::Rational).is_some());
            assert!(solve(&m, &b, CoefficientRing::Integer).is_some());
            assert!(solve(&m, &b, CoefficientRing::Gf2).is_some());
        }
    }
}
