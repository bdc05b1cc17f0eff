//! Graded Khovanov and reduced Khovanov chain complexes of tangle-diagram
//! closures, homology ranks with torsion, the transverse elements and their
//! vanishing verdicts with certificates.
//!
//! Only one graded piece is ever materialized at a time. Generators are
//! (state, labeling) pairs; a labeling is a bitmask over the canonical circle
//! order with bit set = plus. Gradings: i = r(state) - n_-, j = p + i + n_+ -
//! n_- (minus 1 in the reduced theory). The differential raises i by flipping
//! a 0-bit c with sign (-1)^{number of 1-bits before c}.

use crate::braid::{self, BraidWord};
use crate::exactalg::{
    solve, CoefficientRing, Gf2Reducer, RatReducer, SparseMatrix, SparseVector,
};
use crate::tangle::{CircleDecomposition, TangleDiagram};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const DEFAULT_MAX_DIM: u64 = 5_000_000;

#[derive(Clone, Copy, Debug)]
pub struct ComplexOpts {
    /// cap on the dimension of a graded piece; exceeding it yields Undecided
    pub max_dim: u64,
    /// witness combinations are tracked when the source stays below this
    pub track_limit: u64,
    /// marked strand position for the reduced theory
    pub marked: usize,
}

impl Default for ComplexOpts {
    fn default() -> Self {
        ComplexOpts { max_dim: DEFAULT_MAX_DIM, track_limit: 1_000_000, marked: 0 }
    }
}

/// Sparse chain element; coefficients are rational (integral for every shipped
/// certificate; read mod 2 over GF2).
#[derive(Clone, Debug, PartialEq)]
pub struct ChainElement {
    pub ring: CoefficientRing,
    pub i: i64,
    pub j: i64,
    pub terms: BTreeMap<(u64, u64), BigRational>,
}

impl ChainElement {
    pub fn zero(ring: CoefficientRing, i: i64, j: i64) -> Self {
        ChainElement { ring, i, j, terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, key: (u64, u64), v: BigRational) {
        let entry = self.terms.entry(key).or_insert_with(BigRational::zero);
        *entry += v;
        let dead = match self.ring {
            CoefficientRing::Gf2 => {
                self.terms[&key].numer().mod_floor_two().is_zero()
            }
            _ => self.terms[&key].is_zero(),
        };
        if dead {
            self.terms.remove(&key);
        }
    }

    pub fn negate(&self) -> Self {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = -v.clone();
        }
        out
    }
}

trait ModTwo {
    fn mod_floor_two(&self) -> BigInt;
}

impl ModTwo for BigInt {
    fn mod_floor_two(&self) -> BigInt {
        use num_integer::Integer;
        self.mod_floor(&BigInt::from(2))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyEntry {
    pub rank: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub torsion: Vec<String>,
}

pub type HomologyTable = BTreeMap<(i64, i64), HomologyEntry>;

#[derive(Clone, Debug)]
pub enum PsiOutcome {
    ZeroWithCertificate(ChainElement),
    NonzeroClass,
    Undecided(String),
}

impl PsiOutcome {
    pub fn is_zero(&self) -> bool {
        matches!(self, PsiOutcome::ZeroWithCertificate(_))
    }
    pub fn is_nonzero(&self) -> bool {
        matches!(self, PsiOutcome::NonzeroClass)
    }
    pub fn tag(&self) -> &'static str {
        match self {
            PsiOutcome::ZeroWithCertificate(_) => "zero",
            PsiOutcome::NonzeroClass => "nonzero",
            PsiOutcome::Undecided(_) => "undecided",
        }
    }
}

// ---------------------------------------------------------------------------
// binomials and subset ranking

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for t in 0..k {
        r = r * (n - t) as u128 / (t + 1) as u128;
        if r > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    r as u64
}

/// colex rank of a fixed-size subset given by ascending member positions
fn subset_rank(positions: impl Iterator<Item = u64>) -> u64 {
    let mut rank = 0u64;
    for (t, p) in positions.enumerate() {
        rank += binom(p, t as u64 + 1);
    }
    rank
}

/// next bitmask with the same popcount (Gosper); fixed point at 0
fn next_state(v: u64) -> u64 {
    if v == 0 {
        return 0;
    }
    let c = v & v.wrapping_neg();
    let r = v + c;
    (((r ^ v) >> 2) / c) | r
}

fn first_state(r: u32) -> u64 {
    if r == 0 {
        0
    } else {
        (1u64 << r) - 1
    }
}

// ---------------------------------------------------------------------------
// graded pieces

pub struct Piece {
    pub i: i64,
    pub j: i64,
    pub r: u32,
    pub states: Vec<u64>,
    pub offsets: Vec<u64>,
    pub dim: u64,
    pub reduced: bool,
    pub marked: usize,
}

pub enum PieceBuild {
    Built(Piece),
    Empty,
    OverCap(String),
}

fn labeling_count(free: u64, picks: i64) -> u64 {
    if picks < 0 || picks > free as i64 {
        0
    } else {
        binom(free, picks as u64)
    }
}

/// Enumerate the (i, j) graded piece of D, capped at `max_dim` generators.
pub fn build_piece(
    d: &TangleDiagram,
    i: i64,
    j: i64,
    reduced: bool,
    marked: usize,
    max_dim: u64,
) -> PieceBuild {
    let n = d.crossings() as i64;
    let npos = d.n_pos() as i64;
    let nneg = d.n_neg() as i64;
    let r = i + nneg;
    if r < 0 || r > n {
        return PieceBuild::Empty;
    }
    let p = j - i - (npos - nneg) + if reduced { 1 } else { 0 };
    let nstates = binom(n as u64, r as u64);
    if nstates > max_dim {
        return PieceBuild::OverCap(format!(
            "state count {nstates} exceeds the {max_dim} generator cap"
        ));
    }
    let mut states = Vec::with_capacity(nstates as usize);
    let mut offsets = Vec::with_capacity(nstates as usize + 1);
    let mut dim = 0u64;
    let mut s = first_state(r as u32);
    for _ in 0..nstates {
        let dec = d.resolve(s);
        let c = dec.circle_count as i64;
        if (c + p) % 2 == 0 {
            let k = (c + p) / 2; // number of plus circles
            let cnt = if reduced {
                // marked circle is forced plus
                if k >= 1 {
                    labeling_count(c as u64 - 1, k - 1)
                } else {
                    0
                }
            } else {
                labeling_count(c as u64, k)
            };
            if cnt > 0 {
                states.push(s);
                offsets.push(dim);
                dim += cnt;
                if dim > max_dim {
                    return PieceBuild::OverCap(format!(
                        "graded piece at ({i},{j}) exceeds the {max_dim} generator cap"
                    ));
                }
            }
        }
        s = next_state(s);
    }
    offsets.push(dim);
    if dim == 0 {
        return PieceBuild::Empty;
    }
    PieceBuild::Built(Piece {
        i,
        j,
        r: r as u32,
        states,
        offsets,
        dim,
        reduced,
        marked,
    })
}

impl Piece {
    fn state_rank(&self, s: u64) -> Option<usize> {
        self.states.binary_search(&s).ok()
    }

    /// rank of a labeling (global circle mask) within its state block
    fn labeling_rank(&self, dec: &CircleDecomposition, lab: u64) -> u64 {
        let marked_circle = if self.reduced {
            dec.segmap[self.marked] as i64
        } else {
            -1
        };
        // positions among free circles, ascending
        let mut free_pos = 0u64;
        let positions = (0..dec.circle_count as u64).filter_map(|cid| {
            if cid as i64 == marked_circle {
                return None;
            }
            let pos = free_pos;
            free_pos += 1;
            if lab >> cid & 1 == 1 {
                Some(pos)
            } else {
                None
            }
        });
        subset_rank(positions)
    }

    /// enumerate labelings of one state in rank order
    fn labelings_of(&self, dec: &CircleDecomposition, p: i64) -> Vec<u64> {
        let c = dec.circle_count as i64;
        if (c + p) % 2 != 0 {
            return Vec::new();
        }
        let k = (c + p) / 2;
        let marked_circle = if self.reduced {
            dec.segmap[self.marked] as i64
        } else {
            -1
        };
        let free: Vec<u64> = (0..c as u64).filter(|&cid| cid as i64 != marked_circle).collect();
        let picks = if self.reduced { k - 1 } else { k };
        if picks < 0 || picks > free.len() as i64 {
            return Vec::new();
        }
        let mut out = Vec::with_capacity(binom(free.len() as u64, picks as u64) as usize);
        let base: u64 = if marked_circle >= 0 { 1u64 << marked_circle } else { 0 };
        if picks == 0 {
            out.push(base);
            return out;
        }
        let m = free.len();
        let mut sub = first_state(picks as u32);
        let total = binom(m as u64, picks as u64);
        for _ in 0..total {
            let mut lab = base;
            for t in 0..m {
                if sub >> t & 1 == 1 {
                    lab |= 1u64 << free[t];
                }
            }
            out.push(lab);
            sub = next_state(sub);
        }
        out
    }

    pub fn p_value(&self, d: &TangleDiagram) -> i64 {
        let npos = d.n_pos() as i64;
        let nneg = d.n_neg() as i64;
        self.j - self.i - (npos - nneg) + if self.reduced { 1 } else { 0 }
    }

    pub fn generators(&self, d: &TangleDiagram) -> Vec<(u64, u64)> {
        let p = self.p_value(d);
        let mut out = Vec::with_capacity(self.dim as usize);
        for &s in &self.states {
            let dec = d.resolve(s);
            out.extend(self.labelings_of(&dec, p).into_iter().map(|lab| (s, lab)));
        }
        out
    }

    pub fn index_of(&self, d: &TangleDiagram, s: u64, lab: u64) -> Option<u64> {
        let sr = self.state_rank(s)?;
        let dec = d.resolve(s);
        Some(self.offsets[sr] + self.labeling_rank(&dec, lab))
    }
}

// ---------------------------------------------------------------------------
// differential

struct Transition {
    sign: i8,
    s2_rank: usize,
    dec2: CircleDecomposition,
    /// merge: Some((a, b, target)); split: None with `split_src`/`split_lo/hi`
    merge: Option<(u32, u32, u32)>,
    split: Option<(u32, u32, u32)>, // (source circle, lo target, hi target)
    /// per target circle: source circle carrying its label (u32::MAX if new)
    carry: Vec<u32>,
}

/// differential data for one source state against a target piece
fn transitions(
    d: &TangleDiagram,
    s: u64,
    dec: &CircleDecomposition,
    target: &Piece,
) -> Vec<Transition> {
    let n = d.crossings();
    let mut out = Vec::new();
    for c in 0..n {
        if s >> c & 1 == 1 {
            continue;
        }
        let s2 = s | (1u64 << c);
        let Some(s2_rank) = target.state_rank(s2) else { continue };
        let sign = if (s & ((1u64 << c) - 1)).count_ones() % 2 == 0 { 1i8 } else { -1 };
        let dec2 = d.resolve(s2);
        let inc: Vec<u32> = d.incident_circles(c, dec);
        let inc2: Vec<u32> = d.incident_circles(c, &dec2);
        // label carry-over for non-incident circles via minimal segments
        let mut carry = vec![u32::MAX; dec2.circle_count];
        let mut min_seg2 = vec![u32::MAX; dec2.circle_count];
        for (g, &cid2) in dec2.segmap.iter().enumerate() {
            if min_seg2[cid2 as usize] == u32::MAX {
                min_seg2[cid2 as usize] = g as u32;
            }
        }
        for cid2 in 0..dec2.circle_count as u32 {
            if inc2.contains(&cid2) {
                continue;
            }
            carry[cid2 as usize] = dec.segmap[min_seg2[cid2 as usize] as usize];
        }
        let (merge, split) = if inc.len() == 2 {
            (Some((inc[0], inc[1], inc2[0])), None)
        } else {
            (None, Some((inc[0], inc2[0], inc2[1])))
        };
        out.push(Transition { sign, s2_rank, dec2, merge, split, carry });
    }
    out
}

fn carried_label(tr: &Transition, lab: u64) -> u64 {
    let mut lab2 = 0u64;
    for (cid2, &src) in tr.carry.iter().enumerate() {
        if src != u32::MAX && lab >> src & 1 == 1 {
            lab2 |= 1u64 << cid2;
        }
    }
    lab2
}

/// images of one generator: (target state rank, target labeling, coefficient)
fn generator_image(
    target: &Piece,
    trs: &[Transition],
    lab: u64,
) -> Vec<(usize, u64, i8, u64)> {
    // entries: (s2_rank, lab2, coeff, row)
    let mut out = Vec::with_capacity(trs.len() * 2);
    let marked = target.marked;
    for tr in trs {
        let base = carried_label(tr, lab);
        let push = |lab2: u64, coeff: i8, out: &mut Vec<(usize, u64, i8, u64)>| {
            if target.reduced {
                let mc = tr.dec2.segmap[marked];
                if lab2 >> mc & 1 == 0 {
                    return; // projected away in the quotient complex
                }
            }
            let row = target.offsets[tr.s2_rank] + target.labeling_rank(&tr.dec2, lab2);
            out.push((tr.s2_rank, lab2, coeff, row));
        };
        if let Some((a, b, m)) = tr.merge {
            let la = lab >> a & 1 == 1;
            let lb = lab >> b & 1 == 1;
            // m(++) = +, m(+-) = m(-+) = -, m(--) = 0
            if !la && !lb {
                continue;
            }
            let lab2 = if la && lb { base | (1u64 << m) } else { base };
            push(lab2, tr.sign, &mut out);
        } else if let Some((src, lo, hi)) = tr.split {
            let ls = lab >> src & 1 == 1;
            if ls {
                push(base | (1u64 << lo), tr.sign, &mut out);
                push(base | (1u64 << hi), tr.sign, &mut out);
            } else {
                push(base, tr.sign, &mut out);
            }
        }
    }
    out
}

/// Apply the differential to a chain element.
pub fn d_of(d: &TangleDiagram, x: &ChainElement, reduced: bool, marked: usize) -> ChainElement {
    let mut out = ChainElement::zero(x.ring, x.i + 1, x.j);
    let n = d.crossings();
    for ((s, lab), coeff) in &x.terms {
        let dec = d.resolve(*s);
        for c in 0..n {
            if s >> c & 1 == 1 {
                continue;
            }
            let s2 = s | (1u64 << c);
            let sign = if (s & ((1u64 << c) - 1)).count_ones() % 2 == 0 { 1 } else { -1 };
            let dec2 = d.resolve(s2);
            let inc = d.incident_circles(c, &dec);
            let inc2 = d.incident_circles(c, &dec2);
            let mut carry = vec![u32::MAX; dec2.circle_count];
            let mut min_seg2 = vec![u32::MAX; dec2.circle_count];
            for (g, &cid2) in dec2.segmap.iter().enumerate() {
                if min_seg2[cid2 as usize] == u32::MAX {
                    min_seg2[cid2 as usize] = g as u32;
                }
            }
            for cid2 in 0..dec2.circle_count as u32 {
                if !inc2.contains(&cid2) {
                    carry[cid2 as usize] = dec.segmap[min_seg2[cid2 as usize] as usize];
                }
            }
            let mut base = 0u64;
            for (cid2, &src) in carry.iter().enumerate() {
                if src != u32::MAX && lab >> src & 1 == 1 {
                    base |= 1u64 << cid2;
                }
            }
            let mut emit = |lab2: u64| {
                if reduced {
                    let mc = dec2.segmap[marked];
                    if lab2 >> mc & 1 == 0 {
                        return;
                    }
                }
                out.add_term((s2, lab2), BigRational::from(BigInt::from(sign)) * coeff);
            };
            if inc.len() == 2 {
                let la = lab >> inc[0] & 1 == 1;
                let lb = lab >> inc[1] & 1 == 1;
                if !la && !lb {
                    continue;
                }
                let lab2 = if la && lb { base | (1u64 << inc2[0]) } else { base };
                emit(lab2);
            } else {
                let ls = lab >> inc[0] & 1 == 1;
                if ls {
                    emit(base | (1u64 << inc2[0]));
                    emit(base | (1u64 << inc2[1]));
                } else {
                    emit(base);
                }
            }
        }
    }
    out
}

pub fn is_cycle(d: &TangleDiagram, x: &ChainElement, reduced: bool, marked: usize) -> bool {
    d_of(d, x, reduced, marked).is_zero()
}

// ---------------------------------------------------------------------------
// spec-level basis / matrix views

pub fn graded_basis(d: &TangleDiagram, i: i64, j: i64) -> Vec<(u64, u64)> {
    match build_piece(d, i, j, false, 0, u64::MAX) {
        PieceBuild::Built(p) => p.generators(d),
        _ => Vec::new(),
    }
}

pub fn reduced_graded_basis(d: &TangleDiagram, marked: usize, i: i64, j: i64) -> Vec<(u64, u64)> {
    match build_piece(d, i, j, true, marked, u64::MAX) {
        PieceBuild::Built(p) => p.generators(d),
        _ => Vec::new(),
    }
}

pub fn differential_matrix(d: &TangleDiagram, i: i64, j: i64) -> SparseMatrix {
    differential_matrix_impl(d, i, j, false, 0)
}

pub fn reduced_differential(d: &TangleDiagram, marked: usize, i: i64, j: i64) -> SparseMatrix {
    differential_matrix_impl(d, i, j, true, marked)
}

fn differential_matrix_impl(
    d: &TangleDiagram,
    i: i64,
    j: i64,
    reduced: bool,
    marked: usize,
) -> SparseMatrix {
    let src = match build_piece(d, i, j, reduced, marked, u64::MAX) {
        PieceBuild::Built(p) => p,
        _ => return SparseMatrix::new(0, 0),
    };
    let tgt = match build_piece(d, i + 1, j, reduced, marked, u64::MAX) {
        PieceBuild::Built(p) => p,
        _ => return SparseMatrix::new(0, src.dim as usize),
    };
    let mut m = SparseMatrix::new(tgt.dim as usize, src.dim as usize);
    let p = src.p_value(d);
    let mut col = 0usize;
    for &s in &src.states {
        let dec = d.resolve(s);
        let trs = transitions(d, s, &dec, &tgt);
        for lab in src.labelings_of(&dec, p) {
            for (_, _, coeff, row) in generator_image(&tgt, &trs, lab) {
                m.set(row as usize, col, coeff as i64);
            }
            col += 1;
        }
    }
    m
}

// ---------------------------------------------------------------------------
// homology

fn piece_rank(
    d: &TangleDiagram,
    i: i64,
    j: i64,
    ring: CoefficientRing,
    reduced: bool,
    marked: usize,
) -> usize {
    let src = match build_piece(d, i, j, reduced, marked, u64::MAX) {
        PieceBuild::Built(p) => p,
        _ => return 0,
    };
    let tgt = match build_piece(d, i + 1, j, reduced, marked, u64::MAX) {
        PieceBuild::Built(p) => p,
        _ => return 0,
    };
    let p = src.p_value(d);
    match ring {
        CoefficientRing::Gf2 => {
            let mut red = Gf2Reducer::new(tgt.dim as usize, false);
            for &s in &src.states {
                let dec = d.resolve(s);
                let trs = transitions(d, s, &dec, &tgt);
                for lab in src.labelings_of(&dec, p) {
                    let mut rows: Vec<u32> =
                        generator_image(&tgt, &trs, lab).iter().map(|t| t.3 as u32).collect();
                    rows.sort_unstable();
                    red.add_column(&rows);
                }
            }
            red.rank()
        }
        _ => {
            let mut red = RatReducer::new(tgt.dim as usize, false);
            for &s in &src.states {
                let dec = d.resolve(s);
                let trs = transitions(d, s, &dec, &tgt);
                for lab in src.labelings_of(&dec, p) {
                    let mut ents: Vec<(u32, BigRational)> = generator_image(&tgt, &trs, lab)
                        .iter()
                        .map(|t| (t.3 as u32, BigRational::from(BigInt::from(t.2))))
                        .collect();
                    ents.sort_by_key(|e| e.0);
                    red.add_column(&ents);
                }
            }
            red.rank()
        }
    }
}

fn piece_dim(d: &TangleDiagram, i: i64, j: i64, reduced: bool, marked: usize) -> u64 {
    match build_piece(d, i, j, reduced, marked, u64::MAX) {
        PieceBuild::Built(p) => p.dim,
        _ => 0,
    }
}

/// Homology table over the given ring (reduced = GF2 quotient theory) inside
/// an optional grading window. Over Integer the free rank comes from rational
/// ranks and torsion from the Smith form of the incoming differential.
pub fn homology_table(
    d: &TangleDiagram,
    ring: CoefficientRing,
    reduced: bool,
    marked: usize,
    window: Option<(i64, i64, i64, i64)>,
) -> HomologyTable {
    let (i_min, i_max, j_min, j_max) = window.unwrap_or_else(|| {
        let b = crate::skeinstab::grading_support_bounds(d, reduced);
        (b.i_min, b.i_max, b.j_min, b.j_max)
    });
    let mut out = HomologyTable::new();
    for j in (j_min..=j_max).rev() {
        let mut rank_above: BTreeMap<i64, usize> = BTreeMap::new();
        for i in i_min..=i_max {
            let dim = piece_dim(d, i, j, reduced, marked);
            if dim == 0 {
                continue;
            }
            let rank_ring = match ring {
                CoefficientRing::Integer => CoefficientRing::Rational,
                r => r,
            };
            let rk_out = *rank_above
                .entry(i)
                .or_insert_with(|| piece_rank(d, i, j, rank_ring, reduced, marked));
            let rk_in = if i == i_min {
                piece_rank(d, i - 1, j, rank_ring, reduced, marked)
            } else {
                *rank_above
                    .entry(i - 1)
                    .or_insert_with(|| piece_rank(d, i - 1, j, rank_ring, reduced, marked))
            };
            let betti = dim as usize - rk_in - rk_out;
            let mut torsion: Vec<String> = Vec::new();
            if ring == CoefficientRing::Integer {
                let m = differential_matrix_impl(d, i - 1, j, reduced, marked);
                if !m.entries.is_empty() {
                    let snf = crate::exactalg::smith_normal_form(&m);
                    for dv in snf.diag {
                        if !dv.is_zero() && !dv.abs().is_one() {
                            torsion.push(dv.abs().to_string());
                        }
                    }
                }
            }
            if betti > 0 || !torsion.is_empty() {
                out.insert((i, j), HomologyEntry { rank: betti, torsion });
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// transverse elements and verdicts

/// The all-minus labeling of the oriented resolution, at (0, sl).
pub fn psi_tilde(w: &BraidWord, ring: CoefficientRing) -> (TangleDiagram, ChainElement) {
    let d = TangleDiagram::from_braid(w);
    let s = d.oriented_resolution_state().unwrap();
    let sl = braid::self_linking(w);
    let mut x = ChainElement::zero(ring, 0, sl);
    x.terms.insert((s, 0), BigRational::one());
    (d, x)
}

/// Reduced transverse element: marked circle plus, all others minus, at
/// (0, sl + 1) in the shifted reduced grading.
pub fn psi_prime_tilde(w: &BraidWord, marked: usize) -> (TangleDiagram, ChainElement) {
    let d = TangleDiagram::from_braid(w);
    let s = d.oriented_resolution_state().unwrap();
    let dec = d.resolve(s);
    let mc = dec.segmap[marked];
    let sl = braid::self_linking(w);
    let mut x = ChainElement::zero(CoefficientRing::Gf2, 0, sl + 1);
    x.terms.insert((s, 1u64 << mc), BigRational::one());
    (d, x)
}

/// Decide whether the target element is a boundary in the (i-1, j) -> (i, j)
/// piece of the (reduced) complex.
fn boundary_membership(
    d: &TangleDiagram,
    target_elem: &ChainElement,
    ring: CoefficientRing,
    reduced: bool,
    opts: &ComplexOpts,
) -> PsiOutcome {
    let (i, j) = (target_elem.i, target_elem.j);
    let tgt = match build_piece(d, i, j, reduced, opts.marked, opts.max_dim) {
        PieceBuild::Built(p) => p,
        PieceBuild::Empty => {
            // target element must be zero in an empty piece
            return if target_elem.is_zero() {
                PsiOutcome::ZeroWithCertificate(ChainElement::zero(ring, i - 1, j))
            } else {
                PsiOutcome::NonzeroClass
            };
        }
        PieceBuild::OverCap(msg) => return PsiOutcome::Undecided(msg),
    };
    let src = match build_piece(d, i - 1, j, reduced, opts.marked, opts.max_dim) {
        PieceBuild::Built(p) => p,
        PieceBuild::Empty => return PsiOutcome::NonzeroClass,
        PieceBuild::OverCap(msg) => return PsiOutcome::Undecided(msg),
    };
    let mut brows: Vec<(u32, BigRational)> = Vec::new();
    for ((s, lab), v) in &target_elem.terms {
        match tgt.index_of(d, *s, *lab) {
            Some(row) => brows.push((row as u32, v.clone())),
            None => return PsiOutcome::NonzeroClass, // outside the piece entirely
        }
    }
    brows.sort_by_key(|e| e.0);
    let p = src.p_value(d);
    match ring {
        CoefficientRing::Gf2 => {
            let track = src.dim <= opts.track_limit;
            let combo = run_gf2(d, &src, &tgt, p, &brows, track);
            match combo {
                None => PsiOutcome::NonzeroClass,
                Some(Some(cols)) => {
                    let gens = certificate_from_columns(d, &src, &cols);
                    PsiOutcome::ZeroWithCertificate(ChainElement {
                        ring,
                        i: i - 1,
                        j,
                        terms: gens,
                    })
                }
                Some(None) => {
                    // solvable but untracked: rerun with tracking
                    match run_gf2(d, &src, &tgt, p, &brows, true) {
                        Some(Some(cols)) => {
                            let gens = certificate_from_columns(d, &src, &cols);
                            PsiOutcome::ZeroWithCertificate(ChainElement {
                                ring,
                                i: i - 1,
                                j,
                                terms: gens,
                            })
                        }
                        _ => PsiOutcome::Undecided("certificate extraction failed".into()),
                    }
                }
            }
        }
        CoefficientRing::Rational => {
            match run_rational(d, &src, &tgt, p, &brows) {
                None => PsiOutcome::NonzeroClass,
                Some(combo) => {
                    let gens = certificate_from_rat(d, &src, &combo);
                    PsiOutcome::ZeroWithCertificate(ChainElement { ring, i: i - 1, j, terms: gens })
                }
            }
        }
        CoefficientRing::Integer => {
            // rationally unsolvable implies integrally unsolvable
            match run_rational(d, &src, &tgt, p, &brows) {
                None => PsiOutcome::NonzeroClass,
                Some(combo) => {
                    let integral = combo.iter().all(|(_, v)| v.denom().is_one());
                    if integral {
                        let gens = certificate_from_rat(d, &src, &combo);
                        return PsiOutcome::ZeroWithCertificate(ChainElement {
                            ring,
                            i: i - 1,
                            j,
                            terms: gens,
                        });
                    }
                    // decide integrality by HNF on the full system
                    let m = differential_matrix_impl(d, i - 1, j, reduced, opts.marked);
                    let mut b = SparseVector::new(tgt.dim as usize);
                    for (row, v) in &brows {
                        b.set(*row as usize, v.clone());
                    }
                    match solve(&m, &b, CoefficientRing::Integer) {
                        None => PsiOutcome::NonzeroClass,
                        Some(x) => {
                            let combo: Vec<(u32, BigRational)> =
                                x.entries.iter().map(|(c, v)| (*c, v.clone())).collect();
                            let gens = certificate_from_rat(d, &src, &combo);
                            PsiOutcome::ZeroWithCertificate(ChainElement {
                                ring,
                                i: i - 1,
                                j,
                                terms: gens,
                            })
                        }
                    }
                }
            }
        }
    }
}

/// GF2 membership; Some(Some(cols)) solvable with witness, Some(None) solvable
/// untracked, None unsolvable.
fn run_gf2(
    d: &TangleDiagram,
    src: &Piece,
    tgt: &Piece,
    p: i64,
    brows: &[(u32, BigRational)],
    track: bool,
) -> Option<Option<Vec<u32>>> {
    let mut red = Gf2Reducer::new(tgt.dim as usize, track);
    for &s in &src.states {
        let dec = d.resolve(s);
        let trs = transitions(d, s, &dec, tgt);
        for lab in src.labelings_of(&dec, p) {
            let mut rows: Vec<u32> =
                generator_image(tgt, &trs, lab).iter().map(|t| t.3 as u32).collect();
            rows.sort_unstable();
            red.add_column(&rows);
        }
    }
    let b: Vec<u32> = brows
        .iter()
        .filter(|(_, v)| v.numer().mod_floor_two().is_one())
        .map(|(r, _)| *r)
        .collect();
    if track {
        red.solve(&b).map(Some)
    } else if red.in_span(&b) {
        Some(None)
    } else {
        None
    }
}

fn run_rational(
    d: &TangleDiagram,
    src: &Piece,
    tgt: &Piece,
    p: i64,
    brows: &[(u32, BigRational)],
) -> Option<Vec<(u32, BigRational)>> {
    let mut red = RatReducer::new(tgt.dim as usize, true);
    for &s in &src.states {
        let dec = d.resolve(s);
        let trs = transitions(d, s, &dec, tgt);
        for lab in src.labelings_of(&dec, p) {
            let mut ents: Vec<(u32, BigRational)> = generator_image(tgt, &trs, lab)
                .iter()
                .map(|t| (t.3 as u32, BigRational::from(BigInt::from(t.2))))
                .collect();
            ents.sort_by_key(|e| e.0);
            red.add_column(&ents);
        }
    }
    let b: Vec<(u32, BigRational)> = brows.to_vec();
    red.solve(&b)
}

fn certificate_from_columns(
    d: &TangleDiagram,
    src: &Piece,
    cols: &[u32],
) -> BTreeMap<(u64, u64), BigRational> {
    let gens = src.generators(d);
    let mut terms = BTreeMap::new();
    for &c in cols {
        terms.insert(gens[c as usize], BigRational::one());
    }
    terms
}

fn certificate_from_rat(
    d: &TangleDiagram,
    src: &Piece,
    combo: &[(u32, BigRational)],
) -> BTreeMap<(u64, u64), BigRational> {
    let gens = src.generators(d);
    let mut terms = BTreeMap::new();
    for (c, v) in combo {
        if !v.is_zero() {
            terms.insert(gens[*c as usize], v.clone());
        }
    }
    terms
}

/// Vanishing verdict for psi over the given ring, with a re-verified
/// certificate or a re-checked cycle condition.
pub fn psi_vanishes(w: &BraidWord, ring: CoefficientRing, opts: &ComplexOpts) -> PsiOutcome {
    let (d, psi) = psi_tilde(w, ring);
    let out = boundary_membership(&d, &psi, ring, false, opts);
    finalize_verdict(&d, &psi, out, false, opts)
}

/// Reduced verdict over GF2 at (0, sl+1).
pub fn psi_prime_vanishes(w: &BraidWord, opts: &ComplexOpts) -> PsiOutcome {
    let (d, psi) = psi_prime_tilde(w, opts.marked);
    let out = boundary_membership(&d, &psi, CoefficientRing::Gf2, true, opts);
    finalize_verdict(&d, &psi, out, true, opts)
}

fn finalize_verdict(
    d: &TangleDiagram,
    psi: &ChainElement,
    out: PsiOutcome,
    reduced: bool,
    opts: &ComplexOpts,
) -> PsiOutcome {
    match &out {
        PsiOutcome::ZeroWithCertificate(phi) => {
            let dphi = d_of(d, phi, reduced, opts.marked);
            assert!(
                chain_eq(&dphi, psi) || chain_eq(&dphi.negate(), psi),
                "certificate re-verification failed"
            );
        }
        PsiOutcome::NonzeroClass => {
            assert!(is_cycle(d, psi, reduced, opts.marked), "transverse element is not a cycle");
        }
        PsiOutcome::Undecided(_) => {}
    }
    out
}

fn chain_eq(a: &ChainElement, b: &ChainElement) -> bool {
    match a.ring {
        CoefficientRing::Gf2 => {
            let norm = |x: &ChainElement| -> Vec<(u64, u64)> {
                x.terms
                    .iter()
                    .filter(|(_, v)| v.numer().mod_floor_two().is_one())
                    .map(|(k, _)| *k)
                    .collect()
            };
            norm(a) == norm(b)
        }
        _ => a.terms == b.terms,
    }
}

/// True iff d(phi) = +-psi_tilde(w). Grading mismatches are rejected.
pub fn verify_certificate(w: &BraidWord, phi: &ChainElement) -> bool {
    let (d, psi) = psi_tilde(w, phi.ring);
    if phi.i != -1 || phi.j != psi.j {
        return false;
    }
    let dphi = d_of(&d, phi, false, 0);
    !psi.is_zero() && (chain_eq(&dphi, &psi) || chain_eq(&dphi.negate(), &psi))
}

/// Reduced counterpart: true iff d(phi) = +-psi_prime_tilde(w) in the
/// complex with the marked circle quotiented out.
pub fn verify_certificate_reduced(w: &BraidWord, marked: usize, phi: &ChainElement) -> bool {
    let (d, psi) = psi_prime_tilde(w, marked);
    if phi.i != -1 || phi.j != psi.j {
        return false;
    }
    let dphi = d_of(&d, phi, true, marked);
    !psi.is_zero() && (chain_eq(&dphi, &psi) || chain_eq(&dphi.negate(), &psi))
}

// ---------------------------------------------------------------------------
// certificate serialization

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct CertificateFile {
    pub ring: String,
    pub strands: usize,
    pub word: Vec<i32>,
    /// sign convention identifier for the differential
    pub convention: String,
    pub terms: Vec<CertificateTerm>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct CertificateTerm {
    /// resolution choices, one char per crossing in word order
    pub state: String,
    /// one char per circle in canonical order: '+' or '-'
    pub labeling: String,
    pub coefficient: String,
}

pub const SIGN_CONVENTION: &str = "ones-before-crossing";

pub fn certificate_to_file(w: &BraidWord, phi: &ChainElement) -> CertificateFile {
    let d = TangleDiagram::from_braid(w);
    let n = d.crossings();
    let terms = phi
        .terms
        .iter()
        .map(|((s, lab), v)| {
            let dec = d.resolve(*s);
            let state: String =
                (0..n).map(|c| if s >> c & 1 == 1 { '1' } else { '0' }).collect();
            let labeling: String = (0..dec.circle_count)
                .map(|cid| if lab >> cid & 1 == 1 { '+' } else { '-' })
                .collect();
            CertificateTerm { state, labeling, coefficient: v.to_string() }
        })
        .collect();
    CertificateFile {
        ring: phi.ring.to_string(),
        strands: w.strands,
        word: w.letters.clone(),
        convention: SIGN_CONVENTION.into(),
        terms,
    }
}

pub fn certificate_from_file(f: &CertificateFile) -> Result<(BraidWord, ChainElement), String> {
    let w = BraidWord::new(f.strands, f.word.clone()).map_err(|e| e.to_string())?;
    let ring = match f.ring.as_str() {
        "gf2" => CoefficientRing::Gf2,
        "q" => CoefficientRing::Rational,
        "z" => CoefficientRing::Integer,
        other => return Err(format!("unknown ring {other}")),
    };
    if f.convention != SIGN_CONVENTION {
        return Err(format!("unsupported sign convention {}", f.convention));
    }
    let d = TangleDiagram::from_braid(&w);
    let sl = braid::self_linking(&w);
    let mut x = ChainElement::zero(ring, -1, sl);
    for t in &f.terms {
        let mut s = 0u64;
        for (c, ch) in t.state.chars().enumerate() {
            if ch == '1' {
                s |= 1u64 << c;
            }
        }
        let dec = d.resolve(s);
        if t.labeling.len() != dec.circle_count {
            return Err("labeling length does not match circle count".into());
        }
        let mut lab = 0u64;
        for (cid, ch) in t.labeling.chars().enumerate() {
            if ch == '+' {
                lab |= 1u64 << cid;
            }
        }
        let coeff: BigInt = t.coefficient.parse().map_err(|_| "bad coefficient")?;
        x.add_term((s, lab), BigRational::from(coeff));
    }
    Ok((w, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::parse_braid;
    use rand::{Rng, SeedableRng};

    fn diagram(text: &str, strands: usize) -> TangleDiagram {
        TangleDiagram::from_braid(&parse_braid(text, strands).unwrap())
    }

    fn word(text: &str, strands: usize) -> BraidWord {
        parse_braid(text, strands).unwrap()
    }

    fn ranks(t: &HomologyTable) -> Vec<((i64, i64), usize)> {
        t.iter().filter(|(_, e)| e.rank > 0).map(|(k, e)| (*k, e.rank)).collect()
    }

    #[test]
    fn trefoil_tables() {
        let d = diagram("1 1 1", 2);
        let q = homology_table(&d, CoefficientRing::Rational, false, 0, None);
        assert_eq!(
            ranks(&q),
            vec![((0, 1), 1), ((0, 3), 1), ((2, 5), 1), ((3, 9), 1)]
        );
        let f2 = homology_table(&d, CoefficientRing::Gf2, false, 0, None);
        assert_eq!(
            ranks(&f2),
            vec![
                ((0, 1), 1),
                ((0, 3), 1),
                ((2, 5), 1),
                ((2, 7), 1),
                ((3, 7), 1),
                ((3, 9), 1)
            ]
        );
        let z = homology_table(&d, CoefficientRing::Integer, false, 0, None);
        // the classical 2-torsion sits in cohomological degree 3
        assert_eq!(z[&(3, 7)].rank, 0);
        assert_eq!(z[&(3, 7)].torsion, vec!["2".to_string()]);
        assert_eq!(z[&(3, 9)].rank, 1);
        assert!(z[&(3, 9)].torsion.is_empty());
    }

    #[test]
    fn mirror_and_small_knot_tables() {
        let lh = diagram("-1 -1 -1", 2);
        let q = homology_table(&lh, CoefficientRing::Rational, false, 0, None);
        assert_eq!(
            ranks(&q),
            vec![((-3, -9), 1), ((-2, -5), 1), ((0, -3), 1), ((0, -1), 1)]
        );
        let f8 = diagram("1 -2 1 -2", 3);
        let f2 = homology_table(&f8, CoefficientRing::Gf2, false, 0, None);
        assert_eq!(
            ranks(&f2),
            vec![
                ((-2, -5), 1),
                ((-2, -3), 1),
                ((-1, -3), 1),
                ((-1, -1), 1),
                ((0, -1), 1),
                ((0, 1), 1),
                ((1, 1), 1),
                ((1, 3), 1),
                ((2, 3), 1),
                ((2, 5), 1)
            ]
        );
        let k52 = diagram("-1 -1 -2 1 -2", 3);
        let q52 = homology_table(&k52, CoefficientRing::Rational, false, 0, None);
        assert_eq!(
            ranks(&q52),
            vec![
                ((-4, -10), 1),
                ((-4, -8), 1),
                ((-2, -6), 1),
                ((-1, -2), 1),
                ((0, -2), 1),
                ((0, 0), 1)
            ]
        );
    }

    #[test]
    fn unknot_and_hopf_tables() {
        let u = diagram("", 1);
        let q = homology_table(&u, CoefficientRing::Rational, false, 0, None);
        assert_eq!(ranks(&q), vec![((0, -1), 1), ((0, 1), 1)]);
        let h = diagram("1 1", 2);
        let hq = homology_table(&h, CoefficientRing::Rational, false, 0, None);
        assert_eq!(
            ranks(&hq),
            vec![((0, 0), 1), ((0, 2), 1), ((2, 4), 1), ((2, 6), 1)]
        );
    }

    #[test]
    fn reduced_tables() {
        let d = diagram("1 1 1", 2);
        let t = homology_table(&d, CoefficientRing::Gf2, true, 0, None);
        assert_eq!(ranks(&t), vec![((0, 2), 1), ((2, 6), 1), ((3, 8), 1)]);
        let f8 = diagram("1 -2 1 -2", 3);
        let t8 = homology_table(&f8, CoefficientRing::Gf2, true, 0, None);
        assert_eq!(
            ranks(&t8),
            vec![((-2, -4), 1), ((-1, -2), 1), ((0, 0), 1), ((1, 2), 1), ((2, 4), 1)]
        );
    }

    #[test]
    fn basis_and_matrix_shapes() {
        let d = diagram("1 1 1", 2);
        // total dimension of the cube is sum over states of 2^{circles}
        let mut total = 0u64;
        for s in 0..8u64 {
            total += 1u64 << d.resolve(s).circle_count;
        }
        let mut enumerated = 0usize;
        for i in -1..5 {
            for j in -2..12 {
                enumerated += graded_basis(&d, i, j).len();
            }
        }
        assert_eq!(enumerated as u64, total);
        // matrix of the differential composes to zero
        for j in [1i64, 3, 5, 7, 9] {
            for i in 0..3 {
                let a = differential_matrix(&d, i, j);
                let b = differential_matrix(&d, i + 1, j);
                if a.rows == 0 || b.rows == 0 {
                    continue;
                }
                for col in 0..a.cols {
                    let mut x = SparseVector::new(a.cols);
                    x.set_int(col, 1);
                    let y = a.mul_vec(&x);
                    let z = b.mul_vec(&y);
                    assert!(z.is_zero(), "d^2 != 0 at ({i},{j}) col {col}");
                }
            }
        }
    }

    fn random_word(rng: &mut impl Rng, strands: usize, len: usize) -> BraidWord {
        let letters: Vec<i32> = (0..len)
            .map(|_| {
                let g = rng.gen_range(1..strands as i32);
                if rng.gen_bool(0.5) {
                    g
                } else {
                    -g
                }
            })
            .collect();
        BraidWord::new(strands, letters).unwrap()
    }

    #[test]
    fn d_squared_zero_and_grading_random() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..40 {
            let strands = rng.gen_range(2..5usize);
            let len = rng.gen_range(1..8usize);
            let w = random_word(&mut rng, strands, len);
            let d = TangleDiagram::from_braid(&w);
            let n = d.crossings();
            let s: u64 = rng.gen_range(0..(1u64 << n));
            let dec = d.resolve(s);
            let lab: u64 = rng.gen_range(0..(1u64 << dec.circle_count));
            let nneg = d.n_neg() as i64;
            let i = s.count_ones() as i64 - nneg;
            let p = 2 * (lab.count_ones() as i64) - dec.circle_count as i64;
            let j = p + i + d.n_pos() as i64 - nneg;
            let mut x = ChainElement::zero(CoefficientRing::Rational, i, j);
            x.terms.insert((s, lab), BigRational::one());
            let dx = d_of(&d, &x, false, 0);
            // image stays in grading (i+1, j): every term is a basis member there
            if !dx.is_zero() {
                if let PieceBuild::Built(piece) = build_piece(&d, i + 1, j, false, 0, u64::MAX) {
                    for (key, _) in &dx.terms {
                        assert!(piece.index_of(&d, key.0, key.1).is_some());
                    }
                } else {
                    panic!("image outside the expected grading");
                }
            }
            let ddx = d_of(&d, &dx, false, 0);
            assert!(ddx.is_zero(), "d^2 != 0 for {:?}", w.letters);
            let ddx2 = d_of(&d, &d_of(&d, &x, true, 0), true, 0);
            assert!(ddx2.is_zero(), "reduced d^2 != 0 for {:?}", w.letters);
        }
    }

    #[test]
    fn transverse_element_is_a_cycle() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let strands = rng.gen_range(2..5usize);
            let len = rng.gen_range(1..9usize);
            let w = random_word(&mut rng, strands, len);
            let (d, psi) = psi_tilde(&w, CoefficientRing::Integer);
            assert!(is_cycle(&d, &psi, false, 0), "{:?}", w.letters);
            let (d2, psip) = psi_prime_tilde(&w, 0);
            assert!(is_cycle(&d2, &psip, true, 0), "{:?}", w.letters);
        }
    }

    #[test]
    fn vanishing_verdicts() {
        let opts = ComplexOpts::default();
        let zero_cases = [
            ("-1", 2),
            ("-1 -1 -1", 2),
            ("1 -2 1 -2", 3),
            ("1 1 -2", 3),
            ("1 1 1 -2", 3),
        ];
        for (text, b) in zero_cases {
            let w = word(text, b);
            for ring in
                [CoefficientRing::Gf2, CoefficientRing::Rational, CoefficientRing::Integer]
            {
                let v = psi_vanishes(&w, ring, &opts);
                match v {
                    PsiOutcome::ZeroWithCertificate(phi) => {
                        assert!(verify_certificate(&w, &phi), "{text} over {ring}")
                    }
                    other => panic!("{text} over {ring}: expected zero, got {}", other.tag()),
                }
            }
            let vp = psi_prime_vanishes(&w, &opts);
            assert!(vp.is_zero(), "{text} reduced: {}", vp.tag());
        }
        let nonzero_cases = [("1 1 1", 2), ("1 1", 2)];
        for (text, b) in nonzero_cases {
            let w = word(text, b);
            for ring in
                [CoefficientRing::Gf2, CoefficientRing::Rational, CoefficientRing::Integer]
            {
                assert!(psi_vanishes(&w, ring, &opts).is_nonzero(), "{text} over {ring}");
            }
        }
        let w = word("1 1 1", 2);
        assert!(psi_prime_vanishes(&w, &opts).is_nonzero());
    }

    #[test]
    fn certificate_rejects_wrong_word() {
        let opts = ComplexOpts::default();
        let w = word("-1 -1 -1", 2);
        let PsiOutcome::ZeroWithCertificate(phi) = psi_vanishes(&w, CoefficientRing::Gf2, &opts)
        else {
            panic!("expected zero");
        };
        assert!(verify_certificate(&w, &phi));
        let other = word("-1", 2);
        assert!(!verify_certificate(&other, &phi));
    }

    #[test]
    fn certificate_file_roundtrip() {
        let opts = ComplexOpts::default();
        let w = word("1 -2 1 -2", 3);
        let PsiOutcome::ZeroWithCertificate(phi) =
            psi_vanishes(&w, CoefficientRing::Integer, &opts)
        else {
            panic!("expected zero");
        };
        let f = certificate_to_file(&w, &phi);
        let json = serde_json::to_string(&f).unwrap();
        let back: CertificateFile = serde_json::from_str(&json).unwrap();
        let (w2, phi2) = certificate_from_file(&back).unwrap();
        assert_eq!(w2.letters, w.letters);
        assert!(verify_certificate(&w2, &phi2));
    }

    #[test]
    fn resource_cap_reports_undecided() {
        let opts = ComplexOpts { max_dim: 10, ..ComplexOpts::default() };
        let w = word("1 -2 1 -2 1 -2", 3);
        match psi_vanishes(&w, CoefficientRing::Gf2, &opts) {
            PsiOutcome::Undecided(msg) => assert!(msg.contains("cap")),
            other => panic!("expected undecided, got {}", other.tag()),
        }
    }

    #[test]
    fn verdict_invariant_under_markov_moves() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for _ in 0..12 {
            let strands = rng.gen_range(2..4usize);
            let len = rng.gen_range(1..6usize);
            let w = random_word(&mut rng, strands, len);
            let opts = ComplexOpts::default();
            let base = psi_vanishes(&w, CoefficientRing::Gf2, &opts).tag();
            let g = {
                let g0 = rng.gen_range(1..strands as i32);
                if rng.gen_bool(0.5) {
                    g0
                } else {
                    -g0
                }
            };
            let conj = crate::braid::conjugate(&w, g);
            assert_eq!(psi_vanishes(&conj, CoefficientRing::Gf2, &opts).tag(), base);
            let stab = crate::braid::stabilize_pos(&w);
            assert_eq!(psi_vanishes(&stab, CoefficientRing::Gf2, &opts).tag(), base);
        }
    }

    #[test]
    fn marked_point_choice_does_not_change_reduced_verdict() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let strands = rng.gen_range(2..4usize);
            let len = rng.gen_range(1..6usize);
            let w = random_word(&mut rng, strands, len);
            let tags: Vec<&str> = (0..strands)
                .map(|m| {
                    let opts = ComplexOpts { marked: m, ..ComplexOpts::default() };
                    psi_prime_vanishes(&w, &opts).tag()
                })
                .collect();
            assert!(tags.windows(2).all(|t| t[0] == t[1]), "{:?}: {tags:?}", w.letters);
        }
    }

    #[test]
    fn euler_characteristic_matches_complex() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for _ in 0..8 {
            let strands = rng.gen_range(2..4usize);
            let len = rng.gen_range(1..7usize);
            let w = random_word(&mut rng, strands, len);
            let d = TangleDiagram::from_braid(&w);
            let table = homology_table(&d, CoefficientRing::Rational, false, 0, None);
            let bbox = crate::skeinstab::grading_support_bounds(&d, false);
            let mut by_j_complex: BTreeMap<i64, i64> = BTreeMap::new();
            for i in bbox.i_min..=bbox.i_max {
                for j in bbox.j_min..=bbox.j_max {
                    let dim = match build_piece(&d, i, j, false, 0, u64::MAX) {
                        PieceBuild::Built(p) => p.dim as i64,
                        _ => 0,
                    };
                    *by_j_complex.entry(j).or_default() += if i % 2 == 0 { dim } else { -dim };
                }
            }
            let mut by_j_homology: BTreeMap<i64, i64> = BTreeMap::new();
            for (&(i, j), e) in &table {
                *by_j_homology.entry(j).or_default() +=
                    if i % 2 == 0 { e.rank as i64 } else { -(e.rank as i64) };
            }
            for j in bbox.j_min..=bbox.j_max {
                assert_eq!(
                    by_j_complex.get(&j).copied().unwrap_or(0),
                    by_j_homology.get(&j).copied().unwrap_or(0),
                    "Euler characteristic mismatch at j={j} for {:?}",
                    w.letters
                );
            }
        }
    }
}
