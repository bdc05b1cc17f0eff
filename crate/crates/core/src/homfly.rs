//! HOMFLY-PT polynomial of braid closures by memoized skein recursion,
//! a-degree extraction, and the Morton-Franks-Williams style upper bound on
//! the maximal self-linking number.
//!
//! Convention: a P(L+) - a^{-1} P(L-) = z P(L0), unknot = 1,
//! delta = (a - a^{-1})/z for split unknots.

use crate::braid::BraidWord;
use crate::exactalg::CoefficientRing;
use crate::khovanov;
use crate::tangle::TangleDiagram;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HomflyError {
    #[error("skein tree exceeded {0} nodes")]
    ResourceLimit(usize),
    #[error("zero polynomial has no a-degree")]
    ZeroPolynomial,
    #[error("{0}")]
    BadParameter(String),
}

/// Integer Laurent polynomial in a and z.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentPoly2 {
    pub terms: BTreeMap<(i64, i64), BigInt>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct PolyTerm {
    pub a: i64,
    pub z: i64,
    pub c: String,
}

impl LaurentPoly2 {
    pub fn zero() -> Self {
        LaurentPoly2::default()
    }

    pub fn one() -> Self {
        let mut p = LaurentPoly2::default();
        p.terms.insert((0, 0), BigInt::one());
        p
    }

    /// (a - a^{-1}) / z
    pub fn delta() -> Self {
        let mut p = LaurentPoly2::default();
        p.terms.insert((1, -1), BigInt::one());
        p.terms.insert((-1, -1), -BigInt::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_assign(&mut self, other: &LaurentPoly2) {
        for (k, v) in &other.terms {
            let e = self.terms.entry(*k).or_insert_with(BigInt::zero);
            *e += v;
            if e.is_zero() {
                self.terms.remove(k);
            }
        }
    }

    pub fn mul(&self, other: &LaurentPoly2) -> LaurentPoly2 {
        let mut out = LaurentPoly2::default();
        for ((a1, z1), c1) in &self.terms {
            for ((a2, z2), c2) in &other.terms {
                let k = (a1 + a2, z1 + z2);
                let e = out.terms.entry(k).or_insert_with(BigInt::zero);
                *e += c1 * c2;
                if e.is_zero() {
                    out.terms.remove(&k);
                }
            }
        }
        out
    }

    /// self * c * a^da * z^dz
    pub fn scale(&self, da: i64, dz: i64, c: i64) -> LaurentPoly2 {
        let mut out = LaurentPoly2::default();
        if c == 0 {
            return out;
        }
        for ((a, z), v) in &self.terms {
            out.terms.insert((a + da, z + dz), v * BigInt::from(c));
        }
        out
    }

    pub fn a_degree(&self) -> Result<i64, HomflyError> {
        self.terms.keys().map(|(a, _)| *a).max().ok_or(HomflyError::ZeroPolynomial)
    }

    /// coefficients at the top a-degree, keyed by z-exponent
    pub fn leading_a_coefficients(&self) -> Vec<(i64, BigInt)> {
        let Ok(d) = self.a_degree() else { return Vec::new() };
        self.terms
            .iter()
            .filter(|((a, _), _)| *a == d)
            .map(|((_, z), c)| (*z, c.clone()))
            .collect()
    }

    pub fn to_terms(&self) -> Vec<PolyTerm> {
        self.terms
            .iter()
            .map(|((a, z), c)| PolyTerm { a: *a, z: *z, c: c.to_string() })
            .collect()
    }

    pub fn from_terms(terms: &[PolyTerm]) -> Result<Self, HomflyError> {
        let mut p = LaurentPoly2::default();
        for t in terms {
            let c: BigInt = t
                .c
                .parse()
                .map_err(|_| HomflyError::BadParameter(format!("bad coefficient {}", t.c)))?;
            if !c.is_zero() {
                p.terms.insert((t.a, t.z), c);
            }
        }
        Ok(p)
    }
}

impl std::fmt::Display for LaurentPoly2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((a, z), c) in &self.terms {
            if first {
                write!(f, "{c}")?;
                first = false;
            } else if c.is_negative() {
                write!(f, " - {}", -c)?;
            } else {
                write!(f, " + {c}")?;
            }
            if *a != 0 {
                write!(f, "*a^{a}")?;
            }
            if *z != 0 {
                write!(f, "*z^{z}")?;
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// braid-word skein recursion

fn free_reduce(word: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::with_capacity(word.len());
    for &l in word {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Free reduction, destabilization of a lone top letter, and splitting of
/// unused strands (each worth a delta factor). Returns (strands, word,
/// delta_power).
fn canon(mut b: usize, mut word: Vec<i32>) -> (usize, Vec<i32>, u32) {
    word = free_reduce(&word);
    let mut delta_pow = 0u32;
    loop {
        if b >= 2 {
            let top = (b - 1) as i32;
            if word.iter().filter(|l| l.unsigned_abs() == top as u32).count() == 1 {
                word.retain(|l| l.unsigned_abs() != top as u32);
                b -= 1;
                continue;
            }
        }
        let mut used = vec![false; b];
        for l in &word {
            let i = l.unsigned_abs() as usize - 1;
            used[i] = true;
            used[i + 1] = true;
        }
        let unused = if b > 1 { (0..b).find(|&p| !used[p]) } else { None };
        if let Some(p) = unused {
            for l in word.iter_mut() {
                if l.unsigned_abs() as usize > p {
                    *l = (l.unsigned_abs() as i32 - 1) * l.signum();
                }
            }
            b -= 1;
            delta_pow += 1;
            continue;
        }
        break;
    }
    (b, free_reduce(&word), delta_pow)
}

fn permutation_cycles(b: usize, word: &[i32]) -> Vec<Vec<usize>> {
    let mut next = vec![0usize; b];
    for (s, n) in next.iter_mut().enumerate() {
        let mut y = s;
        for l in word {
            let i = l.unsigned_abs() as usize - 1;
            if y == i {
                y = i + 1;
            } else if y == i + 1 {
                y = i;
            }
        }
        *n = y;
    }
    let mut seen = vec![false; b];
    let mut out = Vec::new();
    for s in 0..b {
        if seen[s] {
            continue;
        }
        let mut cyc = Vec::new();
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            cyc.push(x);
            x = next[x];
        }
        out.push(cyc);
    }
    out
}

/// First crossing first met on its under-strand along the basepoint traversal
/// (components ordered by minimal strand, each entered at its minimal strand).
fn first_bad_crossing(b: usize, word: &[i32]) -> Option<usize> {
    let n = word.len();
    let mut visited = vec![false; n];
    let mut comps = permutation_cycles(b, word);
    comps.sort_by_key(|c| *c.iter().min().unwrap());
    for cyc in comps {
        let start = *cyc.iter().min().unwrap();
        let mut pos = start;
        loop {
            for (t, &l) in word.iter().enumerate() {
                let i = l.unsigned_abs() as usize - 1;
                if pos == i || pos == i + 1 {
                    let over = if l > 0 { pos == i } else { pos == i + 1 };
                    if !visited[t] {
                        visited[t] = true;
                        if !over {
                            return Some(t);
                        }
                    }
                    pos = if pos == i { i + 1 } else { i };
                }
            }
            if pos == start {
                break;
            }
        }
    }
    None
}

/// One node of the evaluated skein tree, kept for relation spot checks.
#[derive(Clone, Debug)]
pub struct SkeinNode {
    pub strands: usize,
    pub word: Vec<i32>,
    pub bad: Option<usize>,
}

pub struct HomflyEngine {
    memo: HashMap<(usize, Vec<i32>), LaurentPoly2>,
    pub nodes: Vec<SkeinNode>,
    pub node_cap: usize,
}

pub const DEFAULT_NODE_CAP: usize = 2_000_000;

impl Default for HomflyEngine {
    fn default() -> Self {
        HomflyEngine { memo: HashMap::new(), nodes: Vec::new(), node_cap: DEFAULT_NODE_CAP }
    }
}

impl HomflyEngine {
    pub fn eval(&mut self, b: usize, word: &[i32]) -> Result<LaurentPoly2, HomflyError> {
        let (b, word, dpow) = canon(b, word.to_vec());
        let key = (b, word);
        let base = if let Some(p) = self.memo.get(&key) {
            p.clone()
        } else {
            if self.nodes.len() >= self.node_cap {
                return Err(HomflyError::ResourceLimit(self.node_cap));
            }
            let (b, word) = (key.0, key.1.clone());
            let bad = first_bad_crossing(b, &word);
            self.nodes.push(SkeinNode { strands: b, word: word.clone(), bad });
            let p = match bad {
                None => {
                    let c = permutation_cycles(b, &word).len();
                    let mut p = LaurentPoly2::one();
                    for _ in 1..c {
                        p = p.mul(&LaurentPoly2::delta());
                    }
                    p
                }
                Some(t) => {
                    let l = word[t];
                    let mut sw = word.clone();
                    sw[t] = -l;
                    let mut sm = word.clone();
                    sm.remove(t);
                    let psw = self.eval(b, &sw)?;
                    let psm = self.eval(b, &sm)?;
                    if l > 0 {
                        // a P - a^{-1} P_sw = z P_sm
                        let mut p = psw.scale(-2, 0, 1);
                        p.add_assign(&psm.scale(-1, 1, 1));
                        p
                    } else {
                        // a P_sw - a^{-1} P = z P_sm
                        let mut p = psw.scale(2, 0, 1);
                        p.add_assign(&psm.scale(1, 1, -1));
                        p
                    }
                }
            };
            self.memo.insert(key, p.clone());
            p
        };
        let mut out = base;
        for _ in 0..dpow {
            out = out.mul(&LaurentPoly2::delta());
        }
        Ok(out)
    }

    /// Re-verify the defining relation at one recorded branching node.
    pub fn check_node(&mut self, idx: usize) -> Result<bool, HomflyError> {
        let node = self.nodes[idx].clone();
        let Some(t) = node.bad else { return Ok(true) };
        let l = node.word[t];
        let p = self.eval(node.strands, &node.word)?;
        let mut sw = node.word.clone();
        sw[t] = -l;
        let mut sm = node.word.clone();
        sm.remove(t);
        let psw = self.eval(node.strands, &sw)?;
        let psm = self.eval(node.strands, &sm)?;
        // a P(L+) - a^{-1} P(L-) = z P(L0) with (L+, L-) by the sign of l
        let (pplus, pminus) = if l > 0 { (&p, &psw) } else { (&psw, &p) };
        let mut lhs = pplus.scale(1, 0, 1);
        lhs.add_assign(&pminus.scale(-1, 0, -1));
        Ok(lhs == psm.scale(0, 1, 1))
    }
}

pub fn homfly(w: &BraidWord) -> Result<LaurentPoly2, HomflyError> {
    HomflyEngine::default().eval(w.strands, &w.letters)
}

/// HOMFLY of the negative 2-strand torus link T(2,-q) by the two-term
/// recursion P_q = a^2 P_{q-2} - a z P_{q-1}, seeded with engine values.
pub fn torus_homfly(q: i64) -> Result<LaurentPoly2, HomflyError> {
    if q < 2 {
        return Err(HomflyError::BadParameter(format!("torus parameter {q} < 2")));
    }
    let mut engine = HomflyEngine::default();
    let mut p2 = engine.eval(2, &[-1, -1])?;
    let mut p3 = engine.eval(2, &[-1, -1, -1])?;
    if q == 2 {
        return Ok(p2);
    }
    let mut k = 3i64;
    while k < q {
        let mut next = p2.scale(2, 0, 1);
        next.add_assign(&p3.scale(1, 1, -1));
        p2 = std::mem::replace(&mut p3, next);
        k += 1;
    }
    Ok(p3)
}

pub fn a_degree(p: &LaurentPoly2) -> Result<i64, HomflyError> {
    p.a_degree()
}

/// Upper bound on the maximal self-linking number over all transverse
/// representatives: -deg_a(P) - 1.
pub fn msl_upper_bound(p: &LaurentPoly2) -> Result<i64, HomflyError> {
    Ok(-p.a_degree()? - 1)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub enum WholeLinkVerdict {
    /// every braid representative of the link has vanishing transverse class
    AllRepresentativesVanish { support: Vec<i64>, bound: i64 },
    Inconclusive { support: Vec<i64>, bound: i64 },
}

/// The whole-link obstruction: if every nonzero integral Kh^0_j sits at
/// j strictly above the self-linking bound, the transverse class dies for
/// every representative.
pub fn whole_link_psi_obstruction(w: &BraidWord) -> Result<WholeLinkVerdict, HomflyError> {
    let p = homfly(w)?;
    let bound = msl_upper_bound(&p)?;
    let d = TangleDiagram::from_braid(w);
    let bbox = crate::skeinstab::grading_support_bounds(&d, false);
    let table = khovanov::homology_table(
        &d,
        CoefficientRing::Integer,
        false,
        0,
        Some((0, 0, bbox.j_min, bbox.j_max)),
    );
    let support: Vec<i64> = table
        .iter()
        .filter(|(_, e)| e.rank > 0 || !e.torsion.is_empty())
        .map(|((_, j), _)| *j)
        .collect();
    if !support.is_empty() && support.iter().all(|&j| j > bound) {
        Ok(WholeLinkVerdict::AllRepresentativesVanish { support, bound })
    } else {
        Ok(WholeLinkVerdict::Inconclusive { support, bound })
    }
}

/// Analytic predictions for the pretzel links P(r, -q, -q), r even, q odd:
/// Kh^0 support {1-2q, -1-2q} and deg_a = 2 + r + 2q.
pub fn pretzel_support_formula(r: i64, q: i64) -> Result<((i64, i64), i64), HomflyError> {
    if r < 2 || r % 2 != 0 || q <= 0 || q % 2 != 1 {
        return Err(HomflyError::BadParameter(format!(
            "need even r >= 2 and odd q > 0, got ({r}, {q})"
        )));
    }
    Ok(((1 - 2 * q, -1 - 2 * q), 2 + r + 2 * q))
}

/// P(2,-5,-5) as a 3-braid closure.
pub const PRETZEL_2_55: &str = "-1 -2 -2 -2 -2 -2 -1 -2 -2 -2 -2 -2";

/// P(4,-5,-5) as a 5-braid closure; the sigma_3^{-3} block carries one
/// inverted letter relative to the naive plumbing description.
pub const PRETZEL_4_55: &str = "-1 -2 -2 -2 -2 -2 -3 -2 -2 -2 -2 -2 1 2 -3 4 3 -3 -3 -2 -3 -4";
