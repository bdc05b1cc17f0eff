//! Braid words in the Artin generators: parsing, basic invariants, and the
//! algebraic moves (free reduction, conjugation, Markov stabilization) that
//! transverse invariants are supposed to respect.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A word in the braid group B_b. Letters are stored flat as signed generator
/// indices: `k > 0` means sigma_k, `k < 0` means sigma_{|k|}^{-1}, with
/// `1 <= |k| <= strands - 1`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidWord {
    pub strands: usize,
    pub letters: Vec<i32>,
}

#[derive(Debug, Error)]
pub enum BraidError {
    #[error("malformed token `{0}`")]
    MalformedToken(String),
    #[error("generator index {0} out of range 1..={1}")]
    IndexOutOfRange(i32, usize),
    #[error("exponent overflow in `{0}`")]
    ExponentOverflow(String),
    #[error("unbalanced parentheses")]
    Unbalanced,
    #[error("strand count must be at least 1")]
    BadStrands,
    #[error("{0}")]
    BadParameter(String),
}

impl std::fmt::Debug for BraidWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BraidWord(b={}, {:?})", self.strands, self.letters)
    }
}

impl std::fmt::Display for BraidWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let toks: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", toks.join(" "))
    }
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self, BraidError> {
        if strands < 1 {
            return Err(BraidError::BadStrands);
        }
        for &l in &letters {
            let idx = l.unsigned_abs() as usize;
            if l == 0 || idx > strands.saturating_sub(1) {
                return Err(BraidError::IndexOutOfRange(l, strands.saturating_sub(1)));
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn empty(strands: usize) -> Self {
        BraidWord { strands, letters: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn n_pos(&self) -> usize {
        self.letters.iter().filter(|&&l| l > 0).count()
    }

    pub fn n_neg(&self) -> usize {
        self.letters.iter().filter(|&&l| l < 0).count()
    }

    pub fn inverse(&self) -> Self {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|&l| -l).collect(),
        }
    }

    /// Permutation induced on strand positions, bottom to top.
    pub fn permutation(&self) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..self.strands).collect();
        for &l in &self.letters {
            let i = l.unsigned_abs() as usize - 1;
            perm.swap(i, i + 1);
        }
        perm
    }

    /// Number of components of the closure.
    pub fn closure_components(&self) -> usize {
        let perm = self.permutation();
        let mut seen = vec![false; self.strands];
        let mut count = 0;
        for s in 0..self.strands {
            if seen[s] {
                continue;
            }
            count += 1;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = perm[x];
            }
        }
        count
    }
}

pub fn writhe(w: &BraidWord) -> i64 {
    w.n_pos() as i64 - w.n_neg() as i64
}

pub fn self_linking(w: &BraidWord) -> i64 {
    -(w.strands as i64) + writhe(w)
}

/// The full twist Delta^2 = (sigma_1 ... sigma_{n-1})^n.
pub fn full_twist(n: usize) -> Result<BraidWord, BraidError> {
    if n < 2 {
        return Err(BraidError::BadParameter("full twist needs n >= 2".into()));
    }
    let mut letters = Vec::with_capacity(n * (n - 1));
    for _ in 0..n {
        for i in 1..n {
            letters.push(i as i32);
        }
    }
    Ok(BraidWord { strands: n, letters })
}

/// The sub-full twist (sigma_i^s sigma_{i+1}^s ... sigma_{i+a-2}^s)^a on `a`
/// adjacent strands inside B_strands.
pub fn sub_full_twist(
    strands: usize,
    a: usize,
    i: usize,
    sign: i32,
) -> Result<BraidWord, BraidError> {
    if a < 2 || i < 1 || i + a - 2 > strands.saturating_sub(1) {
        return Err(BraidError::BadParameter(format!(
            "sub-full twist (a={a}, i={i}) does not fit in B_{strands}"
        )));
    }
    let s = if sign >= 0 { 1 } else { -1 };
    let mut letters = Vec::with_capacity(a * (a - 1));
    for _ in 0..a {
        for g in i..=(i + a - 2) {
            letters.push(s * g as i32);
        }
    }
    BraidWord::new(strands, letters)
}

pub fn free_reduce(w: &BraidWord) -> BraidWord {
    let mut out: Vec<i32> = Vec::with_capacity(w.letters.len());
    for &l in &w.letters {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    BraidWord { strands: w.strands, letters: out }
}

/// g^{-1} w g, freely reduced.
pub fn conjugate(w: &BraidWord, g: i32) -> BraidWord {
    let mut letters = Vec::with_capacity(w.letters.len() + 2);
    letters.push(-g);
    letters.extend_from_slice(&w.letters);
    letters.push(g);
    free_reduce(&BraidWord { strands: w.strands, letters })
}

/// Positive Markov stabilization: append sigma_b on b+1 strands.
pub fn stabilize_pos(w: &BraidWord) -> BraidWord {
    let mut letters = w.letters.clone();
    letters.push(w.strands as i32);
    BraidWord { strands: w.strands + 1, letters }
}

/// Markov destabilization: requires exactly one occurrence of sigma_{b-1}^{+-1}
/// and none of the opposite sign.
pub fn destabilize(w: &BraidWord) -> Option<BraidWord> {
    if w.strands < 2 {
        return None;
    }
    let top = (w.strands - 1) as i32;
    let count: usize = w.letters.iter().filter(|&&l| l.abs() == top).count();
    if count != 1 {
        return None;
    }
    let letters: Vec<i32> = w.letters.iter().copied().filter(|&l| l.abs() != top).collect();
    Some(BraidWord { strands: w.strands - 1, letters })
}

/// A one-parameter braid family w(k) = base . insert^k.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilyTemplate {
    pub base: BraidWord,
    pub insert: BraidWord,
    pub k_min: i64,
    pub k_max: i64,
}

impl FamilyTemplate {
    pub fn new(base: BraidWord, insert: BraidWord, k_min: i64, k_max: i64) -> Result<Self, BraidError> {
        if base.strands != insert.strands {
            return Err(BraidError::BadParameter("strand counts differ".into()));
        }
        if k_min < 0 || k_min > k_max {
            return Err(BraidError::BadParameter("bad parameter range".into()));
        }
        Ok(FamilyTemplate { base, insert, k_min, k_max })
    }

    pub fn instantiate(&self, k: i64) -> BraidWord {
        let mut letters = self.base.letters.clone();
        for _ in 0..k {
            letters.extend_from_slice(&self.insert.letters);
        }
        BraidWord { strands: self.base.strands, letters }
    }
}

/// Grammar: whitespace-separated tokens; a token is a signed nonzero integer,
/// `FT` (full twist on the ambient strand count), or a parenthesized group
/// `( tokens )^m`. Groups may nest.
pub fn parse_braid(text: &str, strands: usize) -> Result<BraidWord, BraidError> {
    if strands < 1 {
        return Err(BraidError::BadStrands);
    }
    let mut toks: Vec<String> = Vec::new();
    // split off parens so "(", ")^m" become their own tokens
    for raw in text.split_whitespace() {
        let mut rest = raw;
        while let Some(stripped) = rest.strip_prefix('(') {
            toks.push("(".into());
            rest = stripped;
        }
        if rest.is_empty() {
            continue;
        }
        if let Some(pos) = rest.find(')') {
            let (head, tail) = rest.split_at(pos);
            if !head.is_empty() {
                toks.push(head.into());
            }
            toks.push(tail.into());
        } else {
            toks.push(rest.into());
        }
    }
    let mut pos = 0usize;
    let letters = parse_group(&toks, &mut pos, strands, false)?;
    if pos != toks.len() {
        return Err(BraidError::Unbalanced);
    }
    BraidWord::new(strands, letters)
}

fn parse_group(
    toks: &[String],
    pos: &mut usize,
    strands: usize,
    inside: bool,
) -> Result<Vec<i32>, BraidError> {
    let mut out: Vec<i32> = Vec::new();
    while *pos < toks.len() {
        let t = toks[*pos].clone();
        if t == "(" {
            *pos += 1;
            let inner = parse_group(toks, pos, strands, true)?;
            // expect ")^m" or ")"
            if *pos >= toks.len() || !toks[*pos].starts_with(')') {
                return Err(BraidError::Unbalanced);
            }
            let close = toks[*pos].clone();
            *pos += 1;
            let m: i64 = if close == ")" {
                1
            } else if let Some(e) = close.strip_prefix(")^") {
                e.parse().map_err(|_| BraidError::MalformedToken(close.clone()))?
            } else {
                return Err(BraidError::MalformedToken(close.clone()));
            };
            if m < 0 {
                return Err(BraidError::MalformedToken(close));
            }
            let total = inner.len() as i64 * m;
            if total > 1_000_000 {
                return Err(BraidError::ExponentOverflow(close));
            }
            for _ in 0..m {
                out.extend_from_slice(&inner);
            }
            continue;
        }
        if t.starts_with(')') {
            if inside {
                return Ok(out);
            }
            return Err(BraidError::Unbalanced);
        }
        if t == "FT" {
            let ft = full_twist(strands)?;
            out.extend_from_slice(&ft.letters);
        } else {
            let l: i32 = t.parse().map_err(|_| BraidError::MalformedToken(t.clone()))?;
            let idx = l.unsigned_abs() as usize;
            if l == 0 || idx > strands.saturating_sub(1) {
                return Err(BraidError::IndexOutOfRange(l, strands.saturating_sub(1)));
            }
            out.push(l);
        }
        *pos += 1;
    }
    if inside {
        return Err(BraidError::Unbalanced);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_plain() {
        let w = parse_braid("1 2 -2", 3).unwrap();
        assert_eq!(w.letters, vec![1, 2, -2]);
    }

    #[test]
    fn parse_ft_and_power() {
        let w = parse_braid("FT (-2)^5", 3).unwrap();
        assert_eq!(w.letters.len(), 11);
        assert_eq!(&w.letters[..6], &[1, 2, 1, 2, 1, 2]);
        assert_eq!(&w.letters[6..], &[-2; 5]);
    }

    #[test]
    fn parse_nested_power() {
        let w = parse_braid("( 1 ( 2 )^2 )^3", 3).unwrap();
        assert_eq!(w.letters, vec![1, 2, 2, 1, 2, 2, 1, 2, 2]);
    }

    #[test]
    fn parse_out_of_range() {
        assert!(parse_braid("4", 3).is_err());
        assert!(parse_braid("0", 3).is_err());
        assert!(parse_braid("x", 3).is_err());
    }

    #[test]
    fn writhe_examples() {
        for k in 0..9i64 {
            let w = parse_braid(&format!("FT (-2)^{k}"), 3).unwrap();
            assert_eq!(writhe(&w), 6 - k);
            let w2 = parse_braid(&format!("FT 1 (-2)^{k}"), 3).unwrap();
            assert_eq!(writhe(&w2), 7 - k);
        }
        assert_eq!(writhe(&BraidWord::empty(3)), 0);
    }

    #[test]
    fn self_linking_examples() {
        for k in 0..10i64 {
            let w = parse_braid(&format!("FT (-3)^{k}"), 4).unwrap();
            assert_eq!(self_linking(&w), 8 - k);
            let w2 = parse_braid(&format!("FT 1 (-2)^{k}"), 3).unwrap();
            assert_eq!(self_linking(&w2), 4 - k);
        }
        assert_eq!(self_linking(&BraidWord::empty(1)), -1);
    }

    #[test]
    fn full_twist_words() {
        assert_eq!(full_twist(2).unwrap().letters, vec![1, 1]);
        assert_eq!(full_twist(3).unwrap().letters, vec![1, 2, 1, 2, 1, 2]);
        assert_eq!(full_twist(4).unwrap().letters.len(), 12);
        assert!(full_twist(1).is_err());
    }

    #[test]
    fn sub_full_twist_words() {
        assert_eq!(sub_full_twist(3, 2, 1, 1).unwrap().letters, vec![1, 1]);
        let w = sub_full_twist(4, 3, 2, -1).unwrap();
        assert_eq!(w.letters, vec![-2, -3, -2, -3, -2, -3]);
        let ft = sub_full_twist(3, 3, 1, 1).unwrap();
        assert_eq!(ft.letters, full_twist(3).unwrap().letters);
        assert!(sub_full_twist(3, 3, 2, 1).is_err());
    }

    #[test]
    fn moves() {
        let w = BraidWord::new(3, vec![1, -1, 2]).unwrap();
        assert_eq!(free_reduce(&w).letters, vec![2]);
        let s = stabilize_pos(&BraidWord::new(2, vec![1]).unwrap());
        assert_eq!((s.strands, s.letters.clone()), (3, vec![1, 2]));
        let d = destabilize(&s).unwrap();
        assert_eq!((d.strands, d.letters), (2, vec![1]));
        assert!(destabilize(&BraidWord::new(3, vec![2, 2]).unwrap()).is_none());
        assert!(destabilize(&BraidWord::new(3, vec![2, -2]).unwrap()).is_none());
    }

    #[test]
    fn conjugation_preserves_writhe_and_perm() {
        let w = BraidWord::new(3, vec![1, 2, -1, 2, 2]).unwrap();
        for g in [1i32, 2, -1, -2] {
            let c = conjugate(&w, g);
            assert_eq!(writhe(&c), writhe(&w));
            assert_eq!(self_linking(&c), self_linking(&w));
        }
        assert_eq!(self_linking(&stabilize_pos(&w)), self_linking(&w));
    }

    #[test]
    fn free_reduce_idempotent_preserves_perm() {
        let w = BraidWord::new(4, vec![1, 3, -3, 2, -2, -1, 1, 3]).unwrap();
        let r = free_reduce(&w);
        assert_eq!(free_reduce(&r).letters, r.letters);
        assert_eq!(r.permutation(), w.permutation());
    }

    #[test]
    fn family_template() {
        let base = parse_braid("FT", 3).unwrap();
        let insert = parse_braid("-2", 3).unwrap();
        let fam = FamilyTemplate::new(base, insert, 0, 8).unwrap();
        let w = fam.instantiate(5);
        assert_eq!(w.letters, parse_braid("FT (-2)^5", 3).unwrap().letters);
    }

    #[test]
    fn closure_components() {
        assert_eq!(BraidWord::new(2, vec![1, 1]).unwrap().closure_components(), 2);
        assert_eq!(BraidWord::empty(3).closure_components(), 3);
        assert_eq!(BraidWord::new(2, vec![1]).unwrap().closure_components(), 1);
    }
}
