//! Dehornoy order decisions via handle reduction, the Dehornoy floor, and
//! bounds on the fractional Dehn twist coefficient of a braid: letter-count
//! windows, syntactic exact values for full-twist-times-local-word shapes,
//! and floor-of-powers diagnostics.

use crate::braid::{self, BraidWord};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FdtcError {
    #[error("handle reduction exceeded {0} steps")]
    StepLimit(usize),
    #[error("floor search range |m| <= {0} exhausted without a sign change")]
    FloorRange(i64),
}

pub const DEFAULT_STEP_BUDGET: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DehornoySign {
    Positive,
    Trivial,
    Negative,
}

/// One handle reduction pass: repeatedly rewrite the leftmost innermost
/// handle sigma_i^e v sigma_i^{-e} (v without letters of index <= i) by
/// deleting the pair and conjugating the index i+1 letters of v. Returns the
/// reduced word or the step budget error.
fn handle_reduce(letters: &[i32], budget: usize) -> Result<Vec<i32>, FdtcError> {
    let mut w = free_reduce_vec(letters.to_vec());
    let mut steps = 0usize;
    'outer: loop {
        // leftmost closing position of any handle
        let mut last_of_index: Vec<Option<usize>> = Vec::new();
        for q in 0..w.len() {
            let iq = w[q].unsigned_abs() as usize;
            if last_of_index.len() < iq + 1 {
                last_of_index.resize(iq + 1, None);
            }
            if let Some(p) = last_of_index[iq] {
                if w[p] == -w[q] {
                    // handle if nothing of index < iq lies strictly between
                    let clean =
                        w[p + 1..q].iter().all(|l| (l.unsigned_abs() as usize) > iq);
                    if clean {
                        steps += 1;
                        if steps > budget {
                            return Err(FdtcError::StepLimit(budget));
                        }
                        let e = w[p].signum();
                        let mut out = Vec::with_capacity(w.len() + 2 * (q - p));
                        out.extend_from_slice(&w[..p]);
                        for &l in &w[p + 1..q] {
                            if l.unsigned_abs() as usize == iq + 1 {
                                let j = iq as i32 + 1;
                                out.push(-e * j);
                                out.push(l.signum() * iq as i32);
                                out.push(e * j);
                            } else {
                                out.push(l);
                            }
                        }
                        out.extend_from_slice(&w[q + 1..]);
                        w = free_reduce_vec(out);
                        continue 'outer;
                    }
                }
            }
            // a letter of index iq interrupts handles of any index >= iq?
            // handles of larger index are interrupted only by smaller letters,
            // which is checked above; track the latest index occurrence
            last_of_index[iq] = Some(q);
        }
        return Ok(w);
    }
}

fn free_reduce_vec(letters: Vec<i32>) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::with_capacity(letters.len());
    for l in letters {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Position of the braid in the Dehornoy order relative to the identity.
pub fn dehornoy_sign(w: &BraidWord) -> Result<DehornoySign, FdtcError> {
    dehornoy_sign_budget(w, DEFAULT_STEP_BUDGET)
}

pub fn dehornoy_sign_budget(w: &BraidWord, budget: usize) -> Result<DehornoySign, FdtcError> {
    let reduced = handle_reduce(&w.letters, budget)?;
    if reduced.is_empty() {
        return Ok(DehornoySign::Trivial);
    }
    let lowest = reduced.iter().map(|l| l.unsigned_abs()).min().unwrap();
    // a handle-free word has all lowest-index letters with one sign
    let sign = reduced
        .iter()
        .find(|l| l.unsigned_abs() == lowest)
        .map(|l| l.signum())
        .unwrap();
    Ok(if sign > 0 { DehornoySign::Positive } else { DehornoySign::Negative })
}

fn full_twist_letters(n: usize) -> Vec<i32> {
    if n < 2 {
        Vec::new()
    } else {
        braid::full_twist(n).unwrap().letters
    }
}

/// The unique m with Delta^{2m} <= w < Delta^{2m+2} in the Dehornoy order.
pub fn dehornoy_floor(w: &BraidWord) -> Result<i64, FdtcError> {
    dehornoy_floor_budget(w, DEFAULT_STEP_BUDGET)
}

pub fn dehornoy_floor_budget(w: &BraidWord, budget: usize) -> Result<i64, FdtcError> {
    let ft = full_twist_letters(w.strands);
    if ft.is_empty() {
        return Ok(0);
    }
    // sign of Delta^{-2m} w is monotone nonincreasing in m
    let at = |m: i64| -> Result<DehornoySign, FdtcError> {
        let mut letters: Vec<i32> = Vec::new();
        if m >= 0 {
            for _ in 0..m {
                letters.extend(ft.iter().rev().map(|l| -l));
            }
        } else {
            for _ in 0..(-m) {
                letters.extend(ft.iter());
            }
        }
        letters.extend_from_slice(&w.letters);
        dehornoy_sign_budget(&BraidWord::new(w.strands, letters).unwrap(), budget)
    };
    let range = w.len() as i64 + 1;
    let (mut lo, mut hi) = (-range, range);
    if at(lo)? == DehornoySign::Negative || at(hi + 1)? != DehornoySign::Negative {
        return Err(FdtcError::FloorRange(range));
    }
    // invariant: at(lo) >= trivial, at(hi + 1) negative
    while lo < hi {
        let mid = lo + (hi - lo + 1) / 2;
        if at(mid)? == DehornoySign::Negative {
            hi = mid - 1;
        } else {
            lo = mid;
        }
    }
    Ok(lo)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FdtcBounds {
    pub lower: BigRational,
    pub upper: BigRational,
    pub provenance: String,
}

/// Letter-count window: for each generator with r positive and s negative
/// occurrences, -s <= fdtc <= r; the windows intersect over all generators.
pub fn fdtc_letter_bounds(w: &BraidWord) -> FdtcBounds {
    let gens = w.strands.saturating_sub(1);
    let mut lower = i64::MIN;
    let mut upper = i64::MAX;
    if gens == 0 {
        lower = 0;
        upper = 0;
    }
    for g in 1..=gens {
        let r = w.letters.iter().filter(|&&l| l == g as i32).count() as i64;
        let s = w.letters.iter().filter(|&&l| l == -(g as i32)).count() as i64;
        lower = lower.max(-s);
        upper = upper.min(r);
    }
    FdtcBounds {
        lower: BigRational::from(BigInt::from(lower)),
        upper: BigRational::from(BigInt::from(upper)),
        provenance: "letter-count".into(),
    }
}

/// Exact value for words of the shape Delta^{2n} * (block missing some
/// generator): strips literal full-twist prefixes (either sign) and requires
/// the freely reduced remainder to avoid some generator entirely.
pub fn fdtc_pattern(w: &BraidWord) -> Option<i64> {
    let ft = full_twist_letters(w.strands);
    if ft.is_empty() {
        return Some(0);
    }
    let ft_inv: Vec<i32> = ft.iter().rev().map(|l| -l).collect();
    let mut rest: &[i32] = &w.letters;
    let mut n = 0i64;
    loop {
        if rest.starts_with(&ft) {
            n += 1;
            rest = &rest[ft.len()..];
        } else if rest.starts_with(&ft_inv) {
            n -= 1;
            rest = &rest[ft.len()..];
        } else {
            break;
        }
    }
    let reduced = free_reduce_vec(rest.to_vec());
    let missing = (1..w.strands as i32)
        .any(|g| reduced.iter().all(|l| l.unsigned_abs() != g as u32));
    if missing || reduced.is_empty() {
        Some(n)
    } else {
        None
    }
}

/// Dehornoy floors of powers, as (floor(w^k), k) pairs.
pub fn floor_sequence(w: &BraidWord, k_max: usize) -> Result<Vec<(i64, i64)>, FdtcError> {
    let mut out = Vec::with_capacity(k_max);
    let mut letters: Vec<i32> = Vec::new();
    for k in 1..=k_max {
        letters.extend_from_slice(&w.letters);
        let pw = BraidWord::new(w.strands, letters.clone()).unwrap();
        out.push((dehornoy_floor(&pw)?, k as i64));
    }
    Ok(out)
}
