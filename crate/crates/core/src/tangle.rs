//! Tile diagrams: closures of braid-like words built from crossings and flat
//! cap-cup tiles. Handles Kauffman-state resolution with circle tracking,
//! link components, orientations and crossing signs.
//!
//! Geometry: `strands` vertical positions, tiles stacked in order. Segment
//! (r, p) is the edge at height r on position p, `r` in `0..=rows`; the
//! closure identifies (rows, p) with (0, p). Circles are canonically numbered
//! by their minimal segment id (seg = r * strands + p).

use crate::braid::BraidWord;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Tile {
    /// Crossing occupying positions (index, index+1); `hand` is the crossing
    /// handedness (+1 = positive letter shape), independent of orientation.
    Crossing { index: usize, hand: i8 },
    /// Flat cap-cup tile: cap joins the two lower ends, cup the two upper.
    CapCup { index: usize },
}

#[derive(Debug, Error)]
pub enum TangleError {
    #[error("state length {0} does not match crossing count {1}")]
    StateLength(usize, usize),
    #[error("invalid crossing position {0}")]
    BadCrossing(usize),
    #[error("orientations not assigned")]
    NoOrientation,
    #[error("tile index out of range")]
    BadTile,
    #[error("{0}")]
    BadParameter(String),
}

/// One bit per crossing tile, in tile order. Bit 0 / 1 picks the 0- or
/// 1-resolution.
pub type KauffmanState = u64;

#[derive(Clone, Debug)]
pub struct CircleDecomposition {
    pub circle_count: usize,
    /// circle id per segment, circles numbered by minimal segment id
    pub segmap: Vec<u32>,
}

#[derive(Clone, Serialize, Deserialize)]
pub struct TangleDiagram {
    pub strands: usize,
    pub tiles: Vec<Tile>,
    /// per-component reversal flags relative to the traversal direction
    pub component_orientations: Option<Vec<i8>>,
    #[serde(skip)]
    signs: Option<Vec<i8>>,
}

impl std::fmt::Debug for TangleDiagram {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "TangleDiagram(b={}, {} tiles)", self.strands, self.tiles.len())
    }
}

impl TangleDiagram {
    pub fn new(strands: usize, tiles: Vec<Tile>) -> Result<Self, TangleError> {
        for t in &tiles {
            let i = match t {
                Tile::Crossing { index, .. } => *index,
                Tile::CapCup { index } => *index,
            };
            if i + 1 >= strands {
                return Err(TangleError::BadTile);
            }
        }
        Ok(TangleDiagram { strands, tiles, component_orientations: None, signs: None })
    }

    pub fn rows(&self) -> usize {
        self.tiles.len()
    }

    pub fn crossing_rows(&self) -> Vec<usize> {
        self.tiles
            .iter()
            .enumerate()
            .filter(|(_, t)| matches!(t, Tile::Crossing { .. }))
            .map(|(r, _)| r)
            .collect()
    }

    pub fn crossings(&self) -> usize {
        self.tiles.iter().filter(|t| matches!(t, Tile::Crossing { .. })).count()
    }

    fn seg(&self, r: usize, p: usize) -> usize {
        r * self.strands + p
    }

    pub fn n_segments(&self) -> usize {
        (self.rows() + 1) * self.strands
    }

    /// All-downward braid closure: every letter becomes a crossing tile and
    /// crossing sign equals letter sign.
    pub fn from_braid(w: &BraidWord) -> Self {
        let tiles: Vec<Tile> = w
            .letters
            .iter()
            .map(|&l| Tile::Crossing {
                index: l.unsigned_abs() as usize - 1,
                hand: if l > 0 { 1 } else { -1 },
            })
            .collect();
        let n = tiles.len();
        let mut d = TangleDiagram {
            strands: w.strands,
            tiles,
            component_orientations: None,
            signs: None,
        };
        // all strands downward: sign = handedness
        let signs: Vec<i8> = (0..n)
            .map(|c| match d.tiles[c] {
                Tile::Crossing { hand, .. } => hand,
                _ => unreachable!(),
            })
            .collect();
        d.signs = Some(signs);
        d.component_orientations = Some(vec![1; d.components().count]);
        d
    }

    /// Resolve a Kauffman state into circles. For a positive-handed crossing
    /// bit 0 is the identity smoothing and bit 1 the cap-cup; negative-handed
    /// is reversed. CapCup tiles always act as cap-cup and carry no bit.
    pub fn resolve(&self, state: KauffmanState) -> CircleDecomposition {
        let b = self.strands;
        let nseg = self.n_segments();
        let mut parent: Vec<u32> = (0..nseg as u32).collect();
        fn find(parent: &mut [u32], mut x: u32) -> u32 {
            while parent[x as usize] != x {
                parent[x as usize] = parent[parent[x as usize] as usize];
                x = parent[x as usize];
            }
            x
        }
        fn union(parent: &mut [u32], x: u32, y: u32) {
            let rx = find(parent, x);
            let ry = find(parent, y);
            if rx != ry {
                // union to the minimal root keeps circle numbering canonical
                let (lo, hi) = if rx < ry { (rx, ry) } else { (ry, rx) };
                parent[hi as usize] = lo;
            }
        }
        let mut ci = 0usize;
        for (r, t) in self.tiles.iter().enumerate() {
            let (i, identity) = match t {
                Tile::Crossing { index, hand } => {
                    let bit = state >> ci & 1;
                    ci += 1;
                    (*index, if *hand > 0 { bit == 0 } else { bit == 1 })
                }
                Tile::CapCup { index } => (*index, false),
            };
            for p in 0..b {
                if p != i && p != i + 1 {
                    union(&mut parent, self.seg(r, p) as u32, self.seg(r + 1, p) as u32);
                }
            }
            if identity {
                union(&mut parent, self.seg(r, i) as u32, self.seg(r + 1, i) as u32);
                union(&mut parent, self.seg(r, i + 1) as u32, self.seg(r + 1, i + 1) as u32);
            } else {
                union(&mut parent, self.seg(r, i) as u32, self.seg(r, i + 1) as u32);
                union(&mut parent, self.seg(r + 1, i) as u32, self.seg(r + 1, i + 1) as u32);
            }
        }
        let rows = self.rows();
        for p in 0..b {
            union(&mut parent, self.seg(rows, p) as u32, self.seg(0, p) as u32);
        }
        let mut roots: Vec<u32> = Vec::new();
        let mut segmap: Vec<u32> = vec![0; nseg];
        for s in 0..nseg {
            let root = find(&mut parent, s as u32);
            segmap[s] = root;
            if root == s as u32 {
                roots.push(root);
            }
        }
        // roots are minimal segment ids, already ascending
        let mut idx = vec![u32::MAX; nseg];
        for (k, r) in roots.iter().enumerate() {
            idx[*r as usize] = k as u32;
        }
        for s in segmap.iter_mut() {
            *s = idx[*s as usize];
        }
        CircleDecomposition { circle_count: roots.len(), segmap }
    }

    /// The 1 or 2 distinct circles meeting crossing `c` in the given state.
    pub fn incident_circles(&self, c: usize, dec: &CircleDecomposition) -> Vec<u32> {
        let r = self.crossing_rows()[c];
        let i = match self.tiles[r] {
            Tile::Crossing { index, .. } => index,
            _ => unreachable!(),
        };
        let mut ids = vec![
            dec.segmap[self.seg(r, i)],
            dec.segmap[self.seg(r, i + 1)],
            dec.segmap[self.seg(r + 1, i)],
            dec.segmap[self.seg(r + 1, i + 1)],
        ];
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    /// Link components of the underlying diagram with a traversal direction
    /// per segment (+1 = downward for the traversal's start choice).
    pub fn components(&self) -> Components {
        let b = self.strands;
        let rows = self.rows();
        let nseg = self.n_segments();
        let mut comp: Vec<i32> = vec![-1; nseg];
        let mut dir: Vec<i8> = vec![0; nseg];
        let mut count = 0usize;
        for s0 in 0..nseg {
            if comp[s0] != -1 {
                continue;
            }
            let cid = count as i32;
            count += 1;
            let (mut r, mut p) = (s0 / b, s0 % b);
            let mut heading_down = true;
            loop {
                let s = self.seg(r, p);
                if comp[s] != -1 {
                    break;
                }
                comp[s] = cid;
                dir[s] = if heading_down { 1 } else { -1 };
                if heading_down {
                    // exit the bottom end: tile r-1 top ports, or closure
                    if r == 0 {
                        r = rows;
                        continue;
                    }
                    match self.tiles[r - 1] {
                        Tile::Crossing { index: i, .. } if p == i || p == i + 1 => {
                            p = if p == i { i + 1 } else { i };
                            r -= 1;
                        }
                        Tile::CapCup { index: i } if p == i || p == i + 1 => {
                            // cup joins the top ports of tile r-1
                            p = if p == i { i + 1 } else { i };
                            heading_down = false;
                        }
                        _ => r -= 1,
                    }
                } else {
                    // exit the top end: tile r bottom ports, or closure
                    if r == rows {
                        r = 0;
                        continue;
                    }
                    match self.tiles[r] {
                        Tile::Crossing { index: i, .. } if p == i || p == i + 1 => {
                            p = if p == i { i + 1 } else { i };
                            r += 1;
                        }
                        Tile::CapCup { index: i } if p == i || p == i + 1 => {
                            // cap joins the bottom ports of tile r
                            p = if p == i { i + 1 } else { i };
                            heading_down = true;
                        }
                        _ => r += 1,
                    }
                }
            }
        }
        Components { count, comp: comp.into_iter().map(|c| c as u32).collect(), dir }
    }

    /// Fix component orientations; recomputes crossing signs.
    pub fn assign_orientations(&mut self, flags: Vec<i8>) -> Result<(), TangleError> {
        let comps = self.components();
        if flags.len() != comps.count {
            return Err(TangleError::NoOrientation);
        }
        let mut signs = Vec::with_capacity(self.crossings());
        for r in 0..self.rows() {
            if let Tile::Crossing { index: i, hand } = self.tiles[r] {
                let s1 = self.seg(r, i);
                let s2 = self.seg(r, i + 1);
                let d1 = comps.dir[s1] as i32 * flags[comps.comp[s1] as usize] as i32;
                let d2 = comps.dir[s2] as i32 * flags[comps.comp[s2] as usize] as i32;
                signs.push(if d1 == d2 { hand } else { -hand });
            }
        }
        self.signs = Some(signs);
        self.component_orientations = Some(flags);
        Ok(())
    }

    pub fn crossing_signs(&self) -> Result<&[i8], TangleError> {
        self.signs.as_deref().ok_or(TangleError::NoOrientation)
    }

    pub fn n_pos(&self) -> usize {
        self.signs.as_ref().map(|s| s.iter().filter(|&&x| x > 0).count()).unwrap_or(0)
    }

    pub fn n_neg(&self) -> usize {
        self.signs.as_ref().map(|s| s.iter().filter(|&&x| x < 0).count()).unwrap_or(0)
    }

    /// Bit 0 at positive crossings, 1 at negative crossings.
    pub fn oriented_resolution_state(&self) -> Result<KauffmanState, TangleError> {
        let signs = self.crossing_signs()?;
        let mut s: KauffmanState = 0;
        for (c, &sg) in signs.iter().enumerate() {
            if sg < 0 {
                s |= 1 << c;
            }
        }
        Ok(s)
    }

    /// Replace crossing `c` by its 0- or 1-resolution: identity tile (dropped)
    /// or CapCup, per the crossing's handedness. Orientations are cleared; the
    /// caller re-assigns them on the resolved diagram.
    pub fn khovanov_resolution(&self, c: usize, choice: u8) -> Result<TangleDiagram, TangleError> {
        let rows = self.crossing_rows();
        let r = *rows.get(c).ok_or(TangleError::BadCrossing(c))?;
        let (i, hand) = match self.tiles[r] {
            Tile::Crossing { index, hand } => (index, hand),
            _ => unreachable!(),
        };
        let identity = if hand > 0 { choice == 0 } else { choice == 1 };
        let mut tiles = self.tiles.clone();
        if identity {
            tiles.remove(r);
        } else {
            tiles[r] = Tile::CapCup { index: i };
        }
        TangleDiagram::new(self.strands, tiles)
    }

    /// Remove kinks: a crossing directly adjacent (through identity rows) to a
    /// cap-cup on the same position pair untwists. Homology of the closure is
    /// unchanged; gradings are absolute.
    pub fn simplify_kinks(&self) -> TangleDiagram {
        let mut tiles = self.tiles.clone();
        loop {
            let mut removed = false;
            'scan: for r in 0..tiles.len() {
                let Tile::CapCup { index: i } = tiles[r] else { continue };
                // look below and above for the nearest tile touching {i, i+1}
                for dirn in [-1i64, 1] {
                    let mut rr = r as i64 + dirn;
                    while rr >= 0 && (rr as usize) < tiles.len() {
                        let t = tiles[rr as usize];
                        let j = match t {
                            Tile::Crossing { index, .. } => index,
                            Tile::CapCup { index } => index,
                        };
                        let overlaps = j + 1 >= i && j <= i + 1;
                        if overlaps {
                            if let (Tile::Crossing { index, .. }, true) = (t, j == i) {
                                let _ = index;
                                tiles.remove(rr as usize);
                                removed = true;
                                break 'scan;
                            }
                            break;
                        }
                        rr += dirn;
                    }
                }
            }
            if !removed {
                break;
            }
        }
        TangleDiagram { strands: self.strands, tiles, component_orientations: None, signs: None }
    }

    /// Serialization key for caching.
    pub fn cache_key(&self) -> String {
        serde_json::to_string(&(self.strands, &self.tiles, &self.component_orientations)).unwrap()
    }
}

pub struct Components {
    pub count: usize,
    pub comp: Vec<u32>,
    pub dir: Vec<i8>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::{parse_braid, BraidWord};

    #[test]
    fn from_braid_basics() {
        let w = BraidWord::new(2, vec![1, 1]).unwrap();
        let d = TangleDiagram::from_braid(&w);
        assert_eq!(d.crossings(), 2);
        assert_eq!(d.n_pos(), 2);
        assert_eq!(d.components().count, 2);
        let e = TangleDiagram::from_braid(&BraidWord::empty(3));
        assert_eq!(e.crossings(), 0);
        assert_eq!(e.components().count, 3);
        let bk = parse_braid("FT (-3)^5", 4).unwrap();
        let dk = TangleDiagram::from_braid(&bk);
        assert_eq!((dk.n_pos(), dk.n_neg()), (12, 5));
    }

    #[test]
    fn resolve_circle_counts() {
        let e = TangleDiagram::from_braid(&BraidWord::empty(3));
        assert_eq!(e.resolve(0).circle_count, 3);
        let s1 = TangleDiagram::from_braid(&BraidWord::new(2, vec![1]).unwrap());
        assert_eq!(s1.resolve(0).circle_count, 2);
        assert_eq!(s1.resolve(1).circle_count, 1);
        // oriented resolution of any braid closure has b circles
        let w = parse_braid("-1 (-2)^5 -1 (-2)^5", 3).unwrap();
        let d = TangleDiagram::from_braid(&w);
        let ostate = d.oriented_resolution_state().unwrap();
        assert_eq!(d.resolve(ostate).circle_count, 3);
    }

    #[test]
    fn oriented_resolution_states() {
        let pos = parse_braid("1 2 1", 3).unwrap();
        let d = TangleDiagram::from_braid(&pos);
        assert_eq!(d.oriented_resolution_state().unwrap(), 0);
        let w = parse_braid("FT (-2)^5", 3).unwrap();
        let d2 = TangleDiagram::from_braid(&w);
        assert_eq!(d2.oriented_resolution_state().unwrap(), 0b11111000000);
    }

    #[test]
    fn merge_split_dichotomy() {
        let w = parse_braid("1 2 -1 2 2", 3).unwrap();
        let d = TangleDiagram::from_braid(&w);
        for s in 0u64..(1 << 5) {
            let dec = d.resolve(s);
            for c in 0..5 {
                if s >> c & 1 == 1 {
                    continue;
                }
                let dec2 = d.resolve(s | (1 << c));
                let inc = d.incident_circles(c, &dec);
                let diff = dec2.circle_count as i64 - dec.circle_count as i64;
                if inc.len() == 2 {
                    assert_eq!(diff, -1); // merge
                } else {
                    assert_eq!(diff, 1); // split
                }
            }
        }
    }

    #[test]
    fn component_count_matches_permutation_cycles() {
        for (text, b, want) in [("1 1", 2usize, 2usize), ("1", 2, 1), ("1 2", 3, 1), ("2 2", 3, 3)] {
            let w = parse_braid(text, b).unwrap();
            let d = TangleDiagram::from_braid(&w);
            assert_eq!(d.components().count, want);
            assert_eq!(w.closure_components(), want);
        }
    }

    #[test]
    fn khovanov_resolution_shapes() {
        // 0-resolution of the only crossing of sigma_1 in B2: 2-component closure
        let w = BraidWord::new(2, vec![1]).unwrap();
        let d = TangleDiagram::from_braid(&w);
        let d0 = d.khovanov_resolution(0, 0).unwrap();
        assert_eq!(d0.crossings(), 0);
        assert_eq!(d0.components().count, 2);
        let d1 = d.khovanov_resolution(0, 1).unwrap();
        assert_eq!(d1.components().count, 1);
        // negative crossing: 0-resolution is the cap-cup
        let wn = BraidWord::new(2, vec![-1]).unwrap();
        let dn = TangleDiagram::from_braid(&wn);
        let dn0 = dn.khovanov_resolution(0, 0).unwrap();
        assert!(matches!(dn0.tiles[0], Tile::CapCup { .. }));
    }

    #[test]
    fn d0k_has_six_negative_crossings() {
        // 0-resolution at the last crossing of closure(FT (-3)^k) in B4.
        for k in [2usize, 3, 5] {
            let w = parse_braid(&format!("FT (-3)^{k}"), 4).unwrap();
            let d = TangleDiagram::from_braid(&w);
            let mut d0 = d.khovanov_resolution(11 + k, 0).unwrap();
            let ncomp = d0.components().count;
            let found = (0..1u32 << ncomp).any(|mask| {
                let flags: Vec<i8> =
                    (0..ncomp).map(|c| if mask >> c & 1 == 1 { -1 } else { 1 }).collect();
                d0.assign_orientations(flags).unwrap();
                d0.n_neg() == 6
            });
            assert!(found, "no orientation of D0^{k} with 6 negative crossings");
        }
    }

    #[test]
    fn simplify_kinks_untwists() {
        let w = parse_braid("FT (-3)^5", 4).unwrap();
        let d = TangleDiagram::from_braid(&w);
        let d0 = d.khovanov_resolution(16, 0).unwrap();
        let s = d0.simplify_kinks();
        // the four remaining negative twist crossings untwist against the
        // cap-cup, and so does the final positive sigma_3 of the full twist
        assert_eq!(s.crossings(), 11);
        assert_eq!(s.components().count, d0.components().count);
    }
}
