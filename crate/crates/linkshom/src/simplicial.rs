//! Pointed simplicial models of spheres and their wedges.
//!
//! The sphere `S^n` is modelled as the quotient of the standard `n`-simplex
//! by its boundary: a non-base `p`-simplex is a monotone surjection
//! `[p] -> [n]`, recorded by its jump set, a strictly increasing `n`-subset
//! of `{1..p}`. The wedge of `m` spheres tags each simplex with a strand in
//! `1..m` and shares the single basepoint. Level `p` therefore has
//! `m * C(p,n) + 1` elements, which is `mp + 1` for circles.
//!
//! Faces and degeneracies are exposed as tables of a [`PointedMap`] so the
//! algebra layer can consume them directly.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::gamma::PointedMap;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SimplicialError {
    #[error("sphere dimension must be at least 1, got {0}")]
    BadSphereDimension(u32),
    #[error("level {p} outside computed range 0..={p_max}")]
    LevelOutOfRange { p: u32, p_max: u32 },
    #[error("operator index {i} outside 0..={max}")]
    OperatorOutOfRange { i: u32, max: u32 },
}

/// A non-base simplex: strand tag plus the jump set of the underlying
/// monotone surjection.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Simplex {
    pub strand: u32,
    pub jumps: Vec<u32>,
}

#[derive(Debug, Clone)]
struct Level {
    elements: Vec<Simplex>,
    index: HashMap<Simplex, u32>,
}

impl Level {
    fn build(elements: Vec<Simplex>) -> Self {
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i as u32 + 1))
            .collect();
        Self { elements, index }
    }

    fn id_of(&self, s: &Simplex) -> Option<u32> {
        self.index.get(s).copied()
    }
}

/// Levelwise finite pointed sets with face and degeneracy tables; element id
/// 0 is the basepoint throughout.
#[derive(Debug, Clone)]
pub struct PointedSimplicialSet {
    m: u32,
    n: u32,
    p_max: u32,
    levels: Vec<Level>,
}

pub fn binomial(p: u32, n: u32) -> u64 {
    if n > p {
        return 0;
    }
    let n = n.min(p - n);
    let mut acc: u64 = 1;
    for i in 0..n as u64 {
        acc = acc * (p as u64 - i) / (i + 1);
    }
    acc
}

/// The wedge of `m` copies of `S^n`, with levels `0..=p_max` populated.
pub fn wedge_model(m: u32, n: u32, p_max: u32) -> Result<PointedSimplicialSet, SimplicialError> {
    if n == 0 {
        return Err(SimplicialError::BadSphereDimension(n));
    }
    let mut levels = Vec::with_capacity(p_max as usize + 1);
    for p in 0..=p_max {
        let mut elements = Vec::new();
        for strand in 1..=m {
            let mut subset = Vec::new();
            enumerate_subsets(p, n, 1, &mut subset, &mut |jumps| {
                elements.push(Simplex { strand, jumps: jumps.to_vec() });
            });
        }
        levels.push(Level::build(elements));
    }
    Ok(PointedSimplicialSet { m, n, p_max, levels })
}

fn enumerate_subsets(p: u32, n: u32, from: u32, acc: &mut Vec<u32>, emit: &mut impl FnMut(&[u32])) {
    if acc.len() == n as usize {
        emit(acc);
        return;
    }
    let needed = n as usize - acc.len();
    for v in from..=p {
        if (p - v) as usize + 1 < needed {
            break;
        }
        acc.push(v);
        enumerate_subsets(p, n, v + 1, acc, emit);
        acc.pop();
    }
}

impl PointedSimplicialSet {
    pub fn strands(&self) -> u32 {
        self.m
    }

    pub fn sphere_dim(&self) -> u32 {
        self.n
    }

    pub fn p_max(&self) -> u32 {
        self.p_max
    }

    /// Cardinality of level `p` including the basepoint.
    pub fn level_cardinality(&self, p: u32) -> Result<u64, SimplicialError> {
        Ok(self.non_base_count(p)? as u64 + 1)
    }

    /// Number of non-base simplices of level `p`, i.e. `m * C(p,n)`.
    pub fn non_base_count(&self, p: u32) -> Result<u32, SimplicialError> {
        self.level(p).map(|l| l.elements.len() as u32)
    }

    pub fn simplices(&self, p: u32) -> Result<&[Simplex], SimplicialError> {
        self.level(p).map(|l| l.elements.as_slice())
    }

    /// The simplex with 1-based id `id` at level `p`.
    pub fn simplex(&self, p: u32, id: u32) -> Result<&Simplex, SimplicialError> {
        let level = self.level(p)?;
        level
            .elements
            .get(id as usize - 1)
            .ok_or(SimplicialError::OperatorOutOfRange { i: id, max: level.elements.len() as u32 })
    }

    fn level(&self, p: u32) -> Result<&Level, SimplicialError> {
        self.levels
            .get(p as usize)
            .ok_or(SimplicialError::LevelOutOfRange { p, p_max: self.p_max })
    }

    /// Face `d_i : level p -> level p-1`. Deleting coordinate `i` keeps the
    /// jumps at most `i` and shifts larger ones down; the simplex dies to the
    /// basepoint when two jumps collide or a jump leaves `{1..p-1}`.
    pub fn face(&self, p: u32, i: u32) -> Result<PointedMap, SimplicialError> {
        if p == 0 || p > self.p_max {
            return Err(SimplicialError::LevelOutOfRange { p, p_max: self.p_max });
        }
        if i > p {
            return Err(SimplicialError::OperatorOutOfRange { i, max: p });
        }
        let src = self.level(p)?;
        let dst = self.level(p - 1)?;
        let table = src
            .elements
            .iter()
            .map(|s| {
                let mut jumps = Vec::with_capacity(s.jumps.len());
                for &j in &s.jumps {
                    let j2 = if j <= i { j } else { j - 1 };
                    if j2 == 0 || j2 > p - 1 || jumps.last() == Some(&j2) {
                        return 0;
                    }
                    jumps.push(j2);
                }
                dst.id_of(&Simplex { strand: s.strand, jumps }).unwrap_or(0)
            })
            .collect();
        Ok(PointedMap::new(src.elements.len() as u32, dst.elements.len() as u32, table)
            .expect("face table is well formed"))
    }

    /// Degeneracy `s_j : level p -> level p+1`, duplicating coordinate `j`:
    /// jumps strictly above `j` shift up by one.
    pub fn degeneracy(&self, p: u32, j: u32) -> Result<PointedMap, SimplicialError> {
        if p >= self.p_max {
            return Err(SimplicialError::LevelOutOfRange { p: p + 1, p_max: self.p_max });
        }
        if j > p {
            return Err(SimplicialError::OperatorOutOfRange { i: j, max: p });
        }
        let src = self.level(p)?;
        let dst = self.level(p + 1)?;
        let table = src
            .elements
            .iter()
            .map(|s| {
                let jumps: Vec<u32> =
                    s.jumps.iter().map(|&v| if v > j { v + 1 } else { v }).collect();
                dst.id_of(&Simplex { strand: s.strand, jumps })
                    .expect("degeneracies never hit the basepoint")
            })
            .collect();
        Ok(PointedMap::new(src.elements.len() as u32, dst.elements.len() as u32, table)
            .expect("degeneracy table is well formed"))
    }

    /// JSON dump of levels and structure tables, for fixture generation.
    pub fn to_json(&self) -> serde_json::Value {
        let levels: Vec<serde_json::Value> = (0..=self.p_max)
            .map(|p| {
                let elems: Vec<serde_json::Value> = self.levels[p as usize]
                    .elements
                    .iter()
                    .enumerate()
                    .map(|(i, s)| {
                        serde_json::json!({
                            "id": i as u32 + 1,
                            "strand": s.strand,
                            "jumps": s.jumps,
                        })
                    })
                    .collect();
                serde_json::json!({
                    "p": p,
                    "cardinality": self.level_cardinality(p).unwrap(),
                    "elements": elems,
                })
            })
            .collect();
        let faces: Vec<serde_json::Value> = (1..=self.p_max)
            .flat_map(|p| (0..=p).map(move |i| (p, i)).collect::<Vec<_>>())
            .map(|(p, i)| {
                let f = self.face(p, i).unwrap();
                serde_json::json!({ "p": p, "i": i, "table": f.table() })
            })
            .collect();
        let degeneracies: Vec<serde_json::Value> = (0..self.p_max)
            .flat_map(|p| (0..=p).map(move |j| (p, j)).collect::<Vec<_>>())
            .map(|(p, j)| {
                let s = self.degeneracy(p, j).unwrap();
                serde_json::json!({ "p": p, "j": j, "table": s.table() })
            })
            .collect();
        serde_json::json!({
            "m": self.m,
            "n": self.n,
            "p_max": self.p_max,
            "levels": levels,
            "faces": faces,
            "degeneracies": degeneracies,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent word model of `S^n = Delta^n / boundary`: a non-base
    /// `p`-simplex is a nondecreasing word of length `p+1` on `{0..n}`
    /// attaining every letter. Faces delete a position, degeneracies repeat
    /// one.
    mod words {
        pub fn level(n: u32, p: u32) -> Vec<Vec<u32>> {
            let mut out = Vec::new();
            let mut word = Vec::new();
            gen(n, p, 0, &mut word, &mut out);
            out
        }

        fn gen(n: u32, p: u32, min: u32, word: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if word.len() == p as usize + 1 {
                let surjective = (0..=n).all(|v| word.contains(&v));
                if surjective {
                    out.push(word.clone());
                }
                return;
            }
            for v in min..=n {
                word.push(v);
                gen(n, p, v, word, out);
                word.pop();
            }
        }

        pub fn face(word: &[u32], i: usize) -> Vec<u32> {
            let mut w = word.to_vec();
            w.remove(i);
            w
        }

        pub fn degeneracy(word: &[u32], j: usize) -> Vec<u32> {
            let mut w = word.to_vec();
            w.insert(j, word[j]);
            w
        }

        pub fn to_jumps(word: &[u32]) -> Vec<u32> {
            (1..word.len())
                .filter(|&i| word[i] != word[i - 1])
                .map(|i| i as u32)
                .collect()
        }

        pub fn is_surjective(word: &[u32], n: u32) -> bool {
            (0..=n).all(|v| word.contains(&v))
        }
    }

    #[test]
    fn cardinalities() {
        for m in 0..=3u32 {
            for p in 0..=8u32 {
                let x = wedge_model(m, 1, 8).unwrap();
                assert_eq!(x.level_cardinality(p).unwrap(), (m * p) as u64 + 1, "m={m} p={p}");
                let x2 = wedge_model(m, 2, 8).unwrap();
                assert_eq!(
                    x2.level_cardinality(p).unwrap(),
                    m as u64 * binomial(p, 2) + 1,
                    "m={m} p={p} n=2"
                );
            }
        }
        let x = wedge_model(1, 2, 4).unwrap();
        assert_eq!(x.level_cardinality(4).unwrap(), 7); // C(4,2)+1
        let empty = wedge_model(0, 1, 5).unwrap();
        for p in 0..=5 {
            assert_eq!(empty.level_cardinality(p).unwrap(), 1);
        }
    }

    #[test]
    fn circle_faces_match_quotient_of_interval() {
        let x = wedge_model(1, 1, 3).unwrap();
        // p=1, j=1 ("01"): both faces die
        let d0 = x.face(1, 0).unwrap();
        let d1 = x.face(1, 1).unwrap();
        assert_eq!(d0.table(), &[0]);
        assert_eq!(d1.table(), &[0]);
        // p=2: element ids 1 <-> jumps {1} ("011"), 2 <-> jumps {2} ("001")
        assert_eq!(x.simplex(2, 1).unwrap().jumps, vec![1]);
        assert_eq!(x.simplex(2, 2).unwrap().jumps, vec![2]);
        let d0 = x.face(2, 0).unwrap();
        let d1 = x.face(2, 1).unwrap();
        let d2 = x.face(2, 2).unwrap();
        // "001": d0 -> "01"(j=1), d1 -> "01", d2 -> "00" = basepoint
        assert_eq!(d0.apply(2), 1);
        assert_eq!(d1.apply(2), 1);
        assert_eq!(d2.apply(2), 0);
        // "011": d0 -> basepoint, d1 -> j=1, d2 -> j=1
        assert_eq!(d0.apply(1), 0);
        assert_eq!(d1.apply(1), 1);
        assert_eq!(d2.apply(1), 1);
    }

    #[test]
    fn circle_degeneracies_duplicate_letters() {
        let x = wedge_model(1, 1, 2).unwrap();
        let s0 = x.degeneracy(1, 0).unwrap();
        let s1 = x.degeneracy(1, 1).unwrap();
        // "01": s0 -> "001" (jumps {2}), s1 -> "011" (jumps {1})
        assert_eq!(x.simplex(2, s0.apply(1)).unwrap().jumps, vec![2]);
        assert_eq!(x.simplex(2, s1.apply(1)).unwrap().jumps, vec![1]);
        // basepoint is preserved implicitly: apply(0) = 0
        assert_eq!(s0.apply(0), 0);
    }

    #[test]
    fn simplicial_identities_hold_exhaustively() {
        for m in 0..=3u32 {
            for n in 1..=2u32 {
                let p_max = 8;
                let x = wedge_model(m, n, p_max).unwrap();
                for p in 0..=p_max {
                    // d_i d_j = d_{j-1} d_i for i < j
                    if p >= 2 {
                        for j in 0..=p {
                            for i in 0..j {
                                let lhs = x.face(p, j).unwrap().then(&x.face(p - 1, i).unwrap());
                                let rhs = x.face(p, i).unwrap().then(&x.face(p - 1, j - 1).unwrap());
                                assert_eq!(lhs, rhs, "dd m={m} n={n} p={p} i={i} j={j}");
                            }
                        }
                    }
                    // s_i s_j = s_{j+1} s_i for i <= j
                    if p + 2 <= p_max {
                        for j in 0..=p {
                            for i in 0..=j {
                                let lhs =
                                    x.degeneracy(p, j).unwrap().then(&x.degeneracy(p + 1, i).unwrap());
                                let rhs =
                                    x.degeneracy(p, i).unwrap().then(&x.degeneracy(p + 1, j + 1).unwrap());
                                assert_eq!(lhs, rhs, "ss m={m} n={n} p={p} i={i} j={j}");
                            }
                        }
                    }
                    // mixed identities
                    if p >= 1 && p <= p_max - 1 {
                        for j in 0..=p - 1 {
                            for i in 0..=p {
                                let lhs =
                                    x.degeneracy(p - 1, j).unwrap().then(&x.face(p, i).unwrap());
                                let rhs = if i < j {
                                    x.face(p - 1, i).unwrap().then(&x.degeneracy(p - 2, j - 1).unwrap())
                                } else if i == j || i == j + 1 {
                                    PointedMap::identity(x.non_base_count(p - 1).unwrap())
                                } else {
                                    x.face(p - 1, i - 1).unwrap().then(&x.degeneracy(p - 2, j).unwrap())
                                };
                                assert_eq!(lhs, rhs, "ds m={m} n={n} p={p} i={i} j={j}");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn matches_word_model_for_circles_and_spheres() {
        for n in 1..=2u32 {
            let x = wedge_model(1, n, 6).unwrap();
            for p in n..=6u32 {
                let words = words::level(n, p);
                assert_eq!(words.len(), x.non_base_count(p).unwrap() as usize);
                for w in &words {
                    let jumps = words::to_jumps(w);
                    let id = x
                        .simplices(p)
                        .unwrap()
                        .iter()
                        .position(|s| s.jumps == jumps)
                        .map(|i| i as u32 + 1)
                        .expect("word corresponds to a simplex");
                    for i in 0..=p {
                        let fw = words::face(w, i as usize);
                        let expected = if words::is_surjective(&fw, n) {
                            let ej = words::to_jumps(&fw);
                            x.simplices(p - 1)
                                .unwrap()
                                .iter()
                                .position(|s| s.jumps == ej)
                                .map(|k| k as u32 + 1)
                                .unwrap()
                        } else {
                            0
                        };
                        assert_eq!(x.face(p, i).unwrap().apply(id), expected, "n={n} p={p} i={i}");
                    }
                    if p < 6 {
                        for j in 0..=p {
                            let sw = words::degeneracy(w, j as usize);
                            let ej = words::to_jumps(&sw);
                            let expected = x
                                .simplices(p + 1)
                                .unwrap()
                                .iter()
                                .position(|s| s.jumps == ej)
                                .map(|k| k as u32 + 1)
                                .unwrap();
                            assert_eq!(
                                x.degeneracy(p, j).unwrap().apply(id),
                                expected,
                                "n={n} p={p} j={j}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn circle_nondegenerate_elements_live_at_level_one_only() {
        // For n=1 every non-base element above level 1 is degenerate: the
        // union of degeneracy images covers each level p >= 2 entirely.
        let x = wedge_model(2, 1, 6).unwrap();
        for p in 2..=6u32 {
            let count = x.non_base_count(p).unwrap();
            let mut covered = vec![false; count as usize];
            for j in 0..p {
                let s = x.degeneracy(p - 1, j).unwrap();
                for id in 1..=x.non_base_count(p - 1).unwrap() {
                    let img = s.apply(id);
                    assert_ne!(img, 0);
                    covered[img as usize - 1] = true;
                }
            }
            assert!(covered.iter().all(|&c| c), "p={p}");
        }
        // and at level 1 nothing is degenerate (level 0 has no non-base elements)
        assert_eq!(x.non_base_count(1).unwrap(), 2);
    }

    #[test]
    fn degeneracies_are_strictly_increasing_injections() {
        // The algebra layer relies on degeneracy tables being strictly
        // increasing on non-base ids.
        for (m, n) in [(2u32, 1u32), (1, 2), (3, 1)] {
            let x = wedge_model(m, n, 6).unwrap();
            for p in 0..6u32 {
                for j in 0..=p {
                    let s = x.degeneracy(p, j).unwrap();
                    let table = s.table();
                    for w in table.windows(2) {
                        assert!(w[0] < w[1], "m={m} n={n} p={p} j={j}");
                    }
                    assert!(table.iter().all(|&v| v != 0));
                }
            }
        }
    }

    #[test]
    fn out_of_range_requests_error() {
        let x = wedge_model(1, 1, 3).unwrap();
        assert!(x.face(4, 0).is_err());
        assert!(x.face(2, 3).is_err());
        assert!(x.degeneracy(3, 0).is_err());
        assert!(wedge_model(1, 0, 3).is_err());
    }
}
