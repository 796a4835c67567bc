//! Assembly of the finite chain complexes computing the homology of the
//! link tower, and the Betti tables derived from them.
//!
//! For fixed word length `t` the levels `p` of the simplicial wedge model
//! carry the degree-`t` part of the configuration-space cohomology on
//! `m * C(p,n)` points. Degeneracy maps send basis monomials to basis
//! monomials injectively, so the degenerate span is spanned by a subset of
//! the admissible basis; the normalized quotient therefore has a
//! combinatorial basis, the monomials whose endpoint jump sets cover every
//! value in `{1..p}`. For circles this forces `dim N_{p,t} = 0` above
//! `p = 2t`, which is probed at runtime rather than assumed.
//!
//! The boundary is the alternating sum of the face-induced algebra maps,
//! descended to the quotient by discarding non-covering monomials. The
//! homology dimension in level `p`, placed in total degree
//! `u = t(d-1) - p`, is the reported Betti number.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arnold::{self, GenParity};
use crate::cache::{CacheKey, RankCache};
use crate::gamma::{self, GammaError, PointedMap};
use crate::linalg::{self, LinalgError, RankMethod, RankPolicy, SparseRationalMatrix};
use crate::series::{self, SeriesError};
use crate::simplicial::{wedge_model, PointedSimplicialSet, SimplicialError};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("boundary square is nonzero at (m={m}, n={n}, d={d}, t={t}, p={p}): internal sign or bookkeeping bug")]
    BoundarySquare { m: u32, n: u32, d: u32, t: u32, p: u32 },
    #[error("normalized space unexpectedly nonzero at (m={m}, n={n}, d={d}, t={t}, p={p})")]
    NormalizedVanishing { m: u32, n: u32, d: u32, t: u32, p: u32 },
    #[error("negative homology dimension at (m={m}, n={n}, d={d}, t={t}, p={p}): rank inconsistency")]
    NegativeHomology { m: u32, n: u32, d: u32, t: u32, p: u32 },
    #[error("boundary does not preserve the degenerate span at (m={m}, n={n}, d={d}, t={t}, p={p})")]
    DegenerateEscape { m: u32, n: u32, d: u32, t: u32, p: u32 },
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
    #[error(transparent)]
    Gamma(#[from] GammaError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SliceParams {
    pub m: u32,
    pub n: u32,
    pub d: u32,
    pub t: u32,
}

impl SliceParams {
    pub fn parity(&self) -> GenParity {
        GenParity::from_ambient_dim(self.d)
    }
}

/// Engine-wide configuration: rank policy, deterministic seed, shared cache.
pub struct EngineConfig {
    pub rank_policy: RankPolicy,
    pub seed: u64,
    pub cache: RankCache,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self { rank_policy: RankPolicy::default(), seed: 0, cache: RankCache::in_memory() }
    }
}

impl EngineConfig {
    pub fn rank_method(&self) -> RankMethod {
        match self.rank_policy {
            RankPolicy::Multimodular { .. } => RankMethod::Multimodular,
            RankPolicy::Exact => RankMethod::Exact,
        }
    }
}

/// Flat storage of the covering-monomial basis of one normalized level.
/// Each monomial occupies `2t` entries laid out `[b1, a1, b2, a2, ...]`,
/// factors ordered by second index; lexicographic order on chunks equals
/// the deterministic basis order.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelBasis {
    t: usize,
    data: Vec<u16>,
}

impl LevelBasis {
    fn chunk_len(&self) -> usize {
        (2 * self.t).max(1)
    }

    pub fn len(&self) -> usize {
        if self.t == 0 {
            self.data.len()
        } else {
            self.data.len() / (2 * self.t)
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, i: usize) -> &[u16] {
        if self.t == 0 {
            &self.data[i..i] // the unit monomial has no factors
        } else {
            let w = 2 * self.t;
            &self.data[i * w..(i + 1) * w]
        }
    }

    pub fn position(&self, chunk: &[u16]) -> Option<u32> {
        if self.t == 0 {
            return if self.len() > 0 { Some(0) } else { None };
        }
        let w = self.chunk_len();
        let mut lo = 0usize;
        let mut hi = self.len();
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.data[mid * w..(mid + 1) * w].cmp(chunk) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid as u32),
            }
        }
        None
    }

    /// Factor pairs `(a, b)` of monomial `i`.
    pub fn pairs(&self, i: usize) -> Vec<(u32, u32)> {
        self.get(i).chunks(2).map(|c| (c[1] as u32, c[0] as u32)).collect()
    }
}

/// Compact integer matrix, column major; boundary entries are small integers.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseIntMatrix {
    pub rows: usize,
    pub columns: Vec<Vec<(u32, i64)>>,
}

impl SparseIntMatrix {
    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn to_rational(&self) -> SparseRationalMatrix {
        SparseRationalMatrix::from_triplets(
            self.rows,
            self.cols(),
            self.columns.iter().enumerate().flat_map(|(j, col)| {
                col.iter().map(move |(r, v)| (*r, j as u32, BigInt::from(*v).into()))
            }),
        )
        .expect("indices in range")
    }
}

/// One normalized level of a slice.
#[derive(Debug)]
pub struct SliceLevel {
    pub p: u32,
    pub points: u32,
    /// Dimension of the full level space, from the closed form.
    pub full_dim: u128,
    pub basis: LevelBasis,
    /// Boundary into level `p-1`; `None` at `p = 0` or when assembled
    /// dimensions-only.
    pub boundary: Option<SparseIntMatrix>,
}

/// The finite chain complex of normalized levels for one word length.
#[derive(Debug)]
pub struct ComplexSlice {
    pub params: SliceParams,
    pub p_bound: u32,
    pub levels: Vec<SliceLevel>,
    /// Covering count at `p_bound + 1` (settles whether homology at the top
    /// level is final).
    pub next_level_dim: u64,
    /// Probed covering counts above the vanishing bound (circles only).
    pub probes: Vec<(u32, u64)>,
}

impl ComplexSlice {
    pub fn dims(&self) -> Vec<u64> {
        self.levels.iter().map(|l| l.basis.len() as u64).collect()
    }

    pub fn euler_sum(&self) -> i64 {
        self.levels
            .iter()
            .map(|l| {
                let d = l.basis.len() as i64;
                if l.p % 2 == 0 {
                    d
                } else {
                    -d
                }
            })
            .sum()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct AssembleOptions {
    pub with_boundaries: bool,
    pub check_boundary_square: bool,
    pub check_degenerate_stability: bool,
}

impl Default for AssembleOptions {
    fn default() -> Self {
        Self {
            with_boundaries: true,
            check_boundary_square: true,
            check_degenerate_stability: true,
        }
    }
}

fn level_masks(model: &PointedSimplicialSet, p: u32) -> Result<Vec<u64>, EngineError> {
    if p > 60 {
        return Err(EngineError::InvalidParams(format!("level {p} exceeds the supported range")));
    }
    let simplices = model.simplices(p)?;
    if simplices.len() > u16::MAX as usize {
        // monomials store element ids as u16
        return Err(EngineError::InvalidParams(format!(
            "level {p} has {} elements, beyond the supported range",
            simplices.len()
        )));
    }
    Ok(simplices
        .iter()
        .map(|s| s.jumps.iter().fold(0u64, |acc, &v| acc | (1u64 << (v - 1))))
        .collect())
}

fn full_mask(p: u32) -> u64 {
    if p == 0 {
        0
    } else {
        (1u64 << p) - 1
    }
}

/// Enumerates the covering monomials of a level: admissible monomials whose
/// support masks union to the full jump range.
fn enumerate_covering(masks: &[u64], t: u32, p: u32, max_new_bits: u32) -> LevelBasis {
    let full = full_mask(p);
    if t == 0 {
        // only the unit monomial, covering exactly when p = 0
        return LevelBasis { t: 0, data: if full == 0 { vec![0] } else { vec![] } };
    }
    let points = masks.len();
    let t = t as usize;
    // parallelize over the first factor
    let mut first: Vec<(u16, u16)> = Vec::new();
    for b in 2..=points {
        for a in 1..b {
            first.push((b as u16, a as u16));
        }
    }
    let chunks: Vec<Vec<u16>> = first
        .par_iter()
        .map(|&(b, a)| {
            let mut out = Vec::new();
            let mut chunk = vec![0u16; 2 * t];
            chunk[0] = b;
            chunk[1] = a;
            let covered = masks[b as usize - 1] | masks[a as usize - 1];
            recurse_covering(masks, t, full, max_new_bits, 1, b as usize, covered, &mut chunk, &mut out);
            out
        })
        .collect();
    let mut data = Vec::new();
    for c in chunks {
        data.extend(c);
    }
    LevelBasis { t, data }
}

#[allow(clippy::too_many_arguments)]
fn recurse_covering(
    masks: &[u64],
    t: usize,
    full: u64,
    max_new_bits: u32,
    depth: usize,
    last_b: usize,
    covered: u64,
    chunk: &mut Vec<u16>,
    out: &mut Vec<u16>,
) {
    let missing = (full & !covered).count_ones();
    let remaining = (t - depth) as u32;
    if missing > remaining * max_new_bits {
        return;
    }
    if depth == t {
        out.extend_from_slice(chunk);
        return;
    }
    let points = masks.len();
    for b in (last_b + 1)..=points {
        // later factors need strictly larger second indices
        if points - b + 1 < t - depth {
            break;
        }
        for a in 1..b {
            chunk[2 * depth] = b as u16;
            chunk[2 * depth + 1] = a as u16;
            let next = covered | masks[b - 1] | masks[a - 1];
            recurse_covering(masks, t, full, max_new_bits, depth + 1, b, next, chunk, out);
        }
    }
}

fn count_covering(masks: &[u64], t: u32, p: u32, max_new_bits: u32) -> u64 {
    enumerate_covering(masks, t, p, max_new_bits).len() as u64
}

/// Dimension of the normalized level `p` of the word-length `t` slice,
/// counted directly; depends on `d` through nothing at all.
pub fn normalized_dimension(m: u32, n: u32, t: u32, p: u32) -> Result<u64, EngineError> {
    let model = wedge_model(m, n, p)?;
    let masks = level_masks(&model, p)?;
    Ok(count_covering(&masks, t, p, 2 * n))
}

/// Image of one basis monomial under a face map, before projection.
/// Entries are integers throughout.
fn face_image(
    table: &[u32],
    chunk: &[u16],
    target_points: u32,
    parity: GenParity,
) -> Vec<(Vec<u16>, i64)> {
    let t = chunk.len() / 2;
    let mut mapped = Vec::with_capacity(t);
    let mut fast = true;
    let mut prev_hi = 0u32;
    for f in chunk.chunks(2) {
        let (b, a) = (f[0] as u32, f[1] as u32);
        let (fa, fb) = (table[a as usize - 1], table[b as usize - 1]);
        if fa == 0 || fb == 0 || fa == fb {
            return Vec::new();
        }
        // circle faces are monotone on ids; for higher spheres orientation
        // flips can occur and take the rewriting path
        if fa > fb || fb <= prev_hi {
            fast = false;
        }
        mapped.push((fa, fb));
        prev_hi = fb;
    }
    if fast {
        let mut out = Vec::with_capacity(2 * t);
        for (fa, fb) in &mapped {
            out.push(*fb as u16);
            out.push(*fa as u16);
        }
        return vec![(out, 1)];
    }
    let nf = arnold::normal_form(target_points, &mapped, parity).expect("indices in range");
    nf.sorted_terms()
        .into_iter()
        .map(|(mono, coef)| {
            debug_assert!(coef.denom().is_one());
            let mut flat = Vec::with_capacity(2 * t);
            for &(a, b) in mono.factors() {
                flat.push(b as u16);
                flat.push(a as u16);
            }
            let c = coef.numer().try_into().expect("small integer coefficient");
            (flat, c)
        })
        .collect()
}

/// Alternating sum of face images, projected to covering monomials.
fn boundary_of_monomial(
    chunk: &[u16],
    faces: &[Vec<u32>],
    target_points: u32,
    target_masks: &[u64],
    target_full: u64,
    parity: GenParity,
) -> Vec<(Vec<u16>, i64)> {
    let mut acc: HashMap<Vec<u16>, i64> = HashMap::new();
    for (i, table) in faces.iter().enumerate() {
        let sign = if i % 2 == 0 { 1i64 } else { -1 };
        for (flat, coef) in face_image(table, chunk, target_points, parity) {
            let covered = flat
                .chunks(2)
                .fold(0u64, |m, f| m | target_masks[f[0] as usize - 1] | target_masks[f[1] as usize - 1]);
            if covered != target_full {
                continue; // degenerate monomial: zero in the quotient
            }
            let e = acc.entry(flat).or_insert(0);
            *e += sign * coef;
        }
    }
    acc.retain(|_, v| *v != 0);
    let mut out: Vec<(Vec<u16>, i64)> = acc.into_iter().collect();
    out.sort();
    out
}

fn face_tables(model: &PointedSimplicialSet, p: u32) -> Result<Vec<Vec<u32>>, EngineError> {
    (0..=p)
        .map(|i| Ok(model.face(p, i)?.table().to_vec()))
        .collect()
}

/// Verifies the face/degeneracy exchange identities on the pointed-set
/// tables for the whole slice range; together with functoriality this
/// guarantees that boundaries preserve the degenerate span.
fn assert_mixed_identities(
    model: &PointedSimplicialSet,
    p_bound: u32,
    params: &SliceParams,
) -> Result<(), EngineError> {
    for p in 1..=p_bound {
        for j in 0..p {
            let s = model.degeneracy(p - 1, j)?;
            for i in 0..=p {
                let lhs = s.then(&model.face(p, i)?);
                let rhs = if i < j {
                    model.face(p - 1, i)?.then(&model.degeneracy(p - 2, j - 1)?)
                } else if i == j || i == j + 1 {
                    PointedMap::identity(model.non_base_count(p - 1)?)
                } else {
                    model.face(p - 1, i - 1)?.then(&model.degeneracy(p - 2, j)?)
                };
                if lhs != rhs {
                    return Err(EngineError::DegenerateEscape {
                        m: params.m,
                        n: params.n,
                        d: params.d,
                        t: params.t,
                        p,
                    });
                }
            }
        }
    }
    Ok(())
}

/// Spot-checks that boundaries of degenerate (non-covering) monomials stay
/// degenerate: exhaustively at small levels, by seeded sampling at large
/// ones.
fn check_degenerate_stability(
    model: &PointedSimplicialSet,
    params: &SliceParams,
    p: u32,
    sample_budget: usize,
) -> Result<(), EngineError> {
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    let t = params.t;
    if t == 0 || p == 0 {
        return Ok(());
    }
    let points = model.non_base_count(p)?;
    if points < 2 {
        return Ok(());
    }
    let masks = level_masks(model, p)?;
    let full = full_mask(p);
    let target_masks = level_masks(model, p - 1)?;
    let target_full = full_mask(p - 1);
    let target_points = model.non_base_count(p - 1)?;
    let faces = face_tables(model, p)?;
    let parity = params.parity();

    let mut raws: Vec<Vec<u16>> = Vec::new();
    let exhaustive = arnold::dimension(points, t) <= 20_000;
    if exhaustive {
        for m in arnold::enumerate_basis(points, t) {
            let mut flat = Vec::with_capacity(2 * t as usize);
            for &(a, b) in m.factors() {
                flat.push(b as u16);
                flat.push(a as u16);
            }
            raws.push(flat);
        }
    } else {
        let mut rng = StdRng::seed_from_u64(
            0x9E3779B97F4A7C15u64 ^ ((params.m as u64) << 32 | (params.t as u64) << 16 | p as u64),
        );
        for _ in 0..sample_budget {
            // random admissible monomial: distinct second indices ascending
            let mut bs: Vec<u32> = Vec::new();
            while bs.len() < t as usize {
                let b = rng.random_range(2..=points);
                if !bs.contains(&b) {
                    bs.push(b);
                }
            }
            bs.sort_unstable();
            let mut flat = Vec::with_capacity(2 * t as usize);
            for b in bs {
                let a = rng.random_range(1..b);
                flat.push(b as u16);
                flat.push(a as u16);
            }
            raws.push(flat);
        }
    }
    for flat in raws {
        let covered = flat
            .chunks(2)
            .fold(0u64, |acc, f| acc | masks[f[0] as usize - 1] | masks[f[1] as usize - 1]);
        if covered == full {
            continue; // not degenerate
        }
        // the alternating face sum of a degenerate monomial must have no
        // net component on a covering monomial
        let mut acc: HashMap<Vec<u16>, i64> = HashMap::new();
        for (i, table) in faces.iter().enumerate() {
            let sign = if i % 2 == 0 { 1i64 } else { -1 };
            for (image, coef) in face_image(table, &flat, target_points, parity) {
                *acc.entry(image).or_insert(0) += sign * coef;
            }
        }
        for (image, coef) in acc {
            if coef == 0 {
                continue;
            }
            let c = image.chunks(2).fold(0u64, |a, f| {
                a | target_masks[f[0] as usize - 1] | target_masks[f[1] as usize - 1]
            });
            if c == target_full {
                return Err(EngineError::DegenerateEscape {
                    m: params.m,
                    n: params.n,
                    d: params.d,
                    t: params.t,
                    p,
                });
            }
        }
    }
    Ok(())
}

/// Builds the normalized levels `0..=p_bound` of the slice, with boundaries
/// descended to the covering bases, and runs the structural checks.
pub fn assemble_slice(
    params: SliceParams,
    p_bound: u32,
    opts: AssembleOptions,
) -> Result<ComplexSlice, EngineError> {
    if params.d < 3 {
        return Err(EngineError::InvalidParams(format!("need d >= 3, got {}", params.d)));
    }
    if params.n == 0 {
        return Err(EngineError::InvalidParams("sphere dimension must be positive".into()));
    }
    let probe_extra = if params.n == 1 { 2 } else { 1 };
    let model_top = p_bound + probe_extra;
    let model = wedge_model(params.m, params.n, model_top)?;
    let parity = params.parity();
    let max_new_bits = 2 * params.n;

    assert_mixed_identities(&model, p_bound, &params)?;

    let mut levels: Vec<SliceLevel> = Vec::with_capacity(p_bound as usize + 1);
    for p in 0..=p_bound {
        let points = model.non_base_count(p)?;
        let masks = level_masks(&model, p)?;
        let basis = enumerate_covering(&masks, params.t, p, max_new_bits);
        let full_dim = arnold::dimension(points, params.t);
        let boundary = if opts.with_boundaries && p > 0 && params.t > 0 {
            let faces = face_tables(&model, p)?;
            let target = &levels[p as usize - 1];
            let target_masks = level_masks(&model, p - 1)?;
            let target_full = full_mask(p - 1);
            let target_points = model.non_base_count(p - 1)?;
            let target_basis = &target.basis;
            let columns: Vec<Vec<(u32, i64)>> = (0..basis.len())
                .into_par_iter()
                .map(|col| {
                    boundary_of_monomial(
                        basis.get(col),
                        &faces,
                        target_points,
                        &target_masks,
                        target_full,
                        parity,
                    )
                    .into_iter()
                    .map(|(flat, coef)| {
                        let row = target_basis
                            .position(&flat)
                            .expect("covering image monomial is in the target basis");
                        (row, coef)
                    })
                    .collect()
                })
                .collect();
            Some(SparseIntMatrix { rows: target.basis.len(), columns })
        } else if opts.with_boundaries && p > 0 {
            // t = 0: the unit survives only at p = 0, all boundaries vanish
            Some(SparseIntMatrix { rows: levels[p as usize - 1].basis.len(), columns: vec![Vec::new(); basis.len()] })
        } else {
            None
        };
        if opts.check_degenerate_stability && p > 0 {
            check_degenerate_stability(&model, &params, p, 64)?;
        }
        levels.push(SliceLevel { p, points, full_dim, basis, boundary });
    }

    // boundary square
    if opts.with_boundaries && opts.check_boundary_square {
        for p in 2..=p_bound as usize {
            let (head, tail) = levels.split_at(p);
            let lower = head[p - 1].boundary.as_ref();
            let upper = tail[0].boundary.as_ref();
            if let (Some(lower), Some(upper)) = (lower, upper) {
                let ok = upper.columns.par_iter().all(|col| {
                    let mut acc: HashMap<u32, i64> = HashMap::new();
                    for (r, v) in col {
                        for (rr, vv) in &lower.columns[*r as usize] {
                            *acc.entry(*rr).or_insert(0) += v * vv;
                        }
                    }
                    acc.values().all(|v| *v == 0)
                });
                if !ok {
                    return Err(EngineError::BoundarySquare {
                        m: params.m,
                        n: params.n,
                        d: params.d,
                        t: params.t,
                        p: p as u32,
                    });
                }
            }
        }
    }

    // next level and vanishing probes
    let next_masks = level_masks(&model, p_bound + 1)?;
    let next_level_dim = count_covering(&next_masks, params.t, p_bound + 1, max_new_bits);
    let mut probes = Vec::new();
    if params.n == 1 {
        for extra in [1u32, 2] {
            let p = 2 * params.t + extra;
            if p <= model_top && p > p_bound {
                let masks = level_masks(&model, p)?;
                let count = count_covering(&masks, params.t, p, max_new_bits);
                probes.push((p, count));
            } else if p <= p_bound {
                let masks = level_masks(&model, p)?;
                probes.push((p, count_covering(&masks, params.t, p, max_new_bits)));
            }
        }
        for &(p, count) in &probes {
            if p > 2 * params.t && count != 0 {
                return Err(EngineError::NormalizedVanishing {
                    m: params.m,
                    n: params.n,
                    d: params.d,
                    t: params.t,
                    p,
                });
            }
        }
    }

    Ok(ComplexSlice { params, p_bound, levels, next_level_dim, probes })
}

/// Streaming structural check for large slices: verifies that the square of
/// the boundary vanishes column by column without storing any matrices, and
/// runs the degeneracy-stability spot checks. Returns the normalized
/// dimensions per level.
pub fn structural_check(params: SliceParams, p_bound: u32) -> Result<Vec<u64>, EngineError> {
    if params.d < 3 {
        return Err(EngineError::InvalidParams(format!("need d >= 3, got {}", params.d)));
    }
    let probe_extra = if params.n == 1 { 2 } else { 1 };
    let model = wedge_model(params.m, params.n, p_bound + probe_extra)?;
    let parity = params.parity();
    let max_new_bits = 2 * params.n;
    assert_mixed_identities(&model, p_bound, &params)?;

    let mut dims = Vec::with_capacity(p_bound as usize + 1);
    for p in 0..=p_bound {
        let masks = level_masks(&model, p)?;
        let basis = enumerate_covering(&masks, params.t, p, max_new_bits);
        dims.push(basis.len() as u64);
        if p >= 2 && params.t > 0 {
            let faces_p = face_tables(&model, p)?;
            let faces_q = face_tables(&model, p - 1)?;
            let masks_q = level_masks(&model, p - 1)?;
            let full_q = full_mask(p - 1);
            let points_q = model.non_base_count(p - 1)?;
            let masks_r = level_masks(&model, p - 2)?;
            let full_r = full_mask(p - 2);
            let points_r = model.non_base_count(p - 2)?;
            let ok = (0..basis.len()).into_par_iter().all(|i| {
                let v = boundary_of_monomial(basis.get(i), &faces_p, points_q, &masks_q, full_q, parity);
                let mut acc: HashMap<Vec<u16>, i64> = HashMap::new();
                for (mono, coef) in v {
                    for (mono2, coef2) in
                        boundary_of_monomial(&mono, &faces_q, points_r, &masks_r, full_r, parity)
                    {
                        *acc.entry(mono2).or_insert(0) += coef * coef2;
                    }
                }
                acc.values().all(|v| *v == 0)
            });
            if !ok {
                return Err(EngineError::BoundarySquare {
                    m: params.m,
                    n: params.n,
                    d: params.d,
                    t: params.t,
                    p,
                });
            }
        }
        if p > 0 {
            check_degenerate_stability(&model, &params, p, 48)?;
        }
    }
    if params.n == 1 {
        for extra in [1u32, 2] {
            let p = 2 * params.t + extra;
            let masks = level_masks(&model, p)?;
            if count_covering(&masks, params.t, p, max_new_bits) != 0 {
                return Err(EngineError::NormalizedVanishing {
                    m: params.m,
                    n: params.n,
                    d: params.d,
                    t: params.t,
                    p,
                });
            }
        }
    }
    Ok(dims)
}

fn rank_of_boundary(
    slice: &ComplexSlice,
    p: u32,
    cfg: &EngineConfig,
) -> Result<u64, EngineError> {
    let level = &slice.levels[p as usize];
    let Some(boundary) = level.boundary.as_ref() else {
        return Err(EngineError::InvalidParams(format!(
            "slice assembled without boundaries, cannot rank level {p}"
        )));
    };
    if boundary.rows == 0 || boundary.cols() == 0 {
        return Ok(0);
    }
    let key = CacheKey::new(
        slice.params.m,
        slice.params.n,
        slice.params.parity(),
        slice.params.t,
        p,
        match cfg.rank_method() {
            RankMethod::Multimodular => "boundary_rank",
            RankMethod::Exact => "boundary_rank_exact",
        },
    );
    cfg.cache.get_or_insert_with(&key, || {
        let rational = boundary.to_rational();
        Ok(linalg::rank(&rational, cfg.rank_policy, cfg.seed).rank as u64)
    })
}

/// Homology dimension per level: `dim H_p = dim N_p - rank d_p - rank d_{p+1}`.
/// The boolean marks whether the value is final (false only at the top level
/// when the next normalized level is not known to vanish).
pub fn homology_dims(
    slice: &ComplexSlice,
    cfg: &EngineConfig,
) -> Result<Vec<(u32, u64, bool)>, EngineError> {
    let mut ranks = vec![0u64; slice.p_bound as usize + 2];
    for p in 1..=slice.p_bound {
        ranks[p as usize] = rank_of_boundary(slice, p, cfg)?;
    }
    let top_settled = slice.next_level_dim == 0;
    let mut out = Vec::new();
    for p in 0..=slice.p_bound {
        let dim = slice.levels[p as usize].basis.len() as u64;
        let consumed = ranks[p as usize] + ranks[p as usize + 1];
        if consumed > dim {
            return Err(EngineError::NegativeHomology {
                m: slice.params.m,
                n: slice.params.n,
                d: slice.params.d,
                t: slice.params.t,
                p,
            });
        }
        let complete = p < slice.p_bound || top_settled;
        out.push((p, dim - consumed, complete));
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct BettiEntry {
    pub u: u32,
    pub betti: u64,
    pub complete: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PBoundPolicy {
    #[serde(rename = "2t")]
    TwoT,
    User,
}

/// Betti numbers per total degree with provenance.
#[derive(Debug, Clone)]
pub struct BettiTable {
    pub m: u32,
    pub n: u32,
    pub d: u32,
    pub entries: Vec<BettiEntry>,
    pub p_bound_policy: PBoundPolicy,
    pub rank_method: RankMethod,
    /// (t, p_bound) actually computed, per slice.
    pub p_ranges: Vec<(u32, u32)>,
    /// Range of d in which the table computes the homology of the link space.
    pub interpretation: String,
}

impl BettiTable {
    pub fn betti(&self, u: u32) -> Option<&BettiEntry> {
        self.entries.iter().find(|e| e.u == u)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "m": self.m,
            "n": self.n,
            "d": self.d,
            "entries": self.entries.iter().map(|e| serde_json::json!({
                "u": e.u, "betti": e.betti, "complete": e.complete,
            })).collect::<Vec<_>>(),
            "p_bound_policy": match self.p_bound_policy {
                PBoundPolicy::TwoT => "2t",
                PBoundPolicy::User => "user",
            },
            "rank_method": self.rank_method.as_str(),
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "# m={} n={} d={} p_bound_policy={} rank_method={}\n",
            self.m,
            self.n,
            self.d,
            match self.p_bound_policy {
                PBoundPolicy::TwoT => "2t",
                PBoundPolicy::User => "user",
            },
            self.rank_method.as_str()
        ));
        out.push_str("u,betti,complete\n");
        for e in &self.entries {
            out.push_str(&format!("{},{},{}\n", e.u, e.betti, e.complete));
        }
        out.push_str(&format!("# {}\n", self.interpretation));
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "Betti table for m={}, n={}, d={} (p bound: {}, ranks: {})\n\n",
            self.m,
            self.n,
            self.d,
            match self.p_bound_policy {
                PBoundPolicy::TwoT => "2t",
                PBoundPolicy::User => "user",
            },
            self.rank_method.as_str()
        ));
        out.push_str("| u | betti | complete |\n|---:|---:|:---|\n");
        for e in &self.entries {
            out.push_str(&format!("| {} | {} | {} |\n", e.u, e.betti, e.complete));
        }
        out.push('\n');
        out.push_str(&self.interpretation);
        out.push('\n');
        out
    }
}

/// Betti numbers of the tower for total degrees `0..=u_max`.
///
/// For circles the bound `p <= 2t` makes every degree a finite computation
/// once `d >= 4`; for higher spheres an explicit `p_max` is required and
/// entries are flagged complete only when every potential contribution was
/// resolved.
pub fn betti_table(
    m: u32,
    n: u32,
    d: u32,
    u_max: u32,
    p_max: Option<u32>,
    cfg: &EngineConfig,
) -> Result<BettiTable, EngineError> {
    if n == 0 {
        return Err(EngineError::InvalidParams("sphere dimension must be positive".into()));
    }
    if n == 1 && d < 4 {
        return Err(EngineError::InvalidParams(format!(
            "automatic completeness for circles needs d >= 4, got {d}"
        )));
    }
    if n >= 2 && p_max.is_none() {
        return Err(EngineError::InvalidParams(
            "sphere dimension >= 2 requires an explicit p bound".into(),
        ));
    }
    if n >= 2 && d < 3 {
        return Err(EngineError::InvalidParams(format!("need d >= 3, got {d}")));
    }

    let mut betti: HashMap<u32, u64> = HashMap::new();
    let mut incomplete: Vec<bool> = vec![false; u_max as usize + 1];
    let mut p_ranges = Vec::new();

    let opts = AssembleOptions::default();
    if n == 1 {
        let t_max = u_max / (d - 3).max(1);
        for t in 0..=t_max {
            let params = SliceParams { m, n, d, t };
            let slice = assemble_slice(params, 2 * t, opts)?;
            p_ranges.push((t, 2 * t));
            let dims = homology_dims(&slice, cfg)?;
            for (p, h, complete) in dims {
                debug_assert!(complete);
                let u = t * (d - 1) - p; // p <= 2t and d >= 4 keep this nonnegative
                if u <= u_max && h > 0 {
                    *betti.entry(u).or_insert(0) += h;
                }
                let _ = complete;
            }
        }
    } else {
        let p_max = p_max.unwrap();
        let t_top = (u_max + p_max) / (d - 1);
        let mut slice_complete: HashMap<(u32, u32), bool> = HashMap::new();
        for t in 0..=t_top {
            let params = SliceParams { m, n, d, t };
            let p_bound = p_max.min(2 * t * n).min(p_max);
            let slice = assemble_slice(params, p_bound, opts)?;
            p_ranges.push((t, p_bound));
            let dims = homology_dims(&slice, cfg)?;
            for (p, h, complete) in dims {
                slice_complete.insert((t, p), complete);
                let total = t * (d - 1);
                if total < p {
                    continue;
                }
                let u = total - p;
                if u <= u_max && h > 0 {
                    *betti.entry(u).or_insert(0) += h;
                }
            }
        }
        // completeness: a degree is complete when every potentially
        // contributing (t, p) pair was resolved; contributions vanish for
        // p > 2tn because the support of t factors covers at most 2tn jumps.
        for u in 0..=u_max {
            let mut complete = d > 2 * n + 1;
            if complete {
                let t_limit = u / (d - 1 - 2 * n);
                for t in 0..=t_limit {
                    let total = t * (d - 1);
                    if total < u {
                        continue;
                    }
                    let p = total - u;
                    if p > 2 * t * n {
                        continue;
                    }
                    match slice_complete.get(&(t, p)) {
                        Some(true) => {}
                        _ => {
                            complete = false;
                            break;
                        }
                    }
                }
            }
            incomplete[u as usize] = !complete;
        }
    }

    let entries: Vec<BettiEntry> = (0..=u_max)
        .map(|u| BettiEntry {
            u,
            betti: betti.get(&u).copied().unwrap_or(0),
            complete: !incomplete[u as usize],
        })
        .collect();
    let interpretation = if n == 1 {
        format!(
            "Computed for d = {d}; the table equals the rational homology of the space of long \
links modulo immersions when d > 5 (total degree u = t(d-1) - p)."
        )
    } else {
        format!(
            "Computed for n = {n}, d = {d}; the table equals the rational homology of the space \
of higher-dimensional long links modulo immersions when d > 2n + 3."
        )
    };
    Ok(BettiTable {
        m,
        n,
        d,
        entries,
        p_bound_policy: if n == 1 { PBoundPolicy::TwoT } else { PBoundPolicy::User },
        rank_method: cfg.rank_method(),
        p_ranges,
        interpretation,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct EulerRow {
    pub t: u32,
    pub computed: String,
    pub expected: String,
    pub sign: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EulerReport {
    pub m: u32,
    pub d: u32,
    pub rows: Vec<EulerRow>,
    pub all_pass: bool,
}

impl EulerReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// Compares the alternating sums of normalized dimensions against the
/// closed-form coefficients, one row per word length; the comparison is up
/// to a global sign per row, which is recorded. Circles only; the
/// dimensions do not depend on `d`.
pub fn euler_check(m: u32, d: u32, t_max: u32, cfg: &EngineConfig) -> Result<EulerReport, EngineError> {
    if m < 1 || d < 4 {
        return Err(EngineError::InvalidParams(format!("need m >= 1 and d >= 4, got m={m} d={d}")));
    }
    let order = (t_max as usize) * (d as usize - 1);
    let links = series::euler_series_links(m, d, order)?;
    let parity = GenParity::from_ambient_dim(d);
    let mut rows = Vec::new();
    for t in 0..=t_max {
        let model = wedge_model(m, 1, 2 * t)?;
        let mut computed = BigInt::zero();
        for p in 0..=2 * t {
            let key = CacheKey::new(m, 1, parity, t, p, "normalized_dim");
            let dim = cfg.cache.get_or_insert_with(&key, || -> Result<u64, EngineError> {
                let masks = level_masks(&model, p)?;
                Ok(count_covering(&masks, t, p, 2))
            })?;
            if p % 2 == 0 {
                computed += BigInt::from(dim);
            } else {
                computed -= BigInt::from(dim);
            }
        }
        let expected_coeff = links.coefficient(t as usize * (d as usize - 1));
        debug_assert!(expected_coeff.denom().is_one());
        let expected = expected_coeff.numer().clone();
        let pass = computed.abs() == expected.abs();
        let sign = if computed == expected { "+" } else { "-" };
        rows.push(EulerRow {
            t,
            computed: computed.to_string(),
            expected: expected.to_string(),
            sign: sign.to_string(),
            pass,
        });
    }
    let all_pass = rows.iter().all(|r| r.pass);
    Ok(EulerReport { m, d, rows, all_pass })
}

/// Reference assembly through full level spaces: induced degeneracy images
/// spanning the degenerate subspace, quotient bases by exact elimination,
/// and boundaries descended through the projections. Cross-checks the
/// combinatorial route at small sizes.
pub fn assemble_slice_dense(
    params: SliceParams,
    p_bound: u32,
) -> Result<Vec<(u32, linalg::QuotientBasis, Option<SparseRationalMatrix>)>, EngineError> {
    let model = wedge_model(params.m, params.n, p_bound)?;
    let parity = params.parity();
    let t = params.t;
    for p in 0..=p_bound {
        let dim = arnold::dimension(model.non_base_count(p)?, t);
        if dim > 20_000 {
            return Err(EngineError::InvalidParams(format!(
                "full level space at p={p} has dimension {dim}, too large for the dense route"
            )));
        }
    }
    let mut out: Vec<(u32, linalg::QuotientBasis, Option<SparseRationalMatrix>)> = Vec::new();
    for p in 0..=p_bound {
        let points = model.non_base_count(p)?;
        let full_dim = arnold::dimension(points, t) as usize;
        // degenerate span: all degeneracy images from level p-1
        let span = if p == 0 {
            SparseRationalMatrix::zero(full_dim, 0)
        } else {
            let mut triplets = Vec::new();
            let mut col = 0u32;
            for j in 0..p {
                let s = model.degeneracy(p - 1, j)?;
                let induced = gamma::induced_map(&s, t, parity)?;
                for c in 0..induced.matrix.cols() {
                    for (r, v) in induced.matrix.column(c) {
                        triplets.push((*r, col, v.clone()));
                    }
                    col += 1;
                }
            }
            SparseRationalMatrix::from_triplets(full_dim, col as usize, triplets)?
        };
        let quotient = linalg::quotient_basis(full_dim, &span)?;
        let boundary = if p > 0 {
            let prev_points = model.non_base_count(p - 1)?;
            let prev_full = arnold::dimension(prev_points, t) as usize;
            let mut total = SparseRationalMatrix::zero(prev_full, full_dim);
            for i in 0..=p {
                let face = model.face(p, i)?;
                let induced = gamma::induced_map(&face, t, parity)?;
                let sign = if i % 2 == 0 {
                    num_rational::BigRational::one()
                } else {
                    -num_rational::BigRational::one()
                };
                for c in 0..induced.matrix.cols() {
                    for (r, v) in induced.matrix.column(c) {
                        let mut current = total
                            .column(c)
                            .iter()
                            .find(|(rr, _)| rr == r)
                            .map(|(_, vv)| vv.clone())
                            .unwrap_or_else(num_rational::BigRational::zero);
                        current += v * &sign;
                        total.set(*r, c as u32, current)?;
                    }
                }
            }
            let prev_q = &out[p as usize - 1].1;
            Some(linalg::descend(&total, &quotient, prev_q).map_err(|e| match e {
                LinalgError::NotWellDefined { .. } => EngineError::DegenerateEscape {
                    m: params.m,
                    n: params.n,
                    d: params.d,
                    t: params.t,
                    p,
                },
                other => EngineError::Linalg(other),
            })?)
        } else {
            None
        };
        out.push((p, quotient, boundary));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> EngineConfig {
        EngineConfig::default()
    }

    #[test]
    fn t0_slice_is_the_point_complex() {
        for m in [0u32, 1, 2] {
            let slice =
                assemble_slice(SliceParams { m, n: 1, d: 7, t: 0 }, 0, AssembleOptions::default())
                    .unwrap();
            assert_eq!(slice.dims(), vec![1]);
            assert_eq!(slice.next_level_dim, 0);
            let h = homology_dims(&slice, &cfg()).unwrap();
            assert_eq!(h, vec![(0, 1, true)]);
        }
    }

    #[test]
    fn knot_t1_slice_matches_hand_computation() {
        // m=1, t=1: N_1 = 0 (one point, no classes), N_2 = <w(1,2)>, boundary 0
        let slice =
            assemble_slice(SliceParams { m: 1, n: 1, d: 7, t: 1 }, 2, AssembleOptions::default())
                .unwrap();
        assert_eq!(slice.dims(), vec![0, 0, 1]);
        assert_eq!(slice.levels[2].full_dim, 1);
        let b = slice.levels[2].boundary.as_ref().unwrap();
        assert_eq!(b.nnz(), 0);
        let h = homology_dims(&slice, &cfg()).unwrap();
        assert_eq!(h, vec![(0, 0, true), (1, 0, true), (2, 1, true)]);
    }

    #[test]
    fn two_strand_t1_dimensions() {
        // full dims 1 and 6 at p = 1, 2; normalized dims 1 and 4
        let slice =
            assemble_slice(SliceParams { m: 2, n: 1, d: 7, t: 1 }, 2, AssembleOptions::default())
                .unwrap();
        assert_eq!(slice.levels[1].full_dim, 1);
        assert_eq!(slice.levels[2].full_dim, 6);
        assert_eq!(slice.dims(), vec![0, 1, 4]);
        assert_eq!(slice.euler_sum(), 3); // 2^{t+1} - 1 at t = 1
    }

    #[test]
    fn dims_are_independent_of_d() {
        for t in 0..=2u32 {
            let a = assemble_slice(
                SliceParams { m: 2, n: 1, d: 6, t },
                2 * t,
                AssembleOptions::default(),
            )
            .unwrap();
            let b = assemble_slice(
                SliceParams { m: 2, n: 1, d: 7, t },
                2 * t,
                AssembleOptions::default(),
            )
            .unwrap();
            assert_eq!(a.dims(), b.dims());
        }
    }

    #[test]
    fn euler_sums_match_series_small() {
        let engine = cfg();
        for m in 1..=2u32 {
            let report = euler_check(m, 7, 3, &engine).unwrap();
            assert!(report.all_pass, "{report:?}");
            for row in &report.rows {
                assert_eq!(row.sign, "+", "alternating sums match with the positive sign");
            }
        }
        // m=2 expected values 2^{t+1}-1
        let report = euler_check(2, 7, 3, &engine).unwrap();
        let expected: Vec<String> =
            [1i64, 3, 7, 15].iter().map(|v| v.to_string()).collect();
        let got: Vec<String> = report.rows.iter().map(|r| r.expected.clone()).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn dense_route_agrees_with_combinatorial_route() {
        for (m, t, d) in [(1u32, 1u32, 6u32), (1, 2, 7), (2, 1, 6), (2, 2, 7)] {
            let params = SliceParams { m, n: 1, d, t };
            let slice = assemble_slice(params, 2 * t, AssembleOptions::default()).unwrap();
            let dense = assemble_slice_dense(params, 2 * t).unwrap();
            for p in 0..=(2 * t) as usize {
                let (dp, q, boundary) = &dense[p];
                assert_eq!(*dp as usize, p);
                assert_eq!(
                    q.quotient_dim(),
                    slice.levels[p].basis.len(),
                    "m={m} t={t} d={d} p={p}"
                );
                if p > 0 {
                    let combin = slice.levels[p].boundary.as_ref().unwrap().to_rational();
                    assert_eq!(boundary.as_ref().unwrap(), &combin, "m={m} t={t} d={d} p={p}");
                }
            }
        }
    }

    #[test]
    fn betti_table_knots_d7() {
        let table = betti_table(1, 1, 7, 4, None, &cfg()).unwrap();
        let b: Vec<u64> = (0..=4).map(|u| table.betti(u).unwrap().betti).collect();
        assert_eq!(b, vec![1, 0, 0, 0, 1]);
        assert!(table.entries.iter().all(|e| e.complete));
        assert_eq!(table.p_bound_policy, PBoundPolicy::TwoT);
    }

    #[test]
    fn betti_table_point() {
        let table = betti_table(0, 1, 7, 5, None, &cfg()).unwrap();
        assert_eq!(table.betti(0).unwrap().betti, 1);
        for u in 1..=5 {
            assert_eq!(table.betti(u).unwrap().betti, 0);
        }
    }

    #[test]
    fn betti_rejects_bad_parameters() {
        assert!(matches!(
            betti_table(2, 2, 9, 4, None, &cfg()),
            Err(EngineError::InvalidParams(_))
        ));
        assert!(matches!(
            betti_table(1, 1, 3, 4, None, &cfg()),
            Err(EngineError::InvalidParams(_))
        ));
    }

    #[test]
    fn sphere_slices_assemble_and_square_to_zero() {
        // m=1, n=2: |level 4| = C(4,2)+1 = 7; t=1 slice has p <= 4
        let params = SliceParams { m: 1, n: 2, d: 9, t: 1 };
        let slice = assemble_slice(params, 4, AssembleOptions::default()).unwrap();
        assert_eq!(slice.levels[4].points, 6);
        assert_eq!(slice.next_level_dim, 0);
        let h = homology_dims(&slice, &cfg()).unwrap();
        // Euler characteristic sanity: sum (-1)^p H_p = sum (-1)^p dim N_p
        let euler_h: i64 = h
            .iter()
            .map(|(p, v, _)| if p % 2 == 0 { *v as i64 } else { -(*v as i64) })
            .sum();
        assert_eq!(euler_h, slice.euler_sum());
    }

    #[test]
    fn betti_table_for_spheres_flags_completeness() {
        let table = betti_table(1, 2, 9, 6, Some(6), &cfg()).unwrap();
        assert_eq!(table.p_bound_policy, PBoundPolicy::User);
        assert_eq!(table.betti(0).unwrap().betti, 1);
        assert!(table.betti(0).unwrap().complete);
        // u = 6 = t(d-1) - p with t=1, p=2: complete since p <= 2tn = 4 slices resolved
        assert!(table.betti(6).unwrap().complete);
    }

    #[test]
    fn euler_check_rejects_bad_parameters() {
        assert!(euler_check(0, 7, 2, &cfg()).is_err());
        assert!(euler_check(1, 3, 2, &cfg()).is_err());
    }

    #[test]
    fn homology_euler_characteristic_is_rank_invariant() {
        for (m, t, d) in [(1u32, 2u32, 6u32), (2, 2, 7), (2, 3, 6), (3, 2, 7)] {
            let slice = assemble_slice(
                SliceParams { m, n: 1, d, t },
                2 * t,
                AssembleOptions::default(),
            )
            .unwrap();
            let h = homology_dims(&slice, &cfg()).unwrap();
            let euler_h: i64 = h
                .iter()
                .map(|(p, v, _)| if p % 2 == 0 { *v as i64 } else { -(*v as i64) })
                .sum();
            assert_eq!(euler_h, slice.euler_sum(), "m={m} t={t} d={d}");
        }
    }

    #[test]
    fn structural_check_small() {
        let dims = structural_check(SliceParams { m: 2, n: 1, d: 6, t: 2 }, 4).unwrap();
        assert_eq!(dims.len(), 5);
        let slice = assemble_slice(
            SliceParams { m: 2, n: 1, d: 6, t: 2 },
            4,
            AssembleOptions::default(),
        )
        .unwrap();
        assert_eq!(dims, slice.dims());
    }

    #[test]
    fn betti_json_schema() {
        let table = betti_table(1, 1, 7, 4, None, &cfg()).unwrap();
        let json = table.to_json();
        assert_eq!(json["m"], 1);
        assert_eq!(json["p_bound_policy"], "2t");
        assert_eq!(json["rank_method"], "multimodular");
        assert_eq!(json["entries"][4]["betti"], 1);
        let csv = table.to_csv();
        assert!(csv.contains("u,betti,complete"));
        let md = table.to_markdown();
        assert!(md.contains("| 4 | 1 | true |"));
    }
}
