//! Exact rank, kernel-complement and quotient computations over the
//! rationals for sparse matrices.
//!
//! The default rank path is multimodular: ranks are computed modulo a few
//! random large primes (drawn from a seeded generator, redrawn on collision
//! with a denominator) and the maximum is taken; a modular rank can only
//! undershoot the rational rank, never exceed it. The `Exact` policy runs a
//! dense fraction-free elimination and serves as the independent oracle.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("entry ({row},{col}) outside a {rows}x{cols} matrix")]
    IndexOutOfRange { row: u32, col: u32, rows: usize, cols: usize },
    #[error("dimension mismatch: {left} vs {right} in {context}")]
    DimensionMismatch { left: usize, right: usize, context: &'static str },
    #[error("span does not fit ambient dimension {ambient}: column touches row {row}")]
    SpanOutOfRange { ambient: usize, row: u32 },
    #[error("boundary does not preserve the degenerate span (column {col})")]
    NotWellDefined { col: usize },
    #[error("malformed matrix fixture: {0}")]
    BadFixture(String),
}

/// Column-major sparse matrix with exact rational entries. No zeros stored.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseRationalMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(u32, BigRational)>>,
}

impl SparseRationalMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self { rows, cols, columns: vec![Vec::new(); cols] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim, dim);
        for j in 0..dim {
            m.columns[j].push((j as u32, BigRational::one()));
        }
        m
    }

    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (u32, u32, BigRational)>,
    ) -> Result<Self, LinalgError> {
        let mut m = Self::zero(rows, cols);
        for (r, c, v) in triplets {
            m.set(r, c, v)?;
        }
        for col in &mut m.columns {
            col.sort_by_key(|(r, _)| *r);
        }
        Ok(m)
    }

    pub fn set(&mut self, row: u32, col: u32, value: BigRational) -> Result<(), LinalgError> {
        if row as usize >= self.rows || col as usize >= self.cols {
            return Err(LinalgError::IndexOutOfRange {
                row,
                col,
                rows: self.rows,
                cols: self.cols,
            });
        }
        let column = &mut self.columns[col as usize];
        match column.iter_mut().find(|(r, _)| *r == row) {
            Some((_, v)) => {
                if value.is_zero() {
                    column.retain(|(r, _)| *r != row);
                } else {
                    *v = value;
                }
            }
            None if !value.is_zero() => column.push((row, value)),
            None => {}
        }
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn column(&self, col: usize) -> &[(u32, BigRational)] {
        &self.columns[col]
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zero(self.cols, self.rows);
        for (j, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                m.columns[*r as usize].push((j as u32, v.clone()));
            }
        }
        for col in &mut m.columns {
            col.sort_by_key(|(r, _)| *r);
        }
        m
    }

    /// Sparse column vector `self * v`, with `v` given as (row, value) pairs.
    pub fn apply(&self, v: &[(u32, BigRational)]) -> Vec<(u32, BigRational)> {
        let mut acc: BTreeMap<u32, BigRational> = BTreeMap::new();
        for (j, coeff) in v {
            for (r, a) in &self.columns[*j as usize] {
                let e = acc.entry(*r).or_insert_with(BigRational::zero);
                *e += a * coeff;
            }
        }
        acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                left: self.cols,
                right: other.rows,
                context: "matrix product",
            });
        }
        let mut m = Self::zero(self.rows, other.cols);
        for (j, col) in other.columns.iter().enumerate() {
            m.columns[j] = self.apply(col);
        }
        Ok(m)
    }

    /// Interchange format: header `rows cols`, then one `r c p/q` triplet per line.
    pub fn to_fixture(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.rows, self.cols);
        for (j, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                let _ = writeln!(out, "{} {} {}", r, j, v);
            }
        }
        out
    }

    pub fn from_fixture(text: &str) -> Result<Self, LinalgError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| LinalgError::BadFixture("missing header".into()))?;
        let mut it = header.split_whitespace();
        let rows: usize = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| LinalgError::BadFixture("bad row count".into()))?;
        let cols: usize = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| LinalgError::BadFixture("bad column count".into()))?;
        let mut m = Self::zero(rows, cols);
        for line in lines {
            let mut parts = line.split_whitespace();
            let r: u32 = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| LinalgError::BadFixture(format!("bad row in `{line}`")))?;
            let c: u32 = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| LinalgError::BadFixture(format!("bad col in `{line}`")))?;
            let v = parts
                .next()
                .and_then(|s| BigRational::from_str(s).ok())
                .ok_or_else(|| LinalgError::BadFixture(format!("bad value in `{line}`")))?;
            m.set(r, c, v)?;
        }
        for col in &mut m.columns {
            col.sort_by_key(|(r, _)| *r);
        }
        Ok(m)
    }

    fn denominators(&self) -> Vec<BigInt> {
        let mut out = Vec::new();
        for col in &self.columns {
            for (_, v) in col {
                if !v.denom().is_one() {
                    out.push(v.denom().clone());
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RankPolicy {
    /// Ranks modulo `num_primes` random large primes; maximum taken.
    Multimodular { num_primes: usize },
    /// Dense fraction-free elimination over the integers.
    Exact,
}

impl Default for RankPolicy {
    fn default() -> Self {
        RankPolicy::Multimodular { num_primes: 2 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankResult {
    pub rank: usize,
    pub method: RankMethod,
    pub primes_used: Vec<u64>,
    pub verified: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RankMethod {
    Multimodular,
    Exact,
}

impl RankMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            RankMethod::Multimodular => "multimodular",
            RankMethod::Exact => "exact",
        }
    }
}

/// Rank of `a` under the given policy. Prime selection is a pure function of
/// `seed`; a prime dividing some denominator is discarded and redrawn.
pub fn rank(a: &SparseRationalMatrix, policy: RankPolicy, seed: u64) -> RankResult {
    match policy {
        RankPolicy::Multimodular { num_primes } => {
            let denoms = a.denominators();
            let mut rng = StdRng::seed_from_u64(seed);
            let mut primes = Vec::new();
            while primes.len() < num_primes.max(1) {
                let p = draw_prime(&mut rng);
                if primes.contains(&p) {
                    continue;
                }
                if denoms.iter().any(|d| (d % p).is_zero()) {
                    continue; // collides with a denominator: redraw
                }
                primes.push(p);
            }
            let rank = primes
                .iter()
                .map(|&p| rank_mod_p(a, p))
                .max()
                .unwrap_or(0);
            RankResult { rank, method: RankMethod::Multimodular, primes_used: primes, verified: false }
        }
        RankPolicy::Exact => RankResult {
            rank: rank_exact(a),
            method: RankMethod::Exact,
            primes_used: Vec::new(),
            verified: true,
        },
    }
}

/// Multimodular rank re-verified by the exact elimination; panics on any
/// disagreement, which would indicate a bug in one of the two routes.
pub fn rank_checked(a: &SparseRationalMatrix, seed: u64) -> RankResult {
    let mm = rank(a, RankPolicy::default(), seed);
    let ex = rank(a, RankPolicy::Exact, seed);
    assert_eq!(
        mm.rank, ex.rank,
        "multimodular rank {} disagrees with exact rank {}",
        mm.rank, ex.rank
    );
    RankResult { verified: true, ..mm }
}

fn draw_prime(rng: &mut StdRng) -> u64 {
    loop {
        let candidate: u64 = rng.random_range((1u64 << 30)..(1u64 << 31)) | 1;
        if is_prime_u64(candidate) {
            return candidate;
        }
    }
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    // Deterministic Miller-Rabin bases for n < 2^64.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if a % n == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn residue(v: &BigRational, p: u64) -> u64 {
    let pb = BigInt::from(p);
    let mut num = v.numer() % &pb;
    if num.is_negative() {
        num += &pb;
    }
    let mut den = v.denom() % &pb;
    if den.is_negative() {
        den += &pb;
    }
    let num = num.to_u64().expect("residue fits u64");
    let den = den.to_u64().expect("residue fits u64");
    debug_assert!(den != 0, "prime collides with a denominator");
    mul_mod(num, inv_mod(den, p), p)
}

/// Sparse elimination modulo `p`: each column is reduced against the pivot
/// columns found so far, pivoting at the column's largest surviving row.
fn rank_mod_p(a: &SparseRationalMatrix, p: u64) -> usize {
    let mut order: Vec<usize> = (0..a.cols()).filter(|&j| !a.columns[j].is_empty()).collect();
    order.sort_by_key(|&j| a.columns[j].len());
    // pivot row -> reduced column with pivot entry normalized to 1
    let mut pivots: BTreeMap<u32, Vec<(u32, u64)>> = BTreeMap::new();
    for j in order {
        let mut work: BTreeMap<u32, u64> = BTreeMap::new();
        for (r, v) in &a.columns[j] {
            let res = residue(v, p);
            if res != 0 {
                work.insert(*r, res);
            }
        }
        while let Some((&row, &val)) = work.last_key_value() {
            match pivots.get(&row) {
                Some(pcol) => {
                    // work -= val * pcol ; pivot of pcol sits at `row`, its
                    // other entries at strictly smaller rows.
                    for (r, pv) in pcol {
                        let delta = mul_mod(val, *pv, p);
                        let entry = work.entry(*r).or_insert(0);
                        *entry = (*entry + p - delta) % p;
                        if *entry == 0 {
                            work.remove(r);
                        }
                    }
                }
                None => {
                    let inv = inv_mod(val, p);
                    let col: Vec<(u32, u64)> =
                        work.iter().map(|(r, v)| (*r, mul_mod(*v, inv, p))).collect();
                    pivots.insert(row, col);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// Dense fraction-free (Bareiss) elimination over the integers after
/// clearing denominators column by column.
fn rank_exact(a: &SparseRationalMatrix) -> usize {
    let rows = a.rows();
    let cols = a.cols();
    if rows == 0 || cols == 0 {
        return 0;
    }
    let mut m: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); cols]; rows];
    for (j, col) in a.columns.iter().enumerate() {
        let mut lcm = BigInt::one();
        for (_, v) in col {
            lcm = num_integer::lcm(lcm, v.denom().clone());
        }
        for (r, v) in col {
            m[*r as usize][j] = v.numer() * (&lcm / v.denom());
        }
    }
    let mut rank = 0usize;
    let mut prev_pivot = BigInt::one();
    let mut col = 0usize;
    while rank < rows && col < cols {
        let Some(pivot_row) = (rank..rows).find(|&i| !m[i][col].is_zero()) else {
            col += 1;
            continue;
        };
        m.swap(rank, pivot_row);
        let pivot = m[rank][col].clone();
        for i in rank + 1..rows {
            for jj in col + 1..cols {
                let num = &m[i][jj] * &pivot - &m[i][col] * &m[rank][jj];
                debug_assert!((&num % &prev_pivot).is_zero(), "Bareiss division must be exact");
                m[i][jj] = num / &prev_pivot;
            }
            m[i][col] = BigInt::zero();
        }
        prev_pivot = pivot;
        rank += 1;
        col += 1;
    }
    rank
}

/// A basis of the quotient of the ambient space by the span, presented as a
/// subset of ambient coordinates plus the projection onto them.
#[derive(Debug, Clone)]
pub struct QuotientBasis {
    pub ambient_dim: usize,
    /// Ambient coordinates whose images form a basis of the quotient.
    pub complement: Vec<u32>,
    /// Matrix of the quotient projection, `complement.len()` x `ambient_dim`.
    pub projection: SparseRationalMatrix,
    span: SparseRationalMatrix,
}

impl QuotientBasis {
    pub fn span(&self) -> &SparseRationalMatrix {
        &self.span
    }

    pub fn quotient_dim(&self) -> usize {
        self.complement.len()
    }
}

/// Quotient of `Q^ambient_dim` by the column span of `span`.
pub fn quotient_basis(
    ambient_dim: usize,
    span: &SparseRationalMatrix,
) -> Result<QuotientBasis, LinalgError> {
    if span.rows() != ambient_dim {
        return Err(LinalgError::DimensionMismatch {
            left: span.rows(),
            right: ambient_dim,
            context: "quotient span",
        });
    }
    // Fully reduced column echelon form of the span: every stored column has
    // entry 1 at its own pivot row and 0 at every other pivot row.
    let mut pivots: BTreeMap<u32, BTreeMap<u32, BigRational>> = BTreeMap::new();
    for j in 0..span.cols() {
        let mut work: BTreeMap<u32, BigRational> = BTreeMap::new();
        for (r, v) in span.column(j) {
            if *r as usize >= ambient_dim {
                return Err(LinalgError::SpanOutOfRange { ambient: ambient_dim, row: *r });
            }
            work.insert(*r, v.clone());
        }
        // Clear every pivoted row. Because stored columns vanish at the other
        // pivot rows, one pass over the rows hit at entry suffices.
        let hit: Vec<u32> = work.keys().copied().filter(|r| pivots.contains_key(r)).collect();
        for row in hit {
            let Some(c) = work.remove(&row) else { continue };
            for (r, pv) in &pivots[&row] {
                if *r == row {
                    continue;
                }
                let entry = work.entry(*r).or_insert_with(BigRational::zero);
                *entry -= &c * pv;
                if entry.is_zero() {
                    let r = *r;
                    work.remove(&r);
                }
            }
        }
        let Some((&row, val)) = work.last_key_value() else { continue };
        let inv = val.clone().recip();
        let newcol: BTreeMap<u32, BigRational> =
            work.iter().map(|(r, v)| (*r, v * &inv)).collect();
        // Backward update: clear the new pivot row from every stored column.
        for (_, pcol) in pivots.iter_mut() {
            if let Some(c) = pcol.get(&row).cloned() {
                for (r, v) in &newcol {
                    let entry = pcol.entry(*r).or_insert_with(BigRational::zero);
                    *entry -= &c * v;
                    if entry.is_zero() {
                        let r = *r;
                        pcol.remove(&r);
                    }
                }
            }
        }
        pivots.insert(row, newcol);
    }
    let pivot_rows: Vec<u32> = pivots.keys().copied().collect();
    let complement: Vec<u32> =
        (0..ambient_dim as u32).filter(|r| !pivot_rows.contains(r)).collect();
    let comp_index: BTreeMap<u32, u32> =
        complement.iter().enumerate().map(|(i, r)| (*r, i as u32)).collect();
    let mut projection = SparseRationalMatrix::zero(complement.len(), ambient_dim);
    for (i, r) in complement.iter().enumerate() {
        projection.set(i as u32, *r, BigRational::one())?;
    }
    for (prow, pcol) in &pivots {
        for (r, v) in pcol {
            if let Some(ci) = comp_index.get(r) {
                projection.set(*ci, *prow, -v.clone())?;
            }
        }
    }
    Ok(QuotientBasis { ambient_dim, complement, projection, span: span.clone() })
}

/// Descends a boundary map between full spaces to the quotients. Fails when
/// the map does not send the source span into the destination span.
pub fn descend(
    boundary: &SparseRationalMatrix,
    src: &QuotientBasis,
    dst: &QuotientBasis,
) -> Result<SparseRationalMatrix, LinalgError> {
    if boundary.cols() != src.ambient_dim || boundary.rows() != dst.ambient_dim {
        return Err(LinalgError::DimensionMismatch {
            left: boundary.cols(),
            right: src.ambient_dim,
            context: "descend",
        });
    }
    for j in 0..src.span.cols() {
        let image = boundary.apply(src.span.column(j));
        let projected = dst.projection.apply(&image);
        if !projected.is_empty() {
            return Err(LinalgError::NotWellDefined { col: j });
        }
    }
    let mut out = SparseRationalMatrix::zero(dst.quotient_dim(), src.quotient_dim());
    for (j, coord) in src.complement.iter().enumerate() {
        let unit = vec![(*coord, BigRational::one())];
        let image = boundary.apply(&unit);
        out.columns[j] = dst.projection.apply(&image);
    }
    Ok(out)
}
