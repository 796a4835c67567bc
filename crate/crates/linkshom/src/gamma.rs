//! Finite pointed sets and the action of their morphisms on the
//! configuration-space cohomology algebras.
//!
//! A map `f` of pointed sets sends the generator `w(a,b)` to `w(f(a),f(b))`,
//! which is zero whenever an endpoint hits the basepoint or the endpoints
//! collide; on monomials the images multiply out through the normal form.
//! This makes `k -> H^*(Conf(k))` a covariant functor on pointed sets, the
//! linear dual of the contravariant homology-side structure that
//! [`leibniz_oracle`] computes independently for cross-checking.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_traits::Zero;
use thiserror::Error;

use crate::arnold::{self, AlgebraElement, ArnoldError, GenParity, OmegaMonomial};
use crate::linalg::SparseRationalMatrix;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GammaError {
    #[error("table entry {entry} exceeds target size {l}")]
    EntryOutOfRange { entry: u32, l: u32 },
    #[error("table length {len} does not match source size {k}")]
    TableLength { len: usize, k: u32 },
    #[error("cannot compose: left target {left} differs from right source {right}")]
    ComposeMismatch { left: u32, right: u32 },
    #[error("oracle restricted to sources and targets of size at most {max}, got {got}")]
    OracleScale { got: u32, max: u32 },
    #[error("cannot parse pointed map `{0}`")]
    Parse(String),
    #[error(transparent)]
    Arnold(#[from] ArnoldError),
}

/// A basepoint-preserving map `k+ -> l+`, stored as the table of images of
/// the non-base elements `1..=k`; entry 0 is the basepoint.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointedMap {
    k: u32,
    l: u32,
    table: Vec<u32>,
}

impl PointedMap {
    pub fn new(k: u32, l: u32, table: Vec<u32>) -> Result<Self, GammaError> {
        if table.len() != k as usize {
            return Err(GammaError::TableLength { len: table.len(), k });
        }
        if let Some(&bad) = table.iter().find(|&&v| v > l) {
            return Err(GammaError::EntryOutOfRange { entry: bad, l });
        }
        Ok(Self { k, l, table })
    }

    pub fn identity(k: u32) -> Self {
        Self { k, l: k, table: (1..=k).collect() }
    }

    pub fn constant_basepoint(k: u32, l: u32) -> Self {
        Self { k, l, table: vec![0; k as usize] }
    }

    pub fn source_size(&self) -> u32 {
        self.k
    }

    pub fn target_size(&self) -> u32 {
        self.l
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    /// Image of the element `id`; the basepoint 0 absorbs.
    pub fn apply(&self, id: u32) -> u32 {
        if id == 0 {
            0
        } else {
            self.table[id as usize - 1]
        }
    }

    /// `other` after `self`, i.e. the composite `self.then(other) = other . self`.
    pub fn then(&self, other: &PointedMap) -> PointedMap {
        compose(self, other).expect("sizes checked by caller")
    }

    /// Fibers over the non-base target elements: `fibers()[j-1] = f^{-1}(j)`.
    pub fn fibers(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); self.l as usize];
        for (i, &v) in self.table.iter().enumerate() {
            if v > 0 {
                out[v as usize - 1].push(i as u32 + 1);
            }
        }
        out
    }

    /// Fixture format `k l : i1 i2 ... ik`.
    pub fn parse(text: &str) -> Result<Self, GammaError> {
        let (head, tail) =
            text.split_once(':').ok_or_else(|| GammaError::Parse(text.to_string()))?;
        let mut sizes = head.split_whitespace();
        let k: u32 = sizes
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| GammaError::Parse(text.to_string()))?;
        let l: u32 = sizes
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| GammaError::Parse(text.to_string()))?;
        let table: Vec<u32> = tail
            .split_whitespace()
            .map(|s| s.parse().map_err(|_| GammaError::Parse(text.to_string())))
            .collect::<Result<_, _>>()?;
        Self::new(k, l, table)
    }
}

impl fmt::Display for PointedMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} :", self.k, self.l)?;
        for v in &self.table {
            write!(f, " {v}")?;
        }
        Ok(())
    }
}

/// Composite `g . f`; requires `f.l == g.k`. The basepoint absorbs.
pub fn compose(f: &PointedMap, g: &PointedMap) -> Result<PointedMap, GammaError> {
    if f.l != g.k {
        return Err(GammaError::ComposeMismatch { left: f.l, right: g.k });
    }
    let table = f.table.iter().map(|&v| g.apply(v)).collect();
    PointedMap::new(f.k, g.l, table)
}

/// Image of a basis monomial under the algebra map induced by `f`.
///
/// The common case of strictly order-preserving images is recognized and
/// returns a single monomial without running the rewriting engine.
pub fn apply_to_monomial(
    f: &PointedMap,
    m: &OmegaMonomial,
    parity: GenParity,
) -> Result<AlgebraElement, GammaError> {
    let l = f.l;
    let t = m.word_length();
    let mut raw = Vec::with_capacity(t as usize);
    let mut fast = true;
    let mut last_b = 0u32;
    for &(a, b) in m.factors() {
        let (fa, fb) = (f.apply(a), f.apply(b));
        if fa == 0 || fb == 0 || fa == fb {
            return Ok(AlgebraElement::zero(l, t));
        }
        raw.push((fa, fb));
        if !(fa < fb && fb > last_b) {
            fast = false;
        }
        last_b = fb;
    }
    if fast {
        return Ok(AlgebraElement::from_monomial(OmegaMonomial::new(l, raw)?));
    }
    Ok(arnold::normal_form(l, &raw, parity)?)
}

/// The matrix of the induced algebra map in word length `t`, columns indexed
/// by the source basis and rows by the target basis.
#[derive(Debug, Clone)]
pub struct InducedMap {
    pub f: PointedMap,
    pub t: u32,
    pub matrix: SparseRationalMatrix,
}

/// Assembles the induced map column by column over `enumerate_basis(k, t)`.
pub fn induced_map(f: &PointedMap, t: u32, parity: GenParity) -> Result<InducedMap, GammaError> {
    let source = arnold::enumerate_basis(f.k, t);
    let target = arnold::enumerate_basis(f.l, t);
    let index: HashMap<&OmegaMonomial, u32> =
        target.iter().enumerate().map(|(i, m)| (m, i as u32)).collect();
    let mut triplets = Vec::new();
    for (col, m) in source.iter().enumerate() {
        let image = apply_to_monomial(f, m, parity)?;
        for (mono, coeff) in image.sorted_terms() {
            if !coeff.is_zero() {
                triplets.push((index[&mono], col as u32, coeff));
            }
        }
    }
    let matrix = SparseRationalMatrix::from_triplets(target.len(), source.len(), triplets)
        .expect("indices in range by construction");
    Ok(InducedMap { f: f.clone(), t, matrix })
}

/// Concurrent cache of induced-map matrices keyed by `(f, t, parity)`.
/// Entries are idempotent; a racing write simply wins last.
#[derive(Default)]
pub struct GammaCache {
    inner: RwLock<HashMap<(PointedMap, u32, GenParity), Arc<InducedMap>>>,
}

impl GammaCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn induced(
        &self,
        f: &PointedMap,
        t: u32,
        parity: GenParity,
    ) -> Result<Arc<InducedMap>, GammaError> {
        let key = (f.clone(), t, parity);
        if let Some(hit) = self.inner.read().expect("cache lock").get(&key) {
            return Ok(hit.clone());
        }
        let value = Arc::new(induced_map(f, t, parity)?);
        self.inner.write().expect("cache lock").insert(key, value.clone());
        Ok(value)
    }

    pub fn len(&self) -> usize {
        self.inner.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Maximum source/target size accepted by the homology-side oracle.
pub const ORACLE_MAX_SIZE: u32 = 4;

/// Independent homology-side structure map, expressed in the basis dual to
/// the admissible monomials: rows over `enumerate_basis(k, t)`, columns over
/// `enumerate_basis(l, t)` for `f : k+ -> l+`.
///
/// The map acts on products of iterated brackets by the substitution
/// `x_j -> prod_{i in f^{-1}(j)} x_i` extended by the Leibniz rule, with
/// `[a, 1] = 0` and bare factors appended for elements sent to the
/// basepoint. Used only at test scale.
pub fn leibniz_oracle(
    f: &PointedMap,
    t: u32,
    parity: GenParity,
) -> Result<SparseRationalMatrix, GammaError> {
    let max = f.k.max(f.l);
    if max > ORACLE_MAX_SIZE {
        return Err(GammaError::OracleScale { got: max, max: ORACLE_MAX_SIZE });
    }
    Ok(crate::poisson::structure_matrix_dual(f, t, parity))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn rat(v: i64) -> BigRational {
        BigRational::from(BigInt::from(v))
    }

    fn random_map(rng: &mut StdRng, k: u32, l: u32) -> PointedMap {
        let table = (0..k).map(|_| rng.random_range(0..=l)).collect();
        PointedMap::new(k, l, table).unwrap()
    }

    #[test]
    fn compose_identity_and_constants() {
        let f = PointedMap::new(2, 3, vec![3, 1]).unwrap();
        assert_eq!(compose(&PointedMap::identity(2), &f).unwrap(), f);
        assert_eq!(compose(&f, &PointedMap::identity(3)).unwrap(), f);
        let c = PointedMap::constant_basepoint(3, 2);
        assert_eq!(
            compose(&f, &c).unwrap(),
            PointedMap::constant_basepoint(2, 2)
        );
    }

    #[test]
    fn compose_is_table_lookup() {
        // (1->1, 2->1): 2+ -> 1+ followed by (1->2): 1+ -> 2+
        let f = PointedMap::new(2, 1, vec![1, 1]).unwrap();
        let g = PointedMap::new(1, 2, vec![2]).unwrap();
        let h = compose(&f, &g).unwrap();
        assert_eq!(h.table(), &[2, 2]);
        let bad = PointedMap::new(3, 3, vec![1, 2, 3]).unwrap();
        assert!(matches!(compose(&f, &bad), Err(GammaError::ComposeMismatch { .. })));
    }

    #[test]
    fn pointed_map_validation_and_text_format() {
        assert!(PointedMap::new(2, 1, vec![2, 0]).is_err());
        assert!(PointedMap::new(2, 3, vec![1]).is_err());
        let f = PointedMap::new(3, 2, vec![0, 2, 1]).unwrap();
        let text = f.to_string();
        assert_eq!(text, "3 2 : 0 2 1");
        assert_eq!(PointedMap::parse(&text).unwrap(), f);
    }

    #[test]
    fn induced_identity_is_identity_matrix() {
        let id = PointedMap::identity(3);
        let ind = induced_map(&id, 1, GenParity::Even).unwrap();
        assert_eq!(ind.matrix, SparseRationalMatrix::identity(3));
    }

    #[test]
    fn induced_collision_map_is_zero_in_positive_degree() {
        let f = PointedMap::new(2, 1, vec![1, 1]).unwrap();
        let ind = induced_map(&f, 1, GenParity::Even).unwrap();
        assert_eq!(ind.matrix.rows(), 0); // target has no word-length-1 classes
        assert!(ind.matrix.is_zero());
    }

    #[test]
    fn induced_swap_scales_by_orientation_sign() {
        let swap = PointedMap::new(2, 2, vec![2, 1]).unwrap();
        for (parity, expected) in [(GenParity::Even, rat(-1)), (GenParity::Odd, rat(1))] {
            let ind = induced_map(&swap, 1, parity).unwrap();
            assert_eq!(ind.matrix.column(0), &[(0u32, expected.clone())]);
        }
    }

    #[test]
    fn functoriality_on_random_composable_pairs() {
        let mut rng = StdRng::seed_from_u64(0xF00D);
        for trial in 0..200 {
            let a = rng.random_range(0..=6u32);
            let b = rng.random_range(0..=6u32);
            let c = rng.random_range(0..=6u32);
            let t = rng.random_range(0..=3u32);
            let parity = if rng.random_bool(0.5) { GenParity::Even } else { GenParity::Odd };
            let f = random_map(&mut rng, a, b);
            let g = random_map(&mut rng, b, c);
            let fg = compose(&f, &g).unwrap();
            let lhs = induced_map(&fg, t, parity).unwrap().matrix;
            let rhs = induced_map(&g, t, parity)
                .unwrap()
                .matrix
                .mul(&induced_map(&f, t, parity).unwrap().matrix)
                .unwrap();
            assert_eq!(lhs, rhs, "trial {trial}");
        }
    }

    #[test]
    fn algebra_map_property_on_random_elements() {
        let mut rng = StdRng::seed_from_u64(0xBEEF);
        for _ in 0..100 {
            let k = rng.random_range(2..=5u32);
            let l = rng.random_range(1..=5u32);
            let parity = if rng.random_bool(0.5) { GenParity::Even } else { GenParity::Odd };
            let f = random_map(&mut rng, k, l);
            let basis1 = arnold::enumerate_basis(k, 1);
            if basis1.is_empty() {
                continue;
            }
            let x = basis1[rng.random_range(0..basis1.len())].clone();
            let y = basis1[rng.random_range(0..basis1.len())].clone();
            let xy = arnold::multiply(
                &AlgebraElement::from_monomial(x.clone()),
                &AlgebraElement::from_monomial(y.clone()),
                parity,
            )
            .unwrap();
            // push the product through f
            let mut image_of_product = AlgebraElement::zero(l, 2);
            for (m, c) in xy.sorted_terms() {
                let mut img = apply_to_monomial(&f, &m, parity).unwrap();
                img.scale(&c);
                image_of_product.add(&img);
            }
            // multiply the images
            let fx = apply_to_monomial(&f, &x, parity).unwrap();
            let fy = apply_to_monomial(&f, &y, parity).unwrap();
            let product_of_images = arnold::multiply(&fx, &fy, parity).unwrap();
            assert_eq!(image_of_product, product_of_images);
        }
    }

    #[test]
    fn relations_map_to_zero() {
        let mut rng = StdRng::seed_from_u64(0x0DDBA11);
        for _ in 0..100 {
            let k = rng.random_range(3..=6u32);
            let l = rng.random_range(1..=6u32);
            let parity = if rng.random_bool(0.5) { GenParity::Even } else { GenParity::Odd };
            let f = random_map(&mut rng, k, l);
            // random Arnold relation instance on distinct i, j, kk
            let mut idx = [0u32; 3];
            idx[0] = rng.random_range(1..=k);
            loop {
                idx[1] = rng.random_range(1..=k);
                if idx[1] != idx[0] {
                    break;
                }
            }
            loop {
                idx[2] = rng.random_range(1..=k);
                if idx[2] != idx[0] && idx[2] != idx[1] {
                    break;
                }
            }
            let [i, j, kk] = idx;
            let mut total = AlgebraElement::zero(l, 2);
            for (p, q) in [(i, j), (j, kk), (kk, i)] {
                // cyclic product w(p,q) w(q,r)
                let r = if (p, q) == (i, j) {
                    kk
                } else if (p, q) == (j, kk) {
                    i
                } else {
                    j
                };
                let raw = [(f.apply(p), f.apply(q)), (f.apply(q), f.apply(r))];
                if raw.iter().any(|&(x, y)| x > l || y > l) {
                    unreachable!();
                }
                let mapped: Vec<(u32, u32)> = raw.to_vec();
                if mapped.iter().any(|&(x, y)| x == 0 || y == 0 || x == y) {
                    continue; // term already zero
                }
                let nf = arnold::normal_form(l, &mapped, parity).unwrap();
                total.add(&nf);
            }
            assert!(total.is_zero(), "Arnold relation image must vanish");
        }
    }

    #[test]
    fn cache_is_idempotent() {
        let cache = GammaCache::new();
        let f = PointedMap::new(3, 3, vec![2, 2, 0]).unwrap();
        let a = cache.induced(&f, 2, GenParity::Even).unwrap();
        let b = cache.induced(&f, 2, GenParity::Even).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(cache.len(), 1);
    }

    #[test]
    fn oracle_rejects_large_sizes() {
        let f = PointedMap::identity(5);
        assert!(matches!(
            leibniz_oracle(&f, 1, GenParity::Even),
            Err(GammaError::OracleScale { .. })
        ));
    }
}
