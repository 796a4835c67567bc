//! The graded-commutative algebra of ordered configuration spaces of points
//! in `R^d`, rational coefficients, in its quadratic presentation: one
//! generator `w(a,b)` of degree `d-1` per pair `1 <= a < b <= n`, subject to
//!
//! * orientation: `w(b,a) = (-1)^d w(a,b)`,
//! * square-zero: `w(a,b)^2 = 0`,
//! * the three-term Arnold relation
//!   `w(i,j)w(j,k) + w(j,k)w(k,i) + w(k,i)w(i,j) = 0`.
//!
//! The admissible monomials (second indices strictly increasing) form a
//! basis; their count per word length is the coefficient of `x^t` in
//! `prod_{i=1}^{n-1} (1 + i x)`, which doubles as an enumeration oracle.
//! Index `0` is reserved for a basepoint and absorbs every generator to zero.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArnoldError {
    #[error("index {index} outside 0..={n}")]
    IndexOutOfRange { index: u32, n: u32 },
    #[error("point count mismatch: {left} vs {right}")]
    PointCountMismatch { left: u32, right: u32 },
    #[error("not an admissible monomial: {0}")]
    NotAdmissible(String),
    #[error("cannot parse monomial `{0}`")]
    Parse(String),
}

/// Parity of the generator degree `d-1`. Everything sign-related depends on
/// `d` only through this value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum GenParity {
    Even,
    Odd,
}

impl GenParity {
    pub fn from_ambient_dim(d: u32) -> Self {
        if (d - 1) % 2 == 0 {
            GenParity::Even
        } else {
            GenParity::Odd
        }
    }

    /// Generators anticommute exactly when their degree `d-1` is odd.
    pub fn generators_anticommute(self) -> bool {
        matches!(self, GenParity::Odd)
    }

    /// Sign `(-1)^d` picked up by flipping the indices of one generator.
    pub fn orientation_sign(self) -> i64 {
        match self {
            GenParity::Even => -1, // d odd
            GenParity::Odd => 1,   // d even
        }
    }

    /// Koszul sign for transposing two adjacent generators.
    pub fn swap_sign(self) -> i64 {
        match self {
            GenParity::Even => 1,
            GenParity::Odd => -1,
        }
    }
}

/// An admissible basis monomial: factors `(a, b)` with `a < b` and the
/// second indices strictly increasing along the factor list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OmegaMonomial {
    n: u32,
    factors: Vec<(u32, u32)>,
}

impl OmegaMonomial {
    pub fn unit(n: u32) -> Self {
        Self { n, factors: Vec::new() }
    }

    pub fn new(n: u32, factors: Vec<(u32, u32)>) -> Result<Self, ArnoldError> {
        let m = Self { n, factors };
        m.check_admissible()?;
        Ok(m)
    }

    fn check_admissible(&self) -> Result<(), ArnoldError> {
        let mut last_b = 0;
        for &(a, b) in &self.factors {
            if a == 0 || b == 0 || a > self.n || b > self.n {
                return Err(ArnoldError::IndexOutOfRange { index: a.max(b), n: self.n });
            }
            if a >= b || b <= last_b {
                return Err(ArnoldError::NotAdmissible(self.to_string()));
            }
            last_b = b;
        }
        Ok(())
    }

    pub fn point_count(&self) -> u32 {
        self.n
    }

    pub fn word_length(&self) -> u32 {
        self.factors.len() as u32
    }

    pub fn factors(&self) -> &[(u32, u32)] {
        &self.factors
    }

    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        self.factors.iter().flat_map(|&(a, b)| [a, b])
    }

    /// Deterministic basis order: lexicographic on the factor sequence with
    /// pairs compared by `(b, a)`.
    fn order_key(&self) -> Vec<(u32, u32)> {
        self.factors.iter().map(|&(a, b)| (b, a)).collect()
    }
}

impl PartialOrd for OmegaMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OmegaMonomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

impl fmt::Display for OmegaMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> =
            self.factors.iter().map(|(a, b)| format!("w({a},{b})")).collect();
        write!(f, "{}", parts.join("*"))
    }
}

impl OmegaMonomial {
    /// Parses the CLI/fixture text format `w(a,b)*w(c,d)`; `1` is the unit.
    pub fn parse(text: &str, n: u32) -> Result<Self, ArnoldError> {
        let text = text.trim();
        if text == "1" {
            return Ok(Self::unit(n));
        }
        let mut factors = Vec::new();
        for part in text.split('*') {
            let part = part.trim();
            let inner = part
                .strip_prefix("w(")
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| ArnoldError::Parse(text.to_string()))?;
            let mut it = inner.split(',');
            let a: u32 = it
                .next()
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| ArnoldError::Parse(text.to_string()))?;
            let b: u32 = it
                .next()
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| ArnoldError::Parse(text.to_string()))?;
            factors.push((a, b));
        }
        Self::new(n, factors)
    }
}

/// A finite rational combination of admissible monomials sharing one point
/// count and word length. The zero element stores no terms.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    n: u32,
    t: u32,
    terms: HashMap<OmegaMonomial, BigRational>,
}

impl AlgebraElement {
    pub fn zero(n: u32, t: u32) -> Self {
        Self { n, t, terms: HashMap::new() }
    }

    pub fn unit(n: u32) -> Self {
        Self::from_monomial(OmegaMonomial::unit(n))
    }

    pub fn from_monomial(m: OmegaMonomial) -> Self {
        let (n, t) = (m.point_count(), m.word_length());
        let mut terms = HashMap::new();
        terms.insert(m, BigRational::one());
        Self { n, t, terms }
    }

    pub fn point_count(&self) -> u32 {
        self.n
    }

    pub fn word_length(&self) -> u32 {
        self.t
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &OmegaMonomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add_term(&mut self, m: OmegaMonomial, c: BigRational) {
        debug_assert_eq!(m.point_count(), self.n);
        debug_assert_eq!(m.word_length(), self.t);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            // re-borrow to remove; cheap since zero sums are rare
            let dead: Vec<OmegaMonomial> = self
                .terms
                .iter()
                .filter(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .collect();
            for k in dead {
                self.terms.remove(&k);
            }
        }
    }

    pub fn add(&mut self, other: &AlgebraElement) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn scale(&mut self, c: &BigRational) {
        if c.is_zero() {
            self.terms.clear();
            return;
        }
        for v in self.terms.values_mut() {
            *v *= c;
        }
    }

    /// Terms in the deterministic basis order.
    pub fn sorted_terms(&self) -> Vec<(OmegaMonomial, BigRational)> {
        let mut out: Vec<_> = self.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        out.sort_by(|x, y| x.0.cmp(&y.0));
        out
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{c} {m}")?;
        }
        Ok(())
    }
}

/// Dimension of the word-length `t` part of the algebra on `n` points: the
/// coefficient of `x^t` in `prod_{i=1}^{n-1} (1 + i x)`.
pub fn dimension(n: u32, t: u32) -> u128 {
    let t = t as usize;
    let mut coeffs = vec![0u128; t + 1];
    coeffs[0] = 1;
    for i in 1..n as u128 {
        for k in (1..=t).rev() {
            coeffs[k] += i * coeffs[k - 1];
        }
    }
    coeffs[t]
}

/// All admissible monomials on `n` points with `t` factors, in the
/// deterministic basis order.
pub fn enumerate_basis(n: u32, t: u32) -> Vec<OmegaMonomial> {
    let mut out = Vec::new();
    let mut stack: Vec<(u32, u32)> = Vec::new();
    fn recurse(n: u32, t: u32, min_b: u32, stack: &mut Vec<(u32, u32)>, out: &mut Vec<OmegaMonomial>) {
        if stack.len() == t as usize {
            out.push(OmegaMonomial { n, factors: stack.clone() });
            return;
        }
        let remaining = t as usize - stack.len();
        for b in min_b..=n {
            // the later factors need strictly larger second indices
            if (n - b) as usize + 1 < remaining {
                break;
            }
            for a in 1..b {
                stack.push((a, b));
                recurse(n, t, b + 1, stack, out);
                stack.pop();
            }
        }
    }
    recurse(n, t, 2, &mut stack, &mut out);
    out
}

/// Strategy hook for the rewriting loop: given the number of available
/// rewrite sites, returns which one to reduce next. The canonical strategy
/// always returns the last site (largest repeated second index).
pub trait RewriteStrategy {
    fn pick(&mut self, sites: usize) -> usize;
}

/// Always eliminates the pair sharing the largest repeated second index.
pub struct CanonicalStrategy;

impl RewriteStrategy for CanonicalStrategy {
    fn pick(&mut self, sites: usize) -> usize {
        sites - 1
    }
}

impl<F: FnMut(usize) -> usize> RewriteStrategy for F {
    fn pick(&mut self, sites: usize) -> usize {
        self(sites)
    }
}

struct Word {
    factors: Vec<(u32, u32)>,
    coef: BigRational,
}

/// Expands an arbitrary product of (possibly unoriented, possibly repeating)
/// generator pairs in the admissible basis.
///
/// Any pair with `a == b`, and any pair touching the basepoint index `0`,
/// yields the zero element; an index above `n` is an error.
pub fn normal_form(
    n: u32,
    raw: &[(u32, u32)],
    parity: GenParity,
) -> Result<AlgebraElement, ArnoldError> {
    normal_form_with(n, raw, parity, &mut CanonicalStrategy)
}

/// `normal_form` with an explicit rewrite-site strategy; used to exercise
/// confluence with randomized reduction orders.
pub fn normal_form_with(
    n: u32,
    raw: &[(u32, u32)],
    parity: GenParity,
    strategy: &mut dyn RewriteStrategy,
) -> Result<AlgebraElement, ArnoldError> {
    let t = raw.len() as u32;
    let mut result = AlgebraElement::zero(n, t);

    // Orientation pass: normalize a < b, absorb basepoint and diagonal.
    let mut factors = Vec::with_capacity(raw.len());
    let mut coef = BigRational::one();
    for &(a, b) in raw {
        if a > n || b > n {
            return Err(ArnoldError::IndexOutOfRange { index: a.max(b), n });
        }
        if a == 0 || b == 0 || a == b {
            return Ok(result); // zero element
        }
        if a > b {
            coef *= BigRational::from(BigInt::from(parity.orientation_sign()));
            factors.push((b, a));
        } else {
            factors.push((a, b));
        }
    }

    let mut worklist = vec![Word { factors, coef }];
    while let Some(mut word) = worklist.pop() {
        // Sort factors by (second, first) index, tracking the Koszul sign.
        let mut swaps = 0usize;
        for i in 1..word.factors.len() {
            let mut j = i;
            while j > 0 && pair_key(word.factors[j - 1]) > pair_key(word.factors[j]) {
                word.factors.swap(j - 1, j);
                swaps += 1;
                j -= 1;
            }
        }
        if parity.generators_anticommute() && swaps % 2 == 1 {
            word.coef = -word.coef;
        }

        // Square-zero: identical factors are adjacent after sorting.
        if word.factors.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }

        // Rewrite sites: adjacent factors sharing a second index.
        let sites: Vec<usize> = (0..word.factors.len().saturating_sub(1))
            .filter(|&i| word.factors[i].1 == word.factors[i + 1].1)
            .collect();
        if sites.is_empty() {
            let monomial = OmegaMonomial { n, factors: word.factors };
            debug_assert!(monomial.check_admissible().is_ok());
            result.add_term(monomial, word.coef);
            continue;
        }

        // Oriented Arnold rewrite at the chosen site:
        //   w(a,b) w(c,b) = w(a,c) w(c,b) - w(a,c) w(a,b)   (a < c < b)
        // which replaces the repeated second index b by the smaller c.
        let site = sites[strategy.pick(sites.len())];
        let (a, b) = word.factors[site];
        let (c, _) = word.factors[site + 1];
        debug_assert!(a < c && c < b);

        let mut first = word.factors.clone();
        first[site] = (a, c);
        first[site + 1] = (c, b);
        worklist.push(Word { factors: first, coef: word.coef.clone() });

        let mut second = word.factors;
        second[site] = (a, c);
        second[site + 1] = (a, b);
        worklist.push(Word { factors: second, coef: -word.coef });
    }
    Ok(result)
}

fn pair_key((a, b): (u32, u32)) -> (u32, u32) {
    (b, a)
}

/// Bilinear product: concatenate factor lists and take normal forms.
pub fn multiply(
    x: &AlgebraElement,
    y: &AlgebraElement,
    parity: GenParity,
) -> Result<AlgebraElement, ArnoldError> {
    if x.n != y.n {
        return Err(ArnoldError::PointCountMismatch { left: x.n, right: y.n });
    }
    let mut result = AlgebraElement::zero(x.n, x.t + y.t);
    for (mx, cx) in &x.terms {
        for (my, cy) in &y.terms {
            let mut raw = mx.factors.clone();
            raw.extend_from_slice(&my.factors);
            let mut nf = normal_form(x.n, &raw, parity)?;
            nf.scale(&(cx * cy));
            result.add(&nf);
        }
    }
    Ok(result)
}

/// Parses an element in the fixture format: one `coef monomial` line per
/// term, coefficients as exact rationals `p/q`.
pub fn parse_element(text: &str, n: u32, t: u32) -> Result<AlgebraElement, ArnoldError> {
    let mut out = AlgebraElement::zero(n, t);
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line == "0" {
            continue;
        }
        let (coef, mono) =
            line.split_once(' ').ok_or_else(|| ArnoldError::Parse(line.to_string()))?;
        let coef: BigRational =
            coef.parse().map_err(|_| ArnoldError::Parse(line.to_string()))?;
        let mono = OmegaMonomial::parse(mono, n)?;
        if mono.word_length() != t {
            return Err(ArnoldError::NotAdmissible(line.to_string()));
        }
        out.add_term(mono, coef);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn rat(v: i64) -> BigRational {
        BigRational::from(BigInt::from(v))
    }

    #[test]
    fn dimension_small_values() {
        assert_eq!(dimension(2, 0), 1);
        assert_eq!(dimension(3, 2), 2);
        assert_eq!(dimension(8, 4), 6769);
        assert_eq!(dimension(5, 5), 0); // t >= n
        assert_eq!(dimension(0, 0), 1);
        assert_eq!(dimension(0, 1), 0);
    }

    #[test]
    fn basis_enumeration_matches_dimension() {
        for n in 0..=8 {
            for t in 0..=7 {
                assert_eq!(
                    enumerate_basis(n, t).len() as u128,
                    dimension(n, t),
                    "n={n} t={t}"
                );
            }
        }
    }

    #[test]
    fn basis_order_n3_t1() {
        let basis = enumerate_basis(3, 1);
        let shown: Vec<String> = basis.iter().map(|m| m.to_string()).collect();
        assert_eq!(shown, vec!["w(1,2)", "w(1,3)", "w(2,3)"]);
    }

    #[test]
    fn basis_empty_when_no_pairs() {
        assert!(enumerate_basis(1, 1).is_empty());
        assert_eq!(enumerate_basis(4, 3).len(), 6);
    }

    #[test]
    fn square_is_zero() {
        for parity in [GenParity::Even, GenParity::Odd] {
            let nf = normal_form(3, &[(1, 2), (1, 2)], parity).unwrap();
            assert!(nf.is_zero());
        }
    }

    #[test]
    fn orientation_flip() {
        // w(2,1) = (-1)^d w(1,2)
        let even = normal_form(2, &[(2, 1)], GenParity::Even).unwrap(); // d odd
        let m12 = OmegaMonomial::new(2, vec![(1, 2)]).unwrap();
        assert_eq!(even.coefficient(&m12), rat(-1));
        let odd = normal_form(2, &[(2, 1)], GenParity::Odd).unwrap(); // d even
        assert_eq!(odd.coefficient(&m12), rat(1));
    }

    #[test]
    fn arnold_rewrite_of_shared_second_index() {
        // w(1,3) w(2,3) = w(1,2)w(2,3) - w(1,2)w(1,3), both parities.
        for parity in [GenParity::Even, GenParity::Odd] {
            let nf = normal_form(3, &[(1, 3), (2, 3)], parity).unwrap();
            let path = OmegaMonomial::new(3, vec![(1, 2), (2, 3)]).unwrap();
            let star = OmegaMonomial::new(3, vec![(1, 2), (1, 3)]).unwrap();
            assert_eq!(nf.coefficient(&path), rat(1));
            assert_eq!(nf.coefficient(&star), rat(-1));
            assert_eq!(nf.num_terms(), 2);
        }
    }

    #[test]
    fn basepoint_absorbs_and_out_of_range_errors() {
        let nf = normal_form(3, &[(0, 2)], GenParity::Even).unwrap();
        assert!(nf.is_zero());
        assert!(matches!(
            normal_form(3, &[(1, 4)], GenParity::Even),
            Err(ArnoldError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn rank_of_two_factor_products_at_n3_matches_dimension() {
        // Span of all products of two distinct generators at n=3 has rank
        // dimension(3,2) = 2; checked by dense elimination.
        use crate::linalg::{rank, RankPolicy, SparseRationalMatrix};
        for parity in [GenParity::Even, GenParity::Odd] {
            let basis = enumerate_basis(3, 2);
            let index: HashMap<_, _> =
                basis.iter().cloned().enumerate().map(|(i, m)| (m, i as u32)).collect();
            let gens = enumerate_basis(3, 1);
            let mut triplets = Vec::new();
            let mut col = 0u32;
            for g in &gens {
                for h in &gens {
                    if g == h {
                        continue;
                    }
                    let mut raw = g.factors().to_vec();
                    raw.extend_from_slice(h.factors());
                    let nf = normal_form(3, &raw, parity).unwrap();
                    for (m, c) in nf.sorted_terms() {
                        triplets.push((index[&m], col, c));
                    }
                    col += 1;
                }
            }
            let mat = SparseRationalMatrix::from_triplets(2, col as usize, triplets).unwrap();
            assert_eq!(rank(&mat, RankPolicy::Exact, 0).rank, 2);
        }
    }

    #[test]
    fn normal_form_is_idempotent_on_admissible_monomials() {
        for parity in [GenParity::Even, GenParity::Odd] {
            for m in enumerate_basis(5, 3) {
                let nf = normal_form(5, m.factors(), parity).unwrap();
                assert_eq!(nf.num_terms(), 1);
                assert_eq!(nf.coefficient(&m), rat(1));
            }
        }
    }

    #[test]
    fn multiply_by_unit_is_identity() {
        let unit = AlgebraElement::unit(4);
        let m = AlgebraElement::from_monomial(OmegaMonomial::new(4, vec![(1, 3), (2, 4)]).unwrap());
        let p = multiply(&unit, &m, GenParity::Even).unwrap();
        assert_eq!(p, m);
        let p = multiply(&m, &unit, GenParity::Odd).unwrap();
        assert_eq!(p, m);
    }

    #[test]
    fn multiply_rejects_mismatched_point_counts() {
        let x = AlgebraElement::unit(3);
        let y = AlgebraElement::unit(4);
        assert!(matches!(
            multiply(&x, &y, GenParity::Even),
            Err(ArnoldError::PointCountMismatch { .. })
        ));
    }

    fn random_raw(rng: &mut StdRng, n: u32, t: usize) -> Vec<(u32, u32)> {
        (0..t)
            .map(|_| {
                let a = rng.random_range(1..=n);
                let mut b = rng.random_range(1..=n);
                while b == a {
                    b = rng.random_range(1..=n);
                }
                (a, b)
            })
            .collect()
    }

    #[test]
    fn confluence_under_randomized_rewrite_orders() {
        let mut rng = StdRng::seed_from_u64(0xA11CE);
        for trial in 0..500 {
            let n = rng.random_range(2..=6);
            let t = rng.random_range(1..=4usize.min(n as usize));
            let raw = random_raw(&mut rng, n, t);
            let parity = if rng.random_bool(0.5) { GenParity::Even } else { GenParity::Odd };
            let canonical = normal_form(n, &raw, parity).unwrap();
            let mut seed_a = StdRng::seed_from_u64(trial * 2 + 1);
            let mut pick_a = |sites: usize| seed_a.random_range(0..sites);
            let alt_a = normal_form_with(n, &raw, parity, &mut pick_a).unwrap();
            let mut seed_b = StdRng::seed_from_u64(trial * 2 + 2);
            let mut pick_b = |sites: usize| seed_b.random_range(0..sites);
            let alt_b = normal_form_with(n, &raw, parity, &mut pick_b).unwrap();
            assert_eq!(canonical, alt_a, "trial {trial}");
            assert_eq!(alt_a, alt_b, "trial {trial}");
        }
    }

    #[test]
    fn monomial_text_roundtrip() {
        let m = OmegaMonomial::new(5, vec![(1, 2), (2, 4), (3, 5)]).unwrap();
        assert_eq!(m.to_string(), "w(1,2)*w(2,4)*w(3,5)");
        assert_eq!(OmegaMonomial::parse(&m.to_string(), 5).unwrap(), m);
        assert_eq!(OmegaMonomial::parse("1", 3).unwrap(), OmegaMonomial::unit(3));
        let el = parse_element("1/2 w(1,2)\n-3 w(1,3)", 3, 1).unwrap();
        assert_eq!(el.num_terms(), 2);
    }

    fn random_element(rng: &mut StdRng, n: u32, t: u32, parity: GenParity) -> AlgebraElement {
        let mut out = AlgebraElement::zero(n, t);
        for _ in 0..rng.random_range(1..=3) {
            let raw = random_raw(rng, n, t as usize);
            let mut nf = normal_form(n, &raw, parity).unwrap();
            nf.scale(&rat(rng.random_range(-3..=3)));
            out.add(&nf);
        }
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn graded_commutativity(seed in 0u64..5000) {
            let mut rng = StdRng::seed_from_u64(seed);
            let n = rng.random_range(3..=5);
            let tx = rng.random_range(1..=2u32);
            let ty = rng.random_range(1..=2u32);
            let parity = if rng.random_bool(0.5) { GenParity::Even } else { GenParity::Odd };
            let x = random_element(&mut rng, n, tx, parity);
            let y = random_element(&mut rng, n, ty, parity);
            let xy = multiply(&x, &y, parity).unwrap();
            let mut yx = multiply(&y, &x, parity).unwrap();
            // sign (-1)^{t_x t_y (d-1)}
            if parity.generators_anticommute() && (tx * ty) % 2 == 1 {
                yx.scale(&rat(-1));
            }
            prop_assert_eq!(xy, yx);
        }

        #[test]
        fn associativity(seed in 0u64..5000) {
            let mut rng = StdRng::seed_from_u64(seed);
            let n = rng.random_range(3..=5);
            let parity = if rng.random_bool(0.5) { GenParity::Even } else { GenParity::Odd };
            let x = random_element(&mut rng, n, 1, parity);
            let y = random_element(&mut rng, n, 1, parity);
            let z = random_element(&mut rng, n, 1, parity);
            let left = multiply(&multiply(&x, &y, parity).unwrap(), &z, parity).unwrap();
            let right = multiply(&x, &multiply(&y, &z, parity).unwrap(), parity).unwrap();
            prop_assert_eq!(left, right);
        }
    }
}
