//! Invariant suites behind the `verify` command: each suite replays the
//! defining properties of one layer at desk scale and reports a
//! machine-readable pass/fail summary.

use num_traits::{One, Signed};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::arnold::{self, AlgebraElement, GenParity};
use crate::cache::RankCache;
use crate::gamma::{self, PointedMap};
use crate::hochschild::{self, AssembleOptions, EngineConfig, SliceParams};
use crate::linalg::RankPolicy;
use crate::simplicial::{binomial, wedge_model};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Arnold,
    Gamma,
    Simplicial,
    Complex,
    Euler,
    All,
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "arnold" => Ok(Suite::Arnold),
            "gamma" => Ok(Suite::Gamma),
            "simplicial" => Ok(Suite::Simplicial),
            "complex" => Ok(Suite::Complex),
            "euler" => Ok(Suite::Euler),
            "all" => Ok(Suite::All),
            other => Err(format!("unknown suite `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub params: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub checks: Vec<CheckResult>,
    pub passed: usize,
    pub failed: usize,
}

impl VerifyReport {
    fn new(suite: &str, checks: Vec<CheckResult>) -> Self {
        let passed = checks.iter().filter(|c| c.pass).count();
        let failed = checks.len() - passed;
        Self { suite: suite.to_string(), checks, passed, failed }
    }

    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "[{}] {} {} {}\n",
                if c.pass { "pass" } else { "FAIL" },
                self.suite,
                c.name,
                if c.detail.is_empty() { c.params.clone() } else { format!("{} ({})", c.params, c.detail) },
            ));
        }
        out.push_str(&format!("suite {}: {} passed, {} failed\n", self.suite, self.passed, self.failed));
        out
    }
}

/// Options narrowing the desk-scale defaults, mainly for quicker CLI runs.
#[derive(Debug, Clone, Copy, Default)]
pub struct VerifyOptions {
    pub m: Option<u32>,
    pub t_max: Option<u32>,
    pub seed: u64,
}

pub fn run_suite(suite: Suite, opts: VerifyOptions) -> Vec<VerifyReport> {
    match suite {
        Suite::Arnold => vec![arnold_suite(opts)],
        Suite::Gamma => vec![gamma_suite(opts)],
        Suite::Simplicial => vec![simplicial_suite(opts)],
        Suite::Complex => vec![complex_suite(opts)],
        Suite::Euler => vec![euler_suite(opts)],
        Suite::All => vec![
            arnold_suite(opts),
            gamma_suite(opts),
            simplicial_suite(opts),
            complex_suite(opts),
            euler_suite(opts),
        ],
    }
}

fn both_parities() -> [GenParity; 2] {
    [GenParity::Even, GenParity::Odd]
}

pub fn arnold_suite(opts: VerifyOptions) -> VerifyReport {
    let mut checks = Vec::new();
    // basis count against the closed-form polynomial
    let mut pass = true;
    let mut detail = String::new();
    for n in 0..=8u32 {
        for t in 0..=7u32 {
            let count = arnold::enumerate_basis(n, t).len() as u128;
            let expected = arnold::dimension(n, t);
            if count != expected {
                pass = false;
                detail = format!("n={n} t={t}: {count} != {expected}");
            }
        }
    }
    checks.push(CheckResult {
        name: "basis_count_vs_polynomial".into(),
        params: "n<=8, t<=7".into(),
        pass,
        detail,
    });

    // confluence under randomized rewrite orders
    let mut rng = StdRng::seed_from_u64(opts.seed ^ 0xA1);
    let mut pass = true;
    let mut detail = String::new();
    for trial in 0..500u64 {
        let n = rng.random_range(2..=6);
        let t = rng.random_range(1..=4usize);
        let raw: Vec<(u32, u32)> = (0..t)
            .map(|_| {
                let a = rng.random_range(1..=n);
                let mut b = rng.random_range(1..=n);
                while b == a {
                    b = rng.random_range(1..=n);
                }
                (a, b)
            })
            .collect();
        let parity = if rng.random_bool(0.5) { GenParity::Even } else { GenParity::Odd };
        let canonical = arnold::normal_form(n, &raw, parity).unwrap();
        let mut picker_rng = StdRng::seed_from_u64(opts.seed ^ trial);
        let mut picker = |sites: usize| picker_rng.random_range(0..sites);
        let alternative = arnold::normal_form_with(n, &raw, parity, &mut picker).unwrap();
        if canonical != alternative {
            pass = false;
            detail = format!("trial {trial}: orders disagree");
            break;
        }
    }
    checks.push(CheckResult {
        name: "confluence_random_orders".into(),
        params: "500 products, n<=6, t<=4".into(),
        pass,
        detail,
    });

    // graded commutativity and associativity on random elements
    let mut rng = StdRng::seed_from_u64(opts.seed ^ 0xA2);
    let mut pass = true;
    let mut detail = String::new();
    for trial in 0..200 {
        let n = rng.random_range(3..=5);
        let parity = if rng.random_bool(0.5) { GenParity::Even } else { GenParity::Odd };
        let tx = rng.random_range(1..=2);
        let ty = rng.random_range(1..=2);
        let x = random_element(&mut rng, n, tx, parity);
        let y = random_element(&mut rng, n, ty, parity);
        let xy = arnold::multiply(&x, &y, parity).unwrap();
        let mut yx = arnold::multiply(&y, &x, parity).unwrap();
        if parity.generators_anticommute() && (x.word_length() * y.word_length()) % 2 == 1 {
            yx.scale(&num_rational::BigRational::from(num_bigint::BigInt::from(-1)));
        }
        if xy != yx {
            pass = false;
            detail = format!("commutativity failed at trial {trial}");
            break;
        }
        let z = random_element(&mut rng, n, 1, parity);
        let left = arnold::multiply(&xy, &z, parity).unwrap();
        let right = arnold::multiply(&x, &arnold::multiply(&y, &z, parity).unwrap(), parity).unwrap();
        if left != right {
            pass = false;
            detail = format!("associativity failed at trial {trial}");
            break;
        }
    }
    checks.push(CheckResult {
        name: "graded_commutativity_and_associativity".into(),
        params: "200 random pairs/triples".into(),
        pass,
        detail,
    });

    // normal form idempotence on admissible monomials
    let mut pass = true;
    let mut detail = String::new();
    'outer: for parity in both_parities() {
        for n in 0..=6u32 {
            for t in 0..=4u32 {
                for m in arnold::enumerate_basis(n, t) {
                    let nf = arnold::normal_form(n, m.factors(), parity).unwrap();
                    if nf.num_terms() != 1 || !nf.coefficient(&m).is_one() {
                        pass = false;
                        detail = format!("monomial {m} not fixed");
                        break 'outer;
                    }
                }
            }
        }
    }
    checks.push(CheckResult {
        name: "normal_form_idempotent".into(),
        params: "all admissible monomials, n<=6, t<=4".into(),
        pass,
        detail,
    });

    VerifyReport::new("arnold", checks)
}

fn random_element(rng: &mut StdRng, n: u32, t: u32, parity: GenParity) -> AlgebraElement {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    let mut out = AlgebraElement::zero(n, t);
    for _ in 0..rng.random_range(1..=3) {
        let raw: Vec<(u32, u32)> = (0..t)
            .map(|_| {
                let a = rng.random_range(1..=n);
                let mut b = rng.random_range(1..=n);
                while b == a {
                    b = rng.random_range(1..=n);
                }
                (a, b)
            })
            .collect();
        let mut nf = arnold::normal_form(n, &raw, parity).unwrap();
        nf.scale(&BigRational::from(BigInt::from(rng.random_range(-3i64..=3))));
        out.add(&nf);
    }
    out
}

pub fn gamma_suite(opts: VerifyOptions) -> VerifyReport {
    use num_traits::Zero;
    let mut checks = Vec::new();

    // functoriality on random composable pairs
    let mut rng = StdRng::seed_from_u64(opts.seed ^ 0xB1);
    let mut pass = true;
    let mut detail = String::new();
    for trial in 0..200 {
        let a = rng.random_range(0..=6u32);
        let b = rng.random_range(0..=6u32);
        let c = rng.random_range(0..=6u32);
        let t = rng.random_range(0..=3u32);
        let parity = if rng.random_bool(0.5) { GenParity::Even } else { GenParity::Odd };
        let f = random_map(&mut rng, a, b);
        let g = random_map(&mut rng, b, c);
        let gf = gamma::compose(&f, &g).unwrap();
        let lhs = gamma::induced_map(&gf, t, parity).unwrap().matrix;
        let rhs = gamma::induced_map(&g, t, parity)
            .unwrap()
            .matrix
            .mul(&gamma::induced_map(&f, t, parity).unwrap().matrix)
            .unwrap();
        if lhs != rhs {
            pass = false;
            detail = format!("trial {trial}: matrix(g.f) != matrix(g) matrix(f)");
            break;
        }
    }
    checks.push(CheckResult {
        name: "functoriality".into(),
        params: "200 composable pairs, sizes<=6, t<=3, both parities".into(),
        pass,
        detail,
    });

    // ring-map property: images of products equal products of images
    let mut rng = StdRng::seed_from_u64(opts.seed ^ 0xB3);
    let mut pass = true;
    let mut detail = String::new();
    for trial in 0..150 {
        let k = rng.random_range(2..=5u32);
        let l = rng.random_range(1..=5u32);
        let parity = if rng.random_bool(0.5) { GenParity::Even } else { GenParity::Odd };
        let f = random_map(&mut rng, k, l);
        let basis = arnold::enumerate_basis(k, 1);
        if basis.is_empty() {
            continue;
        }
        let x = basis[rng.random_range(0..basis.len())].clone();
        let y = basis[rng.random_range(0..basis.len())].clone();
        let product = arnold::multiply(
            &AlgebraElement::from_monomial(x.clone()),
            &AlgebraElement::from_monomial(y.clone()),
            parity,
        )
        .unwrap();
        let mut image_of_product = AlgebraElement::zero(l, 2);
        for (mono, coef) in product.sorted_terms() {
            let mut img = gamma::apply_to_monomial(&f, &mono, parity).unwrap();
            img.scale(&coef);
            image_of_product.add(&img);
        }
        let fx = gamma::apply_to_monomial(&f, &x, parity).unwrap();
        let fy = gamma::apply_to_monomial(&f, &y, parity).unwrap();
        let product_of_images = arnold::multiply(&fx, &fy, parity).unwrap();
        if image_of_product != product_of_images {
            pass = false;
            detail = format!("trial {trial}: ring-map property violated");
            break;
        }
    }
    checks.push(CheckResult {
        name: "algebra_map_property".into(),
        params: "150 random generator products, sizes<=5, both parities".into(),
        pass,
        detail,
    });

    // relation images vanish
    let mut rng = StdRng::seed_from_u64(opts.seed ^ 0xB2);
    let mut pass = true;
    let mut detail = String::new();
    for trial in 0..200 {
        let k = rng.random_range(3..=6u32);
        let l = rng.random_range(1..=6u32);
        let parity = if rng.random_bool(0.5) { GenParity::Even } else { GenParity::Odd };
        let f = random_map(&mut rng, k, l);
        let mut trio = Vec::new();
        while trio.len() < 3 {
            let v = rng.random_range(1..=k);
            if !trio.contains(&v) {
                trio.push(v);
            }
        }
        let (i, j, kk) = (trio[0], trio[1], trio[2]);
        let mut total = AlgebraElement::zero(l, 2);
        for (p, q, r) in [(i, j, kk), (j, kk, i), (kk, i, j)] {
            let raw = [(f.apply(p), f.apply(q)), (f.apply(q), f.apply(r))];
            if raw.iter().any(|&(x, y)| x == 0 || y == 0 || x == y) {
                continue;
            }
            total.add(&arnold::normal_form(l, &raw, parity).unwrap());
        }
        let mut square = AlgebraElement::zero(l, 2);
        let (a, b) = (i, j);
        let raw = [(f.apply(a), f.apply(b)), (f.apply(a), f.apply(b))];
        if !raw.iter().any(|&(x, y)| x == 0 || y == 0 || x == y) {
            square.add(&arnold::normal_form(l, &raw, parity).unwrap());
        }
        if !total.is_zero() || !square.is_zero() {
            pass = false;
            detail = format!("trial {trial}: relation image nonzero");
            break;
        }
    }
    checks.push(CheckResult {
        name: "relations_map_to_zero".into(),
        params: "200 random maps and relation instances".into(),
        pass,
        detail,
    });

    // duality against the homology-side oracle, sign agreement recorded
    let mut pass = true;
    let mut detail = String::new();
    let mut entries = 0u64;
    let mut sign_matches = 0u64;
    'duality: for parity in both_parities() {
        for k in 0..=3u32 {
            for l in 0..=3u32 {
                for t in 0..=2u32 {
                    for f in all_pointed_maps(k, l) {
                        let cohom = gamma::induced_map(&f, t, parity).unwrap().matrix;
                        let oracle = gamma::leibniz_oracle(&f, t, parity).unwrap();
                        for col in 0..cohom.cols() {
                            for (r, v) in cohom.column(col) {
                                let w = oracle
                                    .column(*r as usize)
                                    .iter()
                                    .find(|(rr, _)| *rr as usize == col)
                                    .map(|(_, w)| w.clone())
                                    .unwrap_or_else(num_rational::BigRational::zero);
                                if v.abs() != w.abs() {
                                    pass = false;
                                    detail = format!("f={f} t={t}: |{v}| != |{w}|");
                                    break 'duality;
                                }
                                entries += 1;
                                if *v == w {
                                    sign_matches += 1;
                                }
                            }
                        }
                        for col in 0..oracle.cols() {
                            for (r, v) in oracle.column(col) {
                                let w = cohom
                                    .column(*r as usize)
                                    .iter()
                                    .find(|(rr, _)| *rr as usize == col)
                                    .map(|(_, w)| w.clone())
                                    .unwrap_or_else(num_rational::BigRational::zero);
                                if v.abs() != w.abs() {
                                    pass = false;
                                    detail = format!("f={f} t={t}: oracle entry |{v}| != |{w}|");
                                    break 'duality;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    if pass {
        detail = format!("sign agreement {sign_matches}/{entries} entries");
    }
    checks.push(CheckResult {
        name: "duality_with_homology_oracle".into(),
        params: "all pointed maps, k,l<=3, t<=2, both parities".into(),
        pass,
        detail,
    });

    VerifyReport::new("gamma", checks)
}

fn random_map(rng: &mut StdRng, k: u32, l: u32) -> PointedMap {
    let table = (0..k).map(|_| rng.random_range(0..=l)).collect();
    PointedMap::new(k, l, table).unwrap()
}

fn all_pointed_maps(k: u32, l: u32) -> Vec<PointedMap> {
    let mut out = Vec::new();
    let mut table = vec![0u32; k as usize];
    fn rec(k: u32, l: u32, i: usize, table: &mut Vec<u32>, out: &mut Vec<PointedMap>) {
        if i == k as usize {
            out.push(PointedMap::new(k, l, table.clone()).unwrap());
            return;
        }
        for v in 0..=l {
            table[i] = v;
            rec(k, l, i + 1, table, out);
        }
    }
    rec(k, l, 0, &mut table, &mut out);
    out
}

pub fn simplicial_suite(_opts: VerifyOptions) -> VerifyReport {
    let mut checks = Vec::new();

    let mut pass = true;
    let mut detail = String::new();
    'card: for m in 0..=3u32 {
        for n in 1..=2u32 {
            let x = wedge_model(m, n, 8).unwrap();
            for p in 0..=8u32 {
                let expected = m as u64 * binomial(p, n) + 1;
                let got = x.level_cardinality(p).unwrap();
                if got != expected {
                    pass = false;
                    detail = format!("m={m} n={n} p={p}: {got} != {expected}");
                    break 'card;
                }
            }
        }
    }
    checks.push(CheckResult {
        name: "cardinality_formula".into(),
        params: "m<=3, n<=2, p<=8 (mp+1 for circles)".into(),
        pass,
        detail,
    });

    let mut pass = true;
    let mut detail = String::new();
    'ident: for m in 0..=3u32 {
        for n in 1..=2u32 {
            let p_max = 8u32;
            let x = wedge_model(m, n, p_max).unwrap();
            for p in 0..=p_max {
                if p >= 2 {
                    for j in 0..=p {
                        for i in 0..j {
                            let lhs = x.face(p, j).unwrap().then(&x.face(p - 1, i).unwrap());
                            let rhs = x.face(p, i).unwrap().then(&x.face(p - 1, j - 1).unwrap());
                            if lhs != rhs {
                                pass = false;
                                detail = format!("dd failure m={m} n={n} p={p} i={i} j={j}");
                                break 'ident;
                            }
                        }
                    }
                }
                if p + 2 <= p_max {
                    for j in 0..=p {
                        for i in 0..=j {
                            let lhs = x.degeneracy(p, j).unwrap().then(&x.degeneracy(p + 1, i).unwrap());
                            let rhs =
                                x.degeneracy(p, i).unwrap().then(&x.degeneracy(p + 1, j + 1).unwrap());
                            if lhs != rhs {
                                pass = false;
                                detail = format!("ss failure m={m} n={n} p={p} i={i} j={j}");
                                break 'ident;
                            }
                        }
                    }
                }
                if p >= 1 && p <= p_max - 1 {
                    for j in 0..p {
                        for i in 0..=p {
                            let lhs = x.degeneracy(p - 1, j).unwrap().then(&x.face(p, i).unwrap());
                            let rhs = if i < j {
                                x.face(p - 1, i).unwrap().then(&x.degeneracy(p - 2, j - 1).unwrap())
                            } else if i == j || i == j + 1 {
                                PointedMap::identity(x.non_base_count(p - 1).unwrap())
                            } else {
                                x.face(p - 1, i - 1).unwrap().then(&x.degeneracy(p - 2, j).unwrap())
                            };
                            if lhs != rhs {
                                pass = false;
                                detail = format!("ds failure m={m} n={n} p={p} i={i} j={j}");
                                break 'ident;
                            }
                        }
                    }
                }
            }
        }
    }
    checks.push(CheckResult {
        name: "simplicial_identities".into(),
        params: "exhaustive, m<=3, n<=2, p<=8".into(),
        pass,
        detail,
    });

    // circles: everything above level 1 is degenerate
    let mut pass = true;
    let mut detail = String::new();
    'degen: for m in 1..=3u32 {
        let x = wedge_model(m, 1, 8).unwrap();
        for p in 2..=8u32 {
            let count = x.non_base_count(p).unwrap();
            let mut covered = vec![false; count as usize];
            for j in 0..p {
                let s = x.degeneracy(p - 1, j).unwrap();
                for id in 1..=x.non_base_count(p - 1).unwrap() {
                    covered[s.apply(id) as usize - 1] = true;
                }
            }
            if !covered.iter().all(|&c| c) {
                pass = false;
                detail = format!("m={m} p={p}: non-degenerate element above level 1");
                break 'degen;
            }
        }
    }
    checks.push(CheckResult {
        name: "circle_degeneracy_coverage".into(),
        params: "m<=3, 2<=p<=8".into(),
        pass,
        detail,
    });

    VerifyReport::new("simplicial", checks)
}

pub fn complex_suite(opts: VerifyOptions) -> VerifyReport {
    let mut checks = Vec::new();
    let m_range: Vec<u32> = match opts.m {
        Some(m) => vec![m],
        None => vec![0, 1, 2, 3],
    };

    // structural exactness at desk scale, both parities
    for &m in &m_range {
        let t_top = opts.t_max.unwrap_or(4).min(4);
        for d in [6u32, 7] {
            for t in 0..=t_top {
                let params = SliceParams { m, n: 1, d, t };
                let heavy = m >= 2 && t >= 4;
                let result = if heavy {
                    hochschild::structural_check(params, 2 * t).map(|_| ())
                } else {
                    hochschild::assemble_slice(params, 2 * t, AssembleOptions::default()).map(|_| ())
                };
                checks.push(CheckResult {
                    name: "boundary_square_and_degeneracy".into(),
                    params: format!("m={m} n=1 d={d} t={t} p<={}", 2 * t),
                    pass: result.is_ok(),
                    detail: result.err().map(|e| e.to_string()).unwrap_or_default(),
                });
            }
        }
    }
    // spheres: m=1, n=2, t<=3
    if opts.m.is_none() || opts.m == Some(1) {
        let t_top = opts.t_max.unwrap_or(3).min(3);
        for d in [8u32, 9] {
            for t in 0..=t_top {
                let params = SliceParams { m: 1, n: 2, d, t };
                let p_bound = 4 * t;
                let result = if t >= 3 {
                    hochschild::structural_check(params, p_bound).map(|_| ())
                } else {
                    hochschild::assemble_slice(params, p_bound, AssembleOptions::default()).map(|_| ())
                };
                checks.push(CheckResult {
                    name: "boundary_square_and_degeneracy".into(),
                    params: format!("m=1 n=2 d={d} t={t} p<={p_bound}"),
                    pass: result.is_ok(),
                    detail: result.err().map(|e| e.to_string()).unwrap_or_default(),
                });
            }
        }
    }

    // dimensions do not depend on d
    let mut pass = true;
    let mut detail = String::new();
    'dind: for &m in &m_range {
        for t in 0..=opts.t_max.unwrap_or(3).min(3) {
            let a = hochschild::assemble_slice(
                SliceParams { m, n: 1, d: 6, t },
                2 * t,
                AssembleOptions { with_boundaries: false, check_boundary_square: false, check_degenerate_stability: false },
            )
            .unwrap();
            let b = hochschild::assemble_slice(
                SliceParams { m, n: 1, d: 7, t },
                2 * t,
                AssembleOptions { with_boundaries: false, check_boundary_square: false, check_degenerate_stability: false },
            )
            .unwrap();
            if a.dims() != b.dims() {
                pass = false;
                detail = format!("m={m} t={t}: dims differ between d=6 and d=7");
                break 'dind;
            }
        }
    }
    checks.push(CheckResult {
        name: "dimension_d_independence".into(),
        params: "d=6 vs d=7".into(),
        pass,
        detail,
    });

    // the empty wedge computes the point
    let cfg = EngineConfig {
        rank_policy: RankPolicy::default(),
        seed: opts.seed,
        cache: RankCache::in_memory(),
    };
    let table = hochschild::betti_table(0, 1, 7, 5, None, &cfg);
    let pass = table
        .as_ref()
        .map(|t| {
            t.betti(0).map(|e| e.betti) == Some(1)
                && (1..=5).all(|u| t.betti(u).map(|e| e.betti) == Some(0))
        })
        .unwrap_or(false);
    checks.push(CheckResult {
        name: "empty_wedge_is_a_point".into(),
        params: "m=0, u<=5".into(),
        pass,
        detail: String::new(),
    });

    VerifyReport::new("complex", checks)
}

pub fn euler_suite(opts: VerifyOptions) -> VerifyReport {
    let mut checks = Vec::new();
    let cfg = EngineConfig {
        rank_policy: RankPolicy::default(),
        seed: opts.seed,
        cache: RankCache::in_memory(),
    };
    let cases: Vec<(u32, u32)> = match opts.m {
        Some(m) => vec![(m, opts.t_max.unwrap_or(if m >= 3 { 3 } else { 4 }))],
        None => vec![(1, 4), (2, 4), (3, 3)],
    };
    for (m, t_max) in cases {
        match hochschild::euler_check(m, 7, t_max, &cfg) {
            Ok(report) => {
                for row in &report.rows {
                    checks.push(CheckResult {
                        name: "alternating_sum_vs_series".into(),
                        params: format!("m={m} t={}", row.t),
                        pass: row.pass,
                        detail: format!(
                            "computed {} vs expected {} (sign {})",
                            row.computed, row.expected, row.sign
                        ),
                    });
                }
            }
            Err(e) => checks.push(CheckResult {
                name: "alternating_sum_vs_series".into(),
                params: format!("m={m} t<={t_max}"),
                pass: false,
                detail: e.to_string(),
            }),
        }
    }
    VerifyReport::new("euler", checks)
}
