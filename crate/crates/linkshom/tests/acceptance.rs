//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! with its elapsed time (visible with `--nocapture`). Criteria carry hard
//! runtime ceilings, enforced here; the heavy criteria serialize on a shared
//! lock so that timings stay meaningful on small machines.

use std::sync::Mutex;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use linkshom::arnold;
use linkshom::cache::RankCache;
use linkshom::hochschild::{
    self, assemble_slice, structural_check, AssembleOptions, EngineConfig, SliceParams,
};
use linkshom::job::{self, Command, JobSpec, OutputFormat};
use linkshom::linalg::RankPolicy;
use linkshom::series;
use linkshom::simplicial::{binomial, wedge_model};
use linkshom::verify::{simplicial_suite, VerifyOptions};

static HEAVY: Mutex<()> = Mutex::new(());

fn config(policy: RankPolicy, seed: u64) -> EngineConfig {
    EngineConfig { rank_policy: policy, seed, cache: RankCache::in_memory() }
}

fn report(criterion: u32, name: &str, elapsed: Duration, limit: Duration) {
    println!(
        "criterion {criterion} ({name}): PASS in {:.2?} (limit {:.0?})",
        elapsed, limit
    );
    assert!(
        elapsed <= limit,
        "criterion {criterion} exceeded its runtime limit: {elapsed:.2?} > {limit:.2?}"
    );
}

#[test]
fn criterion_1_dimension_oracle() {
    let start = Instant::now();
    for n in 0..=8u32 {
        for t in 0..=7u32 {
            let basis = arnold::enumerate_basis(n, t);
            assert_eq!(
                basis.len() as u128,
                arnold::dimension(n, t),
                "basis count differs from the polynomial coefficient at n={n} t={t}"
            );
        }
    }
    report(1, "dimension oracle", start.elapsed(), Duration::from_secs(5));
}

#[test]
fn criterion_2_simplicial_model() {
    let start = Instant::now();
    for m in 0..=3u32 {
        let x = wedge_model(m, 1, 8).unwrap();
        for p in 0..=8u32 {
            assert_eq!(x.level_cardinality(p).unwrap(), (m * p) as u64 + 1, "m={m} p={p}");
        }
        let x2 = wedge_model(m, 2, 8).unwrap();
        for p in 0..=8u32 {
            assert_eq!(
                x2.level_cardinality(p).unwrap(),
                m as u64 * binomial(p, 2) + 1,
                "m={m} p={p} n=2"
            );
        }
    }
    let identities = simplicial_suite(VerifyOptions::default());
    assert!(identities.all_pass(), "{}", identities.render_text());
    report(2, "simplicial model", start.elapsed(), Duration::from_secs(5));
}

#[test]
fn criterion_3_structural_exactness() {
    let _guard = HEAVY.lock().unwrap();
    let start = Instant::now();
    // circles: m <= 3, t <= 4, both parities of d
    for m in 0..=3u32 {
        for d in [6u32, 7] {
            for t in 0..=4u32 {
                let params = SliceParams { m, n: 1, d, t };
                if m >= 2 && t >= 4 {
                    structural_check(params, 2 * t)
                        .unwrap_or_else(|e| panic!("m={m} d={d} t={t}: {e}"));
                } else {
                    assemble_slice(params, 2 * t, AssembleOptions::default())
                        .unwrap_or_else(|e| panic!("m={m} d={d} t={t}: {e}"));
                }
            }
        }
    }
    // spheres: m = 1, n = 2, t <= 3, both parities of d
    for d in [8u32, 9] {
        for t in 0..=3u32 {
            let params = SliceParams { m: 1, n: 2, d, t };
            let p_bound = 4 * t;
            if t >= 3 {
                structural_check(params, p_bound)
                    .unwrap_or_else(|e| panic!("n=2 d={d} t={t}: {e}"));
            } else {
                assemble_slice(params, p_bound, AssembleOptions::default())
                    .unwrap_or_else(|e| panic!("n=2 d={d} t={t}: {e}"));
            }
        }
    }
    report(3, "structural exactness", start.elapsed(), Duration::from_secs(600));
}

#[test]
fn criterion_4_normalized_vanishing() {
    let start = Instant::now();
    // every circle slice in the structural range: probe p = 2t+1, 2t+2
    for m in 0..=3u32 {
        for t in 0..=4u32 {
            for extra in [1u32, 2] {
                let p = 2 * t + extra;
                let dim = hochschild::normalized_dimension(m, 1, t, p).unwrap();
                assert_eq!(dim, 0, "normalized dimension must vanish at m={m} t={t} p={p}");
            }
        }
    }
    // the probes are also asserted during assembly; witness one slice
    let slice = assemble_slice(
        SliceParams { m: 2, n: 1, d: 7, t: 2 },
        4,
        AssembleOptions::default(),
    )
    .unwrap();
    assert_eq!(slice.probes, vec![(5, 0), (6, 0)]);
    report(4, "normalized vanishing", start.elapsed(), Duration::from_secs(60));
}

fn expected_euler_m3(t: u32) -> BigInt {
    // 1/2 - 4*2^t + (9/2)*3^t, an integer for every t
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let v = &half - BigRational::from(BigInt::from(4 * 2i64.pow(t)))
        + BigRational::new(BigInt::from(9), BigInt::from(2)) * BigRational::from(BigInt::from(3i64.pow(t)));
    assert!(v.denom().is_one());
    v.numer().clone()
}

#[test]
fn criterion_5_euler_reproduction() {
    let _guard = HEAVY.lock().unwrap();
    let start = Instant::now();
    let cfg = config(RankPolicy::default(), 0);
    for (m, t_max) in [(1u32, 4u32), (2, 4), (3, 3)] {
        let report = hochschild::euler_check(m, 7, t_max, &cfg).unwrap();
        assert!(report.all_pass, "alternating sums disagree: {report:?}");
        for row in &report.rows {
            // integer equality, tolerance zero
            let computed: BigInt = row.computed.parse().unwrap();
            let expected: BigInt = row.expected.parse().unwrap();
            assert_eq!(computed.abs(), expected.abs(), "m={m} t={}", row.t);
            match m {
                1 => assert_eq!(expected, BigInt::one()),
                2 => assert_eq!(expected, BigInt::from(2i64.pow(row.t + 1) - 1)),
                3 => assert_eq!(expected, expected_euler_m3(row.t)),
                _ => unreachable!(),
            }
        }
    }
    report(5, "Euler reproduction", start.elapsed(), Duration::from_secs(1800));
}

#[test]
fn criterion_6_knot_sanity() {
    let start = Instant::now();
    let multimodular = hochschild::betti_table(1, 1, 7, 4, None, &config(RankPolicy::default(), 0)).unwrap();
    let values: Vec<u64> = (0..=4).map(|u| multimodular.betti(u).unwrap().betti).collect();
    assert_eq!(values, vec![1, 0, 0, 0, 1], "knot Betti table at d=7");
    // independent dense-elimination run
    let exact = hochschild::betti_table(1, 1, 7, 4, None, &config(RankPolicy::Exact, 0)).unwrap();
    let exact_values: Vec<u64> = (0..=4).map(|u| exact.betti(u).unwrap().betti).collect();
    assert_eq!(values, exact_values, "multimodular and exact ranks disagree");
    report(6, "knot sanity", start.elapsed(), Duration::from_secs(60));
}

#[test]
fn criterion_7_pair_retraction_report() {
    let start = Instant::now();
    let (d, m) = (7u32, 2u32);
    let u_max = 2 * (d - 1) - 2; // 10
    let cfg = config(RankPolicy::default(), 0);
    let links = hochschild::betti_table(m, 1, d, u_max, None, &cfg).unwrap();
    let knots = hochschild::betti_table(1, 1, d, u_max, None, &cfg).unwrap();
    let knot_series = series::poincare_series(&knots, u_max as usize).unwrap();
    for u in 0..=u_max {
        let le = links.betti(u).unwrap();
        let ke = knots.betti(u).unwrap();
        if !(le.complete && ke.complete) {
            continue; // outside the jointly complete degrees
        }
        let conv = series::convolution(&knot_series, &knot_series, u as usize);
        let conv = conv.to_u64().expect("convolution is a small nonnegative integer");
        assert!(
            le.betti >= conv,
            "retraction inequality fails at u={u}: links {} < knots*knots {conv}",
            le.betti
        );
    }
    // the CLI emits the same report
    let outcome = job::run(&JobSpec {
        command: Command::Betti { m, n: 1, d, u_max, p_max: None, retraction: true },
        format: OutputFormat::Md,
        cache_dir: None,
        exact_ranks: false,
        seed: 0,
    });
    assert_eq!(outcome.exit_code, 0, "{}", outcome.stderr);
    assert!(outcome.stdout.contains("retraction report"));
    assert!(!outcome.stdout.contains(": false"));
    report(7, "pair retraction report", start.elapsed(), Duration::from_secs(120));
}

#[test]
fn criterion_8_series_and_radius_formulas() {
    let start = Instant::now();
    // pair series vanishes identically for one strand
    for d in [4u32, 5, 6, 7, 10] {
        let pair = series::euler_series_pair(1, d, 30).unwrap();
        assert!(
            pair.coefficients().iter().all(|c| c.is_zero()),
            "pair series must vanish at m=1, d={d}"
        );
    }
    // radius bounds match the closed formulas to 12 significant digits
    for m in 1..=6u32 {
        for d in [4u32, 6, 7, 11] {
            let r = series::radius_report(m, d).unwrap();
            let link = (1.0 / m as f64).powf(1.0 / (d as f64 - 1.0));
            let knot = (1.0 / std::f64::consts::SQRT_2).powf(1.0 / (d as f64 - 1.0));
            assert!((r.link_bound - link).abs() <= link * 1e-12, "link bound m={m} d={d}");
            assert!((r.knot_bound - knot).abs() <= knot * 1e-12, "knot bound m={m} d={d}");
        }
    }
    // the link bound strictly decreases in m (and hence tends to zero)
    for d in [4u32, 7] {
        let mut previous = f64::INFINITY;
        for m in 1..=10u32 {
            let r = series::radius_report(m, d).unwrap();
            assert!(r.link_bound < previous, "link bound must strictly decrease, m={m} d={d}");
            previous = r.link_bound;
        }
    }
    report(8, "series and radius formulas", start.elapsed(), Duration::from_secs(30));
}

#[test]
fn criterion_9_determinism() {
    let _guard = HEAVY.lock().unwrap();
    let start = Instant::now();
    let run_once = || {
        let cfg = config(RankPolicy::default(), 12345);
        let mut blobs = Vec::new();
        for (m, t_max) in [(1u32, 4u32), (2, 4), (3, 3)] {
            let report = hochschild::euler_check(m, 7, t_max, &cfg).unwrap();
            blobs.push(serde_json::to_string(&report.to_json()).unwrap());
        }
        blobs.join("\n")
    };
    let first = run_once();
    let second = run_once();
    assert_eq!(first, second, "same seed must reproduce byte-identical JSON");
    report(9, "determinism", start.elapsed(), Duration::from_secs(120));
}
