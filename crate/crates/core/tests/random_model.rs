use num_traits::ToPrimitive;
use proptest::prelude::*;

use zetamoments::arithmetic::ArithmeticTable;
use zetamoments::mollifier::{Block, BlockScheme, PreparedScheme};
use zetamoments::moments::GSumWeights;
use zetamoments::random_model::*;
use zetamoments::special::ln_factorial;

fn mc(n: usize) -> McConfig {
    McConfig { n_samples: n, seed: 42 }
}

#[test]
fn re_xp_moments_match_quadrature() {
    for h in 0..=6u32 {
        let nodes = 4096;
        let q: f64 = (0..nodes)
            .map(|i| (std::f64::consts::TAU * i as f64 / nodes as f64).cos().powi(2 * h as i32))
            .sum::<f64>()
            / nodes as f64;
        assert!((moment_re_xp(2 * h).to_f64().unwrap() - q).abs() < 1e-12, "h = {h}");
        assert_eq!(moment_re_xp(2 * h + 1).to_f64().unwrap(), 0.0);
    }
}

#[test]
fn bessel_values_and_bound() {
    assert_eq!(bessel_i0(0.0).unwrap(), 1.0);
    // Independent oracle: the same series carried to 60 terms with exact factorials in log space.
    let oracle: f64 = (0..60).map(|n| (2.0 * n as f64 * 1f64.ln() - 2.0 * ln_factorial(n)).exp()).sum();
    assert!((bessel_i0(2.0).unwrap() - oracle).abs() < 1e-14 * oracle);
    assert!((bessel_i0(2.0).unwrap() - 2.2795853).abs() < 1e-7);
    for x in [0.1, 0.5, 1.0, 2.0, 5.0] {
        assert!(bessel_i0(2.0 * x).unwrap() <= (x * x as f64).exp());
    }
    assert!(bessel_i0(701.0).is_err());
}

#[test]
fn constant_expression() {
    let e = mc_expectation(&ConstantOne, &mc(5000)).unwrap();
    assert_eq!(e.mean, 1.0);
    assert_eq!(e.std_error, 0.0);
    assert!(mc_expectation(&ConstantOne, &mc(10)).is_err());
}

#[test]
fn exp_re_p_against_bessel_products() {
    let zero = mc_expectation(&ExpRePrimeSum::new(&[3, 5], 0.0), &mc(100_000)).unwrap();
    assert!(zero.agrees_with(1.0, 3.0));
    let e = ExpRePrimeSum::new(&[3, 5], 2.0);
    let want = bessel_i0(2.0 / 3f64.sqrt()).unwrap() * bessel_i0(2.0 / 5f64.sqrt()).unwrap();
    assert!((e.closed_form().unwrap() - want).abs() < 1e-14);
    let est = mc_expectation(&e, &mc(100_000)).unwrap();
    assert!(est.agrees_with(want, 3.0), "{est:?} vs {want}");
}

#[test]
fn independence_factorisation() {
    let a = [2u64, 3, 5];
    let b = [7u64, 11, 13];
    let both: Vec<u64> = a.iter().chain(&b).copied().collect();
    let cfg = mc(100_000);
    let ea = mc_expectation(&ExpRePrimeSum::new(&a, -0.8), &cfg).unwrap();
    let eb = mc_expectation(&ExpRePrimeSum::new(&b, -0.8), &cfg).unwrap();
    let eab = mc_expectation(&ExpRePrimeSum::new(&both, -0.8), &cfg).unwrap();
    let prod = ea.mean * eb.mean;
    let prod_se = ((ea.std_error * eb.mean).powi(2) + (eb.std_error * ea.mean).powi(2)).sqrt();
    let combined = (eab.std_error.powi(2) + prod_se.powi(2)).sqrt();
    assert!((eab.mean - prod).abs() <= 3.0 * combined);
}

fn test_scheme(table: &ArithmeticTable) -> PreparedScheme {
    // Hand-built two-block scheme at T = 1e4: I_1 = (1, 12], I_2 = (12, 40].
    let blocks = vec![
        Block::explicit(1, 0.27, 1.0, 12.0, 3.0),
        Block::explicit(2, 0.40, 12.0, 40.0, 2.0),
    ];
    let primes = blocks
        .iter()
        .map(|b| table.primes_in(b.lo, b.hi).unwrap().to_vec())
        .collect();
    PreparedScheme::from_parts(BlockScheme::from_blocks(1e4, 0.7, blocks), primes)
}

#[test]
fn expectation_product_consistency_per_block() {
    let table = ArithmeticTable::new(1000);
    let s = test_scheme(&table);
    let k = 0.7;
    for l in 1..=2 {
        let w = GSumWeights::new(&s, l, 2).unwrap();
        let e = ExpGPlusRePrimeSum::new(&w, s.primes(l).unwrap(), k);
        let cf = e.closed_form().unwrap();
        let est = mc_expectation(&e, &mc(100_000)).unwrap();
        assert!(est.agrees_with(cf, 3.0), "block {l}: {est:?} vs {cf}");
        if !e.has_square_terms() {
            assert_eq!(cf, e.bessel_product().unwrap());
        }
    }
    // Block 1 contains 4 <= log(1e4 / 2pi): the square term is in play there.
    let w1 = GSumWeights::new(&s, 1, 2).unwrap();
    assert!(ExpGPlusRePrimeSum::new(&w1, s.primes(1).unwrap(), k).has_square_terms());
}

#[test]
fn registry_builds_every_expression() {
    let table = ArithmeticTable::new(1000);
    let s = test_scheme(&table);
    let params = ExpressionParams { k: 0.7, blocks: vec![2], j: 2, power: 0, coef: 2.0 };
    for (id, _) in EXPRESSIONS {
        let e = build_expression(id, &s, &params).unwrap();
        assert_eq!(e.id(), id);
        let est = mc_expectation(e.as_ref(), &mc(2000)).unwrap();
        assert!(est.mean.is_finite());
    }
    assert!(build_expression("nope", &s, &params).is_err());
    let multi = ExpressionParams { blocks: vec![1, 2], ..params };
    assert!(build_expression("exp-g-re-p", &s, &multi).is_err());
}

#[test]
fn multinomial_cases() {
    for (ps, m) in [(vec![2u64], 1u32), (vec![2, 3], 2), (vec![2, 3, 5], 2), (vec![2, 3, 5, 7], 3)] {
        let r = multinomial_moment_bound(&ps, m, &mc(10_000)).unwrap();
        assert!(r.exact && r.holds(), "{r:?}");
    }
    let one = multinomial_moment_bound(&[2], 1, &mc(10_000)).unwrap();
    assert_eq!((one.value, one.bound), (1.0, 1.0));
    let r = multinomial_moment_bound(&[2, 3], 2, &mc(10_000)).unwrap();
    assert!((r.value - 37.0 / 6.0).abs() < 1e-14 && (r.bound - 25.0 / 3.0).abs() < 1e-14);
    // Too many compositions: Monte Carlo with stated slack.
    let primes: Vec<u64> = ArithmeticTable::new(200).primes().to_vec();
    let r = multinomial_moment_bound(&primes, 4, &mc(50_000)).unwrap();
    assert!(!r.exact && r.holds(), "{r:?}");
}

#[test]
fn mc_reproducible_across_thread_counts() {
    let e = ExpRePrimeSum::new(&[2, 3, 5, 7], 1.3);
    let cfg = mc(20_000);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| mc_expectation(&e, &cfg).unwrap())
    };
    let a = run(1);
    let b = run(4);
    assert_eq!(a.mean.to_bits(), b.mean.to_bits());
    assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
    assert_eq!(PhaseSample::draw(9, 17, &[2, 3]), PhaseSample::draw(9, 17, &[3, 2]));
}

#[test]
fn stirling_range() {
    assert_eq!(stirling_upper_crossover(2000), Some(7));
    for n in 1..=6 {
        assert!(!stirling_bounds(n).upper_holds, "n = {n}");
    }
    for n in [20u64, 170, 171, 5000] {
        let s = stirling_bounds(n);
        assert!(s.lower_holds && s.upper_holds, "n = {n}");
    }
}

proptest! {
    #[test]
    fn phases_in_range(seed in any::<u64>(), p in 2u64..10_000, i in 0u64..1_000_000) {
        let t = phase(seed, p, i);
        prop_assert!((0.0..std::f64::consts::TAU).contains(&t));
        prop_assert_eq!(t.to_bits(), phase(seed, p, i).to_bits());
    }
}
