mod common;

use besov_morrey::dyadic::n_norm;
use besov_morrey::embedding::{EmbeddingQuery, DEFAULT_NU_MIN};
use besov_morrey::witness::{
    beta_witness, capacity_count, capacity_witness, greedy_distribution, select_nu, shift_family, simple_witness,
    weighted_witness,
};
use besov_morrey::{Error, LqExponent, PhiSpec, SpaceParams};
use common::*;
use proptest::prelude::*;
use rand::Rng;

fn sp(s: f64, p: f64, phi: &str, d: usize) -> SpaceParams {
    SpaceParams::new(s, p, LqExponent::Finite(2.0), PhiSpec::parse(phi, d).unwrap()).unwrap()
}

#[test]
fn simple_witness_block_layout() {
    let phi = PhiSpec::power(2.0, 2).unwrap();
    let w = simple_witness(2, 1, &phi).unwrap();
    assert_eq!(w.nnz(), 4);
    let v = 1.0 / phi.eval_dyadic(1).unwrap();
    assert!(w.iter().all(|(j, m, x)| j == 2 && m.iter().all(|&k| (0..2).contains(&k)) && x == v));
    assert!(simple_witness(1, 2, &phi).is_err());
    assert!(matches!(simple_witness(30, 0, &phi), Err(Error::Capacity(_))));
}

#[test]
fn capacity_witness_source_bound() {
    let mut rng = rng(9);
    for _ in 0..200 {
        let d = rng.gen_range(1..=2usize);
        let src = random_space(&mut rng, &ANALYTIC, d);
        let j0 = rng.gen_range(0..=5u32);
        let nu0 = j0 as i64 - rng.gen_range(0..=(10 / d as i64));
        let w = match capacity_witness(j0, nu0, src.phi(), src.p()) {
            Ok(w) => w,
            // the count exceeds the block when φ1(2^{−ν0}) < 1
            Err(Error::Capacity(_)) => continue,
            Err(e) => panic!("{e}"),
        };
        assert_eq!(w.nnz() as u64, capacity_count(j0, nu0, src.phi(), src.p()).unwrap());
        let bound = 4f64.powf(1.0 / src.p()) * (j0 as f64 * src.s()).exp2();
        let norm = n_norm(&w, &src).unwrap();
        assert!(norm <= bound * (1.0 + 1e-9), "{norm} > {bound} for {src}");
    }
}

#[test]
fn beta_witness_bounds() {
    let mut rng = rng(10);
    let mut checked = 0;
    while checked < 200 {
        let d = rng.gen_range(1..=2usize);
        let q = EmbeddingQuery::new(random_space(&mut rng, &ANALYTIC, d), random_space(&mut rng, &ANALYTIC, d)).unwrap();
        let i = rng.gen_range(0..=8u32);
        let (nu, alpha) = select_nu(i, &q, DEFAULT_NU_MIN).unwrap();
        let w = match beta_witness(i, nu, &q, DEFAULT_NU_MIN) {
            Ok(w) => w,
            Err(Error::Capacity(_)) => continue,
            Err(e) => panic!("{e}"),
        };
        let src = q.source();
        let p_factor = if q.rho() >= 1.0 { 1.0 } else { 4f64.powf(1.0 / src.p()) };
        let source = n_norm(&w, src).unwrap();
        assert!(source <= 2.0 * p_factor * (1.0 + 1e-9), "source {source}");
        // target picks up 2^{i(s2−s1)}·α_i·φ1(2^{−i})^{ρ−1} from the cube Q_{ν_i,0}
        let expected = (i as f64 * (q.target().s() - src.s())).exp2()
            * alpha
            * src.phi().eval_dyadic(i as i64).unwrap().powf(q.rho() - 1.0);
        let target = n_norm(&w, q.target()).unwrap();
        assert!(target >= expected * (1.0 - 1e-9), "target {target} < {expected}");
        checked += 1;
    }
}

#[test]
fn select_nu_picks_nearest_half_peak() {
    let q = EmbeddingQuery::new(sp(0.0, 2.0, "power(2)", 1), sp(0.0, 2.0, "power(4)", 1)).unwrap();
    // ratio 2^{ν/4} peaks at ν = i
    assert_eq!(select_nu(0, &q, -8).unwrap(), (0, 1.0));
    // reversed: ratio 2^{−ν/4} peaks at ν_min = −8, half of it is reached at −4
    let q = q.reversed();
    assert_eq!(select_nu(3, &q, -8).unwrap(), (-4, 4.0));
}

#[test]
fn weighted_witness_sums_levels() {
    let q = EmbeddingQuery::new(sp(0.0, 2.0, "power(2)", 1), sp(0.0, 2.0, "power(2)", 1)).unwrap();
    let w = weighted_witness(&[1.0, 0.0, 0.5], &q, -8).unwrap();
    let levels: Vec<u32> = w.levels().map(|(j, _)| j).collect();
    assert_eq!(levels, vec![0, 2]);
}

#[test]
fn shift_family_is_unit() {
    let s = sp(0.3, 1.0, "capped(2)", 2);
    for mu in [0, 7, -3] {
        let w = shift_family(mu, 2);
        assert_eq!(w.get(0, &[mu, 0]), 1.0);
        assert!((n_norm(&w, &s).unwrap() - 1.0).abs() < 1e-15);
    }
}

proptest! {
    #[test]
    fn greedy_spreads_evenly(d in 1usize..=2, gap in 0i64..=4, j0 in 0u32..=3, frac in 0.0f64..=1.0) {
        let nu0 = j0 as i64 - gap;
        let total = 1u64 << (gap as u64 * d as u64);
        let count = ((frac * total as f64).round() as u64).max(1);
        let g = greedy_distribution(d, j0, nu0, count).unwrap();
        prop_assert_eq!(g.assignment.len() as u64, count);
        let mut sorted = g.assignment.clone();
        sorted.dedup();
        prop_assert_eq!(sorted.len() as u64, count);
        let side = 1i64 << gap;
        for m in &g.assignment {
            prop_assert!(m.iter().all(|&k| (0..side).contains(&k)));
        }
        // no intermediate cube holds more than its share plus two
        for nu in nu0 + 1..j0 as i64 {
            let shift = (j0 as i64 - nu) as u32;
            let mut per_cube = std::collections::BTreeMap::new();
            for m in &g.assignment {
                let key: Vec<i64> = m.iter().map(|&k| k >> shift).collect();
                *per_cube.entry(key).or_insert(0u64) += 1;
            }
            let share = count as f64 * (-((nu - nu0) as f64) * d as f64).exp2();
            prop_assert!(per_cube.values().all(|&n| n as f64 <= share + 2.0));
        }
    }
}
