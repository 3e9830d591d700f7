mod common;

use besov_morrey::dyadic::n_norm;
use besov_morrey::embedding::{
    alpha_sequence, decide, decide_from_besov, decide_into_besov, decide_same_phi, empirical_ratio_scan,
    spaces_equal, BesovIndices, VERDICT_FIELDS, DecideOptions, EmbeddingQuery, Method, Outcome,
};
use besov_morrey::witness::simple_witness;
use besov_morrey::{DyadicSequence, LqExponent, PhiSpec, SpaceParams, Status, Table};
use common::*;
use rand::Rng;

const INF: LqExponent = LqExponent::Infinite;

fn fin(q: f64) -> LqExponent {
    LqExponent::Finite(q)
}

fn sp(s: f64, p: f64, q: LqExponent, phi: &str, d: usize) -> SpaceParams {
    SpaceParams::new(s, p, q, PhiSpec::parse(phi, d).unwrap()).unwrap()
}

fn outcome(a: SpaceParams, b: SpaceParams) -> Outcome {
    decide(&EmbeddingQuery::new(a, b).unwrap(), &DecideOptions::default())
        .unwrap()
        .outcome
}

#[test]
fn dimension_mismatch_rejected() {
    let a = sp(0.0, 1.0, INF, "power(1)", 1);
    let b = sp(0.0, 1.0, INF, "power(2)", 2);
    assert!(EmbeddingQuery::new(a, b).is_err());
}

#[test]
fn alpha_for_power_pair_peaks_at_j() {
    let a = alpha_sequence(
        &PhiSpec::power(1.0, 2).unwrap(),
        &PhiSpec::power(4.0, 2).unwrap(),
        1.0,
        12,
        -64,
    )
    .unwrap();
    for (j, v) in a.iter().enumerate() {
        let expected = (j as f64 * 2.0 * (1.0 - 0.25)).exp2();
        assert!((v / expected - 1.0).abs() < 1e-12);
    }
}

#[test]
fn alpha_follows_inverse_source_when_target_bounded() {
    // φ2 bounded and φ1 → 0 at 0: α_j tracks φ1(2^{−j})^{−ρ}
    let phi1 = PhiSpec::capped(1.0, 1).unwrap();
    let phi2 = PhiSpec::capped(4.0, 1).unwrap();
    let a = alpha_sequence(&phi1, &phi2, 1.0, 20, -64).unwrap();
    for j in 5..=20usize {
        let r = a[j] * phi1.eval_dyadic(j as i64).unwrap();
        assert!(r > 0.0 && r <= 1.0 + 1e-12);
    }
}

#[test]
fn verdict_reports_never_compact_and_fields() {
    let a = sp(1.0, 2.0, fin(2.0), "power(2)", 1);
    let v = decide(&EmbeddingQuery::new(a.clone(), a).unwrap(), &DecideOptions::default()).unwrap();
    assert!(v.never_compact);
    let fields = v.fields();
    let keys: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
    assert_eq!(keys, VERDICT_FIELDS);
    assert_eq!(fields[0].1, "holds");
    assert!(v.constant.is_some());
}

#[test]
fn shared_phi_boundary_with_logarithm() {
    // φ(t) = t^{d/p2}(1+|log t|)^a near 0, 1 above; threshold (s1−s2)/d = (p1/p2)(1/p1 − 1/p2)
    let (d, p1, p2) = (2usize, 1.0, 2.0);
    let gap = d as f64 * (p1 / p2) * (1.0 / p1 - 1.0 / p2);
    for (a, q1, q2, expected) in [
        (0.0, fin(1.0), fin(1.0), Outcome::Holds),
        (0.5, fin(1.0), INF, Outcome::Holds),
        // q* = 4: needs a > (1/4)·2 = 0.5
        (0.75, INF, fin(4.0), Outcome::Holds),
        (0.5, INF, fin(4.0), Outcome::Fails),
        (0.25, INF, fin(4.0), Outcome::Fails),
    ] {
        let phi = PhiSpec::capped_log(p2, a, d).unwrap();
        let v = decide_same_phi(&phi, BesovIndices::new(gap, p1, q1), BesovIndices::new(0.0, p2, q2)).unwrap();
        assert_eq!(v.outcome, expected, "a = {a}");
        let below =
            decide_same_phi(&phi, BesovIndices::new(gap - 0.01, p1, q1), BesovIndices::new(0.0, p2, q2)).unwrap();
        assert_eq!(below.outcome, Outcome::Fails);
    }
}

#[test]
fn into_besov_examples() {
    // classical source: b^{s1}_{p1,q1} ↪ b^{s2}_{p2,q2}
    let src = SpaceParams::besov(1.0, 1.0, fin(1.0), 1).unwrap();
    let v = decide_into_besov(&src, 0.5, 2.0, fin(1.0)).unwrap();
    assert_eq!(v.outcome, Outcome::Holds);
    let v = decide_into_besov(&src, 0.5 + 1e-3, 2.0, fin(1.0)).unwrap();
    assert_eq!(v.outcome, Outcome::Fails);

    // φ1 = t^{d/u} near 0, t^{d/p1} at infinity
    let (u, p1, p2) = (4.0, 1.0, 2.0);
    let edge = (p1 / u) * (1.0 / p1 - 1.0 / p2);
    let src = |s, q| SpaceParams::new(s, p1, q, PhiSpec::two_power(u, p1, 1).unwrap()).unwrap();
    assert_eq!(decide_into_besov(&src(edge, fin(1.0)), 0.0, p2, fin(2.0)).unwrap().outcome, Outcome::Holds);
    assert_eq!(decide_into_besov(&src(edge, fin(2.0)), 0.0, p2, fin(1.0)).unwrap().outcome, Outcome::Fails);
    assert_eq!(decide_into_besov(&src(edge + 0.1, fin(2.0)), 0.0, p2, fin(1.0)).unwrap().outcome, Outcome::Holds);
    assert_eq!(decide_into_besov(&src(5.0, fin(1.0)), 0.0, 0.5, fin(1.0)).unwrap().outcome, Outcome::Fails);

    // bounded φ1 cannot grow like t^{d/p1}
    let capped = SpaceParams::new(3.0, 1.0, fin(1.0), PhiSpec::capped(2.0, 1).unwrap()).unwrap();
    let v = decide_into_besov(&capped, 0.0, 1.0, INF).unwrap();
    assert_eq!(v.outcome, Outcome::Fails);
    assert_eq!(v.cond0.status, Status::Violated);
    let numeric = decide(
        &EmbeddingQuery::new(capped, SpaceParams::besov(0.0, 1.0, INF, 1).unwrap()).unwrap(),
        &DecideOptions { force_numeric: true, ..Default::default() },
    )
    .unwrap();
    assert_eq!(numeric.cond0.status, Status::Violated);
}

#[test]
fn from_besov_examples() {
    // target t^{d/u2} near 0, t^{d/u1} at infinity, p1 > p2
    let (p1, p2, u1, u2) = (2.0, 1.0, 3.0, 1.5);
    let target = |q| SpaceParams::new(0.0, p2, q, PhiSpec::two_power(u2, u1, 1).unwrap()).unwrap();
    let edge = (1.0 / p1 - 1.0 / u2).max(0.0);
    assert_eq!(decide_from_besov(edge, p1, fin(1.0), &target(fin(1.0))).unwrap().outcome, Outcome::Holds);
    assert_eq!(decide_from_besov(edge, p1, fin(2.0), &target(fin(1.0))).unwrap().outcome, Outcome::Fails);
    assert_eq!(decide_from_besov(edge + 0.05, p1, fin(2.0), &target(fin(1.0))).unwrap().outcome, Outcome::Holds);
    assert_eq!(decide_from_besov(edge - 0.05, p1, fin(1.0), &target(INF)).unwrap().outcome, Outcome::Fails);

    // u1 = u2 = p1 is the shared-φ case with p1 ≥ p2
    let same = SpaceParams::new(0.0, p2, fin(1.0), PhiSpec::power(p1, 1).unwrap()).unwrap();
    let a = decide_from_besov(0.0, p1, fin(2.0), &same).unwrap();
    let b = decide_same_phi(
        &PhiSpec::power(p1, 1).unwrap(),
        BesovIndices::new(0.0, p1, fin(2.0)),
        BesovIndices::new(0.0, p2, fin(1.0)),
    )
    .unwrap();
    assert_eq!(a.outcome, b.outcome);
    assert_eq!(a.outcome, Outcome::Fails);

    // p1 ≤ p2 with classical target: geometric with s1 − s2 > d/p1
    let t = SpaceParams::besov(0.0, 2.0, fin(0.5), 1).unwrap();
    let v = decide_from_besov(1.01, 1.0, INF, &t).unwrap();
    assert_eq!(v.outcome, Outcome::Holds);
}

#[test]
fn equality_examples() {
    let a = sp(0.5, 1.0, fin(2.0), "const(1)", 1);
    let b = sp(0.5, 3.0, fin(2.0), "const(1)", 1);
    assert!(spaces_equal(&EmbeddingQuery::new(a, b).unwrap()).unwrap().equal);
    let a = sp(0.5, 2.0, fin(2.0), "power(3)", 1);
    let b = sp(0.75, 2.0, fin(2.0), "power(3)", 1);
    assert!(!spaces_equal(&EmbeddingQuery::new(a.clone(), b).unwrap()).unwrap().equal);
    assert!(spaces_equal(&EmbeddingQuery::new(a.clone(), a).unwrap()).unwrap().equal);
    let c = sp(0.0, 1.0, INF, "const(1)", 1);
    let f = sp(0.0, 1.0, INF, "floorone(2)", 1);
    assert!(!spaces_equal(&EmbeddingQuery::new(c, f).unwrap()).unwrap().equal);
}

#[test]
fn ratio_scan_examples() {
    let a = sp(0.5, 1.0, fin(2.0), "power(2)", 1);
    let b = sp(0.0, 1.0, fin(2.0), "power(3)", 1);
    let q = EmbeddingQuery::new(a.clone(), b.clone()).unwrap();
    let (j0, nu0) = (3u32, 1i64);
    let w = simple_witness(j0, nu0, a.phi()).unwrap();
    let scan = empirical_ratio_scan(&q, &[w]).unwrap();
    let expected =
        (j0 as f64 * (b.s() - a.s())).exp2() * b.phi().eval_dyadic(nu0).unwrap() / a.phi().eval_dyadic(nu0).unwrap();
    assert!((scan.max_ratio / expected - 1.0).abs() < 1e-12);

    let one = DyadicSequence::from_entries(1, [(0, vec![0], 1.0)]).unwrap();
    let eq = EmbeddingQuery::new(a.clone(), a).unwrap();
    assert_eq!(empirical_ratio_scan(&eq, &[one]).unwrap().max_ratio, 1.0);

    // failure through the ratio bound: witnesses with ν0 → −∞ grow without bound
    let src = sp(0.0, 1.0, fin(2.0), "power(4)", 1);
    let tgt = sp(0.0, 1.0, fin(2.0), "power(1)", 1);
    let q = EmbeddingQuery::new(src.clone(), tgt).unwrap();
    assert_eq!(decide(&q, &DecideOptions::default()).unwrap().cond0.status, Status::Violated);
    let family: Vec<DyadicSequence> = [0, -5, -10].iter().map(|&nu| simple_witness(0, nu, src.phi()).unwrap()).collect();
    let scan = empirical_ratio_scan(&q, &family).unwrap();
    let r: Vec<f64> = scan.ratios.iter().map(|r| r.unwrap()).collect();
    assert!(r[0] < r[1] && r[1] < r[2]);
    assert_eq!(scan.argmax, Some(2));
}

#[test]
fn transitivity_on_power_triples() {
    let mut rng = rng(31);
    let mut chains = 0;
    for _ in 0..3000 {
        let d = rng.gen_range(1..=2usize);
        let s: Vec<SpaceParams> = (0..3).map(|_| random_space(&mut rng, &[Family::Power], d)).collect();
        if outcome(s[0].clone(), s[1].clone()) == Outcome::Holds && outcome(s[1].clone(), s[2].clone()) == Outcome::Holds {
            assert_eq!(outcome(s[0].clone(), s[2].clone()), Outcome::Holds, "{} {} {}", s[0], s[1], s[2]);
            chains += 1;
        }
    }
    assert!(chains > 20, "only {chains} chains");
}

#[test]
fn embedding_constant_bounds_observed_ratios() {
    let mut rng = rng(77);
    let mut checked = 0;
    while checked < 40 {
        let d = rng.gen_range(1..=2usize);
        let q = EmbeddingQuery::new(random_space(&mut rng, &ALL, d), random_space(&mut rng, &ALL, d)).unwrap();
        let v = decide(&q, &DecideOptions::default()).unwrap();
        if v.outcome != Outcome::Holds {
            continue;
        }
        let bound = v.constant.unwrap();
        let mut battery: Vec<DyadicSequence> = (0..1000).map(|_| random_sequence(&mut rng, d, 6, 24, 6)).collect();
        for j0 in 0..=3u32 {
            for nu0 in j0 as i64 - 3..=j0 as i64 {
                if let Ok(w) = simple_witness(j0, nu0, q.source().phi()) {
                    battery.push(w);
                }
            }
        }
        let scan = empirical_ratio_scan(&q, &battery).unwrap();
        assert!(scan.max_ratio <= bound * (1.0 + 1e-9), "{} > {bound}", scan.max_ratio);
        checked += 1;
    }
}

#[test]
fn numeric_path_agrees_with_profiles() {
    let families = [Family::Power, Family::TwoPower, Family::Capped, Family::FloorOne, Family::Constant];
    let mut rng = rng(5);
    let numeric = DecideOptions {
        force_numeric: true,
        ..Default::default()
    };
    let (mut decided, mut open) = (0, 0);
    for _ in 0..600 {
        let d = rng.gen_range(1..=2usize);
        let q = EmbeddingQuery::new(random_space(&mut rng, &families, d), random_space(&mut rng, &families, d)).unwrap();
        let exact = decide(&q, &DecideOptions::default()).unwrap();
        let approx = decide(&q, &numeric).unwrap();
        assert_eq!(approx.method, Method::NumericTruncated);
        match approx.outcome {
            Outcome::Undetermined => open += 1,
            o => {
                assert_eq!(o, exact.outcome, "{} -> {}", q.source(), q.target());
                decided += 1;
            }
        }
    }
    assert!(open * 20 < decided, "{open} undetermined vs {decided} decided");
}

#[test]
fn tabulated_phi_uses_numeric_path() {
    let t: Vec<f64> = (-30..=30).map(|k| (k as f64).exp2()).collect();
    let v: Vec<f64> = t.iter().map(|x| x.sqrt()).collect();
    let phi = PhiSpec::tabulated(Table::new(t, v).unwrap(), 1).unwrap();
    let a = SpaceParams::new(1.0, 2.0, fin(2.0), phi.clone()).unwrap();
    let b = SpaceParams::new(0.0, 2.0, fin(2.0), phi).unwrap();
    let v = decide(&EmbeddingQuery::new(a.clone(), b.clone()).unwrap(), &DecideOptions::default()).unwrap();
    assert_eq!(v.method, Method::NumericTruncated);
    assert_eq!(v.outcome, Outcome::Holds);
    assert!(v.notes.iter().any(|n| n.contains("clipped")));
    let back = decide(&EmbeddingQuery::new(b, a).unwrap(), &DecideOptions::default()).unwrap();
    assert_eq!(back.outcome, Outcome::Fails);

    let mixed = EmbeddingQuery::new(
        sp(1.0, 2.0, fin(2.0), "power(2)", 1),
        SpaceParams::new(0.0, 2.0, fin(2.0), v_table()).unwrap(),
    )
    .unwrap();
    let v = decide(&mixed, &DecideOptions::default()).unwrap();
    assert!(v.notes.iter().any(|n| n.contains("mixed")));
}

fn v_table() -> PhiSpec {
    let t: Vec<f64> = (-30..=30).map(|k| (k as f64).exp2()).collect();
    let v: Vec<f64> = t.iter().map(|x| x.sqrt()).collect();
    PhiSpec::tabulated(Table::new(t, v).unwrap(), 1).unwrap()
}

#[test]
fn witness_norm_matches_source_scale() {
    let a = sp(0.25, 1.0, fin(1.0), "twopower(2,3)", 2);
    let w = simple_witness(2, 0, a.phi()).unwrap();
    assert!((n_norm(&w, &a).unwrap() / 0.5f64.exp2() - 1.0).abs() < 1e-12);
}
