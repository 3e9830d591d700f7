#![allow(dead_code)]

use std::f64::consts::E;

use besov_morrey::{DyadicSequence, LqExponent, PhiSpec, SpaceParams};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Power,
    TwoPower,
    Capped,
    FloorOne,
    PowerLog,
    CappedLog,
    Constant,
}

pub const ANALYTIC: [Family; 5] = [
    Family::Power,
    Family::TwoPower,
    Family::Capped,
    Family::FloorOne,
    Family::PowerLog,
];

pub const ALL: [Family; 7] = [
    Family::Power,
    Family::TwoPower,
    Family::Capped,
    Family::FloorOne,
    Family::PowerLog,
    Family::CappedLog,
    Family::Constant,
];

fn exponent_at_least(rng: &mut ChaCha8Rng, p: f64) -> f64 {
    let choices = [p, p + 0.5, 2.0 * p, 4.0, 6.0];
    let allowed: Vec<f64> = choices.into_iter().filter(|&u| u >= p).collect();
    *allowed.choose(rng).unwrap()
}

/// A φ from `family` lying in G_p.
pub fn random_phi(rng: &mut ChaCha8Rng, family: Family, p: f64, d: usize) -> PhiSpec {
    loop {
        let u = exponent_at_least(rng, p);
        let v = exponent_at_least(rng, p);
        let phi = match family {
            Family::Power => PhiSpec::power(u, d),
            Family::TwoPower => PhiSpec::two_power(u, v, d),
            Family::Capped => PhiSpec::capped(u, d),
            Family::FloorOne => PhiSpec::floor_one(v, d),
            Family::PowerLog => {
                let a = *[-1.0, -0.5, 0.5, 1.0].choose(rng).unwrap();
                let shift = *[E, 5.0].choose(rng).unwrap();
                PhiSpec::power_log(u, a, shift, d)
            }
            Family::CappedLog => {
                let frac = *[0.0, 0.5, 1.0].choose(rng).unwrap();
                PhiSpec::capped_log(u, frac * d as f64 / u, d)
            }
            Family::Constant => PhiSpec::constant(1.0, d),
        }
        .unwrap();
        if phi.check_class_gp_default(p).unwrap().exact == Some(true) {
            return phi;
        }
    }
}

pub fn random_family(rng: &mut ChaCha8Rng, families: &[Family]) -> Family {
    *families.choose(rng).unwrap()
}

pub fn random_q(rng: &mut ChaCha8Rng) -> LqExponent {
    *[
        LqExponent::Finite(0.5),
        LqExponent::Finite(1.0),
        LqExponent::Finite(2.0),
        LqExponent::Infinite,
    ]
    .choose(rng)
    .unwrap()
}

pub fn random_p(rng: &mut ChaCha8Rng) -> f64 {
    *[0.5, 1.0, 2.0, 3.0].choose(rng).unwrap()
}

/// s on a quarter grid in [−1, 2].
pub fn random_s(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(-4..=8) as f64 / 4.0
}

pub fn random_space(rng: &mut ChaCha8Rng, families: &[Family], d: usize) -> SpaceParams {
    let p = random_p(rng);
    let family = *families.choose(rng).unwrap();
    let phi = random_phi(rng, family, p, d);
    SpaceParams::new(random_s(rng), p, random_q(rng), phi).unwrap()
}

/// A finitely supported sequence with at most `max_levels` levels and
/// `max_entries` entries, indices in [−spread, spread]^d.
pub fn random_sequence(
    rng: &mut ChaCha8Rng,
    d: usize,
    max_levels: u32,
    max_entries: usize,
    spread: i64,
) -> DyadicSequence {
    let mut seq = DyadicSequence::new(d);
    let n = rng.gen_range(1..=max_entries);
    for _ in 0..n {
        let j = rng.gen_range(0..max_levels);
        let m: Vec<i64> = (0..d).map(|_| rng.gen_range(-spread..=spread)).collect();
        let v: f64 = rng.gen_range(-1.0..1.0);
        if v != 0.0 {
            seq.insert(j, m, v).unwrap();
        }
    }
    if seq.is_empty() {
        seq.insert(0, vec![0; d], 1.0).unwrap();
    }
    seq
}
