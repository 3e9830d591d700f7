//! Closed-form criteria for structured pairs of spaces.
//!
//! Each routine evaluates its own simplified criterion when exponent profiles
//! exist and falls back to [`decide`] otherwise.

use super::{
    assemble, decide, exact_cond0, exact_cond2_exponents, exact_parts, numeric_picture, AlphaTail, DecideOptions,
    EmbeddingQuery, EmbeddingVerdict,
};
use crate::dyadic::SpaceParams;
use crate::error::{Error, Result};
use crate::lq::{classify_bounded, classify_lq, q_star, LqExponent, PowerLogSequence, Status, EXPONENT_TOL};
use crate::phi::{PhiSpec, PowerLogProfile};

/// Smoothness, integrability and summability indices of one space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BesovIndices {
    pub s: f64,
    pub p: f64,
    pub q: LqExponent,
}

impl BesovIndices {
    pub fn new(s: f64, p: f64, q: LqExponent) -> Self {
        BesovIndices { s, p, q }
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= EXPONENT_TOL
}

fn specialised(
    query: &EmbeddingQuery,
    note: &str,
    rule: impl FnOnce(&PowerLogProfile, &PowerLogProfile) -> (bool, PowerLogSequence),
) -> Result<EmbeddingVerdict> {
    let opts = DecideOptions::default();
    let (Ok(src), Ok(tgt)) = (query.source().phi().profile(), query.target().phi().profile()) else {
        let mut v = decide(query, &opts)?;
        v.notes.push(format!("{note}: no exponent profile, general criterion used"));
        return Ok(v);
    };
    let (c0, seq) = rule(&src, &tgt);
    let tail = match exact_parts(query) {
        Some((_, _, t)) if c0 => t,
        Some(_) => AlphaTail::Divergent,
        None => AlphaTail::Unknown,
    };
    let numeric = numeric_picture(query, &opts)?;
    Ok(assemble(query, numeric, Some((c0, seq, tail)), vec![note.to_string()]))
}

/// Both spaces built on the same φ, which must lie in G_{max(p1,p2)}.
pub fn decide_same_phi(phi: &PhiSpec, a: BesovIndices, b: BesovIndices) -> Result<EmbeddingVerdict> {
    let p_max = a.p.max(b.p);
    if phi.check_class_gp_default(p_max)?.exact == Some(false) {
        return Err(Error::InvalidParameter(format!("{phi} is not in G_p for p = {p_max}")));
    }
    let query = EmbeddingQuery::new(
        SpaceParams::new(a.s, a.p, a.q, phi.clone())?,
        SpaceParams::new(b.s, b.p, b.q, phi.clone())?,
    )?;
    let rho = query.rho();
    if a.p >= b.p {
        specialised(&query, "shared φ, p1 ≥ p2", |_, _| {
            (true, PowerLogSequence::new(a.s - b.s, 0.0))
        })
    } else {
        specialised(&query, "shared φ, p1 < p2", |prof, _| {
            let bounded = close(prof.a_inf, 0.0) && prof.b_inf <= EXPONENT_TOL;
            let seq = PowerLogSequence::new(a.s - b.s + prof.a_zero * (rho - 1.0), prof.b_zero * (rho - 1.0));
            (bounded, seq)
        })
    }
}

/// Target is the classical Besov space (φ2(t) = t^{d/p2}).
pub fn decide_into_besov(source: &SpaceParams, s2: f64, p2: f64, q2: LqExponent) -> Result<EmbeddingVerdict> {
    let target = SpaceParams::besov(s2, p2, q2, source.dim())?;
    let query = EmbeddingQuery::new(source.clone(), target)?;
    let (s1, p1) = (source.s(), source.p());
    let d = source.dim() as f64;
    let rho = query.rho();
    specialised(&query, "classical Besov target", |prof, _| {
        let grows_like_power = close(prof.a_inf, d / p1) && prof.b_inf >= -EXPONENT_TOL;
        let c0 = p1 <= p2 * (1.0 + 1e-12) && grows_like_power;
        let seq = PowerLogSequence::new(s1 - s2 + prof.a_zero * (rho - 1.0), prof.b_zero * (rho - 1.0));
        (c0, seq)
    })
}

/// Source is the classical Besov space (φ1(t) = t^{d/p1}).
pub fn decide_from_besov(s1: f64, p1: f64, q1: LqExponent, target: &SpaceParams) -> Result<EmbeddingVerdict> {
    let source = SpaceParams::besov(s1, p1, q1, target.dim())?;
    let query = EmbeddingQuery::new(source, target.clone())?;
    let (s2, p2) = (target.s(), target.p());
    let d = target.dim() as f64;
    if p1 <= p2 {
        specialised(&query, "classical Besov source, p1 ≤ p2", |_, prof| {
            (true, PowerLogSequence::new(s1 - s2 - d / p1 + prof.a_zero, prof.b_zero))
        })
    } else {
        specialised(&query, "classical Besov source, p1 > p2", |_, prof| {
            let c0 = prof.a_inf < d / p1 - EXPONENT_TOL || (close(prof.a_inf, d / p1) && prof.b_inf <= EXPONENT_TOL);
            let gap = d / p1 - prof.a_zero;
            let delta = if gap > EXPONENT_TOL || (close(gap, 0.0) && prof.b_zero > EXPONENT_TOL) {
                prof.b_zero
            } else {
                0.0
            };
            (c0, PowerLogSequence::new(s1 - s2 - gap.max(0.0), delta))
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpacesEqual {
    pub equal: bool,
    pub reason: String,
}

/// Whether source and target coincide with equivalent quasi-norms.
pub fn spaces_equal(query: &EmbeddingQuery) -> Result<SpacesEqual> {
    let (a, b) = (query.source(), query.target());
    let no = |reason: &str| {
        Ok(SpacesEqual {
            equal: false,
            reason: reason.to_string(),
        })
    };
    if !close(a.s(), b.s()) {
        return no("smoothness differs");
    }
    if a.q() != b.q() {
        return no("summability differs");
    }
    let (Ok(pa), Ok(pb)) = (a.phi().profile(), b.phi().profile()) else {
        let opts = DecideOptions::default();
        let there = decide(query, &opts)?.outcome;
        let back = decide(&query.reversed(), &opts)?.outcome;
        let equal = there == super::Outcome::Holds && back == super::Outcome::Holds;
        return Ok(SpacesEqual {
            equal,
            reason: format!("no exponent profile; embeddings {there} and {back}"),
        });
    };
    let ia = is_from_profile(&pa);
    let ib = is_from_profile(&pb);
    if ia.0 && ia.1 && ib.0 && ib.1 {
        return Ok(SpacesEqual {
            equal: true,
            reason: "both φ bounded above and away from zero".into(),
        });
    }
    let same_profile = close(pa.a_zero, pb.a_zero)
        && close(pa.b_zero, pb.b_zero)
        && close(pa.a_inf, pb.a_inf)
        && close(pa.b_inf, pb.b_inf);
    if (a.p() - b.p()).abs() <= 1e-12 * a.p().max(b.p()) && same_profile {
        return Ok(SpacesEqual {
            equal: true,
            reason: "same p and equivalent φ".into(),
        });
    }
    if same_profile {
        no("integrability differs")
    } else {
        no("φ not equivalent")
    }
}

/// Lower bound away from zero (`inf_positive`) and upper bound (`sup_finite`) of φ.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IsConditions {
    pub inf_positive: Status,
    pub sup_finite: Status,
    pub exact: bool,
}

fn is_from_profile(prof: &PowerLogProfile) -> (bool, bool) {
    (
        close(prof.a_zero, 0.0) && prof.b_zero >= -EXPONENT_TOL,
        close(prof.a_inf, 0.0) && prof.b_inf <= EXPONENT_TOL,
    )
}

pub fn check_condition_is(phi: &PhiSpec) -> Result<IsConditions> {
    if let Ok(prof) = phi.profile() {
        let (i, s) = is_from_profile(&prof);
        return Ok(IsConditions {
            inf_positive: Status::from_bool(i),
            sup_finite: Status::from_bool(s),
            exact: true,
        });
    }
    let (lo, hi) = phi.hull();
    let toward_zero: Vec<f64> = (0..=64)
        .take_while(|&k| (-(k as f64)).exp2() >= lo)
        .map(|k| phi.eval_dyadic(k).map(|v| 1.0 / v))
        .collect::<Result<_>>()?;
    let toward_inf: Vec<f64> = (0..=64)
        .take_while(|&k| (k as f64).exp2() <= hi)
        .map(|k| phi.eval_dyadic(-k))
        .collect::<Result<_>>()?;
    Ok(IsConditions {
        inf_positive: classify_bounded(&toward_zero),
        sup_finite: classify_bounded(&toward_inf),
        exact: false,
    })
}

/// Simplified criteria when either φ is bounded below or above.
/// `None` when no case applies or a φ has no exponent profile.
pub fn decide_under_is(query: &EmbeddingQuery) -> Result<Option<EmbeddingVerdict>> {
    let (Ok(src), Ok(tgt)) = (query.source().phi().profile(), query.target().phi().profile()) else {
        return Ok(None);
    };
    let (i1, s1b) = is_from_profile(&src);
    let (i2, s2b) = is_from_profile(&tgt);
    let (s1, s2, rho) = (query.source().s(), query.target().s(), query.rho());
    let generic = |p: &PowerLogProfile, t: &PowerLogProfile| exact_cond2_exponents(p, t, rho, s1, s2);
    let v = if i1 {
        specialised(query, "source φ bounded below", |p, t| {
            (exact_cond0(p, t, rho), PowerLogSequence::new(s1 - s2, 0.0))
        })?
    } else if i2 {
        specialised(query, "target φ bounded below", |p, t| {
            (exact_cond0(p, t, rho), PowerLogSequence::new(s1 - s2 - p.a_zero, -p.b_zero))
        })?
    } else if s2b {
        specialised(query, "target φ bounded above", |p, t| (true, generic(p, t)))?
    } else if s1b {
        specialised(query, "source φ bounded above", |p, t| (s2b, generic(p, t)))?
    } else {
        return Ok(None);
    };
    Ok(Some(v))
}

#[derive(Clone, Debug, PartialEq)]
pub struct LebesgueSufficiency {
    /// Satisfied means the embedding into L_r is guaranteed; anything else
    /// leaves the question open.
    pub sufficient: Status,
    pub q_prime: LqExponent,
    pub exponents: Option<PowerLogSequence>,
    pub notes: Vec<String>,
}

/// Sufficient conditions for the function space to embed into L_r, r ∈ [1, ∞].
pub fn decide_lebesgue_targets(source: &SpaceParams, r: f64) -> Result<LebesgueSufficiency> {
    if !(r >= 1.0) {
        return Err(Error::InvalidParameter(format!("r must lie in [1, inf], got {r}")));
    }
    let (s, p) = (source.s(), source.p());
    let d = source.dim() as f64;
    let q_prime = q_star(source.q(), LqExponent::Finite(1.0));
    let mut notes = Vec::new();
    if r.is_finite() && r < p.max(1.0) * (1.0 - 1e-12) {
        notes.push("r below max(p, 1)".into());
        return Ok(LebesgueSufficiency {
            sufficient: Status::Undetermined,
            q_prime,
            exponents: None,
            notes,
        });
    }
    // exponent of φ in the summability sequence
    let power = if r.is_finite() { p / r - 1.0 } else { -1.0 };
    if let Ok(prof) = source.phi().profile() {
        let at_inf_ok = !r.is_finite() || (close(prof.a_inf, d / p) && prof.b_inf >= -EXPONENT_TOL);
        if !at_inf_ok {
            notes.push("φ does not grow like t^{d/p} at infinity".into());
        }
        let seq = PowerLogSequence::new(s + prof.a_zero * power, prof.b_zero * power);
        let ok = at_inf_ok && seq.in_lq(q_prime);
        return Ok(LebesgueSufficiency {
            sufficient: if ok { Status::Satisfied } else { Status::Undetermined },
            q_prime,
            exponents: Some(seq),
            notes,
        });
    }
    notes.push("numeric path".into());
    let phi = source.phi();
    let (lo, hi) = phi.hull();
    let terms: Vec<f64> = (0..=64i64)
        .take_while(|&j| (-(j as f64)).exp2() >= lo)
        .map(|j| Ok((-(j as f64) * s).exp2() * phi.eval_dyadic(j)?.powf(power)))
        .collect::<Result<_>>()?;
    let mut status = classify_lq(&terms, q_prime);
    if r.is_finite() {
        let inverse_growth: Vec<f64> = (0..=64i64)
            .take_while(|&k| (k as f64).exp2() <= hi)
            .map(|k| Ok((k as f64 * d / p).exp2() / phi.eval_dyadic(-k)?))
            .collect::<Result<_>>()?;
        status = status.and(classify_bounded(&inverse_growth));
    }
    Ok(LebesgueSufficiency {
        sufficient: if status == Status::Satisfied { Status::Satisfied } else { Status::Undetermined },
        q_prime,
        exponents: None,
        notes,
    })
}
