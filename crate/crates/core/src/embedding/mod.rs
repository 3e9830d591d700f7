//! Decisions for continuous embeddings between sequence spaces n^s_{φ,p,q}.
//!
//! With ρ = min(1, p1/p2) and α_j = sup_{ν≤j} φ2(2^{−ν})/φ1(2^{−ν})^ρ the
//! embedding holds exactly when α_0 < ∞ (cond0) and
//! {2^{j(s2−s1)} α_j φ1(2^{−j})^{ρ−1}}_j ∈ ℓ_{q*} (cond2).

mod special;

use std::fmt;

pub use special::{
    check_condition_is, decide_from_besov, decide_into_besov, decide_lebesgue_targets, decide_same_phi,
    decide_under_is, spaces_equal, BesovIndices, IsConditions, LebesgueSufficiency,
};

use crate::dyadic::{n_norm, DyadicSequence, SpaceParams};
use crate::error::{Error, Result};
use crate::lq::{classify_bounded, classify_lq, q_star, LqExponent, PowerLogSequence, Status, EXPONENT_TOL};
use crate::phi::{PhiSpec, PowerLogProfile};

pub const DEFAULT_J_MAX: u32 = 64;
pub const DEFAULT_NU_MIN: i64 = -64;

/// Column names of [`EmbeddingVerdict::fields`], in order.
pub const VERDICT_FIELDS: [&str; 15] = [
    "outcome",
    "rho",
    "q_star",
    "cond0",
    "cond0_estimate",
    "cond2",
    "cond2_estimate",
    "method",
    "alpha_tail",
    "gamma",
    "delta",
    "constant",
    "never_compact",
    "approximate",
    "notes",
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecideOptions {
    pub j_max: u32,
    pub nu_min: i64,
    /// Skip exponent profiles even when both φ provide them.
    pub force_numeric: bool,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions {
            j_max: DEFAULT_J_MAX,
            nu_min: DEFAULT_NU_MIN,
            force_numeric: false,
        }
    }
}

/// A source space and a target space of the same dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingQuery {
    source: SpaceParams,
    target: SpaceParams,
}

impl EmbeddingQuery {
    pub fn new(source: SpaceParams, target: SpaceParams) -> Result<Self> {
        if source.dim() != target.dim() {
            return Err(Error::DimensionMismatch {
                expected: source.dim(),
                found: target.dim(),
            });
        }
        Ok(EmbeddingQuery { source, target })
    }

    pub fn source(&self) -> &SpaceParams {
        &self.source
    }

    pub fn target(&self) -> &SpaceParams {
        &self.target
    }

    pub fn dim(&self) -> usize {
        self.source.dim()
    }

    pub fn rho(&self) -> f64 {
        (self.source.p() / self.target.p()).min(1.0)
    }

    pub fn q_star(&self) -> LqExponent {
        q_star(self.source.q(), self.target.q())
    }

    pub fn reversed(&self) -> EmbeddingQuery {
        EmbeddingQuery {
            source: self.target.clone(),
            target: self.source.clone(),
        }
    }

    /// φ2(2^{−ν}) / φ1(2^{−ν})^ρ.
    pub fn ratio_at(&self, nu: i64) -> Result<f64> {
        let a = self.source.phi().eval_dyadic(nu)?;
        if a == 0.0 {
            return Err(Error::DegeneratePhi(format!(
                "{} vanishes at t = 2^{}",
                self.source.phi(),
                -nu
            )));
        }
        Ok(self.target.phi().eval_dyadic(nu)? / a.powf(self.rho()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    Holds,
    Fails,
    Undetermined,
}

impl Outcome {
    pub fn as_str(&self) -> &'static str {
        match self {
            Outcome::Holds => "holds",
            Outcome::Fails => "fails",
            Outcome::Undetermined => "undetermined",
        }
    }

    fn from_conditions(cond0: Status, cond2: Status) -> Outcome {
        match cond0.and(cond2) {
            Status::Satisfied => Outcome::Holds,
            Status::Violated => Outcome::Fails,
            Status::Undetermined => Outcome::Undetermined,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    ExactProfile,
    NumericTruncated,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ExactProfile => "exact-profile",
            Method::NumericTruncated => "numeric-truncated",
        }
    }
}

/// Growth of α_j as j → ∞.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AlphaTail {
    Bounded,
    /// α_j ≍ 2^{j·rate}(1+j)^{log_rate}.
    Growing { rate: f64, log_rate: f64 },
    /// α_0 is already infinite.
    Divergent,
    /// Numeric evidence of unbounded growth.
    Unbounded,
    Unknown,
}

impl fmt::Display for AlphaTail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaTail::Bounded => f.write_str("bounded"),
            AlphaTail::Growing { rate, log_rate } => write!(f, "growing(rate={rate};log={log_rate})"),
            AlphaTail::Divergent => f.write_str("divergent"),
            AlphaTail::Unbounded => f.write_str("unbounded"),
            AlphaTail::Unknown => f.write_str("unknown"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConditionReport {
    pub status: Status,
    /// cond0: sup of the ratio over the scanned ν ≤ 0; cond2: partial ℓ_{q*} norm.
    pub estimate: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingVerdict {
    pub outcome: Outcome,
    pub rho: f64,
    pub q_star: LqExponent,
    pub cond0: ConditionReport,
    pub cond2: ConditionReport,
    pub method: Method,
    pub alpha_tail: AlphaTail,
    /// Exponents (γ, δ) of the cond2 sequence 2^{−jγ}(1+j)^δ on the exact path.
    pub exponents: Option<PowerLogSequence>,
    /// Partial ℓ_{q*} norm of the cond2 sequence when the embedding holds;
    /// a non-sharp surrogate for the embedding constant.
    pub constant: Option<f64>,
    /// Embeddings between these spaces are never compact.
    pub never_compact: bool,
    /// Some φ could not be confirmed in G_p.
    pub approximate: bool,
    pub notes: Vec<String>,
}

impl EmbeddingVerdict {
    pub fn holds(&self) -> bool {
        self.outcome == Outcome::Holds
    }

    /// Flat key-value report, in a fixed order.
    pub fn fields(&self) -> Vec<(&'static str, String)> {
        let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        vec![
            ("outcome", self.outcome.to_string()),
            ("rho", self.rho.to_string()),
            ("q_star", self.q_star.to_string()),
            ("cond0", self.cond0.status.to_string()),
            ("cond0_estimate", self.cond0.estimate.to_string()),
            ("cond2", self.cond2.status.to_string()),
            ("cond2_estimate", self.cond2.estimate.to_string()),
            ("method", self.method.as_str().to_string()),
            ("alpha_tail", self.alpha_tail.to_string()),
            ("gamma", opt(self.exponents.map(|e| e.gamma))),
            ("delta", opt(self.exponents.map(|e| e.delta))),
            ("constant", opt(self.constant)),
            ("never_compact", self.never_compact.to_string()),
            ("approximate", self.approximate.to_string()),
            ("notes", self.notes.join("; ")),
        ]
    }
}

/// α_0..α_{j_max}: running maxima of φ2(2^{−ν})/φ1(2^{−ν})^ρ over ν ∈ [nu_min, j].
pub fn alpha_sequence(phi1: &PhiSpec, phi2: &PhiSpec, rho: f64, j_max: u32, nu_min: i64) -> Result<Vec<f64>> {
    if nu_min > 0 {
        return Err(Error::InvalidParameter(format!("nu_min must be ≤ 0, got {nu_min}")));
    }
    let ratio = |nu: i64| -> Result<f64> {
        let a = phi1.eval_dyadic(nu)?;
        if a == 0.0 {
            return Err(Error::DegeneratePhi(format!("{phi1} vanishes at t = 2^{}", -nu)));
        }
        Ok(phi2.eval_dyadic(nu)? / a.powf(rho))
    };
    let mut running = 0.0f64;
    for nu in nu_min..=0 {
        running = running.max(ratio(nu)?);
    }
    let mut out = Vec::with_capacity(j_max as usize + 1);
    out.push(running);
    for j in 1..=j_max as i64 {
        running = running.max(ratio(j)?);
        out.push(running);
    }
    Ok(out)
}

/// Dyadic levels ν at which both φ can be evaluated, clipped to [nu_min, j_max].
fn usable_window(query: &EmbeddingQuery, opts: &DecideOptions) -> (i64, i64) {
    let mut lo = opts.nu_min;
    let mut hi = opts.j_max as i64;
    for phi in [query.source.phi(), query.target.phi()] {
        let (a, b) = phi.hull();
        if b.is_finite() {
            lo = lo.max((-b.log2()).ceil() as i64);
        }
        if a > 0.0 {
            hi = hi.min((-a.log2()).floor() as i64);
        }
    }
    (lo, hi)
}

pub(crate) struct NumericPicture {
    /// r(−k) for k = 0, 1, ..., towards t → ∞.
    far: Vec<f64>,
    alpha: Vec<f64>,
    terms: Vec<f64>,
    notes: Vec<String>,
}

pub(crate) fn numeric_picture(query: &EmbeddingQuery, opts: &DecideOptions) -> Result<NumericPicture> {
    let (lo, hi) = usable_window(query, opts);
    let mut notes = Vec::new();
    if lo > 0 || hi < 0 {
        return Err(Error::InvalidParameter("tabulated range does not contain t = 1".into()));
    }
    if lo != opts.nu_min || hi != opts.j_max as i64 {
        notes.push(format!("scan clipped to levels {lo}..={hi} by tabulated range"));
    }
    let rho = query.rho();
    let far = (0..=-lo).map(|k| query.ratio_at(-k)).collect::<Result<Vec<_>>>()?;
    let alpha = alpha_sequence(query.source.phi(), query.target.phi(), rho, hi as u32, lo)?;
    let ds = query.target.s() - query.source.s();
    let terms = alpha
        .iter()
        .enumerate()
        .map(|(j, a)| {
            let phi1 = query.source.phi().eval_dyadic(j as i64)?;
            Ok((j as f64 * ds).exp2() * a * phi1.powf(rho - 1.0))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(NumericPicture {
        far,
        alpha,
        terms,
        notes,
    })
}

fn lex_le(a: f64, b: f64, a_log: f64, b_log: f64) -> bool {
    a < b - EXPONENT_TOL || ((a - b).abs() <= EXPONENT_TOL && a_log <= b_log + EXPONENT_TOL)
}

/// Exponents of α_j ≍ 2^{−j e}(1+j)^f from the behaviour of the ratio near t = 0.
pub(crate) fn alpha_exponents(src: &PowerLogProfile, tgt: &PowerLogProfile, rho: f64) -> (f64, f64) {
    let e = tgt.a_zero - rho * src.a_zero;
    let f = tgt.b_zero - rho * src.b_zero;
    if e < -EXPONENT_TOL || (e.abs() <= EXPONENT_TOL && f > EXPONENT_TOL) {
        (e.min(0.0), f)
    } else {
        (0.0, 0.0)
    }
}

pub(crate) fn exact_cond0(src: &PowerLogProfile, tgt: &PowerLogProfile, rho: f64) -> bool {
    lex_le(tgt.a_inf, rho * src.a_inf, tgt.b_inf, rho * src.b_inf)
}

/// (γ, δ) of the cond2 sequence, assuming cond0.
pub(crate) fn exact_cond2_exponents(
    src: &PowerLogProfile,
    tgt: &PowerLogProfile,
    rho: f64,
    s1: f64,
    s2: f64,
) -> PowerLogSequence {
    let (e, f) = alpha_exponents(src, tgt, rho);
    PowerLogSequence::new(s1 - s2 + e + (rho - 1.0) * src.a_zero, f + (rho - 1.0) * src.b_zero)
}

pub(crate) fn assemble(
    query: &EmbeddingQuery,
    numeric: NumericPicture,
    exact: Option<(bool, PowerLogSequence, AlphaTail)>,
    mut notes: Vec<String>,
) -> EmbeddingVerdict {
    let qs = query.q_star();
    let cond0_estimate = numeric.alpha.first().copied().unwrap_or(f64::NAN);
    let cond2_estimate = qs.norm(numeric.terms.iter().copied());
    notes.extend(numeric.notes);
    let (cond0, cond2, method, tail, exponents) = match exact {
        Some((c0, seq, tail)) => {
            let c2 = if c0 { Status::from_bool(seq.in_lq(qs)) } else { Status::Violated };
            (Status::from_bool(c0), c2, Method::ExactProfile, tail, Some(seq))
        }
        None => {
            let c0 = classify_bounded(&numeric.far);
            let c2 = match c0 {
                Status::Violated => Status::Violated,
                _ => classify_lq(&numeric.terms, qs),
            };
            let tail = match (c0, classify_bounded(&numeric.alpha)) {
                (Status::Violated, _) => AlphaTail::Divergent,
                (_, Status::Satisfied) => AlphaTail::Bounded,
                (_, Status::Violated) => AlphaTail::Unbounded,
                _ => AlphaTail::Unknown,
            };
            (c0, c2, Method::NumericTruncated, tail, None)
        }
    };
    let outcome = Outcome::from_conditions(cond0, cond2);
    EmbeddingVerdict {
        outcome,
        rho: query.rho(),
        q_star: qs,
        cond0: ConditionReport {
            status: cond0,
            estimate: cond0_estimate,
        },
        cond2: ConditionReport {
            status: cond2,
            estimate: cond2_estimate,
        },
        method,
        alpha_tail: tail,
        exponents,
        constant: (outcome == Outcome::Holds).then_some(cond2_estimate),
        never_compact: true,
        approximate: query.source.approximate() || query.target.approximate(),
        notes,
    }
}

pub(crate) fn exact_parts(query: &EmbeddingQuery) -> Option<(bool, PowerLogSequence, AlphaTail)> {
    let src = query.source.phi().profile().ok()?;
    let tgt = query.target.phi().profile().ok()?;
    let rho = query.rho();
    let c0 = exact_cond0(&src, &tgt, rho);
    let seq = exact_cond2_exponents(&src, &tgt, rho, query.source.s(), query.target.s());
    let tail = if !c0 {
        AlphaTail::Divergent
    } else {
        match alpha_exponents(&src, &tgt, rho) {
            (e, f) if e == 0.0 && f == 0.0 => AlphaTail::Bounded,
            (e, f) => AlphaTail::Growing { rate: -e, log_rate: f },
        }
    };
    Some((c0, seq, tail))
}

/// Decides n^{s1}_{φ1,p1,q1} ↪ n^{s2}_{φ2,p2,q2}.
pub fn decide(query: &EmbeddingQuery, opts: &DecideOptions) -> Result<EmbeddingVerdict> {
    let numeric = numeric_picture(query, opts)?;
    let mut notes = Vec::new();
    let tab1 = query.source.phi().is_tabulated();
    let tab2 = query.target.phi().is_tabulated();
    let exact = if opts.force_numeric {
        notes.push("numeric path forced".to_string());
        None
    } else {
        if tab1 != tab2 {
            notes.push("mixed analytic and tabulated inputs; numeric path used".to_string());
        }
        exact_parts(query)
    };
    Ok(assemble(query, numeric, exact, notes))
}

/// Result of probing target/source norm ratios over a battery of sequences.
#[derive(Clone, Debug, PartialEq)]
pub struct RatioScan {
    pub max_ratio: f64,
    pub argmax: Option<usize>,
    pub ratios: Vec<Option<f64>>,
    /// Inputs with zero source norm.
    pub skipped: Vec<usize>,
}

pub fn empirical_ratio_scan(query: &EmbeddingQuery, sequences: &[DyadicSequence]) -> Result<RatioScan> {
    use rayon::prelude::*;
    let ratios: Vec<Option<f64>> = sequences
        .par_iter()
        .map(|seq| {
            let src = n_norm(seq, &query.source)?;
            if src == 0.0 {
                return Ok(None);
            }
            Ok(Some(n_norm(seq, &query.target)? / src))
        })
        .collect::<Result<_>>()?;
    let mut scan = RatioScan {
        max_ratio: 0.0,
        argmax: None,
        ratios,
        skipped: Vec::new(),
    };
    for (i, r) in scan.ratios.iter().enumerate() {
        match r {
            None => scan.skipped.push(i),
            Some(r) if scan.argmax.is_none() || *r > scan.max_ratio => {
                scan.max_ratio = *r;
                scan.argmax = Some(i);
            }
            _ => {}
        }
    }
    Ok(scan)
}
