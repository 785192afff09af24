//! Closed-form predictions for the growing models.
//!
//! All functions are pure. Integer counts are exact: `u64` with overflow
//! detection, or [`BigUint`] through the `_big` variants. Quantities that are
//! only defined asymptotically are returned as `f64`.
//!
//! Following the usual notation, `q = 2r` is the bound-edge multiplication
//! factor per step and `M = m_e + 2 m_v` the number of edges one seed copy
//! brings in.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::config::{GrowthConfig, Mode};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PredictError {
    #[error("count exceeds 64-bit range at t = {t}")]
    Overflow { t: u32 },
    #[error("invalid parameters: {0}")]
    Invalid(String),
    #[error("{what} = {value} is out of range ({range})")]
    OutOfRange {
        what: &'static str,
        value: u64,
        range: String,
    },
    #[error("this prediction requires r >= 2")]
    NeedsThicknessTwo,
    #[error("retention factor p equals 2r")]
    SingularRetention,
    #[error("seeds differ in (m_v, m_e); closed forms need a single shape")]
    Heterogeneous,
}

/// Structural parameters plus the churn probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub n_v0: u64,
    pub n_e0: u64,
    pub m_v: u64,
    pub m_e: u64,
    pub r: u64,
    pub p_r: f64,
    pub p_a: f64,
}

impl ModelParams {
    pub fn new(n_v0: u64, n_e0: u64, m_v: u64, m_e: u64, r: u64) -> Result<ModelParams, PredictError> {
        if n_e0 == 0 {
            return Err(PredictError::Invalid("n_e0 must be at least 1".into()));
        }
        if r == 0 || m_v < r {
            return Err(PredictError::Invalid(format!("need m_v >= r >= 1, got m_v = {m_v}, r = {r}")));
        }
        Ok(ModelParams {
            n_v0,
            n_e0,
            m_v,
            m_e,
            r,
            p_r: 0.0,
            p_a: 0.0,
        })
    }

    pub fn with_churn(mut self, p_r: f64, p_a: f64) -> ModelParams {
        self.p_r = p_r;
        self.p_a = p_a;
        self
    }

    pub fn from_config(config: &GrowthConfig) -> Result<ModelParams, PredictError> {
        let (m_v, m_e) = config.seeds.uniform_shape().ok_or(PredictError::Heterogeneous)?;
        Ok(ModelParams::new(
            config.initial.m_v() as u64,
            config.initial.m_e() as u64,
            m_v as u64,
            m_e as u64,
            config.r as u64,
        )?
        .with_churn(config.p_r, config.p_a))
    }

    /// `p = (1 - p_r)(1 + p_a)`.
    pub fn p(&self) -> f64 {
        (1.0 - self.p_r) * (1.0 + self.p_a)
    }

    pub fn q(&self) -> u64 {
        2 * self.r
    }

    /// Edges contributed by one seed copy.
    pub fn seed_cost(&self) -> u64 {
        self.m_e + 2 * self.m_v
    }

    /// Initial average degree as used by the seed-based formulas, `2 m_e / m_v`.
    pub fn seed_average_degree(&self) -> f64 {
        2.0 * self.m_e as f64 / self.m_v as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Counts<T> {
    pub n_v: T,
    pub n_e: T,
    pub n_be: T,
}

/// `sum_{k<t} base^k`, evaluated literally so `base = 1` needs no special case.
fn geometric(base: u64, t: u32) -> Option<u64> {
    let mut acc: u64 = 0;
    let mut term: u64 = 1;
    for k in 0..t {
        acc = acc.checked_add(term)?;
        if k + 1 < t {
            term = term.checked_mul(base)?;
        }
    }
    Some(acc)
}

fn geometric_big(base: u64, t: u32) -> BigUint {
    let base = BigUint::from(base);
    let mut acc = BigUint::zero();
    let mut term = BigUint::one();
    for _ in 0..t {
        acc += &term;
        term *= &base;
    }
    acc
}

/// Exact vertex, edge, and bound-edge counts of the deterministic model at `t`.
pub fn counts_deterministic(params: &ModelParams, t: u32) -> Result<Counts<u64>, PredictError> {
    let of = PredictError::Overflow { t };
    let g = geometric(params.q(), t).ok_or(of.clone())?;
    let n_v = params
        .m_v
        .checked_mul(params.n_e0)
        .and_then(|x| x.checked_mul(g))
        .and_then(|x| x.checked_add(params.n_v0))
        .ok_or(of.clone())?;
    let n_e = params
        .seed_cost()
        .checked_mul(params.n_e0)
        .and_then(|x| x.checked_mul(g))
        .and_then(|x| x.checked_add(params.n_e0))
        .ok_or(of.clone())?;
    let n_be = params
        .q()
        .checked_pow(t)
        .and_then(|x| x.checked_mul(params.n_e0))
        .ok_or(of)?;
    Ok(Counts { n_v, n_e, n_be })
}

/// Same as [`counts_deterministic`] with unbounded integers.
pub fn counts_deterministic_big(params: &ModelParams, t: u32) -> Counts<BigUint> {
    let g = geometric_big(params.q(), t);
    let n_e0 = BigUint::from(params.n_e0);
    Counts {
        n_v: BigUint::from(params.n_v0) + BigUint::from(params.m_v) * &n_e0 * &g,
        n_e: &n_e0 + BigUint::from(params.seed_cost()) * &n_e0 * &g,
        n_be: BigUint::from(params.q()).pow(t) * n_e0,
    }
}

/// Largest `t` whose deterministic counts all fit in `u64`.
pub fn max_steps_u64(params: &ModelParams) -> u32 {
    let mut t = 0;
    while counts_deterministic(params, t + 1).is_ok() {
        t += 1;
        if t == u32::MAX {
            break;
        }
    }
    t
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomizedCounts {
    pub n_v: u64,
    /// Expected edge count; real-valued.
    pub n_e: f64,
    pub n_be: u64,
}

/// Counts of the randomized model.
///
/// `N'_e,t = p^(t-1) N_e,0 + M N_e,0 (q^t - p^t) / (q - p)` for `t >= 1`,
/// which is the closed form of `N'_e,s = |Y(s)| + p N'_e,s-1` started from
/// `N'_e,1 = (1 + M) N_e,0`. At `t = 0` the initial counts are returned.
pub fn counts_randomized(params: &ModelParams, t: u32) -> Result<RandomizedCounts, PredictError> {
    let det = counts_deterministic(params, t)?;
    if t == 0 {
        return Ok(RandomizedCounts {
            n_v: det.n_v,
            n_e: params.n_e0 as f64,
            n_be: det.n_be,
        });
    }
    let p = params.p();
    let q = params.q() as f64;
    if (q - p).abs() < f64::EPSILON {
        return Err(PredictError::SingularRetention);
    }
    let n_e0 = params.n_e0 as f64;
    let ti = t as i32;
    let n_e = p.powi(ti - 1) * n_e0 + params.seed_cost() as f64 * n_e0 * (q.powi(ti) - p.powi(ti)) / (q - p);
    Ok(RandomizedCounts {
        n_v: det.n_v,
        n_e,
        n_be: det.n_be,
    })
}

/// Limit of `2 N_e,t / N_v,t`.
///
/// Deterministic: `2M / m_v`. Randomized: `(<k>_0/2 + 2)(q - 1)/(q - p)`.
/// The two normalisations differ (the randomized one is half the
/// deterministic one at `p = 1`); both are kept as stated.
pub fn average_degree_limit(params: &ModelParams, mode: Mode) -> f64 {
    match mode {
        Mode::Deterministic | Mode::Rewire => 2.0 * params.seed_cost() as f64 / params.m_v as f64,
        Mode::Randomized => {
            let q = params.q() as f64;
            (params.seed_average_degree() / 2.0 + 2.0) * (q - 1.0) / (q - params.p())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthSizes {
    pub x_size: u64,
    pub y_size: u64,
    /// `2|Y(t)| / |X(t)|`.
    pub k_new: f64,
}

pub fn new_growth_sizes(params: &ModelParams, t: u32) -> Result<GrowthSizes, PredictError> {
    if t == 0 {
        return Err(PredictError::OutOfRange {
            what: "t",
            value: 0,
            range: "t >= 1".into(),
        });
    }
    let of = PredictError::Overflow { t };
    let copies = params
        .q()
        .checked_pow(t - 1)
        .and_then(|x| x.checked_mul(params.n_e0))
        .ok_or(of.clone())?;
    let x_size = copies.checked_mul(params.m_v).ok_or(of.clone())?;
    let y_size = copies.checked_mul(params.seed_cost()).ok_or(of)?;
    Ok(GrowthSizes {
        x_size,
        y_size,
        k_new: 2.0 * y_size as f64 / x_size as f64,
    })
}

/// Degree and bound-edge count at `t` of an initial vertex of initial degree `d0`.
pub fn degree_initial_vertex(d0: u64, t: u32, r: u64, m_v: u64) -> Result<(u64, u64), PredictError> {
    let of = PredictError::Overflow { t };
    let sum = geometric(r, t).ok_or(of.clone())?;
    let degree = sum
        .checked_mul(m_v)
        .and_then(|x| x.checked_add(1))
        .and_then(|x| x.checked_mul(d0))
        .ok_or(of.clone())?;
    let bound = r.checked_pow(t).and_then(|x| x.checked_mul(d0)).ok_or(of)?;
    Ok((degree, bound))
}

/// Degree and bound-edge count at `t` of a seed vertex born at step `s`.
///
/// `d_g` is its degree inside the seed; `selected` says whether it became a
/// bound-end when it was attached.
pub fn degree_seed_vertex(
    d_g: u64,
    s: u32,
    t: u32,
    r: u64,
    m_v: u64,
    selected: bool,
) -> Result<(u64, u64), PredictError> {
    if s == 0 || s > t {
        return Err(PredictError::OutOfRange {
            what: "s",
            value: s as u64,
            range: format!("1 <= s <= t = {t}"),
        });
    }
    if !selected {
        return Ok((d_g + 2, 0));
    }
    let of = PredictError::Overflow { t };
    let sum = geometric(r, t - s).ok_or(of.clone())?;
    let degree = sum
        .checked_mul(2 * m_v)
        .and_then(|x| x.checked_add(d_g + 2))
        .ok_or(of.clone())?;
    let bound = r.checked_pow(t - s).and_then(|x| x.checked_mul(2)).ok_or(of)?;
    Ok((degree, bound))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailEstimate {
    /// `P(k* > k)` when exactly the initial vertices and the bound-ends born
    /// at steps `1..=tau` exceed `k`.
    pub exact: BigRational,
    /// `(r / m_v) q^(tau - t)`.
    pub asymptotic: f64,
    /// `P(k) ~ (r (q - 1) / m_v) q^(tau - t)`.
    pub pk_asymptotic: f64,
}

fn big(x: u64) -> BigInt {
    BigInt::from(x)
}

fn ratio_big(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn ratio_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Number of vertices that are initial or bound-ends born at steps `1..=tau`.
pub fn tail_numerator(params: &ModelParams, tau: u32) -> BigUint {
    BigUint::from(params.n_v0) + BigUint::from(params.r * params.n_e0) * geometric_big(params.q(), tau)
}

pub fn tail_and_pk(params: &ModelParams, tau: u32, t: u32) -> Result<TailEstimate, PredictError> {
    if tau == 0 || tau >= t {
        return Err(PredictError::OutOfRange {
            what: "tau",
            value: tau as u64,
            range: format!("0 < tau < t = {t}"),
        });
    }
    let exact = ratio_big(tail_numerator(params, tau), counts_deterministic_big(params, t).n_v);
    let q = params.q() as f64;
    let gap = q.powi(tau as i32 - t as i32);
    let r = params.r as f64;
    let m_v = params.m_v as f64;
    Ok(TailEstimate {
        exact,
        asymptotic: r / m_v * gap,
        pk_asymptotic: r * (q - 1.0) / m_v * gap,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentBundle {
    /// `h(r) = q / ln q + 1 / ln(q + m_v)`.
    pub h_r: f64,
    /// `h(r) ln q = q + ln q / ln(q + m_v)`.
    pub gamma_exponent: f64,
    /// `2 + ln 2 / ln(2 + m_v)`, the exponent for `r = 1`.
    pub gamma_r1: f64,
}

pub fn exponents(r: u64, m_v: u64) -> ExponentBundle {
    let q = 2.0 * r as f64;
    let m_v = m_v as f64;
    let h_r = q / q.ln() + 1.0 / (q + m_v).ln();
    ExponentBundle {
        h_r,
        gamma_exponent: h_r * q.ln(),
        gamma_r1: 2.0 + 2f64.ln() / (2.0 + m_v).ln(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EcumPrediction {
    /// `sum_{s<=delta} N_e,s / N_e,t` from the exact counts.
    pub exact: f64,
    /// `q/(q-1) q^(delta-t)` (deterministic) or `q^(delta-t)/(q-1)` (randomized).
    pub asymptotic: f64,
}

/// Edge-cumulative distribution at cut `delta` (the same cut is called
/// `tau` for the randomized model).
pub fn ecum_predicted(params: &ModelParams, delta: u32, t: u32, mode: Mode) -> Result<EcumPrediction, PredictError> {
    if delta == 0 || delta >= t {
        return Err(PredictError::OutOfRange {
            what: "delta",
            value: delta as u64,
            range: format!("0 < delta < t = {t}"),
        });
    }
    let q = params.q() as f64;
    let gap = q.powi(delta as i32 - t as i32);
    match mode {
        Mode::Deterministic | Mode::Rewire => {
            let partial: BigUint = (0..=delta).map(|s| counts_deterministic_big(params, s).n_e).sum();
            let exact = ratio_to_f64(&ratio_big(partial, counts_deterministic_big(params, t).n_e));
            Ok(EcumPrediction {
                exact,
                asymptotic: q / (q - 1.0) * gap,
            })
        }
        Mode::Randomized => {
            let mut partial = 0.0;
            for s in 0..=delta {
                partial += counts_randomized(params, s)?.n_e;
            }
            Ok(EcumPrediction {
                exact: partial / counts_randomized(params, t)?.n_e,
                asymptotic: gap / (q - 1.0),
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VkEkPrediction {
    /// `(r / m_v) q^(tau - t)`.
    pub v_k: f64,
    /// `A q^(tau-t) + (r m_v (q-1) / (M (r-1))) 2^(tau-t) / q` with
    /// `A = ((m*_e + q)/M - r m_v / ((r-1)(q-1))) / 2`.
    pub e_k: f64,
    /// `e_k` plus the finite-size term `m_v / (2^t M)`.
    pub e_k_finite: f64,
}

/// Asymptotic tail fractions under descending-degree selection (`r >= 2`).
pub fn vk_ek_predicted(params: &ModelParams, m_e_star: u64, tau: u32, t: u32) -> Result<VkEkPrediction, PredictError> {
    if params.r < 2 {
        return Err(PredictError::NeedsThicknessTwo);
    }
    if tau > t {
        return Err(PredictError::OutOfRange {
            what: "tau",
            value: tau as u64,
            range: format!("tau <= t = {t}"),
        });
    }
    let r = params.r as f64;
    let q = 2.0 * r;
    let m_v = params.m_v as f64;
    let cost = params.seed_cost() as f64;
    let gap = tau as i32 - t as i32;
    let a = 0.5 * ((m_e_star as f64 + q) / cost - r * m_v / ((r - 1.0) * (q - 1.0)));
    let b = r * m_v * (q - 1.0) / (cost * (r - 1.0));
    let e_k = a * q.powi(gap) + b * 2f64.powi(gap) / q;
    Ok(VkEkPrediction {
        v_k: r / m_v * q.powi(gap),
        e_k,
        e_k_finite: e_k + m_v / (2f64.powi(t as i32) * cost),
    })
}

/// Exact `Q_N(>k) / 2N_e,t` when the vertices above `k` are the initial
/// vertices plus the bound-ends born at steps `1..=tau`, where each seed copy's
/// bound-ends have seed degrees summing to `m_e_star`.
///
/// Summed directly from the per-class degree formulas; valid for every `r`.
pub fn ek_exact(params: &ModelParams, m_e_star: u64, tau: u32, t: u32) -> Result<BigRational, PredictError> {
    if tau > t {
        return Err(PredictError::OutOfRange {
            what: "tau",
            value: tau as u64,
            range: format!("tau <= t = {t}"),
        });
    }
    let r = params.r;
    let n_e0 = big(params.n_e0);
    let m_v = big(params.m_v);
    let r_sum = |n: u32| BigInt::from(geometric_big(r, n));
    // degree sum of the initial graph is 2 N_e,0
    let mut q_gt = big(2) * &n_e0 * (BigInt::one() + &m_v * r_sum(t));
    let mut copies = n_e0.clone();
    for s in 1..=tau {
        let per_copy = big(m_e_star) + big(2 * r) + big(2 * r) * &m_v * r_sum(t - s);
        q_gt += &copies * per_copy;
        copies *= big(2 * r);
    }
    let den = big(2) * BigInt::from(counts_deterministic_big(params, t).n_e);
    Ok(BigRational::new(q_gt, den))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticRatios {
    /// `P(k) / P_ecum ~ (q-1)^2 / (2 m_v)`.
    pub pk_over_ecum: f64,
    /// `P(k* <= k) / P_ecum ~ (m_v - r)(q-1) / (q m_v)`.
    pub ple_over_ecum: f64,
    /// `P_ecum ~ q P'_ecum`.
    pub ecum_link: f64,
    /// `P(k) ~ r (q-1)^2 / m_v P'_ecum`.
    pub pk_over_ecum_rand: f64,
}

pub fn analytic_ratios(params: &ModelParams) -> AnalyticRatios {
    let r = params.r as f64;
    let q = 2.0 * r;
    let m_v = params.m_v as f64;
    AnalyticRatios {
        pk_over_ecum: (q - 1.0).powi(2) / (2.0 * m_v),
        ple_over_ecum: (m_v - r) * (q - 1.0) / (q * m_v),
        ecum_link: q,
        pk_over_ecum_rand: r * (q - 1.0).powi(2) / m_v,
    }
}

/// Alternative edge-count forms that are known to disagree with generated
/// models. Verification runs them as negative controls.
pub mod negative_controls {
    use super::ModelParams;

    /// `N_e,k = N_e,k-1 + M N_e,k-1` for `k >= 2`, seeded with the correct
    /// `N_e,1`: grows every edge instead of only the bound-edges.
    pub fn edges_all_edge_recursion(params: &ModelParams, t: u32) -> f64 {
        let base = params.n_e0 as f64;
        if t == 0 {
            return base;
        }
        let factor = 1.0 + params.seed_cost() as f64;
        base * factor.powi(t as i32)
    }

    /// The randomized closed form with a bare `p^(t-1)` leading term, i.e.
    /// without the initial edge count factor.
    pub fn randomized_edges_bare_leading_term(params: &ModelParams, t: u32) -> f64 {
        let p = params.p();
        let q = params.q() as f64;
        let ti = t as i32;
        p.powi(ti - 1) + params.seed_cost() as f64 * params.n_e0 as f64 * (q.powi(ti) - p.powi(ti)) / (q - p)
    }
}
