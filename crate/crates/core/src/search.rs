//! Search for parameter families `(p, q, d, M)` where the counterexample
//! machinery is guaranteed (or empirically observed) to produce units.
//!
//! A prime `p` is *admissible* for `d` when `d | p² − 1`, so that discrete-log
//! residues mod `d` are defined and the `r`-table exists. It is *strongly*
//! admissible when `d | p − 1`; then the Gauss-sum identity `|ω|² = p` holds
//! and the quantitative bound on the table deviations kicks in. The corollary
//! threshold `d⁴M²/(1 − cos(2π/d))` turns that bound into a guarantee: for a
//! pair of strongly admissible primes both above the threshold, *every*
//! admissible augmentation vector with entries bounded by `M` passes all
//! inequalities, so every such vector yields a counterexample unit.
//!
//! The search enumerates admissible primes up to a cap, forms all unordered
//! pairs above the threshold, flags the guaranteed ones, and can additionally
//! run an *effective check*: enumerate (or sample) the bounded augmentation
//! box and verify the inequalities hold for each candidate on both sides.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;
use crate::field::{canonical_primitive_poly, FieldError, QuadField};
use crate::group;
use crate::group::Side;
use crate::rtable::{
    self, corollary_threshold, gauss_sum_check, inequality_values, EpsilonVector, GaussSumCheck,
    RTable,
};

/// Box sizes up to this many vectors are enumerated exhaustively in the
/// effective check; larger boxes are sampled.
const EXHAUSTIVE_BOX_LIMIT: u64 = 100_000;

/// Number of sampled augmentation vectors when the box is too large to
/// enumerate.
const SAMPLE_COUNT: u64 = 50;

/// Errors from the pair search.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    /// `d` must be odd and at least 3.
    #[error("search requires an odd modulus d >= 3, got {d}")]
    InvalidD { d: u64 },
    /// The augmentation bound must be at least 1.
    #[error("search requires an augmentation bound M >= 1, got {m}")]
    InvalidBound { m: i64 },
    /// Field construction failed for an admissible prime.
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// One admissible prime found by the sieve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissiblePrime {
    pub prime: u64,
    /// Canonical primitive polynomial coefficients `(c1, c0)` for `X² − c1·X + c0`.
    pub poly: (u64, u64),
    /// `d | p − 1` (Gauss-sum identity and deviation bound apply).
    pub strong: bool,
    /// Is the prime above the corollary threshold for the requested `M`?
    pub above_threshold: bool,
}

/// Result of checking the bounded augmentation box against the inequalities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EffectiveCheck {
    /// How many proper candidates (sum 1, support ≥ 2, entries in `[−M, M]`)
    /// were examined.
    pub eps_checked: u64,
    /// Whether the whole box was enumerated (vs. sampled).
    pub exhaustive: bool,
    /// Did every candidate pass all inequalities on both sides?
    pub all_pass: bool,
    /// The first failing augmentation vector, if any.
    pub first_failure: Option<Vec<i64>>,
}

/// One unordered pair of admissible primes above the threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimePair {
    pub p: u64,
    pub q: u64,
    pub d: u64,
    pub m_bound: i64,
    /// Both primes strongly admissible: every bounded candidate is proven to
    /// pass without checking.
    pub guaranteed: bool,
    pub group_order_factored: Vec<(u64, u32)>,
    pub gauss_p: GaussSumCheck,
    pub gauss_q: GaussSumCheck,
    pub effective: Option<EffectiveCheck>,
}

/// Full outcome of a search run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub d: u64,
    pub m_bound: i64,
    pub p_max: u64,
    pub seed: u64,
    /// `d⁴M² / (1 − cos(2π/d))`: primes above this satisfy the guarantee
    /// when strongly admissible.
    pub threshold: f64,
    /// All admissible primes up to `p_max` (including below-threshold ones,
    /// which are reported but not paired).
    pub primes: Vec<AdmissiblePrime>,
    /// Unordered pairs `(p < q)` of above-threshold primes, in lexicographic
    /// order.
    pub pairs: Vec<PrimePair>,
}

/// All proper candidates in the box `[−M, M]^d` (sum 1, support ≥ 2),
/// enumerated in odometer order.
fn enumerate_box(d: u64, m: i64) -> Vec<Vec<i64>> {
    let width = (2 * m + 1) as u64;
    let mut out = Vec::new();
    let mut digits = vec![0u64; d as usize];
    loop {
        let eps: Vec<i64> = digits.iter().map(|&t| t as i64 - m).collect();
        if eps.iter().sum::<i64>() == 1 && eps.iter().filter(|&&e| e != 0).count() >= 2 {
            out.push(eps);
        }
        let mut pos = 0;
        loop {
            if pos == digits.len() {
                return out;
            }
            digits[pos] += 1;
            if digits[pos] < width {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}

/// Deterministically sample `count` proper candidates from the box.
fn sample_box(d: u64, m: i64, count: u64, seed: u64) -> Vec<Vec<i64>> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count as usize);
    while (out.len() as u64) < count {
        let mut eps: Vec<i64> = (1..d).map(|_| rng.gen_range(-m..=m)).collect();
        let last = 1 - eps.iter().sum::<i64>();
        if last.abs() > m {
            continue;
        }
        eps.push(last);
        if eps.iter().filter(|&&e| e != 0).count() >= 2 {
            out.push(eps);
        }
    }
    out
}

/// Do all inequality rows come out non-negative on both sides for `eps`?
fn candidate_passes(rt_p: &RTable, rt_q: &RTable, eps: &EpsilonVector) -> bool {
    let rows_p = inequality_values(rt_p, eps).expect("dimension fixed by construction");
    let rows_q = inequality_values(rt_q, eps).expect("dimension fixed by construction");
    rows_p.iter().chain(rows_q.iter()).all(|&v| v >= 0)
}

fn effective_check(
    d: u64,
    m: i64,
    seed: u64,
    rt_p: &RTable,
    rt_q: &RTable,
) -> EffectiveCheck {
    let width = 2 * m as u64 + 1;
    let box_size = width.checked_pow(d as u32).unwrap_or(u64::MAX);
    let exhaustive = box_size <= EXHAUSTIVE_BOX_LIMIT;
    let candidates = if exhaustive {
        enumerate_box(d, m)
    } else {
        sample_box(d, m, SAMPLE_COUNT, seed)
    };
    let mut first_failure = None;
    for eps_raw in &candidates {
        let eps = EpsilonVector::new(eps_raw.clone(), d).expect("generated with sum 1");
        if !candidate_passes(rt_p, rt_q, &eps) {
            first_failure = Some(eps_raw.clone());
            break;
        }
    }
    EffectiveCheck {
        eps_checked: candidates.len() as u64,
        exhaustive,
        all_pass: first_failure.is_none(),
        first_failure,
    }
}

/// Enumerate admissible primes up to `p_max` and pair the above-threshold
/// ones, optionally running the effective box check on every pair.
///
/// `seed` feeds the deterministic sampler used when a box is too large to
/// enumerate; two runs with equal arguments produce identical outcomes.
pub fn search_prime_pairs(
    d: u64,
    m_bound: i64,
    p_max: u64,
    effective: bool,
    seed: u64,
) -> Result<SearchOutcome, SearchError> {
    if d < 3 || d % 2 == 0 {
        return Err(SearchError::InvalidD { d });
    }
    if m_bound < 1 {
        return Err(SearchError::InvalidBound { m: m_bound });
    }
    let threshold = corollary_threshold(d, m_bound as u64);

    let mut primes = Vec::new();
    for p in arith::primes_up_to(p_max) {
        if p == 2 || (p * p - 1) % d != 0 {
            continue;
        }
        let poly = canonical_primitive_poly(p)?;
        primes.push(AdmissiblePrime {
            prime: p,
            poly,
            strong: (p - 1) % d == 0,
            above_threshold: p as f64 > threshold,
        });
    }

    let paired: Vec<AdmissiblePrime> =
        primes.iter().copied().filter(|a| a.above_threshold).collect();
    let mut tables: BTreeMap<u64, (RTable, RTable)> = BTreeMap::new();
    for a in &paired {
        let fld = QuadField::new(a.prime, a.poly.0, a.poly.1)?;
        // The same field serves as the smaller or larger member of a pair;
        // the stored table is side-independent, only the label differs.
        let t_p = rtable::r_table(&fld, d, Side::P);
        let t_q = rtable::r_table(&fld, d, Side::Q);
        tables.insert(a.prime, (t_p, t_q));
    }

    let mut pairs = Vec::new();
    for (i, a) in paired.iter().enumerate() {
        for b in &paired[i + 1..] {
            let (rt_p, _) = &tables[&a.prime];
            let (_, rt_q) = &tables[&b.prime];
            let eff = effective
                .then(|| effective_check(d, m_bound, seed, rt_p, rt_q));
            pairs.push(PrimePair {
                p: a.prime,
                q: b.prime,
                d,
                m_bound,
                guaranteed: a.strong && b.strong,
                group_order_factored: group::group_order_factored(a.prime, b.prime, d),
                gauss_p: gauss_sum_check(rt_p),
                gauss_q: gauss_sum_check(rt_q),
                effective: eff,
            });
        }
    }

    Ok(SearchOutcome {
        d,
        m_bound,
        p_max,
        seed,
        threshold,
        primes,
        pairs,
    })
}
