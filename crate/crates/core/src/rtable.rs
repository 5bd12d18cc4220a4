//! Distribution tables `r_i(p)` of discrete logarithms along the affine line
//! `α + F_p`, the circulant inequality systems they induce on a candidate
//! partial-augmentation vector, and the Gauss-sum equidistribution diagnostics
//! that bound how skewed an `r`-table can be.
//!
//! For a primitive root `α` of `F_{p²}` and `d | p² − 1`, define
//!
//! ```text
//! r_i(p) = #{ t ∈ F_p : dlog_α(α + t) ≡ i (mod d) },      Σ_i r_i = p.
//! ```
//!
//! Storage is 0-indexed by the residue `i mod d`, so `stored[0]` counts the
//! residue-0 class (written `r_d` in 1-indexed displays) and `stored[k]`,
//! `k ≥ 1`, counts residue `k`. The 1-indexed display order `(r_1, …, r_d)` is
//! the left rotation of the stored vector, available via [`RTable::paper_order`].

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::QuadField;
use crate::group::Side;

/// Errors for table/vector shape mismatches.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    /// A vector's length does not match the modulus `d` it is used with.
    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    /// Entries of a partial-augmentation vector must sum to 1.
    #[error("partial augmentations must sum to 1, got {0}")]
    BadAugmentationSum(i64),
}

/// A candidate vector of partial augmentations, indexed canonically: entry `i`
/// is the partial augmentation `ε_i` on the conjugacy class of `(α^i, 1)`
/// (equivalently, of `(1, β^{(−i) mod d})`).
///
/// The entries always sum to 1 (the augmentation of a unit); support on the
/// order-`pq` classes is built into the indexing — there are no entries for
/// other classes to be nonzero on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpsilonVector {
    canonical: Vec<i64>,
}

impl EpsilonVector {
    /// Wrap a canonical-indexed vector; validates `len == d` and `Σ = 1`.
    pub fn new(canonical: Vec<i64>, d: u64) -> Result<EpsilonVector, TableError> {
        if canonical.len() != d as usize {
            return Err(TableError::DimensionMismatch {
                expected: d as usize,
                got: canonical.len(),
            });
        }
        let sum: i64 = canonical.iter().sum();
        if sum != 1 {
            return Err(TableError::BadAugmentationSum(sum));
        }
        Ok(EpsilonVector { canonical })
    }

    /// The standard basis vector `e_k` (the trivial unit supported on `(α^k, 1)`).
    pub fn unit(d: u64, k: usize) -> EpsilonVector {
        let mut v = vec![0i64; d as usize];
        v[k % d as usize] = 1;
        EpsilonVector { canonical: v }
    }

    pub fn d(&self) -> u64 {
        self.canonical.len() as u64
    }

    /// Entries in canonical `(α^i, 1)` indexing.
    pub fn canonical(&self) -> &[i64] {
        &self.canonical
    }

    /// Sum of entries (1 by construction).
    pub fn sum(&self) -> i64 {
        self.canonical.iter().sum()
    }

    /// Number of nonzero entries. A counterexample candidate needs at least 2:
    /// support 1 means the unit is a trivial unit up to rational conjugacy.
    pub fn support_size(&self) -> usize {
        self.canonical.iter().filter(|&&e| e != 0).count()
    }

    /// Entries re-indexed for the given side's class representatives.
    ///
    /// On [`Side::P`] the representative of class `j` is `(α^j, 1)` — canonical
    /// indexing verbatim. On [`Side::Q`] it is `(1, β^j)`, whose canonical class
    /// is `(−j) mod d`, so entry `j` is `canonical[(d − j) mod d]`.
    pub fn for_side(&self, side: Side) -> Vec<i64> {
        let d = self.canonical.len();
        match side {
            Side::P => self.canonical.clone(),
            Side::Q => (0..d).map(|j| self.canonical[(d - j) % d]).collect(),
        }
    }
}

/// The table `r_i(p)` for one side's field, stored 0-indexed by residue class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RTable {
    pub side: Side,
    pub prime: u64,
    pub d: u64,
    /// `stored[i] = #{t ∈ F_p : dlog(α + t) ≡ i mod d}`.
    pub stored: Vec<u64>,
}

impl RTable {
    /// The 1-indexed display order `(r_1, …, r_{d−1}, r_d)`: left rotation of
    /// the stored vector (the residue-0 count is written last as `r_d`).
    pub fn paper_order(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.stored[1..].to_vec();
        v.push(self.stored[0]);
        v
    }
}

/// Compute the `r`-table of `field` for modulus `d` by direct discrete logs.
///
/// Requires `d | p² − 1` (guaranteed whenever `d | p − 1`); panics otherwise
/// since the residue classes would be ill-defined.
pub fn r_table(field: &QuadField, d: u64, side: Side) -> RTable {
    assert!(
        field.unit_group_order() % d == 0,
        "d must divide p^2 - 1 for residue classes to be defined"
    );
    let p = field.p();
    let mut stored = vec![0u64; d as usize];
    for t in 0..p {
        let x = field.add(field.alpha(), field.scalar(t));
        let j = field.dlog(x).expect("alpha + t is nonzero");
        stored[(j % d) as usize] += 1;
    }
    RTable { side, prime: p, d, stored }
}

/// Independent recomputation of the `r`-table through norms: requires
/// `d | p − 1`, in which case `dlog_α(x) ≡ dlog_ν(N(x)) (mod d)` for the norm
/// `ν = N(α) = c₀`, a generator of `F_p^×`.
///
/// This avoids `F_{p²}` discrete logs entirely (only `F_p^×` logs to base `ν`),
/// so it is a genuinely independent cross-check of [`r_table`].
pub fn r_table_norm_method(field: &QuadField, d: u64, side: Side) -> RTable {
    let p = field.p();
    assert!((p - 1) % d == 0, "norm method needs d | p - 1");
    // dlogs in F_p^× to base ν by direct enumeration (ν generates: it is the
    // norm of a primitive element, and the norm map is surjective onto F_p^×).
    let nu = field.poly().1;
    let mut dlog_fp = vec![u64::MAX; p as usize];
    let mut x = 1u64;
    for j in 0..(p - 1) {
        debug_assert_eq!(dlog_fp[x as usize], u64::MAX);
        dlog_fp[x as usize] = j;
        x = x * nu % p;
    }
    assert_eq!(x, 1, "norm of alpha must generate F_p^x");
    // With ν = α^{p+1}: if x = α^j then N(x) = ν^j, so dlog_ν(N(x)) = j mod (p−1),
    // which determines j mod d because d | p − 1. The norm of α + t is evaluated
    // through the quadratic N(α + t) = t² + c₁t + c₀, keeping this path free of
    // any F_{p²} arithmetic.
    let mut stored = vec![0u64; d as usize];
    for t in 0..p {
        let n = (t * t % p + field.poly().0 * t % p + nu) % p;
        let k = dlog_fp[n as usize];
        debug_assert_ne!(k, u64::MAX);
        stored[(k % d) as usize] += 1;
    }
    RTable { side, prime: p, d, stored }
}

/// The `d` circulant inequality values `row_j = Σ_k stored[(j+k) mod d]·ε'_k`,
/// where `ε'` is `eps` re-indexed for the table's side.
///
/// A candidate survives this side's obstruction iff every row is ≥ 0; the rows
/// are also exactly the multiplicities of the coset-kernel summands in the
/// side's lattice assembly.
pub fn inequality_values(rt: &RTable, eps: &EpsilonVector) -> Result<Vec<i64>, TableError> {
    if eps.d() != rt.d {
        return Err(TableError::DimensionMismatch {
            expected: rt.d as usize,
            got: eps.d() as usize,
        });
    }
    let d = rt.d as usize;
    let side_eps = eps.for_side(rt.side);
    Ok((0..d)
        .map(|j| {
            (0..d)
                .map(|k| rt.stored[(j + k) % d] as i64 * side_eps[k])
                .sum()
        })
        .collect())
}

/// Outcome of the Gauss-sum equidistribution diagnostic for one `r`-table.
///
/// With `ω = Σ_i (r_i − p/d)·ζ_d^i` the relevant quadratic Gauss sum, the
/// classical identity gives `|ω|² = p` exactly when `d ∤ p + 1`, and `|ω|² = 1`
/// when `d | p + 1` (the restricted character trivializes on `F_p^×`). For
/// `d = 3` both sides are certified in integers: with `e_i = 3·r_i − p`,
/// `9·|ω|² = Σe_i² − Σ_{i<j} e_i e_j`. For other `d` a floating-point
/// evaluation with tolerance `1e−6` is reported (diagnostic only; no verdict
/// bit depends on it).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussSumCheck {
    pub prime: u64,
    pub d: u64,
    /// Does `d` divide `p + 1`? (If so, `|ω|² = 1` rather than `p`.)
    pub d_divides_p_plus_1: bool,
    /// `9·|ω|²` as an exact integer (only for `d = 3`).
    pub nine_omega_sq: Option<i64>,
    /// `|ω|²` in floating point (all `d`).
    pub omega_sq_float: f64,
    /// Whether `|ω|² = p` holds (exact for `d = 3`, tolerance `1e−6` otherwise).
    pub identity_holds: bool,
}

/// Evaluate the Gauss-sum diagnostic for an `r`-table.
pub fn gauss_sum_check(rt: &RTable) -> GaussSumCheck {
    let p = rt.prime;
    let d = rt.d;
    let df = d as f64;
    let (mut re, mut im) = (0f64, 0f64);
    for (i, &r) in rt.stored.iter().enumerate() {
        let delta = r as f64 - p as f64 / df;
        let theta = std::f64::consts::TAU * i as f64 / df;
        re += delta * theta.cos();
        im += delta * theta.sin();
    }
    let omega_sq_float = re * re + im * im;
    let nine_omega_sq = (d == 3).then(|| {
        let e: Vec<i64> = rt.stored.iter().map(|&r| 3 * r as i64 - p as i64).collect();
        let sq: i64 = e.iter().map(|&x| x * x).sum();
        let cross: i64 = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).map(|(i, j)| e[i] * e[j]).sum();
        sq - cross
    });
    let identity_holds = match nine_omega_sq {
        Some(n) => n == 9 * p as i64,
        None => (omega_sq_float - p as f64).abs() <= 1e-6,
    };
    GaussSumCheck {
        prime: p,
        d,
        d_divides_p_plus_1: (p + 1) % d == 0,
        nine_omega_sq,
        omega_sq_float,
        identity_holds,
    }
}

/// Uniform deviation bound `δ(p, d) = sqrt(p / (1 − |cos(2π/d)|))`: every entry
/// of a valid `r`-table satisfies `|r_i − p/d| ≤ δ(p, d)`, because the
/// deviations are trigonometric averages of Gauss sums of modulus at most
/// `sqrt(p)`. For `d = 3` the bound is exactly `sqrt(2p)`.
pub fn delta_bound(p: u64, d: u64) -> f64 {
    let c = (std::f64::consts::TAU / d as f64).cos().abs();
    (p as f64 / (1.0 - c)).sqrt()
}

/// Check `|r_i − p/d| ≤ delta_bound(p, d)` for every entry.
///
/// For `d = 3` the comparison is done in integers — `|3·r_i − p|² ≤ 9·(2p)` —
/// so no floating point enters; other `d` compare in `f64` with a `1e−9` slack.
pub fn delta_bound_holds(rt: &RTable) -> bool {
    let p = rt.prime;
    if rt.d == 3 {
        rt.stored.iter().all(|&r| {
            let e = 3 * r as i64 - p as i64;
            e * e <= 18 * p as i64
        })
    } else {
        let bound = delta_bound(p, rt.d) + 1e-9;
        rt.stored
            .iter()
            .all(|&r| (r as f64 - p as f64 / rt.d as f64).abs() <= bound)
    }
}

/// The quantitative threshold `d⁴·M² / (1 − |cos(2π/d)|)`: primes above it are
/// guaranteed (by the deviation bound) to pass every inequality system built
/// from a candidate vector with entries bounded by `M` in absolute value.
/// For `d = 3` this is exactly `162·M²`.
pub fn corollary_threshold(d: u64, m_bound: u64) -> f64 {
    assert!(d >= 3 && d % 2 == 1, "threshold defined for odd d >= 3");
    assert!(m_bound >= 1);
    let c = (std::f64::consts::TAU / d as f64).cos().abs();
    (d as f64).powi(4) * (m_bound as f64).powi(2) / (1.0 - c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::QuadField;

    #[test]
    fn r_table_golden_7() {
        let f = QuadField::new(7, 1, 3).unwrap();
        let rt = r_table(&f, 3, Side::P);
        assert_eq!(rt.stored, vec![1, 2, 4]);
        assert_eq!(rt.paper_order(), vec![2, 4, 1]);
    }

    #[test]
    fn r_table_golden_19() {
        let f = QuadField::new(19, 1, 2).unwrap();
        let rt = r_table(&f, 3, Side::Q);
        assert_eq!(rt.stored, vec![4, 9, 6]);
        assert_eq!(rt.paper_order(), vec![9, 6, 4]);
    }

    #[test]
    fn r_table_entries_sum_to_p() {
        for (p, c1, c0, d) in [(7u64, 1, 3, 3u64), (19, 1, 2, 3), (31, 1, 12, 3), (11, 1, 7, 5)] {
            let f = QuadField::new(p, c1, c0).unwrap();
            let rt = r_table(&f, d, Side::P);
            assert_eq!(rt.stored.iter().sum::<u64>(), p);
        }
    }

    #[test]
    fn norm_method_agrees() {
        for (p, d) in [(7u64, 3u64), (19, 3), (31, 3), (13, 3), (11, 5), (163, 3)] {
            let (c1, c0) = crate::field::canonical_primitive_poly(p).unwrap();
            let f = QuadField::new(p, c1, c0).unwrap();
            assert_eq!(r_table(&f, d, Side::P).stored, r_table_norm_method(&f, d, Side::P).stored);
        }
    }

    #[test]
    fn epsilon_vector_validation() {
        assert!(EpsilonVector::new(vec![2, -1, 0], 3).is_ok());
        assert!(matches!(
            EpsilonVector::new(vec![2, -1], 3),
            Err(TableError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            EpsilonVector::new(vec![2, -1, 1], 3),
            Err(TableError::BadAugmentationSum(2))
        ));
        let e = EpsilonVector::new(vec![2, -1, 0], 3).unwrap();
        assert_eq!(e.sum(), 1);
        assert_eq!(e.support_size(), 2);
    }

    #[test]
    fn side_reindexing_reflects() {
        let e = EpsilonVector::new(vec![2, -1, 0], 3).unwrap();
        assert_eq!(e.for_side(Side::P), vec![2, -1, 0]);
        assert_eq!(e.for_side(Side::Q), vec![2, 0, -1]);
    }

    #[test]
    fn inequality_rows_reference_candidate() {
        let fp = QuadField::new(7, 1, 3).unwrap();
        let fq = QuadField::new(19, 1, 2).unwrap();
        let eps = EpsilonVector::new(vec![2, -1, 0], 3).unwrap();
        let rows_p = inequality_values(&r_table(&fp, 3, Side::P), &eps).unwrap();
        let rows_q = inequality_values(&r_table(&fq, 3, Side::Q), &eps).unwrap();
        assert_eq!(rows_p, vec![0, 0, 7]);
        assert_eq!(rows_q, vec![2, 14, 3]);
    }

    #[test]
    fn inequality_rows_failing_candidate() {
        let fp = QuadField::new(7, 1, 3).unwrap();
        let eps = EpsilonVector::new(vec![-1, 2, 0], 3).unwrap();
        let rows = inequality_values(&r_table(&fp, 3, Side::P), &eps).unwrap();
        assert_eq!(rows, vec![3, 6, -2]);
        assert!(rows.iter().any(|&v| v < 0));
    }

    #[test]
    fn unit_vector_rows_are_table_rotations() {
        let f = QuadField::new(19, 1, 2).unwrap();
        let rt = r_table(&f, 3, Side::P);
        for k in 0..3usize {
            let rows = inequality_values(&rt, &EpsilonVector::unit(3, k)).unwrap();
            let expect: Vec<i64> = (0..3).map(|j| rt.stored[(j + k) % 3] as i64).collect();
            assert_eq!(rows, expect);
        }
    }

    #[test]
    fn gauss_identity_for_reference_primes() {
        for p in [7u64, 19, 163] {
            let (c1, c0) = crate::field::canonical_primitive_poly(p).unwrap();
            let f = QuadField::new(p, c1, c0).unwrap();
            let chk = gauss_sum_check(&r_table(&f, 3, Side::P));
            assert!(!chk.d_divides_p_plus_1);
            assert_eq!(chk.nine_omega_sq, Some(9 * p as i64));
            assert!(chk.identity_holds);
        }
    }

    #[test]
    fn gauss_degenerate_case_167() {
        // 3 | 167 + 1, so the restricted character is trivial on F_p^× and
        // |ω|² collapses to 1 instead of p.
        let (c1, c0) = crate::field::canonical_primitive_poly(167).unwrap();
        let f = QuadField::new(167, c1, c0).unwrap();
        let rt = r_table(&f, 3, Side::P);
        assert_eq!(rt.stored, vec![55, 56, 56]);
        let chk = gauss_sum_check(&rt);
        assert!(chk.d_divides_p_plus_1);
        assert_eq!(chk.nine_omega_sq, Some(9));
        assert!(!chk.identity_holds);
        // The deviation bound still holds (it only needs |ω|² ≤ p).
        assert!(delta_bound_holds(&rt));
    }

    #[test]
    fn delta_bound_reference_tables() {
        for p in [7u64, 19, 31, 13, 163, 167] {
            let (c1, c0) = crate::field::canonical_primitive_poly(p).unwrap();
            let f = QuadField::new(p, c1, c0).unwrap();
            assert!(delta_bound_holds(&r_table(&f, 3, Side::P)));
        }
    }

    #[test]
    fn threshold_d3_is_162_m_sq() {
        // d = 3: 1 − cos(2π/3) = 3/2 exactly, so the threshold is 162·M²
        // (up to floating-point evaluation of the cosine).
        assert!((corollary_threshold(3, 1) - 162.0).abs() < 1e-9);
        assert!((corollary_threshold(3, 2) - 648.0).abs() < 1e-9);
    }
}
