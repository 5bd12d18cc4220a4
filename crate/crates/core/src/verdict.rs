//! Multiplicity tables, the overall verdict, and the serializable certificate.
//!
//! For a side with prime `s`, the rational irreducibles of the section
//! `N_s × U_s` fall into `3 + d` orbits under the conjugation action of
//! `C_G(n)`: the trivial character, the character with kernel `N_s`, the orbit
//! whose kernels contain `U_s`, and `d` orbits of coset-type kernels with
//! representatives `φ_0, …, φ_{d−1}` (kernel generated by the scalar line and
//! `(α^{i(s+1)+1}, c)`). The multiplicity of each orbit in the candidate's
//! lattice decomposition is:
//!
//! * `μ(trivial) = Σε`, `μ(kernel = N_s) = 0`, `μ(kernel ⊇ U_s) = Σε` —
//!   constants for any unit candidate (`Σε = 1`);
//! * `μ(φ_i) = row_{ℓ(i)}` of the side's circulant inequality system, where
//!   `ℓ(i) = dlog(λ_i) mod d` and `λ_i` is the scalar normalizing the defining
//!   coset of `φ_i`'s kernel back to `α + F_s`.
//!
//! A candidate is certified iff the augmentation data is a genuine non-trivial
//! unit shape (`Σε = 1`, support ≥ 2) and every inequality row on both sides is
//! non-negative; the eigenvalue condition and the degree census corroborate the
//! verdict and are recorded alongside.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::chars::{self, CharError, DegreeCensus, EigenvalueOutcome};
use crate::group::{GroupParams, Side};
use crate::rtable::{self, EpsilonVector, GaussSumCheck};

/// The orbit multiplicity table of one side (`3 + d` entries).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuTable {
    pub side: Side,
    pub prime: u64,
    /// Multiplicity of the trivial character's summand.
    pub trivial: i64,
    /// Multiplicity of the kernel-`N_s` summand (always 0).
    pub kernel_n: i64,
    /// Multiplicity of the `U_s ⊆ kernel` orbit's summand.
    pub contains_u: i64,
    /// `coset[i] = μ(φ_i)`, the multiplicity of the `i`-th coset-kernel orbit.
    pub coset: Vec<i64>,
    /// `ells[i] = ℓ(i)`: which inequality row feeds `coset[i]`.
    pub ells: Vec<u64>,
}

impl MuTable {
    /// All `3 + d` entries in display order (trivial, kernel-N, contains-U, cosets).
    pub fn entries(&self) -> Vec<i64> {
        let mut v = vec![self.trivial, self.kernel_n, self.contains_u];
        v.extend_from_slice(&self.coset);
        v
    }

    pub fn all_nonnegative(&self) -> bool {
        self.entries().iter().all(|&m| m >= 0)
    }
}

/// Compute the multiplicity table for `side`.
pub fn mu_table(
    params: &GroupParams,
    eps: &EpsilonVector,
    side: Side,
) -> Result<MuTable, CharError> {
    let fld = side.field(params);
    let s = fld.p();
    let d = params.d();
    let rt = rtable::r_table(fld, d, side);
    let rows = rtable::inequality_values(&rt, eps)?;
    let mut coset = Vec::with_capacity(d as usize);
    let mut ells = Vec::with_capacity(d as usize);
    for i in 0..d {
        // Defining coset of φ_i's kernel: α^{i(s+1)+1} + F_s·1. Normalizing it
        // to α + F_s divides by the α-coefficient λ⁻¹ of the generator, and the
        // relevant row index is ℓ(i) = dlog(λ) mod d.
        let g_i = fld.pow(fld.alpha(), i * (s + 1) + 1);
        debug_assert_ne!(g_i.v, 0, "coset generator never lies in F_s");
        let lambda = fld.inv(fld.scalar(g_i.v)).expect("nonzero scalar");
        let ell_i = fld.dlog(lambda).expect("nonzero") % d;
        debug_assert_eq!(
            ell_i,
            (d - (i * (s + 1)) % d) % d,
            "normalizer exponent must equal −i(s+1) mod d"
        );
        coset.push(rows[ell_i as usize]);
        ells.push(ell_i);
    }
    Ok(MuTable {
        side,
        prime: s,
        trivial: eps.sum(),
        kernel_n: 0,
        contains_u: eps.sum(),
        coset,
        ells,
    })
}

/// Echo of the validated parameters inside a certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsEcho {
    pub p: u64,
    pub q: u64,
    pub d: u64,
    pub poly_p: (u64, u64),
    pub poly_q: (u64, u64),
    /// `|G|` in decimal (may exceed `u64`).
    pub group_order: String,
    pub group_order_factored: Vec<(u64, u32)>,
}

/// Per-side tables recorded in a certificate. `r_stored` is 0-indexed by
/// residue class; `r_display` is the 1-indexed order `(r_1, …, r_d)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SideReport {
    pub side: Side,
    pub prime: u64,
    pub r_stored: Vec<u64>,
    pub r_display: Vec<u64>,
    pub inequality_rows: Vec<i64>,
    pub mu: MuTable,
    pub gauss: GaussSumCheck,
    pub delta_bound_ok: bool,
}

/// A reason the candidate fails to be a counterexample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Failure {
    /// Support size 1: the unit exists but is a trivial unit up to rational
    /// conjugacy, so it witnesses nothing.
    SupportSizeOne,
    /// An inequality row went negative (row index is 0-based; `row_display`
    /// is the same row 1-indexed).
    NegativeRow {
        side: Side,
        prime: u64,
        row: usize,
        row_display: usize,
        value: i64,
    },
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::SupportSizeOne => {
                write!(f, "support size 1: unit exists but is trivially rationally conjugate")
            }
            Failure::NegativeRow { side, prime, row, row_display, value } => write!(
                f,
                "inequality row {row} (1-indexed: {row_display}) on side {side} (prime {prime}) is negative: {value}"
            ),
        }
    }
}

/// The boolean outcome with its reasons.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub is_counterexample: bool,
    pub failures: Vec<Failure>,
}

/// Eichler-condition summary derived from the degree census.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EichlerCheck {
    pub min_nonlinear_degree: u64,
    /// Satisfied iff every nonlinear irreducible degree is at least 3.
    pub ok: bool,
}

/// The complete machine-checkable certificate for one `(params, ε)` candidate.
///
/// Serialization is deterministic (fixed field order, no timestamps, no
/// floating point except the flagged Gauss diagnostic), so byte-identical
/// certificates are reproducible across runs; `params_hash` commits to the
/// input parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub params: ParamsEcho,
    pub epsilon_canonical: Vec<i64>,
    pub epsilon_side_p: Vec<i64>,
    pub epsilon_side_q: Vec<i64>,
    pub epsilon_sum: i64,
    pub support_size: usize,
    pub side_p: SideReport,
    pub side_q: SideReport,
    pub eigenvalue: EigenvalueOutcome,
    pub degree_census: DegreeCensus,
    pub eichler: EichlerCheck,
    pub verdict: Verdict,
    /// SHA-256 of the canonical parameter+epsilon JSON.
    pub params_hash: String,
}

fn side_report(
    params: &GroupParams,
    eps: &EpsilonVector,
    side: Side,
) -> Result<SideReport, CharError> {
    let rt = rtable::r_table(side.field(params), params.d(), side);
    let rows = rtable::inequality_values(&rt, eps)?;
    let mu = mu_table(params, eps, side)?;
    let gauss = rtable::gauss_sum_check(&rt);
    let delta_bound_ok = rtable::delta_bound_holds(&rt);
    Ok(SideReport {
        side,
        prime: rt.prime,
        r_display: rt.paper_order(),
        r_stored: rt.stored,
        inequality_rows: rows,
        mu,
        gauss,
        delta_bound_ok,
    })
}

/// Run every check and assemble the certificate for `(params, eps)`.
///
/// Failures are encoded in `certificate.verdict`, never thrown: an error
/// return means the inputs were structurally unusable (shape mismatch), not
/// that the candidate merely fails to be a counterexample.
pub fn verdict(params: &GroupParams, eps: &EpsilonVector) -> Result<Certificate, CharError> {
    let side_p = side_report(params, eps, Side::P)?;
    let side_q = side_report(params, eps, Side::Q)?;
    let mut failures = Vec::new();
    if eps.support_size() < 2 {
        failures.push(Failure::SupportSizeOne);
    }
    for report in [&side_p, &side_q] {
        for (row, &value) in report.inequality_rows.iter().enumerate() {
            if value < 0 {
                failures.push(Failure::NegativeRow {
                    side: report.side,
                    prime: report.prime,
                    row,
                    row_display: if row == 0 { params.d() as usize } else { row },
                    value,
                });
            }
        }
    }
    let eigenvalue = chars::eigenvalue_condition(params, eps)?;
    let degree_census = chars::degree_census(params);
    let eichler = EichlerCheck {
        min_nonlinear_degree: degree_census.min_nonlinear_degree,
        ok: degree_census.min_nonlinear_degree >= 3,
    };
    let is_counterexample = failures.is_empty() && eps.sum() == 1;
    let params_hash = params_hash(params, eps);
    Ok(Certificate {
        params: ParamsEcho {
            p: params.p(),
            q: params.q(),
            d: params.d(),
            poly_p: params.fp().poly(),
            poly_q: params.fq().poly(),
            group_order: params.group_order().to_string(),
            group_order_factored: params.group_order_factored(),
        },
        epsilon_canonical: eps.canonical().to_vec(),
        epsilon_side_p: eps.for_side(Side::P),
        epsilon_side_q: eps.for_side(Side::Q),
        epsilon_sum: eps.sum(),
        support_size: eps.support_size(),
        side_p,
        side_q,
        eigenvalue,
        degree_census,
        eichler,
        verdict: Verdict { is_counterexample, failures },
        params_hash,
    })
}

/// SHA-256 (hex) of the canonical JSON encoding of the run parameters.
pub fn params_hash(params: &GroupParams, eps: &EpsilonVector) -> String {
    #[derive(Serialize)]
    struct Canon<'a> {
        p: u64,
        q: u64,
        d: u64,
        poly_p: (u64, u64),
        poly_q: (u64, u64),
        epsilon: &'a [i64],
    }
    let canon = Canon {
        p: params.p(),
        q: params.q(),
        d: params.d(),
        poly_p: params.fp().poly(),
        poly_q: params.fq().poly(),
        epsilon: eps.canonical(),
    };
    let bytes = serde_json::to_vec(&canon).expect("canonical params serialize");
    hex(&Sha256::digest(&bytes))
}

/// Lowercase hex of a byte string.
pub fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
