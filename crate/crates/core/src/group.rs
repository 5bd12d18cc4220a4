//! The metabelian group `G = G(p, q; d) = N ⋊ A` and exact arithmetic on its
//! elements in normal form.
//!
//! `N = F_{p²} ⊕ F_{q²}` is written additively. `A = ⟨a, b, c⟩` is abelian with
//! relations `a^{(p²−1)/d} = b^{(q²−1)/d} = 1` and `c^d = a·b`, acting by
//!
//! ```text
//! (x, y)^a = (α^d x, y),    (x, y)^b = (x, β^d y),    (x, y)^c = (α x, β y),
//! ```
//!
//! so `|A| = (p²−1)(q²−1)/d` and `|G| = p²q²(p²−1)(q²−1)/d`.
//!
//! Internally `A` is handled through the isomorphism
//! `A ≅ {(u, v) ∈ Z_{p²−1} × Z_{q²−1} : u ≡ v (mod d)}` sending `a^r b^s c^t` to
//! `(dr + t, ds + t)`; the normal form `(r, s, t)` is recovered by `t = u mod d`,
//! `r = (u − t)/d`, `s = (v − t)/d`. In these coordinates the action of an
//! `A`-element on `N` is simply `x ↦ α^u x`, `y ↦ β^v y`.

use std::fmt;

use thiserror::Error;

use crate::arith;
use crate::field::{FieldElement, FieldError, QuadField};

/// Errors from group construction and element operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    /// `d` must be odd, exceed 1, and divide both `p − 1` and `q − 1`.
    #[error("invalid d = {d} for (p, q) = ({p}, {q}): need d odd, > 1, dividing p-1 and q-1")]
    BadD { p: u64, q: u64, d: u64 },
    /// The two primes must differ.
    #[error("the two primes must be distinct (both are {0})")]
    EqualPrimes(u64),
    /// Underlying field construction failed.
    #[error(transparent)]
    Field(#[from] FieldError),
    /// An element's coordinates are out of range for this group's parameters.
    #[error("element does not belong to this group (coordinates out of range)")]
    MixedParams,
    /// `class_index` is only defined on elements of order `p·q` (both field
    /// components nonzero, trivial `A`-part).
    #[error("class index requested for an element not of order p*q")]
    NotOrderPQ,
    /// `centralizer_order` covers elements of `N` only.
    #[error("operation implemented only for elements of the base group N")]
    Unsupported,
}

/// Which of the two symmetric roles a prime plays in a computation.
///
/// Most character-level objects of this crate live on an "active" side:
/// [`Side::P`] means the characters, `r`-table, multiplicity table, and induced
/// class function `ξ_n` are formed on `N_p × U_p` (the `F_{p²}` component and
/// the order-`p` part of `⟨c⟩`), while the fixed order-`q` anchor `n = (0, 1)`
/// lives in the *other* component `N_q`. [`Side::Q`] swaps the roles.
///
/// Partial-augmentation vectors are always stored in the canonical indexing by
/// classes `(α^i, 1)`; [`crate::rtable::EpsilonVector::for_side`] performs the
/// index reflection needed when the active side is `Q` (the class of `(1, β^j)`
/// is `(−j) mod d` in canonical indexing).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Side {
    P,
    Q,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::P => Side::Q,
            Side::Q => Side::P,
        }
    }

    /// The active prime on this side.
    pub fn prime(self, params: &GroupParams) -> u64 {
        match self {
            Side::P => params.p(),
            Side::Q => params.q(),
        }
    }

    /// The field `F_{s²}` of the active side.
    pub fn field(self, params: &GroupParams) -> &QuadField {
        match self {
            Side::P => params.fp(),
            Side::Q => params.fq(),
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::P => write!(f, "p"),
            Side::Q => write!(f, "q"),
        }
    }
}

/// An element `(x, y)·a^r b^s c^t` of `G` in normal form:
/// `x ∈ F_{p²}`, `y ∈ F_{q²}`, `0 ≤ r < (p²−1)/d`, `0 ≤ s < (q²−1)/d`, `0 ≤ t < d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub x: FieldElement,
    pub y: FieldElement,
    pub r: u64,
    pub s: u64,
    pub t: u64,
}

impl GroupElement {
    /// Does the element lie in the base group `N` (trivial `A`-part)?
    pub fn in_n(&self) -> bool {
        self.r == 0 && self.s == 0 && self.t == 0
    }
}

/// Validated parameters `(p, q, d)` with the two field presentations, giving
/// full element arithmetic for `G(p, q; d)`.
#[derive(Debug)]
pub struct GroupParams {
    p: u64,
    q: u64,
    d: u64,
    fp: QuadField,
    fq: QuadField,
}

impl GroupParams {
    /// Construct the group, validating `p ≠ q` prime, the polynomial data, and
    /// `d > 1` odd with `d | p − 1` and `d | q − 1`.
    ///
    /// (Divisibility of `d` into both `p − 1` and `q − 1` — not merely into the
    /// orders `p² − 1` — is what makes the `d` classes of order-`pq` elements
    /// and the semiregularity arguments downstream work; the constructor
    /// enforces it unconditionally.)
    pub fn new(
        p: u64,
        q: u64,
        d: u64,
        poly_p: (u64, u64),
        poly_q: (u64, u64),
    ) -> Result<GroupParams, GroupError> {
        if p == q {
            return Err(GroupError::EqualPrimes(p));
        }
        if d <= 1 || d % 2 == 0 || (p - 1) % d != 0 || (q - 1) % d != 0 {
            return Err(GroupError::BadD { p, q, d });
        }
        let fp = QuadField::new(p, poly_p.0, poly_p.1)?;
        let fq = QuadField::new(q, poly_q.0, poly_q.1)?;
        Ok(GroupParams { p, q, d, fp, fq })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn d(&self) -> u64 {
        self.d
    }
    pub fn fp(&self) -> &QuadField {
        &self.fp
    }
    pub fn fq(&self) -> &QuadField {
        &self.fq
    }

    /// `p² − 1`, the order of `α`.
    pub fn m1(&self) -> u64 {
        self.p * self.p - 1
    }
    /// `q² − 1`, the order of `β`.
    pub fn m2(&self) -> u64 {
        self.q * self.q - 1
    }

    /// `|A| = (p²−1)(q²−1)/d`.
    pub fn order_a(&self) -> u64 {
        self.m1() / self.d * self.m2()
    }

    /// `|G| = p²·q²·|A|` (as `u128`; this exceeds `u64` for large searches).
    pub fn group_order(&self) -> u128 {
        (self.p as u128) * (self.p as u128) * (self.q as u128) * (self.q as u128)
            * self.order_a() as u128
    }

    /// Prime factorization of `|G|`, computed piecewise (never by factoring the
    /// full product): `|G| = p² q² (p²−1)(q²−1)/d`.
    pub fn group_order_factored(&self) -> Vec<(u64, u32)> {
        group_order_factored(self.p, self.q, self.d)
    }

    // ---- element constructors -------------------------------------------------

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            x: FieldElement::ZERO,
            y: FieldElement::ZERO,
            r: 0,
            s: 0,
            t: 0,
        }
    }

    /// The base-group element `(x, y) ∈ N`.
    pub fn n_elem(&self, x: FieldElement, y: FieldElement) -> GroupElement {
        GroupElement { x, y, r: 0, s: 0, t: 0 }
    }

    /// The `A`-part element `a^r b^s c^t` (reduced to normal form).
    pub fn a_elem(&self, r: u64, s: u64, t: u64) -> GroupElement {
        let (u, v) = (
            (self.d * r + t) % self.m1(),
            (self.d * s + t) % self.m2(),
        );
        let (r, s, t) = self.recover_a(u, v);
        GroupElement {
            x: FieldElement::ZERO,
            y: FieldElement::ZERO,
            r,
            s,
            t,
        }
    }

    /// The canonical representative `(α^i, 1)` of the `i`-th class of
    /// order-`pq` elements of `N`.
    pub fn class_rep(&self, i: u64) -> GroupElement {
        self.n_elem(self.fp.pow(self.fp.alpha(), i), FieldElement::ONE)
    }

    /// The fixed anchor element of the *inactive* component used by the induced
    /// class functions of `side`: `n = (0, 1)` for [`Side::P`], `(1, 0)` for
    /// [`Side::Q`].
    pub fn fixed_n(&self, side: Side) -> GroupElement {
        match side {
            Side::P => self.n_elem(FieldElement::ZERO, FieldElement::ONE),
            Side::Q => self.n_elem(FieldElement::ONE, FieldElement::ZERO),
        }
    }

    // ---- exponent-pair coordinates for A -------------------------------------

    /// Image `(u, v) = (dr + t, ds + t)` of the `A`-part in
    /// `Z_{p²−1} × Z_{q²−1}` (congruent mod `d` by construction).
    pub fn a_exponents(&self, g: &GroupElement) -> (u64, u64) {
        (
            (self.d * g.r + g.t) % self.m1(),
            (self.d * g.s + g.t) % self.m2(),
        )
    }

    fn recover_a(&self, u: u64, v: u64) -> (u64, u64, u64) {
        debug_assert_eq!(u % self.d, v % self.d, "exponent pair out of A");
        let t = u % self.d;
        ((u - t) / self.d, (v - t) / self.d, t)
    }

    fn validate(&self, g: &GroupElement) -> Result<(), GroupError> {
        let ok = g.x.u < self.p
            && g.x.v < self.p
            && g.y.u < self.q
            && g.y.v < self.q
            && g.r < self.m1() / self.d
            && g.s < self.m2() / self.d
            && g.t < self.d;
        if ok {
            Ok(())
        } else {
            Err(GroupError::MixedParams)
        }
    }

    // ---- group operations ----------------------------------------------------

    /// Apply the `A`-part of `a_elt` to a base pair: `x ↦ α^u x`, `y ↦ β^v y`.
    pub fn act(&self, a_elt: &GroupElement, x: FieldElement, y: FieldElement) -> (FieldElement, FieldElement) {
        let (u, v) = self.a_exponents(a_elt);
        (
            self.fp.mul(self.fp.pow(self.fp.alpha(), u), x),
            self.fq.mul(self.fq.pow(self.fq.alpha(), v), y),
        )
    }

    fn act_exponents(&self, u: u64, v: u64, x: FieldElement, y: FieldElement) -> (FieldElement, FieldElement) {
        (
            self.fp.mul(self.fp.pow(self.fp.alpha(), u), x),
            self.fq.mul(self.fq.pow(self.fq.alpha(), v), y),
        )
    }

    /// Product `g·h` in normal form.
    pub fn mul(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement, GroupError> {
        self.validate(g)?;
        self.validate(h)?;
        let (u1, v1) = self.a_exponents(g);
        let (u2, v2) = self.a_exponents(h);
        // (n₁·A₁)(n₂·A₂) = (n₁ + n₂^{A₁⁻¹}) · (A₁A₂) with right action n^A.
        let (hx, hy) = self.act_exponents(self.m1() - u1 % self.m1(), self.m2() - v1 % self.m2(), h.x, h.y);
        let x = self.fp.add(g.x, hx);
        let y = self.fq.add(g.y, hy);
        let (u, v) = ((u1 + u2) % self.m1(), (v1 + v2) % self.m2());
        let (r, s, t) = self.recover_a(u, v);
        Ok(GroupElement { x, y, r, s, t })
    }

    /// Inverse `g⁻¹` in normal form.
    pub fn inv(&self, g: &GroupElement) -> Result<GroupElement, GroupError> {
        self.validate(g)?;
        let (u, v) = self.a_exponents(g);
        let (iu, iv) = ((self.m1() - u) % self.m1(), (self.m2() - v) % self.m2());
        // (n·A)⁻¹ = ((−n)^A)·A⁻¹.
        let (x, y) = self.act_exponents(u, v, self.fp.neg(g.x), self.fq.neg(g.y));
        let (r, s, t) = self.recover_a(iu, iv);
        Ok(GroupElement { x, y, r, s, t })
    }

    /// Conjugate `h⁻¹ g h`.
    pub fn conj(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement, GroupError> {
        let hi = self.inv(h)?;
        self.mul(&self.mul(&hi, g)?, h)
    }

    /// Exact order of `g`.
    ///
    /// With `k` the order of the `A`-part, `g^k` lies in `N` and equals the
    /// "trace" `Σ_{i<k} n^{A^i}`; the order of `g` is `k` times the additive
    /// order of that trace.
    pub fn elem_order(&self, g: &GroupElement) -> Result<u64, GroupError> {
        self.validate(g)?;
        let (u, v) = self.a_exponents(g);
        let k = arith::lcm(
            self.m1() / arith::gcd(self.m1(), u),
            self.m2() / arith::gcd(self.m2(), v),
        );
        let (mut tx, mut ty) = (FieldElement::ZERO, FieldElement::ZERO);
        let (mut cx, mut cy) = (g.x, g.y);
        for _ in 0..k {
            tx = self.fp.add(tx, cx);
            ty = self.fq.add(ty, cy);
            let (nx, ny) = self.act_exponents(u, v, cx, cy);
            (cx, cy) = (nx, ny);
        }
        let add_order = arith::lcm(
            if tx.is_zero() { 1 } else { self.p },
            if ty.is_zero() { 1 } else { self.q },
        );
        Ok(k * add_order)
    }

    /// Conjugacy-class index of an order-`pq` element `(x, y)` of `N` under the
    /// canonical indexing by representatives `(α^i, 1)`:
    /// `i = (dlog_α x − dlog_β y) mod d`.
    ///
    /// Errors with [`GroupError::NotOrderPQ`] unless the `A`-part is trivial and
    /// both components are nonzero.
    pub fn class_index(&self, g: &GroupElement) -> Result<u64, GroupError> {
        self.validate(g)?;
        if !g.in_n() || g.x.is_zero() || g.y.is_zero() {
            return Err(GroupError::NotOrderPQ);
        }
        let a = self.fp.dlog(g.x).expect("nonzero") % self.d;
        let b = self.fq.dlog(g.y).expect("nonzero") % self.d;
        Ok((a + self.d - b) % self.d)
    }

    /// `|C_G(g)|` for `g ∈ N` (other elements are [`GroupError::Unsupported`]).
    pub fn centralizer_order(&self, g: &GroupElement) -> Result<u128, GroupError> {
        self.validate(g)?;
        if !g.in_n() {
            return Err(GroupError::Unsupported);
        }
        let n_sq = (self.p as u128 * self.p as u128) * (self.q as u128 * self.q as u128);
        Ok(match (g.x.is_zero(), g.y.is_zero()) {
            (true, true) => self.group_order(),
            (false, false) => n_sq,
            // Pure N_p element: A-stabilizer is {(0, v) : v ≡ 0 mod d}, size (q²−1)/d.
            (false, true) => n_sq * (self.m2() / self.d) as u128,
            (true, false) => n_sq * (self.m1() / self.d) as u128,
        })
    }

    /// Canonical class index of `m·n_side`, for nonzero `m` in the *active*
    /// component of `side`: the order-`pq` element is `(m, 1)` on [`Side::P`]
    /// and `(1, m)` on [`Side::Q`].
    pub fn side_class_index(&self, side: Side, m: FieldElement) -> Result<u64, GroupError> {
        let g = match side {
            Side::P => self.n_elem(m, FieldElement::ONE),
            Side::Q => self.n_elem(FieldElement::ONE, m),
        };
        self.class_index(&g)
    }
}

/// Prime factorization of `|G(p, q; d)| = p² q² (p²−1)(q²−1)/d`, computed from
/// the parameters alone (no group construction, no constraint that `d | p − 1`;
/// used by the parameter search where `d` may divide only `p² − 1`).
pub fn group_order_factored(p: u64, q: u64, d: u64) -> Vec<(u64, u32)> {
    let mut acc = std::collections::BTreeMap::new();
    arith::accumulate_factors(&mut acc, p, 2);
    arith::accumulate_factors(&mut acc, q, 2);
    arith::accumulate_factors(&mut acc, p * p - 1, 1);
    arith::accumulate_factors(&mut acc, q * q - 1, 1);
    arith::accumulate_factors(&mut acc, d, -1);
    arith::finish_factors(acc)
}

/// `|G(p, q; d)|` as `u128` from parameters alone.
pub fn group_order_u128(p: u64, q: u64, d: u64) -> u128 {
    let m1 = (p * p - 1) as u128;
    let m2 = (q * q - 1) as u128;
    (p as u128 * p as u128) * (q as u128 * q as u128) * (m1 * m2 / d as u128)
}
