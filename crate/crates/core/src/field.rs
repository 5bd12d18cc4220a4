//! The quadratic field `F_{p²} = F_p[α]` presented by a primitive polynomial
//! `X² − c₁X + c₀`, together with exact discrete logarithms to base `α`.
//!
//! Elements are stored in coordinates `(u, v)` meaning `u + v·α` with
//! `0 ≤ u, v < p`. The defining relation is `α² = c₁·α − c₀`, so the primitive
//! root `α` satisfies `α^{p+1} = c₀` (its norm) and `α + α^p = c₁` (its trace).
//!
//! Discrete logs are served from a full lookup table when `p²` is small enough
//! to make that cheap, and by baby-step/giant-step above that; both paths are
//! exact and agree, and construction verifies primitivity of `α` by testing
//! `α^{(p²−1)/ℓ} ≠ 1` for every prime `ℓ | p² − 1`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;

/// Largest `p²` for which the dense dlog table is built eagerly; above this a
/// baby-step/giant-step index (memory `O(p)`) answers queries instead.
const DENSE_DLOG_LIMIT: u64 = 16_000_000;

/// Errors from field construction and arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    /// The modulus `p` is not prime.
    #[error("{0} is not prime")]
    NotPrime(u64),
    /// `X² − c₁X + c₀` has a root in `F_p`, so it does not define `F_{p²}`.
    #[error("X^2 - {c1}X + {c0} is reducible over F_{p} (root at {root})")]
    ReduciblePolynomial { p: u64, c1: u64, c0: u64, root: u64 },
    /// The polynomial is irreducible but its root does not generate `F_{p²}^×`.
    #[error("root of X^2 - {c1}X + {c0} over F_{p} has multiplicative order {order} < {}", p * p - 1)]
    NotPrimitive { p: u64, c1: u64, c0: u64, order: u64 },
    /// Multiplicative inverse of zero requested.
    #[error("division by zero in F_{{p^2}}")]
    DivisionByZero,
    /// Discrete logarithm of zero requested.
    #[error("discrete logarithm of zero is undefined")]
    DlogOfZero,
}

/// An element `u + v·α` of `F_{p²}`, coordinates reduced mod `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FieldElement {
    pub u: u64,
    pub v: u64,
}

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement { u: 0, v: 0 };
    pub const ONE: FieldElement = FieldElement { u: 1, v: 0 };

    pub fn is_zero(self) -> bool {
        self.u == 0 && self.v == 0
    }

    /// Is this element in the prime subfield `F_p` (i.e. has no `α` component)?
    pub fn is_scalar(self) -> bool {
        self.v == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.u, self.v) {
            (u, 0) => write!(f, "{u}"),
            (0, 1) => write!(f, "α"),
            (0, v) => write!(f, "{v}α"),
            (u, 1) => write!(f, "{u}+α"),
            (u, v) => write!(f, "{u}+{v}α"),
        }
    }
}

enum DlogIndex {
    /// `table[u·p + v]` = dlog of `u + vα`; `u32::MAX` marks zero.
    Dense(Vec<u32>),
    /// Baby-step/giant-step: `baby[x] = j` for `x = α^j`, `j < m`; `giant = α^{−m}`.
    Bsgs {
        m: u64,
        baby: HashMap<FieldElement, u64>,
        giant: FieldElement,
    },
}

/// `F_{p²}` presented by a primitive polynomial `X² − c₁X + c₀` with root `α`.
pub struct QuadField {
    p: u64,
    c1: u64,
    c0: u64,
    index: DlogIndex,
}

impl fmt::Debug for QuadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "QuadField(p={}, alpha^2 = {}*alpha - {})",
            self.p, self.c1, self.c0
        )
    }
}

impl QuadField {
    /// Build `F_{p²}` from `X² − c₁X + c₀`, verifying primality of `p`,
    /// irreducibility of the polynomial, and primitivity of its root `α`.
    pub fn new(p: u64, c1: u64, c0: u64) -> Result<QuadField, FieldError> {
        if !arith::is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        let (c1, c0) = (c1 % p, c0 % p);
        // Irreducible iff X² − c₁X + c₀ has no root in F_p.
        for x in 0..p {
            let val = ((x as u128 * x as u128 + c0 as u128) % p as u128
                + (p as u128 - (c1 as u128 * x as u128) % p as u128))
                % p as u128;
            if val % p as u128 == 0 {
                return Err(FieldError::ReduciblePolynomial { p, c1, c0, root: x });
            }
        }
        let mut fld = QuadField {
            p,
            c1,
            c0,
            index: DlogIndex::Dense(Vec::new()),
        };
        // Primitivity: α^{(p²−1)/ℓ} ≠ 1 for every prime ℓ | p² − 1. Needs only
        // multiplication, not the dlog index, so run it before building that.
        let order = p * p - 1;
        for (ell, _) in arith::factorize(order) {
            if fld.pow(fld.alpha(), order / ell) == FieldElement::ONE {
                return Err(FieldError::NotPrimitive {
                    p,
                    c1,
                    c0,
                    order: fld.multiplicative_order_of_alpha(),
                });
            }
        }
        fld.index = fld.build_index();
        Ok(fld)
    }

    fn build_index(&self) -> DlogIndex {
        let p = self.p;
        if p * p <= DENSE_DLOG_LIMIT {
            let mut table = vec![u32::MAX; (p * p) as usize];
            let mut x = FieldElement::ONE;
            for j in 0..(p * p - 1) {
                table[(x.u * p + x.v) as usize] = j as u32;
                x = self.mul(x, self.alpha());
            }
            debug_assert_eq!(x, FieldElement::ONE);
            DlogIndex::Dense(table)
        } else {
            let order = p * p - 1;
            let m = (order as f64).sqrt().ceil() as u64;
            let mut baby = HashMap::with_capacity(m as usize);
            let mut x = FieldElement::ONE;
            for j in 0..m {
                baby.entry(x).or_insert(j);
                x = self.mul(x, self.alpha());
            }
            // After the loop x = α^m; invert it for the giant stride.
            let giant = self.inv(x).expect("alpha power nonzero");
            DlogIndex::Bsgs { m, baby, giant }
        }
    }

    /// Slow exact multiplicative order of `α` (only used to report errors).
    fn multiplicative_order_of_alpha(&self) -> u64 {
        let mut x = self.alpha();
        let mut k = 1;
        while x != FieldElement::ONE {
            x = self.mul(x, self.alpha());
            k += 1;
        }
        k
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Coefficients `(c₁, c₀)` of the defining polynomial `X² − c₁X + c₀`.
    pub fn poly(&self) -> (u64, u64) {
        (self.c1, self.c0)
    }

    /// Order of the multiplicative group, `p² − 1`.
    pub fn unit_group_order(&self) -> u64 {
        self.p * self.p - 1
    }

    pub fn alpha(&self) -> FieldElement {
        FieldElement { u: 0, v: 1 }
    }

    /// Embed a scalar `n` (any residue) as `n mod p ∈ F_p ⊂ F_{p²}`.
    pub fn scalar(&self, n: u64) -> FieldElement {
        FieldElement { u: n % self.p, v: 0 }
    }

    pub fn elt(&self, u: u64, v: u64) -> FieldElement {
        FieldElement { u: u % self.p, v: v % self.p }
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement {
            u: (a.u + b.u) % self.p,
            v: (a.v + b.v) % self.p,
        }
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement {
            u: (self.p - a.u) % self.p,
            v: (self.p - a.v) % self.p,
        }
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    /// Product in `F_{p²}` using `α² = c₁α − c₀`.
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.p as u128;
        let (au, av, bu, bv) = (a.u as u128, a.v as u128, b.u as u128, b.v as u128);
        // (au + av α)(bu + bv α) = au·bu + (au·bv + av·bu) α + av·bv α²
        let cross = (au * bv + av * bu) % p;
        let sq = av * bv % p;
        let u = (au * bu + sq * (p - self.c0 as u128)) % p;
        let v = (cross + sq * self.c1 as u128) % p;
        FieldElement { u: u as u64, v: v as u64 }
    }

    /// `a^e` by square-and-multiply.
    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        // a^{p²−2} = a^{−1}; the exponent is tiny at our scales.
        Ok(self.pow(a, self.p * self.p - 2))
    }

    /// Norm `N(x) = x^{p+1} ∈ F_p` of `x` over `F_p`.
    ///
    /// Computed literally as the `(p+1)`-st power; the result always lands in
    /// the prime subfield. For `x = α + t` this agrees with the quadratic
    /// expression `t² + c₁t + c₀` (exercised by tests).
    pub fn norm(&self, x: FieldElement) -> u64 {
        let n = self.pow(x, self.p + 1);
        debug_assert!(n.is_scalar(), "norm must be a scalar");
        n.u
    }

    /// Trace `Tr(x) = x + x^p ∈ F_p`. For `x = u + vα` this is `2u + v·c₁`.
    pub fn trace(&self, x: FieldElement) -> u64 {
        (2 * x.u % self.p + x.v * self.c1 % self.p) % self.p
    }

    /// Discrete logarithm to base `α`: the unique `j ∈ [0, p²−1)` with `α^j = x`.
    pub fn dlog(&self, x: FieldElement) -> Result<u64, FieldError> {
        if x.is_zero() {
            return Err(FieldError::DlogOfZero);
        }
        match &self.index {
            DlogIndex::Dense(table) => {
                let j = table[(x.u * self.p + x.v) as usize];
                debug_assert_ne!(j, u32::MAX);
                Ok(j as u64)
            }
            DlogIndex::Bsgs { m, baby, giant } => {
                let mut y = x;
                for i in 0..=*m {
                    if let Some(&j) = baby.get(&y) {
                        return Ok((i * m + j) % self.unit_group_order());
                    }
                    y = self.mul(y, *giant);
                }
                unreachable!("BSGS covers the whole unit group")
            }
        }
    }
}

/// The lexicographically least `(c₁, c₀)` such that `X² − c₁X + c₀` is a
/// primitive polynomial for `F_{p²}` (ordering: by `c₁`, then `c₀`).
///
/// This is the deterministic presentation used whenever a caller names a prime
/// without choosing a polynomial (e.g. during parameter searches).
pub fn canonical_primitive_poly(p: u64) -> Result<(u64, u64), FieldError> {
    if !arith::is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    for c1 in 0..p {
        for c0 in 0..p {
            match QuadField::new(p, c1, c0) {
                Ok(_) => return Ok((c1, c0)),
                Err(FieldError::ReduciblePolynomial { .. }) | Err(FieldError::NotPrimitive { .. }) => {}
                Err(e) => return Err(e),
            }
        }
    }
    unreachable!("every F_{{p^2}} has a primitive element with quadratic minimal polynomial")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_validates_inputs() {
        assert_eq!(QuadField::new(6, 1, 3).unwrap_err(), FieldError::NotPrime(6));
        // X² + 6 = X² − 1 over F_7 splits as (X−1)(X+1).
        match QuadField::new(7, 0, 6).unwrap_err() {
            FieldError::ReduciblePolynomial { root, .. } => assert!(root == 1 || root == 6),
            e => panic!("expected reducible, got {e}"),
        }
        // X² + 1 is irreducible over F_7 but its root has order 4.
        match QuadField::new(7, 0, 1).unwrap_err() {
            FieldError::NotPrimitive { order, .. } => assert_eq!(order, 4),
            e => panic!("expected non-primitive, got {e}"),
        }
    }

    #[test]
    fn reference_fields_have_primitive_alpha() {
        let f49 = QuadField::new(7, 1, 3).unwrap();
        assert_eq!(f49.unit_group_order(), 48);
        // Full enumeration cross-check of primitivity at small size.
        let mut seen = std::collections::HashSet::new();
        let mut x = FieldElement::ONE;
        for _ in 0..48 {
            assert!(seen.insert(x));
            x = f49.mul(x, f49.alpha());
        }
        assert_eq!(x, FieldElement::ONE);

        let f361 = QuadField::new(19, 1, 2).unwrap();
        assert_eq!(f361.unit_group_order(), 360);
    }

    #[test]
    fn dlog_golden_values() {
        let f49 = QuadField::new(7, 1, 3).unwrap();
        // α⁸ = 3 in this presentation.
        assert_eq!(f49.pow(f49.alpha(), 8), f49.scalar(3));
        assert_eq!(f49.dlog(f49.scalar(3)).unwrap(), 8);
        assert_eq!(f49.dlog(FieldElement::ONE).unwrap(), 0);
        assert_eq!(f49.dlog(f49.alpha()).unwrap(), 1);
        assert_eq!(f49.dlog(FieldElement::ZERO).unwrap_err(), FieldError::DlogOfZero);

        let f361 = QuadField::new(19, 1, 2).unwrap();
        // β²⁰ = 2 in this presentation.
        assert_eq!(f361.pow(f361.alpha(), 20), f361.scalar(2));
        assert_eq!(f361.dlog(f361.scalar(2)).unwrap(), 20);
    }

    #[test]
    fn dlog_roundtrip_exhaustive() {
        let f = QuadField::new(7, 1, 3).unwrap();
        for j in 0..48 {
            let x = f.pow(f.alpha(), j);
            assert_eq!(f.dlog(x).unwrap(), j);
        }
    }

    #[test]
    fn bsgs_path_agrees_with_powers() {
        // p = 4441 forces the BSGS index (p² > dense limit).
        let (c1, c0) = canonical_primitive_poly(4441).unwrap();
        let f = QuadField::new(4441, c1, c0).unwrap();
        for j in [0u64, 1, 2, 4440, 4442, 1_000_000, f.unit_group_order() - 1] {
            let x = f.pow(f.alpha(), j);
            assert_eq!(f.dlog(x).unwrap(), j);
        }
    }

    #[test]
    fn norm_matches_quadratic_formula_on_affine_line() {
        for (p, c1, c0) in [(7u64, 1u64, 3u64), (19, 1, 2), (31, 1, 12)] {
            let f = QuadField::new(p, c1, c0).unwrap();
            for t in 0..p {
                let x = f.add(f.alpha(), f.scalar(t));
                let expected = (t * t % p + c1 * t % p + c0) % p;
                assert_eq!(f.norm(x), expected);
            }
            // The norm of α itself is the constant coefficient.
            assert_eq!(f.norm(f.alpha()), c0);
        }
    }

    #[test]
    fn canonical_polys_are_the_frozen_ones() {
        assert_eq!(canonical_primitive_poly(7).unwrap(), (1, 3));
        assert_eq!(canonical_primitive_poly(19).unwrap(), (1, 2));
        assert_eq!(canonical_primitive_poly(31).unwrap(), (1, 12));
        assert_eq!(canonical_primitive_poly(13).unwrap(), (1, 2));
        assert_eq!(canonical_primitive_poly(11).unwrap(), (1, 7));
        assert_eq!(canonical_primitive_poly(163).unwrap(), (1, 11));
        assert_eq!(canonical_primitive_poly(167).unwrap(), (1, 5));
    }

    #[test]
    fn inverse_and_division_errors() {
        let f = QuadField::new(19, 1, 2).unwrap();
        assert_eq!(f.inv(FieldElement::ZERO).unwrap_err(), FieldError::DivisionByZero);
        for j in 1..30 {
            let x = f.pow(f.alpha(), j);
            assert_eq!(f.mul(x, f.inv(x).unwrap()), FieldElement::ONE);
        }
    }
}
