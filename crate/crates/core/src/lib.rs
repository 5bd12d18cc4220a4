//! Exact arithmetic for a family of metabelian groups `G(p, q; d)` and for the
//! character-theoretic certificates that exhibit torsion units of their integral
//! group rings which are not rationally conjugate to trivial units.
//!
//! The group is `G = N ⋊ A` where `N = F_{p²} ⊕ F_{q²}` (written additively) and
//! `A = ⟨a, b, c⟩` is abelian of order `(p² − 1)(q² − 1)/d`, acting on `N` through
//! fixed generators `α` of `F_{p²}^×` and `β` of `F_{q²}^×`:
//!
//! ```text
//! (x, y)^a = (α^d · x, y),   (x, y)^b = (x, β^d · y),   (x, y)^c = (α · x, β · y),
//! ```
//!
//! with the single relation `c^d = a·b`. A candidate unit is described by a vector
//! of partial augmentations `ε` supported on the `d` classes of elements of order
//! `p·q` in `N`; the crate decides, by integer arithmetic only, whether `ε` yields
//! a unit of `Z[G]` surviving every computable obstruction:
//!
//! * circulant inequality systems built from distribution tables `r_i(p)` of
//!   discrete logarithms along the affine line `α + F_p` ([`rtable`]);
//! * properness of induced class functions `ξ_n` against all rationally
//!   irreducible characters of elementary abelian sections ([`chars`]);
//! * an eigenvalue-multiplicity condition and a degree-census bound ([`chars`]);
//! * explicit projective-lattice assemblies whose multiplicities must be
//!   non-negative and whose characters must reassemble `ξ_n` exactly ([`lattice`]).
//!
//! [`verdict`] bundles the checks into a serializable [`verdict::Certificate`],
//! and [`search`] scans for new parameter pairs `(p, q)` above the quantitative
//! threshold where every small candidate vector is guaranteed to survive.
//!
//! Everything on the certificate path is exact; floating point appears only in
//! the optional Gauss-sum diagnostic for `d > 3` (with an exact integer form for
//! `d = 3`) and never influences a verdict bit.

pub mod arith;
pub mod chars;
pub mod field;
pub mod group;
pub mod lattice;
pub mod report;
pub mod rtable;
pub mod search;
pub mod verdict;

pub use chars::{
    chi_value, degree_census, eigenvalue_condition, extract_eps, inner_product_bruteforce,
    inner_product_closed, xi_is_proper, xi_is_proper_bruteforce, xi_is_proper_circulant, xi_table,
    DegreeCensus, EigenvalueOutcome, RationalIrr, XiTable,
};
pub use field::{canonical_primitive_poly, FieldElement, FieldError, QuadField};
pub use group::{
    group_order_factored, group_order_u128, GroupElement, GroupError, GroupParams, Side,
};
pub use lattice::{
    build_assembly, projectivity_check, summand_char_formula, verify_assembly_character,
    CyclicFactor, KernelSubgroup, LatticeAssembly, LatticeError, LatticeSummand,
    SubgroupDescriptor, SummandCharFormula, SummandKind,
};
pub use report::{build_report, HashedSection, ReportDocument};
pub use rtable::{
    corollary_threshold, delta_bound, delta_bound_holds, gauss_sum_check, inequality_values,
    r_table, r_table_norm_method, EpsilonVector, GaussSumCheck, RTable, TableError,
};
pub use search::{search_prime_pairs, AdmissiblePrime, PrimePair, SearchError, SearchOutcome};
pub use verdict::{mu_table, verdict, Certificate, MuTable, Verdict};
