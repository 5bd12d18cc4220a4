//! Symbolic projective-lattice assemblies realizing a surviving candidate, and
//! the exhaustive character check that validates them.
//!
//! For a side with prime `s` and the anchor `n` of order `s'` in the opposite
//! component, each summand is described symbolically as `M(X, s', aux)` where
//! `X = [n] × Ker ⊆ ⟨n⟩ × (N_s × U_s)` is the direct product of the cyclic
//! group generated by the anchor with the kernel of one rational irreducible
//! of the section. The assembly lists one summand per orbit of kernels with
//! positive multiplicity; multiplicities are exactly the entries of the side's
//! [`MuTable`](crate::verdict::MuTable), which in turn are the circulant
//! inequality rows — this is why non-negativity of the rows is precisely the
//! existence condition for the lattice.
//!
//! Lattices are never materialized as matrices: every question asked of them
//! (projectivity of the reduction, equality of subgroups, reassembly of the
//! induced character `ξ_n`) is answered from the symbolic data by exact
//! integer arithmetic.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;
use crate::chars::{self, CharError, IrrKind, RationalIrr};
use crate::field::FieldElement;
use crate::group::{GroupParams, Side};
use crate::rtable::EpsilonVector;
use crate::verdict;

/// Errors from assembly construction and validation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    /// An inequality row is negative, so no lattice with these multiplicities exists.
    #[error("negative multiplicity: inequality row {row} on side {side} is {value}")]
    NegativeMultiplicity { side: Side, row: usize, value: i64 },
    /// The auxiliary prime coincides with the active side's prime (the lattice
    /// is constructed over the localization away from the active prime).
    #[error("auxiliary prime {aux} must be a prime different from the active side prime {active_prime}")]
    BadAuxPrime { aux: u64, active_prime: u64 },
    /// Character reassembly failed at a specific section element.
    #[error("assembled character disagrees with xi at element {element:?}: expected {expected}, got {got}")]
    CharacterMismatch {
        element: (u64, u64, u64),
        expected: i64,
        got: i64,
    },
    /// A subgroup does not have one of the two shapes summands can take.
    #[error("subgroup of order {order} is not a valid summand kernel shape")]
    UnsupportedShape { order: u64 },
    /// Underlying character computation failed.
    #[error(transparent)]
    Char(#[from] CharError),
}

/// A subgroup of the section `N_s × U_s`, given by generators `(m.u, m.v, j)`.
///
/// Equality of two such subgroups means equality of the generated element
/// sets, not of the generator lists; [`KernelSubgroup::closure`] computes the
/// set (the section is elementary abelian, so the closure is the `F_s`-span).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelSubgroup {
    pub ell: u64,
    pub gens: Vec<(u64, u64, u64)>,
}

impl KernelSubgroup {
    pub fn new(ell: u64, gens: Vec<(u64, u64, u64)>) -> KernelSubgroup {
        let gens = gens
            .into_iter()
            .map(|(u, v, j)| (u % ell, v % ell, j % ell))
            .collect();
        KernelSubgroup { ell, gens }
    }

    /// The whole section as a subgroup.
    pub fn full(ell: u64) -> KernelSubgroup {
        KernelSubgroup::new(ell, vec![(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    }

    pub fn trivial(ell: u64) -> KernelSubgroup {
        KernelSubgroup::new(ell, Vec::new())
    }

    /// The full element set generated by the generators (`F_s`-span).
    pub fn closure(&self) -> BTreeSet<(u64, u64, u64)> {
        let ell = self.ell;
        let mut set = BTreeSet::new();
        set.insert((0, 0, 0));
        for &(gu, gv, gj) in &self.gens {
            let current: Vec<(u64, u64, u64)> = set.iter().copied().collect();
            for t in 1..ell {
                for &(u, v, j) in &current {
                    set.insert((
                        (u + t * gu) % ell,
                        (v + t * gv) % ell,
                        (j + t * gj) % ell,
                    ));
                }
            }
        }
        set
    }

    /// `|closure|` (a power of `ell`).
    pub fn order(&self) -> u64 {
        self.closure().len() as u64
    }

    /// Same generated subgroup?
    pub fn same_subgroup_as(&self, other: &KernelSubgroup) -> bool {
        self.ell == other.ell && self.closure() == other.closure()
    }
}

/// The cyclic factor `[n]` of a summand's subgroup: the anchor generates a
/// group of prime order in the opposite field component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicFactor {
    /// The opposite side's prime `s'`.
    pub prime: u64,
    /// Coordinates of the generator in `F_{s'²}` (the anchor is the unit `1`).
    pub generator: (u64, u64),
}

/// Symbolic description of the subgroup `X = [n] × Ker` defining one summand
/// `M(X, s', aux)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupDescriptor {
    pub cyclic: Option<CyclicFactor>,
    pub kernel: KernelSubgroup,
}

impl SubgroupDescriptor {
    /// The trivial subgroup (no cyclic factor, trivial kernel).
    pub fn trivial(ell: u64) -> SubgroupDescriptor {
        SubgroupDescriptor {
            cyclic: None,
            kernel: KernelSubgroup::trivial(ell),
        }
    }

    /// `|X| = |[n]| · |Ker|`.
    pub fn order(&self) -> u64 {
        self.cyclic.map_or(1, |c| c.prime) * self.kernel.order()
    }

    /// Do two descriptors define the same subgroup (same cyclic factor, same
    /// generated kernel)?
    pub fn same_subgroup_as(&self, other: &SubgroupDescriptor) -> bool {
        self.cyclic == other.cyclic && self.kernel.same_subgroup_as(&other.kernel)
    }
}

/// Which orbit of rational irreducibles a summand realizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SummandKind {
    /// Kernel is the whole section (trivial character's orbit).
    Trivial,
    /// Kernel contains `U_s` (the fused orbit of the `s + 1` such kernels).
    ContainsU,
    /// The `i`-th orbit of coset-type kernels.
    Coset { orbit: u64 },
}

/// One summand `M(X, s', aux)^{⊕ multiplicity}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSummand {
    pub descriptor: SubgroupDescriptor,
    pub multiplicity: i64,
    pub kind: SummandKind,
}

/// A full lattice assembly for one side and one auxiliary prime: the candidate
/// module decomposes as `⊕ M(X_i, s', aux)^{⊕ μ_i}` over the listed summands
/// (zero-multiplicity orbits are omitted).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeAssembly {
    pub side: Side,
    pub active_prime: u64,
    pub aux_prime: u64,
    pub epsilon_canonical: Vec<i64>,
    pub summands: Vec<LatticeSummand>,
}

/// Build the assembly for `(params, eps)` on `side` over the auxiliary prime.
///
/// Preconditions checked here: `aux` is a prime different from the active
/// side's prime ([`LatticeError::BadAuxPrime`]), and every inequality row is
/// non-negative ([`LatticeError::NegativeMultiplicity`] otherwise — a negative
/// row means no such lattice exists and the candidate is refuted).
pub fn build_assembly(
    params: &GroupParams,
    eps: &EpsilonVector,
    side: Side,
    aux: u64,
) -> Result<LatticeAssembly, LatticeError> {
    let fld = side.field(params);
    let s = fld.p();
    if !arith::is_prime(aux) || aux == s {
        return Err(LatticeError::BadAuxPrime { aux, active_prime: s });
    }
    let mu = verdict::mu_table(params, eps, side)?;
    if let Some((row, &value)) = mu.coset.iter().enumerate().find(|&(_, &v)| v < 0) {
        // Report in inequality-row indexing: coset orbit i reads row ells[i].
        return Err(LatticeError::NegativeMultiplicity {
            side,
            row: mu.ells[row] as usize,
            value,
        });
    }
    let cyclic = Some(CyclicFactor {
        prime: side.other().prime(params),
        generator: (1, 0),
    });
    let mut summands = Vec::new();
    if mu.trivial > 0 {
        summands.push(LatticeSummand {
            descriptor: SubgroupDescriptor {
                cyclic,
                kernel: KernelSubgroup::full(s),
            },
            multiplicity: mu.trivial,
            kind: SummandKind::Trivial,
        });
    }
    if mu.contains_u > 0 {
        summands.push(LatticeSummand {
            descriptor: SubgroupDescriptor {
                cyclic,
                kernel: KernelSubgroup::new(s, vec![(1, 0, 0), (0, 0, 1)]),
            },
            multiplicity: mu.contains_u,
            kind: SummandKind::ContainsU,
        });
    }
    for (i, &m) in mu.coset.iter().enumerate() {
        if m > 0 {
            let g_i = fld.pow(fld.alpha(), i as u64 * (s + 1) + 1);
            summands.push(LatticeSummand {
                descriptor: SubgroupDescriptor {
                    cyclic,
                    kernel: KernelSubgroup::new(s, vec![(1, 0, 0), (g_i.u, g_i.v, 1)]),
                },
                multiplicity: m,
                kind: SummandKind::Coset { orbit: i as u64 },
            });
        }
    }
    Ok(LatticeAssembly {
        side,
        active_prime: s,
        aux_prime: aux,
        epsilon_canonical: eps.canonical().to_vec(),
        summands,
    })
}

/// Is the reduction of `M(X, s', aux)` projective over `Z_(aux)`?
///
/// The obstruction is the `G`-part of `X`: elements with trivial `U`-component,
/// i.e. `[n] × (Ker ∩ N_s)`. The summand is projective at `aux` iff `aux` does
/// not divide the order of that intersection.
pub fn projectivity_check(x: &SubgroupDescriptor, aux: u64) -> bool {
    let kernel_meet_n = x
        .kernel
        .closure()
        .iter()
        .filter(|&&(_, _, j)| j == 0)
        .count() as u64;
    let g_part = x.cyclic.map_or(1, |c| c.prime) * kernel_meet_n;
    g_part % aux != 0
}

/// Tag describing how the character of one summand is computed symbolically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SummandCharFormula {
    /// `Ker` is the whole section: the character is the plain induced
    /// permutation character of `X`.
    FullKernel,
    /// `Ker` has prime index `index` in the section: the character is the
    /// difference of the inductions from `X` and from its saturation
    /// `[n] × N_s × U_s` (scaled to make the virtual module a genuine lattice).
    PrimeIndexKernel { index: u64 },
}

/// Classify a summand subgroup's character formula by its kernel shape.
pub fn summand_char_formula(x: &SubgroupDescriptor) -> Result<SummandCharFormula, LatticeError> {
    let ell = x.kernel.ell;
    let order = x.kernel.order();
    if order == ell * ell * ell {
        Ok(SummandCharFormula::FullKernel)
    } else if order * ell == ell * ell * ell {
        Ok(SummandCharFormula::PrimeIndexKernel { index: ell })
    } else {
        Err(LatticeError::UnsupportedShape { order })
    }
}

/// Dual vector of an index-`ell` kernel given by two independent generators:
/// the cross product of the generator coordinate vectors over `F_ell`.
fn kernel_dual(ell: u64, closure: &BTreeSet<(u64, u64, u64)>) -> Option<(u64, u64, u64)> {
    // Find two independent elements, then annihilate their span.
    let elems: Vec<&(u64, u64, u64)> = closure.iter().filter(|e| **e != (0, 0, 0)).collect();
    let first = **elems.first()?;
    let second = **elems.iter().find(|&&&e| {
        // Independent of `first` iff not a scalar multiple.
        !(1..ell).any(|t| (t * first.0 % ell, t * first.1 % ell, t * first.2 % ell) == e)
    })?;
    let cross = |a: (u64, u64, u64), b: (u64, u64, u64)| -> (u64, u64, u64) {
        (
            (a.1 * b.2 + (ell - 1) * (a.2 % ell) * (b.1 % ell)) % ell,
            (a.2 * b.0 + (ell - 1) * (a.0 % ell) * (b.2 % ell)) % ell,
            (a.0 * b.1 + (ell - 1) * (a.1 % ell) * (b.0 % ell)) % ell,
        )
    };
    let d = cross(first, second);
    (d != (0, 0, 0)).then_some(d)
}

/// Which orbit a coset-type kernel belongs to: writing its defining coset as
/// `δ·(α + F_s)`, the orbit index is `dlog(δ)·(s+1)⁻¹ mod d` (the orbit of
/// `φ_i` consists of the cosets with `dlog(δ) ≡ i(s+1) mod d`).
fn coset_orbit_index(
    params: &GroupParams,
    side: Side,
    chi: &RationalIrr,
) -> u64 {
    let fld = side.field(params);
    let s = fld.p();
    let d = params.d();
    let (a, b, c) = chi.dual.expect("coset-type kernel");
    debug_assert!((a, b) != (0, 0) && c != 0);
    // K = ker(a, b) = F_s·k₀; find t with t·k₀·α in the defining coset
    // {m : a·m.u + b·m.v ≡ −c}.
    let k0 = if a != 0 {
        FieldElement { u: (s - b % s) * arith::mod_inv(a, s) % s, v: 1 }
    } else {
        FieldElement { u: 1, v: 0 }
    };
    let k0_alpha = fld.mul(k0, fld.alpha());
    let pair = (a * k0_alpha.u + b * k0_alpha.v) % s;
    debug_assert_ne!(pair, 0, "alpha-translate of an F_s-line leaves the line");
    let t = (s - c % s) % s * arith::mod_inv(pair, s) % s;
    let delta = FieldElement { u: t * k0.u % s, v: t * k0.v % s };
    let class = fld.dlog(delta).expect("delta nonzero") % d;
    // s ≡ 1 (mod d), so (s+1)⁻¹ ≡ 2⁻¹ ≡ (d+1)/2 (mod d).
    class * ((d + 1) / 2) % d
}

/// Exhaustively verify that the assembly's summand characters reassemble the
/// induced class function `ξ_n` of `(params, eps, side)` pointwise over all
/// `s³` section elements.
///
/// Each rational irreducible `φ_H` enters the reconstruction with weight
/// `μ(orbit of H) · w(shape)`, where the shape weight `w` counts how many
/// anchor-fused copies of the summand contribute to that kernel: `(s²−1)/d`
/// for the full kernel, `(s−1)/d` for kernels containing `U_s`, and `1` for
/// coset-type kernels. Multiplicities are read from the assembly itself, so a
/// tampered assembly is detected as a [`LatticeError::CharacterMismatch`].
pub fn verify_assembly_character(
    params: &GroupParams,
    eps: &EpsilonVector,
    assembly: &LatticeAssembly,
) -> Result<(), LatticeError> {
    let side = assembly.side;
    let fld = side.field(params);
    let s = fld.p();
    let d = params.d();
    let xi = chars::xi_table(params, eps, side)?;

    // Multiplicities by orbit, read off the assembly's summands.
    let mut orbit_mu: BTreeMap<SummandKind, i64> = BTreeMap::new();
    for summand in &assembly.summands {
        let order = summand.descriptor.kernel.order();
        let expected_kind = if order == s * s * s {
            SummandKind::Trivial
        } else if order == s * s {
            let closure = summand.descriptor.kernel.closure();
            let dual = kernel_dual(s, &closure)
                .ok_or(LatticeError::UnsupportedShape { order })?;
            let chi = RationalIrr::from_dual(s, dual.0, dual.1, dual.2);
            match chi.kind() {
                IrrKind::ContainsU => SummandKind::ContainsU,
                IrrKind::CosetType => SummandKind::Coset {
                    orbit: coset_orbit_index(params, side, &chi),
                },
                _ => return Err(LatticeError::UnsupportedShape { order }),
            }
        } else {
            return Err(LatticeError::UnsupportedShape { order });
        };
        debug_assert_eq!(expected_kind, summand.kind);
        *orbit_mu.entry(expected_kind).or_insert(0) += summand.multiplicity;
    }

    // Reconstruction weights per rational irreducible.
    let t_full = ((s * s - 1) / d) as i64;
    let t_line = ((s - 1) / d) as i64;
    let weighted: Vec<(RationalIrr, i64)> = chars::all_rational_irrs(s)
        .into_iter()
        .map(|chi| {
            let w = match chi.kind() {
                IrrKind::Trivial => orbit_mu.get(&SummandKind::Trivial).copied().unwrap_or(0) * t_full,
                IrrKind::KernelIsN => 0,
                IrrKind::ContainsU => {
                    orbit_mu.get(&SummandKind::ContainsU).copied().unwrap_or(0) * t_line
                }
                IrrKind::CosetType => {
                    let orbit = coset_orbit_index(params, side, &chi);
                    orbit_mu.get(&SummandKind::Coset { orbit }).copied().unwrap_or(0)
                }
            };
            (chi, w)
        })
        .collect();

    for (m, j) in xi.section.elements() {
        let mut got = 0i64;
        for (chi, w) in &weighted {
            if *w != 0 {
                got += w * chi.value(m, j);
            }
        }
        let expected = xi.value(m, j);
        if got != expected {
            return Err(LatticeError::CharacterMismatch {
                element: (m.u, m.v, j),
                expected,
                got,
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn thm_a() -> GroupParams {
        GroupParams::new(7, 19, 3, (1, 3), (1, 2)).unwrap()
    }

    fn good_eps() -> EpsilonVector {
        EpsilonVector::new(vec![2, -1, 0], 3).unwrap()
    }

    #[test]
    fn closure_spans() {
        let k = KernelSubgroup::new(7, vec![(1, 0, 0), (0, 0, 1)]);
        assert_eq!(k.order(), 49);
        assert_eq!(KernelSubgroup::full(7).order(), 343);
        assert_eq!(KernelSubgroup::trivial(7).order(), 1);
        // Generator lists differing by a change of basis give the same subgroup.
        let k2 = KernelSubgroup::new(7, vec![(3, 0, 0), (2, 0, 5)]);
        assert!(k.same_subgroup_as(&k2));
    }

    #[test]
    fn assembly_reference_side_p() {
        let params = thm_a();
        let asm = build_assembly(&params, &good_eps(), Side::P, 5).unwrap();
        // μ = [1, 0, 1, 0, 0, 7]: trivial + contains-U + one coset orbit (i = 2).
        assert_eq!(asm.summands.len(), 3);
        assert_eq!(asm.summands[0].kind, SummandKind::Trivial);
        assert_eq!(asm.summands[0].multiplicity, 1);
        assert_eq!(asm.summands[1].kind, SummandKind::ContainsU);
        assert_eq!(asm.summands[1].multiplicity, 1);
        assert_eq!(asm.summands[2].kind, SummandKind::Coset { orbit: 2 });
        assert_eq!(asm.summands[2].multiplicity, 7);
        // Coset generator is α^{2·8+1} = α¹⁷ = 9·α = 2α.
        assert_eq!(asm.summands[2].descriptor.kernel.gens[1], (0, 2, 1));
        // |X| = s'·|Ker| for every summand.
        assert_eq!(asm.summands[1].descriptor.order(), 19 * 49);
        assert_eq!(asm.summands[0].descriptor.order(), 19 * 343);
    }

    #[test]
    fn assembly_reference_side_q() {
        let params = thm_a();
        let asm = build_assembly(&params, &good_eps(), Side::Q, 5).unwrap();
        // μ = [1, 0, 1, 2, 14, 3]: five summands.
        assert_eq!(asm.summands.len(), 5);
        let mults: Vec<i64> = asm.summands.iter().map(|s| s.multiplicity).collect();
        assert_eq!(mults, vec![1, 1, 2, 14, 3]);
        // Coset generators β^{i·20+1} = β, 2β, 4β for i = 0, 1, 2.
        assert_eq!(asm.summands[2].descriptor.kernel.gens[1], (0, 1, 1));
        assert_eq!(asm.summands[3].descriptor.kernel.gens[1], (0, 2, 1));
        assert_eq!(asm.summands[4].descriptor.kernel.gens[1], (0, 4, 1));
    }

    #[test]
    fn assembly_errors() {
        let params = thm_a();
        assert!(matches!(
            build_assembly(&params, &good_eps(), Side::P, 7),
            Err(LatticeError::BadAuxPrime { aux: 7, active_prime: 7 })
        ));
        assert!(matches!(
            build_assembly(&params, &good_eps(), Side::P, 6),
            Err(LatticeError::BadAuxPrime { .. })
        ));
        // Aux may equal the opposite prime at construction time (projectivity
        // at that prime then fails, but the symbolic assembly exists).
        assert!(build_assembly(&params, &good_eps(), Side::P, 19).is_ok());
        let bad = EpsilonVector::new(vec![-1, 2, 0], 3).unwrap();
        assert!(matches!(
            build_assembly(&params, &bad, Side::P, 5),
            Err(LatticeError::NegativeMultiplicity { value: -2, .. })
        ));
    }

    #[test]
    fn projectivity_examples() {
        let params = thm_a();
        let asm = build_assembly(&params, &good_eps(), Side::Q, 5).unwrap();
        for summand in &asm.summands {
            // Admissible aux primes (∉ {7, 19}) pass for every summand.
            for aux in [2u64, 3, 5, 11, 13, 23] {
                assert!(projectivity_check(&summand.descriptor, aux));
            }
            // The cyclic factor [n] of order 7 obstructs aux = 7.
            assert!(!projectivity_check(&summand.descriptor, 7));
            // The kernel ∩ N_s line (order 19) obstructs aux = 19.
            assert!(!projectivity_check(&summand.descriptor, 19));
        }
        assert!(projectivity_check(&SubgroupDescriptor::trivial(19), 7));
    }

    #[test]
    fn char_formula_tags() {
        let params = thm_a();
        let asm = build_assembly(&params, &good_eps(), Side::P, 5).unwrap();
        assert_eq!(
            summand_char_formula(&asm.summands[0].descriptor).unwrap(),
            SummandCharFormula::FullKernel
        );
        assert_eq!(
            summand_char_formula(&asm.summands[1].descriptor).unwrap(),
            SummandCharFormula::PrimeIndexKernel { index: 7 }
        );
        let malformed = SubgroupDescriptor {
            cyclic: None,
            kernel: KernelSubgroup::new(7, vec![(1, 0, 0)]),
        };
        assert!(matches!(
            summand_char_formula(&malformed),
            Err(LatticeError::UnsupportedShape { order: 7 })
        ));
    }

    #[test]
    fn character_reassembly_both_sides() {
        let params = thm_a();
        let eps = good_eps();
        for side in [Side::P, Side::Q] {
            let asm = build_assembly(&params, &eps, side, 5).unwrap();
            verify_assembly_character(&params, &eps, &asm).unwrap();
        }
    }

    #[test]
    fn character_reassembly_detects_tampering() {
        let params = thm_a();
        let eps = good_eps();
        let mut asm = build_assembly(&params, &eps, Side::P, 5).unwrap();
        asm.summands[2].multiplicity += 1;
        assert!(matches!(
            verify_assembly_character(&params, &eps, &asm),
            Err(LatticeError::CharacterMismatch { .. })
        ));
    }

    #[test]
    fn unit_candidate_assembles_too() {
        // The trivial unit (support 1) also has non-negative rows; its
        // assembly exists and reassembles ξ, it is just not a counterexample.
        let params = thm_a();
        let eps = EpsilonVector::unit(3, 0);
        for side in [Side::P, Side::Q] {
            let asm = build_assembly(&params, &eps, side, 11).unwrap();
            verify_assembly_character(&params, &eps, &asm).unwrap();
        }
    }
}
