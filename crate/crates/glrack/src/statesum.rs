//! Boltzmann weights and the group-ring state-sum invariant.
//!
//! The coefficient group is cyclic `Z_m`, written multiplicatively as
//! powers of `t`; weights are accumulated additively in `Z_m` and
//! exponentiated only for display. The state sum of a diagram is the
//! multiset of per-coloring weight sums, an element of the integral group
//! ring `Z[Z_m]`.

use crate::algebra::FiniteGLRack;
use crate::diagram::FrontDiagram;
use crate::homology::{coboundary_of, validate_cocycle_2, Cocycle2};
use crate::presentation::{close_ok, cross_out, open_upper, scan_plan, ScanStep};
use crate::{Error, Result};
use std::collections::{BTreeMap, HashMap};

/// A non-negative element of `Z[Z_m]`: multiplicities per exponent of `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupRingElement {
    pub modulus: u64,
    terms: BTreeMap<u64, u64>,
}

impl GroupRingElement {
    pub fn new(modulus: u64) -> GroupRingElement {
        GroupRingElement { modulus, terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, exponent: u64, multiplicity: u64) {
        if multiplicity == 0 {
            return;
        }
        *self.terms.entry(exponent % self.modulus.max(1)).or_insert(0) += multiplicity;
    }

    /// `(exponent, multiplicity)` pairs sorted by exponent, zero
    /// multiplicities absent.
    pub fn terms(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.terms.iter().map(|(&e, &m)| (e, m))
    }

    /// Equals the number of colorings the sum was built from.
    pub fn total_multiplicity(&self) -> u64 {
        self.terms.values().sum()
    }

    /// Multiplicity of `t^exponent`.
    pub fn multiplicity(&self, exponent: u64) -> u64 {
        self.terms.get(&exponent).copied().unwrap_or(0)
    }
}

impl std::fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&e, &m)| match e {
                0 => format!("{m}"),
                1 => format!("{m}*t"),
                _ => format!("{m}*t^{e}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Additive Boltzmann weight of a colored crossing: `φ(x, y)` at a positive
/// crossing and `−φ(x ∗⁻¹ y, y)` at a negative one, with `x` the color of
/// the orientation-incoming under-arc and `y` the over-arc color.
pub fn boltzmann_weight(
    rack: &FiniteGLRack,
    phi: &Cocycle2,
    sign: i8,
    under_in: usize,
    over: usize,
) -> i64 {
    let m = phi.modulus as i64;
    if sign >= 0 {
        phi.value(under_in, over).rem_euclid(m)
    } else {
        (-phi.value(rack.op_inv(under_in, over), over)).rem_euclid(m)
    }
}

/// The state sum over all colorings. The cocycle is validated first; a
/// failed condition is reported as a domain error naming the condition and
/// a witness.
pub fn state_sum(
    diagram: &FrontDiagram,
    rack: &FiniteGLRack,
    phi: &Cocycle2,
) -> Result<GroupRingElement> {
    validate_cocycle_2(rack, phi)?;
    let m = phi.modulus;
    let plan = scan_plan(diagram);
    let n = rack.order();
    // state: (active strand colors, accumulated weight) -> coloring count
    let mut states: HashMap<(Vec<u8>, u64), u64> = HashMap::new();
    states.insert((Vec::new(), 0), 1);
    for (idx, step) in plan.iter().enumerate() {
        let i = diagram.events()[idx].level - 1;
        let mut next: HashMap<(Vec<u8>, u64), u64> = HashMap::with_capacity(states.len());
        match *step {
            ScanStep::Open { up } => {
                for ((vec, w), cnt) in &states {
                    for c in 0..n {
                        let mut v = vec.clone();
                        v.insert(i, c as u8);
                        v.insert(i + 1, open_upper(rack, c, up) as u8);
                        *next.entry((v, *w)).or_insert(0) += cnt;
                    }
                }
            }
            ScanStep::Close { up } => {
                for ((vec, w), cnt) in &states {
                    if close_ok(rack, vec[i] as usize, vec[i + 1] as usize, up) {
                        let mut v = vec.clone();
                        v.drain(i..i + 2);
                        *next.entry((v, *w)).or_insert(0) += cnt;
                    }
                }
            }
            ScanStep::Cross { sign, under_rightward } => {
                for ((vec, w), cnt) in &states {
                    let a = vec[i] as usize;
                    let y = vec[i + 1] as usize;
                    let out = cross_out(rack, a, y, sign, under_rightward);
                    let or_in = if under_rightward { a } else { out };
                    let weight = boltzmann_weight(rack, phi, sign, or_in, y);
                    let mut v = vec.clone();
                    v[i] = y as u8;
                    v[i + 1] = out as u8;
                    let w2 = (w + weight.rem_euclid(m as i64) as u64) % m;
                    *next.entry((v, w2)).or_insert(0) += cnt;
                }
            }
        }
        states = next;
    }
    let mut sum = GroupRingElement::new(m);
    for ((vec, w), cnt) in states {
        debug_assert!(vec.is_empty());
        sum.add_term(w, cnt);
    }
    Ok(sum)
}

/// Multiset equality; moduli must agree.
pub fn state_sum_equal(a: &GroupRingElement, b: &GroupRingElement) -> Result<bool> {
    if a.modulus != b.modulus {
        return Err(Error::Domain(format!(
            "state sums over different coefficient groups: Z_{} vs Z_{}",
            a.modulus, b.modulus
        )));
    }
    Ok(a == b)
}

/// Perturbing a cocycle by the coboundary of a degree-1 class cochain must
/// not change the state sum.
pub fn cohomologous_invariance_check(
    diagram: &FrontDiagram,
    rack: &FiniteGLRack,
    phi: &Cocycle2,
    lambda: &[i64],
) -> Result<bool> {
    let delta = coboundary_of(rack, lambda, phi.modulus)?;
    let perturbed = phi.add(&delta)?;
    let a = state_sum(diagram, rack, phi)?;
    let b = state_sum(diagram, rack, &perturbed)?;
    state_sum_equal(&a, &b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{FiniteGLRack, FiniteRack};
    use crate::diagram::{trace, trefoil, unknot, unknot_balanced};
    use crate::homology::cocycle_space_2;
    use crate::perm::Perm;
    use crate::presentation::{colorings_listed, count_colorings};

    fn t(n: usize) -> FiniteGLRack {
        FiniteGLRack::trivial_structure(FiniteRack::trivial_quandle(n)).unwrap()
    }

    fn r3() -> FiniteGLRack {
        FiniteGLRack::trivial_structure(FiniteRack::dihedral_quandle(3)).unwrap()
    }

    fn gf4() -> FiniteGLRack {
        FiniteGLRack::trivial_structure(FiniteRack::alexander_gf4()).unwrap()
    }

    /// Independent route: enumerate listed colorings and weigh crossings
    /// directly off the strand map.
    pub(crate) fn state_sum_by_listing(
        d: &FrontDiagram,
        rack: &FiniteGLRack,
        phi: &Cocycle2,
    ) -> GroupRingElement {
        let map = trace(d);
        let m = phi.modulus as i64;
        let mut sum = GroupRingElement::new(phi.modulus);
        for coloring in colorings_listed(d, rack, 1 << 22).unwrap() {
            let mut w = 0i64;
            for x in &map.crossings {
                let or_in = if map.segments[x.under_in].rightward {
                    coloring[x.under_in]
                } else {
                    coloring[x.under_out]
                };
                w = (w + boltzmann_weight(rack, phi, x.sign, or_in, coloring[x.over_in]))
                    .rem_euclid(m);
            }
            sum.add_term(w as u64, 1);
        }
        sum
    }

    #[test]
    fn crossingless_diagrams_sit_at_t_zero() {
        for d in [unknot(), unknot_balanced(3).unwrap()] {
            let rack = t(3);
            let phi = Cocycle2::zero(3, 2);
            let sum = state_sum(&d, &rack, &phi).unwrap();
            let count = count_colorings(&d, &rack);
            assert_eq!(sum.multiplicity(0), count);
            assert_eq!(sum.total_multiplicity(), count);
        }
    }

    #[test]
    fn trefoil_with_zero_cocycle_counts_colorings() {
        let sum = state_sum(&trefoil(), &r3(), &Cocycle2::zero(3, 3)).unwrap();
        assert_eq!(sum.to_string(), "9");
        assert_eq!(sum.multiplicity(0), 9);
    }

    #[test]
    fn invalid_cocycle_is_named() {
        let mut phi = Cocycle2::zero(3, 2);
        phi.values[0][0] = 1;
        let err = state_sum(&trefoil(), &r3(), &phi).unwrap_err();
        assert!(err.to_string().contains("condition (2)"), "{err}");
    }

    #[test]
    fn trefoil_alexander_statesum_has_two_terms() {
        let rack = gf4();
        let cocycles = cocycle_space_2(&rack, 2).unwrap();
        assert!(!cocycles.is_empty());
        let cobs = crate::homology::coboundary_space_2(&rack, 2).unwrap();
        // pick a cocycle producing a nontrivial enhancement
        let mut nontrivial = None;
        for phi in &cocycles {
            let sum = state_sum(&trefoil(), &rack, phi).unwrap();
            assert_eq!(sum, state_sum_by_listing(&trefoil(), &rack, phi));
            assert_eq!(sum.total_multiplicity(), 16);
            if sum.multiplicity(1) > 0 {
                nontrivial = Some((phi.clone(), sum));
            }
        }
        let (phi, sum) = nontrivial.expect("a basis cocycle detects the trefoil");
        assert!(!cobs.contains(&phi));
        assert_eq!(sum.multiplicity(0) + sum.multiplicity(1), 16);
        assert_eq!(sum.to_string(), "4 + 12*t");
    }

    #[test]
    fn equality_requires_matching_modulus() {
        let a = GroupRingElement::new(2);
        let b = GroupRingElement::new(3);
        assert!(state_sum_equal(&a, &b).is_err());
        let mut c = GroupRingElement::new(2);
        c.add_term(0, 9);
        let mut d = GroupRingElement::new(2);
        d.add_term(0, 3);
        assert!(!state_sum_equal(&c, &d).unwrap());
        assert!(state_sum_equal(&c, &c.clone()).unwrap());
    }

    #[test]
    fn cohomologous_perturbations_preserve_the_sum() {
        let rack = gf4();
        let phi = cocycle_space_2(&rack, 2).unwrap().into_iter().next().unwrap();
        // lambda = 0
        assert!(cohomologous_invariance_check(&trefoil(), &rack, &phi, &[0; 4]).unwrap());
        // all class cochains on a trivial structure are admissible
        for bits in 0..16u32 {
            let lambda: Vec<i64> = (0..4).map(|i| ((bits >> i) & 1) as i64).collect();
            assert!(
                cohomologous_invariance_check(&trefoil(), &rack, &phi, &lambda).unwrap(),
                "lambda {lambda:?}"
            );
        }
    }

    #[test]
    fn display_formats() {
        let mut s = GroupRingElement::new(4);
        assert_eq!(s.to_string(), "0");
        s.add_term(0, 4);
        s.add_term(1, 12);
        s.add_term(3, 1);
        assert_eq!(s.to_string(), "4 + 12*t + 1*t^3");
    }
}
