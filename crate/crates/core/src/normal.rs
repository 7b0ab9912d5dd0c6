//! Normal subgroups and the π-structure of a group: π-element sets, the full
//! normal subgroup lattice, the cores `O_π(G)`, relative cores over a normal
//! subgroup, the subgroup generated by the π-elements of a normal subgroup,
//! and π-separability witnesses.
//!
//! Quotient groups are never materialized. Every quotient-side operator is
//! computed as a relative operator over the lattice: `N/L` is a π-group iff
//! the index `|N : L|` is a π-number.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::perm::{ConjugacyClasses, ElementId, Group};
use crate::pi::PrimeSet;

/// Class count cap for the exhaustive lattice enumeration.
pub const LATTICE_CLASS_BOUND: usize = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NormalError {
    #[error("lattice enumeration supports at most {bound} classes, group has {found}")]
    ClassBoundExceeded { found: usize, bound: usize },
    #[error("class set is not closed under products")]
    NotClosed,
    #[error("subgroup is not normal: {0}")]
    NotNormal(String),
}

/// A normal subgroup as an explicit member set plus the conjugacy classes it
/// is a union of.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalSubgroup {
    members: Vec<ElementId>,
    classes: BTreeSet<usize>,
    order: usize,
}

impl NormalSubgroup {
    fn from_member_set(cls: &ConjugacyClasses, members: BTreeSet<ElementId>) -> NormalSubgroup {
        let classes: BTreeSet<usize> = members.iter().map(|&m| cls.class_of(m)).collect();
        let members: Vec<ElementId> = members.into_iter().collect();
        NormalSubgroup {
            order: members.len(),
            members,
            classes,
        }
    }

    pub fn trivial(g: &Group) -> NormalSubgroup {
        NormalSubgroup {
            members: vec![g.identity_id()],
            classes: [0].into(),
            order: 1,
        }
    }

    pub fn whole(g: &Group, cls: &ConjugacyClasses) -> NormalSubgroup {
        NormalSubgroup {
            members: (0..g.order()).collect(),
            classes: (0..cls.count()).collect(),
            order: g.order(),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Member element ids, ascending.
    pub fn members(&self) -> &[ElementId] {
        &self.members
    }

    pub fn class_indices(&self) -> &BTreeSet<usize> {
        &self.classes
    }

    pub fn contains_element(&self, x: ElementId) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn contains(&self, other: &NormalSubgroup) -> bool {
        other.members.iter().all(|&m| self.contains_element(m))
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn index_in(&self, overgroup_order: usize) -> u64 {
        (overgroup_order / self.order) as u64
    }

    pub fn intersect(&self, other: &NormalSubgroup, cls: &ConjugacyClasses) -> NormalSubgroup {
        let set: BTreeSet<ElementId> = self
            .members
            .iter()
            .copied()
            .filter(|&m| other.contains_element(m))
            .collect();
        NormalSubgroup::from_member_set(cls, set)
    }
}

/// Subgroup generated by a set of elements, by breadth-first product closure.
fn span(g: &Group, gens: &BTreeSet<ElementId>) -> BTreeSet<ElementId> {
    let mut members: BTreeSet<ElementId> = [g.identity_id()].into();
    let mut queue: Vec<ElementId> = vec![g.identity_id()];
    let gens: Vec<ElementId> = gens.iter().copied().collect();
    while let Some(x) = queue.pop() {
        for &s in &gens {
            let y = g.mul(x, s);
            if members.insert(y) {
                queue.push(y);
            }
        }
    }
    members
}

/// Conjugacy classes whose element order is a π-number. The identity class is
/// always included.
pub fn pi_elements(cls: &ConjugacyClasses, pi: &PrimeSet) -> BTreeSet<usize> {
    (0..cls.count())
        .filter(|&c| pi.is_pi_number(cls.class(c).element_order))
        .collect()
}

/// Smallest normal subgroup containing `seed`.
///
/// The closure of the seed's conjugacy classes is generated; for a
/// class-closed seed this is already `⟨seed⟩`, which is verified.
pub fn normal_closure(g: &Group, cls: &ConjugacyClasses, seed: &[ElementId]) -> NormalSubgroup {
    let seed_set: BTreeSet<ElementId> = seed.iter().copied().collect();
    let mut class_closed: BTreeSet<ElementId> = BTreeSet::new();
    for &x in &seed_set {
        class_closed.extend(cls.class(cls.class_of(x)).members.iter().copied());
    }
    let members = span(g, &class_closed);
    if seed_set == class_closed && !seed_set.is_empty() {
        // a class-closed seed generates a normal subgroup directly
        debug_assert_eq!(members, span(g, &seed_set));
    }
    NormalSubgroup::from_member_set(cls, members)
}

/// The set of classes of a candidate, as a bitmask helper for the lattice
/// enumeration.
struct ClassMaskData {
    sizes: Vec<usize>,
    /// classes reached by powers of each class representative
    power_closure: Vec<u32>,
    /// classes hit by products rep_c · y for y in class d
    product: Vec<Vec<u32>>,
}

fn class_mask_data(g: &Group, cls: &ConjugacyClasses) -> ClassMaskData {
    let k = cls.count();
    let sizes = cls.sizes();
    let power_closure = (0..k)
        .map(|c| {
            let mut mask = 0u32;
            for s in 0..cls.class(c).element_order {
                mask |= 1 << cls.power_class(c, s);
            }
            mask
        })
        .collect();
    let product = (0..k)
        .map(|c| {
            let rep = cls.class(c).rep;
            (0..k)
                .map(|d| {
                    let mut mask = 0u32;
                    for &y in &cls.class(d).members {
                        mask |= 1 << cls.class_of(g.mul(rep, y));
                    }
                    mask
                })
                .collect()
        })
        .collect();
    ClassMaskData {
        sizes,
        power_closure,
        product,
    }
}

/// The complete lattice of normal subgroups.
///
/// Every class-index subset containing the identity class is tested, pruned
/// by order divisibility and power-map closure before the product-closure
/// check. Exhaustive and exact for up to [`LATTICE_CLASS_BOUND`] classes.
/// Results are sorted by (order, class set).
pub fn all_normal_subgroups(
    g: &Group,
    cls: &ConjugacyClasses,
) -> Result<Vec<NormalSubgroup>, NormalError> {
    let k = cls.count();
    if k > LATTICE_CLASS_BOUND {
        return Err(NormalError::ClassBoundExceeded {
            found: k,
            bound: LATTICE_CLASS_BOUND,
        });
    }
    let data = class_mask_data(g, cls);
    let order = g.order();
    let mut result = Vec::new();
    for m in 0u64..(1u64 << (k - 1)) {
        let mask = ((m as u32) << 1) | 1;
        let sum: usize = (0..k)
            .filter(|&c| mask & (1 << c) != 0)
            .map(|c| data.sizes[c])
            .sum();
        if order % sum != 0 {
            continue;
        }
        let member_classes: Vec<usize> = (0..k).filter(|&c| mask & (1 << c) != 0).collect();
        if member_classes
            .iter()
            .any(|&c| data.power_closure[c] & !mask != 0)
        {
            continue;
        }
        let closed = member_classes.iter().all(|&c| {
            member_classes
                .iter()
                .all(|&d| data.product[c][d] & !mask == 0)
        });
        if !closed {
            continue;
        }
        let members: BTreeSet<ElementId> = member_classes
            .iter()
            .flat_map(|&c| cls.class(c).members.iter().copied())
            .collect();
        result.push(NormalSubgroup {
            order: members.len(),
            members: members.into_iter().collect(),
            classes: member_classes.into_iter().collect(),
        });
    }
    result.sort_by(|a, b| (a.order, &a.classes).cmp(&(b.order, &b.classes)));
    Ok(result)
}

/// A class-closed candidate as a normal subgroup, verifying product closure.
pub fn from_classes(
    g: &Group,
    cls: &ConjugacyClasses,
    class_set: &BTreeSet<usize>,
) -> Result<NormalSubgroup, NormalError> {
    let members: BTreeSet<ElementId> = class_set
        .iter()
        .flat_map(|&c| cls.class(c).members.iter().copied())
        .collect();
    for &x in &members {
        for &y in &members {
            if !members.contains(&g.mul(x, y)) {
                return Err(NormalError::NotClosed);
            }
        }
    }
    if !class_set.contains(&0) {
        return Err(NormalError::NotClosed);
    }
    Ok(NormalSubgroup::from_member_set(cls, members))
}

/// `O_π(G)`: the unique largest normal subgroup of π-number order, as the
/// join of the normal closures of the π-classes that generate π-subgroups.
pub fn o_pi(g: &Group, cls: &ConjugacyClasses, pi: &PrimeSet) -> NormalSubgroup {
    let mut qualifying: BTreeSet<ElementId> = BTreeSet::new();
    for c in pi_elements(cls, pi) {
        let closure = normal_closure(g, cls, &[cls.class(c).rep]);
        if pi.is_pi_number(closure.order() as u64) {
            qualifying.extend(closure.members().iter().copied());
        }
    }
    let members = span(g, &qualifying);
    let result = NormalSubgroup::from_member_set(cls, members);
    assert!(
        pi.is_pi_number(result.order() as u64),
        "join of normal π-subgroups must be a π-group"
    );
    result
}

/// The largest normal subgroup `N ⊇ L` with `|N : L|` a π-number; the
/// preimage of `O_π(G/L)` computed without building the quotient.
///
/// An element class belongs iff joining its normal closure onto `L` keeps the
/// index over `L` a π-number; the join of all such joins again has π-number
/// index because indexes of joins divide products of indexes.
pub fn largest_normal_over(
    g: &Group,
    cls: &ConjugacyClasses,
    l: &NormalSubgroup,
    pi: &PrimeSet,
) -> NormalSubgroup {
    let l_members: BTreeSet<ElementId> = l.members().iter().copied().collect();
    let mut qualifying: BTreeSet<ElementId> = l_members.clone();
    for c in 0..cls.count() {
        if l.class_indices().contains(&c) {
            continue;
        }
        let mut gens = l_members.clone();
        gens.extend(cls.class(c).members.iter().copied());
        let joined = span(g, &gens);
        if pi.is_pi_number((joined.len() / l.order()) as u64) {
            qualifying.extend(joined);
        }
    }
    let members = span(g, &qualifying);
    let result = NormalSubgroup::from_member_set(cls, members);
    assert!(
        pi.is_pi_number((result.order() / l.order()) as u64),
        "index of the relative core over L must be a π-number"
    );
    result
}

/// The subgroup generated by the π-elements of a normal subgroup `N`; it is
/// normal in `G`, contained in `N`, and `|N : result|` is a π′-number.
pub fn o_upper_pi_prime(
    g: &Group,
    cls: &ConjugacyClasses,
    n: &NormalSubgroup,
    pi: &PrimeSet,
) -> NormalSubgroup {
    let pi_classes = pi_elements(cls, pi);
    let gens: BTreeSet<ElementId> = n
        .members()
        .iter()
        .copied()
        .filter(|&x| pi_classes.contains(&cls.class_of(x)))
        .collect();
    let members = span(g, &gens);
    let result = NormalSubgroup::from_member_set(cls, members);
    assert!(n.contains(&result));
    let pi_prime = pi.complement_within(g.order() as u64);
    assert!(
        pi_prime.is_pi_number((n.order() / result.order()) as u64),
        "index of the π-element span in N must be a π′-number"
    );
    result
}

/// One step of an ascending series: which set was applied and what it reached.
#[derive(Debug, Clone)]
pub struct SeriesStep {
    pub used_pi: bool,
    pub subgroup: NormalSubgroup,
}

/// Outcome of the π-separability test with the witnessing series.
#[derive(Debug, Clone)]
pub struct SeparabilityWitness {
    pub separable: bool,
    pub series: Vec<SeriesStep>,
}

/// π-separability via the ascending series that alternates relative cores
/// for π and π′, trying both starting orders; separable iff some series
/// reaches the whole group.
pub fn is_pi_separable(g: &Group, cls: &ConjugacyClasses, pi: &PrimeSet) -> SeparabilityWitness {
    let pi_prime = pi.complement_within(g.order() as u64);
    for start_with_pi in [true, false] {
        let mut series = Vec::new();
        let mut current = NormalSubgroup::trivial(g);
        let mut use_pi = start_with_pi;
        let mut stalled = 0;
        loop {
            let set = if use_pi { pi } else { &pi_prime };
            let next = largest_normal_over(g, cls, &current, set);
            let grew = next.order() > current.order();
            series.push(SeriesStep {
                used_pi: use_pi,
                subgroup: next.clone(),
            });
            if next.order() == g.order() {
                return SeparabilityWitness {
                    separable: true,
                    series,
                };
            }
            stalled = if grew { 0 } else { stalled + 1 };
            if stalled >= 2 {
                break;
            }
            current = next;
            use_pi = !use_pi;
        }
    }
    SeparabilityWitness {
        separable: false,
        series: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{conjugacy_classes, group_from_generators, Permutation};

    fn s3() -> (Group, ConjugacyClasses) {
        let g = group_from_generators(
            3,
            vec![
                Permutation::new(vec![1, 0, 2]).unwrap(),
                Permutation::new(vec![1, 2, 0]).unwrap(),
            ],
        )
        .unwrap();
        let cls = conjugacy_classes(&g);
        (g, cls)
    }

    fn c6() -> (Group, ConjugacyClasses) {
        let g = group_from_generators(6, vec![Permutation::new(vec![1, 2, 3, 4, 5, 0]).unwrap()])
            .unwrap();
        let cls = conjugacy_classes(&g);
        (g, cls)
    }

    fn a4() -> (Group, ConjugacyClasses) {
        let g = group_from_generators(
            4,
            vec![
                Permutation::from_cycles(4, &[vec![0, 1, 2]]).unwrap(),
                Permutation::from_cycles(4, &[vec![1, 2, 3]]).unwrap(),
            ],
        )
        .unwrap();
        let cls = conjugacy_classes(&g);
        (g, cls)
    }

    fn a5() -> (Group, ConjugacyClasses) {
        let g = group_from_generators(
            5,
            vec![
                Permutation::from_cycles(5, &[vec![0, 1, 2, 3, 4]]).unwrap(),
                Permutation::from_cycles(5, &[vec![0, 1, 2]]).unwrap(),
            ],
        )
        .unwrap();
        let cls = conjugacy_classes(&g);
        (g, cls)
    }

    #[test]
    fn pi_element_classes_of_s3() {
        let (_, cls) = s3();
        let two = pi_elements(&cls, &PrimeSet::new([2]));
        // identity and the transpositions
        let orders: Vec<u64> = two.iter().map(|&c| cls.class(c).element_order).collect();
        assert_eq!(orders, vec![1, 2]);

        let all = pi_elements(&cls, &PrimeSet::new([2, 3]));
        assert_eq!(all.len(), cls.count());

        let none = pi_elements(&cls, &PrimeSet::empty());
        assert_eq!(none, [0].into());
    }

    #[test]
    fn pi_and_pi_prime_elements_meet_in_identity() {
        for (g, cls) in [s3(), c6(), a4()] {
            for pi in [PrimeSet::new([2]), PrimeSet::new([3]), PrimeSet::empty()] {
                let pip = pi.complement_within(g.order() as u64);
                let a = pi_elements(&cls, &pi);
                let b = pi_elements(&cls, &pip);
                let both: Vec<usize> = a.intersection(&b).copied().collect();
                assert_eq!(both, vec![0]);
            }
        }
    }

    #[test]
    fn closure_of_identity_is_trivial() {
        let (g, cls) = s3();
        let n = normal_closure(&g, &cls, &[g.identity_id()]);
        assert_eq!(n.order(), 1);
    }

    #[test]
    fn transpositions_generate_s3() {
        let (g, cls) = s3();
        let transposition = (0..g.order())
            .find(|&x| g.element_order(x).unwrap() == 2)
            .unwrap();
        let n = normal_closure(&g, &cls, &[transposition]);
        assert_eq!(n.order(), 6);
    }

    #[test]
    fn double_transposition_closure_in_a4_is_klein() {
        let (g, cls) = a4();
        let dt = (0..g.order())
            .find(|&x| g.element_order(x).unwrap() == 2)
            .unwrap();
        let n = normal_closure(&g, &cls, &[dt]);
        assert_eq!(n.order(), 4);
    }

    #[test]
    fn lattice_of_cyclic_six() {
        let (g, cls) = c6();
        let lattice = all_normal_subgroups(&g, &cls).unwrap();
        let orders: Vec<usize> = lattice.iter().map(NormalSubgroup::order).collect();
        assert_eq!(orders, vec![1, 2, 3, 6]);
    }

    #[test]
    fn lattice_of_s3() {
        let (g, cls) = s3();
        let lattice = all_normal_subgroups(&g, &cls).unwrap();
        let orders: Vec<usize> = lattice.iter().map(NormalSubgroup::order).collect();
        assert_eq!(orders, vec![1, 3, 6]);
    }

    #[test]
    fn lattice_of_trivial_group() {
        let g = group_from_generators(1, vec![]).unwrap();
        let cls = conjugacy_classes(&g);
        assert_eq!(all_normal_subgroups(&g, &cls).unwrap().len(), 1);
    }

    #[test]
    fn lattice_closed_under_meet_and_join() {
        for (g, cls) in [s3(), c6(), a4()] {
            let lattice = all_normal_subgroups(&g, &cls).unwrap();
            for a in &lattice {
                for b in &lattice {
                    let meet = a.intersect(b, &cls);
                    assert!(lattice.contains(&meet), "missing intersection");
                    let mut gens: BTreeSet<ElementId> = a.members().iter().copied().collect();
                    gens.extend(b.members().iter().copied());
                    let join = NormalSubgroup::from_member_set(&cls, span(&g, &gens));
                    assert!(lattice.contains(&join), "missing join");
                }
            }
        }
    }

    #[test]
    fn cores_of_s3() {
        let (g, cls) = s3();
        assert_eq!(o_pi(&g, &cls, &PrimeSet::new([3])).order(), 3);
        assert_eq!(o_pi(&g, &cls, &PrimeSet::new([2])).order(), 1);
    }

    #[test]
    fn two_core_of_a4_is_klein() {
        let (g, cls) = a4();
        assert_eq!(o_pi(&g, &cls, &PrimeSet::new([2])).order(), 4);
    }

    #[test]
    fn core_contains_every_normal_pi_subgroup() {
        for (g, cls) in [s3(), c6(), a4()] {
            let lattice = all_normal_subgroups(&g, &cls).unwrap();
            for pi in [PrimeSet::new([2]), PrimeSet::new([3]), PrimeSet::new([2, 3])] {
                let core = o_pi(&g, &cls, &pi);
                assert!(pi.is_pi_number(core.order() as u64));
                for n in &lattice {
                    if pi.is_pi_number(n.order() as u64) {
                        assert!(core.contains(n));
                    }
                }
            }
        }
    }

    #[test]
    fn relative_core_generalizes_core() {
        for (g, cls) in [s3(), c6(), a4()] {
            for pi in [PrimeSet::new([2]), PrimeSet::new([3]), PrimeSet::empty()] {
                let over_trivial =
                    largest_normal_over(&g, &cls, &NormalSubgroup::trivial(&g), &pi);
                assert_eq!(over_trivial, o_pi(&g, &cls, &pi));
            }
        }
    }

    #[test]
    fn relative_core_examples() {
        let (g, cls) = c6();
        let t = NormalSubgroup::trivial(&g);
        assert_eq!(largest_normal_over(&g, &cls, &t, &PrimeSet::new([2])).order(), 2);
        // no room above the whole group
        let whole = NormalSubgroup::whole(&g, &cls);
        assert_eq!(
            largest_normal_over(&g, &cls, &whole, &PrimeSet::new([2])).order(),
            6
        );

        let (g, cls) = s3();
        let over = largest_normal_over(&g, &cls, &NormalSubgroup::trivial(&g), &PrimeSet::new([3]));
        assert_eq!(over.order(), 3);
    }

    #[test]
    fn pi_element_span_inside_normal_subgroup() {
        let (g, cls) = c6();
        let whole = NormalSubgroup::whole(&g, &cls);
        // π = {3}: the π-elements of C6 span its 3-part
        let span3 = o_upper_pi_prime(&g, &cls, &whole, &PrimeSet::new([3]));
        assert_eq!(span3.order(), 3);
        // a π-group is spanned by its own π-elements
        let span_all = o_upper_pi_prime(&g, &cls, &whole, &PrimeSet::new([2, 3]));
        assert_eq!(span_all.order(), 6);
        // in a π′-group only the identity is a π-element
        let span_none = o_upper_pi_prime(&g, &cls, &whole, &PrimeSet::new([5]));
        assert_eq!(span_none.order(), 1);
    }

    #[test]
    fn solvable_groups_are_separable_for_every_pi() {
        for (g, cls) in [s3(), c6(), a4()] {
            for pi in [
                PrimeSet::new([2]),
                PrimeSet::new([3]),
                PrimeSet::new([2, 3]),
                PrimeSet::empty(),
            ] {
                let w = is_pi_separable(&g, &cls, &pi);
                assert!(w.separable, "expected separable for {}", pi);
                assert_eq!(w.series.last().unwrap().subgroup.order(), g.order());
            }
        }
    }

    #[test]
    fn a5_is_not_two_three_separable() {
        let (g, cls) = a5();
        let w = is_pi_separable(&g, &cls, &PrimeSet::new([2, 3]));
        assert!(!w.separable);
        // but π covering all divisor primes is always separable
        let w_all = is_pi_separable(&g, &cls, &PrimeSet::new([2, 3, 5]));
        assert!(w_all.separable);
        let w_empty = is_pi_separable(&g, &cls, &PrimeSet::empty());
        assert!(w_empty.separable);
    }

    #[test]
    fn from_classes_checks_closure() {
        let (g, cls) = s3();
        // the identity class together with the transposition class is not closed
        let transposition_class = (0..cls.count())
            .find(|&c| cls.class(c).element_order == 2)
            .unwrap();
        let bad: BTreeSet<usize> = [0, transposition_class].into();
        assert_eq!(from_classes(&g, &cls, &bad).unwrap_err(), NormalError::NotClosed);
        // identity plus the 3-cycles is the alternating subgroup
        let three_class = (0..cls.count())
            .find(|&c| cls.class(c).element_order == 3)
            .unwrap();
        let good: BTreeSet<usize> = [0, three_class].into();
        assert_eq!(from_classes(&g, &cls, &good).unwrap().order(), 3);
    }
}
