//! Finite permutation groups: element arithmetic, enumeration, conjugacy
//! classes.
//!
//! Groups are given by permutation generators. Construction enumerates every
//! element (up to a configurable bound, 100000 by default) in a deterministic
//! breadth-first order, so element ids are stable run-to-run, and also builds
//! a stabilizer chain whose order must agree with the enumerated count.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;

pub const DEFAULT_ORDER_BOUND: usize = 100_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("images {0:?} are not a bijection on 0..{1}")]
    InvalidPermutation(Vec<usize>, usize),
    #[error("generator degree {found} does not match group degree {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("group order exceeds the enumeration bound {bound}")]
    OrderBoundExceeded { bound: usize },
    #[error("element id {0} out of range")]
    InvalidElement(usize),
    #[error("stabilizer chain order {chain} disagrees with enumeration {enumerated}")]
    ChainMismatch { chain: usize, enumerated: usize },
}

/// A permutation of `{0, …, degree−1}` stored by its image vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, GroupError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(GroupError::InvalidPermutation(images.clone(), n));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree).collect(),
        }
    }

    /// Permutation from disjoint-cycle notation.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self, GroupError> {
        let mut images: Vec<usize> = (0..degree).collect();
        for cycle in cycles {
            for (i, &pt) in cycle.iter().enumerate() {
                if pt >= degree {
                    return Err(GroupError::InvalidPermutation(cycle.clone(), degree));
                }
                images[pt] = cycle[(i + 1) % cycle.len()];
            }
        }
        Permutation::new(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, point: usize) -> usize {
        self.images[point]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Multiplicative order, from the cycle structure.
    pub fn order(&self) -> u64 {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut ord = 1u64;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                p = self.images[p];
                len += 1;
            }
            ord = arith::lcm(ord, len);
        }
        ord
    }

    pub fn first_moved_point(&self) -> Option<usize> {
        self.images
            .iter()
            .enumerate()
            .find(|(i, &j)| *i != j)
            .map(|(i, _)| i)
    }
}

impl std::fmt::Display for Permutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut wrote = false;
        for start in 0..n {
            if seen[start] || self.images[start] == start {
                seen[start] = true;
                continue;
            }
            write!(f, "(")?;
            let mut p = start;
            let mut first = true;
            while !seen[p] {
                seen[p] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{}", p)?;
                first = false;
                p = self.images[p];
            }
            write!(f, ")")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

pub type ElementId = usize;

#[derive(Debug)]
struct ChainLevel {
    point: usize,
    /// all strong generators fixing the base prefix above this level
    gens: Vec<Permutation>,
    /// orbit points in discovery order
    orbit: Vec<usize>,
    /// coset representative u_β with u_β(point) = β, keyed by β
    transversal: HashMap<usize, Permutation>,
}

impl ChainLevel {
    fn new(degree: usize, point: usize) -> Self {
        let mut transversal = HashMap::new();
        transversal.insert(point, Permutation::identity(degree));
        ChainLevel {
            point,
            gens: Vec::new(),
            orbit: vec![point],
            transversal,
        }
    }

    /// Deterministic breadth-first orbit and transversal under `self.gens`.
    fn recompute_orbit(&mut self, degree: usize) {
        let mut transversal = HashMap::new();
        transversal.insert(self.point, Permutation::identity(degree));
        let mut orbit = vec![self.point];
        let mut head = 0;
        while head < orbit.len() {
            let beta = orbit[head];
            head += 1;
            let u_beta = transversal[&beta].clone();
            for s in &self.gens {
                let gamma = s.apply(beta);
                if !transversal.contains_key(&gamma) {
                    transversal.insert(gamma, s.compose(&u_beta));
                    orbit.push(gamma);
                }
            }
        }
        self.orbit = orbit;
        self.transversal = transversal;
    }
}

/// Schreier–Sims stabilizer chain: base points plus strong generators.
///
/// Level `i` holds every strong generator fixing the first `i` base points,
/// so its orbit is the full orbit of `base[i]` under that stabilizer.
#[derive(Debug)]
pub struct StabilizerChain {
    degree: usize,
    levels: Vec<ChainLevel>,
}

impl StabilizerChain {
    pub fn build(degree: usize, gens: &[Permutation]) -> Self {
        let mut chain = StabilizerChain {
            degree,
            levels: Vec::new(),
        };
        for g in gens {
            if !g.is_identity() {
                chain.install(0, g.clone());
            }
        }
        // verify levels bottom-up; a failed Schreier generator restarts from
        // the level it was installed at
        let mut i = chain.levels.len() as isize - 1;
        while i >= 0 {
            match chain.verify_level(i as usize) {
                Some(restart) => i = restart as isize,
                None => i -= 1,
            }
        }
        chain
    }

    /// Add `g` to every level whose base prefix it fixes, starting at `from`;
    /// extends the base when `g` fixes all existing base points.
    fn install(&mut self, from: usize, g: Permutation) {
        let mut i = from;
        loop {
            if i == self.levels.len() {
                let point = g.first_moved_point().expect("non-identity moves a point");
                self.levels.push(ChainLevel::new(self.degree, point));
            }
            self.levels[i].gens.push(g.clone());
            if g.apply(self.levels[i].point) != self.levels[i].point {
                break;
            }
            i += 1;
        }
    }

    /// Recompute the orbit at `level` and check its Schreier generators sift
    /// to the identity through the (already verified) deeper levels. On
    /// failure the residue is installed and the level to restart from is
    /// returned.
    fn verify_level(&mut self, level: usize) -> Option<usize> {
        self.levels[level].recompute_orbit(self.degree);
        let orbit = self.levels[level].orbit.clone();
        let gens = self.levels[level].gens.clone();
        for beta in orbit {
            let u_beta = self.levels[level].transversal[&beta].clone();
            for s in &gens {
                let dest = s.apply(beta);
                let u_dest = self.levels[level].transversal[&dest].clone();
                let schreier = u_dest.inverse().compose(s).compose(&u_beta);
                if schreier.is_identity() {
                    continue;
                }
                let (stuck, residue) = self.sift_from(level + 1, schreier);
                if !residue.is_identity() {
                    self.install(level + 1, residue);
                    let restart = stuck.min(self.levels.len() - 1);
                    return Some(restart);
                }
            }
        }
        None
    }

    /// Sift through levels `start..`; returns the level where sifting stopped
    /// and the remaining residue (identity iff the element was a member).
    fn sift_from(&self, start: usize, g: Permutation) -> (usize, Permutation) {
        let mut residue = g;
        for lvl in start..self.levels.len() {
            if residue.is_identity() {
                return (lvl, residue);
            }
            let dest = residue.apply(self.levels[lvl].point);
            match self.levels[lvl].transversal.get(&dest) {
                Some(u) => residue = u.inverse().compose(&residue),
                None => return (lvl, residue),
            }
        }
        (self.levels.len(), residue)
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.point).collect()
    }

    pub fn order(&self) -> usize {
        self.levels.iter().map(|l| l.transversal.len()).product()
    }

    /// Membership by sifting through the chain.
    pub fn contains(&self, p: &Permutation) -> bool {
        if p.degree() != self.degree {
            return false;
        }
        let (_, residue) = self.sift_from(0, p.clone());
        residue.is_identity()
    }
}

/// A finite permutation group with every element enumerated.
///
/// Element ids index the enumeration; the identity always has id 0.
#[derive(Debug)]
pub struct Group {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, ElementId>,
    inverses: Vec<ElementId>,
    chain: StabilizerChain,
}

pub fn group_from_generators(
    degree: usize,
    generators: Vec<Permutation>,
) -> Result<Group, GroupError> {
    group_from_generators_bounded(degree, generators, DEFAULT_ORDER_BOUND)
}

pub fn group_from_generators_bounded(
    degree: usize,
    generators: Vec<Permutation>,
    bound: usize,
) -> Result<Group, GroupError> {
    for g in &generators {
        if g.degree() != degree {
            return Err(GroupError::DegreeMismatch {
                expected: degree,
                found: g.degree(),
            });
        }
    }
    // breadth-first enumeration over generator products gives stable ids
    let identity = Permutation::identity(degree);
    let mut elements = vec![identity.clone()];
    let mut index = HashMap::new();
    index.insert(identity, 0usize);
    let mut head = 0;
    while head < elements.len() {
        let current = elements[head].clone();
        head += 1;
        for g in &generators {
            let next = current.compose(g);
            if !index.contains_key(&next) {
                if elements.len() >= bound {
                    return Err(GroupError::OrderBoundExceeded { bound });
                }
                index.insert(next.clone(), elements.len());
                elements.push(next);
            }
        }
    }

    let chain = StabilizerChain::build(degree, &generators);
    if chain.order() != elements.len() {
        return Err(GroupError::ChainMismatch {
            chain: chain.order(),
            enumerated: elements.len(),
        });
    }

    let inverses = elements.iter().map(|e| index[&e.inverse()]).collect();

    Ok(Group {
        degree,
        generators,
        elements,
        index,
        inverses,
        chain,
    })
}

impl Group {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn element(&self, id: ElementId) -> &Permutation {
        &self.elements[id]
    }

    pub fn identity_id(&self) -> ElementId {
        0
    }

    pub fn id_of(&self, p: &Permutation) -> Option<ElementId> {
        self.index.get(p).copied()
    }

    pub fn mul(&self, a: ElementId, b: ElementId) -> ElementId {
        self.index[&self.elements[a].compose(&self.elements[b])]
    }

    pub fn inv(&self, a: ElementId) -> ElementId {
        self.inverses[a]
    }

    pub fn conjugate(&self, g: ElementId, x: ElementId) -> ElementId {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// Membership test via the stabilizer chain.
    pub fn contains(&self, p: &Permutation) -> bool {
        self.chain.contains(p)
    }

    pub fn stabilizer_chain(&self) -> &StabilizerChain {
        &self.chain
    }

    /// Least k ≥ 1 with x^k = identity.
    pub fn element_order(&self, x: ElementId) -> Result<u64, GroupError> {
        self.elements
            .get(x)
            .map(Permutation::order)
            .ok_or(GroupError::InvalidElement(x))
    }

    /// Prime divisors of the group order.
    pub fn order_primes(&self) -> Vec<u64> {
        arith::prime_divisors(self.order() as u64)
    }
}

/// One conjugacy class: representative, sorted members, size, element order.
#[derive(Debug, Clone)]
pub struct ClassData {
    pub rep: ElementId,
    pub members: Vec<ElementId>,
    pub size: usize,
    pub element_order: u64,
}

/// The partition of a group into conjugacy classes with its power map.
pub struct ConjugacyClasses {
    classes: Vec<ClassData>,
    class_of: Vec<usize>,
    /// power_map[c][s] = class of rep_c^s, for s modulo the element order
    power_map: Vec<Vec<usize>>,
}

pub fn conjugacy_classes(g: &Group) -> ConjugacyClasses {
    let n = g.order();
    let gen_ids: Vec<ElementId> = g
        .generators()
        .iter()
        .map(|p| g.id_of(p).expect("generator is a member"))
        .collect();
    let mut class_of = vec![usize::MAX; n];
    let mut classes = Vec::new();
    for start in 0..n {
        if class_of[start] != usize::MAX {
            continue;
        }
        let idx = classes.len();
        // conjugation-orbit flood fill from the smallest unassigned id
        let mut members = vec![start];
        class_of[start] = idx;
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &gid in &gen_ids {
                let y = g.conjugate(gid, x);
                if class_of[y] == usize::MAX {
                    class_of[y] = idx;
                    members.push(y);
                    queue.push_back(y);
                }
            }
        }
        members.sort_unstable();
        let rep = members[0];
        let size = members.len();
        let element_order = g.element_order(rep).expect("valid id");
        classes.push(ClassData {
            rep,
            members,
            size,
            element_order,
        });
    }

    let power_map = classes
        .iter()
        .map(|c| {
            let k = c.element_order as usize;
            let mut row = Vec::with_capacity(k);
            let mut e = g.identity_id();
            for _ in 0..k {
                row.push(class_of[e]);
                e = g.mul(e, c.rep);
            }
            row
        })
        .collect();

    ConjugacyClasses {
        classes,
        class_of,
        power_map,
    }
}

impl ConjugacyClasses {
    pub fn count(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[ClassData] {
        &self.classes
    }

    pub fn class(&self, idx: usize) -> &ClassData {
        &self.classes[idx]
    }

    pub fn class_of(&self, x: ElementId) -> usize {
        self.class_of[x]
    }

    /// Class of `rep_c^s`.
    pub fn power_class(&self, c: usize, s: u64) -> usize {
        let k = self.classes[c].element_order;
        self.power_map[c][(s % k) as usize]
    }

    /// Class of the inverses of class `c`.
    pub fn inverse_class(&self, c: usize) -> usize {
        let k = self.classes[c].element_order;
        self.power_class(c, k - 1)
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.size).collect()
    }

    pub fn element_orders(&self) -> Vec<u64> {
        self.classes.iter().map(|c| c.element_order).collect()
    }

    /// Exponent of the group: lcm of the class element orders.
    pub fn exponent(&self) -> u64 {
        self.classes
            .iter()
            .fold(1, |acc, c| arith::lcm(acc, c.element_order))
    }
}

/// On-disk group description: `{ "name": …, "degree": n, "generators": [[images…]…] }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupFile {
    pub name: String,
    pub degree: usize,
    pub generators: Vec<Vec<usize>>,
}

impl GroupFile {
    pub fn to_group(&self) -> Result<Group, GroupError> {
        let gens = self
            .generators
            .iter()
            .map(|im| Permutation::new(im.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        group_from_generators(self.degree, gens)
    }

    pub fn from_group(name: &str, g: &Group) -> GroupFile {
        GroupFile {
            name: name.to_string(),
            degree: g.degree(),
            generators: g.generators().iter().map(|p| p.images().to_vec()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Independent oracle: close a generating set under products by brute
    /// force on raw image vectors, with no Group machinery involved.
    fn brute_force_order(degree: usize, gens: &[Vec<usize>]) -> usize {
        let mut seen: Vec<Vec<usize>> = vec![(0..degree).collect()];
        loop {
            let mut grew = false;
            let snapshot = seen.clone();
            for a in &snapshot {
                for g in gens {
                    let prod: Vec<usize> = g.iter().map(|&i| a[i]).collect();
                    if !seen.contains(&prod) {
                        seen.push(prod);
                        grew = true;
                    }
                }
            }
            if !grew {
                return seen.len();
            }
        }
    }

    fn s3() -> Group {
        group_from_generators(
            3,
            vec![
                Permutation::new(vec![1, 0, 2]).unwrap(),
                Permutation::new(vec![1, 2, 0]).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn trivial_group() {
        let g = group_from_generators(1, vec![]).unwrap();
        assert_eq!(g.order(), 1);
        let cls = conjugacy_classes(&g);
        assert_eq!(cls.count(), 1);
        assert_eq!(cls.class(0).size, 1);
    }

    #[test]
    fn symmetric_on_three_points() {
        let gens = vec![vec![1, 0, 2], vec![1, 2, 0]];
        assert_eq!(brute_force_order(3, &gens), 6);
        let g = s3();
        assert_eq!(g.order(), 6);
        assert_eq!(g.identity_id(), 0);
        assert!(g.element(0).is_identity());
    }

    #[test]
    fn abelian_product_of_cycles() {
        let gens = vec![vec![1, 2, 0, 3, 4, 5], vec![0, 1, 2, 4, 3, 5]];
        assert_eq!(brute_force_order(6, &gens), 6);
        let g = group_from_generators(
            6,
            gens.into_iter()
                .map(|v| Permutation::new(v).unwrap())
                .collect(),
        )
        .unwrap();
        assert_eq!(g.order(), 6);
        let cls = conjugacy_classes(&g);
        assert_eq!(cls.count(), 6, "abelian group has singleton classes");
        assert!(cls.classes().iter().all(|c| c.size == 1));
    }

    #[test]
    fn s3_classes() {
        let g = s3();
        let cls = conjugacy_classes(&g);
        let mut data: Vec<(usize, u64)> = cls
            .classes()
            .iter()
            .map(|c| (c.size, c.element_order))
            .collect();
        data.sort_unstable();
        assert_eq!(data, vec![(1, 1), (2, 3), (3, 2)]);
        assert_eq!(cls.sizes().iter().sum::<usize>(), g.order());
        assert!(cls.sizes().iter().all(|s| g.order() % s == 0));
    }

    #[test]
    fn element_orders() {
        let g = s3();
        assert_eq!(g.element_order(0).unwrap(), 1);
        let transposition = g.id_of(&Permutation::new(vec![1, 0, 2]).unwrap()).unwrap();
        assert_eq!(g.element_order(transposition).unwrap(), 2);
        assert!(g.element_order(99).is_err());

        let c6 = group_from_generators(6, vec![Permutation::new(vec![1, 2, 3, 4, 5, 0]).unwrap()])
            .unwrap();
        let gen = c6
            .id_of(&Permutation::new(vec![1, 2, 3, 4, 5, 0]).unwrap())
            .unwrap();
        assert_eq!(c6.element_order(gen).unwrap(), 6);
    }

    #[test]
    fn rejects_invalid_permutation() {
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
        assert!(Permutation::new(vec![0, 3]).is_err());
    }

    #[test]
    fn enforces_order_bound() {
        let gens = vec![
            Permutation::new(vec![1, 0, 2]).unwrap(),
            Permutation::new(vec![1, 2, 0]).unwrap(),
        ];
        let err = group_from_generators_bounded(3, gens, 5).unwrap_err();
        assert_eq!(err, GroupError::OrderBoundExceeded { bound: 5 });
    }

    #[test]
    fn chain_matches_enumeration_on_larger_groups() {
        // S4 and the dihedral group of order 8 exercise multi-level chains
        let s4 = group_from_generators(
            4,
            vec![
                Permutation::new(vec![1, 0, 2, 3]).unwrap(),
                Permutation::new(vec![1, 2, 3, 0]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(s4.order(), 24);
        assert_eq!(s4.stabilizer_chain().order(), 24);
        assert!(!s4.stabilizer_chain().base().is_empty());

        let d8 = group_from_generators(
            4,
            vec![
                Permutation::new(vec![1, 2, 3, 0]).unwrap(),
                Permutation::new(vec![0, 3, 2, 1]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(d8.order(), 8);
    }

    #[test]
    fn membership_via_chain() {
        let g = s3();
        assert!(g.contains(&Permutation::new(vec![2, 1, 0]).unwrap()));
        // a permutation of larger degree is never a member
        assert!(!g.contains(&Permutation::new(vec![1, 0, 2, 3]).unwrap()));
    }

    #[test]
    fn group_file_round_trip() {
        let g = s3();
        let file = GroupFile::from_group("s3", &g);
        let json = serde_json::to_string(&file).unwrap();
        let back: GroupFile = serde_json::from_str(&json).unwrap();
        let g2 = back.to_group().unwrap();
        assert_eq!(g2.order(), 6);
    }

    #[test]
    fn cycle_notation_display() {
        let p = Permutation::from_cycles(5, &[vec![0, 1, 2], vec![3, 4]]).unwrap();
        assert_eq!(p.to_string(), "(0 1 2)(3 4)");
        assert_eq!(Permutation::identity(3).to_string(), "()");
        assert_eq!(p.order(), 6);
    }

    proptest! {
        #[test]
        fn conjugation_preserves_classes(a in 0usize..6, b in 0usize..6) {
            let g = s3();
            let cls = conjugacy_classes(&g);
            let conj = g.conjugate(a, b);
            prop_assert_eq!(cls.class_of(conj), cls.class_of(b));
        }

        #[test]
        fn power_map_is_consistent(x in 0usize..6, s in 0u64..12) {
            let g = s3();
            let cls = conjugacy_classes(&g);
            let c = cls.class_of(x);
            let k = g.element_order(x).unwrap();
            let mut e = g.identity_id();
            for _ in 0..(s % k) {
                e = g.mul(e, x);
            }
            prop_assert_eq!(cls.class_of(e), cls.power_class(c, s % k));
        }
    }
}
