//! Finite permutation groups by brute-force enumeration.
//!
//! Elements are sorted lexicographically by image vector, so the identity is
//! always element 0 and conjugacy class 0. Every class is represented by its
//! lexicographically smallest member, and classes are ordered by representative.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_MAX_GROUP_ORDER: usize = 20_000;

/// A permutation of `{0, .., d-1}`; serialized with 1-based images.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Self((0..degree as u32).collect())
    }

    /// Builds a permutation from 1-based images, rejecting non-bijections.
    pub fn from_one_based(images: &[u32]) -> Result<Self> {
        let d = images.len();
        let mut seen = vec![false; d];
        let mut out = Vec::with_capacity(d);
        for &x in images {
            if x == 0 || x as usize > d || seen[x as usize - 1] {
                return Err(Error::NotAPermutation(format!("{images:?}")));
            }
            seen[x as usize - 1] = true;
            out.push(x - 1);
        }
        Ok(Self(out))
    }

    /// Builds a permutation from 0-based images; the caller guarantees bijectivity.
    pub fn from_zero_based(images: Vec<u32>) -> Result<Self> {
        let one: Vec<u32> = images.iter().map(|x| x + 1).collect();
        Self::from_one_based(&one)
    }

    pub fn one_based(&self) -> Vec<u32> {
        self.0.iter().map(|x| x + 1).collect()
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn image(&self, point: usize) -> usize {
        self.0[point] as usize
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Self) -> Self {
        Self(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Self(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn order(&self) -> u32 {
        let mut seen = vec![false; self.0.len()];
        let mut order = 1u32;
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.0[x] as usize;
                len += 1;
            }
            order = order.lcm(&len);
        }
        order
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Cycle notation with 1-based points.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.0.len()];
        let mut any = false;
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            any = true;
            write!(f, "(")?;
            let mut x = start;
            let mut first = true;
            while !seen[x] {
                seen[x] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{}", x + 1)?;
                first = false;
                x = self.0[x] as usize;
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_based().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let images = Vec::<u32>::deserialize(d)?;
        Self::from_one_based(&images).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjugacyClass {
    /// Index of the lexicographically smallest member.
    pub representative: usize,
    pub members: Vec<usize>,
    pub element_order: u32,
}

impl ConjugacyClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// An enumerated finite permutation group with its class structure.
#[derive(Clone, Debug)]
pub struct GroupData {
    name: String,
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
    classes: Vec<ConjugacyClass>,
    class_of: Vec<usize>,
    /// `power_maps[k][c]` is the class of `s^k` for `s` in class `c`, `0 <= k < exponent`.
    power_maps: Vec<Vec<usize>>,
    exponent: u32,
}

impl GroupData {
    /// Enumerates the group generated by `generators` acting on `degree` points.
    pub fn enumerate(
        name: impl Into<String>,
        degree: usize,
        generators: Vec<Permutation>,
        bound: usize,
    ) -> Result<Self> {
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        let id = Permutation::identity(degree);
        let mut seen: HashMap<Permutation, ()> = HashMap::new();
        seen.insert(id.clone(), ());
        let mut queue = VecDeque::from([id]);
        let mut found = Vec::new();
        while let Some(x) = queue.pop_front() {
            for g in &generators {
                let y = x.then(g);
                if !seen.contains_key(&y) {
                    if seen.len() >= bound {
                        return Err(Error::GroupTooLarge { bound });
                    }
                    seen.insert(y.clone(), ());
                    queue.push_back(y);
                }
            }
            found.push(x);
        }
        found.sort();
        let index: HashMap<Permutation, usize> = found
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();

        let gen_inverses: Vec<Permutation> = generators.iter().map(Permutation::inverse).collect();
        let n = found.len();
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for start in 0..n {
            if class_of[start] != usize::MAX {
                continue;
            }
            let c = classes.len();
            class_of[start] = c;
            let mut members = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for (g, gi) in generators.iter().zip(&gen_inverses) {
                    let y = index[&gi.then(&found[x]).then(g)];
                    if class_of[y] == usize::MAX {
                        class_of[y] = c;
                        members.push(y);
                        queue.push_back(y);
                    }
                }
            }
            members.sort_unstable();
            classes.push(ConjugacyClass {
                representative: start,
                members,
                element_order: found[start].order(),
            });
        }

        let exponent = classes.iter().fold(1u32, |e, c| e.lcm(&c.element_order));
        let mut power_maps = vec![vec![0usize; classes.len()]; exponent as usize];
        for (c, class) in classes.iter().enumerate() {
            let rep = &found[class.representative];
            let mut p = Permutation::identity(degree);
            for row in power_maps.iter_mut() {
                row[c] = class_of[index[&p]];
                p = p.then(rep);
            }
        }

        Ok(Self {
            name: name.into(),
            degree,
            generators,
            elements: found,
            index,
            classes,
            class_of,
            power_maps,
            exponent,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Permutation {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, element: usize) -> usize {
        self.class_of[element]
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    /// Class of `s^k` for `s` in each class; `k` is reduced modulo the exponent.
    pub fn power_map(&self, k: i64) -> &[usize] {
        &self.power_maps[k.rem_euclid(self.exponent as i64) as usize]
    }

    /// Class of `s^-1` for `s` in each class.
    pub fn inverse_class_map(&self) -> &[usize] {
        self.power_map(-1)
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.index[&self.elements[a].then(&self.elements[b])]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.index[&self.elements[a].inverse()]
    }

    pub fn identity(&self) -> usize {
        0
    }

    /// Structural equality: same degree and same element set.
    pub fn same_as(&self, other: &Self) -> bool {
        std::ptr::eq(self, other)
            || (self.degree == other.degree && self.elements == other.elements)
    }

    /// Subgroup generated by the given elements.
    pub fn generate(&self, gens: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.order()];
        inside[0] = true;
        let mut members = vec![0];
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !inside[y] {
                    inside[y] = true;
                    members.push(y);
                    queue.push_back(y);
                }
            }
        }
        members.sort_unstable();
        members
    }

    /// Smallest normal subgroup containing the given elements.
    pub fn normal_closure(&self, seeds: &[usize]) -> Vec<usize> {
        let gens: Vec<usize> = self
            .generators
            .iter()
            .map(|g| self.index[g])
            .collect();
        let mut current: BTreeSet<usize> = seeds.iter().copied().collect();
        loop {
            let list: Vec<usize> = current.iter().copied().collect();
            let sub = self.generate(&list);
            let mut grew = false;
            let mut next: BTreeSet<usize> = sub.iter().copied().collect();
            for &x in &sub {
                for &g in &gens {
                    let y = self.mul(self.mul(self.inv(g), x), g);
                    grew |= next.insert(y);
                }
            }
            if !grew {
                return sub;
            }
            current = next;
        }
    }

    /// Commutator subgroup `[G, G]`.
    pub fn derived_subgroup(&self) -> Vec<usize> {
        let gens: Vec<usize> = self.generators.iter().map(|g| self.index[g]).collect();
        let mut seeds = Vec::new();
        for &a in &gens {
            for &b in &gens {
                let c = self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b));
                seeds.push(c);
            }
        }
        self.normal_closure(&seeds)
    }

    /// Invariant factors of the abelianization `G / [G, G]`, ascending, each dividing the next.
    pub fn abelianization(&self) -> Vec<u64> {
        let derived = self.derived_subgroup();
        let cosets = self.coset_ids(&derived);
        let m = self.order() / derived.len();
        // Order of each coset in the quotient.
        let mut order_counts: HashMap<u64, usize> = HashMap::new();
        let mut done = vec![false; m];
        for x in 0..self.order() {
            let c = cosets[x];
            if done[c] {
                continue;
            }
            done[c] = true;
            let mut k = 1u64;
            let mut y = x;
            while cosets[y] != cosets[0] {
                y = self.mul(y, x);
                k += 1;
            }
            *order_counts.entry(k).or_default() += 1;
        }
        abelian_invariants(m as u64, &order_counts)
    }

    /// Coset id (for left cosets `xN` of a normal subgroup) of every element.
    fn coset_ids(&self, normal: &[usize]) -> Vec<usize> {
        let mut ids = vec![usize::MAX; self.order()];
        let mut next = 0;
        for x in 0..self.order() {
            if ids[x] != usize::MAX {
                continue;
            }
            for &h in normal {
                ids[self.mul(x, h)] = next;
            }
            next += 1;
        }
        ids
    }

    pub fn is_normal(&self, members: &[usize]) -> bool {
        let inside: BTreeSet<usize> = members.iter().copied().collect();
        self.generators.iter().all(|g| {
            let g = self.index[g];
            let gi = self.inv(g);
            members
                .iter()
                .all(|&x| inside.contains(&self.mul(self.mul(gi, x), g)))
        })
    }
}

/// Invariant factors of an abelian group of order `m` from its element-order histogram.
fn abelian_invariants(m: u64, order_counts: &HashMap<u64, usize>) -> Vec<u64> {
    let count_dividing = |k: u64| -> u64 {
        order_counts
            .iter()
            .filter(|(&o, _)| k % o == 0)
            .map(|(_, &c)| c as u64)
            .sum()
    };
    let mut primes = Vec::new();
    let mut r = m;
    let mut p = 2;
    while p * p <= r {
        if r % p == 0 {
            primes.push(p);
            while r % p == 0 {
                r /= p;
            }
        }
        p += 1;
    }
    if r > 1 {
        primes.push(r);
    }
    // For each prime, recover the partition of exponents from |{x : p^k x = 0}|.
    let mut per_prime: Vec<(u64, Vec<u32>)> = Vec::new();
    for &p in &primes {
        let mut logs = vec![0u32];
        let mut pk = 1u64;
        loop {
            pk *= p;
            let c = count_dividing(pk);
            let mut l = 0;
            let mut c2 = c;
            while c2 > 1 {
                c2 /= p;
                l += 1;
            }
            logs.push(l);
            if c >= p_part(m, p) {
                break;
            }
        }
        // at_least[k] = #{i : lambda_i >= k}
        let at_least: Vec<u32> = logs.windows(2).map(|w| w[1] - w[0]).collect();
        let parts = at_least[0] as usize;
        let mut lambda = vec![0u32; parts];
        for (k, &cnt) in at_least.iter().enumerate() {
            for l in lambda.iter_mut().take(cnt as usize) {
                *l = k as u32 + 1;
            }
        }
        per_prime.push((p, lambda));
    }
    let len = per_prime.iter().map(|(_, l)| l.len()).max().unwrap_or(0);
    let mut factors = vec![1u64; len];
    for (p, lambda) in per_prime {
        // lambda is descending; largest exponents go to the last factors.
        for (i, &e) in lambda.iter().enumerate() {
            factors[len - 1 - i] *= p.pow(e);
        }
    }
    factors
}

fn p_part(m: u64, p: u64) -> u64 {
    let mut r = 1;
    let mut m = m;
    while m % p == 0 {
        m /= p;
        r *= p;
    }
    r
}

/// A subgroup together with its own class structure and fusion into the parent classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubgroupData {
    pub members: Vec<usize>,
    pub normal: bool,
    /// Conjugacy classes of the subgroup under its own conjugation, as parent element indices.
    pub classes: Vec<Vec<usize>>,
    /// Parent class containing each subgroup class.
    pub fusion: Vec<usize>,
}

impl SubgroupData {
    pub fn order(&self) -> usize {
        self.members.len()
    }

    /// Parent classes that meet the subgroup.
    pub fn parent_classes(&self) -> BTreeSet<usize> {
        self.fusion.iter().copied().collect()
    }
}

/// Class data of a subgroup `H` of `group` with fusion into the classes of `group`.
pub fn subgroup_classes(group: &GroupData, members: &[usize]) -> Result<SubgroupData> {
    let mut members = members.to_vec();
    members.sort_unstable();
    members.dedup();
    let inside: BTreeSet<usize> = members.iter().copied().collect();
    if !inside.contains(&group.identity()) {
        return Err(Error::NotASubgroup("identity missing".into()));
    }
    for &a in &members {
        for &b in &members {
            if !inside.contains(&group.mul(a, b)) {
                return Err(Error::NotASubgroup(format!(
                    "not closed: product of elements {a} and {b} leaves the set"
                )));
            }
        }
    }
    let inverses: Vec<usize> = members.iter().map(|&h| group.inv(h)).collect();
    let mut assigned: HashMap<usize, usize> = HashMap::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &x in &members {
        if assigned.contains_key(&x) {
            continue;
        }
        let c = classes.len();
        let mut class: BTreeSet<usize> = BTreeSet::new();
        for (&h, &hi) in members.iter().zip(&inverses) {
            class.insert(group.mul(group.mul(hi, x), h));
        }
        for &y in &class {
            assigned.insert(y, c);
        }
        classes.push(class.into_iter().collect());
    }
    let fusion = classes.iter().map(|c| group.class_of(c[0])).collect();
    let normal = group.is_normal(&members);
    Ok(SubgroupData {
        members,
        normal,
        classes,
        fusion,
    })
}

/// Power map `k = 2`: the class of `s^2` for `s` in each class.
pub fn squaring_class_map(group: &GroupData) -> Vec<usize> {
    group.power_map(2).to_vec()
}

/// All normal subgroups `H` with `G/H` elementary abelian of exponent dividing 2,
/// i.e. every subgroup containing the subgroup generated by squares (which
/// already contains all commutators). Sorted by order, then by members.
pub fn elementary_2_quotient_subgroups(group: &GroupData) -> Result<Vec<SubgroupData>> {
    let squares: Vec<usize> = (0..group.order()).map(|x| group.mul(x, x)).collect();
    let base = group.generate(&squares);
    let cosets = group.coset_ids(&base);
    let num_cosets = group.order() / base.len();
    let mut coset_rep = vec![usize::MAX; num_cosets];
    for x in 0..group.order() {
        if coset_rep[cosets[x]] == usize::MAX {
            coset_rep[cosets[x]] = x;
        }
    }

    // Coordinates of each coset in G/N viewed as a vector space over F_2.
    let mut coords: Vec<Option<u32>> = vec![None; num_cosets];
    coords[cosets[0]] = Some(0);
    let mut spanned = vec![cosets[0]];
    let mut dim = 0u32;
    for x in 0..group.order() {
        if coords[cosets[x]].is_some() {
            continue;
        }
        let bit = 1u32 << dim;
        dim += 1;
        let current = spanned.clone();
        for c in current {
            let y = group.mul(coset_rep[c], x);
            let v = coords[c].unwrap() ^ bit;
            coords[cosets[y]] = Some(v);
            spanned.push(cosets[y]);
        }
    }
    debug_assert_eq!(1usize << dim, num_cosets);

    let mut vector_to_coset = vec![0usize; num_cosets];
    for (c, v) in coords.iter().enumerate() {
        vector_to_coset[v.unwrap() as usize] = c;
    }

    let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut queue = VecDeque::from([vec![0u32]]);
    seen.insert(vec![0]);
    while let Some(space) = queue.pop_front() {
        for v in 0..(1u32 << dim) {
            if space.binary_search(&v).is_ok() {
                continue;
            }
            let mut bigger: Vec<u32> = space.iter().flat_map(|&w| [w, w ^ v]).collect();
            bigger.sort_unstable();
            bigger.dedup();
            if seen.insert(bigger.clone()) {
                queue.push_back(bigger);
            }
        }
    }

    let mut out = Vec::with_capacity(seen.len());
    for space in seen {
        let wanted: BTreeSet<usize> = space.iter().map(|&v| vector_to_coset[v as usize]).collect();
        let members: Vec<usize> = (0..group.order())
            .filter(|&x| wanted.contains(&cosets[x]))
            .collect();
        out.push(subgroup_classes(group, &members)?);
    }
    out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.members.cmp(&b.members)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(images: &[u32]) -> Permutation {
        Permutation::from_one_based(images).unwrap()
    }

    fn s3() -> GroupData {
        GroupData::enumerate("S3", 3, vec![perm(&[2, 1, 3]), perm(&[2, 3, 1])], 100).unwrap()
    }

    fn c4() -> GroupData {
        GroupData::enumerate("C4", 4, vec![perm(&[2, 3, 4, 1])], 100).unwrap()
    }

    fn c2xc2() -> GroupData {
        GroupData::enumerate("C2xC2", 4, vec![perm(&[2, 1, 3, 4]), perm(&[1, 2, 4, 3])], 100)
            .unwrap()
    }

    /// Brute-force conjugacy classes straight from the definition.
    fn brute_classes(g: &GroupData) -> BTreeSet<Vec<usize>> {
        (0..g.order())
            .map(|x| {
                let mut c: Vec<usize> = (0..g.order())
                    .map(|y| g.mul(g.mul(g.inv(y), x), y))
                    .collect();
                c.sort_unstable();
                c.dedup();
                c
            })
            .collect()
    }

    #[test]
    fn permutation_rejects_non_bijection() {
        assert!(Permutation::from_one_based(&[1, 1, 2]).is_err());
        assert!(Permutation::from_one_based(&[0, 1]).is_err());
        assert_eq!(perm(&[2, 3, 1]).to_string(), "(1 2 3)");
        assert_eq!(perm(&[2, 3, 1]).order(), 3);
    }

    #[test]
    fn s3_structure() {
        let g = s3();
        assert_eq!(g.order(), 6);
        let sizes: Vec<usize> = g.classes().iter().map(|c| c.size()).collect();
        assert_eq!(sizes, vec![1, 3, 2]);
        assert_eq!(g.exponent(), 6);
        let brute = brute_classes(&g);
        let ours: BTreeSet<Vec<usize>> = g.classes().iter().map(|c| c.members.clone()).collect();
        assert_eq!(brute, ours);
        assert_eq!(g.abelianization(), vec![2]);
    }

    #[test]
    fn trivial_group() {
        let g = GroupData::enumerate("1", 1, vec![], 10).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.num_classes(), 1);
        assert_eq!(squaring_class_map(&g), vec![0]);
        assert_eq!(g.power_map(1), &[0]);
        assert!(g.abelianization().is_empty());
    }

    #[test]
    fn bound_is_enforced() {
        let err = GroupData::enumerate("S3", 3, vec![perm(&[2, 1, 3]), perm(&[2, 3, 1])], 5);
        assert!(matches!(err, Err(Error::GroupTooLarge { bound: 5 })));
    }

    #[test]
    fn c4_squaring() {
        let g = c4();
        let a = g.index_of(&perm(&[2, 3, 4, 1])).unwrap();
        let a2 = g.index_of(&perm(&[3, 4, 1, 2])).unwrap();
        let sq = squaring_class_map(&g);
        assert_eq!(sq[g.class_of(a)], g.class_of(a2));
        assert_eq!(g.abelianization(), vec![4]);
    }

    #[test]
    fn squares_classes_are_squares() {
        for g in [s3(), c4(), c2xc2()] {
            let sq = squaring_class_map(&g);
            let square_elems: BTreeSet<usize> = (0..g.order()).map(|x| g.mul(x, x)).collect();
            let image: BTreeSet<usize> = sq.iter().copied().collect();
            let via_classes: BTreeSet<usize> = image
                .iter()
                .flat_map(|&c| g.classes()[c].members.iter().copied())
                .collect();
            assert_eq!(square_elems, via_classes);
        }
    }

    #[test]
    fn elementary_quotients() {
        let g = c4();
        let subs = elementary_2_quotient_subgroups(&g).unwrap();
        assert_eq!(subs.len(), 2);
        assert_eq!(subs[0].order(), 2);
        assert_eq!(subs[1].order(), 4);

        let v = c2xc2();
        let subs = elementary_2_quotient_subgroups(&v).unwrap();
        assert_eq!(subs.len(), 5);
        assert!(subs.iter().all(|h| h.normal));

        let c3 = GroupData::enumerate("C3", 3, vec![perm(&[2, 3, 1])], 10).unwrap();
        let subs = elementary_2_quotient_subgroups(&c3).unwrap();
        assert_eq!(subs.len(), 1);
        assert_eq!(subs[0].order(), 3);
    }

    #[test]
    fn subgroup_fusion() {
        let g = s3();
        let full: Vec<usize> = (0..6).collect();
        let h = subgroup_classes(&g, &full).unwrap();
        assert_eq!(h.fusion, vec![0, 1, 2]);

        let t = g.index_of(&perm(&[2, 1, 3])).unwrap();
        let h = subgroup_classes(&g, &[0, t]).unwrap();
        assert_eq!(h.classes.len(), 2);
        assert_eq!(h.fusion, vec![0, g.class_of(t)]);
        assert!(!h.normal);

        let r = g.index_of(&perm(&[2, 3, 1])).unwrap();
        assert!(matches!(
            subgroup_classes(&g, &[0, r]),
            Err(Error::NotASubgroup(_))
        ));
    }

    #[test]
    fn abelian_invariant_factors() {
        let c2xc4 = GroupData::enumerate(
            "C2xC4",
            6,
            vec![perm(&[2, 1, 3, 4, 5, 6]), perm(&[1, 2, 4, 5, 6, 3])],
            100,
        )
        .unwrap();
        assert_eq!(c2xc4.abelianization(), vec![2, 4]);
        let c6 = GroupData::enumerate("C6", 5, vec![perm(&[2, 1, 4, 5, 3])], 100).unwrap();
        assert_eq!(c6.abelianization(), vec![6]);
        assert_eq!(c2xc2().abelianization(), vec![2, 2]);
    }
}
