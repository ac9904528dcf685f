//! Decision procedures for the four twist relations between semisimple
//! representations of a finite group.
//!
//! Representations are given by multiplicity vectors over the irreducible
//! characters. Over a field of characteristic zero a semisimple representation
//! is determined up to isomorphism by its character, so each relation is
//! decided exactly at the level of characters:
//!
//! * quadratic: `chi * char(a) = char(b)` for a quadratic character `chi`;
//! * polyquadratic: constituent-wise quadratic twisting, decided by balancing
//!   multiplicities over the orbits of irreducibles under quadratic twisting;
//! * locally quadratic: `det(1 - a(s)T) = det(1 - eps_s b(s)T)` at every class;
//! * locally polyquadratic: `det(1 - a(s^2)T) = det(1 - b(s^2)T)` at every class.
//!
//! Every positive verdict carries a witness that [`verify_witness`] can
//! re-check by direct substitution.

use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};

use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chartab::{
    charpoly_at_class, det_character, inner_product, quadratic_character_indices, CharPoly,
    CharacterTable, ClassFunction,
};
use crate::cyclo::Cyclotomic;
use crate::error::{Error, Result};
use crate::groups::{elementary_2_quotient_subgroups, GroupData, SubgroupData};

/// A character table together with the quadratic-twist structure of its irreducibles.
#[derive(Debug)]
pub struct TwistContext {
    table: CharacterTable,
    quadratic: Vec<usize>,
    /// `twist[q][i]`: index of `quadratic[q] * chi_i`.
    twist: Vec<Vec<usize>>,
    orbit_of: Vec<usize>,
    orbits: Vec<Vec<usize>>,
    subgroups: OnceLock<Vec<SubgroupData>>,
}

impl TwistContext {
    pub fn new(table: CharacterTable) -> Result<Arc<Self>> {
        let quadratic = quadratic_character_indices(&table);
        let mut twist = Vec::with_capacity(quadratic.len());
        for &q in &quadratic {
            let chi = table.irreducible(q);
            let row = table
                .irreducibles()
                .iter()
                .map(|psi| {
                    let product = chi.tensor(psi)?;
                    table.lookup(&product).ok_or_else(|| {
                        Error::TableInconsistent("twist of an irreducible is not irreducible".into())
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            twist.push(row);
        }
        let mut orbit_of = vec![usize::MAX; table.len()];
        let mut orbits = Vec::new();
        for i in 0..table.len() {
            if orbit_of[i] != usize::MAX {
                continue;
            }
            let members: BTreeSet<usize> = twist.iter().map(|row| row[i]).collect();
            for &m in &members {
                orbit_of[m] = orbits.len();
            }
            orbits.push(members.into_iter().collect());
        }
        Ok(Arc::new(Self {
            table,
            quadratic,
            twist,
            orbit_of,
            orbits,
            subgroups: OnceLock::new(),
        }))
    }

    pub fn table(&self) -> &CharacterTable {
        &self.table
    }

    pub fn group(&self) -> &Arc<GroupData> {
        self.table.group()
    }

    /// Indices (into the table) of the quadratic characters, trivial first.
    pub fn quadratic_characters(&self) -> &[usize] {
        &self.quadratic
    }

    /// Index into [`Self::orbits`] of the orbit containing irreducible `i`.
    pub fn orbit_of(&self, i: usize) -> usize {
        self.orbit_of[i]
    }

    /// Orbits of irreducibles under twisting by quadratic characters.
    pub fn orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    /// Twists a multiplicity vector by the quadratic character with table index `q`.
    pub fn twist_mults(&self, mults: &[u32], q: usize) -> Vec<u32> {
        let row = &self.twist[self.quadratic_position(q)];
        let mut out = vec![0; mults.len()];
        for (i, &m) in mults.iter().enumerate() {
            out[row[i]] += m;
        }
        out
    }

    fn quadratic_position(&self, q: usize) -> usize {
        self.quadratic
            .iter()
            .position(|&x| x == q)
            .expect("not a quadratic character")
    }

    /// Normal subgroups with elementary abelian 2-group quotient (cached).
    pub fn elementary_2_subgroups(&self) -> Result<&[SubgroupData]> {
        if let Some(s) = self.subgroups.get() {
            return Ok(s);
        }
        let subs = elementary_2_quotient_subgroups(self.group())?;
        Ok(self.subgroups.get_or_init(|| subs))
    }

    /// Every multiplicity vector of total degree `r`, in lexicographic order.
    pub fn representations_of_degree(self: &Arc<Self>, r: u64) -> Vec<RepSpec> {
        let degrees = self.table.degrees().to_vec();
        let mut out = Vec::new();
        let mut current = vec![0u32; degrees.len()];
        fn rec(i: usize, left: u64, degrees: &[u64], cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if i == degrees.len() {
                if left == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            let max = left / degrees[i];
            for m in 0..=max {
                cur[i] = m as u32;
                rec(i + 1, left - m * degrees[i], degrees, cur, out);
            }
            cur[i] = 0;
        }
        let mut vecs = Vec::new();
        rec(0, r, &degrees, &mut current, &mut vecs);
        vecs.sort();
        for v in vecs {
            out.push(RepSpec::new(self, v).expect("valid multiplicities"));
        }
        out
    }
}

/// A semisimple representation, up to isomorphism, by its multiplicities.
#[derive(Clone, Debug)]
pub struct RepSpec {
    ctx: Arc<TwistContext>,
    mults: Vec<u32>,
    character: ClassFunction,
    degree: u64,
}

impl RepSpec {
    pub fn new(ctx: &Arc<TwistContext>, mults: Vec<u32>) -> Result<Self> {
        let table = ctx.table();
        if mults.len() != table.len() {
            return Err(Error::InvalidRepSpec(format!(
                "{} multiplicities for {} irreducibles",
                mults.len(),
                table.len()
            )));
        }
        let character = table.combine(&mults)?;
        let degree = mults
            .iter()
            .zip(table.degrees())
            .map(|(&m, &d)| m as u64 * d)
            .sum();
        Ok(Self {
            ctx: Arc::clone(ctx),
            mults,
            character,
            degree,
        })
    }

    pub fn irreducible(ctx: &Arc<TwistContext>, i: usize) -> Result<Self> {
        let mut mults = vec![0; ctx.table().len()];
        *mults.get_mut(i).ok_or_else(|| Error::InvalidRepSpec(format!("no irreducible {i}")))? = 1;
        Self::new(ctx, mults)
    }

    /// Sum of irreducibles, listed with repetition.
    pub fn sum_of(ctx: &Arc<TwistContext>, constituents: &[usize]) -> Result<Self> {
        let mut mults = vec![0; ctx.table().len()];
        for &i in constituents {
            *mults
                .get_mut(i)
                .ok_or_else(|| Error::InvalidRepSpec(format!("no irreducible {i}")))? += 1;
        }
        Self::new(ctx, mults)
    }

    /// Representation with the given character; fails for virtual class functions.
    pub fn from_character(ctx: &Arc<TwistContext>, f: &ClassFunction) -> Result<Self> {
        let d = crate::chartab::decompose(f, ctx.table())?;
        let counts = d.counts().ok_or(Error::VirtualCharacter)?;
        Self::new(ctx, counts)
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Self::new(
            &self.ctx,
            self.mults.iter().zip(&other.mults).map(|(a, b)| a + b).collect(),
        )
    }

    /// Twist by the quadratic character with table index `q`.
    pub fn twist(&self, q: usize) -> Result<Self> {
        if !self.ctx.quadratic.contains(&q) {
            return Err(Error::InvalidRepSpec(format!("{q} is not a quadratic character")));
        }
        Self::new(&self.ctx, self.ctx.twist_mults(&self.mults, q))
    }

    /// Tensor product with another representation.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Self::from_character(&self.ctx, &self.character.tensor(&other.character)?)
    }

    pub fn context(&self) -> &Arc<TwistContext> {
        &self.ctx
    }

    pub fn mults(&self) -> &[u32] {
        &self.mults
    }

    pub fn character(&self) -> &ClassFunction {
        &self.character
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx.group().same_as(other.ctx.group()) {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    pub fn to_json(&self) -> RepSpecJson {
        RepSpecJson {
            group: self.ctx.group().name().to_string(),
            mults: self.mults.clone(),
        }
    }

    pub fn from_json(ctx: &Arc<TwistContext>, json: &RepSpecJson) -> Result<Self> {
        if json.group != ctx.group().name() {
            return Err(Error::InvalidRepSpec(format!(
                "spec is for group {}, table is for {}",
                json.group,
                ctx.group().name()
            )));
        }
        Self::new(ctx, json.mults.clone())
    }
}

impl PartialEq for RepSpec {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.group().same_as(other.ctx.group()) && self.mults == other.mults
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepSpecJson {
    pub group: String,
    pub mults: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Quadratic,
    Polyquadratic,
    LocallyQuadratic,
    LocallyPolyquadratic,
}

/// One block of a polyquadratic matching: `count` copies of irreducible `from`
/// in the first representation correspond to `twist * from = to` in the second.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchBlock {
    pub from: usize,
    pub to: usize,
    pub twist: usize,
    pub count: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Table index of the quadratic character.
    QuadraticCharacter { character: usize },
    /// Constituent matching, plus the subgroup cut out by the twisting characters
    /// (element indices) on which both restrictions agree.
    Matching {
        blocks: Vec<MatchBlock>,
        subgroup: Vec<usize>,
    },
    /// Sign `eps_s` at every class.
    Signs { signs: Vec<i8> },
    /// Normal subgroup with elementary abelian 2-group quotient on which the restrictions agree.
    Subgroup { members: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Refutation {
    DegreeMismatch { left: u64, right: u64 },
    /// The relation fails at this class.
    Class { class: usize },
    /// For each quadratic character, a class where `chi * a` and `b` differ.
    NoQuadraticCharacter { failures: Vec<(usize, usize)> },
    /// Quadratic-twist orbit whose multiplicities do not balance.
    OrbitImbalance { orbit: Vec<usize>, left: u32, right: u32 },
    /// No candidate subgroup carries equal restrictions.
    NoSubgroup { candidates: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistVerdict {
    pub relation: Relation,
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refutation: Option<Refutation>,
}

impl TwistVerdict {
    fn yes(relation: Relation, witness: Option<Witness>) -> Self {
        Self {
            relation,
            holds: true,
            witness,
            refutation: None,
        }
    }

    fn no(relation: Relation, refutation: Refutation) -> Self {
        Self {
            relation,
            holds: false,
            witness: None,
            refutation: Some(refutation),
        }
    }
}

fn prepare(a: &RepSpec, b: &RepSpec) -> Result<Option<Refutation>> {
    a.check_same(b)?;
    if a.degree != b.degree {
        return Ok(Some(Refutation::DegreeMismatch {
            left: a.degree,
            right: b.degree,
        }));
    }
    Ok(None)
}

/// `b = chi (x) a` for some quadratic character `chi`.
pub fn is_quadratic_twist(a: &RepSpec, b: &RepSpec) -> Result<TwistVerdict> {
    if let Some(r) = prepare(a, b)? {
        return Ok(TwistVerdict::no(Relation::Quadratic, r));
    }
    let ctx = &a.ctx;
    let mut failures = Vec::new();
    for &q in &ctx.quadratic {
        let chi = ctx.table.irreducible(q);
        let twisted = chi.tensor(&a.character)?;
        match twisted.first_difference(&b.character) {
            None => {
                return Ok(TwistVerdict::yes(
                    Relation::Quadratic,
                    Some(Witness::QuadraticCharacter { character: q }),
                ))
            }
            Some(c) => failures.push((q, c)),
        }
    }
    Ok(TwistVerdict::no(
        Relation::Quadratic,
        Refutation::NoQuadraticCharacter { failures },
    ))
}

/// Elements in the intersection of the kernels of the given linear characters.
fn common_kernel(ctx: &TwistContext, characters: &BTreeSet<usize>) -> Vec<usize> {
    let g = ctx.group();
    let one = Cyclotomic::one(1);
    (0..g.order())
        .filter(|&x| {
            let c = g.class_of(x);
            characters
                .iter()
                .all(|&q| *ctx.table.irreducible(q).value(c) == one)
        })
        .collect()
}

fn restrictions_agree(a: &RepSpec, b: &RepSpec, members: &[usize]) -> bool {
    let g = a.ctx.group();
    let classes: BTreeSet<usize> = members.iter().map(|&x| g.class_of(x)).collect();
    classes
        .into_iter()
        .all(|c| a.character.value(c) == b.character.value(c))
}

/// Constituent-wise quadratic twisting, decided by orbit-multiplicity balance.
pub fn is_polyquadratic_twist(a: &RepSpec, b: &RepSpec) -> Result<TwistVerdict> {
    if let Some(r) = prepare(a, b)? {
        return Ok(TwistVerdict::no(Relation::Polyquadratic, r));
    }
    let ctx = &a.ctx;
    for orbit in &ctx.orbits {
        let left: u32 = orbit.iter().map(|&i| a.mults[i]).sum();
        let right: u32 = orbit.iter().map(|&i| b.mults[i]).sum();
        if left != right {
            return Ok(TwistVerdict::no(
                Relation::Polyquadratic,
                Refutation::OrbitImbalance {
                    orbit: orbit.clone(),
                    left,
                    right,
                },
            ));
        }
    }

    // Greedy matching within each orbit, lowest indices first.
    let mut blocks = Vec::new();
    for orbit in &ctx.orbits {
        let mut left: Vec<(usize, u32)> = orbit
            .iter()
            .filter(|&&i| a.mults[i] > 0)
            .map(|&i| (i, a.mults[i]))
            .collect();
        let mut right: Vec<(usize, u32)> = orbit
            .iter()
            .filter(|&&j| b.mults[j] > 0)
            .map(|&j| (j, b.mults[j]))
            .collect();
        let (mut li, mut ri) = (0, 0);
        while li < left.len() && ri < right.len() {
            let count = left[li].1.min(right[ri].1);
            let (from, to) = (left[li].0, right[ri].0);
            let pos = ctx
                .twist
                .iter()
                .position(|row| row[from] == to)
                .expect("orbit members are related by a quadratic twist");
            blocks.push(MatchBlock {
                from,
                to,
                twist: ctx.quadratic[pos],
                count,
            });
            left[li].1 -= count;
            right[ri].1 -= count;
            if left[li].1 == 0 {
                li += 1;
            }
            if right[ri].1 == 0 {
                ri += 1;
            }
        }
    }

    let used: BTreeSet<usize> = blocks.iter().map(|m| m.twist).collect();
    let subgroup = common_kernel(ctx, &used);
    if !restrictions_agree(a, b, &subgroup) {
        return Err(Error::OracleDisagreement(
            "polyquadratic matching found but restrictions to the common kernel differ".into(),
        ));
    }
    Ok(TwistVerdict::yes(
        Relation::Polyquadratic,
        Some(Witness::Matching { blocks, subgroup }),
    ))
}

/// Independent oracle: equal restrictions to some normal subgroup whose quotient
/// is an elementary abelian 2-group. Exponential in the rank of that quotient.
pub fn polyquadratic_subgroup_oracle(a: &RepSpec, b: &RepSpec) -> Result<TwistVerdict> {
    if let Some(r) = prepare(a, b)? {
        return Ok(TwistVerdict::no(Relation::Polyquadratic, r));
    }
    let candidates = a.ctx.elementary_2_subgroups()?;
    let mut best: Option<&SubgroupData> = None;
    for h in candidates {
        if restrictions_agree(a, b, &h.members) && best.is_none_or(|b| h.order() > b.order()) {
            best = Some(h);
        }
    }
    Ok(match best {
        Some(h) => TwistVerdict::yes(
            Relation::Polyquadratic,
            Some(Witness::Subgroup {
                members: h.members.clone(),
            }),
        ),
        None => TwistVerdict::no(
            Relation::Polyquadratic,
            Refutation::NoSubgroup {
                candidates: candidates.len(),
            },
        ),
    })
}

fn charpolys(rep: &RepSpec) -> Result<Vec<CharPoly>> {
    let r = rep.degree as usize;
    (0..rep.ctx.group().num_classes())
        .map(|c| charpoly_at_class(&rep.character, c, r))
        .collect()
}

/// Characteristic polynomials agree up to a sign at every class.
pub fn is_locally_quadratic_twist(a: &RepSpec, b: &RepSpec) -> Result<TwistVerdict> {
    if let Some(r) = prepare(a, b)? {
        return Ok(TwistVerdict::no(Relation::LocallyQuadratic, r));
    }
    let verdict = if a.degree == 0 {
        TwistVerdict::yes(
            Relation::LocallyQuadratic,
            Some(Witness::Signs {
                signs: vec![1; a.ctx.group().num_classes()],
            }),
        )
    } else {
        let pa = charpolys(a)?;
        let pb = charpolys(b)?;
        let mut signs = Vec::with_capacity(pa.len());
        let mut failure = None;
        for (c, (x, y)) in pa.iter().zip(&pb).enumerate() {
            if x == y {
                signs.push(1);
            } else if *x == y.twisted(-1) {
                signs.push(-1);
            } else {
                failure = Some(c);
                break;
            }
        }
        match failure {
            None => TwistVerdict::yes(Relation::LocallyQuadratic, Some(Witness::Signs { signs })),
            Some(class) => TwistVerdict::no(Relation::LocallyQuadratic, Refutation::Class { class }),
        }
    };
    if a.degree == 4 {
        let by_squares = a.character.sym2().same_values(&b.character.sym2())
            && a.character.alt2().same_values(&b.character.alt2());
        if by_squares != verdict.holds {
            return Err(Error::OracleDisagreement(format!(
                "locally quadratic: characteristic polynomials say {}, Sym^2/Alt^2 say {by_squares}",
                verdict.holds
            )));
        }
    }
    Ok(verdict)
}

/// Degree-4 criterion: equal symmetric squares and equal exterior squares.
pub fn locally_quadratic_by_squares(a: &RepSpec, b: &RepSpec) -> Result<bool> {
    a.check_same(b)?;
    Ok(a.character.sym2().same_values(&b.character.sym2())
        && a.character.alt2().same_values(&b.character.alt2()))
}

/// Virtual criterion: `Sym^2 - Alt^2` (the Adams square) agree.
pub fn locally_polyquadratic_by_adams(a: &RepSpec, b: &RepSpec) -> Result<bool> {
    a.check_same(b)?;
    let va = a.character.sym2().sub(&a.character.alt2())?;
    let vb = b.character.sym2().sub(&b.character.alt2())?;
    Ok(va.same_values(&vb))
}

/// Characteristic polynomials agree at every square.
pub fn is_locally_polyquadratic_twist(a: &RepSpec, b: &RepSpec) -> Result<TwistVerdict> {
    if let Some(r) = prepare(a, b)? {
        return Ok(TwistVerdict::no(Relation::LocallyPolyquadratic, r));
    }
    let g = a.ctx.group();
    let squares = g.power_map(2);
    let mut failure = None;
    if a.degree > 0 {
        let pa = charpolys(a)?;
        let pb = charpolys(b)?;
        failure = (0..g.num_classes()).find(|&c| pa[squares[c]] != pb[squares[c]]);
    }
    let adams = a.character.adams2().same_values(&b.character.adams2());
    if adams != failure.is_none() {
        return Err(Error::OracleDisagreement(format!(
            "locally polyquadratic: characteristic polynomials say {}, Adams squares say {adams}",
            failure.is_none()
        )));
    }
    Ok(match failure {
        None => TwistVerdict::yes(Relation::LocallyPolyquadratic, None),
        Some(class) => TwistVerdict::no(Relation::LocallyPolyquadratic, Refutation::Class { class }),
    })
}

pub fn decide(relation: Relation, a: &RepSpec, b: &RepSpec) -> Result<TwistVerdict> {
    match relation {
        Relation::Quadratic => is_quadratic_twist(a, b),
        Relation::Polyquadratic => {
            let v = is_polyquadratic_twist(a, b)?;
            let oracle = polyquadratic_subgroup_oracle(a, b)?;
            if v.holds != oracle.holds {
                return Err(Error::OracleDisagreement(format!(
                    "polyquadratic: matching says {}, subgroup oracle says {}",
                    v.holds, oracle.holds
                )));
            }
            Ok(v)
        }
        Relation::LocallyQuadratic => is_locally_quadratic_twist(a, b),
        Relation::LocallyPolyquadratic => is_locally_polyquadratic_twist(a, b),
    }
}

/// Ratio of determinant characters `det(b) / det(a)` for degree-2 locally
/// polyquadratic twists; every value must be a sign.
pub fn epsilon_character(a: &RepSpec, b: &RepSpec) -> Result<ClassFunction> {
    if a.degree != 2 || b.degree != 2 {
        return Err(Error::InvalidRepSpec("epsilon character needs degree 2".into()));
    }
    if !is_locally_polyquadratic_twist(a, b)?.holds {
        return Err(Error::HypothesisViolated(
            "representations are not locally polyquadratic twists".into(),
        ));
    }
    let da = det_character(&a.character)?;
    let db = det_character(&b.character)?;
    let one = Cyclotomic::one(1);
    let minus_one = Cyclotomic::from_int(1, -1);
    let mut values = Vec::with_capacity(da.values().len());
    for (x, y) in da.values().iter().zip(db.values()) {
        let v = y.checked_div(x)?;
        if v != one && v != minus_one {
            return Err(Error::HypothesisViolated(format!(
                "det ratio takes the non-sign value {v}"
            )));
        }
        values.push(v);
    }
    ClassFunction::new(Arc::clone(a.ctx.group()), values, true)
}

/// Substitutes a verdict's witness back into the defining identity.
pub fn verify_witness(verdict: &TwistVerdict, a: &RepSpec, b: &RepSpec) -> Result<bool> {
    a.check_same(b)?;
    let ctx = &a.ctx;
    if !verdict.holds {
        return Ok(verdict.witness.is_none());
    }
    Ok(match (&verdict.relation, &verdict.witness) {
        (Relation::Quadratic, Some(Witness::QuadraticCharacter { character })) => {
            ctx.quadratic.contains(character)
                && ctx
                    .table
                    .irreducible(*character)
                    .tensor(&a.character)?
                    .same_values(&b.character)
        }
        (Relation::Polyquadratic, Some(Witness::Matching { blocks, subgroup })) => {
            let mut left = vec![0u32; a.mults.len()];
            let mut right = vec![0u32; b.mults.len()];
            for m in blocks {
                if !ctx.quadratic.contains(&m.twist) {
                    return Ok(false);
                }
                let twisted = ctx.table.irreducible(m.twist).tensor(ctx.table.irreducible(m.from))?;
                if !twisted.same_values(ctx.table.irreducible(m.to)) {
                    return Ok(false);
                }
                left[m.from] += m.count;
                right[m.to] += m.count;
            }
            let twists: BTreeSet<usize> = blocks.iter().map(|m| m.twist).collect();
            left == a.mults
                && right == b.mults
                && *subgroup == common_kernel(ctx, &twists)
                && restrictions_agree(a, b, subgroup)
        }
        (Relation::Polyquadratic, Some(Witness::Subgroup { members })) => {
            let g = ctx.group();
            let h = crate::groups::subgroup_classes(g, members)?;
            let contains_squares = (0..g.order()).all(|x| h.members.binary_search(&g.mul(x, x)).is_ok());
            h.normal && contains_squares && restrictions_agree(a, b, members)
        }
        (Relation::LocallyQuadratic, Some(Witness::Signs { signs })) => {
            if a.degree == 0 {
                return Ok(true);
            }
            let pa = charpolys(a)?;
            let pb = charpolys(b)?;
            signs.len() == pa.len()
                && pa
                    .iter()
                    .zip(&pb)
                    .zip(signs)
                    .all(|((x, y), &s)| *x == y.twisted(s))
        }
        (Relation::LocallyPolyquadratic, None) => {
            let g = ctx.group();
            let sq = g.power_map(2);
            (0..g.num_classes()).all(|c| a.character.value(sq[c]) == b.character.value(sq[c]))
        }
        _ => false,
    })
}

/// Which "locally X but not X" predicate a search looks for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    /// Locally quadratic twists that are not quadratic twists.
    LqNotQ,
    /// Locally polyquadratic twists that are not polyquadratic twists.
    LpqNotPq,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    pub mode: SearchMode,
    pub degree: u64,
    pub pairs: Vec<(Vec<u32>, Vec<u32>)>,
    pub examined: usize,
    pub truncated: bool,
}

/// Canonical representative of an unordered pair under simultaneous quadratic twisting.
pub fn canonical_pair(ctx: &TwistContext, a: &[u32], b: &[u32]) -> (Vec<u32>, Vec<u32>) {
    ctx.quadratic
        .iter()
        .map(|&q| {
            let x = ctx.twist_mults(a, q);
            let y = ctx.twist_mults(b, q);
            if x <= y {
                (x, y)
            } else {
                (y, x)
            }
        })
        .min()
        .expect("trivial character is always quadratic")
}

/// Exhaustive search for pairs of degree-`r` representations satisfying the
/// local relation but not the global one. Pairs are unordered; in the quadratic
/// mode only the canonical representative of each simultaneous-twist class is kept.
pub fn search_counterexamples(
    ctx: &Arc<TwistContext>,
    degree: u64,
    mode: SearchMode,
    budget: usize,
) -> Result<SearchResult> {
    let reps = ctx.representations_of_degree(degree);
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut truncated = false;
    'outer: for i in 0..reps.len() {
        for j in i + 1..reps.len() {
            if pairs.len() >= budget {
                truncated = true;
                break 'outer;
            }
            pairs.push((i, j));
        }
    }
    let examined = pairs.len();
    let found: Vec<Option<(Vec<u32>, Vec<u32>)>> = pairs
        .par_iter()
        .map(|&(i, j)| -> Result<Option<(Vec<u32>, Vec<u32>)>> {
            let (a, b) = (&reps[i], &reps[j]);
            let hit = match mode {
                SearchMode::LqNotQ => {
                    if canonical_pair(ctx, &a.mults, &b.mults) != (a.mults.clone(), b.mults.clone()) {
                        return Ok(None);
                    }
                    is_locally_quadratic_twist(a, b)?.holds && !is_quadratic_twist(a, b)?.holds
                }
                SearchMode::LpqNotPq => {
                    is_locally_polyquadratic_twist(a, b)?.holds
                        && !is_polyquadratic_twist(a, b)?.holds
                }
            };
            Ok(hit.then(|| (a.mults.clone(), b.mults.clone())))
        })
        .collect::<Result<_>>()?;
    let mut pairs: Vec<(Vec<u32>, Vec<u32>)> = found.into_iter().flatten().collect();
    pairs.sort();
    Ok(SearchResult {
        mode,
        degree,
        pairs,
        examined,
        truncated,
    })
}

/// `<1, ad0(b)>` and `1 + <eps, ad0(a)>`, whose equality underlies the degree-2
/// argument for locally polyquadratic twists with nontrivial `eps`.
pub fn adjoint_multiplicity_identity(a: &RepSpec, b: &RepSpec) -> Result<(BigRational, BigRational)> {
    let eps = epsilon_character(a, b)?;
    let trivial = ClassFunction::trivial(a.ctx.group());
    let lhs = inner_product(&trivial, &b.character.adjoint0())?;
    let rhs = BigRational::from_integer(1.into()) + inner_product(&eps, &a.character.adjoint0())?;
    Ok((lhs, rhs))
}

/// On the dicyclic group of order 12, with `eps` the rational nontrivial linear
/// character, `theta` the orthogonal rational degree-2 irreducible and `chi` the
/// lowest-index linear character of order 4, returns the degree-4 pair
/// `(1 + eps + chi theta, chi + eps chi + theta)`.
pub fn dic3_locally_quadratic_pair(ctx: &Arc<TwistContext>) -> Result<(RepSpec, RepSpec)> {
    let table = ctx.table();
    let named = crate::catalog::dic3_characters(table)?;
    let chi = (0..table.len())
        .find(|&i| {
            table.degrees()[i] == 1
                && table.irreducible(i).values().iter().any(|v| v.as_rational().is_none())
        })
        .ok_or_else(|| Error::TableInconsistent("no linear character of order 4".into()))?;
    let one = RepSpec::irreducible(ctx, 0)?;
    let eps = RepSpec::irreducible(ctx, named.epsilon)?;
    let chi = RepSpec::irreducible(ctx, chi)?;
    let theta = RepSpec::irreducible(ctx, named.theta)?;
    let a = one.direct_sum(&eps)?.direct_sum(&chi.tensor(&theta)?)?;
    let b = chi.direct_sum(&eps.tensor(&chi)?)?.direct_sum(&theta)?;
    Ok((a, b))
}

/// Unordered pairs of distinct faithful degree-3 irreducibles with values in `Q(i)`.
pub fn faithful_cubic_pairs(ctx: &Arc<TwistContext>) -> Result<Vec<(RepSpec, RepSpec)>> {
    let cubics = crate::catalog::faithful_gaussian_cubics(ctx.table())?;
    let mut out = Vec::new();
    for (n, &i) in cubics.iter().enumerate() {
        for &j in &cubics[n + 1..] {
            out.push((RepSpec::irreducible(ctx, i)?, RepSpec::irreducible(ctx, j)?));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::chartab::character_table;

    fn ctx(name: &str) -> Arc<TwistContext> {
        let g = catalog::realize(&catalog::builtin(name).unwrap(), 1000).unwrap();
        TwistContext::new(character_table(&g).unwrap()).unwrap()
    }

    /// Index of the C4 character sending the generator class to `i`.
    fn c4_chars(ctx: &Arc<TwistContext>) -> (usize, usize, usize) {
        let g = ctx.group();
        let gen = g.index_of(&g.generators()[0]).unwrap();
        let c = g.class_of(gen);
        let i = Cyclotomic::root_of_unity(4, 1).unwrap();
        let t = ctx.table();
        let find = |v: &Cyclotomic| (0..t.len()).find(|&k| t.irreducible(k).value(c) == v).unwrap();
        (find(&i), find(&-&i), find(&Cyclotomic::from_int(1, -1)))
    }

    #[test]
    fn identical_pairs_are_in_every_relation() {
        let ctx = ctx("s3");
        for rep in ctx.representations_of_degree(3) {
            for rel in [
                Relation::Quadratic,
                Relation::Polyquadratic,
                Relation::LocallyQuadratic,
                Relation::LocallyPolyquadratic,
            ] {
                let v = decide(rel, &rep, &rep).unwrap();
                assert!(v.holds, "{rel:?}");
                assert!(verify_witness(&v, &rep, &rep).unwrap());
            }
            let q = is_quadratic_twist(&rep, &rep).unwrap();
            assert_eq!(q.witness, Some(Witness::QuadraticCharacter { character: 0 }));
            let o = polyquadratic_subgroup_oracle(&rep, &rep).unwrap();
            match o.witness {
                Some(Witness::Subgroup { members }) => assert_eq!(members.len(), 6),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn c4_order_four_character_twists_to_its_conjugate() {
        let ctx = ctx("c4");
        let (chi4, chi4_3, eps) = c4_chars(&ctx);
        let a = RepSpec::irreducible(&ctx, chi4).unwrap();
        let b = RepSpec::irreducible(&ctx, chi4_3).unwrap();
        let v = is_quadratic_twist(&a, &b).unwrap();
        assert!(v.holds);
        assert_eq!(v.witness, Some(Witness::QuadraticCharacter { character: eps }));

        let a2 = RepSpec::sum_of(&ctx, &[chi4, chi4]).unwrap();
        let b2 = RepSpec::sum_of(&ctx, &[chi4_3, chi4_3]).unwrap();
        let v = is_polyquadratic_twist(&a2, &b2).unwrap();
        assert!(v.holds);
        match &v.witness {
            Some(Witness::Matching { blocks, subgroup }) => {
                assert_eq!(blocks.len(), 1);
                assert_eq!(blocks[0].twist, eps);
                assert_eq!(blocks[0].count, 2);
                assert_eq!(subgroup.len(), 2);
            }
            other => panic!("{other:?}"),
        }
        assert!(verify_witness(&v, &a2, &b2).unwrap());
    }

    #[test]
    fn degree_mismatch_and_degree_zero() {
        let ctx = ctx("c4");
        let a = RepSpec::sum_of(&ctx, &[0]).unwrap();
        let b = RepSpec::sum_of(&ctx, &[0, 1]).unwrap();
        for rel in [Relation::Quadratic, Relation::LocallyPolyquadratic] {
            let v = decide(rel, &a, &b).unwrap();
            assert!(!v.holds);
            assert_eq!(v.refutation, Some(Refutation::DegreeMismatch { left: 1, right: 2 }));
        }
        let empty = RepSpec::sum_of(&ctx, &[]).unwrap();
        for rel in [
            Relation::Quadratic,
            Relation::Polyquadratic,
            Relation::LocallyQuadratic,
            Relation::LocallyPolyquadratic,
        ] {
            assert!(decide(rel, &empty, &empty).unwrap().holds);
        }
    }

    #[test]
    fn trivial_and_sign_are_locally_quadratic() {
        let ctx = ctx("s3");
        let a = RepSpec::irreducible(&ctx, 0).unwrap();
        let b = RepSpec::irreducible(&ctx, 1).unwrap();
        let v = is_locally_quadratic_twist(&a, &b).unwrap();
        assert!(v.holds);
        let sign = ctx.table().irreducible(1);
        let expected: Vec<i8> = sign
            .values()
            .iter()
            .map(|v| if v.is_one() { 1 } else { -1 })
            .collect();
        assert_eq!(v.witness, Some(Witness::Signs { signs: expected }));
        assert!(verify_witness(&v, &a, &b).unwrap());
    }

    #[test]
    fn epsilon_examples() {
        let ctx = ctx("c2xc2");
        let quad = ctx.quadratic_characters().to_vec();
        assert_eq!(quad.len(), 4);
        let f = RepSpec::sum_of(&ctx, &[quad[1], quad[2]]).unwrap();
        let eps = epsilon_character(&f, &f).unwrap();
        assert!(eps.same_values(&ClassFunction::trivial(ctx.group())));
        // (chi1 + chi2, phi chi1 + chi2) -> phi
        let phi = quad[3];
        let g = f.context();
        let twisted1 = ctx.twist_mults(&RepSpec::irreducible(g, quad[1]).unwrap().mults, phi);
        let idx = twisted1.iter().position(|&m| m == 1).unwrap();
        let b = RepSpec::sum_of(&ctx, &[idx, quad[2]]).unwrap();
        let eps = epsilon_character(&f, &b).unwrap();
        assert!(eps.same_values(ctx.table().irreducible(phi)));
        // (f, chi f) for a degree-2 f and quadratic chi gives the trivial character
        let dic = self::ctx("dic3");
        let theta = RepSpec::irreducible(&dic, 5).unwrap();
        let q = dic.quadratic_characters()[1];
        let eps = epsilon_character(&theta, &theta.twist(q).unwrap()).unwrap();
        assert!(eps.same_values(&ClassFunction::trivial(dic.group())));
    }

    #[test]
    fn search_finds_nothing_in_degree_two_of_c4() {
        let ctx = ctx("c4");
        for mode in [SearchMode::LqNotQ, SearchMode::LpqNotPq] {
            let res = search_counterexamples(&ctx, 2, mode, 1_000_000).unwrap();
            assert!(res.pairs.is_empty());
            assert!(!res.truncated);
        }
        let res = search_counterexamples(&ctx, 2, SearchMode::LpqNotPq, 3).unwrap();
        assert!(res.truncated);
        assert_eq!(res.examined, 3);
    }

    #[test]
    fn verdict_json_roundtrip() {
        let ctx = ctx("c4");
        let (chi4, chi4_3, _) = c4_chars(&ctx);
        let a = RepSpec::sum_of(&ctx, &[chi4, 0]).unwrap();
        let b = RepSpec::sum_of(&ctx, &[chi4_3, 0]).unwrap();
        for rel in [
            Relation::Quadratic,
            Relation::Polyquadratic,
            Relation::LocallyQuadratic,
            Relation::LocallyPolyquadratic,
        ] {
            let v = decide(rel, &a, &b).unwrap();
            let s = serde_json::to_string(&v).unwrap();
            let back: TwistVerdict = serde_json::from_str(&s).unwrap();
            assert_eq!(back, v);
        }
        let spec = a.to_json();
        assert_eq!(RepSpec::from_json(&ctx, &spec).unwrap(), a);
    }

    #[test]
    fn mismatched_groups_error() {
        let a = RepSpec::irreducible(&ctx("c4"), 0).unwrap();
        let b = RepSpec::irreducible(&ctx("s3"), 0).unwrap();
        assert!(matches!(is_quadratic_twist(&a, &b), Err(Error::GroupMismatch)));
    }
}
