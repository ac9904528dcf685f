//! Character tables and the algebra of class functions.
//!
//! Tables are computed with Dixon's modular method: the class-sum matrices
//! are simultaneously diagonalized over `F_p` for a prime `p = 1 mod exponent`
//! with `p > 2 sqrt(|G|)`, and each modular character is lifted to exact
//! cyclotomic values through the eigenvalue multiplicities at every class.
//! The lifted table is then checked for exact row and column orthogonality
//! before it is returned.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclo::Cyclotomic;
use crate::error::{Error, Result};
use crate::groups::{GroupData, Permutation, SubgroupData};

pub const DEFAULT_MAX_CHARPOLY_DEGREE: usize = 8;

static MAX_CHARPOLY_DEGREE: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_CHARPOLY_DEGREE);

pub fn set_max_charpoly_degree(bound: usize) {
    MAX_CHARPOLY_DEGREE.store(bound, Ordering::Relaxed);
}

pub fn max_charpoly_degree() -> usize {
    MAX_CHARPOLY_DEGREE.load(Ordering::Relaxed)
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// A class function on a finite group, one exact value per conjugacy class.
///
/// `character` records whether the function is known to be the character of a
/// genuine representation; sums, tensor products and symmetric or exterior
/// squares of characters keep the flag, differences and Adams operations drop it.
#[derive(Clone, Debug)]
pub struct ClassFunction {
    group: Arc<GroupData>,
    values: Vec<Cyclotomic>,
    character: bool,
}

impl ClassFunction {
    pub fn new(group: Arc<GroupData>, values: Vec<Cyclotomic>, character: bool) -> Result<Self> {
        if values.len() != group.num_classes() {
            return Err(Error::LengthMismatch {
                expected: group.num_classes(),
                found: values.len(),
            });
        }
        let e = group.exponent();
        let values = values
            .into_iter()
            .map(|v| {
                if e % v.order() == 0 {
                    v.embed(e)
                } else {
                    Ok(v)
                }
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            group,
            values,
            character,
        })
    }

    fn from_parts(group: &Arc<GroupData>, values: Vec<Cyclotomic>, character: bool) -> Self {
        Self {
            group: Arc::clone(group),
            values,
            character,
        }
    }

    pub fn constant(group: &Arc<GroupData>, value: i64) -> Self {
        let e = group.exponent();
        Self::from_parts(
            group,
            vec![Cyclotomic::from_int(e, value); group.num_classes()],
            value >= 0,
        )
    }

    pub fn trivial(group: &Arc<GroupData>) -> Self {
        Self::constant(group, 1)
    }

    pub fn zero(group: &Arc<GroupData>) -> Self {
        Self::constant(group, 0)
    }

    /// Character of the regular representation.
    pub fn regular(group: &Arc<GroupData>) -> Self {
        let e = group.exponent();
        let mut values = vec![Cyclotomic::zero(e); group.num_classes()];
        values[0] = Cyclotomic::from_int(e, group.order() as i64);
        Self::from_parts(group, values, true)
    }

    pub fn group(&self) -> &Arc<GroupData> {
        &self.group
    }

    pub fn values(&self) -> &[Cyclotomic] {
        &self.values
    }

    pub fn value(&self, class: usize) -> &Cyclotomic {
        &self.values[class]
    }

    pub fn is_character(&self) -> bool {
        self.character
    }

    /// Marks the function as virtual (or as a genuine character when `flag` is set).
    pub fn with_character_flag(mut self, flag: bool) -> Self {
        self.character = flag;
        self
    }

    /// Value at the identity class, when it is an integer.
    pub fn degree(&self) -> Option<i64> {
        self.values[0].as_integer().and_then(|d| d.to_i64())
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.group.same_as(&other.group) {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    fn zip(&self, other: &Self, character: bool, f: impl Fn(&Cyclotomic, &Cyclotomic) -> Cyclotomic) -> Result<Self> {
        self.check_same(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| f(a, b))
            .collect();
        Ok(Self::from_parts(&self.group, values, character))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, self.character && other.character, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, false, |a, b| a - b)
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        self.zip(other, self.character && other.character, |a, b| a * b)
    }

    pub fn scale(&self, k: i64) -> Self {
        let s = rat(k);
        Self::from_parts(
            &self.group,
            self.values.iter().map(|v| v.scale(&s)).collect(),
            self.character && k >= 0,
        )
    }

    pub fn conj(&self) -> Self {
        Self::from_parts(
            &self.group,
            self.values.iter().map(Cyclotomic::conj).collect(),
            self.character,
        )
    }

    /// `s -> f(s^k)`.
    pub fn power_map(&self, k: i64) -> Self {
        let map = self.group.power_map(k);
        Self::from_parts(
            &self.group,
            map.iter().map(|&c| self.values[c].clone()).collect(),
            false,
        )
    }

    /// Adams operation `s -> f(s^2)`.
    pub fn adams2(&self) -> Self {
        self.power_map(2)
    }

    /// Symmetric square: `(f(s)^2 + f(s^2)) / 2`.
    pub fn sym2(&self) -> Self {
        let half = BigRational::new(1.into(), 2.into());
        let sq = self.group.power_map(2);
        let values = self
            .values
            .iter()
            .zip(sq)
            .map(|(v, &c)| (&(v * v) + &self.values[c]).scale(&half))
            .collect();
        Self::from_parts(&self.group, values, self.character)
    }

    /// Exterior square: `(f(s)^2 - f(s^2)) / 2`.
    pub fn alt2(&self) -> Self {
        let half = BigRational::new(1.into(), 2.into());
        let sq = self.group.power_map(2);
        let values = self
            .values
            .iter()
            .zip(sq)
            .map(|(v, &c)| (&(v * v) - &self.values[c]).scale(&half))
            .collect();
        Self::from_parts(&self.group, values, self.character)
    }

    /// Trace-zero adjoint: `f * conj(f) - 1`.
    pub fn adjoint0(&self) -> Self {
        let e = self.group.exponent();
        let one = Cyclotomic::one(e);
        let values = self
            .values
            .iter()
            .map(|v| &(v * &v.conj()) - &one)
            .collect();
        let deg_ok = self.degree().is_some_and(|d| d >= 1);
        Self::from_parts(&self.group, values, self.character && deg_ok)
    }

    /// Value-wise equality on the same group.
    pub fn same_values(&self, other: &Self) -> bool {
        self.group.same_as(&other.group) && self.values == other.values
    }

    /// First class at which two functions differ.
    pub fn first_difference(&self, other: &Self) -> Option<usize> {
        self.values
            .iter()
            .zip(&other.values)
            .position(|(a, b)| a != b)
    }
}

impl PartialEq for ClassFunction {
    fn eq(&self, other: &Self) -> bool {
        self.same_values(other)
    }
}

/// Which cyclotomic-algebra operation to apply to class functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfOp {
    Tensor,
    Sym2,
    Alt2,
    Adams2,
    Conj,
    Adjoint0,
}

/// Applies a class-function operation; unary operations ignore `g`.
pub fn cf_algebra(f: &ClassFunction, g: Option<&ClassFunction>, op: CfOp) -> Result<ClassFunction> {
    Ok(match op {
        CfOp::Tensor => {
            let g = g.ok_or_else(|| Error::InvalidRepSpec("tensor needs two operands".into()))?;
            f.tensor(g)?
        }
        CfOp::Sym2 => f.sym2(),
        CfOp::Alt2 => f.alt2(),
        CfOp::Adams2 => f.adams2(),
        CfOp::Conj => f.conj(),
        CfOp::Adjoint0 => f.adjoint0(),
    })
}

/// `(1/|G|) sum_c |c| f(c) conj(g(c))` as a cyclotomic number.
pub fn inner_product_exact(f: &ClassFunction, g: &ClassFunction) -> Result<Cyclotomic> {
    f.check_same(g)?;
    let group = &f.group;
    let mut acc = Cyclotomic::zero(group.exponent());
    for (c, class) in group.classes().iter().enumerate() {
        let term = &f.values[c] * &g.values[c].conj();
        acc = &acc + &term.scale(&rat(class.size() as i64));
    }
    Ok(acc.scale(&BigRational::new(1.into(), BigInt::from(group.order()))))
}

/// Inner product of class functions, required to be rational.
pub fn inner_product(f: &ClassFunction, g: &ClassFunction) -> Result<BigRational> {
    let v = inner_product_exact(f, g)?;
    v.as_rational()
        .ok_or_else(|| Error::NonRationalInnerProduct(v.to_string()))
}

/// Multiplicities of the irreducibles in a class function.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub multiplicities: Vec<BigRational>,
    /// Some multiplicity is negative or non-integral.
    pub is_virtual: bool,
    /// Every multiplicity is an integer.
    pub integral: bool,
}

impl Decomposition {
    /// Multiplicities as non-negative integers, when genuine.
    pub fn counts(&self) -> Option<Vec<u32>> {
        if self.is_virtual {
            return None;
        }
        self.multiplicities
            .iter()
            .map(|m| m.to_integer().to_u32())
            .collect()
    }
}

/// Frobenius-Schur indicator `(1/|G|) sum_s chi(s^2)`.
pub fn frobenius_schur_indicator(chi: &ClassFunction) -> Result<BigRational> {
    let trivial = ClassFunction::trivial(chi.group());
    inner_product(&chi.adams2(), &trivial)
}

/// det(1 - rho(s) T) as coefficients `a_0 = 1, a_1, .., a_r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharPoly {
    pub coeffs: Vec<Cyclotomic>,
}

impl CharPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients of det(1 - eps rho(s) T), i.e. `eps^k a_k`.
    pub fn twisted(&self, sign: i8) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if sign < 0 && k % 2 == 1 { -c } else { c.clone() })
                .collect(),
        }
    }
}

/// Characteristic polynomial `det(1 - rho(s)T)` at a class, from the power sums
/// `p_k = f(s^k)` through Newton's identities.
pub fn charpoly_at_class(f: &ClassFunction, class: usize, r: usize) -> Result<CharPoly> {
    if !f.is_character() {
        return Err(Error::VirtualCharacter);
    }
    if f.degree() != Some(r as i64) {
        return Err(Error::InvalidRepSpec(format!(
            "degree {r} does not match character degree {}",
            f.values[0]
        )));
    }
    let bound = max_charpoly_degree();
    if r > bound {
        return Err(Error::DegreeTooLarge { degree: r, bound });
    }
    let group = f.group();
    let e = group.exponent();
    let power_sums: Vec<Cyclotomic> = (1..=r as i64)
        .map(|k| f.values[group.power_map(k)[class]].clone())
        .collect();
    // e_k = (1/k) sum_{i=1}^k (-1)^(i-1) e_{k-i} p_i
    let mut elem = vec![Cyclotomic::one(e)];
    for k in 1..=r {
        let mut acc = Cyclotomic::zero(e);
        for i in 1..=k {
            let term = &elem[k - i] * &power_sums[i - 1];
            acc = if i % 2 == 1 { &acc + &term } else { &acc - &term };
        }
        elem.push(acc.scale(&BigRational::new(1.into(), BigInt::from(k))));
    }
    let coeffs = elem
        .into_iter()
        .enumerate()
        .map(|(k, c)| if k % 2 == 1 { -c } else { c })
        .collect();
    Ok(CharPoly { coeffs })
}

/// Determinant character: the product of eigenvalues at each class.
pub fn det_character(f: &ClassFunction) -> Result<ClassFunction> {
    let r = f
        .degree()
        .filter(|&d| d >= 0)
        .ok_or(Error::VirtualCharacter)? as usize;
    let mut values = Vec::with_capacity(f.values.len());
    for c in 0..f.values.len() {
        let poly = charpoly_at_class(f, c, r)?;
        let top = &poly.coeffs[r];
        values.push(if r % 2 == 1 { -top } else { top.clone() });
    }
    Ok(ClassFunction::from_parts(&f.group, values, true))
}

/// A class function on a subgroup, indexed by the subgroup's own classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupFunction {
    pub values: Vec<Cyclotomic>,
}

impl SubgroupFunction {
    pub fn trivial(h: &SubgroupData) -> Self {
        Self {
            values: vec![Cyclotomic::one(1); h.classes.len()],
        }
    }

    /// Regular character of the subgroup.
    pub fn regular(h: &SubgroupData) -> Self {
        let mut values = vec![Cyclotomic::zero(1); h.classes.len()];
        values[0] = Cyclotomic::from_int(1, h.order() as i64);
        Self { values }
    }

    pub fn inner_product(&self, other: &Self, h: &SubgroupData) -> Result<BigRational> {
        let mut acc = Cyclotomic::zero(1);
        for ((a, b), class) in self.values.iter().zip(&other.values).zip(&h.classes) {
            acc = &acc + &(a * &b.conj()).scale(&rat(class.len() as i64));
        }
        let v = acc.scale(&BigRational::new(1.into(), BigInt::from(h.order())));
        v.as_rational()
            .ok_or_else(|| Error::NonRationalInnerProduct(v.to_string()))
    }
}

pub fn restrict(f: &ClassFunction, h: &SubgroupData) -> SubgroupFunction {
    SubgroupFunction {
        values: h.fusion.iter().map(|&c| f.values[c].clone()).collect(),
    }
}

/// Induced class function `Ind_H^G f`; zero on classes that miss `H`.
pub fn induce(f: &SubgroupFunction, h: &SubgroupData, group: &Arc<GroupData>) -> Result<ClassFunction> {
    if f.values.len() != h.classes.len() {
        return Err(Error::LengthMismatch {
            expected: h.classes.len(),
            found: f.values.len(),
        });
    }
    let e = group.exponent();
    let mut sums = vec![Cyclotomic::zero(e); group.num_classes()];
    for ((v, class), &fused) in f.values.iter().zip(&h.classes).zip(&h.fusion) {
        sums[fused] = &sums[fused] + &v.scale(&rat(class.len() as i64));
    }
    let values = sums
        .into_iter()
        .zip(group.classes())
        .map(|(s, c)| {
            s.scale(&BigRational::new(
                BigInt::from(group.order()),
                BigInt::from(h.order() * c.size()),
            ))
        })
        .collect();
    Ok(ClassFunction::from_parts(group, values, false))
}

/// The full set of irreducible characters of a finite group.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    group: Arc<GroupData>,
    irreducibles: Vec<ClassFunction>,
    degrees: Vec<u64>,
}

impl CharacterTable {
    pub fn group(&self) -> &Arc<GroupData> {
        &self.group
    }

    pub fn irreducibles(&self) -> &[ClassFunction] {
        &self.irreducibles
    }

    pub fn irreducible(&self, i: usize) -> &ClassFunction {
        &self.irreducibles[i]
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn len(&self) -> usize {
        self.irreducibles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreducibles.is_empty()
    }

    /// Index of the irreducible with exactly these values.
    pub fn lookup(&self, f: &ClassFunction) -> Option<usize> {
        self.irreducibles.iter().position(|chi| chi.same_values(f))
    }

    /// Sum of irreducibles with the given multiplicities.
    pub fn combine(&self, mults: &[u32]) -> Result<ClassFunction> {
        if mults.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                found: mults.len(),
            });
        }
        let mut acc = ClassFunction::zero(&self.group);
        for (chi, &m) in self.irreducibles.iter().zip(mults) {
            if m > 0 {
                acc = acc.add(&chi.scale(m as i64))?;
            }
        }
        Ok(acc.with_character_flag(true))
    }

    /// Kernel of an irreducible, as a set of classes.
    pub fn kernel_classes(&self, i: usize) -> Vec<usize> {
        let chi = &self.irreducibles[i];
        (0..self.group.num_classes())
            .filter(|&c| chi.values[c] == chi.values[0])
            .collect()
    }

    pub fn is_faithful(&self, i: usize) -> bool {
        self.kernel_classes(i) == [0]
    }

    /// Exact row and column orthogonality plus the degree-sum identity.
    pub fn verify(&self) -> Result<()> {
        let g = &self.group;
        let r = g.num_classes();
        if self.irreducibles.len() != r {
            return Err(Error::TableInconsistent(format!(
                "{} irreducibles for {r} classes",
                self.irreducibles.len()
            )));
        }
        let sum_sq: u64 = self.degrees.iter().map(|d| d * d).sum();
        if sum_sq != g.order() as u64 {
            return Err(Error::TableInconsistent(format!(
                "sum of squared degrees {sum_sq} != |G| = {}",
                g.order()
            )));
        }
        for i in 0..r {
            for j in i..r {
                let ip = inner_product_exact(&self.irreducibles[i], &self.irreducibles[j])?;
                let expected = if i == j { 1 } else { 0 };
                if ip != Cyclotomic::from_int(1, expected) {
                    return Err(Error::TableInconsistent(format!(
                        "<chi_{i}, chi_{j}> = {ip}"
                    )));
                }
            }
        }
        let conj: Vec<Vec<Cyclotomic>> = self
            .irreducibles
            .iter()
            .map(|chi| chi.values.iter().map(Cyclotomic::conj).collect())
            .collect();
        for c in 0..r {
            for d in c..r {
                let mut acc = Cyclotomic::zero(g.exponent());
                for (chi, chi_bar) in self.irreducibles.iter().zip(&conj) {
                    acc = &acc + &(&chi.values[c] * &chi_bar[d]);
                }
                let expected = if c == d {
                    (g.order() / g.classes()[c].size()) as i64
                } else {
                    0
                };
                if acc != Cyclotomic::from_int(1, expected) {
                    return Err(Error::TableInconsistent(format!(
                        "column orthogonality fails at classes {c}, {d}: {acc}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> TableJson {
        let g = &self.group;
        TableJson {
            group: g.name().to_string(),
            classes: g
                .classes()
                .iter()
                .map(|c| ClassJson {
                    size: c.size(),
                    order: c.element_order,
                    representative: g.element(c.representative).clone(),
                })
                .collect(),
            irreducibles: self.irreducibles.iter().map(|chi| chi.values.clone()).collect(),
        }
    }

    /// Imports an externally computed table, matching classes by representative,
    /// and verifies it exactly.
    pub fn from_json(group: &Arc<GroupData>, json: &TableJson) -> Result<Self> {
        let r = group.num_classes();
        if json.classes.len() != r {
            return Err(Error::TableInconsistent(format!(
                "{} classes in file, {r} in group",
                json.classes.len()
            )));
        }
        let mut perm = Vec::with_capacity(r);
        for cj in &json.classes {
            let idx = group.index_of(&cj.representative).ok_or_else(|| {
                Error::TableInconsistent(format!(
                    "representative {} is not a group element",
                    cj.representative
                ))
            })?;
            let c = group.class_of(idx);
            if group.classes()[c].size() != cj.size {
                return Err(Error::TableInconsistent(format!(
                    "class of {} has size {}, file says {}",
                    cj.representative,
                    group.classes()[c].size(),
                    cj.size
                )));
            }
            perm.push(c);
        }
        let mut irreducibles = Vec::with_capacity(json.irreducibles.len());
        for row in &json.irreducibles {
            if row.len() != r {
                return Err(Error::LengthMismatch {
                    expected: r,
                    found: row.len(),
                });
            }
            let mut values = vec![Cyclotomic::zero(1); r];
            for (v, &c) in row.iter().zip(&perm) {
                values[c] = v.clone();
            }
            irreducibles.push(ClassFunction::new(Arc::clone(group), values, true)?);
        }
        let degrees = irreducibles
            .iter()
            .map(|chi| {
                chi.degree()
                    .filter(|&d| d > 0)
                    .map(|d| d as u64)
                    .ok_or_else(|| Error::TableInconsistent("non-integral degree".into()))
            })
            .collect::<Result<_>>()?;
        let table = Self {
            group: Arc::clone(group),
            irreducibles,
            degrees,
        };
        table.verify()?;
        Ok(table)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassJson {
    pub size: usize,
    pub order: u32,
    pub representative: Permutation,
}

/// File format for exported character tables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableJson {
    pub group: String,
    pub classes: Vec<ClassJson>,
    pub irreducibles: Vec<Vec<Cyclotomic>>,
}

/// Multiplicities `<f, chi_i>` and the reconstruction check.
pub fn decompose(f: &ClassFunction, table: &CharacterTable) -> Result<Decomposition> {
    let mut multiplicities = Vec::with_capacity(table.len());
    for chi in table.irreducibles() {
        multiplicities.push(inner_product(f, chi)?);
    }
    let integral = multiplicities.iter().all(|m| m.is_integer());
    let is_virtual = !integral || multiplicities.iter().any(|m| m.is_negative());
    let mut rebuilt = ClassFunction::zero(table.group());
    for (chi, m) in table.irreducibles().iter().zip(&multiplicities) {
        if m.is_zero() {
            continue;
        }
        let values = chi.values.iter().map(|v| v.scale(m)).collect();
        rebuilt = rebuilt.add(&ClassFunction::from_parts(table.group(), values, false))?;
    }
    if !rebuilt.same_values(f) {
        return Err(Error::TableInconsistent(
            "decomposition does not reconstruct the class function".into(),
        ));
    }
    Ok(Decomposition {
        multiplicities,
        is_virtual,
        integral,
    })
}

/// Degree-1 irreducibles with values in `{1, -1}`, in table order (trivial first).
pub fn quadratic_characters(table: &CharacterTable) -> Vec<ClassFunction> {
    quadratic_character_indices(table)
        .into_iter()
        .map(|i| table.irreducibles[i].clone())
        .collect()
}

pub fn quadratic_character_indices(table: &CharacterTable) -> Vec<usize> {
    let one = Cyclotomic::one(1);
    let minus_one = Cyclotomic::from_int(1, -1);
    (0..table.len())
        .filter(|&i| {
            table.degrees[i] == 1
                && table.irreducibles[i]
                    .values
                    .iter()
                    .all(|v| *v == one || *v == minus_one)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Dixon's algorithm
// ---------------------------------------------------------------------------

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Smallest prime `p = 1 mod exponent` with `p > 2 sqrt(order)`.
pub fn dixon_prime(order: usize, exponent: u32) -> u64 {
    let e = exponent as u64;
    let mut p = e + 1;
    while !(is_prime(p) && p * p > 4 * order as u64) {
        p += e;
    }
    p
}

fn primitive_root(p: u64) -> u64 {
    let factors = prime_factors(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .unwrap_or(1)
}

/// Null space of a dense matrix over `F_p` (rows x cols), as column-space basis vectors.
fn null_space(mut m: Vec<Vec<u64>>, cols: usize, p: u64) -> Vec<Vec<u64>> {
    let rows = m.len();
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(pr) = (row..rows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(row, pr);
        let inv = inv_mod(m[row][col], p);
        for v in m[row].iter_mut() {
            *v = *v * inv % p;
        }
        for r in 0..rows {
            if r != row && m[r][col] != 0 {
                let f = m[r][col];
                for c in 0..cols {
                    m[r][c] = (m[r][c] + p - f * m[row][c] % p) % p;
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u64; cols];
            v[fc] = 1;
            for (r, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = (p - m[r][fc]) % p;
            }
            v
        })
        .collect()
}

fn class_structure_constants(group: &GroupData) -> Vec<Vec<Vec<u64>>> {
    let r = group.num_classes();
    // consts[i][j][k] = #{x in C_i : x^-1 z_k in C_j}
    let mut consts = vec![vec![vec![0u64; r]; r]; r];
    for (k, ck) in group.classes().iter().enumerate() {
        let z = ck.representative;
        for (i, ci) in group.classes().iter().enumerate() {
            for &x in &ci.members {
                let y = group.mul(group.inv(x), z);
                consts[i][group.class_of(y)][k] += 1;
            }
        }
    }
    consts
}

/// Computes the character table of `group` and verifies it exactly.
pub fn character_table(group: &Arc<GroupData>) -> Result<CharacterTable> {
    let r = group.num_classes();
    let order = group.order();
    let e = group.exponent();
    let p = dixon_prime(order, e);
    let consts = class_structure_constants(group);
    let sizes: Vec<u64> = group.classes().iter().map(|c| c.size() as u64).collect();

    // Simultaneous eigenspaces of the class matrices M_i[j][k] = c_ijk.
    let identity: Vec<Vec<u64>> = (0..r)
        .map(|i| (0..r).map(|j| u64::from(i == j)).collect())
        .collect();
    let mut spaces: Vec<Vec<Vec<u64>>> = vec![identity];
    for (i, cmat) in consts.iter().enumerate().skip(1) {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let mut next = Vec::new();
        for space in spaces {
            if space.len() == 1 {
                next.push(space);
                continue;
            }
            let d = space.len();
            let images: Vec<Vec<u64>> = space
                .iter()
                .map(|b| {
                    (0..r)
                        .map(|j| (0..r).map(|k| cmat[j][k] % p * b[k] % p).sum::<u64>() % p)
                        .collect()
                })
                .collect();
            let mut found = 0;
            for lambda in 0..p {
                // Columns (M - lambda) b_l, as an r x d matrix.
                let m: Vec<Vec<u64>> = (0..r)
                    .map(|j| {
                        (0..d)
                            .map(|l| (images[l][j] + p - lambda * space[l][j] % p) % p)
                            .collect()
                    })
                    .collect();
                let ns = null_space(m, d, p);
                if ns.is_empty() {
                    continue;
                }
                found += ns.len();
                let sub: Vec<Vec<u64>> = ns
                    .iter()
                    .map(|x| {
                        (0..r)
                            .map(|j| (0..d).map(|l| x[l] * space[l][j] % p).sum::<u64>() % p)
                            .collect()
                    })
                    .collect();
                next.push(sub);
                if found == d {
                    break;
                }
            }
            if found != d {
                return Err(Error::TableInconsistent(format!(
                    "class matrix {i} is not diagonalizable over F_{p}"
                )));
            }
        }
        spaces = next;
    }
    if spaces.len() != r || spaces.iter().any(|s| s.len() != 1) {
        return Err(Error::TableInconsistent(
            "class matrices did not separate the characters".into(),
        ));
    }

    let inverse_class = group.inverse_class_map();
    let z = pow_mod(primitive_root(p), (p - 1) / e as u64, p);
    let mut irreducibles = Vec::with_capacity(r);
    let mut degrees = Vec::with_capacity(r);
    for space in spaces {
        let w0 = &space[0];
        let norm = inv_mod(w0[0], p);
        let w: Vec<u64> = w0.iter().map(|x| x * norm % p).collect();
        let s = (0..r)
            .map(|k| w[k] * w[inverse_class[k]] % p * inv_mod(sizes[k] % p, p) % p)
            .sum::<u64>()
            % p;
        let d2 = order as u64 % p * inv_mod(s, p) % p;
        let degree = (1..=order as u64)
            .take_while(|d| d * d <= order as u64)
            .find(|d| d * d % p == d2)
            .ok_or_else(|| Error::TableInconsistent("no integral degree".into()))?;
        let modular: Vec<u64> = (0..r)
            .map(|k| degree * w[k] % p * inv_mod(sizes[k] % p, p) % p)
            .collect();

        let mut values = Vec::with_capacity(r);
        for (k, class) in group.classes().iter().enumerate() {
            let o = class.element_order as u64;
            let zo = pow_mod(z, e as u64 / o, p);
            let inv_o = inv_mod(o % p, p);
            let mut terms = Vec::new();
            let mut total = 0u64;
            for j in 0..o {
                let mut acc = 0u64;
                for l in 0..o {
                    let chi = modular[group.power_map(l as i64)[k]];
                    let root = pow_mod(zo, (o - (j * l) % o) % o, p);
                    acc = (acc + chi * root) % p;
                }
                let m = acc * inv_o % p;
                if m > degree {
                    return Err(Error::TableInconsistent(format!(
                        "eigenvalue multiplicity {m} exceeds degree {degree}"
                    )));
                }
                total += m;
                if m > 0 {
                    terms.push((rat(m as i64), (j * (e as u64 / o)) as i64));
                }
            }
            if total != degree {
                return Err(Error::TableInconsistent(format!(
                    "multiplicities at class {k} sum to {total}, expected {degree}"
                )));
            }
            values.push(Cyclotomic::from_terms(e, terms)?);
        }
        irreducibles.push(ClassFunction::from_parts(group, values, true));
        degrees.push(degree);
    }

    // Trivial character first, then ascending degree.
    let mut order_idx: Vec<usize> = (0..r).collect();
    let trivial = ClassFunction::trivial(group);
    order_idx.sort_by_key(|&i| (!irreducibles[i].same_values(&trivial), degrees[i]));
    let table = CharacterTable {
        group: Arc::clone(group),
        irreducibles: order_idx.iter().map(|&i| irreducibles[i].clone()).collect(),
        degrees: order_idx.iter().map(|&i| degrees[i]).collect(),
    };
    table.verify()?;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{subgroup_classes, Permutation};

    fn perm(images: &[u32]) -> Permutation {
        Permutation::from_one_based(images).unwrap()
    }

    fn group(name: &str, degree: usize, gens: &[&[u32]]) -> Arc<GroupData> {
        Arc::new(
            GroupData::enumerate(name, degree, gens.iter().map(|g| perm(g)).collect(), 1000)
                .unwrap(),
        )
    }

    fn s3() -> Arc<GroupData> {
        group("S3", 3, &[&[2, 1, 3], &[2, 3, 1]])
    }

    fn c4() -> Arc<GroupData> {
        group("C4", 4, &[&[2, 3, 4, 1]])
    }

    fn c(n: u32, v: i64) -> Cyclotomic {
        Cyclotomic::from_int(n, v)
    }

    #[test]
    fn cyclic_three() {
        let g = group("C3", 3, &[&[2, 3, 1]]);
        let t = character_table(&g).unwrap();
        assert_eq!(t.degrees(), &[1, 1, 1]);
        let z = Cyclotomic::root_of_unity(3, 1).unwrap();
        let z2 = Cyclotomic::root_of_unity(3, 2).unwrap();
        let rows: Vec<Vec<Cyclotomic>> = t.irreducibles().iter().map(|x| x.values().to_vec()).collect();
        assert!(rows.contains(&vec![c(3, 1), z.clone(), z2.clone()]));
        assert!(rows.contains(&vec![c(3, 1), z2, z]));
    }

    #[test]
    fn s3_table() {
        let g = s3();
        let t = character_table(&g).unwrap();
        assert_eq!(t.degrees(), &[1, 1, 2]);
        let reg = ClassFunction::regular(&g);
        let d = decompose(&reg, &t).unwrap();
        assert_eq!(d.counts().unwrap(), vec![1, 1, 2]);
        assert_eq!(inner_product(&reg, &ClassFunction::trivial(&g)).unwrap(), rat(1));
        assert_eq!(inner_product(&reg, t.irreducible(2)).unwrap(), rat(2));
        for chi in t.irreducibles() {
            assert_eq!(inner_product(chi, chi).unwrap(), rat(1));
        }
        let triv = decompose(&ClassFunction::trivial(&g), &t).unwrap();
        assert_eq!(triv.counts().unwrap(), vec![1, 0, 0]);
    }

    #[test]
    fn virtual_decomposition_flagged() {
        let g = s3();
        let t = character_table(&g).unwrap();
        let f = t.irreducible(1).sub(t.irreducible(2)).unwrap();
        let d = decompose(&f, &t).unwrap();
        assert!(d.is_virtual && d.integral);
        let half = ClassFunction::regular(&g).scale(1);
        let f = ClassFunction::new(
            Arc::clone(&g),
            half.values().iter().map(|v| v.scale(&BigRational::new(1.into(), 4.into()))).collect(),
            false,
        )
        .unwrap();
        let d = decompose(&f, &t).unwrap();
        assert!(d.is_virtual && !d.integral);
    }

    #[test]
    fn sym_alt_formulas() {
        // degree 2 with f(s) = 0 and f(s^2) = -2: the faithful 2-dim character of C4 x-fold
        let g = c4();
        let t = character_table(&g).unwrap();
        let i = Cyclotomic::root_of_unity(4, 1).unwrap();
        let gen_class = g.class_of(g.index_of(&perm(&[2, 3, 4, 1])).unwrap());
        let chi4 = t
            .irreducibles()
            .iter()
            .find(|x| x.value(gen_class) == &i)
            .unwrap()
            .clone();
        let f = chi4.add(&chi4.conj()).unwrap();
        assert!(f.value(gen_class).is_zero());
        assert_eq!(f.value(g.power_map(2)[gen_class]), &c(1, -2));
        assert_eq!(f.sym2().value(gen_class), &c(1, -1));
        assert_eq!(f.alt2().value(gen_class), &c(1, 1));
        let cp = charpoly_at_class(&f, gen_class, 2).unwrap();
        assert_eq!(cp.coeffs, vec![c(1, 1), c(1, 0), c(1, 1)]);
        let cp = charpoly_at_class(&chi4, gen_class, 1).unwrap();
        assert_eq!(cp.coeffs, vec![c(1, 1), -&i]);
        let id = charpoly_at_class(&f, 0, 2).unwrap();
        assert_eq!(id.coeffs, vec![c(1, 1), c(1, -2), c(1, 1)]);
    }

    #[test]
    fn adams_on_c2() {
        let g = group("C2", 2, &[&[2, 1]]);
        let reg = ClassFunction::regular(&g);
        assert_eq!(reg.adams2().value(1), &c(1, 2));
        let det = det_character(&reg).unwrap();
        assert_eq!(det.values(), &[c(1, 1), c(1, -1)]);
        assert!(charpoly_at_class(&reg.adams2(), 0, 2).is_err());
    }

    #[test]
    fn induction_from_c2_to_c4() {
        let g = c4();
        let a = g.index_of(&perm(&[2, 3, 4, 1])).unwrap();
        let a2 = g.mul(a, a);
        let h = subgroup_classes(&g, &[0, a2]).unwrap();
        let ind = induce(&SubgroupFunction::trivial(&h), &h, &g).unwrap();
        let a3 = g.mul(a2, a);
        let by_elem = |x: usize| ind.value(g.class_of(x)).clone();
        assert_eq!(
            vec![by_elem(0), by_elem(a), by_elem(a2), by_elem(a3)],
            vec![c(1, 2), c(1, 0), c(1, 2), c(1, 0)]
        );
        let reg = induce(&SubgroupFunction::regular(&h), &h, &g).unwrap();
        assert!(reg.same_values(&ClassFunction::regular(&g)));
    }

    #[test]
    fn restriction_and_reciprocity() {
        let g = s3();
        let t = character_table(&g).unwrap();
        let tr = g.index_of(&perm(&[2, 1, 3])).unwrap();
        let h = subgroup_classes(&g, &[0, tr]).unwrap();
        let triv = ClassFunction::trivial(&g);
        let res = restrict(&triv, &h);
        let ind = induce(&res, &h, &g).unwrap();
        assert_eq!(inner_product(&ind, &triv).unwrap(), rat(1));
        for chi in t.irreducibles() {
            let res = restrict(chi, &h);
            assert_eq!(res.values[0], *chi.value(0));
            for psi in [SubgroupFunction::trivial(&h), SubgroupFunction::regular(&h)] {
                let lhs = inner_product(&induce(&psi, &h, &g).unwrap(), chi).unwrap();
                let rhs = psi.inner_product(&res, &h).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn quadratic_characters_of_c4() {
        let t = character_table(&c4()).unwrap();
        assert_eq!(quadratic_characters(&t).len(), 2);
    }

    #[test]
    fn table_json_roundtrip() {
        let g = s3();
        let t = character_table(&g).unwrap();
        let json = serde_json::to_string(&t.to_json()).unwrap();
        let parsed: TableJson = serde_json::from_str(&json).unwrap();
        let back = CharacterTable::from_json(&g, &parsed).unwrap();
        for (a, b) in back.irreducibles().iter().zip(t.irreducibles()) {
            assert!(a.same_values(b));
        }
        let mut broken = parsed.clone();
        broken.irreducibles[1][1] = c(1, 5);
        assert!(CharacterTable::from_json(&g, &broken).is_err());
    }

    #[test]
    fn dixon_prime_choice() {
        assert_eq!(dixon_prime(6, 6), 7);
        assert_eq!(dixon_prime(48, 12), 37);
        assert_eq!(dixon_prime(1, 1), 3);
    }
}
