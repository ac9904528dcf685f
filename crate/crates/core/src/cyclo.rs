//! Exact arithmetic in cyclotomic fields `Q(zeta_n)`.
//!
//! An element of `Q(zeta_n)` is stored by its coordinates in the power basis
//! `1, zeta, ..., zeta^(phi(n)-1)` modulo the `n`-th cyclotomic polynomial.
//! Elements of different orders are compared and combined after embedding
//! both into `Q(zeta_lcm)`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Default bound on the order of any cyclotomic field we are willing to build.
pub const DEFAULT_MAX_ORDER: u32 = 10_000;

static MAX_ORDER: AtomicU32 = AtomicU32::new(DEFAULT_MAX_ORDER);

/// Sets the global bound on cyclotomic orders.
pub fn set_max_order(bound: u32) {
    MAX_ORDER.store(bound.max(1), Ordering::Relaxed);
}

pub fn max_order() -> u32 {
    MAX_ORDER.load(Ordering::Relaxed)
}

fn check_order(order: u32) -> Result<()> {
    let bound = max_order();
    if order == 0 || order > bound {
        return Err(Error::OrderTooLarge { order, bound });
    }
    Ok(())
}

pub fn euler_phi(n: u32) -> u32 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn lcm(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

type PolyCache = Mutex<HashMap<u32, Arc<Vec<i64>>>>;

fn poly_cache() -> &'static PolyCache {
    static CACHE: OnceLock<PolyCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The `n`-th cyclotomic polynomial, lowest coefficient first.
///
/// Computed as `(x^n - 1) / prod_{d | n, d < n} Phi_d(x)` and cached.
pub fn cyclotomic_polynomial(n: u32) -> Arc<Vec<i64>> {
    assert!(n > 0, "cyclotomic polynomial of order 0");
    if let Some(p) = poly_cache().lock().unwrap().get(&n) {
        return Arc::clone(p);
    }
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let den = cyclotomic_polynomial(d);
            num = exact_div_monic(&num, &den);
        }
    }
    let poly = Arc::new(num);
    poly_cache()
        .lock()
        .unwrap()
        .insert(n, Arc::clone(&poly));
    poly
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut quot = vec![0i64; qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// Reduces a polynomial in `zeta_n` (arbitrary length) to canonical form.
fn reduce(order: u32, poly: Vec<BigRational>) -> Vec<BigRational> {
    let n = order as usize;
    let phi = euler_phi(order) as usize;
    let mut folded: Vec<BigRational> = vec![BigRational::zero(); n.max(phi)];
    for (i, c) in poly.into_iter().enumerate() {
        if !c.is_zero() {
            folded[i % n] += c;
        }
    }
    let cyc = cyclotomic_polynomial(order);
    for d in (phi..folded.len()).rev() {
        if folded[d].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut folded[d], BigRational::zero());
        let shift = d - phi;
        for (j, &pj) in cyc.iter().enumerate().take(phi) {
            if pj != 0 {
                folded[shift + j] -= &c * BigRational::from_integer(BigInt::from(pj));
            }
        }
    }
    folded.truncate(phi);
    folded
}

/// An exact element of the cyclotomic field `Q(zeta_n)`.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    order: u32,
    coeffs: Vec<BigRational>,
}

impl Cyclotomic {
    pub fn zero(order: u32) -> Self {
        Self {
            order,
            coeffs: vec![BigRational::zero(); euler_phi(order) as usize],
        }
    }

    pub fn one(order: u32) -> Self {
        Self::from_rational(order, BigRational::one())
    }

    pub fn from_int(order: u32, value: i64) -> Self {
        Self::from_rational(order, BigRational::from_integer(BigInt::from(value)))
    }

    pub fn from_rational(order: u32, value: BigRational) -> Self {
        let mut out = Self::zero(order);
        out.coeffs[0] = value;
        out
    }

    /// `zeta_n^k` for any integer `k`.
    pub fn root_of_unity(order: u32, k: i64) -> Result<Self> {
        check_order(order)?;
        let e = k.rem_euclid(order as i64) as usize;
        let mut poly = vec![BigRational::zero(); e + 1];
        poly[e] = BigRational::one();
        Ok(Self {
            order,
            coeffs: reduce(order, poly),
        })
    }

    /// Builds `sum c_j zeta_n^j` from arbitrary exponents, reducing as needed.
    pub fn from_terms<I>(order: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BigRational, i64)>,
    {
        check_order(order)?;
        let n = order as i64;
        let mut poly = vec![BigRational::zero(); order as usize];
        for (c, e) in terms {
            poly[e.rem_euclid(n) as usize] += c;
        }
        Ok(Self {
            order,
            coeffs: reduce(order, poly),
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_one())
    }

    /// The rational value, if this element lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational()
            .filter(|q| q.is_integer())
            .map(|q| q.to_integer())
    }

    /// Embeds into `Q(zeta_m)`; requires `order | m`.
    pub fn embed(&self, m: u32) -> Result<Self> {
        if m == self.order {
            return Ok(self.clone());
        }
        if m % self.order != 0 {
            return Err(Error::InvalidCyclotomic(format!(
                "cannot embed Q(zeta_{}) into Q(zeta_{m})",
                self.order
            )));
        }
        check_order(m)?;
        let step = (m / self.order) as usize;
        let mut poly = vec![BigRational::zero(); m as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                poly[j * step] = c.clone();
            }
        }
        Ok(Self {
            order: m,
            coeffs: reduce(m, poly),
        })
    }

    /// Brings both operands into a common field `Q(zeta_lcm)`.
    pub fn harmonize(a: &Self, b: &Self) -> Result<(Self, Self)> {
        let m = lcm(a.order, b.order);
        Ok((a.embed(m)?, b.embed(m)?))
    }

    /// Image under the Galois automorphism `zeta_n -> zeta_n^k`.
    pub fn galois(&self, k: i64) -> Self {
        let n = self.order as i64;
        let mut poly = vec![BigRational::zero(); self.order as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                poly[(j as i64 * k).rem_euclid(n) as usize] += c.clone();
            }
        }
        Self {
            order: self.order,
            coeffs: reduce(self.order, poly),
        }
    }

    /// Complex conjugation, `zeta_n -> zeta_n^(n-1)`.
    pub fn conj(&self) -> Self {
        self.galois(self.order as i64 - 1)
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.order);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via the field norm: `a^-1 = prod_{k != 1} sigma_k(a) / N(a)`.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero { order: self.order });
        }
        let n = self.order as i64;
        let mut others = Self::one(self.order);
        for k in 2..n.max(2) {
            if k.gcd(&n) == 1 {
                others = &others * &self.galois(k);
            }
        }
        let norm = (self * &others)
            .as_rational()
            .expect("field norm is rational");
        Ok(others.scale(&norm.recip()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inverse()?)
    }

    /// True when `self` is fixed by `zeta -> zeta^k`.
    pub fn fixed_by(&self, k: i64) -> bool {
        self.galois(k) == *self
    }

    /// True when this element lies in `Q(zeta_d)` (as a subfield of `Q(zeta_lcm(n, d))`).
    pub fn lies_in(&self, d: u32) -> Result<bool> {
        let m = lcm(self.order, d);
        let x = self.embed(m)?;
        let m = m as i64;
        Ok((1..m)
            .filter(|k| k.gcd(&m) == 1 && (k - 1) % d as i64 == 0)
            .all(|k| x.fixed_by(k)))
    }

    /// Rewrites the element in the smallest `Q(zeta_d)` containing it, `d | n`.
    ///
    /// Only used where descent is explicitly requested; arithmetic keeps the declared order.
    pub fn descend(&self) -> Result<Self> {
        let n = self.order;
        let mut best = self.clone();
        for d in 1..n {
            if n % d != 0 || !self.lies_in(d)? {
                continue;
            }
            // Coordinates of an element of Q(zeta_d) are recovered by solving
            // for its image in the power basis of Q(zeta_d).
            if let Some(x) = self.solve_in_subfield(d) {
                best = x;
                break;
            }
        }
        Ok(best)
    }

    fn solve_in_subfield(&self, d: u32) -> Option<Self> {
        let phi_d = euler_phi(d) as usize;
        let phi_n = euler_phi(self.order) as usize;
        // Columns: images of zeta_d^j in Q(zeta_n).
        let cols: Vec<Self> = (0..phi_d)
            .map(|j| {
                Self::root_of_unity(d, j as i64)
                    .and_then(|z| z.embed(self.order))
                    .expect("subfield embedding")
            })
            .collect();
        // Gaussian elimination on the phi_n x phi_d system.
        let mut rows: Vec<Vec<BigRational>> = (0..phi_n)
            .map(|i| {
                let mut r: Vec<BigRational> = cols.iter().map(|c| c.coeffs[i].clone()).collect();
                r.push(self.coeffs[i].clone());
                r
            })
            .collect();
        let mut pivot_row = 0;
        let mut pivots = Vec::new();
        for col in 0..phi_d {
            let Some(p) = (pivot_row..phi_n).find(|&r| !rows[r][col].is_zero()) else {
                continue;
            };
            rows.swap(pivot_row, p);
            let inv = rows[pivot_row][col].recip();
            for v in rows[pivot_row].iter_mut() {
                *v *= &inv;
            }
            for r in 0..phi_n {
                if r != pivot_row && !rows[r][col].is_zero() {
                    let f = rows[r][col].clone();
                    let src = rows[pivot_row].clone();
                    for (v, s) in rows[r].iter_mut().zip(src) {
                        *v -= &f * s;
                    }
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        if rows[pivot_row..].iter().any(|r| !r[phi_d].is_zero()) {
            return None;
        }
        let mut coeffs = vec![BigRational::zero(); phi_d];
        for (r, &c) in pivots.iter().enumerate() {
            coeffs[c] = rows[r][phi_d].clone();
        }
        Some(Self { order: d, coeffs })
    }

    fn add_same(&self, rhs: &Self) -> Self {
        Self {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    fn mul_same(&self, rhs: &Self) -> Self {
        let len = self.coeffs.len();
        if let Some(q) = self.as_rational() {
            return rhs.scale(&q);
        }
        if let Some(q) = rhs.as_rational() {
            return self.scale(&q);
        }
        let mut poly = vec![BigRational::zero(); 2 * len - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    poly[i + j] += a * b;
                }
            }
        }
        Self {
            order: self.order,
            coeffs: reduce(self.order, poly),
        }
    }

    fn binary(&self, rhs: &Self, f: impl Fn(&Self, &Self) -> Self) -> Self {
        if self.order == rhs.order {
            f(self, rhs)
        } else {
            let (a, b) = Self::harmonize(self, rhs).expect("cyclotomic order bound exceeded");
            f(&a, &b)
        }
    }
}

/// Arithmetic operation selector for [`cyc_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked binary arithmetic: harmonizes orders, enforces the order bound and
/// rejects division by zero.
pub fn cyc_arith(a: &Cyclotomic, b: &Cyclotomic, op: ArithOp) -> Result<Cyclotomic> {
    check_order(lcm(a.order, b.order))?;
    let (a, b) = Cyclotomic::harmonize(a, b)?;
    Ok(match op {
        ArithOp::Add => &a + &b,
        ArithOp::Sub => &a - &b,
        ArithOp::Mul => &a * &b,
        ArithOp::Div => a.checked_div(&b)?,
    })
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        match Self::harmonize(self, other) {
            Ok((a, b)) => a.coeffs == b.coeffs,
            Err(_) => false,
        }
    }
}

impl Eq for Cyclotomic {}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.binary(rhs, Cyclotomic::add_same)
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.binary(rhs, |a, b| a.add_same(&-b))
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.binary(rhs, Cyclotomic::mul_same)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

macro_rules! owned_ops {
    ($($trait:ident $method:ident),*) => {$(
        impl $trait for Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: &Cyclotomic) -> Cyclotomic {
                (&self).$method(rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            match (j, abs.is_one()) {
                (0, _) => write!(f, "{abs}")?,
                (1, true) => write!(f, "z{}", self.order)?,
                (_, true) => write!(f, "z{}^{j}", self.order)?,
                (1, false) => write!(f, "{abs}*z{}", self.order)?,
                (_, false) => write!(f, "{abs}*z{}^{j}", self.order)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// The stabilizer of a list of values inside `(Z/nZ)^x`, which determines the
/// smallest subfield of `Q(zeta_n)` containing them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldOfValues {
    /// Common order the values were harmonized to.
    pub order: u32,
    /// Units `k mod n` with `sigma_k(v) = v` for every value.
    pub stabilizer: Vec<u32>,
    /// Every value lies in `Q(i)`.
    pub in_gaussian_rationals: bool,
    /// Every value is rational.
    pub rational: bool,
}

pub fn field_of_values(values: &[Cyclotomic]) -> Result<FieldOfValues> {
    let order = values.iter().fold(1, |acc, v| lcm(acc, v.order));
    check_order(order)?;
    let embedded: Vec<Cyclotomic> = values
        .iter()
        .map(|v| v.embed(order))
        .collect::<Result<_>>()?;
    let n = order as i64;
    let stabilizer: Vec<u32> = (1..n.max(2))
        .filter(|&k| k.gcd(&n) == 1)
        .filter(|&k| embedded.iter().all(|v| v.fixed_by(k)))
        .map(|k| k as u32)
        .collect();
    let mut in_gaussian_rationals = true;
    for v in values {
        if !v.lies_in(4)? {
            in_gaussian_rationals = false;
            break;
        }
    }
    let rational = embedded.iter().all(|v| v.as_rational().is_some());
    Ok(FieldOfValues {
        order,
        stabilizer,
        in_gaussian_rationals,
        rational,
    })
}

#[derive(Serialize, Deserialize)]
struct CycloRepr {
    n: u32,
    terms: Vec<(i64, i64, u32)>,
}

impl Serialize for Cyclotomic {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut terms = Vec::new();
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let num = c.numer().to_i64();
            let den = c.denom().to_i64();
            match (num, den) {
                (Some(num), Some(den)) => terms.push((num, den, j as u32)),
                _ => {
                    return Err(serde::ser::Error::custom(
                        "cyclotomic coefficient does not fit in 64 bits",
                    ))
                }
            }
        }
        CycloRepr {
            n: self.order,
            terms,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = CycloRepr::deserialize(deserializer)?;
        let phi = if repr.n == 0 { 0 } else { euler_phi(repr.n) };
        let mut terms = Vec::with_capacity(repr.terms.len());
        for (num, den, exp) in repr.terms {
            if den == 0 {
                return Err(D::Error::custom("zero denominator"));
            }
            if exp >= phi {
                return Err(D::Error::custom(format!(
                    "exponent {exp} outside [0, phi({}))",
                    repr.n
                )));
            }
            terms.push((
                BigRational::new(BigInt::from(num), BigInt::from(den)),
                exp as i64,
            ));
        }
        Cyclotomic::from_terms(repr.n, terms).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(n: u32, k: i64) -> Cyclotomic {
        Cyclotomic::root_of_unity(n, k).unwrap()
    }

    fn int(n: u32, v: i64) -> Cyclotomic {
        Cyclotomic::from_int(n, v)
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        let p105 = cyclotomic_polynomial(105);
        assert_eq!(p105.len(), 49);
        assert!(p105.contains(&-2));
    }

    #[test]
    fn phi_values() {
        let brute = |n: u32| (1..=n).filter(|k| k.gcd(&n) == 1).count() as u32;
        for n in 1..200 {
            assert_eq!(euler_phi(n), brute(n), "n = {n}");
        }
    }

    #[test]
    fn i_squared_is_minus_one() {
        assert_eq!(&z(4, 1) * &z(4, 1), int(4, -1));
    }

    #[test]
    fn cube_roots_sum() {
        assert_eq!(&z(3, 1) + &z(3, 2), int(3, -1));
    }

    #[test]
    fn eighth_roots_product() {
        let lhs = &(&int(8, 1) + &z(8, 1)) * &(&int(8, 1) + &z(8, 3));
        assert_eq!(lhs, &z(8, 1) + &z(8, 3));
    }

    #[test]
    fn conjugation_examples() {
        assert_eq!(z(3, 1).conj(), z(3, 2));
        assert_eq!(int(5, -1).conj(), int(5, -1));
        let real = &z(8, 1) + &z(8, 7);
        assert_eq!(real.conj(), real);
    }

    #[test]
    fn mixed_orders_harmonize() {
        // zeta_4 = zeta_12^3, zeta_3 = zeta_12^4
        assert_eq!(z(4, 1), z(12, 3));
        assert_eq!(&z(4, 1) * &z(3, 1), z(12, 7));
        assert_ne!(z(4, 1), z(3, 1));
        assert_eq!(int(1, 7), int(12, 7));
    }

    #[test]
    fn division() {
        let a = &int(5, 2) + &z(5, 3);
        let inv = a.inverse().unwrap();
        assert!((&a * &inv).is_one());
        assert!(matches!(
            cyc_arith(&a, &int(5, 0), ArithOp::Div),
            Err(Error::DivisionByZero { .. })
        ));
    }

    #[test]
    fn order_bound_enforced() {
        let a = z(9_973, 1);
        let b = z(7, 1);
        assert!(matches!(
            cyc_arith(&a, &b, ArithOp::Add),
            Err(Error::OrderTooLarge { .. })
        ));
    }

    #[test]
    fn fields_of_values() {
        let f = field_of_values(&[int(1, 1), int(1, -1), int(1, 0)]).unwrap();
        assert!(f.in_gaussian_rationals && f.rational);
        assert_eq!(f.stabilizer, vec![1]);
        let f = field_of_values(&[z(4, 1)]).unwrap();
        assert!(f.in_gaussian_rationals && !f.rational);
        assert_eq!(f.stabilizer, vec![1]);
        let f = field_of_values(&[z(3, 1)]).unwrap();
        assert!(!f.in_gaussian_rationals);
        // No element of Q(zeta_4) equals zeta_3.
        assert!(z(3, 1).descend().unwrap().order() == 3);
        // sqrt(-3) = zeta_3 - zeta_3^2 is fixed by k = 1 only in Q(zeta_3) but lies in Q(zeta_12).
        let i_in_12 = z(12, 3);
        let f = field_of_values(&[i_in_12.clone()]).unwrap();
        assert_eq!(f.stabilizer, vec![1, 5]);
        assert!(f.in_gaussian_rationals);
        assert_eq!(i_in_12.descend().unwrap(), z(4, 1));
        assert_eq!(i_in_12.descend().unwrap().order(), 4);
    }

    #[test]
    fn serde_shape() {
        let v = &z(12, 3).scale(&BigRational::new(1.into(), 2.into())) - &int(12, 1);
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(json, r#"{"n":12,"terms":[[-1,1,0],[1,2,3]]}"#);
        let back: Cyclotomic = serde_json::from_str(&json).unwrap();
        assert_eq!(back, v);
        assert!(serde_json::from_str::<Cyclotomic>(r#"{"n":12,"terms":[[1,1,4]]}"#).is_err());
    }

    #[test]
    fn display() {
        assert_eq!((&z(4, 1) - &int(4, 2)).to_string(), "-2 + z4");
        assert_eq!(int(3, 0).to_string(), "0");
    }

    fn arb_cyc(n: u32) -> impl Strategy<Value = Cyclotomic> {
        let phi = euler_phi(n) as usize;
        proptest::collection::vec((-6i64..=6, 1i64..=4), phi).prop_map(move |cs| {
            Cyclotomic::from_terms(
                n,
                cs.into_iter()
                    .enumerate()
                    .map(|(j, (a, b))| (BigRational::new(a.into(), b.into()), j as i64)),
            )
            .unwrap()
        })
    }

    fn arb_pair() -> impl Strategy<Value = (Cyclotomic, Cyclotomic)> {
        prop_oneof![Just(1u32), Just(3), Just(4), Just(8), Just(12), Just(15)]
            .prop_flat_map(|n| {
                prop_oneof![Just(1u32), Just(2), Just(5), Just(6)]
                    .prop_flat_map(move |m| (arb_cyc(n), arb_cyc(m)))
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn add_sub_roundtrip((a, b) in arb_pair()) {
            prop_assert_eq!(&(&a + &b) - &b, a);
        }

        #[test]
        fn mul_div_roundtrip((a, b) in arb_pair()) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!(cyc_arith(&(&a * &b), &b, ArithOp::Div).unwrap(), a);
        }

        #[test]
        fn conj_is_involutive_and_multiplicative((a, b) in arb_pair()) {
            prop_assert_eq!(a.conj().conj(), a.clone());
            prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
            let norm = &a * &a.conj();
            prop_assert_eq!(norm.conj(), norm);
        }

        #[test]
        fn embedding_roundtrip(a in arb_cyc(6)) {
            let up = a.embed(24).unwrap();
            prop_assert_eq!(up.order(), 24);
            let back = up.solve_in_subfield(6).unwrap();
            prop_assert_eq!(back.coeffs(), a.coeffs());
        }
    }
}
