//! Exact multivariate Laurent polynomials over the integers.
//!
//! The variable universe is fixed: six cluster variables `x1..x6` and six
//! coefficient variables `y1..y6`. Coefficients are arbitrary precision.
//! Terms are kept in a `BTreeMap` keyed by exponent vectors, so two equal
//! polynomials are always structurally equal.

use std::collections::{BTreeMap, HashMap};

use rustc_hash::FxHashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of variables: x1..x6 followed by y1..y6.
pub const NUM_VARS: usize = 12;

/// A variable id. Indices `0..6` are `x1..x6`, `6..12` are `y1..y6`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Var(u8);

impl Var {
    /// `x_i` for `i` in `1..=6`.
    pub fn x(i: usize) -> Var {
        assert!((1..=6).contains(&i), "x index {i} out of range");
        Var((i - 1) as u8)
    }

    /// `y_i` for `i` in `1..=6`.
    pub fn y(i: usize) -> Var {
        assert!((1..=6).contains(&i), "y index {i} out of range");
        Var((i + 5) as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn from_index(idx: usize) -> Var {
        assert!(idx < NUM_VARS);
        Var(idx as u8)
    }

    pub fn is_y(self) -> bool {
        self.0 >= 6
    }

    /// 1-based subscript of the variable.
    pub fn subscript(self) -> usize {
        (self.0 as usize % 6) + 1
    }

    pub fn all() -> impl Iterator<Item = Var> {
        (0..NUM_VARS).map(Var::from_index)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = if self.is_y() { 'y' } else { 'x' };
        write!(f, "{}{}", name, self.subscript())
    }
}

/// A Laurent monomial: a signed exponent per variable.
///
/// The derived `Ord` is lexicographic with `x1` most significant; it is a
/// total order compatible with multiplication, which is what division needs.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct Monomial([i16; NUM_VARS]);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial([0; NUM_VARS])
    }

    pub fn var(v: Var) -> Monomial {
        Monomial::var_pow(v, 1)
    }

    pub fn var_pow(v: Var, e: i32) -> Monomial {
        let mut m = Monomial::one();
        m.0[v.index()] = narrow(e);
        m
    }

    pub fn from_exponents(exps: [i32; NUM_VARS]) -> Monomial {
        Monomial(exps.map(narrow))
    }

    pub fn exponent(&self, v: Var) -> i32 {
        self.0[v.index()] as i32
    }

    pub fn exponents(&self) -> [i32; NUM_VARS] {
        self.0.map(i32::from)
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Nonzero exponents only, which is the canonical sparse view.
    pub fn support(&self) -> impl Iterator<Item = (Var, i32)> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| (Var::from_index(i), e as i32))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.0;
        for (o, e) in out.iter_mut().zip(other.0.iter()) {
            *o = o.checked_add(*e).expect("exponent out of range");
        }
        Monomial(out)
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        let mut out = self.0;
        for (o, e) in out.iter_mut().zip(other.0.iter()) {
            *o = o.checked_sub(*e).expect("exponent out of range");
        }
        Monomial(out)
    }

    pub fn inverse(&self) -> Monomial {
        Monomial::one().div(self)
    }

    pub fn has_negative_y(&self) -> bool {
        self.0[6..].iter().any(|&e| e < 0)
    }

    pub fn is_y_free(&self) -> bool {
        self.0[6..].iter().all(|&e| e == 0)
    }

    /// The monomial with all y exponents dropped.
    pub fn x_part(&self) -> Monomial {
        let mut out = self.0;
        out[6..].iter_mut().for_each(|e| *e = 0);
        Monomial(out)
    }
}

/// Exponents are stored as `i16`; anything wider is a bug upstream.
fn narrow(e: i32) -> i16 {
    i16::try_from(e).expect("exponent out of range")
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (v, e) in self.support() {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A Laurent polynomial in `x1..x6, y1..y6` with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(Monomial::one(), BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        LaurentPoly::monomial(Monomial::one(), c.into())
    }

    pub fn var(v: Var) -> Self {
        LaurentPoly::monomial(Monomial::var(v), BigInt::one())
    }

    pub fn x(i: usize) -> Self {
        LaurentPoly::var(Var::x(i))
    }

    pub fn y(i: usize) -> Self {
        LaurentPoly::var(Var::y(i))
    }

    pub fn monomial(m: Monomial, c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        LaurentPoly { terms }
    }

    /// Builds a polynomial from arbitrary (possibly repeated, possibly zero) terms.
    pub fn from_terms<I>(iter: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, BigInt)>,
    {
        let mut acc: FxHashMap<Monomial, BigInt> = FxHashMap::default();
        for (m, c) in iter {
            *acc.entry(m).or_default() += c;
        }
        LaurentPoly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// The single monomial if this polynomial is `c * m`.
    pub fn as_monomial(&self) -> Option<(Monomial, BigInt)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(m, c)| (*m, c.clone()))
        } else {
            None
        }
    }

    /// `Some(m)` when this is `±m`, i.e. a unit of the Laurent ring.
    pub fn as_unit(&self) -> Option<(Monomial, BigInt)> {
        self.as_monomial().filter(|(_, c)| c.abs().is_one())
    }

    pub fn scale(&self, m: &Monomial, c: &BigInt) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> LaurentPoly {
        let mut out = LaurentPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = &out * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        out
    }

    pub fn has_negative_y(&self) -> bool {
        self.terms.keys().any(Monomial::has_negative_y)
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// True when every denominator is a monomial in x only, i.e. no term has a
    /// negative y exponent. Always true for a Laurent polynomial; kept as a
    /// named check for boundary assertions.
    pub fn is_in_cluster_ring(&self) -> bool {
        !self.has_negative_y()
    }

    /// Sum of the terms in which no y variable occurs.
    pub fn y_free_part(&self) -> LaurentPoly {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.is_y_free())
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Set every y variable to 1.
    pub fn specialize_y_to_one(&self) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms.iter().map(|(m, c)| (m.x_part(), c.clone())))
    }

    /// Exact quotient `self / den` in the Laurent ring.
    ///
    /// Iterated leading-term elimination under the lexicographic order. The
    /// quotient's smallest term is bounded below by `min(self) / min(den)`,
    /// which gives the stopping rule when division is not exact.
    pub fn div_exact(&self, den: &LaurentPoly) -> Result<LaurentPoly> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(LaurentPoly::zero());
        }
        if let Some((m, c)) = den.as_monomial() {
            let inv = m.inverse();
            let mut terms = BTreeMap::new();
            for (k, v) in &self.terms {
                let (q, r) = v.div_rem(&c);
                if !r.is_zero() {
                    return Err(Error::NotDivisible);
                }
                terms.insert(k.mul(&inv), q);
            }
            return Ok(LaurentPoly { terms });
        }
        if let (Some(num), Some(d)) = (self.small_terms(), den.small_terms()) {
            if let Some(q) = div_small(&num, &d) {
                return q;
            }
        }
        let (den_lead_m, den_lead_c) = den.leading_term().map(|(m, c)| (*m, c.clone())).unwrap();
        let den_min = *den.terms.keys().next().unwrap();
        let floor = self.terms.keys().next().unwrap().div(&den_min);
        let mut rem = self.terms.clone();
        let mut quotient = BTreeMap::new();
        while let Some((lead_m, lead_c)) = rem.iter().next_back().map(|(m, c)| (*m, c.clone())) {
            let qm = lead_m.div(&den_lead_m);
            if qm < floor {
                return Err(Error::NotDivisible);
            }
            let (qc, r) = lead_c.div_rem(&den_lead_c);
            if !r.is_zero() {
                return Err(Error::NotDivisible);
            }
            for (dm, dc) in &den.terms {
                let key = dm.mul(&qm);
                let entry = rem.entry(key).or_default();
                *entry -= dc * &qc;
                if entry.is_zero() {
                    rem.remove(&key);
                }
            }
            quotient.insert(qm, qc);
        }
        Ok(LaurentPoly { terms: quotient })
    }

    /// Coefficients as `i128`, if they all fit in an `i64`.
    fn small_terms(&self) -> Option<Vec<(Monomial, i128)>> {
        self.terms
            .iter()
            .map(|(m, c)| c.to_i64().map(|c| (*m, c as i128)))
            .collect()
    }

    /// Simultaneous substitution of the assigned variables.
    ///
    /// A variable appearing with a negative exponent may only be replaced by a
    /// unit (`±monomial`).
    pub fn substitute(&self, assignment: &HashMap<Var, LaurentPoly>) -> Result<LaurentPoly> {
        let mut inverses: HashMap<Var, LaurentPoly> = HashMap::new();
        for (v, val) in assignment {
            if let Some((m, c)) = val.as_unit() {
                inverses.insert(*v, LaurentPoly::monomial(m.inverse(), c));
            }
        }
        let mut out = LaurentPoly::zero();
        for (m, c) in &self.terms {
            let mut kept = Monomial::one();
            let mut factor = LaurentPoly::constant(c.clone());
            for (v, e) in m.support() {
                match assignment.get(&v) {
                    None => kept = kept.mul(&Monomial::var_pow(v, e)),
                    Some(val) if e > 0 => factor = &factor * &val.pow(e as u32),
                    Some(_) => {
                        let inv = inverses
                            .get(&v)
                            .ok_or_else(|| Error::NonUnitIntoNegativeExponent(v.to_string()))?;
                        factor = &factor * &inv.pow((-e) as u32);
                    }
                }
            }
            out += factor.scale(&kept, &BigInt::one());
        }
        Ok(out)
    }

    /// Substitute `x_i -> 1` for every cluster variable; the F-polynomial when
    /// applied to a principal-coefficient cluster variable.
    pub fn specialize_x_to_one(&self) -> LaurentPoly {
        let assignment: HashMap<Var, LaurentPoly> =
            (1..=6).map(|i| (Var::x(i), LaurentPoly::one())).collect();
        self.substitute(&assignment)
            .expect("1 is a unit, substitution cannot fail")
    }

    pub fn sum_coefficients(&self) -> BigInt {
        self.terms.values().sum()
    }
}

impl From<Monomial> for LaurentPoly {
    fn from(m: Monomial) -> Self {
        LaurentPoly::monomial(m, BigInt::one())
    }
}

impl AddAssign<LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: LaurentPoly) {
        for (m, c) in rhs.terms {
            let entry = self.terms.entry(m).or_default();
            *entry += c;
            if entry.is_zero() {
                self.terms.remove(&m);
            }
        }
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (m, c) in &rhs.terms {
            let entry = self.terms.entry(*m).or_default();
            *entry += c;
            if entry.is_zero() {
                self.terms.remove(m);
            }
        }
    }
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self += rhs;
        self
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        if let (Some(a), Some(b)) = (self.small_terms(), rhs.small_terms()) {
            if let Some(p) = mul_small(&a, &b) {
                return p;
            }
        }
        let mut acc: FxHashMap<Monomial, BigInt> = FxHashMap::with_capacity_and_hasher(
            self.terms.len() * rhs.terms.len(),
            Default::default(),
        );
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                *acc.entry(ma.mul(mb)).or_default() += ca * cb;
            }
        }
        LaurentPoly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

/// Product with machine coefficients; `None` on overflow.
fn mul_small(a: &[(Monomial, i128)], b: &[(Monomial, i128)]) -> Option<LaurentPoly> {
    let mut acc: FxHashMap<Monomial, i128> =
        FxHashMap::with_capacity_and_hasher(a.len() * b.len(), Default::default());
    for (ma, ca) in a {
        for (mb, cb) in b {
            let e = acc.entry(ma.mul(mb)).or_insert(0);
            // both factors fit in i64, so the product fits in i128
            *e = e.checked_add(ca * cb)?;
        }
    }
    Some(LaurentPoly {
        terms: acc
            .into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|(m, c)| (m, BigInt::from(c)))
            .collect(),
    })
}

/// [`LaurentPoly::div_exact`] with machine coefficients; `None` on overflow.
fn div_small(num: &[(Monomial, i128)], den: &[(Monomial, i128)]) -> Option<Result<LaurentPoly>> {
    let (den_lead_m, den_lead_c) = *den.last()?;
    let den_min = den.first()?.0;
    let floor = num.first()?.0.div(&den_min);
    let mut rem: BTreeMap<Monomial, i128> = num.iter().copied().collect();
    let mut quotient = BTreeMap::new();
    while let Some((&lead_m, &lead_c)) = rem.iter().next_back() {
        let qm = lead_m.div(&den_lead_m);
        if qm < floor || lead_c % den_lead_c != 0 {
            return Some(Err(Error::NotDivisible));
        }
        let qc = lead_c / den_lead_c;
        for (dm, dc) in den {
            let key = dm.mul(&qm);
            let entry = rem.entry(key).or_insert(0);
            *entry = entry.checked_sub(dc.checked_mul(qc)?)?;
            if *entry == 0 {
                rem.remove(&key);
            }
        }
        quotient.insert(qm, BigInt::from(qc));
    }
    Some(Ok(LaurentPoly { terms: quotient }))
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl std::iter::Sum for LaurentPoly {
    fn sum<I: Iterator<Item = LaurentPoly>>(iter: I) -> Self {
        let mut out = LaurentPoly::zero();
        for p in iter {
            out += p;
        }
        out
    }
}

/// Canonical rendering: terms in descending monomial order, e.g.
/// `x1^2*x2^-1 - 3*x4*y1 + 2`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for LaurentPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Parser::new(s).parse()
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(s: &'a str) -> Self {
        Parser {
            src: s.as_bytes(),
            pos: 0,
        }
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at byte {}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn digits(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn parse(mut self) -> Result<LaurentPoly> {
        let mut terms = Vec::new();
        let mut sign = BigInt::one();
        match self.peek() {
            Some(b'-') => {
                sign = -sign;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            None => return Err(self.err("empty input")),
            _ => {}
        }
        loop {
            let (m, c) = self.term()?;
            terms.push((m, c * &sign));
            match self.peek() {
                None => break,
                Some(b'+') => {
                    sign = BigInt::one();
                    self.pos += 1;
                }
                Some(b'-') => {
                    sign = -BigInt::one();
                    self.pos += 1;
                }
                Some(_) => return Err(self.err("expected '+' or '-'")),
            }
        }
        Ok(LaurentPoly::from_terms(terms))
    }

    fn term(&mut self) -> Result<(Monomial, BigInt)> {
        let mut coeff = BigInt::one();
        let mut mono = Monomial::one();
        if let Some(ds) = self.digits() {
            coeff = ds.parse::<BigInt>().map_err(|_| self.err("bad integer"))?;
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                return Ok((mono, coeff));
            }
        }
        loop {
            let var = self.variable()?;
            let mut exp = 1i32;
            if self.peek() == Some(b'^') {
                self.pos += 1;
                let neg = if self.peek() == Some(b'-') {
                    self.pos += 1;
                    true
                } else {
                    false
                };
                let ds = self.digits().ok_or_else(|| self.err("expected exponent"))?;
                exp = ds.parse::<i32>().map_err(|_| self.err("bad exponent"))?;
                if neg {
                    exp = -exp;
                }
            }
            mono = mono.mul(&Monomial::var_pow(var, exp));
            if self.peek() != Some(b'*') {
                break;
            }
            self.pos += 1;
        }
        Ok((mono, coeff))
    }

    fn variable(&mut self) -> Result<Var> {
        let kind = self.peek().ok_or_else(|| self.err("expected variable"))?;
        self.pos += 1;
        let idx: usize = self
            .digits()
            .ok_or_else(|| self.err("expected variable index"))?
            .parse()
            .map_err(|_| self.err("bad variable index"))?;
        if !(1..=6).contains(&idx) {
            return Err(self.err("variable index out of range"));
        }
        match kind {
            b'x' => Ok(Var::x(idx)),
            b'y' => Ok(Var::y(idx)),
            _ => Err(self.err("expected 'x' or 'y'")),
        }
    }
}
