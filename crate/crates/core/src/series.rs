//! Truncated formal series over an exact coefficient ring.
//!
//! Exponents are stored as integer multiples of a per-series unit
//! `1/unit_den` (the eta function uses `1/24`), which keeps the coefficient
//! map integer-keyed. Laurent exponents are allowed. Every series carries
//! its truncation order (exclusive, in key units) and binary operations
//! propagate the pessimistic `min` of the operand orders.

use crate::ring::{format_rat, rat_to_f64, Rat, Ring, RingWithRationals};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Series variable symbol.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Var(pub &'static str);

pub const VAR_Q: Var = Var("q");
pub const VAR_Z: Var = Var("z");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("mismatched series structure: {0}")]
    Structure(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Truncated formal series; immutable after construction in practice.
#[derive(Clone, Debug)]
pub struct TruncSeries<C: Ring> {
    var: Var,
    unit_den: u32,
    /// exponent in key units -> coefficient; zero coefficients never stored
    coeffs: BTreeMap<i64, C>,
    /// exclusive truncation bound in key units
    order: i64,
}

impl<C: Ring> PartialEq for TruncSeries<C> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
            && (self.is_universal_const() || other.is_universal_const()
                || (self.var == other.var && self.unit_den == other.unit_den))
    }
}

impl<C: Ring> TruncSeries<C> {
    /// Empty (zero) series in the given frame; `order` is exclusive and
    /// counted in units of `1/unit_den`.
    pub fn zero_in(var: Var, unit_den: u32, order: i64) -> Self {
        assert!(unit_den > 0);
        TruncSeries {
            var,
            unit_den,
            coeffs: BTreeMap::new(),
            order,
        }
    }

    /// Constant series usable in any frame.
    pub fn constant(c: C) -> Self {
        let mut s = TruncSeries {
            var: Var(""),
            unit_den: 1,
            coeffs: BTreeMap::new(),
            order: i64::MAX,
        };
        if !c.is_zero() {
            s.coeffs.insert(0, c);
        }
        s
    }

    /// Monomial `c * x^(key/unit_den)` truncated at `order`.
    pub fn monomial(var: Var, unit_den: u32, key: i64, c: C, order: i64) -> Self {
        let mut s = Self::zero_in(var, unit_den, order);
        s.set(key, c);
        s
    }

    pub fn var(&self) -> Var {
        self.var
    }
    pub fn unit_den(&self) -> u32 {
        self.unit_den
    }
    pub fn order(&self) -> i64 {
        self.order
    }
    pub fn coeffs(&self) -> &BTreeMap<i64, C> {
        &self.coeffs
    }

    fn is_universal_const(&self) -> bool {
        self.order == i64::MAX && self.coeffs.keys().all(|&k| k == 0)
    }

    /// Coefficient of exponent `key/unit_den`.
    pub fn coeff(&self, key: i64) -> C {
        self.coeffs.get(&key).cloned().unwrap_or_else(C::zero)
    }

    pub fn set(&mut self, key: i64, c: C) {
        if key >= self.order || c.is_zero() {
            self.coeffs.remove(&key);
        } else {
            self.coeffs.insert(key, c);
        }
    }

    fn unified_frame(&self, other: &Self) -> Result<(Var, u32), SeriesError> {
        if self.is_universal_const() {
            Ok((other.var, other.unit_den))
        } else if other.is_universal_const() {
            Ok((self.var, self.unit_den))
        } else if self.var == other.var && self.unit_den == other.unit_den {
            Ok((self.var, self.unit_den))
        } else {
            Err(SeriesError::Structure(format!(
                "cannot combine series in {}^(1/{}) with series in {}^(1/{})",
                self.var.0, self.unit_den, other.var.0, other.unit_den
            )))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, SeriesError> {
        let (var, unit_den) = self.unified_frame(other)?;
        let order = self.order.min(other.order);
        let mut out: TruncSeries<C> = TruncSeries {
            var,
            unit_den,
            coeffs: BTreeMap::new(),
            order,
        };
        for (&k, c) in self.coeffs.iter().chain(other.coeffs.iter()) {
            if k < order {
                let acc = out.coeff(k).add(c);
                out.set(k, acc);
            }
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        let (var, unit_den) = self.unified_frame(other)?;
        let order = self.order.min(other.order);
        let mut out: TruncSeries<C> = TruncSeries {
            var,
            unit_den,
            coeffs: BTreeMap::new(),
            order,
        };
        for (&ka, ca) in &self.coeffs {
            for (&kb, cb) in &other.coeffs {
                let k = ka + kb;
                if k < order {
                    let acc = out.coeff(k).add(&ca.mul(cb));
                    out.set(k, acc);
                }
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.coeffs.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.try_add(&other.neg())
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = TruncSeries {
            var: self.var,
            unit_den: self.unit_den,
            coeffs: BTreeMap::new(),
            order: self.order,
        };
        for (&k, v) in &self.coeffs {
            out.set(k, v.mul(c));
        }
        out
    }

    /// Re-truncate to a smaller exclusive order (key units).
    pub fn truncated(&self, order: i64) -> Self {
        let mut out = self.clone();
        out.order = out.order.min(order);
        out.coeffs.retain(|&k, _| k < out.order);
        out
    }

    /// Apply a ring homomorphism to every coefficient.
    pub fn map_coeffs<D: Ring>(&self, f: impl Fn(&C) -> D) -> TruncSeries<D> {
        let mut out = TruncSeries::zero_in(self.var, self.unit_den, self.order);
        for (&k, c) in &self.coeffs {
            out.set(k, f(c));
        }
        out
    }

    /// Rescale the exponent unit by an integer factor (e.g. 1/24 -> 1/1 is
    /// `coarsen` by 24 when every key is divisible).
    pub fn with_unit_den(&self, new_den: u32) -> Result<Self, SeriesError> {
        if new_den % self.unit_den == 0 {
            let f = (new_den / self.unit_den) as i64;
            let mut out = TruncSeries::zero_in(self.var, new_den, self.order.saturating_mul(f));
            for (&k, c) in &self.coeffs {
                out.set(k * f, c.clone());
            }
            Ok(out)
        } else if self.unit_den % new_den == 0 {
            let f = (self.unit_den / new_den) as i64;
            if self.coeffs.keys().any(|&k| k % f != 0) {
                return Err(SeriesError::Structure(
                    "exponents not representable in the coarser unit".into(),
                ));
            }
            let mut out = TruncSeries::zero_in(self.var, new_den, self.order.div_euclid(f));
            for (&k, c) in &self.coeffs {
                out.set(k / f, c.clone());
            }
            Ok(out)
        } else {
            Err(SeriesError::Structure("incompatible exponent units".into()))
        }
    }

    pub fn lowest_key(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn pow(&self, mut n: u32) -> Result<Self, SeriesError> {
        let mut base = self.clone();
        let mut acc = TruncSeries::zero_in(self.var, self.unit_den, self.order);
        acc.set(0, C::one());
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.try_mul(&base)?;
            }
            n >>= 1;
            if n > 0 {
                base = base.try_mul(&base)?;
            }
        }
        Ok(acc)
    }
}

impl<C: RingWithRationals> TruncSeries<C> {
    /// exp of a series with zero constant term and no negative exponents.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if let Some(k) = self.lowest_key() {
            if k <= 0 {
                return Err(SeriesError::Domain(
                    "exp requires zero constant term and no Laurent part".into(),
                ));
            }
        } else {
            // exp(0) = 1
            let mut one = self.clone();
            one.coeffs.clear();
            one.set(0, C::one());
            return Ok(one);
        }
        let val = self.lowest_key().unwrap();
        let mut out = self.clone();
        out.coeffs.clear();
        out.set(0, C::one());
        let mut term = TruncSeries::constant(C::one()).truncated(self.order);
        term.var = self.var;
        term.unit_den = self.unit_den;
        let mut kfact = Rat::from_integer(BigInt::from(1));
        let mut k: i64 = 0;
        while k * val < self.order {
            if k > 0 {
                term = term.try_mul(self)?;
                kfact *= BigInt::from(k);
                if term.is_zero() {
                    break;
                }
                let inv = C::from_rational(&(Rat::from_integer(BigInt::from(1)) / kfact.clone()));
                out = out.try_add(&term.scale(&inv))?;
            }
            k += 1;
        }
        Ok(out)
    }

    /// log of a series with constant term 1 and no negative exponents.
    pub fn log(&self) -> Result<Self, SeriesError> {
        if self.lowest_key().map_or(true, |k| k != 0) || self.coeff(0) != C::one() {
            return Err(SeriesError::Domain("log requires constant term 1".into()));
        }
        let mut g = self.clone();
        g.set(0, C::zero()); // g = f - 1
        if let Some(k) = g.lowest_key() {
            if k <= 0 {
                return Err(SeriesError::Domain(
                    "log requires no Laurent part below the constant".into(),
                ));
            }
        }
        let mut out = g.clone();
        out.coeffs.clear();
        let val = match g.lowest_key() {
            Some(v) => v,
            None => return Ok(out), // log(1) = 0
        };
        let mut term = TruncSeries::constant(C::one()).truncated(self.order);
        term.var = self.var;
        term.unit_den = self.unit_den;
        let mut k: i64 = 0;
        loop {
            k += 1;
            if (k - 1) * val >= self.order && k > 1 {
                break;
            }
            term = term.try_mul(&g)?;
            if term.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            let c = C::from_rational(&Rat::new(BigInt::from(sign), BigInt::from(k)));
            out = out.try_add(&term.scale(&c))?;
        }
        Ok(out)
    }

    /// Multiplicative inverse of a series with constant term 1.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        if self.lowest_key().map_or(true, |k| k != 0) || self.coeff(0) != C::one() {
            return Err(SeriesError::Domain(
                "inverse requires constant term 1".into(),
            ));
        }
        let mut g = self.neg();
        g.set(0, C::zero()); // g = 1 - f, so 1/f = sum g^k
        let mut out = TruncSeries::zero_in(self.var, self.unit_den, self.order);
        out.set(0, C::one());
        let val = match g.lowest_key() {
            Some(v) => v,
            None => return Ok(out),
        };
        let mut term = out.clone();
        let mut k: i64 = 0;
        while k * val < self.order {
            k += 1;
            term = term.try_mul(&g)?;
            if term.is_zero() {
                break;
            }
            out = out.try_add(&term)?;
        }
        Ok(out)
    }

    /// Substitute `g` (zero constant term, integer-exponent outer series)
    /// for the variable of `self`.
    pub fn compose(&self, g: &Self) -> Result<Self, SeriesError> {
        if self.unit_den != 1 {
            return Err(SeriesError::Structure(
                "composition requires integer exponents in the outer series".into(),
            ));
        }
        if self.coeffs.keys().any(|&k| k < 0) {
            return Err(SeriesError::Structure(
                "composition requires a non-Laurent outer series".into(),
            ));
        }
        if g.coeff(0) != C::zero() || g.lowest_key().map_or(false, |k| k < 0) {
            return Err(SeriesError::Domain(
                "inner series must have zero constant term".into(),
            ));
        }
        // Horner evaluation from the top degree down.
        let top = self.coeffs.keys().next_back().copied().unwrap_or(0);
        let mut acc = TruncSeries::zero_in(g.var, g.unit_den, g.order);
        for k in (0..=top).rev() {
            acc = acc.try_mul(g)?;
            let c = self.coeff(k);
            if !c.is_zero() {
                acc = acc.try_add(&TruncSeries::constant(c))?;
            }
        }
        // keep the frame even when the result is constant
        acc.var = g.var;
        acc.unit_den = g.unit_den;
        acc.order = acc.order.min(g.order);
        Ok(acc)
    }

    /// Termwise derivative d/dx.
    pub fn derivative(&self) -> Self {
        let mut out = TruncSeries::zero_in(self.var, self.unit_den, self.order - 1);
        for (&k, c) in &self.coeffs {
            if k != 0 {
                let factor = Rat::new(BigInt::from(k), BigInt::from(self.unit_den));
                out.set(k - self.unit_den as i64, c.mul(&C::from_rational(&factor)));
            }
        }
        out
    }

    /// Termwise antiderivative with zero constant.
    pub fn integrate(&self) -> Result<Self, SeriesError> {
        let u = self.unit_den as i64;
        let mut out = TruncSeries::zero_in(self.var, self.unit_den, self.order.saturating_add(u));
        for (&k, c) in &self.coeffs {
            if k + u == 0 {
                return Err(SeriesError::Domain(
                    "cannot integrate the 1/x term".into(),
                ));
            }
            let factor = Rat::new(BigInt::from(u), BigInt::from(k + u));
            out.set(k + u, c.mul(&C::from_rational(&factor)));
        }
        Ok(out)
    }
}

/// Binary series arithmetic with structural checking.
pub enum ArithOp {
    Add,
    Mul,
}

/// Checked add/mul entry point.
pub fn series_arith<C: Ring>(
    a: &TruncSeries<C>,
    b: &TruncSeries<C>,
    op: ArithOp,
) -> Result<TruncSeries<C>, SeriesError> {
    match op {
        ArithOp::Add => a.try_add(b),
        ArithOp::Mul => a.try_mul(b),
    }
}

pub enum ExpLogDir {
    Exp,
    Log,
}

pub fn series_exp_log<C: RingWithRationals>(
    f: &TruncSeries<C>,
    dir: ExpLogDir,
) -> Result<TruncSeries<C>, SeriesError> {
    match dir {
        ExpLogDir::Exp => f.exp(),
        ExpLogDir::Log => f.log(),
    }
}

pub fn series_compose<C: RingWithRationals>(
    f: &TruncSeries<C>,
    g: &TruncSeries<C>,
) -> Result<TruncSeries<C>, SeriesError> {
    f.compose(g)
}

impl<C: Ring> Ring for TruncSeries<C> {
    fn zero() -> Self {
        TruncSeries::constant(C::zero())
    }
    fn one() -> Self {
        TruncSeries::constant(C::one())
    }
    fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("series frame mismatch in ring op")
    }
    fn neg(&self) -> Self {
        TruncSeries::neg(self)
    }
    fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("series frame mismatch in ring op")
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<C: RingWithRationals> RingWithRationals for TruncSeries<C> {
    fn from_rational(r: &Rat) -> Self {
        TruncSeries::constant(C::from_rational(r))
    }
}

impl TruncSeries<Rat> {
    /// Exact CSV: `exponent_num,exponent_den,coeff_num,coeff_den` per row.
    pub fn to_csv_exact(&self) -> String {
        let mut out = String::new();
        for (&k, c) in &self.coeffs {
            let g = BigInt::from(k).gcd(&BigInt::from(self.unit_den));
            let en = BigInt::from(k) / &g;
            let ed = BigInt::from(self.unit_den) / &g;
            out.push_str(&format!("{},{},{},{}\n", en, ed, c.numer(), c.denom()));
        }
        out
    }

    /// Numeric CSV: `exponent,coeff_float17` per row.
    pub fn to_csv_f64(&self) -> String {
        let mut out = String::new();
        for (&k, c) in &self.coeffs {
            let e = k as f64 / self.unit_den as f64;
            out.push_str(&format!("{},{:.16e}\n", e, rat_to_f64(c)));
        }
        out
    }

    /// Parse the exact CSV form back into a series in the given frame.
    pub fn from_csv_exact(
        var: Var,
        unit_den: u32,
        order: i64,
        text: &str,
    ) -> Result<Self, SeriesError> {
        let mut s = TruncSeries::zero_in(var, unit_den, order);
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = line.split(',').collect();
            if parts.len() != 4 {
                return Err(SeriesError::Parse(format!(
                    "line {}: expected 4 fields",
                    lineno + 1
                )));
            }
            let en: i64 = parts[0]
                .parse()
                .map_err(|_| SeriesError::Parse(format!("line {}: exponent", lineno + 1)))?;
            let ed: i64 = parts[1]
                .parse()
                .map_err(|_| SeriesError::Parse(format!("line {}: exponent den", lineno + 1)))?;
            if ed <= 0 || (unit_den as i64) % ed != 0 {
                return Err(SeriesError::Parse(format!(
                    "line {}: exponent denominator {} does not divide unit {}",
                    lineno + 1,
                    ed,
                    unit_den
                )));
            }
            let cn = parts[2]
                .parse::<BigInt>()
                .map_err(|_| SeriesError::Parse(format!("line {}: coeff num", lineno + 1)))?;
            let cd = parts[3]
                .parse::<BigInt>()
                .map_err(|_| SeriesError::Parse(format!("line {}: coeff den", lineno + 1)))?;
            if cd.is_zero() {
                return Err(SeriesError::Parse(format!(
                    "line {}: zero denominator",
                    lineno + 1
                )));
            }
            let key = en * (unit_den as i64 / ed);
            s.set(key, Rat::new(cn, cd));
        }
        Ok(s)
    }
}

impl<C: Ring + fmt::Display> fmt::Display for TruncSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&k, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if k == 0 {
                write!(f, "({})", c)?;
            } else if self.unit_den == 1 {
                write!(f, "({})*{}^{}", c, self.var.0, k)?;
            } else {
                write!(f, "({})*{}^({}/{})", c, self.var.0, k, self.unit_den)?;
            }
        }
        Ok(())
    }
}

/// Series in `z` whose coefficients are truncated series in `q`; the two
/// truncation orders are independent.
#[derive(Clone, Debug, PartialEq)]
pub struct BivarSeries {
    pub z_unit_den: u32,
    pub z_order: i64,
    pub q_order: i64,
    /// z-key -> q-series (always truncated at `q_order`)
    pub coeffs: BTreeMap<i64, TruncSeries<Rat>>,
}

impl BivarSeries {
    pub fn zero(z_unit_den: u32, z_order: i64, q_order: i64) -> Self {
        BivarSeries {
            z_unit_den,
            z_order,
            q_order,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant_one(z_unit_den: u32, z_order: i64, q_order: i64) -> Self {
        let mut s = Self::zero(z_unit_den, z_order, q_order);
        s.set(0, TruncSeries::monomial(VAR_Q, 1, 0, Rat::from_integer(1.into()), q_order));
        s
    }

    pub fn set(&mut self, z_key: i64, q: TruncSeries<Rat>) {
        let q = q.truncated(self.q_order);
        if z_key >= self.z_order || q.is_zero() {
            self.coeffs.remove(&z_key);
        } else {
            self.coeffs.insert(z_key, q);
        }
    }

    pub fn coeff(&self, z_key: i64) -> TruncSeries<Rat> {
        self.coeffs
            .get(&z_key)
            .cloned()
            .unwrap_or_else(|| TruncSeries::zero_in(VAR_Q, 1, self.q_order))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.z_unit_den, other.z_unit_den);
        let mut out = Self::zero(
            self.z_unit_den,
            self.z_order.min(other.z_order),
            self.q_order.min(other.q_order),
        );
        let keys: Vec<i64> = self
            .coeffs
            .keys()
            .chain(other.coeffs.keys())
            .copied()
            .collect();
        for k in keys {
            let s = self.coeff(k).try_add(&other.coeff(k)).unwrap();
            out.set(k, s);
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for v in out.coeffs.values_mut() {
            *v = v.neg();
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.z_unit_den, other.z_unit_den);
        let mut out = Self::zero(
            self.z_unit_den,
            self.z_order.min(other.z_order),
            self.q_order.min(other.q_order),
        );
        for (&ka, qa) in &self.coeffs {
            for (&kb, qb) in &other.coeffs {
                let k = ka + kb;
                if k < out.z_order {
                    let prod = qa.try_mul(qb).unwrap();
                    let acc = out.coeff(k).try_add(&prod).unwrap();
                    out.set(k, acc);
                }
            }
        }
        out
    }

    /// Valuation in the mixed grading `z_key + q_key`; None for zero.
    fn mixed_valuation(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .filter_map(|(&k, q)| q.lowest_key().map(|qk| k + qk))
            .min()
    }

    /// exp of a series with no constant term and positive mixed valuation.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if let Some(v) = self.mixed_valuation() {
            if v <= 0 {
                return Err(SeriesError::Domain(
                    "bivariate exp requires positive mixed valuation".into(),
                ));
            }
        }
        let bound = self.z_order + self.q_order;
        let mut out = Self::constant_one(self.z_unit_den, self.z_order, self.q_order);
        let mut term = out.clone();
        let mut kfact = Rat::from_integer(1.into());
        for k in 1..=bound {
            term = term.mul(self);
            if term.coeffs.is_empty() {
                break;
            }
            kfact *= BigInt::from(k);
            let inv = Rat::from_integer(1.into()) / kfact.clone();
            let mut scaled = term.clone();
            for v in scaled.coeffs.values_mut() {
                *v = v.scale(&inv);
            }
            out = out.add(&scaled);
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// First nonzero coefficient in lexicographic (z, q) order, if any.
    pub fn first_term(&self) -> Option<(i64, i64, Rat)> {
        for (&zk, q) in &self.coeffs {
            if let Some(qk) = q.lowest_key() {
                return Some((zk, qk, q.coeff(qk)));
            }
        }
        None
    }
}

pub fn format_series_text(s: &TruncSeries<Rat>) -> String {
    let mut out = String::new();
    for (&k, c) in s.coeffs() {
        if !out.is_empty() {
            out.push_str(" + ");
        }
        let cs = format_rat(c);
        if k == 0 {
            out.push_str(&cs);
        } else if s.unit_den() == 1 {
            out.push_str(&format!("{}*{}^{}", cs, s.var().0, k));
        } else {
            out.push_str(&format!("{}*{}^({}/{})", cs, s.var().0, k, s.unit_den()));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
