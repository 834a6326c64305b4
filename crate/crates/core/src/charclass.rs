//! Multiplicative sequences from even characteristic series, the
//! (x/2)/sinh(x/2) class and its Eisenstein variants, genus evaluation
//! against supplied Pontryagin numbers, and the bivariate identity check
//! that pins the exponent convention of the product formula.
//!
//! Power sums are primary internally (curvature traces are power sums);
//! conversion to the Pontryagin generators happens at the boundary via
//! Newton's identities.

use crate::modular::{
    eisenstein_q_normalized, zeta_ratio_rational, ModExpr, PiGraded, Token, TokenKind,
};
use crate::ring::{rat, rzero, Rat, Ring, RingWithRationals};
use crate::series::{BivarSeries, SeriesError, TruncSeries, VAR_Q, VAR_Z};
use crate::superalg::even::EvenExpr;
use crate::superalg::{Grassmann, GaussRat, Sym};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;
use serde::Deserialize;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClassError {
    #[error("series error: {0}")]
    Series(#[from] SeriesError),
    #[error("input error: {0}")]
    Input(String),
    #[error("convention check failed: {0}")]
    Convention(String),
    #[error("internal consistency: {0}")]
    Internal(String),
}

// ---------------------------------------------------------------------------
// Graded polynomials in generators of degree 4k
// ---------------------------------------------------------------------------

/// Multi-index: sorted descending list of generator indices k (deg 4k).
pub type Partition = Vec<u32>;

pub fn partition_degree(p: &Partition) -> u32 {
    4 * p.iter().sum::<u32>()
}

/// Polynomial in graded generators (either power sums s_k or Pontryagin
/// classes p_k, depending on context), truncated above `cap`.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedPoly<C: Ring> {
    pub cap: u32,
    terms: BTreeMap<Partition, C>,
}

impl<C: Ring> GradedPoly<C> {
    pub fn zero(cap: u32) -> Self {
        GradedPoly {
            cap,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(cap: u32) -> Self {
        let mut p = Self::zero(cap);
        p.set(Vec::new(), C::one());
        p
    }

    pub fn generator(k: u32, cap: u32) -> Self {
        let mut p = Self::zero(cap);
        p.set(vec![k], C::one());
        p
    }

    pub fn set(&mut self, mut part: Partition, c: C) {
        part.sort_unstable_by(|a, b| b.cmp(a));
        if partition_degree(&part) > self.cap || c.is_zero() {
            self.terms.remove(&part);
        } else {
            self.terms.insert(part, c);
        }
    }

    pub fn coeff(&self, part: &Partition) -> C {
        let mut p = part.clone();
        p.sort_unstable_by(|a, b| b.cmp(a));
        self.terms.get(&p).cloned().unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> &BTreeMap<Partition, C> {
        &self.terms
    }

    pub fn add(&self, other: &Self) -> Self {
        let cap = self.cap.min(other.cap);
        let mut out = Self::zero(cap);
        for (p, c) in self.terms.iter().chain(other.terms.iter()) {
            if partition_degree(p) <= cap {
                let acc = out.coeff(p).add(c);
                out.set(p.clone(), acc);
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        GradedPoly {
            cap: self.cap,
            terms: self
                .terms
                .iter()
                .map(|(p, c)| (p.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let cap = self.cap.min(other.cap);
        let mut out = Self::zero(cap);
        for (pa, ca) in &self.terms {
            for (pb, cb) in &other.terms {
                let mut p = pa.clone();
                p.extend_from_slice(pb);
                p.sort_unstable_by(|a, b| b.cmp(a));
                if partition_degree(&p) <= cap {
                    let acc = out.coeff(&p).add(&ca.mul(cb));
                    out.set(p, acc);
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.cap);
        for (p, v) in &self.terms {
            out.set(p.clone(), v.mul(c));
        }
        out
    }

    /// exp of a polynomial with no constant term (nilpotent above cap).
    pub fn exp(&self) -> Self
    where
        C: RingWithRationals,
    {
        assert!(self.coeff(&Vec::new()).is_zero());
        let mut out = Self::one(self.cap);
        let mut term = Self::one(self.cap);
        let mut kfact = Rat::from_integer(BigInt::from(1));
        for k in 1..=(self.cap / 4).max(1) {
            term = term.mul(self);
            if term.terms.is_empty() {
                break;
            }
            kfact *= BigInt::from(k);
            let inv = C::from_rational(&(Rat::from_integer(BigInt::from(1)) / kfact.clone()));
            out = out.add(&term.scale(&inv));
        }
        out
    }

    /// Keep only the component of total degree `deg`.
    pub fn component(&self, deg: u32) -> Self {
        let mut out = Self::zero(self.cap);
        for (p, c) in &self.terms {
            if partition_degree(p) == deg {
                out.set(p.clone(), c.clone());
            }
        }
        out
    }

    pub fn map_coeffs<D: Ring>(&self, f: impl Fn(&C) -> D) -> GradedPoly<D> {
        let mut out = GradedPoly::zero(self.cap);
        for (p, c) in &self.terms {
            out.set(p.clone(), f(c));
        }
        out
    }

    /// Substitute a polynomial for each generator.
    pub fn substitute(&self, images: &dyn Fn(u32) -> GradedPoly<C>) -> GradedPoly<C> {
        let mut out = GradedPoly::zero(self.cap);
        for (p, c) in &self.terms {
            let mut term = GradedPoly::one(self.cap);
            for &k in p {
                term = term.mul(&images(k));
            }
            out = out.add(&term.scale(c));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<C: Ring + fmt::Display> GradedPoly<C> {
    pub fn render(&self, gen_name: &str) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (p, c) in &self.terms {
            let mut s = format!("({})", c);
            let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
            for &k in p {
                *counts.entry(k).or_insert(0) += 1;
            }
            for (k, e) in counts {
                if e == 1 {
                    s.push_str(&format!("*{}{}", gen_name, k));
                } else {
                    s.push_str(&format!("*{}{}^{}", gen_name, k, e));
                }
            }
            parts.push(s);
        }
        parts.join(" + ")
    }
}

/// Polynomial in the Pontryagin generators p_k.
pub type PontryaginPoly<C> = GradedPoly<C>;

/// s_k expressed in the p_i via Newton's identities:
/// s_k = p1 s_{k-1} - p2 s_{k-2} + ... + (-1)^{k-1} k p_k.
pub fn power_sum_in_p(k: u32, cap: u32) -> GradedPoly<Rat> {
    let mut table: Vec<GradedPoly<Rat>> = vec![GradedPoly::one(cap)];
    for kk in 1..=k {
        let mut acc = GradedPoly::zero(cap);
        for i in 1..kk {
            let sign = if i % 2 == 1 { 1 } else { -1 };
            let term = GradedPoly::generator(i, cap)
                .mul(&table[(kk - i) as usize])
                .scale(&rat(sign, 1));
            acc = acc.add(&term);
        }
        let sign = if kk % 2 == 1 { 1 } else { -1 };
        acc = acc.add(&GradedPoly::generator(kk, cap).scale(&rat(sign * kk as i64, 1)));
        table.push(acc);
    }
    table[k as usize].clone()
}

/// p_k expressed in the s_i (inverse Newton conversion).
pub fn pontryagin_in_s(k: u32, cap: u32) -> GradedPoly<Rat> {
    let mut table: Vec<GradedPoly<Rat>> = vec![GradedPoly::one(cap)];
    for kk in 1..=k {
        // kk * p_kk = sum_{i=1}^{kk} (-1)^{i-1} p_{kk-i} s_i
        let mut acc = GradedPoly::zero(cap);
        for i in 1..=kk {
            let sign = if i % 2 == 1 { 1 } else { -1 };
            let term = table[(kk - i) as usize]
                .mul(&GradedPoly::generator(i, cap))
                .scale(&rat(sign, 1));
            acc = acc.add(&term);
        }
        table.push(acc.scale(&rat(1, kk as i64)));
    }
    table[k as usize].clone()
}

/// Convert a power-sum polynomial into the Pontryagin generators.
pub fn s_poly_to_p<C: RingWithRationals>(poly: &GradedPoly<C>) -> PontryaginPoly<C> {
    poly.substitute(&|k| power_sum_in_p(k, poly.cap).map_coeffs(|r| C::from_rational(r)))
}

// ---------------------------------------------------------------------------
// Characteristic series and multiplicative classes
// ---------------------------------------------------------------------------

/// Even characteristic series in exponential form: the class of a single
/// root is `Q(x) = exp(sum_k a_{2k} x^{2k})`.
#[derive(Clone, Debug, PartialEq)]
pub struct CharSeries<C: Ring> {
    /// k -> a_{2k}
    pub exponent_coeffs: BTreeMap<u32, C>,
}

impl<C: RingWithRationals> CharSeries<C> {
    /// The z-expansion of a single factor exp(sum a_{2k} z^{2k}).
    pub fn factor_series(&self, z_order: i64) -> Result<TruncSeries<C>, SeriesError> {
        let mut arg = TruncSeries::zero_in(VAR_Z, 1, z_order);
        for (&k, a) in &self.exponent_coeffs {
            if (2 * k as i64) < z_order {
                arg.set(2 * k as i64, a.clone());
            }
        }
        arg.exp()
    }
}

/// Expand `prod_j Q(x_j)` to a Pontryagin polynomial truncated at form
/// degree `dim`.
pub fn multiplicative_class<C: RingWithRationals>(
    series: &CharSeries<C>,
    dim: u32,
) -> PontryaginPoly<C> {
    s_poly_to_p(&multiplicative_class_power_sums(series, dim))
}

/// Same expansion left in power sums (the internal normal form).
pub fn multiplicative_class_power_sums<C: RingWithRationals>(
    series: &CharSeries<C>,
    dim: u32,
) -> GradedPoly<C> {
    let mut arg = GradedPoly::zero(dim);
    for (&k, a) in &series.exponent_coeffs {
        if 4 * k <= dim {
            arg = arg.add(&GradedPoly::generator(k, dim).scale(a));
        }
    }
    arg.exp()
}

/// The characteristic series of (x/2)/sinh(x/2), in both closed product
/// form and exponential form; the two are asserted equal coefficientwise.
pub struct AhatSeries {
    pub series: CharSeries<Rat>,
    /// the z-expansion of (z/2)/sinh(z/2)
    pub product_form: TruncSeries<Rat>,
}

/// Exponent coefficients a_{2k} = 2 zeta(2k) / (2k (2 pi i)^{2k}) =
/// -B_{2k}/(2k (2k)!), compared exactly against long division of the
/// sinh series.
pub fn ahat_series(z_order: i64) -> Result<AhatSeries, ClassError> {
    if z_order < 2 {
        return Err(ClassError::Input("z_order must be >= 2".into()));
    }
    let mut exponent_coeffs = BTreeMap::new();
    for k in 1..=(z_order as u32) / 2 {
        exponent_coeffs.insert(k, zeta_ratio_rational(k));
    }
    let series = CharSeries { exponent_coeffs };
    // product form: reciprocal of sinh(z/2)/(z/2) = sum (z/2)^{2k}/(2k+1)!
    let mut sinh_over = TruncSeries::zero_in(VAR_Z, 1, z_order);
    for k in 0..=(z_order as u64) / 2 {
        let denom = crate::ring::factorial(2 * k + 1) * BigInt::from(2).pow(2 * k as u32);
        sinh_over.set(2 * k as i64, Rat::new(BigInt::from(1), denom));
    }
    let product_form = sinh_over.inverse()?;
    let exp_form = series.factor_series(z_order)?;
    if exp_form != product_form {
        return Err(ClassError::Internal(
            "product and exponential forms of the sinh series disagree".into(),
        ));
    }
    Ok(AhatSeries {
        series,
        product_form,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WittenVariant {
    /// every k >= 1 with the holomorphic q-expansion
    Holo,
    /// the k = 1 term carries the modular non-holomorphic regularization
    NonHolo,
    /// the k = 1 term is omitted (requires a rational string structure)
    String,
}

/// Witten characteristic series with exact q-series exponent data:
/// a_{2k}(q) = -B_{2k}/(2k (2k)!) * E_{2k}^{normalized}(q). Only the
/// `Holo` and `String` variants have plain q-series coefficients.
pub fn witten_series_q(
    variant: WittenVariant,
    z_order: i64,
    q_order: i64,
) -> Result<CharSeries<TruncSeries<Rat>>, ClassError> {
    if z_order < 2 || q_order < 2 {
        return Err(ClassError::Input("orders must be >= 2".into()));
    }
    if matches!(variant, WittenVariant::NonHolo) {
        return Err(ClassError::Input(
            "the k = 1 term of the non-holomorphic variant is a token, not a q-series".into(),
        ));
    }
    let mut exponent_coeffs = BTreeMap::new();
    let k_lo = match variant {
        WittenVariant::String => 2,
        _ => 1,
    };
    for k in k_lo..=(z_order as u32) / 2 {
        let e = eisenstein_q_normalized(k, q_order)?;
        exponent_coeffs.insert(k, e.scale(&zeta_ratio_rational(k)));
    }
    Ok(CharSeries { exponent_coeffs })
}

/// Witten series in the token ring: a_{2k} = E-token_k / (2k (2 pi i)^{2k})
/// with the k = 1 token E2* (NonHolo), E2 (Holo) or absent (String).
pub fn witten_series_tokens(variant: WittenVariant, z_order: i64) -> CharSeries<ModExpr> {
    let mut exponent_coeffs = BTreeMap::new();
    for k in 1..=(z_order as u32) / 2 {
        let token = match (k, variant) {
            (1, WittenVariant::String) => continue,
            (1, WittenVariant::NonHolo) => Token::new(TokenKind::E2Star),
            (1, WittenVariant::Holo) => Token::new(TokenKind::E2),
            (_, _) => Token::new(TokenKind::E2k(k)),
        };
        exponent_coeffs.insert(k, ModExpr::term(vec![(token, 1)], eisenstein_prefactor(k)));
    }
    CharSeries { exponent_coeffs }
}

/// 1/(2k (2 pi i)^{2k}) as an exact pi-graded rational.
pub fn eisenstein_prefactor(k: u32) -> PiGraded {
    let sign = if k % 2 == 0 { 1 } else { -1 };
    let denom = BigInt::from(2 * k as i64) * BigInt::from(2).pow(2 * k);
    PiGraded::from_term(-2 * (k as i32), Rat::new(BigInt::from(sign), denom))
}

// ---------------------------------------------------------------------------
// The bivariate identity check
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExponentConvention {
    /// factors (1 - q^n e^{+-z/2}) as printed
    HalfExponent,
    /// factors (1 - q^n e^{+-z}) as in the classical sigma-function product
    FullExponent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignConvention {
    /// product = z * exp(+ sum)
    Direct,
    /// product = z * exp(- sum) (the product is the reciprocal)
    Reciprocal,
}

impl fmt::Display for ExponentConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExponentConvention::HalfExponent => write!(f, "half-exponent"),
            ExponentConvention::FullExponent => write!(f, "full-exponent"),
        }
    }
}

impl fmt::Display for SignConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignConvention::Direct => write!(f, "direct"),
            SignConvention::Reciprocal => write!(f, "reciprocal"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ZagierReport {
    pub resolved: (ExponentConvention, SignConvention),
    /// max |coefficient difference| under the resolved convention (0)
    pub max_discrepancy: Rat,
    /// first mismatching (z-exp, q-exp, difference) per failed convention
    pub failures: Vec<((ExponentConvention, SignConvention), (i64, i64, Rat))>,
}

/// Expand both sides of the sinh-product identity with exact rational
/// coefficients under all four conventions and report which matches.
pub fn zagier_identity_check(z_order: i64, q_order: i64) -> Result<ZagierReport, ClassError> {
    if z_order < 4 || q_order < 4 {
        return Err(ClassError::Input("orders must be >= 4".into()));
    }
    // exponent sum S = sum_k c_k E2k_norm(q) z^{2k},
    // c_k = 2 zeta(2k)/(2k (2 pi i)^{2k}) exactly rational
    let mut s = BivarSeries::zero(1, z_order, q_order);
    for k in 1..=(z_order as u32 - 1) / 2 {
        let e = eisenstein_q_normalized(k, q_order)?.scale(&zeta_ratio_rational(k));
        s.set(2 * k as i64, e);
    }
    let exp_plus = s.exp()?;
    let exp_minus = s.neg().exp()?;

    let mut resolved = None;
    let mut failures = Vec::new();
    for conv in [
        ExponentConvention::HalfExponent,
        ExponentConvention::FullExponent,
    ] {
        let product = product_side(conv, z_order, q_order)?;
        for sign in [SignConvention::Direct, SignConvention::Reciprocal] {
            let e = match sign {
                SignConvention::Direct => &exp_plus,
                SignConvention::Reciprocal => &exp_minus,
            };
            // compare product against z * exp(sign * S)
            let mut z_times = BivarSeries::zero(1, z_order, q_order);
            for (&zk, q) in &e.coeffs {
                if zk + 1 < z_order {
                    z_times.set(zk + 1, q.clone());
                }
            }
            let diff = product.add(&z_times.neg());
            match diff.first_term() {
                None => {
                    if resolved.is_none() {
                        resolved = Some((conv, sign));
                    }
                }
                Some((zk, qk, c)) => failures.push(((conv, sign), (zk, qk, c))),
            }
        }
    }
    match resolved {
        Some(r) => Ok(ZagierReport {
            resolved: r,
            max_discrepancy: rzero(),
            failures,
        }),
        None => {
            let first = failures
                .first()
                .map(|(_, (zk, qk, c))| format!("z^{} q^{} differs by {}", zk, qk, c))
                .unwrap_or_default();
            Err(ClassError::Convention(format!(
                "no exponent/sign convention reconciles the product and exponential sides; \
                 first mismatch {}",
                first
            )))
        }
    }
}

/// `(e^{z/2} - e^{-z/2}) prod_n (1 - q^n e^{s z})(1 - q^n e^{-s z})/(1-q^n)^2`.
fn product_side(
    conv: ExponentConvention,
    z_order: i64,
    q_order: i64,
) -> Result<BivarSeries, ClassError> {
    let one = || Rat::from_integer(BigInt::from(1));
    // e^{(num/den) z} truncated in z
    let expz = |num: i64, den: i64| -> BivarSeries {
        let mut out = BivarSeries::zero(1, z_order, q_order);
        let mut c = one();
        for j in 0..z_order {
            if j > 0 {
                c = c * rat(num, den) / Rat::from_integer(BigInt::from(j));
            }
            out.set(j, TruncSeries::monomial(VAR_Q, 1, 0, c.clone(), q_order));
        }
        out
    };
    let mut p = expz(1, 2).add(&expz(-1, 2).neg());
    let (num, den) = match conv {
        ExponentConvention::HalfExponent => (1, 2),
        ExponentConvention::FullExponent => (1, 1),
    };
    let e_pos = expz(num, den);
    let e_neg = expz(-num, den);
    for n in 1..q_order {
        let qn = TruncSeries::monomial(VAR_Q, 1, n, one(), q_order);
        let mut f1 = BivarSeries::constant_one(1, z_order, q_order);
        for (&zk, qs) in &e_pos.coeffs {
            let prod = qn.try_mul(qs)?;
            f1.set(zk, f1.coeff(zk).sub(&prod)?);
        }
        let mut f2 = BivarSeries::constant_one(1, z_order, q_order);
        for (&zk, qs) in &e_neg.coeffs {
            let prod = qn.try_mul(qs)?;
            f2.set(zk, f2.coeff(zk).sub(&prod)?);
        }
        // 1/(1-q^n)^2 lifted to the bivariate ring
        let mut one_minus = TruncSeries::zero_in(VAR_Q, 1, q_order);
        one_minus.set(0, one());
        one_minus.set(n, -one());
        let inv2 = one_minus.inverse()?.pow(2)?;
        let mut denom = BivarSeries::zero(1, z_order, q_order);
        denom.set(0, inv2);
        p = p.mul(&f1).mul(&f2).mul(&denom);
    }
    Ok(p)
}

// ---------------------------------------------------------------------------
// Manifold data and genus evaluation
// ---------------------------------------------------------------------------

/// Description of the input manifold: dimension, Pontryagin numbers by
/// partition, and whether a rational string structure exists.
#[derive(Clone, Debug, PartialEq)]
pub struct ManifoldData {
    pub name: String,
    pub dim: u32,
    pub pontryagin_numbers: BTreeMap<Partition, Rat>,
    pub rational_string: bool,
}

#[derive(Deserialize)]
struct ManifoldFile {
    name: String,
    dim: u32,
    #[serde(default)]
    pontryagin_numbers: BTreeMap<String, i64>,
    #[serde(default)]
    rational_string: bool,
}

impl ManifoldData {
    pub fn from_json(text: &str) -> Result<Self, ClassError> {
        let raw: ManifoldFile = serde_json::from_str(text)
            .map_err(|e| ClassError::Input(format!("manifold file: {}", e)))?;
        let mut pontryagin_numbers = BTreeMap::new();
        for (key, value) in raw.pontryagin_numbers {
            let part = parse_partition(&key)
                .ok_or_else(|| ClassError::Input(format!("bad Pontryagin key '{}'", key)))?;
            pontryagin_numbers.insert(part, Rat::from_integer(BigInt::from(value)));
        }
        let m = ManifoldData {
            name: raw.name,
            dim: raw.dim,
            pontryagin_numbers,
            rational_string: raw.rational_string,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<(), ClassError> {
        for part in self.pontryagin_numbers.keys() {
            if partition_degree(part) != self.dim {
                return Err(ClassError::Input(format!(
                    "Pontryagin partition {:?} has degree {}, manifold dimension is {}",
                    part,
                    partition_degree(part),
                    self.dim
                )));
            }
        }
        if self.dim == 4 && self.rational_string {
            if let Some(v) = self.pontryagin_numbers.get(&vec![1]) {
                if !Zero::is_zero(v) {
                    return Err(ClassError::Input(
                        "rational string flag requires vanishing p1-number in dimension 4".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Parse "p1", "p2", "p1.p1" into a partition.
fn parse_partition(key: &str) -> Option<Partition> {
    let mut part = Vec::new();
    for piece in key.split('.') {
        let rest = piece.trim().strip_prefix('p')?;
        let k: u32 = rest.parse().ok()?;
        if k == 0 {
            return None;
        }
        part.push(k);
    }
    part.sort_unstable_by(|a, b| b.cmp(a));
    Some(part)
}

/// Scalar resulting from pairing a class against the fundamental class.
#[derive(Clone, Debug, PartialEq)]
pub struct GenusValue<C: Ring> {
    pub value: C,
    pub dim: u32,
}

/// Pair the top-degree part of the class against the supplied Pontryagin
/// numbers; lower degree terms contribute nothing, and in dimension 0 the
/// constant term survives.
pub fn genus_evaluate<C: RingWithRationals>(
    class: &PontryaginPoly<C>,
    m: &ManifoldData,
) -> Result<GenusValue<C>, ClassError> {
    if m.dim == 0 {
        return Ok(GenusValue {
            value: class.coeff(&Vec::new()),
            dim: 0,
        });
    }
    let mut acc = C::zero();
    if m.dim % 4 == 0 {
        for (part, c) in class.terms() {
            if partition_degree(part) != m.dim {
                continue;
            }
            let number = m.pontryagin_numbers.get(part).ok_or_else(|| {
                ClassError::Input(format!(
                    "missing Pontryagin number for partition {:?} of '{}'",
                    part, m.name
                ))
            })?;
            acc = acc.add(&c.mul(&C::from_rational(number)));
        }
    }
    Ok(GenusValue {
        value: acc,
        dim: m.dim,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexWeight {
    Ahat,
    WittenString,
}

#[derive(Clone, Debug)]
pub enum IndexValue {
    Rational(Rat),
    QSeries(TruncSeries<Rat>),
}

/// `genus_evaluate(x * class(weight), m)`; the string-Witten weight
/// refuses inputs without a rational string structure.
pub fn index_pushforward(
    x: &PontryaginPoly<Rat>,
    m: &ManifoldData,
    weight: IndexWeight,
    q_order: i64,
) -> Result<IndexValue, ClassError> {
    m.validate()?;
    match weight {
        IndexWeight::Ahat => {
            let class = multiplicative_class(&ahat_series(m.dim as i64 + 2)?.series, m.dim);
            let v = genus_evaluate(&class.mul(x), m)?;
            Ok(IndexValue::Rational(v.value))
        }
        IndexWeight::WittenString => {
            if !m.rational_string {
                return Err(ClassError::Input(format!(
                    "'{}' has no rational string structure: this type of volume form \
                     fails to exist without one",
                    m.name
                )));
            }
            let series = witten_series_q(WittenVariant::String, m.dim as i64 + 2, q_order)?;
            let class = multiplicative_class(&series, m.dim);
            let xq = x.map_coeffs(|r| TruncSeries::<Rat>::constant(r.clone()).truncated(q_order));
            let v = genus_evaluate(&class.mul(&xq), m)?;
            Ok(IndexValue::QSeries(v.value))
        }
    }
}

// ---------------------------------------------------------------------------
// Chern character sections and the KO degree filter
// ---------------------------------------------------------------------------

/// Holonomy section of a vector bundle along the super circles: for a
/// skew curvature 2-form matrix F this is Tr exp(-i r F), with the
/// normalized image Tr exp(F / 2 pi i).
pub struct ChernSection {
    /// terms (j, 2j-form): the coefficient of r^j
    pub terms: Vec<(u32, Grassmann)>,
    /// the normalized class with exact (2 pi)^{-j} coefficients
    pub normalized: Grassmann,
}

/// Formal variant: `f` is a skew matrix of 2-forms over R^dim.
pub fn chern_character_section_formal(
    f: &[Vec<Grassmann>],
    dim: usize,
) -> Result<ChernSection, ClassError> {
    let n = f.len();
    if f.iter().any(|row| row.len() != n) {
        return Err(ClassError::Input("curvature matrix is not square".into()));
    }
    for i in 0..n {
        for j in 0..n {
            if !f[i][j].add(&f[j][i]).is_zero() {
                return Err(ClassError::Input("curvature matrix is not skew".into()));
            }
        }
    }
    let cap = dim as u32;
    let mut terms = Vec::new();
    let mut normalized = Grassmann::zero();
    let mut power: Vec<Vec<Grassmann>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Grassmann::one() } else { Grassmann::zero() })
                .collect()
        })
        .collect();
    let mut jfact = Rat::from_integer(BigInt::from(1));
    for j in 0..=(cap / 2) {
        if j > 0 {
            let mut next = vec![vec![Grassmann::zero(); n]; n];
            #[allow(clippy::needless_range_loop)]
            for a in 0..n {
                for b in 0..n {
                    let mut acc = Grassmann::zero();
                    for c in 0..n {
                        acc = acc.add(&power[a][c].mul(&f[c][b]));
                    }
                    next[a][b] = acc;
                }
            }
            power = next;
            jfact *= BigInt::from(j);
        }
        let mut trace = Grassmann::zero();
        for (a, row) in power.iter().enumerate() {
            trace = trace.add(&row[a]);
        }
        if trace.is_zero() {
            continue;
        }
        // (-i)^j / j! * r^j
        let mut c = EvenExpr::rational(Rat::from_integer(BigInt::from(1)) / jfact.clone());
        for _ in 0..j {
            c = c.mul(&EvenExpr::i().neg());
        }
        c = c.mul(&EvenExpr::sym_pow(Sym::R, 2 * j as i16));
        terms.push((j, trace.scale(&c)));
        // normalized term: Tr(F^j) (-i)^j / (j! (2 pi)^j)
        let mut cn = EvenExpr::rational(Rat::from_integer(BigInt::from(1)) / jfact.clone());
        for _ in 0..j {
            cn = cn.mul(&EvenExpr::i().neg());
            cn = cn.mul(&EvenExpr::monomial(
                crate::superalg::even::Mono::with(Sym::Pi, -2),
                GaussRat::from_rat(rat(1, 2)),
            ));
        }
        normalized = normalized.add(&trace.scale(&cn));
    }
    Ok(ChernSection { terms, normalized })
}

/// Numeric variant: Tr exp(-i r F) for a real skew matrix at a given
/// radius, with the spectral convention that an eigenvalue pair
/// (+i theta, -i theta) contributes e^{+i r theta} + e^{-i r theta};
/// a 2x2 block of angle theta therefore yields 2 cos(r theta). This is
/// the trace of the rotation exp(r F), computed by scaling-and-squaring.
pub fn chern_character_numeric(f: &[Vec<f64>], r: f64) -> Result<Complex64, ClassError> {
    let n = f.len();
    if f.iter().any(|row| row.len() != n) {
        return Err(ClassError::Input("curvature matrix is not square".into()));
    }
    for i in 0..n {
        for j in 0..n {
            if (f[i][j] + f[j][i]).abs() > 1e-12 {
                return Err(ClassError::Input("curvature matrix is not skew".into()));
            }
        }
    }
    let a: Vec<Vec<Complex64>> = f
        .iter()
        .map(|row| row.iter().map(|&x| Complex64::new(r * x, 0.0)).collect())
        .collect();
    let e = matrix_exp(&a);
    Ok((0..n).map(|i| e[i][i]).sum())
}

fn matrix_exp(a: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let n = a.len();
    let norm: f64 = a
        .iter()
        .map(|row| row.iter().map(|c| c.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let s = (norm.max(1.0).log2().ceil()) as u32 + 1;
    let scale = 2f64.powi(-(s as i32));
    let b: Vec<Vec<Complex64>> = a
        .iter()
        .map(|row| row.iter().map(|c| c * scale).collect())
        .collect();
    let mut result = identity(n);
    let mut term = identity(n);
    for k in 1..=20 {
        term = mat_mul(&term, &b);
        for row in term.iter_mut() {
            for c in row.iter_mut() {
                *c /= k as f64;
            }
        }
        result = mat_add(&result, &term);
    }
    for _ in 0..s {
        result = mat_mul(&result, &result);
    }
    result
}

fn identity(n: usize) -> Vec<Vec<Complex64>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect()
        })
        .collect()
}

fn mat_mul(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let n = a.len();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    #[allow(clippy::needless_range_loop)]
    for i in 0..n {
        for j in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                acc += a[i][k] * b[k][j];
            }
            out[i][j] = acc;
        }
    }
    out
}

fn mat_add(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y).collect())
        .collect()
}

/// Keep exactly the components of degree congruent to l mod 4.
pub fn ko_degree_filter<T: Clone>(graded: &[(u32, T)], l: u32) -> Vec<(u32, T)> {
    graded
        .iter()
        .filter(|(d, _)| d % 4 == l % 4)
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rone;
    use crate::superalg::OddGen;

    #[test]
    fn newton_small_cases() {
        let cap = 16;
        let s1 = power_sum_in_p(1, cap);
        assert_eq!(s1.coeff(&vec![1]), rone());
        let s2 = power_sum_in_p(2, cap);
        assert_eq!(s2.coeff(&vec![1, 1]), rone());
        assert_eq!(s2.coeff(&vec![2]), rat(-2, 1));
        let s3 = power_sum_in_p(3, cap);
        assert_eq!(s3.coeff(&vec![1, 1, 1]), rone());
        assert_eq!(s3.coeff(&vec![2, 1]), rat(-3, 1));
        assert_eq!(s3.coeff(&vec![3]), rat(3, 1));
    }

    #[test]
    fn newton_roundtrip() {
        let cap = 24;
        for k in 1..=6u32 {
            let p_in_s = pontryagin_in_s(k, cap);
            let back = p_in_s.substitute(&|i| power_sum_in_p(i, cap));
            let mut expect = GradedPoly::zero(cap);
            expect.set(vec![k], rone());
            assert_eq!(back, expect, "p({}) roundtrip", k);
            let s_in_p = power_sum_in_p(k, cap);
            let back = s_in_p.substitute(&|i| pontryagin_in_s(i, cap));
            let mut expect = GradedPoly::zero(cap);
            expect.set(vec![k], rone());
            assert_eq!(back, expect, "s({}) roundtrip", k);
        }
    }

    #[test]
    fn trivial_series_gives_one() {
        let series = CharSeries::<Rat> {
            exponent_coeffs: BTreeMap::new(),
        };
        let class = multiplicative_class(&series, 12);
        assert_eq!(class, GradedPoly::one(12));
    }

    #[test]
    fn ahat_dim4_and_dim8() {
        let a = ahat_series(14).unwrap();
        assert_eq!(a.series.exponent_coeffs[&1], rat(-1, 24));
        assert_eq!(a.product_form.coeff(4), Rat::new(7.into(), 5760.into()));
        let class4 = multiplicative_class(&a.series, 4);
        assert_eq!(class4.coeff(&vec![1]), rat(-1, 24));
        let class8 = multiplicative_class(&a.series, 8);
        assert_eq!(class8.coeff(&vec![1, 1]), Rat::new(7.into(), 5760.into()));
        assert_eq!(
            class8.coeff(&vec![2]),
            Rat::new(BigInt::from(-4), 5760.into())
        );
    }

    #[test]
    fn ahat_exp_and_product_agree_through_z12() {
        assert!(ahat_series(13).is_ok());
    }

    /// Brute-force oracle: polynomials in the squared Chern roots y_j =
    /// x_j^2, exponent vectors over at most 3 roots.
    #[derive(Clone, Debug, PartialEq)]
    struct RootPoly {
        cap: u32, // max total y-degree
        terms: BTreeMap<[u8; 3], Rat>,
    }

    impl RootPoly {
        fn zero(cap: u32) -> Self {
            RootPoly {
                cap,
                terms: BTreeMap::new(),
            }
        }
        fn one(cap: u32) -> Self {
            let mut p = Self::zero(cap);
            p.terms.insert([0; 3], rone());
            p
        }
        fn set(&mut self, e: [u8; 3], c: Rat) {
            if (e.iter().map(|&x| x as u32).sum::<u32>()) > self.cap || Zero::is_zero(&c) {
                self.terms.remove(&e);
            } else {
                self.terms.insert(e, c);
            }
        }
        fn add(&self, o: &Self) -> Self {
            let mut out = Self::zero(self.cap);
            for (e, c) in self.terms.iter().chain(o.terms.iter()) {
                let acc = out.terms.get(e).cloned().unwrap_or_else(rzero) + c;
                out.set(*e, acc);
            }
            out
        }
        fn mul(&self, o: &Self) -> Self {
            let mut out = Self::zero(self.cap);
            for (ea, ca) in &self.terms {
                for (eb, cb) in &o.terms {
                    let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                    if (e.iter().map(|&x| x as u32).sum::<u32>()) <= self.cap {
                        let acc = out.terms.get(&e).cloned().unwrap_or_else(rzero) + ca * cb;
                        out.set(e, acc);
                    }
                }
            }
            out
        }
    }

    /// elementary symmetric e_k of the first m squared roots
    fn elem_sym(k: u32, m: usize, cap: u32) -> RootPoly {
        let mut out = RootPoly::zero(cap);
        // iterate over k-subsets of 0..m
        fn rec(
            out: &mut RootPoly,
            start: usize,
            left: u32,
            m: usize,
            current: [u8; 3],
        ) {
            if left == 0 {
                let acc = out.terms.get(&current).cloned().unwrap_or_else(rzero) + rone();
                out.set(current, acc);
                return;
            }
            for j in start..m {
                let mut next = current;
                next[j] += 1;
                rec(out, j + 1, left - 1, m, next);
            }
        }
        rec(&mut out, 0, k, m, [0; 3]);
        out
    }

    fn eval_class_at_roots(class: &PontryaginPoly<Rat>, m: usize) -> RootPoly {
        let cap = class.cap / 4;
        let mut out = RootPoly::zero(cap);
        for (part, c) in class.terms() {
            let mut term = RootPoly::one(cap);
            for &k in part {
                term = term.mul(&elem_sym(k, m, cap));
            }
            let mut scaled = RootPoly::zero(cap);
            for (e, v) in &term.terms {
                scaled.set(*e, v * c);
            }
            out = out.add(&scaled);
        }
        out
    }

    fn root_product(series: &CharSeries<Rat>, roots: &[usize], dim: u32) -> RootPoly {
        let cap = dim / 4;
        let factor = series.factor_series(dim as i64 + 1).unwrap();
        let mut out = RootPoly::one(cap);
        for &j in roots {
            let mut f = RootPoly::zero(cap);
            for (&zk, c) in factor.coeffs() {
                assert!(zk % 2 == 0);
                let mut e = [0u8; 3];
                e[j] = (zk / 2) as u8;
                if (zk / 2) as u32 <= cap {
                    f.set(e, c.clone());
                }
            }
            out = out.mul(&f);
        }
        out
    }

    #[test]
    fn class_matches_root_oracle() {
        // expand via power sums + Newton, then compare against the direct
        // product over explicit Chern roots
        let a = ahat_series(14).unwrap();
        for (m, dim) in [(1usize, 4u32), (2, 8), (3, 12)] {
            let class = multiplicative_class(&a.series, dim);
            let ours = eval_class_at_roots(&class, m);
            let oracle = root_product(&a.series, &(0..m).collect::<Vec<_>>(), dim);
            assert_eq!(ours, oracle, "m={} dim={}", m, dim);
        }
    }

    #[test]
    fn whitney_multiplicativity_brute_force() {
        // class(A (+) B) = class(A) class(B) on explicit roots {0,1} and {2}
        let a = ahat_series(14).unwrap();
        let dim = 12u32;
        let class = multiplicative_class(&a.series, dim);
        let total = eval_class_at_roots(&class, 3);
        let left = root_product(&a.series, &[0, 1], dim);
        let right = root_product(&a.series, &[2], dim);
        assert_eq!(total, left.mul(&right));
    }

    #[test]
    fn witten_q0_specializes_to_ahat() {
        let w = witten_series_q(WittenVariant::Holo, 26, 8).unwrap();
        let a = ahat_series(26).unwrap();
        for (k, series) in &w.exponent_coeffs {
            assert_eq!(series.coeff(0), a.series.exponent_coeffs[k]);
        }
        let s = witten_series_q(WittenVariant::String, 8, 8).unwrap();
        assert!(!s.exponent_coeffs.contains_key(&1));
        assert!(s.exponent_coeffs.contains_key(&2));
        assert!(witten_series_q(WittenVariant::NonHolo, 8, 8).is_err());
    }

    #[test]
    fn witten_class_q0_equals_ahat_class_through_dim12() {
        let w = witten_series_q(WittenVariant::Holo, 14, 6).unwrap();
        let a = ahat_series(14).unwrap();
        for dim in [4u32, 8, 12] {
            let wc = multiplicative_class(&w, dim);
            let ac = multiplicative_class(&a.series, dim);
            let wc0 = wc.map_coeffs(|s| s.coeff(0));
            assert_eq!(wc0, ac, "dim {}", dim);
        }
    }

    #[test]
    fn witten_token_series_shapes() {
        let nh = witten_series_tokens(WittenVariant::NonHolo, 10);
        let a1 = &nh.exponent_coeffs[&1];
        let star = vec![(Token::new(TokenKind::E2Star), 1)];
        assert_eq!(a1.coeff(&star), eisenstein_prefactor(1));
        let st = witten_series_tokens(WittenVariant::String, 10);
        assert!(!st.exponent_coeffs.contains_key(&1));
    }

    #[test]
    fn zagier_check_resolves_full_exponent_reciprocal() {
        let report = zagier_identity_check(9, 11).unwrap();
        assert_eq!(
            report.resolved,
            (ExponentConvention::FullExponent, SignConvention::Reciprocal)
        );
        assert!(Zero::is_zero(&report.max_discrepancy));
        assert!(report
            .failures
            .iter()
            .any(|((c, _), _)| *c == ExponentConvention::HalfExponent));
        assert!(zagier_identity_check(2, 2).is_err());
    }

    #[test]
    fn genus_on_k3_like_input() {
        let m = ManifoldData::from_json(
            r#"{"name":"K3-type","dim":4,"pontryagin_numbers":{"p1":-48},"rational_string":false}"#,
        )
        .unwrap();
        let a = ahat_series(6).unwrap();
        let class = multiplicative_class(&a.series, 4);
        let g = genus_evaluate(&class, &m).unwrap();
        assert_eq!(g.value, rat(2, 1));
    }

    #[test]
    fn genus_dim0_and_missing_numbers() {
        let m0 = ManifoldData {
            name: "pt".into(),
            dim: 0,
            pontryagin_numbers: BTreeMap::new(),
            rational_string: true,
        };
        let a = ahat_series(6).unwrap();
        let class = multiplicative_class(&a.series, 0);
        assert_eq!(genus_evaluate(&class, &m0).unwrap().value, rone());
        let m8 = ManifoldData {
            name: "mystery".into(),
            dim: 8,
            pontryagin_numbers: [(vec![1, 1], rat(1, 1))].into_iter().collect(),
            rational_string: false,
        };
        let class = multiplicative_class(&a.series, 8);
        assert!(genus_evaluate(&class, &m8).is_err());
    }

    #[test]
    fn manifold_validation() {
        // degree mismatch
        assert!(ManifoldData::from_json(
            r#"{"name":"X","dim":8,"pontryagin_numbers":{"p1":3}}"#
        )
        .is_err());
        // string flag with nonzero p1 in dim 4
        assert!(ManifoldData::from_json(
            r#"{"name":"X","dim":4,"pontryagin_numbers":{"p1":5},"rational_string":true}"#
        )
        .is_err());
        // partition keys
        let m = ManifoldData::from_json(
            r#"{"name":"X","dim":8,"pontryagin_numbers":{"p1.p1":1,"p2":7}}"#,
        )
        .unwrap();
        assert_eq!(m.pontryagin_numbers[&vec![1, 1]], rone());
        assert_eq!(m.pontryagin_numbers[&vec![2]], rat(7, 1));
    }

    #[test]
    fn index_pushforward_weights() {
        let k3 = ManifoldData::from_json(
            r#"{"name":"K3-type","dim":4,"pontryagin_numbers":{"p1":-48},"rational_string":false}"#,
        )
        .unwrap();
        match index_pushforward(&GradedPoly::one(4), &k3, IndexWeight::Ahat, 6).unwrap() {
            IndexValue::Rational(v) => assert_eq!(v, rat(2, 1)),
            _ => panic!(),
        }
        assert!(
            index_pushforward(&GradedPoly::one(4), &k3, IndexWeight::WittenString, 6).is_err()
        );
        let stringy = ManifoldData::from_json(
            r#"{"name":"S","dim":4,"pontryagin_numbers":{"p1":0},"rational_string":true}"#,
        )
        .unwrap();
        match index_pushforward(&GradedPoly::one(4), &stringy, IndexWeight::WittenString, 6)
            .unwrap()
        {
            IndexValue::QSeries(s) => {
                // the z^2 term is absent, so the degree-4 pairing vanishes
                assert!(s.is_zero());
            }
            _ => panic!(),
        }
        // only the constant term of the class survives
        let series = witten_series_q(WittenVariant::String, 6, 6).unwrap();
        let class = multiplicative_class(&series, 4);
        assert_eq!(class.component(4), GradedPoly::zero(4));
        assert_eq!(class.coeff(&Vec::new()).coeff(0), rone());
        // linearity of the pairing
        let two = GradedPoly::one(4).scale(&rat(2, 1));
        match index_pushforward(&two, &k3, IndexWeight::Ahat, 6).unwrap() {
            IndexValue::Rational(v) => assert_eq!(v, rat(4, 1)),
            _ => panic!(),
        }
    }

    #[test]
    fn chern_section_zero_curvature() {
        let f = vec![vec![Grassmann::zero(); 3]; 3];
        let s = chern_character_section_formal(&f, 4).unwrap();
        assert_eq!(s.terms.len(), 1);
        assert!(s.terms[0].1.eq(&Grassmann::int(3)));
        assert!(s.normalized.eq(&Grassmann::int(3)));
    }

    #[test]
    fn chern_numeric_2x2_block() {
        let theta = 0.7;
        let f = vec![vec![0.0, theta], vec![-theta, 0.0]];
        for r in [0.5, 1.0, 2.3] {
            let v = chern_character_numeric(&f, r).unwrap();
            assert!((v - Complex64::new(2.0 * (r * theta).cos(), 0.0)).norm() < 1e-12);
        }
        let bad = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        assert!(chern_character_numeric(&bad, 1.0).is_err());
        let nonsquare = vec![vec![0.0, 1.0]];
        assert!(chern_character_numeric(&nonsquare, 1.0).is_err());
    }

    #[test]
    fn chern_formal_r2_term_and_normalization() {
        // rank-2 block whose entry is a symplectic-type 2-form with
        // nonvanishing square
        let omega = Grassmann::gen(OddGen::Psi1)
            .mul(&Grassmann::gen(OddGen::Psi2))
            .add(&Grassmann::gen(OddGen::Psi3).mul(&Grassmann::gen(OddGen::Psi4)));
        let f = vec![
            vec![Grassmann::zero(), omega.clone()],
            vec![omega.neg(), Grassmann::zero()],
        ];
        let s = chern_character_section_formal(&f, 4).unwrap();
        // Tr(F) = 0; the r^2 term is (-i)^2/2! r^2 Tr(F^2) = -r^2 Tr(F^2)/2
        let tr_f2 = omega.mul(&omega).scale_int(-2); // F^2 = -omega^2 Id
        let expect_r2 = tr_f2
            .scale(&EvenExpr::sym_pow(Sym::R, 4))
            .scale_rat(&rat(-1, 2));
        let (j, term) = s
            .terms
            .iter()
            .find(|(j, _)| *j == 2)
            .expect("r^2 term present");
        assert_eq!(*j, 2);
        assert!(term.eq(&expect_r2));
        // normalized: rank + (-Tr(F^2) / (2 (2 pi)^2))
        let expect_norm = Grassmann::int(2).add(
            &tr_f2
                .scale(&EvenExpr::monomial(
                    crate::superalg::even::Mono::with(Sym::Pi, -4),
                    GaussRat::from_rat(rat(1, 4)),
                ))
                .scale_rat(&rat(-1, 2)),
        );
        assert!(s.normalized.eq(&expect_norm));
    }

    #[test]
    fn ko_filter_examples() {
        let graded: Vec<(u32, i32)> = (0..8).map(|d| (d, d as i32)).collect();
        let f = ko_degree_filter(&graded, 0);
        assert_eq!(f.iter().map(|(d, _)| *d).collect::<Vec<_>>(), vec![0, 4]);
        let empty: Vec<(u32, i32)> = Vec::new();
        assert!(ko_degree_filter(&empty, 1).is_empty());
        let ff = ko_degree_filter(&f, 4);
        assert_eq!(ff, f);
    }

    #[test]
    fn chern_sections_from_genuine_curvature_are_supersymmetric() {
        // holonomy sections of a bundle with connection solve the
        // generator equation: build F = dA + A /\ A and check that the
        // summed section is annihilated by the circle generator
        use crate::superalg::connection::{GMatrix, Superconnection};
        use crate::superalg::even::XVARS;
        use crate::superalg::generators::q_op_11;
        use crate::superalg::grassmann::PSI;
        let dim = 4;
        // rank-2 antisymmetric connection: A = [[0, a], [-a, 0]] with
        // a = x3 dx4 - x1 dx2
        let a_form = Grassmann::scalar(EvenExpr::sym(XVARS[2]))
            .mul(&Grassmann::gen(PSI[3]))
            .sub(&Grassmann::scalar(EvenExpr::sym(XVARS[0])).mul(&Grassmann::gen(PSI[1])));
        let a = GMatrix::from_entries(vec![
            vec![Grassmann::zero(), a_form.clone()],
            vec![a_form.neg(), Grassmann::zero()],
        ])
        .unwrap();
        let conn = Superconnection::new(dim, a).unwrap();
        let section = chern_character_section_formal(&conn.f.entries, dim).unwrap();
        let mut total = Grassmann::zero();
        for (_, term) in &section.terms {
            total = total.add(term);
        }
        assert!(!total.is_zero());
        assert!(q_op_11(&total, dim).is_zero());
    }
}
