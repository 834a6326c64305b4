//! Bernoulli numbers, even zeta values, Eisenstein series in q-expansion
//! and lattice-sum form, the Dedekind eta function, and a small ring of
//! modular tokens used to state determinant results symbolically.
//!
//! Conventions. The second Eisenstein series always refers to the version
//! with constant term `2*zeta(2)`; the weight-2k series in this convention
//! is `2*zeta(2k) * (1 - (4k/B_{2k}) * sum sigma_{2k-1}(n) q^n)`. The
//! "normalized" convention drops the `2*zeta(2k)` prefactor. E2* denotes
//! the modular, non-holomorphic regularization `E2 - pi/Im(tau)`. Lattice
//! functions extend the tau-line values by the dilation weight.

use crate::ring::{binomial, factorial, format_rat, rat_to_f64, Rat, Ring, RingWithRationals};
use crate::series::{SeriesError, TruncSeries, VAR_Q};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModularError {
    #[error("invalid lattice: {0}")]
    Lattice(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("token self-test failed: {0}")]
    TokenRule(String),
}

// ---------------------------------------------------------------------------
// Bernoulli numbers and even zeta values
// ---------------------------------------------------------------------------

/// Exact Bernoulli number, convention B_1 = -1/2.
pub fn bernoulli(n: u32) -> Rat {
    bernoulli_upto(n)[n as usize].clone()
}

/// B_0..B_n by the defining recurrence sum_{k<=m} C(m+1,k) B_k = 0.
pub fn bernoulli_upto(n: u32) -> Vec<Rat> {
    let mut b: Vec<Rat> = Vec::with_capacity(n as usize + 1);
    b.push(crate::ring::rone());
    for m in 1..=n as u64 {
        let mut s = crate::ring::rzero();
        for k in 0..m {
            s += Rat::from_integer(binomial(m + 1, k)) * &b[k as usize];
        }
        b.push(-s / Rat::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// Finite sums of c * pi^p with exact rational c; the coefficient ring for
/// the classical-convention Eisenstein expansions and zeta values.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct PiGraded {
    /// pi exponent -> coefficient; zero coefficients never stored
    terms: BTreeMap<i32, Rat>,
}

impl PiGraded {
    pub fn from_term(pi_pow: i32, c: Rat) -> Self {
        let mut t = BTreeMap::new();
        if !Zero::is_zero(&c) {
            t.insert(pi_pow, c);
        }
        PiGraded { terms: t }
    }

    pub fn terms(&self) -> &BTreeMap<i32, Rat> {
        &self.terms
    }

    /// The rational part in grade `pi_pow`.
    pub fn coeff(&self, pi_pow: i32) -> Rat {
        self.terms.get(&pi_pow).cloned().unwrap_or_else(crate::ring::rzero)
    }

    /// Multiply by an exact power of pi.
    pub fn shift(&self, dp: i32) -> Self {
        let mut out = BTreeMap::new();
        for (&p, c) in &self.terms {
            out.insert(p + dp, c.clone());
        }
        PiGraded { terms: out }
    }

    pub fn eval_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(&p, c)| rat_to_f64(c) * PI.powi(p))
            .sum()
    }

    /// Exactly rational iff no positive or negative pi powers remain.
    pub fn as_rational(&self) -> Option<Rat> {
        if self.terms.is_empty() {
            return Some(crate::ring::rzero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&0) {
                return Some(c.clone());
            }
        }
        None
    }
}

impl Ring for PiGraded {
    fn zero() -> Self {
        PiGraded::default()
    }
    fn one() -> Self {
        PiGraded::from_term(0, crate::ring::rone())
    }
    fn add(&self, other: &Self) -> Self {
        let mut out = self.terms.clone();
        for (&p, c) in &other.terms {
            let e = out.entry(p).or_insert_with(crate::ring::rzero);
            *e += c;
            if Zero::is_zero(e) {
                out.remove(&p);
            }
        }
        PiGraded { terms: out }
    }
    fn neg(&self) -> Self {
        PiGraded {
            terms: self.terms.iter().map(|(&p, c)| (p, -c.clone())).collect(),
        }
    }
    fn mul(&self, other: &Self) -> Self {
        let mut out: BTreeMap<i32, Rat> = BTreeMap::new();
        for (&pa, ca) in &self.terms {
            for (&pb, cb) in &other.terms {
                let e = out.entry(pa + pb).or_insert_with(crate::ring::rzero);
                *e += ca * cb;
            }
        }
        out.retain(|_, c| !Zero::is_zero(c));
        PiGraded { terms: out }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl RingWithRationals for PiGraded {
    fn from_rational(r: &Rat) -> Self {
        PiGraded::from_term(0, r.clone())
    }
}

impl fmt::Display for PiGraded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&p, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if p == 0 {
                write!(f, "{}", format_rat(c))?;
            } else {
                write!(f, "({})*pi^{}", format_rat(c), p)?;
            }
        }
        Ok(())
    }
}

/// zeta(2k) as an exact pi-graded rational:
/// `(-1)^{k+1} B_{2k} (2 pi)^{2k} / (2 (2k)!)`.
pub fn zeta_even(k: u32) -> PiGraded {
    assert!(k >= 1);
    let b = bernoulli(2 * k);
    let sign = if k % 2 == 1 { 1 } else { -1 };
    let two_pow = BigInt::from(2).pow(2 * k);
    let c = Rat::from_integer(BigInt::from(sign)) * b * Rat::from_integer(two_pow)
        / Rat::from_integer(BigInt::from(2) * factorial(2 * k as u64));
    PiGraded::from_term(2 * k as i32, c)
}

/// The exactly rational combination `2*zeta(2k) / (2k * (2 pi i)^{2k})`,
/// equal to `-B_{2k} / (2k * (2k)!)`; the exponent coefficients of the
/// (x/2)/sinh(x/2) series.
pub fn zeta_ratio_rational(k: u32) -> Rat {
    -bernoulli(2 * k) / Rat::from_integer(BigInt::from(2 * k as u64) * factorial(2 * k as u64))
}

// ---------------------------------------------------------------------------
// Lattices
// ---------------------------------------------------------------------------

/// Based lattice (l, l') with Im(l'/l) > 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lattice {
    pub ell: Complex64,
    pub ell_prime: Complex64,
}

impl Lattice {
    pub fn new(ell: Complex64, ell_prime: Complex64) -> Result<Self, ModularError> {
        if ell.norm() == 0.0 {
            return Err(ModularError::Lattice("l = 0".into()));
        }
        let tau = ell_prime / ell;
        if !(tau.im > 0.0) {
            return Err(ModularError::Lattice(format!(
                "Im(l'/l) = {} is not positive",
                tau.im
            )));
        }
        Ok(Lattice { ell, ell_prime })
    }

    pub fn from_tau(tau: Complex64) -> Result<Self, ModularError> {
        Self::new(Complex64::new(1.0, 0.0), tau)
    }

    pub fn tau(&self) -> Complex64 {
        self.ell_prime / self.ell
    }

    pub fn q_nome(&self) -> Complex64 {
        (Complex64::new(0.0, 2.0 * PI) * self.tau()).exp()
    }

    /// `conj(l) l' - conj(l') l`, always on the positive imaginary axis.
    pub fn vol(&self) -> Complex64 {
        self.ell.conj() * self.ell_prime - self.ell_prime.conj() * self.ell
    }

    /// Dilation by c (both basis vectors scale).
    pub fn dilate(&self, c: Complex64) -> Lattice {
        Lattice {
            ell: c * self.ell,
            ell_prime: c * self.ell_prime,
        }
    }
}

// ---------------------------------------------------------------------------
// Eisenstein q-expansions
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EisensteinConvention {
    /// Constant term 2*zeta(2k); the form every determinant below uses.
    Classical,
    /// Constant term 1.
    Normalized,
}

/// sigma_{p}(n) for n in 1..order by divisor sieve.
fn divisor_power_sums(p: u32, order: i64) -> Vec<BigInt> {
    let n = order.max(0) as usize;
    let mut out = vec![BigInt::zero(); n];
    for d in 1..n {
        let dp = BigInt::from(d).pow(p);
        let mut m = d;
        while m < n {
            out[m] += &dp;
            m += d;
        }
    }
    out
}

/// Normalized weight-2k Eisenstein q-expansion
/// `1 - (4k/B_{2k}) sum sigma_{2k-1}(n) q^n`, exact.
pub fn eisenstein_q_normalized(k: u32, order: i64) -> Result<TruncSeries<Rat>, SeriesError> {
    if order < 1 {
        return Err(SeriesError::Domain("order must be >= 1".into()));
    }
    assert!(k >= 1);
    let mut s = TruncSeries::zero_in(VAR_Q, 1, order);
    s.set(0, crate::ring::rone());
    let factor = -Rat::from_integer(BigInt::from(4 * k as u64)) / bernoulli(2 * k);
    let sig = divisor_power_sums(2 * k - 1, order);
    for n in 1..order {
        s.set(n, &factor * Rat::from_integer(sig[n as usize].clone()));
    }
    Ok(s)
}

/// Classical-convention expansion `2 zeta(2k) * normalized`, with pi-graded
/// exact coefficients.
pub fn eisenstein_q_classical(k: u32, order: i64) -> Result<TruncSeries<PiGraded>, SeriesError> {
    let norm = eisenstein_q_normalized(k, order)?;
    let z2 = zeta_even(k);
    let two_z = z2.add(&z2);
    Ok(norm.map_coeffs(|c| two_z.mul(&PiGraded::from_rational(c))))
}

/// Numeric evaluation of the classical-convention E_{2k} on the tau line.
pub fn eisenstein_tau_numeric(k: u32, tau: Complex64, q_order: i64) -> Complex64 {
    let q = (Complex64::new(0.0, 2.0 * PI) * tau).exp();
    let sig = divisor_power_sums(2 * k - 1, q_order);
    let mut s = Complex64::new(1.0, 0.0);
    let factor = rat_to_f64(&(-Rat::from_integer(BigInt::from(4 * k as u64)) / bernoulli(2 * k)));
    let mut qn = Complex64::new(1.0, 0.0);
    for n in 1..q_order {
        qn *= q;
        s += factor * sig[n as usize].to_f64().unwrap_or(f64::NAN) * qn;
    }
    let two_zeta = 2.0 * zeta_even(k).eval_f64();
    two_zeta * s
}

/// Classical-convention E_{2k} as a weight -2k lattice function (q-series
/// definition extended by dilation).
pub fn eisenstein_lattice_qseries(k: u32, lat: &Lattice, q_order: i64) -> Complex64 {
    eisenstein_tau_numeric(k, lat.tau(), q_order) / lat.ell.powi(2 * k as i32)
}

/// Truncated absolutely convergent lattice sum
/// `sum_{0 < max(|m|,|n|) <= cutoff} (m l + n l')^{-2k}`,
/// accumulated shell by shell in a fixed deterministic order.
pub fn eisenstein_lattice(k: u32, lat: &Lattice, cutoff: u32) -> Result<Complex64, ModularError> {
    if k < 2 {
        return Err(ModularError::Domain(
            "lattice sum requires k >= 2 (k = 1 is conditionally convergent; \
             use the q-expansion or e2_star)"
                .into(),
        ));
    }
    if cutoff < 1 {
        return Err(ModularError::Domain("cutoff must be >= 1".into()));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for s in 1..=cutoff as i64 {
        acc += shell_sum(k, lat, s);
    }
    Ok(acc)
}

fn shell_sum(k: u32, lat: &Lattice, s: i64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let term = |m: i64, n: i64| {
        let w = lat.ell * m as f64 + lat.ell_prime * n as f64;
        w.powi(-(2 * k as i32))
    };
    // fixed enumeration: the two m = +-s edges, then the two n = +-s edges
    for t in -s..=s {
        acc += term(s, t);
        acc += term(-s, t);
    }
    for t in -(s - 1)..=(s - 1) {
        acc += term(t, s);
        acc += term(t, -s);
    }
    acc
}

/// Numeric E2 (classical convention) on the tau line by q-series.
pub fn e2_tau_numeric(tau: Complex64, q_order: i64) -> Complex64 {
    eisenstein_tau_numeric(1, tau, q_order)
}

/// E2 as a weight -2 lattice function.
pub fn e2_lattice(lat: &Lattice, q_order: i64) -> Complex64 {
    e2_tau_numeric(lat.tau(), q_order) / (lat.ell * lat.ell)
}

/// The modular, non-holomorphic `E2*`: q-series value minus pi/Im(tau),
/// extended to lattices by weight -2 dilation.
pub fn e2_star(lat: &Lattice, q_order: i64) -> Result<Complex64, ModularError> {
    if q_order < 10 {
        return Err(ModularError::Domain("e2_star needs q_order >= 10".into()));
    }
    let tau = lat.tau();
    let val = e2_tau_numeric(tau, q_order) - Complex64::new(PI / tau.im, 0.0);
    Ok(val / (lat.ell * lat.ell))
}

/// `|E2(-1/tau) - tau^2 E2(tau) + 2 pi i tau|` by q-series.
pub fn e2_transform_residual(tau: Complex64, q_order: i64) -> Result<f64, ModularError> {
    if !(tau.im > 0.0) {
        return Err(ModularError::Domain("Im(tau) must be positive".into()));
    }
    let lhs = e2_tau_numeric(-tau.inv(), q_order);
    let rhs = tau * tau * e2_tau_numeric(tau, q_order) - Complex64::new(0.0, 2.0 * PI) * tau;
    Ok((lhs - rhs).norm())
}

// ---------------------------------------------------------------------------
// Dedekind eta
// ---------------------------------------------------------------------------

/// q-expansion of eta = q^{1/24} prod (1 - q^n), exponent unit 1/24,
/// truncated strictly below whole q-power `order`.
pub fn dedekind_eta_qseries(order: i64) -> Result<TruncSeries<Rat>, SeriesError> {
    if order < 1 {
        return Err(SeriesError::Domain("order must be >= 1".into()));
    }
    let keys = order * 24;
    let mut prod = TruncSeries::zero_in(VAR_Q, 24, keys);
    prod.set(0, crate::ring::rone());
    for n in 1..order {
        let mut f = TruncSeries::zero_in(VAR_Q, 24, keys);
        f.set(0, crate::ring::rone());
        f.set(24 * n, -crate::ring::rone());
        prod = prod.try_mul(&f)?;
    }
    // shift by q^{1/24}
    let shift = TruncSeries::monomial(VAR_Q, 24, 1, crate::ring::rone(), keys);
    prod.try_mul(&shift)
}

/// Numeric eta(tau) by the pentagonal-number series
/// `sum_n (-1)^n q^{(6n+1)^2/24}`.
pub fn dedekind_eta_numeric(tau: Complex64) -> Result<Complex64, ModularError> {
    if !(tau.im > 0.0) {
        return Err(ModularError::Domain("Im(tau) must be positive".into()));
    }
    let log_q_over_24 = Complex64::new(0.0, 2.0 * PI) * tau / 24.0;
    let mut acc = Complex64::new(0.0, 0.0);
    for n in -120i64..=120 {
        let e = (6 * n + 1) * (6 * n + 1);
        let sign = if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        acc += sign * (log_q_over_24 * e as f64).exp();
    }
    Ok(acc)
}

/// `|eta|^4` as a lattice function of weight (-1,-1):
/// `|l|^{-2} |eta(tau)|^4`.
pub fn eta_abs4_lattice(lat: &Lattice) -> Result<f64, ModularError> {
    let e = dedekind_eta_numeric(lat.tau())?;
    Ok(e.norm().powi(4) / lat.ell.norm_sqr())
}

// ---------------------------------------------------------------------------
// Modular tokens
// ---------------------------------------------------------------------------

/// Symbols for the modular quantities appearing in determinant formulas.
/// `conj` marks the complex conjugate of the base symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum TokenKind {
    /// holomorphic, non-modular second Eisenstein series (classical convention)
    E2,
    /// modular, non-holomorphic regularization E2 - pi/Im(tau)
    E2Star,
    /// the correction E2* - E2 = -pi/Im(tau) as a weight -2 function
    E2StarMinusE2,
    /// weight-2k Eisenstein series, k >= 2, classical convention
    E2k(u32),
    /// |eta|^4
    EtaAbs4,
    /// formal square root of vol = conj(l) l' - conj(l') l
    VolHalf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Token {
    pub kind: TokenKind,
    pub conj: bool,
}

impl Token {
    pub fn new(kind: TokenKind) -> Self {
        Token { kind, conj: false }
    }

    pub fn conjugate(self) -> Self {
        Token {
            kind: self.kind,
            conj: !self.conj,
        }
    }

    /// Scaling exponents (a, b) in half units: value(c.Lam) =
    /// c^{a/2} conj(c)^{b/2} value(Lam).
    pub fn weight_half(&self) -> (i32, i32) {
        let (a, b) = match self.kind {
            TokenKind::E2 | TokenKind::E2Star | TokenKind::E2StarMinusE2 => (-4, 0),
            TokenKind::E2k(k) => (-4 * k as i32, 0),
            TokenKind::EtaAbs4 => (-2, -2),
            TokenKind::VolHalf => (1, 1),
        };
        if self.conj {
            (b, a)
        } else {
            (a, b)
        }
    }

    /// Holomorphic dependence on the lattice.
    pub fn holomorphic(&self) -> bool {
        if self.conj {
            return false;
        }
        matches!(self.kind, TokenKind::E2 | TokenKind::E2k(_))
    }

    /// Invariance under the SL2(Z) basis change.
    pub fn sl2_invariant(&self) -> bool {
        match self.kind {
            TokenKind::E2 | TokenKind::E2StarMinusE2 => false,
            TokenKind::E2Star | TokenKind::E2k(_) | TokenKind::EtaAbs4 | TokenKind::VolHalf => true,
        }
    }

    pub fn eval(&self, lat: &Lattice, q_order: i64) -> Result<Complex64, ModularError> {
        let v = match self.kind {
            TokenKind::E2 => e2_lattice(lat, q_order),
            TokenKind::E2Star => e2_star(lat, q_order)?,
            TokenKind::E2StarMinusE2 => {
                Complex64::new(-PI / lat.tau().im, 0.0) / (lat.ell * lat.ell)
            }
            TokenKind::E2k(k) => eisenstein_lattice_qseries(k, lat, q_order),
            TokenKind::EtaAbs4 => Complex64::new(eta_abs4_lattice(lat)?, 0.0),
            TokenKind::VolHalf => lat.vol().sqrt(),
        };
        Ok(if self.conj { v.conj() } else { v })
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match self.kind {
            TokenKind::E2 => "E2".to_string(),
            TokenKind::E2Star => "E2*".to_string(),
            TokenKind::E2StarMinusE2 => "(E2*-E2)".to_string(),
            TokenKind::E2k(k) => format!("E{}", 2 * k),
            TokenKind::EtaAbs4 => "|eta|^4".to_string(),
            TokenKind::VolHalf => "vol^(1/2)".to_string(),
        };
        if self.conj {
            write!(f, "conj({})", base)
        } else {
            write!(f, "{}", base)
        }
    }
}

/// Monomial in tokens: sorted (token, power) pairs.
pub type TokenMono = Vec<(Token, u32)>;

fn mono_mul(a: &TokenMono, b: &TokenMono) -> TokenMono {
    let mut out: BTreeMap<Token, u32> = BTreeMap::new();
    for &(t, p) in a.iter().chain(b.iter()) {
        *out.entry(t).or_insert(0) += p;
    }
    out.into_iter().filter(|&(_, p)| p > 0).collect()
}

/// Element of the commutative token ring: a pi-graded-rational linear
/// combination of token monomials.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ModExpr {
    terms: BTreeMap<TokenMono, PiGraded>,
}

impl ModExpr {
    pub fn scalar(c: PiGraded) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        ModExpr { terms }
    }

    pub fn token(t: Token) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![(t, 1)], PiGraded::one());
        ModExpr { terms }
    }

    pub fn term(mono: TokenMono, c: PiGraded) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mono, c);
        }
        ModExpr { terms }
    }

    pub fn terms(&self) -> &BTreeMap<TokenMono, PiGraded> {
        &self.terms
    }

    pub fn coeff(&self, mono: &TokenMono) -> PiGraded {
        self.terms.get(mono).cloned().unwrap_or_default()
    }

    pub fn conj(&self) -> Self {
        // pi-graded rational coefficients are real
        let mut out = BTreeMap::new();
        for (mono, c) in &self.terms {
            let m: TokenMono = {
                let mut v: TokenMono = mono.iter().map(|&(t, p)| (t.conjugate(), p)).collect();
                v.sort();
                v
            };
            out.insert(m, c.clone());
        }
        ModExpr { terms: out }
    }

    pub fn eval(&self, lat: &Lattice, q_order: i64) -> Result<Complex64, ModularError> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (mono, c) in &self.terms {
            let mut v = Complex64::new(c.eval_f64(), 0.0);
            for &(t, p) in mono {
                let tv = t.eval(lat, q_order)?;
                v *= tv.powi(p as i32);
            }
            acc += v;
        }
        Ok(acc)
    }

    /// Total scaling weight (half units) when every monomial is
    /// homogeneous of the same weight; None for mixed weights.
    pub fn homogeneous_weight_half(&self) -> Option<(i32, i32)> {
        let mut w: Option<(i32, i32)> = None;
        for mono in self.terms.keys() {
            let mut acc = (0, 0);
            for &(t, p) in mono {
                let (a, b) = t.weight_half();
                acc.0 += a * p as i32;
                acc.1 += b * p as i32;
            }
            match w {
                None => w = Some(acc),
                Some(prev) if prev == acc => {}
                _ => return None,
            }
        }
        w.or(Some((0, 0)))
    }

    pub fn all_holomorphic(&self) -> bool {
        self.terms
            .keys()
            .flat_map(|m| m.iter())
            .all(|&(t, _)| t.holomorphic())
    }

    pub fn all_sl2_invariant(&self) -> bool {
        self.terms
            .keys()
            .flat_map(|m| m.iter())
            .all(|&(t, _)| t.sl2_invariant())
    }

    /// True when the expression is a constant (no tokens).
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_empty())
    }

    /// Replace paired occurrences `E2* + conj(E2*)` by `E2 + conj(E2)`
    /// wherever the two coefficients agree; the rewrite used to identify
    /// norm-squared factorizations.
    pub fn rewrite_e2star_pair(&self) -> Self {
        let star = vec![(Token::new(TokenKind::E2Star), 1)];
        let star_c = vec![(Token::new(TokenKind::E2Star).conjugate(), 1)];
        let holo = vec![(Token::new(TokenKind::E2), 1)];
        let holo_c = vec![(Token::new(TokenKind::E2).conjugate(), 1)];
        let ca = self.coeff(&star);
        let cb = self.coeff(&star_c);
        if ca.is_zero() || ca != cb {
            return self.clone();
        }
        let mut out = self.clone();
        out.terms.remove(&star);
        out.terms.remove(&star_c);
        let add = ModExpr::term(holo, ca.clone()).add(&ModExpr::term(holo_c, ca));
        out.add(&add)
    }
}

impl Ring for ModExpr {
    fn zero() -> Self {
        ModExpr::default()
    }
    fn one() -> Self {
        ModExpr::scalar(PiGraded::one())
    }
    fn add(&self, other: &Self) -> Self {
        let mut out = self.terms.clone();
        for (m, c) in &other.terms {
            let e = out.entry(m.clone()).or_insert_with(PiGraded::zero);
            *e = e.add(c);
            if e.is_zero() {
                out.remove(m);
            }
        }
        ModExpr { terms: out }
    }
    fn neg(&self) -> Self {
        ModExpr {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }
    fn mul(&self, other: &Self) -> Self {
        let mut out: BTreeMap<TokenMono, PiGraded> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = mono_mul(ma, mb);
                let e = out.entry(m).or_insert_with(PiGraded::zero);
                *e = e.add(&ca.mul(cb));
            }
        }
        out.retain(|_, c| !c.is_zero());
        ModExpr { terms: out }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl RingWithRationals for ModExpr {
    fn from_rational(r: &Rat) -> Self {
        ModExpr::scalar(PiGraded::from_rational(r))
    }
}

impl fmt::Display for ModExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (mono, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", c)?;
            for &(t, p) in mono {
                if p == 1 {
                    write!(f, "*{}", t)?;
                } else {
                    write!(f, "*{}^{}", t, p)?;
                }
            }
        }
        Ok(())
    }
}

/// Numeric self-test of every token's declared dilation, S and T rules at
/// pseudo-random lattices. S acts by (l, l') -> (l', -l), T by
/// (l, l') -> (l, l' + l).
pub fn token_self_test(tol: f64, q_order: i64, seed: u64) -> Result<(), ModularError> {
    use crate::sampling::{sample_lattice, SplitMix};
    let mut rng = SplitMix::new(seed);
    let tokens = [
        Token::new(TokenKind::E2),
        Token::new(TokenKind::E2Star),
        Token::new(TokenKind::E2StarMinusE2),
        Token::new(TokenKind::E2k(2)),
        Token::new(TokenKind::E2k(3)),
        Token::new(TokenKind::EtaAbs4),
        Token::new(TokenKind::VolHalf),
        Token::new(TokenKind::E2Star).conjugate(),
        Token::new(TokenKind::E2k(2)).conjugate(),
    ];
    for _ in 0..10 {
        let lat = sample_lattice(&mut rng);
        let c = Complex64::from_polar(rng.uniform(0.7, 1.4), rng.uniform(-0.5, 0.5));
        let s_lat = Lattice::new(lat.ell_prime, -lat.ell).unwrap();
        let t_lat = Lattice::new(lat.ell, lat.ell_prime + lat.ell).unwrap();
        for t in tokens {
            let v = t.eval(&lat, q_order)?;
            // dilation rule: value(c.Lam) = c^{a/2} conj(c)^{b/2} value
            let (a, b) = t.weight_half();
            let scaled = t.eval(&lat.dilate(c), q_order)?;
            let expect = c.powf(a as f64 / 2.0) * c.conj().powf(b as f64 / 2.0) * v;
            // powf uses the principal branch; our samples stay off the cut
            if (scaled - expect).norm() > tol * (1.0 + v.norm()) {
                return Err(ModularError::TokenRule(format!(
                    "{} dilation rule residual {:e}",
                    t,
                    (scaled - expect).norm()
                )));
            }
            // T rule: every token is T-invariant
            let tv = t.eval(&t_lat, q_order)?;
            if (tv - v).norm() > tol * (1.0 + v.norm()) {
                return Err(ModularError::TokenRule(format!(
                    "{} T rule residual {:e}",
                    t,
                    (tv - v).norm()
                )));
            }
            // S rule
            let sv = t.eval(&s_lat, q_order)?;
            let expect_s = if t.sl2_invariant() {
                v
            } else {
                // E2(S.Lam) = E2 - 2 pi i/(l l'); the correction token picks
                // up the opposite shift
                let shift = Complex64::new(0.0, -2.0 * PI) / (lat.ell * lat.ell_prime);
                let shift = if t.conj { shift.conj() } else { shift };
                match t.kind {
                    TokenKind::E2 => v + shift,
                    TokenKind::E2StarMinusE2 => v - shift,
                    _ => unreachable!(),
                }
            };
            if (sv - expect_s).norm() > tol * (1.0 + v.norm()) {
                return Err(ModularError::TokenRule(format!(
                    "{} S rule residual {:e}",
                    t,
                    (sv - expect_s).norm()
                )));
            }
        }
    }
    Ok(())
}
