//! Commutative coefficient functions for the super-geometric computations:
//! Laurent monomials in a fixed set of even symbols with Gaussian-rational
//! coefficients and half-integer exponents.
//!
//! `Vol` abbreviates `conj(l) l' - conj(l') l` and is never expanded during
//! arithmetic; derivatives track it by the chain rule, and zero testing
//! expands it. Half powers of `R` and `Vol` are formal generators whose
//! square is the named symbol, which is all the formulas require.

use super::scalar::GaussRat;
use crate::ring::{rat, Rat, Ring};
use std::collections::BTreeMap;
use std::fmt;

pub const NSYM: usize = 22;

/// Even symbols. `T2/T3`, `U2`, `Z2/Z2bar` are auxiliary copies used in
/// associativity checks; `X1..X4` are manifold coordinates; `QSq` is a
/// formal central generator for operator-composition checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
#[repr(usize)]
pub enum Sym {
    T = 0,
    T2,
    T3,
    R,
    U,
    U2,
    Ubar,
    Z,
    Zbar,
    Z2,
    Z2bar,
    L,
    Lbar,
    Lp,
    Lpbar,
    Vol,
    Pi,
    QSq,
    X1,
    X2,
    X3,
    X4,
}

pub const SYM_NAMES: [&str; NSYM] = [
    "t", "t'", "t''", "r", "u", "u'", "ubar", "z", "zbar", "z'", "zbar'", "l", "lbar", "l'",
    "lbar'", "vol", "pi", "A", "x1", "x2", "x3", "x4",
];

pub const XVARS: [Sym; 4] = [Sym::X1, Sym::X2, Sym::X3, Sym::X4];

/// Monomial exponent vector; exponents are stored in half units
/// (stored value 2 means power 1).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Mono(pub [i16; NSYM]);

impl Mono {
    pub fn unit() -> Self {
        Mono([0; NSYM])
    }

    pub fn with(sym: Sym, half_exp: i16) -> Self {
        let mut m = Mono([0; NSYM]);
        m.0[sym as usize] = half_exp;
        m
    }

    fn mul(&self, other: &Mono) -> Mono {
        let mut out = [0i16; NSYM];
        for i in 0..NSYM {
            out[i] = self.0[i] + other.0[i];
        }
        Mono(out)
    }
}

/// Finite sum of monomials with GaussRat coefficients.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct EvenExpr {
    terms: BTreeMap<Mono, GaussRat>,
}

impl EvenExpr {
    pub fn zero() -> Self {
        EvenExpr::default()
    }

    pub fn scalar(c: GaussRat) -> Self {
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            t.insert(Mono::unit(), c);
        }
        EvenExpr { terms: t }
    }

    pub fn one() -> Self {
        Self::scalar(GaussRat::from_int(1))
    }

    pub fn int(n: i64) -> Self {
        Self::scalar(GaussRat::from_int(n))
    }

    pub fn rational(r: Rat) -> Self {
        Self::scalar(GaussRat::from_rat(r))
    }

    pub fn i() -> Self {
        Self::scalar(GaussRat::i())
    }

    /// `sym` to an integer power.
    pub fn sym(s: Sym) -> Self {
        Self::sym_pow(s, 2)
    }

    /// `sym` to the power `half_exp/2`.
    pub fn sym_pow(s: Sym, half_exp: i16) -> Self {
        let mut t = BTreeMap::new();
        t.insert(Mono::with(s, half_exp), GaussRat::from_int(1));
        EvenExpr { terms: t }
    }

    pub fn monomial(m: Mono, c: GaussRat) -> Self {
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            t.insert(m, c);
        }
        EvenExpr { terms: t }
    }

    pub fn terms(&self) -> &BTreeMap<Mono, GaussRat> {
        &self.terms
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.terms.clone();
        for (m, c) in &other.terms {
            let e = out.entry(*m).or_insert_with(GaussRat::zero);
            *e = e.add(c);
            if e.is_zero() {
                out.remove(m);
            }
        }
        EvenExpr { terms: out }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        EvenExpr {
            terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out: BTreeMap<Mono, GaussRat> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let e = out.entry(m).or_insert_with(GaussRat::zero);
                *e = e.add(&ca.mul(cb));
            }
        }
        out.retain(|_, c| !c.is_zero());
        EvenExpr { terms: out }
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        if c.is_zero() {
            return EvenExpr::zero();
        }
        EvenExpr {
            terms: self.terms.iter().map(|(m, v)| (*m, v.mul(c))).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        EvenExpr {
            terms: self.terms.iter().map(|(m, v)| (*m, v.conj())).collect(),
        }
    }

    pub fn is_syntactically_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Partial derivative; `Vol` is treated as the polynomial it
    /// abbreviates via the chain rule.
    pub fn derivative(&self, s: Sym) -> Self {
        let mut out = EvenExpr::zero();
        for (m, c) in &self.terms {
            // direct power rule
            let e = m.0[s as usize];
            if e != 0 {
                let mut m2 = *m;
                m2.0[s as usize] -= 2;
                let factor = GaussRat::from_rat(rat(e as i64, 2));
                out = out.add(&EvenExpr::monomial(m2, c.mul(&factor)));
            }
            // chain rule through Vol = lbar*l' - lbar'*l
            let ev = m.0[Sym::Vol as usize];
            if ev != 0 {
                let dvol = match s {
                    Sym::L => Some(EvenExpr::sym(Sym::Lpbar).neg()),
                    Sym::Lbar => Some(EvenExpr::sym(Sym::Lp)),
                    Sym::Lp => Some(EvenExpr::sym(Sym::Lbar)),
                    Sym::Lpbar => Some(EvenExpr::sym(Sym::L).neg()),
                    _ => None,
                };
                if let Some(dvol) = dvol {
                    let mut m2 = *m;
                    m2.0[Sym::Vol as usize] -= 2;
                    let factor = GaussRat::from_rat(rat(ev as i64, 2));
                    let base = EvenExpr::monomial(m2, c.mul(&factor));
                    out = out.add(&base.mul(&dvol));
                }
            }
        }
        out
    }

    /// Substitute an exact rational constant for a symbol that appears
    /// only with nonnegative integer exponents.
    pub fn subst_const(&self, s: Sym, value: &Rat) -> Self {
        let mut out = EvenExpr::zero();
        for (m, c) in &self.terms {
            let e = m.0[s as usize];
            assert!(e >= 0 && e % 2 == 0, "substitution needs integer powers");
            let mut m2 = *m;
            m2.0[s as usize] = 0;
            let mut pow = GaussRat::from_int(1);
            for _ in 0..(e / 2) {
                pow = pow.mul(&GaussRat::from_rat(value.clone()));
            }
            out = out.add(&EvenExpr::monomial(m2, c.mul(&pow)));
        }
        out
    }

    /// Decide whether the expression vanishes identically as a function
    /// of the symbols, expanding `Vol` and splitting the formal half
    /// powers of `R` and `Vol` into parity sectors.
    pub fn is_zero(&self) -> bool {
        if self.terms.is_empty() {
            return true;
        }
        // split into (r parity, vol parity) sectors
        for rp in 0..2i16 {
            for vp in 0..2i16 {
                let sector: Vec<(Mono, GaussRat)> = self
                    .terms
                    .iter()
                    .filter(|(m, _)| {
                        (m.0[Sym::R as usize].rem_euclid(2) == rp)
                            && (m.0[Sym::Vol as usize].rem_euclid(2) == vp)
                    })
                    .map(|(m, c)| (*m, c.clone()))
                    .collect();
                if !sector_is_zero(&sector) {
                    return false;
                }
            }
        }
        true
    }

    pub fn eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

/// Zero test for one parity sector: shift exponents to be nonnegative,
/// expand Vol, compare coefficients.
fn sector_is_zero(terms: &[(Mono, GaussRat)]) -> bool {
    if terms.is_empty() {
        return true;
    }
    // minimum exponent per symbol
    let mut min = [i16::MAX; NSYM];
    for (m, _) in terms {
        for i in 0..NSYM {
            min[i] = min[i].min(m.0[i]);
        }
    }
    // dividing out the common monomial is harmless: the symbols generate
    // an integral domain and the formal half powers of R and Vol are
    // nonzero, so zeroness is preserved. X exponents must already be
    // polynomial.
    for (i, mn) in min.iter().enumerate() {
        if XVARS.iter().any(|&x| x as usize == i) {
            assert!(*mn >= 0, "negative x exponent");
        }
    }
    // expand: monomial with vol^k (k integer >= 0 after shift) ->
    // (lbar*lp - lpbar*l)^k
    let mut expanded: BTreeMap<Mono, GaussRat> = BTreeMap::new();
    for (m, c) in terms {
        let mut shifted = *m;
        for i in 0..NSYM {
            shifted.0[i] -= min[i];
        }
        let vk = shifted.0[Sym::Vol as usize];
        debug_assert!(vk >= 0 && vk % 2 == 0);
        shifted.0[Sym::Vol as usize] = 0;
        // binomial expansion of (lbar*lp - lpbar*l)^(vk/2)
        let k = (vk / 2) as i64;
        for j in 0..=k {
            let cnt = crate::ring::binomial(k as u64, j as u64);
            let sign = if (k - j) % 2 == 0 { 1 } else { -1 };
            let coeff = c.mul(&GaussRat::from_rat(
                Rat::from_integer(cnt) * rat(sign, 1),
            ));
            let mut m2 = shifted;
            m2.0[Sym::Lbar as usize] += 2 * j as i16;
            m2.0[Sym::Lp as usize] += 2 * j as i16;
            m2.0[Sym::Lpbar as usize] += 2 * (k - j) as i16;
            m2.0[Sym::L as usize] += 2 * (k - j) as i16;
            let e = expanded.entry(m2).or_insert_with(GaussRat::zero);
            *e = e.add(&coeff);
        }
    }
    expanded.values().all(|c| c.is_zero())
}

impl EvenExpr {
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (m, c) in &self.terms {
            let mut s = format!("({})", c);
            for i in 0..NSYM {
                let e = m.0[i];
                if e != 0 {
                    if e % 2 == 0 {
                        s.push_str(&format!("*{}^{}", SYM_NAMES[i], e / 2));
                    } else {
                        s.push_str(&format!("*{}^({}/2)", SYM_NAMES[i], e));
                    }
                }
            }
            parts.push(s);
        }
        parts.join(" + ")
    }
}

impl fmt::Display for EvenExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vol_expansion_detects_zero() {
        // vol - (lbar*l' - lbar'*l) == 0
        let vol = EvenExpr::sym(Sym::Vol);
        let expanded = EvenExpr::sym(Sym::Lbar)
            .mul(&EvenExpr::sym(Sym::Lp))
            .sub(&EvenExpr::sym(Sym::Lpbar).mul(&EvenExpr::sym(Sym::L)));
        assert!(vol.sub(&expanded).is_zero());
        assert!(!vol.is_zero());
    }

    #[test]
    fn vol_inverse_cancellation() {
        // (lbar*l' - lbar'*l) * vol^{-1} == 1
        let expanded = EvenExpr::sym(Sym::Lbar)
            .mul(&EvenExpr::sym(Sym::Lp))
            .sub(&EvenExpr::sym(Sym::Lpbar).mul(&EvenExpr::sym(Sym::L)));
        let inv_vol = EvenExpr::sym_pow(Sym::Vol, -2);
        let prod = expanded.mul(&inv_vol);
        assert!(prod.sub(&EvenExpr::one()).is_zero());
    }

    #[test]
    fn half_power_parity_sectors() {
        // r^{1/2} and r cannot cancel
        let a = EvenExpr::sym_pow(Sym::R, 1);
        let b = EvenExpr::sym(Sym::R);
        assert!(!a.sub(&b).is_zero());
        // (vol^{1/2})^2 = vol
        let h = EvenExpr::sym_pow(Sym::Vol, 1);
        assert!(h.mul(&h).sub(&EvenExpr::sym(Sym::Vol)).is_zero());
    }

    #[test]
    fn derivative_with_vol_chain_rule() {
        // d/d lbar of vol^2 = 2 vol l'
        let v2 = EvenExpr::sym_pow(Sym::Vol, 4);
        let d = v2.derivative(Sym::Lbar);
        let expect = EvenExpr::int(2)
            .mul(&EvenExpr::sym(Sym::Vol))
            .mul(&EvenExpr::sym(Sym::Lp));
        assert!(d.sub(&expect).is_zero());
        // d/dr r^{1/2} = (1/2) r^{-1/2}
        let rh = EvenExpr::sym_pow(Sym::R, 1);
        let dr = rh.derivative(Sym::R);
        let expect = EvenExpr::monomial(Mono::with(Sym::R, -1), GaussRat::from_rat(rat(1, 2)));
        assert!(dr.sub(&expect).is_zero());
    }

    #[test]
    fn subst_const_on_t() {
        let e = EvenExpr::sym(Sym::T)
            .mul(&EvenExpr::sym(Sym::T))
            .add(&EvenExpr::one());
        let at2 = e.subst_const(Sym::T, &rat(2, 1));
        assert!(at2.sub(&EvenExpr::int(5)).is_zero());
    }
}
