//! Multivectors over named odd generators with [`EvenExpr`] coefficients.
//!
//! Monomials are bitmasks over the generator alphabet in a fixed canonical
//! order; reordering signs come from permutation parity, squares vanish.
//! The psi generators double as the dx basis of differential forms, and
//! `Dt` is the extra odd direction used by the concordance operator.

use super::even::{EvenExpr, Sym, XVARS};
use super::scalar::GaussRat;
use crate::ring::Rat;
use std::collections::BTreeMap;
use std::fmt;

/// Odd generators in canonical order (bit position = discriminant).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
#[repr(u32)]
pub enum OddGen {
    Theta = 0,
    Theta2,
    Theta3,
    Rho,
    Nu,
    Nu2,
    Sigma,
    SigmaP,
    Dt,
    Psi1,
    Psi2,
    Psi3,
    Psi4,
}

pub const ODD_NAMES: [&str; 13] = [
    "theta", "theta'", "theta''", "rho", "nu", "nu'", "sigma", "sigma'", "dt", "psi1", "psi2",
    "psi3", "psi4",
];

pub const PSI: [OddGen; 4] = [OddGen::Psi1, OddGen::Psi2, OddGen::Psi3, OddGen::Psi4];

/// Bitmask over `OddGen`; `PSI_MASK | DT_MASK` are the form directions.
pub type Mask = u32;

pub const DT_BIT: Mask = 1 << (OddGen::Dt as u32);

pub fn psi_mask(m: usize) -> Mask {
    let mut acc = 0;
    for g in PSI.iter().take(m) {
        acc |= 1 << (*g as u32);
    }
    acc
}

pub fn form_bits() -> Mask {
    psi_mask(4) | DT_BIT
}

/// Number of transpositions needed to merge the (sorted) generator words
/// of `a` and `b`; the product sign is (-1)^swaps. Zero overlap assumed.
fn merge_sign(a: Mask, b: Mask) -> i32 {
    let mut swaps = 0u32;
    let mut bb = b;
    while bb != 0 {
        let i = bb.trailing_zeros();
        // generators of `a` strictly above position i must be crossed
        swaps += (a >> (i + 1)).count_ones();
        bb &= bb - 1;
    }
    if swaps % 2 == 0 {
        1
    } else {
        -1
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Grassmann {
    terms: BTreeMap<Mask, EvenExpr>,
}

impl Grassmann {
    pub fn zero() -> Self {
        Grassmann::default()
    }

    pub fn scalar(c: EvenExpr) -> Self {
        let mut t = BTreeMap::new();
        if !c.is_syntactically_zero() {
            t.insert(0, c);
        }
        Grassmann { terms: t }
    }

    pub fn one() -> Self {
        Self::scalar(EvenExpr::one())
    }

    pub fn int(n: i64) -> Self {
        Self::scalar(EvenExpr::int(n))
    }

    pub fn rational(r: Rat) -> Self {
        Self::scalar(EvenExpr::rational(r))
    }

    pub fn i() -> Self {
        Self::scalar(EvenExpr::i())
    }

    pub fn sym(s: Sym) -> Self {
        Self::scalar(EvenExpr::sym(s))
    }

    pub fn gen(g: OddGen) -> Self {
        let mut t = BTreeMap::new();
        t.insert(1 << (g as u32), EvenExpr::one());
        Grassmann { terms: t }
    }

    pub fn term(mask: Mask, c: EvenExpr) -> Self {
        let mut t = BTreeMap::new();
        if !c.is_syntactically_zero() {
            t.insert(mask, c);
        }
        Grassmann { terms: t }
    }

    pub fn terms(&self) -> &BTreeMap<Mask, EvenExpr> {
        &self.terms
    }

    pub fn coeff(&self, mask: Mask) -> EvenExpr {
        self.terms.get(&mask).cloned().unwrap_or_else(EvenExpr::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.terms.clone();
        for (m, c) in &other.terms {
            let e = out.entry(*m).or_insert_with(EvenExpr::zero);
            *e = e.add(c);
            if e.is_syntactically_zero() {
                out.remove(m);
            }
        }
        Grassmann { terms: out }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Grassmann {
            terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out: BTreeMap<Mask, EvenExpr> = BTreeMap::new();
        for (&ma, ca) in &self.terms {
            for (&mb, cb) in &other.terms {
                if ma & mb != 0 {
                    continue; // repeated generator squares to zero
                }
                let sign = merge_sign(ma, mb);
                let mut c = ca.mul(cb);
                if sign < 0 {
                    c = c.neg();
                }
                let e = out.entry(ma | mb).or_insert_with(EvenExpr::zero);
                *e = e.add(&c);
            }
        }
        out.retain(|_, c| !c.is_syntactically_zero());
        Grassmann { terms: out }
    }

    pub fn scale(&self, c: &EvenExpr) -> Self {
        let mut out = Grassmann::zero();
        for (m, v) in &self.terms {
            let w = v.mul(c);
            if !w.is_syntactically_zero() {
                out.terms.insert(*m, w);
            }
        }
        out
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        self.scale(&EvenExpr::rational(r.clone()))
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&EvenExpr::int(n))
    }

    /// Termwise derivative on the even coefficients.
    pub fn derivative(&self, s: Sym) -> Self {
        let mut out = Grassmann::zero();
        for (m, c) in &self.terms {
            let d = c.derivative(s);
            if !d.is_syntactically_zero() {
                out.terms.insert(*m, d);
            }
        }
        out
    }

    /// Left derivative with respect to an odd generator.
    pub fn odd_derivative(&self, g: OddGen) -> Self {
        let bit = 1u32 << (g as u32);
        let mut out = Grassmann::zero();
        for (&m, c) in &self.terms {
            if m & bit == 0 {
                continue;
            }
            // sign from moving the derivative past generators below g
            let below = (m & (bit - 1)).count_ones();
            let mut v = c.clone();
            if below % 2 == 1 {
                v = v.neg();
            }
            let e = out
                .terms
                .entry(m & !bit)
                .or_insert_with(EvenExpr::zero);
            *e = e.add(&v);
        }
        out.terms.retain(|_, c| !c.is_syntactically_zero());
        out
    }

    /// Form degree operator: multiplies each term by its number of
    /// psi/dt generators.
    pub fn deg(&self) -> Self {
        let fb = form_bits();
        let mut out = Grassmann::zero();
        for (&m, c) in &self.terms {
            let k = (m & fb).count_ones() as i64;
            if k != 0 {
                out.terms.insert(m, c.scale(&GaussRat::from_int(k)));
            }
        }
        out
    }

    pub fn form_degree_of(mask: Mask) -> u32 {
        (mask & form_bits()).count_ones()
    }

    /// Total parity: odd generators counted mod 2 per term; None if mixed.
    pub fn parity(&self) -> Option<u32> {
        let mut p: Option<u32> = None;
        for &m in self.terms.keys() {
            let q = m.count_ones() % 2;
            match p {
                None => p = Some(q),
                Some(prev) if prev == q => {}
                _ => return None,
            }
        }
        p.or(Some(0))
    }

    /// de Rham differential over the first `m` coordinates, plus the `t`
    /// direction when `with_t`.
    pub fn d(&self, m: usize, with_t: bool) -> Self {
        let mut out = Grassmann::zero();
        for (j, &x) in XVARS.iter().enumerate().take(m) {
            let dj = self.derivative(x);
            if !dj.terms.is_empty() {
                out = out.add(&Grassmann::gen(PSI[j]).mul(&dj));
            }
        }
        if with_t {
            let dt = self.derivative(Sym::T);
            if !dt.terms.is_empty() {
                out = out.add(&Grassmann::gen(OddGen::Dt).mul(&dt));
            }
        }
        out
    }

    /// Contraction with the vector field dual to `dt`.
    pub fn iota_dt(&self) -> Self {
        self.odd_derivative(OddGen::Dt)
    }

    /// Pull back along the inclusion t = c: drop dt terms and substitute.
    pub fn pullback_t(&self, c: &Rat) -> Self {
        let mut out = Grassmann::zero();
        for (&m, v) in &self.terms {
            if m & DT_BIT != 0 {
                continue;
            }
            let w = v.subst_const(Sym::T, c);
            if !w.is_syntactically_zero() {
                out.terms.insert(m, w);
            }
        }
        out
    }

    /// Kill every term containing both generators of any listed pair
    /// (the sigma sigma' = 0 relation).
    pub fn quotient_pairs(&self, pairs: &[(OddGen, OddGen)]) -> Self {
        let mut out = self.clone();
        out.terms.retain(|&m, _| {
            !pairs.iter().any(|&(a, b)| {
                m & (1 << (a as u32)) != 0 && m & (1 << (b as u32)) != 0
            })
        });
        out
    }

    /// First-order substitution: even symbols shifted by nilpotent
    /// increments (pairwise products of increments must vanish, possibly
    /// only modulo the declared relations) and odd generators rescaled by
    /// even factors. The result is reduced modulo the relations.
    ///
    /// Every `subst` call in this crate satisfies the nilpotency contract
    /// by construction; it is asserted in debug builds.
    pub fn subst(
        &self,
        even_shifts: &[(Sym, Grassmann)],
        odd_scales: &[(OddGen, Grassmann)],
        relations: &[(OddGen, OddGen)],
    ) -> Self {
        #[cfg(debug_assertions)]
        {
            for (i, (_, a)) in even_shifts.iter().enumerate() {
                for (_, b) in even_shifts.iter().skip(i) {
                    debug_assert!(
                        a.mul(b).quotient_pairs(relations).is_zero(),
                        "even shifts must have vanishing pairwise products"
                    );
                }
            }
        }
        let mut out = Grassmann::zero();
        for (&mask, coeff) in &self.terms {
            // Taylor expansion of the coefficient to first order
            let mut c_part = Grassmann::scalar(coeff.clone());
            for (s, shift) in even_shifts {
                let d = coeff.derivative(*s);
                if !d.is_syntactically_zero() {
                    c_part = c_part.add(&shift.mul(&Grassmann::scalar(d)));
                }
            }
            // generator word with rescaled generators, in canonical order
            let mut word = Grassmann::one();
            let mut mm = mask;
            while mm != 0 {
                let i = mm.trailing_zeros();
                mm &= mm - 1;
                let g: OddGen = unsafe { std::mem::transmute(i) };
                let mut factor = Grassmann::gen(g);
                if let Some((_, scale)) = odd_scales.iter().find(|(h, _)| *h as u32 == i) {
                    factor = factor.mul(scale);
                }
                word = word.mul(&factor).quotient_pairs(relations);
            }
            out = out.add(&c_part.mul(&word));
        }
        out.quotient_pairs(relations)
    }

    /// Identically zero as a function (semantic test).
    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|c| c.is_zero())
    }

    pub fn eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (&m, c) in &self.terms {
            let mut s = format!("[{}]", c.render());
            let mut mm = m;
            while mm != 0 {
                let i = mm.trailing_zeros();
                mm &= mm - 1;
                s.push_str(&format!("*{}", ODD_NAMES[i as usize]));
            }
            parts.push(s);
        }
        parts.join(" + ")
    }
}

impl fmt::Display for Grassmann {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}
