//! Infinitesimal generators of the translation actions on functions over
//! the 1|1 and 2|1 moduli, the exponentiated action, the direct pullback
//! action it must reproduce, and the characterization of supersymmetric
//! sections.
//!
//! Sign convention: the degree term of each generator carries the sign
//! that makes `c * r^{deg/2} (x)` closed-form sections (and the holonomy
//! sections `Tr exp(-i r F)`) supersymmetric; the direct action below is
//! the matching pullback action, and the two are compared as exact
//! symbolic identities in the tests.

use super::even::{EvenExpr, Sym};
use super::grassmann::{Grassmann, OddGen, PSI};
use super::scalar::GaussRat;
use crate::modular::ModExpr;

const REL_21: [(OddGen, OddGen); 1] = [(OddGen::Sigma, OddGen::SigmaP)];

/// Ambient form dimension used by the generator actions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    Dim11 { m: usize },
    Dim21 { m: usize },
}

// ---------------------------------------------------------------------------
// 1|1 model
// ---------------------------------------------------------------------------

/// Q = 2i rho d/dr - d - i (rho/r) deg.
pub fn q_op_11(f: &Grassmann, m: usize) -> Grassmann {
    let rho = Grassmann::gen(OddGen::Rho);
    let t1 = Grassmann::i()
        .scale_int(2)
        .mul(&rho)
        .mul(&f.derivative(Sym::R));
    let t2 = f.d(m, false);
    let inv_r = EvenExpr::sym_pow(Sym::R, -2);
    let t3 = Grassmann::i().mul(&rho).mul(&f.deg().scale(&inv_r));
    t1.sub(&t2).sub(&t3)
}

/// exp(i u Q^2 + nu Q) = (1 + i u Q^2)(1 + nu Q) applied to f.
pub fn exp_action_11(f: &Grassmann, m: usize) -> Grassmann {
    let nu = Grassmann::gen(OddGen::Nu);
    let g = f.add(&nu.mul(&q_op_11(f, m)));
    let q2 = q_op_11(&q_op_11(&g, m), m);
    g.add(&Grassmann::i().mul(&Grassmann::sym(Sym::U)).mul(&q2))
}

/// The pullback action of a translation (u, nu) on functions of
/// (r, rho, x, psi): r shifts by 2 i nu rho, x by xi psi with
/// xi = -nu - u rho / r, and psi rescales by (1 - i nu rho / r).
pub fn direct_action_11(f: &Grassmann, m: usize) -> Grassmann {
    let nu = Grassmann::gen(OddGen::Nu);
    let rho = Grassmann::gen(OddGen::Rho);
    let inv_r = EvenExpr::sym_pow(Sym::R, -2);
    let r_shift = Grassmann::i().scale_int(2).mul(&nu).mul(&rho);
    let xi = nu
        .neg()
        .sub(&rho.scale(&EvenExpr::sym(Sym::U).mul(&inv_r)));
    let psi_scale = Grassmann::one().sub(
        &Grassmann::i()
            .mul(&nu)
            .mul(&rho)
            .scale(&inv_r),
    );
    let mut shifts = vec![(Sym::R, r_shift)];
    let mut scales = Vec::new();
    for (j, &p) in PSI.iter().enumerate().take(m) {
        shifts.push((super::even::XVARS[j], xi.mul(&Grassmann::gen(p))));
        scales.push((p, psi_scale.clone()));
    }
    f.subst(&shifts, &scales, &[])
}

// ---------------------------------------------------------------------------
// 2|1 model
// ---------------------------------------------------------------------------

/// (sigma l' - sigma' l)/vol.
fn coeff_a() -> Grassmann {
    let inv_vol = EvenExpr::sym_pow(Sym::Vol, -2);
    Grassmann::gen(OddGen::Sigma)
        .scale(&EvenExpr::sym(Sym::Lp))
        .sub(&Grassmann::gen(OddGen::SigmaP).scale(&EvenExpr::sym(Sym::L)))
        .scale(&inv_vol)
}

/// (sigma lbar' - sigma' lbar)/vol.
fn coeff_b() -> Grassmann {
    let inv_vol = EvenExpr::sym_pow(Sym::Vol, -2);
    Grassmann::gen(OddGen::Sigma)
        .scale(&EvenExpr::sym(Sym::Lpbar))
        .sub(&Grassmann::gen(OddGen::SigmaP).scale(&EvenExpr::sym(Sym::Lbar)))
        .scale(&inv_vol)
}

/// R = (sigma lbar' - sigma' lbar)/vol (x) d.
pub fn r_op_21(f: &Grassmann, m: usize) -> Grassmann {
    coeff_b().mul(&f.d(m, false)).quotient_pairs(&REL_21)
}

/// Q = 2i sigma d/d(lbar) + 2i sigma' d/d(lbar') - d
///     - i (sigma l' - sigma' l)/vol deg.
pub fn q_op_21(f: &Grassmann, m: usize) -> Grassmann {
    let two_i = Grassmann::i().scale_int(2);
    let t1 = two_i
        .mul(&Grassmann::gen(OddGen::Sigma))
        .mul(&f.derivative(Sym::Lbar));
    let t2 = two_i
        .mul(&Grassmann::gen(OddGen::SigmaP))
        .mul(&f.derivative(Sym::Lpbar));
    let t3 = f.d(m, false);
    let t4 = Grassmann::i().mul(&coeff_a()).mul(&f.deg());
    t1.add(&t2).sub(&t3).sub(&t4).quotient_pairs(&REL_21)
}

/// exp(u R + i ubar Q^2 + nu Q) = (1 + u R)(1 + i ubar Q^2)(1 + nu Q)
/// applied to f, in the quotient by sigma sigma' = 0.
pub fn exp_action_21(f: &Grassmann, m: usize) -> Grassmann {
    let nu = Grassmann::gen(OddGen::Nu);
    let g = f.add(&nu.mul(&q_op_21(f, m))).quotient_pairs(&REL_21);
    let q2 = q_op_21(&q_op_21(&g, m), m);
    let h = g.add(
        &Grassmann::i()
            .mul(&Grassmann::sym(Sym::Ubar))
            .mul(&q2),
    );
    let h = h.quotient_pairs(&REL_21);
    h.add(&Grassmann::sym(Sym::U).mul(&r_op_21(&h, m)))
        .quotient_pairs(&REL_21)
}

/// The pullback action of (u, ubar, nu) on functions of
/// (l, lbar, sigma, l', lbar', sigma', x, psi).
pub fn direct_action_21(f: &Grassmann, m: usize) -> Grassmann {
    let nu = Grassmann::gen(OddGen::Nu);
    let sigma = Grassmann::gen(OddGen::Sigma);
    let sigmap = Grassmann::gen(OddGen::SigmaP);
    let two_i_nu = Grassmann::i().scale_int(2).mul(&nu);
    let a = coeff_a();
    let b = coeff_b();
    let xi = nu
        .neg()
        .sub(&a.scale(&EvenExpr::sym(Sym::Ubar)))
        .add(&b.scale(&EvenExpr::sym(Sym::U)))
        .quotient_pairs(&REL_21);
    let psi_scale = Grassmann::one()
        .sub(&Grassmann::i().mul(&nu).mul(&a))
        .quotient_pairs(&REL_21);
    // vol = lbar l' - lbar' l picks up its shift through the chain rule
    // inside the symbol derivatives, so only the independent symbols are
    // listed here
    let mut shifts = vec![
        (Sym::Lbar, two_i_nu.mul(&sigma)),
        (Sym::Lpbar, two_i_nu.mul(&sigmap)),
    ];
    let mut scales = Vec::new();
    for (j, &p) in PSI.iter().enumerate().take(m) {
        shifts.push((super::even::XVARS[j], xi.mul(&Grassmann::gen(p))));
        scales.push((p, psi_scale.clone()));
    }
    f.subst(&shifts, &scales, &REL_21)
}

// ---------------------------------------------------------------------------
// Supersymmetric sections
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
pub struct SusyVerdict {
    pub accepted: bool,
    pub witness: String,
}

impl SusyVerdict {
    fn accept() -> Self {
        SusyVerdict {
            accepted: true,
            witness: String::new(),
        }
    }

    fn reject(witness: impl Into<String>) -> Self {
        SusyVerdict {
            accepted: false,
            witness: witness.into(),
        }
    }
}

/// Candidate section of kappa^l over the 1|1 vacua: a sum of terms
/// (coefficient depending on r) (x) (form on R^m).
#[derive(Clone, Debug)]
pub struct SusySection11 {
    pub weight: i64,
    pub dim: usize,
    pub terms: Vec<(EvenExpr, Grassmann)>,
}

impl SusySection11 {
    /// A section is supersymmetric iff every term is
    /// `c * r^{deg(alpha)/2} (x) alpha` with alpha closed of degree
    /// congruent to the weight mod 2.
    pub fn solve(&self) -> SusyVerdict {
        for (idx, (coeff, form)) in self.terms.iter().enumerate() {
            // homogeneous form degree
            let degs: Vec<u32> = form
                .terms()
                .keys()
                .map(|&m| Grassmann::form_degree_of(m))
                .collect();
            if degs.is_empty() {
                continue;
            }
            let d = degs[0];
            if degs.iter().any(|&x| x != d) {
                return SusyVerdict::reject(format!(
                    "term {}: form is not homogeneous in degree",
                    idx
                ));
            }
            if (d as i64 - self.weight).rem_euclid(2) != 0 {
                return SusyVerdict::reject(format!(
                    "term {}: degree {} does not match weight {} mod 2",
                    idx, d, self.weight
                ));
            }
            if !form.d(self.dim, false).is_zero() {
                return SusyVerdict::reject(format!("term {}: form is not closed", idx));
            }
            if let Some(err) = single_power_mismatch(coeff, Sym::R, d as i16) {
                return SusyVerdict::reject(format!(
                    "term {}: generator equation g' = (deg/2r) g fails: {}",
                    idx, err
                ));
            }
        }
        SusyVerdict::accept()
    }

    /// The nu-coefficient of the generator action on the section; zero
    /// exactly when the section is supersymmetric.
    pub fn generator_residual(&self) -> Grassmann {
        let mut f = Grassmann::zero();
        for (coeff, form) in &self.terms {
            f = f.add(&Grassmann::scalar(coeff.clone()).mul(form));
        }
        q_op_11(&f, self.dim)
    }
}

/// Check that `coeff` is a nonzero multiple of `sym^{half_exp/2}` and
/// involves no other symbol; returns a description of the failure.
fn single_power_mismatch(coeff: &EvenExpr, sym: Sym, half_exp: i16) -> Option<String> {
    if coeff.is_zero() {
        return None;
    }
    let terms = coeff.terms();
    if terms.len() != 1 {
        return Some("coefficient is not a single monomial".into());
    }
    let (mono, _) = terms.iter().next().unwrap();
    for i in 0..super::even::NSYM {
        let e = mono.0[i];
        let expected = if i == sym as usize { half_exp } else { 0 };
        if e != expected {
            return Some(format!(
                "exponent of {} is {}/2, expected {}/2",
                super::even::SYM_NAMES[i],
                e,
                expected
            ));
        }
    }
    None
}

/// Candidate section of omega^{k/2} over the 2|1 vacua: terms
/// (vol-power coefficient) * (modular token) (x) (form on R^m).
#[derive(Clone, Debug)]
pub struct SusySection21 {
    pub weight: i64,
    pub dim: usize,
    pub terms: Vec<(EvenExpr, ModExpr, Grassmann)>,
}

impl SusySection21 {
    /// A section is supersymmetric iff every term is
    /// `vol^{deg/2} * F (x) alpha` with alpha closed and F a holomorphic
    /// SL2(Z)-invariant token of scaling weight (deg - k)/2.
    pub fn solve(&self) -> SusyVerdict {
        for (idx, (coeff, token, form)) in self.terms.iter().enumerate() {
            let degs: Vec<u32> = form
                .terms()
                .keys()
                .map(|&m| Grassmann::form_degree_of(m))
                .collect();
            if degs.is_empty() {
                continue;
            }
            let d = degs[0];
            if degs.iter().any(|&x| x != d) {
                return SusyVerdict::reject(format!(
                    "term {}: form is not homogeneous in degree",
                    idx
                ));
            }
            if !form.d(self.dim, false).is_zero() {
                return SusyVerdict::reject(format!("term {}: form is not closed", idx));
            }
            if let Some(err) = single_power_mismatch(coeff, Sym::Vol, d as i16) {
                return SusyVerdict::reject(format!(
                    "term {}: vol-power equation d(lbar) f = (deg/2)(l'/vol) f fails: {}",
                    idx, err
                ));
            }
            if !token.all_holomorphic() {
                return SusyVerdict::reject(format!(
                    "term {}: token factor is not holomorphic",
                    idx
                ));
            }
            if !token.all_sl2_invariant() {
                return SusyVerdict::reject(format!(
                    "term {}: token factor is not SL2(Z)-invariant",
                    idx
                ));
            }
            match token.homogeneous_weight_half() {
                Some((a, 0)) if a as i64 == self.weight - d as i64 => {}
                Some((a, b)) => {
                    return SusyVerdict::reject(format!(
                        "term {}: token weight ({}/2, {}/2) is not (({} - {})/2, 0)",
                        idx, a, b, self.weight, d
                    ))
                }
                None => {
                    return SusyVerdict::reject(format!(
                        "term {}: token factor has mixed scaling weight",
                        idx
                    ))
                }
            }
        }
        SusyVerdict::accept()
    }

    /// Generator residual with the token instantiated by a holomorphic
    /// stand-in monomial l^{-p} l'^{-q} of the same scaling weight.
    pub fn generator_residual_with_standins(&self) -> Grassmann {
        let mut f = Grassmann::zero();
        for (coeff, token, form) in &self.terms {
            let standin = match token.homogeneous_weight_half() {
                // weight a/2 means value(c Lam) = c^{a/2} value; the
                // monomial l^{-p} l'^{-q} has weight -(p+q), i.e. a = -2(p+q)
                Some((a, 0)) if a <= 0 && a % 2 == 0 => {
                    let total = (-a / 2) as i16;
                    let p = total / 2;
                    let q = total - p;
                    EvenExpr::sym_pow(Sym::L, -2 * p).mul(&EvenExpr::sym_pow(Sym::Lp, -2 * q))
                }
                _ => EvenExpr::one(),
            };
            f = f.add(&Grassmann::scalar(coeff.mul(&standin)).mul(form));
        }
        q_op_21(&f, self.dim)
    }
}

/// A named accept/reject case for the section characterization.
pub enum SusyCase {
    C11(SusySection11),
    C21(SusySection21),
}

/// The calibration library: sections that must be accepted exactly when
/// they have the characterized shape (coefficient r^{deg/2} or
/// vol^{deg/2} times a holomorphic invariant token of the right weight,
/// closed form, parity matching the twist).
pub fn susy_case_library() -> Vec<(&'static str, bool, SusyCase)> {
    use crate::modular::{ModExpr, Token, TokenKind};
    use crate::ring::Ring;
    let dx = Grassmann::gen(OddGen::Psi1);
    let dy = Grassmann::gen(OddGen::Psi2);
    let dz = Grassmann::gen(OddGen::Psi3);
    let one_mod = ModExpr::one();
    let e4 = ModExpr::token(Token::new(TokenKind::E2k(2)));
    let e6 = ModExpr::token(Token::new(TokenKind::E2k(3)));
    let e2 = ModExpr::token(Token::new(TokenKind::E2));
    let e2star = ModExpr::token(Token::new(TokenKind::E2Star));
    let mut cases: Vec<(&'static str, bool, SusyCase)> = Vec::new();
    let c11 = |w: i64, dim: usize, terms: Vec<(EvenExpr, Grassmann)>| {
        SusyCase::C11(SusySection11 {
            weight: w,
            dim,
            terms,
        })
    };
    let c21 = |w: i64, dim: usize, terms: Vec<(EvenExpr, ModExpr, Grassmann)>| {
        SusyCase::C21(SusySection21 {
            weight: w,
            dim,
            terms,
        })
    };
    // 1|1 accepts
    cases.push((
        "constant times a closed 0-form",
        true,
        c11(0, 1, vec![(EvenExpr::one(), Grassmann::one())]),
    ));
    cases.push((
        "suspension shape r^(1/2) dx",
        true,
        c11(
            1,
            1,
            vec![(EvenExpr::sym_pow(Sym::R, 1), dx.clone())],
        ),
    ));
    cases.push((
        "r dx dy in even twist",
        true,
        c11(0, 2, vec![(EvenExpr::sym_pow(Sym::R, 2), dx.mul(&dy))]),
    ));
    cases.push((
        "r^(3/2) volume form on R^3",
        true,
        c11(
            1,
            3,
            vec![(EvenExpr::sym_pow(Sym::R, 3), dx.mul(&dy).mul(&dz))],
        ),
    ));
    cases.push((
        "scaled suspension term",
        true,
        c11(
            1,
            1,
            vec![(
                EvenExpr::sym_pow(Sym::R, 1).scale(&GaussRat::from_int(-3)),
                dx.clone(),
            )],
        ),
    ));
    cases.push((
        "sum of matching terms",
        true,
        c11(
            0,
            2,
            vec![
                (EvenExpr::one(), Grassmann::one()),
                (EvenExpr::sym_pow(Sym::R, 2), dx.mul(&dy)),
            ],
        ),
    ));
    // 1|1 rejects
    cases.push((
        "wrong radial power r^2 on a 2-form",
        false,
        c11(0, 2, vec![(EvenExpr::sym_pow(Sym::R, 4), dx.mul(&dy))]),
    ));
    cases.push((
        "non-closed form x2 dx",
        false,
        c11(
            1,
            2,
            vec![(
                EvenExpr::sym_pow(Sym::R, 1),
                Grassmann::sym(super::even::XVARS[1]).mul(&dx),
            )],
        ),
    ));
    cases.push((
        "parity mismatch: 1-form in even twist",
        false,
        c11(0, 1, vec![(EvenExpr::sym_pow(Sym::R, 1), dx.clone())]),
    ));
    cases.push((
        "coefficient with a spurious symbol",
        false,
        c11(
            1,
            1,
            vec![(
                EvenExpr::sym_pow(Sym::R, 1).mul(&EvenExpr::sym(Sym::U)),
                dx.clone(),
            )],
        ),
    ));
    cases.push((
        "mixed-degree form in one term",
        false,
        c11(
            0,
            2,
            vec![(
                EvenExpr::sym_pow(Sym::R, 2),
                dx.mul(&dy).add(&Grassmann::one()),
            )],
        ),
    ));
    cases.push((
        "missing radial power on a 2-form",
        false,
        c11(0, 2, vec![(EvenExpr::one(), dx.mul(&dy))]),
    ));
    // 2|1 accepts
    cases.push((
        "constant section of weight 0",
        true,
        c21(0, 1, vec![(EvenExpr::one(), one_mod.clone(), Grassmann::one())]),
    ));
    cases.push((
        "vol^2 E4 on a closed 4-form, weight -8 + 4",
        true,
        c21(
            -4,
            4,
            vec![(
                EvenExpr::sym_pow(Sym::Vol, 4),
                e4.clone(),
                dx.mul(&dy).mul(&dz).mul(&Grassmann::gen(OddGen::Psi4)),
            )],
        ),
    ));
    cases.push((
        "vol E6 on a closed 2-form, weight -12 + 2",
        true,
        c21(
            -10,
            2,
            vec![(EvenExpr::sym_pow(Sym::Vol, 2), e6.clone(), dx.mul(&dy))],
        ),
    ));
    cases.push((
        "token-free vol^(1/2) dx of weight 1",
        true,
        c21(
            1,
            1,
            vec![(EvenExpr::sym_pow(Sym::Vol, 1), one_mod.clone(), dx.clone())],
        ),
    ));
    cases.push((
        "E4^2 with matching weight",
        true,
        c21(
            -16,
            0,
            vec![(EvenExpr::one(), e4.mul(&e4), Grassmann::one())],
        ),
    ));
    // 2|1 rejects
    cases.push((
        "E2 token is not invariant",
        false,
        c21(-4, 0, vec![(EvenExpr::one(), e2, Grassmann::one())]),
    ));
    cases.push((
        "E2* token is not holomorphic",
        false,
        c21(-4, 0, vec![(EvenExpr::one(), e2star, Grassmann::one())]),
    ));
    cases.push((
        "wrong vol power on a 2-form",
        false,
        c21(
            -10,
            2,
            vec![(EvenExpr::sym_pow(Sym::Vol, 4), e6.clone(), dx.mul(&dy))],
        ),
    ));
    cases.push((
        "weight mismatch for E4",
        false,
        c21(0, 0, vec![(EvenExpr::one(), e4.clone(), Grassmann::one())]),
    ));
    cases.push((
        "non-closed 2|1 term",
        false,
        c21(
            -9,
            2,
            vec![(
                EvenExpr::sym_pow(Sym::Vol, 1),
                e6,
                Grassmann::sym(super::even::XVARS[1]).mul(&dx),
            )],
        ),
    ));
    cases
}

/// Evaluate a library case.
pub fn solve_case(case: &SusyCase) -> SusyVerdict {
    match case {
        SusyCase::C11(s) => s.solve(),
        SusyCase::C21(s) => s.solve(),
    }
}

// ---------------------------------------------------------------------------
// Vector fields and the composition law
// ---------------------------------------------------------------------------

/// D = d/d(theta) - i theta d/dt acting on functions of (t, theta).
pub fn d_field_11(f: &Grassmann) -> Grassmann {
    f.odd_derivative(OddGen::Theta).sub(
        &Grassmann::i()
            .mul(&Grassmann::gen(OddGen::Theta))
            .mul(&f.derivative(Sym::T)),
    )
}

/// D = d/d(theta) - i theta d/d(zbar) on functions of (z, zbar, theta).
pub fn d_field_21(f: &Grassmann) -> Grassmann {
    f.odd_derivative(OddGen::Theta).sub(
        &Grassmann::i()
            .mul(&Grassmann::gen(OddGen::Theta))
            .mul(&f.derivative(Sym::Zbar)),
    )
}

/// Residual of D^2 = -i d/dt on f.
pub fn d_squared_residual_11(f: &Grassmann) -> Grassmann {
    d_field_11(&d_field_11(f)).add(&Grassmann::i().mul(&f.derivative(Sym::T)))
}

pub fn d_squared_residual_21(f: &Grassmann) -> Grassmann {
    d_field_21(&d_field_21(f)).add(&Grassmann::i().mul(&f.derivative(Sym::Zbar)))
}

/// Element c0 + c1 Q of the algebra generated by an odd operator Q over
/// the Grassmann coefficients, with Q^2 = A a central even symbol.
#[derive(Clone, Debug)]
pub struct QPoly {
    pub c0: Grassmann,
    pub c1: Grassmann,
}

impl QPoly {
    pub fn one() -> Self {
        QPoly {
            c0: Grassmann::one(),
            c1: Grassmann::zero(),
        }
    }

    pub fn q_times(g: Grassmann) -> Self {
        QPoly {
            c0: Grassmann::zero(),
            c1: g,
        }
    }

    /// Negate odd-parity terms (the sign picked up moving Q past them).
    fn flip(g: &Grassmann) -> Grassmann {
        let mut out = Grassmann::zero();
        for (&m, c) in g.terms() {
            let t = Grassmann::term(m, c.clone());
            if m.count_ones() % 2 == 1 {
                out = out.sub(&t);
            } else {
                out = out.add(&t);
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let a_sym = Grassmann::sym(Sym::QSq);
        QPoly {
            c0: self
                .c0
                .mul(&other.c0)
                .add(&self.c1.mul(&Self::flip(&other.c1)).mul(&a_sym)),
            c1: self
                .c0
                .mul(&other.c1)
                .add(&self.c1.mul(&Self::flip(&other.c0))),
        }
    }

    pub fn eq(&self, other: &Self) -> bool {
        self.c0.eq(&other.c0) && self.c1.eq(&other.c1)
    }
}

/// The composition law exp(iuQ^2 + nu Q) exp(iu'Q^2 + nu'Q) =
/// exp(i(u + u' + i nu nu')Q^2 + (nu + nu')Q), verified in the finite
/// quotient: (1 + nu Q)(1 + nu' Q) = (1 - nu nu' A)(1 + (nu + nu')Q).
pub fn exp_composition_identity_holds() -> bool {
    let nu = Grassmann::gen(OddGen::Nu);
    let nup = Grassmann::gen(OddGen::Nu2);
    let lhs = QPoly {
        c0: Grassmann::one(),
        c1: nu.clone(),
    }
    .mul(&QPoly {
        c0: Grassmann::one(),
        c1: nup.clone(),
    });
    let a_sym = Grassmann::sym(Sym::QSq);
    let rhs = QPoly {
        c0: Grassmann::one().sub(&nu.mul(&nup).mul(&a_sym)),
        c1: Grassmann::zero(),
    }
    .mul(&QPoly {
        c0: Grassmann::one(),
        c1: nu.add(&nup),
    });
    lhs.eq(&rhs)
}
