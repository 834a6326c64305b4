//! Polynomial differential forms on R^m (optionally times an R direction
//! with coordinate t), realized inside the Grassmann algebra with the psi
//! generators playing the role of dx and `Dt` the role of dt.

use super::even::{EvenExpr, Sym, XVARS};
use super::grassmann::{Grassmann, OddGen, DT_BIT, PSI};
use super::scalar::GaussRat;
use crate::ring::{rat, Rat, Ring};
use crate::sampling::SplitMix;

/// A differential form with polynomial coefficients on R^m (times R when
/// t-dependence or dt terms are present). The wrapper only fixes the
/// ambient dimension; all algebra happens in [`Grassmann`].
#[derive(Clone, Debug, PartialEq)]
pub struct FormPoly {
    pub dim: usize,
    pub value: Grassmann,
}

impl FormPoly {
    pub fn new(dim: usize, value: Grassmann) -> Self {
        assert!(dim <= 4);
        FormPoly { dim, value }
    }

    pub fn zero(dim: usize) -> Self {
        FormPoly::new(dim, Grassmann::zero())
    }

    pub fn one(dim: usize) -> Self {
        FormPoly::new(dim, Grassmann::one())
    }

    /// Coordinate function x_j (0-based).
    pub fn x(dim: usize, j: usize) -> Self {
        assert!(j < dim);
        FormPoly::new(dim, Grassmann::sym(XVARS[j]))
    }

    /// Basis 1-form dx_j (0-based).
    pub fn dx(dim: usize, j: usize) -> Self {
        assert!(j < dim);
        FormPoly::new(dim, Grassmann::gen(PSI[j]))
    }

    /// The cylinder coordinate t.
    pub fn t(dim: usize) -> Self {
        FormPoly::new(dim, Grassmann::sym(Sym::T))
    }

    pub fn dt(dim: usize) -> Self {
        FormPoly::new(dim, Grassmann::gen(OddGen::Dt))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        FormPoly::new(self.dim, self.value.add(&other.value))
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        FormPoly::new(self.dim, self.value.sub(&other.value))
    }

    pub fn neg(&self) -> Self {
        FormPoly::new(self.dim, self.value.neg())
    }

    pub fn wedge(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        FormPoly::new(self.dim, self.value.mul(&other.value))
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        FormPoly::new(self.dim, self.value.scale_rat(r))
    }

    /// de Rham differential (includes the dt direction).
    pub fn d(&self) -> Self {
        FormPoly::new(self.dim, self.value.d(self.dim, true))
    }

    /// Form-degree grading operator.
    pub fn deg(&self) -> Self {
        FormPoly::new(self.dim, self.value.deg())
    }

    /// Contraction with the coordinate field of t.
    pub fn iota_dt(&self) -> Self {
        FormPoly::new(self.dim, self.value.iota_dt())
    }

    /// Pullback along the slice inclusion t = c.
    pub fn at_t(&self, c: &Rat) -> Self {
        FormPoly::new(self.dim, self.value.pullback_t(c))
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn eq(&self, other: &Self) -> bool {
        self.value.eq(&other.value)
    }

    /// Pullback along the affine map `x_i = sum_j a[i][j] y_j + b[i]`
    /// (square, same dimension): substitutes both coordinates and
    /// coordinate differentials.
    pub fn pullback_affine(&self, a: &[Vec<Rat>], b: &[Rat]) -> Self {
        let m = self.dim;
        assert_eq!(a.len(), m);
        assert_eq!(b.len(), m);
        // images of x_i and dx_i
        let mut x_img = Vec::with_capacity(m);
        let mut dx_img = Vec::with_capacity(m);
        for i in 0..m {
            let mut xe = EvenExpr::rational(b[i].clone());
            let mut de = Grassmann::zero();
            for j in 0..m {
                let c = GaussRat::from_rat(a[i][j].clone());
                xe = xe.add(&EvenExpr::sym(XVARS[j]).scale(&c));
                de = de.add(&Grassmann::gen(PSI[j]).scale(&EvenExpr::scalar(c.clone())));
            }
            x_img.push(xe);
            dx_img.push(de);
        }
        let mut out = Grassmann::zero();
        for (&mask, coeff) in self.value.terms() {
            // substitute coordinates in the coefficient polynomial
            let subbed = subst_poly(coeff, &x_img);
            // rebuild the generator word with substituted differentials
            let mut word = Grassmann::one();
            let mut mm = mask;
            while mm != 0 {
                let i = mm.trailing_zeros();
                mm &= mm - 1;
                let factor = if let Some(p) = PSI.iter().position(|&g| g as u32 == i) {
                    dx_img[p].clone()
                } else {
                    Grassmann::term(1 << i, EvenExpr::one())
                };
                word = word.mul(&factor);
            }
            out = out.add(&Grassmann::scalar(subbed).mul(&word));
        }
        FormPoly::new(m, out)
    }

    /// The homotopy operator `Q a = int_0^1 (slice at t=tau)^*(iota_dt a) dtau`,
    /// exact on polynomial coefficients.
    pub fn concordance_homotopy(&self) -> Self {
        let inner = self.iota_dt();
        let mut out = Grassmann::zero();
        for (&mask, coeff) in inner.value.terms() {
            debug_assert_eq!(mask & DT_BIT, 0);
            out = out.add(&Grassmann::term(mask, integrate_t_unit(coeff)));
        }
        FormPoly::new(self.dim, out)
    }

    /// Residual of the homotopy identity `dQ + Qd - (i_1^* - i_0^*)`.
    pub fn homotopy_identity_residual(&self) -> Self {
        let lhs = self
            .concordance_homotopy()
            .d()
            .add(&self.d().concordance_homotopy());
        let rhs = self.at_t(&rat(1, 1)).sub(&self.at_t(&rat(0, 1)));
        lhs.sub(&rhs)
    }
}

/// Substitute affine images for every coordinate in a polynomial
/// coefficient (exact, all orders).
fn subst_poly(coeff: &EvenExpr, x_img: &[EvenExpr]) -> EvenExpr {
    let mut out = EvenExpr::zero();
    for (mono, c) in coeff.terms() {
        let mut term = EvenExpr::scalar(c.clone());
        let mut rest = *mono;
        for (j, &xv) in XVARS.iter().enumerate() {
            let e = mono.0[xv as usize];
            if e != 0 {
                assert!(e > 0 && e % 2 == 0, "affine pullback needs polynomial x powers");
                rest.0[xv as usize] = 0;
                if j < x_img.len() {
                    for _ in 0..(e / 2) {
                        term = term.mul(&x_img[j]);
                    }
                } else {
                    // coordinate outside the map's range: keep as-is
                    term = term.mul(&EvenExpr::sym_pow(xv, e));
                }
            }
        }
        term = term.mul(&EvenExpr::monomial(rest, GaussRat::from_int(1)));
        out = out.add(&term);
    }
    out
}

/// Exact integral over t in [0, 1] of a polynomial coefficient.
fn integrate_t_unit(coeff: &EvenExpr) -> EvenExpr {
    let mut out = EvenExpr::zero();
    for (mono, c) in coeff.terms() {
        let e = mono.0[Sym::T as usize];
        assert!(e >= 0 && e % 2 == 0, "t-integration needs polynomial t powers");
        let k = (e / 2) as i64;
        let mut m2 = *mono;
        m2.0[Sym::T as usize] = 0;
        out = out.add(&EvenExpr::monomial(
            m2,
            c.mul(&GaussRat::from_rat(rat(1, k + 1))),
        ));
    }
    out
}

/// Random polynomial form on R^dim x R for property tests: degree <= 3 in
/// forms, coefficients small polynomials in x and t.
pub fn random_form(dim: usize, rng: &mut SplitMix) -> FormPoly {
    let mut acc = FormPoly::zero(dim);
    let n_terms = 2 + rng.next_range(4) as usize;
    for _ in 0..n_terms {
        // random coefficient monomial
        let mut c = EvenExpr::scalar(GaussRat::from_rat(rat(
            rng.next_range(9) as i64 - 4,
            1 + rng.next_range(3) as i64,
        )));
        for _ in 0..rng.next_range(3) {
            let which = rng.next_range(dim as u64 + 1) as usize;
            if which == dim {
                c = c.mul(&EvenExpr::sym(Sym::T));
            } else {
                c = c.mul(&EvenExpr::sym(XVARS[which]));
            }
        }
        // random form monomial of degree <= 3
        let mut w = Grassmann::scalar(c);
        let degree = rng.next_range(4) as usize;
        let mut used = vec![false; dim + 1];
        for _ in 0..degree {
            let which = rng.next_range(dim as u64 + 1) as usize;
            if used[which] {
                continue;
            }
            used[which] = true;
            let g = if which == dim {
                Grassmann::gen(OddGen::Dt)
            } else {
                Grassmann::gen(PSI[which])
            };
            w = w.mul(&g);
        }
        acc = acc.add(&FormPoly::new(dim, w));
    }
    acc
}
