//! The 1|1 and 2|1 super group laws, lattice data and the projection maps
//! whose lattice-invariance makes the nilpotent moduli directions visible.

use super::even::{EvenExpr, Sym};
use super::grassmann::{Grassmann, OddGen};
use super::SuperError;

/// Point of the 1|1 super line: an even time component and an odd
/// component, both as Grassmann expressions.
#[derive(Clone, Debug)]
pub struct SuperPoint11 {
    pub t: Grassmann,
    pub theta: Grassmann,
}

impl SuperPoint11 {
    pub fn identity() -> Self {
        SuperPoint11 {
            t: Grassmann::zero(),
            theta: Grassmann::zero(),
        }
    }

    /// The generic symbolic point (t, theta).
    pub fn generic() -> Self {
        SuperPoint11 {
            t: Grassmann::sym(Sym::T),
            theta: Grassmann::gen(OddGen::Theta),
        }
    }

    pub fn eq(&self, other: &Self) -> bool {
        self.t.eq(&other.t) && self.theta.eq(&other.theta)
    }
}

/// Group law (t, th) . (t', th') = (t + t' + i th th', th + th').
pub fn group_mul_11(a: &SuperPoint11, b: &SuperPoint11) -> Result<SuperPoint11, SuperError> {
    check_parity(&[&a.theta, &b.theta], 1)?;
    let cross = Grassmann::i().mul(&a.theta).mul(&b.theta);
    Ok(SuperPoint11 {
        t: a.t.add(&b.t).add(&cross),
        theta: a.theta.add(&b.theta),
    })
}

/// Point of R^{2|1}: (z, zbar, theta). The two even components are
/// independent coordinates (zbar is not derived from z).
#[derive(Clone, Debug)]
pub struct SuperPoint21 {
    pub z: Grassmann,
    pub zbar: Grassmann,
    pub theta: Grassmann,
}

impl SuperPoint21 {
    pub fn identity() -> Self {
        SuperPoint21 {
            z: Grassmann::zero(),
            zbar: Grassmann::zero(),
            theta: Grassmann::zero(),
        }
    }

    pub fn generic() -> Self {
        SuperPoint21 {
            z: Grassmann::sym(Sym::Z),
            zbar: Grassmann::sym(Sym::Zbar),
            theta: Grassmann::gen(OddGen::Theta),
        }
    }

    pub fn eq(&self, other: &Self) -> bool {
        self.z.eq(&other.z) && self.zbar.eq(&other.zbar) && self.theta.eq(&other.theta)
    }
}

/// Group law (z, zbar, th) . (z', zbar', th') =
/// (z + z', zbar + zbar' + i th th', th + th').
pub fn group_mul_21(a: &SuperPoint21, b: &SuperPoint21) -> Result<SuperPoint21, SuperError> {
    check_parity(&[&a.theta, &b.theta], 1)?;
    let cross = Grassmann::i().mul(&a.theta).mul(&b.theta);
    Ok(SuperPoint21 {
        z: a.z.add(&b.z),
        zbar: a.zbar.add(&b.zbar).add(&cross),
        theta: a.theta.add(&b.theta),
    })
}

fn check_parity(items: &[&Grassmann], parity: u32) -> Result<(), SuperError> {
    for g in items {
        match g.parity() {
            Some(p) if p == parity || g.is_zero() => {}
            _ => {
                return Err(SuperError::Structure(
                    "odd component has mixed or wrong parity".into(),
                ))
            }
        }
    }
    Ok(())
}

/// Super lattice basis: two R^{2|1} vectors whose odd parts must satisfy
/// sigma sigma' = 0 for the basis vectors to commute.
#[derive(Clone, Debug)]
pub struct SuperLattice {
    pub ell: Grassmann,
    pub ellbar: Grassmann,
    pub sigma: Grassmann,
    pub ellp: Grassmann,
    pub ellpbar: Grassmann,
    pub sigmap: Grassmann,
    /// odd-generator pairs declared to multiply to zero
    pub relations: Vec<(OddGen, OddGen)>,
}

impl SuperLattice {
    /// The universal symbolic lattice with the commutation relation
    /// declared.
    pub fn standard() -> Self {
        SuperLattice {
            ell: Grassmann::sym(Sym::L),
            ellbar: Grassmann::sym(Sym::Lbar),
            sigma: Grassmann::gen(OddGen::Sigma),
            ellp: Grassmann::sym(Sym::Lp),
            ellpbar: Grassmann::sym(Sym::Lpbar),
            sigmap: Grassmann::gen(OddGen::SigmaP),
            relations: vec![(OddGen::Sigma, OddGen::SigmaP)],
        }
    }

    /// Reduced lattice (sigma = sigma' = 0).
    pub fn reduced() -> Self {
        let mut l = Self::standard();
        l.sigma = Grassmann::zero();
        l.sigmap = Grassmann::zero();
        l
    }

    pub fn reduce(&self, g: &Grassmann) -> Grassmann {
        g.quotient_pairs(&self.relations)
    }

    /// The commutation condition ell_vec . ellp_vec = ellp_vec . ell_vec,
    /// equivalent to sigma sigma' = 0 after reduction.
    pub fn commutation_holds(&self) -> bool {
        let v = SuperPoint21 {
            z: self.ell.clone(),
            zbar: self.ellbar.clone(),
            theta: self.sigma.clone(),
        };
        let w = SuperPoint21 {
            z: self.ellp.clone(),
            zbar: self.ellpbar.clone(),
            theta: self.sigmap.clone(),
        };
        match (group_mul_21(&v, &w), group_mul_21(&w, &v)) {
            (Ok(a), Ok(b)) => {
                self.reduce(&a.zbar.sub(&b.zbar)).is_zero()
                    && self.reduce(&a.z.sub(&b.z)).is_zero()
                    && self.reduce(&a.theta.sub(&b.theta)).is_zero()
            }
            _ => false,
        }
    }

    /// vol as the symbol it abbreviates.
    pub fn vol(&self) -> Grassmann {
        Grassmann::sym(Sym::Vol)
    }
}

/// proj_R(t, theta) = theta - rho t / r for the 1|1 lattice datum
/// R = (r, rho).
pub fn proj_r(rho: &Grassmann, point: &SuperPoint11) -> Grassmann {
    let inv_r = EvenExpr::sym_pow(Sym::R, -2);
    point
        .theta
        .sub(&rho.mul(&point.t).scale(&inv_r))
}

/// The generator of the 1|1 lattice action:
/// (t, theta) -> (t + n r + i n rho theta, theta + n rho).
pub fn lattice_translate_11(n: i64, rho: &Grassmann, point: &SuperPoint11) -> SuperPoint11 {
    let nr = Grassmann::sym(Sym::R).scale_int(n);
    let cross = Grassmann::i()
        .scale_int(n)
        .mul(rho)
        .mul(&point.theta);
    SuperPoint11 {
        t: point.t.add(&nr).add(&cross),
        theta: point.theta.add(&rho.scale_int(n)),
    }
}

/// Residual of proj_R invariance under the lattice generator; identically
/// zero in Grassmann arithmetic.
pub fn proj_r_invariance_residual(n: i64) -> Grassmann {
    let rho = Grassmann::gen(OddGen::Rho);
    let p = SuperPoint11::generic();
    let moved = lattice_translate_11(n, &rho, &p);
    proj_r(&rho, &moved).sub(&proj_r(&rho, &p))
}

/// proj_Lambda(z, zbar, theta) = theta
///   - sigma (zbar l' - z lbar')/vol - sigma' (z lbar - zbar l)/vol.
pub fn proj_lambda(lat: &SuperLattice, point: &SuperPoint21) -> Result<Grassmann, SuperError> {
    if !lat.commutation_holds() {
        return Err(SuperError::Invariant(
            "sigma sigma' != 0: the basis vectors do not commute".into(),
        ));
    }
    let inv_vol = Grassmann::scalar(EvenExpr::sym_pow(Sym::Vol, -2));
    let a = point
        .zbar
        .mul(&lat.ellp)
        .sub(&point.z.mul(&lat.ellpbar));
    let b = point.z.mul(&lat.ellbar).sub(&point.zbar.mul(&lat.ell));
    let out = point
        .theta
        .sub(&lat.sigma.mul(&a).mul(&inv_vol))
        .sub(&lat.sigmap.mul(&b).mul(&inv_vol));
    Ok(lat.reduce(&out))
}

/// Translation of a point by one of the lattice basis vectors
/// (right action of the group element).
pub fn lattice_translate_21(
    lat: &SuperLattice,
    by_prime: bool,
    point: &SuperPoint21,
) -> Result<SuperPoint21, SuperError> {
    let (l, lb, s) = if by_prime {
        (&lat.ellp, &lat.ellpbar, &lat.sigmap)
    } else {
        (&lat.ell, &lat.ellbar, &lat.sigma)
    };
    let vec = SuperPoint21 {
        z: l.clone(),
        zbar: lb.clone(),
        theta: s.clone(),
    };
    group_mul_21(point, &vec)
}

/// Residual of proj_Lambda invariance under a lattice basis translation.
pub fn proj_lambda_invariance_residual(
    lat: &SuperLattice,
    by_prime: bool,
) -> Result<Grassmann, SuperError> {
    let p = SuperPoint21::generic();
    let moved = lattice_translate_21(lat, by_prime, &p)?;
    let a = proj_lambda(lat, &moved)?;
    let b = proj_lambda(lat, &p)?;
    Ok(lat.reduce(&a.sub(&b)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_laws_11() {
        let g = SuperPoint11::generic();
        let e = SuperPoint11::identity();
        assert!(group_mul_11(&g, &e).unwrap().eq(&g));
        assert!(group_mul_11(&e, &g).unwrap().eq(&g));
    }

    #[test]
    fn pure_odd_product_11() {
        // (0, th) . (0, th') = (i th th', th + th')
        let a = SuperPoint11 {
            t: Grassmann::zero(),
            theta: Grassmann::gen(OddGen::Theta),
        };
        let b = SuperPoint11 {
            t: Grassmann::zero(),
            theta: Grassmann::gen(OddGen::Theta2),
        };
        let p = group_mul_11(&a, &b).unwrap();
        let expect_t = Grassmann::i()
            .mul(&Grassmann::gen(OddGen::Theta))
            .mul(&Grassmann::gen(OddGen::Theta2));
        assert!(p.t.eq(&expect_t));
        assert!(p
            .theta
            .eq(&Grassmann::gen(OddGen::Theta).add(&Grassmann::gen(OddGen::Theta2))));
    }

    #[test]
    fn associativity_11() {
        let a = SuperPoint11 {
            t: Grassmann::sym(Sym::T),
            theta: Grassmann::gen(OddGen::Theta),
        };
        let b = SuperPoint11 {
            t: Grassmann::sym(Sym::T2),
            theta: Grassmann::gen(OddGen::Theta2),
        };
        let c = SuperPoint11 {
            t: Grassmann::sym(Sym::T3),
            theta: Grassmann::gen(OddGen::Theta3),
        };
        let left = group_mul_11(&group_mul_11(&a, &b).unwrap(), &c).unwrap();
        let right = group_mul_11(&a, &group_mul_11(&b, &c).unwrap()).unwrap();
        assert!(left.eq(&right));
    }

    #[test]
    fn associativity_21() {
        let a = SuperPoint21 {
            z: Grassmann::sym(Sym::Z),
            zbar: Grassmann::sym(Sym::Zbar),
            theta: Grassmann::gen(OddGen::Theta),
        };
        let b = SuperPoint21 {
            z: Grassmann::sym(Sym::Z2),
            zbar: Grassmann::sym(Sym::Z2bar),
            theta: Grassmann::gen(OddGen::Theta2),
        };
        let c = SuperPoint21 {
            z: Grassmann::sym(Sym::U),
            zbar: Grassmann::sym(Sym::Ubar),
            theta: Grassmann::gen(OddGen::Theta3),
        };
        let left = group_mul_21(&group_mul_21(&a, &b).unwrap(), &c).unwrap();
        let right = group_mul_21(&a, &group_mul_21(&b, &c).unwrap()).unwrap();
        assert!(left.eq(&right));
    }

    #[test]
    fn mixed_parity_rejected() {
        let bad = SuperPoint11 {
            t: Grassmann::sym(Sym::T),
            theta: Grassmann::one(), // even where odd is required
        };
        assert!(group_mul_11(&bad, &SuperPoint11::identity()).is_err());
    }

    #[test]
    fn proj_r_reduces_and_is_invariant() {
        // rho = 0: plain theta
        let p = SuperPoint11::generic();
        assert!(proj_r(&Grassmann::zero(), &p).eq(&p.theta));
        // invariance residual vanishes identically for the generator and
        // a longer translate
        assert!(proj_r_invariance_residual(1).is_zero());
        assert!(proj_r_invariance_residual(3).is_zero());
    }

    #[test]
    fn proj_lambda_reduces_and_is_invariant() {
        let lat = SuperLattice::standard();
        assert!(lat.commutation_holds());
        // sigma = sigma' = 0 reduces to plain theta
        let red = SuperLattice::reduced();
        let p = SuperPoint21::generic();
        assert!(proj_lambda(&red, &p).unwrap().eq(&p.theta));
        // invariance under both basis translations
        assert!(proj_lambda_invariance_residual(&lat, false)
            .unwrap()
            .is_zero());
        assert!(proj_lambda_invariance_residual(&lat, true)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn commutation_violation_rejected() {
        let mut lat = SuperLattice::standard();
        lat.relations.clear(); // drop sigma sigma' = 0
        assert!(!lat.commutation_holds());
        assert!(proj_lambda(&lat, &SuperPoint21::generic()).is_err());
    }
}
