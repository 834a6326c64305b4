//! Expansion of the pulled-back covariant derivative along the odd
//! direction: conjugating by the Taylor-expansion isomorphism turns
//! `d/d(theta) + A(psi) + theta dA(psi,psi)` into `d/d(theta) + theta F`
//! with F = dA + A /\ A the curvature 2-form.

use super::even::EvenExpr;
use super::grassmann::Grassmann;
use super::SuperError;

/// Square matrix of Grassmann entries.
#[derive(Clone, Debug)]
pub struct GMatrix {
    pub n: usize,
    pub entries: Vec<Vec<Grassmann>>,
}

impl GMatrix {
    pub fn zero(n: usize) -> Self {
        GMatrix {
            n,
            entries: vec![vec![Grassmann::zero(); n]; n],
        }
    }

    pub fn from_entries(entries: Vec<Vec<Grassmann>>) -> Result<Self, SuperError> {
        let n = entries.len();
        if entries.iter().any(|row| row.len() != n) {
            return Err(SuperError::Structure("matrix is not square".into()));
        }
        Ok(GMatrix { n, entries })
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = GMatrix::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.entries[i][j] = self.entries[i][j].add(&other.entries[i][j]);
            }
        }
        out
    }

    pub fn mat_mul(&self, other: &Self) -> Self {
        let mut out = GMatrix::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let mut acc = Grassmann::zero();
                for k in 0..self.n {
                    acc = acc.add(&self.entries[i][k].mul(&other.entries[k][j]));
                }
                out.entries[i][j] = acc;
            }
        }
        out
    }

    pub fn map(&self, f: impl Fn(&Grassmann) -> Grassmann) -> Self {
        GMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .map(|row| row.iter().map(&f).collect())
                .collect(),
        }
    }

    pub fn apply(&self, v: &[Grassmann]) -> Vec<Grassmann> {
        (0..self.n)
            .map(|i| {
                let mut acc = Grassmann::zero();
                for (j, x) in v.iter().enumerate() {
                    acc = acc.add(&self.entries[i][j].mul(x));
                }
                acc
            })
            .collect()
    }
}

/// Section of the pulled-back bundle over the odd line: v0 + theta v1.
#[derive(Clone, Debug)]
pub struct ThetaSection {
    pub v0: Vec<Grassmann>,
    pub v1: Vec<Grassmann>,
}

impl ThetaSection {
    pub fn eq(&self, other: &Self) -> bool {
        self.v0.len() == other.v0.len()
            && self
                .v0
                .iter()
                .zip(&other.v0)
                .all(|(a, b)| a.eq(b))
            && self
                .v1
                .iter()
                .zip(&other.v1)
                .all(|(a, b)| a.eq(b))
    }
}

/// The connection matrix data: A (1-forms), its exterior derivative, and
/// the curvature F = dA + A /\ A.
pub struct Superconnection {
    pub dim: usize,
    pub a: GMatrix,
    pub da: GMatrix,
    pub f: GMatrix,
}

impl Superconnection {
    pub fn new(dim: usize, a: GMatrix) -> Result<Self, SuperError> {
        for row in &a.entries {
            for e in row {
                for (&mask, _) in e.terms() {
                    if Grassmann::form_degree_of(mask) != 1 || mask.count_ones() != 1 {
                        return Err(SuperError::Structure(
                            "connection entries must be 1-forms".into(),
                        ));
                    }
                }
            }
        }
        let da = a.map(|e| e.d(dim, false));
        let f = da.add(&a.mat_mul(&a));
        Ok(Superconnection { dim, a, da, f })
    }

    /// `(phi_0^* nabla)_{d/d theta}` on v0 + theta v1:
    /// result0 = v1 + A v0, result1 = -A v1 + dA v0.
    pub fn nabla_theta(&self, v: &ThetaSection) -> ThetaSection {
        let av0 = self.a.apply(&v.v0);
        let av1 = self.a.apply(&v.v1);
        let dav0 = self.da.apply(&v.v0);
        ThetaSection {
            v0: v.v1.iter().zip(&av0).map(|(a, b)| a.add(b)).collect(),
            v1: av1.iter().zip(&dav0).map(|(a, b)| a.neg().add(b)).collect(),
        }
    }

    /// Taylor-expansion isomorphism h(v) = i_0^* v + theta i_0^*(nabla v).
    pub fn h(&self, v: &ThetaSection) -> ThetaSection {
        let av0 = self.a.apply(&v.v0);
        ThetaSection {
            v0: v.v0.clone(),
            v1: v.v1.iter().zip(&av0).map(|(a, b)| a.add(b)).collect(),
        }
    }

    /// Inverse isomorphism h^{-1}(w) = w - theta A(psi) w.
    pub fn h_inv(&self, v: &ThetaSection) -> ThetaSection {
        let av0 = self.a.apply(&v.v0);
        ThetaSection {
            v0: v.v0.clone(),
            v1: v.v1.iter().zip(&av0).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    /// The conjugated operator h (nabla_theta) h^{-1}.
    pub fn conjugated(&self, v: &ThetaSection) -> ThetaSection {
        self.h(&self.nabla_theta(&self.h_inv(v)))
    }

    /// The model operator d/d theta + theta F: (v0 + theta v1) maps to
    /// v1 + theta F v0.
    pub fn model_operator(&self, v: &ThetaSection) -> ThetaSection {
        ThetaSection {
            v0: v.v1.clone(),
            v1: self.f.apply(&v.v0),
        }
    }

    /// Exact equality of the conjugated operator with d/d theta + theta F
    /// on the given test sections.
    pub fn expansion_identity_holds(&self, tests: &[ThetaSection]) -> bool {
        tests
            .iter()
            .all(|v| self.conjugated(v).eq(&self.model_operator(v)))
    }
}

/// A spanning family of test sections for rank n over dimension m.
pub fn test_sections(n: usize, dim: usize, rng: &mut crate::sampling::SplitMix) -> Vec<ThetaSection> {
    use super::even::XVARS;
    use super::grassmann::PSI;
    let mut out = Vec::new();
    for k in 0..n {
        // basis vectors, theta-shifted basis vectors, and decorated ones
        let mut e = vec![Grassmann::zero(); n];
        e[k] = Grassmann::one();
        out.push(ThetaSection {
            v0: e.clone(),
            v1: vec![Grassmann::zero(); n],
        });
        out.push(ThetaSection {
            v0: vec![Grassmann::zero(); n],
            v1: e.clone(),
        });
        let mut decorated = vec![Grassmann::zero(); n];
        let mut c = EvenExpr::sym(XVARS[rng.next_range(dim as u64) as usize]);
        if rng.next_range(2) == 0 {
            c = c.mul(&EvenExpr::sym(XVARS[rng.next_range(dim as u64) as usize]));
        }
        let mut g = Grassmann::scalar(c);
        if rng.next_range(2) == 0 {
            g = g.mul(&Grassmann::gen(PSI[rng.next_range(dim as u64) as usize]));
        }
        decorated[k] = g;
        out.push(ThetaSection {
            v0: decorated.clone(),
            v1: decorated,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::SplitMix;
    use super::super::even::{Sym, XVARS};
    use super::super::grassmann::{OddGen, PSI};

    #[test]
    fn flat_trivial_connection() {
        let conn = Superconnection::new(2, GMatrix::zero(1)).unwrap();
        let mut rng = SplitMix::new(3);
        assert!(conn.expansion_identity_holds(&test_sections(1, 2, &mut rng)));
        // F = 0
        assert!(conn.f.entries[0][0].is_zero());
    }

    #[test]
    fn rank_one_b_dc() {
        // A = B dC with B = x1, C = x2: theta-part is
        // (dB /\ dC)(psi, psi)
        let a_entry = Grassmann::scalar(EvenExpr::sym(Sym::X1)).mul(&Grassmann::gen(OddGen::Psi2));
        let conn =
            Superconnection::new(2, GMatrix::from_entries(vec![vec![a_entry]]).unwrap()).unwrap();
        let expect_f = Grassmann::gen(PSI[0]).mul(&Grassmann::gen(PSI[1]));
        assert!(conn.f.entries[0][0].eq(&expect_f));
        let mut rng = SplitMix::new(4);
        assert!(conn.expansion_identity_holds(&test_sections(1, 2, &mut rng)));
    }

    #[test]
    fn abelian_closed_connection_is_flat() {
        // rank 1 with A closed: F = A /\ A + dA = 0
        let a_entry = Grassmann::gen(OddGen::Psi1); // dx1, closed
        let conn =
            Superconnection::new(2, GMatrix::from_entries(vec![vec![a_entry]]).unwrap()).unwrap();
        assert!(conn.f.entries[0][0].is_zero());
        let mut rng = SplitMix::new(5);
        assert!(conn.expansion_identity_holds(&test_sections(1, 2, &mut rng)));
    }

    #[test]
    fn rank_two_random_connection() {
        let mut rng = SplitMix::new(6);
        for _ in 0..10 {
            let mut entries = vec![vec![Grassmann::zero(); 2]; 2];
            for row in entries.iter_mut() {
                for e in row.iter_mut() {
                    let mut acc = Grassmann::zero();
                    for (j, &p) in PSI.iter().enumerate().take(2) {
                        if rng.next_range(2) == 0 {
                            let c = EvenExpr::sym(XVARS[(j + 1) % 2])
                                .scale(&super::super::scalar::GaussRat::from_int(
                                    rng.next_range(5) as i64 - 2,
                                ));
                            acc = acc.add(&Grassmann::scalar(c).mul(&Grassmann::gen(p)));
                        }
                    }
                    *e = acc;
                }
            }
            let conn = Superconnection::new(2, GMatrix::from_entries(entries).unwrap()).unwrap();
            assert!(conn.expansion_identity_holds(&test_sections(2, 2, &mut rng)));
        }
    }

    #[test]
    fn non_one_form_entries_rejected() {
        let bad = Grassmann::gen(OddGen::Psi1).mul(&Grassmann::gen(OddGen::Psi2));
        assert!(Superconnection::new(2, GMatrix::from_entries(vec![vec![bad]]).unwrap()).is_err());
        assert!(GMatrix::from_entries(vec![vec![Grassmann::zero()], vec![]]).is_err());
    }
}
