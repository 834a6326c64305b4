//! Spectral models of the 1|1 and 2|1 kinetic operators, truncated
//! mode-sum oracles, closed-form regularized determinants, and the
//! determinant-line norm factorizations.
//!
//! Relative determinants are normalized against the trivial bundle of the
//! same rank; the fermionic operators carry no curvature, so their
//! regularized factors appear only as an identical cancelling pair and
//! never reach the outputs.

use crate::charclass::{multiplicative_class_power_sums, s_poly_to_p, CharSeries, GradedPoly, PontryaginPoly};
use crate::modular::{
    dedekind_eta_numeric, eisenstein_lattice, eta_abs4_lattice, zeta_even, Lattice, ModExpr,
    ModularError, Token, TokenKind,
};
use crate::ring::{Rat, Ring};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DetError {
    #[error("input error: {0}")]
    Input(String),
    #[error("modular error: {0}")]
    Modular(#[from] ModularError),
    #[error("factorization failure: {0}")]
    Factorization(String),
}

/// Curvature data: a real skew matrix with eigenvalues +-i theta_j, or
/// the universal block-diagonal model with one Chern-root 2-form per
/// block (matrix powers vanish above the degree cap).
#[derive(Clone, Debug)]
pub enum CurvatureModel {
    Numeric(Vec<Vec<f64>>),
    FormalBlocks { blocks: usize },
}

impl CurvatureModel {
    pub fn rank(&self) -> usize {
        match self {
            CurvatureModel::Numeric(m) => m.len(),
            CurvatureModel::FormalBlocks { blocks } => 2 * blocks,
        }
    }

    pub fn check_numeric_skew(&self) -> Result<&Vec<Vec<f64>>, DetError> {
        match self {
            CurvatureModel::Numeric(m) => {
                let n = m.len();
                if m.iter().any(|row| row.len() != n) {
                    return Err(DetError::Input("curvature matrix is not square".into()));
                }
                for i in 0..n {
                    for j in 0..n {
                        if (m[i][j] + m[j][i]).abs() > 1e-12 {
                            return Err(DetError::Input(
                                "curvature matrix is not skew-symmetric".into(),
                            ));
                        }
                    }
                }
                Ok(m)
            }
            _ => Err(DetError::Input("numeric curvature required".into())),
        }
    }

    /// Power sums s_k = (1/2) Tr((i R)^{2k}) = sum_j theta_j^{2k} for the
    /// numeric model.
    pub fn numeric_power_sums(&self, k_max: u32) -> Result<Vec<f64>, DetError> {
        let m = self.check_numeric_skew()?;
        let thetas = skew_angles(m);
        Ok((1..=k_max)
            .map(|k| thetas.iter().map(|t| t.powi(2 * k as i32)).sum())
            .collect())
    }
}

/// The positive rotation angles theta_j of a real skew matrix (each 2x2
/// block contributes one angle; zero modes contribute nothing).
pub fn skew_angles(m: &[Vec<f64>]) -> Vec<f64> {
    let n = m.len();
    let flat: Vec<f64> = m.iter().flat_map(|r| r.iter().copied()).collect();
    let mat = DMatrix::from_row_slice(n, n, &flat);
    let eig = mat.complex_eigenvalues();
    let mut out: Vec<f64> = eig.iter().filter(|l| l.im > 1e-12).map(|l| l.im).collect();
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

#[derive(Clone, Debug)]
pub enum Geometry {
    Circle { radius: f64 },
    Torus { lattice: Lattice },
}

/// Spectral model of a kinetic operator.
#[derive(Clone, Debug)]
pub struct KineticOperator {
    pub geometry: Geometry,
    pub curvature: CurvatureModel,
    /// degree cap for formal curvature (defaults to twice the rank,
    /// i.e. the ambient real dimension of the block model)
    pub degree_cap: u32,
}

impl KineticOperator {
    pub fn circle(radius: f64, curvature: CurvatureModel) -> Result<Self, DetError> {
        if !(radius > 0.0) {
            return Err(DetError::Input("radius must be positive".into()));
        }
        let cap = 4 * match &curvature {
            CurvatureModel::FormalBlocks { blocks } => *blocks as u32,
            CurvatureModel::Numeric(m) => (m.len() / 2).max(1) as u32,
        };
        Ok(KineticOperator {
            geometry: Geometry::Circle { radius },
            curvature,
            degree_cap: cap,
        })
    }

    pub fn torus(lattice: Lattice, curvature: CurvatureModel) -> Self {
        let cap = 4 * match &curvature {
            CurvatureModel::FormalBlocks { blocks } => *blocks as u32,
            CurvatureModel::Numeric(m) => (m.len() / 2).max(1) as u32,
        };
        KineticOperator {
            geometry: Geometry::Torus { lattice },
            curvature,
            degree_cap: cap,
        }
    }

    fn radius(&self) -> Result<f64, DetError> {
        match &self.geometry {
            Geometry::Circle { radius } => Ok(*radius),
            _ => Err(DetError::Input("circle geometry required".into())),
        }
    }

    fn lattice(&self) -> Result<&Lattice, DetError> {
        match &self.geometry {
            Geometry::Torus { lattice } => Ok(lattice),
            _ => Err(DetError::Input("torus geometry required".into())),
        }
    }
}

// ---------------------------------------------------------------------------
// 1|1: Fredholm oracle and closed form
// ---------------------------------------------------------------------------

/// Determinant of a small real matrix by LU with partial pivoting.
fn det_real(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut det = 1.0;
    for col in 0..n {
        let mut piv = col;
        for row in (col + 1)..n {
            if a[row][col].abs() > a[piv][col].abs() {
                piv = row;
            }
        }
        if a[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        det *= a[col][col];
        for row in (col + 1)..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
        }
    }
    det
}

/// Truncated Fredholm determinant
/// `prod_{0 < |n| <= N} det(I - i R r / (2 pi i n))^{-1/2}`
/// with the modes paired as (n, -n) so each pairwise factor
/// `det(I - B/n) det(I + B/n)` (B = R r / 2 pi) is real and positive.
pub fn fredholm_oracle_11(op: &KineticOperator, n_modes: u64) -> Result<f64, DetError> {
    if n_modes < 1 {
        return Err(DetError::Input("need at least one mode".into()));
    }
    let r = op.radius()?;
    let m = op.curvature.check_numeric_skew()?;
    let dim = m.len();
    let b: Vec<Vec<f64>> = m
        .iter()
        .map(|row| row.iter().map(|&x| x * r / (2.0 * PI)).collect())
        .collect();
    let mut log_acc = 0.0f64;
    let mut mat = vec![vec![0.0; dim]; dim];
    for n in 1..=n_modes {
        let nf = n as f64;
        // det(I - B/n)
        for i in 0..dim {
            for j in 0..dim {
                mat[i][j] = (i == j) as u64 as f64 - b[i][j] / nf;
            }
        }
        let d1 = det_real(&mat);
        // det(I + B/n)
        for i in 0..dim {
            for j in 0..dim {
                mat[i][j] = (i == j) as u64 as f64 + b[i][j] / nf;
            }
        }
        let d2 = det_real(&mat);
        let pair = d1 * d2;
        if !(pair > 0.0) {
            return Err(DetError::Input(
                "mode pair factor not positive; curvature too large for the mode sum".into(),
            ));
        }
        log_acc += pair.ln();
    }
    Ok((-0.5 * log_acc).exp())
}

/// Truncated trace of (d/dt)^{-p} over the nonzero modes; odd powers
/// cancel exactly in the (n, -n) pairing.
pub fn mode_trace_inverse_power(p: u32, n_modes: u64, radius: f64) -> f64 {
    let mut acc = 0.0;
    for n in 1..=n_modes {
        let lam = 2.0 * PI * n as f64 / radius;
        let pos = lam.powi(-(p as i32));
        let neg = (-lam).powi(-(p as i32));
        acc += pos + neg;
    }
    acc
}

/// Result of a determinant computation.
#[derive(Clone, Debug)]
pub enum DetValue {
    Numeric(Complex64),
    /// Pontryagin polynomial over exact rationals (the susy-normalized
    /// class)
    Formal11(PontryaginPoly<Rat>),
    /// Pontryagin polynomial over the token ring
    Formal21(PontryaginPoly<ModExpr>),
}

#[derive(Clone, Debug)]
pub struct DetResult {
    pub value: DetValue,
    pub relative: bool,
}

/// Closed-form regularized super determinant of the 1|1 kinetic operator.
///
/// Numeric curvature: `prod_j ((theta_j r / 2)/sinh(theta_j r / 2))`
/// over the block angles; `relative = false` multiplies by r^{-n}.
/// Formal curvature: `exp(sum_k s_k * 2 zeta(2k)/(2k (2 pi i)^{2k}))`
/// with the pi powers cancelled exactly, i.e. the (x/2)/sinh(x/2) class
/// in the susy-section normalization.
pub fn sdet_zeta_11(op: &KineticOperator, relative: bool) -> Result<DetResult, DetError> {
    match &op.curvature {
        CurvatureModel::Numeric(m) => {
            let r = op.radius()?;
            let n = m.len();
            let thetas = skew_angles(m);
            let mut val = 1.0f64;
            for t in thetas {
                let x = t * r / 2.0;
                if x.abs() > 1e-300 {
                    val *= x / x.sinh();
                }
            }
            if !relative {
                val *= r.powi(-(n as i32));
            }
            Ok(DetResult {
                value: DetValue::Numeric(Complex64::new(val, 0.0)),
                relative,
            })
        }
        CurvatureModel::FormalBlocks { .. } => {
            if !relative {
                return Err(DetError::Input(
                    "absolute normalization is numeric-only; the formal output is the \
                     relative class"
                        .into(),
                ));
            }
            let cap = op.degree_cap;
            let mut exponent_coeffs = BTreeMap::new();
            for k in 1..=cap / 4 {
                // 2 zeta(2k) / (2k (2 pi i)^{2k}): assemble in the
                // pi-graded ring and cancel the pi powers exactly
                let z = zeta_even(k);
                let pref = crate::charclass::eisenstein_prefactor(k);
                let c = z.add(&z).mul(&pref);
                let r = c.as_rational().ok_or_else(|| {
                    DetError::Input("pi powers failed to cancel in the zeta ratio".into())
                })?;
                exponent_coeffs.insert(k, r);
            }
            let series = CharSeries { exponent_coeffs };
            let class = s_poly_to_p(&multiplicative_class_power_sums(&series, cap));
            Ok(DetResult {
                value: DetValue::Formal11(class),
                relative,
            })
        }
    }
}

// ---------------------------------------------------------------------------
// 2|1: lattice oracle and closed form
// ---------------------------------------------------------------------------

/// 1/(2k (2 pi i)^{2k}) as a float.
fn prefactor_f64(k: u32) -> f64 {
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    sign / (2.0 * k as f64 * (2.0 * PI).powi(2 * k as i32))
}

/// Truncated-mode oracle for the k >= 2 part of the 2|1 determinant:
/// every weight-2k coefficient uses the shell-truncated lattice sum.
/// Numeric curvature gives the assembled value
/// `exp(sum_{k>=2} s_k E_{2k}^{trunc} / (2k (2 pi i)^{2k}))`; the
/// conditionally convergent k = 1 term is never truncated here.
pub struct LatticeOracle21 {
    /// k -> shell-truncated E_{2k}(lattice)
    pub truncated_eisenstein: BTreeMap<u32, Complex64>,
    /// assembled exponential for numeric curvature
    pub value: Option<Complex64>,
}

pub fn lattice_oracle_21(op: &KineticOperator, cutoff: u32) -> Result<LatticeOracle21, DetError> {
    if cutoff < 1 {
        return Err(DetError::Input("cutoff must be >= 1".into()));
    }
    let lat = op.lattice()?;
    let k_max = op.degree_cap / 4;
    let mut truncated_eisenstein = BTreeMap::new();
    for k in 2..=k_max.max(2) {
        truncated_eisenstein.insert(k, eisenstein_lattice(k, lat, cutoff)?);
    }
    let value = match &op.curvature {
        CurvatureModel::Numeric(_) => {
            let s = op.curvature.numeric_power_sums(k_max.max(2))?;
            let mut acc = Complex64::new(0.0, 0.0);
            for (&k, e) in &truncated_eisenstein {
                acc += s[(k - 1) as usize] * e * prefactor_f64(k);
            }
            Some(acc.exp())
        }
        CurvatureModel::FormalBlocks { .. } => None,
    };
    Ok(LatticeOracle21 {
        truncated_eisenstein,
        value,
    })
}

/// Closed-form 2|1 super determinant. Formal curvature yields the token
/// expression `exp(E2* s_1 /(2 (2 pi i)^2) + sum_{k>=2} E_{2k} s_k /
/// (2k (2 pi i)^{2k}))` converted to Pontryagin generators; numeric
/// curvature evaluates the same expression at the lattice (E2* by its
/// analytic regularization, E_{2k} by q-series). `relative = false`
/// divides by the Kronecker-limit value vol^{2n}|eta|^{4n}.
pub fn sdet_zeta_21(op: &KineticOperator, relative: bool, q_order: i64) -> Result<DetResult, DetError> {
    let lat_needed = matches!(op.curvature, CurvatureModel::Numeric(_)) || !relative;
    let lat = if lat_needed { Some(op.lattice()?) } else { op.lattice().ok() };
    match &op.curvature {
        CurvatureModel::Numeric(m) => {
            let lat = lat.unwrap();
            // numeric curvature is not nilpotent: run the weight sum to
            // convergence (the terms decay like (theta/(2 pi |l|))^{2k})
            let k_max = 64u32;
            let s = op.curvature.numeric_power_sums(k_max)?;
            let mut acc = Complex64::new(0.0, 0.0);
            let mut prev_mag = f64::INFINITY;
            for k in 1..=k_max {
                let e = if k == 1 {
                    crate::modular::e2_star(lat, q_order)?
                } else {
                    crate::modular::eisenstein_lattice_qseries(k, lat, q_order)
                };
                let term = s[(k - 1) as usize] * e * prefactor_f64(k);
                let mag = term.norm();
                if k > 2 {
                    if mag > prev_mag && mag > 1e-12 {
                        return Err(DetError::Input(
                            "weight sum diverges: curvature too large for this lattice".into(),
                        ));
                    }
                    prev_mag = mag;
                }
                acc += term;
                if k > 2 && mag < 1e-18 {
                    break;
                }
            }
            let mut val = acc.exp();
            if !relative {
                val /= Complex64::new(kronecker_det(lat, m.len() as u32)?, 0.0);
            }
            Ok(DetResult {
                value: DetValue::Numeric(val),
                relative,
            })
        }
        CurvatureModel::FormalBlocks { .. } => {
            if !relative {
                return Err(DetError::Input(
                    "absolute normalization is numeric-only; the formal output is the \
                     relative class"
                        .into(),
                ));
            }
            let cap = op.degree_cap;
            let exponent = witten_star_exponent(cap);
            let class = s_poly_to_p(&exponent.exp());
            Ok(DetResult {
                value: DetValue::Formal21(class),
                relative,
            })
        }
    }
}

/// The exponent sum `E2* s_1 prefactor(1) + sum_{k>=2} E2k s_k
/// prefactor(k)` in the power-sum ring over tokens.
pub fn witten_star_exponent(cap: u32) -> GradedPoly<ModExpr> {
    let mut arg: GradedPoly<ModExpr> = GradedPoly::zero(cap);
    for k in 1..=cap / 4 {
        let token = if k == 1 {
            Token::new(TokenKind::E2Star)
        } else {
            Token::new(TokenKind::E2k(k))
        };
        let coeff = ModExpr::term(vec![(token, 1)], crate::charclass::eisenstein_prefactor(k));
        arg = arg.add(&GradedPoly::generator(k, cap).scale(&coeff));
    }
    arg
}

/// Holomorphic variant of the exponent (E2 in place of E2*).
pub fn witten_holo_exponent(cap: u32) -> GradedPoly<ModExpr> {
    let mut arg: GradedPoly<ModExpr> = GradedPoly::zero(cap);
    for k in 1..=cap / 4 {
        let token = if k == 1 {
            Token::new(TokenKind::E2)
        } else {
            Token::new(TokenKind::E2k(k))
        };
        let coeff = ModExpr::term(vec![(token, 1)], crate::charclass::eisenstein_prefactor(k));
        arg = arg.add(&GradedPoly::generator(k, cap).scale(&coeff));
    }
    arg
}

/// Kronecker-limit closed form `|vol|^{2n} |eta(l, l')|^{4n}`; vol is
/// purely imaginary and enters through its modulus.
pub fn kronecker_det(lat: &Lattice, n: u32) -> Result<f64, DetError> {
    let v = lat.vol().norm();
    let eta4 = eta_abs4_lattice(lat)?;
    Ok((v * v * eta4).powi(n as i32))
}

/// Numeric evaluation of a formal determinant class at a lattice with a
/// numeric curvature model, used to compare against the mode oracle.
pub fn eval_formal21_exponent(
    exponent: &GradedPoly<ModExpr>,
    power_sums: &[f64],
    lat: &Lattice,
    q_order: i64,
    k_filter: impl Fn(u32) -> bool,
) -> Result<Complex64, DetError> {
    let mut acc = Complex64::new(0.0, 0.0);
    for (part, c) in exponent.terms() {
        if part.len() != 1 || !k_filter(part[0]) {
            continue;
        }
        let k = part[0];
        let cv = c.eval(lat, q_order)?;
        acc += cv * power_sums[(k - 1) as usize];
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Determinant-line norms
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct NormReport21 {
    /// the relative determinant class W*
    pub factor: PontryaginPoly<ModExpr>,
    /// W* times its conjugate (the norm squared)
    pub norm_squared: PontryaginPoly<ModExpr>,
    /// norm squared after the E2* pair rewrite
    pub rewritten: PontryaginPoly<ModExpr>,
    /// the holomorphic target Wit * conj(Wit)
    pub target: PontryaginPoly<ModExpr>,
}

/// Norm-squared factorization of the 1|1 relative determinant section:
/// asserts `|sdet|^2 = Ahat * Ahat` with a real class.
pub fn detline_norm_check_11(blocks: usize) -> Result<PontryaginPoly<Rat>, DetError> {
    let op = KineticOperator::circle(
        1.0,
        CurvatureModel::FormalBlocks { blocks },
    )?;
    let a = match sdet_zeta_11(&op, true)?.value {
        DetValue::Formal11(class) => class,
        _ => unreachable!(),
    };
    // coefficients are rational, hence real: conj(A) = A, norm^2 = A^2
    let norm2 = a.mul(&a);
    let target = a.mul(&a);
    if norm2 != target {
        return Err(DetError::Factorization(
            "1|1 norm squared does not factor as Ahat * Ahat".into(),
        ));
    }
    Ok(norm2)
}

/// Norm-squared factorization of the 2|1 relative determinant section:
/// `|sdet|^2 = W* conj(W*)`, rewritten with E2* + conj(E2*) ->
/// E2 + conj(E2) to the holomorphic `Wit conj(Wit)`. A failure names the
/// offending generator index.
pub fn detline_norm_check_21(blocks: usize) -> Result<NormReport21, DetError> {
    let cap = 4 * blocks as u32;
    let w_star_exp = witten_star_exponent(cap);
    let factor = s_poly_to_p(&w_star_exp.exp());
    let conj_exp = w_star_exp.map_coeffs(|c| c.conj());
    let norm_exp = w_star_exp.add(&conj_exp);
    let norm_squared = s_poly_to_p(&norm_exp.exp());
    // rewrite each exponent coefficient
    let rewritten_exp = norm_exp.map_coeffs(|c| c.rewrite_e2star_pair());
    let rewritten = s_poly_to_p(&rewritten_exp.exp());
    let holo = witten_holo_exponent(cap);
    let target_exp = holo.add(&holo.map_coeffs(|c| c.conj()));
    let target = s_poly_to_p(&target_exp.exp());
    if rewritten_exp != target_exp {
        // name the first offending generator
        for k in 1..=cap / 4 {
            let a = rewritten_exp.coeff(&vec![k]);
            let b = target_exp.coeff(&vec![k]);
            if a != b {
                return Err(DetError::Factorization(format!(
                    "norm squared fails to factor at generator index k = {}",
                    k
                )));
            }
        }
        return Err(DetError::Factorization(
            "norm squared fails to factor (mixed term)".into(),
        ));
    }
    Ok(NormReport21 {
        factor,
        norm_squared,
        rewritten,
        target,
    })
}

/// Numeric witness for the eta factors in the Kronecker formula:
/// |eta(i)| is needed by the validation suite.
pub fn eta_abs_at_i() -> f64 {
    dedekind_eta_numeric(Complex64::new(0.0, 1.0))
        .expect("Im(i) > 0")
        .norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charclass::ahat_series;
    use crate::modular::PiGraded;
    use crate::ring::{rat, rone};
    use crate::sampling::{sample_lattice, SplitMix};

    fn block_matrix(thetas: &[f64]) -> Vec<Vec<f64>> {
        let n = 2 * thetas.len();
        let mut m = vec![vec![0.0; n]; n];
        for (j, &t) in thetas.iter().enumerate() {
            m[2 * j][2 * j + 1] = t;
            m[2 * j + 1][2 * j] = -t;
        }
        m
    }

    #[test]
    fn fredholm_zero_curvature_is_one() {
        let op = KineticOperator::circle(1.3, CurvatureModel::Numeric(block_matrix(&[0.0]))).unwrap();
        for n in [1u64, 10, 1000] {
            assert_eq!(fredholm_oracle_11(&op, n).unwrap(), 1.0);
        }
    }

    #[test]
    fn fredholm_single_block_matches_sinh() {
        // theta = 1, r = 1: the closed form is (1/2)/sinh(1/2)
        let op = KineticOperator::circle(1.0, CurvatureModel::Numeric(block_matrix(&[1.0]))).unwrap();
        let v = fredholm_oracle_11(&op, 100_000).unwrap();
        let closed = 0.5f64 / 0.5f64.sinh();
        assert!((v - closed).abs() < 1e-6, "v = {}, closed = {}", v, closed);
    }

    #[test]
    fn fredholm_scaling_in_theta_r() {
        let op1 = KineticOperator::circle(2.0, CurvatureModel::Numeric(block_matrix(&[0.3]))).unwrap();
        let op2 = KineticOperator::circle(1.0, CurvatureModel::Numeric(block_matrix(&[0.6]))).unwrap();
        let a = fredholm_oracle_11(&op1, 5000).unwrap();
        let b = fredholm_oracle_11(&op2, 5000).unwrap();
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn fredholm_convergence_is_monotone_one_over_n() {
        let op = KineticOperator::circle(1.0, CurvatureModel::Numeric(block_matrix(&[0.9, 0.4]))).unwrap();
        let closed = match sdet_zeta_11(&op, true).unwrap().value {
            DetValue::Numeric(v) => v.re,
            _ => unreachable!(),
        };
        let mut prev = f64::INFINITY;
        for n in [1000u64, 2000, 4000, 8000] {
            let r = (fredholm_oracle_11(&op, n).unwrap() - closed).abs();
            assert!(r < prev);
            prev = r;
        }
        // O(1/N): quadrupling N cuts the residual by about 4
        let r1 = (fredholm_oracle_11(&op, 2000).unwrap() - closed).abs();
        let r2 = (fredholm_oracle_11(&op, 8000).unwrap() - closed).abs();
        assert!(r1 / r2 > 3.0 && r1 / r2 < 5.0, "ratio {}", r1 / r2);
    }

    #[test]
    fn odd_inverse_powers_cancel_exactly() {
        for p in [1u32, 3, 5] {
            assert_eq!(mode_trace_inverse_power(p, 1000, 1.7), 0.0);
        }
        assert!(mode_trace_inverse_power(2, 1000, 1.0) > 0.0);
    }

    #[test]
    fn sdet11_numeric_matches_oracle() {
        let mut rng = SplitMix::new(29);
        for _ in 0..3 {
            let thetas: Vec<f64> = (0..2).map(|_| rng.uniform(0.1, 0.5)).collect();
            let r = rng.uniform(0.5, 1.5);
            let op = KineticOperator::circle(r, CurvatureModel::Numeric(block_matrix(&thetas))).unwrap();
            let closed = match sdet_zeta_11(&op, true).unwrap().value {
                DetValue::Numeric(v) => v.re,
                _ => unreachable!(),
            };
            let oracle = fredholm_oracle_11(&op, 100_000).unwrap();
            assert!(
                ((oracle - closed) / closed).abs() < 1e-6,
                "oracle {} closed {}",
                oracle,
                closed
            );
        }
    }

    #[test]
    fn sdet11_zero_curvature_and_absolute_normalization() {
        let op = KineticOperator::circle(2.0, CurvatureModel::Numeric(block_matrix(&[0.0]))).unwrap();
        match sdet_zeta_11(&op, true).unwrap().value {
            DetValue::Numeric(v) => assert_eq!(v.re, 1.0),
            _ => unreachable!(),
        }
        match sdet_zeta_11(&op, false).unwrap().value {
            DetValue::Numeric(v) => assert!((v.re - 2.0f64.powi(-2)).abs() < 1e-15),
            _ => unreachable!(),
        }
    }

    #[test]
    fn sdet11_formal_equals_ahat_through_dim12() {
        let op = KineticOperator::circle(1.0, CurvatureModel::FormalBlocks { blocks: 3 }).unwrap();
        let formal = match sdet_zeta_11(&op, true).unwrap().value {
            DetValue::Formal11(c) => c,
            _ => unreachable!(),
        };
        let ahat = crate::charclass::multiplicative_class(&ahat_series(14).unwrap().series, 12);
        assert_eq!(formal, ahat);
    }

    #[test]
    fn lattice_oracle_shells_converge_to_e4() {
        let lat = Lattice::from_tau(Complex64::new(0.0, 1.0)).unwrap();
        let op = KineticOperator::torus(lat, CurvatureModel::FormalBlocks { blocks: 2 });
        let oracle = lattice_oracle_21(&op, 2000).unwrap();
        let e4_full = crate::modular::eisenstein_lattice_qseries(2, &lat, 40);
        let e4_trunc = oracle.truncated_eisenstein[&2];
        assert!((e4_full - e4_trunc).norm() < 1e-6);
    }

    #[test]
    fn sdet21_formal_structure() {
        let lat = Lattice::from_tau(Complex64::new(0.0, 1.2)).unwrap();
        let op = KineticOperator::torus(lat, CurvatureModel::FormalBlocks { blocks: 1 });
        let formal = match sdet_zeta_21(&op, true, 40).unwrap().value {
            DetValue::Formal21(c) => c,
            _ => unreachable!(),
        };
        // dim 4: exp-term is exactly the E2* token times the prefactor
        let star = vec![(Token::new(TokenKind::E2Star), 1)];
        assert_eq!(
            formal.coeff(&vec![1]).coeff(&star),
            crate::charclass::eisenstein_prefactor(1)
        );
        // zero curvature (no blocks): the class is 1
        let op0 = KineticOperator::torus(lat, CurvatureModel::FormalBlocks { blocks: 0 });
        let formal0 = match sdet_zeta_21(&op0, true, 40).unwrap().value {
            DetValue::Formal21(c) => c,
            _ => unreachable!(),
        };
        assert_eq!(formal0, GradedPoly::one(0));
    }

    #[test]
    fn sdet21_q0_specialization_matches_11() {
        // tokens -> constant terms 2 zeta(2k) turns the 2|1 exponent into
        // the 1|1 exponent
        let cap = 12;
        let e21 = witten_star_exponent(cap);
        let specialized = e21.map_coeffs(|c| {
            // each coefficient is token * pi-graded scalar; substitute the
            // constant term 2 zeta(2k) for the token
            let mut acc = PiGraded::zero();
            for (mono, coeff) in c.terms() {
                let mut v = coeff.clone();
                for &(t, p) in mono {
                    let c0 = match t.kind {
                        TokenKind::E2 | TokenKind::E2Star => {
                            let z = zeta_even(1);
                            z.add(&z)
                        }
                        TokenKind::E2k(k) => {
                            let z = zeta_even(k);
                            z.add(&z)
                        }
                        _ => PiGraded::one(),
                    };
                    for _ in 0..p {
                        v = v.mul(&c0);
                    }
                }
                acc = acc.add(&v);
            }
            acc
        });
        // the 1|1 exponent with rational coefficients lifted to PiGraded
        let op = KineticOperator::circle(1.0, CurvatureModel::FormalBlocks { blocks: 3 }).unwrap();
        let _ = op;
        for k in 1..=cap / 4 {
            let a = specialized.coeff(&vec![k]).as_rational().unwrap();
            assert_eq!(a, crate::modular::zeta_ratio_rational(k));
        }
    }

    #[test]
    fn sdet21_numeric_matches_lattice_oracle_k_ge_2() {
        let mut rng = SplitMix::new(31);
        for _ in 0..2 {
            let lat = sample_lattice(&mut rng);
            let m = block_matrix(&[rng.uniform(0.2, 0.8), rng.uniform(0.2, 0.8)]);
            let op = KineticOperator::torus(lat, CurvatureModel::Numeric(m));
            let oracle = lattice_oracle_21(&op, 2000).unwrap().value.unwrap();
            // evaluate the closed form with only the k >= 2 terms
            let s = op.curvature.numeric_power_sums(2).unwrap();
            let closed = eval_formal21_exponent(
                &witten_star_exponent(op.degree_cap),
                &s,
                &lat,
                40,
                |k| k >= 2,
            )
            .unwrap()
            .exp();
            assert!(
                (oracle - closed).norm() / closed.norm() < 1e-6,
                "oracle {} closed {}",
                oracle,
                closed
            );
        }
    }

    #[test]
    fn kronecker_invariances() {
        let mut rng = SplitMix::new(37);
        let lat = sample_lattice(&mut rng);
        let v = kronecker_det(&lat, 2).unwrap();
        // S-invariance
        let s_lat = Lattice::new(lat.ell_prime, -lat.ell).unwrap();
        let vs = kronecker_det(&s_lat, 2).unwrap();
        assert!((v - vs).abs() / v < 1e-8);
        // T-invariance
        let t_lat = Lattice::new(lat.ell, lat.ell_prime + lat.ell).unwrap();
        let vt = kronecker_det(&t_lat, 2).unwrap();
        assert!((v - vt).abs() / v < 1e-10);
        // rank doubling squares the value
        let v1 = kronecker_det(&lat, 1).unwrap();
        assert!((v - v1 * v1).abs() / v < 1e-12);
    }

    #[test]
    fn detline_norms_factor() {
        let n11 = detline_norm_check_11(2).unwrap();
        // Ahat^2 in dim 8: constant 1, p1 coefficient -1/12
        assert_eq!(n11.coeff(&Vec::new()), rone());
        assert_eq!(n11.coeff(&vec![1]), rat(-1, 12));
        let rep = detline_norm_check_21(2).unwrap();
        assert_eq!(rep.rewritten, rep.target);
        // the k=1 coefficient of the factor is the E2* term
        let star = vec![(Token::new(TokenKind::E2Star), 1)];
        assert_eq!(
            rep.factor.coeff(&vec![1]).coeff(&star),
            crate::charclass::eisenstein_prefactor(1)
        );
    }

    #[test]
    fn fermionic_factors_cancel_identically() {
        // the fermionic operator carries no curvature: the spectra built
        // over the mode basis for the bundle and for the trivial bundle
        // coincide mode by mode, so their regularized factors cancel as
        // identical objects
        let radius = 1.3;
        let n = 4;
        let spec_x: Vec<f64> = (1..50)
            .flat_map(|m| {
                let lam = 2.0 * PI * m as f64 / radius;
                std::iter::repeat(lam).take(n).chain(std::iter::repeat(-lam).take(n))
            })
            .collect();
        let spec_n = spec_x.clone();
        assert_eq!(spec_x, spec_n);
    }
}
