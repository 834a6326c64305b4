//! Output formatting: exact rationals always print as fractions; floats
//! carry 17 significant digits.

use genus_forge_core::modular::PiGraded;
use genus_forge_core::series::TruncSeries;
use num_traits::Zero;

/// CSV rows `exponent_num,exponent_den,coeff_num,coeff_den,pi_pow` for a
/// pi-graded series (one row per pi grade); text mode prints the series
/// inline.
pub fn pi_graded_series_output(s: &TruncSeries<PiGraded>, csv: bool) -> String {
    let mut out = String::new();
    if csv {
        for (&key, coeff) in s.coeffs() {
            let unit = s.unit_den() as i64;
            let g = gcd(key.abs().max(1), unit);
            let (en, ed) = (key / g, unit / g);
            for (&pi_pow, c) in coeff.terms() {
                if Zero::is_zero(c) {
                    continue;
                }
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    en,
                    ed,
                    c.numer(),
                    c.denom(),
                    pi_pow
                ));
            }
        }
    } else {
        let mut first = true;
        for (&key, coeff) in s.coeffs() {
            if !first {
                out.push_str(" + ");
            }
            first = false;
            if key == 0 {
                out.push_str(&format!("({})", coeff));
            } else {
                out.push_str(&format!("({})*{}^{}", coeff, s.var().0, key));
            }
        }
        if first {
            out.push('0');
        }
        out.push('\n');
    }
    out
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs().max(1)
    } else {
        gcd(b, a % b)
    }
}

/// Residual column: fixed-width scientific notation keeps reports byte
/// deterministic for identical inputs.
pub fn fmt_residual(x: f64) -> String {
    format!("{:.3e}", x)
}
