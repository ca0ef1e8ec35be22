//! Number formatting for the text reports.

use jordanlens::Complex64;

/// Twelve significant digits; scientific notation for tiny magnitudes.
pub fn fmt_real(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-4..12).contains(&mag) {
        return format!("{x:.11e}");
    }
    format!("{:.*}", (11 - mag) as usize, x)
}

pub fn fmt_angle(theta: f64, degrees: bool) -> String {
    fmt_real(if degrees { theta.to_degrees() } else { theta })
}

pub fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        return fmt_real(z.re);
    }
    let sign = if z.im < 0.0 { '-' } else { '+' };
    format!("{}{sign}{}i", fmt_real(z.re), fmt_real(z.im.abs()))
}
