//! Small formatting helpers shared by the CSV writers.

/// Format with a fixed number of significant digits, `%g`-style: plain decimal
/// notation in a sane exponent window, scientific outside it.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    if mag < -4 || mag >= digits as i32 {
        format!("{:.*e}", digits - 1, x)
    } else {
        let dec = (digits as i32 - 1 - mag).max(0) as usize;
        format!("{:.*}", dec, x)
    }
}

/// dB magnitude of a linear value, clamped below at -120 dB.
pub fn mag_db_clamped(mag: f64) -> f64 {
    if mag <= 0.0 {
        return -120.0;
    }
    (20.0 * mag.log10()).max(-120.0)
}
