//! Scalar unit conventions.
//!
//! Everything internal is linear; decibels appear only at configuration and
//! reporting boundaries, always as `x_dB = 10 log10(x_linear)`.

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT_M_PER_S: f64 = 2.997_924_58e8;

/// Convert a decibel quantity to its linear value.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Convert a linear quantity to decibels.
pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}
