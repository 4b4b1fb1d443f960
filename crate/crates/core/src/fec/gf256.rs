//! GF(2^8) arithmetic over the primitive polynomial
//! x^8 + x^4 + x^3 + x^2 + 1 (0x11D), generator alpha = 2.

const PRIMITIVE_POLY: u16 = 0x11D;

pub struct Tables {
    /// alpha^i for i in 0..510 (doubled to skip a modulo on products).
    pub exp: [u8; 512],
    /// log_alpha(x) for x in 1..=255; entry 0 is unused.
    pub log: [u8; 256],
}

pub static TABLES: Tables = build_tables();

const fn build_tables() -> Tables {
    let mut exp = [0u8; 512];
    let mut log = [0u8; 256];
    let mut x: u16 = 1;
    let mut i = 0usize;
    while i < 255 {
        exp[i] = x as u8;
        log[x as usize] = i as u8;
        x <<= 1;
        if x & 0x100 != 0 {
            x ^= PRIMITIVE_POLY;
        }
        i += 1;
    }
    while i < 512 {
        exp[i] = exp[i - 255];
        i += 1;
    }
    Tables { exp, log }
}

#[inline]
pub fn mul(a: u8, b: u8) -> u8 {
    if a == 0 || b == 0 {
        0
    } else {
        TABLES.exp[TABLES.log[a as usize] as usize + TABLES.log[b as usize] as usize]
    }
}

#[inline]
pub fn div(a: u8, b: u8) -> u8 {
    debug_assert!(b != 0, "division by zero in GF(256)");
    if a == 0 {
        0
    } else {
        TABLES.exp[TABLES.log[a as usize] as usize + 255 - TABLES.log[b as usize] as usize]
    }
}

#[inline]
pub fn inv(a: u8) -> u8 {
    div(1, a)
}

/// alpha^power for any integer power.
#[inline]
pub fn alpha_pow(power: i32) -> u8 {
    TABLES.exp[power.rem_euclid(255) as usize]
}

/// Evaluate a polynomial (coefficients low-degree first) at `x`.
pub fn poly_eval(coeffs: &[u8], x: u8) -> u8 {
    let mut acc = 0u8;
    for &c in coeffs.iter().rev() {
        acc = mul(acc, x) ^ c;
    }
    acc
}
