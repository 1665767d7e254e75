//! Polylogarithms of e^{−a} and the ideal-metal Lifshitz limit built on them.

use std::f64::consts::PI;

use crate::constants::{C, HBAR, K_B, ZETA_2, ZETA_3};
use crate::{Error, Result};

// ζ(1 − 2m) = −B_{2m}/(2m) for m = 1..10.
const ZETA_NEG_ODD: [f64; 10] = [
    -1.0 / 12.0,
    1.0 / 120.0,
    -1.0 / 252.0,
    1.0 / 240.0,
    -1.0 / 132.0,
    691.0 / 32760.0,
    -1.0 / 12.0,
    3617.0 / 8160.0,
    -43867.0 / 14364.0,
    174611.0 / 6600.0,
];

/// Σ_{n≥1} x^n / n^s for 0 ≤ x < 1 (direct series).
pub fn polylog_series(s: i32, x: f64) -> f64 {
    let mut sum = 0.0;
    let mut xn = x;
    for n in 1..200_000u32 {
        let t = xn / (n as f64).powi(s);
        sum += t;
        if t < 1e-18 * sum {
            break;
        }
        xn *= x;
    }
    sum
}

/// Li₂(e^{−a}) for a ≥ 0.
pub fn li2_exp_neg(a: f64) -> f64 {
    if a == 0.0 {
        return ZETA_2;
    }
    if a > 1.0 {
        return polylog_series(2, (-a).exp());
    }
    // Li_s(e^μ) = Σ_{k≠s−1} ζ(s−k) μ^k/k! + μ^{s−1}/(s−1)! [H_{s−1} − ln(−μ)], μ = −a.
    let mut sum = ZETA_2 - a * (1.0 - a.ln());
    // k = 2: ζ(0) = −1/2; k odd ≥ 3: ζ(2 − k) = ζ(−1), ζ(−3), ...; even k ≥ 4 vanish.
    sum += -0.5 * a * a / 2.0;
    let mut pow = a * a * a; // a^k
    let mut fact = 6.0; // k!
    for (m, z) in ZETA_NEG_ODD.iter().enumerate() {
        let k = 3 + 2 * m;
        sum += z * (-pow) / fact;
        pow *= a * a;
        fact *= ((k + 1) * (k + 2)) as f64;
    }
    sum
}

/// Li₃(e^{−a}) for a ≥ 0.
pub fn li3_exp_neg(a: f64) -> f64 {
    if a == 0.0 {
        return ZETA_3;
    }
    if a > 1.0 {
        return polylog_series(3, (-a).exp());
    }
    let mut sum = ZETA_3 - ZETA_2 * a + 0.5 * a * a * (1.5 - a.ln());
    // k = 3: ζ(0)(−a)³/3! = a³/12; k even ≥ 4: ζ(3 − k) = ζ(−1), ζ(−3), ...
    sum += a * a * a / 12.0;
    let mut pow = a.powi(4);
    let mut fact = 24.0;
    for (m, z) in ZETA_NEG_ODD.iter().enumerate() {
        let k = 4 + 2 * m;
        sum += z * pow / fact;
        pow *= a * a;
        fact *= ((k + 1) * (k + 2)) as f64;
    }
    sum
}

/// −π² ħ c / (720 z³), the zero-temperature ideal-metal free energy per area.
pub fn ideal_metal_zero_temperature(z: f64) -> f64 {
    -PI * PI * HBAR * C / (720.0 * z * z * z)
}

/// Ideal-metal free energy per area, J/m². `temperature == 0` gives the
/// closed form; otherwise the Matsubara series with r_TM = r_TE = 1, summed
/// termwise in closed form:
/// ∫_{a}^∞ y ln(1 − e^{−y}) dy = −[a Li₂(e^{−a}) + Li₃(e^{−a})].
pub fn ideal_metal_reference(z: f64, temperature: f64) -> Result<f64> {
    if !(z.is_finite() && z > 0.0) {
        return Err(Error::domain(format!("separation must be > 0, got {z}")));
    }
    if temperature == 0.0 {
        return Ok(ideal_metal_zero_temperature(z));
    }
    if !(temperature.is_finite() && temperature > 0.0) {
        return Err(Error::domain(format!("temperature must be >= 0, got {temperature}")));
    }
    let y1 = 2.0 * z * 2.0 * PI * K_B * temperature / (HBAR * C);
    let term = |y: f64| -2.0 * (y * li2_exp_neg(y) + li3_exp_neg(y));
    let mut sum = 0.5 * term(0.0);
    let mut small = 0;
    for j in 1.. {
        let t = term(y1 * j as f64);
        sum += t;
        if t.abs() <= 1e-17 * sum.abs() {
            small += 1;
            if small == 3 {
                break;
            }
        } else {
            small = 0;
        }
    }
    Ok(K_B * temperature / (2.0 * PI) * sum / (4.0 * z * z))
}
