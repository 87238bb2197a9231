//! Closed-form Wigner representation of the two-mode squeezed vacuum and its
//! evolution under independent thermal baths.
//!
//! The evolved state stays Gaussian: it is fully described by a prefactor N
//! and two coefficients (E, F),
//!
//! ```text
//!   W(α, β) = N · exp[ −E (|α|² + |β|²) + F (αβ + α*β*) ]
//! ```
//!
//! with `αβ + α*β* = 2 (Re α · Re β − Im α · Im β)`. Time enters through the
//! decayed fraction `r = sqrt(1 − exp(−γτ))`, which compactifies τ ∈ [0, ∞]
//! onto [0, 1]. All operations here are pure functions of their inputs.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Squeezing magnitudes above this make cosh 2s overflow-prone and sit far
/// beyond the saturation of every observable handled here.
pub const MAX_SQUEEZING: f64 = 20.0;

fn ensure_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite { name, value })
    }
}

/// Squeezing magnitude s and phase φ of the complex parameter σ = s·e^{−iφ}.
///
/// The phase is carried for completeness but every evolved-dynamics operation
/// requires φ = 0; the channel solution is only stated for real σ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeSpec {
    s: f64,
    phi: f64,
}

impl SqueezeSpec {
    pub fn new(s: f64, phi: f64) -> Result<Self> {
        ensure_finite("s", s)?;
        ensure_finite("phi", phi)?;
        if !(0.0..=MAX_SQUEEZING).contains(&s) {
            return Err(Error::OutOfRange {
                name: "s",
                value: s,
                range: "[0, 20]",
            });
        }
        Ok(Self { s, phi })
    }

    /// Real squeezing (φ = 0), the only case the dynamics support.
    pub fn magnitude(s: f64) -> Result<Self> {
        Self::new(s, 0.0)
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub(crate) fn require_zero_phase(&self) -> Result<()> {
        if self.phi == 0.0 {
            Ok(())
        } else {
            Err(Error::PhaseUnsupported { phi: self.phi })
        }
    }
}

/// Mean thermal photon number n̄ of each (identical, independent) bath mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathSpec {
    nbar: f64,
}

impl BathSpec {
    pub fn new(nbar: f64) -> Result<Self> {
        ensure_finite("nbar", nbar)?;
        if nbar < 0.0 {
            return Err(Error::OutOfRange {
                name: "nbar",
                value: nbar,
                range: "[0, ∞)",
            });
        }
        Ok(Self { nbar })
    }

    pub fn vacuum() -> Self {
        Self { nbar: 0.0 }
    }

    pub fn nbar(&self) -> f64 {
        self.nbar
    }

    /// 1 + 2n̄, the width parameter of the bath Wigner function.
    pub fn width(&self) -> f64 {
        1.0 + 2.0 * self.nbar
    }
}

/// Channel time as the decayed fraction r(τ) = sqrt(1 − e^{−γτ}) ∈ [0, 1].
///
/// The transmitted fraction t = sqrt(1 − r²) is always derived from r, never
/// stored, so the two can not drift apart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelTime {
    r: f64,
}

impl ChannelTime {
    pub fn from_r(r: f64) -> Result<Self> {
        ensure_finite("r", r)?;
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::OutOfRange {
                name: "r",
                value: r,
                range: "[0, 1]",
            });
        }
        Ok(Self { r })
    }

    /// Convert from the dimensionless product γτ ≥ 0.
    pub fn from_gamma_tau(gamma_tau: f64) -> Result<Self> {
        if !(gamma_tau >= 0.0) {
            return Err(Error::OutOfRange {
                name: "gamma_tau",
                value: gamma_tau,
                range: "[0, ∞)",
            });
        }
        // r = sqrt(1 − e^{−γτ}); -exp_m1 keeps precision at small γτ.
        Ok(Self {
            r: (-f64::exp_m1(-gamma_tau)).sqrt(),
        })
    }

    pub fn initial() -> Self {
        Self { r: 0.0 }
    }

    pub fn asymptotic() -> Self {
        Self { r: 1.0 }
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// Transmitted amplitude t = sqrt(1 − r²).
    pub fn t(&self) -> f64 {
        self.t_sq().sqrt()
    }

    /// t² = 1 − r² (exact at both endpoints).
    pub fn t_sq(&self) -> f64 {
        1.0 - self.r * self.r
    }

    /// γτ = −ln(1 − r²); infinite at r = 1.
    pub fn gamma_tau(&self) -> f64 {
        -self.t_sq().ln()
    }
}

/// One complex phase-space displacement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub re: f64,
    pub im: f64,
}

impl PhasePoint {
    pub const ORIGIN: PhasePoint = PhasePoint { re: 0.0, im: 0.0 };

    pub fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    /// Validating constructor for values arriving from user input.
    pub fn checked(re: f64, im: f64) -> Result<Self> {
        ensure_finite("re", re)?;
        ensure_finite("im", im)?;
        Ok(Self { re, im })
    }

    pub fn abs2(&self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn abs(&self) -> f64 {
        self.abs2().sqrt()
    }
}

/// The evolved Gaussian, as (N, E, F) plus the common denominator D kept for
/// diagnostics.
///
/// `e_minus_f` and `e_plus_f` carry E ∓ F built from e^{∓2s} directly; the
/// naive difference of E² and F² loses eight digits by s = 5, while the
/// product (E−F)(E+F) stays accurate to rounding. The prefactor and every
/// Bell-value path use that product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianCoeffs {
    big_n: f64,
    e_coef: f64,
    f_coef: f64,
    d_denom: f64,
    e_minus_f: f64,
    e_plus_f: f64,
}

impl GaussianCoeffs {
    fn from_parts(e_coef: f64, f_coef: f64, d_denom: f64, e_minus_f: f64, e_plus_f: f64) -> Self {
        debug_assert!(e_minus_f > 0.0 && e_plus_f > 0.0);
        debug_assert!(f_coef >= 0.0);
        let big_n = e_minus_f * e_plus_f / (PI * PI);
        Self {
            big_n,
            e_coef,
            f_coef,
            d_denom,
            e_minus_f,
            e_plus_f,
        }
    }

    /// Wigner prefactor N = (E² − F²)/π², the unique unit-normalizing value.
    pub fn big_n(&self) -> f64 {
        self.big_n
    }

    pub fn e_coef(&self) -> f64 {
        self.e_coef
    }

    pub fn f_coef(&self) -> f64 {
        self.f_coef
    }

    pub fn d_denom(&self) -> f64 {
        self.d_denom
    }

    /// E − F, evaluated without cancellation.
    pub fn e_minus_f(&self) -> f64 {
        self.e_minus_f
    }

    /// E + F, evaluated without cancellation.
    pub fn e_plus_f(&self) -> f64 {
        self.e_plus_f
    }

    /// E² − F² as the stable product (E−F)(E+F); equals π²·N.
    pub fn norm_product(&self) -> f64 {
        self.e_minus_f * self.e_plus_f
    }
}

/// Evolved coefficients of the two-mode Gaussian after a channel time r:
///
/// ```text
///   E = [2 r² (1+2n̄) + 2 t² cosh 2s] / D
///   F =  2 t² sinh 2s / D
///   D =  t⁴ + 2 r² t² (1+2n̄) cosh 2s + r⁴ (1+2n̄)²
/// ```
///
/// At r = 0 this reduces to (E, F) = (2 cosh 2s, 2 sinh 2s) with D = 1; at
/// r = 1 it is the two-mode thermal product, independent of s.
pub fn evolve_coeffs(
    squeeze: &SqueezeSpec,
    bath: &BathSpec,
    time: &ChannelTime,
) -> Result<GaussianCoeffs> {
    squeeze.require_zero_phase()?;
    let two_s = 2.0 * squeeze.s();
    let k = bath.width();
    let r_sq = time.r() * time.r();
    let t_sq = time.t_sq();

    let cosh2s = two_s.cosh();
    let sinh2s = two_s.sinh();
    let d = t_sq * t_sq + 2.0 * r_sq * t_sq * k * cosh2s + r_sq * r_sq * k * k;

    let e_coef = (2.0 * r_sq * k + 2.0 * t_sq * cosh2s) / d;
    let f_coef = 2.0 * t_sq * sinh2s / d;
    // cosh ∓ sinh collapse to e^{∓2s} exactly; going through exp avoids the
    // cancellation that otherwise dominates E − F for s ≳ 5.
    let e_minus_f = (2.0 * r_sq * k + 2.0 * t_sq * (-two_s).exp()) / d;
    let e_plus_f = (2.0 * r_sq * k + 2.0 * t_sq * two_s.exp()) / d;

    Ok(GaussianCoeffs::from_parts(
        e_coef, f_coef, d, e_minus_f, e_plus_f,
    ))
}

/// Wigner density of the evolved Gaussian at a phase point pair.
pub fn wigner_value(coeffs: &GaussianCoeffs, alpha: PhasePoint, beta: PhasePoint) -> f64 {
    let quad = alpha.abs2() + beta.abs2();
    let cross = 2.0 * (alpha.re * beta.re - alpha.im * beta.im);
    coeffs.big_n() * (-coeffs.e_coef() * quad + coeffs.f_coef() * cross).exp()
}

/// Wigner density of the pure squeezed vacuum (channel time zero).
pub fn initial_wigner(squeeze: &SqueezeSpec, alpha: PhasePoint, beta: PhasePoint) -> Result<f64> {
    let coeffs = evolve_coeffs(squeeze, &BathSpec::vacuum(), &ChannelTime::initial())?;
    Ok(wigner_value(&coeffs, alpha, beta))
}

/// Single-mode thermal Wigner density, unit-normalized over the plane:
/// `2/(π(1+2n̄)) · exp(−2|ζ|²/(1+2n̄))`.
pub fn thermal_wigner(bath: &BathSpec, zeta: PhasePoint) -> f64 {
    let k = bath.width();
    2.0 / (PI * k) * (-2.0 * zeta.abs2() / k).exp()
}

/// τ → ∞ limit: the product of two thermal modes, E = 2/(1+2n̄), F = 0.
///
/// Implemented as `evolve_coeffs` at r = 1 so the endpoint of every decay
/// curve is bit-identical to this limit. The quoted closed form of the
/// asymptotic state carries a prefactor that does not normalize its own
/// exponent; the unit-normalizing N = 4/(π²(1+2n̄)²) is used here.
pub fn asymptotic_coeffs(bath: &BathSpec) -> GaussianCoeffs {
    let squeeze = SqueezeSpec::magnitude(0.0).expect("0 is a valid squeezing");
    evolve_coeffs(&squeeze, bath, &ChannelTime::asymptotic())
        .expect("asymptotic coefficients are always defined")
}
