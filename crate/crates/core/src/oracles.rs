//! Quadrature checks of the channel convolution and of the coherent-state
//! superposition decomposition.
//!
//! The thermal channel acts on Wigner functions as a Gaussian convolution,
//!
//! ```text
//!   W(α, β, τ) = (1/t⁴) ∬ d²ζ d²η  W_th(ζ) W_th(η)
//!                 · W((α − rζ)/t, (β − rη)/t, 0)
//! ```
//!
//! so a four-dimensional Gauss–Hermite evaluation of the right-hand side is
//! an independent route to the closed-form evolved coefficients.
//!
//! Separately, the squeezed vacuum is a continuous superposition of
//! correlated coherent pairs |α, α*⟩ under the Gaussian weight
//! `G(α) = (π sinh s)⁻¹ exp[−((1 − tanh s)/tanh s)|α|²]`; its norm and its
//! number-basis amplitudes are Gaussian integrals that must land on 1 and on
//! tanhⁿ(s)·sech(s).

use crate::error::{Error, Result};
use crate::phase_space::{
    evolve_coeffs, thermal_wigner, wigner_value, BathSpec, ChannelTime, PhasePoint, SqueezeSpec,
};
use crate::quad::GaussHermite;
use crate::tol::{CONVOLUTION_R_MAX, CONVOLUTION_R_MIN};
use std::f64::consts::PI;

/// Gauss–Hermite settings: nodes per axis and a width-matching multiplier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub nodes_per_axis: usize,
    /// Multiplies the automatic width match; 1.0 is the calibrated default.
    pub rescale: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            nodes_per_axis: 32,
            rescale: 1.0,
        }
    }
}

impl QuadratureSpec {
    pub fn new(nodes_per_axis: usize, rescale: f64) -> Result<Self> {
        let spec = Self {
            nodes_per_axis,
            rescale,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes_per_axis < 2 {
            return Err(Error::OutOfRange {
                name: "nodes_per_axis",
                value: self.nodes_per_axis as f64,
                range: "[2, ∞)",
            });
        }
        if !(self.rescale > 0.0 && self.rescale.is_finite()) {
            return Err(Error::OutOfRange {
                name: "rescale",
                value: self.rescale,
                range: "(0, ∞)",
            });
        }
        Ok(())
    }

    /// Width factor matched to a quadratic exponent with per-axis diagonal
    /// `q` and pair coupling `c`: the geometric mean of the principal widths
    /// 1/sqrt(q ∓ c). Matching the mean instead of the diagonal keeps the
    /// node count low when the coupling is strong.
    fn width(&self, q_minus_c: f64, q_plus_c: f64) -> f64 {
        self.rescale / (q_minus_c * q_plus_c).powf(0.25)
    }
}

/// The Gaussian weight of the coherent-pair superposition; defined for s > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightFunction {
    s: f64,
    normalization: f64,
    exponent_coef: f64,
}

impl WeightFunction {
    pub fn new(squeeze: &SqueezeSpec) -> Result<Self> {
        squeeze.require_zero_phase()?;
        let s = squeeze.s();
        if s <= 0.0 {
            return Err(Error::ZeroSqueezing);
        }
        Ok(Self {
            s,
            normalization: 1.0 / (PI * s.sinh()),
            exponent_coef: (1.0 - s.tanh()) / s.tanh(),
        })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// (π sinh s)⁻¹.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// (1 − tanh s)/tanh s; positive for every s > 0 and flattening toward 0
    /// as s grows, which is what spreads the superposition.
    pub fn exponent_coef(&self) -> f64 {
        self.exponent_coef
    }
}

/// G(α) = normalization · exp(−exponent_coef · |α|²).
pub fn weight_value(w: &WeightFunction, alpha: PhasePoint) -> f64 {
    w.normalization * (-w.exponent_coef * alpha.abs2()).exp()
}

/// Four-dimensional Gauss–Hermite evaluation of the channel convolution.
///
/// Valid away from the channel endpoints (`r` within the window pinned in
/// [`crate::tol`]); at the endpoints one of the kernels degenerates toward a
/// delta and the closed forms apply directly.
pub fn convolve_numeric(
    squeeze: &SqueezeSpec,
    bath: &BathSpec,
    time: &ChannelTime,
    alpha: PhasePoint,
    beta: PhasePoint,
    quad: &QuadratureSpec,
) -> Result<f64> {
    squeeze.require_zero_phase()?;
    quad.validate()?;
    let r = time.r();
    if !(CONVOLUTION_R_MIN..=CONVOLUTION_R_MAX).contains(&r) {
        return Err(Error::QuadratureEndpoint { r });
    }
    let t_sq = time.t_sq();
    let t = time.t();
    let k = bath.width();
    let two_s = 2.0 * squeeze.s();

    // per-axis diagonal and pair coupling of the integrand's quadratic form,
    // with q ∓ c assembled from e^{∓2s} so neither ever cancels
    let ratio = r * r / t_sq;
    let q_minus_c = 2.0 / k + 2.0 * (-two_s).exp() * ratio;
    let q_plus_c = 2.0 / k + 2.0 * two_s.exp() * ratio;
    let width = quad.width(q_minus_c, q_plus_c);

    let rule = GaussHermite::new(quad.nodes_per_axis)?;
    let (pts, vals) = rule.rescaled(width);
    let n = pts.len();

    let initial = evolve_coeffs(squeeze, &BathSpec::vacuum(), &ChannelTime::initial())?;
    let mut total = 0.0;
    for i in 0..n {
        let zx = pts[i];
        for j in 0..n {
            let zy = pts[j];
            let zeta = PhasePoint::new(zx, zy);
            let th_z = thermal_wigner(bath, zeta);
            let a_shift = PhasePoint::new((alpha.re - r * zx) / t, (alpha.im - r * zy) / t);
            let w_ij = vals[i] * vals[j] * th_z;
            for kk in 0..n {
                let hx = pts[kk];
                for l in 0..n {
                    let hy = pts[l];
                    let eta = PhasePoint::new(hx, hy);
                    let th_h = thermal_wigner(bath, eta);
                    let b_shift =
                        PhasePoint::new((beta.re - r * hx) / t, (beta.im - r * hy) / t);
                    let w0 = wigner_value(&initial, a_shift, b_shift);
                    total += w_ij * vals[kk] * vals[l] * th_h * w0;
                }
            }
        }
    }
    Ok(total / (t_sq * t_sq))
}

/// ⟨Ψ|Ψ⟩ of the coherent-pair superposition by 4-d quadrature over the two
/// weight variables; the coherent overlaps supply
/// exp(−|α|² − |β|² + 2 Re(α*β)). The analytic value is exactly 1.
pub fn superposition_norm(w: &WeightFunction, quad: &QuadratureSpec) -> Result<f64> {
    quad.validate()?;
    // per-axis diagonal is exponent_coef + 1 = 1/tanh s, pair coupling 1
    let q = w.exponent_coef + 1.0;
    let width = quad.width(q - 1.0, q + 1.0);
    let rule = GaussHermite::new(quad.nodes_per_axis)?;
    let (pts, vals) = rule.rescaled(width);
    let n = pts.len();

    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            let a = PhasePoint::new(pts[i], pts[j]);
            let ga = weight_value(w, a) * vals[i] * vals[j];
            for k in 0..n {
                for l in 0..n {
                    let b = PhasePoint::new(pts[k], pts[l]);
                    let gb = weight_value(w, b) * vals[k] * vals[l];
                    let overlap =
                        (-a.abs2() - b.abs2() + 2.0 * (a.re * b.re + a.im * b.im)).exp();
                    total += ga * gb * overlap;
                }
            }
        }
    }
    Ok(total)
}

/// The |n, n⟩ amplitude of the superposition,
/// ∫ G(α) e^{−|α|²} |α|^{2n}/n! d²α, by 2-d quadrature. Must equal
/// tanhⁿ(s)·sech(s), the number-basis amplitude of the squeezed vacuum.
pub fn superposition_fock_amplitude(
    w: &WeightFunction,
    n_photon: usize,
    quad: &QuadratureSpec,
) -> Result<f64> {
    quad.validate()?;
    let q = w.exponent_coef + 1.0;
    let width = quad.width(q, q);
    let rule = GaussHermite::new(quad.nodes_per_axis)?;
    let (pts, vals) = rule.rescaled(width);
    let n = pts.len();
    let factorial: f64 = (1..=n_photon).map(|k| k as f64).product();

    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            let a = PhasePoint::new(pts[i], pts[j]);
            let moment = a.abs2().powi(n_photon as i32) / factorial;
            total += vals[i] * vals[j] * weight_value(w, a) * (-a.abs2()).exp() * moment;
        }
    }
    Ok(total)
}

/// Comparison of the superposition's lowest number-basis amplitudes against
/// the Schmidt amplitudes of the squeezed vacuum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperpositionCheck {
    /// Quadrature values for n = 0, 1, 2.
    pub amplitudes: [f64; 3],
    /// tanhⁿ(s)·sech(s) for n = 0, 1, 2.
    pub expected: [f64; 3],
    pub worst_deviation: f64,
}

/// Verify that the superposition reproduces the squeezed vacuum's |n, n⟩
/// amplitudes for n ∈ {0, 1, 2}; n = 0 is the vacuum overlap sech(s).
pub fn superposition_wigner_check(
    w: &WeightFunction,
    quad: &QuadratureSpec,
) -> Result<SuperpositionCheck> {
    let mut amplitudes = [0.0; 3];
    let mut expected = [0.0; 3];
    let mut worst = 0.0f64;
    let sech = 1.0 / w.s.cosh();
    for n in 0..3 {
        amplitudes[n] = superposition_fock_amplitude(w, n, quad)?;
        expected[n] = w.s.tanh().powi(n as i32) * sech;
        worst = worst.max((amplitudes[n] - expected[n]).abs());
    }
    Ok(SuperpositionCheck {
        amplitudes,
        expected,
        worst_deviation: worst,
    })
}
