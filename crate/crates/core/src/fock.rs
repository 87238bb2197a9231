//! First-principles check of the Wigner–parity correspondence in a truncated
//! number basis.
//!
//! The pure two-mode squeezed state has the Schmidt form
//! Σₙ cₙ |n, n⟩ with cₙ = tanhⁿ(s)/cosh(s), so displaced-parity correlations
//! reduce to sums over exact displacement matrix elements. 4/π² times the
//! joint displaced-parity expectation must reproduce the closed-form Wigner
//! density, and four such expectations assemble the Bell function — computed
//! here without ever touching the Gaussian formulas being verified.
//!
//! Matrix elements ⟨m|D(α)|n⟩ come from the column recurrence
//! `D a† = (a† − α*) D`; rows only couple downward, so every entry of the
//! truncated block is an exact element of the infinite operator. The
//! displaced parity uses `D(α) P D†(α) = D(2α) P`, and a second, literal
//! route through the even/odd projector split cross-checks that identity.

use crate::error::{Error, Result};
use crate::phase_space::{PhasePoint, SqueezeSpec};
use crate::tol::FOCK_TAIL_TOL;
use ndarray::Array2;
use num_complex::Complex64;

/// Schmidt amplitudes of the squeezed vacuum up to a photon-number cutoff.
#[derive(Debug, Clone, PartialEq)]
pub struct FockAmplitudes {
    cutoff: usize,
    amps: Vec<f64>,
    tail_bound: f64,
}

impl FockAmplitudes {
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// amps[n] = tanhⁿ(s)/cosh(s).
    pub fn amps(&self) -> &[f64] {
        &self.amps
    }

    /// Analytic mass beyond the cutoff: tanh(s)^{2(cutoff+1)}.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// Σ amps², what the truncated state actually carries.
    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a * a).sum()
    }

    /// 1 − Σ amps²; bounded by `tail_bound` up to rounding.
    pub fn norm_deficit(&self) -> f64 {
        1.0 - self.norm()
    }
}

/// Number-basis amplitudes of the squeezed vacuum, with the truncation
/// deficit reported via [`FockAmplitudes::tail_bound`].
pub fn tmss_amplitudes(squeeze: &SqueezeSpec, cutoff: usize) -> Result<FockAmplitudes> {
    squeeze.require_zero_phase()?;
    let th = squeeze.s().tanh();
    let sech = 1.0 / squeeze.s().cosh();
    let mut amps = Vec::with_capacity(cutoff + 1);
    let mut a = sech;
    for _ in 0..=cutoff {
        amps.push(a);
        a *= th;
    }
    let tail_bound = th.powi(2 * (cutoff as i32 + 1));
    Ok(FockAmplitudes {
        cutoff,
        amps,
        tail_bound,
    })
}

/// Smallest cutoff whose geometric tail mass is below [`FOCK_TAIL_TOL`],
/// doubled until it also covers the displacement spreading.
///
/// `max_alpha_abs2` is the largest |α|² among the Bell displacements that
/// will be fed to [`joint_parity_expectation`]; the parity operator displaces
/// by 2α internally, so the spreading test runs against 4·|α|².
pub fn recommended_cutoff(squeeze: &SqueezeSpec, max_alpha_abs2: f64) -> usize {
    let th2 = squeeze.s().tanh().powi(2);
    let mut n = 4usize;
    if th2 > 0.0 {
        let mut tail = th2 / (1.0 - th2);
        let mut k = 0usize;
        while tail >= FOCK_TAIL_TOL && k < 10_000 {
            tail *= th2;
            k += 1;
        }
        n = n.max(k);
    }
    let spread = 4.0 * max_alpha_abs2.max(0.0);
    while spread > n as f64 / 4.0 {
        n *= 2;
    }
    n
}

/// Exact matrix elements ⟨m|D(α)|n⟩ for m, n ≤ cutoff.
pub fn displacement_matrix(alpha: PhasePoint, cutoff: usize) -> Result<Array2<Complex64>> {
    let abs2 = alpha.abs2();
    if !abs2.is_finite() {
        return Err(Error::NonFinite {
            name: "alpha",
            value: abs2,
        });
    }
    if abs2 > cutoff as f64 + 1.0 {
        return Err(Error::CutoffTooSmall {
            alpha_sq: abs2,
            cutoff,
        });
    }
    let dim = cutoff + 1;
    let a = Complex64::new(alpha.re, alpha.im);
    let mut mat = Array2::<Complex64>::zeros((dim, dim));
    // column 0 is the coherent state: e^{−|α|²/2} αᵐ/√(m!)
    let mut c = Complex64::new((-abs2 / 2.0).exp(), 0.0);
    mat[(0, 0)] = c;
    for m in 1..dim {
        c *= a / (m as f64).sqrt();
        mat[(m, 0)] = c;
    }
    // D a† = (a† − α*) D  ⇒  col_n[m] = (√m col_{n−1}[m−1] − α* col_{n−1}[m]) / √n
    for n in 1..dim {
        let inv = 1.0 / (n as f64).sqrt();
        for m in 0..dim {
            let mut acc = -a.conj() * mat[(m, n - 1)];
            if m > 0 {
                acc += (m as f64).sqrt() * mat[(m - 1, n - 1)];
            }
            mat[(m, n)] = acc * inv;
        }
    }
    Ok(mat)
}

/// ⟨m|D(α) (−1)^{n̂} D†(α)|n⟩ for one mode.
#[derive(Debug, Clone, PartialEq)]
pub struct DisplacedParityMatrix {
    cutoff: usize,
    entries: Array2<Complex64>,
}

impl DisplacedParityMatrix {
    /// Build via the exact identity D(α) P D†(α) = D(2α) P.
    pub fn build(alpha: PhasePoint, cutoff: usize) -> Result<Self> {
        let doubled = PhasePoint::new(2.0 * alpha.re, 2.0 * alpha.im);
        let mut entries = displacement_matrix(doubled, cutoff)?;
        for n in (1..=cutoff).step_by(2) {
            for m in 0..=cutoff {
                entries[(m, n)] = -entries[(m, n)];
            }
        }
        Ok(Self { cutoff, entries })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn entries(&self) -> &Array2<Complex64> {
        &self.entries
    }
}

/// The displaced even/odd projectors Π_e(α), Π_o(α) assembled literally from
/// D(α) O_{e,o} D†(α). Their difference must agree with
/// [`DisplacedParityMatrix`] on blocks away from the cutoff, and their sum
/// resolves the identity there.
pub fn displaced_parity_split(
    alpha: PhasePoint,
    cutoff: usize,
) -> Result<(Array2<Complex64>, Array2<Complex64>)> {
    let d = displacement_matrix(alpha, cutoff)?;
    let dim = cutoff + 1;
    let mut even = Array2::<Complex64>::zeros((dim, dim));
    let mut odd = Array2::<Complex64>::zeros((dim, dim));
    for m in 0..dim {
        for n in 0..dim {
            let mut e = Complex64::default();
            let mut o = Complex64::default();
            for k in 0..dim {
                let term = d[(m, k)] * d[(n, k)].conj();
                if k % 2 == 0 {
                    e += term;
                } else {
                    o += term;
                }
            }
            even[(m, n)] = e;
            odd[(m, n)] = o;
        }
    }
    Ok((even, odd))
}

/// ⟨Π̂^{ab}(α, β)⟩ on the truncated state: the joint parity correlation whose
/// 4/π² multiple is the two-mode Wigner density.
pub fn joint_parity_expectation(
    state: &FockAmplitudes,
    alpha: PhasePoint,
    beta: PhasePoint,
) -> Result<f64> {
    let pa = DisplacedParityMatrix::build(alpha, state.cutoff)?;
    let pb = DisplacedParityMatrix::build(beta, state.cutoff)?;
    let c = &state.amps;
    let mut total = Complex64::default();
    for m in 0..=state.cutoff {
        for n in 0..=state.cutoff {
            total += c[m] * c[n] * pa.entries[(m, n)] * pb.entries[(m, n)];
        }
    }
    // the m ↔ n symmetry makes the sum real; the residual imaginary part is
    // pure rounding noise
    debug_assert!(total.im.abs() < 1e-10);
    Ok(total.re)
}

/// Bell value assembled from four joint-parity expectations. The (π²/4) of
/// the Bell combination cancels the (4/π²) of the Wigner–parity relation, so
/// the four expectations sum directly.
pub fn bell_from_fock(
    state: &FockAmplitudes,
    alpha: PhasePoint,
    beta: PhasePoint,
) -> Result<f64> {
    let origin = PhasePoint::ORIGIN;
    Ok(joint_parity_expectation(state, origin, origin)?
        + joint_parity_expectation(state, alpha, origin)?
        + joint_parity_expectation(state, origin, beta)?
        - joint_parity_expectation(state, alpha, beta)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bell::{bell_function, max_bell, OptimizerConfig};
    use crate::phase_space::{
        evolve_coeffs, initial_wigner, BathSpec, ChannelTime,
    };
    use crate::tol;

    fn squeeze(s: f64) -> SqueezeSpec {
        SqueezeSpec::magnitude(s).unwrap()
    }

    #[test]
    fn vacuum_amplitudes() {
        let st = tmss_amplitudes(&squeeze(0.0), 4).unwrap();
        assert_eq!(st.amps(), &[1.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(st.tail_bound(), 0.0);
        assert_eq!(st.norm_deficit(), 0.0);
    }

    #[test]
    fn single_term_truncation_deficit() {
        let st = tmss_amplitudes(&squeeze(0.5), 0).unwrap();
        assert_eq!(st.amps().len(), 1);
        assert!((st.amps()[0] - 1.0 / 0.5f64.cosh()).abs() < 1e-15);
        // deficit = 1 − sech² = tanh²
        let tanh_sq = 0.5f64.tanh().powi(2);
        assert!((st.norm_deficit() - tanh_sq).abs() < 1e-15);
        assert!((st.tail_bound() - tanh_sq).abs() < 1e-15);
    }

    #[test]
    fn geometric_series_closes() {
        let st = tmss_amplitudes(&squeeze(0.5), 40).unwrap();
        assert!((st.norm() - 1.0).abs() < 1e-12);
        assert!(st.norm_deficit() <= st.tail_bound() + 1e-15);
    }

    #[test]
    fn rejects_tilted_phase() {
        let tilted = SqueezeSpec::new(0.5, 0.2).unwrap();
        assert!(tmss_amplitudes(&tilted, 10).is_err());
    }

    #[test]
    fn cutoff_rule_covers_tail_and_spread() {
        // pure tail at zero displacement
        let n_small = recommended_cutoff(&squeeze(0.1), 0.0);
        let n_large = recommended_cutoff(&squeeze(1.0), 0.0);
        assert!(n_small < n_large);
        assert!(
            tmss_amplitudes(&squeeze(1.0), n_large)
                .unwrap()
                .tail_bound()
                < 1e-9
        );
        // displacement spreading forces doubling
        assert!(recommended_cutoff(&squeeze(0.1), 1.62) > n_small);
    }

    #[test]
    fn displacement_at_zero_is_identity() {
        let d = displacement_matrix(PhasePoint::ORIGIN, 12).unwrap();
        for m in 0..=12 {
            for n in 0..=12 {
                let expect = if m == n { 1.0 } else { 0.0 };
                assert!((d[(m, n)] - expect).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn first_column_is_the_coherent_state() {
        let d = displacement_matrix(PhasePoint::new(1.0, 0.0), 30).unwrap();
        assert!((d[(0, 0)].re - (-0.5f64).exp()).abs() < 1e-15);
        assert!((d[(3, 0)].re - (-0.5f64).exp() / 6.0f64.sqrt()).abs() < 1e-15);
        assert!(d[(3, 0)].im.abs() < 1e-18);
    }

    #[test]
    fn truncated_unitarity_on_interior_block() {
        // D†D restricted to rows/cols far from the cutoff is the identity
        for (alpha, cutoff) in [
            (PhasePoint::new(0.5, 0.4), 30),
            (PhasePoint::new(0.2, -0.6), 30),
            (PhasePoint::new(1.0, 0.0), 40),
        ] {
            let d = displacement_matrix(alpha, cutoff).unwrap();
            let mut worst = 0.0f64;
            for m in 0..15 {
                for n in 0..15 {
                    let mut acc = Complex64::default();
                    for k in 0..=cutoff {
                        acc += d[(k, m)].conj() * d[(k, n)];
                    }
                    let expect = if m == n { 1.0 } else { 0.0 };
                    worst = worst.max((acc - expect).norm());
                }
            }
            assert!(
                worst < tol::UNITARITY_BLOCK_TOL,
                "alpha=({}, {}), cutoff={cutoff}: {worst}",
                alpha.re,
                alpha.im
            );
        }
    }

    #[test]
    fn displacement_rejects_oversized_argument() {
        assert!(matches!(
            displacement_matrix(PhasePoint::new(6.0, 0.0), 10),
            Err(Error::CutoffTooSmall { .. })
        ));
    }

    #[test]
    fn parity_split_routes_agree() {
        // Π_e − Π_o from the projector split vs D(2α)(−1)^{n̂}; corners near
        // the cutoff differ by construction, interior blocks must match
        let alpha = PhasePoint::new(0.4, -0.3);
        let cutoff = 30;
        let (even, odd) = displaced_parity_split(alpha, cutoff).unwrap();
        let direct = DisplacedParityMatrix::build(alpha, cutoff).unwrap();
        let mut worst = 0.0f64;
        for m in 0..15 {
            for n in 0..15 {
                let split = even[(m, n)] - odd[(m, n)];
                worst = worst.max((split - direct.entries()[(m, n)]).norm());
            }
        }
        assert!(worst < 1e-12, "routes diverge: {worst}");
    }

    #[test]
    fn parity_projectors_resolve_identity() {
        // ⟨Π_e + Π_o⟩ per mode equals the truncated norm Σ amps²: the reduced
        // state is diagonal, so only diagonal elements enter
        let st = tmss_amplitudes(&squeeze(0.5), 30).unwrap();
        let (even, odd) = displaced_parity_split(PhasePoint::new(0.4, -0.3), 30).unwrap();
        let mut total = 0.0;
        for m in 0..=30 {
            total += st.amps()[m] * st.amps()[m] * (even[(m, m)] + odd[(m, m)]).re;
        }
        assert!((total - st.norm()).abs() < 1e-10);
    }

    #[test]
    fn joint_parity_at_origin_is_the_truncated_norm() {
        // only |n, n⟩ terms: joint parity (−1)^{2n} = +1 for every term
        for s in [0.0, 0.3, 0.8] {
            let st = tmss_amplitudes(&squeeze(s), 40).unwrap();
            let p = joint_parity_expectation(&st, PhasePoint::ORIGIN, PhasePoint::ORIGIN)
                .unwrap();
            assert!((p - st.norm()).abs() < 1e-13, "s={s}");
        }
    }

    #[test]
    fn vacuum_displaced_parity_factorizes() {
        let st = tmss_amplitudes(&squeeze(0.0), 25).unwrap();
        let a = PhasePoint::new(0.7, 0.0);
        let b = PhasePoint::new(0.2, 0.0);
        let p = joint_parity_expectation(&st, a, b).unwrap();
        let expect = (-2.0 * 0.49f64).exp() * (-2.0 * 0.04f64).exp();
        assert!((p - expect).abs() < 1e-12);
        // and 4/π² of it is the vacuum Wigner density
        let w = initial_wigner(&squeeze(0.0), a, b).unwrap();
        assert!((4.0 / std::f64::consts::PI.powi(2) * p - w).abs() < 1e-13);
    }

    #[test]
    fn wigner_parity_identity_spot_checks() {
        let s = 0.5;
        let cutoff = recommended_cutoff(&squeeze(s), 0.85);
        let st = tmss_amplitudes(&squeeze(s), cutoff).unwrap();
        for (a, b) in [
            (PhasePoint::new(0.3, 0.2), PhasePoint::new(-0.4, 0.1)),
            (PhasePoint::new(-0.6, 0.5), PhasePoint::new(0.2, 0.7)),
            (PhasePoint::new(0.05, -0.9), PhasePoint::new(0.6, 0.0)),
        ] {
            let jpe = joint_parity_expectation(&st, a, b).unwrap();
            let w = initial_wigner(&squeeze(s), a, b).unwrap();
            assert!(
                (4.0 / std::f64::consts::PI.powi(2) * jpe - w).abs() < 1e-8,
                "({}, {}) vs ({}, {})",
                a.re,
                a.im,
                b.re,
                b.im
            );
        }
    }

    #[test]
    fn cutoff_doubling_is_stable() {
        let a = PhasePoint::new(0.3, 0.1);
        let b = PhasePoint::new(-0.2, 0.25);
        let st20 = tmss_amplitudes(&squeeze(0.5), 20).unwrap();
        let st40 = tmss_amplitudes(&squeeze(0.5), 40).unwrap();
        let p20 = joint_parity_expectation(&st20, a, b).unwrap();
        let p40 = joint_parity_expectation(&st40, a, b).unwrap();
        assert!((p20 - p40).abs() <= st20.tail_bound().max(1e-12));
    }

    #[test]
    fn bell_at_origin_is_two_for_vacuum() {
        let st = tmss_amplitudes(&squeeze(0.0), 10).unwrap();
        let b = bell_from_fock(&st, PhasePoint::ORIGIN, PhasePoint::ORIGIN).unwrap();
        assert_eq!(b, 2.0);
    }

    #[test]
    fn bell_routes_agree_at_the_argmax() {
        for (s, cutoff) in [(0.3, 40), (1.0, 60)] {
            let sq = squeeze(s);
            let coeffs =
                evolve_coeffs(&sq, &BathSpec::vacuum(), &ChannelTime::initial()).unwrap();
            let opt = max_bell(&coeffs, &OptimizerConfig::default()).unwrap();
            let alpha = PhasePoint::new(opt.arg_a, 0.0);
            let beta = PhasePoint::new(-opt.arg_b, 0.0);
            let st = tmss_amplitudes(&sq, cutoff).unwrap();
            let via_fock = bell_from_fock(&st, alpha, beta).unwrap();
            let via_wigner = bell_function(&coeffs, alpha, beta);
            assert!(
                (via_fock - via_wigner).abs() < tol::FOCK_BELL_TOL,
                "s={s}: {via_fock} vs {via_wigner}"
            );
        }
    }
}
