//! Parameterized models of the faulty gate-set and the composite rotations
//! used by the calibration protocols.
//!
//! The two generators are an approximate Z rotation by π/2, off by the
//! fractional over-rotation α, and an approximate X rotation by a nominal
//! angle φ (default π/4), off by the fractional over-rotation ε and with its
//! axis tilted by θ towards Z inside the XZ plane.

use serde::{Deserialize, Serialize};

use crate::linalg2::{multiply, su2_from_axis_angle, Operator2};
use crate::{Error, Result};

/// The systematic-error triple (α, ε, θ) plus the nominal X rotation angle φ.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateParams {
    /// Fractional Z over-rotation: implemented angle is (π/2)(1+α).
    pub alpha: f64,
    /// Fractional X over-rotation: implemented angle is φ(1+ε).
    pub epsilon: f64,
    /// Tilt of the X axis towards Z, in radians, wrapped to (−π, π].
    pub theta: f64,
    /// Nominal X rotation angle in radians.
    pub phi: f64,
}

impl GateParams {
    pub fn new(alpha: f64, epsilon: f64, theta: f64, phi: f64) -> Result<Self> {
        for (name, v) in [
            ("alpha", alpha),
            ("epsilon", epsilon),
            ("theta", theta),
            ("phi", phi),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} is not finite")));
            }
        }
        Ok(Self {
            alpha,
            epsilon,
            theta: crate::wrap_angle(theta),
            phi,
        })
    }

    /// Perfect gates at the default nominal angle φ = π/4.
    pub fn ideal() -> Self {
        Self {
            alpha: 0.0,
            epsilon: 0.0,
            theta: 0.0,
            phi: std::f64::consts::FRAC_PI_4,
        }
    }
}

impl Default for GateParams {
    fn default() -> Self {
        Self::ideal()
    }
}

/// Approximate Z_{π/2}: cos(π/4·(1+α))𝟙 − i sin(π/4·(1+α))Z.
pub fn z_gate(alpha: f64) -> Operator2 {
    let h = std::f64::consts::FRAC_PI_4 * (1.0 + alpha);
    su2_from_axis_angle(2.0 * h, [0.0, 0.0, 1.0])
}

/// Approximate X_φ: cos(φ/2·(1+ε))𝟙 − i sin(φ/2·(1+ε))(cosθ·X + sinθ·Z).
pub fn x_gate(phi: f64, epsilon: f64, theta: f64) -> Operator2 {
    su2_from_axis_angle(phi * (1.0 + epsilon), [theta.cos(), 0.0, theta.sin()])
}

/// The composite rotation Z · Xᵠ · Z² · Xᵠ · Z with q repetitions of the X
/// gate in each block. With q = 4 and φ = π/4 this is the tilt-amplifying
/// sequence whose net rotation angle encodes θ; a nonzero `alpha` models the
/// same sequence built from faulty Z rotations.
pub fn composite_u(epsilon: f64, theta: f64, alpha: f64, q: u32, phi: f64) -> Operator2 {
    let z = z_gate(alpha);
    // X^q is a single rotation by qφ(1+ε) about the tilted axis.
    let xq = su2_from_axis_angle(
        phi * (1.0 + epsilon) * q as f64,
        [theta.cos(), 0.0, theta.sin()],
    );
    let zz = multiply(&z, &z);
    multiply(
        &z,
        &multiply(&xq, &multiply(&zz, &multiply(&xq, &z))),
    )
}

/// Axis/angle description of the composite rotation at α = 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompositeAxisResult {
    /// Net rotation angle Φ, reported in [0, π].
    pub big_phi: f64,
    /// Tilt of the rotation-axis line from the X axis, folded into
    /// (−π/2, π/2]. The oriented direction (which may point near −x̂ for
    /// negative tilts) is carried by `n_x`, `n_z`.
    pub big_theta: f64,
    /// Oriented axis direction matching `big_phi` and the matrix
    /// decomposition of [`composite_u`]; `n_x² + n_z² = 1`.
    pub n_x: f64,
    pub n_z: f64,
}

/// Closed-form axis and angle of the composite rotation (q = 4, φ = π/4
/// case, i.e. odd multiplier t = 1).
pub fn composite_axis_angle(epsilon: f64, theta: f64) -> CompositeAxisResult {
    composite_axis_angle_with_t(epsilon, theta, 1)
}

/// Closed-form axis and angle for the general composite built from X_φ^q
/// with qφ = tπ, t odd.
///
/// Derivation (verified against the explicit matrix decomposition in tests):
/// the composite equals a product of two rotations by tπ(1+ε) about the
/// axes (0, ±cosθ, sinθ), giving
///   cos(Φ/2) = 1 − 2 sin²θ cos²(tπε/2)
///   sin(Φ/2)·n_x = sin(2θ) cos²(tπε/2)
///   sin(Φ/2)·n_z = −sinθ sin(tπε)
/// The Y component of the axis is zero. Φ is folded into [0, π] with the
/// axis sign absorbing orientation, so the unnormalized axis carries the
/// sign of θ.
pub fn composite_axis_angle_with_t(epsilon: f64, theta: f64, t: i64) -> CompositeAxisResult {
    let half = 0.5 * t as f64 * std::f64::consts::PI * epsilon;
    let (st, ct) = theta.sin_cos();
    let ch = half.cos();
    let w = 1.0 - 2.0 * st * st * ch * ch;
    let vx = 2.0 * st * ct * ch * ch;
    let vz = -st * (2.0 * half).sin();
    let vnorm = (vx * vx + vz * vz).sqrt();
    let mut big_phi = 2.0 * vnorm.atan2(w);
    let (mut n_x, mut n_z) = if vnorm > 0.0 {
        (vx / vnorm, vz / vnorm)
    } else {
        // Degenerate (θ = 0): the composite is the identity channel and the
        // axis is arbitrary; keep the θ → 0⁺ limit.
        (1.0, 0.0)
    };
    if big_phi > std::f64::consts::PI {
        // Fold Φ ∈ (π, 2π] to [0, π) by flipping the axis.
        big_phi = 2.0 * std::f64::consts::PI - big_phi;
        n_x = -n_x;
        n_z = -n_z;
    }
    // Axis-line angle, independent of the direction's orientation.
    let big_theta = if n_x >= 0.0 {
        n_z.atan2(n_x)
    } else {
        (-n_z).atan2(-n_x)
    };
    CompositeAxisResult {
        big_phi,
        big_theta,
        n_x,
        n_z,
    }
}

/// Axis/angle decomposition of a unitary: returns (φ, n̂) with
/// u ∝ cos(φ/2)𝟙 − i sin(φ/2) n̂·σ⃗ up to global phase, φ ∈ [0, π] (the axis
/// sign absorbs orientation) and n̂ = x̂ when the rotation is trivial.
pub fn su2_axis_angle(u: &Operator2) -> Result<(f64, [f64; 3])> {
    let defect = u.unitarity_defect();
    if defect > crate::linalg2::TOL_UNITARY {
        return Err(Error::NotUnitary(defect));
    }
    // Normalize the determinant to 1 (strip global phase).
    let det = u.det();
    let root = det.sqrt();
    let g = u.scale(root.inv());
    let c = 0.5 * g.trace().re;
    // g = c·𝟙 − i v⃗·σ⃗  ⟹  v_j = Im(tr(g σ_j))/(-2) … spelled out per entry:
    let vx = 0.5 * (g.get(0, 1) + g.get(1, 0)).im * -1.0;
    let vy = 0.5 * (g.get(1, 0) - g.get(0, 1)).re;
    let vz = 0.5 * (g.get(0, 0) - g.get(1, 1)).im * -1.0;
    let (c, v) = if c < 0.0 {
        (-c, [-vx, -vy, -vz])
    } else {
        (c, [vx, vy, vz])
    };
    let vnorm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let phi = 2.0 * vnorm.atan2(c);
    let n = if vnorm > 1e-15 {
        [v[0] / vnorm, v[1] / vnorm, v[2] / vnorm]
    } else {
        [1.0, 0.0, 0.0]
    };
    Ok((phi, n))
}

/// A rotation angle expressed exactly as a reduced positive fraction of π.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiFraction {
    numer: u64,
    denom: u64,
}

impl PhiFraction {
    pub fn new(numer: u64, denom: u64) -> Result<Self> {
        if numer == 0 || denom == 0 {
            return Err(Error::InvalidParameter(
                "phi fraction must be positive".into(),
            ));
        }
        let g = gcd(numer, denom);
        Ok(Self {
            numer: numer / g,
            denom: denom / g,
        })
    }

    pub fn numer(&self) -> u64 {
        self.numer
    }

    pub fn denom(&self) -> u64 {
        self.denom
    }

    /// The angle in radians, materialized only at matrix-construction time.
    pub fn radians(&self) -> f64 {
        std::f64::consts::PI * self.numer as f64 / self.denom as f64
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Repetition count and odd multiplier for a nominal angle: the smallest q
/// with qφ′ = tπ for odd t, where φ′ = φ/2ˢ is the calibration target
/// (s > 0 only when the numerator of φ/π is even; 2ˢ rotations by φ′
/// compose to φ).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QtChoice {
    pub q: u64,
    pub t: u64,
    pub s: u32,
    pub target: PhiFraction,
}

/// Pick (q, t, s) for a nominal angle φ = (a/b)π given as a reduced
/// fraction. Divisibility logic is exact integer arithmetic throughout.
pub fn choose_q_t(phi: PhiFraction) -> QtChoice {
    let mut c = phi.numer;
    let mut s = 0u32;
    while c % 2 == 0 {
        c /= 2;
        s += 1;
    }
    let target = PhiFraction {
        numer: c,
        denom: phi.denom,
    };
    QtChoice {
        q: phi.denom,
        t: c,
        s,
        target,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg2::{conjugate_channel, random_density, trace_distance, DensityOperator};
    use num_complex::Complex64 as C64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_4, PI};

    #[test]
    fn z_gate_examples() {
        // α = 0: (1/√2)·diag(1−i, 1+i)
        let z = z_gate(0.0);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let expect = Operator2::new(
            C64::new(r, -r),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(r, r),
        );
        assert!(z.max_abs_diff(&expect) < 1e-15);
        // α = 1: full π rotation, −iZ
        let z1 = z_gate(1.0);
        let expect1 = Operator2::pauli_z().scale(C64::new(0.0, -1.0));
        assert!(z1.max_abs_diff(&expect1) < 1e-15);
    }

    #[test]
    fn z_gate_overrotation_probability() {
        // |⟨+|Z_{π/2}(α)|+⟩|² = (1 + cos(π/2·(1+α)))/2
        let alpha = 0.02;
        let z = z_gate(alpha);
        let plus = DensityOperator::ket_plus();
        let out = conjugate_channel(&z, &plus).unwrap();
        let p = crate::linalg2::PovmEffect::projector_plus().probability(&out);
        let expect = (1.0 + (PI / 2.0 * 1.02).cos()) / 2.0;
        assert!((p - expect).abs() < 1e-12);
    }

    #[test]
    fn x_gate_powers() {
        // Eight perfect π/4 rotations give −𝟙.
        let x = x_gate(FRAC_PI_4, 0.0, 0.0);
        let mut u = Operator2::identity();
        for _ in 0..8 {
            u = multiply(&x, &u);
        }
        assert!(u.max_abs_diff(&Operator2::identity().scale(C64::new(-1.0, 0.0))) < 1e-12);
        // Four perfect π/4 rotations give a π rotation: |⟨0|u⁴|0⟩|² = 0.
        let mut u4 = Operator2::identity();
        for _ in 0..4 {
            u4 = multiply(&x, &u4);
        }
        assert!(u4.get(0, 0).norm_sqr() < 1e-24);
    }

    #[test]
    fn x_gate_tilted_survival() {
        // Tilted axis θ = π/6: |⟨0|u⁴|0⟩|² = sin²(π/2)·sin²(π/6) = 0.25.
        let x = x_gate(FRAC_PI_4, 0.0, PI / 6.0);
        let mut u4 = Operator2::identity();
        for _ in 0..4 {
            u4 = multiply(&x, &u4);
        }
        assert!((u4.get(0, 0).norm_sqr() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn gate_unitarity_random_draws() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let z = z_gate(rng.gen_range(-1.0..1.0));
            let x = x_gate(
                rng.gen_range(0.0..PI),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-PI..PI),
            );
            assert!(z.unitarity_defect() < 1e-10);
            assert!(x.unitarity_defect() < 1e-10);
        }
    }

    #[test]
    fn composite_identity_when_straight() {
        // θ = 0 makes the composite an identity channel.
        let u = composite_u(0.0, 0.0, 0.0, 4, FRAC_PI_4);
        let (phi, _) = su2_axis_angle(&u).unwrap();
        assert!(phi.abs() < 1e-10);
        let u2 = composite_u(0.1, 0.0, 0.0, 4, FRAC_PI_4);
        let (phi2, _) = su2_axis_angle(&u2).unwrap();
        assert!(phi2.abs() < 1e-9);
    }

    #[test]
    fn composite_angle_encodes_tilt() {
        // ε = 0, θ = 0.05: sin(Φ/2) = sin(2θ).
        let r = composite_axis_angle(0.0, 0.05);
        assert!(((r.big_phi / 2.0).sin() - (0.1f64).sin()).abs() < 1e-13);
        assert!(r.n_z.abs() < 1e-13);
        // Cross-check against the matrix decomposition.
        let u = composite_u(0.0, 0.05, 0.0, 4, FRAC_PI_4);
        let (phi_m, n_m) = su2_axis_angle(&u).unwrap();
        assert!((phi_m - r.big_phi).abs() < 1e-10);
        assert!((n_m[0] - r.n_x).abs() < 1e-9);
    }

    #[test]
    fn composite_axis_tilt_magnitude() {
        // |Θ| = arcsin(sin(πε/2)/√(1 − sin²θ cos²(πε/2))) at (ε, θ) = (0.1, 0.05).
        let r = composite_axis_angle(0.1, 0.05);
        let expect = ((0.05f64 * PI).sin()
            / (1.0 - (0.05f64).sin().powi(2) * (0.05 * PI).cos().powi(2)).sqrt())
        .asin();
        assert!((r.big_theta.abs() - expect).abs() < 1e-12);
        // sin(Φ/2) from the closed form.
        let szeta = 2.0 * (0.05f64).sin() * (0.05 * PI).cos()
            * (1.0 - (0.05f64).sin().powi(2) * (0.05 * PI).cos().powi(2)).sqrt();
        assert!(((r.big_phi / 2.0).sin() - szeta).abs() < 1e-13);
    }

    #[test]
    fn composite_matches_matrix_on_grid() {
        // Channel-level agreement between the closed form and the explicit
        // product over a 20×20 grid of (ε, θ).
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for i in 0..20 {
            for j in 0..20 {
                let eps = -0.3 + 0.6 * i as f64 / 19.0;
                let th = -0.5 + 1.0 * j as f64 / 19.0;
                let u = composite_u(eps, th, 0.0, 4, FRAC_PI_4);
                let r = composite_axis_angle(eps, th);
                // Axis stays in the XZ plane: n_x² + n_z² = 1.
                assert!((r.n_x * r.n_x + r.n_z * r.n_z - 1.0).abs() < 1e-10);
                let rebuilt = su2_from_axis_angle(r.big_phi, [r.n_x, 0.0, r.n_z]);
                // Compare as channels on random states.
                for _ in 0..3 {
                    let rho = random_density(&mut rng);
                    let a = conjugate_channel(&u, &rho).unwrap();
                    let b = conjugate_channel(&rebuilt, &rho).unwrap();
                    assert!(
                        trace_distance(&a, &b) < 1e-9,
                        "channel mismatch at eps={eps} theta={th}"
                    );
                }
            }
        }
    }

    #[test]
    fn composite_tilt_is_linear_in_epsilon() {
        // |sin Θ| ≤ sin(π|ε|/2)/√(1 − sin²θ) and |sin Θ|/|ε| stays below
        // (π/2)·1.1 on the small-error box.
        for i in 0..21 {
            for j in 0..21 {
                let eps = -0.1 + 0.2 * i as f64 / 20.0;
                let th = -0.3 + 0.6 * j as f64 / 20.0;
                if eps.abs() < 1e-9 {
                    continue;
                }
                let r = composite_axis_angle(eps, th);
                let cap = ((0.5 * PI * eps).sin().abs()
                    / (1.0 - th.sin().powi(2)).sqrt())
                .asin();
                assert!(r.big_theta.abs() <= cap + 1e-12);
                assert!(r.n_z.abs() / eps.abs() <= 0.5 * PI * 1.1);
            }
        }
    }

    #[test]
    fn general_odd_multiplier_matches_matrix() {
        // φ = 3π/5 (q = 5, t = 3): closed form with t = 3 agrees with the
        // explicit product.
        let frac = PhiFraction::new(3, 5).unwrap();
        let qt = choose_q_t(frac);
        assert_eq!((qt.q, qt.t, qt.s), (5, 3, 0));
        let (eps, th) = (0.04, -0.07);
        let u = composite_u(eps, th, 0.0, qt.q as u32, frac.radians());
        let (phi_m, n_m) = su2_axis_angle(&u).unwrap();
        let r = composite_axis_angle_with_t(eps, th, qt.t as i64);
        assert!((phi_m - r.big_phi).abs() < 1e-10, "{phi_m} vs {}", r.big_phi);
        assert!((n_m[0] - r.n_x).abs() < 1e-9);
        assert!((n_m[2] - r.n_z).abs() < 1e-9);
        assert!(n_m[1].abs() < 1e-9);
    }

    #[test]
    fn choose_q_t_examples() {
        let c = choose_q_t(PhiFraction::new(1, 4).unwrap());
        assert_eq!((c.q, c.t, c.s), (4, 1, 0));
        let c = choose_q_t(PhiFraction::new(3, 5).unwrap());
        assert_eq!((c.q, c.t, c.s), (5, 3, 0));
        // Even numerator: calibrate φ′ = π/3 instead, two of which give 2π/3.
        let c = choose_q_t(PhiFraction::new(2, 3).unwrap());
        assert_eq!((c.q, c.t, c.s), (3, 1, 1));
        assert_eq!((c.target.numer(), c.target.denom()), (1, 3));
        // q·(a/b) = t exactly, t odd.
        for (a, b) in [(1u64, 4u64), (3, 5), (2, 3), (12, 7), (8, 9), (5, 2)] {
            let f = PhiFraction::new(a, b).unwrap();
            let c = choose_q_t(f);
            assert_eq!(c.t % 2, 1, "t must be odd for {a}/{b}");
            // q·target = t exactly in integer arithmetic.
            assert_eq!(c.q * c.target.numer(), c.t * c.target.denom());
            // 2^s rotations by the target compose back to φ.
            assert_eq!(f.numer(), c.target.numer() * (1 << c.s));
            assert_eq!(f.denom(), c.target.denom());
        }
        assert!(PhiFraction::new(0, 3).is_err());
        assert!(PhiFraction::new(3, 0).is_err());
    }

    #[test]
    fn theta_wraps_into_principal_range() {
        let p = GateParams::new(0.0, 0.0, 4.0, FRAC_PI_4).unwrap();
        assert!(p.theta > -PI && p.theta <= PI);
        assert!((p.theta - (4.0 - 2.0 * PI)).abs() < 1e-12);
    }
}
