//! Exact complex 2×2 operator algebra on the single-qubit Hilbert space.
//!
//! Everything else in the crate is built on these types: general operators,
//! validated density operators and POVM effects, the induced unitary channel,
//! and the two distance measures used for error budgeting (trace distance
//! between states, spectral distance between effects).
//!
//! Eigenvalues of Hermitian 2×2 matrices are always computed by the
//! closed-form quadratic (trace and determinant), never iteratively.

use num_complex::Complex64 as C64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Entrywise tolerance for Hermiticity / trace checks.
pub const TOL_STRUCTURE: f64 = 1e-12;
/// Eigenvalue floor for positivity checks.
pub const TOL_EIGEN: f64 = 1e-12;
/// Tolerance for unitarity checks.
pub const TOL_UNITARY: f64 = 1e-10;

/// A general complex 2×2 operator, stored row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Operator2 {
    e: [[C64; 2]; 2],
}

impl Operator2 {
    pub fn new(e00: C64, e01: C64, e10: C64, e11: C64) -> Self {
        Self {
            e: [[e00, e01], [e10, e11]],
        }
    }

    pub fn zero() -> Self {
        Self::from_real(0.0, 0.0, 0.0, 0.0)
    }

    pub fn identity() -> Self {
        Self::from_real(1.0, 0.0, 0.0, 1.0)
    }

    pub fn pauli_x() -> Self {
        Self::from_real(0.0, 1.0, 1.0, 0.0)
    }

    pub fn pauli_y() -> Self {
        Self::new(
            C64::new(0.0, 0.0),
            C64::new(0.0, -1.0),
            C64::new(0.0, 1.0),
            C64::new(0.0, 0.0),
        )
    }

    pub fn pauli_z() -> Self {
        Self::from_real(1.0, 0.0, 0.0, -1.0)
    }

    fn from_real(e00: f64, e01: f64, e10: f64, e11: f64) -> Self {
        Self::new(
            C64::new(e00, 0.0),
            C64::new(e01, 0.0),
            C64::new(e10, 0.0),
            C64::new(e11, 0.0),
        )
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.e[row][col]
    }

    pub fn dagger(&self) -> Self {
        Self::new(
            self.e[0][0].conj(),
            self.e[1][0].conj(),
            self.e[0][1].conj(),
            self.e[1][1].conj(),
        )
    }

    pub fn trace(&self) -> C64 {
        self.e[0][0] + self.e[1][1]
    }

    pub fn det(&self) -> C64 {
        self.e[0][0] * self.e[1][1] - self.e[0][1] * self.e[1][0]
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            self.e[0][0] + other.e[0][0],
            self.e[0][1] + other.e[0][1],
            self.e[1][0] + other.e[1][0],
            self.e[1][1] + other.e[1][1],
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(
            self.e[0][0] - other.e[0][0],
            self.e[0][1] - other.e[0][1],
            self.e[1][0] - other.e[1][0],
            self.e[1][1] - other.e[1][1],
        )
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(
            self.e[0][0] * s,
            self.e[0][1] * s,
            self.e[1][0] * s,
            self.e[1][1] * s,
        )
    }

    /// Largest entrywise absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut m: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                m = m.max((self.e[r][c] - other.e[r][c]).norm());
            }
        }
        m
    }

    pub fn is_finite(&self) -> bool {
        self.e
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Entrywise deviation of `self · self†` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        multiply(self, &self.dagger()).max_abs_diff(&Self::identity())
    }

    /// Entrywise deviation from `self†`.
    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.dagger())
    }

    /// Eigenvalues of a Hermitian operator, by the closed-form quadratic.
    /// Returned as (low, high). The caller is responsible for Hermiticity.
    pub fn hermitian_eigenvalues(&self) -> (f64, f64) {
        let half_tr = 0.5 * self.trace().re;
        let d00 = self.e[0][0].re;
        let d11 = self.e[1][1].re;
        let r = (0.25 * (d00 - d11).powi(2) + self.e[0][1].norm_sqr()).sqrt();
        (half_tr - r, half_tr + r)
    }

    /// Real coefficients (m₀, m₁, m₂, m₃) with `self = Σ mᵢ Pᵢ` for a
    /// Hermitian operator (P₀ = 𝟙, then X, Y, Z).
    pub fn pauli_decomposition(&self) -> PauliDecomposition {
        let m0 = 0.5 * (self.e[0][0] + self.e[1][1]).re;
        let m1 = 0.5 * (self.e[0][1] + self.e[1][0]).re;
        let m2 = 0.5 * (self.e[1][0] - self.e[0][1]).im;
        let m3 = 0.5 * (self.e[0][0] - self.e[1][1]).re;
        PauliDecomposition {
            coeffs: [m0, m1, m2, m3],
        }
    }
}

impl std::ops::Mul for Operator2 {
    type Output = Operator2;
    fn mul(self, rhs: Operator2) -> Operator2 {
        multiply(&self, &rhs)
    }
}

/// Matrix product `a · b`. Sequences compose right to left: the rightmost
/// factor acts first.
pub fn multiply(a: &Operator2, b: &Operator2) -> Operator2 {
    let mut e = [[C64::new(0.0, 0.0); 2]; 2];
    for (r, row) in e.iter_mut().enumerate() {
        for (c, out) in row.iter_mut().enumerate() {
            *out = a.e[r][0] * b.e[0][c] + a.e[r][1] * b.e[1][c];
        }
    }
    Operator2 { e }
}

/// Real Pauli coefficients of a Hermitian operator: `op = Σ mᵢ Pᵢ`.
///
/// For a density operator the coefficients are (1, r₁, r₂, r₃)/2 with r⃗ the
/// Bloch vector.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliDecomposition {
    pub coeffs: [f64; 4],
}

impl PauliDecomposition {
    pub fn reconstruct(&self) -> Operator2 {
        let [m0, m1, m2, m3] = self.coeffs;
        Operator2::identity()
            .scale(C64::new(m0, 0.0))
            .add(&Operator2::pauli_x().scale(C64::new(m1, 0.0)))
            .add(&Operator2::pauli_y().scale(C64::new(m2, 0.0)))
            .add(&Operator2::pauli_z().scale(C64::new(m3, 0.0)))
    }
}

/// A validated density operator: Hermitian, unit trace, positive semidefinite
/// (all to fixed tolerances).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityOperator(Operator2);

impl DensityOperator {
    pub fn new(op: Operator2) -> Result<Self> {
        if !op.is_finite() {
            return Err(Error::InvalidDensity("non-finite entries".into()));
        }
        let h = op.hermiticity_defect();
        if h > TOL_STRUCTURE {
            return Err(Error::InvalidDensity(format!(
                "not Hermitian (defect {h:.3e})"
            )));
        }
        let tr = op.trace();
        if (tr.re - 1.0).abs() > TOL_STRUCTURE || tr.im.abs() > TOL_STRUCTURE {
            return Err(Error::InvalidDensity(format!("trace {tr} != 1")));
        }
        let (lo, _) = op.hermitian_eigenvalues();
        if lo < -TOL_EIGEN {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {lo:.3e}"
            )));
        }
        Ok(Self(op))
    }

    /// Construction from values already known to satisfy the invariants
    /// (channel outputs, where validation tolerances would be tighter than
    /// the unitarity tolerance of the input).
    pub(crate) fn new_unchecked(op: Operator2) -> Self {
        Self(op)
    }

    pub fn matrix(&self) -> &Operator2 {
        &self.0
    }

    /// ρ = (𝟙 + r⃗·σ⃗)/2 for a Bloch vector with |r⃗| ≤ 1.
    pub fn from_bloch(r: [f64; 3]) -> Result<Self> {
        let n2 = r[0] * r[0] + r[1] * r[1] + r[2] * r[2];
        if n2 > 1.0 + 1e-9 {
            return Err(Error::InvalidDensity(format!(
                "Bloch vector norm {} > 1",
                n2.sqrt()
            )));
        }
        let op = PauliDecomposition {
            coeffs: [0.5, 0.5 * r[0], 0.5 * r[1], 0.5 * r[2]],
        }
        .reconstruct();
        Ok(Self(op))
    }

    pub fn bloch_vector(&self) -> [f64; 3] {
        let d = self.0.pauli_decomposition();
        [2.0 * d.coeffs[1], 2.0 * d.coeffs[2], 2.0 * d.coeffs[3]]
    }

    /// |0⟩⟨0|
    pub fn ket_zero() -> Self {
        Self(Operator2::from_real(1.0, 0.0, 0.0, 0.0))
    }

    /// |1⟩⟨1|
    pub fn ket_one() -> Self {
        Self(Operator2::from_real(0.0, 0.0, 0.0, 1.0))
    }

    /// |+⟩⟨+| with |+⟩ = (|0⟩+|1⟩)/√2 (Bloch +x)
    pub fn ket_plus() -> Self {
        Self(Operator2::from_real(0.5, 0.5, 0.5, 0.5))
    }

    /// |→⟩⟨→| with |→⟩ = (|0⟩+i|1⟩)/√2 (Bloch +y)
    pub fn ket_arrow() -> Self {
        Self(Operator2::new(
            C64::new(0.5, 0.0),
            C64::new(0.0, -0.5),
            C64::new(0.0, 0.5),
            C64::new(0.5, 0.0),
        ))
    }

    /// The maximally mixed state 𝟙/2.
    pub fn maximally_mixed() -> Self {
        Self(Operator2::from_real(0.5, 0.0, 0.0, 0.5))
    }
}

/// A validated POVM effect: Hermitian with eigenvalues in [0, 1] (to fixed
/// tolerances).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PovmEffect(Operator2);

impl PovmEffect {
    pub fn new(op: Operator2) -> Result<Self> {
        if !op.is_finite() {
            return Err(Error::InvalidEffect("non-finite entries".into()));
        }
        let h = op.hermiticity_defect();
        if h > TOL_STRUCTURE {
            return Err(Error::InvalidEffect(format!(
                "not Hermitian (defect {h:.3e})"
            )));
        }
        let (lo, hi) = op.hermitian_eigenvalues();
        if lo < -TOL_EIGEN || hi > 1.0 + TOL_EIGEN {
            return Err(Error::InvalidEffect(format!(
                "eigenvalues [{lo:.6}, {hi:.6}] outside [0, 1]"
            )));
        }
        Ok(Self(op))
    }

    pub fn matrix(&self) -> &Operator2 {
        &self.0
    }

    /// The projector onto a validated state (effect form of the state).
    pub fn from_state(rho: &DensityOperator) -> Self {
        Self(*rho.matrix())
    }

    pub fn projector_zero() -> Self {
        Self::from_state(&DensityOperator::ket_zero())
    }

    pub fn projector_plus() -> Self {
        Self::from_state(&DensityOperator::ket_plus())
    }

    /// Outcome probability tr(W ρ).
    pub fn probability(&self, rho: &DensityOperator) -> f64 {
        multiply(&self.0, rho.matrix()).trace().re
    }
}

/// Apply the unitary channel ρ ↦ u ρ u†. Rejects non-unitary `u`.
pub fn conjugate_channel(u: &Operator2, rho: &DensityOperator) -> Result<DensityOperator> {
    let defect = u.unitarity_defect();
    if defect > TOL_UNITARY {
        return Err(Error::NotUnitary(defect));
    }
    let out = multiply(&multiply(u, rho.matrix()), &u.dagger());
    Ok(DensityOperator::new_unchecked(out))
}

/// Trace distance ½‖a − b‖₁: half the sum of absolute eigenvalues of the
/// (Hermitian, traceless) difference.
pub fn trace_distance(a: &DensityOperator, b: &DensityOperator) -> f64 {
    let d = a.matrix().sub(b.matrix());
    let (lo, hi) = d.hermitian_eigenvalues();
    0.5 * (lo.abs() + hi.abs())
}

/// Distance between two effects: the spectral norm of w − v, which equals
/// the maximum of |tr((w − v)ρ)| over unit-trace positive ρ.
pub fn effect_distance(w: &PovmEffect, v: &PovmEffect) -> f64 {
    let d = w.matrix().sub(v.matrix());
    let (lo, hi) = d.hermitian_eigenvalues();
    lo.abs().max(hi.abs())
}

/// A Haar-ish random SU(2) element (uniform rotation axis, uniform angle).
/// Used by randomized verification sweeps; not statistically Haar-exact.
pub fn random_unitary<R: Rng>(rng: &mut R) -> Operator2 {
    let phi = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
    let axis = random_unit_vector(rng);
    su2_from_axis_angle(phi, axis)
}

/// cos(φ/2)𝟙 − i sin(φ/2) n̂·σ⃗ for a unit axis n̂.
pub fn su2_from_axis_angle(phi: f64, n: [f64; 3]) -> Operator2 {
    let c = (phi / 2.0).cos();
    let s = (phi / 2.0).sin();
    Operator2::new(
        C64::new(c, -s * n[2]),
        C64::new(-s * n[1], -s * n[0]),
        C64::new(s * n[1], -s * n[0]),
        C64::new(c, s * n[2]),
    )
}

/// Random density operator, uniform Bloch direction with radius skewed
/// towards the surface.
pub fn random_density<R: Rng>(rng: &mut R) -> DensityOperator {
    let dir = random_unit_vector(rng);
    let radius = rng.gen::<f64>().powf(1.0 / 3.0);
    DensityOperator::from_bloch([dir[0] * radius, dir[1] * radius, dir[2] * radius])
        .expect("norm <= 1 by construction")
}

/// Random POVM effect with eigenvalues drawn uniformly in [0, 1].
pub fn random_effect<R: Rng>(rng: &mut R) -> PovmEffect {
    let u = random_unitary(rng);
    let (l0, l1) = (rng.gen::<f64>(), rng.gen::<f64>());
    let d = Operator2::new(
        C64::new(l0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(l1, 0.0),
    );
    let w = multiply(&multiply(&u, &d), &u.dagger());
    // Symmetrize away rounding in the conjugation.
    let w = w.add(&w.dagger()).scale(C64::new(0.5, 0.0));
    PovmEffect::new(w).expect("eigenvalues in [0,1] by construction")
}

pub fn random_unit_vector<R: Rng>(rng: &mut R) -> [f64; 3] {
    let z: f64 = rng.gen_range(-1.0..=1.0);
    let az = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
    let r = (1.0 - z * z).max(0.0).sqrt();
    [r * az.cos(), r * az.sin(), z]
}
