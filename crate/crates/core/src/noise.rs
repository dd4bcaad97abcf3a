//! Non-systematic imperfections: depolarizing noise, faulty state
//! preparations, faulty measurement effects, and raw additive-offset
//! injection for bound stress tests.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::gates::{x_gate, z_gate, GateParams};
use crate::linalg2::{conjugate_channel, DensityOperator, PovmEffect};
use crate::{Error, Result, ADDITIVE_ERROR_LIMIT};

/// Ideal pure-state labels used by the protocols.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PrepLabel {
    Zero,
    Plus,
    Arrow,
}

/// How prepared states are modeled.
#[derive(Clone, Debug)]
pub enum PrepModel {
    /// Each label maps to an explicitly given state.
    Exact {
        zero: DensityOperator,
        plus: DensityOperator,
        arrow: DensityOperator,
    },
    /// Only a fiducial ρ₀ is given; |+⟩ and |→⟩ are built from it with the
    /// faulty gates (Z·X² and X⁶ respectively), so their quality inherits
    /// the gate errors.
    DerivedFromZero { rho0: DensityOperator },
}

impl PrepModel {
    pub fn ideal() -> Self {
        PrepModel::Exact {
            zero: DensityOperator::ket_zero(),
            plus: DensityOperator::ket_plus(),
            arrow: DensityOperator::ket_arrow(),
        }
    }

    /// The state actually prepared for a label, along with the number of
    /// elementary gates spent preparing it (for per-gate depolarizing
    /// accounting).
    pub fn prepare(&self, label: PrepLabel, params: &GateParams) -> (DensityOperator, u64) {
        match self {
            PrepModel::Exact { zero, plus, arrow } => (
                match label {
                    PrepLabel::Zero => *zero,
                    PrepLabel::Plus => *plus,
                    PrepLabel::Arrow => *arrow,
                },
                0,
            ),
            PrepModel::DerivedFromZero { rho0 } => match label {
                PrepLabel::Zero => (*rho0, 0),
                PrepLabel::Plus => {
                    let (plus, _) = derived_preparations(params, rho0);
                    (plus, 3) // X, X, Z
                }
                PrepLabel::Arrow => {
                    let (_, arrow) = derived_preparations(params, rho0);
                    (arrow, 6) // X^6
                }
            },
        }
    }
}

/// Implemented measurement effects for the two ideal projectors in use.
#[derive(Clone, Debug)]
pub struct MeasModel {
    pub effect_zero: PovmEffect,
    pub effect_plus: PovmEffect,
}

impl MeasModel {
    pub fn ideal() -> Self {
        Self {
            effect_zero: PovmEffect::projector_zero(),
            effect_plus: PovmEffect::projector_plus(),
        }
    }
}

/// Raw additive offsets applied directly to outcome probabilities after all
/// physical modeling. They model abstract additive errors for stress tests,
/// not physics; results are clamped to [0, 1].
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub enum RawOffsets {
    #[default]
    None,
    /// The same offsets at every sequence length.
    Constant { cos: f64, sin: f64 },
    /// Tabulated per sequence length k; lengths not listed get zero.
    PerK(BTreeMap<u64, (f64, f64)>),
}

impl RawOffsets {
    /// (cos-flavor offset, sin-flavor offset) at sequence length k.
    pub fn get(&self, k: u64) -> (f64, f64) {
        match self {
            RawOffsets::None => (0.0, 0.0),
            RawOffsets::Constant { cos, sin } => (*cos, *sin),
            RawOffsets::PerK(map) => map.get(&k).copied().unwrap_or((0.0, 0.0)),
        }
    }
}

/// All non-systematic imperfections of one simulated apparatus.
#[derive(Clone, Debug)]
pub struct NoiseModel {
    /// Per-gate depolarizing survival weight; 1 = noiseless.
    pub gamma: f64,
    pub prep: PrepModel,
    pub meas: MeasModel,
    pub offsets: RawOffsets,
}

impl NoiseModel {
    pub fn new(gamma: f64, prep: PrepModel, meas: MeasModel, offsets: RawOffsets) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::InvalidParameter(format!(
                "gamma {gamma} outside [0, 1]"
            )));
        }
        Ok(Self {
            gamma,
            prep,
            meas,
            offsets,
        })
    }

    pub fn noiseless() -> Self {
        Self {
            gamma: 1.0,
            prep: PrepModel::ideal(),
            meas: MeasModel::ideal(),
            offsets: RawOffsets::None,
        }
    }
}

/// Depolarizing channel Λ_γ(ρ) = γρ + (1−γ)𝟙/2.
pub fn depolarize(gamma: f64, rho: &DensityOperator) -> Result<DensityOperator> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::InvalidParameter(format!(
            "gamma {gamma} outside [0, 1]"
        )));
    }
    Ok(depolarize_unchecked(gamma, rho))
}

fn depolarize_unchecked(gamma: f64, rho: &DensityOperator) -> DensityOperator {
    let [x, y, z] = rho.bloch_vector();
    DensityOperator::from_bloch([gamma * x, gamma * y, gamma * z])
        .expect("shrunk Bloch vector stays in the ball")
}

/// k applications of Λ_γ collapse to a single Λ_{γᵏ}.
pub fn depolarize_pow(gamma: f64, k: u64, rho: &DensityOperator) -> DensityOperator {
    depolarize_unchecked(gamma.powi(k as i32), rho)
}

/// Additive-error budget of k depolarized gates: (1 − γᵏ)/2.
pub fn depolarizing_budget(gamma: f64, k: u64) -> f64 {
    (1.0 - gamma.powi(k as i32)) / 2.0
}

/// Largest sequence length whose depolarizing budget stays below the 1/√8
/// additive-error limit.
pub fn max_admissible_depth(gamma: f64) -> u64 {
    if gamma >= 1.0 {
        return u64::MAX;
    }
    // (1 − γᵏ)/2 < 1/√8  ⟺  γᵏ > 1 − 2/√8
    let k = ((1.0 - 2.0 * ADDITIVE_ERROR_LIMIT).ln() / gamma.ln()).floor() as u64;
    // Guard against floating rounding right at the crossing.
    let mut k = k.max(1);
    while k > 1 && depolarizing_budget(gamma, k) >= ADDITIVE_ERROR_LIMIT {
        k -= 1;
    }
    while depolarizing_budget(gamma, k + 1) < ADDITIVE_ERROR_LIMIT {
        k += 1;
    }
    k
}

/// Additive-error budget of k applications of a Z rotation whose angle is
/// off by πα/2 each: min(1, 4k·|sin(πα/4)|).
pub fn z_error_budget(alpha: f64, k: u64) -> f64 {
    (4.0 * k as f64 * (std::f64::consts::FRAC_PI_4 * alpha).sin().abs()).min(1.0)
}

/// The derived preparations built from a fiducial ρ₀ with the faulty gates:
/// ρ₊ = 𝒵(α)𝒳²(ρ₀) targeting |+⟩, and ρ→ = 𝒳⁶(ρ₀) targeting |→⟩.
/// The X gates use the π/4 nominal angle regardless of `params.phi`.
pub fn derived_preparations(
    params: &GateParams,
    rho0: &DensityOperator,
) -> (DensityOperator, DensityOperator) {
    let x = x_gate(std::f64::consts::FRAC_PI_4, params.epsilon, params.theta);
    let z = z_gate(params.alpha);
    let mut plus = *rho0;
    for _ in 0..2 {
        plus = conjugate_channel(&x, &plus).expect("gates are unitary");
    }
    plus = conjugate_channel(&z, &plus).expect("gates are unitary");
    let mut arrow = *rho0;
    for _ in 0..6 {
        arrow = conjugate_channel(&x, &arrow).expect("gates are unitary");
    }
    (plus, arrow)
}

/// One experiment's additive-error budget split by source.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorBudget {
    pub delta_prep: f64,
    pub delta_meas: f64,
    pub delta_gate: f64,
    pub delta_total: f64,
}

impl ErrorBudget {
    /// Whether the total stays below the 1/√8 additive-error limit.
    pub fn admissible(&self) -> bool {
        self.delta_total < ADDITIVE_ERROR_LIMIT
    }
}

/// Triangle-inequality total of the three contribution bounds.
pub fn budget_total(delta_prep: f64, delta_meas: f64, delta_gate: f64) -> Result<ErrorBudget> {
    for (name, v) in [
        ("delta_prep", delta_prep),
        ("delta_meas", delta_meas),
        ("delta_gate", delta_gate),
    ] {
        if !(v >= 0.0) {
            return Err(Error::InvalidParameter(format!("{name} = {v} < 0")));
        }
    }
    Ok(ErrorBudget {
        delta_prep,
        delta_meas,
        delta_gate,
        delta_total: delta_prep + delta_meas + delta_gate,
    })
}
