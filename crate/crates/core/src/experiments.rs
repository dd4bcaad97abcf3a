//! Experiment sequences: exact outcome probabilities under systematic and
//! non-systematic errors, and reproducible binomial sampling.
//!
//! Each protocol comes in two flavors whose success probabilities trace the
//! two quadratures of a phase: the cos flavor follows (1 + cos kA)/2 and the
//! sin flavor (1 + sin kA)/2, up to bounded additive offsets.
//!
//! Sampling is deterministic given (root seed, stream identity): every
//! (protocol, flavor, generation, block) tuple is hashed into its own
//! counter-mode stream, so shots may be drawn concurrently in any order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution;
use serde::{Deserialize, Serialize};

use crate::gates::{composite_u, su2_axis_angle, x_gate, z_gate, GateParams};
use crate::linalg2::{conjugate_channel, su2_from_axis_angle, DensityOperator};
use crate::noise::{NoiseModel, PrepLabel};
use crate::{Error, Result};

/// Which parameter a sequence family targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Protocol {
    /// Repeated Z gates on |+⟩-plane states; phase A = −π/2·(1+α).
    Alpha,
    /// Repeated X gates; phase A = φ(1+ε).
    Epsilon,
    /// Repeated composite rotations with q X gates per Z block; the phase
    /// is the composite rotation angle, which encodes the tilt θ.
    ThetaComposite { q: u32 },
}

impl Protocol {
    fn stream_tag(&self) -> u64 {
        match self {
            Protocol::Alpha => 1,
            Protocol::Epsilon => 2,
            Protocol::ThetaComposite { q } => 3 + ((*q as u64) << 8),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Protocol::Alpha => "alpha".into(),
            Protocol::Epsilon => "epsilon".into(),
            Protocol::ThetaComposite { q } => format!("theta_composite_q{q}"),
        }
    }
}

/// The two quadrature roles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Flavor {
    Cos,
    Sin,
}

impl Flavor {
    fn stream_tag(&self) -> u64 {
        match self {
            Flavor::Cos => 1,
            Flavor::Sin => 2,
        }
    }
}

/// One of the protocol experiments: sequence choice, repetition count and
/// shot budget.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub protocol: Protocol,
    pub flavor: Flavor,
    pub k: u64,
    pub shots: u64,
}

impl ExperimentSpec {
    pub fn new(protocol: Protocol, flavor: Flavor, k: u64, shots: u64) -> Result<Self> {
        if k == 0 || shots == 0 {
            return Err(Error::InvalidParameter(
                "k and shots must be at least 1".into(),
            ));
        }
        Ok(Self {
            protocol,
            flavor,
            k,
            shots,
        })
    }
}

/// Success counts for the two flavors of one generation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeCounts {
    pub a0: u64,
    pub a_plus: u64,
    pub shots: u64,
}

impl OutcomeCounts {
    pub fn new(a0: u64, a_plus: u64, shots: u64) -> Result<Self> {
        if a0 > shots || a_plus > shots {
            return Err(Error::InvalidParameter(format!(
                "counts ({a0}, {a_plus}) exceed shots {shots}"
            )));
        }
        Ok(Self { a0, a_plus, shots })
    }
}

/// The (prepared state, measured effect) roles of one experiment.
fn experiment_roles(protocol: Protocol, flavor: Flavor) -> (PrepLabel, bool) {
    // Returns (prep label, measure-plus?); all non-alpha protocols measure
    // the |0⟩ effect.
    match (protocol, flavor) {
        (Protocol::Alpha, Flavor::Cos) => (PrepLabel::Plus, true),
        (Protocol::Alpha, Flavor::Sin) => (PrepLabel::Arrow, true),
        (_, Flavor::Cos) => (PrepLabel::Zero, false),
        (_, Flavor::Sin) => (PrepLabel::Arrow, false),
    }
}

/// Elementary gates in the k-fold sequence of a protocol.
pub fn sequence_gate_count(protocol: Protocol, k: u64) -> u64 {
    match protocol {
        Protocol::Alpha | Protocol::Epsilon => k,
        // Each composite is 4 Z gates and 2q X gates.
        Protocol::ThetaComposite { q } => k * (4 + 2 * q as u64),
    }
}

/// Exact success probability with perfect preparation and measurement and
/// no decoherence; only the systematic errors act.
pub fn ideal_probability(protocol: Protocol, flavor: Flavor, k: u64, params: &GateParams) -> f64 {
    let kf = k as f64;
    match protocol {
        Protocol::Alpha => {
            let a = -std::f64::consts::FRAC_PI_2 * (1.0 + params.alpha);
            match flavor {
                Flavor::Cos => (1.0 + (kf * a).cos()) / 2.0,
                Flavor::Sin => (1.0 + (kf * a).sin()) / 2.0,
            }
        }
        Protocol::Epsilon => {
            let phase = kf * params.phi * (1.0 + params.epsilon);
            match flavor {
                // (1+cos kφ_ε)/2 + sin²(kφ_ε/2)·sin²θ
                Flavor::Cos => {
                    (1.0 + phase.cos()) / 2.0
                        + (phase / 2.0).sin().powi(2) * params.theta.sin().powi(2)
                }
                // (1+sin kφ_ε)/2 − sin(kφ_ε)·sin²(θ/2) = (1 + sin(kφ_ε)cosθ)/2
                Flavor::Sin => (1.0 + phase.sin() * params.theta.cos()) / 2.0,
            }
        }
        Protocol::ThetaComposite { q } => {
            let u = composite_u(params.epsilon, params.theta, params.alpha, q, params.phi);
            let (phi_u, n) = su2_axis_angle(&u).expect("composite of unitaries is unitary");
            probability_of_rotation(kf * phi_u, n, flavor)
        }
    }
}

/// |⟨0|R|0⟩|² or |⟨0|R|→⟩|² for a rotation R by `angle` about axis n̂.
fn probability_of_rotation(angle: f64, n: [f64; 3], flavor: Flavor) -> f64 {
    let c = (angle / 2.0).cos();
    let s = (angle / 2.0).sin();
    match flavor {
        Flavor::Cos => c * c + s * s * n[2] * n[2],
        Flavor::Sin => (1.0 + angle.sin() * n[0] + 2.0 * s * s * n[1] * n[2]) / 2.0,
    }
}

/// Exact success probability under the full noise model: faulty preparation,
/// per-gate depolarizing, faulty effect, then the raw additive offset,
/// clamped to [0, 1].
pub fn noisy_probability(spec: &ExperimentSpec, params: &GateParams, noise: &NoiseModel) -> f64 {
    let (label, measure_plus) = experiment_roles(spec.protocol, spec.flavor);
    let (rho, prep_gates) = noise.prep.prepare(label, params);

    // The k-fold sequence as one exact rotation.
    let step = match spec.protocol {
        Protocol::Alpha => z_gate(params.alpha),
        Protocol::Epsilon => x_gate(params.phi, params.epsilon, params.theta),
        Protocol::ThetaComposite { q } => {
            composite_u(params.epsilon, params.theta, params.alpha, q, params.phi)
        }
    };
    let (phi_step, axis) = su2_axis_angle(&step).expect("gates are unitary");
    let seq = su2_from_axis_angle(phi_step * spec.k as f64, axis);
    let evolved = conjugate_channel(&seq, &rho).expect("sequence is unitary");

    // Per-gate depolarizing commutes with unitary conjugation, so the whole
    // run collapses to one Bloch shrink by γ^(total gate count).
    let n_gates = prep_gates + sequence_gate_count(spec.protocol, spec.k);
    let shrunk = crate::noise::depolarize_pow(noise.gamma, n_gates, &evolved);

    let effect = if measure_plus {
        &noise.meas.effect_plus
    } else {
        &noise.meas.effect_zero
    };
    let mut p = effect.probability(&shrunk);

    let (off_cos, off_sin) = noise.offsets.get(spec.k);
    p += match spec.flavor {
        Flavor::Cos => off_cos,
        Flavor::Sin => off_sin,
    };
    p.clamp(0.0, 1.0)
}

/// splitmix64 finalizer, the stream-id mixing primitive.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic per-stream RNG: the root seed mixed with the stream
/// identity (protocol, flavor, generation, block) through splitmix64.
pub fn stream_rng(
    root_seed: u64,
    protocol: Protocol,
    flavor: Flavor,
    generation: u32,
    block: u64,
) -> ChaCha8Rng {
    let mut s = splitmix64(root_seed ^ 0x517C_C1B7_2722_0A95);
    for part in [
        protocol.stream_tag(),
        flavor.stream_tag(),
        generation as u64,
        block,
    ] {
        s = splitmix64(s ^ part.wrapping_mul(0xA24B_AED4_963E_E407));
    }
    ChaCha8Rng::seed_from_u64(s)
}

/// One binomial draw. Inversion (single uniform, CDF walk) below 64 trials;
/// a standard large-count sampler above, both deterministic per stream.
pub fn sample_binomial<R: Rng>(rng: &mut R, m: u64, p: f64) -> u64 {
    debug_assert!((0.0..=1.0).contains(&p), "p = {p}");
    if p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return m;
    }
    if m < 64 {
        let u: f64 = rng.gen();
        let q = 1.0 - p;
        let ratio = p / q;
        let mut pmf = q.powi(m as i32);
        let mut cdf = pmf;
        let mut a = 0u64;
        while u > cdf && a < m {
            a += 1;
            pmf *= ratio * (m - a + 1) as f64 / a as f64;
            cdf += pmf;
        }
        a
    } else {
        rand_distr::Binomial::new(m, p)
            .expect("validated p")
            .sample(rng)
    }
}

/// Draw both flavors' counts for one generation. Deterministic given
/// (seed, spec identity, generation, block): each flavor gets its own
/// stream.
pub fn sample(
    spec: &ExperimentSpec,
    p_cos: f64,
    p_sin: f64,
    seed: u64,
    generation: u32,
    block: u64,
) -> OutcomeCounts {
    let mut rng_cos = stream_rng(seed, spec.protocol, Flavor::Cos, generation, block);
    let mut rng_sin = stream_rng(seed, spec.protocol, Flavor::Sin, generation, block);
    OutcomeCounts {
        a0: sample_binomial(&mut rng_cos, spec.shots, p_cos),
        a_plus: sample_binomial(&mut rng_sin, spec.shots, p_sin),
        shots: spec.shots,
    }
}

/// Phase estimate from one generation's counts:
/// atan2(2a₊/M − 1, 2a₀/M − 1), in (−π, π]. When both biases vanish the
/// direction is undefined and one uniform angle is consumed from `rng`.
pub fn phase_from_counts<R: Rng>(counts: &OutcomeCounts, rng: &mut R) -> f64 {
    let m = counts.shots;
    // Integer biases 2a − M avoid spurious signs from rounding.
    let x = 2 * counts.a0 as i64 - m as i64;
    let y = 2 * counts.a_plus as i64 - m as i64;
    if x == 0 && y == 0 {
        // Uniform in (−π, π].
        return std::f64::consts::PI - rng.gen::<f64>() * 2.0 * std::f64::consts::PI;
    }
    (y as f64).atan2(x as f64)
}

/// One generation's record in a stored experiment transcript.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptRecord {
    pub generation: u32,
    pub k: u64,
    pub shots: u64,
    pub a0: u64,
    pub a_plus: u64,
}

/// A stored run: enough to replay estimation without re-simulating.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub protocol: String,
    pub root_seed: u64,
    pub records: Vec<TranscriptRecord>,
}

impl Transcript {
    /// Line-oriented CSV with a fixed column schema.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["protocol", "root_seed", "generation", "k", "shots", "a0", "a_plus"])
            .map_err(|e| Error::InvalidParameter(format!("csv write: {e}")))?;
        for r in &self.records {
            w.write_record([
                self.protocol.clone(),
                self.root_seed.to_string(),
                r.generation.to_string(),
                r.k.to_string(),
                r.shots.to_string(),
                r.a0.to_string(),
                r.a_plus.to_string(),
            ])
            .map_err(|e| Error::InvalidParameter(format!("csv write: {e}")))?;
        }
        w.flush()
            .map_err(|e| Error::InvalidParameter(format!("csv flush: {e}")))?;
        Ok(())
    }

    pub fn read_csv<Rd: std::io::Read>(input: Rd) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(input);
        let mut protocol = String::new();
        let mut root_seed = 0u64;
        let mut records = Vec::new();
        for row in rdr.records() {
            let row = row.map_err(|e| Error::InvalidParameter(format!("csv read: {e}")))?;
            if row.len() != 7 {
                return Err(Error::InvalidParameter(format!(
                    "transcript row has {} fields, expected 7",
                    row.len()
                )));
            }
            let field = |i: usize| -> Result<u64> {
                row[i]
                    .parse()
                    .map_err(|e| Error::InvalidParameter(format!("transcript field: {e}")))
            };
            protocol = row[0].to_string();
            root_seed = field(1)?;
            records.push(TranscriptRecord {
                generation: field(2)? as u32,
                k: field(3)?,
                shots: field(4)?,
                a0: field(5)?,
                a_plus: field(6)?,
            });
        }
        Ok(Self {
            protocol,
            root_seed,
            records,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("transcript serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidParameter(format!("json read: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg2::{multiply, Operator2, PovmEffect};
    use crate::noise::RawOffsets;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn matrix_probability(
        protocol: Protocol,
        flavor: Flavor,
        k: u64,
        params: &GateParams,
    ) -> f64 {
        // Independent route: explicit repeated matrix products.
        let step = match protocol {
            Protocol::Alpha => z_gate(params.alpha),
            Protocol::Epsilon => x_gate(params.phi, params.epsilon, params.theta),
            Protocol::ThetaComposite { q } => {
                composite_u(params.epsilon, params.theta, params.alpha, q, params.phi)
            }
        };
        let mut u = Operator2::identity();
        for _ in 0..k {
            u = multiply(&step, &u);
        }
        let (label, measure_plus) = experiment_roles(protocol, flavor);
        let rho = match label {
            PrepLabel::Zero => DensityOperator::ket_zero(),
            PrepLabel::Plus => DensityOperator::ket_plus(),
            PrepLabel::Arrow => DensityOperator::ket_arrow(),
        };
        let out = conjugate_channel(&u, &rho).unwrap();
        let eff = if measure_plus {
            PovmEffect::projector_plus()
        } else {
            PovmEffect::projector_zero()
        };
        eff.probability(&out)
    }

    #[test]
    fn ideal_probability_examples() {
        let ideal = GateParams::ideal();
        assert!((ideal_probability(Protocol::Alpha, Flavor::Cos, 1, &ideal) - 0.5).abs() < 1e-15);
        let tilted = GateParams::new(0.0, 0.0, PI / 6.0, FRAC_PI_4).unwrap();
        assert!(
            (ideal_probability(Protocol::Epsilon, Flavor::Cos, 4, &tilted) - 0.25).abs() < 1e-12
        );
        let p = ideal_probability(Protocol::Epsilon, Flavor::Sin, 1, &ideal);
        assert!((p - (1.0 + FRAC_PI_4.sin()) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn alpha_protocol_matches_matrices_on_grid() {
        for ik in 0..10 {
            for ia in 0..10 {
                let k = 1 + 6 * ik as u64;
                let alpha = -0.3 + 0.6 * ia as f64 / 9.0;
                let params = GateParams::new(alpha, 0.0, 0.0, FRAC_PI_4).unwrap();
                for flavor in [Flavor::Cos, Flavor::Sin] {
                    let closed = ideal_probability(Protocol::Alpha, flavor, k, &params);
                    let exact = matrix_probability(Protocol::Alpha, flavor, k, &params);
                    assert!(
                        (closed - exact).abs() < 1e-12,
                        "k={k} alpha={alpha} {flavor:?}: {closed} vs {exact}"
                    );
                    // And the pure two-quadrature template.
                    let a = -std::f64::consts::FRAC_PI_2 * (1.0 + alpha);
                    let template = match flavor {
                        Flavor::Cos => (1.0 + (k as f64 * a).cos()) / 2.0,
                        Flavor::Sin => (1.0 + (k as f64 * a).sin()) / 2.0,
                    };
                    assert!((closed - template).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn epsilon_and_theta_protocols_match_matrices() {
        let params = GateParams::new(0.0, 0.07, -0.21, FRAC_PI_4).unwrap();
        for k in [1u64, 2, 3, 5, 8, 13] {
            for flavor in [Flavor::Cos, Flavor::Sin] {
                for protocol in [Protocol::Epsilon, Protocol::ThetaComposite { q: 4 }] {
                    let closed = ideal_probability(protocol, flavor, k, &params);
                    let exact = matrix_probability(protocol, flavor, k, &params);
                    assert!(
                        (closed - exact).abs() < 1e-11,
                        "{protocol:?} {flavor:?} k={k}: {closed} vs {exact}"
                    );
                }
            }
        }
    }

    #[test]
    fn epsilon_residuals_bounded_by_tilt() {
        // The deviations from the pure quadrature templates stay below
        // sin²θ (cos flavor) and |sin kφ_ε| sin²(θ/2) (sin flavor).
        for it in 0..13 {
            let theta = -0.6 + 1.2 * it as f64 / 12.0;
            let params = GateParams::new(0.0, 0.013, theta, FRAC_PI_4).unwrap();
            let s2 = theta.sin().powi(2);
            for k in 1..=64u64 {
                let phase = k as f64 * params.phi * (1.0 + params.epsilon);
                let pc = ideal_probability(Protocol::Epsilon, Flavor::Cos, k, &params);
                let ps = ideal_probability(Protocol::Epsilon, Flavor::Sin, k, &params);
                let dc = pc - (1.0 + phase.cos()) / 2.0;
                let ds = ps - (1.0 + phase.sin()) / 2.0;
                assert!(dc.abs() <= s2 + 1e-13);
                assert!(ds.abs() <= phase.sin().abs() * (theta / 2.0).sin().powi(2) + 1e-13);
                assert!(ds.abs() <= s2 + 1e-13);
            }
        }
    }

    #[test]
    fn noisy_probability_reduces_to_ideal() {
        let params = GateParams::new(0.03, -0.02, 0.11, FRAC_PI_4).unwrap();
        let noise = NoiseModel::noiseless();
        for protocol in [
            Protocol::Alpha,
            Protocol::Epsilon,
            Protocol::ThetaComposite { q: 4 },
        ] {
            for flavor in [Flavor::Cos, Flavor::Sin] {
                for k in [1u64, 2, 7] {
                    let spec = ExperimentSpec::new(protocol, flavor, k, 10).unwrap();
                    let a = noisy_probability(&spec, &params, &noise);
                    let b = ideal_probability(protocol, flavor, k, &params);
                    assert!((a - b).abs() < 1e-12, "{protocol:?} {flavor:?} k={k}");
                }
            }
        }
    }

    #[test]
    fn noisy_probability_depolarizing_contrast() {
        // γ per gate shrinks the bias by γ^(gate count).
        let params = GateParams::ideal();
        let mut noise = NoiseModel::noiseless();
        noise.gamma = 0.99;
        let k = 8;
        let spec = ExperimentSpec::new(Protocol::Epsilon, Flavor::Cos, k, 1).unwrap();
        let p = noisy_probability(&spec, &params, &noise);
        let ideal = ideal_probability(Protocol::Epsilon, Flavor::Cos, k, &params);
        let expect = 0.5 + 0.99f64.powi(k as i32) * (ideal - 0.5);
        assert!((p - expect).abs() < 1e-12);
        // Composite counts 4 + 2q elementary gates per repetition.
        let spec = ExperimentSpec::new(Protocol::ThetaComposite { q: 4 }, Flavor::Cos, 3, 1)
            .unwrap();
        let p = noisy_probability(&spec, &params, &noise);
        let ideal =
            ideal_probability(Protocol::ThetaComposite { q: 4 }, Flavor::Cos, 3, &params);
        let expect = 0.5 + 0.99f64.powi(36) * (ideal - 0.5);
        assert!((p - expect).abs() < 1e-12);
    }

    #[test]
    fn raw_offset_applied_and_clamped() {
        let params = GateParams::ideal();
        let mut noise = NoiseModel::noiseless();
        noise.offsets = RawOffsets::Constant { cos: 0.1, sin: 0.9 };
        let spec = ExperimentSpec::new(Protocol::Alpha, Flavor::Cos, 1, 1).unwrap();
        let p = noisy_probability(&spec, &params, &noise);
        assert!((p - 0.6).abs() < 1e-12); // 0.5 ideal + 0.1
        let spec = ExperimentSpec::new(Protocol::Alpha, Flavor::Sin, 2, 1).unwrap();
        // Ideal sin at k=2, α=0 is (1+sin(−π))/2 = 0.5; +0.9 clamps to 1.
        let p = noisy_probability(&spec, &params, &noise);
        assert!((p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sampling_is_deterministic_and_degenerate_cases() {
        let spec = ExperimentSpec::new(Protocol::Alpha, Flavor::Cos, 1, 100).unwrap();
        let a = sample(&spec, 0.3, 0.7, 42, 3, 0);
        let b = sample(&spec, 0.3, 0.7, 42, 3, 0);
        assert_eq!(a, b);
        let c = sample(&spec, 0.3, 0.7, 43, 3, 0);
        assert_ne!(a, c);
        assert_eq!(sample(&spec, 1.0, 0.0, 7, 0, 0), OutcomeCounts {
            a0: 100,
            a_plus: 0,
            shots: 100
        });
    }

    #[test]
    fn binomial_concentration_large_m() {
        let spec = ExperimentSpec::new(Protocol::Epsilon, Flavor::Cos, 1, 1_000_000).unwrap();
        let counts = sample(&spec, 0.5, 0.5, 12345, 0, 0);
        let f = counts.a0 as f64 / counts.shots as f64;
        assert!((0.4985..=0.5015).contains(&f), "6σ bound violated: {f}");
    }

    #[test]
    fn binomial_small_m_matches_mean() {
        // Mean of many small-M inversion draws approaches M·p.
        let mut rng = stream_rng(9, Protocol::Alpha, Flavor::Cos, 0, 0);
        let mut total = 0u64;
        let n = 20000;
        for _ in 0..n {
            total += sample_binomial(&mut rng, 10, 0.3);
        }
        let mean = total as f64 / n as f64;
        assert!((mean - 3.0).abs() < 0.05, "mean {mean}");
    }

    #[test]
    fn phase_from_counts_examples() {
        let mut rng = stream_rng(1, Protocol::Alpha, Flavor::Cos, 0, 0);
        let m = 10;
        let p = |a0, ap| OutcomeCounts {
            a0,
            a_plus: ap,
            shots: m,
        };
        assert!((phase_from_counts(&p(10, 10), &mut rng) - PI / 4.0).abs() < 1e-15);
        assert!(phase_from_counts(&p(10, 5), &mut rng).abs() < 1e-15);
        assert!((phase_from_counts(&p(0, 0), &mut rng) + 3.0 * PI / 4.0).abs() < 1e-15);
        // Tie: uniform draw lands in (−π, π] and is seed-stable.
        let t1 = phase_from_counts(&p(5, 5), &mut stream_rng(8, Protocol::Alpha, Flavor::Cos, 0, 0));
        let t2 = phase_from_counts(&p(5, 5), &mut stream_rng(8, Protocol::Alpha, Flavor::Cos, 0, 0));
        assert_eq!(t1, t2);
        assert!(t1 > -PI && t1 <= PI);
    }

    #[test]
    fn transcript_round_trips() {
        let t = Transcript {
            protocol: "alpha".into(),
            root_seed: 99,
            records: vec![
                TranscriptRecord {
                    generation: 1,
                    k: 1,
                    shots: 22,
                    a0: 3,
                    a_plus: 20,
                },
                TranscriptRecord {
                    generation: 2,
                    k: 2,
                    shots: 19,
                    a0: 10,
                    a_plus: 9,
                },
            ],
        };
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let back = Transcript::read_csv(&buf[..]).unwrap();
        assert_eq!(t, back);
        let back = Transcript::from_json(&t.to_json()).unwrap();
        assert_eq!(t, back);
    }
}
