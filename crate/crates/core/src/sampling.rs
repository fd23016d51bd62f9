//! Reproducible random states.
//!
//! Every draw is a pure function of `(seed, trial_index)`: the pair is hashed
//! into a 64-bit key and the key seeds a SplitMix64 counter stream. Trials
//! can therefore be evaluated in any order or in parallel.
//!
//! Stream definition (fixed, so other implementations can reproduce it):
//!
//! ```text
//! mix(z)  = z ^= z >> 30; z *= 0xbf58476d1ce4e5b9;
//!           z ^= z >> 27; z *= 0x94d049bb133111eb; z ^ (z >> 31)
//! key     = mix(seed ^ mix(trial_index + 0x9e3779b97f4a7c15))
//! word_j  = mix(key + (j + 1) * 0x9e3779b97f4a7c15)        (j = 0, 1, ...)
//! uniform = ((word >> 11) + 0.5) * 2^-53                     in (0, 1)
//! gauss   = Box-Muller on two consecutive uniforms u1, u2:
//!           r = sqrt(-2 ln u1), (r cos 2 pi u2, r sin 2 pi u2)
//! ```
//!
//! All arithmetic on words is wrapping.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::states::{qubit_from_bloch, BlochVector, DensityMatrix};

const GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finaliser.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Counter-based stream for one `(seed, trial_index)` pair.
#[derive(Debug, Clone)]
pub struct Stream {
    key: u64,
    counter: u64,
}

impl Stream {
    pub fn new(seed: u64, trial_index: u64) -> Self {
        Stream { key: mix64(seed ^ mix64(trial_index.wrapping_add(GAMMA))), counter: 0 }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix64(self.key.wrapping_add(self.counter.wrapping_mul(GAMMA)))
    }

    /// Uniform in the open interval `(0, 1)`.
    pub fn next_uniform(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }
}

/// Two independent standard normals by Box-Muller.
pub fn gaussian_pair(stream: &mut Stream) -> (f64, f64) {
    let u1 = stream.next_uniform();
    let u2 = stream.next_uniform();
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = std::f64::consts::TAU * u2;
    (r * theta.cos(), r * theta.sin())
}

fn complex_gaussian(stream: &mut Stream) -> Complex64 {
    let (re, im) = gaussian_pair(stream);
    Complex64::new(re, im)
}

/// Random-state ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Measure {
    /// `G G^H / Tr(G G^H)` with `G` a square complex Ginibre matrix.
    #[serde(rename = "hs")]
    HilbertSchmidtMixed,
    /// `|psi><psi|` with `psi` a normalised complex Gaussian vector.
    #[serde(rename = "haar-pure")]
    HaarPure,
    /// Uniform in the qubit Bloch ball.
    #[serde(rename = "bloch-uniform")]
    BlochBallUniform,
}

impl Measure {
    pub const ALL: [Measure; 3] = [Measure::HilbertSchmidtMixed, Measure::HaarPure, Measure::BlochBallUniform];

    pub fn name(self) -> &'static str {
        match self {
            Measure::HilbertSchmidtMixed => "hs",
            Measure::HaarPure => "haar-pure",
            Measure::BlochBallUniform => "bloch-uniform",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown measure {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplerSpec {
    measure: Measure,
    dim: usize,
    seed: u64,
}

impl SamplerSpec {
    pub fn new(measure: Measure, dim: usize, seed: u64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidSpec(format!("dim must be >= 2, got {dim}")));
        }
        if measure == Measure::BlochBallUniform && dim != 2 {
            return Err(Error::InvalidSpec(format!("bloch-uniform needs dim 2, got {dim}")));
        }
        Ok(SamplerSpec { measure, dim, seed })
    }

    pub fn measure(&self) -> Measure {
        self.measure
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Uniform point in the unit 3-ball: Gaussian direction, radius `u^(1/3)`.
pub fn sample_bloch_ball(seed: u64, trial_index: u64) -> BlochVector {
    let mut s = Stream::new(seed, trial_index);
    let (x, y) = gaussian_pair(&mut s);
    let (z, _) = gaussian_pair(&mut s);
    let r = s.next_uniform().cbrt();
    let len = (x * x + y * y + z * z).sqrt();
    let k = if len > 0.0 { r / len } else { 0.0 };
    BlochVector::qubit(x * k, y * k, z * k).expect("sampled radius is below 1")
}

/// Draws state number `trial_index` of the stream described by `spec`.
pub fn sample_state(spec: &SamplerSpec, trial_index: u64) -> Result<DensityMatrix> {
    let n = spec.dim;
    match spec.measure {
        Measure::HilbertSchmidtMixed => {
            let mut s = Stream::new(spec.seed, trial_index);
            let g = CMatrix::from_vec(n, (0..n * n).map(|_| complex_gaussian(&mut s)).collect())?;
            let w = &g * &g.adjoint();
            let tr = w.trace().re;
            DensityMatrix::new(w.scale_real(1.0 / tr))
        }
        Measure::HaarPure => {
            let mut s = Stream::new(spec.seed, trial_index);
            let psi: Vec<Complex64> = (0..n).map(|_| complex_gaussian(&mut s)).collect();
            DensityMatrix::pure(&psi)
        }
        Measure::BlochBallUniform => qubit_from_bloch(&sample_bloch_ball(spec.seed, trial_index)),
    }
}
