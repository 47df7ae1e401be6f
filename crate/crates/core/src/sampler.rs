//! Seeded sampling of parameter vectors and copositive polynomials.
//!
//! Every sample has its own ChaCha20 stream: the key is the 64-bit seed in
//! little-endian order followed by 24 zero bytes, the stream id is the sample
//! index, and the entries of the sample consume 64-bit words in order. The
//! conversions from words to values are fixed here so corpora can be
//! regenerated bit for bit elsewhere:
//!
//! * uniform `[lo, hi]`: `lo + (hi - lo) * (w >> 11) * 2^-53`
//! * exponential: `-ln(1 - u) / rate` with `u = (w >> 11) * 2^-53`
//! * integer lattice: `k / denominator` with `k` uniform in
//!   `[lo * denominator, hi * denominator]`, drawn as `w mod span` after
//!   rejecting `w >= floor(2^64 / span) * span`

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parametrize::{phi_big, ParameterVector};
use crate::poly::Polynomial;
use crate::scalar::Scalar;

/// Name and version of the stream construction described in the module docs.
pub const RNG_NAME: &str = "chacha20-stream/v1";

/// Distribution of each parameter entry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Distribution {
    Uniform {
        lo: f64,
        hi: f64,
    },
    Exponential {
        rate: f64,
    },
    /// Multiples of `1/denominator` in `[lo, hi]`; exact on the rational backend.
    IntegerLattice {
        lo: i64,
        hi: i64,
        denominator: i64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub degree: usize,
    pub distribution: Distribution,
    pub seed: u64,
    pub count: usize,
}

/// The random stream of one sample.
#[derive(Clone, Debug)]
pub struct SampleRng {
    inner: ChaCha20Rng,
}

impl SampleRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        let mut inner = ChaCha20Rng::from_seed(key);
        inner.set_stream(stream);
        Self { inner }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform `k * 2^-53` with `k < 2^53`, as the pair `(k, value)`.
    fn next_unit(&mut self) -> (u64, f64) {
        let k = self.next_u64() >> 11;
        (k, k as f64 * (-53f64).exp2())
    }

    /// Uniform integer in `[0, span)`, `span > 0`.
    fn below(&mut self, span: u64) -> u64 {
        let limit = (u64::MAX / span) * span;
        loop {
            let w = self.next_u64();
            if w < limit {
                return w % span;
            }
        }
    }
}

impl SampleSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        if self.count == 0 {
            return bad("count must be positive".into());
        }
        match self.distribution {
            Distribution::Uniform { lo, hi } => {
                if !(lo.is_finite() && hi.is_finite()) || lo < 0.0 || hi < lo {
                    return bad(format!(
                        "uniform bounds must satisfy 0 <= lo <= hi, got [{lo}, {hi}]"
                    ));
                }
            }
            Distribution::Exponential { rate } => {
                if !(rate.is_finite() && rate > 0.0) {
                    return bad(format!("exponential rate must be positive, got {rate}"));
                }
            }
            Distribution::IntegerLattice {
                lo,
                hi,
                denominator,
            } => {
                if lo < 0 || hi < lo {
                    return bad(format!(
                        "lattice bounds must satisfy 0 <= lo <= hi, got [{lo}, {hi}]"
                    ));
                }
                if denominator <= 0 {
                    return bad(format!(
                        "lattice denominator must be positive, got {denominator}"
                    ));
                }
                if hi.checked_mul(denominator).is_none() {
                    return bad("lattice range overflows 64 bits".into());
                }
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: Self =
            serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }
}

fn draw<S: Scalar>(rng: &mut SampleRng, dist: &Distribution) -> S {
    match *dist {
        Distribution::Uniform { lo, hi } => {
            let (_, u) = rng.next_unit();
            let lo_s = S::from_f64(lo).expect("validated");
            let hi_s = S::from_f64(hi).expect("validated");
            // u is an exact dyadic, so the rational backend gets the exact value.
            lo_s.clone() + (hi_s - lo_s) * S::from_f64(u).expect("finite")
        }
        Distribution::Exponential { rate } => {
            let (_, u) = rng.next_unit();
            S::from_f64(-(1.0 - u).ln() / rate).expect("finite")
        }
        Distribution::IntegerLattice {
            lo,
            hi,
            denominator,
        } => {
            let (a, b) = (lo * denominator, hi * denominator);
            let k = a + rng.below((b - a) as u64 + 1) as i64;
            S::from_ratio(k, denominator)
        }
    }
}

/// The `index`-th parameter vector of `spec`, independent of all other samples.
pub fn sample_one<S: Scalar>(spec: &SampleSpec, index: u64) -> ParameterVector<S> {
    let mut rng = SampleRng::new(spec.seed, index);
    let entries = (0..spec.degree)
        .map(|_| draw(&mut rng, &spec.distribution))
        .collect();
    ParameterVector::new(entries).expect("distributions are supported on [0, inf)")
}

/// `spec.count` parameter vectors of length `spec.degree`.
pub fn sample_params<S: Scalar>(spec: &SampleSpec) -> Result<Vec<ParameterVector<S>>> {
    spec.validate()?;
    Ok((0..spec.count as u64)
        .map(|i| sample_one(spec, i))
        .collect())
}

/// `phi_big` of every vector from [`sample_params`].
pub fn sample_copositive<S: Scalar>(spec: &SampleSpec) -> Result<Vec<Polynomial<S>>> {
    Ok(sample_params(spec)?.iter().map(phi_big).collect())
}
