//! Deterministic per-task random substreams.
//!
//! Every start, sample or trial draws from a ChaCha stream selected by
//! `(seed, stream)`, so results do not depend on how work is scheduled.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub type StreamRng = ChaCha8Rng;

/// The generator for task `stream` under `seed`.
pub fn substream(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Packs a task family tag and an index into one stream id.
pub fn stream_id(tag: u16, index: u64) -> u64 {
    ((tag as u64) << 48) | (index & 0xFFFF_FFFF_FFFF)
}

pub fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Uniform point of the closed disc of the given radius.
pub fn complex_in_disc<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> Complex64 {
    let r = radius * libm::sqrt(rng.random::<f64>());
    let t = 2.0 * core::f64::consts::PI * rng.random::<f64>();
    Complex64::new(r * libm::cos(t), r * libm::sin(t))
}

/// Rational `n/d` with `|n| <= max_num` and `1 <= d <= max_den`, uniform in `(n, d)`.
pub fn rational<R: Rng + ?Sized>(rng: &mut R, max_num: i64, max_den: i64) -> BigRational {
    let n = rng.random_range(-max_num..=max_num);
    let d = rng.random_range(1..=max_den.max(1));
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
