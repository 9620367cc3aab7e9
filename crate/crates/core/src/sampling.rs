//! Seeded random signals and kernels.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::layer::{condition_report, KernelSpec};
use crate::padding::PadMode;
use crate::tensor::ChannelSignal;

/// Name recorded in reports next to the seed.
pub const GENERATOR: &str = "ChaCha8Rng";

/// Kernels whose smallest non-skipped condition ratio is below this are redrawn.
pub const MIN_CONDITION_RATIO: f64 = 1e-6;

const MAX_DRAWS: usize = 1000;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Samples uniform in `[-1, 1)`.
pub fn uniform_vec<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.random_range(-1.0..1.0)).collect()
}

pub fn random_signal<R: Rng + ?Sized>(
    rng: &mut R,
    dims: &[usize],
    channels: usize,
) -> Result<ChannelSignal> {
    let len = channels * dims.iter().product::<usize>();
    ChannelSignal::new(uniform_vec(rng, len), dims.to_vec(), channels)
}

/// Random `c x c` kernel dominated by a scaled identity at one anchor tap:
/// offset 0 on WS axes and +1 on WA axes (where the centre tap cancels).
pub fn random_kernel<R: Rng + ?Sized>(
    rng: &mut R,
    channels: usize,
    radii: &[usize],
    modes: &[PadMode],
) -> Result<KernelSpec> {
    if radii.len() != modes.len() {
        return Err(Error::Shape("one radius per kernel mode".into()));
    }
    let mut anchor = Vec::with_capacity(radii.len());
    for (&r, &m) in radii.iter().zip(modes) {
        match m {
            PadMode::Ws => anchor.push(r),
            PadMode::Wa if r >= 1 => anchor.push(r + 1),
            PadMode::Wa => {
                return Err(Error::Shape(
                    "anti-symmetric kernels need radius >= 1".into(),
                ))
            }
            other => return Err(Error::UnsupportedKernelMode(other)),
        }
    }
    let extents: Vec<usize> = radii.iter().map(|r| 2 * r + 1).collect();
    let patch: usize = extents.iter().product();
    let anchor_index = match anchor[..] {
        [a] => a,
        [a, b] => a * extents[1] + b,
        _ => unreachable!(),
    };
    let scale = 0.5f64.powi(radii.len() as i32);
    let noise = 0.3 * scale / (channels as f64).sqrt();
    let mut taps = vec![0.0; channels * channels * patch];
    for o in 0..channels {
        for i in 0..channels {
            let block = &mut taps[(o * channels + i) * patch..(o * channels + i + 1) * patch];
            for t in block.iter_mut() {
                let z: f64 = rng.sample(StandardNormal);
                *t = noise * z;
            }
            if o == i {
                block[anchor_index] += scale;
            }
        }
    }
    KernelSpec::new(taps, channels, channels, radii.to_vec(), modes.to_vec())
}

/// Draws kernels until the smallest condition ratio outside the input's prior
/// zeros reaches [`MIN_CONDITION_RATIO`]. Returns the kernel and that ratio.
pub fn well_conditioned_kernel<R: Rng + ?Sized>(
    rng: &mut R,
    channels: usize,
    radii: &[usize],
    modes: &[PadMode],
    x_modes: &[PadMode],
    periods: &[usize],
) -> Result<(KernelSpec, f64)> {
    for _ in 0..MAX_DRAWS {
        let spec = random_kernel(rng, channels, radii, modes)?;
        let report = condition_report(&spec, x_modes, periods)?;
        let ratio = report.min_ratio.unwrap_or(1.0);
        if ratio >= MIN_CONDITION_RATIO {
            return Ok((spec, ratio));
        }
    }
    Err(Error::SingularFrequency {
        frequency: vec![],
        ratio: 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_draws_repeat() {
        let a = uniform_vec(&mut rng(7), 5);
        let b = uniform_vec(&mut rng(7), 5);
        assert_eq!(a, b);
        assert!(a.iter().all(|v| (-1.0..1.0).contains(v)));
    }

    #[test]
    fn random_kernels_are_well_conditioned() {
        let mut r = rng(3);
        for modes in [[PadMode::Ws], [PadMode::Wa]] {
            let x_modes = [if modes[0] == PadMode::Wa {
                PadMode::Wa
            } else {
                PadMode::Ws
            }];
            let (_, ratio) =
                well_conditioned_kernel(&mut r, 3, &[1], &modes, &x_modes, &[34]).unwrap();
            assert!(ratio >= MIN_CONDITION_RATIO);
        }
    }

    #[test]
    fn wa_needs_radius() {
        assert!(random_kernel(&mut rng(0), 1, &[0], &[PadMode::Wa]).is_err());
    }
}
