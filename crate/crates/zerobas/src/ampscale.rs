//! Amplitude scaling: inverse-square-law attenuation of the channel farther
//! from the source.

use crate::audio::Waveform;
use crate::error::{Error, Result};
use crate::pose::SampleTrajectory;

/// Distances below this are treated as a source-on-ear degeneracy: the
/// inverse-square ratio is unbounded there.
pub const MIN_DISTANCE_M: f64 = 1e-6;

/// Per-sample channel gains. At every sample the nearer channel keeps gain 1
/// and the farther channel is attenuated by the squared distance ratio.
#[derive(Debug, Clone, PartialEq)]
pub struct GainTrack {
    gain_l: Vec<f64>,
    gain_r: Vec<f64>,
}

impl GainTrack {
    pub fn new(gain_l: Vec<f64>, gain_r: Vec<f64>) -> Result<Self> {
        if gain_l.len() != gain_r.len() {
            return Err(Error::invalid_input(format!(
                "gain track lengths differ: {} vs {}",
                gain_l.len(),
                gain_r.len()
            )));
        }
        for (t, (l, r)) in gain_l.iter().zip(&gain_r).enumerate() {
            if !(*l > 0.0 && *l <= 1.0 && *r > 0.0 && *r <= 1.0) {
                return Err(Error::invalid_input(format!(
                    "gains must lie in (0, 1], got ({l}, {r}) at sample {t}"
                )));
            }
            if l.max(*r) != 1.0 {
                return Err(Error::invalid_input(format!(
                    "one channel must keep unit gain, got ({l}, {r}) at sample {t}"
                )));
            }
        }
        Ok(Self { gain_l, gain_r })
    }

    pub fn len(&self) -> usize {
        self.gain_l.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gain_l.is_empty()
    }

    pub fn gain_l(&self) -> &[f64] {
        &self.gain_l
    }

    pub fn gain_r(&self) -> &[f64] {
        &self.gain_r
    }
}

/// Gains from source-to-ear distances:
/// `gain_l[t] = min(1, (D_r/D_l)^2)` and `gain_r[t] = min(1, (D_l/D_r)^2)`.
pub fn compute_gains(traj: &SampleTrajectory) -> Result<GainTrack> {
    let n = traj.len();
    let mut gain_l = Vec::with_capacity(n);
    let mut gain_r = Vec::with_capacity(n);
    for t in 0..n {
        let src = traj.src()[t];
        let d_l = src.distance(&traj.ear_l()[t]);
        let d_r = src.distance(&traj.ear_r()[t]);
        if d_l < MIN_DISTANCE_M || d_r < MIN_DISTANCE_M {
            return Err(Error::DegenerateGeometry(format!(
                "source-to-ear distance below {MIN_DISTANCE_M} m at sample {t} \
                 (left {d_l} m, right {d_r} m)"
            )));
        }
        let ratio = d_r / d_l;
        gain_l.push((ratio * ratio).min(1.0));
        gain_r.push((1.0 / (ratio * ratio)).min(1.0));
    }
    GainTrack::new(gain_l, gain_r)
}

/// Multiply each channel by its gain track, sample by sample.
pub fn apply_gains(
    left: &Waveform,
    right: &Waveform,
    gains: &GainTrack,
) -> Result<(Waveform, Waveform)> {
    if !left.is_mono() || !right.is_mono() {
        return Err(Error::invalid_input("apply_gains requires mono channels"));
    }
    if left.num_frames() != right.num_frames()
        || left.num_frames() != gains.len()
        || left.sample_rate() != right.sample_rate()
    {
        return Err(Error::invalid_input(format!(
            "length/rate mismatch: left {} @ {} Hz, right {} @ {} Hz, gains {}",
            left.num_frames(),
            left.sample_rate(),
            right.num_frames(),
            right.sample_rate(),
            gains.len()
        )));
    }
    let scale = |samples: &[f32], g: &[f64]| -> Vec<f32> {
        samples
            .iter()
            .zip(g)
            .map(|(&s, &g)| (s as f64 * g) as f32)
            .collect()
    };
    Ok((
        Waveform::mono(scale(left.samples(), gains.gain_l()), left.sample_rate())?,
        Waveform::mono(scale(right.samples(), gains.gain_r()), right.sample_rate())?,
    ))
}

/// Full stage: distances to gains, then the per-sample scaling.
pub fn amplitude_scale(
    left: &Waveform,
    right: &Waveform,
    traj: &SampleTrajectory,
) -> Result<(Waveform, Waveform)> {
    let gains = compute_gains(traj)?;
    apply_gains(left, right, &gains)
}
