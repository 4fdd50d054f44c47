//! Geometric time warping: per-channel propagation delays realized as a
//! fractional-index warp of the mono signal.

use crate::audio::Waveform;
use crate::error::{Error, Result};
use crate::pose::SampleTrajectory;

/// Per-output-sample fractional source indices for both channels.
///
/// `indices[t]` names the (possibly fractional, possibly negative) source
/// sample that output sample `t` reads. Values never exceed `t`: propagation
/// only delays.
#[derive(Debug, Clone, PartialEq)]
pub struct Warpfield {
    indices_l: Vec<f64>,
    indices_r: Vec<f64>,
    sample_rate: u32,
}

impl Warpfield {
    pub fn new(indices_l: Vec<f64>, indices_r: Vec<f64>, sample_rate: u32) -> Result<Self> {
        if sample_rate == 0 {
            return Err(Error::invalid_input("sample rate must be positive"));
        }
        if indices_l.len() != indices_r.len() {
            return Err(Error::invalid_input(format!(
                "warpfield channel lengths differ: {} vs {}",
                indices_l.len(),
                indices_r.len()
            )));
        }
        for (t, (l, r)) in indices_l.iter().zip(&indices_r).enumerate() {
            if !l.is_finite() || !r.is_finite() {
                return Err(Error::invalid_input(format!(
                    "non-finite warp index at sample {t}"
                )));
            }
            if *l > t as f64 || *r > t as f64 {
                return Err(Error::invalid_input(format!(
                    "warp index exceeds output time at sample {t} (delays must be non-negative)"
                )));
            }
        }
        Ok(Self {
            indices_l,
            indices_r,
            sample_rate,
        })
    }

    pub fn len(&self) -> usize {
        self.indices_l.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices_l.is_empty()
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn indices_l(&self) -> &[f64] {
        &self.indices_l
    }

    pub fn indices_r(&self) -> &[f64] {
        &self.indices_r
    }
}

/// Warp indices from source-to-ear distances:
/// `indices[t] = t - (S / nu_sound) * ||p_src[t] - p_ear[t]||`.
pub fn compute_warpfield(traj: &SampleTrajectory, nu_sound: f64) -> Result<Warpfield> {
    if !(nu_sound.is_finite() && nu_sound > 0.0) {
        return Err(Error::invalid_input(format!(
            "speed of sound must be positive, got {nu_sound}"
        )));
    }
    let scale = traj.sample_rate() as f64 / nu_sound;
    let n = traj.len();
    let mut indices_l = Vec::with_capacity(n);
    let mut indices_r = Vec::with_capacity(n);
    for t in 0..n {
        let src = traj.src()[t];
        indices_l.push(t as f64 - scale * src.distance(&traj.ear_l()[t]));
        indices_r.push(t as f64 - scale * src.distance(&traj.ear_r()[t]));
    }
    Warpfield::new(indices_l, indices_r, traj.sample_rate())
}

fn warp_channel(x: &[f32], indices: &[f64]) -> Vec<f32> {
    let read = |i: i64| -> f64 {
        if i >= 0 && (i as usize) < x.len() {
            x[i as usize] as f64
        } else {
            0.0
        }
    };
    indices
        .iter()
        .map(|&rho| {
            let base = rho.floor();
            let frac = rho - base;
            let i = base as i64;
            ((1.0 - frac) * read(i) + frac * read(i + 1)) as f32
        })
        .collect()
}

/// Resample the mono signal along both warp index tracks.
///
/// Output sample `t` linearly interpolates the source at `indices[t]`; reads
/// outside the source range contribute zero.
pub fn apply_warp(mono: &Waveform, field: &Warpfield) -> Result<(Waveform, Waveform)> {
    if !mono.is_mono() {
        return Err(Error::invalid_input("apply_warp requires mono input"));
    }
    if mono.num_frames() != field.len() {
        return Err(Error::invalid_input(format!(
            "signal length {} does not match warpfield length {}",
            mono.num_frames(),
            field.len()
        )));
    }
    if mono.sample_rate() != field.sample_rate() {
        return Err(Error::invalid_input(format!(
            "signal rate {} does not match warpfield rate {}",
            mono.sample_rate(),
            field.sample_rate()
        )));
    }
    let left = warp_channel(mono.samples(), field.indices_l());
    let right = warp_channel(mono.samples(), field.indices_r());
    Ok((
        Waveform::mono(left, mono.sample_rate())?,
        Waveform::mono(right, mono.sample_rate())?,
    ))
}

/// Full stage: distances to warp indices, then the warp itself.
pub fn geometric_time_warp(
    mono: &Waveform,
    traj: &SampleTrajectory,
    nu_sound: f64,
) -> Result<(Waveform, Waveform)> {
    if mono.sample_rate() != traj.sample_rate() {
        return Err(Error::invalid_input(format!(
            "signal rate {} does not match trajectory rate {}",
            mono.sample_rate(),
            traj.sample_rate()
        )));
    }
    let field = compute_warpfield(traj, nu_sound)?;
    apply_warp(mono, &field)
}
