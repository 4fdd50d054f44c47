//! Sampled audio buffers.

use crate::error::{Error, Result};

/// Sampled audio, mono or stereo.
///
/// Samples are `f32` with a nominal range of `[-1, 1]` (values outside the
/// range are permitted; non-finite values are not). Stereo audio is stored
/// interleaved frame-major: `[L0, R0, L1, R1, ...]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Waveform {
    samples: Vec<f32>,
    sample_rate: u32,
    channels: u16,
}

impl Waveform {
    /// Build a waveform from interleaved samples.
    pub fn new(samples: Vec<f32>, sample_rate: u32, channels: u16) -> Result<Self> {
        if sample_rate == 0 {
            return Err(Error::invalid_input("sample rate must be positive"));
        }
        if channels != 1 && channels != 2 {
            return Err(Error::invalid_input(format!(
                "channel count must be 1 or 2, got {channels}"
            )));
        }
        if samples.len() % channels as usize != 0 {
            return Err(Error::invalid_input(format!(
                "sample count {} not divisible by channel count {channels}",
                samples.len()
            )));
        }
        if let Some(pos) = samples.iter().position(|s| !s.is_finite()) {
            return Err(Error::invalid_input(format!(
                "non-finite sample at index {pos}"
            )));
        }
        Ok(Self {
            samples,
            sample_rate,
            channels,
        })
    }

    /// Single-channel waveform.
    pub fn mono(samples: Vec<f32>, sample_rate: u32) -> Result<Self> {
        Self::new(samples, sample_rate, 1)
    }

    /// Interleave two equal-length channels into a stereo waveform.
    pub fn stereo(left: &[f32], right: &[f32], sample_rate: u32) -> Result<Self> {
        if left.len() != right.len() {
            return Err(Error::invalid_input(format!(
                "channel length mismatch: left {} vs right {}",
                left.len(),
                right.len()
            )));
        }
        let mut samples = Vec::with_capacity(left.len() * 2);
        for (l, r) in left.iter().zip(right) {
            samples.push(*l);
            samples.push(*r);
        }
        Self::new(samples, sample_rate, 2)
    }

    pub fn samples(&self) -> &[f32] {
        &self.samples
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn channels(&self) -> u16 {
        self.channels
    }

    pub fn is_mono(&self) -> bool {
        self.channels == 1
    }

    /// Number of frames (samples per channel).
    pub fn num_frames(&self) -> usize {
        self.samples.len() / self.channels as usize
    }

    pub fn duration_secs(&self) -> f64 {
        self.num_frames() as f64 / self.sample_rate as f64
    }

    /// Copy out one channel. `channel` must be below the channel count.
    pub fn channel(&self, channel: u16) -> Vec<f32> {
        assert!(channel < self.channels, "channel {channel} out of range");
        self.samples
            .iter()
            .skip(channel as usize)
            .step_by(self.channels as usize)
            .copied()
            .collect()
    }

    /// Split a stereo waveform into (left, right) mono waveforms.
    pub fn split_stereo(&self) -> Result<(Waveform, Waveform)> {
        if self.channels != 2 {
            return Err(Error::invalid_input("split_stereo requires stereo input"));
        }
        let left = Waveform::mono(self.channel(0), self.sample_rate)?;
        let right = Waveform::mono(self.channel(1), self.sample_rate)?;
        Ok((left, right))
    }

    pub fn into_samples(self) -> Vec<f32> {
        self.samples
    }
}
