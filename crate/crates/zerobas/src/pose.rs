//! Time-stamped source and ear positions, and their per-sample realization.

use crate::error::{Error, Result};
use crate::spatial::Vec3;

/// One tracked instant: where the source and both ears are at `time_s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoseFrame {
    pub time_s: f64,
    pub src: Vec3,
    pub ear_l: Vec3,
    pub ear_r: Vec3,
}

/// Ordered pose frames at an arbitrary (possibly irregular) frame rate.
#[derive(Debug, Clone, PartialEq)]
pub struct PoseTrack {
    frames: Vec<PoseFrame>,
}

impl PoseTrack {
    pub fn new(frames: Vec<PoseFrame>) -> Result<Self> {
        if frames.is_empty() {
            return Err(Error::invalid_input("pose track must have at least one frame"));
        }
        for (i, f) in frames.iter().enumerate() {
            if !f.time_s.is_finite() || !f.src.is_finite() || !f.ear_l.is_finite() || !f.ear_r.is_finite()
            {
                return Err(Error::invalid_input(format!(
                    "non-finite value in pose frame {i}"
                )));
            }
            if i > 0 && f.time_s <= frames[i - 1].time_s {
                return Err(Error::invalid_input(format!(
                    "pose timestamps must be strictly increasing (frame {i}: {} after {})",
                    f.time_s,
                    frames[i - 1].time_s
                )));
            }
        }
        Ok(Self { frames })
    }

    /// A track with one frame: fixed geometry for the whole signal.
    pub fn static_pose(src: Vec3, ear_l: Vec3, ear_r: Vec3) -> Result<Self> {
        Self::new(vec![PoseFrame {
            time_s: 0.0,
            src,
            ear_l,
            ear_r,
        }])
    }

    pub fn frames(&self) -> &[PoseFrame] {
        &self.frames
    }
}

/// Source and ear positions resolved at every audio sample.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleTrajectory {
    src: Vec<Vec3>,
    ear_l: Vec<Vec3>,
    ear_r: Vec<Vec3>,
    sample_rate: u32,
}

impl SampleTrajectory {
    pub fn new(src: Vec<Vec3>, ear_l: Vec<Vec3>, ear_r: Vec<Vec3>, sample_rate: u32) -> Result<Self> {
        if sample_rate == 0 {
            return Err(Error::invalid_input("sample rate must be positive"));
        }
        if src.len() != ear_l.len() || src.len() != ear_r.len() {
            return Err(Error::invalid_input(format!(
                "trajectory arrays must have equal lengths: src {}, ear_l {}, ear_r {}",
                src.len(),
                ear_l.len(),
                ear_r.len()
            )));
        }
        for (i, ((s, l), r)) in src.iter().zip(&ear_l).zip(&ear_r).enumerate() {
            if !s.is_finite() || !l.is_finite() || !r.is_finite() {
                return Err(Error::invalid_input(format!(
                    "non-finite trajectory position at sample {i}"
                )));
            }
        }
        Ok(Self {
            src,
            ear_l,
            ear_r,
            sample_rate,
        })
    }

    /// Fixed geometry replicated across `num_samples` samples.
    pub fn constant(
        src: Vec3,
        ear_l: Vec3,
        ear_r: Vec3,
        sample_rate: u32,
        num_samples: usize,
    ) -> Result<Self> {
        Self::new(
            vec![src; num_samples],
            vec![ear_l; num_samples],
            vec![ear_r; num_samples],
            sample_rate,
        )
    }

    pub fn len(&self) -> usize {
        self.src.len()
    }

    pub fn is_empty(&self) -> bool {
        self.src.is_empty()
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn src(&self) -> &[Vec3] {
        &self.src
    }

    pub fn ear_l(&self) -> &[Vec3] {
        &self.ear_l
    }

    pub fn ear_r(&self) -> &[Vec3] {
        &self.ear_r
    }
}

/// Resolve a pose track to per-sample positions at `sample_rate`.
///
/// Sample `i` is taken at time `i / sample_rate`. Positions between frames
/// interpolate linearly; samples outside the tracked interval clamp to the
/// nearest frame. A sample landing exactly on a frame timestamp reproduces
/// that frame bit-exactly.
pub fn interpolate_track(
    track: &PoseTrack,
    sample_rate: u32,
    num_samples: usize,
) -> Result<SampleTrajectory> {
    if sample_rate == 0 {
        return Err(Error::invalid_input("sample rate must be positive"));
    }
    if num_samples == 0 {
        return Err(Error::invalid_input("num_samples must be positive"));
    }
    let frames = track.frames();
    let mut src = Vec::with_capacity(num_samples);
    let mut ear_l = Vec::with_capacity(num_samples);
    let mut ear_r = Vec::with_capacity(num_samples);
    for i in 0..num_samples {
        let t = i as f64 / sample_rate as f64;
        let idx = frames.partition_point(|f| f.time_s < t);
        let (s, l, r) = if idx == frames.len() {
            let f = &frames[idx - 1];
            (f.src, f.ear_l, f.ear_r)
        } else if frames[idx].time_s == t || idx == 0 {
            let f = &frames[idx];
            (f.src, f.ear_l, f.ear_r)
        } else {
            let a = &frames[idx - 1];
            let b = &frames[idx];
            let alpha = (t - a.time_s) / (b.time_s - a.time_s);
            (
                a.src.lerp(&b.src, alpha),
                a.ear_l.lerp(&b.ear_l, alpha),
                a.ear_r.lerp(&b.ear_r, alpha),
            )
        };
        src.push(s);
        ear_l.push(l);
        ear_r.push(r);
    }
    SampleTrajectory::new(src, ear_l, ear_r, sample_rate)
}
