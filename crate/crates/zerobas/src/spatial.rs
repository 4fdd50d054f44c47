//! Coordinate utilities for listener and source geometry.
//!
//! Axis convention throughout: x forward, y left, z up. Azimuth is measured
//! counterclockwise from +x in the horizontal plane; elevation is measured
//! from the horizontal plane, up positive.

use crate::error::{Error, Result};

/// Half inter-ear distance of a typical mannequin head, meters.
pub const DEFAULT_EAR_OFFSET: f64 = 0.09;

/// A point or displacement in 3D Cartesian space, meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn distance(&self, other: &Vec3) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    /// Linear interpolation: `self` at t=0, `other` at t=1.
    pub fn lerp(&self, other: &Vec3, t: f64) -> Vec3 {
        Vec3 {
            x: self.x + (other.x - self.x) * t,
            y: self.y + (other.y - self.y) * t,
            z: self.z + (other.z - self.z) * t,
        }
    }
}

impl std::ops::Add for Vec3 {
    type Output = Vec3;
    fn add(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl std::ops::Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

/// Source location in listener-centric spherical coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalPosition {
    azimuth_rad: f64,
    elevation_rad: f64,
    distance_m: f64,
}

impl SphericalPosition {
    pub fn new(azimuth_rad: f64, elevation_rad: f64, distance_m: f64) -> Result<Self> {
        if !azimuth_rad.is_finite() || !elevation_rad.is_finite() || !distance_m.is_finite() {
            return Err(Error::invalid_input("non-finite spherical coordinate"));
        }
        if distance_m < 0.0 {
            return Err(Error::invalid_input(format!(
                "distance must be non-negative, got {distance_m}"
            )));
        }
        if !(-std::f64::consts::FRAC_PI_2..=std::f64::consts::FRAC_PI_2).contains(&elevation_rad) {
            return Err(Error::invalid_input(format!(
                "elevation must lie in [-pi/2, pi/2], got {elevation_rad}"
            )));
        }
        Ok(Self {
            azimuth_rad,
            elevation_rad,
            distance_m,
        })
    }

    pub fn azimuth_rad(&self) -> f64 {
        self.azimuth_rad
    }

    pub fn elevation_rad(&self) -> f64 {
        self.elevation_rad
    }

    pub fn distance_m(&self) -> f64 {
        self.distance_m
    }
}

/// Unit quaternion rotation (w + xi + yj + zk).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const IDENTITY: Quaternion = Quaternion {
        w: 1.0,
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    /// Rotation about the z axis (positive = turn toward +y, i.e. leftward).
    pub fn from_yaw(yaw_rad: f64) -> Self {
        let half = yaw_rad * 0.5;
        Self {
            w: half.cos(),
            x: 0.0,
            y: 0.0,
            z: half.sin(),
        }
    }

    pub fn norm(&self) -> f64 {
        (self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// Rotate a vector by this quaternion (assumed unit norm).
    pub fn rotate(&self, v: Vec3) -> Vec3 {
        // q v q* expanded via the cross-product form: v + 2 u x (u x v + w v).
        let ux = self.x;
        let uy = self.y;
        let uz = self.z;
        let cx = uy * v.z - uz * v.y + self.w * v.x;
        let cy = uz * v.x - ux * v.z + self.w * v.y;
        let cz = ux * v.y - uy * v.x + self.w * v.z;
        Vec3 {
            x: v.x + 2.0 * (uy * cz - uz * cy),
            y: v.y + 2.0 * (uz * cx - ux * cz),
            z: v.z + 2.0 * (ux * cy - uy * cx),
        }
    }
}

/// Listener head placement from which the two ear positions derive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeadPose {
    position: Vec3,
    orientation: Quaternion,
    ear_offset_m: f64,
}

impl HeadPose {
    pub fn new(position: Vec3, orientation: Quaternion, ear_offset_m: f64) -> Result<Self> {
        if !position.is_finite() {
            return Err(Error::invalid_input("non-finite head position"));
        }
        let norm = orientation.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > 1e-6 {
            return Err(Error::invalid_input(format!(
                "orientation quaternion must have unit norm, got {norm}"
            )));
        }
        if !(ear_offset_m.is_finite() && ear_offset_m > 0.0) {
            return Err(Error::invalid_input(format!(
                "ear offset must be positive, got {ear_offset_m}"
            )));
        }
        Ok(Self {
            position,
            orientation,
            ear_offset_m,
        })
    }

    pub fn position(&self) -> Vec3 {
        self.position
    }

    pub fn orientation(&self) -> Quaternion {
        self.orientation
    }

    pub fn ear_offset_m(&self) -> f64 {
        self.ear_offset_m
    }
}

/// Convert a spherical position to Cartesian coordinates.
pub fn spherical_to_cartesian(s: SphericalPosition) -> Vec3 {
    let (az, el, d) = (s.azimuth_rad(), s.elevation_rad(), s.distance_m());
    Vec3 {
        x: d * el.cos() * az.cos(),
        y: d * el.cos() * az.sin(),
        z: d * el.sin(),
    }
}

/// Ear positions for a head pose. The left ear sits at +y in the head frame.
pub fn ears_from_head_pose(h: &HeadPose) -> (Vec3, Vec3) {
    let left_local = Vec3::new(0.0, h.ear_offset_m(), 0.0);
    let right_local = Vec3::new(0.0, -h.ear_offset_m(), 0.0);
    (
        h.position() + h.orientation().rotate(left_local),
        h.position() + h.orientation().rotate(right_local),
    )
}
