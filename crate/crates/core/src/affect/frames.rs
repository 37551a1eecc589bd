use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

pub const HEAD: &str = "head";
pub const LEFT_WRIST: &str = "left_wrist";
pub const RIGHT_WRIST: &str = "right_wrist";
pub const LEFT_ELBOW: &str = "left_elbow";
pub const RIGHT_ELBOW: &str = "right_elbow";
pub const LEFT_SHOULDER: &str = "left_shoulder";
pub const RIGHT_SHOULDER: &str = "right_shoulder";

pub const REQUIRED_JOINTS: [&str; 7] =
    [HEAD, LEFT_WRIST, RIGHT_WRIST, LEFT_ELBOW, RIGHT_ELBOW, LEFT_SHOULDER, RIGHT_SHOULDER];

/// Action unit intensities at one instant. Absent units read as 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuFrame<T> {
    pub t_ms: u64,
    pub intensities: BTreeMap<u8, T>,
}

impl<T: Scalar> AuFrame<T> {
    pub fn new(t_ms: u64, intensities: impl IntoIterator<Item = (u8, T)>) -> Self {
        AuFrame { t_ms, intensities: intensities.into_iter().collect() }
    }

    pub fn intensity(&self, au: u8) -> T {
        self.intensities.get(&au).copied().unwrap_or_else(T::zero)
    }

    /// Mean intensity over `units`; 0 for an empty set.
    pub fn mean_of(&self, units: &[u8]) -> T {
        if units.is_empty() {
            return T::zero();
        }
        let sum = units.iter().fold(T::zero(), |acc, &u| acc + self.intensity(u));
        sum / T::from_usize(units.len()).expect("usize converts")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Scalar> std::ops::Sub for Point3<T> {
    type Output = Self;

    fn sub(self, o: Self) -> Self {
        Point3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Scalar> std::ops::Add for Point3<T> {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        Point3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Scalar> Point3<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Point3 { x, y, z }
    }

    pub fn scale(self, k: T) -> Self {
        Point3::new(self.x * k, self.y * k, self.z * k)
    }

    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Self) -> Self {
        Point3::new(self.y * o.z - self.z * o.y, self.z * o.x - self.x * o.z, self.x * o.y - self.y * o.x)
    }

    pub fn norm(self) -> T {
        self.dot(self).sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

/// Joint positions in meters at one instant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkeletonFrame<T> {
    pub t_ms: u64,
    pub joints: BTreeMap<String, Point3<T>>,
}

impl<T: Scalar> SkeletonFrame<T> {
    pub fn new<S: Into<String>>(t_ms: u64, joints: impl IntoIterator<Item = (S, Point3<T>)>) -> Self {
        SkeletonFrame { t_ms, joints: joints.into_iter().map(|(k, v)| (k.into(), v)).collect() }
    }

    pub fn joint(&self, name: &str) -> Option<Point3<T>> {
        self.joints.get(name).copied()
    }

    /// Some required joint is missing.
    pub fn is_partial(&self) -> bool {
        REQUIRED_JOINTS.iter().any(|j| !self.joints.contains_key(*j))
    }

    pub fn translated(&self, by: Point3<T>) -> Self {
        SkeletonFrame { t_ms: self.t_ms, joints: self.joints.iter().map(|(k, p)| (k.clone(), *p + by)).collect() }
    }
}
