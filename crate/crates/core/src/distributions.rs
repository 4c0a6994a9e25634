//! Lifetime models for basic events and their unreliability `F(t) = P(T <= t)`.

use std::fmt;

use crate::error::{Error, Result};

/// Failure distribution of a single component.
///
/// Values can only be obtained through the checked constructors, so every
/// model in circulation has valid parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LifetimeModel(Kind);

/// Read-only view of a model's parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kind {
    /// Constant failure rate, per hour.
    Exponential { rate: f64 },
    /// `F(t) = 1 - exp(-(t / scale)^shape)`, scale in hours.
    Weibull { shape: f64, scale: f64 },
    /// Time-independent failure probability.
    FixedProb { p: f64 },
}

impl LifetimeModel {
    /// Exponential lifetime; `rate = 0` models a component that never fails.
    pub fn exponential(rate: f64) -> Result<Self> {
        if !rate.is_finite() || rate < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "exponential rate must be finite and >= 0, got {rate}"
            )));
        }
        Ok(Self(Kind::Exponential { rate }))
    }

    pub fn weibull(shape: f64, scale: f64) -> Result<Self> {
        if !shape.is_finite() || shape <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "weibull shape must be finite and > 0, got {shape}"
            )));
        }
        if !scale.is_finite() || scale <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "weibull scale must be finite and > 0, got {scale}"
            )));
        }
        Ok(Self(Kind::Weibull { shape, scale }))
    }

    pub fn fixed(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!(
                "fixed probability must lie in [0, 1], got {p}"
            )));
        }
        Ok(Self(Kind::FixedProb { p }))
    }

    pub fn kind(&self) -> Kind {
        self.0
    }

    /// Probability that the component has failed by time `t`.
    pub fn unreliability(&self, t: MissionTime) -> f64 {
        let t = t.hours();
        match self.0 {
            Kind::Exponential { rate } => {
                if t >= 0.0 {
                    -(-rate * t).exp_m1()
                } else {
                    0.0
                }
            }
            Kind::Weibull { shape, scale } => {
                if t >= 0.0 {
                    -(-(t / scale).powf(shape)).exp_m1()
                } else {
                    0.0
                }
            }
            Kind::FixedProb { p } => p,
        }
    }
}

impl fmt::Display for LifetimeModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Kind::Exponential { rate } => write!(f, "exp rate={rate}"),
            Kind::Weibull { shape, scale } => write!(f, "weibull shape={shape} scale={scale}"),
            Kind::FixedProb { p } => write!(f, "prob p={p}"),
        }
    }
}

/// A point on the mission timeline, in hours. Negative values are allowed.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct MissionTime(f64);

impl MissionTime {
    pub fn new(hours: f64) -> Result<Self> {
        if hours.is_finite() {
            Ok(Self(hours))
        } else {
            Err(Error::InvalidTime(hours))
        }
    }

    pub fn hours(self) -> f64 {
        self.0
    }
}
