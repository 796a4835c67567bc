//! Closed-form generating series and radius-of-convergence bounds.
//!
//! All series arithmetic is exact rational and truncated at a caller-chosen
//! order; the radii are evaluated in double precision for reporting only.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::hochschild::BettiTable;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("parameter out of range: {0}")]
    BadParameter(String),
    #[error("Betti table incomplete at degree {degree}, refusing partial series")]
    IncompleteTable { degree: u32 },
    #[error("series coefficient at degree {degree} is not an integer: {value}")]
    NonIntegralCoefficient { degree: usize, value: String },
}

/// Truncated power series with exact rational coefficients; index = degree.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<BigRational>,
}

impl PowerSeries {
    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![BigRational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = BigRational::one();
        s
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "a series carries at least the constant term");
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficient(&self, degree: usize) -> BigRational {
        self.coeffs.get(degree).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn mul_trunc(&self, other: &PowerSeries, order: usize) -> PowerSeries {
        let mut out = PowerSeries::zero(order);
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j > order {
                    break;
                }
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }

    pub fn sub(&self, other: &PowerSeries) -> PowerSeries {
        let order = self.order().max(other.order());
        let mut out = PowerSeries::zero(order);
        for d in 0..=order {
            out.coeffs[d] = self.coefficient(d) - other.coefficient(d);
        }
        out
    }

    /// Expansion of `1 / (1 - c x^step)` to the given order.
    pub fn geometric(c: u64, step: usize, order: usize) -> PowerSeries {
        let mut out = PowerSeries::zero(order);
        let mut power = BigInt::one();
        let mut degree = 0usize;
        while degree <= order {
            out.coeffs[degree] = BigRational::from(power.clone());
            power *= c;
            degree += step;
        }
        out
    }

    /// Asserts every coefficient is an integer.
    pub fn check_integral(&self) -> Result<(), SeriesError> {
        for (degree, c) in self.coeffs.iter().enumerate() {
            if !c.denom().is_one() {
                return Err(SeriesError::NonIntegralCoefficient {
                    degree,
                    value: c.to_string(),
                });
            }
        }
        Ok(())
    }

    /// JSON rendering: `{"order": o, "coeffs": ["1", "0", ...]}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "order": self.order(),
            "coeffs": self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// Alternating-sum series for the link tower:
/// `1 / ((1 - x^{d-1})(1 - 2 x^{d-1}) ... (1 - m x^{d-1}))`.
pub fn euler_series_links(m: u32, d: u32, order: usize) -> Result<PowerSeries, SeriesError> {
    if m < 1 || d < 4 {
        return Err(SeriesError::BadParameter(format!("need m >= 1 and d >= 4, got m={m} d={d}")));
    }
    let step = (d - 1) as usize;
    let mut out = PowerSeries::one(order);
    for i in 1..=m as u64 {
        out = out.mul_trunc(&PowerSeries::geometric(i, step, order), order);
    }
    out.check_integral()?;
    Ok(out)
}

/// Links series minus the `m`-fold knot series `1 / (1 - x^{d-1})^m`.
pub fn euler_series_pair(m: u32, d: u32, order: usize) -> Result<PowerSeries, SeriesError> {
    let links = euler_series_links(m, d, order)?;
    let step = (d - 1) as usize;
    let mut knots = PowerSeries::one(order);
    let geometric = PowerSeries::geometric(1, step, order);
    for _ in 0..m {
        knots = knots.mul_trunc(&geometric, order);
    }
    let out = links.sub(&knots);
    out.check_integral()?;
    Ok(out)
}

/// Upper bounds for the radius of convergence of the Poincare series.
#[derive(Debug, Clone, Serialize)]
pub struct RadiusBound {
    pub m: u32,
    pub d: u32,
    /// `(1/m)^{1/(d-1)}`, from the link tower.
    pub link_bound: f64,
    /// `(1/sqrt(2))^{1/(d-1)}`, from the knot tower.
    pub knot_bound: f64,
    pub min_bound: f64,
    pub note: String,
}

pub fn radius_report(m: u32, d: u32) -> Result<RadiusBound, SeriesError> {
    if m < 1 || d < 4 {
        return Err(SeriesError::BadParameter(format!("need m >= 1 and d >= 4, got m={m} d={d}")));
    }
    let exponent = 1.0 / (d as f64 - 1.0);
    let link_bound = (1.0 / m as f64).powf(exponent);
    let knot_bound = (1.0 / std::f64::consts::SQRT_2).powf(exponent);
    let note = format!(
        "Betti numbers grow at an exponential rate of at least m^(1/(d-1)) = {:.6}; \
the link bound (1/m)^(1/(d-1)) falls below the knot bound (1/sqrt(2))^(1/(d-1)) once m > sqrt(2), \
and it tends to 0 as m grows. Conditional statement, reported as a formula only: if the knot \
series has radius of convergence R > 0, then for m > 1/R^(d-1) the pair series has radius < R.",
        (m as f64).powf(exponent)
    );
    Ok(RadiusBound { m, d, link_bound, knot_bound, min_bound: link_bound.min(knot_bound), note })
}

/// Poincare series of a Betti table: coefficients are the Betti numbers.
/// Refuses tables with incomplete entries inside the requested order.
pub fn poincare_series(table: &BettiTable, order: usize) -> Result<PowerSeries, SeriesError> {
    let mut out = PowerSeries::zero(order);
    for entry in &table.entries {
        if entry.u as usize > order {
            continue;
        }
        if !entry.complete {
            return Err(SeriesError::IncompleteTable { degree: entry.u });
        }
        out.coeffs[entry.u as usize] = BigRational::from(BigInt::from(entry.betti));
    }
    // degrees not listed at all are unknown, not zero
    for u in 0..=order as u32 {
        if !table.entries.iter().any(|e| e.u == u) {
            return Err(SeriesError::IncompleteTable { degree: u });
        }
    }
    Ok(out)
}

/// Convolution `sum_{i+j=u} a_i b_j`, for the retraction report.
pub fn convolution(a: &PowerSeries, b: &PowerSeries, u: usize) -> BigRational {
    let mut acc = BigRational::zero();
    for i in 0..=u {
        acc += a.coefficient(i) * b.coefficient(u - i);
    }
    acc
}

pub fn to_f64(value: &BigRational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}
