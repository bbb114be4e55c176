//! Application utility models.
//!
//! Real-time traffic is modelled by a normalized sigmoid with steepness `a`
//! and inflection point `b`; delay-tolerant traffic by a normalized
//! logarithm with growth `k` that reaches 1 at `r_max`. Both satisfy
//! `U(0) = 0`, are strictly increasing and have concave `log U`, which is
//! what makes the relaxed allocation problem convex.
//!
//! The sigmoid is written in the overflow-free form
//!
//! ```text
//! U(r) = c * (1 / (1 + e^{-a(r-b)}) - d)  =  (1 - e^{-ar}) / (1 + e^{-a(r-b)})
//! ```
//!
//! with `c = 1 + e^{-ab}` and `d = e^{-ab} / (1 + e^{-ab})`, so nothing ever
//! evaluates `e^{ab}` directly.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Upper end of the rate bracket every UE's price response is confined to.
pub const RATE_CAP: f64 = 100.0;

const BRACKET_LO: f64 = 1e-9;
const BISECTION_WIDTH: f64 = 1e-9;
const BISECTION_MAX_ITERS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UtilityFunction<T> {
    /// Inelastic (real-time) traffic.
    Sigmoidal { a: T, b: T },
    /// Elastic (delay-tolerant) traffic.
    Logarithmic { k: T, r_max: T },
}

fn positive<T: Scalar>(what: &'static str, v: T) -> Result<()> {
    if v.is_finite() && v > T::zero() {
        Ok(())
    } else {
        Err(Error::Domain {
            what,
            value: v.to_f64().unwrap_or(f64::NAN),
        })
    }
}

/// `ln(1 + e^z)` without overflow.
fn softplus<T: Scalar>(z: T) -> T {
    if z > T::zero() {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

impl<T: Scalar> UtilityFunction<T> {
    pub fn sigmoidal(a: T, b: T) -> Result<Self> {
        let u = UtilityFunction::Sigmoidal { a, b };
        u.validate()?;
        Ok(u)
    }

    pub fn logarithmic(k: T, r_max: T) -> Result<Self> {
        let u = UtilityFunction::Logarithmic { k, r_max };
        u.validate()?;
        Ok(u)
    }

    /// Checks that every parameter is finite and strictly positive.
    pub fn validate(&self) -> Result<()> {
        match *self {
            UtilityFunction::Sigmoidal { a, b } => {
                positive("sigmoidal a", a)?;
                positive("sigmoidal b", b)
            }
            UtilityFunction::Logarithmic { k, r_max } => {
                positive("logarithmic k", k)?;
                positive("logarithmic r_max", r_max)
            }
        }
    }

    pub fn is_sigmoidal(&self) -> bool {
        matches!(self, UtilityFunction::Sigmoidal { .. })
    }

    /// Normalization factor `c = 1 + e^{-ab}` (sigmoidal only).
    pub fn c(&self) -> Option<T> {
        match *self {
            UtilityFunction::Sigmoidal { a, b } => Some(T::one() + (-a * b).exp()),
            UtilityFunction::Logarithmic { .. } => None,
        }
    }

    /// Offset `d = e^{-ab} / (1 + e^{-ab})` (sigmoidal only).
    pub fn d(&self) -> Option<T> {
        match *self {
            UtilityFunction::Sigmoidal { a, b } => {
                let e = (-a * b).exp();
                Some(e / (T::one() + e))
            }
            UtilityFunction::Logarithmic { .. } => None,
        }
    }

    /// Utility at rate `r >= 0`.
    ///
    /// The logarithmic family is evaluated as written and so exceeds 1 past
    /// `r_max`; within `[0, r_max]` (and everywhere for the sigmoid) the
    /// value lies in `[0, 1]`.
    pub fn eval(&self, r: T) -> Result<T> {
        if !(r >= T::zero()) || r.is_infinite() {
            return Err(Error::Domain {
                what: "rate",
                value: r.to_f64().unwrap_or(f64::NAN),
            });
        }
        let u = match *self {
            UtilityFunction::Sigmoidal { a, b } => {
                -(-a * r).exp_m1() / (T::one() + (-a * (r - b)).exp())
            }
            UtilityFunction::Logarithmic { k, r_max } => (k * r).ln_1p() / (k * r_max).ln_1p(),
        };
        // the only negative residue possible is -0.0 at r = 0
        Ok(if u > T::zero() { u } else { T::zero() })
    }

    /// `ln U(r)`, computed in the log domain so tiny utilities do not
    /// underflow to zero first. Returns `-inf` at `r = 0`.
    pub fn log_eval(&self, r: T) -> Result<T> {
        if !(r >= T::zero()) || r.is_infinite() {
            return Err(Error::Domain {
                what: "rate",
                value: r.to_f64().unwrap_or(f64::NAN),
            });
        }
        if r == T::zero() {
            return Ok(T::neg_infinity());
        }
        Ok(match *self {
            UtilityFunction::Sigmoidal { a, b } => {
                (-(-a * r).exp_m1()).ln() - softplus(-a * (r - b))
            }
            UtilityFunction::Logarithmic { k, r_max } => {
                (k * r).ln_1p().ln() - (k * r_max).ln_1p().ln()
            }
        })
    }

    /// `d/dr ln U(r)` for `r > 0`. Positive and non-increasing in `r`.
    pub fn log_slope(&self, r: T) -> Result<T> {
        if !(r > T::zero()) || r.is_infinite() {
            return Err(Error::Domain {
                what: "rate",
                value: r.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(match *self {
            UtilityFunction::Sigmoidal { a, b } => {
                a / (a * r).exp_m1() + a / (T::one() + (a * (r - b)).exp())
            }
            UtilityFunction::Logarithmic { k, r_max: _ } => {
                k / ((T::one() + k * r) * (k * r).ln_1p())
            }
        })
    }

    /// Rate at which the log-slope equals the price `p`, capped at
    /// [`RATE_CAP`]. This is the UE's best response `argmax ln U(r) - p r`.
    pub fn inverse_slope(&self, p: T) -> Result<T> {
        self.inverse_slope_capped(p, T::lit(RATE_CAP))
    }

    /// [`inverse_slope`](Self::inverse_slope) with an explicit cap.
    pub fn inverse_slope_capped(&self, p: T, cap: T) -> Result<T> {
        positive("price", p)?;
        positive("rate cap", cap)?;
        let mut lo = T::lit(BRACKET_LO);
        let mut hi = cap;
        if hi <= lo || self.log_slope(hi)? >= p {
            return Ok(hi);
        }
        let width = T::lit(BISECTION_WIDTH);
        let two = T::lit(2.0);
        for _ in 0..BISECTION_MAX_ITERS {
            if hi - lo <= width {
                break;
            }
            let mid = (lo + hi) / two;
            if mid <= lo || mid >= hi {
                // precision of T exhausted
                break;
            }
            if self.log_slope(mid)? > p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok((lo + hi) / two)
    }
}
