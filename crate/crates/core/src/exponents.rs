//! Closed-form SLE parameters and arm exponents of the critical fuzzy Potts
//! model.

use std::f64::consts::PI;

use thiserror::Error;

use crate::arm_events::{interface_count, ColorSeq};
use crate::coloring::Color;

#[derive(Debug, Error, PartialEq)]
pub enum TheoryError {
    #[error("q must lie in (0, 4], got {0}")]
    QOutOfRange(f64),
    #[error("r must lie in (0, 1), got {0}")]
    ROutOfRange(f64),
    #[error("kappa' must lie in (4, 8), got {0}")]
    KappaPrimeOutOfRange(f64),
    #[error("j must be at least 1")]
    BadIndex,
    #[error("arctangent branch produced rho_B = {rho_b} outside (-2, {upper})")]
    Branch { rho_b: f64, upper: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Setting {
    Plane,
    Halfplane,
}

/// `q`, `r` and the derived `κ′`, `κ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    pub q: f64,
    pub r: f64,
    pub kappa_prime: f64,
    pub kappa: f64,
}

impl ModelParams {
    pub fn new(q: f64, r: f64) -> Result<Self, TheoryError> {
        if !(r > 0.0 && r < 1.0) {
            return Err(TheoryError::ROutOfRange(r));
        }
        let (kappa_prime, kappa) = kappa_of(q)?;
        Ok(ModelParams {
            q,
            r,
            kappa_prime,
            kappa,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContinuumParams {
    pub rho_b: f64,
    pub rho_r: f64,
    pub rho_b_prime: f64,
    pub rho_r_prime: f64,
}

/// `(κ′, κ)` with `κ′ = 4π / arccos(−√q/2)` and `κ = 16/κ′`.
pub fn kappa_of(q: f64) -> Result<(f64, f64), TheoryError> {
    if !(q > 0.0 && q <= 4.0) {
        return Err(TheoryError::QOutOfRange(q));
    }
    let kp = 4.0 * PI / (-(q.sqrt()) / 2.0).acos();
    Ok((kp, 16.0 / kp))
}

/// The angle `θ ∈ (0, π)` with `tan θ = sin(πκ/2) / (1 + cos(πκ/2) − 1/r)`.
///
/// The principal arctangent is shifted by π whenever it is nonpositive.
pub fn theta(kappa: f64, r: f64) -> f64 {
    let s = (PI * kappa / 2.0).sin();
    let d = 1.0 + (PI * kappa / 2.0).cos() - 1.0 / r;
    let t = (s / d).atan();
    if t <= 0.0 {
        t + PI
    } else {
        t
    }
}

fn check_r(r: f64) -> Result<(), TheoryError> {
    if r > 0.0 && r < 1.0 {
        Ok(())
    } else {
        Err(TheoryError::ROutOfRange(r))
    }
}

/// `ρ_B` from `κ` and `r`, with the branch asserted.
fn rho_b(kappa: f64, r: f64) -> Result<f64, TheoryError> {
    let rho = 2.0 / PI * theta(kappa, r) - 2.0;
    let upper = kappa - 4.0;
    if rho > -2.0 && rho < upper {
        Ok(rho)
    } else {
        Err(TheoryError::Branch { rho_b: rho, upper })
    }
}

pub fn rho_block(kappa_prime: f64, r: f64) -> Result<ContinuumParams, TheoryError> {
    if !(kappa_prime > 4.0 && kappa_prime < 8.0) {
        return Err(TheoryError::KappaPrimeOutOfRange(kappa_prime));
    }
    check_r(r)?;
    let kappa = 16.0 / kappa_prime;
    let rho_b = rho_b(kappa, r)?;
    let rho_r = kappa - 6.0 - rho_b;
    Ok(ContinuumParams {
        rho_b,
        rho_r,
        rho_b_prime: -(kappa_prime / 4.0) * (rho_b + 2.0),
        rho_r_prime: -(kappa_prime / 4.0) * (rho_r + 2.0),
    })
}

/// Bulk exponent `α_{2j} = (16j² − (κ−4)²) / (8κ)`.
pub fn alpha_bulk(j: u32, kappa: f64) -> Result<f64, TheoryError> {
    if j == 0 {
        return Err(TheoryError::BadIndex);
    }
    let j = j as f64;
    Ok((16.0 * j * j - (kappa - 4.0).powi(2)) / (8.0 * kappa))
}

/// Boundary exponent `α⁺_{2j} = 2j(2j + κ/2 − 2)/κ`.
pub fn alpha_half_even(j: u32, kappa: f64) -> Result<f64, TheoryError> {
    if j == 0 {
        return Err(TheoryError::BadIndex);
    }
    let tj = 2.0 * j as f64;
    Ok(tj * (tj + kappa / 2.0 - 2.0) / kappa)
}

/// Boundary exponent `α⁺_{2j−1}(r)` for sequences starting with red.
pub fn alpha_half_odd(j: u32, kappa: f64, r: f64) -> Result<f64, TheoryError> {
    if j == 0 {
        return Err(TheoryError::BadIndex);
    }
    check_r(r)?;
    rho_b(kappa, r)?;
    let tj = 2.0 * j as f64;
    let a = 2.0 / PI * theta(kappa, r);
    Ok((tj + kappa - 4.0 - a) * (tj + (kappa - 4.0) / 2.0 - a) / kappa)
}

/// Exponent predicted for `p_τ`, or `None` where no prediction exists
/// (monochromatic sequences in the plane).
pub fn exponent_for(
    tau: &ColorSeq,
    setting: Setting,
    params: &ModelParams,
) -> Result<Option<f64>, TheoryError> {
    let (i, i_plus) = interface_count(tau);
    match setting {
        Setting::Plane => {
            if i == 0 {
                return Ok(None);
            }
            alpha_bulk((i / 2) as u32, params.kappa).map(Some)
        }
        Setting::Halfplane => {
            let j = i_plus.div_ceil(2) as u32;
            if i_plus % 2 == 0 {
                alpha_half_even(j, params.kappa).map(Some)
            } else {
                let r = if tau.first() == Color::B {
                    1.0 - params.r
                } else {
                    params.r
                };
                alpha_half_odd(j, params.kappa, r).map(Some)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn kappa_values() {
        let (kp, k) = kappa_of(2.0).unwrap();
        assert!(close(kp, 16.0 / 3.0) && close(k, 3.0));
        assert!(close(kappa_of(3.0).unwrap().1, 10.0 / 3.0));
        let (kp, k) = kappa_of(1.0).unwrap();
        assert!(close(kp, 6.0) && close(k, 8.0 / 3.0));
        assert!(kappa_of(0.0).is_err());
        assert!(kappa_of(4.5).is_err());
    }

    #[test]
    fn rho_block_at_ising_self_dual_point() {
        let c = rho_block(16.0 / 3.0, 0.5).unwrap();
        assert!(close(c.rho_b, -1.5));
        assert!(close(c.rho_r, -1.5));
        assert!(close(c.rho_b_prime, -2.0 / 3.0));
        assert!(rho_block(3.0, 0.5).is_err());
        assert!(rho_block(5.0, 1.0).is_err());
    }

    #[test]
    fn bulk_and_boundary_values() {
        assert!(close(alpha_bulk(1, 3.0).unwrap(), 5.0 / 8.0));
        assert!(close(alpha_bulk(1, 8.0 / 3.0).unwrap(), 2.0 / 3.0));
        assert!(close(alpha_bulk(2, 3.0).unwrap(), 21.0 / 8.0));
        assert!(close(alpha_half_even(1, 3.0).unwrap(), 1.0));
        assert!(close(alpha_half_even(2, 3.0).unwrap(), 14.0 / 3.0));
        assert!(close(alpha_half_odd(1, 3.0, 0.5).unwrap(), 1.0 / 6.0));
        assert_eq!(alpha_bulk(0, 3.0), Err(TheoryError::BadIndex));
    }
}
