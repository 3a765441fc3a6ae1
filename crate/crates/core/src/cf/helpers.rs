//! Algebraic building blocks of the outer CF branches.
//!
//! Every helper is a rational function of `r` and one square root, either
//! `Δ₃₄(r) = √(4r² − 3)` (real for `r ≥ √3/2`) or `Δ₁₁(r) = √(r² − 1)`
//! (real for `r ≥ 1`). The branch formulas only ever use them inside
//! `arctan`, so [`raw`] follows IEEE semantics and may return `±∞` where a
//! denominator vanishes exactly; [`eval_helper`] is the checked entry point.

use std::fmt;

use crate::error::{Error, Result};

const SQRT_2: f64 = std::f64::consts::SQRT_2;
const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// How far below zero a square-root argument may fall through rounding
/// before it is treated as a genuine domain violation.
pub const SQRT_CLAMP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HelperId {
    Delta34,
    Delta11,
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
    T7,
    T8,
    T9,
    T10,
    T11,
    T12,
    T13,
    T14,
    T15,
    T16,
    T17,
    T18,
    T19,
}

impl HelperId {
    /// `𝒯ₙ` for `n` in `1..=19`.
    pub fn tau(n: u8) -> Option<HelperId> {
        use HelperId::*;
        const TAUS: [HelperId; 19] = [
            T1, T2, T3, T4, T5, T6, T7, T8, T9, T10, T11, T12, T13, T14, T15, T16, T17, T18, T19,
        ];
        n.checked_sub(1).and_then(|i| TAUS.get(i as usize)).copied()
    }

    /// Square root the helper is built on.
    pub fn root(self) -> HelperId {
        use HelperId::*;
        match self {
            Delta11 | T15 | T16 | T17 | T18 | T19 => Delta11,
            _ => Delta34,
        }
    }
}

impl fmt::Display for HelperId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HelperId::Delta34 => f.write_str("Δ34"),
            HelperId::Delta11 => f.write_str("Δ11"),
            other => write!(f, "{other:?}"),
        }
    }
}

fn clamped_sqrt(arg: f64) -> Option<f64> {
    if arg >= 0.0 {
        Some(arg.sqrt())
    } else if arg >= -SQRT_CLAMP {
        Some(0.0)
    } else {
        None
    }
}

pub(crate) fn delta34(r: f64) -> f64 {
    clamped_sqrt(4.0 * r * r - 3.0).unwrap_or(f64::NAN)
}

pub(crate) fn delta11(r: f64) -> f64 {
    clamped_sqrt(r * r - 1.0).unwrap_or(f64::NAN)
}

/// Numerator and denominator of a helper; `None` outside the root's domain.
fn parts(id: HelperId, r: f64) -> Option<(f64, f64)> {
    use HelperId::*;
    let r2 = r * r;
    let r4 = r2 * r2;
    let d = match id.root() {
        Delta34 => clamped_sqrt(4.0 * r2 - 3.0)?,
        _ => clamped_sqrt(r2 - 1.0)?,
    };
    let one_m_r2 = 1.0 - r2;
    Some(match id {
        Delta34 | Delta11 => (d, 1.0),
        T1 => (4.0 * r4 - 12.0 * r2 + 7.0, 4.0 * one_m_r2 * d),
        T2 => (9.0 * r2 - 7.0, 3.0 * SQRT_3 * one_m_r2 * d),
        T3 => (2.0 * SQRT_2 * r + 3.0, d),
        T4 => (SQRT_2 * r, d),
        T5 => (d, 2.0 * one_m_r2),
        T6 => (d, SQRT_3),
        T7 => (6.0 * r2 - 5.0, SQRT_3 * d),
        T8 => (r * (6.0 * r2 - 5.0), SQRT_2 * d),
        T9 => (2.0 * r4 + r2 - 2.0, 2.0 * SQRT_2 * r * one_m_r2 * d),
        T10 => (SQRT_3 * d, 2.0 * r2 - 3.0),
        T11 => (d + 1.0, d - 1.0),
        T12 => (2.0 * r2 - 3.0, SQRT_3 * d),
        T13 => (-2.0 * r4 + 12.0 * r2 - 9.0, SQRT_3 * (2.0 * r2 - 3.0) * d),
        T14 => {
            let r6 = r4 * r2;
            let r8 = r4 * r4;
            (
                SQRT_3 * (2.0 * r8 - 34.0 * r6 + 96.0 * r4 - 90.0 * r2 + 27.0),
                (10.0 * r6 - 54.0 * r4 + 72.0 * r2 - 27.0) * d,
            )
        }
        T15 => (SQRT_3 * d, 1.0),
        T16 => (r, SQRT_2 * d),
        T17 => (7.0 * r4 - 4.0 * r2 - 4.0, 4.0 * SQRT_2 * r * (r2 - 2.0) * d),
        T18 => (9.0 * r2 - 10.0, 3.0 * SQRT_3 * (r2 - 2.0) * d),
        T19 => (r2 + 2.0 * d - 2.0, 2.0 - r2 + 2.0 * d),
    })
}

/// Unchecked helper value: `±∞` where a denominator is exactly zero, NaN
/// outside the square root's domain.
#[inline]
pub(crate) fn raw(id: HelperId, r: f64) -> f64 {
    match parts(id, r) {
        Some((num, den)) => num / den,
        None => f64::NAN,
    }
}

/// Evaluates `Δ₃₄`, `Δ₁₁` or `𝒯₁ … 𝒯₁₉` at `r`.
///
/// Fails with [`Error::HelperDomain`] when the square root is not real or
/// a denominator vanishes.
pub fn eval_helper(id: HelperId, r: f64) -> Result<f64> {
    let err = Error::HelperDomain { id, r };
    if !r.is_finite() || r < 0.0 {
        return Err(err);
    }
    let (num, den) = parts(id, r).ok_or(err.clone())?;
    if den == 0.0 {
        return Err(err);
    }
    let value = num / den;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(err)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_index_round_trip() {
        assert_eq!(HelperId::tau(1), Some(HelperId::T1));
        assert_eq!(HelperId::tau(19), Some(HelperId::T19));
        assert_eq!(HelperId::tau(0), None);
        assert_eq!(HelperId::tau(20), None);
    }

    #[test]
    fn documented_values() {
        assert_eq!(eval_helper(HelperId::Delta34, 1.0).unwrap(), 1.0);
        assert!((eval_helper(HelperId::Delta11, SQRT_2).unwrap() - 1.0).abs() < 1e-15);
        assert!((eval_helper(HelperId::T4, 1.0).unwrap() - SQRT_2).abs() < 1e-15);
        // (2 + 2·1 − 2) / (2 − 2 + 2·1)
        assert!((eval_helper(HelperId::T19, SQRT_2).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn breakpoint_root_is_exactly_zero() {
        assert_eq!(
            eval_helper(HelperId::Delta34, 3f64.sqrt() / 2.0).unwrap(),
            0.0
        );
        assert_eq!(eval_helper(HelperId::Delta11, 1.0).unwrap(), 0.0);
        assert_eq!(eval_helper(HelperId::T6, 3f64.sqrt() / 2.0).unwrap(), 0.0);
    }

    #[test]
    fn outside_domain_carries_id() {
        assert_eq!(
            eval_helper(HelperId::Delta34, 0.5),
            Err(Error::HelperDomain {
                id: HelperId::Delta34,
                r: 0.5
            })
        );
        assert!(matches!(
            eval_helper(HelperId::T16, 0.99),
            Err(Error::HelperDomain {
                id: HelperId::T16,
                ..
            })
        ));
    }

    #[test]
    fn singular_points_are_errors_or_huge() {
        // Irrational roots are not representable, so the denominator may
        // round to an ulp instead of zero.
        let singular = |id: HelperId, r: f64| {
            if let Ok(v) = eval_helper(id, r) {
                assert!(v.abs() > 1e10, "{id} at {r}: {v}");
            }
        };
        for id in [
            HelperId::T1,
            HelperId::T2,
            HelperId::T5,
            HelperId::T9,
            HelperId::T11,
        ] {
            assert!(eval_helper(id, 1.0).is_err(), "{id}");
        }
        for id in [HelperId::T17, HelperId::T18] {
            singular(id, SQRT_2);
        }
        let b = 3f64.sqrt() / 2.0;
        for id in [
            HelperId::T1,
            HelperId::T4,
            HelperId::T7,
            HelperId::T12,
            HelperId::T13,
        ] {
            singular(id, b);
        }
        singular(HelperId::T10, 1.5f64.sqrt());
    }

    #[test]
    fn raw_values_diverge_with_limit_signs() {
        let b = 3f64.sqrt() / 2.0;
        assert_eq!(raw(HelperId::T4, b), f64::INFINITY);
        assert_eq!(raw(HelperId::T7, b), f64::NEG_INFINITY);
        assert_eq!(raw(HelperId::T11, b), -1.0);
        assert_eq!(raw(HelperId::T16, 1.0), f64::INFINITY);
        assert_eq!(raw(HelperId::T17, 1.0), f64::INFINITY);
        assert!(raw(HelperId::Delta11, 0.5).is_nan());
    }

    #[test]
    fn t14_denominator_has_no_root_on_outer_interval() {
        let lo = 3f64.sqrt() / 2.0;
        for i in 0..=1000 {
            let r = lo + (1.0 - lo) * i as f64 / 1000.0;
            let r2 = r * r;
            let poly = 10.0 * r2 * r2 * r2 - 54.0 * r2 * r2 + 72.0 * r2 - 27.0;
            assert!(poly > 0.5, "r = {r}");
        }
    }
}
