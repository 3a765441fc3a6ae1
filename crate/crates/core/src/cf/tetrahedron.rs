//! Correlation function of the unit-edge regular tetrahedron.
//!
//! Four branches on `[0, 1/√2)`, `[1/√2, √(2/3))`, `[√(2/3), √3/2)` and
//! `[√3/2, 1]`. The first three are Laurent polynomials; the outer one adds
//! `Δ₃₄` and arctangent terms, five of which diverge as `r → 1`.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};
use std::sync::LazyLock;

use super::helpers::{delta34, raw, HelperId};
use super::laurent::Laurent;
use super::GUARD_BAND;

const SQRT_3: f64 = 1.732_050_807_568_877_2;

pub(crate) static BREAKPOINTS: LazyLock<[f64; 5]> =
    LazyLock::new(|| [0.0, 1.0 / SQRT_2, (2.0f64 / 3.0).sqrt(), SQRT_3 / 2.0, 1.0]);

struct Coefficients {
    a: Laurent,
    b: Laurent,
    c: Laurent,
    d: Laurent,
}

static COEF: LazyLock<Coefficients> = LazyLock::new(|| {
    let alpha = (1.0f64 / 3.0).acos();
    let s32 = 2f64.powf(1.5);
    let s52 = 2f64.powf(2.5);
    Coefficients {
        a: Laurent::cubic([
            1.0,
            -3.0 * 1.5f64.sqrt(),
            3.0 * (s32 + PI - alpha) / PI,
            -(6.0 + 5.0 * SQRT_3 * PI) / (s52 * PI),
        ]),
        b: Laurent {
            inv: 3.0 / s52,
            c: [
                -2.0,
                -3.0 * (SQRT_3 - 3.0) / SQRT_2,
                3.0 * (s32 - alpha - PI) / PI,
                -(6.0 - 12.0 * PI + 5.0 * SQRT_3 * PI) / (s52 * PI),
            ],
        },
        c: Laurent {
            inv: (9.0 + 8.0 * SQRT_3) / (12.0 * SQRT_2),
            c: [
                -6.0,
                3.0 * (3.0 + SQRT_3) / SQRT_2,
                3.0 * (s32 - alpha - 3.0 * PI) / PI,
                (12.0 * PI - 6.0 + SQRT_3 * PI) / (s52 * PI),
            ],
        },
        d: Laurent {
            inv: (9.0 + 8.0 * SQRT_3) / (24.0 * SQRT_2),
            c: [
                3.0,
                9.0 * (4.0 + SQRT_3) / s52,
                3.0 * (s32 - PI - alpha) / PI,
                -(3.0 - 12.0 * PI + SQRT_3 * PI) / (s32 * PI),
            ],
        },
    }
});

/// Cubic of the innermost branch.
pub(crate) fn inner_cubic() -> [f64; 4] {
    COEF.a.c
}

fn outer(r: f64) -> f64 {
    use HelperId::*;

    let near_dmax = (r - 1.0).abs() < GUARD_BAND;
    // helpers with a vanishing 1 − r² (or Δ₃₄ − 1) take their r → 1⁻ limit
    let singular = |id: HelperId, limit: f64| {
        if near_dmax {
            limit
        } else {
            raw(id, r).atan()
        }
    };
    let at = |id: HelperId| raw(id, r).atan();

    let d = delta34(r);
    let t1 = singular(T1, -FRAC_PI_2);
    let t2 = singular(T2, FRAC_PI_2);
    let t5 = singular(T5, FRAC_PI_2);
    let t9 = singular(T9, FRAC_PI_2);
    let t11 = singular(T11, -FRAC_PI_2);
    let t4 = raw(T4, r);
    let t6 = at(T6);

    let mut v = COEF.d.eval(r);
    v -= 21.0 * r * d / (2f64.powf(1.5) * PI);
    v += 9.0 / (12.0 * SQRT_2 * PI * r) * (t1 - 8.0 * SQRT_3 / 9.0 * t2);
    v += 3.0 / PI * (at(T3) - 3.0 * t4.atan() - 4.0 * (0.5 * t4).atan() + 0.5 * t5);
    v -= 3.0 * r / (SQRT_2 * PI)
        * (10.0 * d.atan() + 5.0 * SQRT_3 * (SQRT_3 * d).atan() + t5 - 6.0 * SQRT_3 * t6
            + 0.5 * SQRT_3 * at(T7));
    v += 6.0 * r * r / PI * (at(T8) + t9);
    v -= 3.0 * r * r * r / (2.0 * PI)
        * 1.5f64.sqrt()
        * (t2 - t6 + 2.0 * at(T10) - 8.0 / SQRT_3 * t11);
    v
}

/// Branch `piece` (0-based) evaluated at `r`, without range checks.
pub(crate) fn eval_piece(piece: usize, r: f64) -> f64 {
    match piece {
        0 => COEF.a.eval(r),
        1 => COEF.b.eval(r),
        2 => COEF.c.eval(r),
        3 => outer(r),
        _ => 0.0,
    }
}
