//! Correlation function of the unit-edge regular octahedron.
//!
//! Branches on `[0, √(2/3))`, `[√(2/3), √3/2)`, `[√3/2, 1)` and `[1, √2]`.
//! The third branch is built on `Δ₃₄`, the fourth on `Δ₁₁`; `𝒯₁₇` and `𝒯₁₈`
//! diverge as `r → √2`.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};
use std::sync::LazyLock;

use super::helpers::{delta11, delta34, raw, HelperId};
use super::laurent::Laurent;
use super::GUARD_BAND;

const SQRT_3: f64 = 1.732_050_807_568_877_2;

pub(crate) static BREAKPOINTS: LazyLock<[f64; 5]> =
    LazyLock::new(|| [0.0, (2.0f64 / 3.0).sqrt(), SQRT_3 / 2.0, 1.0, SQRT_2]);

struct Coefficients {
    a: Laurent,
    b: Laurent,
    c: Laurent,
    d: Laurent,
}

static COEF: LazyLock<Coefficients> = LazyLock::new(|| {
    let alpha = (-1.0f64 / 3.0).acos();
    let s23 = (2.0f64 / 3.0).sqrt();
    let s32 = 1.5f64.sqrt();
    Coefficients {
        a: Laurent::cubic([
            1.0,
            -1.5f64.powf(1.5),
            3.0 * (alpha - PI + 2.0 * SQRT_2) / (2.0 * PI),
            -(3.0 - 3.0 * PI + SQRT_3 * PI) / (4.0 * SQRT_2 * PI),
        ]),
        b: Laurent {
            inv: 2.0 * s23,
            c: [
                -3.0,
                -0.5 * s32,
                3.0 * (alpha + PI + 2.0 * SQRT_2) / (2.0 * PI),
                -(3.0 - 3.0 * PI + 7.0 * SQRT_3 * PI) / (4.0 * SQRT_2 * PI),
            ],
        },
        c: Laurent {
            inv: 2.0 * s23,
            c: [
                -3.0,
                -0.5 * s32,
                3.0 * (alpha + 2.0 * SQRT_2) / (2.0 * PI),
                -(36.0 * (1.0 - PI) + 5.0 * SQRT_3 * PI) / (48.0 * SQRT_2 * PI),
            ],
        },
        d: Laurent {
            inv: (4.0 * SQRT_3 * PI - 3.0) / (3.0 * SQRT_2 * PI),
            c: [
                3.0,
                (4.0 * SQRT_3 * PI - 9.0) / (3.0 * SQRT_2 * PI),
                0.75,
                -(6.0 - 3.0 * PI + 4.0 * SQRT_3 * PI) / (8.0 * SQRT_2 * PI),
            ],
        },
    }
});

pub(crate) fn inner_cubic() -> [f64; 4] {
    COEF.a.c
}

fn middle_outer(r: f64) -> f64 {
    use HelperId::*;

    let at = |id: HelperId| raw(id, r).atan();
    let d = delta34(r);
    let t6 = raw(T6, r);
    let at6 = t6.atan();

    let mut v = COEF.c.eval(r);
    v -= (17.0 * r * r + 3.0) * d / (2.0 * SQRT_2 * PI * r);
    v += r / PI * 1.5f64.sqrt() * (9.0 * at6 + (3.0 * t6).atan());
    v += 3.0 * r * r / PI * (0.5 * raw(T4, r)).atan();
    v -= r * r * r / (8.0 * 6f64.sqrt() * PI)
        * (18.0 * at6 + 90.0 * (1.0 / (3.0 * t6)).atan() + 24.0 * at(T7)
            - 8.0 * at(T12)
            - at(T13)
            - 6.0 * at(T14));
    v
}

fn outer(r: f64) -> f64 {
    use HelperId::*;

    let near_dmax = (r - SQRT_2).abs() < GUARD_BAND;
    // r² − 2 → 0⁻ drives both to −∞
    let singular = |id: HelperId| {
        if near_dmax {
            -FRAC_PI_2
        } else {
            raw(id, r).atan()
        }
    };
    let s6 = 6f64.sqrt();
    let d = delta11(r);
    let t15 = raw(T15, r).atan();

    let mut v = COEF.d.eval(r);
    v += SQRT_2 / (PI * r) * (1.0 + 2.0 * r * r) * d;
    v -= 2.0 * s6 / (PI * r) * t15;
    v -= 12.0 / PI * raw(T16, r).atan();
    v -= 2.0 * s6 * r / PI * t15;
    v += 3.0 * r * r / (2.0 * PI) * singular(T17);
    v -=
        r * r * r / (2.0 * SQRT_2 * PI) * (2.0 * SQRT_3 * singular(T18) + 3.0 * raw(T19, r).atan());
    v
}

pub(crate) fn eval_piece(piece: usize, r: f64) -> f64 {
    match piece {
        0 => COEF.a.eval(r),
        1 => COEF.b.eval(r),
        2 => middle_outer(r),
        3 => outer(r),
        _ => 0.0,
    }
}
