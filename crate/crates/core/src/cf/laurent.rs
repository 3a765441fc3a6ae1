/// `a₋₁/r + a₀ + a₁r + a₂r² + a₃r³`, the algebraic backbone shared by every branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Laurent {
    pub inv: f64,
    pub c: [f64; 4],
}

impl Laurent {
    pub const fn cubic(c: [f64; 4]) -> Self {
        Laurent { inv: 0.0, c }
    }

    #[inline]
    pub fn eval(&self, r: f64) -> f64 {
        let poly = self.c[0] + r * (self.c[1] + r * (self.c[2] + r * self.c[3]));
        if self.inv == 0.0 {
            poly
        } else {
            poly + self.inv / r
        }
    }
}
