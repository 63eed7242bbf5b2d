//! Minimal double-double arithmetic (unevaluated sums hi + lo of two f64).
//!
//! Used only where a plain f64 accumulation would lose digits to cancellation,
//! most importantly the alternating Bessel power series at moderate arguments
//! where individual terms exceed the result by many orders of magnitude.

/// Unevaluated sum `hi + lo` with |lo| <= ulp(hi)/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    Dd { hi: s, lo: err }
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> Dd {
    // requires |a| >= |b|
    let s = a + b;
    Dd {
        hi: s,
        lo: b - (s - a),
    }
}

#[inline]
fn two_prod(a: f64, b: f64) -> Dd {
    let p = a * b;
    // mul_add is a correctly rounded FMA on every Rust target.
    let err = a.mul_add(b, -p);
    Dd { hi: p, lo: err }
}

impl Dd {
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact sum of two f64 values.
    #[inline]
    pub fn from_sum(a: f64, b: f64) -> Dd {
        two_sum(a, b)
    }

    /// Exact product of two f64 values.
    #[inline]
    pub fn from_prod(a: f64, b: f64) -> Dd {
        two_prod(a, b)
    }

    #[inline]
    pub fn add(self, other: Dd) -> Dd {
        let s = two_sum(self.hi, other.hi);
        let lo = s.lo + self.lo + other.lo;
        quick_two_sum(s.hi, lo)
    }

    #[inline]
    pub fn mul(self, other: Dd) -> Dd {
        let p = two_prod(self.hi, other.hi);
        let lo = p.lo + self.hi * other.lo + self.lo * other.hi;
        quick_two_sum(p.hi, lo)
    }

    #[inline]
    pub fn mul_f64(self, x: f64) -> Dd {
        let p = two_prod(self.hi, x);
        let lo = p.lo + self.lo * x;
        quick_two_sum(p.hi, lo)
    }

    #[inline]
    pub fn div(self, other: Dd) -> Dd {
        let q1 = self.hi / other.hi;
        // r = self - q1 * other, evaluated in double-double
        let r = self.add(other.mul_f64(q1).neg());
        let q2 = r.hi / other.hi;
        quick_two_sum(q1, q2)
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_tracks_cancellation() {
        // 1 + 1e-17 is invisible in f64 but not in double-double.
        let a = Dd::ONE.add(Dd::from_f64(1e-17));
        let b = a.add(Dd::from_f64(-1.0));
        assert!((b.to_f64() - 1e-17).abs() < 1e-30);
    }

    #[test]
    fn mul_is_nearly_exact() {
        let x = Dd::from_f64(1.0 / 3.0);
        let y = x.mul_f64(3.0);
        assert!((y.to_f64() - 1.0).abs() < 1e-31);
    }

    #[test]
    fn div_inverts_mul() {
        let x = Dd::from_sum(7.0, 1e-18);
        let y = Dd::from_f64(0.37);
        let z = x.mul(y).div(y);
        assert!((z.hi - x.hi).abs() < 1e-15);
        assert!((z.to_f64() - x.to_f64()).abs() < 1e-28);
    }
}
