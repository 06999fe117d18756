use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// Unevaluated sum `hi + lo` with |lo| <= ulp(hi)/2, giving ~106 bits of
/// mantissa. Enough for the alternating binomial sums at the sizes we allow.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const ZERO: DoubleDouble = DoubleDouble { hi: 0.0, lo: 0.0 };
    pub const ONE: DoubleDouble = DoubleDouble { hi: 1.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }

    /// Exact for every value below 2^106.
    pub fn from_u128(x: u128) -> Self {
        let hi = x as f64;
        // `hi` may round up past `x`, so compute the residual in signed arithmetic.
        let hi_int = hi as u128;
        let lo = if hi_int >= x {
            -((hi_int - x) as f64)
        } else {
            (x - hi_int) as f64
        };
        let (hi, lo) = quick_two_sum(hi, lo);
        DoubleDouble { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (hi, lo) = quick_two_sum(p, e);
        DoubleDouble { hi, lo }
    }

    /// Exact product of two doubles.
    pub fn product(a: f64, b: f64) -> Self {
        let (hi, lo) = two_prod(a, b);
        DoubleDouble { hi, lo }
    }

    pub fn div_dd(self, b: DoubleDouble) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        DoubleDouble { hi, lo } + q3
    }

    pub fn div_f64(self, b: f64) -> Self {
        let q1 = self.hi / b;
        // r = self - q1 * b
        let r = self - DoubleDouble::from_f64(b).mul_f64(q1);
        let q2 = r.hi / b;
        let r = r - DoubleDouble::from_f64(b).mul_f64(q2);
        let q3 = r.hi / b;
        let (hi, lo) = quick_two_sum(q1, q2);
        DoubleDouble { hi, lo } + q3
    }

    /// `exp` to roughly double-double accuracy. Arguments below -700 fall back to f64.
    pub fn exp(self) -> Self {
        const LN2: DoubleDouble = DoubleDouble { hi: std::f64::consts::LN_2, lo: 2.319_046_813_846_299_6e-17 };
        if self.hi > 709.0 {
            return DoubleDouble::from_f64(f64::INFINITY);
        }
        if self.hi < -700.0 {
            return DoubleDouble::from_f64(self.to_f64().exp());
        }
        let k = (self.hi / LN2.hi).round();
        let r = self - LN2.mul_f64(k);
        let s = r.mul_f64(1.0 / 1024.0);
        // expm1(s) by Horner; |s| < 3.4e-4 so 12 terms are plenty
        let mut e = DoubleDouble::ONE;
        for j in (1..=12).rev() {
            e = (s * e).div_f64(j as f64) + 1.0;
        }
        let mut m1 = e - DoubleDouble::ONE;
        for _ in 0..10 {
            m1 = m1.mul_f64(2.0) + m1 * m1;
        }
        let scale = 2f64.powi(k as i32);
        let y = m1 + 1.0;
        DoubleDouble { hi: y.hi * scale, lo: y.lo * scale }
    }
}

impl Add for DoubleDouble {
    type Output = DoubleDouble;
    fn add(self, b: DoubleDouble) -> DoubleDouble {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        DoubleDouble { hi, lo }
    }
}

impl Add<f64> for DoubleDouble {
    type Output = DoubleDouble;
    fn add(self, b: f64) -> DoubleDouble {
        let (s, e) = two_sum(self.hi, b);
        let (hi, lo) = quick_two_sum(s, e + self.lo);
        DoubleDouble { hi, lo }
    }
}

impl AddAssign for DoubleDouble {
    fn add_assign(&mut self, b: DoubleDouble) {
        *self = *self + b;
    }
}

impl Neg for DoubleDouble {
    type Output = DoubleDouble;
    fn neg(self) -> DoubleDouble {
        DoubleDouble { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for DoubleDouble {
    type Output = DoubleDouble;
    fn sub(self, b: DoubleDouble) -> DoubleDouble {
        self + (-b)
    }
}

impl Mul for DoubleDouble {
    type Output = DoubleDouble;
    fn mul(self, b: DoubleDouble) -> DoubleDouble {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        DoubleDouble { hi, lo }
    }
}
