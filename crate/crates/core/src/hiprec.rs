//! Binary fixed-point reals with 192 fractional bits, enough to evaluate the
//! logarithmic and exponential thresholds far below a `1e-9` margin.

use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub const FRAC_BITS: u32 = 192;

/// `value = raw / 2^FRAC_BITS`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fixed(BigInt);

fn one_raw() -> BigInt {
    BigInt::one() << FRAC_BITS
}

impl Fixed {
    pub fn zero() -> Self {
        Fixed(BigInt::zero())
    }

    pub fn one() -> Self {
        Fixed(one_raw())
    }

    pub fn from_int(v: i64) -> Self {
        Fixed(BigInt::from(v) << FRAC_BITS)
    }

    /// Nearest value below `q` on the fixed-point grid.
    pub fn from_ratio(q: &BigRational) -> Self {
        let scaled = q.numer() << FRAC_BITS;
        Fixed(num_integer::Integer::div_floor(&scaled, q.denom()))
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        Self::from_ratio(&BigRational::new(num.into(), den.into()))
    }

    /// Exact for every finite `f64` whose lowest set bit lies within the grid.
    pub fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(|q| Self::from_ratio(&q))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-(FRAC_BITS as i32))
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn abs(&self) -> Self {
        Fixed(self.0.abs())
    }

    fn shifted(&self, k: i64) -> Self {
        if k >= 0 {
            Fixed(&self.0 << k as u64)
        } else {
            Fixed(&self.0 >> (-k) as u64)
        }
    }

    pub fn ln2() -> Self {
        static LN2: OnceLock<Fixed> = OnceLock::new();
        LN2.get_or_init(|| atanh_series(&Fixed::from_frac(1, 3)).shifted(1))
            .clone()
    }

    /// `e`.
    pub fn e() -> Self {
        Fixed::one().exp()
    }

    /// Natural logarithm. Panics on a non-positive argument.
    pub fn ln(&self) -> Self {
        assert!(self.is_positive(), "ln of a non-positive value");
        // self = m * 2^k with m in [1, 2).
        let k = self.0.bits() as i64 - 1 - FRAC_BITS as i64;
        let m = self.shifted(-k);
        let z = &(&m - &Fixed::one()) / &(&m + &Fixed::one());
        &atanh_series(&z).shifted(1) + &(&Fixed::ln2() * &Fixed::from_int(k))
    }

    pub fn exp(&self) -> Self {
        let ln2 = Fixed::ln2();
        let k = (self / &ln2).round();
        let t = self - &(&ln2 * &Fixed::from_int(k));
        // Halve eight times, sum the Taylor series, square back.
        let t = t.shifted(-8);
        let mut sum = Fixed::one();
        let mut term = Fixed::one();
        for i in 1i64.. {
            term = &(&term * &t) / &Fixed::from_int(i);
            if term.0.is_zero() {
                break;
            }
            sum = &sum + &term;
        }
        for _ in 0..8 {
            sum = &sum * &sum;
        }
        sum.shifted(k)
    }

    /// Square root. Panics on a negative argument.
    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "sqrt of a negative value");
        Fixed((&self.0 << FRAC_BITS).sqrt())
    }

    /// Nearest integer, halves away from zero.
    pub fn round(&self) -> i64 {
        let half = BigInt::one() << (FRAC_BITS - 1);
        let v = if self.0.sign() == Sign::Minus {
            &self.0 - &half
        } else {
            &self.0 + &half
        };
        let q = if v.sign() == Sign::Minus {
            -((-v) >> FRAC_BITS)
        } else {
            v >> FRAC_BITS
        };
        q.to_i64().expect("rounded value fits i64")
    }

    /// `1e-9`, the tolerance used to refuse borderline threshold comparisons.
    pub fn margin() -> Self {
        Fixed::from_frac(1, 1_000_000_000)
    }

    /// `Greater` only when `self` exceeds `other` by at least the margin,
    /// `Less` only when it falls short by at least the margin.
    pub fn cmp_with_margin(&self, other: &Fixed) -> Ordering {
        let diff = self - other;
        if diff >= Fixed::margin() {
            Ordering::Greater
        } else if -&diff >= Fixed::margin() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
}

/// `atanh(z) = z + z^3/3 + z^5/5 + ...` for `|z| <= 1/3`.
fn atanh_series(z: &Fixed) -> Fixed {
    let z2 = z * z;
    let mut power = z.clone();
    let mut sum = Fixed::zero();
    for i in (1i64..).step_by(2) {
        let term = &power / &Fixed::from_int(i);
        if term.0.is_zero() {
            break;
        }
        sum = &sum + &term;
        power = &power * &z2;
    }
    sum
}

impl Add for &Fixed {
    type Output = Fixed;
    fn add(self, rhs: &Fixed) -> Fixed {
        Fixed(&self.0 + &rhs.0)
    }
}

impl Sub for &Fixed {
    type Output = Fixed;
    fn sub(self, rhs: &Fixed) -> Fixed {
        Fixed(&self.0 - &rhs.0)
    }
}

impl Mul for &Fixed {
    type Output = Fixed;
    fn mul(self, rhs: &Fixed) -> Fixed {
        Fixed((&self.0 * &rhs.0) >> FRAC_BITS)
    }
}

impl Div for &Fixed {
    type Output = Fixed;
    fn div(self, rhs: &Fixed) -> Fixed {
        Fixed((&self.0 << FRAC_BITS) / &rhs.0)
    }
}

impl Neg for &Fixed {
    type Output = Fixed;
    fn neg(self) -> Fixed {
        Fixed(-&self.0)
    }
}
