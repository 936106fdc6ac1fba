//! Binomial coefficients with the toolkit-wide boundary convention:
//! `C(a, b) = 0` when `a < 0`, `b < 0` or `b > a`, and `C(a, 0) = 1` for `a >= 0`.

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Arbitrary-precision count.
pub type BigCount = BigUint;

pub fn binom(a: i64, b: i64) -> BigCount {
    if a < 0 || b < 0 || b > a {
        return BigUint::zero();
    }
    let b = b.min(a - b) as u64;
    let a = a as u64;
    let mut acc = BigUint::one();
    for i in 0..b {
        // acc == C(a - b + i + 1, i + 1) afterwards, so the division is exact.
        acc *= a - b + i + 1;
        acc /= i + 1;
    }
    acc
}

/// Serializes a count as a JSON number when it fits in `u64`, otherwise as a
/// decimal string.
pub fn serialize_count<S: serde::Serializer>(value: &BigCount, serializer: S) -> Result<S::Ok, S::Error> {
    match u64::try_from(value) {
        Ok(x) => serializer.serialize_u64(x),
        Err(_) => serializer.serialize_str(&value.to_str_radix(10)),
    }
}

/// [`serialize_count`] applied to every value of a map.
pub fn serialize_count_map<K, S>(
    map: &std::collections::BTreeMap<K, BigCount>,
    serializer: S,
) -> Result<S::Ok, S::Error>
where
    K: serde::Serialize,
    S: serde::Serializer,
{
    use serde::ser::SerializeMap;
    struct Count<'a>(&'a BigCount);
    impl serde::Serialize for Count<'_> {
        fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            serialize_count(self.0, s)
        }
    }
    let mut out = serializer.serialize_map(Some(map.len()))?;
    for (k, v) in map {
        out.serialize_entry(k, &Count(v))?;
    }
    out.end()
}

/// `C(a, b)` in `u128`, `None` on overflow.
pub fn binom_u128(a: i64, b: i64) -> Option<u128> {
    if a < 0 || b < 0 || b > a {
        return Some(0);
    }
    let b = b.min(a - b) as u128;
    let a = a as u128;
    let mut acc: u128 = 1;
    for i in 0..b {
        let g = num_integer::gcd(acc, i + 1);
        let num = (a - b + i + 1) / ((i + 1) / g);
        acc = (acc / g).checked_mul(num)?;
    }
    Some(acc)
}
