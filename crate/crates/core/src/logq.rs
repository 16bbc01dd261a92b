//! Base-q logarithmic reporting for quantities too large (or too small) to
//! materialize, plus exact decimal rendering of rationals.
//!
//! A [`LogQValue`] carries a float exponent in the log_q domain, computed
//! from exact big integers (bit length plus a top-bits correction), and an
//! exact rational exponent whenever the value is a perfect rational power of
//! q. Comparisons go through exponents, never through materialized values.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;

/// A positive quantity reported as `q^exponent`.
#[derive(Clone, Debug)]
pub struct LogQValue {
    pub q: u64,
    pub exponent: f64,
    /// Present when the value is exactly `q` to this rational power.
    pub exact: Option<BigRational>,
}

impl LogQValue {
    pub fn from_exact(q: u64, exponent: BigRational) -> Self {
        let approx = exponent.to_f64().expect("small rational exponent");
        LogQValue { q, exponent: approx, exact: Some(exponent) }
    }

    /// `log_q(num/den)` from exact integers.
    pub fn from_count_ratio(q: u64, num: &BigUint, den: &BigUint) -> Self {
        let exponent = (log2_biguint(num) - log2_biguint(den)) / (q as f64).log2();
        LogQValue { q, exponent, exact: None }
    }

    pub fn from_count(q: u64, value: &BigUint) -> Self {
        LogQValue { q, exponent: log2_biguint(value) / (q as f64).log2(), exact: None }
    }

    /// Whether the represented value exceeds 1 (useless as a probability bound).
    pub fn is_vacuous(&self) -> bool {
        match &self.exact {
            Some(e) => e.numer().sign() == num_bigint::Sign::Plus,
            None => self.exponent > 0.0,
        }
    }
}

impl std::fmt::Display for LogQValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}^{:.12}", self.q, self.exponent)
    }
}

/// `log2` of a positive big integer, exact to f64 precision: the bit length
/// fixes the integer part and the top 53 bits give the correction.
pub fn log2_biguint(v: &BigUint) -> f64 {
    assert!(!num_traits::Zero::is_zero(v), "log of zero");
    let bits = v.bits();
    if bits <= 53 {
        return (v.to_u64().unwrap() as f64).log2();
    }
    let shift = bits - 53;
    let top = (v >> shift).to_u64().unwrap() as f64;
    top.log2() + shift as f64
}

/// Decimal rendering of an exact rational with a fixed number of fractional
/// digits, rounded half away from zero. Never scientific notation.
pub fn decimal_string(r: &BigRational, digits: u32) -> String {
    let negative = r.numer().sign() == num_bigint::Sign::Minus;
    let num = r.numer().magnitude().clone();
    let den = r.denom().magnitude().clone();
    let scale = BigUint::from(10u32).pow(digits);
    // round(num * scale / den), half away from zero
    let scaled = (&num * &scale * 2u32 + &den) / (&den * 2u32);
    let int_part = &scaled / &scale;
    let frac_part = &scaled % &scale;
    let mut s = String::new();
    if negative && !num_traits::Zero::is_zero(&scaled) {
        s.push('-');
    }
    s.push_str(&int_part.to_string());
    if digits > 0 {
        let frac = frac_part.to_string();
        s.push('.');
        for _ in 0..(digits as usize - frac.len()) {
            s.push('0');
        }
        s.push_str(&frac);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn log2_of_powers_is_exact() {
        for k in [1u32, 8, 53, 64, 100, 2048] {
            let v = BigUint::from(1u32) << k;
            assert_eq!(log2_biguint(&v), k as f64);
        }
    }

    #[test]
    fn log2_accuracy_on_products() {
        // 3^200: compare against 200*log2(3) within f64 tolerance
        let v = BigUint::from(3u32).pow(200);
        let expect = 200.0 * 3f64.log2();
        assert!((log2_biguint(&v) - expect).abs() < 1e-9);
    }

    #[test]
    fn display_format() {
        let l = LogQValue::from_exact(2, BigRational::new(BigInt::from(-55), BigInt::from(2)));
        assert_eq!(l.to_string(), "2^-27.500000000000");
        assert!(!l.is_vacuous());
        let v = LogQValue::from_exact(2, BigRational::from(BigInt::from(3)));
        assert!(v.is_vacuous());
    }

    #[test]
    fn decimal_rendering() {
        let r = BigRational::new(BigInt::from(1), BigInt::from(3));
        assert_eq!(decimal_string(&r, 6), "0.333333");
        let r = BigRational::new(BigInt::from(45), BigInt::from(4));
        assert_eq!(decimal_string(&r, 4), "11.2500");
        let r = BigRational::new(BigInt::from(-1), BigInt::from(2));
        assert_eq!(decimal_string(&r, 3), "-0.500");
        let r = BigRational::new(BigInt::from(2), BigInt::from(3));
        assert_eq!(decimal_string(&r, 2), "0.67");
        let r = BigRational::from(BigInt::from(7));
        assert_eq!(decimal_string(&r, 0), "7");
    }
}
