//! Exact scalar types and small helpers around them.

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Complex number with rational real and imaginary parts.
pub type Gaussian = Complex<Rational>;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn gauss(re: Rational, im: Rational) -> Gaussian {
    Complex::new(re, im)
}

/// The imaginary unit.
pub fn imag_unit() -> Gaussian {
    Complex::new(Rational::zero(), Rational::one())
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn format_gaussian(g: &Gaussian) -> String {
    if g.im.is_zero() {
        return format_rational(&g.re);
    }
    let im = if g.im.is_one() {
        "i".to_string()
    } else if (-g.im.clone()).is_one() {
        "-i".to_string()
    } else {
        format!("{}i", format_rational(&g.im))
    };
    if g.re.is_zero() {
        im
    } else if im.starts_with('-') {
        format!("{}{}", format_rational(&g.re), im)
    } else {
        format!("{}+{}", format_rational(&g.re), im)
    }
}

/// Decimal rendering with at most `digits` fractional digits (round half away
/// from zero), trailing zeros trimmed. Terminating expansions that fit are exact.
pub fn decimal_string(r: &Rational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = r * Rational::from_integer(scale.clone());
    let rounded = scaled.round().to_integer();
    let negative = rounded.is_negative();
    let abs = rounded.abs();
    let (whole, frac) = abs.div_rem(&scale);
    let mut frac_str = format!("{:0>width$}", frac.to_string(), width = digits as usize);
    while frac_str.ends_with('0') {
        frac_str.pop();
    }
    let sign = if negative { "-" } else { "" };
    if frac_str.is_empty() {
        format!("{sign}{whole}")
    } else {
        format!("{sign}{whole}.{frac_str}")
    }
}

/// Parse `"3"`, `"-1/2"` or a terminating decimal such as `"0.25"`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        return (!d.is_zero()).then(|| Rational::new(n, d));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        let magnitude = Rational::new(
            digits.parse().ok()?,
            BigInt::from(10u32).pow(frac.len() as u32),
        );
        return Some(if negative { -magnitude } else { magnitude });
    }
    text.parse::<BigInt>().ok().map(Rational::from_integer)
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Inverse of `value` modulo `modulus`, if it exists.
pub fn mod_inverse(value: u64, modulus: u64) -> Option<u64> {
    let g = (value as i128).extended_gcd(&(modulus as i128));
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.rem_euclid(modulus as i128) as u64)
}

/// Reduce a rational to a residue modulo `modulus` when its denominator is invertible.
pub fn rational_to_residue(r: &Rational, modulus: u64) -> Option<u64> {
    let m = BigInt::from(modulus);
    let num = r.numer().mod_floor(&m).to_u64()?;
    let den = r.denom().mod_floor(&m).to_u64()?;
    let inv = mod_inverse(den, modulus)?;
    Some(((num as u128 * inv as u128) % modulus as u128) as u64)
}

/// 64-bit mixing of a base seed with a label; stable across platforms and builds.
pub fn sub_seed(seed: u64, label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in label.as_bytes() {
        h ^= u64::from(*byte);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    let mut z = h ^ seed.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_are_canonical() {
        assert_eq!(rat(2, 4), rat(1, 2));
        assert_eq!(rat(1, -2), rat(-1, 2));
        assert!(rat(-1, 2).denom() > &BigInt::zero());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal_string(&rat(1, 2), 12), "0.5");
        assert_eq!(decimal_string(&rat(-3, 4), 12), "-0.75");
        assert_eq!(decimal_string(&rat(1, 3), 4), "0.3333");
        assert_eq!(decimal_string(&rat(2, 3), 4), "0.6667");
        assert_eq!(decimal_string(&int(7), 12), "7");
        assert_eq!(decimal_string(&rat(-1, 3), 2), "-0.33");
    }

    #[test]
    fn gaussian_formatting() {
        assert_eq!(format_gaussian(&gauss(rat(3, 20), int(0))), "3/20");
        assert_eq!(format_gaussian(&gauss(int(1), int(2))), "1+2i");
        assert_eq!(format_gaussian(&gauss(int(0), int(-1))), "-i");
        assert_eq!(format_gaussian(&gauss(rat(1, 2), rat(-1, 3))), "1/2-1/3i");
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_rational("-1/2"), Some(rat(-1, 2)));
        assert_eq!(parse_rational("0.25"), Some(rat(1, 4)));
        assert_eq!(parse_rational("-0.5"), Some(rat(-1, 2)));
        assert_eq!(parse_rational("7"), Some(int(7)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn residues() {
        assert_eq!(mod_inverse(2, 3), Some(2));
        assert_eq!(mod_inverse(2, 4), None);
        assert_eq!(rational_to_residue(&rat(1, 2), 5), Some(3));
        assert_eq!(rational_to_residue(&rat(-1, 1), 3), Some(2));
    }

    #[test]
    fn sub_seeds_differ_by_label() {
        assert_ne!(sub_seed(0, "A7"), sub_seed(0, "A8"));
        assert_eq!(sub_seed(9, "X5"), sub_seed(9, "X5"));
    }
}
