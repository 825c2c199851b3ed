use num::{BigInt, BigRational, ToPrimitive};

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Parses `p`, `p/q` or a decimal string into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((m, e)) = s.split_once(['e', 'E']) {
        let m = parse_rational(m)?;
        let e: i32 = e.parse().ok()?;
        let p = BigRational::from_integer(num::pow(BigInt::from(10), e.unsigned_abs() as usize));
        return Some(if e < 0 { m / p } else { m * p });
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d == BigInt::from(0) {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((i, f)) = s.split_once('.') {
        let neg = i.starts_with('-');
        let digits = format!("{}{}", i.trim_start_matches('-'), f);
        let n: BigInt = digits.parse().ok()?;
        let d = num::pow(BigInt::from(10), f.len());
        let r = BigRational::new(n, d);
        return Some(if neg { -r } else { r });
    }
    Some(BigRational::from_integer(s.parse().ok()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::q;

    #[test]
    fn rationals_parse() {
        assert_eq!(parse_rational("13/21"), Some(q(13, 21)));
        assert_eq!(parse_rational("3"), Some(q(3, 1)));
        assert_eq!(parse_rational("-0.25"), Some(q(-1, 4)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("1e-3"), Some(q(1, 1000)));
        assert_eq!(parse_rational("2.5E2"), Some(q(250, 1)));
        assert!((to_f64(&q(1, 3)) - 1.0 / 3.0).abs() < 1e-15);
    }
}
