use num_bigint::BigUint;
use num_traits::One;
use serde::{Serialize, Serializer};
use std::fmt;

/// Group or element order. Finite values are always at least 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BigOrder {
    Finite(BigUint),
    Infinite,
    Unknown,
}

impl BigOrder {
    pub fn finite(v: impl Into<BigUint>) -> Self {
        let v = v.into();
        assert!(v >= BigUint::one(), "finite orders are positive");
        BigOrder::Finite(v)
    }

    pub fn as_finite(&self) -> Option<&BigUint> {
        match self {
            BigOrder::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.as_finite().and_then(|v| u64::try_from(v).ok())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, BigOrder::Finite(_))
    }
}

impl fmt::Display for BigOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BigOrder::Finite(v) => write!(f, "{v}"),
            BigOrder::Infinite => write!(f, "infinite"),
            BigOrder::Unknown => write!(f, "unknown"),
        }
    }
}

impl Serialize for BigOrder {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

pub fn alternating_order(n: u64) -> BigUint {
    if n < 2 {
        BigUint::one()
    } else {
        factorial(n) / 2u32
    }
}

/// |SL(n, F_p)| = p^(n(n-1)/2) · prod_{i=2..n} (p^i - 1).
pub fn sl_order(n: u32, p: u64) -> BigUint {
    let pb = BigUint::from(p);
    let mut acc = pb.pow(n * (n - 1) / 2);
    for i in 2..=n {
        acc *= pb.pow(i) - BigUint::one();
    }
    acc
}

/// |PSL(n, F_p)| = |SL(n, F_p)| / gcd(n, p - 1).
pub fn psl_order(n: u32, p: u64) -> BigUint {
    use num_integer::Integer;
    sl_order(n, p) / (n as u64).gcd(&(p - 1))
}

pub fn serialize_biguint<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_orders() {
        assert_eq!(alternating_order(5), 60u32.into());
        assert_eq!(sl_order(3, 2), 168u32.into());
        assert_eq!(sl_order(4, 2), 20160u32.into());
        assert_eq!(psl_order(2, 7), 168u32.into());
        assert_eq!(
            serde_json::to_string(&BigOrder::finite(12u32)).unwrap(),
            "\"12\""
        );
    }
}
