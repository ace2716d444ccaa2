use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;

fn binomial(n: usize, k: usize) -> BigUint {
    (0..k).fold(BigUint::one(), |acc, i| {
        acc * BigUint::from(n - i) / BigUint::from(i + 1)
    })
}

/// Sphere-packing bound on the number of messages a feedback strategy can
/// carry over the Z-channel with `t` errors in `n` symbols:
/// `sum_{i<=t} C(n,i) q^(n-i) / sum_{i<=t} C(n,i)`, exact.
pub fn m_upper(n: usize, t: usize, q: usize) -> BigRational {
    assert!(t <= n, "m_upper needs t <= n");
    let q = BigUint::from(q);
    let mut num = BigUint::from(0u32);
    let mut den = BigUint::from(0u32);
    for i in 0..=t {
        let c = binomial(n, i);
        num += &c * q.pow((n - i) as u32);
        den += c;
    }
    BigRational::new(num.into(), den.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn ratio(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn documented_values() {
        assert_eq!(m_upper(4, 1, 2), ratio(48, 5));
        assert_eq!(m_upper(2, 1, 3), ratio(5, 1));
        for (n, q) in [(0, 2), (5, 3), (7, 4)] {
            assert_eq!(m_upper(n, 0, q), ratio((q as i64).pow(n as u32), 1));
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 3), BigUint::from(120u32));
        assert_eq!(binomial(5, 0), BigUint::one());
        assert_eq!(binomial(5, 5), BigUint::one());
    }
}
