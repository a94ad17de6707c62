//! Exact integer and rational arithmetic: factorization, primality,
//! residue symbols, modular square roots and p-adic valuations.
//!
//! Everything here is a pure function on immutable values; all other
//! modules build on these primitives.

use crate::error::{Error, Result};
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A nonzero integer split as `sign * prod(p_i ^ e_i)` with the primes
/// strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub sign: i8,
    pub factors: Vec<(BigInt, u32)>,
}

impl Factorization {
    /// Multiplies the factorization back out.
    pub fn value(&self) -> BigInt {
        let mut v = BigInt::from(self.sign);
        for (p, e) in &self.factors {
            v *= p.pow(*e);
        }
        v
    }

    /// The distinct primes, in increasing order.
    pub fn primes(&self) -> impl Iterator<Item = &BigInt> {
        self.factors.iter().map(|(p, _)| p)
    }

    /// True when every exponent is 1.
    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, e)| *e == 1)
    }

    /// Squarefree part of |n|: the product of primes with odd exponent.
    pub fn squarefree_part(&self) -> BigInt {
        let mut v = BigInt::one();
        for (p, e) in &self.factors {
            if e % 2 == 1 {
                v *= p;
            }
        }
        v
    }
}

/// Default factoring bound: inputs beyond this require [`factor_unbounded`].
fn default_bound() -> BigInt {
    BigInt::one() << 64
}

/// Factors `n` (trial division below 10^6, then Pollard rho with
/// Miller-Rabin certification). Rejects |n| >= 2^64; callers that really
/// want to wait can use [`factor_unbounded`].
pub fn factor(n: &BigInt) -> Result<Factorization> {
    if n.abs() >= default_bound() {
        return Err(Error::FactorBoundExceeded(n.clone()));
    }
    factor_unbounded(n)
}

/// Factors `n` with no size guard.
pub fn factor_unbounded(n: &BigInt) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    let sign: i8 = if n.sign() == Sign::Minus { -1 } else { 1 };
    let mut m = n.abs();
    let mut factors: Vec<(BigInt, u32)> = Vec::new();

    let push = |p: BigInt, e: u32, factors: &mut Vec<(BigInt, u32)>| {
        factors.push((p, e));
    };

    // Trial division.
    let mut d = BigInt::from(2u32);
    let limit = BigInt::from(1_000_000u32);
    while &d * &d <= m && d <= limit {
        if (&m % &d).is_zero() {
            let mut e = 0u32;
            while (&m % &d).is_zero() {
                m /= &d;
                e += 1;
            }
            push(d.clone(), e, &mut factors);
        }
        d += if d == BigInt::from(2u32) { 1u32 } else { 2u32 };
    }

    if m > BigInt::one() {
        // Remaining cofactor: prime, or split it with rho.
        let mut stack = vec![m];
        let mut found: Vec<BigInt> = Vec::new();
        while let Some(c) = stack.pop() {
            if is_prime(&c) {
                found.push(c);
            } else {
                let f = pollard_rho(&c);
                stack.push(&c / &f);
                stack.push(f);
            }
        }
        found.sort();
        let mut i = 0;
        while i < found.len() {
            let mut e = 1u32;
            while i + 1 < found.len() && found[i + 1] == found[i] {
                e += 1;
                i += 1;
            }
            push(found[i].clone(), e, &mut factors);
            i += 1;
        }
    }

    factors.sort_by(|a, b| a.0.cmp(&b.0));
    let out = Factorization { sign, factors };
    debug_assert_eq!(out.value(), *n);
    Ok(out)
}

/// Miller-Rabin with the first twelve prime witnesses, deterministic for
/// n < 3.3 * 10^24; larger inputs only occur through `factor_unbounded`,
/// where a compositeness slip would be caught by the re-multiplication
/// check in callers' tests.
pub fn is_prime(n: &BigInt) -> bool {
    if *n < BigInt::from(2u32) {
        return false;
    }
    let small: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &small {
        let p = BigInt::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let one = BigInt::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for &a in &small {
        let a = BigInt::from(a);
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&BigInt::from(2u32), n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Pollard's rho (Brent variant) on an odd composite with no factor below 10^6.
fn pollard_rho(n: &BigInt) -> BigInt {
    let one = BigInt::one();
    if n.is_even() {
        return BigInt::from(2u32);
    }
    let mut c = BigInt::one();
    loop {
        let f = |x: &BigInt| (x * x + &c) % n;
        let mut x = BigInt::from(2u32);
        let mut y = BigInt::from(2u32);
        let mut d = BigInt::one();
        while d == one {
            x = f(&x);
            y = f(&f(&y));
            d = (&x - &y).abs().gcd(n);
        }
        if &d != n {
            return d;
        }
        c += 1u32;
    }
}

/// Kronecker symbol (a | n), the full extension of the Jacobi symbol to all
/// integer pairs.
pub fn kronecker(a: &BigInt, n: &BigInt) -> i32 {
    if n.is_zero() {
        return if a.abs().is_one() { 1 } else { 0 };
    }
    let mut a = a.clone();
    let mut n = n.clone();
    let mut result = 1i32;
    if n.is_negative() {
        n = -n;
        if a.is_negative() {
            result = -result;
        }
    }
    // (a | 2) factor for each power of two in n.
    let two = BigInt::from(2u32);
    while n.is_even() {
        n /= &two;
        if a.is_even() {
            return 0;
        }
        let r8 = ((&a % 8u32) + 8u32) % 8u32;
        if r8 == BigInt::from(3u32) || r8 == BigInt::from(5u32) {
            result = -result;
        }
    }
    if n.is_one() {
        return result;
    }
    a = a.mod_floor(&n);
    // Jacobi via quadratic reciprocity.
    while !a.is_zero() {
        while a.is_even() {
            a /= &two;
            let r8 = (&n % 8u32).to_u32().unwrap();
            if r8 == 3 || r8 == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32) == BigInt::from(3u32) && (&n % 4u32) == BigInt::from(3u32) {
            result = -result;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

/// Square root of `a` modulo an odd prime `p` (Tonelli-Shanks).
/// Returns `None` exactly when `a` is a nonresidue.
pub fn sqrt_mod(a: &BigInt, p: &BigInt) -> Result<Option<BigInt>> {
    let two = BigInt::from(2u32);
    if *p <= two || !is_prime(p) {
        return Err(Error::NotAnOddPrime(p.clone()));
    }
    let a = a.mod_floor(p);
    if a.is_zero() {
        return Ok(Some(BigInt::zero()));
    }
    match kronecker(&a, p) {
        -1 => return Ok(None),
        0 => unreachable!("a reduced mod p is nonzero"),
        _ => {}
    }
    let one = BigInt::one();
    if (p % 4u32) == BigInt::from(3u32) {
        let e = (p + &one) >> 2;
        let r = a.modpow(&e, p);
        return Ok(Some(r));
    }
    // Tonelli-Shanks for p = 1 mod 4.
    let p_minus_1 = p - &one;
    let s = p_minus_1.trailing_zeros().unwrap();
    let q = &p_minus_1 >> s;
    // Any nonresidue will do as the generator of the 2-Sylow part.
    let mut z = BigInt::from(2u32);
    while kronecker(&z, p) != -1 {
        z += 1u32;
    }
    let mut m = s;
    let mut c = z.modpow(&q, p);
    let mut t = a.modpow(&q, p);
    let mut r = a.modpow(&((&q + &one) >> 1), p);
    while !t.is_one() {
        let mut i = 0u64;
        let mut t2 = t.clone();
        while !t2.is_one() {
            t2 = t2.modpow(&two, p);
            i += 1;
            if i == m {
                unreachable!("input certified to be a residue");
            }
        }
        let b = c.modpow(&(BigInt::one() << (m - i - 1)), p);
        m = i;
        c = b.modpow(&two, p);
        t = (t * &c) % p;
        r = (r * b) % p;
    }
    Ok(Some(r))
}

/// p-adic valuation of a nonzero rational.
pub fn valuation(x: &BigRational, p: &BigInt) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    Ok(int_valuation(x.numer(), p) - int_valuation(x.denom(), p))
}

/// p-adic valuation of a nonzero integer.
pub fn int_valuation(n: &BigInt, p: &BigInt) -> i64 {
    debug_assert!(!n.is_zero());
    let mut v = 0i64;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

/// The prime-to-p part of a nonzero rational: `x / p^v(x)`.
pub fn unit_part(x: &BigRational, p: &BigInt) -> BigRational {
    let v = valuation(x, p).expect("nonzero");
    let pv = BigRational::from(p.clone()).pow(v as i32);
    x / pv
}

/// Exact integer square root if `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

/// Squarefree part of a nonzero integer, with sign: `n = s * t^2` with `s`
/// squarefree; returns `s`.
pub fn squarefree_part(n: &BigInt) -> Result<BigInt> {
    let f = factor(n)?;
    Ok(BigInt::from(f.sign) * f.squarefree_part())
}

/// Reduces `x` mod `m` into `[0, m)` for machine-word moduli.
pub fn residue_u64(x: &BigInt, m: u64) -> u64 {
    x.mod_floor(&BigInt::from(m)).to_u64().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(b(n), b(d))
    }

    // Small deterministic generator for the randomized invariants.
    struct Mix(u64);
    impl Mix {
        fn next(&mut self) -> u64 {
            self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
            let mut z = self.0;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
            z ^ (z >> 31)
        }
        fn int(&mut self, lo: i64, hi: i64) -> i64 {
            lo + (self.next() % (hi - lo + 1) as u64) as i64
        }
    }

    #[test]
    fn factor_small_fixed() {
        let f = factor(&b(60)).unwrap();
        assert_eq!(f.sign, 1);
        assert_eq!(f.factors, vec![(b(2), 2), (b(3), 1), (b(5), 1)]);

        let f = factor(&b(-1)).unwrap();
        assert_eq!(f.sign, -1);
        assert!(f.factors.is_empty());
    }

    #[test]
    fn factor_1001_matches_trial_division_oracle() {
        // Independent oracle: plain trial division with no shortcuts.
        let mut m = 1001i64;
        let mut oracle = Vec::new();
        let mut d = 2i64;
        while d * d <= m {
            while m % d == 0 {
                oracle.push(d);
                m /= d;
            }
            d += 1;
        }
        if m > 1 {
            oracle.push(m);
        }
        assert_eq!(oracle, vec![7, 11, 13]);

        let f = factor(&b(1001)).unwrap();
        assert_eq!(f.factors, vec![(b(7), 1), (b(11), 1), (b(13), 1)]);
    }

    #[test]
    fn factor_zero_and_bound() {
        assert!(matches!(factor(&b(0)), Err(Error::ZeroInput)));
        let huge = BigInt::one() << 65;
        assert!(matches!(factor(&huge), Err(Error::FactorBoundExceeded(_))));
        // Opt-in path still works on a value just past the bound.
        let f = factor_unbounded(&(BigInt::one() << 65)).unwrap();
        assert_eq!(f.factors, vec![(b(2), 65)]);
    }

    #[test]
    fn factor_roundtrip_random() {
        let mut rng = Mix(1);
        for _ in 0..300 {
            let n = rng.int(-4_000_000_000, 4_000_000_000);
            if n == 0 {
                continue;
            }
            let f = factor(&b(n)).unwrap();
            assert_eq!(f.value(), b(n), "roundtrip failed for {n}");
            let mut prev: Option<BigInt> = None;
            for (p, _) in &f.factors {
                assert!(is_prime(p));
                if let Some(q) = prev {
                    assert!(*p > q);
                }
                prev = Some(p.clone());
            }
        }
    }

    #[test]
    fn kronecker_fixed() {
        // 3^2 = 2 mod 7, so 2 is a residue.
        assert_eq!(kronecker(&b(2), &b(7)), 1);
        // squares mod 5 are {0, 1, 4}
        assert_eq!(kronecker(&b(3), &b(5)), -1);
        for n in -20i64..=20 {
            assert_eq!(kronecker(&b(1), &b(n)), 1);
        }
    }

    #[test]
    fn kronecker_matches_square_enumeration_mod_odd_primes() {
        for p in [3i64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
            let squares: std::collections::HashSet<i64> = (0..p).map(|x| (x * x) % p).collect();
            for a in 0..p {
                let expected = if a == 0 {
                    0
                } else if squares.contains(&a) {
                    1
                } else {
                    -1
                };
                assert_eq!(kronecker(&b(a), &b(p)), expected, "a={a} p={p}");
            }
        }
    }

    #[test]
    fn kronecker_multiplicative_in_top_argument() {
        let mut rng = Mix(2);
        for _ in 0..1000 {
            let a = rng.int(-300, 300);
            let c = rng.int(-300, 300);
            let n = rng.int(-200, 200);
            assert_eq!(
                kronecker(&(b(a) * b(c)), &b(n)),
                kronecker(&b(a), &b(n)) * kronecker(&b(c), &b(n)),
                "a={a} c={c} n={n}"
            );
        }
    }

    #[test]
    fn sqrt_mod_fixed() {
        let r = sqrt_mod(&b(2), &b(7)).unwrap().unwrap();
        assert!(r == b(3) || r == b(4));
        assert_eq!(sqrt_mod(&b(0), &b(7)).unwrap(), Some(b(0)));
        assert_eq!(sqrt_mod(&b(3), &b(5)).unwrap(), None);
        assert!(sqrt_mod(&b(1), &b(2)).is_err());
        assert!(sqrt_mod(&b(1), &b(9)).is_err());
    }

    #[test]
    fn sqrt_mod_agrees_with_kronecker_up_to_97() {
        let mut p = b(3);
        while p <= b(97) {
            if is_prime(&p) {
                let pu = p.to_i64().unwrap();
                for a in 0..pu {
                    let s = sqrt_mod(&b(a), &p).unwrap();
                    let k = kronecker(&b(a), &p);
                    assert_eq!(s.is_some(), k >= 0, "a={a} p={pu}");
                    if let Some(r) = s {
                        assert_eq!((&r * &r).mod_floor(&p), b(a).mod_floor(&p));
                    }
                }
            }
            p += 2;
        }
    }

    #[test]
    fn valuation_fixed() {
        assert_eq!(valuation(&rat(12, 1), &b(2)).unwrap(), 2);
        assert_eq!(valuation(&rat(5, 8), &b(2)).unwrap(), -3);
        assert_eq!(valuation(&rat(7, 1), &b(3)).unwrap(), 0);
        assert!(valuation(&rat(0, 1), &b(3)).is_err());
    }

    #[test]
    fn valuation_additive_random() {
        let mut rng = Mix(3);
        for _ in 0..400 {
            let x = rat(rng.int(-500, 500), rng.int(1, 500));
            let y = rat(rng.int(-500, 500), rng.int(1, 500));
            if x.is_zero() || y.is_zero() {
                continue;
            }
            for p in [2i64, 3, 5, 7] {
                assert_eq!(
                    valuation(&(&x * &y), &b(p)).unwrap(),
                    valuation(&x, &b(p)).unwrap() + valuation(&y, &b(p)).unwrap()
                );
            }
        }
    }

    #[test]
    fn squarefree_part_fixed() {
        assert_eq!(squarefree_part(&b(12)).unwrap(), b(3));
        assert_eq!(squarefree_part(&b(-12)).unwrap(), b(-3));
        assert_eq!(squarefree_part(&b(10)).unwrap(), b(10));
    }
}
