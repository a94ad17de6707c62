//! Rational quaternion algebras B = (a,b / Q): element arithmetic,
//! Hilbert symbols at every place, ramification sets, reduced
//! discriminants, isomorphism testing and the twisting classification.

use crate::arith::{self, factor, kronecker, valuation};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::sync::Arc;

/// A place of Q: a finite prime or the archimedean place.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Finite(BigInt),
    Infinite,
}

impl Place {
    pub fn finite(p: impl Into<BigInt>) -> Self {
        Place::Finite(p.into())
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinite => write!(f, "infinity"),
        }
    }
}

/// Hilbert symbol (a, b)_v over Q: +1 when z^2 = a x^2 + b y^2 has a
/// nontrivial solution over the completion at v, else -1.
///
/// The archimedean and odd-prime cases go through sign analysis and the
/// tame residue-symbol formula; the dyadic case runs a primitive-solution
/// search modulo 2^8, which certifies the answer by Hensel lifting.
pub fn hilbert_symbol(a: &BigRational, b: &BigRational, v: &Place) -> i32 {
    assert!(
        !a.is_zero() && !b.is_zero(),
        "hilbert symbol needs nonzero arguments"
    );
    match v {
        Place::Infinite => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Finite(p) if p.is_even() => hilbert_dyadic(a, b),
        Place::Finite(p) => hilbert_tame(a, b, p),
    }
}

fn hilbert_tame(a: &BigRational, b: &BigRational, p: &BigInt) -> i32 {
    let alpha = valuation(a, p).unwrap();
    let beta = valuation(b, p).unwrap();
    let u = arith::unit_part(a, p);
    let w = arith::unit_part(b, p);
    let ru = rational_residue(&u, p);
    let rw = rational_residue(&w, p);
    let mut s = 1i32;
    if (alpha * beta) % 2 != 0 {
        s *= kronecker(&BigInt::from(-1), p);
    }
    if beta % 2 != 0 {
        s *= kronecker(&ru, p);
    }
    if alpha % 2 != 0 {
        s *= kronecker(&rw, p);
    }
    s
}

/// Residue of a p-unit rational modulo p (or any odd modulus).
fn rational_residue(x: &BigRational, m: &BigInt) -> BigInt {
    let num = x.numer().mod_floor(m);
    let den = x.denom().mod_floor(m);
    let inv = mod_inverse(&den, m).expect("denominator is a unit mod m");
    (num * inv).mod_floor(m)
}

fn mod_inverse(x: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = x.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Dyadic symbol by exhaustive primitive-solution search modulo 2^8.
///
/// After stripping square factors the coefficients have 2-valuation 0 or
/// 1, so a primitive solution mod 2^8 lifts 2-adically and conversely any
/// 2-adic solution reduces; the search is therefore exact.
fn hilbert_dyadic(a: &BigRational, b: &BigRational) -> i32 {
    let two = BigInt::from(2);
    let va = valuation(a, &two).unwrap().rem_euclid(2) as u32;
    let vb = valuation(b, &two).unwrap().rem_euclid(2) as u32;
    let ua = arith::unit_part(a, &two);
    let ub = arith::unit_part(b, &two);
    const M: u64 = 256;
    let ra = (arith::residue_u64(&rational_residue(&ua, &BigInt::from(M)), M) << va) % M;
    let rb = (arith::residue_u64(&rational_residue(&ub, &BigInt::from(M)), M) << vb) % M;

    // Squares mod 256 reachable by any z, and by odd z only.
    let mut sq_any = [false; M as usize];
    let mut sq_odd = [false; M as usize];
    for z in 0..M {
        let s = (z * z) % M;
        sq_any[s as usize] = true;
        if z % 2 == 1 {
            sq_odd[s as usize] = true;
        }
    }
    for x in 0..M {
        let ax2 = (ra * ((x * x) % M)) % M;
        for y in 0..M {
            let t = ((ax2 + rb * ((y * y) % M)) % M) as usize;
            let primitive_xy = x % 2 == 1 || y % 2 == 1;
            if (primitive_xy && sq_any[t]) || (!primitive_xy && sq_odd[t]) {
                return 1;
            }
        }
    }
    -1
}

/// Places where (a,b / Q) ramifies; only infinity, 2 and the odd primes
/// dividing numerator or denominator of a or b can occur.
pub fn ramified_places(
    a: &BigRational,
    b: &BigRational,
) -> Result<std::collections::BTreeSet<Place>> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::DegenerateAlgebra);
    }
    let mut candidates: std::collections::BTreeSet<BigInt> = std::collections::BTreeSet::new();
    candidates.insert(BigInt::from(2));
    for q in [a, b] {
        for part in [q.numer(), q.denom()] {
            if !part.abs().is_one() {
                for p in factor(part)?.primes() {
                    candidates.insert(p.clone());
                }
            }
        }
    }
    let mut out = std::collections::BTreeSet::new();
    for p in candidates {
        if hilbert_symbol(a, b, &Place::Finite(p.clone())) == -1 {
            out.insert(Place::Finite(p));
        }
    }
    if hilbert_symbol(a, b, &Place::Infinite) == -1 {
        out.insert(Place::Infinite);
    }
    debug_assert!(
        out.len() % 2 == 0,
        "ramification sets have even cardinality"
    );
    Ok(out)
}

#[derive(Debug)]
struct AlgebraData {
    a: BigInt,
    b: BigInt,
    ramified: std::collections::BTreeSet<Place>,
    discriminant: BigInt,
}

/// The quaternion algebra (a, b / Q) with its ramification data cached.
///
/// Equality is equality of the defining pair (a, b); use
/// [`QuaternionAlgebra::is_isomorphic`] for the classification-level test.
#[derive(Debug, Clone)]
pub struct QuaternionAlgebra(Arc<AlgebraData>);

impl PartialEq for QuaternionAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.0.a == other.0.a && self.0.b == other.0.b
    }
}
impl Eq for QuaternionAlgebra {}

impl fmt::Display for QuaternionAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {} / Q)", self.0.a, self.0.b)
    }
}

impl QuaternionAlgebra {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Result<Self> {
        let a: BigInt = a.into();
        let b: BigInt = b.into();
        if a.is_zero() || b.is_zero() {
            return Err(Error::DegenerateAlgebra);
        }
        let ar = BigRational::from(a.clone());
        let br = BigRational::from(b.clone());
        let ramified = ramified_places(&ar, &br)?;
        let discriminant = ramified
            .iter()
            .filter_map(|v| match v {
                Place::Finite(p) => Some(p.clone()),
                Place::Infinite => None,
            })
            .product();
        Ok(QuaternionAlgebra(Arc::new(AlgebraData {
            a,
            b,
            ramified,
            discriminant,
        })))
    }

    /// The fixed split presentation of M_2(Q): i = diag(1,-1),
    /// j = antidiag(1,1).
    pub fn split() -> Self {
        QuaternionAlgebra::new(1, 1).expect("split presentation is valid")
    }

    pub fn a(&self) -> &BigInt {
        &self.0.a
    }

    pub fn b(&self) -> &BigInt {
        &self.0.b
    }

    pub fn ramified_places(&self) -> &std::collections::BTreeSet<Place> {
        &self.0.ramified
    }

    /// Product of the finite ramified primes.
    pub fn discriminant(&self) -> &BigInt {
        &self.0.discriminant
    }

    pub fn is_division(&self) -> bool {
        !self.0.ramified.is_empty()
    }

    pub fn is_ramified_at(&self, v: &Place) -> bool {
        self.0.ramified.contains(v)
    }

    /// Isomorphism test: equal ramification sets.
    pub fn is_isomorphic(&self, other: &QuaternionAlgebra) -> bool {
        self.0.ramified == other.0.ramified
    }

    pub fn zero(&self) -> Quaternion {
        Quaternion::from_rationals(
            self.clone(),
            [
                BigRational::zero(),
                BigRational::zero(),
                BigRational::zero(),
                BigRational::zero(),
            ],
        )
    }

    pub fn one(&self) -> Quaternion {
        self.basis_element(0)
    }

    pub fn i(&self) -> Quaternion {
        self.basis_element(1)
    }

    pub fn j(&self) -> Quaternion {
        self.basis_element(2)
    }

    pub fn k(&self) -> Quaternion {
        self.basis_element(3)
    }

    pub fn basis_element(&self, idx: usize) -> Quaternion {
        let mut c = [
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
        ];
        c[idx] = BigRational::one();
        Quaternion::from_rationals(self.clone(), c)
    }

    pub fn scalar(&self, x: BigRational) -> Quaternion {
        Quaternion::from_rationals(
            self.clone(),
            [
                x,
                BigRational::zero(),
                BigRational::zero(),
                BigRational::zero(),
            ],
        )
    }
}

/// An element x0 + x1 i + x2 j + x3 ij of a quaternion algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quaternion {
    algebra: QuaternionAlgebra,
    coords: [BigRational; 4],
}

impl Quaternion {
    pub fn from_rationals(algebra: QuaternionAlgebra, coords: [BigRational; 4]) -> Self {
        Quaternion { algebra, coords }
    }

    pub fn from_ints(algebra: QuaternionAlgebra, coords: [i64; 4]) -> Self {
        Quaternion {
            algebra,
            coords: coords.map(|x| BigRational::from(BigInt::from(x))),
        }
    }

    pub fn algebra(&self) -> &QuaternionAlgebra {
        &self.algebra
    }

    pub fn coords(&self) -> &[BigRational; 4] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    fn assert_same_algebra(&self, other: &Quaternion) {
        assert!(
            self.algebra == other.algebra,
            "elements of different quaternion algebras: {} vs {}",
            self.algebra,
            other.algebra
        );
    }

    pub fn add(&self, other: &Quaternion) -> Quaternion {
        self.assert_same_algebra(other);
        let mut c = self.coords.clone();
        for (ci, oi) in c.iter_mut().zip(other.coords.iter()) {
            *ci += oi;
        }
        Quaternion {
            algebra: self.algebra.clone(),
            coords: c,
        }
    }

    pub fn sub(&self, other: &Quaternion) -> Quaternion {
        self.assert_same_algebra(other);
        let mut c = self.coords.clone();
        for (ci, oi) in c.iter_mut().zip(other.coords.iter()) {
            *ci -= oi;
        }
        Quaternion {
            algebra: self.algebra.clone(),
            coords: c,
        }
    }

    pub fn neg(&self) -> Quaternion {
        Quaternion {
            algebra: self.algebra.clone(),
            coords: self.coords.clone().map(|c| -c),
        }
    }

    pub fn scale(&self, s: &BigRational) -> Quaternion {
        Quaternion {
            algebra: self.algebra.clone(),
            coords: self.coords.clone().map(|c| c * s),
        }
    }

    /// Quaternion product with i^2 = a, j^2 = b, ij = -ji.
    pub fn mul(&self, other: &Quaternion) -> Quaternion {
        self.assert_same_algebra(other);
        let a = BigRational::from(self.algebra.a().clone());
        let b = BigRational::from(self.algebra.b().clone());
        let [x0, x1, x2, x3] = &self.coords;
        let [y0, y1, y2, y3] = &other.coords;
        let c0 = x0 * y0 + &a * x1 * y1 + &b * x2 * y2 - &a * &b * x3 * y3;
        let c1 = x0 * y1 + x1 * y0 - &b * x2 * y3 + &b * x3 * y2;
        let c2 = x0 * y2 + x2 * y0 + &a * x1 * y3 - &a * x3 * y1;
        let c3 = x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1;
        Quaternion {
            algebra: self.algebra.clone(),
            coords: [c0, c1, c2, c3],
        }
    }

    /// Canonical involution: x0 - x1 i - x2 j - x3 ij.
    pub fn conj(&self) -> Quaternion {
        let [x0, x1, x2, x3] = self.coords.clone();
        Quaternion {
            algebra: self.algebra.clone(),
            coords: [x0, -x1, -x2, -x3],
        }
    }

    /// Reduced trace 2 x0.
    pub fn trace(&self) -> BigRational {
        &self.coords[0] + &self.coords[0]
    }

    /// Reduced norm x0^2 - a x1^2 - b x2^2 + ab x3^2.
    pub fn norm(&self) -> BigRational {
        let a = BigRational::from(self.algebra.a().clone());
        let b = BigRational::from(self.algebra.b().clone());
        let [x0, x1, x2, x3] = &self.coords;
        x0 * x0 - &a * x1 * x1 - &b * x2 * x2 + &a * &b * x3 * x3
    }

    pub fn inverse(&self) -> Option<Quaternion> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        Some(self.conj().scale(&n.recip()))
    }

    /// True when the two elements anticommute.
    pub fn anticommutes_with(&self, other: &Quaternion) -> bool {
        self.mul(other).add(&other.mul(self)).is_zero()
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + {} i + {} j + {} ij",
            self.coords[0], self.coords[1], self.coords[2], self.coords[3]
        )
    }
}

/// Outcome of the twisting test for the algebra of discriminant D.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistClassification {
    pub d: BigInt,
    pub is_twisting: bool,
    /// All positive m | D with (-D, m / Q) isomorphic to the algebra of
    /// discriminant D.
    pub twisting_params: Vec<BigInt>,
}

/// Decides whether the (unique) totally indefinite algebra of squarefree
/// discriminant D is twisting, i.e. admits a presentation (-D, m / Q) with
/// m | D, and lists all such m.
///
/// Two independent tests run for every divisor: the Hilbert-symbol
/// comparison of ramification sets, and the residue criterion "m is a
/// nonsquare mod p for every odd p | D with p coprime to m (D/m in place
/// of m when p | m)". A disagreement is reported as a defect rather than
/// silently resolved.
pub fn twisting_classification(d: &BigInt) -> Result<TwistClassification> {
    let f = validate_indefinite_discriminant(d)?;
    let target: std::collections::BTreeSet<BigInt> = f.primes().cloned().collect();
    let odd_primes: Vec<BigInt> = f.primes().filter(|p| p.is_odd()).cloned().collect();

    let mut params = Vec::new();
    for m in divisors(&f) {
        // Hilbert-symbol route: does (-D, m) ramify exactly at the primes
        // dividing D (and nowhere at infinity)?
        let ram = ramified_places(
            &BigRational::from(-d.clone()),
            &BigRational::from(m.clone()),
        )?;
        let finite: std::collections::BTreeSet<BigInt> = ram
            .iter()
            .filter_map(|v| match v {
                Place::Finite(p) => Some(p.clone()),
                Place::Infinite => None,
            })
            .collect();
        let hilbert_pass = finite == target && !ram.contains(&Place::Infinite);

        // Residue-criterion route.
        let residue_pass = odd_primes.iter().all(|p| {
            let probe = if (&m % p).is_zero() {
                d / &m
            } else {
                m.clone()
            };
            kronecker(&probe, p) == -1
        });

        if hilbert_pass != residue_pass {
            return Err(Error::TwistingCriterionMismatch {
                d: d.clone(),
                m: m.clone(),
            });
        }
        if hilbert_pass {
            params.push(m);
        }
    }
    params.sort();
    Ok(TwistClassification {
        d: d.clone(),
        is_twisting: !params.is_empty(),
        twisting_params: params,
    })
}

/// Checks that D is a valid reduced discriminant for a totally indefinite
/// rational division algebra: positive, squarefree, with an even number
/// (>= 2) of prime factors. Returns the factorization.
pub fn validate_indefinite_discriminant(d: &BigInt) -> Result<arith::Factorization> {
    if !d.is_positive() {
        return Err(Error::NonPositiveDiscriminant);
    }
    let f = factor(d)?;
    if !f.is_squarefree() {
        return Err(Error::NotSquarefree(d.clone()));
    }
    if f.factors.is_empty() || f.factors.len() % 2 != 0 {
        return Err(Error::OddRamification(d.clone()));
    }
    Ok(f)
}

/// All positive divisors, in increasing order.
pub fn divisors(f: &arith::Factorization) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    for (p, e) in &f.factors {
        let mut next = Vec::new();
        for d in &out {
            let mut pk = BigInt::one();
            for _ in 0..=*e {
                next.push(d * &pk);
                pk *= p;
            }
        }
        out = next;
    }
    out.sort();
    out
}

/// Finds a presentation (a, b) of the totally indefinite algebra of
/// squarefree discriminant D by bounded search, preferring the twisting
/// presentation (-D, m) when one exists.
pub fn algebra_of_discriminant(d: &BigInt) -> Result<QuaternionAlgebra> {
    let f = validate_indefinite_discriminant(d)?;
    let tc = twisting_classification(d)?;
    if let Some(m) = tc.twisting_params.first() {
        let alg = QuaternionAlgebra::new(-d.clone(), m.clone())?;
        debug_assert_eq!(alg.discriminant(), d);
        return Ok(alg);
    }
    let target: std::collections::BTreeSet<Place> =
        f.primes().map(|p| Place::Finite(p.clone())).collect();
    // Small-coefficient scan; desk-scale discriminants always admit one.
    for bound in [12i64, 48, 192, 768] {
        for a in -bound..=bound {
            if a == 0 {
                continue;
            }
            for b in -bound..=bound {
                if b == 0 {
                    continue;
                }
                let ar = BigRational::from(BigInt::from(a));
                let br = BigRational::from(BigInt::from(b));
                if ramified_places(&ar, &br)? == target {
                    return QuaternionAlgebra::new(a, b);
                }
            }
        }
    }
    Err(Error::invalid(
        "discriminant",
        format!("no small presentation found for D = {d}"),
    ))
}

/// Convenience: the discriminant as u64 when it fits.
pub fn discriminant_u64(alg: &QuaternionAlgebra) -> Option<u64> {
    alg.discriminant().to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn r(n: i64) -> BigRational {
        BigRational::from(b(n))
    }

    fn alg(a: i64, bb: i64) -> QuaternionAlgebra {
        QuaternionAlgebra::new(a, bb).unwrap()
    }

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
    fn multiplication_table() {
        let q = alg(-1, -1);
        let (i, j, k) = (q.i(), q.j(), q.k());
        assert_eq!(i.mul(&i), q.scalar(r(-1)));
        assert_eq!(j.mul(&j), q.scalar(r(-1)));
        assert_eq!(i.mul(&j), k);
        assert_eq!(j.mul(&i), k.neg());
        assert_eq!(k.mul(&k), q.scalar(r(-1)));

        let q = alg(-6, 2);
        assert_eq!(q.i().mul(&q.i()), q.scalar(r(-6)));
        assert_eq!(q.j().mul(&q.j()), q.scalar(r(2)));
        // (ij)^2 = -ab = 12, so norm(ij) = ab = -12
        assert_eq!(q.k().mul(&q.k()), q.scalar(r(12)));
        assert_eq!(q.k().norm(), r(-12));
        assert_eq!(q.k().norm(), q.i().norm() * q.j().norm());
    }

    #[test]
    fn trace_norm_conj() {
        let q = alg(-1, -1);
        let x = Quaternion::from_ints(q.clone(), [1, 1, 1, 1]);
        assert_eq!(x.norm(), r(4));
        assert_eq!(x.trace(), r(2));
        assert_eq!(q.i().trace(), r(0));
        let c = x.conj();
        assert_eq!(c.coords()[0], r(1));
        assert_eq!(c.coords()[1], r(-1));
        // x * conj(x) = norm(x)
        assert_eq!(x.mul(&c), q.scalar(r(4)));
    }

    #[test]
    fn norm_is_multiplicative_on_random_elements() {
        let mut rng = Mix(7);
        for _ in 0..200 {
            let q = alg(
                rng.int(-9, 9).max(1) * if rng.int(0, 1) == 0 { -1 } else { 1 },
                {
                    let v = rng.int(-9, 9);
                    if v == 0 {
                        3
                    } else {
                        v
                    }
                },
            );
            let x = Quaternion::from_ints(
                q.clone(),
                [
                    rng.int(-5, 5),
                    rng.int(-5, 5),
                    rng.int(-5, 5),
                    rng.int(-5, 5),
                ],
            );
            let y = Quaternion::from_ints(
                q.clone(),
                [
                    rng.int(-5, 5),
                    rng.int(-5, 5),
                    rng.int(-5, 5),
                    rng.int(-5, 5),
                ],
            );
            assert_eq!(x.mul(&y).norm(), x.norm() * y.norm());
        }
    }

    #[test]
    #[should_panic(expected = "different quaternion algebras")]
    fn mixed_algebras_rejected() {
        let x = alg(-1, -1).i();
        let y = alg(-1, -3).i();
        let _ = x.mul(&y);
    }

    #[test]
    fn hilbert_fixed_values() {
        assert_eq!(hilbert_symbol(&r(-1), &r(-1), &Place::Infinite), -1);
        assert_eq!(hilbert_symbol(&r(-1), &r(-1), &Place::finite(2)), -1);
        for bb in [-7i64, -2, 3, 5, 11] {
            for p in [2i64, 3, 5, 7, 11, 13] {
                assert_eq!(hilbert_symbol(&r(1), &r(bb), &Place::finite(p)), 1);
            }
        }
    }

    #[test]
    fn hilbert_symmetry_and_identities() {
        let mut rng = Mix(11);
        let places: Vec<Place> = vec![
            Place::Infinite,
            Place::finite(2),
            Place::finite(3),
            Place::finite(5),
            Place::finite(7),
        ];
        for _ in 0..200 {
            let a = r(rng.int(-40, 40));
            let bb = r(rng.int(-40, 40));
            if a.is_zero() || bb.is_zero() {
                continue;
            }
            for v in &places {
                assert_eq!(hilbert_symbol(&a, &bb, v), hilbert_symbol(&bb, &a, v));
                assert_eq!(hilbert_symbol(&a, &(-&a), v), 1);
                assert_eq!(hilbert_symbol(&a, &(&bb * &bb), v), 1);
            }
        }
    }

    /// Closed-form dyadic symbol used as an independent cross-check of the
    /// mod-2^8 search.
    fn dyadic_closed_form(x: &BigRational, y: &BigRational) -> i32 {
        let two = b(2);
        let alpha = valuation(x, &two).unwrap().rem_euclid(2);
        let beta = valuation(y, &two).unwrap().rem_euclid(2);
        let u = rational_residue(&arith::unit_part(x, &two), &b(8))
            .to_i64()
            .unwrap();
        let w = rational_residue(&arith::unit_part(y, &two), &b(8))
            .to_i64()
            .unwrap();
        let eps = |x: i64| ((x - 1) / 2) % 2; // x odd, x in [0,8)
        let om = |x: i64| ((x * x - 1) / 8) % 2;
        let e = eps(u) * eps(w) + alpha * om(w) + beta * om(u);
        if e % 2 == 0 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn dyadic_search_matches_closed_form() {
        for a in -24i64..=24 {
            if a == 0 {
                continue;
            }
            for bb in -24i64..=24 {
                if bb == 0 {
                    continue;
                }
                assert_eq!(
                    hilbert_dyadic(&r(a), &r(bb)),
                    dyadic_closed_form(&r(a), &r(bb)),
                    "a={a} b={bb}"
                );
            }
        }
    }

    #[test]
    fn product_formula_on_random_pairs() {
        let mut rng = Mix(13);
        for _ in 0..500 {
            let a = BigRational::new(b(rng.int(-60, 60)), b(rng.int(1, 20)));
            let bb = BigRational::new(b(rng.int(-60, 60)), b(rng.int(1, 20)));
            if a.is_zero() || bb.is_zero() {
                continue;
            }
            let ram = ramified_places(&a, &bb).unwrap();
            assert_eq!(ram.len() % 2, 0);
            // product over all places = product over ramified places = +1
            let prod: i32 = ram.iter().map(|v| hilbert_symbol(&a, &bb, v)).product();
            assert_eq!(prod, 1);
        }
    }

    #[test]
    fn ramification_fixed_cases() {
        let h = alg(-1, -1);
        let expect: std::collections::BTreeSet<Place> =
            [Place::finite(2), Place::Infinite].into_iter().collect();
        assert_eq!(h.ramified_places(), &expect);
        assert_eq!(h.discriminant(), &b(2));
        assert!(h.is_division());

        let split = alg(1, 1);
        assert!(split.ramified_places().is_empty());
        assert_eq!(split.discriminant(), &b(1));
        assert!(!split.is_division());
    }

    #[test]
    fn discriminant_ten_presentations() {
        // Which m | 10 give a (-10, m) ramified exactly at {2, 5}?
        let mut passing = Vec::new();
        for m in [1i64, 2, 5, 10] {
            let ram = ramified_places(&r(-10), &r(m)).unwrap();
            let expect: std::collections::BTreeSet<Place> =
                [Place::finite(2), Place::finite(5)].into_iter().collect();
            if ram == expect {
                passing.push(m);
            }
        }
        assert_eq!(passing, vec![2, 5]);
    }

    #[test]
    fn isomorphism_is_ramification_equality() {
        assert!(alg(1, 1).is_isomorphic(&alg(1, 7)));
        assert!(alg(-1, -1).is_isomorphic(&alg(-1, -1)));
        // (2,5) ramifies at {2,5}; the Hamilton algebra at {2, infinity}.
        assert!(!alg(-1, -1).is_isomorphic(&alg(2, 5)));
        assert!(!alg(-1, -1).is_isomorphic(&alg(-1, -3)));
    }

    #[test]
    fn twisting_classification_examples() {
        let t = twisting_classification(&b(6)).unwrap();
        assert!(t.is_twisting);
        assert_eq!(t.twisting_params, vec![b(2), b(3)]);

        let t = twisting_classification(&b(10)).unwrap();
        assert!(t.is_twisting);
        assert_eq!(t.twisting_params, vec![b(2), b(5)]);

        let t = twisting_classification(&b(14)).unwrap();
        assert!(!t.is_twisting);

        assert!(matches!(
            twisting_classification(&b(1)),
            Err(Error::OddRamification(_))
        ));
        assert!(matches!(
            twisting_classification(&b(30)),
            Err(Error::OddRamification(_))
        ));
        assert!(matches!(
            twisting_classification(&b(12)),
            Err(Error::NotSquarefree(_))
        ));
    }

    #[test]
    fn algebra_of_discriminant_hits_target() {
        for d in [6i64, 10, 14, 15, 21, 22, 26] {
            let a = algebra_of_discriminant(&b(d)).unwrap();
            assert_eq!(a.discriminant(), &b(d), "D = {d}");
            assert!(!a.is_ramified_at(&Place::Infinite), "indefinite D = {d}");
        }
    }
}
