//! Local lattice classes in Q_p^2 and their tree metric: vertices are
//! homothety classes of rank-2 lattices, the distance comes from the
//! elementary divisors of a basis-change matrix, and endomorphism rings
//! realize the maximal orders of M_2(Q) that connect the local metric to
//! the global distance ideal. No adjacency structure is ever stored.

use crate::algebra::{Quaternion, QuaternionAlgebra};
use crate::arith::valuation;
use crate::error::{Error, Result};
use crate::lattice::QuatLattice;
use crate::linalg;
use crate::order::QuatOrder;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// A full Z-lattice in Q^2 given by two basis rows, studied at the prime p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneLattice {
    basis: Vec<Vec<BigRational>>,
    prime: BigInt,
}

impl PlaneLattice {
    pub fn new(rows: Vec<Vec<BigRational>>, prime: BigInt) -> Result<Self> {
        if rows.len() != 2 || rows.iter().any(|r| r.len() != 2) {
            return Err(Error::invalid("plane lattice", "expected a 2x2 matrix"));
        }
        if linalg::rational_det(&rows).is_zero() {
            return Err(Error::SingularMatrix);
        }
        let basis = linalg::rational_row_hnf(&rows);
        Ok(PlaneLattice { basis, prime })
    }

    pub fn from_ints(rows: [[i64; 2]; 2], prime: i64) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&x| BigRational::from(BigInt::from(x)))
                    .collect()
            })
            .collect();
        PlaneLattice::new(rows, BigInt::from(prime))
    }

    pub fn basis(&self) -> &[Vec<BigRational>] {
        &self.basis
    }

    pub fn prime(&self) -> &BigInt {
        &self.prime
    }

    pub fn scale(&self, s: &BigRational) -> PlaneLattice {
        let rows = self
            .basis
            .iter()
            .map(|r| r.iter().map(|x| x * s).collect())
            .collect();
        PlaneLattice::new(rows, self.prime.clone()).expect("scaling preserves rank")
    }
}

/// Canonical representative of the homothety class of a plane lattice at
/// its prime: the Hermite form over the localization Z_(p), with pivots
/// normalized to powers of p and the class scaled so its first elementary
/// divisor has p-valuation zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeVertex {
    pub prime: BigInt,
    pub normalized: Vec<Vec<BigRational>>,
}

/// Canonical residue of x in Q / p^c Z_(p), as p^{v(x)} * (unit residue).
fn local_residue(x: &BigRational, p: &BigInt, c: i64) -> BigRational {
    if x.is_zero() {
        return BigRational::zero();
    }
    let v = valuation(x, p).unwrap();
    if v >= c {
        return BigRational::zero();
    }
    let u = crate::arith::unit_part(x, p);
    let modulus = p.pow((c - v) as u32);
    // u = num/den with den prime to p: residue = num * den^{-1} mod p^{c-v}
    let num = u.numer().mod_floor(&modulus);
    let den = u.denom().mod_floor(&modulus);
    let inv = modinv(&den, &modulus);
    let res = (num * inv).mod_floor(&modulus);
    if v >= 0 {
        BigRational::from(res * p.pow(v as u32))
    } else {
        BigRational::new(res, p.pow(v.unsigned_abs() as u32))
    }
}

fn modinv(x: &BigInt, m: &BigInt) -> BigInt {
    let e = x.extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

/// The vertex (homothety class at p) of a plane lattice.
pub fn vertex_of(l: &PlaneLattice) -> TreeVertex {
    let p = &l.prime;
    let mut m = l.basis.to_vec();
    // Pivot: the row with smaller p-valuation in column 0.
    let v0 = if m[0][0].is_zero() {
        i64::MAX
    } else {
        valuation(&m[0][0], p).unwrap()
    };
    let v1 = if m[1][0].is_zero() {
        i64::MAX
    } else {
        valuation(&m[1][0], p).unwrap()
    };
    if v1 < v0 {
        m.swap(0, 1);
    }
    let a = valuation(&m[0][0], p).unwrap();
    // Scale row 0 by a p-unit so the pivot is exactly p^a.
    let unit = BigRational::from(p.pow(a.unsigned_abs() as u32)).pow(if a < 0 { -1 } else { 1 })
        / m[0][0].clone();
    m[0] = m[0].iter().map(|x| x * &unit).collect();
    // Eliminate below: the multiplier is p-integral by pivot minimality.
    if !m[1][0].is_zero() {
        let f = &m[1][0] / &m[0][0];
        let row0 = m[0].clone();
        for k in 0..2 {
            let t = &row0[k] * &f;
            m[1][k] -= t;
        }
    }
    debug_assert!(m[1][0].is_zero());
    let c = valuation(&m[1][1], p).unwrap();
    let unit = BigRational::from(p.pow(c.unsigned_abs() as u32)).pow(if c < 0 { -1 } else { 1 })
        / m[1][1].clone();
    m[1] = m[1].iter().map(|x| x * &unit).collect();
    // Reduce the off-diagonal entry to its canonical residue mod p^c.
    m[0][1] = local_residue(&m[0][1], p, c);
    // Normalize the homothety class: first elementary divisor valuation 0.
    let mut minv = a.min(c);
    if !m[0][1].is_zero() {
        minv = minv.min(valuation(&m[0][1], p).unwrap());
    }
    let scale =
        BigRational::from(p.pow(minv.unsigned_abs() as u32)).pow(if minv < 0 { 1 } else { -1 });
    for row in &mut m {
        for x in row.iter_mut() {
            *x *= &scale;
        }
    }
    TreeVertex {
        prime: p.clone(),
        normalized: m,
    }
}

/// Tree distance between the vertices of two plane lattices at the same
/// prime: for elementary divisors d1 | d2 of the basis-change matrix the
/// distance is v_p(d2) - v_p(d1).
pub fn tree_distance(l1: &PlaneLattice, l2: &PlaneLattice) -> Result<u32> {
    if l1.prime != l2.prime {
        return Err(Error::invalid(
            "tree distance",
            "lattices at different primes",
        ));
    }
    let p = &l1.prime;
    let inv = linalg::rational_inverse(l2.basis()).ok_or(Error::SingularMatrix)?;
    let c = linalg::rational_mul(l1.basis(), &inv);
    let det_v = valuation(&linalg::rational_det(&c), p).unwrap();
    let min_v = c
        .iter()
        .flatten()
        .filter(|x| !x.is_zero())
        .map(|x| valuation(x, p).unwrap())
        .min()
        .expect("nonsingular matrix has a nonzero entry");
    let d = det_v - 2 * min_v;
    debug_assert!(d >= 0);
    Ok(d as u32)
}

/// Matrix units of M_2(Q) as elements of the fixed split presentation:
/// 1 = id, i = diag(1,-1), j = antidiag(1,1), ij the rotation with rows (0,1), (-1,0).
pub fn matrix_to_quaternion(alg: &QuaternionAlgebra, m: &[Vec<BigRational>]) -> Quaternion {
    let two = BigRational::from(BigInt::from(2));
    Quaternion::from_rationals(
        alg.clone(),
        [
            (&m[0][0] + &m[1][1]) / &two,
            (&m[0][0] - &m[1][1]) / &two,
            (&m[0][1] + &m[1][0]) / &two,
            (&m[0][1] - &m[1][0]) / &two,
        ],
    )
}

/// Inverse of [`matrix_to_quaternion`].
pub fn quaternion_to_matrix(q: &Quaternion) -> Vec<Vec<BigRational>> {
    let [x0, x1, x2, x3] = q.coords();
    vec![vec![x0 + x1, x2 + x3], vec![x2 - x3, x0 - x1]]
}

/// The endomorphism order End(L) = { x : Lx <= L } of a plane lattice,
/// realized as a maximal order of the split quaternion algebra. It only
/// depends on the homothety class, and its reduced discriminant is 1.
pub fn endomorphism_order(l: &PlaneLattice) -> Result<QuatOrder> {
    let alg = QuaternionAlgebra::split();
    let b = l.basis();
    let binv = linalg::rational_inverse(b).ok_or(Error::SingularMatrix)?;
    let mut gens = Vec::with_capacity(4);
    for (r, c) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        let mut unit = vec![
            vec![BigRational::zero(), BigRational::zero()],
            vec![BigRational::zero(), BigRational::zero()],
        ];
        unit[r][c] = BigRational::one();
        // row-vector action: End(L) = B^{-1} M_2(Z) B
        let g = linalg::rational_mul(&linalg::rational_mul(&binv, &unit), b);
        gens.push(matrix_to_quaternion(&alg, &g));
    }
    let lattice = QuatLattice::from_generators(&alg, &gens)?;
    let order = QuatOrder::try_new(lattice)?;
    debug_assert!(order.is_maximal());
    Ok(order)
}
