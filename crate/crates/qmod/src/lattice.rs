//! Rank-4 lattices in a quaternion algebra, held in canonical row Hermite
//! normal form over the basis (1, i, j, ij), plus the scaled-integer scan
//! used by every bounded search.

use crate::algebra::{Quaternion, QuaternionAlgebra};
use crate::error::{Error, Result};
use crate::linalg;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A full lattice L = Z e1 + ... + Z e4 in B, with `basis[r]` the algebra
/// coordinates of e_{r+1}. The HNF representative is unique, so equality
/// of lattices is equality of bases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuatLattice {
    algebra: QuaternionAlgebra,
    basis: Vec<Vec<BigRational>>,
}

impl QuatLattice {
    /// Z-span of the given elements, canonicalized; fails unless the span
    /// has full rank 4.
    pub fn from_generators(algebra: &QuaternionAlgebra, gens: &[Quaternion]) -> Result<Self> {
        let rows: Vec<Vec<BigRational>> = gens
            .iter()
            .map(|g| {
                assert!(g.algebra() == algebra, "generator from a different algebra");
                g.coords().to_vec()
            })
            .collect();
        let hnf = linalg::rational_row_hnf(&rows);
        if hnf.len() < 4 {
            return Err(Error::RankDeficient(hnf.len()));
        }
        Ok(QuatLattice {
            algebra: algebra.clone(),
            basis: hnf,
        })
    }

    /// The standard lattice Z + Zi + Zj + Zij.
    pub fn standard(algebra: &QuaternionAlgebra) -> Self {
        let basis = (0..4)
            .map(|r| {
                (0..4)
                    .map(|c| {
                        if r == c {
                            BigRational::one()
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        QuatLattice {
            algebra: algebra.clone(),
            basis,
        }
    }

    pub fn algebra(&self) -> &QuaternionAlgebra {
        &self.algebra
    }

    pub fn basis(&self) -> &[Vec<BigRational>] {
        &self.basis
    }

    pub fn basis_elements(&self) -> Vec<Quaternion> {
        self.basis
            .iter()
            .map(|row| {
                Quaternion::from_rationals(
                    self.algebra.clone(),
                    [
                        row[0].clone(),
                        row[1].clone(),
                        row[2].clone(),
                        row[3].clone(),
                    ],
                )
            })
            .collect()
    }

    /// Coordinates of `q` over the lattice basis, as rationals.
    /// The HNF basis is upper triangular, so this is forward substitution.
    pub fn rational_coords_of(&self, q: &Quaternion) -> [BigRational; 4] {
        assert!(
            q.algebra() == &self.algebra,
            "element from a different algebra"
        );
        let v = q.coords();
        let mut x = [
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
        ];
        for c in 0..4 {
            let mut rem = v[c].clone();
            for r in 0..c {
                rem -= &x[r] * &self.basis[r][c];
            }
            x[c] = rem / &self.basis[c][c];
        }
        x
    }

    /// Integer coordinates when `q` lies in the lattice.
    pub fn coords_of(&self, q: &Quaternion) -> Option<[BigInt; 4]> {
        let x = self.rational_coords_of(q);
        if x.iter().all(|c| c.is_integer()) {
            Some([
                x[0].to_integer(),
                x[1].to_integer(),
                x[2].to_integer(),
                x[3].to_integer(),
            ])
        } else {
            None
        }
    }

    pub fn contains(&self, q: &Quaternion) -> bool {
        self.coords_of(q).is_some()
    }

    /// Element with the given integer coordinates over the lattice basis.
    pub fn element_from_coords(&self, c: &[BigInt; 4]) -> Quaternion {
        let mut coords = [
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
        ];
        for (r, cr) in c.iter().enumerate() {
            for k in 0..4 {
                coords[k] += BigRational::from(cr.clone()) * &self.basis[r][k];
            }
        }
        Quaternion::from_rationals(self.algebra.clone(), coords)
    }

    /// The lattice scaled by a nonzero rational.
    pub fn scale(&self, s: &BigRational) -> QuatLattice {
        assert!(!s.is_zero());
        let rows: Vec<Vec<BigRational>> = self
            .basis
            .iter()
            .map(|row| row.iter().map(|x| x * s).collect())
            .collect();
        QuatLattice {
            algebra: self.algebra.clone(),
            basis: linalg::rational_row_hnf(&rows),
        }
    }

    /// Intersection of two full lattices in the same algebra.
    pub fn intersect(&self, other: &QuatLattice) -> Result<QuatLattice> {
        if self.algebra != other.algebra {
            return Err(Error::MixedAlgebras);
        }
        // Solve x B1 = y B2 over Z: the kernel of the stacked [B1; -B2].
        let den1 = linalg::common_denominator(&self.basis);
        let den2 = linalg::common_denominator(&other.basis);
        let den = num_integer::lcm(den1, den2);
        let mut stacked: Vec<Vec<BigInt>> = Vec::with_capacity(8);
        for row in &self.basis {
            stacked.push(scale_row(row, &den));
        }
        for row in &other.basis {
            let mut r = scale_row(row, &den);
            for x in &mut r {
                *x = -std::mem::take(x);
            }
            stacked.push(r);
        }
        let kernel = linalg::integer_kernel(&stacked);
        debug_assert_eq!(kernel.len(), 4);
        let rows: Vec<Vec<BigRational>> = kernel
            .iter()
            .map(|z| {
                (0..4)
                    .map(|c| {
                        let mut s = BigRational::zero();
                        for r in 0..4 {
                            s += BigRational::from(z[r].clone()) * &self.basis[r][c];
                        }
                        s
                    })
                    .collect()
            })
            .collect();
        let hnf = linalg::rational_row_hnf(&rows);
        debug_assert_eq!(hnf.len(), 4);
        Ok(QuatLattice {
            algebra: self.algebra.clone(),
            basis: hnf,
        })
    }

    /// For a sublattice `self` of `other`: the integer change-of-basis
    /// matrix T with `self = T * other` (rows over `other`'s basis).
    pub fn coords_in(&self, other: &QuatLattice) -> Option<Vec<Vec<BigInt>>> {
        let mut t = Vec::with_capacity(4);
        for e in self.basis_elements() {
            t.push(other.coords_of(&e)?.to_vec());
        }
        Some(t)
    }

    /// Index [other : self] for a finite-index sublattice, via the
    /// elementary divisors of the change-of-basis matrix.
    pub fn index_in(&self, other: &QuatLattice) -> Option<BigInt> {
        let t = self.coords_in(other)?;
        let divs = linalg::smith_elementary_divisors(&t);
        if divs.len() < 4 || divs.iter().any(|d| d.is_zero()) {
            return None;
        }
        Some(divs.iter().product())
    }

    /// Common denominator and integer-scaled basis rows.
    pub fn scaled_integer_basis(&self) -> (BigInt, Vec<Vec<BigInt>>) {
        let den = linalg::common_denominator(&self.basis);
        let rows = self.basis.iter().map(|r| scale_row(r, &den)).collect();
        (den, rows)
    }
}

fn scale_row(row: &[BigRational], den: &BigInt) -> Vec<BigInt> {
    row.iter()
        .map(|x| {
            let s = x * BigRational::from(den.clone());
            debug_assert!(s.is_integer());
            s.to_integer()
        })
        .collect()
}

/// Fast exhaustive scan of the points of an echelon-basis lattice (or
/// sublattice) inside a height box: all integer combinations whose algebra
/// coordinates have absolute value at most `height`.
///
/// Coordinates are carried as i128 scaled by the common denominator; sizes
/// are guarded at construction so no intermediate product can overflow.
pub struct LatticeScan {
    /// scaled rows, one per basis vector, echelon over the 4 columns
    rows: Vec<[i128; 4]>,
    /// pivot column of each row
    pivots: Vec<usize>,
    pub den: i128,
}

const SCAN_LIMIT: i128 = 1 << 30;

impl LatticeScan {
    /// Builds a scan over echelon rational rows (rank 1..=4).
    pub fn new(rows_rat: &[Vec<BigRational>]) -> Result<Self> {
        let den_big = linalg::common_denominator(rows_rat);
        let den = den_big.to_i128().ok_or(Error::SearchOverflow)?;
        let mut rows = Vec::new();
        let mut pivots = Vec::new();
        for row in rows_rat {
            let mut r = [0i128; 4];
            for (c, x) in row.iter().enumerate() {
                let s = x * BigRational::from(den_big.clone());
                debug_assert!(s.is_integer());
                r[c] = s.to_integer().to_i128().ok_or(Error::SearchOverflow)?;
                if r[c].abs() > SCAN_LIMIT {
                    return Err(Error::SearchOverflow);
                }
            }
            let pivot = (0..4).find(|&c| r[c] != 0).ok_or(Error::SearchOverflow)?;
            rows.push(r);
            pivots.push(pivot);
        }
        if den > SCAN_LIMIT {
            return Err(Error::SearchOverflow);
        }
        Ok(LatticeScan { rows, pivots, den })
    }

    /// Visits every lattice point of height at most `height` once, shell
    /// by shell (exact height 0, 1, ..., `height`), lexicographic in the
    /// basis coefficients within a shell; stops early when `f` returns
    /// true. The zero point is skipped.
    pub fn scan_shells(&self, height: u32, mut f: impl FnMut(&[i64], &[i128; 4]) -> bool) -> bool {
        for h in 0..=height {
            let hit = self.scan_box(h, |c, v| {
                // points strictly inside the previous box already visited
                if h > 0 && v.iter().all(|x| x.abs() <= (h - 1) as i128 * self.den) {
                    return false;
                }
                f(c, v)
            });
            if hit {
                return true;
            }
        }
        false
    }

    /// Visits every nonzero lattice point of height at most `height` once,
    /// in lexicographic coefficient order; stops early when `f` returns
    /// true.
    pub fn scan_box(&self, height: u32, mut f: impl FnMut(&[i64], &[i128; 4]) -> bool) -> bool {
        let bound = height as i128 * self.den;
        let mut coeffs = vec![0i64; self.rows.len()];
        let mut acc = [0i128; 4];
        self.recurse(0, bound, &mut coeffs, &mut acc, &mut f)
    }

    fn recurse(
        &self,
        depth: usize,
        bound: i128,
        coeffs: &mut Vec<i64>,
        acc: &mut [i128; 4],
        f: &mut impl FnMut(&[i64], &[i128; 4]) -> bool,
    ) -> bool {
        if depth == self.rows.len() {
            if coeffs.iter().all(|&c| c == 0) {
                return false;
            }
            if acc.iter().any(|x| x.abs() > bound) {
                return false;
            }
            return f(coeffs, acc);
        }
        let p = self.pivots[depth];
        let r = self.rows[depth][p];
        // Rows below `depth` vanish at column p, so acc[p] is final after
        // choosing this coefficient: |acc[p] + c r| <= bound.
        let lo = div_ceil(-bound - acc[p], r);
        let hi = div_floor(bound - acc[p], r);
        let (lo, hi) = if r > 0 { (lo, hi) } else { (hi, lo) };
        for c in lo..=hi {
            for k in 0..4 {
                acc[k] += c * self.rows[depth][k];
            }
            coeffs[depth] = c as i64;
            if self.recurse(depth + 1, bound, coeffs, acc, f) {
                return true;
            }
            for k in 0..4 {
                acc[k] -= c * self.rows[depth][k];
            }
            coeffs[depth] = 0;
        }
        false
    }
}

fn div_floor(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn div_ceil(a: i128, b: i128) -> i128 {
    -div_floor(-a, b)
}

/// Integer quaternion product of scaled coordinate vectors (the common
/// denominator squares out of homogeneous identities).
pub fn scaled_mul(x: &[i128; 4], y: &[i128; 4], a: i128, b: i128) -> [i128; 4] {
    [
        x[0] * y[0] + a * x[1] * y[1] + b * x[2] * y[2] - a * b * x[3] * y[3],
        x[0] * y[1] + x[1] * y[0] - b * x[2] * y[3] + b * x[3] * y[2],
        x[0] * y[2] + x[2] * y[0] + a * x[1] * y[3] - a * x[3] * y[1],
        x[0] * y[3] + x[3] * y[0] + x[1] * y[2] - x[2] * y[1],
    ]
}

/// Reduced norm of a scaled coordinate vector (scaled by den^2).
pub fn scaled_norm(x: &[i128; 4], a: i128, b: i128) -> i128 {
    x[0] * x[0] - a * x[1] * x[1] - b * x[2] * x[2] + a * b * x[3] * x[3]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::QuaternionAlgebra;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(b(n), b(d))
    }

    fn hamilton() -> QuaternionAlgebra {
        QuaternionAlgebra::new(-1, -1).unwrap()
    }

    #[test]
    fn span_of_standard_basis_is_identity() {
        let q = hamilton();
        let l = QuatLattice::from_generators(&q, &[q.one(), q.i(), q.j(), q.k()]).unwrap();
        assert_eq!(l, QuatLattice::standard(&q));
    }

    #[test]
    fn enlarged_lattice_hnf() {
        // span of (2, 2i, 2j, 2ij, 1+i): HNF fixture computed by hand.
        let q = hamilton();
        let gens = vec![
            q.scalar(r(2, 1)),
            q.i().scale(&r(2, 1)),
            q.j().scale(&r(2, 1)),
            q.k().scale(&r(2, 1)),
            Quaternion::from_ints(q.clone(), [1, 1, 0, 0]),
        ];
        let l = QuatLattice::from_generators(&q, &gens).unwrap();
        let expect = vec![
            vec![r(1, 1), r(1, 1), r(0, 1), r(0, 1)],
            vec![r(0, 1), r(2, 1), r(0, 1), r(0, 1)],
            vec![r(0, 1), r(0, 1), r(2, 1), r(0, 1)],
            vec![r(0, 1), r(0, 1), r(0, 1), r(2, 1)],
        ];
        assert_eq!(l.basis(), &expect[..]);
    }

    #[test]
    fn dependent_generators_rejected() {
        let q = hamilton();
        let e = QuatLattice::from_generators(&q, &[q.one(), q.i(), q.one().add(&q.i())]);
        assert!(matches!(e, Err(Error::RankDeficient(2))));
    }

    #[test]
    fn membership_and_coords() {
        let q = hamilton();
        // Hurwitz lattice: 1, i, j, (1+i+j+ij)/2
        let w = Quaternion::from_rationals(q.clone(), [r(1, 2), r(1, 2), r(1, 2), r(1, 2)]);
        let l = QuatLattice::from_generators(&q, &[q.one(), q.i(), q.j(), w.clone()]).unwrap();
        assert!(l.contains(&w));
        assert!(l.contains(&q.k()));
        let half_i = q.i().scale(&r(1, 2));
        assert!(!l.contains(&half_i));
        let c = l.coords_of(&w).unwrap();
        assert_eq!(l.element_from_coords(&c), w);
    }

    #[test]
    fn intersection_of_scaled_lattices() {
        let q = hamilton();
        let std = QuatLattice::standard(&q);
        let doubled = std.scale(&r(2, 1));
        let inter = std.intersect(&doubled).unwrap();
        assert_eq!(inter, doubled);
        assert_eq!(doubled.index_in(&std).unwrap(), b(16));
    }

    #[test]
    fn scan_finds_exactly_the_box_points() {
        let q = hamilton();
        let std = QuatLattice::standard(&q);
        let scan = LatticeScan::new(std.basis()).unwrap();
        let mut count = 0usize;
        scan.scan_box(2, |_, _| {
            count += 1;
            false
        });
        assert_eq!(count, 5usize.pow(4) - 1);

        // shell scan visits the same points exactly once
        let mut count2 = 0usize;
        scan.scan_shells(2, |_, _| {
            count2 += 1;
            false
        });
        assert_eq!(count2, count);
    }

    #[test]
    fn scan_respects_height_on_denominator_lattices() {
        let q = hamilton();
        let w = Quaternion::from_rationals(q.clone(), [r(1, 2), r(1, 2), r(1, 2), r(1, 2)]);
        let l = QuatLattice::from_generators(&q, &[q.one(), q.i(), q.j(), w]).unwrap();
        let scan = LatticeScan::new(l.basis()).unwrap();
        let mut heights_ok = true;
        let mut seen_half = false;
        scan.scan_box(1, |_, v| {
            if v.iter().any(|x| x.abs() > scan.den) {
                heights_ok = false;
            }
            if v.iter().all(|x| x.abs() == 1) {
                seen_half = true; // a (±1/2, ..., ±1/2) point
            }
            false
        });
        assert!(heights_ok);
        assert!(seen_half);
    }

    #[test]
    fn scaled_arithmetic_matches_exact() {
        let q = QuaternionAlgebra::new(-6, 2).unwrap();
        let x = Quaternion::from_ints(q.clone(), [1, 2, -1, 3]);
        let y = Quaternion::from_ints(q.clone(), [0, 1, 4, -2]);
        let xv = [1i128, 2, -1, 3];
        let yv = [0i128, 1, 4, -2];
        let prod = scaled_mul(&xv, &yv, -6, 2);
        let exact = x.mul(&y);
        for k in 0..4 {
            assert_eq!(BigRational::from(b(prod[k] as i64)), exact.coords()[k]);
        }
        assert_eq!(
            BigRational::from(b(scaled_norm(&xv, -6, 2) as i64)),
            x.norm()
        );
    }
}
