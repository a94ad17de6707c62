//! Imaginary quadratic fields Q(sqrt(d)) and their orders: fundamental
//! discriminants, conductors, roots of unity, and the generator list for
//! the 2-torsion subgroup of F(sqrt(-D))* / F* Omega used by the moduli
//! bounds.

use crate::arith;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// The field Q(sqrt(d)) for a squarefree radicand d != 0, 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadField {
    pub radicand: BigInt,
    pub fundamental_discriminant: BigInt,
}

impl QuadField {
    pub fn new(radicand: BigInt) -> Result<Self> {
        if radicand.is_zero() || radicand.is_one() {
            return Err(Error::invalid(
                "radicand",
                "must be a squarefree integer != 0, 1",
            ));
        }
        let f = arith::factor(&radicand)?;
        if !f.is_squarefree() {
            return Err(Error::NotSquarefree(radicand));
        }
        let fundamental_discriminant = if radicand.mod_floor(&BigInt::from(4)) == BigInt::one() {
            radicand.clone()
        } else {
            4 * &radicand
        };
        Ok(QuadField {
            radicand,
            fundamental_discriminant,
        })
    }

    pub fn is_imaginary(&self) -> bool {
        self.radicand.is_negative()
    }
}

/// The field Q(sqrt(-D)) for positive D, i.e. Q(sqrt(d)) with d the
/// squarefree part of -D.
pub fn make_field(d_pos: &BigInt) -> Result<QuadField> {
    if !d_pos.is_positive() {
        return Err(Error::NonPositiveDiscriminant);
    }
    QuadField::new(arith::squarefree_part(&-d_pos)?)
}

/// An element x + y sqrt(d) with rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadElem {
    pub field: QuadField,
    pub x: BigRational,
    pub y: BigRational,
}

impl QuadElem {
    pub fn new(field: QuadField, x: BigRational, y: BigRational) -> Self {
        QuadElem { field, x, y }
    }

    pub fn one(field: QuadField) -> Self {
        QuadElem::new(field, BigRational::one(), BigRational::zero())
    }

    pub fn mul(&self, other: &QuadElem) -> QuadElem {
        assert_eq!(self.field, other.field, "elements of different fields");
        let d = BigRational::from(self.field.radicand.clone());
        QuadElem {
            field: self.field.clone(),
            x: &self.x * &other.x + &d * &self.y * &other.y,
            y: &self.x * &other.y + &self.y * &other.x,
        }
    }

    pub fn conj(&self) -> QuadElem {
        QuadElem {
            field: self.field.clone(),
            x: self.x.clone(),
            y: -self.y.clone(),
        }
    }

    /// Field norm x^2 - d y^2.
    pub fn norm(&self) -> BigRational {
        let d = BigRational::from(self.field.radicand.clone());
        &self.x * &self.x - d * &self.y * &self.y
    }

    pub fn is_one(&self) -> bool {
        self.x.is_one() && self.y.is_zero()
    }

    pub fn pow(&self, e: u32) -> QuadElem {
        let mut acc = QuadElem::one(self.field.clone());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative order for elements of finite order, capped at `cap`.
    pub fn multiplicative_order(&self, cap: u32) -> Option<u32> {
        let mut acc = self.clone();
        for k in 1..=cap {
            if acc.is_one() {
                return Some(k);
            }
            acc = acc.mul(self);
        }
        None
    }
}

/// An order of given conductor in a quadratic field; conductor 1 is the
/// maximal order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadOrder {
    pub field: QuadField,
    pub conductor: BigInt,
}

impl QuadOrder {
    pub fn new(field: QuadField, conductor: BigInt) -> Result<Self> {
        if !conductor.is_positive() {
            return Err(Error::invalid("conductor", "must be >= 1"));
        }
        Ok(QuadOrder { field, conductor })
    }

    pub fn maximal(field: QuadField) -> Self {
        QuadOrder {
            field,
            conductor: BigInt::one(),
        }
    }

    /// Second basis element tau = f * omega over (1, sqrt(d)), where omega
    /// generates the maximal order.
    pub fn tau(&self) -> QuadElem {
        let f = BigRational::from(self.conductor.clone());
        let (tx, ty) = if self.field.fundamental_discriminant == self.field.radicand {
            // d = 1 mod 4: omega = (1 + sqrt(d)) / 2
            let half = BigRational::new(BigInt::one(), BigInt::from(2));
            (&f * &half, &f * &half)
        } else {
            (BigRational::zero(), f)
        };
        QuadElem::new(self.field.clone(), tx, ty)
    }

    /// Membership test via coordinates over the basis (1, tau).
    pub fn contains(&self, e: &QuadElem) -> bool {
        if e.field != self.field {
            return false;
        }
        let tau = self.tau();
        // y = t * tau.y with t integral, then x - t * tau.x integral.
        if tau.y.is_zero() {
            return false;
        }
        let t = &e.y / &tau.y;
        if !t.is_integer() {
            return false;
        }
        (&e.x - t * &tau.x).is_integer()
    }
}

/// The finite unit group of an imaginary quadratic order.
#[derive(Debug, Clone)]
pub struct RootsOfUnity {
    /// omega = |Omega|, the number of roots of unity in the order.
    pub omega: u32,
    /// Count of roots of odd multiplicative order (1 is always counted).
    pub omega_odd: u32,
    /// All roots of unity, as elements of the field.
    pub roots: Vec<QuadElem>,
}

/// Enumerates the roots of unity of an imaginary quadratic order. Units of
/// finite order have coordinates of absolute value at most 2 over (1, tau)
/// and norm 1, so a tiny box scan is exhaustive.
pub fn roots_of_unity(order: &QuadOrder) -> Result<RootsOfUnity> {
    if !order.field.is_imaginary() {
        return Err(Error::NotImaginary(order.field.radicand.clone()));
    }
    let tau = order.tau();
    let mut roots = Vec::new();
    for t1 in -2i64..=2 {
        for t2 in -2i64..=2 {
            let x =
                BigRational::from(BigInt::from(t1)) + BigRational::from(BigInt::from(t2)) * &tau.x;
            let y = BigRational::from(BigInt::from(t2)) * &tau.y;
            let e = QuadElem::new(order.field.clone(), x, y);
            if e.norm().is_one() {
                roots.push(e);
            }
        }
    }
    // Deterministic listing order.
    roots.sort_by(|a, b| (a.x.clone(), a.y.clone()).cmp(&(b.x.clone(), b.y.clone())));
    let mut omega_odd = 0u32;
    for r in &roots {
        let ord = r
            .multiplicative_order(6)
            .expect("imaginary quadratic unit group has exponent <= 6");
        if ord % 2 == 1 {
            omega_odd += 1;
        }
    }
    let omega = roots.len() as u32;
    debug_assert!(matches!(omega, 2 | 4 | 6));
    Ok(RootsOfUnity {
        omega,
        omega_odd,
        roots,
    })
}

/// Generator list for the 2-torsion of F(sqrt(-D))* / F* Omega: the class
/// of sqrt(-D) itself, plus xi_f^((f+1)/2) for every root of unity xi_f in
/// the order of odd order f >= 3.
pub fn u0_generators(d_pos: &BigInt, order: &QuadOrder) -> Result<Vec<QuadElem>> {
    let expected = make_field(d_pos)?;
    if expected.radicand != order.field.radicand {
        return Err(Error::FieldMismatch {
            expected: expected.radicand,
            found: order.field.radicand.clone(),
        });
    }
    // -D = radicand * s^2, so sqrt(-D) = s * sqrt(radicand).
    let s2 = (-d_pos) / &order.field.radicand;
    let s = arith::exact_sqrt(&s2).expect("squarefree part divides with square cofactor");
    let mut gens = vec![QuadElem::new(
        order.field.clone(),
        BigRational::zero(),
        BigRational::from(s),
    )];
    let units = roots_of_unity(order)?;
    let mut seen_orders = std::collections::BTreeSet::new();
    for r in &units.roots {
        let f = r.multiplicative_order(6).unwrap();
        if f >= 3 && f % 2 == 1 && seen_orders.insert(f) {
            gens.push(r.pow((f + 1) / 2));
        }
    }
    Ok(gens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn maximal(d: i64) -> QuadOrder {
        QuadOrder::maximal(QuadField::new(b(d)).unwrap())
    }

    #[test]
    fn make_field_examples() {
        let f = make_field(&b(10)).unwrap();
        assert_eq!(f.radicand, b(-10));
        assert_eq!(f.fundamental_discriminant, b(-40));

        let f = make_field(&b(3)).unwrap();
        assert_eq!(f.radicand, b(-3));
        assert_eq!(f.fundamental_discriminant, b(-3));

        // squarefree part collapses 12 to 3
        let f = make_field(&b(12)).unwrap();
        assert_eq!(f.radicand, b(-3));

        assert!(make_field(&b(0)).is_err());
    }

    #[test]
    fn unit_counts_match_bounded_enumeration() {
        // Gaussian integers: 1, -1, i, -i.
        let u = roots_of_unity(&maximal(-1)).unwrap();
        assert_eq!((u.omega, u.omega_odd), (4, 1));

        // Eisenstein integers: sixth roots of unity, three of odd order.
        let u = roots_of_unity(&maximal(-3)).unwrap();
        assert_eq!((u.omega, u.omega_odd), (6, 3));

        // Generic: just {1, -1}.
        let u = roots_of_unity(&maximal(-10)).unwrap();
        assert_eq!((u.omega, u.omega_odd), (2, 1));

        assert!(roots_of_unity(&maximal(5)).is_err());
    }

    #[test]
    fn every_root_is_an_omega_th_root_of_one() {
        for d in [-1i64, -2, -3, -5, -7, -10, -11] {
            let u = roots_of_unity(&maximal(d)).unwrap();
            for r in &u.roots {
                assert!(r.pow(u.omega).is_one());
            }
            assert!(u.omega_odd >= 1);
            assert_eq!(u.omega_odd % 2, 1);
            assert!(u.omega % u.omega_odd == 0);
        }
    }

    #[test]
    fn composite_squarefree_d_has_generic_units() {
        // Consistent with the rank-one generic case of the moduli bounds.
        for d in [6i64, 10, 14, 15, 21, 22, 26, 33, 35] {
            let f = make_field(&b(d)).unwrap();
            let u = roots_of_unity(&QuadOrder::maximal(f)).unwrap();
            assert_eq!((u.omega, u.omega_odd), (2, 1), "d = {d}");
        }
    }

    #[test]
    fn u0_generator_lists() {
        // D = 10: only the class of sqrt(-10).
        let gens = u0_generators(&b(10), &maximal(-10)).unwrap();
        assert_eq!(gens.len(), 1);
        assert_eq!(gens[0].y, BigRational::one());
        assert_eq!(gens[0].x, BigRational::zero());

        // D = 6: units are just +-1.
        let gens = u0_generators(&b(6), &maximal(-6)).unwrap();
        assert_eq!(gens.len(), 1);

        // D = 3: sqrt(-3) and the square of a primitive cube root.
        let gens = u0_generators(&b(3), &maximal(-3)).unwrap();
        assert_eq!(gens.len(), 2);
        let zeta_sq = &gens[1];
        // its square has order 3 and it squares into the cube roots
        assert_eq!(zeta_sq.multiplicative_order(6), Some(3));

        // Field mismatch is rejected.
        assert!(u0_generators(&b(10), &maximal(-6)).is_err());
    }

    #[test]
    fn u0_generator_from_scaled_radicand() {
        // D = 12 has squarefree part 3, so sqrt(-12) = 2 sqrt(-3).
        let gens = u0_generators(&b(12), &maximal(-3)).unwrap();
        assert_eq!(gens[0].y, BigRational::from(b(2)));
        // generator squares to -12 in the field
        let sq = gens[0].mul(&gens[0]);
        assert_eq!(sq.x, BigRational::from(b(-12)));
        assert!(sq.y.is_zero());
    }

    #[test]
    fn order_membership() {
        let o = maximal(-3);
        let half = BigRational::new(b(1), b(2));
        // (1 + sqrt(-3)) / 2 generates the maximal order
        let w = QuadElem::new(o.field.clone(), half.clone(), half.clone());
        assert!(o.contains(&w));
        // but is not in the conductor-2 order
        let o2 = QuadOrder::new(o.field.clone(), b(2)).unwrap();
        assert!(!o2.contains(&w));
        assert!(o2.contains(&w.mul(&w.conj())));
    }
}
