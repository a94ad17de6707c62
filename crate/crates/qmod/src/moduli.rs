//! The group apparatus attached to a principally polarized maximal order
//! (O, mu) over Q: Atkin-Lehner representatives, the subgroup U0 read off
//! the quadratic order R_mu, twist search and V0, the stable group
//! W0 = U0.V0, and the (trivial over Q) narrow Picard quotient that
//! pins the Eichler type count.

use crate::algebra::{divisors, Quaternion};
use crate::arith::{exact_sqrt, factor, squarefree_part};
use crate::error::{Error, Result};
use crate::lattice::{scaled_norm, LatticeScan};
use crate::linalg;
use crate::order::{
    anticommutant_conditions, conditioned_sublattice, trace_zero_sublattice, QuatOrder,
    SearchOutcome,
};
use crate::quad::{self, QuadElem, QuadOrder};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A maximal order together with a pure quaternion mu in it satisfying
/// mu^2 + D = 0 for D the algebra discriminant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolarizedOrder {
    order: QuatOrder,
    mu: Quaternion,
}

impl PolarizedOrder {
    pub fn new(order: QuatOrder, mu: Quaternion) -> Result<Self> {
        if !order.is_maximal() {
            return Err(Error::NotMaximal {
                disc: order.reduced_discriminant().clone(),
                target: order.algebra().discriminant().clone(),
            });
        }
        if !order.contains(&mu) {
            return Err(Error::invalid(
                "polarization",
                "mu does not lie in the order",
            ));
        }
        if !mu.trace().is_zero() {
            return Err(Error::invalid("polarization", "mu must have trace zero"));
        }
        let d = order.algebra().discriminant().clone();
        let target = order.algebra().scalar(BigRational::from(-d));
        if mu.mul(&mu) != target {
            return Err(Error::invalid("polarization", "mu^2 + D != 0"));
        }
        Ok(PolarizedOrder { order, mu })
    }

    pub fn order(&self) -> &QuatOrder {
        &self.order
    }

    pub fn mu(&self) -> &Quaternion {
        &self.mu
    }

    pub fn discriminant(&self) -> &BigInt {
        self.order.algebra().discriminant()
    }
}

/// Bounded search for a polarization mu (trace 0, mu^2 = -D) in a maximal
/// order. Existence is guaranteed by the theory of optimal embeddings, so
/// persistent exhaustion at generous bounds flags a defect upstream.
pub fn find_polarization(order: &QuatOrder, bound: u32) -> Result<SearchOutcome<PolarizedOrder>> {
    let d = order.algebra().discriminant().clone();
    let algebra = order.algebra().clone();
    let a = algebra.a().to_i128().ok_or(Error::SearchOverflow)?;
    let b = algebra.b().to_i128().ok_or(Error::SearchOverflow)?;
    let sub = trace_zero_sublattice(order);
    let scan = LatticeScan::new(&sub)?;
    let target = d.to_i128().ok_or(Error::SearchOverflow)? * scan.den * scan.den;
    let mut found = None;
    scan.scan_shells(bound, |_, v| {
        if scaled_norm(v, a, b) != target {
            return false;
        }
        let mu = Quaternion::from_rationals(
            algebra.clone(),
            [
                BigRational::new(BigInt::from(v[0]), BigInt::from(scan.den)),
                BigRational::new(BigInt::from(v[1]), BigInt::from(scan.den)),
                BigRational::new(BigInt::from(v[2]), BigInt::from(scan.den)),
                BigRational::new(BigInt::from(v[3]), BigInt::from(scan.den)),
            ],
        );
        match PolarizedOrder::new(order.clone(), mu) {
            Ok(p) => {
                found = Some(p);
                true
            }
            Err(_) => false,
        }
    });
    Ok(match found {
        Some(p) => SearchOutcome::Found(p),
        None => SearchOutcome::Inconclusive,
    })
}

/// Scans elements of the order whose reduced norm hits one of `targets`,
/// in ascending prefix shells (coefficients of the first three basis
/// vectors; the last coefficient is solved from the norm form). The
/// visitor returns true to stop.
fn scan_norm_candidates(
    order: &QuatOrder,
    targets: &[BigInt],
    bound: u32,
    mut visit: impl FnMut(Quaternion) -> bool,
) -> Result<()> {
    let (den_big, rows_big) = order.lattice().scaled_integer_basis();
    let den = den_big.to_i128().ok_or(Error::SearchOverflow)?;
    let mut rows = [[0i128; 4]; 4];
    for (i, row) in rows_big.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            rows[i][j] = x.to_i128().ok_or(Error::SearchOverflow)?;
            if rows[i][j].abs() > (1 << 30) {
                return Err(Error::SearchOverflow);
            }
        }
    }
    // Doubled Gram matrix of the norm form over the (unscaled) basis:
    // 2 n(sum c_i e_i) = c^T T c with T integral.
    let basis = order.basis_elements();
    let mut t = [[0i128; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let tij = basis[i].mul(&basis[j].conj()).trace();
            debug_assert!(tij.is_integer());
            t[i][j] = tij.to_integer().to_i128().ok_or(Error::SearchOverflow)?;
        }
    }
    let targets2: Vec<i128> = targets
        .iter()
        .map(|x| x.to_i128().map(|v| 2 * v).ok_or(Error::SearchOverflow))
        .collect::<Result<_>>()?;
    let hb = bound as i128 * den;

    // prefix coefficient ranges from the echelon pivots (HNF pivots are
    // positive)
    let range =
        |acc: i128, r: i128| -> (i128, i128) { (div_ceil(-hb - acc, r), div_floor(hb - acc, r)) };

    let a_coef = t[3][3];
    for shell in 0..=bound {
        let sb = shell as i128 * den;
        let (lo0, hi0) = range(0, rows[0][0]);
        for c0 in lo0..=hi0 {
            let x0 = c0 * rows[0][0];
            if x0.abs() > sb {
                continue;
            }
            let (lo1, hi1) = range(c0 * rows[0][1], rows[1][1]);
            for c1 in lo1..=hi1 {
                let x1 = c0 * rows[0][1] + c1 * rows[1][1];
                if x1.abs() > sb {
                    continue;
                }
                let (lo2, hi2) = range(c0 * rows[0][2] + c1 * rows[1][2], rows[2][2]);
                for c2 in lo2..=hi2 {
                    let x2 = c0 * rows[0][2] + c1 * rows[1][2] + c2 * rows[2][2];
                    if x2.abs() > sb {
                        continue;
                    }
                    // keep only prefixes on the current shell so the scan
                    // grows outward; shell 0 admits the zero prefix
                    let pre_h = x0.abs().max(x1.abs()).max(x2.abs());
                    if shell > 0 && pre_h <= sb - den {
                        continue;
                    }
                    let c = [c0, c1, c2];
                    // 2n = A c3^2 + B c3 + C
                    let b_coef: i128 = 2 * (t[3][0] * c0 + t[3][1] * c1 + t[3][2] * c2);
                    let mut c_coef: i128 = 0;
                    for i in 0..3 {
                        for j in 0..3 {
                            c_coef += t[i][j] * c[i] * c[j];
                        }
                    }
                    for t2 in &targets2 {
                        for c3 in solve_quadratic(a_coef, b_coef, c_coef - t2) {
                            let x3 = c0 * rows[0][3]
                                + c1 * rows[1][3]
                                + c2 * rows[2][3]
                                + c3 * rows[3][3];
                            if x3.abs() > hb {
                                continue;
                            }
                            let coords = [
                                BigRational::new(BigInt::from(x0), den_big.clone()),
                                BigRational::new(BigInt::from(x1), den_big.clone()),
                                BigRational::new(BigInt::from(x2), den_big.clone()),
                                BigRational::new(BigInt::from(x3), den_big.clone()),
                            ];
                            let cand = Quaternion::from_rationals(order.algebra().clone(), coords);
                            debug_assert!(order.contains(&cand));
                            if visit(cand) {
                                return Ok(());
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
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

/// Integer roots of A x^2 + B x + C = 0 (A may be zero).
fn solve_quadratic(a: i128, b: i128, c: i128) -> Vec<i128> {
    if a == 0 {
        if b == 0 {
            return Vec::new(); // constant; the zero case is uninteresting
        }
        return if c % b == 0 { vec![-c / b] } else { Vec::new() };
    }
    let disc = b * b - 4 * a * c;
    if disc < 0 {
        return Vec::new();
    }
    let s = isqrt_i128(disc);
    if s * s != disc {
        return Vec::new();
    }
    let mut out = Vec::new();
    for num in [-b + s, -b - s] {
        if num % (2 * a) == 0 {
            let root = num / (2 * a);
            if !out.contains(&root) {
                out.push(root);
            }
        }
    }
    out
}

fn isqrt_i128(n: i128) -> i128 {
    debug_assert!(n >= 0);
    if n < 2 {
        return n;
    }
    // float seed can be off by many ulps near 2^127, so correct both ways
    let mut x = (n as f64).sqrt() as i128 + 2;
    while x > 0 && x * x > n {
        x = (x + n / x) / 2;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Atkin-Lehner data for a maximal order of discriminant D > 1: one
/// representative per positive divisor d | D, of reduced norm d times a
/// square, normalizing the order. |W| = 2^(2r).
#[derive(Debug, Clone)]
pub struct AtkinLehnerGroup {
    pub d: BigInt,
    pub reps: Vec<(BigInt, SearchOutcome<Quaternion>)>,
    pub group_order: BigInt,
    pub conclusive: bool,
}

impl AtkinLehnerGroup {
    pub fn rep(&self, d: &BigInt) -> Option<&Quaternion> {
        self.reps
            .iter()
            .find(|(dd, _)| dd == d)
            .and_then(|(_, o)| match o {
                SearchOutcome::Found(q) => Some(q),
                SearchOutcome::Inconclusive => None,
            })
    }
}

/// Finds Atkin-Lehner representatives by bounded norm-target search: for
/// each d | D an element of norm d (then d s^2 for small s) whose
/// conjugation fixes the order exactly.
pub fn atkin_lehner_group(order: &QuatOrder, bound: u32) -> Result<AtkinLehnerGroup> {
    let d = order.algebra().discriminant().clone();
    if !order.is_maximal() {
        return Err(Error::NotMaximal {
            disc: order.reduced_discriminant().clone(),
            target: d,
        });
    }
    if d.is_one() {
        return Err(Error::invalid(
            "atkin-lehner",
            "the split algebra has trivial Atkin-Lehner group",
        ));
    }
    let f = factor(&d)?;
    let divs = divisors(&f);
    let mut reps = Vec::new();
    let mut conclusive = true;
    for div in &divs {
        if div.is_one() {
            reps.push((BigInt::one(), SearchOutcome::Found(order.algebra().one())));
            continue;
        }
        // norm targets d, 4d, 9d, ...: representatives are defined up to
        // rational squares
        let targets: Vec<BigInt> = (1..=5u32).map(|s| div * BigInt::from(s * s)).collect();
        let mut witness = None;
        scan_norm_candidates(order, &targets, bound, |cand| {
            if order.is_normalized_by(&cand) {
                witness = Some(cand);
                true
            } else {
                false
            }
        })?;
        match witness {
            Some(w) => {
                debug_assert_eq!(squarefree_part(&w.norm().to_integer()).unwrap(), *div);
                reps.push((div.clone(), SearchOutcome::Found(w)));
            }
            None => {
                conclusive = false;
                reps.push((div.clone(), SearchOutcome::Inconclusive));
            }
        }
    }
    let group_order = BigInt::from(2).pow(f.factors.len() as u32);
    debug_assert_eq!(BigInt::from(divs.len()), group_order);
    Ok(AtkinLehnerGroup {
        d,
        reps,
        group_order,
        conclusive,
    })
}

/// The quadratic order R_mu = (Q + Q mu) cap O together with its unit
/// counts; U0 is elementary 2-abelian of rank omega_odd, generated by the
/// class of mu (and the half-power of any odd root of unity present).
#[derive(Debug, Clone)]
pub struct U0Structure {
    pub r_mu: QuadOrder,
    pub omega: u32,
    pub omega_odd: u32,
    /// rank of U0 as an elementary abelian 2-group
    pub rank: u32,
    pub generators: Vec<QuadElem>,
}

pub fn u0_structure(p: &PolarizedOrder) -> Result<U0Structure> {
    let r_mu = compute_r_mu(p)?;
    let units = quad::roots_of_unity(&r_mu)?;
    let generators = quad::u0_generators(p.discriminant(), &r_mu)?;
    Ok(U0Structure {
        r_mu,
        omega: units.omega,
        omega_odd: units.omega_odd,
        rank: units.omega_odd,
        generators,
    })
}

/// Intersects the plane Q + Q mu with the order and matches the result to
/// a quadratic order by conductor.
fn compute_r_mu(p: &PolarizedOrder) -> Result<QuadOrder> {
    let order = p.order();
    let one_c = order
        .lattice()
        .coords_of(&order.algebra().one())
        .expect("1 lies in every order");
    let mu_c = order
        .lattice()
        .coords_of(p.mu())
        .expect("mu lies in the order");
    // K = {(x, y) in Q^2 : x*1 + y*mu in O}; K is (1/g)-integral for g the
    // gcd of the nonzero 2x2 minors of the coordinate rows.
    let mut g = BigInt::zero();
    for i in 0..4 {
        for j in i + 1..4 {
            let minor = &one_c[i] * &mu_c[j] - &one_c[j] * &mu_c[i];
            g = g.gcd(&minor);
        }
    }
    debug_assert!(!g.is_zero(), "1 and mu are independent");
    // lattice N*K = {(u,v): u*one_c + v*mu_c = 0 mod N}
    let n = g;
    let mut stacked: Vec<Vec<BigInt>> = vec![one_c.to_vec(), mu_c.to_vec()];
    for k in 0..4 {
        let mut row = vec![BigInt::zero(); 4];
        row[k] = n.clone();
        stacked.push(row);
    }
    let kernel = linalg::integer_kernel(&stacked);
    let mut rows: Vec<Vec<BigRational>> = kernel
        .iter()
        .map(|z| {
            vec![
                BigRational::new(z[0].clone(), n.clone()),
                BigRational::new(z[1].clone(), n.clone()),
            ]
        })
        .collect();
    rows = linalg::rational_row_hnf(&rows);
    debug_assert_eq!(rows.len(), 2);

    // sanity: K is a ring containing (1, 0), with mu^2 = -D
    let d = p.discriminant().clone();
    let mul_k = |u: &[BigRational], v: &[BigRational]| -> [BigRational; 2] {
        [
            &u[0] * &v[0] - BigRational::from(d.clone()) * &u[1] * &v[1],
            &u[0] * &v[1] + &u[1] * &v[0],
        ]
    };
    let contains = |v: &[BigRational; 2]| -> bool {
        // membership in the row lattice of `rows` (2x2 echelon,
        // pivots in columns 0 and 1)
        let c0 = &v[0] / &rows[0][0];
        if !c0.is_integer() {
            return false;
        }
        ((&v[1] - c0 * &rows[0][1]) / &rows[1][1]).is_integer()
    };
    assert!(contains(&[BigRational::one(), BigRational::zero()]));
    for u in 0..2 {
        for v in 0..2 {
            let prod = mul_k(&rows[u], &rows[v]);
            assert!(contains(&prod), "R_mu must be closed under multiplication");
        }
    }

    // Convert to the field Q(sqrt(radicand)): mu corresponds to
    // s*sqrt(radicand) where -D = radicand * s^2. The conductor comes
    // from disc(R_mu) = 4 * radicand * det^2 = f^2 * disc(field).
    let field = quad::make_field(&d)?;
    let s2 = (-&d) / &field.radicand;
    let s = exact_sqrt(&s2).expect("square cofactor");
    let det = (&rows[0][0] * &rows[1][1] * BigRational::from(s.clone())).abs();
    let conductor = if field.fundamental_discriminant == field.radicand {
        (det * BigRational::from(BigInt::from(2))).to_integer()
    } else {
        det.to_integer()
    };
    let quad_order = QuadOrder::new(field, conductor)?;
    // cross-check: the conductor-f order has exactly this lattice
    let tau = quad_order.tau();
    let expect = linalg::rational_row_hnf(&[
        vec![BigRational::one(), BigRational::zero()],
        vec![tau.x.clone(), &tau.y / BigRational::from(s)],
    ]);
    assert_eq!(expect, rows, "R_mu must match the conductor-f order");
    Ok(quad_order)
}

/// A twist of (O, mu): a trace-zero element of O of negative norm that
/// anticommutes with mu and normalizes O. The label is the squarefree
/// part of minus its norm, a divisor of D.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Twist {
    pub element: Quaternion,
    pub label: BigInt,
}

/// Search outcome for the twists of a polarized order.
#[derive(Debug, Clone)]
pub struct TwistReport {
    pub polarized: PolarizedOrder,
    pub twists: Vec<Twist>,
    pub u0_order: u64,
    pub v0_order: u64,
    pub w0_order: u64,
    pub search_bound: u32,
    /// true when either the algebra-level classification rules twists out,
    /// or a twist was found for every predicted parameter.
    pub conclusive: bool,
}

/// Enumerates twists of height at most `bound` inside the rank-2 plane of
/// trace-zero mu-anticommuting elements of the order, each verified
/// exactly; products with mu are included so both labels of a twisting
/// pair appear.
pub fn find_twists(p: &PolarizedOrder, bound: u32) -> Result<TwistReport> {
    let order = p.order();
    let algebra = order.algebra().clone();
    let a = algebra.a().to_i128().ok_or(Error::SearchOverflow)?;
    let b = algebra.b().to_i128().ok_or(Error::SearchOverflow)?;
    let d = p.discriminant().clone();
    let classification = crate::algebra::twisting_classification(&d)?;

    let plane = conditioned_sublattice(order, &anticommutant_conditions(&algebra, p.mu()));
    debug_assert_eq!(
        plane.len(),
        2,
        "the mu-anticommutant of trace zero has rank 2"
    );
    let scan = LatticeScan::new(&plane)?;

    let mut twists: Vec<Twist> = Vec::new();
    let push_twist = |q: Quaternion, twists: &mut Vec<Twist>| -> Result<()> {
        let norm = q.norm();
        debug_assert!(norm.is_integer());
        let label = squarefree_part(&-norm.to_integer())?;
        debug_assert!((&d % &label).is_zero(), "twist labels divide D");
        if !twists.iter().any(|t| t.element == q) {
            twists.push(Twist { element: q, label });
        }
        Ok(())
    };

    let mut candidates: Vec<Quaternion> = Vec::new();
    scan.scan_box(bound, |c, v| {
        // primitive representative with canonical sign
        if num_integer::gcd(c[0], c[1]) != 1 {
            return false;
        }
        if *c.iter().find(|x| **x != 0).unwrap_or(&0) < 0 {
            return false;
        }
        if scaled_norm(v, a, b) >= 0 {
            return false;
        }
        candidates.push(Quaternion::from_rationals(
            algebra.clone(),
            [
                BigRational::new(BigInt::from(v[0]), BigInt::from(scan.den)),
                BigRational::new(BigInt::from(v[1]), BigInt::from(scan.den)),
                BigRational::new(BigInt::from(v[2]), BigInt::from(scan.den)),
                BigRational::new(BigInt::from(v[3]), BigInt::from(scan.den)),
            ],
        ));
        false
    });
    for chi in candidates {
        // exact verification of the defining relations
        if !chi.trace().is_zero() || !p.mu().anticommutes_with(&chi) {
            continue;
        }
        if !chi.norm().is_negative() {
            continue;
        }
        let sq = chi.mul(&chi);
        if sq != algebra.scalar(-chi.norm()) {
            continue;
        }
        if !order.is_normalized_by(&chi) {
            continue;
        }
        push_twist(chi.clone(), &mut twists)?;
        // mu * chi is again a twist carrying the complementary label
        let mu_chi = p.mu().mul(&chi);
        if mu_chi.trace().is_zero()
            && p.mu().anticommutes_with(&mu_chi)
            && mu_chi.norm().is_negative()
            && order.is_normalized_by(&mu_chi)
        {
            push_twist(mu_chi, &mut twists)?;
        }
    }

    // the algebra-level obstruction: no twists exist unless B is twisting
    if !classification.is_twisting {
        assert!(
            twists.is_empty(),
            "twist found in a non-twisting algebra: defect"
        );
    }

    let u0 = u0_structure(p)?;
    let u0_order = 1u64 << u0.rank;
    let labels: Vec<BigInt> = twists.iter().map(|t| t.label.clone()).collect();
    let v0: Vec<BigInt> = label_closure(&labels);
    let mut w0_gen = labels;
    w0_gen.push(d.clone());
    let w0: Vec<BigInt> = label_closure(&w0_gen);

    let conclusive = if classification.is_twisting {
        classification
            .twisting_params
            .iter()
            .all(|m| twists.iter().any(|t| &t.label == m))
    } else {
        true
    };

    Ok(TwistReport {
        polarized: p.clone(),
        twists,
        u0_order,
        v0_order: v0.len() as u64,
        w0_order: w0.len() as u64,
        search_bound: bound,
        conclusive,
    })
}

/// Subgroup of squarefree divisor labels generated by the given labels
/// under d * d' / gcd(d, d')^2, always containing 1.
pub fn label_closure(labels: &[BigInt]) -> Vec<BigInt> {
    let mut set: std::collections::BTreeSet<BigInt> = std::collections::BTreeSet::new();
    set.insert(BigInt::one());
    let mut changed = true;
    while changed {
        changed = false;
        let current: Vec<BigInt> = set.iter().cloned().collect();
        for l in labels {
            for c in &current {
                let g = l.gcd(c);
                let prod = (l * c) / (&g * &g);
                if set.insert(prod) {
                    changed = true;
                }
            }
        }
    }
    set.into_iter().collect()
}

/// The stable group W0 = U0.V0 as a set of divisor labels: U0 alone in
/// the non-twisting case, the order-4 set {1, m, D/m, D} when twisting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableGroup {
    pub order: u64,
    pub elements: Vec<BigInt>,
    pub conclusive: bool,
}

pub fn stable_group(p: &PolarizedOrder, report: &TwistReport) -> StableGroup {
    let d = p.discriminant().clone();
    let mut gens: Vec<BigInt> = report.twists.iter().map(|t| t.label.clone()).collect();
    gens.push(d);
    let elements = label_closure(&gens);
    StableGroup {
        order: elements.len() as u64,
        elements,
        conclusive: report.conclusive,
    }
}

/// The narrow Picard quotient classifying Eichler order types: trivial
/// over Q (class number one), so every level has a single type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NarrowPicardQuotient {
    pub level: BigInt,
    pub order: u32,
    pub eichler_type_count: u32,
}

pub fn narrow_picard_quotient(level: &BigInt) -> NarrowPicardQuotient {
    NarrowPicardQuotient {
        level: level.clone(),
        order: 1,
        eichler_type_count: 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::QuaternionAlgebra;
    use crate::order::{saturate_to_maximal, standard_order};
    use num_traits::Signed;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn maximal_order_of(d: i64) -> QuatOrder {
        let alg = crate::algebra::algebra_of_discriminant(&b(d)).unwrap();
        saturate_to_maximal(&standard_order(&alg)).unwrap()
    }

    fn polarized(d: i64) -> PolarizedOrder {
        let o = maximal_order_of(d);
        find_polarization(&o, 40)
            .unwrap()
            .found()
            .expect("polarization exists")
    }

    #[test]
    fn polarization_in_matrix_algebra() {
        let o = saturate_to_maximal(&standard_order(&QuaternionAlgebra::split())).unwrap();
        let p = find_polarization(&o, 5).unwrap().found().unwrap();
        let alg = o.algebra().clone();
        assert_eq!(p.mu().mul(p.mu()), alg.scalar(BigRational::from(b(-1))));
    }

    #[test]
    fn polarization_bound_zero_is_inconclusive() {
        let o = maximal_order_of(6);
        assert!(matches!(
            find_polarization(&o, 0).unwrap(),
            SearchOutcome::Inconclusive
        ));
    }

    #[test]
    fn polarized_order_validation() {
        let o = maximal_order_of(6);
        let bad_mu = o.algebra().one();
        assert!(PolarizedOrder::new(o.clone(), bad_mu).is_err());
        // non-maximal order rejected
        let std = standard_order(o.algebra());
        let i = o.algebra().i();
        assert!(PolarizedOrder::new(std, i).is_err());
    }

    #[test]
    fn polarization_squares_to_minus_d() {
        for d in [6i64, 10, 15] {
            let p = polarized(d);
            assert_eq!(
                p.mu().mul(p.mu()),
                p.order().algebra().scalar(BigRational::from(b(-d)))
            );
        }
    }

    #[test]
    fn atkin_lehner_group_for_six_and_ten() {
        for d in [6i64, 10] {
            let o = maximal_order_of(d);
            let w = atkin_lehner_group(&o, 50).unwrap();
            assert!(w.conclusive, "D = {d}");
            assert_eq!(w.group_order, b(4));
            assert_eq!(w.reps.len(), 4);
            for (div, rep) in &w.reps {
                let q = match rep {
                    SearchOutcome::Found(q) => q,
                    SearchOutcome::Inconclusive => panic!("missing rep for {div}"),
                };
                assert!(o.is_normalized_by(q), "w_{div} normalizes");
                let n = q.norm().to_integer();
                assert!(n.is_positive());
                assert_eq!(squarefree_part(&n).unwrap(), *div);
            }
        }
    }

    #[test]
    fn u0_is_rank_one_for_composite_discriminants() {
        for d in [6i64, 10, 14] {
            let p = polarized(d);
            let u0 = u0_structure(&p).unwrap();
            assert_eq!(u0.rank, 1, "D = {d}");
            assert_eq!(u0.omega, 2);
            assert_eq!(u0.omega_odd, 1);
            assert_eq!(u0.r_mu.field.radicand, b(-d));
            assert_eq!(u0.generators.len(), 1);
        }
    }

    #[test]
    fn twists_for_discriminant_ten() {
        let p = polarized(10);
        let rep = find_twists(&p, 25).unwrap();
        assert!(rep.conclusive);
        assert!(!rep.twists.is_empty());
        let labels: std::collections::BTreeSet<BigInt> =
            rep.twists.iter().map(|t| t.label.clone()).collect();
        assert_eq!(labels, [b(2), b(5)].into_iter().collect());
        for t in &rep.twists {
            assert!(t.element.trace().is_zero());
            assert!(t.element.norm().is_negative());
            assert!(p.mu().anticommutes_with(&t.element));
            assert!(p.order().is_normalized_by(&t.element));
            // chi^2 + n(chi) = 0
            assert_eq!(
                t.element.mul(&t.element),
                p.order().algebra().scalar(-t.element.norm())
            );
        }
        assert_eq!(rep.u0_order, 2);
        assert_eq!(rep.v0_order, 4);
        assert_eq!(rep.w0_order, 4);
    }

    #[test]
    fn zero_bound_twist_search_is_inconclusive() {
        let p = polarized(10);
        let rep = find_twists(&p, 0).unwrap();
        assert!(rep.twists.is_empty());
        assert!(
            !rep.conclusive,
            "a twisting algebra with no witnesses is inconclusive"
        );
    }

    #[test]
    fn no_twists_for_non_twisting_discriminant() {
        let p = polarized(14);
        let rep = find_twists(&p, 25).unwrap();
        assert!(rep.conclusive);
        assert!(rep.twists.is_empty());
        assert_eq!(rep.v0_order, 1);
        assert_eq!(rep.w0_order, 2);
    }

    #[test]
    fn stable_group_dichotomy() {
        let p = polarized(10);
        let rep = find_twists(&p, 25).unwrap();
        let w0 = stable_group(&p, &rep);
        assert_eq!(w0.order, 4);
        assert_eq!(w0.elements, vec![b(1), b(2), b(5), b(10)]);

        let p = polarized(14);
        let rep = find_twists(&p, 25).unwrap();
        let w0 = stable_group(&p, &rep);
        assert_eq!(w0.order, 2);
        assert_eq!(w0.elements, vec![b(1), b(14)]);
    }

    #[test]
    fn mu_times_twist_is_again_a_twist() {
        let p = polarized(6);
        let rep = find_twists(&p, 25).unwrap();
        assert!(rep.conclusive);
        for t in &rep.twists {
            let prod = p.mu().mul(&t.element);
            assert!(prod.trace().is_zero());
            assert!(p.mu().anticommutes_with(&prod));
            assert!(p.order().is_normalized_by(&prod));
        }
    }

    #[test]
    fn picard_quotient_is_trivial() {
        for n in [1i64, 12, 97] {
            let p = narrow_picard_quotient(&b(n));
            assert_eq!(p.order, 1);
            assert_eq!(p.eichler_type_count, 1);
        }
    }

    #[test]
    fn integer_square_roots_are_exact() {
        for n in 0i128..1000 {
            let s = isqrt_i128(n);
            assert!(s * s <= n && (s + 1) * (s + 1) > n, "n = {n}");
        }
        for k in [1i128 << 40, (1 << 60) - 3, 1 << 62] {
            for n in [k * k - 1, k * k, k * k + 1] {
                let s = isqrt_i128(n);
                assert!(s * s <= n && (s + 1) * (s + 1) > n, "n = {n}");
            }
        }
        assert_eq!(solve_quadratic(1, 0, -(1 << 62)), vec![1 << 31, -(1 << 31)]);
        assert_eq!(solve_quadratic(1, -3, 2), vec![2, 1]);
        assert_eq!(solve_quadratic(0, 2, -6), vec![3]);
        assert!(solve_quadratic(1, 0, 3).is_empty());
    }

    #[test]
    fn label_closure_examples() {
        let c = label_closure(&[b(2), b(5)]);
        assert_eq!(c, vec![b(1), b(2), b(5), b(10)]);
        let c = label_closure(&[b(10)]);
        assert_eq!(c, vec![b(1), b(10)]);
        assert_eq!(label_closure(&[]), vec![b(1)]);
    }
}
