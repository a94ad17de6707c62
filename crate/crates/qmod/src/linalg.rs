//! Exact linear algebra over Z and Q: Hermite and Smith normal forms,
//! integer kernels, determinants and inverses. Matrices are dense
//! row-major `Vec<Vec<_>>`; everything here is desk-scale (rank <= 8).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Canonical row Hermite normal form of an integer matrix: row echelon,
/// positive pivots, entries above each pivot reduced into `[0, pivot)`.
/// Zero rows are dropped, so the result is a basis of the row lattice.
pub fn integer_row_hnf(mat: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let (hnf, _, rank) = hnf_with_transform(mat);
    hnf.into_iter().take(rank).collect()
}

/// HNF together with the unimodular row transform `u` (`u * mat = hnf`,
/// zero rows included) and the rank.
pub fn hnf_with_transform(mut m: Vec<Vec<BigInt>>) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>, usize) {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut u: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| {
            (0..rows)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    let mut r = 0usize;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let pivot = (r..rows)
                .filter(|&i| !m[i][c].is_zero())
                .min_by_key(|&i| m[i][c].abs());
            let Some(imin) = pivot else { break };
            m.swap(r, imin);
            u.swap(r, imin);
            let mut all_clear = true;
            for i in r + 1..rows {
                if m[i][c].is_zero() {
                    continue;
                }
                let q = m[i][c].div_floor(&m[r][c]);
                row_sub(&mut m, i, r, &q);
                row_sub(&mut u, i, r, &q);
                if !m[i][c].is_zero() {
                    all_clear = false;
                }
            }
            if all_clear {
                break;
            }
        }
        if !m[r][c].is_zero() {
            if m[r][c].is_negative() {
                row_negate(&mut m, r);
                row_negate(&mut u, r);
            }
            for i in 0..r {
                let q = m[i][c].div_floor(&m[r][c]);
                if !q.is_zero() {
                    row_sub(&mut m, i, r, &q);
                    row_sub(&mut u, i, r, &q);
                }
            }
            r += 1;
        }
    }
    (m, u, r)
}

fn row_sub(m: &mut [Vec<BigInt>], i: usize, j: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for k in 0..m[i].len() {
        let t = &m[j][k] * q;
        m[i][k] -= t;
    }
}

fn row_negate(m: &mut [Vec<BigInt>], i: usize) {
    for x in &mut m[i] {
        *x = -std::mem::take(x);
    }
}

/// Basis (in HNF) of the left kernel `{ x : x * mat = 0 }`.
pub fn integer_kernel(mat: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let (_, u, rank) = hnf_with_transform(mat.to_vec());
    let kernel: Vec<Vec<BigInt>> = u.into_iter().skip(rank).collect();
    integer_row_hnf(kernel)
}

/// Canonical row HNF of a rational matrix (the row lattice over Z).
pub fn rational_row_hnf(mat: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let den = common_denominator(mat);
    let int: Vec<Vec<BigInt>> = mat
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| {
                    let scaled = x * BigRational::from(den.clone());
                    debug_assert!(scaled.is_integer());
                    scaled.to_integer()
                })
                .collect()
        })
        .collect();
    let hnf = integer_row_hnf(int);
    hnf.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|x| BigRational::new(x, den.clone()))
                .collect()
        })
        .collect()
}

/// Least common multiple of all denominators.
pub fn common_denominator(mat: &[Vec<BigRational>]) -> BigInt {
    let mut den = BigInt::one();
    for row in mat {
        for x in row {
            den = den.lcm(x.denom());
        }
    }
    den
}

/// Elementary divisors d_1 | d_2 | ... (nonnegative) of an integer matrix.
pub fn smith_elementary_divisors(mat: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut m: Vec<Vec<BigInt>> = mat.to_vec();
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut divisors = Vec::new();
    let mut t = 0usize;
    'outer: while t < rows.min(cols) {
        // Find a nonzero entry of minimal absolute value in the trailing block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !m[i][j].is_zero()
                    && best
                        .map(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                        .unwrap_or(true)
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        m.swap(t, bi);
        col_swap(&mut m, t, bj);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if !m[i][t].is_zero() {
                    let q = m[i][t].div_floor(&m[t][t]);
                    row_sub(&mut m, i, t, &q);
                    if !m[i][t].is_zero() {
                        m.swap(t, i);
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                if !m[t][j].is_zero() {
                    let q = m[t][j].div_floor(&m[t][t]);
                    col_sub(&mut m, j, t, &q);
                    if !m[t][j].is_zero() {
                        col_swap(&mut m, t, j);
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        // The pivot must divide every remaining entry for the divisor chain.
        for i in t + 1..rows {
            for j in t + 1..cols {
                if !(&m[i][j] % &m[t][t]).is_zero() {
                    // Fold the offending row into row t and restart the block.
                    for k in 0..cols {
                        let v = m[i][k].clone();
                        m[t][k] += v;
                    }
                    continue 'outer;
                }
            }
        }
        divisors.push(m[t][t].abs());
        t += 1;
    }
    divisors
}

fn col_swap(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    if a == b {
        return;
    }
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

fn col_sub(m: &mut [Vec<BigInt>], j: usize, t: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        let v = &row[t] * q;
        row[j] -= v;
    }
}

/// Determinant of a square rational matrix by fraction-friendly elimination.
pub fn rational_det(mat: &[Vec<BigRational>]) -> BigRational {
    let n = mat.len();
    let mut m: Vec<Vec<BigRational>> = mat.to_vec();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= m[c][c].clone();
        let inv = m[c][c].recip();
        for j in c..n {
            let v = &m[c][j] * &inv;
            m[c][j] = v;
        }
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..n {
                let t = &m[c][j] * &f;
                m[i][j] -= t;
            }
        }
    }
    det
}

/// Inverse of a square rational matrix, or `None` when singular.
pub fn rational_inverse(mat: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = mat.len();
    let mut m: Vec<Vec<BigRational>> = mat.to_vec();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(p, c);
        inv.swap(p, c);
        let f = m[c][c].recip();
        for j in 0..n {
            m[c][j] *= f.clone();
            inv[c][j] *= f.clone();
        }
        for i in 0..n {
            if i == c || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in 0..n {
                let t = &m[c][j] * &f;
                m[i][j] -= t;
                let t = &inv[c][j] * &f;
                inv[i][j] -= t;
            }
        }
    }
    Some(inv)
}

/// Matrix product of rational matrices.
pub fn rational_mul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = a.len();
    let k = b.len();
    let m = b[0].len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut s = BigRational::zero();
                    for t in 0..k {
                        s += &a[i][t] * &b[t][j];
                    }
                    s
                })
                .collect()
        })
        .collect()
}
