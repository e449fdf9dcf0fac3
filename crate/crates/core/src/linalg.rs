//! Exact linear algebra used by the coloring lab: row reduction over prime
//! fields (dense and sparse), fraction-free determinants, and a
//! multi-modular determinant for large sparse integer matrices.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::primes::is_prime;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Modular inverse by Fermat's little theorem (`p` prime, `a ≠ 0 mod p`).
pub fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut base, mut exp, mut acc) = (a % p, p - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Reduced row echelon form over `GF(p)`.  Returns the nonzero rows (each
/// with leading entry 1) and their pivot columns, both in increasing order.
pub fn rref_mod(mut rows: Vec<Vec<u64>>, ncols: usize, p: u64) -> (Vec<Vec<u64>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(k) = (r..rows.len()).find(|&k| rows[k][c] % p != 0) else {
            continue;
        };
        rows.swap(r, k);
        let inv = inv_mod(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let pivot_row = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k == r || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = (*x + p - mul_mod(f, y, p)) % p;
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

/// A basis of the right null space `{x : A x = 0}` over `GF(p)`, one vector
/// per free column, in RREF-dual form.
pub fn nullspace_mod(rows: Vec<Vec<u64>>, ncols: usize, p: u64) -> Vec<Vec<u64>> {
    let (r, pivots) = rref_mod(rows, ncols, p);
    let mut is_pivot = vec![false; ncols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    (0..ncols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![0; ncols];
            v[f] = 1;
            for (row, &c) in r.iter().zip(&pivots) {
                v[c] = (p - row[f] % p) % p;
            }
            v
        })
        .collect()
}

/// A sparse row: `(column, value)` pairs sorted by column, values nonzero.
pub type SparseRow = Vec<(usize, u64)>;

fn axpy(target: &SparseRow, factor: u64, pivot: &SparseRow, p: u64) -> SparseRow {
    // target − factor · pivot
    let mut out = Vec::with_capacity(target.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < pivot.len() {
        let take_t = j >= pivot.len() || (i < target.len() && target[i].0 < pivot[j].0);
        let take_p = i >= target.len() || (j < pivot.len() && pivot[j].0 < target[i].0);
        if take_t {
            out.push(target[i]);
            i += 1;
        } else if take_p {
            let v = (p - mul_mod(factor, pivot[j].1, p)) % p;
            if v != 0 {
                out.push((pivot[j].0, v));
            }
            j += 1;
        } else {
            let v = (target[i].1 + p - mul_mod(factor, pivot[j].1, p)) % p;
            if v != 0 {
                out.push((target[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incremental sparse elimination over `GF(p)`.
///
/// Rows are reduced one after the other against the pivots found so far
/// (pivot = leading column).  Returns, for every input row, its leading
/// column and leading coefficient after reduction (`None` for rows that
/// reduce to zero).
fn sparse_eliminate(rows: &[SparseRow], p: u64) -> Vec<Option<(usize, u64)>> {
    let mut pivots: HashMap<usize, SparseRow> = HashMap::new();
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        let mut r: SparseRow = row
            .iter()
            .map(|&(c, v)| (c, v % p))
            .filter(|&(_, v)| v != 0)
            .collect();
        let lead = loop {
            let Some(&(c, v)) = r.first() else { break None };
            match pivots.get(&c) {
                Some(piv) => r = axpy(&r, v, piv, p),
                None => {
                    let inv = inv_mod(v, p);
                    let normalized = r.iter().map(|&(c, x)| (c, mul_mod(x, inv, p))).collect();
                    pivots.insert(c, normalized);
                    break Some((c, v));
                }
            }
        };
        out.push(lead);
    }
    out
}

/// Rank of a sparse matrix over `GF(p)`.
pub fn sparse_rank_mod(rows: &[SparseRow], p: u64) -> usize {
    sparse_eliminate(rows, p).iter().filter(|x| x.is_some()).count()
}

/// Determinant of a square sparse matrix over `GF(p)`.
pub fn sparse_det_mod(rows: &[SparseRow], p: u64) -> u64 {
    let leads = sparse_eliminate(rows, p);
    let mut det = 1u64;
    let mut perm = Vec::with_capacity(rows.len());
    for l in leads {
        match l {
            None => return 0,
            Some((c, v)) => {
                det = mul_mod(det, v, p);
                perm.push(c);
            }
        }
    }
    // Sign of the permutation row i ↦ perm[i], by cycle decomposition.
    let mut seen = vec![false; perm.len()];
    let mut odd = false;
    for i in 0..perm.len() {
        if seen[i] {
            continue;
        }
        let mut len = 0;
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            j = perm[j];
            len += 1;
        }
        if len % 2 == 0 {
            odd = !odd;
        }
    }
    if odd && det != 0 {
        p - det
    } else {
        det
    }
}

/// Fraction-free (Bareiss) determinant of a square integer matrix.
pub fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(s) = (k + 1..n).find(|&s| !a[s][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Exact determinant of a square sparse integer matrix by Chinese
/// remaindering over word-sized primes, with enough primes to exceed twice
/// the Hadamard bound.
pub fn multimodular_det(rows: &[Vec<(usize, i64)>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let row_bits: f64 = rows
        .iter()
        .map(|r| 0.5 * (r.iter().map(|&(_, v)| (v * v) as f64).sum::<f64>()).max(1.0).log2())
        .sum();
    let mut col_sq = vec![0f64; n];
    for r in rows {
        for &(c, v) in r {
            col_sq[c] += (v * v) as f64;
        }
    }
    let col_bits: f64 = col_sq.iter().map(|s| 0.5 * s.max(1.0).log2()).sum();
    let needed_bits = row_bits.min(col_bits) + 2.0;
    let mut modulus = BigInt::one();
    let mut residue = BigInt::zero();
    let mut q: u64 = (1 << 31) - 1;
    let mut bits = 0.0;
    while bits < needed_bits {
        while !is_prime(q) {
            q -= 2;
        }
        let reduced: Vec<SparseRow> = rows
            .iter()
            .map(|r| r.iter().map(|&(c, v)| (c, v.rem_euclid(q as i64) as u64)).collect())
            .collect();
        let d = sparse_det_mod(&reduced, q);
        // CRT: x ≡ residue (mod modulus), x ≡ d (mod q).
        let qb = BigInt::from(q);
        let m_mod_q = (&modulus % &qb).to_u64_digits().1.first().copied().unwrap_or(0);
        let r_mod_q = (&residue % &qb).to_u64_digits().1.first().copied().unwrap_or(0);
        let diff = (d + q - r_mod_q) % q;
        let t = mul_mod(diff, inv_mod(m_mod_q, q), q);
        residue += &modulus * BigInt::from(t);
        modulus *= &qb;
        bits += (q as f64).log2();
        q -= 2;
    }
    let half = &modulus / 2;
    if residue > half {
        residue - modulus
    } else {
        residue
    }
}

/// Absolute value helper for callers that only need `|det|`.
pub fn abs_big(x: BigInt) -> BigInt {
    x.abs()
}
