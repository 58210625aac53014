//! Exact arithmetic over prime fields F_p and over the rationals, plus dense
//! matrix algebra (multiplication, inversion, reduced row echelon form).
//!
//! Field elements are residues in `[0, p)` stored as `u64`; every constructor
//! reduces its inputs, so the invariant holds throughout. All values are
//! immutable after construction and every operation is a pure function, so
//! concurrent use is safe.

use crate::error::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

/// Arithmetic context for the prime field F_p.
///
/// Construction checks primality by trial division; every other operation can
/// then assume a prime modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(PrimeField { p })
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    /// Multiplicative inverse of a nonzero residue.
    pub fn inv(&self, a: u64) -> Result<u64> {
        if a % self.p == 0 {
            return Err(Error::Singular);
        }
        // extended Euclid on (a, p)
        let (mut r0, mut r1) = (a as i128 % self.p as i128, self.p as i128);
        let (mut s0, mut s1) = (1i128, 0i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        Ok(s0.rem_euclid(self.p as i128) as u64)
    }

    /// Reduce an arbitrary signed integer into `[0, p)`.
    pub fn reduce_int(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    /// Build a matrix from row-major entries, reducing them mod p.
    pub fn matrix(&self, rows: usize, cols: usize, entries: &[u64]) -> FpMatrix {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        FpMatrix {
            rows,
            cols,
            modulus: self.p,
            entries: entries.iter().map(|&e| e % self.p).collect(),
        }
    }

    /// Build a matrix from signed row-major entries (reduced mod p).
    pub fn matrix_from_int(&self, rows: usize, cols: usize, entries: &[i64]) -> FpMatrix {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        FpMatrix {
            rows,
            cols,
            modulus: self.p,
            entries: entries.iter().map(|&e| self.reduce_int(e)).collect(),
        }
    }

    pub fn identity(&self, n: usize) -> FpMatrix {
        let mut m = self.zero_matrix(n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1 % self.p;
        }
        m
    }

    pub fn zero_matrix(&self, rows: usize, cols: usize) -> FpMatrix {
        FpMatrix {
            rows,
            cols,
            modulus: self.p,
            entries: vec![0; rows * cols],
        }
    }

    /// The Jordan block J_m(z): z on the diagonal, 1 on the superdiagonal.
    pub fn jordan_block(&self, m: usize, z: u64) -> FpMatrix {
        let mut j = self.zero_matrix(m, m);
        for i in 0..m {
            j.entries[i * m + i] = z % self.p;
            if i + 1 < m {
                j.entries[i * m + i + 1] = 1 % self.p;
            }
        }
        j
    }

    /// Block-diagonal matrix of one Jordan block J_m(z) per entry of `sizes`.
    pub fn jordan_matrix(&self, sizes: &[u64], z: u64) -> FpMatrix {
        let n: u64 = sizes.iter().sum();
        let n = n as usize;
        let mut m = self.zero_matrix(n, n);
        let mut off = 0usize;
        for &s in sizes {
            let s = s as usize;
            for i in 0..s {
                m.entries[(off + i) * n + off + i] = z % self.p;
                if i + 1 < s {
                    m.entries[(off + i) * n + off + i + 1] = 1 % self.p;
                }
            }
            off += s;
        }
        m
    }
}

/// Dense matrix over F_p, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpMatrix {
    rows: usize,
    cols: usize,
    modulus: u64,
    entries: Vec<u64>,
}

/// Outcome of Gaussian elimination: the unique RREF with zero rows trimmed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: FpMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl FpMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.cols + j]
    }

    pub fn field(&self) -> PrimeField {
        PrimeField { p: self.modulus }
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn check_modulus(&self, other: &FpMatrix) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus,
                right: other.modulus,
            });
        }
        Ok(())
    }

    /// Matrix product, entries reduced mod p.
    pub fn mul(&self, other: &FpMatrix) -> Result<FpMatrix> {
        self.check_modulus(other)?;
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let p = self.modulus as u128;
        let mut entries = vec![0u64; self.rows * other.cols];
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.entries[i * self.cols + l];
                if a == 0 {
                    continue;
                }
                let a = a as u128;
                for j in 0..other.cols {
                    let b = other.entries[l * other.cols + j] as u128;
                    let cell = &mut entries[i * other.cols + j];
                    *cell = ((*cell as u128 + a * b) % p) as u64;
                }
            }
        }
        Ok(FpMatrix {
            rows: self.rows,
            cols: other.cols,
            modulus: self.modulus,
            entries,
        })
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut entries = vec![0u64; self.rows * self.cols];
        for i in 0..self.rows {
            for j in 0..self.cols {
                entries[j * self.rows + i] = self.entries[i * self.cols + j];
            }
        }
        FpMatrix {
            rows: self.cols,
            cols: self.rows,
            modulus: self.modulus,
            entries,
        }
    }

    /// Stack `other` below `self`.
    pub fn vstack(&self, other: &FpMatrix) -> Result<FpMatrix> {
        self.check_modulus(other)?;
        if self.cols != other.cols {
            return Err(Error::ShapeMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Ok(FpMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            modulus: self.modulus,
            entries,
        })
    }

    /// The unique reduced row echelon form, with zero rows trimmed.
    pub fn rref(&self) -> Rref {
        let field = self.field();
        let mut m = self.entries.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..cols {
            if r == rows {
                break;
            }
            // find a pivot in column c at or below row r
            let Some(pr) = (r..rows).find(|&i| m[i * cols + c] != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..cols {
                    m.swap(r * cols + j, pr * cols + j);
                }
            }
            let inv = field.inv(m[r * cols + c]).expect("pivot is nonzero");
            for j in c..cols {
                m[r * cols + j] = field.mul(m[r * cols + j], inv);
            }
            for i in 0..rows {
                if i != r && m[i * cols + c] != 0 {
                    let factor = m[i * cols + c];
                    for j in c..cols {
                        let sub = field.mul(factor, m[r * cols + j]);
                        m[i * cols + j] = field.sub(m[i * cols + j], sub);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        m.truncate(r * cols);
        Rref {
            matrix: FpMatrix {
                rows: r,
                cols,
                modulus: self.modulus,
                entries: m,
            },
            rank: r,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Inverse of a square matrix of full rank.
    pub fn inverse(&self) -> Result<FpMatrix> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch {
                left: (self.rows, self.cols),
                right: (self.cols, self.rows),
            });
        }
        let n = self.rows;
        let field = self.field();
        // eliminate on the augmented matrix (self | I)
        let mut aug = field.zero_matrix(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.entries[i * 2 * n + j] = self.entries[i * n + j];
            }
            aug.entries[i * 2 * n + n + i] = 1 % self.modulus;
        }
        let red = aug.rref();
        // full rank iff the left block reduced to the identity
        if red.pivots.len() < n || red.pivots[..n] != (0..n).collect::<Vec<_>>()[..] {
            return Err(Error::Singular);
        }
        let mut entries = vec![0u64; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] = red.matrix.entries[i * 2 * n + n + j];
            }
        }
        Ok(FpMatrix {
            rows: n,
            cols: n,
            modulus: self.modulus,
            entries,
        })
    }

    /// Basis of the right kernel {v : M v = 0}, one row per basis vector.
    pub fn right_kernel(&self) -> FpMatrix {
        let field = self.field();
        let red = self.rref();
        let free: Vec<usize> = (0..self.cols)
            .filter(|c| !red.pivots.contains(c))
            .collect();
        let mut entries = Vec::with_capacity(free.len() * self.cols);
        for &fc in &free {
            let mut v = vec![0u64; self.cols];
            v[fc] = 1 % self.modulus;
            for (r, &pc) in red.pivots.iter().enumerate() {
                v[pc] = field.neg(red.matrix.get(r, fc));
            }
            entries.extend_from_slice(&v);
        }
        FpMatrix {
            rows: free.len(),
            cols: self.cols,
            modulus: self.modulus,
            entries,
        }
    }
}

impl std::fmt::Display for FpMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Solve `a x = m` exactly by back substitution, `a` upper triangular.
pub fn rat_solve_upper_triangular(
    a: &[Vec<BigRational>],
    m: &[BigRational],
) -> Result<Vec<BigRational>> {
    let n = a.len();
    assert!(a.iter().all(|row| row.len() == n), "a must be square");
    assert_eq!(m.len(), n, "rhs length must match");
    for (i, row) in a.iter().enumerate() {
        if row[i].is_zero() {
            return Err(Error::ZeroDiagonal { index: i });
        }
    }
    let mut x = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = m[i].clone();
        for j in i + 1..n {
            acc -= &a[i][j] * &x[j];
        }
        x[i] = acc / &a[i][i];
    }
    Ok(x)
}

/// Rank of a rational matrix, by fraction-free-enough Gaussian elimination.
pub fn rat_rank(rows: &[Vec<BigRational>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let mut rank = 0usize;
    for c in 0..cols {
        let Some(pr) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, pr);
        let pivot = m[rank][c].clone();
        for j in c..cols {
            m[rank][j] = &m[rank][j] / &pivot;
        }
        for i in 0..m.len() {
            if i != rank && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for j in c..cols {
                    let sub = &factor * &m[rank][j];
                    m[i][j] = &m[i][j] - sub;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Coefficients (constant term first) of the unique polynomial of degree
/// < points.len() through the given points, by Lagrange expansion.
/// Trailing zero coefficients are trimmed.
pub fn lagrange_interpolate(points: &[(BigRational, BigRational)]) -> Vec<BigRational> {
    let n = points.len();
    let mut coeffs = vec![BigRational::zero(); n];
    for i in 0..n {
        // basis_i(x) = prod_{j != i} (x - x_j) / (x_i - x_j)
        let mut basis = vec![BigRational::zero(); n];
        basis[0] = BigRational::one();
        let mut deg = 0usize;
        let mut denom = BigRational::one();
        for j in 0..n {
            if j == i {
                continue;
            }
            denom *= &points[i].0 - &points[j].0;
            // multiply basis by (x - x_j), descending so old values are intact
            for d in (0..=deg).rev() {
                let shifted = &basis[d + 1] + &basis[d];
                basis[d + 1] = shifted;
                let scaled = &basis[d] * (-points[j].0.clone());
                basis[d] = scaled;
            }
            deg += 1;
        }
        let scale = &points[i].1 / denom;
        for d in 0..=deg {
            coeffs[d] += &basis[d] * &scale;
        }
    }
    while coeffs.len() > 1 && coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
        coeffs.pop();
    }
    coeffs
}

/// Render a rational as `num/den` in lowest terms (`num` if the denominator is 1).
pub fn rational_to_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `num` or `num/den` into a rational.
pub fn rational_from_string(s: &str) -> Result<BigRational> {
    let mk_err = || Error::Invalid(format!("cannot parse rational from {s:?}"));
    let parse_int = |t: &str| t.parse::<BigInt>().map_err(|_| mk_err());
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(parse_int(s)?)),
        Some((n, d)) => {
            let den = parse_int(d)?;
            if den.is_zero() || den.is_negative() {
                return Err(mk_err());
            }
            Ok(BigRational::new(parse_int(n)?, den))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn field_new_checks_primality() {
        assert!(PrimeField::new(2).is_ok());
        assert!(PrimeField::new(17).is_ok());
        assert_eq!(PrimeField::new(4), Err(Error::NotPrime(4)));
        assert_eq!(PrimeField::new(1), Err(Error::NotPrime(1)));
        assert_eq!(PrimeField::new(91), Err(Error::NotPrime(91))); // 7 * 13
    }

    #[test]
    fn scalar_arithmetic() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.add(5, 4), 2);
        assert_eq!(f.sub(2, 5), 4);
        assert_eq!(f.mul(3, 5), 1);
        assert_eq!(f.inv(3).unwrap(), 5);
        assert_eq!(f.inv(0), Err(Error::Singular));
        assert_eq!(f.reduce_int(-1), 6);
    }

    #[test]
    fn mat_mul_examples() {
        let f2 = PrimeField::new(2).unwrap();
        let id3 = f2.identity(3);
        let m = f2.matrix(3, 3, &[1, 0, 1, 1, 1, 0, 0, 1, 1]);
        assert_eq!(id3.mul(&m).unwrap(), m);

        // J_2(1)^2 = I over F_2
        let j = f2.jordan_block(2, 1);
        assert_eq!(j.mul(&j).unwrap(), f2.identity(2));

        let f3 = PrimeField::new(3).unwrap();
        let other = f3.identity(2);
        assert!(matches!(
            j.mul(&other),
            Err(Error::ModulusMismatch { left: 2, right: 3 })
        ));

        let wide = f2.zero_matrix(2, 3);
        assert!(matches!(wide.mul(&wide), Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn rref_examples() {
        let f2 = PrimeField::new(2).unwrap();
        let z = f2.zero_matrix(2, 3);
        let r = z.rref();
        assert_eq!(r.rank, 0);
        assert_eq!(r.pivots, Vec::<usize>::new());
        assert_eq!(r.matrix.rows(), 0);
        assert_eq!(r.matrix.cols(), 3);

        let id = f2.identity(3);
        let r = id.rref();
        assert_eq!(r.matrix, id);
        assert_eq!(r.rank, 3);
        assert_eq!(r.pivots, vec![0, 1, 2]);

        let ones = f2.matrix(2, 2, &[1, 1, 1, 1]);
        let r = ones.rref();
        assert_eq!(r.matrix, f2.matrix(1, 2, &[1, 1]));
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
    }

    #[test]
    fn rref_is_idempotent() {
        let f3 = PrimeField::new(3).unwrap();
        let m = f3.matrix(3, 4, &[2, 1, 0, 1, 1, 1, 1, 0, 0, 2, 2, 2]);
        let once = m.rref();
        let twice = once.matrix.rref();
        assert_eq!(once.matrix, twice.matrix);
        assert_eq!(once.pivots, twice.pivots);
    }

    #[test]
    fn mat_inv_examples() {
        let f2 = PrimeField::new(2).unwrap();
        assert_eq!(f2.identity(4).inverse().unwrap(), f2.identity(4));

        let j = f2.jordan_block(2, 1);
        assert_eq!(j.inverse().unwrap(), j);

        let with_zero_row = f2.matrix(2, 2, &[1, 1, 0, 0]);
        assert_eq!(with_zero_row.inverse(), Err(Error::Singular));
    }

    #[test]
    fn inverse_round_trip_exhaustive_f2_f3_n2() {
        for p in [2u64, 3] {
            let f = PrimeField::new(p).unwrap();
            let n = 2usize;
            let total = p.pow((n * n) as u32);
            for code in 0..total {
                let mut c = code;
                let mut entries = Vec::with_capacity(n * n);
                for _ in 0..n * n {
                    entries.push(c % p);
                    c /= p;
                }
                let m = f.matrix(n, n, &entries);
                if m.is_invertible() {
                    let inv = m.inverse().unwrap();
                    assert_eq!(m.mul(&inv).unwrap(), f.identity(n));
                    assert_eq!(inv.mul(&m).unwrap(), f.identity(n));
                }
            }
        }
    }

    #[test]
    fn right_kernel_is_annihilated() {
        let f3 = PrimeField::new(3).unwrap();
        let m = f3.matrix(2, 4, &[1, 2, 0, 1, 0, 0, 1, 2]);
        let ker = m.right_kernel();
        assert_eq!(ker.rows(), 2);
        let prod = m.mul(&ker.transpose()).unwrap();
        assert!(prod.entries().iter().all(|&e| e == 0));
    }

    #[test]
    fn triangular_solve_examples() {
        let a = vec![
            vec![rat(2, 1), rat(1, 1)],
            vec![rat(0, 1), rat(3, 1)],
        ];
        let m = vec![rat(0, 1), rat(1, 1)];
        let x = rat_solve_upper_triangular(&a, &m).unwrap();
        assert_eq!(x, vec![rat(-1, 6), rat(1, 3)]);

        let id = vec![
            vec![rat(1, 1), rat(0, 1)],
            vec![rat(0, 1), rat(1, 1)],
        ];
        let rhs = vec![rat(5, 7), rat(-2, 3)];
        assert_eq!(rat_solve_upper_triangular(&id, &rhs).unwrap(), rhs);

        let bad = vec![
            vec![rat(1, 1), rat(2, 1)],
            vec![rat(0, 1), rat(0, 1)],
        ];
        assert_eq!(
            rat_solve_upper_triangular(&bad, &m),
            Err(Error::ZeroDiagonal { index: 1 })
        );
    }

    #[test]
    fn lagrange_recovers_polynomials() {
        // p(x) = x^2 + 1 through 4 points
        let pts: Vec<(BigRational, BigRational)> = [2i64, 3, 5, 7]
            .iter()
            .map(|&x| (rat(x, 1), rat(x * x + 1, 1)))
            .collect();
        let coeffs = lagrange_interpolate(&pts);
        assert_eq!(coeffs, vec![rat(1, 1), rat(0, 1), rat(1, 1)]);

        // constant through 3 points
        let pts: Vec<(BigRational, BigRational)> =
            [2i64, 3, 5].iter().map(|&x| (rat(x, 1), rat(4, 1))).collect();
        assert_eq!(lagrange_interpolate(&pts), vec![rat(4, 1)]);
    }

    #[test]
    fn rational_rank() {
        let rows = vec![
            vec![rat(1, 2), rat(1, 1), rat(0, 1)],
            vec![rat(1, 1), rat(2, 1), rat(0, 1)],
            vec![rat(0, 1), rat(0, 1), rat(3, 1)],
        ];
        assert_eq!(rat_rank(&rows), 2);
    }

    #[test]
    fn rational_strings() {
        assert_eq!(rational_to_string(&rat(-1, 42)), "-1/42");
        assert_eq!(rational_to_string(&rat(6, 3)), "2");
        assert_eq!(rational_from_string("-1/42").unwrap(), rat(-1, 42));
        assert_eq!(rational_from_string("7").unwrap(), rat(7, 1));
        assert!(rational_from_string("1/0").is_err());
        assert!(rational_from_string("x").is_err());
    }
}
