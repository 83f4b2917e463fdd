//! Prime-field linear algebra: a dense mod-p matrix, a bit-packed GF(2)
//! matrix, Gaussian-elimination ranks, and Betti numbers by rank-nullity.

use crate::algebra::LieAlgebra;
use crate::par;
use crate::ResourceCap;
use thiserror::Error;

/// The requested characteristic is not a prime number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("{0} is not prime")]
pub struct NotPrime(pub u64);

/// A prime, checked at construction; the only way to name a coefficient
/// field in this crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldChar(u64);

impl FieldChar {
    pub fn new(p: u64) -> Result<FieldChar, NotPrime> {
        if is_prime(p) {
            Ok(FieldChar(p))
        } else {
            Err(NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

impl std::fmt::Display for FieldChar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Deterministic Miller-Rabin; the witness set below decides primality for
/// every u64.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue, by Fermat.
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

/// Row-major matrix over GF(p) with entries stored as reduced residues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseMatrixGFp {
    characteristic: FieldChar,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl DenseMatrixGFp {
    pub fn zero(characteristic: FieldChar, rows: usize, cols: usize) -> Self {
        DenseMatrixGFp {
            characteristic,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    /// Build from sparse `(row, col, value)` triples; values are reduced
    /// mod p, later triples overwrite earlier ones.
    pub fn from_entries(
        characteristic: FieldChar,
        rows: usize,
        cols: usize,
        entries: &[(u32, u32, u64)],
    ) -> Self {
        let mut m = Self::zero(characteristic, rows, cols);
        for &(r, c, v) in entries {
            m.set(r as usize, c as usize, v);
        }
        m
    }

    pub fn characteristic(&self) -> FieldChar {
        self.characteristic
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        assert!(r < self.rows && c < self.cols);
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        assert!(r < self.rows && c < self.cols);
        self.data[r * self.cols + c] = v % self.characteristic.get();
    }

    pub fn rank(&self) -> usize {
        rank(self)
    }
}

/// Gaussian elimination rank over GF(p). The input is cloned; elimination
/// below each pivot runs row-parallel on large matrices.
pub fn rank(m: &DenseMatrixGFp) -> usize {
    let p = m.characteristic.get();
    let (rows, cols) = (m.rows, m.cols);
    if rows == 0 || cols == 0 {
        return 0;
    }
    let mut data = m.data.clone();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pr) = (rank..rows).find(|&r| data[r * cols + col] != 0) else {
            continue;
        };
        for j in 0..cols {
            data.swap(rank * cols + j, pr * cols + j);
        }
        let inv = inv_mod(data[rank * cols + col], p);
        for j in col..cols {
            data[rank * cols + j] = mul_mod(data[rank * cols + j], inv, p);
        }
        let (top, below) = data.split_at_mut((rank + 1) * cols);
        let pivot_row = &top[rank * cols..];
        par::rows_for_each(below, cols, cols - col, |row| {
            let factor = row[col];
            if factor == 0 {
                return;
            }
            let neg = p - factor;
            for j in col..cols {
                row[j] = (row[j] + mul_mod(neg, pivot_row[j], p)) % p;
            }
        });
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Bit-packed GF(2) matrix; each row occupies `words_per_row` u64 words,
/// column `c` lives at bit `c % 64` of word `c / 64`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(64);
        BitMatrix {
            rows,
            cols,
            words_per_row,
            data: vec![0; rows * words_per_row],
        }
    }

    /// Build from sparse triples; a triple with an even value clears the bit.
    pub fn from_entries(rows: usize, cols: usize, entries: &[(u32, u32, u64)]) -> Self {
        let mut m = Self::zero(rows, cols);
        for &(r, c, v) in entries {
            m.set(r as usize, c as usize, v % 2 == 1);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols);
        self.data[r * self.words_per_row + c / 64] >> (c % 64) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, on: bool) {
        assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.words_per_row + c / 64];
        if on {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    pub fn rank(&self) -> usize {
        rank_gf2(self)
    }
}

/// Rank over GF(2) by word-wide XOR elimination. The input is cloned;
/// elimination below each pivot runs row-parallel on large matrices.
pub fn rank_gf2(m: &BitMatrix) -> usize {
    let (rows, cols, w) = (m.rows, m.cols, m.words_per_row);
    if rows == 0 || cols == 0 {
        return 0;
    }
    let mut data = m.data.clone();
    let mut rank = 0;
    for col in 0..cols {
        let word = col / 64;
        let bit = 1u64 << (col % 64);
        let Some(pr) = (rank..rows).find(|&r| data[r * w + word] & bit != 0) else {
            continue;
        };
        if pr != rank {
            for i in 0..w {
                data.swap(rank * w + i, pr * w + i);
            }
        }
        let (top, below) = data.split_at_mut((rank + 1) * w);
        let pivot_row = &top[rank * w..];
        par::rows_for_each(below, w, w, |row| {
            if row[word] & bit != 0 {
                for (x, px) in row.iter_mut().zip(pivot_row) {
                    *x ^= px;
                }
            }
        });
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// `C(n, k)` without overflow for the dimensions this crate admits.
pub(crate) fn binomial_u64(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Betti numbers of the Koszul-type chain complex of `algebra` over GF(p),
/// computed degree by degree as `b_i = dim_i - rank d_i - rank d_{i+1}`.
/// Index `i` of the result runs from 0 to the algebra dimension.
pub fn betti_numbers(
    algebra: &LieAlgebra,
    characteristic: FieldChar,
) -> Result<Vec<u64>, ResourceCap> {
    betti_numbers_with_cap(algebra, characteristic, crate::DEFAULT_DIM_CAP)
}

/// Same as [`betti_numbers`] with an explicit dimension cap.
pub fn betti_numbers_with_cap(
    algebra: &LieAlgebra,
    characteristic: FieldChar,
    cap: usize,
) -> Result<Vec<u64>, ResourceCap> {
    let dim = algebra.dim();
    if dim > cap {
        return Err(ResourceCap { dim, cap });
    }
    let p = characteristic.get();
    let ranks: Vec<usize> = par::par_map((1..=dim).collect(), |k| {
        let b = algebra.boundary_matrix(k, characteristic);
        if p == 2 {
            rank_gf2(&BitMatrix::from_entries(b.rows, b.cols, &b.entries))
        } else {
            rank(&DenseMatrixGFp::from_entries(
                characteristic,
                b.rows,
                b.cols,
                &b.entries,
            ))
        }
    });
    let rank_d = |k: usize| -> u64 {
        if k >= 1 && k <= dim {
            ranks[k - 1] as u64
        } else {
            0
        }
    };
    Ok((0..=dim)
        .map(|i| binomial_u64(dim, i) - rank_d(i) - rank_d(i + 1))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::heisenberg_algebra;
    use proptest::prelude::*;

    fn gf(p: u64) -> FieldChar {
        FieldChar::new(p).unwrap()
    }

    #[test]
    fn primality_check() {
        for p in [2u64, 3, 5, 7, 31, 37, 41, 1009, 2305843009213693951] {
            assert!(FieldChar::new(p).is_ok(), "{p} is prime");
        }
        for c in [0u64, 1, 4, 6, 561, 2047, 1009 * 1013] {
            assert_eq!(FieldChar::new(c), Err(NotPrime(c)));
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let p = 1009;
        for a in 1..p {
            assert_eq!(mul_mod(a, inv_mod(a, p), p), 1);
        }
    }

    #[test]
    fn dense_rank_small() {
        let p = gf(5);
        let mut m = DenseMatrixGFp::zero(p, 3, 3);
        for i in 0..3 {
            m.set(i, i, 1);
        }
        assert_eq!(rank(&m), 3);
        assert_eq!(rank(&DenseMatrixGFp::zero(p, 4, 7)), 0);
        // rows (1 2) and (3 6) are dependent mod 5
        let m =
            DenseMatrixGFp::from_entries(p, 2, 2, &[(0, 0, 1), (0, 1, 2), (1, 0, 3), (1, 1, 6)]);
        assert_eq!(rank(&m), 1);
        // ... and so are (1 2) and (3 1), since 3·(1 2) ≡ (3 1) mod 5
        let m =
            DenseMatrixGFp::from_entries(p, 2, 2, &[(0, 0, 1), (0, 1, 2), (1, 0, 3), (1, 1, 1)]);
        assert_eq!(rank(&m), 1);
        // (1 2) and (3 2) are independent: the determinant is -4 ≡ 1
        let m =
            DenseMatrixGFp::from_entries(p, 2, 2, &[(0, 0, 1), (0, 1, 2), (1, 0, 3), (1, 1, 2)]);
        assert_eq!(rank(&m), 2);
    }

    #[test]
    fn gf2_rank_small() {
        let mut m = BitMatrix::zero(3, 4);
        m.set(0, 0, true);
        m.set(0, 2, true);
        m.set(1, 1, true);
        m.set(2, 0, true);
        m.set(2, 1, true);
        m.set(2, 2, true);
        // row2 = row0 + row1
        assert_eq!(rank_gf2(&m), 2);
        assert_eq!(rank_gf2(&BitMatrix::zero(0, 5)), 0);
        assert_eq!(rank_gf2(&BitMatrix::zero(5, 0)), 0);
    }

    #[test]
    fn gf2_rank_crosses_word_boundary() {
        let n = 70;
        let mut m = BitMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, true);
            if i + 1 < n {
                m.set(i, i + 1, true);
            }
        }
        assert_eq!(rank_gf2(&m), n);
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial_u64(29, 14), 77558760);
        assert_eq!(binomial_u64(5, 2), 10);
        assert_eq!(binomial_u64(3, 5), 0);
        assert_eq!(binomial_u64(0, 0), 1);
    }

    #[test]
    fn betti_of_small_heisenberg() {
        let h1 = heisenberg_algebra(1).unwrap();
        assert_eq!(betti_numbers(&h1, gf(2)).unwrap(), vec![1, 2, 2, 1]);
        assert_eq!(betti_numbers(&h1, gf(1009)).unwrap(), vec![1, 2, 2, 1]);
        let h3 = heisenberg_algebra(3).unwrap();
        assert_eq!(
            betti_numbers(&h3, gf(2)).unwrap(),
            vec![1, 6, 14, 15, 15, 14, 6, 1]
        );
        assert_eq!(
            betti_numbers(&h3, gf(3)).unwrap(),
            vec![1, 6, 14, 14, 14, 14, 6, 1]
        );
    }

    #[test]
    fn betti_respects_cap() {
        let h2 = heisenberg_algebra(2).unwrap();
        let err = betti_numbers_with_cap(&h2, gf(2), 4).unwrap_err();
        assert_eq!(err, crate::ResourceCap { dim: 5, cap: 4 });
    }

    #[test]
    fn euler_characteristic_vanishes() {
        for n in 1..=3usize {
            for p in [2u64, 3] {
                let b = betti_numbers(&heisenberg_algebra(n).unwrap(), gf(p)).unwrap();
                let chi: i64 = b
                    .iter()
                    .enumerate()
                    .map(|(i, &bi)| if i % 2 == 0 { bi as i64 } else { -(bi as i64) })
                    .sum();
                assert_eq!(chi, 0);
            }
        }
    }

    fn matrix_over(p: u64) -> impl Strategy<Value = DenseMatrixGFp> {
        let dims = prop_oneof![
            19 => (0usize..=12, 0usize..=12),
            1 => (64usize..=128, 64usize..=128),
        ];
        dims.prop_flat_map(move |(r, c)| {
            prop::collection::vec(0u64..p, r * c).prop_map(move |vals| {
                let mut m = DenseMatrixGFp::zero(gf(p), r, c);
                for (i, v) in vals.into_iter().enumerate() {
                    m.set(i / c.max(1), i % c.max(1), v);
                }
                m
            })
        })
    }

    fn shuffle_rows(m: &DenseMatrixGFp, seed: u64) -> DenseMatrixGFp {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut order: Vec<usize> = (0..m.rows()).collect();
        order.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let mut out = DenseMatrixGFp::zero(m.characteristic(), m.rows(), m.cols());
        for (to, &from) in order.iter().enumerate() {
            for c in 0..m.cols() {
                out.set(to, c, m.get(from, c));
            }
        }
        out
    }

    proptest! {
        #[test]
        fn rank_is_row_permutation_invariant(
            m in prop_oneof![matrix_over(2), matrix_over(5), matrix_over(1009)],
            seed in any::<u64>(),
        ) {
            prop_assert_eq!(rank(&m), rank(&shuffle_rows(&m, seed)));
        }

        #[test]
        fn rank_bounded_by_dims(m in matrix_over(7)) {
            prop_assert!(rank(&m) <= m.rows().min(m.cols()));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn bitpacked_rank_matches_dense(m in matrix_over(2)) {
            let mut b = BitMatrix::zero(m.rows(), m.cols());
            for r in 0..m.rows() {
                for c in 0..m.cols() {
                    b.set(r, c, m.get(r, c) == 1);
                }
            }
            prop_assert_eq!(rank_gf2(&b), rank(&m));
        }
    }
}
