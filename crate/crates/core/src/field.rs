//! Arithmetic over GF(p) and the Vandermonde-style linear algebra used by
//! every decoder.
//!
//! Elements are plain residues; the modulus lives in a [`Field`] value that is
//! validated once and then passed around. Every operation assumes its operands
//! are residues of that field. Values entering from outside go through
//! [`Field::elem`], which rejects anything that is not a residue.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest modulus accepted. Products of two residues must fit in a `u64`.
pub const MAX_MODULUS: u64 = 1 << 32;

/// A residue in `[0, p)` of some prime field.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fe(u64);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn value(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Trial division; moduli are bounded by [`MAX_MODULUS`].
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime_above(n: u64) -> u64 {
    let mut c = n + 1;
    while !is_prime(c) {
        c += 1;
    }
    c
}

/// The prime field GF(p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Field {
    p: u64,
}

impl Field {
    pub fn new(p: u64) -> Result<Self> {
        if p >= MAX_MODULUS {
            return Err(Error::Param(format!("modulus {p} exceeds 2^32")));
        }
        if !is_prime(p) {
            return Err(Error::Param(format!("modulus {p} is not prime")));
        }
        Ok(Field { p })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Validating constructor. A value that is not a residue of this field
    /// usually means it came from a field with a different modulus.
    pub fn elem(&self, v: u64) -> Result<Fe> {
        if v >= self.p {
            Err(Error::Param(format!(
                "value {v} is not a residue modulo {} (modulus mismatch)",
                self.p
            )))
        } else {
            Ok(Fe(v))
        }
    }

    #[inline]
    pub fn reduce(&self, v: u64) -> Fe {
        Fe(v % self.p)
    }

    pub fn from_i64(&self, v: i64) -> Fe {
        Fe(v.rem_euclid(self.p as i64) as u64)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        debug_assert!(a.0 < self.p && b.0 < self.p);
        let s = a.0 + b.0;
        Fe(if s >= self.p { s - self.p } else { s })
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        debug_assert!(a.0 < self.p && b.0 < self.p);
        Fe(if a.0 >= b.0 { a.0 - b.0 } else { a.0 + self.p - b.0 })
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        debug_assert!(a.0 < self.p);
        Fe(if a.0 == 0 { 0 } else { self.p - a.0 })
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        debug_assert!(a.0 < self.p && b.0 < self.p);
        Fe(a.0 * b.0 % self.p)
    }

    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        let mut base = a;
        let mut acc = Fe::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat's little theorem.
    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.is_zero() {
            return Err(Error::Domain("inverse of zero".into()));
        }
        Ok(self.pow(a, self.p - 2))
    }

    pub fn sum<I: IntoIterator<Item = Fe>>(&self, it: I) -> Fe {
        it.into_iter().fold(Fe::ZERO, |acc, x| self.add(acc, x))
    }

    /// Inner product of two equal-length vectors.
    pub fn dot(&self, a: &[Fe], b: &[Fe]) -> Result<Fe> {
        if a.len() != b.len() {
            return Err(Error::Param(format!(
                "length mismatch in inner product: {} vs {}",
                a.len(),
                b.len()
            )));
        }
        Ok(a.iter().zip(b).fold(Fe::ZERO, |acc, (&x, &y)| self.add(acc, self.mul(x, y))))
    }

    /// `acc += c * v`, componentwise.
    pub fn axpy(&self, acc: &mut [Fe], c: Fe, v: &[Fe]) {
        debug_assert_eq!(acc.len(), v.len());
        for (a, &x) in acc.iter_mut().zip(v) {
            *a = self.add(*a, self.mul(c, x));
        }
    }

    /// Horner evaluation of `coeffs[0] + coeffs[1] x + ...`.
    pub fn eval_poly(&self, coeffs: &[Fe], x: Fe) -> Fe {
        coeffs
            .iter()
            .rev()
            .fold(Fe::ZERO, |acc, &c| self.add(self.mul(acc, x), c))
    }
}

/// Globally known evaluation constants α_1..α_k. The decoders work with the
/// shifted values `1 + α_j`, which must be distinct and nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalPoints {
    alphas: Vec<Fe>,
}

impl EvalPoints {
    pub fn new(field: &Field, alphas: &[u64]) -> Result<Self> {
        let mut out = Vec::with_capacity(alphas.len());
        for (j, &a) in alphas.iter().enumerate() {
            let a = field.elem(a)?;
            if a.value() == field.modulus() - 1 {
                return Err(Error::Param(format!(
                    "alpha_{} = p-1 makes 1+alpha zero",
                    j + 1
                )));
            }
            if out.contains(&a) {
                return Err(Error::Param(format!("alpha_{} = {a} is repeated", j + 1)));
            }
            out.push(a);
        }
        Ok(EvalPoints { alphas: out })
    }

    /// Default constants α_j = j − 1, so that the shifted points are 1..=k.
    /// Needs k ≤ p − 1.
    pub fn canonical(field: &Field, k: usize) -> Result<Self> {
        if k as u64 > field.modulus() - 1 {
            return Err(Error::Param(format!(
                "{k} evaluation points need k <= p-1 = {}",
                field.modulus() - 1
            )));
        }
        let alphas: Vec<u64> = (0..k as u64).collect();
        Self::new(field, &alphas)
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    pub fn alpha(&self, j: usize) -> Fe {
        self.alphas[j]
    }

    pub fn alphas(&self) -> &[Fe] {
        &self.alphas
    }

    /// The shifted point `1 + α_j`.
    pub fn shifted(&self, field: &Field, j: usize) -> Fe {
        field.add(Fe::ONE, self.alphas[j])
    }
}

/// Dense row-major matrix over a prime field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Fe>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Fe::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Fe::ONE);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Fe>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Param("ragged matrix rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Fe {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Fe) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Fe] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|x| x.value()).collect())
            .collect()
    }

    pub fn mul_vec(&self, field: &Field, v: &[Fe]) -> Result<Vec<Fe>> {
        if v.len() != self.cols {
            return Err(Error::Param(format!(
                "matrix has {} columns but vector has length {}",
                self.cols,
                v.len()
            )));
        }
        (0..self.rows).map(|r| field.dot(self.row(r), v)).collect()
    }

    /// Gauss-Jordan inversion with row pivoting.
    pub fn inverse(&self, field: &Field) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::Param(format!(
                "cannot invert a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a.get(r, col).is_zero())
                .ok_or(Error::Singular(n))?;
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let scale = field.inv(a.get(col, col))?;
            a.scale_row(field, col, scale);
            inv.scale_row(field, col, scale);
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.get(r, col);
                if f.is_zero() {
                    continue;
                }
                let f = field.neg(f);
                a.add_scaled_row(field, r, col, f);
                inv.add_scaled_row(field, r, col, f);
            }
        }
        Ok(inv)
    }

    /// Determinant by elimination.
    pub fn determinant(&self, field: &Field) -> Result<Fe> {
        if self.rows != self.cols {
            return Err(Error::Param("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Fe::ONE;
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
                return Ok(Fe::ZERO);
            };
            if pivot != col {
                a.swap_rows(pivot, col);
                det = field.neg(det);
            }
            let pv = a.get(col, col);
            det = field.mul(det, pv);
            let pinv = field.inv(pv)?;
            for r in col + 1..n {
                let f = field.mul(a.get(r, col), pinv);
                if !f.is_zero() {
                    a.add_scaled_row(field, r, col, field.neg(f));
                }
            }
        }
        Ok(det)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, field: &Field, r: usize, s: Fe) {
        for c in 0..self.cols {
            let v = self.get(r, c);
            self.set(r, c, field.mul(v, s));
        }
    }

    // row[dst] += f * row[src]
    fn add_scaled_row(&mut self, field: &Field, dst: usize, src: usize, f: Fe) {
        for c in 0..self.cols {
            let v = field.add(self.get(dst, c), field.mul(f, self.get(src, c)));
            self.set(dst, c, v);
        }
    }
}

/// Builds the n×n matrix whose row j is `[1, (1+α_j), …, (1+α_j)^{n-1}]`,
/// using the first `n` evaluation points.
pub fn build_upsilon(field: &Field, points: &EvalPoints, n: usize) -> Result<Matrix> {
    if n > points.len() {
        return Err(Error::Param(format!(
            "need {n} evaluation points but only {} are available",
            points.len()
        )));
    }
    let mut m = Matrix::zeros(n, n);
    for j in 0..n {
        let x = points.shifted(field, j);
        let mut acc = Fe::ONE;
        for l in 0..n {
            m.set(j, l, acc);
            acc = field.mul(acc, x);
        }
    }
    Ok(m)
}

/// Solves `m · x = rhs` by explicit inversion.
pub fn solve_linear(field: &Field, m: &Matrix, rhs: &[Fe]) -> Result<Vec<Fe>> {
    if rhs.len() != m.rows() {
        return Err(Error::Param(format!(
            "right-hand side has length {} for a {}-row system",
            rhs.len(),
            m.rows()
        )));
    }
    m.inverse(field)?.mul_vec(field, rhs)
}

/// Shared decoding step of all schemes: recover the constant coefficient of
/// the polynomial whose evaluations at the first `sums.len()` shifted points
/// are `sums`, and read it as a count in `0..=max_count`.
pub fn decode_constant(field: &Field, points: &EvalPoints, sums: &[Fe], max_count: usize) -> Result<u64> {
    let upsilon = build_upsilon(field, points, sums.len())?;
    let coeffs = solve_linear(field, &upsilon, sums)?;
    let k = coeffs.first().copied().unwrap_or(Fe::ZERO).value();
    if k > max_count as u64 {
        return Err(Error::Integrity(format!(
            "decoded count {k} is outside 0..={max_count}"
        )));
    }
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> Field {
        Field::new(p).unwrap()
    }

    fn fe(field: &Field, v: &[u64]) -> Vec<Fe> {
        v.iter().map(|&x| field.elem(x).unwrap()).collect()
    }

    // Leibniz expansion; independent of the elimination path.
    fn det_by_permutations(field: &Field, m: &Matrix) -> Fe {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for i in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(i, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let n = m.rows();
        let mut acc = Fe::ZERO;
        for perm in perms(n) {
            let mut inversions = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if perm[i] > perm[j] {
                        inversions += 1;
                    }
                }
            }
            let term = (0..n).fold(Fe::ONE, |t, r| field.mul(t, m.get(r, perm[r])));
            acc = if inversions % 2 == 0 {
                field.add(acc, term)
            } else {
                field.sub(acc, term)
            };
        }
        acc
    }

    #[test]
    fn scalar_ops() {
        let f7 = f(7);
        let f5 = f(5);
        assert_eq!(f7.add(Fe(3), Fe(5)), Fe(1));
        assert_eq!(f7.add(Fe(0), Fe(4)), Fe(4));
        assert_eq!(f5.add(Fe(4), Fe(4)), Fe(3));
        assert_eq!(f7.inv(Fe(3)).unwrap(), Fe(5));
        assert_eq!(f7.pow(Fe(2), 3), Fe(1));
        assert_eq!(f5.neg(Fe(2)), Fe(3));
        assert_eq!(f5.neg(Fe(0)), Fe(0));
    }

    #[test]
    fn inverse_of_zero_is_a_domain_error() {
        assert!(matches!(f(7).inv(Fe::ZERO), Err(Error::Domain(_))));
    }

    #[test]
    fn foreign_residue_is_rejected() {
        assert!(matches!(f(5).elem(6), Err(Error::Param(_))));
        assert!(Field::new(9).is_err());
        assert!(Field::new(1).is_err());
    }

    #[test]
    fn upsilon_rows() {
        let f7 = f(7);
        let pts = EvalPoints::new(&f7, &[1, 2, 3]).unwrap();
        let u = build_upsilon(&f7, &pts, 3).unwrap();
        assert_eq!(u.to_rows(), vec![vec![1, 2, 4], vec![1, 3, 2], vec![1, 4, 2]]);
        assert_eq!(build_upsilon(&f7, &pts, 1).unwrap().to_rows(), vec![vec![1]]);
        // Vandermonde product over x = (2, 3, 4) is 1*2*1 = 2.
        assert_eq!(det_by_permutations(&f7, &u), Fe(2));
        assert_eq!(u.determinant(&f7).unwrap(), Fe(2));
    }

    #[test]
    fn bad_eval_points() {
        let f7 = f(7);
        assert!(EvalPoints::new(&f7, &[1, 1]).is_err());
        assert!(EvalPoints::new(&f7, &[6]).is_err());
        assert!(EvalPoints::new(&f7, &[9]).is_err());
        let pts = EvalPoints::new(&f7, &[1, 2]).unwrap();
        assert!(build_upsilon(&f7, &pts, 3).is_err());
        assert!(EvalPoints::canonical(&f7, 7).is_err());
        assert_eq!(EvalPoints::canonical(&f7, 6).unwrap().len(), 6);
    }

    #[test]
    fn solve_examples() {
        let f7 = f(7);
        let v = fe(&f7, &[3, 0, 6]);
        assert_eq!(solve_linear(&f7, &Matrix::identity(3), &v).unwrap(), v);

        let pts = EvalPoints::new(&f7, &[1, 2, 3]).unwrap();
        let u = build_upsilon(&f7, &pts, 3).unwrap();
        // Υ·(2,0,0) is twice the first column, computed by hand: (2,2,2).
        let rhs = fe(&f7, &[2, 2, 2]);
        assert_eq!(solve_linear(&f7, &u, &rhs).unwrap(), fe(&f7, &[2, 0, 0]));

        assert_eq!(
            solve_linear(&f7, &Matrix::identity(1), &[Fe(5)]).unwrap(),
            vec![Fe(5)]
        );
    }

    #[test]
    fn singular_system() {
        let f5 = f(5);
        let m = Matrix::from_rows(vec![fe(&f5, &[1, 2]), fe(&f5, &[2, 4])]).unwrap();
        assert!(matches!(solve_linear(&f5, &m, &[Fe(1), Fe(2)]), Err(Error::Singular(2))));
        assert_eq!(m.determinant(&f5).unwrap(), Fe::ZERO);
    }

    #[test]
    fn decode_rejects_out_of_range_count() {
        let f7 = f(7);
        let pts = EvalPoints::canonical(&f7, 2).unwrap();
        // constant polynomial 5 with max count 3
        let err = decode_constant(&f7, &pts, &[Fe(5), Fe(5)], 3).unwrap_err();
        assert!(matches!(err, Error::Integrity(_)));
        assert_eq!(decode_constant(&f7, &pts, &[Fe(3), Fe(3)], 3).unwrap(), 3);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_prime() -> impl Strategy<Value = u64> {
            prop::sample::select(vec![3u64, 5, 7, 11, 13, 31, 101, 65521])
        }

        proptest! {
            #[test]
            fn inverse_is_inverse(p in small_prime(), a in 1u64..65521) {
                let field = f(p);
                let a = field.reduce(a);
                prop_assume!(!a.is_zero());
                prop_assert_eq!(field.mul(a, field.inv(a).unwrap()), Fe::ONE);
            }

            #[test]
            fn upsilon_round_trip(p in small_prime(), n in 1usize..6, seed in any::<Vec<u64>>()) {
                let field = f(p);
                prop_assume!((n as u64) <= p - 1);
                let pts = EvalPoints::canonical(&field, n).unwrap();
                let u = build_upsilon(&field, &pts, n).unwrap();
                let x: Vec<Fe> = (0..n).map(|i| field.reduce(seed.get(i).copied().unwrap_or(i as u64 * 7 + 1))).collect();
                let rhs = u.mul_vec(&field, &x).unwrap();
                prop_assert_eq!(solve_linear(&field, &u, &rhs).unwrap(), x);
                prop_assert_eq!(build_upsilon(&field, &pts, n).unwrap(), u);
            }
        }
    }
}
