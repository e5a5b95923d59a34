//! Dense exact linear algebra over any field.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::arith::{CycloNumber, Rational};

pub trait Field: Clone + PartialEq + Sized
where
    for<'a> &'a Self: Add<&'a Self, Output = Self>
        + Sub<&'a Self, Output = Self>
        + Mul<&'a Self, Output = Self>
        + Neg<Output = Self>,
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elt(&self) -> bool;
    fn inverse(&self) -> Self;
}

impl Field for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn is_zero_elt(&self) -> bool {
        self.is_zero()
    }
    fn inverse(&self) -> Self {
        self.recip()
    }
}

impl Field for CycloNumber {
    fn zero_like(&self) -> Self {
        CycloNumber::zero(1)
    }
    fn one_like(&self) -> Self {
        CycloNumber::one(1)
    }
    fn is_zero_elt(&self) -> bool {
        self.is_zero()
    }
    fn inverse(&self) -> Self {
        self.inv().expect("inverse of non-zero element")
    }
}

/// Residue modulo a prime that fits comfortably in 64 bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    pub v: u64,
    pub p: u64,
}

impl Fp {
    pub fn new(v: i64, p: u64) -> Self {
        Fp { v: v.rem_euclid(p as i64) as u64, p }
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp { v: 1 % self.p, p: self.p };
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

impl<'a> Add<&'a Fp> for &'a Fp {
    type Output = Fp;
    fn add(self, r: &'a Fp) -> Fp {
        Fp { v: (self.v + r.v) % self.p, p: self.p }
    }
}
impl<'a> Sub<&'a Fp> for &'a Fp {
    type Output = Fp;
    fn sub(self, r: &'a Fp) -> Fp {
        Fp { v: (self.v + self.p - r.v) % self.p, p: self.p }
    }
}
impl<'a> Mul<&'a Fp> for &'a Fp {
    type Output = Fp;
    fn mul(self, r: &'a Fp) -> Fp {
        Fp { v: ((self.v as u128 * r.v as u128) % self.p as u128) as u64, p: self.p }
    }
}
impl Neg for &Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp { v: (self.p - self.v) % self.p, p: self.p }
    }
}

impl Field for Fp {
    fn zero_like(&self) -> Self {
        Fp { v: 0, p: self.p }
    }
    fn one_like(&self) -> Self {
        Fp { v: 1, p: self.p }
    }
    fn is_zero_elt(&self) -> bool {
        self.v == 0
    }
    fn inverse(&self) -> Self {
        assert!(self.v != 0, "inverse of zero mod {}", self.p);
        self.pow(self.p - 2)
    }
}

pub type Matrix<F> = Vec<Vec<F>>;

fn zero_of<F: Field>(m: &Matrix<F>) -> Option<F>
where
    for<'a> &'a F: Add<&'a F, Output = F> + Sub<&'a F, Output = F> + Mul<&'a F, Output = F> + Neg<Output = F>,
{
    m.iter().flatten().next().map(|x| x.zero_like())
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<F: Field>(m: &mut Matrix<F>) -> Vec<usize>
where
    for<'a> &'a F: Add<&'a F, Output = F> + Sub<&'a F, Output = F> + Mul<&'a F, Output = F> + Neg<Output = F>,
{
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero_elt()) else { continue };
        m.swap(r, pr);
        let inv = m[r][c].inverse();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero_elt() {
                let f = m[i][c].clone();
                let (a, b) = if i < r {
                    let (lo, hi) = m.split_at_mut(r);
                    (&mut lo[i], &hi[0])
                } else {
                    let (lo, hi) = m.split_at_mut(i);
                    (&mut hi[0], &lo[r])
                };
                for (x, y) in a.iter_mut().zip(b.iter()).skip(c) {
                    if !y.is_zero_elt() {
                        *x = &*x - &(&f * y);
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(m: &Matrix<F>) -> usize
where
    for<'a> &'a F: Add<&'a F, Output = F> + Sub<&'a F, Output = F> + Mul<&'a F, Output = F> + Neg<Output = F>,
{
    let mut a = m.clone();
    rref(&mut a).len()
}

/// Determinant of a square matrix by fraction-free elimination over the field.
pub fn det<F: Field>(m: &Matrix<F>, one: &F) -> F
where
    for<'a> &'a F: Add<&'a F, Output = F> + Sub<&'a F, Output = F> + Mul<&'a F, Output = F> + Neg<Output = F>,
{
    let n = m.len();
    let mut a = m.clone();
    let mut acc = one.clone();
    for c in 0..n {
        assert_eq!(a[c].len(), n, "determinant of non-square matrix");
        let Some(pr) = (c..n).find(|&i| !a[i][c].is_zero_elt()) else {
            return one.zero_like();
        };
        if pr != c {
            a.swap(pr, c);
            acc = -&acc;
        }
        acc = &acc * &a[c][c];
        let inv = a[c][c].inverse();
        for i in (c + 1)..n {
            if a[i][c].is_zero_elt() {
                continue;
            }
            let f = &a[i][c] * &inv;
            let (lo, hi) = a.split_at_mut(i);
            for (x, y) in hi[0].iter_mut().zip(lo[c].iter()).skip(c) {
                if !y.is_zero_elt() {
                    *x = &*x - &(&f * y);
                }
            }
        }
    }
    acc
}

/// Solves `m x = rhs` for a (possibly rectangular) consistent system, returning one solution.
pub fn solve<F: Field>(m: &Matrix<F>, rhs: &[F]) -> Option<Vec<F>>
where
    for<'a> &'a F: Add<&'a F, Output = F> + Sub<&'a F, Output = F> + Mul<&'a F, Output = F> + Neg<Output = F>,
{
    let rows = m.len();
    assert_eq!(rows, rhs.len());
    let zero = zero_of(m).or_else(|| rhs.first().map(|x| x.zero_like()))?;
    let cols = m.first().map_or(0, Vec::len);
    let mut aug: Matrix<F> = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![zero; cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][cols].clone();
    }
    Some(x)
}

/// Basis of the right null space `{x : m x = 0}`.
pub fn kernel<F: Field>(m: &Matrix<F>, cols: usize, one: &F) -> Vec<Vec<F>>
where
    for<'a> &'a F: Add<&'a F, Output = F> + Sub<&'a F, Output = F> + Mul<&'a F, Output = F> + Neg<Output = F>,
{
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let zero = one.zero_like();
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![zero.clone(); cols];
        v[free] = one.clone();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -&a[r][free];
        }
        basis.push(v);
    }
    basis
}

pub fn inverse<F: Field>(m: &Matrix<F>, one: &F) -> Option<Matrix<F>>
where
    for<'a> &'a F: Add<&'a F, Output = F> + Sub<&'a F, Output = F> + Mul<&'a F, Output = F> + Neg<Output = F>,
{
    let n = m.len();
    let zero = one.zero_like();
    let mut aug: Matrix<F> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { one.clone() } else { zero.clone() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_mul<F: Field>(a: &Matrix<F>, b: &Matrix<F>, zero: &F) -> Matrix<F>
where
    for<'a> &'a F: Add<&'a F, Output = F> + Sub<&'a F, Output = F> + Mul<&'a F, Output = F> + Neg<Output = F>,
{
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            let mut out = vec![zero.clone(); cols];
            for (k, x) in row.iter().enumerate() {
                if x.is_zero_elt() {
                    continue;
                }
                for (o, y) in out.iter_mut().zip(&b[k]) {
                    if !y.is_zero_elt() {
                        *o = &*o + &(x * y);
                    }
                }
            }
            out
        })
        .collect()
}

pub fn transpose<F: Clone>(m: &Matrix<F>) -> Matrix<F> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn identity<F: Field>(n: usize, one: &F) -> Matrix<F>
where
    for<'a> &'a F: Add<&'a F, Output = F> + Sub<&'a F, Output = F> + Mul<&'a F, Output = F> + Neg<Output = F>,
{
    (0..n).map(|i| (0..n).map(|j| if i == j { one.clone() } else { one.zero_like() }).collect()).collect()
}

/// Determinant by Leibniz expansion over permutations. Only for small matrices; used as
/// an independent cross-check of [`det`].
pub fn det_leibniz<F: Field>(m: &Matrix<F>, one: &F) -> F
where
    for<'a> &'a F: Add<&'a F, Output = F> + Sub<&'a F, Output = F> + Mul<&'a F, Output = F> + Neg<Output = F>,
{
    fn rec<F: Field>(m: &Matrix<F>, row: usize, used: &mut Vec<bool>, sign: bool, acc: &F, total: &mut F)
    where
        for<'a> &'a F: Add<&'a F, Output = F> + Sub<&'a F, Output = F> + Mul<&'a F, Output = F> + Neg<Output = F>,
    {
        let n = m.len();
        if row == n {
            *total = if sign { &*total - acc } else { &*total + acc };
            return;
        }
        for c in 0..n {
            if used[c] || m[row][c].is_zero_elt() {
                continue;
            }
            // inversions added by placing column c after the columns already used
            let larger = used[c + 1..].iter().filter(|&&u| u).count();
            used[c] = true;
            rec(m, row + 1, used, sign ^ (larger % 2 == 1), &(acc * &m[row][c]), total);
            used[c] = false;
        }
    }
    let mut total = one.zero_like();
    rec(m, 0, &mut vec![false; m.len()], false, one, &mut total);
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use proptest::prelude::*;

    fn q(m: &[&[i64]]) -> Matrix<Rational> {
        m.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
    }

    #[test]
    fn small_determinants() {
        let one = rat(1);
        assert_eq!(det(&q(&[&[1, 2], &[3, 4]]), &one), rat(-2));
        assert_eq!(det(&q(&[&[0, 1], &[1, 0]]), &one), rat(-1));
        assert_eq!(det(&q(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 1]]), &one), rat(0));
        assert_eq!(det_leibniz(&q(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 2]]), &one), rat(6));
    }

    #[test]
    fn solve_and_kernel() {
        let one = rat(1);
        let m = q(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = kernel(&m, 3, &one);
        assert_eq!(k.len(), 2);
        for v in &k {
            let r: Rational = m[0].iter().zip(v).map(|(a, b)| a * b).sum();
            assert_eq!(r, rat(0));
        }
        assert!(solve(&m, &[rat(1), rat(3)]).is_none());
        let x = solve(&m, &[rat(1), rat(2)]).unwrap();
        assert_eq!(x[0], rat(1));
        let inv = inverse(&q(&[&[2, 1], &[1, 1]]), &one).unwrap();
        assert_eq!(inv, vec![vec![rat(1), rat(-1)], vec![rat(-1), rat(2)]]);
        assert!(inverse(&q(&[&[1, 1], &[1, 1]]), &one).is_none());
        assert_eq!(rank(&q(&[&[1, 1], &[1, 1]])), 1);
    }

    #[test]
    fn finite_field() {
        let p = 13;
        let a = Fp::new(5, p);
        assert_eq!(&a * &a.inverse(), Fp::new(1, p));
        let m = vec![vec![Fp::new(1, p), Fp::new(2, p)], vec![Fp::new(3, p), Fp::new(4, p)]];
        assert_eq!(det(&m, &Fp::new(1, p)), Fp::new(-2, p));
    }

    proptest! {
        #[test]
        fn det_matches_leibniz(entries in proptest::collection::vec(-5i64..6, 16)) {
            let m: Matrix<Rational> = entries.chunks(4).map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
            let one = rat(1);
            prop_assert_eq!(det(&m, &one), det_leibniz(&m, &one));
        }

        #[test]
        fn det_multiplicative(a in proptest::collection::vec(-4i64..5, 9), b in proptest::collection::vec(-4i64..5, 9)) {
            let to = |v: &Vec<i64>| -> Matrix<Rational> { v.chunks(3).map(|r| r.iter().map(|&x| rat(x)).collect()).collect() };
            let (a, b) = (to(&a), to(&b));
            let one = rat(1);
            let ab = mat_mul(&a, &b, &rat(0));
            prop_assert_eq!(det(&ab, &one), det(&a, &one) * det(&b, &one));
        }
    }
}
