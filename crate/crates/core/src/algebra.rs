//! Elements of the group algebra E[G] over cyclotomic coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use rand::Rng;

use crate::arith::{rat, CycloNumber, Rational};
use crate::groups::Group;

#[derive(Clone)]
pub struct GAElement {
    group: Group,
    coeffs: Vec<CycloNumber>,
}

impl PartialEq for GAElement {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl fmt::Debug for GAElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(g, c)| format!("({c})*{}", self.group.labels()[g]))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl GAElement {
    pub fn zero(group: &Group) -> Self {
        GAElement { group: group.clone(), coeffs: vec![CycloNumber::zero(1); group.order()] }
    }

    pub fn one(group: &Group) -> Self {
        Self::basis(group, group.identity())
    }

    pub fn basis(group: &Group, g: usize) -> Self {
        let mut z = Self::zero(group);
        z.coeffs[g] = CycloNumber::one(1);
        z
    }

    pub fn scalar(group: &Group, c: CycloNumber) -> Self {
        let mut z = Self::zero(group);
        z.coeffs[group.identity()] = c;
        z
    }

    pub fn from_coeffs(group: &Group, coeffs: Vec<CycloNumber>) -> Self {
        assert_eq!(coeffs.len(), group.order());
        GAElement { group: group.clone(), coeffs }
    }

    pub fn from_integers(group: &Group, coeffs: &[i64]) -> Self {
        Self::from_coeffs(group, coeffs.iter().map(|&c| CycloNumber::from_int(c)).collect())
    }

    /// Sum of all group elements.
    pub fn norm_element(group: &Group) -> Self {
        Self::from_coeffs(group, vec![CycloNumber::one(1); group.order()])
    }

    /// Random element of Z[G] with coefficients in `-bound..=bound`.
    pub fn random_integral<R: Rng>(group: &Group, bound: i64, rng: &mut R) -> Self {
        Self::from_coeffs(group, (0..group.order()).map(|_| CycloNumber::from_int(rng.gen_range(-bound..=bound))).collect())
    }

    pub fn group(&self) -> &Group {
        &self.group
    }
    pub fn coeffs(&self) -> &[CycloNumber] {
        &self.coeffs
    }
    pub fn coeff(&self, g: usize) -> &CycloNumber {
        &self.coeffs[g]
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(CycloNumber::is_zero)
    }
    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(CycloNumber::is_rational)
    }
    pub fn rational_coeffs(&self) -> Option<Vec<Rational>> {
        self.coeffs.iter().map(CycloNumber::to_rational).collect()
    }

    pub fn scale(&self, c: &CycloNumber) -> Self {
        GAElement { group: self.group.clone(), coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        GAElement { group: self.group.clone(), coeffs: self.coeffs.iter().map(|x| x.scale(q)).collect() }
    }

    /// The anti-involution g -> g^{-1}.
    pub fn involution(&self) -> Self {
        let mut coeffs = vec![CycloNumber::zero(1); self.group.order()];
        for (g, c) in self.coeffs.iter().enumerate() {
            coeffs[self.group.inv(g)] = c.clone();
        }
        GAElement { group: self.group.clone(), coeffs }
    }

    /// Sum of the coefficients.
    pub fn augmentation(&self) -> CycloNumber {
        self.coeffs.iter().fold(CycloNumber::zero(1), |acc, c| &acc + c)
    }

    pub fn is_central(&self) -> bool {
        let g = &self.group;
        // central iff coefficients are constant on conjugacy classes
        g.conjugacy_classes().iter().all(|c| c.iter().all(|&x| self.coeffs[x] == self.coeffs[c[0]]))
    }

    pub fn same_group(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.group, &other.group) || *self.group == *other.group
    }

    /// Image under a group homomorphism (extended linearly).
    pub fn push_forward(&self, hom: &crate::groups::GroupHom) -> Self {
        let mut out = Self::zero(hom.target());
        for (g, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let t = hom.apply(g);
                out.coeffs[t] = &out.coeffs[t] + c;
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.group);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn integer(group: &Group, n: i64) -> Self {
        Self::scalar(group, CycloNumber::rational(rat(n)))
    }
}

impl<'a> Add<&'a GAElement> for &'a GAElement {
    type Output = GAElement;
    fn add(self, rhs: &'a GAElement) -> GAElement {
        debug_assert!(self.same_group(rhs));
        GAElement { group: self.group.clone(), coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl<'a> Sub<&'a GAElement> for &'a GAElement {
    type Output = GAElement;
    fn sub(self, rhs: &'a GAElement) -> GAElement {
        debug_assert!(self.same_group(rhs));
        GAElement { group: self.group.clone(), coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl<'a> Mul<&'a GAElement> for &'a GAElement {
    type Output = GAElement;
    fn mul(self, rhs: &'a GAElement) -> GAElement {
        debug_assert!(self.same_group(rhs));
        let g = &self.group;
        let mut coeffs = vec![CycloNumber::zero(1); g.order()];
        for (a, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (b, y) in rhs.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let ab = g.mul(a, b);
                coeffs[ab] = &coeffs[ab] + &(x * y);
            }
        }
        GAElement { group: g.clone(), coeffs }
    }
}

impl Neg for &GAElement {
    type Output = GAElement;
    fn neg(self) -> GAElement {
        GAElement { group: self.group.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Add for GAElement {
    type Output = GAElement;
    fn add(self, rhs: GAElement) -> GAElement {
        &self + &rhs
    }
}

impl Sub for GAElement {
    type Output = GAElement;
    fn sub(self, rhs: GAElement) -> GAElement {
        &self - &rhs
    }
}

impl Mul for GAElement {
    type Output = GAElement;
    fn mul(self, rhs: GAElement) -> GAElement {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::catalog;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn multiplication_is_associative_and_unital() {
        let g = catalog("s3").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let a = GAElement::random_integral(&g, 3, &mut rng);
            let b = GAElement::random_integral(&g, 3, &mut rng);
            let c = GAElement::random_integral(&g, 3, &mut rng);
            assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            assert_eq!(&a * &GAElement::one(&g), a);
            assert_eq!((&a * &b).augmentation(), &a.augmentation() * &b.augmentation());
        }
    }

    #[test]
    fn norm_element_is_central() {
        let g = catalog("d4").unwrap();
        let n = GAElement::norm_element(&g);
        assert!(n.is_central());
        assert_eq!(&n * &n, n.scale_rational(&rat(8)));
        assert!(!GAElement::basis(&g, 1).is_central() || g.conjugacy_classes()[g.class_of(1)].len() == 1);
    }
}
