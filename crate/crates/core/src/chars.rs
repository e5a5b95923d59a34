//! Exact character tables by the Dixon–Schneider method, central idempotents,
//! Wedderburn coordinates of central elements and functorial operations on class
//! functions.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{Signed, ToPrimitive};
use serde_json::json;
use thiserror::Error;

use crate::algebra::GAElement;
use crate::arith::{is_prime, rat, ratio, CycloNumber};
use crate::groups::{Group, GroupError, GroupHom, Subgroup};
use crate::linalg::{kernel, Fp};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharError {
    #[error("modular lift failed: {0}")]
    LiftFailure(String),
    #[error("element is not central")]
    NotCentral,
    #[error("not a subgroup embedding")]
    NotSubgroup,
    #[error("not a surjection")]
    NotSurjection,
    #[error("class function belongs to a different group")]
    WrongGroup,
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A class function on a group, stored by conjugacy class.
#[derive(Clone)]
pub struct Character {
    group: Group,
    values: Vec<CycloNumber>,
}

impl PartialEq for Character {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values
    }
}

impl fmt::Debug for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "Character[{}]", vals.join(", "))
    }
}

impl Character {
    pub fn new(group: &Group, values: Vec<CycloNumber>) -> Self {
        assert_eq!(values.len(), group.num_classes());
        Character { group: group.clone(), values }
    }

    pub fn trivial(group: &Group) -> Self {
        Self::new(group, vec![CycloNumber::one(1); group.num_classes()])
    }

    /// The character of the regular representation.
    pub fn regular(group: &Group) -> Self {
        let mut values = vec![CycloNumber::zero(1); group.num_classes()];
        values[0] = CycloNumber::from_int(group.order() as i64);
        Self::new(group, values)
    }

    pub fn group(&self) -> &Group {
        &self.group
    }
    pub fn values(&self) -> &[CycloNumber] {
        &self.values
    }
    /// Value at a group element.
    pub fn at(&self, g: usize) -> &CycloNumber {
        &self.values[self.group.class_of(g)]
    }
    /// χ(1) as an integer (panics for class functions whose value at 1 is not integral).
    pub fn degree(&self) -> usize {
        self.values[0].to_rational().and_then(|q| q.to_integer().to_usize()).expect("degree must be a non-negative integer")
    }
    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(CycloNumber::is_one)
    }

    /// Complex conjugate class function.
    pub fn conj(&self) -> Self {
        Self::new(&self.group, self.values.iter().map(CycloNumber::conj).collect())
    }

    /// Galois conjugate ζ ↦ ζ^a applied to every value.
    pub fn galois(&self, a: i64) -> Self {
        let e = self.group.exponent() as u32;
        Self::new(
            &self.group,
            self.values.iter().map(|v| v.lift(crate::arith::lcm_u32(e, v.conductor())).galois_act(a).expect("unit")).collect(),
        )
    }

    /// ⟨χ, ψ⟩ = |G|⁻¹ Σ χ(g) conj(ψ(g)).
    pub fn inner(&self, other: &Character) -> CycloNumber {
        let g = &self.group;
        let mut acc = CycloNumber::zero(1);
        for (j, class) in g.conjugacy_classes().iter().enumerate() {
            let term = &self.values[j] * &other.values[j].conj();
            acc = &acc + &term.scale(&rat(class.len() as i64));
        }
        acc.scale(&ratio(1, g.order() as i64))
    }

    /// |G|⁻¹ Σ χ(g²).
    pub fn frobenius_schur(&self) -> i64 {
        let g = &self.group;
        let mut acc = CycloNumber::zero(1);
        for class in g.conjugacy_classes() {
            let sq = g.mul(class[0], class[0]);
            acc = &acc + &self.at(sq).scale(&rat(class.len() as i64));
        }
        let v = acc.scale(&ratio(1, g.order() as i64));
        v.to_rational().and_then(|q| if q.is_integer() { q.to_integer().to_i64() } else { None }).expect("indicator is an integer")
    }

    /// dim V^H = |H|⁻¹ Σ_{h ∈ H} χ(h).
    pub fn fixed_space_dimension(&self, h: &Subgroup) -> Result<usize, GroupError> {
        if **h.parent() != *self.group {
            return Err(GroupError::NotSubgroup("subgroup of a different group".into()));
        }
        let sum = h.elements().iter().fold(CycloNumber::zero(1), |acc, &x| &acc + self.at(x));
        let v = sum.scale(&ratio(1, h.order() as i64));
        match v.to_rational() {
            Some(q) if q.is_integer() && !q.is_negative() => Ok(q.to_integer().to_usize().unwrap()),
            _ => Err(GroupError::NotIntegral(v.to_string())),
        }
    }

    /// Restriction along an injective homomorphism H → G.
    pub fn restrict(&self, emb: &GroupHom) -> Result<Character, CharError> {
        if **emb.target() != *self.group {
            return Err(CharError::WrongGroup);
        }
        if !emb.is_injective() {
            return Err(CharError::NotSubgroup);
        }
        let h = emb.source();
        let values = h.conjugacy_classes().iter().map(|c| self.at(emb.apply(c[0])).clone()).collect();
        Ok(Character::new(h, values))
    }

    /// Induction along an injective homomorphism H → G.
    pub fn induce(&self, emb: &GroupHom) -> Result<Character, CharError> {
        if **emb.source() != *self.group {
            return Err(CharError::WrongGroup);
        }
        if !emb.is_injective() {
            return Err(CharError::NotSubgroup);
        }
        let g = emb.target();
        let h = emb.source();
        let mut preimage = vec![None; g.order()];
        for x in h.elements() {
            preimage[emb.apply(x)] = Some(x);
        }
        let values = g
            .conjugacy_classes()
            .iter()
            .map(|c| {
                let rep = c[0];
                let mut acc = CycloNumber::zero(1);
                for x in g.elements() {
                    if let Some(y) = preimage[g.conjugate(x, rep)] {
                        acc = &acc + self.at(y);
                    }
                }
                acc.scale(&ratio(1, h.order() as i64))
            })
            .collect();
        Ok(Character::new(g, values))
    }

    /// Inflation along a surjection G → Q.
    pub fn inflate(&self, pi: &GroupHom) -> Result<Character, CharError> {
        if **pi.target() != *self.group {
            return Err(CharError::WrongGroup);
        }
        if !pi.is_surjective() {
            return Err(CharError::NotSurjection);
        }
        let g = pi.source();
        let values = g.conjugacy_classes().iter().map(|c| self.at(pi.apply(c[0])).clone()).collect();
        Ok(Character::new(g, values))
    }
}

impl<'a> Add<&'a Character> for &'a Character {
    type Output = Character;
    fn add(self, rhs: &'a Character) -> Character {
        Character::new(&self.group, self.values.iter().zip(&rhs.values).map(|(a, b)| a + b).collect())
    }
}

impl<'a> Mul<&'a Character> for &'a Character {
    type Output = Character;
    fn mul(self, rhs: &'a Character) -> Character {
        Character::new(&self.group, self.values.iter().zip(&rhs.values).map(|(a, b)| a * b).collect())
    }
}

pub struct CharacterTable {
    group: Group,
    exponent: u32,
    irreducibles: Vec<Character>,
    /// orbit[i] lists (a, j) such that χ_i^a = χ_j, for a a unit modulo the exponent
    galois: Vec<Vec<(i64, usize)>>,
}

impl fmt::Debug for CharacterTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CharacterTable({:?}, {:?})", self.group, self.irreducibles)
    }
}

impl CharacterTable {
    /// The character table of `group`, cached per multiplication table.
    pub fn of(group: &Group) -> Result<Arc<CharacterTable>, CharError> {
        static CACHE: OnceLock<Mutex<HashMap<Vec<Vec<usize>>, Arc<CharacterTable>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(t) = cache.lock().unwrap().get(group.table()) {
            if Arc::ptr_eq(&t.group, group) {
                return Ok(t.clone());
            }
            // same table, different handle: re-home the cached values
            let moved = Arc::new(t.rehome(group));
            return Ok(moved);
        }
        let t = Arc::new(Self::compute(group)?);
        cache.lock().unwrap().insert(group.table().to_vec(), t.clone());
        Ok(t)
    }

    fn rehome(&self, group: &Group) -> Self {
        CharacterTable {
            group: group.clone(),
            exponent: self.exponent,
            irreducibles: self.irreducibles.iter().map(|c| Character::new(group, c.values.clone())).collect(),
            galois: self.galois.clone(),
        }
    }

    /// Runs Dixon–Schneider without consulting the cache.
    pub fn compute(group: &Group) -> Result<CharacterTable, CharError> {
        let irreducibles = dixon(group)?;
        let table = Self::assemble(group, irreducibles)?;
        Ok(table)
    }

    fn assemble(group: &Group, mut irreducibles: Vec<Character>) -> Result<CharacterTable, CharError> {
        let exponent = group.exponent() as u32;
        irreducibles.sort_by(|a, b| {
            (!a.is_trivial(), a.degree())
                .cmp(&(!b.is_trivial(), b.degree()))
                .then_with(|| {
                    a.values
                        .iter()
                        .zip(&b.values)
                        .map(|(x, y)| x.cmp_lex(y))
                        .find(|o| o.is_ne())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
        });
        let t = CharacterTable { group: group.clone(), exponent, irreducibles, galois: Vec::new() };
        t.verify()?;
        let galois = (0..t.irreducibles.len())
            .map(|i| {
                units(exponent)
                    .into_iter()
                    .map(|a| {
                        let conj = t.irreducibles[i].galois(a);
                        let j = t.index_of(&conj).expect("Galois conjugate of an irreducible is irreducible");
                        (a, j)
                    })
                    .collect()
            })
            .collect();
        Ok(CharacterTable { galois, ..t })
    }

    /// Exact row and column orthogonality and the degree equation.
    pub fn verify(&self) -> Result<(), CharError> {
        let g = &self.group;
        let k = g.num_classes();
        if self.irreducibles.len() != k {
            return Err(CharError::LiftFailure(format!("{} characters for {k} classes", self.irreducibles.len())));
        }
        for (i, x) in self.irreducibles.iter().enumerate() {
            for (j, y) in self.irreducibles.iter().enumerate() {
                let ip = x.inner(y);
                let expect = if i == j { CycloNumber::one(1) } else { CycloNumber::zero(1) };
                if ip != expect {
                    return Err(CharError::LiftFailure(format!("row orthogonality fails at ({i},{j})")));
                }
            }
        }
        for a in 0..k {
            for b in 0..k {
                let mut acc = CycloNumber::zero(1);
                for x in &self.irreducibles {
                    acc = &acc + &(&x.values[a] * &x.values[b].conj());
                }
                let expect = if a == b {
                    CycloNumber::from_int((g.order() / g.conjugacy_classes()[a].len()) as i64)
                } else {
                    CycloNumber::zero(1)
                };
                if acc != expect {
                    return Err(CharError::LiftFailure(format!("column orthogonality fails at ({a},{b})")));
                }
            }
        }
        let squares: usize = self.irreducibles.iter().map(|c| c.degree() * c.degree()).sum();
        if squares != g.order() {
            return Err(CharError::LiftFailure("degree equation fails".into()));
        }
        Ok(())
    }

    pub fn group(&self) -> &Group {
        &self.group
    }
    pub fn exponent(&self) -> u32 {
        self.exponent
    }
    pub fn irreducibles(&self) -> &[Character] {
        &self.irreducibles
    }
    pub fn len(&self) -> usize {
        self.irreducibles.len()
    }
    pub fn is_empty(&self) -> bool {
        self.irreducibles.is_empty()
    }
    pub fn get(&self, i: usize) -> &Character {
        &self.irreducibles[i]
    }
    pub fn degrees(&self) -> Vec<usize> {
        self.irreducibles.iter().map(Character::degree).collect()
    }
    pub fn trivial_index(&self) -> usize {
        0
    }
    pub fn index_of(&self, chi: &Character) -> Option<usize> {
        self.irreducibles.iter().position(|c| c == chi)
    }
    /// Index of the conjugate character χ̄ (= χ^{-1} for linear characters).
    pub fn dual_index(&self, i: usize) -> usize {
        self.galois_index(i, -1)
    }
    /// Index j with χ_i^a = χ_j.
    pub fn galois_index(&self, i: usize, a: i64) -> usize {
        let e = self.exponent as i64;
        let a = a.rem_euclid(e.max(1));
        if e == 1 {
            return i;
        }
        self.galois[i].iter().find(|(b, _)| b.rem_euclid(e) == a).map(|(_, j)| *j).expect("a must be a unit modulo the exponent")
    }
    /// Galois orbits of irreducibles, each sorted, ordered by smallest member.
    pub fn galois_orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut orbits = Vec::new();
        for i in 0..self.len() {
            if seen[i] {
                continue;
            }
            let mut orbit: Vec<usize> = self.galois[i].iter().map(|(_, j)| *j).collect();
            orbit.sort();
            orbit.dedup();
            for &j in &orbit {
                seen[j] = true;
            }
            orbits.push(orbit);
        }
        orbits
    }

    /// Multiplicities of the irreducibles in a class function.
    pub fn decompose(&self, f: &Character) -> Vec<CycloNumber> {
        self.irreducibles.iter().map(|c| f.inner(c)).collect()
    }

    /// e_χ = χ(1)|G|⁻¹ Σ_g χ(g) g⁻¹.
    pub fn central_idempotent(&self, i: usize) -> GAElement {
        let g = &self.group;
        let chi = &self.irreducibles[i];
        let scale = ratio(chi.degree() as i64, g.order() as i64);
        let coeffs = g.elements().map(|x| chi.at(g.inv(x)).scale(&scale)).collect();
        GAElement::from_coeffs(g, coeffs)
    }

    /// z_χ = χ(1)⁻¹ Σ_g z_g χ(g) for central z.
    pub fn wedderburn_coords(self: &Arc<Self>, z: &GAElement) -> Result<CentralElement, CharError> {
        if !z.is_central() {
            return Err(CharError::NotCentral);
        }
        let g = &self.group;
        let coords = self
            .irreducibles
            .iter()
            .map(|chi| {
                let mut acc = CycloNumber::zero(1);
                for x in g.elements() {
                    if !z.coeff(x).is_zero() {
                        acc = &acc + &(z.coeff(x) * chi.at(x));
                    }
                }
                acc.scale(&ratio(1, chi.degree() as i64))
            })
            .collect();
        Ok(CentralElement { table: self.clone(), coords })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let g = &self.group;
        json!({
            "group": g.name(),
            "order": g.order(),
            "classes": g.conjugacy_classes().iter().map(|c| json!({
                "representative": g.labels()[c[0]],
                "size": c.len(),
                "elements": c,
            })).collect::<Vec<_>>(),
            "degrees": self.degrees(),
            "characters": self.irreducibles.iter().map(|c| c.values.iter().map(|v| serde_json::to_value(v).unwrap()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

fn units(e: u32) -> Vec<i64> {
    let e = e.max(1) as i64;
    (1..=e).filter(|a| num_integer::gcd(*a, e) == 1).collect()
}

/// Element of the centre of E[G] in Wedderburn coordinates (one value per irreducible).
#[derive(Clone)]
pub struct CentralElement {
    table: Arc<CharacterTable>,
    coords: Vec<CycloNumber>,
}

impl PartialEq for CentralElement {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords
    }
}

impl fmt::Debug for CentralElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.coords.iter().map(|v| v.to_string()).collect();
        write!(f, "Central[{}]", vals.join(", "))
    }
}

impl CentralElement {
    pub fn new(table: &Arc<CharacterTable>, coords: Vec<CycloNumber>) -> Self {
        assert_eq!(coords.len(), table.len());
        CentralElement { table: table.clone(), coords }
    }
    pub fn constant(table: &Arc<CharacterTable>, c: CycloNumber) -> Self {
        Self::new(table, vec![c; table.len()])
    }
    pub fn one(table: &Arc<CharacterTable>) -> Self {
        Self::constant(table, CycloNumber::one(1))
    }
    pub fn zero(table: &Arc<CharacterTable>) -> Self {
        Self::constant(table, CycloNumber::zero(1))
    }
    pub fn table(&self) -> &Arc<CharacterTable> {
        &self.table
    }
    pub fn coords(&self) -> &[CycloNumber] {
        &self.coords
    }
    pub fn coord(&self, i: usize) -> &CycloNumber {
        &self.coords[i]
    }
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(CycloNumber::is_zero)
    }
    pub fn is_one(&self) -> bool {
        self.coords.iter().all(CycloNumber::is_one)
    }
    pub fn is_invertible(&self) -> bool {
        self.coords.iter().all(|c| !c.is_zero())
    }
    pub fn inv(&self) -> Option<Self> {
        let coords = self.coords.iter().map(|c| c.inv().ok()).collect::<Option<Vec<_>>>()?;
        Some(Self::new(&self.table, coords))
    }
    pub fn scale(&self, c: &CycloNumber) -> Self {
        Self::new(&self.table, self.coords.iter().map(|x| x * c).collect())
    }
    pub fn map(&self, f: impl Fn(usize, &CycloNumber) -> CycloNumber) -> Self {
        Self::new(&self.table, self.coords.iter().enumerate().map(|(i, x)| f(i, x)).collect())
    }

    /// True iff the coordinates are permuted compatibly by the Galois action, i.e. the
    /// element lies in the centre of Q[G].
    pub fn is_rational(&self) -> bool {
        let t = &self.table;
        let e = t.exponent.max(1);
        (0..t.len()).all(|i| {
            units(e).into_iter().all(|a| {
                let j = t.galois_index(i, a);
                let c = &self.coords[i];
                let n = crate::arith::lcm_u32(c.conductor(), e);
                c.lift(n).galois_act(a).map(|x| x == self.coords[j]).unwrap_or(false)
            })
        })
    }

    /// Σ_χ z_χ e_χ.
    pub fn to_group_algebra(&self) -> GAElement {
        let g = self.table.group();
        let mut acc = GAElement::zero(g);
        for (i, c) in self.coords.iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &self.table.central_idempotent(i).scale(c);
            }
        }
        acc
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.coords.iter().map(|c| serde_json::to_value(c).unwrap()).collect())
    }
}

impl<'a> Add<&'a CentralElement> for &'a CentralElement {
    type Output = CentralElement;
    fn add(self, rhs: &'a CentralElement) -> CentralElement {
        CentralElement::new(&self.table, self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect())
    }
}

impl<'a> Sub<&'a CentralElement> for &'a CentralElement {
    type Output = CentralElement;
    fn sub(self, rhs: &'a CentralElement) -> CentralElement {
        CentralElement::new(&self.table, self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect())
    }
}

impl<'a> Mul<&'a CentralElement> for &'a CentralElement {
    type Output = CentralElement;
    fn mul(self, rhs: &'a CentralElement) -> CentralElement {
        CentralElement::new(&self.table, self.coords.iter().zip(&rhs.coords).map(|(a, b)| a * b).collect())
    }
}

impl Neg for &CentralElement {
    type Output = CentralElement;
    fn neg(self) -> CentralElement {
        CentralElement::new(&self.table, self.coords.iter().map(|a| -a).collect())
    }
}

impl Mul for CentralElement {
    type Output = CentralElement;
    fn mul(self, rhs: CentralElement) -> CentralElement {
        &self * &rhs
    }
}

/// Least prime ℓ ≡ 1 mod e with ℓ > 2√n.
pub fn dixon_prime(e: u64, n: u64) -> u64 {
    let mut l = e + 1;
    while !(is_prime(l) && l * l > 4 * n) {
        l += e;
    }
    l
}

fn primitive_root(l: u64) -> u64 {
    let factors = crate::arith::prime_factors(l - 1);
    (2..l).find(|&g| factors.iter().all(|&q| Fp::new(g as i64, l).pow((l - 1) / q).v != 1)).unwrap_or(1)
}

/// Dixon–Schneider: simultaneous eigenvectors of the class matrices over F_ℓ, lifted to
/// Q(ζ_e) through eigenvalue multiplicities.
fn dixon(group: &Group) -> Result<Vec<Character>, CharError> {
    let g = group;
    let n = g.order();
    let k = g.num_classes();
    let classes = g.conjugacy_classes();
    let e = g.exponent() as u64;
    let l = dixon_prime(e, n as u64);
    let fp = |x: i64| Fp::new(x, l);

    // a[i][j][m] = #{x in C_i : x^{-1} z_m in C_j}, z_m the representative of C_m
    let class_matrix = |i: usize| -> Vec<Vec<Fp>> {
        let mut m = vec![vec![fp(0); k]; k];
        for (mi, cm) in classes.iter().enumerate() {
            let z = cm[0];
            for &x in &classes[i] {
                let y = g.mul(g.inv(x), z);
                let j = g.class_of(y);
                m[j][mi] = &m[j][mi] + &fp(1);
            }
        }
        m
    };

    let one = fp(1);
    let mut spaces: Vec<Vec<Vec<Fp>>> = vec![(0..k).map(|i| (0..k).map(|j| if i == j { one } else { fp(0) }).collect()).collect()];
    for i in 1..k {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let m = class_matrix(i);
        let mut next = Vec::new();
        for basis in spaces {
            if basis.len() == 1 {
                next.push(basis);
                continue;
            }
            // restrict m to span(basis): vectors v = c·basis with m v = λ v
            let cols = basis.len();
            let image: Vec<Vec<Fp>> = (0..k)
                .map(|r| {
                    (0..cols)
                        .map(|c| (0..k).fold(fp(0), |acc, t| &acc + &(&m[r][t] * &basis[c][t])))
                        .collect()
                })
                .collect();
            let mut found = 0;
            for lambda in 0..l {
                let lam = fp(lambda as i64);
                let shifted: Vec<Vec<Fp>> = (0..k)
                    .map(|r| (0..cols).map(|c| &image[r][c] - &(&lam * &basis[c][r])).collect())
                    .collect();
                let ker = kernel(&shifted, cols, &one);
                if ker.is_empty() {
                    continue;
                }
                found += ker.len();
                let sub: Vec<Vec<Fp>> = ker
                    .iter()
                    .map(|c| (0..k).map(|t| (0..cols).fold(fp(0), |acc, s| &acc + &(&c[s] * &basis[s][t]))).collect())
                    .collect();
                next.push(sub);
                if found == cols {
                    break;
                }
            }
            if found != cols {
                return Err(CharError::LiftFailure("class matrix not diagonalizable over the Dixon prime".into()));
            }
        }
        spaces = next;
    }
    if spaces.iter().any(|s| s.len() != 1) {
        return Err(CharError::LiftFailure("class matrices do not separate the characters".into()));
    }

    let inv_class: Vec<usize> = classes.iter().map(|c| g.class_of(g.inv(c[0]))).collect();
    let z = Fp::new(primitive_root(l) as i64, l).pow((l - 1) / e);
    let e_inv = fp(e as i64).inverse_elt();
    let zeta_e = |s: usize| CycloNumber::zeta_pow(e as u32, s as i64);
    let mut chars = Vec::new();
    for space in spaces {
        let w0 = &space[0];
        if w0[0].v == 0 {
            return Err(CharError::LiftFailure("eigenvector vanishes at the identity".into()));
        }
        let inv0 = w0[0].inverse_elt();
        let w: Vec<Fp> = w0.iter().map(|x| x * &inv0).collect();
        let mut s = fp(0);
        for j in 0..k {
            let h = fp(classes[j].len() as i64).inverse_elt();
            s = &s + &(&(&w[j] * &w[inv_class[j]]) * &h);
        }
        if s.v == 0 {
            return Err(CharError::LiftFailure("zero norm".into()));
        }
        let d2 = &fp(n as i64) * &s.inverse_elt();
        let d = (1..=n)
            .take_while(|d| d * d <= n)
            .find(|&d| fp((d * d) as i64) == d2 && n.is_multiple_of(d))
            .ok_or_else(|| CharError::LiftFailure("no admissible degree".into()))?;
        let chat: Vec<Fp> = (0..k).map(|j| &(&fp(d as i64) * &w[j]) * &fp(classes[j].len() as i64).inverse_elt()).collect();
        let mut values = Vec::with_capacity(k);
        for cls in classes {
            let x = cls[0];
            let mut val = CycloNumber::zero(e as u32);
            let mut total = 0;
            for s in 0..e as usize {
                let mut m = fp(0);
                let mut xt = g.identity();
                for t in 0..e as usize {
                    let zt = z.pow(((e as usize - (s * t) % e as usize) % e as usize) as u64);
                    m = &m + &(&chat[g.class_of(xt)] * &zt);
                    xt = g.mul(xt, x);
                }
                let m = (&m * &e_inv).v as usize;
                if m > d {
                    return Err(CharError::LiftFailure(format!("eigenvalue multiplicity {m} exceeds degree {d}")));
                }
                total += m;
                if m > 0 {
                    val = &val + &zeta_e(s).scale(&rat(m as i64));
                }
            }
            if total != d {
                return Err(CharError::LiftFailure("eigenvalue multiplicities do not sum to the degree".into()));
            }
            values.push(val);
        }
        chars.push(Character::new(g, values));
    }
    Ok(chars)
}

trait FpInv {
    fn inverse_elt(&self) -> Fp;
}

impl FpInv for Fp {
    fn inverse_elt(&self) -> Fp {
        crate::linalg::Field::inverse(self)
    }
}

/// Multiplicities ⟨f, χ⟩ as non-negative integers, when f is a genuine character.
pub fn integer_multiplicities(table: &CharacterTable, f: &Character) -> Option<Vec<usize>> {
    table
        .decompose(f)
        .into_iter()
        .map(|m| m.to_rational().filter(|q| q.is_integer() && !q.is_negative()).and_then(|q| q.to_integer().to_usize()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::catalog;
    use proptest::prelude::*;

    fn table(name: &str) -> Arc<CharacterTable> {
        CharacterTable::of(&catalog(name).unwrap()).unwrap()
    }

    #[test]
    fn degrees() {
        assert_eq!(table("s3").degrees(), vec![1, 1, 2]);
        assert_eq!(table("q8").degrees(), vec![1, 1, 1, 1, 2]);
        assert_eq!(table("d4").degrees(), vec![1, 1, 1, 1, 2]);
        assert_eq!(table("a4").degrees(), vec![1, 1, 1, 3]);
        assert_eq!(table("s4").degrees(), vec![1, 1, 2, 3, 3]);
        assert_eq!(table("d5").degrees(), vec![1, 1, 2, 2]);
        assert_eq!(table("c6").degrees(), vec![1; 6]);
    }

    #[test]
    fn cyclic_characters_are_roots_of_unity() {
        let t = table("c4");
        let g = t.group().clone();
        for chi in t.irreducibles() {
            let v = chi.at(1);
            assert_eq!(v.pow(4), CycloNumber::one(1));
            for x in g.elements() {
                assert_eq!(chi.at(x), &v.pow(x as u64));
            }
        }
    }

    #[test]
    fn idempotents() {
        for name in ["c2", "s3", "q8"] {
            let t = table(name);
            let g = t.group().clone();
            let mut sum = GAElement::zero(&g);
            for i in 0..t.len() {
                let e = t.central_idempotent(i);
                assert!(e.is_central());
                assert_eq!(&e * &e, e);
                for j in 0..t.len() {
                    if i != j {
                        assert!((&e * &t.central_idempotent(j)).is_zero());
                    }
                }
                sum = &sum + &e;
            }
            assert_eq!(sum, GAElement::one(&g));
        }
        let t = table("c2");
        let g = t.group().clone();
        let expect = GAElement::from_coeffs(&g, vec![CycloNumber::rational(ratio(1, 2)), CycloNumber::rational(ratio(-1, 2))]);
        assert_eq!(t.central_idempotent(1), expect);
    }

    #[test]
    fn wedderburn_round_trip() {
        let t = table("s3");
        let g = t.group().clone();
        let n = GAElement::norm_element(&g);
        let z = t.wedderburn_coords(&n).unwrap();
        assert_eq!(z.coords(), &[CycloNumber::from_int(6), CycloNumber::from_int(0), CycloNumber::from_int(0)]);
        assert_eq!(z.to_group_algebra(), n);
        assert!(t.wedderburn_coords(&GAElement::one(&g)).unwrap().is_one());
        let t1 = g.elements().find(|&x| g.element_order(x) == 2).unwrap();
        assert_eq!(t.wedderburn_coords(&GAElement::basis(&g, t1)), Err(CharError::NotCentral));
    }

    #[test]
    fn frobenius_schur_indicators() {
        let q = table("q8");
        assert_eq!(q.irreducibles().iter().map(Character::frobenius_schur).collect::<Vec<_>>(), vec![1, 1, 1, 1, -1]);
        let s = table("s3");
        assert_eq!(s.get(2).frobenius_schur(), 1);
        let c3 = table("c3");
        assert_eq!(c3.get(1).frobenius_schur(), 0);
    }

    #[test]
    fn induction_and_restriction() {
        let t = table("s3");
        let g = t.group().clone();
        let r = g.elements().find(|&x| g.element_order(x) == 3).unwrap();
        let a3 = Subgroup::generated(&g, &[r]);
        let (h, inc) = a3.as_group().unwrap();
        let th = CharacterTable::of(&h).unwrap();
        let faithful = th.irreducibles().iter().find(|c| !c.is_trivial()).unwrap();
        let ind = faithful.induce(&inc).unwrap();
        assert_eq!(t.index_of(&ind), Some(2));
        // reciprocity
        for psi in t.irreducibles() {
            for chi in th.irreducibles() {
                assert_eq!(chi.induce(&inc).unwrap().inner(psi), chi.inner(&psi.restrict(&inc).unwrap()));
            }
        }
        let (triv, inc1) = Subgroup::trivial(&g).as_group().unwrap();
        assert_eq!(Character::trivial(&triv).induce(&inc1).unwrap(), Character::regular(&g));
        // inflate then restrict to the quotient's own characters is the identity
        let (q, pi) = a3.quotient().unwrap();
        let tq = CharacterTable::of(&q).unwrap();
        for chi in tq.irreducibles() {
            let inf = chi.inflate(&pi).unwrap();
            assert!(t.index_of(&inf).is_some());
            let back = Character::new(&q, q.conjugacy_classes().iter().map(|c| {
                let x = g.elements().find(|&x| pi.apply(x) == c[0]).unwrap();
                inf.at(x).clone()
            }).collect());
            assert_eq!(&back, chi);
        }
    }

    #[test]
    fn fixed_space_dimensions() {
        let t = table("s3");
        let g = t.group().clone();
        let r = g.elements().find(|&x| g.element_order(x) == 3).unwrap();
        let s = g.elements().find(|&x| g.element_order(x) == 2).unwrap();
        let a3 = Subgroup::generated(&g, &[r]);
        let c2 = Subgroup::generated(&g, &[s]);
        assert_eq!(t.get(1).fixed_space_dimension(&a3).unwrap(), 1);
        assert_eq!(t.get(2).fixed_space_dimension(&c2).unwrap(), 1);
        for name in ["s3", "d4", "q8", "a4"] {
            let t = table(name);
            let whole = Subgroup::whole(t.group());
            for chi in t.irreducibles() {
                assert_eq!(chi.fixed_space_dimension(&whole).unwrap() == 1, chi.is_trivial());
            }
        }
        let bogus = Character::new(&g, vec![CycloNumber::from_int(1), CycloNumber::from_int(0), CycloNumber::from_int(0)]);
        assert!(matches!(bogus.fixed_space_dimension(&a3), Err(GroupError::NotIntegral(_))));
    }

    #[test]
    fn galois_permutes_irreducibles() {
        for name in ["c3", "c4", "d5", "a4"] {
            let t = table(name);
            for i in 0..t.len() {
                let mut images: Vec<usize> = units(t.exponent()).into_iter().map(|a| t.galois_index(i, a)).collect();
                images.sort();
                images.dedup();
                assert!(images.iter().all(|&j| t.get(j).degree() == t.get(i).degree()));
            }
        }
        assert_eq!(table("c3").galois_orbits(), vec![vec![0], vec![1, 2]]);
    }

    #[test]
    fn dixon_prime_choice() {
        assert_eq!(dixon_prime(2, 6), 5);
        assert_eq!(dixon_prime(12, 24), 13);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn coords_are_multiplicative(a in proptest::collection::vec(-3i64..4, 3), b in proptest::collection::vec(-3i64..4, 3)) {
            let t = table("s3");
            let g = t.group().clone();
            let class_sum = |coeffs: &[i64]| {
                let mut z = GAElement::zero(&g);
                for (c, cls) in coeffs.iter().zip(g.conjugacy_classes()) {
                    for &x in cls {
                        z = &z + &GAElement::basis(&g, x).scale(&CycloNumber::from_int(*c));
                    }
                }
                z
            };
            let (x, y) = (class_sum(&a), class_sum(&b));
            let (zx, zy) = (t.wedderburn_coords(&x).unwrap(), t.wedderburn_coords(&y).unwrap());
            prop_assert_eq!(t.wedderburn_coords(&(&x * &y)).unwrap(), &zx * &zy);
            prop_assert_eq!(t.wedderburn_coords(&(&x + &y)).unwrap(), &zx + &zy);
            prop_assert!(zx.is_rational());
        }
    }
}
