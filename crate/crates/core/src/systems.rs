//! Towers of finite quotients, rank-0 Stickelberger systems with exact distribution
//! checks, determinant lines of two-term complexes with their primitive-basis calculus at
//! good primes, boundary-kernel and positivity tests, and finite-level derivatives over
//! direct-product towers Δ × Z/p^n.

use std::sync::Arc;

use num_traits::Zero;
use serde::Deserialize;
use thiserror::Error;

use crate::algebra::GAElement;
use crate::arith::{is_prime, prime_factors, rat, ArithError, CycloNumber, Rational, Sign, SignCertificate};
use crate::chars::{CentralElement, CharError, CharacterTable};
use crate::galg::{reduced_norm, GAMatrix, GalgError};
use crate::groups::{FiniteGroup, Group, GroupError, GroupHom, GroupSpec};
use crate::lfun::{stickelberger, GaloisSetup, LfunError, PlaceLabel};
use crate::reps::{RepError, Wedderburn};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SystemsError {
    #[error("invalid tower: {0}")]
    InvalidTower(String),
    #[error("distribution relation fails between levels {lower} and {upper}")]
    RelationViolation { lower: usize, upper: usize },
    #[error("not a basis")]
    NotABasis,
    #[error("prime {0} divides the group order or is not prime")]
    BadPrime(u64),
    #[error("singular")]
    Singular,
    #[error("lines have different references")]
    IncompatibleLines,
    #[error("coordinate {0} is not rational")]
    NotRational(usize),
    #[error("symplectic coordinate {0} is not totally real")]
    NotReal(usize),
    #[error("level {level} is divisible only to order {achieved}")]
    NotDivisible { level: usize, achieved: usize },
    #[error("not a direct-product tower: {0}")]
    NotDirectProduct(String),
    #[error("generator exponent {0} is not prime to p")]
    BadGenerator(u64),
    #[error("matrix entries are not integral at {0}")]
    NotIntegral(u64),
    #[error(transparent)]
    Lfun(#[from] LfunError),
    #[error(transparent)]
    Galg(#[from] GalgError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Char(#[from] CharError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// One level of a cyclotomic tower: Q(ζ_f) with its place set S.
#[derive(Clone, Debug)]
pub struct TowerLevel {
    pub conductor: u64,
    pub s: Vec<PlaceLabel>,
    pub setup: GaloisSetup,
}

/// Levels Q(ζ_{f_0}) ⊂ Q(ζ_{f_1}) ⊂ … with S(F) growing along the tower.
#[derive(Clone, Debug)]
pub struct TowerDatum {
    levels: Vec<TowerLevel>,
}

impl TowerDatum {
    /// Each S must contain inf and the primes dividing its conductor, and the sets must
    /// increase with the level.
    pub fn cyclotomic(conductors: &[u64], s_sets: &[Vec<PlaceLabel>]) -> Result<Self, SystemsError> {
        if conductors.is_empty() || conductors.len() != s_sets.len() {
            return Err(SystemsError::InvalidTower("one place set per conductor required".into()));
        }
        let mut levels = Vec::new();
        for (i, (&f, s)) in conductors.iter().zip(s_sets).enumerate() {
            if i > 0 {
                let prev: &TowerLevel = &levels[i - 1];
                if f % prev.conductor != 0 {
                    return Err(SystemsError::InvalidTower(format!("{} does not divide {f}", prev.conductor)));
                }
                if prev.s.iter().any(|v| !s.contains(v)) {
                    return Err(SystemsError::InvalidTower(format!("S shrinks at level {i}")));
                }
            }
            if !s.contains(&PlaceLabel::Infinite) {
                return Err(SystemsError::InvalidTower(format!("S at level {i} lacks inf")));
            }
            if let Some(p) = prime_factors(f).into_iter().find(|&p| !s.contains(&PlaceLabel::Prime(p))) {
                return Err(SystemsError::InvalidTower(format!("S at level {i} lacks the ramified prime {p}")));
            }
            levels.push(TowerLevel { conductor: f, s: s.clone(), setup: GaloisSetup::cyclotomic(f, s)? });
        }
        Ok(TowerDatum { levels })
    }

    /// Tower with S(F) = given places ∪ {inf} ∪ primes dividing the conductor.
    pub fn cyclotomic_minimal(conductors: &[u64], extra: &[PlaceLabel]) -> Result<Self, SystemsError> {
        let mut sets = Vec::new();
        let mut acc: Vec<PlaceLabel> = vec![PlaceLabel::Infinite];
        for &f in conductors {
            for l in extra.iter().copied().chain(prime_factors(f).into_iter().map(PlaceLabel::Prime)) {
                if !acc.contains(&l) {
                    acc.push(l);
                }
            }
            sets.push(acc.clone());
        }
        Self::cyclotomic(conductors, &sets)
    }

    /// `{"conductors": [...], "S": [[...], ...]}` or `{"conductors": [...], "S": [...]}`
    /// (the latter completed per level with inf and the ramified primes).
    pub fn from_json(v: &serde_json::Value) -> Result<Self, SystemsError> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum SSpec {
            PerLevel(Vec<Vec<String>>),
            Common(Vec<String>),
        }
        #[derive(Deserialize)]
        struct Raw {
            conductors: Vec<u64>,
            #[serde(rename = "S", default)]
            s: Option<SSpec>,
        }
        let raw: Raw = serde_json::from_value(v.clone()).map_err(|e| SystemsError::InvalidTower(e.to_string()))?;
        let parse = |ls: &[String]| ls.iter().map(|l| PlaceLabel::parse(l)).collect::<Result<Vec<_>, _>>();
        match raw.s {
            Some(SSpec::PerLevel(sets)) => {
                let sets = sets.iter().map(|s| parse(s)).collect::<Result<Vec<_>, _>>()?;
                Self::cyclotomic(&raw.conductors, &sets)
            }
            Some(SSpec::Common(s)) => Self::cyclotomic_minimal(&raw.conductors, &parse(&s)?),
            None => Self::cyclotomic_minimal(&raw.conductors, &[]),
        }
    }

    pub fn levels(&self) -> &[TowerLevel] {
        &self.levels
    }

    /// The restriction map Gal(Q(ζ_{f_j})/Q) → Gal(Q(ζ_{f_i})/Q), σ_a ↦ σ_{a mod f_i}.
    pub fn projection(&self, upper: usize, lower: usize) -> Result<GroupHom, SystemsError> {
        let (hi, lo) = (&self.levels[upper].setup, &self.levels[lower].setup);
        let images = hi
            .group()
            .elements()
            .map(|g| lo.sigma(hi.residue(g).unwrap() as i64).unwrap())
            .collect();
        Ok(GroupHom::new(hi.group(), lo.group(), images)?)
    }
}

/// A rank-0 system: one central element per tower level.
#[derive(Clone, Debug)]
pub struct PreEulerSystem0 {
    pub tower: TowerDatum,
    pub values: Vec<CentralElement>,
}

/// θ_{F, S(F), T}(0) at every level.
pub fn stickelberger_system(tower: &TowerDatum, t: &[PlaceLabel]) -> Result<PreEulerSystem0, SystemsError> {
    let values = tower
        .levels
        .iter()
        .map(|l| Ok(stickelberger(l.conductor, &l.s, t)?.value))
        .collect::<Result<Vec<_>, SystemsError>>()?;
    Ok(PreEulerSystem0 { tower: tower.clone(), values })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairResidual {
    pub lower: usize,
    pub upper: usize,
    /// Group-element coefficients of π(c_upper) − ∏(1 − Fr_v⁻¹)·c_lower.
    pub residual: Vec<CycloNumber>,
}

impl PairResidual {
    pub fn holds(&self) -> bool {
        self.residual.iter().all(CycloNumber::is_zero)
    }
}

/// Residuals of π_{F'/F}(c_{F'}) = ∏_{v∈S(F')∖S(F)} Nrd(1 − Fr_{F,v}⁻¹)·c_F for every
/// comparable pair of levels.
pub fn distribution_residuals(sys: &PreEulerSystem0) -> Result<Vec<PairResidual>, SystemsError> {
    let levels = sys.tower.levels();
    if sys.values.len() != levels.len() {
        return Err(SystemsError::InvalidTower("one value per level required".into()));
    }
    let mut out = Vec::new();
    for upper in 0..levels.len() {
        for lower in 0..upper {
            let lo = &levels[lower];
            let g = lo.setup.group();
            let w = Wedderburn::of(g)?;
            let projected = sys.values[upper].to_group_algebra().push_forward(&sys.tower.projection(upper, lower)?);
            let mut rhs = sys.values[lower].clone();
            for v in levels[upper].s.iter().filter(|v| !lo.s.contains(v)) {
                let q = v.prime().ok_or_else(|| SystemsError::InvalidTower("archimedean place added".into()))?;
                let fr = lo.setup.sigma(q as i64).ok_or_else(|| SystemsError::InvalidTower(format!("{q} ramifies")))?;
                let factor = &GAElement::one(g) - &GAElement::basis(g, g.inv(fr));
                let nrd = reduced_norm(&w, &GAMatrix::new(g, vec![vec![factor]])?)?;
                rhs = &rhs * &nrd;
            }
            let residual = (&projected - &rhs.to_group_algebra()).coeffs().to_vec();
            out.push(PairResidual { lower, upper, residual });
        }
    }
    Ok(out)
}

/// All residuals, or the first failing pair.
pub fn verify_distribution(sys: &PreEulerSystem0) -> Result<Vec<PairResidual>, SystemsError> {
    let res = distribution_residuals(sys)?;
    if let Some(bad) = res.iter().find(|r| !r.holds()) {
        return Err(SystemsError::RelationViolation { lower: bad.lower, upper: bad.upper });
    }
    Ok(res)
}

/// An element of a graded invertible line: a reference basis scaled by a central element.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedLine {
    pub reference: String,
    pub scaling: CentralElement,
    pub grading: Vec<i64>,
}

impl GradedLine {
    pub fn reference_basis(reference: &str, table: &Arc<CharacterTable>, grading: Vec<i64>) -> Self {
        GradedLine { reference: reference.to_string(), scaling: CentralElement::one(table), grading }
    }

    pub fn scaled(&self, z: &CentralElement) -> Self {
        GradedLine { scaling: &self.scaling * z, ..self.clone() }
    }
}

/// A morphism of lines sending the reference basis of `source` to `scaling` times that of
/// `target`.
#[derive(Clone, Debug, PartialEq)]
pub struct LineMorphism {
    pub source: String,
    pub target: String,
    pub scaling: CentralElement,
}

impl LineMorphism {
    pub fn apply(&self, x: &GradedLine) -> Result<GradedLine, SystemsError> {
        if x.reference != self.source {
            return Err(SystemsError::IncompatibleLines);
        }
        Ok(GradedLine { reference: self.target.clone(), scaling: &x.scaling * &self.scaling, grading: x.grading.clone() })
    }

    /// self ∘ first.
    pub fn after(&self, first: &LineMorphism) -> Result<LineMorphism, SystemsError> {
        if first.target != self.source {
            return Err(SystemsError::IncompatibleLines);
        }
        Ok(LineMorphism { source: first.source.clone(), target: self.target.clone(), scaling: &first.scaling * &self.scaling })
    }

    pub fn inverse(&self) -> Result<LineMorphism, SystemsError> {
        Ok(LineMorphism {
            source: self.target.clone(),
            target: self.source.clone(),
            scaling: self.scaling.inv().ok_or(SystemsError::Singular)?,
        })
    }
}

/// The unique z with λ(z) = (x, 0): z = x·λ⁻¹(1).
pub fn zeta_element(lambda: &LineMorphism, x: &CentralElement) -> Result<GradedLine, SystemsError> {
    let inv = lambda.inverse()?;
    let one = GradedLine {
        reference: lambda.target.clone(),
        scaling: CentralElement::one(x.table()),
        grading: vec![0; x.table().len()],
    };
    Ok(inv.apply(&one)?.scaled(x))
}

/// A complex A^d → A^d in degrees 0 and 1 given by φ, with coefficients declared
/// integral at `primes`.
#[derive(Clone, Debug)]
pub struct TwoTermComplex {
    pub alg: Arc<Wedderburn>,
    pub phi: GAMatrix,
    pub primes: Vec<u64>,
}

impl TwoTermComplex {
    pub fn new(alg: &Arc<Wedderburn>, phi: GAMatrix, primes: Vec<u64>) -> Result<Self, SystemsError> {
        if phi.rows() != phi.cols() {
            return Err(GalgError::NotSquare.into());
        }
        if let Some(&p) = primes.iter().find(|&&p| !phi.is_p_integral(p)) {
            return Err(SystemsError::NotIntegral(p));
        }
        Ok(TwoTermComplex { alg: alg.clone(), phi, primes })
    }

    pub fn rank(&self) -> usize {
        self.phi.rows()
    }

    /// Parses `{"group": ..., "phi": GAMatrix JSON, "primes": [...]}`.
    pub fn from_json(v: &serde_json::Value) -> Result<Self, SystemsError> {
        let bad = |m: &str| SystemsError::InvalidTower(m.to_string());
        let spec: GroupSpec =
            serde_json::from_value(v.get("group").cloned().ok_or_else(|| bad("missing group"))?).map_err(|e| bad(&e.to_string()))?;
        let g = spec.build()?;
        let w = Wedderburn::of(&g)?;
        let phi = GAMatrix::from_json(&g, v.get("phi").ok_or_else(|| bad("missing phi"))?)?;
        let primes: Vec<u64> = match v.get("primes") {
            Some(p) => serde_json::from_value(p.clone()).map_err(|e| bad(&e.to_string()))?,
            None => Vec::new(),
        };
        Self::new(&w, phi, primes)
    }

    fn reference(&self) -> String {
        format!("det(A^{0}) ⊗ det(A^{0})^-1", self.rank())
    }
}

fn good_prime(group: &FiniteGroup, p: u64) -> Result<(), SystemsError> {
    if !is_prime(p) || (group.order() as u64).is_multiple_of(p) {
        return Err(SystemsError::BadPrime(p));
    }
    Ok(())
}

fn all_p_units(z: &CentralElement, p: u64) -> Result<bool, SystemsError> {
    for c in z.coords() {
        if !c.is_p_unit(p)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Υ(b) = (∧b₀)⊗(∧b₁)⁻¹ for bases given by their coordinate rows in the distinguished
/// bases; the scaling is Nrd(b₀)·Nrd(b₁)⁻¹.
pub fn upsilon_basis(c: &TwoTermComplex, b0: &GAMatrix, b1: &GAMatrix) -> Result<GradedLine, SystemsError> {
    let d = c.rank();
    if b0.rows() != d || b0.cols() != d || b1.rows() != d || b1.cols() != d {
        return Err(SystemsError::NotABasis);
    }
    let n0 = reduced_norm(&c.alg, b0)?;
    let n1 = reduced_norm(&c.alg, b1)?;
    let n1_inv = n1.inv().ok_or(SystemsError::NotABasis)?;
    if !n0.is_invertible() {
        return Err(SystemsError::NotABasis);
    }
    for &p in c.primes.iter().filter(|&&p| !(c.alg.group().order() as u64).is_multiple_of(p)) {
        if !(b0.is_p_integral(p) && b1.is_p_integral(p) && all_p_units(&n0, p)? && all_p_units(&n1, p)?) {
            return Err(SystemsError::NotABasis);
        }
    }
    Ok(GradedLine { reference: c.reference(), scaling: &n0 * &n1_inv, grading: vec![0; c.alg.num_blocks()] })
}

/// b′ = u·b with every coordinate of u a p-unit.
pub fn primitive_equiv(b: &GradedLine, b2: &GradedLine, p: u64) -> Result<bool, SystemsError> {
    good_prime(b.scaling.table().group(), p)?;
    if b.reference != b2.reference || b.grading != b2.grading {
        return Err(SystemsError::IncompatibleLines);
    }
    let Some(inv) = b.scaling.inv() else { return Ok(false) };
    all_p_units(&(&b2.scaling * &inv), p)
}

/// Image of Υ(standard bases) under the acyclic trivialization: Nrd(φ).
pub fn acyclic_value(c: &TwoTermComplex) -> Result<CentralElement, SystemsError> {
    let n = reduced_norm(&c.alg, &c.phi)?;
    if !n.is_invertible() {
        return Err(SystemsError::Singular);
    }
    Ok(n)
}

fn rational_coords(x: &CentralElement) -> Result<(), SystemsError> {
    match x.coords().iter().position(|c| !c.is_rational()) {
        Some(i) if !x.is_rational() => Err(SystemsError::NotRational(i)),
        _ => Ok(()),
    }
}

/// Good-prime fragment of the boundary-kernel condition: x is a p-unit in every
/// coordinate for every listed p.
pub fn ker_delta_test(x: &CentralElement, primes: &[u64]) -> Result<bool, SystemsError> {
    rational_coords(x)?;
    if !x.is_invertible() {
        return Err(SystemsError::Singular);
    }
    for &p in primes {
        good_prime(x.table().group(), p)?;
        if !all_p_units(x, p)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Sign certificates of every symplectic coordinate at every real embedding.
pub fn hsm_certificates(x: &CentralElement) -> Result<Vec<(usize, SignCertificate)>, SystemsError> {
    let table = x.table();
    let mut out = Vec::new();
    for i in 0..table.len() {
        if table.get(i).frobenius_schur() != -1 {
            continue;
        }
        let c = x.coord(i).minimize();
        if !c.is_totally_real() {
            return Err(SystemsError::NotReal(i));
        }
        let n = c.conductor() as i64;
        for a in (1..=n.max(1)).filter(|&a| crate::arith::gcd_u64(a as u64, n as u64) == 1) {
            out.push((i, c.certified_sign(a)?));
        }
    }
    Ok(out)
}

/// Positivity at every real embedding of every symplectic coordinate.
pub fn hsm_membership(x: &CentralElement) -> Result<bool, SystemsError> {
    Ok(hsm_certificates(x)?.iter().all(|(_, c)| c.sign == Sign::Positive))
}

/// Levels G_n = Δ × Z/p^n for n = 1..=depth, with σ the generator of the cyclic factor.
#[derive(Clone, Debug)]
pub struct ProductTower {
    base: Group,
    p: u64,
    groups: Vec<Group>,
}

impl ProductTower {
    pub fn new(base: &Group, p: u64, depth: usize) -> Result<Self, SystemsError> {
        if !is_prime(p) {
            return Err(SystemsError::NotDirectProduct(format!("{p} is not prime")));
        }
        let groups = (1..=depth)
            .map(|n| {
                let cyclic = FiniteGroup::abelian(&[p.pow(n as u32) as usize])?;
                FiniteGroup::direct_product(base, &cyclic)
            })
            .collect::<Result<Vec<_>, GroupError>>()?;
        Ok(ProductTower { base: base.clone(), p, groups })
    }

    pub fn base(&self) -> &Group {
        &self.base
    }
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn depth(&self) -> usize {
        self.groups.len()
    }
    /// The group at level n (1-based).
    pub fn group(&self, n: usize) -> &Group {
        &self.groups[n - 1]
    }
    fn cyclic_order(&self, n: usize) -> usize {
        self.p.pow(n as u32) as usize
    }

    /// Element (δ, σ^j) of level n.
    pub fn element(&self, n: usize, delta: usize, j: usize) -> usize {
        let m = self.cyclic_order(n);
        delta * m + j % m
    }

    /// c ∈ Q[Δ] placed at σ^0.
    pub fn from_base(&self, n: usize, c: &GAElement) -> GAElement {
        self.from_poly(n, std::slice::from_ref(c))
    }

    /// Σ_j a_j σ^j.
    pub fn from_poly(&self, n: usize, a: &[GAElement]) -> GAElement {
        let g = self.group(n);
        let m = self.cyclic_order(n);
        let mut coeffs = vec![CycloNumber::zero(1); g.order()];
        for (j, aj) in a.iter().enumerate() {
            for (d, c) in aj.coeffs().iter().enumerate() {
                let idx = self.element(n, d, j % m);
                coeffs[idx] = &coeffs[idx] + c;
            }
        }
        GAElement::from_coeffs(g, coeffs)
    }

    /// Coefficients a_j ∈ Q[Δ] of x = Σ_j a_j σ^j.
    pub fn to_poly(&self, n: usize, x: &GAElement) -> Result<Vec<GAElement>, SystemsError> {
        if **x.group() != **self.group(n) {
            return Err(SystemsError::NotDirectProduct(format!("value at level {n} lies in another group")));
        }
        let m = self.cyclic_order(n);
        Ok((0..m)
            .map(|j| {
                GAElement::from_coeffs(&self.base, (0..self.base.order()).map(|d| x.coeff(self.element(n, d, j)).clone()).collect())
            })
            .collect())
    }

    /// (σ − 1)^k as an element of level n.
    pub fn tau_power(&self, n: usize, k: usize) -> GAElement {
        let t = self.from_poly(n, &[GAElement::integer(&self.base, -1), GAElement::one(&self.base)]);
        t.pow(k as u32)
    }
}

/// Rows 0..m of Pascal's triangle.
fn pascal(m: usize) -> Vec<Vec<Rational>> {
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(m);
    for n in 0..m {
        let mut row = vec![rat(1); n + 1];
        for k in 1..n {
            row[k] = &rows[n - 1][k - 1] + &rows[n - 1][k];
        }
        rows.push(row);
    }
    rows
}

/// Coefficients b_i with Σ_j a_j s^j = Σ_i b_i (s − 1)^i.
fn shift_expansion(a: &[GAElement], base: &Group) -> Vec<GAElement> {
    let m = a.len();
    let binom = pascal(m);
    (0..m)
        .map(|i| {
            (i..m).filter(|&j| !a[j].is_zero()).fold(GAElement::zero(base), |acc, j| &acc + &a[j].scale_rational(&binom[j][i]))
        })
        .collect()
}

/// Σ_i b_i (s − 1)^i back to powers of s.
fn shift_contraction(b: &[GAElement], base: &Group) -> Vec<GAElement> {
    let m = b.len();
    let binom = pascal(m);
    (0..m)
        .map(|j| {
            (j..m).filter(|&i| !b[i].is_zero()).fold(GAElement::zero(base), |acc, i| {
                let c = &binom[i][j];
                let c = if (i - j) % 2 == 0 { c.clone() } else { -c };
                &acc + &b[i].scale_rational(&c)
            })
        })
        .collect()
}

/// Quotient of x by (σ − 1)^k: the expansion x = Σ_{i<p^n} b_i (σ − 1)^i must start in
/// degree k, and the quotient Σ_{i≥k} b_i (σ − 1)^{i−k} is returned in powers of σ.
fn divide_by_tau_power(tower: &ProductTower, n: usize, x: &GAElement, k: usize) -> Result<Vec<GAElement>, SystemsError> {
    let m = tower.cyclic_order(n);
    let b = shift_expansion(&tower.to_poly(n, x)?, &tower.base);
    if let Some(achieved) = b.iter().take(k).position(|c| !c.is_zero()) {
        return Err(SystemsError::NotDivisible { level: n, achieved });
    }
    let mut q: Vec<GAElement> = b.iter().skip(k).cloned().collect();
    q.resize(m, GAElement::zero(&tower.base));
    Ok(shift_contraction(&q, &tower.base))
}

/// Product in Q[Δ][σ]/(σ^m − 1) of a polynomial with rational coefficients and one with
/// coefficients in Q[Δ].
fn scalar_poly_mul(a: &[Rational], b: &[GAElement], base: &Group) -> Vec<GAElement> {
    let m = a.len();
    let mut out = vec![GAElement::zero(base); m];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[(i + j) % m] = &out[(i + j) % m] + &y.scale_rational(x);
            }
        }
    }
    out
}

/// u⁻¹ = w + c·N_σ with w = Σ_{j<b} σ^{aj}, b = a⁻¹ mod m, ab = 1 + t·m and c = −t/a.
fn unit_ratio_inverse(a: u64, m: usize) -> Vec<Rational> {
    let b = (1..=m as u64).find(|b| (a * b) % m as u64 == 1 % m as u64).expect("a prime to m");
    let t = (a * b - 1) / m as u64;
    let c = -Rational::new((t as i64).into(), (a as i64).into());
    let mut w = vec![c; m];
    for j in 0..b as usize {
        w[(a as usize * j) % m] += rat(1);
    }
    w
}

#[derive(Clone, Debug, PartialEq)]
pub struct DerivativeReport {
    /// Augmentation (σ ↦ 1) of the quotient at each level, in Q[Δ].
    pub values: Vec<GAElement>,
    /// Whether consecutive levels agree.
    pub stabilized: bool,
}

/// Derivative of order k at σ: per level, the augmentation of the quotient of x_n by
/// (σ − 1)^k.
pub fn finite_derivative(tower: &ProductTower, xs: &[GAElement], k: usize) -> Result<DerivativeReport, SystemsError> {
    if xs.len() > tower.depth() {
        return Err(SystemsError::NotDirectProduct("more values than levels".into()));
    }
    let mut values = Vec::new();
    for (i, x) in xs.iter().enumerate() {
        let q = divide_by_tau_power(tower, i + 1, x, k)?;
        values.push(q.iter().fold(GAElement::zero(&tower.base), |acc, c| &acc + c));
    }
    let stabilized = values.windows(2).all(|w| w[0] == w[1]);
    Ok(DerivativeReport { values, stabilized })
}

/// Outcome of dividing by (σ^a − 1)^k instead of (σ − 1)^k at one level.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaChange {
    /// y′ = u^{−k}·y, as coefficients of powers of σ.
    pub quotient: Vec<GAElement>,
    /// ε(y′).
    pub derivative: GAElement,
    /// (σ^a − 1)^k·y′ = x exactly.
    pub reproduces: bool,
    /// ε(y) = a^k·ε(y′) exactly.
    pub scales_by_unit: bool,
}

/// Division by (σ^a − 1)^k through y′ = u^{−k}·y with u = (σ^a − 1)/(σ − 1), using the exact
/// inverse of u in Q[Z/p^n].
pub fn gamma_change(tower: &ProductTower, n: usize, x: &GAElement, k: usize, a: u64) -> Result<GammaChange, SystemsError> {
    if a.is_multiple_of(tower.p) {
        return Err(SystemsError::BadGenerator(a));
    }
    let m = tower.cyclic_order(n);
    let base = &tower.base;
    let y = divide_by_tau_power(tower, n, x, k)?;
    let u_inv = unit_ratio_inverse(a, m);
    let mut y2 = y.clone();
    for _ in 0..k {
        y2 = scalar_poly_mul(&u_inv, &y2, base);
    }
    let mut s_minus_1 = vec![rat(0); m];
    s_minus_1[0] = rat(-1);
    s_minus_1[a as usize % m] += rat(1);
    let mut back = y2.clone();
    for _ in 0..k {
        back = scalar_poly_mul(&s_minus_1, &back, base);
    }
    let aug = |v: &[GAElement]| v.iter().fold(GAElement::zero(base), |acc, c| &acc + c);
    let derivative = aug(&y2);
    let reproduces = tower.from_poly(n, &back) == *x;
    let scales_by_unit = aug(&y) == derivative.scale_rational(&rat(a as i64).pow(k as i32));
    Ok(GammaChange { quotient: y2, derivative, reproduces, scales_by_unit })
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::catalog;
    use crate::lfun::parse_places;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn distribution_on_3_9() {
        let tower = TowerDatum::cyclotomic_minimal(&[3, 9], &[]).unwrap();
        let sys = stickelberger_system(&tower, &[]).unwrap();
        assert_eq!(verify_distribution(&sys).unwrap().len(), 1);
        let mut bad = sys.clone();
        let c = bad.values[1].coords().to_vec();
        let mut c2 = c.clone();
        c2[0] = &c2[0] + &CycloNumber::from_int(1);
        bad.values[1] = CentralElement::new(bad.values[1].table(), c2);
        assert_eq!(verify_distribution(&bad).unwrap_err(), SystemsError::RelationViolation { lower: 0, upper: 1 });
    }

    #[test]
    fn distribution_with_growing_s() {
        let s3 = parse_places("inf,3").unwrap();
        let s15 = parse_places("inf,3,5").unwrap();
        let tower = TowerDatum::cyclotomic(&[3, 15], &[s3, s15]).unwrap();
        for t in [vec![], parse_places("7").unwrap()] {
            let sys = stickelberger_system(&tower, &t).unwrap();
            assert!(verify_distribution(&sys).is_ok());
        }
        // constant 1 with no added places
        let tower = TowerDatum::cyclotomic_minimal(&[5, 25], &[]).unwrap();
        let values = tower.levels().iter().map(|l| CentralElement::one(&CharacterTable::of(l.setup.group()).unwrap())).collect();
        assert!(verify_distribution(&PreEulerSystem0 { tower, values }).is_ok());
    }

    #[test]
    fn primitive_basis_calculus() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = catalog("s3").unwrap();
        let w = Wedderburn::of(&g).unwrap();
        let c = TwoTermComplex::new(&w, GAMatrix::identity(&g, 2), vec![5]).unwrap();
        let id = GAMatrix::identity(&g, 2);
        let b = upsilon_basis(&c, &id, &id).unwrap();
        assert!(b.scaling.is_one());
        let u = GAMatrix::random_unit(&g, 2, &mut rng);
        let bu = upsilon_basis(&c, &u, &id).unwrap();
        assert_eq!(bu.scaling, reduced_norm(&w, &u).unwrap());
        assert!(upsilon_basis(&c, &u, &u).unwrap().scaling.is_one());
        for p in [5, 7] {
            assert!(primitive_equiv(&b, &bu, p).unwrap());
            assert!(!primitive_equiv(&b, &b.scaled(&CentralElement::constant(w.table(), CycloNumber::from_int(p as i64))), p).unwrap());
        }
        assert_eq!(primitive_equiv(&b, &b, 3), Err(SystemsError::BadPrime(3)));
    }

    #[test]
    fn acyclic_values() {
        let g = catalog("c2").unwrap();
        let w = Wedderburn::of(&g).unwrap();
        let two = GAMatrix::diagonal(&g, vec![GAElement::integer(&g, 2)]);
        let v = acyclic_value(&TwoTermComplex::new(&w, two, vec![]).unwrap()).unwrap();
        assert_eq!(v.coords(), &[CycloNumber::from_int(2), CycloNumber::from_int(2)]);
        assert!(ker_delta_test(&v, &[3]).unwrap());
        assert!(ker_delta_test(&v, &[2]).is_err());
        let g3 = catalog("c3").unwrap();
        let w3 = Wedderburn::of(&g3).unwrap();
        let v3 = CentralElement::constant(w3.table(), CycloNumber::from_int(2));
        assert!(!ker_delta_test(&v3, &[2]).unwrap());
        let zero = GAMatrix::diagonal(&g, vec![GAElement::zero(&g)]);
        assert_eq!(acyclic_value(&TwoTermComplex::new(&w, zero, vec![]).unwrap()), Err(SystemsError::Singular));
    }

    #[test]
    fn zeta_elements_compose() {
        let g = catalog("s3").unwrap();
        let t = CharacterTable::of(&g).unwrap();
        let c1 = CentralElement::new(&t, vec![CycloNumber::from_int(2), CycloNumber::from_int(3), CycloNumber::from_int(-1)]);
        let c2 = CentralElement::new(&t, vec![CycloNumber::from_int(5), CycloNumber::from_int(1), CycloNumber::from_int(7)]);
        let x = CentralElement::new(&t, vec![CycloNumber::from_int(1), CycloNumber::from_int(4), CycloNumber::from_int(6)]);
        let l1 = LineMorphism { source: "a".into(), target: "b".into(), scaling: c1 };
        let l2 = LineMorphism { source: "b".into(), target: "triv".into(), scaling: c2 };
        let comp = l2.after(&l1).unwrap();
        let z = zeta_element(&comp, &x).unwrap();
        assert_eq!(comp.apply(&z).unwrap().scaling, x);
        let two_step = l1.inverse().unwrap().apply(&zeta_element(&l2, &x).unwrap()).unwrap();
        assert_eq!(z, two_step);
    }

    #[test]
    fn hsm_on_q8() {
        let g = catalog("q8").unwrap();
        let t = CharacterTable::of(&g).unwrap();
        let with_last = |c: i64| {
            let mut v = vec![CycloNumber::from_int(1); t.len()];
            let k = (0..t.len()).find(|&i| t.get(i).degree() == 2).unwrap();
            v[k] = CycloNumber::from_int(c);
            CentralElement::new(&t, v)
        };
        assert!(!hsm_membership(&with_last(-1)).unwrap());
        assert!(hsm_membership(&with_last(3)).unwrap());
        let s3 = CharacterTable::of(&catalog("s3").unwrap()).unwrap();
        assert!(hsm_membership(&CentralElement::constant(&s3, CycloNumber::from_int(-1))).unwrap());
    }

    #[test]
    fn derivative_families() {
        let base = catalog("c2").unwrap();
        let tower = ProductTower::new(&base, 3, 2).unwrap();
        let c = GAElement::from_integers(&base, &[2, -5]);
        for k in 0..=2 {
            let xs: Vec<GAElement> = (1..=2).map(|n| &tower.tau_power(n, k) * &tower.from_base(n, &c)).collect();
            let r = finite_derivative(&tower, &xs, k).unwrap();
            assert!(r.values.iter().all(|v| *v == c));
            assert!(r.stabilized);
            for n in 1..=2 {
                for a in [2, 4, 5] {
                    let g = gamma_change(&tower, n, &xs[n - 1], k, a).unwrap();
                    assert!(g.reproduces && g.scales_by_unit, "n = {n}, k = {k}, a = {a}");
                }
            }
        }
        let x = tower.from_base(1, &c);
        assert_eq!(finite_derivative(&tower, std::slice::from_ref(&x), 1).unwrap_err(), SystemsError::NotDivisible { level: 1, achieved: 0 });
        assert_eq!(gamma_change(&tower, 1, &x, 0, 3).unwrap_err(), SystemsError::BadGenerator(3));
    }

    /// u = (σ^a − 1)/(σ − 1) = 1 + σ + … + σ^{a−1} in Q[Z/m].
    fn unit_ratio(a: u64, m: usize) -> Vec<Rational> {
        let mut u = vec![rat(0); m];
        for j in 0..a as usize {
            u[j % m] += rat(1);
        }
        u
    }

    #[test]
    fn unit_ratio_inverse_is_inverse() {
        let base = catalog("c1").unwrap();
        for (a, m) in [(2u64, 9usize), (4, 25), (7, 27), (3, 5)] {
            let inv: Vec<GAElement> = unit_ratio_inverse(a, m).iter().map(|c| GAElement::one(&base).scale_rational(c)).collect();
            let prod = scalar_poly_mul(&unit_ratio(a, m), &inv, &base);
            let mut one = vec![GAElement::zero(&base); m];
            one[0] = GAElement::one(&base);
            assert_eq!(prod, one);
        }
    }

    #[test]
    fn derivative_of_vanishing_element() {
        // (σ − 1)(1 + σ) = σ² − 1 = 0 in Q[C_2]
        let tower = ProductTower::new(&catalog("c1").unwrap(), 2, 1).unwrap();
        let one = GAElement::one(tower.base());
        let x = &tower.tau_power(1, 1) * &tower.from_poly(1, &[one.clone(), one.clone()]);
        assert!(x.is_zero());
        assert!(finite_derivative(&tower, &[x], 1).unwrap().values[0].is_zero());
    }
}
