//! Exact special values at s = 0: Dirichlet L-values through generalized Bernoulli
//! numbers, Euler factors for S-truncation and T-modification, Stickelberger elements,
//! orders of vanishing and the splitting idempotents attached to a pair of place sets.
//!
//! For abelian extensions of Q the Galois group of Q(ζ_f) is (Z/f)^×, with σ_a acting as
//! ζ ↦ ζ^a, and a character χ of the group is read as a Dirichlet character mod f.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Deserialize;
use thiserror::Error;

use crate::algebra::GAElement;
use crate::arith::{gcd_u64, is_prime, prime_factors, ratio, CycloNumber, Rational};
use crate::chars::{CentralElement, CharError, Character, CharacterTable};
use crate::groups::{all_subgroups, FiniteGroup, Group, GroupError, GroupSpec, Subgroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LfunError {
    #[error("place sets S and T overlap at {0}")]
    SetOverlap(String),
    #[error("group is not abelian")]
    NotAbelian,
    #[error("Σ₁ must be a proper subset of S")]
    BadSubset,
    #[error("invalid place set: {0}")]
    InvalidPlaces(String),
    #[error("unknown place {0}")]
    UnknownPlace(String),
    #[error("equivalence violated for character {chi}: {detail}")]
    EquivalenceViolation { chi: usize, detail: String },
    #[error("invalid setup: {0}")]
    InvalidSetup(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Char(#[from] CharError),
}

/// A Dirichlet character mod f, stored by its value at every residue.
#[derive(Clone, Debug, PartialEq)]
pub struct DirichletCharacter {
    modulus: u64,
    values: Vec<CycloNumber>,
}

impl DirichletCharacter {
    pub fn new(modulus: u64, values: Vec<CycloNumber>) -> Self {
        assert_eq!(values.len() as u64, modulus);
        DirichletCharacter { modulus, values }
    }

    pub fn trivial(modulus: u64) -> Self {
        let values = (0..modulus)
            .map(|a| if gcd_u64(a, modulus) == 1 { CycloNumber::one(1) } else { CycloNumber::zero(1) })
            .collect();
        DirichletCharacter { modulus, values }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn at(&self, a: i64) -> &CycloNumber {
        &self.values[a.rem_euclid(self.modulus as i64) as usize]
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|v| v.is_zero() || v.is_one())
    }

    pub fn is_even(&self) -> bool {
        self.at(-1).is_one()
    }

    pub fn conj(&self) -> Self {
        DirichletCharacter { modulus: self.modulus, values: self.values.iter().map(CycloNumber::conj).collect() }
    }

    /// Smallest d | f such that χ is trivial on units congruent to 1 mod d.
    pub fn conductor(&self) -> u64 {
        let f = self.modulus;
        (1..=f)
            .filter(|d| f.is_multiple_of(*d))
            .find(|&d| (0..f).filter(|&a| gcd_u64(a, f) == 1 && a % d == 1 % d).all(|a| self.values[a as usize].is_one()))
            .unwrap_or(f)
    }

    /// The primitive character inducing χ.
    pub fn primitive(&self) -> Self {
        let f = self.modulus;
        let d = self.conductor();
        let values = (0..d)
            .map(|b| {
                if gcd_u64(b, d) != 1 {
                    return CycloNumber::zero(1);
                }
                let a = (0..).map(|k| b + k * d).find(|&a| gcd_u64(a, f) == 1).unwrap();
                self.values[(a % f) as usize].clone()
            })
            .collect();
        DirichletCharacter { modulus: d, values }
    }
}

/// B_{1,χ} = Σ_{a=1}^{f} χ(a)(a/f − 1/2). For nontrivial χ the constant term drops out;
/// at modulus 1 this gives B_1 = 1/2.
pub fn bernoulli_b1(chi: &DirichletCharacter) -> CycloNumber {
    let f = chi.modulus as i64;
    let half = ratio(1, 2);
    (1..=f).fold(CycloNumber::zero(1), |acc, a| {
        let v = chi.at(a);
        if v.is_zero() {
            acc
        } else {
            &acc + &v.scale(&(ratio(a, f) - &half))
        }
    })
}

/// A place label: "inf" for the archimedean place or a rational prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PlaceLabel {
    Infinite,
    Prime(u64),
}

impl PlaceLabel {
    pub fn parse(s: &str) -> Result<PlaceLabel, LfunError> {
        let s = s.trim();
        if s == "inf" {
            return Ok(PlaceLabel::Infinite);
        }
        match s.parse::<u64>() {
            Ok(p) if is_prime(p) => Ok(PlaceLabel::Prime(p)),
            _ => Err(LfunError::InvalidPlaces(format!("{s:?} is neither \"inf\" nor a prime"))),
        }
    }

    pub fn prime(&self) -> Option<u64> {
        match self {
            PlaceLabel::Prime(p) => Some(*p),
            PlaceLabel::Infinite => None,
        }
    }
}

impl std::fmt::Display for PlaceLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PlaceLabel::Infinite => write!(f, "inf"),
            PlaceLabel::Prime(p) => write!(f, "{p}"),
        }
    }
}

/// Parses a comma-separated list of place labels; the empty string is the empty set.
pub fn parse_places(s: &str) -> Result<Vec<PlaceLabel>, LfunError> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let l = PlaceLabel::parse(part)?;
        if out.contains(&l) {
            return Err(LfunError::InvalidPlaces(format!("duplicate place {l}")));
        }
        out.push(l);
    }
    Ok(out)
}

fn check_disjoint(s: &[PlaceLabel], t: &[PlaceLabel]) -> Result<(), LfunError> {
    match s.iter().find(|v| t.contains(v)) {
        Some(v) => Err(LfunError::SetOverlap(v.to_string())),
        None => Ok(()),
    }
}

/// L_{S,T}(χ, 0) = ∏_{q∈T}(1 − χ(q)q) · ∏_{finite p∈S}(1 − χ(p)) · L(χ, 0), with χ replaced
/// by its primitive character in the Euler factors and L(χ, 0) = −B_{1,χ}.
pub fn dirichlet_l_at_0(chi: &DirichletCharacter, s: &[PlaceLabel], t: &[PlaceLabel]) -> Result<CycloNumber, LfunError> {
    check_disjoint(s, t)?;
    if !s.contains(&PlaceLabel::Infinite) {
        return Err(LfunError::InvalidPlaces("S must contain inf".into()));
    }
    for p in prime_factors(chi.modulus) {
        if !s.contains(&PlaceLabel::Prime(p)) {
            return Err(LfunError::InvalidPlaces(format!("S must contain the ramified prime {p}")));
        }
    }
    let prim = chi.primitive();
    let mut value = -bernoulli_b1(&prim);
    for p in s.iter().filter_map(PlaceLabel::prime) {
        value = &value * &(&CycloNumber::one(1) - prim.at(p as i64));
    }
    for q in t.iter().filter_map(PlaceLabel::prime) {
        value = &value * &(&CycloNumber::one(1) - &prim.at(q as i64).scale(&Rational::from_integer(q.into())));
    }
    Ok(value)
}

/// A place of the base field with its decomposition data in G.
#[derive(Clone, Debug)]
pub struct Place {
    pub label: String,
    pub archimedean: bool,
    pub decomposition: Subgroup,
    pub frobenius: Option<usize>,
    pub norm: Option<u64>,
}

/// Galois group with labelled places. For cyclotomic setups the residue dictionary
/// σ_a ↔ a mod f is recorded.
#[derive(Clone, Debug)]
pub struct GaloisSetup {
    group: Group,
    places: Vec<Place>,
    conductor: Option<u64>,
    residues: Vec<u64>,
}

/// The group (Z/f)^×, elements ordered by residue, cached per f.
pub fn unit_group(f: u64) -> Result<(Group, Vec<u64>), LfunError> {
    static CACHE: OnceLock<Mutex<HashMap<u64, (Group, Vec<u64>)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(g) = cache.lock().unwrap().get(&f) {
        return Ok(g.clone());
    }
    if f == 0 {
        return Err(LfunError::InvalidSetup("conductor must be positive".into()));
    }
    let units: Vec<u64> = (0..f).filter(|&a| gcd_u64(a, f) == 1).collect();
    let index: HashMap<u64, usize> = units.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let table = units.iter().map(|&a| units.iter().map(|&b| index[&(a * b % f)]).collect()).collect();
    let labels = units.iter().map(|a| if f == 1 { "1".to_string() } else { a.to_string() }).collect();
    let g = FiniteGroup::from_table(table, Some(labels))?.with_name(&format!("(Z/{f})^x"));
    cache.lock().unwrap().insert(f, (g.clone(), units.clone()));
    Ok((g, units))
}

impl GaloisSetup {
    pub fn new(group: &Group, places: Vec<Place>) -> Result<Self, LfunError> {
        let mut seen = BTreeSet::new();
        for p in &places {
            if !seen.insert(p.label.clone()) {
                return Err(LfunError::InvalidSetup(format!("duplicate label {}", p.label)));
            }
            if **p.decomposition.parent() != **group {
                return Err(LfunError::InvalidSetup(format!("decomposition group of {} lies in another group", p.label)));
            }
            if !p.archimedean {
                let fr = p.frobenius.ok_or_else(|| LfunError::InvalidSetup(format!("place {} needs a Frobenius", p.label)))?;
                if fr >= group.order() || !p.decomposition.contains(fr) {
                    return Err(LfunError::InvalidSetup(format!("Frobenius of {} must lie in its decomposition group", p.label)));
                }
                if p.norm.is_none_or(|n| n < 2) {
                    return Err(LfunError::InvalidSetup(format!("place {} needs a residue norm", p.label)));
                }
            } else if p.decomposition.order() > 2 {
                return Err(LfunError::InvalidSetup(format!("archimedean place {} has decomposition group of order > 2", p.label)));
            }
        }
        Ok(GaloisSetup { group: group.clone(), places, conductor: None, residues: Vec::new() })
    }

    /// Q(ζ_f)/Q with the places in `labels`. The archimedean place has decomposition group
    /// ⟨σ_{-1}⟩; a prime p with f = p^k·m has decomposition group {a : a mod m ∈ ⟨p⟩} and
    /// Frobenius a ≡ p mod m, a ≡ 1 mod p^k.
    pub fn cyclotomic(f: u64, labels: &[PlaceLabel]) -> Result<Self, LfunError> {
        let (g, units) = unit_group(f)?;
        let idx = |a: u64| units.iter().position(|&u| u == a % f).expect("unit");
        let mut places = Vec::new();
        for l in labels {
            let place = match l {
                PlaceLabel::Infinite => Place {
                    label: l.to_string(),
                    archimedean: true,
                    decomposition: Subgroup::generated(&g, &[idx(f - 1 % f)]),
                    frobenius: None,
                    norm: None,
                },
                PlaceLabel::Prime(p) => {
                    let mut pk = 1;
                    while f.is_multiple_of(pk * p) {
                        pk *= p;
                    }
                    let m = f / pk;
                    let frob = (0..f).find(|&a| gcd_u64(a, f) == 1 && a % m == p % m && a % pk == 1 % pk).unwrap();
                    let elements: Vec<usize> = units
                        .iter()
                        .enumerate()
                        .filter(|(_, &a)| (0..units.len() as u64).any(|e| mod_pow(*p, e, m) == a % m))
                        .map(|(i, _)| i)
                        .collect();
                    Place {
                        label: l.to_string(),
                        archimedean: false,
                        decomposition: Subgroup::new(&g, elements)?,
                        frobenius: Some(idx(frob)),
                        norm: Some(*p),
                    }
                }
            };
            places.push(place);
        }
        let mut s = GaloisSetup::new(&g, places)?;
        s.conductor = Some(f);
        s.residues = units;
        Ok(s)
    }

    /// Parses `{"group": ..., "places": [{"label", "arch", "decomp", "frob", "norm"}]}`.
    pub fn from_json(v: &serde_json::Value) -> Result<Self, LfunError> {
        #[derive(Deserialize)]
        struct PlaceJson {
            label: String,
            arch: bool,
            decomp: Vec<usize>,
            #[serde(default)]
            frob: Option<usize>,
            #[serde(default)]
            norm: Option<u64>,
        }
        #[derive(Deserialize)]
        struct SetupJson {
            group: GroupSpec,
            places: Vec<PlaceJson>,
        }
        let raw: SetupJson = serde_json::from_value(v.clone()).map_err(|e| LfunError::InvalidSetup(e.to_string()))?;
        let g = raw.group.build()?;
        let places = raw
            .places
            .into_iter()
            .map(|p| {
                if p.decomp.iter().any(|&x| x >= g.order()) {
                    return Err(LfunError::InvalidSetup(format!("decomposition index out of range at {}", p.label)));
                }
                Ok(Place {
                    label: p.label,
                    archimedean: p.arch,
                    decomposition: Subgroup::new(&g, p.decomp)?,
                    frobenius: p.frob,
                    norm: p.norm,
                })
            })
            .collect::<Result<_, LfunError>>()?;
        GaloisSetup::new(&g, places)
    }

    pub fn group(&self) -> &Group {
        &self.group
    }
    pub fn places(&self) -> &[Place] {
        &self.places
    }
    pub fn conductor(&self) -> Option<u64> {
        self.conductor
    }

    pub fn place(&self, label: &str) -> Result<&Place, LfunError> {
        self.places.iter().find(|p| p.label == label).ok_or_else(|| LfunError::UnknownPlace(label.to_string()))
    }

    /// Group element σ_a of a cyclotomic setup.
    pub fn sigma(&self, a: i64) -> Option<usize> {
        let f = self.conductor? as i64;
        let r = a.rem_euclid(f) as u64;
        self.residues.iter().position(|&u| u == r)
    }

    /// Residue a with σ_a = g.
    pub fn residue(&self, g: usize) -> Option<u64> {
        self.residues.get(g).copied()
    }

    /// χ of the group read as a Dirichlet character mod f.
    pub fn dirichlet(&self, chi: &Character) -> Result<DirichletCharacter, LfunError> {
        let f = self.conductor.ok_or(LfunError::NotAbelian)?;
        let values = (0..f)
            .map(|a| match self.sigma(a as i64) {
                Some(g) if gcd_u64(a, f) == 1 => chi.at(g).clone(),
                _ => CycloNumber::zero(1),
            })
            .collect();
        Ok(DirichletCharacter::new(f, values))
    }
}

fn mod_pow(b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    let mut b = b % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Stickelberger element with the place sets it was built from.
#[derive(Clone, Debug, PartialEq)]
pub struct StickelbergerElement {
    pub value: CentralElement,
    pub s: Vec<String>,
    pub t: Vec<String>,
    pub rational: bool,
}

impl StickelbergerElement {
    /// Coefficients in the group-element basis.
    pub fn group_coefficients(&self) -> Vec<CycloNumber> {
        self.value.to_group_algebra().coeffs().to_vec()
    }

    pub fn is_integral(&self) -> bool {
        self.group_coefficients()
            .iter()
            .all(|c| c.to_rational().is_some_and(|q| q.is_integer()))
    }
}

/// θ_{S,T} = Σ_χ L_{S,T}(χ̌, 0)·e_χ for Q(ζ_f)/Q.
pub fn stickelberger(f: u64, s: &[PlaceLabel], t: &[PlaceLabel]) -> Result<StickelbergerElement, LfunError> {
    let setup = GaloisSetup::cyclotomic(f, s)?;
    let table = CharacterTable::of(setup.group())?;
    let coords = (0..table.len())
        .map(|i| dirichlet_l_at_0(&setup.dirichlet(table.get(table.dual_index(i)))?, s, t))
        .collect::<Result<Vec<_>, _>>()?;
    let value = CentralElement::new(&table, coords);
    Ok(StickelbergerElement {
        rational: value.is_rational(),
        value,
        s: s.iter().map(ToString::to_string).collect(),
        t: t.iter().map(ToString::to_string).collect(),
    })
}

/// Σ_χ values[χ̌]·e_χ from supplied L-values; the rational flag reports whether the
/// result lies in the rational group algebra.
pub fn stickelberger_assemble(table: &Arc<CharacterTable>, values: &[CycloNumber]) -> StickelbergerElement {
    let coords = (0..table.len()).map(|i| values[table.dual_index(i)].clone()).collect();
    let value = CentralElement::new(table, coords);
    StickelbergerElement { rational: value.is_rational(), value, s: Vec::new(), t: Vec::new() }
}

fn places_in<'a>(setup: &'a GaloisSetup, labels: &[String]) -> Result<Vec<&'a Place>, LfunError> {
    labels.iter().map(|l| setup.place(l)).collect()
}

/// ord_{z=0} L_S(χ, z) = Σ_{v∈S} dim V_χ^{G_v} − dim V_χ^G.
pub fn order_of_vanishing(chi: &Character, setup: &GaloisSetup, s: &[String]) -> Result<usize, LfunError> {
    if s.is_empty() {
        return Err(LfunError::InvalidPlaces("S must be non-empty".into()));
    }
    if setup.places.iter().any(|p| p.archimedean && !s.contains(&p.label)) {
        return Err(LfunError::InvalidPlaces("S must contain every archimedean place".into()));
    }
    let mut total = 0;
    for p in places_in(setup, s)? {
        total += chi.fixed_space_dimension(&p.decomposition)?;
    }
    let global = chi.fixed_space_dimension(&Subgroup::whole(setup.group()))?;
    Ok(total - global)
}

fn check_sigma1(s: &[String], sigma1: &[String]) -> Result<Vec<String>, LfunError> {
    if sigma1.iter().any(|v| !s.contains(v)) || sigma1.len() >= s.len() {
        return Err(LfunError::BadSubset);
    }
    Ok(s.iter().filter(|v| !sigma1.contains(v)).cloned().collect())
}

/// dim e_χ(C ⊗ X) for X the kernel of the augmentation on ⊕_{v} Q[G/G_v], computed as the
/// rank of e_χ acting on an explicit basis of the kernel.
fn idempotent_rank_on_x(table: &CharacterTable, chi: usize, subgroups: &[&Subgroup]) -> usize {
    let g = table.group();
    // coset action on the direct sum
    let mut offsets = Vec::new();
    let mut cosets: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut n = 0;
    for (k, h) in subgroups.iter().enumerate() {
        offsets.push(n);
        let reps = h.left_transversal();
        n += reps.len();
        cosets.push((k, reps));
    }
    let act = |x: usize, idx: usize| -> usize {
        let k = offsets.iter().rposition(|&o| o <= idx).unwrap();
        let reps = &cosets[k].1;
        let t = reps[idx - offsets[k]];
        let xt = g.mul(x, t);
        let h = subgroups[k];
        offsets[k] + reps.iter().position(|&r| h.contains(g.mul(g.inv(r), xt))).unwrap()
    };
    let e = table.central_idempotent(chi);
    let rows: Vec<Vec<CycloNumber>> = (1..n)
        .map(|j| {
            // e_χ·(b_j − b_0)
            let mut v = vec![CycloNumber::zero(1); n];
            for x in g.elements() {
                let c = e.coeff(x);
                if c.is_zero() {
                    continue;
                }
                let a = act(x, j);
                v[a] = &v[a] + c;
                let b = act(x, 0);
                v[b] = &v[b] - c;
            }
            v
        })
        .collect();
    crate::linalg::rank(&rows)
}

/// e_{S,Σ₁}: the sum of e_χ over χ with e_χ(C ⊗ X_{S∖Σ₁}) = 0, computed from that
/// definition.
pub fn splitting_idempotent(setup: &GaloisSetup, s: &[String], sigma1: &[String]) -> Result<CentralElement, LfunError> {
    let rest = check_sigma1(s, sigma1)?;
    let table = CharacterTable::of(setup.group())?;
    let subgroups: Vec<&Subgroup> = places_in(setup, &rest)?.into_iter().map(|p| &p.decomposition).collect();
    let coords = (0..table.len())
        .map(|i| if idempotent_rank_on_x(&table, i, &subgroups) == 0 { CycloNumber::one(1) } else { CycloNumber::zero(1) })
        .collect();
    Ok(CentralElement::new(&table, coords))
}

/// Support of the splitting idempotent read off from fixed spaces: nontrivial χ with
/// V_χ^{G_v} = 0 for every v ∈ S∖Σ₁, and the trivial character iff |S∖Σ₁| = 1.
pub fn support_by_fixed_spaces(setup: &GaloisSetup, s: &[String], sigma1: &[String], chi: usize) -> Result<bool, LfunError> {
    let rest = check_sigma1(s, sigma1)?;
    let table = CharacterTable::of(setup.group())?;
    let c = table.get(chi);
    if c.is_trivial() {
        return Ok(rest.len() == 1);
    }
    for p in places_in(setup, &rest)? {
        if c.fixed_space_dimension(&p.decomposition)? != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub chi: usize,
    pub idempotent_support: bool,
    pub vanishing_order_matches: bool,
    pub fixed_space_support: bool,
}

impl EquivalenceReport {
    pub fn agrees(&self) -> bool {
        self.idempotent_support == self.vanishing_order_matches && self.vanishing_order_matches == self.fixed_space_support
    }
}

/// Computes the support condition three ways: from the idempotent, from the order of
/// vanishing compared with Σ_{v∈Σ₁} dim V_χ^{G_v}, and from fixed spaces on S∖Σ₁.
pub fn idempotent_equivalence_check(
    setup: &GaloisSetup,
    s: &[String],
    sigma1: &[String],
    chi: usize,
) -> Result<EquivalenceReport, LfunError> {
    let table = CharacterTable::of(setup.group())?;
    let e = splitting_idempotent(setup, s, sigma1)?;
    let c = table.get(chi);
    let mut sigma_dims = 0;
    for p in places_in(setup, sigma1)? {
        sigma_dims += c.fixed_space_dimension(&p.decomposition)?;
    }
    let report = EquivalenceReport {
        chi,
        idempotent_support: !e.coord(chi).is_zero(),
        vanishing_order_matches: order_of_vanishing(c, setup, s)? == sigma_dims,
        fixed_space_support: support_by_fixed_spaces(setup, s, sigma1, chi)?,
    };
    if !report.agrees() {
        return Err(LfunError::EquivalenceViolation { chi, detail: format!("{report:?}") });
    }
    Ok(report)
}

/// Random cyclotomic setup: a conductor from `conductors`, S = {∞} ∪ ramified primes ∪
/// up to two unramified primes.
pub fn random_abelian_setup<R: Rng>(conductors: &[u64], rng: &mut R) -> Result<(GaloisSetup, Vec<PlaceLabel>), LfunError> {
    let f = *conductors.choose(rng).expect("non-empty conductor list");
    let mut s = vec![PlaceLabel::Infinite];
    s.extend(prime_factors(f).into_iter().map(PlaceLabel::Prime));
    let extra: Vec<u64> = [2u64, 3, 5, 7, 11, 13].into_iter().filter(|q| !f.is_multiple_of(*q)).collect();
    let k = rng.gen_range(0..=2.min(extra.len()));
    for q in extra.choose_multiple(rng, k) {
        s.push(PlaceLabel::Prime(*q));
    }
    Ok((GaloisSetup::cyclotomic(f, &s)?, s))
}

/// Random abstract setup over `group`: one archimedean place with decomposition group of
/// order ≤ 2 and up to three finite places with random subgroups (Frobenius any element
/// of the subgroup).
pub fn random_abstract_setup<R: Rng>(group: &Group, rng: &mut R) -> Result<GaloisSetup, LfunError> {
    let subs = all_subgroups(group);
    let small: Vec<&Subgroup> = subs.iter().filter(|h| h.order() <= 2).collect();
    let mut places = vec![Place {
        label: "inf".into(),
        archimedean: true,
        decomposition: (*small.choose(rng).unwrap()).clone(),
        frobenius: None,
        norm: None,
    }];
    let finite = rng.gen_range(0..=3);
    let primes = [2u64, 3, 5, 7, 11];
    for &q in primes.choose_multiple(rng, finite) {
        let h = subs.choose(rng).unwrap().clone();
        let fr = *h.elements().choose(rng).unwrap();
        places.push(Place { label: q.to_string(), archimedean: false, decomposition: h, frobenius: Some(fr), norm: Some(q) });
    }
    GaloisSetup::new(group, places)
}

/// Group-algebra element Σ_a c_a σ_a of a cyclotomic setup from residue-indexed values.
pub fn from_residues(setup: &GaloisSetup, f: impl Fn(u64) -> Rational) -> GAElement {
    let g = setup.group();
    GAElement::from_coeffs(g, g.elements().map(|x| CycloNumber::rational(f(setup.residue(x).unwrap()))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn odd_char_mod(f: u64) -> DirichletCharacter {
        let setup = GaloisSetup::cyclotomic(f, &[]).unwrap();
        let table = CharacterTable::of(setup.group()).unwrap();
        let i = (0..table.len()).find(|&i| !setup.dirichlet(table.get(i)).unwrap().is_even()).unwrap();
        setup.dirichlet(table.get(i)).unwrap()
    }

    fn places(s: &str) -> Vec<PlaceLabel> {
        parse_places(s).unwrap()
    }

    #[test]
    fn bernoulli_examples() {
        assert_eq!(bernoulli_b1(&odd_char_mod(3)), CycloNumber::rational(ratio(-1, 3)));
        assert_eq!(bernoulli_b1(&odd_char_mod(4)), CycloNumber::rational(ratio(-1, 2)));
        assert_eq!(bernoulli_b1(&DirichletCharacter::trivial(1)), CycloNumber::rational(ratio(1, 2)));
        let setup = GaloisSetup::cyclotomic(5, &[]).unwrap();
        let table = CharacterTable::of(setup.group()).unwrap();
        for i in 0..table.len() {
            let chi = setup.dirichlet(table.get(i)).unwrap();
            if chi.is_even() && !chi.is_trivial() {
                assert!(bernoulli_b1(&chi).is_zero());
            }
        }
    }

    #[test]
    fn conductor_and_primitive() {
        // the odd character mod 3 induced to mod 12
        let setup = GaloisSetup::cyclotomic(12, &[]).unwrap();
        let table = CharacterTable::of(setup.group()).unwrap();
        let conds: BTreeSet<u64> = (0..table.len()).map(|i| setup.dirichlet(table.get(i)).unwrap().conductor()).collect();
        assert_eq!(conds, [1, 3, 4, 12].into_iter().collect());
        assert_eq!(odd_char_mod(3).primitive(), odd_char_mod(3));
    }

    #[test]
    fn l_value_examples() {
        let chi = odd_char_mod(3);
        assert_eq!(dirichlet_l_at_0(&chi, &places("inf,3"), &[]).unwrap(), CycloNumber::rational(ratio(1, 3)));
        assert_eq!(dirichlet_l_at_0(&chi, &places("inf,3"), &places("2")).unwrap(), CycloNumber::from_int(1));
        assert_eq!(
            dirichlet_l_at_0(&chi, &places("inf,3"), &places("3")),
            Err(LfunError::SetOverlap("3".into()))
        );
        assert!(dirichlet_l_at_0(&chi, &places("inf"), &[]).is_err());
    }

    #[test]
    fn stickelberger_conductor_3() {
        let th = stickelberger(3, &places("inf,3"), &[]).unwrap();
        assert!(th.value.coord(0).is_zero());
        assert_eq!(th.value.coord(1), &CycloNumber::rational(ratio(1, 3)));
        assert!(th.rational);
        // partial zeta values 1/2 − a/f at σ_a^{-1}
        let setup = GaloisSetup::cyclotomic(3, &places("inf,3")).unwrap();
        let oracle = from_residues(&setup, |a| ratio(1, 2) - ratio(a as i64, 3)).involution();
        assert_eq!(th.value.to_group_algebra(), oracle);
        let f1 = stickelberger(1, &places("inf"), &[]).unwrap();
        assert_eq!(f1.value.coords(), &[CycloNumber::rational(ratio(-1, 2))]);
    }

    #[test]
    fn partial_zeta_oracle_with_t() {
        for f in [5u64, 7, 8, 9, 12, 15] {
            let mut s = vec![PlaceLabel::Infinite];
            s.extend(prime_factors(f).into_iter().map(PlaceLabel::Prime));
            let setup = GaloisSetup::cyclotomic(f, &s).unwrap();
            let theta_s = from_residues(&setup, |a| ratio(1, 2) - ratio(a as i64, f as i64)).involution();
            for q in [7u64, 11] {
                if f % q == 0 {
                    continue;
                }
                let sq = GAElement::basis(setup.group(), setup.sigma(q as i64).unwrap()).involution();
                let delta = &GAElement::one(setup.group()) - &sq.scale_rational(&rat(q as i64));
                let th = stickelberger(f, &s, &[PlaceLabel::Prime(q)]).unwrap();
                assert_eq!(th.value.to_group_algebra(), &delta * &theta_s, "f = {f}, q = {q}");
                assert!(th.is_integral());
            }
        }
        // T = {2} over Q(ζ_3) leaves denominators: 2 divides the number of roots of unity
        assert!(!stickelberger(3, &places("inf,3"), &places("2")).unwrap().is_integral());
    }

    #[test]
    fn assemble_matches() {
        let s = places("inf,5");
        let setup = GaloisSetup::cyclotomic(5, &s).unwrap();
        let table = CharacterTable::of(setup.group()).unwrap();
        let values: Vec<CycloNumber> =
            (0..table.len()).map(|i| dirichlet_l_at_0(&setup.dirichlet(table.get(i)).unwrap(), &s, &[]).unwrap()).collect();
        let a = stickelberger_assemble(&table, &values);
        assert_eq!(a.value, stickelberger(5, &s, &[]).unwrap().value);
        assert!(stickelberger_assemble(&table, &vec![CycloNumber::one(1); table.len()]).value.is_one());
        let mut bad = values.clone();
        let k = (0..table.len()).find(|&i| !table.get(i).values().iter().all(CycloNumber::is_rational)).unwrap();
        bad[k] = &bad[k] + &CycloNumber::one(1);
        assert!(!stickelberger_assemble(&table, &bad).rational);
    }

    #[test]
    fn vanishing_matches_l_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let (setup, s) = random_abelian_setup(&[3, 4, 5, 7, 8, 12, 15], &mut rng).unwrap();
            let labels: Vec<String> = s.iter().map(ToString::to_string).collect();
            let table = CharacterTable::of(setup.group()).unwrap();
            for i in 0..table.len() {
                let ord = order_of_vanishing(table.get(i), &setup, &labels).unwrap();
                let l = dirichlet_l_at_0(&setup.dirichlet(table.get(i)).unwrap(), &s, &[]).unwrap();
                assert_eq!(ord == 0, !l.is_zero());
                if table.get(i).is_trivial() {
                    assert_eq!(ord, s.len() - 1);
                }
            }
        }
    }

    #[test]
    fn sign_character_of_s3() {
        let g = crate::groups::catalog("s3").unwrap();
        let a3 = Subgroup::generated(&g, &[g.elements().find(|&x| g.element_order(x) == 3).unwrap()]);
        let t = g.elements().find(|&x| g.element_order(x) == 2).unwrap();
        let setup = GaloisSetup::new(
            &g,
            vec![Place { label: "inf".into(), archimedean: true, decomposition: Subgroup::generated(&g, &[t]), frobenius: None, norm: None },
                 Place { label: "7".into(), archimedean: false, decomposition: a3.clone(), frobenius: Some(a3.elements()[1]), norm: Some(7) }],
        )
        .unwrap();
        let table = CharacterTable::of(&g).unwrap();
        let sign = (0..table.len()).find(|&i| table.get(i).degree() == 1 && !table.get(i).is_trivial()).unwrap();
        assert_eq!(order_of_vanishing(table.get(sign), &setup, &["7".into()]).unwrap_err(), LfunError::InvalidPlaces("S must contain every archimedean place".into()));
        assert_eq!(order_of_vanishing(table.get(sign), &setup, &["inf".into(), "7".into()]).unwrap(), 1);
    }

    #[test]
    fn idempotent_three_ways() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for name in ["s3", "d4", "c6"] {
            let g = crate::groups::catalog(name).unwrap();
            for _ in 0..4 {
                let setup = random_abstract_setup(&g, &mut rng).unwrap();
                let s: Vec<String> = setup.places().iter().map(|p| p.label.clone()).collect();
                let k = rng.gen_range(0..s.len());
                let sigma1: Vec<String> = s.iter().filter(|l| *l != "inf").take(k).cloned().collect();
                if sigma1.len() >= s.len() {
                    continue;
                }
                let table = CharacterTable::of(&g).unwrap();
                for chi in 0..table.len() {
                    assert!(idempotent_equivalence_check(&setup, &s, &sigma1, chi).unwrap().agrees());
                }
            }
        }
    }

    #[test]
    fn idempotent_single_place() {
        let setup = GaloisSetup::cyclotomic(3, &places("inf")).unwrap();
        let e = splitting_idempotent(&setup, &["inf".into()], &[]).unwrap();
        assert!(e.is_one());
        assert_eq!(splitting_idempotent(&setup, &["inf".into()], &["inf".into()]), Err(LfunError::BadSubset));
    }
}
