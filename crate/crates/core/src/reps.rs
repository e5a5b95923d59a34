//! Explicit irreducible matrix representations over cyclotomic fields: linear characters,
//! monomial induction from linear characters of subgroups, and validation of
//! user-supplied matrices.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use serde_json::json;
use thiserror::Error;

use crate::algebra::GAElement;
use crate::arith::CycloNumber;
use crate::chars::{CharError, Character, CharacterTable};
use crate::groups::{all_subgroups, Group, Subgroup};
use crate::linalg::{identity, mat_mul, Matrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error("character {0} is not linear")]
    NotLinear(usize),
    #[error("invalid transversal: {0}")]
    BadTransversal(String),
    #[error("induced character is reducible")]
    Reducible,
    #[error("no representation available for character {0}")]
    MissingRep(usize),
    #[error("representation fails validation: {0}")]
    Invalid(String),
    #[error(transparent)]
    Char(#[from] CharError),
}

/// An irreducible representation given by one matrix per group element.
#[derive(Clone, Debug)]
pub struct IrredRep {
    group: Group,
    char_index: usize,
    matrices: Vec<Matrix<CycloNumber>>,
}

impl IrredRep {
    /// Wraps matrices without validation; see [`verify_rep`].
    pub fn from_matrices(group: &Group, char_index: usize, matrices: Vec<Matrix<CycloNumber>>) -> Self {
        IrredRep { group: group.clone(), char_index, matrices }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }
    pub fn char_index(&self) -> usize {
        self.char_index
    }
    pub fn degree(&self) -> usize {
        self.matrices[0].len()
    }
    pub fn matrix(&self, g: usize) -> &Matrix<CycloNumber> {
        &self.matrices[g]
    }
    pub fn matrices(&self) -> &[Matrix<CycloNumber>] {
        &self.matrices
    }

    /// ρ(x) = Σ_g x_g ρ(g).
    pub fn apply(&self, x: &GAElement) -> Matrix<CycloNumber> {
        let d = self.degree();
        let mut out = vec![vec![CycloNumber::zero(1); d]; d];
        for (g, c) in x.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (orow, mrow) in out.iter_mut().zip(&self.matrices[g]) {
                for (o, m) in orow.iter_mut().zip(mrow) {
                    if !m.is_zero() {
                        *o = &*o + &(c * m);
                    }
                }
            }
        }
        out
    }

    /// Conjugate by an invertible matrix: g ↦ P ρ(g) P⁻¹.
    pub fn conjugated(&self, p: &Matrix<CycloNumber>) -> Option<IrredRep> {
        let one = CycloNumber::one(1);
        let pinv = crate::linalg::inverse(p, &one)?;
        let zero = CycloNumber::zero(1);
        let matrices = self.matrices.iter().map(|m| mat_mul(&mat_mul(p, m, &zero), &pinv, &zero)).collect();
        Some(IrredRep { group: self.group.clone(), char_index: self.char_index, matrices })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mats: serde_json::Map<String, serde_json::Value> = self
            .matrices
            .iter()
            .enumerate()
            .map(|(g, m)| (g.to_string(), serde_json::to_value(m).unwrap()))
            .collect();
        json!({ "group": self.group.name(), "char_index": self.char_index, "matrices": mats })
    }

    /// Parses `{"char_index": i, "matrices": {element: [[CycloNumber]]}}`; element keys are
    /// indices or labels.
    pub fn from_json(group: &Group, v: &serde_json::Value) -> Result<IrredRep, RepError> {
        let bad = |m: &str| RepError::Invalid(m.to_string());
        let char_index = v.get("char_index").and_then(|x| x.as_u64()).ok_or_else(|| bad("missing char_index"))? as usize;
        let mats = v.get("matrices").and_then(|x| x.as_object()).ok_or_else(|| bad("missing matrices"))?;
        let mut matrices: Vec<Option<Matrix<CycloNumber>>> = vec![None; group.order()];
        for (key, val) in mats {
            let g = key.parse::<usize>().ok().filter(|&g| g < group.order()).or_else(|| group.element_by_label(key));
            let g = g.ok_or_else(|| bad(&format!("unknown element {key}")))?;
            let m: Matrix<CycloNumber> = serde_json::from_value(val.clone()).map_err(|e| bad(&e.to_string()))?;
            matrices[g] = Some(m);
        }
        let matrices = matrices.into_iter().collect::<Option<Vec<_>>>().ok_or_else(|| bad("a matrix is missing"))?;
        Ok(IrredRep { group: group.clone(), char_index, matrices })
    }
}

/// ρ(g) = [χ(g)] for a linear character.
pub fn rep_for_linear(table: &CharacterTable, i: usize) -> Result<IrredRep, RepError> {
    let chi = table.get(i);
    if chi.degree() != 1 {
        return Err(RepError::NotLinear(i));
    }
    let g = table.group();
    let matrices = g.elements().map(|x| vec![vec![chi.at(x).clone()]]).collect();
    Ok(IrredRep { group: g.clone(), char_index: i, matrices })
}

/// Monomial representation induced from a linear character λ of H (values listed in the
/// order of `h.elements()`): ρ(g)_{ij} = λ(t_i⁻¹ g t_j) when that lies in H, else 0.
/// Returns the representation when the induced character is irreducible.
pub fn monomial_induce(
    table: &CharacterTable,
    h: &Subgroup,
    lambda: &[CycloNumber],
    transversal: &[usize],
) -> Result<IrredRep, RepError> {
    let g = table.group();
    if lambda.len() != h.order() {
        return Err(RepError::BadTransversal("λ must have one value per element of H".into()));
    }
    if transversal.len() != h.index() {
        return Err(RepError::BadTransversal(format!("expected {} coset representatives", h.index())));
    }
    let mut covered = BTreeSet::new();
    for &t in transversal {
        if t >= g.order() {
            return Err(RepError::BadTransversal(format!("element {t} out of range")));
        }
        for &x in h.elements() {
            if !covered.insert(g.mul(t, x)) {
                return Err(RepError::BadTransversal("representatives share a coset".into()));
            }
        }
    }
    let pos: HashMap<usize, usize> = h.elements().iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let d = transversal.len();
    let matrices: Vec<Matrix<CycloNumber>> = g
        .elements()
        .map(|x| {
            (0..d)
                .map(|i| {
                    (0..d)
                        .map(|j| {
                            let y = g.mul(g.mul(g.inv(transversal[i]), x), transversal[j]);
                            pos.get(&y).map_or_else(|| CycloNumber::zero(1), |&k| lambda[k].clone())
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let traces: Vec<CycloNumber> = g
        .conjugacy_classes()
        .iter()
        .map(|c| trace(&matrices[c[0]]))
        .collect();
    let induced = Character::new(g, traces);
    let i = table.index_of(&induced).ok_or(RepError::Reducible)?;
    Ok(IrredRep { group: g.clone(), char_index: i, matrices })
}

fn trace(m: &Matrix<CycloNumber>) -> CycloNumber {
    (0..m.len()).fold(CycloNumber::zero(1), |acc, i| &acc + &m[i][i])
}

/// Searches subgroups of index χ(1) for a linear character inducing to χ.
pub fn find_monomial_rep(table: &CharacterTable, i: usize) -> Result<IrredRep, RepError> {
    let chi = table.get(i);
    let d = chi.degree();
    if d == 1 {
        return rep_for_linear(table, i);
    }
    let g = table.group();
    for h in all_subgroups(g).into_iter().filter(|h| h.index() == d) {
        let (hg, inc) = h.as_group().map_err(CharError::from)?;
        let th = CharacterTable::of(&hg)?;
        for lam in th.irreducibles().iter().filter(|c| c.degree() == 1) {
            if lam.induce(&inc)? != *chi {
                continue;
            }
            let values: Vec<CycloNumber> = hg.elements().map(|x| lam.at(x).clone()).collect();
            return monomial_induce(table, &h, &values, &h.left_transversal());
        }
    }
    Err(RepError::MissingRep(i))
}

/// Exhaustive check: ρ(e) = I, ρ(gh) = ρ(g)ρ(h) and tr ρ(g) = χ(g).
pub fn verify_rep(table: &CharacterTable, rho: &IrredRep) -> bool {
    check_rep(table, rho).is_ok()
}

pub fn check_rep(table: &CharacterTable, rho: &IrredRep) -> Result<(), RepError> {
    let g = table.group();
    let bad = |m: String| Err(RepError::Invalid(m));
    if rho.matrices.len() != g.order() || rho.char_index >= table.len() {
        return bad("shape".into());
    }
    let chi = table.get(rho.char_index);
    let d = chi.degree();
    if rho.matrices.iter().any(|m| m.len() != d || m.iter().any(|r| r.len() != d)) {
        return bad(format!("matrices must be {d}x{d}"));
    }
    let one = CycloNumber::one(1);
    if rho.matrices[g.identity()] != identity(d, &one) {
        return bad("identity does not act trivially".into());
    }
    for x in g.elements() {
        if &trace(&rho.matrices[x]) != chi.at(x) {
            return bad(format!("trace mismatch at element {x}"));
        }
    }
    let zero = CycloNumber::zero(1);
    for x in g.elements() {
        for y in g.elements() {
            if mat_mul(&rho.matrices[x], &rho.matrices[y], &zero) != rho.matrices[g.mul(x, y)] {
                return bad(format!("not multiplicative at ({x},{y})"));
            }
        }
    }
    Ok(())
}

/// A character table together with one pinned irreducible representation per character.
#[derive(Debug)]
pub struct Wedderburn {
    table: Arc<CharacterTable>,
    reps: Vec<IrredRep>,
}

impl Wedderburn {
    /// Builds (or fetches from the cache) representations for every irreducible of `group`.
    pub fn of(group: &Group) -> Result<Arc<Wedderburn>, RepError> {
        static CACHE: OnceLock<Mutex<HashMap<Vec<Vec<usize>>, Arc<Wedderburn>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().unwrap();
        if let Some(w) = guard.get(group.table()) {
            if Arc::ptr_eq(w.table.group(), group) {
                return Ok(w.clone());
            }
        }
        let table = CharacterTable::of(group)?;
        let reps = (0..table.len()).map(|i| find_monomial_rep(&table, i)).collect::<Result<Vec<_>, _>>()?;
        let w = Arc::new(Wedderburn { table, reps });
        guard.insert(group.table().to_vec(), w.clone());
        Ok(w)
    }

    /// Uses supplied representations; each is validated. Missing characters are filled
    /// by the monomial search.
    pub fn with_reps(table: &Arc<CharacterTable>, supplied: Vec<IrredRep>) -> Result<Arc<Wedderburn>, RepError> {
        let mut reps: Vec<Option<IrredRep>> = vec![None; table.len()];
        for r in supplied {
            check_rep(table, &r)?;
            let i = r.char_index;
            reps[i] = Some(r);
        }
        let reps = reps
            .into_iter()
            .enumerate()
            .map(|(i, r)| r.map_or_else(|| find_monomial_rep(table, i), Ok))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Arc::new(Wedderburn { table: table.clone(), reps }))
    }

    pub fn table(&self) -> &Arc<CharacterTable> {
        &self.table
    }
    pub fn group(&self) -> &Group {
        self.table.group()
    }
    pub fn rep(&self, i: usize) -> &IrredRep {
        &self.reps[i]
    }
    pub fn reps(&self) -> &[IrredRep] {
        &self.reps
    }
    pub fn num_blocks(&self) -> usize {
        self.reps.len()
    }
    pub fn degree(&self, i: usize) -> usize {
        self.reps[i].degree()
    }

    /// Matrix unit e_{ij} of block χ: (d/|G|) Σ_g ρ(g⁻¹)_{ji} g.
    pub fn matrix_unit(&self, chi: usize, i: usize, j: usize) -> GAElement {
        let g = self.group();
        let rho = &self.reps[chi];
        let scale = crate::arith::ratio(rho.degree() as i64, g.order() as i64);
        GAElement::from_coeffs(g, g.elements().map(|x| rho.matrix(g.inv(x))[j][i].scale(&scale)).collect())
    }
}
