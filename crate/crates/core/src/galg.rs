//! Linear algebra over group algebras: matrices, reduced norms, reduced exterior powers,
//! the duality pairing, Rubin-lattice membership at good primes and the element
//! construction on free modules.
//!
//! Conventions. Modules are left modules. An element of the free module A^r is a row
//! vector (m_1, ..., m_r), and an endomorphism φ is the matrix Φ with row a equal to
//! φ(b_a), so φ(m) = mΦ. For each irreducible χ of degree d with pinned representation
//! ρ_χ, the multiplicity space is e_11·M where e_ij are the matrix units of the χ-block.
//! A wedge of r elements m_a is the exterior product over a and s = 1..d of the vectors
//! e_1s·m_a, stored by Plücker coordinates (column subsets in lexicographic order).

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rand::Rng;
use serde_json::json;
use thiserror::Error;

use crate::algebra::GAElement;
use crate::arith::{is_prime, CycloNumber};
use crate::chars::CentralElement;
use crate::groups::Group;
use crate::linalg::{det, mat_mul, rref, Matrix};
use crate::reps::{RepError, Wedderburn};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GalgError {
    #[error("matrix is not square")]
    NotSquare,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("degree mismatch: cannot pair degree {dual} with degree {primal}")]
    DegreeMismatch { dual: usize, primal: usize },
    #[error("not a module homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("not a representation: {0}")]
    NotRepresentation(String),
    #[error("index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("prime {0} divides the group order or is not prime")]
    BadPrime(u64),
    #[error(transparent)]
    Rep(#[from] RepError),
}

/// A matrix with entries in the group algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct GAMatrix {
    group: Group,
    entries: Vec<Vec<GAElement>>,
}

impl GAMatrix {
    pub fn new(group: &Group, entries: Vec<Vec<GAElement>>) -> Result<Self, GalgError> {
        let cols = entries.first().map_or(0, Vec::len);
        if entries.is_empty() || cols == 0 || entries.iter().any(|r| r.len() != cols) {
            return Err(GalgError::ShapeMismatch("matrix must be rectangular and non-empty".into()));
        }
        Ok(GAMatrix { group: group.clone(), entries })
    }

    pub fn identity(group: &Group, n: usize) -> Self {
        let entries = (0..n)
            .map(|i| (0..n).map(|j| if i == j { GAElement::one(group) } else { GAElement::zero(group) }).collect())
            .collect();
        GAMatrix { group: group.clone(), entries }
    }

    pub fn diagonal(group: &Group, diag: Vec<GAElement>) -> Self {
        let n = diag.len();
        let mut m = Self::identity(group, n);
        for (i, x) in diag.into_iter().enumerate() {
            m.entries[i][i] = x;
        }
        m
    }

    pub fn from_integers(group: &Group, rows: &[Vec<Vec<i64>>]) -> Result<Self, GalgError> {
        Self::new(group, rows.iter().map(|r| r.iter().map(|c| GAElement::from_integers(group, c)).collect()).collect())
    }

    /// Random matrix with entries in Z[G].
    pub fn random_integral<R: Rng>(group: &Group, rows: usize, cols: usize, bound: i64, rng: &mut R) -> Self {
        let entries = (0..rows).map(|_| (0..cols).map(|_| GAElement::random_integral(group, bound, rng)).collect()).collect();
        GAMatrix { group: group.clone(), entries }
    }

    /// Random element of GL_n(Z[G]): a product of elementary matrices, a signed monomial
    /// matrix with group-element entries, and more elementary matrices.
    pub fn random_unit<R: Rng>(group: &Group, n: usize, rng: &mut R) -> Self {
        let mut m = Self::identity(group, n);
        let steps = 2 * n;
        let elementary = |rng: &mut R| {
            let mut e = Self::identity(group, n);
            if n > 1 {
                let a = rng.gen_range(0..n);
                let b = (a + rng.gen_range(1..n)) % n;
                e.entries[a][b] = GAElement::random_integral(group, 1, rng);
            }
            e
        };
        for _ in 0..steps {
            m = m.mul(&elementary(rng)).unwrap();
        }
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let mut mono = Self::identity(group, n);
        for i in 0..n {
            mono.entries[i] = vec![GAElement::zero(group); n];
            let g = rng.gen_range(0..group.order());
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            mono.entries[i][perm[i]] = GAElement::basis(group, g).scale(&CycloNumber::from_int(sign));
        }
        m = m.mul(&mono).unwrap();
        for _ in 0..steps {
            m = m.mul(&elementary(rng)).unwrap();
        }
        m
    }

    pub fn group(&self) -> &Group {
        &self.group
    }
    pub fn rows(&self) -> usize {
        self.entries.len()
    }
    pub fn cols(&self) -> usize {
        self.entries[0].len()
    }
    pub fn entry(&self, i: usize, j: usize) -> &GAElement {
        &self.entries[i][j]
    }
    pub fn entries(&self) -> &[Vec<GAElement>] {
        &self.entries
    }
    pub fn set(&mut self, i: usize, j: usize, x: GAElement) {
        self.entries[i][j] = x;
    }

    pub fn mul(&self, other: &GAMatrix) -> Result<GAMatrix, GalgError> {
        if self.cols() != other.rows() {
            return Err(GalgError::ShapeMismatch(format!("{}x{} times {}x{}", self.rows(), self.cols(), other.rows(), other.cols())));
        }
        let entries = (0..self.rows())
            .map(|i| {
                (0..other.cols())
                    .map(|j| {
                        (0..self.cols()).fold(GAElement::zero(&self.group), |acc, k| &acc + &(&self.entries[i][k] * &other.entries[k][j]))
                    })
                    .collect()
            })
            .collect();
        Ok(GAMatrix { group: self.group.clone(), entries })
    }

    pub fn transpose(&self) -> GAMatrix {
        let entries = (0..self.cols()).map(|j| (0..self.rows()).map(|i| self.entries[i][j].clone()).collect()).collect();
        GAMatrix { group: self.group.clone(), entries }
    }

    /// Every entry has rational coefficients integral at `p`.
    pub fn is_p_integral(&self, p: u64) -> bool {
        self.entries.iter().flatten().all(|x| x.coeffs().iter().all(|c| c.is_p_integral(p).unwrap_or(false)))
    }

    /// Block matrix ρ_χ(M): rows indexed by (i, s), columns by (j, t).
    pub fn block(&self, w: &Wedderburn, chi: usize) -> Matrix<CycloNumber> {
        let rho = w.rep(chi);
        let d = rho.degree();
        let mut out = vec![vec![CycloNumber::zero(1); self.cols() * d]; self.rows() * d];
        for (i, row) in self.entries.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let m = rho.apply(x);
                for s in 0..d {
                    for t in 0..d {
                        out[i * d + s][j * d + t] = m[s][t].clone();
                    }
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<Vec<serde_json::Value>> = self
            .entries
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| {
                        let m: serde_json::Map<String, serde_json::Value> = x
                            .coeffs()
                            .iter()
                            .enumerate()
                            .filter(|(_, c)| !c.is_zero())
                            .map(|(g, c)| (g.to_string(), serde_json::to_value(c).unwrap()))
                            .collect();
                        serde_json::Value::Object(m)
                    })
                    .collect()
            })
            .collect();
        json!({ "rows": self.rows(), "cols": self.cols(), "entries": entries })
    }

    /// Parses `{"rows": r, "cols": c, "entries": [[{element_index: CycloNumber}]]}`.
    pub fn from_json(group: &Group, v: &serde_json::Value) -> Result<GAMatrix, GalgError> {
        let bad = |m: &str| GalgError::ShapeMismatch(m.to_string());
        let rows = v.get("rows").and_then(|x| x.as_u64()).ok_or_else(|| bad("missing rows"))? as usize;
        let cols = v.get("cols").and_then(|x| x.as_u64()).ok_or_else(|| bad("missing cols"))? as usize;
        let arr = v.get("entries").and_then(|x| x.as_array()).ok_or_else(|| bad("missing entries"))?;
        if arr.len() != rows {
            return Err(bad("row count"));
        }
        let mut entries = Vec::new();
        for r in arr {
            let r = r.as_array().ok_or_else(|| bad("row must be an array"))?;
            if r.len() != cols {
                return Err(bad("column count"));
            }
            let mut row = Vec::new();
            for e in r {
                let obj = e.as_object().ok_or_else(|| bad("entry must be an object"))?;
                let mut coeffs = vec![CycloNumber::zero(1); group.order()];
                for (k, c) in obj {
                    let g: usize = k.parse().ok().filter(|&g| g < group.order()).ok_or_else(|| bad("bad element index"))?;
                    coeffs[g] = serde_json::from_value(c.clone()).map_err(|e| bad(&e.to_string()))?;
                }
                row.push(GAElement::from_coeffs(group, coeffs));
            }
            entries.push(row);
        }
        GAMatrix::new(group, entries)
    }
}

/// Nrd(M)_χ = det ρ_χ(M).
pub fn reduced_norm(w: &Wedderburn, m: &GAMatrix) -> Result<CentralElement, GalgError> {
    if m.rows() != m.cols() {
        return Err(GalgError::NotSquare);
    }
    let one = CycloNumber::one(1);
    let coords = (0..w.num_blocks()).map(|chi| det(&m.block(w, chi), &one)).collect();
    Ok(CentralElement::new(w.table(), coords))
}

#[derive(Debug)]
enum ModuleKind {
    Free(usize),
    /// E-dimension and the matrix of each group element (column convention g·v = T(g)v).
    General { dim: usize, action: Vec<Matrix<CycloNumber>> },
}

/// Basis of e_11·M for one block: rows in reduced echelon form with their pivot columns.
#[derive(Debug, Clone)]
struct MultSpace {
    basis: Matrix<CycloNumber>,
    pivots: Vec<usize>,
}

/// A finitely generated module over E[G].
#[derive(Debug)]
pub struct GAModule {
    alg: Arc<Wedderburn>,
    kind: ModuleKind,
    spaces: Mutex<HashMap<usize, Arc<MultSpace>>>,
}

/// An element of a module as an E-coordinate vector. For the free module A^r the
/// coordinate (k, g) at index k·|G| + g is the coefficient of g in the k-th component.
pub type ModuleElement = Vec<CycloNumber>;

impl GAModule {
    pub fn free(alg: &Arc<Wedderburn>, rank: usize) -> Arc<GAModule> {
        Arc::new(GAModule { alg: alg.clone(), kind: ModuleKind::Free(rank), spaces: Mutex::new(HashMap::new()) })
    }

    /// A module given by one matrix per group element, validated as a representation.
    pub fn from_action(alg: &Arc<Wedderburn>, action: Vec<Matrix<CycloNumber>>) -> Result<Arc<GAModule>, GalgError> {
        let g = alg.group();
        if action.len() != g.order() {
            return Err(GalgError::NotRepresentation("one matrix per group element required".into()));
        }
        let dim = action[0].len();
        if action.iter().any(|m| m.len() != dim || m.iter().any(|r| r.len() != dim)) {
            return Err(GalgError::NotRepresentation("matrices must be square of equal size".into()));
        }
        let zero = CycloNumber::zero(1);
        for x in g.elements() {
            for y in g.elements() {
                if mat_mul(&action[x], &action[y], &zero) != action[g.mul(x, y)] {
                    return Err(GalgError::NotRepresentation(format!("fails at ({x},{y})")));
                }
            }
        }
        Ok(Arc::new(GAModule { alg: alg.clone(), kind: ModuleKind::General { dim, action }, spaces: Mutex::new(HashMap::new()) }))
    }

    /// The permutation module E[G/H] on left cosets of `h`, cosets ordered as in
    /// `left_transversal`.
    pub fn permutation(alg: &Arc<Wedderburn>, h: &crate::groups::Subgroup) -> Result<Arc<GAModule>, GalgError> {
        let g = alg.group();
        let reps = h.left_transversal();
        let coset = |x: usize| reps.iter().position(|&t| h.contains(g.mul(g.inv(t), x))).unwrap();
        let n = reps.len();
        let action = g
            .elements()
            .map(|x| {
                let mut m = vec![vec![CycloNumber::zero(1); n]; n];
                for (i, &t) in reps.iter().enumerate() {
                    m[coset(g.mul(x, t))][i] = CycloNumber::one(1);
                }
                m
            })
            .collect();
        Ok(Arc::new(GAModule { alg: alg.clone(), kind: ModuleKind::General { dim: n, action }, spaces: Mutex::new(HashMap::new()) }))
    }

    pub fn algebra(&self) -> &Arc<Wedderburn> {
        &self.alg
    }
    pub fn group(&self) -> &Group {
        self.alg.group()
    }
    pub fn dim(&self) -> usize {
        match &self.kind {
            ModuleKind::Free(r) => r * self.group().order(),
            ModuleKind::General { dim, .. } => *dim,
        }
    }
    pub fn free_rank(&self) -> Option<usize> {
        match self.kind {
            ModuleKind::Free(r) => Some(r),
            _ => None,
        }
    }

    /// Packs components (m_1, ..., m_r) of the free module.
    pub fn free_element(&self, comps: &[GAElement]) -> ModuleElement {
        comps.iter().flat_map(|c| c.coeffs().iter().cloned()).collect()
    }

    fn free_component(&self, m: &ModuleElement, k: usize) -> GAElement {
        let n = self.group().order();
        GAElement::from_coeffs(self.group(), m[k * n..(k + 1) * n].to_vec())
    }

    /// The basis vector b_k of a free module.
    pub fn free_basis(&self, k: usize) -> ModuleElement {
        let r = self.free_rank().expect("free module");
        let comps: Vec<GAElement> =
            (0..r).map(|j| if j == k { GAElement::one(self.group()) } else { GAElement::zero(self.group()) }).collect();
        self.free_element(&comps)
    }

    /// Matrix of x ∈ E[G] acting on the module (column convention).
    pub fn action_of(&self, x: &GAElement) -> Matrix<CycloNumber> {
        let n = self.dim();
        let mut out = vec![vec![CycloNumber::zero(1); n]; n];
        for i in 0..n {
            let mut v = vec![CycloNumber::zero(1); n];
            v[i] = CycloNumber::one(1);
            let col = self.act(x, &v);
            for (r, c) in col.into_iter().enumerate() {
                out[r][i] = c;
            }
        }
        out
    }

    /// x·m.
    pub fn act(&self, x: &GAElement, m: &ModuleElement) -> ModuleElement {
        match &self.kind {
            ModuleKind::Free(r) => {
                let comps: Vec<GAElement> = (0..*r).map(|k| x * &self.free_component(m, k)).collect();
                self.free_element(&comps)
            }
            ModuleKind::General { dim, action } => {
                let mut out = vec![CycloNumber::zero(1); *dim];
                for (g, c) in x.coeffs().iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    for (i, row) in action[g].iter().enumerate() {
                        let s = row.iter().zip(m).fold(CycloNumber::zero(1), |acc, (a, b)| {
                            if a.is_zero() || b.is_zero() {
                                acc
                            } else {
                                &acc + &(a * b)
                            }
                        });
                        if !s.is_zero() {
                            out[i] = &out[i] + &(c * &s);
                        }
                    }
                }
                out
            }
        }
    }

    fn space(&self, chi: usize) -> Arc<MultSpace> {
        if let Some(s) = self.spaces.lock().unwrap().get(&chi) {
            return s.clone();
        }
        let e11 = self.alg.matrix_unit(chi, 0, 0);
        let n = self.dim();
        // rows spanning e_11·M
        let mut rows: Matrix<CycloNumber> = (0..n)
            .map(|i| {
                let mut v = vec![CycloNumber::zero(1); n];
                v[i] = CycloNumber::one(1);
                self.act(&e11, &v)
            })
            .collect();
        let pivots = rref(&mut rows);
        rows.truncate(pivots.len());
        let s = Arc::new(MultSpace { basis: rows, pivots });
        self.spaces.lock().unwrap().insert(chi, s.clone());
        s
    }

    /// Dimension of e_11·M for block χ.
    pub fn multiplicity_dim(&self, chi: usize) -> usize {
        match self.kind {
            ModuleKind::Free(r) => r * self.alg.degree(chi),
            ModuleKind::General { .. } => self.space(chi).basis.len(),
        }
    }

    /// Coordinates of e_1s·m in the pinned basis of e_11·M.
    fn mult_coords(&self, chi: usize, s: usize, m: &ModuleElement) -> Vec<CycloNumber> {
        match self.kind {
            ModuleKind::Free(r) => {
                let rho = self.alg.rep(chi);
                let d = rho.degree();
                let mut out = Vec::with_capacity(r * d);
                for k in 0..r {
                    let mk = rho.apply(&self.free_component(m, k));
                    out.extend(mk[s].iter().cloned());
                }
                out
            }
            ModuleKind::General { .. } => {
                let sp = self.space(chi);
                let y = self.act(&self.alg.matrix_unit(chi, 0, s), m);
                sp.pivots.iter().map(|&p| y[p].clone()).collect()
            }
        }
    }

    /// Values of the functional y ↦ ρ_χ(φ(y))_{1,t} on the pinned basis of e_11·M.
    fn functional(&self, chi: usize, t: usize, phi: &ModHom) -> Vec<CycloNumber> {
        let rho = self.alg.rep(chi);
        match self.kind {
            ModuleKind::Free(r) => {
                let d = rho.degree();
                let mut out = Vec::with_capacity(r * d);
                for k in 0..r {
                    let img = rho.apply(&phi.apply(self, &self.free_basis(k)));
                    out.extend((0..d).map(|u| img[u][t].clone()));
                }
                out
            }
            ModuleKind::General { .. } => {
                let sp = self.space(chi);
                sp.basis.iter().map(|b| rho.apply(&phi.apply(self, b))[0][t].clone()).collect()
            }
        }
    }
}

/// An E[G]-linear map M → E[G], stored by the images of the E-basis of M.
#[derive(Clone, Debug, PartialEq)]
pub struct ModHom {
    images: Vec<GAElement>,
}

impl ModHom {
    /// Homomorphism on a free module determined by φ(b_k).
    pub fn free(module: &GAModule, on_basis: Vec<GAElement>) -> Result<ModHom, GalgError> {
        let r = module.free_rank().ok_or_else(|| GalgError::NotHomomorphism("module is not free".into()))?;
        if on_basis.len() != r {
            return Err(GalgError::NotHomomorphism(format!("expected {r} basis images")));
        }
        let g = module.group();
        let mut images = Vec::with_capacity(r * g.order());
        for img in &on_basis {
            for x in g.elements() {
                images.push(&GAElement::basis(g, x) * img);
            }
        }
        Ok(ModHom { images })
    }

    /// The k-th coordinate functional b_k^* of a free module.
    pub fn dual_basis(module: &GAModule, k: usize) -> Result<ModHom, GalgError> {
        let r = module.free_rank().ok_or_else(|| GalgError::NotHomomorphism("module is not free".into()))?;
        if k >= r {
            return Err(GalgError::IndexOutOfRange(k));
        }
        let g = module.group();
        Self::free(module, (0..r).map(|j| if j == k { GAElement::one(g) } else { GAElement::zero(g) }).collect())
    }

    /// Homomorphism given by the images of the E-basis vectors; equivariance is checked.
    pub fn from_images(module: &GAModule, images: Vec<GAElement>) -> Result<ModHom, GalgError> {
        if images.len() != module.dim() {
            return Err(GalgError::NotHomomorphism("one image per basis vector required".into()));
        }
        let h = ModHom { images };
        let g = module.group();
        for x in g.elements() {
            let gx = GAElement::basis(g, x);
            for i in 0..module.dim() {
                let mut v = vec![CycloNumber::zero(1); module.dim()];
                v[i] = CycloNumber::one(1);
                if h.apply(module, &module.act(&gx, &v)) != &gx * &h.images[i] {
                    return Err(GalgError::NotHomomorphism(format!("not equivariant at element {x}, basis vector {i}")));
                }
            }
        }
        Ok(h)
    }

    pub fn apply(&self, module: &GAModule, m: &ModuleElement) -> GAElement {
        let g = module.group();
        let mut acc = GAElement::zero(g);
        for (c, img) in m.iter().zip(&self.images) {
            if !c.is_zero() {
                acc = &acc + &img.scale(c);
            }
        }
        acc
    }
}

/// Coordinates of an element of a reduced exterior power (or of its dual): for each
/// irreducible χ, the Plücker coordinates in degree r·χ(1) of the multiplicity space.
#[derive(Clone, Debug)]
pub struct ExteriorCoords {
    module: Arc<GAModule>,
    degree: usize,
    coords: Vec<Vec<CycloNumber>>,
}

impl PartialEq for ExteriorCoords {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.coords == other.coords
    }
}

impl ExteriorCoords {
    pub fn module(&self) -> &Arc<GAModule> {
        &self.module
    }
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn coords(&self) -> &[Vec<CycloNumber>] {
        &self.coords
    }
    pub fn is_zero(&self) -> bool {
        self.coords.iter().flatten().all(CycloNumber::is_zero)
    }

    /// Multiplies the χ-component by z_χ.
    pub fn scale(&self, z: &CentralElement) -> Self {
        let coords = self.coords.iter().enumerate().map(|(i, v)| v.iter().map(|c| c * z.coord(i)).collect()).collect();
        ExteriorCoords { module: self.module.clone(), degree: self.degree, coords }
    }

    pub fn add(&self, other: &Self) -> Self {
        let coords =
            self.coords.iter().zip(&other.coords).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect()).collect();
        ExteriorCoords { module: self.module.clone(), degree: self.degree, coords }
    }

    /// Degree-0 elements are central.
    pub fn to_central(&self) -> Option<CentralElement> {
        if self.degree != 0 {
            return None;
        }
        let coords = self.coords.iter().map(|v| v.first().cloned().unwrap_or_else(|| CycloNumber::zero(1))).collect();
        Some(CentralElement::new(self.module.alg.table(), coords))
    }

    /// The ratio z with self = z · other, when every nonzero block of `other` has a
    /// proportional counterpart in `self`.
    pub fn ratio_to(&self, other: &Self) -> Option<CentralElement> {
        let mut coords = Vec::new();
        for (a, b) in self.coords.iter().zip(&other.coords) {
            let pivot = b.iter().position(|c| !c.is_zero())?;
            let z = &a[pivot] * &b[pivot].inv().ok()?;
            if a.iter().zip(b).any(|(x, y)| *x != &z * y) {
                return None;
            }
            coords.push(z);
        }
        Some(CentralElement::new(self.module.alg.table(), coords))
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "degree": self.degree,
            "components": self.coords.iter().map(|v| v.iter().map(|c| serde_json::to_value(c).unwrap()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WedgeElement(pub ExteriorCoords);

#[derive(Clone, Debug, PartialEq)]
pub struct DualWedgeElement(pub ExteriorCoords);

/// All k-subsets of 0..n in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

fn mask(s: &[usize]) -> u128 {
    s.iter().fold(0u128, |m, &i| m | (1u128 << i))
}

/// Plücker coordinates of the row space of a k×n matrix (empty when k > n).
fn plucker(rows: &Matrix<CycloNumber>, n: usize) -> Vec<CycloNumber> {
    let k = rows.len();
    let one = CycloNumber::one(1);
    subsets(n, k)
        .into_iter()
        .map(|cols| {
            let minor: Matrix<CycloNumber> = rows.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect();
            if k == 0 {
                one.clone()
            } else {
                det(&minor, &one)
            }
        })
        .collect()
}

/// ∧_a ∧_s e_1s·m_a.
pub fn wedge(module: &Arc<GAModule>, ms: &[ModuleElement]) -> WedgeElement {
    let w = &module.alg;
    let coords = (0..w.num_blocks())
        .map(|chi| {
            let d = w.degree(chi);
            let rows: Matrix<CycloNumber> =
                ms.iter().flat_map(|m| (0..d).map(move |s| module.mult_coords(chi, s, m))).collect();
            plucker(&rows, module.multiplicity_dim(chi))
        })
        .collect();
    WedgeElement(ExteriorCoords { module: module.clone(), degree: ms.len(), coords })
}

/// ∧_a ∧_t f_{φ_a, t} with f_{φ,t}(y) = ρ_χ(φ(y))_{1,t}.
pub fn dual_wedge(module: &Arc<GAModule>, phis: &[ModHom]) -> DualWedgeElement {
    let w = &module.alg;
    let coords = (0..w.num_blocks())
        .map(|chi| {
            let d = w.degree(chi);
            let rows: Matrix<CycloNumber> =
                phis.iter().flat_map(|p| (0..d).map(move |t| module.functional(chi, t, p))).collect();
            plucker(&rows, module.multiplicity_dim(chi))
        })
        .collect();
    DualWedgeElement(ExteriorCoords { module: module.clone(), degree: phis.len(), coords })
}

/// Contraction of a degree-r wedge by a degree-s dual wedge, normalized so that
/// Θ(ι_Ψ x) = (Ψ ∧ Θ)(x). For r = s this is the evaluation (∧φ)(∧m).
pub fn pair(phi: &DualWedgeElement, x: &WedgeElement) -> Result<WedgeElement, GalgError> {
    let (phi, x) = (&phi.0, &x.0);
    if phi.degree > x.degree {
        return Err(GalgError::DegreeMismatch { dual: phi.degree, primal: x.degree });
    }
    let module = &x.module;
    let w = &module.alg;
    let coords = (0..w.num_blocks())
        .map(|chi| {
            let d = w.degree(chi);
            let n = module.multiplicity_dim(chi);
            let (ks, kr) = (phi.degree * d, x.degree * d);
            let out_subsets = subsets(n, kr - ks);
            if kr > n {
                return vec![CycloNumber::zero(1); out_subsets.len()];
            }
            let x_index: HashMap<u128, usize> = subsets(n, kr).iter().enumerate().map(|(i, s)| (mask(s), i)).collect();
            let s_list = subsets(n, ks);
            out_subsets
                .iter()
                .map(|r| {
                    let rmask = mask(r);
                    let mut acc = CycloNumber::zero(1);
                    for (si, s) in s_list.iter().enumerate() {
                        let smask = mask(s);
                        if smask & rmask != 0 {
                            continue;
                        }
                        let psi = &phi.coords[chi][si];
                        if psi.is_zero() {
                            continue;
                        }
                        let xv = &x.coords[chi][x_index[&(smask | rmask)]];
                        if xv.is_zero() {
                            continue;
                        }
                        let inversions: usize = s.iter().map(|&a| r.iter().filter(|&&b| b < a).count()).sum();
                        let term = psi * xv;
                        acc = if inversions.is_multiple_of(2) { &acc + &term } else { &acc - &term };
                    }
                    acc
                })
                .collect()
        })
        .collect();
    Ok(WedgeElement(ExteriorCoords { module: module.clone(), degree: x.degree - phi.degree, coords }))
}

/// (∧φ)(x) for a wedge of the same degree.
pub fn evaluation_image(x: &WedgeElement, phis: &[ModHom]) -> Result<CentralElement, GalgError> {
    if phis.len() != x.0.degree {
        return Err(GalgError::DegreeMismatch { dual: phis.len(), primal: x.0.degree });
    }
    let dual = dual_wedge(&x.0.module, phis);
    Ok(pair(&dual, x)?.0.to_central().expect("degree zero"))
}

/// Gram matrix G_ab = φ_a(m_b).
pub fn gram_matrix(module: &GAModule, phis: &[ModHom], ms: &[ModuleElement]) -> Result<GAMatrix, GalgError> {
    GAMatrix::new(module.group(), phis.iter().map(|p| ms.iter().map(|m| p.apply(module, m)).collect()).collect())
}

/// Membership of x in the reduced Rubin lattice at a prime p ∤ |G|: every evaluation of
/// x by r of the supplied homomorphisms must be p-integral. For free modules with no
/// homomorphisms supplied the dual basis is used.
pub fn rubin_membership(x: &WedgeElement, homs: &[ModHom], p: u64) -> Result<bool, GalgError> {
    let module = &x.0.module;
    if !is_prime(p) || (module.group().order() as u64).is_multiple_of(p) {
        return Err(GalgError::BadPrime(p));
    }
    let auto: Vec<ModHom>;
    let homs = if homs.is_empty() {
        let r = module.free_rank().ok_or_else(|| GalgError::NotHomomorphism("generating homomorphisms required".into()))?;
        auto = (0..r).map(|k| ModHom::dual_basis(module, k)).collect::<Result<_, _>>()?;
        &auto[..]
    } else {
        homs
    };
    for s in subsets(homs.len(), x.0.degree) {
        let chosen: Vec<ModHom> = s.iter().map(|&i| homs[i].clone()).collect();
        let v = evaluation_image(x, &chosen)?;
        if !v.coords().iter().all(|c| c.is_p_integral(p).unwrap_or(false)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// x = (∧_{i∈I} (b_i^*∘φ))(∧_{j} b_j) on the free module of rank d, where φ has rows
/// φ(b_j); the result has degree d − |I|.
pub fn element_construction(w: &Arc<Wedderburn>, phi: &GAMatrix, indices: &[usize]) -> Result<WedgeElement, GalgError> {
    let d = phi.rows();
    if phi.cols() != d {
        return Err(GalgError::NotSquare);
    }
    if let Some(&bad) = indices.iter().find(|&&i| i >= d) {
        return Err(GalgError::IndexOutOfRange(bad));
    }
    let module = GAModule::free(w, d);
    let psis: Vec<ModHom> = indices
        .iter()
        .map(|&i| ModHom::free(&module, (0..d).map(|j| phi.entry(j, i).clone()).collect()))
        .collect::<Result<_, _>>()?;
    let basis: Vec<ModuleElement> = (0..d).map(|k| module.free_basis(k)).collect();
    pair(&dual_wedge(&module, &psis), &wedge(&module, &basis))
}

/// Rows of Φ as elements of the free module (φ(b_a) for each a).
pub fn rows_as_elements(module: &GAModule, phi: &GAMatrix) -> Vec<ModuleElement> {
    phi.entries().iter().map(|r| module.free_element(r)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;
    use crate::groups::catalog;
    use crate::linalg::det_leibniz;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn alg(name: &str) -> Arc<Wedderburn> {
        Wedderburn::of(&catalog(name).unwrap()).unwrap()
    }

    #[test]
    fn trivial_group_is_determinant() {
        let w = alg("c1");
        let g = w.group().clone();
        let m = GAMatrix::from_integers(&g, &[vec![vec![1], vec![2]], vec![vec![3], vec![4]]]).unwrap();
        assert_eq!(reduced_norm(&w, &m).unwrap().coords(), &[CycloNumber::from_int(-2)]);
    }

    #[test]
    fn c2_norm_is_abelian_wedderburn() {
        let w = alg("c2");
        let g = w.group().clone();
        let m = GAMatrix::from_integers(&g, &[vec![vec![3, 5]]]).unwrap();
        // coords (a + b, a − b) for a + bσ
        assert_eq!(reduced_norm(&w, &m).unwrap().coords(), &[CycloNumber::from_int(8), CycloNumber::from_int(-2)]);
    }

    #[test]
    fn norm_of_permutation_is_sign() {
        let w = alg("s3");
        let g = w.group().clone();
        let o = GAElement::one(&g);
        let z = GAElement::zero(&g);
        let swap = GAMatrix::new(&g, vec![vec![z.clone(), o.clone()], vec![o, z]]).unwrap();
        let n = reduced_norm(&w, &swap).unwrap();
        for (i, c) in n.coords().iter().enumerate() {
            let expect = if w.degree(i) % 2 == 1 { -1 } else { 1 };
            assert_eq!(c, &CycloNumber::from_int(expect));
        }
        assert!(reduced_norm(&w, &GAMatrix::identity(&g, 3)).unwrap().is_one());
    }

    #[test]
    fn free_module_basics() {
        let w = alg("s3");
        let module = GAModule::free(&w, 2);
        let b: Vec<ModuleElement> = (0..2).map(|k| module.free_basis(k)).collect();
        let x = wedge(&module, &b);
        let duals: Vec<ModHom> = (0..2).map(|k| ModHom::dual_basis(&module, k).unwrap()).collect();
        assert!(evaluation_image(&x, &duals).unwrap().is_one());
        assert!(wedge(&module, &[]).0.to_central().unwrap().is_one());
        assert!(wedge(&module, &[b[0].clone(), b[0].clone()]).0.is_zero());
        assert!(dual_wedge(&module, &[duals[1].clone(), duals[1].clone()]).0.is_zero());
        assert!(rubin_membership(&x, &[], 5).unwrap());
        assert!(!rubin_membership(&WedgeElement(x.0.scale(&CentralElement::constant(w.table(), CycloNumber::rational(ratio(1, 5))))), &[], 5).unwrap());
        assert_eq!(rubin_membership(&x, &[], 3), Err(GalgError::BadPrime(3)));
    }

    #[test]
    fn endomorphism_scales_wedge_by_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for name in ["s3", "q8"] {
            let w = alg(name);
            let g = w.group().clone();
            for r in 1..=2 {
                let module = GAModule::free(&w, r);
                let phi = GAMatrix::random_integral(&g, r, r, 2, &mut rng);
                let b: Vec<ModuleElement> = (0..r).map(|k| module.free_basis(k)).collect();
                let lhs = wedge(&module, &rows_as_elements(&module, &phi));
                let rhs = wedge(&module, &b).0.scale(&reduced_norm(&w, &phi).unwrap());
                assert_eq!(lhs.0, rhs);
            }
        }
    }

    #[test]
    fn gram_identity_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let w = alg("s3");
        let g = w.group().clone();
        let module = GAModule::free(&w, 3);
        for r in 1..=2 {
            let ms: Vec<ModuleElement> =
                (0..r).map(|_| module.free_element(&(0..3).map(|_| GAElement::random_integral(&g, 2, &mut rng)).collect::<Vec<_>>())).collect();
            let phis: Vec<ModHom> =
                (0..r).map(|_| ModHom::free(&module, (0..3).map(|_| GAElement::random_integral(&g, 2, &mut rng)).collect()).unwrap()).collect();
            let lhs = evaluation_image(&wedge(&module, &ms), &phis).unwrap();
            let gram = gram_matrix(&module, &phis, &ms).unwrap();
            let one = CycloNumber::one(1);
            let oracle: Vec<CycloNumber> = (0..w.num_blocks()).map(|chi| det_leibniz(&gram.transpose().block(&w, chi), &one)).collect();
            assert_eq!(lhs.coords(), &oracle[..]);
        }
    }

    #[test]
    fn element_construction_cases() {
        let w = alg("c2");
        let g = w.group().clone();
        let phi = GAMatrix::from_integers(&g, &[vec![vec![1, 2], vec![0, 1]], vec![vec![3, 0], vec![1, 1]]]).unwrap();
        // a = 0, I = [d]: the reduced norm
        let x0 = element_construction(&w, &phi, &[0, 1]).unwrap();
        assert_eq!(x0.0.to_central().unwrap(), reduced_norm(&w, &phi).unwrap());
        // I empty: the basis wedge
        let module = GAModule::free(&w, 2);
        let basis: Vec<ModuleElement> = (0..2).map(|k| module.free_basis(k)).collect();
        assert_eq!(element_construction(&w, &phi, &[]).unwrap().0, wedge(&module, &basis).0);
        // d = 2, a = 1: ι_ψ(b_1 ∧ b_2) = ψ(b_1) b_2 − ψ(b_2) b_1 per block
        for i in 0..2 {
            let x = element_construction(&w, &phi, &[i]).unwrap();
            for chi in 0..2 {
                let v = |j: usize| w.rep(chi).apply(phi.entry(j, i))[0][0].clone();
                assert_eq!(x.0.coords()[chi], vec![-v(1), v(0)]);
            }
        }
        assert_eq!(element_construction(&w, &phi, &[2]).unwrap_err(), GalgError::IndexOutOfRange(2));
    }

    #[test]
    fn contraction_matches_paired_wedge() {
        // Θ(ι_Ψ x) = (Ψ ∧ Θ)(x)
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let w = alg("s3");
        let g = w.group().clone();
        let module = GAModule::free(&w, 3);
        let rand_hom = |rng: &mut ChaCha8Rng| ModHom::free(&module, (0..3).map(|_| GAElement::random_integral(&g, 1, rng)).collect()).unwrap();
        let psi = rand_hom(&mut rng);
        let theta = rand_hom(&mut rng);
        let ms: Vec<ModuleElement> =
            (0..2).map(|_| module.free_element(&(0..3).map(|_| GAElement::random_integral(&g, 1, &mut rng)).collect::<Vec<_>>())).collect();
        let x = wedge(&module, &ms);
        let contracted = pair(&dual_wedge(&module, std::slice::from_ref(&psi)), &x).unwrap();
        let lhs = evaluation_image(&contracted, std::slice::from_ref(&theta)).unwrap();
        let rhs = evaluation_image(&x, &[psi, theta]).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn permutation_module_dimensions() {
        let w = alg("s3");
        let g = w.group().clone();
        let t = g.elements().find(|&x| g.element_order(x) == 2).unwrap();
        let h = crate::groups::Subgroup::generated(&g, &[t]);
        let m = GAModule::permutation(&w, &h).unwrap();
        assert_eq!(m.dim(), 3);
        // E[S3/C2] = trivial + 2-dim
        let dims: Vec<usize> = (0..3).map(|chi| m.multiplicity_dim(chi)).collect();
        assert_eq!(dims, vec![1, 0, 1]);
    }
}
