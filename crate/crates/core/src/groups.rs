//! Finite groups given by multiplication tables, with classes, subgroups, quotients and
//! homomorphisms.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("group order {order} exceeds the cap {cap} (set EQK_MAX_GROUP_ORDER to raise it)")]
    TooLarge { order: usize, cap: usize },
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("map is not surjective")]
    NotSurjection,
    #[error("inner product {0} is not an integer")]
    NotIntegral(String),
    #[error("unknown group {0:?}")]
    UnknownGroup(String),
}

pub const DEFAULT_MAX_ORDER: usize = 64;

/// Order cap for tabulated groups, overridable through `EQK_MAX_GROUP_ORDER`.
pub fn max_group_order() -> usize {
    std::env::var("EQK_MAX_GROUP_ORDER").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_MAX_ORDER)
}

pub struct FiniteGroup {
    name: String,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
    labels: Vec<String>,
    orders: Vec<usize>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name, self.order())
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.table == other.table
    }
}

pub type Group = Arc<FiniteGroup>;

impl FiniteGroup {
    /// Validates a multiplication table (`table[a][b] = a*b`).
    pub fn from_table(table: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Group, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::NotAGroup("empty table".into()));
        }
        let cap = max_group_order();
        if n > cap {
            return Err(GroupError::TooLarge { order: n, cap });
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::NotAGroup(format!("row {a} has length {}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(GroupError::NotAGroup(format!("closure: entry {bad} out of range in row {a}")));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| GroupError::NotAGroup("identity: no two-sided identity".into()))?;
        let mut inverses = vec![0; n];
        for a in 0..n {
            inverses[a] = (0..n)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| GroupError::NotAGroup(format!("inverses: element {a} has no inverse")))?;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(GroupError::NotAGroup(format!("associativity fails at ({a},{b},{c})")));
                    }
                }
            }
        }
        let labels = match labels {
            Some(l) if l.len() == n => l,
            Some(l) => return Err(GroupError::NotAGroup(format!("{} labels for {n} elements", l.len()))),
            None => (0..n).map(|i| format!("g{i}")).collect(),
        };
        Ok(Arc::new(Self::finish(format!("table{n}"), table, identity, inverses, labels)))
    }

    fn finish(name: String, table: Vec<Vec<usize>>, identity: usize, inverses: Vec<usize>, labels: Vec<String>) -> Self {
        let n = table.len();
        let orders = (0..n)
            .map(|a| {
                let mut x = a;
                let mut k = 1;
                while x != identity {
                    x = table[x][a];
                    k += 1;
                }
                k
            })
            .collect();
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for a in 0..n {
            if class_of[a] != usize::MAX {
                continue;
            }
            let set: BTreeSet<usize> = (0..n).map(|g| table[table[g][a]][inverses[g]]).collect();
            let id = classes.len();
            for &x in &set {
                class_of[x] = id;
            }
            classes.push(set.into_iter().collect());
        }
        classes.sort_by_key(|c| (c.len(), c[0]));
        // identity class first regardless of element numbering
        if let Some(pos) = classes.iter().position(|c| c == &vec![identity]) {
            let c = classes.remove(pos);
            classes.insert(0, c);
        }
        for (i, c) in classes.iter().enumerate() {
            for &x in c {
                class_of[x] = i;
            }
        }
        FiniteGroup { name, table, identity, inverses, labels, orders, classes, class_of }
    }

    /// Closes a set of permutations of `{0..m}` under composition. Elements are sorted
    /// lexicographically, so the identity has index 0, and `(g*h)(x) = g(h(x))`.
    pub fn from_permutations(gens: &[Vec<usize>]) -> Result<Group, GroupError> {
        let m = gens.first().map_or(0, Vec::len);
        for g in gens {
            let mut seen = vec![false; m];
            if g.len() != m || g.iter().any(|&x| x >= m || std::mem::replace(&mut seen[x], true)) {
                return Err(GroupError::NotAGroup(format!("generator {g:?} is not a permutation of {m} points")));
            }
        }
        let cap = max_group_order();
        let id: Vec<usize> = (0..m).collect();
        let mut elements: BTreeSet<Vec<usize>> = BTreeSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y: Vec<usize> = (0..m).map(|i| g[x[i]]).collect();
                if elements.insert(y.clone()) {
                    if elements.len() > cap {
                        return Err(GroupError::TooLarge { order: elements.len(), cap });
                    }
                    queue.push_back(y);
                }
            }
        }
        let elements: Vec<Vec<usize>> = elements.into_iter().collect();
        let index: HashMap<&Vec<usize>, usize> = elements.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let n = elements.len();
        let table: Vec<Vec<usize>> = elements
            .iter()
            .map(|g| {
                elements
                    .iter()
                    .map(|h| {
                        let gh: Vec<usize> = (0..m).map(|i| g[h[i]]).collect();
                        index[&gh]
                    })
                    .collect()
            })
            .collect();
        let inverses = (0..n).map(|a| (0..n).find(|&b| table[a][b] == 0).unwrap()).collect();
        let labels = elements.iter().map(|p| cycle_notation(p)).collect();
        Ok(Arc::new(Self::finish(format!("perm{n}"), table, 0, inverses, labels)))
    }

    /// The abelian group Z/n1 x ... x Z/nk, elements in mixed-radix order (first factor
    /// varies slowest).
    pub fn abelian(invariants: &[usize]) -> Result<Group, GroupError> {
        if invariants.contains(&0) {
            return Err(GroupError::NotAGroup("invariant factor 0".into()));
        }
        let n: usize = invariants.iter().product();
        let cap = max_group_order();
        if n > cap {
            return Err(GroupError::TooLarge { order: n, cap });
        }
        let digits = |mut x: usize| {
            let mut d = vec![0; invariants.len()];
            for (i, &m) in invariants.iter().enumerate().rev() {
                d[i] = x % m;
                x /= m;
            }
            d
        };
        let index = |d: &[usize]| d.iter().zip(invariants).fold(0, |acc, (&x, &m)| acc * m + x);
        let table: Vec<Vec<usize>> = (0..n)
            .map(|a| {
                let da = digits(a);
                (0..n)
                    .map(|b| {
                        let s: Vec<usize> =
                            digits(b).iter().zip(&da).zip(invariants).map(|((x, y), m)| (x + y) % m).collect();
                        index(&s)
                    })
                    .collect()
            })
            .collect();
        let inverses = (0..n)
            .map(|a| index(&digits(a).iter().zip(invariants).map(|(x, m)| (m - x) % m).collect::<Vec<_>>()))
            .collect();
        let labels = (0..n)
            .map(|a| {
                let d = digits(a);
                if d.len() == 1 {
                    d[0].to_string()
                } else {
                    format!("({})", d.iter().map(usize::to_string).collect::<Vec<_>>().join(","))
                }
            })
            .collect();
        let name = format!("abelian{invariants:?}");
        Ok(Arc::new(Self::finish(name, table, 0, inverses, labels)))
    }

    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<Group, GroupError> {
        let (n, m) = (g.order(), h.order());
        let cap = max_group_order();
        if n * m > cap {
            return Err(GroupError::TooLarge { order: n * m, cap });
        }
        let table = (0..n * m)
            .map(|a| (0..n * m).map(|b| g.mul(a / m, b / m) * m + h.mul(a % m, b % m)).collect())
            .collect();
        let inverses = (0..n * m).map(|a| g.inv(a / m) * m + h.inv(a % m)).collect();
        let labels = (0..n * m).map(|a| format!("({},{})", g.labels[a / m], h.labels[a % m])).collect();
        let identity = g.identity * m + h.identity;
        Ok(Arc::new(Self::finish(format!("{}x{}", g.name, h.name), table, identity, inverses, labels)))
    }

    pub fn with_name(self: Group, name: &str) -> Group {
        let mut g = Arc::try_unwrap(self).unwrap_or_else(|a| a.cloned());
        g.name = name.to_string();
        Arc::new(g)
    }

    fn cloned(&self) -> Self {
        FiniteGroup {
            name: self.name.clone(),
            table: self.table.clone(),
            identity: self.identity,
            inverses: self.inverses.clone(),
            labels: self.labels.clone(),
            orders: self.orders.clone(),
            classes: self.classes.clone(),
            class_of: self.class_of.clone(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn order(&self) -> usize {
        self.table.len()
    }
    pub fn identity(&self) -> usize {
        self.identity
    }
    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }
    pub fn pow(&self, a: usize, k: i64) -> usize {
        let o = self.orders[a] as i64;
        let mut x = self.identity;
        for _ in 0..k.rem_euclid(o) {
            x = self.table[x][a];
        }
        x
    }
    pub fn element_order(&self, a: usize) -> usize {
        self.orders[a]
    }
    pub fn exponent(&self) -> usize {
        self.orders.iter().fold(1, |acc, &o| num_integer::lcm(acc, o))
    }
    pub fn conjugate(&self, g: usize, a: usize) -> usize {
        self.mul(self.mul(g, a), self.inv(g))
    }
    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.table[a][b] == self.table[b][a]))
    }
    /// Conjugacy classes sorted by (size, smallest element), identity class first.
    pub fn conjugacy_classes(&self) -> &[Vec<usize>] {
        &self.classes
    }
    pub fn class_of(&self, a: usize) -> usize {
        self.class_of[a]
    }
    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }
    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn element_by_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// Cycle notation with 1-based points, `()` for the identity.
fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut cycle = vec![start + 1];
        seen[start] = true;
        let mut x = p[start];
        while x != start {
            seen[x] = true;
            cycle.push(x + 1);
            x = p[x];
        }
        out.push('(');
        out.push_str(&cycle.iter().map(usize::to_string).collect::<Vec<_>>().join(" "));
        out.push(')');
    }
    if out.is_empty() {
        "()".into()
    } else {
        out
    }
}

#[derive(Clone, Debug)]
pub struct Subgroup {
    parent: Group,
    elements: Vec<usize>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.parent, &other.parent) && self.elements == other.elements
    }
}

impl Subgroup {
    pub fn new(parent: &Group, elements: impl IntoIterator<Item = usize>) -> Result<Self, GroupError> {
        let set: BTreeSet<usize> = elements.into_iter().collect();
        let n = parent.order();
        if set.iter().any(|&x| x >= n) {
            return Err(GroupError::NotSubgroup("element out of range".into()));
        }
        if !set.contains(&parent.identity()) {
            return Err(GroupError::NotSubgroup("missing identity".into()));
        }
        for &a in &set {
            if !set.contains(&parent.inv(a)) {
                return Err(GroupError::NotSubgroup(format!("not closed under inverse at {a}")));
            }
            for &b in &set {
                if !set.contains(&parent.mul(a, b)) {
                    return Err(GroupError::NotSubgroup(format!("not closed at ({a},{b})")));
                }
            }
        }
        Ok(Subgroup { parent: parent.clone(), elements: set.into_iter().collect() })
    }

    /// The subgroup generated by `gens`.
    pub fn generated(parent: &Group, gens: &[usize]) -> Self {
        let mut set = BTreeSet::from([parent.identity()]);
        let mut queue: VecDeque<usize> = VecDeque::from([parent.identity()]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = parent.mul(x, g);
                if set.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        Subgroup { parent: parent.clone(), elements: set.into_iter().collect() }
    }

    pub fn trivial(parent: &Group) -> Self {
        Subgroup { parent: parent.clone(), elements: vec![parent.identity()] }
    }

    pub fn whole(parent: &Group) -> Self {
        Subgroup { parent: parent.clone(), elements: parent.elements().collect() }
    }

    pub fn parent(&self) -> &Group {
        &self.parent
    }
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }
    pub fn order(&self) -> usize {
        self.elements.len()
    }
    pub fn contains(&self, a: usize) -> bool {
        self.elements.binary_search(&a).is_ok()
    }
    pub fn index(&self) -> usize {
        self.parent.order() / self.order()
    }

    pub fn is_normal(&self) -> bool {
        let g = &self.parent;
        self.elements.iter().all(|&h| g.elements().all(|x| self.contains(g.conjugate(x, h))))
    }

    /// Left coset representatives, each the smallest element of its coset, ascending.
    pub fn left_transversal(&self) -> Vec<usize> {
        let g = &self.parent;
        let mut covered = vec![false; g.order()];
        let mut reps = Vec::new();
        for t in g.elements() {
            if covered[t] {
                continue;
            }
            reps.push(t);
            for &h in &self.elements {
                covered[g.mul(t, h)] = true;
            }
        }
        reps
    }

    /// The subgroup as an abstract group (elements in the sorted order of `elements()`),
    /// with its inclusion into the parent.
    pub fn as_group(&self) -> Result<(Group, GroupHom), GroupError> {
        let pos: HashMap<usize, usize> = self.elements.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let table = self
            .elements
            .iter()
            .map(|&a| self.elements.iter().map(|&b| pos[&self.parent.mul(a, b)]).collect())
            .collect();
        let labels = self.elements.iter().map(|&a| self.parent.labels()[a].clone()).collect();
        let h = FiniteGroup::from_table(table, Some(labels))?;
        let inc = GroupHom::new(&h, &self.parent, self.elements.clone())?;
        Ok((h, inc))
    }

    /// Quotient by a normal subgroup. Cosets are numbered by their smallest element.
    pub fn quotient(&self) -> Result<(Group, GroupHom), GroupError> {
        if !self.is_normal() {
            return Err(GroupError::NotNormal);
        }
        let g = &self.parent;
        let reps = self.left_transversal();
        let mut coset_of = vec![0; g.order()];
        for (i, &t) in reps.iter().enumerate() {
            for &h in &self.elements {
                coset_of[g.mul(t, h)] = i;
            }
        }
        let table = reps.iter().map(|&a| reps.iter().map(|&b| coset_of[g.mul(a, b)]).collect()).collect();
        let labels = reps.iter().map(|&t| format!("{}N", g.labels()[t])).collect();
        let q = FiniteGroup::from_table(table, Some(labels))?;
        let hom = GroupHom::new(g, &q, coset_of)?;
        Ok((q, hom))
    }
}

/// Every subgroup of `g`, sorted by order and then by element list.
pub fn all_subgroups(g: &Group) -> Vec<Subgroup> {
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut frontier: Vec<Vec<usize>> = Vec::new();
    for a in g.elements() {
        let s = Subgroup::generated(g, &[a]).elements;
        if found.insert(s.clone()) {
            frontier.push(s);
        }
    }
    let cyclic: Vec<Vec<usize>> = found.iter().cloned().collect();
    while let Some(s) = frontier.pop() {
        for c in &cyclic {
            if c.iter().all(|x| s.binary_search(x).is_ok()) {
                continue;
            }
            let gens: Vec<usize> = s.iter().chain(c.iter()).copied().collect();
            let joined = Subgroup::generated(g, &gens).elements;
            if found.insert(joined.clone()) {
                frontier.push(joined);
            }
        }
    }
    let mut subs: Vec<Subgroup> = found.into_iter().map(|e| Subgroup { parent: g.clone(), elements: e }).collect();
    subs.sort_by(|a, b| (a.order(), &a.elements).cmp(&(b.order(), &b.elements)));
    subs
}

#[derive(Clone, Debug)]
pub struct GroupHom {
    source: Group,
    target: Group,
    images: Vec<usize>,
}

impl GroupHom {
    pub fn new(source: &Group, target: &Group, images: Vec<usize>) -> Result<Self, GroupError> {
        if images.len() != source.order() || images.iter().any(|&x| x >= target.order()) {
            return Err(GroupError::NotHomomorphism("image vector has the wrong shape".into()));
        }
        for a in source.elements() {
            for b in source.elements() {
                if images[source.mul(a, b)] != target.mul(images[a], images[b]) {
                    return Err(GroupError::NotHomomorphism(format!("fails at ({a},{b})")));
                }
            }
        }
        Ok(GroupHom { source: source.clone(), target: target.clone(), images })
    }

    pub fn source(&self) -> &Group {
        &self.source
    }
    pub fn target(&self) -> &Group {
        &self.target
    }
    pub fn images(&self) -> &[usize] {
        &self.images
    }
    pub fn apply(&self, a: usize) -> usize {
        self.images[a]
    }
    pub fn kernel(&self) -> Subgroup {
        let e = self.target.identity();
        Subgroup {
            parent: self.source.clone(),
            elements: self.source.elements().filter(|&a| self.images[a] == e).collect(),
        }
    }
    pub fn is_injective(&self) -> bool {
        self.kernel().order() == 1
    }
    pub fn is_surjective(&self) -> bool {
        let hit: BTreeSet<usize> = self.images.iter().copied().collect();
        hit.len() == self.target.order()
    }
    pub fn compose(&self, after: &GroupHom) -> Result<GroupHom, GroupError> {
        if !Arc::ptr_eq(&self.target, &after.source) && *self.target != *after.source {
            return Err(GroupError::NotHomomorphism("composition of mismatched maps".into()));
        }
        Ok(GroupHom {
            source: self.source.clone(),
            target: after.target.clone(),
            images: self.images.iter().map(|&x| after.images[x]).collect(),
        })
    }
}

fn cyclic_perm(n: usize) -> Vec<usize> {
    (0..n).map(|i| (i + 1) % n).collect()
}

fn dihedral(n: usize) -> Result<Group, GroupError> {
    let reflection: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
    FiniteGroup::from_permutations(&[cyclic_perm(n), reflection])
}

/// Q8 realized inside SL2(Z/9) and tabulated through its action on (Z/9)^2:
/// i = [[0,-1],[1,0]], j = [[1,4],[4,-1]] satisfy i^2 = j^2 = (ij)^2 = -1.
fn quaternion() -> Result<Group, GroupError> {
    let m = 9i64;
    let act = |mat: [[i64; 2]; 2]| -> Vec<usize> {
        (0..m * m)
            .map(|v| {
                let (x, y) = (v / m, v % m);
                let nx = (mat[0][0] * x + mat[0][1] * y).rem_euclid(m);
                let ny = (mat[1][0] * x + mat[1][1] * y).rem_euclid(m);
                (nx * m + ny) as usize
            })
            .collect()
    };
    FiniteGroup::from_permutations(&[act([[0, -1], [1, 0]]), act([[1, 4], [4, -1]])])
}

/// Built-in groups: c<n>, v4, s3, d4, q8, a4, s4, d5, c2xc4 (plus d<n>, s<n> when small).
pub fn catalog(name: &str) -> Result<Group, GroupError> {
    let unknown = || GroupError::UnknownGroup(name.to_string());
    let g = match name {
        "v4" => FiniteGroup::abelian(&[2, 2])?,
        "c2xc4" => FiniteGroup::abelian(&[2, 4])?,
        "c2xc2xc2" => FiniteGroup::abelian(&[2, 2, 2])?,
        "q8" => quaternion()?,
        "a4" => FiniteGroup::from_permutations(&[vec![1, 2, 0, 3], vec![1, 0, 3, 2]])?,
        _ => {
            let (prefix, rest) = name.split_at(1.min(name.len()));
            let k: usize = rest.parse().map_err(|_| unknown())?;
            match (prefix, k) {
                ("c", k) if k >= 1 => FiniteGroup::abelian(&[k])?,
                ("d", k) if k >= 3 => dihedral(k)?,
                ("s", 1) => FiniteGroup::abelian(&[1])?,
                ("s", k) if k >= 2 => {
                    let mut swap: Vec<usize> = (0..k).collect();
                    swap.swap(0, 1);
                    FiniteGroup::from_permutations(&[swap, cyclic_perm(k)])?
                }
                _ => return Err(unknown()),
            }
        }
    };
    Ok(g.with_name(name))
}

pub const CATALOG_NAMES: &[&str] = &["c2", "c3", "c4", "c6", "v4", "s3", "d4", "q8", "a4", "s4", "d5"];

/// JSON group descriptions: a catalog name, an explicit table, permutation generators or
/// abelian invariant factors.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Catalog { catalog: String },
    Table { order: usize, table: Vec<Vec<usize>>, #[serde(default)] labels: Option<Vec<String>> },
    Perms { perm_gens: Vec<Vec<usize>> },
    Abelian { invariants: Vec<usize> },
}

impl GroupSpec {
    pub fn build(&self) -> Result<Group, GroupError> {
        match self {
            GroupSpec::Catalog { catalog: c } => catalog(c),
            GroupSpec::Table { order, table, labels } => {
                if *order != table.len() {
                    return Err(GroupError::NotAGroup(format!("order {order} but {} rows", table.len())));
                }
                FiniteGroup::from_table(table.clone(), labels.clone())
            }
            GroupSpec::Perms { perm_gens } => FiniteGroup::from_permutations(perm_gens),
            GroupSpec::Abelian { invariants } => FiniteGroup::abelian(invariants),
        }
    }
}

pub fn group_to_json(g: &FiniteGroup) -> serde_json::Value {
    serde_json::json!({ "order": g.order(), "table": g.table(), "labels": g.labels() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_classes(g: &FiniteGroup) -> BTreeSet<Vec<usize>> {
        g.elements()
            .map(|a| {
                let s: BTreeSet<usize> = g.elements().map(|x| g.mul(g.mul(x, a), g.inv(x))).collect();
                s.into_iter().collect()
            })
            .collect()
    }

    #[test]
    fn catalog_orders() {
        let expected = [("c2", 2), ("c3", 3), ("c4", 4), ("c6", 6), ("v4", 4), ("s3", 6), ("d4", 8), ("q8", 8), ("a4", 12), ("s4", 24), ("d5", 10)];
        for (name, n) in expected {
            let g = catalog(name).unwrap();
            assert_eq!(g.order(), n, "{name}");
            let sizes: usize = g.conjugacy_classes().iter().map(Vec::len).sum();
            assert_eq!(sizes, n);
            assert!(g.conjugacy_classes().iter().all(|c| n % c.len() == 0));
            assert_eq!(g.conjugacy_classes()[0], vec![g.identity()]);
            let ours: BTreeSet<Vec<usize>> = g.conjugacy_classes().iter().cloned().collect();
            assert_eq!(ours, brute_classes(&g), "{name}");
        }
    }

    #[test]
    fn quaternion_group() {
        let q = catalog("q8").unwrap();
        assert_eq!(q.exponent(), 4);
        let mut sizes: Vec<usize> = q.conjugacy_classes().iter().map(Vec::len).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 1, 2, 2, 2]);
        // a unique element of order 2
        assert_eq!(q.elements().filter(|&a| q.element_order(a) == 2).count(), 1);
    }

    #[test]
    fn s3_classes_and_klein() {
        let s3 = FiniteGroup::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]]).unwrap();
        assert_eq!(s3.order(), 6);
        let sizes: Vec<usize> = s3.conjugacy_classes().iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![1, 2, 3]);
        let v4 = FiniteGroup::abelian(&[2, 2]).unwrap();
        assert!(v4.is_abelian());
        assert_eq!(v4.num_classes(), 4);
    }

    #[test]
    fn quotients() {
        let s3 = catalog("s3").unwrap();
        let a3 = Subgroup::generated(&s3, &[s3.elements().find(|&a| s3.element_order(a) == 3).unwrap()]);
        let (q, pi) = a3.quotient().unwrap();
        assert_eq!(q.order(), 2);
        assert_eq!(pi.kernel().elements(), a3.elements());
        let (same, _) = Subgroup::trivial(&s3).quotient().unwrap();
        assert_eq!(same.order(), 6);
        let t = s3.elements().find(|&a| s3.element_order(a) == 2).unwrap();
        assert_eq!(Subgroup::generated(&s3, &[t]).quotient().unwrap_err(), GroupError::NotNormal);

        let g = FiniteGroup::abelian(&[4, 2]).unwrap();
        // diagonal C2 generated by (2,1)
        let d = Subgroup::generated(&g, &[2 * 2 + 1]);
        assert_eq!(d.order(), 2);
        let (q, pi) = d.quotient().unwrap();
        assert_eq!(q.order(), 4);
        assert!(q.is_abelian());
        assert!(pi.is_surjective());
    }

    #[test]
    fn not_a_group() {
        let bad = vec![vec![0, 1], vec![1, 1]];
        assert!(matches!(FiniteGroup::from_table(bad, None), Err(GroupError::NotAGroup(_))));
        let nonassoc = vec![vec![0, 1, 2], vec![1, 0, 1], vec![2, 2, 0]];
        assert!(matches!(FiniteGroup::from_table(nonassoc, None), Err(GroupError::NotAGroup(_))));
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(all_subgroups(&catalog("s3").unwrap()).len(), 6);
        assert_eq!(all_subgroups(&catalog("q8").unwrap()).len(), 6);
        assert_eq!(all_subgroups(&catalog("s4").unwrap()).len(), 30);
        assert_eq!(all_subgroups(&catalog("d4").unwrap()).len(), 10);
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(FiniteGroup::abelian(&[100]), Err(GroupError::TooLarge { .. })));
    }

    #[test]
    fn spec_json() {
        let spec: GroupSpec = serde_json::from_str(r#"{"perm_gens": [[1,0,2],[1,2,0]]}"#).unwrap();
        assert_eq!(spec.build().unwrap().order(), 6);
        let spec: GroupSpec = serde_json::from_str(r#"{"order": 2, "table": [[0,1],[1,0]]}"#).unwrap();
        assert_eq!(spec.build().unwrap().order(), 2);
    }
}
