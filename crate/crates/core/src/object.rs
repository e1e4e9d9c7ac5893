//! Finite pointed algebras: pointed sets, groups and abelian groups.
//!
//! Every object has elements `0..size` and element `0` is the basepoint (the
//! identity, for groups). Objects compare structurally: two objects are equal
//! when they live in the same backend and carry the same operation table. The
//! name is a display label only.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{DefaultHasher, Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{CatError, Result};

/// Shared handle to an immutable object.
pub type Obj = Arc<FiniteObject>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BackendKind {
    #[serde(rename = "pset")]
    PointedSet,
    #[serde(rename = "grp")]
    Group,
    #[serde(rename = "ab")]
    AbelianGroup,
}

impl BackendKind {
    pub fn default_size_bound(self) -> usize {
        match self {
            BackendKind::Group => 60,
            BackendKind::AbelianGroup => 64,
            BackendKind::PointedSet => 16,
        }
    }

    pub fn is_group(self) -> bool {
        !matches!(self, BackendKind::PointedSet)
    }

    /// Whether the backend is a normal category. Groups and abelian groups
    /// are; pointed sets are regular but their regular epis need not be
    /// cokernels.
    pub fn is_normal(self) -> bool {
        self.is_group()
    }

    pub fn label(self) -> &'static str {
        match self {
            BackendKind::PointedSet => "pset",
            BackendKind::Group => "grp",
            BackendKind::AbelianGroup => "ab",
        }
    }
}

impl fmt::Display for BackendKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

pub struct FiniteObject {
    name: String,
    kind: BackendKind,
    size: usize,
    /// Row-major `size * size` multiplication table (group backends only).
    table: Option<Vec<usize>>,
    inverse: Option<Vec<usize>>,
    fingerprint: u64,
}

impl FiniteObject {
    pub fn pointed_set(name: impl Into<String>, size: usize) -> Result<Obj> {
        if size == 0 {
            return Err(CatError::InvalidObject(
                "a pointed set needs at least its basepoint".into(),
            ));
        }
        Ok(Self::assemble(name.into(), BackendKind::PointedSet, size, None, None))
    }

    /// The one-element object of a backend.
    pub fn zero(kind: BackendKind) -> Obj {
        let table = kind.is_group().then(|| vec![0]);
        let inverse = kind.is_group().then(|| vec![0]);
        Self::assemble("0".into(), kind, 1, table, inverse)
    }

    /// Builds a group from a full Cayley table, validating the group axioms.
    /// Element 0 must be the identity.
    pub fn from_cayley(
        name: impl Into<String>,
        kind: BackendKind,
        cayley: &[Vec<usize>],
    ) -> Result<Obj> {
        let name = name.into();
        if !kind.is_group() {
            return Err(CatError::InvalidObject(format!(
                "`{name}`: a Cayley table needs a group backend"
            )));
        }
        let n = cayley.len();
        if n == 0 {
            return Err(CatError::InvalidObject(format!("`{name}`: empty table")));
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, row) in cayley.iter().enumerate() {
            if row.len() != n {
                return Err(CatError::InvalidObject(format!(
                    "`{name}`: row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for &v in row {
                if v >= n {
                    return Err(CatError::InvalidObject(format!(
                        "`{name}`: entry {v} out of range in row {i}"
                    )));
                }
            }
            table.extend_from_slice(row);
        }
        for a in 0..n {
            if table[a] != a || table[a * n] != a {
                return Err(CatError::InvalidObject(format!(
                    "`{name}`: element 0 is not a two-sided identity"
                )));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a * n + b];
                for c in 0..n {
                    if table[ab * n + c] != table[a * n + table[b * n + c]] {
                        return Err(CatError::InvalidObject(format!(
                            "`{name}`: not associative at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        let mut inverse = vec![usize::MAX; n];
        for a in 0..n {
            for b in 0..n {
                if table[a * n + b] == 0 && table[b * n + a] == 0 {
                    inverse[a] = b;
                    break;
                }
            }
            if inverse[a] == usize::MAX {
                return Err(CatError::InvalidObject(format!(
                    "`{name}`: element {a} has no inverse"
                )));
            }
        }
        let obj = Self::assemble(name, kind, n, Some(table), Some(inverse));
        if kind == BackendKind::AbelianGroup && !obj.is_commutative() {
            return Err(CatError::InvalidObject(format!(
                "`{}`: abelian backend requires a commutative table",
                obj.name
            )));
        }
        Ok(obj)
    }

    /// Builds the group generated by `gens` inside an ambient monoid whose
    /// multiplication is `mul`. Elements are sorted by `Ord`, so the
    /// identity must be the smallest element for it to become element 0.
    pub fn from_generators<T, F>(
        name: impl Into<String>,
        kind: BackendKind,
        identity: T,
        gens: &[T],
        mul: F,
        limit: usize,
    ) -> Result<Obj>
    where
        T: Ord + Clone,
        F: Fn(&T, &T) -> T,
    {
        let name = name.into();
        let mut seen: BTreeSet<T> = BTreeSet::new();
        seen.insert(identity.clone());
        let mut frontier = vec![identity.clone()];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = mul(&x, g);
                if seen.insert(y.clone()) {
                    if seen.len() > limit {
                        return Err(CatError::BoundExceeded {
                            name,
                            size: seen.len(),
                            bound: limit,
                        });
                    }
                    frontier.push(y);
                }
            }
        }
        let elems: Vec<T> = seen.into_iter().collect();
        if elems[0] != identity {
            return Err(CatError::InvalidObject(format!(
                "`{name}`: identity must be the smallest element in the canonical order"
            )));
        }
        let index: BTreeMap<&T, usize> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let n = elems.len();
        let mut rows = vec![vec![0usize; n]; n];
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate() {
                let c = mul(a, b);
                rows[i][j] = *index.get(&c).ok_or_else(|| {
                    CatError::InvalidObject(format!("`{name}`: generators do not close"))
                })?;
            }
        }
        Self::from_cayley(name, kind, &rows)
    }

    /// Permutation group on `0..degree`; permutations compose as functions,
    /// `(p * q)(i) = p(q(i))`.
    pub fn from_permutations(
        name: impl Into<String>,
        kind: BackendKind,
        degree: usize,
        gens: &[Vec<usize>],
        limit: usize,
    ) -> Result<Obj> {
        let name = name.into();
        for g in gens {
            let mut sorted = g.clone();
            sorted.sort_unstable();
            if sorted != (0..degree).collect::<Vec<_>>() {
                return Err(CatError::InvalidObject(format!(
                    "`{name}`: {g:?} is not a permutation of 0..{degree}"
                )));
            }
        }
        let identity: Vec<usize> = (0..degree).collect();
        Self::from_generators(
            name,
            kind,
            identity,
            gens,
            |p, q| q.iter().map(|&i| p[i]).collect(),
            limit,
        )
    }

    pub fn cyclic(name: impl Into<String>, kind: BackendKind, n: usize) -> Result<Obj> {
        if n == 0 {
            return Err(CatError::InvalidObject("cyclic group of order 0".into()));
        }
        let rows: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_cayley(name, kind, &rows)
    }

    /// Direct product with pairs ordered lexicographically.
    pub fn direct_product(name: impl Into<String>, a: &Obj, b: &Obj) -> Result<Obj> {
        if a.kind != b.kind {
            return Err(CatError::BackendMismatch {
                left: a.kind,
                right: b.kind,
            });
        }
        let (n, m) = (a.size, b.size);
        let size = n * m;
        let name = name.into();
        if !a.kind.is_group() {
            return Ok(Self::assemble(name, a.kind, size, None, None));
        }
        let mut table = Vec::with_capacity(size * size);
        for x in 0..size {
            for y in 0..size {
                table.push(a.op(x / m, y / m) * m + b.op(x % m, y % m));
            }
        }
        let inverse = (0..size).map(|x| a.inv(x / m) * m + b.inv(x % m)).collect();
        Ok(Self::assemble(name, a.kind, size, Some(table), Some(inverse)))
    }

    /// Builds an object from a trusted table (constructed by limit or
    /// quotient machinery, which preserves the axioms).
    pub(crate) fn assemble(
        name: String,
        kind: BackendKind,
        size: usize,
        table: Option<Vec<usize>>,
        inverse: Option<Vec<usize>>,
    ) -> Obj {
        let mut h = DefaultHasher::new();
        kind.hash(&mut h);
        size.hash(&mut h);
        table.hash(&mut h);
        let fingerprint = h.finish();
        Arc::new(FiniteObject {
            name,
            kind,
            size,
            table,
            inverse,
            fingerprint,
        })
    }

    /// The same structure under a different display name.
    pub fn renamed(&self, name: impl Into<String>) -> Obj {
        Arc::new(FiniteObject {
            name: name.into(),
            kind: self.kind,
            size: self.size,
            table: self.table.clone(),
            inverse: self.inverse.clone(),
            fingerprint: self.fingerprint,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> BackendKind {
        self.kind
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn basepoint(&self) -> usize {
        0
    }

    /// `0 = X` in the sense of the zero object: a single element.
    pub fn is_zero(&self) -> bool {
        self.size == 1
    }

    pub fn is_group(&self) -> bool {
        self.table.is_some()
    }

    #[inline]
    pub fn op(&self, a: usize, b: usize) -> usize {
        let t = self.table.as_ref().expect("op on a pointed set");
        t[a * self.size + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse.as_ref().expect("inverse on a pointed set")[a]
    }

    pub fn table(&self) -> Option<&[usize]> {
        self.table.as_deref()
    }

    pub fn cayley_rows(&self) -> Option<Vec<Vec<usize>>> {
        self.table
            .as_ref()
            .map(|t| t.chunks(self.size).map(|r| r.to_vec()).collect())
    }

    pub fn is_commutative(&self) -> bool {
        match &self.table {
            None => true,
            Some(_) => (0..self.size)
                .all(|a| (0..a).all(|b| self.op(a, b) == self.op(b, a))),
        }
    }

    pub fn element_order(&self, x: usize) -> usize {
        if !self.is_group() {
            return 1;
        }
        let mut k = 1;
        let mut y = x;
        while y != 0 {
            y = self.op(y, x);
            k += 1;
        }
        k
    }
}

impl PartialEq for FiniteObject {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self, other)
            || (self.fingerprint == other.fingerprint
                && self.kind == other.kind
                && self.size == other.size
                && self.table == other.table)
    }
}

impl Eq for FiniteObject {}

impl Hash for FiniteObject {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.fingerprint.hash(state);
    }
}

impl fmt::Debug for FiniteObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{} {}]", self.name, self.kind, self.size)
    }
}

impl fmt::Display for FiniteObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// JSON view of an object used in exports.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ObjectView {
    pub name: String,
    pub kind: BackendKind,
    pub size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cayley: Option<Vec<Vec<usize>>>,
}

impl From<&FiniteObject> for ObjectView {
    fn from(o: &FiniteObject) -> Self {
        ObjectView {
            name: o.name.clone(),
            kind: o.kind,
            size: o.size,
            cayley: o.cayley_rows(),
        }
    }
}
