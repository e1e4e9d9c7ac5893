//! Canonical subobjects: element subsets closed under the operations,
//! together with the induced object and its inclusion.
//!
//! Two monos into the same object represent the same subobject exactly when
//! their images coincide, so subobject equality is set equality here.

use std::collections::HashSet;
use std::sync::Arc;

use crate::elemset::{canonical_cmp, ElemSet};
use crate::error::{CatError, Result};
use crate::morphism::Morphism;
use crate::object::{FiniteObject, Obj};

/// Subgroup generated by `gens` (closure under right multiplication).
pub fn generated(g: &Obj, gens: &[usize]) -> ElemSet {
    let mut set = ElemSet::from_iter_in(g.size(), [0]);
    if !g.is_group() {
        for &x in gens {
            set.insert(x);
        }
        return set;
    }
    let mut stack = vec![0];
    while let Some(x) = stack.pop() {
        for &s in gens {
            let y = g.op(x, s);
            if set.insert(y) {
                stack.push(y);
            }
        }
    }
    set
}

pub fn is_closed(obj: &Obj, elems: &ElemSet) -> bool {
    if !elems.contains(0) {
        return false;
    }
    if !obj.is_group() {
        return true;
    }
    let members = elems.to_vec();
    members
        .iter()
        .all(|&a| members.iter().all(|&b| elems.contains(obj.op(a, b))))
}

/// Closed under conjugation (group backends); every subobject of a pointed
/// set is a kernel.
pub fn is_normal_subset(obj: &Obj, elems: &ElemSet) -> bool {
    if !obj.is_group() {
        return true;
    }
    let members = elems.to_vec();
    (0..obj.size()).all(|g| {
        let gi = obj.inv(g);
        members
            .iter()
            .all(|&n| elems.contains(obj.op(obj.op(g, n), gi)))
    })
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subobject {
    parent: Obj,
    elems: ElemSet,
    object: Obj,
    inclusion: Morphism,
}

impl Subobject {
    pub fn new(parent: &Obj, elems: ElemSet) -> Result<Self> {
        if elems.universe() != parent.size() {
            return Err(CatError::InvalidObject("subset over the wrong universe".into()));
        }
        if !is_closed(parent, &elems) {
            return Err(CatError::InvalidObject(format!(
                "{:?} is not closed in `{}`",
                elems,
                parent.name()
            )));
        }
        Ok(Self::new_trusted(parent, elems))
    }

    pub(crate) fn new_trusted(parent: &Obj, elems: ElemSet) -> Self {
        let members = elems.to_vec();
        let k = members.len();
        let object = if k == parent.size() {
            Arc::clone(parent)
        } else {
            let mut pos = vec![usize::MAX; parent.size()];
            for (i, &e) in members.iter().enumerate() {
                pos[e] = i;
            }
            let name = if k == 1 {
                "0".to_string()
            } else {
                format!("{}{:?}", parent.name(), members)
            };
            let (table, inverse) = if parent.is_group() {
                let mut t = Vec::with_capacity(k * k);
                for &a in &members {
                    for &b in &members {
                        t.push(pos[parent.op(a, b)]);
                    }
                }
                let inv = members.iter().map(|&a| pos[parent.inv(a)]).collect();
                (Some(t), Some(inv))
            } else {
                (None, None)
            };
            FiniteObject::assemble(name, parent.kind(), k, table, inverse)
        };
        let inclusion = Morphism::new_unchecked(Arc::clone(&object), Arc::clone(parent), members);
        Subobject {
            parent: Arc::clone(parent),
            elems,
            object,
            inclusion,
        }
    }

    pub fn whole(parent: &Obj) -> Self {
        Self::new_trusted(parent, ElemSet::full(parent.size()))
    }

    pub fn trivial(parent: &Obj) -> Self {
        Self::new_trusted(parent, ElemSet::from_iter_in(parent.size(), [0]))
    }

    /// The image of a morphism, as a subobject of its codomain.
    pub fn image_of(f: &Morphism) -> Self {
        Self::new_trusted(f.cod(), f.image())
    }

    pub fn parent(&self) -> &Obj {
        &self.parent
    }

    pub fn elems(&self) -> &ElemSet {
        &self.elems
    }

    pub fn object(&self) -> &Obj {
        &self.object
    }

    pub fn inclusion(&self) -> &Morphism {
        &self.inclusion
    }

    pub fn size(&self) -> usize {
        self.object.size()
    }

    pub fn is_zero(&self) -> bool {
        self.object.is_zero()
    }

    pub fn is_whole(&self) -> bool {
        self.object.size() == self.parent.size()
    }

    /// Replaces the induced object by a structurally equal one (for display
    /// names from a registry).
    pub fn with_object(mut self, object: &Obj) -> Self {
        debug_assert!(**object == *self.object);
        self.inclusion = self.inclusion.with_objects(object, &self.parent);
        self.object = Arc::clone(object);
        self
    }

    /// Factors `f: X → parent` through the inclusion when its image lies in
    /// this subobject.
    pub fn corestrict(&self, f: &Morphism) -> Option<Morphism> {
        if f.cod() != &self.parent || !f.image().is_subset(&self.elems) {
            return None;
        }
        let members = self.inclusion.table();
        let mut pos = vec![usize::MAX; self.parent.size()];
        for (i, &e) in members.iter().enumerate() {
            pos[e] = i;
        }
        Some(Morphism::new_unchecked(
            Arc::clone(f.dom()),
            Arc::clone(&self.object),
            f.table().iter().map(|&y| pos[y]).collect(),
        ))
    }
}

impl std::fmt::Debug for Subobject {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}≤{}", self.elems, self.parent.name())
    }
}

/// All closed element subsets of `obj` in canonical order (size, then
/// lexicographic).
pub fn subobject_sets(obj: &Obj) -> Vec<ElemSet> {
    let n = obj.size();
    let mut out: Vec<ElemSet> = if !obj.is_group() {
        let rest = n - 1;
        (0u64..1u64 << rest)
            .map(|mask| {
                ElemSet::from_iter_in(
                    n,
                    std::iter::once(0).chain((0..rest).filter(|i| mask >> i & 1 == 1).map(|i| i + 1)),
                )
            })
            .collect()
    } else {
        subgroup_sets(obj)
    };
    out.sort_by(canonical_cmp);
    out
}

fn subgroup_sets(g: &Obj) -> Vec<ElemSet> {
    let n = g.size();
    let mut cyclic: Vec<(usize, ElemSet)> = Vec::new();
    let mut seen_cyclic = HashSet::new();
    for x in 1..n {
        let c = generated(g, &[x]);
        if seen_cyclic.insert(c.clone()) {
            cyclic.push((x, c));
        }
    }
    let trivial = ElemSet::from_iter_in(n, [0]);
    let mut all: Vec<(Vec<usize>, ElemSet)> = vec![(Vec::new(), trivial.clone())];
    let mut seen: HashSet<ElemSet> = HashSet::from([trivial]);
    let mut i = 0;
    while i < all.len() {
        let (gens, h) = all[i].clone();
        for (x, c) in &cyclic {
            if c.is_subset(&h) {
                continue;
            }
            let mut more = gens.clone();
            more.push(*x);
            let j = generated(g, &more);
            if seen.insert(j.clone()) {
                all.push((more, j));
            }
        }
        i += 1;
    }
    all.into_iter().map(|(_, s)| s).collect()
}

pub fn subobjects(obj: &Obj) -> Vec<Subobject> {
    subobject_sets(obj)
        .into_iter()
        .map(|s| Subobject::new_trusted(obj, s))
        .collect()
}

/// Subobjects whose inclusion is a normal monomorphism, by conjugation
/// closure (independent of the congruence machinery).
pub fn normal_subobjects(obj: &Obj) -> Vec<Subobject> {
    subobject_sets(obj)
        .into_iter()
        .filter(|s| is_normal_subset(obj, s))
        .map(|s| Subobject::new_trusted(obj, s))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::object::BackendKind;

    fn s3() -> Obj {
        FiniteObject::from_permutations(
            "S3",
            BackendKind::Group,
            3,
            &[vec![1, 0, 2], vec![1, 2, 0]],
            60,
        )
        .unwrap()
    }

    #[test]
    fn s3_subgroup_lattice() {
        let subs = subobjects(&s3());
        let sizes: Vec<usize> = subs.iter().map(|s| s.size()).collect();
        assert_eq!(sizes, vec![1, 2, 2, 2, 3, 6]);
        let normal: Vec<usize> = normal_subobjects(&s3()).iter().map(|s| s.size()).collect();
        assert_eq!(normal, vec![1, 3, 6]);
    }

    #[test]
    fn s4_has_thirty_subgroups() {
        let s4 = FiniteObject::from_permutations(
            "S4",
            BackendKind::Group,
            4,
            &[vec![1, 0, 2, 3], vec![1, 2, 3, 0]],
            60,
        )
        .unwrap();
        assert_eq!(subobjects(&s4).len(), 30);
        assert_eq!(normal_subobjects(&s4).len(), 4);
    }

    #[test]
    fn pointed_subsets() {
        let p3 = FiniteObject::pointed_set("P3", 3).unwrap();
        assert_eq!(subobjects(&p3).len(), 4);
    }

    #[test]
    fn induced_inclusion_is_a_homomorphism() {
        let g = s3();
        for sub in subobjects(&g) {
            let inc = sub.inclusion();
            let checked = Morphism::new(
                Arc::clone(inc.dom()),
                Arc::clone(inc.cod()),
                inc.table().to_vec(),
            );
            assert!(checked.is_ok());
            assert!(inc.is_mono());
        }
    }

    #[test]
    fn rejects_unclosed_subsets() {
        let g = s3();
        let err = Subobject::new(&g, ElemSet::from_iter_in(6, [0, 1, 2]));
        assert!(err.is_err());
    }
}
