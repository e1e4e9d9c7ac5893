//! Spans `A ←x− X −f→ B` with the left leg in a class `M` of monos, their
//! composition via pullback, equality of the fractions `f x⁻¹` they
//! present, and exhaustive checks of the conditions that make `M` admit a
//! calculus of right fractions.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::backend::Backend;
use crate::error::{CatError, Result};
use crate::monoclass::laws::LawWitness;
use crate::monoclass::{class_subobjects, MonoClass};
use crate::morphism::{compose, Morphism};
use crate::object::Obj;
use crate::subobject::Subobject;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Span {
    left: Morphism,
    right: Morphism,
}

impl Span {
    pub fn new(left: Morphism, right: Morphism) -> Result<Self> {
        if left.dom() != right.dom() {
            return Err(CatError::InvalidMorphism(format!(
                "span legs have different domains `{}` and `{}`",
                left.dom().name(),
                right.dom().name()
            )));
        }
        Ok(Span { left, right })
    }

    /// `(f, 1_A)` for `f: A → B`.
    pub fn of_morphism(f: &Morphism) -> Self {
        Span {
            left: Morphism::identity(f.dom()),
            right: f.clone(),
        }
    }

    pub fn identity(a: &Obj) -> Self {
        Self::of_morphism(&Morphism::identity(a))
    }

    pub fn left(&self) -> &Morphism {
        &self.left
    }

    pub fn right(&self) -> &Morphism {
        &self.right
    }

    pub fn apex(&self) -> &Obj {
        self.left.dom()
    }

    pub fn source(&self) -> &Obj {
        self.left.cod()
    }

    pub fn target(&self) -> &Obj {
        self.right.cod()
    }
}

impl std::fmt::Debug for Span {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({:?}, {:?})", self.right, self.left)
    }
}

impl Serialize for Span {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Span", 2)?;
        st.serialize_field("left", &self.left)?;
        st.serialize_field("right", &self.right)?;
        st.end()
    }
}

/// `(g, y) ∘ (f, x) = (g q, x p)` where `p, q` project from `X ×_B Y`.
pub fn span_compose(s2: &Span, s1: &Span, backend: &Backend) -> Result<Span> {
    if s1.target() != s2.source() {
        return Err(CatError::CompositionMismatch {
            cod: s1.target().name().to_string(),
            dom: s2.source().name().to_string(),
        });
    }
    let pb = backend.pullback(&s1.right, &s2.left)?;
    Span::new(
        compose(&s1.left, &pb.proj_left)?,
        compose(&s2.right, &pb.proj_right)?,
    )
}

/// Replaces a mono left leg by the inclusion of its image subobject,
/// conjugating the right leg by the induced isomorphism.
pub fn normalize(span: &Span, backend: &Backend) -> Result<Span> {
    let x = &span.left;
    if !x.is_mono() {
        return Err(CatError::precondition(format!(
            "left leg {x:?} is not a monomorphism"
        )));
    }
    let image = x.image();
    let subs = backend.subobjects(x.cod())?;
    let sub = subs
        .iter()
        .find(|s| s.elems() == &image)
        .ok_or_else(|| CatError::Consistency("image is not a subobject".into()))?;
    let iso = sub
        .corestrict(x)
        .expect("image contains the image")
        .inverse()
        .expect("corestricted mono is an isomorphism");
    Ok(Span {
        left: sub.inclusion().clone(),
        right: compose(&span.right, &iso)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiamondSearch {
    /// Any `u, v` with `x u ∈ M`.
    Unrestricted,
    /// Only `u, v ∈ M`.
    MembersOnly,
}

/// `u: Y → X`, `v: Y → X'` with `x u = x' v`, `f u = f' v` and `x u ∈ M`.
#[derive(Debug, Clone, Serialize)]
pub struct Diamond {
    pub u: Morphism,
    pub v: Morphism,
}

fn require_left_in(span: &Span, m: &dyn MonoClass) -> Result<()> {
    if !m.contains(&span.left)? {
        return Err(CatError::precondition(format!(
            "left leg {:?} is not in {}",
            span.left,
            m.label()
        )));
    }
    Ok(())
}

/// Decides whether two spans present the same fraction, returning a
/// diamond when they do.
///
/// Every diamond factors through the pullback `P` of the left legs (they
/// are monos), so it suffices to search the subobjects `Y` of `P`, largest
/// first.
pub fn fraction_equal(
    s: &Span,
    t: &Span,
    m: &dyn MonoClass,
    backend: &Backend,
    mode: DiamondSearch,
) -> Result<Option<Diamond>> {
    if s.source() != t.source() || s.target() != t.target() {
        return Err(CatError::precondition(format!(
            "spans {s:?} and {t:?} have different endpoints"
        )));
    }
    require_left_in(s, m)?;
    require_left_in(t, m)?;
    let pb = backend.pullback(&s.left, &t.left)?;
    let fp = compose(&s.right, &pb.proj_left)?;
    let gq = compose(&t.right, &pb.proj_right)?;
    let xp = compose(&s.left, &pb.proj_left)?;
    let cached = backend.subobjects(&pb.apex)?;
    let mut subs: Vec<&Subobject> = cached.iter().collect();
    subs.sort_by_key(|y| std::cmp::Reverse(y.size()));
    for y in subs {
        let agree = y.elems().iter().all(|e| fp.apply(e) == gq.apply(e));
        if !agree || !m.contains_image(xp.cod(), &image_under(&xp, y))? {
            continue;
        }
        let u = compose(&pb.proj_left, y.inclusion())?;
        let v = compose(&pb.proj_right, y.inclusion())?;
        if mode == DiamondSearch::MembersOnly && !(m.contains(&u)? && m.contains(&v)?) {
            continue;
        }
        return Ok(Some(Diamond { u, v }));
    }
    Ok(None)
}

fn image_under(f: &Morphism, y: &Subobject) -> crate::elemset::ElemSet {
    crate::elemset::ElemSet::from_iter_in(f.cod().size(), y.elems().iter().map(|e| f.apply(e)))
}

#[derive(Debug, Clone, Serialize)]
pub struct FractionClass {
    pub id: usize,
    pub representative: Span,
}

/// Fraction classes `A → B`: spans over the `M`-subobjects of `A`, in
/// canonical order, grouped by [`fraction_equal`]. The first span met in
/// each class becomes its representative.
#[derive(Debug, Clone)]
pub struct HomClasses {
    dom: Obj,
    cod: Obj,
    classes: Vec<FractionClass>,
}

impl HomClasses {
    pub fn dom(&self) -> &Obj {
        &self.dom
    }

    pub fn cod(&self) -> &Obj {
        &self.cod
    }

    pub fn classes(&self) -> &[FractionClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Index of the class containing `span`.
    pub fn class_of(&self, span: &Span, m: &dyn MonoClass, backend: &Backend) -> Result<usize> {
        for c in &self.classes {
            if fraction_equal(&c.representative, span, m, backend, DiamondSearch::Unrestricted)?.is_some() {
                return Ok(c.id);
            }
        }
        Err(CatError::Consistency(format!(
            "span {span:?} matches no class of hom({}, {})",
            self.dom.name(),
            self.cod.name()
        )))
    }
}

pub fn poincare_hom(a: &Obj, b: &Obj, m: &dyn MonoClass, backend: &Backend) -> Result<HomClasses> {
    let mut classes: Vec<FractionClass> = Vec::new();
    for x in class_subobjects(m, a, backend)? {
        for f in backend.hom(x.object(), b)?.iter() {
            let span = Span::new(x.inclusion().clone(), f.clone())?;
            let mut known = false;
            for c in &classes {
                if fraction_equal(&c.representative, &span, m, backend, DiamondSearch::Unrestricted)?.is_some() {
                    known = true;
                    break;
                }
            }
            if !known {
                classes.push(FractionClass {
                    id: classes.len(),
                    representative: span,
                });
            }
        }
    }
    Ok(HomClasses {
        dom: a.clone(),
        cod: b.clone(),
        classes,
    })
}

/// Connected components of the category of spans `A → B` with left leg in
/// `M`, by union-find over restriction 2-cells between normalized spans.
/// Kept as an independent count of the fraction classes.
pub fn zigzag_components(a: &Obj, b: &Obj, m: &dyn MonoClass, backend: &Backend) -> Result<usize> {
    let mut nodes: Vec<(Subobject, Morphism)> = Vec::new();
    for x in class_subobjects(m, a, backend)? {
        for f in backend.hom(x.object(), b)?.iter() {
            nodes.push((x.clone(), f.clone()));
        }
    }
    let mut parent: Vec<usize> = (0..nodes.len()).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        let mut i = i;
        while p[i] != r {
            let next = p[i];
            p[i] = r;
            i = next;
        }
        r
    }
    for i in 0..nodes.len() {
        for j in 0..nodes.len() {
            let (small, f) = &nodes[i];
            let (big, g) = &nodes[j];
            if i == j || !small.elems().is_subset(big.elems()) {
                continue;
            }
            // the 2-cell is the inclusion small ⊆ big; it must carry g to f
            let s = big.corestrict(small.inclusion()).expect("nested subobjects");
            if compose(g, &s)? == *f {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    Ok((0..nodes.len()).filter(|&i| find(&mut parent, i) == i).count())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Condition {
    F0,
    F1,
    F2,
    F3,
    #[serde(rename = "Ore-d")]
    OreD,
}

impl Condition {
    pub fn id(self) -> &'static str {
        match self {
            Condition::F0 => "F0",
            Condition::F1 => "F1",
            Condition::F2 => "F2",
            Condition::F3 => "F3",
            Condition::OreD => "Ore-d",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionStatus {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub condition: Condition,
    pub status: ConditionStatus,
    pub instances: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<LawWitness>,
}

fn witness(note: &str, parts: &[(&str, &Morphism)]) -> LawWitness {
    LawWitness {
        note: note.to_string(),
        morphisms: parts
            .iter()
            .map(|(k, m)| (k.to_string(), (*m).clone()))
            .collect::<BTreeMap<_, _>>(),
    }
}

struct Tally {
    instances: usize,
    witness: Option<LawWitness>,
}

impl Tally {
    fn report(self, condition: Condition) -> ConditionReport {
        ConditionReport {
            condition,
            status: if self.witness.is_none() {
                ConditionStatus::Pass
            } else {
                ConditionStatus::Fail
            },
            instances: self.instances,
            witness: self.witness,
        }
    }
}

struct Focal<'a> {
    m: &'a dyn MonoClass,
    backend: &'a Backend,
    members: Vec<Morphism>,
}

impl<'a> Focal<'a> {
    fn new(m: &'a dyn MonoClass, backend: &'a Backend) -> Result<Self> {
        let mut members = Vec::new();
        for mono in backend.monos()? {
            if m.contains(&mono)? {
                members.push(mono);
            }
        }
        Ok(Focal { m, backend, members })
    }

    fn f0(&self) -> Result<Tally> {
        let mut n = 0;
        for x in self.backend.objects() {
            n += 1;
            if class_subobjects(self.m, x, self.backend)?.is_empty() {
                let id = Morphism::identity(x);
                return Ok(Tally {
                    instances: n,
                    witness: Some(witness("no member with this codomain", &[("identity", &id)])),
                });
            }
        }
        Ok(Tally { instances: n, witness: None })
    }

    fn f1(&self) -> Result<Tally> {
        let mut n = 0;
        for s1 in &self.members {
            'pairs: for s0 in self.members.iter().filter(|s0| s0.dom() == s1.cod()) {
                n += 1;
                let s = compose(s0, s1)?;
                if self.m.contains(&s)? {
                    continue;
                }
                for x in self.backend.objects() {
                    for f in self.backend.hom(x, s.dom())?.iter() {
                        if self.m.contains(&compose(&s, f)?)? {
                            continue 'pairs;
                        }
                    }
                }
                return Ok(Tally {
                    instances: n,
                    witness: Some(witness("no f makes s0 s1 f a member", &[("s1", s1), ("s0", s0)])),
                });
            }
        }
        Ok(Tally { instances: n, witness: None })
    }

    /// Completion of `Z −f→ A ←s− X` by `s': W → Z` in `M` exists iff some
    /// `M`-subobject `W` of `Z` has `f(W) ⊆ s(X)`.
    fn f2(&self) -> Result<Tally> {
        let mut n = 0;
        for s in &self.members {
            let image = s.image();
            for z in self.backend.objects() {
                let candidates = class_subobjects(self.m, z, self.backend)?;
                for f in self.backend.hom(z, s.cod())?.iter() {
                    n += 1;
                    let completes = candidates
                        .iter()
                        .any(|w| w.elems().iter().all(|e| image.contains(f.apply(e))));
                    if !completes {
                        return Ok(Tally {
                            instances: n,
                            witness: Some(witness(
                                "no member s' completes the square",
                                &[("s", s), ("f", f)],
                            )),
                        });
                    }
                }
            }
        }
        Ok(Tally { instances: n, witness: None })
    }

    fn f3(&self) -> Result<Tally> {
        let mut n = 0;
        for x in self.backend.objects() {
            let eq_candidates = class_subobjects(self.m, x, self.backend)?;
            for y in self.backend.objects() {
                let homs = self.backend.hom(x, y)?;
                let out_of_y: Vec<&Morphism> = self.members.iter().filter(|s| s.dom() == y).collect();
                for (i, f) in homs.iter().enumerate() {
                    for g in homs.iter().skip(i + 1) {
                        let mut coequalizer = None;
                        for s in &out_of_y {
                            if compose(s, f)? == compose(s, g)? {
                                coequalizer = Some(*s);
                                break;
                            }
                        }
                        let Some(s) = coequalizer else { continue };
                        n += 1;
                        let equalized = eq_candidates
                            .iter()
                            .any(|w| w.elems().iter().all(|e| f.apply(e) == g.apply(e)));
                        if !equalized {
                            return Ok(Tally {
                                instances: n,
                                witness: Some(witness(
                                    "coequalized by a member but equalized by none",
                                    &[("f", f), ("g", g), ("s", s)],
                                )),
                            });
                        }
                    }
                }
            }
        }
        Ok(Tally { instances: n, witness: None })
    }

    /// The full right-calculus check: identities, composition, the Ore
    /// square and cancellability.
    fn ore(&self, f2: &Tally, f3: &Tally) -> Result<Tally> {
        let mut n = 0;
        for x in self.backend.objects() {
            n += 1;
            let id = Morphism::identity(x);
            if !self.m.contains(&id)? {
                return Ok(Tally {
                    instances: n,
                    witness: Some(witness("identity outside the class", &[("identity", &id)])),
                });
            }
        }
        for s1 in &self.members {
            for s0 in self.members.iter().filter(|s0| s0.dom() == s1.cod()) {
                n += 1;
                if !self.m.contains(&compose(s0, s1)?)? {
                    return Ok(Tally {
                        instances: n,
                        witness: Some(witness("members with a non-member composite", &[("s1", s1), ("s0", s0)])),
                    });
                }
            }
        }
        n += f2.instances + f3.instances;
        let witness = f2.witness.clone().or_else(|| f3.witness.clone());
        Ok(Tally { instances: n, witness })
    }
}

/// Checks (F0)–(F3) and the right-calculus conditions for `m` over the
/// registered objects.
pub fn check_focal(m: &dyn MonoClass, backend: &Backend) -> Result<Vec<ConditionReport>> {
    let focal = Focal::new(m, backend)?;
    let f2 = focal.f2()?;
    let f3 = focal.f3()?;
    let ore = focal.ore(&f2, &f3)?;
    Ok(vec![
        focal.f0()?.report(Condition::F0),
        focal.f1()?.report(Condition::F1),
        f2.report(Condition::F2),
        f3.report(Condition::F3),
        ore.report(Condition::OreD),
    ])
}

#[cfg(test)]
mod tests;
