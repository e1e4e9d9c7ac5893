//! The spectral category: the category of fractions of a backend for its
//! pullback-stable essential monos, materialized on the registered objects.

use std::collections::HashMap;
use std::sync::Mutex;

use serde::Serialize;

use crate::backend::Backend;
use crate::error::{CatError, Result};
use crate::fractions::{check_focal, poincare_hom, span_compose, Condition, ConditionStatus, HomClasses, Span};
use crate::monoclass::laws::{closure_law_suite, LawFamily, LawStatus};
use crate::monoclass::{
    class_subobjects, EssentialClass, Exactness, MonoClass, MonoClassSpec, Stabilized, SubobjectEssentialClass,
};
use crate::morphism::{compose, Morphism};
use crate::object::{Obj, ObjectView};
use crate::subobject::Subobject;

/// Global class id, numbered over the hom sets in registry order.
pub type ClassId = usize;

pub struct SpectralCategory<'a> {
    backend: &'a Backend,
    s: MonoClassSpec,
    m: Box<dyn MonoClass + 'a>,
    exactness: Exactness,
    homs: Vec<Vec<HomClasses>>,
    offsets: Vec<Vec<usize>>,
    owners: Vec<(usize, usize, usize)>,
    composition: Vec<[ClassId; 3]>,
    compose_map: HashMap<(ClassId, ClassId), ClassId>,
    foreign: Mutex<HashMap<(Obj, Obj), HomClasses>>,
}

/// The class `M` inverted by the spectral category of `(backend, s)`:
/// subobject-essential monos when that is known to coincide with the
/// stabilized essential monos, the bounded stabilization otherwise.
pub fn spectral_class<'a>(s: &MonoClassSpec, backend: &'a Backend) -> (Box<dyn MonoClass + 'a>, Exactness) {
    if backend.kind().is_normal() && s.is_all_monos() {
        (Box::new(SubobjectEssentialClass::new(backend)), Exactness::Exact)
    } else {
        (
            Box::new(Stabilized::new(EssentialClass::new(s.clone(), backend), backend)),
            Exactness::Bounded,
        )
    }
}

pub fn build_spec<'a>(backend: &'a Backend, s: MonoClassSpec) -> Result<SpectralCategory<'a>> {
    for r in closure_law_suite(&[LawFamily::BaseClass], &s, backend)? {
        if r.status == LawStatus::Fail {
            return Err(CatError::ConditionFailed {
                condition: r.law_id,
                detail: format!("the class {} does not qualify as S", s.label()),
            });
        }
    }
    let (m, exactness) = spectral_class(&s, backend);
    for r in check_focal(m.as_ref(), backend)? {
        let needed = matches!(r.condition, Condition::F0 | Condition::F1 | Condition::F2);
        if needed && r.status == ConditionStatus::Fail {
            return Err(CatError::ConditionFailed {
                condition: r.condition.id().to_string(),
                detail: format!("{} does not present its fractions as spans", m.label()),
            });
        }
    }
    let objects = backend.objects();
    let mut homs = Vec::with_capacity(objects.len());
    let mut offsets = Vec::with_capacity(objects.len());
    let mut owners = Vec::new();
    for (i, a) in objects.iter().enumerate() {
        let mut row = Vec::with_capacity(objects.len());
        let mut off = Vec::with_capacity(objects.len());
        for (j, b) in objects.iter().enumerate() {
            let h = poincare_hom(a, b, m.as_ref(), backend)?;
            off.push(owners.len());
            owners.extend((0..h.len()).map(|k| (i, j, k)));
            row.push(h);
        }
        homs.push(row);
        offsets.push(off);
    }
    let mut spec = SpectralCategory {
        backend,
        s,
        m,
        exactness,
        homs,
        offsets,
        owners,
        composition: Vec::new(),
        compose_map: HashMap::new(),
        foreign: Mutex::new(HashMap::new()),
    };
    spec.fill_composition()?;
    Ok(spec)
}

impl<'a> SpectralCategory<'a> {
    fn fill_composition(&mut self) -> Result<()> {
        let n = self.backend.objects().len();
        let mut table = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for f in self.homs[a][b].classes() {
                        for g in self.homs[b][c].classes() {
                            let span = span_compose(&g.representative, &f.representative, self.backend)?;
                            let k = self.homs[a][c].class_of(&span, self.m.as_ref(), self.backend)?;
                            table.push([
                                self.offsets[b][c] + g.id,
                                self.offsets[a][b] + f.id,
                                self.offsets[a][c] + k,
                            ]);
                        }
                    }
                }
            }
        }
        table.sort_unstable();
        self.compose_map = table.iter().map(|t| ((t[0], t[1]), t[2])).collect();
        self.composition = table;
        Ok(())
    }

    pub fn backend(&self) -> &Backend {
        self.backend
    }

    pub fn base_class(&self) -> &MonoClassSpec {
        &self.s
    }

    pub fn inverted_class(&self) -> &dyn MonoClass {
        self.m.as_ref()
    }

    pub fn exactness(&self) -> Exactness {
        self.exactness
    }

    pub fn objects(&self) -> &[Obj] {
        self.backend.objects()
    }

    fn index(&self, a: &Obj) -> Result<usize> {
        self.backend.index_of(a).ok_or_else(|| CatError::UnknownName {
            what: "registered object",
            name: a.name().to_string(),
        })
    }

    pub fn hom(&self, a: &Obj, b: &Obj) -> Result<&HomClasses> {
        Ok(&self.homs[self.index(a)?][self.index(b)?])
    }

    pub fn class_count(&self) -> usize {
        self.owners.len()
    }

    /// `(dom, cod)` of a class.
    pub fn endpoints(&self, id: ClassId) -> (&Obj, &Obj) {
        let (a, b, _) = self.owners[id];
        (&self.objects()[a], &self.objects()[b])
    }

    pub fn representative(&self, id: ClassId) -> &Span {
        let (a, b, k) = self.owners[id];
        &self.homs[a][b].classes()[k].representative
    }

    /// Global ids of the classes `a → b`.
    pub fn class_ids(&self, a: &Obj, b: &Obj) -> Result<std::ops::Range<ClassId>> {
        let (i, j) = (self.index(a)?, self.index(b)?);
        let start = self.offsets[i][j];
        Ok(start..start + self.homs[i][j].len())
    }

    /// Triples `[g, f, g∘f]`, sorted.
    pub fn composition_table(&self) -> &[[ClassId; 3]] {
        &self.composition
    }

    /// `g ∘ f`.
    pub fn compose(&self, g: ClassId, f: ClassId) -> Result<ClassId> {
        self.compose_map.get(&(g, f)).copied().ok_or_else(|| CatError::CompositionMismatch {
            cod: self.endpoints(f).1.name().to_string(),
            dom: self.endpoints(g).0.name().to_string(),
        })
    }

    fn class_of_span(&self, span: &Span) -> Result<ClassId> {
        let (i, j) = (self.index(span.source())?, self.index(span.target())?);
        Ok(self.offsets[i][j] + self.homs[i][j].class_of(span, self.m.as_ref(), self.backend)?)
    }

    /// The canonical functor on morphisms: `f ↦ cls(f, 1)`.
    pub fn canonical_functor(&self, f: &Morphism) -> Result<ClassId> {
        let f = f.with_objects(&self.backend.canonical(f.dom()), &self.backend.canonical(f.cod()));
        self.class_of_span(&Span::of_morphism(&f))
    }

    pub fn identity(&self, a: &Obj) -> Result<ClassId> {
        self.canonical_functor(&Morphism::identity(&self.backend.canonical(a)))
    }

    /// The class of `(0, 1_A)`. Every span `(0, x)` must land in it.
    pub fn zero_class(&self, a: &Obj, b: &Obj) -> Result<ClassId> {
        let (a, b) = (self.backend.canonical(a), self.backend.canonical(b));
        let zero = self.canonical_functor(&Morphism::zero(&a, &b))?;
        for x in class_subobjects(self.m.as_ref(), &a, self.backend)? {
            let span = Span::new(x.inclusion().clone(), Morphism::zero(x.object(), &b))?;
            if self.class_of_span(&span)? != zero {
                return Err(CatError::Consistency(format!(
                    "zero spans {}→{} fall into different classes",
                    a.name(),
                    b.name()
                )));
            }
        }
        Ok(zero)
    }

    pub fn inverse(&self, g: ClassId) -> Result<Option<ClassId>> {
        let (a, b) = self.endpoints(g);
        let (id_a, id_b) = (self.identity(a)?, self.identity(b)?);
        for h in self.class_ids(b, a)? {
            if self.compose(h, g)? == id_a && self.compose(g, h)? == id_b {
                return Ok(Some(h));
            }
        }
        Ok(None)
    }

    pub fn is_invertible(&self, g: ClassId) -> Result<bool> {
        Ok(self.inverse(g)?.is_some())
    }

    /// Fraction classes between arbitrary (possibly unregistered) objects,
    /// cached by structure.
    pub fn foreign_hom(&self, a: &Obj, b: &Obj) -> Result<HomClasses> {
        let key = (self.backend.canonical(a), self.backend.canonical(b));
        if let Some(h) = self.foreign.lock().expect("cache poisoned").get(&key) {
            return Ok(h.clone());
        }
        let h = poincare_hom(&key.0, &key.1, self.m.as_ref(), self.backend)?;
        self.foreign.lock().expect("cache poisoned").insert(key, h.clone());
        Ok(h)
    }

    pub fn export(&self) -> SpecExport {
        let objects: Vec<ObjectView> = self.objects().iter().map(|o| ObjectView::from(o.as_ref())).collect();
        let mut homs = Vec::new();
        for row in &self.homs {
            for h in row {
                homs.push(HomExport {
                    dom: h.dom().name().to_string(),
                    cod: h.cod().name().to_string(),
                    classes: h
                        .classes()
                        .iter()
                        .map(|c| ClassExport {
                            rep_left: c.representative.left().table().to_vec(),
                            rep_right: c.representative.right().table().to_vec(),
                        })
                        .collect(),
                });
            }
        }
        SpecExport {
            objects,
            homs,
            composition: self.composition.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassExport {
    pub rep_left: Vec<usize>,
    pub rep_right: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct HomExport {
    pub dom: String,
    pub cod: String,
    pub classes: Vec<ClassExport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpecExport {
    pub objects: Vec<ObjectView>,
    pub homs: Vec<HomExport>,
    pub composition: Vec<[ClassId; 3]>,
}

/// Checks `P(1) = 1` and `P(g f) = P(g) P(f)` on every registered
/// composable pair; returns the first failing pair.
pub fn check_functor_laws(spec: &SpectralCategory) -> Result<Option<(Morphism, Morphism)>> {
    let b = spec.backend();
    for a in b.objects() {
        let id = Morphism::identity(a);
        if spec.canonical_functor(&id)? != spec.identity(a)? {
            return Ok(Some((id.clone(), id)));
        }
        for x in b.objects() {
            for f in b.hom(a, x)?.iter() {
                let pf = spec.canonical_functor(f)?;
                for y in b.objects() {
                    for g in b.hom(x, y)?.iter() {
                        let pgf = spec.canonical_functor(&compose(g, f)?)?;
                        if pgf != spec.compose(spec.canonical_functor(g)?, pf)? {
                            return Ok(Some((g.clone(), f.clone())));
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Serialize)]
pub struct LimitFailure {
    pub left: Morphism,
    pub right: Morphism,
    pub test_object: String,
    pub problem: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct LimitReport {
    pub cospans: usize,
    pub cones: usize,
    pub passed: bool,
    pub exactness: Exactness,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<LimitFailure>,
}

/// All cospans of registered morphisms, each unordered pair once.
pub fn registered_cospans(backend: &Backend) -> Result<Vec<(Morphism, Morphism)>> {
    let mut out = Vec::new();
    for a in backend.objects() {
        let into = backend.morphisms_into(a)?;
        for (i, f) in into.iter().enumerate() {
            for g in &into[i..] {
                out.push((f.clone(), g.clone()));
            }
        }
    }
    Ok(out)
}

/// Checks that the image under the canonical functor of the backend
/// pullback of each cospan is a pullback in the spectral category, tested
/// against every registered object: the comparison map from classes
/// `T → P` to commuting cones of classes must be a bijection.
pub fn verify_limit_preservation(spec: &SpectralCategory, cospans: &[(Morphism, Morphism)]) -> Result<LimitReport> {
    let backend = spec.backend();
    let mut cones = 0;
    for (f, g) in cospans {
        let pb = backend.pullback(f, g)?;
        let pf = spec.canonical_functor(f)?;
        let pg = spec.canonical_functor(g)?;
        let fail = |t: &Obj, problem: &str, cones: usize| LimitReport {
            cospans: cospans.len(),
            cones,
            passed: false,
            exactness: Exactness::Bounded,
            failure: Some(LimitFailure {
                left: f.clone(),
                right: g.clone(),
                test_object: t.name().to_string(),
                problem: problem.to_string(),
            }),
        };
        for t in backend.objects() {
            let to_apex = spec.foreign_hom(t, &pb.apex)?;
            let mut image = Vec::with_capacity(to_apex.len());
            for h in to_apex.classes() {
                let leg = |p: &Morphism| -> Result<ClassId> {
                    let s = span_compose(&Span::of_morphism(p), &h.representative, backend)?;
                    let s = Span::new(
                        s.left().with_objects(s.left().dom(), &backend.canonical(s.left().cod())),
                        s.right().with_objects(s.right().dom(), &backend.canonical(s.right().cod())),
                    )?;
                    spec.class_of_span(&s)
                };
                image.push((leg(&pb.proj_left)?, leg(&pb.proj_right)?));
            }
            let mut commuting = Vec::new();
            for a in spec.class_ids(t, f.dom())? {
                for b in spec.class_ids(t, g.dom())? {
                    if spec.compose(pf, a)? == spec.compose(pg, b)? {
                        commuting.push((a, b));
                    }
                }
            }
            cones += commuting.len();
            let mut sorted = image.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != image.len() {
                return Ok(fail(t, "two classes into the pullback induce the same cone", cones));
            }
            if sorted != commuting {
                if sorted.iter().any(|c| !commuting.contains(c)) {
                    return Err(CatError::Consistency(format!(
                        "a cone through the pullback of {f:?} and {g:?} does not commute"
                    )));
                }
                return Ok(fail(t, "a commuting cone has no mediating class", cones));
            }
        }
    }
    Ok(LimitReport {
        cospans: cospans.len(),
        cones,
        passed: true,
        exactness: Exactness::Bounded,
        failure: None,
    })
}

#[derive(Debug, Clone)]
pub struct MinimalSubobject {
    pub subobject: Subobject,
    /// `(B, |classes(A, B)|)` for each registered `B`; each equals
    /// `|hom(A_min, B)|`.
    pub counts: Vec<(String, usize)>,
}

/// The intersection of all `M`-subobjects of `a`; asserts that it is itself
/// in `M` and that fraction classes out of `a` are exactly the morphisms out
/// of it.
pub fn minimal_m_subobject(a: &Obj, spec: &SpectralCategory) -> Result<MinimalSubobject> {
    let backend = spec.backend();
    let a = backend.canonical(a);
    let subs = class_subobjects(spec.inverted_class(), &a, backend)?;
    let mut meet = crate::elemset::ElemSet::full(a.size());
    for s in &subs {
        meet = meet.intersection(s.elems());
    }
    let sub = backend
        .subobjects(&a)?
        .iter()
        .find(|s| s.elems() == &meet)
        .cloned()
        .ok_or_else(|| CatError::Consistency("intersection of subobjects is not a subobject".into()))?;
    if !spec.inverted_class().contains(sub.inclusion())? {
        return Err(CatError::Consistency(format!(
            "the least {}-subobject of {} is not a member",
            spec.inverted_class().label(),
            a.name()
        )));
    }
    let mut counts = Vec::new();
    for b in backend.objects() {
        let classes = spec.hom(&a, b)?.len();
        let direct = backend.hom(sub.object(), b)?.len();
        if classes != direct {
            return Err(CatError::Consistency(format!(
                "{} classes {}→{} but {} morphisms out of the least subobject",
                classes,
                a.name(),
                b.name(),
                direct
            )));
        }
        counts.push((b.name().to_string(), classes));
    }
    Ok(MinimalSubobject { subobject: sub, counts })
}

#[derive(Debug, Clone, Serialize)]
pub struct UniformReport {
    pub object: String,
    pub uniform: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Morphism>,
}

/// `a` is uniform for `m` when every nonzero subobject inclusion into it
/// lies in `m`.
pub fn is_uniform(a: &Obj, m: &dyn MonoClass, backend: &Backend) -> Result<UniformReport> {
    for sub in backend.subobjects(a)?.iter() {
        if !sub.is_zero() && !m.contains(sub.inclusion())? {
            return Ok(UniformReport {
                object: a.name().to_string(),
                uniform: false,
                witness: Some(sub.inclusion().clone()),
            });
        }
    }
    Ok(UniformReport {
        object: a.name().to_string(),
        uniform: true,
        witness: None,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DivisionMonoidReport {
    pub object: String,
    pub size: usize,
    /// Ids below are local to the endomorphism monoid.
    pub zero: usize,
    pub identity: usize,
    pub invertible: Vec<usize>,
    pub uniform: bool,
    pub division_monoid: bool,
}

pub fn end_spec_division_check(a: &Obj, spec: &SpectralCategory) -> Result<DivisionMonoidReport> {
    let a = spec.backend().canonical(a);
    let ids = spec.class_ids(&a, &a)?;
    let start = ids.start;
    let zero = spec.zero_class(&a, &a)?;
    let identity = spec.identity(&a)?;
    let mut invertible = Vec::new();
    for g in ids.clone() {
        if spec.is_invertible(g)? {
            invertible.push(g - start);
        }
    }
    let size = ids.len();
    let nonzero: Vec<usize> = ids.filter(|&g| g != zero).map(|g| g - start).collect();
    let uniform = is_uniform(&a, spec.inverted_class(), spec.backend())?.uniform;
    Ok(DivisionMonoidReport {
        object: a.name().to_string(),
        size,
        zero: zero - start,
        identity: identity - start,
        division_monoid: size >= 2 && invertible == nonzero,
        invertible,
        uniform,
    })
}

#[cfg(test)]
mod tests;
