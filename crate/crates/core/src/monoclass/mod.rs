//! Classes of monomorphisms and their decision procedures: the base class
//! `S`, `S`-essential monos, subobject-essential monos, and stabilizations
//! (pullback-stable parts) of classes.
//!
//! Every class here is closed under composition with isomorphisms on the
//! domain, so membership of a mono only depends on the subobject it
//! represents. Classes therefore decide membership of `(codomain, image)`
//! pairs and memoize the answer.
//!
//! Essentiality for `S` = all monos is decided exactly. Any `f: A → B`
//! factors as `f = i ∘ e` with `e: A → A/E` the quotient by the kernel pair
//! `E` of `f` and `i` a mono, so `f ∘ m` is mono iff `e ∘ m` is, and `f` is
//! mono iff `e` is. The quantifier over all `f` thus reduces to the finitely
//! many congruences of `A`.

pub mod laws;

use std::collections::{HashMap, HashSet};
use std::sync::Mutex;

use serde::Serialize;

use crate::backend::Backend;
use crate::elemset::ElemSet;
use crate::error::{CatError, Result};
use crate::limits;
use crate::morphism::{compose, Morphism};
use crate::object::Obj;
use crate::subobject::{is_normal_subset, normal_subobjects, Subobject};

/// Whether a verdict was decided exactly or only over a bounded universe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Exactness {
    Exact,
    Bounded,
}

pub trait MonoClass: Send + Sync {
    fn label(&self) -> String;

    fn exactness(&self) -> Exactness;

    /// Membership of the subobject `image ⊆ cod`.
    fn contains_image(&self, cod: &Obj, image: &ElemSet) -> Result<bool>;

    /// Membership of a morphism; non-monos are never members.
    fn contains(&self, m: &Morphism) -> Result<bool> {
        if !m.is_mono() {
            return Ok(false);
        }
        self.contains_image(m.cod(), &m.image())
    }
}

type Key = (Obj, ElemSet);

#[derive(Default)]
struct MemoTable(Mutex<HashMap<Key, bool>>);

impl MemoTable {
    fn get_or(&self, cod: &Obj, image: &ElemSet, f: impl FnOnce() -> Result<bool>) -> Result<bool> {
        let key = (cod.clone(), image.clone());
        if let Some(&v) = self.0.lock().expect("memo poisoned").get(&key) {
            return Ok(v);
        }
        let v = f()?;
        self.0.lock().expect("memo poisoned").insert(key, v);
        Ok(v)
    }
}

/// The designated class `S` (or a user-supplied class `M`).
#[derive(Debug, Clone)]
pub enum MonoClassSpec {
    AllMonos,
    NormalMonos,
    /// Monos listed explicitly, closed up to isomorphism of the domain.
    Explicit(ExplicitClass),
}

#[derive(Debug, Clone, Default)]
pub struct ExplicitClass {
    members: HashSet<Key>,
    listed: Vec<Morphism>,
}

impl MonoClassSpec {
    pub fn explicit(list: impl IntoIterator<Item = Morphism>) -> Result<Self> {
        let mut class = ExplicitClass::default();
        for m in list {
            if !m.is_mono() {
                return Err(CatError::precondition(format!(
                    "explicit class member {m:?} is not a monomorphism"
                )));
            }
            class.members.insert((m.cod().clone(), m.image()));
            class.listed.push(m);
        }
        Ok(MonoClassSpec::Explicit(class))
    }

    /// Identity morphisms (hence isomorphisms, up to the domain) of the
    /// registered objects.
    pub fn identities(backend: &Backend) -> Self {
        Self::explicit(backend.objects().iter().map(Morphism::identity))
            .expect("identities are monos")
    }

    pub fn is_all_monos(&self) -> bool {
        matches!(self, MonoClassSpec::AllMonos)
    }
}

impl MonoClass for MonoClassSpec {
    fn label(&self) -> String {
        match self {
            MonoClassSpec::AllMonos => "Mono".into(),
            MonoClassSpec::NormalMonos => "NormalMono".into(),
            MonoClassSpec::Explicit(c) => format!("Explicit({})", c.listed.len()),
        }
    }

    fn exactness(&self) -> Exactness {
        Exactness::Exact
    }

    fn contains_image(&self, cod: &Obj, image: &ElemSet) -> Result<bool> {
        Ok(match self {
            MonoClassSpec::AllMonos => true,
            MonoClassSpec::NormalMonos => {
                let sub = Subobject::new_trusted(cod, image.clone());
                let q = limits::cokernel(sub.inclusion());
                limits::kernel_subobject(&q).elems() == image && is_normal_subset(cod, image)
            }
            MonoClassSpec::Explicit(c) => c.members.contains(&(cod.clone(), image.clone())),
        })
    }
}

/// Isomorphisms: the whole object as a subobject of itself.
pub struct Isomorphisms;

impl MonoClass for Isomorphisms {
    fn label(&self) -> String {
        "Iso".into()
    }

    fn exactness(&self) -> Exactness {
        Exactness::Exact
    }

    fn contains_image(&self, cod: &Obj, image: &ElemSet) -> Result<bool> {
        Ok(image.len() == cod.size())
    }
}

/// Counterexample data attached to a failed check.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    NotInClass {
        morphism: Morphism,
        class: String,
    },
    NotMono {
        morphism: Morphism,
    },
    /// `f ∘ m ∈ S` while `f ∉ S`.
    Extension { f: Morphism },
    /// A nonzero subobject `n` with `M ×_A N = 0`.
    DisjointSubobject { n: Morphism },
    /// Pulling back along `along` produces `pulled_back`, which fails the
    /// inner check.
    RefutingPullback {
        along: Morphism,
        pulled_back: Morphism,
        inner: Box<Witness>,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub exactness: Exactness,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl Verdict {
    fn yes(exactness: Exactness) -> Self {
        Verdict {
            holds: true,
            exactness,
            witness: None,
        }
    }

    fn no(exactness: Exactness, witness: Witness) -> Self {
        Verdict {
            holds: false,
            exactness,
            witness: Some(witness),
        }
    }
}

fn require_member(m: &Morphism, s: &dyn MonoClass) -> Result<()> {
    if !s.contains(m)? {
        return Err(CatError::precondition(format!(
            "{m:?} is not in the class {}",
            s.label()
        )));
    }
    Ok(())
}

/// `m ∈ S` is `S`-essential when `f ∘ m ∈ S` forces `f ∈ S`.
///
/// For `S` = all monos the decision is exact (regular-quotient reduction);
/// the witness is the smallest non-injective quotient `e` with `e ∘ m` mono.
/// For other classes the quantifier ranges over morphisms into registered
/// objects and the verdict is bounded.
pub fn is_essential(m: &Morphism, s: &MonoClassSpec, backend: &Backend) -> Result<Verdict> {
    require_member(m, s)?;
    if s.is_all_monos() {
        return essential_via_quotients(m, backend);
    }
    for b in backend.objects() {
        for f in backend.hom(m.cod(), b)?.iter() {
            if s.contains(&compose(f, m)?)? && !s.contains(f)? {
                return Ok(Verdict::no(Exactness::Bounded, Witness::Extension { f: f.clone() }));
            }
        }
    }
    Ok(Verdict::yes(Exactness::Bounded))
}

/// Essential-mono test (a): over the regular quotients `e: A → A/E`,
/// `e ∘ m` mono forces `e` mono.
pub fn essential_via_quotients(m: &Morphism, backend: &Backend) -> Result<Verdict> {
    if !m.is_mono() {
        return Err(CatError::precondition("essentiality needs a monomorphism"));
    }
    // canonical order puts Δ first; later congruences have smaller quotients
    let congs = backend.congruences(m.cod())?;
    let mut witness = None;
    for c in congs.iter() {
        let e = c.quotient();
        if !e.is_mono() && compose(e, m)?.is_mono() {
            witness = Some(e.clone());
        }
    }
    Ok(match witness {
        None => Verdict::yes(Exactness::Exact),
        Some(f) => Verdict::no(Exactness::Exact, Witness::Extension { f }),
    })
}

/// Test (b): for every congruence `E` on `A`, `E` restricted along `m` is
/// `Δ_M` only when `E = Δ_A`.
pub fn essential_via_congruences(m: &Morphism, backend: &Backend) -> Result<bool> {
    for c in backend.congruences(m.cod())?.iter() {
        if c.restrict_along(m)?.is_discrete() && !c.is_discrete() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Test (c): for every normal subobject `N`, `M ×_A N = 0` forces `N = 0`.
pub fn essential_via_normal_subobjects(m: &Morphism, backend: &Backend) -> Result<bool> {
    for n in normal_subobjects(m.cod()) {
        let pb = backend.pullback(m, n.inclusion())?;
        if pb.apex.is_zero() && !n.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Test (d): for every regular quotient `e`, `Ker(e ∘ m) = 0` forces
/// `Ker(e) = 0`.
pub fn essential_via_kernels(m: &Morphism, backend: &Backend) -> Result<bool> {
    for c in backend.congruences(m.cod())?.iter() {
        let e = c.quotient();
        let em = compose(e, m)?;
        if limits::kernel(&em).dom().is_zero() && !limits::kernel(e).dom().is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `m` is subobject-essential when every nonzero subobject `N` of `A` has
/// `M ×_A N ≠ 0`. Exact; the witness is the smallest disjoint subobject.
pub fn is_subobject_essential(m: &Morphism, backend: &Backend) -> Result<Verdict> {
    if !m.is_mono() {
        return Err(CatError::precondition(format!(
            "{m:?} is not a monomorphism"
        )));
    }
    for n in backend.subobjects(m.cod())?.iter() {
        if n.is_zero() {
            continue;
        }
        let pb = backend.pullback(m, n.inclusion())?;
        if pb.apex.is_zero() {
            return Ok(Verdict::no(
                Exactness::Exact,
                Witness::DisjointSubobject {
                    n: n.inclusion().clone(),
                },
            ));
        }
    }
    Ok(Verdict::yes(Exactness::Exact))
}

/// Pullback-stable `S`-essential monos. In a normal backend with `S` = all
/// monos this class coincides with the subobject-essential monos and the
/// decision is exact; otherwise it runs [`refute_stable_essential`].
pub fn is_stable_essential(m: &Morphism, s: &MonoClassSpec, backend: &Backend) -> Result<Verdict> {
    require_member(m, s)?;
    if backend.kind().is_normal() && s.is_all_monos() {
        return is_subobject_essential(m, backend);
    }
    refute_stable_essential(m, s, backend)
}

/// Bounded refutation: pull `m` back along every `x: X → A` with `X`
/// registered and test the result for `S`-essentiality.
pub fn refute_stable_essential(
    m: &Morphism,
    s: &MonoClassSpec,
    backend: &Backend,
) -> Result<Verdict> {
    require_member(m, s)?;
    let essential = EssentialClass::new(s.clone(), backend);
    let image = m.image();
    for x_obj in backend.objects() {
        for x in backend.hom(x_obj, m.cod())?.iter() {
            let pre = preimage(x, &image);
            if essential.contains_image(x_obj, &pre)? {
                continue;
            }
            let pb = backend.pullback(m, x)?;
            let u = pb.proj_right.clone();
            let inner = is_essential(&u, s, backend)?;
            let inner = inner.witness.ok_or_else(|| {
                CatError::Consistency("memoized and direct essentiality disagree".into())
            })?;
            return Ok(Verdict::no(
                Exactness::Bounded,
                Witness::RefutingPullback {
                    along: x.clone(),
                    pulled_back: u,
                    inner: Box::new(inner),
                },
            ));
        }
    }
    Ok(Verdict::yes(Exactness::Bounded))
}

/// `x⁻¹(image)`: the pullback of a mono with that image along `x`, as a
/// subobject of `dom(x)`.
pub fn preimage(x: &Morphism, image: &ElemSet) -> ElemSet {
    ElemSet::from_iter_in(
        x.dom().size(),
        (0..x.dom().size()).filter(|&t| image.contains(x.apply(t))),
    )
}

/// `Mono_E(C, S)` as a memoized class.
pub struct EssentialClass<'a> {
    s: MonoClassSpec,
    backend: &'a Backend,
    memo: MemoTable,
}

impl<'a> EssentialClass<'a> {
    pub fn new(s: MonoClassSpec, backend: &'a Backend) -> Self {
        EssentialClass {
            s,
            backend,
            memo: MemoTable::default(),
        }
    }
}

impl MonoClass for EssentialClass<'_> {
    fn label(&self) -> String {
        format!("Essential[{}]", self.s.label())
    }

    fn exactness(&self) -> Exactness {
        if self.s.is_all_monos() {
            Exactness::Exact
        } else {
            Exactness::Bounded
        }
    }

    fn contains_image(&self, cod: &Obj, image: &ElemSet) -> Result<bool> {
        self.memo.get_or(cod, image, || {
            if !self.s.contains_image(cod, image)? {
                return Ok(false);
            }
            let sub = Subobject::new_trusted(cod, image.clone());
            Ok(is_essential(sub.inclusion(), &self.s, self.backend)?.holds)
        })
    }
}

/// `Mono_SE(C)` as a memoized class.
pub struct SubobjectEssentialClass<'a> {
    backend: &'a Backend,
    memo: MemoTable,
}

impl<'a> SubobjectEssentialClass<'a> {
    pub fn new(backend: &'a Backend) -> Self {
        SubobjectEssentialClass {
            backend,
            memo: MemoTable::default(),
        }
    }
}

impl MonoClass for SubobjectEssentialClass<'_> {
    fn label(&self) -> String {
        "SubobjectEssential".into()
    }

    fn exactness(&self) -> Exactness {
        Exactness::Exact
    }

    fn contains_image(&self, cod: &Obj, image: &ElemSet) -> Result<bool> {
        self.memo.get_or(cod, image, || {
            let sub = Subobject::new_trusted(cod, image.clone());
            Ok(is_subobject_essential(sub.inclusion(), self.backend)?.holds)
        })
    }
}

/// `St(M)`: members of `M` all of whose pullbacks along morphisms from
/// registered objects stay in `M`. Bounded by the registry.
pub struct Stabilized<'a, C: MonoClass> {
    inner: C,
    backend: &'a Backend,
    memo: MemoTable,
}

impl<'a, C: MonoClass> Stabilized<'a, C> {
    pub fn new(inner: C, backend: &'a Backend) -> Self {
        Stabilized {
            inner,
            backend,
            memo: MemoTable::default(),
        }
    }

    pub fn inner(&self) -> &C {
        &self.inner
    }
}

impl<C: MonoClass> MonoClass for Stabilized<'_, C> {
    fn label(&self) -> String {
        format!("St({})", self.inner.label())
    }

    fn exactness(&self) -> Exactness {
        Exactness::Bounded
    }

    fn contains_image(&self, cod: &Obj, image: &ElemSet) -> Result<bool> {
        self.memo.get_or(cod, image, || {
            for x_obj in self.backend.objects() {
                for x in self.backend.hom(x_obj, cod)?.iter() {
                    if !self.inner.contains_image(x_obj, &preimage(x, image))? {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        })
    }
}

/// Result of a bounded stabilization of an explicit list.
#[derive(Debug, Clone, Serialize)]
pub struct Stabilization {
    pub survivors: Vec<Morphism>,
    pub exactness: Exactness,
}

/// Members of `mset` whose pullbacks along every morphism from a registered
/// object land (up to isomorphism of the domain) in `mset`.
pub fn stabilize(mset: &[Morphism], backend: &Backend) -> Result<Stabilization> {
    let exact_members: HashSet<&Morphism> = mset.iter().collect();
    let mono_members: HashSet<Key> = mset
        .iter()
        .filter(|m| m.is_mono())
        .map(|m| (m.cod().clone(), m.image()))
        .collect();
    stabilize_by(mset, backend, |u| {
        Ok(if u.is_mono() {
            mono_members.contains(&(u.cod().clone(), u.image()))
        } else {
            exact_members.contains(u)
        })
    })
}

/// Members of `mset` whose pullbacks along every morphism from a registered
/// object belong to `class`.
pub fn stabilize_within(
    mset: &[Morphism],
    class: &dyn MonoClass,
    backend: &Backend,
) -> Result<Stabilization> {
    stabilize_by(mset, backend, |u| class.contains(u))
}

fn stabilize_by(
    mset: &[Morphism],
    backend: &Backend,
    member: impl Fn(&Morphism) -> Result<bool>,
) -> Result<Stabilization> {
    let mut survivors = Vec::new();
    'next: for m in mset {
        for x_obj in backend.objects() {
            for x in backend.hom(x_obj, m.cod())?.iter() {
                let pb = backend.pullback(m, x)?;
                if !member(&pb.proj_right)? {
                    continue 'next;
                }
            }
        }
        survivors.push(m.clone());
    }
    Ok(Stabilization {
        survivors,
        exactness: Exactness::Bounded,
    })
}

/// Stabilization of the essential monos. In a normal backend this is the
/// class of subobject-essential monos, decided exactly.
pub fn stabilize_essential<'a>(backend: &'a Backend) -> Box<dyn MonoClass + 'a> {
    if backend.kind().is_normal() {
        Box::new(SubobjectEssentialClass::new(backend))
    } else {
        Box::new(Stabilized::new(
            EssentialClass::new(MonoClassSpec::AllMonos, backend),
            backend,
        ))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassFlags {
    pub in_s: bool,
    pub essential: bool,
    pub subobject_essential: bool,
    pub stable_essential: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    pub morphism: Morphism,
    pub flags: ClassFlags,
    pub essential_exactness: Exactness,
    pub stable_exactness: Exactness,
    pub witnesses: std::collections::BTreeMap<String, Witness>,
}

pub fn classify(m: &Morphism, s: &MonoClassSpec, backend: &Backend) -> Result<ClassificationReport> {
    let mut witnesses = std::collections::BTreeMap::new();
    let in_s = s.contains(m)?;
    let mut flags = ClassFlags {
        in_s,
        essential: false,
        subobject_essential: false,
        stable_essential: false,
    };
    let mut essential_exactness = Exactness::Exact;
    let mut stable_exactness = Exactness::Exact;
    if in_s {
        let e = is_essential(m, s, backend)?;
        flags.essential = e.holds;
        essential_exactness = e.exactness;
        if let Some(w) = e.witness {
            witnesses.insert("essential".into(), w);
        }
        let st = is_stable_essential(m, s, backend)?;
        flags.stable_essential = st.holds;
        stable_exactness = st.exactness;
        if let Some(w) = st.witness {
            witnesses.insert("stable_essential".into(), w);
        }
    } else {
        let w = Witness::NotInClass {
            morphism: m.clone(),
            class: s.label(),
        };
        witnesses.insert("in_s".into(), w.clone());
        witnesses.insert("essential".into(), w.clone());
        witnesses.insert("stable_essential".into(), w);
    }
    if m.is_mono() {
        let se = is_subobject_essential(m, backend)?;
        flags.subobject_essential = se.holds;
        if let Some(w) = se.witness {
            witnesses.insert("subobject_essential".into(), w);
        }
    } else {
        witnesses.insert(
            "subobject_essential".into(),
            Witness::NotMono { morphism: m.clone() },
        );
    }
    Ok(ClassificationReport {
        morphism: m.clone(),
        flags,
        essential_exactness,
        stable_exactness,
        witnesses,
    })
}

/// Subobjects of `obj` in a class, in canonical order.
pub fn class_subobjects(
    class: &dyn MonoClass,
    obj: &Obj,
    backend: &Backend,
) -> Result<Vec<Subobject>> {
    let mut out = Vec::new();
    for sub in backend.subobjects(obj)?.iter() {
        if class.contains_image(obj, sub.elems())? {
            out.push(sub.clone());
        }
    }
    Ok(out)
}

impl<C: MonoClass + ?Sized> MonoClass for &C {
    fn label(&self) -> String {
        (**self).label()
    }
    fn exactness(&self) -> Exactness {
        (**self).exactness()
    }
    fn contains_image(&self, cod: &Obj, image: &ElemSet) -> Result<bool> {
        (**self).contains_image(cod, image)
    }
}

impl<C: MonoClass + ?Sized> MonoClass for Box<C> {
    fn label(&self) -> String {
        (**self).label()
    }
    fn exactness(&self) -> Exactness {
        (**self).exactness()
    }
    fn contains_image(&self, cod: &Obj, image: &ElemSet) -> Result<bool> {
        (**self).contains_image(cod, image)
    }
}

#[cfg(test)]
mod tests;
