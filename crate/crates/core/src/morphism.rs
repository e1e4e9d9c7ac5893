use std::fmt;
use std::sync::Arc;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::elemset::ElemSet;
use crate::error::{CatError, Result};
use crate::hom::enumerate_hom;
use crate::object::Obj;

/// A basepoint-preserving (and, for groups, operation-preserving) total map
/// between finite objects. Equality is pointwise table equality together
/// with equal domain and codomain.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Morphism {
    dom: Obj,
    cod: Obj,
    map: Vec<usize>,
}

impl Morphism {
    /// Validating constructor.
    pub fn new(dom: Obj, cod: Obj, map: Vec<usize>) -> Result<Self> {
        if dom.kind() != cod.kind() {
            return Err(CatError::BackendMismatch {
                left: dom.kind(),
                right: cod.kind(),
            });
        }
        if map.len() != dom.size() {
            return Err(CatError::InvalidMorphism(format!(
                "table has {} entries but `{}` has {} elements",
                map.len(),
                dom.name(),
                dom.size()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&v| v >= cod.size()) {
            return Err(CatError::InvalidMorphism(format!(
                "image {bad} outside `{}`",
                cod.name()
            )));
        }
        if map[0] != 0 {
            return Err(CatError::InvalidMorphism("basepoint not preserved".into()));
        }
        if dom.is_group() {
            for a in 0..dom.size() {
                for b in 0..dom.size() {
                    if map[dom.op(a, b)] != cod.op(map[a], map[b]) {
                        return Err(CatError::InvalidMorphism(format!(
                            "not a homomorphism at ({a},{b})"
                        )));
                    }
                }
            }
        }
        Ok(Morphism { dom, cod, map })
    }

    pub(crate) fn new_unchecked(dom: Obj, cod: Obj, map: Vec<usize>) -> Self {
        debug_assert_eq!(map.len(), dom.size());
        Morphism { dom, cod, map }
    }

    pub fn identity(obj: &Obj) -> Self {
        Morphism {
            dom: Arc::clone(obj),
            cod: Arc::clone(obj),
            map: (0..obj.size()).collect(),
        }
    }

    pub fn zero(dom: &Obj, cod: &Obj) -> Self {
        Morphism {
            dom: Arc::clone(dom),
            cod: Arc::clone(cod),
            map: vec![0; dom.size()],
        }
    }

    pub fn dom(&self) -> &Obj {
        &self.dom
    }

    pub fn cod(&self) -> &Obj {
        &self.cod
    }

    pub fn table(&self) -> &[usize] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &Morphism) -> Result<Morphism> {
        compose(self, f)
    }

    pub fn image(&self) -> ElemSet {
        ElemSet::from_iter_in(self.cod.size(), self.map.iter().copied())
    }

    /// Injectivity; the monomorphisms in all three backends.
    pub fn is_mono(&self) -> bool {
        let mut seen = ElemSet::empty(self.cod.size());
        self.map.iter().all(|&y| seen.insert(y))
    }

    /// Surjectivity; the epimorphisms in all three backends.
    pub fn is_epi(&self) -> bool {
        self.image().len() == self.cod.size()
    }

    pub fn is_iso(&self) -> bool {
        self.dom.size() == self.cod.size() && self.is_mono()
    }

    pub fn is_zero_map(&self) -> bool {
        self.map.iter().all(|&y| y == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.dom == self.cod && self.map.iter().enumerate().all(|(i, &y)| i == y)
    }

    /// Inverse of an isomorphism.
    pub fn inverse(&self) -> Option<Morphism> {
        if !self.is_iso() {
            return None;
        }
        let mut inv = vec![0; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y] = x;
        }
        Some(Morphism::new_unchecked(
            Arc::clone(&self.cod),
            Arc::clone(&self.dom),
            inv,
        ))
    }

    /// Same table with domain and codomain replaced by structurally equal
    /// objects (used to attach registered display names).
    pub fn with_objects(&self, dom: &Obj, cod: &Obj) -> Morphism {
        debug_assert!(**dom == *self.dom && **cod == *self.cod);
        Morphism::new_unchecked(Arc::clone(dom), Arc::clone(cod), self.map.clone())
    }
}

/// `g ∘ f`.
pub fn compose(g: &Morphism, f: &Morphism) -> Result<Morphism> {
    if f.cod != g.dom {
        return Err(CatError::CompositionMismatch {
            cod: f.cod.name().to_string(),
            dom: g.dom.name().to_string(),
        });
    }
    Ok(Morphism::new_unchecked(
        Arc::clone(&f.dom),
        Arc::clone(&g.cod),
        f.map.iter().map(|&x| g.map[x]).collect(),
    ))
}

/// Categorical mono test: `f g = f h ⇒ g = h` for all probes `g, h: X → dom f`.
pub fn is_mono_by_cancellation(f: &Morphism, probes: &[Obj]) -> Result<bool> {
    for x in probes {
        let homs = enumerate_hom(x, f.dom())?;
        let composed: Vec<Morphism> = homs.iter().map(|g| compose(f, g)).collect::<Result<_>>()?;
        for i in 0..homs.len() {
            for j in 0..i {
                if composed[i] == composed[j] {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Categorical epi test: `g f = h f ⇒ g = h` for all probes `g, h: cod f → Y`.
pub fn is_epi_by_cancellation(f: &Morphism, probes: &[Obj]) -> Result<bool> {
    for y in probes {
        let homs = enumerate_hom(f.cod(), y)?;
        let composed: Vec<Morphism> = homs.iter().map(|g| compose(g, f)).collect::<Result<_>>()?;
        for i in 0..homs.len() {
            for j in 0..i {
                if composed[i] == composed[j] {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}→{} {:?}", self.dom.name(), self.cod.name(), self.map)
    }
}

impl Serialize for Morphism {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Morphism", 3)?;
        s.serialize_field("dom", self.dom.name())?;
        s.serialize_field("cod", self.cod.name())?;
        s.serialize_field("map", &self.map)?;
        s.end()
    }
}
