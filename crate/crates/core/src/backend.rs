//! A backend is one of the three ambient categories together with a finite
//! registry of objects. The registry is the universe that every bounded
//! quantifier ranges over.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::{Arc, Mutex};

use crate::error::{CatError, Result};
use crate::hom::enumerate_hom;
use crate::limits::{self, Congruence};
use crate::morphism::Morphism;
use crate::object::{BackendKind, FiniteObject, Obj};
use crate::subobject::{self, Subobject};

pub const DEFAULT_PROBE_BOUND: usize = 8;

struct Memo<K, V>(Mutex<HashMap<K, V>>);

impl<K: Eq + Hash, V: Clone> Memo<K, V> {
    fn new() -> Self {
        Memo(Mutex::new(HashMap::new()))
    }

    fn get_or_try(&self, key: K, make: impl FnOnce() -> Result<V>) -> Result<V> {
        if let Some(v) = self.0.lock().expect("memo poisoned").get(&key) {
            return Ok(v.clone());
        }
        let v = make()?;
        self.0.lock().expect("memo poisoned").entry(key).or_insert(v.clone());
        Ok(v)
    }
}

pub struct Backend {
    kind: BackendKind,
    label: String,
    size_bound: usize,
    probe_bound: usize,
    objects: Vec<Obj>,
    lookup: HashMap<Obj, usize>,
    homs: Memo<(Obj, Obj), Arc<Vec<Morphism>>>,
    subs: Memo<Obj, Arc<Vec<Subobject>>>,
    congs: Memo<Obj, Arc<Vec<Congruence>>>,
}

impl Backend {
    /// An empty registry holding only the zero object.
    pub fn new(kind: BackendKind) -> Self {
        let mut b = Backend {
            kind,
            label: String::new(),
            size_bound: kind.default_size_bound(),
            probe_bound: DEFAULT_PROBE_BOUND,
            objects: Vec::new(),
            lookup: HashMap::new(),
            homs: Memo::new(),
            subs: Memo::new(),
            congs: Memo::new(),
        };
        b.register(FiniteObject::zero(kind))
            .expect("zero object always fits");
        b
    }

    pub fn with_size_bound(mut self, bound: usize) -> Self {
        assert!(bound >= 1);
        self.size_bound = bound;
        self
    }

    pub fn with_probe_bound(mut self, bound: usize) -> Self {
        assert!(bound >= 1);
        self.probe_bound = bound;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Registers an object, returning the registered handle. A structurally
    /// equal object already present is returned instead of a duplicate.
    pub fn register(&mut self, obj: Obj) -> Result<Obj> {
        if obj.kind() != self.kind {
            return Err(CatError::BackendMismatch {
                left: self.kind,
                right: obj.kind(),
            });
        }
        if obj.size() > self.size_bound {
            return Err(CatError::BoundExceeded {
                name: obj.name().to_string(),
                size: obj.size(),
                bound: self.size_bound,
            });
        }
        if self.kind == BackendKind::AbelianGroup && !obj.is_commutative() {
            return Err(CatError::InvalidObject(format!(
                "`{}` is not commutative",
                obj.name()
            )));
        }
        if let Some(&i) = self.lookup.get(&obj) {
            return Ok(Arc::clone(&self.objects[i]));
        }
        self.lookup.insert(Arc::clone(&obj), self.objects.len());
        self.objects.push(Arc::clone(&obj));
        Ok(obj)
    }

    pub fn register_all(&mut self, objs: impl IntoIterator<Item = Obj>) -> Result<()> {
        for o in objs {
            self.register(o)?;
        }
        Ok(())
    }

    /// Registers every subobject of `obj` (and `obj` itself), naming the
    /// induced objects with `namer` when it returns a name.
    pub fn register_subobjects_of(
        &mut self,
        obj: &Obj,
        namer: impl Fn(&Subobject) -> Option<String>,
    ) -> Result<()> {
        for sub in subobject::subobjects(obj) {
            if self.lookup.contains_key(sub.object()) {
                continue;
            }
            let o = match namer(&sub) {
                Some(name) => sub.object().renamed(name),
                None => Arc::clone(sub.object()),
            };
            self.register(o)?;
        }
        Ok(())
    }

    pub fn kind(&self) -> BackendKind {
        self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn size_bound(&self) -> usize {
        self.size_bound
    }

    pub fn probe_bound(&self) -> usize {
        self.probe_bound
    }

    pub fn objects(&self) -> &[Obj] {
        &self.objects
    }

    pub fn zero(&self) -> &Obj {
        &self.objects[0]
    }

    pub fn index_of(&self, obj: &Obj) -> Option<usize> {
        self.lookup.get(obj).copied()
    }

    pub fn is_registered(&self, obj: &Obj) -> bool {
        self.lookup.contains_key(obj)
    }

    /// The registered twin of `obj` if there is one (carries the registry
    /// display name), else `obj` itself.
    pub fn canonical(&self, obj: &Obj) -> Obj {
        match self.lookup.get(obj) {
            Some(&i) => Arc::clone(&self.objects[i]),
            None => Arc::clone(obj),
        }
    }

    pub fn find(&self, name: &str) -> Option<&Obj> {
        self.objects.iter().find(|o| o.name() == name)
    }

    /// Registered objects of size at most the probe bound.
    pub fn probes(&self) -> Vec<Obj> {
        self.objects
            .iter()
            .filter(|o| o.size() <= self.probe_bound)
            .cloned()
            .collect()
    }

    pub fn check_size(&self, obj: &FiniteObject) -> Result<()> {
        if obj.size() > self.size_bound {
            return Err(CatError::BoundExceeded {
                name: obj.name().to_string(),
                size: obj.size(),
                bound: self.size_bound,
            });
        }
        Ok(())
    }

    /// Cached hom-set enumeration.
    pub fn hom(&self, a: &Obj, b: &Obj) -> Result<Arc<Vec<Morphism>>> {
        let (a, b) = (self.canonical(a), self.canonical(b));
        self.homs
            .get_or_try((Arc::clone(&a), Arc::clone(&b)), || {
                Ok(Arc::new(enumerate_hom(&a, &b)?))
            })
    }

    /// Cached subobject enumeration, in canonical order.
    pub fn subobjects(&self, obj: &Obj) -> Result<Arc<Vec<Subobject>>> {
        let obj = self.canonical(obj);
        self.subs.get_or_try(Arc::clone(&obj), || {
            Ok(Arc::new(
                subobject::subobjects(&obj)
                    .into_iter()
                    .map(|s| {
                        let twin = self.canonical(s.object());
                        s.with_object(&twin)
                    })
                    .collect(),
            ))
        })
    }

    /// Cached congruence enumeration, in canonical order.
    pub fn congruences(&self, obj: &Obj) -> Result<Arc<Vec<Congruence>>> {
        let obj = self.canonical(obj);
        self.congs
            .get_or_try(Arc::clone(&obj), || Ok(Arc::new(limits::congruences(&obj)?)))
    }

    /// All monomorphisms between registered objects, ordered by codomain,
    /// then domain, then table.
    pub fn monos(&self) -> Result<Vec<Morphism>> {
        let mut out = Vec::new();
        for b in &self.objects {
            for a in &self.objects {
                if a.size() > b.size() {
                    continue;
                }
                out.extend(self.hom(a, b)?.iter().filter(|m| m.is_mono()).cloned());
            }
        }
        Ok(out)
    }

    /// All morphisms with a registered domain into `cod`.
    pub fn morphisms_into(&self, cod: &Obj) -> Result<Vec<Morphism>> {
        let mut out = Vec::new();
        for x in &self.objects {
            out.extend(self.hom(x, cod)?.iter().cloned());
        }
        Ok(out)
    }

    pub fn pullback(&self, f: &Morphism, g: &Morphism) -> Result<limits::PullbackResult> {
        limits::pullback_within(f, g, self.size_bound)
    }
}

impl std::fmt::Debug for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Backend")
            .field("kind", &self.kind)
            .field("label", &self.label)
            .field("objects", &self.objects)
            .finish()
    }
}
