//! Exhaustive checks of the closure and cancellation laws of the mono
//! classes over a registered universe.
//!
//! Composites are written as in `m ∘ m'` with `m': M' → M` and `m: M → A`.
//! Law instances range over morphisms between registered objects; `m'` is
//! always a mono (otherwise `m ∘ m'` cannot lie in a class of monos).

use std::collections::BTreeMap;

use serde::Serialize;

use super::{EssentialClass, MonoClass, MonoClassSpec, Stabilized, SubobjectEssentialClass};
use crate::backend::Backend;
use crate::error::Result;
use crate::morphism::{compose, Morphism};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LawStatus {
    Pass,
    Fail,
    /// A conditional law whose hypothesis does not hold on the universe.
    Vacuous,
}

#[derive(Debug, Clone, Serialize)]
pub struct LawWitness {
    pub note: String,
    pub morphisms: BTreeMap<String, Morphism>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LawReport {
    pub law_id: String,
    pub universe_descriptor: String,
    pub status: LawStatus,
    pub instances: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<LawWitness>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LawFamily {
    /// Stabilization of the essential monos, as a class built from an
    /// arbitrary class `M`.
    Stabilization,
    Essential,
    StableEssential,
    SubobjectEssential,
    /// The standing hypotheses on the designated class `S`.
    BaseClass,
}

impl LawFamily {
    pub const ALL: [LawFamily; 5] = [
        LawFamily::BaseClass,
        LawFamily::Stabilization,
        LawFamily::Essential,
        LawFamily::StableEssential,
        LawFamily::SubobjectEssential,
    ];
}

/// Outcome of a single law check before it is stamped with its id.
struct Outcome {
    instances: usize,
    witness: Option<LawWitness>,
}

impl Outcome {
    fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

fn witness(note: &str, parts: &[(&str, &Morphism)]) -> Option<LawWitness> {
    Some(LawWitness {
        note: note.to_string(),
        morphisms: parts
            .iter()
            .map(|(k, m)| (k.to_string(), (*m).clone()))
            .collect(),
    })
}

/// Composable pairs `(m', m)` over the registry, with `m'` mono.
struct Pairs {
    pairs: Vec<(Morphism, Morphism, Morphism)>,
    monos: Vec<Morphism>,
    all: Vec<Morphism>,
}

impl Pairs {
    fn build(backend: &Backend) -> Result<Self> {
        let objects = backend.objects();
        let mut all = Vec::new();
        for a in objects {
            for b in objects {
                all.extend(backend.hom(a, b)?.iter().cloned());
            }
        }
        let monos: Vec<Morphism> = all.iter().filter(|m| m.is_mono()).cloned().collect();
        let mut pairs = Vec::new();
        for mp in &monos {
            for m in all.iter().filter(|m| m.dom() == mp.cod()) {
                let c = compose(m, mp)?;
                pairs.push((mp.clone(), m.clone(), c));
            }
        }
        Ok(Pairs { pairs, monos, all })
    }
}

struct Checker<'a> {
    backend: &'a Backend,
    pairs: Pairs,
}

impl<'a> Checker<'a> {
    fn contains_isos(&self, class: &dyn MonoClass) -> Result<Outcome> {
        let mut n = 0;
        for f in self.pairs.all.iter().filter(|f| f.is_iso()) {
            n += 1;
            if !class.contains(f)? {
                return Ok(Outcome {
                    instances: n,
                    witness: witness("isomorphism outside the class", &[("iso", f)]),
                });
            }
        }
        Ok(Outcome { instances: n, witness: None })
    }

    fn composition(&self, class: &dyn MonoClass) -> Result<Outcome> {
        let mut n = 0;
        for (mp, m, c) in &self.pairs.pairs {
            if !m.is_mono() || !class.contains(mp)? || !class.contains(m)? {
                continue;
            }
            n += 1;
            if !class.contains(c)? {
                return Ok(Outcome {
                    instances: n,
                    witness: witness("members whose composite is not a member", &[("m'", mp), ("m", m)]),
                });
            }
        }
        Ok(Outcome { instances: n, witness: None })
    }

    fn pullback_stable(&self, class: &dyn MonoClass) -> Result<Outcome> {
        let mut n = 0;
        for m in &self.pairs.monos {
            if !class.contains(m)? {
                continue;
            }
            for x_obj in self.backend.objects() {
                for x in self.backend.hom(x_obj, m.cod())?.iter() {
                    n += 1;
                    let pb = self.backend.pullback(m, x)?;
                    if !class.contains(&pb.proj_right)? {
                        return Ok(Outcome {
                            instances: n,
                            witness: witness(
                                "pullback of a member is not a member",
                                &[("m", m), ("along", x), ("pulled_back", &pb.proj_right)],
                            ),
                        });
                    }
                }
            }
        }
        Ok(Outcome { instances: n, witness: None })
    }

    /// `(m∘m' ∈ C & side(m', m)) ⇒ m ∈ C`.
    fn right_cancel(
        &self,
        class: &dyn MonoClass,
        monos_only: bool,
        side: &dyn Fn(&Morphism, &Morphism) -> Result<bool>,
        note: &str,
    ) -> Result<Outcome> {
        let mut n = 0;
        for (mp, m, c) in &self.pairs.pairs {
            if monos_only && !m.is_mono() {
                continue;
            }
            if !class.contains(c)? || !side(mp, m)? {
                continue;
            }
            n += 1;
            if !class.contains(m)? {
                return Ok(Outcome {
                    instances: n,
                    witness: witness(note, &[("m'", mp), ("m", m)]),
                });
            }
        }
        Ok(Outcome { instances: n, witness: None })
    }

    /// `(m∘m' ∈ C & side(m)) ⇒ m' ∈ C`.
    fn left_cancel(
        &self,
        class: &dyn MonoClass,
        side: &dyn Fn(&Morphism) -> Result<bool>,
        note: &str,
    ) -> Result<Outcome> {
        let mut n = 0;
        for (mp, m, c) in &self.pairs.pairs {
            if !class.contains(c)? || !side(m)? {
                continue;
            }
            n += 1;
            if !class.contains(mp)? {
                return Ok(Outcome {
                    instances: n,
                    witness: witness(note, &[("m'", mp), ("m", m)]),
                });
            }
        }
        Ok(Outcome { instances: n, witness: None })
    }

    /// Split monos in the class are isomorphisms; retractions are found by
    /// enumerating `hom(A, M)`.
    fn split_monos_are_isos(&self, class: &dyn MonoClass) -> Result<Outcome> {
        let mut n = 0;
        for m in &self.pairs.monos {
            if m.is_iso() || !class.contains(m)? {
                continue;
            }
            n += 1;
            let id = Morphism::identity(m.dom());
            for r in self.backend.hom(m.cod(), m.dom())?.iter() {
                if compose(r, m)? == id {
                    return Ok(Outcome {
                        instances: n,
                        witness: witness(
                            "split member that is not an isomorphism",
                            &[("m", m), ("retraction", r)],
                        ),
                    });
                }
            }
        }
        Ok(Outcome { instances: n, witness: None })
    }

    /// Every mono `m'` is the pullback of `m∘m'` along a mono `m`.
    fn composite_pullback(&self) -> Result<Outcome> {
        let mut n = 0;
        for (mp, m, c) in &self.pairs.pairs {
            if !m.is_mono() {
                continue;
            }
            n += 1;
            let pb = self.backend.pullback(c, m)?;
            if pb.proj_right.image() != mp.image() {
                return Ok(Outcome {
                    instances: n,
                    witness: witness(
                        "pullback of the composite differs from the first factor",
                        &[("m'", mp), ("m", m)],
                    ),
                });
            }
        }
        Ok(Outcome { instances: n, witness: None })
    }
}

struct Reports {
    universe: String,
    out: Vec<LawReport>,
}

impl Reports {
    fn push(&mut self, id: &str, o: Outcome) {
        let status = if o.passed() { LawStatus::Pass } else { LawStatus::Fail };
        self.out.push(LawReport {
            law_id: id.to_string(),
            universe_descriptor: self.universe.clone(),
            status,
            instances: o.instances,
            witness: o.witness,
        });
    }

    /// A law that only applies when `hyp` holds on the universe.
    fn push_conditional(&mut self, id: &str, hyp: Outcome, concl: impl FnOnce() -> Result<Outcome>) -> Result<()> {
        if hyp.passed() {
            self.push(id, concl()?);
        } else {
            self.out.push(LawReport {
                law_id: id.to_string(),
                universe_descriptor: self.universe.clone(),
                status: LawStatus::Vacuous,
                instances: 0,
                witness: hyp.witness,
            });
        }
        Ok(())
    }

    fn push_vacuous(&mut self, id: &str, note: &str) {
        self.out.push(LawReport {
            law_id: id.to_string(),
            universe_descriptor: self.universe.clone(),
            status: LawStatus::Vacuous,
            instances: 0,
            witness: Some(LawWitness {
                note: note.to_string(),
                morphisms: BTreeMap::new(),
            }),
        });
    }
}

/// Runs the selected law families over every registered object of
/// `backend`, with the designated class `s`.
pub fn closure_law_suite(
    families: &[LawFamily],
    s: &MonoClassSpec,
    backend: &Backend,
) -> Result<Vec<LawReport>> {
    let checker = Checker {
        backend,
        pairs: Pairs::build(backend)?,
    };
    let mut reports = Reports {
        universe: backend.label().to_string(),
        out: Vec::new(),
    };
    let essential = EssentialClass::new(s.clone(), backend);
    let stable = Stabilized::new(EssentialClass::new(s.clone(), backend), backend);
    let se = SubobjectEssentialClass::new(backend);
    let in_s = |m: &Morphism| s.contains(m);
    let is_mono = |m: &Morphism| Ok(m.is_mono());
    for family in families {
        match family {
            LawFamily::BaseClass => {
                reports.push("s.contains-isos", checker.contains_isos(s)?);
                reports.push("s.composition", checker.composition(s)?);
                reports.push("s.pullback-stable", checker.pullback_stable(s)?);
                reports.push(
                    "s.strong-left-cancel",
                    checker.left_cancel(s, &|_| Ok(true), "composite in S, first factor not")?,
                );
            }
            LawFamily::Stabilization => {
                let m_class: &dyn MonoClass = &essential;
                let st: &dyn MonoClass = &stable;
                reports.push("st.pullback-stable", checker.pullback_stable(st)?);
                reports.push_conditional("st.contains-isos", checker.contains_isos(m_class)?, || {
                    checker.contains_isos(st)
                })?;
                reports.push_conditional("st.composition", checker.composition(m_class)?, || {
                    checker.composition(st)
                })?;
                // right cancellation relative to S, with the side condition on m'
                let side = |mp: &Morphism, _: &Morphism| in_s(mp);
                let note = "composite and m' qualify, m does not";
                reports.push_conditional(
                    "st.right-cancel-rel-s",
                    checker.right_cancel(m_class, true, &side, note)?,
                    || checker.right_cancel(st, true, &side, note),
                )?;
                let weak_m = |mp: &Morphism, _: &Morphism| m_class.contains(mp);
                let weak_st = |mp: &Morphism, _: &Morphism| st.contains(mp);
                reports.push_conditional(
                    "st.weak-right-cancel",
                    checker.right_cancel(m_class, false, &weak_m, note)?,
                    || checker.right_cancel(st, false, &weak_st, note),
                )?;
                reports.push(
                    "st.left-cancel-mono",
                    checker.left_cancel(st, &is_mono, "composite in class with m mono, m' not")?,
                );
            }
            LawFamily::Essential => {
                let e: &dyn MonoClass = &essential;
                reports.push("e.contains-isos", checker.contains_isos(e)?);
                reports.push("e.composition", checker.composition(e)?);
                let note = "composite qualifies, m does not";
                reports.push(
                    "e.right-cancel-in-s",
                    checker.right_cancel(e, false, &|_, m| in_s(m), note)?,
                );
                reports.push(
                    "e.weak-right-cancel",
                    checker.right_cancel(e, false, &|mp, _| e.contains(mp), note)?,
                );
                reports.push("e.split-mono-iso", checker.split_monos_are_isos(e)?);
            }
            LawFamily::StableEssential => {
                let st: &dyn MonoClass = &stable;
                let note = "composite qualifies, m does not";
                reports.push("se-st.pullback-stable", checker.pullback_stable(st)?);
                reports.push("se-st.contains-isos", checker.contains_isos(st)?);
                reports.push("se-st.composition", checker.composition(st)?);
                reports.push(
                    "se-st.right-cancel-in-s",
                    checker.right_cancel(st, false, &|_, m| in_s(m), note)?,
                );
                reports.push(
                    "se-st.weak-right-cancel",
                    checker.right_cancel(st, false, &|mp, _| st.contains(mp), note)?,
                );
                reports.push("se-st.split-mono-iso", checker.split_monos_are_isos(st)?);
                reports.push(
                    "se-st.left-cancel-mono",
                    checker.left_cancel(st, &is_mono, "composite in class with m mono, m' not")?,
                );
            }
            LawFamily::SubobjectEssential => {
                let c: &dyn MonoClass = &se;
                let note = "composite qualifies, m does not";
                reports.push("sub.contains-isos", checker.contains_isos(c)?);
                reports.push("sub.composition", checker.composition(c)?);
                reports.push(
                    "sub.right-cancel-mono",
                    checker.right_cancel(c, false, &|_, m| Ok(m.is_mono()), note)?,
                );
                let normal = backend.kind().is_normal();
                if normal {
                    reports.push(
                        "sub.weak-right-cancel",
                        checker.right_cancel(c, false, &|mp, _| c.contains(mp), note)?,
                    );
                    reports.push("sub.split-mono-iso", checker.split_monos_are_isos(c)?);
                } else {
                    reports.push_vacuous("sub.weak-right-cancel", "requires a normal backend");
                    reports.push_vacuous("sub.split-mono-iso", "requires a normal backend");
                }
                reports.push(
                    "sub.left-cancel-mono",
                    checker.left_cancel(c, &is_mono, "composite in class with m mono, m' not")?,
                );
                if normal {
                    reports.push("sub.pullback-stable", checker.pullback_stable(c)?);
                } else {
                    reports.push_vacuous("sub.pullback-stable", "requires a normal backend");
                }
                reports.push("mono.composite-pullback", checker.composite_pullback()?);
            }
        }
    }
    Ok(reports.out)
}

/// A triple refuting weak left cancellation: `m` and `m∘m'` are members,
/// `m'` is not.
#[derive(Debug, Clone, Serialize)]
pub struct WeakLeftWitness {
    pub m_prime: Morphism,
    pub m: Morphism,
    pub composite: Morphism,
}

/// Searches the registry for a failure of weak left cancellation for the
/// `s`-essential monos. Pairs are visited in registry order.
pub fn weak_left_cancellation_search(
    s: &MonoClassSpec,
    backend: &Backend,
) -> Result<Option<WeakLeftWitness>> {
    let essential = EssentialClass::new(s.clone(), backend);
    let pairs = Pairs::build(backend)?;
    for (mp, m, c) in &pairs.pairs {
        if !m.is_mono() {
            continue;
        }
        if essential.contains(m)? && essential.contains(c)? && !essential.contains(mp)? {
            return Ok(Some(WeakLeftWitness {
                m_prime: mp.clone(),
                m: m.clone(),
                composite: c.clone(),
            }));
        }
    }
    Ok(None)
}

/// Re-checks a claimed weak-left-cancellation witness with the direct
/// (non-memoized) essentiality decision.
pub fn validate_weak_left_witness(
    w: &WeakLeftWitness,
    s: &MonoClassSpec,
    backend: &Backend,
) -> Result<bool> {
    if compose(&w.m, &w.m_prime)? != w.composite {
        return Ok(false);
    }
    let ess = |m: &Morphism| -> Result<bool> {
        Ok(s.contains(m)? && super::is_essential(m, s, backend)?.holds)
    };
    Ok(ess(&w.m)? && ess(&w.composite)? && !ess(&w.m_prime)?)
}
