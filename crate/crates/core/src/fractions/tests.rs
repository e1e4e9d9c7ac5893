use super::*;
use crate::monoclass::{EssentialClass, MonoClassSpec, SubobjectEssentialClass};
use crate::object::BackendKind;
use crate::registry::{self, default_universe};

fn s3_universe() -> Backend {
    default_universe("s3-subgroups", BackendKind::Group).unwrap()
}

fn z4_chain() -> Backend {
    default_universe("z4-chain", BackendKind::AbelianGroup).unwrap()
}

/// All spans `a → b` whose left leg is an `m`-subobject inclusion.
fn spans(a: &Obj, b: &Obj, m: &dyn MonoClass, backend: &Backend) -> Vec<Span> {
    let mut out = Vec::new();
    for x in class_subobjects(m, a, backend).unwrap() {
        for f in backend.hom(x.object(), b).unwrap().iter() {
            out.push(Span::new(x.inclusion().clone(), f.clone()).unwrap());
        }
    }
    out
}

fn equal(s: &Span, t: &Span, m: &dyn MonoClass, b: &Backend) -> bool {
    fraction_equal(s, t, m, b, DiamondSearch::Unrestricted).unwrap().is_some()
}

#[test]
fn composing_with_identity_span() {
    let b = z4_chain();
    let m = SubobjectEssentialClass::new(&b);
    for a in b.objects() {
        for c in b.objects() {
            for s in spans(a, c, &m, &b) {
                let left = span_compose(&s, &Span::identity(a), &b).unwrap();
                let right = span_compose(&Span::identity(c), &s, &b).unwrap();
                assert_eq!(normalize(&left, &b).unwrap(), s);
                assert_eq!(normalize(&right, &b).unwrap(), s);
            }
        }
    }
}

#[test]
fn socle_span_composed_with_itself() {
    let b = z4_chain();
    let soc = registry::socle(&b).unwrap();
    let z2 = soc.dom().clone();
    let s = Span::new(Morphism::identity(&z2), soc.clone()).unwrap();
    let t = Span::new(soc.clone(), Morphism::identity(&z2)).unwrap();
    // (id, soc) after (soc, id): pullback of soc along soc is Z2
    let c = span_compose(&t, &s, &b).unwrap();
    assert_eq!(c.apex().size(), 2);
    assert!(c.left().is_iso() && c.right().is_iso());
}

#[test]
fn quotient_after_inclusion_is_zero() {
    let b = s3_universe();
    let (a3, _) = registry::s3_cospan(&b).unwrap();
    let s3 = a3.cod().clone();
    let s2 = b.find("S2").unwrap().clone();
    let quotient = b
        .hom(&s3, &s2)
        .unwrap()
        .iter()
        .find(|f| !f.is_zero_map())
        .unwrap()
        .clone();
    let c = span_compose(&Span::of_morphism(&quotient), &Span::of_morphism(&a3), &b).unwrap();
    assert!(c.right().is_zero_map());
}

#[test]
fn composition_mismatch() {
    let b = s3_universe();
    let (a3, s2) = registry::s3_cospan(&b).unwrap();
    assert!(matches!(
        span_compose(&Span::of_morphism(&a3), &Span::of_morphism(&s2), &b),
        Err(CatError::CompositionMismatch { .. })
    ));
}

#[test]
fn fraction_equality_examples() {
    let b = z4_chain();
    let m = SubobjectEssentialClass::new(&b);
    let soc = registry::socle(&b).unwrap();
    let z2 = soc.dom().clone();
    let z4 = soc.cod().clone();
    let zero = Span::new(soc.clone(), Morphism::zero(&z2, &z4)).unwrap();
    let incl = Span::new(soc.clone(), soc.clone()).unwrap();
    assert!(equal(&zero, &zero, &m, &b));
    assert!(!equal(&zero, &incl, &m, &b));

    // (f w, x w) with w in M presents the same fraction as (f, x)
    let id4 = Morphism::identity(&z4);
    for f in b.hom(&z4, &z4).unwrap().iter() {
        let s = Span::new(id4.clone(), f.clone()).unwrap();
        let t = Span::new(soc.clone(), compose(f, &soc).unwrap()).unwrap();
        let d = fraction_equal(&s, &t, &m, &b, DiamondSearch::Unrestricted).unwrap().unwrap();
        assert_eq!(d.u.dom().size(), 2);
    }
}

#[test]
fn rejects_left_legs_outside_the_class() {
    let b = s3_universe();
    let m = SubobjectEssentialClass::new(&b);
    let (a3, _) = registry::s3_cospan(&b).unwrap();
    let s = Span::new(a3.clone(), a3.clone()).unwrap();
    assert!(matches!(
        fraction_equal(&s, &s, &m, &b, DiamondSearch::Unrestricted),
        Err(CatError::PreconditionViolation(_))
    ));
}

fn check_equivalence(b: &Backend, m: &dyn MonoClass) {
    for a in b.objects() {
        for c in b.objects() {
            let all = spans(a, c, m, b);
            let rel: Vec<Vec<bool>> = all
                .iter()
                .map(|s| all.iter().map(|t| equal(s, t, m, b)).collect())
                .collect();
            for i in 0..all.len() {
                assert!(rel[i][i]);
                for j in 0..all.len() {
                    assert_eq!(rel[i][j], rel[j][i]);
                    let members = fraction_equal(&all[i], &all[j], m, b, DiamondSearch::MembersOnly)
                        .unwrap()
                        .is_some();
                    assert_eq!(members, rel[i][j], "{:?} vs {:?}", all[i], all[j]);
                    for k in 0..all.len() {
                        if rel[i][j] && rel[j][k] {
                            assert!(rel[i][k]);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn fraction_equality_is_an_equivalence() {
    let b = z4_chain();
    check_equivalence(&b, &SubobjectEssentialClass::new(&b));
    let g = s3_universe();
    check_equivalence(&g, &SubobjectEssentialClass::new(&g));
    let d4 = default_universe("groups-le-8", BackendKind::AbelianGroup).unwrap();
    check_equivalence(&d4, &SubobjectEssentialClass::new(&d4));
}

#[test]
fn composition_respects_fraction_equality() {
    let b = z4_chain();
    let m = SubobjectEssentialClass::new(&b);
    let objs = b.objects();
    for a in objs {
        for x in objs {
            for c in objs {
                let first = spans(a, x, &m, &b);
                let second = spans(x, c, &m, &b);
                for s1 in &first {
                    for t1 in first.iter().filter(|t| equal(s1, t, &m, &b)) {
                        for s2 in &second {
                            for t2 in second.iter().filter(|t| equal(s2, t, &m, &b)) {
                                let l = span_compose(s2, s1, &b).unwrap();
                                let r = span_compose(t2, t1, &b).unwrap();
                                assert!(m.contains(l.left()).unwrap());
                                assert!(equal(&l, &r, &m, &b));
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn class_level_associativity() {
    let b = s3_universe();
    let m = SubobjectEssentialClass::new(&b);
    let objs = b.objects();
    for a in objs {
        for x in objs {
            for y in objs {
                for c in objs {
                    for s1 in spans(a, x, &m, &b) {
                        for s2 in spans(x, y, &m, &b) {
                            for s3 in spans(y, c, &m, &b) {
                                let l = span_compose(&s3, &span_compose(&s2, &s1, &b).unwrap(), &b).unwrap();
                                let r = span_compose(&span_compose(&s3, &s2, &b).unwrap(), &s1, &b).unwrap();
                                assert!(equal(&l, &r, &m, &b));
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn hom_class_counts() {
    let ab = z4_chain();
    let m = SubobjectEssentialClass::new(&ab);
    let z4 = ab.find("Z4").unwrap().clone();
    for b in ab.objects() {
        assert_eq!(poincare_hom(ab.zero(), b, &m, &ab).unwrap().len(), 1);
    }
    assert_eq!(poincare_hom(&z4, &z4, &m, &ab).unwrap().len(), 2);

    let g = s3_universe();
    let m = SubobjectEssentialClass::new(&g);
    let s3 = g.find("S3").unwrap().clone();
    assert_eq!(poincare_hom(&s3, &s3, &m, &g).unwrap().len(), 10);
}

#[test]
fn zigzag_components_match_hom_classes() {
    for b in [z4_chain(), s3_universe()] {
        let m = SubobjectEssentialClass::new(&b);
        for a in b.objects() {
            for c in b.objects() {
                let classes = poincare_hom(a, c, &m, &b).unwrap();
                assert_eq!(zigzag_components(a, c, &m, &b).unwrap(), classes.len());
                for s in spans(a, c, &m, &b) {
                    let id = classes.class_of(&s, &m, &b).unwrap();
                    assert!(equal(&classes.classes()[id].representative, &s, &m, &b));
                }
            }
        }
    }
}

#[test]
fn focal_conditions() {
    let b = s3_universe();
    let se = SubobjectEssentialClass::new(&b);
    for r in check_focal(&se, &b).unwrap() {
        assert_eq!(r.status, ConditionStatus::Pass, "{r:?}");
    }
    let ids = MonoClassSpec::identities(&b);
    for r in check_focal(&ids, &b).unwrap() {
        assert_eq!(r.status, ConditionStatus::Pass, "{r:?}");
    }
    let essential = EssentialClass::new(MonoClassSpec::AllMonos, &b);
    let reports = check_focal(&essential, &b).unwrap();
    let f2 = reports.iter().find(|r| r.condition == Condition::F2).unwrap();
    assert_eq!(f2.status, ConditionStatus::Fail);
    let w = f2.witness.as_ref().unwrap();
    assert_eq!(w.morphisms["s"].dom().name(), "A3");
    assert_eq!(w.morphisms["f"].dom().name(), "S2");
    assert!(w.morphisms["f"].is_mono());
}
