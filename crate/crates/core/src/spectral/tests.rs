use super::*;
use crate::object::BackendKind;
use crate::registry::{self, default_universe};

fn s3_universe() -> Backend {
    default_universe("s3-subgroups", BackendKind::Group).unwrap()
}

fn z4_chain() -> Backend {
    default_universe("z4-chain", BackendKind::AbelianGroup).unwrap()
}

#[test]
fn z4_chain_hom_counts() {
    let b = z4_chain();
    let spec = build_spec(&b, MonoClassSpec::AllMonos).unwrap();
    assert_eq!(spec.exactness(), Exactness::Exact);
    let z2 = b.find("Z2").unwrap().clone();
    let z4 = b.find("Z4").unwrap().clone();
    assert_eq!(spec.hom(&z4, &z4).unwrap().len(), 2);
    assert_eq!(spec.hom(&z2, &z4).unwrap().len(), 2);
    assert_eq!(spec.hom(&z4, &z2).unwrap().len(), 2);
    assert_eq!(spec.hom(b.zero(), b.zero()).unwrap().len(), 1);
}

#[test]
fn s3_endomorphisms_are_plain_endomorphisms() {
    let b = s3_universe();
    let spec = build_spec(&b, MonoClassSpec::AllMonos).unwrap();
    let s3 = b.find("S3").unwrap().clone();
    assert_eq!(spec.hom(&s3, &s3).unwrap().len(), 10);
    let homs = b.hom(&s3, &s3).unwrap();
    for f in homs.iter() {
        for g in homs.iter() {
            let pgf = spec.canonical_functor(&compose(g, f).unwrap()).unwrap();
            let composite = spec
                .compose(spec.canonical_functor(g).unwrap(), spec.canonical_functor(f).unwrap())
                .unwrap();
            assert_eq!(pgf, composite);
        }
    }
}

fn check_category_laws(spec: &SpectralCategory) {
    let objs = spec.objects();
    for a in objs {
        let id_a = spec.identity(a).unwrap();
        for b in objs {
            let id_b = spec.identity(b).unwrap();
            for f in spec.class_ids(a, b).unwrap() {
                assert_eq!(spec.compose(f, id_a).unwrap(), f);
                assert_eq!(spec.compose(id_b, f).unwrap(), f);
                // zero absorption
                for c in objs {
                    let z = spec.zero_class(b, c).unwrap();
                    assert_eq!(spec.compose(z, f).unwrap(), spec.zero_class(a, c).unwrap());
                    for g in spec.class_ids(b, c).unwrap() {
                        let gf = spec.compose(g, f).unwrap();
                        for d in objs {
                            for h in spec.class_ids(c, d).unwrap() {
                                let l = spec.compose(h, gf).unwrap();
                                let r = spec.compose(spec.compose(h, g).unwrap(), f).unwrap();
                                assert_eq!(l, r);
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn associative_unital_and_pointed() {
    for b in [z4_chain(), s3_universe()] {
        let spec = build_spec(&b, MonoClassSpec::AllMonos).unwrap();
        check_category_laws(&spec);
        assert!(check_functor_laws(&spec).unwrap().is_none());
    }
}

#[test]
fn members_become_invertible() {
    for b in [z4_chain(), s3_universe()] {
        let spec = build_spec(&b, MonoClassSpec::AllMonos).unwrap();
        for m in b.monos().unwrap() {
            let invertible = spec.is_invertible(spec.canonical_functor(&m).unwrap()).unwrap();
            if spec.inverted_class().contains(&m).unwrap() {
                assert!(invertible, "{m:?}");
            }
        }
    }
}

#[test]
fn socle_has_an_inverse_class() {
    let b = z4_chain();
    let spec = build_spec(&b, MonoClassSpec::AllMonos).unwrap();
    let soc = registry::socle(&b).unwrap();
    let inv = spec.inverse(spec.canonical_functor(&soc).unwrap()).unwrap().unwrap();
    let rep = spec.representative(inv);
    assert_eq!(rep.left().image(), soc.image());
    assert!(rep.right().is_iso());
}

#[test]
fn zero_functor_value() {
    let b = s3_universe();
    let spec = build_spec(&b, MonoClassSpec::AllMonos).unwrap();
    for x in b.objects() {
        for y in b.objects() {
            let z = Morphism::zero(x, y);
            assert_eq!(spec.canonical_functor(&z).unwrap(), spec.zero_class(x, y).unwrap());
        }
    }
}

#[test]
fn limit_preservation_small() {
    for b in [z4_chain(), s3_universe()] {
        let spec = build_spec(&b, MonoClassSpec::AllMonos).unwrap();
        let cospans = registered_cospans(&b).unwrap();
        let r = verify_limit_preservation(&spec, &cospans).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.exactness, Exactness::Bounded);
    }
}

#[test]
fn least_subobjects() {
    let ab = z4_chain();
    let spec = build_spec(&ab, MonoClassSpec::AllMonos).unwrap();
    let z4 = ab.find("Z4").unwrap().clone();
    let min = minimal_m_subobject(&z4, &spec).unwrap();
    assert_eq!(min.subobject.object().name(), "Z2");
    assert!(minimal_m_subobject(ab.zero(), &spec).unwrap().subobject.is_zero());

    let g = s3_universe();
    let spec = build_spec(&g, MonoClassSpec::AllMonos).unwrap();
    let s3 = g.find("S3").unwrap().clone();
    assert!(minimal_m_subobject(&s3, &spec).unwrap().subobject.is_whole());
    for a in g.objects() {
        minimal_m_subobject(a, &spec).unwrap();
    }
}

#[test]
fn uniform_objects() {
    let ab = z4_chain();
    let m = SubobjectEssentialClass::new(&ab);
    assert!(is_uniform(ab.find("Z4").unwrap(), &m, &ab).unwrap().uniform);
    let g = s3_universe();
    let m = SubobjectEssentialClass::new(&g);
    let r = is_uniform(g.find("S3").unwrap(), &m, &g).unwrap();
    assert!(!r.uniform);
    assert_eq!(r.witness.unwrap().dom().name(), "S2");
    let z5 = default_universe("z5", BackendKind::Group).unwrap();
    let m = SubobjectEssentialClass::new(&z5);
    assert!(is_uniform(z5.find("Z5").unwrap(), &m, &z5).unwrap().uniform);
}

#[test]
fn division_monoids() {
    let ab = z4_chain();
    let spec = build_spec(&ab, MonoClassSpec::AllMonos).unwrap();
    let r = end_spec_division_check(ab.find("Z4").unwrap(), &spec).unwrap();
    assert_eq!((r.size, r.division_monoid, r.uniform), (2, true, true));

    let z5 = default_universe("z5", BackendKind::Group).unwrap();
    let spec = build_spec(&z5, MonoClassSpec::AllMonos).unwrap();
    let r = end_spec_division_check(z5.find("Z5").unwrap(), &spec).unwrap();
    assert_eq!((r.size, r.invertible.len(), r.division_monoid), (5, 4, true));

    let g = s3_universe();
    let spec = build_spec(&g, MonoClassSpec::AllMonos).unwrap();
    let r = end_spec_division_check(g.find("S3").unwrap(), &spec).unwrap();
    assert_eq!((r.size, r.invertible.len(), r.division_monoid), (10, 6, false));
}

#[test]
fn nonzero_classes_between_uniform_objects_are_invertible() {
    let b = z4_chain();
    let spec = build_spec(&b, MonoClassSpec::AllMonos).unwrap();
    let m = spec.inverted_class();
    for x in b.objects() {
        for y in b.objects() {
            let ux = is_uniform(x, m, &b).unwrap().uniform;
            let uy = is_uniform(y, m, &b).unwrap().uniform;
            if !(ux && uy) || x.is_zero() || y.is_zero() {
                continue;
            }
            let zero = spec.zero_class(x, y).unwrap();
            for c in spec.class_ids(x, y).unwrap() {
                if c != zero {
                    assert!(spec.is_invertible(c).unwrap());
                }
            }
        }
    }
}

#[test]
fn normal_monos_are_refused_as_base_class() {
    let b = default_universe("s4-subgroups", BackendKind::Group).unwrap();
    assert!(matches!(
        build_spec(&b, MonoClassSpec::NormalMonos),
        Err(CatError::ConditionFailed { .. })
    ));
}

#[test]
fn pointed_sets_use_the_bounded_stabilization() {
    let b = default_universe("pset-small", BackendKind::PointedSet).unwrap();
    let spec = build_spec(&b, MonoClassSpec::AllMonos).unwrap();
    assert_eq!(spec.exactness(), Exactness::Bounded);
    check_category_laws(&spec);
}

#[test]
fn export_shape() {
    let b = default_universe("trivial", BackendKind::Group).unwrap();
    let spec = build_spec(&b, MonoClassSpec::AllMonos).unwrap();
    let json = serde_json::to_string(&spec.export()).unwrap();
    assert_eq!(
        json,
        r#"{"objects":[{"name":"0","kind":"grp","size":1,"cayley":[[0]]}],"homs":[{"dom":"0","cod":"0","classes":[{"rep_left":[0],"rep_right":[0]}]}],"composition":[[0,0,0]]}"#
    );
}
