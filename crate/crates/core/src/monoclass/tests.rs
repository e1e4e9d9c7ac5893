use super::laws::*;
use super::*;
use crate::object::BackendKind;
use crate::registry::{self, default_universe};

fn s3_universe() -> Backend {
    default_universe("s3-subgroups", BackendKind::Group).unwrap()
}

fn z4_chain() -> Backend {
    default_universe("z4-chain", BackendKind::AbelianGroup).unwrap()
}

/// Essentiality by raw quantification over morphisms into registered
/// objects. Exact whenever every quotient of the codomain is registered.
fn brute_force_essential(m: &Morphism, backend: &Backend) -> bool {
    backend.objects().iter().all(|b| {
        backend
            .hom(m.cod(), b)
            .unwrap()
            .iter()
            .all(|f| !compose(f, m).unwrap().is_mono() || f.is_mono())
    })
}

#[test]
fn a3_into_s3() {
    let b = s3_universe();
    let (a3, s2) = registry::s3_cospan(&b).unwrap();
    let s = MonoClassSpec::AllMonos;
    let e = is_essential(&a3, &s, &b).unwrap();
    assert!(e.holds);
    assert_eq!(e.exactness, Exactness::Exact);

    let se = is_subobject_essential(&a3, &b).unwrap();
    assert!(!se.holds);
    match se.witness.unwrap() {
        Witness::DisjointSubobject { n } => {
            assert_eq!(n.dom().name(), "S2");
            assert_eq!(n.image().intersection(&a3.image()).len(), 1);
        }
        w => panic!("unexpected witness {w:?}"),
    }

    let st = is_stable_essential(&a3, &s, &b).unwrap();
    assert!(!st.holds);
    let refuted = refute_stable_essential(&a3, &s, &b).unwrap();
    match refuted.witness.unwrap() {
        Witness::RefutingPullback { along, pulled_back, .. } => {
            assert_eq!(along.dom(), s2.dom());
            assert!(along.is_mono());
            assert!(pulled_back.dom().is_zero());
            assert_eq!(pulled_back.cod().name(), "S2");
        }
        w => panic!("unexpected witness {w:?}"),
    }
}

#[test]
fn s2_into_s3_is_not_essential() {
    let b = s3_universe();
    let (_, s2) = registry::s3_cospan(&b).unwrap();
    let v = is_essential(&s2, &MonoClassSpec::AllMonos, &b).unwrap();
    assert!(!v.holds);
    match v.witness.unwrap() {
        Witness::Extension { f } => {
            assert_eq!(f.cod().size(), 2);
            assert!(compose(&f, &s2).unwrap().is_mono());
        }
        w => panic!("unexpected witness {w:?}"),
    }
}

#[test]
fn identities_have_every_property() {
    for b in [s3_universe(), z4_chain()] {
        for obj in b.objects() {
            let r = classify(&Morphism::identity(obj), &MonoClassSpec::AllMonos, &b).unwrap();
            assert!(r.flags.in_s && r.flags.essential);
            assert!(r.flags.subobject_essential && r.flags.stable_essential);
            assert!(r.witnesses.is_empty());
        }
    }
}

#[test]
fn socle_of_z4() {
    let b = z4_chain();
    let soc = registry::socle(&b).unwrap();
    let s = MonoClassSpec::AllMonos;
    assert!(is_subobject_essential(&soc, &b).unwrap().holds);
    assert!(is_stable_essential(&soc, &s, &b).unwrap().holds);
    let bounded = refute_stable_essential(&soc, &s, &b).unwrap();
    assert!(bounded.holds);
    assert_eq!(bounded.exactness, Exactness::Bounded);
}

#[test]
fn exact_decision_matches_brute_force() {
    // quotients of every object in these universes are registered
    for b in [s3_universe(), z4_chain()] {
        for m in b.monos().unwrap() {
            let exact = is_essential(&m, &MonoClassSpec::AllMonos, &b).unwrap().holds;
            assert_eq!(exact, brute_force_essential(&m, &b), "{m:?}");
        }
    }
}

#[test]
fn four_characterizations_agree() {
    for name in ["s3-subgroups", "s4-subgroups"] {
        let b = default_universe(name, BackendKind::Group).unwrap();
        for m in b.monos().unwrap() {
            let a = essential_via_quotients(&m, &b).unwrap().holds;
            assert_eq!(a, essential_via_congruences(&m, &b).unwrap(), "{m:?}");
            assert_eq!(a, essential_via_normal_subobjects(&m, &b).unwrap(), "{m:?}");
            assert_eq!(a, essential_via_kernels(&m, &b).unwrap(), "{m:?}");
        }
    }
}

#[test]
fn precondition_on_non_members() {
    let b = s3_universe();
    let s3 = b.find("S3").unwrap().clone();
    let zero = Morphism::zero(&s3, &s3);
    assert!(matches!(
        is_essential(&zero, &MonoClassSpec::AllMonos, &b),
        Err(CatError::PreconditionViolation(_))
    ));
    assert!(is_subobject_essential(&zero, &b).is_err());
    let (_, s2) = registry::s3_cospan(&b).unwrap();
    assert!(is_essential(&s2, &MonoClassSpec::NormalMonos, &b).is_err());
}

#[test]
fn normal_monos() {
    let b = s3_universe();
    let (a3, s2) = registry::s3_cospan(&b).unwrap();
    assert!(MonoClassSpec::NormalMonos.contains(&a3).unwrap());
    assert!(!MonoClassSpec::NormalMonos.contains(&s2).unwrap());
    let v = is_essential(&a3, &MonoClassSpec::NormalMonos, &b).unwrap();
    assert_eq!(v.exactness, Exactness::Bounded);
}

#[test]
fn stabilization_examples() {
    let b = s3_universe();
    let s3 = b.find("S3").unwrap().clone();
    let essential = EssentialClass::new(MonoClassSpec::AllMonos, &b);
    let into_s3: Vec<Morphism> = b
        .monos()
        .unwrap()
        .into_iter()
        .filter(|m| m.cod() == &s3 && essential.contains(m).unwrap())
        .collect();
    assert!(into_s3.len() >= 2);
    let st = stabilize_within(&into_s3, &essential, &b).unwrap();
    assert_eq!(st.exactness, Exactness::Bounded);
    assert!(st.survivors.iter().all(|m| m.is_iso()));
    assert!(!st.survivors.is_empty());
    // agrees with the subobject-essential decision
    for m in &into_s3 {
        let survived = st.survivors.contains(m);
        assert_eq!(survived, is_subobject_essential(m, &b).unwrap().holds);
    }

    let isos: Vec<Morphism> = b
        .objects()
        .iter()
        .flat_map(|o| b.hom(o, o).unwrap().iter().filter(|f| f.is_iso()).cloned().collect::<Vec<_>>())
        .collect();
    assert_eq!(stabilize(&isos, &b).unwrap().survivors.len(), isos.len());

    let ab = z4_chain();
    let monos = ab.monos().unwrap();
    assert_eq!(stabilize(&monos, &ab).unwrap().survivors.len(), monos.len());
}

#[test]
fn subobject_essential_implies_essential() {
    for name in ["s4-subgroups", "groups-le-8"] {
        let b = default_universe(name, BackendKind::Group).unwrap();
        for m in b.monos().unwrap() {
            if is_subobject_essential(&m, &b).unwrap().holds {
                assert!(is_essential(&m, &MonoClassSpec::AllMonos, &b).unwrap().holds);
            }
        }
    }
}

#[test]
fn abelian_essential_equals_subobject_essential() {
    let b = default_universe("groups-le-8", BackendKind::AbelianGroup).unwrap();
    for m in b.monos().unwrap() {
        assert_eq!(
            is_essential(&m, &MonoClassSpec::AllMonos, &b).unwrap().holds,
            is_subobject_essential(&m, &b).unwrap().holds,
            "{m:?}"
        );
    }
}

#[test]
fn nonzero_monos_into_a_simple_group_are_essential() {
    let b = default_universe("a5-subgroups", BackendKind::Group).unwrap();
    let a5 = b.find("A5").unwrap().clone();
    assert_eq!(b.congruences(&a5).unwrap().len(), 2);
    for m in b.monos().unwrap() {
        if m.cod() == &a5 && !m.dom().is_zero() {
            assert!(is_essential(&m, &MonoClassSpec::AllMonos, &b).unwrap().holds);
        }
    }
}

#[test]
fn weak_left_cancellation_fails_for_essential_monos() {
    let b = default_universe("a5-subgroups", BackendKind::Group).unwrap();
    let s = MonoClassSpec::AllMonos;
    let (mp, m) = registry::a5_chain(&b).unwrap();
    let w = WeakLeftWitness {
        composite: compose(&m, &mp).unwrap(),
        m_prime: mp,
        m,
    };
    assert!(validate_weak_left_witness(&w, &s, &b).unwrap());
    let found = weak_left_cancellation_search(&s, &b).unwrap().unwrap();
    assert!(validate_weak_left_witness(&found, &s, &b).unwrap());
}

#[test]
fn law_suite_on_s3() {
    let b = s3_universe();
    let reports = closure_law_suite(&LawFamily::ALL, &MonoClassSpec::AllMonos, &b).unwrap();
    for r in &reports {
        assert_eq!(r.status, LawStatus::Pass, "{r:?}");
    }
    assert!(reports.iter().any(|r| r.law_id == "st.left-cancel-mono"));
}

#[test]
fn normal_monos_are_not_composition_closed_in_groups() {
    let b = default_universe("s4-subgroups", BackendKind::Group).unwrap();
    let reports = closure_law_suite(&[LawFamily::BaseClass], &MonoClassSpec::NormalMonos, &b).unwrap();
    let comp = reports.iter().find(|r| r.law_id == "s.composition").unwrap();
    assert_eq!(comp.status, LawStatus::Fail);
    assert!(comp.witness.is_some());
}
