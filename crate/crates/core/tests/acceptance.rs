//! Acceptance gate. Runs each criterion in sequence under its time limit
//! and prints one PASS/FAIL line per criterion.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use fracspec::elemset::ElemSet;
use fracspec::fractions::{check_focal, poincare_hom, Condition, ConditionStatus};
use fracspec::limits::{check_normal_backend, NormalityWitness};
use fracspec::monoclass::laws::{
    closure_law_suite, validate_weak_left_witness, weak_left_cancellation_search, LawFamily, LawStatus,
    WeakLeftWitness,
};
use fracspec::monoclass::{
    classify, essential_via_congruences, essential_via_kernels, essential_via_normal_subobjects,
    essential_via_quotients, is_subobject_essential, preimage, refute_stable_essential, EssentialClass,
    Exactness, MonoClassSpec, SubobjectEssentialClass, Witness,
};
use fracspec::registry::{self, default_universe};
use fracspec::spectral::{build_spec, end_spec_division_check, registered_cospans, verify_limit_preservation};
use fracspec::{compose, Backend, BackendKind, Morphism, Obj, Subobject};

const SECOND: Duration = Duration::from_secs(1);
const MINUTE: Duration = Duration::from_secs(60);

fn grp(name: &str) -> Backend {
    default_universe(name, BackendKind::Group).unwrap()
}

fn ab(name: &str) -> Backend {
    default_universe(name, BackendKind::AbelianGroup).unwrap()
}

fn named(b: &Backend, name: &str) -> Obj {
    b.find(name).unwrap_or_else(|| panic!("{name} not registered")).clone()
}

/// Independent check of a refuting pullback: `u` is the pullback of `m`
/// along `along`, and `f` extends `u` to a mono without being one.
fn check_refuting_pullback(m: &Morphism, w: &Witness) {
    let Witness::RefutingPullback { along, pulled_back, inner } = w else {
        panic!("expected a refuting pullback, got {w:?}");
    };
    assert_eq!(along.cod(), m.cod());
    assert!(pulled_back.is_mono());
    assert_eq!(pulled_back.cod(), along.dom());
    assert_eq!(pulled_back.image(), preimage(along, &m.image()));
    let Witness::Extension { f } = inner.as_ref() else {
        panic!("expected an extension witness, got {inner:?}");
    };
    assert!(!f.is_mono());
    assert!(compose(f, pulled_back).unwrap().is_mono());
}

/// Subobject-essential subsets of `a` by direct quantification over
/// subgroups: those meeting every nontrivial subgroup nontrivially.
fn large_subsets(a: &Obj) -> Vec<ElemSet> {
    let subs = fracspec::subobject::subobject_sets(a);
    subs.iter()
        .filter(|n| subs.iter().all(|k| k.len() == 1 || k.intersection(n).len() > 1))
        .cloned()
        .collect()
}

fn c1() {
    let b = grp("s3-subgroups");
    let (a3, s2) = registry::s3_cospan(&b).unwrap();
    assert_eq!(a3.dom().name(), "A3");
    assert_eq!(s2.dom().name(), "S2");
    let r = classify(&a3, &MonoClassSpec::AllMonos, &b).unwrap();
    assert!(r.flags.in_s);
    assert!(r.flags.essential);
    assert!(!r.flags.subobject_essential);
    assert!(!r.flags.stable_essential);
    assert_eq!(r.essential_exactness, Exactness::Exact);
    assert_eq!(r.stable_exactness, Exactness::Exact);

    let pb = b.pullback(&a3, &s2).unwrap();
    assert!(pb.apex.is_zero());
    assert!(pb.proj_right.is_mono());
    assert_eq!(pb.proj_right.cod().name(), "S2");
    assert!(!fracspec::monoclass::is_essential(&pb.proj_right, &MonoClassSpec::AllMonos, &b)
        .unwrap()
        .holds);

    let refuted = refute_stable_essential(&a3, &MonoClassSpec::AllMonos, &b).unwrap();
    assert!(!refuted.holds);
    let w = refuted.witness.unwrap();
    check_refuting_pullback(&a3, &w);
    if let Witness::RefutingPullback { pulled_back, .. } = &w {
        assert!(pulled_back.dom().is_zero());
        assert_eq!(pulled_back.cod().size(), 2);
    }
}

fn c2() {
    let b = grp("sweep-le-24");
    let monos = b.monos().unwrap();
    let mut refuted = 0;
    for m in &monos {
        let se = is_subobject_essential(m, &b).unwrap();
        let bounded = refute_stable_essential(m, &MonoClassSpec::AllMonos, &b).unwrap();
        assert_eq!(se.holds, bounded.holds, "{m:?}");
        if !se.holds {
            check_refuting_pullback(m, bounded.witness.as_ref().unwrap());
            refuted += 1;
        }
    }
    assert!(refuted > 0);
    println!("    {} monos over {} objects, {refuted} refuted", monos.len(), b.objects().len());
}

fn c3() {
    let b = grp("sweep-le-24");
    let monos = b.monos().unwrap();
    let mut essential = 0;
    for m in &monos {
        let a = essential_via_quotients(m, &b).unwrap().holds;
        assert_eq!(a, essential_via_congruences(m, &b).unwrap(), "{m:?}");
        assert_eq!(a, essential_via_normal_subobjects(m, &b).unwrap(), "{m:?}");
        assert_eq!(a, essential_via_kernels(m, &b).unwrap(), "{m:?}");
        essential += a as usize;
    }
    assert!(essential > 0 && essential < monos.len());
    println!("    {} monos, {essential} essential", monos.len());
}

fn c4() {
    for b in [grp("s4-subgroups"), ab("z4-chain")] {
        let reports = closure_law_suite(&LawFamily::ALL, &MonoClassSpec::AllMonos, &b).unwrap();
        assert!(reports.len() >= 30);
        for r in &reports {
            assert_eq!(r.status, LawStatus::Pass, "{r:?}");
        }
        let instances: usize = reports.iter().map(|r| r.instances).sum();
        println!("    {}: {} laws, {instances} instances", b.label(), reports.len());
    }
    let b = grp("a5-subgroups");
    let s = MonoClassSpec::AllMonos;
    let found = weak_left_cancellation_search(&s, &b).unwrap().expect("no witness found");
    assert!(validate_weak_left_witness(&found, &s, &b).unwrap());
    let (mp, m) = registry::a5_chain(&b).unwrap();
    assert_eq!((mp.dom().size(), mp.cod().size(), m.cod().size()), (2, 6, 60));
    let explicit = WeakLeftWitness {
        composite: compose(&m, &mp).unwrap(),
        m_prime: mp,
        m,
    };
    assert!(validate_weak_left_witness(&explicit, &s, &b).unwrap());
    println!(
        "    search found {} ⊆ {} ⊆ {}",
        found.m_prime.dom().name(),
        found.m.dom().name(),
        found.m.cod().name()
    );
}

fn c5() {
    let b = grp("s4-subgroups");
    let se = SubobjectEssentialClass::new(&b);
    let reports = check_focal(&se, &b).unwrap();
    assert_eq!(reports.len(), 5);
    for r in &reports {
        assert_eq!(r.status, ConditionStatus::Pass, "{r:?}");
    }
    let b = grp("s3-subgroups");
    let e = EssentialClass::new(MonoClassSpec::AllMonos, &b);
    let reports = check_focal(&e, &b).unwrap();
    let f2 = reports.iter().find(|r| r.condition == Condition::F2).unwrap();
    assert_eq!(f2.status, ConditionStatus::Fail);
    let w = f2.witness.as_ref().unwrap();
    let (s, f) = (&w.morphisms["s"], &w.morphisms["f"]);
    assert_eq!((s.dom().name(), s.cod().name()), ("A3", "S3"));
    assert_eq!((f.dom().name(), f.cod().name()), ("S2", "S3"));
    assert!(f.is_mono());
    assert_eq!(s.image().intersection(&f.image()).len(), 1);
}

fn c6() {
    for b in [ab("z4-chain"), grp("s3-subgroups")] {
        let m = SubobjectEssentialClass::new(&b);
        for a in b.objects() {
            let mut meet = ElemSet::full(a.size());
            for n in large_subsets(a) {
                meet = meet.intersection(&n);
            }
            let a_min = Subobject::new(a, meet).unwrap();
            for t in b.objects() {
                let classes = poincare_hom(a, t, &m, &b).unwrap().len();
                let homs = b.hom(a_min.object(), t).unwrap().len();
                assert_eq!(classes, homs, "{} -> {}", a.name(), t.name());
            }
        }
    }
    let z4_chain = ab("z4-chain");
    let z4 = named(&z4_chain, "Z4");
    let m = SubobjectEssentialClass::new(&z4_chain);
    assert_eq!(poincare_hom(&z4, &z4, &m, &z4_chain).unwrap().len(), 2);
    let s3u = grp("s3-subgroups");
    let s3 = named(&s3u, "S3");
    let m = SubobjectEssentialClass::new(&s3u);
    assert_eq!(poincare_hom(&s3, &s3, &m, &s3u).unwrap().len(), 10);
}

fn c7() {
    for b in [ab("z4-chain"), grp("s3-subgroups")] {
        let spec = build_spec(&b, MonoClassSpec::AllMonos).unwrap();
        let cospans = registered_cospans(&b).unwrap();
        let r = verify_limit_preservation(&spec, &cospans).unwrap();
        assert!(r.passed, "{r:?}");
        println!("    {}: {} cospans, {} cones", b.label(), r.cospans, r.cones);
    }
}

fn c8() {
    let z4_chain = ab("z4-chain");
    let spec = build_spec(&z4_chain, MonoClassSpec::AllMonos).unwrap();
    let r = end_spec_division_check(&named(&z4_chain, "Z4"), &spec).unwrap();
    assert!(r.uniform && r.division_monoid);
    assert_eq!(r.size, 2);

    let z5 = grp("z5");
    let spec = build_spec(&z5, MonoClassSpec::AllMonos).unwrap();
    let r = end_spec_division_check(&named(&z5, "Z5"), &spec).unwrap();
    assert!(r.uniform && r.division_monoid);
    assert_eq!(r.size, 5);

    let s3u = grp("s3-subgroups");
    let spec = build_spec(&s3u, MonoClassSpec::AllMonos).unwrap();
    let r = end_spec_division_check(&named(&s3u, "S3"), &spec).unwrap();
    assert!(!r.uniform);
    assert!(!r.division_monoid);
}

fn c9() {
    let samples = [
        grp("s3-subgroups"),
        grp("groups-le-8"),
        grp("z5"),
        ab("z4-chain"),
        ab("groups-le-8"),
    ];
    for b in &samples {
        let r = check_normal_backend(b).unwrap();
        assert!(r.passed, "{r:?}");
    }
    let pset = default_universe("pset-small", BackendKind::PointedSet).unwrap();
    let r = check_normal_backend(&pset).unwrap();
    assert!(!r.passed);
    match r.witness.unwrap() {
        NormalityWitness::NonNormalRegularEpi { epi } => {
            assert!(epi.is_epi());
            // identifies two points away from the basepoint, which no cokernel does
            let n = epi.dom().size();
            let glued = (1..n).any(|x| (x + 1..n).any(|y| epi.apply(x) == epi.apply(y) && epi.apply(x) != 0));
            assert!(glued, "{epi:?}");
        }
        w => panic!("unexpected witness {w:?}"),
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn()); 9] = [
        ("A3 -> S3 is essential but neither subobject- nor stable-essential", SECOND, c1),
        ("subobject-essential = bounded stable-essential on groups of order <= 24", 5 * MINUTE, c2),
        ("four characterizations of essentiality agree on groups of order <= 24", 5 * MINUTE, c3),
        ("closure laws on S4 subgroups and z4-chain; weak left cancellation fails in A5", 10 * MINUTE, c4),
        ("focal and Ore conditions for SE monos; F2 fails for essential monos in S3", MINUTE, c5),
        ("fraction classes out of A match morphisms out of A_min", MINUTE, c6),
        ("canonical functor preserves registered pullbacks", 5 * MINUTE, c7),
        ("Z4 and Z5 uniform with division End monoids; S3 neither", MINUTE, c8),
        ("groups and abelian groups are normal; pointed sets are not", MINUTE, c9),
    ];
    panic::set_hook(Box::new(|info| eprintln!("    {info}")));
    let mut failures = 0;
    for (i, (what, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run));
        let elapsed = start.elapsed();
        let verdict = match outcome {
            Ok(()) if elapsed <= *limit => "PASS",
            Ok(()) => "FAIL (time limit)",
            Err(_) => "FAIL",
        };
        if verdict != "PASS" {
            failures += 1;
        }
        println!(
            "criterion {}: {verdict} [{:.2}s / {}s] {what}",
            i + 1,
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
