use fracspec::monoclass::{Exactness, MonoClassSpec};
use fracspec::spectral::{
    build_spec, check_functor_laws, end_spec_division_check, is_uniform, minimal_m_subobject, registered_cospans,
    verify_limit_preservation, DivisionMonoidReport, LimitReport, SpecExport,
};
use fracspec::Morphism;
use serde::Serialize;

use crate::text::{morphism, yes_no, Text};
use crate::{to_compact_json, CliError, Outcome, RunConfig};

#[derive(Debug, Serialize)]
pub struct SpecReport {
    pub config: RunConfig,
    pub inverted: String,
    pub exactness: Exactness,
    pub objects: Vec<ObjectSummary>,
    pub homs: Vec<HomSize>,
    pub end_monoids: Vec<DivisionMonoidReport>,
    pub functor_laws: FunctorLaws,
    pub limit_preservation: LimitReport,
    pub export: SpecExport,
}

#[derive(Debug, Serialize)]
pub struct ObjectSummary {
    pub name: String,
    pub size: usize,
    pub uniform: bool,
    /// Elements of the least inverted subobject.
    pub least_subobject: Vec<usize>,
}

#[derive(Debug, Serialize)]
pub struct HomSize {
    pub dom: String,
    pub cod: String,
    pub classes: usize,
}

#[derive(Debug, Serialize)]
pub struct FunctorLaws {
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing_pair: Option<(Morphism, Morphism)>,
}

pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    let backend = config.build_universe()?;
    let spec = build_spec(&backend, MonoClassSpec::AllMonos)?;
    let mut objects = Vec::new();
    let mut end_monoids = Vec::new();
    for a in spec.objects() {
        let least = minimal_m_subobject(a, &spec)?;
        objects.push(ObjectSummary {
            name: a.name().to_string(),
            size: a.size(),
            uniform: is_uniform(a, spec.inverted_class(), &backend)?.uniform,
            least_subobject: least.subobject.elems().to_vec(),
        });
        end_monoids.push(end_spec_division_check(a, &spec)?);
    }
    let mut homs = Vec::new();
    for a in spec.objects() {
        for b in spec.objects() {
            homs.push(HomSize {
                dom: a.name().to_string(),
                cod: b.name().to_string(),
                classes: spec.hom(a, b)?.len(),
            });
        }
    }
    let failing_pair = check_functor_laws(&spec)?;
    let limit_preservation = verify_limit_preservation(&spec, &registered_cospans(&backend)?)?;
    let report = SpecReport {
        config: config.clone(),
        inverted: spec.inverted_class().label(),
        exactness: spec.exactness(),
        objects,
        homs,
        end_monoids,
        functor_laws: FunctorLaws {
            passed: failing_pair.is_none(),
            failing_pair,
        },
        limit_preservation,
        export: spec.export(),
    };
    let passed = report.functor_laws.passed && report.limit_preservation.passed;
    let text = render(&report);
    let mut outcome = Outcome::new(passed, &report, text, config.format);
    outcome.artifact = to_compact_json(&report.export);
    Ok(outcome)
}

fn render(r: &SpecReport) -> String {
    let mut t = Text::default();
    t.line(format!(
        "spectral category of {} ({} backend), inverting {} ({})",
        r.config.universe,
        r.config.backend_label(),
        r.inverted,
        match r.exactness {
            Exactness::Exact => "exact",
            Exactness::Bounded => "bounded",
        }
    ));
    t.line("objects:");
    for o in &r.objects {
        let least: Vec<String> = o.least_subobject.iter().map(|x| x.to_string()).collect();
        t.line(format!(
            "  {} (order {}): uniform={}, least inverted subobject {{{}}}",
            o.name,
            o.size,
            yes_no(o.uniform),
            least.join(" ")
        ));
    }
    t.line("hom-set sizes:");
    for h in &r.homs {
        t.line(format!("  {} -> {}: {}", h.dom, h.cod, h.classes));
    }
    t.line("endomorphism monoids:");
    for e in &r.end_monoids {
        t.line(format!(
            "  End({}): {} classes, {} invertible, division monoid={}",
            e.object,
            e.size,
            e.invertible.len(),
            yes_no(e.division_monoid)
        ));
    }
    match &r.functor_laws.failing_pair {
        None => t.line("canonical functor preserves identities and composition: yes"),
        Some((g, f)) => t.line(format!(
            "canonical functor fails on the pair {} after {}",
            morphism(g),
            morphism(f)
        )),
    }
    let l = &r.limit_preservation;
    t.line(format!(
        "pullbacks of {} registered cospans preserved: {} ({} commuting cones checked)",
        l.cospans,
        yes_no(l.passed),
        l.cones
    ));
    if let Some(f) = &l.failure {
        t.line(format!(
            "  cospan {} , {} tested against {}: {}",
            morphism(&f.left),
            morphism(&f.right),
            f.test_object,
            f.problem
        ));
    }
    t.finish()
}
