use fracspec::monoclass::{classify, ClassificationReport, MonoClass};
use serde::Serialize;

use crate::text::{morphism, yes_no, Text};
use crate::{ClassArg, CliError, Outcome, RunConfig};

#[derive(Debug, Serialize)]
pub struct ClassifyReport {
    pub config: RunConfig,
    pub class: String,
    pub objects: Vec<String>,
    pub counts: Counts,
    pub monos: Vec<ClassificationReport>,
}

#[derive(Debug, Default, Serialize)]
pub struct Counts {
    pub monos: usize,
    pub in_s: usize,
    pub essential: usize,
    pub subobject_essential: usize,
    pub stable_essential: usize,
}

pub fn run(config: &RunConfig, class: ClassArg) -> Result<Outcome, CliError> {
    let backend = config.build_universe()?;
    let s = class.spec();
    let mut monos = Vec::new();
    let mut counts = Counts::default();
    for m in backend.monos()? {
        let r = classify(&m, &s, &backend)?;
        counts.monos += 1;
        counts.in_s += r.flags.in_s as usize;
        counts.essential += r.flags.essential as usize;
        counts.subobject_essential += r.flags.subobject_essential as usize;
        counts.stable_essential += r.flags.stable_essential as usize;
        monos.push(r);
    }
    let report = ClassifyReport {
        config: config.clone(),
        class: s.label(),
        objects: backend.objects().iter().map(|o| o.name().to_string()).collect(),
        counts,
        monos,
    };
    let text = render(&report);
    Ok(Outcome::new(true, &report, text, config.format))
}

fn render(r: &ClassifyReport) -> String {
    let mut t = Text::default();
    t.line(format!(
        "classify over {} ({} backend), S = {}",
        r.config.universe,
        r.config.backend_label(),
        r.class
    ));
    t.line(format!("objects: {}", r.objects.join(", ")));
    let c = &r.counts;
    t.line(format!(
        "{} monos: {} in S, {} essential, {} subobject-essential, {} stable-essential",
        c.monos, c.in_s, c.essential, c.subobject_essential, c.stable_essential
    ));
    for m in &r.monos {
        let f = &m.flags;
        let bounded = |e| if e == fracspec::monoclass::Exactness::Bounded { " (bounded)" } else { "" };
        t.line(format!(
            "{}  in_S={} essential={}{} subobject_essential={} stable_essential={}{}",
            morphism(&m.morphism),
            yes_no(f.in_s),
            yes_no(f.essential),
            bounded(m.essential_exactness),
            yes_no(f.subobject_essential),
            yes_no(f.stable_essential),
            bounded(m.stable_exactness),
        ));
        for (flag, w) in &m.witnesses {
            t.line(format!("    {flag}: {}", crate::text::witness(w)));
        }
    }
    t.finish()
}
