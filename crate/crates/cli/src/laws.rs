use fracspec::monoclass::laws::{closure_law_suite, LawFamily, LawReport, LawStatus};
use serde::Serialize;

use crate::text::{morphism, Text};
use crate::{ClassArg, CliError, Outcome, RunConfig};

#[derive(Debug, Serialize)]
pub struct LawsReport {
    pub config: RunConfig,
    pub class: ClassArg,
    pub passed: bool,
    pub laws: Vec<LawReport>,
}

pub fn run(config: &RunConfig, class: ClassArg) -> Result<Outcome, CliError> {
    let backend = config.build_universe()?;
    let laws = closure_law_suite(&LawFamily::ALL, &class.spec(), &backend)?;
    let report = LawsReport {
        config: config.clone(),
        class,
        passed: laws.iter().all(|r| r.status != LawStatus::Fail),
        laws,
    };
    let text = render(&report);
    Ok(Outcome::new(report.passed, &report, text, config.format))
}

fn render(r: &LawsReport) -> String {
    let mut t = Text::default();
    t.line(format!(
        "closure laws over {} ({} backend): {}",
        r.config.universe,
        r.config.backend_label(),
        if r.passed { "PASS" } else { "FAIL" }
    ));
    for law in &r.laws {
        let status = match law.status {
            LawStatus::Pass => "pass",
            LawStatus::Fail => "FAIL",
            LawStatus::Vacuous => "vacuous",
        };
        t.line(format!("  [{status}] {} ({} instances)", law.law_id, law.instances));
        if let Some(w) = &law.witness {
            t.line(format!("      {}", w.note));
            for (role, m) in &w.morphisms {
                t.line(format!("      {role} = {}", morphism(m)));
            }
        }
    }
    t.finish()
}
