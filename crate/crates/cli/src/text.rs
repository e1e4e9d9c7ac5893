use fracspec::monoclass::Witness;
use fracspec::Morphism;

use crate::{BackendArg, RunConfig};

#[derive(Default)]
pub(crate) struct Text(String);

impl Text {
    pub(crate) fn line(&mut self, s: impl AsRef<str>) {
        self.0.push_str(s.as_ref());
        self.0.push('\n');
    }

    pub(crate) fn finish(self) -> String {
        self.0
    }
}

impl RunConfig {
    pub(crate) fn backend_label(&self) -> &'static str {
        match self.backend {
            BackendArg::Grp => "grp",
            BackendArg::Ab => "ab",
            BackendArg::Pset => "pset",
        }
    }
}

pub(crate) fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub(crate) fn morphism(m: &Morphism) -> String {
    let map: Vec<String> = m.table().iter().map(|x| x.to_string()).collect();
    format!("{}→{} [{}]", m.dom().name(), m.cod().name(), map.join(" "))
}

pub(crate) fn witness(w: &Witness) -> String {
    match w {
        Witness::NotInClass { morphism: m, class } => format!("{} is not in {class}", morphism(m)),
        Witness::NotMono { morphism: m } => format!("{} is not a mono", morphism(m)),
        Witness::Extension { f } => format!("{} lies outside S while its composite with the mono lies in S", morphism(f)),
        Witness::DisjointSubobject { n } => format!("{} meets the image only in 0", morphism(n)),
        Witness::RefutingPullback { along, pulled_back, inner } => format!(
            "pulling back along {} gives {}, where {}",
            morphism(along),
            morphism(pulled_back),
            witness(inner)
        ),
    }
}
