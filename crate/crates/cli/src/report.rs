use std::fmt::Write;

use serde::{Deserialize, Serialize};
use tilecoh::cellcx::{DegreeResult, StratumReport};
use tilecoh::datasets::{CheckpointReport, ComplexRun, RunOutput};
use tilecoh::indsys::LimitDescriptor;
use tilecoh::onedim::OneDimReport;
use tilecoh::rotfib::{RotationReport, SpectralPage, VariantComparison};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub input: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<RunOutput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation: Option<RunOutput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variants: Option<VariantComparison>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checkpoints: Vec<CheckpointReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub listing: Vec<String>,
    #[serde(skip)]
    pub export: Option<String>,
}

/// ANSI styling, only when `TILECOH_COLOR` asks for it.
#[derive(Clone, Copy)]
pub struct Style {
    color: bool,
}

impl Style {
    pub fn from_env() -> Self {
        let color = std::env::var("TILECOH_COLOR")
            .map(|v| matches!(v.to_ascii_lowercase().as_str(), "1" | "true" | "always" | "yes"))
            .unwrap_or(false);
        Style { color }
    }

    fn head(&self, s: &str) -> String {
        if self.color {
            format!("\x1b[1m{s}\x1b[0m")
        } else {
            s.to_string()
        }
    }

    fn mark(&self, ok: bool) -> String {
        match (ok, self.color) {
            (true, true) => "\x1b[32m[pass]\x1b[0m".into(),
            (false, true) => "\x1b[31m[FAIL]\x1b[0m".into(),
            (true, false) => "[pass]".into(),
            (false, false) => "[FAIL]".into(),
        }
    }
}

fn joined(ds: &[LimitDescriptor]) -> String {
    ds.iter().map(LimitDescriptor::text).collect::<Vec<_>>().join(" | ")
}

fn matrix(m: &tilecoh::intlinalg::IntMatrix) -> String {
    let rows: Vec<String> = m
        .to_rows()
        .iter()
        .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
        .collect();
    format!("[{}]", rows.join(","))
}

impl Report {
    pub fn new(command: &str, input: &str) -> Self {
        Report {
            command: command.into(),
            input: input.into(),
            result: None,
            rotation: None,
            variants: None,
            checkpoints: vec![],
            warnings: vec![],
            listing: vec![],
            export: None,
        }
    }

    pub fn all_checks_pass(&self) -> bool {
        let cross = match &self.result {
            Some(RunOutput::Complex(r)) => r.cross_checks.iter().all(|c| c.holds),
            Some(RunOutput::OneDim(r)) => r.routes_agree,
            _ => true,
        };
        cross && self.checkpoints.iter().all(CheckpointReport::all_pass)
    }

    pub fn render(&self, st: Style) -> String {
        let mut o = String::new();
        if !self.listing.is_empty() {
            for n in &self.listing {
                let _ = writeln!(o, "{n}");
            }
            return o;
        }
        let _ = writeln!(o, "{} {}", st.head(&self.command), self.input);
        for r in self.result.iter().chain(&self.rotation) {
            match r {
                RunOutput::Complex(c) => render_complex(&mut o, c, st),
                RunOutput::OneDim(d) => render_onedim(&mut o, d, st),
                RunOutput::Rotation(r) => render_rotation(&mut o, r, st),
                RunOutput::Variant(f) => {
                    let _ = writeln!(
                        o,
                        "({},{}): edge factor {} -> {}, tile factor {} -> {}",
                        f.m, f.n, f.edge_factor, f.edge_contribution, f.tile_factor, f.tile_contribution
                    );
                }
            }
        }
        if let Some(v) = &self.variants {
            let _ = writeln!(o, "{}", st.head("variants"));
            for f in &v.variants {
                let _ = writeln!(
                    o,
                    "  ({},{}): edge factor {} -> {}, tile factor {} -> {}",
                    f.m, f.n, f.edge_factor, f.edge_contribution, f.tile_factor, f.tile_contribution
                );
            }
            let _ = writeln!(o, "  {}", v.conclusion);
        }
        for w in &self.warnings {
            let _ = writeln!(o, "warning: {w}");
        }
        for c in &self.checkpoints {
            let _ = writeln!(o, "{}", st.head(&format!("checkpoints ({})", c.dataset)));
            for r in &c.results {
                let _ = writeln!(o, "  {} {}: {}", st.mark(r.pass), r.stage, r.actual);
                if !r.pass {
                    let _ = writeln!(o, "         expected {}", r.expected);
                }
                let _ = writeln!(o, "         ({})", r.citation);
            }
        }
        o
    }
}

fn render_stratum(o: &mut String, s: &StratumReport) {
    let counts: Vec<String> = s.eventual_range_counts.iter().map(|c| c.to_string()).collect();
    let _ = writeln!(o, "  eventual range cells: {}", counts.join(" "));
    let _ = writeln!(o, "  H^* of eventual range: {}", joined(&s.direct));
    if s.stratum > 0 {
        let _ =
            writeln!(o, "  pair against lower stratum: {}  (groups {})", joined(&s.pair), s.pair_groups.join(" | "));
        let _ = writeln!(o, "  pair against lower eventual range: {}", joined(&s.pair_er));
        for c in &s.connecting {
            let q = c.source_degree;
            if c.is_zero {
                let _ = writeln!(o, "  delta H^{q} -> H^{}: zero", q + 1);
            } else {
                let det = c.limit_determinant.as_ref().map(|d| format!(", |det| {d}")).unwrap_or_default();
                let _ = writeln!(
                    o,
                    "  delta H^{q} -> H^{}: image {}{det}, kernel {}, cokernel {}, image lattice {}",
                    q + 1,
                    c.image_limit,
                    c.kernel_limit,
                    c.cokernel_limit,
                    matrix(&c.image_basis)
                );
            }
        }
    }
    for (q, r) in s.results.iter().enumerate() {
        let _ = writeln!(o, "  H^{q} = {}", r.text());
    }
}

fn render_result(o: &mut String, q: usize, r: &DegreeResult) {
    let _ = writeln!(o, "  H^{q} = {}", r.text());
    let notes = match r {
        DegreeResult::Group { descriptor } => descriptor.annotations.clone(),
        DegreeResult::Extension { problem } => {
            let _ = writeln!(o, "        extension of {} by {}", problem.quo, problem.sub);
            match &problem.resolution {
                Some(res) => {
                    let _ = writeln!(o, "        resolved: {}", res.justification);
                    res.resolved.annotations.clone()
                }
                None => {
                    let _ = writeln!(o, "        unresolved");
                    vec![]
                }
            }
        }
    };
    for n in notes {
        let _ = writeln!(o, "        note: {n}");
    }
}

fn render_complex(o: &mut String, c: &ComplexRun, st: Style) {
    for s in &c.les.strata {
        let _ = writeln!(o, "{}", st.head(&format!("stratum {}", s.stratum)));
        render_stratum(o, s);
    }
    let _ = writeln!(o, "{}", st.head("finals"));
    for (q, r) in c.finals.iter().enumerate() {
        render_result(o, q, r);
    }
    if !c.cross_checks.is_empty() {
        let _ = writeln!(o, "{}", st.head("cross-checks"));
        for x in &c.cross_checks {
            let _ = writeln!(o, "  {} {}", st.mark(x.holds), x.what);
        }
    }
}

fn render_onedim(o: &mut String, r: &OneDimReport, st: Style) {
    let _ = writeln!(o, "rules: {}", r.rules);
    let _ = writeln!(o, "allowed words: {}", r.allowed_words.join(" "));
    let _ =
        writeln!(o, "cells: {} zero-cells, {} vertex cells, {} tile cells", r.zero_cells, r.vertex_cells, r.tile_cells);
    let v = &r.vertex_stratum;
    let tags = if v.tags.is_empty() { "-".to_string() } else { v.tags.join(", ") };
    let _ = writeln!(o, "vertex stratum: {tags} (reduced H^0 {}, H^1 {})", v.reduced_h0, v.h1);
    let d = r.tile_system.rows();
    let _ = writeln!(o, "tile system: (Z^{d}, {}) limit {}", matrix(&r.tile_system), r.tile_limit);
    let _ = writeln!(o, "cokernel of delta: {}", r.cokernel);
    let _ = writeln!(o, "{}", st.head("result"));
    let _ = writeln!(o, "  H^0 = {}", r.h0);
    let _ = writeln!(o, "  H^1 = {}", r.h1);
    for a in &r.attribution {
        let _ = writeln!(o, "        {} from {}", a.summand, a.source);
    }
    let agree = if r.routes_agree { "agrees" } else { "DISAGREES" };
    let _ = writeln!(o, "four-term route: {} ({agree})", r.h1_four_term);
}

fn render_page(o: &mut String, name: &str, p: &SpectralPage) {
    let _ = writeln!(o, "  {name}:");
    for q in (0..2).rev() {
        let row: Vec<String> = (0..3).map(|pp| p.get(pp, q).text()).collect();
        let _ = writeln!(o, "    q={q}: {}", row.join(" | "));
    }
    for f in &p.fibre_evaluation {
        let _ = writeln!(o, "    fibres of order {}: generic {}, exceptional {}", f.order, f.generic, f.exceptional);
    }
    for a in &p.annotations {
        let _ = writeln!(o, "    note: {a}");
    }
}

fn render_rotation(o: &mut String, r: &RotationReport, st: Style) {
    let _ = writeln!(o, "{}", st.head("rotation hull"));
    let _ = writeln!(o, "  quotient: {}", joined(&r.h_omega0));
    render_page(o, "E2", &r.e2);
    render_page(o, "Einf", &r.e_inf);
    for w in &r.e_inf.warnings {
        let _ = writeln!(o, "  warning: {w}");
    }
    for (k, d) in r.h_rot.iter().enumerate() {
        render_result(o, k, d);
    }
    let ranks: Vec<String> = r.rank_check.iter().map(|(a, b)| format!("{a}={b}")).collect();
    let _ = writeln!(o, "  {} rational ranks {}", st.mark(r.ranks_consistent()), ranks.join(" "));
}
