//! Vector diagrams of two-dimensional scenarios.
//!
//! The initial state is drawn as a heavy black arrow, each measurement
//! state as a labelled arrow, and each distinct final state as a dashed
//! arrow. States are drawn from the real parts of their phase-canonical
//! amplitudes.

use std::fmt::Write as _;

use seqmeas_core::{phase_equal, MeasurementDevice, OutcomeDistribution, StateVector};

use crate::CliError;

/// Colours and canvas size.
#[derive(Debug, Clone, PartialEq)]
pub struct SvgStyle {
    pub size: f64,
    pub initial: String,
    pub measurement: String,
    pub final_state: String,
    pub axes: String,
}

impl Default for SvgStyle {
    fn default() -> Self {
        Self {
            size: 420.0,
            initial: "#000000".into(),
            measurement: "#1f5fbf".into(),
            final_state: "#c0392b".into(),
            axes: "#bbbbbb".into(),
        }
    }
}

pub fn escape_xml(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for ch in text.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

struct Canvas {
    centre: f64,
    radius: f64,
}

impl Canvas {
    fn point(&self, state: &StateVector, scale: f64) -> (f64, f64) {
        let c = state.canonical();
        let a = c.amplitudes();
        (
            self.centre + self.radius * scale * a[0].re,
            self.centre - self.radius * scale * a[1].re,
        )
    }
}

/// Final states of `dist`, merged up to a global phase, with the summed
/// probability of the outcomes ending in each.
pub fn distinct_final_states(dist: &OutcomeDistribution) -> Vec<(StateVector, f64)> {
    let mut distinct: Vec<(StateVector, f64)> = Vec::new();
    for o in &dist.outcomes {
        let hit = distinct
            .iter_mut()
            .find(|(s, _)| phase_equal(s, &o.final_state, 1e-9).unwrap_or(false));
        match hit {
            Some((_, p)) => *p += o.probability,
            None => distinct.push((o.final_state.canonical(), o.probability)),
        }
    }
    distinct
}

pub fn render_svg(
    initial: &StateVector,
    device: &MeasurementDevice,
    dist: &OutcomeDistribution,
    style: &SvgStyle,
) -> Result<String, CliError> {
    if initial.dim() != 2 {
        return Err(CliError::Unsupported(format!(
            "diagrams need a two-dimensional space, this scenario has dimension {}",
            initial.dim()
        )));
    }
    let size = style.size;
    let canvas = Canvas {
        centre: size / 2.0,
        radius: size * 0.36,
    };
    let c = canvas.centre;
    let r = canvas.radius;
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    svg.push_str("<defs>\n");
    for (id, colour) in [
        ("head-initial", &style.initial),
        ("head-measurement", &style.measurement),
        ("head-final", &style.final_state),
    ] {
        let _ = writeln!(
            svg,
            r#"<marker id="{id}" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="7" markerHeight="7" orient="auto"><path d="M0,0 L10,5 L0,10 z" fill="{colour}"/></marker>"#
        );
    }
    svg.push_str("</defs>\n");
    let _ = writeln!(
        svg,
        r#"<g class="axes" stroke="{axes}" fill="none"><circle cx="{c}" cy="{c}" r="{r}"/><line x1="{x0}" y1="{c}" x2="{x1}" y2="{c}"/><line x1="{c}" y1="{x0}" x2="{c}" y2="{x1}"/></g>"#,
        axes = style.axes,
        x0 = c - r - 10.0,
        x1 = c + r + 10.0,
    );

    for (state, p) in distinct_final_states(dist) {
        let (x, y) = canvas.point(&state, 0.93);
        let _ = writeln!(
            svg,
            r#"<g class="final-state"><title>final state, probability {p:.6}</title><line x1="{c}" y1="{c}" x2="{x:.3}" y2="{y:.3}" stroke="{colour}" stroke-width="1.5" stroke-dasharray="6 4" marker-end="url(#head-final)"/></g>"#,
            colour = style.final_state,
        );
    }

    for (label, state) in device.states() {
        let (x, y) = canvas.point(state, 1.0);
        let (tx, ty) = canvas.point(state, 1.12);
        let label = escape_xml(label);
        let _ = writeln!(
            svg,
            r#"<g class="measurement-state"><line x1="{c}" y1="{c}" x2="{x:.3}" y2="{y:.3}" stroke="{colour}" stroke-width="2" marker-end="url(#head-measurement)"/><text x="{tx:.3}" y="{ty:.3}" fill="{colour}" font-family="sans-serif" font-size="14" text-anchor="middle" dominant-baseline="middle">{label}</text></g>"#,
            colour = style.measurement,
        );
    }

    let (x, y) = canvas.point(initial, 1.0);
    let (tx, ty) = canvas.point(initial, 1.12);
    let _ = writeln!(
        svg,
        r#"<g class="initial-state"><line x1="{c}" y1="{c}" x2="{x:.3}" y2="{y:.3}" stroke="{colour}" stroke-width="3" marker-end="url(#head-initial)"/><text x="{tx:.3}" y="{ty:.3}" fill="{colour}" font-family="serif" font-size="16" font-style="italic" text-anchor="middle" dominant-baseline="middle">ψ</text></g>"#,
        colour = style.initial,
    );
    svg.push_str("</svg>\n");
    Ok(svg)
}
