//! Footprint rendering: one dot per agent per tick, world coordinates
//! mapped 1:1 into the SVG viewport with the y axis flipped for screen
//! convention.

use std::fmt::Write as _;
use std::path::Path;

use crate::agent::AgentKind;
use crate::engine::TraceRow;
use crate::output::OutputError;
use crate::vec2::WorldBounds;

const BLUE: &str = "#4878cf";
const LEADER: &str = "#e8a117";
const RED: &str = "#d43d3d";

struct Marker {
    radius: f64,
    color: &'static str,
}

fn marker(kind: AgentKind) -> Marker {
    match kind {
        AgentKind::Blue => Marker {
            radius: 0.8,
            color: BLUE,
        },
        AgentKind::BlueLeader => Marker {
            radius: 2.0,
            color: LEADER,
        },
        AgentKind::RedAgent => Marker {
            radius: 1.5,
            color: RED,
        },
    }
}

/// Renders a trajectory trace as an SVG footprint plot. Blue trails are
/// small dots; the leader and red trails use distinct colors and larger
/// markers. Goal corners are marked with crosses.
pub fn render_footprints(
    trace: &[TraceRow],
    bounds: &WorldBounds,
    destination: &Path,
) -> Result<(), OutputError> {
    if trace.is_empty() {
        return Err(OutputError::NoRows);
    }
    let svg = footprints_svg(trace, bounds);
    crate::output::write_file(destination, &svg)
}

pub fn footprints_svg(trace: &[TraceRow], bounds: &WorldBounds) -> String {
    let (w, l) = (bounds.width, bounds.length);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {w} {l}" width="{w}" height="{l}">"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{w}" height="{l}" fill="white" stroke="black" stroke-width="1"/>"#
    );
    // Goal corner markers.
    for corner in bounds.corners() {
        let (cx, cy) = (corner.x, l - corner.y);
        let _ = writeln!(
            s,
            r##"<g stroke="#999999" stroke-width="1"><line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/><line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/></g>"##,
            (cx - 5.0).max(0.0),
            cy.clamp(0.0, l),
            (cx + 5.0).min(w),
            cy.clamp(0.0, l),
            cx.clamp(0.0, w),
            (cy - 5.0).max(0.0),
            cx.clamp(0.0, w),
            (cy + 5.0).min(l)
        );
    }
    // Draw blue trails first so leader and red stay visible on top.
    let mut order: Vec<&TraceRow> = trace.iter().collect();
    order.sort_by_key(|r| match r.kind {
        AgentKind::Blue => 0,
        AgentKind::RedAgent => 1,
        AgentKind::BlueLeader => 2,
    });
    for row in order {
        let m = marker(row.kind);
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="{}" fill="{}" fill-opacity="0.5"/>"#,
            row.position.x,
            l - row.position.y,
            m.radius,
            m.color
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vec2::Vec2;

    fn trace_row(tick: usize, kind: AgentKind, x: f64, y: f64) -> TraceRow {
        TraceRow {
            tick,
            agent_id: 0,
            kind,
            position: Vec2::new(x, y),
            velocity: Vec2::ZERO,
            trust: 1.0,
        }
    }

    #[test]
    fn minimal_render_has_one_marker() {
        let bounds = WorldBounds::new(500.0, 500.0);
        let trace = [trace_row(0, AgentKind::Blue, 250.0, 250.0)];
        let svg = footprints_svg(&trace, &bounds);
        assert_eq!(svg.matches("<circle").count(), 1);
        assert!(svg.contains(r#"cx="250.00" cy="250.00""#));
        assert!(svg.contains(r#"viewBox="0 0 500 500""#));
    }

    #[test]
    fn stationary_agent_renders_coincident_dots() {
        let bounds = WorldBounds::new(500.0, 500.0);
        let trace: Vec<TraceRow> = (0..100)
            .map(|t| trace_row(t, AgentKind::Blue, 10.0, 20.0))
            .collect();
        let svg = footprints_svg(&trace, &bounds);
        assert_eq!(svg.matches("<circle").count(), 100);
        assert!(!svg.contains("<line x1=\"10"));
    }

    #[test]
    fn y_axis_is_flipped() {
        let bounds = WorldBounds::new(500.0, 400.0);
        let trace = [trace_row(0, AgentKind::Blue, 100.0, 30.0)];
        let svg = footprints_svg(&trace, &bounds);
        assert!(svg.contains(r#"cx="100.00" cy="370.00""#), "{svg}");
    }

    #[test]
    fn kinds_use_distinct_colors() {
        let bounds = WorldBounds::new(500.0, 500.0);
        let trace = [
            trace_row(0, AgentKind::Blue, 1.0, 1.0),
            trace_row(0, AgentKind::BlueLeader, 2.0, 2.0),
            trace_row(0, AgentKind::RedAgent, 3.0, 3.0),
        ];
        let svg = footprints_svg(&trace, &bounds);
        assert!(svg.contains(BLUE) && svg.contains(LEADER) && svg.contains(RED));
    }

    #[test]
    fn empty_trace_rejected() {
        let bounds = WorldBounds::new(500.0, 500.0);
        let dir = tempfile::tempdir().unwrap();
        assert!(render_footprints(&[], &bounds, &dir.path().join("f.svg")).is_err());
    }
}
