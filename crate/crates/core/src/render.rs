//! Morphological box rendering, as a monospaced text grid or as SVG.
//!
//! One row per attribute in taxonomy order, one cell per characteristic.
//! Up to two classifications can be overlaid: cells selected by the first
//! are marked `[1]`, by the second `[2]`, by both `[12]`.

use std::fmt::Write as _;

use crate::classification::{structural_errors, AssetClassification, ValidationError, ValidationMode};
use crate::taxonomy::Taxonomy;

pub const MAX_OVERLAYS: usize = 2;

pub const CELL_WIDTH: u32 = 180;
pub const CELL_HEIGHT: u32 = 28;
const LABEL_WIDTH: u32 = 240;
const MARGIN: u32 = 12;
const TITLE_HEIGHT: u32 = 28;
const LEGEND_HEIGHT: u32 = 24;

pub const DEFAULT_FILLS: [&str; MAX_OVERLAYS] = ["#8fd18f", "#f5b461"];
const EMPTY_FILL: &str = "#ffffff";
const BOTH_FILL: &str = "url(#both)";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    Text,
    Svg,
}

#[derive(Debug, Clone)]
pub struct Overlay<'a> {
    pub classification: &'a AssetClassification,
    pub label: String,
    /// SVG fill for cells selected only by this overlay.
    pub fill: String,
}

impl<'a> Overlay<'a> {
    /// Overlay labelled with the asset name, using the default fill for `slot` (0 or 1).
    pub fn new(classification: &'a AssetClassification, slot: usize) -> Self {
        Self {
            classification,
            label: classification.asset_name().to_string(),
            fill: DEFAULT_FILLS[slot.min(MAX_OVERLAYS - 1)].to_string(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RenderSpec<'a> {
    pub taxonomy: &'a Taxonomy,
    pub overlays: Vec<Overlay<'a>>,
    pub format: RenderFormat,
}

impl<'a> RenderSpec<'a> {
    pub fn new(taxonomy: &'a Taxonomy, format: RenderFormat) -> Self {
        Self {
            taxonomy,
            overlays: Vec::new(),
            format,
        }
    }

    pub fn overlay(mut self, classification: &'a AssetClassification) -> Self {
        let slot = self.overlays.len();
        self.overlays.push(Overlay::new(classification, slot));
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RenderError {
    #[error("at most {MAX_OVERLAYS} overlays can be rendered, got {0}")]
    TooManyOverlays(usize),
    #[error("overlay {index} ({name}) is invalid: {}", .errors.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    InvalidOverlay {
        index: usize,
        name: String,
        errors: Vec<ValidationError>,
    },
}

/// Marks for one cell: which overlays select it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CellMark {
    pub first: bool,
    pub second: bool,
}

impl CellMark {
    pub fn tag(self) -> &'static str {
        match (self.first, self.second) {
            (true, true) => "[12]",
            (true, false) => "[1]",
            (false, true) => "[2]",
            (false, false) => "",
        }
    }
}

fn check(spec: &RenderSpec<'_>) -> Result<(), RenderError> {
    if spec.overlays.len() > MAX_OVERLAYS {
        return Err(RenderError::TooManyOverlays(spec.overlays.len()));
    }
    for (index, o) in spec.overlays.iter().enumerate() {
        let c = o.classification;
        let mut errors = structural_errors(spec.taxonomy, c, ValidationMode::Partial);
        if !c.matches_taxonomy(spec.taxonomy) {
            errors.insert(
                0,
                ValidationError {
                    attribute: String::new(),
                    message: format!("references taxonomy {}@{}", c.taxonomy_id(), c.taxonomy_version()),
                },
            );
        }
        if !errors.is_empty() {
            return Err(RenderError::InvalidOverlay {
                index: index + 1,
                name: o.label.clone(),
                errors,
            });
        }
    }
    Ok(())
}

/// Per-attribute, per-characteristic marks in taxonomy order.
pub fn cell_marks(spec: &RenderSpec<'_>) -> Vec<Vec<CellMark>> {
    let selected = |slot: usize, attr: &str, ch: &str| {
        spec.overlays
            .get(slot)
            .and_then(|o| o.classification.selection(attr))
            .is_some_and(|s| s.contains(ch))
    };
    spec.taxonomy
        .attributes
        .iter()
        .map(|a| {
            a.characteristics
                .iter()
                .map(|c| CellMark {
                    first: selected(0, &a.id, &c.id),
                    second: selected(1, &a.id, &c.id),
                })
                .collect()
        })
        .collect()
}

pub fn render(spec: &RenderSpec<'_>) -> Result<String, RenderError> {
    check(spec)?;
    Ok(match spec.format {
        RenderFormat::Text => render_text(spec),
        RenderFormat::Svg => render_svg(spec),
    })
}

fn render_text(spec: &RenderSpec<'_>) -> String {
    let t = spec.taxonomy;
    let marks = cell_marks(spec);
    let mut out = String::new();
    let _ = writeln!(out, "{} ({} {})", t.name, t.id, t.version);
    if !spec.overlays.is_empty() {
        let mut legend = String::from("legend:");
        for (i, o) in spec.overlays.iter().enumerate() {
            let _ = write!(legend, " [{}] {}", i + 1, o.label);
        }
        if spec.overlays.len() == 2 {
            legend.push_str(" [12] both");
        }
        let _ = writeln!(out, "{legend}");
    }
    out.push('\n');

    let name_w = t
        .attributes
        .iter()
        .map(|a| a.name.chars().count())
        .max()
        .unwrap_or(0);
    for (attr, row) in t.attributes.iter().zip(&marks) {
        let w = attr
            .characteristics
            .iter()
            .map(|c| c.label.chars().count())
            .max()
            .unwrap_or(0)
            + 2;
        let _ = write!(out, "{:<name_w$} |", attr.name);
        for (ch, mark) in attr.characteristics.iter().zip(row) {
            let _ = write!(out, " {:<4} {:<w$}|", mark.tag(), ch.label);
        }
        out.push('\n');
    }
    out
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

fn render_svg(spec: &RenderSpec<'_>) -> String {
    let t = spec.taxonomy;
    let marks = cell_marks(spec);
    let max_cells = t
        .attributes
        .iter()
        .map(|a| a.characteristics.len())
        .max()
        .unwrap_or(0) as u32;
    let legend_h = if spec.overlays.is_empty() {
        0
    } else {
        LEGEND_HEIGHT
    };
    let grid_top = MARGIN + TITLE_HEIGHT + legend_h;
    let width = 2 * MARGIN + LABEL_WIDTH + max_cells * CELL_WIDTH;
    let height = grid_top + t.attributes.len() as u32 * CELL_HEIGHT + MARGIN;
    let first_fill = spec
        .overlays
        .first()
        .map_or(DEFAULT_FILLS[0], |o| o.fill.as_str());
    let second_fill = spec.overlays.get(1).map_or(DEFAULT_FILLS[1], |o| o.fill.as_str());

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="monospace" font-size="12">"#
    );
    let _ = writeln!(s, "  <defs>");
    let _ = writeln!(
        s,
        r#"    <pattern id="both" width="8" height="8" patternUnits="userSpaceOnUse" patternTransform="rotate(45)">"#
    );
    let _ = writeln!(
        s,
        r#"      <path d="M0 0H4V8H0Z" fill="{}"/>"#,
        escape(first_fill)
    );
    let _ = writeln!(
        s,
        r#"      <path d="M4 0H8V8H4Z" fill="{}"/>"#,
        escape(second_fill)
    );
    let _ = writeln!(s, "    </pattern>");
    let _ = writeln!(s, "  </defs>");
    let _ = writeln!(
        s,
        r#"  <text x="{MARGIN}" y="{}" font-size="14" font-weight="bold">{} ({} {})</text>"#,
        MARGIN + 16,
        escape(&t.name),
        escape(&t.id),
        escape(&t.version)
    );

    if !spec.overlays.is_empty() {
        let y = MARGIN + TITLE_HEIGHT + 12;
        let mut x = MARGIN;
        let mut entries: Vec<(String, &str)> = spec
            .overlays
            .iter()
            .enumerate()
            .map(|(i, o)| (format!("[{}] {}", i + 1, o.label), o.fill.as_str()))
            .collect();
        if spec.overlays.len() == 2 {
            entries.push(("[12] both".into(), BOTH_FILL));
        }
        let _ = writeln!(s, r#"  <g class="legend">"#);
        for (text, fill) in entries {
            let _ = writeln!(
                s,
                r##"    <circle cx="{}" cy="{}" r="6" fill="{}" stroke="#333333"/>"##,
                x + 6,
                y - 4,
                escape(fill)
            );
            let _ = writeln!(s, r#"    <text x="{}" y="{y}">{}</text>"#, x + 16, escape(&text));
            x += 16 + 8 * text.chars().count() as u32 + 24;
        }
        let _ = writeln!(s, "  </g>");
    }

    for (i, (attr, row)) in t.attributes.iter().zip(&marks).enumerate() {
        let y = grid_top + i as u32 * CELL_HEIGHT;
        let _ = writeln!(s, r#"  <g class="attribute" data-id="{}">"#, escape(&attr.id));
        let _ = writeln!(
            s,
            r#"    <text x="{MARGIN}" y="{}" font-weight="bold">{}</text>"#,
            y + 18,
            escape(&attr.name)
        );
        for (j, (ch, mark)) in attr.characteristics.iter().zip(row).enumerate() {
            let x = MARGIN + LABEL_WIDTH + j as u32 * CELL_WIDTH;
            let fill = match (mark.first, mark.second) {
                (true, true) => BOTH_FILL,
                (true, false) => first_fill,
                (false, true) => second_fill,
                (false, false) => EMPTY_FILL,
            };
            let _ = writeln!(
                s,
                r##"    <rect class="cell" data-id="{}" x="{x}" y="{y}" width="{CELL_WIDTH}" height="{CELL_HEIGHT}" fill="{}" stroke="#333333"/>"##,
                escape(&ch.id),
                escape(fill)
            );
            let label = if mark.tag().is_empty() {
                escape(&ch.label)
            } else {
                format!("{} {}", mark.tag(), escape(&ch.label))
            };
            let _ = writeln!(s, r#"    <text x="{}" y="{}">{label}</text>"#, x + 6, y + 18);
        }
        let _ = writeln!(s, "  </g>");
    }
    s.push_str("</svg>\n");
    s
}
