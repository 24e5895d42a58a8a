//! Deterministic SVG figures: adjacency heatmaps, overlaid gridplots and
//! embedding pairplots.

use std::fmt::Write as _;

use nalgebra::DMatrix;

use crate::error::{invalid, Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SortMode {
    #[default]
    None,
    Degree,
    BlockThenDegree,
}

impl std::str::FromStr for SortMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Self::None),
            "degree" => Ok(Self::Degree),
            "block" | "block_then_degree" => Ok(Self::BlockThenDegree),
            other => Err(invalid(format!("unknown sort mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SortSpec {
    pub mode: SortMode,
    pub labels: Option<Vec<String>>,
}

impl SortSpec {
    pub fn new(mode: SortMode, labels: Option<Vec<String>>) -> Self {
        Self { mode, labels }
    }
}

/// Off-diagonal row plus column sums.
fn matrix_degrees(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i)
                .map(|j| m[(i, j)] + m[(j, i)])
                .sum()
        })
        .collect()
}

fn check_labels(spec: &SortSpec, n: usize) -> Result<()> {
    match (&spec.labels, spec.mode) {
        (Some(l), _) if l.len() != n => Err(Error::ShapeMismatch(format!(
            "{} labels for {n} nodes",
            l.len()
        ))),
        (None, SortMode::BlockThenDegree) => Err(invalid("block sorting needs labels")),
        _ => Ok(()),
    }
}

/// Node order for a matrix. Blocks are ordered by size descending (ties by
/// name) and nodes by degree descending (ties by index).
pub fn sort_matrix_indices(m: &DMatrix<f64>, spec: &SortSpec) -> Result<Vec<usize>> {
    order_by_degree(&matrix_degrees(m), spec)
}

/// The same rule applied to precomputed degrees.
pub fn order_by_degree(degrees: &[f64], spec: &SortSpec) -> Result<Vec<usize>> {
    let n = degrees.len();
    check_labels(spec, n)?;
    let mut order: Vec<usize> = (0..n).collect();
    let by_degree = |a: &usize, b: &usize| degrees[*b].total_cmp(&degrees[*a]).then(a.cmp(b));
    match (spec.mode, &spec.labels) {
        (SortMode::None, _) => {}
        (SortMode::BlockThenDegree, Some(labels)) => {
            let mut sizes = std::collections::BTreeMap::<&str, usize>::new();
            for l in labels {
                *sizes.entry(l).or_default() += 1;
            }
            order.sort_by(|a, b| {
                let (la, lb) = (labels[*a].as_str(), labels[*b].as_str());
                sizes[lb]
                    .cmp(&sizes[la])
                    .then(la.cmp(lb))
                    .then_with(|| by_degree(a, b))
            });
        }
        _ => order.sort_by(by_degree),
    }
    Ok(order)
}

pub fn sort_indices(g: &Graph, spec: &SortSpec) -> Result<Vec<usize>> {
    sort_matrix_indices(g.adjacency(), spec)
}

/// Cumulative positions where the label changes along `order`.
pub fn block_boundaries(labels: &[String], order: &[usize]) -> Vec<usize> {
    (1..order.len())
        .filter(|&k| labels[order[k]] != labels[order[k - 1]])
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Colormap {
    #[default]
    Sequential,
    Diverging,
}

impl std::str::FromStr for Colormap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sequential" => Ok(Self::Sequential),
            "diverging" => Ok(Self::Diverging),
            other => Err(invalid(format!("unknown colormap `{other}`"))),
        }
    }
}

pub const BACKGROUND: &str = "#ffffff";
pub const FOREGROUND: &str = "#08306b";
const DIVERGING_LOW: (f64, f64, f64) = (33.0, 102.0, 172.0);
const DIVERGING_HIGH: (f64, f64, f64) = (178.0, 24.0, 43.0);
const SEQUENTIAL_HIGH: (f64, f64, f64) = (8.0, 48.0, 107.0);
const WHITE: (f64, f64, f64) = (255.0, 255.0, 255.0);
const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

fn lerp(a: (f64, f64, f64), b: (f64, f64, f64), t: f64) -> String {
    let c = |x: f64, y: f64| (x + (y - x) * t).round() as u8;
    format!("#{:02x}{:02x}{:02x}", c(a.0, b.0), c(a.1, b.1), c(a.2, b.2))
}

pub fn escape(text: &str) -> String {
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

const PLOT_SIZE: f64 = 600.0;
const MARGIN: f64 = 40.0;

fn header(out: &mut String, width: f64, height: f64, title: Option<&str>) {
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\">"
    );
    if let Some(t) = title {
        let _ = writeln!(
            out,
            "<text class=\"title\" x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">{}</text>",
            width / 2.0,
            MARGIN * 0.6,
            escape(t)
        );
    }
}

#[derive(Debug, Clone, Default)]
pub struct HeatmapOptions {
    pub title: Option<String>,
    pub colormap: Colormap,
    /// Fixed `(min, max)` colour range, e.g. shared across panels.
    pub range: Option<(f64, f64)>,
    /// Explicit node order overriding the sort spec.
    pub order: Option<Vec<usize>>,
}

fn is_binary_matrix(m: &DMatrix<f64>) -> bool {
    m.iter().all(|&v| v == 0.0 || v == 1.0)
}

/// One `<rect>` per cell; block separators as `<line>` when labels exist.
pub fn heatmap_svg(m: &DMatrix<f64>, spec: &SortSpec, opts: &HeatmapOptions) -> Result<String> {
    let n = m.nrows();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if m.ncols() != n {
        return Err(Error::ShapeMismatch(format!(
            "heatmap needs a square matrix, got {:?}",
            m.shape()
        )));
    }
    let order = match &opts.order {
        Some(o) => {
            check_permutation(o, n)?;
            check_labels(spec, n)?;
            o.clone()
        }
        None => sort_matrix_indices(m, spec)?,
    };
    let binary = opts.range.is_none() && is_binary_matrix(m);
    let (lo, hi) = opts.range.unwrap_or_else(|| {
        let lo = m.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = m.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    });
    let fill = |v: f64| -> String {
        if binary {
            return if v == 1.0 {
                FOREGROUND.into()
            } else {
                BACKGROUND.into()
            };
        }
        match opts.colormap {
            Colormap::Sequential => {
                let t = if hi > lo {
                    ((v - lo) / (hi - lo)).clamp(0.0, 1.0)
                } else {
                    0.0
                };
                lerp(WHITE, SEQUENTIAL_HIGH, t)
            }
            Colormap::Diverging => {
                let r = lo.abs().max(hi.abs());
                let t = if r > 0.0 {
                    (v / r).clamp(-1.0, 1.0)
                } else {
                    0.0
                };
                if t < 0.0 {
                    lerp(WHITE, DIVERGING_LOW, -t)
                } else {
                    lerp(WHITE, DIVERGING_HIGH, t)
                }
            }
        }
    };
    let cell = PLOT_SIZE / n as f64;
    let size = PLOT_SIZE + 2.0 * MARGIN;
    let mut out = String::new();
    header(&mut out, size, size, opts.title.as_deref());
    out.push_str("<g class=\"cells\" shape-rendering=\"crispEdges\">\n");
    for (r, &i) in order.iter().enumerate() {
        for (c, &j) in order.iter().enumerate() {
            let _ = writeln!(
                out,
                "<rect x=\"{:.3}\" y=\"{:.3}\" width=\"{cell:.3}\" height=\"{cell:.3}\" fill=\"{}\"/>",
                MARGIN + c as f64 * cell,
                MARGIN + r as f64 * cell,
                fill(m[(i, j)])
            );
        }
    }
    out.push_str("</g>\n");
    if let Some(labels) = &spec.labels {
        out.push_str("<g class=\"block-boundaries\" stroke=\"#000000\" stroke-width=\"1\">\n");
        for k in block_boundaries(labels, &order) {
            let pos = MARGIN + k as f64 * cell;
            let _ = writeln!(
                out,
                "<line x1=\"{MARGIN:.3}\" y1=\"{pos:.3}\" x2=\"{:.3}\" y2=\"{pos:.3}\"/>",
                MARGIN + PLOT_SIZE
            );
            let _ = writeln!(
                out,
                "<line x1=\"{pos:.3}\" y1=\"{MARGIN:.3}\" x2=\"{pos:.3}\" y2=\"{:.3}\"/>",
                MARGIN + PLOT_SIZE
            );
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn check_permutation(order: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if order.len() != n
        || !order
            .iter()
            .all(|&i| i < n && !std::mem::replace(&mut seen[i], true))
    {
        return Err(invalid("order is not a permutation of the nodes"));
    }
    Ok(())
}

fn legend(out: &mut String, x: f64, names: &[String]) {
    out.push_str("<g class=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n");
    for (k, name) in names.iter().enumerate() {
        let y = MARGIN + 10.0 + 18.0 * k as f64;
        let _ = writeln!(
            out,
            "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"5\" fill=\"{}\"/><text x=\"{:.2}\" y=\"{:.2}\">{}</text>",
            PALETTE[k % PALETTE.len()],
            x + 10.0,
            y + 4.0,
            escape(name)
        );
    }
    out.push_str("</g>\n");
}

/// Overlays several graphs on shared axes; graph `i` is drawn in colour `i`.
pub fn gridplot_svg(
    gs: &[Graph],
    names: &[String],
    spec: &SortSpec,
    title: Option<&str>,
) -> Result<String> {
    let Some(first) = gs.first() else {
        return Err(invalid("gridplot needs at least one graph"));
    };
    let n = first.n();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if gs.iter().any(|g| g.n() != n) {
        return Err(Error::ShapeMismatch(
            "gridplot graphs must share a node count".into(),
        ));
    }
    if names.len() != gs.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} names for {} graphs",
            names.len(),
            gs.len()
        )));
    }
    let union = DMatrix::from_fn(n, n, |i, j| {
        gs.iter().filter(|g| g.adjacency()[(i, j)] != 0.0).count() as f64
    });
    let order = sort_matrix_indices(&union, spec)?;
    let cell = PLOT_SIZE / n as f64;
    let radius = (cell / 2.0).max(0.5);
    let mut out = String::new();
    header(
        &mut out,
        PLOT_SIZE + 2.0 * MARGIN + 160.0,
        PLOT_SIZE + 2.0 * MARGIN,
        title,
    );
    let _ = writeln!(
        out,
        "<rect class=\"frame\" x=\"{MARGIN:.2}\" y=\"{MARGIN:.2}\" width=\"{PLOT_SIZE:.2}\" height=\"{PLOT_SIZE:.2}\" fill=\"none\" stroke=\"#000000\"/>"
    );
    for (k, g) in gs.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let _ = writeln!(
            out,
            "<g class=\"graph\" data-name=\"{}\">",
            escape(&names[k])
        );
        for (r, &i) in order.iter().enumerate() {
            for (c, &j) in order.iter().enumerate() {
                if g.adjacency()[(i, j)] != 0.0 {
                    let _ = writeln!(
                        out,
                        "<circle class=\"marker g{k}\" cx=\"{:.3}\" cy=\"{:.3}\" r=\"{radius:.3}\" fill=\"{color}\" fill-opacity=\"0.5\"/>",
                        MARGIN + (c as f64 + 0.5) * cell,
                        MARGIN + (r as f64 + 0.5) * cell
                    );
                }
            }
        }
        out.push_str("</g>\n");
    }
    legend(&mut out, PLOT_SIZE + 2.0 * MARGIN + 10.0, names);
    out.push_str("</svg>\n");
    Ok(out)
}

pub const PAIRPLOT_MAX_DIMS: usize = 5;
const PANEL: f64 = 150.0;
const PANEL_PAD: f64 = 10.0;
const HIST_BINS: usize = 10;

/// Scatter panels for every ordered pair of dimensions with histograms on
/// the diagonal. Points are coloured by label.
pub fn pairplot_svg(
    points: &DMatrix<f64>,
    labels: Option<&[String]>,
    dims: Option<&[usize]>,
    title: Option<&str>,
) -> Result<String> {
    let (m, d) = points.shape();
    if m == 0 || d == 0 {
        return Err(invalid(
            "pairplot needs at least one point and one dimension",
        ));
    }
    if let Some(l) = labels {
        if l.len() != m {
            return Err(Error::ShapeMismatch(format!(
                "{} labels for {m} points",
                l.len()
            )));
        }
    }
    let dims: Vec<usize> = match dims {
        Some(ds) => {
            if ds.is_empty() || ds.iter().any(|&k| k >= d) {
                return Err(invalid(format!(
                    "dimensions must be a non-empty subset of 0..{d}"
                )));
            }
            ds.iter().copied().take(PAIRPLOT_MAX_DIMS).collect()
        }
        None => (0..d.min(PAIRPLOT_MAX_DIMS)).collect(),
    };
    let mut names: Vec<String> = labels.map(|l| l.to_vec()).unwrap_or_default();
    names.sort();
    names.dedup();
    let class_of = |i: usize| labels.map_or(0, |l| names.binary_search(&l[i]).unwrap_or(0));
    let ranges: Vec<(f64, f64)> = dims
        .iter()
        .map(|&k| {
            let col = points.column(k);
            let lo = col.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if hi > lo {
                (lo, hi)
            } else {
                (lo - 0.5, hi + 0.5)
            }
        })
        .collect();
    let scale =
        |v: f64, (lo, hi): (f64, f64)| PANEL_PAD + (v - lo) / (hi - lo) * (PANEL - 2.0 * PANEL_PAD);
    let p = dims.len();
    let grid = p as f64 * PANEL;
    let mut out = String::new();
    header(
        &mut out,
        grid + 2.0 * MARGIN + 160.0,
        grid + 2.0 * MARGIN,
        title,
    );
    for (r, &dr) in dims.iter().enumerate() {
        for (c, &dc) in dims.iter().enumerate() {
            let (ox, oy) = (MARGIN + c as f64 * PANEL, MARGIN + r as f64 * PANEL);
            let kind = if r == c { "hist" } else { "scatter" };
            let _ = writeln!(
                out,
                "<g class=\"panel {kind}\" data-row=\"{dr}\" data-col=\"{dc}\" transform=\"translate({ox:.2},{oy:.2})\">"
            );
            let _ = writeln!(
                out,
                "<rect class=\"frame\" x=\"0\" y=\"0\" width=\"{PANEL:.2}\" height=\"{PANEL:.2}\" fill=\"none\" stroke=\"#000000\"/>"
            );
            if r == c {
                let (lo, hi) = ranges[r];
                let mut counts = [0usize; HIST_BINS];
                for v in points.column(dr).iter() {
                    let b = (((v - lo) / (hi - lo)) * HIST_BINS as f64).floor() as isize;
                    counts[b.clamp(0, HIST_BINS as isize - 1) as usize] += 1;
                }
                let tallest = *counts.iter().max().unwrap_or(&1) as f64;
                let width = (PANEL - 2.0 * PANEL_PAD) / HIST_BINS as f64;
                for (b, &count) in counts.iter().enumerate() {
                    let h = count as f64 / tallest * (PANEL - 2.0 * PANEL_PAD);
                    let _ = writeln!(
                        out,
                        "<rect class=\"bar\" x=\"{:.3}\" y=\"{:.3}\" width=\"{width:.3}\" height=\"{h:.3}\" fill=\"#7f7f7f\"/>",
                        PANEL_PAD + b as f64 * width,
                        PANEL - PANEL_PAD - h
                    );
                }
            } else {
                for i in 0..m {
                    let x = scale(points[(i, dc)], ranges[c]);
                    let y = PANEL - scale(points[(i, dr)], ranges[r]);
                    let k = class_of(i);
                    let _ = writeln!(
                        out,
                        "<circle class=\"marker l{k}\" cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"2\" fill=\"{}\" fill-opacity=\"0.7\"/>",
                        PALETTE[k % PALETTE.len()]
                    );
                }
            }
            out.push_str("</g>\n");
        }
    }
    if !names.is_empty() {
        legend(&mut out, grid + 2.0 * MARGIN + 10.0, &names);
    }
    out.push_str("</svg>\n");
    Ok(out)
}
