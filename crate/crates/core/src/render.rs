//! Deterministic SVG 1.1 figures.
//!
//! Coordinates are printed with two decimals so identical inputs give
//! byte-identical documents. The y axis points up.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::chains::is_chain;
use crate::embedding::{is_crowded_embedding, RotationEmbedding};
use crate::graph::MetricGraph;
use crate::lattice::{LatticePoint, LatticePolygon};
use crate::rational::{to_f64, Rational};
use crate::triangulation::UnimodularTriangulation;
use crate::tropical::{Skeleton, TropicalCurve};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SvgOptions {
    /// Pixels per lattice unit.
    pub scale: f64,
    /// Pixels around the drawing.
    pub margin: f64,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions { scale: 40.0, margin: 20.0 }
    }
}

type Pt = (f64, f64);

struct Canvas {
    lo: Pt,
    hi: Pt,
    opts: SvgOptions,
    body: String,
}

impl Canvas {
    fn new(lo: Pt, hi: Pt, opts: SvgOptions) -> Self {
        Canvas { lo, hi, opts, body: String::new() }
    }

    fn px(&self, (x, y): Pt) -> Pt {
        (self.opts.margin + (x - self.lo.0) * self.opts.scale, self.opts.margin + (self.hi.1 - y) * self.opts.scale)
    }

    fn line(&mut self, a: Pt, b: Pt, style: &str) {
        let (a, b) = (self.px(a), self.px(b));
        let _ = writeln!(self.body, r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" {style}/>"#, a.0, a.1, b.0, b.1);
    }

    /// Quadratic curve through the control point `c`.
    fn curve(&mut self, a: Pt, c: Pt, b: Pt, style: &str) {
        let (a, c, b) = (self.px(a), self.px(c), self.px(b));
        let _ = writeln!(
            self.body,
            r#"<path d="M {:.2} {:.2} Q {:.2} {:.2} {:.2} {:.2}" fill="none" {style}/>"#,
            a.0, a.1, c.0, c.1, b.0, b.1
        );
    }

    fn circle(&mut self, c: Pt, r_px: f64, style: &str) {
        let c = self.px(c);
        let _ = writeln!(self.body, r#"<circle cx="{:.2}" cy="{:.2}" r="{r_px:.2}" {style}/>"#, c.0, c.1);
    }

    fn polygon(&mut self, pts: &[Pt], style: &str) {
        let coords: Vec<String> = pts.iter().map(|&p| self.px(p)).map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
        let _ = writeln!(self.body, r#"<polygon points="{}" {style}/>"#, coords.join(" "));
    }

    fn text(&mut self, p: Pt, s: &str, style: &str) {
        let p = self.px(p);
        let _ = writeln!(self.body, r#"<text x="{:.2}" y="{:.2}" {style}>{}</text>"#, p.0, p.1, escape(s));
    }

    fn grid(&mut self) {
        let (x0, y0) = (self.lo.0.ceil() as i64, self.lo.1.ceil() as i64);
        let (x1, y1) = (self.hi.0.floor() as i64, self.hi.1.floor() as i64);
        let style = r##"stroke="#dddddd" stroke-width="1""##;
        for x in x0..=x1 {
            self.line((x as f64, self.lo.1), (x as f64, self.hi.1), style);
        }
        for y in y0..=y1 {
            self.line((self.lo.0, y as f64), (self.hi.0, y as f64), style);
        }
    }

    fn finish(self) -> String {
        let w = 2.0 * self.opts.margin + (self.hi.0 - self.lo.0) * self.opts.scale;
        let h = 2.0 * self.opts.margin + (self.hi.1 - self.lo.1) * self.opts.scale;
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
             <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w:.2}\" height=\"{h:.2}\" viewBox=\"0 0 {w:.2} {h:.2}\">\n\
             <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{}</svg>\n",
            self.body
        )
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn pt(p: LatticePoint) -> Pt {
    (p.x as f64, p.y as f64)
}

fn bounds(pts: impl IntoIterator<Item = Pt>) -> (Pt, Pt) {
    let mut lo = (f64::INFINITY, f64::INFINITY);
    let mut hi = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for (x, y) in pts {
        lo = (lo.0.min(x), lo.1.min(y));
        hi = (hi.0.max(x), hi.1.max(y));
    }
    (lo, hi)
}

fn lattice_canvas(polygon: &LatticePolygon, opts: SvgOptions) -> Canvas {
    let (lo, hi) = bounds(polygon.vertices().iter().map(|&p| pt(p)));
    let mut c = Canvas::new(lo, hi, opts);
    c.grid();
    c
}

fn outline_and_points(c: &mut Canvas, polygon: &LatticePolygon) {
    let outline: Vec<Pt> = polygon.vertices().iter().map(|&p| pt(p)).collect();
    c.polygon(&outline, r#"fill="none" stroke="black" stroke-width="2""#);
    for p in polygon.lattice_points() {
        if polygon.strictly_contains(p) {
            c.circle(pt(p), 4.0, r#"fill="black""#);
        } else {
            c.circle(pt(p), 4.0, r#"fill="white" stroke="black" stroke-width="1.5""#);
        }
    }
}

/// Grid, outline, boundary points hollow and interior points filled.
pub fn render_polygon(polygon: &LatticePolygon, opts: SvgOptions) -> String {
    let mut c = lattice_canvas(polygon, opts);
    outline_and_points(&mut c, polygon);
    c.finish()
}

pub fn render_triangulation(polygon: &LatticePolygon, tri: &UnimodularTriangulation, opts: SvgOptions) -> String {
    let mut c = lattice_canvas(polygon, opts);
    for (a, b) in tri.edges() {
        c.line(pt(tri.points[a]), pt(tri.points[b]), r##"stroke="#3366aa" stroke-width="1.5""##);
    }
    outline_and_points(&mut c, polygon);
    c.finish()
}

fn rat_pt(x: &Rational, y: &Rational) -> Pt {
    (to_f64(x), to_f64(y))
}

/// Viewport around the curve vertices padded by a third of the span, with
/// the scale raised so the viewport covers at least ten units' worth of
/// pixels.
fn curve_canvas(curve: &TropicalCurve, mut opts: SvgOptions) -> Canvas {
    let (lo, hi) = bounds(curve.vertices.iter().map(|v| rat_pt(&v.x, &v.y)));
    let span = (hi.0 - lo.0).max(hi.1 - lo.1).max(0.5);
    let pad = span / 3.0;
    opts.scale *= (10.0 / (span + 2.0 * pad)).max(1.0);
    Canvas::new((lo.0 - pad, lo.1 - pad), (hi.0 + pad, hi.1 + pad), opts)
}

/// Where the ray from `p` along `d` leaves the box `[lo, hi]`.
fn clip_ray(p: Pt, d: (i64, i64), lo: Pt, hi: Pt) -> Pt {
    let mut t = f64::INFINITY;
    for (pc, dc, l, h) in [(p.0, d.0 as f64, lo.0, hi.0), (p.1, d.1 as f64, lo.1, hi.1)] {
        if dc > 0.0 {
            t = t.min((h - pc) / dc);
        } else if dc < 0.0 {
            t = t.min((l - pc) / dc);
        }
    }
    (p.0 + t * d.0 as f64, p.1 + t * d.1 as f64)
}

fn draw_curve(c: &mut Canvas, curve: &TropicalCurve, style: &str) {
    let vs: Vec<Pt> = curve.vertices.iter().map(|v| rat_pt(&v.x, &v.y)).collect();
    for e in &curve.bounded_edges {
        c.line(vs[e.triangles[0]], vs[e.triangles[1]], style);
    }
    for r in &curve.rays {
        let end = clip_ray(vs[r.triangle], (r.direction[0], r.direction[1]), c.lo, c.hi);
        c.line(vs[r.triangle], end, style);
    }
}

/// The curve with rays clipped to the viewport; each bounded face is
/// labelled by its interior lattice point.
pub fn render_curve(curve: &TropicalCurve, opts: SvgOptions) -> String {
    let mut c = curve_canvas(curve, opts);
    draw_curve(&mut c, curve, r#"stroke="black" stroke-width="1.5""#);
    let vs: Vec<Pt> = curve.vertices.iter().map(|v| rat_pt(&v.x, &v.y)).collect();
    for f in &curve.faces {
        let corners: Vec<Pt> = f.edges.iter().flat_map(|&e| curve.bounded_edges[e].triangles).map(|t| vs[t]).collect();
        let n = corners.len().max(1) as f64;
        let centre = (corners.iter().map(|p| p.0).sum::<f64>() / n, corners.iter().map(|p| p.1).sum::<f64>() / n);
        let label = curve.points[f.point].to_string();
        c.text(centre, &label, r##"font-size="10" fill="#888888" text-anchor="middle""##);
    }
    c.finish()
}

/// The curve in grey with the skeleton drawn over it; each skeleton edge is
/// labelled with its exact length.
pub fn render_skeleton(curve: &TropicalCurve, sk: &Skeleton, opts: SvgOptions) -> String {
    let mut c = curve_canvas(curve, opts);
    draw_curve(&mut c, curve, r##"stroke="#bbbbbb" stroke-width="1""##);
    let vs: Vec<Pt> = curve.vertices.iter().map(|v| rat_pt(&v.x, &v.y)).collect();
    for (k, seg) in sk.structure.segments.iter().enumerate() {
        for &e in seg {
            let be = &curve.bounded_edges[e];
            c.line(vs[be.triangles[0]], vs[be.triangles[1]], r##"stroke="#cc3311" stroke-width="3""##);
        }
        let mid = &curve.bounded_edges[seg[seg.len() / 2]];
        let (a, b) = (vs[mid.triangles[0]], vs[mid.triangles[1]]);
        let at = ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0);
        c.text(at, &sk.graph.edges[k].len.to_string(), r#"font-size="12" fill="black" text-anchor="middle""#);
    }
    for &t in &sk.structure.vertex_triangles {
        c.circle(vs[t], 4.0, r##"fill="#cc3311""##);
    }
    c.finish()
}

/// Straight edges, parallel edges as symmetric arcs, loops as circles
/// pointing away from the neighbours.
fn draw_graph(c: &mut Canvas, g: &MetricGraph, pos: &[Pt], highlight: &[usize], labels: bool) {
    let mut groups: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, e) in g.edges.iter().enumerate() {
        groups.entry((e.u.min(e.v), e.u.max(e.v))).or_default().push(i);
    }
    let style = |i: usize| {
        if highlight.contains(&i) {
            r##"stroke="#cc3311" stroke-width="3""##
        } else {
            r#"stroke="black" stroke-width="2""#
        }
    };
    let label_style = r##"font-size="11" fill="#225588" text-anchor="middle""##;
    for (&(u, v), edges) in &groups {
        if u == v {
            let nbrs: Vec<Pt> = g.edges.iter().filter(|e| !e.is_loop() && (e.u == u || e.v == u)).map(|e| pos[e.other(u)]).collect();
            let away = if nbrs.is_empty() {
                (-1.0, 0.0)
            } else {
                let n = nbrs.len() as f64;
                let m = (nbrs.iter().map(|p| p.0).sum::<f64>() / n, nbrs.iter().map(|p| p.1).sum::<f64>() / n);
                let d = (pos[u].0 - m.0, pos[u].1 - m.1);
                let len = (d.0 * d.0 + d.1 * d.1).sqrt();
                if len < 1e-9 {
                    (-1.0, 0.0)
                } else {
                    (d.0 / len, d.1 / len)
                }
            };
            for (k, &i) in edges.iter().enumerate() {
                let r = 0.4 + 0.2 * k as f64;
                let centre = (pos[u].0 + r * away.0, pos[u].1 + r * away.1);
                c.circle(centre, r * c.opts.scale, &format!(r#"fill="none" {}"#, style(i)));
                if labels {
                    let at = (pos[u].0 + 2.0 * r * away.0, pos[u].1 + 2.0 * r * away.1 + 0.1);
                    c.text(at, &g.edges[i].len.to_string(), label_style);
                }
            }
            continue;
        }
        let (a, b) = (pos[u], pos[v]);
        let d = (b.0 - a.0, b.1 - a.1);
        let normal = (-d.1, d.0);
        let k = edges.len();
        for (j, &i) in edges.iter().enumerate() {
            let off = (j as f64 - (k as f64 - 1.0) / 2.0) * 0.6;
            let ctrl = ((a.0 + b.0) / 2.0 + off * normal.0, (a.1 + b.1) / 2.0 + off * normal.1);
            c.curve(a, ctrl, b, style(i));
            if labels {
                // the quadratic's midpoint sits halfway to the control point
                let at = ((a.0 + b.0) / 2.0 + off * normal.0 / 2.0, (a.1 + b.1) / 2.0 + off * normal.1 / 2.0 + 0.1);
                c.text(at, &g.edges[i].len.to_string(), label_style);
            }
        }
    }
    for &p in pos {
        c.circle(p, 4.0, r#"fill="black""#);
    }
}

fn graph_canvas(pos: &[Pt], opts: SvgOptions) -> Canvas {
    let (lo, hi) = bounds(pos.iter().copied());
    Canvas::new((lo.0 - 1.5, lo.1 - 1.5), (hi.0 + 1.5, hi.1 + 1.5), opts)
}

/// Positions of the standard chain picture: nodes left to right, a bridge
/// drawn horizontally and a rung vertically.
fn chain_positions(g: &MetricGraph) -> Option<Vec<Pt>> {
    let c = is_chain(g)?;
    let bridges = g.bridges();
    // hop distance from the first loop orients the bridges
    let start = g.edges[c.vertical[0]].u;
    let mut dist = vec![usize::MAX; g.vertices];
    dist[start] = 0;
    let mut queue = std::collections::VecDeque::from([start]);
    let inc = g.incidence();
    while let Some(x) = queue.pop_front() {
        for &e in &inc[x] {
            let y = g.edges[e].other(x);
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    let mut pos = vec![(0.0, 0.0); g.vertices];
    let mut prev_top: Option<usize> = None;
    for (i, &s) in c.vertical[1..c.vertical.len() - 1].iter().enumerate() {
        let e = &g.edges[s];
        let x = 3.0 * i as f64;
        if bridges.contains(&s) {
            let (l, r) = if dist[e.u] <= dist[e.v] { (e.u, e.v) } else { (e.v, e.u) };
            pos[l] = (x - 0.6, 0.0);
            pos[r] = (x + 0.6, 0.0);
            prev_top = None;
        } else {
            let adjacent = |a: usize, b: usize| g.edges.iter().enumerate().any(|(k, f)| k != s && ((f.u, f.v) == (a, b) || (f.u, f.v) == (b, a)));
            let top = match prev_top {
                Some(t) if adjacent(t, e.v) && !adjacent(t, e.u) => e.v,
                Some(_) => e.u,
                None => e.u.min(e.v),
            };
            let bottom = e.other(top);
            pos[top] = (x, 0.9);
            pos[bottom] = (x, -0.9);
            prev_top = Some(top);
        }
    }
    Some(pos)
}

/// Barycentric layout with the outer face pinned to a circle.
fn tutte_positions(g: &MetricGraph, e: &RotationEmbedding) -> Vec<Pt> {
    let mut outer: Vec<usize> = Vec::new();
    for &d in &e.faces[e.outer_face] {
        let edge = &g.edges[d / 2];
        let v = if d % 2 == 0 { edge.u } else { edge.v };
        if !outer.contains(&v) {
            outer.push(v);
        }
    }
    let n = g.vertices;
    let radius = 1.0 + n as f64 / 2.0;
    let mut pos = vec![(0.0, 0.0); n];
    let mut pinned = vec![false; n];
    for (k, &v) in outer.iter().enumerate() {
        let a = std::f64::consts::TAU * k as f64 / outer.len() as f64;
        pos[v] = (radius * a.cos(), radius * a.sin());
        pinned[v] = true;
    }
    // tiny fixed offsets keep unpinned vertices apart before relaxation
    for v in 0..n {
        if !pinned[v] {
            pos[v] = (0.01 * v as f64, 0.0);
        }
    }
    for _ in 0..2000 {
        for v in 0..n {
            if pinned[v] {
                continue;
            }
            let nbrs: Vec<usize> = g.edges.iter().filter(|x| !x.is_loop() && (x.u == v || x.v == v)).map(|x| x.other(v)).collect();
            if nbrs.is_empty() {
                continue;
            }
            let k = nbrs.len() as f64;
            pos[v] = (nbrs.iter().map(|&w| pos[w].0).sum::<f64>() / k, nbrs.iter().map(|&w| pos[w].1).sum::<f64>() / k);
        }
    }
    pos
}

/// Standard picture of a chain, or `None` when `g` is not a chain.
pub fn render_chain(g: &MetricGraph, opts: SvgOptions) -> Option<String> {
    let pos = chain_positions(g)?;
    let mut c = graph_canvas(&pos, opts);
    draw_graph(&mut c, g, &pos, &[], true);
    Some(c.finish())
}

/// A planar embedding with its outer face on a circle; edges shared by two
/// bounded faces of a crowded embedding are highlighted.
pub fn render_embedding(g: &MetricGraph, e: &RotationEmbedding, opts: SvgOptions) -> String {
    let pos = tutte_positions(g, e);
    let highlight = is_crowded_embedding(e).map(|w| w.shared_edges).unwrap_or_default();
    let mut c = graph_canvas(&pos, opts);
    draw_graph(&mut c, g, &pos, &highlight, false);
    c.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::{build_chain, ChainLengths};
    use crate::embedding::planar_embeddings;
    use crate::graph::theta;
    use crate::rational::{int, rat};
    use crate::triangulation::{initial_triangulation, regular_height};
    use crate::tropical::{dual_curve, skeleton};

    #[test]
    fn unit_triangle_is_three_lines_on_a_grid() {
        let p = LatticePolygon::from_coords(&[(0, 0), (1, 0), (0, 1)]).unwrap();
        let svg = render_triangulation(&p, &initial_triangulation(&p), SvgOptions::default());
        assert_eq!(svg.matches("stroke=\"#3366aa\"").count(), 3);
        assert_eq!(svg.matches("stroke=\"#dddddd\"").count(), 4);
        assert!(svg.starts_with("<?xml") && svg.ends_with("</svg>\n"));
    }

    #[test]
    fn clipped_rays_end_on_the_box() {
        let end = clip_ray((0.0, 0.0), (1, 2), (-1.0, -1.0), (3.0, 3.0));
        assert!((end.0 - 1.5).abs() < 1e-12 && (end.1 - 3.0).abs() < 1e-12);
    }

    #[test]
    fn skeleton_labels_are_exact() {
        let p = LatticePolygon::from_coords(&[(0, 0), (6, 0), (0, 2)]).unwrap();
        let tri = initial_triangulation(&p);
        let h = regular_height(&tri).unwrap().unwrap();
        let curve = dual_curve(&p, &tri, &h).unwrap();
        let sk = skeleton(&curve).unwrap();
        let svg = render_skeleton(&curve, &sk, SvgOptions::default());
        for e in &sk.graph.edges {
            assert!(svg.contains(&format!(">{}</text>", e.len)));
        }
        assert_eq!(svg, render_skeleton(&curve, &sk, SvgOptions::default()));
    }

    #[test]
    fn chains_are_drawn_and_other_graphs_are_not() {
        let mut l = ChainLengths::uniform(4, int(1));
        l.splits[0] = rat(5, 2);
        let c = build_chain(4, &[false, true, false], &l).unwrap();
        let svg = render_chain(&c, SvgOptions::default()).unwrap();
        assert!(svg.contains(">5/2</text>"));
        // one unfilled stroke per edge
        assert_eq!(svg.matches("fill=\"none\"").count(), 9);
        let k4 = MetricGraph::combinatorial(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(render_chain(&k4, SvgOptions::default()).is_none());
    }

    #[test]
    fn embeddings_render_every_edge() {
        let th = theta([int(1), int(1), int(1)]);
        let e = &planar_embeddings(&th).unwrap()[0];
        let svg = render_embedding(&th, e, SvgOptions::default());
        assert_eq!(svg.matches("<path").count(), 3);
    }
}
