//! Marching-squares level curves of a [`ScalarField`].

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::spectra::{GridSpec, ScalarField};

#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    /// `(re, im)` vertices; a closed polyline repeats its first point last.
    pub points: Vec<(f64, f64)>,
    pub closed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContourSet {
    pub levels: Vec<f64>,
    /// `polylines[k]` traces `levels[k]`.
    pub polylines: Vec<Vec<Polyline>>,
}

impl ContourSet {
    pub fn segment_count(&self) -> usize {
        self.polylines
            .iter()
            .flatten()
            .map(|p| p.points.len().saturating_sub(1))
            .sum()
    }
}

/// Cell edges are numbered globally so that neighbouring cells agree on the
/// crossing point. Horizontal edges first, then vertical ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct EdgeId(usize);

struct Tracer<'a> {
    field: &'a ScalarField,
    level: f64,
}

impl Tracer<'_> {
    fn grid(&self) -> &GridSpec {
        &self.field.grid
    }

    fn horizontal(&self, i: usize, j: usize) -> EdgeId {
        EdgeId(j * (self.grid().nx - 1) + i)
    }

    fn vertical(&self, i: usize, j: usize) -> EdgeId {
        let g = self.grid();
        EdgeId(g.ny * (g.nx - 1) + j * g.nx + i)
    }

    fn endpoints(&self, e: EdgeId) -> ((usize, usize), (usize, usize)) {
        let g = self.grid();
        let h_count = g.ny * (g.nx - 1);
        if e.0 < h_count {
            let (j, i) = (e.0 / (g.nx - 1), e.0 % (g.nx - 1));
            ((i, j), (i + 1, j))
        } else {
            let k = e.0 - h_count;
            let (j, i) = (k / g.nx, k % g.nx);
            ((i, j), (i, j + 1))
        }
    }

    /// Linear interpolation of the level crossing along an edge.
    fn point(&self, e: EdgeId) -> (f64, f64) {
        let ((i0, j0), (i1, j1)) = self.endpoints(e);
        let v0 = self.field.get(i0, j0);
        let v1 = self.field.get(i1, j1);
        let t = ((self.level - v0) / (v1 - v0)).clamp(0.0, 1.0);
        let p0 = self.grid().node(i0, j0);
        let p1 = self.grid().node(i1, j1);
        (p0.re + t * (p1.re - p0.re), p0.im + t * (p1.im - p0.im))
    }

    fn high(&self, v: f64) -> bool {
        v >= self.level
    }

    fn segments(&self) -> Vec<(EdgeId, EdgeId)> {
        let g = self.grid();
        let mut segs = Vec::new();
        for j in 0..g.ny - 1 {
            for i in 0..g.nx - 1 {
                let v = [
                    self.field.get(i, j),
                    self.field.get(i + 1, j),
                    self.field.get(i + 1, j + 1),
                    self.field.get(i, j + 1),
                ];
                if v.iter().any(|x| !x.is_finite()) {
                    continue;
                }
                let b: Vec<bool> = v.iter().map(|&x| self.high(x)).collect();
                // bottom, right, top, left
                let edges = [
                    self.horizontal(i, j),
                    self.vertical(i + 1, j),
                    self.horizontal(i, j + 1),
                    self.vertical(i, j),
                ];
                let crossed = [b[0] != b[1], b[1] != b[2], b[3] != b[2], b[0] != b[3]];
                let hits: Vec<EdgeId> = (0..4).filter(|&k| crossed[k]).map(|k| edges[k]).collect();
                match hits.len() {
                    0 => {}
                    2 => segs.push((hits[0], hits[1])),
                    4 => {
                        // saddle: decide connectivity from the cell average
                        let centre = self.high(v.iter().sum::<f64>() / 4.0);
                        if centre == b[0] {
                            segs.push((edges[0], edges[1]));
                            segs.push((edges[2], edges[3]));
                        } else {
                            segs.push((edges[3], edges[0]));
                            segs.push((edges[1], edges[2]));
                        }
                    }
                    _ => unreachable!("a cell has an even number of crossings"),
                }
            }
        }
        segs
    }

    fn trace(&self) -> Vec<Polyline> {
        let segs = self.segments();
        let mut incident: BTreeMap<EdgeId, Vec<usize>> = BTreeMap::new();
        for (k, &(a, b)) in segs.iter().enumerate() {
            incident.entry(a).or_default().push(k);
            incident.entry(b).or_default().push(k);
        }
        let mut used = vec![false; segs.len()];
        let mut out = Vec::new();

        let walk = |start: EdgeId, used: &mut [bool]| -> Vec<EdgeId> {
            let mut chain = vec![start];
            let mut cur = start;
            while let Some(&k) = incident[&cur].iter().find(|&&k| !used[k]) {
                used[k] = true;
                let (a, b) = segs[k];
                cur = if a == cur { b } else { a };
                chain.push(cur);
            }
            chain
        };

        let open_starts: Vec<EdgeId> = incident
            .iter()
            .filter(|(_, v)| v.len() == 1)
            .map(|(e, _)| *e)
            .collect();
        for e in open_starts {
            if incident[&e].iter().all(|&k| used[k]) {
                continue;
            }
            let chain = walk(e, &mut used);
            out.push(Polyline {
                points: chain.iter().map(|&e| self.point(e)).collect(),
                closed: false,
            });
        }
        for k in 0..segs.len() {
            if used[k] {
                continue;
            }
            let chain = walk(segs[k].0, &mut used);
            let closed = chain.first() == chain.last();
            out.push(Polyline {
                points: chain.iter().map(|&e| self.point(e)).collect(),
                closed,
            });
        }
        out
    }
}

/// Level curves of `field` at each of `levels`.
pub fn extract_contours(field: &ScalarField, levels: &[f64]) -> ContourSet {
    let polylines = levels
        .iter()
        .map(|&level| Tracer { field, level }.trace())
        .collect();
    ContourSet {
        levels: levels.to_vec(),
        polylines,
    }
}

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

/// SVG rendering: one `<path>` per polyline, viewBox equal to the grid
/// window with the imaginary axis pointing up.
pub fn contours_to_svg(set: &ContourSet, grid: &GridSpec) -> String {
    let w = grid.re_max - grid.re_min;
    let h = grid.im_max - grid.im_min;
    let stroke = w.max(h) / 400.0;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="600" height="{}">"#,
        grid.re_min,
        -grid.im_max,
        w,
        h,
        (600.0 * h / w).round()
    );
    for (k, (level, lines)) in set.levels.iter().zip(&set.polylines).enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        let _ = writeln!(
            s,
            r#"<g data-level="{level}" stroke="{colour}" fill="none" stroke-width="{stroke}">"#
        );
        for line in lines {
            let mut d = String::new();
            for (n, (x, y)) in line.points.iter().enumerate() {
                let _ = write!(d, "{}{} {} ", if n == 0 { 'M' } else { 'L' }, x, -y);
            }
            if line.closed {
                d.push('Z');
            }
            let _ = writeln!(s, r#"<path d="{}"/>"#, d.trim_end());
        }
        let _ = writeln!(s, "</g>");
    }
    s.push_str("</svg>\n");
    s
}
