//! Planar Delone sets and their Voronoi tilings, built cell by cell through
//! half-plane intersection. Covers packing/covering radius estimation, the
//! locality of cells (a cell is already determined by the sites within
//! twice the covering radius), and decorated tilings whose cells carry
//! their generating site.

use crate::scalar::Real;
use rand::Rng;
use serde::Serialize;
use std::collections::HashMap;
use thiserror::Error;

/// Vertex-merge tolerance for near-duplicate and collinear points
/// (degenerate cocircular configurations, e.g. exact lattices).
pub const VERTEX_MERGE_EPS: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("points {a} and {b} coincide")]
    DuplicatePoint { a: usize, b: usize },
    #[error("point {index} lies outside the domain")]
    OutsideDomain { index: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Point2<T: Real> {
    pub x: T,
    pub y: T,
}

impl<T: Real> Point2<T> {
    pub fn new(x: T, y: T) -> Self {
        Point2 { x, y }
    }

    pub fn dist(&self, other: &Point2<T>) -> T {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        (dx * dx + dy * dy).sqrt()
    }

    pub fn dist_sq(&self, other: &Point2<T>) -> T {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }
}

/// Axis-aligned rectangular domain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Rect<T: Real> {
    pub min: Point2<T>,
    pub max: Point2<T>,
}

impl<T: Real> Rect<T> {
    pub fn new(min: Point2<T>, max: Point2<T>) -> Result<Self, GeometryError> {
        if !(min.x < max.x && min.y < max.y) {
            return Err(GeometryError::InvalidParameter(
                "degenerate domain rectangle".into(),
            ));
        }
        Ok(Rect { min, max })
    }

    pub fn contains(&self, p: &Point2<T>) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    /// Distance from p to the domain boundary (p assumed inside).
    pub fn boundary_distance(&self, p: &Point2<T>) -> T {
        (p.x - self.min.x)
            .min(self.max.x - p.x)
            .min(p.y - self.min.y)
            .min(self.max.y - p.y)
    }

    pub fn corners(&self) -> [Point2<T>; 4] {
        [
            Point2::new(self.min.x, self.min.y),
            Point2::new(self.max.x, self.min.y),
            Point2::new(self.max.x, self.max.y),
            Point2::new(self.min.x, self.max.y),
        ]
    }
}

/// A finite planar point set inside a rectangular domain; pairwise distinct.
#[derive(Clone, Debug, Serialize)]
pub struct PointSet2D<T: Real> {
    points: Vec<Point2<T>>,
    domain: Rect<T>,
}

impl<T: Real> PointSet2D<T> {
    pub fn new(points: Vec<Point2<T>>, domain: Rect<T>) -> Result<Self, GeometryError> {
        for (i, p) in points.iter().enumerate() {
            if !domain.contains(p) {
                return Err(GeometryError::OutsideDomain { index: i });
            }
        }
        // exact-duplicate scan via a coarse grid
        let mut seen: HashMap<(u64, u64), Vec<usize>> = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            let key = (
                p.x.to_f64().unwrap_or(f64::NAN).to_bits(),
                p.y.to_f64().unwrap_or(f64::NAN).to_bits(),
            );
            let bucket = seen.entry(key).or_default();
            if let Some(&j) = bucket.first() {
                if points[j].x == p.x && points[j].y == p.y {
                    return Err(GeometryError::DuplicatePoint { a: j, b: i });
                }
            }
            bucket.push(i);
        }
        Ok(PointSet2D { points, domain })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &Point2<T> {
        &self.points[i]
    }

    pub fn points(&self) -> &[Point2<T>] {
        &self.points
    }

    pub fn domain(&self) -> &Rect<T> {
        &self.domain
    }

    /// Parse CSV lines "x,y" (header line "x,y" optional).
    pub fn from_csv(text: &str, domain: Rect<T>) -> Result<Self, GeometryError> {
        let mut points = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() || (lineno == 0 && trimmed.eq_ignore_ascii_case("x,y")) {
                continue;
            }
            let (xs, ys) = trimmed.split_once(',').ok_or_else(|| {
                GeometryError::Parse(format!("line {}: expected 'x,y'", lineno + 1))
            })?;
            let x: f64 = xs.trim().parse().map_err(|e| {
                GeometryError::Parse(format!("line {}: bad x: {e}", lineno + 1))
            })?;
            let y: f64 = ys.trim().parse().map_err(|e| {
                GeometryError::Parse(format!("line {}: bad y: {e}", lineno + 1))
            })?;
            points.push(Point2::new(T::of(x), T::of(y)));
        }
        PointSet2D::new(points, domain)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y\n");
        for p in &self.points {
            out.push_str(&format!(
                "{:.16e},{:.16e}\n",
                p.x.to_f64().unwrap_or(f64::NAN),
                p.y.to_f64().unwrap_or(f64::NAN)
            ));
        }
        out
    }
}

/// Packing radius (half the minimal pairwise distance) and covering radius
/// (largest distance from an interior domain location to its nearest site).
#[derive(Clone, Copy, Debug, Serialize)]
pub struct DeloneParams<T: Real> {
    /// r0: every ball of this radius holds at most one site.
    pub packing: T,
    /// r1: every interior ball of this radius holds at least one site.
    pub covering: T,
}

/// A convex Voronoi cell, decorated with its generating site.
/// `inner_radius` and `outer_radius` are site-centered: the largest ball
/// around the site inside the cell, and the smallest around the site
/// containing it.
#[derive(Clone, Debug, Serialize)]
pub struct VoronoiCell<T: Real> {
    pub site: Point2<T>,
    pub site_index: usize,
    /// Counterclockwise, collinear vertices merged.
    pub vertices: Vec<Point2<T>>,
    pub inner_radius: T,
    pub outer_radius: T,
}

/// Uniform grid over the sites for radius queries.
struct GridIndex<T: Real> {
    cell: T,
    buckets: HashMap<(i64, i64), Vec<usize>>,
}

impl<T: Real> GridIndex<T> {
    fn build(points: &[Point2<T>], cell: T) -> Self {
        let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            buckets.entry(Self::key(p, cell)).or_default().push(i);
        }
        GridIndex { cell, buckets }
    }

    fn key(p: &Point2<T>, cell: T) -> (i64, i64) {
        (
            (p.x / cell).floor().to_i64().unwrap_or(0),
            (p.y / cell).floor().to_i64().unwrap_or(0),
        )
    }

    fn within(&self, points: &[Point2<T>], center: &Point2<T>, radius: T) -> Vec<usize> {
        let r_cells = (radius / self.cell).ceil().to_i64().unwrap_or(0) + 1;
        let (cx, cy) = Self::key(center, self.cell);
        let mut out = Vec::new();
        let rr = radius * radius;
        for gx in cx - r_cells..=cx + r_cells {
            for gy in cy - r_cells..=cy + r_cells {
                if let Some(bucket) = self.buckets.get(&(gx, gy)) {
                    for &i in bucket {
                        if points[i].dist_sq(center) <= rr {
                            out.push(i);
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// Clip a convex polygon by the half-plane { p : n . p <= c }.
fn clip_halfplane<T: Real>(
    poly: &[Point2<T>],
    nx: T,
    ny: T,
    c: T,
) -> Vec<Point2<T>> {
    let mut out = Vec::with_capacity(poly.len() + 1);
    let m = poly.len();
    for i in 0..m {
        let p1 = poly[i];
        let p2 = poly[(i + 1) % m];
        let d1 = nx * p1.x + ny * p1.y - c;
        let d2 = nx * p2.x + ny * p2.y - c;
        let in1 = d1 <= T::zero();
        let in2 = d2 <= T::zero();
        if in1 {
            out.push(p1);
        }
        if in1 != in2 {
            let t = d1 / (d1 - d2);
            out.push(Point2::new(p1.x + t * (p2.x - p1.x), p1.y + t * (p2.y - p1.y)));
        }
    }
    out
}

/// Merge near-duplicate consecutive vertices and drop collinear ones.
fn tidy_polygon<T: Real>(poly: Vec<Point2<T>>) -> Vec<Point2<T>> {
    let eps = T::of(VERTEX_MERGE_EPS);
    let mut merged: Vec<Point2<T>> = Vec::with_capacity(poly.len());
    for p in poly {
        if let Some(last) = merged.last() {
            if last.dist(&p) <= eps {
                continue;
            }
        }
        merged.push(p);
    }
    while merged.len() > 1 && merged[0].dist(merged.last().unwrap()) <= eps {
        merged.pop();
    }
    if merged.len() < 3 {
        return merged;
    }
    let mut out = Vec::with_capacity(merged.len());
    let m = merged.len();
    for i in 0..m {
        let a = merged[(i + m - 1) % m];
        let b = merged[i];
        let c = merged[(i + 1) % m];
        let cross = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
        let scale = a.dist(&b).max(b.dist(&c)).max(T::one());
        if cross.abs() > eps * scale {
            out.push(b);
        }
    }
    if out.len() >= 3 {
        out
    } else {
        merged
    }
}

pub fn polygon_area<T: Real>(poly: &[Point2<T>]) -> T {
    let m = poly.len();
    if m < 3 {
        return T::zero();
    }
    let mut s = T::zero();
    for i in 0..m {
        let a = poly[i];
        let b = poly[(i + 1) % m];
        s = s + (a.x * b.y - b.x * a.y);
    }
    (s / T::of(2.0)).abs()
}

/// Area of the intersection of two convex polygons.
pub fn convex_intersection_area<T: Real>(a: &[Point2<T>], b: &[Point2<T>]) -> T {
    let mut poly = a.to_vec();
    let m = b.len();
    // clip a by each edge of b (b counterclockwise: interior is left of edges)
    for i in 0..m {
        let p = b[i];
        let q = b[(i + 1) % m];
        // half-plane: cross(q - p, x - p) >= 0  <=>  n . x <= c with
        // n = (q.y - p.y, -(q.x - p.x)), c = n . p
        let nx = q.y - p.y;
        let ny = p.x - q.x;
        let c = nx * p.x + ny * p.y;
        poly = clip_halfplane(&poly, nx, ny, c);
        if poly.is_empty() {
            return T::zero();
        }
    }
    polygon_area(&poly)
}

fn cell_radii<T: Real>(site: &Point2<T>, vertices: &[Point2<T>]) -> (T, T) {
    let m = vertices.len();
    let mut inner = T::infinity();
    let mut outer = T::zero();
    for i in 0..m {
        let a = vertices[i];
        let b = vertices[(i + 1) % m];
        outer = outer.max(site.dist(&a));
        inner = inner.min(point_segment_distance(site, &a, &b));
    }
    (inner, outer)
}

fn point_segment_distance<T: Real>(p: &Point2<T>, a: &Point2<T>, b: &Point2<T>) -> T {
    let abx = b.x - a.x;
    let aby = b.y - a.y;
    let len_sq = abx * abx + aby * aby;
    if len_sq == T::zero() {
        return p.dist(a);
    }
    let t = ((p.x - a.x) * abx + (p.y - a.y) * aby) / len_sq;
    let t = t.max(T::zero()).min(T::one());
    let proj = Point2::new(a.x + t * abx, a.y + t * aby);
    p.dist(&proj)
}

fn build_cell<T: Real>(
    ps: &PointSet2D<T>,
    site_index: usize,
    neighbor_indices: &[usize],
) -> VoronoiCell<T> {
    let site = *ps.point(site_index);
    let mut poly: Vec<Point2<T>> = ps.domain().corners().to_vec();
    for &z_idx in neighbor_indices {
        if z_idx == site_index {
            continue;
        }
        let z = ps.point(z_idx);
        // keep the side of the bisector closer to the site:
        // (z - s) . p <= (|z|^2 - |s|^2) / 2
        let nx = z.x - site.x;
        let ny = z.y - site.y;
        let c = (z.x * z.x + z.y * z.y - site.x * site.x - site.y * site.y) / T::of(2.0);
        poly = clip_halfplane(&poly, nx, ny, c);
        if poly.is_empty() {
            break;
        }
    }
    let vertices = tidy_polygon(poly);
    let (inner_radius, outer_radius) = if vertices.len() >= 3 {
        cell_radii(&site, &vertices)
    } else {
        (T::zero(), T::zero())
    };
    VoronoiCell {
        site,
        site_index,
        vertices,
        inner_radius,
        outer_radius,
    }
}

/// The Voronoi cell of one site, cut by the bisectors of all other sites,
/// or only those within `cutoff` of the site when given; always clipped to
/// the domain rectangle.
pub fn voronoi_cell<T: Real>(
    ps: &PointSet2D<T>,
    site_index: usize,
    cutoff: Option<T>,
) -> Result<VoronoiCell<T>, GeometryError> {
    if site_index >= ps.len() {
        return Err(GeometryError::InvalidParameter(format!(
            "site index {site_index} out of range"
        )));
    }
    let neighbors: Vec<usize> = match cutoff {
        None => (0..ps.len()).collect(),
        Some(r) => {
            let grid = GridIndex::build(ps.points(), grid_cell_size(ps));
            grid.within(ps.points(), ps.point(site_index), r)
        }
    };
    Ok(build_cell(ps, site_index, &neighbors))
}

fn grid_cell_size<T: Real>(ps: &PointSet2D<T>) -> T {
    let d = ps.domain();
    let area = (d.max.x - d.min.x) * (d.max.y - d.min.y);
    (area / T::from_usize(ps.len().max(1)).expect("fits")).sqrt().max(T::of(1e-6))
}

/// All Voronoi cells, each decorated with its site. Every cell is built
/// from a self-certifying neighbor radius: sites beyond twice the cell's
/// own outer radius cannot cut it, so the expansion stops as soon as the
/// queried radius dominates the current polygon.
pub fn voronoi_tiling<T: Real>(ps: &PointSet2D<T>) -> Result<Vec<VoronoiCell<T>>, GeometryError> {
    if ps.len() < 3 {
        return Err(GeometryError::TooFewPoints {
            needed: 3,
            got: ps.len(),
        });
    }
    let grid = GridIndex::build(ps.points(), grid_cell_size(ps));
    let mut cells = Vec::with_capacity(ps.len());
    for i in 0..ps.len() {
        let site = ps.point(i);
        let mut radius = grid_cell_size(ps) * T::of(4.0);
        let cell = loop {
            let neighbors = grid.within(ps.points(), site, radius);
            let cell = build_cell(ps, i, &neighbors);
            let all = neighbors.len() == ps.len();
            if all || cell.outer_radius * T::of(2.0) <= radius {
                break cell;
            }
            radius = radius * T::of(2.0);
        };
        cells.push(cell);
    }
    Ok(cells)
}

/// Packing and covering radii. The covering radius is taken over cells
/// whose site keeps a safety margin (twice the raw maximal cell radius)
/// from the domain boundary, so the finite window does not inflate it;
/// within that margin the farthest point from any site is a Voronoi vertex.
pub fn delone_params<T: Real>(ps: &PointSet2D<T>) -> Result<DeloneParams<T>, GeometryError> {
    if ps.len() < 2 {
        return Err(GeometryError::TooFewPoints {
            needed: 2,
            got: ps.len(),
        });
    }
    // packing radius: half the minimal pairwise distance, grid-accelerated
    let grid = GridIndex::build(ps.points(), grid_cell_size(ps));
    let mut min_dist_sq = T::infinity();
    for (i, p) in ps.points().iter().enumerate() {
        let mut radius = grid_cell_size(ps) * T::of(2.0);
        loop {
            let neighbors = grid.within(ps.points(), p, radius);
            if neighbors.iter().any(|&j| j != i) || neighbors.len() == ps.len() {
                for &j in &neighbors {
                    if j != i {
                        min_dist_sq = min_dist_sq.min(p.dist_sq(ps.point(j)));
                    }
                }
                break;
            }
            radius = radius * T::of(2.0);
        }
    }
    let packing = min_dist_sq.sqrt() / T::of(2.0);
    if ps.len() < 3 {
        return Ok(DeloneParams {
            packing,
            covering: packing,
        });
    }
    let cells = voronoi_tiling(ps)?;
    let raw_max = cells
        .iter()
        .map(|c| c.outer_radius)
        .fold(T::zero(), T::max);
    let margin = raw_max * T::of(2.0);
    let mut covering = T::zero();
    let mut any_interior = false;
    for c in &cells {
        if ps.domain().boundary_distance(&c.site) >= margin {
            covering = covering.max(c.outer_radius);
            any_interior = true;
        }
    }
    if !any_interior {
        // domain too small for the margin rule; report the raw maximum
        covering = raw_max;
    }
    Ok(DeloneParams { packing, covering })
}

/// Whether two cells have the same vertex set within `tol` (order-free).
pub fn cells_match<T: Real>(a: &VoronoiCell<T>, b: &VoronoiCell<T>, tol: T) -> bool {
    if a.vertices.len() != b.vertices.len() {
        return false;
    }
    a.vertices.iter().all(|v| {
        b.vertices
            .iter()
            .any(|u| v.dist(u) <= tol)
    })
}

/// Compare cells built with a neighbor cutoff against the full
/// construction on `trials` randomly chosen interior sites. With cutoff
/// twice the covering radius the cells must agree; the check returns the
/// conjunction over trials.
pub fn locality_check_with_cutoff<T: Real, R: Rng>(
    ps: &PointSet2D<T>,
    trials: usize,
    cutoff: T,
    rng: &mut R,
) -> Result<bool, GeometryError> {
    let params = delone_params(ps)?;
    let margin = params.covering * T::of(2.0);
    let interior: Vec<usize> = (0..ps.len())
        .filter(|&i| ps.domain().boundary_distance(ps.point(i)) >= margin)
        .collect();
    if interior.is_empty() {
        return Err(GeometryError::InvalidParameter(
            "no interior sites under the covering-radius margin".into(),
        ));
    }
    let tol = T::of(VERTEX_MERGE_EPS);
    for _ in 0..trials {
        let i = interior[rng.gen_range(0..interior.len())];
        let full = voronoi_cell(ps, i, None)?;
        let cut = voronoi_cell(ps, i, Some(cutoff))?;
        if !cells_match(&full, &cut, tol) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Locality at the canonical radius: cells rebuilt from only the sites
/// within twice the covering radius of their site must equal the cells
/// built from every site.
pub fn locality_check<T: Real, R: Rng>(
    ps: &PointSet2D<T>,
    trials: usize,
    rng: &mut R,
) -> Result<bool, GeometryError> {
    let params = delone_params(ps)?;
    locality_check_with_cutoff(ps, trials, params.covering * T::of(2.0), rng)
}
