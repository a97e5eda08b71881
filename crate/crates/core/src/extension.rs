//! Extending a sub-quasi-copula, given on a product of finite unions of
//! closed intervals, to upper- and lower-bound quasi-copulas.
//!
//! Each axis set decomposes into its maximal nontrivial intervals and the
//! closures of the complementary gaps; together these tile `[0, 1]` and
//! induce a tiling of the cube by rectangles whose vertices all carry data.
//! The extension fills faces by increasing dimension: segments through a gap
//! take the explicit two-point envelope, higher faces take the local patch
//! bound of their already-filled boundary, and faces inside the domain keep
//! their given values. Running every fill with the upper (resp. lower)
//! choice yields the pointwise largest (resp. smallest) extension.

use serde::{Deserialize, Serialize};

use crate::axioms;
use crate::error::{Error, Result};
use crate::grid::{for_each_index, GridFunction, Mesh};
use crate::report::{CheckReport, Violation, ViolationKind};

/// Which of the two extreme extensions (or bounds) to produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundSide {
    Upper,
    Lower,
}

/// A finite union of disjoint closed intervals in `[0, 1]` covering 0 and 1.
/// Points enter as degenerate intervals. Touching intervals are merged on
/// construction so the stored intervals are the maximal ones.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisDomain {
    intervals: Vec<(f64, f64)>,
}

impl AxisDomain {
    pub fn new(mut intervals: Vec<(f64, f64)>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::InvalidDomain("axis domain is empty".into()));
        }
        for &(lo, hi) in &intervals {
            if !(0.0 <= lo && lo <= hi && hi <= 1.0) {
                return Err(Error::InvalidDomain(format!(
                    "interval [{lo}, {hi}] is not a closed interval in [0,1]"
                )));
            }
        }
        intervals.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(intervals.len());
        for (lo, hi) in intervals {
            match merged.last_mut() {
                Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
                _ => merged.push((lo, hi)),
            }
        }
        if merged[0].0 != 0.0 || merged[merged.len() - 1].1 != 1.0 {
            return Err(Error::InvalidDomain(
                "axis domain must contain 0 and 1".into(),
            ));
        }
        Ok(AxisDomain { intervals: merged })
    }

    pub fn full() -> Self {
        AxisDomain {
            intervals: vec![(0.0, 1.0)],
        }
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|&(lo, hi)| lo <= x && x <= hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntervalKind {
    /// A maximal nontrivial interval of the axis domain.
    Domain,
    /// The closure of a complementary gap.
    Gap,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TInterval {
    pub lo: f64,
    pub hi: f64,
    pub kind: IntervalKind,
}

/// The interval families of one axis: maximal domain intervals, gap
/// closures, and their ordered union, which tiles `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisDecomposition {
    pub i_family: Vec<(f64, f64)>,
    pub o_family: Vec<(f64, f64)>,
    pub t_family: Vec<TInterval>,
}

pub fn axis_decompose(domain: &AxisDomain) -> AxisDecomposition {
    let mut i_family = Vec::new();
    let mut o_family = Vec::new();
    let mut t_family = Vec::new();
    let intervals = &domain.intervals;
    for (pos, &(lo, hi)) in intervals.iter().enumerate() {
        if hi > lo {
            i_family.push((lo, hi));
            t_family.push(TInterval {
                lo,
                hi,
                kind: IntervalKind::Domain,
            });
        }
        if pos + 1 < intervals.len() {
            let gap = (hi, intervals[pos + 1].0);
            o_family.push(gap);
            t_family.push(TInterval {
                lo: gap.0,
                hi: gap.1,
                kind: IntervalKind::Gap,
            });
        }
    }
    AxisDecomposition {
        i_family,
        o_family,
        t_family,
    }
}

/// Product of axis domains with their decompositions.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductDomain {
    axes: Vec<AxisDomain>,
    decompositions: Vec<AxisDecomposition>,
}

impl ProductDomain {
    pub fn new(axes: Vec<AxisDomain>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::InvalidDomain("need at least one axis".into()));
        }
        let decompositions = axes.iter().map(axis_decompose).collect();
        Ok(ProductDomain {
            axes,
            decompositions,
        })
    }

    pub fn ndim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[AxisDomain] {
        &self.axes
    }

    pub fn decompositions(&self) -> &[AxisDecomposition] {
        &self.decompositions
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.ndim() && x.iter().zip(&self.axes).all(|(&c, d)| d.contains(c))
    }
}

/// On-disk form of a product domain:
/// `{"n": 3, "axes": [[[0, 0.25], [0.75, 1]], ...]}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct DomainFile {
    pub n: usize,
    pub axes: Vec<Vec<[f64; 2]>>,
}

impl DomainFile {
    pub fn into_domain(self) -> Result<ProductDomain> {
        if self.n == 0 || self.axes.len() != self.n {
            return Err(Error::Format(format!(
                "domain file: n = {} but {} axes given",
                self.n,
                self.axes.len()
            )));
        }
        let axes = self
            .axes
            .into_iter()
            .map(|iv| AxisDomain::new(iv.into_iter().map(|p| (p[0], p[1])).collect()))
            .collect::<Result<_>>()?;
        ProductDomain::new(axes)
    }
}

/// A sub-quasi-copula: tabulated values on a mesh containing every interval
/// endpoint of the domain, defined (mask true) exactly at nodes inside the
/// domain.
#[derive(Debug, Clone)]
pub struct SubQuasiCopula {
    domain: ProductDomain,
    values: GridFunction,
}

impl SubQuasiCopula {
    pub fn new(domain: ProductDomain, values: GridFunction) -> Result<Self> {
        let n = domain.ndim();
        if values.ndim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: values.ndim(),
            });
        }
        let mesh = values.mesh();
        for (k, dec) in domain.decompositions.iter().enumerate() {
            for t in &dec.t_family {
                for endpoint in [t.lo, t.hi] {
                    if mesh.axis(k).binary_search_by(|c| c.partial_cmp(&endpoint).unwrap()).is_err()
                    {
                        return Err(Error::InvalidDomain(format!(
                            "mesh axis {k} is missing the interval endpoint {endpoint}"
                        )));
                    }
                }
            }
        }
        for flat in 0..mesh.node_count() {
            let x = mesh.node_coords(&mesh.multi_index(flat));
            let inside = domain.contains(&x);
            if values.is_defined_flat(flat) != inside {
                return Err(Error::InvalidGrid(format!(
                    "mask at node {:?} must be {} (node {} the domain)",
                    mesh.multi_index(flat),
                    inside,
                    if inside { "inside" } else { "outside" }
                )));
            }
        }
        Ok(SubQuasiCopula { domain, values })
    }

    /// Tabulate `f` on the default mesh: every interval of every axis split
    /// into `refine` equal parts.
    pub fn tabulate<F>(domain: ProductDomain, refine: usize, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        let mesh = extension_mesh(&domain, refine, None)?;
        Self::tabulate_on_mesh(domain, mesh, f)
    }

    /// Tabulate `f` at the in-domain nodes of an explicit mesh.
    pub fn tabulate_on_mesh<F>(domain: ProductDomain, mesh: Mesh, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        let mut values = vec![0.0; mesh.node_count()];
        let mut mask = vec![false; mesh.node_count()];
        for flat in 0..mesh.node_count() {
            let x = mesh.node_coords(&mesh.multi_index(flat));
            if domain.contains(&x) {
                values[flat] = f(&x);
                mask[flat] = true;
            }
        }
        SubQuasiCopula::new(domain, GridFunction::new_masked(mesh, values, mask)?)
    }

    pub fn domain(&self) -> &ProductDomain {
        &self.domain
    }

    pub fn values(&self) -> &GridFunction {
        &self.values
    }
}

/// Mesh for tabulating a sub-quasi-copula: the interval endpoints of every
/// axis plus `refine - 1` equally spaced interior nodes per interval,
/// optionally merged with extra per-axis nodes inside `[0, 1]`.
pub fn extension_mesh(
    domain: &ProductDomain,
    refine: usize,
    extra_axes: Option<&[Vec<f64>]>,
) -> Result<Mesh> {
    build_mesh(domain, refine, extra_axes, true)
}

fn build_mesh(
    domain: &ProductDomain,
    refine: usize,
    extra_axes: Option<&[Vec<f64>]>,
    refine_domain_intervals: bool,
) -> Result<Mesh> {
    if refine < 1 {
        return Err(Error::Precondition("refine must be at least 1".into()));
    }
    let mut axes = Vec::with_capacity(domain.ndim());
    for (k, dec) in domain.decompositions.iter().enumerate() {
        let mut axis: Vec<f64> = Vec::new();
        for t in &dec.t_family {
            let parts = if refine_domain_intervals || t.kind == IntervalKind::Gap {
                refine
            } else {
                1
            };
            for i in 0..=parts {
                axis.push(t.lo + (t.hi - t.lo) * i as f64 / parts as f64);
            }
        }
        if let Some(extra) = extra_axes {
            axis.extend_from_slice(&extra[k]);
        }
        axis.sort_by(|a, b| a.partial_cmp(b).unwrap());
        axis.dedup();
        axes.push(axis);
    }
    Mesh::new(axes)
}

/// Exact envelope of the monotone 1-Lipschitz completions of a segment with
/// endpoint values `alpha` at `a` and `beta` at `b`:
/// upper `min(alpha + x - a, beta)`, lower `max(alpha, beta + x - b)`.
pub fn segment_bounds(
    alpha: f64,
    beta: f64,
    a: f64,
    b: f64,
    x: f64,
    side: BoundSide,
) -> Result<f64> {
    const EPS: f64 = 1e-12;
    if !(a < b) {
        return Err(Error::Precondition(format!(
            "segment [{a}, {b}] is not nondegenerate"
        )));
    }
    if !(a <= x && x <= b) {
        return Err(Error::Precondition(format!("x = {x} outside [{a}, {b}]")));
    }
    let rise = beta - alpha;
    if rise < -EPS || rise > (b - a) + EPS {
        return Err(Error::Precondition(format!(
            "endpoint values (alpha, beta) = ({alpha}, {beta}) not admissible on [{a}, {b}]"
        )));
    }
    Ok(match side {
        BoundSide::Upper => (alpha + (x - a)).min(beta),
        BoundSide::Lower => alpha.max(beta + (x - b)),
    })
}

/// Node index ranges of one axis' intervals on a concrete mesh.
#[derive(Debug, Clone)]
struct AxisLayout {
    segments: Vec<SegmentRange>,
    /// Sorted unique node indices of the interval endpoints.
    endpoints: Vec<usize>,
}

#[derive(Debug, Clone)]
struct SegmentRange {
    lo: usize,
    hi: usize,
    lo_coord: f64,
    hi_coord: f64,
}

fn build_layouts(domain: &ProductDomain, mesh: &Mesh) -> Result<Vec<AxisLayout>> {
    let mut layouts = Vec::with_capacity(domain.ndim());
    for (k, dec) in domain.decompositions.iter().enumerate() {
        let axis = mesh.axis(k);
        let find = |coord: f64| -> Result<usize> {
            axis.binary_search_by(|c| c.partial_cmp(&coord).unwrap())
                .map_err(|_| {
                    Error::InvalidDomain(format!(
                        "mesh axis {k} is missing the interval endpoint {coord}"
                    ))
                })
        };
        let mut segments = Vec::with_capacity(dec.t_family.len());
        let mut endpoints = Vec::new();
        for t in &dec.t_family {
            let lo = find(t.lo)?;
            let hi = find(t.hi)?;
            endpoints.push(lo);
            endpoints.push(hi);
            segments.push(SegmentRange {
                lo,
                hi,
                lo_coord: t.lo,
                hi_coord: t.hi,
            });
        }
        endpoints.sort_unstable();
        endpoints.dedup();
        layouts.push(AxisLayout {
            segments,
            endpoints,
        });
    }
    Ok(layouts)
}

fn subsets_of_size(n: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(d);
    fn rec(start: usize, n: usize, d: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == d {
            out.push(current.clone());
            return;
        }
        for k in start..n {
            current.push(k);
            rec(k + 1, n, d, current, out);
            current.pop();
        }
    }
    rec(0, n, d, &mut current, &mut out);
    out
}

/// Extend a sub-quasi-copula to a full grid function, `refine` parts per gap
/// interval. Upper mode yields the nodewise-largest quasi-copula extension
/// representable on the mesh, lower mode the smallest; given values are
/// carried over bitwise.
pub fn extend_sub_quasi_copula(
    sq: &SubQuasiCopula,
    side: BoundSide,
    refine: usize,
) -> Result<GridFunction> {
    extend_impl(sq, side, refine, false)
}

/// Same as [`extend_sub_quasi_copula`] but enumerating the faces of each
/// dimension in reverse order; the result must be bit-identical.
#[doc(hidden)]
pub fn extend_sub_quasi_copula_permuted(
    sq: &SubQuasiCopula,
    side: BoundSide,
    refine: usize,
) -> Result<GridFunction> {
    extend_impl(sq, side, refine, true)
}

fn extend_impl(
    sq: &SubQuasiCopula,
    side: BoundSide,
    refine: usize,
    reverse: bool,
) -> Result<GridFunction> {
    let axiom_report = axioms::is_quasi_copula(sq.values(), axioms::DEFAULT_TOL);
    if !axiom_report.passed {
        return Err(Error::AxiomViolation(axiom_report));
    }

    // gap intervals are refined here; resolution inside the domain intervals
    // is the input grid's, since fresh in-domain nodes would carry no data
    let mesh = build_mesh(&sq.domain, refine, Some(sq.values().mesh().axes()), false)?;
    let n = mesh.ndim();
    let layouts = build_layouts(&sq.domain, &mesh)?;

    // carry the given values onto the (possibly refined) mesh
    let old_mesh = sq.values().mesh();
    let index_maps: Vec<Vec<Option<usize>>> = (0..n)
        .map(|k| {
            mesh.axis(k)
                .iter()
                .map(|c| {
                    old_mesh
                        .axis(k)
                        .binary_search_by(|o| o.partial_cmp(c).unwrap())
                        .ok()
                })
                .collect()
        })
        .collect();
    let mut values = vec![f64::NAN; mesh.node_count()];
    let mut defined = vec![false; mesh.node_count()];
    for flat in 0..mesh.node_count() {
        let idx = mesh.multi_index(flat);
        let old_idx: Option<Vec<usize>> = idx
            .iter()
            .enumerate()
            .map(|(k, &i)| index_maps[k][i])
            .collect();
        if let Some(old_idx) = old_idx {
            if sq.values().is_defined(&old_idx) {
                values[flat] = sq.values().value(&old_idx);
                defined[flat] = true;
            }
        }
    }

    let strides = mesh.strides();
    for d in 1..=n {
        let mut faces: Vec<(Vec<usize>, Vec<usize>, Vec<usize>)> = Vec::new();
        for axes in subsets_of_size(n, d) {
            let seg_counts: Vec<usize> =
                axes.iter().map(|&k| layouts[k].segments.len()).collect();
            let others: Vec<usize> = (0..n).filter(|k| !axes.contains(k)).collect();
            let end_counts: Vec<usize> = others
                .iter()
                .map(|&j| layouts[j].endpoints.len())
                .collect();
            for_each_index(&seg_counts, |segs| {
                for_each_index(&end_counts, |ends| {
                    faces.push((axes.clone(), segs.to_vec(), ends.to_vec()));
                });
            });
        }
        if reverse {
            faces.reverse();
        }
        for (axes, segs, ends) in faces {
            let others: Vec<usize> = (0..n).filter(|k| !axes.contains(k)).collect();
            fill_face(
                &mesh, &layouts, &strides, &mut values, &defined, side, &axes, &segs, &others,
                &ends,
            );
        }
    }

    if let Some(flat) = values.iter().position(|v| v.is_nan()) {
        return Err(Error::Internal(format!(
            "node {:?} left unfilled",
            mesh.multi_index(flat)
        )));
    }
    let result = GridFunction::new(mesh, values)?;

    let compat = check_rectangle_compatibility(&result, &sq.domain, axioms::DEFAULT_TOL)?;
    if !compat.passed {
        return Err(Error::Internal(format!(
            "extension violates its own compatibility conditions: {compat}"
        )));
    }
    Ok(result)
}

#[allow(clippy::too_many_arguments)]
fn fill_face(
    mesh: &Mesh,
    layouts: &[AxisLayout],
    strides: &[usize],
    values: &mut [f64],
    defined: &[bool],
    side: BoundSide,
    axes: &[usize],
    segs: &[usize],
    others: &[usize],
    ends: &[usize],
) {
    let n = mesh.ndim();
    let ranges: Vec<&SegmentRange> = axes
        .iter()
        .zip(segs)
        .map(|(&k, &s)| &layouts[k].segments[s])
        .collect();
    // interior node counts per face axis
    let counts: Vec<usize> = ranges.iter().map(|r| r.hi.saturating_sub(r.lo + 1)).collect();
    if counts.contains(&0) {
        return;
    }
    let mut idx = vec![0usize; n];
    for (&j, &e) in others.iter().zip(ends) {
        idx[j] = layouts[j].endpoints[e];
    }
    for_each_index(&counts, |offsets| {
        for ((&k, r), &o) in axes.iter().zip(&ranges).zip(offsets) {
            idx[k] = r.lo + 1 + o;
        }
        let flat: usize = idx.iter().zip(strides).map(|(i, s)| i * s).sum();
        if defined[flat] {
            return;
        }
        let mut best = match side {
            BoundSide::Upper => f64::INFINITY,
            BoundSide::Lower => f64::NEG_INFINITY,
        };
        for (&k, r) in axes.iter().zip(&ranges) {
            let coord = mesh.axis(k)[idx[k]];
            let at_lo = values[flat - (idx[k] - r.lo) * strides[k]];
            let at_hi = values[flat + (r.hi - idx[k]) * strides[k]];
            debug_assert!(!at_lo.is_nan() && !at_hi.is_nan());
            best = match side {
                BoundSide::Upper => best.min(at_hi).min(at_lo + (coord - r.lo_coord)),
                BoundSide::Lower => best.max(at_lo).max(at_hi + (coord - r.hi_coord)),
            };
        }
        values[flat] = best;
    });
}

/// Cross-rectangle compatibility of (possibly partially assigned) values:
/// within every rectangle of the tiling the restriction must be increasing
/// and 1-Lipschitz with opposite faces no further apart than the rectangle
/// width, and across any two rectangles separated along one axis the values
/// must grow by at least 0 and at most the gap width. Undefined nodes are
/// skipped.
pub fn check_rectangle_compatibility(
    values: &GridFunction,
    domain: &ProductDomain,
    tol: f64,
) -> Result<CheckReport> {
    let mesh = values.mesh();
    if mesh.ndim() != domain.ndim() {
        return Err(Error::DimensionMismatch {
            expected: domain.ndim(),
            got: mesh.ndim(),
        });
    }
    let layouts = build_layouts(domain, mesh)?;
    let n = mesh.ndim();
    let strides = mesh.strides();
    let mut report = CheckReport::new("rectangle compatibility");

    // within each rectangle: monotone + 1-Lipschitz + opposite-face sandwich
    let seg_counts: Vec<usize> = layouts.iter().map(|l| l.segments.len()).collect();
    for_each_index(&seg_counts, |rect| {
        let ranges: Vec<&SegmentRange> = rect
            .iter()
            .enumerate()
            .map(|(k, &s)| &layouts[k].segments[s])
            .collect();
        let slab: Vec<usize> = ranges.iter().map(|r| r.hi - r.lo + 1).collect();
        for axis in 0..n {
            // consecutive defined pairs along `axis` within the slab
            let mut line_shape = slab.clone();
            line_shape[axis] = 1;
            for_each_index(&line_shape, |off| {
                let mut idx: Vec<usize> =
                    off.iter().zip(&ranges).map(|(o, r)| r.lo + o).collect();
                let mut prev: Option<(usize, f64)> = None;
                for i in ranges[axis].lo..=ranges[axis].hi {
                    idx[axis] = i;
                    let flat: usize = idx.iter().zip(&strides).map(|(i, s)| i * s).sum();
                    if !values.is_defined_flat(flat) {
                        continue;
                    }
                    let v = values.value_flat(flat);
                    if let Some((pi, pv)) = prev {
                        let spacing = mesh.axis(axis)[i] - mesh.axis(axis)[pi];
                        if v - pv < -tol {
                            report.record(Violation {
                                kind: ViolationKind::Increasing,
                                axis: Some(axis),
                                node_index: idx.clone(),
                                magnitude: pv - v - tol,
                            });
                        }
                        if v - pv > spacing + tol {
                            report.record(Violation {
                                kind: ViolationKind::Lipschitz,
                                axis: Some(axis),
                                node_index: idx.clone(),
                                magnitude: v - pv - spacing - tol,
                            });
                        }
                    }
                    prev = Some((i, v));
                }
            });
            // opposite faces of the rectangle
            let width = ranges[axis].hi_coord - ranges[axis].lo_coord;
            let mut face_shape = slab.clone();
            face_shape[axis] = 1;
            for_each_index(&face_shape, |off| {
                let mut idx: Vec<usize> =
                    off.iter().zip(&ranges).map(|(o, r)| r.lo + o).collect();
                idx[axis] = ranges[axis].lo;
                let lo_flat: usize = idx.iter().zip(&strides).map(|(i, s)| i * s).sum();
                idx[axis] = ranges[axis].hi;
                let hi_flat: usize = idx.iter().zip(&strides).map(|(i, s)| i * s).sum();
                if !values.is_defined_flat(lo_flat) || !values.is_defined_flat(hi_flat) {
                    return;
                }
                let d = values.value_flat(hi_flat) - values.value_flat(lo_flat);
                let excess = (-d).max(d - width);
                if excess > tol {
                    report.record(Violation {
                        kind: ViolationKind::FaceBound,
                        axis: Some(axis),
                        node_index: idx.clone(),
                        magnitude: excess - tol,
                    });
                }
            });
        }
    });

    // across gaps: for segments s before s' on axis j, values on the
    // upper face of s and the lower face of s' differ by 0..=gap width
    for j in 0..n {
        let segs = &layouts[j].segments;
        let mut slice_shape = mesh.shape();
        slice_shape[j] = 1;
        for s in 0..segs.len() {
            for s2 in (s + 1)..segs.len() {
                let from = segs[s].hi;
                let to = segs[s2].lo;
                let gap = segs[s2].lo_coord - segs[s].hi_coord;
                for_each_index(&slice_shape, |base| {
                    let mut idx = base.to_vec();
                    idx[j] = from;
                    let from_flat: usize = idx.iter().zip(&strides).map(|(i, s)| i * s).sum();
                    idx[j] = to;
                    let to_flat: usize = idx.iter().zip(&strides).map(|(i, s)| i * s).sum();
                    if !values.is_defined_flat(from_flat) || !values.is_defined_flat(to_flat) {
                        return;
                    }
                    let d = values.value_flat(to_flat) - values.value_flat(from_flat);
                    if d < -tol {
                        report.record(Violation {
                            kind: ViolationKind::GapIncreasing,
                            axis: Some(j),
                            node_index: idx.clone(),
                            magnitude: -d - tol,
                        });
                    }
                    if d > gap + tol {
                        report.record(Violation {
                            kind: ViolationKind::GapLipschitz,
                            axis: Some(j),
                            node_index: idx.clone(),
                            magnitude: d - gap - tol,
                        });
                    }
                });
            }
        }
    }
    Ok(report)
}
