//! Rectilinear meshes and dense n-dimensional grid functions.
//!
//! Every object in this crate — quasi-copulas, boundary patches, bounds —
//! lives on a [`Mesh`] as a [`GridFunction`]. Values are stored row-major
//! with the last axis fastest, and evaluation between nodes is multilinear,
//! which preserves the two properties the constructions care about:
//! componentwise monotonicity and the 1-Lipschitz condition.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Slack accepted when locating points against mesh endpoints.
const LOCATE_SLACK: f64 = 1e-9;

/// A rectilinear mesh: one sorted coordinate list per axis.
///
/// Axes are strictly increasing and contained in `[0, 1]`. A length-1 axis is
/// permitted so that meshes over degenerate sub-boxes (`a_k = b_k`) remain
/// representable; global meshes spanning the unit cube always have length >= 2
/// per axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    axes: Vec<Vec<f64>>,
}

impl Mesh {
    pub fn new(axes: Vec<Vec<f64>>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::InvalidMesh("mesh needs at least one axis".into()));
        }
        for (k, axis) in axes.iter().enumerate() {
            if axis.is_empty() {
                return Err(Error::InvalidMesh(format!("axis {k} is empty")));
            }
            for w in axis.windows(2) {
                if !(w[1] > w[0]) {
                    return Err(Error::InvalidMesh(format!(
                        "axis {k} is not strictly increasing at {} -> {}",
                        w[0], w[1]
                    )));
                }
            }
            let (lo, hi) = (axis[0], axis[axis.len() - 1]);
            if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) {
                return Err(Error::InvalidMesh(format!(
                    "axis {k} leaves [0,1]: [{lo}, {hi}]"
                )));
            }
        }
        Ok(Mesh { axes })
    }

    /// Uniform mesh over the unit cube with `nodes` nodes per axis.
    pub fn uniform(ndim: usize, nodes: usize) -> Result<Self> {
        Self::uniform_box(&NBox::unit(ndim)?, nodes)
    }

    /// Uniform mesh over an arbitrary box with `nodes` nodes per axis.
    /// Degenerate axes of the box get a single node.
    pub fn uniform_box(bx: &NBox, nodes: usize) -> Result<Self> {
        if nodes < 2 {
            return Err(Error::InvalidMesh("need at least 2 nodes per axis".into()));
        }
        let axes = (0..bx.ndim())
            .map(|k| {
                let (a, b) = (bx.a[k], bx.b[k]);
                if a == b {
                    vec![a]
                } else {
                    (0..nodes)
                        .map(|i| a + (b - a) * i as f64 / (nodes - 1) as f64)
                        .collect()
                }
            })
            .collect();
        Mesh::new(axes)
    }

    pub fn ndim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Vec<f64>] {
        &self.axes
    }

    pub fn axis(&self, k: usize) -> &[f64] {
        &self.axes[k]
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(Vec::len).collect()
    }

    /// Total number of nodes.
    pub fn node_count(&self) -> usize {
        self.axes.iter().map(Vec::len).product()
    }

    /// True when every axis starts at 0 and ends at 1.
    pub fn spans_unit_cube(&self) -> bool {
        self.axes
            .iter()
            .all(|ax| ax[0] == 0.0 && ax[ax.len() - 1] == 1.0)
    }

    /// Bounding box of the mesh.
    pub fn bounding_box(&self) -> NBox {
        NBox {
            a: self.axes.iter().map(|ax| ax[0]).collect(),
            b: self.axes.iter().map(|ax| ax[ax.len() - 1]).collect(),
        }
    }

    /// Row-major strides, last axis fastest.
    pub fn strides(&self) -> Vec<usize> {
        let n = self.ndim();
        let mut strides = vec![1usize; n];
        for k in (0..n.saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.axes[k + 1].len();
        }
        strides
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.ndim());
        let mut flat = 0;
        for (k, &i) in idx.iter().enumerate() {
            debug_assert!(i < self.axes[k].len());
            flat = flat * self.axes[k].len() + i;
        }
        flat
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0usize; self.ndim()];
        for k in (0..self.ndim()).rev() {
            let len = self.axes[k].len();
            idx[k] = flat % len;
            flat /= len;
        }
        idx
    }

    pub fn node_coords(&self, idx: &[usize]) -> Vec<f64> {
        idx.iter()
            .enumerate()
            .map(|(k, &i)| self.axes[k][i])
            .collect()
    }

    /// Mesh of the face obtained by dropping axis `k`.
    pub fn face_mesh(&self, k: usize) -> Result<Mesh> {
        if self.ndim() < 2 {
            return Err(Error::InvalidMesh(
                "cannot take a face of a 1-dimensional mesh".into(),
            ));
        }
        let axes = self
            .axes
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .map(|(_, ax)| ax.clone())
            .collect();
        Mesh::new(axes)
    }

    /// Locate `x` on axis `k`: the cell index `i` with
    /// `axis[i] <= x <= axis[i+1]` and the fractional offset within the cell.
    /// Points within a small slack of the axis ends are clamped.
    pub fn locate(&self, k: usize, x: f64) -> Result<(usize, f64)> {
        let axis = &self.axes[k];
        let (lo, hi) = (axis[0], axis[axis.len() - 1]);
        if x < lo - LOCATE_SLACK || x > hi + LOCATE_SLACK || x.is_nan() {
            return Err(Error::OutOfRange {
                axis: k,
                point: vec![x],
            });
        }
        if axis.len() == 1 {
            return Ok((0, 0.0));
        }
        let x = x.clamp(lo, hi);
        // partition_point returns the first index with axis[i] > x.
        let cell = axis.partition_point(|&t| t <= x).min(axis.len() - 1) - 1;
        let width = axis[cell + 1] - axis[cell];
        Ok((cell, (x - axis[cell]) / width))
    }

    fn same_axes(&self, other: &Mesh) -> bool {
        self.axes == other.axes
    }
}

/// An axis-aligned rectangle `R = prod [a_i, b_i]` inside the unit cube.
#[derive(Debug, Clone, PartialEq)]
pub struct NBox {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl NBox {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.len() != b.len() || a.is_empty() {
            return Err(Error::InvalidBox(format!(
                "endpoint vectors have lengths {} and {}",
                a.len(),
                b.len()
            )));
        }
        for k in 0..a.len() {
            if !(a[k] <= b[k]) {
                return Err(Error::InvalidBox(format!(
                    "a[{k}] = {} exceeds b[{k}] = {}",
                    a[k], b[k]
                )));
            }
            if a[k] < 0.0 || b[k] > 1.0 {
                return Err(Error::InvalidBox(format!(
                    "box leaves [0,1] on axis {k}: [{}, {}]",
                    a[k], b[k]
                )));
            }
        }
        Ok(NBox { a, b })
    }

    pub fn unit(ndim: usize) -> Result<Self> {
        NBox::new(vec![0.0; ndim], vec![1.0; ndim])
    }

    pub fn ndim(&self) -> usize {
        self.a.len()
    }

    pub fn is_degenerate(&self) -> bool {
        self.a.iter().zip(&self.b).any(|(a, b)| a == b)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.ndim()
            && x.iter()
                .zip(self.a.iter().zip(&self.b))
                .all(|(&xi, (&ai, &bi))| ai <= xi && xi <= bi)
    }
}

/// Sign vector `z` in `{-1, 0, +1}^n` selecting a (possibly partial) corner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CornerIndex {
    z: Vec<i8>,
}

impl CornerIndex {
    pub fn new(z: Vec<i8>) -> Result<Self> {
        if z.iter().any(|&v| !(-1..=1).contains(&v)) {
            return Err(Error::Precondition(
                "corner index entries must lie in {-1, 0, +1}".into(),
            ));
        }
        Ok(CornerIndex { z })
    }

    pub fn signs(&self) -> &[i8] {
        &self.z
    }
}

/// The point `x^z`: coordinate `k` is `b_k`, `x_k`, or `a_k` as `z_k` is
/// `+1`, `0`, or `-1`.
pub fn corner_point(bx: &NBox, x: &[f64], z: &CornerIndex) -> Result<Vec<f64>> {
    if x.len() != bx.ndim() || z.z.len() != bx.ndim() {
        return Err(Error::DimensionMismatch {
            expected: bx.ndim(),
            got: x.len().max(z.z.len()),
        });
    }
    if !bx.contains(x) {
        return Err(Error::Precondition(format!("point {x:?} not in box")));
    }
    Ok((0..bx.ndim())
        .map(|k| match z.z[k] {
            1 => bx.b[k],
            -1 => bx.a[k],
            _ => x[k],
        })
        .collect())
}

/// Dense values on a mesh, with an optional mask marking where the value is
/// defined (`true` = defined). Immutable once constructed.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    mesh: Mesh,
    values: Vec<f64>,
    mask: Option<Vec<bool>>,
}

impl GridFunction {
    pub fn new(mesh: Mesh, values: Vec<f64>) -> Result<Self> {
        if values.len() != mesh.node_count() {
            return Err(Error::InvalidGrid(format!(
                "value count {} does not match mesh node count {}",
                values.len(),
                mesh.node_count()
            )));
        }
        Ok(GridFunction {
            mesh,
            values,
            mask: None,
        })
    }

    pub fn new_masked(mesh: Mesh, values: Vec<f64>, mask: Vec<bool>) -> Result<Self> {
        if values.len() != mesh.node_count() || mask.len() != values.len() {
            return Err(Error::InvalidGrid(format!(
                "lengths mesh={} values={} mask={} disagree",
                mesh.node_count(),
                values.len(),
                mask.len()
            )));
        }
        Ok(GridFunction {
            mesh,
            values,
            mask: Some(mask),
        })
    }

    /// Tabulate `f` at every node.
    pub fn tabulate<F>(mesh: Mesh, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        let values = (0..mesh.node_count())
            .into_par_iter()
            .map(|flat| f(&mesh.node_coords(&mesh.multi_index(flat))))
            .collect();
        GridFunction {
            mesh,
            values,
            mask: None,
        }
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn ndim(&self) -> usize {
        self.mesh.ndim()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mask(&self) -> Option<&[bool]> {
        self.mask.as_deref()
    }

    pub fn value(&self, idx: &[usize]) -> f64 {
        self.values[self.mesh.flat_index(idx)]
    }

    pub fn value_flat(&self, flat: usize) -> f64 {
        self.values[flat]
    }

    pub fn is_defined_flat(&self, flat: usize) -> bool {
        self.mask.as_ref().is_none_or(|m| m[flat])
    }

    pub fn is_defined(&self, idx: &[usize]) -> bool {
        self.is_defined_flat(self.mesh.flat_index(idx))
    }

    /// Multilinear interpolation at `x`. Exact at mesh nodes. Errors when `x`
    /// leaves the mesh's bounding box or a surrounding node is undefined.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        let n = self.ndim();
        if x.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: x.len(),
            });
        }
        let mut cells = Vec::with_capacity(n);
        for k in 0..n {
            cells.push(self.mesh.locate(k, x[k])?);
        }
        let strides = self.mesh.strides();
        let mut acc = 0.0;
        // 2^n surrounding corners; axes with a single node contribute no bit.
        let corners = 1usize << n;
        let mut idx = vec![0usize; n];
        for corner in 0..corners {
            let mut weight = 1.0;
            for k in 0..n {
                let (cell, t) = cells[k];
                let hi = corner >> k & 1 == 1;
                if self.mesh.axis(k).len() == 1 {
                    if hi {
                        weight = 0.0;
                        break;
                    }
                    idx[k] = 0;
                    continue;
                }
                weight *= if hi { t } else { 1.0 - t };
                idx[k] = cell + usize::from(hi);
            }
            if weight == 0.0 {
                continue;
            }
            let flat: usize = idx.iter().zip(&strides).map(|(i, s)| i * s).sum();
            if !self.is_defined_flat(flat) {
                return Err(Error::UndefinedValue { node: idx.clone() });
            }
            acc += weight * self.values[flat];
        }
        Ok(acc)
    }

    /// Re-tabulate onto another mesh via multilinear evaluation. The target
    /// mesh must sit inside this grid's bounding box.
    pub fn resample(&self, mesh: &Mesh) -> Result<GridFunction> {
        if mesh.ndim() != self.ndim() {
            return Err(Error::DimensionMismatch {
                expected: self.ndim(),
                got: mesh.ndim(),
            });
        }
        let values = (0..mesh.node_count())
            .map(|flat| self.evaluate(&mesh.node_coords(&mesh.multi_index(flat))))
            .collect::<Result<Vec<_>>>()?;
        GridFunction::new(mesh.clone(), values)
    }

    fn combine(fs: &[&GridFunction], pick: impl Fn(f64, f64) -> f64) -> Result<GridFunction> {
        let first = *fs
            .first()
            .ok_or_else(|| Error::Precondition("need at least one grid".into()))?;
        for f in fs {
            if !f.mesh.same_axes(&first.mesh) {
                return Err(Error::MeshMismatch(
                    "pointwise envelope requires identical meshes".into(),
                ));
            }
            if f.mask.is_some() {
                return Err(Error::Precondition(
                    "pointwise envelope requires fully defined grids".into(),
                ));
            }
        }
        let mut values = first.values.clone();
        for f in &fs[1..] {
            for (v, &w) in values.iter_mut().zip(&f.values) {
                *v = pick(*v, w);
            }
        }
        GridFunction::new(first.mesh.clone(), values)
    }

    /// Nodewise minimum of grids on one common mesh.
    pub fn pointwise_min(fs: &[&GridFunction]) -> Result<GridFunction> {
        Self::combine(fs, f64::min)
    }

    /// Nodewise maximum of grids on one common mesh.
    pub fn pointwise_max(fs: &[&GridFunction]) -> Result<GridFunction> {
        Self::combine(fs, f64::max)
    }
}

/// Visit every multi-index of `shape` in lexicographic (row-major) order.
pub(crate) fn for_each_index(shape: &[usize], mut visit: impl FnMut(&[usize])) {
    if shape.contains(&0) {
        return;
    }
    let mut idx = vec![0usize; shape.len()];
    loop {
        visit(&idx);
        let mut k = shape.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < shape[k] {
                break;
            }
            idx[k] = 0;
        }
    }
}
