//! Constructions on a single rectangle: boundary conditions, the additive
//! patches `A` and `B`, their difference `G` with its margins, the
//! factorization of `G` into lower-dimensional quasi-copulas, the conjectured
//! multiplicative patch `P`, and the local upper/lower patch bounds.
//!
//! Boundary data is stored only on the 2n faces of the rectangle. The formal
//! boundary function `F(x^z)` for a nonzero sign vector `z` is evaluated by
//! routing to the face selected by the first nonzero coordinate of `z`; the
//! face-agreement condition guarantees the choice does not matter.

use rayon::prelude::*;

use crate::axioms::{self, VOLUME_EPS};
use crate::error::{Error, Result};
use crate::grid::{for_each_index, GridFunction, Mesh, NBox};
use crate::report::{CheckReport, Violation, ViolationKind};

/// Spacing below which two normalized margin values collapse to one image
/// node (plateaus resolve to their left endpoint).
const IMAGE_DEDUP: f64 = 1e-12;

/// Prescribed values on the 2n faces of a rectangle: for each axis `k` a
/// lower-face grid (`x_k = a_k`) and an upper-face grid (`x_k = b_k`), both
/// on the mesh induced by dropping axis `k`.
#[derive(Debug, Clone)]
pub struct BoundarySet {
    mesh: Mesh,
    faces: Vec<FacePair>,
}

#[derive(Debug, Clone)]
pub struct FacePair {
    pub lower: GridFunction,
    pub upper: GridFunction,
}

impl BoundarySet {
    pub fn new(mesh: Mesh, faces: Vec<FacePair>) -> Result<Self> {
        let n = mesh.ndim();
        if n < 2 {
            return Err(Error::InvalidMesh(
                "boundary sets need dimension >= 2".into(),
            ));
        }
        if faces.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: faces.len(),
            });
        }
        for (k, pair) in faces.iter().enumerate() {
            let expected = mesh.face_mesh(k)?;
            if pair.lower.mesh() != &expected || pair.upper.mesh() != &expected {
                return Err(Error::MeshMismatch(format!(
                    "face {k} is not on the mesh induced by dropping axis {k}"
                )));
            }
        }
        Ok(BoundarySet { mesh, faces })
    }

    /// Restrict a function to the boundary of the mesh's bounding box.
    pub fn from_function<F>(mesh: Mesh, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        let n = mesh.ndim();
        let bx = mesh.bounding_box();
        let mut faces = Vec::with_capacity(n);
        for k in 0..n {
            let face_mesh = mesh.face_mesh(k)?;
            let pin = |pinned: f64| {
                let f = &f;
                move |y: &[f64]| {
                    let mut x = Vec::with_capacity(n);
                    x.extend_from_slice(&y[..k]);
                    x.push(pinned);
                    x.extend_from_slice(&y[k..]);
                    f(&x)
                }
            };
            faces.push(FacePair {
                lower: GridFunction::tabulate(face_mesh.clone(), pin(bx.a[k])),
                upper: GridFunction::tabulate(face_mesh, pin(bx.b[k])),
            });
        }
        BoundarySet::new(mesh, faces)
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn ndim(&self) -> usize {
        self.mesh.ndim()
    }

    pub fn nbox(&self) -> NBox {
        self.mesh.bounding_box()
    }

    pub fn face(&self, k: usize, upper: bool) -> &GridFunction {
        if upper {
            &self.faces[k].upper
        } else {
            &self.faces[k].lower
        }
    }

    /// Value of the formal boundary function at `x^z` for a node `x` and a
    /// nonzero sign vector `z`. Routes to the face of the first nonzero
    /// coordinate of `z`.
    pub fn boundary_value(&self, idx: &[usize], z: &[i8]) -> f64 {
        let k = z
            .iter()
            .position(|&s| s != 0)
            .expect("boundary_value needs a nonzero sign vector");
        let face = if z[k] == 1 {
            &self.faces[k].upper
        } else {
            &self.faces[k].lower
        };
        let mut fidx = Vec::with_capacity(idx.len() - 1);
        for j in 0..idx.len() {
            if j == k {
                continue;
            }
            fidx.push(match z[j] {
                0 => idx[j],
                -1 => 0,
                _ => self.mesh.axis(j).len() - 1,
            });
        }
        face.value(&fidx)
    }

    /// Boundary value on face `k` (lower or upper) at the projection of a
    /// full box node index.
    fn face_value(&self, k: usize, upper: bool, idx: &[usize]) -> f64 {
        let face = self.face(k, upper);
        let mut fidx = Vec::with_capacity(idx.len() - 1);
        for (j, &i) in idx.iter().enumerate() {
            if j != k {
                fidx.push(i);
            }
        }
        face.value(&fidx)
    }

    /// Signed volume of the rectangle, from the alternating corner sum of the
    /// boundary data.
    pub fn volume(&self) -> f64 {
        let n = self.ndim();
        let idx = vec![0usize; n];
        let mut z = vec![0i8; n];
        let mut volume = 0.0;
        for bits in 0..1usize << n {
            let mut lowers = 0;
            for (k, s) in z.iter_mut().enumerate() {
                if bits >> k & 1 == 1 {
                    *s = 1;
                } else {
                    *s = -1;
                    lowers += 1;
                }
            }
            let sign = if lowers % 2 == 0 { 1.0 } else { -1.0 };
            volume += sign * self.boundary_value(&idx, &z);
        }
        volume
    }

    /// Volume of the rectangle anchored at the lower corner `a` and the point
    /// `x^{z'_k}` (node `idx` with coordinate `k` pushed to the upper face).
    fn anchored_volume(&self, idx: &[usize], k: usize) -> f64 {
        let n = self.ndim();
        let mut z = vec![0i8; n];
        let mut volume = 0.0;
        for bits in 0..1usize << n {
            let mut lowers = 0;
            for (j, s) in z.iter_mut().enumerate() {
                if bits >> j & 1 == 1 {
                    *s = -1;
                    lowers += 1;
                } else {
                    *s = if j == k { 1 } else { 0 };
                }
            }
            let sign = if lowers % 2 == 0 { 1.0 } else { -1.0 };
            volume += sign * self.boundary_value(idx, &z);
        }
        volume
    }
}

fn lift_face_violation(mut v: Violation, k: usize, side_index: usize) -> Violation {
    v.axis = v.axis.map(|p| if p >= k { p + 1 } else { p });
    v.node_index.insert(k, side_index);
    v
}

/// Face agreement, per-face monotonicity/Lipschitz, and the opposite-face
/// sandwich `0 <= F'_k - F_k <= b_k - a_k`.
pub fn check_boundary_consistency(bs: &BoundarySet, tol: f64) -> CheckReport {
    let mut report = CheckReport::new("boundary consistency");
    let mesh = bs.mesh();
    let n = bs.ndim();
    let bx = bs.nbox();
    let shape = mesh.shape();

    // faces meeting at an (n-2)-face must carry the same values there
    for j in 0..n {
        for k in (j + 1)..n {
            for &upper_j in &[false, true] {
                for &upper_k in &[false, true] {
                    let mut edge_shape = shape.clone();
                    edge_shape[j] = 1;
                    edge_shape[k] = 1;
                    let fix = |idx: &mut Vec<usize>| {
                        idx[j] = if upper_j { shape[j] - 1 } else { 0 };
                        idx[k] = if upper_k { shape[k] - 1 } else { 0 };
                    };
                    for_each_index(&edge_shape, |base| {
                        let mut idx = base.to_vec();
                        fix(&mut idx);
                        let via_j = bs.face_value(j, upper_j, &idx);
                        let via_k = bs.face_value(k, upper_k, &idx);
                        let err = (via_j - via_k).abs();
                        if err > tol {
                            report.record(Violation {
                                kind: ViolationKind::FaceAgreement,
                                axis: None,
                                node_index: idx,
                                magnitude: err - tol,
                            });
                        }
                    });
                }
            }
        }
    }

    // each face function increasing and 1-Lipschitz per axis
    for k in 0..n {
        for &upper in &[false, true] {
            let side_index = if upper { shape[k] - 1 } else { 0 };
            let face = bs.face(k, upper);
            let mut sub = axioms::check_increasing(face, tol);
            sub.merge(axioms::check_lipschitz(face, tol));
            report.passed &= sub.passed;
            report.total_violations += sub.total_violations;
            for v in sub.violations {
                if report.violations.len() < crate::report::MAX_VIOLATIONS {
                    report.violations.push(lift_face_violation(v, k, side_index));
                }
            }
        }
    }

    // opposite faces: 0 <= F'_k - F_k <= b_k - a_k nodewise
    for k in 0..n {
        let width = bx.b[k] - bx.a[k];
        let lower = bs.face(k, false);
        let upper = bs.face(k, true);
        for flat in 0..lower.mesh().node_count() {
            let d = upper.value_flat(flat) - lower.value_flat(flat);
            let excess = (-d).max(d - width);
            if excess > tol {
                let mut idx = lower.mesh().multi_index(flat);
                idx.insert(k, 0);
                report.record(Violation {
                    kind: ViolationKind::FaceBound,
                    axis: Some(k),
                    node_index: idx,
                    magnitude: excess - tol,
                });
            }
        }
    }
    report
}

/// For each `k`, the volume anchored at the lower corner and
/// a point of the upper k-face must be monotone (consistent direction along
/// each face axis) and non-constant in each of its arguments.
pub fn check_boundary_volume_monotonicity(bs: &BoundarySet, tol: f64) -> CheckReport {
    let mut report = CheckReport::new("boundary volume monotonicity");
    let mesh = bs.mesh();
    let n = bs.ndim();
    let shape = mesh.shape();
    for k in 0..n {
        // tabulate the anchored volume over the upper k-face
        let mut face_shape = shape.clone();
        face_shape[k] = 1;
        let count: usize = face_shape.iter().product();
        let mut volumes = vec![0.0; count];
        for_each_index(&face_shape, |base| {
            let mut idx = base.to_vec();
            idx[k] = shape[k] - 1;
            volumes[flat_in(base, &face_shape)] = bs.anchored_volume(&idx, k);
        });
        for j in 0..n {
            if j == k || face_shape[j] < 2 {
                continue;
            }
            let mut max_up = (0.0f64, vec![0usize; n]);
            let mut max_down = (0.0f64, vec![0usize; n]);
            for_each_index(&face_shape, |base| {
                if base[j] + 1 >= face_shape[j] {
                    return;
                }
                let mut next = base.to_vec();
                next[j] += 1;
                let step =
                    volumes[flat_in(&next, &face_shape)] - volumes[flat_in(base, &face_shape)];
                next[k] = shape[k] - 1;
                if step > max_up.0 {
                    max_up = (step, next.clone());
                }
                if -step > max_down.0 {
                    max_down = (-step, next);
                }
            });
            if max_up.0 > tol && max_down.0 > tol {
                let (excess, at) = if max_up.0 < max_down.0 { max_up } else { max_down };
                report.record(Violation {
                    kind: ViolationKind::VolumeMonotone,
                    axis: Some(j),
                    node_index: at,
                    magnitude: excess - tol,
                });
            } else if max_up.0 <= tol && max_down.0 <= tol {
                let mut at = vec![0usize; n];
                at[k] = shape[k] - 1;
                report.record(Violation {
                    kind: ViolationKind::VolumeConstant,
                    axis: Some(j),
                    node_index: at,
                    magnitude: 0.0,
                });
            }
        }
    }
    report
}

fn flat_in(idx: &[usize], shape: &[usize]) -> usize {
    let mut flat = 0;
    for (i, s) in idx.iter().zip(shape) {
        flat = flat * s + i;
    }
    flat
}

/// All four boundary conditions.
pub fn check_boundary_conditions(bs: &BoundarySet, tol: f64) -> CheckReport {
    let mut report = check_boundary_consistency(bs, tol);
    report.checked = "boundary conditions".into();
    report.merge(check_boundary_volume_monotonicity(bs, tol));
    report
}

fn require_boundary_consistency(bs: &BoundarySet) -> Result<()> {
    let report = check_boundary_consistency(bs, axioms::DEFAULT_TOL);
    if report.passed {
        Ok(())
    } else {
        Err(Error::BoundaryViolation(report))
    }
}

fn additive(bs: &BoundarySet, toward_lower: bool) -> GridFunction {
    let mesh = bs.mesh().clone();
    let n = mesh.ndim();
    let values: Vec<f64> = (0..mesh.node_count())
        .into_par_iter()
        .map(|flat| {
            let idx = mesh.multi_index(flat);
            let mut z = vec![0i8; n];
            let mut acc = 0.0;
            for bits in 1..1usize << n {
                let mut count = 0usize;
                for (k, s) in z.iter_mut().enumerate() {
                    if bits >> k & 1 == 1 {
                        *s = if toward_lower { -1 } else { 1 };
                        count += 1;
                    } else {
                        *s = 0;
                    }
                }
                let sign = if count % 2 == 1 { 1.0 } else { -1.0 };
                acc += sign * bs.boundary_value(&idx, &z);
            }
            acc
        })
        .collect();
    GridFunction::new(mesh, values).expect("value count matches mesh")
}

/// The additive patch matching the lower faces: the signed sum of boundary
/// values over all nonzero sign vectors in `{-1, 0}^n`.
pub fn additive_patch_a(bs: &BoundarySet) -> Result<GridFunction> {
    require_boundary_consistency(bs)?;
    Ok(additive(bs, true))
}

/// The additive patch matching the upper faces: the signed sum over nonzero
/// sign vectors in `{0, 1}^n`.
pub fn additive_patch_b(bs: &BoundarySet) -> Result<GridFunction> {
    require_boundary_consistency(bs)?;
    Ok(additive(bs, false))
}

/// The additive patches, their difference, the rectangle volume, and the
/// univariate margins `M_k` read off the difference along the edges through
/// the upper corner.
#[derive(Debug, Clone)]
pub struct PatchComponents {
    pub a: GridFunction,
    pub b: GridFunction,
    pub g: GridFunction,
    /// `M_k` tabulated on axis `k` of the box mesh (1-dimensional grids).
    pub margins: Vec<GridFunction>,
    /// Signed volume of the rectangle; `M_k(a_k) = 0` and `M_k(b_k) = volume`.
    pub volume: f64,
}

pub fn patch_difference_g(bs: &BoundarySet) -> Result<PatchComponents> {
    require_boundary_consistency(bs)?;
    let a = additive(bs, true);
    let b = additive(bs, false);
    let values = b
        .values()
        .iter()
        .zip(a.values())
        .map(|(bv, av)| bv - av)
        .collect();
    let g = GridFunction::new(bs.mesh().clone(), values)?;
    let mesh = bs.mesh();
    let n = mesh.ndim();
    let shape = mesh.shape();
    let mut margins = Vec::with_capacity(n);
    for k in 0..n {
        let axis_mesh = Mesh::new(vec![mesh.axis(k).to_vec()])?;
        let mut idx: Vec<usize> = shape.iter().map(|&s| s - 1).collect();
        let values = (0..shape[k])
            .map(|i| {
                idx[k] = i;
                g.value(&idx)
            })
            .collect();
        margins.push(GridFunction::new(axis_mesh, values)?);
    }
    Ok(PatchComponents {
        a,
        b,
        g,
        margins,
        volume: bs.volume(),
    })
}

/// Upper Step-I solution on the unit cube: the pointwise minimum over `k` of
/// the prescribed upper-face functions with coordinate `k` dropped.
pub fn step_i_upper(faces: &[GridFunction], tol: f64) -> Result<GridFunction> {
    step_i(faces, tol, true)
}

/// Lower Step-I solution: the pointwise maximum over `k` of
/// `W(x_k, C_k(..))` with `W(u, v) = max(u + v - 1, 0)`.
pub fn step_i_lower(faces: &[GridFunction], tol: f64) -> Result<GridFunction> {
    step_i(faces, tol, false)
}

fn step_i(faces: &[GridFunction], tol: f64, upper: bool) -> Result<GridFunction> {
    let n = faces.len();
    if n < 2 {
        return Err(Error::Precondition(
            "step I needs at least two prescribed faces".into(),
        ));
    }
    let axis = faces[0].mesh().axis(0).to_vec();
    for (k, face) in faces.iter().enumerate() {
        if face.ndim() != n - 1 {
            return Err(Error::DimensionMismatch {
                expected: n - 1,
                got: face.ndim(),
            });
        }
        if face.mesh().axes().iter().any(|ax| *ax != axis) {
            return Err(Error::MeshMismatch(format!(
                "face {k} is not on the common isotropic mesh"
            )));
        }
        let report = axioms::is_quasi_copula(face, tol);
        if !report.passed {
            return Err(Error::AxiomViolation(report));
        }
    }
    let mesh = Mesh::new(vec![axis.clone(); n])?;
    let values: Vec<f64> = (0..mesh.node_count())
        .into_par_iter()
        .map(|flat| {
            let idx = mesh.multi_index(flat);
            let mut sub = Vec::with_capacity(n - 1);
            let mut best = if upper { f64::INFINITY } else { f64::NEG_INFINITY };
            for k in 0..n {
                sub.clear();
                sub.extend(idx.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, &i)| i));
                let c = faces[k].value(&sub);
                let term = if upper {
                    c
                } else {
                    (axis[idx[k]] + c - 1.0).max(0.0)
                };
                best = if upper { best.min(term) } else { best.max(term) };
            }
            best
        })
        .collect();
    GridFunction::new(mesh, values)
}

/// The normalized margins, the lower-dimensional quasi-copula factors of the
/// patch difference, and the n-variate quasi-copula recombined from them.
#[derive(Debug, Clone)]
pub struct SklarFactorization {
    /// `M_k / V` on axis `k` of the box mesh; increasing from 0 to 1.
    pub margins: Vec<GridFunction>,
    /// `Q_k` tabulated on the image mesh of the normalized margins.
    pub factors: Vec<GridFunction>,
    /// The lower Step-I solution built from the factors (resampled onto a
    /// common mesh first).
    pub combined: GridFunction,
}

/// Margin image: deduplicated increasing axis values plus, per retained
/// value, the index of the leftmost box-mesh node mapping to it.
fn margin_image(values: &[f64], axis: usize, tol: f64) -> Result<(Vec<f64>, Vec<usize>)> {
    let last = values.len() - 1;
    if values[0].abs() > tol || (values[last] - 1.0).abs() > tol {
        return Err(Error::Precondition(format!(
            "normalized margin on axis {axis} does not span [0,1]: [{}, {}]",
            values[0], values[last]
        )));
    }
    for (i, pair) in values.windows(2).enumerate() {
        let step = pair[1] - pair[0];
        if step < -tol {
            return Err(Error::NonMonotoneMargin {
                axis,
                node: i + 1,
                step,
            });
        }
    }
    let mut image = Vec::with_capacity(values.len());
    let mut kept = Vec::with_capacity(values.len());
    for (i, &raw) in values.iter().enumerate() {
        let u = if i == 0 {
            0.0
        } else if i == last {
            1.0
        } else {
            raw.clamp(0.0, 1.0)
        };
        if i == 0 || u > *image.last().unwrap() + IMAGE_DEDUP {
            image.push(u);
            kept.push(i);
        } else if i == last {
            // the final node must carry the value 1; replace the plateau head
            *image.last_mut().unwrap() = 1.0;
        }
    }
    Ok((image, kept))
}

/// Sklar-type factorization of the patch difference: each `Q_k` is the
/// upper-k-face of `G/V` re-parametrized through the pseudo-inverses of the
/// normalized margins (left-continuous; plateaus resolve to their left
/// endpoint).
pub fn sklar_factorize(pc: &PatchComponents, tol: f64) -> Result<SklarFactorization> {
    let v = pc.volume;
    if v.abs() < VOLUME_EPS {
        return Err(Error::DegenerateVolume { volume: v });
    }
    let mesh = pc.g.mesh();
    let n = mesh.ndim();
    let mut normalized = Vec::with_capacity(n);
    let mut images = Vec::with_capacity(n);
    for k in 0..n {
        let values: Vec<f64> = pc.margins[k].values().iter().map(|m| m / v).collect();
        let (image, kept) = margin_image(&values, k, tol)?;
        normalized.push(GridFunction::new(
            pc.margins[k].mesh().clone(),
            values,
        )?);
        images.push((image, kept));
    }

    let shape = mesh.shape();
    let mut factors = Vec::with_capacity(n);
    for k in 0..n {
        let axes: Vec<Vec<f64>> = (0..n)
            .filter(|j| *j != k)
            .map(|j| images[j].0.clone())
            .collect();
        let factor_mesh = Mesh::new(axes)?;
        let kept: Vec<&Vec<usize>> = (0..n).filter(|j| *j != k).map(|j| &images[j].1).collect();
        let mut values = Vec::with_capacity(factor_mesh.node_count());
        for_each_index(&factor_mesh.shape(), |q| {
            let mut idx = vec![0usize; n];
            idx[k] = shape[k] - 1;
            let mut pos = 0;
            for j in 0..n {
                if j == k {
                    continue;
                }
                idx[j] = kept[pos][q[pos]];
                pos += 1;
            }
            values.push(pc.g.value(&idx) / v);
        });
        let factor = GridFunction::new(factor_mesh, values)?;
        let report = axioms::is_quasi_copula(&factor, tol);
        if !report.passed {
            return Err(Error::AxiomViolation(report));
        }
        factors.push(factor);
    }

    let combined = combine_factors(&factors, tol)?;
    Ok(SklarFactorization {
        margins: normalized,
        factors,
        combined,
    })
}

/// Resample the factors onto a common isotropic mesh (the union of their
/// axes) and take the lower Step-I solution.
fn combine_factors(factors: &[GridFunction], tol: f64) -> Result<GridFunction> {
    let mut union: Vec<f64> = Vec::new();
    for f in factors {
        for axis in f.mesh().axes() {
            union.extend_from_slice(axis);
        }
    }
    union.sort_by(|x, y| x.partial_cmp(y).unwrap());
    union.dedup_by(|x, y| (*x - *y).abs() <= IMAGE_DEDUP);
    let m = factors.len() - 1;
    let common = Mesh::new(vec![union; m.max(1)])?;
    let resampled: Vec<GridFunction> = factors
        .iter()
        .map(|f| f.resample(&common))
        .collect::<Result<_>>()?;
    step_i_lower(&resampled, tol)
}

/// The conjectured multiplicative patch
/// `P(x) = A(x) + V * Q(M_1(x_1)/V, ..., M_n(x_n)/V)`.
///
/// No quasi-copula guarantee: for n >= 3 this construction fails in general,
/// and the failure is reproduced by the 3-dimensional counterexample.
pub fn conjectured_patch_p(pc: &PatchComponents, q: &GridFunction) -> Result<GridFunction> {
    let v = pc.volume;
    if v.abs() < VOLUME_EPS {
        return Err(Error::DegenerateVolume { volume: v });
    }
    let mesh = pc.a.mesh();
    let n = mesh.ndim();
    if q.ndim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: q.ndim(),
        });
    }
    if !q.mesh().spans_unit_cube() {
        return Err(Error::Precondition(
            "combining quasi-copula must live on the unit cube".into(),
        ));
    }
    let normalized: Vec<Vec<f64>> = pc
        .margins
        .iter()
        .map(|m| m.values().iter().map(|x| (x / v).clamp(0.0, 1.0)).collect())
        .collect();
    let values = (0..mesh.node_count())
        .into_par_iter()
        .map(|flat| {
            let idx = mesh.multi_index(flat);
            let u: Vec<f64> = idx
                .iter()
                .enumerate()
                .map(|(k, &i)| normalized[k][i])
                .collect();
            Ok(pc.a.value_flat(flat) + v * q.evaluate(&u)?)
        })
        .collect::<Result<Vec<f64>>>()?;
    GridFunction::new(mesh.clone(), values)
}

/// Tightest upper and lower bounds over all patches that are increasing and
/// 1-Lipschitz in each argument and match the boundary data:
/// the minimum over `k` of `{F(x^{z'_k}), F(x^{z_k}) + x_k - a_k}`, and the
/// maximum over `k` of `{F(x^{z_k}), F(x^{z'_k}) + x_k - b_k}`.
pub fn local_patch_bounds(bs: &BoundarySet) -> Result<(GridFunction, GridFunction)> {
    require_boundary_consistency(bs)?;
    let mesh = bs.mesh().clone();
    let n = mesh.ndim();
    let bx = bs.nbox();
    let pairs: Vec<(f64, f64)> = (0..mesh.node_count())
        .into_par_iter()
        .map(|flat| {
            let idx = mesh.multi_index(flat);
            let x = mesh.node_coords(&idx);
            let mut hi = f64::INFINITY;
            let mut lo = f64::NEG_INFINITY;
            for k in 0..n {
                let at_lower = bs.face_value(k, false, &idx);
                let at_upper = bs.face_value(k, true, &idx);
                hi = hi.min(at_upper).min(at_lower + (x[k] - bx.a[k]));
                lo = lo.max(at_lower).max(at_upper + (x[k] - bx.b[k]));
            }
            (hi, lo)
        })
        .collect();
    let upper = GridFunction::new(mesh.clone(), pairs.iter().map(|p| p.0).collect())?;
    let lower = GridFunction::new(mesh, pairs.iter().map(|p| p.1).collect())?;
    Ok((upper, lower))
}
