//! Verification of the (sub-)quasi-copula axioms and signed n-box volumes.
//!
//! All checks are report-style: they never fail hard, they return a
//! [`CheckReport`] listing the violations found in deterministic scan order.
//! Checks operate on node values only; multilinear interpolation preserves
//! monotonicity and the 1-Lipschitz condition, so node-level checks extend
//! to the whole cube.

use crate::error::{Error, Result};
use crate::grid::{for_each_index, GridFunction, NBox};
use crate::report::{CheckReport, Violation, ViolationKind};

/// Absolute tolerance for all axiom checks. Closed-form inputs evaluated in
/// double precision only incur rounding noise, far below this.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Guard below which a rectangle volume is treated as zero.
pub const VOLUME_EPS: f64 = 1e-12;

fn mesh_span_violation(f: &GridFunction, report: &mut CheckReport) -> bool {
    if f.mesh().spans_unit_cube() {
        return false;
    }
    report.record(Violation {
        kind: ViolationKind::MeshSpan,
        axis: None,
        node_index: vec![],
        magnitude: f64::NAN,
    });
    true
}

/// `f = 0` at every defined node with some zero coordinate.
pub fn check_grounded(f: &GridFunction, tol: f64) -> CheckReport {
    let mut report = CheckReport::new("grounded");
    if mesh_span_violation(f, &mut report) {
        return report;
    }
    let mesh = f.mesh();
    for flat in 0..mesh.node_count() {
        if !f.is_defined_flat(flat) {
            continue;
        }
        let idx = mesh.multi_index(flat);
        let x = mesh.node_coords(&idx);
        if x.contains(&0.0) && f.value_flat(flat).abs() > tol {
            report.record(Violation {
                kind: ViolationKind::Grounded,
                axis: None,
                node_index: idx,
                magnitude: f.value_flat(flat).abs() - tol,
            });
        }
    }
    report
}

/// `f(x) = x_k` at every defined node where all coordinates except the k-th
/// equal 1. For a 1-dimensional grid this forces the identity.
pub fn check_neutral(f: &GridFunction, tol: f64) -> CheckReport {
    let mut report = CheckReport::new("neutral");
    if mesh_span_violation(f, &mut report) {
        return report;
    }
    let mesh = f.mesh();
    for k in 0..mesh.ndim() {
        for flat in 0..mesh.node_count() {
            if !f.is_defined_flat(flat) {
                continue;
            }
            let idx = mesh.multi_index(flat);
            let x = mesh.node_coords(&idx);
            let others_at_one = (0..x.len()).all(|j| j == k || x[j] == 1.0);
            if !others_at_one {
                continue;
            }
            let err = (f.value_flat(flat) - x[k]).abs();
            if err > tol {
                report.record(Violation {
                    kind: ViolationKind::Neutral,
                    axis: Some(k),
                    node_index: idx,
                    magnitude: err - tol,
                });
            }
        }
    }
    report
}

/// Walk every axis-parallel line of the grid, handing consecutive pairs of
/// *defined* nodes to `visit` (undefined nodes are skipped, so the pairs may
/// straddle gaps of a masked sub-quasi-copula grid).
fn scan_axis_pairs(
    f: &GridFunction,
    axis: usize,
    mut visit: impl FnMut(&[usize], usize, usize, f64, f64),
) {
    let mesh = f.mesh();
    let shape = mesh.shape();
    let strides = mesh.strides();
    let len = shape[axis];
    if len < 2 {
        return;
    }
    let mut line_shape = shape.clone();
    line_shape[axis] = 1;
    for_each_index(&line_shape, |base| {
        let base_flat = mesh.flat_index(base);
        let mut prev: Option<(usize, f64)> = None;
        for i in 0..len {
            let flat = base_flat + i * strides[axis];
            if !f.is_defined_flat(flat) {
                continue;
            }
            let v = f.value_flat(flat);
            if let Some((pi, pv)) = prev {
                visit(base, pi, i, pv, v);
            }
            prev = Some((i, v));
        }
    });
}

/// Componentwise monotonicity between consecutive defined nodes per axis.
pub fn check_increasing(f: &GridFunction, tol: f64) -> CheckReport {
    let mut report = CheckReport::new("increasing");
    for axis in 0..f.ndim() {
        scan_axis_pairs(f, axis, |base, _i, j, pv, v| {
            if v - pv < -tol {
                let mut idx = base.to_vec();
                idx[axis] = j;
                report.record(Violation {
                    kind: ViolationKind::Increasing,
                    axis: Some(axis),
                    node_index: idx,
                    magnitude: pv - v - tol,
                });
            }
        });
    }
    report
}

/// 1-Lipschitz condition between consecutive defined nodes per axis:
/// the increment must not exceed the coordinate spacing.
pub fn check_lipschitz(f: &GridFunction, tol: f64) -> CheckReport {
    let mut report = CheckReport::new("1-lipschitz");
    for axis in 0..f.ndim() {
        let coords = f.mesh().axis(axis).to_vec();
        scan_axis_pairs(f, axis, |base, i, j, pv, v| {
            let spacing = coords[j] - coords[i];
            if v - pv > spacing + tol {
                let mut idx = base.to_vec();
                idx[axis] = j;
                report.record(Violation {
                    kind: ViolationKind::Lipschitz,
                    axis: Some(axis),
                    node_index: idx,
                    magnitude: v - pv - spacing - tol,
                });
            }
        });
    }
    report
}

/// Conjunction of grounded, neutral, increasing, and 1-Lipschitz.
pub fn is_quasi_copula(f: &GridFunction, tol: f64) -> CheckReport {
    let mut report = CheckReport::new("quasi-copula");
    report.merge(check_grounded(f, tol));
    report.merge(check_neutral(f, tol));
    report.merge(check_increasing(f, tol));
    report.merge(check_lipschitz(f, tol));
    report
}

/// Quasi-copula axioms plus nonnegative volume on every elementary mesh cell.
pub fn is_copula(f: &GridFunction, tol: f64) -> CheckReport {
    let mut report = CheckReport::new("copula");
    report.merge(is_quasi_copula(f, tol));
    let mesh = f.mesh();
    let shape = mesh.shape();
    if shape.iter().any(|&s| s < 2) {
        return report;
    }
    let strides = mesh.strides();
    let n = mesh.ndim();
    let cell_shape: Vec<usize> = shape.iter().map(|&s| s - 1).collect();
    for_each_index(&cell_shape, |cell| {
        let base_flat = mesh.flat_index(cell);
        let mut volume = 0.0;
        let mut defined = true;
        for corner in 0..1usize << n {
            let mut flat = base_flat;
            let mut uppers = 0;
            for k in 0..n {
                if corner >> k & 1 == 1 {
                    flat += strides[k];
                    uppers += 1;
                }
            }
            if !f.is_defined_flat(flat) {
                defined = false;
                break;
            }
            let sign = if (n - uppers).is_multiple_of(2) { 1.0 } else { -1.0 };
            volume += sign * f.value_flat(flat);
        }
        if defined && volume < -tol {
            report.record(Violation {
                kind: ViolationKind::CellVolume,
                axis: None,
                node_index: cell.to_vec(),
                magnitude: -volume - tol,
            });
        }
    });
    report
}

/// Signed volume of `bx` under `f`: the alternating corner sum, positive sign
/// on corners with an even number of lower endpoints. May be negative for
/// quasi-copulas. Corners are evaluated multilinearly, so they need not be
/// mesh nodes.
pub fn box_volume(f: &GridFunction, bx: &NBox) -> Result<f64> {
    let n = f.ndim();
    if bx.ndim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: bx.ndim(),
        });
    }
    let mut volume = 0.0;
    let mut corner = vec![0.0; n];
    for bits in 0..1usize << n {
        let mut lowers = 0;
        for k in 0..n {
            if bits >> k & 1 == 1 {
                corner[k] = bx.b[k];
            } else {
                corner[k] = bx.a[k];
                lowers += 1;
            }
        }
        let sign = if lowers % 2 == 0 { 1.0 } else { -1.0 };
        volume += sign * f.evaluate(&corner)?;
    }
    Ok(volume)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Mesh;

    fn pi(x: &[f64]) -> f64 {
        x.iter().product()
    }
    fn w(x: &[f64]) -> f64 {
        (x.iter().sum::<f64>() - (x.len() as f64 - 1.0)).max(0.0)
    }
    fn m(x: &[f64]) -> f64 {
        x.iter().copied().fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn grounded_pass_and_fail() {
        let mesh = Mesh::uniform(2, 5).unwrap();
        assert!(check_grounded(&GridFunction::tabulate(mesh.clone(), pi), DEFAULT_TOL).passed);
        let f = GridFunction::tabulate(mesh, |x| x[0]);
        let rep = check_grounded(&f, DEFAULT_TOL);
        assert!(!rep.passed);
        // first violation at x > 0 on the y = 0 line
        assert_eq!(rep.first().unwrap().node_index, vec![1, 0]);

        let w3 = GridFunction::tabulate(Mesh::uniform(3, 4).unwrap(), w);
        assert!(check_grounded(&w3, DEFAULT_TOL).passed);
    }

    #[test]
    fn neutral_pass_and_fail() {
        let mesh = Mesh::uniform(2, 5).unwrap();
        assert!(check_neutral(&GridFunction::tabulate(mesh.clone(), m), DEFAULT_TOL).passed);
        // f(x,y) = x y^2: f(x,1) = x fine, f(1, 1/2) = 1/4 != 1/2
        let f = GridFunction::tabulate(mesh.clone(), |x| x[0] * x[1] * x[1]);
        let rep = check_neutral(&f, DEFAULT_TOL);
        assert!(!rep.passed);
        assert!(rep
            .violations
            .iter()
            .any(|v| v.axis == Some(1) && (v.magnitude - (0.25 - DEFAULT_TOL)).abs() < 1e-12));
        assert!(!check_neutral(&GridFunction::tabulate(mesh, |_| 0.0), DEFAULT_TOL).passed);
    }

    #[test]
    fn increasing_and_lipschitz_on_references() {
        for n in [2usize, 3] {
            let mesh = Mesh::uniform(n, 5).unwrap();
            for f in [
                GridFunction::tabulate(mesh.clone(), pi),
                GridFunction::tabulate(mesh.clone(), w),
                GridFunction::tabulate(mesh.clone(), m),
            ] {
                assert!(check_increasing(&f, DEFAULT_TOL).passed);
                assert!(check_lipschitz(&f, DEFAULT_TOL).passed);
            }
        }
    }

    #[test]
    fn lipschitz_fails_for_steep_slope() {
        let mesh = Mesh::uniform(2, 9).unwrap();
        let f = GridFunction::tabulate(mesh, |x| (2.0 * x[0]).min(x[1]));
        let rep = check_lipschitz(&f, DEFAULT_TOL);
        assert!(!rep.passed);
        assert_eq!(rep.first().unwrap().axis, Some(0));
        assert!(check_increasing(&f, DEFAULT_TOL).passed);
    }

    #[test]
    fn masked_scan_skips_gaps() {
        // values defined at x in {0, 1/2, 1}; jump 0.4 over gap width 0.5 is fine,
        // but if the far value jumps by 0.6 the gap comparison must catch it.
        let mesh = Mesh::new(vec![vec![0.0, 0.25, 0.5, 0.75, 1.0]]).unwrap();
        let defined = [true, false, true, false, true];
        let ok = GridFunction::new_masked(
            mesh.clone(),
            vec![0.0, 9.0, 0.4, 9.0, 0.8],
            defined.to_vec(),
        )
        .unwrap();
        assert!(check_lipschitz(&ok, DEFAULT_TOL).passed);
        let bad = GridFunction::new_masked(
            mesh,
            vec![0.0, 9.0, 0.6, 9.0, 0.8],
            defined.to_vec(),
        )
        .unwrap();
        let rep = check_lipschitz(&bad, DEFAULT_TOL);
        assert!(!rep.passed);
        assert_eq!(rep.first().unwrap().node_index, vec![2]);
    }

    #[test]
    fn quasi_copula_and_copula_classification() {
        let mesh3 = Mesh::uniform(3, 5).unwrap();
        let w3 = GridFunction::tabulate(mesh3.clone(), w);
        assert!(is_quasi_copula(&w3, DEFAULT_TOL).passed);
        let rep = is_copula(&w3, DEFAULT_TOL);
        assert!(!rep.passed);
        assert!(rep
            .violations
            .iter()
            .all(|v| v.kind == ViolationKind::CellVolume));

        let mesh2 = Mesh::uniform(2, 5).unwrap();
        assert!(is_copula(&GridFunction::tabulate(mesh2.clone(), w), DEFAULT_TOL).passed);
        assert!(is_copula(&GridFunction::tabulate(mesh2, pi), DEFAULT_TOL).passed);
        assert!(is_copula(&GridFunction::tabulate(mesh3, m), DEFAULT_TOL).passed);
    }

    #[test]
    fn sub_box_grid_fails_global_axioms() {
        let bx = NBox::new(vec![0.25, 0.25], vec![0.75, 0.75]).unwrap();
        let f = GridFunction::tabulate(Mesh::uniform_box(&bx, 5).unwrap(), pi);
        let rep = is_quasi_copula(&f, DEFAULT_TOL);
        assert!(!rep.passed);
        assert_eq!(rep.first().unwrap().kind, ViolationKind::MeshSpan);
    }

    #[test]
    fn box_volume_references() {
        let mesh = Mesh::uniform(3, 5).unwrap();
        let pi3 = GridFunction::tabulate(mesh.clone(), pi);
        let bx = NBox::new(vec![0.25, 0.0, 0.5], vec![0.75, 0.5, 1.0]).unwrap();
        assert!((box_volume(&pi3, &bx).unwrap() - 0.5 * 0.5 * 0.5).abs() < 1e-12);

        // eight-corner inclusion-exclusion by hand: 1 - 3/2 + 0 - 0
        let w3 = GridFunction::tabulate(mesh, w);
        let half = NBox::new(vec![0.5; 3], vec![1.0; 3]).unwrap();
        assert!((box_volume(&w3, &half).unwrap() + 0.5).abs() < 1e-12);
    }

    #[test]
    fn box_volume_splits_additively() {
        let mesh = Mesh::uniform(2, 9).unwrap();
        let f = GridFunction::tabulate(mesh, |x| (x[0] + x[1] - 1.0).max(0.0));
        let whole = NBox::new(vec![0.125, 0.25], vec![0.875, 1.0]).unwrap();
        let left = NBox::new(vec![0.125, 0.25], vec![0.5, 1.0]).unwrap();
        let right = NBox::new(vec![0.5, 0.25], vec![0.875, 1.0]).unwrap();
        let v = box_volume(&f, &whole).unwrap();
        let vl = box_volume(&f, &left).unwrap();
        let vr = box_volume(&f, &right).unwrap();
        assert!((v - vl - vr).abs() < 1e-12);
    }

    #[test]
    fn unit_cube_volume_is_one_for_grounded_neutral() {
        for n in [2usize, 3] {
            let mesh = Mesh::uniform(n, 4).unwrap();
            for f in [
                GridFunction::tabulate(mesh.clone(), pi),
                GridFunction::tabulate(mesh.clone(), w),
                GridFunction::tabulate(mesh.clone(), m),
            ] {
                let v = box_volume(&f, &NBox::unit(n).unwrap()).unwrap();
                assert!((v - 1.0).abs() < 1e-12);
            }
        }
    }
}
