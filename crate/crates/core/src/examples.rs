//! Reference quasi-copulas and the 3-dimensional counterexample showing that
//! the bivariate multiplicative patch formula fails in higher dimensions.

use std::fmt;

use crate::axioms::{self, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::grid::{GridFunction, Mesh, NBox};
use crate::patchwork::{self, BoundarySet};
use crate::report::Violation;

/// Lower Fréchet–Hoeffding bound `W(x) = max(sum x_i - n + 1, 0)`.
pub fn frechet_w(x: &[f64]) -> f64 {
    (x.iter().sum::<f64>() - (x.len() as f64 - 1.0)).max(0.0)
}

/// Upper Fréchet–Hoeffding bound `M(x) = min_i x_i`.
pub fn frechet_m(x: &[f64]) -> f64 {
    x.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Independence copula `Pi(x) = prod x_i`.
pub fn product_pi(x: &[f64]) -> f64 {
    x.iter().product()
}

pub fn make_frechet_w(mesh: Mesh) -> GridFunction {
    GridFunction::tabulate(mesh, frechet_w)
}

pub fn make_frechet_m(mesh: Mesh) -> GridFunction {
    GridFunction::tabulate(mesh, frechet_m)
}

pub fn make_product_pi(mesh: Mesh) -> GridFunction {
    GridFunction::tabulate(mesh, product_pi)
}

/// Density of the bivariate quasi-copula behind the counterexample on the
/// nine thirds-squares: -3 on the middle square, 0 on the four corner
/// squares, +3 on the four edge squares.
fn ninth_density(i: usize, j: usize) -> f64 {
    match (i, j) {
        (1, 1) => -3.0,
        (0, 0) | (0, 2) | (2, 0) | (2, 2) => 0.0,
        _ => 3.0,
    }
}

/// The bivariate quasi-copula `D(x, y)`: the exact double integral of the
/// piecewise-constant density, evaluated in closed form per ninth-square.
pub fn old3d_d(x: f64, y: f64) -> f64 {
    let mut acc = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let d = ninth_density(i, j);
            if d == 0.0 {
                continue;
            }
            let dx = (x.min((i + 1) as f64 / 3.0) - i as f64 / 3.0).max(0.0);
            let dy = (y.min((j + 1) as f64 / 3.0) - j as f64 / 3.0).max(0.0);
            acc += d * dx * dy;
        }
    }
    acc
}

/// The 3-dimensional quasi-copula `F(x, y, z) = D(x, y) z`.
pub fn old3d_value(x: f64, y: f64, z: f64) -> f64 {
    old3d_d(x, y) * z
}

pub fn make_example_old3d(mesh: Mesh) -> Result<GridFunction> {
    if mesh.ndim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: mesh.ndim(),
        });
    }
    Ok(GridFunction::tabulate(mesh, |x| {
        old3d_value(x[0], x[1], x[2])
    }))
}

/// Outcome of reproducing the counterexample on the central thirds-cube.
#[derive(Debug, Clone)]
pub struct CounterexampleReport {
    pub grid_nodes: usize,
    pub volume: f64,
    /// Max deviation of `A`, `B`, `G`, and the margins from their printed
    /// closed forms (tolerance 1e-12).
    pub closed_form_error: f64,
    pub closed_forms_ok: bool,
    /// Max deviation of the factor quasi-copulas from the product copula.
    pub factor_error: f64,
    pub factors_ok: bool,
    /// Max deviation of `P(x, 1/2, 2/5)` from the piecewise-linear closed
    /// form along the sampled line.
    pub patch_line_error: f64,
    pub patch_line_ok: bool,
    /// `P(19/30, 1/2, 2/5)` from the verified closed form (123/900).
    pub p_at_breakpoint: f64,
    /// `P(2/3, 1/2, 2/5)` from the verified closed form (120/900 = 2/15).
    pub p_at_upper_end: f64,
    /// A monotonicity violation of the patch along the first axis located
    /// strictly inside (19/30, 2/3).
    pub monotone_violation: Option<Violation>,
    pub passed: bool,
}

impl fmt::Display for CounterexampleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "counterexample on [1/3,2/3]^3 with {} nodes per axis",
            self.grid_nodes
        )?;
        writeln!(f, "rectangle volume V = {} (expected -1/9)", self.volume)?;
        writeln!(
            f,
            "closed forms A, B, G, M_k: max error {:.3e} (tol 1e-12): {}",
            self.closed_form_error,
            ok(self.closed_forms_ok)
        )?;
        writeln!(
            f,
            "factor quasi-copulas vs product copula: max error {:.3e} (tol 1e-12): {}",
            self.factor_error,
            ok(self.factors_ok)
        )?;
        writeln!(
            f,
            "patch line P(x,1/2,2/5) vs min{{7x/30-1/90, -x/10+1/5}}: max error {:.3e} (tol 1e-12): {}",
            self.patch_line_error,
            ok(self.patch_line_ok)
        )?;
        writeln!(f, "P(19/30, 1/2, 2/5) = {} (123/900)", self.p_at_breakpoint)?;
        writeln!(f, "P(2/3, 1/2, 2/5)  = {} (120/900)", self.p_at_upper_end)?;
        match &self.monotone_violation {
            Some(v) => writeln!(f, "{v} with x inside (19/30, 2/3)")?,
            None => writeln!(f, "no monotonicity violation found inside (19/30, 2/3)")?,
        }
        write!(
            f,
            "result: {}",
            if self.passed {
                "PASS (P is not a quasi-copula patch)"
            } else {
                "FAIL"
            }
        )
    }
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "MISMATCH"
    }
}

/// Rebuild the counterexample end to end on an `nodes`-per-axis mesh over
/// the central thirds-cube and verify every printed value: the additive
/// patches and margins, the product-copula factorization, the closed form of
/// the conjectured patch along the line `(x, 1/2, 2/5)`, and the resulting
/// loss of monotonicity.
pub fn reproduce_counterexample(nodes: usize) -> Result<CounterexampleReport> {
    if nodes < 16 {
        return Err(Error::Precondition(
            "counterexample needs at least 16 nodes per axis".into(),
        ));
    }
    let third = 1.0 / 3.0;
    let bx = NBox::new(vec![third; 3], vec![2.0 * third; 3])?;
    let mesh = Mesh::uniform_box(&bx, nodes)?;
    let bs = BoundarySet::from_function(mesh.clone(), |x| old3d_value(x[0], x[1], x[2]))?;
    let pc = patchwork::patch_difference_g(&bs)?;

    const TOL: f64 = 1e-12;
    let mut closed_form_error: f64 = (pc.volume + 1.0 / 9.0).abs();
    for flat in 0..mesh.node_count() {
        let x = mesh.node_coords(&mesh.multi_index(flat));
        let (x1, x2, x3) = (x[0], x[1], x[2]);
        let a_ref = x2 * x3 + x1 * x3 - x1 * x2 + (x1 + x2 - 2.0 * x3) / 3.0 - 1.0 / 9.0;
        let b_ref = -2.0 * x1 * x2 + (4.0 * x1 + 4.0 * x2 + x3) / 3.0 - 8.0 / 9.0;
        let g_ref = x1 + x2 + x3 - x1 * x2 - x1 * x3 - x2 * x3 - 7.0 / 9.0;
        closed_form_error = closed_form_error
            .max((pc.a.value_flat(flat) - a_ref).abs())
            .max((pc.b.value_flat(flat) - b_ref).abs())
            .max((pc.g.value_flat(flat) - g_ref).abs());
    }
    for margin in &pc.margins {
        for (i, &t) in margin.mesh().axis(0).iter().enumerate() {
            let m_ref = -t / 3.0 + 1.0 / 9.0;
            closed_form_error = closed_form_error.max((margin.value_flat(i) - m_ref).abs());
        }
    }
    let closed_forms_ok = closed_form_error <= TOL;

    let sk = patchwork::sklar_factorize(&pc, DEFAULT_TOL)?;
    let mut factor_error: f64 = 0.0;
    for factor in &sk.factors {
        let fmesh = factor.mesh();
        for flat in 0..fmesh.node_count() {
            let u = fmesh.node_coords(&fmesh.multi_index(flat));
            factor_error = factor_error.max((factor.value_flat(flat) - u[0] * u[1]).abs());
        }
    }
    let factors_ok = factor_error <= TOL;

    let p = patchwork::conjectured_patch_p(&pc, &sk.combined)?;

    // the closed form of the patch along the line (x, 1/2, 2/5)
    let line = |x: f64| (7.0 * x / 30.0 - 1.0 / 90.0).min(-x / 10.0 + 0.2);
    let mut patch_line_error: f64 = 0.0;
    for &x in mesh.axis(0) {
        let have = p.evaluate(&[x, 0.5, 0.4])?;
        patch_line_error = patch_line_error.max((have - line(x)).abs());
    }
    let patch_line_ok = patch_line_error <= TOL;
    let p_at_breakpoint = line(19.0 / 30.0);
    let p_at_upper_end = line(2.0 / 3.0);

    // locate a nodewise decrease of the patch along the first axis with both
    // nodes inside (19/30, 2/3)
    let monotone_violation = find_axis0_decrease(&p, 19.0 / 30.0, 2.0 / 3.0);
    let increasing_flagged = !axioms::check_increasing(&p, DEFAULT_TOL).passed;

    let passed = closed_forms_ok
        && factors_ok
        && patch_line_ok
        && p_at_breakpoint > p_at_upper_end
        && monotone_violation.is_some()
        && increasing_flagged;
    Ok(CounterexampleReport {
        grid_nodes: nodes,
        volume: pc.volume,
        closed_form_error,
        closed_forms_ok,
        factor_error,
        factors_ok,
        patch_line_error,
        patch_line_ok,
        p_at_breakpoint,
        p_at_upper_end,
        monotone_violation,
        passed,
    })
}

fn find_axis0_decrease(p: &GridFunction, lo: f64, hi: f64) -> Option<Violation> {
    let mesh = p.mesh();
    let axis = mesh.axis(0);
    let shape = mesh.shape();
    let mut best: Option<Violation> = None;
    for i in 0..shape[0] - 1 {
        if axis[i] < lo - 1e-12 || axis[i + 1] > hi + 1e-12 {
            continue;
        }
        for j in 0..shape[1] {
            for k in 0..shape[2] {
                let drop = p.value(&[i, j, k]) - p.value(&[i + 1, j, k]);
                if drop > DEFAULT_TOL
                    && best.as_ref().is_none_or(|b| drop > b.magnitude)
                {
                    best = Some(Violation {
                        kind: crate::report::ViolationKind::Increasing,
                        axis: Some(0),
                        node_index: vec![i + 1, j, k],
                        magnitude: drop,
                    });
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::{is_copula, is_quasi_copula};

    #[test]
    fn reference_values() {
        assert_eq!(frechet_w(&[0.7, 0.7]), 0.7 + 0.7 - 1.0);
        assert_eq!(frechet_m(&[0.2, 0.9, 0.5]), 0.2);
        assert_eq!(product_pi(&[0.5, 0.5, 0.5]), 0.125);
    }

    #[test]
    fn generators_pass_axioms() {
        let mesh = Mesh::uniform(3, 7).unwrap();
        let w = make_frechet_w(mesh.clone());
        let m = make_frechet_m(mesh.clone());
        let pi = make_product_pi(mesh);
        for f in [&w, &m, &pi] {
            assert!(is_quasi_copula(f, DEFAULT_TOL).passed);
        }
        assert!(!is_copula(&w, DEFAULT_TOL).passed);
        assert!(is_copula(&m, DEFAULT_TOL).passed);
        assert!(is_copula(&pi, DEFAULT_TOL).passed);
    }

    #[test]
    fn d_margins_are_uniform() {
        for i in 0..=20 {
            let t = i as f64 / 20.0;
            assert!((old3d_d(t, 1.0) - t).abs() < 1e-12);
            assert!((old3d_d(1.0, t) - t).abs() < 1e-12);
        }
    }

    #[test]
    fn old3d_boundary_sections() {
        // sections of F on the boundary of the central cube
        for i in 0..=8 {
            let t = 1.0 / 3.0 + i as f64 / 8.0 * (1.0 / 3.0);
            for j in 0..=8 {
                let s = 1.0 / 3.0 + j as f64 / 8.0 * (1.0 / 3.0);
                let f = old3d_value(1.0 / 3.0, t, s);
                assert!((f - (t - 1.0 / 3.0) * s).abs() < 1e-12);
                let f = old3d_value(t, s, 1.0 / 3.0);
                let want = 2.0 / 3.0 * (t + s) - (1.0 / 3.0 + t * s);
                assert!((f - want).abs() < 1e-12);
            }
        }
        assert!((old3d_value(1.0, 1.0, 1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn old3d_is_quasi_copula_but_not_copula() {
        for nodes in [13usize, 25] {
            let f = make_example_old3d(Mesh::uniform(3, nodes).unwrap()).unwrap();
            assert!(is_quasi_copula(&f, DEFAULT_TOL).passed);
            assert!(!is_copula(&f, DEFAULT_TOL).passed);
        }
    }

    #[test]
    fn central_cube_has_negative_volume() {
        // 13 nodes place 1/3 and 2/3 on the mesh, so the corner sum is exact
        let f = make_example_old3d(Mesh::uniform(3, 13).unwrap()).unwrap();
        let bx = NBox::new(vec![1.0 / 3.0; 3], vec![2.0 / 3.0; 3]).unwrap();
        let v = crate::axioms::box_volume(&f, &bx).unwrap();
        assert!((v + 1.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn counterexample_small_grid() {
        let report = reproduce_counterexample(17).unwrap();
        assert!(report.passed, "{report}");
        assert!((report.volume + 1.0 / 9.0).abs() < 1e-12);
        assert!((report.p_at_breakpoint - 123.0 / 900.0).abs() < 1e-15);
        assert!((report.p_at_upper_end - 120.0 / 900.0).abs() < 1e-15);
    }

    #[test]
    fn counterexample_rejects_coarse_grid() {
        assert!(reproduce_counterexample(8).is_err());
    }
}
