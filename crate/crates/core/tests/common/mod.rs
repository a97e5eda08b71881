//! Shared fixtures for the integration suites: brute-force enumeration
//! oracles on quantized lattices and random quasi-copula / domain builders.
#![allow(dead_code)]

use rand::Rng;

use quasicopula::extension::{AxisDomain, ProductDomain};
use quasicopula::{examples, NBox};

/// A function built from convex combinations and min/max blends of the three
/// reference quasi-copulas (plus, for n = 3, the counterexample generator).
/// Closed under all four quasi-copula axioms by construction.
pub enum Blend {
    Convex([f64; 3]),
    Min(Box<Blend>, Box<Blend>),
    Max(Box<Blend>, Box<Blend>),
    Old3d,
}

impl Blend {
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Blend::Convex([cw, cm, cp]) => {
                cw * examples::frechet_w(x)
                    + cm * examples::frechet_m(x)
                    + cp * examples::product_pi(x)
            }
            Blend::Min(a, b) => a.eval(x).min(b.eval(x)),
            Blend::Max(a, b) => a.eval(x).max(b.eval(x)),
            Blend::Old3d => examples::old3d_value(x[0], x[1], x[2]),
        }
    }
}

fn random_convex(rng: &mut impl Rng) -> Blend {
    let raw = [rng.gen::<f64>(), rng.gen::<f64>(), rng.gen::<f64>()];
    let total: f64 = raw.iter().sum();
    Blend::Convex([raw[0] / total, raw[1] / total, raw[2] / total])
}

pub fn random_blend(n: usize, rng: &mut impl Rng) -> Blend {
    match rng.gen_range(0..4) {
        0 => random_convex(rng),
        1 => Blend::Min(Box::new(random_convex(rng)), Box::new(random_convex(rng))),
        2 => Blend::Max(Box::new(random_convex(rng)), Box::new(random_convex(rng))),
        _ if n == 3 && rng.gen_bool(0.5) => Blend::Old3d,
        _ => random_convex(rng),
    }
}

/// A box inside the unit cube with per-axis width at least 0.1.
pub fn random_box(n: usize, rng: &mut impl Rng) -> NBox {
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for _ in 0..n {
        let lo = rng.gen_range(0.0..0.85);
        let hi = rng.gen_range((lo + 0.1)..1.0f64.min(lo + 0.9));
        a.push(lo);
        b.push(hi);
    }
    NBox::new(a, b).unwrap()
}

/// A product domain whose axes mix the full interval, two-interval splits,
/// inner intervals between corner points, and corner-only axes.
pub fn random_domain(n: usize, rng: &mut impl Rng) -> ProductDomain {
    let axes = (0..n)
        .map(|_| match rng.gen_range(0..5) {
            0 => AxisDomain::full(),
            1 => {
                let u = rng.gen_range(0.15..0.45);
                let v = rng.gen_range((u + 0.1)..0.9);
                AxisDomain::new(vec![(0.0, u), (v, 1.0)]).unwrap()
            }
            2 => {
                let u = rng.gen_range(0.1..0.5);
                let v = rng.gen_range((u + 0.1)..0.9);
                AxisDomain::new(vec![(0.0, 0.0), (u, v), (1.0, 1.0)]).unwrap()
            }
            3 => AxisDomain::new(vec![(0.0, 0.0), (1.0, 1.0)]).unwrap(),
            _ => {
                let p = rng.gen_range(0.2..0.8);
                AxisDomain::new(vec![(0.0, 0.0), (p, p), (1.0, 1.0)]).unwrap()
            }
        })
        .collect();
    ProductDomain::new(axes).unwrap()
}

/// Envelopes over all monotone completions of a segment with quantized
/// values: `nodes` equally spaced nodes, per-step increments of at most
/// `max_step` quanta, fixed endpoint values `alpha_q` and `beta_q` (in
/// quanta). Returns per-node (lower, upper) envelopes in quanta, or `None`
/// when no completion exists.
pub fn segment_envelopes_by_enumeration(
    alpha_q: i64,
    beta_q: i64,
    nodes: usize,
    max_step: i64,
) -> Option<(Vec<i64>, Vec<i64>)> {
    let mut lower = vec![i64::MAX; nodes];
    let mut upper = vec![i64::MIN; nodes];
    let mut current = vec![alpha_q; nodes];
    let mut any = false;
    enumerate_segment(
        &mut current,
        1,
        beta_q,
        max_step,
        &mut lower,
        &mut upper,
        &mut any,
    );
    any.then_some((lower, upper))
}

fn enumerate_segment(
    current: &mut Vec<i64>,
    pos: usize,
    beta_q: i64,
    max_step: i64,
    lower: &mut [i64],
    upper: &mut [i64],
    any: &mut bool,
) {
    if pos == current.len() {
        if current[pos - 1] == beta_q {
            *any = true;
            for (i, &v) in current.iter().enumerate() {
                lower[i] = lower[i].min(v);
                upper[i] = upper[i].max(v);
            }
        }
        return;
    }
    let remaining = (current.len() - 1 - pos) as i64;
    for step in 0..=max_step {
        let v = current[pos - 1] + step;
        // prune: beta must stay reachable monotonically within the step cap
        if v > beta_q || v + remaining * max_step < beta_q {
            continue;
        }
        current[pos] = v;
        enumerate_segment(current, pos + 1, beta_q, max_step, lower, upper, any);
    }
}

/// Envelopes over all grounded/neutral monotone 1-Lipschitz grids on the
/// 5x5 lattice with values quantized to 1/8 (node spacing 1/4, so steps of
/// at most 2 quanta). The zero row/column and the two neutral margins are
/// forced; the 3x3 interior is enumerated exhaustively.
/// Returns (lower, upper) envelopes in quanta, indexed `[i][j]`.
/// Envelopes over all monotone 1-Lipschitz completions of a partially fixed
/// 2-d grid with quantized values: `fixed` is row-major over `shape`,
/// `Some(v)` pinning a node to `v` quanta, and adjacent values may differ by
/// at most `max_step` quanta. Returns (lower, upper) envelopes in quanta.
pub fn grid_envelopes_by_enumeration(
    fixed: &[Option<i64>],
    shape: (usize, usize),
    max_step: i64,
) -> (Vec<i64>, Vec<i64>) {
    let (rows, cols) = shape;
    assert_eq!(fixed.len(), rows * cols);
    let mut grid: Vec<i64> = fixed.iter().map(|v| v.unwrap_or(0)).collect();
    let mut lower = vec![i64::MAX; rows * cols];
    let mut upper = vec![i64::MIN; rows * cols];
    dfs_grid(
        fixed, &mut grid, 0, rows, cols, max_step, &mut lower, &mut upper,
    );
    assert!(
        lower.iter().all(|&v| v != i64::MAX),
        "no completion exists"
    );
    (lower, upper)
}

#[allow(clippy::too_many_arguments)]
fn dfs_grid(
    fixed: &[Option<i64>],
    grid: &mut Vec<i64>,
    cell: usize,
    rows: usize,
    cols: usize,
    max_step: i64,
    lower: &mut [i64],
    upper: &mut [i64],
) {
    if cell == rows * cols {
        for (i, &v) in grid.iter().enumerate() {
            lower[i] = lower[i].min(v);
            upper[i] = upper[i].max(v);
        }
        return;
    }
    let (i, j) = (cell / cols, cell % cols);
    // feasible range against already-assigned up/left and fixed down/right
    let mut lo = i64::MIN;
    let mut hi = i64::MAX;
    let mut clamp = |bound: i64, before: bool| {
        if before {
            lo = lo.max(bound);
            hi = hi.min(bound + max_step);
        } else {
            hi = hi.min(bound);
            lo = lo.max(bound - max_step);
        }
    };
    if i > 0 {
        clamp(grid[cell - cols], true);
    }
    if j > 0 {
        clamp(grid[cell - 1], true);
    }
    if i + 1 < rows {
        if let Some(v) = fixed[cell + cols] {
            clamp(v, false);
        }
    }
    if j + 1 < cols {
        if let Some(v) = fixed[cell + 1] {
            clamp(v, false);
        }
    }
    match fixed[cell] {
        Some(v) => {
            if lo <= v && v <= hi {
                grid[cell] = v;
                dfs_grid(fixed, grid, cell + 1, rows, cols, max_step, lower, upper);
            }
        }
        None => {
            for v in lo..=hi {
                grid[cell] = v;
                dfs_grid(fixed, grid, cell + 1, rows, cols, max_step, lower, upper);
            }
        }
    }
}

#[allow(clippy::needless_range_loop)]
pub fn corner_grid_envelopes_by_enumeration() -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let mut grid = [[0i64; 5]; 5];
    for t in 0..5 {
        grid[t][0] = 0;
        grid[0][t] = 0;
        grid[4][t] = 2 * t as i64;
        grid[t][4] = 2 * t as i64;
    }
    let mut lower = vec![vec![i64::MAX; 5]; 5];
    let mut upper = vec![vec![i64::MIN; 5]; 5];
    enumerate_interior(&mut grid, 0, &mut lower, &mut upper);
    (lower, upper)
}

fn enumerate_interior(
    grid: &mut [[i64; 5]; 5],
    cell: usize,
    lower: &mut [Vec<i64>],
    upper: &mut [Vec<i64>],
) {
    if cell == 9 {
        for i in 0..5 {
            for j in 0..5 {
                lower[i][j] = lower[i][j].min(grid[i][j]);
                upper[i][j] = upper[i][j].max(grid[i][j]);
            }
        }
        return;
    }
    let (i, j) = (1 + cell / 3, 1 + cell % 3);
    let lo = grid[i - 1][j].max(grid[i][j - 1]);
    let hi = (grid[i - 1][j] + 2).min(grid[i][j - 1] + 2);
    for v in lo..=hi {
        // constraints against the fixed upper boundaries
        if i == 3 && !(grid[4][j] >= v && grid[4][j] - v <= 2) {
            continue;
        }
        if j == 3 && !(grid[i][4] >= v && grid[i][4] - v <= 2) {
            continue;
        }
        grid[i][j] = v;
        enumerate_interior(grid, cell + 1, lower, upper);
    }
}
