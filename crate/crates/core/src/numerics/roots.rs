//! Bracketing root finder: a uniform sign-change scan followed by bisection.

use rayon::prelude::*;

#[derive(Clone, Debug)]
pub struct RootOptions {
    /// Scan resolution in sample points per unit length.
    pub points_per_unit: f64,
    /// Bisection stops once the bracket is narrower than `x_tol·max(1, |x|)`.
    pub x_tol: f64,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self {
            points_per_unit: 1e3,
            x_tol: 1e-14,
        }
    }
}

/// Roots found in a bracket, ascending.
#[derive(Clone, Debug, Default)]
pub struct RootScan {
    pub roots: Vec<f64>,
    /// `|f(root)|` for each root.
    pub residuals: Vec<f64>,
    /// Sub-bracket `(a, b)` with `f(a)·f(b) ≤ 0` enclosing each root.
    pub brackets: Vec<(f64, f64)>,
    pub requested: usize,
}

impl RootScan {
    /// False when fewer than the requested number of roots were found.
    pub fn is_complete(&self) -> bool {
        self.roots.len() >= self.requested
    }
}

/// Finds up to `count` roots of `f` in `[lo, hi]`, smallest first.
///
/// The function is sampled on a uniform grid (evaluated in parallel), every
/// sign change is refined by bisection, and roots closer than the bisection
/// tolerance are merged.
pub fn find_roots<F>(f: F, lo: f64, hi: f64, count: usize, opts: &RootOptions) -> RootScan
where
    F: Fn(f64) -> f64 + Sync,
{
    let mut scan = RootScan {
        requested: count,
        ..Default::default()
    };
    if !(lo < hi) || count == 0 {
        return scan;
    }
    let intervals = (((hi - lo) * opts.points_per_unit).ceil() as usize).max(1);
    let step = (hi - lo) / intervals as f64;
    let grid: Vec<f64> = (0..=intervals)
        .map(|k| {
            if k == intervals {
                hi
            } else {
                lo + k as f64 * step
            }
        })
        .collect();
    let values: Vec<f64> = grid.par_iter().map(|&x| f(x)).collect();

    for k in 0..intervals {
        if scan.roots.len() >= count {
            break;
        }
        let (a, b) = (grid[k], grid[k + 1]);
        let (fa, fb) = (values[k], values[k + 1]);
        if !fa.is_finite() || !fb.is_finite() {
            continue;
        }
        let (root, bracket) = if fa == 0.0 {
            (a, (a, a))
        } else if fa * fb < 0.0 {
            bisect(&f, a, b, fa, opts.x_tol)
        } else if fb == 0.0 && k + 1 == intervals {
            (b, (b, b))
        } else {
            continue;
        };
        let tol = opts.x_tol * root.abs().max(1.0) * 4.0;
        if scan.roots.last().is_some_and(|&r| (root - r).abs() <= tol) {
            continue;
        }
        scan.residuals.push(f(root).abs());
        scan.roots.push(root);
        scan.brackets.push(bracket);
    }
    scan
}

fn bisect<F: Fn(f64) -> f64>(
    f: &F,
    mut a: f64,
    mut b: f64,
    mut fa: f64,
    x_tol: f64,
) -> (f64, (f64, f64)) {
    let mut fb = f(b);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b || (b - a) <= x_tol * mid.abs().max(1.0) {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return (mid, (mid, mid));
        }
        if fa * fm < 0.0 {
            b = mid;
            fb = fm;
        } else {
            a = mid;
            fa = fm;
        }
    }
    let root = if fa.abs() <= fb.abs() { a } else { b };
    (root, (a, b))
}
