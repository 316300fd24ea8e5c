//! Globally adaptive cubature over axis-aligned rectangles.
//!
//! Each region is integrated with the tensor 15-point Gauss–Kronrod rule;
//! the embedded tensor 7-point Gauss rule supplies the error estimate. The
//! region with the largest estimated error is split into four until the
//! summed error meets the tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

// Positive Kronrod abscissae on [-1, 1], largest first; the last is 0.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];

/// 15 nodes with Kronrod weights and (where present) Gauss weights.
fn rule() -> [(f64, f64, f64); 15] {
    let mut out = [(0.0, 0.0, 0.0); 15];
    for i in 0..7 {
        let wg = if i % 2 == 1 { WG[i / 2] } else { 0.0 };
        out[i] = (-XGK[i], WGK[i], wg);
        out[14 - i] = (XGK[i], WGK[i], wg);
    }
    out[7] = (0.0, WGK[7], WG[3]);
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x: (f64, f64),
    pub y: (f64, f64),
}

impl Rect {
    pub fn centered(width: f64, height: f64) -> Self {
        Self {
            x: (-0.5 * width, 0.5 * width),
            y: (-0.5 * height, 0.5 * height),
        }
    }

    fn split(&self) -> [Rect; 4] {
        let mx = 0.5 * (self.x.0 + self.x.1);
        let my = 0.5 * (self.y.0 + self.y.1);
        [
            Rect {
                x: (self.x.0, mx),
                y: (self.y.0, my),
            },
            Rect {
                x: (mx, self.x.1),
                y: (self.y.0, my),
            },
            Rect {
                x: (self.x.0, mx),
                y: (my, self.y.1),
            },
            Rect {
                x: (mx, self.x.1),
                y: (my, self.y.1),
            },
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Options {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_regions: usize,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 0.0,
            max_regions: 20_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub regions: usize,
    pub converged: bool,
}

struct Region {
    rect: Rect,
    value: f64,
    error: f64,
}

impl PartialEq for Region {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Region {}
impl PartialOrd for Region {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Region {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn apply_rule<F: Fn(f64, f64) -> f64>(f: &F, rect: Rect, nodes: &[(f64, f64, f64); 15]) -> Region {
    let (cx, hx) = (0.5 * (rect.x.0 + rect.x.1), 0.5 * (rect.x.1 - rect.x.0));
    let (cy, hy) = (0.5 * (rect.y.0 + rect.y.1), 0.5 * (rect.y.1 - rect.y.0));
    let mut kronrod = 0.0;
    let mut gauss = 0.0;
    for &(u, wku, wgu) in nodes {
        let x = cx + hx * u;
        for &(v, wkv, wgv) in nodes {
            let fx = f(x, cy + hy * v);
            kronrod += wku * wkv * fx;
            gauss += wgu * wgv * fx;
        }
    }
    let jac = hx * hy;
    Region {
        rect,
        value: kronrod * jac,
        error: ((kronrod - gauss) * jac).abs(),
    }
}

/// Integrates `f(x, y)` over `rect`.
pub fn integrate<F: Fn(f64, f64) -> f64>(f: F, rect: Rect, opts: Options) -> Estimate {
    let nodes = rule();
    let first = apply_rule(&f, rect, &nodes);
    let mut value = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);

    loop {
        let target = opts.abs_tol.max(opts.rel_tol * value.abs());
        if error <= target {
            return Estimate {
                value,
                error,
                regions: heap.len(),
                converged: true,
            };
        }
        if heap.len() + 3 > opts.max_regions {
            return Estimate {
                value,
                error,
                regions: heap.len(),
                converged: false,
            };
        }
        let worst = heap.pop().expect("heap is never empty");
        value -= worst.value;
        error -= worst.error;
        for child in worst.rect.split() {
            let r = apply_rule(&f, child, &nodes);
            value += r.value;
            error += r.error;
            heap.push(r);
        }
        // Re-sum periodically so cancellation in the running totals cannot drift.
        if heap.len() % 256 == 1 {
            value = heap.iter().map(|r| r.value).sum();
            error = heap.iter().map(|r| r.error).sum();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let r = Rect {
            x: (0.0, 2.0),
            y: (-1.0, 3.0),
        };
        let est = integrate(|x, y| x * x * y + 3.0, r, Options::default());
        // ∫0^2 x² dx · ∫-1^3 y dy + 3·8 = (8/3)·4 + 24
        assert!((est.value - (32.0 / 3.0 + 24.0)).abs() < 1e-12);
        assert!(est.converged);
        assert_eq!(est.regions, 1);
    }

    #[test]
    fn gaussian_bump() {
        let r = Rect {
            x: (-6.0, 6.0),
            y: (-6.0, 6.0),
        };
        let est = integrate(|x, y| (-(x * x + y * y)).exp(), r, Options::default());
        assert!((est.value - std::f64::consts::PI).abs() < 1e-10);
    }

    #[test]
    fn cone_over_unit_square() {
        let est = integrate(
            |y, z| y.hypot(z),
            Rect::centered(2.0, 2.0),
            Options::default(),
        );
        let exact = 4.0 / 3.0 * (2f64.sqrt() + 1f64.asinh());
        assert!(((est.value - exact) / exact).abs() < 1e-10);
        assert!(est.converged);
    }

    #[test]
    fn reports_non_convergence() {
        let opts = Options {
            rel_tol: 1e-15,
            abs_tol: 0.0,
            max_regions: 8,
        };
        let est = integrate(|y, z| y.hypot(z), Rect::centered(2.0, 2.0), opts);
        assert!(!est.converged);
    }
}
