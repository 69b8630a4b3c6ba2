//! Globally adaptive Gauss–Kronrod (7/15) quadrature for complex integrands.
//!
//! The integrand may itself be an integral and report its own error; those
//! inner errors are integrated with the Kronrod weights and added to the
//! interval error, so nested calls give an error bound for the whole
//! multidimensional integral.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

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
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// Gauss weights for XGK[1], XGK[3], XGK[5] and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    /// Subdivision budget per call.
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 1e-13,
            rel: 1e-6,
            max_intervals: 400,
        }
    }
}

impl Tolerance {
    pub fn target(&self, value: Complex64) -> f64 {
        self.abs.max(self.rel * value.norm())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

#[derive(Clone, Copy, Debug)]
struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    /// Error of the rule itself; the only part subdivision can reduce.
    error: f64,
    /// Integrated error reported by the integrand.
    inner: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F>(f: &mut F, a: f64, b: f64) -> Segment
where
    F: FnMut(f64) -> (Complex64, f64),
{
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut fv = [Complex64::new(0.0, 0.0); 15];
    let mut inner = 0.0;
    let (fc, ec) = f(centre);
    fv[7] = fc;
    inner += WGK[7] * ec;
    for j in 0..7 {
        let dx = half * XGK[j];
        let (f1, e1) = f(centre - dx);
        let (f2, e2) = f(centre + dx);
        fv[j] = f1;
        fv[14 - j] = f2;
        inner += WGK[j] * (e1 + e2);
    }
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        kron += (fv[j] + fv[14 - j]) * WGK[j];
        if j % 2 == 1 {
            gauss += (fv[j] + fv[14 - j]) * WG[j / 2];
        }
    }
    let mean = kron * 0.5;
    let mut resasc = WGK[7] * (fc - mean).norm();
    for j in 0..7 {
        resasc += WGK[j] * ((fv[j] - mean).norm() + (fv[14 - j] - mean).norm());
    }
    let value = kron * half;
    let resasc = resasc * half.abs();
    let diff = ((kron - gauss) * half).norm();
    // QUADPACK's scaling of the Gauss/Kronrod difference.
    let mut error = diff;
    if resasc > 0.0 && diff > 0.0 {
        error = resasc * (200.0 * diff / resasc).powf(1.5).min(1.0);
    }
    let resabs = fv.iter().zip(WGK.iter().chain(WGK[..7].iter().rev())).map(|(v, w)| w * v.norm()).sum::<f64>() * half.abs();
    let floor = 50.0 * f64::EPSILON * resabs;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) && error < floor {
        error = floor;
    }
    Segment {
        a,
        b,
        value,
        error,
        inner: inner * half.abs(),
    }
}

/// Integrates `f` over `[a, b]`. `f` returns the integrand value and its own
/// absolute error (zero for closed-form integrands). `breakpoints` inside the
/// interval seed the initial partition.
pub fn integrate<F>(mut f: F, a: f64, b: f64, breakpoints: &[f64], tol: &Tolerance) -> QuadResult
where
    F: FnMut(f64) -> (Complex64, f64),
{
    let mut edges = vec![a];
    let mut inner: Vec<f64> = breakpoints.iter().copied().filter(|&x| x > a && x < b).collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    edges.extend(inner);
    edges.push(b);

    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    for w in edges.windows(2) {
        heap.push(kronrod(&mut f, w[0], w[1]));
        evaluations += 15;
    }
    let totals = |heap: &BinaryHeap<Segment>| {
        heap.iter().fold((Complex64::new(0.0, 0.0), 0.0, 0.0), |(v, e, i), s| (v + s.value, e + s.error, i + s.inner))
    };
    let (mut value, mut error, mut inner) = totals(&heap);
    let mut converged = error + inner <= tol.target(value);
    // Splitting cannot reduce the inner part, so stop once it alone exceeds
    // the target.
    while !converged && inner < tol.target(value) && heap.len() < tol.max_intervals {
        let worst = heap.pop().expect("non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // Interval too small to split further.
            heap.push(worst);
            break;
        }
        let left = kronrod(&mut f, worst.a, mid);
        let right = kronrod(&mut f, mid, worst.b);
        evaluations += 30;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        inner += left.inner + right.inner - worst.inner;
        heap.push(left);
        heap.push(right);
        converged = error + inner <= tol.target(value);
    }
    let (v, e, i) = totals(&heap);
    value = v;
    let error = e + i;
    converged = converged || error <= tol.target(value);
    QuadResult {
        value,
        error,
        evaluations,
        converged,
    }
}
