//! Globally adaptive Gauss-Kronrod (7/15) quadrature on finite and semi-infinite ranges.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

// Kronrod abscissae (positive half, descending), Kronrod weights and the embedded
// 7-point Gauss weights. Odd-indexed abscissae are the Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Change of variables applied before integrating over `(0, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EndpointTransform {
    /// Integrate in `r` directly.
    None,
    /// `r = t²`; turns an `r^p` endpoint into `t^{2p+1}`.
    #[default]
    SqrtPowerLaw,
    /// `r = t²` on `(0, 1]`, `r = -ln u` beyond.
    ExpTail,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub endpoint_transform: EndpointTransform,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            abs_tol: 1e-300,
            max_subdivisions: 2000,
            endpoint_transform: EndpointTransform::SqrtPowerLaw,
        }
    }
}

impl QuadratureSpec {
    pub fn with_transform(mut self, transform: EndpointTransform) -> Self {
        self.endpoint_transform = transform;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) || self.max_subdivisions < 1 {
            return Err(Error::InvalidArgument(
                "quadrature tolerances must be > 0 and max_subdivisions ≥ 1".into(),
            ));
        }
        Ok(())
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error_estimate: f64,
    pub subdivisions: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
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

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    let mut res_k = f_center * WGK[7];
    let mut res_g = f_center * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Segment { a, b, value, error }
}

/// Adaptive integration over `[a, b]`, starting from the given breakpoints.
fn adaptive<F: Fn(f64) -> f64>(f: &F, breakpoints: &[f64], spec: &QuadratureSpec) -> Result<Integral> {
    let mut heap: BinaryHeap<Segment> = breakpoints
        .windows(2)
        .map(|w| kronrod(f, w[0], w[1]))
        .collect();
    let mut subdivisions = heap.len();
    loop {
        let value: f64 = heap.iter().map(|s| s.value).sum();
        let error: f64 = heap.iter().map(|s| s.error).sum();
        if !value.is_finite() || !error.is_finite() {
            return Err(Error::QuadratureNonConvergence {
                value,
                error,
                subdivisions,
            });
        }
        if error <= spec.target(value) {
            return Ok(Integral {
                value,
                error_estimate: error,
                subdivisions,
            });
        }
        if subdivisions >= spec.max_subdivisions {
            return Err(Error::QuadratureNonConvergence {
                value,
                error,
                subdivisions,
            });
        }
        let worst = heap.pop().expect("heap never empties");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // Interval can no longer be split in floating point.
            return Err(Error::QuadratureNonConvergence {
                value,
                error,
                subdivisions,
            });
        }
        heap.push(kronrod(f, worst.a, mid));
        heap.push(kronrod(f, mid, worst.b));
        subdivisions += 1;
    }
}

/// Adaptive Gauss-Kronrod integration over a finite interval.
pub fn integrate_interval<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    spec.validate()?;
    adaptive(&f, &[a, b], spec)
}

/// Integrates `f` over `(0, ∞)`.
///
/// The integrand may behave like `r^p` (`p > -1`) at the origin and must decay at
/// infinity. The range is cut where the transformed integrand has fallen below
/// `1e-300` of its sampled peak; the neglected mass is added to the error estimate.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(f: F, spec: &QuadratureSpec) -> Result<Integral> {
    spec.validate()?;
    match spec.endpoint_transform {
        EndpointTransform::ExpTail => {
            // (0, 1] with r = t², the tail with u = e^{-r} on (0, 1/e].
            let head = adaptive(&|t: f64| 2.0 * t * f(t * t), &[0.0, 0.5, 1.0], spec)?;
            let g = |u: f64| {
                if u <= 0.0 {
                    0.0
                } else {
                    let v = f(-u.ln()) / u;
                    if v.is_finite() {
                        v
                    } else {
                        0.0
                    }
                }
            };
            let top = (-1.0_f64).exp();
            let breaks: Vec<f64> = (0..=16).map(|k| top * f64::from(k) / 16.0).collect();
            let tail = adaptive(&g, &breaks, spec)?;
            Ok(Integral {
                value: head.value + tail.value,
                error_estimate: head.error_estimate + tail.error_estimate,
                subdivisions: head.subdivisions + tail.subdivisions,
            })
        }
        EndpointTransform::None => dyadic(&f, spec),
        EndpointTransform::SqrtPowerLaw => dyadic(&|t: f64| 2.0 * t * f(t * t), spec),
    }
}

fn dyadic<G: Fn(f64) -> f64>(g: &G, spec: &QuadratureSpec) -> Result<Integral> {
    let mut breaks = vec![0.0, 0.5];
    let mut peak = 0.0_f64;
    let mut quiet = 0;
    let mut t = 0.5;
    let mut tail = f64::INFINITY;
    for _ in 0..64 {
        let next = 2.0 * t;
        // Sample the panel interior as well as its end so a narrow peak is seen.
        let mass = [0.5 * (t + next), next]
            .iter()
            .map(|&x| (g(x) * x).abs())
            .fold(0.0, f64::max);
        peak = peak.max(mass).max((g(t) * t).abs());
        breaks.push(next);
        t = next;
        if mass <= 1e-300 * peak || mass == 0.0 {
            quiet += 1;
            if quiet >= 2 {
                tail = mass;
                break;
            }
        } else {
            quiet = 0;
        }
    }
    if !tail.is_finite() {
        return Err(Error::QuadratureNonConvergence {
            value: f64::NAN,
            error: f64::INFINITY,
            subdivisions: 0,
        });
    }
    let mut out = adaptive(g, &breaks, spec)?;
    out.error_estimate += tail;
    Ok(out)
}
