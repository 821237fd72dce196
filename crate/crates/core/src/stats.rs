//! Numeric primitives: the standard normal distribution, order statistics,
//! central moments and a Gaussian kernel density estimate.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;
const SQRT_32: f64 = 5.656_854_249_492_381;

/// Standard normal distribution function Φ(z).
pub fn normal_cdf(z: f64) -> Result<f64> {
    if !z.is_finite() {
        return Err(Error::Domain {
            what: "normal_cdf argument",
            value: z,
        });
    }
    Ok(phi(z))
}

/// Inverse of the standard normal distribution function.
pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain {
            what: "normal_quantile probability",
            value: p,
        });
    }
    Ok(phi_inv(p))
}

/// Φ(z) for finite or infinite z. Cody's rational Chebyshev approximation
/// (the algorithm behind R's `pnorm`), accurate to roughly 1e-16.
pub(crate) fn phi(z: f64) -> f64 {
    let (lower, _) = phi_both(z);
    lower
}

/// Upper tail 1 − Φ(z), computed without cancellation.
pub(crate) fn phi_upper(z: f64) -> f64 {
    let (_, upper) = phi_both(z);
    upper
}

#[allow(clippy::excessive_precision)]
fn phi_both(x: f64) -> (f64, f64) {
    const A: [f64; 5] = [
        2.235_252_035_460_683_9,
        161.028_231_068_555_88,
        1_067.689_485_460_371,
        18_154.981_253_343_56,
        0.065_682_337_918_207_45,
    ];
    const B: [f64; 4] = [
        47.202_581_904_688_24,
        976.098_551_737_776_7,
        10_260.932_208_618_978,
        45_507.789_335_026_73,
    ];
    const C: [f64; 9] = [
        0.398_941_512_088_134_66,
        8.883_149_794_388_376,
        93.506_656_132_177_86,
        597.270_276_394_800_3,
        2_494.537_585_290_372_7,
        6_848.190_450_536_283,
        11_602.651_437_647_35,
        9_842.714_838_383_978,
        1.076_557_677_372_019_2e-8,
    ];
    const D: [f64; 8] = [
        22.266_688_044_328_116,
        235.387_901_782_625,
        1_519.377_599_407_554_8,
        6_485.558_298_266_761,
        18_615.571_640_885_098,
        34_900.952_721_145_98,
        38_912.003_286_093_27,
        19_685.429_676_859_99,
    ];
    const P: [f64; 6] = [
        0.215_898_534_057_957,
        0.127_401_161_160_247_36,
        0.022_235_277_870_649_807,
        0.001_421_619_193_227_893_5,
        2.911_287_495_116_879e-5,
        0.023_073_441_764_940_173,
    ];
    const Q: [f64; 5] = [
        1.284_260_096_144_911_2,
        0.468_238_212_480_865_1,
        0.065_988_137_868_928_55,
        0.003_782_396_332_027_582_4,
        7.297_515_550_839_662e-5,
    ];

    if x.is_nan() {
        return (f64::NAN, f64::NAN);
    }
    let y = x.abs();
    if y <= 0.674_489_75 {
        let (mut xnum, mut xden) = (0.0, 0.0);
        if y > f64::EPSILON * 0.5 {
            let xsq = x * x;
            xnum = A[4] * xsq;
            xden = xsq;
            for i in 0..3 {
                xnum = (xnum + A[i]) * xsq;
                xden = (xden + B[i]) * xsq;
            }
        }
        let t = x * (xnum + A[3]) / (xden + B[3]);
        return (0.5 + t, 0.5 - t);
    }

    // Tail mass on the side of |x|, split exp(-x^2/2) to limit rounding.
    let small_tail = if y <= SQRT_32 {
        let mut xnum = C[8] * y;
        let mut xden = y;
        for i in 0..7 {
            xnum = (xnum + C[i]) * y;
            xden = (xden + D[i]) * y;
        }
        let t = (xnum + C[7]) / (xden + D[7]);
        gauss_tail_factor(y) * t
    } else if y < 40.0 {
        let xsq = 1.0 / (x * x);
        let mut xnum = P[5] * xsq;
        let mut xden = xsq;
        for i in 0..4 {
            xnum = (xnum + P[i]) * xsq;
            xden = (xden + Q[i]) * xsq;
        }
        let t = xsq * (xnum + P[4]) / (xden + Q[4]);
        let t = (FRAC_1_SQRT_2PI - t) / y;
        gauss_tail_factor(y) * t
    } else {
        0.0
    };
    if x > 0.0 {
        (1.0 - small_tail, small_tail)
    } else {
        (small_tail, 1.0 - small_tail)
    }
}

fn gauss_tail_factor(y: f64) -> f64 {
    let ysq = (y * 16.0).trunc() / 16.0;
    let del = (y - ysq) * (y + ysq);
    (-ysq * ysq * 0.5).exp() * (-del * 0.5).exp()
}

/// Acklam's rational approximation followed by one Halley step.
pub(crate) fn phi_inv(p: f64) -> f64 {
    if p == 0.5 {
        return 0.0;
    }
    // Work in the lower tail so Φ(x) − q keeps relative accuracy.
    let (q, sign) = if p < 0.5 { (p, 1.0) } else { (1.0 - p, -1.0) };
    let mut x = acklam_lower(q);
    let e = phi(x) - q;
    let u = e * (2.0 * PI).sqrt() * (0.5 * x * x).exp();
    x -= u / (1.0 + 0.5 * x * u);
    sign * x
}

#[allow(clippy::excessive_precision)]
fn acklam_lower(q: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.02425;

    if q < P_LOW {
        let r = (-2.0 * q.ln()).sqrt();
        (((((C[0] * r + C[1]) * r + C[2]) * r + C[3]) * r + C[4]) * r + C[5])
            / ((((D[0] * r + D[1]) * r + D[2]) * r + D[3]) * r + 1.0)
    } else {
        let r = q - 0.5;
        let s = r * r;
        (((((A[0] * s + A[1]) * s + A[2]) * s + A[3]) * s + A[4]) * s + A[5]) * r
            / (((((B[0] * s + B[1]) * s + B[2]) * s + B[3]) * s + B[4]) * s + 1.0)
    }
}

/// Observations in non-decreasing order.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedSample {
    values: Vec<f64>,
}

impl SortedSample {
    /// Minimum size accepted: every statistic in this crate needs n >= 3.
    pub const MIN_LEN: usize = 3;

    pub fn new(values: &[f64]) -> Result<Self> {
        Self::from_vec(values.to_vec())
    }

    /// Takes ownership and sorts in place. Sorting is stable, ties are kept.
    pub fn from_vec(mut values: Vec<f64>) -> Result<Self> {
        check_finite(&values)?;
        if values.len() < Self::MIN_LEN {
            return Err(Error::UnsupportedSize {
                test: "sorted sample",
                n: values.len(),
                min: Self::MIN_LEN,
                max: usize::MAX,
            });
        }
        if !is_sorted(&values) {
            values.sort_by(f64::total_cmp);
        }
        Ok(SortedSample { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// Sample quantile with linear interpolation between order statistics
    /// (Hyndman-Fan type 7).
    pub fn quantile(&self, prob: f64) -> f64 {
        let n = self.values.len();
        let h = (n - 1) as f64 * prob.clamp(0.0, 1.0);
        let lo = h.floor() as usize;
        let hi = (lo + 1).min(n - 1);
        let frac = h - lo as f64;
        self.values[lo] + frac * (self.values[hi] - self.values[lo])
    }
}

pub(crate) fn is_sorted(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[0] <= w[1])
}

pub(crate) fn check_finite(values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    match values.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFinite {
            index,
            value: values[index],
        }),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentSummary {
    pub mean: f64,
    /// s², divisor n − 1.
    pub variance_unbiased: f64,
    /// m₃ / m₂^{3/2}, central moments with divisor n.
    pub skewness: f64,
    /// m₄ / m₂², not excess.
    pub kurtosis: f64,
}

impl MomentSummary {
    pub fn std_dev(&self) -> f64 {
        self.variance_unbiased.sqrt()
    }
}

pub fn moments(values: &[f64]) -> Result<MomentSummary> {
    check_finite(values)?;
    let n = values.len();
    if n < 3 {
        return Err(Error::UnsupportedSize {
            test: "moments",
            n,
            min: 3,
            max: usize::MAX,
        });
    }
    let nf = n as f64;
    let mean = values.iter().sum::<f64>() / nf;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &v in values {
        let d = v - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    if !(m2 > 0.0) || is_constant(values) {
        return Err(Error::DegenerateSample);
    }
    let variance_unbiased = m2 / (nf - 1.0);
    m2 /= nf;
    m3 /= nf;
    m4 /= nf;
    Ok(MomentSummary {
        mean,
        variance_unbiased,
        skewness: m3 / m2.powf(1.5),
        kurtosis: m4 / (m2 * m2),
    })
}

pub(crate) fn is_constant(values: &[f64]) -> bool {
    values.iter().all(|&v| v == values[0])
}

/// Mean and unbiased standard deviation, failing on constant input.
pub(crate) fn mean_sd(values: &[f64]) -> Result<(f64, f64)> {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    let sd = (ss / (n - 1.0)).sqrt();
    if !(sd > 0.0) || !sd.is_finite() || is_constant(values) {
        return Err(Error::DegenerateSample);
    }
    Ok((mean, sd))
}

/// Gaussian kernel density estimate on an even grid spanning
/// `[min - 3h, max + 3h]`, with Silverman's bandwidth
/// `h = 0.9 min(s, IQR / 1.34) n^(-1/5)`.
pub fn kde(values: &[f64], grid_points: usize) -> Result<Vec<(f64, f64)>> {
    if grid_points < 2 {
        return Err(Error::InvalidConfig(format!(
            "kde needs at least 2 grid points, got {grid_points}"
        )));
    }
    let sorted = SortedSample::new(values)?;
    let h = silverman_bandwidth(&sorted)?;
    let xs = sorted.values();
    let lo = sorted.min() - 3.0 * h;
    let hi = sorted.max() + 3.0 * h;
    let dx = (hi - lo) / (grid_points - 1) as f64;
    let norm = FRAC_1_SQRT_2PI / (xs.len() as f64 * h);
    Ok((0..grid_points)
        .map(|i| {
            let x = lo + dx * i as f64;
            let dens: f64 = xs
                .iter()
                .map(|&xi| {
                    let u = (x - xi) / h;
                    (-0.5 * u * u).exp()
                })
                .sum();
            (x, dens * norm)
        })
        .collect())
}

pub fn silverman_bandwidth(sorted: &SortedSample) -> Result<f64> {
    let (_, sd) = mean_sd(sorted.values())?;
    let iqr = sorted.quantile(0.75) - sorted.quantile(0.25);
    let spread = if iqr > 0.0 { sd.min(iqr / 1.34) } else { sd };
    Ok(0.9 * spread * (sorted.len() as f64).powf(-0.2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cdf_reference_points() {
        assert_eq!(normal_cdf(0.0).unwrap(), 0.5);
        assert!((normal_cdf(1.959964).unwrap() - 0.975).abs() < 1e-6);
        for z in [-7.5, -3.0, -1.2, -0.3, 0.7, 2.5, 6.0] {
            let a = normal_cdf(z).unwrap();
            let b = normal_cdf(-z).unwrap();
            assert!((a + b - 1.0).abs() < 1e-15, "z = {z}");
        }
    }

    #[test]
    fn cdf_rejects_non_finite() {
        assert!(normal_cdf(f64::NAN).is_err());
        assert!(normal_cdf(f64::INFINITY).is_err());
    }

    #[test]
    fn cdf_matches_erfc_oracle() {
        // statrs erfc is an independent implementation, good to ~1e-9 relative.
        for i in -400..=400 {
            let z = i as f64 * 0.025;
            let oracle = 0.5 * statrs::function::erf::erfc(-z / std::f64::consts::SQRT_2);
            let got = normal_cdf(z).unwrap();
            assert!(
                (got - oracle).abs() <= 1e-9 * oracle,
                "z = {z}: {got} vs {oracle}"
            );
        }
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn cdf_matches_high_precision_values() {
        // 40-digit arbitrary-precision evaluations.
        let table = [
            (-37.0, 5.725_571_222_524_576_8e-300),
            (-20.0, 2.753_624_118_606_233_7e-89),
            (-8.0, 6.220_960_574_271_784_1e-16),
            (-5.0, 2.866_515_718_791_939_1e-7),
            (-2.0, 0.022_750_131_948_179_207),
            (-1.0, 0.158_655_253_931_457_05),
            (-0.5, 0.308_537_538_725_986_9),
            (0.3, 0.617_911_422_188_952_6),
            (1.5, 0.933_192_798_731_141_9),
            (4.0, 0.999_968_328_758_166_9),
        ];
        for (z, want) in table {
            let got = normal_cdf(z).unwrap();
            assert!(
                (got - want).abs() <= 1e-14 * want,
                "z = {z}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn quantile_reference_points() {
        assert_eq!(normal_quantile(0.5).unwrap(), 0.0);
        assert!((normal_quantile(0.975).unwrap() - 1.959964).abs() < 1e-6);
        // Dyadic p keeps 1 - p exact.
        for p in [2f64.powi(-33), 2f64.powi(-10), 0.015625, 0.3125, 0.4375] {
            let s = normal_quantile(p).unwrap() + normal_quantile(1.0 - p).unwrap();
            assert!(s.abs() < 1e-9, "p = {p}: {s}");
        }
        for p in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(normal_quantile(p).is_err());
        }
    }

    #[test]
    fn moments_of_one_to_five() {
        let m = moments(&[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        assert!((m.mean - 3.0).abs() < 1e-15);
        assert!((m.variance_unbiased - 2.5).abs() < 1e-15);
        assert!(m.skewness.abs() < 1e-12);
        assert!((m.kurtosis - 1.7).abs() < 1e-12);
    }

    #[test]
    fn moments_reject_constant() {
        assert_eq!(moments(&[2.0; 6]), Err(Error::DegenerateSample));
    }

    #[test]
    fn sorted_sample_orders_and_rejects_small() {
        let s = SortedSample::new(&[3.0, -1.0, 2.0, 2.0]).unwrap();
        assert_eq!(s.values(), &[-1.0, 2.0, 2.0, 3.0]);
        assert!(SortedSample::new(&[1.0, 2.0]).is_err());
        assert!(SortedSample::new(&[1.0, f64::NAN, 2.0]).is_err());
    }

    #[test]
    fn kde_integrates_to_one_and_is_non_negative() {
        let xs: Vec<f64> = (0..40)
            .map(|i| ((i * 37) % 23) as f64 * 0.7 + i as f64 * 0.1)
            .collect();
        let grid = kde(&xs, 800).unwrap();
        assert!(grid.iter().all(|&(_, d)| d >= 0.0));
        let area: f64 = grid
            .windows(2)
            .map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1))
            .sum();
        assert!((area - 1.0).abs() < 0.02, "area {area}");
    }

    #[test]
    fn kde_tighter_cluster_has_taller_peak() {
        let tight: Vec<f64> = (0..30).map(|i| 10.0 + 0.01 * i as f64).collect();
        let wide: Vec<f64> = (0..30).map(|i| 10.0 + 1.0 * i as f64).collect();
        let peak = |v: &[f64]| kde(v, 200).unwrap().iter().map(|p| p.1).fold(0.0, f64::max);
        assert!(peak(&tight) > peak(&wide));
    }

    #[test]
    fn kde_rejects_degenerate() {
        assert_eq!(kde(&[0.0; 10], 50), Err(Error::DegenerateSample));
    }

    proptest! {
        #[test]
        fn quantile_inverts_cdf(p in 0.001f64..0.999) {
            let x = normal_quantile(p).unwrap();
            prop_assert!((normal_cdf(x).unwrap() - p).abs() <= 1e-9);
        }

        #[test]
        fn cdf_is_monotone(a in -9.0f64..9.0, d in 0.0f64..3.0) {
            prop_assert!(phi(a) <= phi(a + d));
        }

        #[test]
        fn shape_moments_location_scale_invariant(
            xs in proptest::collection::vec(-50.0f64..50.0, 5..40),
            c in -100.0f64..100.0,
            a in 0.1f64..10.0,
        ) {
            prop_assume!(!is_constant(&xs));
            let base = moments(&xs).unwrap();
            prop_assume!(base.variance_unbiased > 1e-6);
            let shifted: Vec<f64> = xs.iter().map(|x| x + c).collect();
            let scaled: Vec<f64> = xs.iter().map(|x| x * a).collect();
            let ms = moments(&shifted).unwrap();
            let mc = moments(&scaled).unwrap();
            prop_assert!((ms.skewness - base.skewness).abs() < 1e-9);
            prop_assert!((ms.kurtosis - base.kurtosis).abs() < 1e-9);
            prop_assert!((mc.skewness - base.skewness).abs() < 1e-9);
            prop_assert!((mc.kurtosis - base.kurtosis).abs() < 1e-9);
            prop_assert!(base.kurtosis >= base.skewness * base.skewness + 1.0 - 1e-9);
        }

        #[test]
        fn sorting_is_a_permutation(xs in proptest::collection::vec(-1e6f64..1e6, 3..60)) {
            let s = SortedSample::new(&xs).unwrap();
            let mut expect = xs.clone();
            expect.sort_by(f64::total_cmp);
            prop_assert_eq!(s.values(), &expect[..]);
            prop_assert!(is_sorted(s.values()));
        }
    }
}
