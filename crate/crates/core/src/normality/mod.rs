//! Goodness-of-fit statistics for the normal distribution.
//!
//! Every statistic standardizes by the sample mean and unbiased standard
//! deviation (or is a squared correlation), so all of them are invariant
//! under `y -> a*y + c` with `a > 0`. Only Shapiro-Wilk, Shapiro-Francia and
//! Jarque-Bera carry p-values.

mod edf;
mod jarque_bera;
mod pearson;
mod shapiro_francia;
mod shapiro_wilk;

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::stats::SortedSample;

pub use edf::{anderson_darling, cramer_von_mises, lilliefors};
pub use jarque_bera::jarque_bera;
pub use pearson::{pearson_chisq, pearson_class_count};
pub use shapiro_francia::{shapiro_francia, ShapiroFranciaScores};
pub use shapiro_wilk::{shapiro_wilk, ShapiroWilkCoefficients};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TestKind {
    ShapiroWilk,
    AndersonDarling,
    CramerVonMises,
    PearsonChiSquare,
    ShapiroFrancia,
    Lilliefors,
    JarqueBera,
}

/// Which way a statistic points toward normality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Maximize,
    Minimize,
}

impl Direction {
    /// True when `candidate` is strictly better than `incumbent`.
    pub fn improves(self, candidate: f64, incumbent: f64) -> bool {
        match self {
            Direction::Maximize => candidate > incumbent,
            Direction::Minimize => candidate < incumbent,
        }
    }
}

impl TestKind {
    pub const ALL: [TestKind; 7] = [
        TestKind::ShapiroWilk,
        TestKind::AndersonDarling,
        TestKind::CramerVonMises,
        TestKind::PearsonChiSquare,
        TestKind::ShapiroFrancia,
        TestKind::Lilliefors,
        TestKind::JarqueBera,
    ];

    pub fn direction(self) -> Direction {
        match self {
            TestKind::ShapiroWilk | TestKind::ShapiroFrancia => Direction::Maximize,
            _ => Direction::Minimize,
        }
    }

    pub fn code(self) -> &'static str {
        match self {
            TestKind::ShapiroWilk => "SW",
            TestKind::AndersonDarling => "AD",
            TestKind::CramerVonMises => "CVM",
            TestKind::PearsonChiSquare => "PT",
            TestKind::ShapiroFrancia => "SF",
            TestKind::Lilliefors => "LT",
            TestKind::JarqueBera => "JB",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TestKind::ShapiroWilk => "Shapiro-Wilk",
            TestKind::AndersonDarling => "Anderson-Darling",
            TestKind::CramerVonMises => "Cramer-von Mises",
            TestKind::PearsonChiSquare => "Pearson chi-square",
            TestKind::ShapiroFrancia => "Shapiro-Francia",
            TestKind::Lilliefors => "Lilliefors",
            TestKind::JarqueBera => "Jarque-Bera",
        }
    }

    /// Smallest and largest sample size the statistic is defined for here.
    pub fn size_range(self) -> (usize, usize) {
        match self {
            TestKind::ShapiroWilk => (3, 5000),
            TestKind::ShapiroFrancia => (5, 5000),
            TestKind::AndersonDarling | TestKind::CramerVonMises => (3, usize::MAX),
            TestKind::PearsonChiSquare => (8, usize::MAX),
            TestKind::Lilliefors | TestKind::JarqueBera => (4, usize::MAX),
        }
    }

    pub fn has_p_value(self) -> bool {
        matches!(
            self,
            TestKind::ShapiroWilk | TestKind::ShapiroFrancia | TestKind::JarqueBera
        )
    }

    pub fn check_size(self, n: usize) -> Result<()> {
        let (min, max) = self.size_range();
        if n < min || n > max {
            return Err(Error::UnsupportedSize {
                test: self.name(),
                n,
                min,
                max,
            });
        }
        Ok(())
    }
}

impl fmt::Display for TestKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for TestKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        TestKind::ALL
            .into_iter()
            .find(|k| k.code().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown normality test '{s}'"))
    }
}

impl Serialize for TestKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.code())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TestOutcome {
    pub kind: TestKind,
    pub statistic: f64,
    pub p_value: Option<f64>,
}

/// Runs one test on an unsorted sample.
pub fn evaluate(kind: TestKind, values: &[f64]) -> Result<TestOutcome> {
    match kind {
        TestKind::ShapiroWilk => shapiro_wilk(values),
        TestKind::AndersonDarling => anderson_darling(values),
        TestKind::CramerVonMises => cramer_von_mises(values),
        TestKind::PearsonChiSquare => pearson_chisq(values),
        TestKind::ShapiroFrancia => shapiro_francia(values),
        TestKind::Lilliefors => lilliefors(values),
        TestKind::JarqueBera => jarque_bera(values),
    }
}

/// A statistic bound to one sample size, with any size-dependent constants
/// (Shapiro-Wilk coefficients, Blom scores) computed once. Used by the grid
/// search, which evaluates the same n hundreds of times.
#[derive(Debug, Clone)]
pub struct StatisticEvaluator {
    kind: TestKind,
    n: usize,
    prepared: Prepared,
}

#[derive(Debug, Clone)]
enum Prepared {
    None,
    Wilk(ShapiroWilkCoefficients),
    Francia(ShapiroFranciaScores),
}

impl StatisticEvaluator {
    pub fn new(kind: TestKind, n: usize) -> Result<Self> {
        kind.check_size(n)?;
        let prepared = match kind {
            TestKind::ShapiroWilk => Prepared::Wilk(ShapiroWilkCoefficients::new(n)?),
            TestKind::ShapiroFrancia => Prepared::Francia(ShapiroFranciaScores::new(n)?),
            _ => Prepared::None,
        };
        Ok(StatisticEvaluator { kind, n, prepared })
    }

    pub fn kind(&self) -> TestKind {
        self.kind
    }

    /// Full outcome (statistic and p-value where defined) on a sorted sample.
    pub fn outcome(&self, sorted: &SortedSample) -> Result<TestOutcome> {
        if sorted.len() != self.n {
            return Err(Error::LengthMismatch {
                left: sorted.len(),
                right: self.n,
            });
        }
        let x = sorted.values();
        match &self.prepared {
            Prepared::Wilk(c) => c.test(x),
            Prepared::Francia(s) => s.test(x),
            Prepared::None => match self.kind {
                TestKind::AndersonDarling => edf::anderson_darling_sorted(x),
                TestKind::CramerVonMises => edf::cramer_von_mises_sorted(x),
                TestKind::Lilliefors => edf::lilliefors_sorted(x),
                TestKind::PearsonChiSquare => pearson::pearson_sorted(x),
                TestKind::JarqueBera => jarque_bera::jarque_bera_values(x),
                TestKind::ShapiroWilk | TestKind::ShapiroFrancia => unreachable!(),
            },
        }
    }

    pub fn statistic(&self, sorted: &SortedSample) -> Result<f64> {
        self.outcome(sorted).map(|o| o.statistic)
    }
}

fn sorted_for(kind: TestKind, values: &[f64]) -> Result<SortedSample> {
    let sorted = SortedSample::new(values)?;
    kind.check_size(sorted.len())?;
    Ok(sorted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn directions() {
        for k in TestKind::ALL {
            let expect = matches!(k, TestKind::ShapiroWilk | TestKind::ShapiroFrancia);
            assert_eq!(k.direction() == Direction::Maximize, expect, "{k}");
        }
    }

    #[test]
    fn codes_round_trip() {
        for k in TestKind::ALL {
            assert_eq!(k.code().to_lowercase().parse::<TestKind>().unwrap(), k);
        }
        assert!("xx".parse::<TestKind>().is_err());
    }

    #[test]
    fn p_values_only_for_validation_trio() {
        let xs: Vec<f64> = (1..=30)
            .map(|i| (i as f64).sqrt() + (i % 7) as f64 * 0.3)
            .collect();
        for k in TestKind::ALL {
            let out = evaluate(k, &xs).unwrap();
            assert_eq!(out.p_value.is_some(), k.has_p_value(), "{k}");
            if let Some(p) = out.p_value {
                assert!((0.0..=1.0).contains(&p));
            }
        }
    }

    #[test]
    fn evaluator_matches_free_functions() {
        let xs: Vec<f64> = (1..=25)
            .map(|i| ((i * 13) % 17) as f64 + 0.1 * i as f64)
            .collect();
        let sorted = SortedSample::new(&xs).unwrap();
        for k in TestKind::ALL {
            let ev = StatisticEvaluator::new(k, xs.len()).unwrap();
            assert_eq!(ev.outcome(&sorted).unwrap(), evaluate(k, &xs).unwrap());
        }
    }

    #[test]
    fn degenerate_samples_rejected() {
        for k in TestKind::ALL {
            assert_eq!(evaluate(k, &[4.0; 12]), Err(Error::DegenerateSample), "{k}");
        }
    }

    fn non_degenerate() -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(-100.0f64..100.0, 8..60).prop_filter("spread", |v| {
            let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            hi - lo > 1.0
        })
    }

    proptest! {
        #[test]
        fn location_scale_invariance(xs in non_degenerate(), a in 0.1f64..10.0, c in -100.0f64..100.0) {
            let ys: Vec<f64> = xs.iter().map(|x| a * x + c).collect();
            for k in TestKind::ALL {
                let s0 = evaluate(k, &xs).unwrap().statistic;
                let s1 = evaluate(k, &ys).unwrap().statistic;
                prop_assert!((s0 - s1).abs() <= 1e-10 * s0.abs().max(1.0), "{} {} {}", k, s0, s1);
            }
        }

        #[test]
        fn bounds(xs in non_degenerate()) {
            let n = xs.len() as f64;
            let sw = shapiro_wilk(&xs).unwrap().statistic;
            let sf = shapiro_francia(&xs).unwrap().statistic;
            prop_assert!(sw > 0.0 && sw <= 1.0);
            prop_assert!(sf > 0.0 && sf <= 1.0);
            prop_assert!(cramer_von_mises(&xs).unwrap().statistic >= 1.0 / (12.0 * n));
            let d = lilliefors(&xs).unwrap().statistic;
            prop_assert!((0.0..=1.0).contains(&d));
            prop_assert!(anderson_darling(&xs).unwrap().statistic >= 0.0);
            prop_assert!(pearson_chisq(&xs).unwrap().statistic >= 0.0);
            prop_assert!(jarque_bera(&xs).unwrap().statistic >= 0.0);
        }
    }
}
