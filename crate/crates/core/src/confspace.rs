//! Monodromy of the rank-one local systems on configuration spaces of colored
//! points in a disk with tangent vectors.

use num_rational::Rational64;
use serde::Serialize;

use crate::cyclo::CycloNum;
use crate::rootdata::{Convention, RootDatum, WeightBag};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LoopGenerator {
    /// x_i travels counterclockwise around x_j.
    PointAroundPoint { i: usize, j: usize },
    /// The tangent vector at x_j makes a full counterclockwise turn.
    TangentRotation { j: usize },
    /// x_i and x_j (same color) swap counterclockwise.
    HalfTwist { i: usize, j: usize },
}

/// ζ^e for a rational exponent e.
pub fn zeta_rational(order: u32, l: u32, e: Rational64) -> Result<CycloNum> {
    CycloNum::zeta_pow(order, l, *e.numer(), *e.denom())
}

pub fn monodromy_scalar(
    rd: &RootDatum,
    order: u32,
    bag: &WeightBag,
    g: LoopGenerator,
    conv: Convention,
) -> Result<CycloNum> {
    let colors = bag.unfolding.as_ref().ok_or_else(|| Error::Invalid("weight bag has no unfolding".into()))?;
    let color = |k: usize| {
        colors.get(k).ok_or_else(|| Error::Invalid(format!("point {k} out of range (|J| = {})", colors.len())))
    };
    let l = rd.l();
    match g {
        LoopGenerator::PointAroundPoint { i, j } => {
            if i == j {
                return Err(Error::Invalid("a point cannot loop around itself".into()));
            }
            let e = rd.dot(color(i)?, color(j)?) * -2;
            zeta_rational(order, l, e)
        }
        LoopGenerator::TangentRotation { j } => {
            let e = rd.balance_n(color(j)?, conv) * -2;
            zeta_rational(order, l, e)
        }
        LoopGenerator::HalfTwist { i, j } => {
            if i == j {
                return Err(Error::Invalid("a half-twist needs two distinct points".into()));
            }
            let (a, b) = (color(i)?, color(j)?);
            if a != b {
                return Err(Error::Invalid(format!("half-twist between colors {a} and {b}")));
            }
            Ok(-zeta_rational(order, l, -rd.dot(a, b))?)
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorEntry {
    pub generator: LoopGenerator,
    pub scalar: CycloNum,
}

/// Every generator for the given unfolding: all ordered point pairs, all
/// tangent rotations, and the half-twists between equal colors.
pub fn generator_table(rd: &RootDatum, order: u32, bag: &WeightBag, conv: Convention) -> Result<Vec<GeneratorEntry>> {
    let n = bag.unfolding.as_ref().map(|u| u.len()).unwrap_or(0);
    let cols = bag.unfolding.clone().unwrap_or_default();
    let mut gens = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                gens.push(LoopGenerator::PointAroundPoint { i, j });
            }
        }
    }
    for j in 0..n {
        gens.push(LoopGenerator::TangentRotation { j });
    }
    for i in 0..n {
        for j in i + 1..n {
            if cols[i] == cols[j] {
                gens.push(LoopGenerator::HalfTwist { i, j });
            }
        }
    }
    gens.into_iter()
        .map(|g| Ok(GeneratorEntry { generator: g, scalar: monodromy_scalar(rd, order, bag, g, conv)? }))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::Weight;

    fn bag(cs: &[i64]) -> WeightBag {
        WeightBag::from_unfolding(cs.iter().map(|&c| Weight::sl2(c)).collect())
    }

    fn zeta(k: i64) -> CycloNum {
        CycloNum::zeta_pow(20, 5, k, 1).unwrap()
    }

    #[test]
    fn two_negative_simple_roots() {
        let rd = RootDatum::sl2(5);
        let b = bag(&[-2, -2]);
        let c = Convention::OddChapter1;
        let s = monodromy_scalar(&rd, 20, &b, LoopGenerator::PointAroundPoint { i: 0, j: 1 }, c).unwrap();
        assert_eq!(s, zeta(-4));
        let t = monodromy_scalar(&rd, 20, &b, LoopGenerator::TangentRotation { j: 0 }, c).unwrap();
        assert!(t.is_one());
        let h = monodromy_scalar(&rd, 20, &b, LoopGenerator::HalfTwist { i: 0, j: 1 }, c).unwrap();
        assert_eq!(&h * &h, s);
    }

    #[test]
    fn errors() {
        let rd = RootDatum::sl2(5);
        let c = Convention::OddChapter1;
        let no = WeightBag::new(vec![(Weight::sl2(1), 2)]);
        assert!(monodromy_scalar(&rd, 20, &no, LoopGenerator::TangentRotation { j: 0 }, c).is_err());
        let b = bag(&[1, 2]);
        assert!(monodromy_scalar(&rd, 20, &b, LoopGenerator::HalfTwist { i: 0, j: 1 }, c).is_err());
    }

    #[test]
    fn table_size() {
        let rd = RootDatum::sl2(5);
        let t = generator_table(&rd, 20, &bag(&[2, 2, 3]), Convention::OddChapter1).unwrap();
        assert_eq!(t.len(), 6 + 3 + 1);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn symmetric_and_square(a in -12i64..12, b in -12i64..12) {
                let rd = RootDatum::sl2(5);
                let c = Convention::OddChapter1;
                let bg = bag(&[a, b, a]);
                let p = |i, j| monodromy_scalar(&rd, 20, &bg, LoopGenerator::PointAroundPoint { i, j }, c).unwrap();
                prop_assert_eq!(p(0, 1), p(1, 0));
                let h = monodromy_scalar(&rd, 20, &bg, LoopGenerator::HalfTwist { i: 0, j: 2 }, c).unwrap();
                prop_assert_eq!(&h * &h, p(0, 2));
            }

            #[test]
            fn negative_simple_root_rotation_trivial(extra in -12i64..12) {
                let rd = RootDatum::sl2(5);
                let bg = bag(&[extra, -2]);
                let t = monodromy_scalar(&rd, 20, &bg, LoopGenerator::TangentRotation { j: 1 }, Convention::OddChapter1).unwrap();
                prop_assert!(t.is_one());
            }
        }
    }
}
