// Copyright 2026 The atomnoise Authors
// SPDX-License-Identifier: Apache-2.0

//! Angular-momentum algebra for a single dipole transition `Fg -> Fe`.
//!
//! Clebsch-Gordan coefficients follow the Condon-Shortley phase convention.
//! They are evaluated with the Racah closed-form sum in exact rational
//! arithmetic; only the final square root is taken in floating point.

use std::fmt;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Result};

/// A non-negative or negative half-integer, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const fn from_twice(twice: i32) -> Self {
        HalfInt(twice)
    }

    pub fn from_f64(value: f64) -> Result<Self> {
        let twice = 2.0 * value;
        if !twice.is_finite() || (twice - twice.round()).abs() > 1e-9 || twice.abs() > 1e6 {
            return invalid(format!("{value} is not a half-integer"));
        }
        Ok(HalfInt(twice.round() as i32))
    }

    pub const fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

fn factorial(n: i32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn check_projection(j: HalfInt, m: HalfInt) -> Result<()> {
    if j.twice() < 0 {
        return invalid(format!("angular momentum {j} is negative"));
    }
    if m.twice().abs() > j.twice() {
        return invalid(format!("projection {m} exceeds angular momentum {j}"));
    }
    if (j.twice() - m.twice()) % 2 != 0 {
        return invalid(format!("projection {m} and angular momentum {j} differ in integrality"));
    }
    Ok(())
}

/// `<j1 m1; j2 m2 | j m>` for half-integer arguments.
pub fn clebsch_gordan_half(
    j1: HalfInt,
    m1: HalfInt,
    j2: HalfInt,
    m2: HalfInt,
    j: HalfInt,
    m: HalfInt,
) -> Result<f64> {
    check_projection(j1, m1)?;
    check_projection(j2, m2)?;
    check_projection(j, m)?;

    let (tj1, tm1, tj2, tm2, tj, tm) = (
        j1.twice(),
        m1.twice(),
        j2.twice(),
        m2.twice(),
        j.twice(),
        m.twice(),
    );
    if tm != tm1 + tm2 {
        return Ok(0.0);
    }
    if tj < (tj1 - tj2).abs() || tj > tj1 + tj2 || (tj1 + tj2 + tj) % 2 != 0 {
        return Ok(0.0);
    }

    // All arguments below are integers once halved.
    let h = |twice: i32| twice / 2;
    let a = h(tj1 + tj2 - tj);
    let b = h(tj1 - tm1);
    let c = h(tj2 + tm2);
    let d = h(tj - tj2 + tm1);
    let e = h(tj - tj1 - tm2);

    let mut prefactor = BigRational::from_integer(
        BigInt::from(tj + 1)
            * factorial(h(tj + tj1 - tj2))
            * factorial(h(tj - tj1 + tj2))
            * factorial(a),
    ) / BigRational::from_integer(factorial(h(tj1 + tj2 + tj) + 1));
    prefactor *= BigRational::from_integer(
        factorial(h(tj + tm))
            * factorial(h(tj - tm))
            * factorial(h(tj1 - tm1))
            * factorial(h(tj1 + tm1))
            * factorial(h(tj2 - tm2))
            * factorial(h(tj2 + tm2)),
    );

    let k_min = 0.max(-d).max(-e);
    let k_max = a.min(b).min(c);
    let mut sum = BigRational::zero();
    for k in k_min..=k_max {
        let denom = factorial(k)
            * factorial(a - k)
            * factorial(b - k)
            * factorial(c - k)
            * factorial(d + k)
            * factorial(e + k);
        let term = BigRational::new(BigInt::one(), denom);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    if sum.is_zero() {
        return Ok(0.0);
    }

    let square = prefactor * &sum * &sum;
    let magnitude = square
        .to_f64()
        .expect("squared Clebsch-Gordan coefficient is a finite rational")
        .sqrt();
    Ok(if sum.is_negative() { -magnitude } else { magnitude })
}

/// `<j1 m1; j2 m2 | j m>` for arguments given as (half-)integer floats.
pub fn clebsch_gordan(j1: f64, m1: f64, j2: f64, m2: f64, j: f64, m: f64) -> Result<f64> {
    clebsch_gordan_half(
        HalfInt::from_f64(j1)?,
        HalfInt::from_f64(m1)?,
        HalfInt::from_f64(j2)?,
        HalfInt::from_f64(m2)?,
        HalfInt::from_f64(j)?,
        HalfInt::from_f64(m)?,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Manifold {
    Ground,
    Excited,
}

/// One Zeeman sublevel `|F, M>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Sublevel {
    pub manifold: Manifold,
    pub m: HalfInt,
}

/// A degenerate dipole transition between a ground level `Fg` and an excited
/// level `Fe` decaying at rate `gamma`.
///
/// Sublevels are ordered ground `M = -Fg..Fg` followed by excited
/// `M = -Fe..Fe`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelScheme {
    fg: HalfInt,
    fe: HalfInt,
    gamma: f64,
}

impl LevelScheme {
    pub fn new(fg: f64, fe: f64) -> Result<Self> {
        Self::with_gamma(fg, fe, 1.0)
    }

    pub fn with_gamma(fg: f64, fe: f64, gamma: f64) -> Result<Self> {
        let fg = HalfInt::from_f64(fg)?;
        let fe = HalfInt::from_f64(fe)?;
        if fg.twice() < 0 || fe.twice() < 0 {
            return invalid("angular momenta must be non-negative");
        }
        if (fe.twice() - fg.twice()).abs() > 2 || (fe.twice() - fg.twice()) % 2 != 0 {
            return invalid(format!("transition {fg} -> {fe} is not dipole allowed"));
        }
        if fg.twice() == 0 && fe.twice() == 0 {
            return invalid("transition 0 -> 0 is not dipole allowed");
        }
        if !(gamma.is_finite() && gamma > 0.0) {
            return invalid(format!("decay rate must be positive, got {gamma}"));
        }
        Ok(LevelScheme { fg, fe, gamma })
    }

    pub fn fg(&self) -> HalfInt {
        self.fg
    }

    pub fn fe(&self) -> HalfInt {
        self.fe
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn ground_count(&self) -> usize {
        (self.fg.twice() + 1) as usize
    }

    pub fn excited_count(&self) -> usize {
        (self.fe.twice() + 1) as usize
    }

    /// Total number of sublevels `n`.
    pub fn dim(&self) -> usize {
        self.ground_count() + self.excited_count()
    }

    pub fn sublevel(&self, index: usize) -> Option<Sublevel> {
        let ng = self.ground_count();
        if index < ng {
            Some(Sublevel {
                manifold: Manifold::Ground,
                m: HalfInt::from_twice(-self.fg.twice() + 2 * index as i32),
            })
        } else if index < self.dim() {
            Some(Sublevel {
                manifold: Manifold::Excited,
                m: HalfInt::from_twice(-self.fe.twice() + 2 * (index - ng) as i32),
            })
        } else {
            None
        }
    }

    pub fn index(&self, level: Sublevel) -> Option<usize> {
        let (f, offset) = match level.manifold {
            Manifold::Ground => (self.fg, 0),
            Manifold::Excited => (self.fe, self.ground_count()),
        };
        let shifted = level.m.twice() + f.twice();
        if level.m.twice().abs() > f.twice() || shifted % 2 != 0 {
            return None;
        }
        Some(offset + (shifted / 2) as usize)
    }

    pub fn ground(&self, m: f64) -> Option<usize> {
        let m = HalfInt::from_f64(m).ok()?;
        self.index(Sublevel { manifold: Manifold::Ground, m })
    }

    pub fn excited(&self, m: f64) -> Option<usize> {
        let m = HalfInt::from_f64(m).ok()?;
        self.index(Sublevel { manifold: Manifold::Excited, m })
    }

    pub fn sublevels(&self) -> impl Iterator<Item = Sublevel> + '_ {
        (0..self.dim()).filter_map(move |i| self.sublevel(i))
    }
}

/// Lowering component `d_q` of the dipole operator.
///
/// `d_q[g, e] = <Fg Mg; 1 q | Fe Me>` with `Me = Mg + q`; all other entries
/// vanish. The raising component is the transpose. With this normalization
/// every excited sublevel has unit total branching, so it decays at `gamma`.
pub fn dipole_component(scheme: &LevelScheme, q: i32) -> Result<DMatrix<f64>> {
    if !(-1..=1).contains(&q) {
        return invalid(format!("spherical component q={q} is not in {{-1, 0, 1}}"));
    }
    let n = scheme.dim();
    let ng = scheme.ground_count();
    let one = HalfInt::from_twice(2);
    let tq = HalfInt::from_twice(2 * q);
    let mut d = DMatrix::zeros(n, n);
    for g in 0..ng {
        let mg = scheme.sublevel(g).expect("ground index in range").m;
        let me = HalfInt::from_twice(mg.twice() + tq.twice());
        if let Some(e) = scheme.index(Sublevel { manifold: Manifold::Excited, m: me }) {
            d[(g, e)] = clebsch_gordan_half(scheme.fg, mg, one, tq, scheme.fe, me)?;
        }
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn stretched_and_forbidden() {
        assert_abs_diff_eq!(clebsch_gordan(1.0, 1.0, 1.0, 1.0, 2.0, 2.0).unwrap(), 1.0, epsilon = 1e-15);
        assert_eq!(clebsch_gordan(1.0, 0.0, 1.0, 1.0, 2.0, 2.0).unwrap(), 0.0);
        assert_eq!(clebsch_gordan(1.0, 0.0, 1.0, 0.0, 3.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn frozen_values() {
        // <1 0; 1 0 | 2 0> = sqrt(2/3), <1 0; 1 0 | 1 0> = 0, <1/2 1/2; 1/2 -1/2 | 0 0> = 1/sqrt(2)
        assert_abs_diff_eq!(
            clebsch_gordan(1.0, 0.0, 1.0, 0.0, 2.0, 0.0).unwrap(),
            0.816_496_580_927_726,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(clebsch_gordan(1.0, 0.0, 1.0, 0.0, 1.0, 0.0).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            clebsch_gordan(0.5, 0.5, 0.5, -0.5, 0.0, 0.0).unwrap(),
            std::f64::consts::FRAC_1_SQRT_2,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            clebsch_gordan(0.5, -0.5, 0.5, 0.5, 0.0, 0.0).unwrap(),
            -std::f64::consts::FRAC_1_SQRT_2,
            epsilon = 1e-15
        );
    }

    #[test]
    fn invalid_projections() {
        assert!(clebsch_gordan(1.0, 2.0, 1.0, 0.0, 2.0, 2.0).is_err());
        assert!(clebsch_gordan(1.0, 0.5, 1.0, 0.0, 2.0, 0.5).is_err());
        assert!(clebsch_gordan(0.3, 0.0, 1.0, 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn reflection_symmetry_for_f1_f2() {
        let (j1, j2, j) = (1.0, 1.0, 2.0);
        for m1 in [-1.0, 0.0, 1.0] {
            for m2 in [-1.0, 0.0, 1.0] {
                let m = m1 + m2;
                let lhs = clebsch_gordan(j1, m1, j2, m2, j, m).unwrap();
                let rhs = clebsch_gordan(j1, -m1, j2, -m2, j, -m).unwrap();
                let sign = if (j1 + j2 - j) as i32 % 2 == 0 { 1.0 } else { -1.0 };
                assert_abs_diff_eq!(lhs, sign * rhs, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn scheme_validation() {
        assert!(LevelScheme::new(1.0, 2.0).is_ok());
        assert!(LevelScheme::new(0.5, 1.5).is_ok());
        assert!(LevelScheme::new(1.0, 3.0).is_err());
        assert!(LevelScheme::new(0.0, 0.0).is_err());
        assert!(LevelScheme::new(1.0, 1.5).is_err());
        assert!(LevelScheme::with_gamma(1.0, 2.0, 0.0).is_err());
    }

    #[test]
    fn index_map_is_a_bijection() {
        let s = LevelScheme::new(1.5, 2.5).unwrap();
        assert_eq!(s.dim(), 10);
        for i in 0..s.dim() {
            assert_eq!(s.index(s.sublevel(i).unwrap()), Some(i));
        }
        assert_eq!(s.ground(-1.5), Some(0));
        assert_eq!(s.excited(2.5), Some(9));
        assert_eq!(s.ground(2.5), None);
    }

    #[test]
    fn f1_to_f2_components() {
        let s = LevelScheme::new(1.0, 2.0).unwrap();
        let dp = dipole_component(&s, 1).unwrap();
        assert_abs_diff_eq!(dp[(s.ground(1.0).unwrap(), s.excited(2.0).unwrap())], 1.0, epsilon = 1e-15);

        let d0 = dipole_component(&s, 0).unwrap();
        let pi: Vec<f64> = [-1.0, 0.0, 1.0]
            .iter()
            .map(|&m| d0[(s.ground(m).unwrap(), s.excited(m).unwrap())])
            .collect();
        assert_eq!(d0.iter().filter(|v| **v != 0.0).count(), 3);
        assert_abs_diff_eq!(pi[0], pi[2], epsilon = 1e-15);
        assert!((pi[1].abs() - pi[0].abs()).abs() > 0.05);
        assert!(dipole_component(&s, 2).is_err());
    }

    #[test]
    fn branching_closure_and_selection_rule() {
        for (fg, fe) in [(1.0, 2.0), (0.5, 1.5), (2.0, 2.0), (1.5, 0.5), (3.0, 4.0), (0.0, 1.0)] {
            let s = LevelScheme::new(fg, fe).unwrap();
            let mut total = DMatrix::<f64>::zeros(s.dim(), s.dim());
            for q in -1..=1 {
                let d = dipole_component(&s, q).unwrap();
                for g in 0..s.dim() {
                    for e in 0..s.dim() {
                        if d[(g, e)] != 0.0 {
                            let dm = s.sublevel(e).unwrap().m.twice() - s.sublevel(g).unwrap().m.twice();
                            assert_eq!(dm, 2 * q);
                        }
                    }
                }
                total += d.transpose() * &d;
            }
            for e in s.ground_count()..s.dim() {
                assert_abs_diff_eq!(total[(e, e)], 1.0, epsilon = 1e-12);
            }
        }
    }
}
