//! Closed-form dimension counts and degree thresholds for Fano schemes of
//! Veronese varieties in hypersurfaces, plus the flag-fiber dimension.
//!
//! All arithmetic is exact: integers for the thresholds, rationals for the
//! flag coefficients `b_{r,l}`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polyring::{graded_dim, Matrix};
use crate::scalar::{Field, Scalar};

fn p(r: u32, d: i64) -> i64 {
    graded_dim(r, d).expect("graded dimension in contract") as i64
}

fn ceil_div(a: i64, b: i64) -> i64 {
    Integer::div_ceil(&a, &b)
}

fn check_rde(r: u32, d: u32, e: u32) -> Result<()> {
    if r < 1 || d < 1 || e < 1 {
        return Err(Error::Domain(format!("need r, d, e >= 1 (got r={r}, d={d}, e={e})")));
    }
    Ok(())
}

/// `n_e(r) = P_r(e) - 1`, the dimension of the span of the Veronese.
pub fn span_dim(r: u32, e: u32) -> i64 {
    p(r, e as i64) - 1
}

/// `f_e(n, r) = (n + 1) P_r(e) - (r + 1)^2`.
pub fn parameter_dim(n: u32, r: u32, e: u32) -> i64 {
    (n as i64 + 1) * p(r, e as i64) - (r as i64 + 1).pow(2)
}

/// `f_e(n, r, d) = (n + 1) P_r(e) - P_r(de) - (r + 1)^2`.
pub fn expected_dim(n: u32, r: u32, d: u32, e: u32) -> i64 {
    parameter_dim(n, r, e) - p(r, (d * e) as i64)
}

/// `N_e(r, d)`: least `n >= n_e(r)` with nonnegative expected dimension.
pub fn n_e(r: u32, d: u32, e: u32) -> i64 {
    let pe = p(r, e as i64);
    let num = (r as i64 + 1).pow(2) + p(r, (d * e) as i64);
    (pe - 1).max(-1 + ceil_div(num, pe))
}

/// `M_e(r, d) = max(0, ceil(((r+1)^2 + P_r(de) - P_r(e)^2) / P_r(e)))`.
pub fn m_e(r: u32, d: u32, e: u32) -> i64 {
    let pe = p(r, e as i64);
    let num = (r as i64 + 1).pow(2) + p(r, (d * e) as i64) - pe * pe;
    0.max(ceil_div(num, pe))
}

/// `N_1(r, d) = r + ceil(P_r(d) / (r + 1))`.
pub fn n_1(r: u32, d: u32) -> i64 {
    r as i64 + ceil_div(p(r, d as i64), r as i64 + 1)
}

/// `-1 + 2 P_r(e) + ceil(P_r(de) / P_r(e))`, the threshold for `e >= 2`.
pub fn n_tilde(r: u32, d: u32, e: u32) -> i64 {
    let pe = p(r, e as i64);
    -1 + 2 * pe + ceil_div(p(r, (d * e) as i64), pe)
}

/// The degree from which the existence theorems guarantee a dense smooth
/// locus, with the `d = 1` and `d = 2` cases taken verbatim.
pub fn nonempty_threshold(r: u32, d: u32, e: u32) -> i64 {
    match (e, d) {
        (_, 1) => 1 + span_dim(r, e),
        (1, 2) => 1 + 2 * r as i64,
        (_, 2) => span_dim(r, e),
        (1, _) => n_1(r, d),
        _ => n_tilde(r, d, e),
    }
}

/// All formula values for one `(r, d, e)` and optionally one `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub r: u32,
    pub e: u32,
    pub d: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    pub p_r_e: i64,
    pub n_e_r: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f_e_nr: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f_e_nrd: Option<i64>,
    #[serde(rename = "N_e")]
    pub big_n_e: i64,
    #[serde(rename = "M_e")]
    pub big_m_e: i64,
    #[serde(rename = "N_tilde", skip_serializing_if = "Option::is_none")]
    pub n_tilde: Option<i64>,
    #[serde(rename = "N_1_waldron", skip_serializing_if = "Option::is_none")]
    pub n_1_waldron: Option<i64>,
    pub nonempty_threshold: i64,
    /// Lower end of the bracket for the connectedness threshold (`e = 1`, `d >= 2`).
    #[serde(rename = "N_1_prime_min", skip_serializing_if = "Option::is_none")]
    pub n_1_prime_min: Option<i64>,
    #[serde(rename = "N_1_prime_max", skip_serializing_if = "Option::is_none")]
    pub n_1_prime_max: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho_fiber_dim: Option<i64>,
    pub flag_threshold: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flag_fiber_dim: Option<i64>,
}

/// The `n`-independent part of the report.
pub fn degree_range(r: u32, d: u32, e: u32) -> Result<BoundsReport> {
    check_rde(r, d, e)?;
    let pe = p(r, e as i64);
    let (prime_min, prime_max) = match (e, d) {
        // the d = 2 bracket is exact
        (1, 2) => (Some(2 * r as i64 + 2), Some(2 * r as i64 + 2)),
        (1, d) if d >= 2 => (Some(n_1(r, d)), Some(1 + n_1(r, d))),
        _ => (None, None),
    };
    Ok(BoundsReport {
        r,
        e,
        d,
        n: None,
        p_r_e: pe,
        n_e_r: pe - 1,
        f_e_nr: None,
        f_e_nrd: None,
        big_n_e: n_e(r, d, e),
        big_m_e: m_e(r, d, e),
        n_tilde: (e >= 2).then(|| n_tilde(r, d, e)),
        n_1_waldron: (e == 1).then(|| n_1(r, d)),
        nonempty_threshold: nonempty_threshold(r, d, e),
        n_1_prime_min: prime_min,
        n_1_prime_max: prime_max,
        rho_fiber_dim: None,
        flag_threshold: r as i64 + p(r, d as i64 - 1),
        flag_fiber_dim: None,
    })
}

/// The full report; `n`-dependent fields are filled when `n` is given.
pub fn bounds_report(r: u32, d: u32, e: u32, n: Option<u32>) -> Result<BoundsReport> {
    let mut rep = degree_range(r, d, e)?;
    if let Some(n) = n {
        rep.n = Some(n);
        rep.f_e_nr = Some(parameter_dim(n, r, e));
        rep.f_e_nrd = Some(expected_dim(n, r, d, e));
        rep.rho_fiber_dim = rho_fiber_dim(n, r, d, e).ok();
        rep.flag_fiber_dim = Some(n as i64 - rep.flag_threshold);
    }
    Ok(rep)
}

/// Relative dimension `P_n(d) - P_r(de)` of the incidence projective bundle.
pub fn rho_fiber_dim(n: u32, r: u32, d: u32, e: u32) -> Result<i64> {
    check_rde(r, d, e)?;
    if (n as i64) < span_dim(r, e) {
        return Err(Error::Domain(format!(
            "n = {n} < n_e(r) = {}: no Veronese varieties to parametrize",
            span_dim(r, e)
        )));
    }
    Ok(p(n, d as i64) - p(r, (d * e) as i64))
}

/// The rationals `b_{r,1..r}` with `P_r(t - 1) = sum_l b_{r,l} t^l / l!`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagCoefficients {
    pub r: u32,
    pub b: Vec<BigRational>,
}

fn factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * i)
}

impl FlagCoefficients {
    /// Evaluates `sum_l b_l t^l / l!`.
    pub fn eval(&self, t: i64) -> BigRational {
        self.b
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let l = i as u32 + 1;
                b * BigRational::from_integer(BigInt::from(t).pow(l)) / BigRational::from_integer(factorial(l))
            })
            .fold(BigRational::zero(), |a, x| a + x)
    }

    /// Checks the defining identity at `t = 1..=r+1`.
    pub fn verify(&self) -> bool {
        (1..=self.r as i64 + 1).all(|t| self.eval(t) == BigRational::from_integer(BigInt::from(p(self.r, t - 1))))
    }
}

/// Solves for `b_{r,l}` by matching `P_r(t - 1)` at `t = 1..=r`.
///
/// `P_r(-1) = 0`, so the polynomial has no constant term and the `r`
/// interpolation points determine the `r` unknowns `b_l / l!`.
pub fn flag_coeffs(r: u32) -> Result<FlagCoefficients> {
    if r < 1 {
        return Err(Error::Domain("flag coefficients need r >= 1".into()));
    }
    let q = Field::Rational;
    let rows: Vec<Vec<Scalar>> = (1..=r as i64)
        .map(|t| (1..=r).map(|l| q.from_bigint(&BigInt::from(t).pow(l))).collect())
        .collect();
    let rhs: Vec<Scalar> = (1..=r as i64).map(|t| q.from_i64(p(r, t - 1))).collect();
    let x = Matrix::from_rows(rows)?.solve(&rhs)?;
    let b = x
        .iter()
        .enumerate()
        .map(|(i, s)| s.as_rational().unwrap() * BigRational::from_integer(factorial(i as u32 + 1)))
        .collect();
    let fc = FlagCoefficients { r, b };
    if !fc.verify() {
        return Err(Error::Internal(format!(
            "flag coefficients for r = {r} fail re-evaluation"
        )));
    }
    Ok(fc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Connectivity {
    /// Below the threshold: the fibers are empty.
    Empty,
    /// `n = r + P_r(d - 1)` with `d > 1`: fibers are not geometrically connected.
    BoundaryDisconnected,
    /// `n = r + P_r(d - 1)` with `d = 1`; no statement applies.
    Undetermined,
    Connected,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlagFiberReport {
    pub e_r: i64,
    pub threshold_empty: bool,
    pub connected: Connectivity,
}

/// `e_r = -r - 1 + sum_l b_{r,l} ((n + 1) - d^l) / l!`, from the Chern
/// character of the tangent bundle of a degree-`d` hypersurface in `P^n`.
pub fn e_r_chern(n: u32, r: u32, d: u32, coeffs: &FlagCoefficients) -> BigRational {
    let mut acc = BigRational::from_integer(BigInt::from(-(r as i64) - 1));
    for (i, b) in coeffs.b.iter().enumerate() {
        let l = i as u32 + 1;
        let pairing = BigRational::new(BigInt::from(n as i64 + 1) - BigInt::from(d).pow(l), factorial(l));
        acc += b * pairing;
    }
    acc
}

/// Dimension and connectivity of the last step of the flag Fano scheme.
pub fn flag_fiber_report(n: u32, r: u32, d: u32) -> Result<FlagFiberReport> {
    check_rde(r, d, 1)?;
    flag_fiber_report_with(n, r, d, &flag_coeffs(r)?)
}

pub(crate) fn flag_fiber_report_with(n: u32, r: u32, d: u32, coeffs: &FlagCoefficients) -> Result<FlagFiberReport> {
    let threshold = r as i64 + p(r, d as i64 - 1);
    let closed = n as i64 - threshold;
    let chern = e_r_chern(n, r, d, coeffs);
    if !chern.is_integer() || chern.to_integer().to_i64() != Some(closed) {
        return Err(Error::Internal(format!(
            "e_r mismatch at (n, r, d) = ({n}, {r}, {d}): closed form {closed}, Chern character {chern}"
        )));
    }
    let connected = match closed {
        c if c < 0 => Connectivity::Empty,
        0 if d > 1 => Connectivity::BoundaryDisconnected,
        0 => Connectivity::Undetermined,
        _ => Connectivity::Connected,
    };
    Ok(FlagFiberReport {
        e_r: closed,
        threshold_empty: closed < 0,
        connected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn expected_dim_examples() {
        assert_eq!(expected_dim(3, 1, 3, 1), 0);
        assert_eq!(expected_dim(4, 1, 5, 1), 0);
        assert_eq!(expected_dim(4, 1, 3, 1), 2);
    }

    #[test]
    fn degree_range_examples() {
        assert_eq!(degree_range(1, 3, 1).unwrap().n_1_waldron, Some(3));
        assert_eq!(degree_range(2, 4, 1).unwrap().n_1_waldron, Some(7));
        assert_eq!(degree_range(1, 3, 2).unwrap().n_tilde, Some(8));
        assert!(degree_range(0, 3, 1).is_err());
    }

    #[test]
    fn special_case_thresholds() {
        assert_eq!(nonempty_threshold(2, 2, 1), 5);
        assert_eq!(nonempty_threshold(2, 2, 2), 5);
        assert_eq!(nonempty_threshold(1, 1, 3), 4);
        assert_eq!(nonempty_threshold(1, 3, 1), 3);
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho_fiber_dim(3, 1, 3, 1).unwrap(), 16);
        assert_eq!(rho_fiber_dim(4, 1, 5, 1).unwrap(), 120);
        assert_eq!(rho_fiber_dim(2, 1, 1, 2).unwrap(), 0);
        assert!(matches!(rho_fiber_dim(1, 1, 1, 2), Err(Error::Domain(_))));
    }

    #[test]
    fn flag_coeff_examples() {
        assert_eq!(flag_coeffs(1).unwrap().b, vec![rat(1, 1)]);
        assert_eq!(flag_coeffs(2).unwrap().b, vec![rat(1, 2), rat(1, 1)]);
        let c3 = flag_coeffs(3).unwrap();
        assert!(c3.verify());
        // P_3(t-1) = t(t+1)(t+2)/6 = t/3 + t^2/2 + t^3/6
        assert_eq!(c3.b, vec![rat(1, 3), rat(1, 1), rat(1, 1)]);
    }

    #[test]
    fn flag_fiber_examples() {
        let a = flag_fiber_report(3, 1, 3).unwrap();
        assert_eq!((a.e_r, a.threshold_empty, a.connected), (-1, true, Connectivity::Empty));
        let b = flag_fiber_report(4, 1, 3).unwrap();
        assert_eq!((b.e_r, b.connected), (0, Connectivity::BoundaryDisconnected));
        let c = flag_fiber_report(5, 1, 3).unwrap();
        assert_eq!((c.e_r, c.connected), (1, Connectivity::Connected));
    }

    #[test]
    fn corrupted_coefficients_trip_the_cross_check() {
        let mut c = flag_coeffs(2).unwrap();
        c.b[1] = rat(2, 1);
        assert!(matches!(flag_fiber_report_with(9, 2, 3, &c), Err(Error::Internal(_))));
    }

    #[test]
    fn report_serializes_without_absent_fields() {
        let v = serde_json::to_value(degree_range(1, 3, 1).unwrap()).unwrap();
        assert_eq!(v["N_1_waldron"], 3);
        assert!(v.get("N_tilde").is_none());
        assert!(v.get("n").is_none());
        let v = serde_json::to_value(bounds_report(1, 3, 1, Some(3)).unwrap()).unwrap();
        assert_eq!(v["f_e_nrd"], 0);
        assert_eq!(v["rho_fiber_dim"], 16);
    }
}
