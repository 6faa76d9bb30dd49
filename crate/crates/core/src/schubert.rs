//! Degrees on the Grassmannian of `r`-planes in `P^n` via Chern roots.
//!
//! A class is a symmetric polynomial in the roots `u_0..u_r` of the
//! tautological rank-`(r + 1)` quotient. Its degree is the coefficient of
//! the staircase `u_0^n u_1^(n-1) ... u_r^(n-r)` in `P * prod_{i<j}(u_i - u_j)`.
//! Exponents above `n` never reach the staircase, so products are pruned
//! at cap `n` as they are expanded.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::bounds::expected_dim;
use crate::error::{Error, Result};
use crate::polyring::monomial_basis;

/// A polynomial in `nroots` Chern roots with big-integer coefficients and a
/// per-root exponent cap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymPoly {
    nroots: usize,
    caps: Vec<u32>,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl SymPoly {
    pub fn one(nroots: usize, cap: u32) -> SymPoly {
        let mut terms = BTreeMap::new();
        terms.insert(vec![0; nroots], BigInt::one());
        SymPoly {
            nroots,
            caps: vec![cap; nroots],
            terms,
        }
    }

    /// Builds from terms, dropping zeros and anything above the cap.
    pub fn from_terms<I>(nroots: usize, cap: u32, terms: I) -> SymPoly
    where
        I: IntoIterator<Item = (Vec<u32>, BigInt)>,
    {
        let mut p = SymPoly {
            nroots,
            caps: vec![cap; nroots],
            terms: BTreeMap::new(),
        };
        for (e, c) in terms {
            assert_eq!(e.len(), nroots, "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    fn within_caps(&self, exps: &[u32]) -> bool {
        exps.iter().zip(&self.caps).all(|(e, c)| e <= c)
    }

    fn add_term(&mut self, exps: Vec<u32>, c: BigInt) {
        if c.is_zero() || !self.within_caps(&exps) {
            return;
        }
        let slot = self.terms.entry(exps).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn nroots(&self) -> usize {
        self.nroots
    }

    pub fn caps(&self) -> &[u32] {
        &self.caps
    }

    pub fn terms(&self) -> std::collections::btree_map::Iter<'_, Vec<u32>, BigInt> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: &[u32]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    /// Multiplies by the linear form `sum_i coeffs[i] u_i`, pruning at the caps.
    pub fn mul_linear(&self, coeffs: &[i64]) -> SymPoly {
        assert_eq!(coeffs.len(), self.nroots);
        let mut out = SymPoly {
            nroots: self.nroots,
            caps: self.caps.clone(),
            terms: BTreeMap::new(),
        };
        for (exps, c) in &self.terms {
            for (i, &a) in coeffs.iter().enumerate() {
                if a == 0 || exps[i] >= self.caps[i] {
                    continue;
                }
                let mut e = exps.clone();
                e[i] += 1;
                let slot = out.terms.entry(e).or_insert_with(BigInt::zero);
                *slot += c * a;
            }
        }
        out.terms.retain(|_, v| !v.is_zero());
        out
    }

    pub fn mul(&self, other: &SymPoly) -> SymPoly {
        assert_eq!(self.nroots, other.nroots);
        let caps: Vec<u32> = self.caps.iter().zip(&other.caps).map(|(a, b)| *a.min(b)).collect();
        let mut out = SymPoly {
            nroots: self.nroots,
            caps,
            terms: BTreeMap::new(),
        };
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> SymPoly {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= k;
        }
        out.terms.retain(|_, v| !v.is_zero());
        out
    }

    /// Swaps two roots.
    pub fn transpose(&self, i: usize, j: usize) -> SymPoly {
        let mut out = SymPoly {
            nroots: self.nroots,
            caps: self.caps.clone(),
            terms: BTreeMap::new(),
        };
        out.caps.swap(i, j);
        for (e, c) in &self.terms {
            let mut e = e.clone();
            e.swap(i, j);
            out.terms.insert(e, c.clone());
        }
        out
    }
}

/// `u_0 + ... + u_r`, the first Chern class of the quotient.
pub fn sigma1(nroots: usize, cap: u32) -> SymPoly {
    SymPoly::one(nroots, cap).mul_linear(&vec![1; nroots])
}

/// `u_0 u_1 ... u_r`, the top Chern class of the quotient.
pub fn top_elementary(nroots: usize, cap: u32) -> SymPoly {
    (0..nroots).fold(SymPoly::one(nroots, cap), |acc, i| {
        let mut unit = vec![0; nroots];
        unit[i] = 1;
        acc.mul_linear(&unit)
    })
}

fn weight_vectors(r: u32, d: u32) -> Vec<Vec<i64>> {
    // ascending lex order on (d_0, ..., d_r)
    let mut v: Vec<Vec<i64>> = monomial_basis(r as usize + 1, d)
        .into_iter()
        .map(|m| m.exps().iter().map(|&x| x as i64).collect())
        .collect();
    v.reverse();
    v
}

fn product_of(nroots: usize, cap: u32, factors: impl IntoIterator<Item = Vec<i64>>) -> SymPoly {
    factors
        .into_iter()
        .fold(SymPoly::one(nroots, cap), |acc, f| acc.mul_linear(&f))
}

/// `prod_{d_0 + ... + d_r = d} (d_0 u_0 + ... + d_r u_r)`: the top Chern
/// class of `Sym^d` of the quotient, expanded factor by factor with pruning.
pub fn chern_top_poly(r: u32, d: u32, cap: u32) -> SymPoly {
    product_of(r as usize + 1, cap, weight_vectors(r, d))
}

/// The same product over the non-extreme weights (`d e_i` excluded).
pub fn chern_cofactor(r: u32, d: u32, cap: u32) -> SymPoly {
    let extreme = |w: &Vec<i64>| w.iter().filter(|&&x| x != 0).count() == 1;
    product_of(
        r as usize + 1,
        cap,
        weight_vectors(r, d).into_iter().filter(|w| !extreme(w)),
    )
}

/// All permutations of `0..k` with their signs.
fn signed_permutations(k: usize) -> Vec<(Vec<usize>, i32)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<(Vec<usize>, i32)>) {
        let k = used.len();
        if prefix.len() == k {
            let inversions = (0..k)
                .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
                .filter(|&(i, j)| prefix[i] > prefix[j])
                .count();
            out.push((prefix.clone(), if inversions % 2 == 0 { 1 } else { -1 }));
            return;
        }
        for x in 0..k {
            if !used[x] {
                used[x] = true;
                prefix.push(x);
                rec(prefix, used, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

/// Degree of a class of top codimension `(r + 1)(n - r)` on `G(r + 1, n + 1)`.
pub fn integrate(p: &SymPoly, r: u32, n: u32) -> Result<BigInt> {
    let k = r as usize + 1;
    if p.nroots != k {
        return Err(Error::Domain(format!("{} roots for r = {r}", p.nroots)));
    }
    if n < r {
        return Err(Error::Domain(format!("no {r}-planes in P^{n}")));
    }
    if p.caps.iter().any(|&c| c < n) {
        return Err(Error::Domain(format!("exponent caps {:?} are below n = {n}", p.caps)));
    }
    let dim = (r + 1) * (n - r);
    if let Some((e, _)) = p.terms().find(|(e, _)| e.iter().sum::<u32>() != dim) {
        return Err(Error::Domain(format!(
            "term {e:?} has degree {}, the Grassmannian has dimension {dim}",
            e.iter().sum::<u32>()
        )));
    }
    // prod_{i<j}(u_i - u_j) = det[u_i^(r - j)] = sum_sigma sgn(sigma) prod_i u_i^(r - sigma(i))
    let mut acc = BigInt::zero();
    for (sigma, sign) in signed_permutations(k) {
        let mut exps = Vec::with_capacity(k);
        let mut ok = true;
        for (i, &s) in sigma.iter().enumerate() {
            let want = n as i64 - i as i64 - (r as i64 - s as i64);
            if want < 0 {
                ok = false;
                break;
            }
            exps.push(want as u32);
        }
        if ok {
            let c = p.coefficient(&exps);
            if sign > 0 {
                acc += c;
            } else {
                acc -= c;
            }
        }
    }
    Ok(acc)
}

fn to_dec<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// The number of `r`-planes on a general degree-`d` hypersurface in `P^n`
/// when that number is finite, with its quotient by `d^(r + 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearSpaceCount {
    pub r: u32,
    pub n: u32,
    pub d: u32,
    pub f1: i64,
    #[serde(serialize_with = "to_dec")]
    pub count: BigInt,
    #[serde(serialize_with = "to_dec")]
    pub d_power: BigInt,
    #[serde(serialize_with = "to_dec")]
    pub quotient: BigInt,
}

pub fn count_linear_spaces(r: u32, n: u32, d: u32) -> Result<LinearSpaceCount> {
    if d < 1 {
        return Err(Error::Domain("degree must be positive".into()));
    }
    let f1 = expected_dim(n, r, d, 1);
    if f1 != 0 {
        return Err(Error::Domain(format!(
            "expected dimension f_1({n},{r},{d}) = {f1}, not a finite count"
        )));
    }
    let count = integrate(&chern_top_poly(r, d, n), r, n)?;
    let d_power = BigInt::from(d).pow(r + 1);
    let cofactor = top_elementary(r as usize + 1, n).mul(&chern_cofactor(r, d, n));
    let factored = integrate(&cofactor, r, n)?;
    if &factored * &d_power != count {
        return Err(Error::Internal(format!(
            "full product gives {count}, factored product gives {d_power} * {factored}"
        )));
    }
    if !count.is_multiple_of(&d_power) {
        return Err(Error::Internal(format!("{count} is not divisible by {d_power}")));
    }
    Ok(LinearSpaceCount {
        r,
        n,
        d,
        f1,
        quotient: &count / &d_power,
        count,
        d_power,
    })
}

/// Plucker degree of the Fano scheme of `r`-planes on a general degree-`d`
/// hypersurface: the top Chern class times `sigma_1^{f_1}`.
pub fn fano_degree(r: u32, n: u32, d: u32) -> Result<BigInt> {
    let f1 = expected_dim(n, r, d, 1);
    if f1 < 0 {
        return Err(Error::Domain(format!(
            "f_1({n},{r},{d}) = {f1} < 0: Fano scheme is empty"
        )));
    }
    let k = r as usize + 1;
    let mut p = chern_top_poly(r, d, n);
    for _ in 0..f1 {
        p = p.mul_linear(&vec![1; k]);
    }
    let deg = integrate(&p, r, n)?;
    if deg.is_negative() {
        return Err(Error::Internal(format!("negative degree {deg}")));
    }
    Ok(deg)
}
