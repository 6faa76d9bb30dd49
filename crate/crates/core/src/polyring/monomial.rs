use std::cmp::Ordering;
use std::collections::HashMap;

/// An exponent vector with cached total degree.
///
/// Ordering is graded-lexicographic with `t0 > t1 > ...`: higher degree is
/// greater, and within a degree the vector with the larger first differing
/// exponent is greater.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
    degree: u32,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Monomial {
        let degree = exps.iter().sum();
        Monomial { exps, degree }
    }

    pub fn one(nvars: usize) -> Monomial {
        Monomial {
            exps: vec![0; nvars],
            degree: 0,
        }
    }

    pub fn var(nvars: usize, i: usize) -> Monomial {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Monomial { exps, degree: 1 }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
            degree: self.degree + other.degree,
        }
    }

    /// Coordinatewise `self <= other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials of the given degree in `nvars` variables, largest first
/// (`t0^d, t0^(d-1) t1, ...`).
pub fn monomial_basis(nvars: usize, degree: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut buf = vec![0u32; nvars];
    if nvars == 0 {
        if degree == 0 {
            out.push(Monomial::new(Vec::new()));
        }
        return out;
    }
    fill(&mut buf, 0, degree, &mut out);
    out
}

fn fill(buf: &mut [u32], pos: usize, remaining: u32, out: &mut Vec<Monomial>) {
    if pos + 1 == buf.len() {
        buf[pos] = remaining;
        out.push(Monomial::new(buf.to_vec()));
        return;
    }
    for e in (0..=remaining).rev() {
        buf[pos] = e;
        fill(buf, pos + 1, remaining - e, out);
    }
}

/// Basis of a graded piece with a reverse lookup from monomial to index.
#[derive(Clone, Debug)]
pub struct BasisIndex {
    monomials: Vec<Monomial>,
    index: HashMap<Vec<u32>, usize>,
}

impl BasisIndex {
    pub fn new(nvars: usize, degree: u32) -> BasisIndex {
        let monomials = monomial_basis(nvars, degree);
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.exps().to_vec(), i))
            .collect();
        BasisIndex { monomials, index }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn position(&self, exps: &[u32]) -> Option<usize> {
        self.index.get(exps).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grlex_order() {
        let a = Monomial::new(vec![2, 0]);
        let b = Monomial::new(vec![1, 1]);
        let c = Monomial::new(vec![0, 3]);
        assert!(a > b);
        assert!(c > a);
    }

    #[test]
    fn basis_is_sorted_descending() {
        let basis = monomial_basis(3, 3);
        assert!(basis.windows(2).all(|w| w[0] > w[1]));
        assert_eq!(basis.len(), 10);
    }

    #[test]
    fn zero_variables() {
        assert_eq!(monomial_basis(0, 0).len(), 1);
        assert!(monomial_basis(0, 2).is_empty());
    }
}
