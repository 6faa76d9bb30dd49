//! Homogeneous polynomials, graded-piece bases and multiplication maps.

mod form;
mod matrix;
mod monomial;
pub mod parse;

use num_bigint::BigInt;

pub use form::GradedForm;
pub(crate) use matrix::rank_mod_p;
pub use matrix::Matrix;
pub use monomial::{monomial_basis, BasisIndex, Monomial};
pub use parse::{parse_form, parse_form_with};

use crate::error::{Error, Result};
use crate::scalar::Field;

/// `P_r(d) = binom(d + r, r)`, the dimension of degree-`d` forms in `r + 1`
/// variables, as a numerical polynomial in `d`. Defined for `d >= -r`.
pub fn graded_dim(r: u32, d: i64) -> Result<u64> {
    if d < -(r as i64) {
        return Err(Error::Domain(format!("P_{r}({d}) is out of contract for d < -r")));
    }
    if d < 0 {
        // one of the factors d + i, 1 <= i <= r, vanishes
        return Ok(0);
    }
    let mut acc: u128 = 1;
    for i in 1..=r as u128 {
        acc = acc
            .checked_mul(d as u128 + i)
            .ok_or_else(|| Error::Domain("graded dimension overflows".into()))?
            / i;
    }
    u64::try_from(acc).map_err(|_| Error::Domain("graded dimension overflows".into()))
}

/// `P_r(d)` for nonnegative `d`, at desk scale.
pub fn pdim(r: u32, d: u32) -> usize {
    graded_dim(r, d as i64).expect("graded dimension in range") as usize
}

/// An ordered list of forms of one degree, read as a map `W -> S_b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    field: Field,
    nvars: usize,
    degree: u32,
    members: Vec<GradedForm>,
}

impl LinearSystem {
    pub fn new(field: Field, nvars: usize, degree: u32, members: Vec<GradedForm>) -> Result<Self> {
        if nvars == 0 {
            return Err(Error::Domain("a linear system needs at least one variable".into()));
        }
        for g in &members {
            if g.field() != field {
                return Err(Error::MixedScalars);
            }
            if g.nvars() != nvars || g.degree() != degree {
                return Err(Error::Domain(format!(
                    "member {g} is not a degree-{degree} form in {nvars} variables"
                )));
            }
        }
        Ok(LinearSystem {
            field,
            nvars,
            degree,
            members,
        })
    }

    /// Builds a system from nonempty members, taking the shape from the first.
    pub fn from_members(members: Vec<GradedForm>) -> Result<Self> {
        let first = members
            .first()
            .ok_or_else(|| Error::Domain("empty member list needs an explicit shape".into()))?;
        let (f, n, d) = (first.field(), first.nvars(), first.degree());
        LinearSystem::new(f, n, d, members)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// `r` with `nvars = r + 1`.
    pub fn r(&self) -> u32 {
        self.nvars as u32 - 1
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn members(&self) -> &[GradedForm] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Memberwise sum of two systems of the same shape.
    pub fn add(&self, other: &LinearSystem) -> Result<LinearSystem> {
        if self.len() != other.len() {
            return Err(Error::Domain("systems differ in length".into()));
        }
        let members = self
            .members
            .iter()
            .zip(&other.members)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        LinearSystem::new(self.field, self.nvars, self.degree, members)
    }

    /// Rendered as a JSON-friendly list of text-grammar strings.
    pub fn to_texts(&self) -> Vec<String> {
        self.members.iter().map(ToString::to_string).collect()
    }
}

/// The matrix of `phi_c: W (x) S_c -> S_{b+c}`.
///
/// Columns run member-major over the graded-lex basis of `S_c`; rows run
/// over the graded-lex basis of `S_{b+c}`.
pub fn multiplication_map(sys: &LinearSystem, c: u32) -> Matrix {
    let target = BasisIndex::new(sys.nvars, sys.degree + c);
    let source = monomial_basis(sys.nvars, c);
    let mut m = Matrix::zeros(sys.field, target.len(), sys.len() * source.len());
    for (i, g) in sys.members.iter().enumerate() {
        for (j, mono) in source.iter().enumerate() {
            let col = i * source.len() + j;
            for (tm, coef) in g.mul_monomial(mono).terms() {
                let row = target.position(tm.exps()).expect("product lands in target degree");
                m.set(row, col, coef.clone());
            }
        }
    }
    m
}

/// Exact rank of a matrix; see [`Matrix::rank`].
pub fn rank(m: &Matrix) -> Result<usize> {
    m.rank()
}

/// Rank of `phi_c`, computed without materializing a scalar matrix.
pub fn map_rank(sys: &LinearSystem, c: u32) -> usize {
    let target = BasisIndex::new(sys.nvars, sys.degree + c);
    let source = monomial_basis(sys.nvars, c);
    match sys.field {
        Field::Prime(p) => {
            let mut rows = Vec::with_capacity(sys.len() * source.len());
            for g in &sys.members {
                for mono in &source {
                    let mut row = vec![0u64; target.len()];
                    for (tm, coef) in g.terms() {
                        let pos = target.position(tm.mul(mono).exps()).unwrap();
                        row[pos] = coef.as_fp().unwrap().value();
                    }
                    rows.push(row);
                }
            }
            matrix::rank_mod_p(rows, p)
        }
        Field::Rational => {
            let mut rows = Vec::with_capacity(sys.len() * source.len());
            for g in &sys.members {
                let lcm = g.terms().fold(BigInt::from(1), |acc, (_, c)| {
                    num_integer::Integer::lcm(&acc, c.as_rational().unwrap().denom())
                });
                for mono in &source {
                    let mut row = vec![BigInt::from(0); target.len()];
                    for (tm, coef) in g.terms() {
                        let pos = target.position(tm.mul(mono).exps()).unwrap();
                        let q = coef.as_rational().unwrap();
                        row[pos] = q.numer() * (&lcm / q.denom());
                    }
                    rows.push(row);
                }
            }
            matrix::rank_bareiss(rows)
        }
    }
}

/// True iff `phi_c` is surjective onto `S_{b+c}`.
pub fn is_c_generating(sys: &LinearSystem, c: u32) -> bool {
    map_rank(sys, c) == pdim(sys.r(), sys.degree + c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(field: Field, members: &[&[(&[u32], i64)]], degree: u32) -> LinearSystem {
        let forms = members
            .iter()
            .map(|t| GradedForm::from_int_terms(field, 2, degree, t))
            .collect();
        LinearSystem::new(field, 2, degree, forms).unwrap()
    }

    #[test]
    fn graded_dim_examples() {
        assert_eq!(graded_dim(1, 3).unwrap(), 4);
        assert_eq!(graded_dim(2, 2).unwrap(), 6);
        assert_eq!(graded_dim(1, -1).unwrap(), 0);
        assert_eq!(graded_dim(0, 5).unwrap(), 1);
        assert_eq!(graded_dim(3, -3).unwrap(), 0);
        assert!(matches!(graded_dim(1, -2), Err(Error::Domain(_))));
    }

    #[test]
    fn monomial_basis_examples() {
        let b = monomial_basis(2, 2);
        let exps: Vec<_> = b.iter().map(|m| m.exps().to_vec()).collect();
        assert_eq!(exps, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        let b = monomial_basis(3, 1);
        let exps: Vec<_> = b.iter().map(|m| m.exps().to_vec()).collect();
        assert_eq!(exps, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(monomial_basis(2, 6).len(), 7);
    }

    #[test]
    fn basis_size_matches_graded_dim() {
        for r in 0..=5u32 {
            for d in 0..=12u32 {
                assert_eq!(monomial_basis(r as usize + 1, d).len(), pdim(r, d), "r={r} d={d}");
            }
        }
    }

    #[test]
    fn multiplication_map_examples() {
        let f = Field::Rational;
        let two = sys(f, &[&[(&[2, 0], 1)], &[(&[0, 2], 1)]], 2);
        let m = multiplication_map(&two, 1);
        assert_eq!((m.nrows(), m.ncols()), (4, 4));
        assert_eq!(m.rank().unwrap(), 4);
        // columns: t0^2*t0, t0^2*t1, t1^2*t0, t1^2*t1 -> rows t0^3, t0^2t1, t0t1^2, t1^3
        assert!(m.get(0, 0).is_one() && m.get(1, 1).is_one());
        assert!(m.get(2, 2).is_one() && m.get(3, 3).is_one());

        let one = sys(f, &[&[(&[2, 0], 1)]], 2);
        let m = multiplication_map(&one, 1);
        assert_eq!((m.nrows(), m.ncols()), (4, 2));
        assert_eq!(m.rank().unwrap(), 2);
    }

    #[test]
    fn multiplication_map_shape_contract() {
        let f = Field::Prime(101);
        let s = sys(f, &[&[(&[3, 0], 1)], &[(&[1, 2], 4)], &[]], 3);
        for c in 0..4 {
            let m = multiplication_map(&s, c);
            assert_eq!(m.nrows(), pdim(1, 3 + c));
            assert_eq!(m.ncols(), 3 * pdim(1, c));
        }
    }

    #[test]
    fn c_generating_examples() {
        let f = Field::Rational;
        let full = sys(f, &[&[(&[2, 0], 1)], &[(&[1, 1], 1)], &[(&[0, 2], 1)]], 2);
        assert!(is_c_generating(&full, 1));
        let single = sys(f, &[&[(&[2, 0], 1)]], 2);
        assert!(!is_c_generating(&single, 1));
        let pair = sys(f, &[&[(&[2, 0], 1)], &[(&[0, 2], 1)]], 2);
        assert!(is_c_generating(&pair, 1));
    }

    #[test]
    fn fast_rank_agrees_with_materialized_matrix() {
        for field in [Field::Rational, Field::Prime(7)] {
            let s = sys(
                field,
                &[&[(&[2, 0], 3), (&[1, 1], -2)], &[(&[1, 1], 1), (&[0, 2], 5)]],
                2,
            );
            for c in 0..4 {
                assert_eq!(map_rank(&s, c), multiplication_map(&s, c).rank().unwrap());
            }
        }
    }

    #[test]
    fn zero_members_are_allowed() {
        let s = sys(Field::Rational, &[&[], &[(&[2, 0], 1)]], 2);
        assert_eq!(s.len(), 2);
        assert_eq!(map_rank(&s, 0), 1);
    }
}
