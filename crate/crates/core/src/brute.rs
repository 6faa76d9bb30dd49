//! Exhaustive enumeration of `r`-planes in `P^n(F_q)`.
//!
//! Planes are stored as reduced row echelon matrices. Enumeration walks the
//! Schubert cells (pivot sets in colex order) and, inside a cell, the free
//! entries in odometer order. Counting runs one cell per rayon task.

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polyring::rank_mod_p;
use crate::polyring::GradedForm;
use crate::scalar::{inv_mod, Field};

/// A canonical `r`-plane: an `(r + 1) x (n + 1)` RREF matrix over `F_q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlaneRep {
    q: u64,
    n: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

fn check_prime(q: u64) -> Result<Field> {
    Field::prime(q).map_err(|_| Error::Domain(format!("q = {q} is not a supported prime")))
}

/// Row-reduces in place; returns the pivot columns of the nonzero rows.
fn rref(rows: &mut Vec<Vec<u64>>, q: u64) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(sel) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, sel);
        let inv = inv_mod(rows[r][col], q);
        for v in rows[r].iter_mut() {
            *v = *v * inv % q;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            let f = row[col];
            if i != r && f != 0 {
                for (v, &pv) in row.iter_mut().zip(&pivot_row) {
                    *v = (*v + q - f * pv % q) % q;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

impl PlaneRep {
    /// Canonicalizes the row space of `rows`; the rows must be independent.
    pub fn from_rows(q: u64, rows: Vec<Vec<i64>>) -> Result<PlaneRep> {
        check_prime(q)?;
        let Some(width) = rows.first().map(Vec::len) else {
            return Err(Error::Domain("a plane needs at least one row".into()));
        };
        if width == 0 || rows.iter().any(|r| r.len() != width) {
            return Err(Error::Domain("ragged or empty rows".into()));
        }
        let k = rows.len();
        let qi = q as i64;
        let mut m: Vec<Vec<u64>> = rows
            .into_iter()
            .map(|r| r.into_iter().map(|v| v.rem_euclid(qi) as u64).collect())
            .collect();
        let pivots = rref(&mut m, q);
        if pivots.len() != k {
            return Err(Error::Domain(format!(
                "rows span a space of rank {} < {k}",
                pivots.len()
            )));
        }
        Ok(PlaneRep {
            q,
            n: width - 1,
            rows: m,
            pivots,
        })
    }

    /// The coordinate plane `Zero(t_j : j in zeros)`.
    pub fn coordinate(q: u64, n: usize, zeros: &[usize]) -> Result<PlaneRep> {
        let rows = (0..=n)
            .filter(|j| !zeros.contains(j))
            .map(|j| (0..=n).map(|c| i64::from(c == j)).collect())
            .collect();
        PlaneRep::from_rows(q, rows)
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Projective dimension of the intersection; `-1` when empty.
    pub fn intersection_dim(&self, other: &PlaneRep) -> i64 {
        assert_eq!((self.q, self.n), (other.q, other.n), "planes in different spaces");
        let stacked: Vec<Vec<u64>> = self.rows.iter().chain(&other.rows).cloned().collect();
        let rank = rank_mod_p(stacked, self.q);
        (self.rows.len() + other.rows.len()) as i64 - rank as i64 - 1
    }

    /// The coordinate functions `x_j = sum_i s_i M[i][j]` as linear forms in `s`.
    pub fn parametrization(&self) -> Vec<GradedForm> {
        let field = Field::Prime(self.q);
        let k = self.rows.len();
        (0..=self.n)
            .map(|j| {
                let terms = (0..k).filter(|&i| self.rows[i][j] != 0).map(|i| {
                    let mut e = vec![0; k];
                    e[i] = 1;
                    (e, field.from_i64(self.rows[i][j] as i64))
                });
                GradedForm::from_terms(field, k, 1, terms).expect("linear terms")
            })
            .collect()
    }
}

/// `[a choose b]_q`, the number of `b`-dimensional subspaces of `F_q^a`.
pub fn gaussian_binomial(a: u32, b: u32, q: u64) -> BigInt {
    if b > a {
        return BigInt::from(0);
    }
    let q = BigInt::from(q);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..b {
        num *= q.pow(a - i) - 1u32;
        den *= q.pow(i + 1) - 1u32;
    }
    num / den
}

/// A Schubert cell: fixed pivot columns, with free entries to the right of
/// each pivot outside the other pivot columns.
#[derive(Clone, Debug)]
struct Cell {
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
}

impl Cell {
    fn new(n: usize, pivots: Vec<usize>) -> Cell {
        let mut free = Vec::new();
        for (i, &p) in pivots.iter().enumerate() {
            for c in p + 1..=n {
                if !pivots.contains(&c) {
                    free.push((i, c));
                }
            }
        }
        Cell { pivots, free }
    }

    fn size(&self, q: u64) -> Result<u64> {
        q.checked_pow(self.free.len() as u32)
            .ok_or_else(|| Error::Range(format!("cell with {} free entries is too large", self.free.len())))
    }

    fn planes(&self, n: usize, q: u64) -> Result<impl Iterator<Item = PlaneRep> + '_> {
        let total = self.size(q)?;
        let k = self.pivots.len();
        Ok((0..total).map(move |mut idx| {
            let mut rows = vec![vec![0u64; n + 1]; k];
            for (i, &p) in self.pivots.iter().enumerate() {
                rows[i][p] = 1;
            }
            // last free entry turns fastest
            for &(i, c) in self.free.iter().rev() {
                rows[i][c] = idx % q;
                idx /= q;
            }
            PlaneRep {
                q,
                n,
                rows,
                pivots: self.pivots.clone(),
            }
        }))
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            rec(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn cells(n: usize, r: usize, q: u64) -> Result<Vec<Cell>> {
    check_prime(q)?;
    if r > n {
        return Err(Error::Domain(format!("no {r}-planes in P^{n}")));
    }
    let mut pivot_sets = combinations(n + 1, r + 1);
    pivot_sets.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
    let cells: Vec<Cell> = pivot_sets.into_iter().map(|p| Cell::new(n, p)).collect();
    for c in &cells {
        c.size(q)?;
    }
    Ok(cells)
}

/// Every `r`-plane of `P^n(F_q)`, each exactly once, in cell order.
pub fn enumerate_planes(n: usize, r: usize, q: u64) -> Result<Vec<PlaneRep>> {
    let mut out = Vec::new();
    for cell in cells(n, r, q)? {
        out.extend(cell.planes(n, q)?);
    }
    Ok(out)
}

/// Counts planes satisfying `pred`, one Schubert cell per task.
pub fn count_planes<F>(n: usize, r: usize, q: u64, pred: F) -> Result<u64>
where
    F: Fn(&PlaneRep) -> bool + Sync,
{
    let cells = cells(n, r, q)?;
    cells
        .par_iter()
        .map(|c| Ok(c.planes(n, q)?.filter(|p| pred(p)).count() as u64))
        .try_reduce(|| 0, |a, b| Ok(a + b))
}

/// Planes satisfying `pred`, in enumeration order.
pub fn collect_planes<F>(n: usize, r: usize, q: u64, pred: F) -> Result<Vec<PlaneRep>>
where
    F: Fn(&PlaneRep) -> bool + Sync,
{
    let cells = cells(n, r, q)?;
    let per_cell: Vec<Vec<PlaneRep>> = cells
        .par_iter()
        .map(|c| Ok(c.planes(n, q)?.filter(|p| pred(p)).collect()))
        .collect::<Result<_>>()?;
    Ok(per_cell.into_iter().flatten().collect())
}

fn check_form(g: &GradedForm, q: u64, n: usize) -> Result<()> {
    if g.field() != Field::Prime(q) {
        return Err(Error::Domain(format!("form is over {}, planes over F_{q}", g.field())));
    }
    if g.nvars() != n + 1 {
        return Err(Error::Domain(format!(
            "form has {} variables, expected {}",
            g.nvars(),
            n + 1
        )));
    }
    Ok(())
}

/// True iff `g` restricted to the plane is the zero polynomial.
pub fn plane_contained(g: &GradedForm, plane: &PlaneRep) -> Result<bool> {
    check_form(g, plane.q, plane.n)?;
    Ok(g.substitute(&plane.parametrization())?.is_zero())
}

/// Number of `r`-planes over `F_q` inside `Zero(g)`.
pub fn count_fano_points(g: &GradedForm, r: usize, q: u64) -> Result<u64> {
    let n = g
        .nvars()
        .checked_sub(1)
        .ok_or_else(|| Error::Domain("form in zero variables".into()))?;
    check_form(g, q, n)?;
    count_planes(n, r, q, |p| {
        g.substitute(&p.parametrization()).map(|h| h.is_zero()).unwrap_or(false)
    })
}

/// Number of `r`-planes meeting every plane in `others`.
pub fn count_planes_meeting(n: usize, r: usize, q: u64, others: &[PlaneRep]) -> Result<u64> {
    if others.iter().any(|o| o.q != q || o.n != n) {
        return Err(Error::Domain("reference planes live in a different space".into()));
    }
    count_planes(n, r, q, |p| others.iter().all(|o| p.intersection_dim(o) >= 0))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FanoCount {
    pub q: u64,
    pub r: usize,
    pub n: usize,
    pub count: u64,
}

/// `sum_i t_i t_{r+1+i}` on `P^(2r+1)`.
pub fn split_quadric(r: usize, q: u64) -> Result<GradedForm> {
    let field = check_prime(q)?;
    let n = 2 * r + 1;
    let terms = (0..=r).map(|i| {
        let mut e = vec![0; n + 1];
        e[i] = 1;
        e[r + 1 + i] = 1;
        (e, field.one())
    });
    GradedForm::from_terms(field, n + 1, 2, terms)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyChecks {
    pub both_nonempty: bool,
    pub equal_sizes: bool,
    /// Total equals `prod_{i=0..r} (q^i + 1)`.
    pub total_matches: bool,
    /// For every pair, same class iff `dim(A ∩ B) ≡ r (mod 2)`.
    pub parity_consistent: bool,
    /// Pairs meeting in dimension `r - 1` always lie in different classes.
    pub adjacent_cross: bool,
    pub adjacent_pairs: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub same_family_disjoint: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cross_family_meet_in_point: Option<bool>,
    /// Pi, Lambda, Gamma lie on the quadric and in the predicted classes.
    pub reference_pattern: bool,
}

impl FamilyChecks {
    pub fn all(&self) -> bool {
        self.both_nonempty
            && self.equal_sizes
            && self.total_matches
            && self.parity_consistent
            && self.adjacent_cross
            && self.same_family_disjoint.unwrap_or(true)
            && self.cross_family_meet_in_point.unwrap_or(true)
            && self.reference_pattern
    }
}

/// Classes of the reference planes; Pi is class 0 by definition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReferenceClasses {
    pub pi: u8,
    pub lambda: u8,
    pub gamma: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadricFamilies {
    pub q: u64,
    pub r: usize,
    pub n: usize,
    pub family_sizes: [u64; 2],
    pub reference: ReferenceClasses,
    pub checks: FamilyChecks,
    pub cross_intersection_ok: bool,
}

fn parity_class(plane: &PlaneRep, pi: &PlaneRep, r: usize) -> u8 {
    let d = plane.intersection_dim(pi) - r as i64;
    d.rem_euclid(2) as u8
}

/// Splits the `r`-planes on `sum_i t_i t_{r+1+i}` over `F_q` into two
/// classes by intersection parity with `Pi = Zero(t_{r+1}, ..., t_{2r+1})`
/// and checks the class structure exhaustively.
pub fn quadric_families(r: usize, q: u64) -> Result<QuadricFamilies> {
    check_prime(q)?;
    if q == 2 {
        return Err(Error::Domain(
            "even characteristic: the quadric's Gram matrix degenerates".into(),
        ));
    }
    if r < 1 {
        return Err(Error::Domain("r must be at least 1".into()));
    }
    let n = 2 * r + 1;
    let quad = split_quadric(r, q)?;
    let planes = collect_planes(n, r, q, |p| plane_contained(&quad, p).unwrap_or(false))?;

    let pi = PlaneRep::coordinate(q, n, &(r + 1..=n).collect::<Vec<_>>())?;
    let lambda = PlaneRep::coordinate(q, n, &(0..=r).collect::<Vec<_>>())?;
    let mut gamma_zeros = vec![0];
    gamma_zeros.extend(r + 2..=n);
    let gamma = PlaneRep::coordinate(q, n, &gamma_zeros)?;

    let classes: Vec<u8> = planes.iter().map(|p| parity_class(p, &pi, r)).collect();
    let mut sizes = [0u64; 2];
    for &c in &classes {
        sizes[c as usize] += 1;
    }

    let mut parity_consistent = true;
    let mut adjacent_cross = true;
    let mut adjacent_pairs = 0;
    let mut same_disjoint = true;
    let mut cross_point = true;
    for i in 0..planes.len() {
        for j in i + 1..planes.len() {
            let dim = planes[i].intersection_dim(&planes[j]);
            let same = classes[i] == classes[j];
            if same != ((dim - r as i64).rem_euclid(2) == 0) {
                parity_consistent = false;
            }
            if dim == r as i64 - 1 {
                adjacent_pairs += 1;
                if same {
                    adjacent_cross = false;
                }
            }
            if same && dim != -1 {
                same_disjoint = false;
            }
            if !same && dim != 0 {
                cross_point = false;
            }
        }
    }

    let total: u64 = (0..=r as u32).map(|i| q.pow(i) + 1).product();
    let reference = ReferenceClasses {
        pi: parity_class(&pi, &pi, r),
        lambda: parity_class(&lambda, &pi, r),
        gamma: parity_class(&gamma, &pi, r),
    };
    let on_quadric = [&pi, &lambda, &gamma]
        .iter()
        .map(|p| plane_contained(&quad, p))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|b| b);
    // Lambda meets Pi in the empty set (dimension -1), Gamma meets it in dimension r - 1
    let lambda_expected = u8::from(r.is_multiple_of(2));
    let reference_pattern =
        on_quadric && reference.pi == 0 && reference.lambda == lambda_expected && reference.gamma == 1;

    let checks = FamilyChecks {
        both_nonempty: sizes[0] > 0 && sizes[1] > 0,
        equal_sizes: sizes[0] == sizes[1],
        total_matches: planes.len() as u64 == total,
        parity_consistent,
        adjacent_cross,
        adjacent_pairs,
        same_family_disjoint: (r == 1).then_some(same_disjoint),
        cross_family_meet_in_point: (r == 1).then_some(cross_point),
        reference_pattern,
    };
    let ok = checks.all();
    Ok(QuadricFamilies {
        q,
        r,
        n,
        family_sizes: sizes,
        reference,
        checks,
        cross_intersection_ok: ok,
    })
}
