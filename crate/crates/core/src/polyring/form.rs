use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

use super::monomial::Monomial;

/// A homogeneous polynomial of declared degree.
///
/// The zero form keeps its declared degree so that linear systems stay
/// well-shaped. Stored coefficients are never zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedForm {
    field: Field,
    nvars: usize,
    degree: u32,
    terms: BTreeMap<Monomial, Scalar>,
}

impl GradedForm {
    pub fn zero(field: Field, nvars: usize, degree: u32) -> GradedForm {
        GradedForm {
            field,
            nvars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: Field, nvars: usize, c: Scalar) -> GradedForm {
        let mut f = GradedForm::zero(field, nvars, 0);
        f.add_term(Monomial::one(nvars), c);
        f
    }

    pub fn var(field: Field, nvars: usize, i: usize) -> GradedForm {
        let mut f = GradedForm::zero(field, nvars, 1);
        f.add_term(Monomial::var(nvars, i), field.one());
        f
    }

    pub fn monomial(field: Field, exps: Vec<u32>, coeff: Scalar) -> GradedForm {
        let m = Monomial::new(exps);
        let mut f = GradedForm::zero(field, m.nvars(), m.degree());
        f.add_term(m, coeff);
        f
    }

    /// Builds a form from `(exponents, coefficient)` pairs, merging repeats.
    pub fn from_terms<I>(field: Field, nvars: usize, degree: u32, terms: I) -> Result<GradedForm>
    where
        I: IntoIterator<Item = (Vec<u32>, Scalar)>,
    {
        let mut f = GradedForm::zero(field, nvars, degree);
        for (exps, c) in terms {
            if c.field() != field {
                return Err(Error::MixedScalars);
            }
            let m = Monomial::new(exps);
            if m.nvars() != nvars || m.degree() != degree {
                return Err(Error::Domain(format!(
                    "monomial {:?} does not have {nvars} variables and degree {degree}",
                    m.exps()
                )));
            }
            f.add_term(m, c);
        }
        Ok(f)
    }

    /// Small-integer convenience constructor, used heavily in tests.
    pub fn from_int_terms(field: Field, nvars: usize, degree: u32, terms: &[(&[u32], i64)]) -> GradedForm {
        GradedForm::from_terms(
            field,
            nvars,
            degree,
            terms.iter().map(|(e, c)| (e.to_vec(), field.from_i64(*c))),
        )
        .expect("well-formed integer terms")
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = existing.add(&c);
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, exps: &[u32]) -> Scalar {
        self.terms
            .get(&Monomial::new(exps.to_vec()))
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    fn check_compatible(&self, other: &GradedForm) -> Result<()> {
        if self.field != other.field {
            return Err(Error::MixedScalars);
        }
        if self.nvars != other.nvars || self.degree != other.degree {
            return Err(Error::Domain(format!(
                "shape mismatch: ({} vars, degree {}) vs ({} vars, degree {})",
                self.nvars, self.degree, other.nvars, other.degree
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &GradedForm) -> Result<GradedForm> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &GradedForm) -> Result<GradedForm> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> GradedForm {
        self.scale(&self.field.from_i64(-1))
    }

    pub fn scale(&self, c: &Scalar) -> GradedForm {
        let mut out = GradedForm::zero(self.field, self.nvars, self.degree);
        if c.is_zero() {
            return out;
        }
        for (m, a) in &self.terms {
            out.terms.insert(m.clone(), a.mul(c));
        }
        out
    }

    pub fn mul(&self, other: &GradedForm) -> Result<GradedForm> {
        if self.field != other.field {
            return Err(Error::MixedScalars);
        }
        if self.nvars != other.nvars {
            return Err(Error::Domain("variable count mismatch in product".into()));
        }
        let mut out = GradedForm::zero(self.field, self.nvars, self.degree + other.degree);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1.mul(c2));
            }
        }
        Ok(out)
    }

    pub fn mul_monomial(&self, m: &Monomial) -> GradedForm {
        debug_assert_eq!(m.nvars(), self.nvars);
        GradedForm {
            field: self.field,
            nvars: self.nvars,
            degree: self.degree + m.degree(),
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> GradedForm {
        let mut acc = GradedForm::constant(self.field, self.nvars, self.field.one());
        for _ in 0..k {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }

    /// Formal partial derivative in variable `i`.
    pub fn partial(&self, i: usize) -> Result<GradedForm> {
        if i >= self.nvars {
            return Err(Error::Domain(format!("variable {i} out of range")));
        }
        if self.degree == 0 {
            return Err(Error::Domain("derivative of a constant form".into()));
        }
        let mut out = GradedForm::zero(self.field, self.nvars, self.degree - 1);
        for (m, c) in &self.terms {
            let e = m.exps()[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps().to_vec();
            exps[i] -= 1;
            out.add_term(Monomial::new(exps), c.mul_u64(e as u64));
        }
        Ok(out)
    }

    /// Substitutes variable `i` by `images[i]`; all images must share one
    /// degree `k`, giving a form of degree `self.degree * k`.
    pub fn substitute(&self, images: &[GradedForm]) -> Result<GradedForm> {
        if images.len() != self.nvars {
            return Err(Error::Domain(format!(
                "expected {} images, got {}",
                self.nvars,
                images.len()
            )));
        }
        let Some(first) = images.first() else {
            return Ok(self.clone());
        };
        let (target_nvars, k) = (first.nvars, first.degree);
        for img in images {
            if img.field != self.field {
                return Err(Error::MixedScalars);
            }
            if img.nvars != target_nvars || img.degree != k {
                return Err(Error::Domain("substitution images must share shape".into()));
            }
        }
        let mut powers: Vec<Vec<GradedForm>> = images
            .iter()
            .map(|g| {
                vec![
                    GradedForm::constant(self.field, target_nvars, self.field.one()),
                    g.clone(),
                ]
            })
            .collect();
        let mut out = GradedForm::zero(self.field, target_nvars, self.degree * k);
        for (m, c) in &self.terms {
            let mut prod = GradedForm::constant(self.field, target_nvars, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&images[i])?;
                    powers[i].push(next);
                }
                prod = prod.mul(&powers[i][e as usize])?;
            }
            for (pm, pc) in prod.terms {
                out.add_term(pm, pc);
            }
        }
        Ok(out)
    }

    /// Renders the form with caller-supplied variable names.
    pub fn to_text_with<F: Fn(usize) -> String>(&self, name: F) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            let abs = if negative { c.neg() } else { c.clone() };
            if k == 0 {
                if negative {
                    s.push('-');
                }
            } else {
                s.push_str(if negative { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.degree() == 0 {
                factors.push(abs.to_string());
            }
            for (i, &e) in m.exps().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(name(i)),
                    _ => factors.push(format!("{}^{}", name(i), e)),
                }
            }
            s.push_str(&factors.join("*"));
        }
        s
    }
}

impl fmt::Display for GradedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text_with(|i| format!("t{i}")))
    }
}
