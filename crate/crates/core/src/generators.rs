//! Seeded search for c-generating linear systems.
//!
//! Random members are drawn attempt by attempt; each attempt has its own
//! ChaCha stream keyed by `(seed, attempt)`, and the first attempt whose
//! multiplication map is surjective is returned.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds;
use crate::error::{Error, Result};
use crate::polyring::{is_c_generating, monomial_basis, pdim, GradedForm, LinearSystem};
use crate::scalar::{Field, DEFAULT_PRIME};

pub const DEFAULT_COEFF_BOUND: i64 = 7;
pub const DEFAULT_MAX_ATTEMPTS: u32 = 32;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorRequest {
    pub r: u32,
    /// Degree of the members.
    pub b: u32,
    /// Number of members.
    pub m: u32,
    /// Generating exponent.
    pub c: u32,
    pub field: Field,
    pub seed: u64,
    pub max_attempts: u32,
    /// Coefficients over Q are drawn from `[-coeff_bound, coeff_bound]`.
    pub coeff_bound: i64,
}

impl GeneratorRequest {
    /// A request over `F_p` with `p = 2^31 - 1` and default search limits.
    pub fn new(r: u32, b: u32, m: u32, c: u32) -> Self {
        GeneratorRequest {
            r,
            b,
            m,
            c,
            field: Field::Prime(DEFAULT_PRIME),
            seed: 0,
            max_attempts: DEFAULT_MAX_ATTEMPTS,
            coeff_bound: DEFAULT_COEFF_BOUND,
        }
    }

    pub fn with_field(mut self, field: Field) -> Self {
        self.field = field;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_max_attempts(mut self, n: u32) -> Self {
        self.max_attempts = n;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.r < 1 || self.b < 1 || self.m < 1 || self.c < 1 || self.max_attempts < 1 {
            return Err(Error::Domain(format!(
                "generator request needs r, b, m, c, max_attempts >= 1: {self:?}"
            )));
        }
        Ok(())
    }
}

fn attempt_rng(seed: u64, attempt: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(attempt as u64);
    rng
}

/// A form with every coefficient drawn independently.
pub fn random_form<R: Rng + ?Sized>(
    rng: &mut R,
    field: Field,
    nvars: usize,
    degree: u32,
    coeff_bound: i64,
) -> GradedForm {
    let terms = monomial_basis(nvars, degree)
        .into_iter()
        .map(|m| (m.exps().to_vec(), field.random(rng, coeff_bound)))
        .collect::<Vec<_>>();
    GradedForm::from_terms(field, nvars, degree, terms).expect("basis monomials have the right shape")
}

/// Returns a verified c-generating system of `m` degree-`b` forms.
pub fn find_generating_system(req: &GeneratorRequest) -> Result<LinearSystem> {
    req.validate()?;
    let nvars = req.r as usize + 1;
    for attempt in 0..req.max_attempts {
        let mut rng = attempt_rng(req.seed, attempt);
        let members = (0..req.m)
            .map(|_| random_form(&mut rng, req.field, nvars, req.b, req.coeff_bound))
            .collect();
        let sys = LinearSystem::new(req.field, nvars, req.b, members)?;
        if is_c_generating(&sys, req.c) {
            return Ok(sys);
        }
    }
    Err(Error::SearchFailure {
        attempts: req.max_attempts,
    })
}

/// `m >= N_1(r, d) - r`: enough members for a 1-generating system in degree `d - 1`.
pub fn verify_hl_range(r: u32, d: u32, m: u32) -> bool {
    m as i64 >= bounds::n_1(r, d) - r as i64
}

/// `m >= P_r(e) + ceil(P_r(de) / P_r(e))`: enough members for an
/// e-generating system in degree `(d - 1) e`.
pub fn verify_nenashev_range(r: u32, d: u32, e: u32, m: u32) -> bool {
    m as i64 > bounds::n_tilde(r, d, e) - pdim(r, e) as i64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conic_pair_generates_cubics() {
        for seed in 0..5 {
            let req = GeneratorRequest::new(1, 2, 2, 1).with_seed(seed);
            let sys = find_generating_system(&req).unwrap();
            assert_eq!((sys.len(), sys.degree(), sys.nvars()), (2, 2, 2));
            assert!(is_c_generating(&sys, 1));
        }
    }

    #[test]
    fn nenashev_instance_over_q() {
        let req = GeneratorRequest::new(1, 4, 6, 2)
            .with_field(Field::Rational)
            .with_seed(3);
        let sys = find_generating_system(&req).unwrap();
        assert!(is_c_generating(&sys, 2));
    }

    #[test]
    fn single_conic_fails() {
        let req = GeneratorRequest::new(1, 2, 1, 1).with_max_attempts(4);
        assert_eq!(find_generating_system(&req), Err(Error::SearchFailure { attempts: 4 }));
    }

    #[test]
    fn deterministic_given_seed() {
        let req = GeneratorRequest::new(2, 3, 6, 1).with_seed(42);
        assert_eq!(
            find_generating_system(&req).unwrap(),
            find_generating_system(&req).unwrap()
        );
        let other = req.clone().with_seed(43);
        assert_ne!(
            find_generating_system(&req).unwrap(),
            find_generating_system(&other).unwrap()
        );
    }

    #[test]
    fn range_checks() {
        assert!(verify_hl_range(1, 3, 2));
        assert!(!verify_hl_range(1, 3, 1));
        assert!(verify_nenashev_range(1, 3, 2, 6));
        assert!(!verify_nenashev_range(1, 3, 2, 5));
    }

    #[test]
    fn invalid_request() {
        let req = GeneratorRequest::new(1, 2, 0, 1);
        assert!(matches!(find_generating_system(&req), Err(Error::Domain(_))));
    }
}
