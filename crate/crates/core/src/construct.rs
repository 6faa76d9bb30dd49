//! Explicit hypersurfaces containing a coordinate Veronese variety.
//!
//! Ambient coordinates are split as `(x_w)_{w in Delta_r(e)}` followed by
//! `y_1..y_m`. The Veronese is `x_w = t^w, y = 0` and its linear span is
//! `y = 0`. Every construction here returns a form `sum_i y_i H_i(x)` (or a
//! smooth quadric through the Veronese) together with the frame.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::bounds;
use crate::error::{Error, Result};
use crate::generators::{find_generating_system, random_form, GeneratorRequest, DEFAULT_COEFF_BOUND};
use crate::polyring::parse::{parse_form_with, VarRef};
use crate::polyring::{monomial_basis, pdim, GradedForm, LinearSystem, Matrix};
use crate::scalar::{Field, Scalar};
use crate::smoothness;

const QUADRIC_ATTEMPTS: u32 = 32;

/// The standard coordinate split for a Veronese `e`-uple `r`-fold in `P^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VeroneseFrame {
    r: u32,
    e: u32,
    n: u32,
    x_coords: Vec<Vec<u32>>,
    /// Index printed for the first y-coordinate (1, or 0 for pencils).
    y_base: usize,
}

impl VeroneseFrame {
    pub fn new(r: u32, e: u32, n: u32) -> Result<Self> {
        if r < 1 || e < 1 {
            return Err(Error::Domain(format!("frame needs r, e >= 1 (got r={r}, e={e})")));
        }
        let span = bounds::span_dim(r, e);
        if (n as i64) < span {
            return Err(Error::Range(format!("n = {n} < n_e(r) = {span}")));
        }
        let x_coords = monomial_basis(r as usize + 1, e)
            .into_iter()
            .map(|m| m.exps().to_vec())
            .collect();
        Ok(VeroneseFrame {
            r,
            e,
            n,
            x_coords,
            y_base: 1,
        })
    }

    pub(crate) fn with_y_base(mut self, base: usize) -> Self {
        self.y_base = base;
        self
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Exponent vectors `Delta_r(e)` naming the x-coordinates, graded-lex.
    pub fn x_coords(&self) -> &[Vec<u32>] {
        &self.x_coords
    }

    pub fn x_count(&self) -> usize {
        self.x_coords.len()
    }

    /// Number of y-coordinates, `n + 1 - P_r(e)`.
    pub fn m(&self) -> usize {
        self.n as usize + 1 - self.x_count()
    }

    pub fn nvars(&self) -> usize {
        self.n as usize + 1
    }

    /// Ambient position of the `j`-th y-coordinate (0-based).
    pub fn y_pos(&self, j: usize) -> usize {
        self.x_count() + j
    }

    pub fn var_name(&self, pos: usize) -> String {
        if pos < self.x_count() {
            format!("x{pos}")
        } else {
            format!("y{}", pos - self.x_count() + self.y_base)
        }
    }

    fn resolve(&self, v: VarRef) -> Option<usize> {
        match v.name {
            'x' if v.index < self.x_count() => Some(v.index),
            'y' if v.index >= self.y_base && v.index - self.y_base < self.m() => {
                Some(self.y_pos(v.index - self.y_base))
            }
            _ => None,
        }
    }

    /// Images of the ambient coordinates under the Veronese map.
    fn veronese_images(&self, field: Field) -> Vec<GradedForm> {
        let t = self.r as usize + 1;
        let mut images: Vec<GradedForm> = self
            .x_coords
            .iter()
            .map(|w| GradedForm::monomial(field, w.clone(), field.one()))
            .collect();
        images.extend((0..self.m()).map(|_| GradedForm::zero(field, t, self.e)));
        images
    }

    /// Embeds a form in the x-variables into the ambient ring.
    pub fn embed_x(&self, h: &GradedForm) -> Result<GradedForm> {
        if h.nvars() != self.x_count() {
            return Err(Error::Domain("form is not in the frame's x-variables".into()));
        }
        let pad = self.m();
        GradedForm::from_terms(
            h.field(),
            self.nvars(),
            h.degree(),
            h.terms().map(|(m, c)| {
                let mut exps = m.exps().to_vec();
                exps.extend(std::iter::repeat_n(0, pad));
                (exps, c.clone())
            }),
        )
    }

    /// Restricts an ambient form to the span `y = 0`, as a form in the x-variables.
    pub fn restrict_to_span(&self, g: &GradedForm) -> Result<GradedForm> {
        let k = self.x_count();
        GradedForm::from_terms(
            g.field(),
            k,
            g.degree(),
            g.terms()
                .filter(|(m, _)| m.exps()[k..].iter().all(|&v| v == 0))
                .map(|(m, c)| (m.exps()[..k].to_vec(), c.clone())),
        )
    }
}

impl Serialize for VeroneseFrame {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("VeroneseFrame", 3)?;
        st.serialize_field("r", &self.r)?;
        st.serialize_field("e", &self.e)?;
        st.serialize_field("n", &self.n)?;
        if self.y_base != 1 {
            st.serialize_field("y_base", &self.y_base)?;
        }
        st.end()
    }
}

/// A degree-`d` form on the ambient space of a frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmbientForm {
    frame: VeroneseFrame,
    poly: GradedForm,
}

impl AmbientForm {
    pub fn new(frame: VeroneseFrame, poly: GradedForm) -> Result<Self> {
        if poly.nvars() != frame.nvars() {
            return Err(Error::Domain(format!(
                "form has {} variables, frame needs {}",
                poly.nvars(),
                frame.nvars()
            )));
        }
        Ok(AmbientForm { frame, poly })
    }

    /// Parses the text grammar with `x<k>` for the k-th element of
    /// `Delta_r(e)` and `y<j>` for the y-coordinates.
    pub fn parse(frame: VeroneseFrame, text: &str, field: Field) -> Result<Self> {
        let poly = parse_form_with(text, field, frame.nvars(), None, |v| frame.resolve(v))?;
        AmbientForm::new(frame, poly)
    }

    pub fn frame(&self) -> &VeroneseFrame {
        &self.frame
    }

    pub fn poly(&self) -> &GradedForm {
        &self.poly
    }

    pub fn degree(&self) -> u32 {
        self.poly.degree()
    }

    pub fn field(&self) -> Field {
        self.poly.field()
    }

    pub fn text(&self) -> String {
        self.poly.to_text_with(|i| self.frame.var_name(i))
    }

    /// True when every term contains a y-variable, i.e. the form vanishes on the span.
    pub fn vanishes_on_span(&self) -> bool {
        let k = self.frame.x_count();
        self.poly.terms().all(|(m, _)| m.exps()[k..].iter().any(|&v| v > 0))
    }
}

impl Serialize for AmbientForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("AmbientForm", 3)?;
        st.serialize_field("frame", &self.frame)?;
        st.serialize_field("degree", &self.degree())?;
        st.serialize_field("poly", &self.text())?;
        st.end()
    }
}

/// Substitutes `x_w -> t^w` and `y -> 0`.
pub fn veronese_pullback(frame: &VeroneseFrame, f: &GradedForm) -> Result<GradedForm> {
    if f.nvars() != frame.nvars() {
        return Err(Error::Domain(format!(
            "form has {} variables, frame needs {}",
            f.nvars(),
            frame.nvars()
        )));
    }
    f.substitute(&frame.veronese_images(f.field()))
}

fn check_char(field: Field, d: u32, e: u32) -> Result<()> {
    if !field.char_exceeds((d * e) as u64) {
        return Err(Error::Domain(format!(
            "characteristic {} must be 0 or exceed d*e = {}",
            field.characteristic(),
            d * e
        )));
    }
    Ok(())
}

/// Writes `w` (of degree `k e`) as a sum of `k` elements of `Delta_r(e)`,
/// returned as indices into `x_coords`.
///
/// Greedy: repeatedly take the graded-lex largest element that fits under
/// the remainder. Any nonnegative vector of degree `je > 0` dominates some
/// element of degree `e`, so this cannot get stuck; the exhaustive search is
/// kept as a fallback.
pub fn decompose_exponent(w: &[u32], e: u32, x_coords: &[Vec<u32>]) -> Option<Vec<usize>> {
    let total: u32 = w.iter().sum();
    if e == 0 || !total.is_multiple_of(e) {
        return None;
    }
    let mut rem = w.to_vec();
    let mut out = Vec::new();
    while rem.iter().any(|&v| v > 0) {
        let Some(idx) = x_coords.iter().position(|v| v.iter().zip(&rem).all(|(a, b)| a <= b)) else {
            return decompose_exhaustive(w, x_coords, 0);
        };
        for (r, a) in rem.iter_mut().zip(&x_coords[idx]) {
            *r -= a;
        }
        out.push(idx);
    }
    Some(out)
}

fn decompose_exhaustive(rem: &[u32], x_coords: &[Vec<u32>], start: usize) -> Option<Vec<usize>> {
    if rem.iter().all(|&v| v == 0) {
        return Some(Vec::new());
    }
    for (i, v) in x_coords.iter().enumerate().skip(start) {
        if v.iter().zip(rem).all(|(a, b)| a <= b) {
            let next: Vec<u32> = rem.iter().zip(v).map(|(b, a)| b - a).collect();
            if let Some(mut rest) = decompose_exhaustive(&next, x_coords, i) {
                rest.push(i);
                return Some(rest);
            }
        }
    }
    None
}

/// Lifts a degree-`k e` form in `t` to a degree-`k` form `H` in the
/// x-variables with `nu^* H = g`, verified by re-expansion.
pub fn lift_to_span(frame: &VeroneseFrame, g: &GradedForm) -> Result<GradedForm> {
    let e = frame.e();
    if g.nvars() != frame.r() as usize + 1 || !g.degree().is_multiple_of(e) {
        return Err(Error::Domain(format!(
            "cannot lift a degree-{} form in {} variables through the degree-{e} Veronese",
            g.degree(),
            g.nvars()
        )));
    }
    let k = g.degree() / e;
    let xs = frame.x_count();
    let mut terms = Vec::with_capacity(g.num_terms());
    for (m, c) in g.terms() {
        let parts = decompose_exponent(m.exps(), e, frame.x_coords())
            .ok_or_else(|| Error::Internal(format!("no decomposition of {:?}", m.exps())))?;
        let mut exps = vec![0u32; xs];
        for i in parts {
            exps[i] += 1;
        }
        terms.push((exps, c.clone()));
    }
    let h = GradedForm::from_terms(g.field(), xs, k, terms)?;
    let back = veronese_pullback(frame, &frame.embed_x(&h)?)?;
    if &back != g {
        return Err(Error::Internal(format!("lift of {g} re-expands to {back}")));
    }
    Ok(h)
}

/// `G = sum_i y_i H_i` for forms `H_i` in the x-variables.
pub fn sum_y_times(frame: &VeroneseFrame, lifts: &[GradedForm], degree: u32) -> Result<GradedForm> {
    if lifts.len() != frame.m() {
        return Err(Error::Domain(format!(
            "{} forms for {} y-coordinates",
            lifts.len(),
            frame.m()
        )));
    }
    let field = lifts.first().map_or(Field::Rational, GradedForm::field);
    let mut g = GradedForm::zero(field, frame.nvars(), degree);
    for (i, h) in lifts.iter().enumerate() {
        let y = GradedForm::var(field, frame.nvars(), frame.y_pos(i));
        g = g.add(&y.mul(&frame.embed_x(h)?)?)?;
    }
    Ok(g)
}

fn ensure_smooth(g: &AmbientForm) -> Result<()> {
    if !smoothness::is_smooth_point(g)? {
        return Err(Error::Internal(format!(
            "constructed form {} fails its certificate",
            g.text()
        )));
    }
    Ok(())
}

/// Builds `G = sum_i y_i G_i(x_0..x_r)` in `P^n` from a given system of
/// degree `d - 1` forms, one per y-coordinate.
pub fn waldron_from_system(n: u32, sys: &LinearSystem) -> Result<AmbientForm> {
    let frame = VeroneseFrame::new(sys.r(), 1, n)?;
    let lifts = sys
        .members()
        .iter()
        .map(|g| lift_to_span(&frame, g))
        .collect::<Result<Vec<_>>>()?;
    let g = sum_y_times(&frame, &lifts, sys.degree() + 1)?;
    AmbientForm::new(frame, g)
}

/// A degree-`d` hypersurface in `P^n` containing the plane `y = 0` at a
/// smooth point of the relative Fano scheme.
pub fn waldron_form(r: u32, d: u32, n: u32, seed: u64, field: Field) -> Result<AmbientForm> {
    if d < 3 {
        return Err(Error::Domain("waldron_form needs d >= 3".into()));
    }
    check_char(field, d, 1)?;
    let threshold = bounds::n_1(r, d);
    if (n as i64) < threshold {
        return Err(Error::Range(format!("n = {n} < N_1({r},{d}) = {threshold}")));
    }
    let req = GeneratorRequest::new(r, d - 1, n - r, 1)
        .with_field(field)
        .with_seed(seed);
    let sys = find_generating_system(&req)?;
    let g = waldron_from_system(n, &sys)?;
    ensure_smooth(&g)?;
    Ok(g)
}

/// Builds `G = sum_i y_i H_i` with `nu^* H_i = G_i` from a given system of
/// degree `(d - 1) e` forms.
pub fn nenashev_from_system(e: u32, n: u32, sys: &LinearSystem) -> Result<AmbientForm> {
    let frame = VeroneseFrame::new(sys.r(), e, n)?;
    let lifts = sys
        .members()
        .iter()
        .map(|g| lift_to_span(&frame, g))
        .collect::<Result<Vec<_>>>()?;
    let d = sys.degree() / e + 1;
    let g = sum_y_times(&frame, &lifts, d)?;
    AmbientForm::new(frame, g)
}

/// A degree-`d` hypersurface containing the span of the `e`-uple Veronese
/// `r`-fold at a smooth point of the relative Fano scheme (`e >= 2`).
pub fn nenashev_form(r: u32, e: u32, d: u32, n: u32, seed: u64, field: Field) -> Result<AmbientForm> {
    if e < 2 {
        return Err(Error::Domain("nenashev_form needs e >= 2".into()));
    }
    if d < 3 {
        return Err(Error::Domain("nenashev_form needs d >= 3".into()));
    }
    if r < 1 {
        return Err(Error::Domain("nenashev_form needs r >= 1".into()));
    }
    check_char(field, d, e)?;
    let threshold = bounds::n_tilde(r, d, e);
    if (n as i64) < threshold {
        return Err(Error::Range(format!("n = {n} < N~_{e}({r},{d}) = {threshold}")));
    }
    let m = n + 1 - pdim(r, e) as u32;
    let req = GeneratorRequest::new(r, (d - 1) * e, m, e)
        .with_field(field)
        .with_seed(seed);
    let sys = find_generating_system(&req)?;
    let g = nenashev_from_system(e, n, &sys)?;
    ensure_smooth(&g)?;
    Ok(g)
}

/// `G_{a,b} = sum_{i=1}^m (a y_{i-1} + b y_i) G_i` in coordinates
/// `(x_0..x_r, y_0..y_m)`, for a given system `G_1..G_m`.
pub fn pencil_from_system(n: u32, sys: &LinearSystem, a: &Scalar, b: &Scalar) -> Result<AmbientForm> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::Domain("(a, b) = (0, 0) is not a point of P^1".into()));
    }
    let frame = VeroneseFrame::new(sys.r(), 1, n)?.with_y_base(0);
    if frame.m() != sys.len() + 1 {
        return Err(Error::Domain(format!(
            "pencil in P^{n} needs {} members, got {}",
            frame.m() - 1,
            sys.len()
        )));
    }
    let field = sys.field();
    let nv = frame.nvars();
    let mut g = GradedForm::zero(field, nv, sys.degree() + 1);
    for (i, gi) in sys.members().iter().enumerate() {
        let lin = GradedForm::var(field, nv, frame.y_pos(i))
            .scale(a)
            .add(&GradedForm::var(field, nv, frame.y_pos(i + 1)).scale(b))?;
        g = g.add(&lin.mul(&frame.embed_x(&lift_to_span(&frame, gi)?)?)?)?;
    }
    AmbientForm::new(frame, g)
}

/// The 1-generating system shared by every member of a seeded pencil.
pub fn pencil_system(r: u32, d: u32, n: u32, seed: u64, field: Field) -> Result<LinearSystem> {
    if d < 3 {
        return Err(Error::Domain("pencil_form needs d >= 3".into()));
    }
    check_char(field, d, 1)?;
    let threshold = 1 + bounds::n_1(r, d);
    if (n as i64) < threshold {
        return Err(Error::Range(format!("n = {n} < 1 + N_1({r},{d}) = {threshold}")));
    }
    let m = n - r - 1;
    let req = GeneratorRequest::new(r, d - 1, m, 1).with_field(field).with_seed(seed);
    find_generating_system(&req)
}

pub fn pencil_form(r: u32, d: u32, n: u32, a: i64, b: i64, seed: u64, field: Field) -> Result<AmbientForm> {
    let (a, b) = (field.from_i64(a), field.from_i64(b));
    if a.is_zero() && b.is_zero() {
        return Err(Error::Domain("(a, b) = (0, 0) is not a point of P^1".into()));
    }
    let sys = pencil_system(r, d, n, seed, field)?;
    let g = pencil_from_system(n, &sys, &a, &b)?;
    ensure_smooth(&g)?;
    Ok(g)
}

/// Spanning set of the quadrics through the Veronese: binomials
/// `x_a x_b - x_c x_d` with `a + b = c + d`, `y_i y_j`, and `y_i x_w`.
pub fn veronese_quadric_generators(frame: &VeroneseFrame, field: Field) -> Vec<GradedForm> {
    let k = frame.x_count();
    let nv = frame.nvars();
    let quad = |i: usize, j: usize| {
        let mut exps = vec![0u32; nv];
        exps[i] += 1;
        exps[j] += 1;
        exps
    };
    let mut by_sum: std::collections::BTreeMap<Vec<u32>, Vec<(usize, usize)>> = Default::default();
    for i in 0..k {
        for j in i..k {
            let s: Vec<u32> = frame.x_coords[i]
                .iter()
                .zip(&frame.x_coords[j])
                .map(|(a, b)| a + b)
                .collect();
            by_sum.entry(s).or_default().push((i, j));
        }
    }
    let mut gens = Vec::new();
    for pairs in by_sum.values() {
        let (i0, j0) = pairs[0];
        for &(i, j) in &pairs[1..] {
            let f = GradedForm::from_terms(
                field,
                nv,
                2,
                vec![(quad(i0, j0), field.one()), (quad(i, j), field.from_i64(-1))],
            )
            .unwrap();
            gens.push(f);
        }
    }
    for a in 0..frame.m() {
        let ya = frame.y_pos(a);
        for b in a..frame.m() {
            gens.push(GradedForm::monomial(field, quad(ya, frame.y_pos(b)), field.one()));
        }
        for x in 0..k {
            gens.push(GradedForm::monomial(field, quad(ya, x), field.one()));
        }
    }
    gens
}

/// Symmetric matrix of a quadratic form: `2 c(v_i^2)` on the diagonal and
/// `c(v_i v_j)` off it.
pub fn gram_matrix(q: &GradedForm) -> Result<Matrix> {
    if q.degree() != 2 {
        return Err(Error::Domain("Gram matrix of a non-quadratic form".into()));
    }
    let n = q.nvars();
    let mut m = Matrix::zeros(q.field(), n, n);
    for (mono, c) in q.terms() {
        let idx: Vec<usize> = mono
            .exps()
            .iter()
            .enumerate()
            .flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize))
            .collect();
        let (i, j) = (idx[0], idx[1]);
        if i == j {
            m.set(i, i, c.mul_u64(2));
        } else {
            m.set(i, j, c.clone());
            m.set(j, i, c.clone());
        }
    }
    Ok(m)
}

/// A smooth quadric containing the `e`-uple Veronese `r`-fold, `e >= 2`.
pub fn quadric_through_veronese(r: u32, e: u32, n: u32, seed: u64, field: Field) -> Result<AmbientForm> {
    if e < 2 {
        return Err(Error::Domain("quadric_through_veronese needs e >= 2".into()));
    }
    if field.characteristic() == 2 {
        return Err(Error::Domain("smooth quadrics need characteristic != 2".into()));
    }
    let frame = VeroneseFrame::new(r, e, n)?;
    let gens = veronese_quadric_generators(&frame, field);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..QUADRIC_ATTEMPTS {
        let mut q = GradedForm::zero(field, frame.nvars(), 2);
        for g in &gens {
            let c = field.random(&mut rng, DEFAULT_COEFF_BOUND);
            q = q.add(&g.scale(&c))?;
        }
        if !veronese_pullback(&frame, &q)?.is_zero() {
            return Err(Error::Internal(
                "quadric generator does not vanish on the Veronese".into(),
            ));
        }
        if gram_matrix(&q)?.rank()? == frame.nvars() {
            return AmbientForm::new(frame, q);
        }
    }
    Err(Error::SearchFailure {
        attempts: QUADRIC_ATTEMPTS,
    })
}

/// A random invertible change of coordinates preserving the frame.
///
/// `t -> A t` on the parameter space induces the action of `Sym^e(A)` on
/// the x-coordinates; each x-coordinate also picks up a random combination
/// of y-coordinates, and the y-coordinates go to an invertible combination
/// of themselves. The span `y = 0` and the Veronese are mapped to
/// themselves. Returns the images of the ambient coordinates, suitable for
/// `GradedForm::substitute`.
pub fn random_frame_automorphism(frame: &VeroneseFrame, field: Field, seed: u64) -> Result<Vec<GradedForm>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = frame.r as usize + 1;
    let nv = frame.nvars();
    let m = frame.m();
    let a = random_invertible(&mut rng, field, t)?;
    let lin_t: Vec<GradedForm> = (0..t)
        .map(|i| {
            GradedForm::from_terms(
                field,
                t,
                1,
                (0..t).map(|j| {
                    let mut exps = vec![0; t];
                    exps[j] = 1;
                    (exps, a.get(i, j).clone())
                }),
            )
        })
        .collect::<Result<_>>()?;
    let mut images = Vec::with_capacity(nv);
    for w in &frame.x_coords {
        let moved = GradedForm::monomial(field, w.clone(), field.one()).substitute(&lin_t)?;
        let mut img = frame.embed_x(&lift_linear(frame, &moved)?)?;
        for j in 0..m {
            let y = GradedForm::var(field, nv, frame.y_pos(j));
            img = img.add(&y.scale(&field.random(&mut rng, DEFAULT_COEFF_BOUND)))?;
        }
        images.push(img);
    }
    if m > 0 {
        let c = random_invertible(&mut rng, field, m)?;
        for i in 0..m {
            let terms = (0..m).map(|j| {
                let mut exps = vec![0; nv];
                exps[frame.y_pos(j)] = 1;
                (exps, c.get(i, j).clone())
            });
            images.push(GradedForm::from_terms(field, nv, 1, terms)?);
        }
    }
    Ok(images)
}

/// Writes a degree-`e` form in `t` as a linear form in the x-coordinates.
fn lift_linear(frame: &VeroneseFrame, g: &GradedForm) -> Result<GradedForm> {
    let xs = frame.x_count();
    GradedForm::from_terms(
        g.field(),
        xs,
        1,
        g.terms().map(|(m, c)| {
            let i = frame.x_coords.iter().position(|w| w.as_slice() == m.exps()).unwrap();
            let mut exps = vec![0; xs];
            exps[i] = 1;
            (exps, c.clone())
        }),
    )
}

fn random_invertible(rng: &mut ChaCha8Rng, field: Field, n: usize) -> Result<Matrix> {
    for _ in 0..64 {
        let rows = (0..n)
            .map(|_| (0..n).map(|_| field.random(rng, DEFAULT_COEFF_BOUND)).collect())
            .collect();
        let m = Matrix::from_rows(rows)?;
        if m.rank()? == n {
            return Ok(m);
        }
    }
    Err(Error::SearchFailure { attempts: 64 })
}

/// A random form of degree `d` in the frame's ambient ring, for tests and demos.
pub fn random_ambient_form(frame: &VeroneseFrame, d: u32, field: Field, seed: u64) -> GradedForm {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_form(&mut rng, field, frame.nvars(), d, DEFAULT_COEFF_BOUND)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse_form;

    const P: Field = Field::Prime(crate::scalar::DEFAULT_PRIME);

    fn t_form(text: &str, nvars: usize) -> GradedForm {
        parse_form(text, Field::Rational, Some(nvars)).unwrap()
    }

    #[test]
    fn frame_layout() {
        let f = VeroneseFrame::new(1, 2, 5).unwrap();
        assert_eq!(f.x_coords(), &[vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(f.m(), 3);
        assert_eq!(f.var_name(0), "x0");
        assert_eq!(f.var_name(3), "y1");
        assert!(matches!(VeroneseFrame::new(1, 2, 1), Err(Error::Range(_))));
        let g = VeroneseFrame::new(1, 2, 2).unwrap();
        assert_eq!(g.m(), 0);
    }

    #[test]
    fn pullback_examples() {
        let q = Field::Rational;
        let f = VeroneseFrame::new(1, 2, 5).unwrap();
        // x_{20} x_{02} - x_{11}^2
        let rel = AmbientForm::parse(f.clone(), "x0*x2 - x1^2", q).unwrap();
        assert!(veronese_pullback(&f, rel.poly()).unwrap().is_zero());

        let f1 = VeroneseFrame::new(1, 1, 3).unwrap();
        let y = AmbientForm::parse(f1.clone(), "y1", q).unwrap();
        assert!(veronese_pullback(&f1, y.poly()).unwrap().is_zero());

        let f2 = VeroneseFrame::new(1, 2, 2).unwrap();
        let lin = AmbientForm::parse(f2.clone(), "x0 + x1", q).unwrap();
        assert_eq!(veronese_pullback(&f2, lin.poly()).unwrap().to_string(), "t0^2 + t0*t1");
    }

    #[test]
    fn waldron_from_explicit_system() {
        let sys = LinearSystem::from_members(vec![t_form("t0^2", 2), t_form("t1^2", 2)]).unwrap();
        let g = waldron_from_system(3, &sys).unwrap();
        assert_eq!(g.text(), "x0^2*y1 + x1^2*y2");
        assert!(g.vanishes_on_span());
        assert!(veronese_pullback(g.frame(), g.poly()).unwrap().is_zero());
    }

    #[test]
    fn waldron_ranges() {
        assert!(matches!(waldron_form(1, 3, 2, 0, P), Err(Error::Range(_))));
        assert!(matches!(waldron_form(1, 2, 5, 0, P), Err(Error::Domain(_))));
        assert!(matches!(
            waldron_form(1, 3, 3, 0, Field::Prime(3)),
            Err(Error::Domain(_))
        ));
        let g = waldron_form(2, 4, 7, 1, P).unwrap();
        assert_eq!(g.degree(), 4);
        assert!(g.vanishes_on_span());
    }

    #[test]
    fn lift_of_mixed_monomial() {
        let frame = VeroneseFrame::new(1, 2, 8).unwrap();
        let g = t_form("t0^3*t1^3", 2);
        let h = lift_to_span(&frame, &g).unwrap();
        assert_eq!(h.degree(), 3);
        // greedy: (2,0) then (1,1) then (0,2)
        assert_eq!(h.to_text_with(|i| format!("x{i}")), "x0*x1*x2");
        let back = veronese_pullback(&frame, &frame.embed_x(&h).unwrap()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn decomposition_always_succeeds() {
        let frame = VeroneseFrame::new(2, 3, 20).unwrap();
        for m in monomial_basis(3, 12) {
            let parts = decompose_exponent(m.exps(), 3, frame.x_coords()).unwrap();
            assert_eq!(parts.len(), 4);
        }
        assert!(decompose_exponent(&[1, 0, 0], 3, frame.x_coords()).is_none());
        assert!(decompose_exhaustive(&[3, 3, 0], frame.x_coords(), 0).is_some());
    }

    #[test]
    fn nenashev_ranges() {
        assert!(matches!(nenashev_form(1, 2, 3, 7, 0, P), Err(Error::Range(_))));
        let g = nenashev_form(1, 2, 3, 8, 0, P).unwrap();
        assert_eq!(g.frame().m(), 6);
        assert!(g.vanishes_on_span());
        assert!(veronese_pullback(g.frame(), g.poly()).unwrap().is_zero());
    }

    #[test]
    fn pencil_examples() {
        let q = Field::Rational;
        let sys = LinearSystem::from_members(vec![t_form("t0^2", 2), t_form("t1^2", 2)]).unwrap();
        let g10 = pencil_from_system(4, &sys, &q.one(), &q.zero()).unwrap();
        assert_eq!(g10.text(), "x0^2*y0 + x1^2*y1");
        let g01 = pencil_from_system(4, &sys, &q.zero(), &q.one()).unwrap();
        assert_eq!(g01.text(), "x0^2*y1 + x1^2*y2");
        let g11 = pencil_from_system(4, &sys, &q.one(), &q.one()).unwrap();
        assert_eq!(g11.text(), "x0^2*y0 + x0^2*y1 + x1^2*y1 + x1^2*y2");
        assert!(smoothness::is_smooth_point(&g11).unwrap());
        assert!(matches!(
            pencil_from_system(4, &sys, &q.zero(), &q.zero()),
            Err(Error::Domain(_))
        ));
        assert!(matches!(pencil_form(1, 3, 3, 1, 0, 0, P), Err(Error::Range(_))));
        assert!(matches!(pencil_form(1, 3, 4, 0, 0, 0, P), Err(Error::Domain(_))));
    }

    #[test]
    fn quadric_examples() {
        let q = Field::Rational;
        for (r, e, n) in [(1, 2, 5), (1, 2, 2), (1, 3, 4), (2, 2, 6)] {
            let g = quadric_through_veronese(r, e, n, 7, q).unwrap();
            assert_eq!(g.degree(), 2);
            assert!(veronese_pullback(g.frame(), g.poly()).unwrap().is_zero());
            assert!(!gram_matrix(g.poly()).unwrap().determinant().unwrap().is_zero());
        }
        assert!(matches!(
            quadric_through_veronese(1, 2, 5, 0, Field::Prime(2)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(quadric_through_veronese(1, 1, 5, 0, q), Err(Error::Domain(_))));
    }

    #[test]
    fn conic_gram_determinant() {
        let q = Field::Rational;
        let f = VeroneseFrame::new(1, 2, 2).unwrap();
        let conic = AmbientForm::parse(f, "x0*x2 - x1^2", q).unwrap();
        let det = gram_matrix(conic.poly()).unwrap().determinant().unwrap();
        // [[0,0,1],[0,-2,0],[1,0,0]] has determinant 2
        assert_eq!(det, q.from_i64(2));
    }

    #[test]
    fn ambient_parse_errors() {
        let f = VeroneseFrame::new(1, 1, 3).unwrap();
        assert!(AmbientForm::parse(f.clone(), "y3*x0", Field::Rational).is_err());
        assert!(AmbientForm::parse(f.clone(), "x2*y1", Field::Rational).is_err());
        assert!(AmbientForm::parse(f, "t0*y1", Field::Rational).is_err());
    }
}
