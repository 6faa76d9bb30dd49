//! Smoothness certificates for hypersurfaces containing the span of a
//! coordinate Veronese variety.
//!
//! For `G` vanishing on the span `y = 0`, the linear system of pulled-back
//! partials `nu^*(dG/dy_i)` decides everything: the Veronese lies in the
//! smooth locus of `Zero(G)` iff that system is c-generating for some
//! `c >= 1`, and the pair (Veronese, `G`) is a smooth point of the
//! projection to the space of hypersurfaces iff it is e-generating.

use serde::Serialize;

use crate::construct::{veronese_pullback, AmbientForm};
use crate::error::{Error, Result};
use crate::polyring::{is_c_generating, map_rank, pdim, LinearSystem};

/// Largest `rows * cols` elimination attempted for the span scan by default.
pub const DEFAULT_SPAN_BUDGET: usize = 4_000_000;

#[derive(Clone, Debug)]
pub struct CertifyOptions {
    /// Overrides the Macaulay bound `(r + 1)(b - 1) + 1`.
    pub c_max: Option<u32>,
    /// Accept prime fields with `p <= d e`.
    pub allow_small_characteristic: bool,
    /// Matrix-size cap for the span scan when `e >= 2`.
    pub span_budget: usize,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            c_max: None,
            allow_small_characteristic: false,
            span_budget: DEFAULT_SPAN_BUDGET,
        }
    }
}

/// Rank of one multiplication map against the dimension of its target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RankEntry {
    pub c: u32,
    pub rank: usize,
    pub target: usize,
}

impl RankEntry {
    pub fn surjective(&self) -> bool {
        self.rank == self.target
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    #[serde(skip)]
    pub partials_system: LinearSystem,
    pub degree: u32,
    pub e_generating: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub image_smooth_c: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub span_smooth_c: Option<u32>,
    /// False when the span scan stopped at the size budget before deciding.
    pub span_scan_complete: bool,
    pub c_max: u32,
    pub span_c_max: u32,
    pub ranks: Vec<RankEntry>,
    pub span_ranks: Vec<RankEntry>,
}

fn check_field(g: &AmbientForm, allow_small: bool) -> Result<()> {
    let de = g.degree() as u64 * g.frame().e() as u64;
    if !allow_small && !g.field().char_exceeds(de) {
        return Err(Error::Domain(format!(
            "characteristic {} does not exceed d*e = {de}; pass the override to certify anyway",
            g.field().characteristic()
        )));
    }
    Ok(())
}

fn check_span(g: &AmbientForm) -> Result<()> {
    if g.degree() == 0 || !g.vanishes_on_span() {
        return Err(Error::Precondition(format!(
            "{} does not vanish on the span y = 0",
            g.text()
        )));
    }
    Ok(())
}

/// `nu^*(dG/dy_i)` for `i = 1..m`: degree `(d - 1) e` forms in `r + 1` variables.
pub fn partials_pullback(g: &AmbientForm) -> Result<LinearSystem> {
    check_span(g)?;
    let frame = g.frame();
    let members = (0..frame.m())
        .map(|i| veronese_pullback(frame, &g.poly().partial(frame.y_pos(i))?))
        .collect::<Result<Vec<_>>>()?;
    LinearSystem::new(g.field(), frame.r() as usize + 1, (g.degree() - 1) * frame.e(), members)
}

/// The partials restricted to the span, as degree `d - 1` forms in the x-variables.
pub fn span_partials(g: &AmbientForm) -> Result<LinearSystem> {
    check_span(g)?;
    let frame = g.frame();
    let members = (0..frame.m())
        .map(|i| frame.restrict_to_span(&g.poly().partial(frame.y_pos(i))?))
        .collect::<Result<Vec<_>>>()?;
    LinearSystem::new(g.field(), frame.x_count(), g.degree() - 1, members)
}

/// Macaulay's regularity bound `(r + 1)(b - 1) + 1` for degree-`b` forms in `r + 1` variables.
pub fn macaulay_bound(nvars: usize, b: u32) -> u32 {
    nvars as u32 * b.saturating_sub(1) + 1
}

fn entry(sys: &LinearSystem, c: u32) -> RankEntry {
    RankEntry {
        c,
        rank: map_rank(sys, c),
        target: pdim(sys.r(), sys.degree() + c),
    }
}

/// Scans `c = 1..=c_max`, stopping once generation is seen at some
/// `c >= min_c`. Returns the trace and the least generating `c`.
fn scan(sys: &LinearSystem, c_max: u32, min_c: u32, budget: Option<usize>) -> (Vec<RankEntry>, Option<u32>, bool) {
    let mut trace = Vec::new();
    let mut first = None;
    for c in 1..=c_max {
        if let Some(b) = budget {
            let rows = pdim(sys.r(), sys.degree() + c);
            let cols = sys.len() * pdim(sys.r(), c);
            if rows.saturating_mul(cols) > b {
                return (trace, first, false);
            }
        }
        let ent = entry(sys, c);
        trace.push(ent);
        if ent.surjective() && first.is_none() {
            first = Some(c);
        }
        if first.is_some() && c >= min_c {
            break;
        }
    }
    (trace, first, true)
}

pub fn certify_smooth_point(g: &AmbientForm) -> Result<Certificate> {
    certify_smooth_point_with(g, &CertifyOptions::default())
}

pub fn certify_smooth_point_with(g: &AmbientForm, opts: &CertifyOptions) -> Result<Certificate> {
    check_span(g)?;
    check_field(g, opts.allow_small_characteristic)?;
    let e = g.frame().e();
    let sys = partials_pullback(g)?;
    let c_max = opts.c_max.unwrap_or_else(|| macaulay_bound(sys.nvars(), sys.degree()));
    let (ranks, image_c, _) = scan(&sys, c_max, e, None);
    let e_generating = match ranks.iter().find(|r| r.c == e) {
        Some(r) => r.surjective(),
        None => is_c_generating(&sys, e),
    };

    let (span_ranks, span_c, span_complete, span_c_max) = if e == 1 {
        (ranks.clone(), image_c, true, c_max)
    } else {
        let span = span_partials(g)?;
        let cm = opts
            .c_max
            .unwrap_or_else(|| macaulay_bound(span.nvars(), span.degree()));
        let (tr, first, complete) = scan(&span, cm, 1, Some(opts.span_budget));
        (tr, first, complete || first.is_some(), cm)
    };

    Ok(Certificate {
        degree: g.degree(),
        partials_system: sys,
        e_generating,
        image_smooth_c: image_c,
        span_smooth_c: span_c,
        span_scan_complete: span_complete,
        c_max,
        span_c_max,
        ranks,
        span_ranks,
    })
}

/// The e-generating test alone, without the c-scan.
pub fn is_smooth_point(g: &AmbientForm) -> Result<bool> {
    let sys = partials_pullback(g)?;
    Ok(is_c_generating(&sys, g.frame().e()))
}

/// Dimension of first-order deformations of the plane `y = 0` inside
/// `Zero(G)`: `m (r + 1) - rank(mu)` with `mu(A_1..A_m) = sum A_i nu^*(dG/dy_i)`.
pub fn tangent_dim_linear(g: &AmbientForm) -> Result<usize> {
    if g.frame().e() != 1 {
        return Err(Error::Unsupported(
            "tangent dimension is only computed for linear spaces (e = 1)".into(),
        ));
    }
    let sys = partials_pullback(g)?;
    if sys.is_empty() {
        return Ok(0);
    }
    let cols = sys.len() * sys.nvars();
    Ok(cols - map_rank(&sys, 1))
}
