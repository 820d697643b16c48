//! The semi-infinite cylinder network and its Dirichlet-to-Neumann maps.
//!
//! The graph has `n` boundary vertices on a circle; vertex `i` of each
//! layer connects with unit conductivity to vertices `i` and `i + 1`
//! (circularly) of the next layer. Four routes to the DtN map are
//! provided: layer-by-layer Schur elimination of a finite truncation, a
//! per-Fourier-mode scalar recursion, fixed-point iteration of the
//! elimination map, and the closed form `sqrt(4I - B B^T)`.
//!
//! Truncation convention: `depth` counts interior layers beneath the
//! boundary layer. Writing `T(X) = 2I - B^T (X + 2I)^{-1} B` for one
//! elimination step, the depth-`d` map is `T^d(2I)` for a grounded
//! truncation (deepest layer wired to a zero-potential plane) and
//! `T^d(0)` for an insulated one (no edges past the deepest layer).
//! Depth 0 is the boundary layer alone: `2I` grounded, `0` insulated.
//! The two sequences bracket the infinite network's map mode by mode,
//! and the grounded constant-mode symbol is exactly `2/(d+1)`.

use num_rational::Ratio;

use crate::circulant::{adjacency_b, minus_laplacian, SymCirculant};
use crate::error::{Error, Result};
use crate::par;
use crate::scalar::Real;

/// Rule for closing off a finite truncation at its deepest layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    /// Deepest layer connects to a grounded (zero-potential) plane.
    Grounded,
    /// No edges beyond the deepest layer.
    Insulated,
}

/// Number of interior layers beneath the boundary layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Depth {
    Finite(usize),
    Infinite,
}

/// The cylinder graph: `n` boundary vertices, layered interior, unit
/// conductivities. Conductivity is kept as a field but only the value 1
/// is accepted.
#[derive(Clone, Debug)]
pub struct CylinderNetwork {
    n: usize,
    depth: Depth,
    termination: Termination,
    conductivity: Real,
}

impl CylinderNetwork {
    pub fn new(
        n: usize,
        depth: Depth,
        termination: Termination,
        conductivity: Real,
    ) -> Result<Self> {
        if n < crate::circulant::MIN_SIZE {
            return Err(Error::InvalidSize { n, min: crate::circulant::MIN_SIZE });
        }
        if conductivity != Real::one(conductivity.precision()) {
            return Err(Error::UnsupportedParameter(
                "only unit conductivity is supported".into(),
            ));
        }
        Ok(CylinderNetwork { n, depth, termination, conductivity })
    }

    /// Unit-conductivity network carrying the working precision.
    pub fn unit(n: usize, depth: Depth, termination: Termination, prec: u32) -> Result<Self> {
        CylinderNetwork::new(n, depth, termination, Real::one(prec))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn depth(&self) -> Depth {
        self.depth
    }

    pub fn termination(&self) -> Termination {
        self.termination
    }

    pub fn precision(&self) -> u32 {
        self.conductivity.precision()
    }
}

/// Which route produced a DtN map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Schur,
    PerMode,
    FixedPoint,
    ClosedForm,
}

impl Provenance {
    pub fn label(&self) -> &'static str {
        match self {
            Provenance::Schur => "schur",
            Provenance::PerMode => "per_mode",
            Provenance::FixedPoint => "fixed_point",
            Provenance::ClosedForm => "closed_form",
        }
    }
}

/// A Dirichlet-to-Neumann map together with how it was computed.
#[derive(Clone, Debug)]
pub struct DtNMap {
    pub matrix: SymCirculant,
    pub provenance: Provenance,
    pub iterations: Option<usize>,
}

/// One elimination step `T(X) = 2I - B^T (X + 2I)^{-1} B`, carried out in
/// the circulant algebra: the inverse is a per-mode reciprocal, and
/// `B^T Z B = Z (B^T B)` because circulants commute.
struct EliminationStep {
    two_i: SymCirculant,
    btb: SymCirculant,
}

impl EliminationStep {
    fn new(n: usize, prec: u32) -> Result<Self> {
        let b = adjacency_b(n, prec)?;
        let btb = SymCirculant::from_row(b.transpose().mul(&b)?.row().to_vec())?;
        let two_i = SymCirculant::scaled_identity(n, 2, prec)?;
        Ok(EliminationStep { two_i, btb })
    }

    fn apply(&self, x: &SymCirculant) -> Result<SymCirculant> {
        let shifted = x.add(&self.two_i)?;
        let inv = shifted.invert_spectral()?;
        let coupled = inv.mul_sym(&self.btb)?;
        self.two_i.sub(&coupled)
    }
}

fn seed(termination: Termination, n: usize, prec: u32) -> Result<SymCirculant> {
    match termination {
        Termination::Grounded => SymCirculant::scaled_identity(n, 2, prec),
        Termination::Insulated => SymCirculant::scaled_identity(n, 0, prec),
    }
}

/// DtN map of a finite truncation by layer-by-layer Schur elimination.
pub fn dtn_truncated(net: &CylinderNetwork) -> Result<DtNMap> {
    let depth = match net.depth() {
        Depth::Finite(d) => d,
        Depth::Infinite => {
            return Err(Error::UnsupportedParameter(
                "truncated elimination needs a finite depth".into(),
            ))
        }
    };
    let prec = net.precision();
    let step = EliminationStep::new(net.n(), prec)?;
    let mut x = seed(net.termination(), net.n(), prec)?;
    for _ in 0..depth {
        x = step.apply(&x)?;
    }
    Ok(DtNMap { matrix: x, provenance: Provenance::Schur, iterations: Some(depth) })
}

/// The `m`-th circulant eigenvalue of `dtn_truncated(net)`, computed by
/// the scalar recursion `x <- 2 - mu_m / (x + 2)` with
/// `mu_m = 2 + 2 cos(2 pi m / n)`.
pub fn dtn_per_mode(net: &CylinderNetwork, m: usize) -> Result<Real> {
    let n = net.n();
    if m >= n {
        return Err(Error::ModeOutOfRange { m, n });
    }
    let depth = match net.depth() {
        Depth::Finite(d) => d,
        Depth::Infinite => {
            return Err(Error::UnsupportedParameter(
                "per-mode recursion needs a finite depth".into(),
            ))
        }
    };
    let prec = net.precision();
    let two = Real::from_i64(2, prec);
    let angle = Real::pi(prec).mul_i64(2 * m as i64).div_i64(n as i64);
    let mu = two.add(&angle.cos().mul_i64(2));
    let mut x = match net.termination() {
        Termination::Grounded => two.clone(),
        Termination::Insulated => Real::zero(prec),
    };
    let floor = Real::two_pow(10 - prec as i32, prec);
    for _ in 0..depth {
        let denom = x.add(&two);
        if denom.abs() < floor {
            return Err(Error::EliminationSingularity { mode: m });
        }
        x = two.sub(&mu.div(&denom));
    }
    Ok(x)
}

/// Constant-mode symbol of the grounded truncation in exact rational
/// arithmetic: `x <- 2 - 4/(x + 2)` from `x = 2`, which telescopes to
/// `2/(d + 1)`.
pub fn grounded_constant_mode_exact(depth: usize) -> Ratio<i64> {
    let two = Ratio::from_integer(2);
    let four = Ratio::from_integer(4);
    let mut x = two;
    for _ in 0..depth {
        x = two - four / (x + two);
    }
    x
}

/// Fixed-point iteration of the elimination map from `X = 2I`.
///
/// With `deflate_constant`, the constant-vector eigenvalue (the infinite
/// network's kernel direction) is pinned to zero after every step, which
/// restores geometric convergence; without it the constant mode decays
/// only like `2/(j+1)` and small tolerances are expected to time out with
/// a nonconvergence error carrying the last residual.
pub fn dtn_fixed_point(
    n: usize,
    prec: u32,
    tol: &Real,
    max_iter: usize,
    deflate_constant: bool,
) -> Result<DtNMap> {
    if !tol.is_positive() {
        return Err(Error::UnsupportedParameter("tolerance must be positive".into()));
    }
    let step = EliminationStep::new(n, prec)?;
    let mut x = SymCirculant::scaled_identity(n, 2, prec)?;
    if deflate_constant {
        x = deflate(&x)?;
    }
    let mut residual = Real::zero(prec);
    for iter in 1..=max_iter {
        let mut next = step.apply(&x)?;
        if deflate_constant {
            next = deflate(&next)?;
        }
        residual = next.sub(&x)?.max_norm();
        x = next;
        if residual < *tol {
            return Ok(DtNMap {
                matrix: x,
                provenance: Provenance::FixedPoint,
                iterations: Some(iter),
            });
        }
    }
    Err(Error::Nonconvergence { iterations: max_iter, residual: residual.to_f64() })
}

/// Shift the row so the constant-mode eigenvalue (the row sum) is zero.
/// Only mode 0 is affected: the all-ones circulant has a null spectrum on
/// every other mode.
fn deflate(x: &SymCirculant) -> Result<SymCirculant> {
    let n = x.n();
    let shift = x.row_sum().div_i64(n as i64);
    let row = x.row().iter().map(|v| v.sub(&shift)).collect();
    SymCirculant::from_row(row)
}

/// Closed form for the infinite network: the principal square root of
/// `4I - B B^T`.
pub fn dtn_infinite_closed_form(n: usize, prec: u32) -> Result<DtNMap> {
    let b = adjacency_b(n, prec)?;
    let bbt = SymCirculant::from_row(b.mul(&b.transpose())?.row().to_vec())?;
    let four_i = SymCirculant::scaled_identity(n, 4, prec)?;
    let target = four_i.sub(&bbt)?;
    Ok(DtNMap {
        matrix: target.sqrt_psd()?,
        provenance: Provenance::ClosedForm,
        iterations: None,
    })
}

/// Residual of the fixed-point equation, `max_norm(X - T(X))`.
pub fn fixed_point_residual(x: &SymCirculant) -> Result<Real> {
    let step = EliminationStep::new(x.n(), x.precision())?;
    Ok(x.sub(&step.apply(x)?)?.max_norm())
}

/// A route request for [`verify_theorem41`].
#[derive(Clone, Debug)]
pub enum RouteSpec {
    ClosedForm,
    FixedPoint { tol: Real, max_iter: usize, deflate_constant: bool },
    Schur { depth: usize, termination: Termination },
}

impl RouteSpec {
    pub fn label(&self) -> &'static str {
        match self {
            RouteSpec::ClosedForm => "closed_form",
            RouteSpec::FixedPoint { .. } => "fixed_point",
            RouteSpec::Schur { .. } => "schur",
        }
    }
}

/// Outcome of one route: the squared-map residual against the cycle
/// Laplacian, or the error that stopped the route.
#[derive(Clone, Debug)]
pub struct RouteResult {
    pub label: &'static str,
    pub residual: Option<Real>,
    pub iterations: Option<usize>,
    pub error: Option<String>,
    pub pass: bool,
}

/// Max-norm discrepancy between two routes' maps.
#[derive(Clone, Debug)]
pub struct PairwiseDiff {
    pub left: &'static str,
    pub right: &'static str,
    pub diff: Real,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct TheoremReport {
    pub n: usize,
    pub precision_bits: u32,
    pub tol: Real,
    pub routes: Vec<RouteResult>,
    pub pairwise: Vec<PairwiseDiff>,
    pub pass: bool,
}

/// Computes the DtN map along each requested route, squares it, and
/// compares against the cycle Laplacian; also reports pairwise max-norm
/// discrepancies between the routes' maps.
pub fn verify_theorem41(
    n: usize,
    routes: &[RouteSpec],
    tol: &Real,
    prec: u32,
) -> Result<TheoremReport> {
    let l = minus_laplacian(n, prec)?;
    let mut results = Vec::with_capacity(routes.len());
    let mut maps: Vec<(usize, SymCirculant)> = Vec::new();

    for (idx, route) in routes.iter().enumerate() {
        let computed = match route {
            RouteSpec::ClosedForm => dtn_infinite_closed_form(n, prec),
            RouteSpec::FixedPoint { tol, max_iter, deflate_constant } => {
                dtn_fixed_point(n, prec, tol, *max_iter, *deflate_constant)
            }
            RouteSpec::Schur { depth, termination } => {
                let net =
                    CylinderNetwork::unit(n, Depth::Finite(*depth), *termination, prec)?;
                dtn_truncated(&net)
            }
        };
        match computed {
            Ok(map) => {
                let sq = map.matrix.mul_sym(&map.matrix)?;
                let residual = sq.sub(&l)?.max_norm();
                let pass = residual <= *tol;
                results.push(RouteResult {
                    label: route.label(),
                    residual: Some(residual),
                    iterations: map.iterations,
                    error: None,
                    pass,
                });
                maps.push((idx, map.matrix));
            }
            Err(e) => results.push(RouteResult {
                label: route.label(),
                residual: None,
                iterations: None,
                error: Some(e.to_string()),
                pass: false,
            }),
        }
    }

    let mut pairwise = Vec::new();
    for a in 0..maps.len() {
        for b in (a + 1)..maps.len() {
            let diff = maps[a].1.sub(&maps[b].1)?.max_norm();
            let pass = diff <= *tol;
            pairwise.push(PairwiseDiff {
                left: routes[maps[a].0].label(),
                right: routes[maps[b].0].label(),
                diff,
                pass,
            });
        }
    }

    let pass = results.iter().all(|r| r.pass) && pairwise.iter().all(|p| p.pass);
    Ok(TheoremReport { n, precision_bits: prec, tol: tol.clone(), routes: results, pairwise, pass })
}

/// Per-mode symbols of the truncated DtN for all modes at once; the
/// modes are independent, so the sweep is data parallel.
pub fn dtn_all_modes(net: &CylinderNetwork) -> Result<Vec<Real>> {
    let results = par::map_range(net.n(), |m| dtn_per_mode(net, m));
    results.into_iter().collect()
}

/// Spectrum of the infinite map without synthesis: `2 sin(pi m / n)` as a
/// Complex vector is never needed; callers wanting the matrix use
/// [`dtn_infinite_closed_form`].
pub fn infinite_mode_symbol(n: usize, m: usize, prec: u32) -> Result<Real> {
    if m >= n {
        return Err(Error::ModeOutOfRange { m, n });
    }
    let angle = Real::pi(prec).mul_i64(m as i64).div_i64(n as i64);
    Ok(angle.sin().abs().mul_i64(2))
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 53;

    fn row_f64(m: &SymCirculant) -> Vec<f64> {
        m.row().iter().map(Real::to_f64).collect()
    }

    fn unit_net(n: usize, depth: usize, t: Termination) -> CylinderNetwork {
        CylinderNetwork::unit(n, Depth::Finite(depth), t, P).unwrap()
    }

    #[test]
    fn depth_zero_seeds() {
        let g = dtn_truncated(&unit_net(3, 0, Termination::Grounded)).unwrap();
        assert_eq!(row_f64(&g.matrix), vec![2.0, 0.0, 0.0]);
        let i = dtn_truncated(&unit_net(3, 0, Termination::Insulated)).unwrap();
        assert_eq!(row_f64(&i.matrix), vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn depth_one_insulated_by_hand() {
        // 2I - B^T (2I)^{-1} B with B^T B row [2, 1, 1].
        let map = dtn_truncated(&unit_net(3, 1, Termination::Insulated)).unwrap();
        let row = row_f64(&map.matrix);
        assert!((row[0] - 1.0).abs() < 1e-14);
        assert!((row[1] + 0.5).abs() < 1e-14);
        assert!((row[2] + 0.5).abs() < 1e-14);
    }

    #[test]
    fn depth_one_grounded_by_hand() {
        // 2I - B^T (4I)^{-1} B = row [3/2, -1/4, -1/4].
        let map = dtn_truncated(&unit_net(3, 1, Termination::Grounded)).unwrap();
        let row = row_f64(&map.matrix);
        assert!((row[0] - 1.5).abs() < 1e-14);
        assert!((row[1] + 0.25).abs() < 1e-14);
        assert!((row[2] + 0.25).abs() < 1e-14);
    }

    #[test]
    fn deep_truncations_reach_the_square_root() {
        let sqrt_l = minus_laplacian(3, P).unwrap().sqrt_psd().unwrap();
        for t in [Termination::Grounded, Termination::Insulated] {
            let map = dtn_truncated(&unit_net(3, 60, t)).unwrap();
            // Compare on nonconstant modes: deflate both constant modes.
            let spec = map.matrix.spectrum_real();
            let expect = sqrt_l.spectrum_real();
            for m in 1..3 {
                assert!(
                    (spec[m].to_f64() - expect[m].to_f64()).abs() < 1e-8,
                    "mode {m} at termination {t:?}"
                );
            }
            // The matrix route reaches the constant-mode values only up
            // to synthesis roundoff; the per-mode route is exact there.
            let constant = spec[0].to_f64();
            match t {
                Termination::Insulated => assert!(constant.abs() < 1e-14),
                Termination::Grounded => assert!((constant - 2.0 / 61.0).abs() < 1e-12),
            }
        }
    }

    #[test]
    fn per_mode_constant_mode_sequences() {
        for d in [0usize, 1, 5, 17] {
            let g = dtn_per_mode(&unit_net(5, d, Termination::Grounded), 0).unwrap();
            assert!((g.to_f64() - 2.0 / (d as f64 + 1.0)).abs() < 1e-14);
            let i = dtn_per_mode(&unit_net(5, d, Termination::Insulated), 0).unwrap();
            assert!(i.is_zero());
        }
    }

    #[test]
    fn grounded_constant_mode_is_exact_rational() {
        for d in 0..=50 {
            let x = grounded_constant_mode_exact(d);
            assert_eq!(x, Ratio::new(2, d as i64 + 1));
        }
    }

    #[test]
    fn per_mode_deep_limit_is_sqrt_three() {
        // n = 3, m = 1: mu = 1, fixed point of x = 2 - 1/(x+2) is sqrt(3).
        let x = dtn_per_mode(&unit_net(3, 200, Termination::Grounded), 1).unwrap();
        assert!((x.to_f64() - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn per_mode_matches_matrix_route() {
        for t in [Termination::Grounded, Termination::Insulated] {
            let net = unit_net(6, 9, t);
            let map = dtn_truncated(&net).unwrap();
            let spec = map.matrix.spectrum_real();
            for m in 0..6 {
                let scalar = dtn_per_mode(&net, m).unwrap();
                assert!(
                    (scalar.to_f64() - spec[m].to_f64()).abs() < 1e-11,
                    "mode {m} termination {t:?}"
                );
            }
        }
    }

    #[test]
    fn mode_out_of_range() {
        assert!(matches!(
            dtn_per_mode(&unit_net(4, 3, Termination::Grounded), 4),
            Err(Error::ModeOutOfRange { m: 4, n: 4 })
        ));
    }

    #[test]
    fn conductivity_other_than_one_is_rejected() {
        let err = CylinderNetwork::new(
            4,
            Depth::Finite(2),
            Termination::Grounded,
            Real::from_f64(1.5, P),
        );
        assert!(matches!(err, Err(Error::UnsupportedParameter(_))));
    }

    #[test]
    fn fixed_point_deflated_converges_to_sqrt_l() {
        let tol = Real::parse("1e-10", P).unwrap();
        let map = dtn_fixed_point(3, P, &tol, 200, true).unwrap();
        assert!(map.iterations.unwrap() <= 60);
        let sqrt_l = minus_laplacian(3, P).unwrap().sqrt_psd().unwrap();
        let diff = map.matrix.sub(&sqrt_l).unwrap().max_norm();
        assert!(diff.to_f64() < 1e-9);
    }

    #[test]
    fn fixed_point_undeflated_stalls_on_constant_mode() {
        let tol = Real::parse("1e-10", P).unwrap();
        let err = dtn_fixed_point(3, P, &tol, 100, false).unwrap_err();
        match err {
            Error::Nonconvergence { iterations, residual } => {
                assert_eq!(iterations, 100);
                // The constant-mode sequence is 2/(j+1); its step
                // difference 2/(j(j+1)) spreads over the n = 3 row
                // entries, so the row max-norm residual is one third of
                // the mode residual, about 6.6e-5 at j = 100.
                let expect = (2.0 / 100.0 - 2.0 / 101.0) / 3.0;
                assert!(
                    (residual - expect).abs() < 0.3 * expect,
                    "residual {residual} vs {expect}"
                );
            }
            other => panic!("expected nonconvergence, got {other:?}"),
        }
    }

    #[test]
    fn fixed_point_first_iterate_matches_depth_one() {
        let tol = Real::parse("10", P).unwrap(); // accept after one step
        let map = dtn_fixed_point(3, P, &tol, 1, false).unwrap();
        let row = row_f64(&map.matrix);
        assert!((row[0] - 1.5).abs() < 1e-14);
        assert!((row[1] + 0.25).abs() < 1e-14);
    }

    #[test]
    fn closed_form_row_and_row_sums() {
        let map = dtn_infinite_closed_form(3, P).unwrap();
        let row = row_f64(&map.matrix);
        let sqrt3 = 3f64.sqrt();
        assert!((row[0] - 2.0 * sqrt3 / 3.0).abs() < 1e-6);
        assert!((row[1] + sqrt3 / 3.0).abs() < 1e-6);
        let sum = map.matrix.row_sum().to_f64();
        assert!(sum.abs() < 1e-14);
    }

    #[test]
    fn closed_form_spectrum_is_two_sin() {
        for n in [4usize, 9, 16] {
            let map = dtn_infinite_closed_form(n, P).unwrap();
            let spec = map.matrix.spectrum_real();
            for (m, v) in spec.iter().enumerate() {
                let expect = 2.0 * (std::f64::consts::PI * m as f64 / n as f64).sin().abs();
                assert!((v.to_f64() - expect).abs() < 1e-12, "n={n} m={m}");
                let sym = infinite_mode_symbol(n, m, P).unwrap();
                assert!((sym.to_f64() - expect).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn closed_form_satisfies_fixed_point_equation() {
        for n in [3usize, 8, 31] {
            let map = dtn_infinite_closed_form(n, P).unwrap();
            let res = fixed_point_residual(&map.matrix).unwrap();
            assert!(res.to_f64() < 1e-10, "n={n} residual {}", res.to_f64());
        }
    }

    #[test]
    fn theorem_report_closed_form_small() {
        let tol = Real::parse("1e-10", P).unwrap();
        let report = verify_theorem41(3, &[RouteSpec::ClosedForm], &tol, P).unwrap();
        assert!(report.pass);
        assert!(report.routes[0].residual.as_ref().unwrap().to_f64() < 1e-13);

        // Parity-free: even n passes identically.
        let report = verify_theorem41(4, &[RouteSpec::ClosedForm], &tol, P).unwrap();
        assert!(report.pass);
    }

    #[test]
    fn theorem_report_records_route_errors() {
        let tol = Real::parse("1e-10", P).unwrap();
        let routes = [RouteSpec::FixedPoint {
            tol: Real::parse("1e-10", P).unwrap(),
            max_iter: 3,
            deflate_constant: false,
        }];
        let report = verify_theorem41(5, &routes, &tol, P).unwrap();
        assert!(!report.pass);
        assert!(report.routes[0].error.is_some());
    }

    #[test]
    fn all_modes_sweep_matches_single_mode() {
        let net = unit_net(7, 11, Termination::Insulated);
        let sweep = dtn_all_modes(&net).unwrap();
        for (m, v) in sweep.iter().enumerate() {
            let single = dtn_per_mode(&net, m).unwrap();
            assert_eq!(v.to_f64(), single.to_f64());
        }
    }
}
