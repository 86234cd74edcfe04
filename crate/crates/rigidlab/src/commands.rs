//! One function per subcommand. Each returns a JSON report and whether its
//! checks passed; invalid input surfaces as [`Error::Input`].

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rigidlab_core::apartment::{diameter_bound, ApartmentReport};
use rigidlab_core::harmonic::{harmonic_descent, wang_chain_report, ChainReport, DescentOptions, DescentResult, LambdaTable, SplitReport};
use rigidlab_core::indefinite::{ParabolicConfig, TRIAL_BOUNDS};
use rigidlab_core::spectra::{rigidity_margin, spectral_gap, SpectralReport};
use rigidlab_core::{EquivariantMap, LinkGraph, LinkKind, VoltageComplex};
use serde_json::{json, Map, Value};

use crate::format::{point_to_json, GraphJson};
use crate::report::Outcome;
use crate::suites::{apartment_suite, parabolic_suite, Field, ParabolicSummary};
use crate::Error;

/// Default tolerance of `spectrum`.
pub const SPECTRUM_TOL: f64 = 1e-8;
/// Tolerance of `gap` against the closed form.
pub const GAP_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum GeometryArg {
    /// Incidence graph of PG(2,q).
    Pg,
    /// Incidence graph of the symplectic quadrangle W(q).
    Gq,
    /// K_{q+1,q+1}.
    Bipartite,
}

impl GeometryArg {
    pub fn link_kind(self) -> LinkKind {
        match self {
            GeometryArg::Pg => LinkKind::Sl3,
            GeometryArg::Gq => LinkKind::Sp4Special,
            GeometryArg::Bipartite => LinkKind::Sp4NonSpecial,
        }
    }
}

pub fn geometry(kind: GeometryArg, q: u32) -> Result<GraphJson, Error> {
    let g = LinkGraph::build(kind.link_kind(), q).map_err(|e| Error::Input(e.to_string()))?;
    Ok(GraphJson::from_graph(&g))
}

pub fn spectral_json(r: &SpectralReport) -> Value {
    json!({
        "kind": r.kind.name(),
        "q": r.q,
        "n_vertices": r.n_vertices,
        "eigenvalues": r.eigenvalues,
        "lambda1": r.lambda1,
        "expected": r.expected,
        "residual": r.residual,
        "kernel_dim": r.kernel_dim,
    })
}

fn gap_of(g: &LinkGraph) -> Result<SpectralReport, Error> {
    spectral_gap(g).map_err(|e| Error::Check(e.to_string()))
}

/// Passes iff λ₁ is within `tol` of its closed form.
pub fn spectrum(g: &LinkGraph, tol: f64) -> Result<Outcome, Error> {
    if !(tol > 0.0) {
        return Err(Error::Input("tolerance must be positive".into()));
    }
    let r = gap_of(g)?;
    let passed = r.residual <= tol;
    let mut report = spectral_json(&r);
    report["tol"] = json!(tol);
    report["passes"] = json!(passed);
    Ok(Outcome { report, passed })
}

/// λ₁ against its closed form, and the rigidity margin. A margin of zero is
/// reported in a `warning` field and does not fail the command.
pub fn gap(kind: LinkKind, q: u32) -> Result<Outcome, Error> {
    let g = LinkGraph::build(kind, q).map_err(|e| Error::Input(e.to_string()))?;
    let r = gap_of(&g)?;
    let m = rigidity_margin(kind, q);
    let passed = r.residual <= GAP_TOL && r.kernel_dim == 1;
    let mut report = json!({
        "kind": kind.name(),
        "q": q,
        "lambda1": r.lambda1,
        "expected": r.expected,
        "residual": r.residual,
        "kernel_dim": r.kernel_dim,
        "margin": m.margin,
        "margin_lambda": m.lambda,
        "threshold": m.threshold,
        "passes": passed,
    });
    if m.threshold {
        report["warning"] = json!("margin is zero: the rigidity inequality holds only with equality");
    } else if m.margin < 0.0 {
        report["warning"] = json!("margin is negative");
    }
    Ok(Outcome { report, passed })
}

/// Starting map for `harmonic`.
#[derive(Clone, Debug)]
pub enum Init {
    Map(EquivariantMap),
    /// A random map drawn from ChaCha8 with this seed.
    Seed(u64),
}

pub fn descent_json(r: &DescentResult) -> Value {
    json!({
        "status": r.status.name(),
        "sweeps": r.sweeps,
        "energy": r.energy(),
        "residual": r.residual,
        "drift": r.drift,
        "trace": r.trace,
        "map": { "values": r.map.values().iter().map(point_to_json).collect::<Vec<_>>() },
    })
}

/// Passes iff the descent converged.
pub fn harmonic(c: &VoltageComplex, init: Init, opts: &DescentOptions) -> Result<Outcome, Error> {
    if !(opts.tol > 0.0) || !(opts.divergence_radius > 0.0) {
        return Err(Error::Input("tolerance and divergence radius must be positive".into()));
    }
    let (f0, seed) = match init {
        Init::Map(f) => (f, None),
        Init::Seed(s) => {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            (EquivariantMap::random(c.space().clone(), c.vertex_count(), &mut rng, 1.0), Some(s))
        }
    };
    let r = harmonic_descent(c, &f0, opts).map_err(|e| Error::Check(e.to_string()))?;
    let passed = r.status == rigidlab_core::harmonic::DescentStatus::Converged;
    let mut report = descent_json(&r);
    report["seed"] = json!(seed);
    report["max_iter"] = json!(opts.max_iter);
    report["tol"] = json!(opts.tol);
    Ok(Outcome { report, passed })
}

fn split_json(s: &SplitReport) -> Value {
    json!({
        "e1": s.e1,
        "e2": s.e2,
        "special_sum": s.special_sum,
        "special_upper": s.special_upper,
        "special_lower": s.special_lower,
        "nonspecial_sum": s.nonspecial_sum,
        "nonspecial_upper": s.nonspecial_upper,
        "nonspecial_lower": s.nonspecial_lower,
        "upper_holds": s.upper_holds,
        "lower_holds": s.lower_holds,
        "e1_dominates": s.e1_dominates,
    })
}

pub fn chain_json(r: &ChainReport) -> Value {
    let vertices: Vec<Value> = r
        .vertices
        .iter()
        .map(|v| {
            json!({
                "vertex": v.vertex,
                "class": v.class.name(),
                "lambda": v.lambda,
                "link_lambda": v.link_lambda,
                "link_vertices": v.link_vertices,
                "link_edges": v.link_edges,
                "differential_energy": v.differential_energy,
                "comparison": v.comparison,
                "slack": v.slack,
                "differential_norm": v.differential_norm,
                "residual": v.residual,
            })
        })
        .collect();
    json!({
        "q": r.q,
        "energy": r.energy,
        "vertices": vertices,
        "comparison_holds": r.comparison_holds,
        "differential_total": r.differential_total,
        "comparison_total": r.comparison_total,
        "counting_target": r.counting_target,
        "counting_error": r.counting_error,
        "counting_holds": r.counting_holds,
        "gap_bound": r.gap_bound,
        "gap_slack": r.gap_slack,
        "gradient_residual": r.gradient_residual,
        "gap_asserted": r.gap_asserted,
        "gap_holds": r.gap_holds,
        "split": r.split.as_ref().map(split_json),
        "passes": r.passes(),
    })
}

/// Passes iff every asserted inequality and identity holds.
pub fn chain(c: &VoltageComplex, f: &EquivariantMap, lambdas: &LambdaTable) -> Result<Outcome, Error> {
    let r = wang_chain_report(c, f, lambdas).map_err(|e| Error::Input(e.to_string()))?;
    Ok(Outcome { report: chain_json(&r), passed: r.passes() })
}

fn residual_map(r: &rigidlab_core::indefinite::TrialResiduals) -> Value {
    Value::Object(r.entries().iter().map(|(k, v)| ((*k).to_owned(), json!(v))).collect::<Map<_, _>>())
}

pub fn parabolic_json(s: &ParabolicSummary) -> Value {
    json!({
        "field": s.field.name(),
        "q": s.config.q_iso,
        "p": s.config.p,
        "n3": s.config.n3,
        "trials": s.trials,
        "seed": s.seed,
        "max_residuals": residual_map(&s.max),
        "bounds": residual_map(&TRIAL_BOUNDS),
        "failures": s.failures,
        "passes": s.passes(),
    })
}

pub fn parabolic(field: Field, config: ParabolicConfig, trials: usize, seed: u64) -> Result<Outcome, Error> {
    if trials == 0 {
        return Err(Error::Input("at least one trial is required".into()));
    }
    let s = parabolic_suite(field, config, trials, seed)?;
    Ok(Outcome { report: parabolic_json(&s), passed: s.passes() })
}

pub fn apartment_json(r: &ApartmentReport, seed: u64) -> Value {
    json!({
        "p": r.p,
        "n_simplices": r.n_simplices,
        "max_diameter": r.max_diameter,
        "bound_pi_over_2_margin": r.bound_pi_over_2_margin,
        "bound": r.bound,
        "samples_per_simplex": r.samples_per_simplex,
        "min_inner": r.min_inner,
        "min_leading": r.min_leading,
        "failures": r.failures,
        "seed": seed,
        "passes": r.passes(),
    })
}

pub fn apartment(p: usize, samples: usize, seed: u64) -> Result<Outcome, Error> {
    let r = apartment_suite(p, samples, seed)?;
    debug_assert_eq!(r.bound, diameter_bound(p));
    Ok(Outcome { report: apartment_json(&r, seed), passed: r.passes() })
}
