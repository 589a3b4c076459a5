//! Invariant suites over exhaustive and seeded corpora, shared by the
//! `verify` command and the acceptance tests. Every check returns a
//! pass/fail with a short detail string; instance generation is sequential
//! and seeded, processing is parallel with order-deterministic reduction.

use crate::cavity::{
    check_boundary_lemma, check_reciprocity, full_cavity, hat_transform, hat_transform_oracle,
    local_triple,
};
use crate::corpus;
use crate::field::{field_element_sign, AlgebraicNumber};
use crate::graph::{enumerate_free_trees_capped, Graph, RootedGraph, VertexSet};
use crate::spectral::{
    atom_formula_check, eigenspace_dim_via_components, prime_characterization_check,
    SpectralContext,
};
use crate::{Rat, Result};
use num_complex::Complex64;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashSet;

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn run_check(name: &str, f: impl FnOnce() -> Result<(bool, String)>) -> CheckResult {
    match f() {
        Ok((pass, detail)) => CheckResult {
            name: name.into(),
            pass,
            detail,
        },
        Err(e) => CheckResult {
            name: name.into(),
            pass: false,
            detail: format!("error: {e}"),
        },
    }
}

/// Corpus sizes for the suites. `standard()` uses the sizes the invariants
/// are stated at; `quick()` is a scaled-down smoke version.
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub seed: u64,
    pub exhaustive_n: usize,
    pub pruefer_oracle_n: usize,
    pub subset_oracle_pairs: usize,
    pub permutation_trials: usize,
    pub permutation_size: usize,
    pub mtp_instances: usize,
    pub locglo_random_trees: usize,
    pub locglo_random_size: usize,
    pub decomposition_random_trees: usize,
    pub decomposition_random_size: usize,
    pub formula_forests: usize,
    pub formula_forest_size: usize,
    pub cavity_random_trees: usize,
    pub cavity_random_size: usize,
    pub oracle_measures: usize,
    pub asymptotic_instances: usize,
    pub tree_paths: usize,
}

impl VerifyConfig {
    pub fn standard() -> Self {
        VerifyConfig {
            seed: 7,
            exhaustive_n: 9,
            pruefer_oracle_n: 9,
            subset_oracle_pairs: 1000,
            permutation_trials: 500,
            permutation_size: 12,
            mtp_instances: 100,
            locglo_random_trees: 200,
            locglo_random_size: 30,
            decomposition_random_trees: 500,
            decomposition_random_size: 40,
            formula_forests: 200,
            formula_forest_size: 30,
            cavity_random_trees: 300,
            cavity_random_size: 30,
            oracle_measures: 500,
            asymptotic_instances: 50,
            tree_paths: 500,
        }
    }

    pub fn quick() -> Self {
        VerifyConfig {
            seed: 7,
            exhaustive_n: 7,
            pruefer_oracle_n: 7,
            subset_oracle_pairs: 100,
            permutation_trials: 60,
            permutation_size: 10,
            mtp_instances: 20,
            locglo_random_trees: 20,
            locglo_random_size: 16,
            decomposition_random_trees: 40,
            decomposition_random_size: 20,
            formula_forests: 30,
            formula_forest_size: 16,
            cavity_random_trees: 30,
            cavity_random_size: 14,
            oracle_measures: 60,
            asymptotic_instances: 10,
            tree_paths: 80,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_exhaustive_n(mut self, n: usize) -> Self {
        self.exhaustive_n = n;
        self
    }
}

fn all_trees_upto(n: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    for k in 1..=n {
        out.extend(enumerate_free_trees_capped(k, n.max(16)).unwrap());
    }
    out
}

/// Interesting spectral locations of a tree: its eigenvalues, the eigenvalues
/// of its single-vertex deletions, and the standard grid.
fn lambda_grid(tree: &Graph) -> Result<Vec<AlgebraicNumber>> {
    let mut set: Vec<AlgebraicNumber> = corpus::standard_lambdas();
    let mut push = |l: AlgebraicNumber| {
        if !set.iter().any(|x| *x == l) {
            set.push(l);
        }
    };
    for l in crate::charpoly::eigenvalue_classes(tree)? {
        push(l);
    }
    for v in 0..tree.vertex_count() {
        let (del, _) = tree.delete_vertex(v);
        for l in crate::charpoly::eigenvalue_classes(&del)? {
            push(l);
        }
    }
    Ok(set)
}

// ---- graph suite ----

pub fn graph_suite(cfg: &VerifyConfig) -> SuiteReport {
    let mut checks = Vec::new();

    checks.push(run_check("free-tree-counts-vs-pruefer-oracle", || {
        for n in 2..=cfg.pruefer_oracle_n {
            let enumerated = enumerate_free_trees_capped(n, 16)?.count();
            // brute force: canonicalize every labeled tree from its Pruefer code
            let total: u64 = (n as u64).pow(n as u32 - 2);
            let classes: HashSet<_> = (0..total)
                .into_par_iter()
                .map(|mut code| {
                    let mut seq = vec![0usize; n - 2];
                    for s in seq.iter_mut() {
                        *s = (code % n as u64) as usize;
                        code /= n as u64;
                    }
                    Graph::from_pruefer(n, &seq).unwrap().canonical_code()
                })
                .collect::<Vec<_>>()
                .into_iter()
                .collect();
            if classes.len() != enumerated {
                return Ok((
                    false,
                    format!("n={n}: enumerated {enumerated}, oracle {}", classes.len()),
                ));
            }
        }
        Ok((true, format!("n <= {}", cfg.pruefer_oracle_n)))
    }));

    checks.push(run_check("components-boundary-vs-independent-oracle", || {
        let mut rng = corpus::rng(cfg.seed ^ 0x11);
        for i in 0..cfg.subset_oracle_pairs {
            let g = if i % 3 == 0 {
                corpus::random_forest(&mut rng, 24)
            } else {
                corpus::random_tree(&mut rng, 20)
            };
            let s = corpus::random_subset(&mut rng, g.vertex_count());
            // union-find oracle for induced components
            let n = g.vertex_count();
            let mut parent: Vec<usize> = (0..n).collect();
            fn find(p: &mut Vec<usize>, x: usize) -> usize {
                let mut x = x;
                while p[x] != x {
                    p[x] = p[p[x]];
                    x = p[x];
                }
                x
            }
            for (u, v) in g.edges() {
                if s.contains(u) && s.contains(v) {
                    let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                    parent[ru] = rv;
                }
            }
            let mut oracle_comps: std::collections::HashMap<usize, Vec<usize>> =
                std::collections::HashMap::new();
            for v in s.iter() {
                oracle_comps.entry(find(&mut parent, v)).or_default().push(v);
            }
            let mut want: Vec<Vec<usize>> = oracle_comps.into_values().collect();
            want.sort();
            let mut got: Vec<Vec<usize>> =
                g.components_of(&s).iter().map(|c| c.indices()).collect();
            got.sort();
            if got != want {
                return Ok((false, format!("component mismatch at pair {i}")));
            }
            // direct-scan boundary oracle
            let want_b: Vec<usize> = (0..n)
                .filter(|&v| !s.contains(v) && g.neighbors(v).any(|w| s.contains(w)))
                .collect();
            if g.boundary_of(&s).indices() != want_b {
                return Ok((false, format!("boundary mismatch at pair {i}")));
            }
        }
        Ok((true, format!("{} pairs", cfg.subset_oracle_pairs)))
    }));

    checks.push(run_check("canonical-code-permutation-invariance", || {
        let mut rng = corpus::rng(cfg.seed ^ 0x12);
        for _ in 0..cfg.permutation_trials {
            let n = rand::Rng::gen_range(&mut rng, 1..=cfg.permutation_size);
            let t = corpus::random_tree(&mut rng, n);
            let code = t.canonical_code();
            let mut perm: Vec<usize> = (0..n).collect();
            rand::seq::SliceRandom::shuffle(&mut perm[..], &mut rng);
            if t.relabel(&perm).canonical_code() != code {
                return Ok((false, format!("permutation changed the code of {t:?}")));
            }
            if code.decode()?.canonical_code() != code {
                return Ok((false, "decode round-trip failed".into()));
            }
        }
        Ok((true, format!("{} trials", cfg.permutation_trials)))
    }));

    checks.push(run_check("mass-transport-principle", || {
        let mut rng = corpus::rng(cfg.seed ^ 0x13);
        for i in 0..cfg.mtp_instances {
            let g = match i % 3 {
                0 => corpus::random_tree(&mut rng, 15),
                1 => corpus::random_forest(&mut rng, 18),
                _ => {
                    let pi = crate::random::DegreeDistribution::parse("2:1/2,3:1/2")?;
                    crate::random::sample_configuration_model(&pi, 14, cfg.seed ^ (i as u64))?
                        .graph
                }
            };
            let f = corpus::random_transport_table(&mut rng, g.vertex_count());
            let (lhs, rhs) = g.mtp_check(f);
            if lhs != rhs {
                return Ok((false, format!("MTP sides differ on instance {i}")));
            }
        }
        Ok((true, format!("{} instances", cfg.mtp_instances)))
    }));

    checks.push(run_check("uniform-rooting-examples", || {
        let p3 = Graph::path(3);
        let one = p3.uniform_rooting_expectation(|_| Rat::one())?;
        if one != Rat::one() {
            return Ok((false, "E[1] != 1".into()));
        }
        let deg = p3.uniform_rooting_expectation(|v| crate::rat_int(p3.degree(v) as i64))?;
        if deg != crate::rat_int(4) / crate::rat_int(3) {
            return Ok((false, "mean degree of P3".into()));
        }
        // density of the 0-support of the 3-star is 3/4
        let star = Graph::star(3);
        let dec = crate::spectral::support(&star, &AlgebraicNumber::from_int(0.into()))?;
        let density = star.uniform_rooting_expectation(|v| {
            if dec.support.contains(v) {
                Rat::one()
            } else {
                Rat::zero()
            }
        })?;
        if density != crate::rat_int(3) / crate::rat_int(4) {
            return Ok((false, "0-support density of the 3-star".into()));
        }
        Ok((true, "3 examples".into()))
    }));

    SuiteReport {
        suite: "graph",
        checks,
    }
}

// ---- spectral suite ----

pub fn spectral_suite(cfg: &VerifyConfig) -> SuiteReport {
    let mut checks = Vec::new();
    let trees = all_trees_upto(cfg.exhaustive_n);

    checks.push(run_check("mass-conservation-and-positivity", || {
        let bad: Vec<String> = trees
            .par_iter()
            .flat_map_iter(|t| {
                (0..t.vertex_count()).map(move |root| (t.clone(), root))
            })
            .filter_map(|(t, root)| {
                let m = crate::spectral::spectral_measure(
                    &RootedGraph::new(t.clone(), root).ok()?,
                )
                .ok()?;
                if m.total_mass() != Rat::one() {
                    return Some(format!("mass != 1 on {t:?} at {root}"));
                }
                for (loc, mass) in m.atoms() {
                    if field_element_sign(&mass, &loc) != 1 {
                        return Some(format!("non-positive atom on {t:?} at {root}"));
                    }
                }
                None
            })
            .collect();
        Ok((bad.is_empty(), bad.first().cloned().unwrap_or_else(|| {
            format!("{} rooted trees", trees.iter().map(|t| t.vertex_count()).sum::<usize>())
        })))
    }));

    checks.push(run_check("local-global-consistency", || {
        // exhaustive trees, cycles, and seeded graphs with cycles
        for t in &trees {
            if !crate::spectral::locglo_check(t)? {
                return Ok((false, format!("locglo fails on {t:?}")));
            }
        }
        for n in 3..=8 {
            if !crate::spectral::locglo_check(&Graph::cycle(n))? {
                return Ok((false, format!("locglo fails on C{n}")));
            }
        }
        let mut rng = corpus::rng(cfg.seed ^ 0x21);
        let mut instances = Vec::new();
        for _ in 0..cfg.locglo_random_trees {
            let size = 1 + rand::Rng::gen_range(&mut rng, 1..cfg.locglo_random_size);
            instances.push(corpus::random_tree(&mut rng, size));
        }
        let bad: Vec<String> = instances
            .par_iter()
            .filter_map(|t| match crate::spectral::locglo_check(t) {
                Ok(true) => None,
                Ok(false) => Some(format!("locglo fails on n={}", t.vertex_count())),
                Err(e) => Some(format!("error: {e}")),
            })
            .collect();
        Ok((
            bad.is_empty(),
            bad.first()
                .cloned()
                .unwrap_or_else(|| format!("{} random trees", cfg.locglo_random_trees)),
        ))
    }));

    checks.push(run_check("support-criterion-two-routes", || {
        for t in &trees {
            let ctx = SpectralContext::new(t)?;
            for lambda in ctx.eigenvalue_classes()? {
                for o in 0..t.vertex_count() {
                    let drop_route = ctx.in_support(o, &lambda);
                    let mass = ctx.atom_mass(o, &lambda)?;
                    let mass_route = !mass.is_zero()
                        && field_element_sign(&mass, &lambda) == 1;
                    if drop_route != mass_route {
                        return Ok((
                            false,
                            format!("criteria disagree on {t:?} at vertex {o}"),
                        ));
                    }
                }
            }
        }
        Ok((true, format!("all trees n <= {}", cfg.exhaustive_n)))
    }));

    checks.push(run_check("decomposition-theorem-exhaustive", || {
        // boundary lemma, component primality, multiplicity formula
        let bad: Vec<String> = trees
            .par_iter()
            .filter_map(|t| match decomposition_failures(t) {
                Ok(None) => None,
                Ok(Some(msg)) => Some(msg),
                Err(msg) => Some(msg),
            })
            .collect();
        Ok((
            bad.is_empty(),
            bad.first()
                .cloned()
                .unwrap_or_else(|| format!("all trees n <= {}", cfg.exhaustive_n)),
        ))
    }));

    checks.push(run_check("decomposition-theorem-random", || {
        let mut rng = corpus::rng(cfg.seed ^ 0x22);
        let mut instances = Vec::new();
        for _ in 0..cfg.decomposition_random_trees {
            let size = 2 + rand::Rng::gen_range(&mut rng, 0..cfg.decomposition_random_size - 1);
            instances.push(corpus::random_tree(&mut rng, size));
        }
        let bad: Vec<String> = instances
            .par_iter()
            .filter_map(|t| match decomposition_failures(t) {
                Ok(None) => None,
                Ok(Some(msg)) => Some(msg),
                Err(msg) => Some(msg),
            })
            .collect();
        Ok((
            bad.is_empty(),
            bad.first().cloned().unwrap_or_else(|| {
                format!(
                    "{} random trees n <= {}",
                    cfg.decomposition_random_trees, cfg.decomposition_random_size
                )
            }),
        ))
    }));

    checks.push(run_check("prime-characterization", || {
        for t in &trees {
            let ctx = SpectralContext::new(t)?;
            for lambda in ctx.eigenvalue_classes()? {
                if !prime_characterization_check(t, &lambda)? {
                    return Ok((false, format!("characterization fails on {t:?}")));
                }
            }
        }
        Ok((true, format!("all trees n <= {}, all eigenvalues", cfg.exhaustive_n)))
    }));

    checks.push(run_check("eigenspace-dimension-via-components", || {
        for t in &trees {
            let ctx = SpectralContext::new(t)?;
            for lambda in ctx.eigenvalue_classes()? {
                let dim = eigenspace_dim_via_components(t, &lambda)?;
                if dim != ctx.multiplicity(&lambda) {
                    return Ok((false, format!("dimension mismatch on {t:?}")));
                }
            }
        }
        let mut rng = corpus::rng(cfg.seed ^ 0x24);
        for _ in 0..20 {
            let f = corpus::random_forest(&mut rng, cfg.formula_forest_size);
            let ctx = SpectralContext::new(&f)?;
            for lambda in ctx.eigenvalue_classes()? {
                let dim = eigenspace_dim_via_components(&f, &lambda)?;
                if dim != ctx.multiplicity(&lambda) {
                    return Ok((false, format!("dimension mismatch on a random forest (n={})", f.vertex_count())));
                }
            }
        }
        Ok((true, format!("all trees n <= {} plus 20 random forests", cfg.exhaustive_n)))
    }));

    checks.push(run_check("atom-formulas-on-forests", || {
        let mut rng = corpus::rng(cfg.seed ^ 0x23);
        let mut instances = Vec::new();
        for _ in 0..cfg.formula_forests {
            instances.push(corpus::random_forest(&mut rng, cfg.formula_forest_size));
        }
        let bad: Vec<String> = instances
            .par_iter()
            .filter_map(|f| {
                let ctx = match SpectralContext::new(f) {
                    Ok(c) => c,
                    Err(e) => return Some(format!("error: {e}")),
                };
                let lambdas = match ctx.eigenvalue_classes() {
                    Ok(l) => l,
                    Err(e) => return Some(format!("error: {e}")),
                };
                for lambda in lambdas {
                    match atom_formula_check(f, &lambda) {
                        Ok(rep) if rep.all_equal() => {}
                        Ok(rep) => {
                            return Some(format!(
                                "formula mismatch: a={} b={} c={}",
                                rep.expected_atom, rep.main_rhs, rep.component_rhs
                            ))
                        }
                        Err(e) => return Some(format!("error: {e}")),
                    }
                }
                None
            })
            .collect();
        Ok((
            bad.is_empty(),
            bad.first()
                .cloned()
                .unwrap_or_else(|| format!("{} forests, every eigenvalue", cfg.formula_forests)),
        ))
    }));

    SuiteReport {
        suite: "spectral",
        checks,
    }
}

/// Boundary lemma + component primality + multiplicity formula at every
/// eigenvalue of one forest. `Ok(None)` means no failure.
fn decomposition_failures(tree: &Graph) -> std::result::Result<Option<String>, String> {
    let ctx = SpectralContext::new(tree).map_err(|e| format!("error: {e}"))?;
    let mut lambdas = corpus::standard_lambdas();
    for l in ctx.eigenvalue_classes().map_err(|e| format!("error: {e}"))? {
        if !lambdas.iter().any(|x| *x == l) {
            lambdas.push(l);
        }
    }
    for lambda in lambdas {
        let dec = ctx.support(&lambda).map_err(|e| format!("error: {e}"))?;
        for x in dec.boundary.iter() {
            if tree.degree_in(x, &dec.support) < 2 {
                return Ok(Some(format!(
                    "boundary vertex {x} has < 2 support neighbors (n={})",
                    tree.vertex_count()
                )));
            }
        }
        if !dec.component_prime_flags.iter().all(|&f| f) {
            return Ok(Some(format!(
                "non-prime support component (n={})",
                tree.vertex_count()
            )));
        }
        let c_minus_b = dec.components.len() as i64 - dec.boundary.len() as i64;
        if dec.multiplicity as i64 != c_minus_b {
            return Ok(Some(format!(
                "multiplicity {} != components - boundary {} (n={})",
                dec.multiplicity,
                c_minus_b,
                tree.vertex_count()
            )));
        }
    }
    Ok(None)
}

// ---- cavity suite ----

pub fn cavity_suite(cfg: &VerifyConfig) -> SuiteReport {
    let mut checks = Vec::new();
    let trees = all_trees_upto(cfg.exhaustive_n);

    checks.push(run_check("hat-transform-vs-measure-oracle", || {
        let mut rng = corpus::rng(cfg.seed ^ 0x31);
        let lambdas = corpus::standard_lambdas();
        for i in 0..cfg.oracle_measures {
            let m = corpus::random_rational_probability_measure(&mut rng, 5);
            for lambda in &lambdas {
                let triple = local_triple(&m, lambda)?;
                let via_table = hat_transform(&triple, lambda);
                let via_measure = hat_transform_oracle(&m, lambda)?;
                if via_table != via_measure {
                    return Ok((
                        false,
                        format!(
                            "measure {i}: table {} vs oracle {}",
                            via_table.describe(),
                            via_measure.describe()
                        ),
                    ));
                }
            }
        }
        Ok((true, format!("{} measures x {} locations", cfg.oracle_measures, 6)))
    }));

    checks.push(run_check("reciprocity-relations-exhaustive", || {
        let bad: Vec<String> = trees
            .par_iter()
            .filter_map(|t| {
                let lambdas = match lambda_grid(t) {
                    Ok(l) => l,
                    Err(e) => return Some(format!("error: {e}")),
                };
                for lambda in lambdas {
                    match check_reciprocity(t, &lambda) {
                        Ok(rep) if rep.all_pass() => {}
                        Ok(rep) => {
                            let r = rep
                                .relations
                                .iter()
                                .find(|r| r.failures > 0)
                                .unwrap();
                            return Some(format!(
                                "{} fails on {t:?}: {}",
                                r.name,
                                r.first_failure.clone().unwrap_or_default()
                            ));
                        }
                        Err(e) => return Some(format!("error: {e}")),
                    }
                }
                None
            })
            .collect();
        Ok((
            bad.is_empty(),
            bad.first()
                .cloned()
                .unwrap_or_else(|| format!("all trees n <= {}, all locations", cfg.exhaustive_n)),
        ))
    }));

    checks.push(run_check("cavity-root-alpha-vs-spectral-mass", || {
        // exhaustive part
        let bad: Vec<String> = trees
            .par_iter()
            .filter_map(|t| cavity_alpha_failures(t).transpose())
            .map(|r| r.unwrap_or_else(|e| e))
            .collect();
        if let Some(b) = bad.first() {
            return Ok((false, b.clone()));
        }
        // random part
        let mut rng = corpus::rng(cfg.seed ^ 0x32);
        let mut instances = Vec::new();
        for _ in 0..cfg.cavity_random_trees {
            let size = 2 + rand::Rng::gen_range(&mut rng, 0..cfg.cavity_random_size - 1);
            instances.push(corpus::random_tree(&mut rng, size));
        }
        let bad: Vec<String> = instances
            .par_iter()
            .filter_map(|t| cavity_alpha_failures(t).transpose())
            .map(|r| r.unwrap_or_else(|e| e))
            .collect();
        Ok((
            bad.is_empty(),
            bad.first().cloned().unwrap_or_else(|| {
                format!(
                    "exhaustive n <= {} plus {} random trees",
                    cfg.exhaustive_n, cfg.cavity_random_trees
                )
            }),
        ))
    }));

    checks.push(run_check("boundary-lemma", || {
        for t in &trees {
            for lambda in lambda_grid(t)? {
                if !check_boundary_lemma(t, &lambda)? {
                    return Ok((false, format!("boundary lemma fails on {t:?}")));
                }
            }
        }
        Ok((true, format!("all trees n <= {}", cfg.exhaustive_n)))
    }));

    checks.push(run_check("stieltjes-asymptotics", || {
        let mut rng = corpus::rng(cfg.seed ^ 0x33);
        for i in 0..cfg.asymptotic_instances {
            let size = 2 + rand::Rng::gen_range(&mut rng, 0..10);
            let t = corpus::random_tree(&mut rng, size);
            let root = rand::Rng::gen_range(&mut rng, 0..t.vertex_count());
            let rg = RootedGraph::new(t.clone(), root)?;
            let m = crate::spectral::spectral_measure(&rg)?;
            let lambdas = corpus::standard_lambdas();
            let lambda = &lambdas[i % lambdas.len()];
            let triple = local_triple(&m, lambda)?;
            let lam_f = lambda.to_f64();
            for eps in [1e-4f64, 1e-6] {
                let s = crate::spectral::stieltjes_eval(&rg, Complex64::new(lam_f, eps))?;
                let alpha_f = triple.alpha().approx_at(lam_f);
                if (eps * s.im - alpha_f).abs() > 10.0 * eps {
                    return Ok((
                        false,
                        format!("alpha asymptotic off on instance {i} at eps {eps}"),
                    ));
                }
                if let Ok(gamma) = triple.gamma() {
                    let gamma_f = gamma.approx_at(lam_f);
                    if (s.re - gamma_f).abs() > 10.0 * eps {
                        return Ok((
                            false,
                            format!("gamma asymptotic off on instance {i} at eps {eps}"),
                        ));
                    }
                }
            }
        }
        Ok((true, format!("{} instances", cfg.asymptotic_instances)))
    }));

    SuiteReport {
        suite: "cavity",
        checks,
    }
}

fn cavity_alpha_failures(tree: &Graph) -> std::result::Result<Option<String>, String> {
    let ctx = SpectralContext::new(tree).map_err(|e| format!("error: {e}"))?;
    let mut lambdas = corpus::standard_lambdas();
    for l in ctx.eigenvalue_classes().map_err(|e| format!("error: {e}"))? {
        if !lambdas.iter().any(|x| *x == l) {
            lambdas.push(l);
        }
    }
    for lambda in &lambdas {
        let field = full_cavity(tree, lambda).map_err(|e| format!("error: {e}"))?;
        for o in 0..tree.vertex_count() {
            let mass = ctx.atom_mass(o, lambda).map_err(|e| format!("error: {e}"))?;
            if field.vertex[o].alpha() != mass {
                return Ok(Some(format!(
                    "cavity alpha != spectral mass at vertex {o} (n={})",
                    tree.vertex_count()
                )));
            }
        }
    }
    Ok(None)
}

// ---- primes suite ----

pub fn primes_suite(cfg: &VerifyConfig) -> SuiteReport {
    let mut checks = Vec::new();
    let depth = cfg.exhaustive_n.min(10);

    checks.push(run_check("table-1-reproduction", || {
        let index = crate::primes::build_index(4)?;
        let flat = index.flattened();
        let taus: Vec<usize> = flat.iter().map(|(_, t, _)| *t).collect();
        let ok = flat.len() == 11 && taus == vec![1, 2, 2, 3, 3, 4, 4, 4, 4, 4, 4];
        Ok((ok, format!("{} entries, taus {:?}", flat.len(), taus)))
    }));

    checks.push(run_check("witnesses-are-lambda-prime", || {
        let index = crate::primes::build_index(depth)?;
        for e in index.entries() {
            let tree = e.witness.decode()?;
            for root in &e.roots {
                if !crate::spectral::is_lambda_prime(&tree, root)? {
                    return Ok((false, format!("witness not prime for {root:?}")));
                }
            }
        }
        Ok((true, format!("index depth {depth}")))
    }));

    checks.push(run_check("index-monotone-under-deepening", || {
        let small = crate::primes::build_index(depth.saturating_sub(2).max(2))?;
        let big = crate::primes::build_index(depth)?;
        for e in small.entries() {
            match big.entries().iter().find(|f| f.minpoly == e.minpoly) {
                Some(f) if f.tau == e.tau && f.witness == e.witness => {}
                _ => return Ok((false, format!("entry changed: {}", e.minpoly.pretty()))),
            }
        }
        Ok((true, "taus stable".into()))
    }));

    checks.push(run_check("eigenvalues-closed-under-negation", || {
        let index = crate::primes::build_index(depth.min(8))?;
        for e in index.entries() {
            for r in &e.roots {
                if index.tau(&r.negate()) != crate::primes::Tau::Found(e.tau) {
                    return Ok((false, format!("negation missing for {r:?}")));
                }
            }
        }
        Ok((true, "bipartite symmetry".into()))
    }));

    SuiteReport {
        suite: "primes",
        checks,
    }
}

// ---- isoperimetry suite ----

pub fn isoperimetry_suite(cfg: &VerifyConfig) -> SuiteReport {
    let mut checks = Vec::new();

    checks.push(run_check("ratio-isomorphism-invariance", || {
        let mut rng = corpus::rng(cfg.seed ^ 0x41);
        for _ in 0..cfg.permutation_trials.min(200) {
            let n = 2 + rand::Rng::gen_range(&mut rng, 0..14);
            let t = corpus::random_tree(&mut rng, n);
            let s = corpus::random_connected_subset(&t, &mut rng, 1 + n / 2);
            let r1 = crate::isoperimetry::isoperimetric_ratio(&t, &s)?;
            let mut perm: Vec<usize> = (0..n).collect();
            rand::seq::SliceRandom::shuffle(&mut perm[..], &mut rng);
            let t2 = t.relabel(&perm);
            let s2 = VertexSet::from_indices(
                n,
                &s.iter().map(|v| perm[v]).collect::<Vec<_>>(),
            )?;
            let r2 = crate::isoperimetry::isoperimetric_ratio(&t2, &s2)?;
            if r1 != r2 {
                return Ok((false, "ratio changed under relabeling".into()));
            }
        }
        Ok((true, "permutation trials".into()))
    }));

    checks.push(run_check("tree-boundary-bound-exhaustive", || {
        let trees = all_trees_upto(cfg.exhaustive_n);
        let bad: Vec<String> = trees
            .par_iter()
            .filter_map(|t| match crate::isoperimetry::tree_boundary_bound_check(t, 3) {
                Ok(true) => None,
                Ok(false) => Some(format!("bound violated on {t:?}")),
                Err(e) => Some(format!("error: {e}")),
            })
            .collect();
        Ok((
            bad.is_empty(),
            bad.first()
                .cloned()
                .unwrap_or_else(|| format!("delta=3, all trees n <= {}", cfg.exhaustive_n)),
        ))
    }));

    checks.push(run_check("anchored-vs-bitmask-oracle", || {
        let mut rng = corpus::rng(cfg.seed ^ 0x42);
        for _ in 0..20 {
            let n = 4 + rand::Rng::gen_range(&mut rng, 0..10);
            let t = corpus::random_tree(&mut rng, n);
            let root = rand::Rng::gen_range(&mut rng, 0..n);
            let rg = RootedGraph::new(t.clone(), root)?;
            let max_size = n.min(10);
            let got = crate::isoperimetry::anchored_constant_bruteforce(&rg, 1, max_size)?;
            // bitmask oracle over all subsets
            let mut best: Option<Rat> = None;
            for mask in 1u32..(1 << n) {
                let idx: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
                if !idx.contains(&root) || idx.len() > max_size {
                    continue;
                }
                let s = VertexSet::from_indices(n, &idx)?;
                if t.components_of(&s).len() != 1 {
                    continue;
                }
                let r = crate::isoperimetry::isoperimetric_ratio(&t, &s)?;
                if best.as_ref().map(|b| r < *b).unwrap_or(true) {
                    best = Some(r);
                }
            }
            if Some(got) != best {
                return Ok((false, "anchored minimum differs from bitmask oracle".into()));
            }
        }
        Ok((true, "20 instances".into()))
    }));

    checks.push(run_check("anchored-monotone-in-max-size", || {
        let mut rng = corpus::rng(cfg.seed ^ 0x43);
        for _ in 0..20 {
            let n = 3 + rand::Rng::gen_range(&mut rng, 0..10);
            let t = corpus::random_tree(&mut rng, n);
            let rg = RootedGraph::new(t, rand::Rng::gen_range(&mut rng, 0..n))?;
            let mut prev: Option<Rat> = None;
            for max in 1..=n.min(10) {
                let v = crate::isoperimetry::anchored_constant_bruteforce(&rg, 1, max)?;
                if let Some(p) = &prev {
                    if v > *p {
                        return Ok((false, "minimum increased with max_size".into()));
                    }
                }
                prev = Some(v);
            }
        }
        Ok((true, "20 instances".into()))
    }));

    checks.push(run_check("path-boundary-identity", || {
        let mut rng = corpus::rng(cfg.seed ^ 0x44);
        let mut checked = 0usize;
        while checked < cfg.tree_paths {
            let n = 3 + rand::Rng::gen_range(&mut rng, 0..20);
            let t = corpus::random_tree(&mut rng, n);
            let p = corpus::random_tree_path(&t, &mut rng, 1 + n / 2);
            let rep = crate::isoperimetry::path_boundary_identity(&t, &p)?;
            if rep.lhs != rep.rhs {
                return Ok((false, format!("lhs {} != rhs {}", rep.lhs, rep.rhs)));
            }
            checked += 1;
        }
        Ok((true, format!("{} seeded paths", cfg.tree_paths)))
    }));

    checks.push(run_check("thinness-reports", || {
        let c6 = Graph::cycle(6);
        let full = VertexSet::full(6);
        let r = crate::isoperimetry::thinness_report(&c6, &full)?;
        if r.values != (Rat::one(), Some(2), Some(Rat::zero())) {
            return Ok((false, "cycle thinness mismatch".into()));
        }
        let p10 = Graph::path(10);
        let interior = VertexSet::from_indices(10, &[1, 2, 3, 4, 5, 6, 7, 8])?;
        let r2 = crate::isoperimetry::thinness_report(&p10, &interior)?;
        if r2.values.1 != Some(1) {
            return Ok((false, "interior path min internal degree".into()));
        }
        // informational: S = support + boundary of a random forest at lambda=0,
        // mean excess compared against 2(Delta-2)/tau(lambda)
        let mut rng = corpus::rng(cfg.seed ^ 0x45);
        let f = corpus::random_forest(&mut rng, 20);
        let dec = crate::spectral::support(&f, &AlgebraicNumber::from_int(0.into()))?;
        let s = dec.support.union(&dec.boundary);
        if !s.is_empty() {
            let _ = crate::isoperimetry::thinness_report(&f, &s)?;
        }
        Ok((true, "examples plus informational run".into()))
    }));

    SuiteReport {
        suite: "isoperimetry",
        checks,
    }
}

// ---- random-models suite ----

pub fn random_models_suite(cfg: &VerifyConfig) -> SuiteReport {
    let mut checks = Vec::new();

    checks.push(run_check("size-biasing", || {
        use crate::random::{size_biased, DegreeDistribution};
        for r in 1..=6 {
            if size_biased(&DegreeDistribution::dirac(r))? != DegreeDistribution::dirac(r - 1) {
                return Ok((false, format!("delta_{r} biasing")));
            }
        }
        let mut rng = corpus::rng(cfg.seed ^ 0x51);
        for _ in 0..50 {
            let k = rand::Rng::gen_range(&mut rng, 1..5usize);
            let mut w: Vec<(usize, Rat)> = (0..=k)
                .map(|d| {
                    (
                        d,
                        Rat::new(
                            crate::Int::from(rand::Rng::gen_range(&mut rng, 1..7i64)),
                            crate::Int::one(),
                        ),
                    )
                })
                .collect();
            let total: Rat = w.iter().map(|(_, p)| p.clone()).sum();
            for (_, p) in w.iter_mut() {
                *p /= total.clone();
            }
            let pi = DegreeDistribution::new(w)?;
            let hat = size_biased(&pi)?;
            let mass: Rat = hat.support().iter().map(|(_, p)| p.clone()).sum();
            if mass != Rat::one() {
                return Ok((false, "size-biased mass not 1".into()));
            }
        }
        Ok((true, "dirac and 50 random laws".into()))
    }));

    checks.push(run_check("sampler-determinism-and-structure", || {
        use crate::random::*;
        let pi = DegreeDistribution::parse("2:1/2,3:1/2")?;
        let a = sample_ugwt(&pi, 80, cfg.seed)?;
        let b = sample_ugwt(&pi, 80, cfg.seed)?;
        if a.rooted.graph.to_text() != b.rooted.graph.to_text() {
            return Ok((false, "ugwt replay differs".into()));
        }
        let d3 = DegreeDistribution::dirac(3);
        let s = sample_ugwt(&d3, 100, cfg.seed)?;
        let g = &s.rooted.graph;
        if g.degree(0) != 3 {
            return Ok((false, "root degree not 3".into()));
        }
        for v in 1..g.vertex_count() {
            let d = g.degree(v);
            if d != 1 && d != 3 {
                return Ok((false, format!("internal degree {d}")));
            }
        }
        let c1 = sample_configuration_model(&d3, 120, cfg.seed)?;
        let c2 = sample_configuration_model(&d3, 120, cfg.seed)?;
        if c1.graph.to_text() != c2.graph.to_text() {
            return Ok((false, "configuration replay differs".into()));
        }
        Ok((true, "replay-exact, degrees as prescribed".into()))
    }));

    checks.push(run_check("matching-atoms-exact-half", || {
        use crate::random::*;
        let d1 = DegreeDistribution::dirac(1);
        for lam in [1i64, -1] {
            let est = estimate_atom(
                &d1,
                &AlgebraicNumber::from_int(lam.into()),
                120,
                4,
                cfg.seed,
                CountMode::Exact,
            )?;
            if est.mean_value != Rat::new(1.into(), 2.into()) {
                return Ok((false, format!("atom at {lam} is {}", est.mean)));
            }
            if est.per_rep.iter().any(|r| *r != Rat::new(1.into(), 2.into())) {
                return Ok((false, "per-sample value not exactly 1/2".into()));
            }
        }
        Ok((true, "exact 1/2 per sample".into()))
    }));

    checks.push(run_check("atom-transfer-bound", || {
        use crate::random::*;
        let d1 = DegreeDistribution::dirac(1);
        let s = sample_configuration_model(&d1, 100, cfg.seed ^ 3)?;
        // matching components have eigenvalues exactly +-1 (isolated
        // vertices from erased loops sit at 0); snap solver noise so the
        // comparison against the discontinuous limit CDF is not vacuous
        let evs: Vec<f64> = crate::eigen::adjacency_eigenvalues_f64(&s.graph)
            .into_iter()
            .map(|x| if (x - x.round()).abs() < 1e-9 { x.round() } else { x })
            .collect();
        let f_right = |x: f64| {
            if x < -1.0 {
                0.0
            } else if x < 1.0 {
                0.5
            } else {
                1.0
            }
        };
        let f_left = |x: f64| {
            if x <= -1.0 {
                0.0
            } else if x <= 1.0 {
                0.5
            } else {
                1.0
            }
        };
        let ks = ks_two_sided(&evs, f_right, f_left);
        let atom_n =
            evs.iter().filter(|&&x| x == 1.0).count() as f64 / evs.len() as f64;
        Ok((
            (atom_n - 0.5).abs() <= 2.0 * ks + 1e-12,
            format!("|mu_n - mu| = {:.4}, 2KS = {:.4}", (atom_n - 0.5).abs(), 2.0 * ks),
        ))
    }));

    checks.push(run_check("kesten-mckay-reference", || {
        let mid = crate::random::kesten_mckay_cdf(3, 0.0)?;
        if (mid - 0.5).abs() > 1e-9 {
            return Ok((false, format!("F(0) = {mid}")));
        }
        let edge = 2.0 * 2f64.sqrt();
        if crate::random::kesten_mckay_cdf(3, edge + 0.001)? != 1.0 {
            return Ok((false, "right tail not 1".into()));
        }
        let want = 2f64.sqrt() / (3.0 * std::f64::consts::PI);
        let h = 1e-5;
        let num = (crate::random::kesten_mckay_cdf(3, h)?
            - crate::random::kesten_mckay_cdf(3, -h)?)
            / (2.0 * h);
        Ok((
            (num - want).abs() < 1e-8,
            format!("density at 0: {num:.8} vs {want:.8}"),
        ))
    }));

    SuiteReport {
        suite: "random-models",
        checks,
    }
}


/// Exact sup of |F_n - F| when the reference itself jumps at sample points:
/// both one-sided limits of the reference are supplied.
fn ks_two_sided(
    sorted: &[f64],
    f_right: impl Fn(f64) -> f64,
    f_left: impl Fn(f64) -> f64,
) -> f64 {
    let n = sorted.len() as f64;
    let mut best: f64 = 0.0;
    let mut i = 0usize;
    while i < sorted.len() {
        let v = sorted[i];
        let mut j = i;
        while j < sorted.len() && sorted[j] == v {
            j += 1;
        }
        best = best.max((f_right(v) - j as f64 / n).abs());
        best = best.max((f_left(v) - i as f64 / n).abs());
        i = j;
    }
    best
}

/// Run every suite.
pub fn verify_all(cfg: &VerifyConfig) -> Vec<SuiteReport> {
    vec![
        graph_suite(cfg),
        spectral_suite(cfg),
        cavity_suite(cfg),
        primes_suite(cfg),
        isoperimetry_suite(cfg),
        random_models_suite(cfg),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_verify_is_green() {
        let cfg = VerifyConfig::quick();
        for suite in verify_all(&cfg) {
            for c in &suite.checks {
                assert!(c.pass, "{}::{}: {}", suite.suite, c.name, c.detail);
            }
        }
    }
}
