//! The local statistics (alpha, beta, gamma) of a measure at a spectral
//! location, the hat-transform acting on them, cavity passes on finite rooted
//! trees, and the reciprocity relations they satisfy on the lambda-support.
//!
//! At a location lambda, a finite measure mu carries
//! `alpha = mu({lambda})`, `beta = int (xi-lambda)^{-2} dmu`,
//! `gamma = int (xi-lambda)^{-1} dmu`. Beta diverges exactly when gamma is
//! undefined, and an atom at lambda forces divergence, so the legal states
//! form a two-armed type: divergent (alpha recorded, beta infinite, gamma
//! undefined) or finite (alpha zero, beta and gamma exact elements of
//! Q(lambda)).

use crate::field::{sum_over_roots, AlgebraicNumber, FieldElement, FieldPoly};
use crate::graph::Graph;
use crate::poly::Polynomial;
use crate::spectral::{spectral_measure_from_charpolys, AtomGroup, SpectralMeasure, SupportDecomposition};
use crate::{Error, RatPoly, Result};
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::sync::Arc;

/// Local statistics of a measure at a fixed lambda. `Divergent` covers the
/// rows "alpha > 0" and "beta = infinity"; `Finite` carries exact beta and
/// gamma (and alpha = 0, since an atom at lambda would make beta diverge).
#[derive(Debug, Clone, PartialEq)]
pub enum CavityTriple {
    Divergent { alpha: FieldElement },
    Finite { beta: FieldElement, gamma: FieldElement },
}

impl CavityTriple {
    /// Triple of the zero measure.
    pub fn zero_measure() -> Self {
        CavityTriple::Finite {
            beta: FieldElement::zero(),
            gamma: FieldElement::zero(),
        }
    }

    pub fn alpha(&self) -> FieldElement {
        match self {
            CavityTriple::Divergent { alpha } => alpha.clone(),
            CavityTriple::Finite { .. } => FieldElement::zero(),
        }
    }

    pub fn beta_finite(&self) -> Option<&FieldElement> {
        match self {
            CavityTriple::Divergent { .. } => None,
            CavityTriple::Finite { beta, .. } => Some(beta),
        }
    }

    /// Gamma, or an error: reading an undefined gamma is a caller bug.
    pub fn gamma(&self) -> Result<&FieldElement> {
        match self {
            CavityTriple::Divergent { .. } => Err(Error::UndefinedGamma),
            CavityTriple::Finite { gamma, .. } => Ok(gamma),
        }
    }

    pub fn has_atom(&self) -> bool {
        !self.alpha().is_zero()
    }

    /// Measure-sum of triples: alphas add, betas add with divergence
    /// absorbing, gammas add where defined.
    pub fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (
                CavityTriple::Finite { beta: b1, gamma: g1 },
                CavityTriple::Finite { beta: b2, gamma: g2 },
            ) => CavityTriple::Finite {
                beta: b1.add_ref(b2),
                gamma: g1.add_ref(g2),
            },
            _ => CavityTriple::Divergent {
                alpha: self.alpha().add_ref(&other.alpha()),
            },
        }
    }

    /// Short display for reports.
    pub fn describe(&self) -> String {
        match self {
            CavityTriple::Divergent { alpha } => {
                format!("(alpha={:?}, beta=inf, gamma=undef)", alpha.coeff_strings())
            }
            CavityTriple::Finite { beta, gamma } => format!(
                "(alpha=0, beta={:?}, gamma={:?})",
                beta.coeff_strings(),
                gamma.coeff_strings()
            ),
        }
    }
}

/// The hat-transform at the triple level: the four rows of the table.
pub fn hat_transform(t: &CavityTriple, lambda: &AlgebraicNumber) -> CavityTriple {
    let lam = lambda.as_field_element();
    match t {
        CavityTriple::Divergent { alpha } => {
            if alpha.is_zero() {
                // beta = inf, alpha = 0
                CavityTriple::Divergent {
                    alpha: FieldElement::zero(),
                }
            } else {
                CavityTriple::Finite {
                    beta: alpha.inv().expect("alpha nonzero"),
                    gamma: FieldElement::zero(),
                }
            }
        }
        CavityTriple::Finite { beta, gamma } => {
            let lam_plus_gamma = lam.add_ref(gamma);
            if lam_plus_gamma.is_zero() {
                // gamma = -lambda
                let alpha = FieldElement::one()
                    .add_ref(beta)
                    .inv()
                    .expect("1 + beta positive");
                CavityTriple::Divergent { alpha }
            } else {
                let inv = lam_plus_gamma.inv().expect("nonzero");
                let beta_hat = FieldElement::one()
                    .add_ref(beta)
                    .mul_ref(&inv)
                    .mul_ref(&inv);
                CavityTriple::Finite {
                    beta: beta_hat,
                    gamma: inv.neg_ref(),
                }
            }
        }
    }
}

/// Exact local statistics of a finite atomic measure at lambda.
///
/// Sums over atoms in foreign number fields are traces in the etale algebra
/// `Q(lambda)[y]/(minpoly)`, so the result is exact whatever fields the atoms
/// live in.
pub fn local_triple(m: &SpectralMeasure, lambda: &AlgebraicNumber) -> Result<CavityTriple> {
    let alpha = m.mass_at(lambda);
    if !alpha.is_zero() {
        return Ok(CavityTriple::Divergent { alpha });
    }
    let lam = lambda.as_field_element();
    let y_minus_lambda: FieldPoly =
        Polynomial::from_coeffs(vec![lam.neg_ref(), FieldElement::one()]);
    let square = y_minus_lambda.mul(&y_minus_lambda);
    let mut beta = FieldElement::zero();
    let mut gamma = FieldElement::zero();
    for g in m.groups() {
        // alpha = 0 rules out lambda's own minimal polynomial among groups
        debug_assert!(g.minpoly != *lambda.minpoly());
        let f: FieldPoly = g
            .minpoly
            .to_rat()
            .monic()
            .map(|c| FieldElement::from_rat(c.clone()));
        let num: FieldPoly = g
            .mass
            .coeffs()
            .map(|c| FieldElement::from_rat(c.clone()));
        beta = beta.add_ref(&sum_over_roots(&num, &square, &f)?);
        gamma = gamma.add_ref(&sum_over_roots(&num, &y_minus_lambda, &f)?);
    }
    Ok(CavityTriple::Finite { beta, gamma })
}

/// The hat of a measure, constructed exactly at the measure level:
/// `s = P/Q` rational, `shat = -Q / (zQ + P)`, atoms and residues of the
/// denominator read off by factorization.
pub fn hat_measure(m: &SpectralMeasure) -> Result<SpectralMeasure> {
    let (p, q) = stieltjes_rational(m);
    // D = z Q + P
    let d: RatPoly = RatPoly::var().mul(&q).add(&p);
    let (d_int, _) = d.clear_denominators();
    let d_int = d_int.primitive_part();
    let cap = d_int.degree_or_zero().max(crate::factor::DEFAULT_FACTOR_CAP);
    let fac = crate::factor::factor_over_z_capped(&d_int, cap)?;
    let d_deriv = d.derivative();
    let mut groups = Vec::new();
    for (minpoly, mult) in fac.factors {
        debug_assert_eq!(mult, 1, "hat denominators are squarefree");
        let field = crate::field::NumberField::new(minpoly.clone());
        let q_el = FieldElement::in_field(&field, q.clone());
        let dp_el = FieldElement::in_field(&field, d_deriv.clone());
        let mass = q_el.div_ref(&dp_el)?;
        let roots = AlgebraicNumber::roots_of_irreducible(&minpoly);
        groups.push(AtomGroup {
            minpoly,
            field,
            mass,
            roots,
        });
    }
    let out = SpectralMeasure::from_groups(groups);
    if out.total_mass() != crate::Rat::one() {
        return Err(Error::Internal(
            "hat measure does not have total mass 1".into(),
        ));
    }
    Ok(out)
}

/// Stieltjes transform of an atomic measure as a rational function
/// `(P, Q)` with `s(z) = P(z)/Q(z)`, both with rational coefficients.
///
/// Per atom group the numerator is assembled from traces against the
/// deflation coefficients, which keeps everything in Q even for algebraic
/// atoms.
fn stieltjes_rational(m: &SpectralMeasure) -> (RatPoly, RatPoly) {
    let mut q = RatPoly::one();
    let monics: Vec<RatPoly> = m
        .groups()
        .iter()
        .map(|g| g.minpoly.to_rat().monic())
        .collect();
    for mg in &monics {
        q = q.mul(mg);
    }
    let mut p = RatPoly::zero();
    for (gi, g) in m.groups().iter().enumerate() {
        let ng = lagrange_numerator(g);
        let mut others = RatPoly::one();
        for (hi, mh) in monics.iter().enumerate() {
            if hi != gi {
                others = others.mul(mh);
            }
        }
        p = p.add(&ng.mul(&others));
    }
    // s = sum mass/(xi - z) = -sum_g N_g / m_g
    (p.neg(), q)
}

/// `N(z) = sum over roots rho of mass(rho) * monic(z)/(z - rho)`, a rational
/// polynomial: coefficient j is `sum_{i>j} m_i * trace(mass * z^{i-1-j})`.
fn lagrange_numerator(g: &AtomGroup) -> RatPoly {
    let monic = g.minpoly.to_rat().monic();
    let d = monic.degree_or_zero();
    // traces of mass * z^k for k = 0..d-1
    let z = FieldElement::generator(&g.field);
    let mut traces = Vec::with_capacity(d);
    let mut cur = g.mass.clone();
    for _ in 0..d {
        traces.push(cur.trace());
        cur = cur.mul_ref(&z);
    }
    let mut coeffs = vec![crate::Rat::zero(); d];
    for (j, c) in coeffs.iter_mut().enumerate() {
        for i in j + 1..=d {
            *c += monic.coeff(i) * &traces[i - 1 - j];
        }
    }
    RatPoly::from_coeffs(coeffs)
}

/// Measure-level oracle for the hat-transform: build mu-hat exactly, then
/// take its local triple. The contract is equality with
/// `hat_transform(local_triple(m, lambda), lambda)`.
pub fn hat_transform_oracle(
    m: &SpectralMeasure,
    lambda: &AlgebraicNumber,
) -> Result<CavityTriple> {
    local_triple(&hat_measure(m)?, lambda)
}

/// All directed triples of a finite tree at lambda, plus per-vertex triples.
pub struct CavityField {
    /// `directed[(x, o)]` is the triple of `mu_{(T_{x->o}, x)}` at lambda.
    pub directed: HashMap<(usize, usize), CavityTriple>,
    /// `vertex[o]` is the triple of `mu_{(T, o)}` at lambda.
    pub vertex: Vec<CavityTriple>,
    pub lambda: AlgebraicNumber,
}

impl CavityField {
    pub fn dir(&self, from: usize, to: usize) -> &CavityTriple {
        &self.directed[&(from, to)]
    }

    /// Vertices whose rooted measure has an atom at lambda.
    pub fn support_indices(&self) -> Vec<usize> {
        (0..self.vertex.len())
            .filter(|&v| self.vertex[v].has_atom())
            .collect()
    }
}

/// Run the cavity recursion over every directed edge of a tree, leaves
/// inward and back out, composing triple addition with the hat-transform.
pub fn full_cavity(tree: &Graph, lambda: &AlgebraicNumber) -> Result<CavityField> {
    if !tree.is_tree() {
        return Err(Error::NotATree("cavity passes run on trees".into()));
    }
    let n = tree.vertex_count();
    let root = 0usize;
    // BFS order
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = std::collections::VecDeque::new();
    let mut seen = vec![false; n];
    queue.push_back(root);
    seen[root] = true;
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for w in tree.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    let mut directed: HashMap<(usize, usize), CavityTriple> = HashMap::new();
    // upward: leaves to root
    for &v in order.iter().rev() {
        if v == root {
            continue;
        }
        let p = parent[v];
        let mut sum = CavityTriple::zero_measure();
        for w in tree.neighbors(v) {
            if w != p {
                sum = sum.add(&directed[&(w, v)]);
            }
        }
        directed.insert((v, p), hat_transform(&sum, lambda));
    }
    // downward + vertex triples, with prefix/suffix sums per vertex
    let mut vertex = vec![CavityTriple::zero_measure(); n];
    for &v in order.iter() {
        let nbrs: Vec<usize> = tree.neighbors(v).collect();
        let k = nbrs.len();
        let incoming: Vec<CavityTriple> =
            nbrs.iter().map(|&w| directed[&(w, v)].clone()).collect();
        let mut prefix = vec![CavityTriple::zero_measure(); k + 1];
        for i in 0..k {
            prefix[i + 1] = prefix[i].add(&incoming[i]);
        }
        let mut suffix = vec![CavityTriple::zero_measure(); k + 1];
        for i in (0..k).rev() {
            suffix[i] = incoming[i].add(&suffix[i + 1]);
        }
        vertex[v] = hat_transform(&prefix[k], lambda);
        for (i, &y) in nbrs.iter().enumerate() {
            if y != parent[v] {
                let without_y = prefix[i].add(&suffix[i + 1]);
                directed.insert((v, y), hat_transform(&without_y, lambda));
            }
        }
    }
    Ok(CavityField {
        directed,
        vertex,
        lambda: lambda.clone(),
    })
}

/// Per-rooted-tree view: every directed triple plus the root triple.
pub fn cavity_pass(
    tree: &Graph,
    root: usize,
    lambda: &AlgebraicNumber,
) -> Result<(HashMap<(usize, usize), CavityTriple>, CavityTriple)> {
    let field = full_cavity(tree, lambda)?;
    let root_triple = field.vertex[root].clone();
    Ok((field.directed, root_triple))
}

/// One reciprocity relation's tally.
#[derive(Debug, Clone, serde::Serialize)]
pub struct RelationResult {
    pub name: &'static str,
    pub checked: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl RelationResult {
    fn new(name: &'static str) -> Self {
        RelationResult {
            name,
            checked: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, detail: impl Fn() -> String) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(detail());
            }
        }
    }
}

/// Exact verification of the reciprocity relations at every support vertex.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ReciprocityReport {
    pub relations: Vec<RelationResult>,
}

impl ReciprocityReport {
    pub fn all_pass(&self) -> bool {
        self.relations.iter().all(|r| r.failures == 0)
    }
}

pub fn check_reciprocity(tree: &Graph, lambda: &AlgebraicNumber) -> Result<ReciprocityReport> {
    let field = full_cavity(tree, lambda)?;
    let lam = lambda.as_field_element();
    let one = FieldElement::one();
    let mut eqz = RelationResult::new("eqz");
    let mut eqb = RelationResult::new("eqb");
    let mut eqa = RelationResult::new("eqa");
    let mut deg = RelationResult::new("deg");
    let mut prod = RelationResult::new("prod");
    let mut sum = RelationResult::new("sum");
    let mut prodz = RelationResult::new("prodz");
    let mut sumz = RelationResult::new("sumz");

    let in_support: Vec<bool> = field.vertex.iter().map(|t| t.has_atom()).collect();
    for o in 0..tree.vertex_count() {
        if !in_support[o] {
            continue;
        }
        let alpha_o = field.vertex[o].alpha();
        // (eqz) all incoming betas finite; collect their sum
        let mut beta_sum = FieldElement::zero();
        let mut all_finite = true;
        for x in tree.neighbors(o) {
            match field.dir(x, o).beta_finite() {
                Some(b) => beta_sum = beta_sum.add_ref(b),
                None => all_finite = false,
            }
        }
        eqz.record(all_finite, || format!("vertex {o}: an incoming beta diverges"));
        if !all_finite {
            continue;
        }
        // (eqb) sum of incoming gammas = -lambda
        let mut gamma_sum = FieldElement::zero();
        for x in tree.neighbors(o) {
            gamma_sum = gamma_sum.add_ref(field.dir(x, o).gamma()?);
        }
        eqb.record(gamma_sum == lam.neg_ref(), || {
            format!("vertex {o}: gamma sum {:?}", gamma_sum.coeff_strings())
        });
        // (eqa) alpha_o = 1/(1 + sum beta)
        let expect = one.add_ref(&beta_sum).inv()?;
        eqa.record(alpha_o == expect, || {
            format!("vertex {o}: alpha {:?}", alpha_o.coeff_strings())
        });
        // (deg) sum alpha_o beta_{x->o} = 1 - alpha_o
        let lhs = alpha_o.mul_ref(&beta_sum);
        deg.record(lhs == one.sub_ref(&alpha_o), || {
            format!("vertex {o}: deg lhs {:?}", lhs.coeff_strings())
        });
        for y in tree.neighbors(o) {
            if in_support[y] {
                // (prod) gamma_{y->o} gamma_{o->y} = 1
                let ok = match (field.dir(y, o).gamma(), field.dir(o, y).gamma()) {
                    (Ok(g1), Ok(g2)) => g1.mul_ref(g2) == one,
                    _ => false,
                };
                prod.record(ok, || {
                    format!(
                        "edge ({y},{o}): gamma_in {} gamma_out {}",
                        field.dir(y, o).describe(),
                        field.dir(o, y).describe()
                    )
                });
                // (sum) alpha_o beta_{y->o} = 1 - alpha_y beta_{o->y}
                let ok = match (field.dir(y, o).beta_finite(), field.dir(o, y).beta_finite()) {
                    (Some(b_yo), Some(b_oy)) => {
                        let alpha_y = field.vertex[y].alpha();
                        alpha_o.mul_ref(b_yo) == one.sub_ref(&alpha_y.mul_ref(b_oy))
                    }
                    _ => false,
                };
                sum.record(ok, || {
                    format!(
                        "edge ({y},{o}): triples {} / {}",
                        field.dir(y, o).describe(),
                        field.dir(o, y).describe()
                    )
                });
            } else {
                // (prodz) gamma_{y->o} = 0
                let ok = match field.dir(y, o).gamma() {
                    Ok(g) => g.is_zero(),
                    Err(_) => false,
                };
                prodz.record(ok, || {
                    format!("edge ({y},{o}): {}", field.dir(y, o).describe())
                });
                // (sumz) alpha_o beta_{y->o} = alpha_{o->y} / sum_{x in dy cap S} alpha_{x->y}
                let ok = (|| -> Result<bool> {
                    let b_yo = match field.dir(y, o).beta_finite() {
                        Some(b) => b.clone(),
                        None => return Ok(false),
                    };
                    let mut denom = FieldElement::zero();
                    for x in tree.neighbors(y) {
                        if in_support[x] {
                            denom = denom.add_ref(&field.dir(x, y).alpha());
                        }
                    }
                    if denom.is_zero() {
                        return Ok(false);
                    }
                    let rhs = field.dir(o, y).alpha().div_ref(&denom)?;
                    Ok(alpha_o.mul_ref(&b_yo) == rhs)
                })()?;
                sumz.record(ok, || {
                    format!(
                        "edge ({y},{o}): alpha_o {:?} beta {}",
                        alpha_o.coeff_strings(),
                        field.dir(y, o).describe()
                    )
                });
            }
        }
    }
    Ok(ReciprocityReport {
        relations: vec![eqz, eqb, eqa, deg, prod, sum, prodz, sumz],
    })
}

/// Boundary lemma on a finite tree: every external-boundary vertex of the
/// lambda-support has at least two support neighbors.
pub fn check_boundary_lemma(tree: &Graph, lambda: &AlgebraicNumber) -> Result<bool> {
    if !tree.is_tree() {
        return Err(Error::NotATree("boundary lemma is checked on trees".into()));
    }
    let dec = crate::spectral::support(tree, lambda)?;
    Ok(boundary_lemma_holds(tree, &dec))
}

pub fn boundary_lemma_holds(graph: &Graph, dec: &SupportDecomposition) -> bool {
    dec.boundary
        .iter()
        .all(|x| graph.degree_in(x, &dec.support) >= 2)
}

/// Convenience: the exact spectral measure of a rooted tree via charpolys
/// (used to cross-check cavity root alphas).
pub fn rooted_tree_measure(tree: &Graph, root: usize) -> Result<SpectralMeasure> {
    let chi = crate::charpoly::charpoly_tree(tree)?;
    let (del, _) = tree.delete_vertex(root);
    let chi_del = crate::charpoly::charpoly_forest(&del)?;
    spectral_measure_from_charpolys(&chi, &chi_del)
}

/// Build a measure with the given rational atoms and masses (masses must be
/// positive and sum to one for a probability measure; not enforced here).
pub fn rational_measure(atoms: &[(crate::Rat, crate::Rat)]) -> SpectralMeasure {
    let mut groups = Vec::new();
    for (at, mass) in atoms {
        let lambda = AlgebraicNumber::from_rat(at.clone());
        let field: Arc<crate::field::NumberField> = lambda.number_field().clone();
        groups.push(AtomGroup {
            minpoly: lambda.minpoly().clone(),
            field: field.clone(),
            mass: FieldElement::in_field(&field, RatPoly::constant(mass.clone())),
            roots: vec![lambda],
        });
    }
    SpectralMeasure::from_groups(groups)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat_int;
    use crate::{Int, IntPoly};

    fn alg_int(n: i64) -> AlgebraicNumber {
        AlgebraicNumber::from_int(Int::from(n))
    }

    fn sqrt2() -> AlgebraicNumber {
        AlgebraicNumber::roots_of_irreducible(&IntPoly::from_coeffs(vec![
            Int::from(-2),
            Int::from(0),
            Int::from(1),
        ]))
        .pop()
        .unwrap()
    }

    fn fe(n: i64) -> FieldElement {
        FieldElement::from_int(n)
    }

    #[test]
    fn local_triple_of_dirac() {
        let m = SpectralMeasure::dirac(rat_int(0));
        // at lambda = 0: atom
        let t0 = local_triple(&m, &alg_int(0)).unwrap();
        assert_eq!(t0, CavityTriple::Divergent { alpha: fe(1) });
        // at lambda = 1: beta = 1, gamma = -1
        let t1 = local_triple(&m, &alg_int(1)).unwrap();
        assert_eq!(
            t1,
            CavityTriple::Finite {
                beta: fe(1),
                gamma: fe(-1)
            }
        );
    }

    #[test]
    fn local_triple_of_two_point_measure() {
        let m = rational_measure(&[
            (rat_int(-1), rat_int(1) / rat_int(2)),
            (rat_int(1), rat_int(1) / rat_int(2)),
        ]);
        let t = local_triple(&m, &alg_int(0)).unwrap();
        assert_eq!(
            t,
            CavityTriple::Finite {
                beta: fe(1),
                gamma: fe(0)
            }
        );
    }

    #[test]
    fn local_triple_with_algebraic_atoms_at_foreign_lambda() {
        // measure of (P3, center): atoms 1/2 at +-sqrt2; triple at lambda=1:
        // beta = 1/2 (1/(sqrt2-1)^2 + 1/(sqrt2+1)^2) = 3
        // gamma = 1/2 (1/(sqrt2-1) + 1/(-sqrt2-1)) = 1
        let m = rooted_tree_measure(&Graph::path(3), 1).unwrap();
        let t = local_triple(&m, &alg_int(1)).unwrap();
        assert_eq!(
            t,
            CavityTriple::Finite {
                beta: fe(3),
                gamma: fe(1)
            }
        );
    }

    #[test]
    fn hat_rows() {
        let l0 = alg_int(0);
        // row 1
        let r1 = hat_transform(&CavityTriple::Divergent { alpha: fe(1) }, &l0);
        assert_eq!(
            r1,
            CavityTriple::Finite {
                beta: fe(1),
                gamma: fe(0)
            }
        );
        // row 2: (0, 2, -lambda) with lambda = 0
        let r2 = hat_transform(
            &CavityTriple::Finite {
                beta: fe(2),
                gamma: fe(0),
            },
            &l0,
        );
        assert_eq!(
            r2,
            CavityTriple::Divergent {
                alpha: FieldElement::from_rat(rat_int(1) / rat_int(3))
            }
        );
        // row 3: lambda = 1, (0, 0, 0) -> (0, 1, -1)
        let r3 = hat_transform(&CavityTriple::zero_measure(), &alg_int(1));
        assert_eq!(
            r3,
            CavityTriple::Finite {
                beta: fe(1),
                gamma: fe(-1)
            }
        );
        // row 4
        let r4 = hat_transform(&CavityTriple::Divergent { alpha: fe(0) }, &l0);
        assert_eq!(r4, CavityTriple::Divergent { alpha: fe(0) });
    }

    #[test]
    fn hat_measure_of_dirac_zero() {
        let m = SpectralMeasure::dirac(rat_int(0));
        let h = hat_measure(&m).unwrap();
        // mu-hat = (delta_{-1} + delta_{+1}) / 2
        assert_eq!(h.atom_count(), 2);
        assert_eq!(h.mass_at(&alg_int(1)).as_rat(), Some(rat_int(1) / rat_int(2)));
        assert_eq!(h.mass_at(&alg_int(-1)).as_rat(), Some(rat_int(1) / rat_int(2)));
        let o = hat_transform_oracle(&m, &alg_int(0)).unwrap();
        assert_eq!(
            o,
            hat_transform(&local_triple(&m, &alg_int(0)).unwrap(), &alg_int(0))
        );
    }

    #[test]
    fn hat_measure_of_plus_minus_one() {
        let m = rational_measure(&[
            (rat_int(-1), rat_int(1) / rat_int(2)),
            (rat_int(1), rat_int(1) / rat_int(2)),
        ]);
        let h = hat_measure(&m).unwrap();
        // atoms at 0 and +-sqrt2; mass 1/2 at 0
        assert_eq!(h.atom_count(), 3);
        assert_eq!(h.mass_at(&alg_int(0)).as_rat(), Some(rat_int(1) / rat_int(2)));
        let o = hat_transform_oracle(&m, &alg_int(0)).unwrap();
        assert_eq!(o.alpha().as_rat(), Some(rat_int(1) / rat_int(2)));
    }

    #[test]
    fn cavity_pass_on_p2_at_one() {
        let (directed, root) = cavity_pass(&Graph::path(2), 0, &alg_int(1)).unwrap();
        // leaf triple toward the root is (0, 1, -1)
        assert_eq!(
            directed[&(1, 0)],
            CavityTriple::Finite {
                beta: fe(1),
                gamma: fe(-1)
            }
        );
        // root alpha = 1/2
        assert_eq!(
            root.alpha().as_rat(),
            Some(rat_int(1) / rat_int(2))
        );
    }

    #[test]
    fn cavity_pass_on_k1() {
        let (_, root) = cavity_pass(&Graph::k1(), 0, &alg_int(0)).unwrap();
        assert_eq!(root, CavityTriple::Divergent { alpha: fe(1) });
    }

    #[test]
    fn cavity_root_alpha_matches_measure_on_p3_center() {
        // the regression pinning directed triples to subtree measures
        let tree = Graph::path(3);
        let lambda = alg_int(0);
        let (_, root) = cavity_pass(&tree, 1, &lambda).unwrap();
        assert!(root.alpha().is_zero());
        let m = rooted_tree_measure(&tree, 1).unwrap();
        assert!(m.mass_at(&lambda).is_zero());
        // and at the endpoint the mass is 1/2
        let (_, end) = cavity_pass(&tree, 0, &lambda).unwrap();
        assert_eq!(end.alpha().as_rat(), Some(rat_int(1) / rat_int(2)));
    }

    #[test]
    fn cavity_matches_measures_everywhere_small() {
        for n in 1..=7 {
            for t in crate::graph::enumerate_free_trees(n).unwrap() {
                let ctx = crate::spectral::SpectralContext::new(&t).unwrap();
                let mut lambdas = ctx.eigenvalues().unwrap();
                lambdas.push(alg_int(0));
                lambdas.push(alg_int(1));
                lambdas.push(alg_int(-1));
                for lambda in &lambdas {
                    let field = full_cavity(&t, lambda).unwrap();
                    for o in 0..n {
                        let mass = ctx.atom_mass(o, lambda).unwrap();
                        assert_eq!(
                            field.vertex[o].alpha(),
                            mass,
                            "tree {t:?} root {o} lambda {lambda:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn reciprocity_on_p2_at_one() {
        let rep = check_reciprocity(&Graph::path(2), &alg_int(1)).unwrap();
        assert!(rep.all_pass(), "{rep:?}");
        let prod = rep.relations.iter().find(|r| r.name == "prod").unwrap();
        assert_eq!(prod.checked, 2);
    }

    #[test]
    fn reciprocity_on_star_at_zero() {
        let rep = check_reciprocity(&Graph::star(3), &alg_int(0)).unwrap();
        assert!(rep.all_pass(), "{rep:?}");
        let sumz = rep.relations.iter().find(|r| r.name == "sumz").unwrap();
        assert!(sumz.checked > 0);
    }

    #[test]
    fn boundary_lemma_small() {
        assert!(check_boundary_lemma(&Graph::star(3), &alg_int(0)).unwrap());
        assert!(check_boundary_lemma(&Graph::path(3), &alg_int(0)).unwrap());
        assert!(check_boundary_lemma(&Graph::path(3), &sqrt2()).unwrap());
    }

    #[test]
    fn gamma_read_of_divergent_errors() {
        let t = CavityTriple::Divergent { alpha: fe(1) };
        assert!(t.gamma().is_err());
    }
}
