//! Degree distributions, size-biasing, unimodular Galton-Watson and
//! configuration-model samplers, Monte Carlo atom estimation with exact
//! per-sample counting, the Kesten-McKay reference distribution, and
//! Kolmogorov-Smirnov comparison.

use crate::field::{rat_string, AlgebraicNumber};
use crate::graph::{Graph, RootedGraph};
use crate::{Error, Int, Rat, Result};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashSet;

/// Finite-support degree/offspring distribution with exact probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeDistribution {
    support: Vec<(usize, Rat)>,
}

impl DegreeDistribution {
    pub fn new(mut support: Vec<(usize, Rat)>) -> Result<Self> {
        support.retain(|(_, p)| !p.is_zero());
        support.sort_by_key(|&(k, _)| k);
        if support.is_empty() {
            return Err(Error::BadDistribution("empty support".into()));
        }
        for w in support.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::BadDistribution(format!(
                    "duplicate degree {}",
                    w[0].0
                )));
            }
        }
        let mut total = Rat::zero();
        for (_, p) in &support {
            if p.is_negative() {
                return Err(Error::BadDistribution("negative probability".into()));
            }
            total += p;
        }
        if total != Rat::one() {
            return Err(Error::BadDistribution(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(DegreeDistribution { support })
    }

    pub fn dirac(k: usize) -> Self {
        DegreeDistribution {
            support: vec![(k, Rat::one())],
        }
    }

    /// Parse "3:1/2,4:1/2".
    pub fn parse(text: &str) -> Result<Self> {
        let mut support = Vec::new();
        for item in text.split(',') {
            let (k, p) = item
                .split_once(':')
                .ok_or_else(|| Error::BadDistribution(format!("bad item {item:?}")))?;
            let k: usize = k
                .trim()
                .parse()
                .map_err(|_| Error::BadDistribution(format!("bad degree {k:?}")))?;
            let p = crate::field::parse_rat(p)?;
            support.push((k, p));
        }
        DegreeDistribution::new(support)
    }

    pub fn support(&self) -> &[(usize, Rat)] {
        &self.support
    }

    pub fn mean(&self) -> Rat {
        let mut acc = Rat::zero();
        for (k, p) in &self.support {
            acc += crate::rat_int(*k as i64) * p;
        }
        acc
    }

    pub fn max_degree(&self) -> usize {
        self.support.last().map(|&(k, _)| k).unwrap_or(0)
    }

    /// Deterministic exact-threshold sampling from 64 random bits.
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> usize {
        let u: u64 = rng.gen();
        let u = Rat::new(Int::from(u), Int::one() << 64);
        let mut acc = Rat::zero();
        for (k, p) in &self.support {
            acc += p;
            if u < acc {
                return *k;
            }
        }
        self.support.last().unwrap().0
    }
}

/// The size-biased offspring law `pi_hat_k = (k+1) pi_{k+1} / mean(pi)`.
pub fn size_biased(pi: &DegreeDistribution) -> Result<DegreeDistribution> {
    let mean = pi.mean();
    if mean.is_zero() {
        return Err(Error::BadDistribution(
            "size-biasing needs a nonzero mean".into(),
        ));
    }
    let mut support = Vec::new();
    for (k, p) in pi.support() {
        if *k == 0 {
            continue;
        }
        support.push((k - 1, crate::rat_int(*k as i64) * p / &mean));
    }
    DegreeDistribution::new(support)
}

fn derive_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 over a golden-ratio indexed stream
    let mut z = seed ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub struct UgwtSample {
    pub rooted: RootedGraph,
    pub truncated: bool,
}

/// Breadth-first truncation of the unimodular Galton-Watson tree: the root
/// draws from `pi`, every descendant from the size-biased law.
pub fn sample_ugwt(pi: &DegreeDistribution, max_vertices: usize, seed: u64) -> Result<UgwtSample> {
    if max_vertices == 0 {
        return Err(Error::OutOfRange("max_vertices must be >= 1".into()));
    }
    let pihat = size_biased(pi).or_else(|_| {
        // zero-mean law: every tree is a single vertex, the biased law is unused
        Ok::<_, Error>(DegreeDistribution::dirac(0))
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut next = 1usize;
    let mut queue = std::collections::VecDeque::new();
    let mut truncated = false;
    let root_children = pi.sample(&mut rng);
    for _ in 0..root_children {
        if next >= max_vertices {
            truncated = true;
            break;
        }
        edges.push((0, next));
        queue.push_back(next);
        next += 1;
    }
    while let Some(v) = queue.pop_front() {
        let kids = pihat.sample(&mut rng);
        for _ in 0..kids {
            if next >= max_vertices {
                truncated = true;
                break;
            }
            edges.push((v, next));
            queue.push_back(next);
            next += 1;
        }
        if truncated {
            break;
        }
    }
    let graph = Graph::from_edges(next, &edges)?;
    Ok(UgwtSample {
        rooted: RootedGraph::new(graph, 0)?,
        truncated,
    })
}

#[derive(Debug, Clone)]
pub struct ConfigSample {
    pub graph: Graph,
    pub erased_self_loops: usize,
    pub erased_multi_edges: usize,
    pub parity_resamples: usize,
}

/// Configuration model with erasure: i.i.d. degrees (last one resampled to
/// even the total), a uniform perfect matching of half-edges, then self-loops
/// dropped and parallel edges collapsed. Erasure counts are reported.
pub fn sample_configuration_model(
    pi: &DegreeDistribution,
    n: usize,
    seed: u64,
) -> Result<ConfigSample> {
    if n < 2 {
        return Err(Error::OutOfRange(
            "configuration model needs n >= 2".into(),
        ));
    }
    let parities: HashSet<usize> = pi.support().iter().map(|&(k, _)| k % 2).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut degrees: Vec<usize> = (0..n).map(|_| pi.sample(&mut rng)).collect();
    let mut parity_resamples = 0usize;
    if parities.len() == 1 && parities.contains(&1) && n % 2 == 1 {
        return Err(Error::BadDistribution(
            "all-odd degree support with odd n cannot have even total degree".into(),
        ));
    }
    while degrees.iter().sum::<usize>() % 2 == 1 {
        degrees[n - 1] = pi.sample(&mut rng);
        parity_resamples += 1;
        if parity_resamples > 10_000 {
            return Err(Error::BadDistribution(
                "could not even the degree sum".into(),
            ));
        }
    }
    let mut half_edges: Vec<usize> = Vec::with_capacity(degrees.iter().sum());
    for (v, &d) in degrees.iter().enumerate() {
        half_edges.extend(std::iter::repeat(v).take(d));
    }
    half_edges.shuffle(&mut rng);
    let mut seen = HashSet::new();
    let mut edges = Vec::new();
    let mut self_loops = 0usize;
    let mut multi = 0usize;
    for pair in half_edges.chunks_exact(2) {
        let (u, v) = (pair[0], pair[1]);
        if u == v {
            self_loops += 1;
            continue;
        }
        let key = (u.min(v), u.max(v));
        if !seen.insert(key) {
            multi += 1;
            continue;
        }
        edges.push(key);
    }
    Ok(ConfigSample {
        graph: Graph::from_edges(n, &edges)?,
        erased_self_loops: self_loops,
        erased_multi_edges: multi,
        parity_resamples,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMode {
    Exact,
    Float,
}

/// Monte Carlo estimate of the limiting atom mass at `lambda`.
#[derive(Debug, Clone, Serialize)]
pub struct AtomEstimate {
    pub lambda: AlgebraicNumber,
    pub n: usize,
    pub reps: usize,
    pub mode: CountMode,
    /// exact mean of the per-sample relative multiplicities
    pub mean: String,
    pub stderr: f64,
    pub erased_edges_total: usize,
    #[serde(skip)]
    pub mean_value: Rat,
    #[serde(skip)]
    pub per_rep: Vec<Rat>,
}

pub const FLOAT_COUNT_WINDOW: f64 = 1e-7;

/// Relative multiplicity of `lambda` on configuration-model samples of size
/// `n`: exact counting (certified modular nullity for rational locations,
/// exact dense charpoly otherwise) or float counting within `1e-7`.
pub fn estimate_atom(
    pi: &DegreeDistribution,
    lambda: &AlgebraicNumber,
    n: usize,
    reps: usize,
    seed: u64,
    mode: CountMode,
) -> Result<AtomEstimate> {
    if reps == 0 {
        return Err(Error::OutOfRange("need at least one replica".into()));
    }
    let results: Vec<(Rat, usize)> = (0..reps)
        .into_par_iter()
        .map(|i| -> Result<(Rat, usize)> {
            let sample = sample_configuration_model(pi, n, derive_seed(seed, i as u64))?;
            let erased = sample.erased_self_loops + sample.erased_multi_edges;
            let mult = match mode {
                CountMode::Exact => crate::exactrank::exact_multiplicity(
                    &sample.graph,
                    lambda,
                    crate::charpoly::DEFAULT_DENSE_CAP,
                )?,
                CountMode::Float => {
                    let target = lambda.to_f64();
                    crate::eigen::adjacency_eigenvalues_f64(&sample.graph)
                        .iter()
                        .filter(|&&x| (x - target).abs() <= FLOAT_COUNT_WINDOW)
                        .count()
                }
            };
            Ok((
                crate::rat_int(mult as i64) / crate::rat_int(n as i64),
                erased,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let per_rep: Vec<Rat> = results.iter().map(|(r, _)| r.clone()).collect();
    let erased_total: usize = results.iter().map(|(_, e)| e).sum();
    let mut mean = Rat::zero();
    for r in &per_rep {
        mean += r;
    }
    mean /= crate::rat_int(reps as i64);
    let mean_f = mean.to_f64().unwrap_or(f64::NAN);
    let stderr = if reps > 1 {
        let mut ss = 0.0f64;
        for r in &per_rep {
            let d = r.to_f64().unwrap_or(f64::NAN) - mean_f;
            ss += d * d;
        }
        (ss / ((reps * (reps - 1)) as f64)).sqrt()
    } else {
        f64::INFINITY
    };
    Ok(AtomEstimate {
        lambda: lambda.clone(),
        n,
        reps,
        mode,
        mean: rat_string(&mean),
        stderr,
        erased_edges_total: erased_total,
        mean_value: mean,
        per_rep,
    })
}

/// Kesten-McKay density at `x` for the r-regular tree.
pub fn kesten_mckay_density(r: usize, x: f64) -> f64 {
    let rf = r as f64;
    let edge2 = 4.0 * (rf - 1.0);
    if x * x >= edge2 {
        return 0.0;
    }
    rf * (edge2 - x * x).sqrt() / (2.0 * std::f64::consts::PI * (rf * rf - x * x))
}

/// CDF of the Kesten-McKay distribution by adaptive quadrature after the
/// trigonometric substitution `x = 2 sqrt(r-1) sin(theta)` (absolute error
/// well below 1e-8).
pub fn kesten_mckay_cdf(r: usize, x: f64) -> Result<f64> {
    if r < 2 {
        return Err(Error::OutOfRange(
            "Kesten-McKay needs degree r >= 2".into(),
        ));
    }
    let rf = r as f64;
    let edge = 2.0 * (rf - 1.0).sqrt();
    if x <= -edge {
        return Ok(0.0);
    }
    if x >= edge {
        return Ok(1.0);
    }
    let theta = (x / edge).asin();
    // integrand after substitution: smooth on [-pi/2, pi/2]
    let f = |t: f64| {
        let s = t.sin();
        let c = t.cos();
        2.0 * rf * (rf - 1.0) * c * c
            / (std::f64::consts::PI * (rf * rf - 4.0 * (rf - 1.0) * s * s))
    };
    let v = adaptive_simpson(&f, -std::f64::consts::FRAC_PI_2, theta, 1e-10, 40);
    Ok(v.clamp(0.0, 1.0))
}

fn simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
}

fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, eps: f64, depth: usize) -> f64 {
    let whole = simpson(f, a, b);
    adaptive_rec(f, a, b, eps, whole, depth)
}

fn adaptive_rec(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    eps: f64,
    whole: f64,
    depth: usize,
) -> f64 {
    let m = 0.5 * (a + b);
    let left = simpson(f, a, m);
    let right = simpson(f, m, b);
    if depth == 0 || (left + right - whole).abs() <= 15.0 * eps {
        left + right + (left + right - whole) / 15.0
    } else {
        adaptive_rec(f, a, m, eps / 2.0, left, depth - 1)
            + adaptive_rec(f, m, b, eps / 2.0, right, depth - 1)
    }
}

/// Exact sup over jump points of |F_n - F| for a sorted sample against a
/// reference CDF. The reference is assumed continuous at the sample points
/// (true for Kesten-McKay); a reference that jumps exactly at sample atoms
/// needs both one-sided limits instead.
pub fn ks_distance(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    if sorted.is_empty() {
        return Err(Error::EmptyInput("KS distance of an empty sample".into()));
    }
    debug_assert!(sorted.windows(2).all(|w| w[0] <= w[1]));
    let n = sorted.len() as f64;
    let mut best: f64 = 0.0;
    let mut i = 0usize;
    while i < sorted.len() {
        let v = sorted[i];
        let mut j = i;
        while j < sorted.len() && sorted[j] == v {
            j += 1;
        }
        let fv = cdf(v);
        best = best.max((fv - i as f64 / n).abs());
        best = best.max((fv - j as f64 / n).abs());
        i = j;
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat_int;

    fn half() -> Rat {
        rat_int(1) / rat_int(2)
    }

    #[test]
    fn size_biasing_examples() {
        // delta_3 -> delta_2
        let d3 = DegreeDistribution::dirac(3);
        assert_eq!(size_biased(&d3).unwrap(), DegreeDistribution::dirac(2));
        // (1/2) delta_2 + (1/2) delta_4 -> (1/3) delta_1 + (2/3) delta_3
        let pi = DegreeDistribution::new(vec![(2, half()), (4, half())]).unwrap();
        let hat = size_biased(&pi).unwrap();
        assert_eq!(
            hat.support(),
            &[
                (1, rat_int(1) / rat_int(3)),
                (3, rat_int(2) / rat_int(3))
            ]
        );
        // total mass preserved exactly
        let total: Rat = hat.support().iter().map(|(_, p)| p.clone()).sum();
        assert_eq!(total, Rat::one());
    }

    #[test]
    fn truncated_poisson_biasing_matches_hand_computation() {
        // pi proportional to (4, 4, 1) on degrees 0,1,2
        let pi = DegreeDistribution::new(vec![
            (0, rat_int(4) / rat_int(9)),
            (1, rat_int(4) / rat_int(9)),
            (2, rat_int(1) / rat_int(9)),
        ])
        .unwrap();
        let hat = size_biased(&pi).unwrap();
        // mean = 6/9; pihat_0 = (1*4/9)/(6/9) = 2/3, pihat_1 = (2*1/9)/(6/9) = 1/3
        assert_eq!(
            hat.support(),
            &[
                (0, rat_int(2) / rat_int(3)),
                (1, rat_int(1) / rat_int(3))
            ]
        );
    }

    #[test]
    fn parse_distribution() {
        let pi = DegreeDistribution::parse("3:1/2,4:1/2").unwrap();
        assert_eq!(pi.support().len(), 2);
        assert!(DegreeDistribution::parse("3:1/2,4:1/3").is_err());
        assert!(DegreeDistribution::parse("3:").is_err());
    }

    #[test]
    fn ugwt_of_dirac3_is_three_regular() {
        let s = sample_ugwt(&DegreeDistribution::dirac(3), 100, 7).unwrap();
        assert!(s.truncated);
        let g = &s.rooted.graph;
        assert!(g.is_tree());
        assert_eq!(g.degree(0), 3);
        // internal vertices (those whose children all fit) have degree 3
        let n = g.vertex_count();
        let internal_degrees: Vec<usize> =
            (1..n).map(|v| g.degree(v)).filter(|&d| d > 1).collect();
        assert!(internal_degrees.iter().all(|&d| d == 3));
    }

    #[test]
    fn ugwt_of_dirac0_is_k1() {
        let s = sample_ugwt(&DegreeDistribution::dirac(0), 10, 3).unwrap();
        assert_eq!(s.rooted.graph.vertex_count(), 1);
        assert!(!s.truncated);
    }

    #[test]
    fn ugwt_replay_is_deterministic() {
        let pi = DegreeDistribution::new(vec![(2, half()), (3, half())]).unwrap();
        let a = sample_ugwt(&pi, 64, 99).unwrap();
        let b = sample_ugwt(&pi, 64, 99).unwrap();
        assert_eq!(a.rooted.graph.to_text(), b.rooted.graph.to_text());
        let c = sample_ugwt(&pi, 64, 100).unwrap();
        // overwhelmingly likely to differ
        assert_ne!(a.rooted.graph.to_text(), c.rooted.graph.to_text());
    }

    #[test]
    fn config_model_structure_and_determinism() {
        let d2 = DegreeDistribution::dirac(2);
        let s = sample_configuration_model(&d2, 60, 5).unwrap();
        assert!(s.graph.vertices().all(|v| s.graph.degree(v) <= 2));
        let d3 = DegreeDistribution::dirac(3);
        let a = sample_configuration_model(&d3, 200, 11).unwrap();
        let b = sample_configuration_model(&d3, 200, 11).unwrap();
        assert_eq!(a.graph.to_text(), b.graph.to_text());
        // erasure is O(1): most vertices keep degree 3
        let deg3 = a.graph.vertices().filter(|&v| a.graph.degree(v) == 3).count();
        assert!(deg3 as f64 >= 0.98 * 200.0);
        // odd support with odd n cannot be evened
        assert!(sample_configuration_model(&d3, 201, 1).is_err());
    }

    #[test]
    fn perfect_matchings_give_half_at_plus_minus_one() {
        let d1 = DegreeDistribution::dirac(1);
        let one = AlgebraicNumber::from_int(Int::one());
        let est = estimate_atom(&d1, &one, 200, 4, 17, CountMode::Exact).unwrap();
        // every component is an edge: exactly n/2 eigenvalues +1
        assert_eq!(est.mean_value, half());
        assert_eq!(est.erased_edges_total, 0, "matchings need no erasure");
        let minus = AlgebraicNumber::from_int(Int::from(-1));
        let est2 = estimate_atom(&d1, &minus, 200, 4, 17, CountMode::Exact).unwrap();
        assert_eq!(est2.mean_value, half());
    }

    #[test]
    fn three_regular_graphs_have_no_atom_at_zero() {
        // Kesten-McKay is absolutely continuous; the finite exact counts
        // already sit at (or near) zero
        let d3 = DegreeDistribution::dirac(3);
        let zero = AlgebraicNumber::from_int(Int::zero());
        let est = estimate_atom(&d3, &zero, 200, 20, 31, CountMode::Exact).unwrap();
        let mean = est.mean_value.to_f64().unwrap();
        assert!(mean <= 0.02, "mean relative multiplicity {mean}");
    }

    #[test]
    fn float_and_exact_counting_agree_on_matchings() {
        let d1 = DegreeDistribution::dirac(1);
        let one = AlgebraicNumber::from_int(Int::one());
        let e = estimate_atom(&d1, &one, 100, 3, 23, CountMode::Exact).unwrap();
        let f = estimate_atom(&d1, &one, 100, 3, 23, CountMode::Float).unwrap();
        assert_eq!(e.mean_value, f.mean_value);
    }

    #[test]
    fn kesten_mckay_cdf_values() {
        assert!((kesten_mckay_cdf(3, 0.0).unwrap() - 0.5).abs() < 1e-9);
        assert_eq!(kesten_mckay_cdf(3, 3.0).unwrap(), 1.0);
        assert_eq!(kesten_mckay_cdf(3, -3.0).unwrap(), 0.0);
        assert!(kesten_mckay_cdf(1, 0.0).is_err());
        // density at 0 for r=3 is sqrt(2)/(3 pi)
        let want = 2f64.sqrt() / (3.0 * std::f64::consts::PI);
        assert!((kesten_mckay_density(3, 0.0) - want).abs() < 1e-12);
        // quadrature derivative check: (F(h) - F(-h)) / 2h ~ density(0)
        let h = 1e-5;
        let num = (kesten_mckay_cdf(3, h).unwrap() - kesten_mckay_cdf(3, -h).unwrap()) / (2.0 * h);
        assert!((num - want).abs() < 1e-8);
    }

    #[test]
    fn ks_distance_basics() {
        // sample at its own quantiles: distance <= 1/n
        let n = 50;
        let sample: Vec<f64> = (1..=n).map(|i| (i as f64 - 0.5) / n as f64).collect();
        let d = ks_distance(&sample, |x| x.clamp(0.0, 1.0)).unwrap();
        assert!(d <= 1.0 / n as f64 + 1e-12);
        // single K2 against Kesten-McKay r=3: at least 0.25
        let k2 = vec![-1.0, 1.0];
        let d2 = ks_distance(&k2, |x| kesten_mckay_cdf(3, x).unwrap()).unwrap();
        assert!(d2 >= 0.25);
        assert!(ks_distance(&[], |_| 0.0).is_err());
    }

    #[test]
    fn atom_transfer_bound_on_matchings() {
        // |mu_n({1}) - mu({1})| <= 2 KS(F_n, F) where mu = half delta_-1 + half delta_1
        let d1 = DegreeDistribution::dirac(1);
        let s = sample_configuration_model(&d1, 100, 3).unwrap();
        let evs: Vec<f64> = crate::eigen::adjacency_eigenvalues_f64(&s.graph)
            .into_iter()
            .map(|x| if (x - x.round()).abs() < 1e-9 { x.round() } else { x })
            .collect();
        // two-sided sup since the reference jumps exactly at the sample
        // atoms: compare right values and left limits separately
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
        let n = evs.len() as f64;
        let mut ks: f64 = 0.0;
        let mut i = 0usize;
        while i < evs.len() {
            let v = evs[i];
            let mut j = i;
            while j < evs.len() && evs[j] == v {
                j += 1;
            }
            ks = ks.max((f_right(v) - j as f64 / n).abs());
            ks = ks.max((f_left(v) - i as f64 / n).abs());
            i = j;
        }
        let atom_n = evs.iter().filter(|&&x| x == 1.0).count() as f64 / evs.len() as f64;
        assert!((atom_n - 0.5).abs() <= 2.0 * ks + 1e-12);
        assert!(ks < 0.2, "matching spectrum should be near the limit, KS = {ks}");
    }
}
