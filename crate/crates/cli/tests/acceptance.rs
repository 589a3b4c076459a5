//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//! Exact criteria assert exact equality; Monte Carlo criteria assert the
//! pinned tolerances; runtime-limited criteria assert wall-clock bounds.

use rayon::prelude::*;
use spectral_atoms::corpus;
use spectral_atoms::field::AlgebraicNumber;
use spectral_atoms::graph::{enumerate_free_trees_capped, Graph};
use spectral_atoms::random::{estimate_atom, ks_distance, kesten_mckay_cdf, sample_configuration_model, CountMode, DegreeDistribution};
use spectral_atoms::spectral::{atom_formula_check, prime_characterization_check, SpectralContext};
use spectral_atoms::verify::{cavity_suite, VerifyConfig};
use spectral_atoms::Int;
use std::process::Command;
use std::time::Instant;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spectral-atoms"))
}

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "ACCEPTANCE {criterion}: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} failed: {detail}");
}

/// 1. Table-1 reproduction: 11 algebraic integers, taus (1,2,2,3,3,4x6),
///    the expected minimal witness trees, under one second of wall clock.
#[test]
fn criterion_01_table_one() {
    let t0 = Instant::now();
    let out = bin()
        .args(["tau-table", "--max-n", "4"])
        .output()
        .expect("run tau-table");
    let elapsed = t0.elapsed();
    let stdout = String::from_utf8_lossy(&out.stdout);
    let rows: Vec<&str> = stdout.lines().skip(1).collect();

    let index = spectral_atoms::primes::build_index(4).unwrap();
    let flat = index.flattened();
    let taus: Vec<usize> = flat.iter().map(|(_, t, _)| *t).collect();
    let witnesses_ok = {
        let wit = |i: usize| flat[i].2.decode().unwrap().canonical_code();
        wit(0) == Graph::k1().canonical_code()
            && wit(1) == Graph::path(2).canonical_code()
            && wit(2) == Graph::path(2).canonical_code()
            && wit(3) == Graph::path(3).canonical_code()
            && wit(4) == Graph::path(3).canonical_code()
            && flat[5..11].iter().all(|(_, _, w)| {
                let c = w.decode().unwrap().canonical_code();
                c == Graph::star(3).canonical_code() || c == Graph::path(4).canonical_code()
            })
    };
    let pass = out.status.success()
        && rows.len() == 11
        && flat.len() == 11
        && taus == vec![1, 2, 2, 3, 3, 4, 4, 4, 4, 4, 4]
        && witnesses_ok
        && elapsed.as_secs_f64() < 1.0;
    report(
        "1 (Table 1, < 1 s)",
        pass,
        &format!("11 rows, taus {:?}, {:.3} s", taus, elapsed.as_secs_f64()),
    );
}

/// 2. Multiplicity formula, component primality and the boundary lemma on
///    every free tree with n <= 10 at every eigenvalue, exactly, < 5 min.
///    (Eigenvalues are checked per minimal polynomial: supports,
///    multiplicities and decompositions are conjugation-invariant, so one
///    representative per irreducible factor covers all conjugate
///    eigenvalues exactly.)
#[test]
fn criterion_02_multiplicity_formula() {
    let t0 = Instant::now();
    let mut trees = Vec::new();
    for n in 1..=10 {
        trees.extend(enumerate_free_trees_capped(n, 16).unwrap());
    }
    let failures: Vec<String> = trees
        .par_iter()
        .filter_map(|t| {
            let ctx = SpectralContext::new(t).ok()?;
            for lambda in ctx.eigenvalue_classes().ok()? {
                let dec = ctx.support(&lambda).ok()?;
                let c_minus_b = dec.components.len() as i64 - dec.boundary.len() as i64;
                if dec.multiplicity as i64 != c_minus_b {
                    return Some(format!("mult != c-b on {t:?}"));
                }
                if !dec.component_prime_flags.iter().all(|&f| f) {
                    return Some(format!("non-prime component on {t:?}"));
                }
                for x in dec.boundary.iter() {
                    if t.degree_in(x, &dec.support) < 2 {
                        return Some(format!("boundary vertex with < 2 support neighbors on {t:?}"));
                    }
                }
            }
            None
        })
        .collect();
    let elapsed = t0.elapsed();
    let pass = failures.is_empty() && elapsed.as_secs_f64() < 300.0;
    report(
        "2 (multiplicity formula n <= 10, < 5 min)",
        pass,
        &format!(
            "{} trees, {} failures, {:.1} s",
            trees.len(),
            failures.len(),
            elapsed.as_secs_f64()
        ),
    );
}

/// 3. Cavity suite: hat-transform vs the measure-level oracle on 500 seeded
///    measures; the eight reciprocity identities on all trees n <= 9 at all
///    eigenvalue locations; cavity root alpha equals the exact atom mass.
#[test]
fn criterion_03_cavity_suite() {
    let cfg = VerifyConfig::standard();
    let suite = cavity_suite(&cfg);
    let wanted = [
        "hat-transform-vs-measure-oracle",
        "reciprocity-relations-exhaustive",
        "cavity-root-alpha-vs-spectral-mass",
    ];
    let mut all = true;
    let mut details = Vec::new();
    for name in wanted {
        let c = suite
            .checks
            .iter()
            .find(|c| c.name == name)
            .expect("check present");
        all &= c.pass;
        details.push(format!("{}: {}", c.name, if c.pass { "ok" } else { &c.detail }));
    }
    report("3 (cavity suite, exact)", all, &details.join("; "));
}

/// 4. Equivalence of nowhere-vanishing eigenfunctions and lambda-primality
///    on all trees n <= 9, all eigenvalues.
#[test]
fn criterion_04_prime_characterization() {
    let mut trees = Vec::new();
    for n in 1..=9 {
        trees.extend(enumerate_free_trees_capped(n, 16).unwrap());
    }
    let failures: Vec<String> = trees
        .par_iter()
        .filter_map(|t| {
            let ctx = SpectralContext::new(t).ok()?;
            for lambda in ctx.eigenvalue_classes().ok()? {
                match prime_characterization_check(t, &lambda) {
                    Ok(true) => {}
                    _ => return Some(format!("fails on {t:?}")),
                }
            }
            None
        })
        .collect();
    report(
        "4 (prime characterization n <= 9)",
        failures.is_empty(),
        &format!("{} trees, {} failures", trees.len(), failures.len()),
    );
}

/// 5. The three formula routes agree as exact rationals on 200 seeded
///    forests (n <= 30) at every eigenvalue.
#[test]
fn criterion_05_formula_equivalences() {
    let mut rng = corpus::rng(501);
    let mut forests = Vec::new();
    for _ in 0..200 {
        forests.push(corpus::random_forest(&mut rng, 30));
    }
    let failures: Vec<String> = forests
        .par_iter()
        .filter_map(|f| {
            let ctx = SpectralContext::new(f).ok()?;
            for lambda in ctx.eigenvalue_classes().ok()? {
                match atom_formula_check(f, &lambda) {
                    Ok(rep) if rep.all_equal() => {}
                    Ok(rep) => {
                        return Some(format!(
                            "a={} b={} c={}",
                            rep.expected_atom, rep.main_rhs, rep.component_rhs
                        ))
                    }
                    Err(e) => return Some(format!("error: {e}")),
                }
            }
            None
        })
        .collect();
    report(
        "5 (formula equivalences, 200 forests)",
        failures.is_empty(),
        &format!("{} failures", failures.len()),
    );
}

/// 6. Mass Transport Principle: both sides equal for 100 seeded transport
///    functions on 100 seeded graphs, exactly.
#[test]
fn criterion_06_mtp() {
    let mut rng = corpus::rng(601);
    let mut bad = 0usize;
    for i in 0..100 {
        let g = match i % 3 {
            0 => corpus::random_tree(&mut rng, 16),
            1 => corpus::random_forest(&mut rng, 20),
            _ => {
                let pi = DegreeDistribution::parse("2:1/3,3:2/3").unwrap();
                sample_configuration_model(&pi, 16, 600 + i as u64)
                    .unwrap()
                    .graph
            }
        };
        let f = corpus::random_transport_table(&mut rng, g.vertex_count());
        let (lhs, rhs) = g.mtp_check(f);
        if lhs != rhs {
            bad += 1;
        }
    }
    report("6 (MTP, 100 instances)", bad == 0, &format!("{bad} failures"));
}

/// 7. Kesten-McKay: 3-regular configuration graph with n = 2000; one sample
///    within KS 0.05, five samples within 0.07, under two minutes in float
///    eigenvalue mode.
#[test]
fn criterion_07_kesten_mckay() {
    let t0 = Instant::now();
    let pi = DegreeDistribution::dirac(3);
    let cdf = |x: f64| kesten_mckay_cdf(3, x).unwrap();
    let distances: Vec<f64> = (0..5u64)
        .into_par_iter()
        .map(|seed| {
            let sample = sample_configuration_model(&pi, 2000, 700 + seed).unwrap();
            let evs = spectral_atoms::eigen::adjacency_eigenvalues_f64(&sample.graph);
            ks_distance(&evs, cdf).unwrap()
        })
        .collect();
    let elapsed = t0.elapsed();
    let pass = distances[0] <= 0.05
        && distances.iter().all(|&d| d <= 0.07)
        && elapsed.as_secs_f64() < 120.0;
    report(
        "7 (Kesten-McKay KS, < 2 min)",
        pass,
        &format!(
            "first {:.4}, max {:.4}, {:.1} s",
            distances[0],
            distances.iter().cloned().fold(0.0, f64::max),
            elapsed.as_secs_f64()
        ),
    );
}

/// 8. Atom decay under degree bounds: pi uniform on {3,4}, exact relative
///    multiplicity of lambda = 1 at n in {250, 500, 1000} with 32 reps is
///    nonincreasing within two standard errors and at most 0.02 at n = 1000.
#[test]
fn criterion_08_atom_decay() {
    let pi = DegreeDistribution::parse("3:1/2,4:1/2").unwrap();
    let one = AlgebraicNumber::from_int(Int::from(1));
    let estimates: Vec<_> = [250usize, 500, 1000]
        .iter()
        .map(|&n| estimate_atom(&pi, &one, n, 32, 800, CountMode::Exact).unwrap())
        .collect();
    let means: Vec<f64> = estimates
        .iter()
        .map(|e| num_traits::ToPrimitive::to_f64(&e.mean_value).unwrap())
        .collect();
    let mut trend_ok = true;
    for w in estimates.windows(2) {
        let m0 = num_traits::ToPrimitive::to_f64(&w[0].mean_value).unwrap();
        let m1 = num_traits::ToPrimitive::to_f64(&w[1].mean_value).unwrap();
        if m1 > m0 + 2.0 * (w[0].stderr + w[1].stderr) {
            trend_ok = false;
        }
    }
    let final_ok = means[2] <= 0.02;
    report(
        "8 (atom decay, exact counting)",
        trend_ok && final_ok,
        &format!(
            "means {:.5} / {:.5} / {:.5}, stderrs {:.5} / {:.5} / {:.5}",
            means[0], means[1], means[2], estimates[0].stderr, estimates[1].stderr, estimates[2].stderr
        ),
    );
}

/// 9. Tree boundary bound `|dS| >= |S|(delta-2)+2` for delta = 3,
///    exhaustively over all qualifying connected subsets of all trees n <= 9.
#[test]
fn criterion_09_tree_boundary_bound() {
    let mut trees = Vec::new();
    for n in 1..=9 {
        trees.extend(enumerate_free_trees_capped(n, 16).unwrap());
    }
    let violations: usize = trees
        .par_iter()
        .map(|t| {
            if spectral_atoms::isoperimetry::tree_boundary_bound_check(t, 3).unwrap() {
                0
            } else {
                1
            }
        })
        .sum();
    report(
        "9 (boundary bound, exhaustive n <= 9)",
        violations == 0,
        &format!("{} trees, {violations} violations", trees.len()),
    );
}

/// 10. Determinism: seeded commands produce byte-identical output across
///     thread counts 1, 4 and 8.
#[test]
fn criterion_10_determinism() {
    let graph_file = std::env::temp_dir().join("spectral_atoms_accept_k13.txt");
    std::fs::write(&graph_file, "4 3\n0 1\n0 2\n0 3\n").unwrap();
    let graph_arg = graph_file.to_str().unwrap().to_string();
    let commands: Vec<Vec<String>> = vec![
        vec![
            "estimate".into(), "--pi".into(), "3:1/2,4:1/2".into(), "--lambda".into(), "1".into(),
            "--n".into(), "120".into(), "--reps".into(), "6".into(), "--seed".into(), "7".into(),
            "--mode".into(), "exact".into(),
        ],
        vec![
            "estimate".into(), "--pi".into(), "3:1".into(), "--lambda".into(), "0".into(),
            "--n".into(), "150".into(), "--reps".into(), "5".into(), "--seed".into(), "9".into(),
            "--mode".into(), "float".into(),
        ],
        vec!["decompose".into(), "--graph".into(), graph_arg, "--lambda".into(), "0".into()],
        vec!["tau-table".into(), "--max-n".into(), "7".into(), "--format".into(), "json".into()],
    ];
    let mut all = true;
    for cmd in &commands {
        let mut outputs = Vec::new();
        for threads in ["1", "4", "8"] {
            let out = bin()
                .args(cmd)
                .args(["--threads", threads])
                .output()
                .expect("run command");
            assert!(
                out.status.success(),
                "command {:?} failed: {}",
                cmd,
                String::from_utf8_lossy(&out.stderr)
            );
            outputs.push(out.stdout);
        }
        if outputs[0] != outputs[1] || outputs[1] != outputs[2] {
            all = false;
        }
    }
    report(
        "10 (determinism across 1/4/8 threads)",
        all,
        &format!("{} commands compared", commands.len()),
    );
}
