//! Minimal witness trees per eigenvalue: tree-complexity tau, the lambda-prime
//! tree listing, and the pure-point support bound sets derived from degree or
//! isoperimetric control.

use crate::charpoly::CharpolyCache;
use crate::field::AlgebraicNumber;
use crate::graph::{enumerate_free_trees_capped, CanonicalTreeCode, Graph};
use crate::spectral::is_lambda_prime;
use crate::{Error, IntPoly, Rat, Result};
use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::Serialize;
use std::collections::HashMap;

/// One minimal polynomial's record: its real roots (tree eigenvalues), the
/// size of the first tree that exhibits them, and that witness tree.
#[derive(Debug, Clone)]
pub struct IndexEntry {
    pub minpoly: IntPoly,
    pub roots: Vec<AlgebraicNumber>,
    pub tau: usize,
    pub witness: CanonicalTreeCode,
}

impl Serialize for IndexEntry {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("IndexEntry", 4)?;
        let coeffs: Vec<String> = (0..=self.minpoly.degree_or_zero())
            .map(|i| self.minpoly.coeff(i).to_string())
            .collect();
        st.serialize_field("minpoly", &coeffs)?;
        let roots: Vec<[String; 2]> = self
            .roots
            .iter()
            .map(|r| {
                let (lo, hi) = r.interval();
                [
                    crate::field::rat_string(&lo),
                    crate::field::rat_string(&hi),
                ]
            })
            .collect();
        st.serialize_field("roots", &roots)?;
        st.serialize_field("tau", &self.tau)?;
        st.serialize_field("witness", &self.witness.to_hex())?;
        st.end()
    }
}

/// Tree-complexity index over all free trees up to `max_n` vertices.
#[derive(Debug, Clone, Serialize)]
pub struct PrimeTreeIndex {
    pub max_n: usize,
    entries: Vec<IndexEntry>,
    #[serde(skip)]
    by_minpoly: HashMap<IntPoly, usize>,
}

/// Outcome of a tau query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tau {
    Found(usize),
    /// Not an eigenvalue of any tree with at most this many vertices
    /// (certified by exhaustive enumeration).
    NotFound { searched_up_to: usize },
}

impl PrimeTreeIndex {
    pub fn entries(&self) -> &[IndexEntry] {
        &self.entries
    }

    /// All indexed algebraic numbers with their taus and witnesses, ordered
    /// by (tau, numeric value).
    pub fn flattened(&self) -> Vec<(AlgebraicNumber, usize, CanonicalTreeCode)> {
        let mut out = Vec::new();
        for e in &self.entries {
            for r in &e.roots {
                out.push((r.clone(), e.tau, e.witness.clone()));
            }
        }
        out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp_real(&b.0)));
        out
    }

    pub fn tau(&self, lambda: &AlgebraicNumber) -> Tau {
        if let Some(&i) = self.by_minpoly.get(lambda.minpoly()) {
            let e = &self.entries[i];
            if e.roots.iter().any(|r| r == lambda) {
                return Tau::Found(e.tau);
            }
        }
        Tau::NotFound {
            searched_up_to: self.max_n,
        }
    }

    /// `{lambda : tau(lambda) < bound}`, strict inequality applied literally.
    /// The index must be deep enough to certify the listing complete.
    pub fn bound_set(&self, bound: &Rat) -> Result<Vec<AlgebraicNumber>> {
        // largest integer tau with tau < bound
        if !bound.is_positive() {
            return Ok(Vec::new());
        }
        let needed = if bound.denom().is_one() {
            (bound.numer() - crate::Int::one()).max(crate::Int::from(0))
        } else {
            bound.floor().numer().clone()
        };
        let needed: usize = needed
            .try_into()
            .map_err(|_| Error::OutOfRange("bound too large".into()))?;
        if needed > self.max_n {
            return Err(Error::IndexTooShallow {
                max_n: self.max_n,
                needed,
            });
        }
        let mut out: Vec<AlgebraicNumber> = Vec::new();
        for e in &self.entries {
            if crate::rat_int(e.tau as i64) < *bound {
                out.extend(e.roots.iter().cloned());
            }
        }
        out.sort_by(|a, b| a.cmp_real(b));
        Ok(out)
    }
}

/// Enumerate trees of each size ascending and record, for every irreducible
/// factor of a characteristic polynomial, the first witness. Within one size
/// the canonical-code order breaks ties deterministically.
pub fn build_index(max_n: usize) -> Result<PrimeTreeIndex> {
    build_index_capped(max_n, crate::graph::DEFAULT_ENUM_CAP)
}

pub fn build_index_capped(max_n: usize, cap: usize) -> Result<PrimeTreeIndex> {
    if max_n < 1 || max_n > cap {
        return Err(Error::CapExceeded {
            what: "prime-tree index depth",
            cap,
            got: max_n,
        });
    }
    let cache = CharpolyCache::new();
    let mut entries: Vec<IndexEntry> = Vec::new();
    let mut by_minpoly: HashMap<IntPoly, usize> = HashMap::new();
    for n in 1..=max_n {
        let mut trees: Vec<(CanonicalTreeCode, Graph)> = enumerate_free_trees_capped(n, cap)?
            .map(|t| (t.canonical_code(), t))
            .collect();
        trees.sort_by(|a, b| a.0.cmp(&b.0));
        let factored: Vec<(CanonicalTreeCode, Vec<IntPoly>)> = trees
            .par_iter()
            .map(|(code, t)| {
                let chi = cache.charpoly_tree(t)?;
                let fac = crate::factor::factor_over_z_capped(&chi, n.max(4))?;
                Ok((
                    code.clone(),
                    fac.factors.into_iter().map(|(m, _)| m).collect(),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        for (code, minpolys) in factored {
            for m in minpolys {
                if by_minpoly.contains_key(&m) {
                    continue;
                }
                let roots = AlgebraicNumber::roots_of_irreducible(&m);
                by_minpoly.insert(m.clone(), entries.len());
                entries.push(IndexEntry {
                    minpoly: m,
                    roots,
                    tau: n,
                    witness: code.clone(),
                });
            }
        }
    }
    Ok(PrimeTreeIndex {
        max_n,
        entries,
        by_minpoly,
    })
}

/// `{lambda : tau(lambda) < (Delta-2)/(delta-2)}` per the degree-window bound.
pub fn support_bound_set(
    delta: usize,
    big_delta: usize,
    index: &PrimeTreeIndex,
) -> Result<Vec<AlgebraicNumber>> {
    if delta < 3 || big_delta < delta {
        return Err(Error::OutOfRange(
            "need 3 <= delta <= Delta for the degree-window bound".into(),
        ));
    }
    let bound = Rat::new(
        crate::Int::from(big_delta as i64 - 2),
        crate::Int::from(delta as i64 - 2),
    );
    index.bound_set(&bound)
}

/// `{lambda : tau(lambda) < 3 Delta^2 / i_star}` (anchored variant), or
/// `{lambda : tau(lambda) < Delta / i}` when `plain` is set.
pub fn anchored_bound_set(
    big_delta: usize,
    iso: &Rat,
    plain: bool,
    index: &PrimeTreeIndex,
) -> Result<Vec<AlgebraicNumber>> {
    if !iso.is_positive() {
        return Err(Error::OutOfRange(
            "isoperimetric constant must be positive".into(),
        ));
    }
    let bound = if plain {
        crate::rat_int(big_delta as i64) / iso.clone()
    } else {
        crate::rat_int(3 * (big_delta * big_delta) as i64) / iso.clone()
    };
    index.bound_set(&bound)
}

/// All lambda-prime trees with at most `max_n` vertices, by (size, code).
pub fn enumerate_lambda_prime(
    max_n: usize,
    lambda: &AlgebraicNumber,
) -> Result<Vec<CanonicalTreeCode>> {
    if max_n < 1 || max_n > crate::graph::DEFAULT_ENUM_CAP {
        return Err(Error::CapExceeded {
            what: "lambda-prime enumeration depth",
            cap: crate::graph::DEFAULT_ENUM_CAP,
            got: max_n,
        });
    }
    let mut out = Vec::new();
    for n in 1..=max_n {
        let trees: Vec<Graph> = enumerate_free_trees_capped(n, max_n)?.collect();
        let mut hits: Vec<CanonicalTreeCode> = trees
            .par_iter()
            .map(|t| {
                Ok(if is_lambda_prime(t, lambda)? {
                    Some(t.canonical_code())
                } else {
                    None
                })
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        hits.sort();
        out.extend(hits);
    }
    Ok(out)
}
