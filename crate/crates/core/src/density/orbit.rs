//! Open orbit of the identity component on ⊕ H₁(X_o, W_u).
//!
//! Factors whose separation triples differ contribute independent copies of
//! their Lie algebras; factors that cannot be told apart share one algebra
//! acting diagonally. The orbit of a vector v is open when the tangent space
//! {X v} has full dimension.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::certificate::{Certificate, Status, Timer};
use crate::curve::BranchConfig;
use crate::exactmath::{CyclotomicReduction, Fp, Matrix, Scalar};
use crate::reps::CharOrbit;

use super::{
    build_factors, factor_closure, lie_closure, reduce_matrix, separation_triple, DensityError, Factor,
    FactorClosure,
};

#[derive(Clone, Debug)]
pub struct OpenOrbitRank {
    pub rank: usize,
    pub expected: usize,
    /// Factor indices acting through one shared algebra.
    pub groups: Vec<Vec<usize>>,
    pub group_ranks: Vec<usize>,
    pub closures_full: bool,
}

/// Groups factors with identical separation data. Trivial factors all land
/// in one group.
fn group_factors(factors: &[Factor]) -> Result<Vec<Vec<usize>>, DensityError> {
    let keys: Vec<Option<Vec<String>>> = factors
        .par_iter()
        .map(|f| {
            if f.orbit.is_trivial() {
                Ok(None)
            } else {
                separation_triple(&f.basis).map(|t| Some(t.traces.iter().map(|x| x.to_string()).collect()))
            }
        })
        .collect::<Result<_, DensityError>>()?;
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut seen: HashMap<Option<Vec<String>>, usize> = HashMap::new();
    for (k, key) in keys.into_iter().enumerate() {
        match seen.get(&key) {
            Some(&g) => groups[g].push(k),
            None => {
                seen.insert(key, groups.len());
                groups.push(vec![k]);
            }
        }
    }
    Ok(groups)
}

fn block_diag(blocks: &[Matrix<Fp>]) -> Matrix<Fp> {
    let mut out = blocks[0].clone();
    for b in &blocks[1..] {
        out = out.direct_sum(b);
    }
    out
}

/// Elements of the algebra shared by a group, as matrices on the
/// concatenated factor spaces.
fn group_algebra(
    factors: &[Factor],
    closures: &[FactorClosure],
    group: &[usize],
    red: &CyclotomicReduction,
) -> Result<Vec<Matrix<Fp>>, DensityError> {
    let first = group[0];
    if group.iter().all(|&k| factors[k].orbit == factors[first].orbit) {
        return Ok(closures[first]
            .algebra
            .elements
            .iter()
            .map(|x| block_diag(&vec![x.clone(); group.len()]))
            .collect());
    }
    let n_gens = factors[first].squares.len();
    let gens = (0..n_gens)
        .map(|g| {
            group
                .iter()
                .map(|&k| reduce_matrix(&factors[k].squares[g].nilpotent(), red))
                .collect::<Result<Vec<_>, _>>()
                .map(|b| block_diag(&b))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let gram = group
        .iter()
        .map(|&k| reduce_matrix(&factors[k].basis.gram, red))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(lie_closure(&gens, &block_diag(&gram), vec![])?.elements)
}

/// Rank of {X v} with X running over ⊕ group algebras.
pub fn open_orbit_rank(
    factors: &[Factor],
    closures: &[FactorClosure],
    vectors: &[Vec<i64>],
) -> Result<OpenOrbitRank, DensityError> {
    let groups = group_factors(factors)?;
    let n = factors[0].orbit.n;
    let red = CyclotomicReduction::new(n, 0);
    let zero = red.one().zero_like();
    let group_ranks = groups
        .par_iter()
        .map(|group| {
            let elements = group_algebra(factors, closures, group, &red)?;
            let v: Vec<Fp> = group
                .iter()
                .flat_map(|&k| vectors[k].iter().map(|&x| Fp::new(x, red.p)))
                .collect();
            let rows: Vec<Vec<Fp>> = elements.iter().map(|x| x.mul_vec(&v)).collect();
            if rows.is_empty() {
                return Ok(0);
            }
            Ok(Matrix::from_rows(rows, &zero).rank())
        })
        .collect::<Result<Vec<usize>, DensityError>>()?;
    Ok(OpenOrbitRank {
        rank: group_ranks.iter().sum(),
        expected: factors.iter().map(|f| f.dim()).sum(),
        groups,
        group_ranks,
        closures_full: closures.iter().all(|c| c.is_full()),
    })
}

/// Closures for each factor, computed once per distinct orbit.
pub fn closures_for(factors: &[Factor]) -> Result<Vec<FactorClosure>, DensityError> {
    let mut distinct: Vec<usize> = Vec::new();
    for (k, f) in factors.iter().enumerate() {
        if !distinct.iter().any(|&d| factors[d].orbit == f.orbit) {
            distinct.push(k);
        }
    }
    let computed = distinct
        .par_iter()
        .map(|&k| factor_closure(&factors[k], 0))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(factors
        .iter()
        .map(|f| {
            let pos = distinct.iter().position(|&d| factors[d].orbit == f.orbit).expect("present");
            computed[pos].clone()
        })
        .collect())
}

/// PASS when the tangent rank equals the total dimension, every factor
/// algebra fills its sp(V) and no two factors share an algebra. A rank
/// shortfall is a FAIL; full rank with an undersized closure is INCONCLUSIVE.
/// `zero_factor` replaces that component of the random vector with zero.
pub fn open_orbit_certificate(
    cfg: &BranchConfig,
    orbits: &[CharOrbit],
    zero_factor: Option<usize>,
    seed: u64,
) -> Certificate {
    let timer = Timer::start();
    let params = json!({
        "genus": cfg.g,
        "n": cfg.n,
        "preset": cfg.preset.map(|p| p.name()),
        "orbits": orbits.iter().map(|u| [u.b, u.c]).collect::<Vec<_>>(),
        "zero_factor": zero_factor,
    });
    let run = || -> Result<OpenOrbitRank, DensityError> {
        let factors = build_factors(cfg, orbits)?;
        let closures = closures_for(&factors)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vectors: Vec<Vec<i64>> = factors
            .iter()
            .enumerate()
            .map(|(k, f)| {
                if Some(k) == zero_factor {
                    vec![0; f.dim()]
                } else {
                    let mut v: Vec<i64> = (0..f.dim()).map(|_| rng.gen_range(-9..=9)).collect();
                    if v.iter().all(|&x| x == 0) {
                        v[0] = 1;
                    }
                    v
                }
            })
            .collect();
        open_orbit_rank(&factors, &closures, &vectors)
    };
    match run() {
        Ok(r) => {
            let shared = r.groups.iter().any(|g| g.len() > 1);
            let status = if r.rank < r.expected || shared {
                Status::Fail
            } else if r.closures_full {
                Status::Pass
            } else {
                Status::Inconclusive
            };
            timer.finish(
                "open_orbit",
                params,
                status,
                json!({
                    "rank": r.rank,
                    "expected": r.expected,
                    "deficit": r.expected - r.rank,
                    "groups": r.groups,
                    "group_ranks": r.group_ranks,
                    "closures_full": r.closures_full,
                }),
                seed,
            )
        }
        Err(e) => timer.finish("open_orbit", params, Status::Fail, json!({ "error": e.to_string() }), seed),
    }
}
