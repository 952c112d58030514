//! Traces of E = A_(2,i) A_(1,2) A_(2,j) A_(1,2), which tell the factors apart.
//!
//! A_(1,2) = D_(1,2) − 1 is the primitive twist (L_(1,2) has identity
//! monodromy) and A_(2,i) = D_(2,i)² − 1. E has rank at most one, and its
//! trace is 2 + γ^(x_j − x_i) + γ^(x_i − x_j) with x_7 = b, x_9 = c, x_11 = 0.

use serde_json::json;

use crate::certificate::{Certificate, Status, Timer};
use crate::curve::BranchConfig;
use crate::exactmath::{CycMatrix, CycScalar, Scalar};
use crate::homology::{build_basis, HomologyBasis};
use crate::reps::{gamma_pow, CharOrbit};
use crate::twist::dehn_twist_matrix;

use super::DensityError;

/// The (i, j) pairs whose traces form the separation triple.
pub const SEPARATION_PAIRS: [(usize, usize); 3] = [(11, 7), (11, 9), (9, 7)];

#[derive(Clone, Debug, PartialEq)]
pub struct SeparationTriple {
    pub orbit: CharOrbit,
    pub traces: [CycScalar; 3],
    /// Same traces with A_(1,2) = D_(1,2)² − 1; each is 4 times the above.
    pub squared_traces: [CycScalar; 3],
    pub ranks: [usize; 3],
}

fn exponent(u: &CharOrbit, i: usize) -> i64 {
    match i {
        7 => u.b as i64,
        9 => u.c as i64,
        _ => 0,
    }
}

/// 2 + γ^(x_j − x_i) + γ^(x_i − x_j).
pub fn expected_trace(u: &CharOrbit, i: usize, j: usize) -> CycScalar {
    let d = exponent(u, j) - exponent(u, i);
    let two = gamma_pow(u.n, 0).from_i64_like(2);
    two.add(&gamma_pow(u.n, d)).add(&gamma_pow(u.n, -d))
}

fn e_matrix(basis: &HomologyBasis, i: usize, j: usize, a12: &CycMatrix) -> Result<CycMatrix, DensityError> {
    let a2i = dehn_twist_matrix(basis, 2, i, 2)?.nilpotent();
    let a2j = dehn_twist_matrix(basis, 2, j, 2)?.nilpotent();
    Ok(a2i.mul(a12).mul(&a2j).mul(a12))
}

/// Trace of E for one pair, with A_(1,2) at the given power.
pub fn separation_trace(basis: &HomologyBasis, i: usize, j: usize, power: u32) -> Result<CycScalar, DensityError> {
    let a12 = dehn_twist_matrix(basis, 1, 2, power)?.nilpotent();
    Ok(e_matrix(basis, i, j, &a12)?.trace())
}

pub fn separation_triple(basis: &HomologyBasis) -> Result<SeparationTriple, DensityError> {
    let a1 = dehn_twist_matrix(basis, 1, 2, 1)?.nilpotent();
    let a2 = dehn_twist_matrix(basis, 1, 2, 2)?.nilpotent();
    let mut traces = Vec::new();
    let mut squared = Vec::new();
    let mut ranks = [0; 3];
    for (k, &(i, j)) in SEPARATION_PAIRS.iter().enumerate() {
        let e = e_matrix(basis, i, j, &a1)?;
        ranks[k] = e.rank();
        traces.push(e.trace());
        squared.push(e_matrix(basis, i, j, &a2)?.trace());
    }
    let arr = |v: Vec<CycScalar>| -> [CycScalar; 3] { v.try_into().expect("three pairs") };
    Ok(SeparationTriple {
        orbit: basis.ctx.u,
        traces: arr(traces),
        squared_traces: arr(squared),
        ranks,
    })
}

/// Computes the triple of every orbit and checks that they are pairwise
/// distinct and match the closed form.
pub fn component_separation(cfg: &BranchConfig, orbits: &[CharOrbit], seed: u64) -> Certificate {
    use rayon::prelude::*;
    let timer = Timer::start();
    let params = json!({
        "genus": cfg.g,
        "n": cfg.n,
        "preset": cfg.preset.map(|p| p.name()),
        "orbits": orbits.iter().map(|u| [u.b, u.c]).collect::<Vec<_>>(),
    });
    let triples: Result<Vec<SeparationTriple>, DensityError> = orbits
        .par_iter()
        .map(|u| {
            let basis = build_basis(cfg, u)?;
            separation_triple(&basis)
        })
        .collect();
    let triples = match triples {
        Ok(t) => t,
        Err(e) => {
            return timer.finish("separation", params, Status::Fail, json!({ "error": e.to_string() }), seed)
        }
    };
    let mut collisions = Vec::new();
    for a in 0..triples.len() {
        for b in a + 1..triples.len() {
            if triples[a].traces == triples[b].traces {
                collisions.push(json!([
                    [triples[a].orbit.b, triples[a].orbit.c],
                    [triples[b].orbit.b, triples[b].orbit.c]
                ]));
            }
        }
    }
    let four = gamma_pow(cfg.n, 0).from_i64_like(4);
    let mut formula_ok = true;
    let rows: Vec<_> = triples
        .iter()
        .map(|t| {
            let matches: Vec<bool> = SEPARATION_PAIRS
                .iter()
                .zip(&t.traces)
                .map(|(&(i, j), tr)| *tr == expected_trace(&t.orbit, i, j))
                .collect();
            let squared_ok = t.traces.iter().zip(&t.squared_traces).all(|(a, b)| a.mul(&four) == *b);
            formula_ok &= matches.iter().all(|&m| m) && squared_ok && t.ranks.iter().all(|&r| r <= 1);
            json!({
                "orbit": [t.orbit.b, t.orbit.c],
                "traces": t.traces.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "squared_traces": t.squared_traces.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "ranks": t.ranks,
                "matches_closed_form": matches,
            })
        })
        .collect();
    timer.finish(
        "separation",
        params,
        Status::from_bool(collisions.is_empty() && formula_ok),
        json!({ "triples": rows, "collisions": collisions, "closed_form_ok": formula_ok }),
        seed,
    )
}
