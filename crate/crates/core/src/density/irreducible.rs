//! Cyclic spans under the operators A_ij = D_ij² − 1.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::certificate::{Certificate, Status, Timer};
use crate::curve::{fixed_vector, BranchConfig, FixedSpace};
use crate::exactmath::{CycScalar, Scalar};
use crate::homology::{build_basis, Echelon, HomologyBasis};
use crate::reps::CharOrbit;
use crate::twist::{admissible_squares, TwistOperator};

use super::DensityError;

/// Span of all words in the operators applied to a start vector.
#[derive(Clone, Debug)]
pub struct OrbitSpan {
    pub rank: usize,
    /// For each spanning vector, the operators applied to the start
    /// vector, rightmost first.
    pub words: Vec<Vec<usize>>,
}

/// Breadth-first span of {A_{k1} ⋯ A_{km} w}; vectors are coordinate columns.
pub fn orbit_span(ops: &[TwistOperator], start: &[CycScalar], target: usize) -> OrbitSpan {
    let mut ech = Echelon::new();
    let mut words = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    let nilps: Vec<_> = ops.iter().map(|t| t.nilpotent()).collect();
    if ech.insert(start.to_vec()) {
        words.push(vec![]);
        queue.push_back((start.to_vec(), vec![]));
    }
    while let Some((v, word)) = queue.pop_front() {
        if ech.rank() == target {
            break;
        }
        for (k, a) in nilps.iter().enumerate() {
            let w = a.mul_vec(&v);
            if ech.insert(w.clone()) {
                let mut wd: Vec<usize> = word.clone();
                wd.push(k);
                words.push(wd.clone());
                queue.push_back((w, wd));
                if ech.rank() == target {
                    break;
                }
            }
        }
    }
    OrbitSpan {
        rank: ech.rank(),
        words,
    }
}

/// Coordinates of v L_(i,j) for the fixed vector v of M_(i,j).
fn fixed_cycle_coords(basis: &HomologyBasis, i: usize, j: usize) -> Result<Vec<CycScalar>, DensityError> {
    let ctx = &basis.ctx;
    let idx = ctx
        .table
        .loop_index(i, j)
        .ok_or(crate::homology::HomologyError::UnknownLoop(i, j))?;
    let one = ctx.zero().one_like();
    let v = if ctx.u.is_trivial() {
        vec![one]
    } else {
        match fixed_vector(&ctx.classes[idx]) {
            FixedSpace::Line(f) => f,
            FixedSpace::WholePlane => vec![one.clone(), one],
            FixedSpace::Zero => return Err(DensityError::NoFixedVector(i, j)),
        }
    };
    Ok(basis.coords(&ctx.cycle(i, j, v)?))
}

/// The start w₀ = v L_(2,11) must generate all of H₁ under the A_ij with
/// non-rotation monodromy; so must a seeded random vector.
pub fn irreducibility_certificate(cfg: &BranchConfig, u: &CharOrbit, seed: u64) -> Certificate {
    let timer = Timer::start();
    let params = json!({
        "genus": cfg.g,
        "n": cfg.n,
        "preset": cfg.preset.map(|p| p.name()),
        "orbit": [u.b, u.c],
    });
    let run = || -> Result<_, DensityError> {
        let basis = build_basis(cfg, u)?;
        let ops = admissible_squares(&basis);
        let d = basis.dim();
        let w0 = fixed_cycle_coords(&basis, 2, 2 * cfg.g as usize - 1)?;
        let from_w0 = orbit_span(&ops, &w0, d);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z = basis.ctx.zero();
        let random: Vec<CycScalar> = (0..d).map(|_| z.from_i64_like(rng.gen_range(-9..=9))).collect();
        let from_random = orbit_span(&ops, &random, d);
        Ok((d, ops, from_w0, from_random))
    };
    match run() {
        Ok((d, ops, a, b)) => {
            let name = |w: &Vec<usize>| -> Vec<String> {
                w.iter().map(|&k| format!("A_({},{})", ops[k].i, ops[k].j)).collect()
            };
            timer.finish(
                "irreducibility",
                params,
                Status::from_bool(a.rank == d && b.rank == d),
                json!({
                    "dim": d,
                    "operators": ops.len(),
                    "start_loop": [2, 2 * cfg.g - 1],
                    "rank_from_start": a.rank,
                    "rank_from_random": b.rank,
                    "spanning_words": a.words.iter().map(name).collect::<Vec<_>>(),
                }),
                seed,
            )
        }
        Err(e) => timer.finish("irreducibility", params, Status::Fail, json!({ "error": e.to_string() }), seed),
    }
}
