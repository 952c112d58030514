//! Search for a word in the shared squared twists with an eigenvalue off the
//! unit circle on every factor.
//!
//! Candidates are screened in floating point by trace growth. A candidate X
//! is certified on a factor of dimension d when the exact trace of X^(2^s)
//! has modulus provably above d, which forces some |λ| > 1. Spectra of
//! symplectic matrices are closed under λ ↦ 1/λ̄, so polynomial tests
//! against the conjugate reciprocal cannot see off-circle pairs and are not
//! used.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::certificate::{Certificate, Status, Timer};
use crate::curve::BranchConfig;
use crate::exactmath::CycMatrix;
use crate::reps::CharOrbit;

use super::{build_factors, shared_loops, Factor};

/// Words of each length are enumerated exhaustively up to this many,
/// otherwise sampled.
const WORD_BUDGET: usize = 4096;
const MAX_SQUARINGS: u32 = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct NoncompactWitness {
    pub word: Vec<(usize, usize)>,
    /// Per factor: orbit, the exponent 2^s and a certified lower bound
    /// for |tr X^(2^s)|.
    pub factors: Vec<(CharOrbit, u64, f64)>,
}

type C = (f64, f64);

#[derive(Clone)]
struct Cmat {
    d: usize,
    a: Vec<C>,
}

impl Cmat {
    fn from(m: &CycMatrix) -> Cmat {
        let d = m.rows();
        let a = (0..d * d)
            .map(|k| {
                let (re, im, _) = m[(k / d, k % d)].to_complex();
                (re, im)
            })
            .collect();
        Cmat { d, a }
    }

    fn mul(&self, o: &Cmat) -> Cmat {
        let d = self.d;
        let mut a = vec![(0.0, 0.0); d * d];
        for i in 0..d {
            for k in 0..d {
                let (xr, xi) = self.a[i * d + k];
                if xr == 0.0 && xi == 0.0 {
                    continue;
                }
                for j in 0..d {
                    let (yr, yi) = o.a[k * d + j];
                    let t = &mut a[i * d + j];
                    t.0 += xr * yr - xi * yi;
                    t.1 += xr * yi + xi * yr;
                }
            }
        }
        Cmat { d, a }
    }

    fn trace_abs(&self) -> f64 {
        let (mut re, mut im) = (0.0, 0.0);
        for i in 0..self.d {
            re += self.a[i * self.d + i].0;
            im += self.a[i * self.d + i].1;
        }
        re.hypot(im)
    }
}

/// Smallest s with |tr X^(2^s)| comfortably above d, in floating point.
fn screen(x: Cmat) -> Option<u32> {
    let d = x.d as f64;
    let mut y = x;
    for s in 0..=MAX_SQUARINGS {
        let t = y.trace_abs();
        if !t.is_finite() {
            return None;
        }
        if t > d + 0.5 {
            return Some(s);
        }
        y = y.mul(&y);
    }
    None
}

fn word_product<M: Clone>(word: &[usize], mats: &[M], mul: impl Fn(&M, &M) -> M) -> M {
    let mut acc = mats[word[0]].clone();
    for &k in &word[1..] {
        acc = mul(&acc, &mats[k]);
    }
    acc
}

/// Certified lower bound for |tr X^(2^s)|.
fn exact_trace_bound(x: &CycMatrix, s: u32) -> f64 {
    let mut y = x.clone();
    for _ in 0..s {
        y = y.mul(&y);
    }
    let (re, im, err) = y.trace().to_complex();
    re.hypot(im) * (1.0 - 4.0 * f64::EPSILON) - 2.0 * err
}

fn certify(word: &[usize], factors: &[Factor], shifts: &[u32]) -> Option<Vec<(CharOrbit, u64, f64)>> {
    factors
        .par_iter()
        .zip(shifts)
        .map(|(f, &s)| {
            let mats: Vec<CycMatrix> = f.squares.iter().map(|t| t.matrix.clone()).collect();
            let x = word_product(word, &mats, |a, b| a.mul(b));
            let bound = exact_trace_bound(&x, s);
            (bound > f.dim() as f64).then_some((f.orbit, 1u64 << s, bound))
        })
        .collect()
}

fn words_of_length(m: usize, len: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let total = (m as f64).powi(len as i32);
    if total <= WORD_BUDGET as f64 {
        let mut out = vec![vec![]];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|w| {
                    (0..m).map(move |k| {
                        let mut w = w.clone();
                        w.push(k);
                        w
                    })
                })
                .collect();
        }
        out
    } else {
        (0..WORD_BUDGET)
            .map(|_| (0..len).map(|_| rng.gen_range(0..m)).collect())
            .collect()
    }
}

/// Searches words of length 2..=max_len in order; the first word certified
/// on every factor is the witness. Nothing found is INCONCLUSIVE.
pub fn noncompactness_search(cfg: &BranchConfig, orbits: &[CharOrbit], max_len: usize, seed: u64) -> Certificate {
    let timer = Timer::start();
    let params = json!({
        "genus": cfg.g,
        "n": cfg.n,
        "preset": cfg.preset.map(|p| p.name()),
        "orbits": orbits.iter().map(|u| [u.b, u.c]).collect::<Vec<_>>(),
        "max_word_length": max_len,
    });
    let factors = match build_factors(cfg, orbits) {
        Ok(f) => f,
        Err(e) => {
            return timer.finish("noncompactness", params, Status::Fail, json!({ "error": e.to_string() }), seed)
        }
    };
    let loops = shared_loops(cfg);
    let m = loops.len();
    let cmats: Vec<Vec<Cmat>> = factors
        .iter()
        .map(|f| f.squares.iter().map(|t| Cmat::from(&t.matrix)).collect())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tried = 0usize;
    for len in 2..=max_len.max(1) {
        if m == 0 {
            break;
        }
        let words = words_of_length(m, len, &mut rng);
        tried += words.len();
        let screened: Vec<Option<Vec<u32>>> = words
            .par_iter()
            .map(|w| {
                cmats
                    .iter()
                    .map(|ms| screen(word_product(w, ms, |a, b| a.mul(b))))
                    .collect()
            })
            .collect();
        for (w, shifts) in words.iter().zip(screened) {
            let Some(shifts) = shifts else { continue };
            if let Some(per_factor) = certify(w, &factors, &shifts) {
                let witness = NoncompactWitness {
                    word: w.iter().map(|&k| loops[k]).collect(),
                    factors: per_factor,
                };
                return timer.finish(
                    "noncompactness",
                    params,
                    Status::Pass,
                    witness_json(&witness, tried),
                    seed,
                );
            }
        }
    }
    timer.finish(
        "noncompactness",
        params,
        Status::Inconclusive,
        json!({ "words_tried": tried, "generators": m }),
        seed,
    )
}

fn witness_json(w: &NoncompactWitness, tried: usize) -> serde_json::Value {
    json!({
        "word": w.word.iter().map(|(i, j)| format!("D_({i},{j})^2")).collect::<Vec<_>>(),
        "words_tried": tried,
        "factors": w.factors.iter().map(|(u, power, bound)| json!({
            "orbit": [u.b, u.c],
            "power": power,
            "trace_lower_bound": bound,
        })).collect::<Vec<_>>(),
    })
}
