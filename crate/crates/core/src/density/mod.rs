//! Density of the monodromy image: irreducibility, Lie closure, component
//! separation, open orbits, the no-characters proxy and noncompactness.
//!
//! The group acting on every factor H₁(X_o, W_u) at once is generated by the
//! squares D_ij² of twists along loops whose monodromy in the abelianized
//! quotient is the identity or a reflection. Those are the "shared" loops
//! below; per-factor checks use the same list so their results combine.

mod irreducible;
mod lie;
mod noncompact;
mod orbit;
mod separation;

use rayon::prelude::*;
use serde_json::json;
use thiserror::Error;

use crate::certificate::{Certificate, Status, Timer};
use crate::curve::BranchConfig;
use crate::exactmath::{CycMatrix, CyclotomicReduction, ExactError, Fp, Matrix, Scalar};
use crate::homology::{build_basis, HomologyBasis, HomologyError};
use crate::reps::CharOrbit;
use crate::twist::{dehn_twist_matrix, TwistError, TwistOperator};

pub use irreducible::{irreducibility_certificate, orbit_span, OrbitSpan};
pub use lie::{bracket, in_sp, lie_closure, sl2_basis, sp_dimension, BracketWord, LieAlgebraBasis};
pub use noncompact::{noncompactness_search, NoncompactWitness};
pub use orbit::{closures_for, open_orbit_certificate, open_orbit_rank, OpenOrbitRank};
pub use separation::{
    component_separation, expected_trace, separation_trace, separation_triple, SeparationTriple,
    SEPARATION_PAIRS,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DensityError {
    #[error("generator {0} does not preserve the intersection form")]
    NotSymplectic(usize),
    #[error("span of the closure is not closed under brackets")]
    NotClosed,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("loop L_({0},{1}) has no fixed coefficient vector")]
    NoFixedVector(usize, usize),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Twist(#[from] TwistError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Loops whose monodromy acts as identity or reflection on every W_u.
pub fn shared_loops(cfg: &BranchConfig) -> Vec<(usize, usize)> {
    cfg.loops()
        .into_iter()
        .filter(|l| l.monodromy.eps == -1 || (l.monodromy.a() == 0 && l.monodromy.alpha() == 0))
        .map(|l| (l.i, l.j))
        .collect()
}

/// One factor H₁(X_o, W_u) with its basis and the shared squared twists.
#[derive(Clone, Debug)]
pub struct Factor {
    pub orbit: CharOrbit,
    pub basis: HomologyBasis,
    pub squares: Vec<TwistOperator>,
}

impl Factor {
    pub fn new(cfg: &BranchConfig, u: &CharOrbit) -> Result<Factor, DensityError> {
        let basis = build_basis(cfg, u)?;
        let squares = shared_loops(cfg)
            .into_iter()
            .map(|(i, j)| dehn_twist_matrix(&basis, i, j, 2))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Factor {
            orbit: *u,
            basis,
            squares,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// A_ij = D_ij² − 1 for the shared loops.
    pub fn nilpotents(&self) -> Vec<CycMatrix> {
        self.squares.iter().map(|t| t.nilpotent()).collect()
    }

    pub fn names(&self) -> Vec<String> {
        self.squares.iter().map(|t| format!("A_({},{})", t.i, t.j)).collect()
    }
}

/// Factors for several orbits, built in parallel; duplicates are allowed.
pub fn build_factors(cfg: &BranchConfig, orbits: &[CharOrbit]) -> Result<Vec<Factor>, DensityError> {
    orbits.par_iter().map(|u| Factor::new(cfg, u)).collect()
}

pub fn reduce_matrix(m: &CycMatrix, red: &CyclotomicReduction) -> Result<Matrix<Fp>, ExactError> {
    m.try_map(&red.one().zero_like(), |x| red.reduce(x))
}

/// Lie algebra of one factor, computed over F_p.
///
/// Every generator is checked to lie in sp(V, G) exactly, so the true
/// dimension is at most dim sp(V). Reduction mod p can only lower the rank
/// of the bracket words, so an F_p dimension equal to dim sp(V) proves the
/// algebra over Q(ζ_n) is all of sp(V).
#[derive(Clone, Debug)]
pub struct FactorClosure {
    pub orbit: CharOrbit,
    pub prime: u64,
    pub algebra: LieAlgebraBasis<Fp>,
}

impl FactorClosure {
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn target(&self) -> usize {
        sp_dimension(self.algebra.ambient)
    }

    pub fn is_full(&self) -> bool {
        self.algebra.is_full_sp()
    }
}

pub fn factor_closure(factor: &Factor, prime_index: usize) -> Result<FactorClosure, DensityError> {
    let gens = factor.nilpotents();
    for (k, a) in gens.iter().enumerate() {
        if !in_sp(a, &factor.basis.gram) {
            return Err(DensityError::NotSymplectic(k));
        }
    }
    let red = CyclotomicReduction::new(factor.orbit.n, prime_index);
    let gens_p = gens
        .iter()
        .map(|a| reduce_matrix(a, &red))
        .collect::<Result<Vec<_>, _>>()?;
    let gram_p = reduce_matrix(&factor.basis.gram, &red)?;
    let algebra = lie_closure(&gens_p, &gram_p, factor.names())?;
    Ok(FactorClosure {
        orbit: factor.orbit,
        prime: red.p,
        algebra,
    })
}

fn closure_params(cfg: &BranchConfig, u: &CharOrbit) -> serde_json::Value {
    json!({
        "genus": cfg.g,
        "n": cfg.n,
        "preset": cfg.preset.map(|p| p.name()),
        "orbit": [u.b, u.c],
    })
}

/// PASS when the closure fills sp(V); INCONCLUSIVE otherwise, since a
/// smaller F_p dimension could be an artifact of the prime.
pub fn lie_closure_certificate(cfg: &BranchConfig, u: &CharOrbit, seed: u64) -> Certificate {
    let timer = Timer::start();
    let params = closure_params(cfg, u);
    let result = Factor::new(cfg, u).and_then(|f| factor_closure(&f, 0).map(|c| (f, c)));
    match result {
        Ok((f, c)) => timer.finish(
            "lie_closure",
            params,
            if c.is_full() { Status::Pass } else { Status::Inconclusive },
            json!({
                "dim": c.dim(),
                "target": c.target(),
                "homology_dim": f.dim(),
                "generators": f.squares.len(),
                "prime": c.prime,
                "closure_verified": c.algebra.closure_verified,
            }),
            seed,
        ),
        Err(e) => timer.finish("lie_closure", params, Status::Fail, json!({ "error": e.to_string() }), seed),
    }
}

/// Traceless generators and a nondegenerate Killing form: no nontrivial
/// characters of the Lie algebra, hence none of the identity component.
pub fn no_characters_certificate(cfg: &BranchConfig, u: &CharOrbit, seed: u64) -> Certificate {
    let timer = Timer::start();
    let params = closure_params(cfg, u);
    let result = Factor::new(cfg, u).and_then(|f| {
        let traces_zero = f.nilpotents().iter().all(|a| a.trace().is_zero());
        factor_closure(&f, 0).map(|c| (traces_zero, c))
    });
    match result {
        Ok((traces_zero, c)) => {
            let (status, killing_rank) = killing_status(&c.algebra, traces_zero);
            timer.finish(
                "no_characters",
                params,
                status,
                json!({
                    "traceless": traces_zero,
                    "dim": c.dim(),
                    "killing_rank": killing_rank,
                    "prime": c.prime,
                }),
                seed,
            )
        }
        Err(e) => timer.finish("no_characters", params, Status::Fail, json!({ "error": e.to_string() }), seed),
    }
}

/// Status of the no-characters proxy for an algebra whose generators have
/// known traces. A Killing form that is nondegenerate mod p is nondegenerate
/// over the original field.
pub fn killing_status<T: Scalar>(algebra: &LieAlgebraBasis<T>, traceless: bool) -> (Status, usize) {
    if algebra.dim() == 0 {
        return (Status::Fail, 0);
    }
    let rank = algebra.killing_form().rank();
    (Status::from_bool(traceless && rank == algebra.dim()), rank)
}
