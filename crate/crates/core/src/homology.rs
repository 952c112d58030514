//! Twisted first homology H₁(X_o, W_u) through loop-like chains.
//!
//! A cycle v·L on the loop L carries the coefficient v ∈ W_u at the loop's
//! base point with M_L v = v. Two such cycles pair by summing, over the
//! points where their lifts meet on the cover, the intersection sign times
//! the invariant form Q of both coefficients transported to that point.
//! A basis is picked greedily from the candidate cycles, and an independent
//! cellular chain complex supplies the expected dimension.

use std::sync::Arc;

use serde_json::{json, Value};
use thiserror::Error;

use crate::certificate::{Certificate, Status, Timer};
use crate::curve::{
    coefficient_dim, coefficient_matrix, cut_of, BranchConfig, FixedSpace, LoopSpec, MonodromyClass,
};
use crate::exactmath::{CycMatrix, CycScalar, Matrix, Scalar};
use crate::heisenberg::DihedralElement;
use crate::reps::{zero_scalar, CharOrbit};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error("candidate cycles reach rank {achieved}, expected {expected}")]
    RankDeficit { achieved: usize, expected: usize },
    #[error("the Gram matrix of the selected cycles is singular")]
    DegenerateGram,
    #[error("no loop ({0},{1})")]
    UnknownLoop(usize, usize),
    #[error("vector is not fixed by the monodromy of L_({0},{1})")]
    NotACycle(usize, usize),
}

/// Genuine intersection of two loop lifts on the cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Crossing {
    /// Right-hand-rule sign: sign of det(direction of first, direction of second).
    pub sign: i8,
    pub transport_first: DihedralElement,
    pub transport_second: DihedralElement,
}

fn crossings_between(a: &LoopSpec, b: &LoopSpec) -> Vec<Crossing> {
    let mut out = Vec::new();
    for sa in &a.segments {
        for sb in &b.segments {
            let (v, h, a_is_vertical) = match (sa.is_vertical(), sb.is_vertical()) {
                (true, false) => (sa, sb, true),
                (false, true) => (sb, sa, false),
                _ => continue,
            };
            let x = v.from.0;
            let y = h.from.1;
            let (hx0, hx1) = (h.from.0.min(h.to.0), h.from.0.max(h.to.0));
            let (vy0, vy1) = (v.from.1.min(v.to.1), v.from.1.max(v.to.1));
            if x < hx0 || x > hx1 || y < vy0 || y > vy1 {
                continue;
            }
            // general position: distinct loops never meet at a corner
            let on_end = x == hx0 || x == hx1 || y == vy0 || y == vy1;
            assert!(!on_end, "degenerate crossing between L{:?} and L{:?}", (a.i, a.j), (b.i, b.j));
            if sa.sheet != sb.sheet {
                continue;
            }
            let (da, db) = (sa.direction(), sb.direction());
            let cross = da.0 * db.1 - da.1 * db.0;
            debug_assert!(cross != 0 && a_is_vertical == (da.0 == 0));
            out.push(Crossing {
                sign: cross.signum() as i8,
                transport_first: sa.transport,
                transport_second: sb.transport,
            });
        }
    }
    out
}

/// Crossings for every ordered pair of loops of a configuration.
#[derive(Clone, Debug)]
pub struct IntersectionTable {
    pub loops: Vec<LoopSpec>,
    data: Vec<Vec<Vec<Crossing>>>,
}

impl IntersectionTable {
    pub fn new(cfg: &BranchConfig) -> IntersectionTable {
        let loops = cfg.loops();
        let m = loops.len();
        let mut data = vec![vec![Vec::new(); m]; m];
        for a in 0..m {
            for b in a + 1..m {
                let c = crossings_between(&loops[a], &loops[b]);
                data[b][a] = c
                    .iter()
                    .map(|x| Crossing {
                        sign: -x.sign,
                        transport_first: x.transport_second,
                        transport_second: x.transport_first,
                    })
                    .collect();
                data[a][b] = c;
            }
        }
        IntersectionTable { loops, data }
    }

    pub fn crossings(&self, a: usize, b: usize) -> &[Crossing] {
        &self.data[a][b]
    }

    pub fn loop_index(&self, i: usize, j: usize) -> Option<usize> {
        self.loops.iter().position(|l| l.i == i && l.j == j)
    }
}

/// Invariant symmetric form on the coefficients: rs′ + r′s on W_u, the
/// product on the trivial rank-one system.
pub fn q_form(u: &CharOrbit) -> CycMatrix {
    let z = zero_scalar(u.n);
    if u.is_trivial() {
        Matrix::identity(1, &z)
    } else {
        crate::reps::r_matrix(u.n)
    }
}

/// One term w·L of a loop-like chain.
#[derive(Clone, Debug, PartialEq)]
pub struct CycleTerm {
    /// Index into the lexicographic loop list.
    pub loop_idx: usize,
    pub i: usize,
    pub j: usize,
    pub vector: Vec<CycScalar>,
}

/// Finite sum of loop-like chains.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistedCycle {
    pub terms: Vec<CycleTerm>,
}

impl TwistedCycle {
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|t| {
                    json!({
                        "i": t.i,
                        "j": t.j,
                        "vector": t.vector.iter().map(|x| x.to_json()).collect::<Vec<_>>(),
                    })
                })
                .collect(),
        )
    }
}

/// All data needed to pair cycles for one (configuration, orbit).
#[derive(Clone, Debug)]
pub struct HomologyContext {
    pub cfg: BranchConfig,
    pub u: CharOrbit,
    pub table: Arc<IntersectionTable>,
    pub classes: Vec<MonodromyClass>,
    /// K[a][b] = Σ_p sign(p) W(T_a,p)ᵀ Q W(T_b,p), `None` when L_a and L_b do not meet.
    kmats: Vec<Vec<Option<CycMatrix>>>,
}

impl HomologyContext {
    pub fn new(cfg: &BranchConfig, u: &CharOrbit) -> HomologyContext {
        Self::with_table(cfg, u, Arc::new(IntersectionTable::new(cfg)))
    }

    pub fn with_table(cfg: &BranchConfig, u: &CharOrbit, table: Arc<IntersectionTable>) -> HomologyContext {
        let q = q_form(u);
        let m = table.loops.len();
        let classes = table
            .loops
            .iter()
            .map(|l| MonodromyClass::of_element(u, &l.monodromy))
            .collect();
        let mut kmats = vec![vec![None; m]; m];
        for a in 0..m {
            for b in 0..m {
                let cs = table.crossings(a, b);
                if cs.is_empty() {
                    continue;
                }
                let mut k: Option<CycMatrix> = None;
                for c in cs {
                    let wa = coefficient_matrix(u, &c.transport_first);
                    let wb = coefficient_matrix(u, &c.transport_second);
                    let mut term = wa.transpose().mul(&q).mul(&wb);
                    if c.sign < 0 {
                        term = term.neg();
                    }
                    k = Some(match k {
                        None => term,
                        Some(acc) => acc.add(&term),
                    });
                }
                kmats[a][b] = k;
            }
        }
        HomologyContext {
            cfg: cfg.clone(),
            u: *u,
            table,
            classes,
            kmats,
        }
    }

    pub fn zero(&self) -> CycScalar {
        zero_scalar(self.u.n)
    }

    pub fn coefficient_dim(&self) -> usize {
        coefficient_dim(&self.u)
    }

    /// Pairing matrix between coefficient vectors on loops a and b.
    pub fn pairing_matrix(&self, a: usize, b: usize) -> Option<&CycMatrix> {
        self.kmats[a][b].as_ref()
    }

    pub fn term(&self, i: usize, j: usize, vector: Vec<CycScalar>) -> Result<CycleTerm, HomologyError> {
        let idx = self.table.loop_index(i, j).ok_or(HomologyError::UnknownLoop(i, j))?;
        let m = &self.classes[idx].matrix;
        if m.mul_vec(&vector) != vector {
            return Err(HomologyError::NotACycle(i, j));
        }
        Ok(CycleTerm {
            loop_idx: idx,
            i,
            j,
            vector,
        })
    }

    pub fn cycle(&self, i: usize, j: usize, vector: Vec<CycScalar>) -> Result<TwistedCycle, HomologyError> {
        Ok(TwistedCycle {
            terms: vec![self.term(i, j, vector)?],
        })
    }

    fn pair_terms(&self, x: &CycleTerm, y: &CycleTerm) -> CycScalar {
        match &self.kmats[x.loop_idx][y.loop_idx] {
            None => self.zero(),
            Some(k) => {
                let kw = k.mul_vec(&y.vector);
                let mut acc = self.zero();
                for (a, b) in x.vector.iter().zip(&kw) {
                    if !a.is_zero() && !b.is_zero() {
                        acc.add_assign(&a.mul(b));
                    }
                }
                acc
            }
        }
    }

    /// Bilinear intersection pairing of two cycles.
    pub fn intersection_pairing(&self, x: &TwistedCycle, y: &TwistedCycle) -> CycScalar {
        let mut acc = self.zero();
        for a in &x.terms {
            for b in &y.terms {
                acc.add_assign(&self.pair_terms(a, b));
            }
        }
        acc
    }

    /// Candidate cycles v·L in loop order: two per Identity loop (v₊, v₋),
    /// one per Reflection loop ((1+M)v₊), none for Rotations.
    pub fn candidates(&self) -> Vec<TwistedCycle> {
        let z = self.zero();
        let one = z.one_like();
        let mut out = Vec::new();
        for (idx, (l, mc)) in self.table.loops.iter().zip(&self.classes).enumerate() {
            let vectors: Vec<Vec<CycScalar>> = if self.u.is_trivial() {
                vec![vec![one.clone()]]
            } else {
                match crate::curve::fixed_vector(mc) {
                    FixedSpace::WholePlane => vec![
                        vec![one.clone(), z.clone()],
                        vec![z.clone(), one.clone()],
                    ],
                    FixedSpace::Line(v) => vec![v],
                    FixedSpace::Zero => vec![],
                }
            };
            for v in vectors {
                out.push(TwistedCycle {
                    terms: vec![CycleTerm {
                        loop_idx: idx,
                        i: l.i,
                        j: l.j,
                        vector: v,
                    }],
                });
            }
        }
        out
    }
}

/// Incrementally maintained reduced row echelon form.
#[derive(Clone, Debug)]
pub(crate) struct Echelon<T: Scalar> {
    rows: Vec<Vec<T>>,
    pivots: Vec<usize>,
}

impl<T: Scalar> Echelon<T> {
    pub fn new() -> Self {
        Echelon {
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, mut v: Vec<T>) -> Vec<T> {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    x.sub_mul_assign(&f, r);
                }
            }
        }
        v
    }

    /// Insert `v` if it is independent of the current rows; returns whether it was.
    pub fn insert(&mut self, v: Vec<T>) -> bool {
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].inv().expect("nonzero pivot");
        for x in v.iter_mut() {
            if !x.is_zero() {
                *x = x.mul(&inv);
            }
        }
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, r) in row.iter_mut().zip(&v) {
                if !r.is_zero() {
                    x.sub_mul_assign(&f, r);
                }
            }
        }
        self.rows.push(v);
        self.pivots.push(p);
        true
    }

    pub fn contains(&self, v: Vec<T>) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }
}

/// Selected basis of H₁(X_o, W_u) with its Gram matrix.
#[derive(Clone, Debug)]
pub struct HomologyBasis {
    pub ctx: HomologyContext,
    pub candidates: Vec<TwistedCycle>,
    /// Indices into `candidates`.
    pub selected: Vec<usize>,
    pub basis: Vec<TwistedCycle>,
    /// gram[s][t] = ⟨basis_s, basis_t⟩.
    pub gram: CycMatrix,
    /// Rank reached by the rows of the full candidate Gram matrix.
    pub candidate_rank: usize,
    gram_t_inv: CycMatrix,
}

impl HomologyBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// (⟨x, b_t⟩)_t.
    pub fn pairings_with_basis(&self, x: &TwistedCycle) -> Vec<CycScalar> {
        self.basis
            .iter()
            .map(|b| self.ctx.intersection_pairing(x, b))
            .collect()
    }

    /// Coordinates c with x = Σ c_s b_s in homology, from gramᵀ c = (⟨x, b_t⟩)_t.
    pub fn coords(&self, x: &TwistedCycle) -> Vec<CycScalar> {
        self.gram_t_inv.mul_vec(&self.pairings_with_basis(x))
    }

    /// ⟨x, y⟩ for coordinate vectors: xᵀ gram y.
    pub fn pair_coords(&self, x: &[CycScalar], y: &[CycScalar]) -> CycScalar {
        let gy = self.gram.mul_vec(y);
        let mut acc = self.ctx.zero();
        for (a, b) in x.iter().zip(&gy) {
            acc.add_assign(&a.mul(b));
        }
        acc
    }

    pub fn gram_is_antisymmetric(&self) -> bool {
        self.gram.transpose() == self.gram.neg()
    }
}

/// Greedy basis selection, aiming for the dimension reported by the
/// cellular oracle.
pub fn build_basis(cfg: &BranchConfig, u: &CharOrbit) -> Result<HomologyBasis, HomologyError> {
    let expected = dimension_oracle(cfg, u).h1;
    build_basis_in(HomologyContext::new(cfg, u), expected)
}

pub fn build_basis_in(ctx: HomologyContext, expected: usize) -> Result<HomologyBasis, HomologyError> {
    let candidates = ctx.candidates();
    let mut ech = Echelon::new();
    let mut selected = Vec::new();
    for (idx, c) in candidates.iter().enumerate() {
        let row: Vec<CycScalar> = candidates
            .iter()
            .map(|d| ctx.intersection_pairing(c, d))
            .collect();
        if ech.insert(row) {
            selected.push(idx);
        }
    }
    let rank = ech.rank();
    if rank != expected {
        return Err(HomologyError::RankDeficit {
            achieved: rank,
            expected,
        });
    }
    let basis: Vec<TwistedCycle> = selected.iter().map(|&i| candidates[i].clone()).collect();
    let z = ctx.zero();
    let gram = Matrix::from_fn(basis.len(), basis.len(), &z, |s, t| {
        ctx.intersection_pairing(&basis[s], &basis[t])
    });
    let gram_t_inv = gram.transpose().inverse().ok_or(HomologyError::DegenerateGram)?;
    Ok(HomologyBasis {
        ctx,
        candidates,
        selected,
        basis,
        gram,
        candidate_rank: rank,
        gram_t_inv,
    })
}

/// Certificate that the candidate cycles span H₁(X_o, W_u).
pub fn span_certificate(cfg: &BranchConfig, u: &CharOrbit, seed: u64) -> Certificate {
    let timer = Timer::start();
    let oracle = dimension_oracle(cfg, u);
    let params = json!({
        "genus": cfg.g,
        "n": cfg.n,
        "preset": cfg.preset.map(|p| p.name()),
        "orbit": [u.b, u.c],
    });
    let ctx = HomologyContext::new(cfg, u);
    match build_basis_in(ctx, oracle.h1) {
        Ok(basis) => {
            let antisym = basis.gram_is_antisymmetric();
            let status = Status::from_bool(antisym && basis.dim() == oracle.h1);
            timer.finish(
                "span",
                params,
                status,
                json!({
                    "rank": basis.candidate_rank,
                    "oracle": {"h0": oracle.h0, "h1": oracle.h1},
                    "candidates": basis.candidates.len(),
                    "gram_invertible": true,
                    "gram_antisymmetric": antisym,
                    "selected": basis.basis.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
                }),
                seed,
            )
        }
        Err(e) => {
            let achieved = match e {
                HomologyError::RankDeficit { achieved, .. } => achieved,
                _ => oracle.h1,
            };
            timer.finish(
                "span",
                params,
                Status::Fail,
                json!({
                    "rank": achieved,
                    "oracle": {"h0": oracle.h0, "h1": oracle.h1},
                    "error": e.to_string(),
                }),
                seed,
            )
        }
    }
}

/// Homology dimensions from the cellular model.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleDims {
    pub h0: usize,
    pub h1: usize,
    pub h2: usize,
}

/// Twisted cellular chain complex of the double cover.
///
/// Cells: one vertex per branch point; the real-axis segments s_k = [k, k+1]
/// (s_N runs from N through ∞ back to 1) lift to two edges each, labelled by
/// the sheet on their upper side; each half-plane lifts to two faces. Every
/// cell's fibre is trivialized by the chart of its labelled sheet (vertices:
/// upper sheet, approached from above), and boundary blocks carry the
/// transport between charts.
pub struct CellComplex {
    pub d1: CycMatrix,
    pub d2: CycMatrix,
}

impl CellComplex {
    pub fn new(cfg: &BranchConfig, u: &CharOrbit) -> CellComplex {
        let np = cfg.num_points();
        let r = coefficient_dim(u);
        let z = zero_scalar(u.n);
        let id = Matrix::identity(r, &z);
        let pm = |m: usize| coefficient_matrix(u, &cfg.passing_of_cut(m));
        let pm_inv = |m: usize| coefficient_matrix(u, &cfg.passing_of_cut(m).inverse());
        // segment s_k (1-based) is a cut iff k is odd and k < N
        let is_cut = |k: usize| k % 2 == 1 && k < np;
        // sheet 0 = upper, 1 = lower
        let edge = |k: usize, s: usize| 2 * (k - 1) + s;
        let face = |half: usize, s: usize| 2 * half + s;
        let mut d1 = Matrix::zeros(np * r, 2 * np * r, &z);
        let mut d2 = Matrix::zeros(2 * np * r, 4 * r, &z);
        let put = |m: &mut CycMatrix, row: usize, col: usize, block: &CycMatrix, sign: i64| {
            for a in 0..r {
                for b in 0..r {
                    let v = &block[(a, b)];
                    if v.is_zero() {
                        continue;
                    }
                    let v = if sign < 0 { v.neg() } else { v.clone() };
                    m[(row * r + a, col * r + b)].add_assign(&v);
                }
            }
        };
        // transport from the chart of edge sheet s to the chart of vertex k
        let to_vertex = |k: usize, s: usize| if s == 0 { id.clone() } else { pm_inv(cut_of(k)) };
        for k in 1..=np {
            let next = if k == np { 1 } else { k + 1 };
            for s in 0..2 {
                let e = edge(k, s);
                put(&mut d1, next - 1, e, &to_vertex(next, s), 1);
                put(&mut d1, k - 1, e, &to_vertex(k, s), -1);
            }
        }
        for s in 0..2 {
            // upper half-plane: boundary is +Σ s_k, same chart
            for k in 1..=np {
                put(&mut d2, edge(k, s), face(0, s), &id, 1);
            }
            // lower half-plane: boundary is −Σ s_k; across a cut the edge above
            // lies on the other sheet
            for k in 1..=np {
                if is_cut(k) {
                    let m = k.div_ceil(2);
                    let (other, t) = if s == 1 { (0, pm_inv(m)) } else { (1, pm(m)) };
                    put(&mut d2, edge(k, other), face(1, s), &t, -1);
                } else {
                    put(&mut d2, edge(k, s), face(1, s), &id, -1);
                }
            }
        }
        CellComplex { d1, d2 }
    }

    pub fn boundary_squares_to_zero(&self) -> bool {
        self.d1.mul(&self.d2).is_zero()
    }

    pub fn dims(&self) -> OracleDims {
        let r1 = self.d1.rank();
        let r2 = self.d2.rank();
        OracleDims {
            h0: self.d1.rows() - r1,
            h1: self.d1.cols() - r1 - r2,
            h2: self.d2.cols() - r2,
        }
    }
}

/// (h0, h1, h2) of the cover with coefficients in W_u (or the trivial
/// rank-one system for the trivial orbit).
pub fn dimension_oracle(cfg: &BranchConfig, u: &CharOrbit) -> OracleDims {
    let cx = CellComplex::new(cfg, u);
    assert!(cx.boundary_squares_to_zero(), "cellular boundary does not square to zero");
    cx.dims()
}

/// Expected dimension by the Euler characteristic: 4g−4 or 2g.
pub fn expected_dim(g: u32, u: &CharOrbit) -> usize {
    if u.is_trivial() {
        2 * g as usize
    } else {
        4 * g as usize - 4
    }
}
