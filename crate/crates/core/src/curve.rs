//! Combinatorial model of the hyperelliptic double cover.
//!
//! Branch points sit at 1, …, N = 2g+2 on the real axis and cut C_m joins
//! 2m−1 to 2m. The sliced plane has two sheets; a path crossing a cut
//! changes sheet, and the coefficient of a local-system section is
//! multiplied on the left by P_m when going from the upper to the lower
//! sheet, by P_m⁻¹ when going back.
//!
//! The loop L_ij is a thin U-shaped polygon: it goes down just left of i,
//! runs along the bottom at depth d under all intermediate branch points,
//! comes up just right of j, and returns along a parallel inner track. It is
//! traversed clockwise from a base point on its deepest edge, which lies on
//! the upper sheet. Each loop gets its own offset δ and depth d so that the
//! polygons of different loops are in general position; coordinates are
//! scaled to integers so every intersection test is exact.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::exactmath::{CycMatrix, Matrix};
use crate::heisenberg::{dh_generate, dh_mul, DihedralElement};
use crate::reps::{gamma_pow, r_matrix, w_u_matrix, zero_scalar, CharOrbit};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("genus must be at least 6 (at least two branch cuts with trivial passing transformation are needed), got g = {0}")]
    GenusTooSmall(u32),
    #[error("n must be odd and at least 3, got n = {0}")]
    BadOrder(u32),
    #[error("the W_u matrices need a nontrivial orbit")]
    TrivialOrbit,
    #[error("preset span-bc-equal needs b = c, got u = {0}")]
    NotBcEqual(CharOrbit),
    #[error("expected {expected} passing transformations, got {got}")]
    WrongCutCount { expected: usize, got: usize },
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("invalid loop ({i},{j}) for {points} branch points")]
    BadLoop { i: usize, j: usize, points: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Preset {
    #[serde(rename = "irr")]
    Irr,
    #[serde(rename = "span")]
    Span,
    #[serde(rename = "span-bc-equal")]
    SpanBcEqual,
}

impl Preset {
    pub fn name(&self) -> &'static str {
        match self {
            Preset::Irr => "irr",
            Preset::Span => "span",
            Preset::SpanBcEqual => "span-bc-equal",
        }
    }

    pub fn parse(s: &str) -> Option<Preset> {
        match s {
            "irr" => Some(Preset::Irr),
            "span" => Some(Preset::Span),
            "span-bc-equal" => Some(Preset::SpanBcEqual),
            _ => None,
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Cut containing branch point k (1-based): ⌈k/2⌉.
pub fn cut_of(k: usize) -> usize {
    k.div_ceil(2)
}

/// Genus, group order and one passing transformation per cut.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchConfig {
    pub g: u32,
    pub n: u32,
    pub passing: Vec<DihedralElement>,
    pub preset: Option<Preset>,
    /// Soft violations found by validation (custom configurations only).
    pub warnings: Vec<String>,
}

fn check_order(n: u32) -> Result<(), CurveError> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(CurveError::BadOrder(n));
    }
    Ok(())
}

impl BranchConfig {
    /// Group-level preset configuration.
    pub fn preset(g: u32, n: u32, preset: Preset) -> Result<BranchConfig, CurveError> {
        if g < 6 {
            return Err(CurveError::GenusTooSmall(g));
        }
        check_order(n)?;
        let e = DihedralElement::identity(n);
        let s = DihedralElement::sigma(n);
        let a = DihedralElement::gen_a(n);
        let al = DihedralElement::gen_alpha(n);
        let as_ = dh_mul(&a, &s);
        let als = dh_mul(&al, &s);
        let head = match preset {
            Preset::Irr => vec![s, as_, als, a, al],
            Preset::Span => vec![a, al, as_, als, s],
            Preset::SpanBcEqual => vec![a, al, e, as_, als, s],
        };
        let mut passing = head;
        passing.resize(g as usize + 1, e);
        Ok(BranchConfig {
            g,
            n,
            passing,
            preset: Some(preset),
            warnings: Vec::new(),
        })
    }

    /// Arbitrary passing transformations; g ≥ 2 and n odd are enforced,
    /// the preset invariants only produce warnings.
    pub fn custom(g: u32, n: u32, passing: Vec<DihedralElement>) -> Result<BranchConfig, CurveError> {
        if g < 2 {
            return Err(CurveError::Invalid(format!("genus {g} < 2")));
        }
        check_order(n)?;
        if passing.len() != g as usize + 1 {
            return Err(CurveError::WrongCutCount {
                expected: g as usize + 1,
                got: passing.len(),
            });
        }
        if let Some(x) = passing.iter().find(|x| x.n() != n) {
            return Err(CurveError::Invalid(format!("passing element {x} has order {}", x.n())));
        }
        let mut cfg = BranchConfig {
            g,
            n,
            passing,
            preset: None,
            warnings: Vec::new(),
        };
        let ids = cfg.passing.iter().filter(|x| x.is_identity()).count();
        if ids < 2 {
            cfg.warnings
                .push(format!("only {ids} cut(s) with identity passing transformation"));
        }
        let order = image_subgroup(&cfg).len();
        let full = 2 * (n as usize).pow(3);
        if order != full {
            cfg.warnings
                .push(format!("loop monodromies generate a subgroup of order {order}, not {full}"));
        }
        Ok(cfg)
    }

    /// Parse {g, n, preset} or {g, n, passing: [{eps, lambda, a, alpha}, ...]}.
    pub fn from_json(v: &Value) -> Result<BranchConfig, CurveError> {
        let g = v["g"]
            .as_u64()
            .ok_or_else(|| CurveError::Invalid("missing integer g".into()))? as u32;
        let n = v["n"]
            .as_u64()
            .ok_or_else(|| CurveError::Invalid("missing integer n".into()))? as u32;
        if let Some(p) = v.get("preset").and_then(|p| p.as_str()) {
            let preset =
                Preset::parse(p).ok_or_else(|| CurveError::Invalid(format!("unknown preset {p}")))?;
            return Self::preset(g, n, preset);
        }
        let list = v["passing"]
            .as_array()
            .ok_or_else(|| CurveError::Invalid("need preset or passing".into()))?;
        check_order(n)?;
        let passing = list
            .iter()
            .map(|x| DihedralElement::from_json(n, x).map_err(|e| CurveError::Invalid(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::custom(g, n, passing)
    }

    pub fn to_json(&self) -> Value {
        match self.preset {
            Some(p) => json!({"g": self.g, "n": self.n, "preset": p.name()}),
            None => json!({
                "g": self.g,
                "n": self.n,
                "passing": self.passing.iter().map(|x| x.to_json()).collect::<Vec<_>>(),
            }),
        }
    }

    pub fn num_points(&self) -> usize {
        2 * self.g as usize + 2
    }

    pub fn num_cuts(&self) -> usize {
        self.g as usize + 1
    }

    /// Passing transformation of cut m (1-based).
    pub fn passing_of_cut(&self, m: usize) -> DihedralElement {
        self.passing[m - 1]
    }

    /// All loop index pairs (i, j), i < j, in lexicographic order.
    pub fn loop_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.num_points();
        (1..=n)
            .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
            .collect()
    }

    pub fn loop_spec(&self, i: usize, j: usize) -> Result<LoopSpec, CurveError> {
        LoopSpec::new(self, i, j)
    }

    pub fn loops(&self) -> Vec<LoopSpec> {
        self.loop_pairs()
            .into_iter()
            .map(|(i, j)| LoopSpec::new(self, i, j).expect("valid pair"))
            .collect()
    }
}

/// Coefficient matrix of a group element in the local system attached to
/// `u`: W_u for nontrivial orbits, the 1×1 identity for the trivial one.
pub fn coefficient_matrix(u: &CharOrbit, x: &DihedralElement) -> CycMatrix {
    if u.is_trivial() {
        Matrix::identity(1, &zero_scalar(u.n))
    } else {
        w_u_matrix(u, x)
    }
}

pub fn coefficient_dim(u: &CharOrbit) -> usize {
    if u.is_trivial() {
        1
    } else {
        2
    }
}

/// Per-cut W_u matrices of a preset, together with the group-level config.
pub fn preset_config(
    g: u32,
    n: u32,
    preset: Preset,
    u: &CharOrbit,
) -> Result<(BranchConfig, Vec<CycMatrix>), CurveError> {
    let cfg = BranchConfig::preset(g, n, preset)?;
    if u.is_trivial() {
        return Err(CurveError::TrivialOrbit);
    }
    if preset == Preset::SpanBcEqual && u.b != u.c {
        return Err(CurveError::NotBcEqual(*u));
    }
    let mats = cfg.passing.iter().map(|x| w_u_matrix(u, x)).collect();
    Ok((cfg, mats))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sheet {
    Upper,
    Lower,
}

impl Sheet {
    pub fn flip(self) -> Sheet {
        match self {
            Sheet::Upper => Sheet::Lower,
            Sheet::Lower => Sheet::Upper,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    UpperToLower,
    LowerToUpper,
}

/// Crossing of a cut by a loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutEvent {
    pub cut: usize,
    pub direction: Direction,
    /// Scaled x coordinate of the crossing.
    pub x: i64,
}

/// A straight piece of a loop lying on one sheet with constant transport.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Segment {
    pub from: (i64, i64),
    pub to: (i64, i64),
    pub sheet: Sheet,
    /// Group-level transport from the base point to this segment.
    pub transport: DihedralElement,
}

impl Segment {
    pub fn is_vertical(&self) -> bool {
        self.from.0 == self.to.0
    }

    pub fn direction(&self) -> (i64, i64) {
        (
            (self.to.0 - self.from.0).signum(),
            (self.to.1 - self.from.1).signum(),
        )
    }
}

/// Canonical loop L_ij with its planar data and cut-crossing events.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopSpec {
    pub i: usize,
    pub j: usize,
    /// Position in the lexicographic loop list; fixes δ and depth.
    pub index: usize,
    pub segments: Vec<Segment>,
    pub events: Vec<CutEvent>,
    /// Group-level monodromy: the ordered product over `events`.
    pub monodromy: DihedralElement,
}

impl LoopSpec {
    pub fn new(cfg: &BranchConfig, i: usize, j: usize) -> Result<LoopSpec, CurveError> {
        let np = cfg.num_points();
        if !(1 <= i && i < j && j <= np) {
            return Err(CurveError::BadLoop { i, j, points: np });
        }
        let total = np * (np - 1) / 2;
        let index = (1..i).map(|k| np - k).sum::<usize>() + (j - i - 1);
        let scale = 8 * (total as i64 + 1);
        let off = index as i64 + 1;
        let depth = scale * (1 + index as i64);
        let (xi, xj) = (scale * i as i64, scale * j as i64);
        // counter-clockwise vertex list V0..V7
        let v = [
            (xi - off, off),
            (xi - off, -depth - off),
            (xj + off, -depth - off),
            (xj + off, off),
            (xj - off, off),
            (xj - off, -depth + off),
            (xi + off, -depth + off),
            (xi + off, off),
        ];
        // clockwise traversal starting at V2
        let order = [2usize, 1, 0, 7, 6, 5, 4, 3, 2];
        let mut sheet = Sheet::Upper;
        let mut transport = DihedralElement::identity(cfg.n);
        let mut segments = Vec::new();
        let mut events = Vec::new();
        for w in order.windows(2) {
            let (a, b) = (v[w[0]], v[w[1]]);
            let crosses_axis = a.0 == b.0 && (a.1 > 0) != (b.1 > 0);
            if !crosses_axis {
                segments.push(Segment {
                    from: a,
                    to: b,
                    sheet,
                    transport,
                });
                continue;
            }
            let mid = (a.0, 0);
            segments.push(Segment {
                from: a,
                to: mid,
                sheet,
                transport,
            });
            // the crossing is inside a cut iff the point lies in some [2m−1, 2m]
            let x = a.0;
            let k = x.div_euclid(scale) as usize; // branch point just left of x
            let cut = if k >= 1 && k % 2 == 1 && (k as i64) * scale < x && (k + 1) <= np {
                Some(k.div_ceil(2))
            } else {
                None
            };
            if let Some(m) = cut {
                let p = cfg.passing_of_cut(m);
                let direction = match sheet {
                    Sheet::Upper => {
                        transport = dh_mul(&p, &transport);
                        Direction::UpperToLower
                    }
                    Sheet::Lower => {
                        transport = dh_mul(&p.inverse(), &transport);
                        Direction::LowerToUpper
                    }
                };
                sheet = sheet.flip();
                events.push(CutEvent { cut: m, direction, x });
            }
            segments.push(Segment {
                from: mid,
                to: b,
                sheet,
                transport,
            });
        }
        debug_assert_eq!(sheet, Sheet::Upper, "loop must close on its start sheet");
        Ok(LoopSpec {
            i,
            j,
            index,
            segments,
            events,
            monodromy: transport,
        })
    }

    pub fn events_json(&self) -> Value {
        json!({
            "i": self.i,
            "j": self.j,
            "events": self.events.iter().map(|e| json!({
                "cut": e.cut,
                "direction": match e.direction {
                    Direction::UpperToLower => "upper->lower",
                    Direction::LowerToUpper => "lower->upper",
                },
            })).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MonodromyKind {
    Identity,
    Reflection,
    Rotation,
}

/// M_ij in W_u together with its trichotomy class. `k` is the exponent in
/// M = P^k (Identity, Rotation) or M = P^k R (Reflection).
#[derive(Clone, Debug, PartialEq)]
pub struct MonodromyClass {
    pub kind: MonodromyKind,
    pub k: i64,
    pub matrix: CycMatrix,
    pub element: DihedralElement,
}

impl MonodromyClass {
    pub fn of_element(u: &CharOrbit, x: &DihedralElement) -> MonodromyClass {
        let n = u.n as i64;
        let k = (u.b as i64 * x.a() as i64 + u.c as i64 * x.alpha() as i64).rem_euclid(n);
        let kind = if x.eps == -1 {
            MonodromyKind::Reflection
        } else if k == 0 {
            MonodromyKind::Identity
        } else {
            MonodromyKind::Rotation
        };
        // on the trivial local system everything acts as the identity
        let kind = if u.is_trivial() { MonodromyKind::Identity } else { kind };
        MonodromyClass {
            kind,
            k,
            matrix: coefficient_matrix(u, x),
            element: *x,
        }
    }
}

pub fn loop_monodromy(cfg: &BranchConfig, u: &CharOrbit, i: usize, j: usize) -> Result<MonodromyClass, CurveError> {
    let l = cfg.loop_spec(i, j)?;
    Ok(MonodromyClass::of_element(u, &l.monodromy))
}

/// Space of coefficient vectors fixed by a monodromy.
#[derive(Clone, Debug, PartialEq)]
pub enum FixedSpace {
    WholePlane,
    Line(Vec<crate::exactmath::CycScalar>),
    Zero,
}

/// Identity: whole plane; Reflection P^kR: the line through (1+M)v₊ = (1, γ^{−k});
/// Rotation: nothing.
pub fn fixed_vector(mc: &MonodromyClass) -> FixedSpace {
    match mc.kind {
        MonodromyKind::Identity => FixedSpace::WholePlane,
        MonodromyKind::Rotation => FixedSpace::Zero,
        MonodromyKind::Reflection => {
            let n = mc.matrix[(0, 0)].order();
            FixedSpace::Line(vec![gamma_pow(n, 0), gamma_pow(n, -mc.k)])
        }
    }
}

/// Canonical W_u form of a 2×2 matrix: `Some((k, reflection))` when
/// M = P^k or M = P^k R.
pub fn classify_matrix(m: &CycMatrix) -> Option<(i64, bool)> {
    if m.rows() != 2 || m.cols() != 2 {
        return None;
    }
    let n = m[(0, 0)].order();
    for k in 0..n as i64 {
        let p = crate::reps::p_pow(n, k);
        if *m == p {
            return Some((k, false));
        }
        if *m == p.mul(&r_matrix(n)) {
            return Some((k, true));
        }
    }
    None
}

/// Subgroup of 𝔇H_n generated by the group-level loop monodromies.
pub fn image_subgroup(cfg: &BranchConfig) -> Vec<DihedralElement> {
    let gens: Vec<DihedralElement> = cfg.loops().iter().map(|l| l.monodromy).collect();
    dh_generate(&gens)
}
