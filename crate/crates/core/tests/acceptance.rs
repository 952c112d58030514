//! End-to-end acceptance run. Each criterion prints one PASS/FAIL line with
//! its runtime against the budget; the test fails if any line is FAIL.

use std::time::{Duration, Instant};

use dhmono::certificate::Status;
use dhmono::curve::{loop_monodromy, BranchConfig, FixedSpace, MonodromyKind, Preset};
use dhmono::density::{
    closures_for, component_separation, expected_trace, irreducibility_certificate, killing_status,
    lie_closure, open_orbit_rank, reduce_matrix, separation_triple, Factor, SEPARATION_PAIRS,
};
use dhmono::exactmath::{CycMatrix, CycScalar, CyclotomicField, CyclotomicReduction, Scalar};
use dhmono::heisenberg::DihedralElement;
use dhmono::homology::{build_basis, dimension_oracle, span_certificate};
use dhmono::reps::{
    ad_regular_decomposition, all_orbits, commutant_dimension, dihedral_schrodinger_matrix, nontrivial_orbits,
    p_pow, r_matrix, w_u_matrix, CharOrbit, Representation,
};
use dhmono::twist::{admissible_squares, braid_generators, dehn_twist_matrix, preserves_form};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn irr(n: u32) -> BranchConfig {
    BranchConfig::preset(6, n, Preset::Irr).unwrap()
}

fn c1_dimensions() -> Outcome {
    let cfg = irr(3);
    let mut total = 0;
    let mut dims = Vec::new();
    for u in all_orbits(3) {
        let b = build_basis(&cfg, &u).map_err(|e| e.to_string())?;
        let o = dimension_oracle(&cfg, &u);
        let want = if u.is_trivial() { 12 } else { 20 };
        ensure(b.dim() == want && o.h1 == want, || {
            format!("{u}: basis {} oracle {} expected {want}", b.dim(), o.h1)
        })?;
        total += b.dim();
        dims.push(format!("{u}:{}", b.dim()));
    }
    ensure(total == 2 * 5 * 9 + 2, || format!("total {total}"))?;
    Ok(format!("{} total {total}", dims.join(" ")))
}

fn c2_span() -> Outcome {
    let mut count = 0;
    for n in [3, 5] {
        for preset in [Preset::Irr, Preset::Span, Preset::SpanBcEqual] {
            let cfg = BranchConfig::preset(6, n, preset).unwrap();
            for u in nontrivial_orbits(n) {
                let c = span_certificate(&cfg, &u, 0);
                ensure(c.passed() && c.witness["rank"] == 20, || {
                    format!("{preset} n={n} {u}: {:?} rank {}", c.status, c.witness["rank"])
                })?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} (preset, orbit) pairs at rank 20"))
}

fn c3_pins() -> Outcome {
    let r = |n: u32| r_matrix(n);
    for u in nontrivial_orbits(3) {
        let (b, c) = (u.b as i64, u.c as i64);
        let m = |cfg: &BranchConfig, i, j| loop_monodromy(cfg, &u, i, j).unwrap().matrix;
        let cfg = irr(3);
        ensure(m(&cfg, 1, 2).is_identity(), || format!("{u}: M_12"))?;
        ensure(m(&cfg, 2, 11) == r(3), || format!("{u}: M_2,11"))?;
        ensure(m(&cfg, 2, 7) == p_pow(3, -b).mul(&r(3)), || format!("{u}: M_2,7"))?;
        let span = BranchConfig::preset(6, 3, Preset::Span).unwrap();
        ensure(m(&span, 2, 9) == r(3).mul(&p_pow(3, b)), || format!("{u}: M_2,9"))?;
        ensure(m(&span, 4, 9) == r(3).mul(&p_pow(3, c)), || format!("{u}: M_4,9"))?;
    }
    Ok("5 pinned monodromies on 4 orbits".into())
}

fn c4_jordan() -> Outcome {
    let cfg = irr(3);
    let mut checked = 0;
    for u in all_orbits(3) {
        let b = build_basis(&cfg, &u).map_err(|e| e.to_string())?;
        for t in admissible_squares(&b) {
            let a = t.nilpotent();
            let idx = b.ctx.table.loop_index(t.i, t.j).unwrap();
            let fixed = if u.is_trivial() {
                1
            } else {
                match dhmono::curve::fixed_vector(&b.ctx.classes[idx]) {
                    FixedSpace::WholePlane => 2,
                    FixedSpace::Line(_) => 1,
                    FixedSpace::Zero => 0,
                }
            };
            let want = match t.kind {
                MonodromyKind::Identity if !u.is_trivial() => 2,
                _ => 1,
            };
            ensure(fixed == want && a.rank() == want && a.mul(&a).is_zero(), || {
                format!("{u} A_({},{}) rank {} kind {:?}", t.i, t.j, a.rank(), t.kind)
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} operators"))
}

fn c5_braid() -> Outcome {
    let (_, ops) = braid_generators(6).map_err(|e| e.to_string())?;
    let t: Vec<&CycMatrix> = ops.iter().map(|o| &o.matrix).collect();
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            if j == i + 1 {
                ensure(t[i].mul(t[j]).mul(t[i]) == t[j].mul(t[i]).mul(t[j]), || {
                    format!("braid relation t{} t{}", i + 1, j + 1)
                })?;
            } else {
                ensure(t[i].mul(t[j]) == t[j].mul(t[i]), || format!("t{} t{} commute", i + 1, j + 1))?;
            }
        }
    }
    Ok(format!("{} generators", t.len()))
}

fn c6_symplectic() -> Outcome {
    let cfg = irr(3);
    let mut checked = 0;
    for u in all_orbits(3) {
        let b = build_basis(&cfg, &u).map_err(|e| e.to_string())?;
        for (i, j) in cfg.loop_pairs() {
            for power in [1, 2] {
                if let Ok(t) = dehn_twist_matrix(&b, i, j, power) {
                    ensure(preserves_form(&t.matrix, &b.gram), || format!("{u} D_({i},{j})^{power}"))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} twist operators"))
}

fn c7_traces() -> Outcome {
    let mut checked = 0;
    for n in [3, 5, 7] {
        let cfg = irr(n);
        for u in nontrivial_orbits(n) {
            let b = build_basis(&cfg, &u).map_err(|e| e.to_string())?;
            let t = separation_triple(&b).map_err(|e| e.to_string())?;
            for (k, &(i, j)) in SEPARATION_PAIRS.iter().enumerate() {
                ensure(t.traces[k] == expected_trace(&u, i, j), || {
                    format!("n={n} {u} ({i},{j}): {}", t.traces[k])
                })?;
                checked += 1;
            }
            if n == 3 && (u == CharOrbit::new(3, 1, 0) || u == CharOrbit::new(3, 0, 1)) {
                let s: Vec<String> = t.traces.iter().map(|x| x.to_string()).collect();
                let want = if u.b == 1 { ["1", "4", "1"] } else { ["4", "1", "1"] };
                ensure(s == want, || format!("{u}: triple {s:?}"))?;
            }
        }
    }
    Ok(format!("{checked} traces; n=3 triples (1,4,1) and (4,1,1)"))
}

fn c8_separation() -> Outcome {
    let mut pairs = 0;
    for n in [3, 5] {
        let cfg = irr(n);
        let orbits = nontrivial_orbits(n);
        let c = component_separation(&cfg, &orbits, 0);
        ensure(c.passed(), || format!("n={n}: {}", c.witness["collisions"]))?;
        let triples: Vec<_> = orbits
            .iter()
            .map(|u| separation_triple(&build_basis(&cfg, u).unwrap()).unwrap())
            .collect();
        for a in 0..triples.len() {
            for b in 0..triples.len() {
                let same = triples[a].traces == triples[b].traces;
                ensure(same == (a == b), || format!("n={n}: {} vs {}", orbits[a], orbits[b]))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} ordered orbit pairs"))
}

fn c9_irreducible() -> Outcome {
    for u in nontrivial_orbits(3) {
        let c = irreducibility_certificate(&irr(3), &u, 9);
        ensure(c.passed() && c.witness["rank_from_start"] == 20, || {
            format!("{u}: {:?} rank {}", c.status, c.witness["rank_from_start"])
        })?;
    }
    Ok("rank 20 from v L_(2,11) on 4 orbits".into())
}

fn c10_closure() -> Outcome {
    let (basis, ops) = braid_generators(6).map_err(|e| e.to_string())?;
    let red = CyclotomicReduction::new(3, 0);
    let gens: Vec<_> = ops.iter().map(|t| reduce_matrix(&t.nilpotent(), &red).unwrap()).collect();
    let untwisted = lie_closure(&gens, &reduce_matrix(&basis.gram, &red).unwrap(), vec![])
        .map_err(|e| e.to_string())?;
    ensure(untwisted.dim() == 78, || format!("untwisted closure {}", untwisted.dim()))?;
    let mut dims = vec![format!("untwisted:{}", untwisted.dim())];
    for u in all_orbits(3) {
        let f = Factor::new(&irr(3), &u).map_err(|e| e.to_string())?;
        let traceless = f.nilpotents().iter().all(|a| a.trace().is_zero());
        let c = dhmono::density::factor_closure(&f, 0).map_err(|e| e.to_string())?;
        let want = if u.is_trivial() { 78 } else { 210 };
        ensure(c.dim() == want && c.is_full(), || format!("{u}: closure {}", c.dim()))?;
        let (status, rank) = killing_status(&c.algebra, traceless);
        ensure(status == Status::Pass, || format!("{u}: traceless {traceless}, Killing rank {rank}"))?;
        dims.push(format!("{u}:{}", c.dim()));
    }
    Ok(dims.join(" "))
}

fn c11_open_orbit() -> Outcome {
    let factors = dhmono::density::build_factors(&irr(3), &all_orbits(3)).map_err(|e| e.to_string())?;
    let closures = closures_for(&factors).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let vectors: Vec<Vec<i64>> = factors
        .iter()
        .map(|f| (0..f.dim()).map(|_| rng.gen_range(-9..=9)).collect())
        .collect();
    let start = Instant::now();
    let r = open_orbit_rank(&factors, &closures, &vectors).map_err(|e| e.to_string())?;
    ensure(r.closures_full, || "closures not full".into())?;
    ensure(r.rank == 92 && r.expected == 92, || format!("rank {} of {}", r.rank, r.expected))?;
    let beyond = start.elapsed();
    ensure(beyond <= Duration::from_secs(60), || format!("rank check took {beyond:?}"))?;
    Ok(format!("rank 92 ({} ms beyond closure)", beyond.as_millis()))
}

fn c12_reps() -> Outcome {
    for n in [3, 5, 7] {
        let phi = Representation::dihedral_schrodinger(n);
        let d = commutant_dimension(&phi);
        ensure(d == 1, || format!("n={n}: commutant dim {d}"))?;
        let c = ad_regular_decomposition(n).map_err(|e| e.to_string())?;
        ensure(c.passed(), || format!("n={n}: {}", c.witness["failures"]))?;
    }
    Ok("commutant 1, regular decomposition with explicit eigenvectors, n = 3, 5, 7".into())
}

fn random_scalar(rng: &mut ChaCha8Rng, n: u32) -> CycScalar {
    let f = CyclotomicField::get(n).unwrap();
    let den = BigInt::from(rng.gen_range(1..=5));
    let coeffs: Vec<BigRational> = (0..f.degree())
        .map(|_| BigRational::new(BigInt::from(rng.gen_range(-9..=9)), den.clone()))
        .collect();
    CycScalar::from_coeffs(&f, &coeffs)
}

fn random_element(rng: &mut ChaCha8Rng, n: u32) -> DihedralElement {
    let m = n as i64;
    let eps = if rng.gen_bool(0.5) { 1 } else { -1 };
    DihedralElement::new(n, eps, rng.gen_range(0..m), rng.gen_range(0..m), rng.gen_range(0..m))
}

fn c13_fuzz() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for k in 0..1000 {
        let n = [3, 5, 15][k % 3];
        let (a, b, c) = (random_scalar(&mut rng, n), random_scalar(&mut rng, n), random_scalar(&mut rng, n));
        ensure(a.mul(&b.add(&c)) == a.mul(&b).add(&a.mul(&c)), || format!("distributivity #{k}"))?;
        ensure(a.mul(&b).mul(&c) == a.mul(&b.mul(&c)), || format!("associativity #{k}"))?;
        ensure(a.add(&b) == b.add(&a) && a.mul(&b) == b.mul(&a), || format!("commutativity #{k}"))?;
        if !a.is_zero() {
            ensure(a.mul(&a.inv().unwrap()).is_one(), || format!("inverse #{k}"))?;
        }
    }
    for k in 0..1000 {
        let n = [3, 5][k % 2];
        let (x, y) = (random_element(&mut rng, n), random_element(&mut rng, n));
        let xy = x.mul(&y).unwrap();
        ensure(
            dihedral_schrodinger_matrix(&xy) == dihedral_schrodinger_matrix(&x).mul(&dihedral_schrodinger_matrix(&y)),
            || format!("phi_{n} on pair #{k}"),
        )?;
        let u = nontrivial_orbits(n)[k % nontrivial_orbits(n).len()];
        ensure(w_u_matrix(&u, &xy) == w_u_matrix(&u, &x).mul(&w_u_matrix(&u, &y)), || {
            format!("W_{u} on pair #{k}")
        })?;
    }
    Ok("1000 field triples, 1000 homomorphism pairs".into())
}

#[test]
fn acceptance() {
    let criteria: Vec<(&str, fn() -> Outcome, Duration)> = vec![
        ("1 dimension bookkeeping", c1_dimensions, Duration::from_secs(5)),
        ("2 spanning by standard cycles", c2_span, Duration::from_secs(30)),
        ("3 monodromy pins", c3_pins, Duration::from_secs(1)),
        ("4 Jordan structure", c4_jordan, Duration::from_secs(30)),
        ("5 braid relations", c5_braid, Duration::from_secs(5)),
        ("6 symplectic invariance", c6_symplectic, Duration::from_secs(30)),
        ("7 trace formula", c7_traces, Duration::from_secs(10)),
        ("8 component separation", c8_separation, Duration::from_secs(60)),
        ("9 irreducibility", c9_irreducible, Duration::from_secs(60)),
        ("10 Lie closure", c10_closure, Duration::from_secs(15 * 60)),
        ("11 open orbit", c11_open_orbit, Duration::from_secs(15 * 60 + 60)),
        ("12 representation theory", c12_reps, Duration::from_secs(10)),
        ("13 fuzz invariants", c13_fuzz, Duration::from_secs(10)),
    ];
    let mut failed = Vec::new();
    for (name, f, budget) in criteria {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= budget => (true, d),
            Ok(d) => (false, format!("{d}; over time budget")),
            Err(e) => (false, e),
        };
        println!(
            "[{}] criterion {name}: {detail} ({:.2} s / {} s)",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
        if !ok {
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
