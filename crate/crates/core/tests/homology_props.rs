use dhmono::curve::{BranchConfig, Preset};
use dhmono::exactmath::{CycScalar, Scalar};
use dhmono::homology::{build_basis, dimension_oracle, expected_dim, HomologyContext, TwistedCycle};
use dhmono::reps::{all_orbits, CharOrbit};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn combination(cands: &[TwistedCycle], rng: &mut ChaCha8Rng, zero: &CycScalar) -> (TwistedCycle, Vec<i64>) {
    let mut terms = Vec::new();
    let mut coeffs = vec![0; cands.len()];
    for _ in 0..3 {
        let k = rng.gen_range(0..cands.len());
        let c = rng.gen_range(-4..=4);
        coeffs[k] += c;
        let s = zero.from_i64_like(c);
        for t in &cands[k].terms {
            let mut t = t.clone();
            t.vector = t.vector.iter().map(|x| x.mul(&s)).collect();
            terms.push(t);
        }
    }
    (TwistedCycle { terms }, coeffs)
}

#[test]
fn pairing_is_antisymmetric_and_bilinear() {
    let cfg = BranchConfig::preset(6, 3, Preset::Irr).unwrap();
    let ctx = HomologyContext::new(&cfg, &CharOrbit::new(3, 1, 2));
    let cands = ctx.candidates();
    let z = ctx.zero();
    let mut rng = ChaCha8Rng::seed_from_u64(200);
    for _ in 0..200 {
        let (x, cx) = combination(&cands, &mut rng, &z);
        let (y, _) = combination(&cands, &mut rng, &z);
        let xy = ctx.intersection_pairing(&x, &y);
        assert_eq!(xy, ctx.intersection_pairing(&y, &x).neg());
        let mut expanded = z.clone();
        for (k, c) in cx.iter().enumerate() {
            if *c != 0 {
                let p = ctx.intersection_pairing(&cands[k], &y);
                expanded.add_assign(&p.mul(&z.from_i64_like(*c)));
            }
        }
        assert_eq!(xy, expanded);
    }
}

#[test]
fn basis_rank_matches_oracle_everywhere() {
    for g in [6, 7] {
        for n in [3, 5] {
            for preset in [Preset::Irr, Preset::Span, Preset::SpanBcEqual] {
                let cfg = BranchConfig::preset(g, n, preset).unwrap();
                for u in all_orbits(n) {
                    let oracle = dimension_oracle(&cfg, &u);
                    assert_eq!(oracle.h1, expected_dim(g, &u), "g={g} n={n} {preset} {u}");
                    let b = build_basis(&cfg, &u).unwrap();
                    assert_eq!(b.dim(), oracle.h1);
                    assert!(!b.gram.det().is_zero());
                }
            }
        }
    }
}

#[test]
fn coordinates_reproduce_pairings() {
    let cfg = BranchConfig::preset(7, 5, Preset::Span).unwrap();
    let b = build_basis(&cfg, &CharOrbit::new(5, 2, 1)).unwrap();
    for x in b.candidates.iter().step_by(7) {
        let coords = b.coords(x);
        for (t, bt) in b.basis.iter().enumerate() {
            let mut unit = vec![b.ctx.zero(); b.dim()];
            unit[t] = b.ctx.zero().one_like();
            assert_eq!(b.pair_coords(&coords, &unit), b.ctx.intersection_pairing(x, bt));
        }
    }
}

#[test]
fn euler_characteristic() {
    let cfg = BranchConfig::preset(6, 5, Preset::Irr).unwrap();
    for u in all_orbits(5) {
        let d = dimension_oracle(&cfg, &u);
        let dim_w = if u.is_trivial() { 1 } else { 2 };
        // the closed curve of genus g has Euler characteristic 2 − 2g
        assert_eq!(d.h0 as i64 - d.h1 as i64 + d.h2 as i64, dim_w * (2 - 2 * 6));
    }
}
