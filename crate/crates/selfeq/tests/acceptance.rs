// SPDX-License-Identifier: MIT

//! Acceptance suite: twelve end-to-end criteria, one test each.
//!
//! Every test prints a single `criterion NN pass` line with its runtime and
//! enforces a wall-clock budget, so `cargo test --test acceptance` doubles
//! as a readable checklist.  The criteria cover model validation, homotopy
//! ranks, the worked three-cell/four-cell/four-attach tables, integer mode,
//! the wedge baseline, formality grading, the duality scaling lemma,
//! c-symplectic detection, connected sums, and the axiom property suites.

use std::time::{Duration, Instant};

use num::{BigInt, Zero};
use selfeq::dgl::{
    cp_space, four_attach_space, four_cell_space, mimura_toda_space, three_cell_space, DglModel,
    SpaceSpec,
};
use selfeq::glie::{LieCtx, LieElt};
use selfeq::sul::{
    builtin_pd_suite, check_algebra_map, connected_sum, connected_sum_sullivan, cp1cp1_algebra,
    cp_algebra, csymplectic_check, formality_two_stage, free_sullivan, hp_algebra, is_bijective,
    omega_scale, pd_check, render_model_diffs, s2s4_algebra, sphere_algebra,
    sullivan_diagonal_nse, wedge_nse, GCAlgebra, SplitMix,
};
use selfeq::{cli, endo, qi, Q};

fn budget(t: Instant, secs: u64, line: &str) {
    let elapsed = t.elapsed();
    assert!(
        elapsed < Duration::from_secs(secs),
        "{line} exceeded its {secs} s budget: {elapsed:?}"
    );
    println!("{line} pass ({elapsed:.2?})");
}

fn builtin(name: &str) -> SpaceSpec {
    cli::builtin_space(name)
        .unwrap_or_else(|e| panic!("{name}: {e}"))
        .unwrap_or_else(|| panic!("{name} is not a built-in space"))
}

fn model_of(spec: &SpaceSpec) -> DglModel {
    DglModel::from_space(spec).unwrap_or_else(|e| panic!("{}: {e}", spec.name))
}

/// Every built-in family member the registry and the builders expose.
fn all_builtin_specs() -> Vec<SpaceSpec> {
    let mut specs: Vec<SpaceSpec> = Vec::new();
    for n in 2..=12u32 {
        specs.push(builtin(&format!("S{n}")));
    }
    for n in 1..=5u32 {
        specs.push(cp_space(n).expect("CP^n builds for n <= 5"));
    }
    for (a, b) in [(1, 1), (1, 0), (0, 1), (0, 0), (2, 3), (-1, 1)] {
        specs.push(three_cell_space(a, b));
    }
    for (a, b, c) in [(1, 1, 1), (1, 0, 1), (0, 1, 0), (0, 0, 0)] {
        specs.push(four_cell_space(a, b, c));
    }
    for (a, b) in [(1, 1), (1, 0), (0, 1), (0, 0)] {
        specs.push(four_attach_space(a, b));
    }
    for (a, b, c) in [(1, 1, 1), (0, 0, 0)] {
        specs.push(mimura_toda_space(a, b, c));
    }
    specs.push(builtin("wedge(S3,S5,S12)"));
    specs
}

#[test]
fn criterion_01_quillen_models_validate() {
    let t = Instant::now();
    for spec in &all_builtin_specs() {
        let m = model_of(spec);
        m.validate().unwrap_or_else(|e| panic!("{}: {e}", spec.name));
    }

    // The projective-space differentials carry the classic coefficients
    // ∂u₅ = 3[u₁,u₃], ∂u₇ = 4[u₁,u₅] + 3[u₃,u₃], ∂u₉ = 5[u₁,u₇] + 10[u₃,u₅].
    let m = model_of(&cp_space(5).unwrap());
    let gens = &m.ctx.gens;
    let g = |n: &str| gens.by_name(n).unwrap_or_else(|| panic!("generator {n}"));
    let elt = |n: &str| LieElt::gen(gens, g(n));
    let br = |a: &LieElt<Q>, b: &LieElt<Q>| m.ctx.bracket(a, b);
    assert_eq!(*m.diff(g("u3")), br(&elt("u1"), &elt("u1")));
    assert_eq!(*m.diff(g("u5")), br(&elt("u1"), &elt("u3")).scale_q(&qi(3)));
    assert_eq!(
        *m.diff(g("u7")),
        br(&elt("u1"), &elt("u5"))
            .scale_q(&qi(4))
            .add(&br(&elt("u3"), &elt("u3")).scale_q(&qi(3)))
    );
    assert_eq!(
        *m.diff(g("u9")),
        br(&elt("u1"), &elt("u7"))
            .scale_q(&qi(5))
            .add(&br(&elt("u3"), &elt("u5")).scale_q(&qi(10)))
    );
    budget(t, 5, "criterion 01 (Quillen model validation, d^2 = 0)");
}

#[test]
fn criterion_02_rational_homotopy_ranks() {
    let t = Instant::now();
    // k runs through 12: pi_ranks(dmax) reports k = d + 1 up to dmax + 1.
    let ranks = |spec: &SpaceSpec| -> Vec<(u32, usize)> {
        model_of(spec)
            .pi_ranks(11)
            .into_iter()
            .filter(|&(_, r)| r > 0)
            .collect()
    };
    for n in [2u32, 4, 6, 8, 10, 12] {
        let mut want = vec![(n, 1)];
        if 2 * n - 1 <= 12 {
            want.push((2 * n - 1, 1));
        }
        assert_eq!(ranks(&builtin(&format!("S{n}"))), want, "S^{n}");
    }
    for n in [3u32, 5, 7, 9, 11] {
        assert_eq!(ranks(&builtin(&format!("S{n}"))), vec![(n, 1)], "S^{n}");
    }
    assert_eq!(ranks(&cp_space(2).unwrap()), vec![(2, 1), (5, 1)], "CP^2");
    budget(t, 5, "criterion 02 (rational homotopy ranks through degree 12)");
}

#[test]
fn criterion_03_three_cell_example() {
    let t = Instant::now();
    let model = model_of(&three_cell_space(1, 1));
    let pmap = endo::parametrize(&model);
    let cs = endo::derive_constraints(&model, &pmap);
    let ms = endo::diagonal_system(&model, &cs).unwrap();
    let eqs: Vec<String> = ms.eqs.iter().map(|e| ms.render_eq(e)).collect();
    // With λ = l(a), μ = l(b), κ = l(w): κ = λμ² and κ = λ³μ.
    assert_eq!(eqs, ["l(w) = l(a)*l(b)^2", "l(w) = l(a)^3*l(b)"]);

    let rep = endo::nse(&model).unwrap();
    assert_eq!(rep.value, 5);
    assert_eq!(rep.status, endo::NseStatus::Certified);
    // The verified witness is diagonal with λ = 1, μ = κ = 0: it keeps a
    // and kills b and w, and is sharp at k = 4.
    assert!(rep
        .witnesses
        .iter()
        .any(|w| w.k == 4 && w.pattern == [true, false, false] && w.verified));

    for (a, b, want) in [(1, 1, 5), (1, 0, 5), (0, 1, 5), (0, 0, 12)] {
        let m = model_of(&three_cell_space(a, b));
        assert_eq!(endo::nse(&m).unwrap().value, want, "three-cell({a},{b})");
    }
    budget(t, 10, "criterion 03 (three-cell constraint system and table)");
}

#[test]
fn criterion_04_four_cell_table() {
    let t = Instant::now();
    let cases = [
        ((1, 1, 1), 2, 1),
        ((1, 0, 1), 3, 2),
        ((0, 1, 0), 4, 3),
        ((0, 0, 0), 6, 4),
    ];
    for ((a, b, c), value, rank) in cases {
        let rep = endo::nse(&model_of(&four_cell_space(a, b, c))).unwrap();
        assert_eq!(rep.value, value, "four-cell({a},{b},{c}) value");
        assert_eq!(rep.group.rank, rank, "four-cell({a},{b},{c}) group rank");
        assert_eq!(rep.group.torsion_z2, 0, "four-cell({a},{b},{c}) torsion");
    }
    budget(t, 10, "criterion 04 (four-cell table: ranks 1,2,3,4; values 2,3,4,6)");
}

#[test]
fn criterion_05_four_attach_table() {
    let t = Instant::now();
    let cases = [((1, 1), 2, 1), ((1, 0), 3, 2), ((0, 1), 3, 2), ((0, 0), 10, 3)];
    for ((a, b), value, rank) in cases {
        let rep = endo::nse(&model_of(&four_attach_space(a, b))).unwrap();
        assert_eq!(rep.value, value, "four-attach({a},{b}) value");
        assert_eq!(rep.group.rank, rank, "four-attach({a},{b}) group rank");
    }
    budget(t, 10, "criterion 05 (four-attach table: ranks 1,2,2,3; values 2,3,3,10)");
}

#[test]
fn criterion_06_integer_mode_on_the_twelve_cell() {
    let t = Instant::now();
    let model = model_of(&mimura_toda_space(1, 1, 1));
    let pmap = endo::parametrize(&model);
    let cs = endo::derive_constraints(&model, &pmap);
    let ms = endo::diagonal_system(&model, &cs).unwrap();
    let eqs: Vec<String> = ms.eqs.iter().map(|e| ms.render_eq(e)).collect();
    // With λ = l(u1), μ = l(u2), s = l(u11) and l(u3) = λ² substituted,
    // the top equations read s = λ⁶μ = λ²μ⁴ = λ⁵μ².
    assert_eq!(
        eqs,
        [
            "l(u3) = l(u1)^2",
            "l(u11) = l(u1)^2*l(u2)*l(u3)^2",
            "l(u11) = l(u1)^2*l(u2)^4",
            "l(u11) = l(u1)^3*l(u2)^2*l(u3)",
        ]
    );

    let int = endo::integer_monomial_analyze(&ms, 100).unwrap();
    assert_eq!(int.kind, endo::IntKind::UnitsOnly);
    assert!(int.complete, "the all-nonzero solution set is COMPLETE");
    assert!(int.unique);
    assert_eq!(int.solutions, vec![vec![BigInt::from(1); 4]]);
    budget(t, 2, "criterion 06 (integer mode: all-nonzero solutions = units only)");
}

#[test]
fn criterion_07_wedge_baseline() {
    let t = Instant::now();
    let rep = endo::nse(&model_of(&builtin("wedge(S3,S5,S12)"))).unwrap();
    assert_eq!(rep.value, 12);
    assert_eq!(rep.status, endo::NseStatus::Certified);
    assert!(rep.split);

    let free = free_sullivan("SvSvS", &[("a", 3), ("b", 5), ("c", 12)]);
    let srep = sullivan_diagonal_nse(&free).unwrap();
    assert_eq!(srep.value, 12);
    assert_eq!(srep.status, endo::NseStatus::Certified);
    budget(t, 2, "criterion 07 (wedge baseline: both sides give 12)");
}

#[test]
fn criterion_08_formality_grading() {
    let t = Instant::now();
    for (a, b) in [(1, 1), (1, 0), (0, 1)] {
        let rep = formality_two_stage(&three_cell_space(a, b)).unwrap();
        assert!(!rep.formal, "three-cell({a},{b}) is not formal");
        assert_eq!((rep.n, rep.value), (12, 5));
        assert!(!rep.splits);
    }
    let rep = formality_two_stage(&three_cell_space(0, 0)).unwrap();
    assert!(rep.formal && rep.splits);
    assert_eq!(rep.value, rep.n, "formal here means the value reaches n");

    let err = formality_two_stage(&cp_space(2).unwrap()).unwrap_err();
    assert_eq!(err.to_string(), "hypotheses not satisfied: 2H_*-dim(B)=4=n");
    budget(t, 5, "criterion 08 (formality: grades the three-cell family, rejects CP^2)");
}

#[test]
fn criterion_09_duality_scaling_lemma() {
    let t = Instant::now();
    let suite = builtin_pd_suite(2024, 200).unwrap();
    assert_eq!(suite.len(), 7, "CP^2..CP^5, S^2xS^4, CP^2#CP^2, CP^4#HP^2");
    let mut checked = 0usize;
    for (algebra, endos) in &suite {
        let pd = pd_check(algebra).unwrap();
        assert!(pd.holds, "{} satisfies duality", algebra.name);
        assert_eq!(endos.len(), 200);
        for f in endos {
            check_algebra_map(algebra, f)
                .unwrap_or_else(|e| panic!("{}: not an algebra map: {e}", algebra.name));
            let lambda = omega_scale(algebra, f, pd.omega);
            let bij = is_bijective(algebra, f);
            assert_eq!(
                !lambda.is_zero(),
                bij,
                "{}: f(Ω) = {lambda}·Ω disagrees with bijectivity",
                algebra.name
            );
            checked += 1;
        }
    }
    assert_eq!(checked, 1400);
    budget(t, 30, "criterion 09 (duality lemma: scaling <=> bijective, 7x200 endos)");
}

#[test]
fn criterion_10_c_symplectic_detection() {
    let t = Instant::now();
    for n in 2..=5u32 {
        let rep = csymplectic_check(&cp_algebra(n)).unwrap();
        assert!(rep.csymplectic, "CP^{n}");
        assert!(rep.witness.is_some());
        assert_eq!(rep.verdict, "c-symplectic; hence N𝓔(X₀)=2");
    }
    assert!(!csymplectic_check(&s2s4_algebra()).unwrap().csymplectic);
    assert!(!csymplectic_check(&sphere_algebra(6)).unwrap().csymplectic);
    budget(t, 5, "criterion 10 (c-symplectic: CP^n yes with witness, S^2xS^4/S^6 no)");
}

#[test]
fn criterion_11_connected_sums() {
    let t = Instant::now();
    let sm = connected_sum_sullivan(2, 5, 4, 3).unwrap();
    assert_eq!(
        render_model_diffs(&sm),
        ["d(x) = 0", "d(y) = 0", "d(u) = x*y", "d(v) = x^4 - y^2"]
    );
    let target = connected_sum(&cp_algebra(4), &hp_algebra(2)).unwrap();
    assert_eq!(sm.cohomology(), target.dims_by_degree(), "degrees 0..=8");
    assert_eq!(sullivan_diagonal_nse(&sm).unwrap().value, 2);

    // The sum never needs more than the wedge.  Eligible pairs share a top
    // dimension, have distinct generator degrees (the diagonal wedge method
    // refuses same-degree generators), and have truncation heights >= 3
    // (the sum model builder refuses sphere factors), so this is every
    // built-in duality pair both sides can analyze, in both orders.
    let pairs = [
        (2, 5, 4, 3), // CP^4 # HP^2
        (4, 3, 2, 5), // HP^2 # CP^4
        (2, 7, 4, 4), // CP^6 # HP^3
        (4, 4, 2, 7), // HP^3 # CP^6
    ];
    for (xd, k, yd, m) in pairs {
        let sharp = sullivan_diagonal_nse(&connected_sum_sullivan(xd, k, yd, m).unwrap())
            .unwrap_or_else(|e| panic!("sharp({xd},{k},{yd},{m}): {e}"));
        let wedge = wedge_nse(xd, k, yd, m)
            .unwrap_or_else(|e| panic!("wedge({xd},{k},{yd},{m}): {e}"));
        assert!(
            sharp.value <= wedge.value,
            "pair ({xd},{k},{yd},{m}): sum {} exceeds wedge {}",
            sharp.value,
            wedge.value
        );
    }
    budget(t, 15, "criterion 11 (connected sums: model cohomology, value 2, sum <= wedge)");
}

// ---------------------------------------------------------------------------
// Criterion 12: axiom property suites.
// ---------------------------------------------------------------------------

/// Nonzero rational in −4 ..= 4.
fn nonzero_coeff(rng: &mut SplitMix) -> Q {
    loop {
        let c = rng.small_int();
        if c != 0 {
            return qi(c);
        }
    }
}

/// Random homogeneous Lie element: up to three canonical basis words of one
/// degree near the bottom of the algebra, with small nonzero coefficients.
fn random_lie_elt(ctx: &LieCtx, rng: &mut SplitMix, degree: u32) -> LieElt<Q> {
    let basis = ctx.basis(degree);
    let mut out = LieElt::zero(degree);
    for _ in 0..3 {
        let w = basis.words[(rng.next_u64() % basis.words.len() as u64) as usize].clone();
        out.add_term(w, nonzero_coeff(rng));
    }
    out
}

/// Lowest three degrees with nonzero components, scanning a short window
/// above the smallest generator degree.
fn sample_degrees(ctx: &LieCtx, dmin: u32) -> Vec<u32> {
    (dmin..dmin + 8)
        .filter(|&d| ctx.dimension(d) > 0)
        .take(3)
        .collect()
}

#[test]
fn criterion_12_axiom_property_suites() {
    let t = Instant::now();

    // Lie side: graded antisymmetry, the graded Jacobi identity, and
    // bilinearity on 1000 seeded random elements per built-in model.
    let specs = [
        builtin("S4"),
        cp_space(3).unwrap(),
        three_cell_space(1, 1),
        four_cell_space(1, 1, 1),
        four_attach_space(0, 1),
        mimura_toda_space(1, 1, 1),
        builtin("wedge(S3,S5,S12)"),
    ];
    for spec in &specs {
        let model = model_of(spec);
        let ctx = &model.ctx;
        let dmin = *ctx.gens.degrees().iter().min().unwrap();
        let degrees = sample_degrees(ctx, dmin);
        let mut rng = SplitMix(0x5EED ^ spec.name.len() as u64);
        let mut drawn = 0usize;
        while drawn < 1000 {
            let da = degrees[(rng.next_u64() % degrees.len() as u64) as usize];
            let dc = degrees[(rng.next_u64() % degrees.len() as u64) as usize];
            let x = random_lie_elt(ctx, &mut rng, da);
            let y = random_lie_elt(ctx, &mut rng, da);
            let z = random_lie_elt(ctx, &mut rng, dc);
            drawn += 3;

            // [x,y] + (−1)^{|x||y|} [y,x] = 0, with |x| = |y| = da here.
            let koszul = qi(if da % 2 == 1 { -1 } else { 1 });
            let anti = ctx.bracket(&x, &y).add(&ctx.bracket(&y, &x).scale_q(&koszul));
            assert!(anti.is_zero(), "{}: antisymmetry fails", spec.name);

            // [x,[y,z]] = [[x,y],z] + (−1)^{|x||y|} [y,[x,z]].
            let lhs = ctx.bracket(&x, &ctx.bracket(&y, &z));
            let rhs = ctx
                .bracket(&ctx.bracket(&x, &y), &z)
                .add(&ctx.bracket(&y, &ctx.bracket(&x, &z)).scale_q(&koszul));
            assert!(lhs.sub(&rhs).is_zero(), "{}: Jacobi fails", spec.name);

            // [x+y, z] = [x,z] + [y,z].
            let bil = ctx
                .bracket(&x.add(&y), &z)
                .sub(&ctx.bracket(&x, &z))
                .sub(&ctx.bracket(&y, &z));
            assert!(bil.is_zero(), "{}: bilinearity fails", spec.name);
        }
    }

    // Algebra side: unit law, graded commutativity with the Koszul sign,
    // associativity, and distributivity on 1000 seeded random homogeneous
    // elements per built-in algebra; `validate` re-checks every basis triple.
    let algebras: Vec<GCAlgebra> = vec![
        cp_algebra(2),
        cp_algebra(5),
        hp_algebra(2),
        sphere_algebra(6),
        s2s4_algebra(),
        cp1cp1_algebra(),
        connected_sum(&cp_algebra(2), &cp_algebra(2)).unwrap(),
        connected_sum(&cp_algebra(4), &hp_algebra(2)).unwrap(),
    ];
    for a in &algebras {
        a.validate().unwrap_or_else(|e| panic!("{}: {e}", a.name));
        let mut degs: Vec<u32> = a.degrees.iter().copied().filter(|&d| d > 0).collect();
        degs.sort_unstable();
        degs.dedup();
        let one = a.basis_vec(0);
        let mut rng = SplitMix(0xA19EB ^ a.name.len() as u64);
        let draw = |rng: &mut SplitMix, d: u32| -> Vec<Q> {
            let mut v = vec![Q::zero(); a.dim()];
            for i in a.basis_in_degree(d) {
                v[i] = qi(rng.small_int());
            }
            v
        };
        let add = |u: &[Q], v: &[Q]| -> Vec<Q> {
            u.iter().zip(v).map(|(p, q2)| p + q2).collect::<Vec<Q>>()
        };
        let mut drawn = 0usize;
        while drawn < 1000 {
            let da = degs[(rng.next_u64() % degs.len() as u64) as usize];
            let db = degs[(rng.next_u64() % degs.len() as u64) as usize];
            let x = draw(&mut rng, da);
            let x2 = draw(&mut rng, da);
            let y = draw(&mut rng, db);
            drawn += 3;

            assert_eq!(a.mul(&one, &x), x, "{}: unit law fails", a.name);

            // x·y = (−1)^{|x||y|} y·x.
            let sign = qi(if da % 2 == 1 && db % 2 == 1 { -1 } else { 1 });
            let yx: Vec<Q> = a.mul(&y, &x).iter().map(|c| c * &sign).collect();
            assert_eq!(a.mul(&x, &y), yx, "{}: commutativity fails", a.name);

            // (x·y)·x₂ = x·(y·x₂).
            assert_eq!(
                a.mul(&a.mul(&x, &y), &x2),
                a.mul(&x, &a.mul(&y, &x2)),
                "{}: associativity fails",
                a.name
            );

            // (x + x₂)·y = x·y + x₂·y.
            assert_eq!(
                a.mul(&add(&x, &x2), &y),
                add(&a.mul(&x, &y), &a.mul(&x2, &y)),
                "{}: distributivity fails",
                a.name
            );
        }
    }
    budget(t, 60, "criterion 12 (axiom property suites: 1000 elements per built-in)");
}
