use proptest::prelude::*;

use gradium::coeffect_eval::{run, RunOptions, Semantics};
use gradium::coeffect_system::{co_check, elaborate};
use gradium::diag::step_budget;
use gradium::effect_eval::eval_comp;
use gradium::effect_system::check_comp;
use gradium::grading::{Algebra, CoeffectAlgebra, EffectAlgebra, GradeVec};
use gradium::harness::shrink::shrink;
use gradium::harness::{gen_env, gen_shaped, gen_typed, GenConfig, GradeInfo, Shape, SrcGen};
use gradium::syntax::{parse_comp, show_comp, Comp, Grades, Term};
use gradium::translate::{check_preservation, Dialect};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn coeffect_algebras() -> impl Strategy<Value = CoeffectAlgebra> {
    prop_oneof![
        Just(CoeffectAlgebra::nat_usage()),
        Just(CoeffectAlgebra::nat_exact()),
        Just(CoeffectAlgebra::zero_one_many()),
    ]
}

fn effect_algebras() -> impl Strategy<Value = EffectAlgebra> {
    prop_oneof![Just(EffectAlgebra::nat_cost()), Just(EffectAlgebra::nat_exact())]
}

fn effect_cfg(seed: u64) -> (EffectAlgebra, GenConfig) {
    let alg = EffectAlgebra::nat_cost();
    (alg.clone(), GenConfig { seed, ..GenConfig::new(Algebra::Effect(alg)) })
}

fn coeffect_cfg(alg: &CoeffectAlgebra, seed: u64) -> GenConfig {
    GenConfig { seed, ..GenConfig::new(Algebra::Coeffect(alg.clone())) }
}

fn returner() -> Shape {
    Shape { returner: true, ..Shape::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn semiring_laws(alg in coeffect_algebras(), a in 0u64..6, b in 0u64..6, c in 0u64..6) {
        let (a, b, c) = (alg.nat(a), alg.nat(b), alg.nat(c));
        let add = |x, y| alg.add(x, y).unwrap();
        let mul = |x, y| alg.mul(x, y).unwrap();
        prop_assert_eq!(add(add(a, b), c), add(a, add(b, c)));
        prop_assert_eq!(add(a, b), add(b, a));
        prop_assert_eq!(add(a, alg.zero()), a);
        prop_assert_eq!(mul(mul(a, b), c), mul(a, mul(b, c)));
        prop_assert_eq!(mul(a, alg.one()), a);
        prop_assert_eq!(mul(alg.one(), a), a);
        prop_assert_eq!(mul(a, alg.zero()), alg.zero());
        prop_assert_eq!(mul(a, add(b, c)), add(mul(a, b), mul(a, c)));
        prop_assert_eq!(mul(add(a, b), c), add(mul(a, c), mul(b, c)));
        if alg.leq(a, b).unwrap() {
            prop_assert!(alg.leq(add(a, c), add(b, c)).unwrap());
            prop_assert!(alg.leq(mul(a, c), mul(b, c)).unwrap());
            prop_assert!(alg.leq(mul(c, a), mul(c, b)).unwrap());
            if alg.leq(b, c).unwrap() {
                prop_assert!(alg.leq(a, c).unwrap());
            }
        }
        prop_assert!(alg.leq(a, a).unwrap());
    }

    #[test]
    fn monoid_laws(alg in effect_algebras(), a in 0u64..6, b in 0u64..6, c in 0u64..6) {
        let (a, b, c) = (alg.nat(a), alg.nat(b), alg.nat(c));
        let seq = |x, y| alg.combine(x, y).unwrap();
        prop_assert_eq!(seq(seq(a, b), c), seq(a, seq(b, c)));
        prop_assert_eq!(seq(a, alg.unit()), a);
        prop_assert_eq!(seq(alg.unit(), a), a);
        prop_assert!(alg.leq(a, a).unwrap());
        if alg.leq(a, b).unwrap() {
            prop_assert!(alg.leq(seq(a, c), seq(b, c)).unwrap());
            prop_assert!(alg.leq(seq(c, a), seq(c, b)).unwrap());
        }
    }

    #[test]
    fn printing_round_trips(seed in any::<u64>(), effect in any::<bool>()) {
        let ea = EffectAlgebra::nat_cost();
        let ca = CoeffectAlgebra::nat_usage();
        let (g, grades) = if effect {
            (gen_typed(&effect_cfg(seed).1), Grades::Effect(&ea))
        } else {
            (gen_typed(&coeffect_cfg(&ca, seed)), Grades::Coeffect(&ca))
        };
        let names = g.context.names();
        let text = show_comp(&g.comp, &names);
        let back = parse_comp(&text, grades, &names).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
        prop_assert_eq!(show_comp(&back, &names), text);
    }

    #[test]
    fn evaluation_is_deterministic_and_within_bound(seed in any::<u64>()) {
        let (alg, cfg) = effect_cfg(seed);
        let g = gen_shaped(&cfg, &returner());
        let GradeInfo::Effect(bound) = g.grading else { unreachable!() };
        let env = gen_env(&cfg, &g.context);
        let env = env.effect_env(&alg).unwrap();
        let a = eval_comp(&alg, &env, &g.comp, step_budget()).unwrap();
        let b = eval_comp(&alg, &env, &g.comp, step_budget()).unwrap();
        prop_assert!(alg.leq(a.1, bound).unwrap());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn effect_bounds_weaken(seed in any::<u64>(), extra in 0u64..4) {
        let (alg, cfg) = effect_cfg(seed);
        let g = gen_typed(&cfg);
        let GradeInfo::Effect(e) = g.grading else { unreachable!() };
        let looser = alg.combine(e, alg.nat(extra)).unwrap();
        prop_assert!(check_comp(&alg, &g.context, &g.comp, &g.ty, looser).is_ok());
    }

    #[test]
    fn grade_vectors_weaken(seed in any::<u64>(), bump in proptest::collection::vec(0u64..3, 0..6)) {
        let alg = CoeffectAlgebra::nat_usage();
        let g = gen_typed(&coeffect_cfg(&alg, seed));
        let GradeInfo::Vector(gv) = g.grading else { unreachable!() };
        let weak = GradeVec(gv.0.iter().enumerate().map(|(i, &q)| {
            alg.add(q, alg.nat(bump.get(i).copied().unwrap_or(0))).unwrap()
        }).collect());
        prop_assert!(co_check(&alg, &g.context, &Term::Comp(g.comp.clone()), &weak).is_ok());
    }

    #[test]
    fn resource_runs_stay_within_grades(seed in any::<u64>()) {
        let alg = CoeffectAlgebra::nat_usage();
        let cfg = coeffect_cfg(&alg, seed);
        let g = gen_shaped(&cfg, &Shape { open: true, returner: true, ..Shape::default() });
        let el = elaborate(&alg, &g.context, &g.comp).unwrap();
        let senv = gen_env(&cfg, &g.context);
        let env = senv.coeffect_env(&alg, Some(&el.comp.gv)).unwrap();
        let out = run(&alg, Semantics::Resource, &el.comp.gv, &env, &el.comp, RunOptions { usage: true, ..Default::default() }).unwrap();
        for (used, q) in out.usage.unwrap().iter().zip(&el.comp.gv.0) {
            prop_assert!(*used <= q.raw());
        }
    }

    #[test]
    fn shrinking_keeps_the_failure(seed in any::<u64>(), min in 1usize..6) {
        let (_, cfg) = effect_cfg(seed);
        let g = gen_typed(&cfg);
        let fails = |m: &Comp| m.size() >= min;
        prop_assume!(fails(&g.comp));
        let small = shrink(&g.comp, fails);
        prop_assert!(fails(&small));
        prop_assert!(small.size() <= g.comp.size());
    }

    #[test]
    fn translations_preserve_typing(seed in any::<u64>(), k in 0usize..7) {
        let d = Dialect::ALL[k];
        let ea = EffectAlgebra::nat_cost();
        let ca = CoeffectAlgebra::nat_usage();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pool = vec![ca.nat(0), ca.nat(1), ca.nat(2)];
        let mut sg = SrcGen::new(d, &ea, &ca, &mut rng, pool);
        let ctx = sg.context(2);
        let ty = sg.ty(2);
        let e = sg.term(&ctx, &ty, 3);
        let grades = sg.grades();
        prop_assert!(check_preservation(d, grades, &ctx, &e).is_ok(), "{d}: {e}");
    }
}
