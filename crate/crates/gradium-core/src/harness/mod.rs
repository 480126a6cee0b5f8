//! Random well-typed programs, semantic environments, brute-force oracles
//! and the soundness property suites.

mod gen;
pub mod oracle;
mod semantic;
pub mod shrink;
mod src_gen;
mod suites;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeffect_system::co_infer_comp;
use crate::effect_system::infer_comp;
use crate::grading::{Algebra, CoeffectAlgebra, Effect, EffectAlgebra, Grade, GradeVec};
use crate::syntax::{Comp, CompType, Context, Mode, Name, ValType};

pub use gen::{CoGen, EffGen};
pub use semantic::{gen_env, SemanticEnv};
pub use src_gen::SrcGen;
pub use suites::{run_suite, run_suite_with, Exec, Failure, Suite, SuiteReport};

/// Everything that determines a batch of generated programs.
#[derive(Clone, Debug)]
pub struct GenConfig {
    pub seed: u64,
    pub max_depth: u32,
    /// Grades (or effects) annotations are drawn from.
    pub grade_pool: Vec<u64>,
    pub algebra: Algebra,
    pub trials: usize,
}

impl GenConfig {
    pub fn new(algebra: Algebra) -> Self {
        Self {
            seed: 0,
            max_depth: 3,
            grade_pool: vec![0, 1, 2],
            algebra,
            trials: 1000,
        }
    }

    pub fn mode(&self) -> Mode {
        match self.algebra {
            Algebra::Effect(_) => Mode::Effect,
            Algebra::Coeffect(_) => Mode::Coeffect,
        }
    }

    /// The same configuration at another seed.
    pub fn at_seed(&self, seed: u64) -> Self {
        Self { seed, ..self.clone() }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    fn coeffect_pool(&self, alg: &CoeffectAlgebra) -> Vec<Grade> {
        let mut pool: Vec<Grade> = self.grade_pool.iter().map(|&n| alg.nat(n)).collect();
        pool.dedup();
        pool
    }
}

/// The grading a generated term was checked at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GradeInfo {
    Effect(Effect),
    Vector(GradeVec),
}

/// A generated program together with its inferred judgement.
#[derive(Clone, Debug)]
pub struct Generated {
    pub context: Context,
    pub comp: Comp,
    pub ty: CompType,
    pub grading: GradeInfo,
}

/// Which programs to generate.
#[derive(Clone, Debug, Default)]
pub struct Shape {
    /// Generate a random context rather than an empty one.
    pub open: bool,
    /// Goal type; random when absent.
    pub goal: Option<CompType>,
    /// Restrict random goals to returners `F A`.
    pub returner: bool,
}

const RETRIES: usize = 16;

/// A well-typed program drawn from `cfg`'s seed.
pub fn gen_typed(cfg: &GenConfig) -> Generated {
    gen_shaped(cfg, &Shape { open: true, ..Shape::default() })
}

/// A well-typed program of the requested shape. Generation is goal
/// directed; a result that fails to re-check is discarded and retried, and
/// after a bounded number of retries the goal's canonical inhabitant is used.
pub fn gen_shaped(cfg: &GenConfig, shape: &Shape) -> Generated {
    let mut rng = cfg.rng();
    match &cfg.algebra {
        Algebra::Effect(alg) => gen_effect(cfg, alg, &mut rng, shape),
        Algebra::Coeffect(alg) => gen_coeffect(cfg, alg, &mut rng, shape),
    }
}

fn context_of(tys: &[ValType]) -> Context {
    let mut c = Context::new();
    for (k, t) in tys.iter().enumerate() {
        c.push(Name::new(format!("x{k}")), t.clone());
    }
    c
}

fn gen_effect(cfg: &GenConfig, alg: &EffectAlgebra, rng: &mut ChaCha8Rng, shape: &Shape) -> Generated {
    let mut g = EffGen::new(alg, rng, cfg.max_depth);
    let n_ctx = if shape.open { g.rng.gen_range(0..=2) } else { 0 };
    let scope: Vec<ValType> = (0..n_ctx).map(|_| g.val_type(1)).collect();
    let goal = match (&shape.goal, shape.returner) {
        (Some(b), _) => b.clone(),
        (None, true) => CompType::f(None, g.val_type(2)),
        (None, false) => g.comp_type(2),
    };
    let context = context_of(&scope);
    let pool = if cfg.grade_pool.is_empty() { vec![0] } else { cfg.grade_pool.clone() };
    for _ in 0..RETRIES {
        let n = *pool.choose(g.rng).unwrap();
        let m = g.comp(&scope, &goal, n, cfg.max_depth);
        if let Ok((ty, e)) = infer_comp(alg, &context, &m) {
            if ty == goal {
                return Generated { context, comp: m, ty, grading: GradeInfo::Effect(e) };
            }
        }
    }
    let m = g.base(&scope, &goal, 0);
    let (ty, e) = infer_comp(alg, &context, &m).expect("canonical inhabitants check");
    Generated { context, comp: m, ty, grading: GradeInfo::Effect(e) }
}

fn gen_coeffect(cfg: &GenConfig, alg: &CoeffectAlgebra, rng: &mut ChaCha8Rng, shape: &Shape) -> Generated {
    let pool = cfg.coeffect_pool(alg);
    let mut g = CoGen::new(alg, rng, pool, cfg.max_depth);
    let n_ctx = if shape.open { g.rng.gen_range(0..=2) } else { 0 };
    let scope: Vec<ValType> = (0..n_ctx).map(|_| g.val_type(1)).collect();
    let goal = match (&shape.goal, shape.returner) {
        (Some(b), _) => b.clone(),
        (None, true) => {
            let q = g.comp_type(0);
            match q {
                CompType::F(q, _) => CompType::f(q, g.val_type(2)),
                other => other,
            }
        }
        (None, false) => g.comp_type(2),
    };
    let context = context_of(&scope);
    for _ in 0..RETRIES {
        let m = g.comp(&scope, &goal, cfg.max_depth);
        if let Ok((ty, gv)) = co_infer_comp(alg, &context, &m) {
            if ty == goal {
                return Generated { context, comp: m, ty, grading: GradeInfo::Vector(gv) };
            }
        }
    }
    let m = g.comp(&scope, &goal, 0);
    let (ty, gv) = co_infer_comp(alg, &context, &m).expect("canonical inhabitants check");
    Generated { context, comp: m, ty, grading: GradeInfo::Vector(gv) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffect_system::co_check;
    use crate::effect_system::check_comp;
    use crate::syntax::{show_comp, Term};

    fn eff_cfg(seed: u64) -> GenConfig {
        GenConfig::new(Algebra::Effect(EffectAlgebra::nat_cost())).at_seed(seed)
    }

    fn co_cfg(seed: u64) -> GenConfig {
        GenConfig::new(Algebra::Coeffect(CoeffectAlgebra::nat_usage())).at_seed(seed)
    }

    #[test]
    fn depth_zero_unit_returner() {
        let cfg = GenConfig { max_depth: 0, grade_pool: vec![0], ..eff_cfg(1) };
        let shape = Shape { open: false, goal: Some(CompType::f(None, ValType::Unit)), returner: true };
        let g = gen_shaped(&cfg, &shape);
        assert_eq!(show_comp(&g.comp, &[]), "return ()");
    }

    #[test]
    fn same_seed_same_term() {
        for seed in 0..20 {
            assert_eq!(gen_typed(&eff_cfg(seed)).comp, gen_typed(&eff_cfg(seed)).comp);
            assert_eq!(gen_typed(&co_cfg(seed)).comp, gen_typed(&co_cfg(seed)).comp);
        }
    }

    #[test]
    fn effect_outputs_recheck() {
        let alg = EffectAlgebra::nat_cost();
        for seed in 0..300 {
            let g = gen_typed(&eff_cfg(seed));
            let GradeInfo::Effect(e) = g.grading else { panic!() };
            check_comp(&alg, &g.context, &g.comp, &g.ty, e).unwrap();
        }
    }

    #[test]
    fn coeffect_outputs_recheck() {
        let alg = CoeffectAlgebra::nat_usage();
        for seed in 0..300 {
            let g = gen_typed(&co_cfg(seed));
            let GradeInfo::Vector(gv) = &g.grading else { panic!() };
            co_check(&alg, &g.context, &Term::Comp(g.comp.clone()), gv).unwrap();
        }
    }

    #[test]
    fn every_coeffect_algebra_generates() {
        for name in ["nat-usage", "nat-exact", "zero-one-many"] {
            let alg = CoeffectAlgebra::by_name(name).unwrap();
            for seed in 0..200 {
                let cfg = GenConfig::new(Algebra::Coeffect(alg.clone())).at_seed(seed);
                let g = gen_typed(&cfg);
                let GradeInfo::Vector(gv) = &g.grading else { panic!() };
                co_check(&alg, &g.context, &Term::Comp(g.comp.clone()), gv).unwrap();
                gen_env(&cfg, &g.context);
            }
        }
    }

    #[test]
    fn generated_terms_are_not_trivial() {
        let sizes: Vec<usize> = (0..200).map(|s| gen_typed(&co_cfg(s)).comp.size()).collect();
        let big = sizes.iter().filter(|&&n| n >= 6).count();
        assert!(big > 60, "only {big} of 200 coeffect terms have six or more nodes");
        let sizes: Vec<usize> = (0..200).map(|s| gen_typed(&eff_cfg(s)).comp.size()).collect();
        let big = sizes.iter().filter(|&&n| n >= 6).count();
        assert!(big > 60, "only {big} of 200 effect terms have six or more nodes");
    }
}
