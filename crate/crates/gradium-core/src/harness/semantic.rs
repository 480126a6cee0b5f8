//! Environments of generated closed values for a context.

use rand::Rng;

use crate::coeffect_eval::{ceval_value, top_env, CEnv, CW};
use crate::coeffect_system::{elaborate_value, EVal};
use crate::diag::{step_budget, EvalError};
use crate::effect_eval::{eval_value, EEnv};
use crate::env::Env;
use crate::grading::{Algebra, CoeffectAlgebra, EffectAlgebra, GradeVec};
use crate::syntax::{Context, Value};

use super::{CoGen, EffGen, GenConfig};

/// Closed values, one per context entry, outermost first. Thunks wrap
/// generated computations of the expected type.
#[derive(Clone, Debug)]
pub enum SemanticEnv {
    Effect(Vec<Value>),
    Coeffect(Vec<EVal>),
}

impl SemanticEnv {
    pub fn len(&self) -> usize {
        match self {
            SemanticEnv::Effect(vs) => vs.len(),
            SemanticEnv::Coeffect(vs) => vs.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The evaluated environment for the effect evaluator.
    pub fn effect_env(&self, alg: &EffectAlgebra) -> Result<EEnv<'_>, EvalError> {
        let SemanticEnv::Effect(vs) = self else {
            return Err(EvalError::Refused("not an effect-mode environment".into()));
        };
        let ws = vs
            .iter()
            .map(|v| eval_value(alg, &Env::new(), v, step_budget()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Env::from_outer(ws))
    }

    /// The evaluated environment for the coeffect evaluators. When `junk`
    /// is given, slots it grades zero hold junk instead.
    pub fn coeffect_env(&self, alg: &CoeffectAlgebra, junk: Option<&GradeVec>) -> Result<CEnv<'_>, EvalError> {
        let SemanticEnv::Coeffect(vs) = self else {
            return Err(EvalError::Refused("not a coeffect-mode environment".into()));
        };
        let empty = GradeVec(Vec::new());
        let mut ws = Vec::with_capacity(vs.len());
        for (k, v) in vs.iter().enumerate() {
            let zero = junk.and_then(|gv| gv.get(k)).is_some_and(|g| alg.is_zero(g));
            ws.push(if zero { CW::Junk } else { ceval_value(alg, &empty, &Env::new(), v, step_budget())? });
        }
        Ok(top_env(ws))
    }
}

/// Generates a closed value of each context type.
pub fn gen_env(cfg: &GenConfig, ctx: &Context) -> SemanticEnv {
    let mut rng = cfg.at_seed(cfg.seed ^ 0x5eed_e1f0).rng();
    let depth = cfg.max_depth.min(2);
    match &cfg.algebra {
        Algebra::Effect(alg) => {
            let mut g = EffGen::new(alg, &mut rng, depth);
            SemanticEnv::Effect(ctx.entries.iter().map(|(_, a)| g.value(&[], a, depth)).collect())
        }
        Algebra::Coeffect(alg) => {
            let pool = cfg.coeffect_pool(alg);
            let mut g = CoGen::new(alg, &mut rng, pool, depth);
            let empty = Context::new();
            let vals = ctx
                .entries
                .iter()
                .map(|(_, a)| {
                    // a value that fails to elaborate falls back to the canonical one
                    let d = g.rng.gen_range(0..=depth);
                    let v = g.value(&[], a, d);
                    match elaborate_value(alg, &empty, &v) {
                        Ok((t, ev)) if t == *a => ev,
                        _ => elaborate_value(alg, &empty, &g.base_value(a)).expect("canonical values check").1,
                    }
                })
                .collect();
            SemanticEnv::Coeffect(vals)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{CompType, ValType};

    fn eff() -> GenConfig {
        GenConfig::new(Algebra::Effect(EffectAlgebra::nat_cost()))
    }

    #[test]
    fn unit_slot() {
        let ctx = Context::new().with("x", ValType::Unit);
        let env = gen_env(&eff(), &ctx);
        let alg = EffectAlgebra::nat_cost();
        let ws: Vec<String> = env.effect_env(&alg).unwrap().to_outer().iter().map(|w| w.to_string()).collect();
        assert_eq!(ws, ["()"]);
    }

    #[test]
    fn thunk_slot() {
        let ctx = Context::new().with("x", ValType::u(None, CompType::f(None, ValType::Unit)));
        let cfg = GenConfig { max_depth: 0, ..eff() };
        let env = gen_env(&cfg, &ctx);
        let alg = EffectAlgebra::nat_cost();
        let ws: Vec<String> = env.effect_env(&alg).unwrap().to_outer().iter().map(|w| w.to_string()).collect();
        assert_eq!(ws, ["clo([], {return ()})"]);
    }

    #[test]
    fn zero_slot_is_junk() {
        let alg = CoeffectAlgebra::nat_usage();
        let ctx = Context::new().with("x", ValType::Unit);
        let env = gen_env(&GenConfig::new(Algebra::Coeffect(alg.clone())), &ctx);
        let gv = GradeVec(vec![alg.zero()]);
        let ws: Vec<String> = env.coeffect_env(&alg, Some(&gv)).unwrap().to_outer().iter().map(|s| s.w.to_string()).collect();
        assert_eq!(ws, ["<junk>"]);
    }

    #[test]
    fn generated_thunks_recheck() {
        let alg = CoeffectAlgebra::nat_usage();
        for seed in 0..50 {
            let cfg = GenConfig::new(Algebra::Coeffect(alg.clone())).at_seed(seed);
            let g = super::super::gen_typed(&cfg);
            let env = gen_env(&cfg, &g.context);
            let SemanticEnv::Coeffect(vs) = &env else { panic!() };
            for (v, (_, a)) in vs.iter().zip(&g.context.entries) {
                let (t, _) = elaborate_value(&alg, &Context::new(), &v.erase()).unwrap();
                assert_eq!(&t, a);
            }
        }
    }
}
