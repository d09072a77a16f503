//! Executable catalogue of the axiom schemata (basic system plus the
//! high-threshold extension) and the randomized validity harness.

mod harness;

pub use harness::{
    negative_control_suite, soundness_suite, Counterexample, NegativeControl, SchemaReport,
    SoundnessReport,
};

use crate::rat::{in_high_interval, in_unit_interval, rat_to_formula_string, rat_zero, Rat};
use crate::syntax::{Agent, Formula, Term};
use thiserror::Error;

/// The fourteen axiom schemata plus the necessitation rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SchemaId {
    Taut,
    EqRef,
    EqSym,
    EqTrans,
    EqSub,
    KMon,
    KImp,
    KExcl,
    KZero,
    KEqSub1,
    KvEqSub1,
    KSub1,
    KAdd1,
    KvMon,
    NecK,
}

impl SchemaId {
    /// The axiom schemata (everything except the necessitation rule), in
    /// catalogue order.
    pub const AXIOMS: [SchemaId; 14] = [
        SchemaId::Taut,
        SchemaId::EqRef,
        SchemaId::EqSym,
        SchemaId::EqTrans,
        SchemaId::EqSub,
        SchemaId::KMon,
        SchemaId::KImp,
        SchemaId::KExcl,
        SchemaId::KZero,
        SchemaId::KEqSub1,
        SchemaId::KvEqSub1,
        SchemaId::KSub1,
        SchemaId::KAdd1,
        SchemaId::KvMon,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SchemaId::Taut => "TAUT",
            SchemaId::EqRef => "EqRef",
            SchemaId::EqSym => "EqSym",
            SchemaId::EqTrans => "EqTrans",
            SchemaId::EqSub => "EqSub",
            SchemaId::KMon => "KMon",
            SchemaId::KImp => "KImp",
            SchemaId::KExcl => "KExcl",
            SchemaId::KZero => "KZero",
            SchemaId::KEqSub1 => "KEqSub1",
            SchemaId::KvEqSub1 => "KvEqSub1",
            SchemaId::KSub1 => "KSub1",
            SchemaId::KAdd1 => "KAdd1",
            SchemaId::KvMon => "KvMon",
            SchemaId::NecK => "NecK",
        }
    }
}

impl std::fmt::Display for SchemaId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Bound parameters for a schema instance. Each schema reads the slots it
/// needs: `terms` in t, s, u order, `thresholds` in the order the schema
/// text names them, `formulas` as phi, psi. `variant` selects a tautology
/// template for TAUT.
#[derive(Debug, Clone, Default)]
pub struct SchemaParams {
    pub agent: Option<Agent>,
    pub terms: Vec<Term>,
    pub thresholds: Vec<Rat>,
    pub formulas: Vec<Formula>,
    pub variant: usize,
}

/// A fully instantiated schema.
#[derive(Debug, Clone)]
pub struct SchemaInstance {
    pub schema: SchemaId,
    pub params: SchemaParams,
    pub result: Formula,
}

impl SchemaInstance {
    /// Instantiates the schema, checking its side conditions.
    pub fn new(schema: SchemaId, params: SchemaParams) -> Result<Self, SchemaError> {
        let result = instantiate(schema, &params)?;
        Ok(SchemaInstance {
            schema,
            params,
            result,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("{schema} side condition violated: {condition}")]
    SideConditionViolated { schema: SchemaId, condition: String },
    #[error("{schema} is missing parameter: {what}")]
    MissingParameter { schema: SchemaId, what: &'static str },
}

pub const TAUT_TEMPLATE_COUNT: usize = 6;

/// Applies the necessitation rule: from `f`, conclude `K_i^theta f`. The
/// constructor does not check that the premise is valid; the harness
/// establishes that before treating the conclusion as valid.
pub fn necessitation(f: Formula, agent: Agent, theta: Rat) -> Formula {
    Formula::k(agent, theta, f)
}

pub fn instantiate(schema: SchemaId, params: &SchemaParams) -> Result<Formula, SchemaError> {
    Instantiation { schema, params }.build()
}

struct Instantiation<'a> {
    schema: SchemaId,
    params: &'a SchemaParams,
}

impl<'a> Instantiation<'a> {
    fn build(&self) -> Result<Formula, SchemaError> {
        match self.schema {
            SchemaId::Taut => self.taut(),
            SchemaId::EqRef => {
                let t = self.term(0, "term t")?;
                Ok(Formula::eq(t.clone(), t))
            }
            SchemaId::EqSym => {
                let (t, s) = (self.term(0, "term t")?, self.term(1, "term s")?);
                Ok(Formula::imp(
                    Formula::eq(t.clone(), s.clone()),
                    Formula::eq(s, t),
                ))
            }
            SchemaId::EqTrans => {
                let (t, s, u) = (
                    self.term(0, "term t")?,
                    self.term(1, "term s")?,
                    self.term(2, "term u")?,
                );
                Ok(Formula::imp(
                    Formula::and(
                        Formula::eq(t.clone(), s.clone()),
                        Formula::eq(s, u.clone()),
                    ),
                    Formula::eq(t, u),
                ))
            }
            SchemaId::EqSub => {
                let (t, s, u) = (
                    self.term(0, "term t")?,
                    self.term(1, "term s")?,
                    self.term(2, "term u")?,
                );
                Ok(Formula::imp(
                    Formula::eq(t.clone(), s.clone()),
                    Formula::iff(Formula::eq(t, u.clone()), Formula::eq(s, u)),
                ))
            }
            SchemaId::KMon => {
                let agent = self.agent()?;
                let theta = self.unit_threshold(0, "theta")?;
                let theta_hi = self.unit_threshold(1, "theta'")?;
                if theta > theta_hi {
                    return self.violated(format!(
                        "theta <= theta' required, got {} > {}",
                        rat_to_formula_string(&theta),
                        rat_to_formula_string(&theta_hi)
                    ));
                }
                let phi = self.formula(0, "phi")?;
                Ok(Formula::imp(
                    Formula::k(agent, theta_hi, phi.clone()),
                    Formula::k(agent, theta, phi),
                ))
            }
            SchemaId::KImp => {
                let agent = self.agent()?;
                let alpha = self.unit_threshold(0, "alpha")?;
                let beta = self.unit_threshold(1, "beta")?;
                let phi = self.formula(0, "phi")?;
                let psi = self.formula(1, "psi")?;
                let gamma = (&alpha + &beta - crate::rat::rat_one()).max(rat_zero());
                Ok(Formula::imp(
                    Formula::k(agent, alpha, Formula::imp(phi.clone(), psi.clone())),
                    Formula::imp(
                        Formula::k(agent, beta, phi),
                        Formula::k(agent, gamma, psi),
                    ),
                ))
            }
            SchemaId::KExcl => {
                let agent = self.agent()?;
                let alpha = self.unit_threshold(0, "alpha")?;
                let beta = self.unit_threshold(1, "beta")?;
                if &alpha + &beta <= crate::rat::rat_one() {
                    return self.violated(format!(
                        "alpha + beta > 1 required, got {} + {}",
                        rat_to_formula_string(&alpha),
                        rat_to_formula_string(&beta)
                    ));
                }
                let phi = self.formula(0, "phi")?;
                Ok(Formula::imp(
                    Formula::k(agent, alpha, phi.clone()),
                    Formula::not(Formula::k(agent, beta, Formula::not(phi))),
                ))
            }
            SchemaId::KZero => {
                let agent = self.agent()?;
                let phi = self.formula(0, "phi")?;
                Ok(Formula::k(agent, rat_zero(), phi))
            }
            SchemaId::KEqSub1 => {
                let agent = self.agent()?;
                let theta = self.unit_threshold(0, "theta")?;
                let (t, s, u) = (
                    self.term(0, "term t")?,
                    self.term(1, "term s")?,
                    self.term(2, "term u")?,
                );
                Ok(Formula::imp(
                    Formula::k(agent, crate::rat::rat_one(), Formula::eq(t.clone(), s.clone())),
                    Formula::iff(
                        Formula::k(agent, theta.clone(), Formula::eq(t, u.clone())),
                        Formula::k(agent, theta, Formula::eq(s, u)),
                    ),
                ))
            }
            SchemaId::KvEqSub1 => {
                let agent = self.agent()?;
                let eta = self.high_threshold(0, "eta")?;
                let (t, s) = (self.term(0, "term t")?, self.term(1, "term s")?);
                Ok(Formula::imp(
                    Formula::k(agent, crate::rat::rat_one(), Formula::eq(t.clone(), s.clone())),
                    Formula::iff(
                        Formula::kv(agent, eta.clone(), t),
                        Formula::kv(agent, eta, s),
                    ),
                ))
            }
            SchemaId::KSub1 => {
                let agent = self.agent()?;
                let theta = self.unit_threshold(0, "theta")?;
                let phi = self.formula(0, "phi")?;
                let psi = self.formula(1, "psi")?;
                Ok(Formula::imp(
                    Formula::k(
                        agent,
                        crate::rat::rat_one(),
                        Formula::iff(phi.clone(), psi.clone()),
                    ),
                    Formula::iff(
                        Formula::k(agent, theta.clone(), phi),
                        Formula::k(agent, theta, psi),
                    ),
                ))
            }
            SchemaId::KAdd1 => {
                let agent = self.agent()?;
                let alpha = self.unit_threshold(0, "alpha")?;
                let beta = self.unit_threshold(1, "beta")?;
                if &alpha + &beta > crate::rat::rat_one() {
                    return self.violated(format!(
                        "alpha + beta <= 1 required, got {} + {}",
                        rat_to_formula_string(&alpha),
                        rat_to_formula_string(&beta)
                    ));
                }
                let phi = self.formula(0, "phi")?;
                let psi = self.formula(1, "psi")?;
                let sum = &alpha + &beta;
                Ok(Formula::imp(
                    Formula::and(
                        Formula::and(
                            Formula::k(agent, alpha, phi.clone()),
                            Formula::k(agent, beta, psi.clone()),
                        ),
                        Formula::k(
                            agent,
                            crate::rat::rat_one(),
                            Formula::not(Formula::and(phi.clone(), psi.clone())),
                        ),
                    ),
                    Formula::k(agent, sum, Formula::or(phi, psi)),
                ))
            }
            SchemaId::KvMon => {
                let agent = self.agent()?;
                let eta = self.high_threshold(0, "eta")?;
                let zeta = self.high_threshold(1, "zeta")?;
                if zeta > eta {
                    return self.violated(format!(
                        "1/2 < zeta <= eta required, got zeta {} > eta {}",
                        rat_to_formula_string(&zeta),
                        rat_to_formula_string(&eta)
                    ));
                }
                let t = self.term(0, "term t")?;
                Ok(Formula::imp(
                    Formula::kv(agent, eta, t.clone()),
                    Formula::kv(agent, zeta, t),
                ))
            }
            SchemaId::NecK => {
                let agent = self.agent()?;
                let theta = self.unit_threshold(0, "theta")?;
                let phi = self.formula(0, "phi")?;
                Ok(necessitation(phi, agent, theta))
            }
        }
    }

    fn taut(&self) -> Result<Formula, SchemaError> {
        let phi = self.formula(0, "phi")?;
        let psi = self
            .formula(1, "psi")
            .unwrap_or_else(|_| Formula::atom("q"));
        Ok(match self.params.variant % TAUT_TEMPLATE_COUNT {
            0 => Formula::imp(phi.clone(), phi),
            // Peirce's law
            1 => Formula::imp(
                Formula::imp(Formula::imp(phi.clone(), psi), phi.clone()),
                phi,
            ),
            2 => Formula::iff(
                Formula::not(Formula::and(phi.clone(), psi.clone())),
                Formula::or(Formula::not(phi), Formula::not(psi)),
            ),
            3 => Formula::iff(
                Formula::not(Formula::or(phi.clone(), psi.clone())),
                Formula::and(Formula::not(phi), Formula::not(psi)),
            ),
            4 => Formula::or(phi.clone(), Formula::not(phi)),
            _ => Formula::iff(
                Formula::imp(phi.clone(), psi.clone()),
                Formula::imp(Formula::not(psi), Formula::not(phi)),
            ),
        })
    }

    fn violated(&self, condition: String) -> Result<Formula, SchemaError> {
        Err(SchemaError::SideConditionViolated {
            schema: self.schema,
            condition,
        })
    }

    fn agent(&self) -> Result<Agent, SchemaError> {
        self.params.agent.ok_or(SchemaError::MissingParameter {
            schema: self.schema,
            what: "agent",
        })
    }

    fn term(&self, ix: usize, what: &'static str) -> Result<Term, SchemaError> {
        self.params
            .terms
            .get(ix)
            .cloned()
            .ok_or(SchemaError::MissingParameter {
                schema: self.schema,
                what,
            })
    }

    fn formula(&self, ix: usize, what: &'static str) -> Result<Formula, SchemaError> {
        self.params
            .formulas
            .get(ix)
            .cloned()
            .ok_or(SchemaError::MissingParameter {
                schema: self.schema,
                what,
            })
    }

    fn threshold(&self, ix: usize, what: &'static str) -> Result<Rat, SchemaError> {
        self.params
            .thresholds
            .get(ix)
            .cloned()
            .ok_or(SchemaError::MissingParameter {
                schema: self.schema,
                what,
            })
    }

    fn unit_threshold(&self, ix: usize, what: &'static str) -> Result<Rat, SchemaError> {
        let r = self.threshold(ix, what)?;
        if !in_unit_interval(&r) {
            return Err(SchemaError::SideConditionViolated {
                schema: self.schema,
                condition: format!("{what} must lie in [0,1], got {}", rat_to_formula_string(&r)),
            });
        }
        Ok(r)
    }

    fn high_threshold(&self, ix: usize, what: &'static str) -> Result<Rat, SchemaError> {
        let r = self.threshold(ix, what)?;
        if !in_high_interval(&r) {
            return Err(SchemaError::SideConditionViolated {
                schema: self.schema,
                condition: format!(
                    "{what} must lie in (1/2,1], got {}",
                    rat_to_formula_string(&r)
                ),
            });
        }
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;
    use crate::syntax::{parse, print};

    fn params() -> SchemaParams {
        SchemaParams {
            agent: Some(Agent::new(1)),
            terms: vec![Term::new("t"), Term::new("s"), Term::new("u")],
            thresholds: vec![],
            formulas: vec![Formula::atom("p"), Formula::atom("q")],
            variant: 0,
        }
    }

    #[test]
    fn kimp_threshold_arithmetic() {
        let mut p = params();
        p.thresholds = vec![rat(4, 5), rat(7, 10)];
        let f = instantiate(SchemaId::KImp, &p).unwrap();
        // max{0, 4/5 + 7/10 - 1} = 1/2
        assert_eq!(
            f,
            parse("(K_1^{4/5}(p -> q) -> (K_1^{7/10}p -> K_1^{1/2}q))").unwrap()
        );
    }

    #[test]
    fn kexcl_requires_sum_above_one() {
        let mut p = params();
        p.thresholds = vec![rat(1, 2), rat(1, 2)];
        match instantiate(SchemaId::KExcl, &p) {
            Err(SchemaError::SideConditionViolated { schema, condition }) => {
                assert_eq!(schema, SchemaId::KExcl);
                assert!(condition.contains("alpha + beta > 1"));
            }
            other => panic!("expected side-condition violation, got {other:?}"),
        }
    }

    #[test]
    fn kvmon_instance() {
        let mut p = params();
        p.thresholds = vec![rat(3, 4), rat(3, 5)];
        let f = instantiate(SchemaId::KvMon, &p).unwrap();
        assert_eq!(print(&f), "(Kv_1^{3/4}(t) -> Kv_1^{3/5}(t))");
    }

    #[test]
    fn kvmon_rejects_increasing_thresholds() {
        let mut p = params();
        p.thresholds = vec![rat(3, 5), rat(3, 4)];
        assert!(matches!(
            instantiate(SchemaId::KvMon, &p),
            Err(SchemaError::SideConditionViolated { .. })
        ));
    }

    #[test]
    fn kadd1_requires_sum_at_most_one() {
        let mut p = params();
        p.thresholds = vec![rat(2, 3), rat(2, 3)];
        assert!(matches!(
            instantiate(SchemaId::KAdd1, &p),
            Err(SchemaError::SideConditionViolated { .. })
        ));
    }

    #[test]
    fn necessitation_examples() {
        let p = Formula::atom("p");
        let taut = Formula::or(p.clone(), Formula::not(p.clone()));
        assert_eq!(
            print(&necessitation(taut, Agent::new(1), rat(1, 1))),
            "K_1^{1}(~p -> ~p)"
        );
        assert_eq!(
            print(&necessitation(
                Formula::eq(Term::new("t"), Term::new("t")),
                Agent::new(2),
                rat(1, 2)
            )),
            "K_2^{1/2}t = t"
        );
        // Well-formed output even though the premise is not valid.
        assert_eq!(
            print(&necessitation(p, Agent::new(1), rat(1, 1))),
            "K_1^{1}p"
        );
    }

    #[test]
    fn eq_schemata_shapes() {
        let p = params();
        assert_eq!(print(&instantiate(SchemaId::EqRef, &p).unwrap()), "t = t");
        assert_eq!(
            print(&instantiate(SchemaId::EqSym, &p).unwrap()),
            "(t = s -> s = t)"
        );
        let trans = instantiate(SchemaId::EqTrans, &p).unwrap();
        assert_eq!(
            trans,
            Formula::imp(
                Formula::and(
                    Formula::eq(Term::new("t"), Term::new("s")),
                    Formula::eq(Term::new("s"), Term::new("u"))
                ),
                Formula::eq(Term::new("t"), Term::new("u"))
            )
        );
    }

    #[test]
    fn taut_templates_cover_all_variants() {
        for variant in 0..TAUT_TEMPLATE_COUNT {
            let mut p = params();
            p.variant = variant;
            let f = instantiate(SchemaId::Taut, &p).unwrap();
            assert!(f.thresholds_well_formed());
        }
    }

    #[test]
    fn schema_instance_bundles_parameters_with_result() {
        let mut p = params();
        p.thresholds = vec![rat(1, 2), rat(3, 4)];
        let instance = SchemaInstance::new(SchemaId::KMon, p).unwrap();
        assert_eq!(instance.schema, SchemaId::KMon);
        assert_eq!(instance.result, instantiate(SchemaId::KMon, &instance.params).unwrap());
        // Side conditions propagate through the bundled constructor too.
        let mut bad = params();
        bad.thresholds = vec![rat(3, 4), rat(1, 2)];
        assert!(SchemaInstance::new(SchemaId::KMon, bad).is_err());
    }
}
