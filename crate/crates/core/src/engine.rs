//! The top-level proving loops.
//!
//! Algorithm one (lemma synthesis): try to prove the goal by
//! instantiation at the current depth; on failure extract a pseudomodel
//! and search the candidate stream for a lemma that is false somewhere
//! on it, not refuted by stored countermodels, and true on every
//! sampled model; try to prove the candidate's pre-fixpoint obligation;
//! admit on success (resetting the countermodel sets), otherwise store
//! the obligation's countermodel and search again.
//!
//! Algorithm two (induction-principle synthesis) differs on failure: no
//! countermodel is stored, the candidate's induction principle is added
//! to the goal assumptions with fresh Skolem constants, and the next
//! round re-extracts the pseudomodel, which then satisfies the
//! principle on its instantiated elements.

use crate::induction::{make_pfp, InductionPrinciple};
use crate::logic::{
    print_formula_with, Formula, Lemma, LogicError, Problem, RecDef, Signature,
};
use crate::model::{gen_true_models, FiniteModel, GenConfig, TruthValue};
use crate::natproofs::{
    declare_lowered, fo_abstraction, ground_terms, instantiate, lower_recfun, skolemize_negation,
    GroundTermSet, SkolemEnv,
};
use crate::smt::{check_sat, extract_finite_model, SatResult, SmtError, SolverConfig};
use crate::synth::{
    enumerate_candidates, filter_candidate, normal_form, CounterModel, LemmaGrammar,
    SynthesisConstraints, Verdict,
};
use indexmap::{IndexMap, IndexSet};
use serde::Serialize;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Smt(#[from] SmtError),
}

pub type Result<T> = std::result::Result<T, EngineError>;

/// A problem with its recursive functions lowered: the definition set
/// holds relations only (including the introduced domain predicates),
/// and the axioms include the guarded value axioms.
#[derive(Debug, Clone)]
pub struct PreparedProblem {
    pub problem: Problem,
    pub sig: Signature,
    /// Relation definitions: the originals plus domain predicates.
    pub rel_defs: IndexMap<String, RecDef>,
    /// Everything, for least-fixpoint evaluation: relations, domain
    /// predicates, and the original function definitions.
    pub all_defs: IndexMap<String, RecDef>,
    pub axioms: Vec<Formula>,
    pub grammar: LemmaGrammar,
}

pub fn prepare(problem: &Problem) -> Result<PreparedProblem> {
    let mut sig = problem.sig.clone();
    let mut rel_defs: IndexMap<String, RecDef> = IndexMap::new();
    let mut axioms = problem.axioms.clone();
    for def in problem.defs.values() {
        if let RecDef::Rel { name, .. } = def {
            rel_defs.insert(name.clone(), def.clone());
        }
    }
    for def in problem.defs.values() {
        if let RecDef::Func { .. } = def {
            let lowered = lower_recfun(def)?;
            declare_lowered(&lowered, &mut sig)?;
            axioms.extend(lowered.axioms.iter().cloned());
            rel_defs.insert(lowered.domain_def.name().to_string(), lowered.domain_def);
        }
    }
    let mut all_defs = rel_defs.clone();
    for def in problem.defs.values() {
        if let RecDef::Func { name, .. } = def {
            all_defs.insert(name.clone(), def.clone());
        }
    }
    let grammar = LemmaGrammar::build(&sig, &rel_defs, &problem.grammar);
    Ok(PreparedProblem {
        problem: problem.clone(),
        sig,
        rel_defs,
        all_defs,
        axioms,
        grammar,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    /// Store countermodels per head on failed inductive proofs.
    Lemma,
    /// Accumulate induction principles on failed inductive proofs.
    Ip,
}

impl Algorithm {
    pub fn label(self) -> &'static str {
        match self {
            Algorithm::Lemma => "lemma",
            Algorithm::Ip => "ip",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Budgets {
    /// Outer-loop iterations per depth entry.
    pub max_rounds: usize,
    /// Candidates materialized from the grammar per run.
    pub max_candidates: usize,
    /// Total inductive proof attempts per depth entry.
    pub max_proposals: usize,
    /// Solver unknowns tolerated before giving up.
    pub max_unknowns: usize,
    /// Tuple evaluations per constraint check.
    pub tuple_cap: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            max_rounds: 30,
            max_candidates: 2000,
            max_proposals: 200,
            max_unknowns: 5,
            tuple_cap: 100_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EngineOptions {
    pub solver: SolverConfig,
    pub algorithm: Algorithm,
    pub true_models: usize,
    pub model_size: usize,
    pub seed: u64,
    pub budgets: Budgets,
    /// Dump the SyGuS-IF query for the first synthesis opportunity.
    pub emit_sygus_to: Option<std::path::PathBuf>,
}

impl EngineOptions {
    pub fn new(solver: SolverConfig) -> Self {
        EngineOptions {
            solver,
            algorithm: Algorithm::Lemma,
            true_models: 0,
            model_size: 3,
            seed: 0,
            budgets: Budgets::default(),
            emit_sygus_to: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoProofReason {
    GrammarExhausted,
    Budget,
    SolverUnknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunOutcome {
    Proved,
    NoProofFound(NoProofReason),
}

#[derive(Debug, Clone, Serialize, PartialEq)]
#[serde(tag = "event", rename_all = "kebab-case")]
pub enum Event {
    RunStarted {
        algorithm: String,
        depth: usize,
        seed: u64,
        requested_true_models: usize,
    },
    TrueModels {
        requested: usize,
        generated: usize,
        gave_up: usize,
    },
    GoalCheck {
        round: usize,
        result: String,
        assertions: usize,
        terms: usize,
        duration_ms: u128,
    },
    Pseudomodel {
        elements: usize,
        recorded_terms: usize,
    },
    SearchStats {
        considered: usize,
        rejected_usefulness: usize,
        rejected_truth: usize,
        rejected_inductiveness: usize,
    },
    CandidatePruned {
        index: usize,
        lemma: String,
        constraint: String,
    },
    CandidateAccepted {
        index: usize,
        lemma: String,
    },
    Proposal {
        number: usize,
        lemma: String,
    },
    InductiveCheck {
        lemma: String,
        result: String,
        assertions: usize,
        duration_ms: u128,
    },
    CountermodelStored {
        head: String,
        elements: usize,
    },
    IpAdded {
        lemma: String,
        constants: Vec<String>,
    },
    LemmaAdmitted {
        lemma: String,
    },
    ConstraintsReset,
    TrueModelsRefiltered {
        kept: usize,
    },
    SygusDumped {
        path: String,
    },
    Warning {
        message: String,
    },
    Finished {
        status: String,
        rounds: usize,
        lemmas: usize,
        ips: usize,
    },
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Timings {
    pub total_ms: u128,
    pub solver_ms: u128,
    pub solver_calls: usize,
}

#[derive(Debug)]
pub struct RunResult {
    pub outcome: RunOutcome,
    pub lemmas: Vec<Lemma>,
    pub ips: Vec<InductionPrinciple>,
    /// Proposals submitted to the inductive check.
    pub rounds: usize,
    pub depth: usize,
    pub events: Vec<Event>,
    pub timings: Timings,
}

impl RunResult {
    pub fn proved(&self) -> bool {
        self.outcome == RunOutcome::Proved
    }
}

struct Engine<'a> {
    prep: &'a PreparedProblem,
    opts: &'a EngineOptions,
    depth: usize,
    sig: Signature,
    skolem: SkolemEnv,
    neg_goal: Formula,
    lemmas: Vec<Lemma>,
    countermodels: IndexMap<String, Vec<CounterModel>>,
    ips: Vec<InductionPrinciple>,
    skolem_tuples: IndexMap<String, Vec<Vec<String>>>,
    true_models: Vec<FiniteModel>,
    candidates: Vec<Lemma>,
    candidates_truncated: bool,
    blocked: IndexSet<String>,
    events: Vec<Event>,
    rounds: usize,
    unknowns: usize,
    timings: Timings,
    started: Instant,
    sygus_dumped: bool,
}

enum GoalStatus {
    Proved,
    Counter(FiniteModel),
    Unknown,
}

enum InductiveStatus {
    Proved,
    Refuted {
        handle: crate::smt::ModelHandle,
        sig: Signature,
        terms: GroundTermSet,
        consts: Vec<String>,
        neg_pfp: Formula,
    },
    Unknown,
}

impl<'a> Engine<'a> {
    fn new(
        prep: &'a PreparedProblem,
        opts: &'a EngineOptions,
        depth: usize,
        carried: Vec<Lemma>,
    ) -> Engine<'a> {
        let mut sig = prep.sig.clone();
        let mut skolem = SkolemEnv::new();
        let (neg_goal, _) =
            skolemize_negation(&prep.problem.goal, "goal", &mut skolem, &mut sig);
        Engine {
            prep,
            opts,
            depth,
            sig,
            skolem,
            neg_goal,
            lemmas: carried,
            countermodels: IndexMap::new(),
            ips: Vec::new(),
            skolem_tuples: IndexMap::new(),
            true_models: Vec::new(),
            candidates: Vec::new(),
            candidates_truncated: false,
            blocked: IndexSet::new(),
            events: Vec::new(),
            rounds: 0,
            unknowns: 0,
            timings: Timings::default(),
            started: Instant::now(),
            sygus_dumped: false,
        }
    }

    fn log(&mut self, e: Event) {
        self.events.push(e);
    }

    fn lemma_text(&self, l: &Lemma) -> String {
        print_formula_with(&l.to_formula(), &self.prep.sig)
    }

    /// The universal assumptions: axioms, fixpoint abstractions of all
    /// relation definitions, proven lemmas, and (when asked) the
    /// accumulated induction principles.
    fn universals(&self, include_ips: bool) -> Result<Vec<Formula>> {
        let mut out = self.prep.axioms.clone();
        for def in self.prep.rel_defs.values() {
            out.push(fo_abstraction(def)?);
        }
        for l in &self.lemmas {
            out.push(l.to_formula());
        }
        if include_ips {
            for ip in &self.ips {
                out.push(ip.formula.clone());
            }
        }
        Ok(out)
    }

    fn timed_check(
        &mut self,
        sig: &Signature,
        asserts: &[Formula],
    ) -> Result<(SatResult, usize, u128)> {
        let t0 = Instant::now();
        let result = check_sat(sig, asserts, &self.opts.solver)?;
        let ms = t0.elapsed().as_millis();
        self.timings.solver_ms += ms;
        self.timings.solver_calls += 1;
        Ok((result, asserts.len(), ms))
    }

    fn goal_check(&mut self, round: usize) -> Result<GoalStatus> {
        let universals = self.universals(true)?;
        let mut formulas = universals.clone();
        formulas.push(self.neg_goal.clone());
        let terms = ground_terms(&formulas, &self.sig, self.depth);
        if terms.empty_warning {
            self.log(Event::Warning {
                message: "no foreground constants; instantiation set is empty".into(),
            });
        }
        let mut asserts = instantiate(&universals, &terms)?;
        asserts.push(self.neg_goal.clone());
        let sig = self.sig.clone();
        let (result, n, ms) = self.timed_check(&sig, &asserts)?;
        let label = match &result {
            SatResult::Sat(_) => "sat".to_string(),
            SatResult::Unsat => "unsat".to_string(),
            SatResult::Unknown(r) => format!("unknown ({r:?})"),
        };
        self.log(Event::GoalCheck {
            round,
            result: label,
            assertions: n,
            terms: terms.terms.len(),
            duration_ms: ms,
        });
        match result {
            SatResult::Unsat => Ok(GoalStatus::Proved),
            SatResult::Unknown(_) => Ok(GoalStatus::Unknown),
            SatResult::Sat(handle) => {
                let model = extract_finite_model(&handle, &self.sig, &terms)?;
                self.log(Event::Pseudomodel {
                    elements: model.fg_size,
                    recorded_terms: model.term_values.len(),
                });
                // sanity: admitted lemmas may not be definitely false on
                // the instantiated tuples of their own goal model
                for l in self.lemmas.clone() {
                    if self.lemma_false_somewhere(&model, &l) {
                        self.log(Event::Warning {
                            message: format!(
                                "admitted lemma evaluates false on a goal pseudomodel: {}",
                                self.lemma_text(&l)
                            ),
                        });
                    }
                }
                Ok(GoalStatus::Counter(model))
            }
        }
    }

    fn lemma_false_somewhere(&self, model: &FiniteModel, lemma: &Lemma) -> bool {
        let empty_cms = IndexMap::new();
        let empty_tuples = IndexMap::new();
        let probe = SynthesisConstraints {
            pseudomodel: model,
            countermodels: &empty_cms,
            skolem_tuples: &empty_tuples,
            true_models: &[],
            tuple_cap: self.opts.budgets.tuple_cap,
        };
        // usefulness holds exactly when the matrix is definitely false
        // somewhere
        filter_candidate(lemma, &probe, &self.prep.rel_defs) == Verdict::Accept
    }

    /// Try to prove `PFP(lemma)` at the current depth. With `persist`,
    /// the Skolem constants stay in the run signature on refutation
    /// (algorithm two reuses them in the induction principle).
    fn inductive_check(&mut self, lemma: &Lemma, persist: bool) -> Result<InductiveStatus> {
        let pfp = make_pfp(lemma, &self.prep.rel_defs)?;
        let label = format!("pfp:{}", self.lemma_text(lemma));
        let mut scratch = self.sig.clone();
        let (neg_pfp, consts) = skolemize_negation(&pfp, &label, &mut self.skolem, &mut scratch);
        let universals = self.universals(false)?;
        let mut formulas = universals.clone();
        formulas.push(neg_pfp.clone());
        let terms = ground_terms(&formulas, &scratch, self.depth);
        let mut asserts = instantiate(&universals, &terms)?;
        asserts.push(neg_pfp.clone());
        let (result, n, ms) = self.timed_check(&scratch, &asserts)?;
        let label = match &result {
            SatResult::Sat(_) => "sat".to_string(),
            SatResult::Unsat => "unsat".to_string(),
            SatResult::Unknown(r) => format!("unknown ({r:?})"),
        };
        self.log(Event::InductiveCheck {
            lemma: self.lemma_text(lemma),
            result: label,
            assertions: n,
            duration_ms: ms,
        });
        match result {
            SatResult::Unsat => Ok(InductiveStatus::Proved),
            SatResult::Unknown(_) => Ok(InductiveStatus::Unknown),
            SatResult::Sat(handle) => {
                if persist {
                    self.sig = scratch.clone();
                }
                Ok(InductiveStatus::Refuted {
                    handle,
                    sig: scratch,
                    terms,
                    consts: consts.into_iter().map(|(n, _)| n).collect(),
                    neg_pfp,
                })
            }
        }
    }

    /// Scan the candidate stream for the first lemma passing all
    /// constraints against the current pseudomodel.
    fn find_candidate(&mut self, pseudomodel: &FiniteModel) -> Option<(usize, Lemma)> {
        self.maybe_dump_sygus(pseudomodel);
        let mut stats = (0usize, 0usize, 0usize, 0usize);
        let mut found = None;
        let mut pruned_events = Vec::new();
        {
            let constraints = SynthesisConstraints {
                pseudomodel,
                countermodels: &self.countermodels,
                skolem_tuples: &self.skolem_tuples,
                true_models: &self.true_models,
                tuple_cap: self.opts.budgets.tuple_cap,
            };
            for (i, cand) in self.candidates.iter().enumerate() {
                if self.blocked.contains(&blocked_key(cand)) {
                    continue;
                }
                stats.0 += 1;
                match filter_candidate(cand, &constraints, &self.prep.rel_defs) {
                    Verdict::Accept => {
                        found = Some((i, cand.clone()));
                        break;
                    }
                    Verdict::RejectUsefulness => stats.1 += 1,
                    Verdict::RejectTruth => stats.2 += 1,
                    Verdict::RejectInductiveness => {
                        stats.3 += 1;
                        pruned_events.push(Event::CandidatePruned {
                            index: i,
                            lemma: print_formula_with(&cand.to_formula(), &self.prep.sig),
                            constraint: "inductiveness".into(),
                        });
                    }
                }
            }
        }
        for e in pruned_events {
            self.log(e);
        }
        self.log(Event::SearchStats {
            considered: stats.0,
            rejected_usefulness: stats.1,
            rejected_truth: stats.2,
            rejected_inductiveness: stats.3,
        });
        if let Some((i, cand)) = &found {
            self.log(Event::CandidateAccepted {
                index: *i,
                lemma: self.lemma_text(cand),
            });
        }
        found
    }

    fn maybe_dump_sygus(&mut self, pseudomodel: &FiniteModel) {
        let Some(path) = self.opts.emit_sygus_to.clone() else {
            return;
        };
        if self.sygus_dumped {
            return;
        }
        self.sygus_dumped = true;
        let constraints = SynthesisConstraints {
            pseudomodel,
            countermodels: &self.countermodels,
            skolem_tuples: &self.skolem_tuples,
            true_models: &self.true_models,
            tuple_cap: self.opts.budgets.tuple_cap,
        };
        match crate::synth::emit_sygus(&constraints, &self.prep.grammar, &self.prep.rel_defs, &self.sig)
        {
            Ok(text) => {
                if let Err(e) = std::fs::write(&path, text) {
                    self.log(Event::Warning {
                        message: format!("cannot write SyGuS dump: {e}"),
                    });
                } else {
                    self.log(Event::SygusDumped {
                        path: path.display().to_string(),
                    });
                }
            }
            Err(e) => self.log(Event::Warning {
                message: format!("SyGuS emission skipped: {e}"),
            }),
        }
    }

    fn admit(&mut self, lemma: Lemma) {
        self.log(Event::LemmaAdmitted {
            lemma: self.lemma_text(&lemma),
        });
        self.lemmas.push(lemma.clone());
        self.countermodels.clear();
        self.skolem_tuples.clear();
        for ip in self.ips.drain(..) {
            for (c, _) in &ip.skolem_consts {
                self.sig.consts.shift_remove(c);
            }
        }
        self.log(Event::ConstraintsReset);
        let formula = lemma.to_formula();
        self.true_models
            .retain(|m| m.holds(&formula) == TruthValue::True);
        self.log(Event::TrueModelsRefiltered {
            kept: self.true_models.len(),
        });
    }

    fn generate_true_models(&mut self) {
        let constraints: Vec<Formula> = self.lemmas.iter().map(Lemma::to_formula).collect();
        let cfg = GenConfig {
            max_size: self.opts.model_size,
            int_range: self.opts.solver.int_range,
            max_rejects: 200,
        };
        let report = gen_true_models(
            &self.prep.sig,
            &self.prep.all_defs,
            &self.prep.axioms,
            &constraints,
            self.opts.true_models,
            &cfg,
            self.opts.seed,
        );
        self.log(Event::TrueModels {
            requested: report.requested,
            generated: report.models.len(),
            gave_up: report.gave_up,
        });
        self.true_models = report.models;
    }

    fn exhaustion_reason(&self) -> NoProofReason {
        if self.candidates_truncated {
            NoProofReason::Budget
        } else {
            NoProofReason::GrammarExhausted
        }
    }

    fn finish(mut self, outcome: RunOutcome) -> RunResult {
        let status = match &outcome {
            RunOutcome::Proved => "proved".to_string(),
            RunOutcome::NoProofFound(r) => format!("no-proof ({r:?})"),
        };
        self.log(Event::Finished {
            status,
            rounds: self.rounds,
            lemmas: self.lemmas.len(),
            ips: self.ips.len(),
        });
        self.timings.total_ms = self.started.elapsed().as_millis();
        RunResult {
            outcome,
            lemmas: self.lemmas,
            ips: self.ips,
            rounds: self.rounds,
            depth: self.depth,
            events: self.events,
            timings: self.timings,
        }
    }

    fn run(mut self) -> Result<RunResult> {
        self.log(Event::RunStarted {
            algorithm: self.opts.algorithm.label().into(),
            depth: self.depth,
            seed: self.opts.seed,
            requested_true_models: self.opts.true_models,
        });
        self.generate_true_models();
        self.candidates =
            enumerate_candidates(&self.prep.grammar, self.opts.budgets.max_candidates);
        self.candidates_truncated = self.candidates.len() >= self.opts.budgets.max_candidates;
        match self.opts.algorithm {
            Algorithm::Lemma => self.run_lemma_synthesis(),
            Algorithm::Ip => self.run_ip_synthesis(),
        }
    }

    fn run_lemma_synthesis(mut self) -> Result<RunResult> {
        for round in 1..=self.opts.budgets.max_rounds {
            let model = match self.goal_check(round)? {
                GoalStatus::Proved => return Ok(self.finish(RunOutcome::Proved)),
                GoalStatus::Unknown => {
                    return Ok(self.finish(RunOutcome::NoProofFound(NoProofReason::SolverUnknown)))
                }
                GoalStatus::Counter(m) => m,
            };
            loop {
                let Some((_, cand)) = self.find_candidate(&model) else {
                    let reason = self.exhaustion_reason();
                    return Ok(self.finish(RunOutcome::NoProofFound(reason)));
                };
                self.rounds += 1;
                self.log(Event::Proposal {
                    number: self.rounds,
                    lemma: self.lemma_text(&cand),
                });
                if self.rounds > self.opts.budgets.max_proposals {
                    return Ok(self.finish(RunOutcome::NoProofFound(NoProofReason::Budget)));
                }
                match self.inductive_check(&cand, false)? {
                    InductiveStatus::Proved => {
                        self.admit(cand);
                        break;
                    }
                    InductiveStatus::Refuted {
                        handle,
                        sig,
                        terms,
                        consts,
                        ..
                    } => {
                        let counter = extract_finite_model(&handle, &sig, &terms)?;
                        self.log(Event::CountermodelStored {
                            head: cand.head.clone(),
                            elements: counter.fg_size,
                        });
                        self.countermodels
                            .entry(cand.head.clone())
                            .or_default()
                            .push(CounterModel {
                                model: counter,
                                skolem: consts,
                            });
                    }
                    InductiveStatus::Unknown => {
                        self.note_unknown(&cand);
                        if self.unknowns > self.opts.budgets.max_unknowns {
                            return Ok(
                                self.finish(RunOutcome::NoProofFound(NoProofReason::SolverUnknown))
                            );
                        }
                    }
                }
            }
        }
        Ok(self.finish(RunOutcome::NoProofFound(NoProofReason::Budget)))
    }

    fn run_ip_synthesis(mut self) -> Result<RunResult> {
        for round in 1..=self.opts.budgets.max_rounds {
            let model = match self.goal_check(round)? {
                GoalStatus::Proved => return Ok(self.finish(RunOutcome::Proved)),
                GoalStatus::Unknown => {
                    return Ok(self.finish(RunOutcome::NoProofFound(NoProofReason::SolverUnknown)))
                }
                GoalStatus::Counter(m) => m,
            };
            let Some((_, cand)) = self.find_candidate(&model) else {
                let reason = self.exhaustion_reason();
                return Ok(self.finish(RunOutcome::NoProofFound(reason)));
            };
            self.rounds += 1;
            self.log(Event::Proposal {
                number: self.rounds,
                lemma: self.lemma_text(&cand),
            });
            if self.rounds > self.opts.budgets.max_proposals {
                return Ok(self.finish(RunOutcome::NoProofFound(NoProofReason::Budget)));
            }
            match self.inductive_check(&cand, true)? {
                InductiveStatus::Proved => self.admit(cand),
                InductiveStatus::Refuted {
                    consts, neg_pfp, ..
                } => {
                    let matrix = cand.matrix();
                    let formula = Formula::forall(
                        cand.vars.clone(),
                        Formula::Or(vec![neg_pfp, matrix]),
                    );
                    self.log(Event::IpAdded {
                        lemma: self.lemma_text(&cand),
                        constants: consts.clone(),
                    });
                    self.skolem_tuples
                        .entry(cand.head.clone())
                        .or_default()
                        .push(consts.clone());
                    let skolem_consts = consts
                        .into_iter()
                        .map(|c| {
                            let s = self.sig.consts[&c];
                            (c, s)
                        })
                        .collect();
                    self.ips.push(InductionPrinciple {
                        lemma: cand.clone(),
                        skolem_consts,
                        formula,
                    });
                }
                InductiveStatus::Unknown => {
                    self.note_unknown(&cand);
                    if self.unknowns > self.opts.budgets.max_unknowns {
                        return Ok(
                            self.finish(RunOutcome::NoProofFound(NoProofReason::SolverUnknown))
                        );
                    }
                }
            }
        }
        Ok(self.finish(RunOutcome::NoProofFound(NoProofReason::Budget)))
    }

    fn note_unknown(&mut self, cand: &Lemma) {
        self.unknowns += 1;
        self.blocked.insert(blocked_key(cand));
        self.log(Event::Warning {
            message: format!(
                "solver unknown for inductive check; candidate blocked: {}",
                self.lemma_text(cand)
            ),
        });
    }
}

fn blocked_key(l: &Lemma) -> String {
    format!(
        "{}|{}",
        l.head,
        crate::logic::print_formula(&normal_form(&l.body))
    )
}

/// Run one algorithm at one instantiation depth.
pub fn run_at_depth(
    prep: &PreparedProblem,
    opts: &EngineOptions,
    depth: usize,
    carried: Vec<Lemma>,
) -> Result<RunResult> {
    Engine::new(prep, opts, depth, carried).run()
}

/// Run the selected algorithm over a schedule of (depth, round budget)
/// entries, carrying admitted lemmas forward across depths (they hold
/// in least-fixpoint semantics, so no revalidation is needed).
/// Countermodel sets and induction principles reset between entries.
pub fn dovetail(
    prep: &PreparedProblem,
    opts: &EngineOptions,
    schedule: &[(usize, usize)],
) -> Result<RunResult> {
    assert!(!schedule.is_empty(), "dovetail needs a nonempty schedule");
    let mut carried: Vec<Lemma> = Vec::new();
    let mut events: Vec<Event> = Vec::new();
    let mut timings = Timings::default();
    let mut rounds = 0usize;
    let mut last: Option<RunResult> = None;
    for (depth, round_budget) in schedule {
        let mut entry_opts = opts.clone();
        entry_opts.budgets.max_rounds = *round_budget;
        let result = run_at_depth(prep, &entry_opts, *depth, carried.clone())?;
        carried = result.lemmas.clone();
        events.extend(result.events.iter().cloned());
        timings.total_ms += result.timings.total_ms;
        timings.solver_ms += result.timings.solver_ms;
        timings.solver_calls += result.timings.solver_calls;
        rounds += result.rounds;
        let proved = result.proved();
        last = Some(result);
        if proved {
            break;
        }
    }
    let mut result = last.expect("nonempty schedule");
    result.events = events;
    result.timings = timings;
    result.rounds = rounds;
    Ok(result)
}

/// Check whether the goal is provable by instantiation at `depth` from
/// the axioms, the fixpoint abstractions, and the given lemmas alone.
pub fn goal_provable(
    prep: &PreparedProblem,
    lemmas: &[Lemma],
    depth: usize,
    solver: &SolverConfig,
) -> Result<bool> {
    let mut sig = prep.sig.clone();
    let mut env = SkolemEnv::new();
    let (neg_goal, _) = skolemize_negation(&prep.problem.goal, "goal", &mut env, &mut sig);
    let mut universals = prep.axioms.clone();
    for def in prep.rel_defs.values() {
        universals.push(fo_abstraction(def)?);
    }
    for l in lemmas {
        universals.push(l.to_formula());
    }
    let mut formulas = universals.clone();
    formulas.push(neg_goal.clone());
    let terms = ground_terms(&formulas, &sig, depth);
    let mut asserts = instantiate(&universals, &terms)?;
    asserts.push(neg_goal);
    Ok(check_sat(&sig, &asserts, solver)?.is_unsat())
}

/// Two-sided entailment check between lemmas under the axioms and the
/// fixpoint abstractions at a given depth: each must prove the other.
pub fn lemmas_equivalent(
    prep: &PreparedProblem,
    a: &Lemma,
    b: &Lemma,
    depth: usize,
    solver: &SolverConfig,
) -> Result<bool> {
    Ok(entails(prep, a, b, depth, solver)? && entails(prep, b, a, depth, solver)?)
}

fn entails(
    prep: &PreparedProblem,
    hyp: &Lemma,
    concl: &Lemma,
    depth: usize,
    solver: &SolverConfig,
) -> Result<bool> {
    let mut sig = prep.sig.clone();
    let mut env = SkolemEnv::new();
    let (neg, _) = skolemize_negation(&concl.to_formula(), "concl", &mut env, &mut sig);
    let mut universals = prep.axioms.clone();
    for def in prep.rel_defs.values() {
        universals.push(fo_abstraction(def)?);
    }
    universals.push(hyp.to_formula());
    let mut formulas = universals.clone();
    formulas.push(neg.clone());
    let terms = ground_terms(&formulas, &sig, depth);
    let mut asserts = instantiate(&universals, &terms)?;
    asserts.push(neg);
    Ok(check_sat(&sig, &asserts, solver)?.is_unsat())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_problem;

    #[test]
    fn prepare_lowers_functions() {
        let p = parse_problem(
            "(foreground-sort Loc)(const nil Loc)(func n (Loc) Loc)\
             (define-rec (list (x Loc)) (or (= x nil) (list (n x))))\
             (define-recfun (listlen (x Loc)) Int (ite (= x nil) 0 (+ 1 (listlen (n x)))))\
             (goal (list nil))",
        )
        .unwrap();
        let prep = prepare(&p).unwrap();
        assert!(prep.rel_defs.contains_key("listlen_dom"));
        assert!(prep.sig.rels.contains_key("listlen_dom"));
        assert_eq!(prep.axioms.len(), 3);
        assert!(prep.all_defs.contains_key("listlen"));
        assert!(prep.grammar.heads.iter().any(|h| h.rel == "listlen_dom"));
    }
}
