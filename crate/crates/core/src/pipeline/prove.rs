use std::path::PathBuf;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::certificate::*;
use super::search::{low_range_search, Solution};
use super::stages::{run_stage1, run_stage2, tau_expansion, StageError, StageResult};
use crate::baker::{self, enclose, paper, power_of_ten_at_least, InitialBounds};
use crate::constants::Constants;
use crate::numeric::decimal::{format_dyadic, parse_decimal};
use crate::numeric::{Dyadic, NumericError, PrecisionBudget, Real, RealInterval, Round};
use crate::par::Execution;
use crate::reduction::{small_linear_form_bound, ContinuedFraction};

/// Printed reduction results in the source, for the discrepancy report.
mod paper_reduction {
    pub const STAGE1_EPS: &str = "0.0168612";
    pub const STAGE1_M1_BOUND: &str = "34";
    pub const STAGE2_EPS: &str = "0.000918645";
    /// The source states `n < 200`, i.e. `n <= 199`.
    pub const STAGE2_N_BOUND: &str = "199";
}

pub const SEARCH_SPACE: &str = "d1 in 1..9, d2 in 0..9, m1 >= 1, m2 >= 1, d1 = d2 allowed; \
the source's stated restrictions m1 >= m2 and d2 < d1 would exclude its own solutions 13, 88 and 277";

#[derive(Clone, Debug)]
pub struct ProofConfig {
    pub low_range_cutoff: u64,
    pub precision: PrecisionBudget,
    /// Lower bound on `M`; the larger of this and `m_sum_bound` is used.
    pub m_override: Option<BigInt>,
    /// Use the source's initial bounds verbatim instead of the native chain.
    pub paper_constants: bool,
    pub certificate_path: Option<PathBuf>,
    pub execution: Execution,
}

impl Default for ProofConfig {
    fn default() -> Self {
        ProofConfig {
            low_range_cutoff: 250,
            precision: PrecisionBudget::default(),
            m_override: None,
            paper_constants: false,
            certificate_path: None,
            execution: Execution::default(),
        }
    }
}

impl ProofConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.low_range_cutoff < 20 {
            return Err(format!(
                "cutoff must be at least 20, got {}",
                self.low_range_cutoff
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct ProofOutcome {
    pub certificate: ProofCertificate,
    pub solutions: Vec<Solution>,
}

impl ProofOutcome {
    pub fn closed(&self) -> bool {
        self.certificate.verdict.closed
    }

    pub fn is_precision_failure(&self) -> bool {
        self.certificate.verdict.failure_kind.as_deref() == Some("precision")
    }
}

pub(crate) fn up(x: &RealInterval) -> String {
    format_dyadic(x.hi(), 12, Round::Up)
}

pub(crate) fn down(x: &RealInterval) -> String {
    format_dyadic(x.lo(), 12, Round::Down)
}

/// `|x / y - 1| < 1/100` for decimal strings.
fn agrees(x: &str, y: &str) -> bool {
    match (parse_decimal(x), parse_decimal(y)) {
        (Some(x), Some(y)) if !y.is_zero() => {
            ((x / y) - BigRational::from_integer(1.into())).abs()
                < BigRational::new(1.into(), 100.into())
        }
        _ => false,
    }
}

fn discrepancy(quantity: &str, artifact: String, paper: &str, note_mismatch: &str) -> Discrepancy {
    let reproduced = agrees(&artifact, paper);
    let note = if reproduced {
        "reproduced within 1%".to_string()
    } else {
        format!("NOT reproduced: {note_mismatch}")
    };
    Discrepancy {
        quantity: quantity.into(),
        artifact,
        paper: paper.into(),
        reproduced,
        note,
    }
}

struct Failure {
    stage: &'static str,
    precision: bool,
    message: String,
}

impl Failure {
    fn numeric(stage: &'static str, e: NumericError) -> Self {
        Failure {
            stage,
            precision: matches!(e, NumericError::Escalation { .. }),
            message: e.to_string(),
        }
    }

    fn stage(stage: &'static str, e: StageError) -> Self {
        Failure {
            stage,
            precision: e.is_precision(),
            message: e.to_string(),
        }
    }
}

fn solution_records(solutions: &[Solution]) -> Vec<SolutionRecord> {
    solutions
        .iter()
        .map(|s| SolutionRecord {
            n: s.n.to_string(),
            value: s.value.to_string(),
            d1: s.pattern.d1.to_string(),
            m1: s.pattern.m1.to_string(),
            d2: s.pattern.d2.to_string(),
            m2: s.pattern.m2.to_string(),
        })
        .collect()
}

/// Lower bounds on `|Gamma_1|` and `|Gamma_2|` at a solution; both linear
/// forms are nonzero there, so these must be clearly positive.
fn nonvanishing(
    c: &Constants,
    s: &Solution,
    budget: &PrecisionBudget,
) -> Result<(RealInterval, RealInterval), NumericError> {
    let p = &s.pattern;
    let ln_9a = (Real::int(9) * &c.a).ln();
    let n_ln_alpha = Real::int(s.n) * &c.ln_alpha;
    let g1 = Real::int(p.m1 + p.m2) * &c.ln10 - &n_ln_alpha - &ln_9a + Real::int(p.d1).ln();
    let x = BigInt::from(p.d1) * BigInt::from(10).pow(p.m1 as u32)
        - (i64::from(p.d1) - i64::from(p.d2));
    let g2 = Real::int(p.m2) * &c.ln10 - &n_ln_alpha + Real::int(x).ln() - &ln_9a;
    Ok((enclose(&g1, budget)?.abs(), enclose(&g2, budget)?.abs()))
}

fn initial_bounds_record(
    c: &Constants,
    b: &InitialBounds,
    budget: &PrecisionBudget,
) -> Result<InitialBoundsRecord, NumericError> {
    let e = |x: &Real| enclose(x, budget);
    let heights = b
        .heights
        .iter()
        .map(|h| {
            Ok(HeightRecord {
                name: h.name.clone(),
                value: up(&e(&h.value)?),
                paper_value: h.paper_value.clone(),
                derivation: h.derivation.clone(),
            })
        })
        .collect::<Result<Vec<_>, NumericError>>()?;
    let h1 = up(&e(&b.heights[0].value)?);
    let a1 = up(&e(&(Real::int(3) * &b.heights[0].value))?);
    let c1 = up(&e(&b.stage1.coefficient)?);
    let m1c = up(&e(&b.m1_bound_coeff)?);
    let c2h = up(&e(&b.heights[3].value)?);
    let c2 = up(&e(&b.stage2.coefficient)?);
    let h = up(&e(&b.h)?);
    // The native chain is always evaluated so the report compares it even in
    // paper mode.
    let native_n = if b.from_paper {
        baker::resolve_n_bound(b.r, &b.h, budget)?
    } else {
        b.n_bound.clone()
    };
    let native_m = baker::m_sum_from_n(c, &native_n, budget)?;
    let log_note = "natural-log heights; the printed value matches neither this chain nor a consistent base-10 reading of it";
    let discrepancies = vec![
        discrepancy("h(eta1), step 1", h1, paper::H_ETA1_STEP1, log_note),
        discrepancy("A1, step 1", a1, paper::A1_STEP1, log_note),
        discrepancy(
            "Matveev coefficient, step 1",
            c1,
            paper::MATVEEV_STEP1,
            log_note,
        ),
        discrepancy(
            "m1 ln 10 coefficient, step 1",
            m1c.clone(),
            paper::M1_LOG10_STEP1,
            log_note,
        ),
        discrepancy(
            "h(eta1) / (1 + ln n), step 2",
            c2h,
            paper::H_ETA1_STEP2,
            log_note,
        ),
        discrepancy(
            "Matveev coefficient, step 2",
            c2.clone(),
            paper::MATVEEV_STEP2,
            log_note,
        ),
        discrepancy(
            "n bound (n < H (ln n)^2)",
            native_n.to_string(),
            paper::N_BOUND,
            log_note,
        ),
        discrepancy(
            "m1 + m2 bound",
            native_m.to_string(),
            paper::M_SUM_BOUND,
            log_note,
        ),
    ];
    Ok(InitialBoundsRecord {
        heights,
        matveev: MatveevRecord {
            stage1: up(&e(&b.stage1.coefficient)?),
            stage2: c2,
            paper_stage1: paper::MATVEEV_STEP1.into(),
            paper_stage2: paper::MATVEEV_STEP2.into(),
        },
        gsl: GslRecord {
            r: b.r.to_string(),
            h,
            n_bound: b.n_bound.to_string(),
            paper_n_bound: paper::N_BOUND.into(),
        },
        m_sum_bound: b.m_sum_bound.to_string(),
        paper_m_sum_bound: paper::M_SUM_BOUND.into(),
        m1_coefficient: m1c,
        source: if b.from_paper {
            "paper".into()
        } else {
            "native".into()
        },
        discrepancies,
    })
}

pub(crate) fn convergent_records(cf: &ContinuedFraction) -> Vec<ConvergentRecord> {
    cf.partial_quotients
        .iter()
        .zip(&cf.convergents)
        .enumerate()
        .map(|(k, (a, c))| ConvergentRecord {
            k: k.to_string(),
            a: a.to_string(),
            p: c.p.to_string(),
            q: c.q.to_string(),
        })
        .collect()
}

fn stage1_record(s: &StageResult<u8>, hypothesis: String) -> Stage1Record {
    Stage1Record {
        big_m: s.big_m.to_string(),
        q: s.q_first.to_string(),
        eps_table: s
            .members
            .iter()
            .map(|m| EpsRecord {
                d1: m.key.to_string(),
                q: m.outcome.q_used.to_string(),
                eps: m.outcome.eps_recorded.clone(),
                m1_bound: m.bound.to_string(),
            })
            .collect(),
        eps_min: s.eps_min.clone(),
        m1_bound: s.bound.to_string(),
        hypothesis,
    }
}

fn stage2_record(s: &StageResult<(u8, u8, u64)>, hypothesis: String) -> Stage2Record {
    Stage2Record {
        big_m: s.big_m.to_string(),
        q: s.q_first.to_string(),
        families: s
            .members
            .iter()
            .map(|m| FamilyRecord {
                d1: m.key.0.to_string(),
                d2: m.key.1.to_string(),
                m1: m.key.2.to_string(),
                q: m.outcome.q_used.to_string(),
                eps: m.outcome.eps_recorded.clone(),
                n_bound: m.bound.to_string(),
            })
            .collect(),
        family_count: s.members.len().to_string(),
        eps_min: s.eps_min.clone(),
        n_bound: s.bound.to_string(),
        hypothesis,
    }
}

/// `|e^x - 1| < 28/100` at `m1 = 2`, so the stage-1 linear form satisfies
/// `|Gamma_1| < 56 / 10^m1` for all `m1 >= 2`.
pub(crate) fn stage1_hypothesis() -> Result<String, NumericError> {
    let r = RealInterval::from_ratio(&28.into(), &100.into(), 64);
    let g = small_linear_form_bound(&r)?;
    Ok(format!(
        "m1 >= 2: |e^x - 1| < 28/100 < 1/2, so |Gamma_1| < {}",
        up(&g)
    ))
}

/// `|e^x - 1| < 2 / alpha^n < 1/2` for `n > cutoff`.
pub(crate) fn stage2_hypothesis(
    c: &Constants,
    cutoff: u64,
    budget: &PrecisionBudget,
) -> Result<String, NumericError> {
    let n = cutoff as i64 + 1;
    let g = enclose(&(Real::int(2) / c.alpha.powi(n)), budget)?;
    let out = small_linear_form_bound(&g)?;
    Ok(format!(
        "n >= {n}: |e^x - 1| < 2 / alpha^{n} < 1/2, so |Gamma_2| < {}",
        up(&out)
    ))
}

fn reduction_discrepancies(
    s1: &StageResult<u8>,
    s2: Option<&StageResult<(u8, u8, u64)>>,
) -> Vec<Discrepancy> {
    let mut out = vec![
        discrepancy(
            "stage 1 eps (minimum over d1)",
            s1.eps_min.clone(),
            paper_reduction::STAGE1_EPS,
            "different M or convergent",
        ),
        discrepancy(
            "stage 1 m1 bound",
            s1.bound.to_string(),
            paper_reduction::STAGE1_M1_BOUND,
            "different M or convergent",
        ),
    ];
    if let Some(s2) = s2 {
        out.push(discrepancy(
            "stage 2 eps (minimum over d1, d2, m1)",
            s2.eps_min.clone(),
            paper_reduction::STAGE2_EPS,
            "the printed value is not the family minimum; several members need a later convergent",
        ));
        out.push(discrepancy(
            "stage 2 n bound",
            s2.bound.to_string(),
            paper_reduction::STAGE2_N_BOUND,
            "log((4 / ln alpha) q / eps) / ln alpha exceeds 200 even with the printed q and eps",
        ));
    }
    out
}

pub fn prove(config: &ProofConfig) -> Result<ProofOutcome, String> {
    config.validate()?;
    let budget = &config.precision;
    let c = Constants::new();
    let cutoff = config.low_range_cutoff;

    let solutions = low_range_search(cutoff);
    let mut certificate = ProofCertificate {
        meta: Meta {
            version: CERTIFICATE_VERSION.into(),
            tool: format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION")),
            precision_bits: budget.working_bits.to_string(),
            max_bits: budget.max_bits.to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            mode: if config.paper_constants {
                "paper".into()
            } else {
                "native".into()
            },
        },
        low_range: LowRange {
            cutoff: cutoff.to_string(),
            solutions: solution_records(&solutions),
            search_space: SEARCH_SPACE.into(),
            nonvanishing: vec![],
        },
        initial_bounds: None,
        reduction: None,
        verdict: Verdict {
            closed: false,
            reason: String::new(),
            failed_stage: None,
            failure_kind: None,
        },
    };

    let result = run(&c, config, &solutions, &mut certificate);
    certificate.verdict = match result {
        Ok(n_bound) => {
            let closed = n_bound <= BigInt::from(cutoff);
            let reason = if closed {
                format!(
                    "stage 2 gives n <= {n_bound} <= cutoff {cutoff}, contradicting n > {cutoff}; \
                     the low-range search up to {cutoff} is exhaustive over {SEARCH_SPACE}"
                )
            } else {
                format!("stage 2 bound n <= {n_bound} exceeds the cutoff {cutoff}")
            };
            Verdict {
                closed,
                reason,
                failed_stage: (!closed).then(|| "stage2".into()),
                failure_kind: (!closed).then(|| "bound".into()),
            }
        }
        Err(f) => Verdict {
            closed: false,
            reason: format!("inconclusive at {}: {}", f.stage, f.message),
            failed_stage: Some(f.stage.into()),
            failure_kind: Some(if f.precision {
                "precision".into()
            } else {
                "bound".into()
            }),
        },
    };

    if let Some(path) = &config.certificate_path {
        std::fs::write(path, certificate.to_json())
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    Ok(ProofOutcome {
        certificate,
        solutions,
    })
}

/// The stages after the search; returns the stage-2 bound on `n`.
fn run(
    c: &Constants,
    config: &ProofConfig,
    solutions: &[Solution],
    cert: &mut ProofCertificate,
) -> Result<BigInt, Failure> {
    let budget = &config.precision;
    let exec = &config.execution;
    let cutoff = config.low_range_cutoff;

    let threshold = RealInterval::from_rational(&parse_decimal("1e-100").expect("literal"), 64);
    for s in solutions {
        let (g1, g2) =
            nonvanishing(c, s, budget).map_err(|e| Failure::numeric("nonvanishing", e))?;
        if !threshold.certainly_lt(&g1) || !threshold.certainly_lt(&g2) {
            return Err(Failure {
                stage: "nonvanishing",
                precision: false,
                message: format!("linear form too small at n = {}", s.n),
            });
        }
        cert.low_range.nonvanishing.push(NonvanishingRecord {
            n: s.n.to_string(),
            gamma1_abs_lower: down(&g1),
            gamma2_abs_lower: down(&g2),
        });
    }

    let bounds = if config.paper_constants {
        baker::paper_initial_bounds(c, cutoff, budget)
    } else {
        baker::initial_bounds(c, cutoff, budget)
    }
    .map_err(|e| Failure::numeric("initial_bounds", e))?;
    cert.initial_bounds = Some(
        initial_bounds_record(c, &bounds, budget)
            .map_err(|e| Failure::numeric("initial_bounds", e))?,
    );

    let mut m_floor = bounds.m_sum_bound.clone();
    if let Some(m) = &config.m_override {
        m_floor = m_floor.max(m.clone());
    }
    let big_m = power_of_ten_at_least(&m_floor);

    let cf =
        tau_expansion(c, &big_m, budget).map_err(|e| Failure::numeric("continued_fraction", e))?;
    let tau = c
        .tau
        .refine(&Dyadic::pow2(-200), budget)
        .map_err(|e| Failure::numeric("continued_fraction", e))?;

    let hyp1 = stage1_hypothesis().map_err(|e| Failure::numeric("stage1", e))?;
    let s1 = run_stage1(c, &big_m, &cf, budget, exec).map_err(|e| Failure::stage("stage1", e))?;
    let mut record = ReductionRecord {
        tau: format_dyadic(tau.lo(), 50, Round::Down),
        convergents: convergent_records(&cf),
        stage1: stage1_record(&s1, hyp1),
        stage2: None,
        discrepancies: reduction_discrepancies(&s1, None),
    };
    cert.reduction = Some(record.clone());

    let hyp2 = stage2_hypothesis(c, cutoff, budget).map_err(|e| Failure::numeric("stage2", e))?;
    let s2 = run_stage2(c, &big_m, &s1.bound, &cf, budget, exec)
        .map_err(|e| Failure::stage("stage2", e))?;
    if s2.members.len() as u64 != 90 * s1.bound.to_u64().unwrap_or(0) {
        return Err(Failure {
            stage: "stage2",
            precision: false,
            message: "family count mismatch".into(),
        });
    }
    record.stage2 = Some(stage2_record(&s2, hyp2));
    record.discrepancies = reduction_discrepancies(&s1, Some(&s2));
    cert.reduction = Some(record);
    Ok(s2.bound)
}
