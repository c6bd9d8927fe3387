//! Independent re-check of a certificate.
//!
//! Baker bounds are not recomputed. Everything the verdict depends on after
//! them is: the low-range search, the convergents of `tau`, every `eps` and
//! every reduced bound, and the verdict logic.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use super::certificate::*;
use super::prove::convergent_records;
use super::search::low_range_search;
use super::stages::{ln_9a, stage1_instance, stage2_instance, stage2_keys};
use crate::constants::Constants;
use crate::numeric::decimal::{parse_decimal, parse_integer};
use crate::numeric::{NumericError, PrecisionBudget};
use crate::par::Execution;
use crate::reduction::{
    convergents_of, determinants_ok, epsilon, expand_cf_terms, reduced_bound, Epsilon,
    ReductionInstance,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.ok)
    }

    fn push(&mut self, name: &str, result: Result<String, String>) {
        let (ok, detail) = match result {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        self.checks.push(Check {
            name: name.into(),
            ok,
            detail,
        });
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "[{}] {}: {}",
                if c.ok { "ok" } else { "FAIL" },
                c.name,
                c.detail
            )?;
        }
        write!(
            f,
            "{}",
            if self.ok() {
                "certificate verified"
            } else {
                "certificate REJECTED"
            }
        )
    }
}

fn int(s: &str, what: &str) -> Result<BigInt, String> {
    parse_integer(s).ok_or_else(|| format!("{what}: not an integer: {s:?}"))
}

fn small(s: &str, what: &str) -> Result<u64, String> {
    s.parse()
        .map_err(|_| format!("{what}: not a small non-negative integer: {s:?}"))
}

fn positive_decimal(s: &str, what: &str) -> Result<BigRational, String> {
    let v = parse_decimal(s).ok_or_else(|| format!("{what}: not a decimal: {s:?}"))?;
    if !v.is_positive() {
        return Err(format!("{what}: eps {s} is not positive"));
    }
    Ok(v)
}

/// Recheck one reduction member: `q` is a convergent past `6M`, the recorded
/// `eps` is a positive lower bound for the true `eps`, and the recorded bound
/// is `K - 1` for the `K` that `eps` yields.
fn check_member(
    inst: &ReductionInstance,
    q: &str,
    eps: &str,
    bound: &str,
    qs: &[BigInt],
    budget: &PrecisionBudget,
) -> Result<BigInt, String> {
    let q = int(q, "q")?;
    if !qs.contains(&q) {
        return Err(format!("q = {q} is not a recorded convergent denominator"));
    }
    if q <= &inst.big_m * 6 {
        return Err(format!("q = {q} does not exceed 6M"));
    }
    let eps_v = positive_decimal(eps, "eps")?;
    let e = match epsilon(inst, &q, budget).map_err(|e| e.to_string())? {
        Epsilon::Positive(e) => e,
        Epsilon::NonPositive(_) => return Err(format!("eps at q = {q} is not positive")),
    };
    if eps_v > e.lo_rational() {
        return Err(format!(
            "recorded eps {eps} exceeds the certified lower bound {}",
            e.lo()
        ));
    }
    let k = reduced_bound(inst, &q, &eps_v, budget).map_err(|e| e.to_string())?;
    let bound = int(bound, "bound")?;
    if bound != &k - 1 {
        return Err(format!("recorded bound {bound}, recomputed {}", k - 1));
    }
    Ok(bound)
}

fn min_eps<'a>(eps: impl Iterator<Item = &'a str>) -> Option<String> {
    eps.filter_map(|s| parse_decimal(s).map(|v| (v, s)))
        .min_by(|a, b| a.0.cmp(&b.0))
        .map(|(_, s)| s.to_string())
}

/// Recorded member: key, q, eps, bound.
type Row<'a, K> = (K, &'a str, &'a str, &'a str);

/// Recorded stage aggregates; `floor` is the least admissible bound.
struct Aggregates<'a> {
    floor: u64,
    bound: &'a str,
    eps_min: &'a str,
}

/// Check every member and the stage aggregates. `Ok` carries the stage bound.
fn check_stage<K: Ord + Clone + fmt::Debug + Sync>(
    rows: &[Row<'_, K>],
    expected_keys: &[K],
    recorded: Aggregates<'_>,
    qs: &[BigInt],
    budget: &PrecisionBudget,
    exec: &Execution,
    instance: impl Fn(&K) -> Result<ReductionInstance, NumericError> + Sync + Send,
) -> Result<BigInt, String> {
    let mut seen: BTreeMap<K, usize> = BTreeMap::new();
    for (k, ..) in rows {
        *seen.entry(k.clone()).or_default() += 1;
    }
    if seen.len() != rows.len()
        || seen.keys().cloned().collect::<Vec<_>>() != {
            let mut e = expected_keys.to_vec();
            e.sort();
            e
        }
    {
        return Err(format!(
            "members do not cover the family exactly once ({} rows, {} expected)",
            rows.len(),
            expected_keys.len()
        ));
    }
    let results = exec.map(rows, |(key, q, eps, bound)| {
        let inst = instance(key).map_err(|e| e.to_string())?;
        check_member(&inst, q, eps, bound, qs, budget).map_err(|e| format!("{key:?}: {e}"))
    });
    let Aggregates {
        floor,
        bound: recorded_bound,
        eps_min: recorded_eps_min,
    } = recorded;
    let mut max = BigInt::from(floor);
    for r in results {
        max = max.max(r?);
    }
    if int(recorded_bound, "stage bound")? != max {
        return Err(format!(
            "recorded stage bound {recorded_bound}, recomputed {max}"
        ));
    }
    let eps_min = min_eps(rows.iter().map(|r| r.2)).unwrap_or_default();
    if eps_min != recorded_eps_min {
        return Err(format!(
            "recorded eps_min {recorded_eps_min}, table minimum {eps_min}"
        ));
    }
    Ok(max)
}

pub fn verify_certificate(cert: &ProofCertificate, exec: &Execution) -> VerifyReport {
    let mut report = VerifyReport::default();
    let c = Constants::new();

    let budget = (|| -> Result<PrecisionBudget, String> {
        if cert.meta.version != CERTIFICATE_VERSION {
            return Err(format!("unsupported version {:?}", cert.meta.version));
        }
        let w = small(&cert.meta.precision_bits, "precision_bits")? as u32;
        let m = small(&cert.meta.max_bits, "max_bits")? as u32;
        PrecisionBudget::new(w, m, 2).map_err(|e| e.to_string())
    })();
    report.push(
        "meta",
        budget
            .as_ref()
            .map(|b| format!("{} working bits", b.working_bits))
            .map_err(Clone::clone),
    );
    let Ok(budget) = budget else { return report };

    let cutoff = small(&cert.low_range.cutoff, "cutoff");
    report.push(
        "low_range",
        cutoff.clone().and_then(|cutoff| {
            if cutoff < 20 {
                return Err(format!("cutoff {cutoff} below 20"));
            }
            let fresh = low_range_search(cutoff);
            let records: Vec<SolutionRecord> = fresh
                .iter()
                .map(|s| SolutionRecord {
                    n: s.n.to_string(),
                    value: s.value.to_string(),
                    d1: s.pattern.d1.to_string(),
                    m1: s.pattern.m1.to_string(),
                    d2: s.pattern.d2.to_string(),
                    m2: s.pattern.m2.to_string(),
                })
                .collect();
            if records != cert.low_range.solutions {
                return Err(format!(
                    "solution list differs from a fresh search up to {cutoff}: recorded {} entries, found {}",
                    cert.low_range.solutions.len(),
                    records.len()
                ));
            }
            Ok(format!("{} solutions up to n = {cutoff}", records.len()))
        }),
    );
    let Ok(cutoff) = cutoff else { return report };

    let mut stage2_bound: Option<BigInt> = None;
    if let Some(red) = &cert.reduction {
        // Convergents: recorded quotients regenerate the recorded fractions,
        // satisfy the determinant identity and match a fresh expansion.
        let qs = (|| -> Result<Vec<BigInt>, String> {
            let a = red
                .convergents
                .iter()
                .map(|r| int(&r.a, "a"))
                .collect::<Result<Vec<_>, _>>()?;
            let mut cf = expand_cf_terms(&c.tau, a.len(), &budget).map_err(|e| e.to_string())?;
            if cf.partial_quotients != a {
                return Err("partial quotients differ from a fresh certified expansion".into());
            }
            cf.convergents = convergents_of(&a);
            if convergent_records(&cf) != red.convergents {
                return Err("recorded convergents do not follow from the partial quotients".into());
            }
            if !determinants_ok(&cf.convergents) {
                return Err("determinant identity fails".into());
            }
            Ok(cf.convergents.into_iter().map(|c| c.q).collect())
        })();
        report.push(
            "convergents",
            qs.as_ref()
                .map(|q| format!("{} convergents, determinants +-1", q.len()))
                .map_err(Clone::clone),
        );
        let qs = qs.unwrap_or_default();

        let s1 = &red.stage1;
        let m_sum = cert.initial_bounds.as_ref().map(|b| b.m_sum_bound.as_str());
        let stage1 = (|| -> Result<BigInt, String> {
            let big_m = int(&s1.big_m, "M")?;
            let m_sum = int(m_sum.ok_or("initial bounds missing")?, "m_sum_bound")?;
            if big_m < m_sum {
                return Err(format!("M = {big_m} is below the bound {m_sum} on m1 + m2"));
            }
            let first = qs
                .iter()
                .find(|q| **q > &big_m * 6)
                .ok_or("no recorded q exceeds 6M")?;
            if int(&s1.q, "q")? != *first {
                return Err("recorded q is not the first convergent denominator above 6M".into());
            }
            let rows: Vec<Row<'_, u8>> = s1
                .eps_table
                .iter()
                .map(|r| {
                    Ok((
                        small(&r.d1, "d1")? as u8,
                        r.q.as_str(),
                        r.eps.as_str(),
                        r.m1_bound.as_str(),
                    ))
                })
                .collect::<Result<_, String>>()?;
            let keys: Vec<u8> = (1..=9).collect();
            check_stage(
                &rows,
                &keys,
                Aggregates {
                    floor: 1,
                    bound: &s1.m1_bound,
                    eps_min: &s1.eps_min,
                },
                &qs,
                &budget,
                exec,
                |&d1| stage1_instance(&c, d1, &big_m, &budget),
            )
        })();
        report.push(
            "stage1",
            stage1
                .as_ref()
                .map(|b| format!("m1 <= {b}"))
                .map_err(Clone::clone),
        );

        if let Some(s2) = &red.stage2 {
            let stage2 = (|| -> Result<BigInt, String> {
                let m1_bound = stage1.clone().map_err(|_| "stage 1 failed".to_string())?;
                let m1_bound = u64::try_from(&m1_bound).map_err(|e| e.to_string())?;
                let big_m = int(&s2.big_m, "M")?;
                if big_m != int(&s1.big_m, "M")? {
                    return Err("stage 2 uses a different M".into());
                }
                if small(&s2.family_count, "family_count")? != 90 * m1_bound
                    || s2.families.len() as u64 != 90 * m1_bound
                {
                    return Err(format!("family count must be 90 * {m1_bound}"));
                }
                let rows: Vec<Row<'_, (u8, u8, u64)>> = s2
                    .families
                    .iter()
                    .map(|r| {
                        let key = (
                            small(&r.d1, "d1")? as u8,
                            small(&r.d2, "d2")? as u8,
                            small(&r.m1, "m1")?,
                        );
                        Ok((key, r.q.as_str(), r.eps.as_str(), r.n_bound.as_str()))
                    })
                    .collect::<Result<_, String>>()?;
                let ln_9a = ln_9a(&c);
                check_stage(
                    &rows,
                    &stage2_keys(m1_bound),
                    Aggregates {
                        floor: 0,
                        bound: &s2.n_bound,
                        eps_min: &s2.eps_min,
                    },
                    &qs,
                    &budget,
                    exec,
                    |&key| stage2_instance(&c, &ln_9a, key, &big_m, &budget),
                )
            })();
            report.push(
                "stage2",
                stage2
                    .as_ref()
                    .map(|b| format!("n <= {b}"))
                    .map_err(Clone::clone),
            );
            stage2_bound = stage2.ok();
        }
    }

    let expected = stage2_bound
        .as_ref()
        .is_some_and(|b| *b <= BigInt::from(cutoff));
    report.push(
        "verdict",
        if cert.verdict.closed == expected {
            Ok(format!("closed = {expected}"))
        } else {
            Err(format!(
                "recorded closed = {}, but the recorded data imply closed = {expected}",
                cert.verdict.closed
            ))
        },
    );
    report
}

pub fn verify_certificate_file(path: &Path, exec: &Execution) -> Result<VerifyReport, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let cert = ProofCertificate::from_json(&text).map_err(|e| format!("schema violation: {e}"))?;
    Ok(verify_certificate(&cert, exec))
}
