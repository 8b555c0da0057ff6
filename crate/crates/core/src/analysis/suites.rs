use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::classify::{classify, subset_points, Ctx};
use super::config::AnalysisConfig;
use super::engine::{landmark_partners, uc_sweep, Sample};
use super::verdict::{ModulusKind, ModulusProfile, Notion, PairRecord, Status};
use crate::domains::{Domain, DomainSpec};
use crate::error::Error;
use crate::exactnum::{midpoint, QuadExt};
use crate::functions::{FuncSpec, Function};

/// Oscillation table over the configured schedule. `Sym` profiles take
/// centres from `centers` (the ambient set when `None`).
pub fn modulus_profile(
    ambient: &DomainSpec,
    centers: Option<&DomainSpec>,
    f: &FuncSpec,
    kind: ModulusKind,
    cfg: &AnalysisConfig,
) -> Result<ModulusProfile, Error> {
    let mut ctx = Ctx::new(ambient, f, cfg)?;
    let s = ctx.sample()?;
    match kind {
        ModulusKind::Uc => {
            let sched = cfg.delta_schedule.clone();
            let examined = (s.points.len() * sched.len()) as u64;
            Ok(super::engine::profile(
                ModulusKind::Uc,
                &sched,
                uc_sweep(&s, &sched),
                ctx.floor.as_ref(),
                s.exhaustive,
                s.truncated,
                examined,
            ))
        }
        ModulusKind::Sym => {
            let b = match centers {
                Some(b) => Domain::compile(b)?,
                None => ctx.amb.clone(),
            };
            let list = match centers {
                Some(_) => subset_points(&ctx.amb, &b, ctx.cfg.enum_limit)?.map(|(pts, _)| pts),
                None => None,
            };
            let (p, _) = ctx.sym_profile(&s, &b, list.as_deref())?;
            Ok(p)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Oscillation {
    pub oscillation: QuadExt,
    pub witness: Option<PairRecord>,
    pub truncated: bool,
}

fn single(
    ambient: &DomainSpec,
    centers: Option<&DomainSpec>,
    f: &FuncSpec,
    kind: ModulusKind,
    delta: &QuadExt,
    cfg: &AnalysisConfig,
) -> Result<Oscillation, Error> {
    let cfg = AnalysisConfig { delta_schedule: vec![delta.clone()], ..cfg.clone() };
    let p = modulus_profile(ambient, centers, f, kind, &cfg)?;
    let e = p.entries.into_iter().next().ok_or_else(|| Error::Config("empty schedule".into()))?;
    Ok(Oscillation { oscillation: e.oscillation, witness: e.witness, truncated: p.truncated })
}

/// `sup |f(b+h) - f(b-h)|` over centres `b` and `0 < h < delta`.
pub fn sym_oscillation(
    ambient: &DomainSpec,
    centers: &DomainSpec,
    f: &FuncSpec,
    delta: &QuadExt,
    cfg: &AnalysisConfig,
) -> Result<Oscillation, Error> {
    single(ambient, Some(centers), f, ModulusKind::Sym, delta, cfg)
}

/// `sup |f(x) - f(y)|` over `|x - y| < delta`.
pub fn uc_oscillation(
    ambient: &DomainSpec,
    f: &FuncSpec,
    delta: &QuadExt,
    cfg: &AnalysisConfig,
) -> Result<Oscillation, Error> {
    single(ambient, None, f, ModulusKind::Uc, delta, cfg)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ModulusComparison {
    pub delta: QuadExt,
    pub sym: QuadExt,
    pub uc_double: QuadExt,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedCheck {
    pub name: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ImplicationReport {
    pub rows: Vec<ModulusComparison>,
    pub verdict_checks: Vec<NamedCheck>,
    pub conflicts: Vec<String>,
    pub truncated: bool,
}

impl ImplicationReport {
    pub fn holds(&self) -> bool {
        self.rows.iter().all(|r| r.holds) && self.verdict_checks.iter().all(|c| c.holds) && self.conflicts.is_empty()
    }
}

/// `omega_sym(delta) <= omega_uc(2 delta)` on every scheduled delta, plus the
/// verdict-level implications, on an enumerable domain.
pub fn implication_suite(ambient: &DomainSpec, f: &FuncSpec, cfg: &AnalysisConfig) -> Result<ImplicationReport, Error> {
    let mut ctx = Ctx::new(ambient, f, cfg)?;
    if !ctx.amb.is_enumerable() {
        return Err(Error::Inapplicable("the modulus comparison needs an enumerable domain".into()));
    }
    let s = ctx.sample()?;
    let amb = ctx.amb.clone();
    let (sym, _) = ctx.sym_profile(&s, &amb, None)?;
    let doubled: Vec<QuadExt> = cfg.delta_schedule.iter().map(|d| d + d).collect();
    let uc = uc_sweep(&s, &doubled);
    let rows = sym
        .entries
        .iter()
        .zip(uc)
        .map(|(e, u)| {
            let uc_double = u.map(|c| c.osc).unwrap_or_default();
            ModulusComparison {
                delta: e.delta.clone(),
                holds: e.oscillation <= uc_double,
                sym: e.oscillation.clone(),
                uc_double,
            }
        })
        .collect();
    let cl = classify(ambient, f, cfg)?;
    let st = |n| {
        cl.status(n).cloned().unwrap_or(Status::NoViolationAtResolution {
            resolution: super::verdict::Resolution {
                finest_delta: None,
                finest_oscillation: None,
                floor: None,
                truncated: false,
                note: String::new(),
            },
        })
    };
    let (c, ucs, sc, usc) = (st(Notion::C), st(Notion::UC), st(Notion::SC), st(Notion::USC));
    let verdict_checks = vec![
        NamedCheck { name: "UC proven implies USC proven".into(), holds: !ucs.is_proven() || usc.is_proven() },
        NamedCheck { name: "USC refuted implies UC refuted".into(), holds: !usc.is_refuted() || ucs.is_refuted() },
        NamedCheck { name: "USC proven implies SC proven".into(), holds: !usc.is_proven() || sc.is_proven() },
        NamedCheck { name: "C proven implies SC proven".into(), holds: !c.is_proven() || sc.is_proven() },
    ];
    Ok(ImplicationReport { rows, verdict_checks, conflicts: cl.conflicts, truncated: sym.truncated || s.truncated })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TransferRow {
    /// Index into the sequence.
    pub index: usize,
    pub delta: QuadExt,
    pub sym_limit: QuadExt,
    pub sym_member: QuadExt,
    pub bound: QuadExt,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TransferReport {
    /// `max |f_n - f|` over the inspected points, per member of the sequence.
    pub sup_dist: Vec<QuadExt>,
    pub rows: Vec<TransferRow>,
    pub decreasing: bool,
    /// The last distance is still at least half the first.
    pub stagnant: bool,
    pub points_inspected: usize,
    pub pairs: usize,
    /// Every member of an untruncated enumeration was inspected.
    pub exact: bool,
}

impl TransferReport {
    pub fn bound_holds(&self) -> bool {
        self.rows.iter().all(|r| r.holds)
    }
}

struct Cached<'a> {
    f: &'a Function,
    memo: HashMap<QuadExt, QuadExt>,
}

impl Cached<'_> {
    fn at(&mut self, x: &QuadExt) -> Result<QuadExt, Error> {
        if let Some(v) = self.memo.get(x) {
            return Ok(v.clone());
        }
        let v = self.f.eval(x)?;
        self.memo.insert(x.clone(), v.clone());
        Ok(v)
    }
}

/// Compare the symmetric moduli of `f` and of each `f_n` on one shared set of
/// symmetric pairs, with the distance `sup |f_n - f|` on the inspected points:
/// `omega_f(delta) <= omega_{f_n}(delta) + 2 sup |f_n - f|`.
pub fn uniform_limit_transfer(
    sequence: &[FuncSpec],
    f: &FuncSpec,
    ambient: &DomainSpec,
    cfg: &AnalysisConfig,
) -> Result<TransferReport, Error> {
    if sequence.is_empty() {
        return Err(Error::Config("the sequence is empty".into()));
    }
    let mut ctx = Ctx::new(ambient, f, cfg)?;
    let s: Sample = ctx.sample()?;
    let sched = cfg.delta_schedule.clone();
    let dmax = sched[0].clone();
    let mut pairs: Vec<(QuadExt, QuadExt)> = Vec::new();
    let mut truncated = s.truncated;
    let amb = &ctx.amb;
    let mut push = |x: QuadExt, y: QuadExt, pairs: &mut Vec<(QuadExt, QuadExt)>| -> bool {
        if pairs.len() >= cfg.max_pairs {
            truncated = true;
            return false;
        }
        pairs.push((x, y));
        true
    };
    if s.discrete {
        'outer: for i in 0..s.points.len() {
            for j in i + 1..s.points.len() {
                if (&s.points[j] - &s.points[i]).half() >= dmax {
                    break;
                }
                if amb.contains(&midpoint(&s.points[i], &s.points[j]))
                    && !push(s.points[j].clone(), s.points[i].clone(), &mut pairs)
                {
                    break 'outer;
                }
            }
        }
    } else {
        'centres: for c in &s.points {
            for d in &sched {
                let h = d.half();
                let (x, y) = (c + &h, c - &h);
                if amb.contains(&x) && amb.contains(&y) && !push(x, y, &mut pairs) {
                    break 'centres;
                }
            }
        }
        'lm: for e in &s.landmarks {
            for x in landmark_partners(&s.points, e, &sched).into_iter().map(|i| &s.points[i]) {
                if amb.contains(&midpoint(x, e)) && !push(x.clone(), e.clone(), &mut pairs) {
                    break 'lm;
                }
            }
        }
    }
    let mut points: Vec<QuadExt> = s.points.clone();
    points.extend(pairs.iter().flat_map(|(x, y)| [x.clone(), y.clone()]));
    points.sort();
    points.dedup();
    let members: Vec<Function> = sequence.iter().map(Function::compile).collect::<Result<_, _>>()?;
    let mut limit = Cached { f: &ctx.f, memo: HashMap::new() };
    let modulus = |g: &mut Cached<'_>| -> Result<Vec<QuadExt>, Error> {
        let mut by_h: Vec<(QuadExt, QuadExt)> = Vec::with_capacity(pairs.len());
        for (x, y) in &pairs {
            by_h.push(((x - y).abs().half(), (&g.at(x)? - &g.at(y)?).abs()));
        }
        Ok(sched
            .iter()
            .map(|d| by_h.iter().filter(|(h, _)| h < d).map(|(_, o)| o.clone()).max().unwrap_or_default())
            .collect())
    };
    let omega_f = modulus(&mut limit)?;
    let mut sup_dist = Vec::new();
    let mut rows = Vec::new();
    for (index, m) in members.iter().enumerate() {
        let mut g = Cached { f: m, memo: HashMap::new() };
        let mut dist = QuadExt::zero();
        for x in &points {
            let d = (&g.at(x)? - &limit.at(x)?).abs();
            if d > dist {
                dist = d;
            }
        }
        let omega_g = modulus(&mut g)?;
        for (i, d) in sched.iter().enumerate() {
            let bound = &omega_g[i] + &(&dist + &dist);
            rows.push(TransferRow {
                index,
                delta: d.clone(),
                sym_limit: omega_f[i].clone(),
                sym_member: omega_g[i].clone(),
                holds: omega_f[i] <= bound,
                bound,
            });
        }
        sup_dist.push(dist);
    }
    let first = &sup_dist[0];
    let last = &sup_dist[sup_dist.len() - 1];
    let stagnant = sup_dist.len() >= 2 && !first.is_zero() && last + last >= *first;
    let decreasing = sup_dist.windows(2).all(|w| w[1] < w[0] || (w[0].is_zero() && w[1].is_zero()));
    ctx.work.pairs_examined += pairs.len() as u64;
    Ok(TransferReport {
        sup_dist,
        rows,
        decreasing,
        stagnant,
        points_inspected: points.len(),
        pairs: pairs.len(),
        exact: s.exhaustive && !truncated,
    })
}
