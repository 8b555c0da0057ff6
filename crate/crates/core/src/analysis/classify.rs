use super::config::AnalysisConfig;
use super::decision::{
    all_pieces, continuity_witness, decide_intervals, glue_facts, has_division, symmetric_witness, Glue,
};
use super::engine::{
    decide, discrete_pairs, has_symmetric_pair, profile, sampled_sym_buckets, sym_sweep, uc_sweep, Sample,
};
use super::pointwise;
use super::verdict::{
    Certificate, Classification, ModulusKind, ModulusProfile, Notion, RefutationBasis, Resolution, Status, Verdict,
    Witness, WitnessTerm, WorkCounters,
};
use crate::domains::{Domain, DomainSpec};
use crate::error::Error;
use crate::exactnum::QuadExt;
use crate::functions::{interval_atoms, FuncSpec, Function};

const C: usize = 0;
const UC: usize = 1;
const SC: usize = 2;
const USC: usize = 3;

fn pending(note: &str) -> Status {
    Status::NoViolationAtResolution {
        resolution: Resolution {
            finest_delta: None,
            finest_oscillation: None,
            floor: None,
            truncated: false,
            note: note.into(),
        },
    }
}

/// Compiled inputs shared by the classification routes.
pub(crate) struct Ctx<'a> {
    pub cfg: &'a AnalysisConfig,
    pub amb: Domain,
    pub f: Function,
    pub floor: Option<QuadExt>,
    pub eff: Vec<QuadExt>,
    pub work: WorkCounters,
    pub profiles: Vec<ModulusProfile>,
}

impl<'a> Ctx<'a> {
    pub fn new(ambient: &DomainSpec, f: &FuncSpec, cfg: &'a AnalysisConfig) -> Result<Self, Error> {
        cfg.validate()?;
        let amb = Domain::compile(ambient)?;
        let f = Function::compile(f)?;
        let floor = amb.resolution_floor();
        let eff = cfg.effective_schedule(floor.as_ref());
        Ok(Ctx { cfg, amb, f, floor, eff, work: WorkCounters::default(), profiles: Vec::new() })
    }

    pub fn sample(&mut self) -> Result<Sample, Error> {
        let s = Sample::build(&self.amb, &self.f, self.cfg, &self.eff)?;
        self.work.points_inspected += s.points.len() as u64;
        self.work.truncated |= s.truncated;
        Ok(s)
    }

    fn schedule(&self) -> &[QuadExt] {
        &self.cfg.delta_schedule
    }

    fn record(&mut self, p: ModulusProfile) -> Status {
        self.work.pairs_examined += p.pairs_examined;
        self.work.truncated |= p.truncated;
        let points = self.work.points_inspected as usize;
        let st = decide(&p, points);
        self.profiles.push(p);
        st
    }

    /// Uniform modulus on the sample.
    fn uc_profile(&mut self, s: &Sample) -> ModulusProfile {
        let sched = self.schedule().to_vec();
        let n = s.points.len();
        if n > self.cfg.max_pairs {
            return profile(
                ModulusKind::Uc,
                &sched,
                vec![None; sched.len()],
                self.floor.as_ref(),
                s.exhaustive,
                true,
                0,
            );
        }
        let winners = uc_sweep(s, &sched);
        let examined = (n * sched.len()) as u64;
        profile(ModulusKind::Uc, &sched, winners, self.floor.as_ref(), s.exhaustive, s.truncated, examined)
    }

    /// Symmetric modulus with centres in `centers`.
    pub fn sym_profile(
        &mut self,
        s: &Sample,
        centers: &Domain,
        center_list: Option<&[QuadExt]>,
    ) -> Result<(ModulusProfile, Vec<super::engine::Candidate>), Error> {
        let sched = self.schedule().to_vec();
        let dmax = sched[0].clone();
        if s.discrete {
            let dp = discrete_pairs(s, centers, center_list, &dmax, self.cfg.max_pairs);
            let winners = sym_sweep(&dp.pairs, &sched);
            let p = profile(
                ModulusKind::Sym,
                &sched,
                winners,
                self.floor.as_ref(),
                s.exhaustive,
                s.truncated || dp.truncated,
                dp.examined,
            );
            Ok((p, dp.pairs))
        } else {
            let extra = center_list.unwrap_or(&[]);
            let (b, examined, truncated) =
                sampled_sym_buckets(s, &self.amb, centers, extra, &self.f, &sched, self.cfg.max_pairs)?;
            let p = profile(
                ModulusKind::Sym,
                &sched,
                b.sweep(&sched),
                self.floor.as_ref(),
                false,
                truncated || s.truncated,
                examined,
            );
            Ok((p, Vec::new()))
        }
    }
}

/// Verdicts for C, UC, SC and USC.
pub fn classify(ambient: &DomainSpec, f: &FuncSpec, cfg: &AnalysisConfig) -> Result<Classification, Error> {
    let mut ctx = Ctx::new(ambient, f, cfg)?;
    let mut st = if ctx.amb.is_enumerable() { discrete_route(&mut ctx)? } else { interval_route(&mut ctx)? };
    let conflicts = propagate(&mut st, &ctx.f);
    let verdicts = [Notion::C, Notion::UC, Notion::SC, Notion::USC]
        .into_iter()
        .zip(st)
        .map(|(notion, status)| Verdict { notion, status })
        .collect();
    Ok(Classification { verdicts, conflicts, work: ctx.work, profiles: ctx.profiles })
}

fn uniformly_discrete(ctx: &mut Ctx<'_>, s: &Sample) -> Option<Certificate> {
    let n = s.points.len();
    if !ctx.amb.is_exact_finite() || !s.exhaustive || n.saturating_sub(1) > ctx.cfg.max_pairs {
        return None;
    }
    ctx.work.pairs_examined += n.saturating_sub(1) as u64;
    let gap = s.points.windows(2).map(|w| &w[1] - &w[0]).min();
    Some(Certificate::UniformlyDiscrete { gap })
}

fn discrete_route(ctx: &mut Ctx<'_>) -> Result<[Status; 4], Error> {
    let s = ctx.sample()?;
    if let Some(cert) = uniformly_discrete(ctx, &s) {
        let p = Status::Proven { certificate: cert };
        return Ok([p.clone(), p.clone(), p.clone(), p]);
    }
    let amb = ctx.amb.clone();
    let (found, examined) = has_symmetric_pair(&s, &amb, None, ctx.cfg.max_pairs);
    ctx.work.pairs_examined += examined;
    let (sym, pairs) = ctx.sym_profile(&s, &amb, None)?;
    let sym_truncated = sym.truncated;
    let usc = match found {
        Some(false) if s.exhaustive => {
            ctx.profiles.push(sym);
            Status::Proven { certificate: Certificate::MidpointFree { points: s.points.len() } }
        }
        _ => ctx.record(sym),
    };
    let ucp = ctx.uc_profile(&s);
    let uc = ctx.record(ucp);
    let (c, examined) = pointwise::continuity(&s, &ctx.eff, ctx.floor.as_ref(), ctx.cfg.max_pairs);
    ctx.work.pairs_examined += examined;
    let sc = pointwise::symmetric(&pairs, &ctx.eff, ctx.floor.as_ref(), sym_truncated);
    Ok([c, uc, sc, usc])
}

fn interval_route(ctx: &mut Ctx<'_>) -> Result<[Status; 4], Error> {
    let pieces = if ctx.amb.is_model() { None } else { all_pieces(&ctx.amb) };
    let atoms = match &pieces {
        Some(p) => interval_atoms(ctx.f.spec(), p)?,
        None => None,
    };
    let pointwise_ok = ctx.f.is_interval_piecewise() && (atoms.is_some() || !has_division(ctx.f.spec()));
    let glue = if pointwise_ok { Some(glue_facts(&ctx.amb, &ctx.f)?) } else { None };
    let sched = if ctx.eff.is_empty() { ctx.cfg.delta_schedule.clone() } else { ctx.eff.clone() };
    let components = all_pieces(&ctx.amb)
        .and_then(|p| crate::domains::merge_interval_components(&p).ok())
        .map_or(0, |m| m.components.len());
    let n_atoms = atoms.as_ref().map_or(0, |a| a.len());
    let (c, sc) = match &glue {
        Some(glue) => pointwise_from_glue(ctx, glue, &sched, components, n_atoms)?,
        None => (
            pending("pointwise analysis needs a function given by formulas on intervals"),
            pending("pointwise analysis needs a function given by formulas on intervals"),
        ),
    };
    if let (Some(pieces), Some(atoms), Some(glue)) = (&pieces, &atoms, &glue) {
        let d = decide_intervals(&ctx.amb, &ctx.f, pieces, atoms, glue, &sched)?;
        return Ok([c, d.uc, sc, d.usc]);
    }
    let s = ctx.sample()?;
    let ucp = ctx.uc_profile(&s);
    let uc = ctx.record(ucp);
    let amb = ctx.amb.clone();
    let (symp, _) = ctx.sym_profile(&s, &amb, None)?;
    let usc = ctx.record(symp);
    Ok([c, uc, sc, usc])
}

fn pointwise_from_glue(
    ctx: &Ctx<'_>,
    glue: &[Glue],
    sched: &[QuadExt],
    components: usize,
    atoms: usize,
) -> Result<(Status, Status), Error> {
    let checked: Vec<QuadExt> = glue.iter().filter(|g| g.in_set).map(|g| g.at.clone()).collect();
    let cert = Certificate::IntervalDecision { components, atoms, checked_points: checked };
    let unresolved = || pending("discontinuity found but no witness pair was produced");
    let c = match glue.iter().find(|g| g.in_set && g.breaks_continuity()) {
        Some(g) => match continuity_witness(&ctx.amb, &ctx.f, g, sched)? {
            Some(witness) => Status::Refuted { basis: RefutationBasis::IntervalDecision, witness },
            None => unresolved(),
        },
        None => Status::Proven { certificate: cert.clone() },
    };
    let sc = match glue.iter().find(|g| g.breaks_symmetric()) {
        Some(g) => match symmetric_witness(&ctx.amb, &ctx.f, g, sched)? {
            Some(witness) => Status::Refuted { basis: RefutationBasis::IntervalDecision, witness },
            None => unresolved(),
        },
        None => Status::Proven { certificate: cert },
    };
    Ok((c, sc))
}

fn implied_proof(from: Notion) -> Status {
    Status::Proven { certificate: Certificate::ImplicationFrom { notion: from } }
}

fn implied_refutation(from: Notion, witness: Witness) -> Status {
    Status::Refuted { basis: RefutationBasis::ImplicationFrom { notion: from }, witness }
}

/// A symmetric pair oscillating by `e` splits into two pairs through the
/// centre, one of which oscillates by at least `e/2`.
fn split_symmetric(f: &Function, w: &Witness) -> Option<Witness> {
    let mut terms = Vec::new();
    for t in &w.terms {
        let c = t.center.clone()?;
        let fc = f.eval(&c).ok()?;
        let ox = (&f.eval(&t.x).ok()? - &fc).abs();
        let oy = (&f.eval(&t.y).ok()? - &fc).abs();
        let (x, osc) = if ox >= oy { (t.x.clone(), ox) } else { (t.y.clone(), oy) };
        terms.push(WitnessTerm { delta: t.delta.clone(), x, y: c, center: None, oscillation: osc });
    }
    let epsilon = terms.iter().map(|t| t.oscillation.clone()).min()?;
    if epsilon.is_zero() {
        return None;
    }
    Some(Witness { epsilon, point: w.point.clone(), terms })
}

/// Apply the implications UC => USC => SC and UC => C => SC to undecided
/// verdicts, and report decided verdicts that contradict them.
fn propagate(st: &mut [Status; 4], f: &Function) -> Vec<String> {
    let undecided = |s: &Status| matches!(s, Status::NoViolationAtResolution { .. });
    for _ in 0..4 {
        if st[UC].is_proven() {
            if undecided(&st[USC]) {
                st[USC] = implied_proof(Notion::UC);
            }
            if undecided(&st[C]) {
                st[C] = implied_proof(Notion::UC);
            }
        }
        if undecided(&st[SC]) {
            if st[USC].is_proven() {
                st[SC] = implied_proof(Notion::USC);
            } else if st[C].is_proven() {
                st[SC] = implied_proof(Notion::C);
            }
        }
        if undecided(&st[UC]) {
            if let Some(w) = st[C].witness().cloned() {
                st[UC] = implied_refutation(Notion::C, Witness { point: None, ..w });
            } else if let Some(w) = st[USC].witness().cloned() {
                let terms = w
                    .terms
                    .iter()
                    .map(|t| WitnessTerm { delta: &t.delta + &t.delta, center: None, ..t.clone() })
                    .collect();
                st[UC] = implied_refutation(Notion::USC, Witness { point: None, terms, ..w });
            }
        }
        if let Some(w) = st[SC].witness().cloned() {
            if undecided(&st[USC]) {
                st[USC] = implied_refutation(Notion::SC, Witness { point: None, ..w.clone() });
            }
            if undecided(&st[C]) {
                if let Some(cw) = split_symmetric(f, &w) {
                    st[C] = implied_refutation(Notion::SC, cw);
                }
            }
        }
    }
    let name = [Notion::C, Notion::UC, Notion::SC, Notion::USC];
    let mut conflicts = Vec::new();
    for (strong, weak) in [(UC, USC), (UC, C), (USC, SC), (C, SC), (UC, SC)] {
        if st[strong].is_proven() && st[weak].is_refuted() {
            conflicts.push(format!("{} proven but {} refuted", name[strong], name[weak]));
        }
    }
    conflicts
}

/// Uniform symmetric continuity with centres restricted to `b`.
pub fn check_wrt_subset(
    ambient: &DomainSpec,
    b: &DomainSpec,
    f: &FuncSpec,
    cfg: &AnalysisConfig,
) -> Result<Verdict, Error> {
    let mut ctx = Ctx::new(ambient, f, cfg)?;
    let bd = Domain::compile(b)?;
    let centers = subset_points(&ctx.amb, &bd, ctx.cfg.enum_limit)?;
    let wrap = |status| Verdict { notion: Notion::UscWrtB, status };
    if ambient == b {
        let cl = classify(ambient, f, cfg)?;
        return Ok(wrap(cl.status(Notion::USC).cloned().unwrap_or_else(|| pending("no verdict"))));
    }
    let s = ctx.sample()?;
    if s.discrete {
        if let Some(cert) = uniformly_discrete(&mut ctx, &s) {
            return Ok(wrap(Status::Proven { certificate: cert }));
        }
        let b_exhaustive = centers.as_ref().is_some_and(|(_, t)| !t);
        let list = centers.as_ref().map(|(c, _)| c.as_slice());
        let (found, examined) = has_symmetric_pair(&s, &bd, list, ctx.cfg.max_pairs);
        ctx.work.pairs_examined += examined;
        if found == Some(false) && s.exhaustive && b_exhaustive {
            return Ok(wrap(Status::Proven { certificate: Certificate::MidpointFree { points: s.points.len() } }));
        }
        let (p, _) = ctx.sym_profile(&s, &bd, list)?;
        return Ok(wrap(ctx.record(p)));
    }
    let list: Vec<QuadExt> = centers.map(|(c, _)| c).unwrap_or_default();
    let (p, _) = ctx.sym_profile(&s, &bd, Some(&list))?;
    Ok(wrap(ctx.record(p)))
}

/// Reject a centre set that leaves the ambient domain, naming a point outside.
/// Listable sets are checked point by point (up to `enum_limit`), interval
/// pieces on a coarse grid.
pub fn ensure_subset(ambient: &DomainSpec, b: &DomainSpec, enum_limit: usize) -> Result<(), Error> {
    subset_points(&Domain::compile(ambient)?, &Domain::compile(b)?, enum_limit).map(|_| ())
}

/// Check `b` lies inside the ambient set; returns its points when it can be
/// listed, with a truncation flag.
pub(crate) fn subset_points(
    amb: &Domain,
    b: &Domain,
    enum_limit: usize,
) -> Result<Option<(Vec<QuadExt>, bool)>, Error> {
    if b.is_enumerable() {
        let en = b.enumerate(enum_limit)?;
        if let Some(x) = en.points.iter().find(|x| !amb.contains(x)) {
            return Err(Error::NotSubset { point: x.to_string() });
        }
        return Ok(Some((en.points, en.truncated)));
    }
    let mut pts = Vec::new();
    for p in b.interval_pieces() {
        super::engine::grid_points(&p, 4, &mut pts);
    }
    if let Some(x) = pts.iter().find(|x| b.contains(x) && !amb.contains(x)) {
        return Err(Error::NotSubset { point: x.to_string() });
    }
    Ok(None)
}
