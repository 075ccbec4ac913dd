use std::collections::{BTreeMap, HashMap, VecDeque};
use std::io::Write;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use serde::Serialize;

use super::point::TowerPoint;
use super::{Model, TowerSpec};
use crate::algebra::{Element, FieldCtx, VarClass};
use crate::error::{Error, Result};
use crate::report::Rational;

/// Default cap on enumerated points per run.
pub const DEFAULT_POINT_CAP: u64 = 10_000_000;
/// Default cap on tower levels per run.
pub const DEFAULT_LEVEL_CAP: u32 = 4;

#[derive(Clone, Debug)]
pub struct EnumOpts {
    /// Half-open range of a_1 codes to seed from; the whole field if None.
    pub seed_range: Option<(u64, u64)>,
    pub max_points: u64,
}

impl Default for EnumOpts {
    fn default() -> Self {
        EnumOpts {
            seed_range: None,
            max_points: DEFAULT_POINT_CAP,
        }
    }
}

/// Memoized solver outputs shared within one enumeration run. The keyed maps
/// are tiny compared to the point stream and keep repeated a-values cheap.
#[derive(Default)]
struct SolveCaches {
    affine: HashMap<u64, Arc<Vec<Element>>>,
    kummer: HashMap<u64, Arc<Vec<Element>>>,
}

impl SolveCaches {
    fn affine_solutions(&mut self, ctx: &FieldCtx, v: Element) -> Arc<Vec<Element>> {
        if let Some(hit) = self.affine.get(&v.code()) {
            return hit.clone();
        }
        let sols = ctx
            .additive_affine_solve(v, ctx.one(), ctx.q())
            .expect("v, w from this ctx");
        let sols = Arc::new(sols);
        self.affine.insert(v.code(), sols.clone());
        sols
    }

    fn kummer_solutions(&mut self, ctx: &FieldCtx, rhs: Element) -> Arc<Vec<Element>> {
        if let Some(hit) = self.kummer.get(&rhs.code()) {
            return hit.clone();
        }
        let sols = ctx
            .kummer_solve(ctx.q() - 1, rhs)
            .expect("rhs from this ctx");
        let sols = Arc::new(sols);
        self.kummer.insert(rhs.code(), sols.clone());
        sols
    }
}

/// Right-hand side of the c-Kummer equation at a: (a-1)/a.
fn c_rhs(ctx: &FieldCtx, a: Element) -> Element {
    ctx.div(ctx.sub(a, ctx.one()), a).expect("a nonzero")
}

/// Right-hand side of the b-Kummer equation at a: -(a^q + a - 1)/a.
fn b_rhs(ctx: &FieldCtx, a: Element) -> Element {
    let artin = ctx.sub(ctx.add(ctx.pow(a, ctx.q()), a), ctx.one());
    ctx.neg(ctx.div(artin, a).expect("a nonzero"))
}

/// Coefficient of y^q in the tower step v*y^q + y = 1 at base coordinate a.
fn step_v(ctx: &FieldCtx, a: Element) -> Element {
    let artin = ctx.sub(ctx.add(ctx.pow(a, ctx.q()), a), ctx.one());
    ctx.div(artin, a).expect("a nonzero")
}

/// All level-1 points over a given nonzero a_1 seed, in branch order
/// (b_1 ascending, then c_1 ascending).
fn seed_points(ctx: &FieldCtx, caches: &mut SolveCaches, a1: Element) -> Vec<TowerPoint> {
    let b_cands = caches.kummer_solutions(ctx, b_rhs(ctx, a1));
    let c_cands = caches.kummer_solutions(ctx, c_rhs(ctx, a1));
    let mut out = Vec::with_capacity(b_cands.len() * c_cands.len());
    for &b1 in b_cands.iter() {
        for &c1 in c_cands.iter() {
            out.push(TowerPoint::new(ctx, vec![a1, b1, c1]));
        }
    }
    out
}

/// All extensions of a point by one level under the given model.
fn extensions(
    ctx: &FieldCtx,
    caches: &mut SolveCaches,
    pt: &TowerPoint,
    model: Model,
) -> Result<Vec<TowerPoint>> {
    let n = pt.level();
    let a_n = pt.a(n);
    if a_n.is_zero() {
        return Err(Error::DegenerateExtension);
    }
    let a_next = caches.affine_solutions(ctx, step_v(ctx, a_n));
    let mut out = Vec::new();
    for &an1 in a_next.iter() {
        debug_assert!(!an1.is_zero(), "0 never solves v*y^q + y = 1");
        match model {
            Model::Free => {
                let b_cands = caches.kummer_solutions(ctx, b_rhs(ctx, an1));
                let c_cands = caches.kummer_solutions(ctx, c_rhs(ctx, an1));
                for &b in b_cands.iter() {
                    for &c in c_cands.iter() {
                        let mut coords = pt.coords().to_vec();
                        coords.extend([an1, b, c]);
                        out.push(TowerPoint::new(ctx, coords));
                    }
                }
            }
            Model::Canonical => {
                let c = ctx.mul(an1, pt.b(n));
                let b = ctx.mul(ctx.mul(an1, ctx.sub(a_n, ctx.one())), pt.c(n));
                let mut coords = pt.coords().to_vec();
                coords.extend([an1, b, c]);
                out.push(TowerPoint::new(ctx, coords));
            }
        }
    }
    Ok(out)
}

/// One tower step: every level-(n+1) point over `pt` under the spec's model.
///
/// Free-model outputs carry all Kummer branches; canonical outputs pin
/// (b, c) by the product formulas, one extension per a-solution.
pub fn extend_point(ctx: &FieldCtx, pt: &TowerPoint, spec: &TowerSpec) -> Result<Vec<TowerPoint>> {
    let mut caches = SolveCaches::default();
    extensions(ctx, &mut caches, pt, spec.model())
}

enum CapCounter {
    Local(u64),
    Shared(Arc<AtomicU64>),
}

impl CapCounter {
    fn bump(&mut self) -> u64 {
        match self {
            CapCounter::Local(n) => {
                *n += 1;
                *n
            }
            CapCounter::Shared(n) => n.fetch_add(1, Ordering::Relaxed) + 1,
        }
    }
}

/// Deterministic stream of tower points at the spec's level.
///
/// Order: seeds a_1 in canonical element order, then solver output order at
/// each level. Disjoint seed ranges concatenated in order reproduce the
/// serial stream exactly.
pub struct PointStream {
    ctx: FieldCtx,
    model: Model,
    target: u32,
    next_seed: u64,
    seed_end: u64,
    buf: VecDeque<TowerPoint>,
    caches: SolveCaches,
    counter: CapCounter,
    cap: u64,
    failed: bool,
    skipped_seeds: u64,
}

impl PointStream {
    fn new(ctx: &FieldCtx, spec: &TowerSpec, opts: &EnumOpts, counter: CapCounter) -> PointStream {
        let (start, end) = opts.seed_range.unwrap_or((0, ctx.size()));
        PointStream {
            ctx: ctx.clone(),
            model: spec.model(),
            target: spec.level(),
            next_seed: start,
            seed_end: end.min(ctx.size()),
            buf: VecDeque::new(),
            caches: SolveCaches::default(),
            counter,
            cap: opts.max_points,
            failed: false,
            skipped_seeds: 0,
        }
    }

    /// Seeds skipped so far because a_1 = 0 admits no solution.
    pub fn skipped_seeds(&self) -> u64 {
        self.skipped_seeds
    }

    fn fill_from_next_seed(&mut self) -> Result<()> {
        while self.buf.is_empty() && self.next_seed < self.seed_end {
            let code = self.next_seed;
            self.next_seed += 1;
            if code == 0 {
                self.skipped_seeds += 1;
                continue;
            }
            let a1 = self.ctx.element_from_code(code).expect("in range");
            let mut frontier = seed_points(&self.ctx, &mut self.caches, a1);
            for _ in 1..self.target {
                let mut next = Vec::new();
                for pt in &frontier {
                    next.extend(extensions(&self.ctx, &mut self.caches, pt, self.model)?);
                }
                frontier = next;
                if frontier.is_empty() {
                    break;
                }
            }
            self.buf.extend(frontier);
        }
        Ok(())
    }
}

impl Iterator for PointStream {
    type Item = Result<TowerPoint>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        if self.buf.is_empty() {
            if let Err(e) = self.fill_from_next_seed() {
                self.failed = true;
                return Some(Err(e));
            }
        }
        let pt = self.buf.pop_front()?;
        if self.counter.bump() > self.cap {
            self.failed = true;
            return Some(Err(Error::PointCapExceeded { cap: self.cap }));
        }
        Some(Ok(pt))
    }
}

/// Stream every point of the spec's level in canonical order.
pub fn enumerate_points(ctx: &FieldCtx, spec: &TowerSpec, opts: &EnumOpts) -> PointStream {
    PointStream::new(ctx, spec, opts, CapCounter::Local(0))
}

/// Split the seed space into `workers` contiguous ranges of near-equal size.
pub fn partition_seed_ranges(ctx: &FieldCtx, workers: usize) -> Vec<(u64, u64)> {
    let workers = workers.max(1) as u64;
    let size = ctx.size();
    let chunk = size.div_ceil(workers);
    (0..workers)
        .map(|w| (w * chunk, ((w + 1) * chunk).min(size)))
        .filter(|(s, e)| s < e)
        .collect()
}

/// Fold over every enumerated point, optionally in parallel over disjoint
/// a_1-ranges. Partial results are merged in seed order, so the outcome is
/// identical for any worker count.
pub fn parallel_fold<T, I, S, M>(
    ctx: &FieldCtx,
    spec: &TowerSpec,
    opts: &EnumOpts,
    workers: usize,
    init: I,
    step: S,
    mut merge: M,
) -> Result<T>
where
    T: Send,
    I: Fn() -> T + Sync,
    S: Fn(&mut T, &TowerPoint) + Sync,
    M: FnMut(T, T) -> T,
{
    let (lo, hi) = opts.seed_range.unwrap_or((0, ctx.size()));
    if workers <= 1 {
        let mut acc = init();
        for pt in enumerate_points(ctx, spec, opts) {
            step(&mut acc, &pt?);
        }
        return Ok(acc);
    }
    let shared = Arc::new(AtomicU64::new(0));
    let ranges: Vec<(u64, u64)> = partition_seed_ranges(ctx, workers)
        .into_iter()
        .map(|(s, e)| (s.max(lo), e.min(hi)))
        .filter(|(s, e)| s < e)
        .collect();
    let results: Vec<Result<T>> = std::thread::scope(|scope| {
        let handles: Vec<_> = ranges
            .iter()
            .map(|&(s, e)| {
                let shared = shared.clone();
                let init = &init;
                let step = &step;
                scope.spawn(move || -> Result<T> {
                    let sub_opts = EnumOpts {
                        seed_range: Some((s, e)),
                        max_points: opts.max_points,
                    };
                    let stream = PointStream::new(ctx, spec, &sub_opts, CapCounter::Shared(shared));
                    let mut acc = init();
                    for pt in stream {
                        step(&mut acc, &pt?);
                    }
                    Ok(acc)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    let mut acc: Option<T> = None;
    for r in results {
        let t = r?;
        acc = Some(match acc {
            None => t,
            Some(prev) => merge(prev, t),
        });
    }
    Ok(acc.unwrap_or_else(init))
}

/// Histogram of branch sizes, serialized as sorted (size, frequency) pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BranchHistogram(pub BTreeMap<u64, u64>);

impl BranchHistogram {
    fn record(&mut self, size: u64) {
        *self.0.entry(size).or_insert(0) += 1;
    }

    fn absorb(&mut self, other: &BranchHistogram) {
        for (&s, &c) in &other.0 {
            *self.0.entry(s).or_insert(0) += c;
        }
    }
}

impl Serialize for BranchHistogram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<(u64, u64)> = self.0.iter().map(|(&a, &b)| (a, b)).collect();
        pairs.serialize(s)
    }
}

/// Exact point totals for one enumeration run.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CountReport {
    pub q: u64,
    pub k: u32,
    pub level: u32,
    pub model: Model,
    /// Points at the top level.
    pub points: u64,
    pub non_degenerate: u64,
    /// Points at each level 1..=n.
    pub points_per_level: Vec<u64>,
    /// Seeds skipped because a_1 = 0.
    pub skipped_seeds: u64,
    /// Per tower step i -> i+1: number of a-solutions per parent.
    pub a_branch_hist: Vec<BranchHistogram>,
    /// Per level: number of (b, c) branches per a-candidate.
    pub kummer_branch_hist: Vec<BranchHistogram>,
    /// 2(q^2-1)/(q+2), for display next to the totals.
    pub reference_ratio: Rational,
}

#[derive(Default)]
struct CountStats {
    per_level: Vec<u64>,
    top_points: u64,
    top_non_degenerate: u64,
    skipped_seeds: u64,
    a_branch: Vec<BranchHistogram>,
    kummer_branch: Vec<BranchHistogram>,
}

impl CountStats {
    fn sized(levels: u32) -> CountStats {
        CountStats {
            per_level: vec![0; levels as usize],
            a_branch: vec![BranchHistogram::default(); levels.saturating_sub(1) as usize],
            kummer_branch: vec![BranchHistogram::default(); levels as usize],
            ..CountStats::default()
        }
    }

    fn merge(mut self, other: CountStats) -> CountStats {
        for (a, b) in self.per_level.iter_mut().zip(&other.per_level) {
            *a += b;
        }
        self.top_points += other.top_points;
        self.top_non_degenerate += other.top_non_degenerate;
        self.skipped_seeds += other.skipped_seeds;
        for (a, b) in self.a_branch.iter_mut().zip(&other.a_branch) {
            a.absorb(b);
        }
        for (a, b) in self.kummer_branch.iter_mut().zip(&other.kummer_branch) {
            a.absorb(b);
        }
        self
    }
}

fn count_seed_range(
    ctx: &FieldCtx,
    spec: &TowerSpec,
    range: (u64, u64),
    cap: &AtomicU64,
    max_points: u64,
) -> Result<CountStats> {
    let target = spec.level();
    let mut caches = SolveCaches::default();
    let mut stats = CountStats::sized(target);
    for code in range.0..range.1 {
        if code == 0 {
            stats.skipped_seeds += 1;
            continue;
        }
        let a1 = ctx.element_from_code(code).expect("in range");
        // level-1 kummer branching per seed
        let b_cands = caches.kummer_solutions(ctx, b_rhs(ctx, a1)).len() as u64;
        let c_cands = caches.kummer_solutions(ctx, c_rhs(ctx, a1)).len() as u64;
        stats.kummer_branch[0].record(b_cands * c_cands);
        let mut frontier = seed_points(ctx, &mut caches, a1);
        stats.per_level[0] += frontier.len() as u64;
        for lvl in 1..target {
            let mut next = Vec::new();
            for pt in &frontier {
                let exts = extensions(ctx, &mut caches, pt, spec.model())?;
                let a_sols = caches
                    .affine_solutions(ctx, step_v(ctx, pt.a(pt.level())))
                    .len() as u64;
                stats.a_branch[lvl as usize - 1].record(a_sols);
                if let Some(per_a) = (exts.len() as u64).checked_div(a_sols) {
                    stats.kummer_branch[lvl as usize].record(per_a);
                }
                next.extend(exts);
            }
            frontier = next;
            stats.per_level[lvl as usize] += frontier.len() as u64;
            if frontier.is_empty() {
                break;
            }
        }
        stats.top_points += frontier.len() as u64;
        stats.top_non_degenerate += frontier.iter().filter(|p| !p.is_degenerate()).count() as u64;
        if cap.fetch_add(frontier.len() as u64, Ordering::Relaxed) + frontier.len() as u64
            > max_points
        {
            return Err(Error::PointCapExceeded { cap: max_points });
        }
    }
    Ok(stats)
}

/// Exact totals with per-level branching histograms.
pub fn count_points(
    ctx: &FieldCtx,
    spec: &TowerSpec,
    opts: &EnumOpts,
    workers: usize,
) -> Result<CountReport> {
    let (lo, hi) = opts.seed_range.unwrap_or((0, ctx.size()));
    let cap = AtomicU64::new(0);
    let ranges: Vec<(u64, u64)> = partition_seed_ranges(ctx, workers)
        .into_iter()
        .map(|(s, e)| (s.max(lo), e.min(hi)))
        .filter(|(s, e)| s < e)
        .collect();
    let results: Vec<Result<CountStats>> = if workers <= 1 {
        ranges
            .iter()
            .map(|&r| count_seed_range(ctx, spec, r, &cap, opts.max_points))
            .collect()
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = ranges
                .iter()
                .map(|&r| {
                    let cap = &cap;
                    scope.spawn(move || count_seed_range(ctx, spec, r, cap, opts.max_points))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("worker panicked"))
                .collect()
        })
    };
    let mut stats = CountStats::sized(spec.level());
    for r in results {
        stats = stats.merge(r?);
    }
    let q = ctx.q();
    Ok(CountReport {
        q,
        k: ctx.k(),
        level: spec.level(),
        model: spec.model(),
        points: stats.top_points,
        non_degenerate: stats.top_non_degenerate,
        points_per_level: stats.per_level,
        skipped_seeds: stats.skipped_seeds,
        a_branch_hist: stats.a_branch,
        kummer_branch_hist: stats.kummer_branch,
        reference_ratio: Rational::new(2 * (q as i64 * q as i64 - 1), q as i64 + 2),
    })
}

/// Which coordinate families a point export includes.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Projection {
    All,
    /// a-coordinates only.
    A,
    /// a- and b-coordinates.
    AB,
    /// c-coordinates only.
    C,
}

impl Projection {
    fn keep(self, class: VarClass) -> bool {
        match self {
            Projection::All => true,
            Projection::A => class == VarClass::A,
            Projection::AB => class != VarClass::C,
            Projection::C => class == VarClass::C,
        }
    }
}

/// Write the point stream as CSV: one row per point, coordinates serialized
/// as little-endian base-p digit groups (inner digits joined by '.', outer
/// coordinates by ':').
pub fn write_points_csv<W: Write>(
    ctx: &FieldCtx,
    spec: &TowerSpec,
    opts: &EnumOpts,
    projection: Projection,
    out: W,
) -> Result<u64> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec![
        "level".to_string(),
        "degenerate".to_string(),
        "reasons".to_string(),
    ];
    for i in 1..=spec.level() {
        for class in [VarClass::A, VarClass::B, VarClass::C] {
            if projection.keep(class) {
                header.push(format!("{}{}", class.letter(), i));
            }
        }
    }
    w.write_record(&header)
        .map_err(|e| Error::Io(e.to_string()))?;
    let mut rows = 0u64;
    for pt in enumerate_points(ctx, spec, opts) {
        let pt = pt?;
        let mut row = vec![
            pt.level().to_string(),
            (pt.is_degenerate() as u8).to_string(),
            pt.reasons()
                .iter()
                .map(|r| r.to_string())
                .collect::<Vec<_>>()
                .join(";"),
        ];
        for i in 1..=pt.level() {
            for (class, e) in [
                (VarClass::A, pt.a(i)),
                (VarClass::B, pt.b(i)),
                (VarClass::C, pt.c(i)),
            ] {
                if projection.keep(class) {
                    row.push(crate::report::element_digits(ctx, e));
                }
            }
        }
        w.write_record(&row).map_err(|e| Error::Io(e.to_string()))?;
        rows += 1;
    }
    w.flush()?;
    Ok(rows)
}
