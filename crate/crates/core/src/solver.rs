//! Complete backtracking search for colorings of `[1, n]` with no monochromatic triple.
//!
//! Positions are colored in increasing order. Each position carries a mask of the
//! colors it may still take; whenever two elements of a triple are pinned to the same
//! color, that color is removed from the third. An empty mask prunes the branch, and a
//! mask that shrinks to one color pins that position in turn.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};

use crate::coloring::Coloring;
use crate::error::{Error, Result};
use crate::triple::{enumerate_triples, FamilyParams, MAX_N};

/// Colors are held in a `u64` mask.
pub const MAX_COLORS: u32 = 64;

const BRUTE_FORCE_CAP: u64 = 1 << 24;
const UNSET: u8 = u8::MAX;
const FLUSH_EVERY: u64 = 1 << 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Largest `n` that `find_n` will try.
    pub max_n: u32,
    /// Per-call cap on decision nodes; exceeding it yields `Cutoff`.
    pub node_budget: Option<u64>,
    pub symmetry_breaking: bool,
    /// Number of worker threads; `0` and `1` both mean sequential.
    pub parallel_width: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_n: 2000,
            node_budget: None,
            symmetry_breaking: true,
            parallel_width: 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SearchStatus {
    Colorable,
    Unsatisfiable,
    Cutoff,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    /// Present iff `status == Colorable`.
    pub witness: Option<Coloring>,
    pub nodes: u64,
}

/// Result of searching for `n(a,b;r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FindN {
    /// `n` is the least integer for which every r-coloring of `[1, n]` has a
    /// monochromatic triple; `witness` is a valid coloring of `[1, n - 1]`.
    Exact {
        n: u32,
        witness: Coloring,
        nodes: u64,
    },
    /// Only `n(a,b;r) > lower` is known. `cutoff` is set when a node budget stopped
    /// the search before `max_n` was reached.
    LowerBoundOnly {
        lower: u32,
        witness: Coloring,
        cutoff: bool,
        nodes: u64,
    },
}

impl FindN {
    pub fn exact(&self) -> Option<u32> {
        match self {
            FindN::Exact { n, .. } => Some(*n),
            FindN::LowerBoundOnly { .. } => None,
        }
    }

    pub fn nodes(&self) -> u64 {
        match self {
            FindN::Exact { nodes, .. } | FindN::LowerBoundOnly { nodes, .. } => *nodes,
        }
    }

    pub fn witness(&self) -> &Coloring {
        match self {
            FindN::Exact { witness, .. } | FindN::LowerBoundOnly { witness, .. } => witness,
        }
    }
}

/// One triple seen from one of its elements: the other two elements and the
/// triple's largest element `z`.
#[derive(Clone, Copy, Debug)]
struct Link {
    p: u32,
    q: u32,
    z: u32,
}

/// For each position, the triples containing it with `z <= cap`, sorted by `z`.
struct Constraints {
    cap: usize,
    offsets: Vec<u32>,
    links: Vec<Link>,
}

impl Constraints {
    fn build(params: FamilyParams, cap: usize) -> Self {
        let mut around: Vec<Vec<Link>> = vec![Vec::new(); cap + 1];
        for t in enumerate_triples(params, cap as u64) {
            let (x, y, z) = (t.x as u32, t.y as u32, t.z as u32);
            around[x as usize].push(Link { p: y, q: z, z });
            around[y as usize].push(Link { p: x, q: z, z });
            around[z as usize].push(Link { p: x, q: y, z });
        }
        let mut offsets = Vec::with_capacity(cap + 2);
        let mut links = Vec::new();
        offsets.push(0);
        for mut list in around {
            list.sort_unstable_by_key(|l| (l.z, l.p));
            links.extend(list);
            offsets.push(links.len() as u32);
        }
        Constraints {
            cap,
            offsets,
            links,
        }
    }

    fn around(&self, pos: usize) -> &[Link] {
        &self.links[self.offsets[pos] as usize..self.offsets[pos + 1] as usize]
    }
}

enum Step {
    Colorable(Vec<u8>),
    Exhausted,
    Cutoff,
    Abandoned,
}

struct Budget<'a> {
    limit: Option<u64>,
    /// Nodes not yet flushed to `shared`.
    local: u64,
    total: u64,
    shared: Option<&'a AtomicU64>,
    stop: Option<&'a dyn Fn() -> bool>,
}

impl Budget<'_> {
    fn sequential(limit: Option<u64>) -> Budget<'static> {
        Budget {
            limit,
            local: 0,
            total: 0,
            shared: None,
            stop: None,
        }
    }

    /// Counts one node; returns `Some(step)` when the search must stop.
    #[inline]
    fn tick(&mut self) -> Option<Step> {
        self.local += 1;
        self.total += 1;
        match self.shared {
            None => match self.limit {
                Some(limit) if self.total > limit => Some(Step::Cutoff),
                _ => None,
            },
            Some(shared) => {
                if self.local < FLUSH_EVERY {
                    return None;
                }
                let seen = shared.fetch_add(self.local, Ordering::Relaxed) + self.local;
                self.local = 0;
                if matches!(self.limit, Some(limit) if seen > limit) {
                    return Some(Step::Cutoff);
                }
                if self.stop.is_some_and(|stop| stop()) {
                    return Some(Step::Abandoned);
                }
                None
            }
        }
    }

    fn flush(&mut self) {
        if let Some(shared) = self.shared {
            shared.fetch_add(self.local, Ordering::Relaxed);
        }
        self.local = 0;
    }
}

/// Search state. Every position keeps a mask of colors still allowed; a position
/// whose mask is a single color is treated as colored for propagation, so any
/// triple with two such positions of color `c` removes `c` from the third.
struct Searcher<'a> {
    cons: &'a Constraints,
    n: usize,
    r: u8,
    symmetry: bool,
    domain: Vec<u64>,
    /// Decision made at each position, `UNSET` if none yet.
    color: Vec<u8>,
    /// Number of distinct colors decided on `[1, m]`.
    used: Vec<u8>,
    next: Vec<u8>,
    mark: Vec<usize>,
    /// `(position, removed colors)`, undone on backtrack.
    trail: Vec<(u32, u64)>,
    queue: Vec<u32>,
}

impl<'a> Searcher<'a> {
    fn new(cons: &'a Constraints, n: usize, r: u8, symmetry: bool) -> Self {
        debug_assert!(n <= cons.cap);
        let full = if r == 64 { u64::MAX } else { (1u64 << r) - 1 };
        Searcher {
            cons,
            n,
            r,
            symmetry,
            domain: vec![full; n + 1],
            color: vec![UNSET; n + 1],
            used: vec![0; n + 1],
            next: vec![0; n + 2],
            mark: vec![0; n + 1],
            trail: Vec::new(),
            queue: Vec::new(),
        }
    }

    fn color_limit(&self, pos: usize) -> u8 {
        if self.symmetry {
            self.r.min(self.used[pos - 1] + 1)
        } else {
            self.r
        }
    }

    fn allows(&self, pos: usize, c: u8) -> bool {
        self.domain[pos] & (1u64 << c) != 0
    }

    /// Removes `bits` from the domain of `pos`; false on an empty domain.
    #[inline]
    fn remove(&mut self, pos: u32, bits: u64) -> bool {
        let d = self.domain[pos as usize];
        let nd = d & !bits;
        if nd == d {
            return true;
        }
        self.domain[pos as usize] = nd;
        self.trail.push((pos, d & bits));
        if nd == 0 {
            return false;
        }
        if nd & (nd - 1) == 0 {
            self.queue.push(pos);
        }
        true
    }

    fn propagate(&mut self) -> bool {
        let n = self.n as u32;
        while let Some(pos) = self.queue.pop() {
            let single = self.domain[pos as usize];
            for &link in self.cons.around(pos as usize) {
                if link.z > n {
                    break;
                }
                let dp = self.domain[link.p as usize];
                let dq = self.domain[link.q as usize];
                let ok = if dp == single {
                    self.remove(link.q, single)
                } else if dq == single {
                    self.remove(link.p, single)
                } else {
                    true
                };
                if !ok {
                    self.queue.clear();
                    return false;
                }
            }
        }
        true
    }

    /// Colors `pos` with `c` and propagates; the caller must `unassign` on failure.
    fn assign(&mut self, pos: usize, c: u8) -> bool {
        self.mark[pos] = self.trail.len();
        self.color[pos] = c;
        self.used[pos] = self.used[pos - 1].max(c + 1);
        let others = self.domain[pos] & !(1u64 << c);
        if !self.remove(pos as u32, others) {
            return false;
        }
        if others == 0 {
            self.queue.push(pos as u32);
        }
        self.propagate()
    }

    fn unassign(&mut self, pos: usize) {
        let mark = self.mark[pos];
        for &(p, bits) in &self.trail[mark..] {
            self.domain[p as usize] |= bits;
        }
        self.trail.truncate(mark);
        self.color[pos] = UNSET;
    }

    /// Applies a fixed prefix; false if the prefix itself is inconsistent.
    fn apply_prefix(&mut self, prefix: &[u8]) -> bool {
        for (i, &c) in prefix.iter().enumerate() {
            let pos = i + 1;
            if c >= self.color_limit(pos) || !self.allows(pos, c) {
                return false;
            }
            if !self.assign(pos, c) {
                return false;
            }
        }
        true
    }

    /// Depth-first search over positions `floor + 1 ..= n`.
    fn run(&mut self, floor: usize, budget: &mut Budget<'_>) -> Step {
        let mut pos = floor + 1;
        if pos > self.n {
            return Step::Colorable(self.color[1..].to_vec());
        }
        self.next[pos] = 0;
        loop {
            let limit = self.color_limit(pos);
            let mut c = self.next[pos];
            let mut placed = false;
            while c < limit {
                if self.allows(pos, c) {
                    if let Some(stop) = budget.tick() {
                        return stop;
                    }
                    let ok = self.assign(pos, c);
                    self.next[pos] = c + 1;
                    if ok {
                        placed = true;
                        break;
                    }
                    self.unassign(pos);
                }
                c += 1;
            }
            if placed {
                pos += 1;
                if pos > self.n {
                    return Step::Colorable(self.color[1..].to_vec());
                }
                self.next[pos] = 0;
            } else {
                pos -= 1;
                if pos <= floor {
                    return Step::Exhausted;
                }
                self.unassign(pos);
            }
        }
    }

    /// All consistent assignments of `[1, depth]` in search order.
    fn prefixes(&mut self, depth: usize, out: &mut Vec<Vec<u8>>) {
        self.prefixes_from(1, depth, out);
    }

    fn prefixes_from(&mut self, pos: usize, depth: usize, out: &mut Vec<Vec<u8>>) {
        if pos > depth {
            out.push(self.color[1..=depth].to_vec());
            return;
        }
        for c in 0..self.color_limit(pos) {
            if !self.allows(pos, c) {
                continue;
            }
            if self.assign(pos, c) {
                self.prefixes_from(pos + 1, depth, out);
            }
            self.unassign(pos);
        }
    }
}

fn check_inputs(r: u32, n: u32) -> Result<()> {
    if r == 0 || r > MAX_COLORS {
        return Err(Error::InvalidColorCount { r, max: MAX_COLORS });
    }
    if n == 0 {
        return Err(Error::EmptyColoring);
    }
    if u64::from(n) > MAX_N {
        return Err(Error::DomainTooLarge(n.into()));
    }
    Ok(())
}

/// Decides whether some r-coloring of `[1, n]` avoids monochromatic triples.
///
/// Without a node budget the status and witness do not depend on `parallel_width`;
/// the witness is the lexicographically least valid coloring.
pub fn decide(params: FamilyParams, r: u32, n: u32, cfg: &SearchConfig) -> Result<SearchOutcome> {
    check_inputs(r, n)?;
    let cons = Constraints::build(params, n as usize);
    Ok(decide_with(&cons, r, n as usize, cfg))
}

fn decide_with(cons: &Constraints, r: u32, n: usize, cfg: &SearchConfig) -> SearchOutcome {
    let r = r as u8;
    if cfg.parallel_width <= 1 {
        let mut searcher = Searcher::new(cons, n, r, cfg.symmetry_breaking);
        let mut budget = Budget::sequential(cfg.node_budget);
        let step = searcher.run(0, &mut budget);
        return finish(step, r, budget.total);
    }
    decide_parallel(cons, r, n, cfg)
}

fn finish(step: Step, r: u8, nodes: u64) -> SearchOutcome {
    match step {
        Step::Colorable(colors) => SearchOutcome {
            status: SearchStatus::Colorable,
            witness: Some(
                Coloring::new(r.into(), colors.into_iter().map(u32::from).collect())
                    .expect("search assigns colors below r"),
            ),
            nodes,
        },
        Step::Exhausted => SearchOutcome {
            status: SearchStatus::Unsatisfiable,
            witness: None,
            nodes,
        },
        Step::Cutoff | Step::Abandoned => SearchOutcome {
            status: SearchStatus::Cutoff,
            witness: None,
            nodes,
        },
    }
}

fn decide_parallel(cons: &Constraints, r: u8, n: usize, cfg: &SearchConfig) -> SearchOutcome {
    let width = cfg.parallel_width;
    // Split deep enough to give every worker several subtrees.
    let mut depth = 1;
    let mut prefixes = Vec::new();
    loop {
        prefixes.clear();
        Searcher::new(cons, n, r, cfg.symmetry_breaking).prefixes(depth, &mut prefixes);
        if prefixes.len() >= 8 * width || depth >= n || prefixes.is_empty() {
            break;
        }
        depth += 1;
    }

    let shared = AtomicU64::new(prefixes.len() as u64 * depth as u64);
    let best = AtomicUsize::new(usize::MAX);
    let cut = AtomicBool::new(false);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(width).build() {
        Ok(pool) => pool,
        Err(_) => {
            let seq = SearchConfig {
                parallel_width: 1,
                ..cfg.clone()
            };
            return decide_with(cons, r.into(), n, &seq);
        }
    };

    let steps: Vec<Step> = pool.install(|| {
        prefixes
            .par_iter()
            .enumerate()
            .map(|(i, prefix)| {
                if best.load(Ordering::Relaxed) < i || cut.load(Ordering::Relaxed) {
                    return Step::Abandoned;
                }
                let stop = || best.load(Ordering::Relaxed) < i || cut.load(Ordering::Relaxed);
                let mut budget = Budget {
                    limit: cfg.node_budget,
                    local: 0,
                    total: 0,
                    shared: Some(&shared),
                    stop: Some(&stop),
                };
                let mut searcher = Searcher::new(cons, n, r, cfg.symmetry_breaking);
                let step = if searcher.apply_prefix(prefix) {
                    searcher.run(depth, &mut budget)
                } else {
                    Step::Exhausted
                };
                budget.flush();
                match step {
                    Step::Colorable(_) => {
                        best.fetch_min(i, Ordering::Relaxed);
                    }
                    Step::Cutoff => cut.store(true, Ordering::Relaxed),
                    _ => {}
                }
                step
            })
            .collect()
    });

    let nodes = shared.load(Ordering::Relaxed);
    let mut status = Step::Exhausted;
    for step in steps {
        match step {
            Step::Colorable(_) => return finish(step, r, nodes),
            Step::Cutoff | Step::Abandoned => status = Step::Cutoff,
            Step::Exhausted => {}
        }
    }
    // With no subtree colorable, an abandoned subtree can only come from a cutoff.
    finish(status, r, nodes)
}

/// Computes `n(a,b;r)` by deciding `n = b + 2, b + 3, ...` until the first
/// unsatisfiable instance or `cfg.max_n`.
pub fn find_n(params: FamilyParams, r: u32, cfg: &SearchConfig) -> Result<FindN> {
    check_inputs(r, cfg.max_n)?;
    let start = params.min_span();
    // [1, b + 1] holds no triple, so the all-zero coloring witnesses it.
    let mut witness = Coloring::constant((start - 1) as usize)?;
    let mut nodes = 0;
    if start > u64::from(cfg.max_n) {
        return Ok(FindN::LowerBoundOnly {
            lower: witness.n() as u32,
            witness,
            cutoff: false,
            nodes,
        });
    }
    let start = start as u32;
    let mut cons = Constraints::build(params, (2 * start as usize).min(cfg.max_n as usize));
    for n in start..=cfg.max_n {
        if n as usize > cons.cap {
            let cap = (2 * cons.cap).clamp(n as usize, cfg.max_n as usize);
            cons = Constraints::build(params, cap);
        }
        let outcome = decide_with(&cons, r, n as usize, cfg);
        nodes += outcome.nodes;
        match outcome.status {
            SearchStatus::Colorable => {
                witness = outcome
                    .witness
                    .expect("colorable outcome carries a witness");
            }
            SearchStatus::Unsatisfiable => return Ok(FindN::Exact { n, witness, nodes }),
            SearchStatus::Cutoff => {
                return Ok(FindN::LowerBoundOnly {
                    lower: n - 1,
                    witness,
                    cutoff: true,
                    nodes,
                })
            }
        }
    }
    Ok(FindN::LowerBoundOnly {
        lower: cfg.max_n,
        witness,
        cutoff: false,
        nodes,
    })
}

/// Independent oracle: tries every r-coloring of `[1, n]` against every triple.
pub fn brute_force_decide(params: FamilyParams, r: u32, n: u32) -> Result<bool> {
    check_inputs(r, n)?;
    let total = u64::from(r)
        .checked_pow(n)
        .filter(|&t| t <= BRUTE_FORCE_CAP)
        .ok_or(Error::BruteForceCap { r, n })?;
    let triples: Vec<[usize; 3]> = enumerate_triples(params, n.into())
        .map(|t| [t.x as usize - 1, t.y as usize - 1, t.z as usize - 1])
        .collect();
    let mut colors = vec![0u32; n as usize];
    for code in 0..total {
        let mut rest = code;
        for slot in colors.iter_mut() {
            *slot = (rest % u64::from(r)) as u32;
            rest /= u64::from(r);
        }
        let valid = triples
            .iter()
            .all(|&[x, y, z]| !(colors[x] == colors[y] && colors[y] == colors[z]));
        if valid {
            return Ok(true);
        }
    }
    Ok(false)
}
