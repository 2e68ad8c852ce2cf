//! Workbook of related parameter triples and the fixed-point sieve over it.
//!
//! Row 0 holds `(τ, M, τ), (τ+1, M, τ), …, (n, M, τ)`; every further row
//! halves `M` and lowers the strength by one, so row `r` holds
//! `(m, M/2^r, τ − r)` for `m = τ − r ..= n − r`. A cell is sieved against
//! its left neighbour (one column deleted) and the cell below that
//! neighbour (the halves of a column split). Removals only ever shrink the
//! sets, so the process stops, and the fixed point it reaches does not depend
//! on the order in which cells are visited.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::{
    classify, enumerate_initial, mirror, DistanceDistribution, DistributionSet, ParameterTriple,
    SetKind,
};
use crate::error::{Error, Result};
use crate::sieves::{
    multiplicity_feasible, multiplicity_support, pair_ruling, solve_column_deletion,
    MultiplicityInstance, PairWitness, Rule,
};

/// Default lowest strength of the workbook rows.
pub const DEFAULT_MIN_STRENGTH: usize = 2;

/// Order in which the cells of one pass are visited.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Schedule {
    /// Rows bottom to top, cells left to right.
    #[default]
    BottomUp,
    /// Rows top to bottom, cells right to left.
    Reversed,
    /// A fresh random permutation every pass.
    Shuffled(u64),
}

/// When removals found during a pass become visible to later cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Visibility {
    /// Every cell reads the sets as they were at the start of the pass.
    #[default]
    Snapshot,
    /// Removals are committed as soon as a cell finishes, and inside a cell a
    /// ruled-out distribution can no longer serve as a flipped-column image.
    Immediate,
}

/// What the bottom row uses in place of the missing row below it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Floor {
    /// Check halves against the initial (unsieved) sets one strength down.
    #[default]
    Initial,
    /// Skip the half-array checks on the bottom row.
    Unchecked,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SieveOptions {
    pub schedule: Schedule,
    pub visibility: Visibility,
    pub floor: Floor,
}

/// One logged ruling.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Removal {
    pub pass: usize,
    pub triple: ParameterTriple,
    pub kind: SetKind,
    pub w: DistanceDistribution,
    pub rule: Rule,
    /// Set for rulings on a pair `(w, w′)` rather than on `w` itself.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wprime: Option<DistanceDistribution>,
}

#[derive(Debug, Clone)]
struct Cell {
    row: usize,
    initial: DistributionSet,
    current: DistributionSet,
    version: u64,
}

/// Versions of (own, left, below) at a cell's last evaluation.
type Stamp = (u64, u64, u64);

/// Per-cell pair cache: for each `w`, the column-deletion solutions that
/// have not been ruled out yet.
type PairCache = HashMap<DistanceDistribution, PairEntry>;

#[derive(Debug, Clone, Default)]
struct PairEntry {
    witnesses: Vec<PairWitness>,
    /// The multiplicity system of `witnesses` is known to be solvable with
    /// every solution in its support.
    settled: bool,
}

/// The grid of triples, their current sets and the bookkeeping of a run.
#[derive(Debug, Clone)]
pub struct Workbook {
    target: ParameterTriple,
    min_strength: usize,
    rows: Vec<Vec<ParameterTriple>>,
    cells: BTreeMap<ParameterTriple, Cell>,
    floor: HashMap<ParameterTriple, DistributionSet>,
    pairs: HashMap<ParameterTriple, PairCache>,
    stamps: HashMap<ParameterTriple, Stamp>,
    removals: Vec<Removal>,
    passes: Vec<PassReport>,
}

/// Lays out the rows for `target` down to `min_strength` and enumerates the
/// initial set of every cell.
pub fn build_workbook(target: ParameterTriple, min_strength: usize) -> Result<Workbook> {
    let target = ParameterTriple::new(target.n, target.m, target.tau)?;
    if min_strength == 0 || target.tau < min_strength {
        return Err(Error::InvalidTriple {
            n: target.n,
            m: target.m,
            tau: target.tau,
            reason: format!("strength below the workbook floor {min_strength}"),
        });
    }
    let rows: Vec<Vec<ParameterTriple>> = (0..=target.tau - min_strength)
        .map(|r| {
            let tau = target.tau - r;
            let m = target.m >> r;
            (tau..=target.n - r)
                .map(|len| ParameterTriple { n: len, m, tau })
                .collect()
        })
        .collect();

    let all: Vec<(usize, ParameterTriple)> = rows
        .iter()
        .enumerate()
        .flat_map(|(r, row)| row.iter().map(move |&t| (r, t)))
        .collect();
    let cells = all
        .par_iter()
        .map(|&(row, t)| {
            let set = enumerate_initial(t, SetKind::W)?;
            Ok((
                t,
                Cell {
                    row,
                    initial: set.clone(),
                    current: set,
                    version: 0,
                },
            ))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;

    // Strength-(min_strength − 1) sets for the halves of the bottom row.
    let floor = rows
        .last()
        .into_iter()
        .flatten()
        .filter(|t| t.tau >= 2 && t.left().is_some())
        .filter_map(|t| t.derived())
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&d| Ok((d, enumerate_initial(d, SetKind::W)?)))
        .collect::<Result<HashMap<_, _>>>()?;

    Ok(Workbook {
        target,
        min_strength,
        rows,
        cells,
        floor,
        pairs: HashMap::new(),
        stamps: HashMap::new(),
        removals: Vec::new(),
        passes: Vec::new(),
    })
}

/// Existence status of a triple after the sieve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    /// No feasible distance distribution survives: no such array exists.
    Nonexistent,
    /// Survivors remain; they are necessary conditions only.
    Undecided { survivors: usize },
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Nonexistent => f.write_str("NONEXISTENT"),
            Verdict::Undecided { survivors } => write!(f, "UNDECIDED ({survivors} survivors)"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Counts {
    #[serde(rename = "P")]
    pub p: usize,
    #[serde(rename = "Q")]
    pub q: usize,
    #[serde(rename = "W")]
    pub w: usize,
}

impl Counts {
    fn of(set: &DistributionSet) -> Self {
        let p = set.iter().filter(|w| classify(w) == SetKind::P).count();
        Self {
            p,
            q: set.len() - p,
            w: set.len(),
        }
    }

    pub fn get(&self, kind: SetKind) -> usize {
        match kind {
            SetKind::P => self.p,
            SetKind::Q => self.q,
            SetKind::W => self.w,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellReport {
    pub triple: ParameterTriple,
    pub row: usize,
    pub initial: Counts,
    #[serde(rename = "final")]
    pub last: Counts,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PassReport {
    pub pass: usize,
    pub cells_sieved: usize,
    pub removals: usize,
    pub millis: f64,
}

/// Outcome of [`run_fixed_point`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub target: ParameterTriple,
    pub min_strength: usize,
    pub options: SieveOptions,
    pub cells: Vec<CellReport>,
    /// Removal counts per rule id, including rulings on pairs.
    pub rules: BTreeMap<String, usize>,
    pub passes: Vec<PassReport>,
    /// Cells where exactly one of `P`, `Q` ended empty.
    pub partial_emptiness: Vec<ParameterTriple>,
}

impl RunReport {
    pub fn cell(&self, triple: ParameterTriple) -> Option<&CellReport> {
        self.cells.iter().find(|c| c.triple == triple)
    }

    pub fn target_verdict(&self) -> Verdict {
        self.cell(self.target)
            .map(|c| c.verdict)
            .unwrap_or(Verdict::Undecided { survivors: 0 })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Count table in the layout of the published tables: one block per
    /// workbook row, one line per set kind, one column per length, and cells
    /// reading `initial->final`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let rows = self.cells.iter().map(|c| c.row).max().map_or(0, |r| r + 1);
        for r in 0..rows {
            let cells: Vec<&CellReport> = self.cells.iter().filter(|c| c.row == r).collect();
            let Some(first) = cells.first() else { continue };
            if r > 0 {
                out.push('\n');
            }
            out.push_str("set");
            for c in &cells {
                out.push_str(&format!(",n={}", c.triple.n));
            }
            out.push('\n');
            for kind in SetKind::ALL {
                out.push_str(&format!(
                    "\"{kind}(n,{},{})\"",
                    first.triple.m, first.triple.tau
                ));
                for c in &cells {
                    out.push_str(&format!(",{}->{}", c.initial.get(kind), c.last.get(kind)));
                }
                out.push('\n');
            }
        }
        out
    }
}

/// Result of sieving one cell against fixed inputs.
#[derive(Debug, Default)]
struct CellOutcome {
    removed: Vec<(DistanceDistribution, Rule)>,
    pairs: Vec<(DistanceDistribution, DistanceDistribution, Rule)>,
}

/// Applies the column-deletion, half-array, flipped-column and multiplicity
/// rules to every member of `own`.
fn sieve_cell(
    own: &DistributionSet,
    left: &DistributionSet,
    half: Option<&DistributionSet>,
    cache: &mut PairCache,
    intra_cell: bool,
) -> Result<CellOutcome> {
    let n = own.triple.n;
    let mut out = CellOutcome::default();
    let mut filtered: HashSet<DistanceDistribution> = HashSet::new();

    for w in own {
        let entry = match cache.get_mut(w) {
            Some(c) => c,
            None => {
                let fresh = left
                    .iter()
                    .filter_map(|wp| solve_column_deletion(w, wp).transpose())
                    .collect::<Result<Vec<_>>>()?;
                cache.entry(w.clone()).or_insert(PairEntry {
                    witnesses: fresh,
                    settled: false,
                })
            }
        };
        let before = entry.witnesses.len();
        let witnesses = &mut entry.witnesses;
        witnesses.retain(|wit| left.contains(&wit.wprime));
        if witnesses.is_empty() {
            out.removed.push((w.clone(), Rule::NoColumnDeletion));
            if intra_cell {
                filtered.insert(w.clone());
            }
            continue;
        }

        let mut kept = Vec::with_capacity(witnesses.len());
        for wit in witnesses.drain(..) {
            match pair_ruling(&wit, half, own, &filtered)? {
                None => kept.push(wit),
                Some(rule) => out.pairs.push((w.clone(), wit.wprime.clone(), rule)),
            }
        }
        *witnesses = kept;
        if witnesses.len() != before {
            entry.settled = false;
        }
        let witnesses = &mut entry.witnesses;
        if witnesses.is_empty() {
            out.removed.push((w.clone(), Rule::AllPairsRuledOut));
            if intra_cell {
                filtered.insert(w.clone());
            }
            continue;
        }

        if entry.settled {
            continue;
        }
        let instance = MultiplicityInstance::from_witnesses(w, witnesses.iter());
        if !multiplicity_feasible(&instance, n) {
            out.removed.push((w.clone(), Rule::NoMultiplicities));
            if intra_cell {
                filtered.insert(w.clone());
            }
            continue;
        }
        let support = multiplicity_support(&instance, n)?;
        if support.len() < instance.solutions.len() {
            let dead: HashSet<&DistanceDistribution> = instance
                .solutions
                .iter()
                .enumerate()
                .filter(|(j, _)| !support.contains(j))
                .map(|(_, (x, _))| x)
                .collect();
            witnesses.retain(|wit| {
                if dead.contains(&wit.x) {
                    out.pairs
                        .push((w.clone(), wit.wprime.clone(), Rule::ZeroMultiplicity));
                    false
                } else {
                    true
                }
            });
        }
        entry.settled = true;
    }
    Ok(out)
}

impl Workbook {
    pub fn target(&self) -> ParameterTriple {
        self.target
    }

    pub fn min_strength(&self) -> usize {
        self.min_strength
    }

    pub fn rows(&self) -> &[Vec<ParameterTriple>] {
        &self.rows
    }

    pub fn contains(&self, triple: ParameterTriple) -> bool {
        self.cells.contains_key(&triple)
    }

    /// Current `P`, `Q` or `W` set of a cell.
    pub fn set(&self, triple: ParameterTriple, kind: SetKind) -> Result<DistributionSet> {
        let cell = self.cell(triple)?;
        Ok(cell.current.restrict(kind))
    }

    pub fn initial_set(&self, triple: ParameterTriple, kind: SetKind) -> Result<DistributionSet> {
        Ok(self.cell(triple)?.initial.restrict(kind))
    }

    pub fn removals(&self) -> &[Removal] {
        &self.removals
    }

    /// Surviving witnesses cached for `(triple, w)`.
    pub fn pair_witnesses(
        &self,
        triple: ParameterTriple,
        w: &DistanceDistribution,
    ) -> Option<&[PairWitness]> {
        self.pairs.get(&triple)?.get(w).map(|e| e.witnesses.as_slice())
    }

    fn cell(&self, triple: ParameterTriple) -> Result<&Cell> {
        self.cells
            .get(&triple)
            .ok_or_else(|| Error::UnknownTriple(triple.to_string()))
    }

    /// Replaces the current sets from outside, e.g. when loading a cache.
    /// Only members of the initial set are kept.
    pub fn restore(&mut self, triple: ParameterTriple, set: &DistributionSet) -> Result<()> {
        let cell = self
            .cells
            .get_mut(&triple)
            .ok_or_else(|| Error::UnknownTriple(triple.to_string()))?;
        let keep: HashSet<&DistanceDistribution> = set.iter().collect();
        let mut next = cell.initial.clone();
        next.retain(|w| keep.contains(w));
        if next.len() != cell.current.len() {
            cell.current = next;
            cell.version += 1;
        }
        Ok(())
    }

    /// Cells that have a left neighbour, in the order a pass visits them.
    fn order(&self, schedule: Schedule, pass: usize) -> Vec<ParameterTriple> {
        let mut cells: Vec<ParameterTriple> = self
            .rows
            .iter()
            .rev()
            .flat_map(|row| row.iter().copied())
            .filter(|t| t.left().is_some_and(|l| self.cells.contains_key(&l)))
            .collect();
        match schedule {
            Schedule::BottomUp => {}
            Schedule::Reversed => cells.reverse(),
            Schedule::Shuffled(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(pass as u64));
                cells.shuffle(&mut rng);
            }
        }
        cells
    }

    fn half_of(&self, triple: ParameterTriple, floor: Floor) -> Option<&DistributionSet> {
        let d = triple.derived()?;
        match self.cells.get(&d) {
            Some(c) => Some(&c.current),
            None => match floor {
                Floor::Initial => self.floor.get(&d),
                Floor::Unchecked => None,
            },
        }
    }

    fn stamp(&self, triple: ParameterTriple) -> Stamp {
        let v = |t: Option<ParameterTriple>| {
            t.and_then(|t| self.cells.get(&t)).map_or(0, |c| c.version)
        };
        (v(Some(triple)), v(triple.left()), v(triple.derived()))
    }

    fn evaluate(
        &self,
        triple: ParameterTriple,
        options: &SieveOptions,
        cache: &mut PairCache,
    ) -> Result<CellOutcome> {
        let own = &self.cells[&triple].current;
        let left = &self.cells[&triple.left().expect("scheduled cells have a left neighbour")].current;
        let half = self.half_of(triple, options.floor);
        sieve_cell(
            own,
            left,
            half,
            cache,
            options.visibility == Visibility::Immediate,
        )
    }

    /// Applies the outcomes of one or more cells, adding mirror images.
    fn commit(&mut self, pass: usize, outcomes: Vec<(ParameterTriple, CellOutcome)>) -> usize {
        let mut removed = 0;
        for (triple, outcome) in outcomes {
            for (w, wp, rule) in outcome.pairs {
                self.removals.push(Removal {
                    pass,
                    triple,
                    kind: classify(&w),
                    w,
                    rule,
                    wprime: Some(wp),
                });
            }
            let cell = self.cells.get_mut(&triple).expect("known cell");
            let mut gone: BTreeMap<DistanceDistribution, Rule> = BTreeMap::new();
            for (w, rule) in outcome.removed {
                gone.insert(w, rule);
            }
            let mirrored: Vec<DistanceDistribution> = gone
                .keys()
                .map(mirror)
                .filter(|m| !gone.contains_key(m) && cell.current.contains(m))
                .collect();
            for m in mirrored {
                gone.insert(m, Rule::Mirror);
            }
            if gone.is_empty() {
                continue;
            }
            cell.current.retain(|w| !gone.contains_key(w));
            cell.version += 1;
            removed += gone.len();
            if let Some(cache) = self.pairs.get_mut(&triple) {
                for w in gone.keys() {
                    cache.remove(w);
                }
            }
            for (w, rule) in gone {
                self.removals.push(Removal {
                    pass,
                    triple,
                    kind: classify(&w),
                    w,
                    rule,
                    wprime: None,
                });
            }
        }
        removed
    }

    fn run_pass(&mut self, pass: usize, options: &SieveOptions) -> Result<(usize, usize)> {
        let order = self.order(options.schedule, pass);
        let stale: Vec<ParameterTriple> = order
            .into_iter()
            .filter(|t| self.stamps.get(t) != Some(&self.stamp(*t)))
            .collect();
        match options.visibility {
            Visibility::Snapshot => {
                let mut caches: Vec<(ParameterTriple, PairCache)> = stale
                    .iter()
                    .map(|t| (*t, self.pairs.remove(t).unwrap_or_default()))
                    .collect();
                let stamps: Vec<Stamp> = stale.iter().map(|t| self.stamp(*t)).collect();
                let this = &*self;
                let outcomes = caches
                    .par_iter_mut()
                    .map(|(t, cache)| Ok((*t, this.evaluate(*t, options, cache)?)))
                    .collect::<Result<Vec<_>>>()?;
                for (t, cache) in caches {
                    self.pairs.insert(t, cache);
                }
                for (t, s) in stale.iter().zip(stamps) {
                    self.stamps.insert(*t, s);
                }
                let removed = self.commit(pass, outcomes);
                Ok((stale.len(), removed))
            }
            Visibility::Immediate => {
                let mut removed = 0;
                let mut sieved = 0;
                for t in stale {
                    // Earlier cells in this pass may have refreshed the inputs.
                    let stamp = self.stamp(t);
                    if self.stamps.get(&t) == Some(&stamp) {
                        continue;
                    }
                    let mut cache = self.pairs.remove(&t).unwrap_or_default();
                    let outcome = self.evaluate(t, options, &mut cache);
                    self.pairs.insert(t, cache);
                    self.stamps.insert(t, stamp);
                    removed += self.commit(pass, vec![(t, outcome?)]);
                    sieved += 1;
                }
                Ok((sieved, removed))
            }
        }
    }

    /// Passes until one finds nothing to remove.
    pub fn run_fixed_point(&mut self, options: &SieveOptions) -> Result<RunReport> {
        loop {
            let pass = self.passes.len() + 1;
            let start = Instant::now();
            let (cells_sieved, removals) = self.run_pass(pass, options)?;
            self.passes.push(PassReport {
                pass,
                cells_sieved,
                removals,
                millis: start.elapsed().as_secs_f64() * 1e3,
            });
            if removals == 0 {
                break;
            }
        }
        Ok(self.report(options))
    }

    /// Existence status of `triple` from its current `W` set.
    pub fn verdict(&self, triple: ParameterTriple) -> Result<Verdict> {
        let cell = self.cell(triple)?;
        Ok(if cell.current.is_empty() {
            Verdict::Nonexistent
        } else {
            Verdict::Undecided {
                survivors: cell.current.len(),
            }
        })
    }

    pub fn report(&self, options: &SieveOptions) -> RunReport {
        let cells: Vec<CellReport> = self
            .rows
            .iter()
            .flatten()
            .map(|&t| {
                let c = &self.cells[&t];
                CellReport {
                    triple: t,
                    row: c.row,
                    initial: Counts::of(&c.initial),
                    last: Counts::of(&c.current),
                    verdict: self.verdict(t).expect("known cell"),
                }
            })
            .collect();
        let mut rules: BTreeMap<String, usize> =
            Rule::ALL.iter().map(|r| (r.id().to_owned(), 0)).collect();
        for r in &self.removals {
            *rules.entry(r.rule.id().to_owned()).or_default() += 1;
        }
        let partial_emptiness = cells
            .iter()
            .filter(|c| (c.last.p == 0) != (c.last.q == 0))
            .map(|c| c.triple)
            .collect();
        RunReport {
            target: self.target,
            min_strength: self.min_strength,
            options: *options,
            cells,
            rules,
            passes: self.passes.clone(),
            partial_emptiness,
        }
    }
}

/// Convenience wrapper for [`Workbook::run_fixed_point`].
pub fn run_fixed_point(workbook: &mut Workbook, options: &SieveOptions) -> Result<RunReport> {
    workbook.run_fixed_point(options)
}

/// Extends a list of verdicts with the nonexistence results that follow
/// from it:
///
/// * `(n, N, 2k)` and `(n + 1, 2N, 2k + 1)` arrays exist or fail to exist
///   together, in both directions;
/// * if no `(n, M, τ)` array exists, neither does an `(n + 1, M, τ)` array,
///   since deleting a column of the latter would give the former.
///
/// The result keeps the input order, followed by new entries in the order
/// they were derived; a triple already present is never repeated.
pub fn coexistence_propagate(
    results: &[(ParameterTriple, Verdict)],
) -> Vec<(ParameterTriple, Verdict)> {
    let mut out: Vec<(ParameterTriple, Verdict)> = results.to_vec();
    let mut seen: HashSet<ParameterTriple> = results.iter().map(|(t, _)| *t).collect();
    let mut frontier: Vec<ParameterTriple> = results
        .iter()
        .filter(|(_, v)| *v == Verdict::Nonexistent)
        .map(|(t, _)| *t)
        .collect();
    let mut i = 0;
    while i < frontier.len() {
        let t = frontier[i];
        i += 1;
        let mut implied = Vec::new();
        if t.tau.is_multiple_of(2) {
            implied.push(ParameterTriple::new(t.n + 1, 2 * t.m, t.tau + 1));
        } else if t.n > 1 && t.m.is_multiple_of(2) {
            implied.push(ParameterTriple::new(t.n - 1, t.m / 2, t.tau - 1));
        }
        implied.push(ParameterTriple::new(t.n + 1, t.m, t.tau));
        for next in implied.into_iter().flatten() {
            if seen.insert(next) {
                out.push((next, Verdict::Nonexistent));
                frontier.push(next);
            }
        }
    }
    out
}
