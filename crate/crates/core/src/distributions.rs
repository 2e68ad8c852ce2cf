//! Parameter triples, distance distributions and the initial feasible sets.
//!
//! A distance distribution `w = (w_0, …, w_n)` of an `(n, M, τ)` array is
//! feasible at the start iff it is a nonnegative integer solution of the
//! cleared moment system
//!
//! ```text
//! Σ_i w_i (n − 2i)^k = M · T_k,   k = 0, 1, …, τ
//! ```
//!
//! [`enumerate_initial`] lists every such solution. The `τ + 1` coordinates
//! whose nodes `n − 2i` are closest to zero are solved exactly from the other
//! coordinates (the system restricted to them is a nonsingular Vandermonde
//! system), and the remaining coordinates are enumerated depth first from the
//! outside in, with interval pruning on every partial moment.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::{binomial, ipow, MomentTable, MAX_LENGTH};

/// Largest cardinality accepted by [`enumerate_initial`].
pub const MAX_CARDINALITY: u64 = 1 << 14;

/// `(n, M, τ)`: length, cardinality and strength of a binary orthogonal array.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ParameterTriple {
    pub n: usize,
    #[serde(rename = "M")]
    pub m: u64,
    pub tau: usize,
}

impl ParameterTriple {
    pub fn new(n: usize, m: u64, tau: usize) -> Result<Self> {
        let bad = |reason: &str| {
            Err(Error::InvalidTriple {
                n,
                m,
                tau,
                reason: reason.to_owned(),
            })
        };
        if n == 0 || n > MAX_LENGTH {
            return bad("length must be in 1..=16");
        }
        if tau > n {
            return bad("strength exceeds length");
        }
        if m == 0 {
            return bad("cardinality must be positive");
        }
        if tau >= 64 || !m.is_multiple_of(1u64 << tau) {
            return bad(&format!("2^{tau} does not divide {m}"));
        }
        Ok(Self { n, m, tau })
    }

    /// Index `λ = M / 2^τ`.
    pub fn lambda(&self) -> u64 {
        self.m >> self.tau
    }

    /// `(n − 1, M, τ)`: the array with one column deleted.
    pub fn left(&self) -> Option<Self> {
        (self.n > self.tau && self.n > 1).then(|| Self {
            n: self.n - 1,
            m: self.m,
            tau: self.tau,
        })
    }

    /// `(n − 1, M/2, τ − 1)`: the halves obtained by splitting on a column.
    pub fn derived(&self) -> Option<Self> {
        (self.n > 1 && self.tau > 0).then(|| Self {
            n: self.n - 1,
            m: self.m / 2,
            tau: self.tau - 1,
        })
    }
}

impl fmt::Display for ParameterTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.n, self.m, self.tau)
    }
}

/// Which reference points a set describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SetKind {
    /// Internal points (`w_0 ≥ 1`).
    P,
    /// External points (`w_0 = 0`).
    Q,
    /// Both.
    W,
}

impl SetKind {
    pub const ALL: [SetKind; 3] = [SetKind::P, SetKind::Q, SetKind::W];

    pub fn admits(self, w: &DistanceDistribution) -> bool {
        match self {
            SetKind::W => true,
            kind => classify(w) == kind,
        }
    }
}

impl fmt::Display for SetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SetKind::P => "P",
            SetKind::Q => "Q",
            SetKind::W => "W",
        })
    }
}

impl FromStr for SetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "P" | "p" => Ok(SetKind::P),
            "Q" | "q" => Ok(SetKind::Q),
            "W" | "w" => Ok(SetKind::W),
            other => Err(Error::OutOfRange(format!("unknown set kind {other:?}"))),
        }
    }
}

/// Counts `(w_0, …, w_n)` of rows at each Hamming distance from a point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DistanceDistribution(pub Vec<u32>);

impl DistanceDistribution {
    pub fn new(w: Vec<u32>) -> Self {
        Self(w)
    }

    /// Length `n` of the underlying array (one less than the entry count).
    pub fn length(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&v| v as u64).sum()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    /// Residuals `Σ_i w_i (n − 2i)^k − M·T_k` for `k = 0..=tau`.
    pub fn moment_residuals(&self, m: u64, tau: usize) -> Result<Vec<i128>> {
        let n = self.length();
        let table = MomentTable::new(n)?;
        Ok((0..=tau)
            .map(|k| {
                let lhs: i128 = self
                    .0
                    .iter()
                    .enumerate()
                    .map(|(i, &w)| w as i128 * ipow(n as i64 - 2 * i as i64, k))
                    .sum();
                lhs - m as i128 * table.get(k)
            })
            .collect())
    }
}

impl fmt::Display for DistanceDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

impl From<Vec<u32>> for DistanceDistribution {
    fn from(w: Vec<u32>) -> Self {
        Self(w)
    }
}

/// `w̄ = (w_n, …, w_0)`, the distribution of the complemented array.
pub fn mirror(w: &DistanceDistribution) -> DistanceDistribution {
    DistanceDistribution(w.0.iter().rev().copied().collect())
}

/// `P` when the reference point is a row (`w_0 ≥ 1`), otherwise `Q`.
pub fn classify(w: &DistanceDistribution) -> SetKind {
    if w.0.first().copied().unwrap_or(0) >= 1 {
        SetKind::P
    } else {
        SetKind::Q
    }
}

/// A canonically ordered, deduplicated set of distributions for one triple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributionSet {
    #[serde(flatten)]
    pub triple: ParameterTriple,
    pub kind: SetKind,
    members: Vec<DistanceDistribution>,
}

impl DistributionSet {
    /// Builds a set, sorting and deduplicating `members`.
    pub fn new(
        triple: ParameterTriple,
        kind: SetKind,
        mut members: Vec<DistanceDistribution>,
    ) -> Self {
        members.sort_unstable();
        members.dedup();
        Self {
            triple,
            kind,
            members,
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[DistanceDistribution] {
        &self.members
    }

    pub fn iter(&self) -> std::slice::Iter<'_, DistanceDistribution> {
        self.members.iter()
    }

    pub fn contains(&self, w: &DistanceDistribution) -> bool {
        self.members.binary_search(w).is_ok()
    }

    /// Restricts a `W` set to the members admitted by `kind`.
    pub fn restrict(&self, kind: SetKind) -> Self {
        Self {
            triple: self.triple,
            kind,
            members: self
                .members
                .iter()
                .filter(|w| kind.admits(w))
                .cloned()
                .collect(),
        }
    }

    /// Drops every member for which `remove` returns true.
    pub fn retain(&mut self, mut keep: impl FnMut(&DistanceDistribution) -> bool) {
        self.members.retain(|w| keep(w));
    }

    pub fn is_mirror_closed(&self) -> bool {
        self.members.iter().all(|w| self.contains(&mirror(w)))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    /// Parses JSON written by [`DistributionSet::to_json`], restoring the
    /// canonical order.
    pub fn from_json(s: &str) -> Result<Self> {
        let raw: Self = serde_json::from_str(s)?;
        let triple = ParameterTriple::new(raw.triple.n, raw.triple.m, raw.triple.tau)?;
        for w in &raw.members {
            if w.0.len() != triple.n + 1 {
                return Err(Error::LengthMismatch {
                    expected: triple.n + 1,
                    got: w.0.len(),
                });
            }
        }
        Ok(Self::new(triple, raw.kind, raw.members))
    }
}

impl<'a> IntoIterator for &'a DistributionSet {
    type Item = &'a DistanceDistribution;
    type IntoIter = std::slice::Iter<'a, DistanceDistribution>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

/// Search state shared by the depth-first enumeration.
struct Enumerator {
    n: usize,
    tau: usize,
    /// `M · T_k` for `k = 0..=τ`.
    targets: Vec<i128>,
    /// Free coordinates in visiting order (largest `|n − 2i|` first).
    free: Vec<usize>,
    /// `(n − 2i)^k` for every coordinate `i` and `k = 0..=τ`.
    powers: Vec<Vec<i128>>,
    /// Bounds on `a^k` over the nodes still unassigned at each depth.
    lo: Vec<Vec<i128>>,
    hi: Vec<Vec<i128>>,
    /// Solved coordinates with their Lagrange numerator coefficients and
    /// denominators.
    solved: Vec<(usize, Vec<i128>, i128)>,
}

impl Enumerator {
    fn new(triple: ParameterTriple) -> Result<Self> {
        let n = triple.n;
        let tau = triple.tau;
        let table = MomentTable::new(n)?;
        let targets = (0..=tau).map(|k| triple.m as i128 * table.get(k)).collect();
        let node = |i: usize| n as i64 - 2 * i as i64;
        let powers: Vec<Vec<i128>> = (0..=n)
            .map(|i| (0..=tau).map(|k| ipow(node(i), k)).collect())
            .collect();

        // Smallest |node| first; ties broken by index for determinism.
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by_key(|&i| (node(i).abs(), i));
        let solved_idx: Vec<usize> = order[..=tau].to_vec();
        let mut free: Vec<usize> = order[tau + 1..].to_vec();
        free.reverse();

        let mut lo = Vec::with_capacity(free.len() + 1);
        let mut hi = Vec::with_capacity(free.len() + 1);
        for depth in 0..=free.len() {
            let unassigned: Vec<usize> = free[depth..]
                .iter()
                .chain(solved_idx.iter())
                .copied()
                .collect();
            lo.push(
                (0..=tau)
                    .map(|k| unassigned.iter().map(|&i| powers[i][k]).min().unwrap())
                    .collect(),
            );
            hi.push(
                (0..=tau)
                    .map(|k| unassigned.iter().map(|&i| powers[i][k]).max().unwrap())
                    .collect(),
            );
        }

        // For solved coordinate i: Σ_k c_k R_k = w_i Π_{j≠i}(a_i − a_j), where
        // c_k are the coefficients of Π_{j≠i}(t − a_j).
        let solved = solved_idx
            .iter()
            .map(|&i| {
                let mut poly = vec![1i128];
                let mut denom = 1i128;
                for &j in solved_idx.iter().filter(|&&j| j != i) {
                    let aj = node(j) as i128;
                    let mut next = vec![0i128; poly.len() + 1];
                    for (deg, &c) in poly.iter().enumerate() {
                        next[deg + 1] += c;
                        next[deg] -= aj * c;
                    }
                    poly = next;
                    denom *= node(i) as i128 - aj;
                }
                (i, poly, denom)
            })
            .collect();

        Ok(Self {
            n,
            tau,
            targets,
            free,
            powers,
            lo,
            hi,
            solved,
        })
    }

    /// Upper bound on the value of the free coordinate at `depth`.
    fn cap(&self, depth: usize, partial: &[i128]) -> i128 {
        let i = self.free[depth];
        let mut cap = self.targets[0] - partial[0];
        for k in (2..=self.tau).step_by(2) {
            let p = self.powers[i][k];
            if p > 0 {
                cap = cap.min((self.targets[k] - partial[k]) / p);
            }
        }
        cap
    }

    /// Whether the unassigned coordinates can still reach every target.
    fn feasible(&self, depth: usize, partial: &[i128]) -> bool {
        let rem = self.targets[0] - partial[0];
        if rem < 0 {
            return false;
        }
        (1..=self.tau).all(|k| {
            let need = self.targets[k] - partial[k];
            need >= rem * self.lo[depth][k] && need <= rem * self.hi[depth][k]
        })
    }

    fn descend(
        &self,
        depth: usize,
        partial: &mut Vec<i128>,
        w: &mut Vec<u32>,
        out: &mut Vec<DistanceDistribution>,
    ) {
        if !self.feasible(depth, partial) {
            return;
        }
        if depth == self.free.len() {
            self.solve_leaf(partial, w, out);
            return;
        }
        let i = self.free[depth];
        let cap = self.cap(depth, partial);
        for v in 0..=cap {
            for (s, &p) in partial.iter_mut().zip(&self.powers[i]) {
                *s += v * p;
            }
            w[i] = v as u32;
            self.descend(depth + 1, partial, w, out);
            for (s, &p) in partial.iter_mut().zip(&self.powers[i]) {
                *s -= v * p;
            }
        }
        w[i] = 0;
    }

    fn solve_leaf(&self, partial: &[i128], w: &mut [u32], out: &mut Vec<DistanceDistribution>) {
        for (i, coeffs, denom) in &self.solved {
            let num: i128 = coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c * (self.targets[k] - partial[k]))
                .sum();
            if num % denom != 0 {
                return;
            }
            let v = num / denom;
            if v < 0 || v > u32::MAX as i128 {
                return;
            }
            w[*i] = v as u32;
        }
        out.push(DistanceDistribution(w.to_vec()));
    }

    fn run(&self) -> Vec<DistanceDistribution> {
        let start = vec![0i128; self.tau + 1];
        if self.free.is_empty() {
            let mut out = Vec::new();
            self.descend(0, &mut start.clone(), &mut vec![0; self.n + 1], &mut out);
            return out;
        }
        // Split on the first free coordinate; each branch is independent.
        let i = self.free[0];
        let cap = self.cap(0, &start);
        (0..=cap)
            .into_par_iter()
            .flat_map_iter(|v| {
                let mut partial: Vec<i128> = (0..=self.tau).map(|k| v * self.powers[i][k]).collect();
                let mut w = vec![0u32; self.n + 1];
                w[i] = v as u32;
                let mut out = Vec::new();
                self.descend(1, &mut partial, &mut w, &mut out);
                out
            })
            .collect()
    }
}

/// All nonnegative integer solutions of the moment system for `triple`,
/// filtered by `kind`, in canonical order.
pub fn enumerate_initial(triple: ParameterTriple, kind: SetKind) -> Result<DistributionSet> {
    let triple = ParameterTriple::new(triple.n, triple.m, triple.tau)?;
    if triple.m > MAX_CARDINALITY {
        return Err(Error::InvalidTriple {
            n: triple.n,
            m: triple.m,
            tau: triple.tau,
            reason: format!("cardinality above {MAX_CARDINALITY}"),
        });
    }
    let members = Enumerator::new(triple)?
        .run()
        .into_iter()
        .filter(|w| kind.admits(w))
        .collect();
    Ok(DistributionSet::new(triple, kind, members))
}

/// Largest number of compositions [`brute_force_enumerate`] will visit.
pub const BRUTE_FORCE_LIMIT: u128 = 100_000_000;

/// Exhaustive oracle for [`enumerate_initial`] with `kind = W`: visits every
/// composition of `M` into `n + 1` parts and checks each moment equation
/// directly.
pub fn brute_force_enumerate(triple: ParameterTriple) -> Result<DistributionSet> {
    let triple = ParameterTriple::new(triple.n, triple.m, triple.tau)?;
    // C(M + n, n) compositions of M into n + 1 parts.
    let visits = if triple.m + (triple.n as u64) <= 64 {
        binomial((triple.m + triple.n as u64) as u32, triple.n as u32)?
    } else {
        let mut acc: u128 = 1;
        for i in 0..triple.n as u128 {
            acc = acc.saturating_mul(triple.m as u128 + triple.n as u128 - i) / (i + 1);
        }
        acc
    };
    if triple.n > 6 || visits > BRUTE_FORCE_LIMIT {
        return Err(Error::Intractable(format!(
            "{triple}: {visits} compositions"
        )));
    }
    let n = triple.n;
    let table = MomentTable::new(n)?;
    let oracle = Compositions {
        targets: (0..=triple.tau)
            .map(|k| triple.m as i128 * table.get(k))
            .collect(),
        powers: (0..=n)
            .map(|i| (0..=triple.tau).map(|k| ipow(n as i64 - 2 * i as i64, k)).collect())
            .collect(),
    };
    let mut out = Vec::new();
    let mut w = vec![0u32; n + 1];
    let mut sums = vec![0i128; triple.tau + 1];
    oracle.visit(&mut w, 0, triple.m as u32, &mut sums, &mut out);
    Ok(DistributionSet::new(triple, SetKind::W, out))
}

struct Compositions {
    targets: Vec<i128>,
    powers: Vec<Vec<i128>>,
}

impl Compositions {
    fn visit(
        &self,
        w: &mut [u32],
        pos: usize,
        left: u32,
        sums: &mut [i128],
        out: &mut Vec<DistanceDistribution>,
    ) {
        if pos + 1 == w.len() {
            w[pos] = left;
            let hit = self
                .targets
                .iter()
                .enumerate()
                .all(|(k, &t)| sums[k] + left as i128 * self.powers[pos][k] == t);
            if hit {
                out.push(DistanceDistribution(w.to_vec()));
            }
            return;
        }
        for v in 0..=left {
            w[pos] = v;
            for (k, s) in sums.iter_mut().enumerate() {
                *s += v as i128 * self.powers[pos][k];
            }
            self.visit(w, pos + 1, left - v, sums, out);
            for (k, s) in sums.iter_mut().enumerate() {
                *s -= v as i128 * self.powers[pos][k];
            }
        }
    }
}
