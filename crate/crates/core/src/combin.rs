//! Partitions and their boxes, ribbons, cores and residue nodes.
//!
//! Boxes use `(x, y)` coordinates: `x` is the column, `y` the row, and the
//! corner box is `(0, 0)`. Row `y` has `parts[y]` boxes.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{Coeff, Laurent, Monomial, RatFunc};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CombinError {
    #[error("box ({0}, {1}) is not in {2}")]
    BoxOutside(usize, usize, Partition),
    #[error("not a partition: {0:?}")]
    NotPartition(Vec<usize>),
    #[error("ribbon size must be at least 1")]
    BadRibbonSize,
    #[error("{1} / {0} is not a single box")]
    NotSingleBox(Partition, Partition),
    #[error("character contains the trivial weight")]
    TrivialWeight,
}

/// Weakly decreasing list of positive parts. Ordered lexicographically, so
/// sorting in reverse gives the canonical order used by every matrix.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition(Vec<usize>);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub x: usize,
    pub y: usize,
}

impl Cell {
    pub fn new(x: usize, y: usize) -> Self {
        Cell { x, y }
    }

    pub fn content(&self) -> i64 {
        self.x as i64 - self.y as i64
    }

    /// Residue of the content modulo `b`, in `0..b`.
    pub fn residue(&self, b: usize) -> usize {
        self.content().rem_euclid(b as i64) as usize
    }

    /// `q1^x q2^y`.
    pub fn weight(&self) -> Monomial {
        Monomial::from_q1q2((self.x as i64).into(), (self.y as i64).into())
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = CombinError;
    fn try_from(v: Vec<usize>) -> Result<Self, CombinError> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxStats {
    pub arm: usize,
    pub leg: usize,
    pub content: i64,
    pub weight: Monomial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionStats {
    /// Sum of contents.
    pub content: i64,
    /// Product of box weights.
    pub weight: Monomial,
    /// Sum of legs.
    pub n: usize,
    /// Sum of arms, i.e. `n` of the conjugate.
    pub n_conj: usize,
    pub conjugate: Partition,
}

impl Partition {
    /// Trailing zeros are dropped; anything else must already be sorted.
    pub fn new(mut parts: Vec<usize>) -> Result<Self, CombinError> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(CombinError::NotPartition(parts));
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn row(&self, y: usize) -> usize {
        self.0.get(y).copied().unwrap_or(0)
    }

    pub fn column(&self, x: usize) -> usize {
        self.0.iter().take_while(|&&p| p > x).count()
    }

    pub fn conjugate(&self) -> Partition {
        Partition((0..self.row(0)).map(|x| self.column(x)).collect())
    }

    pub fn contains(&self, c: Cell) -> bool {
        c.x < self.row(c.y)
    }

    /// Boxes row by row, left to right.
    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.0.iter().enumerate().flat_map(|(y, &r)| (0..r).map(move |x| Cell::new(x, y)))
    }

    pub fn arm(&self, c: Cell) -> usize {
        self.row(c.y) - c.x - 1
    }

    pub fn leg(&self, c: Cell) -> usize {
        self.column(c.x) - c.y - 1
    }

    pub fn content(&self) -> i64 {
        self.cells().map(|c| c.content()).sum()
    }

    /// `chi_lambda`, the product of all box weights.
    pub fn weight(&self) -> Monomial {
        self.cells().fold(Monomial::one(), |acc, c| acc * c.weight())
    }

    pub fn leg_sum(&self) -> usize {
        self.0.iter().enumerate().map(|(y, &r)| y * r).sum()
    }

    /// Boxes that can be added, bottom row first.
    pub fn addable(&self) -> Vec<Cell> {
        (0..=self.len())
            .filter(|&y| y == 0 || self.row(y - 1) > self.row(y))
            .map(|y| Cell::new(self.row(y), y))
            .collect()
    }

    pub fn removable(&self) -> Vec<Cell> {
        (0..self.len()).filter(|&y| self.row(y + 1) < self.row(y)).map(|y| Cell::new(self.row(y) - 1, y)).collect()
    }

    /// Adds an addable box. Panics if `c` is not addable.
    pub fn add_cell(&self, c: Cell) -> Partition {
        assert!(self.row(c.y) == c.x && (c.y == 0 || self.row(c.y - 1) > c.x), "{c:?} not addable to {self}");
        let mut v = self.0.clone();
        if c.y == v.len() {
            v.push(1);
        } else {
            v[c.y] += 1;
        }
        Partition(v)
    }

    /// Removes a removable box. Panics if `c` is not removable.
    pub fn remove_cell(&self, c: Cell) -> Partition {
        assert!(self.row(c.y) == c.x + 1 && self.row(c.y + 1) <= c.x, "{c:?} not removable from {self}");
        let mut v = self.0.clone();
        v[c.y] -= 1;
        if v[c.y] == 0 {
            v.pop();
        }
        Partition(v)
    }

    /// `self` contains `other` as a diagram.
    pub fn contains_partition(&self, other: &Partition) -> bool {
        other.len() <= self.len() && other.0.iter().zip(&self.0).all(|(a, b)| a <= b)
    }

    /// Boxes of `self` not in `inner`.
    pub fn skew_cells(&self, inner: &Partition) -> Vec<Cell> {
        self.cells().filter(|&c| !inner.contains(c)).collect()
    }

    fn beta(&self, len: usize) -> Vec<usize> {
        (0..len).map(|i| self.row(i) + (len - 1 - i)).collect()
    }

    fn from_beta(mut beta: Vec<usize>) -> Partition {
        beta.sort_unstable_by(|a, b| b.cmp(a));
        let len = beta.len();
        Partition::new((0..len).map(|i| beta[i] - (len - 1 - i)).collect()).expect("beta set")
    }

    /// All ways of removing one `b`-ribbon: `(smaller partition, ribbon boxes)`.
    pub fn removable_ribbons(&self, b: usize) -> Vec<(Partition, Vec<Cell>)> {
        let beta = self.beta(self.len());
        let set: BTreeSet<usize> = beta.iter().copied().collect();
        let mut out = Vec::new();
        for (i, &x) in beta.iter().enumerate() {
            if x < b || set.contains(&(x - b)) {
                continue;
            }
            let mut nb = beta.clone();
            nb[i] = x - b;
            let small = Partition::from_beta(nb);
            let cells = self.skew_cells(&small);
            out.push((small, cells));
        }
        out
    }

    /// All ways of adding one `b`-ribbon: `(larger partition, ribbon boxes)`.
    pub fn addable_ribbons(&self, b: usize) -> Vec<(Partition, Vec<Cell>)> {
        let beta = self.beta(self.len() + b);
        let set: BTreeSet<usize> = beta.iter().copied().collect();
        let mut out = Vec::new();
        for (i, &x) in beta.iter().enumerate() {
            if set.contains(&(x + b)) {
                continue;
            }
            let mut nb = beta.clone();
            nb[i] = x + b;
            let big = Partition::from_beta(nb);
            let cells = big.skew_cells(self);
            out.push((big, cells));
        }
        out
    }
}

pub fn box_stats(lambda: &Partition, c: Cell) -> Result<BoxStats, CombinError> {
    if !lambda.contains(c) {
        return Err(CombinError::BoxOutside(c.x, c.y, lambda.clone()));
    }
    Ok(BoxStats { arm: lambda.arm(c), leg: lambda.leg(c), content: c.content(), weight: c.weight() })
}

pub fn partition_stats(lambda: &Partition) -> PartitionStats {
    let conjugate = lambda.conjugate();
    PartitionStats {
        content: lambda.content(),
        weight: lambda.weight(),
        n: lambda.leg_sum(),
        n_conj: conjugate.leg_sum(),
        conjugate,
    }
}

/// `mu <= lambda` in dominance order; false for different sizes.
pub fn dominance_leq(mu: &Partition, lambda: &Partition) -> bool {
    if mu.size() != lambda.size() {
        return false;
    }
    let (mut a, mut b) = (0, 0);
    for i in 0..mu.len().max(lambda.len()) {
        a += mu.row(i);
        b += lambda.row(i);
        if a > b {
            return false;
        }
    }
    true
}

/// All partitions of `n` in lexicographically decreasing order, which refines
/// reverse dominance.
pub fn enumerate_partitions(n: usize) -> Vec<Partition> {
    fn rec(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for k in (1..=n.min(max)).rev() {
            cur.push(k);
            rec(n - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

pub fn b_core(lambda: &Partition, b: usize) -> Result<Partition, CombinError> {
    if b < 1 {
        return Err(CombinError::BadRibbonSize);
    }
    let mut cur = lambda.clone();
    while let Some((small, _)) = cur.removable_ribbons(b).into_iter().next() {
        cur = small;
    }
    Ok(cur)
}

/// Connected, nonempty and free of 2x2 squares.
pub fn is_ribbon(cells: &[Cell]) -> bool {
    let set: BTreeSet<Cell> = cells.iter().copied().collect();
    let Some(&start) = set.iter().next() else {
        return false;
    };
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(c) = stack.pop() {
        let nbrs = [(c.x + 1, c.y), (c.x.wrapping_sub(1), c.y), (c.x, c.y + 1), (c.x, c.y.wrapping_sub(1))];
        for (x, y) in nbrs {
            let n = Cell::new(x, y);
            if set.contains(&n) && seen.insert(n) {
                stack.push(n);
            }
        }
    }
    if seen.len() != set.len() {
        return false;
    }
    !set.iter().any(|c| {
        set.contains(&Cell::new(c.x + 1, c.y))
            && set.contains(&Cell::new(c.x, c.y + 1))
            && set.contains(&Cell::new(c.x + 1, c.y + 1))
    })
}

/// Row span of a ribbon.
pub fn ribbon_height(r: &[Cell]) -> usize {
    let hi = r.iter().map(|c| c.y).max().unwrap_or(0);
    let lo = r.iter().map(|c| c.y).min().unwrap_or(0);
    hi - lo
}

/// Leftmost box of the top row.
pub fn northwest_cell(r: &[Cell]) -> Cell {
    let top = r.iter().map(|c| c.y).max().expect("nonempty ribbon");
    let x = r.iter().filter(|c| c.y == top).map(|c| c.x).min().expect("nonempty ribbon");
    Cell::new(x, top)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RibbonStrip {
    pub inner: Partition,
    pub outer: Partition,
    /// Ribbons sorted by their boxes.
    pub tiling: Vec<Vec<Cell>>,
    pub spin: usize,
}

fn is_horizontal(tiling: &[Vec<Cell>]) -> bool {
    tiling.iter().enumerate().all(|(i, r)| {
        let nw = northwest_cell(r);
        tiling.iter().enumerate().filter(|&(j, _)| j != i).all(|(_, r2)| !r2.iter().any(|c| c.x == nw.x && c.y > nw.y))
    })
}

/// All `lambda` with `lambda / mu` a horizontal `k`-strip of `b`-ribbons, in
/// canonical order of `lambda`. Panics if some shape had two admissible
/// tilings, which would contradict uniqueness.
pub fn horizontal_strips(mu: &Partition, k: usize, b: usize) -> Vec<RibbonStrip> {
    // Every tiling arises from some chain of ribbon additions.
    let mut level: BTreeSet<(Partition, BTreeSet<Vec<Cell>>)> = BTreeSet::from([(mu.clone(), BTreeSet::new())]);
    for _ in 0..k {
        let mut next = BTreeSet::new();
        for (p, tiles) in &level {
            for (big, mut cells) in p.addable_ribbons(b) {
                cells.sort();
                let mut t = tiles.clone();
                t.insert(cells);
                next.insert((big, t));
            }
        }
        level = next;
    }
    let mut out: Vec<RibbonStrip> = Vec::new();
    for (outer, tiles) in level {
        let tiling: Vec<Vec<Cell>> = tiles.into_iter().collect();
        if !is_horizontal(&tiling) {
            continue;
        }
        if let Some(prev) = out.last() {
            assert!(prev.outer != outer, "two horizontal tilings of {outer} / {mu}");
        }
        let spin = tiling.iter().map(|r| ribbon_height(r)).sum();
        out.push(RibbonStrip { inner: mu.clone(), outer, tiling, spin });
    }
    out.reverse();
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NodeStats {
    pub residue: usize,
    /// Addable minus removable `i`-nodes of the larger partition with content
    /// below that of the box.
    pub left: i64,
    /// Same, with content above.
    pub right: i64,
}

/// Addable minus removable `i`-nodes of `lambda`.
pub fn node_balance(lambda: &Partition, i: usize, b: usize) -> i64 {
    let a = lambda.addable().iter().filter(|c| c.residue(b) == i).count() as i64;
    let r = lambda.removable().iter().filter(|c| c.residue(b) == i).count() as i64;
    a - r
}

/// Node counts for `lambda / mu` a single box. Left and right are decided by
/// content, and nodes are taken in `lambda`.
pub fn node_counts(mu: &Partition, lambda: &Partition, b: usize) -> Result<NodeStats, CombinError> {
    let diff = lambda.skew_cells(mu);
    if diff.len() != 1 || !lambda.contains_partition(mu) {
        return Err(CombinError::NotSingleBox(mu.clone(), lambda.clone()));
    }
    let cell = diff[0];
    let i = cell.residue(b);
    let c0 = cell.content();
    let count = |pred: &dyn Fn(i64) -> bool| -> i64 {
        let a = lambda.addable().iter().filter(|c| c.residue(b) == i && pred(c.content())).count() as i64;
        let r = lambda.removable().iter().filter(|c| c.residue(b) == i && pred(c.content())).count() as i64;
        a - r
    };
    Ok(NodeStats { residue: i, left: count(&|c| c < c0), right: count(&|c| c > c0) })
}

/// Tangent weights at the fixed point: `q1^a q2^(-l-1)` and `q1^(-a-1) q2^l`
/// for every box.
pub fn tangent_character(lambda: &Partition) -> Vec<Monomial> {
    let mut out = Vec::with_capacity(2 * lambda.size());
    for c in lambda.cells() {
        let (a, l) = (lambda.arm(c) as i64, lambda.leg(c) as i64);
        out.push(Monomial::from_q1q2(a.into(), (-l - 1).into()));
        out.push(Monomial::from_q1q2((-a - 1).into(), l.into()));
    }
    out
}

/// `prod (1 - 1/w)` over the weights.
pub fn bracket<C: Coeff>(weights: &[Monomial]) -> Result<RatFunc<C>, CombinError> {
    let mut acc = Laurent::<C>::one();
    for w in weights {
        if w.is_one() {
            return Err(CombinError::TrivialWeight);
        }
        acc = &acc * &(&Laurent::one() - &Laurent::mono(w.inv()));
    }
    Ok(RatFunc::from_poly(acc))
}
