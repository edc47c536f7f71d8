//! The triangular grid Δ_N, its cliques and paths, and the ranked poset Δ_≤N.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// A point `(r, s, t)` of some Δ_n.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Location {
    pub r: usize,
    pub s: usize,
    pub t: usize,
}

pub const fn loc(r: usize, s: usize, t: usize) -> Location {
    Location { r, s, t }
}

/// Signed displacement between locations of the same grid.
pub type Root = [i64; 3];

pub const ALPHA: Root = [1, -1, 0];
pub const BETA: Root = [0, 1, -1];
pub const GAMMA: Root = [-1, 0, 1];

/// The six unit displacements `±α, ±β, ±γ`.
pub const STEPS: [Root; 6] = [ALPHA, [-1, 1, 0], BETA, [0, -1, 1], GAMMA, [1, 0, -1]];

pub fn neg_root(d: Root) -> Root {
    [-d[0], -d[1], -d[2]]
}

impl Location {
    pub fn rank(&self) -> usize {
        self.r + self.s + self.t
    }

    pub fn coords(&self) -> [usize; 3] {
        [self.r, self.s, self.t]
    }

    /// The η-coordinate, η ∈ {1, 2, 3}.
    pub fn coord(&self, eta: usize) -> usize {
        self.coords()[eta - 1]
    }

    pub fn from_coords(c: [usize; 3]) -> Self {
        loc(c[0], c[1], c[2])
    }

    /// `n e_η`.
    pub fn corner(eta: usize, n: usize) -> Self {
        let mut c = [0; 3];
        c[eta - 1] = n;
        Self::from_coords(c)
    }

    /// `self + d`, or `None` if a coordinate would go negative.
    pub fn offset(&self, d: Root) -> Option<Location> {
        let c = self.coords();
        let mut out = [0usize; 3];
        for i in 0..3 {
            let v = c[i] as i64 + d[i];
            if v < 0 {
                return None;
            }
            out[i] = v as usize;
        }
        Some(Self::from_coords(out))
    }

    pub fn plus(&self, o: &Location) -> Location {
        loc(self.r + o.r, self.s + o.s, self.t + o.t)
    }

    /// Partial order of Δ_≤N: coordinatewise comparison.
    pub fn le(&self, o: &Location) -> bool {
        self.r <= o.r && self.s <= o.s && self.t <= o.t
    }

    pub fn meet(&self, o: &Location) -> Location {
        loc(self.r.min(o.r), self.s.min(o.s), self.t.min(o.t))
    }

    /// Coordinatewise maximum, if its rank stays within `n`.
    pub fn join(&self, o: &Location, n: usize) -> Option<Location> {
        let j = loc(self.r.max(o.r), self.s.max(o.s), self.t.max(o.t));
        (j.rank() <= n).then_some(j)
    }

    /// The key used in JSON maps.
    pub fn key(&self) -> String {
        format!("{},{},{}", self.r, self.s, self.t)
    }

    pub fn parse_key(s: &str) -> Result<Location> {
        let parts: Vec<&str> = s.split(',').collect();
        let bad = || Error::Parse(format!("bad location key '{}'", s));
        if parts.len() != 3 {
            return Err(bad());
        }
        let mut c = [0usize; 3];
        for (i, p) in parts.iter().enumerate() {
            c[i] = p.trim().parse().map_err(|_| bad())?;
        }
        Ok(Self::from_coords(c))
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.r, self.s, self.t)
    }
}

/// `|Δ_n| = (n+1)(n+2)/2`.
pub const fn grid_size(n: usize) -> usize {
    (n + 1) * (n + 2) / 2
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Color {
    Black,
    White,
}

/// A 3-clique with its canonical vertex order and base point.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Clique {
    pub color: Color,
    pub base: Location,
    pub locations: [Location; 3],
}

impl Clique {
    /// Black clique `((r+1,s,t), (r,s+1,t), (r,s,t+1))` for a base in Δ_{N−1}.
    pub fn black(base: Location) -> Self {
        let Location { r, s, t } = base;
        Clique { color: Color::Black, base, locations: [loc(r + 1, s, t), loc(r, s + 1, t), loc(r, s, t + 1)] }
    }

    /// White clique `((r,s+1,t+1), (r+1,s,t+1), (r+1,s+1,t))` for a base in Δ_{N−2},
    /// listed clockwise.
    pub fn white(base: Location) -> Self {
        let Location { r, s, t } = base;
        Clique {
            color: Color::White,
            base,
            locations: [loc(r, s + 1, t + 1), loc(r + 1, s, t + 1), loc(r + 1, s + 1, t)],
        }
    }

    pub fn contains(&self, l: &Location) -> bool {
        self.locations.contains(l)
    }
}

/// The grid Δ_N with a location index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaGrid {
    n: usize,
    locs: Vec<Location>,
    index: HashMap<Location, usize>,
}

impl DeltaGrid {
    pub fn new(n: usize) -> Self {
        let locs = Self::enumerate(n);
        let index = locs.iter().enumerate().map(|(i, l)| (*l, i)).collect();
        DeltaGrid { n, locs, index }
    }

    /// All of Δ_n in lexicographic order.
    pub fn enumerate(n: usize) -> Vec<Location> {
        let mut v = Vec::with_capacity(grid_size(n));
        for r in 0..=n {
            for s in 0..=n - r {
                v.push(loc(r, s, n - r - s));
            }
        }
        v
    }

    pub fn diameter(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.locs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.locs.is_empty()
    }

    pub fn locations(&self) -> &[Location] {
        &self.locs
    }

    pub fn contains(&self, l: &Location) -> bool {
        l.rank() == self.n
    }

    pub fn index(&self, l: &Location) -> Option<usize> {
        self.index.get(l).copied()
    }

    fn check(&self, l: &Location) -> Result<()> {
        if self.contains(l) {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    pub fn adjacent(&self, a: &Location, b: &Location) -> bool {
        self.contains(a) && self.contains(b) && STEPS.iter().any(|d| a.offset(*d) == Some(*b))
    }

    pub fn neighbors(&self, a: &Location) -> Vec<Location> {
        STEPS.iter().filter_map(|d| a.offset(*d)).collect()
    }

    /// Unordered edges, each listed once with the smaller endpoint first.
    pub fn edges(&self) -> Vec<(Location, Location)> {
        let mut out = Vec::new();
        for a in &self.locs {
            for b in self.neighbors(a) {
                if *a < b {
                    out.push((*a, b));
                }
            }
        }
        out
    }

    pub fn distance(&self, a: &Location, b: &Location) -> Result<usize> {
        self.check(a)?;
        self.check(b)?;
        Ok(raw_distance(a, b))
    }

    /// `C(d1+d2, d1)` with `d1 ≤ d2 ≤ d3` the sorted coordinate gaps.
    pub fn geodesic_count(&self, a: &Location, b: &Location) -> Result<u128> {
        self.check(a)?;
        self.check(b)?;
        let mut d = [a.r.abs_diff(b.r), a.s.abs_diff(b.s), a.t.abs_diff(b.t)];
        d.sort();
        Ok(binomial(d[0] + d[1], d[0]))
    }

    /// Every shortest path from `a` to `b`, as location lists.
    pub fn geodesic_paths(&self, a: &Location, b: &Location) -> Result<Vec<Vec<Location>>> {
        self.check(a)?;
        self.check(b)?;
        let mut out = Vec::new();
        let mut path = vec![*a];
        self.extend_geodesics(b, &mut path, &mut out);
        Ok(out)
    }

    fn extend_geodesics(&self, b: &Location, path: &mut Vec<Location>, out: &mut Vec<Vec<Location>>) {
        let cur = *path.last().unwrap();
        let d = raw_distance(&cur, b);
        if d == 0 {
            out.push(path.clone());
            return;
        }
        for next in self.neighbors(&cur) {
            if raw_distance(&next, b) + 1 == d {
                path.push(next);
                self.extend_geodesics(b, path, out);
                path.pop();
            }
        }
    }

    /// The η-lines, indexed so entry `i` has cardinality `i+1`.
    pub fn lines(&self, eta: usize) -> Result<Vec<Vec<Location>>> {
        (0..=self.n).map(|i| self.line(eta, i)).collect()
    }

    /// The η-line of cardinality `i+1`; for η = 1 it is `(N−i, i−j, j)`, `j = 0..=i`.
    pub fn line(&self, eta: usize, i: usize) -> Result<Vec<Location>> {
        check_axis(eta)?;
        if i > self.n {
            return Err(Error::OutOfRange(loc(i, 0, 0)));
        }
        Ok((0..=i)
            .map(|j| {
                let base = [self.n - i, i - j, j];
                rotate(base, eta - 1)
            })
            .collect())
    }

    /// The η-line through `l`.
    pub fn line_through(&self, l: &Location, eta: usize) -> Result<Vec<Location>> {
        self.check(l)?;
        self.line(eta, self.n - l.coord(eta))
    }

    pub fn corner(&self, eta: usize) -> Result<Location> {
        check_axis(eta)?;
        Ok(Location::corner(eta, self.n))
    }

    /// Locations with η-coordinate zero.
    pub fn boundary(&self, eta: usize) -> Result<Vec<Location>> {
        self.line(eta, self.n)
    }

    pub fn on_boundary(&self, l: &Location) -> bool {
        l.r == 0 || l.s == 0 || l.t == 0
    }

    pub fn distance_to_boundary(&self, l: &Location, eta: usize) -> Result<usize> {
        check_axis(eta)?;
        self.check(l)?;
        Ok(l.coord(eta))
    }

    pub fn distance_to_corner(&self, l: &Location, eta: usize) -> Result<usize> {
        check_axis(eta)?;
        self.check(l)?;
        Ok(self.n - l.coord(eta))
    }

    /// Boundary path `[η, ξ]` from the η-corner to the ξ-corner.
    pub fn corner_path(&self, eta: usize, xi: usize) -> Result<Vec<Location>> {
        check_axis(eta)?;
        check_axis(xi)?;
        if eta == xi {
            return Err(Error::BadAxes);
        }
        let n = self.n;
        Ok((0..=n)
            .map(|i| {
                let mut c = [0; 3];
                c[eta - 1] = n - i;
                c[xi - 1] = i;
                Location::from_coords(c)
            })
            .collect())
    }

    pub fn cliques(&self, color: Color) -> Vec<Clique> {
        match color {
            Color::Black if self.n >= 1 => DeltaGrid::enumerate(self.n - 1).into_iter().map(Clique::black).collect(),
            Color::White if self.n >= 2 => DeltaGrid::enumerate(self.n - 2).into_iter().map(Clique::white).collect(),
            _ => Vec::new(),
        }
    }

    pub fn black_cliques(&self) -> Vec<Clique> {
        self.cliques(Color::Black)
    }

    pub fn white_cliques(&self) -> Vec<Clique> {
        self.cliques(Color::White)
    }

    /// The unique black clique containing an edge.
    pub fn black_clique_of(&self, a: &Location, b: &Location) -> Result<Clique> {
        if !self.adjacent(a, b) {
            return Err(Error::NotAdjacent(*a, *b));
        }
        Ok(Clique::black(a.meet(b)))
    }

    /// The white clique containing an edge, if any.
    pub fn white_clique_of(&self, a: &Location, b: &Location) -> Result<Option<Clique>> {
        if !self.adjacent(a, b) {
            return Err(Error::NotAdjacent(*a, *b));
        }
        for shift in [[0, -1, -1], [-1, 0, -1], [-1, -1, 0]] {
            if let Some(base) = a.offset(shift) {
                let c = Clique::white(base);
                if c.contains(b) {
                    return Ok(Some(c));
                }
            }
        }
        Ok(None)
    }

    /// Third vertex of the black clique on the edge `a b`.
    pub fn completion(&self, a: &Location, b: &Location) -> Result<Location> {
        let c = self.black_clique_of(a, b)?;
        Ok(*c.locations.iter().find(|l| *l != a && *l != b).unwrap())
    }

    /// True when distinct members have distinct η-coordinates.
    pub fn is_eta_geodesic(&self, set: &[Location], eta: usize) -> Result<bool> {
        check_axis(eta)?;
        let distinct: BTreeSet<&Location> = set.iter().collect();
        let coords: BTreeSet<usize> = distinct.iter().map(|l| l.coord(eta)).collect();
        Ok(coords.len() == distinct.len())
    }

    /// Whether every geodesic between two members stays inside the set.
    pub fn is_geodesically_closed(&self, set: &[Location]) -> Result<bool> {
        let members: BTreeSet<Location> = set.iter().copied().collect();
        for a in &members {
            for b in &members {
                if a < b {
                    for p in self.geodesic_paths(a, b)? {
                        if p.iter().any(|l| !members.contains(l)) {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        Ok(true)
    }

    /// `{λ ∈ Δ_N : μ ≤ λ}`.
    pub fn upset(&self, mu: &Location) -> Result<Vec<Location>> {
        if mu.rank() > self.n {
            return Err(Error::OutOfRange(*mu));
        }
        Ok(self.locs.iter().filter(|l| mu.le(l)).copied().collect())
    }

    /// The corner flag `{n e_η}`, `n = 0..=N`, of the poset.
    pub fn flag_of_corners(&self, eta: usize) -> Result<Vec<Location>> {
        check_axis(eta)?;
        Ok((0..=self.n).map(|n| Location::corner(eta, n)).collect())
    }

    /// Every element of Δ_≤N, rank by rank.
    pub fn poset(&self) -> Vec<Location> {
        (0..=self.n).flat_map(DeltaGrid::enumerate).collect()
    }

    pub fn canonical_spanning_tree(&self) -> Result<SpanningTree> {
        if self.n == 0 {
            return Err(Error::BadDiameter(0));
        }
        let mut edges = Vec::with_capacity(self.len() - 1);
        for l in &self.locs {
            if let Some(p) = canonical_parent(l) {
                edges.push((*l, p));
            }
        }
        SpanningTree::new(self, edges)
    }
}

fn canonical_parent(l: &Location) -> Option<Location> {
    if l.r >= 1 {
        Some(loc(l.r - 1, l.s + 1, l.t))
    } else if l.s >= 1 {
        Some(loc(0, l.s - 1, l.t + 1))
    } else {
        None
    }
}

pub fn raw_distance(a: &Location, b: &Location) -> usize {
    a.r.abs_diff(b.r).max(a.s.abs_diff(b.s)).max(a.t.abs_diff(b.t))
}

fn rotate(c: [usize; 3], k: usize) -> Location {
    // Move coordinate 0 to position k.
    let mut out = [0; 3];
    for i in 0..3 {
        out[(i + k) % 3] = c[i];
    }
    Location::from_coords(out)
}

pub fn check_axis(eta: usize) -> Result<()> {
    if (1..=3).contains(&eta) {
        Ok(())
    } else {
        Err(Error::BadAxes)
    }
}

/// A spanning tree of Δ_N rooted at `(0,0,N)` for path queries.
#[derive(Clone, Debug)]
pub struct SpanningTree {
    edges: Vec<(Location, Location)>,
    parent: HashMap<Location, Location>,
    depth: HashMap<Location, usize>,
}

impl SpanningTree {
    pub fn new(grid: &DeltaGrid, edges: Vec<(Location, Location)>) -> Result<Self> {
        if edges.len() + 1 != grid.len() {
            return Err(Error::NotASpanningTree);
        }
        let mut adj: HashMap<Location, Vec<Location>> = HashMap::new();
        for (a, b) in &edges {
            if !grid.adjacent(a, b) {
                return Err(Error::NotASpanningTree);
            }
            adj.entry(*a).or_default().push(*b);
            adj.entry(*b).or_default().push(*a);
        }
        let root = loc(0, 0, grid.diameter());
        let mut parent = HashMap::new();
        let mut depth = HashMap::from([(root, 0usize)]);
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for y in adj.get(&x).into_iter().flatten() {
                if !depth.contains_key(y) {
                    depth.insert(*y, depth[&x] + 1);
                    parent.insert(*y, x);
                    queue.push_back(*y);
                }
            }
        }
        // n-1 edges reaching all n vertices means no cycles.
        if depth.len() != grid.len() {
            return Err(Error::NotASpanningTree);
        }
        Ok(SpanningTree { edges, parent, depth })
    }

    pub fn edges(&self) -> &[(Location, Location)] {
        &self.edges
    }

    pub fn contains_edge(&self, a: &Location, b: &Location) -> bool {
        self.parent.get(a) == Some(b) || self.parent.get(b) == Some(a)
    }

    /// The unique tree path from `a` to `b`.
    pub fn path(&self, a: &Location, b: &Location) -> Vec<Location> {
        let (mut x, mut y) = (*a, *b);
        let mut front = vec![x];
        let mut back = vec![y];
        while self.depth[&x] > self.depth[&y] {
            x = self.parent[&x];
            front.push(x);
        }
        while self.depth[&y] > self.depth[&x] {
            y = self.parent[&y];
            back.push(y);
        }
        while x != y {
            x = self.parent[&x];
            y = self.parent[&y];
            front.push(x);
            back.push(y);
        }
        back.pop();
        front.extend(back.into_iter().rev());
        front
    }
}
