//! Edge-labellings of Δ_N, value functions, reconstruction of concrete arrays
//! from boundary data, and the classification by value functions.

use std::collections::{BTreeMap, HashMap};

use crate::billiard::ConcreteBilliardArray;
use crate::error::{Error, Result};
use crate::field::{FieldContext, Scalar};
use crate::grid::{loc, raw_distance, Clique, DeltaGrid, Location, SpanningTree};
use crate::linalg::{Matrix, Vector};

/// A nonzero scalar for every white clique, indexed by its base in Δ_{N−2}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueFunction {
    n: usize,
    ctx: FieldContext,
    values: BTreeMap<Location, Scalar>,
}

impl ValueFunction {
    pub fn from_fn(n: usize, ctx: FieldContext, mut f: impl FnMut(&Location) -> Scalar) -> Result<Self> {
        if n < 2 {
            return Err(Error::DiameterTooSmall(n));
        }
        let mut values = BTreeMap::new();
        for base in DeltaGrid::enumerate(n - 2) {
            let v = f(&base);
            if v.is_zero() {
                return Err(Error::DivisionByZero);
            }
            if v.ctx() != ctx {
                return Err(Error::ContextMismatch);
            }
            values.insert(base, v);
        }
        Ok(ValueFunction { n, ctx, values })
    }

    pub fn constant(n: usize, c: &Scalar) -> Result<Self> {
        Self::from_fn(n, c.ctx(), |_| c.clone())
    }

    pub fn diameter(&self) -> usize {
        self.n
    }

    pub fn ctx(&self) -> FieldContext {
        self.ctx
    }

    pub fn get(&self, base: &Location) -> Result<&Scalar> {
        self.values.get(base).ok_or(Error::OutOfRange(*base))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Location, &Scalar)> {
        self.values.iter()
    }

    /// `Some(c)` if every value equals `c`.
    pub fn constant_value(&self) -> Option<&Scalar> {
        let first = self.values.values().next()?;
        self.values.values().all(|v| v == first).then_some(first)
    }
}

/// Nonzero scalars on directed edges, reciprocal under reversal, with product 1
/// around every black clique.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeLabelling {
    grid: DeltaGrid,
    ctx: FieldContext,
    labels: BTreeMap<(Location, Location), Scalar>,
}

impl EdgeLabelling {
    /// Accepts one or both directions of each edge; the missing direction is the reciprocal.
    pub fn new(n: usize, ctx: FieldContext, given: BTreeMap<(Location, Location), Scalar>) -> Result<Self> {
        let grid = DeltaGrid::new(n);
        let mut labels = BTreeMap::new();
        for ((a, b), c) in &given {
            if !grid.adjacent(a, b) {
                return Err(Error::NotAdjacent(*a, *b));
            }
            if c.ctx() != ctx {
                return Err(Error::ContextMismatch);
            }
            let inv = c.inv().map_err(|_| Error::InvalidLabelling(format!("zero label on {} {}", a, b)))?;
            if let Some(back) = given.get(&(*b, *a)) {
                if *back != inv {
                    return Err(Error::InvalidLabelling(format!("labels on {} {} are not reciprocal", a, b)));
                }
            }
            labels.insert((*a, *b), c.clone());
            labels.insert((*b, *a), inv);
        }
        for (a, b) in grid.edges() {
            if !labels.contains_key(&(a, b)) {
                return Err(Error::InvalidLabelling(format!("edge {} {} has no label", a, b)));
            }
        }
        let el = EdgeLabelling { grid, ctx, labels };
        if let Some(base) = el.failing_black_clique() {
            return Err(Error::InvalidLabelling(format!("black clique at {} has product different from 1", base)));
        }
        Ok(el)
    }

    fn failing_black_clique(&self) -> Option<Location> {
        self.grid.black_cliques().into_iter().find_map(|cl| {
            let [l, m, n] = cl.locations;
            let p = &(&self.labels[&(l, m)] * &self.labels[&(m, n)]) * &self.labels[&(n, l)];
            (!p.is_one()).then_some(cl.base)
        })
    }

    /// The transition scalars of a concrete array.
    pub fn from_concrete(cba: &ConcreteBilliardArray) -> Result<Self> {
        Self::new(cba.diameter(), cba.ctx(), cba.transition_scalars()?)
    }

    pub fn all_ones(n: usize, ctx: FieldContext) -> Self {
        let grid = DeltaGrid::new(n);
        let mut labels = BTreeMap::new();
        for (a, b) in grid.edges() {
            labels.insert((a, b), ctx.one());
            labels.insert((b, a), ctx.one());
        }
        EdgeLabelling { grid, ctx, labels }
    }

    pub fn grid(&self) -> &DeltaGrid {
        &self.grid
    }

    pub fn diameter(&self) -> usize {
        self.grid.diameter()
    }

    pub fn ctx(&self) -> FieldContext {
        self.ctx
    }

    pub fn label(&self, a: &Location, b: &Location) -> Result<&Scalar> {
        self.labels.get(&(*a, *b)).ok_or(Error::NotAdjacent(*a, *b))
    }

    /// All directed labels.
    pub fn labels(&self) -> &BTreeMap<(Location, Location), Scalar> {
        &self.labels
    }

    /// Product of labels along a walk; the empty walk has value 1.
    pub fn walk_value(&self, walk: &[Location]) -> Result<Scalar> {
        let mut acc = self.ctx.one();
        for w in walk.windows(2) {
            let c = self.labels.get(&(w[0], w[1])).ok_or(Error::NotAWalk)?;
            acc = &acc * c;
        }
        if walk.len() == 1 && !self.grid.contains(&walk[0]) {
            return Err(Error::NotAWalk);
        }
        Ok(acc)
    }

    /// `f(x) = Σ_ω β_ω` over geodesic paths from `x` to `target`, for every `x`.
    pub fn geodesic_sums_to(&self, target: &Location) -> Result<HashMap<Location, Scalar>> {
        if !self.grid.contains(target) {
            return Err(Error::GridMismatch);
        }
        let mut order: Vec<Location> = self.grid.locations().to_vec();
        order.sort_by_key(|x| raw_distance(x, target));
        let mut f: HashMap<Location, Scalar> = HashMap::with_capacity(order.len());
        for x in order {
            let d = raw_distance(&x, target);
            if d == 0 {
                f.insert(x, self.ctx.one());
                continue;
            }
            let mut acc = self.ctx.zero();
            for y in self.grid.neighbors(&x) {
                if raw_distance(&y, target) + 1 == d {
                    acc = &acc + &(&self.labels[&(x, y)] * &f[&y]);
                }
            }
            f.insert(x, acc);
        }
        Ok(f)
    }

    /// `β_{λ,μ} = Σ_ω β_ω` over all geodesic paths `ω` from λ to μ.
    pub fn geodesic_sum(&self, a: &Location, b: &Location) -> Result<Scalar> {
        if !self.grid.contains(a) {
            return Err(Error::GridMismatch);
        }
        Ok(self.geodesic_sums_to(b)?.remove(a).unwrap())
    }

    /// The 3×3 matrix `[β_{x,y}]` over a black clique (ones on the diagonal).
    pub fn coefficient_matrix(&self, clique: &Clique) -> Result<Matrix> {
        let ls = clique.locations;
        let rows = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| if i == j { Ok(self.ctx.one()) } else { self.label(&ls[i], &ls[j]).cloned() })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(self.ctx, 3, rows)
    }

    /// Clockwise product over each white clique.
    pub fn value_function(&self) -> Result<ValueFunction> {
        ValueFunction::from_fn(self.diameter(), self.ctx, |base| {
            let [l, m, n] = Clique::white(*base).locations;
            &(&self.labels[&(l, m)] * &self.labels[&(m, n)]) * &self.labels[&(n, l)]
        })
    }

    /// The concrete array with `𝓑_λ = (−1)^r Σ_{i=t}^{r+t} β_{λ,λ_i} v_i`,
    /// where `λ_i = (0, N−i, i)` and `v_i` are the boundary vectors.
    pub fn reconstruct(&self, boundary: &[Vector]) -> Result<ConcreteBilliardArray> {
        let n = self.diameter();
        if boundary.len() != n + 1 {
            return Err(Error::Shape(format!("expected {} boundary vectors", n + 1)));
        }
        let dim = boundary[0].dim();
        for v in boundary {
            if v.ctx() != self.ctx {
                return Err(Error::ContextMismatch);
            }
            if v.dim() != dim {
                return Err(Error::AmbientMismatch);
            }
        }
        if dim != n + 1 {
            return Err(Error::AmbientMismatch);
        }
        let sums: Vec<HashMap<Location, Scalar>> =
            (0..=n).map(|i| self.geodesic_sums_to(&loc(0, n - i, i))).collect::<Result<_>>()?;
        Ok(ConcreteBilliardArray::from_fn(n, self.ctx, |l| {
            let terms: Vec<(Scalar, &Vector)> = (l.t..=l.r + l.t).map(|i| (sums[i][l].clone(), &boundary[i])).collect();
            let v = Vector::combination(self.ctx, dim, &terms);
            if l.r % 2 == 1 {
                v.neg()
            } else {
                v
            }
        }))
    }

    /// Reconstruction with the standard basis on the `[2,3]` boundary.
    pub fn reconstruct_standard(&self) -> Result<ConcreteBilliardArray> {
        let n = self.diameter();
        let basis: Vec<Vector> = (0..=n).map(|i| Vector::unit(self.ctx, n + 1, i)).collect();
        self.reconstruct(&basis)
    }

    /// The unique labelling with value function `psi` that restricts to
    /// `tree_values` (default 1) on the edges of `tree`.
    pub fn from_values(
        psi: &ValueFunction,
        tree: &SpanningTree,
        tree_values: Option<&BTreeMap<(Location, Location), Scalar>>,
    ) -> Result<Self> {
        let n = psi.diameter();
        let ctx = psi.ctx();
        let grid = DeltaGrid::new(n);
        let mut labels: BTreeMap<(Location, Location), Scalar> = BTreeMap::new();
        for (a, b) in tree.edges() {
            if !grid.adjacent(a, b) {
                return Err(Error::NotASpanningTree);
            }
            let fwd = tree_values.and_then(|m| m.get(&(*a, *b)));
            let back = tree_values.and_then(|m| m.get(&(*b, *a)));
            let c = match (fwd, back) {
                (Some(x), Some(y)) => {
                    if !(x * y).is_one() {
                        return Err(Error::InconsistentTreeValues);
                    }
                    x.clone()
                }
                (Some(x), None) => x.clone(),
                (None, Some(y)) => y.inv().map_err(|_| Error::InconsistentTreeValues)?,
                (None, None) => ctx.one(),
            };
            if c.is_zero() || c.ctx() != ctx {
                return Err(Error::InconsistentTreeValues);
            }
            labels.insert((*b, *a), c.inv()?);
            labels.insert((*a, *b), c);
        }
        if let Some(m) = tree_values {
            if m.keys().any(|(a, b)| !tree.contains_edge(a, b)) {
                return Err(Error::InconsistentTreeValues);
            }
        }

        let whites = grid.white_cliques();
        let clockwise = orientation(&whites.first().map(|c| c.locations.to_vec()).unwrap_or_default()).signum();
        for (a, b) in grid.edges() {
            if tree.contains_edge(&a, &b) {
                continue;
            }
            // Close the tree path from b back to a with the edge a -> b.
            let path = tree.path(&b, &a);
            let mut d = ctx.one();
            for w in path.windows(2) {
                d = &d * &labels[&(w[0], w[1])];
            }
            let mut cycle = vec![a];
            cycle.extend(path.iter().take(path.len() - 1).copied());
            let mut c = ctx.one();
            for w in &whites {
                if encloses(&cycle, w) {
                    c = &c * psi.get(&w.base)?;
                }
            }
            let eps = if orientation(&cycle).signum() == clockwise { 1 } else { -1 };
            let beta = c.pow(eps)?.div(&d)?;
            labels.insert((b, a), beta.inv()?);
            labels.insert((a, b), beta);
        }
        let el = EdgeLabelling { grid, ctx, labels };
        if let Some(base) = el.failing_black_clique() {
            return Err(Error::InvalidLabelling(format!("black clique at {} has product different from 1", base)));
        }
        Ok(el)
    }

    /// With the canonical spanning tree and all tree labels equal to 1.
    pub fn from_values_canonical(psi: &ValueFunction) -> Result<Self> {
        let tree = DeltaGrid::new(psi.diameter()).canonical_spanning_tree()?;
        Self::from_values(psi, &tree, None)
    }

    /// Scalars `κ` with `β_{λ,μ} κ_λ = β'_{λ,μ} κ_μ` on every edge, if the labellings are similar.
    pub fn similarity_witness(&self, other: &EdgeLabelling) -> Result<Option<BTreeMap<Location, Scalar>>> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch);
        }
        let n = self.diameter();
        let mut kappa: BTreeMap<Location, Scalar> = BTreeMap::new();
        let root = loc(0, 0, n);
        kappa.insert(root, self.ctx.one());
        if n > 0 {
            let tree = self.grid.canonical_spanning_tree()?;
            for l in self.grid.locations() {
                let path = tree.path(&root, l);
                // κ_λ = β_ω / β'_ω along the tree path ω from the root.
                let k = self.walk_value(&path)?.div(&other.walk_value(&path)?)?;
                kappa.insert(*l, k);
            }
        }
        for ((a, b), c) in &self.labels {
            if c * &kappa[a] != &other.labels[&(*a, *b)] * &kappa[b] {
                return Ok(None);
            }
        }
        Ok(Some(kappa))
    }

    pub fn is_similar(&self, other: &EdgeLabelling) -> Result<bool> {
        Ok(self.similarity_witness(other)?.is_some())
    }
}

/// Plane coordinates of a location, an injective linear image of the grid.
fn plane(l: &Location) -> (i64, i64) {
    (2 * l.r as i64 + l.s as i64, l.s as i64)
}

/// Twice the signed area of a closed polygon.
fn orientation(poly: &[Location]) -> i64 {
    let pts: Vec<(i64, i64)> = poly.iter().map(plane).collect();
    let mut a = 0;
    for i in 0..pts.len() {
        let (x1, y1) = pts[i];
        let (x2, y2) = pts[(i + 1) % pts.len()];
        a += x1 * y2 - x2 * y1;
    }
    a
}

/// Whether the centroid of `clique` lies inside the simple polygon `poly`.
fn encloses(poly: &[Location], clique: &Clique) -> bool {
    // Work at three times scale so the centroid has integer coordinates.
    let (px, py) = clique.locations.iter().map(plane).fold((0, 0), |(x, y), (a, b)| (x + a, y + b));
    let pts: Vec<(i64, i64)> = poly.iter().map(plane).map(|(x, y)| (3 * x, 3 * y)).collect();
    let mut inside = false;
    for i in 0..pts.len() {
        let (x1, y1) = pts[i];
        let (x2, y2) = pts[(i + 1) % pts.len()];
        if (y1 > py) != (y2 > py) {
            // Crossing point to the right of p?
            let lhs = (x1 - px) * (y2 - y1) + (py - y1) * (x2 - x1);
            if (lhs > 0) == (y2 > y1) {
                inside = !inside;
            }
        }
    }
    inside
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldContext = FieldContext::Rationals;

    #[test]
    fn walk_values() {
        let el = EdgeLabelling::all_ones(3, Q);
        assert!(el.walk_value(&[]).unwrap().is_one());
        assert!(el.walk_value(&[loc(1, 1, 1), loc(2, 0, 1), loc(1, 1, 1)]).unwrap().is_one());
        assert_eq!(el.walk_value(&[loc(3, 0, 0), loc(1, 1, 1)]), Err(Error::NotAWalk));
    }

    #[test]
    fn all_ones_geodesic_sums_count_paths() {
        let n = 5;
        let el = EdgeLabelling::all_ones(n, Q);
        let g = el.grid().clone();
        for a in g.locations() {
            for b in g.locations() {
                let s = el.geodesic_sum(a, b).unwrap();
                assert_eq!(s, Q.int(g.geodesic_count(a, b).unwrap() as i64));
            }
        }
    }

    #[test]
    fn enclosure_of_single_cliques() {
        // The boundary of a white clique encloses exactly that clique.
        let g = DeltaGrid::new(3);
        for w in g.white_cliques() {
            for other in g.white_cliques() {
                assert_eq!(encloses(&w.locations, &other), w == other);
            }
        }
        for b in g.black_cliques() {
            assert!(g.white_cliques().iter().all(|w| !encloses(&b.locations, w)));
        }
    }

    #[test]
    fn constant_one_gives_all_ones() {
        let psi = ValueFunction::constant(4, &Q.one()).unwrap();
        let el = EdgeLabelling::from_values_canonical(&psi).unwrap();
        assert_eq!(el, EdgeLabelling::all_ones(4, Q));
    }

    #[test]
    fn rejects_bad_labellings() {
        let g = DeltaGrid::new(1);
        let mut m = BTreeMap::new();
        for (a, b) in g.edges() {
            m.insert((a, b), Q.int(2));
        }
        assert!(matches!(EdgeLabelling::new(1, Q, m), Err(Error::InvalidLabelling(_))));
        let psi = ValueFunction::constant(2, &Q.int(3)).unwrap();
        let tree = g.canonical_spanning_tree().unwrap();
        assert!(EdgeLabelling::from_values(&psi, &tree, None).is_err());
    }

    #[test]
    fn values_roundtrip_through_arrays() {
        for ctx in [Q, FieldContext::prime(11).unwrap()] {
            for n in 2..=5 {
                let psi = ValueFunction::from_fn(n, ctx, |b| ctx.int((b.r * 3 + b.s * 5 + b.t + 2) as i64 % 7 + 1)).unwrap();
                let el = EdgeLabelling::from_values_canonical(&psi).unwrap();
                assert_eq!(el.value_function().unwrap(), psi);
                let cba = el.reconstruct_standard().unwrap();
                assert!(cba.verify().is_ok());
                let back = EdgeLabelling::from_concrete(&cba).unwrap();
                assert_eq!(back, el);
                assert_eq!(cba.value_function().unwrap(), psi);
            }
        }
    }
}
