//! Billiard Arrays and Concrete Billiard Arrays.
//!
//! A [`ConcreteBilliardArray`] stores one vector per location; a
//! [`BilliardArray`] stores the line each vector spans, as its echelon
//! generator. Both live on `F^(N+1)`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{FieldContext, Scalar};
use crate::flags::Flag;
use crate::grid::{Clique, DeltaGrid, Location};
use crate::labelling::ValueFunction;
use crate::linalg::{rank_of, Matrix, Subspace, Vector};

/// One failed axiom.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Violation {
    Shape { location: Location, detail: String },
    ZeroVector(Location),
    DependentLine { eta: usize, locations: Vec<Location> },
    IndependentClique { base: Location },
}

impl Violation {
    /// Locations involved in the violation.
    pub fn locations(&self) -> Vec<Location> {
        match self {
            Violation::Shape { location, .. } | Violation::ZeroVector(location) => vec![*location],
            Violation::DependentLine { locations, .. } => locations.clone(),
            Violation::IndependentClique { base } => Clique::black(*base).locations.to_vec(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Verdict {
    pub violations: Vec<Violation>,
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

enum Check<'a> {
    Line(usize, &'a [Location]),
    Clique(&'a Clique),
}

/// Runs the line and black-clique axioms on `vectors`, optionally across threads.
fn verify_vectors(grid: &DeltaGrid, ctx: FieldContext, vectors: &[Vector], threads: usize) -> Verdict {
    let dim = grid.diameter() + 1;
    let mut out = Verdict::default();
    for (l, v) in grid.locations().iter().zip(vectors) {
        if v.dim() != dim || v.ctx() != ctx {
            out.violations.push(Violation::Shape {
                location: *l,
                detail: format!("expected a vector of length {} over {}", dim, ctx),
            });
        } else if v.is_zero() {
            out.violations.push(Violation::ZeroVector(*l));
        }
    }
    if !out.is_ok() {
        return out;
    }
    let lines: Vec<(usize, Vec<Location>)> = (1..=3)
        .flat_map(|eta| grid.lines(eta).unwrap().into_iter().map(move |l| (eta, l)))
        .collect();
    let cliques = grid.black_cliques();
    let mut checks: Vec<Check> = lines.iter().map(|(e, l)| Check::Line(*e, l)).collect();
    checks.extend(cliques.iter().map(Check::Clique));

    let run = |c: &Check| -> Option<Violation> {
        let pick = |ls: &[Location]| -> Vec<Vector> { ls.iter().map(|l| vectors[grid.index(l).unwrap()].clone()).collect() };
        match c {
            Check::Line(eta, ls) => {
                let vs = pick(ls);
                (rank_of(ctx, dim, &vs) < vs.len()).then(|| Violation::DependentLine { eta: *eta, locations: ls.to_vec() })
            }
            Check::Clique(cl) => {
                let vs = pick(&cl.locations);
                (rank_of(ctx, dim, &vs) == 3).then_some(Violation::IndependentClique { base: cl.base })
            }
        }
    };

    let threads = threads.max(1).min(checks.len().max(1));
    let found: Vec<Option<Violation>> = if threads == 1 {
        checks.iter().map(run).collect()
    } else {
        let chunk = checks.len().div_ceil(threads);
        std::thread::scope(|sc| {
            let handles: Vec<_> = checks.chunks(chunk).map(|part| sc.spawn(|| part.iter().map(run).collect::<Vec<_>>())).collect();
            handles.into_iter().flat_map(|h| h.join().expect("verification worker panicked")).collect()
        })
    };
    out.violations.extend(found.into_iter().flatten());
    out
}

/// Map from ordered adjacent pairs to the transition scalars of a concrete array.
pub type TransitionTable = BTreeMap<(Location, Location), Scalar>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConcreteBilliardArray {
    grid: DeltaGrid,
    ctx: FieldContext,
    vectors: Vec<Vector>,
}

impl ConcreteBilliardArray {
    /// Wraps vectors without checking the axioms; see [`Self::verify`].
    pub fn new(n: usize, ctx: FieldContext, mut vectors: BTreeMap<Location, Vector>) -> Result<Self> {
        let grid = DeltaGrid::new(n);
        let mut vs = Vec::with_capacity(grid.len());
        for l in grid.locations() {
            match vectors.remove(l) {
                Some(v) => vs.push(v),
                None => return Err(Error::InvalidArray(format!("no vector at {}", l))),
            }
        }
        if let Some(l) = vectors.keys().next() {
            return Err(Error::OutOfRange(*l));
        }
        Ok(ConcreteBilliardArray { grid, ctx, vectors: vs })
    }

    /// Builds from a function on locations.
    pub fn from_fn(n: usize, ctx: FieldContext, mut f: impl FnMut(&Location) -> Vector) -> Self {
        let grid = DeltaGrid::new(n);
        let vectors = grid.locations().iter().map(&mut f).collect();
        ConcreteBilliardArray { grid, ctx, vectors }
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

    pub fn dim(&self) -> usize {
        self.diameter() + 1
    }

    pub fn vector(&self, l: &Location) -> Result<&Vector> {
        self.grid.index(l).map(|i| &self.vectors[i]).ok_or(Error::OutOfRange(*l))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Location, &Vector)> {
        self.grid.locations().iter().zip(&self.vectors)
    }

    pub fn verify(&self) -> Verdict {
        verify_vectors(&self.grid, self.ctx, &self.vectors, 1)
    }

    pub fn verify_parallel(&self, threads: usize) -> Verdict {
        verify_vectors(&self.grid, self.ctx, &self.vectors, threads)
    }

    fn require_valid(&self) -> Result<()> {
        let v = self.verify();
        match v.violations.first() {
            None => Ok(()),
            Some(x) => Err(Error::InvalidArray(format!("{:?}", x))),
        }
    }

    /// The Billiard Array this array spans.
    pub fn to_billiard(&self) -> Result<BilliardArray> {
        self.require_valid()?;
        Ok(BilliardArray {
            grid: self.grid.clone(),
            ctx: self.ctx,
            gens: self.vectors.iter().map(Vector::normalized).collect(),
        })
    }

    /// The vectors along the corner path `[η, ξ]`.
    pub fn b_basis(&self, eta: usize, xi: usize) -> Result<Vec<Vector>> {
        self.grid.corner_path(eta, xi)?.iter().map(|l| self.vector(l).cloned()).collect()
    }

    /// Coefficients `(a, b, c)` of the dependency `a𝓑_λ + b𝓑_μ + c𝓑_ν = 0` on a black clique.
    pub fn clique_dependency(&self, clique: &Clique) -> Result<[Scalar; 3]> {
        let vs: Vec<Vector> = clique.locations.iter().map(|l| self.vector(l).cloned()).collect::<Result<_>>()?;
        clique_dependency(self.ctx, self.dim(), &vs).ok_or_else(|| Error::InvalidArray(format!("black clique at {} is not a dependent pair-independent triple", clique.base)))
    }

    /// `𝓑̃_{λ,μ}` for every ordered adjacent pair.
    pub fn transition_scalars(&self) -> Result<TransitionTable> {
        self.require_valid()?;
        let mut table = TransitionTable::new();
        for cl in self.grid.black_cliques() {
            let [a, b, c] = self.clique_dependency(&cl)?;
            let [l, m, n] = cl.locations;
            let q = |x: &Scalar, y: &Scalar| x.div(y).expect("nonzero dependency coefficient");
            table.insert((l, m), q(&b, &a));
            table.insert((m, l), q(&a, &b));
            table.insert((m, n), q(&c, &b));
            table.insert((n, m), q(&b, &c));
            table.insert((n, l), q(&a, &c));
            table.insert((l, n), q(&c, &a));
        }
        Ok(table)
    }

    /// Clockwise product of transition scalars on each white clique.
    pub fn value_function(&self) -> Result<ValueFunction> {
        let n = self.diameter();
        if n < 2 {
            return Err(Error::DiameterTooSmall(n));
        }
        let table = self.transition_scalars()?;
        ValueFunction::from_fn(n, self.ctx, |base| {
            let [l, m, k] = Clique::white(*base).locations;
            &(&table[&(l, m)] * &table[&(m, k)]) * &table[&(k, l)]
        })
    }

    /// Image under the linear map `m`.
    pub fn map(&self, m: &Matrix) -> Result<ConcreteBilliardArray> {
        let vectors = self.vectors.iter().map(|v| m.apply(v)).collect::<Result<_>>()?;
        Ok(ConcreteBilliardArray { grid: self.grid.clone(), ctx: self.ctx, vectors })
    }

    /// Multiply `𝓑_λ` by `κ_λ`.
    pub fn rescale(&self, kappa: &BTreeMap<Location, Scalar>) -> Result<ConcreteBilliardArray> {
        let vectors = self
            .iter()
            .map(|(l, v)| match kappa.get(l) {
                Some(k) if k.is_zero() => Err(Error::ZeroVector),
                Some(k) => Ok(v.scale(k)),
                None => Ok(v.clone()),
            })
            .collect::<Result<_>>()?;
        Ok(ConcreteBilliardArray { grid: self.grid.clone(), ctx: self.ctx, vectors })
    }

    /// Scalars `κ_λ` with `other_λ = κ_λ self_λ`, if the arrays are associates.
    pub fn associates(&self, other: &ConcreteBilliardArray) -> Option<BTreeMap<Location, Scalar>> {
        if self.grid != other.grid || self.ctx != other.ctx {
            return None;
        }
        let mut kappa = BTreeMap::new();
        for ((l, a), b) in self.iter().zip(&other.vectors) {
            let k = b.ratio_to(a)?;
            if k.is_zero() {
                return None;
            }
            kappa.insert(*l, k);
        }
        Some(kappa)
    }

    /// A single scalar `κ` with `other = κ self`, if the arrays are relatives.
    pub fn relatives(&self, other: &ConcreteBilliardArray) -> Option<Scalar> {
        let kappa = self.associates(other)?;
        let first = kappa.values().next()?.clone();
        kappa.values().all(|k| *k == first).then_some(first)
    }

    /// The unique linear bijection sending each `self_λ` to `other_λ`, if any.
    pub fn isomorphism_to(&self, other: &ConcreteBilliardArray) -> Option<Matrix> {
        if self.grid != other.grid || self.ctx != other.ctx {
            return None;
        }
        let n = self.dim();
        let p = Matrix::from_columns(self.ctx, n, &self.b_basis(2, 3).ok()?).ok()?;
        let p2 = Matrix::from_columns(self.ctx, n, &other.b_basis(2, 3).ok()?).ok()?;
        let sigma = p2.mul(&p.inverse()?).ok()?;
        sigma.inverse()?;
        for (a, b) in self.vectors.iter().zip(&other.vectors) {
            if sigma.apply(a).ok()? != *b {
                return None;
            }
        }
        Some(sigma)
    }

    /// Similar arrays are those whose Billiard Arrays are isomorphic.
    pub fn similar_to(&self, other: &ConcreteBilliardArray) -> Result<bool> {
        Ok(self.to_billiard()?.isomorphism_to(&other.to_billiard()?)?.is_some())
    }
}

/// Kernel vector of three pairwise independent, jointly dependent vectors.
fn clique_dependency(ctx: FieldContext, dim: usize, vs: &[Vector]) -> Option<[Scalar; 3]> {
    let m = Matrix::from_columns(ctx, dim, vs).ok()?;
    let k = m.kernel();
    if k.len() != 1 {
        return None;
    }
    let e = k[0].entries();
    if e.iter().any(Scalar::is_zero) {
        return None;
    }
    Some([e[0].clone(), e[1].clone(), e[2].clone()])
}

/// An abrace `u + v + w = 0` on a black clique.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Abrace {
    pub clique: Clique,
    pub u: Vector,
    pub v: Vector,
    pub w: Vector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilliardArray {
    grid: DeltaGrid,
    ctx: FieldContext,
    gens: Vec<Vector>,
}

impl BilliardArray {
    /// Builds from spanning vectors (normalised to echelon generators) and checks the axioms.
    pub fn new(n: usize, ctx: FieldContext, gens: BTreeMap<Location, Vector>) -> Result<Self> {
        let cba = ConcreteBilliardArray::new(n, ctx, gens)?;
        cba.to_billiard()
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

    pub fn dim(&self) -> usize {
        self.diameter() + 1
    }

    /// Canonical generator of `B_λ` (first nonzero entry 1).
    pub fn generator(&self, l: &Location) -> Result<&Vector> {
        self.grid.index(l).map(|i| &self.gens[i]).ok_or(Error::OutOfRange(*l))
    }

    pub fn subspace(&self, l: &Location) -> Result<Subspace> {
        Ok(Subspace::line(self.generator(l)?))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Location, &Vector)> {
        self.grid.locations().iter().zip(&self.gens)
    }

    pub fn verify(&self) -> Verdict {
        verify_vectors(&self.grid, self.ctx, &self.gens, 1)
    }

    /// Concrete array with `𝓑_λ = scale_λ · generator_λ` (missing scales are 1).
    pub fn to_concrete(&self, scales: Option<&BTreeMap<Location, Scalar>>) -> Result<ConcreteBilliardArray> {
        let cba = ConcreteBilliardArray { grid: self.grid.clone(), ctx: self.ctx, vectors: self.gens.clone() };
        match scales {
            None => Ok(cba),
            Some(k) => cba.rescale(k),
        }
    }

    /// `B_μ = Σ_{λ ≥ μ} B_λ` for `μ ∈ Δ_≤N`.
    pub fn extend(&self, mu: &Location) -> Result<Subspace> {
        let up = self.grid.upset(mu)?;
        let vs: Vec<Vector> = up.iter().map(|l| self.generator(l).unwrap().clone()).collect();
        Subspace::span(self.ctx, self.dim(), &vs)
    }

    /// B-flag `[η]`: component `n` is `B_{(N−n) e_η}`.
    pub fn b_flag(&self, eta: usize) -> Result<Flag> {
        let n = self.diameter();
        self.grid.corner(eta)?;
        let comps = (0..=n).map(|i| self.extend(&Location::corner(eta, n - i))).collect::<Result<Vec<_>>>()?;
        Flag::new(comps)
    }

    /// B-decomposition `[η, ξ]`: the lines along the corner path.
    pub fn b_decomposition(&self, eta: usize, xi: usize) -> Result<Vec<Subspace>> {
        self.grid.corner_path(eta, xi)?.iter().map(|l| self.subspace(l)).collect()
    }

    /// The three B-flags `[1], [2], [3]`.
    pub fn flags(&self) -> Result<crate::flags::FlagTriple> {
        crate::flags::FlagTriple::new(self.b_flag(1)?, self.b_flag(2)?, self.b_flag(3)?)
    }

    fn coefficient_in(&self, l: &Location, u: &Vector) -> Result<Scalar> {
        let g = self.generator(l)?;
        if u.dim() != g.dim() {
            return Err(Error::AmbientMismatch);
        }
        if u.is_zero() {
            return Ok(self.ctx.zero());
        }
        u.ratio_to(g).ok_or(Error::NotInSubspace)
    }

    /// The abrace on `clique` whose first member is `u ∈ B_λ`.
    pub fn abrace_through(&self, clique: &Clique, u: &Vector) -> Result<Abrace> {
        if u.is_zero() {
            return Err(Error::ZeroVector);
        }
        let [l, m, n] = clique.locations;
        self.coefficient_in(&l, u)?;
        let gm = self.generator(&m)?;
        let gn = self.generator(&n)?;
        let a = Matrix::from_columns(self.ctx, self.dim(), &[gm.clone(), gn.clone()])?;
        let x = a.solve(&u.neg())?.ok_or_else(|| Error::InvalidArray(format!("black clique at {} has no abrace", clique.base)))?;
        Ok(Abrace { clique: *clique, u: u.clone(), v: gm.scale(x.get(0)), w: gn.scale(x.get(1)) })
    }

    /// `B̃_{λ,μ}(u)`: the `v ∈ B_μ` with `u + v ∈ B_ν`, `ν` completing the black clique.
    pub fn transition_apply(&self, l: &Location, m: &Location, u: &Vector) -> Result<Vector> {
        let n = self.grid.completion(l, m)?;
        self.coefficient_in(l, u)?;
        let gm = self.generator(m)?;
        let gn = self.generator(&n)?;
        // u + x g_μ = y g_ν
        let a = Matrix::from_columns(self.ctx, self.dim(), &[gm.clone(), gn.neg()])?;
        let x = a.solve(&u.neg())?.ok_or_else(|| Error::InvalidArray(format!("no brace on edge {} {}", l, m)))?;
        Ok(gm.scale(x.get(0)))
    }

    /// The scalar by which `B̃_{λ,μ}` multiplies generators: `B̃(g_λ) = c g_μ`.
    pub fn transition_scalar(&self, l: &Location, m: &Location) -> Result<Scalar> {
        let v = self.transition_apply(l, m, self.generator(l)?)?;
        self.coefficient_in(m, &v)
    }

    /// Composite of `B̃` along a walk, applied to `u`.
    pub fn transport(&self, walk: &[Location], u: &Vector) -> Result<Vector> {
        let mut cur = u.clone();
        for w in walk.windows(2) {
            cur = self.transition_apply(&w[0], &w[1], &cur)?;
        }
        Ok(cur)
    }

    /// The B-value of each white clique, by composing the maps clockwise.
    pub fn value_function(&self) -> Result<ValueFunction> {
        let n = self.diameter();
        if n < 2 {
            return Err(Error::DiameterTooSmall(n));
        }
        let mut err = None;
        let vf = ValueFunction::from_fn(n, self.ctx, |base| {
            let [l, m, k] = Clique::white(*base).locations;
            let g = self.generator(&l).unwrap();
            match self.transport(&[l, m, k, l], g).map(|v| v.ratio_to(g)) {
                Ok(Some(c)) => c,
                Ok(None) => {
                    err = Some(Error::InvalidArray(format!("white clique at {} is not scalar", base)));
                    self.ctx.one()
                }
                Err(e) => {
                    err = Some(e);
                    self.ctx.one()
                }
            }
        })?;
        match err {
            Some(e) => Err(e),
            None => Ok(vf),
        }
    }

    /// Basis of all maps `σ` with `σ B_λ ⊆ B'_λ` for every λ.
    pub fn intertwiner_space(&self, other: &BilliardArray) -> Result<Vec<Matrix>> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch);
        }
        let n = self.dim();
        let locs = self.grid.locations();
        let unknowns = n * n + locs.len();
        let mut rows = Vec::new();
        // σ g_λ − c_λ g'_λ = 0, one row per coordinate.
        for (k, l) in locs.iter().enumerate() {
            let g = self.generator(l)?;
            let g2 = other.generator(l)?;
            for i in 0..n {
                let mut row = vec![self.ctx.zero(); unknowns];
                for j in 0..n {
                    row[i * n + j] = g.get(j).clone();
                }
                row[n * n + k] = g2.get(i).neg();
                rows.push(row);
            }
        }
        let sys = Matrix::from_rows(self.ctx, unknowns, rows)?;
        Ok(sys
            .kernel()
            .into_iter()
            .map(|x| {
                let entries: Vec<Vec<Scalar>> = (0..n).map(|i| x.entries()[i * n..(i + 1) * n].to_vec()).collect();
                Matrix::from_rows(self.ctx, n, entries).unwrap()
            })
            .filter(|m| !m.is_zero())
            .collect())
    }

    /// An isomorphism of Billiard Arrays `σ B_λ = B'_λ`, if one exists.
    pub fn isomorphism_to(&self, other: &BilliardArray) -> Result<Option<Matrix>> {
        let space = self.intertwiner_space(other)?;
        let mut candidates = space.clone();
        if space.len() > 1 {
            let mut s = space[0].clone();
            for m in &space[1..] {
                s = s.add(m)?;
            }
            candidates.push(s);
        }
        for sigma in candidates {
            if sigma.inverse().is_some() {
                return Ok(Some(sigma));
            }
        }
        Ok(None)
    }

    /// Image under an invertible map.
    pub fn map(&self, m: &Matrix) -> Result<BilliardArray> {
        self.to_concrete(None)?.map(m)?.to_billiard()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::loc;

    const Q: FieldContext = FieldContext::Rationals;

    fn v(xs: &[i64]) -> Vector {
        Vector::new(Q, xs.iter().map(|&x| Q.int(x)).collect()).unwrap()
    }

    fn n1(vs: [&[i64]; 3]) -> ConcreteBilliardArray {
        let m = BTreeMap::from([(loc(1, 0, 0), v(vs[0])), (loc(0, 1, 0), v(vs[1])), (loc(0, 0, 1), v(vs[2]))]);
        ConcreteBilliardArray::new(1, Q, m).unwrap()
    }

    #[test]
    fn degenerate_diameters() {
        let a = ConcreteBilliardArray::new(0, Q, BTreeMap::from([(loc(0, 0, 0), v(&[3]))])).unwrap();
        assert!(a.verify().is_ok());
        let ba = a.to_billiard().unwrap();
        assert_eq!(ba.extend(&loc(0, 0, 0)).unwrap(), Subspace::full(Q, 1));
        assert!(n1([&[1, 0], &[0, 1], &[1, 1]]).verify().is_ok());
        let bad = n1([&[1, 1], &[1, 1], &[1, 1]]);
        assert!(bad.verify().violations.iter().all(|x| matches!(x, Violation::DependentLine { .. })));
        assert!(!bad.verify().is_ok());
    }

    #[test]
    fn transition_scalars_n1() {
        // e0 + e1 - (e0 + e1) = 0 gives coefficients (1, 1, -1).
        let a = n1([&[1, 0], &[0, 1], &[1, 1]]);
        let t = a.transition_scalars().unwrap();
        assert_eq!(t[&(loc(1, 0, 0), loc(0, 1, 0))], Q.one());
        assert_eq!(t[&(loc(1, 0, 0), loc(0, 0, 1))], Q.int(-1));
        for ((x, y), c) in &t {
            assert!((c * &t[&(*y, *x)]).is_one());
        }
        let ba = a.to_billiard().unwrap();
        let u = v(&[5, 0]);
        let w = ba.transition_apply(&loc(1, 0, 0), &loc(0, 1, 0), &u).unwrap();
        assert_eq!(w, v(&[0, 5]));
        assert_eq!(ba.transition_apply(&loc(0, 1, 0), &loc(1, 0, 0), &w).unwrap(), u);
        assert_eq!(ba.transition_apply(&loc(1, 0, 0), &loc(0, 1, 0), &v(&[0, 1])), Err(Error::NotInSubspace));
    }

    #[test]
    fn abrace_scales() {
        let a = n1([&[1, 0], &[0, 1], &[1, 1]]).to_billiard().unwrap();
        let cl = a.grid().black_cliques()[0];
        let br = a.abrace_through(&cl, &v(&[2, 0])).unwrap();
        assert!(br.u.add(&br.v).unwrap().add(&br.w).unwrap().is_zero());
        let br3 = a.abrace_through(&cl, &v(&[6, 0])).unwrap();
        assert_eq!(br3.v, br.v.scale(&Q.int(3)));
        assert_eq!(a.abrace_through(&cl, &v(&[0, 0])), Err(Error::ZeroVector));
    }
}
