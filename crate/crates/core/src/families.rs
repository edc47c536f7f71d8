//! The two polynomial families of Concrete Billiard Arrays.
//!
//! Both live in the space `P_N` of homogeneous polynomials of degree `N` in
//! commuting `x, y, z`. Their images span an `(N+1)`-dimensional subspace, and
//! the constructors re-express every vector in the basis formed by the images
//! of the `[2,3]`-boundary locations `(0, N−i, i)`, so the outputs live in
//! `F^(N+1)` with the standard basis on that boundary.

use std::collections::BTreeMap;

use crate::billiard::ConcreteBilliardArray;
use crate::error::{Error, Result};
use crate::field::{FieldContext, Scalar};
use crate::grid::{grid_size, loc, DeltaGrid, Location};
use crate::linalg::{Matrix, Vector};

/// A homogeneous polynomial in `x, y, z`; the monomial `x^a y^b z^c` is keyed by `(a, b, c)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriPoly {
    ctx: FieldContext,
    degree: usize,
    terms: BTreeMap<Location, Scalar>,
}

impl TriPoly {
    pub fn one(ctx: FieldContext) -> Self {
        TriPoly { ctx, degree: 0, terms: BTreeMap::from([(loc(0, 0, 0), ctx.one())]) }
    }

    /// `a·x + b·y + c·z`.
    pub fn linear(a: &Scalar, b: &Scalar, c: &Scalar) -> Result<Self> {
        let ctx = a.ctx();
        if b.ctx() != ctx || c.ctx() != ctx {
            return Err(Error::ContextMismatch);
        }
        let mut terms = BTreeMap::new();
        for (k, v) in [(loc(1, 0, 0), a), (loc(0, 1, 0), b), (loc(0, 0, 1), c)] {
            if !v.is_zero() {
                terms.insert(k, v.clone());
            }
        }
        Ok(TriPoly { ctx, degree: 1, terms })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coefficient(&self, a: usize, b: usize, c: usize) -> Scalar {
        self.terms.get(&loc(a, b, c)).cloned().unwrap_or_else(|| self.ctx.zero())
    }

    pub fn mul(&self, o: &TriPoly) -> Result<TriPoly> {
        if o.ctx != self.ctx {
            return Err(Error::ContextMismatch);
        }
        let mut terms: BTreeMap<Location, Scalar> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let m = m1.plus(m2);
                let prod = c1 * c2;
                let e = terms.entry(m).or_insert_with(|| self.ctx.zero());
                *e = &*e + &prod;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(TriPoly { ctx: self.ctx, degree: self.degree + o.degree, terms })
    }

    /// Coefficients in the lexicographic monomial order of `(a, b, c)`; length `(N+1)(N+2)/2`.
    pub fn to_vector(&self) -> Vector {
        let coeffs = DeltaGrid::enumerate(self.degree)
            .iter()
            .map(|m| self.terms.get(m).cloned().unwrap_or_else(|| self.ctx.zero()))
            .collect();
        Vector::new(self.ctx, coeffs).expect("coefficients share the context")
    }
}

/// `(a, b; q)_n = (a − b)(a − bq)⋯(a − bq^{n−1})` for linear forms `a`, `b`.
pub fn q_shifted(a: &TriPoly, b: &TriPoly, q: &Scalar, n: usize) -> Result<TriPoly> {
    let mut acc = TriPoly::one(a.ctx);
    let mut qk = a.ctx.one();
    for _ in 0..n {
        let factor = TriPoly::linear(
            &(&a.coefficient(1, 0, 0) - &(&b.coefficient(1, 0, 0) * &qk)),
            &(&a.coefficient(0, 1, 0) - &(&b.coefficient(0, 1, 0) * &qk)),
            &(&a.coefficient(0, 0, 1) - &(&b.coefficient(0, 0, 1) * &qk)),
        )?;
        acc = acc.mul(&factor)?;
        qk = &qk * q;
    }
    Ok(acc)
}

/// `(x − y)^r (y − z)^s (z − x)^t` for every location, as coefficient vectors in `P_N`.
pub fn poly_polynomials(n: usize, ctx: FieldContext) -> Result<BTreeMap<Location, TriPoly>> {
    let (one, zero) = (ctx.one(), ctx.zero());
    let m1 = one.neg();
    let xy = TriPoly::linear(&one, &m1, &zero)?;
    let yz = TriPoly::linear(&zero, &one, &m1)?;
    let zx = TriPoly::linear(&m1, &zero, &one)?;
    let pow = |p: &TriPoly, k: usize| -> Result<TriPoly> {
        (0..k).try_fold(TriPoly::one(ctx), |acc, _| acc.mul(p))
    };
    DeltaGrid::enumerate(n)
        .into_iter()
        .map(|l| Ok((l, pow(&xy, l.r)?.mul(&pow(&yz, l.s)?)?.mul(&pow(&zx, l.t)?)?)))
        .collect()
}

/// `(x x̄, y; q)_r (y ȳ, z; q)_s (z z̄, x; q)_t` for every location.
pub fn q_polynomials(
    n: usize,
    q: &Scalar,
    xbar: &Scalar,
    ybar: &Scalar,
    zbar: &Scalar,
) -> Result<BTreeMap<Location, TriPoly>> {
    let ctx = q.ctx();
    let z0 = ctx.zero();
    let x = TriPoly::linear(&ctx.one(), &z0, &z0)?;
    let y = TriPoly::linear(&z0, &ctx.one(), &z0)?;
    let z = TriPoly::linear(&z0, &z0, &ctx.one())?;
    let xx = TriPoly::linear(xbar, &z0, &z0)?;
    let yy = TriPoly::linear(&z0, ybar, &z0)?;
    let zz = TriPoly::linear(&z0, &z0, zbar)?;
    DeltaGrid::enumerate(n)
        .into_iter()
        .map(|l| {
            let p = q_shifted(&xx, &y, q, l.r)?
                .mul(&q_shifted(&yy, &z, q, l.s)?)?
                .mul(&q_shifted(&zz, &x, q, l.t)?)?;
            Ok((l, p))
        })
        .collect()
}

/// Coordinates of each polynomial in the basis of the `[2,3]`-boundary images.
pub fn reduce_to_boundary_basis(
    n: usize,
    ctx: FieldContext,
    polys: &BTreeMap<Location, TriPoly>,
) -> Result<ConcreteBilliardArray> {
    let full = grid_size(n);
    let boundary: Vec<Vector> = (0..=n).map(|i| polys[&loc(0, n - i, i)].to_vector()).collect();
    let w = Matrix::from_columns(ctx, full, &boundary)?;
    let mut vectors = BTreeMap::new();
    for (l, p) in polys {
        let coords = w
            .solve(&p.to_vector())?
            .ok_or_else(|| Error::InvalidArray(format!("image of {} leaves the boundary span", l)))?;
        vectors.insert(*l, coords);
    }
    ConcreteBilliardArray::new(n, ctx, vectors)
}

/// The `(x − y)^r (y − z)^s (z − x)^t` array. Over GF(p) this needs `p > N`.
pub fn poly_cba(n: usize, ctx: FieldContext) -> Result<ConcreteBilliardArray> {
    if n == 0 {
        return Err(Error::BadDiameter(n));
    }
    let p = ctx.characteristic();
    if p != 0 && p <= n as u64 {
        return Err(Error::BadCharacteristic);
    }
    reduce_to_boundary_basis(n, ctx, &poly_polynomials(n, ctx)?)
}

/// The q-shifted array; requires `x̄ ȳ z̄ = q^{N−1}` and `q ∉ {0, 1}`.
pub fn q_cba(n: usize, q: &Scalar, xbar: &Scalar, ybar: &Scalar, zbar: &Scalar) -> Result<ConcreteBilliardArray> {
    let ctx = q.ctx();
    if [xbar, ybar, zbar].iter().any(|s| s.ctx() != ctx) {
        return Err(Error::ContextMismatch);
    }
    if q.is_zero() || q.is_one() {
        return Err(Error::BadQ);
    }
    let target = q.pow(n as i64 - 1)?;
    if &(xbar * ybar) * zbar != target {
        return Err(Error::ConstraintViolation);
    }
    reduce_to_boundary_basis(n, ctx, &q_polynomials(n, q, xbar, ybar, zbar)?)
}

/// The q-shifted array over ℚ(q) with `x̄ = ȳ = 1` and `z̄ = q^{N−1}`.
pub fn q_cba_symbolic(n: usize) -> Result<ConcreteBilliardArray> {
    let ctx = FieldContext::RationalFunctions;
    let q = ctx.q()?;
    q_cba(n, &q, &ctx.one(), &ctx.one(), &q.pow(n as i64 - 1)?)
}

/// The transition scalars predicted for the q-shifted array: on the black
/// clique at `(r,s,t)`, `β_{λ,μ} = q^r/ȳ`, `β_{μ,ν} = q^s/z̄`, `β_{ν,λ} = q^t/x̄`.
pub fn q_transition_table(
    n: usize,
    q: &Scalar,
    xbar: &Scalar,
    ybar: &Scalar,
    zbar: &Scalar,
) -> Result<BTreeMap<(Location, Location), Scalar>> {
    let mut out = BTreeMap::new();
    if n == 0 {
        return Ok(out);
    }
    for base in DeltaGrid::enumerate(n - 1) {
        let [l, m, nu] = crate::grid::Clique::black(base).locations;
        for (a, b, k, bar) in [(l, m, base.r, ybar), (m, nu, base.s, zbar), (nu, l, base.t, xbar)] {
            let c = q.pow(k as i64)?.div(bar)?;
            out.insert((b, a), c.inv()?);
            out.insert((a, b), c);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rank_of;

    #[test]
    fn diameter_one_polys() {
        let q = FieldContext::Rationals;
        let ps = poly_polynomials(1, q).unwrap();
        let v: Vec<Vector> = ps.values().map(|p| p.to_vector()).collect();
        assert_eq!(rank_of(q, 3, &v), 2);
        for i in 0..3 {
            for j in 0..i {
                assert_eq!(rank_of(q, 3, &[v[i].clone(), v[j].clone()]), 2);
            }
        }
        assert!(poly_cba(1, q).unwrap().verify().is_ok());
    }

    #[test]
    fn empty_products() {
        let ctx = FieldContext::RationalFunctions;
        let q = ctx.q().unwrap();
        let ps = q_polynomials(0, &q, &ctx.one(), &ctx.one(), &q.pow(-1).unwrap()).unwrap();
        assert_eq!(ps[&loc(0, 0, 0)], TriPoly::one(ctx));
    }

    #[test]
    fn poly_family_sums_to_zero_on_black_cliques() {
        let ctx = FieldContext::Rationals;
        let ps = poly_polynomials(4, ctx).unwrap();
        for c in DeltaGrid::new(4).black_cliques() {
            let [a, b, d] = c.locations.map(|l| ps[&l].to_vector());
            assert!(a.add(&b).unwrap().add(&d).unwrap().is_zero());
        }
    }

    #[test]
    fn argument_errors() {
        assert_eq!(poly_cba(0, FieldContext::Rationals).unwrap_err(), Error::BadDiameter(0));
        assert_eq!(poly_cba(5, FieldContext::prime(5).unwrap()).unwrap_err(), Error::BadCharacteristic);
        assert!(poly_cba(4, FieldContext::prime(5).unwrap()).unwrap().verify().is_ok());
        let ctx = FieldContext::Rationals;
        let one = ctx.one();
        assert_eq!(q_cba(3, &one, &one, &one, &one).unwrap_err(), Error::BadQ);
        assert_eq!(q_cba(3, &ctx.int(2), &one, &one, &one).unwrap_err(), Error::ConstraintViolation);
        assert!(q_cba(3, &ctx.int(2), &ctx.int(2), &one, &ctx.int(2)).unwrap().verify().is_ok());
    }
}
