//! The equitable actions of sl₂ (value function ≡ 1) and U_q(sl₂) (value
//! function ≡ q⁻²) carried by a Billiard Array.
//!
//! `X`, `Y`, `Z` act on component `i` of the B-decompositions `[2,3]`, `[3,1]`,
//! `[1,2]` by `2i − N` or `q^{N−2i}`. All matrices are written in the standard
//! basis of the ambient space `F^(N+1)`.

use crate::billiard::BilliardArray;
use crate::error::{Error, Result};
use crate::field::{FieldContext, Scalar};
use crate::flags::{Flag, FlagTriple};
use crate::grid::{Clique, Location, Root, ALPHA, BETA, GAMMA};
use crate::linalg::{Matrix, Subspace, Vector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Flavor {
    Sl2,
    Uq(Scalar),
}

impl Flavor {
    /// Eigenvalue on component `i` for diameter `n`.
    pub fn eigenvalue(&self, ctx: FieldContext, n: usize, i: usize) -> Result<Scalar> {
        match self {
            Flavor::Sl2 => Ok(ctx.int(2 * i as i64 - n as i64)),
            Flavor::Uq(q) => q.pow(n as i64 - 2 * i as i64),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquitableOperators {
    flavor: Flavor,
    x: Matrix,
    y: Matrix,
    z: Matrix,
    nu_x: Matrix,
    nu_y: Matrix,
    nu_z: Matrix,
}

impl EquitableOperators {
    /// Wraps three square matrices and derives `ν_x, ν_y, ν_z` from them.
    pub fn new(flavor: Flavor, x: Matrix, y: Matrix, z: Matrix) -> Result<Self> {
        let ctx = x.ctx();
        let n = x.rows();
        for m in [&x, &y, &z] {
            if m.ctx() != ctx {
                return Err(Error::ContextMismatch);
            }
            if m.rows() != n || m.cols() != n {
                return Err(Error::Shape("operators must be square of one size".into()));
            }
        }
        let nu = |a: &Matrix, b: &Matrix| -> Result<Matrix> {
            match &flavor {
                Flavor::Sl2 => {
                    if ctx.characteristic() == 2 {
                        return Err(Error::BadCharacteristic);
                    }
                    Ok(a.add(b)?.scale(&ctx.ratio(-1, 2)?))
                }
                Flavor::Uq(q) => Ok(Matrix::identity(ctx, n).sub(&a.mul(b)?)?.scale(q)),
            }
        };
        let (nu_x, nu_y, nu_z) = (nu(&y, &z)?, nu(&z, &x)?, nu(&x, &y)?);
        Ok(EquitableOperators { flavor, x, y, z, nu_x, nu_y, nu_z })
    }

    pub fn flavor(&self) -> &Flavor {
        &self.flavor
    }

    pub fn ctx(&self) -> FieldContext {
        self.x.ctx()
    }

    /// The diameter `N`, one less than the dimension.
    pub fn diameter(&self) -> usize {
        self.x.rows().saturating_sub(1)
    }

    pub fn x(&self) -> &Matrix {
        &self.x
    }

    pub fn y(&self) -> &Matrix {
        &self.y
    }

    pub fn z(&self) -> &Matrix {
        &self.z
    }

    pub fn nu_x(&self) -> &Matrix {
        &self.nu_x
    }

    pub fn nu_y(&self) -> &Matrix {
        &self.nu_y
    }

    pub fn nu_z(&self) -> &Matrix {
        &self.nu_z
    }

    /// `ν_x, ν_y, ν_z` in that order.
    pub fn nus(&self) -> [&Matrix; 3] {
        [&self.nu_x, &self.nu_y, &self.nu_z]
    }

    /// `X, Y, Z` in that order.
    pub fn generators(&self) -> [&Matrix; 3] {
        [&self.x, &self.y, &self.z]
    }

    /// Conjugate every operator by `s`: `M ↦ S M S⁻¹`.
    pub fn conjugate(&self, s: &Matrix) -> Result<Self> {
        let inv = s.inverse().ok_or(Error::DivisionByZero)?;
        let c = |m: &Matrix| s.mul(m)?.mul(&inv);
        Self::new(self.flavor.clone(), c(&self.x)?, c(&self.y)?, c(&self.z)?)
    }
}

fn check_flavor(ba: &BilliardArray, flavor: &Flavor) -> Result<()> {
    let ctx = ba.ctx();
    let n = ba.diameter();
    let expected = match flavor {
        Flavor::Sl2 => {
            if ctx.characteristic() == 2 {
                return Err(Error::BadCharacteristic);
            }
            ctx.one()
        }
        Flavor::Uq(q) => {
            if q.ctx() != ctx {
                return Err(Error::ContextMismatch);
            }
            if q.is_zero() || q.pow(2)?.is_one() {
                return Err(Error::BadQ);
            }
            q.pow(-2)?
        }
    };
    if n >= 2 && ba.value_function()?.constant_value() != Some(&expected) {
        return Err(Error::WrongValueFunction);
    }
    Ok(())
}

/// `P D P⁻¹` where the columns of `P` span the components of the `[η,ξ]` decomposition.
fn diagonal_on(ba: &BilliardArray, flavor: &Flavor, eta: usize, xi: usize) -> Result<Matrix> {
    let ctx = ba.ctx();
    let n = ba.diameter();
    let cols: Vec<Vector> = ba.b_decomposition(eta, xi)?.iter().map(|c| c.basis()[0].clone()).collect();
    let p = Matrix::from_columns(ctx, n + 1, &cols)?;
    let d = (0..=n).map(|i| flavor.eigenvalue(ctx, n, i)).collect::<Result<Vec<_>>>()?;
    let pinv = p.inverse().ok_or(Error::NotADecomposition)?;
    p.mul(&Matrix::diagonal(ctx, &d))?.mul(&pinv)
}

/// The operators attached to `ba`; the value function must be the flavor's constant.
pub fn build_operators(ba: &BilliardArray, flavor: Flavor) -> Result<EquitableOperators> {
    check_flavor(ba, &flavor)?;
    let x = diagonal_on(ba, &flavor, 2, 3)?;
    let y = diagonal_on(ba, &flavor, 3, 1)?;
    let z = diagonal_on(ba, &flavor, 1, 2)?;
    EquitableOperators::new(flavor, x, y, z)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residual {
    pub relation: String,
    pub matrix: Matrix,
}

/// Failing relations together with `lhs − rhs`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RelationVerdict {
    pub residuals: Vec<Residual>,
}

impl RelationVerdict {
    pub fn is_ok(&self) -> bool {
        self.residuals.is_empty()
    }
}

/// The defining relations, checked as exact matrix identities.
pub fn check_relations(ops: &EquitableOperators) -> Result<RelationVerdict> {
    let ctx = ops.ctx();
    let dim = ops.x.rows();
    let mut residuals = Vec::new();
    let pairs = [("XY", &ops.x, &ops.y), ("YZ", &ops.y, &ops.z), ("ZX", &ops.z, &ops.x)];
    for (name, a, b) in pairs {
        let ab = a.mul(b)?;
        let ba = b.mul(a)?;
        let res = match &ops.flavor {
            Flavor::Sl2 => {
                let two = ctx.int(2);
                ab.sub(&ba)?.sub(&a.add(b)?.scale(&two))?
            }
            Flavor::Uq(q) => {
                let qi = q.inv()?;
                ab.scale(q).sub(&ba.scale(&qi))?.sub(&Matrix::scalar(ctx, dim, &(q - &qi)))?
            }
        };
        if !res.is_zero() {
            residuals.push(Residual { relation: name.to_string(), matrix: res });
        }
    }
    if matches!(ops.flavor, Flavor::Uq(_)) {
        for (name, m) in [("X invertible", &ops.x), ("Y invertible", &ops.y), ("Z invertible", &ops.z)] {
            if m.inverse().is_none() {
                residuals.push(Residual { relation: name.to_string(), matrix: m.clone() });
            }
        }
    }
    Ok(RelationVerdict { residuals })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalFailure {
    pub identity: String,
    pub location: Location,
}

/// Local identities that failed on some `B_λ` generator.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LocalVerdict {
    pub failures: Vec<LocalFailure>,
}

impl LocalVerdict {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Products {
    xy: Matrix,
    yx: Matrix,
    yz: Matrix,
    zy: Matrix,
    zx: Matrix,
    xz: Matrix,
}

/// Every local identity of the action, evaluated on the stored generator of each `B_λ`
/// and on the abrace through it for every black clique.
pub fn local_action_check(ops: &EquitableOperators, ba: &BilliardArray) -> Result<LocalVerdict> {
    if ops.ctx() != ba.ctx() {
        return Err(Error::ContextMismatch);
    }
    if ops.x.rows() != ba.dim() {
        return Err(Error::AmbientMismatch);
    }
    let pr = Products {
        xy: ops.x.mul(&ops.y)?,
        yx: ops.y.mul(&ops.x)?,
        yz: ops.y.mul(&ops.z)?,
        zy: ops.z.mul(&ops.y)?,
        zx: ops.z.mul(&ops.x)?,
        xz: ops.x.mul(&ops.z)?,
    };
    let mut failures = Vec::new();
    for (l, _) in ba.iter() {
        for name in check_location(ops, ba, &pr, l)? {
            failures.push(LocalFailure { identity: name, location: *l });
        }
    }
    for clique in ba.grid().black_cliques() {
        for name in check_abrace(ops, ba, &clique)? {
            failures.push(LocalFailure { identity: name, location: clique.base });
        }
    }
    Ok(LocalVerdict { failures })
}

/// `Σ c_i v_i` over vectors of a common dimension.
fn comb(ctx: FieldContext, dim: usize, terms: &[(Scalar, &Vector)]) -> Vector {
    Vector::combination(ctx, dim, terms)
}

fn check_location(ops: &EquitableOperators, ba: &BilliardArray, pr: &Products, l: &Location) -> Result<Vec<String>> {
    let ctx = ba.ctx();
    let dim = ba.dim();
    let n = ba.diameter() as i64;
    let (r, s, t) = (l.r as i64, l.s as i64, l.t as i64);
    let g = ba.generator(l)?.clone();
    let step = |d: Root| -> Result<Vector> {
        match l.offset(d).filter(|m| ba.grid().contains(m)) {
            Some(m) => ba.transition_apply(l, &m, &g),
            None => Ok(Vector::zero(ctx, dim)),
        }
    };
    let neg = |d: Root| [-d[0], -d[1], -d[2]];
    let (xg, yg, zg) = (ops.x.apply(&g)?, ops.y.apply(&g)?, ops.z.apply(&g)?);
    let (xyg, yxg) = (pr.xy.apply(&g)?, pr.yx.apply(&g)?);
    let (yzg, zyg) = (pr.yz.apply(&g)?, pr.zy.apply(&g)?);
    let (zxg, xzg) = (pr.zx.apply(&g)?, pr.xz.apply(&g)?);
    let (t_ma, t_pa) = (step(neg(ALPHA))?, step(ALPHA)?);
    let (t_mb, t_pb) = (step(neg(BETA))?, step(BETA)?);
    let (t_mg, t_pg) = (step(neg(GAMMA))?, step(GAMMA)?);
    let one = ctx.one();
    let mut fails = Vec::new();
    let mut expect = |name: &str, a: Vector, b: Vector| {
        if a != b {
            fails.push(name.to_string());
        }
    };

    match &ops.flavor {
        Flavor::Sl2 => {
            let k = |v: i64| ctx.int(v);
            // X − (N−2s)I = 2r B̃_{λ,λ−α} and its five companions.
            let reform: [(&str, &Vector, i64, i64, &Vector); 6] = [
                ("X-(N-2s)I", &xg, n - 2 * s, 2 * r, &t_ma),
                ("X-(2t-N)I", &xg, 2 * t - n, -2 * r, &t_pg),
                ("Y-(N-2t)I", &yg, n - 2 * t, 2 * s, &t_mb),
                ("Y-(2r-N)I", &yg, 2 * r - n, -2 * s, &t_pa),
                ("Z-(N-2r)I", &zg, n - 2 * r, 2 * t, &t_mg),
                ("Z-(2s-N)I", &zg, 2 * s - n, -2 * t, &t_pb),
            ];
            for (name, mg, e, c, tv) in reform {
                expect(name, comb(ctx, dim, &[(one.clone(), mg), (k(-e), &g)]), tv.scale(&k(c)));
            }
            // (Z − (N−2r+2)I)(X − (2t−N)I) = −4r(t+1)I
            let inner = comb(ctx, dim, &[(one.clone(), &xg), (k(n - 2 * t), &g)]);
            let outer = comb(ctx, dim, &[(one.clone(), &ops.z.apply(&inner)?), (k(2 * r - n - 2), &inner)]);
            expect("prelim", outer, g.scale(&k(-4 * r * (t + 1))));
            let views: [(&str, &Vector, &Vector, &Vector, &Vector, &Vector, &Vector, i64, i64, i64); 3] = [
                ("XY-2Y", &xyg, &yxg, &xg, &yg, &yg, &xg, 2 * r - n, n - 2 * s, 2 * t - n),
                ("YZ-2Z", &yzg, &zyg, &yg, &zg, &zg, &yg, 2 * s - n, n - 2 * t, 2 * r - n),
                ("ZX-2X", &zxg, &xzg, &zg, &xg, &xg, &zg, 2 * t - n, n - 2 * r, 2 * s - n),
            ];
            for (name, abg, bag, ag, bg, sub_left, add_right, ca, cb, cc) in views {
                let left = comb(ctx, dim, &[(one.clone(), abg), (k(-2), sub_left)]);
                let mid = comb(ctx, dim, &[(k(ca), ag), (k(cb), bg), (k((n + 2) * cc), &g)]);
                let right = comb(ctx, dim, &[(one.clone(), bag), (k(2), add_right)]);
                expect(name, left, mid.clone());
                expect(name, mid, right);
            }
            let nus = [
                ("nu_x", &ops.nu_x, (s, &t_pa), (-t, &t_mg)),
                ("nu_y", &ops.nu_y, (t, &t_pb), (-r, &t_ma)),
                ("nu_z", &ops.nu_z, (r, &t_pg), (-s, &t_mb)),
            ];
            for (name, m, (c1, v1), (c2, v2)) in nus {
                expect(name, m.apply(&g)?, comb(ctx, dim, &[(k(c1), v1), (k(c2), v2)]));
            }
        }
        Flavor::Uq(q) => {
            let qp = |e: i64| q.pow(e);
            let reform: [(&str, &Vector, i64, i64, &Vector); 6] = [
                ("X-q^(2s-N)I", &xg, 2 * s - n, n - 2 * t, &t_ma),
                ("X-q^(N-2t)I", &xg, n - 2 * t, 2 * s - n, &t_pg),
                ("Y-q^(2t-N)I", &yg, 2 * t - n, n - 2 * r, &t_mb),
                ("Y-q^(N-2r)I", &yg, n - 2 * r, 2 * t - n, &t_pa),
                ("Z-q^(2r-N)I", &zg, 2 * r - n, n - 2 * s, &t_mg),
                ("Z-q^(N-2s)I", &zg, n - 2 * s, 2 * r - n, &t_pb),
            ];
            for (name, mg, e1, e2, tv) in reform {
                let c = &qp(e1)? - &qp(e2)?;
                expect(name, comb(ctx, dim, &[(one.clone(), mg), (qp(e1)?.neg(), &g)]), tv.scale(&c));
            }
            // (Z − q^{2r−2−N}I)(X − q^{N−2t}I) = (q^{2r−2−N} − q^{N−2s})(q^{N−2t} − q^{2s−N})I
            let inner = comb(ctx, dim, &[(one.clone(), &xg), (qp(n - 2 * t)?.neg(), &g)]);
            let outer = comb(ctx, dim, &[(one.clone(), &ops.z.apply(&inner)?), (qp(2 * r - 2 - n)?.neg(), &inner)]);
            let c = &(&qp(2 * r - 2 - n)? - &qp(n - 2 * s)?) * &(&qp(n - 2 * t)? - &qp(2 * s - n)?);
            expect("prelim", outer, g.scale(&c));
            let qi = q.inv()?;
            let views: [(&str, &Vector, &Vector, i64, &Vector, i64, i64, &Vector, i64); 3] = [
                ("q(I-XY)", &xyg, &yxg, n - 2 * r + 1, &xg, n - 2 * t, 2 * s - n - 1, &yg, 2 * t - n),
                ("q(I-YZ)", &yzg, &zyg, n - 2 * s + 1, &yg, n - 2 * r, 2 * t - n - 1, &zg, 2 * r - n),
                ("q(I-ZX)", &zxg, &xzg, n - 2 * t + 1, &zg, n - 2 * s, 2 * r - n - 1, &xg, 2 * s - n),
            ];
            for (name, abg, bag, e1, ag, ea, e2, bg, eb) in views {
                let left = comb(ctx, dim, &[(q.clone(), &g), (q.neg(), abg)]);
                let (c1, c2) = (qp(e1)?, qp(e2)?);
                let mid = comb(
                    ctx,
                    dim,
                    &[(c1.neg(), ag), (c2.neg(), bg), (&(&c1 * &qp(ea)?) + &(&c2 * &qp(eb)?), &g)],
                );
                let right = comb(ctx, dim, &[(qi.clone(), &g), (qi.neg(), bag)]);
                expect(name, left, mid.clone());
                expect(name, mid, right);
            }
            let bracket = |k: i64| -> Result<Scalar> { Ok(&qp(k)? - &qp(-k)?) };
            let nus = [
                ("nu_x", &ops.nu_x, &(&qp(t - 2 * s - 1)? * &bracket(t)?) , &t_mg, &(&qp(2 * t - s + 1)? * &bracket(s)?), &t_pa),
                ("nu_y", &ops.nu_y, &(&qp(r - 2 * t - 1)? * &bracket(r)?), &t_ma, &(&qp(2 * r - t + 1)? * &bracket(t)?), &t_pb),
                ("nu_z", &ops.nu_z, &(&qp(s - 2 * r - 1)? * &bracket(s)?), &t_mb, &(&qp(2 * s - r + 1)? * &bracket(r)?), &t_pg),
            ];
            for (name, m, c1, v1, c2, v2) in nus {
                expect(name, m.apply(&g)?, comb(ctx, dim, &[(c1.clone(), v1), (c2.neg(), v2)]));
            }
        }
    }

    // Boundary eigenvalues.
    let boundary: [(bool, &str, &Vector, i64); 3] = [
        (r == 0, "X on r=0", &xg, n - 2 * s),
        (s == 0, "Y on s=0", &yg, n - 2 * t),
        (t == 0, "Z on t=0", &zg, n - 2 * r),
    ];
    for (on, name, mg, e) in boundary {
        if on {
            let c = match &ops.flavor {
                Flavor::Sl2 => ctx.int(e),
                Flavor::Uq(q) => q.pow(-e)?,
            };
            expect(name, mg.clone(), g.scale(&c));
        }
    }

    // ν_x B_λ ⊆ B_{λ+α} + B_{λ−γ}, and cyclically.
    let sub = |d: Root| -> Result<Subspace> {
        match l.offset(d).filter(|m| ba.grid().contains(m)) {
            Some(m) => ba.subspace(&m),
            None => Ok(Subspace::zero(ctx, dim)),
        }
    };
    for (name, m, d1, d2) in [
        ("nu_x inclusion", &ops.nu_x, ALPHA, neg(GAMMA)),
        ("nu_y inclusion", &ops.nu_y, BETA, neg(ALPHA)),
        ("nu_z inclusion", &ops.nu_z, GAMMA, neg(BETA)),
    ] {
        if !sub(d1)?.sum(&sub(d2)?)?.contains(&m.apply(&g)?)? {
            fails.push(name.to_string());
        }
    }
    Ok(fails)
}

/// `Xu = (N−2t)v + (2s−N)w` (sl₂) or `Xu = −q^{N−2t}v − q^{2s−N}w` (U_q), and cyclically,
/// for the abrace through the generator of the clique's first location.
fn check_abrace(ops: &EquitableOperators, ba: &BilliardArray, clique: &Clique) -> Result<Vec<String>> {
    let ctx = ba.ctx();
    let dim = ba.dim();
    let n = ba.diameter() as i64;
    let b = clique.base;
    let (r, s, t) = (b.r as i64, b.s as i64, b.t as i64);
    let ab = ba.abrace_through(clique, ba.generator(&clique.locations[0])?)?;
    let coef = |e: i64| -> Result<Scalar> {
        match &ops.flavor {
            Flavor::Sl2 => Ok(ctx.int(e)),
            Flavor::Uq(q) => Ok(q.pow(e)?.neg()),
        }
    };
    // Sl2 coefficient is the exponent itself; U_q coefficient is −q^exponent.
    let rows = [
        ("abrace X", &ops.x, &ab.u, (n - 2 * t, &ab.v), (2 * s - n, &ab.w)),
        ("abrace Y", &ops.y, &ab.v, (n - 2 * r, &ab.w), (2 * t - n, &ab.u)),
        ("abrace Z", &ops.z, &ab.w, (n - 2 * s, &ab.u), (2 * r - n, &ab.v)),
    ];
    let mut fails = Vec::new();
    for (name, m, src, (e1, v1), (e2, v2)) in rows {
        let rhs = Vector::combination(ctx, dim, &[(coef(e1)?, v1), (coef(e2)?, v2)]);
        if m.apply(src)? != rhs {
            fails.push(name.to_string());
        }
    }
    Ok(fails)
}

/// The flags `{ν^{N−i} V}` for `ν_x`, `ν_y`, `ν_z`.
pub fn nu_flags(ops: &EquitableOperators) -> Result<FlagTriple> {
    let ctx = ops.ctx();
    let n = ops.diameter();
    match &ops.flavor {
        Flavor::Sl2 => {
            let p = ctx.characteristic();
            if p != 0 && p <= n as u64 {
                return Err(Error::BadCharacteristic);
            }
        }
        Flavor::Uq(q) => {
            for i in 1..=n {
                if q.pow(2 * i as i64)?.is_one() {
                    return Err(Error::RootOfUnityObstruction);
                }
            }
        }
    }
    let flag = |nu: &Matrix| -> Result<Flag> {
        let mut powers = vec![Matrix::identity(ctx, n + 1)];
        for _ in 0..n {
            let next = powers.last().unwrap().mul(nu)?;
            powers.push(next);
        }
        Flag::new((0..=n).map(|i| powers[n - i].image()).collect())
    };
    FlagTriple::new(flag(&ops.nu_x)?, flag(&ops.nu_y)?, flag(&ops.nu_z)?)
}

/// Whether `ν^{N+1} = 0` for each of `ν_x, ν_y, ν_z`.
pub fn nu_nilpotent(ops: &EquitableOperators) -> Result<bool> {
    let k = ops.diameter() as u32 + 1;
    for m in ops.nus() {
        if !m.pow(k)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The smallest subspace containing `v` and stable under `X, Y, Z`.
pub fn invariant_closure(ops: &EquitableOperators, v: &Vector) -> Result<Subspace> {
    let ctx = ops.ctx();
    let dim = ops.x.rows();
    let mut span = Subspace::zero(ctx, dim);
    let mut queue = vec![v.clone()];
    while let Some(u) = queue.pop() {
        if span.contains(&u)? {
            continue;
        }
        span = span.sum(&Subspace::line(&u))?;
        for m in ops.generators() {
            queue.push(m.apply(&u)?);
        }
    }
    Ok(span)
}

/// Dimension of the associative algebra generated by `X, Y, Z`.
pub fn generated_algebra_dim(ops: &EquitableOperators) -> Result<usize> {
    let ctx = ops.ctx();
    let dim = ops.x.rows();
    let flat = |m: &Matrix| -> Vector {
        let entries = (0..dim).flat_map(|i| (0..dim).map(move |j| (i, j))).map(|(i, j)| m.get(i, j).clone()).collect();
        Vector::new(ctx, entries).expect("entries share the context")
    };
    let mut span = Subspace::zero(ctx, dim * dim);
    let mut queue = vec![Matrix::identity(ctx, dim)];
    while let Some(m) = queue.pop() {
        let f = flat(&m);
        if span.contains(&f)? {
            continue;
        }
        span = span.sum(&Subspace::line(&f))?;
        for g in ops.generators() {
            queue.push(m.mul(g)?);
        }
    }
    Ok(span.dim())
}

/// Whether no proper nonzero subspace is stable under `X, Y, Z`.
///
/// Any stable subspace is spanned by eigenvectors of an operator it is stable
/// under, so when some generator has one-dimensional eigenspaces summing to the
/// whole space it suffices to close each eigenvector. Otherwise lines in an
/// eigenspace are enumerated over a finite field, and over an infinite field the
/// generated algebra is compared with the full matrix algebra.
pub fn check_irreducible(ops: &EquitableOperators) -> Result<bool> {
    let ctx = ops.ctx();
    let dim = ops.x.rows();
    if dim <= 1 {
        return Ok(dim == 1);
    }
    let n = dim - 1;
    let mut eigen: Vec<Vec<Vec<Vector>>> = Vec::new();
    for m in ops.generators() {
        let mut spaces: Vec<Vec<Vector>> = Vec::new();
        let mut seen: Vec<Scalar> = Vec::new();
        for i in 0..=n {
            let th = ops.flavor.eigenvalue(ctx, n, i)?;
            if seen.contains(&th) {
                continue;
            }
            let k = m.sub(&Matrix::scalar(ctx, dim, &th))?.kernel();
            if !k.is_empty() {
                spaces.push(k);
            }
            seen.push(th);
        }
        if spaces.iter().map(Vec::len).sum::<usize>() == dim {
            eigen.push(spaces);
        }
    }
    let full = |s: &Subspace| s.dim() == dim;
    if let Some(simple) = eigen.iter().find(|sp| sp.iter().all(|e| e.len() == 1)) {
        for e in simple {
            if !full(&invariant_closure(ops, &e[0])?) {
                return Ok(false);
            }
        }
        return Ok(true);
    }
    // Cheap witnesses of reducibility first.
    let mut probes: Vec<Vector> = (0..dim).map(|i| Vector::unit(ctx, dim, i)).collect();
    probes.extend(eigen.iter().flatten().flatten().cloned());
    for v in &probes {
        if !full(&invariant_closure(ops, v)?) {
            return Ok(false);
        }
    }
    if let (Some(p), Some(spaces)) = (ctx.order(), eigen.first()) {
        // Every stable subspace meets some eigenspace; try every line in each.
        for e in spaces {
            for coeffs in lines(p, e.len()) {
                let terms: Vec<(Scalar, &Vector)> = coeffs.iter().map(|c| ctx.int(*c as i64)).zip(e.iter()).collect();
                let v = Vector::combination(ctx, dim, &terms);
                if !full(&invariant_closure(ops, &v)?) {
                    return Ok(false);
                }
            }
        }
        return Ok(true);
    }
    Ok(generated_algebra_dim(ops)? == dim * dim)
}

/// Representatives of the lines of `GF(p)^k`: first nonzero coordinate equal to 1.
fn lines(p: u64, k: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for lead in 0..k {
        let free = k - lead - 1;
        let count = p.pow(free as u32);
        for mut code in 0..count {
            let mut v = vec![0; k];
            v[lead] = 1;
            for slot in v.iter_mut().skip(lead + 1) {
                *slot = code % p;
                code /= p;
            }
            out.push(v);
        }
    }
    out
}
