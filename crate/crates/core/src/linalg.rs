//! Dense exact linear algebra: vectors, matrices and subspaces in reduced echelon form.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldContext, Scalar};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Vector {
    ctx: FieldContext,
    entries: Vec<Scalar>,
}

impl Vector {
    pub fn new(ctx: FieldContext, entries: Vec<Scalar>) -> Result<Self> {
        if entries.iter().any(|e| e.ctx() != ctx) {
            return Err(Error::ContextMismatch);
        }
        Ok(Vector { ctx, entries })
    }

    pub(crate) fn from_raw(ctx: FieldContext, entries: Vec<Scalar>) -> Self {
        Vector { ctx, entries }
    }

    pub fn zero(ctx: FieldContext, dim: usize) -> Self {
        Vector { ctx, entries: vec![ctx.zero(); dim] }
    }

    pub fn unit(ctx: FieldContext, dim: usize, i: usize) -> Self {
        let mut v = Self::zero(ctx, dim);
        v.entries[i] = ctx.one();
        v
    }

    pub fn ctx(&self) -> FieldContext {
        self.ctx
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &Scalar {
        &self.entries[i]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    fn check(&self, o: &Vector) -> Result<()> {
        if self.ctx != o.ctx {
            Err(Error::ContextMismatch)
        } else if self.dim() != o.dim() {
            Err(Error::AmbientMismatch)
        } else {
            Ok(())
        }
    }

    pub fn add(&self, o: &Vector) -> Result<Vector> {
        self.check(o)?;
        Ok(Vector::from_raw(self.ctx, self.entries.iter().zip(&o.entries).map(|(a, b)| a + b).collect()))
    }

    pub fn sub(&self, o: &Vector) -> Result<Vector> {
        self.check(o)?;
        Ok(Vector::from_raw(self.ctx, self.entries.iter().zip(&o.entries).map(|(a, b)| a - b).collect()))
    }

    pub fn neg(&self) -> Vector {
        Vector::from_raw(self.ctx, self.entries.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, c: &Scalar) -> Vector {
        assert_eq!(c.ctx(), self.ctx, "scalar context mismatch");
        Vector::from_raw(self.ctx, self.entries.iter().map(|a| a * c).collect())
    }

    /// `Σ c_i v_i`; all vectors must share `dim`.
    pub fn combination(ctx: FieldContext, dim: usize, terms: &[(Scalar, &Vector)]) -> Vector {
        let mut acc = Vector::zero(ctx, dim);
        for (c, v) in terms {
            if c.is_zero() {
                continue;
            }
            for (a, b) in acc.entries.iter_mut().zip(&v.entries) {
                if !b.is_zero() {
                    *a = &*a + &(c * b);
                }
            }
        }
        acc
    }

    /// `Some(c)` with `self = c * o`, when `o` is nonzero and the two are parallel.
    pub fn ratio_to(&self, o: &Vector) -> Option<Scalar> {
        let i = o.entries.iter().position(|e| !e.is_zero())?;
        let c = self.entries[i].div(&o.entries[i]).ok()?;
        if o.scale(&c) == *self {
            Some(c)
        } else {
            None
        }
    }

    /// Rescale so the first nonzero entry is 1.
    pub fn normalized(&self) -> Vector {
        match self.entries.iter().find(|e| !e.is_zero()) {
            None => self.clone(),
            Some(lead) => self.scale(&lead.inv().unwrap()),
        }
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", e)?;
        }
        write!(f, ")")
    }
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matrix {
    ctx: FieldContext,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(ctx: FieldContext, rows: usize, cols: usize) -> Self {
        Matrix { ctx, rows, cols, data: vec![ctx.zero(); rows * cols] }
    }

    pub fn identity(ctx: FieldContext, n: usize) -> Self {
        Self::scalar(ctx, n, &ctx.one())
    }

    pub fn scalar(ctx: FieldContext, n: usize, c: &Scalar) -> Self {
        let mut m = Self::zero(ctx, n, n);
        for i in 0..n {
            m.data[i * n + i] = c.clone();
        }
        m
    }

    pub fn from_rows(ctx: FieldContext, cols: usize, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::Shape(format!("row of length {} in a {}-column matrix", r.len(), cols)));
            }
            if r.iter().any(|e| e.ctx() != ctx) {
                return Err(Error::ContextMismatch);
            }
            data.extend(r);
        }
        Ok(Matrix { ctx, rows: n, cols, data })
    }

    pub fn from_row_vectors(ctx: FieldContext, cols: usize, vs: &[Vector]) -> Result<Self> {
        Self::from_rows(ctx, cols, vs.iter().map(|v| v.entries.clone()).collect())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(ctx: FieldContext, rows: usize, vs: &[Vector]) -> Result<Self> {
        Ok(Self::from_row_vectors(ctx, rows, vs)?.transpose())
    }

    pub fn diagonal(ctx: FieldContext, d: &[Scalar]) -> Self {
        let n = d.len();
        let mut m = Self::zero(ctx, n, n);
        for (i, c) in d.iter().enumerate() {
            m.data[i * n + i] = c.clone();
        }
        m
    }

    pub fn ctx(&self) -> FieldContext {
        self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, c: Scalar) {
        assert_eq!(c.ctx(), self.ctx, "scalar context mismatch");
        self.data[i * self.cols + j] = c;
    }

    pub fn row(&self, i: usize) -> Vector {
        Vector::from_raw(self.ctx, self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn column(&self, j: usize) -> Vector {
        Vector::from_raw(self.ctx, (0..self.rows).map(|i| self.get(i, j).clone()).collect())
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { ctx: self.ctx, rows: self.cols, cols: self.rows, data }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    fn same_shape(&self, o: &Matrix) -> Result<()> {
        if self.ctx != o.ctx {
            return Err(Error::ContextMismatch);
        }
        if (self.rows, self.cols) != (o.rows, o.cols) {
            return Err(Error::Shape(format!("{}x{} vs {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        Ok(())
    }

    pub fn add(&self, o: &Matrix) -> Result<Matrix> {
        self.same_shape(o)?;
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect();
        Ok(self.with_data(data))
    }

    pub fn sub(&self, o: &Matrix) -> Result<Matrix> {
        self.same_shape(o)?;
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect();
        Ok(self.with_data(data))
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        let data = self.data.iter().map(|a| a * c).collect();
        self.with_data(data)
    }

    fn with_data(&self, data: Vec<Scalar>) -> Matrix {
        Matrix { ctx: self.ctx, rows: self.rows, cols: self.cols, data }
    }

    pub fn mul(&self, o: &Matrix) -> Result<Matrix> {
        if self.ctx != o.ctx {
            return Err(Error::ContextMismatch);
        }
        if self.cols != o.rows {
            return Err(Error::Shape(format!("{}x{} times {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        let mut out = Matrix::zero(self.ctx, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let idx = i * o.cols + j;
                        out.data[idx] = &out.data[idx] + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &Vector) -> Result<Vector> {
        if v.ctx != self.ctx {
            return Err(Error::ContextMismatch);
        }
        if v.dim() != self.cols {
            return Err(Error::AmbientMismatch);
        }
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut acc = self.ctx.zero();
            for j in 0..self.cols {
                let (a, b) = (self.get(i, j), &v.entries[j]);
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc + &(a * b);
                }
            }
            out.push(acc);
        }
        Ok(Vector::from_raw(self.ctx, out))
    }

    pub fn pow(&self, k: u32) -> Result<Matrix> {
        let mut acc = Matrix::identity(self.ctx, self.rows);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            // Cheapest nonzero pivot; the final form does not depend on the choice.
            let Some(p) = (r..rows)
                .filter(|&i| !self.get(i, c).is_zero())
                .min_by_key(|&i| self.get(i, c).weight())
            else {
                continue;
            };
            if p != r {
                for j in 0..cols {
                    self.data.swap(p * cols + j, r * cols + j);
                }
            }
            let inv = self.get(r, c).inv().unwrap();
            for j in c..cols {
                let idx = r * cols + j;
                if !self.data[idx].is_zero() {
                    self.data[idx] = &self.data[idx] * &inv;
                }
            }
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..cols {
                    let b = &self.data[r * cols + j];
                    if b.is_zero() {
                        continue;
                    }
                    let t = &f * b;
                    let idx = i * cols + j;
                    self.data[idx] = &self.data[idx] - &t;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : A x = 0}`.
    pub fn kernel(&self) -> Vec<Vector> {
        let (red, pivots) = self.rref();
        let mut basis = Vec::new();
        let pivot_row: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = Some(i);
            }
            v
        };
        for free in 0..self.cols {
            if pivot_row[free].is_some() {
                continue;
            }
            let mut x = Vector::zero(self.ctx, self.cols);
            x.entries[free] = self.ctx.one();
            for (i, &p) in pivots.iter().enumerate() {
                x.entries[p] = -red.get(i, free);
            }
            basis.push(x);
        }
        basis
    }

    /// Some solution of `A x = b`, if one exists.
    pub fn solve(&self, b: &Vector) -> Result<Option<Vector>> {
        if b.dim() != self.rows {
            return Err(Error::AmbientMismatch);
        }
        let mut aug = Matrix::zero(self.ctx, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.data[i * (self.cols + 1) + j] = self.get(i, j).clone();
            }
            aug.data[i * (self.cols + 1) + self.cols] = b.entries[i].clone();
        }
        let (red, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = Vector::zero(self.ctx, self.cols);
        for (i, &p) in pivots.iter().enumerate() {
            x.entries[p] = red.get(i, self.cols).clone();
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zero(self.ctx, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.data[i * 2 * n + j] = self.get(i, j).clone();
            }
            aug.data[i * 2 * n + n + i] = self.ctx.one();
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zero(self.ctx, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.data[i * n + j] = red.get(i, n + j).clone();
            }
        }
        Some(inv)
    }

    /// Column space.
    pub fn image(&self) -> Subspace {
        Subspace::span_unchecked(self.ctx, self.rows, &self.columns())
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            writeln!(f, "{}", self.row(i))?;
        }
        Ok(())
    }
}

/// A subspace of `F^n` stored by its reduced row echelon basis, so equal
/// subspaces have identical representations.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    ctx: FieldContext,
    ambient: usize,
    basis: Vec<Vector>,
}

impl Subspace {
    pub fn zero(ctx: FieldContext, ambient: usize) -> Self {
        Subspace { ctx, ambient, basis: Vec::new() }
    }

    pub fn full(ctx: FieldContext, ambient: usize) -> Self {
        Subspace { ctx, ambient, basis: (0..ambient).map(|i| Vector::unit(ctx, ambient, i)).collect() }
    }

    pub fn span(ctx: FieldContext, ambient: usize, vs: &[Vector]) -> Result<Self> {
        for v in vs {
            if v.ctx != ctx {
                return Err(Error::ContextMismatch);
            }
            if v.dim() != ambient {
                return Err(Error::AmbientMismatch);
            }
        }
        Ok(Self::span_unchecked(ctx, ambient, vs))
    }

    pub(crate) fn span_unchecked(ctx: FieldContext, ambient: usize, vs: &[Vector]) -> Self {
        let vs: Vec<&Vector> = vs.iter().filter(|v| !v.is_zero()).collect();
        if vs.is_empty() {
            return Self::zero(ctx, ambient);
        }
        if vs.len() == 1 {
            return Subspace { ctx, ambient, basis: vec![vs[0].normalized()] };
        }
        let rows: Vec<Vec<Scalar>> = vs.iter().map(|v| v.entries.clone()).collect();
        let m = Matrix::from_rows(ctx, ambient, rows).expect("checked shapes");
        let (red, pivots) = m.rref();
        let basis = (0..pivots.len()).map(|i| red.row(i)).collect();
        Subspace { ctx, ambient, basis }
    }

    /// Span of a single vector.
    pub fn line(v: &Vector) -> Self {
        Self::span_unchecked(v.ctx, v.dim(), std::slice::from_ref(v))
    }

    pub fn ctx(&self) -> FieldContext {
        self.ctx
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    fn check(&self, o: &Subspace) -> Result<()> {
        if self.ctx != o.ctx {
            Err(Error::ContextMismatch)
        } else if self.ambient != o.ambient {
            Err(Error::AmbientMismatch)
        } else {
            Ok(())
        }
    }

    pub fn sum(&self, o: &Subspace) -> Result<Subspace> {
        self.check(o)?;
        if o.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(o.clone());
        }
        let mut vs = self.basis.clone();
        vs.extend(o.basis.iter().cloned());
        Ok(Self::span_unchecked(self.ctx, self.ambient, &vs))
    }

    pub fn sum_all(ctx: FieldContext, ambient: usize, parts: &[Subspace]) -> Result<Subspace> {
        let mut vs = Vec::new();
        for p in parts {
            if p.ctx != ctx {
                return Err(Error::ContextMismatch);
            }
            if p.ambient != ambient {
                return Err(Error::AmbientMismatch);
            }
            vs.extend(p.basis.iter().cloned());
        }
        Ok(Self::span_unchecked(ctx, ambient, &vs))
    }

    /// Intersection via the left kernel of the stacked bases.
    pub fn intersect(&self, o: &Subspace) -> Result<Subspace> {
        self.check(o)?;
        if self.is_zero() || o.is_zero() {
            return Ok(Self::zero(self.ctx, self.ambient));
        }
        if self.dim() == self.ambient {
            return Ok(o.clone());
        }
        if o.dim() == o.ambient {
            return Ok(self.clone());
        }
        let k = self.dim();
        let mut rows = self.basis.clone();
        rows.extend(o.basis.iter().cloned());
        let stacked = Matrix::from_row_vectors(self.ctx, self.ambient, &rows)?;
        let kernel = stacked.transpose().kernel();
        let vs: Vec<Vector> = kernel
            .iter()
            .map(|c| {
                let terms: Vec<(Scalar, &Vector)> =
                    (0..k).map(|i| (c.entries[i].clone(), &self.basis[i])).collect();
                Vector::combination(self.ctx, self.ambient, &terms)
            })
            .collect();
        Ok(Self::span_unchecked(self.ctx, self.ambient, &vs))
    }

    pub fn contains(&self, v: &Vector) -> Result<bool> {
        if v.ctx != self.ctx {
            return Err(Error::ContextMismatch);
        }
        if v.dim() != self.ambient {
            return Err(Error::AmbientMismatch);
        }
        if v.is_zero() {
            return Ok(true);
        }
        // Reduce against the echelon basis using its pivots.
        let mut r = v.clone();
        for b in &self.basis {
            let p = b.entries.iter().position(|e| !e.is_zero()).unwrap();
            let c = r.entries[p].clone();
            if !c.is_zero() {
                r = r.sub(&b.scale(&c))?;
            }
        }
        Ok(r.is_zero())
    }

    pub fn is_subspace_of(&self, o: &Subspace) -> Result<bool> {
        self.check(o)?;
        for b in &self.basis {
            if !o.contains(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Coordinates of `v` in the stored basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &Vector) -> Result<Option<Vec<Scalar>>> {
        if !self.contains(v)? {
            return Ok(None);
        }
        Ok(Some(
            self.basis
                .iter()
                .map(|b| v.entries[b.entries.iter().position(|e| !e.is_zero()).unwrap()].clone())
                .collect(),
        ))
    }

    /// The image of the subspace under `m`.
    pub fn map(&self, m: &Matrix) -> Result<Subspace> {
        let vs = self.basis.iter().map(|b| m.apply(b)).collect::<Result<Vec<_>>>()?;
        Ok(Self::span_unchecked(self.ctx, m.rows(), &vs))
    }
}

/// True when the sum of the parts has dimension equal to the sum of their dimensions.
pub fn is_direct_sum(parts: &[Subspace]) -> Result<bool> {
    let Some(first) = parts.first() else {
        return Ok(true);
    };
    let total = Subspace::sum_all(first.ctx, first.ambient, parts)?;
    Ok(total.dim() == parts.iter().map(Subspace::dim).sum::<usize>())
}

/// Rank of a list of vectors of common dimension.
pub fn rank_of(ctx: FieldContext, dim: usize, vs: &[Vector]) -> usize {
    Subspace::span_unchecked(ctx, dim, vs).dim()
}
