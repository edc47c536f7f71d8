//! Flags, opposite and totally opposite flags, and the passage from a
//! totally opposite triple back to a Billiard Array.

use std::collections::BTreeMap;

use crate::billiard::BilliardArray;
use crate::error::{Error, Result};
use crate::field::FieldContext;
use crate::grid::{DeltaGrid, Location};
use crate::linalg::{is_direct_sum, Subspace};

/// `U_0 ⊂ U_1 ⊂ … ⊂ U_N` with `dim U_i = i + 1` and `U_N` the whole space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Flag {
    comps: Vec<Subspace>,
}

impl Flag {
    pub fn new(comps: Vec<Subspace>) -> Result<Self> {
        check_chain(&comps)?;
        let last = comps.last().unwrap();
        if last.dim() != last.ambient_dim() {
            return Err(Error::NotAFlag("last component is not the whole space".into()));
        }
        Ok(Flag { comps })
    }

    /// The flag induced by a decomposition: `U_i = V_0 + … + V_i`.
    pub fn from_decomposition(parts: &[Subspace]) -> Result<Self> {
        let Some(first) = parts.first() else {
            return Err(Error::NotADecomposition);
        };
        let (ctx, n) = (first.ctx(), first.ambient_dim());
        if parts.len() != n || parts.iter().any(|p| p.dim() != 1 || p.ambient_dim() != n || p.ctx() != ctx) {
            return Err(Error::NotADecomposition);
        }
        if !is_direct_sum(parts)? {
            return Err(Error::NotADecomposition);
        }
        let mut comps = Vec::with_capacity(n);
        let mut acc = Subspace::zero(ctx, n);
        for p in parts {
            acc = acc.sum(p)?;
            comps.push(acc.clone());
        }
        Flag::new(comps)
    }

    /// Number of proper steps, so the flag lives in dimension `N + 1`.
    pub fn diameter(&self) -> usize {
        self.comps.len() - 1
    }

    pub fn ctx(&self) -> FieldContext {
        self.comps[0].ctx()
    }

    pub fn ambient_dim(&self) -> usize {
        self.comps[0].ambient_dim()
    }

    pub fn components(&self) -> &[Subspace] {
        &self.comps
    }

    pub fn get(&self, i: usize) -> &Subspace {
        &self.comps[i]
    }
}

/// Nested subspaces of dimensions 1, 2, … inside one ambient space.
fn check_chain(comps: &[Subspace]) -> Result<()> {
    let Some(first) = comps.first() else {
        return Err(Error::NotAFlag("no components".into()));
    };
    for (i, c) in comps.iter().enumerate() {
        if c.ambient_dim() != first.ambient_dim() || c.ctx() != first.ctx() {
            return Err(Error::AmbientMismatch);
        }
        if c.dim() != i + 1 {
            return Err(Error::NotAFlag(format!("component {} has dimension {}", i, c.dim())));
        }
        if i > 0 && !comps[i - 1].is_subspace_of(c)? {
            return Err(Error::NotAFlag(format!("component {} does not contain component {}", i, i - 1)));
        }
    }
    Ok(())
}

/// Opposition of two chains of common length `M + 1` inside a common space:
/// `a_i ∩ b_j = 0` whenever `i + j < M`. By nesting only `i + j = M − 1` matters.
fn chains_opposite(a: &[Subspace], b: &[Subspace]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::AmbientMismatch);
    }
    let m = a.len() - 1;
    for i in 0..m {
        if !a[i].intersect(&b[m - 1 - i])?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn are_opposite(f: &Flag, g: &Flag) -> Result<bool> {
    if f.ambient_dim() != g.ambient_dim() {
        return Err(Error::AmbientMismatch);
    }
    chains_opposite(&f.comps, &g.comps)
}

/// `V_i = U_i ∩ U'_{N−i}` for opposite flags.
pub fn opposite_decomposition(f: &Flag, g: &Flag) -> Result<Vec<Subspace>> {
    if !are_opposite(f, g)? {
        return Err(Error::NotADecomposition);
    }
    let n = f.diameter();
    (0..=n).map(|i| f.get(i).intersect(g.get(n - i))).collect()
}

/// Three flags on a common space, keyed `f1`, `f2`, `f3`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FlagTriple {
    pub f1: Flag,
    pub f2: Flag,
    pub f3: Flag,
}

impl FlagTriple {
    pub fn new(f1: Flag, f2: Flag, f3: Flag) -> Result<Self> {
        let d = f1.ambient_dim();
        if f2.ambient_dim() != d || f3.ambient_dim() != d {
            return Err(Error::AmbientMismatch);
        }
        if f2.ctx() != f1.ctx() || f3.ctx() != f1.ctx() {
            return Err(Error::ContextMismatch);
        }
        Ok(FlagTriple { f1, f2, f3 })
    }

    pub fn diameter(&self) -> usize {
        self.f1.diameter()
    }

    pub fn flag(&self, eta: usize) -> &Flag {
        match eta {
            1 => &self.f1,
            2 => &self.f2,
            _ => &self.f3,
        }
    }

    /// `U_{N−r} ∩ U'_{N−s} ∩ U''_{N−t}` for `0 ≤ r, s, t ≤ N`.
    pub fn triple_intersection(&self, r: usize, s: usize, t: usize) -> Result<Subspace> {
        let n = self.diameter();
        if r > n || s > n || t > n {
            return Err(Error::OutOfRange(Location { r, s, t }));
        }
        self.f1.get(n - r).intersect(self.f2.get(n - s))?.intersect(self.f3.get(n - t))
    }

    pub fn mutually_opposite(&self) -> Result<bool> {
        Ok(are_opposite(&self.f1, &self.f2)? && are_opposite(&self.f2, &self.f3)? && are_opposite(&self.f3, &self.f1)?)
    }

    /// Zero triple intersection whenever `r + s + t > N`; by nesting it is enough
    /// to test `r + s + t = N + 1`.
    pub fn are_totally_opposite(&self) -> Result<bool> {
        let n = self.diameter();
        for r in 0..=n {
            for s in 0..=n {
                let Some(t) = (n + 1).checked_sub(r + s) else { continue };
                if t > n {
                    continue;
                }
                if !self.triple_intersection(r, s, t)?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// For each `n`, the three chains on `U_{N−n}` obtained by cutting with the other flags.
    pub fn restricted_chains(&self, n: usize) -> Result<[Vec<Subspace>; 3]> {
        let big = self.diameter();
        let top = self.f1.get(big - n);
        let a: Vec<Subspace> = (0..=big - n).map(|i| self.f1.get(i).clone()).collect();
        let b = (0..=big - n).map(|i| top.intersect(self.f2.get(n + i))).collect::<Result<Vec<_>>>()?;
        let c = (0..=big - n).map(|i| top.intersect(self.f3.get(n + i))).collect::<Result<Vec<_>>>()?;
        Ok([a, b, c])
    }

    /// The restricted chains are mutually opposite flags on `U_{N−n}` for every `n`.
    pub fn restricted_chains_opposite(&self) -> Result<bool> {
        for n in 0..=self.diameter() {
            let [a, b, c] = self.restricted_chains(n)?;
            for ch in [&a, &b, &c] {
                if check_chain(ch).is_err() || !ch.last().unwrap().is_subspace_of(&a[a.len() - 1])? {
                    return Ok(false);
                }
            }
            if !(chains_opposite(&a, &b)? && chains_opposite(&b, &c)? && chains_opposite(&c, &a)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `B_λ = U_{N−r} ∩ U'_{N−s} ∩ U''_{N−t}`.
    pub fn to_billiard(&self) -> Result<BilliardArray> {
        if !self.are_totally_opposite()? {
            return Err(Error::NotTotallyOpposite);
        }
        let n = self.diameter();
        let mut gens = BTreeMap::new();
        for l in DeltaGrid::enumerate(n) {
            let b = self.triple_intersection(l.r, l.s, l.t)?;
            if b.dim() != 1 {
                return Err(Error::NotTotallyOpposite);
            }
            gens.insert(l, b.basis()[0].clone());
        }
        BilliardArray::new(n, self.f1.ctx(), gens)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Vector;

    fn coordinate_flag(ctx: FieldContext, n: usize, reversed: bool) -> Flag {
        let parts: Vec<Subspace> = (0..n)
            .map(|i| Subspace::line(&Vector::unit(ctx, n, if reversed { n - 1 - i } else { i })))
            .collect();
        Flag::from_decomposition(&parts).unwrap()
    }

    #[test]
    fn coordinate_flags() {
        let q = FieldContext::Rationals;
        let f = coordinate_flag(q, 3, false);
        let g = coordinate_flag(q, 3, true);
        assert!(are_opposite(&f, &g).unwrap());
        assert!(!are_opposite(&f, &f).unwrap());
        let dec = opposite_decomposition(&f, &g).unwrap();
        for (i, d) in dec.iter().enumerate() {
            assert_eq!(d, &Subspace::line(&Vector::unit(q, 3, i)));
        }
        let single = coordinate_flag(q, 1, false);
        assert_eq!(single.components().len(), 1);
    }

    #[test]
    fn equal_flags_not_totally_opposite() {
        let q = FieldContext::Rationals;
        let f = coordinate_flag(q, 3, false);
        let g = coordinate_flag(q, 3, true);
        let t = FlagTriple::new(f.clone(), f, g).unwrap();
        assert!(!t.are_totally_opposite().unwrap());
        assert_eq!(t.to_billiard(), Err(Error::NotTotallyOpposite));
    }

    #[test]
    fn rejects_non_flags() {
        let q = FieldContext::Rationals;
        let e0 = Subspace::line(&Vector::unit(q, 2, 0));
        assert!(Flag::new(vec![e0.clone(), e0.clone()]).is_err());
        assert!(Flag::from_decomposition(&[e0.clone(), e0]).is_err());
    }

    #[test]
    fn diameter_zero() {
        let q = FieldContext::Rationals;
        let f = Flag::new(vec![Subspace::full(q, 1)]).unwrap();
        let t = FlagTriple::new(f.clone(), f.clone(), f).unwrap();
        let ba = t.to_billiard().unwrap();
        assert_eq!(ba.extend(&Location { r: 0, s: 0, t: 0 }).unwrap(), Subspace::full(q, 1));
    }
}
