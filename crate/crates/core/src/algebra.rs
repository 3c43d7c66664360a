//! Sparse exact-integer chains and cochains.
//!
//! A [`Chain`] and a [`Cochain`] share one representation: a sorted map from
//! cells to nonzero `i64` coefficients together with the common cell
//! dimension. Every arithmetic step is checked; overflow surfaces as
//! [`Error::Overflow`] instead of wrapping.

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;

use crate::complex::CubeFace;
use crate::error::{Error, Result};

/// An oriented cell with a boundary operator.
pub trait Cell: Clone + Ord + fmt::Debug {
    fn dim(&self) -> usize;

    /// Boundary as `(face, incidence)` pairs. Empty for 0-cells.
    fn boundary(&self) -> Vec<(Self, i64)>;
}

/// A finite complex of cells of one kind.
pub trait CellComplex {
    type Cell: Cell;

    fn contains(&self, cell: &Self::Cell) -> bool;

    /// All cells of dimension `dim`, in canonical order.
    fn cells(&self, dim: usize) -> Vec<Self::Cell>;

    /// Every `(dim + 1)`-cell `tau` of the complex having `cell` in its
    /// boundary, paired with the incidence number `[d tau : cell]`.
    fn cofaces_with_incidence(&self, cell: &Self::Cell) -> Vec<(Self::Cell, i64)>;
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct ChainKind;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct CochainKind;

/// Finitely supported integer combination of cells of a single dimension.
#[derive(PartialEq, Eq, Hash)]
pub struct Linear<C, K> {
    dim: usize,
    terms: BTreeMap<C, i64>,
    kind: PhantomData<K>,
}

pub type Chain<C> = Linear<C, ChainKind>;
pub type Cochain<C> = Linear<C, CochainKind>;

pub(crate) fn checked_add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow)
}

pub(crate) fn checked_mul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

/// `(-1)^i` as an integer.
pub fn parity_sign(i: usize) -> i64 {
    if i.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

impl<C: Cell, K> Linear<C, K> {
    pub fn zero(dim: usize) -> Self {
        Linear {
            dim,
            terms: BTreeMap::new(),
            kind: PhantomData,
        }
    }

    /// Builds a combination from `(cell, coeff)` pairs, summing repeats.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (C, i64)>,
    {
        let mut out = Self::zero(dim);
        for (cell, coeff) in terms {
            out.add_term(cell, coeff)?;
        }
        Ok(out)
    }

    /// Indicator of a single cell.
    pub fn unit(cell: C) -> Self {
        let mut out = Self::zero(cell.dim());
        out.terms.insert(cell, 1);
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of cells with a nonzero coefficient.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, cell: &C) -> i64 {
        self.terms.get(cell).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&C, i64)> + '_ {
        self.terms.iter().map(|(c, &v)| (c, v))
    }

    pub fn cells(&self) -> impl Iterator<Item = &C> + '_ {
        self.terms.keys()
    }

    pub fn add_term(&mut self, cell: C, coeff: i64) -> Result<()> {
        if cell.dim() != self.dim {
            return Err(Error::Dimension(format!(
                "cell {:?} has dimension {}, expected {}",
                cell,
                cell.dim(),
                self.dim
            )));
        }
        if coeff == 0 {
            return Ok(());
        }
        match self.terms.entry(cell) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = checked_add(*e.get(), coeff)?;
                if v == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
        Ok(())
    }

    /// `self += scale * other`.
    pub fn add_scaled(&mut self, other: &Self, scale: i64) -> Result<()> {
        if other.dim != self.dim && !other.is_zero() {
            return Err(Error::Dimension(format!(
                "cannot add dimension {} to dimension {}",
                other.dim, self.dim
            )));
        }
        for (cell, &v) in &other.terms {
            self.add_term(cell.clone(), checked_mul(v, scale)?)?;
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.add_scaled(other, 1)?;
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.add_scaled(other, -1)?;
        Ok(out)
    }

    pub fn scaled(&self, scale: i64) -> Result<Self> {
        let mut out = Self::zero(self.dim);
        out.add_scaled(self, scale)?;
        Ok(out)
    }

    /// L1 norm: the sum of absolute coefficients.
    ///
    /// Panics if the sum does not fit in a `u64`.
    pub fn norm(&self) -> u64 {
        self.terms
            .values()
            .try_fold(0u64, |acc, v| acc.checked_add(v.unsigned_abs()))
            .expect("L1 norm overflows u64")
    }

    /// Keeps only the cells accepted by `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&C) -> bool) -> Self {
        Linear {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(c, _)| keep(c))
                .map(|(c, &v)| (c.clone(), v))
                .collect(),
            kind: PhantomData,
        }
    }

    /// Keeps exactly the cells lying in `sub`.
    pub fn restrict<X: CellComplex<Cell = C>>(&self, sub: &X) -> Self {
        self.filter(|c| sub.contains(c))
    }

    /// Applies a cell map that preserves dimension, summing collisions.
    pub fn map_cells(&self, mut f: impl FnMut(&C) -> C) -> Result<Self> {
        let mut out = Self::zero(self.dim);
        for (c, &v) in &self.terms {
            out.add_term(f(c), v)?;
        }
        Ok(out)
    }
}

impl<C: Cell> Chain<C> {
    /// The boundary chain. Dimension-0 chains have no boundary.
    pub fn boundary(&self) -> Result<Chain<C>> {
        if self.dim == 0 {
            return Err(Error::Dimension("boundary of a 0-chain".into()));
        }
        let mut out = Chain::zero(self.dim - 1);
        for (cell, &v) in &self.terms {
            for (face, inc) in cell.boundary() {
                out.add_term(face, checked_mul(v, inc)?)?;
            }
        }
        Ok(out)
    }

    /// Sum of all coefficients (pairing with the constant-one cochain).
    pub fn coefficient_sum(&self) -> Result<i64> {
        self.terms.values().try_fold(0i64, |a, &v| checked_add(a, v))
    }
}

impl<C: Cell> Cochain<C> {
    /// Value on a single cell.
    pub fn value(&self, cell: &C) -> i64 {
        self.coeff(cell)
    }

    /// `(f, c)`: the sum of coefficient products over common cells.
    pub fn pair(&self, chain: &Chain<C>) -> Result<i64> {
        pair(self, chain)
    }

    /// `(delta f)(tau) = f(d tau)` on every `(k+1)`-cell of `complex`.
    pub fn coboundary<X: CellComplex<Cell = C>>(&self, complex: &X) -> Result<Cochain<C>> {
        let mut out = Cochain::zero(self.dim + 1);
        for (cell, &v) in &self.terms {
            if !complex.contains(cell) {
                return Err(Error::Membership(format!(
                    "cochain support cell {cell:?} lies outside the region"
                )));
            }
            for (tau, inc) in complex.cofaces_with_incidence(cell) {
                out.add_term(tau, checked_mul(v, inc)?)?;
            }
        }
        Ok(out)
    }
}

/// Bilinear pairing of a cochain with a chain of the same dimension.
pub fn pair<C: Cell>(f: &Cochain<C>, c: &Chain<C>) -> Result<i64> {
    if f.dim != c.dim && !(f.is_zero() || c.is_zero()) {
        return Err(Error::Dimension(format!(
            "pairing a {}-cochain with a {}-chain",
            f.dim, c.dim
        )));
    }
    let (small, large) = if f.terms.len() <= c.terms.len() {
        (&f.terms, &c.terms)
    } else {
        (&c.terms, &f.terms)
    };
    let mut acc = 0i64;
    for (cell, &a) in small {
        if let Some(&b) = large.get(cell) {
            acc = checked_add(acc, checked_mul(a, b)?)?;
        }
    }
    Ok(acc)
}

/// Pushforward of a cubical cochain along the projection that collapses
/// `axis` onto the hyperplane `x_axis = level`.
///
/// The value on a face `sigma` of the hyperplane is the sum over the column of
/// faces projecting onto `sigma`, each weighted by `(-1)^p` where `p` is the
/// position of `axis` in that face's free list.
pub fn direct_image(f: &Cochain<CubeFace>, axis: usize, level: u32) -> Result<Cochain<CubeFace>> {
    if f.dim == 0 {
        return Err(Error::Dimension("direct image of a 0-cochain".into()));
    }
    let mut out = Cochain::zero(f.dim - 1);
    for (face, &v) in &f.terms {
        let Some(pos) = face.free().iter().position(|&a| a == axis) else {
            return Err(Error::Dimension(format!(
                "face {face:?} does not have axis {axis} free"
            )));
        };
        let sigma = face.drop_axis(axis, level);
        out.add_term(sigma, checked_mul(parity_sign(pos), v)?)?;
    }
    Ok(out)
}

/// Evaluates `alpha` on the prism swept by `tau` along `axis` from its own
/// level to `level`.
///
/// The prism is the chain of unit extrusions of `tau` between the two levels,
/// each oriented by inserting `axis` into the free list of `tau` (sign
/// `(-1)^position`), with an overall `-` when `level` lies below `tau`.
pub fn prism_eval(alpha: &Cochain<CubeFace>, tau: &CubeFace, axis: usize, level: u32) -> Result<i64> {
    if tau.free().contains(&axis) {
        return Err(Error::Dimension(format!("axis {axis} is free in {tau:?}")));
    }
    if alpha.dim != tau.dim() + 1 && !alpha.is_zero() {
        return Err(Error::Dimension(format!(
            "prism of a {}-face against a {}-cochain",
            tau.dim(),
            alpha.dim
        )));
    }
    let start = tau.anchor()[axis];
    if start == level {
        return Ok(0);
    }
    let (lo, hi, dir) = if level > start {
        (start, level, 1)
    } else {
        (level, start, -1)
    };
    let pos = tau.free().partition_point(|&a| a < axis);
    let sign = dir * parity_sign(pos);
    let mut acc = 0i64;
    for s in lo..hi {
        let cell = tau.extrude(axis, s);
        acc = checked_add(acc, alpha.value(&cell))?;
    }
    checked_mul(acc, sign)
}

impl<C: Clone, K> Clone for Linear<C, K> {
    fn clone(&self) -> Self {
        Linear {
            dim: self.dim,
            terms: self.terms.clone(),
            kind: PhantomData,
        }
    }
}

impl<C: fmt::Debug, K> fmt::Debug for Linear<C, K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Linear")
            .field("dim", &self.dim)
            .field("terms", &self.terms)
            .finish()
    }
}
