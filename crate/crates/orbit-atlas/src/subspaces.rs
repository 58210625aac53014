//! Canonical representation, enumeration, and group action for subspaces and
//! flags of F_p^n, plus brute-force fixed-point sets.
//!
//! Subspaces are row spaces; a matrix g acts on a row vector v as v g^T
//! (equivalently, as the usual left action on column vectors). The canonical
//! representative of a subspace is the reduced row echelon form of any basis,
//! with zero rows trimmed, so equality is entry-wise equality of bases.
//! Enumerations are returned in lexicographic order of the flattened RREF
//! entries and refuse instances beyond [`ENUMERATION_CAP`] points.

use crate::error::{Error, Result};
use crate::field::{FpMatrix, PrimeField};
use crate::partitions::{q_binomial, q_multinomial, Composition};
use num::bigint::BigUint;
use std::collections::HashMap;
use std::fmt;

/// Desk-scale guardrail on enumeration sizes.
pub const ENUMERATION_CAP: u64 = 10_000_000;

fn check_cap(size: &BigUint) -> Result<()> {
    if *size > BigUint::from(ENUMERATION_CAP) {
        return Err(Error::TooLarge {
            size: size.to_string(),
            cap: ENUMERATION_CAP,
        });
    }
    Ok(())
}

/// A k-dimensional subspace of F_p^n, held as its RREF basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    basis: FpMatrix,
}

impl Subspace {
    /// Canonicalize an arbitrary spanning matrix (rows span the subspace).
    pub fn from_matrix(m: &FpMatrix) -> Subspace {
        Subspace {
            basis: m.rref().matrix,
        }
    }

    /// The canonical subspace spanned by the given row vectors of F_p^n.
    /// An empty list yields the zero subspace.
    pub fn from_spanning_set(field: &PrimeField, n: usize, vectors: &[Vec<u64>]) -> Subspace {
        let mut entries = Vec::with_capacity(vectors.len() * n);
        for v in vectors {
            assert_eq!(v.len(), n, "vector length must equal the ambient dimension");
            entries.extend(v.iter().map(|&e| e % field.modulus()));
        }
        Subspace::from_matrix(&field.matrix(vectors.len(), n, &entries))
    }

    pub fn zero(field: &PrimeField, n: usize) -> Subspace {
        Subspace {
            basis: field.zero_matrix(0, n),
        }
    }

    pub fn full(field: &PrimeField, n: usize) -> Subspace {
        Subspace {
            basis: field.identity(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn modulus(&self) -> u64 {
        self.basis.modulus()
    }

    pub fn basis(&self) -> &FpMatrix {
        &self.basis
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.modulus() != other.modulus() {
            return Err(Error::ModulusMismatch {
                left: self.modulus(),
                right: other.modulus(),
            });
        }
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::AmbientMismatch {
                left: self.ambient_dim(),
                right: other.ambient_dim(),
            });
        }
        Ok(())
    }

    /// dim(self ∩ other) = dim self + dim other - rank of the stacked bases.
    pub fn intersect_dim(&self, other: &Subspace) -> Result<usize> {
        self.check_ambient(other)?;
        let stacked = self.basis.vstack(&other.basis)?;
        Ok(self.dim() + other.dim() - stacked.rank())
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        if self.modulus() != other.modulus() || self.ambient_dim() != other.ambient_dim() {
            return false;
        }
        if other.dim() > self.dim() {
            return false;
        }
        self.basis
            .vstack(&other.basis)
            .map(|s| s.rank() == self.dim())
            .unwrap_or(false)
    }

    /// The image g . self, canonicalized. Checks the full action contract.
    pub fn apply(&self, g: &FpMatrix) -> Result<Subspace> {
        check_group_element(g, self.ambient_dim(), self.modulus())?;
        Ok(self.apply_unchecked(g))
    }

    /// Action fast path: `g` is assumed square, matching and invertible.
    pub(crate) fn apply_unchecked(&self, g: &FpMatrix) -> Subspace {
        let image = self
            .basis
            .mul(&g.transpose())
            .expect("shape checked by caller");
        let s = Subspace::from_matrix(&image);
        debug_assert_eq!(s.dim(), self.dim(), "action must preserve dimension");
        s
    }

    /// Pivot columns, read off the leading entries of the canonical basis.
    fn pivot_columns(&self) -> Vec<usize> {
        (0..self.dim())
            .map(|i| {
                self.basis
                    .row(i)
                    .iter()
                    .position(|&e| e != 0)
                    .expect("a trimmed RREF basis has no zero rows")
            })
            .collect()
    }

    /// Indices of the non-pivot columns: coordinates of a complement of self.
    fn complement_columns(&self) -> Vec<usize> {
        let pivots = self.pivot_columns();
        (0..self.ambient_dim())
            .filter(|c| !pivots.contains(c))
            .collect()
    }

    /// Reduce a row vector modulo this subspace (zero out its pivot columns).
    fn reduce_vector(&self, v: &mut [u64]) {
        let field = self.basis.field();
        for (r, pc) in self.pivot_columns().into_iter().enumerate() {
            if v[pc] != 0 {
                let factor = v[pc];
                for j in 0..v.len() {
                    let sub = field.mul(factor, self.basis.get(r, j));
                    v[j] = field.sub(v[j], sub);
                }
            }
        }
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dim() == 0 {
            return write!(f, "<0>");
        }
        let rows: Vec<String> = (0..self.dim())
            .map(|i| {
                let row: Vec<String> =
                    self.basis.row(i).iter().map(|e| e.to_string()).collect();
                format!("({})", row.join(","))
            })
            .collect();
        write!(f, "<{}>", rows.join(", "))
    }
}

fn check_group_element(g: &FpMatrix, n: usize, p: u64) -> Result<()> {
    if g.modulus() != p {
        return Err(Error::ModulusMismatch {
            left: g.modulus(),
            right: p,
        });
    }
    if g.rows() != n || g.cols() != n {
        return Err(Error::ShapeMismatch {
            left: (g.rows(), g.cols()),
            right: (n, n),
        });
    }
    if !g.is_invertible() {
        return Err(Error::Singular);
    }
    Ok(())
}

/// All k-dimensional subspaces of F_p^n, each exactly once, sorted
/// lexicographically by their flattened RREF entries.
pub fn enumerate_subspaces(n: usize, k: usize, p: u64) -> Result<Vec<Subspace>> {
    let field = PrimeField::new(p)?;
    if k > n {
        return Ok(Vec::new());
    }
    let count = q_binomial(n as u64, k as u64, p);
    check_cap(&count)?;
    let mut out = Vec::new();
    let mut pivots = Vec::with_capacity(k);
    enumerate_for_pivots(&field, n, k, 0, &mut pivots, &mut out);
    out.sort_unstable();
    debug_assert_eq!(BigUint::from(out.len()), count);
    Ok(out)
}

fn enumerate_for_pivots(
    field: &PrimeField,
    n: usize,
    k: usize,
    start: usize,
    pivots: &mut Vec<usize>,
    out: &mut Vec<Subspace>,
) {
    if pivots.len() == k {
        fill_free_entries(field, n, pivots, out);
        return;
    }
    // need k - pivots.len() more pivot columns from start..n
    for c in start..=n - (k - pivots.len()) {
        pivots.push(c);
        enumerate_for_pivots(field, n, k, c + 1, pivots, out);
        pivots.pop();
    }
}

fn fill_free_entries(field: &PrimeField, n: usize, pivots: &[usize], out: &mut Vec<Subspace>) {
    let k = pivots.len();
    let p = field.modulus();
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; n];
        for &c in pivots {
            v[c] = true;
        }
        v
    };
    // free positions: in row i, any non-pivot column right of pivots[i]
    let free: Vec<(usize, usize)> = (0..k)
        .flat_map(|i| {
            let row_start = pivots[i] + 1;
            (row_start..n)
                .filter(|&j| !is_pivot[j])
                .map(move |j| (i, j))
        })
        .collect();
    let mut values = vec![0u64; free.len()];
    loop {
        let mut entries = vec![0u64; k * n];
        for (i, &c) in pivots.iter().enumerate() {
            entries[i * n + c] = 1 % p;
        }
        for (slot, &(i, j)) in free.iter().enumerate() {
            entries[i * n + j] = values[slot];
        }
        out.push(Subspace {
            basis: field.matrix(k, n, &entries),
        });
        // odometer over free values
        let mut carry = 0usize;
        while carry < values.len() {
            values[carry] += 1;
            if values[carry] < p {
                break;
            }
            values[carry] = 0;
            carry += 1;
        }
        if carry == values.len() {
            break;
        }
    }
}

/// The r-dimensional subspaces contained in `h`, canonicalized in the ambient
/// space. There are exactly [dim h, r]_p of them.
pub fn subspaces_within(h: &Subspace, r: usize) -> Result<Vec<Subspace>> {
    let inner = enumerate_subspaces(h.dim(), r, h.modulus())?;
    Ok(inner
        .into_iter()
        .map(|c| Subspace::from_matrix(&c.basis().mul(h.basis()).expect("shapes agree")))
        .collect())
}

/// The k-dimensional subspaces of the ambient space containing `w`.
pub fn superspaces_over(w: &Subspace, k: usize) -> Result<Vec<Subspace>> {
    assert!(k >= w.dim(), "target dimension below dim w");
    let quot = enumerate_subspaces(w.ambient_dim() - w.dim(), k - w.dim(), w.modulus())?;
    Ok(quot.iter().map(|u| lift_through(w, u)).collect())
}

/// Lift a subspace of the quotient by `w` (coordinates on the non-pivot
/// columns of `w`) to its preimage in the ambient space.
pub fn lift_through(w: &Subspace, u_quotient: &Subspace) -> Subspace {
    let n = w.ambient_dim();
    let field = w.basis().field();
    let comp = w.complement_columns();
    assert_eq!(u_quotient.ambient_dim(), comp.len());
    let q = u_quotient.dim();
    let mut entries = Vec::with_capacity((w.dim() + q) * n);
    entries.extend_from_slice(w.basis().entries());
    for i in 0..q {
        let mut row = vec![0u64; n];
        for (m, &col) in comp.iter().enumerate() {
            row[col] = u_quotient.basis().get(i, m);
        }
        entries.extend_from_slice(&row);
    }
    Subspace::from_matrix(&field.matrix(w.dim() + q, n, &entries))
}

/// The matrix of the action induced by `g` on the quotient by the g-invariant
/// subspace `w`, in the complement coordinates used by [`lift_through`].
pub fn quotient_matrix(g: &FpMatrix, w: &Subspace) -> FpMatrix {
    let field = g.field();
    let comp = w.complement_columns();
    let m = comp.len();
    let t = g.transpose();
    // row per complement coordinate: image of e_j under v -> v g^T, reduced mod w
    let mut rows = Vec::with_capacity(m * m);
    for &j in &comp {
        let mut v: Vec<u64> = t.row(j).to_vec();
        w.reduce_vector(&mut v);
        for &col in &comp {
            rows.push(v[col]);
        }
    }
    // rows hold images of basis vectors; transpose back into action convention
    field.matrix(m, m, &rows).transpose()
}

/// A chain of nested subspaces V_1 ⊆ ... ⊆ V_r = V whose successive
/// dimension jumps match the composition.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flag {
    composition: Composition,
    chain: Vec<Subspace>,
}

impl Flag {
    /// Validates step dimensions and containments.
    pub fn new(composition: Composition, chain: Vec<Subspace>) -> Result<Flag> {
        if chain.len() != composition.len() {
            return Err(Error::Invalid(format!(
                "chain has {} subspaces but the composition has {} terms",
                chain.len(),
                composition.len()
            )));
        }
        let n = composition.weight() as usize;
        let mut expected = 0usize;
        for (i, s) in chain.iter().enumerate() {
            expected += composition.terms()[i] as usize;
            if s.dim() != expected || s.ambient_dim() != n {
                return Err(Error::Invalid(format!(
                    "chain entry {i} has dim {} (ambient {}), expected dim {expected} in F^{n}",
                    s.dim(),
                    s.ambient_dim()
                )));
            }
            if i > 0 && !s.contains(&chain[i - 1]) {
                return Err(Error::Invalid(format!(
                    "chain entry {i} does not contain its predecessor"
                )));
            }
        }
        Ok(Flag { composition, chain })
    }

    pub fn composition(&self) -> &Composition {
        &self.composition
    }

    pub fn chain(&self) -> &[Subspace] {
        &self.chain
    }

    pub fn ambient_dim(&self) -> usize {
        self.composition.weight() as usize
    }

    pub fn modulus(&self) -> u64 {
        self.chain
            .last()
            .map(|s| s.modulus())
            .expect("flags have at least one chain entry")
    }

    /// Chain-wise action of g.
    pub fn apply(&self, g: &FpMatrix) -> Result<Flag> {
        check_group_element(g, self.ambient_dim(), self.modulus())?;
        Ok(self.apply_unchecked(g))
    }

    pub(crate) fn apply_unchecked(&self, g: &FpMatrix) -> Flag {
        Flag {
            composition: self.composition.clone(),
            chain: self.chain.iter().map(|s| s.apply_unchecked(g)).collect(),
        }
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let links: Vec<String> = self.chain.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", links.join(" ⊂ "))
    }
}

/// All flags of shape `a` in F_p^n (n the weight of `a`), each exactly once,
/// sorted by their chains. The count equals the Gaussian multinomial.
pub fn enumerate_flags(a: &Composition, p: u64) -> Result<Vec<Flag>> {
    let field = PrimeField::new(p)?;
    let count = q_multinomial(a, p);
    check_cap(&count)?;
    let n = a.weight() as usize;
    // per level, the quotient-side enumeration is the same for every branch
    let mut level_enums: Vec<Vec<Subspace>> = Vec::with_capacity(a.len());
    let mut used = 0usize;
    for &t in a.terms() {
        level_enums.push(enumerate_subspaces(n - used, t as usize, p)?);
        used += t as usize;
    }
    let mut out = Vec::new();
    let mut chain: Vec<Subspace> = Vec::with_capacity(a.len());
    fn rec(
        a: &Composition,
        level_enums: &[Vec<Subspace>],
        level: usize,
        prev: &Subspace,
        chain: &mut Vec<Subspace>,
        out: &mut Vec<Flag>,
    ) {
        if level == level_enums.len() {
            out.push(Flag {
                composition: a.clone(),
                chain: chain.clone(),
            });
            return;
        }
        for u in &level_enums[level] {
            let next = lift_through(prev, u);
            chain.push(next.clone());
            rec(a, level_enums, level + 1, &next, chain, out);
            chain.pop();
        }
    }
    rec(
        a,
        &level_enums,
        0,
        &Subspace::zero(&field, n),
        &mut chain,
        &mut out,
    );
    out.sort_unstable();
    debug_assert_eq!(BigUint::from(out.len()), count);
    Ok(out)
}

/// |Fl_a(F_p^n)| by walking the enumeration tree without materializing it.
pub fn count_flags(a: &Composition, p: u64) -> Result<BigUint> {
    let field = PrimeField::new(p)?;
    let expected = q_multinomial(a, p);
    check_cap(&expected)?;
    let n = a.weight() as usize;
    let mut level_enums: Vec<Vec<Subspace>> = Vec::with_capacity(a.len());
    let mut used = 0usize;
    for &t in a.terms() {
        level_enums.push(enumerate_subspaces(n - used, t as usize, p)?);
        used += t as usize;
    }
    fn rec(level_enums: &[Vec<Subspace>], level: usize, prev: &Subspace) -> u64 {
        if level == level_enums.len() {
            return 1;
        }
        level_enums[level]
            .iter()
            .map(|u| rec(level_enums, level + 1, &lift_through(prev, u)))
            .sum()
    }
    let total = rec(&level_enums, 0, &Subspace::zero(&field, n));
    Ok(BigUint::from(total))
}

/// The sublist of G(k, F_p^n) fixed by g, in enumeration order.
pub fn fixed_subspaces(g: &FpMatrix, k: usize) -> Result<Vec<Subspace>> {
    let n = g.rows();
    check_group_element(g, n, g.modulus())?;
    Ok(enumerate_subspaces(n, k, g.modulus())?
        .into_iter()
        .filter(|s| s.apply_unchecked(g) == *s)
        .collect())
}

/// The sublist of Fl_a(F_p^n) fixed by g, in enumeration order.
pub fn fixed_flags(g: &FpMatrix, a: &Composition) -> Result<Vec<Flag>> {
    let n = g.rows();
    check_group_element(g, n, g.modulus())?;
    Ok(enumerate_flags(a, g.modulus())?
        .into_iter()
        .filter(|f| f.apply_unchecked(g) == *f)
        .collect())
}

/// An enumerated Grassmannian with O(1) membership lookup.
#[derive(Debug, Clone)]
pub struct SubspaceTable {
    spaces: Vec<Subspace>,
    index: HashMap<Subspace, u32>,
}

impl SubspaceTable {
    pub fn new(n: usize, k: usize, p: u64) -> Result<SubspaceTable> {
        let spaces = enumerate_subspaces(n, k, p)?;
        let index = spaces
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i as u32))
            .collect();
        Ok(SubspaceTable { spaces, index })
    }

    pub fn len(&self) -> usize {
        self.spaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spaces.is_empty()
    }

    pub fn spaces(&self) -> &[Subspace] {
        &self.spaces
    }

    pub fn get(&self, i: usize) -> &Subspace {
        &self.spaces[i]
    }

    pub fn index_of(&self, s: &Subspace) -> Option<u32> {
        self.index.get(s).copied()
    }

    /// The permutation of indices induced by an (already validated) g.
    pub fn permutation(&self, g: &FpMatrix) -> Vec<u32> {
        self.spaces
            .iter()
            .map(|s| {
                self.index_of(&s.apply_unchecked(g))
                    .expect("action permutes the enumeration")
            })
            .collect()
    }
}
