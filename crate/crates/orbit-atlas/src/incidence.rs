//! The incidence transform on functions over Grassmannians: the equivariant
//! map f ↦ f̂ summing f over contained subspaces, the intersection-count
//! matrix A, the ε coefficients that solve A·C = (0,…,0,1)ᵀ, and the
//! retraction that composes with the transform to the identity — all over
//! exact rationals. Injectivity of the transform is what bounds orbit counts
//! between Grassmannian levels.

use crate::error::{Error, Result};
use crate::field::{rat_solve_upper_triangular, FpMatrix, PrimeField};
use crate::orbits::{orbit_count, GroupSpec, Space};
use crate::subspaces::{
    enumerate_subspaces, subspaces_within, superspaces_over, Subspace, SubspaceTable,
};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Zero};
use std::collections::BTreeMap;

/// A rational-valued function on G(r, F_p^n), with total domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionOnGrassmannian {
    n: usize,
    p: u64,
    level: usize,
    values: BTreeMap<Subspace, BigRational>,
}

impl FunctionOnGrassmannian {
    /// A function from explicit values; the domain must be all of G(level).
    pub fn from_values(
        n: usize,
        p: u64,
        level: usize,
        values: BTreeMap<Subspace, BigRational>,
    ) -> Result<Self> {
        let domain = enumerate_subspaces(n, level, p)?;
        if domain.len() != values.len() || domain.iter().any(|s| !values.contains_key(s)) {
            return Err(Error::Invalid(format!(
                "domain must be exactly G({level}, F_{p}^{n})"
            )));
        }
        Ok(FunctionOnGrassmannian {
            n,
            p,
            level,
            values,
        })
    }

    pub fn constant(n: usize, p: u64, level: usize, value: BigRational) -> Result<Self> {
        let values = enumerate_subspaces(n, level, p)?
            .into_iter()
            .map(|s| (s, value.clone()))
            .collect();
        Ok(FunctionOnGrassmannian {
            n,
            p,
            level,
            values,
        })
    }

    /// The indicator of a single point.
    pub fn delta(point: &Subspace) -> Result<Self> {
        let (n, p, level) = (point.ambient_dim(), point.modulus(), point.dim());
        let values = enumerate_subspaces(n, level, p)?
            .into_iter()
            .map(|s| {
                let v = if s == *point {
                    BigRational::one()
                } else {
                    BigRational::zero()
                };
                (s, v)
            })
            .collect();
        Ok(FunctionOnGrassmannian {
            n,
            p,
            level,
            values,
        })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn ambient(&self) -> (usize, u64) {
        (self.n, self.p)
    }

    pub fn get(&self, s: &Subspace) -> Option<&BigRational> {
        self.values.get(s)
    }

    pub fn values(&self) -> &BTreeMap<Subspace, BigRational> {
        &self.values
    }

    /// The translated function g·f : P ↦ f(g⁻¹·P).
    pub fn act(&self, g: &FpMatrix) -> Result<Self> {
        let ginv = g.inverse()?;
        let mut values = BTreeMap::new();
        for s in self.values.keys() {
            let preimage = s.apply(&ginv)?;
            values.insert(s.clone(), self.values[&preimage].clone());
        }
        Ok(FunctionOnGrassmannian {
            n: self.n,
            p: self.p,
            level: self.level,
            values,
        })
    }
}

/// The transform f ↦ f̂ with f̂(H) = Σ_{P ⊆ H} f(P), landing at level k.
/// Linear in f and commuting with the group action.
pub fn hat_transform(
    f: &FunctionOnGrassmannian,
    k: usize,
) -> Result<FunctionOnGrassmannian> {
    let (n, p) = (f.n, f.p);
    if f.level > k || k > n {
        return Err(Error::LevelError { r: f.level, k });
    }
    let mut values = BTreeMap::new();
    for h in enumerate_subspaces(n, k, p)? {
        let mut acc = BigRational::zero();
        for inner in subspaces_within(&h, f.level)? {
            acc += &f.values[&inner];
        }
        values.insert(h, acc);
    }
    Ok(FunctionOnGrassmannian {
        n,
        p,
        level: k,
        values,
    })
}

/// The ε coefficients, indexed by intersection dimension 0..=r.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsilonVector {
    coefficients: Vec<BigRational>,
    pub n: usize,
    pub r: usize,
    pub k: usize,
    pub p: u64,
}

impl EpsilonVector {
    pub fn coefficients(&self) -> &[BigRational] {
        &self.coefficients
    }
}

fn check_levels(n: usize, r: usize, k: usize) -> Result<()> {
    if r > k {
        return Err(Error::LevelError { r, k });
    }
    if 2 * k > n {
        return Err(Error::PreconditionViolated(format!(
            "the construction needs k <= n/2, got k = {k}, n = {n}"
        )));
    }
    Ok(())
}

/// A pair (P, P0) of r-subspaces with prescribed intersection dimension,
/// built on the standard basis.
fn standard_pair(field: &PrimeField, n: usize, r: usize, i: usize) -> (Subspace, Subspace) {
    let basis_vec = |j: usize| -> Vec<u64> {
        let mut v = vec![0u64; n];
        v[j] = 1;
        v
    };
    let p0: Vec<Vec<u64>> = (0..r).map(basis_vec).collect();
    let p: Vec<Vec<u64>> = (0..i)
        .map(basis_vec)
        .chain((r..2 * r - i).map(basis_vec))
        .collect();
    (
        Subspace::from_spanning_set(field, n, &p),
        Subspace::from_spanning_set(field, n, &p0),
    )
}

/// One row of intersection counts for a fixed pair: entry j counts the
/// k-subspaces H containing P0 with dim(P ∩ H) = j.
fn count_row(p_sub: &Subspace, p0: &Subspace, k: usize, r: usize) -> Result<Vec<u64>> {
    let mut row = vec![0u64; r + 1];
    for h in superspaces_over(p0, k)? {
        row[p_sub.intersect_dim(&h)?] += 1;
    }
    Ok(row)
}

/// The (r+1)×(r+1) matrix a_{i,j} = #{H ∈ G(k,V) : P0 ⊆ H, dim(P∩H) = j}
/// over any pair with dim(P∩P0) = i. The counts are choice-free; this is
/// asserted at runtime by recounting over an independently found pair.
pub fn build_a(n: usize, r: usize, k: usize, p: u64) -> Result<Vec<Vec<u64>>> {
    check_levels(n, r, k)?;
    let field = PrimeField::new(p)?;
    let table = enumerate_subspaces(n, r, p)?;
    let mut a = Vec::with_capacity(r + 1);
    for i in 0..=r {
        let (p_sub, p0) = standard_pair(&field, n, r, i);
        debug_assert_eq!(p_sub.intersect_dim(&p0)?, i);
        let row = count_row(&p_sub, &p0, k, r)?;
        // recount over the last pair (in reverse enumeration order) with the
        // same intersection dimension
        'outer: for q0 in table.iter().rev() {
            for q in table.iter().rev() {
                if q.intersect_dim(q0)? == i {
                    let other = count_row(q, q0, k, r)?;
                    if other != row {
                        let j = (0..=r).find(|&j| other[j] != row[j]).unwrap_or(0);
                        return Err(Error::ChoiceDependent { i, j });
                    }
                    break 'outer;
                }
            }
        }
        a.push(row);
    }
    for i in 0..=r {
        for j in 0..i {
            debug_assert_eq!(a[i][j], 0, "A must be upper triangular");
        }
        debug_assert_ne!(a[i][i], 0, "A must have a nonzero diagonal");
    }
    Ok(a)
}

/// An adapted k-subspace H with P0 ⊆ H and dim(P ∩ H) = dim(P ∩ P0), built
/// by completing a basis of P ∩ P0 through P0, P, and the ambient space.
pub fn witness_h(p_sub: &Subspace, p0: &Subspace, k: usize) -> Result<Subspace> {
    if p_sub.dim() != p0.dim() {
        return Err(Error::PreconditionViolated(format!(
            "P and P0 must share a dimension, got {} and {}",
            p_sub.dim(),
            p0.dim()
        )));
    }
    let n = p0.ambient_dim();
    let r = p0.dim();
    let field = PrimeField::new(p0.modulus())?;
    let i = p_sub.intersect_dim(p0)?;
    // the completion needs k - r spare directions: k - r <= n - 2r + i,
    // written so the unsigned intermediate cannot dip negative
    if k < r || k + r > n + i {
        return Err(Error::PreconditionViolated(format!(
            "no adapted basis: r = {r}, k = {k}, n = {n}, i = {i}"
        )));
    }

    // greedy basis completion bookkeeping
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(n);
    let mut stacked = field.zero_matrix(0, n);
    let try_add = |rows: &mut Vec<Vec<u64>>, stacked: &mut FpMatrix, v: &[u64]| -> bool {
        let cand = stacked
            .vstack(&field.matrix(1, n, v))
            .expect("widths agree");
        if cand.rank() > stacked.rank() {
            rows.push(v.to_vec());
            *stacked = cand;
            true
        } else {
            false
        }
    };

    // intersection of P and P0 via the left kernel of the stacked bases
    let stacked_bases = p_sub.basis().vstack(p0.basis())?;
    let kernel = stacked_bases.transpose().right_kernel();
    for km in 0..kernel.rows() {
        let coeffs = kernel.row(km);
        let mut v = vec![0u64; n];
        for (m, &c) in coeffs[..p_sub.dim()].iter().enumerate() {
            for j in 0..n {
                v[j] = field.add(v[j], field.mul(c, p_sub.basis().get(m, j)));
            }
        }
        try_add(&mut rows, &mut stacked, &v);
    }
    debug_assert_eq!(rows.len(), i);

    // complete to P0, then through P, then to the ambient space
    for m in 0..p0.dim() {
        try_add(&mut rows, &mut stacked, p0.basis().row(m));
    }
    debug_assert_eq!(rows.len(), r);
    for m in 0..p_sub.dim() {
        try_add(&mut rows, &mut stacked, p_sub.basis().row(m));
    }
    debug_assert_eq!(rows.len(), 2 * r - i);
    for j in 0..n {
        let mut v = vec![0u64; n];
        v[j] = 1;
        try_add(&mut rows, &mut stacked, &v);
    }
    debug_assert_eq!(rows.len(), n);

    // H = <e_1..e_r, e_{2r-i+1}..e_{k+r-i}>
    let mut h_rows: Vec<Vec<u64>> = rows[..r].to_vec();
    h_rows.extend_from_slice(&rows[2 * r - i..k + r - i]);
    let h = Subspace::from_spanning_set(&field, n, &h_rows);
    debug_assert_eq!(h.dim(), k);
    debug_assert!(h.contains(p0));
    debug_assert_eq!(p_sub.intersect_dim(&h)?, i);
    Ok(h)
}

/// Exact solution of A·C = (0,…,0,1)ᵀ: the coefficients ε_j, j = 0..=r.
pub fn solve_epsilon(n: usize, r: usize, k: usize, p: u64) -> Result<EpsilonVector> {
    let a = build_a(n, r, k, p)?;
    let a_rat: Vec<Vec<BigRational>> = a
        .iter()
        .map(|row| {
            row.iter()
                .map(|&e| BigRational::from_integer(BigInt::from(e)))
                .collect()
        })
        .collect();
    let mut m = vec![BigRational::zero(); r + 1];
    m[r] = BigRational::one();
    let coefficients = rat_solve_upper_triangular(&a_rat, &m)?;
    Ok(EpsilonVector {
        coefficients,
        n,
        r,
        k,
        p,
    })
}

/// Verifies π∘φ = Id on F_r exactly: for every pair (Q, P) of r-subspaces,
/// Σ_{H ⊇ P} ε_{dim(Q ∩ H)} equals 1 if Q = P and 0 otherwise. By linearity
/// this is injectivity of the transform.
pub fn check_transform(n: usize, r: usize, k: usize, p: u64) -> Result<bool> {
    check_levels(n, r, k)?;
    let eps = solve_epsilon(n, r, k, p)?;

    // clear denominators: integer arithmetic against D * identity
    let denom_lcm = eps
        .coefficients()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let eps_int: Vec<i128> = eps
        .coefficients()
        .iter()
        .map(|c| {
            let scaled = c * BigRational::from_integer(denom_lcm.clone());
            debug_assert!(scaled.denom().is_one());
            i128::try_from(scaled.numer().clone()).expect("desk-scale coefficients")
        })
        .collect();
    let scale = i128::try_from(denom_lcm).expect("desk-scale denominator");

    let level_r = SubspaceTable::new(n, r, p)?;
    let level_k = enumerate_subspaces(n, k, p)?;
    let nr = level_r.len();

    let mut acc = vec![0i128; nr * nr];
    let mut dims_col = vec![0usize; nr];
    for h in &level_k {
        for (q_idx, q) in level_r.spaces().iter().enumerate() {
            dims_col[q_idx] = q.intersect_dim(h)?;
        }
        let contained: Vec<usize> = subspaces_within(h, r)?
            .iter()
            .map(|s| level_r.index_of(s).expect("subspace is enumerated") as usize)
            .collect();
        for q_idx in 0..nr {
            let e = eps_int[dims_col[q_idx]];
            if e == 0 {
                continue;
            }
            for &p_idx in &contained {
                acc[q_idx * nr + p_idx] += e;
            }
        }
    }

    for q_idx in 0..nr {
        for p_idx in 0..nr {
            let expected = if q_idx == p_idx { scale } else { 0 };
            if acc[q_idx * nr + p_idx] != expected {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// dim F_r^G: the number of orbit-indicator functions, i.e. the orbit count.
pub fn invariant_dim(spec: &GroupSpec, r: usize) -> Result<usize> {
    Ok(orbit_count(spec, &Space::Grassmannian(r))?.orbit_count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat_rank;
    use crate::partitions::q_binomial;
    use crate::orbits::group_closure;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn hat_of_constant_counts_contained_subspaces() {
        let f = FunctionOnGrassmannian::constant(4, 2, 1, BigRational::one()).unwrap();
        let fhat = hat_transform(&f, 2).unwrap();
        let expected = BigRational::from_integer(BigInt::from(3)); // [2 1]_2
        assert!(fhat.values().values().all(|v| *v == expected));
        assert_eq!(
            BigInt::from(q_binomial(2, 1, 2)),
            expected.numer().clone()
        );
    }

    #[test]
    fn hat_of_delta_is_superspace_indicator() {
        let lines = enumerate_subspaces(4, 1, 2).unwrap();
        let p0 = lines[3].clone();
        let f = FunctionOnGrassmannian::delta(&p0).unwrap();
        let fhat = hat_transform(&f, 2).unwrap();
        for (h, v) in fhat.values() {
            let expected = if h.contains(&p0) {
                BigRational::one()
            } else {
                BigRational::zero()
            };
            assert_eq!(*v, expected);
        }
    }

    #[test]
    fn hat_at_equal_levels_is_identity() {
        let lines = enumerate_subspaces(3, 1, 2).unwrap();
        let f = FunctionOnGrassmannian::delta(&lines[0]).unwrap();
        assert_eq!(hat_transform(&f, 1).unwrap(), f);
        assert!(matches!(
            hat_transform(&f, 0),
            Err(Error::LevelError { r: 1, k: 0 })
        ));
    }

    #[test]
    fn hat_is_equivariant() {
        let f2 = PrimeField::new(2).unwrap();
        let g = f2.matrix(4, 4, &[1, 1, 0, 0, 0, 1, 0, 0, 0, 0, 1, 1, 1, 0, 0, 1]);
        assert!(g.is_invertible());
        // a non-symmetric rational function on lines
        let mut values = BTreeMap::new();
        for (i, s) in enumerate_subspaces(4, 1, 2).unwrap().into_iter().enumerate() {
            values.insert(s, rat(i as i64 + 1, 3));
        }
        let f = FunctionOnGrassmannian::from_values(4, 2, 1, values).unwrap();
        let lhs = hat_transform(&f.act(&g).unwrap(), 2).unwrap();
        let rhs = hat_transform(&f, 2).unwrap().act(&g).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn build_a_example() {
        let a = build_a(4, 1, 2, 2).unwrap();
        assert_eq!(a, vec![vec![6, 1], vec![0, 7]]);
    }

    #[test]
    fn build_a_shape_properties() {
        for (n, r, k, p) in [
            (4usize, 1usize, 2usize, 2u64),
            (4, 2, 2, 2),
            (4, 1, 2, 3),
            (5, 1, 2, 2),
            (5, 2, 2, 3),
        ] {
            let a = build_a(n, r, k, p).unwrap();
            for i in 0..=r {
                for j in 0..i {
                    assert_eq!(a[i][j], 0, "A not triangular at ({i},{j})");
                }
                assert_ne!(a[i][i], 0, "zero diagonal at {i}");
            }
        }
    }

    #[test]
    fn build_a_rejects_large_k() {
        assert!(matches!(
            build_a(4, 1, 3, 2),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn witness_examples() {
        let f2 = PrimeField::new(2).unwrap();
        // containment case P = P0
        let p0 = Subspace::from_spanning_set(&f2, 4, &[vec![1, 0, 1, 0]]);
        let h = witness_h(&p0, &p0, 2).unwrap();
        assert_eq!(h.dim(), 2);
        assert!(h.contains(&p0));

        // disjoint lines
        let p = Subspace::from_spanning_set(&f2, 4, &[vec![0, 1, 0, 1]]);
        let h = witness_h(&p, &p0, 2).unwrap();
        assert!(h.contains(&p0));
        assert_eq!(p.intersect_dim(&h).unwrap(), 0);
    }

    #[test]
    fn witness_exhaustive_f2_4() {
        let lines = enumerate_subspaces(4, 1, 2).unwrap();
        for p0 in &lines {
            for p in &lines {
                let i = p.intersect_dim(p0).unwrap();
                let h = witness_h(p, p0, 2).unwrap();
                assert_eq!(h.dim(), 2);
                assert!(h.contains(p0));
                assert_eq!(p.intersect_dim(&h).unwrap(), i);
            }
        }
    }

    #[test]
    fn witness_with_large_levels() {
        // planes in F_2^3: 2r > n, but i >= 2r - n keeps the completion alive
        let planes = enumerate_subspaces(3, 2, 2).unwrap();
        for p0 in &planes {
            for p in &planes {
                let i = p.intersect_dim(p0).unwrap();
                let h = witness_h(p, p0, 2).unwrap();
                assert!(h.contains(p0));
                assert_eq!(p.intersect_dim(&h).unwrap(), i);
            }
        }
        // k too small: no adapted subspace exists
        assert!(matches!(
            witness_h(&planes[0], &planes[1], 1),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn epsilon_example() {
        let eps = solve_epsilon(4, 1, 2, 2).unwrap();
        assert_eq!(eps.coefficients(), &[rat(-1, 42), rat(1, 7)]);
    }

    #[test]
    fn epsilon_degenerate_level() {
        // r = 0: the single zero subspace; A = (#G(k,V)) and ε = (1/a00)
        let eps = solve_epsilon(4, 0, 2, 2).unwrap();
        assert_eq!(eps.coefficients(), &[rat(1, 35)]);
    }

    #[test]
    fn epsilon_denominators_divide_diagonal_product() {
        for (n, r, k, p) in [(4usize, 1usize, 2usize, 2u64), (5, 2, 2, 2)] {
            let a = build_a(n, r, k, p).unwrap();
            let det: BigInt = (0..=r).map(|i| BigInt::from(a[i][i])).product();
            let eps = solve_epsilon(n, r, k, p).unwrap();
            for c in eps.coefficients() {
                assert!((BigRational::from_integer(det.clone()) * c)
                    .denom()
                    .is_one());
            }
        }
    }

    #[test]
    fn transform_identity_small_cases() {
        assert!(check_transform(4, 1, 2, 2).unwrap());
        assert!(check_transform(5, 1, 2, 2).unwrap());
        assert!(check_transform(4, 2, 2, 2).unwrap());
        assert!(check_transform(4, 1, 1, 2).unwrap());
    }

    #[test]
    fn invariant_dim_examples() {
        let trivial = GroupSpec::trivial(2, 4).unwrap();
        assert_eq!(invariant_dim(&trivial, 2).unwrap(), 35);

        let f2 = PrimeField::new(2).unwrap();
        let gl2 = GroupSpec::new(
            2,
            2,
            vec![
                f2.matrix(2, 2, &[1, 1, 0, 1]),
                f2.matrix(2, 2, &[0, 1, 1, 0]),
            ],
        )
        .unwrap();
        assert_eq!(invariant_dim(&gl2, 1).unwrap(), 1);
    }

    #[test]
    fn invariant_dim_matches_averaging_rank() {
        // rank of the matrix of orbit-averaged indicators equals the number
        // of orbits, for a small solvable group on G(1, F_2^3)
        let f2 = PrimeField::new(2).unwrap();
        let spec = GroupSpec::new(
            2,
            3,
            vec![
                f2.matrix(3, 3, &[1, 1, 0, 0, 1, 0, 0, 0, 1]),
                f2.matrix(3, 3, &[1, 0, 0, 0, 1, 1, 0, 0, 1]),
            ],
        )
        .unwrap();
        let closure = group_closure(&spec, 1000).unwrap();
        let table = SubspaceTable::new(3, 1, 2).unwrap();
        let m = table.len();
        let mut rows = vec![vec![BigRational::zero(); m]; m];
        for x in 0..m {
            for g in closure.elements() {
                let y = table
                    .index_of(&table.get(x).apply_unchecked(g))
                    .unwrap() as usize;
                rows[x][y] += BigRational::one();
            }
        }
        assert_eq!(rat_rank(&rows), invariant_dim(&spec, 1).unwrap());
    }
}
