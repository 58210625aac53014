//! Fixed-locus dimensions dim (Fl_a(V))_g computed from skeleton data.
//!
//! A skeleton is the conjugacy datum of an element of GL(n): a multiset of
//! Jordan-type partitions attached to distinct eigenvalues, with the
//! eigenvalue values forgotten (fixed-locus data depends only on the class).
//! A unipotent block of type λ is exchanged for semisimple blocks of
//! multiplicities λ', after which a fixed flag splits eigenvalue-wise and the
//! dimension is a maximum over margin-constrained allocations.

use crate::error::{Error, Result};
use crate::field::{FpMatrix, PrimeField};
use crate::partitions::{
    distinct_permutations, flag_dim, grass_dim, partitions_of, Composition, Partition,
};
use crate::subspaces::{enumerate_subspaces, quotient_matrix};
use std::collections::HashMap;
use std::fmt;

/// A multiset of Jordan-type partitions on distinct (anonymous) eigenvalues.
/// Blocks are stored with strictly positive parts, canonically sorted, so
/// equality of skeletons is equality of values.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Skeleton {
    blocks: Vec<Partition>,
}

fn canonical_blocks(mut blocks: Vec<Partition>) -> Vec<Partition> {
    blocks.sort_unstable_by(|a, b| {
        (b.weight(), b.effective_parts()).cmp(&(a.weight(), a.effective_parts()))
    });
    blocks
}

impl Skeleton {
    /// Blocks must be nonempty partitions; trailing zeros are stripped.
    pub fn new(blocks: Vec<Partition>) -> Result<Skeleton> {
        let mut cleaned = Vec::with_capacity(blocks.len());
        for b in blocks {
            let eff = b.effective_parts().to_vec();
            if eff.is_empty() {
                return Err(Error::Invalid(
                    "skeleton blocks must have positive weight".into(),
                ));
            }
            cleaned.push(Partition::new(eff)?);
        }
        Ok(Skeleton {
            blocks: canonical_blocks(cleaned),
        })
    }

    pub fn blocks(&self) -> &[Partition] {
        &self.blocks
    }

    pub fn weight(&self) -> u64 {
        self.blocks.iter().map(|b| b.weight()).sum()
    }

    /// The skeleton of a diagonalizable element with the given eigenvalue
    /// multiplicities: one block (1^m) per multiplicity m.
    pub fn of_diagonalizable(multiplicities: &Composition) -> Result<Skeleton> {
        if multiplicities.terms().contains(&0) {
            return Err(Error::Invalid(
                "eigenvalue multiplicities must be positive".into(),
            ));
        }
        Skeleton::new(
            multiplicities
                .terms()
                .iter()
                .map(|&m| Partition::new(vec![1; m as usize]).expect("constant is sorted"))
                .collect(),
        )
    }

    pub fn is_semisimple(&self) -> bool {
        self.blocks
            .iter()
            .all(|b| b.effective_parts().iter().all(|&p| p == 1))
    }

    /// The semisimple skeleton with the same fixed-locus dimensions: each
    /// block λ is replaced by blocks (1^m) for the parts m of its conjugate.
    pub fn semisimplify(&self) -> Skeleton {
        let mut blocks = Vec::new();
        for b in &self.blocks {
            for &m in b.conjugate().effective_parts() {
                blocks.push(Partition::new(vec![1; m as usize]).expect("constant is sorted"));
            }
        }
        Skeleton {
            blocks: canonical_blocks(blocks),
        }
    }

    /// Eigenvalue multiplicities of the semisimplified skeleton.
    fn multiplicities(&self) -> Vec<u64> {
        self.semisimplify()
            .blocks
            .iter()
            .map(|b| b.weight())
            .collect()
    }

    /// dim (Fl_a(V))_g for any g of this skeleton: the maximum over
    /// nonnegative integer matrices with row sums a and column sums the
    /// semisimple multiplicities of the summed flag dimensions of the columns.
    pub fn fixed_flag_dim(&self, a: &Composition) -> Result<u64> {
        if self.weight() != a.weight() {
            return Err(Error::WeightMismatch {
                left: self.weight(),
                right: a.weight(),
            });
        }
        let mults = self.multiplicities();
        let mut memo: HashMap<(usize, Vec<u64>), u64> = HashMap::new();
        Ok(allocate(&mults, 0, &a.terms().to_vec(), &mut memo))
    }
}

/// DP over eigen-blocks: hand multiplicity `mults[j]` out across the rows,
/// scoring each column by its flag dimension.
fn allocate(
    mults: &[u64],
    j: usize,
    remaining: &Vec<u64>,
    memo: &mut HashMap<(usize, Vec<u64>), u64>,
) -> u64 {
    if j == mults.len() {
        debug_assert!(remaining.iter().all(|&r| r == 0));
        return 0;
    }
    if let Some(&v) = memo.get(&(j, remaining.clone())) {
        return v;
    }
    let mut best = 0u64;
    let mut column = vec![0u64; remaining.len()];
    fn columns(
        mults: &[u64],
        j: usize,
        remaining: &Vec<u64>,
        column: &mut Vec<u64>,
        slot: usize,
        left: u64,
        memo: &mut HashMap<(usize, Vec<u64>), u64>,
        best: &mut u64,
    ) {
        if slot == column.len() {
            if left == 0 {
                let next: Vec<u64> = remaining
                    .iter()
                    .zip(column.iter())
                    .map(|(&r, &c)| r - c)
                    .collect();
                let score = flag_dim(&Composition::new(column.clone()))
                    + allocate(mults, j + 1, &next, memo);
                *best = (*best).max(score);
            }
            return;
        }
        let cap = remaining[slot].min(left);
        for c in 0..=cap {
            column[slot] = c;
            columns(mults, j, remaining, column, slot + 1, left - c, memo, best);
        }
        column[slot] = 0;
    }
    columns(mults, j, remaining, &mut column, 0, mults[j], memo, &mut best);
    memo.insert((j, remaining.clone()), best);
    best
}

impl fmt::Display for Skeleton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.blocks.iter().map(|b| b.to_string()).collect();
        write!(f, "{{{}}}", body.join(", "))
    }
}

/// All skeletons of weight n: multisets of positive partitions summing to n,
/// in canonical order.
pub fn enumerate_skeletons(n: u64) -> Vec<Skeleton> {
    // candidate blocks, heaviest first, matching the canonical block order
    let mut candidates: Vec<Partition> = (1..=n).flat_map(partitions_of).collect();
    candidates = canonical_blocks(candidates);
    fn rec(
        candidates: &[Partition],
        from: usize,
        remaining: u64,
        chosen: &mut Vec<Partition>,
        out: &mut Vec<Skeleton>,
    ) {
        if remaining == 0 {
            out.push(Skeleton {
                blocks: chosen.clone(),
            });
            return;
        }
        for i in from..candidates.len() {
            if candidates[i].weight() <= remaining {
                chosen.push(candidates[i].clone());
                rec(candidates, i, remaining - candidates[i].weight(), chosen, out);
                chosen.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(&candidates, 0, n, &mut Vec::new(), &mut out);
    out.sort_unstable();
    out
}

/// Prop-dual check: whenever dim G(j,V) <= dim G(k,V), the fixed-locus
/// dimensions satisfy the same inequality.
pub fn verify_dual(s: &Skeleton) -> bool {
    let n = s.weight();
    let dims: Vec<u64> = (0..=n)
        .map(|k| {
            s.fixed_flag_dim(&Composition::new(vec![k, n - k]))
                .expect("weights match")
        })
        .collect();
    for j in 0..=n {
        for k in 0..=n {
            if grass_dim(j, n) <= grass_dim(k, n) && dims[j as usize] > dims[k as usize] {
                return false;
            }
        }
    }
    true
}

/// Fixed-locus dimension is invariant under permuting the composition.
pub fn verify_perm_invariance(s: &Skeleton, a: &Composition) -> Result<bool> {
    let reference = s.fixed_flag_dim(a)?;
    for perm in distinct_permutations(a) {
        if s.fixed_flag_dim(&perm)? != reference {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Replacing the adjacent pair (a_i, a_{i+1}) by (b, c) with b + c equal and
/// bc <= a_i a_{i+1} cannot increase the fixed-locus dimension.
pub fn verify_merge_split(
    s: &Skeleton,
    a: &Composition,
    i: usize,
    b: u64,
    c: u64,
) -> Result<bool> {
    if i + 1 >= a.len() {
        return Err(Error::PreconditionViolated(format!(
            "index {i} has no successor in a composition of length {}",
            a.len()
        )));
    }
    let (ai, aj) = (a.terms()[i], a.terms()[i + 1]);
    if b + c != ai + aj {
        return Err(Error::PreconditionViolated(format!(
            "b + c = {} but a_i + a_(i+1) = {}",
            b + c,
            ai + aj
        )));
    }
    if b * c > ai * aj {
        return Err(Error::PreconditionViolated(format!(
            "bc = {} exceeds a_i a_(i+1) = {}",
            b * c,
            ai * aj
        )));
    }
    let mut replaced = a.terms().to_vec();
    replaced[i] = b;
    replaced[i + 1] = c;
    Ok(s.fixed_flag_dim(&Composition::new(replaced))? <= s.fixed_flag_dim(a)?)
}

/// Jordan type of a unipotent matrix, from the kernel filtration of g - 1.
pub fn jordan_type(g: &FpMatrix) -> Result<Partition> {
    if !g.is_square() {
        return Err(Error::ShapeMismatch {
            left: (g.rows(), g.cols()),
            right: (g.cols(), g.rows()),
        });
    }
    let n = g.rows();
    let field = g.field();
    let mut nil = g.clone();
    for i in 0..n {
        let e = nil.get(i, i);
        let reduced = field.sub(e, 1 % field.modulus());
        // subtract the identity in place via a rebuild
        let mut entries = nil.entries().to_vec();
        entries[i * n + i] = reduced;
        nil = field.matrix(n, n, &entries);
    }
    let mut conj = Vec::new();
    let mut power = field.identity(n);
    let mut prev_kernel = 0usize;
    while prev_kernel < n {
        power = power.mul(&nil).expect("square shapes");
        let kernel = n - power.rank();
        if kernel == prev_kernel {
            return Err(Error::PreconditionViolated(
                "matrix is not unipotent".into(),
            ));
        }
        conj.push((kernel - prev_kernel) as u64);
        prev_kernel = kernel;
    }
    Ok(Partition::new(conj)?.conjugate())
}

/// Exact counts of flags fixed by a unipotent of given type over F_p,
/// by recursion over invariant first steps, memoized on the Jordan type of
/// the induced quotient.
///
/// This is the growth oracle behind `fixed_flag_dim`: it never consults the
/// allocation maximum, only enumeration, filtering, and quotient types.
pub struct FixedFlagCounter {
    field: PrimeField,
    memo: HashMap<(Partition, Vec<u64>), u128>,
}

impl FixedFlagCounter {
    pub fn new(p: u64) -> Result<FixedFlagCounter> {
        Ok(FixedFlagCounter {
            field: PrimeField::new(p)?,
            memo: HashMap::new(),
        })
    }

    /// |{flags of shape a fixed by J_lambda(1)}| over F_p.
    pub fn count(&mut self, lambda: &Partition, a: &Composition) -> Result<u128> {
        if lambda.weight() != a.weight() {
            return Err(Error::WeightMismatch {
                left: lambda.weight(),
                right: a.weight(),
            });
        }
        self.rec(lambda, a.terms())
    }

    fn rec(&mut self, lambda: &Partition, rest: &[u64]) -> Result<u128> {
        if rest.is_empty() {
            debug_assert_eq!(lambda.weight(), 0);
            return Ok(1);
        }
        let key = (lambda.clone(), rest.to_vec());
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        let n = lambda.weight() as usize;
        let g = self
            .field
            .jordan_matrix(lambda.effective_parts(), 1);
        let step = rest[0] as usize;
        let mut total = 0u128;
        for w in enumerate_subspaces(n, step, self.field.modulus())? {
            if w.apply_unchecked(&g) != w {
                continue;
            }
            let induced = quotient_matrix(&g, &w);
            let quotient_type = jordan_type(&induced)?;
            total += self.rec(&quotient_type, &rest[1..])?;
        }
        self.memo.insert(key, total);
        Ok(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::compositions_of;
    use crate::subspaces::fixed_flags;

    fn pt(parts: &[u64]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn comp(terms: &[u64]) -> Composition {
        Composition::new(terms.to_vec())
    }

    fn sk(blocks: &[&[u64]]) -> Skeleton {
        Skeleton::new(blocks.iter().map(|b| pt(b)).collect()).unwrap()
    }

    #[test]
    fn diagonalizable_examples() {
        assert_eq!(
            Skeleton::of_diagonalizable(&comp(&[2, 1])).unwrap(),
            sk(&[&[1, 1], &[1]])
        );
        assert_eq!(
            Skeleton::of_diagonalizable(&comp(&[4])).unwrap(),
            sk(&[&[1, 1, 1, 1]])
        );
        assert_eq!(
            Skeleton::of_diagonalizable(&comp(&[1, 1, 1])).unwrap(),
            sk(&[&[1], &[1], &[1]])
        );
        assert!(Skeleton::of_diagonalizable(&comp(&[2, 0])).is_err());
    }

    #[test]
    fn semisimplify_examples() {
        assert_eq!(sk(&[&[2, 2]]).semisimplify(), sk(&[&[1, 1], &[1, 1]]));
        let already = sk(&[&[1, 1, 1]]);
        assert_eq!(already.semisimplify(), already);
        assert_eq!(sk(&[&[3]]).semisimplify(), sk(&[&[1], &[1], &[1]]));
    }

    #[test]
    fn fixed_flag_dim_examples() {
        // two eigenvalues of multiplicity 2 in n = 4, a = (2,2)
        let semi = Skeleton::of_diagonalizable(&comp(&[2, 2])).unwrap();
        assert_eq!(semi.fixed_flag_dim(&comp(&[2, 2])).unwrap(), 2);

        // a scalar fixes every flag
        for n in 1..=5u64 {
            let scalar = sk(&[&vec![1; n as usize]]);
            for a in compositions_of(n) {
                assert_eq!(scalar.fixed_flag_dim(&a).unwrap(), flag_dim(&a));
            }
        }

        // the unipotent of type (2,2) reduces to the semisimple case
        let uni = sk(&[&[2, 2]]);
        assert_eq!(uni.fixed_flag_dim(&comp(&[2, 2])).unwrap(), 2);

        assert!(matches!(
            uni.fixed_flag_dim(&comp(&[1, 1])),
            Err(Error::WeightMismatch { .. })
        ));
    }

    #[test]
    fn fixed_flag_dim_handles_zero_terms() {
        let uni = sk(&[&[2, 2]]);
        assert_eq!(
            uni.fixed_flag_dim(&comp(&[2, 0, 2])).unwrap(),
            uni.fixed_flag_dim(&comp(&[2, 2])).unwrap()
        );
    }

    #[test]
    fn skeleton_counts() {
        assert_eq!(enumerate_skeletons(1).len(), 1);
        // {(2)}, {(1,1)}, {(1),(1)}
        assert_eq!(enumerate_skeletons(2).len(), 3);
        // the six classes displayed for GL(3)
        assert_eq!(enumerate_skeletons(3).len(), 6);
        assert_eq!(enumerate_skeletons(4).len(), 14);
        assert_eq!(enumerate_skeletons(5).len(), 27);
        // no duplicates
        let all = enumerate_skeletons(5);
        let dedup: std::collections::BTreeSet<_> = all.iter().cloned().collect();
        assert_eq!(dedup.len(), all.len());
    }

    #[test]
    fn semisimplify_preserves_dimensions() {
        for n in 1..=4u64 {
            for s in enumerate_skeletons(n) {
                let t = s.semisimplify();
                for a in compositions_of(n) {
                    assert_eq!(
                        s.fixed_flag_dim(&a).unwrap(),
                        t.fixed_flag_dim(&a).unwrap(),
                        "skeleton {s} vs {t} on {a}"
                    );
                }
            }
        }
    }

    #[test]
    fn dual_holds_on_small_skeletons() {
        let scalar = sk(&[&[1, 1, 1, 1]]);
        assert!(verify_dual(&scalar));
        for n in 1..=6u64 {
            for s in enumerate_skeletons(n) {
                assert!(verify_dual(&s), "dual fails on {s}");
            }
        }
    }

    #[test]
    fn grassmannian_symmetry_of_fixed_dims() {
        for s in enumerate_skeletons(4) {
            let n = 4u64;
            for k in 0..=n {
                assert_eq!(
                    s.fixed_flag_dim(&comp(&[k, n - k])).unwrap(),
                    s.fixed_flag_dim(&comp(&[n - k, k])).unwrap()
                );
            }
        }
    }

    #[test]
    fn perm_invariance_example() {
        let uni = sk(&[&[2, 2]]);
        assert!(verify_perm_invariance(&uni, &comp(&[1, 2, 1])).unwrap());
        let dims: std::collections::BTreeSet<u64> = distinct_permutations(&comp(&[1, 2, 1]))
            .iter()
            .map(|p| uni.fixed_flag_dim(p).unwrap())
            .collect();
        assert_eq!(dims.len(), 1);
    }

    #[test]
    fn merge_split_example() {
        for s in enumerate_skeletons(4) {
            assert!(verify_merge_split(&s, &comp(&[2, 2]), 0, 1, 3).unwrap());
        }
        let s = sk(&[&[4]]);
        assert!(matches!(
            verify_merge_split(&s, &comp(&[2, 2]), 0, 2, 3),
            Err(Error::PreconditionViolated(_))
        ));
        assert!(matches!(
            verify_merge_split(&s, &comp(&[1, 3]), 0, 2, 2),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn jordan_type_round_trip() {
        for p in [2u64, 3] {
            let field = PrimeField::new(p).unwrap();
            for n in 1..=5u64 {
                for lam in partitions_of(n) {
                    let j = field.jordan_matrix(lam.effective_parts(), 1);
                    assert_eq!(jordan_type(&j).unwrap(), lam);
                }
            }
        }
    }

    #[test]
    fn jordan_type_rejects_non_unipotent() {
        let f3 = PrimeField::new(3).unwrap();
        let d = f3.matrix(2, 2, &[2, 0, 0, 1]);
        assert!(jordan_type(&d).is_err());
    }

    #[test]
    fn counter_agrees_with_brute_force() {
        for p in [2u64, 3] {
            let field = PrimeField::new(p).unwrap();
            let mut counter = FixedFlagCounter::new(p).unwrap();
            for n in 1..=3u64 {
                for lam in partitions_of(n) {
                    let g = field.jordan_matrix(lam.effective_parts(), 1);
                    for a in compositions_of(n) {
                        let brute = fixed_flags(&g, &a).unwrap().len() as u128;
                        assert_eq!(
                            counter.count(&lam, &a).unwrap(),
                            brute,
                            "lam={lam} a={a} p={p}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn counter_on_known_cases() {
        // identity on full flags of F_p^2: p + 1
        for p in [2u64, 3, 5, 7] {
            let mut counter = FixedFlagCounter::new(p).unwrap();
            assert_eq!(
                counter.count(&pt(&[1, 1]), &comp(&[1, 1])).unwrap(),
                (p + 1) as u128
            );
            // regular unipotent fixes exactly one full flag
            assert_eq!(counter.count(&pt(&[2]), &comp(&[1, 1])).unwrap(), 1);
            // J_(2,1): (q + 1) + q fixed full flags
            assert_eq!(
                counter.count(&pt(&[2, 1]), &comp(&[1, 1, 1])).unwrap(),
                (2 * p + 1) as u128
            );
        }
    }
}
