//! Orbit counting N(G, X) for finitely generated matrix groups acting on
//! subspaces and flags, with two independent algorithms: breadth-first orbit
//! enumeration over canonical points (needs no group closure) and Burnside's
//! counting lemma over the closure (needs no orbit traversal). Fibered
//! counting over an equivariant projection gives a third route.
//!
//! Orbit and fixed-point computations keep call-local state only; distinct
//! calls may run concurrently, and the fixed-point sums over group elements
//! are pure maps that a caller may evaluate in parallel.

use crate::error::{Error, Result};
use crate::field::{FpMatrix, PrimeField};
use crate::partitions::{compositions_of, q_binomial, Composition};
use crate::subspaces::{Flag, Subspace, SubspaceTable};
use num::bigint::BigUint;
use std::collections::HashMap;

/// Default ceiling on group-closure size.
pub const DEFAULT_CLOSURE_CAP: usize = 1_000_000;

/// A subgroup of GL(n, F_p) given by generators.
#[derive(Debug, Clone)]
pub struct GroupSpec {
    field: PrimeField,
    n: usize,
    generators: Vec<FpMatrix>,
}

impl GroupSpec {
    /// Validates the modulus, shapes and invertibility of every generator.
    /// An empty generator list defines the trivial group.
    pub fn new(p: u64, n: usize, generators: Vec<FpMatrix>) -> Result<GroupSpec> {
        let field = PrimeField::new(p)?;
        for g in &generators {
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
        }
        Ok(GroupSpec {
            field,
            n,
            generators,
        })
    }

    pub fn trivial(p: u64, n: usize) -> Result<GroupSpec> {
        GroupSpec::new(p, n, Vec::new())
    }

    pub fn p(&self) -> u64 {
        self.field.modulus()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[FpMatrix] {
        &self.generators
    }
}

/// The elements of the generated subgroup, in BFS order from the identity.
#[derive(Debug, Clone)]
pub struct GroupClosure {
    elements: Vec<FpMatrix>,
    index: HashMap<FpMatrix, u32>,
}

impl GroupClosure {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[FpMatrix] {
        &self.elements
    }

    pub fn contains(&self, g: &FpMatrix) -> bool {
        self.index.contains_key(g)
    }

    pub fn index_of(&self, g: &FpMatrix) -> Option<u32> {
        self.index.get(g).copied()
    }
}

/// BFS closure of the generators under multiplication. Errors once more than
/// `cap` elements have been found.
pub fn group_closure(spec: &GroupSpec, cap: usize) -> Result<GroupClosure> {
    assert!(cap >= 1, "cap must be at least 1");
    let id = spec.field.identity(spec.n);
    let mut elements = vec![id.clone()];
    let mut index = HashMap::new();
    index.insert(id, 0u32);
    let mut head = 0usize;
    while head < elements.len() {
        let current = elements[head].clone();
        head += 1;
        for g in &spec.generators {
            let next = current.mul(g).expect("validated shapes");
            if !index.contains_key(&next) {
                if elements.len() + 1 > cap {
                    return Err(Error::CapExceeded {
                        partial: elements.len() + 1,
                    });
                }
                index.insert(next.clone(), elements.len() as u32);
                elements.push(next);
            }
        }
    }
    Ok(GroupClosure { elements, index })
}

/// Conjugacy classes of the closure as (representative index, class size),
/// found by closing under conjugation by the generators.
fn conjugacy_classes(closure: &GroupClosure, spec: &GroupSpec) -> Vec<(u32, u64)> {
    let inverses: Vec<FpMatrix> = spec
        .generators
        .iter()
        .map(|g| g.inverse().expect("generators are invertible"))
        .collect();
    let mut seen = vec![false; closure.order()];
    let mut classes = Vec::new();
    for start in 0..closure.order() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start as u32];
        let mut size = 0u64;
        while let Some(i) = stack.pop() {
            size += 1;
            let x = &closure.elements[i as usize];
            for (g, ginv) in spec.generators.iter().zip(&inverses) {
                let conj = ginv.mul(x).and_then(|m| m.mul(g)).expect("shapes agree");
                let j = closure.index_of(&conj).expect("closure is closed");
                if !seen[j as usize] {
                    seen[j as usize] = true;
                    stack.push(j);
                }
            }
        }
        classes.push((start as u32, size));
    }
    classes
}

/// The space being acted on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Space {
    Grassmannian(usize),
    Flags(Composition),
}

/// A canonical point of one of the supported spaces.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum SpacePoint {
    Subspace(Subspace),
    Flag(Flag),
}

impl std::fmt::Display for SpacePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SpacePoint::Subspace(s) => write!(f, "{s}"),
            SpacePoint::Flag(fl) => write!(f, "{fl}"),
        }
    }
}

/// Exact orbit partition data. Representatives are the lexicographically
/// least canonical points of their orbits; sizes are sorted ascending.
#[derive(Debug, Clone)]
pub struct OrbitReport {
    pub orbit_count: usize,
    pub orbit_sizes: Vec<usize>,
    pub representatives: Vec<SpacePoint>,
}

/// The enumerated space with index structure: points are tuples of per-level
/// subspace indices (a single level for a Grassmannian), sorted so that index
/// order is lexicographic order of canonical points.
struct SpaceIdx {
    levels: Vec<SubspaceTable>,
    /// level used by each tuple position
    position_level: Vec<usize>,
    points: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, u32>,
    composition: Option<Composition>,
}

impl SpaceIdx {
    fn build(spec: &GroupSpec, space: &Space) -> Result<SpaceIdx> {
        let (n, p) = (spec.n, spec.p());
        match space {
            Space::Grassmannian(k) => {
                let table = SubspaceTable::new(n, *k, p)?;
                let points: Vec<Vec<u32>> = (0..table.len() as u32).map(|i| vec![i]).collect();
                let index = points
                    .iter()
                    .enumerate()
                    .map(|(i, t)| (t.clone(), i as u32))
                    .collect();
                Ok(SpaceIdx {
                    levels: vec![table],
                    position_level: vec![0],
                    points,
                    index,
                    composition: None,
                })
            }
            Space::Flags(a) => {
                if a.weight() as usize != n {
                    return Err(Error::WeightMismatch {
                        left: a.weight(),
                        right: n as u64,
                    });
                }
                let mut cum = Vec::with_capacity(a.len());
                let mut acc = 0usize;
                for &t in a.terms() {
                    acc += t as usize;
                    cum.push(acc);
                }
                let mut distinct: Vec<usize> = cum.clone();
                distinct.sort_unstable();
                distinct.dedup();
                let levels = distinct
                    .iter()
                    .map(|&d| SubspaceTable::new(n, d, p))
                    .collect::<Result<Vec<_>>>()?;
                let position_level: Vec<usize> = cum
                    .iter()
                    .map(|d| distinct.binary_search(d).expect("dim is listed"))
                    .collect();
                let flags = crate::subspaces::enumerate_flags(a, p)?;
                let mut points = Vec::with_capacity(flags.len());
                for fl in &flags {
                    let tuple: Vec<u32> = fl
                        .chain()
                        .iter()
                        .zip(&position_level)
                        .map(|(s, &l)| levels[l].index_of(s).expect("enumerations agree"))
                        .collect();
                    points.push(tuple);
                }
                // enumerate_flags is sorted by chains, and per-level index
                // order is subspace order, so `points` is already sorted
                debug_assert!(points.windows(2).all(|w| w[0] < w[1]));
                let index = points
                    .iter()
                    .enumerate()
                    .map(|(i, t)| (t.clone(), i as u32))
                    .collect();
                Ok(SpaceIdx {
                    levels,
                    position_level,
                    points,
                    index,
                    composition: Some(a.clone()),
                })
            }
        }
    }

    fn len(&self) -> usize {
        self.points.len()
    }

    /// Per-level permutations induced by a validated group element.
    fn level_perms(&self, g: &FpMatrix) -> Vec<Vec<u32>> {
        self.levels.iter().map(|t| t.permutation(g)).collect()
    }

    fn apply_tuple(&self, tuple: &[u32], level_perms: &[Vec<u32>]) -> Vec<u32> {
        tuple
            .iter()
            .zip(&self.position_level)
            .map(|(&i, &l)| level_perms[l][i as usize])
            .collect()
    }

    /// Full permutation of point indices under a validated group element.
    fn permutation(&self, g: &FpMatrix) -> Vec<u32> {
        let perms = self.level_perms(g);
        self.points
            .iter()
            .map(|t| self.index[&self.apply_tuple(t, &perms)])
            .collect()
    }

    /// Number of points fixed by an element, given its per-level permutations.
    fn fixed_count(&self, level_perms: &[Vec<u32>]) -> u64 {
        let fixed_by_level: Vec<Vec<bool>> = level_perms
            .iter()
            .map(|p| p.iter().enumerate().map(|(i, &j)| i as u32 == j).collect())
            .collect();
        self.points
            .iter()
            .filter(|t| {
                t.iter()
                    .zip(&self.position_level)
                    .all(|(&i, &l)| fixed_by_level[l][i as usize])
            })
            .count() as u64
    }

    fn point(&self, i: usize) -> SpacePoint {
        let tuple = &self.points[i];
        match &self.composition {
            None => SpacePoint::Subspace(self.levels[0].get(tuple[0] as usize).clone()),
            Some(a) => {
                let chain: Vec<Subspace> = tuple
                    .iter()
                    .zip(&self.position_level)
                    .map(|(&idx, &l)| self.levels[l].get(idx as usize).clone())
                    .collect();
                SpacePoint::Flag(Flag::new(a.clone(), chain).expect("tuple encodes a flag"))
            }
        }
    }
}

/// Orbit ids, sizes and least representatives from generator permutations.
/// Seeds scan ascending, so each orbit's seed is its least index.
fn orbit_partition(len: usize, gen_perms: &[Vec<u32>]) -> (Vec<usize>, Vec<usize>) {
    let mut visited = vec![false; len];
    let mut seeds = Vec::new();
    let mut sizes = Vec::new();
    for seed in 0..len {
        if visited[seed] {
            continue;
        }
        visited[seed] = true;
        let mut stack = vec![seed as u32];
        let mut size = 0usize;
        while let Some(i) = stack.pop() {
            size += 1;
            for perm in gen_perms {
                let j = perm[i as usize];
                if !visited[j as usize] {
                    visited[j as usize] = true;
                    stack.push(j);
                }
            }
        }
        seeds.push(seed);
        sizes.push(size);
    }
    (seeds, sizes)
}

/// Exact orbit partition of the space under the generated group, by
/// breadth-first search over canonical points. Needs no group closure.
pub fn orbit_count(spec: &GroupSpec, space: &Space) -> Result<OrbitReport> {
    let idx = SpaceIdx::build(spec, space)?;
    let gen_perms: Vec<Vec<u32>> = spec
        .generators
        .iter()
        .map(|g| idx.permutation(g))
        .collect();
    let (seeds, mut sizes) = orbit_partition(idx.len(), &gen_perms);
    let representatives: Vec<SpacePoint> = seeds.iter().map(|&s| idx.point(s)).collect();
    let orbit_count = seeds.len();
    sizes.sort_unstable();
    Ok(OrbitReport {
        orbit_count,
        orbit_sizes: sizes,
        representatives,
    })
}

/// Burnside's counting lemma: (1 / |G|) Σ_g |X_g|, evaluated per conjugacy
/// class and checked to divide exactly.
pub fn burnside_count(spec: &GroupSpec, space: &Space, cap: usize) -> Result<u64> {
    let closure = group_closure(spec, cap)?;
    let idx = SpaceIdx::build(spec, space)?;
    let mut total: u128 = 0;
    for (rep, size) in conjugacy_classes(&closure, spec) {
        let perms = idx.level_perms(&closure.elements[rep as usize]);
        total += idx.fixed_count(&perms) as u128 * size as u128;
    }
    let order = closure.order() as u128;
    if total % order != 0 {
        return Err(Error::NonIntegerAverage);
    }
    Ok((total / order) as u64)
}

/// The subgroup of a closure fixing a point.
pub fn stabilizer(closure: &GroupClosure, point: &SpacePoint) -> GroupClosure {
    let elements: Vec<FpMatrix> = closure
        .elements
        .iter()
        .filter(|g| match point {
            SpacePoint::Subspace(s) => s.apply_unchecked(g) == *s,
            SpacePoint::Flag(f) => f.apply_unchecked(g) == *f,
        })
        .cloned()
        .collect();
    let index = elements
        .iter()
        .enumerate()
        .map(|(i, g)| (g.clone(), i as u32))
        .collect();
    GroupClosure { elements, index }
}

/// True iff `coarse` is obtained from `fine` by merging adjacent terms,
/// i.e. the partial sums of `coarse` all occur among those of `fine`.
pub fn is_merge_refinement(fine: &Composition, coarse: &Composition) -> bool {
    if fine.weight() != coarse.weight() {
        return false;
    }
    let sums = |c: &Composition| -> Vec<u64> {
        c.terms()
            .iter()
            .scan(0u64, |acc, &t| {
                *acc += t;
                Some(*acc)
            })
            .collect()
    };
    let fine_sums = sums(fine);
    sums(coarse).iter().all(|s| fine_sums.contains(s))
}

/// N(G, Fl_fine) computed through the equivariant forgetful map onto
/// Fl_coarse: the sum over coarse orbit representatives y of the orbit count
/// of Stab_G(y) on the fiber over y.
pub fn fibered_count(
    spec: &GroupSpec,
    fine: &Composition,
    coarse: &Composition,
    cap: usize,
) -> Result<u64> {
    if !is_merge_refinement(fine, coarse) {
        return Err(Error::NotARefinement);
    }
    let closure = group_closure(spec, cap)?;
    let fine_idx = SpaceIdx::build(spec, &Space::Flags(fine.clone()))?;
    let coarse_idx = SpaceIdx::build(spec, &Space::Flags(coarse.clone()))?;

    // positions of the coarse chain inside the fine chain
    let cum = |c: &Composition| -> Vec<u64> {
        c.terms()
            .iter()
            .scan(0u64, |acc, &t| {
                *acc += t;
                Some(*acc)
            })
            .collect()
    };
    let fine_cum = cum(fine);
    let coarse_cum = cum(coarse);
    let keep: Vec<usize> = coarse_cum
        .iter()
        .map(|d| fine_cum.iter().position(|e| e == d).expect("refinement"))
        .collect();

    // bucket fine points by their coarse image
    let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); coarse_idx.len()];
    for (fi, tuple) in fine_idx.points.iter().enumerate() {
        // same dims enumerate identically in both spaces, so subspace
        // indices carry over; only the level layout differs
        let image: Vec<u32> = keep.iter().map(|&i| tuple[i]).collect();
        let ci = coarse_idx.index[&image];
        buckets[ci as usize].push(fi as u32);
    }

    let gen_perms: Vec<Vec<u32>> = spec
        .generators
        .iter()
        .map(|g| coarse_idx.permutation(g))
        .collect();
    let (reps, _) = orbit_partition(coarse_idx.len(), &gen_perms);

    let mut total = 0u64;
    for rep in reps {
        let y = coarse_idx.point(rep);
        let stab = stabilizer(&closure, &y);
        let fiber = &buckets[rep];
        let local: HashMap<u32, usize> = fiber
            .iter()
            .enumerate()
            .map(|(li, &fi)| (fi, li))
            .collect();
        // when the stabilizer is the whole group, its orbits are already
        // generated by the original generators
        let movers: Vec<&FpMatrix> = if stab.order() == closure.order() {
            spec.generators.iter().collect()
        } else {
            stab.elements().iter().collect()
        };
        let stab_perms: Vec<Vec<Vec<u32>>> = movers
            .iter()
            .map(|g| fine_idx.level_perms(g))
            .collect();
        let mut visited = vec![false; fiber.len()];
        for start in 0..fiber.len() {
            if visited[start] {
                continue;
            }
            total += 1;
            visited[start] = true;
            let mut stack = vec![start];
            while let Some(li) = stack.pop() {
                let tuple = &fine_idx.points[fiber[li] as usize];
                for perms in &stab_perms {
                    let image = fine_idx.apply_tuple(tuple, perms);
                    let fi = fine_idx.index[&image];
                    let lj = *local.get(&fi).expect("stabilizer preserves the fiber");
                    if !visited[lj] {
                        visited[lj] = true;
                        stack.push(lj);
                    }
                }
            }
        }
    }
    Ok(total)
}

/// Orbit counts on every Grassmannian, with the duality and monotonicity
/// assertions of the finite-field counting statements.
#[derive(Debug, Clone, serde::Serialize)]
pub struct GrassmannianCountsReport {
    /// N(G, G(k,V)) for k = 0, ..., n
    pub counts: Vec<u64>,
    pub duality_holds: bool,
    pub monotonicity_holds: bool,
}

pub fn verify_grassmannian_counts(spec: &GroupSpec) -> Result<GrassmannianCountsReport> {
    let n = spec.n;
    let mut counts = Vec::with_capacity(n + 1);
    for k in 0..=n {
        counts.push(orbit_count(spec, &Space::Grassmannian(k))?.orbit_count as u64);
    }
    let duality_holds = (0..=n).all(|k| counts[k] == counts[n - k]);
    let sizes: Vec<BigUint> = (0..=n)
        .map(|k| q_binomial(n as u64, k as u64, spec.p()))
        .collect();
    let mut monotonicity_holds = true;
    for j in 0..=n {
        for k in 0..=n {
            if sizes[j] <= sizes[k] && counts[j] > counts[k] {
                monotonicity_holds = false;
            }
        }
    }
    Ok(GrassmannianCountsReport {
        counts,
        duality_holds,
        monotonicity_holds,
    })
}

/// Orbit counts on every flag variety of positive composition shape, with
/// the permutation-invariance and dominance-monotonicity assertions.
#[derive(Debug, Clone, serde::Serialize)]
pub struct FlagCountsReport {
    /// composition rendered as comma-joined terms, with its orbit count
    pub counts: Vec<(String, u64)>,
    pub permutation_invariance_holds: bool,
    pub dominance_monotonicity_holds: bool,
    pub violations: Vec<String>,
}

pub fn verify_flag_counts(spec: &GroupSpec) -> Result<FlagCountsReport> {
    let n = spec.n as u64;
    let comps = compositions_of(n);
    let mut counts: Vec<u64> = Vec::with_capacity(comps.len());
    for a in &comps {
        counts.push(orbit_count(spec, &Space::Flags(a.clone()))? .orbit_count as u64);
    }
    let mut violations = Vec::new();
    let mut permutation_invariance_holds = true;
    let mut dominance_monotonicity_holds = true;
    for (i, a) in comps.iter().enumerate() {
        for (j, b) in comps.iter().enumerate() {
            let pa = a.to_partition();
            let pb = b.to_partition();
            if pa == pb && counts[i] != counts[j] {
                permutation_invariance_holds = false;
                violations.push(format!(
                    "permutation: N{a} = {} but N{b} = {}",
                    counts[i], counts[j]
                ));
            }
            if pa.dominates(&pb).expect("equal weights") && counts[i] > counts[j] {
                dominance_monotonicity_holds = false;
                violations.push(format!(
                    "dominance: P{a} >= P{b} yet N{a} = {} > N{b} = {}",
                    counts[i], counts[j]
                ));
            }
        }
    }
    let rendered = comps
        .iter()
        .zip(&counts)
        .map(|(a, &c)| {
            let terms: Vec<String> = a.terms().iter().map(|t| t.to_string()).collect();
            (terms.join(","), c)
        })
        .collect();
    Ok(FlagCountsReport {
        counts: rendered,
        permutation_invariance_holds,
        dominance_monotonicity_holds,
        violations,
    })
}
