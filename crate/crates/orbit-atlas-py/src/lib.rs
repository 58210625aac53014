//! Python bindings for orbit-atlas: subspace enumeration, partition
//! calculus, fixed-locus dimensions, orbit counting, and the incidence
//! transform, exposed as the `orbit_atlas` extension module.

use num::bigint::BigUint;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use orbit_atlas::error::Error;
use orbit_atlas::field::{rational_to_string, PrimeField};
use orbit_atlas::incidence;
use orbit_atlas::orbits;
use orbit_atlas::partitions;
use orbit_atlas::skeleton;
use orbit_atlas::subspaces;

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::TooLarge { .. } | Error::CapExceeded { .. } => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn partition(parts: Vec<u64>) -> PyResult<partitions::Partition> {
    partitions::Partition::new(parts).map_err(to_py_err)
}

/// A k-dimensional subspace of F_p^n in canonical (RREF) form.
#[pyclass(eq, ord, frozen)]
#[derive(PartialEq, Eq, PartialOrd, Ord)]
struct Subspace {
    inner: subspaces::Subspace,
}

#[pymethods]
impl Subspace {
    /// The canonical subspace spanned by the given row vectors of F_p^n.
    #[staticmethod]
    fn from_spanning_set(p: u64, n: usize, vectors: Vec<Vec<u64>>) -> PyResult<Subspace> {
        let field = PrimeField::new(p).map_err(to_py_err)?;
        if vectors.iter().any(|v| v.len() != n) {
            return Err(PyValueError::new_err("all vectors must have length n"));
        }
        Ok(Subspace {
            inner: subspaces::Subspace::from_spanning_set(&field, n, &vectors),
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn ambient_dim(&self) -> usize {
        self.inner.ambient_dim()
    }

    #[getter]
    fn modulus(&self) -> u64 {
        self.inner.modulus()
    }

    /// The RREF basis as a list of rows.
    fn basis(&self) -> Vec<Vec<u64>> {
        (0..self.inner.dim())
            .map(|i| self.inner.basis().row(i).to_vec())
            .collect()
    }

    fn contains(&self, other: &Subspace) -> bool {
        self.inner.contains(&other.inner)
    }

    fn intersect_dim(&self, other: &Subspace) -> PyResult<usize> {
        self.inner.intersect_dim(&other.inner).map_err(to_py_err)
    }

    fn __repr__(&self) -> String {
        format!("Subspace({})", self.inner)
    }
}

/// Orbit partition data for a group action.
#[pyclass(frozen)]
struct OrbitReport {
    #[pyo3(get)]
    orbit_count: usize,
    #[pyo3(get)]
    orbit_sizes: Vec<usize>,
    representatives: Vec<String>,
}

#[pymethods]
impl OrbitReport {
    /// Printable canonical representatives, lexicographically least per orbit.
    fn representatives(&self) -> Vec<String> {
        self.representatives.clone()
    }

    fn __repr__(&self) -> String {
        format!(
            "OrbitReport(orbit_count={}, orbit_sizes={:?})",
            self.orbit_count, self.orbit_sizes
        )
    }
}

/// A subgroup of GL(n, F_p) given by generator matrices.
#[pyclass(frozen)]
struct GroupSpec {
    inner: orbits::GroupSpec,
}

impl GroupSpec {
    fn space(&self, grass: Option<usize>, flag: Option<Vec<u64>>) -> PyResult<orbits::Space> {
        match (grass, flag) {
            (Some(k), None) => Ok(orbits::Space::Grassmannian(k)),
            (None, Some(terms)) => Ok(orbits::Space::Flags(partitions::Composition::new(terms))),
            _ => Err(PyValueError::new_err(
                "pass exactly one of grass=k or flag=[a1, a2, ...]",
            )),
        }
    }
}

#[pymethods]
impl GroupSpec {
    /// Generators are n x n integer matrices, reduced mod p; they must be
    /// invertible. An empty list gives the trivial group.
    #[new]
    fn new(p: u64, n: usize, generators: Vec<Vec<Vec<i64>>>) -> PyResult<GroupSpec> {
        let field = PrimeField::new(p).map_err(to_py_err)?;
        let mut mats = Vec::with_capacity(generators.len());
        for g in &generators {
            if g.len() != n || g.iter().any(|row| row.len() != n) {
                return Err(PyValueError::new_err("generators must be n x n matrices"));
            }
            let flat: Vec<i64> = g.iter().flatten().copied().collect();
            mats.push(field.matrix_from_int(n, n, &flat));
        }
        Ok(GroupSpec {
            inner: orbits::GroupSpec::new(p, n, mats).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn p(&self) -> u64 {
        self.inner.p()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    /// Size of the generated subgroup, or an error past the cap.
    #[pyo3(signature = (cap = 1_000_000))]
    fn group_order(&self, cap: usize) -> PyResult<usize> {
        Ok(orbits::group_closure(&self.inner, cap)
            .map_err(to_py_err)?
            .order())
    }

    /// Exact orbit partition on a Grassmannian (grass=k) or flag variety
    /// (flag=[a1, ...]), by breadth-first search.
    #[pyo3(signature = (grass = None, flag = None))]
    fn orbit_count(&self, grass: Option<usize>, flag: Option<Vec<u64>>) -> PyResult<OrbitReport> {
        let space = self.space(grass, flag)?;
        let report = orbits::orbit_count(&self.inner, &space).map_err(to_py_err)?;
        Ok(OrbitReport {
            orbit_count: report.orbit_count,
            orbit_sizes: report.orbit_sizes,
            representatives: report
                .representatives
                .iter()
                .map(|p| p.to_string())
                .collect(),
        })
    }

    /// Burnside's lemma over the group closure: an independent recount.
    #[pyo3(signature = (grass = None, flag = None, cap = 1_000_000))]
    fn burnside_count(
        &self,
        grass: Option<usize>,
        flag: Option<Vec<u64>>,
        cap: usize,
    ) -> PyResult<u64> {
        let space = self.space(grass, flag)?;
        orbits::burnside_count(&self.inner, &space, cap).map_err(to_py_err)
    }
}

/// Number of k-dimensional subspaces of F_q^n.
#[pyfunction]
fn q_binomial(n: u64, k: u64, q: u64) -> BigUint {
    partitions::q_binomial(n, k, q)
}

/// Number of flags of the given shape in F_q^n.
#[pyfunction]
fn q_multinomial(terms: Vec<u64>, q: u64) -> BigUint {
    partitions::q_multinomial(&partitions::Composition::new(terms), q)
}

/// Dominance order: every prefix sum of lhs >= the matching one of rhs.
#[pyfunction]
fn dominance_geq(lhs: Vec<u64>, rhs: Vec<u64>) -> PyResult<bool> {
    partition(lhs)?
        .dominates(&partition(rhs)?)
        .map_err(to_py_err)
}

/// The conjugate partition.
#[pyfunction]
fn conjugate(parts: Vec<u64>) -> PyResult<Vec<u64>> {
    Ok(partition(parts)?.conjugate().parts().to_vec())
}

/// One raising-operator step: add 1 to part i, subtract 1 from part i+1,
/// re-sorted (0-based slot).
#[pyfunction]
fn raising(parts: Vec<u64>, i: usize) -> PyResult<Vec<u64>> {
    Ok(partition(parts)?
        .raising(i)
        .map_err(to_py_err)?
        .parts()
        .to_vec())
}

/// Raising-operator exponents carrying `from_parts` to `to_parts`, or None
/// when the target does not dominate the source.
#[pyfunction]
fn raising_witness(from_parts: Vec<u64>, to_parts: Vec<u64>) -> PyResult<Option<Vec<u64>>> {
    partitions::raising_witness(&partition(from_parts)?, &partition(to_parts)?)
        .map_err(to_py_err)
}

/// dim G(k, n) = k (n - k).
#[pyfunction]
fn grass_dim(k: u64, n: u64) -> PyResult<u64> {
    if k > n {
        return Err(PyValueError::new_err("k must be at most n"));
    }
    Ok(partitions::grass_dim(k, n))
}

/// dim of the flag variety of the given composition.
#[pyfunction]
fn flag_dim(terms: Vec<u64>) -> u64 {
    partitions::flag_dim(&partitions::Composition::new(terms))
}

/// All k-dimensional subspaces of F_p^n in lexicographic order.
#[pyfunction]
fn enumerate_subspaces(n: usize, k: usize, p: u64) -> PyResult<Vec<Subspace>> {
    Ok(subspaces::enumerate_subspaces(n, k, p)
        .map_err(to_py_err)?
        .into_iter()
        .map(|inner| Subspace { inner })
        .collect())
}

/// |Fl_a(F_p^n)| without materializing the flags.
#[pyfunction]
fn count_flags(terms: Vec<u64>, p: u64) -> PyResult<BigUint> {
    subspaces::count_flags(&partitions::Composition::new(terms), p).map_err(to_py_err)
}

/// Fixed-locus dimension dim (Fl_a)_g for any g whose skeleton has the given
/// blocks (one partition per anonymous eigenvalue).
#[pyfunction]
fn fixed_flag_dim(blocks: Vec<Vec<u64>>, comp: Vec<u64>) -> PyResult<u64> {
    let blocks = blocks
        .into_iter()
        .map(partition)
        .collect::<PyResult<Vec<_>>>()?;
    skeleton::Skeleton::new(blocks)
        .map_err(to_py_err)?
        .fixed_flag_dim(&partitions::Composition::new(comp))
        .map_err(to_py_err)
}

/// All skeletons of weight n, as lists of partition blocks.
#[pyfunction]
fn enumerate_skeletons(n: u64) -> Vec<Vec<Vec<u64>>> {
    skeleton::enumerate_skeletons(n)
        .into_iter()
        .map(|s| {
            s.blocks()
                .iter()
                .map(|b| b.effective_parts().to_vec())
                .collect()
        })
        .collect()
}

/// Number of flags of the given shape fixed by a unipotent of type `lam`
/// over F_p.
#[pyfunction]
fn unipotent_fixed_flag_count(lam: Vec<u64>, comp: Vec<u64>, p: u64) -> PyResult<BigUint> {
    let mut counter = skeleton::FixedFlagCounter::new(p).map_err(to_py_err)?;
    let count = counter
        .count(&partition(lam)?, &partitions::Composition::new(comp))
        .map_err(to_py_err)?;
    Ok(BigUint::from(count))
}

/// The intersection-count matrix A for levels (r, k) in F_p^n.
#[pyfunction]
fn build_a(n: usize, r: usize, k: usize, p: u64) -> PyResult<Vec<Vec<u64>>> {
    incidence::build_a(n, r, k, p).map_err(to_py_err)
}

/// The epsilon coefficients as exact `num/den` strings.
#[pyfunction]
fn solve_epsilon(n: usize, r: usize, k: usize, p: u64) -> PyResult<Vec<String>> {
    Ok(incidence::solve_epsilon(n, r, k, p)
        .map_err(to_py_err)?
        .coefficients()
        .iter()
        .map(rational_to_string)
        .collect())
}

/// True iff the retraction composed with the incidence transform is the
/// identity on level-r functions (exact rational check).
#[pyfunction]
fn check_transform(n: usize, r: usize, k: usize, p: u64) -> PyResult<bool> {
    incidence::check_transform(n, r, k, p).map_err(to_py_err)
}

#[pymodule]
#[pyo3(name = "orbit_atlas")]
fn bindings(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Subspace>()?;
    m.add_class::<GroupSpec>()?;
    m.add_class::<OrbitReport>()?;
    m.add_function(wrap_pyfunction!(q_binomial, m)?)?;
    m.add_function(wrap_pyfunction!(q_multinomial, m)?)?;
    m.add_function(wrap_pyfunction!(dominance_geq, m)?)?;
    m.add_function(wrap_pyfunction!(conjugate, m)?)?;
    m.add_function(wrap_pyfunction!(raising, m)?)?;
    m.add_function(wrap_pyfunction!(raising_witness, m)?)?;
    m.add_function(wrap_pyfunction!(grass_dim, m)?)?;
    m.add_function(wrap_pyfunction!(flag_dim, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_subspaces, m)?)?;
    m.add_function(wrap_pyfunction!(count_flags, m)?)?;
    m.add_function(wrap_pyfunction!(fixed_flag_dim, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_skeletons, m)?)?;
    m.add_function(wrap_pyfunction!(unipotent_fixed_flag_count, m)?)?;
    m.add_function(wrap_pyfunction!(build_a, m)?)?;
    m.add_function(wrap_pyfunction!(solve_epsilon, m)?)?;
    m.add_function(wrap_pyfunction!(check_transform, m)?)?;
    Ok(())
}
