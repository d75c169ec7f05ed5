//! Finitely generated matrix groups over F_ℓ acting on F_ℓ^N: invariant
//! subspaces, semisimplicity, invariant complements, hyperplane lattices and
//! the construction of fixed vectors from pointed hyperplane families.

mod random;
mod record;

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use crate::field::{is_prime, Field, Poly, PrimeField};
use crate::linalg::{all_vectors, Matrix, Subspace};

pub use random::{
    necessity_witness, random_cyclic_pointed, random_independent_hyperplanes, random_invertible,
    random_semisimple_pointed,
};
pub use record::{HyperplaneRecord, MatrixRecord, ModuleRecord};

/// Default cap on the size of an enumerated group closure.
pub const CLOSURE_CAP: usize = 100_000;
/// Exhaustive subspace searches are limited to ambient spaces of at most
/// this many vectors (3⁶).
pub const EXHAUSTIVE_CAP: usize = 729;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GalmodError {
    #[error("{0} is not prime")]
    BadEll(u64),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("generator {0} is not invertible")]
    NotInvertible(usize),
    #[error("subspace is not invariant under the module")]
    NotInvariant,
    #[error("module is not semisimple: {0}")]
    NotSemisimple(String),
    #[error("generator lists are not aligned ({0} vs {1})")]
    Misaligned(usize, usize),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("capability exceeded: {0}")]
    Capability(String),
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
}

/// F_ℓ^N with the action of the group generated by `generators`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisModule {
    ell: u64,
    dim: usize,
    generators: Vec<Matrix>,
}

impl GaloisModule {
    /// Validated constructor: ℓ prime, N even and ≥ 2, generators invertible
    /// N×N matrices.
    pub fn new(ell: u64, dim: usize, generators: Vec<Matrix>) -> Result<Self, GalmodError> {
        if dim < 2 || !dim.is_multiple_of(2) {
            return Err(GalmodError::Dimension(format!("module dimension {dim} must be even and at least 2")));
        }
        Self::with_any_dim(ell, dim, generators)
    }

    /// As [`GaloisModule::new`] without the parity requirement; used for
    /// restrictions to invariant subspaces.
    pub fn with_any_dim(ell: u64, dim: usize, generators: Vec<Matrix>) -> Result<Self, GalmodError> {
        if !is_prime(ell) {
            return Err(GalmodError::BadEll(ell));
        }
        for (i, g) in generators.iter().enumerate() {
            if g.ell() != ell || g.rows() != dim || g.cols() != dim {
                return Err(GalmodError::Dimension(format!("generator {i} is not a {dim}×{dim} matrix mod {ell}")));
            }
            if g.determinant() == 0 {
                return Err(GalmodError::NotInvertible(i));
            }
        }
        Ok(Self { ell, dim, generators })
    }

    pub fn trivial(ell: u64, dim: usize) -> Result<Self, GalmodError> {
        Self::new(ell, dim, vec![Matrix::identity(ell, dim)])
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    fn check_subspace(&self, v: &Subspace) -> Result<(), GalmodError> {
        if v.ell() != self.ell || v.ambient() != self.dim {
            return Err(GalmodError::Dimension(format!(
                "subspace of F_{}^{} in a module over F_{}^{}",
                v.ell(),
                v.ambient(),
                self.ell,
                self.dim
            )));
        }
        Ok(())
    }
}

/// `⋂_g ker(g − I)`.
pub fn fixed_subspace(m: &GaloisModule) -> Subspace {
    let id = Matrix::identity(m.ell, m.dim);
    let rows: Vec<Vec<u64>> = m.generators.iter().flat_map(|g| g.sub(&id).to_rows()).collect();
    Subspace::from_functionals(m.ell, m.dim, &rows)
}

pub fn is_invariant(m: &GaloisModule, v: &Subspace) -> Result<bool, GalmodError> {
    m.check_subspace(v)?;
    Ok(invariant_unchecked(m, v))
}

fn invariant_unchecked(m: &GaloisModule, v: &Subspace) -> bool {
    m.generators.iter().all(|g| v.basis().iter().all(|b| v.contains(&g.apply(b))))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Closure {
    /// Every element of the generated group, sorted.
    Complete(Vec<Matrix>),
    /// The group has more than `cap` elements.
    Overflow { cap: usize },
}

impl Closure {
    pub fn elements(&self) -> Option<&[Matrix]> {
        match self {
            Closure::Complete(v) => Some(v),
            Closure::Overflow { .. } => None,
        }
    }
}

/// The group generated by the module's generators, by breadth-first search.
pub fn group_closure(m: &GaloisModule, cap: usize) -> Closure {
    let id = Matrix::identity(m.ell, m.dim);
    let mut seen: HashSet<Matrix> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in &m.generators {
            let y = g.mul(&x);
            if seen.insert(y.clone()) {
                if seen.len() > cap {
                    return Closure::Overflow { cap };
                }
                queue.push_back(y);
            }
        }
    }
    let mut out: Vec<Matrix> = seen.into_iter().collect();
    out.sort();
    Closure::Complete(out)
}

/// Minimal polynomial of a square matrix, monic, coefficients low to high.
pub fn minimal_polynomial(g: &Matrix) -> Poly<u64> {
    let ell = g.ell();
    let n = g.rows();
    let f = PrimeField::new(ell).expect("prime ℓ");
    let mut powers = vec![Matrix::identity(ell, n)];
    loop {
        let d = powers.len();
        let next = powers.last().unwrap().mul(g);
        // columns: vec(g^0), …, vec(g^d)
        let mut cols: Vec<Vec<u64>> = powers.iter().map(|p| p.to_rows().concat()).collect();
        cols.push(next.to_rows().concat());
        let kernel = Matrix::from_columns(ell, n * n, &cols).kernel();
        if let Some(v) = kernel.first() {
            // the kernel is one-dimensional with v[d] ≠ 0 since g^0..g^{d−1} are independent
            return Poly::new(&f, v.clone()).monic(&f);
        }
        powers.push(next);
        debug_assert!(d <= n);
    }
}

/// Whether every invariant subspace has an invariant complement.
///
/// Strategies, in order: group order prime to ℓ; a single generator with
/// squarefree minimal polynomial test; exhaustive search when the ambient
/// space has at most [`EXHAUSTIVE_CAP`] vectors.
pub fn is_semisimple(m: &GaloisModule) -> Result<bool, GalmodError> {
    is_semisimple_with_cap(m, CLOSURE_CAP)
}

pub fn is_semisimple_with_cap(m: &GaloisModule, closure_cap: usize) -> Result<bool, GalmodError> {
    if let Closure::Complete(g) = group_closure(m, closure_cap) {
        if !(g.len() as u64).is_multiple_of(m.ell) {
            return Ok(true);
        }
    }
    let nontrivial: Vec<&Matrix> = m.generators.iter().filter(|g| !g.is_identity()).collect();
    match nontrivial.len() {
        0 => return Ok(true),
        1 => {
            let f = PrimeField::new(m.ell).unwrap();
            let mp = minimal_polynomial(nontrivial[0]);
            return Ok(mp.gcd(&mp.derivative(&f), &f).degree() == Some(0));
        }
        _ => {}
    }
    if !exhaustive_feasible(m) {
        return Err(GalmodError::Capability(format!(
            "semisimplicity undecided: group closure not coprime to ℓ and ℓ^N exceeds the exhaustive cap {EXHAUSTIVE_CAP}"
        )));
    }
    let inv = enumerate_invariant_subspaces(m)?;
    Ok(inv.iter().all(|v| exhaustive_complement(m, &inv, v).is_some()))
}

fn exhaustive_feasible(m: &GaloisModule) -> bool {
    (m.ell as f64).powi(m.dim as i32) <= EXHAUSTIVE_CAP as f64
}

fn exhaustive_complement(m: &GaloisModule, invariant: &[Subspace], v: &Subspace) -> Option<Subspace> {
    let want = m.dim - v.dim();
    invariant.iter().find(|w| w.dim() == want && v.intersect(w).is_zero()).cloned()
}

/// Every subspace of F_ℓ^N in echelon order, by dimension.
pub fn all_subspaces(ell: u64, n: usize) -> Vec<Subspace> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let pivots: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        // free positions: (row, col) with col > pivot, col not a pivot
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &pc)| ((pc + 1)..n).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
            .collect();
        for values in all_vectors(ell, free.len()) {
            let mut rows = vec![vec![0u64; n]; pivots.len()];
            for (r, &pc) in pivots.iter().enumerate() {
                rows[r][pc] = 1;
            }
            for (&(r, c), v) in free.iter().zip(&values) {
                rows[r][c] = *v;
            }
            out.push(Subspace::span(ell, n, &rows));
        }
    }
    out.sort_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| a.cmp(b)));
    out
}

/// All invariant subspaces (oracle), refused above [`EXHAUSTIVE_CAP`].
pub fn enumerate_invariant_subspaces(m: &GaloisModule) -> Result<Vec<Subspace>, GalmodError> {
    if !exhaustive_feasible(m) {
        return Err(GalmodError::Capability(format!(
            "invariant subspace enumeration limited to ℓ^N <= {EXHAUSTIVE_CAP}"
        )));
    }
    Ok(all_subspaces(m.ell, m.dim).into_iter().filter(|v| invariant_unchecked(m, v)).collect())
}

/// A projector onto `v` along the echelon complement of `v`.
fn echelon_projector(v: &Subspace) -> Matrix {
    let (ell, n) = (v.ell(), v.ambient());
    let comp = v.echelon_complement();
    let mut cols: Vec<Vec<u64>> = v.basis().to_vec();
    cols.extend(comp.basis().iter().cloned());
    let b = Matrix::from_columns(ell, n, &cols);
    let mut d = Matrix::zero(ell, n, n);
    for i in 0..v.dim() {
        d.set(i, i, 1);
    }
    b.mul(&d).mul(&b.inverse().expect("basis plus complement is a basis"))
}

/// `|G|⁻¹ Σ_g g·π₀·g⁻¹` for the echelon projector `π₀` onto `v`; requires a
/// complete closure of order prime to ℓ.
pub fn maschke_projector(m: &GaloisModule, v: &Subspace) -> Result<Matrix, GalmodError> {
    m.check_subspace(v)?;
    if !invariant_unchecked(m, v) {
        return Err(GalmodError::NotInvariant);
    }
    let group = match group_closure(m, CLOSURE_CAP) {
        Closure::Complete(g) if !(g.len() as u64).is_multiple_of(m.ell) => g,
        Closure::Complete(g) => {
            return Err(GalmodError::Precondition(format!("group order {} is divisible by ℓ", g.len())))
        }
        Closure::Overflow { cap } => return Err(GalmodError::Capability(format!("group closure exceeds {cap} elements"))),
    };
    let f = PrimeField::new(m.ell).unwrap();
    let p0 = echelon_projector(v);
    let mut sum = Matrix::zero(m.ell, m.dim, m.dim);
    for g in &group {
        sum = sum.add(&g.mul(&p0).mul(&g.inverse().unwrap()));
    }
    let scale = f.inv(&((group.len() as u64) % m.ell)).unwrap();
    Ok(sum.scale(scale))
}

/// An invariant `W` with `V ⊕ W = F_ℓ^N`: Maschke averaging when the group
/// order is prime to ℓ, otherwise exhaustive search.
pub fn invariant_complement(m: &GaloisModule, v: &Subspace) -> Result<Subspace, GalmodError> {
    m.check_subspace(v)?;
    if !invariant_unchecked(m, v) {
        return Err(GalmodError::NotInvariant);
    }
    match maschke_projector(m, v) {
        Ok(pi) => {
            let w = Subspace::span(m.ell, m.dim, &pi.kernel());
            if w.dim() + v.dim() != m.dim || !v.intersect(&w).is_zero() || !invariant_unchecked(m, &w) {
                return Err(GalmodError::TheoremViolation("averaged projector does not give an invariant complement".into()));
            }
            Ok(w)
        }
        Err(GalmodError::Precondition(_)) | Err(GalmodError::Capability(_)) => {
            if !exhaustive_feasible(m) {
                return Err(GalmodError::Capability(format!(
                    "no averaging available and ℓ^N exceeds the exhaustive cap {EXHAUSTIVE_CAP}"
                )));
            }
            let inv = enumerate_invariant_subspaces(m)?;
            exhaustive_complement(m, &inv, v)
                .ok_or_else(|| GalmodError::NotSemisimple("invariant subspace without invariant complement".into()))
        }
        Err(e) => Err(e),
    }
}

/// The module restricted to an invariant subspace, in its echelon basis.
fn restrict(m: &GaloisModule, outer: &Subspace) -> Result<GaloisModule, GalmodError> {
    let gens = m
        .generators
        .iter()
        .map(|g| {
            let cols: Vec<Vec<u64>> = outer
                .basis()
                .iter()
                .map(|b| outer.coordinates(&g.apply(b)).ok_or(GalmodError::NotInvariant))
                .collect::<Result<_, _>>()?;
            Ok(Matrix::from_columns(m.ell, outer.dim(), &cols))
        })
        .collect::<Result<Vec<_>, GalmodError>>()?;
    GaloisModule::with_any_dim(m.ell, outer.dim(), gens)
}

/// An invariant `W` with `inner ⊕ W = outer`.
pub fn relative_invariant_complement(m: &GaloisModule, inner: &Subspace, outer: &Subspace) -> Result<Subspace, GalmodError> {
    m.check_subspace(inner)?;
    m.check_subspace(outer)?;
    if !inner.is_subspace_of(outer) {
        return Err(GalmodError::Precondition("inner subspace is not contained in outer".into()));
    }
    if !invariant_unchecked(m, inner) || !invariant_unchecked(m, outer) {
        return Err(GalmodError::NotInvariant);
    }
    if inner.dim() == outer.dim() {
        return Ok(Subspace::zero(m.ell, m.dim));
    }
    let sub = restrict(m, outer)?;
    let inner_coords: Vec<Vec<u64>> = inner.basis().iter().map(|b| outer.coordinates(b).unwrap()).collect();
    let inner_sub = Subspace::span(m.ell, outer.dim(), &inner_coords);
    let w_coords = invariant_complement(&sub, &inner_sub)?;
    let f = PrimeField::new(m.ell).unwrap();
    let vectors: Vec<Vec<u64>> = w_coords
        .basis()
        .iter()
        .map(|c| {
            let mut v = vec![0; m.dim];
            for (coef, b) in c.iter().zip(outer.basis()) {
                for (x, y) in v.iter_mut().zip(b) {
                    *x = f.add(x, &f.mul(coef, y));
                }
            }
            v
        })
        .collect();
    Ok(Subspace::span(m.ell, m.dim, &vectors))
}

/// `H_J = ⋂_{j∈J} H_j` for every nonempty `J`, keyed by bitmask (bit i for
/// hyperplane i).
pub fn subspace_lattice(hyperplanes: &[Subspace]) -> BTreeMap<u64, Subspace> {
    assert!(hyperplanes.len() < 64, "lattice limited to 63 hyperplanes");
    let mut out = BTreeMap::new();
    for mask in 1u64..(1 << hyperplanes.len()) {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let h = if rest == 0 { hyperplanes[low].clone() } else { out.get(&rest).map(|r: &Subspace| r.intersect(&hyperplanes[low])).unwrap() };
        out.insert(mask, h);
    }
    out
}

/// Intersection of the hyperplanes selected by `mask`; the ambient space for
/// the empty selection.
pub fn lattice_element(hyperplanes: &[Subspace], mask: u64) -> Subspace {
    let (ell, n) = (hyperplanes[0].ell(), hyperplanes[0].ambient());
    (0..hyperplanes.len())
        .filter(|i| mask >> i & 1 == 1)
        .fold(Subspace::full(ell, n), |acc, i| acc.intersect(&hyperplanes[i]))
}

/// The order of a hyperplane family: the rank of its defining functionals,
/// i.e. the largest m such that some m of them satisfy
/// `dim H_J = N − #J` for every subset J.
pub fn graph_order(hyperplanes: &[Subspace]) -> usize {
    let Some(first) = hyperplanes.first() else { return 0 };
    let functionals: Vec<Vec<u64>> = hyperplanes.iter().flat_map(|h| h.annihilator()).collect();
    if functionals.is_empty() {
        return 0;
    }
    Matrix::from_rows(first.ell(), &functionals).rank()
}

/// Whether the action on `F_ℓ^N / H` is trivial: `(g − I)(F_ℓ^N) ⊆ H`.
pub fn pointedness_check(m: &GaloisModule, h: &Subspace) -> Result<bool, GalmodError> {
    m.check_subspace(h)?;
    if !invariant_unchecked(m, h) {
        return Err(GalmodError::NotInvariant);
    }
    let id = Matrix::identity(m.ell, m.dim);
    Ok(m.generators.iter().all(|g| {
        let d = g.sub(&id);
        (0..m.dim).all(|c| h.contains(&d.column(c)))
    }))
}

/// `diag(g₁, g₂)` generator by generator.
pub fn product_module(m1: &GaloisModule, m2: &GaloisModule) -> Result<GaloisModule, GalmodError> {
    if m1.ell != m2.ell {
        return Err(GalmodError::Dimension(format!("ℓ differs: {} vs {}", m1.ell, m2.ell)));
    }
    if m1.generators.len() != m2.generators.len() {
        return Err(GalmodError::Misaligned(m1.generators.len(), m2.generators.len()));
    }
    let gens = m1.generators.iter().zip(&m2.generators).map(|(a, b)| a.block_diag(b)).collect();
    GaloisModule::with_any_dim(m1.ell, m1.dim + m2.dim, gens)
}

/// `V ⊕ W` inside the product of the ambient spaces.
pub fn direct_sum(v: &Subspace, w: &Subspace) -> Subspace {
    let (n1, n2) = (v.ambient(), w.ambient());
    let mut rows: Vec<Vec<u64>> = v.basis().iter().map(|b| [b.clone(), vec![0; n2]].concat()).collect();
    rows.extend(w.basis().iter().map(|b| [vec![0; n1], b.clone()].concat()));
    Subspace::span(v.ell(), n1 + n2, &rows)
}

/// A module together with n invariant hyperplanes with trivial quotient
/// action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedConfiguration {
    pub module: GaloisModule,
    pub hyperplanes: Vec<Subspace>,
}

impl PointedConfiguration {
    /// Checks hyperplane dimension, invariance and pointedness.
    pub fn new(module: GaloisModule, hyperplanes: Vec<Subspace>) -> Result<Self, GalmodError> {
        for h in &hyperplanes {
            module.check_subspace(h)?;
            if h.dim() + 1 != module.dim {
                return Err(GalmodError::Dimension(format!("hyperplane of dimension {} in dimension {}", h.dim(), module.dim)));
            }
            if !pointedness_check(&module, h)? {
                return Err(GalmodError::Precondition("quotient action on a hyperplane is not trivial".into()));
            }
        }
        Ok(Self { module, hyperplanes })
    }

    pub fn order(&self) -> usize {
        graph_order(&self.hyperplanes)
    }
}

/// For a semisimple pointed configuration of order n, n independent vectors
/// fixed by the module: `Q_i` is the echelon basis vector of the invariant
/// complement `W_i` of `H_I` in `H_{I∖i}`.
pub fn theorem2_construct(cfg: &PointedConfiguration) -> Result<Vec<Vec<u64>>, GalmodError> {
    let m = &cfg.module;
    let hs = &cfg.hyperplanes;
    let n = hs.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    for h in hs {
        if !pointedness_check(m, h)? {
            return Err(GalmodError::Precondition("configuration is not pointed".into()));
        }
    }
    let order = graph_order(hs);
    if order != n {
        return Err(GalmodError::Precondition(format!("graph order {order} is less than {n}")));
    }
    if !is_semisimple(m)? {
        return Err(GalmodError::NotSemisimple("module has an invariant subspace without invariant complement".into()));
    }
    let full_mask = (1u64 << n) - 1;
    let h_all = lattice_element(hs, full_mask);
    let mut qs = Vec::with_capacity(n);
    for i in 0..n {
        let outer = lattice_element(hs, full_mask & !(1 << i));
        let w = relative_invariant_complement(m, &h_all, &outer)?;
        if w.dim() != 1 {
            return Err(GalmodError::TheoremViolation(format!("W_{} has dimension {}", i + 1, w.dim())));
        }
        qs.push(w.basis()[0].clone());
    }
    let fixed = fixed_subspace(m);
    for (i, q) in qs.iter().enumerate() {
        if m.generators.iter().any(|g| g.apply(q) != *q) || !fixed.contains(q) {
            return Err(GalmodError::TheoremViolation(format!("Q_{} is not fixed", i + 1)));
        }
    }
    if Matrix::from_rows(m.ell, &qs).rank() != n {
        return Err(GalmodError::TheoremViolation("the Q_i are linearly dependent".into()));
    }
    Ok(qs)
}

/// Brute-force fixed vectors (oracle).
pub fn fixed_vectors_brute_force(m: &GaloisModule) -> Vec<Vec<u64>> {
    all_vectors(m.ell, m.dim).filter(|v| m.generators.iter().all(|g| g.apply(v) == *v)).collect()
}

/// Brute-force graph order (oracle): the largest m such that some m-subset
/// has `dim H_J = N − #J` for all of its subsets.
pub fn graph_order_brute_force(hyperplanes: &[Subspace]) -> usize {
    let n = hyperplanes.len();
    if n == 0 {
        return 0;
    }
    let amb = hyperplanes[0].ambient();
    let good: BTreeSet<u64> = (0u64..(1 << n))
        .filter(|&mask| {
            // every subset of mask satisfies the codimension formula
            let mut sub = mask;
            loop {
                let dim = lattice_element(hyperplanes, sub).dim();
                if dim + sub.count_ones() as usize != amb {
                    return false;
                }
                if sub == 0 {
                    return true;
                }
                sub = (sub - 1) & mask;
            }
        })
        .collect();
    good.iter().map(|m| m.count_ones() as usize).max().unwrap_or(0)
}
