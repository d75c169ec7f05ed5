//! Random modules and hyperplane families for sweeps and property tests.

use rand::Rng;

use super::{GaloisModule, GalmodError, PointedConfiguration};
use crate::field::{Field, PrimeField};
use crate::linalg::{Matrix, Subspace};

pub fn random_invertible<R: Rng>(ell: u64, n: usize, rng: &mut R) -> Matrix {
    loop {
        let data = (0..n * n).map(|_| rng.gen_range(0..ell)).collect();
        let m = Matrix::new(ell, n, n, data);
        if m.determinant() != 0 {
            return m;
        }
    }
}

fn random_functionals<R: Rng>(ell: u64, len: usize, count: usize, support: usize, rng: &mut R) -> Vec<Vec<u64>> {
    loop {
        let rows: Vec<Vec<u64>> = (0..count)
            .map(|_| (0..len).map(|i| if i < support { rng.gen_range(0..ell) } else { 0 }).collect())
            .collect();
        if count == 0 || Matrix::from_rows(ell, &rows).rank() == count {
            return rows;
        }
    }
}

/// `n` hyperplanes of F_ℓ^N with independent defining functionals.
pub fn random_independent_hyperplanes<R: Rng>(ell: u64, dim: usize, n: usize, rng: &mut R) -> Vec<Subspace> {
    assert!(n <= dim, "at most N independent hyperplanes");
    random_functionals(ell, dim, n, dim, rng)
        .iter()
        .map(|f| Subspace::from_functionals(ell, dim, std::slice::from_ref(f)))
        .collect()
}

/// Kernels of `f·C⁻¹` for functionals `f`, i.e. hyperplanes transported by `C`.
fn transported_hyperplanes(ell: u64, dim: usize, functionals: &[Vec<u64>], c_inv: &Matrix) -> Vec<Subspace> {
    functionals
        .iter()
        .map(|f| {
            let row = Matrix::from_rows(ell, std::slice::from_ref(f)).mul(c_inv);
            Subspace::from_functionals(ell, dim, &row.to_rows())
        })
        .collect()
}

/// A block of order prime to ℓ with no nonzero fixed vector when possible:
/// a scalar from F_ℓ^* (ℓ > 2) or the companion matrix of `x² + x + 1`
/// (order 3) or `x² + 1` (order 4, used for ℓ = 3).
fn coprime_block<R: Rng>(ell: u64, size: usize, rng: &mut R) -> Matrix {
    if size == 1 {
        let c = if ell == 2 { 1 } else { rng.gen_range(1..ell) };
        return Matrix::new(ell, 1, 1, vec![c]);
    }
    let f = PrimeField::new(ell).unwrap();
    // companion of x² − t·x + d
    let (t, d) = if ell == 3 { (0, 1) } else { (f.neg(&1), 1) };
    Matrix::from_rows(ell, &[vec![0, f.neg(&d)], vec![1, t]])
}

/// A semisimple module on F_ℓ^{2g} with `n` pointed hyperplanes of order n.
///
/// The generators are `C·diag(I_t, D)·C⁻¹` where `D` ranges over powers of
/// block matrices of order prime to ℓ, so the group is abelian of order
/// prime to ℓ; the hyperplanes are kernels of functionals supported on the
/// trivial block.
pub fn random_semisimple_pointed<R: Rng>(ell: u64, g: usize, n: usize, rng: &mut R) -> Result<PointedConfiguration, GalmodError> {
    let dim = 2 * g;
    if n > dim {
        return Err(GalmodError::Dimension(format!("{n} independent hyperplanes do not fit in dimension {dim}")));
    }
    let t = rng.gen_range(n.max(1)..=dim).max(n);
    let mut blocks: Vec<Matrix> = Vec::new();
    let mut left = dim - t;
    while left > 0 {
        let size = if left >= 2 && (ell == 2 || rng.gen_bool(0.5)) { 2 } else { 1 };
        if ell == 2 && size == 1 {
            // the only 1×1 block over F_2 is trivial
            blocks.push(Matrix::identity(ell, 1));
        } else {
            blocks.push(coprime_block(ell, size, rng));
        }
        left -= size;
    }
    let c = random_invertible(ell, dim, rng);
    let c_inv = c.inverse().unwrap();
    let gens = (0..rng.gen_range(1..=3))
        .map(|_| {
            let d = blocks.iter().fold(Matrix::identity(ell, t), |acc, b| acc.block_diag(&b.pow(rng.gen_range(1..12))));
            c.mul(&d).mul(&c_inv)
        })
        .collect();
    let module = GaloisModule::new(ell, dim, gens)?;
    let functionals = random_functionals(ell, dim, n, t, rng);
    PointedConfiguration::new(module, transported_hyperplanes(ell, dim, &functionals, &c_inv))
}

/// A single generator `C·[[I_n, 0], [X, Y]]·C⁻¹` with `n` pointed
/// hyperplanes of order n; usually not semisimple.
pub fn random_cyclic_pointed<R: Rng>(ell: u64, g: usize, n: usize, rng: &mut R) -> Result<PointedConfiguration, GalmodError> {
    let dim = 2 * g;
    if n == 0 || n > dim {
        return Err(GalmodError::Dimension(format!("need 1 <= n <= {dim}")));
    }
    let y = random_invertible(ell, dim - n, rng);
    let mut m = Matrix::identity(ell, dim);
    for r in n..dim {
        for c in 0..dim {
            let v = if c < n { rng.gen_range(0..ell) } else { y.get(r - n, c - n) };
            m.set(r, c, v);
        }
    }
    let c = random_invertible(ell, dim, rng);
    let c_inv = c.inverse().unwrap();
    let module = GaloisModule::new(ell, dim, vec![c.mul(&m).mul(&c_inv)])?;
    let functionals: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut e = vec![0; dim];
            e[i] = 1;
            e
        })
        .collect();
    PointedConfiguration::new(module, transported_hyperplanes(ell, dim, &functionals, &c_inv))
}

/// `M ⊕ M` over F₃ with `M` generated by `[[2,0],[0,1]]` and
/// `[[1,1],[0,1]]`, and the two hyperplanes `H ⊕ F₃²`, `F₃² ⊕ H` for
/// `H = span{e₁}`: pointed, of order 2, not semisimple, and without
/// nonzero fixed vectors.
pub fn necessity_witness() -> PointedConfiguration {
    let ell = 3;
    let m = GaloisModule::new(
        ell,
        2,
        vec![
            Matrix::from_i64_rows(ell, &[&[2, 0], &[0, 1]]),
            Matrix::from_i64_rows(ell, &[&[1, 1], &[0, 1]]),
        ],
    )
    .unwrap();
    let mm = super::product_module(&m, &m).unwrap();
    let h = Subspace::span(ell, 2, &[vec![1, 0]]);
    let full = Subspace::full(ell, 2);
    let hyperplanes = vec![super::direct_sum(&h, &full), super::direct_sum(&full, &h)];
    PointedConfiguration::new(mm, hyperplanes).expect("witness is pointed")
}
