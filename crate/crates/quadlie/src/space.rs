//! Super vector spaces, graded subspaces, homogeneous linear maps.

use crate::matrix::{svec_is_zero, svec_zero, Matrix, SVec};
use crate::scalar::Scalar;
use crate::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn plus(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }
}

/// (-1)^{|x||y|} as a "negate?" flag.
pub fn sign_pp(x: Parity, y: Parity) -> bool {
    x.is_odd() && y.is_odd()
}

/// A Z2-graded coordinate space: the first `even_dim` basis vectors are even,
/// the rest odd. Labels are cosmetic but must be distinct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperSpace {
    even_dim: usize,
    odd_dim: usize,
    labels: Vec<String>,
}

impl SuperSpace {
    pub fn new(even_dim: usize, odd_dim: usize) -> Self {
        let labels = (0..even_dim + odd_dim).map(|i| format!("e{i}")).collect();
        SuperSpace { even_dim, odd_dim, labels }
    }

    pub fn with_labels(even_dim: usize, odd_dim: usize, labels: Vec<String>) -> Result<Self> {
        if labels.len() != even_dim + odd_dim {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for dimension {}",
                labels.len(),
                even_dim + odd_dim
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l) {
                return Err(Error::Other(format!("duplicate basis label `{l}`")));
            }
        }
        Ok(SuperSpace { even_dim, odd_dim, labels })
    }

    pub fn dim(&self) -> usize {
        self.even_dim + self.odd_dim
    }

    pub fn even_dim(&self) -> usize {
        self.even_dim
    }

    pub fn odd_dim(&self) -> usize {
        self.odd_dim
    }

    pub fn parity(&self, i: usize) -> Parity {
        if i < self.even_dim {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Parity of a vector if homogeneous (zero counts as even).
    pub fn vector_parity(&self, v: &[Scalar]) -> Result<Parity> {
        let mut even = false;
        let mut odd = false;
        for (i, s) in v.iter().enumerate() {
            if !s.is_zero() {
                match self.parity(i) {
                    Parity::Even => even = true,
                    Parity::Odd => odd = true,
                }
            }
        }
        match (even, odd) {
            (true, true) => Err(Error::NotHomogeneous),
            (false, true) => Ok(Parity::Odd),
            _ => Ok(Parity::Even),
        }
    }

    pub fn unit(&self, i: usize) -> SVec {
        let mut v = svec_zero(self.dim());
        v[i] = Scalar::one();
        v
    }
}

/// A graded subspace held as a reduced row echelon basis.
///
/// Every row is homogeneous; pivots increase, so all even rows come first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: SuperSpace,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn from_generators(ambient: &SuperSpace, gens: &[SVec]) -> Result<Subspace> {
        if gens.is_empty() {
            return Ok(Subspace::zero(ambient));
        }
        for g in gens {
            if g.len() != ambient.dim() {
                return Err(Error::DimensionMismatch(format!(
                    "generator length {} in space of dimension {}",
                    g.len(),
                    ambient.dim()
                )));
            }
        }
        let (basis, pivots) = Matrix::from_rows(gens.to_vec()).rref();
        for r in 0..basis.rows() {
            if ambient.vector_parity(&basis.row(r)).is_err() {
                return Err(Error::NotGraded);
            }
        }
        Ok(Subspace { ambient: ambient.clone(), basis, pivots })
    }

    pub fn zero(ambient: &SuperSpace) -> Subspace {
        Subspace {
            ambient: ambient.clone(),
            basis: Matrix::zeros(0, ambient.dim()),
            pivots: vec![],
        }
    }

    pub fn full(ambient: &SuperSpace) -> Subspace {
        Subspace {
            ambient: ambient.clone(),
            basis: Matrix::identity(ambient.dim()),
            pivots: (0..ambient.dim()).collect(),
        }
    }

    pub fn ambient(&self) -> &SuperSpace {
        &self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn basis_rows(&self) -> Vec<SVec> {
        self.basis.row_vecs()
    }

    pub fn basis_matrix(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn row_parity(&self, r: usize) -> Parity {
        self.ambient.parity(self.pivots[r])
    }

    /// Reduces `v` modulo the subspace (eliminates all pivot coordinates).
    pub fn reduce(&self, v: &[Scalar]) -> SVec {
        let mut out = v.to_vec();
        for (r, &p) in self.pivots.iter().enumerate() {
            if !out[p].is_zero() {
                let factor = out[p].clone();
                for c in 0..out.len() {
                    out[c] = &out[c] - &(&factor * self.basis.at(r, c));
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        svec_is_zero(&self.reduce(v))
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis_rows().iter().all(|v| self.contains(v))
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coords_of(&self, v: &[Scalar]) -> Option<SVec> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    /// Rebuilds an ambient vector from echelon-basis coordinates.
    pub fn from_coords(&self, coords: &[Scalar]) -> SVec {
        assert_eq!(coords.len(), self.dim());
        let mut out = svec_zero(self.ambient.dim());
        for (r, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for j in 0..out.len() {
                out[j] = &out[j] + &(c * self.basis.at(r, j));
            }
        }
        out
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        let mut gens = self.basis_rows();
        gens.extend(other.basis_rows());
        Subspace::from_generators(&self.ambient, &gens)
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        // x in both spans: x = a*U = b*W; solve [U^T | -W^T] null space.
        let ut = self.basis.transpose();
        let wt = other.basis.transpose();
        let stacked = ut.hstack(&wt.neg());
        let mut gens = Vec::new();
        for k in stacked.kernel_basis() {
            let a = &k[..self.dim()];
            let mut v = svec_zero(self.ambient.dim());
            for (r, c) in a.iter().enumerate() {
                for j in 0..v.len() {
                    v[j] = &v[j] + &(c * self.basis.at(r, j));
                }
            }
            gens.push(v);
        }
        Subspace::from_generators(&self.ambient, &gens)
    }

    pub fn even_part(&self) -> Subspace {
        self.parity_part(Parity::Even)
    }

    pub fn odd_part(&self) -> Subspace {
        self.parity_part(Parity::Odd)
    }

    fn parity_part(&self, p: Parity) -> Subspace {
        let rows: Vec<SVec> = (0..self.dim())
            .filter(|&r| self.row_parity(r) == p)
            .map(|r| self.basis.row(r))
            .collect();
        Subspace::from_generators(&self.ambient, &rows).unwrap()
    }

    /// Ambient coordinates not used as pivots, in increasing order.
    /// The corresponding standard basis vectors span a graded complement.
    pub fn complement_coords(&self) -> Vec<usize> {
        let pivot_set: std::collections::HashSet<usize> = self.pivots.iter().copied().collect();
        (0..self.ambient.dim()).filter(|i| !pivot_set.contains(i)).collect()
    }
}

/// A homogeneous linear map between super spaces, stored as the matrix whose
/// column `j` is the image of the j-th domain basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    domain: SuperSpace,
    codomain: SuperSpace,
    parity: Parity,
    matrix: Matrix,
}

impl LinearMap {
    pub fn new(
        domain: SuperSpace,
        codomain: SuperSpace,
        parity: Parity,
        matrix: Matrix,
    ) -> Result<LinearMap> {
        if matrix.rows() != codomain.dim() || matrix.cols() != domain.dim() {
            return Err(Error::DimensionMismatch(format!(
                "map matrix {}x{} for spaces {} -> {}",
                matrix.rows(),
                matrix.cols(),
                domain.dim(),
                codomain.dim()
            )));
        }
        for i in 0..matrix.rows() {
            for j in 0..matrix.cols() {
                if !matrix.at(i, j).is_zero()
                    && codomain.parity(i) != domain.parity(j).plus(parity)
                {
                    return Err(Error::Validation(format!(
                        "entry ({i},{j}) violates the declared parity of the map"
                    )));
                }
            }
        }
        Ok(LinearMap { domain, codomain, parity, matrix })
    }

    pub fn zero(domain: SuperSpace, codomain: SuperSpace, parity: Parity) -> LinearMap {
        let m = Matrix::zeros(codomain.dim(), domain.dim());
        LinearMap { domain, codomain, parity, matrix: m }
    }

    pub fn identity(space: SuperSpace) -> LinearMap {
        let m = Matrix::identity(space.dim());
        LinearMap { domain: space.clone(), codomain: space, parity: Parity::Even, matrix: m }
    }

    pub fn domain(&self) -> &SuperSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &SuperSpace {
        &self.codomain
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn apply(&self, v: &[Scalar]) -> SVec {
        self.matrix.apply(v)
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// self after other: x -> self(other(x)).
    pub fn compose(&self, other: &LinearMap) -> LinearMap {
        assert_eq!(self.domain.dim(), other.codomain.dim(), "composition shape mismatch");
        LinearMap {
            domain: other.domain.clone(),
            codomain: self.codomain.clone(),
            parity: self.parity.plus(other.parity),
            matrix: self.matrix.mul(&other.matrix),
        }
    }

    pub fn add(&self, other: &LinearMap) -> LinearMap {
        assert_eq!(self.parity, other.parity, "sum of maps of different parity");
        LinearMap {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            parity: self.parity,
            matrix: self.matrix.add(&other.matrix),
        }
    }

    pub fn scale(&self, c: &Scalar) -> LinearMap {
        LinearMap {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            parity: self.parity,
            matrix: self.matrix.scale(c),
        }
    }

    pub fn neg(&self) -> LinearMap {
        self.scale(&-Scalar::one())
    }

    /// Supercommutator [A, B] = A B - (-1)^{|A||B|} B A of two endomorphisms.
    pub fn supercommutator(&self, other: &LinearMap) -> LinearMap {
        let ab = self.compose(other);
        let ba = other.compose(self);
        let sign = sign_pp(self.parity, other.parity);
        let m = if sign { ab.matrix.add(&ba.matrix) } else { ab.matrix.sub(&ba.matrix) };
        LinearMap {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            parity: self.parity.plus(other.parity),
            matrix: m,
        }
    }

    pub fn image(&self) -> Result<Subspace> {
        let cols: Vec<SVec> = (0..self.matrix.cols()).map(|c| self.matrix.col(c)).collect();
        Subspace::from_generators(&self.codomain, &cols)
    }

    pub fn kernel(&self) -> Result<Subspace> {
        Subspace::from_generators(&self.domain, &self.matrix.kernel_basis())
    }

    pub fn is_bijective(&self) -> bool {
        self.matrix.rows() == self.matrix.cols() && self.matrix.rank() == self.matrix.rows()
    }
}
