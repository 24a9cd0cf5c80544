//! Graded vector spaces, graded maps and finite cochain complexes over an
//! exact field, with cohomology and coboundary solving.

pub mod field;
pub mod matrix;

use std::collections::{BTreeMap, BTreeSet};

pub use field::{Field, Scalar};
pub use matrix::Matrix;

use crate::error::{Error, Result};

/// A graded space with finite support and one label per basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSpace {
    field: Field,
    labels: BTreeMap<i32, Vec<String>>,
}

impl GradedSpace {
    pub fn new(field: Field, labels: BTreeMap<i32, Vec<String>>) -> Result<GradedSpace> {
        let mut labels = labels;
        labels.retain(|_, v| !v.is_empty());
        for (deg, names) in &labels {
            let unique: BTreeSet<&String> = names.iter().collect();
            if unique.len() != names.len() {
                return Err(Error::Shape(format!("duplicate label in degree {deg}")));
            }
        }
        Ok(GradedSpace { field, labels })
    }

    pub fn zero(field: Field) -> GradedSpace {
        GradedSpace {
            field,
            labels: BTreeMap::new(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self, degree: i32) -> usize {
        self.labels.get(&degree).map_or(0, Vec::len)
    }

    pub fn total_dim(&self) -> usize {
        self.labels.values().map(Vec::len).sum()
    }

    pub fn labels(&self, degree: i32) -> &[String] {
        self.labels.get(&degree).map_or(&[], Vec::as_slice)
    }

    /// Degrees with nonzero dimension, increasing.
    pub fn support(&self) -> impl Iterator<Item = i32> + '_ {
        self.labels.keys().copied()
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.labels.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.labels.keys().next_back().copied()
    }

    pub fn zero_vector(&self, degree: i32) -> GradedVector {
        GradedVector::zero(self.field, degree, self.dim(degree))
    }

    pub fn basis_vector(&self, degree: i32, index: usize) -> GradedVector {
        let mut v = self.zero_vector(degree);
        v.coords[index] = self.field.one();
        v
    }
}

/// A homogeneous vector: coordinates in one degree of some graded space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedVector {
    pub degree: i32,
    pub coords: Vec<Scalar>,
}

impl GradedVector {
    pub fn zero(field: Field, degree: i32, dim: usize) -> GradedVector {
        GradedVector {
            degree,
            coords: vec![field.zero(); dim],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Scalar::is_zero)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// `self += c · other`.
    pub fn axpy(&mut self, c: &Scalar, other: &GradedVector) -> Result<()> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        if self.coords.len() != other.coords.len() {
            return Err(Error::Shape(format!(
                "adding vectors of length {} and {}",
                self.coords.len(),
                other.coords.len()
            )));
        }
        if c.is_zero() {
            return Ok(());
        }
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            if !b.is_zero() {
                *a = &*a + &(c * b);
            }
        }
        Ok(())
    }

    pub fn scaled(&self, c: &Scalar) -> GradedVector {
        GradedVector {
            degree: self.degree,
            coords: self.coords.iter().map(|x| c * x).collect(),
        }
    }
}

/// A linear map of graded spaces raising degree by `shift`. A missing block
/// is the zero map in that degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    source: GradedSpace,
    target: GradedSpace,
    shift: i32,
    blocks: BTreeMap<i32, Matrix>,
}

impl GradedMap {
    pub fn new(
        source: GradedSpace,
        target: GradedSpace,
        shift: i32,
        blocks: BTreeMap<i32, Matrix>,
    ) -> Result<GradedMap> {
        for (&j, block) in &blocks {
            if source.dim(j) == 0 {
                return Err(Error::Shape(format!(
                    "block in degree {j} outside the source support"
                )));
            }
            let expected = (target.dim(j + shift), source.dim(j));
            if block.shape() != expected {
                return Err(Error::Shape(format!(
                    "block in degree {j} has shape {:?}, expected {:?}",
                    block.shape(),
                    expected
                )));
            }
        }
        Ok(GradedMap {
            source,
            target,
            shift,
            blocks,
        })
    }

    pub fn source(&self) -> &GradedSpace {
        &self.source
    }

    pub fn target(&self) -> &GradedSpace {
        &self.target
    }

    pub fn shift(&self) -> i32 {
        self.shift
    }

    pub fn block(&self, degree: i32) -> Option<&Matrix> {
        self.blocks.get(&degree)
    }

    /// The block in `degree` as an explicit (possibly zero) matrix.
    pub fn dense_block(&self, degree: i32) -> Matrix {
        self.blocks.get(&degree).cloned().unwrap_or_else(|| {
            Matrix::zeros(
                self.source.field(),
                self.target.dim(degree + self.shift),
                self.source.dim(degree),
            )
        })
    }

    pub fn apply(&self, v: &GradedVector) -> Result<GradedVector> {
        if v.dim() != self.source.dim(v.degree) {
            return Err(Error::Shape(format!(
                "vector of length {} in degree {} of a space of dimension {}",
                v.dim(),
                v.degree,
                self.source.dim(v.degree)
            )));
        }
        let out_degree = v.degree + self.shift;
        match self.blocks.get(&v.degree) {
            None => Ok(self.target.zero_vector(out_degree)),
            Some(m) => Ok(GradedVector {
                degree: out_degree,
                coords: m.mul_vec(&v.coords)?,
            }),
        }
    }
}

/// A finite cochain complex; the differential has shift +1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    differential: GradedMap,
}

impl Complex {
    /// Builds a complex, rejecting `d ∘ d ≠ 0`.
    pub fn new(space: GradedSpace, blocks: BTreeMap<i32, Matrix>) -> Result<Complex> {
        let c = Complex::from_parts(space, blocks)?;
        if let Some((j, _)) = c.d_squared_defects().first() {
            return Err(Error::Shape(format!("d∘d ≠ 0 starting in degree {j}")));
        }
        Ok(c)
    }

    /// Builds a complex checking only block shapes; `d ∘ d` may be nonzero.
    pub fn from_parts(space: GradedSpace, blocks: BTreeMap<i32, Matrix>) -> Result<Complex> {
        let differential = GradedMap::new(space.clone(), space, 1, blocks)?;
        Ok(Complex { differential })
    }

    pub fn zero(field: Field) -> Complex {
        Complex {
            differential: GradedMap {
                source: GradedSpace::zero(field),
                target: GradedSpace::zero(field),
                shift: 1,
                blocks: BTreeMap::new(),
            },
        }
    }

    pub fn space(&self) -> &GradedSpace {
        &self.differential.source
    }

    pub fn field(&self) -> Field {
        self.space().field()
    }

    pub fn differential(&self) -> &GradedMap {
        &self.differential
    }

    /// `d_j : C^j → C^{j+1}` as an explicit matrix.
    pub fn d_matrix(&self, degree: i32) -> Matrix {
        self.differential.dense_block(degree)
    }

    pub fn d(&self, v: &GradedVector) -> Result<GradedVector> {
        self.differential.apply(v)
    }

    /// Pairs `(j, column)` such that `d_{j+1} d_j e_column ≠ 0`.
    pub fn d_squared_defects(&self) -> Vec<(i32, usize)> {
        let mut out = Vec::new();
        for j in self.space().support() {
            let dd = self
                .d_matrix(j + 1)
                .mul(&self.d_matrix(j))
                .expect("shapes agree by construction");
            for col in 0..dd.cols() {
                if dd.column(col).iter().any(|x| !x.is_zero()) {
                    out.push((j, col));
                }
            }
        }
        out
    }

    /// Solves `d x = y` for `y` in degree `j`, returning the echelon preimage
    /// in degree `j - 1`.
    pub fn solve_coboundary(&self, y: &GradedVector) -> Result<GradedVector> {
        let j = y.degree;
        if y.dim() != self.space().dim(j) {
            return Err(Error::Shape(format!(
                "vector of length {} in degree {j} of dimension {}",
                y.dim(),
                self.space().dim(j)
            )));
        }
        if !self.d(y)?.is_zero() {
            return Err(Error::NotCocycle(format!("d(y) ≠ 0 in degree {j}")));
        }
        if y.is_zero() {
            return Ok(self.space().zero_vector(j - 1));
        }
        let a = self.d_matrix(j - 1);
        match a.solve(&y.coords)? {
            Some(coords) => Ok(GradedVector {
                degree: j - 1,
                coords,
            }),
            None => Err(Error::NotCoboundary),
        }
    }

    pub fn cohomology(&self, degree: i32) -> Cohomology {
        let field = self.field();
        let n = self.space().dim(degree);
        let cocycles = self.d_matrix(degree).kernel();
        let incoming = self.d_matrix(degree - 1);
        let image: Vec<Vec<Scalar>> = incoming
            .rref()
            .pivots
            .iter()
            .map(|&c| incoming.column(c))
            .collect();
        let mut columns = image.clone();
        columns.extend(cocycles.iter().cloned());
        let stacked = Matrix::from_columns(field, n, &columns).expect("columns have length n");
        let pivots = stacked.rref().pivots;
        let representatives: Vec<Vec<Scalar>> = pivots
            .iter()
            .filter(|&&c| c >= image.len())
            .map(|&c| columns[c].clone())
            .collect();
        let mut basis = image.clone();
        basis.extend(representatives.iter().cloned());
        let basis = Matrix::from_columns(field, n, &basis).expect("columns have length n");
        Cohomology {
            degree,
            field,
            boundary_rank: image.len(),
            representatives: representatives
                .into_iter()
                .map(|coords| GradedVector { degree, coords })
                .collect(),
            d_out: self.d_matrix(degree),
            basis,
        }
    }
}

/// Cohomology in one degree with chosen cocycle representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cohomology {
    degree: i32,
    field: Field,
    boundary_rank: usize,
    representatives: Vec<GradedVector>,
    d_out: Matrix,
    // columns: a basis of the coboundaries followed by the representatives
    basis: Matrix,
}

impl Cohomology {
    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    pub fn representatives(&self) -> &[GradedVector] {
        &self.representatives
    }

    /// The cocycle `Σ cᵢ repᵢ` representing the class with coordinates `c`.
    pub fn representative_of(&self, coords: &[Scalar]) -> Result<GradedVector> {
        if coords.len() != self.dim() {
            return Err(Error::Shape(format!(
                "{} coordinates for a {}-dimensional cohomology group",
                coords.len(),
                self.dim()
            )));
        }
        let mut v = GradedVector::zero(self.field, self.degree, self.d_out.cols());
        for (c, rep) in coords.iter().zip(&self.representatives) {
            v.axpy(c, rep)?;
        }
        Ok(v)
    }

    /// Coordinates of the class of a cocycle in the representative basis.
    pub fn class_of(&self, z: &GradedVector) -> Result<Vec<Scalar>> {
        if z.degree != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: z.degree,
            });
        }
        if z.dim() != self.d_out.cols() {
            return Err(Error::Shape("vector length does not match the complex".into()));
        }
        if self.d_out.mul_vec(&z.coords)?.iter().any(|x| !x.is_zero()) {
            return Err(Error::NotCocycle(format!("in degree {}", self.degree)));
        }
        let x = self
            .basis
            .solve(&z.coords)?
            .expect("every cocycle lies in the span of coboundaries and representatives");
        Ok(x[self.boundary_rank..].to_vec())
    }
}
