use std::collections::BTreeMap;

use super::{validate_dg_category, DgPresentation, Morphism};
use crate::error::{Error, Result};
use crate::graded::{Cohomology, Field, Matrix, Scalar};

/// The homotopy category H⁰ of a presentation: degree-0 cohomology of every
/// hom complex, with composition computed on representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H0Category {
    field: Field,
    objects: Vec<String>,
    homs: BTreeMap<(usize, usize), Cohomology>,
    // (x, y, z) -> table[i][j] = [rep_i(y,z) ∘ rep_j(x,y)]
    products: BTreeMap<(usize, usize, usize), Vec<Vec<Vec<Scalar>>>>,
    identities: Vec<Vec<Scalar>>,
}

pub fn homotopy_category(p: &DgPresentation) -> Result<H0Category> {
    validate_dg_category(p).into_result()?;
    let n = p.num_objects();
    let mut homs = BTreeMap::new();
    for x in 0..n {
        for y in 0..n {
            homs.insert((x, y), p.complex(x, y).cohomology(0));
        }
    }
    let rep = |x: usize, y: usize, i: usize| Morphism {
        source: x,
        target: y,
        vector: homs[&(x, y)].representatives()[i].clone(),
    };
    let mut products = BTreeMap::new();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let (hxy, hyz, hxz) = (&homs[&(x, y)], &homs[&(y, z)], &homs[&(x, z)]);
                let mut table = Vec::with_capacity(hyz.dim());
                for i in 0..hyz.dim() {
                    let g = rep(y, z, i);
                    let mut row = Vec::with_capacity(hxy.dim());
                    for j in 0..hxy.dim() {
                        let f = rep(x, y, j);
                        row.push(hxz.class_of(&p.compose(&g, &f)?.vector)?);
                    }
                    table.push(row);
                }
                // representative independence: composing with a coboundary gives 0
                for &b in p.hom(x, y).ids(-1) {
                    let db = p.d(&p.basis_morphism(b));
                    for i in 0..hyz.dim() {
                        let c = hxz.class_of(&p.compose(&rep(y, z, i), &db)?.vector)?;
                        if c.iter().any(|v| !v.is_zero()) {
                            return Err(Error::NotWellDefined(format!(
                                "composition with d({})",
                                p.basis()[b].label
                            )));
                        }
                    }
                }
                for &b in p.hom(y, z).ids(-1) {
                    let db = p.d(&p.basis_morphism(b));
                    for j in 0..hxy.dim() {
                        let c = hxz.class_of(&p.compose(&db, &rep(x, y, j))?.vector)?;
                        if c.iter().any(|v| !v.is_zero()) {
                            return Err(Error::NotWellDefined(format!(
                                "composition with d({})",
                                p.basis()[b].label
                            )));
                        }
                    }
                }
                products.insert((x, y, z), table);
            }
        }
    }
    let identities = (0..n)
        .map(|x| homs[&(x, x)].class_of(&p.identity(x).vector))
        .collect::<Result<_>>()?;
    Ok(H0Category {
        field: p.field(),
        objects: p.objects().to_vec(),
        homs,
        products,
        identities,
    })
}

impl H0Category {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn dim(&self, x: usize, y: usize) -> usize {
        self.homs[&(x, y)].dim()
    }

    pub fn cohomology(&self, x: usize, y: usize) -> &Cohomology {
        &self.homs[&(x, y)]
    }

    pub fn identity_class(&self, x: usize) -> &[Scalar] {
        &self.identities[x]
    }

    /// Structure constants `[rep_i(y,z) ∘ rep_j(x,y)]`.
    pub fn products(&self, x: usize, y: usize, z: usize) -> &[Vec<Vec<Scalar>>] {
        &self.products[&(x, y, z)]
    }

    /// Composite of classes `g : y → z` and `f : x → y`.
    pub fn compose_classes(
        &self,
        x: usize,
        y: usize,
        z: usize,
        g: &[Scalar],
        f: &[Scalar],
    ) -> Result<Vec<Scalar>> {
        if g.len() != self.dim(y, z) || f.len() != self.dim(x, y) {
            return Err(Error::Shape("class coordinates have the wrong length".into()));
        }
        let mut out = vec![self.field.zero(); self.dim(x, z)];
        let table = &self.products[&(x, y, z)];
        for (i, gi) in g.iter().enumerate() {
            if gi.is_zero() {
                continue;
            }
            for (j, fj) in f.iter().enumerate() {
                if fj.is_zero() {
                    continue;
                }
                let c = gi * fj;
                for (o, t) in out.iter_mut().zip(&table[i][j]) {
                    *o = &*o + &(&c * t);
                }
            }
        }
        Ok(out)
    }

    /// Matrix of `f ↦ g ∘ f` from H⁰(w, x) to H⁰(w, y) for `g : x → y`.
    fn left_multiplication(&self, w: usize, x: usize, y: usize, g: &[Scalar]) -> Result<Matrix> {
        let cols: Vec<Vec<Scalar>> = (0..self.dim(w, x))
            .map(|j| {
                let mut e = vec![self.field.zero(); self.dim(w, x)];
                e[j] = self.field.one();
                self.compose_classes(w, x, y, g, &e)
            })
            .collect::<Result<_>>()?;
        Matrix::from_columns(self.field, self.dim(w, y), &cols)
    }

    fn right_multiplication(&self, x: usize, y: usize, z: usize, f: &[Scalar]) -> Result<Matrix> {
        let cols: Vec<Vec<Scalar>> = (0..self.dim(y, z))
            .map(|i| {
                let mut e = vec![self.field.zero(); self.dim(y, z)];
                e[i] = self.field.one();
                self.compose_classes(x, y, z, &e, f)
            })
            .collect::<Result<_>>()?;
        Matrix::from_columns(self.field, self.dim(x, z), &cols)
    }

    /// The two-sided inverse of a class `c : x → y`, if it exists.
    pub fn h0_invertible(&self, x: usize, y: usize, c: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        // c ∘ r = 1_y and l ∘ c = 1_x, with r, l : y → x
        let right = self.left_multiplication(y, x, y, c)?;
        let left = self.right_multiplication(x, y, x, c)?;
        let (Some(r), Some(_)) = (
            right.solve(&self.identities[y])?,
            left.solve(&self.identities[x])?,
        ) else {
            return Ok(None);
        };
        // r = l ∘ c ∘ r = l, so either solution is the inverse
        debug_assert_eq!(
            self.compose_classes(y, x, y, c, &r)?,
            self.identities[y].clone()
        );
        Ok(Some(r))
    }
}
