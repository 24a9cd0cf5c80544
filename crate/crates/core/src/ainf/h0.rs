use std::collections::BTreeMap;

use super::AInfFunctor;
use crate::dgcat::{homotopy_category, DgPresentation, H0Category, Morphism};
use crate::error::{Error, Result};
use crate::graded::Matrix;

/// The ordinary functor `H⁰(F)` between homotopy categories.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H0Functor {
    pub source: H0Category,
    pub target: H0Category,
    pub objects: Vec<usize>,
    /// `(x, y)` → matrix of `[f] ↦ [F¹(f)]` from H⁰(x, y) to H⁰(F x, F y).
    pub maps: BTreeMap<(usize, usize), Matrix>,
}

impl H0Functor {
    pub fn map(&self, x: usize, y: usize) -> &Matrix {
        &self.maps[&(x, y)]
    }
}

/// `H⁰(F)(f) = [F¹(f)]`, with well-definedness and functoriality verified.
pub fn h0_of_functor(f: &AInfFunctor<DgPresentation>) -> Result<H0Functor> {
    let a = f.source();
    let b = f.target();
    let ha = homotopy_category(a)?;
    let hb = homotopy_category(b)?;
    let n = a.num_objects();
    let mut maps = BTreeMap::new();
    for x in 0..n {
        for y in 0..n {
            let (fx, fy) = (*f.object(x), *f.object(y));
            let target = hb.cohomology(fx, fy);
            let class = |m: &Morphism| -> Result<Vec<_>> {
                let image = f.eval(std::slice::from_ref(m))?;
                target.class_of(&image.vector).map_err(|_| {
                    Error::NotWellDefined(format!("F¹({}) is not a cocycle", a.format(m)))
                })
            };
            let cols: Vec<_> = ha
                .cohomology(x, y)
                .representatives()
                .iter()
                .map(|r| {
                    class(&Morphism {
                        source: x,
                        target: y,
                        vector: r.clone(),
                    })
                })
                .collect::<Result<_>>()?;
            for &id in a.hom(x, y).ids(-1) {
                let db = a.d(&a.basis_morphism(id));
                if class(&db)?.iter().any(|c| !c.is_zero()) {
                    return Err(Error::NotWellDefined(format!(
                        "F¹(d {}) is not exact",
                        a.basis()[id].label
                    )));
                }
            }
            maps.insert((x, y), Matrix::from_columns(a.field(), target.dim(), &cols)?);
        }
    }
    let hf = H0Functor {
        source: ha,
        target: hb,
        objects: f.objects().to_vec(),
        maps,
    };
    verify_functoriality(&hf)?;
    Ok(hf)
}

fn verify_functoriality(hf: &H0Functor) -> Result<()> {
    let (ha, hb) = (&hf.source, &hf.target);
    let fo = &hf.objects;
    let n = ha.objects().len();
    for x in 0..n {
        let image = hf.map(x, x).mul_vec(ha.identity_class(x))?;
        if image != hb.identity_class(fo[x]) {
            return Err(Error::NotWellDefined(format!(
                "H⁰(F) does not preserve the identity of {}",
                ha.objects()[x]
            )));
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for i in 0..ha.dim(y, z) {
                    for j in 0..ha.dim(x, y) {
                        let (mut ei, mut ej) = (
                            vec![ha.field().zero(); ha.dim(y, z)],
                            vec![ha.field().zero(); ha.dim(x, y)],
                        );
                        ei[i] = ha.field().one();
                        ej[j] = ha.field().one();
                        let lhs = hf.map(x, z).mul_vec(&ha.compose_classes(x, y, z, &ei, &ej)?)?;
                        let rhs = hb.compose_classes(
                            fo[x],
                            fo[y],
                            fo[z],
                            &hf.map(y, z).mul_vec(&ei)?,
                            &hf.map(x, y).mul_vec(&ej)?,
                        )?;
                        if lhs != rhs {
                            return Err(Error::NotWellDefined(format!(
                                "H⁰(F) is not multiplicative on {}→{}→{}",
                                ha.objects()[x],
                                ha.objects()[y],
                                ha.objects()[z]
                            )));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// `H⁰(G) ∘ H⁰(F)`.
pub fn compose_h0_functors(g: &H0Functor, f: &H0Functor) -> Result<H0Functor> {
    if f.target != g.source {
        return Err(Error::SourceTargetMismatch(
            "H⁰ functors are not composable".into(),
        ));
    }
    let mut maps = BTreeMap::new();
    for (&(x, y), m) in &f.maps {
        let gm = g.map(f.objects[x], f.objects[y]);
        maps.insert((x, y), gm.mul(m)?);
    }
    Ok(H0Functor {
        source: f.source.clone(),
        target: g.target.clone(),
        objects: f.objects.iter().map(|&y| g.objects[y]).collect(),
        maps,
    })
}
