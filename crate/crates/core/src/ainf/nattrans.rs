use std::collections::BTreeMap;

use super::{
    h0_of_functor, inner_substitutions, multilinear, same, tuple_degree, tuple_endpoints,
    args_endpoints, AInfFunctor, DgTarget, H0Functor,
};
use crate::dgcat::{maltese, DgPresentation, Morphism};
use crate::error::{Error, Result};
use crate::graded::Scalar;

/// A degree-g pre-natural transformation `h : F → G`.
///
/// `h^d(f_d, …, f_1)` lies in `B(F X_0, G X_d)` in degree `Σ|f_i| + g − d`.
/// Tuples containing an identity carry no component (strict unitality).
#[derive(Debug)]
pub struct PreNatTrans<T: DgTarget = DgPresentation> {
    f: AInfFunctor<T>,
    g: AInfFunctor<T>,
    degree: i32,
    h0: Vec<T::Mor>,
    components: BTreeMap<Vec<usize>, T::Mor>,
    max_degree: usize,
}

impl<T: DgTarget> Clone for PreNatTrans<T> {
    fn clone(&self) -> Self {
        PreNatTrans {
            f: self.f.clone(),
            g: self.g.clone(),
            degree: self.degree,
            h0: self.h0.clone(),
            components: self.components.clone(),
            max_degree: self.max_degree,
        }
    }
}

impl<T: DgTarget> PartialEq for PreNatTrans<T> {
    fn eq(&self, other: &Self) -> bool {
        self.f == other.f
            && self.g == other.g
            && self.degree == other.degree
            && self.h0 == other.h0
            && self.components == other.components
            && self.max_degree == other.max_degree
    }
}

impl<T: DgTarget> PreNatTrans<T> {
    pub fn new(
        f: AInfFunctor<T>,
        g: AInfFunctor<T>,
        degree: i32,
        h0: Vec<T::Mor>,
        components: impl IntoIterator<Item = (Vec<usize>, T::Mor)>,
        max_degree: usize,
    ) -> Result<Self> {
        if !same(f.source(), g.source()) || !same(f.target(), g.target()) {
            return Err(Error::SourceTargetMismatch(
                "F and G must share source and target".into(),
            ));
        }
        let src = f.source().clone();
        let tgt = f.target().clone();
        if h0.len() != src.num_objects() {
            return Err(Error::Shape(format!(
                "{} object components for {} objects",
                h0.len(),
                src.num_objects()
            )));
        }
        for (x, v) in h0.iter().enumerate() {
            let want = (f.object(x).clone(), g.object(x).clone());
            if tgt.endpoints(v) != want {
                return Err(Error::SourceTargetMismatch(format!(
                    "h⁰ at {} must map {} to {}",
                    src.objects()[x],
                    tgt.describe_object(&want.0),
                    tgt.describe_object(&want.1)
                )));
            }
            if tgt.degree(v) != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: tgt.degree(v),
                });
            }
        }
        let mut map = BTreeMap::new();
        for (tuple, v) in components {
            let (x0, xd) = tuple_endpoints(&src, &tuple)?;
            let want = (f.object(x0).clone(), g.object(xd).clone());
            if tgt.endpoints(&v) != want {
                return Err(Error::SourceTargetMismatch(format!(
                    "component on ({}) has the wrong end objects",
                    src.format_tuple(&tuple)
                )));
            }
            let expected = tuple_degree(&src, &tuple) + degree - tuple.len() as i32;
            if tgt.degree(&v) != expected {
                return Err(Error::DegreeViolation {
                    tuple: src.format_tuple(&tuple),
                    expected,
                    found: tgt.degree(&v),
                });
            }
            if tgt.is_zero(&v) {
                continue;
            }
            if tuple.iter().any(|&i| src.is_unit(i)) {
                return Err(Error::Malformed(format!(
                    "component on ({}) contains an identity",
                    src.format_tuple(&tuple)
                )));
            }
            map.insert(tuple, v);
        }
        Ok(PreNatTrans {
            f,
            g,
            degree,
            h0,
            components: map,
            max_degree,
        })
    }

    pub fn zero(f: AInfFunctor<T>, g: AInfFunctor<T>, degree: i32) -> Result<Self> {
        let tgt = f.target().clone();
        let h0 = (0..f.source().num_objects())
            .map(|x| tgt.zero(f.object(x), g.object(x), degree))
            .collect();
        PreNatTrans::new(f, g, degree, h0, Vec::new(), 0)
    }

    pub fn f(&self) -> &AInfFunctor<T> {
        &self.f
    }

    pub fn g(&self) -> &AInfFunctor<T> {
        &self.g
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn h0(&self, x: usize) -> &T::Mor {
        &self.h0[x]
    }

    pub fn h0_all(&self) -> &[T::Mor] {
        &self.h0
    }

    pub fn components(&self) -> &BTreeMap<Vec<usize>, T::Mor> {
        &self.components
    }

    pub fn component(&self, tuple: &[usize]) -> Result<T::Mor> {
        if let Some(v) = self.components.get(tuple) {
            return Ok(v.clone());
        }
        let src = self.f.source();
        let (x0, xd) = tuple_endpoints(src, tuple)?;
        let degree = tuple_degree(src, tuple) + self.degree - tuple.len() as i32;
        Ok(self
            .f
            .target()
            .zero(self.f.object(x0), self.g.object(xd), degree))
    }

    /// `h^d(args)` extended multilinearly.
    pub fn eval(&self, args: &[Morphism]) -> Result<T::Mor> {
        let (x0, xd) = args_endpoints(args)?;
        let degree = args.iter().map(Morphism::degree).sum::<i32>() + self.degree - args.len() as i32;
        let tgt = self.f.target();
        let zero = tgt.zero(self.f.object(x0), self.g.object(xd), degree);
        multilinear(self.f.source(), &**tgt, args, zero, |t| {
            Ok(self.components.get(t).cloned())
        })
    }
}

/// `μ¹(h)⁰_X = μ¹_B(h⁰_X)`.
pub fn nattrans_coboundary_at_object<T: DgTarget>(h: &PreNatTrans<T>, x: usize) -> T::Mor {
    h.f.target().mu1(&h.h0[x])
}

/// `μ¹(h)^d(f_d, …, f_1) = A^d − B^d` for `d ≥ 1`, where
///
/// ```text
/// A^d = μ¹ h^d(f) + μ²(G^d(f), h_{X_0}) + (-1)^{✠_d (|h|-1)} μ²(h_{X_d}, F^d(f))
///     + Σ_j μ²(G^j(f_d..f_{d-j+1}), h^{d-j}(f_{d-j}..f_1))
///     + Σ_j (-1)^{✠_{d-j} (|h|-1)} μ²(h^j(f_d..f_{d-j+1}), F^{d-j}(f_{d-j}..f_1))
/// B^d = Σ_n (-1)^{✠_n + |h| - 1} h^d(…, μ¹ f_{n+1}, …)
///     + Σ_n (-1)^{✠_n + |h| - 1} h^{d-1}(…, μ²(f_{n+2}, f_{n+1}), …)
/// ```
pub fn nattrans_coboundary<T: DgTarget>(h: &PreNatTrans<T>, tuple: &[usize]) -> Result<T::Mor> {
    let src = h.f.source();
    let tgt = h.f.target();
    let field = src.field();
    let (x0, xd) = tuple_endpoints(src, tuple)?;
    let d = tuple.len();
    let twist = (h.degree - 1) as i64;
    let degrees: Vec<i32> = tuple.iter().rev().map(|&i| src.basis()[i].degree).collect();
    let mal = |n: usize| maltese(&degrees, n).expect("n ≤ d");
    let one = field.one();

    let mut acc = tgt.mu1(&h.component(tuple)?);
    tgt.axpy(&mut acc, &one, &tgt.mu2(&h.g.component(tuple)?, &h.h0[x0])?)?;
    tgt.axpy(
        &mut acc,
        &field.sign(mal(d) * twist),
        &tgt.mu2(&h.h0[xd], &h.f.component(tuple)?)?,
    )?;
    for j in 1..d {
        let (outer, inner) = tuple.split_at(j);
        tgt.axpy(
            &mut acc,
            &one,
            &tgt.mu2(&h.g.component(outer)?, &h.component(inner)?)?,
        )?;
        tgt.axpy(
            &mut acc,
            &field.sign(mal(d - j) * twist),
            &tgt.mu2(&h.component(outer)?, &h.f.component(inner)?)?,
        )?;
    }
    for (sign, args, _) in inner_substitutions(src, tuple)? {
        let c: Scalar = -(&sign * &field.sign(twist));
        tgt.axpy(&mut acc, &c, &h.eval(&args)?)?;
    }
    Ok(acc)
}

/// `μ¹(h)` as a degree `g + 1` pre-natural transformation, computed on all
/// non-identity tuples of length at most `d_max`.
pub fn nattrans_mu1<T: DgTarget>(h: &PreNatTrans<T>, d_max: usize) -> Result<PreNatTrans<T>> {
    let src = h.f.source();
    let h0 = (0..src.num_objects())
        .map(|x| nattrans_coboundary_at_object(h, x))
        .collect();
    let mut comps = Vec::new();
    for d in 1..=d_max {
        for tuple in src.tuples(d, false) {
            let v = nattrans_coboundary(h, &tuple)?;
            comps.push((tuple, v));
        }
    }
    PreNatTrans::new(h.f.clone(), h.g.clone(), h.degree + 1, h0, comps, d_max)
}

/// First place where `μ¹(h)` does not vanish, as text.
pub(crate) fn first_defect<T: DgTarget>(h: &PreNatTrans<T>, d_max: usize) -> Option<String> {
    let src = h.f.source();
    let tgt = h.f.target();
    for x in 0..src.num_objects() {
        let v = nattrans_coboundary_at_object(h, x);
        if !tgt.is_zero(&v) {
            return Some(format!("μ¹(h)⁰ at {} = {}", src.objects()[x], tgt.describe(&v)));
        }
    }
    for d in 1..=d_max {
        for tuple in src.tuples(d, false) {
            let v = nattrans_coboundary(h, &tuple).expect("enumerated tuples are composable");
            if !tgt.is_zero(&v) {
                return Some(format!(
                    "μ¹(h) on ({}) = {}",
                    src.format_tuple(&tuple),
                    tgt.describe(&v)
                ));
            }
        }
    }
    None
}

/// True iff `μ¹(h)` vanishes on every object and every non-identity basis
/// tuple of length at most `d_max`.
pub fn is_closed<T: DgTarget>(h: &PreNatTrans<T>, d_max: usize) -> bool {
    first_defect(h, d_max).is_none()
}

/// `H⁰(h)_X = [h⁰_X]` for a closed degree-0 transformation, checked to be
/// natural with respect to `H⁰(F)` and `H⁰(G)`.
pub fn h0_of_nattrans(h: &PreNatTrans<DgPresentation>) -> Result<Vec<Vec<Scalar>>> {
    if h.degree != 0 {
        return Err(Error::DegreeMismatch {
            expected: 0,
            found: h.degree,
        });
    }
    let bound = h.max_degree.max(h.f.max_degree()).max(h.g.max_degree()).max(1) + 1;
    if let Some(why) = first_defect(h, bound) {
        return Err(Error::NotClosed(why));
    }
    let hf = h0_of_functor(&h.f)?;
    let hg = h0_of_functor(&h.g)?;
    let classes = (0..h.f.source().num_objects())
        .map(|x| {
            hf.target
                .cohomology(*h.f.object(x), *h.g.object(x))
                .class_of(&h.h0[x].vector)
        })
        .collect::<Result<Vec<_>>>()?;
    check_h0_naturality(&hf, &hg, &classes)?;
    Ok(classes)
}

/// Checks `[G f] ∘ φ_x = φ_y ∘ [F f]` on a basis of every `H⁰(x, y)`.
pub fn check_h0_naturality(hf: &H0Functor, hg: &H0Functor, classes: &[Vec<Scalar>]) -> Result<()> {
    let ha = &hf.source;
    let hb = &hf.target;
    let n = ha.objects().len();
    if classes.len() != n {
        return Err(Error::Shape(format!("{} classes for {n} objects", classes.len())));
    }
    for (x, c) in classes.iter().enumerate() {
        if c.len() != hb.dim(hf.objects[x], hg.objects[x]) {
            return Err(Error::Shape(format!(
                "class at {} has {} coordinates, expected {}",
                ha.objects()[x],
                c.len(),
                hb.dim(hf.objects[x], hg.objects[x])
            )));
        }
    }
    for x in 0..n {
        for y in 0..n {
            for j in 0..ha.dim(x, y) {
                let mut e = vec![ha.field().zero(); ha.dim(x, y)];
                e[j] = ha.field().one();
                let ff = hf.map(x, y).mul_vec(&e)?;
                let gf = hg.map(x, y).mul_vec(&e)?;
                let (fx, fy, gx, gy) = (hf.objects[x], hf.objects[y], hg.objects[x], hg.objects[y]);
                let lhs = hb.compose_classes(fx, gx, gy, &gf, &classes[x])?;
                let rhs = hb.compose_classes(fx, fy, gy, &classes[y], &ff)?;
                if lhs != rhs {
                    return Err(Error::NaturalityFails(format!(
                        "square for class {j} of H⁰({}, {}) does not commute",
                        ha.objects()[x],
                        ha.objects()[y]
                    )));
                }
            }
        }
    }
    Ok(())
}
