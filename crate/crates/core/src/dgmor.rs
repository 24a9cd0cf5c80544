//! The dg-category of homotopy coherent morphisms of a presentation `B`.
//!
//! Objects are triples `(A, B, f)` with `f ∈ Z⁰ B(A, B)`. A degree-n arrow
//! `(A, B, f) → (A', B', f')` is a triple `(u, v, h)` with `u ∈ B(A, A')ⁿ`,
//! `v ∈ B(B, B')ⁿ`, `h ∈ B(A, B')ⁿ⁻¹`, and
//!
//! ```text
//! (u', v', h') (u, v, h) = (u'u, v'v, (-1)^n h'u + v'h)
//! d(u, v, h)             = (du, dv, dh + (-1)^n (f'u - vf))
//! ```
//!
//! The category is never materialised: homs are built on demand.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::ainf::{AInfFunctor, DgTarget, PreNatTrans};
use crate::dgcat::{DgPresentation, Morphism};
use crate::error::{Error, Result};
use crate::graded::{Complex, Field, GradedSpace, GradedVector, Matrix, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgMor {
    base: Arc<DgPresentation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MorObject {
    pub a: usize,
    pub b: usize,
    pub f: Morphism,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MorArrow {
    pub source: MorObject,
    pub target: MorObject,
    pub degree: i32,
    pub u: Morphism,
    pub v: Morphism,
    pub h: Morphism,
}

impl MorObject {
    /// `f : a → b` of degree 0; closedness is not checked here.
    pub fn unchecked(f: Morphism) -> MorObject {
        MorObject {
            a: f.source,
            b: f.target,
            f,
        }
    }
}

impl MorArrow {
    /// Which component to project to.
    pub fn part(&self, side: Side) -> &Morphism {
        match side {
            Side::Source => &self.u,
            Side::Target => &self.v,
        }
    }
}

/// The projections `S(u, v, h) = u` and `T(u, v, h) = v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Source,
    Target,
}

impl MorObject {
    pub fn part(&self, side: Side) -> usize {
        match side {
            Side::Source => self.a,
            Side::Target => self.b,
        }
    }
}

impl DgMor {
    pub fn new(base: Arc<DgPresentation>) -> DgMor {
        DgMor { base }
    }

    pub fn base(&self) -> &Arc<DgPresentation> {
        &self.base
    }

    /// A checked object: `f` of degree 0 and closed.
    pub fn object(&self, f: Morphism) -> Result<MorObject> {
        let x = MorObject::unchecked(f);
        match self.object_defect(&x) {
            None => Ok(x),
            Some(why) => Err(Error::NotClosed(why)),
        }
    }

    /// Checks homogeneity of the three components.
    pub fn arrow(
        &self,
        source: &MorObject,
        target: &MorObject,
        u: Morphism,
        v: Morphism,
        h: Morphism,
    ) -> Result<MorArrow> {
        let n = u.degree();
        let ok = (u.source, u.target) == (source.a, target.a)
            && (v.source, v.target) == (source.b, target.b)
            && (h.source, h.target) == (source.a, target.b);
        if !ok {
            return Err(Error::SourceTargetMismatch(
                "components of a dgMor arrow have the wrong end objects".into(),
            ));
        }
        if v.degree() != n {
            return Err(Error::DegreeMismatch {
                expected: n,
                found: v.degree(),
            });
        }
        if h.degree() != n - 1 {
            return Err(Error::DegreeMismatch {
                expected: n - 1,
                found: h.degree(),
            });
        }
        Ok(MorArrow {
            source: source.clone(),
            target: target.clone(),
            degree: n,
            u,
            v,
            h,
        })
    }

    pub fn zero_arrow(&self, source: &MorObject, target: &MorObject, degree: i32) -> MorArrow {
        let p = &self.base;
        MorArrow {
            source: source.clone(),
            target: target.clone(),
            degree,
            u: p.zero(source.a, target.a, degree),
            v: p.zero(source.b, target.b, degree),
            h: p.zero(source.a, target.b, degree - 1),
        }
    }

    pub fn identity_arrow(&self, x: &MorObject) -> MorArrow {
        let p = &self.base;
        MorArrow {
            source: x.clone(),
            target: x.clone(),
            degree: 0,
            u: p.identity(x.a),
            v: p.identity(x.b),
            h: p.zero(x.a, x.b, -1),
        }
    }

    /// The plain differential.
    pub fn d(&self, x: &MorArrow) -> MorArrow {
        let p = &self.base;
        let field = p.field();
        let mut h = p.d(&x.h);
        let fu = p.compose(&x.target.f, &x.u).expect("f' : A' → B'");
        let vf = p.compose(&x.v, &x.source.f).expect("f : A → B");
        let s = field.sign(x.degree as i64);
        h.axpy(&s, &fu).expect("same hom");
        h.axpy(&(-&s), &vf).expect("same hom");
        MorArrow {
            source: x.source.clone(),
            target: x.target.clone(),
            degree: x.degree + 1,
            u: p.d(&x.u),
            v: p.d(&x.v),
            h,
        }
    }

    /// The plain composite `x' ∘ x`.
    pub fn compose(&self, x2: &MorArrow, x: &MorArrow) -> Result<MorArrow> {
        if x.target != x2.source {
            return Err(Error::NotComposable("dgMor arrows".into()));
        }
        let p = &self.base;
        let mut h = p.compose(&x2.h, &x.u)?.scaled(&p.field().sign(x.degree as i64));
        h.axpy(&p.field().one(), &p.compose(&x2.v, &x.h)?)?;
        Ok(MorArrow {
            source: x.source.clone(),
            target: x2.target.clone(),
            degree: x.degree + x2.degree,
            u: p.compose(&x2.u, &x.u)?,
            v: p.compose(&x2.v, &x.v)?,
            h,
        })
    }

    /// `μ¹_Q(u, v, h) = (μ¹u, μ¹v, −μ¹h + (−1)^{|u|} μ²(f', u) − μ²(v, f))`.
    pub fn mu1(&self, x: &MorArrow) -> MorArrow {
        let p = &self.base;
        let field = p.field();
        let mut h = p.mu1(&x.h).scaled(&field.from_i64(-1));
        let a = p.mu2(&x.target.f, &x.u).expect("f' : A' → B'");
        let b = p.mu2(&x.v, &x.source.f).expect("f : A → B");
        h.axpy(&field.sign(x.degree as i64), &a).expect("same hom");
        h.axpy(&field.from_i64(-1), &b).expect("same hom");
        MorArrow {
            source: x.source.clone(),
            target: x.target.clone(),
            degree: x.degree + 1,
            u: p.mu1(&x.u),
            v: p.mu1(&x.v),
            h,
        }
    }

    /// `μ²_Q(x', x) = (μ²(u', u), μ²(v', v), (−1)^{|u|} μ²(h', u) − μ²(v', h))`.
    pub fn mu2(&self, x2: &MorArrow, x: &MorArrow) -> Result<MorArrow> {
        if x.target != x2.source {
            return Err(Error::NotComposable("dgMor arrows".into()));
        }
        let p = &self.base;
        let field = p.field();
        let mut h = p.mu2(&x2.h, &x.u)?.scaled(&field.sign(x.degree as i64));
        h.axpy(&field.from_i64(-1), &p.mu2(&x2.v, &x.h)?)?;
        Ok(MorArrow {
            source: x.source.clone(),
            target: x2.target.clone(),
            degree: x.degree + x2.degree,
            u: p.mu2(&x2.u, &x.u)?,
            v: p.mu2(&x2.v, &x.v)?,
            h,
        })
    }

    fn parts(&self, source: &MorObject, target: &MorObject) -> [(usize, usize, i32); 3] {
        [
            (source.a, target.a, 0),
            (source.b, target.b, 0),
            (source.a, target.b, -1),
        ]
    }

    /// The hom complex `dgMor(B)(source, target)` with the plain differential.
    /// Basis labels are `u:…`, `v:…` and `h:…` after the underlying labels.
    pub fn hom(&self, source: &MorObject, target: &MorObject) -> Result<Complex> {
        let p = &self.base;
        let field = p.field();
        let mut labels: BTreeMap<i32, Vec<String>> = BTreeMap::new();
        for (slot, (s, t, shift)) in ["u", "v", "h"].iter().zip(self.parts(source, target)) {
            let space = p.complex(s, t).space();
            for j in space.support().collect::<Vec<_>>() {
                let entry = labels.entry(j - shift).or_default();
                for l in space.labels(j) {
                    entry.push(format!("{slot}:{l}"));
                }
            }
        }
        let space = GradedSpace::new(field, labels)?;
        let mut blocks = BTreeMap::new();
        for n in space.support().collect::<Vec<_>>() {
            let cols: Vec<Vec<Scalar>> = (0..space.dim(n))
                .map(|i| {
                    let mut e = space.zero_vector(n);
                    e.coords[i] = field.one();
                    let x = self.from_vector(source, target, &e)?;
                    Ok(self.to_vector(&self.d(&x)).coords)
                })
                .collect::<Result<_>>()?;
            let m = Matrix::from_columns(field, space.dim(n + 1), &cols)?;
            if !m.is_zero() {
                blocks.insert(n, m);
            }
        }
        Complex::new(space, blocks)
    }

    /// Coordinates of an arrow in the basis of [`DgMor::hom`].
    pub fn to_vector(&self, x: &MorArrow) -> GradedVector {
        let mut coords = x.u.vector.coords.clone();
        coords.extend(x.v.vector.coords.iter().cloned());
        coords.extend(x.h.vector.coords.iter().cloned());
        GradedVector {
            degree: x.degree,
            coords,
        }
    }

    pub fn from_vector(
        &self,
        source: &MorObject,
        target: &MorObject,
        v: &GradedVector,
    ) -> Result<MorArrow> {
        let n = v.degree;
        let mut out = self.zero_arrow(source, target, n);
        let (du, dv, dh) = (out.u.vector.dim(), out.v.vector.dim(), out.h.vector.dim());
        if v.dim() != du + dv + dh {
            return Err(Error::Shape(format!(
                "vector of length {} for a hom of dimension {} in degree {n}",
                v.dim(),
                du + dv + dh
            )));
        }
        out.u.vector.coords = v.coords[..du].to_vec();
        out.v.vector.coords = v.coords[du..du + dv].to_vec();
        out.h.vector.coords = v.coords[du + dv..].to_vec();
        Ok(out)
    }

    pub fn format_arrow(&self, x: &MorArrow) -> String {
        let p = &self.base;
        format!("({}; {}; {})", p.format(&x.u), p.format(&x.v), p.format(&x.h))
    }
}

impl DgTarget for DgMor {
    type Obj = MorObject;
    type Mor = MorArrow;

    fn field(&self) -> Field {
        self.base.field()
    }

    fn zero(&self, source: &MorObject, target: &MorObject, degree: i32) -> MorArrow {
        self.zero_arrow(source, target, degree)
    }

    fn identity(&self, x: &MorObject) -> MorArrow {
        self.identity_arrow(x)
    }

    fn endpoints(&self, m: &MorArrow) -> (MorObject, MorObject) {
        (m.source.clone(), m.target.clone())
    }

    fn degree(&self, m: &MorArrow) -> i32 {
        m.degree
    }

    fn is_zero(&self, m: &MorArrow) -> bool {
        m.u.is_zero() && m.v.is_zero() && m.h.is_zero()
    }

    fn axpy(&self, acc: &mut MorArrow, c: &Scalar, m: &MorArrow) -> Result<()> {
        if (&acc.source, &acc.target) != (&m.source, &m.target) {
            return Err(Error::Shape("adding dgMor arrows between different objects".into()));
        }
        acc.u.axpy(c, &m.u)?;
        acc.v.axpy(c, &m.v)?;
        acc.h.axpy(c, &m.h)
    }

    fn mu1(&self, m: &MorArrow) -> MorArrow {
        DgMor::mu1(self, m)
    }

    fn mu2(&self, g: &MorArrow, f: &MorArrow) -> Result<MorArrow> {
        DgMor::mu2(self, g, f)
    }

    fn object_defect(&self, x: &MorObject) -> Option<String> {
        let p = &self.base;
        if x.f.degree() != 0 {
            return Some(format!("structure map has degree {}", x.f.degree()));
        }
        let df = p.d(&x.f);
        if !df.is_zero() {
            return Some(format!("d({}) = {}", p.format(&x.f), p.format(&df)));
        }
        None
    }

    fn describe_object(&self, x: &MorObject) -> String {
        let p = &self.base;
        format!("({}, {}, {})", p.objects()[x.a], p.objects()[x.b], p.format(&x.f))
    }

    fn describe(&self, m: &MorArrow) -> String {
        self.format_arrow(m)
    }
}

/// `S ∘ φ` or `T ∘ φ`.
pub fn project_functor(phi: &AInfFunctor<DgMor>, side: Side) -> Result<AInfFunctor> {
    let base = phi.target().base().clone();
    let objects = phi.objects().iter().map(|x| x.part(side)).collect();
    let comps: Vec<_> = phi
        .components()
        .iter()
        .map(|(t, x)| (t.clone(), x.part(side).clone()))
        .collect();
    AInfFunctor::new(phi.source().clone(), base, objects, comps, phi.max_degree())
}

/// `φ⁰(X) = (F X, G X, h⁰_X)`, `φ^d = (F^d, G^d, h^d)`. Closedness of `h` is
/// not required: an open `h` packs to a φ that fails the functor check.
pub fn pack_transformation(h: &PreNatTrans) -> Result<AInfFunctor<DgMor>> {
    if h.degree() != 0 {
        return Err(Error::DegreeMismatch {
            expected: 0,
            found: h.degree(),
        });
    }
    let (f, g) = (h.f(), h.g());
    let src = f.source().clone();
    let q = Arc::new(DgMor::new(f.target().clone()));
    let objects: Vec<MorObject> = h.h0_all().iter().cloned().map(MorObject::unchecked).collect();
    let mut tuples: Vec<&Vec<usize>> = f
        .components()
        .keys()
        .chain(g.components().keys())
        .chain(h.components().keys())
        .collect();
    tuples.sort();
    tuples.dedup();
    let mut comps = Vec::new();
    for t in tuples {
        let (x0, xd) = (src.basis()[t[t.len() - 1]].source, src.basis()[t[0]].target);
        let arrow = q.arrow(
            &objects[x0],
            &objects[xd],
            f.component(t)?,
            g.component(t)?,
            h.component(t)?,
        )?;
        comps.push((t.clone(), arrow));
    }
    let max = f.max_degree().max(g.max_degree()).max(h.max_degree());
    AInfFunctor::new(src, q, objects, comps, max)
}

/// The inverse of [`pack_transformation`]. All three pieces get the common
/// truncation bound of `φ`.
pub fn unpack_transformation(phi: &AInfFunctor<DgMor>) -> Result<PreNatTrans> {
    let f = project_functor(phi, Side::Source)?;
    let g = project_functor(phi, Side::Target)?;
    let h0 = phi.objects().iter().map(|x| x.f.clone()).collect();
    let src = phi.source();
    let comps: Vec<_> = phi
        .components()
        .iter()
        .filter(|(t, x)| !(t.len() == 1 && src.is_unit(t[0]) && x.h.is_zero()))
        .map(|(t, x)| (t.clone(), x.h.clone()))
        .collect();
    PreNatTrans::new(f, g, 0, h0, comps, phi.max_degree())
}

/// Given a degree-n arrow `x = (u, v, h)` with `μ¹_Q x = 0` and primitives
/// `μ¹ũ = u`, `μ¹ṽ = v`, returns `h̃` with `μ¹_Q(ũ, ṽ, h̃) = x`.
///
/// Requires `H^{n−1} B(A, B') = 0`. With `x' = (−1)^{n−1} x` the plain
/// differential gives `d(ũ, ṽ, h̃) = x'` for `dh̃ = h' + (−1)^n (f'ũ − ṽf)`.
pub fn solve_directed_homotopy(
    q: &DgMor,
    x: &MorArrow,
    u_tilde: &Morphism,
    v_tilde: &Morphism,
) -> Result<Morphism> {
    let p = q.base();
    let field = p.field();
    let n = x.degree;
    let (src, tgt) = (&x.source, &x.target);
    let hom = p.complex(src.a, tgt.b);
    let coh = hom.cohomology(n - 1);
    if coh.dim() > 0 {
        return Err(Error::VanishingHypothesisFails {
            degree: n - 1,
            dimension: coh.dim(),
            context: format!(" of B({}, {})", p.objects()[src.a], p.objects()[tgt.b]),
        });
    }
    if !q.is_zero(&q.mu1(x)) {
        return Err(Error::NotCocycle(format!("μ¹_Q of {}", q.format_arrow(x))));
    }
    if p.mu1(u_tilde) != x.u || p.mu1(v_tilde) != x.v {
        return Err(Error::Malformed("primitives do not satisfy μ¹ũ = u, μ¹ṽ = v".into()));
    }
    let mut c = x.h.scaled(&field.sign((n - 1) as i64));
    let s = field.sign(n as i64);
    c.axpy(&s, &p.compose(&tgt.f, u_tilde)?)?;
    c.axpy(&(-&s), &p.compose(v_tilde, &src.f)?)?;
    let h_tilde = Morphism {
        source: src.a,
        target: tgt.b,
        vector: hom.solve_coboundary(&c.vector)?,
    };
    let y = q.arrow(src, tgt, u_tilde.clone(), v_tilde.clone(), h_tilde.clone())?;
    if q.mu1(&y) != *x {
        return Err(Error::InternalObstructionNonzero {
            tuple: q.format_arrow(x),
            detail: "directed homotopy does not re-verify".into(),
        });
    }
    Ok(h_tilde)
}
