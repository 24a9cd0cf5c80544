//! Strictly unital A∞-functors out of a dg-category presentation.
//!
//! Sources are always [`DgPresentation`]s. Targets implement [`DgTarget`],
//! which is the A∞ view (μ¹, μ²) of a dg-category: a presentation itself, or
//! the category of homotopy coherent morphisms in [`crate::dgmor`].
//!
//! Tuples of basis morphisms are written `(f_d, …, f_1)`: index 0 holds the
//! outermost argument.

mod h0;
mod nattrans;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

pub use h0::{compose_h0_functors, h0_of_functor, H0Functor};
pub use nattrans::{
    check_h0_naturality, h0_of_nattrans, is_closed, nattrans_coboundary, nattrans_coboundary_at_object, nattrans_mu1,
    PreNatTrans,
};

use crate::dgcat::{maltese, DgPresentation, Morphism};
use crate::error::{Error, Result};
use crate::graded::{Field, Scalar};

/// The A∞ view of a dg-category, as far as functors into it need it.
pub trait DgTarget: PartialEq + fmt::Debug {
    type Obj: Clone + fmt::Debug + PartialEq;
    type Mor: Clone + fmt::Debug + PartialEq;

    fn field(&self) -> Field;
    fn zero(&self, source: &Self::Obj, target: &Self::Obj, degree: i32) -> Self::Mor;
    fn identity(&self, x: &Self::Obj) -> Self::Mor;
    fn endpoints(&self, m: &Self::Mor) -> (Self::Obj, Self::Obj);
    fn degree(&self, m: &Self::Mor) -> i32;
    fn is_zero(&self, m: &Self::Mor) -> bool;
    /// `acc += c · m`.
    fn axpy(&self, acc: &mut Self::Mor, c: &Scalar, m: &Self::Mor) -> Result<()>;
    fn mu1(&self, m: &Self::Mor) -> Self::Mor;
    fn mu2(&self, g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor>;
    /// Why `x` is not a legal object, if it is not.
    fn object_defect(&self, _x: &Self::Obj) -> Option<String> {
        None
    }
    fn describe_object(&self, x: &Self::Obj) -> String;
    fn describe(&self, m: &Self::Mor) -> String;
}

impl DgTarget for DgPresentation {
    type Obj = usize;
    type Mor = Morphism;

    fn field(&self) -> Field {
        DgPresentation::field(self)
    }

    fn zero(&self, source: &usize, target: &usize, degree: i32) -> Morphism {
        DgPresentation::zero(self, *source, *target, degree)
    }

    fn identity(&self, x: &usize) -> Morphism {
        DgPresentation::identity(self, *x)
    }

    fn endpoints(&self, m: &Morphism) -> (usize, usize) {
        (m.source, m.target)
    }

    fn degree(&self, m: &Morphism) -> i32 {
        m.degree()
    }

    fn is_zero(&self, m: &Morphism) -> bool {
        m.is_zero()
    }

    fn axpy(&self, acc: &mut Morphism, c: &Scalar, m: &Morphism) -> Result<()> {
        acc.axpy(c, m)
    }

    fn mu1(&self, m: &Morphism) -> Morphism {
        DgPresentation::mu1(self, m)
    }

    fn mu2(&self, g: &Morphism, f: &Morphism) -> Result<Morphism> {
        DgPresentation::mu2(self, g, f)
    }

    fn describe_object(&self, x: &usize) -> String {
        self.objects()[*x].clone()
    }

    fn describe(&self, m: &Morphism) -> String {
        self.format(m)
    }
}

/// A strictly unital A∞-functor `F : A → T`.
///
/// Components are stored on basis tuples only, nonzero values only. The unit
/// components `F¹(1_X) = 1_{F(X)}` are implied unless given explicitly.
#[derive(Debug)]
pub struct AInfFunctor<T: DgTarget = DgPresentation> {
    source: Arc<DgPresentation>,
    target: Arc<T>,
    objects: Vec<T::Obj>,
    components: BTreeMap<Vec<usize>, T::Mor>,
    max_degree: usize,
}

impl<T: DgTarget> Clone for AInfFunctor<T> {
    fn clone(&self) -> Self {
        AInfFunctor {
            source: self.source.clone(),
            target: self.target.clone(),
            objects: self.objects.clone(),
            components: self.components.clone(),
            max_degree: self.max_degree,
        }
    }
}

impl<T: DgTarget> PartialEq for AInfFunctor<T> {
    fn eq(&self, other: &Self) -> bool {
        same(&self.source, &other.source)
            && same(&self.target, &other.target)
            && self.objects == other.objects
            && self.components == other.components
            && self.max_degree == other.max_degree
    }
}

pub(crate) fn same<X: PartialEq>(a: &Arc<X>, b: &Arc<X>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl<T: DgTarget> AInfFunctor<T> {
    /// Checks that every tuple is composable in the source and that every
    /// value lies in the hom between the images of its end objects. Degrees
    /// are not checked here; [`check_ainf_functor`] reports them.
    pub fn new(
        source: Arc<DgPresentation>,
        target: Arc<T>,
        objects: Vec<T::Obj>,
        components: impl IntoIterator<Item = (Vec<usize>, T::Mor)>,
        max_degree: usize,
    ) -> Result<Self> {
        if objects.len() != source.num_objects() {
            return Err(Error::Shape(format!(
                "{} object images for {} objects",
                objects.len(),
                source.num_objects()
            )));
        }
        let mut map = BTreeMap::new();
        for x in 0..source.num_objects() {
            let unit = vec![source.unit(x)];
            map.insert(unit, target.identity(&objects[x]));
        }
        for (tuple, value) in components {
            let (x0, xd) = tuple_endpoints(&source, &tuple)?;
            let expected = (objects[x0].clone(), objects[xd].clone());
            if target.endpoints(&value) != expected {
                return Err(Error::SourceTargetMismatch(format!(
                    "component on ({}) must map {} to {}",
                    source.format_tuple(&tuple),
                    target.describe_object(&expected.0),
                    target.describe_object(&expected.1)
                )));
            }
            map.insert(tuple, value);
        }
        map.retain(|_, v| !target.is_zero(v));
        Ok(AInfFunctor {
            source,
            target,
            objects,
            components: map,
            max_degree,
        })
    }

    /// The identity functor of a presentation.
    pub fn identity(category: Arc<DgPresentation>) -> AInfFunctor<DgPresentation> {
        let objects = (0..category.num_objects()).collect();
        let comps: Vec<_> = (0..category.basis().len())
            .map(|i| (vec![i], category.basis_morphism(i)))
            .collect();
        AInfFunctor::new(category.clone(), category, objects, comps, 1)
            .expect("identity components are well formed")
    }

    pub fn source(&self) -> &Arc<DgPresentation> {
        &self.source
    }

    pub fn target(&self) -> &Arc<T> {
        &self.target
    }

    pub fn objects(&self) -> &[T::Obj] {
        &self.objects
    }

    pub fn object(&self, x: usize) -> &T::Obj {
        &self.objects[x]
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Stored nonzero components in tuple order.
    pub fn components(&self) -> &BTreeMap<Vec<usize>, T::Mor> {
        &self.components
    }

    /// Degree a component on `tuple` must have: `Σ|f_i| + 1 − d`.
    pub fn expected_degree(&self, tuple: &[usize]) -> i32 {
        tuple_degree(&self.source, tuple) + 1 - tuple.len() as i32
    }

    /// `F^d(tuple)`, zero when not stored.
    pub fn component(&self, tuple: &[usize]) -> Result<T::Mor> {
        if let Some(v) = self.components.get(tuple) {
            return Ok(v.clone());
        }
        let (x0, xd) = tuple_endpoints(&self.source, tuple)?;
        Ok(self
            .target
            .zero(&self.objects[x0], &self.objects[xd], self.expected_degree(tuple)))
    }

    /// `F^d(args)` extended multilinearly; `args = (f_d, …, f_1)`.
    pub fn eval(&self, args: &[Morphism]) -> Result<T::Mor> {
        let (x0, xd) = args_endpoints(args)?;
        let degree = args.iter().map(Morphism::degree).sum::<i32>() + 1 - args.len() as i32;
        let zero = self.target.zero(&self.objects[x0], &self.objects[xd], degree);
        multilinear(&self.source, &*self.target, args, zero, |t| {
            Ok(self.components.get(t).cloned())
        })
    }

    /// Same functor with some components replaced (zero values remove).
    pub fn with_components(
        &self,
        updates: impl IntoIterator<Item = (Vec<usize>, T::Mor)>,
        max_degree: usize,
    ) -> Result<Self> {
        let mut all: Vec<(Vec<usize>, T::Mor)> =
            self.components.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        all.extend(updates);
        AInfFunctor::new(
            self.source.clone(),
            self.target.clone(),
            self.objects.clone(),
            all,
            max_degree,
        )
    }

    /// Drops every component of length above `max_degree`.
    pub fn truncated(&self, max_degree: usize) -> Result<Self> {
        let kept = self
            .components
            .iter()
            .filter(|(k, _)| k.len() <= max_degree)
            .map(|(k, v)| (k.clone(), v.clone()));
        AInfFunctor::new(
            self.source.clone(),
            self.target.clone(),
            self.objects.clone(),
            kept,
            max_degree,
        )
    }
}

/// `Σ |f_i|` over a basis tuple.
pub(crate) fn tuple_degree(p: &DgPresentation, tuple: &[usize]) -> i32 {
    tuple.iter().map(|&i| p.basis()[i].degree).sum()
}

/// `(X_0, X_d)` of a basis tuple `(f_d, …, f_1)`, checking composability.
pub(crate) fn tuple_endpoints(p: &DgPresentation, tuple: &[usize]) -> Result<(usize, usize)> {
    let Some((&last, _)) = tuple.split_last() else {
        return Err(Error::Index("empty tuple".into()));
    };
    if let Some(&bad) = tuple.iter().find(|&&i| i >= p.basis().len()) {
        return Err(Error::Index(format!("basis id {bad}")));
    }
    for w in tuple.windows(2) {
        if p.basis()[w[0]].source != p.basis()[w[1]].target {
            return Err(Error::NotComposable(p.format_tuple(tuple)));
        }
    }
    Ok((p.basis()[last].source, p.basis()[tuple[0]].target))
}

pub(crate) fn args_endpoints(args: &[Morphism]) -> Result<(usize, usize)> {
    let (Some(first), Some(last)) = (args.first(), args.last()) else {
        return Err(Error::Index("empty argument list".into()));
    };
    for w in args.windows(2) {
        if w[0].source != w[1].target {
            return Err(Error::NotComposable("argument chain".into()));
        }
    }
    Ok((last.source, first.target))
}

/// Evaluates a multilinear map given on basis tuples. `lookup` returns `None`
/// for a zero value.
pub(crate) fn multilinear<T: DgTarget>(
    source: &DgPresentation,
    target: &T,
    args: &[Morphism],
    zero: T::Mor,
    lookup: impl Fn(&[usize]) -> Result<Option<T::Mor>>,
) -> Result<T::Mor> {
    let expanded: Vec<Vec<(Scalar, usize)>> = args
        .iter()
        .map(|a| source.terms(a).map(|(c, i)| (c.clone(), i)).collect())
        .collect();
    let mut acc = zero;
    let mut tuple = vec![0; args.len()];
    let one = source.field().one();
    expand(&expanded, 0, &one, &mut tuple, &mut |c, t| {
        if let Some(v) = lookup(t)? {
            target.axpy(&mut acc, c, &v)?;
        }
        Ok(())
    })?;
    Ok(acc)
}

fn expand(
    terms: &[Vec<(Scalar, usize)>],
    k: usize,
    coeff: &Scalar,
    tuple: &mut Vec<usize>,
    f: &mut impl FnMut(&Scalar, &[usize]) -> Result<()>,
) -> Result<()> {
    if k == terms.len() {
        return f(coeff, tuple);
    }
    for (c, id) in &terms[k] {
        tuple[k] = *id;
        expand(terms, k + 1, &(coeff * c), tuple, f)?;
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ResidualKind {
    Object,
    Unitality,
    BeyondMaxDegree,
    Equation,
}

impl fmt::Display for ResidualKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ResidualKind::Object => "object",
            ResidualKind::Unitality => "unitality",
            ResidualKind::BeyondMaxDegree => "beyond-max-degree",
            ResidualKind::Equation => "equation",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residual {
    pub kind: ResidualKind,
    pub tuple: Vec<String>,
    pub value: String,
}

/// Result of [`check_ainf_functor`]; empty means the functor is valid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FunctorReport {
    pub residuals: Vec<Residual>,
}

impl FunctorReport {
    pub fn is_valid(&self) -> bool {
        self.residuals.is_empty()
    }
}

impl fmt::Display for FunctorReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.residuals.is_empty() {
            return writeln!(f, "valid");
        }
        for r in &self.residuals {
            writeln!(f, "{} ({}): {}", r.kind, r.tuple.join(","), r.value)?;
        }
        Ok(())
    }
}

/// Checks component degrees (an error), legality of object images, strict
/// unitality, vanishing beyond `max_degree`, and the functor equation on
/// every non-identity basis tuple up to length `d_max`.
pub fn check_ainf_functor<T: DgTarget>(f: &AInfFunctor<T>, d_max: usize) -> Result<FunctorReport> {
    let src = &*f.source;
    let tgt = &*f.target;
    for (tuple, v) in &f.components {
        let expected = f.expected_degree(tuple);
        if tgt.degree(v) != expected {
            return Err(Error::DegreeViolation {
                tuple: src.format_tuple(tuple),
                expected,
                found: tgt.degree(v),
            });
        }
    }
    let mut residuals = Vec::new();
    for (x, obj) in f.objects.iter().enumerate() {
        if let Some(why) = tgt.object_defect(obj) {
            residuals.push(Residual {
                kind: ResidualKind::Object,
                tuple: vec![src.objects()[x].clone()],
                value: why,
            });
        }
    }
    for x in 0..src.num_objects() {
        let u = src.unit(x);
        let v = f.component(&[u])?;
        if v != tgt.identity(&f.objects[x]) {
            residuals.push(Residual {
                kind: ResidualKind::Unitality,
                tuple: src.tuple_labels(&[u]),
                value: tgt.describe(&v),
            });
        }
    }
    for (tuple, v) in &f.components {
        if tuple.len() >= 2 && tuple.iter().any(|&i| src.is_unit(i)) {
            residuals.push(Residual {
                kind: ResidualKind::Unitality,
                tuple: src.tuple_labels(tuple),
                value: tgt.describe(v),
            });
        }
        if tuple.len() > f.max_degree {
            residuals.push(Residual {
                kind: ResidualKind::BeyondMaxDegree,
                tuple: src.tuple_labels(tuple),
                value: tgt.describe(v),
            });
        }
    }
    for d in 1..=d_max {
        for tuple in src.tuples(d, false) {
            let r = functor_residual(f, &tuple)?;
            if !tgt.is_zero(&r) {
                residuals.push(Residual {
                    kind: ResidualKind::Equation,
                    tuple: src.tuple_labels(&tuple),
                    value: tgt.describe(&r),
                });
            }
        }
    }
    Ok(FunctorReport { residuals })
}

/// LHS − RHS of the degree-d functor equation between dg-categories:
///
/// ```text
/// μ¹F^d(f) + Σ_j μ²(F^j(f_d..f_{d-j+1}), F^{d-j}(f_{d-j}..f_1))
///   = Σ_n (-1)^{✠_n} F^d(…, μ¹f_{n+1}, …) + Σ_n (-1)^{✠_n} F^{d-1}(…, μ²(f_{n+2}, f_{n+1}), …)
/// ```
pub fn functor_residual<T: DgTarget>(f: &AInfFunctor<T>, tuple: &[usize]) -> Result<T::Mor> {
    let src = &*f.source;
    let tgt = &*f.target;
    let field = src.field();
    let d = tuple.len();
    let mut acc = tgt.mu1(&f.component(tuple)?);
    for j in 1..d {
        let term = tgt.mu2(&f.component(&tuple[..j])?, &f.component(&tuple[j..])?)?;
        tgt.axpy(&mut acc, &field.one(), &term)?;
    }
    let minus = field.from_i64(-1);
    for (sign, args, _) in inner_substitutions(src, tuple)? {
        tgt.axpy(&mut acc, &(&minus * &sign), &f.eval(&args)?)?;
    }
    Ok(acc)
}

/// The right-hand side terms shared by the functor equation and the
/// coboundary of transformations: for each position, the argument list with
/// `μ¹` applied to one entry, or `μ²` applied to two adjacent ones, together
/// with the sign `(-1)^{✠_n}` and the resulting arity. Zero substitutions are
/// dropped.
pub(crate) fn inner_substitutions(
    src: &DgPresentation,
    tuple: &[usize],
) -> Result<Vec<(Scalar, Vec<Morphism>, usize)>> {
    let field = src.field();
    let d = tuple.len();
    let args: Vec<Morphism> = tuple.iter().map(|&i| src.basis_morphism(i)).collect();
    // degrees[k] = |f_{k+1}|
    let degrees: Vec<i32> = tuple.iter().rev().map(|&i| src.basis()[i].degree).collect();
    let mut out = Vec::new();
    for n in 0..d {
        // f_{n+1} sits at index d-1-n
        let k = d - 1 - n;
        let m = src.mu1(&args[k]);
        if m.is_zero() {
            continue;
        }
        let mut a = args.clone();
        a[k] = m;
        out.push((field.sign(maltese(&degrees, n)?), a, d));
    }
    for n in 0..d.saturating_sub(1) {
        // f_{n+2} at d-2-n, f_{n+1} at d-1-n
        let k = d - 2 - n;
        let m = src.mu2(&args[k], &args[k + 1])?;
        if m.is_zero() {
            continue;
        }
        let mut a: Vec<Morphism> = args[..k].to_vec();
        a.push(m);
        a.extend_from_slice(&args[k + 2..]);
        out.push((field.sign(maltese(&degrees, n)?), a, d - 1));
    }
    Ok(out)
}

/// `G ∘ F`: `(G∘F)^d = Σ_r Σ_{s_1+…+s_r=d} G^r(F^{s_r}(…), …, F^{s_1}(…))`.
///
/// Components are computed on non-identity tuples up to `max_F · max_G`;
/// strict unitality of the inputs makes the identity tuples automatic.
pub fn compose_ainf_functors<T: DgTarget>(
    g: &AInfFunctor<T>,
    f: &AInfFunctor<DgPresentation>,
) -> Result<AInfFunctor<T>> {
    if !same(&f.target, &g.source) {
        return Err(Error::SourceTargetMismatch(format!(
            "target of F is `{}`, source of G is `{}`",
            f.target.name(),
            g.source.name()
        )));
    }
    let src = f.source();
    let objects: Vec<T::Obj> = f.objects.iter().map(|&y| g.objects[y].clone()).collect();
    let bound = f.max_degree * g.max_degree;
    let mut comps = Vec::new();
    for d in 1..=bound {
        for tuple in src.tuples(d, false) {
            let (x0, xd) = tuple_endpoints(src, &tuple)?;
            let degree = f.expected_degree(&tuple);
            let mut acc = g.target.zero(&objects[x0], &objects[xd], degree);
            for parts in compositions(d) {
                if parts.len() > g.max_degree || parts.iter().any(|&s| s > f.max_degree) {
                    continue;
                }
                // parts = (s_r, …, s_1), consumed from the outermost argument
                let mut args = Vec::with_capacity(parts.len());
                let mut at = 0;
                for &s in &parts {
                    args.push(f.component(&tuple[at..at + s])?);
                    at += s;
                }
                if args.iter().any(Morphism::is_zero) {
                    continue;
                }
                let v = g.eval(&args)?;
                g.target.axpy(&mut acc, &src.field().one(), &v)?;
            }
            comps.push((tuple, acc));
        }
    }
    AInfFunctor::new(src.clone(), g.target.clone(), objects, comps, bound.max(1))
}

/// Ordered compositions of `d` into positive parts.
fn compositions(d: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=d {
        for mut rest in compositions(d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}
