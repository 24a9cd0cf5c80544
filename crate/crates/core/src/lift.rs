//! Lifting a natural transformation `H⁰(F) → H⁰(G)` to a closed degree-0
//! A∞-transformation `F → G`, for `F, G` out of a linear category.
//!
//! The transformation is built as an A∞-functor `φ : E → dgMor(B)` with
//! `Sφ = F` and `Tφ = G`, one tuple length at a time. At length `d ≥ 2` the
//! obstruction is a `μ¹_Q`-cocycle of degree `2 − d` whose outer components
//! are `μ¹F^d` and `μ¹G^d`, and the directed-homotopy solver produces `h^d`.

use std::fmt;
use std::sync::Arc;

use crate::ainf::{
    check_ainf_functor, check_h0_naturality, h0_of_functor, h0_of_nattrans, inner_substitutions,
    is_closed, same, tuple_endpoints, AInfFunctor, DgTarget, H0Functor, PreNatTrans,
};
use crate::dgcat::{homotopy_category, validate_dg_category, DgPresentation, Morphism};
use crate::dgmor::{solve_directed_homotopy, DgMor, MorArrow, MorObject};
use crate::error::{Error, Result};
use crate::graded::Scalar;

/// One nonzero negative cohomology group `H^j B(F E, G E')`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishingFailure {
    pub source: usize,
    pub target: usize,
    pub degree: i32,
    pub dimension: usize,
    /// `" of B(F E, G E') for (E, E')"` with names filled in.
    pub context: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishingReport {
    pub failures: Vec<VanishingFailure>,
    /// Minimal degree over `B(FE, GE')`, `B(FE, FE')` and `B(GE, GE')`.
    pub m: i32,
    pub d_max: usize,
}

impl VanishingReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn into_result(self) -> Result<VanishingReport> {
        match self.failures.first() {
            None => Ok(self),
            Some(v) => Err(Error::VanishingHypothesisFails {
                degree: v.degree,
                dimension: v.dimension,
                context: v.context.clone(),
            }),
        }
    }
}

impl fmt::Display for VanishingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "m = {}, d_max = {}", self.m, self.d_max)?;
        if self.holds() {
            return writeln!(f, "negative vanishing holds");
        }
        for v in &self.failures {
            writeln!(f, "H^{}{} has dimension {}", v.degree, v.context, v.dimension)?;
        }
        Ok(())
    }
}

/// Checks `H^j B(F E, G E') = 0` for all `j < 0` and computes `m` and
/// `d_max = max(2, 1 − m)`.
pub fn check_negative_vanishing(f: &AInfFunctor, g: &AInfFunctor) -> VanishingReport {
    let e = f.source();
    let b = f.target();
    let n = e.num_objects();
    let mut failures = Vec::new();
    let mut m = 0;
    for x in 0..n {
        for y in 0..n {
            let (fx, fy, gx, gy) = (*f.object(x), *f.object(y), *g.object(x), *g.object(y));
            for (s, t) in [(fx, gy), (fx, fy), (gx, gy)] {
                if let Some(lo) = b.complex(s, t).space().min_degree() {
                    m = m.min(lo);
                }
            }
            let hom = b.complex(fx, gy);
            let lo = hom.space().min_degree().unwrap_or(0);
            for j in lo..0 {
                let dim = hom.cohomology(j).dim();
                if dim > 0 {
                    failures.push(VanishingFailure {
                        source: x,
                        target: y,
                        degree: j,
                        dimension: dim,
                        context: format!(
                            " of B({}, {}) for ({}, {})",
                            b.objects()[fx],
                            b.objects()[gy],
                            e.objects()[x],
                            e.objects()[y]
                        ),
                    });
                }
            }
        }
    }
    VanishingReport {
        failures,
        m,
        d_max: 2.max(1 - m) as usize,
    }
}

/// Validated input of the lifting algorithm.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftProblem {
    f: AInfFunctor,
    g: AInfFunctor,
    phi: Vec<Vec<Scalar>>,
    hf: H0Functor,
    hg: H0Functor,
    vanishing: VanishingReport,
}

impl LiftProblem {
    /// `phi[E]` are coordinates of `φ̄_E` in the cohomology basis of
    /// `H⁰ B(F E, G E)`.
    pub fn new(f: AInfFunctor, g: AInfFunctor, phi: Vec<Vec<Scalar>>) -> Result<LiftProblem> {
        if !same(f.source(), g.source()) || !same(f.target(), g.target()) {
            return Err(Error::SourceTargetMismatch(
                "F and G must share source and target".into(),
            ));
        }
        let e = f.source();
        if !e.is_linear() {
            return Err(Error::NotLinear(format!(
                "{} has morphisms outside degree 0 or a nonzero differential",
                e.name()
            )));
        }
        validate_dg_category(e).into_result()?;
        validate_dg_category(f.target()).into_result()?;
        let vanishing = check_negative_vanishing(&f, &g);
        for (name, func) in [("F", &f), ("G", &g)] {
            let report = check_ainf_functor(func, vanishing.d_max + 1)?;
            if let Some(r) = report.residuals.first() {
                return Err(Error::FunctorInvalid {
                    name: name.into(),
                    detail: format!("{} ({}): {}", r.kind, r.tuple.join(","), r.value),
                });
            }
        }
        let hf = h0_of_functor(&f)?;
        let hg = h0_of_functor(&g)?;
        check_h0_naturality(&hf, &hg, &phi)?;
        Ok(LiftProblem {
            f,
            g,
            phi,
            hf,
            hg,
            vanishing,
        })
    }

    pub fn f(&self) -> &AInfFunctor {
        &self.f
    }

    pub fn g(&self) -> &AInfFunctor {
        &self.g
    }

    pub fn phi(&self) -> &[Vec<Scalar>] {
        &self.phi
    }

    pub fn vanishing(&self) -> &VanishingReport {
        &self.vanishing
    }

    pub fn source(&self) -> &Arc<DgPresentation> {
        self.f.source()
    }

    pub fn target(&self) -> &Arc<DgPresentation> {
        self.f.target()
    }

    pub fn h0_functors(&self) -> (&H0Functor, &H0Functor) {
        (&self.hf, &self.hg)
    }
}

/// One solved system of the construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranscriptEntry {
    pub stage: usize,
    /// Object name at stage 0, `(f_d,…,f_1)` otherwise.
    pub at: String,
    /// Dimension of the space the unknown lives in.
    pub unknowns: usize,
    /// Dimension of the space the equation lives in.
    pub equations: usize,
    pub check: String,
}

impl fmt::Display for TranscriptEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "stage {} at {}: {} unknowns, {} equations, {}",
            self.stage, self.at, self.unknowns, self.equations, self.check
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LiftCertificate {
    pub transformation: PreNatTrans,
    pub phi: Vec<Vec<Scalar>>,
    pub d_max: usize,
    pub transcript: Vec<TranscriptEntry>,
    pub iso: bool,
    /// Inverse class of `[h⁰_E]` in `H⁰ B(G E, F E)`, where one exists.
    pub inverses: Vec<Option<Vec<Scalar>>>,
}

/// The obstruction at `tuple` for a partial functor defined below
/// `tuple.len()`:
///
/// ```text
/// Σ_n (−1)^{✠_n} φ^{d−1}(…, μ²(f_{n+2}, f_{n+1}), …) − Σ_j μ²(φ^j(f_d..f_{d−j+1}), φ^{d−j}(f_{d−j}..f_1))
/// ```
///
/// Components of `φ` of length `d` and above are ignored.
pub fn obstruction<T: DgTarget>(phi: &AInfFunctor<T>, tuple: &[usize]) -> Result<T::Mor> {
    let src = phi.source();
    let tgt = phi.target();
    let field = src.field();
    let d = tuple.len();
    let (x0, xd) = (
        src.basis()[tuple[d - 1]].source,
        src.basis()[tuple[0]].target,
    );
    let degree = phi.expected_degree(tuple) + 1;
    let mut acc = tgt.zero(phi.object(x0), phi.object(xd), degree);
    for (sign, args, arity) in inner_substitutions(src, tuple)? {
        if arity == d - 1 {
            tgt.axpy(&mut acc, &sign, &phi.eval(&args)?)?;
        }
    }
    let minus = field.from_i64(-1);
    for j in 1..d {
        let term = tgt.mu2(&phi.component(&tuple[..j])?, &phi.component(&tuple[j..])?)?;
        tgt.axpy(&mut acc, &minus, &term)?;
    }
    Ok(acc)
}

/// [`obstruction`] with its preconditions and its cocycle property checked:
/// the source is linear, `φ` satisfies the functor equations below
/// `tuple.len()`, the tuple is composable without identities, and the
/// result is `μ¹`-closed.
pub fn obstruction_cocycle<T: DgTarget>(phi: &AInfFunctor<T>, tuple: &[usize]) -> Result<T::Mor> {
    let src = phi.source();
    if !src.is_linear() {
        return Err(Error::NotLinear(src.name().to_string()));
    }
    if tuple.len() < 2 {
        return Err(Error::PartialDataInvalid(
            "obstructions start at length 2".into(),
        ));
    }
    tuple_endpoints(src, tuple)?;
    if tuple.iter().any(|&i| src.is_unit(i)) {
        return Err(Error::PartialDataInvalid(format!(
            "({}) contains an identity",
            src.format_tuple(tuple)
        )));
    }
    let below = phi.truncated(tuple.len() - 1)?;
    let report = check_ainf_functor(&below, tuple.len() - 1)?;
    if let Some(r) = report.residuals.first() {
        return Err(Error::PartialDataInvalid(format!(
            "{} ({}): {}",
            r.kind,
            r.tuple.join(","),
            r.value
        )));
    }
    let obs = obstruction(phi, tuple)?;
    let tgt = phi.target();
    let closed = tgt.mu1(&obs);
    if !tgt.is_zero(&closed) {
        return Err(Error::NotCocycle(format!(
            "μ¹ of the obstruction on ({}) is {}",
            src.format_tuple(tuple),
            tgt.describe(&closed)
        )));
    }
    Ok(obs)
}

/// Runs the recursive construction and certifies the result.
pub fn lift_natural_transformation(p: &LiftProblem) -> Result<LiftCertificate> {
    let report = p.vanishing.clone().into_result()?;
    let d_max = report.d_max;
    let e = p.source().clone();
    let b = p.target().clone();
    let (f, g) = (&p.f, &p.g);
    let q = Arc::new(DgMor::new(b.clone()));
    let mut transcript = Vec::new();

    // stage 0: canonical representatives
    let mut h0 = Vec::with_capacity(e.num_objects());
    for x in 0..e.num_objects() {
        let (fx, gx) = (*f.object(x), *g.object(x));
        let hom = b.complex(fx, gx);
        let rep = hom.cohomology(0).representative_of(&p.phi[x])?;
        transcript.push(TranscriptEntry {
            stage: 0,
            at: e.objects()[x].clone(),
            unknowns: hom.space().dim(0),
            equations: hom.space().dim(1),
            check: "cocycle representative".into(),
        });
        h0.push(Morphism {
            source: fx,
            target: gx,
            vector: rep,
        });
    }
    let objects: Vec<MorObject> = h0.iter().cloned().map(MorObject::unchecked).collect();
    for x in &objects {
        if let Some(why) = q.object_defect(x) {
            return Err(Error::InternalObstructionNonzero {
                tuple: e.objects()[x.a].clone(),
                detail: why,
            });
        }
    }

    // stage 1: d h¹(f) = μ²(G¹f, h⁰_{E0}) − μ²(h⁰_{E1}, F¹f)
    let mut comps: Vec<(Vec<usize>, MorArrow)> = Vec::new();
    let minus = b.field().from_i64(-1);
    for tuple in e.tuples(1, false) {
        let arrow = &e.basis()[tuple[0]];
        let (x0, x1) = (arrow.source, arrow.target);
        let (ff, gg) = (f.component(&tuple)?, g.component(&tuple)?);
        let mut rhs = b.mu2(&gg, &h0[x0])?;
        rhs.axpy(&minus, &b.mu2(&h0[x1], &ff)?)?;
        let hom = b.complex(*f.object(x0), *g.object(x1));
        let h1 = hom.solve_coboundary(&rhs.vector).map_err(|_| {
            Error::NaturalityFails(format!(
                "{} is not exact at {}",
                b.format(&rhs),
                e.format_tuple(&tuple)
            ))
        })?;
        let h1 = Morphism {
            source: rhs.source,
            target: rhs.target,
            vector: h1,
        };
        transcript.push(TranscriptEntry {
            stage: 1,
            at: format!("({})", e.format_tuple(&tuple)),
            unknowns: hom.space().dim(-1),
            equations: hom.space().dim(0),
            check: "d h = naturality defect".into(),
        });
        comps.push((tuple, q.arrow(&objects[x0], &objects[x1], ff, gg, h1)?));
    }
    let mut phi = AInfFunctor::new(e.clone(), q.clone(), objects.clone(), comps.clone(), 1)?;

    // stages 2..=d_max
    for d in 2..=d_max {
        let tuples = e.tuples(d, false);
        if tuples.is_empty() {
            transcript.push(TranscriptEntry {
                stage: d,
                at: "no tuples".into(),
                unknowns: 0,
                equations: 0,
                check: "vacuous".into(),
            });
        }
        for tuple in tuples {
            let obs = obstruction(&phi, &tuple)?;
            let label = format!("({})", e.format_tuple(&tuple));
            let closed = q.mu1(&obs);
            if !q.is_zero(&closed) {
                return Err(Error::InternalObstructionNonzero {
                    tuple: label,
                    detail: format!("μ¹_Q = {}", q.format_arrow(&closed)),
                });
            }
            let (ff, gg) = (f.component(&tuple)?, g.component(&tuple)?);
            if obs.u != b.mu1(&ff) || obs.v != b.mu1(&gg) {
                return Err(Error::InternalObstructionNonzero {
                    tuple: label,
                    detail: "outer components differ from μ¹F^d, μ¹G^d".into(),
                });
            }
            let h = solve_directed_homotopy(&q, &obs, &ff, &gg)?;
            let hom = b.complex(obs.source.a, obs.target.b);
            transcript.push(TranscriptEntry {
                stage: d,
                at: label,
                unknowns: hom.space().dim(h.degree()),
                equations: hom.space().dim(h.degree() + 1),
                check: "obstruction closed, directed homotopy verified".into(),
            });
            let (x0, xd) = (obs.source.clone(), obs.target.clone());
            comps.push((tuple, q.arrow(&x0, &xd, ff, gg, h)?));
        }
        phi = AInfFunctor::new(e.clone(), q.clone(), objects.clone(), comps.clone(), d)?;
    }

    // beyond d_max every component space is zero
    let n = e.num_objects();
    let past = (d_max + 1) as i32;
    for x in 0..n {
        for y in 0..n {
            let dims = [
                b.complex(*f.object(x), *g.object(y)).space().dim(-past),
                b.complex(*f.object(x), *f.object(y)).space().dim(1 - past),
                b.complex(*g.object(x), *g.object(y)).space().dim(1 - past),
            ];
            if dims.iter().any(|&k| k > 0) {
                return Err(Error::InternalObstructionNonzero {
                    tuple: format!("length {past}"),
                    detail: "component space beyond d_max is nonzero".into(),
                });
            }
        }
    }
    let report = check_ainf_functor(&phi, d_max + 1)?;
    if let Some(r) = report.residuals.first() {
        return Err(Error::InternalObstructionNonzero {
            tuple: r.tuple.join(","),
            detail: format!("{}: {}", r.kind, r.value),
        });
    }
    transcript.push(TranscriptEntry {
        stage: d_max + 1,
        at: "all tuples".into(),
        unknowns: 0,
        equations: e.tuples(d_max + 1, false).len(),
        check: "component spaces zero, equations hold".into(),
    });

    let hcomps = comps.into_iter().map(|(t, x)| (t, x.h));
    let h = PreNatTrans::new(f.clone(), g.clone(), 0, h0, hcomps, d_max)?;
    if !is_closed(&h, d_max + 1) || h0_of_nattrans(&h)? != p.phi {
        return Err(Error::InternalObstructionNonzero {
            tuple: "result".into(),
            detail: "constructed transformation does not re-verify".into(),
        });
    }
    let cert = LiftCertificate {
        transformation: h,
        phi: p.phi.clone(),
        d_max,
        transcript,
        iso: false,
        inverses: Vec::new(),
    };
    certify_isomorphism(cert)
}

/// Sets `iso` to whether every `[h⁰_E]` is invertible in `H⁰(B)` and
/// records the inverses.
pub fn certify_isomorphism(mut cert: LiftCertificate) -> Result<LiftCertificate> {
    let h = &cert.transformation;
    let hb = homotopy_category(h.f().target())?;
    let mut inverses = Vec::new();
    for (x, c) in cert.phi.iter().enumerate() {
        let (fx, gx) = (*h.f().object(x), *h.g().object(x));
        inverses.push(hb.h0_invertible(fx, gx, c)?);
    }
    cert.iso = inverses.iter().all(Option::is_some);
    cert.inverses = inverses;
    Ok(cert)
}

/// Re-checks a certificate against a problem from the raw transformation
/// data only: same functors, closedness to `d_max + 1`, `H⁰(h) = φ̄`, strict
/// unitality, and the isomorphism flag.
pub fn verify_certificate(cert: &LiftCertificate, p: &LiftProblem) -> Result<()> {
    let h = &cert.transformation;
    let fail = |why: &str| Err(Error::Certificate(why.into()));
    if h.f() != &p.f || h.g() != &p.g {
        return fail("functors differ from the problem");
    }
    if cert.phi != p.phi {
        return fail("H⁰ family differs from the problem");
    }
    if cert.d_max != p.vanishing.d_max {
        return fail("truncation bound differs from the problem");
    }
    if h.degree() != 0 {
        return fail("transformation is not of degree 0");
    }
    let e = p.source();
    if h.components().keys().any(|t| t.iter().any(|&i| e.is_unit(i))) {
        return fail("component on a tuple containing an identity");
    }
    if h.components().keys().any(|t| t.len() > cert.d_max) {
        return fail("component beyond the truncation bound");
    }
    if !is_closed(h, cert.d_max + 1) {
        return fail("transformation is not closed");
    }
    if h0_of_nattrans(h)? != p.phi {
        return fail("H⁰ of the transformation is not the given family");
    }
    let redo = certify_isomorphism(LiftCertificate {
        iso: false,
        inverses: Vec::new(),
        ..cert.clone()
    })?;
    if redo.iso != cert.iso || redo.inverses != cert.inverses {
        return fail("isomorphism flag or inverses do not re-verify");
    }
    Ok(())
}
