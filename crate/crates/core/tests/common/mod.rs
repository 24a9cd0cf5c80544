//! Random instances shared by the integration tests.
//!
//! Target categories are full subcategories of the dg-category of small
//! cochain complexes, written in a randomly changed basis of elementary
//! matrices, optionally truncated to degrees ≤ 0 with cycles in degree 0.
//! Their axioms hold because they are computed, not asserted.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use dglift::ainf::{check_ainf_functor, AInfFunctor, PreNatTrans};
use dglift::dgcat::{DgPresentation, Morphism, PresentationBuilder};
use dglift::graded::{Field, Matrix, Scalar};
use dglift::lift::obstruction;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Rand = ChaCha8Rng;

pub fn rng(seed: u64) -> Rand {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Proptest settings for the seed-driven properties. Failures print the
/// seed, which reproduces the instance.
pub fn config(cases: u32) -> proptest::test_runner::Config {
    proptest::test_runner::Config {
        cases,
        failure_persistence: None,
        ..Default::default()
    }
}

pub const F2: Field = Field::Prime(2);
pub const F3: Field = Field::Prime(3);
pub const Q: Field = Field::Rational;

pub fn scalar(field: Field, rng: &mut Rand) -> Scalar {
    match field {
        Field::Rational => field.from_i64(rng.gen_range(-2..=2)),
        Field::Prime(p) => field.from_i64(rng.gen_range(0..p as i64)),
    }
}

pub fn nonzero_scalar(field: Field, rng: &mut Rand) -> Scalar {
    loop {
        let c = scalar(field, rng);
        if !c.is_zero() {
            return c;
        }
    }
}

// ---------------------------------------------------------------------------
// small complexes

/// A finite complex with one basis vector per entry of `degrees` and `d`
/// as a square matrix (rows are targets).
#[derive(Clone, Debug)]
pub struct SmallComplex {
    pub degrees: Vec<i32>,
    pub d: Matrix,
}

impl SmallComplex {
    pub fn dim(&self) -> usize {
        self.degrees.len()
    }
}

/// Random complex of dimension `n` with degrees in `-1..=1`.
pub fn random_complex(field: Field, n: usize, rng: &mut Rand) -> SmallComplex {
    let degrees: Vec<i32> = (0..n).map(|_| rng.gen_range(-1..=1)).collect();
    for _ in 0..20 {
        let mut d = Matrix::zeros(field, n, n);
        for i in 0..n {
            for j in 0..n {
                if degrees[i] == degrees[j] + 1 && rng.gen_bool(0.6) {
                    d.set(i, j, scalar(field, rng));
                }
            }
        }
        if d.mul(&d).unwrap().is_zero() {
            return SmallComplex { degrees, d };
        }
    }
    SmallComplex {
        degrees,
        d: Matrix::zeros(field, n, n),
    }
}

/// Cohomology `k^h` in degree 0 plus contractible pieces `k → k` starting
/// in the given degrees.
pub fn degree_zero_complex(field: Field, h: usize, starts: &[i32], rng: &mut Rand) -> SmallComplex {
    let mut degrees = vec![0; h];
    let mut pieces = Vec::new();
    for &j in starts {
        pieces.push(degrees.len());
        degrees.push(j);
        degrees.push(j + 1);
    }
    let n = degrees.len();
    let mut d = Matrix::zeros(field, n, n);
    for i in pieces {
        d.set(i + 1, i, nonzero_scalar(field, rng));
    }
    SmallComplex { degrees, d }
}

// ---------------------------------------------------------------------------
// presentations as plain data

/// A presentation before resolution, so that tests can break it.
#[derive(Clone, Debug)]
pub struct Spec {
    pub name: String,
    pub field: Field,
    pub objects: Vec<String>,
    /// `(source, target, label, degree)`.
    pub basis: Vec<(usize, usize, String, i32)>,
    pub units: Vec<usize>,
    pub diffs: Vec<Vec<(Scalar, usize)>>,
    /// Explicit composites `(g, f) ↦ g∘f`; identity pairs may be omitted.
    pub compose: BTreeMap<(usize, usize), Vec<(Scalar, usize)>>,
}

impl Spec {
    pub fn build(&self) -> DgPresentation {
        let mut b = PresentationBuilder::new(&self.name, self.field);
        for o in &self.objects {
            b.object(o);
        }
        for (s, t, l, j) in &self.basis {
            b.basis(&self.objects[*s], &self.objects[*t], l, *j);
        }
        let label = |i: usize| self.basis[i].2.clone();
        let terms = |v: &[(Scalar, usize)]| v.iter().map(|(c, i)| (c.clone(), label(*i))).collect();
        for (i, d) in self.diffs.iter().enumerate() {
            if !d.is_empty() {
                b.diff(&label(i), terms(d));
            }
        }
        for (x, &u) in self.units.iter().enumerate() {
            b.unit(&self.objects[x], &label(u));
        }
        for ((g, f), v) in &self.compose {
            b.compose(&label(*g), &label(*f), terms(v));
        }
        b.build().expect("generated specs are structurally sound")
    }

    pub fn is_unit(&self, i: usize) -> bool {
        self.units.contains(&i)
    }

    /// Basis ids of `hom(s, t)` in degree `j`.
    pub fn ids(&self, s: usize, t: usize, j: i32) -> Vec<usize> {
        (0..self.basis.len())
            .filter(|&i| {
                let b = &self.basis[i];
                (b.0, b.1, b.3) == (s, t, j)
            })
            .collect()
    }
}

struct Block {
    /// Entries `(row, col)` of the elementary matrices in this degree.
    entries: Vec<(usize, usize)>,
    /// Basis vectors in elementary coordinates, as columns.
    basis: Matrix,
    ids: Vec<usize>,
}

fn dense_to_coords(m: &Matrix, entries: &[(usize, usize)]) -> Vec<Scalar> {
    entries.iter().map(|&(i, j)| m.get(i, j).clone()).collect()
}

fn coords_to_dense(field: Field, rows: usize, cols: usize, entries: &[(usize, usize)], v: &[Scalar]) -> Matrix {
    let mut m = Matrix::zeros(field, rows, cols);
    for (&(i, j), c) in entries.iter().zip(v) {
        m.set(i, j, c.clone());
    }
    m
}

fn rank_of(field: Field, n: usize, cols: &[Vec<Scalar>]) -> usize {
    if cols.is_empty() {
        return 0;
    }
    Matrix::from_columns(field, n, cols).unwrap().rank()
}

/// The dg-category on the given complexes, hom bases randomly changed.
pub fn endomorphism_spec(
    name: &str,
    field: Field,
    complexes: &[SmallComplex],
    truncate: bool,
    rng: &mut Rand,
) -> Spec {
    let n = complexes.len();
    let objects: Vec<String> = (0..n).map(|i| format!("X{i}")).collect();
    let mut basis = Vec::new();
    let mut units = vec![usize::MAX; n];
    let mut blocks: BTreeMap<(usize, usize, i32), Block> = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            let (v, w) = (&complexes[a], &complexes[b]);
            let mut by_degree: BTreeMap<i32, Vec<(usize, usize)>> = BTreeMap::new();
            for i in 0..w.dim() {
                for j in 0..v.dim() {
                    by_degree.entry(w.degrees[i] - v.degrees[j]).or_default().push((i, j));
                }
            }
            for (&k, entries) in &by_degree {
                if truncate && k > 0 {
                    continue;
                }
                let dim = entries.len();
                // spanning vectors of the kept part, in elementary coordinates
                let mut span: Vec<Vec<Scalar>> = if truncate && k == 0 {
                    let target = by_degree.get(&1).cloned().unwrap_or_default();
                    let cols: Vec<Vec<Scalar>> = (0..dim)
                        .map(|c| {
                            let mut e = vec![field.zero(); dim];
                            e[c] = field.one();
                            let m = coords_to_dense(field, w.dim(), v.dim(), entries, &e);
                            let dm = hom_d(&m, v, w, 0);
                            dense_to_coords(&dm, &target)
                        })
                        .collect();
                    if target.is_empty() {
                        identity_columns(field, dim)
                    } else {
                        Matrix::from_columns(field, target.len(), &cols).unwrap().kernel()
                    }
                } else {
                    identity_columns(field, dim)
                };
                if span.is_empty() {
                    continue;
                }
                span.shuffle(rng);
                let id = (a == b && k == 0).then(|| {
                    let m = Matrix::identity(field, v.dim());
                    dense_to_coords(&m, entries)
                });
                let mut chosen: Vec<Vec<Scalar>> = Vec::new();
                if let Some(id) = &id {
                    chosen.push(id.clone());
                }
                for s in span {
                    let mut trial = chosen.clone();
                    trial.push(s.clone());
                    if rank_of(field, dim, &trial) == trial.len() {
                        chosen = trial;
                    }
                }
                // unitriangular change of the non-identity part
                let first = usize::from(id.is_some());
                for j in first..chosen.len() {
                    for l in first..j {
                        if rng.gen_bool(0.4) {
                            let c = scalar(field, rng);
                            let add: Vec<Scalar> = chosen[l].iter().map(|x| &c * x).collect();
                            for (x, y) in chosen[j].iter_mut().zip(add) {
                                *x = &*x + &y;
                            }
                        }
                    }
                    if let Some(id) = &id {
                        if rng.gen_bool(0.3) {
                            let c = scalar(field, rng);
                            for (x, y) in chosen[j].iter_mut().zip(id) {
                                *x = &*x + &(&c * y);
                            }
                        }
                    }
                }
                let mut rest: Vec<Vec<Scalar>> = chosen.split_off(first);
                rest.shuffle(rng);
                chosen.extend(rest);
                let mut ids = Vec::new();
                for (pos, _) in chosen.iter().enumerate() {
                    let i = basis.len();
                    let label = if first == 1 && pos == 0 {
                        units[a] = i;
                        format!("1_{}", objects[a])
                    } else {
                        format!("m{a}{b}n{i}")
                    };
                    basis.push((a, b, label, k));
                    ids.push(i);
                }
                blocks.insert(
                    (a, b, k),
                    Block {
                        entries: entries.clone(),
                        basis: Matrix::from_columns(field, dim, &chosen).unwrap(),
                        ids,
                    },
                );
            }
        }
    }

    let express = |a: usize, b: usize, k: i32, m: &Matrix| -> Vec<(Scalar, usize)> {
        let Some(block) = blocks.get(&(a, b, k)) else {
            assert!(m.is_zero(), "value outside the kept part");
            return Vec::new();
        };
        let x = block
            .basis
            .solve(&dense_to_coords(m, &block.entries))
            .unwrap()
            .expect("value lies in the kept span");
        x.into_iter()
            .zip(&block.ids)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, &i)| (c, i))
            .collect()
    };
    let dense = |i: usize| -> Matrix {
        let (a, b, _, k) = basis[i].clone();
        let block = &blocks[&(a, b, k)];
        let pos = block.ids.iter().position(|&x| x == i).unwrap();
        coords_to_dense(
            field,
            complexes[b].dim(),
            complexes[a].dim(),
            &block.entries,
            &block.basis.column(pos),
        )
    };

    let mut diffs = Vec::new();
    for i in 0..basis.len() {
        let (a, b, _, k) = basis[i].clone();
        let dm = hom_d(&dense(i), &complexes[a], &complexes[b], k);
        diffs.push(express(a, b, k + 1, &dm));
    }
    let mut compose = BTreeMap::new();
    for g in 0..basis.len() {
        for f in 0..basis.len() {
            let (fa, fb, _, fk) = basis[f].clone();
            let (ga, gb, _, gk) = basis[g].clone();
            if ga != fb {
                continue;
            }
            let m = dense(g).mul(&dense(f)).unwrap();
            compose.insert((g, f), express(fa, gb, fk + gk, &m));
        }
    }
    compose.retain(|_, v| !v.is_empty());
    Spec {
        name: name.to_string(),
        field,
        objects,
        basis,
        units,
        diffs,
        compose,
    }
}

fn identity_columns(field: Field, n: usize) -> Vec<Vec<Scalar>> {
    (0..n)
        .map(|c| {
            let mut e = vec![field.zero(); n];
            e[c] = field.one();
            e
        })
        .collect()
}

/// `d f = d_W f − (−1)^k f d_V`.
fn hom_d(f: &Matrix, v: &SmallComplex, w: &SmallComplex, k: i32) -> Matrix {
    let field = f.field();
    let left = w.d.mul(f).unwrap();
    let right = f.mul(&v.d).unwrap();
    let s = field.sign(k as i64);
    let mut out = left;
    for i in 0..out.rows() {
        for j in 0..out.cols() {
            let x = out.get(i, j) - &(&s * right.get(i, j));
            out.set(i, j, x);
        }
    }
    out
}

/// Random valid target category with at most `max_dim` basis elements.
pub fn random_target(field: Field, max_dim: usize, rng: &mut Rand) -> Spec {
    loop {
        let n_obj = rng.gen_range(1..=3);
        let complexes: Vec<SmallComplex> = (0..n_obj)
            .map(|_| {
                let n = rng.gen_range(1..=2);
                random_complex(field, n, rng)
            })
            .collect();
        let truncate = rng.gen_bool(0.5);
        let spec = endomorphism_spec("B", field, &complexes, truncate, rng);
        if spec.basis.len() <= max_dim {
            return spec;
        }
    }
}

/// Like [`random_target`], with cohomology of every object in degree 0, so
/// negative cohomology of every hom vanishes.
pub fn vanishing_target(field: Field, max_dim: usize, rng: &mut Rand) -> Spec {
    loop {
        let n_obj = rng.gen_range(1..=2);
        let complexes: Vec<SmallComplex> = (0..n_obj)
            .map(|i| {
                let h = rng.gen_range(usize::from(i == 0)..=2);
                let c = [0, 1, 1, 2][rng.gen_range(0..4)];
                let starts: Vec<i32> = (0..c).map(|_| rng.gen_range(-1..=0)).collect();
                degree_zero_complex(field, h, &starts, rng)
            })
            .collect();
        if complexes.iter().any(|c| c.dim() == 0) {
            continue;
        }
        let truncate = rng.gen_bool(0.3);
        let spec = endomorphism_spec("B", field, &complexes, truncate, rng);
        if spec.basis.len() <= max_dim {
            return spec;
        }
    }
}

/// One object `k ⊕ (k → k)[1] ⊕ (k → k)`: homs reach degree −2.
pub fn deep_target(field: Field, rng: &mut Rand) -> Spec {
    let v = degree_zero_complex(field, 1, &[-1, 0], rng);
    endomorphism_spec("B", field, &[v], false, rng)
}

// ---------------------------------------------------------------------------
// linear sources

/// A linear category with units `1_<object>`; composites with identities
/// follow the unit law.
pub fn linear(
    field: Field,
    objects: &[&str],
    arrows: &[(&str, &str, &str)],
    composes: &[(&str, &str, &[(i64, &str)])],
) -> DgPresentation {
    let mut b = PresentationBuilder::new("E", field);
    for o in objects {
        b.object(o);
    }
    for o in objects {
        let u = format!("1_{o}");
        b.basis(o, o, &u, 0);
        b.unit(o, &u);
    }
    for (s, t, l) in arrows {
        b.basis(s, t, l, 0);
    }
    for (g, f, terms) in composes {
        let t = terms
            .iter()
            .map(|(c, l)| (field.from_i64(*c), l.to_string()))
            .collect();
        b.compose(g, f, t);
    }
    b.build().unwrap()
}

pub fn a2(field: Field) -> DgPresentation {
    linear(field, &["E0", "E1"], &[("E0", "E1", "a")], &[])
}

/// `a : E0 → E1`, `b : E1 → E2`, `c : E0 → E2` with `b∘a = λc`.
pub fn a3(field: Field, lambda: i64) -> DgPresentation {
    linear(
        field,
        &["E0", "E1", "E2"],
        &[("E0", "E1", "a"), ("E1", "E2", "b"), ("E0", "E2", "c")],
        &[("b", "a", &[(lambda, "c")])],
    )
}

pub fn kronecker(field: Field) -> DgPresentation {
    linear(field, &["E0", "E1"], &[("E0", "E1", "a"), ("E0", "E1", "b")], &[])
}

/// `k[x]/x²`: composable tuples `(x, …, x)` of every length.
pub fn dual_numbers(field: Field) -> DgPresentation {
    linear(field, &["E0"], &[("E0", "E0", "x")], &[])
}

/// The path category of `E0 → E1 → E2 → E3`.
pub fn a4(field: Field) -> DgPresentation {
    linear(
        field,
        &["E0", "E1", "E2", "E3"],
        &[
            ("E0", "E1", "a"),
            ("E1", "E2", "b"),
            ("E2", "E3", "c"),
            ("E0", "E2", "ba"),
            ("E1", "E3", "cb"),
            ("E0", "E3", "cba"),
        ],
        &[
            ("b", "a", &[(1, "ba")]),
            ("c", "b", &[(1, "cb")]),
            ("c", "ba", &[(1, "cba")]),
            ("cb", "a", &[(1, "cba")]),
        ],
    )
}

pub fn random_linear(field: Field, rng: &mut Rand) -> DgPresentation {
    match rng.gen_range(0..8) {
        0 => a2(field),
        1 | 2 => a3(field, 1),
        3 => a3(field, 0),
        4 => kronecker(field),
        5 | 6 => dual_numbers(field),
        _ => a4(field),
    }
}

// ---------------------------------------------------------------------------
// morphisms and functors

pub fn random_morphism(b: &DgPresentation, s: usize, t: usize, degree: i32, rng: &mut Rand) -> Morphism {
    let mut m = b.zero(s, t, degree);
    for c in m.vector.coords.iter_mut() {
        *c = scalar(b.field(), rng);
    }
    m
}

pub fn random_cycle(b: &DgPresentation, s: usize, t: usize, degree: i32, rng: &mut Rand) -> Morphism {
    let mut m = b.zero(s, t, degree);
    for z in b.complex(s, t).d_matrix(degree).kernel() {
        let c = scalar(b.field(), rng);
        for (x, y) in m.vector.coords.iter_mut().zip(&z) {
            *x = &*x + &(&c * y);
        }
    }
    m
}

pub fn random_boundary(b: &DgPresentation, s: usize, t: usize, degree: i32, rng: &mut Rand) -> Morphism {
    let k = random_morphism(b, s, t, degree - 1, rng);
    b.d(&k)
}

/// Degrees `j` with a nonzero hom anywhere in `b`.
pub fn min_degree(b: &DgPresentation) -> i32 {
    b.basis().iter().map(|e| e.degree).min().unwrap_or(0).min(0)
}

/// Tuple length past which every functor component into `b` vanishes.
pub fn functor_length(b: &DgPresentation) -> usize {
    (2 - min_degree(b)).max(3) as usize
}

/// Random strictly unital A∞-functor `E → B` on the given objects, valid up
/// to [`functor_length`]. Images of composite basis elements of `E` follow
/// the composite of the images up to a boundary; higher components solve
/// the obstruction and add a random cocycle. `None` if an obstruction is not
/// a coboundary.
pub fn random_functor(
    e: &Arc<DgPresentation>,
    b: &Arc<DgPresentation>,
    objects: Vec<usize>,
    rng: &mut Rand,
) -> Option<AInfFunctor> {
    let len = functor_length(b);
    let field = b.field();
    let mut first: BTreeMap<usize, Morphism> = BTreeMap::new();
    for i in 0..e.basis().len() {
        if e.is_unit(i) {
            continue;
        }
        let be = &e.basis()[i];
        let (s, t) = (objects[be.source], objects[be.target]);
        let composite = e.structure_constants().iter().find_map(|(&(g, f), v)| {
            if e.is_unit(g) || e.is_unit(f) || !first.contains_key(&g) || !first.contains_key(&f) {
                return None;
            }
            let terms: Vec<_> = e.terms(v).collect();
            match terms[..] {
                [(c, id)] if id == i => Some((c.clone(), g, f)),
                _ => None,
            }
        });
        let value = match composite {
            Some((c, g, f)) => {
                let mut m = b.compose(&first[&g], &first[&f]).ok()?;
                m = m.scaled(&c.inverse().unwrap());
                m.axpy(&field.one(), &random_boundary(b, s, t, 0, rng)).ok()?;
                m
            }
            None => match rng.gen_range(0..4) {
                0 => random_boundary(b, s, t, 0, rng),
                1 => b.zero(s, t, 0),
                _ => random_cycle(b, s, t, 0, rng),
            },
        };
        first.insert(i, value);
    }
    let comps: Vec<_> = first.into_iter().map(|(i, m)| (vec![i], m)).collect();
    let mut f = AInfFunctor::new(e.clone(), b.clone(), objects.clone(), comps, 1).ok()?;
    for d in 2..=len {
        let mut updates = Vec::new();
        for t in e.tuples(d, false) {
            let o = obstruction(&f, &t).ok()?;
            // μ¹x = (−1)^{1−d} dx
            let y = o.scaled(&field.sign(1 - d as i64));
            let hom = b.complex(o.source, o.target);
            let x = hom.solve_coboundary(&y.vector).ok()?;
            let mut m = Morphism {
                source: o.source,
                target: o.target,
                vector: x,
            };
            if rng.gen_bool(0.5) {
                m.axpy(&field.one(), &random_cycle(b, o.source, o.target, 1 - d as i32, rng))
                    .ok()?;
            }
            updates.push((t, m));
        }
        f = f.with_components(updates, d).ok()?;
    }
    let report = check_ainf_functor(&f, len + 1).ok()?;
    assert!(report.is_valid(), "generated functor is invalid:\n{report}");
    Some(f)
}

pub fn random_objects(e: &DgPresentation, b: &DgPresentation, rng: &mut Rand) -> Vec<usize> {
    (0..e.num_objects()).map(|_| rng.gen_range(0..b.num_objects())).collect()
}

/// Retries [`random_functor`] on fresh object images.
pub fn some_functor(e: &Arc<DgPresentation>, b: &Arc<DgPresentation>, rng: &mut Rand) -> AInfFunctor {
    loop {
        let objects = random_objects(e, b, rng);
        if let Some(f) = random_functor(e, b, objects, rng) {
            return f;
        }
    }
}

/// A functor on the same objects as `f` whose first components differ from
/// `f`'s by boundaries, so `H⁰` agrees.
pub fn perturbed_functor(f: &AInfFunctor, rng: &mut Rand) -> Option<AInfFunctor> {
    let (e, b) = (f.source(), f.target());
    let len = functor_length(b);
    let field = b.field();
    let mut comps = Vec::new();
    for i in 0..e.basis().len() {
        if e.is_unit(i) {
            continue;
        }
        let mut m = f.component(&[i]).ok()?;
        m.axpy(&field.one(), &random_boundary(b, m.source, m.target, 0, rng)).ok()?;
        comps.push((vec![i], m));
    }
    let mut g = AInfFunctor::new(e.clone(), b.clone(), f.objects().to_vec(), comps, 1).ok()?;
    for d in 2..=len {
        let mut updates = Vec::new();
        for t in e.tuples(d, false) {
            let o = obstruction(&g, &t).ok()?;
            let y = o.scaled(&field.sign(1 - d as i64));
            let x = b.complex(o.source, o.target).solve_coboundary(&y.vector).ok()?;
            updates.push((
                t,
                Morphism {
                    source: o.source,
                    target: o.target,
                    vector: x,
                },
            ));
        }
        g = g.with_components(updates, d).ok()?;
    }
    check_ainf_functor(&g, len + 1).ok()?.is_valid().then_some(g)
}

/// Random pre-natural transformation of degree `g` with components on
/// non-identity tuples up to `len`.
pub fn random_prenat(f: &AInfFunctor, g: &AInfFunctor, degree: i32, len: usize, rng: &mut Rand) -> PreNatTrans {
    let (e, b) = (f.source(), f.target());
    let h0 = (0..e.num_objects())
        .map(|x| random_morphism(b, *f.object(x), *g.object(x), degree, rng))
        .collect();
    let mut comps = Vec::new();
    for d in 1..=len {
        for t in e.tuples(d, false) {
            let x0 = e.basis()[t[t.len() - 1]].source;
            let xd = e.basis()[t[0]].target;
            let m = random_morphism(b, *f.object(x0), *g.object(xd), degree - d as i32, rng);
            comps.push((t, m));
        }
    }
    PreNatTrans::new(f.clone(), g.clone(), degree, h0, comps, len).unwrap()
}

/// `a + c·b` componentwise.
pub fn add_prenat(a: &PreNatTrans, c: &Scalar, b: &PreNatTrans) -> PreNatTrans {
    let h0 = a
        .h0_all()
        .iter()
        .zip(b.h0_all())
        .map(|(x, y)| {
            let mut m = x.clone();
            m.axpy(c, y).unwrap();
            m
        })
        .collect();
    let mut comps = a.components().clone();
    for (t, v) in b.components() {
        match comps.get_mut(t) {
            Some(m) => m.axpy(c, v).unwrap(),
            None => {
                comps.insert(t.clone(), v.scaled(c));
            }
        }
    }
    PreNatTrans::new(
        a.f().clone(),
        a.g().clone(),
        a.degree(),
        h0,
        comps,
        a.max_degree().max(b.max_degree()),
    )
    .unwrap()
}

/// Every scalar tuple of length `n` over a finite field, or a small grid
/// over ℚ.
pub fn all_vectors(field: Field, n: usize) -> Vec<Vec<Scalar>> {
    let values = field
        .elements()
        .unwrap_or_else(|| (-1..=1).map(|i| field.from_i64(i)).collect());
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                values.iter().map(move |c| {
                    let mut w = v.clone();
                    w.push(c.clone());
                    w
                })
            })
            .collect();
    }
    out
}

// ---------------------------------------------------------------------------
// lifting problems

/// Dimensions of `H⁰(F E, G E)` for every object `E`.
pub fn class_dims(f: &AInfFunctor, g: &AInfFunctor) -> Vec<usize> {
    let b = f.target();
    (0..f.source().num_objects())
        .map(|x| b.complex(*f.object(x), *g.object(x)).cohomology(0).dim())
        .collect()
}

pub fn split(v: &[Scalar], dims: &[usize]) -> Vec<Vec<Scalar>> {
    let mut out = Vec::new();
    let mut at = 0;
    for &n in dims {
        out.push(v[at..at + n].to_vec());
        at += n;
    }
    out
}

/// Families `φ̄` sorted into natural and non-natural ones, by enumeration
/// when there are few candidates and by sampling otherwise.
pub fn families(
    f: &AInfFunctor,
    g: &AInfFunctor,
    rng: &mut Rand,
) -> (Vec<Vec<Vec<Scalar>>>, Vec<Vec<Vec<Scalar>>>) {
    use dglift::ainf::{check_h0_naturality, h0_of_functor};
    let field = f.target().field();
    let dims = class_dims(f, g);
    let n: usize = dims.iter().sum();
    let candidates: Vec<Vec<Scalar>> = if n <= 5 {
        all_vectors(field, n)
    } else {
        (0..200).map(|_| (0..n).map(|_| scalar(field, rng)).collect()).collect()
    };
    let (hf, hg) = (h0_of_functor(f).unwrap(), h0_of_functor(g).unwrap());
    let mut good = Vec::new();
    let mut bad = Vec::new();
    for c in candidates {
        let phi = split(&c, &dims);
        match check_h0_naturality(&hf, &hg, &phi) {
            Ok(()) => good.push(phi),
            Err(_) => bad.push(phi),
        }
    }
    (good, bad)
}

/// Random `(F, G, φ̄)` with `φ̄` natural. `G` is usually a perturbation of
/// `F`, sometimes an unrelated functor.
pub fn random_problem(
    field: Field,
    max_dim: usize,
    vanishing: bool,
    rng: &mut Rand,
) -> (AInfFunctor, AInfFunctor, Vec<Vec<Scalar>>) {
    loop {
        let spec = if vanishing && max_dim >= 25 && rng.gen_bool(0.25) {
            deep_target(field, rng)
        } else if vanishing {
            vanishing_target(field, max_dim, rng)
        } else {
            random_target(field, max_dim, rng)
        };
        let b = Arc::new(spec.build());
        let e = Arc::new(random_linear(field, rng));
        let f = some_functor(&e, &b, rng);
        let g = if rng.gen_bool(0.7) {
            match perturbed_functor(&f, rng) {
                Some(g) => g,
                None => continue,
            }
        } else {
            some_functor(&e, &b, rng)
        };
        let (good, _) = families(&f, &g, rng);
        if let Some(phi) = good.choose(rng) {
            return (f, g, phi.clone());
        }
    }
}
