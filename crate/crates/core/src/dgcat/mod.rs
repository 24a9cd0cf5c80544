//! Finite dg-category presentations.
//!
//! A presentation lists objects, a labelled basis for every hom complex, the
//! differential on basis elements and the composition structure constants on
//! basis pairs. Identities are designated basis elements. The A∞ view of a
//! dg-category uses
//!
//! ```text
//! μ¹(f)    = (-1)^|f| df
//! μ²(g, f) = (-1)^|f| g∘f
//! μᵈ       = 0 for d > 2
//! ```

mod h0;
mod validate;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

pub use h0::{homotopy_category, H0Category};
pub use validate::{ainf_view_residuals, validate_dg_category, Axiom, ValidationReport, Violation};

use crate::error::{Error, Result};
use crate::graded::{Complex, Field, GradedSpace, GradedVector, Matrix, Scalar};

/// A basis morphism of some hom complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub label: String,
    pub source: usize,
    pub target: usize,
    pub degree: i32,
    /// Position inside the basis of `hom(source, target)` in this degree.
    pub position: usize,
}

/// A homogeneous morphism: a vector in one degree of `hom(source, target)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Morphism {
    pub source: usize,
    pub target: usize,
    pub vector: GradedVector,
}

impl Morphism {
    pub fn degree(&self) -> i32 {
        self.vector.degree
    }

    pub fn is_zero(&self) -> bool {
        self.vector.is_zero()
    }

    pub fn axpy(&mut self, c: &Scalar, other: &Morphism) -> Result<()> {
        if (self.source, self.target) != (other.source, other.target) {
            return Err(Error::Shape(format!(
                "adding morphisms {}→{} and {}→{}",
                self.source, self.target, other.source, other.target
            )));
        }
        self.vector.axpy(c, &other.vector)
    }

    pub fn scaled(&self, c: &Scalar) -> Morphism {
        Morphism {
            source: self.source,
            target: self.target,
            vector: self.vector.scaled(c),
        }
    }
}

/// One hom complex together with the global ids of its basis elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hom {
    complex: Complex,
    ids: BTreeMap<i32, Vec<usize>>,
}

impl Hom {
    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn ids(&self, degree: i32) -> &[usize] {
        self.ids.get(&degree).map_or(&[], Vec::as_slice)
    }

    pub fn space(&self) -> &GradedSpace {
        self.complex.space()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgPresentation {
    name: String,
    field: Field,
    objects: Vec<String>,
    basis: Vec<BasisElement>,
    labels: HashMap<String, usize>,
    homs: BTreeMap<(usize, usize), Hom>,
    units: Vec<usize>,
    compose: BTreeMap<(usize, usize), Morphism>,
}

/// A linear combination of basis labels.
pub type Terms = Vec<(Scalar, String)>;

#[derive(Clone, Debug)]
pub struct PresentationBuilder {
    name: String,
    field: Field,
    objects: Vec<String>,
    basis: Vec<(String, String, String, i32)>,
    diffs: Vec<(String, Terms)>,
    units: Vec<(String, String)>,
    compose: Vec<(String, String, Terms)>,
}

impl PresentationBuilder {
    pub fn new(name: &str, field: Field) -> PresentationBuilder {
        PresentationBuilder {
            name: name.to_string(),
            field,
            objects: Vec::new(),
            basis: Vec::new(),
            diffs: Vec::new(),
            units: Vec::new(),
            compose: Vec::new(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn object(&mut self, name: &str) -> &mut Self {
        self.objects.push(name.to_string());
        self
    }

    pub fn basis(&mut self, source: &str, target: &str, label: &str, degree: i32) -> &mut Self {
        self.basis
            .push((source.to_string(), target.to_string(), label.to_string(), degree));
        self
    }

    pub fn diff(&mut self, label: &str, terms: Terms) -> &mut Self {
        self.diffs.push((label.to_string(), terms));
        self
    }

    pub fn unit(&mut self, object: &str, label: &str) -> &mut Self {
        self.units.push((object.to_string(), label.to_string()));
        self
    }

    /// Sets the composite `g ∘ f`.
    pub fn compose(&mut self, g: &str, f: &str, terms: Terms) -> &mut Self {
        self.compose.push((g.to_string(), f.to_string(), terms));
        self
    }

    /// Resolves all labels and assembles the presentation. Only structural
    /// problems are errors here; the dg axioms are checked by
    /// [`validate_dg_category`]. Composites with an identity factor that are
    /// not given explicitly default to the unit law.
    pub fn build(&self) -> Result<DgPresentation> {
        let field = self.field;
        let mut obj_index = HashMap::new();
        for (i, o) in self.objects.iter().enumerate() {
            if obj_index.insert(o.clone(), i).is_some() {
                return Err(Error::Malformed(format!("duplicate object `{o}`")));
            }
        }
        let obj = |name: &str| -> Result<usize> {
            obj_index
                .get(name)
                .copied()
                .ok_or_else(|| Error::Malformed(format!("unknown object `{name}`")))
        };

        let mut labels = HashMap::new();
        let mut basis = Vec::new();
        let mut ids: BTreeMap<(usize, usize), BTreeMap<i32, Vec<usize>>> = BTreeMap::new();
        for (s, t, label, degree) in &self.basis {
            if !valid_label(label) {
                return Err(Error::Malformed(format!("invalid label `{label}`")));
            }
            let (s, t) = (obj(s)?, obj(t)?);
            let id = basis.len();
            if labels.insert(label.clone(), id).is_some() {
                return Err(Error::Malformed(format!("duplicate label `{label}`")));
            }
            let slot = ids.entry((s, t)).or_default().entry(*degree).or_default();
            basis.push(BasisElement {
                label: label.clone(),
                source: s,
                target: t,
                degree: *degree,
                position: slot.len(),
            });
            slot.push(id);
        }
        let lookup = |label: &str| -> Result<usize> {
            labels
                .get(label)
                .copied()
                .ok_or_else(|| Error::Malformed(format!("unknown label `{label}`")))
        };

        // vector of a combination inside a prescribed hom and degree
        let to_vector = |terms: &Terms, s: usize, t: usize, degree: i32, what: &str| {
            let dim = ids
                .get(&(s, t))
                .and_then(|m| m.get(&degree))
                .map_or(0, Vec::len);
            let mut v = GradedVector::zero(field, degree, dim);
            for (c, label) in terms {
                let id = lookup(label)?;
                let b: &BasisElement = &basis[id];
                if (b.source, b.target, b.degree) != (s, t, degree) {
                    return Err(Error::Malformed(format!(
                        "`{label}` does not lie in the hom and degree of {what}"
                    )));
                }
                v.coords[b.position] = &v.coords[b.position] + c;
            }
            Ok::<GradedVector, Error>(v)
        };

        let mut diff_cols: BTreeMap<usize, GradedVector> = BTreeMap::new();
        for (label, terms) in &self.diffs {
            let id = lookup(label)?;
            let b = &basis[id];
            let v = to_vector(terms, b.source, b.target, b.degree + 1, &format!("d {label}"))?;
            if diff_cols.insert(id, v).is_some() {
                return Err(Error::Malformed(format!("differential of `{label}` given twice")));
            }
        }

        let mut homs = BTreeMap::new();
        for s in 0..self.objects.len() {
            for t in 0..self.objects.len() {
                let degree_ids = ids.get(&(s, t)).cloned().unwrap_or_default();
                let space_labels: BTreeMap<i32, Vec<String>> = degree_ids
                    .iter()
                    .map(|(&j, v)| (j, v.iter().map(|&i| basis[i].label.clone()).collect()))
                    .collect();
                let space = GradedSpace::new(field, space_labels)?;
                let mut blocks = BTreeMap::new();
                for (&j, members) in &degree_ids {
                    let rows = space.dim(j + 1);
                    let mut m = Matrix::zeros(field, rows, members.len());
                    let mut any = false;
                    for (col, id) in members.iter().enumerate() {
                        if let Some(v) = diff_cols.get(id) {
                            for (row, x) in v.coords.iter().enumerate() {
                                if !x.is_zero() {
                                    any = true;
                                    m.set(row, col, x.clone());
                                }
                            }
                        }
                    }
                    if any {
                        blocks.insert(j, m);
                    }
                }
                let complex = Complex::from_parts(space, blocks)?;
                homs.insert(
                    (s, t),
                    Hom {
                        complex,
                        ids: degree_ids,
                    },
                );
            }
        }

        let mut units = vec![None; self.objects.len()];
        for (o, label) in &self.units {
            let x = obj(o)?;
            let id = lookup(label)?;
            let b = &basis[id];
            if (b.source, b.target, b.degree) != (x, x, 0) {
                return Err(Error::Malformed(format!(
                    "unit `{label}` of `{o}` must be a degree 0 endomorphism of `{o}`"
                )));
            }
            if units[x].replace(id).is_some() {
                return Err(Error::Malformed(format!("unit of `{o}` given twice")));
            }
        }
        let units: Vec<usize> = units
            .into_iter()
            .enumerate()
            .map(|(i, u)| {
                u.ok_or_else(|| Error::Malformed(format!("object `{}` has no unit", self.objects[i])))
            })
            .collect::<Result<_>>()?;

        let mut compose = BTreeMap::new();
        for (g, f, terms) in &self.compose {
            let (gi, fi) = (lookup(g)?, lookup(f)?);
            let (gb, fb) = (&basis[gi], &basis[fi]);
            if gb.source != fb.target {
                return Err(Error::Malformed(format!("`{g} . {f}` is not composable")));
            }
            let v = to_vector(
                terms,
                fb.source,
                gb.target,
                gb.degree + fb.degree,
                &format!("{g} . {f}"),
            )?;
            let m = Morphism {
                source: fb.source,
                target: gb.target,
                vector: v,
            };
            if compose.insert((gi, fi), m).is_some() {
                return Err(Error::Malformed(format!("composite `{g} . {f}` given twice")));
            }
        }

        let mut p = DgPresentation {
            name: self.name.clone(),
            field,
            objects: self.objects.clone(),
            basis,
            labels,
            homs,
            units,
            compose,
        };
        for id in 0..p.basis.len() {
            let b = p.basis[id].clone();
            let e = p.basis_morphism(id);
            p.compose.entry((p.units[b.target], id)).or_insert_with(|| e.clone());
            p.compose.entry((id, p.units[b.source])).or_insert(e);
        }
        Ok(p)
    }
}

fn valid_label(label: &str) -> bool {
    !label.is_empty()
        && label
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
        && label.parse::<i64>().is_err()
}

impl DgPresentation {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn basis_id(&self, label: &str) -> Option<usize> {
        self.labels.get(label).copied()
    }

    pub fn unit(&self, object: usize) -> usize {
        self.units[object]
    }

    pub fn is_unit(&self, id: usize) -> bool {
        let b = &self.basis[id];
        b.source == b.target && self.units[b.source] == id
    }

    pub fn hom(&self, source: usize, target: usize) -> &Hom {
        &self.homs[&(source, target)]
    }

    pub fn complex(&self, source: usize, target: usize) -> &Complex {
        self.hom(source, target).complex()
    }

    /// Sum of all hom dimensions over all object pairs and degrees.
    pub fn total_dim(&self) -> usize {
        self.basis.len()
    }

    /// The raw composition table, including defaulted unit entries.
    pub fn structure_constants(&self) -> &BTreeMap<(usize, usize), Morphism> {
        &self.compose
    }

    /// True when every hom is concentrated in degree 0 with zero differential.
    pub fn is_linear(&self) -> bool {
        self.basis.iter().all(|b| b.degree == 0)
    }

    pub fn zero(&self, source: usize, target: usize, degree: i32) -> Morphism {
        Morphism {
            source,
            target,
            vector: self.complex(source, target).space().zero_vector(degree),
        }
    }

    pub fn basis_morphism(&self, id: usize) -> Morphism {
        let b = &self.basis[id];
        let mut m = self.zero(b.source, b.target, b.degree);
        m.vector.coords[b.position] = self.field.one();
        m
    }

    pub fn identity(&self, object: usize) -> Morphism {
        self.basis_morphism(self.units[object])
    }

    /// Builds a morphism from (coefficient, basis id) pairs inside a given
    /// hom and degree.
    pub fn combination(
        &self,
        source: usize,
        target: usize,
        degree: i32,
        terms: &[(Scalar, usize)],
    ) -> Result<Morphism> {
        let mut m = self.zero(source, target, degree);
        for (c, id) in terms {
            let b = &self.basis[*id];
            if (b.source, b.target, b.degree) != (source, target, degree) {
                return Err(Error::Shape(format!(
                    "`{}` is not in degree {degree} of hom({}, {})",
                    b.label, self.objects[source], self.objects[target]
                )));
            }
            m.vector.coords[b.position] = &m.vector.coords[b.position] + c;
        }
        Ok(m)
    }

    /// Nonzero (coefficient, basis id) pairs of a morphism in basis order.
    pub fn terms<'a>(&'a self, m: &'a Morphism) -> impl Iterator<Item = (&'a Scalar, usize)> + 'a {
        let ids = self.hom(m.source, m.target).ids(m.degree());
        m.vector
            .coords
            .iter()
            .zip(ids.iter())
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, &id)| (c, id))
    }

    /// The plain differential `d`.
    pub fn d(&self, m: &Morphism) -> Morphism {
        let v = self
            .complex(m.source, m.target)
            .d(&m.vector)
            .expect("morphism vectors match their hom by construction");
        Morphism {
            source: m.source,
            target: m.target,
            vector: v,
        }
    }

    /// The plain composite `g ∘ f`.
    pub fn compose(&self, g: &Morphism, f: &Morphism) -> Result<Morphism> {
        if g.source != f.target {
            return Err(Error::NotComposable(format!(
                "{} ∘ {}",
                self.format(g),
                self.format(f)
            )));
        }
        let mut out = self.zero(f.source, g.target, g.degree() + f.degree());
        for (cg, gi) in self.terms(g) {
            for (cf, fi) in self.terms(f) {
                if let Some(gf) = self.compose.get(&(gi, fi)) {
                    out.axpy(&(cg * cf), gf)?;
                }
            }
        }
        Ok(out)
    }

    /// `μ¹(f) = (-1)^|f| df`.
    pub fn mu1(&self, f: &Morphism) -> Morphism {
        self.d(f).scaled(&self.field.sign(f.degree() as i64))
    }

    /// `μ²(g, f) = (-1)^|f| g∘f`.
    pub fn mu2(&self, g: &Morphism, f: &Morphism) -> Result<Morphism> {
        Ok(self.compose(g, f)?.scaled(&self.field.sign(f.degree() as i64)))
    }

    /// Composable basis tuples `(f_d, …, f_1)` of length `d`, ordered by the
    /// source object of `f_1`, then by basis order of `f_1`, `f_2`, ….
    pub fn tuples(&self, d: usize, include_identities: bool) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        if d == 0 {
            return out;
        }
        let allowed: Vec<usize> = (0..self.basis.len())
            .filter(|&i| include_identities || !self.is_unit(i))
            .collect();
        let mut stack: Vec<usize> = Vec::new();
        for x0 in 0..self.objects.len() {
            self.extend_tuples(x0, d, &allowed, &mut stack, &mut out);
        }
        out
    }

    fn extend_tuples(
        &self,
        from: usize,
        d: usize,
        allowed: &[usize],
        stack: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if stack.len() == d {
            out.push(stack.iter().rev().copied().collect());
            return;
        }
        for &i in allowed {
            if self.basis[i].source == from {
                stack.push(i);
                self.extend_tuples(self.basis[i].target, d, allowed, stack, out);
                stack.pop();
            }
        }
    }

    /// Labels of a tuple, for reports.
    pub fn tuple_labels(&self, tuple: &[usize]) -> Vec<String> {
        tuple.iter().map(|&i| self.basis[i].label.clone()).collect()
    }

    pub fn format_tuple(&self, tuple: &[usize]) -> String {
        self.tuple_labels(tuple).join(",")
    }

    /// Canonical text of a morphism as a linear combination of labels.
    pub fn format(&self, m: &Morphism) -> String {
        let terms: Vec<(Scalar, &str)> = self
            .terms(m)
            .map(|(c, id)| (c.clone(), self.basis[id].label.as_str()))
            .collect();
        format_combination(&terms)
    }
}

/// Formats `c₁ l₁ + c₂ l₂ …`, dropping unit coefficients; `0` when empty.
pub fn format_combination(terms: &[(Scalar, &str)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (c, label)) in terms.iter().enumerate() {
        let (neg, mag) = if c.is_negative() { (true, -c) } else { (false, c.clone()) };
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !mag.is_one() {
            out.push_str(&mag.to_string());
            out.push(' ');
        }
        out.push_str(label);
    }
    out
}

/// `✠ₙ = |f₁| + … + |fₙ| − n`, with `degrees[0] = |f₁|`.
pub fn maltese(degrees: &[i32], n: usize) -> Result<i64> {
    if n > degrees.len() {
        return Err(Error::Index(format!(
            "maltese of {n} arguments from a list of {}",
            degrees.len()
        )));
    }
    Ok(degrees[..n].iter().map(|&x| x as i64).sum::<i64>() - n as i64)
}

impl fmt::Display for DgPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({} objects, {} basis morphisms over {})",
            self.name,
            self.objects.len(),
            self.basis.len(),
            self.field
        )
    }
}
