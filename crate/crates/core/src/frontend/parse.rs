//! The sectioned problem format.
//!
//! ```text
//! FIELD q
//! CATEGORY B
//! OBJECTS X Y
//! HOM X Y
//! basis t degree -1
//! basis s0 degree 0
//! DIFF
//! d t = s0 - s1
//! UNIT X 1_X
//! COMPOSE
//! g . f = 2 h
//! FUNCTOR F
//! obj E0 -> X
//! comp 1 (a) = s0
//! TRANSFORM
//! at E0 = 1
//! ```
//!
//! `FUNCTOR F : E -> B` names source and target explicitly; by default they
//! are the first and the last category of the file. `TRANSFORM F -> G`
//! likewise defaults to the first two functors.

use std::collections::HashMap;
use std::sync::Arc;

use crate::ainf::AInfFunctor;
use crate::dgcat::{validate_dg_category, DgPresentation, Morphism, PresentationBuilder, Terms};
use crate::error::{Error, Result};
use crate::graded::{Field, GradedVector, Scalar};
use crate::lift::LiftProblem;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub(crate) struct Pos {
    pub line: usize,
    pub column: usize,
}

pub(crate) fn located(pos: Pos, message: impl Into<String>) -> Error {
    Error::Parse {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Tok {
    pub text: String,
    pub pos: Pos,
}

fn is_word(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\'' || c == '/'
}

/// Splits one line into words and punctuation; `#` starts a comment.
pub(crate) fn tokenize(line: &str, number: usize) -> Result<Vec<Tok>> {
    let line = line.split('#').next().unwrap_or("");
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos {
            line: number,
            column: i + 1,
        };
        if c.is_ascii_whitespace() {
            i += 1;
        } else if is_word(c) {
            let start = i;
            while i < chars.len() && is_word(chars[i]) {
                i += 1;
            }
            out.push(Tok {
                text: chars[start..i].iter().collect(),
                pos,
            });
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push(Tok {
                text: "->".into(),
                pos,
            });
            i += 2;
        } else if "+-=(),.*:".contains(c) {
            out.push(Tok {
                text: c.to_string(),
                pos,
            });
            i += 1;
        } else {
            return Err(located(pos, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

fn is_scalar(text: &str) -> bool {
    text.chars().any(|c| c.is_ascii_digit()) && text.chars().all(|c| c.is_ascii_digit() || c == '/')
}

/// A cursor over the tokens of one line.
pub(crate) struct Line {
    toks: Vec<Tok>,
    at: usize,
    end: Pos,
}

impl Line {
    pub(crate) fn new(toks: Vec<Tok>, number: usize, len: usize) -> Line {
        Line {
            toks,
            at: 0,
            end: Pos {
                line: number,
                column: len + 1,
            },
        }
    }

    pub(crate) fn pos(&self) -> Pos {
        self.toks.get(self.at).map_or(self.end, |t| t.pos)
    }

    pub(crate) fn peek(&self) -> Option<&str> {
        self.toks.get(self.at).map(|t| t.text.as_str())
    }

    pub(crate) fn is_done(&self) -> bool {
        self.at >= self.toks.len()
    }

    pub(crate) fn next(&mut self, what: &str) -> Result<Tok> {
        match self.toks.get(self.at) {
            Some(t) => {
                self.at += 1;
                Ok(t.clone())
            }
            None => Err(located(self.end, format!("expected {what}"))),
        }
    }

    pub(crate) fn word(&mut self, what: &str) -> Result<Tok> {
        let pos = self.pos();
        let t = self.next(what)?;
        if !t.text.chars().all(is_word) {
            return Err(located(pos, format!("expected {what}, found `{}`", t.text)));
        }
        Ok(t)
    }

    pub(crate) fn expect(&mut self, text: &str) -> Result<()> {
        let pos = self.pos();
        let t = self.next(&format!("`{text}`"))?;
        if t.text != text {
            return Err(located(pos, format!("expected `{text}`, found `{}`", t.text)));
        }
        Ok(())
    }

    pub(crate) fn finish(&self) -> Result<()> {
        match self.toks.get(self.at) {
            None => Ok(()),
            Some(t) => Err(located(t.pos, format!("unexpected `{}`", t.text))),
        }
    }

    pub(crate) fn scalar(&mut self, field: Field) -> Result<Scalar> {
        let mut neg = false;
        if self.peek() == Some("-") {
            self.at += 1;
            neg = true;
        }
        let pos = self.pos();
        let t = self.next("a scalar")?;
        let c = field
            .parse_scalar(&t.text)
            .map_err(|_| located(pos, format!("bad scalar `{}`", t.text)))?;
        Ok(if neg { -c } else { c })
    }

    pub(crate) fn integer(&mut self, what: &str) -> Result<i64> {
        let mut neg = false;
        if self.peek() == Some("-") {
            self.at += 1;
            neg = true;
        }
        let pos = self.pos();
        let t = self.next(what)?;
        let n: i64 = t
            .text
            .parse()
            .map_err(|_| located(pos, format!("expected {what}, found `{}`", t.text)))?;
        Ok(if neg { -n } else { n })
    }

    /// `c₁ l₁ ± c₂ l₂ …` or `0`, to the end of the line.
    pub(crate) fn combination(&mut self, field: Field) -> Result<Vec<(Scalar, Tok)>> {
        if self.peek() == Some("0") && self.toks.len() == self.at + 1 {
            self.at += 1;
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        let mut first = true;
        while !self.is_done() {
            let mut c = field.one();
            match self.peek() {
                Some("+") if !first => self.at += 1,
                Some("-") => {
                    self.at += 1;
                    c = -c;
                }
                _ if first => {}
                _ => {
                    let t = self.next("`+` or `-`")?;
                    return Err(located(t.pos, format!("expected `+` or `-`, found `{}`", t.text)));
                }
            }
            first = false;
            if let Some(text) = self.peek() {
                if is_scalar(text) {
                    let pos = self.pos();
                    let t = self.next("a scalar")?;
                    let k = field
                        .parse_scalar(&t.text)
                        .map_err(|_| located(pos, format!("bad scalar `{}`", t.text)))?;
                    c = &c * &k;
                    if self.peek() == Some("*") {
                        self.at += 1;
                    }
                }
            }
            let label = self.word("a basis label")?;
            if is_scalar(&label.text) {
                return Err(located(label.pos, format!("expected a basis label, found `{}`", label.text)));
            }
            out.push((c, label));
        }
        if out.is_empty() {
            return Err(located(self.end, "expected a linear combination"));
        }
        Ok(out)
    }
}

#[derive(Debug, Default)]
struct RawCategory {
    name: String,
    pos: Pos,
    objects: Vec<Tok>,
    basis: Vec<(Tok, Tok, Tok, i32)>,
    diffs: Vec<(Tok, Vec<(Scalar, Tok)>)>,
    units: Vec<(Tok, Tok)>,
    compose: Vec<(Tok, Tok, Vec<(Scalar, Tok)>)>,
}

#[derive(Debug)]
struct RawFunctor {
    name: String,
    pos: Pos,
    ends: Option<(Tok, Tok)>,
    objects: Vec<(Tok, Tok)>,
    comps: Vec<(Pos, Vec<Tok>, Vec<(Scalar, Tok)>)>,
}

#[derive(Debug)]
struct RawTransform {
    pos: Pos,
    ends: Option<(Tok, Tok)>,
    at: Vec<(Tok, Vec<Scalar>, Pos)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Section {
    None,
    Category,
    Hom,
    Diff,
    Compose,
    Functor,
    Transform,
}

/// A transformation block resolved against its functors.
#[derive(Clone, Debug, PartialEq)]
pub struct TransformBlock {
    pub f: String,
    pub g: String,
    /// H⁰ coordinates at every source object, zero-padded.
    pub phi: Vec<Vec<Scalar>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProblemFile {
    pub field: Field,
    pub categories: Vec<Arc<DgPresentation>>,
    pub functors: Vec<(String, AInfFunctor)>,
    pub transform: Option<TransformBlock>,
}

impl ProblemFile {
    pub fn category(&self, name: &str) -> Option<&Arc<DgPresentation>> {
        self.categories.iter().find(|c| c.name() == name)
    }

    pub fn functor(&self, name: &str) -> Option<&AInfFunctor> {
        self.functors.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }

    /// The validated lifting problem of the file's `TRANSFORM` block.
    pub fn lift_problem(&self) -> Result<LiftProblem> {
        let t = self
            .transform
            .as_ref()
            .ok_or_else(|| located(Pos { line: 1, column: 1 }, "no TRANSFORM block"))?;
        let f = self.functor(&t.f).expect("resolved at parse time").clone();
        let g = self.functor(&t.g).expect("resolved at parse time").clone();
        LiftProblem::new(f, g, t.phi.clone())
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ParseOptions {
    /// Replaces the file's `FIELD` line.
    pub field: Option<Field>,
    /// Skips the dg-axiom validation of categories.
    pub skip_validation: bool,
}

/// Parses and validates a problem file.
pub fn parse_problem(text: &str) -> Result<ProblemFile> {
    parse_problem_with(text, &ParseOptions::default())
}

/// The first category of a file.
pub fn parse_presentation(text: &str) -> Result<DgPresentation> {
    let file = parse_problem(text)?;
    match file.categories.first() {
        Some(c) => Ok((**c).clone()),
        None => Err(located(Pos { line: 1, column: 1 }, "no CATEGORY block")),
    }
}

pub fn parse_problem_with(text: &str, opts: &ParseOptions) -> Result<ProblemFile> {
    let mut field: Option<(Field, Pos)> = None;
    let mut cats: Vec<RawCategory> = Vec::new();
    let mut functors: Vec<RawFunctor> = Vec::new();
    let mut transform: Option<RawTransform> = None;
    let mut section = Section::None;
    let mut hom: Option<(Tok, Tok)> = None;
    // scalars are parsed once the field is known
    let mut pending_field = opts.field;

    for (k, raw) in text.lines().enumerate() {
        let number = k + 1;
        let raw = raw.trim_end_matches('\r');
        if let Some((i, c)) = raw.char_indices().find(|(_, c)| !c.is_ascii()) {
            return Err(located(
                Pos {
                    line: number,
                    column: raw[..i].chars().count() + 1,
                },
                format!("non-ASCII character `{c}`"),
            ));
        }
        let toks = tokenize(raw, number)?;
        if toks.is_empty() {
            continue;
        }
        let mut line = Line::new(toks, number, raw.len());
        let head = line.peek().unwrap_or("").to_string();
        let head_pos = line.pos();
        let need_field = |f: &Option<Field>| -> Result<Field> {
            f.ok_or_else(|| located(head_pos, "FIELD must come first"))
        };
        match head.as_str() {
            "FIELD" => {
                line.next("FIELD")?;
                let pos = line.pos();
                let t = line.word("a field")?;
                line.finish()?;
                let parsed: Field = t
                    .text
                    .parse()
                    .map_err(|_| located(pos, format!("unknown field `{}`", t.text)))?;
                if field.is_some() {
                    return Err(located(head_pos, "FIELD given twice"));
                }
                field = Some((parsed, pos));
                if opts.field.is_none() {
                    pending_field = Some(parsed);
                }
                section = Section::None;
            }
            "CATEGORY" => {
                line.next("CATEGORY")?;
                let name = line.word("a category name")?;
                line.finish()?;
                if cats.iter().any(|c| c.name == name.text) {
                    return Err(located(name.pos, format!("duplicate category `{}`", name.text)));
                }
                cats.push(RawCategory {
                    name: name.text,
                    pos: head_pos,
                    ..RawCategory::default()
                });
                section = Section::Category;
            }
            "OBJECTS" | "HOM" | "DIFF" | "UNIT" | "COMPOSE" => {
                if !matches!(
                    section,
                    Section::Category | Section::Hom | Section::Diff | Section::Compose
                ) {
                    return Err(located(head_pos, format!("{head} outside a CATEGORY block")));
                }
                let cat = cats.last_mut().expect("inside a category");
                line.next(&head)?;
                section = Section::Category;
                match head.as_str() {
                    "OBJECTS" => {
                        while !line.is_done() {
                            cat.objects.push(line.word("an object name")?);
                        }
                    }
                    "HOM" => {
                        let s = line.word("a source object")?;
                        let t = line.word("a target object")?;
                        line.finish()?;
                        hom = Some((s, t));
                        section = Section::Hom;
                    }
                    "DIFF" => {
                        line.finish()?;
                        section = Section::Diff;
                    }
                    "UNIT" => {
                        let o = line.word("an object")?;
                        let l = line.word("a basis label")?;
                        line.finish()?;
                        cat.units.push((o, l));
                    }
                    _ => {
                        line.finish()?;
                        section = Section::Compose;
                    }
                }
            }
            "FUNCTOR" => {
                line.next("FUNCTOR")?;
                let name = line.word("a functor name")?;
                let ends = if line.peek() == Some(":") {
                    line.next(":")?;
                    let s = line.word("a source category")?;
                    line.expect("->")?;
                    let t = line.word("a target category")?;
                    Some((s, t))
                } else {
                    None
                };
                line.finish()?;
                if functors.iter().any(|f| f.name == name.text) {
                    return Err(located(name.pos, format!("duplicate functor `{}`", name.text)));
                }
                functors.push(RawFunctor {
                    name: name.text,
                    pos: head_pos,
                    ends,
                    objects: Vec::new(),
                    comps: Vec::new(),
                });
                section = Section::Functor;
            }
            "TRANSFORM" => {
                line.next("TRANSFORM")?;
                let ends = if line.is_done() {
                    None
                } else {
                    let f = line.word("a functor name")?;
                    line.expect("->")?;
                    let g = line.word("a functor name")?;
                    Some((f, g))
                };
                line.finish()?;
                if transform.is_some() {
                    return Err(located(head_pos, "TRANSFORM given twice"));
                }
                transform = Some(RawTransform {
                    pos: head_pos,
                    ends,
                    at: Vec::new(),
                });
                section = Section::Transform;
            }
            _ => match section {
                Section::Hom => {
                    line.expect("basis")?;
                    let label = line.word("a basis label")?;
                    line.expect("degree")?;
                    let pos = line.pos();
                    let deg = line.integer("a degree")?;
                    line.finish()?;
                    let deg = i32::try_from(deg).map_err(|_| located(pos, "degree out of range"))?;
                    let (s, t) = hom.clone().expect("inside a HOM block");
                    cats.last_mut().expect("inside a category").basis.push((s, t, label, deg));
                }
                Section::Diff => {
                    let f = need_field(&pending_field)?;
                    line.expect("d")?;
                    let label = line.word("a basis label")?;
                    line.expect("=")?;
                    let terms = line.combination(f)?;
                    cats.last_mut().expect("inside a category").diffs.push((label, terms));
                }
                Section::Compose => {
                    let f = need_field(&pending_field)?;
                    let g = line.word("a basis label")?;
                    line.expect(".")?;
                    let ff = line.word("a basis label")?;
                    line.expect("=")?;
                    let terms = line.combination(f)?;
                    cats.last_mut().expect("inside a category").compose.push((g, ff, terms));
                }
                Section::Functor => {
                    let fld = need_field(&pending_field)?;
                    let raw = functors.last_mut().expect("inside a functor");
                    let kw = line.word("`obj` or `comp`")?;
                    match kw.text.as_str() {
                        "obj" => {
                            let e = line.word("a source object")?;
                            line.expect("->")?;
                            let b = line.word("a target object")?;
                            line.finish()?;
                            raw.objects.push((e, b));
                        }
                        "comp" => {
                            let dpos = line.pos();
                            let d = line.integer("an arity")?;
                            let tpos = line.pos();
                            line.expect("(")?;
                            let mut tuple = vec![line.word("a basis label")?];
                            while line.peek() == Some(",") {
                                line.next(",")?;
                                tuple.push(line.word("a basis label")?);
                            }
                            line.expect(")")?;
                            line.expect("=")?;
                            let terms = line.combination(fld)?;
                            if d != tuple.len() as i64 {
                                return Err(located(
                                    dpos,
                                    format!("arity {d} but {} arguments", tuple.len()),
                                ));
                            }
                            raw.comps.push((tpos, tuple, terms));
                        }
                        other => {
                            return Err(located(kw.pos, format!("expected `obj` or `comp`, found `{other}`")))
                        }
                    }
                }
                Section::Transform => {
                    let fld = need_field(&pending_field)?;
                    line.expect("at")?;
                    let o = line.word("an object")?;
                    line.expect("=")?;
                    let pos = line.pos();
                    let mut coords = Vec::new();
                    while !line.is_done() {
                        coords.push(line.scalar(fld)?);
                    }
                    transform.as_mut().expect("inside TRANSFORM").at.push((o, coords, pos));
                }
                _ => {
                    return Err(located(head_pos, format!("unexpected `{head}` outside any section")));
                }
            },
        }
    }

    let field = match (opts.field, field) {
        (Some(f), _) => f,
        (None, Some((f, _))) => f,
        (None, None) => return Err(located(Pos { line: 1, column: 1 }, "missing FIELD line")),
    };
    let mut categories = Vec::new();
    for raw in &cats {
        let p = resolve_category(raw, field)?;
        if !opts.skip_validation {
            validate_dg_category(&p).into_result()?;
        }
        categories.push(Arc::new(p));
    }
    let mut resolved = Vec::new();
    for raw in &functors {
        resolved.push((raw.name.clone(), resolve_functor(raw, &categories)?));
    }
    let transform = match transform {
        None => None,
        Some(raw) => Some(resolve_transform(&raw, &resolved)?),
    };
    Ok(ProblemFile {
        field,
        categories,
        functors: resolved,
        transform,
    })
}

fn resolve_category(raw: &RawCategory, field: Field) -> Result<DgPresentation> {
    let mut b = PresentationBuilder::new(&raw.name, field);
    let mut objects = HashMap::new();
    for o in &raw.objects {
        if objects.insert(o.text.clone(), ()).is_some() {
            return Err(located(o.pos, format!("duplicate object `{}`", o.text)));
        }
        b.object(&o.text);
    }
    let object = |t: &Tok| -> Result<()> {
        if objects.contains_key(&t.text) {
            Ok(())
        } else {
            Err(located(t.pos, format!("unknown object `{}` in {}", t.text, raw.name)))
        }
    };
    // label → (source, target, degree)
    let mut labels: HashMap<String, (String, String, i32)> = HashMap::new();
    for (s, t, l, deg) in &raw.basis {
        object(s)?;
        object(t)?;
        if is_scalar(&l.text) || l.text.contains('/') {
            return Err(located(l.pos, format!("invalid basis label `{}`", l.text)));
        }
        if labels
            .insert(l.text.clone(), (s.text.clone(), t.text.clone(), *deg))
            .is_some()
        {
            return Err(located(l.pos, format!("duplicate basis label `{}`", l.text)));
        }
        b.basis(&s.text, &t.text, &l.text, *deg);
    }
    let lookup = |t: &Tok| -> Result<&(String, String, i32)> {
        labels
            .get(&t.text)
            .ok_or_else(|| located(t.pos, format!("unknown basis label `{}` in {}", t.text, raw.name)))
    };
    let check_terms = |terms: &[(Scalar, Tok)], s: &str, t: &str, deg: i32| -> Result<Terms> {
        terms
            .iter()
            .map(|(c, l)| {
                let want = lookup(l)?;
                if (want.0.as_str(), want.1.as_str(), want.2) != (s, t, deg) {
                    return Err(located(
                        l.pos,
                        format!("`{}` is not in {s} → {t} degree {deg}", l.text),
                    ));
                }
                Ok((c.clone(), l.text.clone()))
            })
            .collect()
    };
    for (l, terms) in &raw.diffs {
        let (s, t, deg) = lookup(l)?.clone();
        b.diff(&l.text, check_terms(terms, &s, &t, deg + 1)?);
    }
    for (o, l) in &raw.units {
        object(o)?;
        lookup(l)?;
        b.unit(&o.text, &l.text);
    }
    for (g, f, terms) in &raw.compose {
        let (gs, gt, gd) = lookup(g)?.clone();
        let (fs, ft, fd) = lookup(f)?.clone();
        if ft != gs {
            return Err(located(g.pos, format!("`{}` . `{}` is not composable", g.text, f.text)));
        }
        b.compose(&g.text, &f.text, check_terms(terms, &fs, &gt, gd + fd)?);
    }
    b.build().map_err(|e| match e {
        Error::Malformed(m) => located(raw.pos, format!("in {}: {m}", raw.name)),
        other => other,
    })
}

fn combination_morphism(
    p: &DgPresentation,
    terms: &[(Scalar, Tok)],
    source: usize,
    target: usize,
    degree: i32,
) -> Result<Morphism> {
    let mut m = p.zero(source, target, degree);
    if let Some((_, first)) = terms.first() {
        let id = p
            .basis_id(&first.text)
            .ok_or_else(|| located(first.pos, format!("unknown basis label `{}` in {}", first.text, p.name())))?;
        m = p.zero(source, target, p.basis()[id].degree);
    }
    for (c, l) in terms {
        let id = p
            .basis_id(&l.text)
            .ok_or_else(|| located(l.pos, format!("unknown basis label `{}` in {}", l.text, p.name())))?;
        let e = p.basis_morphism(id);
        if (e.source, e.target, e.degree()) != (m.source, m.target, m.degree()) {
            return Err(located(
                l.pos,
                format!(
                    "`{}` is not in {} → {} degree {}",
                    l.text,
                    p.objects()[m.source],
                    p.objects()[m.target],
                    m.degree()
                ),
            ));
        }
        m.axpy(c, &e)?;
    }
    Ok(m)
}

fn resolve_functor(raw: &RawFunctor, cats: &[Arc<DgPresentation>]) -> Result<AInfFunctor> {
    let find = |t: &Tok| -> Result<Arc<DgPresentation>> {
        cats.iter()
            .find(|c| c.name() == t.text)
            .cloned()
            .ok_or_else(|| located(t.pos, format!("unknown category `{}`", t.text)))
    };
    let (src, tgt) = match &raw.ends {
        Some((s, t)) => (find(s)?, find(t)?),
        None => match (cats.first(), cats.last()) {
            (Some(s), Some(t)) => (s.clone(), t.clone()),
            _ => return Err(located(raw.pos, "FUNCTOR before any CATEGORY")),
        },
    };
    let mut objects = vec![None; src.num_objects()];
    for (e, b) in &raw.objects {
        let x = src
            .object_index(&e.text)
            .ok_or_else(|| located(e.pos, format!("unknown object `{}` in {}", e.text, src.name())))?;
        let y = tgt
            .object_index(&b.text)
            .ok_or_else(|| located(b.pos, format!("unknown object `{}` in {}", b.text, tgt.name())))?;
        if objects[x].replace(y).is_some() {
            return Err(located(e.pos, format!("object `{}` mapped twice", e.text)));
        }
    }
    let objects: Vec<usize> = objects
        .into_iter()
        .enumerate()
        .map(|(x, y)| {
            y.ok_or_else(|| {
                located(
                    raw.pos,
                    format!("{} has no image for `{}`", raw.name, src.objects()[x]),
                )
            })
        })
        .collect::<Result<_>>()?;
    let mut comps = Vec::new();
    let mut seen = HashMap::new();
    let mut longest = 1;
    for (tpos, tuple, terms) in &raw.comps {
        let ids: Vec<usize> = tuple
            .iter()
            .map(|t| {
                src.basis_id(&t.text)
                    .ok_or_else(|| located(t.pos, format!("unknown basis label `{}` in {}", t.text, src.name())))
            })
            .collect::<Result<_>>()?;
        for w in ids.windows(2) {
            if src.basis()[w[0]].source != src.basis()[w[1]].target {
                return Err(located(*tpos, format!("({}) is not composable", src.format_tuple(&ids))));
            }
        }
        if seen.insert(ids.clone(), ()).is_some() {
            return Err(located(*tpos, format!("component on ({}) given twice", src.format_tuple(&ids))));
        }
        let (x0, xd) = (src.basis()[ids[ids.len() - 1]].source, src.basis()[ids[0]].target);
        let degree = ids.iter().map(|&i| src.basis()[i].degree).sum::<i32>() + 1 - ids.len() as i32;
        let m = combination_morphism(&tgt, terms, objects[x0], objects[xd], degree)?;
        longest = longest.max(ids.len());
        comps.push((ids, m));
    }
    AInfFunctor::new(src, tgt, objects, comps, longest).map_err(|e| match e {
        Error::SourceTargetMismatch(m) => located(raw.pos, format!("in {}: {m}", raw.name)),
        other => other,
    })
}

fn resolve_transform(raw: &RawTransform, functors: &[(String, AInfFunctor)]) -> Result<TransformBlock> {
    let find = |t: &Tok| -> Result<&(String, AInfFunctor)> {
        functors
            .iter()
            .find(|(n, _)| *n == t.text)
            .ok_or_else(|| located(t.pos, format!("unknown functor `{}`", t.text)))
    };
    let (f, g) = match &raw.ends {
        Some((f, g)) => (find(f)?, find(g)?),
        None => match functors {
            [f, g, ..] => (f, g),
            _ => return Err(located(raw.pos, "TRANSFORM needs two functors")),
        },
    };
    let src = f.1.source();
    let tgt = f.1.target();
    let field = src.field();
    let mut phi: Vec<Option<Vec<Scalar>>> = vec![None; src.num_objects()];
    for (o, coords, pos) in &raw.at {
        let x = src
            .object_index(&o.text)
            .ok_or_else(|| located(o.pos, format!("unknown object `{}` in {}", o.text, src.name())))?;
        let dim = tgt.complex(*f.1.object(x), *g.1.object(x)).cohomology(0).dim();
        if coords.len() > dim {
            return Err(located(
                *pos,
                format!("{} coordinates for an H⁰ of dimension {dim}", coords.len()),
            ));
        }
        let mut v = coords.clone();
        v.resize(dim, field.zero());
        if phi[x].replace(v).is_some() {
            return Err(located(o.pos, format!("object `{}` given twice", o.text)));
        }
    }
    let phi = phi
        .into_iter()
        .enumerate()
        .map(|(x, v)| {
            v.unwrap_or_else(|| {
                let dim = tgt.complex(*f.1.object(x), *g.1.object(x)).cohomology(0).dim();
                GradedVector::zero(field, 0, dim).coords
            })
        })
        .collect();
    Ok(TransformBlock {
        f: f.0.clone(),
        g: g.0.clone(),
        phi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "\
FIELD q
CATEGORY B   # one object
OBJECTS X
HOM X X
basis 1_X degree 0
basis p degree -1
basis q degree 0
DIFF
d p = q
UNIT X 1_X
COMPOSE
q . q = 0
p . q = 0
q . p = 0
p . p = 0
";

    #[test]
    fn tokens_carry_columns() {
        let toks = tokenize("d t = s0 - 1/2 s1 # note", 4).unwrap();
        let texts: Vec<_> = toks.iter().map(|t| t.text.as_str()).collect();
        assert_eq!(texts, ["d", "t", "=", "s0", "-", "1/2", "s1"]);
        assert_eq!(toks[5].pos, Pos { line: 4, column: 12 });
    }

    #[test]
    fn combinations() {
        let f = Field::Rational;
        let toks = tokenize("-2 s0 + 3*s1 - t", 1).unwrap();
        let mut line = Line::new(toks, 1, 16);
        let c = line.combination(f).unwrap();
        let got: Vec<_> = c.iter().map(|(c, t)| format!("{c} {}", t.text)).collect();
        assert_eq!(got, ["-2 s0", "3 s1", "-1 t"]);
        let mut zero = Line::new(tokenize("0", 1).unwrap(), 1, 1);
        assert!(zero.combination(f).unwrap().is_empty());
    }

    #[test]
    fn a_small_category_parses_and_validates() {
        let p = parse_presentation(SMALL).unwrap();
        assert_eq!(p.total_dim(), 3);
        assert_eq!(p.format(&p.d(&p.basis_morphism(p.basis_id("p").unwrap()))), "q");
    }

    #[test]
    fn unknown_label_is_located() {
        let text = SMALL.replace("d p = q", "d p = r");
        match parse_presentation(&text) {
            Err(Error::Parse { line, column, message }) => {
                assert_eq!((line, column), (9, 7));
                assert!(message.contains("`r`"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn d_squared_violation_names_the_axiom() {
        let text = "\
FIELD f2
CATEGORY C
OBJECTS X
HOM X X
basis 1_X degree 0
basis x degree -2
basis y degree -1
basis z degree 0
DIFF
d x = y
d y = z
UNIT X 1_X
";
        match parse_presentation(text) {
            Err(Error::Validation { axiom, tuple }) => {
                assert_eq!(axiom, "d-squared");
                assert_eq!(tuple, "x");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn crlf_and_field_override() {
        let text = SMALL.replace('\n', "\r\n");
        let opts = ParseOptions {
            field: Some(Field::Prime(3)),
            ..ParseOptions::default()
        };
        let file = parse_problem_with(&text, &opts).unwrap();
        assert_eq!(file.field, Field::Prime(3));
        assert_eq!(file.categories[0].field(), Field::Prime(3));
    }

    #[test]
    fn stray_lines_are_errors() {
        let err = parse_problem("FIELD q\nbasis x degree 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, column: 1, .. }));
        let err = parse_problem("FIELD q\nCATEGORY C\nOBJECTS X\nHOM X X\nbasis x degree zero\n")
            .unwrap_err();
        assert!(matches!(err, Error::Parse { line: 5, column: 16, .. }));
        let err = parse_problem("FIELD q\nCATEGORY C é\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, column: 12, .. }));
    }
}
