//! Canonical text form of a [`LiftCertificate`], closed by a SHA-256 digest
//! of everything before the `DIGEST` line.

use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use super::parse::{located, tokenize, Line, Pos};
use crate::ainf::PreNatTrans;
use crate::dgcat::Morphism;
use crate::error::{Error, Result};
use crate::graded::Scalar;
use crate::lift::{LiftCertificate, LiftProblem, TranscriptEntry};

const MAGIC: &str = "DGLIFT-CERTIFICATE 1";

fn coords(v: &[Scalar]) -> String {
    v.iter().map(Scalar::to_string).collect::<Vec<_>>().join(" ")
}

fn digest(body: &str) -> String {
    hex::encode(Sha256::digest(body.as_bytes()))
}

pub fn serialize_certificate(cert: &LiftCertificate) -> String {
    let h = &cert.transformation;
    let e = h.f().source();
    let b = h.f().target();
    let mut s = String::new();
    let _ = writeln!(s, "{MAGIC}");
    let _ = writeln!(s, "FIELD {}", b.field());
    let _ = writeln!(s, "SOURCE {}", e.name());
    let _ = writeln!(s, "TARGET {}", b.name());
    let _ = writeln!(s, "DMAX {}", cert.d_max);
    let _ = writeln!(s, "ISO {}", cert.iso);
    let _ = writeln!(s, "PHI");
    for (x, v) in cert.phi.iter().enumerate() {
        let _ = writeln!(s, "at {} = {}", e.objects()[x], coords(v));
    }
    let _ = writeln!(s, "H0");
    for x in 0..e.num_objects() {
        let _ = writeln!(s, "at {} = {}", e.objects()[x], b.format(h.h0(x)));
    }
    let _ = writeln!(s, "COMPONENTS");
    // BTreeMap order is lexicographic in basis ids; list by length first
    let mut comps: Vec<_> = h.components().iter().collect();
    comps.sort_by(|(a, _), (b, _)| a.len().cmp(&b.len()).then(a.cmp(b)));
    for (t, v) in comps {
        let _ = writeln!(s, "comp {} ({}) = {}", t.len(), e.format_tuple(t), b.format(v));
    }
    let _ = writeln!(s, "INVERSES");
    for (x, inv) in cert.inverses.iter().enumerate() {
        match inv {
            Some(v) => {
                let _ = writeln!(s, "at {} = {}", e.objects()[x], coords(v));
            }
            None => {
                let _ = writeln!(s, "at {} none", e.objects()[x]);
            }
        }
    }
    let _ = writeln!(s, "TRANSCRIPT");
    for t in &cert.transcript {
        let _ = writeln!(
            s,
            "stage {} | {} | {} | {} | {}",
            t.stage, t.at, t.unknowns, t.equations, t.check
        );
    }
    let d = digest(&s);
    let _ = writeln!(s, "DIGEST sha256:{d}");
    s
}

fn cert_err(line: usize, message: impl Into<String>) -> Error {
    located(Pos { line, column: 1 }, message)
}

/// Parses a certificate against the problem it claims to solve. The digest
/// must match; the mathematical content is checked separately by
/// [`crate::lift::verify_certificate`].
pub fn parse_certificate(text: &str, p: &LiftProblem) -> Result<LiftCertificate> {
    let text = text.replace("\r\n", "\n");
    let Some(cut) = text.rfind("DIGEST sha256:") else {
        return Err(Error::Certificate("missing DIGEST line".into()));
    };
    let (body, tail) = text.split_at(cut);
    let claimed = tail["DIGEST sha256:".len()..].trim();
    if claimed != digest(body) {
        return Err(Error::Certificate("digest does not match the content".into()));
    }
    let e = p.source();
    let b = p.target();
    let field = b.field();
    let lines: Vec<(usize, &str)> = body
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty())
        .collect();
    let mut it = lines.into_iter().peekable();
    let mut header = |key: &str| -> Result<(usize, String)> {
        let (n, l) = it.next().ok_or_else(|| Error::Certificate(format!("missing {key}")))?;
        let rest = l
            .strip_prefix(key)
            .ok_or_else(|| cert_err(n, format!("expected {key}")))?;
        Ok((n, rest.trim().to_string()))
    };
    let (n, magic) = header("DGLIFT-CERTIFICATE")?;
    if magic != "1" {
        return Err(cert_err(n, format!("unsupported certificate version `{magic}`")));
    }
    let (n, f) = header("FIELD")?;
    if f != field.tag() {
        return Err(cert_err(n, format!("field {f} differs from the problem's {field}")));
    }
    let (n, s) = header("SOURCE")?;
    if s != e.name() {
        return Err(cert_err(n, format!("source {s} differs from {}", e.name())));
    }
    let (n, t) = header("TARGET")?;
    if t != b.name() {
        return Err(cert_err(n, format!("target {t} differs from {}", b.name())));
    }
    let (n, d) = header("DMAX")?;
    let d_max: usize = d.parse().map_err(|_| cert_err(n, "bad DMAX"))?;
    let (n, iso) = header("ISO")?;
    let iso = match iso.as_str() {
        "true" => true,
        "false" => false,
        _ => return Err(cert_err(n, "ISO must be true or false")),
    };

    let mut sections: Vec<(String, Vec<(usize, &str)>)> = Vec::new();
    for (n, l) in it {
        if l.chars().all(|c| c.is_ascii_uppercase() || c.is_ascii_digit()) {
            sections.push((l.to_string(), Vec::new()));
        } else {
            match sections.last_mut() {
                Some((_, v)) => v.push((n, l)),
                None => return Err(cert_err(n, "line outside a section")),
            }
        }
    }
    let names: Vec<&str> = sections.iter().map(|(s, _)| s.as_str()).collect();
    if names != ["PHI", "H0", "COMPONENTS", "INVERSES", "TRANSCRIPT"] {
        return Err(Error::Certificate(format!("unexpected sections {names:?}")));
    }
    let body_of = |k: usize| &sections[k].1;
    let object_at = |n: usize, l: &str| -> Result<(usize, Line)> {
        let mut line = Line::new(tokenize(l, n)?, n, l.len());
        line.expect("at")?;
        let o = line.word("an object")?;
        let x = e
            .object_index(&o.text)
            .ok_or_else(|| located(o.pos, format!("unknown object `{}`", o.text)))?;
        Ok((x, line))
    };
    let per_object = |k: usize| -> Result<Vec<(usize, usize, Line)>> {
        let rows = body_of(k);
        if rows.len() != e.num_objects() {
            return Err(Error::Certificate(format!(
                "{} lists {} objects, expected {}",
                sections[k].0,
                rows.len(),
                e.num_objects()
            )));
        }
        rows.iter()
            .enumerate()
            .map(|(i, &(n, l))| {
                let (x, line) = object_at(n, l)?;
                if x != i {
                    return Err(cert_err(n, "objects out of order"));
                }
                Ok((n, x, line))
            })
            .collect()
    };

    let mut phi = Vec::new();
    for (_, _, mut line) in per_object(0)? {
        line.expect("=")?;
        let mut v = Vec::new();
        while !line.is_done() {
            v.push(line.scalar(field)?);
        }
        phi.push(v);
    }
    let (f, g) = (p.f(), p.g());
    let mut h0 = Vec::new();
    for (_, x, mut line) in per_object(1)? {
        line.expect("=")?;
        let terms = line.combination(field)?;
        h0.push(morphism(b, &terms, *f.object(x), *g.object(x), 0)?);
    }
    let mut comps = Vec::new();
    for &(n, l) in body_of(2) {
        let mut line = Line::new(tokenize(l, n)?, n, l.len());
        line.expect("comp")?;
        let arity = line.integer("an arity")?;
        line.expect("(")?;
        let mut tuple = Vec::new();
        loop {
            let t = line.word("a basis label")?;
            let id = e
                .basis_id(&t.text)
                .ok_or_else(|| located(t.pos, format!("unknown basis label `{}`", t.text)))?;
            tuple.push(id);
            if line.peek() == Some(",") {
                line.next(",")?;
            } else {
                break;
            }
        }
        line.expect(")")?;
        line.expect("=")?;
        if arity != tuple.len() as i64 {
            return Err(cert_err(n, "arity does not match the tuple"));
        }
        let terms = line.combination(field)?;
        let (x0, xd) = crate::ainf::tuple_endpoints(e, &tuple)?;
        comps.push((
            tuple.clone(),
            morphism(b, &terms, *f.object(x0), *g.object(xd), -(tuple.len() as i32))?,
        ));
    }
    let mut inverses = Vec::new();
    if !body_of(3).is_empty() || e.num_objects() == 0 {
        for (_, _, mut line) in per_object(3)? {
            if line.peek() == Some("none") {
                line.next("none")?;
                line.finish()?;
                inverses.push(None);
                continue;
            }
            line.expect("=")?;
            let mut v = Vec::new();
            while !line.is_done() {
                v.push(line.scalar(field)?);
            }
            inverses.push(Some(v));
        }
    }
    let mut transcript = Vec::new();
    for &(n, l) in body_of(4) {
        let parts: Vec<&str> = l.split(" | ").collect();
        let [stage, at, unknowns, equations, check] = parts[..] else {
            return Err(cert_err(n, "transcript lines have five fields"));
        };
        let num = |s: &str| s.trim().parse::<usize>().map_err(|_| cert_err(n, "bad number"));
        let stage = stage
            .strip_prefix("stage ")
            .ok_or_else(|| cert_err(n, "expected `stage`"))?;
        transcript.push(TranscriptEntry {
            stage: num(stage)?,
            at: at.to_string(),
            unknowns: num(unknowns)?,
            equations: num(equations)?,
            check: check.to_string(),
        });
    }
    let transformation = PreNatTrans::new(f.clone(), g.clone(), 0, h0, comps, d_max)?;
    Ok(LiftCertificate {
        transformation,
        phi,
        d_max,
        transcript,
        iso,
        inverses,
    })
}

fn morphism(
    b: &crate::dgcat::DgPresentation,
    terms: &[(Scalar, super::parse::Tok)],
    source: usize,
    target: usize,
    degree: i32,
) -> Result<Morphism> {
    let mut m = b.zero(source, target, degree);
    for (c, t) in terms {
        let id = b
            .basis_id(&t.text)
            .ok_or_else(|| located(t.pos, format!("unknown basis label `{}`", t.text)))?;
        let e = b.basis_morphism(id);
        if (e.source, e.target, e.degree()) != (source, target, degree) {
            return Err(located(t.pos, format!("`{}` is in the wrong hom or degree", t.text)));
        }
        m.axpy(c, &e)?;
    }
    Ok(m)
}
