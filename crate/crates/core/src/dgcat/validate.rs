use std::fmt;

use super::{maltese, DgPresentation, Morphism};
use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    DSquared,
    Leibniz,
    Associativity,
    Unit,
    UnitClosed,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::DSquared => "d-squared",
            Axiom::Leibniz => "leibniz",
            Axiom::Associativity => "associativity",
            Axiom::Unit => "unit",
            Axiom::UnitClosed => "unit-closed",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub axiom: Axiom,
    /// Offending basis labels, outermost first.
    pub tuple: Vec<String>,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn mentions(&self, axiom: Axiom) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }

    /// The first violation as an error, if any.
    pub fn into_result(self) -> Result<(), Error> {
        match self.violations.into_iter().next() {
            None => Ok(()),
            Some(v) => Err(Error::Validation {
                axiom: v.axiom.to_string(),
                tuple: v.tuple.join(","),
            }),
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return writeln!(f, "valid");
        }
        for v in &self.violations {
            writeln!(f, "{} ({}): {}", v.axiom, v.tuple.join(","), v.detail)?;
        }
        Ok(())
    }
}

fn difference(p: &DgPresentation, lhs: &Morphism, rhs: &Morphism) -> Morphism {
    let mut r = lhs.clone();
    r.axpy(&p.field().from_i64(-1), rhs)
        .expect("both sides live in the same hom");
    r
}

/// Checks d² = 0, the Leibniz rule, associativity and the unit laws on all
/// basis elements, pairs and triples.
pub fn validate_dg_category(p: &DgPresentation) -> ValidationReport {
    let mut violations = Vec::new();
    let field = p.field();

    for (id, b) in p.basis().iter().enumerate() {
        let x = p.basis_morphism(id);
        let dd = p.d(&p.d(&x));
        if !dd.is_zero() {
            violations.push(Violation {
                axiom: Axiom::DSquared,
                tuple: vec![b.label.clone()],
                detail: format!("d(d({})) = {}", b.label, p.format(&dd)),
            });
        }
    }

    for obj in 0..p.num_objects() {
        let one = p.identity(obj);
        let d1 = p.d(&one);
        let label = &p.basis()[p.unit(obj)].label;
        if !d1.is_zero() {
            violations.push(Violation {
                axiom: Axiom::UnitClosed,
                tuple: vec![label.clone()],
                detail: format!("d({label}) = {}", p.format(&d1)),
            });
        }
        for (id, b) in p.basis().iter().enumerate() {
            let f = p.basis_morphism(id);
            if b.target == obj {
                let c = p.compose(&one, &f).expect("composable");
                if c != f {
                    violations.push(Violation {
                        axiom: Axiom::Unit,
                        tuple: vec![label.clone(), b.label.clone()],
                        detail: format!("{label} . {} = {}", b.label, p.format(&c)),
                    });
                }
            }
            if b.source == obj {
                let c = p.compose(&f, &one).expect("composable");
                if c != f {
                    violations.push(Violation {
                        axiom: Axiom::Unit,
                        tuple: vec![b.label.clone(), label.clone()],
                        detail: format!("{} . {label} = {}", b.label, p.format(&c)),
                    });
                }
            }
        }
    }

    for pair in p.tuples(2, true) {
        let (g, f) = (p.basis_morphism(pair[0]), p.basis_morphism(pair[1]));
        let lhs = p.d(&p.compose(&g, &f).expect("composable"));
        let mut rhs = p.compose(&p.d(&g), &f).expect("composable");
        rhs.axpy(
            &field.sign(g.degree() as i64),
            &p.compose(&g, &p.d(&f)).expect("composable"),
        )
        .expect("same hom");
        if lhs != rhs {
            violations.push(Violation {
                axiom: Axiom::Leibniz,
                tuple: p.tuple_labels(&pair),
                detail: format!("defect {}", p.format(&difference(p, &lhs, &rhs))),
            });
        }
    }

    for triple in p.tuples(3, true) {
        let h = p.basis_morphism(triple[0]);
        let g = p.basis_morphism(triple[1]);
        let f = p.basis_morphism(triple[2]);
        let lhs = p.compose(&p.compose(&h, &g).unwrap(), &f).unwrap();
        let rhs = p.compose(&h, &p.compose(&g, &f).unwrap()).unwrap();
        if lhs != rhs {
            violations.push(Violation {
                axiom: Axiom::Associativity,
                tuple: p.tuple_labels(&triple),
                detail: format!("defect {}", p.format(&difference(p, &lhs, &rhs))),
            });
        }
    }

    ValidationReport { violations }
}

// μ applied to a list (f_k, …, f_1); zero for k > 2
fn mu(p: &DgPresentation, args: &[Morphism]) -> Morphism {
    match args {
        [f] => p.mu1(f),
        [g, f] => p.mu2(g, f).expect("composable"),
        _ => {
            let degree: i32 = args.iter().map(Morphism::degree).sum::<i32>() + 2 - args.len() as i32;
            p.zero(args[args.len() - 1].source, args[0].target, degree)
        }
    }
}

/// Residuals of the A∞ equations of the dg-as-A∞ view, on every composable
/// basis tuple of length `1..=max_len`. Each entry is `(tuple labels, value)`.
pub fn ainf_view_residuals(p: &DgPresentation, max_len: usize) -> Vec<(Vec<String>, String)> {
    let field = p.field();
    let mut out = Vec::new();
    for d in 1..=max_len {
        for tuple in p.tuples(d, true) {
            // args[k] = f_{k+1}, i.e. reversed relative to the tuple
            let args: Vec<Morphism> = tuple.iter().rev().map(|&i| p.basis_morphism(i)).collect();
            let degrees: Vec<i32> = args.iter().map(Morphism::degree).collect();
            let total: i32 = degrees.iter().sum();
            let mut acc = p.zero(args[0].source, args[d - 1].target, total + 3 - d as i32);
            for m in 1..=d {
                for n in 0..=(d - m) {
                    let inner_args: Vec<Morphism> = args[n..n + m].iter().rev().cloned().collect();
                    let inner = mu(p, &inner_args);
                    let mut outer_args: Vec<Morphism> = args[n + m..].iter().rev().cloned().collect();
                    outer_args.push(inner);
                    outer_args.extend(args[..n].iter().rev().cloned());
                    let term = mu(p, &outer_args);
                    let sign = field.sign(maltese(&degrees, n).expect("n ≤ d"));
                    acc.axpy(&sign, &term).expect("same hom and degree");
                }
            }
            if !acc.is_zero() {
                out.push((p.tuple_labels(&tuple), p.format(&acc)));
            }
        }
    }
    out
}
