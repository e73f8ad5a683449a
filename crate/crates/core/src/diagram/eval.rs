//! Shape checking and evaluation of terms against a workspace.

use crate::category::TracedCategory;
use crate::cpo::Cpo;
use crate::error::{Error, Result};
use crate::finfun::{PInj, Pfn, Rel};
use crate::object::ObjectExpr;
use crate::stoch::Stoch;
use crate::transducer::Resumptions;

use super::term::Term;
use super::workspace::{InstanceKind, IntoMorph, Morph, Workspace};

/// Runs generic code against the category behind an [`InstanceKind`].
pub trait InstanceVisitor {
    type Output;
    fn visit<C: TracedCategory>(self, cat: &C) -> Self::Output
    where
        C::Mor: IntoMorph;
}

impl InstanceKind {
    pub fn visit<V: InstanceVisitor>(self, v: V) -> V::Output {
        match self {
            InstanceKind::Pfn => v.visit(&Pfn),
            InstanceKind::PInj => v.visit(&PInj),
            InstanceKind::Rel => v.visit(&Rel),
            InstanceKind::Stoch => v.visit(&Stoch::default()),
            InstanceKind::Cpo => v.visit(&Cpo::default()),
            InstanceKind::Transducer => v.visit(&Resumptions::default()),
        }
    }
}

/// Infers `(dom, cod)` for a term, naming the offending subterm on failure.
pub fn shape_check(t: &Term, ws: &Workspace) -> Result<(ObjectExpr, ObjectExpr)> {
    match t {
        Term::Id(x) => {
            let x = ws.object(x)?;
            Ok((x.clone(), x))
        }
        Term::Sym(x, y) => {
            let (x, y) = (ws.object(x)?, ws.object(y)?);
            Ok((x.tensor(&y), y.tensor(&x)))
        }
        Term::Gen(name) => {
            let g = ws.generator(name)?;
            Ok((g.dom().clone(), g.cod().clone()))
        }
        Term::Seq(a, b) => {
            let (da, ca) = shape_check(a, ws)?;
            let (db, cb) = shape_check(b, ws)?;
            if ca != db {
                return Err(Error::Shape(format!(
                    "in `{t}`: `{a}` has codomain {ca} but `{b}` has domain {db}"
                )));
            }
            Ok((da, cb))
        }
        Term::Tensor(a, b) => {
            let (da, ca) = shape_check(a, ws)?;
            let (db, cb) = shape_check(b, ws)?;
            Ok((da.tensor(&db), ca.tensor(&cb)))
        }
        Term::Trace(u, body) => {
            let u_obj = ws.object(u)?;
            let (d, c) = shape_check(body, ws)?;
            match (d.strip_suffix(&u_obj), c.strip_suffix(&u_obj)) {
                (Some(a), Some(b)) => Ok((a, b)),
                _ => Err(Error::Shape(format!(
                    "in `{t}`: `{body}` has type {d} -> {c}, which does not end in {u} on both sides"
                ))),
            }
        }
    }
}

/// Evaluates a term in `cat`, taking generators from `ws`.
pub fn eval_with<C>(cat: &C, t: &Term, ws: &Workspace) -> Result<C::Mor>
where
    C: TracedCategory,
    C::Mor: IntoMorph,
{
    match t {
        Term::Id(x) => cat.identity(&ws.object(x)?),
        Term::Sym(x, y) => cat.symmetry(&ws.object(x)?, &ws.object(y)?),
        Term::Gen(name) => {
            let g = ws.generator(name)?;
            C::Mor::from_morph(g).cloned().ok_or_else(|| {
                Error::Validation(format!(
                    "generator {name} is a {} morphism, not {}",
                    g.kind(),
                    cat.name()
                ))
            })
        }
        Term::Seq(a, b) => cat.compose(&eval_with(cat, a, ws)?, &eval_with(cat, b, ws)?),
        Term::Tensor(a, b) => cat.tensor(&eval_with(cat, a, ws)?, &eval_with(cat, b, ws)?),
        Term::Trace(u, body) => cat.trace(&eval_with(cat, body, ws)?, &ws.object(u)?),
    }
}

struct Eval<'a> {
    term: &'a Term,
    ws: &'a Workspace,
}

impl InstanceVisitor for Eval<'_> {
    type Output = Result<Morph>;

    fn visit<C: TracedCategory>(self, cat: &C) -> Result<Morph>
    where
        C::Mor: IntoMorph,
    {
        eval_with(cat, self.term, self.ws).map(IntoMorph::into_morph)
    }
}

/// Shape-checks `t`, then evaluates it in the workspace's instance.
pub fn eval_term(t: &Term, ws: &Workspace) -> Result<Morph> {
    let (dom, cod) = shape_check(t, ws)?;
    let m = ws.instance.visit(Eval { term: t, ws })?;
    debug_assert!(m.dom() == &dom && m.cod() == &cod);
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_term;

    fn ws() -> Workspace {
        Workspace::from_json(
            r#"{"instance": "pfn", "objects": {"X": ["a", "b"], "U": ["u"]},
                "generators": {
                    "f": {"dom": ["X", "U"], "cod": ["X", "U"], "map": {"0.a": "1.u", "1.u": "0.b"}},
                    "g": {"dom": ["X"], "cod": ["U"], "map": {"a": "u"}}}}"#,
        )
        .unwrap()
    }

    #[test]
    fn trace_routes_through_feedback() {
        let m = eval_term(&parse_term("tr[U](f)").unwrap(), &ws()).unwrap();
        assert_eq!(m.to_text(), "pfn: X -> X\na -> b\n");
    }

    #[test]
    fn symmetry_twice_is_identity() {
        let ws = ws();
        let a = eval_term(&parse_term("sym[X, U] ; sym[U, X]").unwrap(), &ws).unwrap();
        let b = eval_term(&parse_term("id[X * U]").unwrap(), &ws).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn shape_errors_name_the_subterm() {
        let ws = ws();
        let err = |s: &str| eval_term(&parse_term(s).unwrap(), &ws).unwrap_err();
        let e = err("g ; g");
        assert!(
            matches!(e, Error::Shape(_)) && e.to_string().contains("`g ; g`"),
            "{e}"
        );
        let e = err("tr[U](g)");
        assert!(
            matches!(e, Error::Shape(_)) && e.to_string().contains("`tr[U](g)`"),
            "{e}"
        );
        assert_eq!(err("h"), Error::Unbound("h".into()));
        assert_eq!(err("id[Y]"), Error::Unbound("Y".into()));
    }

    #[test]
    fn shapes_agree_with_values() {
        let ws = ws();
        for s in ["f * g", "tr[U](f) ; g", "sym[U, X] ; f ; sym[X, U]", "id[I] * g"] {
            let t = parse_term(s).unwrap();
            let (d, c) = shape_check(&t, &ws).unwrap();
            let m = eval_term(&t, &ws).unwrap();
            assert_eq!((m.dom(), m.cod()), (&d, &c), "{s}");
        }
    }
}
