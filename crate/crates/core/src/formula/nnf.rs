use super::{Formula, Term, FALSE_CONST, TRUE_CONST};

/// Rewrites `f` into negation normal form.
///
/// `F a` becomes `true U a`, `G a` becomes `false R a`, `a -> b` becomes
/// `!a | b`, and negations are pushed through the dual pairs (`&`/`|`,
/// `U`/`R`, `exists`/`forall`; `X` is self-dual) until they reach an
/// (in)equality, which is flipped. The literals are lowered to
/// `"true" = "true"` and `"false" != "false"`; a negated literal flips the
/// lowered atom, which keeps [`negate`] an involution.
pub fn to_nnf(f: &Formula) -> Formula {
    rewrite(f, false)
}

/// NNF of `!f`.
pub fn negate(f: &Formula) -> Formula {
    rewrite(f, true)
}

fn constant_atom(value: &str, equal: bool) -> Formula {
    let (a, b) = (Term::constant(value), Term::constant(value));
    if equal {
        Formula::Eq(a, b)
    } else {
        Formula::Neq(a, b)
    }
}

fn rewrite(f: &Formula, neg: bool) -> Formula {
    match f {
        Formula::True => constant_atom(TRUE_CONST, !neg),
        Formula::False => constant_atom(FALSE_CONST, neg),
        Formula::Eq(a, b) if neg => Formula::Neq(a.clone(), b.clone()),
        Formula::Neq(a, b) if neg => Formula::Eq(a.clone(), b.clone()),
        Formula::Eq(..) | Formula::Neq(..) => f.clone(),
        Formula::Not(a) => rewrite(a, !neg),
        Formula::And(a, b) if neg => Formula::or(rewrite(a, true), rewrite(b, true)),
        Formula::And(a, b) => Formula::and(rewrite(a, false), rewrite(b, false)),
        Formula::Or(a, b) if neg => Formula::and(rewrite(a, true), rewrite(b, true)),
        Formula::Or(a, b) => Formula::or(rewrite(a, false), rewrite(b, false)),
        Formula::Implies(a, b) if neg => Formula::and(rewrite(a, false), rewrite(b, true)),
        Formula::Implies(a, b) => Formula::or(rewrite(a, true), rewrite(b, false)),
        Formula::Next(a) => Formula::next(rewrite(a, neg)),
        Formula::Finally(a) => rewrite(&Formula::until(Formula::True, (**a).clone()), neg),
        Formula::Globally(a) => rewrite(&Formula::release(Formula::False, (**a).clone()), neg),
        Formula::Until(a, b) if neg => Formula::release(rewrite(a, true), rewrite(b, true)),
        Formula::Until(a, b) => Formula::until(rewrite(a, false), rewrite(b, false)),
        Formula::Release(a, b) if neg => Formula::until(rewrite(a, true), rewrite(b, true)),
        Formula::Release(a, b) => Formula::release(rewrite(a, false), rewrite(b, false)),
        Formula::Exists { var, path, body } if neg => {
            Formula::forall(var.clone(), path.clone(), rewrite(body, true))
        }
        Formula::Exists { var, path, body } => {
            Formula::exists(var.clone(), path.clone(), rewrite(body, false))
        }
        Formula::Forall { var, path, body } if neg => {
            Formula::exists(var.clone(), path.clone(), rewrite(body, true))
        }
        Formula::Forall { var, path, body } => {
            Formula::forall(var.clone(), path.clone(), rewrite(body, false))
        }
    }
}
