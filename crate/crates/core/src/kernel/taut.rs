//! Propositional entailment by truth table.
//!
//! Maximal non-propositional subformulas are atoms, compared up to
//! alpha-equivalence. At most sixteen distinct atoms are allowed.

use crate::syntax::{canonicalize, Formula};

const MAX_ATOMS: usize = 16;

enum Prop {
    Atom(usize),
    Not(Box<Prop>),
    And(Box<Prop>, Box<Prop>),
    Or(Box<Prop>, Box<Prop>),
    Implies(Box<Prop>, Box<Prop>),
    Iff(Box<Prop>, Box<Prop>),
}

fn compile(f: &Formula, atoms: &mut Vec<Formula>) -> Result<Prop, String> {
    Ok(match f {
        Formula::Not(g) => Prop::Not(Box::new(compile(g, atoms)?)),
        Formula::And(a, b) => Prop::And(Box::new(compile(a, atoms)?), Box::new(compile(b, atoms)?)),
        Formula::Or(a, b) => Prop::Or(Box::new(compile(a, atoms)?), Box::new(compile(b, atoms)?)),
        Formula::Implies(a, b) => {
            Prop::Implies(Box::new(compile(a, atoms)?), Box::new(compile(b, atoms)?))
        }
        Formula::Iff(a, b) => Prop::Iff(Box::new(compile(a, atoms)?), Box::new(compile(b, atoms)?)),
        other => {
            let key = canonicalize(other);
            let id = match atoms.iter().position(|a| *a == key) {
                Some(i) => i,
                None => {
                    atoms.push(key);
                    if atoms.len() > MAX_ATOMS {
                        return Err(format!(
                            "tautology check limited to {MAX_ATOMS} distinct atoms"
                        ));
                    }
                    atoms.len() - 1
                }
            };
            Prop::Atom(id)
        }
    })
}

fn eval(p: &Prop, mask: u32) -> bool {
    match p {
        Prop::Atom(i) => mask & (1 << i) != 0,
        Prop::Not(a) => !eval(a, mask),
        Prop::And(a, b) => eval(a, mask) && eval(b, mask),
        Prop::Or(a, b) => eval(a, mask) || eval(b, mask),
        Prop::Implies(a, b) => !eval(a, mask) || eval(b, mask),
        Prop::Iff(a, b) => eval(a, mask) == eval(b, mask),
    }
}

/// Is the conclusion a propositional consequence of the premises?
pub fn entails(premises: &[&Formula], conclusion: &Formula) -> Result<(), String> {
    let mut atoms = Vec::new();
    let ps: Vec<Prop> =
        premises.iter().map(|f| compile(f, &mut atoms)).collect::<Result<_, _>>()?;
    let c = compile(conclusion, &mut atoms)?;
    let n = atoms.len();
    for mask in 0u32..(1 << n) {
        if ps.iter().all(|p| eval(p, mask)) && !eval(&c, mask) {
            return Err("conclusion is not a propositional consequence of the premises".into());
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Term as T;

    fn atom(n: &str) -> Formula {
        Formula::Eq(T::set_var(n), T::EmptySet)
    }

    #[test]
    fn zero_premise_tautology() {
        let a = atom("A");
        assert!(entails(&[], &Formula::or(a.clone(), Formula::not(a))).is_ok());
    }

    #[test]
    fn modus_tollens_chain() {
        let (a, b) = (atom("A"), atom("B"));
        let premises = [
            Formula::implies(a.clone(), b.clone()),
            Formula::not(b.clone()),
        ];
        let refs: Vec<&Formula> = premises.iter().collect();
        assert!(entails(&refs, &Formula::not(a.clone())).is_ok());
        assert!(entails(&refs, &a).is_err());
    }

    #[test]
    fn alpha_variant_subformulas_share_an_atom() {
        let p = Formula::forall_set("x", Formula::Eq(T::set_var("x"), T::set_var("x")));
        let q = Formula::forall_set("y", Formula::Eq(T::set_var("y"), T::set_var("y")));
        // p -> p with a renamed bound variable is still a tautology.
        assert!(entails(&[&p], &q).is_ok());
    }

    #[test]
    fn atom_limit_is_enforced() {
        let atoms: Vec<Formula> = (0..17).map(|i| atom(&format!("A{i}"))).collect();
        let conj = Formula::and_all(atoms.clone());
        assert!(entails(&[], &Formula::implies(conj.clone(), conj)).is_err());
    }
}
