//! Tarskian evaluation over a bounded universe, memoized per evaluation on
//! (subformula, binding restricted to its free variables).

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{FoError, Formula, Term, Universe};
use crate::digraph::CanonCode;

enum Node {
    Forall(u16, usize),
    Exists(u16, usize),
    And(usize, usize),
    Or(usize, usize),
    Not(usize),
    Implies(usize, usize),
    Iff(usize, usize),
    Leq(Atom, Atom),
    Eq(Atom, Atom),
}

#[derive(Clone, Copy)]
enum Atom {
    Var(u16),
    Elem(usize),
}

struct Compiled {
    nodes: Vec<Node>,
    root: usize,
    vars: Vec<String>,
    /// sorted free-variable ids per node
    free: Vec<Vec<u16>>,
}

fn compile(f: &Formula, u: &Universe) -> Result<Compiled, FoError> {
    let mut c = Compiled {
        nodes: Vec::new(),
        root: 0,
        vars: Vec::new(),
        free: Vec::new(),
    };
    c.root = compile_rec(f, u, &mut c)?;
    Ok(c)
}

fn compile_rec(f: &Formula, u: &Universe, c: &mut Compiled) -> Result<usize, FoError> {
    let var_id = |name: &str, c: &mut Compiled| -> u16 {
        match c.vars.iter().position(|v| v == name) {
            Some(i) => i as u16,
            None => {
                c.vars.push(name.to_string());
                (c.vars.len() - 1) as u16
            }
        }
    };
    let atom = |t: &Term, u: &Universe, c: &mut Compiled| -> Result<Atom, FoError> {
        match t {
            Term::Var(v) => {
                let id = match c.vars.iter().position(|w| w == v) {
                    Some(i) => i as u16,
                    None => {
                        c.vars.push(v.clone());
                        (c.vars.len() - 1) as u16
                    }
                };
                Ok(Atom::Var(id))
            }
            Term::Const(k) => match u.element_id(&k.code) {
                Some(id) => Ok(Atom::Elem(id)),
                None => Err(FoError::OutsideUniverse(k.text.clone())),
            },
        }
    };
    let node = match f {
        Formula::Forall(v, body) => {
            let id = var_id(v, c);
            let b = compile_rec(body, u, c)?;
            Node::Forall(id, b)
        }
        Formula::Exists(v, body) => {
            let id = var_id(v, c);
            let b = compile_rec(body, u, c)?;
            Node::Exists(id, b)
        }
        Formula::And(a, b) => Node::And(compile_rec(a, u, c)?, compile_rec(b, u, c)?),
        Formula::Or(a, b) => Node::Or(compile_rec(a, u, c)?, compile_rec(b, u, c)?),
        Formula::Not(a) => Node::Not(compile_rec(a, u, c)?),
        Formula::Implies(a, b) => Node::Implies(compile_rec(a, u, c)?, compile_rec(b, u, c)?),
        Formula::Iff(a, b) => Node::Iff(compile_rec(a, u, c)?, compile_rec(b, u, c)?),
        Formula::Leq(a, b) => Node::Leq(atom(a, u, c)?, atom(b, u, c)?),
        Formula::Eq(a, b) => Node::Eq(atom(a, u, c)?, atom(b, u, c)?),
    };
    // free variables of the node
    let free = match &node {
        Node::Forall(v, b) | Node::Exists(v, b) => {
            let mut set: Vec<u16> = c.free[*b].iter().copied().filter(|x| x != v).collect();
            set.sort_unstable();
            set
        }
        Node::And(a, b) | Node::Or(a, b) | Node::Implies(a, b) | Node::Iff(a, b) => {
            let mut set: Vec<u16> = c.free[*a]
                .iter()
                .chain(c.free[*b].iter())
                .copied()
                .collect();
            set.sort_unstable();
            set.dedup();
            set
        }
        Node::Not(a) => c.free[*a].clone(),
        Node::Leq(a, b) | Node::Eq(a, b) => {
            let mut set = Vec::new();
            for t in [a, b] {
                if let Atom::Var(v) = t {
                    set.push(*v);
                }
            }
            set.sort_unstable();
            set.dedup();
            set
        }
    };
    c.nodes.push(node);
    c.free.push(free);
    Ok(c.nodes.len() - 1)
}

struct Evaluator<'a, 'u> {
    c: &'a Compiled,
    u: &'a Universe<'u>,
    env: Vec<Option<usize>>,
    /// memo for quantifier nodes, keyed by the node and its free-variable
    /// values packed 16 bits each (up to 8 variables; deeper nests run
    /// unmemoized)
    memo: HashMap<(usize, u128), bool>,
}

impl Evaluator<'_, '_> {
    fn memo_key(&self, node: usize) -> Option<u128> {
        let free = &self.c.free[node];
        if free.len() > 8 {
            return None;
        }
        let mut key = 0u128;
        for &v in free {
            let val = self.env[v as usize].expect("free variable bound") as u128;
            debug_assert!(val < (1 << 16));
            key = key << 16 | (val + 1);
        }
        Some(key)
    }

    fn eval(&mut self, node: usize) -> bool {
        match &self.c.nodes[node] {
            Node::Forall(v, body) => {
                let key = self.memo_key(node);
                if let Some(k) = key {
                    if let Some(&hit) = self.memo.get(&(node, k)) {
                        return hit;
                    }
                }
                let (v, body) = (*v, *body);
                let saved = self.env[v as usize];
                let mut out = true;
                for x in 0..self.u.size() {
                    self.env[v as usize] = Some(x);
                    if !self.eval(body) {
                        out = false;
                        break;
                    }
                }
                self.env[v as usize] = saved;
                if let Some(k) = key {
                    self.memo.insert((node, k), out);
                }
                out
            }
            Node::Exists(v, body) => {
                let key = self.memo_key(node);
                if let Some(k) = key {
                    if let Some(&hit) = self.memo.get(&(node, k)) {
                        return hit;
                    }
                }
                let (v, body) = (*v, *body);
                let saved = self.env[v as usize];
                let mut out = false;
                for x in 0..self.u.size() {
                    self.env[v as usize] = Some(x);
                    if self.eval(body) {
                        out = true;
                        break;
                    }
                }
                self.env[v as usize] = saved;
                if let Some(k) = key {
                    self.memo.insert((node, k), out);
                }
                out
            }
            Node::And(a, b) => {
                let (a, b) = (*a, *b);
                self.eval(a) && self.eval(b)
            }
            Node::Or(a, b) => {
                let (a, b) = (*a, *b);
                self.eval(a) || self.eval(b)
            }
            Node::Not(a) => {
                let a = *a;
                !self.eval(a)
            }
            Node::Implies(a, b) => {
                let (a, b) = (*a, *b);
                !self.eval(a) || self.eval(b)
            }
            Node::Iff(a, b) => {
                let (a, b) = (*a, *b);
                self.eval(a) == self.eval(b)
            }
            Node::Leq(a, b) => {
                let x = self.atom(*a);
                let y = self.atom(*b);
                self.u.le(x, y)
            }
            Node::Eq(a, b) => self.atom(*a) == self.atom(*b),
        }
    }

    fn atom(&self, a: Atom) -> usize {
        match a {
            Atom::Var(v) => self.env[v as usize].expect("free variable bound"),
            Atom::Elem(e) => e,
        }
    }
}

/// Evaluate a formula under a binding of its free variables.
pub fn evaluate(
    f: &Formula,
    u: &Universe,
    binding: &BTreeMap<String, CanonCode>,
) -> Result<bool, FoError> {
    let c = compile(f, u)?;
    let mut env = vec![None; c.vars.len()];
    for name in f.free_vars() {
        let code = binding
            .get(&name)
            .ok_or_else(|| FoError::UnboundVariable(name.clone()))?;
        let id = u
            .element_id(code)
            .ok_or_else(|| FoError::OutsideUniverse(code.to_string()))?;
        let slot = c.vars.iter().position(|v| *v == name).expect("compiled var");
        env[slot] = Some(id);
    }
    let mut ev = Evaluator {
        c: &c,
        u,
        env,
        memo: HashMap::new(),
    };
    Ok(ev.eval(c.root))
}

/// All universe elements satisfying a formula with exactly one free
/// variable. The memo is shared across the sweep; it is keyed on the free
/// variable's value, so sharing is sound.
pub fn defined_set(f: &Formula, u: &Universe) -> Result<BTreeSet<CanonCode>, FoError> {
    let frees = f.free_vars();
    if frees.len() != 1 {
        return Err(FoError::BadArity(frees.len()));
    }
    let c = compile(f, u)?;
    let slot = c
        .vars
        .iter()
        .position(|v| *v == frees[0])
        .expect("compiled var");
    let mut out = BTreeSet::new();
    let mut ev = Evaluator {
        c: &c,
        u,
        env: vec![None; c.vars.len()],
        memo: HashMap::new(),
    };
    for x in 0..u.size() {
        ev.env[slot] = Some(x);
        if ev.eval(c.root) {
            out.insert(u.code(x).clone());
        }
    }
    Ok(out)
}
