//! Buchberger's algorithm over free modules `R^r`, `R = Q[x_1..x_m]`.
//!
//! Ideals are the rank-one case. Vectors keep their terms sorted ascending
//! in the module term order, so the leading term is the last one and
//! dropping it is a `pop`.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};

use num_traits::{One, Zero};

use super::MonomialOrder;
use crate::poly::{Monomial, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Term {
    pub pos: usize,
    pub mono: Monomial,
    pub coeff: Rational,
}

/// Position-over-term: a smaller position index is a larger term.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct TermOrder {
    pub mono: MonomialOrder,
}

impl TermOrder {
    pub fn cmp(&self, a_pos: usize, a: &Monomial, b_pos: usize, b: &Monomial) -> Ordering {
        b_pos.cmp(&a_pos).then_with(|| self.mono.cmp(a.exps(), b.exps()))
    }

    fn cmp_terms(&self, a: &Term, b: &Term) -> Ordering {
        self.cmp(a.pos, &a.mono, b.pos, &b.mono)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub(crate) struct SVector {
    /// Ascending; the leading term is last.
    pub terms: Vec<Term>,
}

impl SVector {
    pub fn from_terms(mut terms: Vec<Term>, order: &TermOrder) -> Self {
        terms.retain(|t| !t.coeff.is_zero());
        terms.sort_by(|a, b| order.cmp_terms(a, b));
        // merge duplicates
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(l) if l.pos == t.pos && l.mono == t.mono => {
                    l.coeff += t.coeff;
                    if l.coeff.is_zero() {
                        out.pop();
                    }
                }
                _ => out.push(t),
            }
        }
        SVector { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&Term> {
        self.terms.last()
    }

    pub fn monic(mut self) -> Self {
        if let Some(lc) = self.leading().map(|t| t.coeff.clone()) {
            if !lc.is_one() {
                let inv = lc.recip();
                for t in &mut self.terms {
                    t.coeff *= &inv;
                }
            }
        }
        self
    }

    /// `self - c * x^shift * g`, both operands ascending.
    fn sub_multiple(&self, c: &Rational, shift: &Monomial, g: &[Term], order: &TermOrder) -> SVector {
        let mut out = Vec::with_capacity(self.terms.len() + g.len());
        let mut a = self.terms.iter().peekable();
        let mut b = g.iter().map(|t| Term { pos: t.pos, mono: t.mono.mul(shift), coeff: -(c * &t.coeff) }).peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(a.next().unwrap().clone()),
                (None, Some(_)) => out.push(b.next().unwrap()),
                (Some(x), Some(y)) => match order.cmp_terms(x, y) {
                    Ordering::Less => out.push(a.next().unwrap().clone()),
                    Ordering::Greater => out.push(b.next().unwrap()),
                    Ordering::Equal => {
                        let x = a.next().unwrap();
                        let y = b.next().unwrap();
                        let s = &x.coeff + &y.coeff;
                        if !s.is_zero() {
                            out.push(Term { pos: x.pos, mono: x.mono.clone(), coeff: s });
                        }
                    }
                },
            }
        }
        SVector { terms: out }
    }
}

fn find_reducer<'a>(t: &Term, basis: &'a [SVector]) -> Option<&'a SVector> {
    basis.iter().find(|g| {
        let l = g.leading().expect("basis vectors are nonzero");
        l.pos == t.pos && l.mono.divides(&t.mono)
    })
}

/// Full reduction of `f` by a list of monic vectors.
pub(crate) fn reduce(f: &SVector, basis: &[SVector], order: &TermOrder) -> SVector {
    let mut rest = f.clone();
    let mut done_desc: Vec<Term> = Vec::new();
    while let Some(lead) = rest.terms.last().cloned() {
        match find_reducer(&lead, basis) {
            Some(g) => {
                let gl = g.leading().unwrap();
                let shift = gl.mono.quotient_of(&lead.mono);
                let c = &lead.coeff / &gl.coeff;
                rest.terms.pop();
                let tail = &g.terms[..g.terms.len() - 1];
                rest = rest.sub_multiple(&c, &shift, tail, order);
            }
            None => {
                done_desc.push(lead);
                rest.terms.pop();
            }
        }
    }
    done_desc.reverse();
    SVector { terms: done_desc }
}

fn s_vector(f: &SVector, g: &SVector, order: &TermOrder) -> SVector {
    let lf = f.leading().unwrap();
    let lg = g.leading().unwrap();
    let l = lf.mono.lcm(&lg.mono);
    let sf = lf.mono.quotient_of(&l);
    let sg = lg.mono.quotient_of(&l);
    let ftail = &f.terms[..f.terms.len() - 1];
    let gtail = &g.terms[..g.terms.len() - 1];
    let a = SVector::default().sub_multiple(&-(&lg.coeff), &sf, ftail, order);
    a.sub_multiple(&lf.coeff, &sg, gtail, order)
}

fn pair_key(basis: &[SVector], i: usize, j: usize) -> (u32, usize, usize) {
    let a = basis[i].leading().unwrap();
    let b = basis[j].leading().unwrap();
    (a.mono.lcm(&b.mono).degree(), i, j)
}

/// Reduced Gröbner basis, sorted by descending leading term.
///
/// Pairs are taken by smallest lcm degree, ties by index tuple. The
/// product criterion is used only for ideals (`rank_one`), the chain
/// criterion always.
pub(crate) fn buchberger(gens: Vec<SVector>, order: &TermOrder, rank_one: bool) -> Vec<SVector> {
    let mut basis: Vec<SVector> = Vec::new();
    let mut queue: BTreeSet<(u32, usize, usize)> = BTreeSet::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();

    let push = |v: SVector, basis: &mut Vec<SVector>, queue: &mut BTreeSet<_>, pending: &mut HashSet<_>| {
        let k = basis.len();
        let pos = v.leading().unwrap().pos;
        basis.push(v);
        for i in 0..k {
            if basis[i].leading().unwrap().pos == pos {
                queue.insert(pair_key(basis, i, k));
                pending.insert((i, k));
            }
        }
    };

    for g in gens {
        let r = reduce(&g, &basis, order);
        if !r.is_zero() {
            push(r.monic(), &mut basis, &mut queue, &mut pending);
        }
    }

    while let Some(key) = queue.pop_first() {
        let (_, i, j) = key;
        pending.remove(&(i, j));
        let li = basis[i].leading().unwrap().mono.clone();
        let lj = basis[j].leading().unwrap().mono.clone();
        if rank_one && li.is_coprime(&lj) {
            continue;
        }
        let l = li.lcm(&lj);
        let pos = basis[i].leading().unwrap().pos;
        let chain = (0..basis.len()).any(|k| {
            if k == i || k == j {
                return false;
            }
            let lk = basis[k].leading().unwrap();
            lk.pos == pos
                && lk.mono.divides(&l)
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let s = s_vector(&basis[i], &basis[j], order);
        let r = reduce(&s, &basis, order);
        if !r.is_zero() {
            push(r.monic(), &mut basis, &mut queue, &mut pending);
        }
    }

    let reduced = interreduce(basis, order);
    #[cfg(debug_assertions)]
    debug_assert!(is_groebner(&reduced, order), "Buchberger certificate failed");
    reduced
}

/// Drops redundant leading terms, reduces tails, sorts descending.
fn interreduce(basis: Vec<SVector>, order: &TermOrder) -> Vec<SVector> {
    let mut keep: Vec<SVector> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let lg = g.leading().unwrap();
        let redundant = basis.iter().enumerate().any(|(k, h)| {
            if k == i {
                return false;
            }
            let lh = h.leading().unwrap();
            lh.pos == lg.pos && lh.mono.divides(&lg.mono) && (lh.mono != lg.mono || k < i)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    let mut out = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let others: Vec<SVector> = keep.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, v)| v.clone()).collect();
        let lead = keep[i].leading().unwrap().clone();
        let mut tail = keep[i].clone();
        tail.terms.pop();
        let mut r = reduce(&tail, &others, order);
        r.terms.push(lead);
        out.push(r.monic());
    }
    out.sort_by(|a, b| {
        let (x, y) = (a.leading().unwrap(), b.leading().unwrap());
        order.cmp_terms(y, x)
    });
    out
}

/// Buchberger certificate: every S-vector of same-position pairs reduces to zero.
pub(crate) fn is_groebner(basis: &[SVector], order: &TermOrder) -> bool {
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            if basis[i].leading().unwrap().pos != basis[j].leading().unwrap().pos {
                continue;
            }
            let s = s_vector(&basis[i], &basis[j], order);
            if !reduce(&s, basis, order).is_zero() {
                return false;
            }
        }
    }
    true
}
