//! Classical Gröbner machinery on a single free module `⊕_k P_n e_k` at a
//! fixed width: sorted sparse vectors, division with quotients, Buchberger,
//! and Schreyer syzygies.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use smallvec::SmallVec;

use crate::coeff::Field;
use crate::module::{ModuleElement, ModuleMonomial, Signature};
use crate::oi::OIMorphism;
use crate::order::{MonoParts, MonomialOrder};
use crate::polyring::Monomial;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct LMono {
    pub comp: usize,
    pub exps: Vec<u32>,
}

impl LMono {
    pub fn divides(&self, other: &LMono) -> bool {
        self.comp == other.comp && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    pub fn shifted(&self, shift: &[u32]) -> LMono {
        LMono {
            comp: self.comp,
            exps: self.exps.iter().zip(shift).map(|(a, b)| a + b).collect(),
        }
    }
}

/// Terms sorted strictly decreasing in the active order.
pub(crate) type LVec<E> = Vec<(LMono, E)>;

/// A module monomial order on `⊕_k P_n e_k`.
pub(crate) trait LocalOrder: Send + Sync {
    fn cmp(&self, ac: usize, a: &[u32], bc: usize, b: &[u32]) -> Ordering;

    /// Internal degree of the basis element `e_k`.
    fn comp_degree(&self, comp: usize) -> i64;

    fn cmp_mono(&self, a: &LMono, b: &LMono) -> Ordering {
        self.cmp(a.comp, &a.exps, b.comp, &b.exps)
    }

    fn degree(&self, m: &LMono) -> i64 {
        self.comp_degree(m.comp) + m.exps.iter().map(|&e| e as i64).sum::<i64>()
    }
}

/// The basis symbols `(slot, π)` of a signature at one width, indexed
/// slot-major and lexicographically in `π`.
#[derive(Debug)]
pub(crate) struct Frame {
    pub width: usize,
    pub comps: Vec<(usize, OIMorphism)>,
    pub degrees: Vec<i64>,
    index: HashMap<(usize, Vec<u32>), usize>,
}

impl Frame {
    pub fn new(sig: &Signature, width: usize) -> Self {
        let comps = sig.basis(width);
        let degrees = comps.iter().map(|(s, _)| sig.slots[*s].shift).collect();
        let index = comps
            .iter()
            .enumerate()
            .map(|(k, (s, p))| ((*s, p.image().to_vec()), k))
            .collect();
        Frame {
            width,
            comps,
            degrees,
            index,
        }
    }

    pub fn comp_of(&self, t: &ModuleMonomial) -> usize {
        self.index[&(t.slot, t.basis.image().to_vec())]
    }

    pub fn to_module_monomial(&self, m: &LMono) -> ModuleMonomial {
        let (slot, basis) = &self.comps[m.comp];
        ModuleMonomial {
            slot: *slot,
            basis: basis.clone(),
            mono: Monomial::from_exponents(self.width, m.exps.clone()),
        }
    }

    /// Unsorted conversion; callers sort with their order.
    pub fn to_local<F: Field>(&self, q: &ModuleElement<F>) -> LVec<F::Elem> {
        debug_assert_eq!(q.width(), self.width);
        q.terms()
            .map(|(t, c)| {
                (
                    LMono {
                        comp: self.comp_of(t),
                        exps: t.mono.exponents().to_vec(),
                    },
                    c.clone(),
                )
            })
            .collect()
    }

    pub fn to_element<F: Field>(&self, field: &F, v: &LVec<F::Elem>) -> ModuleElement<F> {
        ModuleElement::from_terms(
            field,
            self.width,
            v.iter().map(|(m, c)| (self.to_module_monomial(m), c.clone())),
        )
        .expect("frame terms share the frame width")
    }
}

/// A global monomial order restricted to one width.
pub(crate) struct FrameOrder {
    pub order: Arc<dyn MonomialOrder>,
    pub frame: Arc<Frame>,
}

impl LocalOrder for FrameOrder {
    fn cmp(&self, ac: usize, a: &[u32], bc: usize, b: &[u32]) -> Ordering {
        let (sa, pa) = &self.frame.comps[ac];
        let (sb, pb) = &self.frame.comps[bc];
        let w = self.frame.width;
        self.order.cmp_parts(
            &MonoParts {
                width: w,
                slot: *sa,
                basis: pa.image(),
                exps: a,
            },
            &MonoParts {
                width: w,
                slot: *sb,
                basis: pb.image(),
                exps: b,
            },
        )
    }

    fn comp_degree(&self, comp: usize) -> i64 {
        self.frame.degrees[comp]
    }
}

/// The order induced on the free module over a Gröbner basis `g_0, g_1, ...`:
/// `x^a e_i > x^b e_j` iff `lm(x^a g_i) > lm(x^b g_j)`, ties broken by
/// `i < j`.
pub(crate) struct SchreyerOrder {
    pub prev: Arc<dyn LocalOrder>,
    pub leads: Vec<LMono>,
    pub degrees: Vec<i64>,
}

impl LocalOrder for SchreyerOrder {
    fn cmp(&self, ac: usize, a: &[u32], bc: usize, b: &[u32]) -> Ordering {
        let (la, lb) = (&self.leads[ac], &self.leads[bc]);
        let sa: SmallVec<[u32; 32]> = la.exps.iter().zip(a).map(|(x, y)| x + y).collect();
        let sb: SmallVec<[u32; 32]> = lb.exps.iter().zip(b).map(|(x, y)| x + y).collect();
        self.prev.cmp(la.comp, &sa, lb.comp, &sb).then_with(|| bc.cmp(&ac))
    }

    fn comp_degree(&self, comp: usize) -> i64 {
        self.degrees[comp]
    }
}

/// One quotient term `coef · x^shift · g_index` recorded during division.
pub(crate) struct QuotientTerm<E> {
    pub index: usize,
    pub shift: Vec<u32>,
    pub coef: E,
}

pub(crate) struct Engine<'a, F: Field> {
    pub field: &'a F,
    pub order: &'a dyn LocalOrder,
}

impl<'a, F: Field> Engine<'a, F> {
    pub fn new(field: &'a F, order: &'a dyn LocalOrder) -> Self {
        Engine { field, order }
    }

    /// Sorts decreasingly and merges duplicate monomials.
    pub fn normalize(&self, mut v: LVec<F::Elem>) -> LVec<F::Elem> {
        v.sort_by(|a, b| self.order.cmp_mono(&b.0, &a.0));
        let mut out: LVec<F::Elem> = Vec::with_capacity(v.len());
        for (m, c) in v {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = self.field.add(lc, &c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !self.field.is_zero(c));
        out
    }

    /// `a - c · x^shift · b`.
    pub fn sub_scaled(
        &self,
        a: &[(LMono, F::Elem)],
        c: &F::Elem,
        shift: &[u32],
        b: &[(LMono, F::Elem)],
    ) -> LVec<F::Elem> {
        let k = self.field;
        let mut out = Vec::with_capacity(a.len() + b.len());
        let mut i = 0;
        let mut bi = b.iter().map(|(m, e)| (m.shifted(shift), k.mul(e, c))).peekable();
        while i < a.len() || bi.peek().is_some() {
            let ord = match (a.get(i), bi.peek()) {
                (Some(x), Some(y)) => self.order.cmp_mono(&x.0, &y.0),
                (Some(_), None) => Ordering::Greater,
                _ => Ordering::Less,
            };
            match ord {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let (m, e) = bi.next().expect("peeked");
                    out.push((m, k.neg(&e)));
                }
                Ordering::Equal => {
                    let (m, e) = bi.next().expect("peeked");
                    let s = k.sub(&a[i].1, &e);
                    if !k.is_zero(&s) {
                        out.push((m, s));
                    }
                    i += 1;
                }
            }
        }
        out
    }

    pub fn make_monic(&self, v: &mut LVec<F::Elem>) {
        if let Some((_, lc)) = v.first() {
            if !self.field.is_one(lc) {
                let inv = self.field.inv(lc).expect("leading coefficient is nonzero");
                for (_, c) in v.iter_mut() {
                    *c = self.field.mul(c, &inv);
                }
            }
        }
    }

    fn find_reducer(&self, t: &LMono, basis: &[LVec<F::Elem>], by_comp: &HashMap<usize, Vec<usize>>) -> Option<usize> {
        by_comp
            .get(&t.comp)?
            .iter()
            .copied()
            .find(|&k| basis[k][0].0.divides(t))
    }

    /// Division of `q` by `basis` (nonzero, sorted). With `full` every term is
    /// reduced, otherwise only the leading one repeatedly. Quotients are
    /// recorded when `record` is set.
    pub fn reduce(
        &self,
        q: LVec<F::Elem>,
        basis: &[LVec<F::Elem>],
        full: bool,
        record: bool,
    ) -> (LVec<F::Elem>, Vec<QuotientTerm<F::Elem>>) {
        let mut by_comp: HashMap<usize, Vec<usize>> = HashMap::new();
        for (k, g) in basis.iter().enumerate() {
            by_comp.entry(g[0].0.comp).or_default().push(k);
        }
        let k = self.field;
        let mut p = q;
        let mut rem: LVec<F::Elem> = Vec::new();
        let mut quots = Vec::new();
        while !p.is_empty() {
            let (t, c) = &p[0];
            match self.find_reducer(t, basis, &by_comp) {
                Some(idx) => {
                    let g = &basis[idx];
                    let coef = k.div(c, &g[0].1).expect("nonzero leading coefficient");
                    let shift: Vec<u32> = t.exps.iter().zip(&g[0].0.exps).map(|(a, b)| a - b).collect();
                    let next = self.sub_scaled(&p[1..], &coef, &shift, &g[1..]);
                    if record {
                        quots.push(QuotientTerm {
                            index: idx,
                            shift,
                            coef,
                        });
                    }
                    p = next;
                }
                None if full => {
                    rem.push(p.remove(0));
                }
                None => {
                    rem.append(&mut p);
                }
            }
        }
        (rem, quots)
    }

    fn lcm_shifts(&self, a: &LMono, b: &LMono) -> (Vec<u32>, Vec<u32>, LMono) {
        let l: Vec<u32> = a.exps.iter().zip(&b.exps).map(|(x, y)| *x.max(y)).collect();
        let sa = l.iter().zip(&a.exps).map(|(x, y)| x - y).collect();
        let sb = l.iter().zip(&b.exps).map(|(x, y)| x - y).collect();
        (sa, sb, LMono { comp: a.comp, exps: l })
    }

    /// `(lcm/lt(f))·f - (lcm/lt(g))·g` for monic `f`, `g`.
    fn s_vector(&self, f: &LVec<F::Elem>, g: &LVec<F::Elem>) -> LVec<F::Elem> {
        let (sf, sg, _) = self.lcm_shifts(&f[0].0, &g[0].0);
        let one = self.field.one();
        let fs = self.sub_scaled(&[], &self.field.neg(&one), &sf, &f[1..]);
        self.sub_scaled(&fs, &one, &sg, &g[1..])
    }

    /// Reduced Gröbner basis of the submodule generated by `gens`, sorted
    /// increasingly by leading monomial. Every element is monic.
    pub fn buchberger(&self, gens: Vec<LVec<F::Elem>>) -> Vec<LVec<F::Elem>> {
        let mut basis: Vec<LVec<F::Elem>> = Vec::new();
        let mut pending: HashSet<(usize, usize)> = HashSet::new();
        // key: (degree of lcm, lcm), pair
        let mut queue: Vec<(i64, LMono, usize, usize)> = Vec::new();

        let mut gens: Vec<LVec<F::Elem>> = gens
            .into_iter()
            .map(|g| self.normalize(g))
            .filter(|g| !g.is_empty())
            .collect();
        gens.sort_by(|a, b| self.order.cmp_mono(&a[0].0, &b[0].0));

        let add = |v: LVec<F::Elem>,
                   basis: &mut Vec<LVec<F::Elem>>,
                   pending: &mut HashSet<(usize, usize)>,
                   queue: &mut Vec<(i64, LMono, usize, usize)>| {
            let j = basis.len();
            for (i, b) in basis.iter().enumerate() {
                if b[0].0.comp == v[0].0.comp {
                    let (_, _, l) = self.lcm_shifts(&b[0].0, &v[0].0);
                    queue.push((self.order.degree(&l), l, i, j));
                    pending.insert((i, j));
                }
            }
            basis.push(v);
        };

        for g in gens {
            let (mut r, _) = self.reduce(g, &basis, true, false);
            if !r.is_empty() {
                self.make_monic(&mut r);
                add(r, &mut basis, &mut pending, &mut queue);
            }
        }

        while !queue.is_empty() {
            // normal strategy: smallest lcm degree, then smallest lcm
            let best = (0..queue.len())
                .min_by(|&x, &y| {
                    let (dx, lx, ix, jx) = &queue[x];
                    let (dy, ly, iy, jy) = &queue[y];
                    dx.cmp(dy)
                        .then_with(|| self.order.cmp_mono(lx, ly))
                        .then_with(|| (ix, jx).cmp(&(iy, jy)))
                })
                .expect("queue nonempty");
            let (_, lcm, i, j) = queue.swap_remove(best);
            pending.remove(&(i, j));

            let chain = (0..basis.len()).any(|k| {
                k != i
                    && k != j
                    && basis[k][0].0.divides(&lcm)
                    && !pending.contains(&(i.min(k), i.max(k)))
                    && !pending.contains(&(j.min(k), j.max(k)))
            });
            if chain {
                continue;
            }
            let s = self.s_vector(&basis[i], &basis[j]);
            let (mut r, _) = self.reduce(s, &basis, true, false);
            if !r.is_empty() {
                self.make_monic(&mut r);
                add(r, &mut basis, &mut pending, &mut queue);
            }
        }
        self.reduce_basis(basis)
    }

    /// Minimal, tail-reduced and sorted form of a Gröbner basis.
    pub fn reduce_basis(&self, basis: Vec<LVec<F::Elem>>) -> Vec<LVec<F::Elem>> {
        let mut keep: Vec<LVec<F::Elem>> = Vec::new();
        for (k, g) in basis.iter().enumerate() {
            let redundant = basis
                .iter()
                .enumerate()
                .any(|(l, h)| l != k && h[0].0.divides(&g[0].0) && (h[0].0 != g[0].0 || l < k));
            if !redundant {
                keep.push(g.clone());
            }
        }
        keep.sort_by(|a, b| self.order.cmp_mono(&a[0].0, &b[0].0));
        let mut out = Vec::with_capacity(keep.len());
        for k in 0..keep.len() {
            let others: Vec<LVec<F::Elem>> = keep
                .iter()
                .enumerate()
                .filter(|(l, _)| *l != k)
                .map(|(_, g)| g.clone())
                .collect();
            let head = keep[k][0].clone();
            let (tail, _) = self.reduce(keep[k][1..].to_vec(), &others, true, false);
            let mut g = vec![head];
            g.extend(tail);
            self.make_monic(&mut g);
            out.push(g);
        }
        out
    }

    /// Schreyer syzygies of a Gröbner basis `gb` (monic, sorted in this
    /// engine's order). Returns the syzygies as vectors over the basis
    /// indices of `gb`, sorted in the induced [`SchreyerOrder`], pruned to a
    /// set whose leading monomials are pairwise non-dividing.
    pub fn schreyer_syzygies(&self, gb: &[LVec<F::Elem>], next: &dyn LocalOrder) -> Vec<LVec<F::Elem>> {
        let k = self.field;
        let next_engine = Engine::new(k, next);
        // candidate leads x^{lcm - lm_i} e_i for i < j with equal lead components
        let mut cands: Vec<(LMono, usize, usize)> = Vec::new();
        for i in 0..gb.len() {
            for j in i + 1..gb.len() {
                if gb[i][0].0.comp != gb[j][0].0.comp {
                    continue;
                }
                let (si, _, _) = self.lcm_shifts(&gb[i][0].0, &gb[j][0].0);
                cands.push((LMono { comp: i, exps: si }, i, j));
            }
        }
        let mut chosen: Vec<(LMono, usize, usize)> = Vec::new();
        for (idx, c) in cands.iter().enumerate() {
            let redundant = cands
                .iter()
                .enumerate()
                .any(|(l, d)| l != idx && d.0.divides(&c.0) && (d.0 != c.0 || l < idx));
            if !redundant {
                chosen.push(c.clone());
            }
        }
        let mut out = Vec::with_capacity(chosen.len());
        for (_, i, j) in chosen {
            let (si, sj, _) = self.lcm_shifts(&gb[i][0].0, &gb[j][0].0);
            let s = self.s_vector(&gb[i], &gb[j]);
            let (rem, quots) = self.reduce(s, gb, true, true);
            assert!(rem.is_empty(), "Schreyer syzygies need a Gröbner basis");
            let mut v: LVec<F::Elem> = vec![
                (LMono { comp: i, exps: si }, k.one()),
                (LMono { comp: j, exps: sj }, k.neg(&k.one())),
            ];
            v.extend(quots.into_iter().map(|q| {
                (
                    LMono {
                        comp: q.index,
                        exps: q.shift,
                    },
                    k.neg(&q.coef),
                )
            }));
            let v = next_engine.normalize(v);
            debug_assert_eq!(v[0].0.comp, i);
            out.push(v);
        }
        out.sort_by(|a, b| next.cmp_mono(&a[0].0, &b[0].0));
        out
    }
}
