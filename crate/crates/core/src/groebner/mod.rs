//! Reduction, normal forms and Gröbner bases of submodules of free
//! OI-modules, plus per-width graded free resolutions.

pub(crate) mod local;
pub mod resolution;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coeff::Field;
use crate::error::{Error, Result};
use crate::module::{ModuleElement, ModuleMonomial, Signature, Slot};
use crate::oi::{enumerate_fi, enumerate_oi, fi_factor, OIMorphism};
use crate::order::{oi_divides_unchecked, MonomialOrder};
use local::{Engine, Frame, FrameOrder, LVec};

pub use resolution::{betti_table, width_resolution, BettiTable, ResolveTarget, WidthResolution};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    OI,
    FI,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::OI => "oi",
            Flavor::FI => "fi",
        })
    }
}

impl std::str::FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "oi" => Ok(Flavor::OI),
            "fi" => Ok(Flavor::FI),
            other => Err(Error::parse(format!("unknown flavor `{other}`"))),
        }
    }
}

/// Generators of a submodule, already translated to OI form.
///
/// For the FI flavor every slot `(d, s)` of the input signature becomes `d!`
/// OI slots, one per `τ ∈ Sym(d)` in lexicographic order, and each generator
/// is replaced by its translates under `Sym(m)`, `m` its width.
#[derive(Clone, Debug)]
pub struct GeneratorSet<F: Field> {
    pub input_signature: Signature,
    pub signature: Signature,
    pub flavor: Flavor,
    pub gens: Vec<ModuleElement<F>>,
    pub warnings: Vec<String>,
}

impl<F: Field> GeneratorSet<F> {
    pub fn new(field: &F, sig: &Signature, gens: Vec<ModuleElement<F>>, flavor: Flavor) -> Result<Self> {
        let mut warnings = Vec::new();
        let mut kept = Vec::new();
        for (k, g) in gens.into_iter().enumerate() {
            g.validate(sig)?;
            if g.is_zero() {
                warnings.push(format!("generator {} is zero and was dropped", k + 1));
            } else {
                kept.push(g);
            }
        }
        let (signature, gens) = match flavor {
            Flavor::OI => (sig.clone(), kept),
            Flavor::FI => fi_to_oi(field, sig, &kept)?,
        };
        Ok(GeneratorSet {
            input_signature: sig.clone(),
            signature,
            flavor,
            gens,
            warnings,
        })
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn min_width(&self) -> Option<usize> {
        self.gens.iter().map(ModuleElement::width).min()
    }

    pub fn max_width(&self) -> Option<usize> {
        self.gens.iter().map(ModuleElement::width).max()
    }

    /// All OI-images of the generators in width `n`.
    pub fn images(&self, field: &F, n: usize) -> Vec<ModuleElement<F>> {
        let mut out = Vec::new();
        for g in &self.gens {
            if g.width() > n {
                continue;
            }
            for eps in enumerate_oi(g.width(), n) {
                out.push(
                    g.apply_oi(field, &self.signature.scheme, &eps)
                        .expect("source width matches"),
                );
            }
        }
        out
    }
}

fn factorial(d: usize) -> usize {
    (1..=d).product()
}

/// The OI signature underlying the FI free module of `sig`.
pub fn fi_signature(sig: &Signature) -> Signature {
    let slots = sig
        .slots
        .iter()
        .flat_map(|s| std::iter::repeat_n(*s, factorial(s.d)))
        .collect::<Vec<Slot>>();
    Signature::new(sig.scheme, slots)
}

fn fi_to_oi<F: Field>(
    field: &F,
    sig: &Signature,
    gens: &[ModuleElement<F>],
) -> Result<(Signature, Vec<ModuleElement<F>>)> {
    let target = fi_signature(sig);
    let mut offsets = Vec::with_capacity(sig.slots.len());
    let mut acc = 0;
    for s in &sig.slots {
        offsets.push(acc);
        acc += factorial(s.d);
    }
    let sym_index = |s: usize| -> HashMap<Vec<u32>, usize> {
        let d = sig.slots[s].d;
        enumerate_fi(d, d)
            .into_iter()
            .enumerate()
            .map(|(k, t)| (t.image().to_vec(), k))
            .collect()
    };
    let tables: Vec<HashMap<Vec<u32>, usize>> = (0..sig.slots.len()).map(sym_index).collect();
    let mut out: Vec<ModuleElement<F>> = Vec::new();
    for g in gens {
        let m = g.width();
        for sigma in enumerate_fi(m, m) {
            let mut terms = Vec::with_capacity(g.len());
            for (t, c) in g.terms() {
                let pi = sigma.compose(&t.basis.as_fi())?;
                let (base, tau) = fi_factor(&pi);
                let slot = offsets[t.slot] + tables[t.slot][tau.image()];
                terms.push((
                    ModuleMonomial {
                        slot,
                        basis: base,
                        mono: t.mono.apply_fi(&sig.scheme, &sigma)?,
                    },
                    c.clone(),
                ));
            }
            let q = ModuleElement::from_terms(field, m, terms)?;
            if !out.contains(&q) {
                out.push(q);
            }
        }
    }
    Ok((target, out))
}

/// Leading monomial and coefficient of a nonzero element.
pub fn leading_term<'a, F: Field>(
    order: &dyn MonomialOrder,
    q: &'a ModuleElement<F>,
) -> Option<(&'a ModuleMonomial, &'a F::Elem)> {
    q.terms().max_by(|a, b| order.cmp(a.0, b.0))
}

fn make_monic<F: Field>(field: &F, order: &dyn MonomialOrder, q: ModuleElement<F>) -> ModuleElement<F> {
    match leading_term(order, &q) {
        Some((_, lc)) if !field.is_one(lc) => {
            let inv = field.inv(lc).expect("leading coefficient is nonzero");
            q.scale(field, &inv)
        }
        _ => q,
    }
}

/// `(element index, ε image, target width)`.
type ImageKey = (usize, Vec<u32>, usize);

struct Reducer<'a, F: Field> {
    field: &'a F,
    sig: &'a Signature,
    order: Arc<dyn MonomialOrder>,
    elems: Vec<(ModuleElement<F>, ModuleMonomial, F::Elem)>,
    frames: HashMap<usize, (Arc<Frame>, Arc<FrameOrder>)>,
    images: HashMap<ImageKey, Arc<LVec<F::Elem>>>,
}

impl<'a, F: Field> Reducer<'a, F> {
    fn new(field: &'a F, sig: &'a Signature, order: Arc<dyn MonomialOrder>, basis: &[ModuleElement<F>]) -> Self {
        let mut r = Reducer {
            field,
            sig,
            order,
            elems: Vec::new(),
            frames: HashMap::new(),
            images: HashMap::new(),
        };
        for b in basis {
            r.push(b.clone());
        }
        r
    }

    fn push(&mut self, b: ModuleElement<F>) {
        if let Some((lm, lc)) = leading_term(self.order.as_ref(), &b) {
            let (lm, lc) = (lm.clone(), lc.clone());
            self.elems.push((b, lm, lc));
        }
    }

    fn frame(&mut self, n: usize) -> (Arc<Frame>, Arc<FrameOrder>) {
        let order = self.order.clone();
        let sig = self.sig;
        self.frames
            .entry(n)
            .or_insert_with(|| {
                let frame = Arc::new(Frame::new(sig, n));
                let fo = Arc::new(FrameOrder {
                    order,
                    frame: frame.clone(),
                });
                (frame, fo)
            })
            .clone()
    }

    fn find(&self, t: &ModuleMonomial) -> Option<(usize, OIMorphism, Vec<u32>)> {
        self.elems.iter().enumerate().find_map(|(k, (_, lm, _))| {
            if lm.width() > t.width() || lm.slot != t.slot {
                return None;
            }
            oi_divides_unchecked(self.sig, lm, t).map(|w| (k, w.morphism, w.cofactor.exponents().to_vec()))
        })
    }

    fn image(&mut self, k: usize, eps: &OIMorphism, frame: &Frame, engine: &Engine<'_, F>) -> Arc<LVec<F::Elem>> {
        let key = (k, eps.image().to_vec(), eps.target());
        if let Some(v) = self.images.get(&key) {
            return v.clone();
        }
        let img = self.elems[k]
            .0
            .apply_oi(self.field, &self.sig.scheme, eps)
            .expect("divisor width matches");
        let v = Arc::new(engine.normalize(frame.to_local(&img)));
        self.images.insert(key, v.clone());
        v
    }

    /// Reduces `q`; with `full` every term, otherwise only while the leading
    /// term is reducible. `max_steps` bounds the number of reductions.
    fn run(&mut self, q: &ModuleElement<F>, full: bool, max_steps: Option<usize>) -> (ModuleElement<F>, usize) {
        let n = q.width();
        let (frame, fo) = self.frame(n);
        let field = self.field;
        let engine = Engine::new(field, fo.as_ref());
        let mut p = engine.normalize(frame.to_local(q));
        let mut rem: LVec<F::Elem> = Vec::new();
        let mut steps = 0;
        while !p.is_empty() {
            if max_steps.is_some_and(|m| steps >= m) {
                rem.append(&mut p);
                break;
            }
            let tm = frame.to_module_monomial(&p[0].0);
            match self.find(&tm) {
                Some((k, eps, kappa)) => {
                    let img = self.image(k, &eps, &frame, &engine);
                    debug_assert_eq!(img[0].0.shifted(&kappa), p[0].0);
                    let coef = field.div(&p[0].1, &img[0].1).expect("nonzero leading coefficient");
                    p = engine.sub_scaled(&p[1..], &coef, &kappa, &img[1..]);
                    steps += 1;
                }
                None if full => rem.push(p.remove(0)),
                None => {
                    rem.append(&mut p);
                }
            }
        }
        (frame.to_element(field, &rem), steps)
    }
}

/// One reduction step on the leading term of `q` modulo the OI-images of
/// `basis`: `q - (lc(q)/lc(b))·κ·F(ε)(b)` for the first `b` (in list order)
/// whose leading monomial divides `lm(q)`. `None` when no leading monomial
/// divides.
pub fn reduce_step<F: Field>(
    field: &F,
    sig: &Signature,
    order: Arc<dyn MonomialOrder>,
    q: &ModuleElement<F>,
    basis: &[ModuleElement<F>],
) -> Result<Option<ModuleElement<F>>> {
    if q.is_zero() {
        return Err(Error::ZeroInput);
    }
    q.validate(sig)?;
    let mut red = Reducer::new(field, sig, order, basis);
    let (lm, _) = leading_term(red.order.as_ref(), q).expect("nonzero");
    if red.find(lm).is_none() {
        return Ok(None);
    }
    Ok(Some(red.run(q, false, Some(1)).0))
}

/// Fully reduced remainder of `q` modulo the OI-images of `basis`.
pub fn normal_form<F: Field>(
    field: &F,
    sig: &Signature,
    order: Arc<dyn MonomialOrder>,
    q: &ModuleElement<F>,
    basis: &[ModuleElement<F>],
) -> Result<ModuleElement<F>> {
    q.validate(sig)?;
    let mut red = Reducer::new(field, sig, order, basis);
    Ok(red.run(q, true, None).0)
}

fn local_gb<F: Field>(
    field: &F,
    sig: &Signature,
    order: Arc<dyn MonomialOrder>,
    gens: &[ModuleElement<F>],
    n: usize,
) -> Vec<ModuleElement<F>> {
    let frame = Arc::new(Frame::new(sig, n));
    let fo = FrameOrder {
        order,
        frame: frame.clone(),
    };
    let engine = Engine::new(field, &fo);
    let local = gens.iter().map(|g| frame.to_local(g)).collect();
    engine
        .buchberger(local)
        .iter()
        .map(|v| frame.to_element(field, v))
        .collect()
}

/// The reduced Gröbner basis, in the restriction of `order` to width `n`, of
/// the `P_n`-submodule generated by all OI-images of the generators in width
/// `n`. Sorted increasingly by leading monomial.
pub fn classical_buchberger_width<F: Field>(
    field: &F,
    gens: &GeneratorSet<F>,
    order: Arc<dyn MonomialOrder>,
    n: usize,
) -> Vec<ModuleElement<F>> {
    local_gb(field, &gens.signature, order, &gens.images(field, n), n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GbConfig {
    pub max_width: usize,
    pub lookahead: usize,
}

impl Default for GbConfig {
    fn default() -> Self {
        GbConfig {
            max_width: 8,
            lookahead: 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertStatus {
    HeuristicallyCertified,
    WidthLimited,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certification {
    pub certified_width: usize,
    pub lookahead: usize,
    pub status: CertStatus,
}

#[derive(Clone, Debug)]
pub struct EquivariantGB<F: Field> {
    pub basis: Vec<ModuleElement<F>>,
    pub order: String,
    pub certification: Certification,
    /// Widths actually swept.
    pub swept: Vec<usize>,
}

/// Drops elements whose leading monomial is divisible by another's,
/// tail-reduces the rest, makes them monic and sorts them by leading
/// monomial.
fn autoreduce<F: Field>(
    field: &F,
    sig: &Signature,
    order: &Arc<dyn MonomialOrder>,
    elems: Vec<ModuleElement<F>>,
) -> Vec<ModuleElement<F>> {
    let leads: Vec<ModuleMonomial> = elems
        .iter()
        .map(|e| leading_term(order.as_ref(), e).expect("nonzero").0.clone())
        .collect();
    let keep: Vec<usize> = (0..elems.len())
        .filter(|&k| {
            !(0..elems.len()).any(|l| {
                l != k
                    && leads[l].width() <= leads[k].width()
                    && oi_divides_unchecked(sig, &leads[l], &leads[k]).is_some()
                    && (leads[l] != leads[k] || l < k)
            })
        })
        .collect();
    let mut out = Vec::with_capacity(keep.len());
    for &k in &keep {
        let others: Vec<ModuleElement<F>> = keep.iter().filter(|&&l| l != k).map(|&l| elems[l].clone()).collect();
        let mut red = Reducer::new(field, sig, order.clone(), &others);
        let r = red.run(&elems[k], true, None).0;
        out.push(make_monic(field, order.as_ref(), r));
    }
    out.sort_by(|a, b| {
        let la = leading_term(order.as_ref(), a).expect("nonzero").0;
        let lb = leading_term(order.as_ref(), b).expect("nonzero").0;
        order.cmp(la, lb)
    });
    out
}

/// Width-sweep completion. For `n` from the smallest generator width up to
/// `max_width`, the classical Gröbner basis at width `n` is reduced modulo
/// the OI-images of the current candidate set and irreducible remainders
/// are adjoined. Once all generators are present, `lookahead` consecutive
/// widths without new elements end the sweep with a heuristic certificate.
pub fn equivariant_buchberger<F: Field>(
    field: &F,
    gens: &GeneratorSet<F>,
    order: Arc<dyn MonomialOrder>,
    cfg: GbConfig,
) -> Result<EquivariantGB<F>> {
    sweep(field, gens, order, cfg, 0)
}

/// The sweep behind [`equivariant_buchberger`]; certification is not
/// declared before width `floor` (capped at `max_width`) has been covered.
fn sweep<F: Field>(
    field: &F,
    gens: &GeneratorSet<F>,
    order: Arc<dyn MonomialOrder>,
    cfg: GbConfig,
    floor: usize,
) -> Result<EquivariantGB<F>> {
    let sig = &gens.signature;
    let (Some(n0), Some(top)) = (gens.min_width(), gens.max_width()) else {
        return Ok(EquivariantGB {
            basis: Vec::new(),
            order: order.name().to_string(),
            certification: Certification {
                certified_width: cfg.max_width,
                lookahead: cfg.lookahead,
                status: CertStatus::HeuristicallyCertified,
            },
            swept: Vec::new(),
        });
    };
    let mut basis: Vec<ModuleElement<F>> = Vec::new();
    let mut quiet = 0;
    let mut swept = Vec::new();
    for n in n0..=cfg.max_width {
        swept.push(n);
        let classical = classical_buchberger_width(field, gens, order.clone(), n);
        let mut red = Reducer::new(field, sig, order.clone(), &basis);
        let mut added = false;
        for g in &classical {
            let r = red.run(g, true, None).0;
            if !r.is_zero() {
                let r = make_monic(field, order.as_ref(), r);
                red.push(r.clone());
                basis.push(r);
                added = true;
            }
        }
        if added {
            basis = autoreduce(field, sig, &order, basis);
        }
        if added || n < top.max(floor) {
            quiet = 0;
        } else {
            quiet += 1;
        }
        if quiet >= cfg.lookahead {
            return Ok(EquivariantGB {
                basis,
                order: order.name().to_string(),
                certification: Certification {
                    certified_width: n,
                    lookahead: cfg.lookahead,
                    status: CertStatus::HeuristicallyCertified,
                },
                swept,
            });
        }
    }
    Ok(EquivariantGB {
        basis,
        order: order.name().to_string(),
        certification: Certification {
            certified_width: cfg.max_width,
            lookahead: cfg.lookahead,
            status: CertStatus::WidthLimited,
        },
        swept,
    })
}

/// Whether every element of the classical Gröbner basis at each width in
/// `widths` reduces to zero modulo the OI-images of `basis`.
pub fn is_groebner<F: Field>(
    field: &F,
    basis: &[ModuleElement<F>],
    gens: &GeneratorSet<F>,
    order: Arc<dyn MonomialOrder>,
    widths: impl IntoIterator<Item = usize>,
) -> bool {
    let mut red = Reducer::new(field, &gens.signature, order.clone(), basis);
    widths.into_iter().all(|n| {
        classical_buchberger_width(field, gens, order.clone(), n)
            .iter()
            .all(|g| red.run(g, true, None).0.is_zero())
    })
}

/// Submodule membership via the equivariant Gröbner basis. The sweep is
/// extended to `width(q)` when that is below the cap; beyond the cap a
/// heuristic certificate is required.
pub fn membership<F: Field>(
    field: &F,
    q: &ModuleElement<F>,
    gens: &GeneratorSet<F>,
    order: Arc<dyn MonomialOrder>,
    cfg: GbConfig,
) -> Result<bool> {
    q.validate(&gens.signature)?;
    let gb = sweep(field, gens, order.clone(), cfg, q.width())?;
    let cert = gb.certification;
    if cert.status != CertStatus::HeuristicallyCertified && q.width() > cert.certified_width {
        return Err(Error::UncertifiedWidth {
            width: q.width(),
            certified: cert.certified_width,
        });
    }
    Ok(normal_form(field, &gens.signature, order, q, &gb.basis)?.is_zero())
}

/// Stable ordering of module monomials used to present results.
pub fn cmp_leading<F: Field>(order: &dyn MonomialOrder, a: &ModuleElement<F>, b: &ModuleElement<F>) -> Ordering {
    match (leading_term(order, a), leading_term(order, b)) {
        (Some(x), Some(y)) => order.cmp(x.0, y.0),
        (None, None) => Ordering::Equal,
        (None, _) => Ordering::Less,
        (_, None) => Ordering::Greater,
    }
}

#[cfg(test)]
mod tests;
