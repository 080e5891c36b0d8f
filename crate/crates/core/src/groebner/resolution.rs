//! Graded free resolutions of one width of a finitely generated OI-module,
//! computed with Schreyer syzygies and then minimalized.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coeff::Field;
use crate::error::{Error, Result};
use crate::linalg::{exponent_vectors, rank, SparseRow};
use crate::module::ModuleElement;
use crate::order::MonomialOrder;
use crate::polyring::{Monomial, Polynomial};

use super::local::{Engine, Frame, FrameOrder, LVec, LocalOrder, SchreyerOrder};
use super::GeneratorSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResolveTarget {
    /// `P_n^{sig} / N_n`
    Quotient,
    /// `N_n` itself
    Submodule,
}

impl std::str::FromStr for ResolveTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "quotient" => Ok(ResolveTarget::Quotient),
            "submodule" => Ok(ResolveTarget::Submodule),
            other => Err(Error::parse(format!("unknown resolution target `{other}`"))),
        }
    }
}

/// A column of a differential: `(row, exponents) -> coefficient`.
type Column<E> = BTreeMap<(usize, Vec<u32>), E>;

/// A graded free resolution `0 <- F_0 <- F_1 <- ... ` of one width.
#[derive(Clone, Debug)]
pub struct WidthResolution<F: Field> {
    pub width: usize,
    nvars: usize,
    /// `degrees[p]`: internal degrees of the basis of `F_p`.
    degrees: Vec<Vec<i64>>,
    /// `diffs[p - 1]`: the columns of `d_p : F_p -> F_{p-1}`.
    diffs: Vec<Vec<Column<F::Elem>>>,
    minimal: bool,
}

impl<F: Field> WidthResolution<F> {
    /// Index of the last nonzero free module.
    pub fn length(&self) -> usize {
        self.degrees.iter().rposition(|d| !d.is_empty()).unwrap_or(0)
    }

    pub fn max_p(&self) -> usize {
        self.degrees.len() - 1
    }

    pub fn is_minimal(&self) -> bool {
        self.minimal
    }

    pub fn rank(&self, p: usize) -> usize {
        self.degrees.get(p).map_or(0, Vec::len)
    }

    /// Generator degrees of `F_p`, sorted.
    pub fn shifts(&self, p: usize) -> Vec<i64> {
        let mut d = self.degrees.get(p).cloned().unwrap_or_default();
        d.sort_unstable();
        d
    }

    /// The `(row, col)` entry of `d_p` as a polynomial of width `n`.
    pub fn entry(
        &self,
        field: &F,
        scheme: crate::polyring::VariableScheme,
        p: usize,
        row: usize,
        col: usize,
    ) -> Polynomial<F> {
        let n = self.width;
        let mut out = Polynomial::zero(scheme, n);
        if p == 0 || p > self.diffs.len() {
            return out;
        }
        for ((r, e), c) in &self.diffs[p - 1][col] {
            if *r == row {
                out = out
                    .add(
                        field,
                        &Polynomial::term(field, scheme, c.clone(), Monomial::from_exponents(n, e.clone())),
                    )
                    .expect("same ring");
            }
        }
        out
    }

    /// Whether some differential has a nonzero constant entry.
    pub fn has_unit_entries(&self) -> bool {
        self.diffs
            .iter()
            .flatten()
            .any(|col| col.keys().any(|(_, e)| e.iter().all(|&x| x == 0)))
    }

    /// Whether `d_{p-1} ∘ d_p = 0` for every `p`.
    pub fn composes_to_zero(&self, field: &F) -> bool {
        (2..=self.diffs.len()).all(|p| {
            let (outer, inner) = (&self.diffs[p - 2], &self.diffs[p - 1]);
            inner.iter().all(|col| {
                let mut acc: HashMap<(usize, Vec<u32>), F::Elem> = HashMap::new();
                for ((r, e), c) in col {
                    for ((r2, e2), c2) in &outer[*r] {
                        let m: Vec<u32> = e.iter().zip(e2).map(|(a, b)| a + b).collect();
                        let v = acc.entry((*r2, m)).or_insert_with(|| field.zero());
                        *v = field.add(v, &field.mul(c, c2));
                    }
                }
                acc.values().all(|v| field.is_zero(v))
            })
        })
    }

    fn degree_basis(&self, p: usize, j: i64) -> HashMap<(usize, Vec<u32>), usize> {
        let mut idx = HashMap::new();
        for (g, &dg) in self.degrees[p].iter().enumerate() {
            if dg > j {
                continue;
            }
            for e in exponent_vectors(self.nvars, (j - dg) as u32) {
                let k = idx.len();
                idx.insert((g, e), k);
            }
        }
        idx
    }

    /// Rank of `d_p` restricted to internal degree `j`.
    pub fn rank_in_degree(&self, field: &F, p: usize, j: i64) -> usize {
        if p == 0 || p > self.diffs.len() {
            return 0;
        }
        let target = self.degree_basis(p - 1, j);
        let mut rows: Vec<SparseRow<F::Elem>> = Vec::new();
        for (g, &dg) in self.degrees[p].iter().enumerate() {
            if dg > j {
                continue;
            }
            for e in exponent_vectors(self.nvars, (j - dg) as u32) {
                let row = self.diffs[p - 1][g]
                    .iter()
                    .map(|((r, m), c)| {
                        let key: Vec<u32> = m.iter().zip(&e).map(|(a, b)| a + b).collect();
                        (target[&(*r, key)], c.clone())
                    })
                    .collect();
                rows.push(row);
            }
        }
        rank(field, rows)
    }

    pub fn dim_in_degree(&self, p: usize, j: i64) -> usize {
        self.degree_basis(p, j).len()
    }

    /// Whether the homology at `F_p` vanishes for `1 <= p < max_p` in all
    /// internal degrees up to `max_degree`.
    pub fn is_exact_up_to(&self, field: &F, max_degree: i64) -> bool {
        let min_deg = self.degrees.iter().flatten().copied().min().unwrap_or(0);
        (1..self.max_p()).all(|p| {
            (min_deg..=max_degree).all(|j| {
                let kernel = self.dim_in_degree(p, j) - self.rank_in_degree(field, p, j);
                kernel == self.rank_in_degree(field, p + 1, j)
            })
        })
    }

    /// Gaussian elimination of unit entries, from `d_1` upward.
    fn minimalize(&mut self, field: &F) {
        for p in 1..=self.diffs.len() {
            while let Some((col, row, unit)) = find_unit(&self.diffs[p - 1]) {
                let pivot = self.diffs[p - 1][col].clone();
                let inv = field.inv(&unit).expect("unit entry");
                for c in 0..self.diffs[p - 1].len() {
                    if c == col {
                        continue;
                    }
                    let factor: Vec<(Vec<u32>, F::Elem)> = self.diffs[p - 1][c]
                        .iter()
                        .filter(|((r, _), _)| *r == row)
                        .map(|((_, e), v)| (e.clone(), field.mul(v, &inv)))
                        .collect();
                    if factor.is_empty() {
                        continue;
                    }
                    let target = &mut self.diffs[p - 1][c];
                    for (fe, fc) in &factor {
                        for ((r, e), v) in &pivot {
                            let m: Vec<u32> = e.iter().zip(fe).map(|(a, b)| a + b).collect();
                            let key = (*r, m);
                            let nv = field.sub_mul(target.get(&key).unwrap_or(&field.zero()), fc, v);
                            if field.is_zero(&nv) {
                                target.remove(&key);
                            } else {
                                target.insert(key, nv);
                            }
                        }
                    }
                    debug_assert!(target.keys().all(|(r, _)| *r != row));
                }
                self.drop_generator(p, col);
                self.drop_generator(p - 1, row);
            }
        }
        self.minimal = true;
    }

    /// Removes basis element `k` of `F_p` together with its column in `d_p`
    /// and its row in `d_{p+1}` (which must be zero except for the entry
    /// being eliminated).
    fn drop_generator(&mut self, p: usize, k: usize) {
        self.degrees[p].remove(k);
        if p >= 1 {
            self.diffs[p - 1].remove(k);
        }
        if p < self.diffs.len() {
            for col in self.diffs[p].iter_mut() {
                *col = std::mem::take(col)
                    .into_iter()
                    .filter(|((r, _), _)| *r != k)
                    .map(|((r, e), v)| ((if r > k { r - 1 } else { r }, e), v))
                    .collect();
            }
        }
    }

    /// Drops `F_{p}` for `p > max_p`.
    fn truncate(&mut self, max_p: usize) {
        self.degrees.truncate(max_p + 1);
        self.diffs.truncate(max_p);
    }

    /// Shifts homological degrees down by one, dropping `F_0`.
    fn drop_first(&mut self) {
        self.degrees.remove(0);
        if !self.diffs.is_empty() {
            self.diffs.remove(0);
        }
    }
}

fn find_unit<E: Clone>(cols: &[Column<E>]) -> Option<(usize, usize, E)> {
    cols.iter().enumerate().find_map(|(c, col)| {
        col.iter()
            .find(|((_, e), _)| e.iter().all(|&x| x == 0))
            .map(|((r, _), v)| (c, *r, v.clone()))
    })
}

fn to_column<E: Clone>(v: &LVec<E>) -> Column<E> {
    v.iter().map(|(m, c)| ((m.comp, m.exps.clone()), c.clone())).collect()
}

/// A graded free resolution of width `n` of the quotient (or submodule)
/// determined by the generators, through homological degree `max_p`, in
/// minimal form.
pub fn width_resolution<F: Field>(
    field: &F,
    gens: &GeneratorSet<F>,
    order: Arc<dyn MonomialOrder>,
    n: usize,
    max_p: usize,
    target: ResolveTarget,
) -> Result<WidthResolution<F>> {
    let sig = &gens.signature;
    for g in &gens.gens {
        if g.homogeneous_degree(sig).is_none() {
            return Err(Error::NonHomogeneous);
        }
    }
    let levels = match target {
        ResolveTarget::Quotient => max_p + 1,
        ResolveTarget::Submodule => max_p + 2,
    };
    let frame = Arc::new(Frame::new(sig, n));
    let mut res = WidthResolution {
        width: n,
        nvars: sig.scheme.nvars(n),
        degrees: vec![frame.degrees.clone()],
        diffs: Vec::new(),
        minimal: false,
    };
    let mut ord: Arc<dyn LocalOrder> = Arc::new(FrameOrder {
        order,
        frame: frame.clone(),
    });
    let images: Vec<ModuleElement<F>> = gens.images(field, n);
    let mut gb = Engine::new(field, ord.as_ref()).buchberger(images.iter().map(|g| frame.to_local(g)).collect());
    for _ in 1..=levels {
        let engine = Engine::new(field, ord.as_ref());
        res.degrees
            .push(gb.iter().map(|g| engine.order.degree(&g[0].0)).collect());
        res.diffs.push(gb.iter().map(to_column).collect());
        if gb.is_empty() {
            // keep the chain padded with zero modules
            let next: Arc<dyn LocalOrder> = Arc::new(SchreyerOrder {
                prev: ord.clone(),
                leads: Vec::new(),
                degrees: Vec::new(),
            });
            ord = next;
            continue;
        }
        let next: Arc<dyn LocalOrder> = Arc::new(SchreyerOrder {
            prev: ord.clone(),
            leads: gb.iter().map(|g| g[0].0.clone()).collect(),
            degrees: res.degrees.last().expect("just pushed").clone(),
        });
        let syz = engine.schreyer_syzygies(&gb, next.as_ref());
        ord = next;
        gb = syz;
    }
    res.minimalize(field);
    if target == ResolveTarget::Submodule {
        res.drop_first();
    }
    res.truncate(max_p);
    Ok(res)
}

/// Graded Betti numbers `β_{n,p,j}` keyed by `(n, p, j)`, together with the
/// set of widths that were computed. Zero entries are not stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BettiTable {
    widths: BTreeSet<usize>,
    entries: BTreeMap<(usize, usize, i64), u64>,
}

#[derive(Serialize, Deserialize)]
struct BettiTableRepr {
    widths: Vec<usize>,
    entries: Vec<BettiEntry>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiEntry {
    pub n: usize,
    pub p: usize,
    pub j: i64,
    pub beta: u64,
}

impl BettiTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, n: usize, p: usize, j: i64) -> u64 {
        self.entries.get(&(n, p, j)).copied().unwrap_or(0)
    }

    pub fn set(&mut self, n: usize, p: usize, j: i64, beta: u64) {
        self.widths.insert(n);
        if beta == 0 {
            self.entries.remove(&(n, p, j));
        } else {
            self.entries.insert((n, p, j), beta);
        }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Nonzero entries in increasing `(n, p, j)` order.
    pub fn entries(&self) -> Vec<BettiEntry> {
        self.entries
            .iter()
            .map(|(&(n, p, j), &beta)| BettiEntry { n, p, j, beta })
            .collect()
    }

    /// Marks width `n` as computed even if all its entries vanish.
    pub fn add_width(&mut self, n: usize) {
        self.widths.insert(n);
    }

    pub fn from_entries(
        widths: impl IntoIterator<Item = usize>,
        entries: impl IntoIterator<Item = BettiEntry>,
    ) -> Self {
        let mut t = BettiTable::new();
        t.widths.extend(widths);
        for e in entries {
            t.set(e.n, e.p, e.j, e.beta);
        }
        t
    }

    /// Computed widths, increasing.
    pub fn widths(&self) -> Vec<usize> {
        self.widths.iter().copied().collect()
    }

    /// `j -> β_{n,p,j}` for fixed `n`, `p`.
    pub fn row(&self, n: usize, p: usize) -> BTreeMap<i64, u64> {
        self.entries
            .range((n, p, i64::MIN)..=(n, p, i64::MAX))
            .map(|(k, v)| (k.2, *v))
            .collect()
    }

    pub fn total(&self, n: usize, p: usize) -> u64 {
        self.row(n, p).values().sum()
    }

    fn add_resolution<F: Field>(&mut self, res: &WidthResolution<F>) {
        self.add_width(res.width);
        for p in 0..=res.max_p() {
            for j in res.shifts(p) {
                let cur = self.get(res.width, p, j);
                self.set(res.width, p, j, cur + 1);
            }
        }
    }
}

impl Serialize for BettiTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BettiTableRepr {
            widths: self.widths(),
            entries: self.entries(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BettiTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = BettiTableRepr::deserialize(d)?;
        Ok(BettiTable::from_entries(r.widths, r.entries))
    }
}

/// Betti numbers of the minimal resolutions of every width in `widths`.
/// Widths are processed in parallel.
pub fn betti_table<F: Field>(
    field: &F,
    gens: &GeneratorSet<F>,
    order: Arc<dyn MonomialOrder>,
    widths: &[usize],
    max_p: usize,
    target: ResolveTarget,
) -> Result<BettiTable> {
    let resolutions: Vec<Result<WidthResolution<F>>> = widths
        .par_iter()
        .map(|&n| width_resolution(field, gens, order.clone(), n, max_p, target))
        .collect();
    let mut table = BettiTable::new();
    for r in resolutions {
        table.add_resolution(&r?);
    }
    Ok(table)
}
