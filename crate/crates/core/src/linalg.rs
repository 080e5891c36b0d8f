//! Sparse exact row echelon forms over a field.

use std::collections::HashMap;

use crate::coeff::Field;

/// Sparse row: `(column, value)` pairs sorted by column, no zero values.
pub type SparseRow<E> = Vec<(usize, E)>;

/// Incrementally built echelon basis of a row space. The pivot of a row is
/// its smallest column.
pub struct Echelon<'a, F: Field> {
    field: &'a F,
    rows: Vec<SparseRow<F::Elem>>,
    pivots: HashMap<usize, usize>,
}

impl<'a, F: Field> Echelon<'a, F> {
    pub fn new(field: &'a F) -> Self {
        Echelon {
            field,
            rows: Vec::new(),
            pivots: HashMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Pivot columns, ascending.
    pub fn pivot_columns(&self) -> Vec<usize> {
        let mut cols: Vec<usize> = self.pivots.keys().copied().collect();
        cols.sort_unstable();
        cols
    }

    fn axpy(&self, a: &[(usize, F::Elem)], c: &F::Elem, b: &[(usize, F::Elem)]) -> SparseRow<F::Elem> {
        let k = self.field;
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, k.neg(&k.mul(c, &b[j].1))));
                j += 1;
            } else {
                let v = k.sub_mul(&a[i].1, c, &b[j].1);
                if !k.is_zero(&v) {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        out
    }

    /// Reduces `row` until its pivot is new or it vanishes.
    pub fn reduce(&self, mut row: SparseRow<F::Elem>) -> SparseRow<F::Elem> {
        while let Some((col, c)) = row.first() {
            match self.pivots.get(col) {
                Some(&r) => {
                    let c = c.clone();
                    row = self.axpy(&row, &c, &self.rows[r]);
                }
                None => break,
            }
        }
        row
    }

    /// Adds a row; returns whether the rank grew.
    pub fn insert(&mut self, row: SparseRow<F::Elem>) -> bool {
        let mut row = self.reduce(row);
        let Some((col, lead)) = row.first().cloned() else {
            return false;
        };
        if !self.field.is_one(&lead) {
            let inv = self.field.inv(&lead).expect("nonzero pivot");
            for (_, v) in row.iter_mut() {
                *v = self.field.mul(v, &inv);
            }
        }
        self.pivots.insert(col, self.rows.len());
        self.rows.push(row);
        true
    }
}

/// Rank of the matrix with the given sparse rows. Rows need not be sorted.
pub fn rank<F: Field>(field: &F, rows: impl IntoIterator<Item = SparseRow<F::Elem>>) -> usize {
    let mut ech = Echelon::new(field);
    for mut r in rows {
        r.sort_by_key(|(c, _)| *c);
        ech.insert(r);
    }
    ech.rank()
}

/// All exponent vectors of length `nvars` with total degree `deg`, in
/// decreasing lexicographic order.
pub fn exponent_vectors(nvars: usize, deg: u32) -> Vec<Vec<u32>> {
    fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos + 1 == cur.len() {
            cur[pos] = left;
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur[pos] = e;
            rec(pos + 1, left - e, cur, out);
        }
        cur[pos] = 0;
    }
    if nvars == 0 {
        return if deg == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    rec(0, deg, &mut vec![0; nvars], &mut out);
    out
}
