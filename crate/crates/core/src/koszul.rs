//! The Koszul complex `⋯ → F(d) → F(d-1) → ⋯ → F(0)` of free OI-modules
//! determined by one element `a` of width 1.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::coeff::Field;
use crate::error::{Error, Result};
use crate::linalg::{exponent_vectors, rank, SparseRow};
use crate::module::{ModuleElement, ModuleMonomial, Signature, Slot};
use crate::oi::{binomial, enumerate_oi, oi_rank, OIMorphism};
use crate::polyring::{Polynomial, VariableScheme};

/// `(a_{n,1}, …, a_{n,n})`, the images of `a` under the maps `[1] → [n]`.
pub fn koszul_images<F: Field>(field: &F, a: &Polynomial<F>, n: usize) -> Result<Vec<Polynomial<F>>> {
    if a.is_zero() {
        return Err(Error::ZeroElement);
    }
    if a.width() != 1 {
        return Err(Error::WidthMismatch {
            expected: 1,
            found: a.width(),
        });
    }
    (1..=n as u32)
        .map(|t| a.apply_oi(field, &OIMorphism::from_raw(n, vec![t])))
        .collect()
}

/// The signature of `F(d)` with its basis placed in degree `d·deg(a)`.
pub fn koszul_signature(scheme: VariableScheme, d: usize, deg_a: u64) -> Signature {
    Signature::new(
        scheme,
        vec![Slot {
            d,
            shift: (d as u64 * deg_a) as i64,
        }],
    )
}

/// `φ_d(e_π) = Σ_j (-1)^{j+1} a_{n,π(j)} e_{π_j}` where `π_j` omits position
/// `j`; `images` are the `a_{n,t}`.
fn phi_basis<F: Field>(field: &F, images: &[Polynomial<F>], pi: &OIMorphism) -> ModuleElement<F> {
    let n = pi.target();
    let img = pi.image();
    let mut terms = Vec::new();
    for j in 0..img.len() {
        let rest: Vec<u32> = img
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != j)
            .map(|(_, &v)| v)
            .collect();
        let basis = OIMorphism::from_raw(n, rest);
        let sign = if j % 2 == 0 {
            field.one()
        } else {
            field.neg(&field.one())
        };
        for (m, c) in images[img[j] as usize - 1].terms() {
            terms.push((
                ModuleMonomial {
                    slot: 0,
                    basis: basis.clone(),
                    mono: m.clone(),
                },
                field.mul(&sign, c),
            ));
        }
    }
    ModuleElement::from_terms(field, n, terms).expect("terms share the width")
}

/// The differential `φ_d` applied to an element `q` of `F(d)` at width
/// `n = width(q)`.
pub fn apply_differential<F: Field>(
    field: &F,
    a: &Polynomial<F>,
    d: usize,
    q: &ModuleElement<F>,
) -> Result<ModuleElement<F>> {
    let n = q.width();
    if d == 0 || d > n {
        return Err(Error::WidthMismatch { expected: d, found: n });
    }
    let images = koszul_images(field, a, n)?;
    let mut out = ModuleElement::zero(n);
    for (t, c) in q.terms() {
        if t.slot != 0 || t.basis.source() != d {
            return Err(Error::SignatureMismatch);
        }
        let image = phi_basis(field, &images, &t.basis).mul_monomial(field, c, &t.mono);
        out = out.add(field, &image)?;
    }
    Ok(out)
}

/// The images `φ_d(e_π)` for `π` in `enumerate_oi(d, n)` order.
pub fn differential<F: Field>(field: &F, a: &Polynomial<F>, d: usize, n: usize) -> Result<Vec<ModuleElement<F>>> {
    if d == 0 || d > n {
        return Err(Error::WidthMismatch { expected: d, found: n });
    }
    let images = koszul_images(field, a, n)?;
    Ok(enumerate_oi(d, n)
        .iter()
        .map(|pi| phi_basis(field, &images, pi))
        .collect())
}

/// The width-`n` Koszul complex of `a`.
#[derive(Clone, Debug)]
pub struct KoszulComplex<F: Field> {
    pub scheme: VariableScheme,
    pub width: usize,
    pub a: Polynomial<F>,
    deg_a: Option<u64>,
    images: Vec<Polynomial<F>>,
}

impl<F: Field> KoszulComplex<F> {
    pub fn new(field: &F, a: &Polynomial<F>, n: usize) -> Result<Self> {
        let images = koszul_images(field, a, n)?;
        Ok(KoszulComplex {
            scheme: a.scheme(),
            width: n,
            a: a.clone(),
            deg_a: a.homogeneous_degree(),
            images,
        })
    }

    pub fn rank(&self, d: usize) -> usize {
        binomial(self.width, d)
    }

    /// `φ_d(e_π)` for every `π`, in `enumerate_oi(d, n)` order.
    pub fn differential(&self, field: &F, d: usize) -> Result<Vec<ModuleElement<F>>> {
        if d == 0 || d > self.width {
            return Err(Error::WidthMismatch {
                expected: d,
                found: self.width,
            });
        }
        Ok(enumerate_oi(d, self.width)
            .iter()
            .map(|pi| phi_basis(field, &self.images, pi))
            .collect())
    }

    /// Whether `φ_{d-1} ∘ φ_d = 0` for all `2 <= d <= n`.
    pub fn is_complex(&self, field: &F) -> bool {
        (2..=self.width).all(|d| {
            self.differential(field, d).expect("d in range").iter().all(|q| {
                apply_differential(field, &self.a, d - 1, q)
                    .map(|r| r.is_zero())
                    .unwrap_or(false)
            })
        })
    }

    fn degree(&self) -> Result<u64> {
        self.deg_a.ok_or(Error::NonHomogeneous)
    }

    /// `dim F(d)_n` in internal degree `j`.
    pub fn dim(&self, d: usize, j: i64) -> Result<usize> {
        let k = self.degree()?;
        let base = j - (d as u64 * k) as i64;
        if d > self.width || base < 0 {
            return Ok(0);
        }
        Ok(self.rank(d) * exponent_vectors(self.scheme.nvars(self.width), base as u32).len())
    }

    /// Rank of `φ_d` in internal degree `j`.
    pub fn rank_in_degree(&self, field: &F, d: usize, j: i64) -> Result<usize> {
        let k = self.degree()?;
        if d == 0 || d > self.width {
            return Ok(0);
        }
        let base = j - (d as u64 * k) as i64;
        if base < 0 {
            return Ok(0);
        }
        let n = self.width;
        let nv = self.scheme.nvars(n);
        // columns of F(d-1) in degree j: (rank of π, exponents)
        let target_base = j - ((d - 1) as u64 * k) as i64;
        let cols: HashMap<Vec<u32>, usize> = exponent_vectors(nv, target_base as u32)
            .into_iter()
            .enumerate()
            .map(|(i, e)| (e, i))
            .collect();
        let ncols = cols.len();
        let phis = self.differential(field, d)?;
        let mut rows: Vec<SparseRow<F::Elem>> = Vec::new();
        for phi in &phis {
            for w in exponent_vectors(nv, base as u32) {
                let row = phi
                    .terms()
                    .map(|(t, c)| {
                        let e: Vec<u32> = t.mono.exponents().iter().zip(&w).map(|(x, y)| x + y).collect();
                        (oi_rank(t.basis.image(), n) * ncols + cols[&e], c.clone())
                    })
                    .collect();
                rows.push(row);
            }
        }
        Ok(rank(field, rows))
    }

    /// `dim H_p` in each internal degree `0 <= j <= max_degree`, for
    /// `0 <= p <= max_p`, keyed by `(p, j)`.
    pub fn homology_dims(&self, field: &F, max_degree: i64, max_p: usize) -> Result<BTreeMap<(usize, i64), usize>> {
        self.degree()?;
        let cells: Vec<(usize, i64)> = (0..=max_p)
            .flat_map(|p| (0..=max_degree).map(move |j| (p, j)))
            .collect();
        let dims: Vec<Result<usize>> = cells
            .par_iter()
            .map(|&(p, j)| {
                let kernel = self.dim(p, j)? - self.rank_in_degree(field, p, j)?;
                Ok(kernel - self.rank_in_degree(field, p + 1, j)?)
            })
            .collect();
        cells.into_iter().zip(dims).map(|(c, d)| Ok((c, d?))).collect()
    }

    /// `Σ_d (-1)^d dim F(d)_j = Σ_p (-1)^p dim H_{p,j}` for `j <= max_degree`.
    pub fn euler_characteristic_holds(&self, field: &F, max_degree: i64) -> Result<bool> {
        let h = self.homology_dims(field, max_degree, self.width)?;
        for j in 0..=max_degree {
            let mut lhs = 0i64;
            let mut rhs = 0i64;
            for d in 0..=self.width {
                let s = if d % 2 == 0 { 1 } else { -1 };
                lhs += s * self.dim(d, j)? as i64;
                rhs += s * h[&(d, j)] as i64;
            }
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The truncation bound `n·deg(a) + 2`.
    pub fn default_degree_bound(&self) -> Result<i64> {
        Ok((self.width as u64 * self.degree()?) as i64 + 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{PrimeField, Rationals};
    use crate::text::{parse_element, parse_polynomial};
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    const T1: VariableScheme = VariableScheme::Tensor { c: 1 };
    const T2: VariableScheme = VariableScheme::Tensor { c: 2 };

    fn poly(s: VariableScheme, w: usize, t: &str) -> Polynomial<Rationals> {
        parse_polynomial(&Rationals, &s, t, Some(w)).unwrap()
    }

    #[test]
    fn images_examples() {
        let a = poly(T1, 1, "x[1,1]");
        let im = koszul_images(&Rationals, &a, 3).unwrap();
        assert_eq!(
            im,
            vec![poly(T1, 3, "x[1,1]"), poly(T1, 3, "x[1,2]"), poly(T1, 3, "x[1,3]")]
        );
        let a = poly(T1, 1, "x[1,1]^3");
        let im = koszul_images(&Rationals, &a, 2).unwrap();
        assert_eq!(im, vec![poly(T1, 2, "x[1,1]^3"), poly(T1, 2, "x[1,2]^3")]);
        let a = poly(T2, 1, "x[1,1] - 2*x[2,1]");
        assert_eq!(koszul_images(&Rationals, &a, 1).unwrap(), vec![a.clone()]);
        assert_eq!(
            koszul_images(&Rationals, &Polynomial::zero(T1, 1), 2),
            Err(Error::ZeroElement)
        );
    }

    #[test]
    fn differential_examples() {
        let a = poly(T1, 1, "x[1,1]");
        let s1 = koszul_signature(T1, 1, 1);
        let phi1 = differential(&Rationals, &a, 1, 3).unwrap();
        for (t, q) in phi1.iter().enumerate() {
            assert_eq!(
                *q,
                parse_element(&Rationals, &Signature::ring(T1), &format!("x[1,{}]", t + 1), Some(3)).unwrap()
            );
        }
        let phi2 = differential(&Rationals, &a, 2, 3).unwrap();
        // enumerate_oi(2,3) = (1,2), (1,3), (2,3)
        let expect = [
            "x[1,1]*e{2} - x[1,2]*e{1}",
            "x[1,1]*e{3} - x[1,3]*e{1}",
            "x[1,2]*e{3} - x[1,3]*e{2}",
        ];
        for (q, e) in phi2.iter().zip(expect) {
            assert_eq!(*q, parse_element(&Rationals, &s1, e, Some(3)).unwrap());
        }
        let phi3 = differential(&Rationals, &a, 3, 3).unwrap();
        let back = apply_differential(&Rationals, &a, 2, &phi3[0]).unwrap();
        assert!(back.is_zero());
        assert!(differential(&Rationals, &a, 4, 3).is_err());
        assert!(differential(&Rationals, &a, 0, 3).is_err());
    }

    #[test]
    fn complex_property() {
        let list = [
            (T1, "x[1,1]"),
            (T1, "x[1,1]^2"),
            (T2, "x[1,1] + x[2,1]"),
            (T2, "3*x[1,1]^2 - x[1,1]*x[2,1]"),
            (T1, "x[1,1] + 1"),
        ];
        for (s, t) in list {
            let a = poly(s, 1, t);
            for n in 1..=6 {
                let k = KoszulComplex::new(&Rationals, &a, n).unwrap();
                assert!(k.is_complex(&Rationals), "{t} at width {n}");
                for d in 1..=n {
                    assert_eq!(k.differential(&Rationals, d).unwrap().len(), binomial(n, d));
                }
            }
        }
        let f = PrimeField::new(3).unwrap();
        let a = parse_polynomial(&f, &T2, "x[1,1] + 2*x[2,1]^2", Some(1)).unwrap();
        assert!(KoszulComplex::new(&f, &a, 4).unwrap().is_complex(&f));
    }

    #[test]
    fn differentials_have_degree_zero() {
        let a = poly(T2, 1, "x[1,1]*x[2,1] + x[2,1]^2");
        for d in 1..=4 {
            let src = koszul_signature(T2, d, 2);
            let dst = koszul_signature(T2, d - 1, 2);
            for (pi, q) in enumerate_oi(d, 4)
                .into_iter()
                .zip(differential(&Rationals, &a, d, 4).unwrap())
            {
                let e = ModuleElement::<Rationals>::basis_element(&Rationals, &src, 0, pi);
                assert_eq!(q.homogeneous_degree(&dst), e.homogeneous_degree(&src));
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn differentials_commute_with_oi_maps(seed in any::<u64>()) {
            let mut rng = StdRng::seed_from_u64(seed);
            let a = poly(T2, 1, ["x[1,1]", "x[1,1]^2 - x[2,1]", "2*x[2,1]*x[1,1]"][rng.gen_range(0..3)]);
            let m = rng.gen_range(1..4usize);
            let n = m + rng.gen_range(0..3usize);
            let d = rng.gen_range(1..=m);
            let sig = koszul_signature(T2, d, 1);
            let mut q = ModuleElement::zero(m);
            for _ in 0..3 {
                if let Some(t) = crate::sample::module_monomial(&mut rng, &sig, m, 2) {
                    let c = Rationals.from_i64(rng.gen_range(-3..4));
                    q = q.add(&Rationals, &ModuleElement::from_term(&Rationals, c, t)).unwrap();
                }
            }
            let eps = &enumerate_oi(m, n)[rng.gen_range(0..binomial(n, m))];
            let lhs = apply_differential(&Rationals, &a, d, &q).unwrap().apply_oi(&Rationals, &T2, eps).unwrap();
            let rhs = apply_differential(&Rationals, &a, d, &q.apply_oi(&Rationals, &T2, eps).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn linear_form_is_acyclic() {
        let a = poly(T1, 1, "x[1,1]");
        for n in 1..=5 {
            let k = KoszulComplex::new(&Rationals, &a, n).unwrap();
            let bound = k.default_degree_bound().unwrap();
            let h = k.homology_dims(&Rationals, bound, n).unwrap();
            for ((p, j), dim) in h {
                let expected = usize::from(p == 0 && j == 0);
                assert_eq!(dim, expected, "H_{p} in degree {j} at width {n}");
            }
            assert!(k.euler_characteristic_holds(&Rationals, bound).unwrap());
        }
    }

    #[test]
    fn squares_form_a_regular_sequence() {
        let a = poly(T1, 1, "x[1,1]^2");
        let k = KoszulComplex::new(&Rationals, &a, 2).unwrap();
        let h = k.homology_dims(&Rationals, 5, 2).unwrap();
        for j in 0..=5 {
            assert_eq!(h[&(1, j)], 0);
            assert_eq!(h[&(2, j)], 0);
        }
        // P_2/(x_1^2, x_2^2) has Hilbert function 1, 2, 1
        assert_eq!((0..=3).map(|j| h[&(0, j)]).collect::<Vec<_>>(), vec![1, 2, 1, 0]);
    }

    #[test]
    fn inhomogeneous_element_is_rejected() {
        let a = poly(T2, 1, "x[1,1]*x[2,1] + 1");
        let k = KoszulComplex::new(&Rationals, &a, 2).unwrap();
        assert_eq!(k.homology_dims(&Rationals, 4, 2), Err(Error::NonHomogeneous));
        let a = poly(T2, 1, "x[1,1]*x[2,1]");
        let k = KoszulComplex::new(&Rationals, &a, 3).unwrap();
        assert!(k.euler_characteristic_holds(&Rationals, 8).unwrap());
    }
}
