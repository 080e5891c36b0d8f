use super::*;
use crate::coeff::{PrimeField, Rationals};
use crate::oi::binomial;
use crate::order::{order_by_name, PaperLex, WidthGrlex};
use crate::polyring::VariableScheme;
use crate::text::parse_element;

const T1: VariableScheme = VariableScheme::Tensor { c: 1 };
const T2: VariableScheme = VariableScheme::Tensor { c: 2 };

fn lex() -> Arc<dyn MonomialOrder> {
    Arc::new(PaperLex)
}

fn el(sig: &Signature, w: usize, s: &str) -> ModuleElement<Rationals> {
    parse_element(&Rationals, sig, s, Some(w)).unwrap()
}

fn gens(sig: &Signature, list: &[(usize, &str)]) -> GeneratorSet<Rationals> {
    let g = list.iter().map(|(w, s)| el(sig, *w, s)).collect();
    GeneratorSet::new(&Rationals, sig, g, Flavor::OI).unwrap()
}

fn ring1() -> Signature {
    Signature::ring(T1)
}

#[test]
fn reduce_step_examples() {
    let sig = ring1();
    let b = vec![el(&sig, 1, "x[1,1]")];
    let r = reduce_step(&Rationals, &sig, lex(), &b[0], &b).unwrap().unwrap();
    assert!(r.is_zero());
    let q = el(&sig, 2, "x[1,2]^2");
    let r = reduce_step(&Rationals, &sig, lex(), &q, &b).unwrap().unwrap();
    assert!(r.is_zero());
    let one = el(&sig, 1, "1");
    assert_eq!(reduce_step(&Rationals, &sig, lex(), &one, &b).unwrap(), None);
    assert_eq!(
        reduce_step(&Rationals, &sig, lex(), &ModuleElement::zero(2), &b),
        Err(Error::ZeroInput)
    );
}

#[test]
fn reduce_step_lowers_the_leading_monomial() {
    let sig = ring1();
    let b = vec![el(&sig, 1, "x[1,1]^2 - 3*x[1,1]")];
    let q = el(&sig, 3, "2*x[1,1]*x[1,3]^2 + x[1,2]");
    let r = reduce_step(&Rationals, &sig, lex(), &q, &b).unwrap().unwrap();
    assert_eq!(r, el(&sig, 3, "6*x[1,1]*x[1,3] + x[1,2]"));
}

#[test]
fn normal_form_examples() {
    let sig = ring1();
    let b = vec![el(&sig, 1, "x[1,1]")];
    let nf = |q: &ModuleElement<Rationals>| normal_form(&Rationals, &sig, lex(), q, &b).unwrap();
    assert!(nf(&ModuleElement::zero(2)).is_zero());
    assert!(nf(&el(&sig, 2, "x[1,2]^2 + x[1,1]")).is_zero());
    assert_eq!(nf(&el(&sig, 1, "x[1,1] + 1")), el(&sig, 1, "1"));
}

#[test]
fn normal_form_difference_lies_in_the_width_truncation() {
    let sig = Signature::free(T2, 1);
    let g = gens(
        &sig,
        &[
            (1, "x[1,1]*x[2,1]*e{1} - x[2,1]^2*e{1}"),
            (2, "x[1,2]*e{1} + x[2,1]*e{2}"),
        ],
    );
    let q = el(
        &sig,
        3,
        "x[1,3]^2*x[2,3]*e{3} + x[1,2]*x[2,1]*e{1} - 5*x[2,3]*e{2} + x[1,1]*x[1,2]*e{2}",
    );
    let gb = equivariant_buchberger(&Rationals, &g, lex(), GbConfig::default()).unwrap();
    let r = normal_form(&Rationals, &sig, lex(), &q, &gb.basis).unwrap();
    let diff = q.sub(&Rationals, &r).unwrap();
    let classical = classical_buchberger_width(&Rationals, &g, lex(), 3);
    let local = normal_form_classical(&sig, &classical, &diff);
    assert!(local.is_zero());
}

/// Classical reduction at one width: only the identity morphism is used.
fn normal_form_classical(
    sig: &Signature,
    basis: &[ModuleElement<Rationals>],
    q: &ModuleElement<Rationals>,
) -> ModuleElement<Rationals> {
    let n = q.width();
    let frame = Arc::new(Frame::new(sig, n));
    let fo = FrameOrder {
        order: lex(),
        frame: frame.clone(),
    };
    let engine = Engine::new(&Rationals, &fo);
    let b: Vec<_> = basis.iter().map(|g| engine.normalize(frame.to_local(g))).collect();
    let (r, _) = engine.reduce(engine.normalize(frame.to_local(q)), &b, true, false);
    frame.to_element(&Rationals, &r)
}

#[test]
fn classical_buchberger_examples() {
    let sig = ring1();
    let g = gens(&sig, &[(1, "x[1,1]")]);
    let gb = classical_buchberger_width(&Rationals, &g, lex(), 2);
    assert_eq!(gb, vec![el(&sig, 2, "x[1,2]"), el(&sig, 2, "x[1,1]")]);
    let unit = gens(&sig, &[(0, "1")]);
    for n in 0..4 {
        assert_eq!(
            classical_buchberger_width(&Rationals, &unit, lex(), n),
            vec![el(&sig, n, "1")]
        );
    }
}

#[test]
fn classical_buchberger_s_vectors_reduce_to_zero() {
    let sig = Signature::ring(T2);
    let g = gens(
        &sig,
        &[(2, "x[1,1]*x[2,2] - x[1,2]*x[2,1]"), (1, "x[1,1]^2 - x[2,1]^2")],
    );
    for n in 1..=3 {
        let gb = classical_buchberger_width(&Rationals, &g, lex(), n);
        let frame = Arc::new(Frame::new(&sig, n));
        let fo = FrameOrder {
            order: lex(),
            frame: frame.clone(),
        };
        let engine = Engine::new(&Rationals, &fo);
        let b: Vec<_> = gb.iter().map(|x| engine.normalize(frame.to_local(x))).collect();
        assert!(b.iter().all(|v| Rationals.is_one(&v[0].1)));
        for i in 0..b.len() {
            for j in i + 1..b.len() {
                let (li, lj) = (&b[i][0].0, &b[j][0].0);
                if li.comp != lj.comp {
                    continue;
                }
                let l: Vec<u32> = li.exps.iter().zip(&lj.exps).map(|(a, c)| *a.max(c)).collect();
                let si: Vec<u32> = l.iter().zip(&li.exps).map(|(a, c)| a - c).collect();
                let sj: Vec<u32> = l.iter().zip(&lj.exps).map(|(a, c)| a - c).collect();
                let sv = engine.sub_scaled(&[], &Rationals.from_i64(-1), &si, &b[i]);
                let sv = engine.sub_scaled(&sv, &Rationals.one(), &sj, &b[j]);
                assert!(engine.reduce(sv, &b, true, false).0.is_empty());
            }
        }
        // every image of a generator reduces to zero
        for q in g.images(&Rationals, n) {
            assert!(engine
                .reduce(engine.normalize(frame.to_local(&q)), &b, true, false)
                .0
                .is_empty());
        }
    }
}

#[test]
fn equivariant_examples() {
    let sig = ring1();
    let g = gens(&sig, &[(1, "x[1,1]")]);
    let gb = equivariant_buchberger(&Rationals, &g, lex(), GbConfig::default()).unwrap();
    assert_eq!(gb.basis, vec![el(&sig, 1, "x[1,1]")]);
    assert_eq!(gb.certification.status, CertStatus::HeuristicallyCertified);
    assert_eq!(gb.order, "paper_lex");

    let unit = gens(&sig, &[(0, "1")]);
    let gb = equivariant_buchberger(&Rationals, &unit, lex(), GbConfig::default()).unwrap();
    assert_eq!(gb.basis, vec![el(&sig, 0, "1")]);
    assert_eq!(gb.certification.status, CertStatus::HeuristicallyCertified);
}

#[test]
fn cycle_chain_never_stabilizes() {
    let sig = Signature::ring(VariableScheme::DegreeD { d: 2 });
    let cycle = |i: usize| {
        let mut t: Vec<String> = (1..i).map(|k| format!("x({},{})", k, k + 1)).collect();
        t.push(format!("x(1,{i})"));
        el(&sig, i, &t.join("*"))
    };
    let g = GeneratorSet::new(&Rationals, &sig, (3..=6).map(cycle).collect(), Flavor::OI).unwrap();
    let cfg = GbConfig {
        max_width: 6,
        lookahead: 2,
    };
    let gb = equivariant_buchberger(&Rationals, &g, lex(), cfg).unwrap();
    assert_eq!(gb.certification.status, CertStatus::WidthLimited);
    assert_eq!(gb.basis.len(), 4);
}

#[test]
fn equivariant_output_is_groebner() {
    let cases: Vec<(Signature, Vec<(usize, &str)>)> = vec![
        (ring1(), vec![(1, "x[1,1]^2"), (2, "x[1,1]*x[1,2]")]),
        (ring1(), vec![(2, "x[1,1]^2 - x[1,2]^2")]),
        (Signature::ring(T2), vec![(2, "x[1,1]*x[2,2] - x[1,2]*x[2,1]")]),
        (Signature::free(T1, 1), vec![(2, "x[1,2]*e{1} - x[1,1]*e{2}")]),
    ];
    for (sig, list) in cases {
        let g = gens(&sig, &list);
        let cfg = GbConfig {
            max_width: 6,
            lookahead: 2,
        };
        let gb = equivariant_buchberger(&Rationals, &g, lex(), cfg).unwrap();
        let top = gb.certification.certified_width + cfg.lookahead;
        assert!(
            is_groebner(&Rationals, &gb.basis, &g, lex(), 0..=top),
            "{sig}: {:?}",
            gb.basis
        );
        for b in &gb.basis {
            assert!(Rationals.is_one(leading_term(&PaperLex, b).unwrap().1));
        }
        let leads: Vec<_> = gb
            .basis
            .iter()
            .map(|b| leading_term(&PaperLex, b).unwrap().0.clone())
            .collect();
        for (i, a) in leads.iter().enumerate() {
            for (j, b) in leads.iter().enumerate() {
                if i != j && a.width() <= b.width() {
                    assert!(oi_divides_unchecked(&sig, a, b).is_none());
                }
            }
        }
    }
}

#[test]
fn is_groebner_examples() {
    let sig = ring1();
    let g = gens(&sig, &[(1, "x[1,1]")]);
    assert!(!is_groebner(&Rationals, &[], &g, lex(), 1..=2));
    assert!(!is_groebner(&Rationals, &[el(&sig, 1, "x[1,1]^2")], &g, lex(), 1..=1));
    assert!(is_groebner(&Rationals, &[el(&sig, 1, "x[1,1]")], &g, lex(), 0..=5));
}

#[test]
fn membership_examples() {
    let sig = ring1();
    let g = gens(&sig, &[(1, "x[1,1]"), (2, "x[1,1]*x[1,2] + x[1,2]^2")]);
    let cfg = GbConfig::default();
    let m = |q: &ModuleElement<Rationals>| membership(&Rationals, q, &g, lex(), cfg).unwrap();
    assert!(m(&g.gens[0]));
    assert!(m(&g.gens[1]));
    let eps = OIMorphism::new(5, vec![2, 4]).unwrap();
    let img = g.gens[1].apply_oi(&Rationals, &T1, &eps).unwrap();
    let q = img.mul_monomial(
        &Rationals,
        &Rationals.from_i64(3),
        &T1.var(5, &crate::VarKey::Tensor(1, 5)).unwrap(),
    );
    assert!(m(&q));
    assert!(!m(&el(&sig, 1, "1")));

    let sig = Signature::ring(VariableScheme::DegreeD { d: 2 });
    let g = GeneratorSet::new(&Rationals, &sig, vec![el(&sig, 3, "x(1,2)*x(2,3)*x(1,3)")], Flavor::OI).unwrap();
    let q = el(&sig, 5, "x(1,2)");
    let cfg = GbConfig {
        max_width: 4,
        lookahead: 2,
    };
    let r = membership(&Rationals, &q, &g, lex(), cfg);
    assert!(matches!(r, Ok(false) | Err(Error::UncertifiedWidth { .. })));
    let cfg = GbConfig {
        max_width: 3,
        lookahead: 2,
    };
    assert_eq!(
        membership(&Rationals, &q, &g, lex(), cfg),
        Err(Error::UncertifiedWidth { width: 5, certified: 3 })
    );
}

#[test]
fn zero_generators_are_dropped_with_a_warning() {
    let sig = ring1();
    let g = GeneratorSet::new(
        &Rationals,
        &sig,
        vec![ModuleElement::zero(2), el(&sig, 1, "x[1,1]")],
        Flavor::OI,
    )
    .unwrap();
    assert_eq!(g.gens.len(), 1);
    assert_eq!(g.warnings.len(), 1);
    let empty = GeneratorSet::<Rationals>::new(&Rationals, &sig, vec![], Flavor::OI).unwrap();
    let gb = equivariant_buchberger(&Rationals, &empty, lex(), GbConfig::default()).unwrap();
    assert!(gb.basis.is_empty());
}

#[test]
fn fi_generators_expand_to_their_symmetric_orbit() {
    let sig = ring1();
    let g = GeneratorSet::new(&Rationals, &sig, vec![el(&sig, 2, "x[1,1]*x[1,2]^2")], Flavor::FI).unwrap();
    assert_eq!(g.signature, sig);
    assert_eq!(
        g.gens,
        vec![el(&sig, 2, "x[1,1]*x[1,2]^2"), el(&sig, 2, "x[1,1]^2*x[1,2]")]
    );

    let sig = Signature::free(T1, 2);
    let g = GeneratorSet::new(&Rationals, &sig, vec![el(&sig, 2, "x[1,1]*e{1,2}")], Flavor::FI).unwrap();
    assert_eq!(g.signature.slots.len(), 2);
    let sig2 = g.signature.clone();
    assert_eq!(
        g.gens,
        vec![el(&sig2, 2, "x[1,1]*e{λ=0; 1,2}"), el(&sig2, 2, "x[1,2]*e{λ=1; 1,2}")]
    );
}

#[test]
fn fi_ideal_is_closed_under_permutations() {
    // the FI-ideal of x_1 x_2^2 contains x_{σ(1)} x_{σ(2)}^2 for every injection σ
    let sig = ring1();
    let g = GeneratorSet::new(&Rationals, &sig, vec![el(&sig, 2, "x[1,1]*x[1,2]^2")], Flavor::FI).unwrap();
    let cfg = GbConfig::default();
    for (a, b) in [(3, 1), (2, 3), (1, 3)] {
        let q = el(&sig, 3, &format!("x[1,{a}]*x[1,{b}]^2"));
        assert!(membership(&Rationals, &q, &g, lex(), cfg).unwrap());
    }
    let oi_only = gens(&sig, &[(2, "x[1,1]*x[1,2]^2")]);
    assert!(!membership(&Rationals, &el(&sig, 2, "x[1,1]^2*x[1,2]"), &oi_only, lex(), cfg).unwrap());
}

#[test]
fn prime_field_computations() {
    let f = PrimeField::new(7).unwrap();
    let sig = ring1();
    let q = parse_element(&f, &sig, "x[1,1]^2 + 6*x[1,2]^2", Some(2)).unwrap();
    let g = GeneratorSet::new(&f, &sig, vec![q], Flavor::OI).unwrap();
    let gb = equivariant_buchberger(&f, &g, lex(), GbConfig::default()).unwrap();
    assert!(is_groebner(
        &f,
        &gb.basis,
        &g,
        lex(),
        0..=gb.certification.certified_width + 2
    ));
}

fn betti(
    sig: &Signature,
    list: &[(usize, &str)],
    order: Arc<dyn MonomialOrder>,
    widths: &[usize],
    max_p: usize,
) -> BettiTable {
    betti_table(
        &Rationals,
        &gens(sig, list),
        order,
        widths,
        max_p,
        ResolveTarget::Quotient,
    )
    .unwrap()
}

#[test]
fn principal_ideal_resolution() {
    let sig = ring1();
    let g = gens(&sig, &[(1, "x[1,1]^2")]);
    let r = width_resolution(&Rationals, &g, lex(), 1, 3, ResolveTarget::Quotient).unwrap();
    assert_eq!(r.shifts(0), vec![0]);
    assert_eq!(r.shifts(1), vec![2]);
    assert_eq!(r.length(), 1);
    let empty = GeneratorSet::<Rationals>::new(&Rationals, &sig, vec![], Flavor::OI).unwrap();
    let r = width_resolution(&Rationals, &empty, lex(), 3, 3, ResolveTarget::Quotient).unwrap();
    assert_eq!(r.length(), 0);
    assert_eq!(r.shifts(0), vec![0]);
}

#[test]
fn squares_give_koszul_betti_numbers() {
    let t = betti(&ring1(), &[(1, "x[1,1]^2")], lex(), &[1, 2, 3, 4], 4);
    for n in 1..=4 {
        for p in 0..=4 {
            let row = t.row(n, p);
            if p <= n {
                assert_eq!(row.len(), 1);
                assert_eq!(row.get(&(2 * p as i64)).copied(), Some(binomial(n, p) as u64));
            } else {
                assert!(row.is_empty());
            }
        }
    }
}

#[test]
fn resolutions_are_minimal_and_exact() {
    let cases: Vec<(Signature, Vec<(usize, &str)>)> = vec![
        (ring1(), vec![(2, "x[1,1]*x[1,2]")]),
        (Signature::ring(T2), vec![(2, "x[1,1]*x[2,2] - x[1,2]*x[2,1]")]),
        (ring1(), vec![(1, "x[1,1]^2"), (2, "x[1,1]*x[1,2]")]),
        (Signature::free(T1, 1), vec![(2, "x[1,2]*e{1} - x[1,1]*e{2}")]),
    ];
    for (sig, list) in cases {
        let g = gens(&sig, &list);
        for n in 1..=3 {
            let r = width_resolution(&Rationals, &g, lex(), n, 3, ResolveTarget::Quotient).unwrap();
            assert!(r.is_minimal());
            assert!(!r.has_unit_entries());
            assert!(r.composes_to_zero(&Rationals));
            assert!(r.is_exact_up_to(&Rationals, 6), "{sig} width {n}");
        }
    }
}

#[test]
fn betti_numbers_do_not_depend_on_the_order() {
    let cases: Vec<(Signature, Vec<(usize, &str)>)> = vec![
        (ring1(), vec![(2, "x[1,1]*x[1,2]")]),
        (Signature::ring(T2), vec![(2, "x[1,1]*x[2,2] - x[1,2]*x[2,1]")]),
        (ring1(), vec![(1, "x[1,1]^2"), (2, "x[1,1]*x[1,2]")]),
        (ring1(), vec![(2, "x[1,1]^2 + x[1,2]^2")]),
    ];
    for (sig, list) in cases {
        let a = betti(&sig, &list, lex(), &[1, 2, 3, 4], 3);
        let b = betti(&sig, &list, Arc::new(WidthGrlex), &[1, 2, 3, 4], 3);
        assert_eq!(a, b, "{sig} {list:?}");
    }
}

#[test]
fn submodule_target_shifts_homological_degree() {
    let sig = ring1();
    let g = gens(&sig, &[(1, "x[1,1]^2")]);
    let q = betti_table(&Rationals, &g, lex(), &[3], 3, ResolveTarget::Quotient).unwrap();
    let s = betti_table(&Rationals, &g, lex(), &[3], 2, ResolveTarget::Submodule).unwrap();
    for p in 0..=2 {
        assert_eq!(s.row(3, p), q.row(3, p + 1));
    }
}

#[test]
fn non_homogeneous_input_is_rejected() {
    let sig = ring1();
    let g = gens(&sig, &[(1, "x[1,1]^2 + x[1,1]")]);
    assert_eq!(
        width_resolution(&Rationals, &g, lex(), 2, 2, ResolveTarget::Quotient).unwrap_err(),
        Error::NonHomogeneous
    );
}

#[test]
fn betti_table_json_round_trip() {
    let t = betti(
        &ring1(),
        &[(1, "x[1,1]^2")],
        order_by_name("paper_lex").unwrap(),
        &[2, 3],
        2,
    );
    let s = serde_json::to_string(&t).unwrap();
    let back: BettiTable = serde_json::from_str(&s).unwrap();
    assert_eq!(t, back);
    assert!(betti(&ring1(), &[(0, "1")], lex(), &[2], 2).row(2, 0).is_empty());
}
