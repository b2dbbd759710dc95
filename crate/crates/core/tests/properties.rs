use atlas_core::exact_scalar::{int, rat, RealCyclotomic as Rc};
use atlas_core::linalg::{charpoly, hermite_rows, smith_diagonal};
use atlas_core::root_system::{Family, RootDatum, TypeLabel};
use atlas_core::slice_invariants::bounded_solution_exists;
use atlas_core::strata_classical::{partitions, weyl_classes, Partition};
use atlas_core::weyl::{length_and_fixed, ClassSpec, WeylElement};
use num_traits::Signed;
use proptest::prelude::*;

const LABELS: [(Family, usize); 8] = [
    (Family::A, 4),
    (Family::B, 3),
    (Family::C, 4),
    (Family::D, 4),
    (Family::G, 2),
    (Family::F, 4),
    (Family::E, 6),
    (Family::E, 7),
];

fn datum(i: usize) -> RootDatum {
    let (f, n) = LABELS[i % LABELS.len()];
    RootDatum::new(TypeLabel::new(f, n).unwrap()).unwrap()
}

/// `Σ c_i cos(2π t_i)`.
fn cyclotomic(terms: &[(i64, i64, i64)]) -> Rc {
    terms
        .iter()
        .fold(Rc::from_int(0), |acc, &(c, p, q)| acc + Rc::cos_turn(&rat(p, q)) * Rc::from_int(c))
}

fn cyc_terms() -> impl Strategy<Value = Vec<(i64, i64, i64)>> {
    prop::collection::vec((-3i64..=3, 0i64..12, prop::sample::select(vec![3i64, 4, 5, 8, 12])), 1..4)
}

proptest! {
    #[test]
    fn cyclotomic_field_axioms(a in cyc_terms(), b in cyc_terms(), c in cyc_terms()) {
        let (a, b, c) = (cyclotomic(&a), cyclotomic(&b), cyclotomic(&c));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        if !b.is_zero() {
            prop_assert_eq!(&(&a * &b) * &b.inverse(), a.clone());
        }
    }

    #[test]
    fn cyclotomic_sign_agrees_with_float(a in cyc_terms()) {
        let x = cyclotomic(&a);
        let f = x.to_f64();
        if f.abs() > 1e-9 {
            prop_assert_eq!(x.sign_of(), if f > 0.0 { 1 } else { -1 });
        }
        prop_assert_eq!(x.is_zero(), x.sign_of() == 0);
    }

    #[test]
    fn reflections_are_involutions_on_roots(i in 0usize..8, a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let d = datum(i);
        let roots = d.all_roots();
        let (x, y) = (a.get(&roots), b.get(&roots));
        let r = d.reflect(x, y);
        prop_assert!(d.is_root(&r));
        prop_assert_eq!(d.reflect(x, &r), y.clone());
        prop_assert_eq!(d.pairing(&r, &r), d.pairing(y, y));
    }

    #[test]
    fn length_has_parity_of_word(i in 0usize..8, word in prop::collection::vec(0usize..8, 0..12)) {
        let d = datum(i);
        let l = d.rank();
        let mut w = WeylElement::identity(l);
        for &s in &word {
            w = w.compose(&WeylElement::reflection(&d, &d.simple_root(s % l)));
        }
        let (len, fixed) = length_and_fixed(&d, &w, &d.positive_roots);
        prop_assert!(len <= word.len());
        prop_assert_eq!(len % 2, word.len() % 2);
        for r in &fixed {
            prop_assert_eq!(&w.apply(r), r);
        }
        let inv = w.power(w.order() - 1);
        prop_assert!(w.compose(&inv).is_identity());
        prop_assert_eq!(length_and_fixed(&d, &inv, &d.positive_roots).0, len);
    }

    #[test]
    fn dual_partition_is_an_involution(n in 0usize..14, k in any::<prop::sample::Index>()) {
        let ps = partitions(n);
        let p: &Partition = k.get(&ps);
        prop_assert_eq!(p.dual().dual(), p.clone());
        prop_assert_eq!(p.dual().size(), n);
        prop_assert_eq!(p.dual().len(), p.parts().first().copied().unwrap_or(0));
    }

    #[test]
    fn class_spec_display_round_trips(i in 0usize..4, n in 3usize..7, k in any::<prop::sample::Index>()) {
        let f = [Family::A, Family::B, Family::C, Family::D][i];
        let label = TypeLabel::new(f, n).unwrap();
        let classes = weyl_classes(label);
        let spec = k.get(&classes);
        let text = spec.to_string();
        let back = match spec {
            ClassSpec::Partition(_) => ClassSpec::Partition(text.split(',').map(|s| s.parse().unwrap()).collect()),
            _ => ClassSpec::parse(&text).unwrap(),
        };
        prop_assert_eq!(&back, spec);
        prop_assert!(back.validate(label).is_ok());
    }

    #[test]
    fn smith_product_is_determinant(m in prop::collection::vec(prop::collection::vec(-6i64..=6, 3), 3)) {
        let q: Vec<Vec<_>> = m.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
        let det = charpoly(&q)[0].abs();
        let a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        let d = smith_diagonal(&a);
        if det == int(0) {
            prop_assert!(d.len() < 3);
        } else {
            prop_assert_eq!(d.len(), 3);
            prop_assert_eq!(int(d.iter().product::<i128>() as i64), det);
            prop_assert!(d.windows(2).all(|w| w[1] % w[0] == 0));
        }
        let h = hermite_rows(&a);
        prop_assert_eq!(h.len(), d.len());
    }

    #[test]
    fn bounded_search_matches_enumeration(
        g in prop::collection::vec(prop::collection::vec(-9i64..=9, 1..4), 1..4),
        m in prop::sample::select(vec![3i64, 5, 7, 9]),
    ) {
        let cols = g.iter().map(Vec::len).min().unwrap();
        let g: Vec<Vec<i64>> = g.iter().map(|r| r[..cols].to_vec()).collect();
        let lp = g.len();
        let mut naive = false;
        for code in 1..(m as usize).pow(lp as u32) {
            let x: Vec<i64> = (0..lp).map(|k| (code / (m as usize).pow(k as u32) % m as usize) as i64).collect();
            if (0..cols).all(|j| (0..lp).map(|k| g[k][j] * x[k]).sum::<i64>().rem_euclid(m) == 0) {
                naive = true;
                break;
            }
        }
        prop_assert_eq!(bounded_solution_exists(&g, m), naive);
    }
}
