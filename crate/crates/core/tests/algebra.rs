use kova_core::algebra::{numeric_eigen, rational_roots};
use kova_core::exprio::{catalog_all, parse_expr, print_expr};
use kova_core::{int, rat, CMatrix, LinearSolution, MultiPoly, RatMatrix, Rational, UniPoly, Vars};
use proptest::prelude::*;

fn vars() -> Vars {
    Vars::new(&["q", "p", "z"])
}

fn small_poly() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec(((0u32..3, 0u32..3, 0u32..2), -5i64..=5, 1i64..4), 0..5).prop_map(|terms| {
        let v = vars();
        terms
            .into_iter()
            .fold(MultiPoly::zero(&v), |acc, ((a, b, c), n, d)| {
                &acc + &MultiPoly::monomial(&v, vec![a, b, c], rat(n, d))
            })
    })
}

fn small_uni() -> impl Strategy<Value = UniPoly> {
    prop::collection::vec(-6i64..=6, 1..6).prop_map(|c| UniPoly::from_ints(&c))
}

fn to_c(m: &RatMatrix) -> CMatrix {
    let data = m
        .entries()
        .iter()
        .map(|q| num_complex::Complex64::new(kova_core::algebra::rational::to_f64(q), 0.0))
        .collect();
    CMatrix::new(m.rows(), m.cols(), data).unwrap()
}

/// `L · U · L⁻¹` with unit lower-triangular `L`: the eigenvalues are the
/// diagonal of `U`.
fn similar_to_triangular(diag: &[i64], upper: &[i64], lower: &[i64]) -> RatMatrix {
    let n = diag.len();
    let mut u = RatMatrix::zeros(n, n);
    let mut l = RatMatrix::identity(n);
    let mut linv = RatMatrix::identity(n);
    let mut k = 0;
    for i in 0..n {
        u.set(i, i, int(diag[i]));
        for j in i + 1..n {
            u.set(i, j, int(upper[k % upper.len()]));
            l.set(j, i, int(lower[k % lower.len()]));
            k += 1;
        }
    }
    // Forward substitution for the inverse of the unit lower-triangular factor.
    for col in 0..n {
        for row in col + 1..n {
            let mut s = Rational::from_integer(0.into());
            for t in col..row {
                s += l.get(row, t) * linv.get(t, col);
            }
            linv.set(row, col, -s);
        }
    }
    l.mul(&u).unwrap().mul(&linv).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplication_distributes(p in small_poly(), q in small_poly(), r in small_poly()) {
        prop_assert_eq!(&(&p + &q) * &r, &(&p * &r) + &(&q * &r));
    }

    #[test]
    fn subtraction_inverts_addition(p in small_poly(), q in small_poly()) {
        prop_assert_eq!(&(&p + &q) - &q, p);
    }

    #[test]
    fn division_recombines(a in small_uni(), b in small_uni()) {
        prop_assume!(!b.is_zero());
        let (quo, rem) = a.div_rem(&b).unwrap();
        prop_assert_eq!(&(&quo * &b) + &rem, a);
        if let (Some(dr), Some(db)) = (rem.degree(), b.degree()) {
            prop_assert!(dr < db);
        }
    }

    #[test]
    fn triangular_char_poly_is_product(diag in prop::collection::vec(-4i64..=4, 1..5),
                                      upper in prop::collection::vec(-3i64..=3, 1..8)) {
        let n = diag.len();
        let mut m = RatMatrix::zeros(n, n);
        let mut k = 0;
        for i in 0..n {
            m.set(i, i, int(diag[i]));
            for j in i + 1..n {
                m.set(i, j, int(upper[k % upper.len()]));
                k += 1;
            }
        }
        let roots: Vec<Rational> = diag.iter().map(|&d| int(d)).collect();
        prop_assert_eq!(m.char_poly().unwrap(), UniPoly::from_roots(&roots));
    }

    #[test]
    fn root_multiplicities_account_for_degree(roots in prop::collection::vec(-4i64..=4, 0..4),
                                              extra in prop::collection::vec(-3i64..=3, 0..3)) {
        let r: Vec<Rational> = roots.iter().map(|&x| int(x)).collect();
        // x^2 + 2 contributes no rational roots.
        let mut p = UniPoly::from_roots(&r);
        if !extra.is_empty() {
            p = &p * &UniPoly::from_ints(&[2, 0, 1]);
        }
        let (found, cofactor) = rational_roots(&p).unwrap();
        let total: usize = found.iter().map(|(_, m)| m).sum();
        prop_assert_eq!(total + cofactor.degree().unwrap_or(0), p.degree().unwrap_or(0));
        let mut got: Vec<Rational> = found.iter().flat_map(|(q, m)| std::iter::repeat_n(q.clone(), *m)).collect();
        let mut want = r.clone();
        got.sort();
        want.sort();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn numeric_eigen_agrees_with_exact_roots(diag in prop::collection::vec(-4i64..=4, 1..5),
                                             upper in prop::collection::vec(-2i64..=2, 1..6),
                                             lower in prop::collection::vec(-2i64..=2, 1..6)) {
        let m = similar_to_triangular(&diag, &upper, &lower);
        let (exact, cof) = rational_roots(&m.char_poly().unwrap()).unwrap();
        prop_assert_eq!(cof.degree(), Some(0));
        let mut want: Vec<f64> = exact
            .iter()
            .flat_map(|(q, k)| std::iter::repeat_n(kova_core::algebra::rational::to_f64(q), *k))
            .collect();
        let mut got: Vec<f64> = numeric_eigen(&to_c(&m)).unwrap().iter().map(|z| {
            assert!(z.im.abs() < 1e-6, "{z}");
            z.re
        }).collect();
        want.sort_by(f64::total_cmp);
        got.sort_by(f64::total_cmp);
        for (a, b) in got.iter().zip(&want) {
            // Repeated eigenvalues of defective matrices lose accuracy.
            let mult = want.iter().filter(|w| (*w - b).abs() < 0.5).count();
            let tol = if mult == 1 { 1e-8 } else { 1e-4 };
            prop_assert!((a - b).abs() < tol, "{a} vs {b}");
        }
    }

    #[test]
    fn solve_satisfies_system(entries in prop::collection::vec(-3i64..=3, 9), rhs in prop::collection::vec(-3i64..=3, 3)) {
        let rows: Vec<&[i64]> = entries.chunks(3).collect();
        let m = RatMatrix::from_ints(&rows);
        let v = Vars::new(&["s"]);
        let b: Vec<MultiPoly> = rhs.iter().map(|&x| MultiPoly::constant(&v, int(x))).collect();
        let check = |x: &[MultiPoly]| -> bool {
            (0..3).all(|i| {
                let lhs = (0..3).fold(MultiPoly::zero(&v), |acc, j| &acc + &x[j].scale(m.get(i, j)));
                lhs == b[i]
            })
        };
        match m.solve(&b).unwrap() {
            LinearSolution::Unique(x) => prop_assert!(check(&x)),
            LinearSolution::Parametric { particular, kernel } => {
                prop_assert!(check(&particular));
                prop_assert_eq!(kernel.len(), 3 - m.rank());
                for k in &kernel {
                    prop_assert!(m.mul_vec(k).unwrap().iter().all(|e| *e == int(0)));
                }
            }
            LinearSolution::Inconsistent { .. } => prop_assert!(m.rank() < 3),
        }
    }

    #[test]
    fn print_parse_round_trip(p in small_poly()) {
        prop_assert_eq!(parse_expr(&print_expr(&p), &vars()).unwrap(), p);
    }
}

#[test]
fn catalog_hamiltonians_round_trip() {
    for def in catalog_all() {
        let v = def.vars();
        for h in def.hamiltonian_polys(&v).unwrap() {
            assert_eq!(parse_expr(&print_expr(&h), &v).unwrap(), h, "{}", def.id);
        }
        let again = kova_core::exprio::parse_system(&def.to_text()).unwrap();
        assert_eq!(
            again.hamiltonian_polys(&v).unwrap(),
            def.hamiltonian_polys(&v).unwrap()
        );
    }
}

#[test]
fn precedence_is_standard() {
    let v = Vars::new(&["x", "y"]);
    let p = |s: &str| parse_expr(s, &v).unwrap();
    assert_eq!(p("-x^2"), p("-(x^2)"));
    assert_eq!(p("x + y*x^2"), p("x + (y*(x^2))"));
    assert_eq!(p("2*x - -y"), p("2*x + y"));
    assert_ne!(p("-x^2"), p("(-x)^2"));
}
