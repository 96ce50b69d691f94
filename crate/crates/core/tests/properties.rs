use std::sync::OnceLock;

use proptest::prelude::*;

use ncgeom::algebra::{block_algebra, matrix_algebra, FiniteAlgebra};
use ncgeom::calculus::{derivation_calculus, DerivationCalculus};
use ncgeom::connes_lott::{connes_lott_calculus, ConnesLott};
use ncgeom::linalg::{add_vectors, is_zero_vector, quotient, sub_vectors, Matrix, Subspace, Vector};
use ncgeom::Scalar;

fn scalar() -> impl Strategy<Value = Scalar> {
    (-6i64..=6, 1i64..=4, -6i64..=6, 1i64..=4).prop_map(|(a, b, c, d)| Scalar::complex((a, b), (c, d)))
}

fn real_small() -> impl Strategy<Value = Scalar> {
    (-3i64..=3).prop_map(Scalar::from_int)
}

fn vector(n: usize) -> impl Strategy<Value = Vector> {
    prop::collection::vec(scalar(), n)
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    // Small integer entries give rank-deficient matrices often enough.
    prop::collection::vec(prop::collection::vec(real_small(), cols), rows).prop_map(|r| Matrix::from_rows(r).unwrap())
}

fn m2() -> &'static DerivationCalculus {
    static CELL: OnceLock<DerivationCalculus> = OnceLock::new();
    CELL.get_or_init(|| derivation_calculus(2).unwrap())
}

fn cl() -> &'static ConnesLott {
    static CELL: OnceLock<ConnesLott> = OnceLock::new();
    CELL.get_or_init(|| connes_lott_calculus().unwrap())
}

fn alg_element(alg: &FiniteAlgebra) -> impl Strategy<Value = Vector> {
    vector(alg.dim())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_field_laws(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv()).is_one());
            prop_assert_eq!(&(&b / &a) * &a, b.clone());
        }
        prop_assert_eq!(a.conj().conj(), a.clone());
    }

    #[test]
    fn scalar_text_round_trip(a in scalar()) {
        let text = a.to_string();
        prop_assert_eq!(text.parse::<Scalar>().unwrap(), a.clone());
        let json = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<Scalar>(&json).unwrap(), a);
    }

    #[test]
    fn kernel_and_image(m in matrix(4, 6)) {
        let kernel = m.kernel();
        for k in kernel.basis_vectors() {
            prop_assert!(is_zero_vector(&m.apply(&k)));
        }
        prop_assert_eq!(m.rank() + kernel.dim(), m.cols());
        prop_assert_eq!(m.image().dim(), m.rank());
        prop_assert_eq!(m.transpose().rank(), m.rank());
    }

    #[test]
    fn rref_is_reduced(m in matrix(5, 5)) {
        let (r, pivots, rank) = m.rref();
        prop_assert_eq!(rank, pivots.len());
        for (i, &p) in pivots.iter().enumerate() {
            for k in 0..r.rows() {
                prop_assert_eq!(r.get(k, p).is_one(), k == i);
                if k != i {
                    prop_assert!(r.get(k, p).is_zero());
                }
            }
        }
        prop_assert_eq!(Subspace::from_vectors(5, m.transpose().columns()).dim(), rank);
    }

    #[test]
    fn solve_and_inverse(m in matrix(4, 4), x in vector(4)) {
        let b = m.apply(&x);
        let y = m.solve(&b).expect("b lies in the image");
        prop_assert_eq!(m.apply(&y), b);
        if let Some(inv) = m.inverse() {
            prop_assert_eq!(m.mul(&inv), Matrix::identity(4));
            prop_assert_eq!(y, x);
        } else {
            prop_assert!(m.rank() < 4);
        }
    }

    #[test]
    fn quotient_section_projects_back(vs in prop::collection::vec(vector(6), 0..4), w in vector(6)) {
        let killed = Subspace::from_vectors(6, vs.clone());
        let q = quotient(6, killed.clone()).unwrap();
        prop_assert_eq!(q.dim() + killed.dim(), 6);
        let p = q.project(&w);
        prop_assert_eq!(q.project(&q.section(&p)), p.clone());
        prop_assert!(killed.contains(&sub_vectors(&w, &q.section(&p))));
        for v in &vs {
            prop_assert!(is_zero_vector(&q.project(v)));
        }
    }

    #[test]
    fn matrix_algebra_product_matches_matrices(x in alg_element(&matrix_algebra(3).unwrap()), y in alg_element(&matrix_algebra(3).unwrap())) {
        let alg = matrix_algebra(3).unwrap();
        let prod = alg.to_matrix(&alg.mul(&x, &y)).unwrap();
        prop_assert_eq!(prod, alg.to_matrix(&x).unwrap().mul(&alg.to_matrix(&y).unwrap()));
    }

    #[test]
    fn block_algebra_associative(x in vector(5), y in vector(5), z in vector(5)) {
        let alg = block_algebra(&[2, 1]).unwrap();
        prop_assert_eq!(alg.mul(&alg.mul(&x, &y), &z), alg.mul(&x, &alg.mul(&y, &z)));
        prop_assert_eq!(alg.mul(alg.unit(), &x), x.clone());
        prop_assert_eq!(alg.mul(&x, alg.unit()), x);
    }

    #[test]
    fn derivation_calculus_leibniz(f in vector(4), g in vector(4)) {
        let calc = &m2().calc;
        let alg = calc.algebra();
        let omega1 = calc.omega(1);
        let lhs = calc.d(0, &alg.mul(&f, &g));
        let rhs = add_vectors(&omega1.act_right(&calc.d(0, &f), &g), &omega1.act_left(&f, &calc.d(0, &g)));
        prop_assert_eq!(lhs, rhs);
        prop_assert!(is_zero_vector(&calc.d(1, &calc.d(0, &f))));
    }

    #[test]
    fn connes_lott_d_is_inner(f in vector(5)) {
        let calc = &cl().calc;
        let theta = calc.theta().unwrap().clone();
        let omega1 = calc.omega(1);
        // d f = −[θ, f] in degree zero.
        let comm = sub_vectors(&omega1.act_left(&f, &theta), &omega1.act_right(&theta, &f));
        prop_assert_eq!(calc.d(0, &f), comm);
    }

    #[test]
    fn bimodule_actions_commute(f in vector(4), g in vector(4), m in vector(12)) {
        let omega1 = m2().calc.omega(1);
        prop_assert_eq!(omega1.act_right(&omega1.act_left(&f, &m), &g), omega1.act_left(&f, &omega1.act_right(&m, &g)));
    }
}
