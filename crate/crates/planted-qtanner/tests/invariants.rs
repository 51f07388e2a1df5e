//! Cross-module invariants over randomized inputs.

use planted_qtanner::csp::{certify_unsat, emit_lin_instance, reduce_to_3xor, LinConstraint, LinInstance};
use planted_qtanner::expander::CongruenceGroup;
use planted_qtanner::gf::{FVector, LinearCode, PrimeField};
use planted_qtanner::inner::{q_entropy, q_entropy_inv, Rho};
use planted_qtanner::tanner::CssCode;
use planted_qtanner::Error;
use proptest::prelude::*;

fn group_and_coords() -> impl Strategy<Value = (u64, u32, [u64; 6])> {
    (prop_oneof![Just(2u64), Just(3), Just(5)], 1u32..=3)
        .prop_flat_map(|(p, m)| (Just(p), Just(m), proptest::array::uniform6(0..p.pow(m))))
}

proptest! {
    #[test]
    fn group_law_is_associative_with_inverses((p, m, c) in group_and_coords()) {
        let g = CongruenceGroup::new(p, m).unwrap();
        let x = g.encode(c[0], c[1], c[2]).unwrap();
        let y = g.encode(c[3], c[4], c[5]).unwrap();
        let z = g.mul(&y, &x);
        prop_assert_eq!(g.mul(&g.mul(&x, &y), &z).matrix, g.mul(&x, &g.mul(&y, &z)).matrix);
        prop_assert_eq!(g.mul(&x, &g.inv(&x)).matrix, g.identity().matrix);
        let idx = g.index(&x).unwrap();
        prop_assert_eq!(g.element(idx).unwrap().matrix, x.matrix);
    }

    #[test]
    fn dual_dimension_and_orthogonality(
        p in prop_oneof![Just(2u32), Just(3), Just(5)],
        rows in proptest::collection::vec(proptest::collection::vec(0u32..5, 6), 1..5),
    ) {
        let f = PrimeField::new(p).unwrap();
        let rows: Vec<Vec<u32>> = rows.into_iter().map(|r| r.into_iter().map(|x| x % p).collect()).collect();
        let code = LinearCode::from_generators(f, 6, &rows).unwrap();
        let dual = code.dual();
        prop_assert_eq!(code.dim() + dual.dim(), 6);
        for r in &rows {
            prop_assert!(code.contains(&FVector::new(f, r.clone()).unwrap()));
        }
        for a in code.basis_rows() {
            for b in dual.basis_rows() {
                let dot: u64 = a.iter().zip(&b).map(|(&x, &y)| x as u64 * y as u64).sum();
                prop_assert_eq!(dot % p as u64, 0);
            }
        }
    }

    #[test]
    fn entropy_inverse_is_monotone(a in 0.0f64..=1.0, b in 0.0f64..=1.0, q in 2u32..=5) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (x, y) = (q_entropy_inv(lo, q).unwrap(), q_entropy_inv(hi, q).unwrap());
        prop_assert!(x <= y + 1e-15);
        prop_assert!((q_entropy(y, q).unwrap() - hi).abs() <= 1e-12);
    }

    #[test]
    fn rho_times_le_matches_rational_order(num in 0u64..50, den in 1u64..50, n in 1u64..20, v in 0u64..60) {
        let r = Rho::new(num, den);
        prop_assert_eq!(r.times_le(n, v), num * n <= v * den);
        prop_assert_eq!(r.squared_half(), Rho::new(num * num, 2 * den * den));
    }

    /// A solution of the original system extends to the chain variables.
    #[test]
    fn reduction_extends_solutions(
        m in 4usize..12,
        seed_rows in proptest::collection::vec(proptest::collection::btree_set(0usize..12, 1..8), 1..10),
        assignment in proptest::collection::vec(0u32..2, 12),
    ) {
        let constraints: Vec<LinConstraint> = seed_rows
            .iter()
            .map(|s| s.iter().copied().filter(|&v| v < m).collect::<Vec<_>>())
            .filter(|v| !v.is_empty())
            .map(|vars| {
                let rhs = vars.iter().map(|&v| assignment[v]).sum::<u32>() % 2;
                LinConstraint { coeffs: vec![1; vars.len()], vars, rhs }
            })
            .collect();
        prop_assume!(!constraints.is_empty());
        let inst = LinInstance { p: 2, m, constraints, arity_bound: None, provenance: None };
        let red = reduce_to_3xor(&inst).unwrap();
        prop_assert!(red.max_arity() <= 3);
        prop_assert_eq!(red.num_vars, m + red.dummies);
        // Dummies are prefix parities along each chain, so propagate in order.
        let mut y: Vec<Option<bool>> = (0..red.num_vars).map(|v| (v < m).then(|| assignment[v] == 1)).collect();
        for _ in 0..red.constraints.len() {
            for c in &red.constraints {
                let unknown: Vec<usize> = c.vars.iter().copied().filter(|&v| y[v].is_none()).collect();
                if let [u] = unknown[..] {
                    let rest = c.vars.iter().filter(|&&v| v != u).fold(c.rhs, |acc, &v| acc ^ y[v].unwrap());
                    y[u] = Some(rest);
                }
            }
        }
        for c in &red.constraints {
            let lhs = c.vars.iter().fold(false, |acc, &v| acc ^ y[v].unwrap());
            prop_assert_eq!(lhs, c.rhs);
        }
    }
}

#[test]
fn only_rhs_outside_the_row_space_is_emitted() {
    let code = CssCode::steane();
    let zero = emit_lin_instance(&code, &FVector::new(code.field(), vec![0; code.n()]).unwrap());
    assert!(matches!(zero, Err(Error::BetaNotAdmissible(_))));
    let ones = emit_lin_instance(&code, &FVector::new(code.field(), vec![1; code.n()]).unwrap()).unwrap();
    let cert = certify_unsat(&ones).unwrap();
    assert!(cert.inconsistent && cert.check(&ones));
}
