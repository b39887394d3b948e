use tnpascal::bigfloat::relative_difference;
use tnpascal::oracle::{self, oracle_eigenvalues, oracle_singular_values, Query};
use tnpascal::tn::{tn_eigenvalues, tn_singular_values, AccuracyMode};
use tnpascal::{BigFloat, Family, FamilySpec};

fn spec(s: &str, n: usize) -> FamilySpec {
    s.parse::<Family>().unwrap().with_n(n)
}

fn close(values: &[f64], reference: &[BigFloat], tol: f64) -> bool {
    values.len() == reference.len()
        && values.iter().zip(reference).all(|(v, r)| relative_difference(&BigFloat::from_f64(*v, r.precision()), r) <= tol)
}

const RATIONAL_FAMILIES: [&str; 5] = [
    "lattice:alpha=2,beta=3,gamma=1",
    "lattice:alpha=1/2,beta=5/3,gamma=0",
    "rxy:x=3/4,y=2",
    "psi:x=2,y=3/2",
    "pnl:x=3/2,lambda=1",
];

#[test]
fn rational_spectra_agree_with_oracle_at_sixty_digits() {
    let tol = f64::EPSILON;
    for fam in RATIONAL_FAMILIES {
        for n in 1..=5 {
            let s = spec(fam, n);
            let bd = s.bd_exact().unwrap();
            let sv = tn_singular_values(&bd, AccuracyMode::certified()).unwrap();
            let r = oracle_singular_values(&s, 60).unwrap();
            assert!(close(&sv.value, &r.values, tol), "{s}: {:?} vs {:?}", sv.value, r.to_f64());
            let ev = tn_eigenvalues(&bd, AccuracyMode::certified()).unwrap();
            let r = oracle_eigenvalues(&s, 60).unwrap();
            assert!(close(&ev.value, &r.values, tol), "{s}: {:?} vs {:?}", ev.value, r.to_f64());
        }
    }
}

#[test]
fn certified_ladder_matches_oracle_up_to_twelve() {
    let s = spec("lattice:alpha=sqrt(2),beta=sqrt(3),gamma=sqrt(5)", 11);
    let bd = s.bd_exact().unwrap();
    let ev = tn_eigenvalues(&bd, AccuracyMode::certified()).unwrap();
    let r = oracle_eigenvalues(&s, 100).unwrap();
    assert!(close(&ev.value, &r.values, 2.0 * f64::EPSILON));
    let sv = tn_singular_values(&bd, AccuracyMode::certified()).unwrap();
    let r = oracle_singular_values(&s, 100).unwrap();
    assert!(close(&sv.value, &r.values, 2.0 * f64::EPSILON));
}

#[test]
fn oracle_results_pass_their_own_doubling_test() {
    for (fam, n) in [("pnl:x=3/2,lambda=1", 10), ("lattice:alpha=sqrt(2),beta=sqrt(3),gamma=sqrt(5)", 5)] {
        let s = spec(fam, n);
        let b: Vec<f64> = (0..=n).map(|i| if i % 3 == 0 { 7.0 } else { -2.0 }).collect();
        for q in [Query::Eigenvalues, Query::SingularValues, Query::Inverse, Query::Solve(b)] {
            let r = oracle::oracle(&s, &q, 100).unwrap();
            assert!(r.certified_digits >= 100);
            assert!(oracle::self_check(&s, &q, &r).unwrap(), "{s} {q:?}");
        }
    }
}

#[test]
fn lattice_spectrum_is_positive_and_distinct() {
    let s = spec("lattice:alpha=sqrt(2),beta=sqrt(3),gamma=sqrt(5)", 8);
    let ev = tn_eigenvalues(&s.bd_exact().unwrap(), AccuracyMode::certified()).unwrap();
    assert!(ev.value.windows(2).all(|w| w[0] > w[1]));
    assert!(ev.value.iter().all(|v| *v > 0.0));
}
