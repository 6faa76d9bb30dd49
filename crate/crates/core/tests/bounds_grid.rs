use fano_core::bounds::{
    expected_dim, flag_coeffs, flag_fiber_report, m_e, n_e, parameter_dim, span_dim, Connectivity,
};
use fano_core::polyring::graded_dim;

fn p(r: u32, d: i64) -> i64 {
    graded_dim(r, d).unwrap() as i64
}

#[test]
fn n_e_is_the_first_nonnegative_expected_dimension() {
    for r in 1..=3 {
        for d in 1..=6 {
            for e in 1..=3 {
                let start = span_dim(r, e) as u32;
                let scanned = (start..).find(|&n| expected_dim(n, r, d, e) >= 0).unwrap();
                assert_eq!(n_e(r, d, e), scanned as i64, "(r, d, e) = ({r}, {d}, {e})");
            }
        }
    }
}

#[test]
fn m_e_matches_n_e() {
    for r in 1..=3 {
        for d in 1..=6 {
            for e in 1..=3 {
                let expect = (n_e(r, d, e) - p(r, e as i64) + 1).max(0);
                assert_eq!(m_e(r, d, e), expect, "(r, d, e) = ({r}, {d}, {e})");
            }
        }
    }
}

#[test]
fn linear_parameter_count() {
    for r in 1..=3 {
        for n in r..=30 {
            assert_eq!(parameter_dim(n, r, 1), (n as i64 - r as i64) * (r as i64 + 1));
        }
    }
}

#[test]
fn flag_identity_grid() {
    for r in 1..=4 {
        let fc = flag_coeffs(r).unwrap();
        assert!(fc.verify());
        for d in 1..=6 {
            let threshold = r as i64 + p(r, d as i64 - 1);
            for n in 0..=30u32 {
                let rep = flag_fiber_report(n, r, d).unwrap();
                assert_eq!(rep.e_r, n as i64 - threshold);
                assert_eq!(rep.threshold_empty, (n as i64) < threshold);
                let expected = if (n as i64) < threshold {
                    Connectivity::Empty
                } else if n as i64 == threshold {
                    if d > 1 {
                        Connectivity::BoundaryDisconnected
                    } else {
                        Connectivity::Undetermined
                    }
                } else {
                    Connectivity::Connected
                };
                assert_eq!(rep.connected, expected);
            }
        }
    }
}
