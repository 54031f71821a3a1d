//! Built-in forms: root lattices, Voronoi's principal form, and the three
//! six-dimensional rigid forms `Q_E6*`, `R1`, `R2`.

use crate::form::QuadForm;

pub fn e6_dual() -> QuadForm {
    QuadForm::from_rows(&[
        &[4, 1, 2, 2, -1, 1],
        &[1, 4, 2, 2, 2, 1],
        &[2, 2, 4, 1, 1, 2],
        &[2, 2, 1, 4, 1, 2],
        &[-1, 2, 1, 1, 4, 2],
        &[1, 1, 2, 2, 2, 4],
    ])
    .expect("symmetric literal")
}

pub fn r1() -> QuadForm {
    QuadForm::from_rows(&[
        &[12, 3, 6, 6, -3, 3],
        &[3, 7, 4, 4, 3, 2],
        &[6, 4, 8, 3, 1, 4],
        &[6, 4, 3, 8, 1, 4],
        &[-3, 3, 1, 1, 7, 3],
        &[3, 2, 4, 4, 3, 7],
    ])
    .expect("symmetric literal")
}

pub fn r2() -> QuadForm {
    QuadForm::from_rows(&[
        &[0, 0, 0, 0, 0, 0],
        &[0, 5, 2, 2, 3, 1],
        &[0, 2, 4, 0, 2, 2],
        &[0, 2, 0, 4, 2, 2],
        &[0, 3, 2, 2, 5, 3],
        &[0, 1, 2, 2, 3, 5],
    ])
    .expect("symmetric literal")
}

/// Gram matrix of the root lattice `D4` in a basis of simple roots.
pub fn d4() -> QuadForm {
    QuadForm::from_rows(&[&[2, -1, 0, 0], &[-1, 2, -1, -1], &[0, -1, 2, 0], &[0, -1, 0, 2]])
        .expect("symmetric literal")
}

/// Gram matrix of the root lattice `A_d` (Cartan matrix).
pub fn a_root(d: usize) -> QuadForm {
    let rows: Vec<Vec<i64>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| match i.abs_diff(j) {
                    0 => 2,
                    1 => -1,
                    _ => 0,
                })
                .collect()
        })
        .collect();
    let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
    QuadForm::from_rows(&refs).expect("symmetric literal")
}

/// Voronoi's principal form of the first kind, `(d+1)·I − J`, the Gram
/// matrix of `A_d*` up to scale. Its Delone subdivision is a triangulation.
pub fn principal(d: usize) -> QuadForm {
    let rows: Vec<Vec<i64>> = (0..d)
        .map(|i| (0..d).map(|j| if i == j { d as i64 } else { -1 }).collect())
        .collect();
    let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
    QuadForm::from_rows(&refs).expect("symmetric literal")
}

/// Looks up a fixture by name (used by the command line).
pub fn by_name(name: &str) -> Option<QuadForm> {
    let lower = name.to_ascii_lowercase();
    match lower.as_str() {
        "e6*" | "e6dual" | "e6_dual" => Some(e6_dual()),
        "r1" => Some(r1()),
        "r2" => Some(r2()),
        "d4" => Some(d4()),
        _ => {
            if let Some(n) = lower.strip_prefix("principal") {
                n.parse().ok().filter(|&d| d >= 1).map(principal)
            } else if let Some(n) = lower.strip_prefix('a') {
                n.parse().ok().filter(|&d| d >= 1).map(a_root)
            } else {
                None
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rint;

    #[test]
    fn fixtures_are_psd_with_expected_ranks() {
        assert!(e6_dual().is_positive_definite());
        assert!(r1().is_positive_definite());
        assert!(r2().is_psd());
        assert_eq!(r2().rank(), 5);
        assert!(d4().is_positive_definite());
        assert_eq!(d4().determinant(), rint(4));
        assert_eq!(a_root(3).determinant(), rint(4));
        // det((d+1)I - J) = (d+1)^(d-1)
        assert_eq!(principal(3).determinant(), rint(16));
        assert_eq!(principal(2), QuadForm::from_rows(&[&[2, -1], &[-1, 2]]).unwrap());
    }
}
