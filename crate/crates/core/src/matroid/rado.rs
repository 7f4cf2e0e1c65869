use serde::{Deserialize, Serialize};

use super::{MatroidError, RankOracle};

/// Families beyond this count would need more than 2^20 rank queries.
pub const MAX_FAMILIES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadoHallViolation {
    /// Indices of the families whose union is too small.
    pub families: Vec<usize>,
    /// `r(∪ A_i)`.
    pub lhs: usize,
    /// `Σ ℓ_i`.
    pub rhs: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadoHallOutcome {
    pub feasible: bool,
    pub violation: Option<RadoHallViolation>,
}

/// Decides whether disjoint `a_i ⊆ A_i` with `|a_i| = ℓ_i` exist whose union
/// is independent, by checking `r(∪_{i∈I} A_i) >= Σ_{i∈I} ℓ_i` for every
/// `I` in ascending bitmask order. Existence only; no transversal is built.
///
/// The families must be pairwise disjoint.
pub fn rado_hall_feasible<O: RankOracle + ?Sized>(
    oracle: &O,
    families: &[Vec<usize>],
    quotas: &[usize],
) -> Result<RadoHallOutcome, MatroidError> {
    if families.len() != quotas.len() {
        return Err(MatroidError::QuotaCountMismatch {
            families: families.len(),
            quotas: quotas.len(),
        });
    }
    if families.len() > MAX_FAMILIES {
        return Err(MatroidError::TooManyFamilies {
            count: families.len(),
            cap: MAX_FAMILIES,
        });
    }
    let ground = oracle.ground();
    let mut owner = vec![false; ground.len()];
    let families = families
        .iter()
        .map(|f| ground.normalize(f))
        .collect::<Result<Vec<_>, _>>()?;
    for f in &families {
        for &e in f {
            if std::mem::replace(&mut owner[e], true) {
                return Err(MatroidError::FamiliesNotDisjoint { element: e });
            }
        }
    }

    for mask in 0u32..1 << families.len() {
        let chosen: Vec<usize> = (0..families.len())
            .filter(|&i| mask >> i & 1 == 1)
            .collect();
        let rhs: usize = chosen.iter().map(|&i| quotas[i]).sum();
        if rhs == 0 {
            continue;
        }
        let mut union: Vec<usize> = chosen
            .iter()
            .flat_map(|&i| families[i].iter().copied())
            .collect();
        union.sort_unstable();
        let lhs = oracle.rank(&union);
        if lhs < rhs {
            return Ok(RadoHallOutcome {
                feasible: false,
                violation: Some(RadoHallViolation {
                    families: chosen,
                    lhs,
                    rhs,
                }),
            });
        }
    }
    Ok(RadoHallOutcome {
        feasible: true,
        violation: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::matrix::ExactMatrix;
    use crate::matroid::{free_matroid, FnOracle, GroundSet, KungOracle};

    #[test]
    fn zero_quotas_feasible() {
        let oracle = FnOracle::new(GroundSet::anonymous(3), |_: &[usize]| 0);
        let out = rado_hall_feasible(&oracle, &[vec![0], vec![1, 2]], &[0, 0]).unwrap();
        assert!(out.feasible);
    }

    #[test]
    fn free_matroid_feasible_within_sizes() {
        let oracle = free_matroid(6);
        let families = [vec![0, 1], vec![2], vec![3, 4, 5]];
        assert!(
            rado_hall_feasible(&oracle, &families, &[2, 1, 3])
                .unwrap()
                .feasible
        );
        let out = rado_hall_feasible(&oracle, &families, &[2, 2, 0]).unwrap();
        assert_eq!(
            out.violation,
            Some(RadoHallViolation {
                families: vec![1],
                lhs: 1,
                rhs: 2
            })
        );
    }

    #[test]
    fn kung_identity_example() {
        let kung = KungOracle::new(ExactMatrix::identity(FieldSpec::Prime(2), 2));
        let families = [vec![0], vec![1], vec![2, 3]];
        assert!(
            rado_hall_feasible(&kung, &families, &[1, 1, 0])
                .unwrap()
                .feasible
        );
    }

    #[test]
    fn input_errors() {
        let oracle = free_matroid(3);
        assert_eq!(
            rado_hall_feasible(&oracle, &[vec![0, 1], vec![1]], &[1, 1]),
            Err(MatroidError::FamiliesNotDisjoint { element: 1 })
        );
        assert!(matches!(
            rado_hall_feasible(&oracle, &[vec![3]], &[1]),
            Err(MatroidError::ElementNotInGround { .. })
        ));
        assert!(matches!(
            rado_hall_feasible(&oracle, &[vec![0]], &[1, 2]),
            Err(MatroidError::QuotaCountMismatch { .. })
        ));
        let many: Vec<Vec<usize>> = (0..21).map(|_| vec![]).collect();
        assert_eq!(
            rado_hall_feasible(&free_matroid(1), &many, &[0; 21]),
            Err(MatroidError::TooManyFamilies { count: 21, cap: 20 })
        );
    }
}
