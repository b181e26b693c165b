//! Dynamics of a correspondence: paths, invariant sets, and the circle
//! families where expansivity and freeness can be decided.
//!
//! On the unit circle we write `z = e^{2 pi i alpha}`, `w = e^{2 pi i beta}`.
//! For `z^m = w^n` this turns `C_p(T)` into the lines `n beta - m alpha in Z`
//! on the torus, which is what the exact routines in [`arcs`], [`gp`] and
//! [`components`] work with.

pub mod arcs;
pub mod components;
pub mod gp;
pub mod paths;
pub mod sampling;

pub use arcs::{expansive_oracle, propagate_arcs, Arc, ArcSet, OracleOutcome, ARC_CAP};
pub use components::component_count_oracle;
pub use gp::{gp_enumerate, gp_sample, GPReport, JSampler};
pub use paths::{
    invariant_check, path_space, propagate_finite, Direction, InvariantReport, PathSample,
    PointSet, Violation,
};
pub use sampling::{limit_set_sample, OrbitDirection, SampleOptions};

use crate::correspondence::Correspondence;
use crate::error::{Error, Result};
use crate::polyalg::BivariatePolynomial;
use num_integer::Integer;
use serde::Serialize;

/// The three families whose restriction to `T` is handled exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum CircleFamily {
    /// `z^m - w^n`.
    Monomial { m: usize, n: usize },
    /// `(w - z^{m_1}) ... (w - z^{m_r})`.
    Product { exponents: Vec<usize> },
    /// `(z^{i_1} - w^{j_1}) ... (z^{i_r} - w^{j_r})`.
    Relations { pairs: Vec<(usize, usize)> },
}

/// A correspondence from one of the circle families.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CircleCorrespondence {
    pub family: CircleFamily,
}

impl CircleCorrespondence {
    pub fn monomial(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::invalid("monomial family needs m, n >= 1"));
        }
        Ok(CircleCorrespondence {
            family: CircleFamily::Monomial { m, n },
        })
    }

    pub fn product(exponents: Vec<usize>) -> Result<Self> {
        if exponents.is_empty() || exponents.contains(&0) {
            return Err(Error::invalid("product family needs exponents >= 1"));
        }
        let mut s = exponents.clone();
        s.sort_unstable();
        s.dedup();
        if s.len() != exponents.len() {
            return Err(Error::invalid("product family needs distinct exponents"));
        }
        Ok(CircleCorrespondence {
            family: CircleFamily::Product { exponents },
        })
    }

    /// Validates that the product is squarefree.
    pub fn relations(pairs: Vec<(usize, usize)>) -> Result<Self> {
        if pairs.is_empty() || pairs.iter().any(|&(i, j)| i == 0 || j == 0) {
            return Err(Error::invalid("relation family needs exponents >= 1"));
        }
        let c = CircleCorrespondence {
            family: CircleFamily::Relations { pairs },
        };
        c.correspondence()?;
        Ok(c)
    }

    /// `gcd(m, n)` for the monomial family.
    pub fn d(&self) -> Option<usize> {
        match self.family {
            CircleFamily::Monomial { m, n } => Some(m.gcd(&n)),
            _ => None,
        }
    }

    /// `(m, n)` for the monomial family.
    pub fn monomial_degrees(&self) -> Result<(usize, usize)> {
        match self.family {
            CircleFamily::Monomial { m, n } => Ok((m, n)),
            _ => Err(Error::invalid("operation needs the monomial family")),
        }
    }

    pub fn polynomial(&self) -> BivariatePolynomial {
        match &self.family {
            CircleFamily::Monomial { m, n } => BivariatePolynomial::monomial_relation(*m, *n),
            CircleFamily::Product { exponents } => exponents
                .iter()
                .map(|&m| BivariatePolynomial::graph_of_power(m))
                .reduce(|a, b| a.mul(&b))
                .expect("nonempty"),
            CircleFamily::Relations { pairs } => pairs
                .iter()
                .map(|&(i, j)| BivariatePolynomial::monomial_relation(i, j))
                .reduce(|a, b| a.mul(&b))
                .expect("nonempty"),
        }
    }

    pub fn correspondence(&self) -> Result<Correspondence> {
        match &self.family {
            CircleFamily::Monomial { m, n } => Correspondence::monomial(*m, *n),
            CircleFamily::Product { exponents } => Correspondence::product_of_powers(exponents),
            CircleFamily::Relations { pairs } => Correspondence::from_factors(
                pairs
                    .iter()
                    .map(|&(i, j)| BivariatePolynomial::monomial_relation(i, j))
                    .collect(),
            ),
        }
    }
}

/// `z^m - w^n` is expansive on `T` iff `m` does not divide `n`.
pub fn expansive_decide(cc: &CircleCorrespondence) -> Result<bool> {
    let (m, n) = cc.monomial_degrees()?;
    Ok(n % m != 0)
}

/// `C_p(T)` for `z^m - w^n` has `gcd(m, n)` connected components.
pub fn component_count(cc: &CircleCorrespondence) -> Result<usize> {
    let (m, n) = cc.monomial_degrees()?;
    Ok(m.gcd(&n))
}

/// A freeness decision with the criterion or witness behind it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreeDecision {
    pub free: bool,
    pub certificate: String,
}

/// Applies the freeness criterion matching the family.
///
/// * monomial: free iff `m != n`;
/// * product of graphs `w = z^{m_i}`: free if every `m_i >= 2` and the `m_i`
///   are pairwise coprime; not free if some `m_i = 1` (constant paths);
/// * product of relations: free if no factor is `z - w` and the exponents
///   different from `1` are pairwise coprime; not free if some factor has
///   `i = j` (constant paths) or two factors are `(a, b)` and `(b, a)`
///   (paths `z, w, z`).
///
/// Anything else is [`Error::Undecided`].
pub fn free_decide(cc: &CircleCorrespondence) -> Result<FreeDecision> {
    match &cc.family {
        CircleFamily::Monomial { m, n } => Ok(if m != n {
            FreeDecision {
                free: true,
                certificate: format!("m = {m} differs from n = {n}: lines of distinct slopes meet in finitely many points"),
            }
        } else {
            FreeDecision {
                free: false,
                certificate: "m = n: diagonal paths (z, z, ..., z) give GP(N) = T".into(),
            }
        }),
        CircleFamily::Product { exponents } => {
            if exponents.contains(&1) {
                return Ok(FreeDecision {
                    free: false,
                    certificate: "factor w - z: diagonal paths (z, z, ..., z) give GP(N) = T"
                        .into(),
                });
            }
            if pairwise_coprime(exponents) {
                Ok(FreeDecision {
                    free: true,
                    certificate: format!(
                        "degrees {exponents:?} are at least 2 and pairwise coprime"
                    ),
                })
            } else {
                Err(Error::Undecided(format!(
                    "degrees {exponents:?} are not pairwise coprime; no criterion applies"
                )))
            }
        }
        CircleFamily::Relations { pairs } => {
            if let Some(&(i, _)) = pairs.iter().find(|(i, j)| i == j) {
                return Ok(FreeDecision {
                    free: false,
                    certificate: format!(
                        "factor z^{i} - w^{i} contains z - w: diagonal paths give GP(N) = T"
                    ),
                });
            }
            for (k, &(a, b)) in pairs.iter().enumerate() {
                if pairs[k + 1..].contains(&(b, a)) {
                    return Ok(FreeDecision {
                        free: false,
                        certificate: format!(
                            "factors ({a}, {b}) and ({b}, {a}): paths (z, w, z) for every z give GP(2) = T"
                        ),
                    });
                }
            }
            if let [(i, j)] = pairs.as_slice() {
                return free_decide(&CircleCorrespondence::monomial(*i, *j)?);
            }
            let exps: Vec<usize> = pairs
                .iter()
                .flat_map(|&(i, j)| [i, j])
                .filter(|&e| e != 1)
                .collect();
            if pairwise_coprime(&exps) {
                Ok(FreeDecision {
                    free: true,
                    certificate: format!(
                        "no factor z - w and the exponents different from 1, {exps:?}, are pairwise coprime"
                    ),
                })
            } else {
                Err(Error::Undecided(format!(
                    "exponents {exps:?} are not pairwise coprime; no criterion applies"
                )))
            }
        }
    }
}

fn pairwise_coprime(v: &[usize]) -> bool {
    v.iter()
        .enumerate()
        .all(|(i, a)| v[i + 1..].iter().all(|b| a.gcd(b) == 1))
}
