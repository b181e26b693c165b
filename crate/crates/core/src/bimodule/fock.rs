//! Truncated Fock module `A ⊕ X ⊕ X^{⊗2} ⊕ ... ⊕ X^{⊗K}` over a finite `J`.
//!
//! Level `k` has the basis of indicator functions of paths in `P_k(J)`.
//! Operators are sparse exact matrices; adjoints are taken for the inner
//! product `<f, g> = sum_w (f|g)_A(w)`, i.e. `T^* = E^{-1} T^H E` with `E`
//! the diagonal of path weights.

use super::finite::{FiniteBimodule, IndexPath};
use crate::error::{Error, Result};
use crate::polyalg::{Coefficient, GaussianRational};
use num_traits::Zero;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};

/// Largest truncation level.
pub const FOCK_MAX_LEVEL: usize = 8;
/// Largest total dimension.
pub const FOCK_MAX_DIM: usize = 200_000;

/// A sparse square matrix with exact entries.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    dim: usize,
    rows: Vec<BTreeMap<usize, GaussianRational>>,
}

impl Operator {
    pub fn zero(dim: usize) -> Self {
        Operator {
            dim,
            rows: vec![BTreeMap::new(); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> GaussianRational {
        self.rows[r]
            .get(&c)
            .cloned()
            .unwrap_or_else(GaussianRational::zero)
    }

    pub fn add_entry(&mut self, r: usize, c: usize, v: GaussianRational) {
        let slot = self.rows[r].entry(c).or_insert_with(GaussianRational::zero);
        *slot = &*slot + v;
        if slot.is_zero() {
            self.rows[r].remove(&c);
        }
    }

    /// Nonzero entries `(row, col, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &GaussianRational)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn mul(&self, other: &Operator) -> Operator {
        let mut out = Operator::zero(self.dim);
        for (r, row) in self.rows.iter().enumerate() {
            for (k, a) in row {
                for (c, b) in &other.rows[*k] {
                    out.add_entry(r, *c, a * b);
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Operator) -> Operator {
        let mut out = self.clone();
        for (r, c, v) in other.entries() {
            out.add_entry(r, c, -v.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    /// Largest entry modulus among columns selected by `keep`.
    pub fn max_entry(&self, keep: impl Fn(usize) -> bool) -> f64 {
        self.entries()
            .filter(|(_, c, _)| keep(*c))
            .map(|(_, _, v)| v.magnitude())
            .fold(0.0, f64::max)
    }

    /// Whether every column selected by `keep` vanishes.
    pub fn vanishes_on(&self, keep: impl Fn(usize) -> bool) -> bool {
        self.entries().all(|(_, c, _)| !keep(c))
    }
}

struct Level {
    paths: Vec<IndexPath>,
    index: HashMap<Vec<usize>, usize>,
    offset: usize,
}

/// Fock levels `0..=K` over a finite bimodule.
pub struct FockTruncation {
    pub base: FiniteBimodule,
    pub k: usize,
    levels: Vec<Level>,
    weights: Vec<u64>,
}

/// Builds the truncated Fock module with levels `0..=k`.
pub fn fock_build(fb: &FiniteBimodule, k: usize) -> Result<FockTruncation> {
    if k > FOCK_MAX_LEVEL {
        return Err(Error::resource(format!(
            "truncation level {k} exceeds {FOCK_MAX_LEVEL}"
        )));
    }
    let mut levels = Vec::with_capacity(k + 1);
    let mut offset = 0;
    let mut weights = Vec::new();
    for lvl in 0..=k {
        let paths = fb.paths(lvl);
        if offset + paths.len() > FOCK_MAX_DIM {
            return Err(Error::resource(format!(
                "Fock module up to level {lvl} has more than {FOCK_MAX_DIM} basis paths"
            )));
        }
        let index = paths
            .iter()
            .enumerate()
            .map(|(i, p)| (p.points.clone(), offset + i))
            .collect();
        weights.extend(paths.iter().map(|p| p.weight));
        let n = paths.len();
        levels.push(Level {
            paths,
            index,
            offset,
        });
        offset += n;
    }
    Ok(FockTruncation {
        base: fb.clone(),
        k,
        levels,
        weights,
    })
}

impl FockTruncation {
    /// `dim X^{⊗k} = #P_k(J)` for each level.
    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.paths.len()).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.weights.len()
    }

    pub fn paths(&self, level: usize) -> &[IndexPath] {
        &self.levels[level].paths
    }

    /// Level of a global basis index.
    pub fn level_of(&self, idx: usize) -> usize {
        self.levels
            .iter()
            .rposition(|l| l.offset <= idx)
            .expect("index in range")
    }

    /// `T_x f = x ⊗ f` for `x` in `C(P_i(J))`, mapping level `r` to `r + i`.
    /// Levels with `r + i > K` are sent to zero.
    pub fn creation(&self, i: usize, x: &[GaussianRational]) -> Result<Operator> {
        let li = self.level(i)?;
        if x.len() != li.paths.len() {
            return Err(Error::invalid(format!(
                "level-{i} vector needs {} entries",
                li.paths.len()
            )));
        }
        let mut op = Operator::zero(self.total_dim());
        for r in 0..=self.k.saturating_sub(i) {
            let src = &self.levels[r];
            let dst = &self.levels[r + i];
            for (ci, p) in src.paths.iter().enumerate() {
                for (q, xv) in li.paths.iter().zip(x) {
                    if xv.is_zero() || q.last() != p.first() {
                        continue;
                    }
                    let mut pts = q.points.clone();
                    pts.extend_from_slice(&p.points[1..]);
                    let row = dst.index[&pts];
                    op.add_entry(row, src.offset + ci, xv.clone());
                }
            }
        }
        Ok(op)
    }

    /// `T_ξ` for the basis vector `ξ = δ_e` of `X`.
    pub fn creation_basis(&self, edge: usize) -> Result<Operator> {
        let mut x = vec![GaussianRational::zero(); self.base.dimension()];
        x[edge] = GaussianRational::from_i64(1);
        self.creation(1, &x)
    }

    /// Left action `a(z_1)` on every level.
    pub fn left_action(&self, a: &[GaussianRational]) -> Result<Operator> {
        if a.len() != self.base.j.len() {
            return Err(Error::invalid(format!(
                "a needs {} values",
                self.base.j.len()
            )));
        }
        let mut op = Operator::zero(self.total_dim());
        for l in &self.levels {
            for (i, p) in l.paths.iter().enumerate() {
                if !a[p.first()].is_zero() {
                    op.add_entry(l.offset + i, l.offset + i, a[p.first()].clone());
                }
            }
        }
        Ok(op)
    }

    /// `E^{-1} T^H E`.
    pub fn adjoint(&self, t: &Operator) -> Operator {
        let mut out = Operator::zero(t.dim());
        for (r, c, v) in t.entries() {
            let scale = GaussianRational::new(
                num_rational::BigRational::new(self.weights[r].into(), self.weights[c].into()),
                num_rational::BigRational::zero(),
            );
            out.add_entry(c, r, v.conj() * scale);
        }
        out
    }

    fn level(&self, i: usize) -> Result<&Level> {
        self.levels
            .get(i)
            .ok_or_else(|| Error::invalid(format!("level {i} above truncation {}", self.k)))
    }
}

/// Outcome of [`fock_relation_check`].
#[derive(Clone, Debug, Serialize)]
pub struct FockReport {
    pub dims: Vec<usize>,
    /// Largest entry modulus of `T_ξ^* T_η - i((ξ|η)_A)` over basis pairs,
    /// restricted to the levels below.
    pub max_deviation: f64,
    pub exact: bool,
    /// Levels on which the relation was checked (`0..K`).
    pub levels_checked: Vec<usize>,
    pub pairs: usize,
}

/// Checks `T_ξ^* T_η = i((ξ|η)_A)` for all basis pairs on levels `< K`.
pub fn fock_relation_check(ft: &FockTruncation) -> Result<FockReport> {
    let fb = &ft.base;
    let n = fb.dimension();
    let below = |c: usize| ft.level_of(c) < ft.k;
    let creations: Vec<Operator> = (0..n)
        .map(|e| ft.creation_basis(e))
        .collect::<Result<_>>()?;
    let adjoints: Vec<Operator> = creations.iter().map(|t| ft.adjoint(t)).collect();
    let mut worst: f64 = 0.0;
    let mut exact = true;
    for (a, xi) in adjoints.iter().enumerate() {
        for (b, eta) in creations.iter().enumerate() {
            let mut dx = vec![GaussianRational::zero(); n];
            dx[a] = GaussianRational::from_i64(1);
            let mut dy = vec![GaussianRational::zero(); n];
            dy[b] = GaussianRational::from_i64(1);
            let ip = fb.inner(1, &dx, &dy)?;
            let diff = xi.mul(eta).sub(&ft.left_action(&ip)?);
            worst = worst.max(diff.max_entry(below));
            exact &= diff.vanishes_on(below);
        }
    }
    Ok(FockReport {
        dims: ft.dims(),
        max_deviation: worst,
        exact,
        levels_checked: (0..ft.k).collect(),
        pairs: n * n,
    })
}

/// Outcome of [`vanishing_lemma_check`].
#[derive(Clone, Debug, Serialize)]
pub struct VanishingReport {
    pub zero: bool,
    pub max_entry: f64,
    /// Source levels `r` where `a T_x T_y^* a^*` was inspected.
    pub levels_checked: Vec<usize>,
}

/// A pair of paths ending at the same point whose starting points `z_1`,
/// `u_1` have `a(z_1) a(u_1) != 0`.
pub fn vanishing_hypothesis_witness(
    ft: &FockTruncation,
    a: &[GaussianRational],
    i: usize,
    j: usize,
) -> Result<Option<(IndexPath, IndexPath)>> {
    let (pi, pj) = (ft.level(i)?, ft.level(j)?);
    for p in &pi.paths {
        if a[p.first()].is_zero() {
            continue;
        }
        for q in &pj.paths {
            if q.last() == p.last() && !a[q.first()].is_zero() {
                return Ok(Some((p.clone(), q.clone())));
            }
        }
    }
    Ok(None)
}

/// Verifies `a T_x T_y^* a^* = 0` for `x` on level `i`, `y` on level `j`,
/// `i != j`, on all levels where truncation does not interfere.
///
/// The hypothesis `a(z_1) a(u_1) = 0` for all paths `(z_1, ..., w)` in
/// `P_i(J)` and `(u_1, ..., w)` in `P_j(J)` is checked by enumeration first.
pub fn vanishing_lemma_check(
    ft: &FockTruncation,
    a: &[GaussianRational],
    i: usize,
    x: &[GaussianRational],
    j: usize,
    y: &[GaussianRational],
) -> Result<VanishingReport> {
    if i == j {
        return Err(Error::invalid("the lemma needs different levels i != j"));
    }
    if a.len() != ft.base.j.len() {
        return Err(Error::invalid(format!(
            "a needs {} values",
            ft.base.j.len()
        )));
    }
    if let Some((p, q)) = vanishing_hypothesis_witness(ft, a, i, j)? {
        let show = |p: &IndexPath| {
            p.points
                .iter()
                .map(|&k| ft.base.j[k].to_string())
                .collect::<Vec<_>>()
                .join(" -> ")
        };
        return Err(Error::invalid(format!(
            "hypothesis fails: a is nonzero at the starts of ({}) and ({}), which share an endpoint",
            show(&p),
            show(&q)
        )));
    }
    let la = ft.left_action(a)?;
    let abar: Vec<GaussianRational> = a.iter().map(|v| v.conj()).collect();
    let la_star = ft.left_action(&abar)?;
    let tx = ft.creation(i, x)?;
    let ty_star = ft.adjoint(&ft.creation(j, y)?);
    let prod = la.mul(&tx).mul(&ty_star).mul(&la_star);
    // source level r goes to r - j + i, which must not exceed K
    let ok_level = |r: usize| r + i <= ft.k + j;
    let keep = |c: usize| ok_level(ft.level_of(c));
    Ok(VanishingReport {
        zero: prod.vanishes_on(keep),
        max_entry: prod.max_entry(keep),
        levels_checked: (0..=ft.k).filter(|&r| ok_level(r)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bimodule::finite::tests::circle_bimodule;
    use crate::polyalg::gq;

    fn indicator(n: usize, k: usize) -> Vec<GaussianRational> {
        let mut v = vec![gq(0, 0); n];
        v[k] = gq(1, 0);
        v
    }

    #[test]
    fn circle_block_dims() {
        let ft = fock_build(&circle_bimodule(), 2).unwrap();
        assert_eq!(ft.dims(), vec![3, 4, 6]);
        assert!(fock_build(&circle_bimodule(), 9).is_err());
    }

    #[test]
    fn truncation_kills_top_level() {
        let ft = fock_build(&circle_bimodule(), 2).unwrap();
        for e in 0..4 {
            let t = ft.creation_basis(e).unwrap();
            for (r, c, _) in t.entries() {
                assert_eq!(ft.level_of(r), ft.level_of(c) + 1);
                assert!(ft.level_of(c) < 2);
            }
        }
    }

    #[test]
    fn left_action_on_level_zero_is_diagonal() {
        let ft = fock_build(&circle_bimodule(), 1).unwrap();
        let a = vec![gq(2, 0), gq(0, 1), gq(-1, 0)];
        let op = ft.left_action(&a).unwrap();
        for (k, v) in a.iter().enumerate() {
            assert_eq!(&op.get(k, k), v);
        }
    }

    #[test]
    fn relation_exact_on_circle() {
        let ft = fock_build(&circle_bimodule(), 3).unwrap();
        let r = fock_relation_check(&ft).unwrap();
        assert!(r.exact);
        assert_eq!(r.max_deviation, 0.0);
        assert_eq!(r.levels_checked, vec![0, 1, 2]);
        // T_ξ^* T_ξ for ξ = δ_(0,1) is i(2 δ_1): values in {0, 1, 2}
        let t = ft.creation_basis(0).unwrap();
        let p = ft.adjoint(&t).mul(&t);
        assert!(p.entries().all(|(r, c, v)| r == c && (v == &gq(2, 0))));
        let zero = ft.creation(1, &vec![gq(0, 0); 4]).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn relation_fails_at_the_truncation_level() {
        // at level K, T_η is zero while i((ξ|ξ)_A) is not
        let ft = fock_build(&circle_bimodule(), 1).unwrap();
        let t = ft.creation_basis(2).unwrap();
        let lhs = ft.adjoint(&t).mul(&t);
        let mut x = vec![gq(0, 0); 4];
        x[2] = gq(1, 0);
        let rhs = ft.left_action(&ft.base.inner(1, &x, &x).unwrap()).unwrap();
        assert!(!lhs.sub(&rhs).is_zero());
    }

    #[test]
    fn vanishing_lemma() {
        let ft = fock_build(&circle_bimodule(), 4).unwrap();
        let dims = ft.dims();
        // a = δ_1 satisfies the hypothesis for (i, j) = (1, 2)
        let a = indicator(3, 1);
        for xi in 0..dims[1] {
            for yi in 0..dims[2] {
                let r = vanishing_lemma_check(
                    &ft,
                    &a,
                    1,
                    &indicator(dims[1], xi),
                    2,
                    &indicator(dims[2], yi),
                )
                .unwrap();
                assert!(r.zero);
            }
        }
        // for (1, 3) both 1 -> 0 and 1 -> 0 -> 1 -> 0 end at 0
        let err = vanishing_lemma_check(
            &ft,
            &a,
            1,
            &indicator(dims[1], 0),
            3,
            &indicator(dims[3], 0),
        );
        assert!(matches!(err, Err(Error::InvalidInput(msg)) if msg.contains("hypothesis")));
        // a = 0
        let z = vec![gq(0, 0); 3];
        let r =
            vanishing_lemma_check(&ft, &z, 0, &indicator(3, 0), 2, &indicator(dims[2], 0)).unwrap();
        assert!(r.zero);
        // a = 1 always has a witness
        let one = vec![gq(1, 0); 3];
        assert!(
            vanishing_lemma_check(&ft, &one, 1, &indicator(4, 0), 2, &indicator(dims[2], 0))
                .is_err()
        );
        assert!(vanishing_lemma_check(&ft, &z, 1, &indicator(4, 0), 1, &indicator(4, 0)).is_err());
    }

    #[test]
    fn without_the_hypothesis_the_product_need_not_vanish() {
        // sanity check of the oracle: a = 1 gives a nonzero product
        let ft = fock_build(&circle_bimodule(), 3).unwrap();
        let one = vec![gq(1, 0); 3];
        let dims = ft.dims();
        let tx = ft.creation(1, &vec![gq(1, 0); dims[1]]).unwrap();
        let ty = ft.adjoint(&ft.creation(2, &vec![gq(1, 0); dims[2]]).unwrap());
        let la = ft.left_action(&one).unwrap();
        assert!(!la.mul(&tx).mul(&ty).mul(&la).is_zero());
    }
}
