//! Finitely generated abelian groups, Smith normal form and the six-term
//! exact sequence for Cuntz-Pimsner algebras.
//!
//! Matrices act on column vectors: an `r x c` matrix is a map `Z^c -> Z^r`.

use crate::correspondence::{Correspondence, Restriction};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use std::fmt;

/// Largest `m` and `n` accepted by [`kgroup_table`].
pub const TABLE_MAX: usize = 20;

/// A dense integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Builds a matrix from rows of equal length. `cols` fixes the width of
    /// matrices without rows.
    pub fn from_rows(rows: &[Vec<i64>], cols: usize) -> Result<Self> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::invalid(format!(
                "every row must have {cols} entries"
            )));
        }
        Ok(IntegerMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().map(|&v| BigInt::from(v)).collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn mul(&self, other: &IntegerMatrix) -> Result<IntegerMatrix> {
        if self.cols != other.rows {
            return Err(Error::invalid(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> IntegerMatrix {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::invalid("determinant of a non-square matrix"));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        Ok(if n == 0 { sign } else { sign * prev })
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant()
            .map(|d| d.abs().is_one())
            .unwrap_or(false)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            for c in 0..self.cols {
                self.data.swap(i * self.cols + c, j * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + i, r * self.cols + j);
            }
        }
    }

    /// `row[i] += k row[j]`.
    fn add_row(&mut self, i: usize, j: usize, k: &BigInt) {
        for c in 0..self.cols {
            let v = self.get(i, c) + k * self.get(j, c);
            self.set(i, c, v);
        }
    }

    /// `col[i] += k col[j]`.
    fn add_col(&mut self, i: usize, j: usize, k: &BigInt) {
        for r in 0..self.rows {
            let v = self.get(r, i) + k * self.get(r, j);
            self.set(r, i, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let v = -self.get(i, c);
            self.set(i, c, v);
        }
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// `M = U D V` with `U`, `V` unimodular and `D` diagonal, `d_1 | d_2 | ...`,
/// all `d_i >= 0` and the nonzero ones first.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntegerMatrix,
    pub d: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl SmithForm {
    /// The diagonal of `D`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }

    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

/// Row operations on `D` are mirrored on the columns of `U`, column
/// operations on the rows of `V`, so that `U D V` stays equal to the input.
struct Tracker {
    d: IntegerMatrix,
    u: IntegerMatrix,
    v: IntegerMatrix,
}

impl Tracker {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.d.swap_rows(i, j);
        self.u.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.d.swap_cols(i, j);
        self.v.swap_rows(i, j);
    }

    fn add_row(&mut self, i: usize, j: usize, k: &BigInt) {
        self.d.add_row(i, j, k);
        self.u.add_col(j, i, &-k);
    }

    fn add_col(&mut self, i: usize, j: usize, k: &BigInt) {
        self.d.add_col(i, j, k);
        self.v.add_row(j, i, &-k);
    }

    fn negate_row(&mut self, i: usize) {
        self.d.negate_row(i);
        for r in 0..self.u.rows {
            let v = -self.u.get(r, i);
            self.u.set(r, i, v);
        }
    }

    /// Moves the smallest nonzero entry of the block `[t.., t..]` to `(t, t)`.
    fn pivot(&mut self, t: usize) -> bool {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.d.rows {
            for j in t..self.d.cols {
                let a = self.d.get(i, j);
                if !a.is_zero() && best.is_none_or(|(bi, bj)| a.abs() < self.d.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        match best {
            Some((i, j)) => {
                self.swap_rows(t, i);
                self.swap_cols(t, j);
                true
            }
            None => false,
        }
    }

    /// Clears row and column `t`; returns false if a remainder was left.
    fn clear(&mut self, t: usize) -> bool {
        let p = self.d.get(t, t).clone();
        let mut clean = true;
        for i in t + 1..self.d.rows {
            let q = Integer::div_floor(self.d.get(i, t), &p);
            if !q.is_zero() {
                self.add_row(i, t, &-q);
            }
            clean &= self.d.get(i, t).is_zero();
        }
        for j in t + 1..self.d.cols {
            let q = Integer::div_floor(self.d.get(t, j), &p);
            if !q.is_zero() {
                self.add_col(j, t, &-q);
            }
            clean &= self.d.get(t, j).is_zero();
        }
        clean
    }

    /// A row below `t` with an entry not divisible by the pivot.
    fn non_divisible_row(&self, t: usize) -> Option<usize> {
        let p = self.d.get(t, t);
        (t + 1..self.d.rows)
            .find(|&i| (t + 1..self.d.cols).any(|j| !self.d.get(i, j).is_multiple_of(p)))
    }
}

/// Smith normal form by pivoting on the smallest entry.
pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let mut tr = Tracker {
        d: m.clone(),
        u: IntegerMatrix::identity(m.rows),
        v: IntegerMatrix::identity(m.cols),
    };
    for t in 0..m.rows.min(m.cols) {
        if !tr.pivot(t) {
            break;
        }
        loop {
            if !tr.clear(t) {
                tr.pivot(t);
                continue;
            }
            match tr.non_divisible_row(t) {
                Some(i) => tr.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if tr.d.get(t, t).is_negative() {
            tr.negate_row(t);
        }
    }
    SmithForm {
        u: tr.u,
        d: tr.d,
        v: tr.v,
    }
}

/// `Z^rank (+) Z/d_1 (+) ... (+) Z/d_k` with `2 <= d_1 | d_2 | ... | d_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    rank: usize,
    torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        Self::free(0)
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup {
            rank,
            torsion: Vec::new(),
        }
    }

    /// `Z^rank (+) Z/o_1 (+) ...` for arbitrary orders `o_i >= 1`, brought
    /// to invariant factor form.
    pub fn from_orders(rank: usize, orders: &[BigInt]) -> Result<Self> {
        if orders.iter().any(|o| !o.is_positive()) {
            return Err(Error::invalid("cyclic orders must be positive"));
        }
        let n = orders.len();
        let mut diag = IntegerMatrix::zeros(n, n);
        for (i, o) in orders.iter().enumerate() {
            diag.set(i, i, o.clone());
        }
        let torsion = smith_normal_form(&diag)
            .diagonal()
            .into_iter()
            .filter(|d| *d > BigInt::one())
            .collect();
        Ok(AbelianGroup { rank, torsion })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Invariant factors, each at least 2.
    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn direct_sum(&self, other: &AbelianGroup) -> AbelianGroup {
        let orders: Vec<BigInt> = self.torsion.iter().chain(&other.torsion).cloned().collect();
        Self::from_orders(self.rank + other.rank, &orders).expect("invariant factors are positive")
    }
}

impl fmt::Display for AbelianGroup {
    /// `0`, `Z`, `Z^2`, `Z/3`, `Z (+) Z/2 (+) Z/4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" (+) "))
        }
    }
}

#[derive(Serialize)]
#[serde(untagged)]
enum Factor {
    Small(u64),
    Big(String),
}

#[derive(Serialize)]
struct GroupRepr {
    group: String,
    rank: usize,
    torsion: Vec<Factor>,
}

impl Serialize for AbelianGroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GroupRepr {
            group: self.to_string(),
            rank: self.rank,
            torsion: self
                .torsion
                .iter()
                .map(|d| {
                    d.to_u64()
                        .map_or_else(|| Factor::Big(d.to_string()), Factor::Small)
                })
                .collect(),
        }
        .serialize(s)
    }
}

/// `Z^rows / im(M)`.
pub fn cokernel(m: &IntegerMatrix) -> AbelianGroup {
    let snf = smith_normal_form(m);
    let k = snf.rank();
    AbelianGroup {
        rank: m.rows - k,
        torsion: snf
            .diagonal()
            .into_iter()
            .filter(|d| *d > BigInt::one())
            .collect(),
    }
}

/// `ker(M)` in `Z^cols`, always free.
pub fn kernel(m: &IntegerMatrix) -> AbelianGroup {
    AbelianGroup::free(m.cols - smith_normal_form(m).rank())
}

/// Data of the six-term exact sequence
/// `K_i(I_X) --(j^* - phi^*)--> K_i(A) --> K_i(O_X)`.
#[derive(Clone, Debug)]
pub struct PimsnerInput {
    pub k0_ix: AbelianGroup,
    pub k1_ix: AbelianGroup,
    pub k0_a: AbelianGroup,
    pub k1_a: AbelianGroup,
    /// `j^* - phi^*` on `K_0`, a `rank K_0(A) x rank K_0(I_X)` matrix.
    pub map0: IntegerMatrix,
    /// `j^* - phi^*` on `K_1`.
    pub map1: IntegerMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KGroups {
    pub k0: AbelianGroup,
    pub k1: AbelianGroup,
}

/// Solves the six-term sequence:
/// `0 -> coker(map0) -> K_0 -> ker(map1) -> 0` and
/// `0 -> coker(map1) -> K_1 -> ker(map0) -> 0`.
///
/// Kernels of maps out of free groups are free, so both extensions split.
/// Torsion in `K_*(I_X)` would make the kernels non-free and the extensions
/// undetermined; such input is refused.
pub fn pimsner_solve(inp: &PimsnerInput) -> Result<KGroups> {
    for (name, g) in [("K_0(A)", &inp.k0_a), ("K_1(A)", &inp.k1_a)] {
        if !g.is_free() {
            return Err(Error::invalid(format!("{name} = {g} has torsion")));
        }
    }
    for (name, g) in [("K_0(I_X)", &inp.k0_ix), ("K_1(I_X)", &inp.k1_ix)] {
        if !g.is_free() {
            return Err(Error::ExtensionAmbiguous(format!(
                "{name} = {g} has torsion, so the kernel piece need not be free"
            )));
        }
    }
    for (deg, m, src, dst) in [
        (0, &inp.map0, &inp.k0_ix, &inp.k0_a),
        (1, &inp.map1, &inp.k1_ix, &inp.k1_a),
    ] {
        if m.rows != dst.rank || m.cols != src.rank {
            return Err(Error::invalid(format!(
                "map{deg} is {}x{} but must be {}x{}",
                m.rows, m.cols, dst.rank, src.rank
            )));
        }
    }
    Ok(KGroups {
        k0: cokernel(&inp.map0).direct_sum(&kernel(&inp.map1)),
        k1: cokernel(&inp.map1).direct_sum(&kernel(&inp.map0)),
    })
}

/// `p = w^n - z^m` on `T`: `I_X = A = C(T)`, `phi^*` is multiplication by
/// `m` on `K_0` and by `n` on `K_1`.
pub fn monomial_family_input(m: usize, n: usize) -> Result<PimsnerInput> {
    if m == 0 || n == 0 {
        return Err(Error::invalid("m and n must be at least 1"));
    }
    let one_minus = |k: usize| IntegerMatrix::from_rows(&[vec![1 - k as i64]], 1);
    Ok(PimsnerInput {
        k0_ix: AbelianGroup::free(1),
        k1_ix: AbelianGroup::free(1),
        k0_a: AbelianGroup::free(1),
        k1_a: AbelianGroup::free(1),
        map0: one_minus(m)?,
        map1: one_minus(n)?,
    })
}

/// `#(B(p) ∩ T)` for `p = prod (w - z^{m_i})`.
pub fn product_branched_count(exponents: &[usize]) -> Result<usize> {
    let corr = Correspondence::product_of_powers(exponents)?;
    Ok(corr.branched_sets(&Restriction::UnitCircle)?.b.len())
}

/// `p = prod_{i=1}^r (w - z^{m_i})` on `T` with `b = #(B(p) ∩ T)`:
/// `K_0(I_X) = 0`, `K_1(I_X) = Z^b`, `j^*(x) = sum x_i` and
/// `phi^*(x) = r sum x_i`.
pub fn product_family_input(exponents: &[usize]) -> Result<PimsnerInput> {
    let r = exponents.len();
    if r < 2 {
        return Err(Error::invalid("need at least two exponents"));
    }
    let mut sorted = exponents.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::invalid(format!(
            "exponents {exponents:?} are not distinct"
        )));
    }
    let b = product_branched_count(exponents)?;
    Ok(PimsnerInput {
        k0_ix: AbelianGroup::trivial(),
        k1_ix: AbelianGroup::free(b),
        k0_a: AbelianGroup::free(1),
        k1_a: AbelianGroup::free(1),
        map0: IntegerMatrix::zeros(1, 0),
        map1: IntegerMatrix::from_rows(&[vec![1 - r as i64; b]], b)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KGroupRow {
    pub m: usize,
    pub n: usize,
    pub k0: AbelianGroup,
    pub k1: AbelianGroup,
}

/// K-groups of the monomial family for `1 <= m <= max_m`, `1 <= n <= max_n`,
/// ordered by `m` then `n`.
pub fn kgroup_table(max_m: usize, max_n: usize) -> Result<Vec<KGroupRow>> {
    if max_m > TABLE_MAX || max_n > TABLE_MAX {
        return Err(Error::invalid(format!(
            "table bounds must be at most {TABLE_MAX}"
        )));
    }
    let mut rows = Vec::with_capacity(max_m * max_n);
    for m in 1..=max_m {
        for n in 1..=max_n {
            let k = pimsner_solve(&monomial_family_input(m, n)?)?;
            rows.push(KGroupRow {
                m,
                n,
                k0: k.k0,
                k1: k.k1,
            });
        }
    }
    Ok(rows)
}
