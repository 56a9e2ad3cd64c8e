//! The `SO_q(N)` braid matrix, the q-metric and the spectral projectors.
//!
//! Four-index tensors `T^{ij}_{kl}` act on the tensor square by
//! `T(e_k ⊗ e_l) = Σ T^{ij}_{kl} e_i ⊗ e_j`; composition is
//! `(AB)^{ij}_{kl} = A^{ij}_{mn} B^{mn}_{kl}`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::report::{VerificationReport, Witness};
use crate::scalar::{Coefficient, GaussRational, QScalar, ScalarContext, ScalarError};

/// Entries of a 4-tensor grouped by lower pair.
pub type Columns<S> = BTreeMap<(i32, i32), Vec<((i32, i32), S)>>;

#[derive(Debug, Clone, PartialEq)]
pub struct SparseTensor2<S> {
    entries: BTreeMap<(i32, i32), S>,
}

impl<S: Coefficient> SparseTensor2<S> {
    pub fn new() -> Self {
        Self { entries: BTreeMap::new() }
    }

    pub fn insert(&mut self, i: i32, j: i32, value: S) {
        if value.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), value);
        }
    }

    pub fn get(&self, i: i32, j: i32) -> S {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(S::zero)
    }

    pub fn get_ref(&self, i: i32, j: i32) -> Option<&S> {
        self.entries.get(&(i, j))
    }

    pub fn iter(&self) -> impl Iterator<Item = ((i32, i32), &S)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn map<T: Coefficient>(&self, f: impl Fn(&S) -> T) -> SparseTensor2<T> {
        let mut out = SparseTensor2::new();
        for ((i, j), v) in self.iter() {
            out.insert(i, j, f(v));
        }
        out
    }
}

impl<S: Coefficient> Default for SparseTensor2<S> {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SparseTensor4<S> {
    entries: BTreeMap<[i32; 4], S>,
}

impl<S: Coefficient> Default for SparseTensor4<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Coefficient> SparseTensor4<S> {
    pub fn new() -> Self {
        Self { entries: BTreeMap::new() }
    }

    pub fn identity(ctx: &ScalarContext<S>) -> Self {
        let mut t = Self::new();
        for &i in ctx.indices() {
            for &j in ctx.indices() {
                t.insert([i, j, i, j], S::one());
            }
        }
        t
    }

    /// The flip `e_k ⊗ e_l ↦ e_l ⊗ e_k`.
    pub fn flip(ctx: &ScalarContext<S>) -> Self {
        let mut t = Self::new();
        for &i in ctx.indices() {
            for &j in ctx.indices() {
                t.insert([i, j, j, i], S::one());
            }
        }
        t
    }

    pub fn insert(&mut self, idx: [i32; 4], value: S) {
        if value.is_zero() {
            self.entries.remove(&idx);
        } else {
            self.entries.insert(idx, value);
        }
    }

    pub fn add_to(&mut self, idx: [i32; 4], value: &S) {
        if value.is_zero() {
            return;
        }
        match self.entries.get_mut(&idx) {
            Some(v) => {
                *v = v.add_ref(value);
                if v.is_zero() {
                    self.entries.remove(&idx);
                }
            }
            None => {
                self.entries.insert(idx, value.clone());
            }
        }
    }

    pub fn get(&self, i: i32, j: i32, k: i32, l: i32) -> S {
        self.entries.get(&[i, j, k, l]).cloned().unwrap_or_else(S::zero)
    }

    pub fn get_ref(&self, i: i32, j: i32, k: i32, l: i32) -> Option<&S> {
        self.entries.get(&[i, j, k, l])
    }

    pub fn iter(&self) -> impl Iterator<Item = ([i32; 4], &S)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries `T^{ij}_{kl}` with fixed upper pair, as `((k, l), value)`.
    pub fn row(&self, i: i32, j: i32) -> impl Iterator<Item = ((i32, i32), &S)> {
        self.entries
            .range([i, j, i32::MIN, i32::MIN]..=[i, j, i32::MAX, i32::MAX])
            .map(|(k, v)| ((k[2], k[3]), v))
    }

    /// Entries grouped by lower pair: `(k, l) ↦ [((i, j), T^{ij}_{kl})]`.
    pub fn columns(&self) -> Columns<S> {
        let mut cols: Columns<S> = BTreeMap::new();
        for (idx, v) in self.iter() {
            cols.entry((idx[2], idx[3])).or_default().push(((idx[0], idx[1]), v.clone()));
        }
        cols
    }

    pub fn compose(&self, other: &Self) -> Self {
        let mut out = Self::new();
        for (idx, a) in self.iter() {
            for ((k, l), b) in other.row(idx[2], idx[3]) {
                out.add_to([idx[0], idx[1], k, l], &a.mul_ref(b));
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (idx, v) in other.iter() {
            out.add_to(idx, v);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::new();
        for (idx, v) in self.iter() {
            out.insert(idx, v.mul_ref(c));
        }
        out
    }

    /// `T^{kl}_{ij}` from `T^{ij}_{kl}`.
    pub fn transpose(&self) -> Self {
        let mut out = Self::new();
        for (idx, v) in self.iter() {
            out.insert([idx[2], idx[3], idx[0], idx[1]], v.clone());
        }
        out
    }

    pub fn map<T: Coefficient>(&self, f: impl Fn(&S) -> T) -> SparseTensor4<T> {
        let mut out = SparseTensor4::new();
        for (idx, v) in self.iter() {
            out.insert(idx, f(v));
        }
        out
    }

    /// First entry where `self` and `other` differ, with the difference.
    pub fn first_difference(&self, other: &Self) -> Option<([i32; 4], S)> {
        self.sub(other).entries.into_iter().next()
    }

    /// Dense `N² × N²` matrix, rows and columns in alphabet order of pairs.
    pub fn to_dense(&self, indices: &[i32]) -> Vec<Vec<S>> {
        let n = indices.len();
        let at = |a: i32| indices.iter().position(|&x| x == a).unwrap();
        let pos = |a: i32, b: i32| at(a) * n + at(b);
        let mut m = vec![vec![S::zero(); n * n]; n * n];
        for (idx, v) in self.iter() {
            m[pos(idx[0], idx[1])][pos(idx[2], idx[3])] = v.clone();
        }
        m
    }
}

/// `(g_{ij}, g^{ij})` with `g_{ij} = q^{-ρ_i} δ_{i,-j}`.
pub fn build_metric<S: Coefficient>(ctx: &ScalarContext<S>) -> (SparseTensor2<S>, SparseTensor2<S>) {
    let mut lower = SparseTensor2::new();
    let mut upper = SparseTensor2::new();
    for &i in ctx.indices() {
        lower.insert(i, -i, ctx.s_pow(-ctx.rho2(i)));
        // g^{-i,i} = 1 / g_{i,-i}
        upper.insert(-i, i, ctx.s_pow(ctx.rho2(i)));
    }
    (lower, upper)
}

/// The braid matrix `R̂ = P·R`, with `R` the standard FRT matrix of the
/// B/D series in the index alphabet `−n..n`.
pub fn build_rhat<S: Coefficient>(ctx: &ScalarContext<S>) -> SparseTensor4<S> {
    let q = ctx.q();
    let qinv = ctx.q_pow(-1);
    let lambda = q.sub_ref(&qinv);
    let mut r = SparseTensor4::new();
    let idx = ctx.indices();
    for &i in idx {
        for &j in idx {
            let diag = if i == j {
                if i == 0 {
                    S::one()
                } else {
                    q.clone()
                }
            } else if i == -j {
                qinv.clone()
            } else {
                S::one()
            };
            r.add_to([i, j, i, j], &diag);
            if i > j {
                r.add_to([i, j, j, i], &lambda);
                let c = lambda.mul_ref(&ctx.s_pow(ctx.rho2(i) - ctx.rho2(j)));
                r.add_to([i, -i, j, -j], &-c);
            }
        }
    }
    // R̂^{ij}_{kl} = R^{ji}_{kl}
    let mut rhat = SparseTensor4::new();
    for (k, v) in r.iter() {
        rhat.insert([k[1], k[0], k[2], k[3]], v.clone());
    }
    rhat
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProjectorKind {
    /// q-symmetric trace-free part, eigenvalue `q`.
    S,
    /// q-antisymmetric part, eigenvalue `−q^{-1}`.
    A,
    /// trace part, eigenvalue `q^{1−N}`.
    T,
}

/// Everything built from the scalar context at the tensor level.
#[derive(Debug, Clone)]
pub struct TensorCore<S> {
    pub ctx: ScalarContext<S>,
    pub g_lower: SparseTensor2<S>,
    pub g_upper: SparseTensor2<S>,
    pub rhat: SparseTensor4<S>,
    pub rhat_inv: SparseTensor4<S>,
    pub ps: SparseTensor4<S>,
    pub pa: SparseTensor4<S>,
    pub pt: SparseTensor4<S>,
}

impl<S: Coefficient> TensorCore<S> {
    pub fn new(ctx: ScalarContext<S>) -> Self {
        let rhat = build_rhat(&ctx);
        Self::with_rhat(ctx, rhat)
    }

    /// Same construction around a caller-supplied braid matrix (used for
    /// negative controls).
    pub fn with_rhat(ctx: ScalarContext<S>, rhat: SparseTensor4<S>) -> Self {
        let (g_lower, g_upper) = build_metric(&ctx);
        let pt = trace_projector(&ctx, &g_lower, &g_upper);
        let one = SparseTensor4::identity(&ctx);
        let q = ctx.q();
        let qinv = ctx.q_pow(-1);
        let q1n = ctx.q_pow(1 - ctx.dim() as i32);
        let norm = q.add_ref(&qinv).checked_inv().expect("q + 1/q vanishes");
        // P_s = (R̂ + q^{-1} − (q^{1−N} + q^{-1}) P_t) / (q + q^{-1})
        let ps = rhat
            .add(&one.scale(&qinv))
            .sub(&pt.scale(&q1n.add_ref(&qinv)))
            .scale(&norm);
        // P_a = (q − R̂ + (q^{1−N} − q) P_t) / (q + q^{-1})
        let pa = one
            .scale(&q)
            .sub(&rhat)
            .add(&pt.scale(&q1n.sub_ref(&q)))
            .scale(&norm);
        // R̂^{-1} = q^{-1} P_s − q P_a + q^{N−1} P_t
        let rhat_inv = ps
            .scale(&qinv)
            .sub(&pa.scale(&q))
            .add(&pt.scale(&ctx.q_pow(ctx.dim() as i32 - 1)));
        Self { ctx, g_lower, g_upper, rhat, rhat_inv, ps, pa, pt }
    }

    pub fn projector(&self, kind: ProjectorKind) -> &SparseTensor4<S> {
        match kind {
            ProjectorKind::S => &self.ps,
            ProjectorKind::A => &self.pa,
            ProjectorKind::T => &self.pt,
        }
    }

    /// `g^{sm} g_{sm}`.
    pub fn trace_normalizer(&self) -> S {
        trace_norm(&self.g_lower, &self.g_upper)
    }

    /// Specializes every tensor at `s = point`.
    pub fn evaluate(&self, point: &GaussRational) -> Result<TensorCore<GaussRational>, ScalarError>
    where
        S: Evaluate,
    {
        let ctx = ScalarContext::sampled(self.ctx.dim(), point.clone())?;
        let rhat = try_map4(&self.rhat, |v| v.evaluate(point))?;
        Ok(TensorCore::with_rhat(ctx, rhat))
    }
}

/// Specialization of exact scalars at a point.
pub trait Evaluate {
    fn evaluate(&self, point: &GaussRational) -> Result<GaussRational, ScalarError>;
}

impl Evaluate for QScalar {
    fn evaluate(&self, point: &GaussRational) -> Result<GaussRational, ScalarError> {
        self.eval(point)
    }
}

fn try_map4<S: Coefficient, T: Coefficient>(
    t: &SparseTensor4<S>,
    f: impl Fn(&S) -> Result<T, ScalarError>,
) -> Result<SparseTensor4<T>, ScalarError> {
    let mut out = SparseTensor4::new();
    for (idx, v) in t.iter() {
        out.insert(idx, f(v)?);
    }
    Ok(out)
}

fn trace_norm<S: Coefficient>(lower: &SparseTensor2<S>, upper: &SparseTensor2<S>) -> S {
    let mut acc = S::zero();
    for ((s, m), v) in upper.iter() {
        if let Some(w) = lower.get_ref(s, m) {
            acc = acc.add_ref(&v.mul_ref(w));
        }
    }
    acc
}

/// `P_t^{ij}_{kl} = g^{ij} g_{kl} / (g^{sm} g_{sm})`.
fn trace_projector<S: Coefficient>(
    ctx: &ScalarContext<S>,
    lower: &SparseTensor2<S>,
    upper: &SparseTensor2<S>,
) -> SparseTensor4<S> {
    let norm = trace_norm(lower, upper).checked_inv().expect("degenerate metric trace");
    let mut pt = SparseTensor4::new();
    for &i in ctx.indices() {
        for &k in ctx.indices() {
            let v = upper.get(i, -i).mul_ref(&lower.get(k, -k)).mul_ref(&norm);
            pt.insert([i, -i, k, -k], v);
        }
    }
    pt
}

fn witness4<S: Coefficient>(a: &SparseTensor4<S>, b: &SparseTensor4<S>) -> Option<String> {
    a.first_difference(b).map(|(idx, v)| format!("entry {idx:?}: {v}"))
}

/// Applies `t` to slots `(slot, slot+1)` of a vector in `V⊗V⊗V`.
fn apply_on_triple<S: Coefficient>(
    cols: &Columns<S>,
    slot: usize,
    v: &BTreeMap<[i32; 3], S>,
) -> BTreeMap<[i32; 3], S> {
    let mut out: BTreeMap<[i32; 3], S> = BTreeMap::new();
    for (idx, c) in v {
        let key = (idx[slot], idx[slot + 1]);
        if let Some(col) = cols.get(&key) {
            for ((i, j), t) in col {
                let mut nidx = *idx;
                nidx[slot] = *i;
                nidx[slot + 1] = *j;
                let e = out.entry(nidx).or_insert_with(S::zero);
                *e = e.add_ref(&c.mul_ref(t));
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Checks `T₁₂ T₂₃ T₁₂ = T₂₃ T₁₂ T₂₃` on `V⊗V⊗V`; returns a witness on failure.
pub fn check_braid<S: Coefficient>(ctx: &ScalarContext<S>, t: &SparseTensor4<S>) -> Option<String> {
    let cols = t.columns();
    for &a in ctx.indices() {
        for &b in ctx.indices() {
            for &c in ctx.indices() {
                let start = BTreeMap::from([([a, b, c], S::one())]);
                let left = apply_on_triple(&cols, 0, &apply_on_triple(&cols, 1, &apply_on_triple(&cols, 0, &start)));
                let right = apply_on_triple(&cols, 1, &apply_on_triple(&cols, 0, &apply_on_triple(&cols, 1, &start)));
                if left != right {
                    return Some(format!("input e_{a} ⊗ e_{b} ⊗ e_{c}"));
                }
            }
        }
    }
    None
}

/// Idempotence, orthogonality, completeness and the spectral
/// decomposition `q P_s − q^{-1} P_a + q^{1−N} P_t = R̂`, plus `R̂ R̂^{-1} = 1`.
pub fn check_projectors<S: Coefficient>(core: &TensorCore<S>) -> VerificationReport {
    let n = core.ctx.dim();
    let mut report = VerificationReport::new();
    let kinds = [("s", &core.ps), ("a", &core.pa), ("t", &core.pt)];
    let mut idem = Witness::new();
    for (name, p) in &kinds {
        let w = witness4(&p.compose(p), p);
        idem.offer_residual(w, || format!("P_{name}"));
    }
    report.record(format!("rmatrix.projector.idempotent.N{n}"), idem.into_residual());

    let zero = SparseTensor4::new();
    let mut orth = Witness::new();
    for (x, p) in &kinds {
        for (y, r) in &kinds {
            if x != y {
                orth.offer_residual(witness4(&p.compose(r), &zero), || format!("P_{x} P_{y}"));
            }
        }
    }
    report.record(format!("rmatrix.projector.orthogonal.N{n}"), orth.into_residual());

    let sum = core.ps.add(&core.pa).add(&core.pt);
    report.record(
        format!("rmatrix.projector.complete.N{n}"),
        witness4(&sum, &SparseTensor4::identity(&core.ctx)),
    );

    let ctx = &core.ctx;
    let recon = core
        .ps
        .scale(&ctx.q())
        .sub(&core.pa.scale(&ctx.q_pow(-1)))
        .add(&core.pt.scale(&ctx.q_pow(1 - n as i32)));
    report.record(format!("rmatrix.decomposition.N{n}"), witness4(&recon, &core.rhat));

    report.record(
        format!("rmatrix.inverse.N{n}"),
        witness4(&core.rhat.compose(&core.rhat_inv), &SparseTensor4::identity(ctx)),
    );
    report.record(format!("rmatrix.symmetric.N{n}"), witness4(&core.rhat, &core.rhat.transpose()));
    report
}

/// The four `gTT` identities
/// `g_{il} (R̂^{±1})^{lh}_{jk} = (R̂^{∓1})^{hl}_{ij} g_{lk}` and
/// `g^{il} (R̂^{±1})^{jk}_{lh} = (R̂^{∓1})^{ij}_{hl} g^{lk}`.
pub fn check_gtt<S: Coefficient>(core: &TensorCore<S>) -> VerificationReport {
    let ctx = &core.ctx;
    let n = ctx.dim();
    let idx = ctx.indices();
    let mut report = VerificationReport::new();
    for (sign, r, rinv) in [("plus", &core.rhat, &core.rhat_inv), ("minus", &core.rhat_inv, &core.rhat)] {
        let mut lower = Witness::new();
        let mut upper = Witness::new();
        for &i in idx {
            for &h in idx {
                for &j in idx {
                    for &k in idx {
                        // g is supported on l = -i (left) and l = -k (right)
                        let lhs = core.g_lower.get(i, -i).mul_ref(&r.get(-i, h, j, k));
                        let rhs = rinv.get(h, -k, i, j).mul_ref(&core.g_lower.get(-k, k));
                        lower.offer(lhs == rhs, || format!("(i,h,j,k)=({i},{h},{j},{k}): {}", lhs.sub_ref(&rhs)));
                        let lhs = core.g_upper.get(i, -i).mul_ref(&r.get(j, k, -i, h));
                        let rhs = rinv.get(i, j, h, -k).mul_ref(&core.g_upper.get(-k, k));
                        upper.offer(lhs == rhs, || format!("(i,h,j,k)=({i},{h},{j},{k}): {}", lhs.sub_ref(&rhs)));
                    }
                }
            }
        }
        report.record(format!("rmatrix.gtt.lower.{sign}.N{n}"), lower.into_residual());
        report.record(format!("rmatrix.gtt.upper.{sign}.N{n}"), upper.into_residual());
    }
    report
}

/// Rank of a dense matrix by Gaussian elimination.
pub fn dense_rank<S: Coefficient>(mut m: Vec<Vec<S>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        let inv = m[rank][c].checked_inv().unwrap();
        for r in 0..rows {
            if r != rank && !m[r][c].is_zero() {
                let f = m[r][c].mul_ref(&inv);
                for cc in c..cols {
                    let d = f.mul_ref(&m[rank][cc]);
                    m[r][cc] = m[r][cc].sub_ref(&d);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Ranks of `(P_s, P_a, P_t)` at `q = 1`.
pub fn classical_ranks(core: &TensorCore<QScalar>) -> Result<(usize, usize, usize), ScalarError> {
    let rank = |p: &SparseTensor4<QScalar>| -> Result<usize, ScalarError> {
        let lim = try_map4(p, |v| v.classical_limit())?;
        Ok(dense_rank(lim.to_dense(core.ctx.indices())))
    };
    Ok((rank(&core.ps)?, rank(&core.pa)?, rank(&core.pt)?))
}

/// Every R-matrix-layer identity for one context.
pub fn verify_rmatrix<S: Coefficient>(core: &TensorCore<S>) -> VerificationReport {
    let n = core.ctx.dim();
    let mut report = VerificationReport::new();
    report.record(format!("rmatrix.braid.N{n}"), check_braid(&core.ctx, &core.rhat));
    report.extend(check_projectors(core));
    report.extend(check_gtt(core));
    report
}

#[cfg(test)]
mod tests;
