//! The identity catalog: metadata, size parameters, sampled parameter
//! points and precision-generic residual evaluation.

mod sample;
pub mod subsets;
pub mod type_bc;
pub mod type_c;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::combinatorics::{MultiIndex, SizeLimit};
use crate::elliptic::{
    duplication_residual, halfperiod_product_residual, make_context, quasi_periodicity_residual, riemann_residual,
    BracketCase, BracketContext, ContextSpec,
};
use crate::error::{Error, Result};
use crate::num::{c64_to, to_c64, Cx, Real, Residual, C64};
use crate::operators::{
    c_sigma_det, c_sigma_rec, c_sigma_sum, constant_residual_bc1, constant_residual_c1, kernel_residual_bc1,
    kernel_residual_c1, lemma_general_residual, partial_fraction_residual, superfluous_c_residual, ParamsBC, ParamsC,
};

pub use sample::{sample_params, trial_rng, SamplerConfig, MAX_REJECTIONS};

/// Every checkable statement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityId {
    Riemann,
    Duplication,
    HalfperiodProduct,
    QuasiPeriodicity,
    KernelBc1,
    ConstantBc1,
    KernelC1,
    ConstantC1,
    SuperfluousC,
    PartialFraction,
    LemmaGeneral,
    LemmaHalfperiod,
    CauchyDet,
    BcSubset,
    CSubset,
    CSubsetSpec,
    CDualMn,
    CDual,
    CDualCoherence,
    CSet3,
    CtSum,
    CN1,
    V1211,
    ZeroFormula,
    KmTransform,
    Km2m8,
    KmSum,
    BcDual,
    BcDualCoherence,
    FCoherence,
    BcSetMn,
    BcSumSet,
    BcDualMn,
    BcSumMulti,
    CSigma,
    PhiReduction,
    PhiBridge,
}

/// Size parameters an identity may take.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SizeKey {
    Alpha,
    Beta,
    N,
    M,
    SmallM,
    R,
    S,
    Sigma,
}

impl SizeKey {
    pub fn name(self) -> &'static str {
        match self {
            SizeKey::Alpha => "alpha",
            SizeKey::Beta => "beta",
            SizeKey::N => "N",
            SizeKey::M => "M",
            SizeKey::SmallM => "m",
            SizeKey::R => "r",
            SizeKey::S => "s",
            SizeKey::Sigma => "sigma",
        }
    }
}

/// Static description of a catalog entry.
#[derive(Clone, Copy, Debug)]
pub struct IdentityInfo {
    pub id: IdentityId,
    pub name: &'static str,
    pub summary: &'static str,
    pub keys: &'static [SizeKey],
    pub elliptic_only: bool,
    pub tol_double: f64,
    pub tol_extended: f64,
}

use SizeKey::{Alpha, Beta, Sigma, SmallM, M, N, R, S};

const fn info(
    id: IdentityId,
    name: &'static str,
    summary: &'static str,
    keys: &'static [SizeKey],
    elliptic_only: bool,
    tol_double: f64,
    tol_extended: f64,
) -> IdentityInfo {
    IdentityInfo { id, name, summary, keys, elliptic_only, tol_double, tol_extended }
}

const DEF: f64 = 1e-8;
const DEF_EXT: f64 = 1e-20;

static CATALOG: [IdentityInfo; 37] = {
    use IdentityId::*;
    [
        info(Riemann, "riemann", "three-term Riemann relation", &[], false, 1e-10, DEF_EXT),
        info(Duplication, "duplication", "duplication formula [2x] = 2[x]H(x)", &[], false, 1e-10, DEF_EXT),
        info(HalfperiodProduct, "halfperiod-product", "product of brackets at half periods", &[], false, 1e-10, DEF_EXT),
        info(QuasiPeriodicity, "quasi-periodicity", "quasi-periodicity under the period lattice", &[], false, 1e-10, DEF_EXT),
        info(KernelBc1, "kernel-bc1", "kernel identity for the eight-parameter operator", &[], true, 1e-9, DEF_EXT),
        info(ConstantBc1, "constant-bc1", "eight-parameter operator applied to 1", &[], true, 1e-9, DEF_EXT),
        info(KernelC1, "kernel-c1", "kernel identity for the four-parameter operator", &[], false, 1e-9, DEF_EXT),
        info(ConstantC1, "constant-c1", "four-parameter operator applied to 1", &[], false, 1e-9, DEF_EXT),
        info(SuperfluousC, "superfluous-c", "independence of A^0 from the auxiliary parameters", &[], true, 1e-9, DEF_EXT),
        info(PartialFraction, "partial-fraction", "partial fraction expansion of a bracket ratio", &[N], false, 1e-10, DEF_EXT),
        info(LemmaGeneral, "lemma-general", "vanishing five-group sum", &[SmallM], false, 1e-9, DEF_EXT),
        info(LemmaHalfperiod, "lemma-halfperiod", "vanishing five-group sum at half-period points", &[], true, 1e-9, DEF_EXT),
        info(CauchyDet, "cauchy-det", "Cauchy determinant of 1/[z_i +- w_j]", &[N], false, 1e-9, DEF_EXT),
        info(BcSubset, "bc-subset", "eight-parameter subset duality", &[N, R], true, DEF, DEF_EXT),
        info(CSubset, "c-subset", "four-parameter subset duality", &[N, R], false, DEF, DEF_EXT),
        info(CSubsetSpec, "c-subset-spec", "four-parameter subset sum as a specialized eight-parameter one", &[N, R], true, DEF, DEF_EXT),
        info(CDualMn, "c-dual-mn", "four-parameter multi-index duality, |alpha| = |beta|", &[Alpha, Beta], false, DEF, DEF_EXT),
        info(CDual, "c-dual", "four-parameter multi-index duality", &[Alpha, Beta], false, DEF, DEF_EXT),
        info(CDualCoherence, "c-dual-coherence", "principal specialization of the four-parameter subset sum", &[Alpha, Beta], false, DEF, DEF_EXT),
        info(CSet3, "c-set3", "four-parameter subset duality between M and N points", &[M, N], false, DEF, DEF_EXT),
        info(CtSum, "ct-sum", "multiple very-well-poised summation", &[Alpha], false, DEF, DEF_EXT),
        info(CN1, "c-n1", "duality with a one-variable dual side", &[Alpha, N], false, DEF, DEF_EXT),
        info(V1211, "v12-11", "transformation of terminating V-series", &[M, N], false, DEF, DEF_EXT),
        info(ZeroFormula, "zero-formula", "vanishing multiple series", &[Alpha, Beta], false, DEF, DEF_EXT),
        info(KmTransform, "km-transform", "Karlsson-Minton type transformation", &[Alpha, Beta, R, S], false, DEF, DEF_EXT),
        info(Km2m8, "km-2m8", "Karlsson-Minton type V-series transformation", &[Alpha, R, S], false, DEF, DEF_EXT),
        info(KmSum, "km-sum", "Karlsson-Minton type V-series summation", &[Alpha], false, DEF, DEF_EXT),
        info(BcDual, "bc-dual", "eight-parameter multi-index duality", &[Alpha, Beta], true, 1e-7, 1e-18),
        info(BcDualCoherence, "bc-dual-coherence", "nested-box sum as a specialized subset sum", &[Alpha, Beta], true, DEF, DEF_EXT),
        info(FCoherence, "f-coherence", "explicit summand against the specialized subset summand", &[Alpha, Beta], true, 1e-9, DEF_EXT),
        info(BcSetMn, "bc-set-mn", "eight-parameter subset transformation between M and N points", &[M, N], true, 1e-7, 1e-18),
        info(BcSumSet, "bc-sum-set", "eight-parameter subset summation", &[M], true, 1e-7, 1e-18),
        info(BcDualMn, "bc-dual-mn", "eight-parameter multi-index transformation", &[Alpha, Beta], true, 1e-7, 1e-18),
        info(BcSumMulti, "bc-sum-multi", "eight-parameter multi-index summation", &[Alpha], true, 1e-7, 1e-18),
        info(CSigma, "c-sigma", "sum, determinant and recurrence forms of C_sigma", &[Sigma], true, 1e-10, DEF_EXT),
        info(PhiReduction, "phi-reduction", "reductions of Phi by a zero block or a delta/2 argument", &[Alpha], false, 1e-10, DEF_EXT),
        info(PhiBridge, "phi-bridge", "one-block Phi as a V-series", &[N], false, 1e-10, DEF_EXT),
    ]
};

impl IdentityId {
    pub fn all() -> impl Iterator<Item = IdentityId> {
        CATALOG.iter().map(|i| i.id)
    }

    pub fn info(self) -> &'static IdentityInfo {
        &CATALOG[self as usize]
    }

    pub fn name(self) -> &'static str {
        self.info().name
    }

    pub fn parse(s: &str) -> Option<IdentityId> {
        CATALOG.iter().find(|i| i.name == s).map(|i| i.id)
    }

    pub fn supports(self, case: BracketCase) -> bool {
        !self.info().elliptic_only || case == BracketCase::Elliptic
    }

    /// Tolerance at double (`false`) or extended (`true`) precision.
    pub fn tolerance(self, extended: bool) -> f64 {
        if extended {
            self.info().tol_extended
        } else {
            self.info().tol_double
        }
    }

    /// Sizes used when none are given.
    pub fn default_sizes(self) -> Sizes {
        use IdentityId::*;
        let mi = |p: &[usize]| Some(MultiIndex::new(p));
        let mut s = Sizes::default();
        match self {
            PartialFraction => s.n = Some(4),
            LemmaGeneral => s.m = Some(3),
            CauchyDet => s.n = Some(6),
            BcSubset | CSubset | CSubsetSpec => s.n = Some(3),
            CDualMn | CDualCoherence | BcDualCoherence | FCoherence => {
                s.alpha = mi(&[2, 1]);
                s.beta = mi(&[1, 2]);
            }
            CDual => {
                s.alpha = mi(&[2, 2]);
                s.beta = mi(&[1, 1]);
            }
            CSet3 | BcSetMn => {
                s.big_m = Some(3);
                s.n = Some(1);
            }
            CtSum | KmSum | BcSumMulti | PhiReduction => s.alpha = mi(&[2, 1]),
            CN1 => {
                s.alpha = mi(&[1, 2]);
                s.n = Some(2);
            }
            V1211 => {
                s.big_m = Some(3);
                s.n = Some(2);
            }
            ZeroFormula => {
                s.alpha = mi(&[2, 1]);
                s.beta = mi(&[1, 1]);
            }
            KmTransform => {
                s.alpha = mi(&[2, 1]);
                s.beta = mi(&[1]);
                s.r = Some(1);
                s.s = Some(1);
            }
            Km2m8 => {
                s.alpha = mi(&[1, 1]);
                s.r = Some(1);
                s.s = Some(1);
            }
            BcDual => {
                s.alpha = mi(&[2, 1]);
                s.beta = mi(&[1, 1, 1]);
            }
            BcSumSet => s.big_m = Some(3),
            BcDualMn => {
                s.alpha = mi(&[2]);
                s.beta = mi(&[1]);
            }
            CSigma => s.sigma = Some(8),
            PhiBridge => s.n = Some(3),
            _ => {}
        }
        s
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Size parameters; absent entries take the identity's defaults.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sizes {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<MultiIndex>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<MultiIndex>,
    #[serde(default, rename = "N", skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, rename = "M", skip_serializing_if = "Option::is_none")]
    pub big_m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<usize>,
}

impl Sizes {
    fn present(&self) -> Vec<SizeKey> {
        let mut k = Vec::new();
        let checks = [
            (self.alpha.is_some(), Alpha),
            (self.beta.is_some(), Beta),
            (self.n.is_some(), N),
            (self.big_m.is_some(), M),
            (self.m.is_some(), SmallM),
            (self.r.is_some(), R),
            (self.s.is_some(), S),
            (self.sigma.is_some(), Sigma),
        ];
        for (p, key) in checks {
            if p {
                k.push(key);
            }
        }
        k
    }

    /// Overlays `self` on the defaults of `id`, rejecting keys the identity
    /// does not take and inconsistent combinations.
    pub fn resolve(&self, id: IdentityId, limit: SizeLimit) -> Result<Sizes> {
        for key in self.present() {
            if !id.info().keys.contains(&key) {
                return Err(Error::BadSize(alloc::format!("{} does not take {}", id.name(), key.name())));
            }
        }
        let d = id.default_sizes();
        let s = Sizes {
            alpha: self.alpha.clone().or(d.alpha),
            beta: self.beta.clone().or(d.beta),
            n: self.n.or(d.n),
            big_m: self.big_m.or(d.big_m),
            m: self.m.or(d.m),
            r: self.r.or(d.r),
            s: self.s.or(d.s),
            sigma: self.sigma.or(d.sigma),
        };
        s.check(id, limit)?;
        Ok(s)
    }

    fn check(&self, id: IdentityId, limit: SizeLimit) -> Result<()> {
        use IdentityId::*;
        let bad = |msg: String| Err(Error::BadSize(msg));
        let wa = self.alpha.as_ref().map_or(0, MultiIndex::weight);
        let wb = self.beta.as_ref().map_or(0, MultiIndex::weight);
        for w in [wa, wb] {
            if w > limit.weight {
                return Err(Error::SizeLimit { size: w, limit: limit.weight });
            }
        }
        for n in [self.n, self.big_m, self.m, self.sigma].into_iter().flatten() {
            if n > limit.subset {
                return Err(Error::SizeLimit { size: n, limit: limit.subset });
            }
        }
        match id {
            CDualMn | BcDual if wa != wb => bad(alloc::format!("need |alpha| = |beta|, got {wa} and {wb}")),
            ZeroFormula if wa != wb + 1 => bad(alloc::format!("need |alpha| = |beta| + 1, got {wa} and {wb}")),
            KmTransform if wa != wb + self.r.unwrap_or(0) + self.s.unwrap_or(0) => {
                bad("need |alpha| = |beta| + r + s".into())
            }
            Km2m8 if wa != self.r.unwrap_or(0) + self.s.unwrap_or(0) => bad("need |alpha| = r + s".into()),
            BcSetMn if self.big_m < self.n => bad("need M >= N".into()),
            BcDualMn if wa < wb => bad("need |alpha| >= |beta|".into()),
            BcSubset | CSubset | CSubsetSpec if self.r > self.n => bad("need r <= N".into()),
            CauchyDet if self.n > Some(8) => bad("need N <= 8".into()),
            PartialFraction if self.n == Some(0) => bad("need N >= 1".into()),
            _ => Ok(()),
        }
    }

    fn alpha(&self) -> MultiIndex {
        self.alpha.clone().unwrap_or_default()
    }

    fn beta(&self) -> MultiIndex {
        self.beta.clone().unwrap_or_default()
    }

    fn n(&self) -> usize {
        self.n.unwrap_or(0)
    }

    fn big_m(&self) -> usize {
        self.big_m.unwrap_or(0)
    }
}

impl fmt::Display for Sizes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if let Some(a) = &self.alpha {
            parts.push(alloc::format!("alpha={a}"));
        }
        if let Some(b) = &self.beta {
            parts.push(alloc::format!("beta={b}"));
        }
        for (k, v) in [("N", self.n), ("M", self.big_m), ("m", self.m), ("r", self.r), ("s", self.s), ("sigma", self.sigma)] {
            if let Some(v) = v {
                parts.push(alloc::format!("{k}={v}"));
            }
        }
        f.write_str(&parts.join(" "))
    }
}

/// Balancing condition on `sum(a)`, in units of `delta`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Balance {
    Free,
    Delta(i64),
    /// `k delta + sum(extra)`.
    DeltaPlusExtra(i64),
}

/// How many values of each kind an identity consumes at given sizes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Shape {
    pub n_a: usize,
    pub balance: Balance,
    /// `a_7 = a_0 + delta`; the balance is then solved through `a_6`.
    pub shifted_pair: bool,
    pub n_c: usize,
    pub n_x: usize,
    pub n_y: usize,
    pub n_extra: usize,
}

impl Shape {
    const EMPTY: Shape =
        Shape { n_a: 0, balance: Balance::Free, shifted_pair: false, n_c: 0, n_x: 0, n_y: 0, n_extra: 0 };

    /// Index recomputed from the balancing condition.
    pub fn solved_index(&self) -> Option<usize> {
        match self.balance {
            Balance::Free => None,
            _ if self.shifted_pair => Some(6),
            _ => Some(self.n_a - 1),
        }
    }
}

/// Layout of the sample for `id` at resolved sizes.
pub fn shape(id: IdentityId, sizes: &Sizes) -> Shape {
    use IdentityId::*;
    let e = Shape::EMPTY;
    let (la, lb) = (sizes.alpha().len(), sizes.beta().len());
    let (wa, wb) = (sizes.alpha().weight() as i64, sizes.beta().weight() as i64);
    let (n, m) = (sizes.n(), sizes.big_m());
    let bc8 = |k: i64| Shape { n_a: 8, balance: Balance::Delta(k), ..e };
    let c4 = |k: i64| Shape { n_a: 4, balance: Balance::Delta(k), ..e };
    let shifted = |k: i64| Shape { n_a: 8, balance: Balance::Delta(k), shifted_pair: true, ..e };
    match id {
        Riemann => Shape { n_x: 4, ..e },
        Duplication | QuasiPeriodicity => Shape { n_x: 1, ..e },
        HalfperiodProduct => e,
        KernelBc1 => Shape { n_c: 4, n_x: 1, n_y: 1, ..bc8(4) },
        ConstantBc1 => Shape { n_x: 1, ..bc8(2) },
        KernelC1 => Shape { n_x: 1, n_y: 1, ..c4(1) },
        ConstantC1 => Shape { n_x: 1, ..c4(0) },
        SuperfluousC => Shape { n_a: 8, n_c: 2, n_x: 1, ..e },
        PartialFraction => Shape { n_x: n, n_y: n, n_extra: 1, ..e },
        LemmaGeneral => {
            let m = sizes.m.unwrap_or(0);
            Shape { n_a: m + 4, balance: Balance::DeltaPlusExtra(2), n_x: 1, n_y: 1, n_extra: m, ..e }
        }
        LemmaHalfperiod => Shape { n_x: 1, n_y: 1, ..bc8(4) },
        CauchyDet => Shape { n_x: n, n_y: n, ..e },
        BcSubset => Shape { n_c: 4, n_x: n, n_y: n, ..bc8(4) },
        CSubset => Shape { n_x: n, n_y: n, ..c4(1) },
        CSubsetSpec => Shape { n_c: 4, n_x: n, n_y: n, ..c4(1) },
        CDualMn | CDualCoherence => Shape { n_x: la, n_y: lb, ..c4(1) },
        CDual => Shape { n_x: la, n_y: lb, ..c4(wb - wa + 1) },
        CSet3 => Shape { n_x: m, n_y: n, ..c4(n as i64 - m as i64 + 1) },
        CtSum => Shape { n_x: la, ..c4(1 - wa) },
        CN1 => Shape { n_x: la, n_y: 1, ..c4(n as i64 - wa + 1) },
        V1211 => Shape { n_x: 1, n_y: 1, ..c4(n as i64 - m as i64 + 1) },
        ZeroFormula => Shape { n_x: la, n_y: lb, ..e },
        KmTransform => Shape { n_x: la, n_y: lb, n_extra: 2, ..e },
        Km2m8 | KmSum => Shape { n_x: la, n_extra: 2, ..e },
        BcDual | BcDualCoherence | FCoherence => Shape { n_c: 4, n_x: la, n_y: lb, ..bc8(4) },
        BcSetMn => Shape { n_x: m, n_y: n, ..shifted(4 - 2 * m as i64 + 2 * n as i64) },
        BcSumSet => Shape { n_x: m, ..shifted(4 - 2 * m as i64) },
        BcDualMn => Shape { n_x: la, n_y: lb, ..shifted(4 - 2 * wa + 2 * wb) },
        BcSumMulti => Shape { n_x: la, ..shifted(4 - 2 * wa) },
        CSigma => Shape { n_a: 8, n_c: 4, n_extra: 1, ..e },
        PhiReduction => Shape { n_x: la + 1, n_extra: 3, ..e },
        PhiBridge => Shape { n_x: 1, n_extra: 3, ..e },
    }
}

/// A sampled parameter point: context draw plus parameter and point vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamSample {
    pub case: BracketCase,
    pub tau: C64,
    pub delta: C64,
    pub quad_coeff: C64,
    pub a: Vec<C64>,
    pub c: Vec<C64>,
    pub x: Vec<C64>,
    pub y: Vec<C64>,
    pub extra: Vec<C64>,
}

impl ParamSample {
    pub fn context_spec(&self, opts: &EvalOptions) -> ContextSpec {
        let mut spec = match self.case {
            BracketCase::Elliptic => ContextSpec::elliptic(self.tau, self.quad_coeff, self.delta),
            case => ContextSpec::degenerate(case, self.quad_coeff, self.delta),
        };
        spec.tol_sing = opts.tol_sing;
        spec.k_lattice = opts.k_lattice;
        spec
    }

    fn check_shape(&self, sh: &Shape) -> Result<()> {
        let lens = [
            ("a", self.a.len(), sh.n_a),
            ("c", self.c.len(), sh.n_c),
            ("x", self.x.len(), sh.n_x),
            ("y", self.y.len(), sh.n_y),
            ("extra", self.extra.len(), sh.n_extra),
        ];
        for (name, got, want) in lens {
            if got != want {
                return Err(Error::BadSize(alloc::format!("sample has {got} values in {name}, expected {want}")));
            }
        }
        Ok(())
    }
}

/// Evaluation settings shared by all trials of a run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalOptions {
    pub tol_sing: f64,
    pub k_lattice: usize,
    pub limit: SizeLimit,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { tol_sing: 1e-8, k_lattice: 64, limit: SizeLimit::default() }
    }
}

/// Largest tolerated gap between a stored solved parameter and its value
/// recomputed at working precision.
pub const BALANCE_TOL: f64 = 1e-12;

fn lift<T: Real>(v: &[C64]) -> Vec<Cx<T>> {
    v.iter().map(|&z| c64_to(z)).collect()
}

/// Lifts `a` to working precision, re-imposing the hard constraints exactly.
fn solve_params<T: Real>(ctx: &BracketContext<T>, sh: &Shape, sample: &ParamSample) -> Result<Vec<Cx<T>>> {
    let mut a: Vec<Cx<T>> = lift(&sample.a);
    let check = |stored: Cx<T>, exact: Cx<T>| -> Result<()> {
        let gap = to_c64(stored - exact).norm();
        if gap > BALANCE_TOL * (1.0 + to_c64(exact).norm()) || gap.is_nan() {
            Err(Error::UnbalancedParams { deficit: gap })
        } else {
            Ok(())
        }
    };
    if sh.shifted_pair {
        let exact = a[0] + ctx.delta();
        check(a[7], exact)?;
        a[7] = exact;
    }
    if let Some(k) = sh.solved_index() {
        let mut target = match sh.balance {
            Balance::Delta(k) | Balance::DeltaPlusExtra(k) => ctx.kd(k),
            Balance::Free => unreachable!(),
        };
        if let Balance::DeltaPlusExtra(_) = sh.balance {
            for &e in &sample.extra {
                target = target + c64_to(e);
            }
        }
        let mut rest = target;
        for (i, &ap) in a.iter().enumerate() {
            if i != k {
                rest = rest - ap;
            }
        }
        check(a[k], rest)?;
        a[k] = rest;
    }
    Ok(a)
}

fn max_over<F>(mut f: F, range: core::ops::Range<usize>) -> Result<Residual>
where
    F: FnMut(usize) -> Result<Option<Residual>>,
{
    let mut worst = Residual::ZERO;
    for r in range {
        if let Some(v) = f(r)? {
            worst = worst.max(v);
        }
    }
    Ok(worst)
}

/// Normalized residual of `id` at `sample` in precision `T`.
///
/// `sizes` must already be resolved (see [`Sizes::resolve`]).
pub fn evaluate<T: Real>(id: IdentityId, sizes: &Sizes, sample: &ParamSample, opts: &EvalOptions) -> Result<Residual> {
    use IdentityId::*;
    if !id.supports(sample.case) {
        return Err(Error::WrongCase("elliptic"));
    }
    let sh = shape(id, sizes);
    sample.check_shape(&sh)?;
    let spec = sample.context_spec(opts);
    let ctx: BracketContext<T> = make_context(&spec)?;
    let a = solve_params(&ctx, &sh, sample)?;
    let c: Vec<Cx<T>> = lift(&sample.c);
    let x: Vec<Cx<T>> = lift(&sample.x);
    let y: Vec<Cx<T>> = lift(&sample.y);
    let extra: Vec<Cx<T>> = lift(&sample.extra);
    let lim = opts.limit;
    let arr8 = |v: &[Cx<T>]| -> [Cx<T>; 8] { core::array::from_fn(|i| v[i]) };
    let arr4 = |v: &[Cx<T>]| -> [Cx<T>; 4] { core::array::from_fn(|i| v[i]) };
    let bc = || ParamsBC { a: arr8(&a), c: if c.len() == 4 { arr4(&c) } else { [Cx::new(T::zero(), T::zero()); 4] } };
    let pc = || ParamsC { a: arr4(&a) };
    let (alpha, beta) = (sizes.alpha(), sizes.beta());
    match id {
        Riemann => riemann_residual(&ctx, x[0], x[1], x[2], x[3]),
        Duplication => duplication_residual(&ctx, x[0]),
        HalfperiodProduct => max_over(|r| ctx.half_period(r).map(|_| halfperiod_product_residual(&ctx, r)).transpose(), 0..4),
        QuasiPeriodicity => {
            max_over(|r| ctx.half_period(r).map(|_| quasi_periodicity_residual(&ctx, x[0], r)).transpose(), 1..4)
        }
        KernelBc1 => kernel_residual_bc1(&ctx, &bc(), x[0], y[0]),
        ConstantBc1 => constant_residual_bc1(&ctx, &bc(), x[0]),
        KernelC1 => kernel_residual_c1(&ctx, &pc(), x[0], y[0]),
        ConstantC1 => constant_residual_c1(&ctx, &pc(), x[0]),
        SuperfluousC => superfluous_c_residual(&ctx, &a, c[0], c[1], x[0]),
        PartialFraction => partial_fraction_residual(&ctx, extra[0], &x, &y),
        LemmaGeneral => lemma_general_residual(&ctx, &a, &extra, x[0], y[0]),
        LemmaHalfperiod => {
            let mut d = Vec::with_capacity(4);
            for r in 0..4 {
                let w = ctx.half_period(r).ok_or(Error::WrongCase("elliptic"))?;
                d.push((ctx.delta() - w) * T::from_f64(0.5));
            }
            lemma_general_residual(&ctx, &a, &d, x[0], y[0])
        }
        CauchyDet => subsets::cauchy_det_residual(&ctx, &x, &y),
        BcSubset => subsets::bc_subset_residual(&ctx, &bc(), &x, &y, sizes.r, lim),
        CSubset => subsets::c_subset_residual(&ctx, &pc(), &x, &y, sizes.r, lim),
        CSubsetSpec => {
            let mut hspec = spec.clone();
            hspec.delta = spec.delta * 0.5;
            let half: BracketContext<T> = make_context(&hspec)?;
            subsets::c_subset_spec_residual(&ctx, &half, &pc(), &arr4(&c), &x, &y, sizes.r, lim)
        }
        CDualMn => type_c::c_dual_mn_residual(&ctx, &pc(), &alpha, &beta, &x, &y, lim),
        CDual => type_c::c_dual_residual(&ctx, &pc(), &alpha, &beta, &x, &y, lim),
        CDualCoherence => type_c::c_dual_coherence_residual(&ctx, &pc(), &alpha, &beta, &x, &y, lim),
        CSet3 => type_c::c_set3_residual(&ctx, &pc(), &x, &y, lim),
        CtSum => type_c::ct_sum_residual(&ctx, &pc(), &alpha, &x, lim),
        CN1 => type_c::c_n1_residual(&ctx, &pc(), &alpha, sizes.n(), &x, y[0], lim),
        V1211 => type_c::v12_11_residual(&ctx, &pc(), sizes.big_m(), sizes.n(), x[0], y[0]),
        ZeroFormula => type_c::zero_formula_residual(&ctx, &alpha, &beta, &x, &y, lim),
        KmTransform => {
            let k = type_c::KmData {
                alpha,
                beta,
                x,
                y,
                u: extra[0],
                v: extra[1],
                r: sizes.r.unwrap_or(0),
                s: sizes.s.unwrap_or(0),
            };
            type_c::km_transform_residual(&ctx, &k, lim)
        }
        Km2m8 => type_c::km_2m8_residual(&ctx, &alpha, &x, extra[0], extra[1], sizes.r.unwrap_or(0), sizes.s.unwrap_or(0)),
        KmSum => type_c::km_sum_residual(&ctx, &alpha, &x, extra[0], extra[1]),
        BcDual => type_bc::bc_dual_residual(&ctx, &bc(), &alpha, &beta, &x, &y, lim),
        BcDualCoherence => type_bc::bc_dual_coherence_residual(&ctx, &bc(), &alpha, &beta, &x, &y, lim),
        FCoherence => type_bc::f_coherence_residual(&ctx, &bc(), &alpha, &beta, &x, &y, lim),
        BcSetMn => type_bc::bc_set_mn_residual(&ctx, &arr8(&a), &x, &y, lim),
        BcSumSet => type_bc::bc_sum_set_residual(&ctx, &arr8(&a), &x, lim),
        BcDualMn => type_bc::bc_dual_mn_residual(&ctx, &arr8(&a), &alpha, &beta, &x, &y, lim),
        BcSumMulti => type_bc::bc_sum_multi_residual(&ctx, &arr8(&a), &alpha, &x, lim),
        CSigma => {
            let sigma = sizes.sigma.unwrap_or(0);
            let cc = arr4(&c);
            let sum = c_sigma_sum(&ctx, &a, &cc, extra[0], sigma)?;
            let det = c_sigma_det(&ctx, &a, &cc, extra[0], sigma)?;
            let rec = c_sigma_rec(&ctx, &a, &cc, extra[0], sigma)?;
            let rel = |p: Cx<T>, q: Cx<T>| {
                let scale = to_c64(p).norm().max(to_c64(q).norm());
                let value = if scale > 0.0 { to_c64(p - q).norm() / scale } else { 0.0 };
                Residual { value, scale }
            };
            Ok(rel(sum, det).max(rel(sum, rec)))
        }
        PhiReduction => type_c::phi_reduction_residual(&ctx, &alpha, &x, &extra, lim),
        PhiBridge => type_c::phi_bridge_residual(&ctx, sizes.n(), x[0], &extra, lim),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_is_indexed_by_discriminant() {
        for (i, entry) in CATALOG.iter().enumerate() {
            assert_eq!(entry.id as usize, i);
            assert_eq!(IdentityId::parse(entry.name), Some(entry.id));
        }
    }

    #[test]
    fn defaults_resolve_for_every_identity() {
        for id in IdentityId::all() {
            Sizes::default().resolve(id, SizeLimit::default()).unwrap();
        }
    }

    #[test]
    fn foreign_size_keys_are_rejected() {
        let s = Sizes { sigma: Some(3), ..Sizes::default() };
        assert!(matches!(s.resolve(IdentityId::CDual, SizeLimit::default()), Err(Error::BadSize(_))));
    }

    #[test]
    fn inconsistent_weights_are_rejected() {
        let ab = |a: usize, b: usize| Sizes { alpha: Some(MultiIndex::new(&[a])), beta: Some(MultiIndex::new(&[b])), ..Sizes::default() };
        let lim = SizeLimit::default();
        assert!(ab(2, 1).resolve(IdentityId::ZeroFormula, lim).is_ok());
        assert!(ab(2, 2).resolve(IdentityId::ZeroFormula, lim).is_err());
        assert!(ab(2, 1).resolve(IdentityId::CDualMn, lim).is_err());
        assert!(ab(2, 1).resolve(IdentityId::CDual, lim).is_ok());
    }
}
