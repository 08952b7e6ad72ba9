//! The two arithmetic DGS certificates.
//!
//! * [`check_fn`]: `det(W) = ±2^{floor(n/2)} * b` with `b` odd and square-free.
//! * [`check_extended`]: `rank_2(W) = ceil(n/2)`, the Smith form of `W` is
//!   `diag(1 (ceil(n/2) times), 2^{l_1}, ..., 2^{l_t} b)` with `b` odd and
//!   square-free, and every GF(2) kernel vector of `W^T W1 / 2` is also
//!   annihilated by `W` modulo 2.
//!
//! A failed test never means the graph has a cospectral mate; it only means
//! this certificate does not apply.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{certify_squarefree, Budget, SquarefreeCertificate, SquarefreeStatus};
use crate::error::Result;
use crate::graph::Graph;
use crate::linalg::{kernel_basis_f2, rank_f2, smith_normal_form, F2Matrix, F2Vector, SnfResult, SnfRun};
use crate::report::SCHEMA_VERSION;
use crate::walk::{build_walk_bundle, valuation2, Valuation2, WalkBundle};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VerdictKind {
    NotControllable,
    DgsByFn,
    DgsByExtended,
    CriterionInconclusive,
    FactorizationUnknown,
}

impl VerdictKind {
    pub fn is_dgs(self) -> bool {
        matches!(self, VerdictKind::DgsByFn | VerdictKind::DgsByExtended)
    }
}

/// Which hypothesis of a test failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "clause")]
pub enum FailedClause {
    /// `det(W)` carries more than `floor(n/2)` factors of two.
    FnValuation { alpha: u64, required: u64 },
    /// The odd part of `det(W)` has a repeated prime.
    OddPartNotSquareFree,
    /// `rank_2(W) != ceil(n/2)`.
    Rank2 { rank: usize, required: usize },
    /// The Smith form does not have the required shape.
    SnfShape { reason: String },
    /// A kernel vector `v` of `W^T W1 / 2` with `W v != 0 (mod 2)`.
    KernelContainment { index: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelWitness {
    /// Basis vector of the GF(2) kernel of `W^T W1 / 2`.
    pub v: F2Vector,
    /// `W v mod 2`; all zeros when containment holds for this vector.
    pub w_times_v: F2Vector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Evidence {
    pub order: usize,
    #[serde(with = "crate::report::bigint_string")]
    pub det_w: BigInt,
    pub valuation: Option<Valuation2>,
    pub squarefree: Option<SquarefreeCertificate>,
    #[serde(with = "crate::report::opt_bigint_vec_string")]
    pub snf_diag: Option<Vec<BigInt>>,
    pub snf_runs: Option<Vec<SnfRun>>,
    pub rank2_w: usize,
    /// For odd `n`, `W1` has `2e` as its first column; this records that the
    /// unmodified matrix `W^T [e, A^2 e, ...]` is not entrywise even there.
    pub w1_first_column_doubled: bool,
    pub unmodified_w1_gram_even: bool,
    pub kernel_witness: Option<Vec<KernelWitness>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DgsVerdict {
    pub schema: &'static str,
    pub kind: VerdictKind,
    pub failed: Vec<FailedClause>,
    pub evidence: Evidence,
}

/// Shared computations for one graph; each piece is computed at most once.
pub struct Analysis {
    bundle: WalkBundle,
    det: BigInt,
    budget: Budget,
    valuation: Option<Valuation2>,
    rank2: usize,
    squarefree: Option<SquarefreeCertificate>,
    snf: Option<SnfResult>,
    kernel: Option<Vec<KernelWitness>>,
}

impl Analysis {
    pub fn new(g: &Graph, budget: &Budget) -> Result<Self> {
        let bundle = build_walk_bundle(g)?;
        let det = bundle.w.det_bareiss()?;
        let valuation = if det.is_zero() { None } else { Some(valuation2(&det)?) };
        let rank2 = rank_f2(&F2Matrix::from_bigint(&bundle.w));
        Ok(Analysis {
            bundle,
            det,
            budget: *budget,
            valuation,
            rank2,
            squarefree: None,
            snf: None,
            kernel: None,
        })
    }

    pub fn bundle(&self) -> &WalkBundle {
        &self.bundle
    }

    pub fn det(&self) -> &BigInt {
        &self.det
    }

    pub fn rank2(&self) -> usize {
        self.rank2
    }

    fn n(&self) -> usize {
        self.bundle.order()
    }

    fn squarefree(&mut self) -> &SquarefreeCertificate {
        if self.squarefree.is_none() {
            let odd = &self.valuation.as_ref().expect("controllable").odd_part;
            let cert = certify_squarefree(odd, &self.budget).expect("odd part is odd and positive");
            self.squarefree = Some(cert);
        }
        self.squarefree.as_ref().unwrap()
    }

    pub fn snf(&mut self) -> &SnfResult {
        if self.snf.is_none() {
            let s = smith_normal_form(&self.bundle.w, false).expect("controllable");
            self.snf = Some(s);
        }
        self.snf.as_ref().unwrap()
    }

    /// Kernel basis of `W^T W1 / 2` over GF(2), each vector paired with
    /// `W v mod 2`.
    pub fn kernel_witness(&mut self) -> &[KernelWitness] {
        if self.kernel.is_none() {
            let gram = F2Matrix::from_bigint(&self.bundle.half_gram_full);
            let w2 = F2Matrix::from_bigint(&self.bundle.w);
            let wit = kernel_basis_f2(&gram)
                .into_iter()
                .map(|v| {
                    let w_times_v = w2.mul_vec(&v);
                    KernelWitness { v, w_times_v }
                })
                .collect();
            self.kernel = Some(wit);
        }
        self.kernel.as_ref().unwrap()
    }

    fn evidence(&self) -> Evidence {
        let n = self.n();
        let odd = n % 2 == 1;
        Evidence {
            order: n,
            det_w: self.det.clone(),
            valuation: self.valuation.clone(),
            squarefree: self.squarefree.clone(),
            snf_diag: self.snf.as_ref().map(|s| s.diag.clone()),
            snf_runs: self.snf.as_ref().map(SnfResult::runs),
            rank2_w: self.rank2,
            w1_first_column_doubled: odd,
            // the (1,1) entry of W^T [e, A^2 e, ...] is e^T e = n
            unmodified_w1_gram_even: !odd,
            kernel_witness: self.kernel.clone(),
        }
    }

    fn verdict(&self, kind: VerdictKind, failed: Vec<FailedClause>) -> DgsVerdict {
        DgsVerdict {
            schema: SCHEMA_VERSION,
            kind,
            failed,
            evidence: self.evidence(),
        }
    }

    /// Membership in the family `F_n`.
    pub fn check_fn(&mut self) -> DgsVerdict {
        let Some(val) = self.valuation.clone() else {
            return self.verdict(VerdictKind::NotControllable, vec![]);
        };
        let required = (self.n() / 2) as u64;
        if val.alpha != required {
            return self.verdict(
                VerdictKind::CriterionInconclusive,
                vec![FailedClause::FnValuation {
                    alpha: val.alpha,
                    required,
                }],
            );
        }
        match self.squarefree().status {
            SquarefreeStatus::SquareFree => self.verdict(VerdictKind::DgsByFn, vec![]),
            SquarefreeStatus::NotSquareFree => self.verdict(
                VerdictKind::CriterionInconclusive,
                vec![FailedClause::OddPartNotSquareFree],
            ),
            SquarefreeStatus::Unknown => self.verdict(VerdictKind::FactorizationUnknown, vec![]),
        }
    }

    /// The Smith-form and kernel-containment test.
    pub fn check_extended(&mut self) -> DgsVerdict {
        if self.valuation.is_none() {
            return self.verdict(VerdictKind::NotControllable, vec![]);
        }
        let n = self.n();
        let k = n.div_ceil(2);
        if self.rank2 != k {
            return self.verdict(
                VerdictKind::CriterionInconclusive,
                vec![FailedClause::Rank2 {
                    rank: self.rank2,
                    required: k,
                }],
            );
        }
        if let Some(reason) = snf_shape_mismatch(&self.snf().diag, k) {
            return self.verdict(
                VerdictKind::CriterionInconclusive,
                vec![FailedClause::SnfShape { reason }],
            );
        }
        let bad = self
            .kernel_witness()
            .iter()
            .position(|w| !w.w_times_v.is_zero());
        if let Some(index) = bad {
            return self.verdict(
                VerdictKind::CriterionInconclusive,
                vec![FailedClause::KernelContainment { index }],
            );
        }
        // The odd part of the last invariant factor is the odd part of det(W),
        // since the shape check forces every other factor to be a power of 2.
        match self.squarefree().status {
            SquarefreeStatus::SquareFree => self.verdict(VerdictKind::DgsByExtended, vec![]),
            SquarefreeStatus::NotSquareFree => self.verdict(
                VerdictKind::CriterionInconclusive,
                vec![FailedClause::OddPartNotSquareFree],
            ),
            SquarefreeStatus::Unknown => self.verdict(VerdictKind::FactorizationUnknown, vec![]),
        }
    }

    /// `check_fn`, then `check_extended`, with all evidence filled in.
    pub fn certify(&mut self) -> DgsVerdict {
        let by_fn = self.check_fn();
        if by_fn.kind == VerdictKind::NotControllable {
            return by_fn;
        }
        let by_ext = self.check_extended();
        // make sure the evidence is complete whichever test decided
        self.snf();
        self.kernel_witness();
        self.squarefree();

        use VerdictKind::*;
        let (kind, failed) = match (by_fn.kind, by_ext.kind) {
            (DgsByFn, _) => (DgsByFn, vec![]),
            (_, DgsByExtended) => (DgsByExtended, vec![]),
            (FactorizationUnknown, _) | (_, FactorizationUnknown) => {
                let mut f = by_fn.failed;
                f.extend(by_ext.failed);
                (FactorizationUnknown, f)
            }
            _ => {
                let mut f = by_fn.failed;
                f.extend(by_ext.failed);
                (CriterionInconclusive, f)
            }
        };
        self.verdict(kind, failed)
    }
}

/// `None` when `diag` is `ceil(n/2)` ones followed by powers of two, the
/// last of which may carry an odd cofactor.
fn snf_shape_mismatch(diag: &[BigInt], ones: usize) -> Option<String> {
    let n = diag.len();
    if let Some(i) = diag[..ones].iter().position(|d| !d.is_one()) {
        return Some(format!("invariant factor {} is {}, expected 1", i + 1, diag[i]));
    }
    for (i, d) in diag.iter().enumerate().skip(ones) {
        if d.is_one() {
            return Some(format!("more than {ones} unit invariant factors"));
        }
        if i + 1 < n {
            let tz = d.trailing_zeros().unwrap_or(0);
            if (d >> tz) != BigInt::one() {
                return Some(format!("invariant factor {} = {d} is not a power of two", i + 1));
            }
        } else if d.is_odd() {
            return Some(format!("last invariant factor {d} is odd"));
        }
    }
    None
}

pub fn check_fn(g: &Graph, budget: &Budget) -> Result<DgsVerdict> {
    Ok(Analysis::new(g, budget)?.check_fn())
}

pub fn check_extended(g: &Graph, budget: &Budget) -> Result<DgsVerdict> {
    Ok(Analysis::new(g, budget)?.check_extended())
}

pub fn certify(g: &Graph, budget: &Budget) -> Result<DgsVerdict> {
    Ok(Analysis::new(g, budget)?.certify())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn single_vertex() {
        let b = Budget::default();
        let g = Graph::empty(1);
        assert_eq!(check_fn(&g, &b).unwrap().kind, VerdictKind::DgsByFn);
        let ext = check_extended(&g, &b).unwrap();
        assert_eq!(ext.kind, VerdictKind::DgsByExtended);
        assert_eq!(ext.evidence.kernel_witness.as_ref().unwrap().len(), 0);
    }

    #[test]
    fn k2_not_controllable() {
        let b = Budget::default();
        let g = Graph::complete(2);
        assert_eq!(check_fn(&g, &b).unwrap().kind, VerdictKind::NotControllable);
        assert_eq!(check_extended(&g, &b).unwrap().kind, VerdictKind::NotControllable);
        assert_eq!(certify(&g, &b).unwrap().kind, VerdictKind::NotControllable);
    }

    #[test]
    fn shape_rules() {
        assert_eq!(snf_shape_mismatch(&ints(&[1, 1, 2, 2 * 15]), 2), None);
        assert_eq!(snf_shape_mismatch(&ints(&[1, 1, 2, 4, 8 * 3]), 2), None);
        assert!(snf_shape_mismatch(&ints(&[1, 2, 2, 30]), 2).is_some());
        assert!(snf_shape_mismatch(&ints(&[1, 1, 6, 6]), 2).is_some());
        assert!(snf_shape_mismatch(&ints(&[1, 1, 1, 2]), 2).is_some());
        assert!(snf_shape_mismatch(&ints(&[1, 1, 3]), 2).is_some());
    }
}
