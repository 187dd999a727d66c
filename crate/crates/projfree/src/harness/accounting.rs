//! Closed-form oracle-complexity predictions, checked bit-exactly against a
//! finished run's counters.

use crate::solvers::{Algorithm, RunRecord};

/// True iff the run's algorithm counters match their closed-form
/// predictions:
///
/// * fw:        ifo = nT,             lo = T
/// * sfw:       sfo = bT,             lo = T
/// * svfw:      ifo = S(n + 2mb),     lo = Sm
/// * sagafw:    n + bT <= ifo <= n + 2bT, lo = T
/// * wrappers:  sfo = B plus the delegated finite-sum pattern over n = B
///
/// Gap-evaluation counters are excluded by construction; the algorithm
/// columns alone carry the complexity structure.
pub fn verify_accounting(record: &RunRecord) -> bool {
    let c = &record.counters;
    let p = &record.params;
    let t = p.total_iterations;
    match record.algorithm {
        Algorithm::Fw => c.ifo == p.n * t && c.lo == t && c.sfo == 0,
        Algorithm::Sfw => c.sfo == p.batch * t && c.lo == t && c.ifo == 0,
        Algorithm::Svfw => {
            let epochs = t / p.epoch_len;
            c.ifo == epochs * (p.n + 2 * p.epoch_len * p.batch) && c.lo == t && c.sfo == 0
        }
        Algorithm::Sagafw => {
            c.ifo >= p.n + p.batch * t && c.ifo <= p.n + 2 * p.batch * t && c.lo == t && c.sfo == 0
        }
        Algorithm::SvfwS => {
            let epochs = t / p.epoch_len;
            c.sfo == p.presample
                && c.ifo == epochs * (p.presample + 2 * p.epoch_len * p.batch)
                && c.lo == t
        }
        Algorithm::SagafwS => {
            c.sfo == p.presample
                && c.ifo >= p.presample + p.batch * t
                && c.ifo <= p.presample + 2 * p.batch * t
                && c.lo == t
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::ConstraintSet;
    use crate::problems::{generate_synthetic, ProblemKind, StochasticProblem};
    use crate::solvers::{run_fw, run_sagafw, run_sfw, run_svfw, RunConfig};

    #[test]
    fn fw_prediction() {
        let set = ConstraintSet::simplex(4).unwrap();
        let p = generate_synthetic(&ProblemKind::SigmoidLoss, 10, 4, 1).unwrap();
        let cfg = RunConfig::new(Algorithm::Fw, 7, 2);
        let record = run_fw(&cfg, &p, &set).unwrap();
        assert_eq!(record.counters.ifo, 70);
        assert_eq!(record.counters.lo, 7);
        assert!(verify_accounting(&record));
    }

    #[test]
    fn svfw_prediction() {
        let set = ConstraintSet::simplex(5).unwrap();
        let p = generate_synthetic(&ProblemKind::IndefiniteQuadratic, 64, 5, 2).unwrap();
        let mut cfg = RunConfig::new(Algorithm::Svfw, 12, 3);
        cfg.epoch_len = Some(4);
        cfg.batch = Some(16);
        let record = run_svfw(&cfg, &p, &set).unwrap();
        assert_eq!(record.counters.ifo, 576);
        assert!(verify_accounting(&record));
    }

    #[test]
    fn sagafw_duplicate_free_regime() {
        // n much larger than bT: every J is duplicate-free almost surely,
        // so ifo hits the upper bound n + 2bT exactly.
        let set = ConstraintSet::simplex(6).unwrap();
        let p = generate_synthetic(&ProblemKind::SigmoidLoss, 4000, 6, 3).unwrap();
        let mut cfg = RunConfig::new(Algorithm::Sagafw, 5, 4);
        cfg.batch = Some(2);
        let record = run_sagafw(&cfg, &p, &set).unwrap();
        assert_eq!(record.counters.ifo, 4000 + 2 * 2 * 5);
        assert!(verify_accounting(&record));
    }

    #[test]
    fn sfw_prediction() {
        let set = ConstraintSet::simplex(3).unwrap();
        let p = StochasticProblem::sigmoid(3).unwrap();
        let mut cfg = RunConfig::new(Algorithm::Sfw, 6, 5);
        cfg.batch = Some(4);
        cfg.eval_batch = 8;
        let record = run_sfw(&cfg, &p, &set).unwrap();
        assert_eq!(record.counters.sfo, 24);
        assert!(verify_accounting(&record));
    }
}
