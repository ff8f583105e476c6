//! Parallel replication runner. Replication `i` always uses stream `i` of the
//! cell seed and results are gathered in index order, so the aggregate is
//! bit-identical for any worker count.

use rayon::prelude::*;
use rayon::ThreadPool;

use super::stats::{AggregateStats, ReplicationRecord};
use crate::error::{Error, Result};
use crate::routing::{run_hybrid, Recovery, Scenario};
use crate::seed;

pub struct Executor {
    pool: ThreadPool,
}

impl Executor {
    /// `workers = 0` uses one thread per available core.
    pub fn new(workers: usize) -> Result<Self> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::invalid("workers", e.to_string()))?;
        Ok(Self { pool })
    }

    pub fn workers(&self) -> usize {
        self.pool.current_num_threads()
    }

    /// `f(i)` for `i = 0..n`, in index order.
    pub fn map<T: Send>(&self, n: u64, f: impl Fn(u64) -> T + Send + Sync) -> Vec<T> {
        self.pool.install(|| (0..n).into_par_iter().map(f).collect())
    }
}

pub fn run_replications(
    exec: &Executor,
    scenario: &Scenario,
    strategy: &dyn Recovery,
    replications: u64,
    cell_seed: u64,
) -> Vec<ReplicationRecord> {
    exec.map(replications, |i| {
        let mut rng = seed::stream(cell_seed, i);
        ReplicationRecord::from(&run_hybrid(scenario, strategy, &mut rng))
    })
}

pub fn monte_carlo(
    exec: &Executor,
    scenario: &Scenario,
    strategy: &dyn Recovery,
    replications: u64,
    master_seed: u64,
) -> Result<AggregateStats> {
    if replications < 1 {
        return Err(Error::invalid("replications", "must be >= 1"));
    }
    let records = run_replications(exec, scenario, strategy, replications, master_seed);
    Ok(AggregateStats::from_records(&records))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::routing::{DelayModel, StrategyRegistry, StrategySpec};
    use crate::traffic::TrafficParams;

    fn setup() -> (Scenario, Box<dyn Recovery>) {
        let sc = Scenario::new(TrafficParams::default(), 150.0, 3_000.0, DelayModel::default()).unwrap();
        let s = StrategyRegistry::default()
            .build(&StrategySpec::named("backtrack"))
            .unwrap();
        (sc, s)
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let (sc, s) = setup();
        let a = monte_carlo(&Executor::new(1).unwrap(), &sc, s.as_ref(), 200, 42).unwrap();
        let b = monte_carlo(&Executor::new(4).unwrap(), &sc, s.as_ref(), 200, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.replications, 200);
    }

    #[test]
    fn single_replication_is_degenerate() {
        let (sc, s) = setup();
        let exec = Executor::new(2).unwrap();
        let a = monte_carlo(&exec, &sc, s.as_ref(), 1, 9).unwrap();
        let one = run_hybrid(&sc, s.as_ref(), &mut seed::stream(9, 0));
        assert_eq!(a.total_delay.mean, one.total_delay);
        assert_eq!(a.total_delay.ci95, None);
        assert!(monte_carlo(&exec, &sc, s.as_ref(), 0, 9).is_err());
    }
}
