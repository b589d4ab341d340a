//! Data-parallel execution with a sequential fallback.

/// How independent work items are scheduled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether parallel execution is compiled in.
    pub const fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }
}

/// Folds every job into an accumulator and merges the partial results.
/// `merge` must be associative and commutative for the result to be
/// independent of scheduling.
pub fn fold_jobs<J, R, I, W, M>(jobs: &[J], exec: Execution, identity: I, work: W, merge: M) -> R
where
    J: Sync,
    R: Send,
    I: Fn() -> R + Sync + Send,
    W: Fn(&J, &mut R) + Sync + Send,
    M: Fn(R, R) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec == Execution::Parallel {
        use rayon::prelude::*;
        return jobs
            .par_iter()
            .fold(&identity, |mut acc, j| {
                work(j, &mut acc);
                acc
            })
            .reduce(&identity, &merge);
    }
    let _ = (exec, &merge);
    let mut acc = identity();
    for j in jobs {
        work(j, &mut acc);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_modes_agree() {
        let jobs: Vec<u64> = (0..1000).collect();
        let run = |e| fold_jobs(&jobs, e, || 0u64, |j, acc| *acc += j * j, |a, b| a + b);
        assert_eq!(run(Execution::Sequential), run(Execution::Parallel));
    }
}
