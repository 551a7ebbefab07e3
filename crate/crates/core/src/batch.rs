//! Order-preserving batch evaluation, data-parallel when the `parallel`
//! feature is enabled.

use crate::error::Result;
use crate::kgit::{full_report, WallModel, WallReport};

/// Applies `f` to every item on the current thread.
pub fn map_sequential<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

/// Applies `f` to every item on the rayon pool. Output order matches input.
#[cfg(feature = "parallel")]
pub fn map_parallel<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

/// Parallel when built with `parallel`, sequential otherwise.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        map_parallel(items, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_sequential(items, f)
    }
}

pub fn evaluate_models(models: &[WallModel]) -> Vec<Result<WallReport>> {
    map(models, full_report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let xs: Vec<u64> = (0..1000).collect();
        let seq = map_sequential(&xs, |x| x * x);
        assert_eq!(map(&xs, |x| x * x), seq);
        #[cfg(feature = "parallel")]
        assert_eq!(map_parallel(&xs, |x| x * x), seq);
    }

    #[test]
    fn batch_matches_single_evaluation() {
        let models: Vec<WallModel> = [vec![1, 1, -2], vec![1, 1, -1, -1], vec![2, -1, -1]]
            .into_iter()
            .map(|w| WallModel::new(w, 0).unwrap())
            .collect();
        let batch = evaluate_models(&models);
        for (m, r) in models.iter().zip(batch) {
            assert_eq!(r.unwrap(), full_report(m).unwrap());
        }
    }
}
