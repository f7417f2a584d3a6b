use rayon::prelude::*;
use tsnet_core::montecarlo::ReplicateRunner;

/// Runs replicate chunks on the rayon thread pool. Results come back in
/// chunk order, so estimates match [`tsnet_core::montecarlo::Sequential`]
/// bit for bit.
#[derive(Debug, Clone, Copy, Default)]
pub struct Rayon;

impl ReplicateRunner for Rayon {
    fn map<T, F>(&self, count: u32, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u32) -> T + Sync + Send,
    {
        (0..count).into_par_iter().map(f).collect()
    }
}
