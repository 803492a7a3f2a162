//! Bounded worker pool: jobs go out over a shared queue, results come back by message.

use std::sync::{mpsc, Arc, Mutex};
use std::thread;

pub type Job<T> = Box<dyn FnOnce() -> T + Send>;

/// Runs `jobs` on at most `workers` threads and returns the results in job order.
pub fn run_all<T: Send + 'static>(jobs: Vec<Job<T>>, workers: usize) -> Vec<T> {
    let n = jobs.len();
    let workers = workers.clamp(1, n.max(1));
    if workers == 1 {
        return jobs.into_iter().map(|j| j()).collect();
    }
    let queue = Arc::new(Mutex::new(jobs.into_iter().enumerate()));
    let (tx, rx) = mpsc::channel::<(usize, T)>();
    let handles: Vec<_> = (0..workers)
        .map(|_| {
            let queue = Arc::clone(&queue);
            let tx = tx.clone();
            thread::spawn(move || loop {
                let next = queue.lock().expect("job queue poisoned").next();
                let Some((i, job)) = next else { break };
                if tx.send((i, job())).is_err() {
                    break;
                }
            })
        })
        .collect();
    drop(tx);
    let mut slots: Vec<Option<T>> = (0..n).map(|_| None).collect();
    for (i, r) in rx {
        slots[i] = Some(r);
    }
    for h in handles {
        h.join().expect("worker panicked");
    }
    slots.into_iter().map(|s| s.expect("every job reports")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        for workers in [1, 3, 8] {
            let jobs: Vec<Job<u64>> = (0..50u64)
                .map(|i| {
                    Box::new(move || {
                        std::thread::sleep(std::time::Duration::from_micros((50 - i) * 20));
                        i * i
                    }) as Job<u64>
                })
                .collect();
            let out = run_all(jobs, workers);
            assert_eq!(out, (0..50u64).map(|i| i * i).collect::<Vec<_>>());
        }
    }

    #[test]
    fn empty_queue() {
        assert!(run_all::<u8>(Vec::new(), 4).is_empty());
    }
}
