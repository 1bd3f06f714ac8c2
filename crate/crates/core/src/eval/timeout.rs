use std::sync::mpsc;
use std::thread;
use std::time::Duration;

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome<T> {
    Completed(T),
    TimedOut,
    /// The task panicked.
    Errored(String),
}

/// Runs `task` on its own thread and waits at most `limit`. A task that overruns is
/// abandoned; it keeps running detached but its result is dropped.
pub fn run_with_timeout<T, F>(task: F, limit: Duration) -> Outcome<T>
where
    T: Send + 'static,
    F: FnOnce() -> T + Send + 'static,
{
    let (tx, rx) = mpsc::channel();
    let spawned = thread::Builder::new().name("sheetlint-task".into()).spawn(move || {
        let _ = tx.send(task());
    });
    if let Err(e) = spawned {
        return Outcome::Errored(format!("could not start worker: {e}"));
    }
    match rx.recv_timeout(limit) {
        Ok(v) => Outcome::Completed(v),
        Err(mpsc::RecvTimeoutError::Timeout) => Outcome::TimedOut,
        Err(mpsc::RecvTimeoutError::Disconnected) => Outcome::Errored("task panicked".into()),
    }
}
