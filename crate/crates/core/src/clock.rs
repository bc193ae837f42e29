//! Host-wide monotonic clock in nanoseconds.
//!
//! `std::time::Instant` cannot be exchanged between processes, so timestamps
//! that travel over the wire are read from `CLOCK_MONOTONIC` directly. Every
//! process on one host sees the same clock.

/// Current `CLOCK_MONOTONIC` reading in nanoseconds.
pub fn now_ns() -> u64 {
    let mut ts = libc::timespec {
        tv_sec: 0,
        tv_nsec: 0,
    };
    // SAFETY: `ts` is a valid, writable timespec and CLOCK_MONOTONIC is always available on Linux.
    let rc = unsafe { libc::clock_gettime(libc::CLOCK_MONOTONIC, &mut ts) };
    debug_assert_eq!(rc, 0);
    ts.tv_sec as u64 * 1_000_000_000 + ts.tv_nsec as u64
}

/// Busy-waits until the clock reaches `deadline_ns`.
///
/// Sleeps coarsely first and spins for the last stretch so that injected
/// delays land within a few microseconds of the target.
pub fn wait_until(deadline_ns: u64) {
    const SPIN_NS: u64 = 200_000;
    loop {
        let now = now_ns();
        if now >= deadline_ns {
            return;
        }
        let left = deadline_ns - now;
        if left > SPIN_NS {
            std::thread::sleep(std::time::Duration::from_nanos(left - SPIN_NS));
        } else {
            std::hint::spin_loop();
        }
    }
}

/// Spins without yielding until the clock reaches `deadline_ns`.
///
/// For short holds that must not let the CPU go idle, such as an injected
/// transport delay.
pub fn spin_until(deadline_ns: u64) {
    while now_ns() < deadline_ns {
        std::hint::spin_loop();
    }
}
