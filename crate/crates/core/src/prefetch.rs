//! Software prefetch for loops that visit scattered positions.

/// How many iterations ahead a scattered loop requests its data.
pub(crate) const AHEAD: usize = 16;

/// Hints that `slice[idx]` will be read soon. Out-of-range indices and
/// targets without a prefetch instruction make this a no-op.
#[inline(always)]
pub(crate) fn prefetch<T>(slice: &[T], idx: usize) {
    #[cfg(target_arch = "x86_64")]
    if idx < slice.len() {
        // SAFETY: the pointer is in bounds and prefetching never faults.
        unsafe {
            use std::arch::x86_64::{_mm_prefetch, _MM_HINT_T0};
            _mm_prefetch::<_MM_HINT_T0>(slice.as_ptr().add(idx) as *const i8);
        }
    }
    #[cfg(not(target_arch = "x86_64"))]
    let _ = (slice, idx);
}
