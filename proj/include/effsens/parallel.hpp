#pragma once

namespace effsens {

/// Applies the EFFSENS_THREADS cap (if set to a positive integer) to the
/// OpenMP thread count. Returns the resulting maximum.
int apply_thread_limit();

int max_threads();

}  // namespace effsens
