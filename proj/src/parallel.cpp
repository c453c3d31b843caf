#include "effsens/parallel.hpp"

#include <omp.h>

#include <charconv>
#include <cstdlib>
#include <cstring>

namespace effsens {

int apply_thread_limit() {
  if (const char* env = std::getenv("EFFSENS_THREADS")) {
    int cap = 0;
    const auto [ptr, ec] = std::from_chars(env, env + std::strlen(env), cap);
    if (ec == std::errc() && *ptr == '\0' && cap > 0 && cap < omp_get_max_threads())
      omp_set_num_threads(cap);
  }
  return omp_get_max_threads();
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace effsens
