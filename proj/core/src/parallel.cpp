#include "reicqed/parallel.hpp"

#include <cstdlib>
#include <string>

namespace reicqed {

std::size_t worker_count() {
  if (const char* env = std::getenv("REICQED_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (...) {
    }
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : hc;
}

}  // namespace reicqed
