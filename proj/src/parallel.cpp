#include "volgram/parallel.hpp"

#include <cstdlib>
#include <string>

namespace volgram {

unsigned resolve_threads(unsigned requested) {
  unsigned n = requested;
  if (n == 0) {
    n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
  }
  if (const char* cap_env = std::getenv("VOLGRAM_THREADS")) {
    try {
      const unsigned long cap = std::stoul(cap_env);
      if (cap >= 1 && cap < n) n = static_cast<unsigned>(cap);
    } catch (...) {
      // Unparseable cap is ignored.
    }
  }
  return n;
}

}  // namespace volgram
