#include "coalscope/parallel.hpp"

#include <cstdlib>
#include <string>

namespace coalscope {

unsigned default_threads() {
  if (const char* env = std::getenv("COALSCOPE_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

}  // namespace coalscope
