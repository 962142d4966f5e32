#include "recist_kit/parallel.hpp"

#include <cstdlib>
#include <string>

namespace recist_kit::parallel {

int max_workers() {
  if (const char* env = std::getenv("RECIST_KIT_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (...) {
    }
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace recist_kit::parallel
