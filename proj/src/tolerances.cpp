#include "liecurve/tolerances.hpp"

#include <cstdlib>
#include <string>

namespace liecurve {

double tau_alg() {
  static const double value = [] {
    if (const char* env = std::getenv("LIECURVE_TOL")) {
      try {
        double v = std::stod(env);
        if (v > 0) return v;
      } catch (...) {
      }
    }
    return 1e-9;
  }();
  return value;
}

}  // namespace liecurve
