#include "ipfactor/tolerances.hpp"

#include <cstdlib>
#include <string>

namespace ipfactor {

Tolerances Tolerances::scaled(double factor) const {
  Tolerances t = *this;
  t.herm *= factor;
  t.pos_margin *= factor;
  t.self_adjoint *= factor;
  t.pd_margin *= factor;
  t.rank_cutoff *= factor;
  t.independence *= factor;
  t.residual *= factor;
  t.shift_margin *= factor;
  return t;
}

namespace {

Tolerances from_environment() {
  Tolerances base;
  const char* raw = std::getenv("IPFACTOR_TOL");
  if (raw == nullptr) return base;
  try {
    double factor = std::stod(raw);
    if (factor > 0.0) return base.scaled(factor);
  } catch (const std::exception&) {
  }
  return base;
}

}  // namespace

const Tolerances& tolerances() {
  static const Tolerances instance = from_environment();
  return instance;
}

}  // namespace ipfactor
