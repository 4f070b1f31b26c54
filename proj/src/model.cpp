#include "cscdyn/model.hpp"

#include <cmath>
#include <string>

#include "cscdyn/errors.hpp"

namespace cscdyn {

void ModelParams::validate() const {
  if (!std::isfinite(d) || d <= 0.0) throw DomainError("params: d > 0 required, got " + std::to_string(d));
  if (!std::isfinite(alpha) || alpha <= 0.0) {
    throw DomainError("params: alpha > 0 required, got " + std::to_string(alpha));
  }
  if (!std::isfinite(delta) || delta < 0.0 || delta > 1.0) {
    throw DomainError("params: 0 <= delta <= 1 required, got " + std::to_string(delta));
  }
  domain.validate();
}

}  // namespace cscdyn
