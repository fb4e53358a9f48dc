#include "nnac/ampc/armijo.hpp"

#include "nnac/errors.hpp"

namespace nnac::ampc {

void ArmijoParams::validate() const {
  if (!(eta0 > 0.0)) throw ConfigError("Armijo eta0 must be positive");
  if (!(shrink > 0.0 && shrink < 1.0)) throw ConfigError("Armijo shrink must lie in (0, 1)");
  if (!(c > 0.0 && c < 1.0)) throw ConfigError("Armijo c must lie in (0, 1)");
  if (max_shrinks < 0) throw ConfigError("Armijo max_shrinks must be non-negative");
}

}  // namespace nnac::ampc
