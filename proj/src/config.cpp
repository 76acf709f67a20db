#include "coronakit/config.hpp"

#include <cmath>

#include "coronakit/errors.hpp"
#include "coronakit/function_core.hpp"

namespace coronakit {

void validate(const RunConfig& c, int data_degree) {
  if (!is_power_of_two(c.boundary_samples))
    fail(ErrorKind::Invalid, "boundary grid G must be a power of two");
  if (data_degree < 0) fail(ErrorKind::Invalid, "negative data degree");
  const int g_degree = c.degree < 0 ? 2 * data_degree + 16 : c.degree;
  const int degree = std::max(data_degree, g_degree);
  if (c.boundary_samples < 2 * (degree + 1))
    fail(ErrorKind::Invalid, "boundary grid G must be at least 2(N+1)");
  if (c.degree < -1) fail(ErrorKind::Invalid, "truncation degree must be -1 or non-negative");
  if (c.radial < 4) fail(ErrorKind::Invalid, "radial grid R must be at least 4");
  if (c.angular < 2 || c.angular % 2 != 0) fail(ErrorKind::Invalid, "angular grid Q must be even");
  if (c.order < 0) fail(ErrorKind::Invalid, "smoothness order n must be non-negative");
  for (double t : {c.tol_bezout, c.tol_dbar, c.tol_norm})
    if (!(t > 0.0) || !std::isfinite(t)) fail(ErrorKind::Invalid, "tolerances must be positive");
}

}  // namespace coronakit
