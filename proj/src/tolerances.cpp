#include "qdiv/tolerances.hpp"

#include <cctype>
#include <cstdlib>
#include <string>

#include "qdiv/errors.hpp"

namespace qdiv {

void set_tolerance(Tolerances& tol, const std::string& key, double value) {
  if (!(value > 0.0)) throw ParameterError("tolerance '" + key + "' must be positive");
  if (key == "herm") tol.herm = value;
  else if (key == "psd") tol.psd = value;
  else if (key == "trace") tol.trace = value;
  else if (key == "num") tol.num = value;
  else if (key == "cluster") tol.cluster = value;
  else if (key == "supp") tol.supp = value;
  else throw ParameterError("unknown tolerance '" + key + "'");
}

Tolerances tolerances_from_environment(Tolerances base) {
  for (const char* key : {"herm", "psd", "trace", "num", "cluster", "supp"}) {
    std::string var = "QDIV_TOL_";
    for (const char* c = key; *c; ++c) var += static_cast<char>(std::toupper(*c));
    const char* raw = std::getenv(var.c_str());
    if (raw == nullptr || *raw == '\0') continue;
    char* end = nullptr;
    double value = std::strtod(raw, &end);
    if (end == raw || *end != '\0') throw ParameterError(var + " is not a number: " + raw);
    set_tolerance(base, key, value);
  }
  return base;
}

}  // namespace qdiv
