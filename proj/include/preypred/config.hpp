#pragma once

#include <iosfwd>
#include <string>

#include "preypred/model.hpp"

namespace preypred {

// Flat key-value model config. Recognized keys:
//   r, K, a, eps, omega, m          (constant mortality)
//   m_a0, m_b0, m_rate              (cosine mortality m(t) = a0 + b0*cos(rate*t))
// One `key = value` pair per line, '#' comments. Unknown keys are errors, as
// is mixing `m` with the cosine keys. Values are parsed as exact decimals.
ModelParams load_params(std::istream& in);
ModelParams load_params_file(const std::string& path);
void save_params(const ModelParams& p, std::ostream& out);

} // namespace preypred
