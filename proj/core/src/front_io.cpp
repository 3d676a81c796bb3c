#include <ostream>

#include "chromdev/pareto.hpp"
#include "chromdev/text.hpp"

namespace chromdev::pareto {

void write_front_csv(std::ostream& out, const ParetoFront& front) {
  for (std::size_t j = 0; j < kProcessParamCount; ++j) out << (j ? "," : "") << 'X' << (j + 1);
  for (const auto& name : front.objective_names) out << ',' << name;
  out << ",feasible\n";
  for (const auto& s : front.solutions) {
    for (std::size_t j = 0; j < kProcessParamCount; ++j) out << (j ? "," : "") << text::sig6(s.x[j]);
    for (double v : s.objectives) out << ',' << text::sig6(v);
    out << ',' << (s.feasible ? "true" : "false") << '\n';
  }
}

}  // namespace chromdev::pareto
