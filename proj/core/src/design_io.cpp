#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "chromdev/doe.hpp"
#include "chromdev/error.hpp"
#include "chromdev/text.hpp"

namespace chromdev::doe {

void write_design_csv(std::ostream& out, const DesignTable& design) {
  out << "run";
  for (std::size_t j = 0; j < design.factors.size(); ++j) out << ",X" << (j + 1);
  out << ",role,batch\n";
  for (std::size_t r = 0; r < design.rows.size(); ++r) {
    const auto& row = design.rows[r];
    out << (r + 1);
    for (double v : row.natural) out << ',' << text::sig6(v);
    out << ',' << to_string(row.role) << ',' << row.batch_id.value_or("") << '\n';
  }
}

DesignTable read_design_csv(std::istream& in, std::span<const FactorSpec> factors,
                            std::size_t dummy_count) {
  const std::size_t k = factors.size();
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::parse_error, "design CSV is empty");
  const auto header = text::split(text::trim(line), ',');
  if (header.size() != k + 3 || header.front() != "run" || header[k + 1] != "role" ||
      header[k + 2] != "batch") {
    throw Error(Errc::parse_error, "design CSV header does not match " + std::to_string(k) +
                                       " factors: '" + line + "'");
  }

  DesignTable table;
  table.factors.assign(factors.begin(), factors.end());
  table.dummy_count = dummy_count;
  table.kind = DesignKind::imported;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const auto cells = text::split(text::trim(line), ',');
    if (cells.size() != k + 3) {
      throw Error(Errc::parse_error, "design CSV line " + std::to_string(line_no) +
                                         " has " + std::to_string(cells.size()) + " fields");
    }
    DesignRow row;
    for (std::size_t j = 0; j < k; ++j) {
      const double v = text::parse_double(cells[j + 1], "X" + std::to_string(j + 1));
      row.natural.push_back(v);
      row.coded.push_back(factors[j].encode(v));
      if (std::abs(row.coded.back()) > 1.0 + 1e-9) row.out_of_bounds = true;
    }
    row.role = parse_row_role(text::trim(cells[k + 1]));
    const auto batch = text::trim(cells[k + 2]);
    if (!batch.empty()) row.batch_id = std::string(batch);
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace chromdev::doe
