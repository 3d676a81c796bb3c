#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "chromdev/error.hpp"
#include "chromdev/rsm.hpp"
#include "chromdev/text.hpp"

namespace chromdev::rsm {

namespace {

std::string p_text(double p) { return std::isnan(p) ? "nan" : text::sig6(p); }

double parse_p(std::string_view s) {
  if (text::trim(s) == "nan") return std::numeric_limits<double>::quiet_NaN();
  return text::parse_double(s, "p-value");
}

std::string expect_key(std::istream& in, std::string_view key) {
  std::string line;
  while (std::getline(in, line)) {
    const auto t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto space = t.find(' ');
    if (t.substr(0, space) != key || space == std::string_view::npos) {
      throw Error(Errc::parse_error, "expected '" + std::string(key) + "' line, got '" + line + "'");
    }
    return std::string(text::trim(t.substr(space + 1)));
  }
  throw Error(Errc::parse_error, "model document ended before '" + std::string(key) + "'");
}

}  // namespace

void write_model_text(std::ostream& out, const RegressionModel& model) {
  out << "# response-surface model: symbol coefficient p_value\n";
  out << "response " << model.response_name << '\n';
  out << "n_observations " << model.n_observations << '\n';
  out << "r_squared " << text::sig6(model.r_squared) << '\n';
  out << "residual_sd " << text::sig6(model.residual_sd) << '\n';
  out << "terms " << model.terms.size() << '\n';
  for (std::size_t c = 0; c < model.terms.size(); ++c) {
    const double p = c < model.p_values.size() ? model.p_values[c]
                                               : std::numeric_limits<double>::quiet_NaN();
    out << model.terms[c].symbol() << ' ' << text::sig6(model.coefficients[c]) << ' '
        << p_text(p) << '\n';
  }
}

RegressionModel read_model_text(std::istream& in) {
  RegressionModel model;
  model.response_name = expect_key(in, "response");
  model.n_observations = static_cast<std::size_t>(
      text::parse_double(expect_key(in, "n_observations"), "n_observations"));
  model.r_squared = text::parse_double(expect_key(in, "r_squared"), "r_squared");
  model.residual_sd = text::parse_double(expect_key(in, "residual_sd"), "residual_sd");
  const auto count =
      static_cast<std::size_t>(text::parse_double(expect_key(in, "terms"), "term count"));
  std::string line;
  while (model.terms.size() < count && std::getline(in, line)) {
    const auto t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto fields = text::split(t, ' ');
    if (fields.size() != 3) throw Error(Errc::parse_error, "malformed term line '" + line + "'");
    model.terms.push_back(parse_term(fields[0]));
    model.coefficients.push_back(text::parse_double(fields[1], "coefficient"));
    model.p_values.push_back(parse_p(fields[2]));
  }
  if (model.terms.size() != count) {
    throw Error(Errc::parse_error, "model document lists fewer terms than declared");
  }
  return model;
}

}  // namespace chromdev::rsm
