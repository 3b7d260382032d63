#include "percolab/csv.hpp"

#include <charconv>
#include <ostream>

namespace percolab {

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_estimate_row(std::ostream& os, const Graph& g, double p, std::string_view observable,
                        std::string_view k_or_gamma, const Estimate& e) {
  os << family_name(g.family()) << ',' << csv_field(g.params()) << ',' << format_double(p) << ','
     << csv_field(observable) << ',' << csv_field(k_or_gamma) << ',' << format_double(e.mean) << ','
     << format_double(e.std_error) << ',' << e.n_samples << ',' << e.seed << '\n';
}

}  // namespace percolab
