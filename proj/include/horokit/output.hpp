#pragma once

// Result persistence: flat CSV tables (fixed %.12e formatting, byte-stable), atomic
// file writes (temp + rename), FNV-1a config hashing, and minimal SVG polyline plots.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "horokit/types.hpp"

namespace horokit {

struct CsvRow {
  std::string experiment_id;
  std::string space;
  std::vector<std::pair<std::string, std::string>> params;  // name -> formatted value
  cplx value{0.0, 0.0};
  double err_est = 0.0;
  bool has_truth = false;
  double truth = 0.0;
  double rel_err = 0.0;
  bool pass = true;
};

std::string format_sci(double v);  // fixed "%.12e"
std::string csv_table(const std::vector<CsvRow>& rows);
void write_text_atomic(const std::string& path, const std::string& content);
uint64_t fnv1a(const std::string& data);
std::string svg_polyline(const std::vector<double>& xs, const std::vector<double>& ys,
                         const std::string& title, bool logy = false);

}  // namespace horokit
