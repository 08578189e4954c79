#include "horokit/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace horokit {

std::string format_sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12e", v);
  return buf;
}

std::string csv_table(const std::vector<CsvRow>& rows) {
  // parameter columns: union of names over all rows, in order of first appearance
  std::vector<std::string> names;
  for (const auto& r : rows)
    for (const auto& [name, _] : r.params)
      if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(name);
  std::ostringstream os;
  os << "experiment_id,space";
  for (const auto& name : names) os << ',' << name;
  os << ",value_re,value_im,err_est,truth,rel_err,pass\n";
  for (const auto& r : rows) {
    os << r.experiment_id << ',' << r.space;
    for (const auto& name : names) {
      os << ',';
      for (const auto& [pn, val] : r.params)
        if (pn == name) {
          os << val;
          break;
        }
    }
    os << ',' << format_sci(r.value.real()) << ',' << format_sci(r.value.imag()) << ','
       << format_sci(r.err_est) << ',';
    os << (r.has_truth ? format_sci(r.truth) : std::string("nan")) << ',';
    os << (r.has_truth ? format_sci(r.rel_err) : std::string("nan")) << ',';
    os << (r.pass ? "1" : "0") << '\n';
  }
  return os.str();
}

void write_text_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw input_error("write_text_atomic: cannot open " + tmp.string());
    os << content;
    if (!os.good()) throw input_error("write_text_atomic: write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

uint64_t fnv1a(const std::string& data) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string svg_polyline(const std::vector<double>& xs, const std::vector<double>& ys,
                         const std::string& title, bool logy) {
  const int W = 640, H = 400, M = 50;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << title
     << "</text>\n";
  if (xs.size() == ys.size() && xs.size() >= 2) {
    auto tr = [&](double v, bool log_axis) { return log_axis ? std::log10(std::max(v, 1e-300)) : v; };
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (size_t i = 0; i < xs.size(); ++i) {
      xmin = std::min(xmin, xs[i]);
      xmax = std::max(xmax, xs[i]);
      ymin = std::min(ymin, tr(ys[i], logy));
      ymax = std::max(ymax, tr(ys[i], logy));
    }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    os << "<polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"2\" points=\"";
    for (size_t i = 0; i < xs.size(); ++i) {
      const double px = M + (W - 2 * M) * (xs[i] - xmin) / (xmax - xmin);
      const double py = H - M - (H - 2 * M) * (tr(ys[i], logy) - ymin) / (ymax - ymin);
      os << format_sci(px) << ',' << format_sci(py) << ' ';
    }
    os << "\"/>\n";
    os << "<line x1=\"" << M << "\" y1=\"" << H - M << "\" x2=\"" << W - M << "\" y2=\"" << H - M
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << M << "\" y1=\"" << M << "\" x2=\"" << M << "\" y2=\"" << H - M
       << "\" stroke=\"black\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace horokit
