#include "wgsim/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace wgsim::app {

std::string header_line(const std::string& hash) {
  return std::string("# wgsim ") + kToolVersion + " config_hash=" + hash + "\n";
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trajectory_csv(const std::string& hash, const std::vector<double>& z,
                           const std::vector<CorrelationSet>& rows) {
  require(z.size() == rows.size(), "trajectory z and row counts differ");
  std::string out = header_line(hash);
  out += "z_um";
  if (!rows.empty()) {
    for (std::size_t i = 0; i < rows.front().occupations.size(); ++i) out += ",n_" + std::to_string(i + 1);
    for (const auto& [i, j] : rows.front().pairs) out += ",g2_" + std::to_string(i + 1) + std::to_string(j + 1);
  }
  out += '\n';
  for (std::size_t t = 0; t < rows.size(); ++t) {
    out += format_number(z[t]);
    for (double n : rows[t].occupations) out += "," + format_number(n);
    for (const auto& g : rows[t].cross_g2) out += "," + format_number(g ? *g : std::nan(""));
    out += '\n';
  }
  return out;
}

std::string distribution_csv(const std::string& hash, const PhotonDistribution& dist) {
  std::string out = header_line(hash) + "n,p\n";
  for (std::size_t n = 0; n < dist.probabilities.size(); ++n) {
    out += std::to_string(n) + "," + format_number(dist.probabilities[n]) + "\n";
  }
  return out;
}

std::string wigner_csv(const std::string& hash, const WignerGrid& grid) {
  const auto& s = grid.spec;
  std::string out = header_line(hash);
  out += "# re " + format_number(s.re_min) + " " + format_number(s.re_max) + "\n";
  out += "# im " + format_number(s.im_min) + " " + format_number(s.im_max) + "\n";
  out += "# resolution " + std::to_string(s.resolution) + "\n";
  for (std::size_t r = 0; r < s.resolution; ++r) {
    for (std::size_t c = 0; c < s.resolution; ++c) {
      if (c) out += ',';
      out += format_number(grid.at(r, c));
    }
    out += '\n';
  }
  return out;
}

std::string wigner_pgm(const std::string& hash, const WignerGrid& grid) {
  const std::size_t n = grid.spec.resolution;
  const double scale = std::max(std::abs(grid.min()), std::abs(grid.max()));
  std::string out = "P2\n" + header_line(hash);
  out += std::to_string(n) + " " + std::to_string(n) + "\n255\n";
  // Image rows run top to bottom, so the largest imaginary part comes first.
  for (std::size_t r = n; r-- > 0;) {
    for (std::size_t c = 0; c < n; ++c) {
      const double u = scale > 0.0 ? grid.at(r, c) / scale : 0.0;
      const long level = std::lround(127.5 + 127.5 * u);
      if (c) out += ' ';
      out += std::to_string(std::clamp(level, 0L, 255L));
    }
    out += '\n';
  }
  return out;
}

std::string cutoff_csv(const std::string& hash, const std::vector<fock::CutoffRow>& rows) {
  std::string out = header_line(hash) + "cutoff,dimension,mse_g2,max_occupation_error\n";
  for (const auto& r : rows) {
    out += std::to_string(r.cutoff) + "," + std::to_string(r.dimension) + "," + format_number(r.mse_g2) + "," +
           format_number(r.max_occupation_error) + "\n";
  }
  return out;
}

std::string features_csv(const std::string& hash, const std::vector<qrc::FeatureRecord>& records) {
  std::string out = header_line(hash) + "x,y,label,n_1,n_2,n_3,n_4,g2_12,g2_13,g2_14,g2_23,g2_24,g2_34\n";
  for (const auto& r : records) {
    out += format_number(r.x) + "," + format_number(r.y) + "," + std::to_string(r.label);
    for (double v : r.vector()) out += "," + format_number(v);
    out += '\n';
  }
  return out;
}

std::string boundary_csv(const std::string& hash, const std::vector<qrc::BoundaryPoint>& points) {
  std::string out = header_line(hash) + "x,y,p\n";
  for (const auto& p : points) out += format_number(p.x) + "," + format_number(p.y) + "," + format_number(p.p) + "\n";
  return out;
}

std::string report_json(const std::string& hash, std::uint64_t seed, const qrc::ResampleSpec& spec,
                        const qrc::EvaluationReport& report, const std::vector<std::string>& warnings) {
  nlohmann::ordered_json doc;
  doc["tool"] = std::string("wgsim ") + kToolVersion;
  doc["config_hash"] = hash;
  doc["seed"] = seed;
  doc["n_resamples"] = spec.n_resamples;
  doc["train_per_class"] = spec.train_per_class;
  doc["test_per_class"] = spec.test_per_class;
  doc["variants"] = nlohmann::ordered_json::array();
  for (const auto& v : report.variants) {
    nlohmann::ordered_json item;
    item["name"] = v.name;
    item["features"] = qrc::to_string(v.mask);
    item["mean"] = v.mean;
    item["std"] = v.stddev;
    item["accuracies"] = v.accuracies;
    doc["variants"].push_back(std::move(item));
  }
  doc["warnings"] = warnings;
  return doc.dump(2) + "\n";
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << contents;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace wgsim::app
