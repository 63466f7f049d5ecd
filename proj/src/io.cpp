#include "diffspec/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace diffspec::io {
namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_real(std::string_view field, std::size_t line) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    throw CsvError(line, "cannot parse '" + std::string(field) + "' as a real number");
  }
  if (!std::isfinite(v)) throw CsvError(line, "non-finite value '" + std::string(field) + "'");
  return v;
}

int parse_label(std::string_view field, std::size_t line) {
  field = trim(field);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    throw CsvError(line, "cannot parse label '" + std::string(field) + "' as an integer");
  }
  if (v < 0) throw CsvError(line, "labels must be nonnegative");
  return v;
}

nlohmann::ordered_json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

PointCloud read_cloud_csv(std::istream& in, std::size_t max_points) {
  std::string text;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, text)) {
    ++line_no;
    if (line_no == 1 && text.size() >= 3 && text.compare(0, 3, "\xEF\xBB\xBF") == 0) text.erase(0, 3);
    if (trim(text).empty()) continue;
    for (auto f : split_commas(text)) header.emplace_back(trim(f));
    break;
  }
  if (header.empty()) throw CsvError(0, "empty file: missing header");
  const bool has_label = header.back() == "label";
  const std::size_t dim = header.size() - (has_label ? 1 : 0);
  if (dim == 0) throw CsvError(line_no, "header has no feature columns");

  std::vector<double> values;
  Labels labels;
  std::size_t rows = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (trim(text).empty()) continue;
    const auto fields = split_commas(text);
    if (fields.size() != header.size()) {
      throw CsvError(line_no, "expected " + std::to_string(header.size()) + " fields, found " +
                                  std::to_string(fields.size()));
    }
    if (++rows > max_points) {
      throw CsvError(line_no, "more than " + std::to_string(max_points) +
                                  " points; raise the point cap to load this file");
    }
    for (std::size_t j = 0; j < dim; ++j) values.push_back(parse_real(fields[j], line_no));
    if (has_label) labels.push_back(parse_label(fields.back(), line_no));
  }
  if (rows == 0) throw CsvError(0, "file has a header but no data rows");

  Matrix pts(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(dim));
  std::copy(values.begin(), values.end(), pts.data());
  std::optional<Labels> lbl;
  if (has_label) lbl = std::move(labels);
  return PointCloud(std::move(pts), std::move(lbl));
}

PointCloud read_cloud_csv_file(const std::string& path, std::size_t max_points) {
  std::ifstream in(path);
  if (!in) throw CsvError(0, "cannot open '" + path + "'");
  return read_cloud_csv(in, max_points);
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void write_cloud_csv(std::ostream& out, const PointCloud& cloud) {
  const auto dim = static_cast<Eigen::Index>(cloud.dim());
  for (Eigen::Index j = 0; j < dim; ++j) {
    if (j) out << ',';
    out << 'f' << j;
  }
  if (cloud.labels) out << ",label";
  out << '\n';
  for (Eigen::Index i = 0; i < cloud.points.rows(); ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      if (j) out << ',';
      out << format_double(cloud.points(i, j));
    }
    if (cloud.labels) out << ',' << (*cloud.labels)[static_cast<std::size_t>(i)];
    out << '\n';
  }
}

nlohmann::ordered_json entropy_report_json(const EntropyReport& r, std::optional<std::uint64_t> seed) {
  nlohmann::ordered_json j;
  j["method"] = method_name(r.method);
  j["value_bits"] = r.value;
  j["t"] = optional_number(r.t);
  j["sigma"] = optional_number(r.sigma);
  if (r.sigma) {
    j["sigma_policy"] = r.sigma_explicit ? "explicit" : "median";
  } else {
    j["sigma_policy"] = nullptr;
  }
  j["n"] = r.n;
  j["d"] = r.dim;
  j["seed"] = seed ? nlohmann::ordered_json(*seed) : nlohmann::ordered_json(nullptr);
  if (r.method == EntropyMethod::CSE) {
    j["bins_per_dim"] = r.bins_per_dim ? nlohmann::ordered_json(*r.bins_per_dim) : nlohmann::ordered_json(nullptr);
  } else {
    j["eigenvalue_summary"] = {{"top10", r.top_eigenvalues}, {"clamped_count", r.clamped_count}};
  }
  return j;
}

nlohmann::ordered_json mi_report_json(const MIReport& r) {
  nlohmann::ordered_json j;
  const bool diffusion = r.method == "DSMI";
  j["method"] = r.method;
  j["value_bits"] = r.value;
  j["t"] = diffusion ? nlohmann::ordered_json(r.t) : nlohmann::ordered_json(nullptr);
  j["sigma"] = diffusion ? optional_number(r.sigma) : nlohmann::ordered_json(nullptr);
  if (!diffusion) {
    j["sigma_policy"] = nullptr;
  } else if (r.sigma_explicit) {
    j["sigma_policy"] = "explicit";
  } else {
    j["sigma_policy"] = sigma_policy_name(r.sigma_policy);
  }
  j["n"] = r.n;
  j["d"] = r.dim;
  j["seed"] = diffusion ? nlohmann::ordered_json(r.seed) : nlohmann::ordered_json(nullptr);
  if (diffusion) {
    j["repeats"] = r.repeats;
  } else {
    j["bins_per_dim"] = r.bins_per_dim;
  }
  j["labels_derived"] = r.labels_derived;
  j["per_class"] = {{"class_sizes", r.class_sizes},
                    {"conditional_entropies", r.conditional_entropies},
                    {"unconditional_entropies", r.unconditional_entropies}};
  if (diffusion) j["per_class"]["sigmas"] = r.sigmas;
  j["warnings"] = r.warnings;
  return j;
}

}  // namespace diffspec::io
