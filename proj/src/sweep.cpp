#include "diffspec/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "diffspec/ablation.hpp"
#include "diffspec/classic.hpp"
#include "diffspec/error.hpp"
#include "diffspec/io.hpp"
#include "diffspec/spectrum.hpp"
#include "diffspec/synth.hpp"

namespace diffspec {
namespace {

const std::set<std::string> kFamilies{"blobs", "tree", "uniform_manifold", "gaussian_manifold",
                                      "psd_identity_mix"};
const std::set<std::string> kMethods{"dse", "cse", "dsmi", "csmi", "dmee", "knn", "gaussian"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_number(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InvalidInput("sweep config line " + std::to_string(line) + ": '" + s + "' is not a number");
  }
}

std::size_t as_count(double v, const char* name) {
  if (!(v >= 0.0) || v != std::floor(v)) {
    throw InvalidInput(std::string("sweep parameter ") + name + " must be a nonnegative integer");
  }
  return static_cast<std::size_t>(v);
}

double default_noise(const std::string& family) {
  if (family == "blobs") return 1.0;
  if (family == "tree") return 0.05;
  return 0.0;
}

bool labeled_family(const std::string& family) { return family == "blobs" || family == "tree"; }

}  // namespace

const std::map<std::string, double>& sweep_numeric_keys() {
  static const std::map<std::string, double> keys{
      {"n", 500},        {"k", 3},    {"d", 2},       {"D", 16},     {"separation", 50},
      {"noise", 0},      {"corruption", 0}, {"t", 1}, {"repeats", 5}, {"bins", 2},
      {"knn_k", 10},     {"w", 0.5},
  };
  return keys;
}

SweepConfig parse_sweep_config(std::istream& in) {
  SweepConfig cfg;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (const auto hash = text.find('#'); hash != std::string::npos) text.erase(hash);
    text = trim(text);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw InvalidInput("sweep config line " + std::to_string(line) + ": expected key = value");
    }
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key == "family") {
      if (!kFamilies.count(value)) {
        throw InvalidInput("sweep config line " + std::to_string(line) + ": unknown family '" + value + "'");
      }
      cfg.family = value;
    } else if (key == "vary") {
      cfg.vary = value;
    } else if (key == "grid") {
      cfg.grid.clear();
      for (const auto& v : split_list(value)) cfg.grid.push_back(to_number(v, line));
    } else if (key == "methods") {
      cfg.methods = split_list(value);
      for (const auto& m : cfg.methods) {
        if (!kMethods.count(m)) {
          throw InvalidInput("sweep config line " + std::to_string(line) + ": unknown method '" + m + "'");
        }
      }
    } else if (key == "seeds") {
      cfg.seeds.clear();
      for (const auto& v : split_list(value)) {
        cfg.seeds.push_back(static_cast<std::uint64_t>(as_count(to_number(v, line), "seeds")));
      }
    } else if (key == "sigma") {
      if (value == "median") {
        cfg.sigma.reset();
      } else {
        cfg.sigma = to_number(value, line);
      }
    } else if (key == "sigma_policy") {
      if (value == "global") {
        cfg.sigma_policy = SigmaPolicy::Global;
      } else if (value == "subset") {
        cfg.sigma_policy = SigmaPolicy::PerSubset;
      } else {
        throw InvalidInput("sweep config line " + std::to_string(line) + ": sigma_policy must be global or subset");
      }
    } else if (key == "rotate") {
      if (value != "true" && value != "false") {
        throw InvalidInput("sweep config line " + std::to_string(line) + ": rotate must be true or false");
      }
      cfg.rotate = value == "true";
    } else if (sweep_numeric_keys().count(key)) {
      cfg.numeric[key] = to_number(value, line);
    } else {
      throw InvalidInput("sweep config line " + std::to_string(line) + ": unknown key '" + key + "'");
    }
  }
  return cfg;
}

void validate_sweep(const SweepConfig& cfg) {
  if (!kFamilies.count(cfg.family)) throw InvalidInput("unknown family '" + cfg.family + "'");
  if (cfg.vary.empty()) throw InvalidInput("sweep config needs `vary`");
  if (!sweep_numeric_keys().count(cfg.vary)) {
    throw InvalidInput("cannot vary '" + cfg.vary + "': not a numeric parameter");
  }
  if (cfg.grid.empty()) throw InvalidInput("sweep config needs a non-empty `grid`");
  if (cfg.methods.empty()) throw InvalidInput("sweep config needs `methods`");
  if (cfg.seeds.empty()) throw InvalidInput("sweep config needs at least one seed");
  for (const auto& m : cfg.methods) {
    if (!kMethods.count(m)) throw InvalidInput("unknown method '" + m + "'");
    if (cfg.family == "psd_identity_mix" && m != "dse") {
      throw InvalidInput("family psd_identity_mix supports only the dse method");
    }
    if ((m == "dsmi" || m == "csmi") && !labeled_family(cfg.family)) {
      throw InvalidInput("method " + m + " needs a labeled family (blobs or tree)");
    }
  }
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
  validate_sweep(cfg);
  std::vector<SweepRow> rows;
  using Clock = std::chrono::steady_clock;
  for (double gv : cfg.grid) {
    std::map<std::string, double> p = sweep_numeric_keys();
    p["noise"] = default_noise(cfg.family);
    for (const auto& [k, v] : cfg.numeric) p[k] = v;
    p[cfg.vary] = gv;

    const std::size_t n = as_count(p["n"], "n");
    const double t = p["t"];
    KernelConfig kc;
    kc.sigma = cfg.sigma;
    for (std::uint64_t seed : cfg.seeds) {
      PointCloud cloud;
      Eigen::MatrixXd psd;
      if (cfg.family == "blobs") {
        cloud = synth::gen_blobs(n, as_count(p["k"], "k"), as_count(p["D"], "D"), p["separation"],
                                 p["noise"], seed);
      } else if (cfg.family == "tree") {
        cloud = synth::gen_tree(n, as_count(p["k"], "k"), as_count(p["D"], "D"), p["noise"], seed);
      } else if (cfg.family == "psd_identity_mix") {
        psd = synth::gen_psd_identity_mix(n, p["w"], seed);
      } else {
        synth::ManifoldOptions mo;
        mo.dist = cfg.family == "uniform_manifold" ? synth::Distribution::Uniform
                                                   : synth::Distribution::Gaussian;
        mo.noise_level = p["noise"];
        mo.rotate = cfg.rotate;
        cloud = synth::gen_manifold(n, as_count(p["d"], "d"), as_count(p["D"], "D"), mo, seed);
      }
      if (cloud.labels && p["corruption"] > 0.0) {
        cloud.labels = synth::corrupt_labels(*cloud.labels, p["corruption"],
                                             static_cast<int>(as_count(p["k"], "k")), seed + 1);
      }

      for (const auto& m : cfg.methods) {
        const auto start = Clock::now();
        double value = 0.0;
        if (cfg.family == "psd_identity_mix") {
          value = dse(eigenvalues_symmetric(psd), t).value;
        } else if (m == "dse") {
          value = dse_of_cloud(cloud, kc, t).value;
        } else if (m == "cse") {
          value = cse(cloud, {as_count(p["bins"], "bins")}).value;
        } else if (m == "csmi") {
          value = csmi(cloud, {as_count(p["bins"], "bins")}).value;
        } else if (m == "dsmi") {
          DsmiOptions o;
          o.t = t;
          o.repeats = as_count(p["repeats"], "repeats");
          o.seed = seed;
          o.sigma_policy = cfg.sigma_policy;
          value = dsmi(cloud, kc, o).value;
        } else {
          const auto variants = ablation_entropies(cloud, as_count(p["knn_k"], "knn_k"), kc, t);
          const char* key = m == "dmee" ? "DMEE" : (m == "knn" ? "KNN" : "Gaussian");
          value = variants.at(key).value;
        }
        const double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
        rows.push_back({cfg.vary, gv, m, seed, value, ms});
      }
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "variable,grid_value,method,seed,value_bits,runtime_ms\n";
  for (const auto& r : rows) {
    out << r.variable << ',' << io::format_double(r.grid_value) << ',' << r.method << ','
        << r.seed << ',' << io::format_double(r.value_bits) << ',' << io::format_double(r.runtime_ms)
        << '\n';
  }
}

}  // namespace diffspec
