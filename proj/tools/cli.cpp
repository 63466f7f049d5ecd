#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "diffspec/classic.hpp"
#include "diffspec/dsmi.hpp"
#include "diffspec/error.hpp"
#include "diffspec/harness.hpp"
#include "diffspec/io.hpp"
#include "diffspec/spectrum.hpp"
#include "diffspec/sweep.hpp"
#include "diffspec/synth.hpp"

namespace diffspec::cli {
namespace {

struct Options {
  std::string input;
  std::string repr;
  std::string output;
  std::string config;
  double t = 1.0;
  std::string sigma = "median";
  std::size_t repeats = kDefaultRepeats;
  std::uint64_t seed = 0;
  std::string sigma_policy = "global";
  std::size_t clusters = 0;
  std::size_t bins = 2;
  std::size_t max_points = kDefaultMaxPoints;

  std::string family;
  std::size_t n = 500;
  std::size_t k = 3;
  std::size_t dim = 3;
  std::size_t ambient_dim = 64;
  double separation = 50.0;
  std::optional<double> noise;
  double corruption = 0.0;
  double w = 0.5;
  bool no_rotate = false;
};

KernelConfig kernel_config(const Options& o) {
  KernelConfig kc;
  kc.max_points = o.max_points;
  if (o.sigma == "median") return kc;
  double v = 0.0;
  const char* end = o.sigma.data() + o.sigma.size();
  const auto [ptr, ec] = std::from_chars(o.sigma.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v) || !(v > 0.0)) {
    throw InvalidInput("--sigma must be a positive number or 'median', got '" + o.sigma + "'");
  }
  kc.sigma = v;
  return kc;
}

DsmiOptions dsmi_options(const Options& o) {
  DsmiOptions d;
  d.t = o.t;
  d.repeats = o.repeats;
  d.seed = o.seed;
  d.sigma_policy = o.sigma_policy == "subset" ? SigmaPolicy::PerSubset : SigmaPolicy::Global;
  return d;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw InvalidInput("cannot open output file '" + path + "'");
  file << text;
  if (!file) throw InvalidInput("failed writing output file '" + path + "'");
}

std::string json_text(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

PointCloud load(const Options& o, const std::string& path) { return io::read_cloud_csv_file(path, o.max_points); }

int cmd_dse(const Options& o, std::ostream& out) {
  const PointCloud cloud = load(o, o.input);
  const EntropyReport r = dse_of_cloud(cloud, kernel_config(o), o.t);
  emit(json_text(io::entropy_report_json(r, o.seed)), o.output, out);
  return kExitOk;
}

int cmd_dsmi(const Options& o, std::ostream& out) {
  const PointCloud cloud = load(o, o.input);
  if (!cloud.has_labels()) throw InvalidInput("dsmi needs a 'label' column in " + o.input);
  const MIReport r = dsmi(cloud, kernel_config(o), dsmi_options(o));
  emit(json_text(io::mi_report_json(r)), o.output, out);
  return kExitOk;
}

int cmd_dsmi_input(const Options& o, std::ostream& out) {
  const PointCloud repr = load(o, o.repr);
  const PointCloud input = load(o, o.input);
  const MIReport r = dsmi_with_input(repr, input, o.clusters, kernel_config(o), dsmi_options(o));
  auto j = io::mi_report_json(r);
  j["clustering"] = {{"clusters", o.clusters}, {"sigma_policy", "median"}, {"seed", o.seed}};
  emit(json_text(j), o.output, out);
  return kExitOk;
}

int cmd_cse(const Options& o, std::ostream& out) {
  const PointCloud cloud = load(o, o.input);
  const EntropyReport r = cse(cloud, {o.bins});
  emit(json_text(io::entropy_report_json(r, o.seed)), o.output, out);
  return kExitOk;
}

int cmd_csmi(const Options& o, std::ostream& out) {
  const PointCloud cloud = load(o, o.input);
  if (!cloud.has_labels()) throw InvalidInput("csmi needs a 'label' column in " + o.input);
  const MIReport r = csmi(cloud, {o.bins});
  emit(json_text(io::mi_report_json(r)), o.output, out);
  return kExitOk;
}

int cmd_generate(const Options& o, std::ostream& out) {
  PointCloud cloud;
  if (o.family == "blobs") {
    cloud = synth::gen_blobs(o.n, o.k, o.dim, o.separation, o.noise.value_or(1.0), o.seed);
  } else if (o.family == "tree") {
    cloud = synth::gen_tree(o.n, o.k, o.dim, o.noise.value_or(0.05), o.seed);
  } else if (o.family == "psd_identity_mix") {
    cloud.points = synth::gen_psd_identity_mix(o.n, o.w, o.seed);
  } else {
    synth::ManifoldOptions mo;
    mo.dist = o.family == "uniform_manifold" ? synth::Distribution::Uniform : synth::Distribution::Gaussian;
    mo.noise_level = o.noise.value_or(0.0);
    mo.rotate = !o.no_rotate;
    cloud = synth::gen_manifold(o.n, o.dim, o.ambient_dim, mo, o.seed);
  }
  if (cloud.labels && o.corruption > 0.0) {
    cloud.labels = synth::corrupt_labels(*cloud.labels, o.corruption, static_cast<int>(o.k), o.seed + 1);
  }
  std::ostringstream text;
  io::write_cloud_csv(text, cloud);
  emit(text.str(), o.output, out);
  return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  std::ifstream file(o.config);
  if (!file) throw InvalidInput("cannot open sweep config '" + o.config + "'");
  const SweepConfig cfg = parse_sweep_config(file);
  std::ostringstream text;
  write_sweep_csv(text, run_sweep(cfg));
  emit(text.str(), o.output, out);
  return kExitOk;
}

int cmd_claims(const Options& o, std::ostream& out) {
  HarnessOptions h;
  h.seed = o.seed;
  h.on_claim = [&](const ClaimCheck& c) {
    out << (c.passed ? "PASS " : "FAIL ") << c.claim_id << ": " << c.detail << '\n' << std::flush;
  };
  const auto claims = run_all_claims(h);
  if (!o.output.empty()) {
    std::ostringstream text;
    write_claims_csv(text, claims);
    emit(text.str(), o.output, out);
  }
  const bool ok = std::all_of(claims.begin(), claims.end(), [](const ClaimCheck& c) { return c.passed; });
  return ok ? kExitOk : kExitClaimsFailed;
}

void add_kernel_flags(CLI::App* sub, Options& o) {
  sub->add_option("--t", o.t, "Diffusion time")->capture_default_str();
  sub->add_option("--sigma", o.sigma, "Kernel bandwidth, or 'median'")->capture_default_str();
  sub->add_option("--max-points", o.max_points, "Largest accepted cloud")->capture_default_str();
}

void add_dsmi_flags(CLI::App* sub, Options& o) {
  sub->add_option("--repeats", o.repeats, "Subsamples per unconditional entropy")->capture_default_str();
  sub->add_option("--sigma-policy", o.sigma_policy, "Median sigma reuse: global or subset")
      ->check(CLI::IsMember({"global", "subset"}))
      ->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Diffusion spectral entropy and mutual information", "diffspec"};
  app.require_subcommand(1);
  Options o;
  std::function<int(const Options&, std::ostream&)> command;

  auto* dse_cmd = app.add_subcommand("dse", "Diffusion spectral entropy of a point cloud");
  dse_cmd->add_option("--input", o.input, "CSV point cloud")->required();
  add_kernel_flags(dse_cmd, o);
  dse_cmd->callback([&] { command = cmd_dse; });

  auto* dsmi_cmd = app.add_subcommand("dsmi", "Diffusion spectral mutual information with the label column");
  dsmi_cmd->add_option("--input", o.input, "CSV point cloud with a label column")->required();
  add_kernel_flags(dsmi_cmd, o);
  add_dsmi_flags(dsmi_cmd, o);
  dsmi_cmd->callback([&] { command = cmd_dsmi; });

  auto* input_cmd = app.add_subcommand("dsmi-input", "DSMI against spectral clusters of an input cloud");
  input_cmd->add_option("--repr", o.repr, "CSV representation cloud")->required();
  input_cmd->add_option("--input", o.input, "CSV input cloud, same row count")->required();
  input_cmd->add_option("--clusters", o.clusters, "Number of clusters")->required();
  add_kernel_flags(input_cmd, o);
  add_dsmi_flags(input_cmd, o);
  input_cmd->callback([&] { command = cmd_dsmi_input; });

  auto* cse_cmd = app.add_subcommand("cse", "Binned Shannon entropy");
  cse_cmd->add_option("--input", o.input, "CSV point cloud")->required();
  cse_cmd->add_option("--bins", o.bins, "Bins per dimension")->capture_default_str();
  cse_cmd->add_option("--max-points", o.max_points, "Largest accepted cloud")->capture_default_str();
  cse_cmd->callback([&] { command = cmd_cse; });

  auto* csmi_cmd = app.add_subcommand("csmi", "Binned Shannon mutual information with the label column");
  csmi_cmd->add_option("--input", o.input, "CSV point cloud with a label column")->required();
  csmi_cmd->add_option("--bins", o.bins, "Bins per dimension")->capture_default_str();
  csmi_cmd->add_option("--max-points", o.max_points, "Largest accepted cloud")->capture_default_str();
  csmi_cmd->callback([&] { command = cmd_csmi; });

  auto* gen_cmd = app.add_subcommand("generate", "Write a synthetic point cloud");
  gen_cmd->add_option("--family", o.family, "Generator")
      ->required()
      ->check(CLI::IsMember({"blobs", "tree", "uniform_manifold", "gaussian_manifold", "psd_identity_mix"}));
  gen_cmd->add_option("--n", o.n, "Number of points")->capture_default_str();
  gen_cmd->add_option("--k", o.k, "Blobs or tree branches")->capture_default_str();
  gen_cmd->add_option("--dim", o.dim, "Blob/tree dimension, or manifold intrinsic dimension")
      ->capture_default_str();
  gen_cmd->add_option("--ambient-dim", o.ambient_dim, "Manifold ambient dimension")->capture_default_str();
  gen_cmd->add_option("--separation", o.separation, "Blob center scale")->capture_default_str();
  gen_cmd->add_option("--noise", o.noise,
                      "Noise std (blobs 1, tree 0.05) or manifold noise level (0)");
  gen_cmd->add_option("--corruption", o.corruption, "Fraction of labels resampled")->capture_default_str();
  gen_cmd->add_option("--w", o.w, "Identity weight for psd_identity_mix")->capture_default_str();
  gen_cmd->add_flag("--no-rotate", o.no_rotate, "Keep manifold coordinates axis-aligned");
  gen_cmd->callback([&] { command = cmd_generate; });

  auto* sweep_cmd = app.add_subcommand("sweep", "Run a parameter sweep, long-format CSV out");
  sweep_cmd->add_option("--config", o.config, "key = value sweep file")->required();
  sweep_cmd->callback([&] { command = cmd_sweep; });

  auto* claims_cmd = app.add_subcommand("claims", "Run the claim suite");
  claims_cmd->callback([&] { command = cmd_claims; });

  for (auto* sub : {dse_cmd, dsmi_cmd, input_cmd, cse_cmd, csmi_cmd, gen_cmd, claims_cmd}) {
    sub->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  }
  for (auto* sub : {dse_cmd, dsmi_cmd, input_cmd, cse_cmd, csmi_cmd, gen_cmd, sweep_cmd, claims_cmd}) {
    sub->add_option("--output", o.output, "Output file (default stdout)");
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    return command(o, out);
  } catch (const io::CsvError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
}

}  // namespace diffspec::cli
