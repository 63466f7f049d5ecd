#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli.hpp"
#include "diffspec/harness.hpp"

namespace fs = std::filesystem;
using namespace diffspec;

namespace {

// Scratch directory for one property evaluation.
struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("diffspec_accept_" + tag);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  return cli::run(args, out, err);
}

std::string generate_blobs(const TempDir& dir, std::uint64_t seed) {
  const std::string p = dir.file("blobs.csv");
  invoke({"generate", "--family", "blobs", "--n", "90", "--k", "3", "--dim", "3", "--seed", std::to_string(seed),
          "--output", p});
  return p;
}

std::vector<PropertyCheck> cli_properties() {
  std::vector<PropertyCheck> p;
  p.push_back({"cli.exit_codes", [](std::uint64_t seed) -> std::string {
                 TempDir dir("exit" + std::to_string(seed));
                 const std::string good = generate_blobs(dir, seed);
                 std::ofstream(dir.file("bad.csv")) << "a,b\n1,2\n3\n";
                 std::ofstream(dir.file("huge.csv")) << "a\n1e200\n-1e200\n0\n";
                 std::ofstream(dir.file("nolabel.csv")) << "a\n1\n2\n";
                 if (invoke({"dse", "--input", good}) != cli::kExitOk) return "valid input did not exit 0";
                 if (invoke({"dsmi", "--input", good}) != cli::kExitOk) return "valid dsmi did not exit 0";
                 if (invoke({"dse", "--input", dir.file("bad.csv")}) != cli::kExitInput) return "ragged csv not 2";
                 if (invoke({"dsmi", "--input", dir.file("nolabel.csv")}) != cli::kExitInput) return "missing labels not 2";
                 if (invoke({"dse", "--input", dir.file("huge.csv")}) != cli::kExitNumerical) return "overflow not 3";
                 if (invoke({"dse", "--bogus"}) != cli::kExitInput) return "unknown flag not 2";
                 return "";
               }});
  p.push_back({"cli.deterministic_reports", [](std::uint64_t seed) -> std::string {
                 TempDir dir("det" + std::to_string(seed));
                 const std::string input = generate_blobs(dir, seed);
                 for (const char* cmd : {"dse", "dsmi", "cse", "csmi"}) {
                   const std::string s = std::to_string(seed);
                   invoke({cmd, "--input", input, "--seed", s, "--output", dir.file("a.json")});
                   invoke({cmd, "--input", input, "--seed", s, "--output", dir.file("b.json")});
                   const std::string a = slurp(dir.file("a.json"));
                   if (a.empty() || a != slurp(dir.file("b.json"))) return std::string(cmd) + " report differs";
                 }
                 return "";
               }});
  p.push_back({"cli.generate_reproducible", [](std::uint64_t seed) -> std::string {
                 TempDir a("gen_a" + std::to_string(seed));
                 TempDir b("gen_b" + std::to_string(seed));
                 TempDir c("gen_c" + std::to_string(seed));
                 const std::string x = slurp(generate_blobs(a, seed));
                 if (x.empty()) return "generate wrote nothing";
                 if (x != slurp(generate_blobs(b, seed))) return "same seed differs";
                 if (x == slurp(generate_blobs(c, seed + 1))) return "different seeds agree";
                 return "";
               }});
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Runs every acceptance criterion and prints one line each", "acceptance"};
  std::string csv_path;
  std::uint64_t seed = 0;
  app.add_option("--csv", csv_path, "Write the claims table here");
  app.add_option("--seed", seed, "Master seed")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  const auto ids = claim_ids();
  HarnessOptions options;
  options.seed = seed;
  options.extra_properties = cli_properties();
  options.on_claim = [&](const ClaimCheck& c) {
    std::size_t number = 0;
    while (number < ids.size() && ids[number] != c.claim_id) ++number;
    std::cout << (c.passed ? "[PASS]" : "[FAIL]") << " criterion " << number + 1 << ' ' << c.claim_id << ": "
              << c.detail << " (" << static_cast<long>(c.runtime_ms) << " ms)\n"
              << std::flush;
  };
  const auto claims = run_all_claims(options);

  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    write_claims_csv(out, claims);
  }
  std::size_t passed = 0;
  for (const auto& c : claims) passed += c.passed ? 1 : 0;
  std::cout << passed << '/' << claims.size() << " criteria passed\n";
  return passed == claims.size() && claims.size() == ids.size() ? 0 : 1;
}
