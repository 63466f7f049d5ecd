#include <algorithm>
#include <sstream>

#include <gtest/gtest.h>

#include "diffspec/error.hpp"
#include "diffspec/sweep.hpp"

using namespace diffspec;

namespace {

SweepConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_sweep_config(in);
}

std::string error_of(const std::string& text) {
  try {
    validate_sweep(parse(text));
  } catch (const InvalidInput& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(SweepConfig, ParsesKeysAndComments) {
  const SweepConfig c = parse(
      "# noise sweep\n"
      "family = tree\n"
      "vary = noise   # swept\n"
      "grid = 0.01, 0.1,1\n"
      "methods = dse,dsmi\n"
      "seeds = 3,4\n"
      "sigma = 2.5\n"
      "sigma_policy = subset\n"
      "rotate = false\n"
      "\n"
      "n = 120\n");
  EXPECT_EQ(c.family, "tree");
  EXPECT_EQ(c.vary, "noise");
  EXPECT_EQ(c.grid, (std::vector<double>{0.01, 0.1, 1.0}));
  EXPECT_EQ(c.methods, (std::vector<std::string>{"dse", "dsmi"}));
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{3, 4}));
  ASSERT_TRUE(c.sigma.has_value());
  EXPECT_EQ(*c.sigma, 2.5);
  EXPECT_EQ(c.sigma_policy, SigmaPolicy::PerSubset);
  EXPECT_FALSE(c.rotate);
  EXPECT_EQ(c.numeric.at("n"), 120.0);
  EXPECT_FALSE(parse("sigma = median\n").sigma.has_value());
}

TEST(SweepConfig, ErrorsNameTheLine) {
  const auto message = [](const std::string& text) {
    try {
      parse(text);
    } catch (const InvalidInput& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(message("family = blobs\n\nbogus = 1\n").find("line 3: unknown key"), std::string::npos);
  EXPECT_NE(message("grid = 1,x\n").find("line 1"), std::string::npos);
  EXPECT_NE(message("family = torus\n").find("unknown family"), std::string::npos);
  EXPECT_NE(message("methods = dse,mine\n").find("unknown method"), std::string::npos);
  EXPECT_NE(message("no equals sign\n").find("line 1"), std::string::npos);
}

TEST(SweepConfig, Validation) {
  EXPECT_NE(error_of("methods = dse\ngrid = 1\n").find("vary"), std::string::npos);
  EXPECT_NE(error_of("vary = sigma\ngrid = 1\nmethods = dse\n").find("not a numeric parameter"), std::string::npos);
  EXPECT_NE(error_of("family = uniform_manifold\nvary = d\ngrid = 2\nmethods = dsmi\n").find("labeled family"),
            std::string::npos);
  EXPECT_NE(error_of("family = psd_identity_mix\nvary = w\ngrid = 0.5\nmethods = cse\n").find("only the dse"),
            std::string::npos);
  EXPECT_EQ(error_of("vary = k\ngrid = 2,3\nmethods = dse\n"), "");
  EXPECT_GT(sweep_numeric_keys().count("separation"), 0u);
}

TEST(Sweep, RowsFollowGridSeedMethodOrder) {
  SweepConfig c = parse(
      "family = blobs\n"
      "vary = k\n"
      "grid = 2,3\n"
      "methods = dse,cse,dsmi\n"
      "seeds = 0,1\n"
      "n = 60\n"
      "d = 3\n"
      "repeats = 2\n");
  const auto rows = run_sweep(c);
  ASSERT_EQ(rows.size(), 12u);
  EXPECT_EQ(rows[0].variable, "k");
  EXPECT_EQ(rows[0].grid_value, 2.0);
  EXPECT_EQ(rows[0].method, "dse");
  EXPECT_EQ(rows[1].method, "cse");
  EXPECT_EQ(rows[2].method, "dsmi");
  EXPECT_EQ(rows[3].seed, 1u);
  EXPECT_EQ(rows[6].grid_value, 3.0);
  for (const auto& r : rows) EXPECT_GE(r.runtime_ms, 0.0);

  // Values are deterministic; only timings vary.
  const auto again = run_sweep(c);
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(rows[i].value_bits, again[i].value_bits);

  std::ostringstream out;
  write_sweep_csv(out, rows);
  const std::string text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "variable,grid_value,method,seed,value_bits,runtime_ms");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 13);
}

TEST(Sweep, PsdIdentityMixMatchesWeightEndpoints) {
  const SweepConfig c = parse("family = psd_identity_mix\nvary = w\ngrid = 1\nmethods = dse\nn = 16\n");
  const auto rows = run_sweep(c);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_NEAR(rows[0].value_bits, 4.0, 1e-12);
}
