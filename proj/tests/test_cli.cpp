#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

// End-to-end drive of the command-line tool. The binary path arrives through
// the BUSSGANG_CLI environment variable, set by the test harness.

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "bussgang/serialize.hpp"

using json = nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string cli_path() {
  const char* p = std::getenv("BUSSGANG_CLI");
  REQUIRE_MESSAGE(p != nullptr, "BUSSGANG_CLI must point at the built binary");
  return p;
}

std::string temp_path(const std::string& name) {
  return "/tmp/bussgang_cli_test_" + std::to_string(::getpid()) + "_" + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run(const std::string& args) {
  RunResult r;
  const std::string err_file = temp_path("stderr");
  const std::string cmd = cli_path() + " " + args + " 2>" + err_file;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(err_file);
  std::remove(err_file.c_str());
  return r;
}

// FNV-1a, for pinning byte-exact outputs
std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

constexpr const char* kHeadline =
    "--levels 8 --delta 0.175 --signal binary --amplitude 1 --sigma-n 0.7071067811865476";

}  // namespace

TEST_CASE("sdnr reproduces the headline numbers end to end") {
  const auto r = run(std::string("sdnr ") + kHeadline);
  REQUIRE(r.exit_code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["report"]["theorem_used"] == "T2");
  CHECK(j["report"]["sdnr_linear"].get<double>() == doctest::Approx(3.25486191840675).epsilon(1e-9));
  CHECK(j["report"]["sdnr_db"].get<double>() == doctest::Approx(5.1253).epsilon(1e-4));
  CHECK(j["input_snr_linear"].get<double>() == doctest::Approx(2.0));
  CHECK(j["config"]["levels"] == 8);
  CHECK(j["report"]["coefficients"]["convention"] == "s_referenced");
}

TEST_CASE("coeffs round-trips through its own config echo") {
  const std::string out1 = temp_path("coeffs1.json");
  const std::string out2 = temp_path("coeffs2.json");
  auto r1 = run(std::string("coeffs ") + kHeadline + " --check-identities -o " + out1);
  REQUIRE(r1.exit_code == 0);
  const auto j1 = json::parse(slurp(out1));
  CHECK(j1["s_referenced"]["alpha"].get<double>() ==
        doctest::Approx(0.486134749675996).epsilon(1e-12));
  CHECK(j1["x_referenced"]["alpha"].get<double>() ==
        doctest::Approx(0.417503541783828).epsilon(1e-8));
  CHECK(j1["identities"]["gamma_identity_residual"].get<double>() < 1e-8);
  CHECK(j1["identities"]["alpha_identity_residual"].get<double>() < 1e-6);

  // feed the whole output back as the config; only the format flag on top
  auto r2 = run("coeffs --config " + out1 + " --check-identities -o " + out2);
  REQUIRE(r2.exit_code == 0);
  CHECK(slurp(out1) == slurp(out2));
  std::remove(out1.c_str());
  std::remove(out2.c_str());
}

TEST_CASE("noiseless coeffs agree across conventions") {
  const auto r = run("coeffs --levels 8 --delta 1 --signal gaussian --sigma-s 1 --sigma-n 0");
  REQUIRE(r.exit_code == 0);
  const auto j = json::parse(r.out);
  // with no noise x and s coincide, so the two conventions must match
  CHECK(j["s_referenced"]["alpha"].get<double>() ==
        doctest::Approx(j["x_referenced"]["alpha"].get<double>()).epsilon(1e-9));
  CHECK(j["s_referenced"]["gamma"].get<double>() ==
        doctest::Approx(j["x_referenced"]["gamma"].get<double>()).epsilon(1e-9));
}

TEST_CASE("mu table") {
  const auto r = run("mu --levels 8 --delta 1 --sigma-n 0.5 --s 1.0 --format csv");
  REQUIRE(r.exit_code == 0);
  std::istringstream lines(r.out);
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  CHECK(header == "s,mu_y,mu_y2");
  CHECK(row.substr(0, 2) == "1,");
  CHECK(row.find("0.999999999") != std::string::npos);
}

TEST_CASE("sweep emits the pinned CSV header and a clean grid") {
  const auto r = run("sweep --levels 8 --signal binary --amplitude 1 "
                     "--sigma-n 0.7071067811865476 --grid 0.1:0.3:0.1 --format csv");
  REQUIRE(r.exit_code == 0);
  std::istringstream lines(r.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "delta,alpha_s,gamma_s,sdnr_linear,sdnr_db");
  int rows = 0;
  for (std::string l; std::getline(lines, l);) ++rows;
  CHECK(rows == 3);
}

TEST_CASE("optimize finds the headline optimum") {
  const auto r = run("optimize --levels 8 --signal binary --amplitude 1 "
                     "--snr-db 3.010299956639812 --bracket 0.01:2");
  REQUIRE(r.exit_code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["delta_star"].get<double>() == doctest::Approx(0.173449).epsilon(2e-3));
  CHECK(j["sdnr_star"].get<double>() == doctest::Approx(3.25492616761).epsilon(1e-8));
  CHECK(j["truncation_level"].get<double>() == doctest::Approx(0.607).epsilon(5e-3));
  CHECK(j["at_boundary"] == false);
}

TEST_CASE("simulate: Monte Carlo report schema and determinism") {
  const std::string cmd = std::string("simulate ") + kHeadline + " --samples 50000 --seed 11";
  const auto r1 = run(cmd);
  const auto r2 = run(cmd);
  REQUIRE(r1.exit_code == 0);
  CHECK(r1.out == r2.out);  // byte-identical reruns

  const auto j = json::parse(r1.out);
  for (const char* key : {"alpha_s_hat", "gamma_s_hat", "sdnr_hat",
                          "distortion_signal_correlation"}) {
    const auto& e = j["report"][key];
    CHECK(e.contains("value"));
    CHECK(e.contains("standard_error"));
    CHECK(e["n_samples"] == 50000);
    CHECK(e["seed"] == 11);
  }
  CHECK(j["report"]["sdnr_hat"]["value"].get<double>() == doctest::Approx(3.25).epsilon(0.1));
}

TEST_CASE("simulate: BER invariance under quantization") {
  const auto r = run(std::string("simulate ") + kHeadline +
                     " --ber --quantizer both --samples 100000 --seed 5");
  REQUIRE(r.exit_code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["identical_error_counts"] == true);
  CHECK(j["with_quantizer"]["error_count"] == j["without_quantizer"]["error_count"]);
  CHECK(j["without_quantizer"]["ber"].get<double>() == doctest::Approx(0.0786).epsilon(0.05));
}

TEST_CASE("figure subcommand headers") {
  const auto r3 = run("figure 3 --grid 0.17:0.18:0.005 --format csv");
  REQUIRE(r3.exit_code == 0);
  CHECK(r3.out.rfind("delta,alpha_s,gamma_s,sdnr_linear,sdnr_db\n", 0) == 0);

  const auto r1 = run("figure 1 --grid -1:1:1 --format csv");
  REQUIRE(r1.exit_code == 0);
  CHECK(r1.out.rfind("s,mu_y_sn0.1,mu_y_sn0.5,mu_y_sn0.9\n", 0) == 0);
}

TEST_CASE("default seed comes from the environment") {
  // popen runs through the shell, so an environment prefix works directly
  ::setenv("BUSSGANG_CLI_SAVED", cli_path().c_str(), 1);
  const std::string base = std::string("simulate ") + kHeadline + " --samples 20000";
  RunResult r;
  {
    const std::string cmd = "BUSSGANG_SEED=123 " + cli_path() + " " + base + " 2>/dev/null";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    r.exit_code = WEXITSTATUS(::pclose(pipe));
  }
  REQUIRE(r.exit_code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["config"]["seed"] == 123);
  CHECK(j["report"]["alpha_s_hat"]["seed"] == 123);

  // an explicit flag still wins over the environment
  RunResult r2;
  {
    const std::string cmd =
        "BUSSGANG_SEED=123 " + cli_path() + " " + base + " --seed 9 2>/dev/null";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r2.out.append(buf.data(), n);
    r2.exit_code = WEXITSTATUS(::pclose(pipe));
  }
  REQUIRE(r2.exit_code == 0);
  CHECK(json::parse(r2.out)["config"]["seed"] == 9);
}

TEST_CASE("snr-db flag matches an explicit sigma-n") {
  const auto a = run("sdnr --levels 8 --delta 0.175 --signal binary --amplitude 1 "
                     "--snr-db 3.010299956639812");
  const auto b = run(std::string("sdnr ") + kHeadline);
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  const auto ja = json::parse(a.out), jb = json::parse(b.out);
  CHECK(ja["report"]["sdnr_linear"].get<double>() ==
        doctest::Approx(jb["report"]["sdnr_linear"].get<double>()).epsilon(1e-12));
}

TEST_CASE("discrete pmf file reproduces the binary constructor") {
  const std::string pmf = temp_path("binary.pmf");
  {
    std::ofstream f(pmf);
    f << "# symmetric two-point law\n-1,0.5\n1,0.5\n";
  }
  const auto a = run("sdnr --levels 8 --delta 0.175 --signal discrete --pmf " + pmf +
                     " --sigma-n 0.7071067811865476");
  const auto b = run(std::string("sdnr ") + kHeadline);
  REQUIRE(a.exit_code == 0);
  const auto ja = json::parse(a.out), jb = json::parse(b.out);
  CHECK(ja["report"]["sdnr_linear"] == jb["report"]["sdnr_linear"]);
  std::remove(pmf.c_str());
}

TEST_CASE("noiseless discrete input with zero distortion reports the infinite sentinel") {
  // away from thresholds a noiseless binary input is reproduced up to a pure
  // gain, so the distortion power is exactly zero
  const auto r = run("sdnr --levels 8 --delta 0.9 --signal binary --amplitude 1 --sigma-n 0");
  REQUIRE(r.exit_code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["report"]["infinite"] == true);
  CHECK(j["report"]["sdnr_linear"] == "inf");
  CHECK(j["report"]["theorem_used"] == "T1");
  CHECK(j["report"]["distortion_power"] == 0.0);
  CHECK(j["input_snr_linear"] == "inf");
}

TEST_CASE("usage errors exit with code 2 and a single-line message") {
  for (const char* bad : {
           "sdnr --levels 8 --signal binary --sigma-n 0.5",            // missing delta
           "sdnr --bits 3 --levels 8 --delta 1 --signal binary",       // both selectors
           "sdnr --levels 6 --delta 1 --signal binary --sigma-n 0.5",  // not a power of two
           "sweep --levels 8 --signal binary --sigma-n 0.5",           // missing grid
           "sweep --levels 8 --delta 1 --signal binary --sigma-n 0.5 --grid 0.1:1:0.1",
           "optimize --levels 8 --signal binary --sigma-n 0.5",        // missing bracket
           "figure 7",                                                 // out of range
           "sdnr --levels 8 --delta 1 --signal discrete --sigma-n 0.5",  // pmf missing
           "sdnr --levels 8 --delta 1 --signal binary --sigma-n 0.5 --snr-db 3",
           "mu --levels 8 --delta 1 --sigma-n 0.5 --s 1 --s-grid 0:1:0.5",
           "nonsense",
       }) {
    const auto r = run(bad);
    CHECK_MESSAGE(r.exit_code == 2, bad);
    CHECK(r.err.rfind("error: usage:", 0) == 0);
    CHECK(r.err.find('\n') == r.err.size() - 1);  // exactly one line
  }
}

TEST_CASE("domain errors exit with code 3 and name the quantity") {
  for (const char* bad : {
           "sdnr --levels 8 --delta -0.5 --signal binary --sigma-n 0.5",
           "sdnr --levels 8 --delta 1 --signal gaussian --sigma-s -1 --sigma-n 0.5",
           "sdnr --levels 8 --delta 1 --signal binary --amplitude -2 --sigma-n 0.5",
           "coeffs --levels 8 --delta 1 --signal binary --sigma-n -0.5",
       }) {
    const auto r = run(bad);
    CHECK_MESSAGE(r.exit_code == 3, bad);
    CHECK(r.err.rfind("error: domain:", 0) == 0);
    CHECK(r.err.find("quantity=") != std::string::npos);
  }
}

TEST_CASE("unwritable output path exits with code 5") {
  const auto r = run(std::string("sdnr ") + kHeadline + " -o /nonexistent_dir/out.json");
  CHECK(r.exit_code == 5);
  CHECK(r.err.rfind("error: io:", 0) == 0);
}

TEST_CASE("an empty table serializes to a header-only CSV") {
  bussgang::DataTable t;
  t.columns = {"delta", "alpha_s", "gamma_s", "sdnr_linear", "sdnr_db"};
  std::ostringstream out;
  bussgang::write_csv(out, t);
  CHECK(out.str() == "delta,alpha_s,gamma_s,sdnr_linear,sdnr_db\n");
}

TEST_CASE("golden output hashes per subcommand") {
  struct Golden {
    const char* args;
    std::uint64_t hash;
  };
  // frozen from a reference run; any byte change in these outputs is a
  // deliberate format break
  const Golden goldens[] = {
      {"coeffs --levels 8 --delta 0.175 --signal binary --amplitude 1 "
       "--sigma-n 0.7071067811865476",
       0x724facdaa82ecb7aull},
      {"sdnr --levels 8 --delta 0.175 --signal binary --amplitude 1 "
       "--sigma-n 0.7071067811865476",
       0xc6790fec14f0ffb3ull},
      {"mu --levels 8 --delta 1 --sigma-n 0.5 --s-grid 0:2:0.5 --format csv",
       0xc7fb4ced1b08ea62ull},
      {"sweep --levels 8 --signal binary --amplitude 1 --sigma-n 0.7071067811865476 "
       "--grid 0.1:0.3:0.1 --format csv",
       0x9f8eaacdac57b5baull},
      {"optimize --levels 8 --signal pam4 --amplitude 0.4472135954999579 "
       "--sigma-n 0.7071067811865476 --bracket 0.1:1",
       0xf17be643a929a50dull},
      {"simulate --levels 8 --delta 0.175 --signal binary --amplitude 1 "
       "--sigma-n 0.7071067811865476 --samples 20000 --seed 31337",
       0x120289dfe300fbcull},
      {"figure 2 --grid -1:1:0.5 --format csv", 0xd086e8ef5a09478cull},
  };
  const bool regenerate = std::getenv("BUSSGANG_REGEN_GOLDENS") != nullptr;
  for (const auto& g : goldens) {
    const auto r = run(g.args);
    REQUIRE_MESSAGE(r.exit_code == 0, g.args);
    if (regenerate)
      std::printf("{\"%s\",\n 0x%llxull},\n", g.args,
                  static_cast<unsigned long long>(fnv1a(r.out)));
    else
      CHECK_MESSAGE(fnv1a(r.out) == g.hash, g.args);
  }
}
