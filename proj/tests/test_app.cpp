#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "ffgamma/app.hpp"
#include "ffgamma/errors.hpp"

using namespace ffgamma;
using namespace ffgamma::app;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("ffgamma_test_" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

RunConfig config(const std::string& sub, int q, int n) {
  RunConfig cfg;
  cfg.subcommand = sub;
  cfg.q = q;
  cfg.n = n;
  return cfg;
}

int cli(const std::string& args, const fs::path& out_file = {}) {
  std::string cmd = std::string(FFGAMMA_CLI_PATH) + " " + args;
  cmd += out_file.empty() ? " > /dev/null 2>&1" : " > " + out_file.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config validation") {
  CHECK_NOTHROW(validate(config("verify", 3, 2)));
  CHECK_THROWS_WITH_AS(validate(config("verify", 9, 2)), "q must be prime ≤ 7", ConfigError);
  CHECK_THROWS_AS(validate(config("verify", 3, 1)), ConfigError);
  CHECK_NOTHROW(validate(config("table", 2, 1)));
  CHECK_THROWS_AS(validate(config("verify", 3, 4)), BudgetExceeded);
  CHECK_THROWS_AS(validate(config("verify", 3, 3)), BudgetExceeded);  // slow tier
  auto slow = config("verify", 3, 3);
  slow.allow_slow = true;
  CHECK_NOTHROW(validate(slow));
  auto bad_tol = config("verify", 3, 2);
  bad_tol.tolerance = 0;
  CHECK_THROWS_AS(validate(bad_tol), ConfigError);
  auto bad_suite = config("verify", 0, 0);
  bad_suite.suite = "medium";
  CHECK_THROWS_AS(validate(bad_suite), ConfigError);
  CHECK_THROWS_AS(validate(config("frobnicate", 3, 2)), ConfigError);
}

TEST_CASE("suite tiers") {
  using V = std::vector<std::pair<int, int>>;
  CHECK(suite_instances("fast", false) == V{{3, 2}, {2, 3}});
  CHECK(suite_instances("full", false) == V{{3, 2}, {2, 3}, {5, 2}});
  CHECK(suite_instances("full", true) == V{{3, 2}, {2, 3}, {5, 2}, {3, 3}});
  CHECK_FALSE(is_slow_instance(5, 2));
  CHECK(is_slow_instance(3, 3));
}

TEST_CASE("cache directory resolution") {
  RunConfig cfg;
  ::unsetenv(kCacheEnvVar);
  CHECK(resolve_cache_dir(cfg).empty());
  ::setenv(kCacheEnvVar, "/tmp/from_env", 1);
  CHECK(resolve_cache_dir(cfg) == "/tmp/from_env");
  cfg.cache_dir = "/tmp/from_flag";
  CHECK(resolve_cache_dir(cfg) == "/tmp/from_flag");
  ::unsetenv(kCacheEnvVar);
}

TEST_CASE("checksum") {
  CHECK(checksum("") == 0xcbf29ce484222325ull);
  CHECK(checksum("a") == 0xaf63dc4c8601ec8cull);
}

TEST_CASE("cache round trip is bit-exact") {
  TempDir tmp;
  const auto sp = build_gg_space(2, 3, Direction::theta);
  const auto d = decompose(sp, 0);
  const auto path = cache_path(tmp.path, key_of(*sp, 0));
  save_decomposition(path, d);
  CHECK(fs::exists(path));
  CHECK_FALSE(fs::exists(fs::path(path.string() + ".tmp")));
  std::string why;
  const auto loaded = load_decomposition(path, sp, 0, &why);
  REQUIRE(loaded.has_value());
  REQUIRE(loaded->components.size() == d.components.size());
  for (std::size_t i = 0; i < d.components.size(); ++i) {
    const auto& a = d.components[i];
    const auto& b = loaded->components[i];
    CHECK(a.id == b.id);
    CHECK(a.cuspidal == b.cuspidal);
    CHECK(a.basis == b.basis);
    CHECK(a.central_character == b.central_character);
    for (std::size_t g = 0; g < a.character.size(); ++g) CHECK(std::abs(a.character[g] - b.character[g]) < 1e-12);
  }
  // A different seed or direction is a different entry.
  CHECK_FALSE(load_decomposition(path, sp, 1).has_value());
  CHECK(cache_path(tmp.path, key_of(*sp, 0)) != cache_path(tmp.path, key_of(*sp, 1)));
}

TEST_CASE("corrupted cache entries are rebuilt") {
  TempDir tmp;
  const auto sp = build_gg_space(2, 3, Direction::theta);
  const auto path = cache_path(tmp.path, key_of(*sp, 0));
  std::ostringstream log;
  const auto first = cached_decompose(tmp.path.string(), sp, 0, &log);
  CHECK(log.str().empty());
  const std::string good = slurp(path);

  SUBCASE("truncated") {
    std::ofstream(path, std::ios::binary | std::ios::trunc) << good.substr(0, good.size() / 2);
  }
  SUBCASE("checksum mismatch") {
    std::string bad = good;
    bad[10] = bad[10] == '1' ? '2' : '1';
    std::ofstream(path, std::ios::binary | std::ios::trunc) << bad;
  }
  SUBCASE("version bump") {
    auto j = nlohmann::json::parse(good.substr(0, good.find('\n')));
    j["schema_version"] = kCacheSchemaVersion + 1;
    const std::string payload = j.dump();
    char footer[40];
    std::snprintf(footer, sizeof footer, "%016llx", static_cast<unsigned long long>(checksum(payload)));
    std::ofstream(path, std::ios::binary | std::ios::trunc) << payload << "\nchecksum fnv1a64:" << footer << "\n";
    std::string why;
    CHECK_FALSE(load_decomposition(path, sp, 0, &why).has_value());
    CHECK(why.find("schema version") != std::string::npos);
  }

  const auto rebuilt = cached_decompose(tmp.path.string(), sp, 0, &log);
  CHECK(log.str().find("warning") != std::string::npos);
  CHECK(slurp(path) == good);
  for (std::size_t i = 0; i < first.components.size(); ++i)
    CHECK(first.components[i].basis == rebuilt.components[i].basis);
}

TEST_CASE("cached and uncached runs give identical reports") {
  TempDir tmp;
  auto cfg = config("verify", 2, 3);
  std::ostringstream a, b, c, log;
  CHECK(run(cfg, a, log) == 0);
  cfg.cache_dir = tmp.path.string();
  CHECK(run(cfg, b, log) == 0);  // populates
  CHECK(run(cfg, c, log) == 0);  // reads
  CHECK(a.str() == b.str());
  CHECK(b.str() == c.str());
}

TEST_CASE("verify report contents") {
  std::ostringstream out, log;
  CHECK(run(config("verify", 3, 2), out, log) == 0);
  const auto j = nlohmann::json::parse(out.str());
  CHECK(j["schema_version"] == kReportSchemaVersion);
  CHECK(j["artifact_version"] == kArtifactVersion);
  CHECK(j["psi"] == "exp(2*pi*i*x/q)");
  CHECK(j["q"] == 3);
  CHECK(j["n"] == 2);
  CHECK(j["seed"] == 0);
  CHECK(j["tolerance"] == 1e-8);
  CHECK(j["passed"] == true);
  REQUIRE(j["records"].size() == 6);
  for (const auto& r : j["records"]) {
    CHECK(r["gamma_gk"].size() == 2);
    CHECK(r["abs_diff"].get<double>() < 1e-8);
    CHECK_FALSE(r.contains("seconds"));
  }
  // Complex values survive serialization at full precision.
  const double re = j["records"][0]["gamma_gk"][0].get<double>();
  CHECK(nlohmann::json(re).dump() == j["records"][0]["gamma_gk"][0].dump());

  auto timed = config("verify", 3, 2);
  timed.timings = true;
  std::ostringstream t;
  run(timed, t, log);
  CHECK(nlohmann::json::parse(t.str())["records"][0].contains("seconds"));
}

TEST_CASE("table output") {
  std::ostringstream log;
  const std::string t32 = table_text(config("table", 3, 2), &log);
  CHECK(t32 == table_text(config("table", 3, 2), &log));
  CHECK(t32.find("6 components, 3 cuspidal") != std::string::npos);
  const std::string t23 = table_text(config("table", 2, 3), &log);
  CHECK(t23.find("4 components, 2 cuspidal") != std::string::npos);
  const std::string t21 = table_text(config("table", 2, 1), &log);
  CHECK(t21.find("1 components") != std::string::npos);
  CHECK(t21.find("gamma") == std::string::npos);
  CHECK(t32.find("-0.000000000000") == std::string::npos);
}

TEST_CASE("cli exit codes") {
  TempDir tmp;
  const auto r1 = tmp.path / "r1.json", r2 = tmp.path / "r2.json";
  CHECK(cli("verify --q 3 --n 2 --out " + r1.string()) == 0);
  CHECK(cli("verify --q 3 --n 2 --out " + r2.string()) == 0);
  CHECK(slurp(r1) == slurp(r2));
  CHECK(nlohmann::json::parse(slurp(r1))["records"].size() == 6);
  CHECK(cli("verify --q 2 --n 3 --out " + r1.string()) == 0);
  CHECK(nlohmann::json::parse(slurp(r1))["records"].size() == 4);

  const auto msg = tmp.path / "msg.txt";
  CHECK(cli("verify --q 9 --n 2", msg) == 2);
  CHECK(slurp(msg).find("q must be prime ≤ 7") != std::string::npos);
  CHECK(cli("verify --q 3 --n 3") == 2);
  CHECK(cli("verify --q 3 --n 4 --allow-slow") == 2);
  CHECK(cli("verify --q 3") == 2);
  CHECK(cli("verify --bogus") == 2);
  CHECK(cli("") == 2);
  CHECK(cli("verify --suite fast --out " + r1.string()) == 0);
  CHECK(nlohmann::json::parse(slurp(r1))["runs"].size() == 2);
  CHECK(cli("table --q 2 --n 1 --out " + r1.string()) == 0);
  CHECK(cli("decompose --q 2 --n 3 --out " + r1.string()) == 0);
  CHECK(nlohmann::json::parse(slurp(r1))["components"].size() == 4);
  CHECK(cli("verify --q 3 --n 2 --psi-conjugate --cache-dir " + (tmp.path / "cache").string()) == 0);
  CHECK(fs::exists(tmp.path / "cache"));
}

TEST_CASE("theorem failures flip the exit status but still write the report") {
  auto cfg = config("verify", 3, 2);
  cfg.tolerance = 1e-30;  // unattainable agreement
  std::ostringstream out, log;
  CHECK(run(cfg, out, log) == 1);
  const auto j = nlohmann::json::parse(out.str());
  CHECK(j["passed"] == false);
  CHECK(j["records"].size() == 6);
}
