#include "ffgamma/app.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>

namespace ffgamma::app {

namespace fs = std::filesystem;
using nlohmann::json;

bool is_slow_instance(int q, int n) { return group_order(n, q) > kSlowOrder; }

void validate(const RunConfig& cfg) {
  if (cfg.subcommand != "verify" && cfg.subcommand != "table" && cfg.subcommand != "decompose")
    throw ConfigError("unknown subcommand '" + cfg.subcommand + "'");
  if (!(cfg.tolerance > 0.0)) throw ConfigError("tolerance must be positive");
  if (!cfg.suite.empty()) {
    if (cfg.subcommand != "verify") throw ConfigError("--suite applies to verify only");
    if (cfg.suite != "fast" && cfg.suite != "full") throw ConfigError("suite must be 'fast' or 'full'");
    return;
  }
  if (!is_supported_prime(cfg.q)) throw ConfigError("q must be prime ≤ 7");
  const int min_rank = cfg.subcommand == "verify" ? 2 : 1;
  if (cfg.n < min_rank || cfg.n > kMaxRank)
    throw ConfigError("n must lie in [" + std::to_string(min_rank) + ", " + std::to_string(kMaxRank) + "]");
  const std::uint64_t order = group_order(cfg.n, cfg.q);
  if (order > cfg.max_order) {
    throw BudgetExceeded("|GL_" + std::to_string(cfg.n) + "(F_" + std::to_string(cfg.q) + ")| = " +
                         std::to_string(order) + " exceeds the budget of " + std::to_string(cfg.max_order));
  }
  if (is_slow_instance(cfg.q, cfg.n) && !cfg.allow_slow) {
    throw BudgetExceeded("GL_" + std::to_string(cfg.n) + "(F_" + std::to_string(cfg.q) +
                         ") is in the slow tier; pass --allow-slow");
  }
}

std::vector<std::pair<int, int>> suite_instances(const std::string& suite, bool allow_slow) {
  std::vector<std::pair<int, int>> out{{3, 2}, {2, 3}};
  if (suite == "full") {
    out.emplace_back(5, 2);
    if (allow_slow) out.emplace_back(3, 3);
  }
  return out;
}

std::string resolve_cache_dir(const RunConfig& cfg) {
  if (!cfg.cache_dir.empty()) return cfg.cache_dir;
  if (const char* env = std::getenv(kCacheEnvVar); env && *env) return env;
  return {};
}

CacheKey key_of(const GGSpace& space, std::uint64_t seed) {
  return CacheKey{space.rank(), space.modulus(), space.direction(), space.psi().direction(), seed};
}

fs::path cache_path(const fs::path& dir, const CacheKey& key) {
  std::ostringstream name;
  name << "gg_n" << key.n << "_q" << key.q << "_" << to_string(key.direction) << "_psi"
       << (key.psi_direction > 0 ? "p" : "m") << "_seed" << key.seed << ".json";
  return dir / name.str();
}

std::uint64_t checksum(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

json complex_json(CScalar z) { return json::array({z.real(), z.imag()}); }

namespace {

CScalar complex_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output_path.empty()) {
    out << text;
    return;
  }
  const fs::path path(cfg.output_path);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw CacheError("cannot write " + path.string());
  f << text;
}

}  // namespace

json decomposition_json(const Decomposition& d) {
  const auto& sp = *d.space;
  json comps = json::array();
  for (const auto& c : d.components) {
    json omega = json::array();
    for (int z = 1; z < c.modulus; ++z) omega.push_back(complex_json(c.omega(z)));
    std::vector<double> flat;
    flat.reserve(std::size_t(c.basis.size()) * 2);
    for (Eigen::Index k = 0; k < c.basis.cols(); ++k)
      for (Eigen::Index r = 0; r < c.basis.rows(); ++r) {
        flat.push_back(c.basis(r, k).real());
        flat.push_back(c.basis(r, k).imag());
      }
    comps.push_back({{"id", c.id},
                     {"dim", c.dim()},
                     {"cuspidal", c.cuspidal},
                     {"central_character", omega},
                     {"basis", flat}});
  }
  return {{"schema_version", kCacheSchemaVersion},
          {"n", sp.rank()},
          {"q", sp.modulus()},
          {"direction", to_string(sp.direction())},
          {"psi", sp.psi().descriptor()},
          {"psi_direction", sp.psi().direction()},
          {"seed", d.seed},
          {"gg_dim", sp.dim()},
          {"components", comps}};
}

void save_decomposition(const fs::path& path, const Decomposition& d) {
  const std::string payload = decomposition_json(d).dump();
  const std::string body = payload + "\nchecksum fnv1a64:" + hex64(checksum(payload)) + "\n";
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw CacheError("cannot write cache file " + tmp.string());
    f << body;
    if (!f) throw CacheError("short write to cache file " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::optional<Decomposition> load_decomposition(const fs::path& path, std::shared_ptr<const GGSpace> space,
                                                std::uint64_t seed, std::string* why) {
  auto fail = [&](const std::string& reason) -> std::optional<Decomposition> {
    if (why) *why = reason + " (" + path.string() + ")";
    return std::nullopt;
  };
  std::error_code ec;
  if (!fs::exists(path, ec)) return fail("no cache entry");
  std::ifstream f(path, std::ios::binary);
  if (!f) throw CacheError("cannot read cache file " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  const std::string body = ss.str();

  const std::string marker = "\nchecksum fnv1a64:";
  const auto pos = body.rfind(marker);
  if (pos == std::string::npos) return fail("missing checksum footer");
  const std::string payload = body.substr(0, pos);
  std::string footer = body.substr(pos + marker.size());
  while (!footer.empty() && (footer.back() == '\n' || footer.back() == '\r')) footer.pop_back();
  if (footer != hex64(checksum(payload))) return fail("checksum mismatch");

  json j;
  try {
    j = json::parse(payload);
  } catch (const json::exception&) {
    return fail("unparseable payload");
  }
  const CacheKey want = key_of(*space, seed);
  try {
    if (j.at("schema_version").get<int>() != kCacheSchemaVersion) return fail("schema version mismatch");
    if (j.at("n").get<int>() != want.n || j.at("q").get<int>() != want.q ||
        j.at("direction").get<std::string>() != to_string(want.direction) ||
        j.at("psi_direction").get<int>() != want.psi_direction || j.at("seed").get<std::uint64_t>() != seed)
      return fail("key mismatch");
    Decomposition d;
    d.space = space;
    d.seed = seed;
    int total = 0;
    for (const auto& jc : j.at("components")) {
      IrrepComponent c;
      c.id = jc.at("id").get<int>();
      c.rank = space->rank();
      c.modulus = space->modulus();
      c.direction = space->direction();
      const int dim = jc.at("dim").get<int>();
      const auto flat = jc.at("basis").get<std::vector<double>>();
      if (flat.size() != std::size_t(dim) * space->dim() * 2) return fail("basis size mismatch");
      c.basis.resize(space->dim(), dim);
      std::size_t k = 0;
      for (int col = 0; col < dim; ++col)
        for (int r = 0; r < space->dim(); ++r, k += 2) c.basis(r, col) = CScalar(flat[k], flat[k + 1]);
      c.cuspidal = jc.at("cuspidal").get<bool>();
      c.central_character.assign(space->modulus(), CScalar(0));
      const auto& omega = jc.at("central_character");
      if (omega.size() != std::size_t(space->modulus() - 1)) return fail("central character size mismatch");
      for (int z = 1; z < space->modulus(); ++z) c.central_character[z] = complex_from(omega.at(z - 1));
      c.character = kernels::characters(space->action(), space->phases(), c.basis * c.basis.adjoint());
      total += dim;
      d.components.push_back(std::move(c));
    }
    if (total != space->dim()) return fail("dimensions do not sum to the space dimension");
    return d;
  } catch (const json::exception& e) {
    return fail(std::string("malformed payload: ") + e.what());
  }
}

Decomposition cached_decompose(const std::string& cache_dir, std::shared_ptr<const GGSpace> space,
                               std::uint64_t seed, std::ostream* log) {
  if (cache_dir.empty()) return decompose(std::move(space), seed);
  const fs::path path = cache_path(cache_dir, key_of(*space, seed));
  std::string why;
  if (auto hit = load_decomposition(path, space, seed, &why)) return std::move(*hit);
  if (log && fs::exists(path)) *log << "warning: rebuilding cache entry: " << why << "\n";
  Decomposition d = decompose(space, seed);
  save_decomposition(path, d);
  return d;
}

json report_json(const VerificationRun& run, bool timings) {
  json records = json::array();
  for (const auto& r : run.reports) {
    json rec = {{"q", r.q},
                {"n", r.n},
                {"psi", r.psi},
                {"pi_id", r.pi_id},
                {"tau_id", r.tau_id},
                {"gamma_gk", complex_json(r.gk.value)},
                {"gamma_jpss", complex_json(r.jpss.value)},
                {"abs_diff", r.abs_diff},
                {"omega_tau_minus_one", complex_json(r.omega_tau_minus_one)},
                {"gamma_abs", r.gamma_abs},
                {"gk", {{"scalar_deviation", r.gk.deviation},
                        {"probe_value", complex_json(r.gk.cross_value)},
                        {"probe_deviation", r.gk.cross_deviation},
                        {"probe_pairs", r.gk.pairs_used}}},
                {"jpss", {{"ratio_spread", r.jpss.deviation},
                          {"pairs", r.jpss.pairs_used},
                          {"proportionality_residual", r.jpss.cross_deviation}}},
                {"checks", {{"k_identity", r.checks.k_identity},
                            {"adjoint_formula", r.checks.adjoint_formula},
                            {"intermediate", r.checks.intermediate},
                            {"c_equivariance", r.checks.c_equivariance}}},
                {"passed", r.passed}};
    if (!r.error.empty()) rec["error"] = r.error;
    if (timings) rec["seconds"] = r.seconds;
    records.push_back(std::move(rec));
  }
  const auto& d = run.diagnostics;
  return {{"schema_version", kReportSchemaVersion},
          {"artifact_version", kArtifactVersion},
          {"q", run.q},
          {"n", run.n},
          {"psi", run.psi},
          {"seed", run.seed},
          {"tolerance", run.tolerance},
          {"measure", "counting"},
          {"diagnostics", {{"gg_dim", d.gg_dim},
                           {"component_count", d.component_count},
                           {"cuspidal_count", d.cuspidal_count},
                           {"dim_sum", d.dim_sum},
                           {"max_overlap", d.max_overlap},
                           {"cuspidal_kirillov_bijective", d.cuspidal_kirillov_bijective},
                           {"noncuspidal_restriction_noninjective", d.noncuspidal_restriction_noninjective},
                           {"tau_transport_residual", d.tau_transport_residual},
                           {"tau_transport_matches", d.tau_transport_matches}}},
          {"records", records},
          {"passed", run.passed}};
}

namespace {

std::string fmt_complex(CScalar z) {
  auto clean = [](double x) { return std::abs(x) < 5e-13 ? 0.0 : x; };
  char buf[64];
  std::snprintf(buf, sizeof buf, "%+.12f%+.12fi", clean(z.real()), clean(z.imag()));
  return buf;
}

Decomposer make_decomposer(const RunConfig& cfg, std::ostream* log) {
  const std::string dir = resolve_cache_dir(cfg);
  return [dir, log](std::shared_ptr<const GGSpace> space, std::uint64_t seed) {
    return cached_decompose(dir, std::move(space), seed, log);
  };
}

VerificationRun run_instance(const RunConfig& cfg, int q, int n, std::ostream* log) {
  const auto in = prepare_inputs(q, n, cfg.seed, cfg.psi_direction(), cfg.max_order, make_decomposer(cfg, log));
  GammaOptions opts;
  opts.tolerance = cfg.tolerance;
  return verify_theorem(in, opts);
}

void log_run(const VerificationRun& run, std::ostream& log) {
  int ok = 0;
  double worst = 0;
  for (const auto& r : run.reports) {
    ok += r.passed ? 1 : 0;
    worst = std::max(worst, r.abs_diff);
    if (!r.error.empty()) log << "error: " << r.error << "\n";
  }
  log << "GL_" << run.n << "(F_" << run.q << "): " << ok << "/" << run.reports.size()
      << " pairs agree, max |gamma_GK - gamma_JPSS| = " << worst << (run.passed ? "  [PASS]" : "  [FAIL]")
      << "\n";
}

}  // namespace

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  bool passed = true;
  std::string text;
  if (cfg.suite.empty()) {
    const auto run = run_instance(cfg, cfg.q, cfg.n, &log);
    log_run(run, log);
    passed = run.passed;
    text = report_json(run, cfg.timings).dump(2) + "\n";
  } else {
    json runs = json::array();
    for (auto [q, n] : suite_instances(cfg.suite, cfg.allow_slow)) {
      const auto run = run_instance(cfg, q, n, &log);
      log_run(run, log);
      passed = passed && run.passed;
      runs.push_back(report_json(run, cfg.timings));
    }
    json doc = {{"schema_version", kReportSchemaVersion},
                {"artifact_version", kArtifactVersion},
                {"suite", cfg.suite},
                {"runs", runs},
                {"passed", passed}};
    text = doc.dump(2) + "\n";
  }
  emit(cfg, text, out);
  return passed ? 0 : 1;
}

std::string table_text(const RunConfig& cfg, std::ostream* log) {
  const std::string cache = resolve_cache_dir(cfg);
  auto space = build_gg_space(cfg.n, cfg.q, Direction::theta, cfg.psi_direction(), cfg.max_order);
  const Decomposition d = cached_decompose(cache, space, cfg.seed, log);

  std::ostringstream os;
  os << "# GL_" << cfg.n << "(F_" << cfg.q << ")  seed=" << cfg.seed << "  psi=" << space->psi().descriptor()
     << "\n";
  os << "# Gelfand-Graev dimension " << space->dim() << ", " << d.components.size() << " components, "
     << d.cuspidal_ids().size() << " cuspidal\n";
  os << "id\tdim\tcuspidal";
  for (int z = 1; z < cfg.q; ++z) os << "\tomega(" << z << ")";
  os << "\n";
  for (const auto& c : d.components) {
    os << c.id << "\t" << c.dim() << "\t" << (c.cuspidal ? "yes" : "no");
    for (int z = 1; z < cfg.q; ++z) os << "\t" << fmt_complex(c.omega(z));
    os << "\n";
  }
  if (cfg.n >= 2 && !d.cuspidal_ids().empty()) {
    const auto run = run_instance(cfg, cfg.q, cfg.n, log);
    os << "# gamma(pi, tau): pi cuspidal on GL_" << cfg.n << ", tau generic on GL_" << cfg.n - 1 << "\n";
    os << "pi\ttau\tgamma_GK\tgamma_JPSS\t|diff|\n";
    for (const auto& r : run.reports) {
      char diff[32];
      std::snprintf(diff, sizeof diff, "%.3e", r.abs_diff);
      os << r.pi_id << "\t" << r.tau_id << "\t" << fmt_complex(r.gk.value) << "\t" << fmt_complex(r.jpss.value)
         << "\t" << (r.abs_diff < 1e-13 ? std::string("<1e-13") : std::string(diff)) << "\n";
    }
  }
  return os.str();
}

int cmd_table(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  emit(cfg, table_text(cfg, &log), out);
  return 0;
}

int cmd_decompose(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  auto space = build_gg_space(cfg.n, cfg.q, Direction::theta, cfg.psi_direction(), cfg.max_order);
  const Decomposition d = cached_decompose(resolve_cache_dir(cfg), space, cfg.seed, &log);
  emit(cfg, decomposition_json(d).dump() + "\n", out);
  log << "GL_" << cfg.n << "(F_" << cfg.q << "): " << d.components.size() << " components\n";
  return 0;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  try {
    validate(cfg);
    if (cfg.subcommand == "verify") return cmd_verify(cfg, out, log);
    if (cfg.subcommand == "table") return cmd_table(cfg, out, log);
    return cmd_decompose(cfg, out, log);
  } catch (const ConfigError& e) {
    log << e.what() << "\n";
    return 2;
  } catch (const BudgetExceeded& e) {
    log << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace ffgamma::app
