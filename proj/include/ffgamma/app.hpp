#pragma once

// Verification orchestration, report emission, and the decomposition cache.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "ffgamma/gamma.hpp"
#include "ffgamma/spectra.hpp"

namespace ffgamma::app {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr int kCacheSchemaVersion = 1;
inline constexpr const char* kArtifactVersion = "1.0.0";
inline constexpr const char* kCacheEnvVar = "FFGAMMA_CACHE_DIR";
/// Instances whose larger group exceeds this order need --allow-slow.
inline constexpr std::uint64_t kSlowOrder = 5000;

struct RunConfig {
  std::string subcommand = "verify";
  int q = 0;
  int n = 0;
  std::uint64_t seed = 0;
  double tolerance = tol::assertion;
  std::string cache_dir;
  std::string output_path;
  std::string suite;  // empty, "fast" or "full"
  bool allow_slow = false;
  bool psi_conjugate = false;
  bool timings = false;
  std::uint64_t max_order = kDefaultMaxOrder;

  int psi_direction() const { return psi_conjugate ? -1 : +1; }
};

/// Throws ConfigError or BudgetExceeded (both map to exit status 2).
void validate(const RunConfig& cfg);

bool is_slow_instance(int q, int n);

/// (q, n) pairs of a suite tier.
std::vector<std::pair<int, int>> suite_instances(const std::string& suite, bool allow_slow);

/// --cache-dir, else $FFGAMMA_CACHE_DIR, else empty (no caching).
std::string resolve_cache_dir(const RunConfig& cfg);

struct CacheKey {
  int n = 0;
  int q = 0;
  Direction direction = Direction::theta;
  int psi_direction = 1;
  std::uint64_t seed = 0;
};

CacheKey key_of(const GGSpace& space, std::uint64_t seed);
std::filesystem::path cache_path(const std::filesystem::path& dir, const CacheKey& key);

/// 64-bit FNV-1a.
std::uint64_t checksum(std::string_view bytes);

nlohmann::json decomposition_json(const Decomposition& d);

/// Payload line followed by a checksum footer; written to a temporary name and renamed.
void save_decomposition(const std::filesystem::path& path, const Decomposition& d);

/// nullopt (with a reason in *why) on a missing, truncated, corrupted or
/// stale entry.  Throws CacheError only for unreadable paths.
std::optional<Decomposition> load_decomposition(const std::filesystem::path& path,
                                                std::shared_ptr<const GGSpace> space,
                                                std::uint64_t seed, std::string* why = nullptr);

/// Decomposition through the cache; rebuilds and rewrites on any load failure.
Decomposition cached_decompose(const std::string& cache_dir, std::shared_ptr<const GGSpace> space,
                               std::uint64_t seed, std::ostream* log = nullptr);

nlohmann::json complex_json(CScalar z);
nlohmann::json report_json(const VerificationRun& run, bool timings = false);

/// Component inventory and gamma table, deterministic text.
std::string table_text(const RunConfig& cfg, std::ostream* log = nullptr);

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& log);
int cmd_table(const RunConfig& cfg, std::ostream& out, std::ostream& log);
int cmd_decompose(const RunConfig& cfg, std::ostream& out, std::ostream& log);

/// Dispatches on cfg.subcommand; maps ConfigError/BudgetExceeded to 2.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& log);

}  // namespace ffgamma::app
