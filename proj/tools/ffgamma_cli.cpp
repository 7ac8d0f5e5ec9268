// ffgamma: compare the Gelfand-Kazhdan and Rankin-Selberg gamma factors of
// GL_n x GL_{n-1} over small prime fields.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ffgamma/app.hpp"

namespace {

void add_common(CLI::App* sub, ffgamma::app::RunConfig& cfg, bool needs_instance) {
  auto* q = sub->add_option("--q", cfg.q, "field size (prime <= 7)");
  auto* n = sub->add_option("--n", cfg.n, "rank");
  if (needs_instance) {
    q->required();
    n->required();
  }
  sub->add_option("--seed", cfg.seed, "decomposition seed")->default_val(0);
  sub->add_option("--tol", cfg.tolerance, "agreement tolerance")->default_val(1e-8);
  sub->add_option("--cache-dir", cfg.cache_dir, "decomposition cache directory (else $FFGAMMA_CACHE_DIR)");
  sub->add_option("--out", cfg.output_path, "output file (default stdout)");
  sub->add_flag("--allow-slow", cfg.allow_slow, "permit instances above the fast budget");
  sub->add_flag("--psi-conjugate", cfg.psi_conjugate, "use the conjugate additive character");
  sub->add_option("--max-order", cfg.max_order, "largest group order to enumerate");
}

}  // namespace

int main(int argc, char** argv) {
  ffgamma::app::RunConfig cfg;
  CLI::App app{"Gamma factors of GL_n x GL_{n-1} over F_q"};
  app.require_subcommand(1);

  auto* verify = app.add_subcommand("verify", "check gamma_GK = gamma_JPSS for all pairs");
  add_common(verify, cfg, false);
  verify->add_option("--suite", cfg.suite, "run a suite tier instead of one instance")
      ->check(CLI::IsMember({"fast", "full"}));
  verify->add_flag("--timings", cfg.timings, "include per-pair wall times in the report");

  auto* table = app.add_subcommand("table", "component inventory and gamma table");
  add_common(table, cfg, true);
  auto* decompose = app.add_subcommand("decompose", "decompose the Gelfand-Graev space and dump it");
  add_common(decompose, cfg, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  cfg.subcommand = app.get_subcommands().front()->get_name();
  if (cfg.subcommand == "verify" && cfg.suite.empty() && (cfg.q == 0 || cfg.n == 0)) {
    std::cerr << "verify needs --q and --n, or --suite\n";
    return 2;
  }
  return ffgamma::app::run(cfg, std::cout, std::cerr);
}
