#pragma once

// The two gamma-factor constructions and their comparison.
//
// Operator side: K(pi) sends W|_P to (g -> W(s_n g^iota))|_P, A is
// (Af)(vg) = f(v s_{n-1} g^iota), C = A K, and C* is the transpose of C for
// the bilinear delta-basis pairing.  gamma_GK is the scalar by which C* acts
// on the embedded theta-bar Whittaker model of tau.
//
// Zeta side: Z(W, W') = sum over U_{n-1}\G_{n-1} of W(diag(g, 1)) W'(g) with
// counting measure, and gamma_JPSS = Z(W~, W'~) / (omega_tau(-1)^{n-1} Z(W, W')).
// The finite model has |det g| = 1 throughout, so both sit at s = 1/2.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ffgamma/algebra.hpp"
#include "ffgamma/models.hpp"
#include "ffgamma/spectra.hpp"

namespace ffgamma {

enum class OperatorLabel { K, A, Astar, C, Cstar };

struct OperatorOnKirillov {
  int rank = 0;
  OperatorLabel label = OperatorLabel::K;
  Direction domain = Direction::theta;
  Matrix matrix;  // over the U_n\P representatives
};

/// A generic rank n-1 representation realized in its theta-bar Whittaker model.
struct TauModel {
  int id = -1;
  std::shared_ptr<const RankContext> ctx;
  AdditiveCharacter psi{2};
  Direction direction = Direction::theta_bar;
  Matrix basis;
  CScalar omega_minus_one = 1.0;
};

TauModel make_tau_model(const Decomposition& theta_bar_model, int id);

OperatorOnKirillov op_K(const GGSpace& space, const IrrepComponent& c);
OperatorOnKirillov op_A(const RankContext& upper, const AdditiveCharacter& psi);
/// (A* phi)(vg) = theta_bar(v) phi(s_{n-1}^{-1} g^iota), built from that formula.
OperatorOnKirillov op_A_adjoint(const RankContext& upper, const AdditiveCharacter& psi);
OperatorOnKirillov op_C(const GGSpace& space, const IrrepComponent& c);
OperatorOnKirillov op_Cstar(const GGSpace& space, const IrrepComponent& c);

/// Right translation by diag(h, 1), h in G_{n-1}, on functions on U\P.
Matrix kirillov_action(const RankContext& upper, const AdditiveCharacter& psi, Direction direction,
                       const GroupElement& h);

enum class GammaMethod { GK, JPSS };

struct GammaValue {
  CScalar value = 0;
  GammaMethod method = GammaMethod::GK;
  double deviation = 0;       // scalar deviation (GK) or ratio spread (JPSS)
  int pairs_used = 0;
  CScalar cross_value = 0;    // probe-pair route (GK) / least-squares ratio (JPSS)
  double cross_deviation = 0;
};

struct GammaOptions {
  double tolerance = tol::assertion;
  double measure = 1.0;
  /// Pairs whose pairing is below this fraction of the largest are "vanishing".
  double nonvanishing_fraction = 1e-4;
};

GammaValue gamma_gk(const GGSpace& pi_space, const IrrepComponent& pi, const TauModel& tau,
                    const GammaOptions& opts = {});

/// Requires rank(W) = rank(Wp) + 1 and opposite directions.
CScalar zeta(const WhittakerFunction& W, const WhittakerFunction& Wp, double measure = 1.0);

GammaValue gamma_jpss(const GGSpace& pi_space, const IrrepComponent& pi, const TauModel& tau,
                      const GammaOptions& opts = {});

struct ProofChecks {
  double k_identity = 0;       // K(W|_P) vs ((W~)^eps)|_P
  double adjoint_formula = 0;  // A^T vs the explicit A* formula
  double intermediate = 0;     // <K f, A* W'> vs omega^{n-1} Z(W~, W'~)
  double c_equivariance = 0;   // [C, rho_P(h)] over generators of G_{n-1}
};

ProofChecks proof_checks(const GGSpace& pi_space, const IrrepComponent& pi, const TauModel& tau,
                         double measure = 1.0);

struct GammaReport {
  int q = 0;
  int n = 0;
  std::string psi;
  int pi_id = -1;
  int tau_id = -1;
  GammaValue gk;
  GammaValue jpss;
  double abs_diff = 0;
  CScalar omega_tau_minus_one = 1.0;
  double gamma_abs = 0;
  ProofChecks checks;
  bool passed = false;
  std::string error;
  double seconds = 0;
};

using Decomposer = std::function<Decomposition(std::shared_ptr<const GGSpace>, std::uint64_t)>;

struct TheoremInputs {
  int q = 0;
  int n = 0;
  std::uint64_t seed = 0;
  AdditiveCharacter psi{2};
  Decomposition pi_decomp;   // rank n, theta
  Decomposition tau_decomp;  // rank n-1, theta
  Decomposition tau_model;   // rank n-1, theta_bar via W -> W^eps
  Decomposition tau_direct;  // rank n-1, theta_bar, decomposed directly
};

TheoremInputs prepare_inputs(int q, int n, std::uint64_t seed, int psi_direction = +1,
                             std::uint64_t max_order = kDefaultMaxOrder,
                             const Decomposer& decomposer = {});

struct RunDiagnostics {
  int gg_dim = 0;
  int component_count = 0;
  int cuspidal_count = 0;
  int dim_sum = 0;
  double max_overlap = 0;
  bool cuspidal_kirillov_bijective = true;
  bool noncuspidal_restriction_noninjective = false;
  double tau_transport_residual = 0;  // eps-transported vs direct theta-bar models
  bool tau_transport_matches = true;
};

struct VerificationRun {
  int q = 0;
  int n = 0;
  std::uint64_t seed = 0;
  std::string psi;
  double tolerance = tol::assertion;
  std::vector<GammaReport> reports;
  RunDiagnostics diagnostics;
  bool passed = false;
};

RunDiagnostics run_diagnostics(const TheoremInputs& in);

VerificationRun verify_theorem(const TheoremInputs& in, const GammaOptions& opts = {});
VerificationRun verify_theorem(int q, int n, std::uint64_t seed, const GammaOptions& opts = {});

}  // namespace ffgamma
