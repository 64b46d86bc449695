#pragma once
// Renyi conditional entropies, Arikan-type sandwiches, sandwiched H~_1/2,
// Massey and Pliam lower bounds, and the imperfect-key certificate.
// Natural logarithms throughout except the Massey bound (bits).

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "guesswork/model/ensemble.hpp"
#include "guesswork/model/joint.hpp"
#include "guesswork/sdp/conic.hpp"

namespace guesswork {

struct BoundReport {
  std::string quantity;
  double lower = 0.0;
  double upper = 0.0;
  std::string log_base = "e";
  bool applicable = true;
  std::vector<std::string> assumptions;
  std::map<std::string, double> values;  // named intermediate quantities
  std::optional<HermitianMatrix> sigma;  // optimal sigma_B when relevant
  std::optional<OutcomePovm> povm;       // measurement attaining an upper bound
};

/// (alpha/(1-alpha)) ln sum_y (sum_x p(x,y)^alpha)^(1/alpha).
double renyi_conditional_entropy(const JointDistribution& joint, double alpha);

/// Unconditional H_alpha(X) in nats.
double renyi_entropy(const std::vector<double>& probs, double alpha);

/// exp(H_1/2)/(1 + ln|X|) <= G(X|Y) <= exp(H_1/2), standard costs with K = |X|.
BoundReport arikan_bounds(const JointDistribution& joint);

/// H_alpha of the joint p(x,y) = p(x) tr(E_y rho_x): an upper bound on the
/// B-measured entropy.
double measured_conditional_entropy(const CqEnsemble& ens, const OutcomePovm& povm, double alpha);

struct MeasuredSearch {
  double value = 0.0;
  OutcomePovm povm;
  std::size_t evaluated = 0;
};

/// Heuristic minimization of the measured entropy over rank-one projective
/// measurements: a Bloch-sphere grid for d_B = 2, random bases otherwise,
/// always including the computational basis. Upper bound on H^{up,M}_alpha.
MeasuredSearch minimize_measured_entropy(const CqEnsemble& ens, double alpha, std::size_t samples = 4096,
                                         std::uint64_t seed = 1);

struct SandwichedOptions {
  double tol = 1e-10;
  int max_iter = 20000;
  /// Cross-check against the fidelity SDP when |X| d_B^2 is at most this (0 disables).
  std::size_t sdp_check_limit = 64;
  double sdp_agreement = 1e-6;
};

/// sup_sigma 2 ln sum_x F(p_x rho_x, sigma) by alternating maximization; the
/// witness sigma is reported. Numerical error if the SDP cross-check disagrees.
BoundReport sandwiched_h_half(const CqEnsemble& ens, const SandwichedOptions& opt = {});

/// The same quantity from max sum_x Re tr X_x s.t. [[p_x rho_x, X_x], [X_x^dag, sigma]] >= 0, tr sigma = 1.
double sandwiched_h_half_sdp(const CqEnsemble& ens, const sdp::SolverOptions& opt = {});

/// exp(H~_1/2)/(1 + ln|X|) <= G(X|B) <= exp(H_1/2 measured), the upper end from
/// minimize_measured_entropy.
BoundReport quantum_one_shot_bounds(const CqEnsemble& ens, std::size_t samples = 4096, std::uint64_t seed = 1);

/// Rate sandwich H~_1/2 <= lim (1/n) ln G(X^n|B^n) <= (1/n) H^M_1/2(X^n|B^n),
/// the right side estimated on n copies by minimize_measured_entropy.
BoundReport asymptotic_bounds(const CqEnsemble& ens, int n, std::size_t samples = 4096, std::uint64_t seed = 1);

/// G(X) >= 2^(H(X) - 2) + 1 when H(X) >= 2 bits; otherwise not applicable.
BoundReport massey_bound(const std::vector<double>& probs);

/// G(X|Y) >= (|X|+1)/2 - (|X|/2) ||p_XY - u_X x p_Y||_1.
BoundReport pliam_side_info_bound(const JointDistribution& joint);

/// Key certificate for rho_KE given as an ensemble over key values. delta is
/// the actual (1/2)||rho_KE - pi_K x rho_E||_1; the bound uses max(delta, epsilon):
/// lower = (|K|+1)/2 - |K| max(delta, epsilon), alongside the Lipschitz line
/// (|K|+1)/2 - 2|K| max(delta, epsilon).
BoundReport certify_key(const CqEnsemble& key, double epsilon);

}  // namespace guesswork
