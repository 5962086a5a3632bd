#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace kg {

struct GehringParams {
  int d = 1;
  double q = 2.0;
  double sigma = 3.0;
  double b = 2.0;
  double theta = 1e-14;
  double gamma = 2.0;
};

// Raised when theta >= theta0, i.e. the self-improvement hypothesis fails.
struct hypothesis_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExactValue {
  double value = 0.0;  // double shadow
  std::string exact;   // "num/den" when the formula is rational, else a decimal string
  bool is_exact = false;
};

struct ConstantsReport {
  ExactValue theta0;         // [2 * 75^{4d+2} * 4^q]^{-1}
  ExactValue bar_b;          // 3^{4d+2} b
  ExactValue bar_theta;      // 3^{4d+2} theta
  ExactValue bar_theta0;     // [2 * 4^q * 5^{8d+4}]^{-1}
  ExactValue a;              // 2 bar_b 5^{8d+4} 4^q = 2 * 75^{4d+2} 4^q b
  ExactValue alpha;          // 4 bar_b^{1/q}
  ExactValue p_star_lemma;   // min(sigma, q + (q-1)/(a-1))
  ExactValue p_star_theorem; // min(sigma, (b q - theta0)/(b - theta0)), report only
  ExactValue C_pq;           // 2a(p-1)/((p-1) - a(p-q)) at the report's p
  ExactValue C0;             // 2^{(4d+2)/q}
  ExactValue C1;             // |Q_1|^{-1/q} c_gamma^{-(4d+2)/q}
  ExactValue c_gamma_val;
  ExactValue C_G;            // C1 C0 |Q_gamma|^{1/p} + C1 C_pq |Q_1| (gamma/5)^{(4d+2)/q}
  double p = 0.0;
  double epsilon_analytic = 0.0;  // p_star_lemma - q
  bool rational_path = false;     // true when q is a small integer
  // exact identities, checked in the working precision
  bool identity_power75 = false;   // 3^{4d+2} 5^{8d+4} == 75^{4d+2}
  bool identity_a_forms = false;   // both a formulas agree
  bool identity_p_star = false;    // q + (q-1)/(a-1) == (aq-1)/(a-1)
  bool identity_theta_scale = false;  // theta <= theta0  <=>  bar_theta <= bar_theta0
  bool identity_cpq_at_q = false;  // C_{q,q,a} == 2a
};

// Validates params, requires theta < theta0 (hypothesis_error otherwise) and
// q <= p < p_star_lemma (std::domain_error otherwise).
ConstantsReport compute_constants(const GehringParams& params, double p);

// Same with p = q + (p_star_lemma - q)/2 held exactly, where the C_pq
// denominator collapses to (q-1)/2.
ConstantsReport compute_constants_midpoint(const GehringParams& params);

double alpha_const(double b_bar, double q);

// Exact big-integer check of 3^{4d+2} 5^{8d+4} == 75^{4d+2}.
bool power_identity(int d);

double theta0_double(int d, double q);
std::string theta0_string(int d, int q_int);  // exact rational, integer q only

// (q-1)/(a-1) exactly (capped by sigma - q), immune to double cancellation.
double p_star_lemma_minus_q(const GehringParams& params);

// C_pq evaluated at p_k = p_star_lemma * (1 - 10^{-k}), k = 1..kmax, in exact
// arithmetic, plus the same approach along p_k = q + (p*-q)(1-10^{-k}).
struct DivergenceProbe {
  std::vector<double> scaled_p;     // C at p*(1 - 10^{-k})
  std::vector<double> interior_p;   // C at q + (p*-q)(1 - 10^{-k})
  bool scaled_increasing = false;
  bool interior_increasing = false;
};
DivergenceProbe cpq_divergence(const GehringParams& params, int kmax);

}  // namespace kg
