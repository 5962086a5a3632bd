#include "kg/constants.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kg/geometry.hpp"

namespace kg {

namespace {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;
using F50 = boost::multiprecision::cpp_bin_float_50;

Int ipow(int base, int exp) {
  Int r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

F50 fpow(const F50& base, const F50& exp) { return boost::multiprecision::pow(base, exp); }

void validate(const GehringParams& p) {
  if (p.d < 1 || p.d > 32) throw std::invalid_argument("d must be in [1, 32]");
  if (!(p.q > 1.0)) throw std::invalid_argument("q must exceed 1");
  if (!(p.sigma > p.q)) throw std::invalid_argument("sigma must exceed q");
  if (!(p.b > 1.0)) throw std::invalid_argument("b must exceed 1");
  if (!(p.theta > 0.0 && p.theta < 1.0)) throw std::invalid_argument("theta must lie in (0,1)");
  if (!(p.gamma > 1.0)) throw std::invalid_argument("gamma must exceed 1");
}

// q qualifies for the exact-rational path when it is a small integer.
int integer_q(double q) {
  if (q == std::floor(q) && q >= 2.0 && q <= 64.0) return static_cast<int>(q);
  return -1;
}

ExactValue from_rat(const Rat& r) {
  ExactValue v;
  v.value = r.convert_to<double>();
  v.exact = r.str();
  v.is_exact = true;
  return v;
}

ExactValue from_f50(const F50& f) {
  ExactValue v;
  v.value = f.convert_to<double>();
  v.exact = f.str(40);
  v.is_exact = false;
  return v;
}

F50 to_f50(const Rat& r) {
  return F50(numerator(r)) / F50(denominator(r));
}

F50 c_gamma_f50(double gamma) {
  const F50 g(gamma);
  const F50 mv = (g - 1) / 5;
  const F50 mt = sqrt((g * g - 1) / 13);
  const F50 mx = sqrt((g * g * g - 1) / (25 * g));
  return F50(0.5) * std::min({mv, mt, mx});
}

struct Core {
  bool rational = false;
  int qi = -1;
  // rational-path values (valid when rational)
  Rat r_theta0, r_bar_b, r_bar_theta, r_bar_theta0, r_a, r_p_root, r_p_star, r_p_star_thm;
  // float-path values (always valid)
  F50 f_theta0, f_bar_b, f_bar_theta, f_bar_theta0, f_a, f_p_root, f_p_star, f_p_star_thm;
};

Core build_core(const GehringParams& p) {
  validate(p);
  Core c;
  c.qi = integer_q(p.q);
  c.rational = c.qi > 0;
  const int e3 = 4 * p.d + 2;
  const int e5 = 8 * p.d + 4;

  if (c.rational) {
    const Rat rb(p.b), rth(p.theta), rsig(p.sigma), rq(c.qi);
    const Int p75 = ipow(75, e3);
    const Int p3 = ipow(3, e3);
    const Int p5 = ipow(5, e5);
    const Int p4 = ipow(4, c.qi);
    c.r_theta0 = Rat(1) / Rat(2 * p75 * p4);
    c.r_bar_b = Rat(p3) * rb;
    c.r_bar_theta = Rat(p3) * rth;
    c.r_bar_theta0 = Rat(1) / Rat(2 * p4 * p5);
    c.r_a = 2 * c.r_bar_b * Rat(p5) * Rat(p4);
    c.r_p_root = rq + (rq - 1) / (c.r_a - 1);
    c.r_p_star = std::min(rsig, c.r_p_root);
    c.r_p_star_thm = std::min(rsig, Rat((rb * rq - c.r_theta0) / (rb - c.r_theta0)));
    c.f_theta0 = to_f50(c.r_theta0);
    c.f_bar_b = to_f50(c.r_bar_b);
    c.f_bar_theta = to_f50(c.r_bar_theta);
    c.f_bar_theta0 = to_f50(c.r_bar_theta0);
    c.f_a = to_f50(c.r_a);
    c.f_p_root = to_f50(c.r_p_root);
    c.f_p_star = to_f50(c.r_p_star);
    c.f_p_star_thm = to_f50(c.r_p_star_thm);
  } else {
    const F50 fb(p.b), fth(p.theta), fsig(p.sigma), fq(p.q);
    const F50 p75(ipow(75, e3));
    const F50 p3(ipow(3, e3));
    const F50 p5(ipow(5, e5));
    const F50 p4 = fpow(F50(4), fq);
    c.f_theta0 = 1 / (2 * p75 * p4);
    c.f_bar_b = p3 * fb;
    c.f_bar_theta = p3 * fth;
    c.f_bar_theta0 = 1 / (2 * p4 * p5);
    c.f_a = 2 * c.f_bar_b * p5 * p4;
    c.f_p_root = fq + (fq - 1) / (c.f_a - 1);
    c.f_p_star = std::min(fsig, c.f_p_root);
    c.f_p_star_thm = std::min(fsig, F50((fb * fq - c.f_theta0) / (fb - c.f_theta0)));
  }
  return c;
}

Rat cpq_rat(const Rat& a, const Rat& q, const Rat& p) {
  const Rat den = (p - 1) - a * (p - q);
  if (den == 0) throw std::domain_error("C_pq undefined: denominator vanishes");
  return 2 * a * (p - 1) / den;
}

F50 cpq_f50(const F50& a, const F50& q, const F50& p) {
  const F50 den = (p - 1) - a * (p - q);
  if (den == 0) throw std::domain_error("C_pq undefined: denominator vanishes");
  return 2 * a * (p - 1) / den;
}

// Shared tail: everything that depends on p, plus the identity flags.
// When p_rat is non-null (rational path) C_pq is exact.
ConstantsReport finish(const GehringParams& params, const Core& c, const F50& fp,
                       const Rat* p_rat) {
  ConstantsReport rep;
  rep.rational_path = c.rational;
  rep.p = fp.convert_to<double>();
  const int e3 = 4 * params.d + 2;

  if (c.rational) {
    rep.theta0 = from_rat(c.r_theta0);
    rep.bar_b = from_rat(c.r_bar_b);
    rep.bar_theta = from_rat(c.r_bar_theta);
    rep.bar_theta0 = from_rat(c.r_bar_theta0);
    rep.a = from_rat(c.r_a);
    rep.p_star_lemma = from_rat(c.r_p_star);
    rep.p_star_theorem = from_rat(c.r_p_star_thm);
    rep.epsilon_analytic = (c.r_p_star - Rat(c.qi)).convert_to<double>();
  } else {
    rep.theta0 = from_f50(c.f_theta0);
    rep.bar_b = from_f50(c.f_bar_b);
    rep.bar_theta = from_f50(c.f_bar_theta);
    rep.bar_theta0 = from_f50(c.f_bar_theta0);
    rep.a = from_f50(c.f_a);
    rep.p_star_lemma = from_f50(c.f_p_star);
    rep.p_star_theorem = from_f50(c.f_p_star_thm);
    rep.epsilon_analytic = (c.f_p_star - F50(params.q)).convert_to<double>();
  }

  // Hypothesis and p-range gates.
  if (c.rational ? !(Rat(params.theta) < c.r_theta0) : !(F50(params.theta) < c.f_theta0)) {
    throw hypothesis_error("theta >= theta0: self-improvement hypothesis violated");
  }
  const F50 fq(params.q);
  if (!(fp >= fq)) throw std::domain_error("p must satisfy q <= p");
  if (c.rational && p_rat != nullptr) {
    if (!(*p_rat < c.r_p_star)) throw std::domain_error("p must lie below p_star");
  } else if (!(fp < c.f_p_star)) {
    throw std::domain_error("p must lie below p_star");
  }

  // C_pq at the report's p.
  F50 cpq_f;
  if (c.rational && p_rat != nullptr) {
    const Rat cpq = cpq_rat(c.r_a, Rat(c.qi), *p_rat);
    rep.C_pq = from_rat(cpq);
    cpq_f = to_f50(cpq);
  } else {
    cpq_f = cpq_f50(c.f_a, fq, fp);
    rep.C_pq = from_f50(cpq_f);
  }

  // alpha = 4 bar_b^{1/q}.
  rep.alpha = from_f50(4 * fpow(c.f_bar_b, 1 / fq));

  // C0 = 2^{(4d+2)/q}, exact when q divides 4d+2.
  const F50 c0_f = fpow(F50(2), F50(e3) / fq);
  if (c.rational && e3 % c.qi == 0) {
    rep.C0 = from_rat(Rat(ipow(2, e3 / c.qi)));
  } else {
    rep.C0 = from_f50(c0_f);
  }

  // c_gamma, C1, C_G in working precision (|Q_1| exact only for d = 1).
  const F50 cg = c_gamma_f50(params.gamma);
  rep.c_gamma_val = from_f50(cg);
  const F50 q1(unit_cylinder_volume(params.d));
  const F50 c1 = fpow(q1, -1 / fq) * fpow(cg, -F50(e3) / fq);
  rep.C1 = from_f50(c1);
  const F50 qgamma = fpow(F50(params.gamma), F50(e3)) * q1;
  const F50 cg_total = c1 * c0_f * fpow(qgamma, 1 / fp) +
                       c1 * cpq_f * q1 * fpow(F50(params.gamma) / 5, F50(e3) / fq);
  rep.C_G = from_f50(cg_total);

  // Identity flags.
  rep.identity_power75 = power_identity(params.d);
  if (c.rational) {
    const Rat a2 = 2 * Rat(ipow(75, e3)) * Rat(ipow(4, c.qi)) * Rat(params.b);
    rep.identity_a_forms = (a2 == c.r_a);
    rep.identity_p_star =
        (c.r_p_root == (c.r_a * Rat(c.qi) - 1) / (c.r_a - 1));
    rep.identity_theta_scale =
        ((Rat(params.theta) <= c.r_theta0) == (c.r_bar_theta <= c.r_bar_theta0));
    rep.identity_cpq_at_q = (cpq_rat(c.r_a, Rat(c.qi), Rat(c.qi)) == 2 * c.r_a);
  } else {
    const F50 a2 = 2 * F50(ipow(75, e3)) * fpow(F50(4), fq) * F50(params.b);
    const F50 tol = F50(1e-40);
    auto close = [&](const F50& x, const F50& y) { return abs(x - y) <= tol * abs(y); };
    rep.identity_a_forms = close(a2, c.f_a);
    rep.identity_p_star = close(c.f_p_root, (c.f_a * fq - 1) / (c.f_a - 1));
    rep.identity_theta_scale =
        ((F50(params.theta) <= c.f_theta0) == (c.f_bar_theta <= c.f_bar_theta0));
    rep.identity_cpq_at_q = close(cpq_f50(c.f_a, fq, fq), 2 * c.f_a);
  }
  return rep;
}

}  // namespace

ConstantsReport compute_constants(const GehringParams& params, double p) {
  const Core c = build_core(params);
  if (c.rational) {
    const Rat pr(p);
    return finish(params, c, to_f50(pr), &pr);
  }
  return finish(params, c, F50(p), nullptr);
}

ConstantsReport compute_constants_midpoint(const GehringParams& params) {
  const Core c = build_core(params);
  if (c.rational) {
    const Rat pr = Rat(c.qi) + (c.r_p_star - Rat(c.qi)) / 2;
    return finish(params, c, to_f50(pr), &pr);
  }
  const F50 fp = F50(params.q) + (c.f_p_star - F50(params.q)) / 2;
  return finish(params, c, fp, nullptr);
}

double alpha_const(double b_bar, double q) {
  if (!(b_bar > 1.0)) throw std::invalid_argument("b_bar must exceed 1");
  if (!(q > 1.0)) throw std::invalid_argument("q must exceed 1");
  return 4.0 * std::pow(b_bar, 1.0 / q);
}

bool power_identity(int d) {
  if (d < 1) return false;
  return ipow(3, 4 * d + 2) * ipow(5, 8 * d + 4) == ipow(75, 4 * d + 2);
}

double theta0_double(int d, double q) {
  const F50 p75(ipow(75, 4 * d + 2));
  const F50 p4 = fpow(F50(4), F50(q));
  return (1 / (2 * p75 * p4)).convert_to<double>();
}

std::string theta0_string(int d, int q_int) {
  if (q_int < 1) throw std::invalid_argument("q must be a positive integer here");
  const Rat t = Rat(1) / Rat(2 * ipow(75, 4 * d + 2) * ipow(4, q_int));
  return t.str();
}

double p_star_lemma_minus_q(const GehringParams& params) {
  const Core c = build_core(params);
  if (c.rational) return (c.r_p_star - Rat(c.qi)).convert_to<double>();
  return (c.f_p_star - F50(params.q)).convert_to<double>();
}

DivergenceProbe cpq_divergence(const GehringParams& params, int kmax) {
  const Core c = build_core(params);
  DivergenceProbe probe;
  if (kmax < 1) return probe;
  if (c.rational) {
    const Rat q(c.qi);
    Rat tenk = 1;
    std::vector<Rat> sv, iv;
    for (int k = 1; k <= kmax; ++k) {
      tenk /= 10;
      sv.push_back(cpq_rat(c.r_a, q, c.r_p_star * (1 - tenk)));
      iv.push_back(cpq_rat(c.r_a, q, q + (c.r_p_star - q) * (1 - tenk)));
    }
    probe.scaled_increasing = std::is_sorted(sv.begin(), sv.end(), std::less_equal<Rat>());
    probe.interior_increasing = std::is_sorted(iv.begin(), iv.end(), std::less_equal<Rat>());
    for (const Rat& r : sv) probe.scaled_p.push_back(r.convert_to<double>());
    for (const Rat& r : iv) probe.interior_p.push_back(r.convert_to<double>());
  } else {
    const F50 q(params.q);
    F50 tenk = 1;
    std::vector<F50> sv, iv;
    for (int k = 1; k <= kmax; ++k) {
      tenk /= 10;
      sv.push_back(cpq_f50(c.f_a, q, c.f_p_star * (1 - tenk)));
      iv.push_back(cpq_f50(c.f_a, q, q + (c.f_p_star - q) * (1 - tenk)));
    }
    probe.scaled_increasing = std::is_sorted(sv.begin(), sv.end(), std::less_equal<F50>());
    probe.interior_increasing = std::is_sorted(iv.begin(), iv.end(), std::less_equal<F50>());
    for (const F50& r : sv) probe.scaled_p.push_back(r.convert_to<double>());
    for (const F50& r : iv) probe.interior_p.push_back(r.convert_to<double>());
  }
  return probe;
}

}  // namespace kg
