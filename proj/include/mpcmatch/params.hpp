#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

namespace mpcmatch {

// which formula family the profile uses for the outer-loop guard and for the
// per-block phase count. overrides tweak constants but keep the family.
enum class ProfileStyle { paper, desk };

// all tunable constants of the algorithm, resolved for a fixed vertex count n.
// "paper" carries the analysis constants (astronomically conservative, sampling
// rates vanish at bench scale); "desk" keeps every formula shape but with
// constants small enough that phases do something at n in the thousands.
struct ParamProfile {
  std::string name;  // "paper", "desk", or "custom" once overridden
  ProfileStyle style = ProfileStyle::desk;
  std::size_t n = 0;

  double alpha_coeff = 0;      // alpha = alpha_coeff * ln n
  double mu_R_value = 0;       // reference-set sampling rate, resolved numeric
  double loop_base = 0;        // outer loop runs while delta >= (n/S) * guard_term
  double loop_exp = 0;         //   paper: guard_term = (loop_base * ln n)^loop_exp
                               //   desk:  guard_term = loop_base^loop_exp
  double tau_base_coeff = 0;   // paper phase count divides ln(delta/m) by ln(tau_base_coeff * alpha)
  double tau_frac = 0;         // leading fraction in the phase-count formula
  double overflow_factor = 0;  // machine is zeroed when its edges exceed overflow_factor * S
};

inline double alpha(const ParamProfile& p) {
  return p.alpha_coeff * std::log(static_cast<double>(p.n));
}

inline double mu_R(const ParamProfile& p) { return p.mu_R_value; }

// heavy-set rate as a function of the normalized degree estimate r.
// smooth sigmoid: 0.5 * exp((alpha/2)(r - 0.5)) below r = 0.5, mirrored above.
inline double mu_H(double r, const ParamProfile& p) {
  const double a = alpha(p);
  if (r <= 0.5) return 0.5 * std::exp(0.5 * a * (r - 0.5));
  return 1.0 - 0.5 * std::exp(-0.5 * a * (r - 0.5));
}

// 1 - mu_H computed without cancellation for r far above 0.5
inline double mu_H_complement(double r, const ParamProfile& p) {
  const double a = alpha(p);
  if (r <= 0.5) return 1.0 - 0.5 * std::exp(0.5 * a * (r - 0.5));
  return 0.5 * std::exp(-0.5 * a * (r - 0.5));
}

// friend-set rate from the normalized heavy-neighbor count
inline double mu_F(double r) { return std::clamp(r / 4.0, 0.0, 1.0); }

inline ParamProfile resolve_profile(const std::string& name, std::size_t n,
                                    const std::map<std::string, double>& overrides = {}) {
  if (n < 2) throw std::invalid_argument("resolve_profile: need n >= 2");
  ParamProfile p;
  p.n = n;
  const double ln_n = std::log(static_cast<double>(n));
  if (name == "paper") {
    p.name = "paper";
    p.style = ProfileStyle::paper;
    p.alpha_coeff = 96.0;
    p.mu_R_value = 1.0 / (1e6 * ln_n);
    p.loop_base = 200.0;
    p.loop_exp = 32.0;
    p.tau_base_coeff = 120.0;
    p.tau_frac = 1.0 / 16.0;
    p.overflow_factor = 8.0;
  } else if (name == "desk") {
    p.name = "desk";
    p.style = ProfileStyle::desk;
    p.alpha_coeff = 2.0;
    p.mu_R_value = std::min(0.5, 1.0 / ln_n);
    p.loop_base = 2.0;
    p.loop_exp = 1.0;
    p.tau_base_coeff = 1.0;
    p.tau_frac = 0.25;
    p.overflow_factor = 8.0;
  } else {
    throw std::invalid_argument("resolve_profile: unknown profile '" + name + "'");
  }
  for (const auto& [key, value] : overrides) {
    if (key == "alpha_coeff") p.alpha_coeff = value;
    else if (key == "mu_R_value") p.mu_R_value = value;
    else if (key == "loop_base") p.loop_base = value;
    else if (key == "loop_exp") p.loop_exp = value;
    else if (key == "tau_base_coeff") p.tau_base_coeff = value;
    else if (key == "tau_frac") p.tau_frac = value;
    else if (key == "overflow_factor") p.overflow_factor = value;
    else throw std::invalid_argument("resolve_profile: unknown override '" + key + "'");
  }
  if (!overrides.empty()) p.name = "custom";

  if (!(p.alpha_coeff > 0)) throw std::invalid_argument("resolve_profile: alpha_coeff must be positive");
  if (!(p.mu_R_value > 0 && p.mu_R_value <= 0.5))
    throw std::invalid_argument("resolve_profile: mu_R must lie in (0, 0.5]");
  if (!(p.loop_base > 1)) throw std::invalid_argument("resolve_profile: loop_base must exceed 1");
  if (!(p.loop_exp >= 0)) throw std::invalid_argument("resolve_profile: loop_exp must be nonnegative");
  if (!(p.tau_base_coeff >= 1)) throw std::invalid_argument("resolve_profile: tau_base_coeff must be >= 1");
  if (!(p.tau_frac > 0 && p.tau_frac <= 1))
    throw std::invalid_argument("resolve_profile: tau_frac must lie in (0, 1]");
  if (!(p.overflow_factor >= 0))
    throw std::invalid_argument("resolve_profile: overflow_factor must be nonnegative");
  return p;
}

}  // namespace mpcmatch
