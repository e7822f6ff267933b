#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pls/generator.hpp"

namespace pls {

/// Causal signal f = sum_{k>=0} c_k phi(x - k) with finitely many
/// coefficients and c_0 != 0. Immutable after construction.
class CausalSignal {
 public:
  CausalSignal(Generator gen, std::vector<cx> coeffs)
      : gen_(std::move(gen)), coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw std::invalid_argument("CausalSignal: no coefficients");
    if (coeffs_[0] == cx(0.0, 0.0)) {
      throw std::invalid_argument("CausalSignal: c_0 must be nonzero");
    }
  }

  const Generator& generator() const noexcept { return gen_; }
  const std::vector<cx>& coeffs() const noexcept { return coeffs_; }

  /// Largest index k with c_k != 0.
  int max_index() const noexcept {
    for (std::size_t k = coeffs_.size(); k-- > 0;) {
      if (coeffs_[k] != cx(0.0, 0.0)) return static_cast<int>(k);
    }
    return 0;  // unreachable: c_0 != 0
  }

  bool is_real() const noexcept {
    if (gen_.is_complex()) return false;
    for (const cx& c : coeffs_) {
      if (c.imag() != 0.0) return false;
    }
    return true;
  }

 private:
  Generator gen_;
  std::vector<cx> coeffs_;
};

/// f(x) = sum_k c_k phi(x - k). At most s+2 terms are touched; the
/// generator zero-pads outside its support so the window may be generous.
inline cx evaluate(const CausalSignal& f, double x) {
  if (x <= 0.0) return cx(0.0, 0.0);
  const auto& c = f.coeffs();
  const Generator& g = f.generator();
  const int s = g.support_len();
  const int kf = static_cast<int>(std::floor(x));
  const int lo = std::max(0, kf - s);
  const int hi = std::min(static_cast<int>(c.size()) - 1, kf + 1);
  cx acc(0.0, 0.0);
  for (int k = lo; k <= hi; ++k) acc += c[k] * g.eval(x - k);
  return acc;
}

/// The coefficient indices visible from unit interval n: {0..n-1} while
/// n <= s-1, then the sliding window {n-s+1..n-1}.
struct IndexSet {
  int n;
  int s;
  std::vector<int> members;
};

inline IndexSet index_set(int n, int s) {
  if (n < 1) throw std::invalid_argument("index_set: n must be >= 1");
  if (s < 2) throw std::invalid_argument("index_set: s must be >= 2");
  IndexSet set{n, s, {}};
  const int lo = (n <= s - 1) ? 0 : n - s + 1;
  for (int k = lo; k <= n - 1; ++k) set.members.push_back(k);
  return set;
}

/// v_n(x) = sum_{k in I_n} c_k phi(n + x - k), the part of f(n + x)
/// carried by already-known coefficients: f(n + x) = v_n(x) + c_n phi(x).
inline cx aux_v(std::span<const cx> coeffs, const Generator& gen, int n, double x) {
  const IndexSet set = index_set(n, gen.support_len());
  cx acc(0.0, 0.0);
  for (int k : set.members) {
    if (static_cast<std::size_t>(k) >= coeffs.size()) {
      throw std::invalid_argument("aux_v: coefficient c_" + std::to_string(k) +
                                  " required but not supplied");
    }
    acc += coeffs[k] * gen.eval(n + x - k);
  }
  return acc;
}

/// Longest run of consecutive zero coefficients (starting at index >= 1)
/// that is followed by a nonzero coefficient; 0 if there is none.
inline int max_gap(std::span<const cx> coeffs) {
  int best = 0;
  int run = 0;
  for (std::size_t i = 1; i < coeffs.size(); ++i) {
    if (coeffs[i] == cx(0.0, 0.0)) {
      ++run;
    } else {
      best = std::max(best, run);
      run = 0;
    }
  }
  return best;  // a trailing zero run has no following nonzero and does not count
}

inline int max_gap(const CausalSignal& f) { return max_gap(f.coeffs()); }

/// Necessary condition for nonseparability: the maximum gap stays below
/// s-1. A gap of s-1 or more provably splits the signal.
inline bool is_nonseparable_candidate(const CausalSignal& f) {
  return max_gap(f) < f.generator().support_len() - 1;
}

/// Two distinct signals over the modulated generator e^{i*alpha*x}*varphi
/// whose magnitudes agree everywhere: coefficients c with c_0 = 1,
/// c_1 = e^{i*beta}, c_k = 1 for k >= 2, paired against
/// c~_k = e^{i*2*alpha*k} * conj(c_k). They are never unimodular multiples
/// of each other as long as alpha - beta is not a multiple of pi.
inline std::pair<CausalSignal, CausalSignal> ambiguous_pair(
    const Generator& varphi, double alpha, double beta, int max_index) {
  if (varphi.is_complex()) {
    throw std::invalid_argument("ambiguous_pair: base generator must be real-valued");
  }
  if (alpha == 0.0) throw std::invalid_argument("ambiguous_pair: alpha must be nonzero");
  if (std::abs(std::remainder(alpha - beta, pi)) < 1e-12) {
    throw std::invalid_argument(
        "ambiguous_pair: alpha - beta must not be a multiple of pi");
  }
  if (max_index < 2) throw std::invalid_argument("ambiguous_pair: max_index must be >= 2");

  const Generator phi = varphi.modulated(alpha);
  std::vector<cx> c(max_index + 1, cx(1.0, 0.0));
  c[1] = std::polar(1.0, beta);
  std::vector<cx> ct(max_index + 1);
  for (int k = 0; k <= max_index; ++k) {
    ct[k] = std::polar(1.0, 2.0 * alpha * k) * std::conj(c[k]);
  }
  return {CausalSignal(phi, std::move(c)), CausalSignal(phi, std::move(ct))};
}

}  // namespace pls
