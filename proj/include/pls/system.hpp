#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "pls/generator.hpp"

namespace pls {

enum class SystemLabel { xi_phi, lambda_phi_1, lambda_phi_2, lambda_varphi };

/// Ordered system of functions on (0, 1) whose linear independence is
/// probed by the GHC check.
///
/// xi_phi is the product system attached to a complex generator: the
/// real parts of conj(phi(x))*phi(x+k) for k = 1..s-1, then the imaginary
/// parts for k = 1..s-1, then |phi(x)|^2 -- 2(s-1)+1 members in total.
/// The lambda systems are the s shifts phi(x+k), k = 0..s-1 (lambda_phi_2
/// uses the products phi(x)*conj(phi(x+k)) instead).
struct FunctionSystem {
  SystemLabel label;
  std::vector<std::function<cx(double)>> members;
};

inline FunctionSystem build_system(const Generator& gen, SystemLabel label) {
  const int s = gen.support_len();
  FunctionSystem sys{label, {}};
  switch (label) {
    case SystemLabel::xi_phi: {
      if (!gen.is_complex()) {
        throw std::invalid_argument("build_system: xi_phi requires a complex generator");
      }
      for (int k = 1; k <= s - 1; ++k) {
        sys.members.emplace_back([gen, k](double x) {
          return cx((std::conj(gen.eval(x)) * gen.eval(x + k)).real(), 0.0);
        });
      }
      for (int k = 1; k <= s - 1; ++k) {
        sys.members.emplace_back([gen, k](double x) {
          return cx((std::conj(gen.eval(x)) * gen.eval(x + k)).imag(), 0.0);
        });
      }
      sys.members.emplace_back(
          [gen](double x) { return cx(std::norm(gen.eval(x)), 0.0); });
      break;
    }
    case SystemLabel::lambda_phi_1: {
      for (int k = 0; k <= s - 1; ++k) {
        sys.members.emplace_back([gen, k](double x) { return gen.eval(x + k); });
      }
      break;
    }
    case SystemLabel::lambda_phi_2: {
      for (int k = 0; k <= s - 1; ++k) {
        sys.members.emplace_back([gen, k](double x) {
          return gen.eval(x) * std::conj(gen.eval(x + k));
        });
      }
      break;
    }
    case SystemLabel::lambda_varphi: {
      if (gen.is_complex()) {
        throw std::invalid_argument("build_system: lambda_varphi requires a real generator");
      }
      for (int k = 0; k <= s - 1; ++k) {
        sys.members.emplace_back([gen, k](double x) { return gen.eval(x + k); });
      }
      break;
    }
  }
  return sys;
}

}  // namespace pls
