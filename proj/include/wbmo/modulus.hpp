#pragma once

// Moduli of continuity Omega and their Dini-type integrals.

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "wbmo/errors.hpp"

namespace wbmo {

class Modulus {
public:
  struct Power {
    double alpha;
  };
  struct Scaled {
    double factor;
    std::shared_ptr<const Modulus> inner;
  };
  /// Piecewise linear through (0, 0) and the nodes, constant after the last node.
  struct Tabulated {
    std::vector<double> t;
    std::vector<double> value;
  };

  static Modulus power(double alpha) {
    require(alpha > 0.0 && alpha <= 1.0, "power modulus needs alpha in (0, 1]");
    return Modulus(Power{alpha});
  }
  static Modulus scaled(double factor, Modulus inner) {
    require(factor > 0.0, "modulus scale must be positive");
    return Modulus(Scaled{factor, std::make_shared<const Modulus>(std::move(inner))});
  }
  static Modulus tabulated(std::vector<double> t, std::vector<double> value) {
    require(!t.empty() && t.size() == value.size(), "tabulated modulus needs matching nodes");
    for (std::size_t i = 0; i < t.size(); ++i) {
      require(t[i] > 0.0 && (i == 0 || t[i] > t[i - 1]), "tabulated nodes must be positive and increasing");
      require(value[i] >= 0.0 && (i == 0 || value[i] >= value[i - 1]), "tabulated modulus must be increasing");
    }
    return Modulus(Tabulated{std::move(t), std::move(value)});
  }

  [[nodiscard]] double operator()(double t) const {
    if (t <= 0.0) return 0.0;
    return std::visit(
        [t](const auto& k) -> double {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, Power>) {
            return k.alpha == 1.0 ? t : std::pow(t, k.alpha);
          } else if constexpr (std::is_same_v<K, Scaled>) {
            return k.factor * (*k.inner)(t);
          } else {
            if (t >= k.t.back()) return k.value.back();
            const auto it = std::upper_bound(k.t.begin(), k.t.end(), t);
            const std::size_t i = static_cast<std::size_t>(it - k.t.begin());
            const double t0 = i == 0 ? 0.0 : k.t[i - 1];
            const double v0 = i == 0 ? 0.0 : k.value[i - 1];
            return v0 + (k.value[i] - v0) * (t - t0) / (k.t[i] - t0);
          }
        },
        kind_);
  }

  [[nodiscard]] const auto& kind() const { return kind_; }

  [[nodiscard]] std::string describe() const {
    return std::visit(
        [](const auto& k) -> std::string {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, Power>) return "t^" + std::to_string(k.alpha);
          else if constexpr (std::is_same_v<K, Scaled>) return std::to_string(k.factor) + "*(" + k.inner->describe() + ")";
          else return "tabulated(" + std::to_string(k.t.size()) + " nodes)";
        },
        kind_);
  }

  /// Spot check of Omega(0) = 0, monotonicity and subadditivity on a log grid.
  [[nodiscard]] bool looks_valid(int samples = 200) const {
    if ((*this)(0.0) != 0.0) return false;
    std::vector<double> ts;
    for (int i = 0; i <= samples; ++i) ts.push_back(std::pow(10.0, -8.0 + 9.0 * i / samples));
    for (std::size_t i = 1; i < ts.size(); ++i)
      if ((*this)(ts[i]) < (*this)(ts[i - 1])) return false;
    for (double s : ts)
      for (std::size_t j = 0; j < ts.size(); j += 7) {
        const double t = ts[j];
        if ((*this)(s + t) > ((*this)(s) + (*this)(t)) * (1.0 + 1e-12)) return false;
      }
    return true;
  }

private:
  explicit Modulus(std::variant<Power, Scaled, Tabulated> k) : kind_(std::move(k)) {}
  std::variant<Power, Scaled, Tabulated> kind_;
};

/// int_0^1 Omega(t) t^{-beta} dt / t, or +inf when it diverges.
///
/// Closed form for powers; tabulated moduli integrate the linear piece near 0
/// analytically and every further segment by adaptive Gauss-Kronrod in log t.
inline double dini_weighted_integral(const Modulus& omega, double beta) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return std::visit(
      [&](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Modulus::Power>) {
          return k.alpha > beta ? 1.0 / (k.alpha - beta) : inf;
        } else if constexpr (std::is_same_v<K, Modulus::Scaled>) {
          return k.factor * dini_weighted_integral(*k.inner, beta);
        } else {
          const double t1 = std::min(k.t.front(), 1.0);
          const double slope = (k.t.front() <= 1.0 ? k.value.front() / k.t.front() : omega(1.0));
          double total = 0.0;
          if (slope > 0.0) {
            if (beta >= 1.0) return inf;
            total += slope * std::pow(t1, 1.0 - beta) / (1.0 - beta);
          }
          std::vector<double> nodes{t1};
          for (double t : k.t)
            if (t > t1 && t < 1.0) nodes.push_back(t);
          nodes.push_back(1.0);
          auto integrand = [&](double u) {
            const double t = std::exp(u);
            return omega(t) * std::exp(-beta * u);
          };
          for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
            if (nodes[i + 1] <= nodes[i]) continue;
            double err = 0.0;
            total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
                integrand, std::log(nodes[i]), std::log(nodes[i + 1]), 15, 1e-12, &err);
          }
          return total;
        }
      },
      omega.kind());
}

/// alpha when Omega = c t^alpha, otherwise nothing.
inline std::optional<double> power_exponent_of(const Modulus& omega) {
  if (const auto* p = std::get_if<Modulus::Power>(&omega.kind())) return p->alpha;
  if (const auto* s = std::get_if<Modulus::Scaled>(&omega.kind())) return power_exponent_of(*s->inner);
  return std::nullopt;
}

/// ||Omega||_Dini = int_0^1 Omega(t) dt / t.
inline double dini_norm(const Modulus& omega) { return dini_weighted_integral(omega, 0.0); }

}  // namespace wbmo
