#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cdt {

/// Thrown by rate lookups when a reaction references a symbol that has no
/// assigned value.
struct UnknownRateSymbol : std::invalid_argument {
    explicit UnknownRateSymbol(const std::string& symbol)
      : std::invalid_argument("unknown rate symbol: " + symbol), symbol(symbol) {}
    std::string symbol;
};

/// Assignment of positive rate constants to rate symbols. Immutable once
/// built; shared freely across threads.
class SystemParams {
  public:
    SystemParams() = default;

    explicit SystemParams(std::vector<std::pair<std::string, double>> pairs) {
        for (auto& [sym, v] : pairs) set(sym, v);
    }

    /// The four-reaction oscillator convention: symbols k1..k4.
    static SystemParams quartet(double k1, double k2, double k3, double k4) {
        return SystemParams({{"k1", k1}, {"k2", k2}, {"k3", k3}, {"k4", k4}});
    }

    void set(const std::string& symbol, double value) {
        if (!(value > 0.0) || !std::isfinite(value))
            throw std::invalid_argument("rate constant " + symbol + " must be a positive finite number");
        kappa_[symbol] = value;
    }

    double at(const std::string& symbol) const {
        auto it = kappa_.find(symbol);
        if (it == kappa_.end()) throw UnknownRateSymbol(symbol);
        return it->second;
    }

    bool has(const std::string& symbol) const { return kappa_.count(symbol) != 0; }

    const std::map<std::string, double>& values() const { return kappa_; }

  private:
    std::map<std::string, double> kappa_;
};

/// Rate quadruple (k1,k2,k3,k4) of the built-in three-species four-reaction
/// oscillator, with the derived quantities used throughout.
template <typename Scalar = double>
struct KappaT {
    Scalar k1, k2, k3, k4;

    /// alpha = sqrt(k1 k3 k4 / k2)
    Scalar alpha() const { return std::sqrt(k1 * k3 * k4 / k2); }
    /// Imaginary-pair magnitude on the bifurcation set: omega = sqrt(2 k2 k4).
    Scalar omega() const { return std::sqrt(Scalar(2) * k2 * k4); }
    /// k1 - k2 - k3; its sign decides the stability class.
    Scalar discriminant() const { return k1 - k2 - k3; }
};

using Kappa = KappaT<double>;

inline void require_positive(const Kappa& k) {
    if (!(k.k1 > 0 && k.k2 > 0 && k.k3 > 0 && k.k4 > 0))
        throw std::invalid_argument("rate constants must be positive");
}

/// Extract the quartet from a symbol map (requires k1..k4).
inline Kappa kappa_from(const SystemParams& p) {
    return Kappa{p.at("k1"), p.at("k2"), p.at("k3"), p.at("k4")};
}

inline SystemParams params_from(const Kappa& k) {
    return SystemParams::quartet(k.k1, k.k2, k.k3, k.k4);
}

/// True when k1 = k2 + k3 within the relative tolerance used by the
/// center-case machinery.
inline bool is_center(const Kappa& k, double rel_tol = 1e-12) {
    return std::abs(k.discriminant()) <= rel_tol * k.k1;
}

/// Substitute k1 := k2 + k3 (the --assume-center semantics).
inline Kappa centered(Kappa k) {
    k.k1 = k.k2 + k.k3;
    return k;
}

inline void require_center(const Kappa& k) {
    require_positive(k);
    if (!is_center(k))
        throw std::invalid_argument("requires k1 = k2 + k3 (pass --assume-center to substitute k1)");
}

}  // namespace cdt
