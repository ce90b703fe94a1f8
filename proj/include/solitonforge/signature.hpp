#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <string>
#include <vector>

#include "solitonforge/errors.hpp"

namespace solitonforge {

/// Diagonal pseudo-Euclidean metric signature (eps_1, ..., eps_n), eps_i = +-1.
/// At least one entry must be +1 and n >= 3.
class Signature {
public:
    explicit Signature(std::vector<int> eps) : eps_(std::move(eps)) {
        if (eps_.size() < 3) throw ParameterError("Signature: need n >= 3");
        bool has_plus = false;
        for (int e : eps_) {
            if (e != 1 && e != -1) throw ParameterError("Signature: entries must be +1 or -1");
            has_plus = has_plus || e == 1;
        }
        if (!has_plus) throw ParameterError("Signature: at least one entry must be +1");
    }

    static Signature riemannian(int n) { return Signature(std::vector<int>(static_cast<std::size_t>(n), 1)); }

    int dim() const { return static_cast<int>(eps_.size()); }

    int eps(int i) const { return eps_[static_cast<std::size_t>(i)]; }

    bool is_riemannian() const {
        return std::all_of(eps_.begin(), eps_.end(), [](int e) { return e == 1; });
    }

    /// Radial invariant r(x) = sum_k eps_k x_k^2.
    double radial(const Eigen::VectorXd& x) const {
        double r = 0.0;
        for (int k = 0; k < dim(); ++k) r += eps(k) * x[k] * x[k];
        return r;
    }

    std::string describe() const {
        std::string s = "(";
        for (std::size_t i = 0; i < eps_.size(); ++i) {
            s += eps_[i] > 0 ? "+" : "-";
            if (i + 1 < eps_.size()) s += ",";
        }
        return s + ")";
    }

private:
    std::vector<int> eps_;
};

} // namespace solitonforge
