#include "koopmem/dictionary.hpp"

#include <algorithm>
#include <cmath>

namespace koopmem {

Dictionary::Dictionary(Eigen::MatrixXd centers, double sigma, bool include_identity)
    : centers_(std::move(centers)), sigma_(sigma), include_identity_(include_identity) {
    if (!(sigma_ > 0.0) || !std::isfinite(sigma_)) throw Error("dictionary: sigma must be finite and > 0");
    if (!centers_.allFinite()) throw Error("dictionary: centers must be finite");
    if (centers_.rows() < 1) throw Error("dictionary: state dimension must be >= 1");
    if (lifted_dim() < 1) throw Error("dictionary: lifted dimension must be >= 1");
}

Eigen::VectorXd Dictionary::lift(const EmbeddedState& state) const {
    if (state.size() != centers_.rows())
        throw Error("lift: state dimension " + std::to_string(state.size()) +
                    " does not match dictionary dimension " + std::to_string(centers_.rows()));
    Eigen::VectorXd out(lifted_dim());
    const double inv_two_var = 1.0 / (2.0 * sigma_ * sigma_);
    for (Eigen::Index j = 0; j < centers_.cols(); ++j)
        out(j) = std::exp(-(state - centers_.col(j)).squaredNorm() * inv_two_var);
    if (include_identity_) out.tail(state.size()) = state;
    return out;
}

Eigen::MatrixXd Dictionary::lift_columns(const Eigen::MatrixXd& states) const {
    Eigen::MatrixXd out(lifted_dim(), states.cols());
    for (Eigen::Index k = 0; k < states.cols(); ++k) out.col(k) = lift(states.col(k));
    return out;
}

Dictionary build_dictionary(std::span<const double> window_raw, int n_delays,
                            const DictionaryOptions& opts) {
    if (window_raw.empty()) throw Error("build_dictionary: empty window");
    if (opts.n_rbf < 1 && !opts.include_identity)
        throw Error("build_dictionary: n_rbf must be >= 1");
    if (opts.n_rbf < 0) throw Error("build_dictionary: n_rbf must be >= 0");
    if (n_delays < 0) throw Error("build_dictionary: n_delays must be >= 0");
    if (!std::all_of(window_raw.begin(), window_raw.end(), [](double v) { return std::isfinite(v); }))
        throw Error("build_dictionary: window contains non-finite values");

    const auto [lo_it, hi_it] = std::minmax_element(window_raw.begin(), window_raw.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    double sigma = 0.0;
    for (double v : window_raw) sigma = std::max(sigma, std::abs(v));
    sigma = std::max(sigma, opts.sigma_floor);

    Eigen::MatrixXd centers(n_delays + 1, opts.n_rbf);
    for (int j = 0; j < opts.n_rbf; ++j) {
        const double c = opts.n_rbf == 1
                             ? 0.5 * (lo + hi)
                             : lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(opts.n_rbf - 1);
        centers.col(j).setConstant(c);
    }
    return Dictionary(std::move(centers), sigma, opts.include_identity);
}

}  // namespace koopmem
