#pragma once

#include "koopmem/series.hpp"

#include <span>

namespace koopmem {

struct DictionaryOptions {
    int n_rbf = 10;
    double sigma_floor = 1e-8;
    bool include_identity = true;
};

/// Gaussian radial basis observables plus (optionally) the identity
/// coordinates of the embedded state, in that order.
class Dictionary {
public:
    Dictionary(Eigen::MatrixXd centers, double sigma, bool include_identity);

    /// [rbf_1(x), ..., rbf_n(x), x_0, ..., x_d]
    Eigen::VectorXd lift(const EmbeddedState& state) const;
    /// Lifts every column of `states`.
    Eigen::MatrixXd lift_columns(const Eigen::MatrixXd& states) const;

    const Eigen::MatrixXd& centers() const { return centers_; }  ///< one center per column
    double sigma() const { return sigma_; }
    bool include_identity() const { return include_identity_; }
    int n_rbf() const { return static_cast<int>(centers_.cols()); }
    int state_dim() const { return static_cast<int>(centers_.rows()); }
    int lifted_dim() const { return n_rbf() + (include_identity_ ? state_dim() : 0); }
    /// Row offset of the identity block inside a lifted vector.
    int identity_offset() const { return n_rbf(); }

private:
    Eigen::MatrixXd centers_;
    double sigma_;
    bool include_identity_;
};

/// Builds the per-window dictionary: `n_rbf` centers evenly spaced on
/// [min, max] of the window's raw values, each center isotropic across the
/// n_delays+1 embedding coordinates, and sigma = max |value| (floored).
Dictionary build_dictionary(std::span<const double> window_raw, int n_delays,
                            const DictionaryOptions& opts = {});

}  // namespace koopmem
