#include "koopmem/similarity.hpp"

#include <limits>

namespace koopmem {

std::vector<int> linear_sum_assignment(const Eigen::MatrixXd& cost) {
    if (cost.rows() != cost.cols()) throw Error("linear_sum_assignment: cost matrix must be square");
    const int n = static_cast<int>(cost.rows());
    if (n == 0) return {};
    if (!cost.allFinite()) throw Error("linear_sum_assignment: non-finite cost");

    constexpr double inf = std::numeric_limits<double>::infinity();
    // 1-based potentials; column 0 is a virtual source.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> owner(n + 1, 0), way(n + 1, 0);

    for (int row = 1; row <= n; ++row) {
        owner[0] = row;
        int col0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[col0] = 1;
            const int r = owner[col0];
            double delta = inf;
            int col1 = 0;
            for (int c = 1; c <= n; ++c) {
                if (used[c]) continue;
                const double cur = cost(r - 1, c - 1) - u[r] - v[c];
                if (cur < minv[c]) {
                    minv[c] = cur;
                    way[c] = col0;
                }
                if (minv[c] < delta) {
                    delta = minv[c];
                    col1 = c;
                }
            }
            for (int c = 0; c <= n; ++c) {
                if (used[c]) {
                    u[owner[c]] += delta;
                    v[c] -= delta;
                } else {
                    minv[c] -= delta;
                }
            }
            col0 = col1;
        } while (owner[col0] != 0);
        // augment along the alternating path
        do {
            const int col1 = way[col0];
            owner[col0] = owner[col1];
            col0 = col1;
        } while (col0 != 0);
    }

    std::vector<int> assignment(n, -1);
    for (int c = 1; c <= n; ++c) assignment[owner[c] - 1] = c - 1;
    return assignment;
}

double wasserstein1(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    if (a.size() != b.size())
        throw Error("wasserstein1: eigenvalue sets differ in size (" + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()) + ")");
    const auto n = a.size();
    if (n == 0) return 0.0;
    Eigen::MatrixXd cost(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) cost(i, j) = std::abs(a(i) - b(j));
    const auto assignment = linear_sum_assignment(cost);
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) total += cost(i, assignment[static_cast<std::size_t>(i)]);
    return total / static_cast<double>(n);
}

double mode_distance(const Eigen::MatrixXcd& va, const Eigen::MatrixXcd& vb) {
    if (va.rows() != vb.rows() || va.cols() != vb.cols()) throw Error("mode_distance: shape mismatch");
    const double denom = va.norm() + vb.norm();
    if (denom == 0.0) return 0.0;
    return std::min(1.0, (va - vb).norm() / denom);
}

SignatureDistance signature_distance(const SpectralSignature& a, const SpectralSignature& b) {
    if (a.fallback || b.fallback) throw Error("signature_distance: fallback signature is not comparable");
    SignatureDistance d;
    d.d_lambda = wasserstein1(a.eigenvalues, b.eigenvalues);
    d.d_v = mode_distance(a.scaled_modes, b.scaled_modes);
    d.combined = d.d_lambda + d.d_v;
    return d;
}

}  // namespace koopmem
