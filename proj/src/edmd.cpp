#include "koopmem/edmd.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace koopmem {

namespace {

template <typename Matrix>
Matrix pinv_impl(const Matrix& m, double rel_tol) {
    Matrix out = Matrix::Zero(m.cols(), m.rows());
    if (m.size() == 0) return out;
    Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return out;
    const double cutoff = rel_tol * s(0);
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) <= cutoff) break;
        out += svd.matrixV().col(i) * (1.0 / s(i)) * svd.matrixU().col(i).adjoint();
    }
    return out;
}

}  // namespace

Eigen::MatrixXcd pseudoinverse(const Eigen::MatrixXcd& m, double rel_tol) { return pinv_impl(m, rel_tol); }
Eigen::MatrixXd pseudoinverse(const Eigen::MatrixXd& m, double rel_tol) { return pinv_impl(m, rel_tol); }

std::vector<int> KoopmanModel::accepted(double residual_tol) const {
    std::vector<int> out;
    if (!decomposed) return out;
    for (Eigen::Index i = 0; i < residuals.size(); ++i)
        if (residuals(i) <= residual_tol) out.push_back(static_cast<int>(i));
    return out;
}

KoopmanModel edmd_fit(const SnapshotPair& pair, const Dictionary& dict, const EdmdOptions& opts) {
    const auto m = pair.x.cols();
    if (m < 1) throw Error("edmd_fit: window must hold at least one snapshot");
    if (pair.x.rows() != dict.state_dim() || pair.y.rows() != dict.state_dim())
        throw Error("edmd_fit: state dimension does not match dictionary");
    if (pair.y.cols() != m) throw Error("edmd_fit: X and Y shapes differ");

    const Eigen::MatrixXd psi_x = dict.lift_columns(pair.x);  // l x m, one lifted state per column
    const Eigen::MatrixXd psi_y = dict.lift_columns(pair.y);
    const auto l = psi_x.rows();

    // Gram matrices with lifted states as row vectors: G = 1/m sum psi(x)^* psi(x).
    const Eigen::MatrixXcd px = psi_x.cast<cplx>();
    const Eigen::MatrixXcd py = psi_y.cast<cplx>();
    const Eigen::MatrixXcd g = px.conjugate() * px.transpose() / static_cast<double>(m);
    const Eigen::MatrixXcd a = px.conjugate() * py.transpose() / static_cast<double>(m);

    // G^+ A advances row vectors; its transpose advances columns.
    KoopmanModel model;
    model.k = (pseudoinverse(g, opts.rel_tol) * a).transpose();

    const int d = dict.state_dim();
    if (dict.include_identity()) {
        model.state_readout = Eigen::MatrixXcd::Zero(d, l);
        model.state_readout.middleCols(dict.identity_offset(), d).setIdentity();
    } else {
        model.state_readout = pair.x.cast<cplx>() * pseudoinverse(px, opts.rel_tol);
    }

    if (!model.k.allFinite()) return model;

    // Data are real, so the operator is real up to rounding; the real solver
    // returns exact conjugate pairs.
    const Eigen::MatrixXd k_real = model.k.real();
    Eigen::EigenSolver<Eigen::MatrixXd> es(k_real, true);
    if (es.info() != Eigen::Success) return model;
    model.eigenvalues = es.eigenvalues();
    model.right_eigenvectors = es.eigenvectors();
    if (!model.eigenvalues.allFinite() || !model.right_eigenvectors.allFinite()) return model;

    const double scale = std::max(1.0, model.k.norm());
    model.residuals.resize(l);
    for (Eigen::Index i = 0; i < l; ++i) {
        auto v = model.right_eigenvectors.col(i);
        const double vn = v.norm();
        if (vn > 0.0) v /= vn;
        model.residuals(i) = (model.k * v - model.eigenvalues(i) * v).norm() / scale;
    }
    model.decomposed = true;
    return model;
}

bool canonical_less(const cplx& a, const cplx& b) {
    const double ma = std::abs(a);
    const double mb = std::abs(b);
    if (ma != mb) return ma > mb;
    const double aa = std::arg(a);
    const double ab = std::arg(b);
    if (aa != ab) return aa < ab;
    return a.imag() < b.imag();
}

SpectralSignature fallback_signature(int n_keep, int state_dim) {
    SpectralSignature sig;
    sig.eigenvalues = Eigen::VectorXcd::Zero(n_keep);
    sig.scaled_modes = Eigen::MatrixXcd::Zero(n_keep, state_dim);
    sig.fallback = true;
    return sig;
}

SpectralSignature extract_signature(const KoopmanModel& model, const Eigen::VectorXd& current_lifted,
                                    const EmbeddedState& current_state, int n_keep,
                                    const EdmdOptions& opts) {
    if (n_keep < 1) throw Error("extract_signature: n_keep must be >= 1");
    const auto d = static_cast<int>(model.state_readout.rows());
    if (current_state.size() != d) throw Error("extract_signature: state dimension mismatch");
    if (!model.decomposed) return fallback_signature(n_keep, d);
    if (current_lifted.size() != model.k.rows()) throw Error("extract_signature: lifted dimension mismatch");

    const Eigen::VectorXcd psi = current_lifted.cast<cplx>();
    const Eigen::VectorXcd amp = pseudoinverse(model.right_eigenvectors, opts.rel_tol) * psi;
    const double psi_norm = std::max(psi.norm(), 1e-300);

    SpectralSignature sig;
    sig.amplitude_residual = (model.right_eigenvectors * amp - psi).norm() / psi_norm;

    const auto candidates = model.accepted(opts.residual_tol);
    const auto n = static_cast<Eigen::Index>(model.eigenvalues.size());
    Eigen::VectorXd weight = Eigen::VectorXd::Constant(n, -1.0);
    for (int i : candidates) weight(i) = std::abs(amp(i) * model.eigenvalues(i));
    // conjugate partners share the larger weight so truncation keeps pairs together
    for (int i : candidates) {
        if (model.eigenvalues(i).imag() == 0.0) continue;
        for (int j : candidates)
            if (j != i && model.eigenvalues(j) == std::conj(model.eigenvalues(i)))
                weight(i) = weight(j) = std::max(weight(i), weight(j));
    }

    std::vector<int> order = candidates;
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
        if (weight(i) != weight(j)) return weight(i) > weight(j);
        return canonical_less(model.eigenvalues(i), model.eigenvalues(j));
    });
    if (static_cast<int>(order.size()) > n_keep) order.resize(static_cast<std::size_t>(n_keep));
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return canonical_less(model.eigenvalues(i), model.eigenvalues(j)); });

    sig.eigenvalues = Eigen::VectorXcd::Zero(n_keep);
    sig.scaled_modes = Eigen::MatrixXcd::Zero(n_keep, d);
    for (std::size_t r = 0; r < order.size(); ++r) {
        const int i = order[r];
        const auto row = static_cast<Eigen::Index>(r);
        sig.eigenvalues(row) = model.eigenvalues(i);
        sig.scaled_modes.row(row) = (amp(i) * (model.state_readout * model.right_eigenvectors.col(i))).transpose();
    }
    return sig;
}

SlidingPrediction predict_sliding(const SpectralSignature& sig, int delta, double magnitude_cap) {
    if (delta < 1) throw Error("predict_sliding: delta must be >= 1");
    const int last = sig.state_dim() - 1;
    cplx sum{0.0, 0.0};
    for (int i = 0; i < sig.n_keep(); ++i) {
        cplx p{1.0, 0.0};
        for (int s = 0; s < delta; ++s) p *= sig.eigenvalues(i);
        sum += p * sig.scaled_modes(i, last);
    }
    SlidingPrediction out;
    out.value = sum.real();
    out.imag_residual = std::abs(sum.imag());
    if (!std::isfinite(out.value) || std::abs(out.value) > magnitude_cap) {
        out.overflow = true;
        out.value = std::signbit(out.value) ? -magnitude_cap : magnitude_cap;
    }
    return out;
}

}  // namespace koopmem
