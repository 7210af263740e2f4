// SPDX-License-Identifier: Apache-2.0
//
// Cascaded BS -> RIS -> MS channel, SVD transceiver beamformers and the
// log-det achievable rate.
//
// Rank note: with G = rank(He), the Jensen bound below is tight only when
// N_s = G = 1; no routine here needs G explicitly.
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "nris/errors.hpp"
#include "nris/types.hpp"

namespace nris {

/// RIS phases together with the reflection vector theta_n = mu * exp(j phi_n).
struct ReflectionState {
    RVector phases_rad;
    double mean_amplitude = 0.0;
    CVector theta;
};

inline ReflectionState make_reflection_state(const RVector& phases_rad, double mean_amplitude) {
    ReflectionState s;
    s.phases_rad = phases_rad;
    s.mean_amplitude = mean_amplitude;
    s.theta.resize(phases_rad.size());
    for (Eigen::Index n = 0; n < phases_rad.size(); ++n)
        s.theta(n) = std::polar(mean_amplitude, phases_rad(n));
    return s;
}

/// He = H2 diag(theta) H1, (N_MS x N_RIS)(N_RIS x N_RIS)(N_RIS x N_BS).
inline CMatrix cascaded_channel(const CMatrix& h1, const CMatrix& h2, const CVector& theta) {
    if (h2.cols() != h1.rows() || theta.size() != h1.rows())
        throw UsageError("cascaded_channel: dimension mismatch (H2 " + std::to_string(h2.rows()) + "x" +
                         std::to_string(h2.cols()) + ", theta " + std::to_string(theta.size()) +
                         ", H1 " + std::to_string(h1.rows()) + "x" + std::to_string(h1.cols()) + ")");
    return h2 * theta.asDiagonal() * h1;
}

inline CMatrix cascaded_channel(const CMatrix& h1, const CMatrix& h2, const ReflectionState& state) {
    return cascaded_channel(h1, h2, state.theta);
}

/// Precoder F = V1 and combiner W = U1 (first N_s right/left singular vectors).
struct BeamformerPair {
    CMatrix precoder;         // N_BS x N_s
    CMatrix combiner;         // N_MS x N_s
    int n_streams = 0;
    RVector singular_values;  // all min(N_MS, N_BS) values, decreasing
};

inline BeamformerPair svd_beamformers(const CMatrix& he, int n_streams) {
    const auto min_dim = std::min(he.rows(), he.cols());
    if (n_streams < 1 || n_streams > min_dim)
        throw UsageError("svd_beamformers: n_streams = " + std::to_string(n_streams) +
                         " must lie in [1, " + std::to_string(min_dim) + "]");
    Eigen::BDCSVD<CMatrix> svd(he, Eigen::ComputeThinU | Eigen::ComputeThinV);
    BeamformerPair pair;
    pair.n_streams = n_streams;
    pair.precoder = svd.matrixV().leftCols(n_streams);
    pair.combiner = svd.matrixU().leftCols(n_streams);
    pair.singular_values = svd.singularValues();
    return pair;
}

/// sum_k log2(1 + snr / N_s * sigma_k^2) over the first N_s singular values.
inline double rate_from_singular_values(const RVector& singular_values, double snr_linear,
                                        int n_streams) {
    double r = 0.0;
    const double scale = snr_linear / n_streams;
    for (int k = 0; k < n_streams && k < singular_values.size(); ++k)
        r += std::log2(1.0 + scale * singular_values(k) * singular_values(k));
    return r;
}

/// Rate in bit/s/Hz for equal power over N_s streams and unit noise variance:
///   log2 | I + snr / N_s (W^H W)^-1 W^H He F F^H He^H W |
inline double achievable_rate(const CMatrix& he, const BeamformerPair& pair, double snr_linear,
                              int n_streams) {
    if (!(snr_linear >= 0.0)) throw UsageError("achievable_rate: snr must be >= 0");
    const CMatrix& f = pair.precoder;
    const CMatrix& w = pair.combiner;
    if (f.cols() != n_streams || w.cols() != n_streams || f.rows() != he.cols() ||
        w.rows() != he.rows())
        throw UsageError("achievable_rate: beamformer dimensions do not match He / n_streams");

    const CMatrix gram = w.adjoint() * w;
    Eigen::FullPivLU<CMatrix> gram_lu(gram);
    if (!gram_lu.isInvertible() || gram_lu.rcond() < 1e-12)
        throw NumericalError("achievable_rate: W^H W is singular (rcond = " +
                             std::to_string(gram_lu.rcond()) + ")");

    const CMatrix heff = w.adjoint() * he * f;  // N_s x N_s
    const CMatrix m = CMatrix::Identity(n_streams, n_streams) +
                      (snr_linear / n_streams) * gram_lu.solve(heff * heff.adjoint());
    Eigen::PartialPivLU<CMatrix> lu(m);
    const CMatrix& packed = lu.matrixLU();
    double log2_det = 0.0;
    for (int k = 0; k < n_streams; ++k) log2_det += std::log2(std::abs(packed(k, k)));
    if (!std::isfinite(log2_det)) throw NumericalError("achievable_rate: non-finite log-det");
    return log2_det;
}

/// N_s log2(1 + snr / N_s * tr(He He^H)); dominates achievable_rate.
inline double jensen_upper_bound(const CMatrix& he, double snr_linear, int n_streams) {
    return n_streams * std::log2(1.0 + snr_linear / n_streams * he.squaredNorm());
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace nris
