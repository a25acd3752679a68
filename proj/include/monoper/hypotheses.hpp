#pragma once

#include "monoper/problem.hpp"

#include <cstdint>
#include <optional>

namespace monoper {

// Sampled refuters for the structural hypotheses on F. A reported
// violation is a genuine counterexample; "ok" only means none was found
// among the samples drawn.

/// Counterexample to a sampled inequality.
struct Witness {
    Eigen::Index node = 0;
    double time = 0.0;
    Eigen::Index component = 0;
    Eigen::VectorXd x1, x2, y1, y2;
    /// How far the inequality missed (positive).
    double violation = 0.0;
};

struct HypothesisResult {
    bool ok = true;
    int samples = 0;
    std::optional<Witness> witness;
};

/// Samples v0(t) <= x1 <= x2 <= w0(t), v0(t-tau) <= y1 <= y2 <= w0(t-tau) at
/// random nodes and tests F(t,x2,y2) - F(t,x1,y1) >= -C (x2 - x1).
[[nodiscard]] HypothesisResult check_H1(const DelayedProblem& p, int samples,
                                        std::uint64_t seed);

struct H345Result {
    std::optional<HypothesisResult> h3;  // absent when C1 not given
    std::optional<HypothesisResult> h4;  // absent when C2, C3 not given
    std::optional<HypothesisResult> h5;  // absent when L1, L2 not given
    std::optional<double> derived_C;     // C2 + C3 / C1 when (H3) and (H4) pass

    [[nodiscard]] bool ok() const noexcept {
        return (!h3 || h3->ok) && (!h4 || h4->ok) && (!h5 || h5->ok);
    }
};

/// Sampled checks of (H3), (H4), (H5).
///
/// (H3) is tested on ordered pairs u1 = v0 + a (w0 - v0), u2 = v0 + b (w0 - v0)
/// with 0 <= a <= b <= 1 drawn per component and held fixed in time, plus
/// the pair (v0, w0) itself. Throws ConstantsError when C1 = 0 and C3 > 0.
[[nodiscard]] H345Result check_H3_H4_H5(const DelayedProblem& p, int samples,
                                        std::uint64_t seed);

}  // namespace monoper
