#include "monoper/hypotheses.hpp"

#include "monoper/errors.hpp"

#include <algorithm>
#include <random>

namespace monoper {

namespace {

struct OrderedSample {
    Eigen::Index node = 0;
    Eigen::VectorXd x1, x2, y1, y2;
};

// Draws v0(t) <= x1 <= x2 <= w0(t) and the delayed analogue at a random
// node. A quarter of the draws pin x2 = x1 and another quarter y2 = y1 so
// that one-variable monotonicity failures are hit directly.
class OrderedSampler {
public:
    OrderedSampler(const DelayedProblem& p, std::uint64_t seed)
        : p_(p),
          lower_delayed_(p.lower().lagged(p.delay())),
          upper_delayed_(p.upper().lagged(p.delay())),
          rng_(seed) {}

    OrderedSample draw() {
        std::uniform_int_distribution<Eigen::Index> pick(0, p_.nodes() - 1);
        std::uniform_int_distribution<int> mode(0, 3);
        OrderedSample s;
        s.node = pick(rng_);
        const int m = mode(rng_);
        ordered_pair(p_.lower().at(s.node), p_.upper().at(s.node), m == 1, s.x1, s.x2);
        ordered_pair(lower_delayed_.at(s.node), upper_delayed_.at(s.node), m == 2, s.y1, s.y2);
        return s;
    }

private:
    void ordered_pair(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, bool equal,
                      Eigen::VectorXd& a, Eigen::VectorXd& b) {
        a.resize(lo.size());
        b.resize(lo.size());
        for (Eigen::Index c = 0; c < lo.size(); ++c) {
            a(c) = lo(c) + unit_(rng_) * (hi(c) - lo(c));
            b(c) = equal ? a(c) : a(c) + unit_(rng_) * (hi(c) - a(c));
        }
    }

    const DelayedProblem& p_;
    PeriodicGridFunction lower_delayed_;
    PeriodicGridFunction upper_delayed_;
    std::mt19937_64 rng_;
    std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

double roundoff_allowance(const Eigen::VectorXd& f1, const Eigen::VectorXd& f2,
                          const OrderedSample& s, double coefficients) {
    const double scale = std::max({f1.cwiseAbs().maxCoeff(), f2.cwiseAbs().maxCoeff(),
                                   coefficients * s.x2.cwiseAbs().maxCoeff(),
                                   coefficients * s.y2.cwiseAbs().maxCoeff()});
    return 1e-10 * (1.0 + scale);
}

// Samples ordered quadruples and evaluates `margin` (expected >= 0 entrywise).
template <typename Margin>
HypothesisResult sample_inequality(const DelayedProblem& p, int samples, std::uint64_t seed,
                                   double coefficients, Margin margin) {
    OrderedSampler sampler(p, seed);
    HypothesisResult out;
    for (int k = 0; k < samples; ++k) {
        const OrderedSample s = sampler.draw();
        const double t = p.lower().time(s.node);
        const Eigen::VectorXd f1 = p.eval(t, s.x1, s.y1);
        const Eigen::VectorXd f2 = p.eval(t, s.x2, s.y2);
        const Eigen::VectorXd value = margin(f2 - f1, s.x2 - s.x1, s.y2 - s.y1);
        ++out.samples;
        Eigen::Index component = 0;
        const double worst = value.minCoeff(&component);
        if (worst < -roundoff_allowance(f1, f2, s, coefficients)) {
            out.ok = false;
            out.witness = Witness{s.node, t, component, s.x1, s.x2, s.y1, s.y2, -worst};
            return out;
        }
    }
    return out;
}

HypothesisResult check_H3(const DelayedProblem& p, double c1, int samples, std::uint64_t seed) {
    const PeriodicGridFunction& lo = p.lower();
    const PeriodicGridFunction& hi = p.upper();
    const Eigen::Index n = p.dimension();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    HypothesisResult out;

    for (int k = 0; k < samples; ++k) {
        Eigen::VectorXd a(n);
        Eigen::VectorXd b(n);
        for (Eigen::Index c = 0; c < n; ++c) {
            if (k == 0) {
                a(c) = 0.0;
                b(c) = 1.0;
            } else {
                const double r1 = unit(rng);
                const double r2 = unit(rng);
                a(c) = std::min(r1, r2);
                b(c) = std::max(r1, r2);
            }
        }
        PeriodicGridFunction u1 = lo;
        PeriodicGridFunction u2 = lo;
        const Eigen::MatrixXd width = hi.values() - lo.values();
        u1.values() += a.asDiagonal() * width;
        u2.values() += b.asDiagonal() * width;
        const PeriodicGridFunction u1_delayed = u1.lagged(p.delay());
        const PeriodicGridFunction u2_delayed = u2.lagged(p.delay());
        const Eigen::MatrixXd now = u2.values() - u1.values();
        const Eigen::MatrixXd before = u2_delayed.values() - u1_delayed.values();
        const Eigen::MatrixXd margin = now - c1 * before;
        ++out.samples;
        Eigen::Index component = 0;
        Eigen::Index node = 0;
        const double worst = margin.minCoeff(&component, &node);
        const double allowance = 1e-10 * (1.0 + hi.sup_norm() + lo.sup_norm());
        if (worst < -allowance) {
            out.ok = false;
            out.witness = Witness{node,           lo.time(node),          component,
                                  u1.at(node),    u2.at(node),            u1_delayed.at(node),
                                  u2_delayed.at(node), -worst};
            return out;
        }
    }
    return out;
}

}  // namespace

HypothesisResult check_H1(const DelayedProblem& p, int samples, std::uint64_t seed) {
    const double c = p.constants().C;
    return sample_inequality(p, samples, seed, c,
                             [c](const Eigen::VectorXd& df, const Eigen::VectorXd& dx,
                                 const Eigen::VectorXd&) -> Eigen::VectorXd { return df + c * dx; });
}

H345Result check_H3_H4_H5(const DelayedProblem& p, int samples, std::uint64_t seed) {
    const HypothesisConstants& k = p.constants();
    if (k.C3.value_or(0.0) > 0.0 && k.C1.value_or(0.0) <= 0.0) {
        throw ConstantsError("derived C undefined: C1 = 0 with C3 > 0");
    }
    H345Result out;
    if (k.C1) out.h3 = check_H3(p, *k.C1, samples, seed);
    if (k.uses_derived_shift()) {
        const double c2 = k.C2.value_or(0.0);
        const double c3 = k.C3.value_or(0.0);
        out.h4 = sample_inequality(p, samples, seed + 1, std::max(c2, c3),
                                   [c2, c3](const Eigen::VectorXd& df, const Eigen::VectorXd& dx,
                                            const Eigen::VectorXd& dy) -> Eigen::VectorXd {
                                       return df + c2 * dx + c3 * dy;
                                   });
    }
    if (k.L1 || k.L2) {
        const double l1 = k.L1.value_or(0.0);
        const double l2 = k.L2.value_or(0.0);
        out.h5 = sample_inequality(p, samples, seed + 2, std::max(l1, l2),
                                   [l1, l2](const Eigen::VectorXd& df, const Eigen::VectorXd& dx,
                                            const Eigen::VectorXd& dy) -> Eigen::VectorXd {
                                       return l1 * dx + l2 * dy - df;
                                   });
    }
    const bool h3_ok = !out.h3 || out.h3->ok;
    if (out.h4 && out.h4->ok && h3_ok && (k.C3.value_or(0.0) == 0.0 || out.h3)) {
        out.derived_C = k.derived_C();
    }
    return out;
}

}  // namespace monoper
