#include "monoper/matrix_exponential.hpp"

#include "monoper/errors.hpp"

#include <array>
#include <cmath>

namespace monoper {

namespace {

// Pade(13) coefficients and the 1-norm bound below which no scaling is
// needed for double precision.
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};
constexpr double kTheta13 = 5.371920351148152;

double one_norm(const Eigen::MatrixXd& x) {
    return x.size() == 0 ? 0.0 : x.cwiseAbs().colwise().sum().maxCoeff();
}

}  // namespace

Eigen::MatrixXd expm(const Eigen::Ref<const Eigen::MatrixXd>& x) {
    if (x.rows() != x.cols()) throw DimensionError("expm: matrix must be square");
    if (!x.allFinite()) throw NumericalError("expm: non-finite input");
    const Eigen::Index n = x.rows();
    if (n == 0) return Eigen::MatrixXd(0, 0);

    const double norm = one_norm(x);
    int squarings = 0;
    if (norm > kTheta13) squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
    const Eigen::MatrixXd a = x / std::ldexp(1.0, squarings);

    const auto& b = kPade13;
    const Eigen::MatrixXd ident = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd a2 = a * a;
    const Eigen::MatrixXd a4 = a2 * a2;
    const Eigen::MatrixXd a6 = a4 * a2;

    const Eigen::MatrixXd u_inner = b[13] * a6 + b[11] * a4 + b[9] * a2;
    const Eigen::MatrixXd u = a * (a6 * u_inner + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident);
    const Eigen::MatrixXd v_inner = b[12] * a6 + b[10] * a4 + b[8] * a2;
    const Eigen::MatrixXd v = a6 * v_inner + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;

    Eigen::MatrixXd r = (v - u).partialPivLu().solve(v + u);
    for (int k = 0; k < squarings; ++k) r = r * r;
    if (!r.allFinite()) throw NumericalError("expm: overflow during squaring");
    return r;
}

PhiFunctions phi_functions(const Eigen::Ref<const Eigen::MatrixXd>& x) {
    if (x.rows() != x.cols()) throw DimensionError("phi_functions: matrix must be square");
    const Eigen::Index n = x.rows();
    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(3 * n, 3 * n);
    block.topLeftCorner(n, n) = x;
    block.block(0, n, n, n).setIdentity();
    block.block(n, 2 * n, n, n).setIdentity();
    const Eigen::MatrixXd e = expm(block);
    return {e.topLeftCorner(n, n), e.block(0, n, n, n), e.block(0, 2 * n, n, n)};
}

}  // namespace monoper
