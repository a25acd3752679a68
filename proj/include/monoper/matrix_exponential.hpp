#pragma once

#include <Eigen/Dense>

namespace monoper {

/// Dense matrix exponential e^X by scaling and squaring with the
/// degree-13 diagonal Pade approximant (Higham 2005 parameters).
[[nodiscard]] Eigen::MatrixXd expm(const Eigen::Ref<const Eigen::MatrixXd>& x);

/// e^X together with the first two phi-functions
///   phi1(X) = sum_k X^k / (k+1)!,  phi2(X) = sum_k X^k / (k+2)!
/// read off the exponential of the augmented block matrix
///   [[X, I, 0], [0, 0, I], [0, 0, 0]].
struct PhiFunctions {
    Eigen::MatrixXd exp;
    Eigen::MatrixXd phi1;
    Eigen::MatrixXd phi2;
};
[[nodiscard]] PhiFunctions phi_functions(const Eigen::Ref<const Eigen::MatrixXd>& x);

}  // namespace monoper
