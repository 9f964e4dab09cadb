#include "dfmpc/parametrization.hpp"

#include <string>

#include "dfmpc/errors.hpp"

namespace dfmpc {

Eigen::MatrixXd compute_R(const std::vector<int>& ifree, int N, int nu) {
  if (N < 1) throw DimensionError("compute_R: N must be >= 1");
  if (nu < 1) throw DimensionError("compute_R: nu must be >= 1");
  if (ifree.empty()) throw DimensionError("compute_R: Ifree must not be empty");
  for (std::size_t j = 0; j < ifree.size(); ++j) {
    if (ifree[j] < 1 || ifree[j] > N) {
      throw DimensionError("compute_R: Ifree entries must lie in [1, N]");
    }
    if (j > 0 && ifree[j] <= ifree[j - 1]) {
      throw DimensionError("compute_R: Ifree must be strictly increasing");
    }
  }

  const int m = static_cast<int>(ifree.size());
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(N, m);
  for (int k = 1; k <= N; ++k) {
    if (k <= ifree.front()) {
      W(k - 1, 0) = 1.0;
    } else if (k >= ifree.back()) {
      W(k - 1, m - 1) = 1.0;
    } else {
      int j = 0;
      while (ifree[j + 1] < k) ++j;
      if (ifree[j] == k) {
        W(k - 1, j) = 1.0;
      } else {
        double lambda = static_cast<double>(k - ifree[j]) /
                        static_cast<double>(ifree[j + 1] - ifree[j]);
        W(k - 1, j) = 1.0 - lambda;
        W(k - 1, j + 1) = lambda;
      }
    }
  }

  if (nu == 1) return W;
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(N) * nu,
                                            static_cast<Eigen::Index>(m) * nu);
  for (int b = 0; b < nu; ++b) {
    R.block(static_cast<Eigen::Index>(b) * N, static_cast<Eigen::Index>(b) * m, N, m) = W;
  }
  return R;
}

Eigen::MatrixXd profile_from_R(const Eigen::VectorXd& p, const OdeParams& /*ode*/,
                               const ProfileParams& uparam) {
  const Eigen::MatrixXd& R = uparam.extra.matrix("R");
  if (R.cols() != p.size()) {
    throw DimensionError("profile_from_R: R has " + std::to_string(R.cols()) +
                         " columns but p has length " + std::to_string(p.size()));
  }
  if (R.rows() != static_cast<Eigen::Index>(uparam.Np) * uparam.nu) {
    throw DimensionError("profile_from_R: R has " + std::to_string(R.rows()) +
                         " rows, expected Np*nu = " +
                         std::to_string(static_cast<long long>(uparam.Np) * uparam.nu));
  }
  Eigen::VectorXd stacked = R * p;
  return Eigen::Map<const Eigen::MatrixXd>(stacked.data(), uparam.Np, uparam.nu);
}

Eigen::MatrixXd cyclic_block_profile(const Eigen::VectorXd& p, const OdeParams& /*ode*/,
                                     const ProfileParams& uparam) {
  const int N = uparam.Np;
  const int nu = uparam.nu;
  const int N1 = static_cast<int>(uparam.extra.integer("N1"));
  const int idx = static_cast<int>(uparam.extra.integer("index"));
  if (N1 < 1 || N1 > N) {
    throw DimensionError("cyclic_block_profile: N1 must lie in [1, Np]");
  }
  if (idx < 1 || idx > N) {
    throw DimensionError("cyclic_block_profile: index must lie in [1, Np], observed " +
                         std::to_string(idx));
  }
  if (p.size() != static_cast<Eigen::Index>(nu) * N1) {
    throw DimensionError("cyclic_block_profile: p has length " +
                         std::to_string(p.size()) + ", expected nu*N1 = " +
                         std::to_string(static_cast<long long>(nu) * N1));
  }

  Eigen::Map<const Eigen::MatrixXd> P(p.data(), nu, N1);
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(nu, N);
  if (idx == 1) {
    S.leftCols(N1) = P;
  } else if (idx <= N1) {
    const int head = N1 - idx + 1;
    S.leftCols(head) = P.leftCols(head);
    S.middleCols(N - idx + 1, idx - 1) = P.rightCols(idx - 1);
  } else {
    S.middleCols(N - idx + 1, N1) = P;
  }
  return S.transpose();
}

}  // namespace dfmpc
