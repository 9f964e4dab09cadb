#pragma once

#include <Eigen/Core>
#include <vector>

#include "dfmpc/params.hpp"

namespace dfmpc {

/// Build the move-blocking interpolation matrix R for a horizon of N sampling
/// instants and nu control inputs, given the free instants Ifree (numbered
/// from 1, strictly increasing, within [1, N]). The stacked control profile is
/// R * p where p stacks the free values input block by input block; instants
/// between two free instants interpolate linearly, instants before the first
/// free instant copy it and instants after the last free instant copy the
/// last. Shape: (N*nu) x (|Ifree|*nu); every row sums to 1.
Eigen::MatrixXd compute_R(const std::vector<int>& ifree, int N, int nu);

/// Evaluate the interpolation parametrization: reads the matrix stored under
/// "R" in uparam.extra and returns the Np x nu profile obtained by reshaping
/// R * p column-major.
Eigen::MatrixXd profile_from_R(const Eigen::VectorXd& p, const OdeParams& ode,
                               const ProfileParams& uparam);

/// Cyclic block parametrization for periodic treatment/rest scheduling.
/// uparam.extra must contain N1 (length of the active block in sampling
/// periods) and index (current phase, in [1, Np]). The decision vector p
/// (length nu*N1, column-major nu x N1 blocks) fills an nu x Np staging
/// matrix: at index 1 the active block occupies instants 1..N1; as index
/// advances the block shifts left and wraps to the tail of the horizon;
/// for index > N1 the horizon starts with rest instants and the whole block
/// sits at instants Np-index+2 .. Np-index+N1+1. All other instants are
/// exactly zero. Returns the Np x nu profile (staging matrix transposed).
Eigen::MatrixXd cyclic_block_profile(const Eigen::VectorXd& p, const OdeParams& ode,
                                     const ProfileParams& uparam);

}  // namespace dfmpc
